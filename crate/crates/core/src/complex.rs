//! Multi-strand complexes: pairings at whole-domain granularity.
//!
//! A complex is one physical molecule: a multiset of strands joined by
//! domain-level pairings. Partial hybridization (the two-base toehold
//! sequestering) is a flag on a pairing, not a sub-domain pairing.
//! Canonical identity is the lexicographically smallest serialization
//! over strand orderings, so structurally equal complexes compare equal
//! regardless of construction order.

use std::collections::BTreeMap;

use crate::domain::{Catalog, DomainKind, StrandId};
use crate::error::{Error, Result};

/// One end of a pairing: domain `domain` on the `strand`-th strand of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Site {
    pub strand: usize,
    pub domain: usize,
}

impl Site {
    pub fn new(strand: usize, domain: usize) -> Self {
        Self { strand, domain }
    }
}

/// A hybridized pair of domain instances.
///
/// `partial_bases` is `None` for a full duplex over the whole domain, or
/// `Some(n)` when only `n` bases at the junction are paired (the hairpin's
/// sequestered toeholds use `Some(2)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub a: Site,
    pub b: Site,
    pub partial_bases: Option<u8>,
}

impl Pairing {
    pub fn full(a: Site, b: Site) -> Self {
        Self { a, b, partial_bases: None }
    }

    pub fn partial(a: Site, b: Site, bases: u8) -> Self {
        Self { a, b, partial_bases: Some(bases) }
    }
}

/// A multi-strand complex. Single strands are complexes with no pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    pub strands: Vec<StrandId>,
    pub pairings: Vec<Pairing>,
}

impl Complex {
    pub fn single(strand: StrandId) -> Self {
        Self { strands: vec![strand], pairings: Vec::new() }
    }

    pub fn new(strands: Vec<StrandId>, pairings: Vec<Pairing>) -> Self {
        Self { strands, pairings }
    }

    /// Structural validation: pairings join declared complements, indices are
    /// in range, no domain is paired twice, and the pairing graph connects
    /// all strands into one molecule.
    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        let mut seen: BTreeMap<Site, ()> = BTreeMap::new();
        for p in &self.pairings {
            for site in [p.a, p.b] {
                let strand = self
                    .strands
                    .get(site.strand)
                    .ok_or_else(|| Error::Config(format!("pairing references strand index {}", site.strand)))?;
                let sdef = catalog.strand(*strand);
                if site.domain >= sdef.domains.len() {
                    return Err(Error::PairingOutOfRange {
                        strand: sdef.name.clone(),
                        index: site.domain,
                    });
                }
                if seen.insert(site, ()).is_some() {
                    let d = catalog.domain(sdef.domains[site.domain]);
                    return Err(Error::DoublePairing(d.name.clone()));
                }
            }
            let da = catalog.strand(self.strands[p.a.strand]).domains[p.a.domain];
            let db = catalog.strand(self.strands[p.b.strand]).domains[p.b.domain];
            match p.partial_bases {
                // A full pairing joins a domain to its declared complement.
                None => {
                    if !catalog.are_complements(da, db) {
                        return Err(Error::InvalidPairing {
                            a: catalog.domain(da).name.clone(),
                            b: catalog.domain(db).name.clone(),
                        });
                    }
                }
                // A partial pairing records deliberate sub-domain
                // complementarity between two toeholds (the sequestering
                // contact), so the domains need not be declared complements.
                Some(_) => {
                    let (ka, kb) = (catalog.domain(da).kind, catalog.domain(db).kind);
                    if ka != DomainKind::Toehold || kb != DomainKind::Toehold {
                        return Err(Error::InvalidPairing {
                            a: catalog.domain(da).name.clone(),
                            b: catalog.domain(db).name.clone(),
                        });
                    }
                }
            }
        }
        // Connectivity over strands via pairings (union-find).
        let n = self.strands.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for p in &self.pairings {
            let (ra, rb) = (find(&mut parent, p.a.strand), find(&mut parent, p.b.strand));
            parent[ra] = rb;
        }
        for i in 1..n {
            let (r0, ri) = (find(&mut parent, 0), find(&mut parent, i));
            if r0 != ri {
                let a = catalog.strand(self.strands[0]).name.clone();
                let b = catalog.strand(self.strands[i]).name.clone();
                return Err(Error::DisconnectedComplex(a, b));
            }
        }
        Ok(())
    }

    /// Multiset of constituent strand names, one count per copy.
    pub fn strand_census(&self, catalog: &Catalog) -> BTreeMap<String, usize> {
        let mut census = BTreeMap::new();
        for &s in &self.strands {
            *census.entry(catalog.strand(s).name.clone()).or_insert(0) += 1;
        }
        census
    }

    /// Whether the domain instance at `site` participates in any full pairing.
    pub fn is_fully_paired(&self, site: Site) -> bool {
        self.pairings
            .iter()
            .any(|p| p.partial_bases.is_none() && (p.a == site || p.b == site))
    }

    /// Bases sequestered at `site` by a partial pairing (0 if none).
    pub fn sequestered_bases(&self, site: Site) -> u8 {
        self.pairings
            .iter()
            .find(|p| p.partial_bases.is_some() && (p.a == site || p.b == site))
            .and_then(|p| p.partial_bases)
            .unwrap_or(0)
    }

    fn serialize_for_order(&self, catalog: &Catalog, order: &[usize]) -> String {
        // position of original strand index i in the permuted order
        let mut pos = vec![0usize; order.len()];
        for (new_idx, &old_idx) in order.iter().enumerate() {
            pos[old_idx] = new_idx;
        }
        let names: Vec<&str> = order
            .iter()
            .map(|&i| catalog.strand(self.strands[i]).name.as_str())
            .collect();
        let mut pairs: Vec<String> = self
            .pairings
            .iter()
            .map(|p| {
                let mut ends = [
                    (pos[p.a.strand], p.a.domain),
                    (pos[p.b.strand], p.b.domain),
                ];
                ends.sort_unstable();
                match p.partial_bases {
                    None => format!("{}:{}-{}:{}", ends[0].0, ends[0].1, ends[1].0, ends[1].1),
                    Some(n) => format!("{}:{}~{}~{}:{}", ends[0].0, ends[0].1, n, ends[1].0, ends[1].1),
                }
            })
            .collect();
        pairs.sort_unstable();
        format!("[{}]({})", names.join(","), pairs.join(";"))
    }

    /// Canonical structural key: lexicographically smallest serialization
    /// over strand orderings. Deterministic and permutation-invariant.
    pub fn canonical_key(&self, catalog: &Catalog) -> String {
        let n = self.strands.len();
        let mut best: Option<String> = None;
        let mut order: Vec<usize> = (0..n).collect();
        permute(&mut order, 0, &mut |perm| {
            let s = self.serialize_for_order(catalog, perm);
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        });
        best.expect("complex has at least one strand")
    }

    /// Canonical form: strands reordered into the ordering that realizes the
    /// canonical key, pairings remapped accordingly.
    pub fn canonicalize(&self, catalog: &Catalog) -> Result<Complex> {
        self.validate(catalog)?;
        let n = self.strands.len();
        let mut best: Option<(String, Vec<usize>)> = None;
        let mut order: Vec<usize> = (0..n).collect();
        permute(&mut order, 0, &mut |perm| {
            let s = self.serialize_for_order(catalog, perm);
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                best = Some((s, perm.to_vec()));
            }
        });
        let (_, order) = best.expect("complex has at least one strand");
        let mut pos = vec![0usize; n];
        for (new_idx, &old_idx) in order.iter().enumerate() {
            pos[old_idx] = new_idx;
        }
        let strands = order.iter().map(|&i| self.strands[i]).collect();
        let mut pairings: Vec<Pairing> = self
            .pairings
            .iter()
            .map(|p| {
                let mut a = Site::new(pos[p.a.strand], p.a.domain);
                let mut b = Site::new(pos[p.b.strand], p.b.domain);
                if b < a {
                    std::mem::swap(&mut a, &mut b);
                }
                Pairing { a, b, partial_bases: p.partial_bases }
            })
            .collect();
        pairings.sort_by_key(|p| (p.a, p.b));
        Ok(Complex { strands, pairings })
    }
}

fn permute<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, visit: &mut F) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Exposure classification of a single domain instance within a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteState {
    Unpaired,
    Partial(u8),
    Paired,
}

impl Complex {
    pub fn site_state(&self, site: Site) -> SiteState {
        if self.is_fully_paired(site) {
            SiteState::Paired
        } else {
            match self.sequestered_bases(site) {
                0 => SiteState::Unpaired,
                n => SiteState::Partial(n),
            }
        }
    }

    /// All unpaired toehold instances with their sequestering counts.
    pub fn exposed_toehold_sites(&self, catalog: &Catalog) -> Vec<(Site, u8)> {
        let mut out = Vec::new();
        for (si, &strand) in self.strands.iter().enumerate() {
            for (di, &dom) in catalog.strand(strand).domains.iter().enumerate() {
                if catalog.domain(dom).kind != DomainKind::Toehold {
                    continue;
                }
                let site = Site::new(si, di);
                match self.site_state(site) {
                    SiteState::Unpaired => out.push((site, 0)),
                    SiteState::Partial(n) => out.push((site, n)),
                    SiteState::Paired => {}
                }
            }
        }
        out
    }
}
