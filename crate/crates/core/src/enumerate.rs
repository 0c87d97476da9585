//! Domain-level rule engine for toehold-initiated strand displacement.
//!
//! Reactions initiate where two complexes expose complementary toeholds.
//! From the toehold junction a pairing front walks outward in both strand
//! directions: free complementary domains zip, a free domain facing a
//! paired one displaces the incumbent (domain-level branch migration), and
//! two paired domains stop the front (no four-way migration).
//!
//! Geometric viability rules, applied against the evolving pairing state:
//!
//! - a toehold flanked by duplexes on both sides is buried: it can neither
//!   initiate nor serve as the release point of an exchange;
//! - a displacing domain must sit on a single-stranded run that reaches a
//!   strand end (internal loops cannot invade);
//! - walks that only zip (no displacement) are not emitted as reactions;
//!   stable association of free strands is handled by a separate
//!   hybridization rule that requires a branch-length contact.
//!
//! Initiation through a partially sequestered toehold is tagged `hindered`
//! and runs at the leak rate.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Complex, Pairing, Site};
use crate::domain::{Catalog, DomainId, DomainKind, StrandId};
use crate::error::{Error, Result};
use crate::motif::UNIMOLECULAR_REFERENCE_M;
use crate::network::{Reaction, ReactionNetwork};

/// An unpaired toehold on a complex, with its sequestering count.
#[derive(Debug, Clone)]
pub struct ExposedToehold {
    pub strand_name: String,
    pub domain_name: String,
    pub site: Site,
    pub sequestered_bases: u8,
}

/// All exposed toeholds of a complex (unpaired or partially sequestered).
pub fn exposed_toeholds(c: &Complex, catalog: &Catalog) -> Vec<ExposedToehold> {
    c.exposed_toehold_sites(catalog)
        .into_iter()
        .map(|(site, seq)| {
            let strand = catalog.strand(c.strands[site.strand]);
            let domain = catalog.domain(strand.domains[site.domain]);
            ExposedToehold {
                strand_name: strand.name.clone(),
                domain_name: domain.name.clone(),
                site,
                sequestered_bases: seq,
            }
        })
        .collect()
}

/// Rate assignment and structural options for enumeration.
#[derive(Debug, Clone)]
pub struct EnumerationParams {
    pub k_t: f64,
    pub k_rep: f64,
    pub k_leak: f64,
    pub k_close: f64,
    pub collapse_reclosure: bool,
    /// Strand carrying the quencher; displacing it from a duplex is the
    /// reporting step and runs at `k_rep`.
    pub quencher_strand: Option<String>,
    /// Known species labels, keyed by structure.
    pub name_hints: Vec<(String, Complex)>,
}

impl EnumerationParams {
    pub fn from_motif(p: &crate::motif::MotifParams, catalog: &Catalog) -> Self {
        let hints = crate::motif::motif_species(catalog).expect("motif species");
        Self::with_hints(p, hints)
    }

    pub fn from_or(p: &crate::motif::MotifParams, catalog: &Catalog) -> Self {
        let hints = crate::motif::or_species(catalog).expect("or species");
        Self::with_hints(p, hints)
    }

    fn with_hints(p: &crate::motif::MotifParams, name_hints: Vec<(String, Complex)>) -> Self {
        Self {
            k_t: p.k_t,
            k_rep: p.k_rep,
            k_leak: p.k_leak,
            k_close: p.k_close,
            collapse_reclosure: p.collapse_reclosure,
            quencher_strand: Some("rep_top".to_string()),
            name_hints,
        }
    }
}

/// How a discovered reaction reverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReactionKind {
    /// No viable reverse path.
    Irreversible,
    /// Exchange: the incumbent left from a toehold that re-exposes; the
    /// reverse is the mirror-image bimolecular exchange.
    ReversibleDetached,
    /// The displaced segment stays tethered to the product and re-invades
    /// first-order (hairpin opening and closing).
    ReversibleTethered,
}

/// A reaction produced by the rule engine, in structural form.
#[derive(Debug, Clone)]
pub struct EnumeratedReaction {
    pub reactants: Vec<Complex>,
    pub products: Vec<Complex>,
    pub kind: ReactionKind,
    pub hindered: bool,
    /// Forward rate under the supplied params.
    pub rate: f64,
}

// ---------------------------------------------------------------------------
// Working state for a single bimolecular encounter.

struct Arena<'a> {
    catalog: &'a Catalog,
    strands: Vec<StrandId>,
    pairs: BTreeMap<Site, (Site, Option<u8>)>,
    /// Sites paired by the walk in progress. These belong to the advancing
    /// front and do not pin down the invading segment.
    walk_pairs: BTreeSet<Site>,
}

impl<'a> Arena<'a> {
    fn merge(catalog: &'a Catalog, a: &Complex, b: &Complex) -> Self {
        let mut strands = a.strands.clone();
        let offset = strands.len();
        strands.extend(b.strands.iter().copied());
        let mut pairs = BTreeMap::new();
        for (shift, complex) in [(0usize, a), (offset, b)] {
            for p in &complex.pairings {
                let sa = Site::new(p.a.strand + shift, p.a.domain);
                let sb = Site::new(p.b.strand + shift, p.b.domain);
                pairs.insert(sa, (sb, p.partial_bases));
                pairs.insert(sb, (sa, p.partial_bases));
            }
        }
        Self { catalog, strands, pairs, walk_pairs: BTreeSet::new() }
    }

    fn domain_at(&self, site: Site) -> DomainId {
        self.catalog.strand(self.strands[site.strand]).domains[site.domain]
    }

    fn strand_len(&self, strand: usize) -> usize {
        self.catalog.strand(self.strands[strand]).domains.len()
    }

    fn in_bounds(&self, strand: usize, domain: isize) -> bool {
        domain >= 0 && (domain as usize) < self.strand_len(strand)
    }

    fn fully_paired(&self, site: Site) -> bool {
        matches!(self.pairs.get(&site), Some((_, None)))
    }

    fn partner(&self, site: Site) -> Option<Site> {
        self.pairs.get(&site).map(|&(p, _)| p)
    }

    fn partial_at(&self, site: Site) -> Option<u8> {
        self.pairs.get(&site).and_then(|&(_, p)| p)
    }

    fn remove_pair(&mut self, site: Site) {
        if let Some((partner, _)) = self.pairs.remove(&site) {
            self.pairs.remove(&partner);
        }
    }

    fn add_pair(&mut self, a: Site, b: Site) {
        self.pairs.insert(a, (b, None));
        self.pairs.insert(b, (a, None));
        self.walk_pairs.insert(a);
        self.walk_pairs.insert(b);
    }

    /// Paired by something other than the walk in progress.
    fn anchored(&self, site: Site) -> bool {
        self.fully_paired(site) && !self.walk_pairs.contains(&site)
    }

    /// Drop any partial (sequestering) contact touching `site`.
    fn drop_partial(&mut self, site: Site) {
        if self.partial_at(site).is_some() {
            self.remove_pair(site);
        }
    }

    /// Whether a toehold is flanked by full duplexes on both sides.
    fn buried(&self, site: Site) -> bool {
        let before = site.domain.checked_sub(1).map(|d| Site::new(site.strand, d));
        let after = (site.domain + 1 < self.strand_len(site.strand))
            .then(|| Site::new(site.strand, site.domain + 1));
        let blocked =
            |s: Option<Site>| s.map(|s| self.fully_paired(s)).unwrap_or(false);
        blocked(before) && blocked(after)
    }

    /// Whether the run containing `site` reaches a strand end through
    /// domains not anchored by pre-existing pairings.
    fn run_touches_end(&self, site: Site) -> bool {
        let len = self.strand_len(site.strand);
        let mut d = site.domain;
        loop {
            if d == 0 {
                return true;
            }
            d -= 1;
            if self.anchored(Site::new(site.strand, d)) {
                break;
            }
        }
        let mut d = site.domain;
        loop {
            if d + 1 >= len {
                return true;
            }
            d += 1;
            if self.anchored(Site::new(site.strand, d)) {
                break;
            }
        }
        false
    }

    /// Connected components over strands (by full and partial pairings).
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.strands.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for (&a, &(b, _)) in &self.pairs {
            let (ra, rb) = (find(&mut parent, a.strand), find(&mut parent, b.strand));
            parent[ra] = rb;
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Extract the sub-complex over `members` (arena strand indices).
    fn extract(&self, members: &[usize]) -> Complex {
        let index: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut pairings = Vec::new();
        let mut seen = BTreeSet::new();
        for (&a, &(b, partial)) in &self.pairs {
            if !index.contains_key(&a.strand) {
                continue;
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !seen.insert(key) {
                continue;
            }
            pairings.push(Pairing {
                a: Site::new(index[&a.strand], a.domain),
                b: Site::new(index[&b.strand], b.domain),
                partial_bases: partial,
            });
        }
        Complex::new(members.iter().map(|&i| self.strands[i]).collect(), pairings)
    }
}

// ---------------------------------------------------------------------------
// Walk engine.

struct WalkOutcome {
    zips: usize,
    /// Sites that lost their pairing to the advancing front.
    displaced: Vec<Site>,
    /// Strands released by exchange completion.
    released: Vec<usize>,
}

/// Resting structure per strand: what an isolated strand folds back into.
type RestingForms = BTreeMap<StrandId, Complex>;

fn resting_forms(hints: &[(String, Complex)]) -> RestingForms {
    let mut forms: RestingForms = BTreeMap::new();
    for (_, complex) in hints {
        if complex.strands.len() != 1 {
            continue;
        }
        let id = complex.strands[0];
        let better = match forms.get(&id) {
            Some(existing) => complex.pairings.len() > existing.pairings.len(),
            None => true,
        };
        if better {
            forms.insert(id, complex.clone());
        }
    }
    forms
}

fn resting_for(forms: &RestingForms, strand: StrandId) -> Complex {
    forms.get(&strand).cloned().unwrap_or_else(|| Complex::single(strand))
}

/// Walk both fronts from an initiation junction. Returns `None` when the
/// encounter is not a viable reaction (toehold-only contact, pure zip,
/// constrained invader everywhere, or a buried exchange release).
fn run_walk(
    arena: &mut Arena<'_>,
    sa: Site,
    sb: Site,
) -> Option<WalkOutcome> {
    arena.drop_partial(sa);
    arena.drop_partial(sb);
    arena.add_pair(sa, sb);

    let mut zips = 0usize;
    let mut displaced: Vec<Site> = Vec::new();

    for dir in [1isize, -1] {
        let mut step = 1isize;
        loop {
            let da = sa.domain as isize + dir * step;
            let db = sb.domain as isize - dir * step;
            if !arena.in_bounds(sa.strand, da) || !arena.in_bounds(sb.strand, db) {
                break;
            }
            let xa = Site::new(sa.strand, da as usize);
            let xb = Site::new(sb.strand, db as usize);
            if arena.catalog.complement(arena.domain_at(xa)) != arena.domain_at(xb) {
                break;
            }
            match (arena.fully_paired(xa), arena.fully_paired(xb)) {
                (true, true) => break, // four-way junction: not migrated
                (false, false) => {
                    arena.drop_partial(xa);
                    arena.drop_partial(xb);
                    arena.add_pair(xa, xb);
                    zips += 1;
                }
                (true, false) => {
                    if !arena.run_touches_end(xb) {
                        break; // invader is trapped in an internal loop
                    }
                    let incumbent = arena.partner(xa).expect("paired site has partner");
                    arena.remove_pair(xa);
                    arena.drop_partial(xb);
                    arena.add_pair(xa, xb);
                    displaced.push(incumbent);
                }
                (false, true) => {
                    if !arena.run_touches_end(xa) {
                        break;
                    }
                    let incumbent = arena.partner(xb).expect("paired site has partner");
                    arena.remove_pair(xb);
                    arena.drop_partial(xa);
                    arena.add_pair(xa, xb);
                    displaced.push(incumbent);
                }
            }
            step += 1;
        }
    }

    if displaced.is_empty() {
        // Either a bare toehold contact or a zip-only association: transient.
        return None;
    }

    // Exchange completion: a displaced strand left holding only toehold
    // pairings dissociates, re-exposing those toeholds. A buried release
    // toehold has no room to complete the exchange; the walk is discarded.
    let mut released = Vec::new();
    let displaced_strands: BTreeSet<usize> = displaced.iter().map(|s| s.strand).collect();
    for &strand in &displaced_strands {
        let held: Vec<(Site, Site)> = arena
            .pairs
            .iter()
            .filter(|(site, _)| site.strand == strand)
            .map(|(&site, &(partner, _))| (site, partner))
            .collect();
        if held.is_empty() {
            continue;
        }
        let all_toeholds = held.iter().all(|&(site, partner)| {
            arena.catalog.domain(arena.domain_at(site)).kind == DomainKind::Toehold
                && partner.strand != strand
                && arena.catalog.domain(arena.domain_at(partner)).kind == DomainKind::Toehold
        });
        if !all_toeholds {
            continue;
        }
        for &(_, partner) in &held {
            if arena.buried(partner) {
                return None;
            }
        }
        for (site, _) in held {
            arena.remove_pair(site);
        }
        released.push(strand);
    }

    Some(WalkOutcome { zips, displaced, released })
}

/// Prune sequestering contacts that lost their enclosing stem: the partial
/// toehold contact only exists inside a closed loop.
fn prune_unenclosed_partials(arena: &mut Arena<'_>) {
    let partials: Vec<(Site, Site)> = arena
        .pairs
        .iter()
        .filter(|(_, (_, partial))| partial.is_some())
        .map(|(&a, &(b, _))| (a, b))
        .filter(|(a, b)| a < b)
        .collect();
    for (a, b) in partials {
        let enclosed = a.strand == b.strand
            && arena.pairs.iter().any(|(&x, &(y, partial))| {
                partial.is_none()
                    && x.strand == a.strand
                    && y.strand == a.strand
                    && x.domain < a.domain.min(b.domain)
                    && y.domain > a.domain.max(b.domain)
            });
        if !enclosed {
            arena.remove_pair(a);
        }
    }
}

/// Normalize a split-off component: isolated strands refold to their resting
/// form; with reclosure collapsed, a hairpin whose stem came free expels its
/// loop-bound partners as it closes.
fn normalize_component(
    component: Complex,
    catalog: &Catalog,
    forms: &RestingForms,
    collapse: bool,
) -> Vec<Complex> {
    if component.strands.len() == 1 && component.pairings.is_empty() {
        return vec![resting_for(forms, component.strands[0])];
    }
    if collapse {
        if let Some(parts) = try_reclose(&component, forms) {
            return parts
                .into_iter()
                .flat_map(|c| normalize_component(c, catalog, forms, collapse))
                .collect();
        }
    }
    vec![component]
}

/// If the component is a hairpin with a free stem holding passengers only on
/// its loop, closing the stem splits the passengers off. Returns the split
/// parts, or `None` when the rule does not apply.
fn try_reclose(component: &Complex, forms: &RestingForms) -> Option<Vec<Complex>> {
    if component.strands.len() < 2 {
        return None;
    }
    let mut hairpin: Option<usize> = None;
    for (idx, &strand) in component.strands.iter().enumerate() {
        let resting = resting_for(forms, strand);
        if resting.pairings.is_empty() {
            continue;
        }
        if hairpin.is_some() {
            return None;
        }
        hairpin = Some(idx);
        // every resting (stem) site must be free in the component
        for p in &resting.pairings {
            if p.partial_bases.is_some() {
                continue;
            }
            for site in [p.a, p.b] {
                let in_component = Site::new(idx, site.domain);
                let paired = component
                    .pairings
                    .iter()
                    .any(|cp| cp.partial_bases.is_none() && (cp.a == in_component || cp.b == in_component));
                if paired {
                    return None;
                }
            }
        }
    }
    let h = hairpin?;
    // all pairings must involve the hairpin strand
    if !component
        .pairings
        .iter()
        .all(|p| p.a.strand == h || p.b.strand == h)
    {
        return None;
    }
    // closing the stem expels the passengers
    let mut parts = vec![resting_for(forms, component.strands[h])];
    for (idx, &strand) in component.strands.iter().enumerate() {
        if idx != h {
            parts.push(Complex::single(strand));
        }
    }
    Some(parts)
}

/// Initiation sites: pairs of exposed, non-buried, complementary toeholds.
fn initiations(
    arena: &Arena<'_>,
    n_a_strands: usize,
) -> Vec<(Site, Site, bool)> {
    let mut out = Vec::new();
    let toehold_sites = |range: std::ops::Range<usize>| -> Vec<Site> {
        let mut sites = Vec::new();
        for strand in range {
            for domain in 0..arena.strand_len(strand) {
                let site = Site::new(strand, domain);
                if arena.catalog.domain(arena.domain_at(site)).kind != DomainKind::Toehold {
                    continue;
                }
                if arena.fully_paired(site) || arena.buried(site) {
                    continue;
                }
                sites.push(site);
            }
        }
        sites
    };
    let a_sites = toehold_sites(0..n_a_strands);
    let b_sites = toehold_sites(n_a_strands..arena.strands.len());
    for &sa in &a_sites {
        for &sb in &b_sites {
            if arena.catalog.complement(arena.domain_at(sa)) != arena.domain_at(sb) {
                continue;
            }
            let hindered =
                arena.partial_at(sa).is_some() || arena.partial_at(sb).is_some();
            out.push((sa, sb, hindered));
        }
    }
    out
}

/// Free-strand hybridization: two complexes with no pairings associate on a
/// maximal complementary run that includes at least one branch domain.
fn hybridizations(
    catalog: &Catalog,
    a: &Complex,
    b: &Complex,
) -> Vec<Complex> {
    if !(a.pairings.is_empty() && b.pairings.is_empty()) {
        return Vec::new();
    }
    if a.strands.len() != 1 || b.strands.len() != 1 {
        return Vec::new();
    }
    let da = &catalog.strand(a.strands[0]).domains;
    let db = &catalog.strand(b.strands[0]).domains;
    let mut products: Vec<Complex> = Vec::new();
    let mut seen_keys: BTreeSet<String> = BTreeSet::new();
    for i in 0..da.len() {
        for j in 0..db.len() {
            if catalog.complement(da[i]) != db[j] {
                continue;
            }
            // maximal antiparallel run through (i, j)
            let mut lo = 0usize;
            while i >= lo + 1
                && j + lo + 1 < db.len()
                && catalog.complement(da[i - lo - 1]) == db[j + lo + 1]
            {
                lo += 1;
            }
            let mut hi = 0usize;
            while i + hi + 1 < da.len()
                && j >= hi + 1
                && catalog.complement(da[i + hi + 1]) == db[j - hi - 1]
            {
                hi += 1;
            }
            let run: Vec<(usize, usize)> = ((i - lo)..=(i + hi))
                .map(|x| (x, j + i - x))
                .collect();
            let has_branch = run
                .iter()
                .any(|&(x, _)| catalog.domain(da[x]).kind == DomainKind::Branch);
            if !has_branch {
                continue;
            }
            let complex = Complex::new(
                vec![a.strands[0], b.strands[0]],
                run.iter()
                    .map(|&(x, y)| Pairing::full(Site::new(0, x), Site::new(1, y)))
                    .collect(),
            );
            let key = complex.canonical_key(catalog);
            if seen_keys.insert(key) {
                products.push(complex);
            }
        }
    }
    products
}

/// Enumerate every reaction available to an (unordered) pair of complexes.
pub fn enumerate_bimolecular(
    a: &Complex,
    b: &Complex,
    catalog: &Catalog,
    params: &EnumerationParams,
) -> Result<Vec<EnumeratedReaction>> {
    a.validate(catalog)?;
    b.validate(catalog)?;
    let forms = resting_forms(&params.name_hints);
    let mut out: Vec<EnumeratedReaction> = Vec::new();
    let mut seen: BTreeSet<(Vec<String>, Vec<String>)> = BTreeSet::new();

    let reactant_keys = {
        let mut keys = vec![a.canonical_key(catalog), b.canonical_key(catalog)];
        keys.sort();
        keys
    };

    let base = Arena::merge(catalog, a, b);
    for (sa, sb, hindered) in initiations(&base, a.strands.len()) {
        let mut arena = Arena::merge(catalog, a, b);
        let Some(outcome) = run_walk(&mut arena, sa, sb) else {
            continue;
        };
        prune_unenclosed_partials(&mut arena);
        let junction_strand = sa.strand;
        let components = arena.components();
        let junction_component: BTreeSet<usize> = components
            .iter()
            .find(|c| c.contains(&junction_strand))
            .expect("junction strand present")
            .iter()
            .copied()
            .collect();

        // classification
        let displaced_strands: BTreeSet<usize> =
            outcome.displaced.iter().map(|s| s.strand).collect();
        let kind = if hindered {
            ReactionKind::Irreversible
        } else if outcome.displaced.len() == 1 && outcome.zips == 0 {
            let incumbent = displaced_strands.iter().next().copied().unwrap();
            if outcome.released.contains(&incumbent) {
                ReactionKind::ReversibleDetached
            } else if junction_component.contains(&incumbent) {
                ReactionKind::ReversibleTethered
            } else {
                ReactionKind::Irreversible
            }
        } else {
            ReactionKind::Irreversible
        };

        // rate: leak for hindered walks, reporter rate when the quencher
        // strand is displaced off bare, universal rate otherwise
        let mut rate = if hindered { params.k_leak } else { params.k_t };
        if !hindered {
            if let Some(quencher) = &params.quencher_strand {
                let quencher_released_bare = components.iter().any(|comp| {
                    comp.len() == 1
                        && displaced_strands.contains(&comp[0])
                        && catalog.strand(arena.strands[comp[0]]).name == *quencher
                        && arena.pairs.keys().all(|s| s.strand != comp[0])
                });
                if quencher_released_bare {
                    rate = params.k_rep;
                }
            }
        }

        let mut products: Vec<Complex> = Vec::new();
        for comp in &components {
            let extracted = arena.extract(comp);
            products.extend(normalize_component(
                extracted,
                catalog,
                &forms,
                params.collapse_reclosure,
            ));
        }
        let products: Vec<Complex> = products
            .into_iter()
            .map(|c| c.canonicalize(catalog))
            .collect::<Result<_>>()?;

        let mut product_keys: Vec<String> =
            products.iter().map(|c| c.canonical_key(catalog)).collect();
        product_keys.sort();
        if product_keys == reactant_keys {
            continue; // walk undid itself
        }
        if seen.insert((reactant_keys.clone(), product_keys)) {
            out.push(EnumeratedReaction {
                reactants: vec![a.clone(), b.clone()],
                products,
                kind,
                hindered,
                rate,
            });
        }
    }

    for product in hybridizations(catalog, a, b) {
        let product = product.canonicalize(catalog)?;
        let mut product_keys = vec![product.canonical_key(catalog)];
        product_keys.sort();
        if seen.insert((reactant_keys.clone(), product_keys)) {
            out.push(EnumeratedReaction {
                reactants: vec![a.clone(), b.clone()],
                products: vec![product],
                kind: ReactionKind::Irreversible,
                hindered: false,
                rate: params.k_t,
            });
        }
    }

    Ok(out)
}

/// Fixed-point closure over a seed set: apply [`enumerate_bimolecular`] to
/// every species pair, register canonicalized products, repeat until no new
/// species appear. Deterministic regardless of seed order.
pub fn enumerate_network(
    seeds: &[(String, Complex)],
    max_species: usize,
    catalog: &Catalog,
    params: &EnumerationParams,
) -> Result<ReactionNetwork> {
    let mut net = ReactionNetwork::new(catalog.clone());
    let hint_labels: BTreeMap<String, String> = params
        .name_hints
        .iter()
        .map(|(label, c)| (c.canonical_key(catalog), label.clone()))
        .collect();

    // key -> complex, discovered in deterministic order
    let mut species: BTreeMap<String, Complex> = BTreeMap::new();
    for (_, complex) in seeds {
        let canon = complex.canonicalize(catalog)?;
        species.insert(canon.canonical_key(catalog), canon);
    }
    if species.len() > max_species {
        return Err(Error::CapacityExceeded {
            max_species,
            frontier: species.keys().cloned().collect(),
        });
    }

    struct Discovered {
        lhs: Vec<String>,
        rhs: Vec<String>,
        kind: ReactionKind,
        hindered: bool,
        rate: f64,
    }
    let mut discovered: Vec<Discovered> = Vec::new();
    let mut processed: BTreeSet<(String, String)> = BTreeSet::new();

    let forms = resting_forms(&params.name_hints);
    loop {
        let keys: Vec<String> = species.keys().cloned().collect();
        let mut new_species: Vec<Complex> = Vec::new();
        // Without collapse, a trapped open gate recloses first-order; its
        // parts join the species set so the closure can react them further.
        if !params.collapse_reclosure {
            for key in &keys {
                if let Some(parts) = try_reclose(&species[key], &forms) {
                    for part in parts {
                        let canon = part.canonicalize(catalog)?;
                        let pk = canon.canonical_key(catalog);
                        if !species.contains_key(&pk)
                            && !new_species.iter().any(|c| c.canonical_key(catalog) == pk)
                        {
                            new_species.push(canon);
                        }
                    }
                }
            }
        }
        for i in 0..keys.len() {
            for j in i..keys.len() {
                let pair = (keys[i].clone(), keys[j].clone());
                if processed.contains(&pair) {
                    continue;
                }
                processed.insert(pair);
                let a = species[&keys[i]].clone();
                let b = species[&keys[j]].clone();
                for rx in enumerate_bimolecular(&a, &b, catalog, params)? {
                    if rx.hindered && rx.rate == 0.0 {
                        continue; // leak disabled
                    }
                    let mut lhs = vec![keys[i].clone(), keys[j].clone()];
                    lhs.sort();
                    let mut rhs = Vec::new();
                    for p in &rx.products {
                        let key = p.canonical_key(catalog);
                        if !species.contains_key(&key)
                            && !new_species
                                .iter()
                                .any(|c| c.canonical_key(catalog) == key)
                        {
                            new_species.push(p.clone());
                        }
                        rhs.push(key);
                    }
                    rhs.sort();
                    discovered.push(Discovered {
                        lhs,
                        rhs,
                        kind: rx.kind,
                        hindered: rx.hindered,
                        rate: rx.rate,
                    });
                }
            }
        }
        if new_species.is_empty() {
            break;
        }
        for c in new_species {
            species.insert(c.canonical_key(catalog), c);
            if species.len() > max_species {
                return Err(Error::CapacityExceeded {
                    max_species,
                    frontier: species.keys().cloned().collect(),
                });
            }
        }
    }

    // Register species: hinted labels where known, canonical keys otherwise.
    let mut label_of: BTreeMap<String, String> = BTreeMap::new();
    for (key, complex) in &species {
        let label = hint_labels.get(key).cloned().unwrap_or_else(|| key.clone());
        net.add_species(&label, complex.clone())?;
        label_of.insert(key.clone(), label);
    }

    // Merge mirrored exchange discoveries and dedupe.
    let mut emitted: BTreeSet<(Vec<String>, Vec<String>)> = BTreeSet::new();
    for d in &discovered {
        let lhs_labels: Vec<String> = d.lhs.iter().map(|k| label_of[k].clone()).collect();
        let rhs_labels: Vec<String> = d.rhs.iter().map(|k| label_of[k].clone()).collect();
        let (mut fwd, mut bwd) = (lhs_labels.clone(), rhs_labels.clone());
        fwd.sort();
        bwd.sort();
        let oriented = match d.kind {
            // canonical orientation: the lexicographically smaller side fires forward
            ReactionKind::ReversibleDetached => {
                if bwd < fwd {
                    (bwd.clone(), fwd.clone())
                } else {
                    (fwd.clone(), bwd.clone())
                }
            }
            _ => (fwd.clone(), bwd.clone()),
        };
        if emitted.contains(&oriented) || emitted.contains(&(oriented.1.clone(), oriented.0.clone()))
        {
            continue;
        }
        emitted.insert(oriented.clone());
        let reactants: Vec<_> = oriented
            .0
            .iter()
            .map(|l| net.species_id(l))
            .collect::<Result<_>>()?;
        let products: Vec<_> = oriented
            .1
            .iter()
            .map(|l| net.species_id(l))
            .collect::<Result<_>>()?;
        let (k_forward, k_backward) = match d.kind {
            ReactionKind::Irreversible => (d.rate, None),
            ReactionKind::ReversibleDetached => (params.k_t, Some(params.k_t)),
            ReactionKind::ReversibleTethered => {
                (d.rate, Some(params.k_t * UNIMOLECULAR_REFERENCE_M))
            }
        };
        net.add_reaction(Reaction {
            reactants,
            products,
            k_forward,
            k_backward,
            hindered: d.hindered,
        });
    }

    // Expanded reclosure: one first-order channel per trapped open-gate species.
    if !params.collapse_reclosure {
        let recloseable: Vec<(String, Vec<Complex>)> = species
            .iter()
            .filter_map(|(key, complex)| {
                try_reclose(complex, &forms).map(|parts| (key.clone(), parts))
            })
            .collect();
        for (key, parts) in recloseable {
            let reactant = net.species_id(&label_of[&key])?;
            let mut products = Vec::new();
            for part in parts {
                let canon = part.canonicalize(catalog)?;
                let pk = canon.canonical_key(catalog);
                let label = hint_labels.get(&pk).cloned().unwrap_or_else(|| pk.clone());
                products.push(net.add_species(&label, canon)?);
            }
            net.add_reaction(Reaction {
                reactants: vec![reactant],
                products,
                k_forward: params.k_close,
                k_backward: None,
                hindered: false,
            });
        }
    }

    net.check_census_balance()?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motif::{motif_catalog, motif_species, MotifParams};

    fn species_map() -> (Catalog, BTreeMap<String, Complex>) {
        let catalog = motif_catalog();
        let map: BTreeMap<String, Complex> =
            motif_species(&catalog).unwrap().into_iter().collect();
        (catalog, map)
    }

    fn params(catalog: &Catalog) -> EnumerationParams {
        EnumerationParams::from_motif(&MotifParams::default(), catalog)
    }

    #[test]
    fn closed_gate_exposes_three_toeholds() {
        let (catalog, map) = species_map();
        let mut found: Vec<(String, u8)> = exposed_toeholds(&map["G"], &catalog)
            .into_iter()
            .map(|t| (t.domain_name, t.sequestered_bases))
            .collect();
        found.sort();
        assert_eq!(
            found,
            vec![("T1".into(), 0), ("T1*".into(), 2), ("T2".into(), 2)]
        );
    }

    #[test]
    fn intact_reporter_exposes_only_its_toehold() {
        let (catalog, map) = species_map();
        let found = exposed_toeholds(&map["R"], &catalog);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].domain_name, "T2*");
        assert_eq!(found[0].strand_name, "rep_bottom");
        assert_eq!(found[0].sequestered_bases, 0);
    }

    #[test]
    fn full_duplex_exposes_nothing() {
        let (catalog, map) = species_map();
        let found = exposed_toeholds(&map["Wi"], &catalog);
        assert!(found.is_empty(), "waste duplex should expose no toeholds: {found:?}");
    }

    #[test]
    fn input_and_gate_give_one_exchange_reaction() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let rx = enumerate_bimolecular(&map["I"], &map["G"], &catalog, &p).unwrap();
        assert_eq!(rx.len(), 1);
        assert_eq!(rx[0].kind, ReactionKind::ReversibleTethered);
        assert!(!rx[0].hindered);
        assert_eq!(rx[0].products.len(), 1);
        assert_eq!(
            rx[0].products[0].canonical_key(&catalog),
            map["G.I"].canonicalize(&catalog).unwrap().canonical_key(&catalog)
        );
    }

    #[test]
    fn fuel_and_gate_give_one_hindered_leak() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let rx = enumerate_bimolecular(&map["F"], &map["G"], &catalog, &p).unwrap();
        assert_eq!(rx.len(), 1);
        assert!(rx[0].hindered);
        assert_eq!(rx[0].rate, 0.0, "leak disabled by default");
        assert_eq!(
            rx[0].products[0].canonical_key(&catalog),
            map["G.F"].canonicalize(&catalog).unwrap().canonical_key(&catalog)
        );
    }

    #[test]
    fn reporter_with_itself_is_inert() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let rx = enumerate_bimolecular(&map["R"], &map["R"], &catalog, &p).unwrap();
        assert!(rx.is_empty());
    }

    #[test]
    fn dye_and_quencher_strands_rehybridize() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let rx = enumerate_bimolecular(&map["Rb"], &map["Q"], &catalog, &p).unwrap();
        assert_eq!(rx.len(), 1);
        assert_eq!(rx[0].kind, ReactionKind::Irreversible);
        assert_eq!(
            rx[0].products[0].canonical_key(&catalog),
            map["R"].canonicalize(&catalog).unwrap().canonical_key(&catalog)
        );
    }

    #[test]
    fn closed_gate_does_not_bind_free_dye_strand() {
        // the loop cannot invade and free-strand hybridization needs both
        // sides unpaired, so G + Rb must be silent
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let rx = enumerate_bimolecular(&map["G"], &map["Rb"], &catalog, &p).unwrap();
        assert!(rx.is_empty(), "spurious: {rx:?}");
    }

    #[test]
    fn reporter_does_not_fire_on_closed_gate() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let rx = enumerate_bimolecular(&map["G"], &map["R"], &catalog, &p).unwrap();
        assert!(rx.is_empty(), "spurious: {rx:?}");
    }

    #[test]
    fn reporter_bound_gates_do_not_exchange() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let rx = enumerate_bimolecular(&map["G.I.Rb"], &map["F"], &catalog, &p).unwrap();
        assert!(rx.is_empty(), "spurious: {rx:?}");
        let rx = enumerate_bimolecular(&map["G.F.Rb"], &map["I"], &catalog, &p).unwrap();
        assert!(rx.is_empty(), "spurious: {rx:?}");
    }

    #[test]
    fn seeds_of_reporter_alone_do_not_react() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let net = enumerate_network(
            &[("R".to_string(), map["R"].clone())],
            10,
            &catalog,
            &p,
        )
        .unwrap();
        assert_eq!(net.reactions().len(), 0);
        assert_eq!(net.n_species(), 1);
    }

    fn motif_seeds(map: &BTreeMap<String, Complex>) -> Vec<(String, Complex)> {
        ["G", "I", "F", "R", "Iex", "Fex"]
            .iter()
            .map(|&l| (l.to_string(), map[l].clone()))
            .collect()
    }

    #[test]
    fn closure_reproduces_curated_network() {
        let (catalog, map) = species_map();
        for p in [
            MotifParams::default(),
            MotifParams { k_leak: 10.0, ..MotifParams::default() },
            MotifParams { collapse_reclosure: false, ..MotifParams::default() },
        ] {
            let params = EnumerationParams::from_motif(&p, &catalog);
            let net = enumerate_network(&motif_seeds(&map), 40, &catalog, &params).unwrap();
            let curated = crate::motif::build_hairpin_motif(&p).unwrap();
            assert_eq!(
                net.reaction_set(),
                curated.reaction_set(),
                "enumerated network diverges from curated set for {p:?}"
            );
        }
    }

    #[test]
    fn closure_is_seed_order_independent() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let mut seeds = motif_seeds(&map);
        let reference = enumerate_network(&seeds, 40, &catalog, &p)
            .unwrap()
            .reaction_set();
        seeds.reverse();
        let reversed = enumerate_network(&seeds, 40, &catalog, &p)
            .unwrap()
            .reaction_set();
        assert_eq!(reference, reversed);
        seeds.swap(0, 3);
        seeds.swap(1, 4);
        let shuffled = enumerate_network(&seeds, 40, &catalog, &p)
            .unwrap()
            .reaction_set();
        assert_eq!(reference, shuffled);
    }

    #[test]
    fn enumerated_reactions_are_census_balanced() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let net = enumerate_network(&motif_seeds(&map), 40, &catalog, &p).unwrap();
        net.check_census_balance().unwrap();
    }

    #[test]
    fn or_closure_reproduces_curated_or_network() {
        let catalog = crate::motif::or_catalog();
        let species = crate::motif::or_species(&catalog).unwrap();
        let seed_names =
            ["G1", "G2", "I1", "I2", "F1", "F2", "Iex1", "Iex2", "Fex1", "Fex2", "R"];
        let seeds: Vec<(String, Complex)> = species
            .iter()
            .filter(|(l, _)| seed_names.contains(&l.as_str()))
            .cloned()
            .collect();
        let p = crate::motif::MotifParams::default();
        let params = EnumerationParams::from_or(&p, &catalog);
        let net = enumerate_network(&seeds, 60, &catalog, &params).unwrap();
        let curated = crate::motif::build_or_gate(&p).unwrap();
        assert_eq!(net.reaction_set(), curated.reaction_set());
    }

    #[test]
    fn capacity_error_reports_frontier() {
        let (catalog, map) = species_map();
        let p = params(&catalog);
        let err = enumerate_network(
            &[
                ("G".to_string(), map["G"].clone()),
                ("I".to_string(), map["I"].clone()),
            ],
            1,
            &catalog,
            &p,
        )
        .unwrap_err();
        assert!(matches!(err, Error::CapacityExceeded { max_species: 1, .. }));
    }
}
