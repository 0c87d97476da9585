//! Reactions and reaction networks over named species.
//!
//! A reaction stores a forward rate and, when reversible, an explicit
//! backward rate. Rate units follow molecularity: /M/s for bimolecular
//! channels, /s for unimolecular ones. The kinetics engine expands each
//! reversible reaction into two elementary channels.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::complex::Complex;
use crate::domain::Catalog;
use crate::error::{Error, Result};

/// Index of a species within a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpeciesId(pub usize);

#[derive(Debug, Clone)]
pub struct Species {
    pub label: String,
    pub complex: Complex,
}

/// A reaction channel; `k_backward` present makes it reversible.
#[derive(Debug, Clone)]
pub struct Reaction {
    pub reactants: Vec<SpeciesId>,
    pub products: Vec<SpeciesId>,
    /// Forward rate constant (/M/s if two reactants, /s if one).
    pub k_forward: f64,
    /// Backward rate constant (units set by the product-side molecularity).
    pub k_backward: Option<f64>,
    /// Initiated through a partially sequestered toehold.
    pub hindered: bool,
}

/// An elementary (irreversible) channel, as integrated by the kinetics engine.
#[derive(Debug, Clone)]
pub struct Channel {
    pub reactants: Vec<SpeciesId>,
    pub products: Vec<SpeciesId>,
    pub rate: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ReactionNetwork {
    pub catalog: Catalog,
    species: Vec<Species>,
    species_index: BTreeMap<String, SpeciesId>,
    key_index: BTreeMap<String, SpeciesId>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn new(catalog: Catalog) -> Self {
        Self {
            catalog,
            species: Vec::new(),
            species_index: BTreeMap::new(),
            key_index: BTreeMap::new(),
            reactions: Vec::new(),
        }
    }

    /// Register a species under a display label. The complex is canonicalized;
    /// re-adding a structurally identical complex returns the existing id.
    pub fn add_species(&mut self, label: &str, complex: Complex) -> Result<SpeciesId> {
        let canon = complex.canonicalize(&self.catalog)?;
        let key = canon.canonical_key(&self.catalog);
        if let Some(&id) = self.key_index.get(&key) {
            return Ok(id);
        }
        if self.species_index.contains_key(label) {
            return Err(Error::Config(format!("species label `{label}` already used")));
        }
        let id = SpeciesId(self.species.len());
        self.species.push(Species { label: label.to_string(), complex: canon });
        self.species_index.insert(label.to_string(), id);
        self.key_index.insert(key, id);
        Ok(id)
    }

    pub fn species_id(&self, label: &str) -> Result<SpeciesId> {
        self.species_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownSpecies(label.to_string()))
    }

    pub fn species_by_key(&self, key: &str) -> Option<SpeciesId> {
        self.key_index.get(key).copied()
    }

    pub fn species(&self, id: SpeciesId) -> &Species {
        &self.species[id.0]
    }

    pub fn label(&self, id: SpeciesId) -> &str {
        &self.species[id.0].label
    }

    pub fn species_iter(&self) -> impl Iterator<Item = (SpeciesId, &Species)> {
        self.species.iter().enumerate().map(|(i, s)| (SpeciesId(i), s))
    }

    pub fn n_species(&self) -> usize {
        self.species.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.species.iter().map(|s| s.label.clone()).collect()
    }

    pub fn add_reaction(&mut self, reaction: Reaction) {
        self.reactions.push(reaction);
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    /// Expand reversible reactions into elementary channels.
    pub fn channels(&self) -> Vec<Channel> {
        let mut out = Vec::with_capacity(self.reactions.len() * 2);
        for r in &self.reactions {
            out.push(Channel {
                reactants: r.reactants.clone(),
                products: r.products.clone(),
                rate: r.k_forward,
            });
            if let Some(kb) = r.k_backward {
                out.push(Channel {
                    reactants: r.products.clone(),
                    products: r.reactants.clone(),
                    rate: kb,
                });
            }
        }
        out
    }

    /// Census-weighted strand count over a species list.
    fn side_census(&self, side: &[SpeciesId]) -> BTreeMap<String, usize> {
        let mut total = BTreeMap::new();
        for &id in side {
            for (name, count) in self.species[id.0].complex.strand_census(&self.catalog) {
                *total.entry(name).or_insert(0) += count;
            }
        }
        total
    }

    /// Check that no reaction creates or destroys strands.
    pub fn check_census_balance(&self) -> Result<()> {
        for (i, r) in self.reactions.iter().enumerate() {
            let lhs = self.side_census(&r.reactants);
            let rhs = self.side_census(&r.products);
            if lhs != rhs {
                return Err(Error::Config(format!(
                    "reaction {i} is not strand-census balanced: {lhs:?} -> {rhs:?}"
                )));
            }
        }
        Ok(())
    }

    /// Per-strand census matrix: for each strand name, the count contributed
    /// by one copy of each species. Used for conservation checks.
    pub fn census_matrix(&self) -> BTreeMap<String, Vec<usize>> {
        let mut matrix: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, sp) in self.species.iter().enumerate() {
            for (name, count) in sp.complex.strand_census(&self.catalog) {
                matrix
                    .entry(name)
                    .or_insert_with(|| vec![0; self.species.len()])[i] = count;
            }
        }
        matrix
    }

    /// One reaction per line: `reactants -> products @ k_forward[, k_backward]`,
    /// species sides sorted lexicographically by canonical label.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in &self.reactions {
            let mut lhs: Vec<&str> = r.reactants.iter().map(|&id| self.label(id)).collect();
            let mut rhs: Vec<&str> = r.products.iter().map(|&id| self.label(id)).collect();
            lhs.sort_unstable();
            rhs.sort_unstable();
            let _ = write!(out, "{} -> {} @ {:e}", lhs.join(" + "), rhs.join(" + "), r.k_forward);
            if let Some(kb) = r.k_backward {
                let _ = write!(out, ", {kb:e}");
            }
            out.push('\n');
        }
        out
    }

    /// Canonical comparison form: the set of reactions as normalized tuples
    /// (sorted reactant labels, sorted product labels, rates, hindered flag).
    pub fn reaction_set(&self) -> Vec<(Vec<String>, Vec<String>, u64, Option<u64>, bool)> {
        let mut set: Vec<_> = self
            .reactions
            .iter()
            .map(|r| {
                let mut lhs: Vec<String> =
                    r.reactants.iter().map(|&id| self.label(id).to_string()).collect();
                let mut rhs: Vec<String> =
                    r.products.iter().map(|&id| self.label(id).to_string()).collect();
                lhs.sort();
                rhs.sort();
                (lhs, rhs, r.k_forward.to_bits(), r.k_backward.map(f64::to_bits), r.hindered)
            })
            .collect();
        set.sort();
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Pairing, Site};
    use crate::domain::DomainKind;

    fn net() -> ReactionNetwork {
        let mut c = Catalog::new();
        c.add_domain_pair("T1", 5, DomainKind::Toehold).unwrap();
        c.add_domain_pair("S1", 15, DomainKind::Branch).unwrap();
        c.add_strand("a", &["T1", "S1"]).unwrap();
        c.add_strand("b", &["S1*", "T1*"]).unwrap();
        ReactionNetwork::new(c)
    }

    #[test]
    fn duplicate_structures_share_one_id() {
        let mut n = net();
        let a = n.catalog.strand_id("a").unwrap();
        let b = n.catalog.strand_id("b").unwrap();
        let ab = Complex::new(
            vec![a, b],
            vec![
                Pairing::full(Site::new(0, 0), Site::new(1, 1)),
                Pairing::full(Site::new(0, 1), Site::new(1, 0)),
            ],
        );
        let ba = Complex::new(
            vec![b, a],
            vec![
                Pairing::full(Site::new(1, 0), Site::new(0, 1)),
                Pairing::full(Site::new(1, 1), Site::new(0, 0)),
            ],
        );
        let id1 = n.add_species("AB", ab).unwrap();
        let id2 = n.add_species("BA-again", ba).unwrap();
        assert_eq!(id1, id2);
        assert_eq!(n.n_species(), 1);
    }

    #[test]
    fn census_balance_detects_strand_loss() {
        let mut n = net();
        let a = n.catalog.strand_id("a").unwrap();
        let b = n.catalog.strand_id("b").unwrap();
        let fa = n.add_species("A", Complex::single(a)).unwrap();
        let fb = n.add_species("B", Complex::single(b)).unwrap();
        n.add_reaction(Reaction {
            reactants: vec![fa, fb],
            products: vec![fa],
            k_forward: 1.0,
            k_backward: None,
            hindered: false,
        });
        assert!(n.check_census_balance().is_err());
    }

    #[test]
    fn channels_expand_reversible_reactions() {
        let mut n = net();
        let a = n.catalog.strand_id("a").unwrap();
        let b = n.catalog.strand_id("b").unwrap();
        let fa = n.add_species("A", Complex::single(a)).unwrap();
        let fb = n.add_species("B", Complex::single(b)).unwrap();
        n.add_reaction(Reaction {
            reactants: vec![fa],
            products: vec![fb],
            k_forward: 2.0,
            k_backward: Some(3.0),
            hindered: false,
        });
        let ch = n.channels();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch[0].rate, 2.0);
        assert_eq!(ch[1].rate, 3.0);
        assert_eq!(ch[1].reactants, vec![fb]);
    }

    #[test]
    fn dump_format_sorts_sides() {
        let mut n = net();
        let a = n.catalog.strand_id("a").unwrap();
        let b = n.catalog.strand_id("b").unwrap();
        let fa = n.add_species("Zeta", Complex::single(a)).unwrap();
        let fb = n.add_species("Alpha", Complex::single(b)).unwrap();
        n.add_reaction(Reaction {
            reactants: vec![fa, fb],
            products: vec![fb],
            k_forward: 1.3e6,
            k_backward: None,
            hindered: false,
        });
        assert_eq!(n.dump(), "Alpha + Zeta -> Alpha @ 1.3e6\n");
    }
}
