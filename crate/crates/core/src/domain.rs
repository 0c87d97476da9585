//! Domains, strands, and the catalog that owns them.
//!
//! A domain is the unit of complementarity: a named stretch of nucleotides
//! that hybridizes only to its declared complement. Strands are ordered
//! 5'->3' lists of domains. The catalog interns both and resolves the
//! complement relation, which is an involution by construction.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum length for a branch-migration domain, in nucleotides.
pub const MIN_BRANCH_NT: u32 = 10;
/// Default toehold length, in nucleotides.
pub const DEFAULT_TOEHOLD_NT: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Toehold,
    Branch,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Toehold => write!(f, "toehold"),
            DomainKind::Branch => write!(f, "branch"),
        }
    }
}

/// Index of a domain in a [`Catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainId(pub usize);

/// Index of a strand in a [`Catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrandId(pub usize);

/// A named domain with a length and a kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    pub name: String,
    pub length_nt: u32,
    pub kind: DomainKind,
    /// Name of the complement domain. Every domain has exactly one.
    pub complement_of: String,
}

/// A strand: ordered domains, 5' to 3'.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub name: String,
    pub domains: Vec<DomainId>,
}

/// Catalog of domains and strands with the complement relation.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    domains: Vec<DomainSpec>,
    domain_index: BTreeMap<String, DomainId>,
    complement: Vec<DomainId>,
    strands: Vec<Strand>,
    strand_index: BTreeMap<String, StrandId>,
}

/// Conventional name of the complement of `name`: `x` <-> `x*`.
pub fn complement_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern a sense domain together with its complement.
    ///
    /// `name` must be the unstarred form; the complement `name*` is created
    /// with the same length and kind. Branch domains shorter than
    /// [`MIN_BRANCH_NT`] are rejected.
    pub fn add_domain_pair(&mut self, name: &str, length_nt: u32, kind: DomainKind) -> Result<DomainId> {
        if kind == DomainKind::Branch && length_nt < MIN_BRANCH_NT {
            return Err(Error::BranchTooShort {
                name: name.to_string(),
                length_nt,
                min: MIN_BRANCH_NT,
            });
        }
        let star = complement_name(name);
        if self.domain_index.contains_key(name) {
            return Err(Error::DuplicateDomain(name.to_string()));
        }
        if self.domain_index.contains_key(&star) {
            return Err(Error::DuplicateDomain(star));
        }
        let sense = DomainId(self.domains.len());
        self.domains.push(DomainSpec {
            name: name.to_string(),
            length_nt,
            kind,
            complement_of: star.clone(),
        });
        self.domain_index.insert(name.to_string(), sense);
        let anti = DomainId(self.domains.len());
        self.domains.push(DomainSpec {
            name: star.clone(),
            length_nt,
            kind,
            complement_of: name.to_string(),
        });
        self.domain_index.insert(star, anti);
        self.complement.push(anti);
        self.complement.push(sense);
        Ok(sense)
    }

    pub fn add_strand(&mut self, name: &str, domain_names: &[&str]) -> Result<StrandId> {
        if domain_names.is_empty() {
            return Err(Error::EmptyStrand(name.to_string()));
        }
        if self.strand_index.contains_key(name) {
            return Err(Error::DuplicateStrand(name.to_string()));
        }
        let domains = domain_names
            .iter()
            .map(|n| self.domain_id(n))
            .collect::<Result<Vec<_>>>()?;
        let id = StrandId(self.strands.len());
        self.strands.push(Strand {
            name: name.to_string(),
            domains,
        });
        self.strand_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn domain_id(&self, name: &str) -> Result<DomainId> {
        self.domain_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownDomain(name.to_string()))
    }

    pub fn strand_id(&self, name: &str) -> Result<StrandId> {
        self.strand_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownStrand(name.to_string()))
    }

    pub fn domain(&self, id: DomainId) -> &DomainSpec {
        &self.domains[id.0]
    }

    pub fn strand(&self, id: StrandId) -> &Strand {
        &self.strands[id.0]
    }

    /// The unique complement of a domain. Involution: applying twice is the identity.
    pub fn complement(&self, id: DomainId) -> DomainId {
        self.complement[id.0]
    }

    /// Look up the complement by name.
    pub fn complement_of(&self, name: &str) -> Result<&DomainSpec> {
        let id = self.domain_id(name)?;
        Ok(self.domain(self.complement(id)))
    }

    pub fn are_complements(&self, a: DomainId, b: DomainId) -> bool {
        self.complement(a) == b
    }

    pub fn domains(&self) -> impl Iterator<Item = (DomainId, &DomainSpec)> {
        self.domains.iter().enumerate().map(|(i, d)| (DomainId(i), d))
    }

    pub fn strands(&self) -> impl Iterator<Item = (StrandId, &Strand)> {
        self.strands.iter().enumerate().map(|(i, s)| (StrandId(i), s))
    }

    /// Sense domains are the unstarred halves of each complement pair.
    pub fn sense_domains(&self) -> impl Iterator<Item = (DomainId, &DomainSpec)> {
        self.domains().filter(|(_, d)| !d.name.ends_with('*'))
    }

    pub fn n_domains(&self) -> usize {
        self.domains.len()
    }

    pub fn n_strands(&self) -> usize {
        self.strands.len()
    }
}

/// On-disk form of the catalog: key-value records for domains and strands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogFile {
    #[serde(default)]
    pub domain: Vec<DomainRecord>,
    #[serde(default)]
    pub strand: Vec<StrandRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainRecord {
    pub name: String,
    pub length_nt: u32,
    pub kind: DomainKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_of: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrandRecord {
    pub name: String,
    pub domains: Vec<String>,
}

impl Catalog {
    /// Parse a catalog from its structured text form.
    ///
    /// Unstarred records create both halves of a complement pair; starred
    /// records (or records with `complement_of`) only cross-check the pair
    /// created by their sense half.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: CatalogFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("catalog parse: {e}")))?;
        let mut catalog = Catalog::new();
        for rec in &file.domain {
            let is_star = rec.name.ends_with('*') || rec.complement_of.is_some();
            if is_star {
                continue;
            }
            catalog.add_domain_pair(&rec.name, rec.length_nt, rec.kind)?;
        }
        // Starred records must agree with the auto-created complements.
        for rec in &file.domain {
            if !(rec.name.ends_with('*') || rec.complement_of.is_some()) {
                continue;
            }
            let id = catalog.domain_id(&rec.name)?;
            let spec = catalog.domain(id);
            if spec.length_nt != rec.length_nt || spec.kind != rec.kind {
                return Err(Error::Config(format!(
                    "domain record `{}` disagrees with its sense half",
                    rec.name
                )));
            }
            if let Some(comp) = &rec.complement_of {
                if comp != &spec.complement_of {
                    return Err(Error::Config(format!(
                        "domain `{}` declares complement `{}`, expected `{}`",
                        rec.name, comp, spec.complement_of
                    )));
                }
            }
        }
        for rec in &file.strand {
            let names: Vec<&str> = rec.domains.iter().map(String::as_str).collect();
            catalog.add_strand(&rec.name, &names)?;
        }
        Ok(catalog)
    }

    pub fn to_toml_string(&self) -> String {
        let file = CatalogFile {
            domain: self
                .domains
                .iter()
                .map(|d| DomainRecord {
                    name: d.name.clone(),
                    length_nt: d.length_nt,
                    kind: d.kind,
                    complement_of: if d.name.ends_with('*') {
                        Some(d.complement_of.clone())
                    } else {
                        None
                    },
                })
                .collect(),
            strand: self
                .strands
                .iter()
                .map(|s| StrandRecord {
                    name: s.name.clone(),
                    domains: s.domains.iter().map(|&d| self.domain(d).name.clone()).collect(),
                })
                .collect(),
        };
        toml::to_string_pretty(&file).expect("catalog serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Catalog {
        let mut c = Catalog::new();
        c.add_domain_pair("T1", 5, DomainKind::Toehold).unwrap();
        c.add_domain_pair("S1", 15, DomainKind::Branch).unwrap();
        c
    }

    #[test]
    fn complement_is_declared_pair() {
        let c = toy();
        assert_eq!(c.complement_of("T1").unwrap().name, "T1*");
        assert_eq!(c.complement_of("T1*").unwrap().name, "T1");
    }

    #[test]
    fn complement_is_involution() {
        let c = toy();
        let s1 = c.domain_id("S1").unwrap();
        assert_eq!(c.complement(c.complement(s1)), s1);
    }

    #[test]
    fn unknown_domain_is_an_error() {
        let c = toy();
        assert!(matches!(c.domain_id("Zq"), Err(Error::UnknownDomain(n)) if n == "Zq"));
        assert!(c.complement_of("Zq").is_err());
    }

    #[test]
    fn short_branch_rejected() {
        let mut c = Catalog::new();
        let err = c.add_domain_pair("S", 8, DomainKind::Branch).unwrap_err();
        assert!(matches!(err, Error::BranchTooShort { length_nt: 8, .. }));
    }

    #[test]
    fn empty_strand_rejected() {
        let mut c = toy();
        assert!(matches!(c.add_strand("s", &[]), Err(Error::EmptyStrand(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut c = toy();
        assert!(c.add_domain_pair("T1", 5, DomainKind::Toehold).is_err());
        c.add_strand("x", &["T1"]).unwrap();
        assert!(c.add_strand("x", &["S1"]).is_err());
    }

    #[test]
    fn catalog_toml_round_trip() {
        let mut c = toy();
        c.add_strand("input", &["S1*", "T1*"]).unwrap();
        let text = c.to_toml_string();
        let c2 = Catalog::from_toml_str(&text).unwrap();
        assert_eq!(c2.n_domains(), c.n_domains());
        assert_eq!(c2.n_strands(), 1);
        let sid = c2.strand_id("input").unwrap();
        let names: Vec<&str> = c2.strand(sid).domains.iter().map(|&d| c2.domain(d).name.as_str()).collect();
        assert_eq!(names, vec!["S1*", "T1*"]);
    }
}
