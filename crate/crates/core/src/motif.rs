//! Curated constructors for the hairpin-seesaw motif and the 2-input OR gate.
//!
//! The gate is a single hairpin strand: its stem is the duplex half of the
//! classic seesaw gate and its loop carries the output arm plus two
//! partially sequestered toeholds. Input opens the hairpin through the
//! external toehold, fuel exchanges with bound input through the loop
//! toehold, an always-on reporter duplex reads out open gates, and a pair
//! of extractor hairpins pulls input and fuel back out, restoring both the
//! gate and the reporter.
//!
//! Strand layouts (5'->3'):
//!
//! ```text
//! gate        T1  S1  T1* S2  T2  S1*     hairpin, stem S1:S1*, loop T1*/S2/T2
//! input       S1* T1* Ai  Ti              arm Ai/Ti dangles out of G.I
//! fuel        Tf  Af  T1  S1*
//! rep_top     S2                          quencher strand
//! rep_bottom  T2* S2*                     dye strand, toehold exposed in R
//! iex         Ti* Ai* T1  S1  Ai          hairpin, stem Ai*:Ai
//! fex         Af  S1  T1* Af* Tf*         hairpin, stem Af:Af*
//! ```

use crate::complex::{Complex, Pairing, Site};
use crate::domain::{Catalog, DomainKind};
use crate::error::Result;
use crate::network::{Reaction, ReactionNetwork, SpeciesId};

/// Bases of complementarity between the loop toeholds that sequester them
/// against fuel-first invasion.
pub const SEQUESTERED_BASES: u8 = 2;

/// Reference concentration that converts the universal bimolecular constant
/// into the first-order rate of an intramolecular re-displacement (the
/// reverse of hairpin opening): k_uni = k_t * 1 nM.
pub const UNIMOLECULAR_REFERENCE_M: f64 = 1e-9;

/// Rate parameters for the motif.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotifParams {
    /// Universal rate constant for every non-reporter step (/M/s).
    pub k_t: f64,
    /// Reporter displacement rate constant (/M/s).
    pub k_rep: f64,
    /// Fuel-before-input leak through the sequestered loop toehold (/M/s).
    /// Zero disables the leak channel.
    pub k_leak: f64,
    /// Collapse hairpin reclosure after extraction into the extraction step.
    pub collapse_reclosure: bool,
    /// Reclosure rate of the gate-reporter intermediate when not collapsed (/s).
    pub k_close: f64,
}

impl Default for MotifParams {
    fn default() -> Self {
        Self {
            k_t: 2.743e6,
            k_rep: 1.3e6,
            k_leak: 0.0,
            collapse_reclosure: true,
            k_close: 1.0,
        }
    }
}

impl MotifParams {
    pub fn with_k_t(mut self, k_t: f64) -> Self {
        self.k_t = k_t;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("k_t", self.k_t),
            ("k_rep", self.k_rep),
            ("k_leak", self.k_leak),
            ("k_close", self.k_close),
        ] {
            if !(v >= 0.0) {
                return Err(crate::error::Error::Config(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// First-order rate of the stem re-displacing a bound invader (/s).
    pub fn k_unbind(&self) -> f64 {
        self.k_t * UNIMOLECULAR_REFERENCE_M
    }
}

/// Default branch-domain lengths (nt). Toeholds are 5 nt; the stem and
/// output arm lengths are configurable defaults, not dictated by the motif.
pub const STEM_NT: u32 = 15;
pub const ARM_NT: u32 = 10;

fn add_gate_family(catalog: &mut Catalog, suffix: &str) -> Result<()> {
    let s1 = format!("S1{suffix}");
    let ai = format!("Ai{suffix}");
    let af = format!("Af{suffix}");
    let ti = format!("Ti{suffix}");
    let tf = format!("Tf{suffix}");
    catalog.add_domain_pair(&s1, STEM_NT, DomainKind::Branch)?;
    catalog.add_domain_pair(&ai, ARM_NT, DomainKind::Branch)?;
    catalog.add_domain_pair(&af, ARM_NT, DomainKind::Branch)?;
    catalog.add_domain_pair(&ti, 5, DomainKind::Toehold)?;
    catalog.add_domain_pair(&tf, 5, DomainKind::Toehold)?;
    let s1s = format!("{s1}*");
    let t1s = "T1*";
    catalog.add_strand(
        &format!("gate{suffix}"),
        &["T1", &s1, t1s, "S2", "T2", &s1s],
    )?;
    catalog.add_strand(&format!("input{suffix}"), &[&s1s, t1s, &ai, &ti])?;
    catalog.add_strand(&format!("fuel{suffix}"), &[&tf, &af, "T1", &s1s])?;
    catalog.add_strand(
        &format!("iex{suffix}"),
        &[&format!("{ti}*"), &format!("{ai}*"), "T1", &s1, &ai],
    )?;
    catalog.add_strand(
        &format!("fex{suffix}"),
        &[&af, &s1, t1s, &format!("{af}*"), &format!("{tf}*")],
    )?;
    Ok(())
}

fn base_catalog(suffixes: &[&str]) -> Result<Catalog> {
    let mut catalog = Catalog::new();
    catalog.add_domain_pair("T1", 5, DomainKind::Toehold)?;
    catalog.add_domain_pair("T2", 5, DomainKind::Toehold)?;
    catalog.add_domain_pair("S2", STEM_NT, DomainKind::Branch)?;
    for suffix in suffixes {
        add_gate_family(&mut catalog, suffix)?;
    }
    catalog.add_strand("rep_top", &["S2"])?;
    catalog.add_strand("rep_bottom", &["T2*", "S2*"])?;
    Ok(catalog)
}

/// Domain and strand catalog for the single-gate motif.
pub fn motif_catalog() -> Catalog {
    base_catalog(&[""]).expect("motif catalog is well-formed")
}

/// Catalog for the 2-input OR gate: two gate families sharing the universal
/// toeholds, the output arm, and the reporter.
pub fn or_catalog() -> Catalog {
    base_catalog(&["1", "2"]).expect("or catalog is well-formed")
}

/// Curated complexes for one gate family, labeled with `suffix`.
fn family_species(catalog: &Catalog, suffix: &str) -> Result<Vec<(String, Complex)>> {
    let gate = catalog.strand_id(&format!("gate{suffix}"))?;
    let input = catalog.strand_id(&format!("input{suffix}"))?;
    let fuel = catalog.strand_id(&format!("fuel{suffix}"))?;
    let iex = catalog.strand_id(&format!("iex{suffix}"))?;
    let fex = catalog.strand_id(&format!("fex{suffix}"))?;
    let rep_bottom = catalog.strand_id("rep_bottom")?;

    let closed_gate = Complex::new(
        vec![gate],
        vec![
            Pairing::full(Site::new(0, 1), Site::new(0, 5)),
            Pairing::partial(Site::new(0, 2), Site::new(0, 4), SEQUESTERED_BASES),
        ],
    );
    let gi = Complex::new(
        vec![gate, input],
        vec![
            Pairing::full(Site::new(0, 0), Site::new(1, 1)),
            Pairing::full(Site::new(0, 1), Site::new(1, 0)),
        ],
    );
    let gf = Complex::new(
        vec![gate, fuel],
        vec![
            Pairing::full(Site::new(0, 2), Site::new(1, 2)),
            Pairing::full(Site::new(0, 1), Site::new(1, 3)),
        ],
    );
    let girb = Complex::new(
        vec![gate, input, rep_bottom],
        vec![
            Pairing::full(Site::new(0, 0), Site::new(1, 1)),
            Pairing::full(Site::new(0, 1), Site::new(1, 0)),
            Pairing::full(Site::new(0, 3), Site::new(2, 1)),
            Pairing::full(Site::new(0, 4), Site::new(2, 0)),
        ],
    );
    let gfrb = Complex::new(
        vec![gate, fuel, rep_bottom],
        vec![
            Pairing::full(Site::new(0, 2), Site::new(1, 2)),
            Pairing::full(Site::new(0, 1), Site::new(1, 3)),
            Pairing::full(Site::new(0, 3), Site::new(2, 1)),
            Pairing::full(Site::new(0, 4), Site::new(2, 0)),
        ],
    );
    let closed_iex = Complex::new(
        vec![iex],
        vec![Pairing::full(Site::new(0, 1), Site::new(0, 4))],
    );
    let closed_fex = Complex::new(
        vec![fex],
        vec![Pairing::full(Site::new(0, 0), Site::new(0, 3))],
    );
    let wi = Complex::new(
        vec![input, iex],
        vec![
            Pairing::full(Site::new(0, 3), Site::new(1, 0)),
            Pairing::full(Site::new(0, 2), Site::new(1, 1)),
            Pairing::full(Site::new(0, 1), Site::new(1, 2)),
            Pairing::full(Site::new(0, 0), Site::new(1, 3)),
        ],
    );
    let wf = Complex::new(
        vec![fuel, fex],
        vec![
            Pairing::full(Site::new(0, 0), Site::new(1, 4)),
            Pairing::full(Site::new(0, 1), Site::new(1, 3)),
            Pairing::full(Site::new(0, 2), Site::new(1, 2)),
            Pairing::full(Site::new(0, 3), Site::new(1, 1)),
        ],
    );
    let grb = Complex::new(
        vec![gate, rep_bottom],
        vec![
            Pairing::full(Site::new(0, 3), Site::new(1, 1)),
            Pairing::full(Site::new(0, 4), Site::new(1, 0)),
        ],
    );

    Ok(vec![
        (format!("G{suffix}"), closed_gate),
        (format!("I{suffix}"), Complex::single(input)),
        (format!("F{suffix}"), Complex::single(fuel)),
        (format!("G{suffix}.I{suffix}"), gi),
        (format!("G{suffix}.F{suffix}"), gf),
        (format!("G{suffix}.I{suffix}.Rb"), girb),
        (format!("G{suffix}.F{suffix}.Rb"), gfrb),
        (format!("Iex{suffix}"), closed_iex),
        (format!("Fex{suffix}"), closed_fex),
        (format!("Wi{suffix}"), wi),
        (format!("Wf{suffix}"), wf),
        (format!("G{suffix}.Rb"), grb),
    ])
}

fn reporter_species(catalog: &Catalog) -> Result<Vec<(String, Complex)>> {
    let rep_top = catalog.strand_id("rep_top")?;
    let rep_bottom = catalog.strand_id("rep_bottom")?;
    let reporter = Complex::new(
        vec![rep_top, rep_bottom],
        vec![Pairing::full(Site::new(0, 0), Site::new(1, 1))],
    );
    Ok(vec![
        ("R".to_string(), reporter),
        ("Q".to_string(), Complex::single(rep_top)),
        ("Rb".to_string(), Complex::single(rep_bottom)),
    ])
}

/// Every curated species of the single-gate motif with its display label,
/// in canonical network order. Includes the expanded-mode intermediate.
pub fn motif_species(catalog: &Catalog) -> Result<Vec<(String, Complex)>> {
    let fam = family_species(catalog, "")?;
    let rep = reporter_species(catalog)?;
    let get = |label: &str| -> Complex {
        fam.iter()
            .chain(rep.iter())
            .find(|(l, _)| l == label)
            .map(|(_, c)| c.clone())
            .expect("curated species present")
    };
    Ok(vec![
        ("G".into(), get("G")),
        ("I".into(), get("I")),
        ("F".into(), get("F")),
        ("R".into(), get("R")),
        ("G.I".into(), get("G.I")),
        ("G.F".into(), get("G.F")),
        ("G.I.Rb".into(), get("G.I.Rb")),
        ("G.F.Rb".into(), get("G.F.Rb")),
        ("Q".into(), get("Q")),
        ("Rb".into(), get("Rb")),
        ("Iex".into(), get("Iex")),
        ("Fex".into(), get("Fex")),
        ("Wi".into(), get("Wi")),
        ("Wf".into(), get("Wf")),
        ("G.Rb".into(), get("G.Rb")),
    ])
}

/// Every curated species of the OR gate with its display label.
pub fn or_species(catalog: &Catalog) -> Result<Vec<(String, Complex)>> {
    let mut out = reporter_species(catalog)?;
    out.extend(family_species(catalog, "1")?);
    out.extend(family_species(catalog, "2")?);
    Ok(out)
}

struct FamilyIds {
    g: SpeciesId,
    i: SpeciesId,
    f: SpeciesId,
    gi: SpeciesId,
    gf: SpeciesId,
    girb: SpeciesId,
    gfrb: SpeciesId,
    iex: SpeciesId,
    fex: SpeciesId,
    wi: SpeciesId,
    wf: SpeciesId,
    grb: Option<SpeciesId>,
}

fn register_family(
    net: &mut ReactionNetwork,
    suffix: &str,
    expanded: bool,
) -> Result<FamilyIds> {
    let species = family_species(&net.catalog.clone(), suffix)?;
    let mut find = |label: &str| -> Result<SpeciesId> {
        let (l, c) = species
            .iter()
            .find(|(l, _)| l == label)
            .expect("family species present");
        net.add_species(l, c.clone())
    };
    let g = find(&format!("G{suffix}"))?;
    let i = find(&format!("I{suffix}"))?;
    let f = find(&format!("F{suffix}"))?;
    let gi = find(&format!("G{suffix}.I{suffix}"))?;
    let gf = find(&format!("G{suffix}.F{suffix}"))?;
    let girb = find(&format!("G{suffix}.I{suffix}.Rb"))?;
    let gfrb = find(&format!("G{suffix}.F{suffix}.Rb"))?;
    let iex = find(&format!("Iex{suffix}"))?;
    let fex = find(&format!("Fex{suffix}"))?;
    let wi = find(&format!("Wi{suffix}"))?;
    let wf = find(&format!("Wf{suffix}"))?;
    let grb = if expanded {
        Some(find(&format!("G{suffix}.Rb"))?)
    } else {
        None
    };
    Ok(FamilyIds { g, i, f, gi, gf, girb, gfrb, iex, fex, wi, wf, grb })
}

struct ReporterIds {
    r: SpeciesId,
    q: SpeciesId,
    rb: SpeciesId,
}

fn register_reporter(net: &mut ReactionNetwork) -> Result<ReporterIds> {
    let species = reporter_species(&net.catalog.clone())?;
    let mut ids = Vec::new();
    for (label, complex) in &species {
        ids.push(net.add_species(label, complex.clone())?);
    }
    Ok(ReporterIds { r: ids[0], q: ids[1], rb: ids[2] })
}

fn add_family_reactions(
    net: &mut ReactionNetwork,
    fam: &FamilyIds,
    rep: &ReporterIds,
    p: &MotifParams,
) {
    let rev = |kf: f64, kb: f64| (kf, Some(kb));
    // Seesaw exchange: input opens the hairpin (reverse is the stem
    // re-displacing the input, first-order), fuel swaps with bound input.
    let (kf, kb) = rev(p.k_t, p.k_unbind());
    net.add_reaction(Reaction {
        reactants: vec![fam.g, fam.i],
        products: vec![fam.gi],
        k_forward: kf,
        k_backward: kb,
        hindered: false,
    });
    net.add_reaction(Reaction {
        reactants: vec![fam.gi, fam.f],
        products: vec![fam.gf, fam.i],
        k_forward: p.k_t,
        k_backward: Some(p.k_t),
        hindered: false,
    });
    // Reporting: open gates displace the quencher strand.
    net.add_reaction(Reaction {
        reactants: vec![fam.gi, rep.r],
        products: vec![fam.girb, rep.q],
        k_forward: p.k_rep,
        k_backward: None,
        hindered: false,
    });
    net.add_reaction(Reaction {
        reactants: vec![fam.gf, rep.r],
        products: vec![fam.gfrb, rep.q],
        k_forward: p.k_rep,
        k_backward: None,
        hindered: false,
    });
    // Extraction: free inserts are consumed directly...
    net.add_reaction(Reaction {
        reactants: vec![fam.iex, fam.i],
        products: vec![fam.wi],
        k_forward: p.k_t,
        k_backward: None,
        hindered: false,
    });
    net.add_reaction(Reaction {
        reactants: vec![fam.fex, fam.f],
        products: vec![fam.wf],
        k_forward: p.k_t,
        k_backward: None,
        hindered: false,
    });
    // ...and gate-bound inserts are pulled out, reclosing the hairpin.
    net.add_reaction(Reaction {
        reactants: vec![fam.iex, fam.gi],
        products: vec![fam.g, fam.wi],
        k_forward: p.k_t,
        k_backward: None,
        hindered: false,
    });
    net.add_reaction(Reaction {
        reactants: vec![fam.fex, fam.gf],
        products: vec![fam.g, fam.wf],
        k_forward: p.k_t,
        k_backward: None,
        hindered: false,
    });
    match fam.grb {
        None => {
            // Reclosure collapsed: extraction from reporter-bound gates
            // releases the closed gate and the free dye strand in one step.
            net.add_reaction(Reaction {
                reactants: vec![fam.iex, fam.girb],
                products: vec![fam.g, rep.rb, fam.wi],
                k_forward: p.k_t,
                k_backward: None,
                hindered: false,
            });
            net.add_reaction(Reaction {
                reactants: vec![fam.fex, fam.gfrb],
                products: vec![fam.g, rep.rb, fam.wf],
                k_forward: p.k_t,
                k_backward: None,
                hindered: false,
            });
        }
        Some(grb) => {
            net.add_reaction(Reaction {
                reactants: vec![fam.iex, fam.girb],
                products: vec![grb, fam.wi],
                k_forward: p.k_t,
                k_backward: None,
                hindered: false,
            });
            net.add_reaction(Reaction {
                reactants: vec![fam.fex, fam.gfrb],
                products: vec![grb, fam.wf],
                k_forward: p.k_t,
                k_backward: None,
                hindered: false,
            });
            net.add_reaction(Reaction {
                reactants: vec![grb],
                products: vec![fam.g, rep.rb],
                k_forward: p.k_close,
                k_backward: None,
                hindered: false,
            });
        }
    }
    if p.k_leak > 0.0 {
        net.add_reaction(Reaction {
            reactants: vec![fam.g, fam.f],
            products: vec![fam.gf],
            k_forward: p.k_leak,
            k_backward: None,
            hindered: true,
        });
    }
}

fn add_restoration_reaction(net: &mut ReactionNetwork, rep: &ReporterIds, p: &MotifParams) {
    net.add_reaction(Reaction {
        reactants: vec![rep.rb, rep.q],
        products: vec![rep.r],
        k_forward: p.k_t,
        k_backward: None,
        hindered: false,
    });
}

/// The curated single-gate motif network. With defaults: 11 channels,
/// 12 with the leak enabled, 12/13 with reclosure expanded.
pub fn build_hairpin_motif(p: &MotifParams) -> Result<ReactionNetwork> {
    p.validate()?;
    let mut net = ReactionNetwork::new(motif_catalog());
    // Register in canonical order: seeds first, then products.
    let order = motif_species(&net.catalog.clone())?;
    let expanded = !p.collapse_reclosure;
    for (label, complex) in &order {
        if label == "G.Rb" && !expanded {
            continue;
        }
        net.add_species(label, complex.clone())?;
    }
    let fam = register_family(&mut net, "", expanded)?;
    let rep = ReporterIds {
        r: net.species_id("R")?,
        q: net.species_id("Q")?,
        rb: net.species_id("Rb")?,
    };
    add_family_reactions(&mut net, &fam, &rep, p);
    add_restoration_reaction(&mut net, &rep, p);
    net.check_census_balance()?;
    Ok(net)
}

/// Two hairpin gates in parallel sharing one reporter.
pub fn build_or_gate(p: &MotifParams) -> Result<ReactionNetwork> {
    p.validate()?;
    let mut net = ReactionNetwork::new(or_catalog());
    let expanded = !p.collapse_reclosure;
    let rep = register_reporter(&mut net)?;
    let fam1 = register_family(&mut net, "1", expanded)?;
    let fam2 = register_family(&mut net, "2", expanded)?;
    add_family_reactions(&mut net, &fam1, &rep, p);
    add_family_reactions(&mut net, &fam2, &rep, p);
    add_restoration_reaction(&mut net, &rep, p);
    net.check_census_balance()?;
    Ok(net)
}

/// Species that fluoresce: they carry the dye strand but not the quencher
/// strand (the dye is on the reporter bottom; the top quenches it inside R).
pub fn fluorescent_species(net: &ReactionNetwork) -> Vec<SpeciesId> {
    net.species_iter()
        .filter(|(_, sp)| {
            let census = sp.complex.strand_census(&net.catalog);
            census.contains_key("rep_bottom") && !census.contains_key("rep_top")
        })
        .map(|(id, _)| id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_motif_has_eleven_channels() {
        let net = build_hairpin_motif(&MotifParams::default()).unwrap();
        assert_eq!(net.reactions().len(), 11);
        assert_eq!(net.n_species(), 14);
    }

    #[test]
    fn leak_adds_one_channel() {
        let p = MotifParams { k_leak: 10.0, ..MotifParams::default() };
        let net = build_hairpin_motif(&p).unwrap();
        assert_eq!(net.reactions().len(), 12);
        assert_eq!(net.reactions().iter().filter(|r| r.hindered).count(), 1);
    }

    #[test]
    fn expanded_reclosure_adds_intermediate() {
        let p = MotifParams { collapse_reclosure: false, ..MotifParams::default() };
        let net = build_hairpin_motif(&p).unwrap();
        assert_eq!(net.n_species(), 15);
        assert_eq!(net.reactions().len(), 12);
        assert!(net.species_id("G.Rb").is_ok());
        let uni: Vec<_> = net.reactions().iter().filter(|r| r.reactants.len() == 1).collect();
        assert_eq!(uni.len(), 1);
        assert_eq!(uni[0].k_forward, 1.0);
    }

    #[test]
    fn every_channel_is_census_balanced() {
        let p = MotifParams { k_leak: 5.0, collapse_reclosure: false, ..MotifParams::default() };
        build_hairpin_motif(&p).unwrap().check_census_balance().unwrap();
        build_or_gate(&p).unwrap().check_census_balance().unwrap();
    }

    #[test]
    fn or_gate_is_two_families_and_shared_reporter() {
        let net = build_or_gate(&MotifParams::default()).unwrap();
        // 11 species per family + R, Q, Rb
        assert_eq!(net.n_species(), 25);
        // 10 gate-side channels per family + one shared restoration
        assert_eq!(net.reactions().len(), 21);
        let with_leak = build_or_gate(&MotifParams { k_leak: 1.0, ..MotifParams::default() }).unwrap();
        assert_eq!(with_leak.reactions().len(), 23);
    }

    #[test]
    fn or_gate_restricted_to_one_family_matches_motif() {
        let or = build_or_gate(&MotifParams::default()).unwrap();
        let motif = build_hairpin_motif(&MotifParams::default()).unwrap();
        // Rename gate-1 labels to the single-motif labels and compare sets.
        let rename = |label: &str| -> String {
            label
                .replace("G1", "G")
                .replace("I1", "I")
                .replace("F1", "F")
                .replace("Iex1", "Iex")
                .replace("Fex1", "Fex")
                .replace("Wi1", "Wi")
                .replace("Wf1", "Wf")
        };
        let gate1_labels: Vec<String> = or
            .species_iter()
            .map(|(_, s)| s.label.clone())
            .filter(|l| !l.contains('2'))
            .collect();
        let mut restricted: Vec<_> = or
            .reactions()
            .iter()
            .filter(|r| {
                r.reactants
                    .iter()
                    .chain(r.products.iter())
                    .all(|&id| gate1_labels.contains(&or.label(id).to_string()))
            })
            .map(|r| {
                let mut lhs: Vec<String> =
                    r.reactants.iter().map(|&id| rename(or.label(id))).collect();
                let mut rhs: Vec<String> =
                    r.products.iter().map(|&id| rename(or.label(id))).collect();
                lhs.sort();
                rhs.sort();
                (lhs, rhs, r.k_forward.to_bits(), r.k_backward.map(f64::to_bits), r.hindered)
            })
            .collect();
        restricted.sort();
        assert_eq!(restricted, motif.reaction_set());
    }

    #[test]
    fn exchange_reverse_rate_is_referenced_to_one_nanomolar() {
        let p = MotifParams::default();
        assert!((p.k_unbind() - 2.743e-3).abs() < 1e-15);
    }

    #[test]
    fn fluorescent_species_are_the_unquenched_dye_carriers() {
        let net = build_hairpin_motif(&MotifParams::default()).unwrap();
        let mut labels: Vec<&str> = fluorescent_species(&net)
            .into_iter()
            .map(|id| net.label(id))
            .collect();
        labels.sort_unstable();
        assert_eq!(labels, vec!["G.F.Rb", "G.I.Rb", "Rb"]);
    }

    #[test]
    fn closed_gate_exposure() {
        let net = build_hairpin_motif(&MotifParams::default()).unwrap();
        let g = net.species_id("G").unwrap();
        let sites = net.species(g).complex.exposed_toehold_sites(&net.catalog);
        let mut named: Vec<(String, u8)> = sites
            .iter()
            .map(|(site, seq)| {
                let strand = net.species(g).complex.strands[site.strand];
                let dom = net.catalog.strand(strand).domains[site.domain];
                (net.catalog.domain(dom).name.clone(), *seq)
            })
            .collect();
        named.sort();
        assert_eq!(
            named,
            vec![("T1".to_string(), 0), ("T1*".to_string(), 2), ("T2".to_string(), 2)]
        );
    }

    #[test]
    fn motif_catalog_golden_dump() {
        let net = build_hairpin_motif(&MotifParams::default()).unwrap();
        let dump = net.dump();
        assert!(dump.starts_with("G + I -> G.I @ 2.743e6, 2.743e-3\n"));
        assert!(dump.contains("Q + Rb -> R @ 2.743e6\n"));
    }
}
