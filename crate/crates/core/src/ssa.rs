//! Exact stochastic simulation (Gillespie direct method).
//!
//! Serves as the stochastic oracle for the deterministic engine: integer
//! molecule counts, exponential waiting times from the total propensity,
//! channel selection proportional to propensity. Bimolecular rate constants
//! convert to stochastic propensities via k / (N_A * V); identical-reactant
//! channels use the n*(n-1)/2 pair count with the matching factor of two.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::ReactionNetwork;

/// Avogadro constant (/mol).
pub const AVOGADRO: f64 = 6.02214076e23;

#[derive(Debug, Clone)]
pub struct SsaTrajectory {
    pub species: Vec<String>,
    pub times: Vec<f64>,
    /// Row-major counts: `counts[step * n_species + i]`.
    pub counts: Vec<i64>,
}

impl SsaTrajectory {
    pub fn n_species(&self) -> usize {
        self.species.len()
    }

    pub fn n_steps(&self) -> usize {
        self.times.len()
    }

    pub fn state_at_step(&self, step: usize) -> &[i64] {
        let n = self.n_species();
        &self.counts[step * n..(step + 1) * n]
    }

    pub fn final_state(&self) -> &[i64] {
        self.state_at_step(self.n_steps() - 1)
    }

    /// Molecule count of `species` at time `t` (last state at or before `t`).
    pub fn count_at(&self, species: &str, t: f64) -> Option<i64> {
        let idx = self.species.iter().position(|s| s == species)?;
        let step = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(0) => return None,
            Err(i) => i - 1,
        };
        Some(self.state_at_step(step)[idx])
    }
}

/// Run one exact trajectory to `t_end_s`.
///
/// `initial_counts` is indexed like the network's species list; `volume_l`
/// sets the bimolecular propensity conversion. Reproducible per seed.
pub fn ssa_simulate(
    net: &ReactionNetwork,
    initial_counts: &[i64],
    volume_l: f64,
    t_end_s: f64,
    seed: u64,
) -> SsaTrajectory {
    let n = net.n_species();
    assert_eq!(initial_counts.len(), n, "one initial count per network species");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let channels = net.channels();

    // Precompute per-channel stochastic rate and stoichiometry.
    struct StochChannel {
        reactants: Vec<usize>,
        delta: Vec<(usize, i64)>,
        c: f64,
        identical_pair: bool,
    }
    let stoch: Vec<StochChannel> = channels
        .iter()
        .map(|ch| {
            let mut delta = vec![0i64; n];
            for &r in &ch.reactants {
                delta[r.0] -= 1;
            }
            for &p in &ch.products {
                delta[p.0] += 1;
            }
            let identical_pair = ch.reactants.len() == 2 && ch.reactants[0] == ch.reactants[1];
            let c = match ch.reactants.len() {
                0 | 1 => ch.rate,
                2 => {
                    if identical_pair {
                        2.0 * ch.rate / (AVOGADRO * volume_l)
                    } else {
                        ch.rate / (AVOGADRO * volume_l)
                    }
                }
                m => panic!("SSA supports up to bimolecular channels, got {m} reactants"),
            };
            StochChannel {
                reactants: ch.reactants.iter().map(|r| r.0).collect(),
                delta: delta
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, d)| d != 0)
                    .collect(),
                c,
                identical_pair,
            }
        })
        .collect();

    let mut state: Vec<i64> = initial_counts.to_vec();
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut counts = state.clone();

    let propensity = |ch: &StochChannel, state: &[i64]| -> f64 {
        match ch.reactants.len() {
            0 => ch.c,
            1 => ch.c * state[ch.reactants[0]] as f64,
            _ => {
                if ch.identical_pair {
                    let na = state[ch.reactants[0]];
                    ch.c * (na as f64) * ((na - 1) as f64) / 2.0
                } else {
                    ch.c * state[ch.reactants[0]] as f64 * state[ch.reactants[1]] as f64
                }
            }
        }
    };

    loop {
        let props: Vec<f64> = stoch.iter().map(|ch| propensity(ch, &state)).collect();
        let total: f64 = props.iter().sum();
        if total <= 0.0 {
            break;
        }
        let u: f64 = rng.gen::<f64>();
        let wait = -(u.max(f64::MIN_POSITIVE)).ln() / total;
        if t + wait > t_end_s {
            break;
        }
        t += wait;
        let target = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = stoch.len() - 1;
        for (i, &p) in props.iter().enumerate() {
            acc += p;
            if target < acc {
                chosen = i;
                break;
            }
        }
        for &(idx, d) in &stoch[chosen].delta {
            state[idx] += d;
        }
        times.push(t);
        counts.extend_from_slice(&state);
    }

    SsaTrajectory {
        species: net.labels(),
        times,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Complex, Pairing, Site};
    use crate::domain::{Catalog, DomainKind};
    use crate::network::Reaction;

    fn bimolecular_net() -> ReactionNetwork {
        let mut c = Catalog::new();
        c.add_domain_pair("X", 15, DomainKind::Branch).unwrap();
        c.add_strand("a", &["X"]).unwrap();
        c.add_strand("b", &["X*"]).unwrap();
        let mut net = ReactionNetwork::new(c);
        let a = net.catalog.strand_id("a").unwrap();
        let b = net.catalog.strand_id("b").unwrap();
        let sa = net.add_species("A", Complex::single(a)).unwrap();
        let sb = net.add_species("B", Complex::single(b)).unwrap();
        let sc = net
            .add_species(
                "C",
                Complex::new(
                    vec![a, b],
                    vec![Pairing::full(Site::new(0, 0), Site::new(1, 0))],
                ),
            )
            .unwrap();
        net.add_reaction(Reaction {
            reactants: vec![sa, sb],
            products: vec![sc],
            k_forward: 1e6,
            k_backward: None,
            hindered: false,
        });
        net
    }

    #[test]
    fn zero_molecules_flat_trajectory() {
        let net = bimolecular_net();
        let traj = ssa_simulate(&net, &[0, 0, 0], 1e-15, 100.0, 7);
        assert_eq!(traj.n_steps(), 1);
        assert_eq!(traj.final_state(), &[0, 0, 0]);
    }

    #[test]
    fn same_seed_same_trajectory() {
        let net = bimolecular_net();
        let t1 = ssa_simulate(&net, &[500, 500, 0], 1e-15, 10.0, 42);
        let t2 = ssa_simulate(&net, &[500, 500, 0], 1e-15, 10.0, 42);
        assert_eq!(t1.times, t2.times);
        assert_eq!(t1.counts, t2.counts);
        let t3 = ssa_simulate(&net, &[500, 500, 0], 1e-15, 10.0, 43);
        assert_ne!(t1.counts, t3.counts);
    }

    #[test]
    fn counts_stay_non_negative_and_conserved() {
        let net = bimolecular_net();
        let traj = ssa_simulate(&net, &[300, 200, 0], 1e-15, 1e6, 11);
        for step in 0..traj.n_steps() {
            let s = traj.state_at_step(step);
            assert!(s.iter().all(|&c| c >= 0));
            assert_eq!(s[0] + s[2], 300, "A-strand conservation");
            assert_eq!(s[1] + s[2], 200, "B-strand conservation");
        }
        // exact stoichiometry exhausts the limiting reactant
        assert_eq!(traj.final_state(), &[100, 0, 200]);
    }

    #[test]
    fn mean_tracks_ode_at_half_completion() {
        // A + B -> C, 10^4 molecules each; at t with k*c0*t = 1 the ODE gives
        // half-completion. Mean of 100 seeded runs within 3%.
        let net = bimolecular_net();
        let n0 = 10_000i64;
        let k = 1e6;
        let c0 = 1e-7;
        let volume_l = n0 as f64 / (AVOGADRO * c0);
        let t_half = 1.0 / (k * c0);
        let mut sum = 0.0;
        for seed in 0..100 {
            let traj = ssa_simulate(&net, &[n0, n0, 0], volume_l, t_half, seed);
            sum += traj.count_at("C", t_half).unwrap() as f64;
        }
        let mean = sum / 100.0;
        let expected = n0 as f64 / 2.0;
        let rel = (mean - expected).abs() / expected;
        assert!(rel < 0.03, "SSA mean {mean} vs ODE {expected}: rel {rel}");
    }
}
