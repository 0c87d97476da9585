//! Deterministic mass-action kinetics under timed injections with dilution.
//!
//! Internal units are SI: molar concentrations, seconds, /M/s bimolecular
//! rates. Schedules and trace files speak nM. Between injections the state
//! evolves by the mass-action ODEs; at each injection the cuvette volume
//! grows and every concentration is rescaled by mole conservation
//! (conc1 * v1 = conc2 * v2) before the stock addition lands.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::motif::fluorescent_species;
use crate::network::{ReactionNetwork, SpeciesId};
use crate::schedule::{InjectionEvent, InjectionSchedule};
use crate::solver::{integrate_segment, SolverOptions};

pub const NM_PER_M: f64 = 1e9;

/// Instantaneous state: time, cuvette volume, and molar concentrations for
/// every tracked species (network species first, then schedule-only extras).
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub time_s: f64,
    pub volume_ul: f64,
    pub conc_m: Vec<f64>,
}

impl SimState {
    pub fn species_conc(&self, trace: &Trace, label: &str) -> Option<f64> {
        trace.species.iter().position(|s| s == label).map(|i| self.conc_m[i])
    }
}

/// Time series of states plus the derived fluorescence observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    /// Tracked species labels, in column order.
    pub species: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<SimState>,
    /// Normalized fluorescence per snapshot (raw nM under `Normalization::None`).
    pub observable: Vec<f64>,
    /// Injection times, for phase segmentation and plotting.
    pub event_times: Vec<f64>,
}

impl Trace {
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let idx = self.species.iter().position(|s| s == label)?;
        Some(self.states.iter().map(|s| s.conc_m[idx]).collect())
    }

    pub fn observable_at(&self, time_s: f64) -> Option<f64> {
        self.times
            .iter()
            .position(|&t| (t - time_s).abs() < 1e-9)
            .map(|i| self.observable[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    None,
    MinMax,
    /// Normalize by a fixed ceiling, in nM.
    Fixed(f64),
}

impl Normalization {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "none" => Ok(Self::None),
            "minmax" => Ok(Self::MinMax),
            other => match other.strip_prefix("fixed:") {
                Some(v) => {
                    let max: f64 = v
                        .parse()
                        .map_err(|_| Error::Config(format!("bad normalization `{other}`")))?;
                    Ok(Self::Fixed(max))
                }
                None => Err(Error::Config(format!("bad normalization `{other}`"))),
            },
        }
    }

    pub fn to_config_string(self) -> String {
        match self {
            Self::None => "none".to_string(),
            Self::MinMax => "minmax".to_string(),
            Self::Fixed(v) => format!("fixed:{v}"),
        }
    }
}

/// Mass-action derivatives for the network channels, in M/s.
///
/// Each elementary channel contributes k * prod(reactant concentrations),
/// added to products and subtracted from reactants. Reversible reactions
/// enter as two channels.
pub fn derivatives(
    state: &BTreeMap<String, f64>,
    net: &ReactionNetwork,
) -> Result<BTreeMap<String, f64>> {
    for (_, sp) in net.species_iter() {
        if !state.contains_key(&sp.label) {
            return Err(Error::UnknownSpecies(sp.label.clone()));
        }
    }
    let conc: Vec<f64> = net
        .species_iter()
        .map(|(_, sp)| state[&sp.label])
        .collect();
    let mut rates = vec![0.0; conc.len()];
    derivatives_dense(&conc, net, &mut rates);
    Ok(net
        .species_iter()
        .map(|(id, sp)| (sp.label.clone(), rates[id.0]))
        .collect())
}

/// Dense-vector form used by the integrator. `conc` and `rates` are indexed
/// by `SpeciesId`; extra trailing entries (inert schedule species) get zero.
pub fn derivatives_dense(conc: &[f64], net: &ReactionNetwork, rates: &mut [f64]) {
    for r in rates.iter_mut() {
        *r = 0.0;
    }
    for channel in net.channels() {
        let mut flux = channel.rate;
        for &sp in &channel.reactants {
            flux *= conc[sp.0];
        }
        if flux == 0.0 {
            continue;
        }
        for &sp in &channel.reactants {
            rates[sp.0] -= flux;
        }
        for &sp in &channel.products {
            rates[sp.0] += flux;
        }
    }
}

/// Apply one injection: grow the volume, dilute everything, add the stock.
///
/// `species_index` maps labels to state positions; unknown species are
/// appended by the caller beforehand. `efficiency` scales the effective
/// injected concentration (yield loss).
pub fn apply_injection(
    state: &SimState,
    event: &InjectionEvent,
    species_index: &BTreeMap<String, usize>,
    efficiency: f64,
) -> Result<SimState> {
    if event.volume_ul <= 0.0 {
        return Err(Error::NonPositiveVolume(event.volume_ul));
    }
    let v0 = state.volume_ul;
    let v1 = v0 + event.volume_ul;
    let dilution = v0 / v1;
    let mut conc: Vec<f64> = state.conc_m.iter().map(|c| c * dilution).collect();
    let added_m = efficiency * (event.stock_conc_nm / NM_PER_M) * (event.volume_ul / v1);
    let idx = *species_index
        .get(&event.species)
        .ok_or_else(|| Error::UnknownSpecies(event.species.clone()))?;
    conc[idx] += added_m;
    Ok(SimState {
        time_s: state.time_s,
        volume_ul: v1,
        conc_m: conc,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    pub solver: SolverOptions,
    pub normalization: Normalization,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            normalization: Normalization::None,
        }
    }
}

fn checkpoints_between(t0: f64, t1: f64, output_dt: f64) -> Vec<f64> {
    // multiples of output_dt strictly inside (t0, t1), then t1 itself
    let mut points = Vec::new();
    let mut k = (t0 / output_dt).floor() as i64 + 1;
    loop {
        let t = k as f64 * output_dt;
        if t >= t1 - 1e-9 {
            break;
        }
        if t > t0 + 1e-9 {
            points.push(t);
        }
        k += 1;
    }
    points.push(t1);
    points
}

/// Integrate the network under a schedule.
///
/// Snapshots land on every multiple of `output_dt_s` and on every injection
/// boundary (recorded post-injection). Concentrations dipping below zero by
/// less than the absolute tolerance are clipped; deeper excursions abort.
pub fn integrate(
    net: &ReactionNetwork,
    schedule: &InjectionSchedule,
    t_end_s: f64,
    output_dt_s: f64,
    opts: &IntegrateOptions,
) -> Result<Trace> {
    if output_dt_s <= 0.0 {
        return Err(Error::NonPositiveOutputDt(output_dt_s));
    }
    integrate_impl(net, schedule, t_end_s, OutputGrid::Uniform(output_dt_s), opts)
}

/// Integrate with snapshots at explicit times (plus injection boundaries).
/// `output_times_s` must be increasing and within [0, t_end_s].
pub fn integrate_at(
    net: &ReactionNetwork,
    schedule: &InjectionSchedule,
    t_end_s: f64,
    output_times_s: &[f64],
    opts: &IntegrateOptions,
) -> Result<Trace> {
    integrate_impl(net, schedule, t_end_s, OutputGrid::Explicit(output_times_s), opts)
}

enum OutputGrid<'a> {
    Uniform(f64),
    Explicit(&'a [f64]),
}

impl OutputGrid<'_> {
    fn between(&self, t0: f64, t1: f64) -> Vec<f64> {
        match self {
            OutputGrid::Uniform(dt) => checkpoints_between(t0, t1, *dt),
            OutputGrid::Explicit(times) => {
                let mut points: Vec<f64> = times
                    .iter()
                    .copied()
                    .filter(|&t| t > t0 + 1e-9 && t < t1 - 1e-9)
                    .collect();
                points.push(t1);
                points
            }
        }
    }
}

fn integrate_impl(
    net: &ReactionNetwork,
    schedule: &InjectionSchedule,
    t_end_s: f64,
    grid: OutputGrid<'_>,
    opts: &IntegrateOptions,
) -> Result<Trace> {
    schedule.validate()?;
    let last_event = schedule.last_event_time();
    if t_end_s < last_event {
        return Err(Error::HorizonBeforeEvents { t_end: t_end_s, last_event });
    }

    // State layout: network species first, then schedule-only extras (inert).
    let mut species: Vec<String> = net.labels();
    let mut species_index: BTreeMap<String, usize> = species
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    for name in schedule
        .species
        .iter()
        .map(|s| &s.name)
        .chain(schedule.events.iter().map(|e| &e.species))
    {
        if !species_index.contains_key(name) {
            species_index.insert(name.clone(), species.len());
            species.push(name.clone());
        }
    }

    let mut conc = vec![0.0; species.len()];
    for init in &schedule.species {
        conc[species_index[&init.name]] = init.initial_nm / NM_PER_M;
    }

    let fluor = fluorescent_species(net);
    let mut trace = Trace {
        species: species.clone(),
        times: Vec::new(),
        states: Vec::new(),
        observable: Vec::new(),
        event_times: schedule.events.iter().map(|e| e.time_s).collect(),
    };

    let mut state = SimState { time_s: 0.0, volume_ul: schedule.initial_volume_ul, conc_m: conc };
    push_snapshot(&mut trace, &state, &fluor);

    let mut boundaries: Vec<(f64, Option<&InjectionEvent>)> =
        schedule.events.iter().map(|e| (e.time_s, Some(e))).collect();
    if last_event < t_end_s {
        boundaries.push((t_end_s, None));
    }

    let n_net = net.n_species();
    for (t_boundary, event) in boundaries {
        if t_boundary > state.time_s {
            let checkpoints = grid.between(state.time_s, t_boundary);
            let t0 = state.time_s;
            let mut y = std::mem::take(&mut state.conc_m);
            let mut pending: Vec<(f64, Vec<f64>)> = Vec::new();
            // Round-off can push a vanishing species slightly negative; clip
            // within the solver's per-component error allowance, fail beyond.
            let clip_floor = opts.solver.atol * (species.len() as f64).sqrt();
            integrate_segment(
                |_t, y, dy| {
                    derivatives_dense(&y[..n_net], net, &mut dy[..n_net]);
                    for d in dy[n_net..].iter_mut() {
                        *d = 0.0;
                    }
                },
                t0,
                &mut y,
                &checkpoints,
                &opts.solver,
                |t, y| clip_negatives(y, &species, t, clip_floor),
                |t, y| pending.push((t, y.to_vec())),
            )?;
            for (t, snap) in pending {
                let s = SimState { time_s: t, volume_ul: state.volume_ul, conc_m: snap };
                if t < t_boundary - 1e-9 || event.is_none() {
                    push_snapshot(&mut trace, &s, &fluor);
                }
                state.time_s = t;
            }
            state.conc_m = y;
            state.time_s = t_boundary;
        }
        if let Some(e) = event {
            let eff = schedule.efficiency_for_cycle(e.cycle);
            state = apply_injection(&state, e, &species_index, eff)?;
            push_snapshot(&mut trace, &state, &fluor);
        }
    }

    normalize_observable(&mut trace, opts.normalization)?;
    Ok(trace)
}

fn clip_negatives(conc: &mut [f64], species: &[String], t: f64, floor: f64) -> Result<bool> {
    let mut changed = false;
    for (i, c) in conc.iter_mut().enumerate() {
        if *c < 0.0 {
            if *c < -floor {
                return Err(Error::NegativeConcentration {
                    species: species[i].clone(),
                    value: *c,
                    t,
                });
            }
            *c = 0.0;
            changed = true;
        }
    }
    Ok(changed)
}

fn push_snapshot(trace: &mut Trace, state: &SimState, fluor: &[SpeciesId]) {
    let raw_nm: f64 = fluor.iter().map(|id| state.conc_m[id.0]).sum::<f64>() * NM_PER_M;
    trace.times.push(state.time_s);
    trace.observable.push(raw_nm);
    trace.states.push(state.clone());
}

/// Raw signal is the summed concentration (nM) of unquenched dye carriers.
/// Normalization maps it into [0, 1].
pub fn normalize_observable(trace: &mut Trace, normalization: Normalization) -> Result<()> {
    match normalization {
        Normalization::None => {}
        Normalization::MinMax => {
            let min = trace.observable.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = trace.observable.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let span = max - min;
            if span > 0.0 {
                for v in &mut trace.observable {
                    *v = (*v - min) / span;
                }
            } else {
                for v in &mut trace.observable {
                    *v = 0.0;
                }
            }
        }
        Normalization::Fixed(max_nm) => {
            if max_nm <= 0.0 {
                return Err(Error::NonPositiveNormMax(max_nm));
            }
            for v in &mut trace.observable {
                *v /= max_nm;
            }
        }
    }
    Ok(())
}

/// Recompute the observable of an existing trace under a different mode.
pub fn fluorescence(trace: &Trace, net: &ReactionNetwork, normalization: Normalization) -> Result<Vec<f64>> {
    if trace.states.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let fluor = fluorescent_species(net);
    let mut out = Trace {
        species: trace.species.clone(),
        times: trace.times.clone(),
        states: Vec::new(),
        observable: trace
            .states
            .iter()
            .map(|s| fluor.iter().map(|id| s.conc_m[id.0]).sum::<f64>() * NM_PER_M)
            .collect(),
        event_times: trace.event_times.clone(),
    };
    normalize_observable(&mut out, normalization)?;
    Ok(out.observable)
}

/// Census-weighted total concentration of each elementary strand, per state.
/// Conserved between injections; transformed by V/V' across them.
pub fn strand_totals(net: &ReactionNetwork, state: &SimState) -> BTreeMap<String, f64> {
    let matrix = net.census_matrix();
    matrix
        .into_iter()
        .map(|(strand, row)| {
            let total: f64 = row
                .iter()
                .enumerate()
                .map(|(i, &count)| count as f64 * state.conc_m[i])
                .sum();
            (strand, total)
        })
        .collect()
}
