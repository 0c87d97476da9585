//! Timed injection schedules with explicit stock concentrations and volumes.
//!
//! Injections are modeled the way they are pipetted: a volume of stock at a
//! known concentration added to the cuvette, diluting everything already
//! there (conc1 * v1 = conc2 * v2). Paired additions made in one pipetting
//! round are staggered by one second so event times stay strictly increasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stock concentration multiple used when realizing a target addition:
/// stocks are prepared at 100x the target in-cuvette concentration, so each
/// injection dilutes the solution by about 1%.
pub const STOCK_MULTIPLE: f64 = 100.0;

/// The assay concentration unit: 1x = 100 nM.
pub const UNIT_NM: f64 = 100.0;

/// Spacing between additions made in the same pipetting round.
pub const STAGGER_S: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectionEvent {
    pub time_s: f64,
    pub species: String,
    #[serde(rename = "stock_conc_nM")]
    pub stock_conc_nm: f64,
    #[serde(rename = "volume_uL")]
    pub volume_ul: f64,
    /// Renewal cycle this event belongs to (1-based); 0 when untracked.
    #[serde(default)]
    pub cycle: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialSpecies {
    pub name: String,
    #[serde(rename = "initial_nM")]
    pub initial_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectionSchedule {
    #[serde(rename = "volume_uL")]
    pub initial_volume_ul: f64,
    #[serde(default)]
    pub species: Vec<InitialSpecies>,
    #[serde(default)]
    pub events: Vec<InjectionEvent>,
    /// Multipliers in (0, 1] applied to injected effective concentrations,
    /// indexed by cycle (entry 0 is cycle 1). Missing entries default to 1.
    #[serde(default)]
    pub per_cycle_efficiency: Vec<f64>,
}

impl InjectionSchedule {
    pub fn new(initial_volume_ul: f64) -> Self {
        Self {
            initial_volume_ul,
            species: Vec::new(),
            events: Vec::new(),
            per_cycle_efficiency: Vec::new(),
        }
    }

    pub fn with_initial(mut self, name: &str, conc_nm: f64) -> Self {
        self.species.push(InitialSpecies { name: name.to_string(), initial_nm: conc_nm });
        self
    }

    pub fn efficiency_for_cycle(&self, cycle: usize) -> f64 {
        if cycle == 0 {
            return 1.0;
        }
        self.per_cycle_efficiency.get(cycle - 1).copied().unwrap_or(1.0)
    }

    pub fn last_event_time(&self) -> f64 {
        self.events.last().map_or(0.0, |e| e.time_s)
    }

    /// Append an addition targeting `target_nm` in the post-injection volume,
    /// realized as a (stock, volume) pair with the stock at [`STOCK_MULTIPLE`]
    /// times the target.
    pub fn push_target(&mut self, time_s: f64, species: &str, target_nm: f64, cycle: usize) {
        let stock = STOCK_MULTIPLE * target_nm;
        // stock * v = target * (V + v)  =>  v = target * V / (stock - target)
        let v_current = self.volume_at(time_s);
        let volume = target_nm * v_current / (stock - target_nm);
        self.events.push(InjectionEvent {
            time_s,
            species: species.to_string(),
            stock_conc_nm: stock,
            volume_ul: volume,
            cycle,
        });
    }

    /// Cuvette volume just before `time_s`.
    pub fn volume_at(&self, time_s: f64) -> f64 {
        self.initial_volume_ul
            + self
                .events
                .iter()
                .filter(|e| e.time_s < time_s)
                .map(|e| e.volume_ul)
                .sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_volume_ul <= 0.0 {
            return Err(Error::NonPositiveVolume(self.initial_volume_ul));
        }
        let mut prev = f64::NEG_INFINITY;
        for e in &self.events {
            if e.volume_ul <= 0.0 {
                return Err(Error::NonPositiveVolume(e.volume_ul));
            }
            if e.time_s <= prev {
                return Err(Error::NonIncreasingEvents(e.time_s, prev));
            }
            prev = e.time_s;
        }
        for eff in &self.per_cycle_efficiency {
            if !(*eff > 0.0 && *eff <= 1.0) {
                return Err(Error::Config(format!(
                    "per-cycle efficiency {eff} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// How insert concentrations evolve across renewal cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoublingRule {
    /// Input and fuel equalize from cycle 2 onward; every injection round
    /// doubles the previous round's level. Levels in 1x units:
    /// (1, 2), (2, 2), (4, 4), (8, 8), (16, 16), (32, 32), ...
    Equalize,
    /// Fuel stays at twice the input level for every forward round; each
    /// round still doubles off the previous: (1, 2), (2, 2), (4, 8), (8, 8), ...
    FuelDouble,
}

/// Renewal protocol: gate at 1x and reporter at 1.5x initially; cycle 1 adds
/// input at 1x and fuel at 2x, each reversal adds both extractors at 2x the
/// preceding input level, and each later forward round doubles again.
pub fn build_renewal_schedule(
    n_cycles: usize,
    phase_duration_s: f64,
    doubling: bool,
) -> Result<InjectionSchedule> {
    build_renewal_schedule_with(
        n_cycles,
        phase_duration_s,
        if doubling { DoublingRule::Equalize } else { DoublingRule::Equalize },
        doubling,
    )
}

pub fn build_renewal_schedule_with(
    n_cycles: usize,
    phase_duration_s: f64,
    rule: DoublingRule,
    doubling: bool,
) -> Result<InjectionSchedule> {
    if n_cycles < 1 {
        return Err(Error::NoCycles(n_cycles));
    }
    if phase_duration_s <= 0.0 {
        return Err(Error::Config(format!(
            "phase duration must be positive, got {phase_duration_s} s"
        )));
    }
    let mut schedule = InjectionSchedule::new(80.0)
        .with_initial("G", UNIT_NM)
        .with_initial("R", 1.5 * UNIT_NM);
    // Levels in 1x units for each injection round: forward rounds add (I, F),
    // reversal rounds add (Iex, Fex).
    let mut level = 1.0; // input level of the upcoming forward round
    for cycle in 1..=n_cycles {
        let t_fwd = (2 * cycle - 1) as f64 * phase_duration_s;
        let t_rev = (2 * cycle) as f64 * phase_duration_s;
        let (i_level, f_level) = if cycle == 1 || !doubling {
            (1.0, 2.0)
        } else {
            match rule {
                DoublingRule::Equalize => (level, level),
                DoublingRule::FuelDouble => (level, 2.0 * level),
            }
        };
        schedule.push_target(t_fwd, "I", i_level * UNIT_NM, cycle);
        schedule.push_target(t_fwd + STAGGER_S, "F", f_level * UNIT_NM, cycle);
        let ex_level = if doubling { 2.0 * i_level } else { 2.0 };
        schedule.push_target(t_rev, "Iex", ex_level * UNIT_NM, cycle);
        schedule.push_target(t_rev + STAGGER_S, "Fex", ex_level * UNIT_NM, cycle);
        level = if doubling { 2.0 * ex_level } else { 1.0 };
    }
    schedule.validate()?;
    Ok(schedule)
}

/// OR-gate case protocol: for each case, inject the active inputs at 1x and
/// their fuels at 2x; between cases, extract everything injected in the
/// previous case with extractors at 2x.
pub fn build_or_case_schedule(
    cases: &[(bool, bool)],
    phase_duration_s: f64,
) -> Result<InjectionSchedule> {
    if cases.is_empty() {
        return Err(Error::EmptyCaseList);
    }
    if phase_duration_s <= 0.0 {
        return Err(Error::Config(format!(
            "phase duration must be positive, got {phase_duration_s} s"
        )));
    }
    let mut schedule = InjectionSchedule::new(80.0)
        .with_initial("G1", UNIT_NM)
        .with_initial("G2", UNIT_NM)
        .with_initial("R", 1.5 * UNIT_NM);
    let mut round = 0usize;
    let mut prev_active: Vec<usize> = Vec::new();
    for (case_idx, &(b1, b2)) in cases.iter().enumerate() {
        if case_idx > 0 && !prev_active.is_empty() {
            round += 1;
            let t = round as f64 * phase_duration_s;
            let mut offset = 0.0;
            for &gate in &prev_active {
                schedule.push_target(t + offset, &format!("Iex{gate}"), 2.0 * UNIT_NM, case_idx);
                offset += STAGGER_S;
                schedule.push_target(t + offset, &format!("Fex{gate}"), 2.0 * UNIT_NM, case_idx);
                offset += STAGGER_S;
            }
        }
        round += 1;
        let t = round as f64 * phase_duration_s;
        let active: Vec<usize> = [b1, b2]
            .iter()
            .enumerate()
            .filter_map(|(i, &on)| on.then_some(i + 1))
            .collect();
        let mut offset = 0.0;
        for &gate in &active {
            schedule.push_target(t + offset, &format!("I{gate}"), UNIT_NM, case_idx + 1);
            offset += STAGGER_S;
            schedule.push_target(t + offset, &format!("F{gate}"), 2.0 * UNIT_NM, case_idx + 1);
            offset += STAGGER_S;
        }
        prev_active = active;
    }
    schedule.validate()?;
    Ok(schedule)
}

/// Grouping of events into pipetting rounds (events closer than `window_s`
/// belong to one round). Used for plot markers and phase segmentation.
pub fn event_rounds(events: &[InjectionEvent], window_s: f64) -> Vec<Vec<&InjectionEvent>> {
    let mut rounds: Vec<Vec<&InjectionEvent>> = Vec::new();
    for e in events {
        match rounds.last_mut() {
            Some(last) if e.time_s - last.last().unwrap().time_s <= window_s => last.push(e),
            _ => rounds.push(vec![e]),
        }
    }
    rounds
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_cycle_matches_protocol() {
        let s = build_renewal_schedule(1, 1200.0, true).unwrap();
        assert_eq!(s.species.len(), 2);
        assert_eq!(s.species[0].name, "G");
        assert_eq!(s.species[0].initial_nm, 100.0);
        assert_eq!(s.species[1].initial_nm, 150.0);
        let summary: Vec<(String, f64)> = s
            .events
            .iter()
            .map(|e| (e.species.clone(), e.stock_conc_nm / STOCK_MULTIPLE))
            .collect();
        assert_eq!(
            summary,
            vec![
                ("I".into(), 100.0),
                ("F".into(), 200.0),
                ("Iex".into(), 200.0),
                ("Fex".into(), 200.0),
            ]
        );
        assert_eq!(s.events[0].time_s, 1200.0);
        assert_eq!(s.events[2].time_s, 2400.0);
    }

    #[test]
    fn three_cycle_doubling_levels() {
        let s = build_renewal_schedule(3, 1200.0, true).unwrap();
        let levels: Vec<f64> = s.events.iter().map(|e| e.stock_conc_nm / STOCK_MULTIPLE / UNIT_NM).collect();
        // rounds: (I, F), (Iex, Fex) x 3 cycles
        assert_eq!(
            levels,
            vec![1.0, 2.0, 2.0, 2.0, 4.0, 4.0, 8.0, 8.0, 16.0, 16.0, 32.0, 32.0]
        );
        assert_eq!(s.events.len(), 12);
    }

    #[test]
    fn no_doubling_stays_at_cycle_one_levels() {
        let s = build_renewal_schedule(3, 1200.0, false).unwrap();
        let levels: Vec<f64> = s.events.iter().map(|e| e.stock_conc_nm / STOCK_MULTIPLE / UNIT_NM).collect();
        assert_eq!(
            levels,
            vec![1.0, 2.0, 2.0, 2.0, 1.0, 2.0, 2.0, 2.0, 1.0, 2.0, 2.0, 2.0]
        );
    }

    #[test]
    fn fuel_double_rule_keeps_ratio() {
        let s = build_renewal_schedule_with(2, 1200.0, DoublingRule::FuelDouble, true).unwrap();
        let levels: Vec<f64> = s.events.iter().map(|e| e.stock_conc_nm / STOCK_MULTIPLE / UNIT_NM).collect();
        assert_eq!(levels, vec![1.0, 2.0, 2.0, 2.0, 4.0, 8.0, 8.0, 8.0]);
    }

    #[test]
    fn zero_cycles_is_an_error() {
        assert!(matches!(build_renewal_schedule(0, 1200.0, true), Err(Error::NoCycles(0))));
    }

    #[test]
    fn or_case_schedule_extracts_between_cases() {
        let s = build_or_case_schedule(&[(true, false), (false, true)], 600.0).unwrap();
        let names: Vec<&str> = s.events.iter().map(|e| e.species.as_str()).collect();
        assert_eq!(names, vec!["I1", "F1", "Iex1", "Fex1", "I2", "F2"]);
    }

    #[test]
    fn or_case_all_false_has_no_events() {
        let s = build_or_case_schedule(&[(false, false)], 600.0).unwrap();
        assert!(s.events.is_empty());
    }

    #[test]
    fn or_case_fig5d_shape() {
        // OFF-ON then ON-ON
        let s = build_or_case_schedule(&[(false, true), (true, true)], 600.0).unwrap();
        let names: Vec<&str> = s.events.iter().map(|e| e.species.as_str()).collect();
        assert_eq!(names, vec!["I2", "F2", "Iex2", "Fex2", "I1", "F1", "I2", "F2"]);
    }

    #[test]
    fn empty_case_list_is_an_error() {
        assert!(matches!(build_or_case_schedule(&[], 600.0), Err(Error::EmptyCaseList)));
    }

    #[test]
    fn event_times_strictly_increase() {
        let s = build_renewal_schedule(3, 1200.0, true).unwrap();
        for w in s.events.windows(2) {
            assert!(w[1].time_s > w[0].time_s);
        }
        s.validate().unwrap();
    }

    #[test]
    fn stagger_groups_into_rounds() {
        let s = build_renewal_schedule(3, 1200.0, true).unwrap();
        let rounds = event_rounds(&s.events, 10.0);
        assert_eq!(rounds.len(), 6);
        assert!(rounds.iter().all(|r| r.len() == 2));
    }

    #[test]
    fn realized_volumes_give_one_percent_dilution() {
        let s = build_renewal_schedule(1, 1200.0, true).unwrap();
        let e = &s.events[0];
        // stock at 100x target: v = V/99
        let expected = 80.0 / 99.0;
        assert!((e.volume_ul - expected).abs() < 1e-12);
    }
}
