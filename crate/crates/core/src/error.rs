//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),

    #[error("unknown strand `{0}`")]
    UnknownStrand(String),

    #[error("unknown species `{0}`")]
    UnknownSpecies(String),

    #[error("domain `{0}` already defined")]
    DuplicateDomain(String),

    #[error("strand `{0}` already defined")]
    DuplicateStrand(String),

    #[error("branch domain `{name}` is {length_nt} nt; branch domains must be at least {min} nt")]
    BranchTooShort { name: String, length_nt: u32, min: u32 },

    #[error("strand `{0}` has an empty domain list")]
    EmptyStrand(String),

    #[error("invalid pairing: `{a}` and `{b}` are not complements")]
    InvalidPairing { a: String, b: String },

    #[error("pairing references domain index {index} out of range for strand `{strand}`")]
    PairingOutOfRange { strand: String, index: usize },

    #[error("domain `{0}` is paired more than once")]
    DoublePairing(String),

    #[error("complex is not connected: strands `{0}` and `{1}` share no pairing path")]
    DisconnectedComplex(String, String),

    #[error("injection volume must be positive, got {0} uL")]
    NonPositiveVolume(f64),

    #[error("event times must be strictly increasing (event at {0} s follows {1} s)")]
    NonIncreasingEvents(f64, f64),

    #[error("renewal schedule needs at least one cycle, got {0}")]
    NoCycles(usize),

    #[error("OR-gate case list is empty")]
    EmptyCaseList,

    #[error("t_end {t_end} s is before the last scheduled event at {last_event} s")]
    HorizonBeforeEvents { t_end: f64, last_event: f64 },

    #[error("output interval must be positive, got {0} s")]
    NonPositiveOutputDt(f64),

    #[error("fixed normalization maximum must be positive, got {0} nM")]
    NonPositiveNormMax(f64),

    #[error("step size underflow at t = {t} s (h = {h}); system too stiff for this solver")]
    StepUnderflow { t: f64, h: f64 },

    #[error("concentration of `{species}` fell to {value} M at t = {t} s, below -abs_tol")]
    NegativeConcentration { species: String, value: f64, t: f64 },

    #[error("species cap {max_species} exceeded during network closure; frontier: {frontier:?}")]
    CapacityExceeded { max_species: usize, frontier: Vec<String> },

    #[error("objective was non-finite over the whole search grid (k in [{k_min}, {k_max}] /M/s)")]
    NoFiniteObjective { k_min: f64, k_max: f64 },

    #[error("simulation failed during fit at k = {k} /M/s: {source}")]
    FitSimulation { k: f64, source: Box<Error> },

    #[error("fit bounds invalid: k_min {k_min} must be below k_max {k_max}")]
    InvalidBounds { k_min: f64, k_max: f64 },

    #[error("fit data is empty")]
    EmptyFitData,

    #[error("data time {t} s lies outside the simulated horizon {t_end} s")]
    DataBeyondHorizon { t: f64, t_end: f64 },

    #[error("sequence constraints unsatisfiable within {attempts} attempts; tightest failing constraint: {constraint}")]
    Unsatisfiable { attempts: usize, constraint: String },

    #[error("trace is empty")]
    EmptyTrace,

    #[error("trace has a degenerate time range; cannot plot a single point")]
    DegenerateRange,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
