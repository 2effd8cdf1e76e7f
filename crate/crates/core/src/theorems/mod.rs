//! Checkers and measurement harnesses: the subfield-iterate detector, the
//! exhaustive no-counterexample search, and the expansion, dimension,
//! intersection, orbit-run and sum-product experiments.

mod detect;
mod experiments;
mod verify;

pub use detect::{
    detect_subfield_iterate, DetectOptions, DetectionResult, Detector, GapHistogram,
    VerificationMethod,
};
pub use experiments::{
    expansion_experiment, image_dim, intersection_experiment, orbit_run_experiment, poly_cell,
    polydim_experiment, random_set, sp_gen_measure, subspace_cell, summarize, ExpansionReport,
    ExpansionRow, IntersectionReport, IntersectionRow, OrbitRunReport, OrbitRunRow, PolydimReport,
    PolydimRow, SpGenReport, SpGenRow, Summary,
};
pub use verify::{
    verify_thm_subfield, CoefficientSet, Counterexample, CounterexampleReport, LeadingMode,
    SubfieldSearch,
};
