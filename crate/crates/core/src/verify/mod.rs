//! Hypothesis checkers, ratio experiments and randomized inequality suites.

mod experiment;
mod series;
mod suites;

pub use experiment::*;
pub use series::{
    check_series, eulerian, shifted_polylog, ConditionKind, DivergenceWitness, SeriesCertificate, SeriesCondition,
    SeriesOutcome, SeriesPolicy,
};
pub use suites::{
    commutator_domination_suite, deviation_mass, integrated_jump_suite, lemma21_suite, seeds, tail_bound_suite, SuiteConfig,
    SuiteReport, SuiteRow,
};
