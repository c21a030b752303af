//! Empirical checks, architecture search, the pruning baseline and the two
//! reference experiments.

mod curves;
mod examples;
mod prune;
mod sampling;
mod search;

pub use curves::{emit_error_curve, emit_function_sweep, write_error_curve, write_function_sweep, SweepRow};
pub use examples::{make_example1_network, make_example2_network, EXAMPLE1_SEED};
pub use prune::{prune_magnitude, pruned_positions};
pub use sampling::{empirical_worst_error, Approximant, Sampler, WorstError, DEFAULT_SAMPLE_SEED};
pub use search::{
    architecture_search, Schedule, SdpSynthesizer, SearchConfig, SearchRecord, SearchTrace, StopRule, Synthesizer,
};
