//! Trial runner, condition checkers, configuration and output.

pub mod checks;
pub mod config;
pub mod emit;
pub mod stream;
pub mod trial;

pub use checks::{check_c2, check_condition1, CheckReport, Verdict};
pub use config::{C2Spec, ClassSpec, Condition1Spec, Config, LearnerSpec, ProcessSpec, TrialSpec};
pub use emit::{adversary_csv, parse_trace_csv, render_report, render_traces, trace_csv, traces_csv, write_file, Format};
pub use stream::{build_space, comparator_flags, Source, Stream};
pub use trial::{
    base_factory, build_learner, check_expert_reproduction, run_learner, run_stream, run_trial, run_trials, Trace,
    TraceMeta, TraceRow,
};

use crate::error::Result;

/// `f` over every seed, concurrently when the `parallel` feature is on.
/// Results keep the order of `seeds`; the first error wins.
pub fn map_seeds<T, F>(seeds: &[u64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        seeds.par_iter().map(|&s| f(s)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        seeds.iter().map(|&s| f(s)).collect()
    }
}
