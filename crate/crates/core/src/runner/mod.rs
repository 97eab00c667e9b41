//! Declarative scenarios: parsing, execution and report output.

mod emit;
mod exec;
mod registry;
mod report;
mod scenario;

pub use emit::{to_csv, to_json, to_markdown, write_outputs};
pub use exec::run_scenario;
pub use registry::{check_info, CheckInfo, InstanceType, CHECKS};
pub use report::{CheckResult, Meta, RunReport};
pub use scenario::{
    CatalogConfig, InstanceConfig, OdeConfig, OutputFormat, OutputSpec, SampleConfig, Scenario, WarpedInstance,
    MAX_SAMPLES,
};

/// Size rayon's global pool from `RHLAB_THREADS` when set, and return the
/// number of worker threads in use.
pub fn init_threads() -> usize {
    if let Some(n) = std::env::var("RHLAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    rayon::current_num_threads()
}
