//! Named model spaces and explicit solutions.

mod entries;
mod solutions;
mod spaces;
mod spec;

pub use entries::{list_catalog, CatalogEntry};
pub use solutions::{make_solution, SOLUTION_NAMES};
pub use spaces::{make_space, poisson_profile, Space, SPACE_NAMES};
pub use spec::{Params, SolutionSpec, SpaceSpec};

use crate::error::Result;
use crate::verifier::RHInstance;

/// Build the instance described by a space and solution spec.
pub fn build_instance(label: &str, space: &SpaceSpec, solution: &SolutionSpec) -> Result<RHInstance> {
    let sp = make_space(space)?;
    let f = make_solution(&sp, solution)?;
    let mut inst = RHInstance::new(label, sp.metric.clone(), f);
    inst.j = sp.j;
    Ok(inst)
}

/// Look up an entry by name.
pub fn entry(name: &str) -> Option<CatalogEntry> {
    list_catalog().into_iter().find(|e| e.name == name)
}

impl CatalogEntry {
    pub fn build(&self) -> Result<RHInstance> {
        build_instance(&self.name, &self.space, &self.solution)
    }
}
