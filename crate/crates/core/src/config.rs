//! Run configuration shared by the CLI, the sweep orchestrator and the
//! acceptance suite.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    /// Mesh refinement stops once the fine level reaches this many nodes.
    pub target_nodes: usize,
    /// Hard node ceiling for any refinement level.
    pub node_cap: usize,
    /// Points in the default geometric c-grid.
    pub c_grid_size: usize,
    /// Neumann eigenpairs computed per mesh level.
    pub eigen_count: usize,
    /// Constrained eigenpairs computed per mesh level.
    pub kappa_count: usize,
    /// Relative |kappa_1 - mu_2| below which the two are declared equal.
    pub mesh_tolerance: f64,
    /// Relative slack granted to eigenvalue interlacing checks.
    pub sandwich_slack: f64,
    /// Seed for fuzz draws (box sampling).
    pub seed: u64,
    /// Dispatch independent work items on the rayon pool when enabled.
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            target_nodes: 2000,
            node_cap: 12000,
            c_grid_size: 50,
            eigen_count: 7,
            kappa_count: 5,
            mesh_tolerance: 2e-3,
            sandwich_slack: 0.02,
            seed: 0x5eed,
            parallel: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(500..=12000).contains(&self.target_nodes) {
            return Err(invalid(format!("target_nodes must lie in [500, 12000], got {}", self.target_nodes)));
        }
        if self.node_cap < self.target_nodes {
            return Err(invalid("node_cap must be at least target_nodes".to_string()));
        }
        if self.c_grid_size < 2 {
            return Err(invalid("c grid needs at least 2 points".to_string()));
        }
        if !(self.mesh_tolerance > 0.0 && self.sandwich_slack > 0.0) {
            return Err(invalid("tolerances must be positive".to_string()));
        }
        if self.eigen_count == 0 || self.eigen_count > 20 || self.kappa_count == 0 || self.kappa_count > 20 {
            return Err(invalid("eigenpair counts must lie in 1..=20".to_string()));
        }
        Ok(())
    }

    /// Reduced-cost clone for throwaway scans (fewer eigenpairs).
    pub fn with_eigen_counts(&self, mu: usize, kappa: usize) -> Self {
        RunConfig { eigen_count: mu, kappa_count: kappa, ..self.clone() }
    }
}
