//! Graded partitions of the truncated interval [eps, 1].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Graded partition of [eps, 1] with node law x_j = eps + (1-eps)(j/n)^gamma.
///
/// The left truncation point keeps the singular weights bounded; the grading
/// concentrates cells near eps where the phase functions oscillate fastest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mesh {
    epsilon: f64,
    n_cells: usize,
    grading_gamma: f64,
    nodes: Vec<f64>,
}

impl PartialEq for Mesh {
    fn eq(&self, other: &Self) -> bool {
        self.epsilon == other.epsilon
            && self.n_cells == other.n_cells
            && self.grading_gamma == other.grading_gamma
    }
}

impl Mesh {
    pub fn new(epsilon: f64, n_cells: usize, grading_gamma: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter {
                field: "epsilon",
                message: format!("must lie in (0, 1), got {epsilon}"),
            });
        }
        if n_cells < 2 {
            return Err(Error::InvalidParameter {
                field: "n_cells",
                message: format!("must be at least 2, got {n_cells}"),
            });
        }
        if !(grading_gamma >= 1.0) || !grading_gamma.is_finite() {
            return Err(Error::InvalidParameter {
                field: "grading_gamma",
                message: format!("must be >= 1, got {grading_gamma}"),
            });
        }
        let n = n_cells as f64;
        let mut nodes = Vec::with_capacity(n_cells + 1);
        for j in 0..=n_cells {
            let s = (j as f64 / n).powf(grading_gamma);
            nodes.push(epsilon + (1.0 - epsilon) * s);
        }
        nodes[0] = epsilon;
        nodes[n_cells] = 1.0;
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter {
                    field: "n_cells",
                    message: format!(
                        "node spacing collapses near {} (n_cells too large for this grading)",
                        w[0]
                    ),
                });
            }
        }
        Ok(Mesh { epsilon, n_cells, grading_gamma, nodes })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn grading_gamma(&self) -> f64 {
        self.grading_gamma
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Dimension of the nodal basis (both endpoints carry a hat function).
    pub fn dim(&self) -> usize {
        self.n_cells + 1
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    /// Same grading with twice the cells.
    pub fn refined(&self) -> Mesh {
        Mesh::new(self.epsilon, self.n_cells * 2, self.grading_gamma)
            .expect("refinement of a valid mesh is valid")
    }

    /// Worst per-cell phase increment horizon * |d/dx x^(-phase_exp)| * h.
    /// The derivative is largest at the left end of each cell.
    pub fn max_phase_increment(&self, phase_exp: f64, horizon: f64) -> f64 {
        self.cells()
            .map(|(xl, xr)| horizon * phase_exp * xl.powf(-phase_exp - 1.0) * (xr - xl))
            .fold(0.0, f64::max)
    }

    /// Oscillation-resolution rule: every cell must see a phase increment of
    /// at most pi/4 over the whole horizon. Violations are reported as
    /// warnings by the experiment runner, never as failures.
    pub fn resolves_oscillation(&self, phase_exp: f64, horizon: f64) -> bool {
        self.max_phase_increment(phase_exp, horizon) <= PI / 4.0
    }
}
