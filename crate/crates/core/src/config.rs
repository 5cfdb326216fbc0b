use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

/// Parameters of one search run: graph size `N`, marked count `v` and the
/// reflection phase applied at marked vertices.
///
/// Marked vertices are labeled `0..v`, normal vertices `v..N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    n_vertices: usize,
    n_marked: usize,
    phase: f64,
}

impl WalkConfig {
    /// Builds a config, wrapping `phase` into `[0, 2π)`.
    pub fn new(n_vertices: usize, n_marked: usize, phase: f64) -> Result<Self> {
        if n_vertices < 3 {
            return Err(WalkError::InvalidConfig(format!("need at least 3 vertices, got {n_vertices}")));
        }
        if n_marked == 0 || n_marked >= n_vertices {
            return Err(WalkError::InvalidConfig(format!(
                "marked count must satisfy 1 <= v < N, got v={n_marked}, N={n_vertices}"
            )));
        }
        if !phase.is_finite() {
            return Err(WalkError::InvalidConfig(format!("phase must be finite, got {phase}")));
        }
        Ok(Self { n_vertices, n_marked, phase: wrap_phase(phase) })
    }

    /// Config with the optimal phase `π`.
    pub fn search(n_vertices: usize, n_marked: usize) -> Result<Self> {
        Self::new(n_vertices, n_marked, PI)
    }

    pub fn with_phase(&self, phase: f64) -> Result<Self> {
        Self::new(self.n_vertices, self.n_marked, phase)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_marked(&self) -> usize {
        self.n_marked
    }

    pub fn n_normal(&self) -> usize {
        self.n_vertices - self.n_marked
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Number of neighbours of every vertex, `N - 1`.
    pub fn degree(&self) -> usize {
        self.n_vertices - 1
    }

    /// Transmission amplitude at normal vertices, `2 / (N - 1)`.
    pub fn transmission(&self) -> f64 {
        2.0 / self.degree() as f64
    }

    /// Reflection amplitude at normal vertices, `1 - t`.
    pub fn reflection(&self) -> f64 {
        1.0 - self.transmission()
    }

    /// Dimension of the edge-state space, `N (N - 1)`.
    pub fn dimension(&self) -> usize {
        self.n_vertices * self.degree()
    }

    pub fn is_marked(&self, vertex: usize) -> bool {
        vertex < self.n_marked
    }

    pub fn is_phase_pi(&self) -> bool {
        (self.phase - PI).abs() <= 1e-12
    }
}

pub(crate) fn wrap_phase(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}
