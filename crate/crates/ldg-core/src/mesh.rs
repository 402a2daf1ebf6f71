//! 1D partitions of an interval: cell boundaries x_{j+1/2}, widths h_j, and
//! the reference map to [-1, 1].
//!
//! Interfaces are indexed 0..=N (the half-integer index j+1/2 maps to the
//! integer j+1). Under periodicity, interface 0 and interface N refer to the
//! same trace pair.

use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeshError {
    NonPositiveCellCount,
    InvertedInterval,
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::NonPositiveCellCount => write!(f, "cell count must be at least 1"),
            MeshError::InvertedInterval => write!(f, "interval must satisfy x_hi > x_lo"),
        }
    }
}

/// A quasi-uniform partition of [x_lo, x_hi] into N cells. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct Partition1D {
    pub x_lo: f64,
    pub x_hi: f64,
    /// N+1 strictly increasing nodes; nodes[0] = x_lo, nodes[N] = x_hi.
    pub nodes: Vec<f64>,
    /// N cell widths, widths[j] = nodes[j+1] - nodes[j].
    pub widths: Vec<f64>,
    pub periodic: bool,
    /// Quasi-uniformity witness: min_j h_j >= gamma * max_j h_j.
    gamma: f64,
}

/// Uniform partition; gamma = 1 up to roundoff.
pub fn build_uniform(
    x_lo: f64,
    x_hi: f64,
    n_cells: usize,
    periodic: bool,
) -> Result<Partition1D, MeshError> {
    if n_cells == 0 {
        return Err(MeshError::NonPositiveCellCount);
    }
    if !(x_hi > x_lo) {
        return Err(MeshError::InvertedInterval);
    }
    let n = n_cells;
    let h = (x_hi - x_lo) / n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    for j in 0..n {
        nodes.push(x_lo + j as f64 * h);
    }
    nodes.push(x_hi);
    let widths: Vec<f64> = (0..n).map(|j| nodes[j + 1] - nodes[j]).collect();
    let (mut hmin, mut hmax) = (f64::INFINITY, 0.0f64);
    for &w in &widths {
        hmin = hmin.min(w);
        hmax = hmax.max(w);
    }
    Ok(Partition1D {
        x_lo,
        x_hi,
        nodes,
        widths,
        periodic,
        gamma: hmin / hmax,
    })
}

impl Partition1D {
    pub fn n_cells(&self) -> usize {
        self.widths.len()
    }

    /// Interfaces are indexed 0..=N; under periodicity index N aliases 0.
    pub fn n_interfaces(&self) -> usize {
        self.widths.len() + 1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn width(&self, j: usize) -> f64 {
        self.widths[j]
    }

    pub fn max_width(&self) -> f64 {
        let mut m = 0.0f64;
        for &w in &self.widths {
            m = m.max(w);
        }
        m
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        0.5 * (self.nodes[j] + self.nodes[j + 1])
    }

    /// Reference-to-physical map x = x_j + s h_j / 2, written in barycentric
    /// form so that s = -1 and s = +1 land exactly on the cell boundaries.
    pub fn to_physical(&self, j: usize, s: f64) -> f64 {
        assert!(j < self.n_cells(), "cell index {j} out of range");
        assert!((-1.0..=1.0).contains(&s), "reference coordinate {s} outside [-1,1]");
        0.5 * (1.0 - s) * self.nodes[j] + 0.5 * (1.0 + s) * self.nodes[j + 1]
    }

    /// Cells adjacent to an interface: (left cell, right cell). A missing
    /// side of a boundary interface on a non-periodic mesh is None.
    pub fn interface_cells(&self, iface: usize) -> (Option<usize>, Option<usize>) {
        let n = self.n_cells();
        assert!(iface <= n, "interface index {iface} out of range");
        let left = if iface > 0 {
            Some(iface - 1)
        } else if self.periodic {
            Some(n - 1)
        } else {
            None
        };
        let right = if iface < n {
            Some(iface)
        } else if self.periodic {
            Some(0)
        } else {
            None
        };
        (left, right)
    }
}
