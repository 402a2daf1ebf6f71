//! Storage, evaluation, traces and norms of m-component degree-k DG
//! functions in the modal Legendre basis.
//!
//! The element mass matrix in this basis is diagonal with entries
//! h_j / (2l + 1), which keeps every mass inversion exact.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::basis::QuadRule;
use crate::mesh::Partition1D;

/// One-sided limits at an interface: `minus` from the left cell, `plus` from
/// the right cell. A missing side of a boundary interface on a non-periodic
/// mesh is None.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePair {
    pub minus: Option<Vec<f64>>,
    pub plus: Option<Vec<f64>>,
}

/// Modal coefficients of an m-component piecewise-polynomial of degree k on
/// N cells, stored dense as coeff[(cell j, component i, mode l)].
#[derive(Debug, Clone, PartialEq)]
pub struct DGField {
    n_cells: usize,
    n_comp: usize,
    degree: usize,
    coeff: Vec<f64>,
}

impl DGField {
    pub fn zeros(n_cells: usize, n_comp: usize, degree: usize) -> Self {
        DGField {
            n_cells,
            n_comp,
            degree,
            coeff: alloc::vec![0.0; n_cells * n_comp * (degree + 1)],
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_comp(&self) -> usize {
        self.n_comp
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn idx(&self, j: usize, i: usize, ell: usize) -> usize {
        debug_assert!(j < self.n_cells && i < self.n_comp && ell <= self.degree);
        (j * self.n_comp + i) * (self.degree + 1) + ell
    }

    #[inline]
    pub fn get(&self, j: usize, i: usize, ell: usize) -> f64 {
        self.coeff[self.idx(j, i, ell)]
    }

    #[inline]
    pub fn set(&mut self, j: usize, i: usize, ell: usize, v: f64) {
        let ix = self.idx(j, i, ell);
        self.coeff[ix] = v;
    }

    pub fn coeff(&self) -> &[f64] {
        &self.coeff
    }

    pub fn coeff_mut(&mut self) -> &mut [f64] {
        &mut self.coeff
    }

    /// Modal coefficients of component i in cell j (modes 0..=k).
    #[inline]
    pub fn modes(&self, j: usize, i: usize) -> &[f64] {
        let base = (j * self.n_comp + i) * (self.degree + 1);
        &self.coeff[base..base + self.degree + 1]
    }

    fn same_shape(&self, other: &DGField) -> bool {
        self.n_cells == other.n_cells
            && self.n_comp == other.n_comp
            && self.degree == other.degree
    }

    /// Evaluate at reference coordinate s in cell j, writing all components.
    pub fn eval_into(&self, j: usize, s: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.n_comp);
        // Legendre values once, reused across components.
        let k = self.degree;
        let mut p_prev = 1.0;
        let mut p = s;
        for i in 0..self.n_comp {
            out[i] = self.get(j, i, 0);
        }
        if k == 0 {
            return;
        }
        for i in 0..self.n_comp {
            out[i] += self.get(j, i, 1) * s;
        }
        for ell in 2..=k {
            let nf = (ell - 1) as f64;
            let p_next = ((2.0 * nf + 1.0) * s * p - nf * p_prev) / (nf + 1.0);
            p_prev = p;
            p = p_next;
            for i in 0..self.n_comp {
                out[i] += self.get(j, i, ell) * p;
            }
        }
    }

    pub fn eval(&self, j: usize, s: f64) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.n_comp];
        self.eval_into(j, s, &mut out);
        out
    }

    /// Trace from the left cell (s = +1): sum of modal coefficients.
    pub fn trace_minus_into(&self, j: usize, out: &mut [f64]) {
        for i in 0..self.n_comp {
            let modes = self.modes(j, i);
            let mut v = 0.0;
            for &c in modes {
                v += c;
            }
            out[i] = v;
        }
    }

    /// Trace from the right cell (s = -1): alternating sum, P_l(-1) = (-1)^l.
    pub fn trace_plus_into(&self, j: usize, out: &mut [f64]) {
        for i in 0..self.n_comp {
            let modes = self.modes(j, i);
            let mut v = 0.0;
            let mut sign = 1.0;
            for &c in modes {
                v += sign * c;
                sign = -sign;
            }
            out[i] = v;
        }
    }

    /// One-sided limits at an interface (0..=N); periodic meshes wrap, and a
    /// missing boundary side comes back as None.
    pub fn interface_traces(&self, iface: usize, part: &Partition1D) -> TracePair {
        assert_eq!(self.n_cells, part.n_cells());
        let (left, right) = part.interface_cells(iface);
        let minus = left.map(|j| {
            let mut v = alloc::vec![0.0; self.n_comp];
            self.trace_minus_into(j, &mut v);
            v
        });
        let plus = right.map(|j| {
            let mut v = alloc::vec![0.0; self.n_comp];
            self.trace_plus_into(j, &mut v);
            v
        });
        TracePair { minus, plus }
    }

    /// L2 norm by quadrature: sqrt(sum_j sum_q w_q (h_j/2) |u(s_q)|^2).
    pub fn l2_norm(&self, part: &Partition1D, quad: &QuadRule) -> f64 {
        assert_eq!(self.n_cells, part.n_cells());
        let mut val = alloc::vec![0.0; self.n_comp];
        let mut acc = 0.0;
        for j in 0..self.n_cells {
            let hj2 = 0.5 * part.widths[j];
            for (&s, &w) in quad.points.iter().zip(&quad.weights) {
                self.eval_into(j, s, &mut val);
                let mut sq = 0.0;
                for &v in &val {
                    sq += v * v;
                }
                acc += w * hj2 * sq;
            }
        }
        libm::sqrt(acc)
    }

    /// L2 norm from the diagonal mass matrix: sqrt(sum c^2 h_j/(2l+1)).
    /// Agrees with the quadrature norm to roundoff whenever the rule has at
    /// least k+1 points.
    pub fn l2_norm_modal(&self, part: &Partition1D) -> f64 {
        assert_eq!(self.n_cells, part.n_cells());
        let mut acc = 0.0;
        for j in 0..self.n_cells {
            let hj = part.widths[j];
            for i in 0..self.n_comp {
                for (ell, &c) in self.modes(j, i).iter().enumerate() {
                    acc += c * c * hj / (2.0 * ell as f64 + 1.0);
                }
            }
        }
        libm::sqrt(acc)
    }

    /// L2 inner product <self, other> via the diagonal modal mass matrix.
    pub fn inner_modal(&self, other: &DGField, part: &Partition1D) -> f64 {
        assert!(self.same_shape(other), "inner product shape mismatch");
        assert_eq!(self.n_cells, part.n_cells());
        let mut acc = 0.0;
        for j in 0..self.n_cells {
            let hj = part.widths[j];
            for i in 0..self.n_comp {
                for (ell, (&a, &b)) in
                    self.modes(j, i).iter().zip(other.modes(j, i)).enumerate()
                {
                    acc += a * b * hj / (2.0 * ell as f64 + 1.0);
                }
            }
        }
        acc
    }

    /// self <- a * x + self.
    pub fn axpy(&mut self, a: f64, x: &DGField) {
        assert!(self.same_shape(x), "axpy shape mismatch");
        for (y, &xv) in self.coeff.iter_mut().zip(&x.coeff) {
            *y += a * xv;
        }
    }

    /// self <- a * self.
    pub fn scale(&mut self, a: f64) {
        for y in &mut self.coeff {
            *y *= a;
        }
    }

    pub fn copy_from(&mut self, x: &DGField) {
        assert!(self.same_shape(x), "copy shape mismatch");
        self.coeff.copy_from_slice(&x.coeff);
    }

    pub fn fill_zero(&mut self) {
        self.coeff.fill(0.0);
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for &c in &self.coeff {
            m = m.max(libm::fabs(c));
        }
        m
    }

    /// CSV rows (j, i, l, coeff), one per coefficient, `\n` endings.
    /// Coefficients print in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "j,i,l,coeff");
        for j in 0..self.n_cells {
            for i in 0..self.n_comp {
                for (ell, &c) in self.modes(j, i).iter().enumerate() {
                    let _ = writeln!(s, "{j},{i},{ell},{c}");
                }
            }
        }
        s
    }
}

/// L2 error of a field against a reference function, by quadrature:
/// `exact(x, out)` fills the m reference components at physical x.
pub fn l2_error_vs(
    f: &DGField,
    part: &Partition1D,
    quad: &QuadRule,
    mut exact: impl FnMut(f64, &mut [f64]),
) -> f64 {
    assert_eq!(f.n_cells(), part.n_cells());
    let m = f.n_comp();
    let mut uh = alloc::vec![0.0; m];
    let mut ue = alloc::vec![0.0; m];
    let mut acc = 0.0;
    for j in 0..f.n_cells() {
        let hj2 = 0.5 * part.widths[j];
        for (&s, &w) in quad.points.iter().zip(&quad.weights) {
            f.eval_into(j, s, &mut uh);
            exact(part.to_physical(j, s), &mut ue);
            let mut sq = 0.0;
            for i in 0..m {
                let d = uh[i] - ue[i];
                sq += d * d;
            }
            acc += w * hj2 * sq;
        }
    }
    libm::sqrt(acc)
}
