//! Projection operators: cellwise L2 projection, the scalar generalized
//! Gauss-Radau (GGR) projections whose mode-k coefficients couple globally
//! through a two-band circulant system, the vector GGR projection built on
//! characteristic decompositions frozen per interface, and the modified
//! auxiliary projection that corrects the p-projection by a convection term.
//!
//! Only `l2_project` participates in the scheme itself (initial data); the
//! GGR machinery is the verification surface for the projection estimates
//! underpinning the error analysis.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::basis::{legendre_eval, QuadRule};
use crate::dense;
use crate::field::DGField;
use crate::fluxes::weighted_average;
use crate::mesh::Partition1D;
use crate::problems::{ProblemSpec, MAX_COMPONENTS};
use crate::smalleig::EigenDecomp;

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionError {
    /// GGR projections are defined globally under periodicity only.
    NonPeriodic,
    /// The circulant determinant vanishes (reachable at theta = 1/2).
    SingularCirculant,
    /// The global vector-GGR system is singular.
    SingularSystem,
    /// A^(1/2) is not invertible.
    SingularDiffusion,
    /// first_row is not diagonal + single off entry at position 1 or n-1.
    UnsupportedStructure,
}

impl fmt::Display for ProjectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionError::NonPeriodic => {
                write!(f, "global projections require a periodic partition")
            }
            ProjectionError::SingularCirculant => write!(f, "singular circulant system"),
            ProjectionError::SingularSystem => write!(f, "singular projection system"),
            ProjectionError::SingularDiffusion => write!(f, "diffusion square root not invertible"),
            ProjectionError::UnsupportedStructure => {
                write!(f, "circulant first row must be diagonal plus one adjacent band")
            }
        }
    }
}

/// Which endpoint condition the scalar GGR projection imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgrSide {
    /// Weighted condition (pi z)^(theta) = z^(theta) at every x_{j+1/2}.
    Plus,
    /// Weighted condition (pi z)^(1-theta) = z^(1-theta) at every x_{j-1/2}.
    Minus,
}

/// Circulant linear system B a = c with B[i][j] = first_row[(j - i) mod n].
/// The projection systems have a diagonal entry plus a single adjacent band
/// (position 1 or n-1), which admits an explicit geometric-series inverse.
#[derive(Debug, Clone)]
pub struct CirculantSystem {
    pub n: usize,
    pub first_row: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl CirculantSystem {
    /// Build the two-band system: `diag` at position 0, `off` at `off_pos`.
    pub fn two_band(n: usize, diag: f64, off: f64, off_pos: usize, rhs: Vec<f64>) -> Self {
        assert!(n >= 1 && rhs.len() == n);
        assert!(off_pos == 1 % n || off_pos == n - 1, "off entry must sit next to the diagonal");
        let mut first_row = vec![0.0; n];
        first_row[0] = diag;
        if n > 1 {
            first_row[off_pos] += off;
        } else {
            first_row[0] += off;
        }
        CirculantSystem { n, first_row, rhs }
    }

    fn structure(&self) -> Result<(f64, f64, usize), ProjectionError> {
        let n = self.n;
        if n == 1 {
            return Ok((self.first_row[0], 0.0, 1));
        }
        let diag = self.first_row[0];
        let mut off = 0.0;
        let mut pos = 1;
        for (t, &v) in self.first_row.iter().enumerate().skip(1) {
            if v != 0.0 {
                if off != 0.0 {
                    return Err(ProjectionError::UnsupportedStructure);
                }
                if t != 1 && t != n - 1 {
                    return Err(ProjectionError::UnsupportedStructure);
                }
                off = v;
                pos = t;
            }
        }
        Ok((diag, off, pos))
    }

    /// det B = diag^n - (-off)^n for the two-band structure.
    pub fn det(&self) -> Result<f64, ProjectionError> {
        let (d, o, _) = self.structure()?;
        if self.n == 1 {
            return Ok(d);
        }
        let mut dp = 1.0;
        let mut op = 1.0;
        for _ in 0..self.n {
            dp *= d;
            op *= -o;
        }
        Ok(dp - op)
    }

    /// Solve by the explicit inverse circ(1, q, ..., q^{n-1}) / (d (1 - q^n)):
    /// one geometric seed sum plus an O(n) recurrence in the stable direction.
    pub fn solve(&self) -> Result<Vec<f64>, ProjectionError> {
        let (d, o, pos) = self.structure()?;
        let n = self.n;
        if d == 0.0 {
            return Err(ProjectionError::SingularCirculant);
        }
        if n == 1 {
            return Ok(vec![self.rhs[0] / d]);
        }
        let q = -o / d;
        let mut qn = 1.0;
        for _ in 0..n {
            qn *= q;
        }
        if libm::fabs(1.0 - qn) < 1e-14 {
            return Err(ProjectionError::SingularCirculant);
        }
        let c = &self.rhs;
        let mut a = vec![0.0; n];
        if pos == 1 {
            // d a_i + o a_{i+1} = c_i  =>  a_i = c_i/d + q a_{i+1}
            let mut seed = 0.0;
            for t in (0..n).rev() {
                seed = seed * q + c[t];
            }
            a[0] = seed / (d * (1.0 - qn));
            for i in (1..n).rev() {
                let nxt = if i == n - 1 { a[0] } else { a[i + 1] };
                a[i] = c[i] / d + q * nxt;
            }
        } else {
            // d a_i + o a_{i-1} = c_i  =>  a_i = c_i/d + q a_{i-1}
            let mut seed = 0.0;
            for t in 1..=n {
                seed = seed * q + c[t % n];
            }
            a[0] = seed / (d * (1.0 - qn));
            for i in 1..n {
                a[i] = c[i] / d + q * a[i - 1];
            }
        }
        Ok(a)
    }
}

/// Cellwise L2 projection of an m-component function onto P^k.
pub fn l2_project(
    m: usize,
    mut func: impl FnMut(f64, &mut [f64]),
    part: &Partition1D,
    k: usize,
    quad: &QuadRule,
) -> DGField {
    let n = part.n_cells();
    let mut out = DGField::zeros(n, m, k);
    let nq = quad.len();
    let mut pval = vec![0.0; (k + 1) * nq];
    for ell in 0..=k {
        for (q, &s) in quad.points.iter().enumerate() {
            pval[ell * nq + q] = legendre_eval(ell, s);
        }
    }
    let mut fx = [0.0; MAX_COMPONENTS];
    for j in 0..n {
        let mut acc = [[0.0f64; 16]; MAX_COMPONENTS];
        for q in 0..nq {
            let x = part.to_physical(j, quad.points[q]);
            func(x, &mut fx[..m]);
            let w = quad.weights[q];
            for i in 0..m {
                for ell in 0..=k {
                    acc[i][ell] += w * fx[i] * pval[ell * nq + q];
                }
            }
        }
        // coefficient = (2 ell + 1)/h * integral = (2 ell + 1)/2 * ref-integral
        for i in 0..m {
            for ell in 0..=k {
                out.set(j, i, ell, acc[i][ell] * (2.0 * ell as f64 + 1.0) / 2.0);
            }
        }
    }
    out
}

/// Moments for modes 0..k-1 (the shared part of every GGR-type projection).
fn lower_moments(
    m: usize,
    func: &mut impl FnMut(f64, &mut [f64]),
    part: &Partition1D,
    k: usize,
    quad: &QuadRule,
    out: &mut DGField,
) {
    if k == 0 {
        return;
    }
    let lower = l2_project(m, &mut *func, part, k - 1, quad);
    for j in 0..part.n_cells() {
        for i in 0..m {
            for ell in 0..k {
                out.set(j, i, ell, lower.get(j, i, ell));
            }
        }
    }
}

/// Scalar generalized Gauss-Radau projection of z onto P^k: L2 moments
/// through mode k-1, mode k from the globally coupled endpoint conditions.
pub fn ggr_scalar(
    mut z: impl FnMut(f64) -> f64,
    part: &Partition1D,
    k: usize,
    theta: f64,
    side: GgrSide,
    quad: &QuadRule,
) -> Result<DGField, ProjectionError> {
    if !part.is_periodic() {
        return Err(ProjectionError::NonPeriodic);
    }
    let n = part.n_cells();
    let mut out = DGField::zeros(n, 1, k);
    let mut zf = |x: f64, o: &mut [f64]| o[0] = z(x);
    lower_moments(1, &mut zf, part, k, quad, &mut out);

    // traces of the lower-mode part
    let mut low_minus = vec![0.0; n];
    let mut low_plus = vec![0.0; n];
    for j in 0..n {
        let (mut tm, mut tp) = (0.0, 0.0);
        for ell in 0..k {
            let c = out.get(j, 0, ell);
            tm += c;
            tp += if ell % 2 == 0 { c } else { -c };
        }
        low_minus[j] = tm;
        low_plus[j] = tp;
    }

    let tb = 1.0 - theta;
    let ksign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut rhs = vec![0.0; n];
    let sys = match side {
        GgrSide::Plus => {
            // at x_{j+1/2}: theta a_j + (1-theta)(-1)^k a_{j+1} = data
            for j in 0..n {
                let x = part.to_physical(j, 1.0);
                let right = (j + 1) % n;
                rhs[j] = z(x) - theta * low_minus[j] - tb * low_plus[right];
            }
            CirculantSystem::two_band(n, theta, tb * ksign, 1 % n, rhs)
        }
        GgrSide::Minus => {
            // at x_{j-1/2}: theta (-1)^k a_j + (1-theta) a_{j-1} = data
            for j in 0..n {
                let x = part.to_physical(j, -1.0);
                let left = (j + n - 1) % n;
                rhs[j] = z(x) - tb * low_minus[left] - theta * low_plus[j];
            }
            CirculantSystem::two_band(n, theta * ksign, tb, n - 1, rhs)
        }
    };
    let a = sys.solve()?;
    for j in 0..n {
        out.set(j, 0, k, a[j]);
    }
    Ok(out)
}

/// Vector GGR projection: per interface, each characteristic field (by the
/// sign of its frozen eigenvalue) contributes the plus- or minus-side
/// endpoint condition expressed through that interface's left eigenvectors.
/// The mode-k coefficients of all components couple into one mN x mN system;
/// for constant R it decouples into the scalar circulants componentwise.
///
/// `eigs[t]` is the decomposition frozen at interface t (mesh node t),
/// t = 0..N-1 under periodicity.
pub fn ggr_vector(
    m: usize,
    mut u: impl FnMut(f64, &mut [f64]),
    part: &Partition1D,
    k: usize,
    theta: f64,
    eigs: &[EigenDecomp],
    quad: &QuadRule,
) -> Result<DGField, ProjectionError> {
    if !part.is_periodic() {
        return Err(ProjectionError::NonPeriodic);
    }
    let n = part.n_cells();
    assert_eq!(eigs.len(), n, "one decomposition per interface");
    let mut out = DGField::zeros(n, m, k);
    lower_moments(m, &mut u, part, k, quad, &mut out);

    let mut low_minus = vec![0.0; n * m];
    let mut low_plus = vec![0.0; n * m];
    for j in 0..n {
        for i in 0..m {
            let (mut tm, mut tp) = (0.0, 0.0);
            for ell in 0..k {
                let c = out.get(j, i, ell);
                tm += c;
                tp += if ell % 2 == 0 { c } else { -c };
            }
            low_minus[j * m + i] = tm;
            low_plus[j * m + i] = tp;
        }
    }

    let tb = 1.0 - theta;
    let ksign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let nn = n * m;
    let mut mat = vec![0.0; nn * nn];
    let mut rhs = vec![0.0; nn];
    let mut ux = [0.0; MAX_COMPONENTS];
    for t in 0..n {
        // interface t couples cell t-1 (minus trace) and cell t (plus trace)
        let left = (t + n - 1) % n;
        let x = part.to_physical(t, -1.0);
        u(x, &mut ux[..m]);
        let eig = &eigs[t];
        for i in 0..m {
            let (wm, wp) = if eig.lambda()[i] >= 0.0 { (theta, tb) } else { (tb, theta) };
            let row = t * m + i;
            let li = eig.l_row(i);
            let mut data = 0.0;
            for c in 0..m {
                mat[row * nn + left * m + c] += wm * li[c];
                mat[row * nn + t * m + c] += wp * ksign * li[c];
                data += li[c]
                    * (ux[c] - wm * low_minus[left * m + c] - wp * low_plus[t * m + c]);
            }
            rhs[row] = data;
        }
    }
    if !dense::solve_in_place(&mut mat, nn, &mut rhs) {
        return Err(ProjectionError::SingularSystem);
    }
    for j in 0..n {
        for i in 0..m {
            out.set(j, i, k, rhs[j * m + i]);
        }
    }
    Ok(out)
}

/// Modified projection of the auxiliary variable p for constant-A systems:
/// componentwise minus-side structure with the endpoint data corrected by
/// c_j = -A^(-1/2) (f'(u) eta_u^(theta)) at x_{j-1/2}, where eta_u is the
/// vector-GGR error of u (`pi_u` must be the `ggr_vector` projection built
/// with the same theta).
pub fn modified_projection_p(
    mut p: impl FnMut(f64, &mut [f64]),
    mut u: impl FnMut(f64, &mut [f64]),
    pi_u: &DGField,
    problem: &ProblemSpec,
    part: &Partition1D,
    k: usize,
    theta: f64,
    quad: &QuadRule,
) -> Result<DGField, ProjectionError> {
    if !part.is_periodic() {
        return Err(ProjectionError::NonPeriodic);
    }
    let m = problem.m;
    let n = part.n_cells();
    let mut out = DGField::zeros(n, m, k);
    lower_moments(m, &mut p, part, k, quad, &mut out);

    // A^(-1/2) from the registry (constant-A problems read it at any state)
    let mut b = [0.0; MAX_COMPONENTS * MAX_COMPONENTS];
    (problem.b_mat)(&[0.0; MAX_COMPONENTS][..m], &mut b[..m * m]);
    let binv = dense::invert(&b[..m * m], m).ok_or(ProjectionError::SingularDiffusion)?;

    let mut low_minus = vec![0.0; n * m];
    let mut low_plus = vec![0.0; n * m];
    for j in 0..n {
        for i in 0..m {
            let (mut tm, mut tp) = (0.0, 0.0);
            for ell in 0..k {
                let c = out.get(j, i, ell);
                tm += c;
                tp += if ell % 2 == 0 { c } else { -c };
            }
            low_minus[j * m + i] = tm;
            low_plus[j * m + i] = tp;
        }
    }

    let tb = 1.0 - theta;
    let ksign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut px = [0.0; MAX_COMPONENTS];
    let mut ux = [0.0; MAX_COMPONENTS];
    let mut jac = [0.0; MAX_COMPONENTS * MAX_COMPONENTS];
    let mut etam = [0.0; MAX_COMPONENTS];
    let mut etap = [0.0; MAX_COMPONENTS];
    let mut eta = [0.0; MAX_COMPONENTS];
    let mut corr = [0.0; MAX_COMPONENTS];
    let mut rhs_all = vec![0.0; n * m];
    for j in 0..n {
        // condition at the left interface x_{j-1/2} of cell j
        let left = (j + n - 1) % n;
        let x = part.to_physical(j, -1.0);
        p(x, &mut px[..m]);
        u(x, &mut ux[..m]);

        // eta_u^(theta) = theta (u - pi_u^-) + (1-theta)(u - pi_u^+)
        pi_u.trace_minus_into(left, &mut etam[..m]);
        pi_u.trace_plus_into(j, &mut etap[..m]);
        for i in 0..m {
            etam[i] = ux[i] - etam[i];
            etap[i] = ux[i] - etap[i];
        }
        weighted_average(&etam[..m], &etap[..m], theta, &mut eta[..m]);

        (problem.fprime)(&ux[..m], &mut jac[..m * m]);
        for r in 0..m {
            let mut s = 0.0;
            for c in 0..m {
                s += jac[r * m + c] * eta[c];
            }
            corr[r] = s;
        }
        for r in 0..m {
            let mut s = 0.0;
            for c in 0..m {
                s += binv[r * m + c] * corr[c];
            }
            // (P p)^(1-theta) = p^(1-theta) + c_j, c_j = -A^(-1/2) f' eta
            let data = px[r] - s;
            rhs_all[j * m + r] =
                data - tb * low_minus[left * m + r] - theta * low_plus[j * m + r];
        }
    }

    for i in 0..m {
        let rhs: Vec<f64> = (0..n).map(|j| rhs_all[j * m + i]).collect();
        let sys = CirculantSystem::two_band(n, theta * ksign, tb, n - 1, rhs);
        let a = sys.solve()?;
        for j in 0..n {
            out.set(j, i, k, a[j]);
        }
    }
    Ok(out)
}
