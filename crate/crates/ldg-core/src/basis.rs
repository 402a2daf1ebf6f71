//! Legendre modal basis on the reference element [-1, 1] and Gauss-Legendre
//! quadrature.
//!
//! All interface evaluations downstream use the exact endpoint values
//! P_l(1) = 1, P_l(-1) = (-1)^l rather than quadrature extrapolation.

use alloc::vec::Vec;
use core::fmt;

/// Largest supported Gauss-Legendre rule.
pub const MAX_QUAD_POINTS: usize = 64;

/// Gauss-Legendre rule on [-1, 1]. Nodes ascending, weights positive,
/// weights summing to 2; an n-point rule integrates degree <= 2n-1 exactly.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrate a scalar function over [-1, 1] with this rule.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (&s, &w) in self.points.iter().zip(&self.weights) {
            acc += w * f(s);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisError {
    /// Requested point count outside 1..=MAX_QUAD_POINTS.
    UnsupportedSize(usize),
}

impl fmt::Display for BasisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisError::UnsupportedSize(n) => {
                write!(f, "unsupported quadrature size {n} (supported: 1..={MAX_QUAD_POINTS})")
            }
        }
    }
}

/// P_l and P_l' at s in one pass of the three-term recurrences
///   (n+1) P_{n+1} = (2n+1) s P_n - n P_{n-1}
///   P'_{n+1} = P'_{n-1} + (2n+1) P_n.
fn legendre_pair(ell: usize, s: f64) -> (f64, f64) {
    if ell == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0; // P_0
    let mut p = s; // P_1
    let mut d_prev = 0.0; // P'_0
    let mut d = 1.0; // P'_1
    for n in 1..ell {
        let nf = n as f64;
        let p_next = ((2.0 * nf + 1.0) * s * p - nf * p_prev) / (nf + 1.0);
        let d_next = d_prev + (2.0 * nf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Legendre polynomial P_l(s).
pub fn legendre_eval(ell: usize, s: f64) -> f64 {
    legendre_pair(ell, s).0
}

/// Derivative dP_l/ds.
pub fn legendre_deriv(ell: usize, s: f64) -> f64 {
    legendre_pair(ell, s).1
}

/// Gauss-Legendre rule with `n_points` nodes: Newton iteration on P_n from
/// the Chebyshev-like initial guess, weights 2 / ((1 - s^2) P_n'(s)^2).
/// Nodes are accurate to machine precision and exactly antisymmetric.
pub fn quad_rule(n_points: usize) -> Result<QuadRule, BasisError> {
    if n_points == 0 || n_points > MAX_QUAD_POINTS {
        return Err(BasisError::UnsupportedSize(n_points));
    }
    let n = n_points;
    let mut points = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    if n == 1 {
        points[0] = 0.0;
        weights[0] = 2.0;
        return Ok(QuadRule { points, weights });
    }

    // Roots come out descending from this guess; index i = 0 is the largest.
    let half = n / 2;
    for i in 0..half + (n % 2) {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            let dx = p / d;
            x -= dx;
            if libm::fabs(dx) < 1e-15 {
                // settle the last bits
                let (p, d) = legendre_pair(n, x);
                x -= p / d;
                break;
            }
        }
        // store ascending; enforce exact antisymmetry
        points[n - 1 - i] = x;
        points[i] = -x;
    }
    if n % 2 == 1 {
        points[half] = 0.0;
    }
    for i in 0..n {
        let x = points[i];
        let (_, d) = legendre_pair(n, x);
        weights[i] = 2.0 / ((1.0 - x * x) * d * d);
    }
    Ok(QuadRule { points, weights })
}
