//! Built-in convection-diffusion systems u_t + f(u)_x = (A(u) u_x)_x + s(x,t).
//!
//! Each problem supplies the flux, its Jacobian, the diffusion matrix A with a
//! symmetric square root B (B^2 = A) and the componentwise antiderivative g
//! with g'(u) = B(u), plus manufactured sources and exact solutions where
//! available. Everything is plain function pointers so a `ProblemSpec` is
//! `Copy` and free of allocation.

use crate::smalleig::EigenDecomp;

/// Largest number of solution components across the built-in problems.
pub use crate::smalleig::MMAX as MAX_COMPONENTS;

/// Boundary data suppliers; each writes all m components for time t.
#[derive(Clone, Copy)]
pub enum BoundaryCondition {
    Periodic,
    /// u(x_lo, t) = g1(t), u(x_hi, t) = g2(t).
    Dirichlet {
        g1: fn(f64, &mut [f64]),
        g2: fn(f64, &mut [f64]),
    },
    /// u(x_lo, t) = g1(t), u_x(x_hi, t) = dg2(t).
    Mixed {
        g1: fn(f64, &mut [f64]),
        dg2: fn(f64, &mut [f64]),
    },
}

#[derive(Clone, Copy)]
pub struct ProblemSpec {
    pub id: &'static str,
    pub m: usize,
    pub domain: (f64, f64),
    /// Convective flux f(u).
    pub f: fn(&[f64], &mut [f64]),
    /// Jacobian f'(u), m x m row-major.
    pub fprime: fn(&[f64], &mut [f64]),
    /// Diffusion matrix A(u), m x m row-major, symmetric positive semidefinite.
    pub a_mat: fn(&[f64], &mut [f64]),
    /// Symmetric square root B(u) with B^2 = A, m x m row-major.
    pub b_mat: fn(&[f64], &mut [f64]),
    /// Antiderivative with Jacobian g'(u) = B(u).
    pub g: fn(&[f64], &mut [f64]),
    /// Manufactured source s(x, t); identically zero when `has_source` is false.
    pub source: fn(f64, f64, &mut [f64]),
    pub has_source: bool,
    pub initial: fn(f64, &mut [f64]),
    pub exact: Option<fn(f64, f64, &mut [f64])>,
    pub bc: BoundaryCondition,
    /// Analytic eigendecomposition of f'(u) at a trace-average state, if the
    /// problem registers one; always re-validated against the Jacobian.
    pub eig_hint: Option<fn(&[f64]) -> Option<EigenDecomp>>,
    /// True when A is constant in u, enabling the linear diffusion path.
    pub linear_diffusion: bool,
}

/// Look up a built-in problem by id.
pub fn builtin(id: &str) -> Option<&'static ProblemSpec> {
    BUILTINS.iter().find(|p| p.id == id)
}

pub fn builtin_ids() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|p| p.id)
}

// ---------------------------------------------------------------------------
// cubic-flux family: f = (u1^3, u2^3, u3^3), A = a I on (0, 2 pi), periodic

fn cubic_f(u: &[f64], out: &mut [f64]) {
    for (o, &v) in out.iter_mut().zip(u) {
        *o = v * v * v;
    }
}

fn cubic_fprime(u: &[f64], out: &mut [f64]) {
    let m = u.len();
    out[..m * m].fill(0.0);
    for (i, &v) in u.iter().enumerate() {
        out[i * m + i] = 3.0 * v * v;
    }
}

fn cubic_hint(u: &[f64]) -> Option<EigenDecomp> {
    let mut d = [0.0; MAX_COMPONENTS];
    for (o, &v) in d.iter_mut().zip(u) {
        *o = 3.0 * v * v;
    }
    Some(EigenDecomp::from_diag(&d[..u.len()]))
}

fn const_diag_a(a: f64, m: usize, out: &mut [f64]) {
    out[..m * m].fill(0.0);
    for i in 0..m {
        out[i * m + i] = a;
    }
}

fn scaled_identity_g(root_a: f64, u: &[f64], out: &mut [f64]) {
    for (o, &v) in out.iter_mut().zip(u) {
        *o = root_a * v;
    }
}

/// Exact solution shared by the three diffusion scalings of the cubic family.
fn ex1_exact(x: f64, t: f64, out: &mut [f64]) {
    out[0] = libm::exp(-t) * libm::sin(2.0 * x + t);
    out[1] = libm::exp(-t) * libm::sin(2.0 * x - t);
    out[2] = libm::exp(-2.0 * t) * libm::sin(x + t);
}

fn ex1_initial(x: f64, out: &mut [f64]) {
    ex1_exact(x, 0.0, out);
}

/// Source making `ex1_exact` solve u_t + (u^3)_x = a u_xx + s.
fn ex1_source(a: f64, x: f64, t: f64, out: &mut [f64]) {
    let (e1, e3, e2, e6) = (
        libm::exp(-t),
        libm::exp(-3.0 * t),
        libm::exp(-2.0 * t),
        libm::exp(-6.0 * t),
    );
    let p = 2.0 * x + t;
    let (sp, cp) = (libm::sin(p), libm::cos(p));
    out[0] = e1 * (cp - sp) + 6.0 * e3 * sp * sp * cp + 4.0 * a * e1 * sp;
    let q = 2.0 * x - t;
    let (sq, cq) = (libm::sin(q), libm::cos(q));
    out[1] = -e1 * (sq + cq) + 6.0 * e3 * sq * sq * cq + 4.0 * a * e1 * sq;
    let r = x + t;
    let (sr, cr) = (libm::sin(r), libm::cos(r));
    out[2] = e2 * (cr - 2.0 * sr) + 3.0 * e6 * sr * sr * cr + a * e2 * sr;
}

macro_rules! cubic_family {
    ($id:literal, $a:literal, $amat:ident, $bmat:ident, $g:ident, $src:ident) => {
        fn $amat(_u: &[f64], out: &mut [f64]) {
            const_diag_a($a, 3, out);
        }
        fn $bmat(_u: &[f64], out: &mut [f64]) {
            let mut b = [0.0; 9];
            const_diag_a($a, 3, &mut b);
            for (o, v) in out.iter_mut().zip(b) {
                *o = libm::sqrt(v);
            }
        }
        fn $g(u: &[f64], out: &mut [f64]) {
            scaled_identity_g(libm::sqrt($a), u, out);
        }
        fn $src(x: f64, t: f64, out: &mut [f64]) {
            ex1_source($a, x, t, out);
        }
    };
}

cubic_family!("ex1_cubic", 1.0, ex1_a, ex1_b, ex1_g, ex1_src);
cubic_family!("ex1_convdom", 1e-4, convdom_a, convdom_b, convdom_g, convdom_src);
cubic_family!("ex1_aniso", 100.0, aniso_a, aniso_b, aniso_g, aniso_src);

// long-time variant: same operator with a = 1, slow-decay exact solution

fn ex3_exact(x: f64, t: f64, out: &mut [f64]) {
    let e = libm::exp(-0.01 * t);
    out[0] = e * libm::sin(2.0 * x + 0.1 * t);
    out[1] = e * libm::sin(2.0 * x - 0.1 * t);
    out[2] = e * libm::sin(x + 0.1 * t);
}

fn ex3_initial(x: f64, out: &mut [f64]) {
    ex3_exact(x, 0.0, out);
}

fn ex3_src(x: f64, t: f64, out: &mut [f64]) {
    let e = libm::exp(-0.01 * t);
    let e3 = libm::exp(-0.03 * t);
    let p = 2.0 * x + 0.1 * t;
    let (sp, cp) = (libm::sin(p), libm::cos(p));
    out[0] = e * (0.1 * cp - 0.01 * sp) + 6.0 * e3 * sp * sp * cp + 4.0 * e * sp;
    let q = 2.0 * x - 0.1 * t;
    let (sq, cq) = (libm::sin(q), libm::cos(q));
    out[1] = -e * (0.01 * sq + 0.1 * cq) + 6.0 * e3 * sq * sq * cq + 4.0 * e * sq;
    let r = x + 0.1 * t;
    let (sr, cr) = (libm::sin(r), libm::cos(r));
    out[2] = e * (0.1 * cr - 0.01 * sr) + 3.0 * e3 * sr * sr * cr + e * sr;
}

// ---------------------------------------------------------------------------
// Burgers-type pair on (0, pi): f = (u1^2/2, u2^2/2), A = I, mixed/Dirichlet

fn ex4_f(u: &[f64], out: &mut [f64]) {
    out[0] = 0.5 * u[0] * u[0];
    out[1] = 0.5 * u[1] * u[1];
}

fn ex4_fprime(u: &[f64], out: &mut [f64]) {
    out[..4].copy_from_slice(&[u[0], 0.0, 0.0, u[1]]);
}

fn ex4_hint(u: &[f64]) -> Option<EigenDecomp> {
    Some(EigenDecomp::from_diag(&u[..2]))
}

fn ex4_a(_u: &[f64], out: &mut [f64]) {
    const_diag_a(1.0, 2, out);
}

fn ex4_g(u: &[f64], out: &mut [f64]) {
    scaled_identity_g(1.0, u, out);
}

fn ex4_exact(x: f64, t: f64, out: &mut [f64]) {
    let v = libm::exp(-t) * libm::sin(3.0 * x + t);
    out[0] = v;
    out[1] = v;
}

fn ex4_initial(x: f64, out: &mut [f64]) {
    ex4_exact(x, 0.0, out);
}

fn ex4_src(x: f64, t: f64, out: &mut [f64]) {
    let e = libm::exp(-t);
    let p = 3.0 * x + t;
    let (sp, cp) = (libm::sin(p), libm::cos(p));
    let v = e * (cp - sp) + 3.0 * e * e * sp * cp + 9.0 * e * sp;
    out[0] = v;
    out[1] = v;
}

fn ex4_left(t: f64, out: &mut [f64]) {
    ex4_exact(0.0, t, out);
}

fn ex4_right(t: f64, out: &mut [f64]) {
    ex4_exact(core::f64::consts::PI, t, out);
}

/// u_x at the right end of the domain for the mixed condition.
fn ex4_right_deriv(t: f64, out: &mut [f64]) {
    let v = 3.0 * libm::exp(-t) * libm::cos(3.0 * core::f64::consts::PI + t);
    out[0] = v;
    out[1] = v;
}

// ---------------------------------------------------------------------------
// nonlinear diffusion on (0, 2 pi): f = (u1+u2, u1+u2), A = diag(u1^4, u2^4)

fn ex5_f(u: &[f64], out: &mut [f64]) {
    let s = u[0] + u[1];
    out[0] = s;
    out[1] = s;
}

fn ex5_fprime(_u: &[f64], out: &mut [f64]) {
    out[..4].copy_from_slice(&[1.0, 1.0, 1.0, 1.0]);
}

fn ex5_hint(_u: &[f64]) -> Option<EigenDecomp> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let r = [s, s, s, -s];
    Some(EigenDecomp::from_parts(2, &[2.0, 0.0], &r, &r))
}

fn ex5_a(u: &[f64], out: &mut [f64]) {
    let (a, b) = (u[0] * u[0], u[1] * u[1]);
    out[..4].copy_from_slice(&[a * a, 0.0, 0.0, b * b]);
}

fn ex5_b(u: &[f64], out: &mut [f64]) {
    out[..4].copy_from_slice(&[u[0] * u[0], 0.0, 0.0, u[1] * u[1]]);
}

fn ex5_g(u: &[f64], out: &mut [f64]) {
    out[0] = u[0] * u[0] * u[0] / 3.0;
    out[1] = u[1] * u[1] * u[1] / 3.0;
}

fn ex5_exact(x: f64, t: f64, out: &mut [f64]) {
    let v = libm::sin(x - t);
    out[0] = v;
    out[1] = v;
}

fn ex5_initial(x: f64, out: &mut [f64]) {
    ex5_exact(x, 0.0, out);
}

fn ex5_src(x: f64, t: f64, out: &mut [f64]) {
    let (s, c) = (libm::sin(x - t), libm::cos(x - t));
    let v = c - 4.0 * s * s * s * c * c + s * s * s * s * s;
    out[0] = v;
    out[1] = v;
}

// ---------------------------------------------------------------------------
// coupled Buckley-Leverett system on (0, 1) with degenerate diffusion

/// Fractional-flow function w^2 / (w^2 + (1-w)^2).
fn bl_h(w: f64) -> f64 {
    let d = w * w + (1.0 - w) * (1.0 - w);
    w * w / d
}

fn bl_dh(w: f64) -> f64 {
    let d = w * w + (1.0 - w) * (1.0 - w);
    2.0 * w * (1.0 - w) / (d * d)
}

/// 4 w (1 - w) on [0, 1], zero outside.
fn bl_a(w: f64) -> f64 {
    if (0.0..=1.0).contains(&w) {
        4.0 * w * (1.0 - w)
    } else {
        0.0
    }
}

/// sqrt of 0.01 * bl_a.
fn bl_b(w: f64) -> f64 {
    0.2 * libm::sqrt(libm::fmax(w * (1.0 - w), 0.0))
}

/// Antiderivative of bl_b: 0.05 [(2w-1) sqrt(w(1-w)) + asin(sqrt(w))] on
/// [0, 1], extended by constants where the diffusion degenerates to zero.
fn bl_g(w: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else if w >= 1.0 {
        0.05 * core::f64::consts::FRAC_PI_2
    } else {
        0.05 * ((2.0 * w - 1.0) * libm::sqrt(w * (1.0 - w)) + libm::asin(libm::sqrt(w)))
    }
}

fn ex6_f(u: &[f64], out: &mut [f64]) {
    out[0] = bl_h(u[1]);
    out[1] = bl_h(u[0]);
}

fn ex6_fprime(u: &[f64], out: &mut [f64]) {
    out[..4].copy_from_slice(&[0.0, bl_dh(u[1]), bl_dh(u[0]), 0.0]);
}

fn ex6_hint(u: &[f64]) -> Option<EigenDecomp> {
    let b = bl_dh(u[1]);
    let c = bl_dh(u[0]);
    if b != c {
        // cross-coupled states: defer to the numeric path
        return None;
    }
    if b == 0.0 {
        return Some(EigenDecomp::from_diag(&[0.0, 0.0]));
    }
    let s = core::f64::consts::FRAC_1_SQRT_2;
    if b > 0.0 {
        let r = [s, s, s, -s];
        Some(EigenDecomp::from_parts(2, &[b, -b], &r, &r))
    } else {
        Some(EigenDecomp::from_parts(2, &[-b, b], &[s, s, -s, s], &[s, -s, s, s]))
    }
}

fn ex6_a(u: &[f64], out: &mut [f64]) {
    out[..4].copy_from_slice(&[0.01 * bl_a(u[0]), 0.0, 0.0, 0.01 * bl_a(u[1])]);
}

fn ex6_b(u: &[f64], out: &mut [f64]) {
    out[..4].copy_from_slice(&[bl_b(u[0]), 0.0, 0.0, bl_b(u[1])]);
}

fn ex6_g(u: &[f64], out: &mut [f64]) {
    out[0] = bl_g(u[0]);
    out[1] = bl_g(u[1]);
}

fn ex6_initial(x: f64, out: &mut [f64]) {
    let v = if x <= 1.0 / 3.0 { 1.0 - 3.0 * x } else { 0.0 };
    out[0] = v;
    out[1] = v;
}

fn ex6_left(_t: f64, out: &mut [f64]) {
    out[0] = 1.0;
    out[1] = 1.0;
}

fn ex6_right(_t: f64, out: &mut [f64]) {
    out[0] = 0.0;
    out[1] = 0.0;
}

fn zero_source(_x: f64, _t: f64, out: &mut [f64]) {
    out.fill(0.0);
}

// ---------------------------------------------------------------------------

static BUILTINS: [ProblemSpec; 8] = [
    ProblemSpec {
        id: "ex1_cubic",
        m: 3,
        domain: (0.0, core::f64::consts::TAU),
        f: cubic_f,
        fprime: cubic_fprime,
        a_mat: ex1_a,
        b_mat: ex1_b,
        g: ex1_g,
        source: ex1_src,
        has_source: true,
        initial: ex1_initial,
        exact: Some(ex1_exact),
        bc: BoundaryCondition::Periodic,
        eig_hint: Some(cubic_hint),
        linear_diffusion: true,
    },
    ProblemSpec {
        id: "ex1_convdom",
        m: 3,
        domain: (0.0, core::f64::consts::TAU),
        f: cubic_f,
        fprime: cubic_fprime,
        a_mat: convdom_a,
        b_mat: convdom_b,
        g: convdom_g,
        source: convdom_src,
        has_source: true,
        initial: ex1_initial,
        exact: Some(ex1_exact),
        bc: BoundaryCondition::Periodic,
        eig_hint: Some(cubic_hint),
        linear_diffusion: true,
    },
    ProblemSpec {
        id: "ex1_aniso",
        m: 3,
        domain: (0.0, core::f64::consts::TAU),
        f: cubic_f,
        fprime: cubic_fprime,
        a_mat: aniso_a,
        b_mat: aniso_b,
        g: aniso_g,
        source: aniso_src,
        has_source: true,
        initial: ex1_initial,
        exact: Some(ex1_exact),
        bc: BoundaryCondition::Periodic,
        eig_hint: Some(cubic_hint),
        linear_diffusion: true,
    },
    ProblemSpec {
        id: "ex3_longtime",
        m: 3,
        domain: (0.0, core::f64::consts::TAU),
        f: cubic_f,
        fprime: cubic_fprime,
        a_mat: ex1_a,
        b_mat: ex1_b,
        g: ex1_g,
        source: ex3_src,
        has_source: true,
        initial: ex3_initial,
        exact: Some(ex3_exact),
        bc: BoundaryCondition::Periodic,
        eig_hint: Some(cubic_hint),
        linear_diffusion: true,
    },
    ProblemSpec {
        id: "ex4_mixed",
        m: 2,
        domain: (0.0, core::f64::consts::PI),
        f: ex4_f,
        fprime: ex4_fprime,
        a_mat: ex4_a,
        b_mat: ex4_a, // A = I is its own square root
        g: ex4_g,
        source: ex4_src,
        has_source: true,
        initial: ex4_initial,
        exact: Some(ex4_exact),
        bc: BoundaryCondition::Mixed { g1: ex4_left, dg2: ex4_right_deriv },
        eig_hint: Some(ex4_hint),
        linear_diffusion: true,
    },
    ProblemSpec {
        id: "ex4_dirichlet",
        m: 2,
        domain: (0.0, core::f64::consts::PI),
        f: ex4_f,
        fprime: ex4_fprime,
        a_mat: ex4_a,
        b_mat: ex4_a,
        g: ex4_g,
        source: ex4_src,
        has_source: true,
        initial: ex4_initial,
        exact: Some(ex4_exact),
        bc: BoundaryCondition::Dirichlet { g1: ex4_left, g2: ex4_right },
        eig_hint: Some(ex4_hint),
        linear_diffusion: true,
    },
    ProblemSpec {
        id: "ex5_nonlindiff",
        m: 2,
        domain: (0.0, core::f64::consts::TAU),
        f: ex5_f,
        fprime: ex5_fprime,
        a_mat: ex5_a,
        b_mat: ex5_b,
        g: ex5_g,
        source: ex5_src,
        has_source: true,
        initial: ex5_initial,
        exact: Some(ex5_exact),
        bc: BoundaryCondition::Periodic,
        eig_hint: Some(ex5_hint),
        linear_diffusion: false,
    },
    ProblemSpec {
        id: "ex6_buckley",
        m: 2,
        domain: (0.0, 1.0),
        f: ex6_f,
        fprime: ex6_fprime,
        a_mat: ex6_a,
        b_mat: ex6_b,
        g: ex6_g,
        source: zero_source,
        has_source: false,
        initial: ex6_initial,
        exact: None,
        bc: BoundaryCondition::Dirichlet { g1: ex6_left, g2: ex6_right },
        eig_hint: Some(ex6_hint),
        linear_diffusion: false,
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smalleig::{decompose, validation_residuals};

    #[test]
    fn registry_lookup() {
        assert_eq!(builtin_ids().count(), 8);
        assert!(builtin("ex1_cubic").is_some());
        assert!(builtin("nope").is_none());
        let p = builtin("ex6_buckley").unwrap();
        assert_eq!(p.m, 2);
        assert!(!p.has_source && !p.linear_diffusion && p.exact.is_none());
    }

    #[test]
    fn initial_matches_exact_at_zero() {
        for id in ["ex1_cubic", "ex3_longtime", "ex4_mixed", "ex5_nonlindiff"] {
            let p = builtin(id).unwrap();
            let exact = p.exact.unwrap();
            for i in 0..7 {
                let x = p.domain.0 + (p.domain.1 - p.domain.0) * i as f64 / 6.0;
                let mut a = [0.0; 4];
                let mut b = [0.0; 4];
                (p.initial)(x, &mut a[..p.m]);
                exact(x, 0.0, &mut b[..p.m]);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn b_squared_is_a_everywhere() {
        let states: [&[f64]; 4] = [
            &[0.3, -0.7, 1.1, 0.0],
            &[0.9, 0.2, -0.4, 0.0],
            &[0.05, 0.95, 0.5, 0.0],
            &[1.0, 0.0, 0.25, 0.0],
        ];
        for p in BUILTINS.iter() {
            for u in states {
                let u = &u[..p.m];
                let mut a = [0.0; 16];
                let mut b = [0.0; 16];
                (p.a_mat)(u, &mut a[..p.m * p.m]);
                (p.b_mat)(u, &mut b[..p.m * p.m]);
                for r in 0..p.m {
                    for c in 0..p.m {
                        let mut s = 0.0;
                        for t in 0..p.m {
                            s += b[r * p.m + t] * b[t * p.m + c];
                        }
                        assert!(
                            (s - a[r * p.m + c]).abs() <= 1e-12,
                            "{}: B^2 != A at ({r},{c})",
                            p.id
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn buckley_leverett_pointwise() {
        assert_eq!(bl_h(0.0), 0.0);
        assert_eq!(bl_h(1.0), 1.0);
        assert!((bl_h(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(bl_a(-0.1), 0.0);
        assert_eq!(bl_a(1.2), 0.0);
        assert!((bl_a(0.5) - 1.0).abs() < 1e-15);
        // g is the antiderivative of bl_b, pinned at both degeneracy ends
        assert_eq!(bl_g(0.0), 0.0);
        assert_eq!(bl_g(-0.3), 0.0);
        assert!((bl_g(1.0) - core::f64::consts::PI / 40.0).abs() < 1e-16);
        assert_eq!(bl_g(1.5), bl_g(1.0));
        // midpoint: 0.05 * (0 + asin(sqrt(1/2))) = 0.05 * pi/4
        assert!((bl_g(0.5) - 0.05 * core::f64::consts::FRAC_PI_4).abs() < 1e-16);
    }

    #[test]
    fn hints_validate_against_jacobians() {
        let states: [&[f64]; 5] = [
            &[0.4, 0.4, 0.4, 0.0],
            &[0.8, -0.3, 0.1, 0.0],
            &[0.2, 0.2, 0.9, 0.0],
            &[1.05, 1.05, 0.5, 0.0], // BL overshoot: h' < 0 on both
            &[0.0, 0.0, 0.0, 0.0],   // BL boundary state: zero Jacobian
        ];
        for p in BUILTINS.iter() {
            let hint = p.eig_hint.unwrap();
            for u in states {
                let u = &u[..p.m];
                if let Some(h) = hint(u) {
                    let mut j = [0.0; 16];
                    (p.fprime)(u, &mut j[..p.m * p.m]);
                    let d = decompose(&j[..p.m * p.m], p.m, Some(h)).unwrap();
                    let (lr, jr) = validation_residuals(&d, &j[..p.m * p.m]);
                    assert!(lr <= 1e-10 && jr <= 1e-10, "{}: hint off ({lr:e},{jr:e})", p.id);
                }
            }
        }
    }

    #[test]
    fn buckley_hint_covers_symmetric_states_and_declines_others() {
        // symmetric states (the ones reachable from symmetric data) get hints
        for w in [0.0, 0.25, 0.5, 1.0, 1.07, -0.02] {
            assert!(ex6_hint(&[w, w]).is_some(), "no hint at w = {w}");
        }
        assert!(ex6_hint(&[0.3, 0.6]).is_none());
        // and the numeric path still resolves such states
        let mut j = [0.0; 4];
        ex6_fprime(&[0.3, 0.6], &mut j);
        let d = decompose(&j, 2, None).unwrap();
        let want = libm::sqrt(bl_dh(0.3) * bl_dh(0.6));
        assert!((d.lambda()[0] - want).abs() < 1e-12);
        assert!((d.lambda()[1] + want).abs() < 1e-12);
    }

    #[test]
    fn boundary_data_matches_exact_traces() {
        let p = builtin("ex4_dirichlet").unwrap();
        let exact = p.exact.unwrap();
        if let BoundaryCondition::Dirichlet { g1, g2 } = p.bc {
            for t in [0.0, 0.37, 1.0] {
                let mut want = [0.0; 2];
                let mut got = [0.0; 2];
                exact(0.0, t, &mut want);
                g1(t, &mut got);
                assert_eq!(got, want);
                exact(core::f64::consts::PI, t, &mut want);
                g2(t, &mut got);
                assert_eq!(got, want);
            }
        } else {
            panic!("wrong bc kind");
        }
    }
}
