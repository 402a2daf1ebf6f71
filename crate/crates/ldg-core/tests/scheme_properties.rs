//! Structural properties of the semi-discrete operator: the summed
//! skew-symmetry of the H bilinear forms, the discrete energy identity,
//! conservation of cell averages, the equivalence of the linear and
//! nonlinear diffusion paths for constant A, and the temporal order of the
//! SSP-RK3 stepper.

use ldg_core::field::l2_error_vs;
use ldg_core::fluxes::{FluxConfig, FluxVariant};
use ldg_core::ldg::{DiffusionPath, SemiDiscreteOp};
use ldg_core::mesh::build_uniform;
use ldg_core::problems::{builtin, BoundaryCondition, ProblemSpec};
use ldg_core::timestep::{integrate_with, TimeControl};
use ldg_core::{DGField, Partition1D};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_field(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> DGField {
    let mut f = DGField::zeros(n, m, k);
    for c in f.coeff_mut() {
        *c = rng.random_range(-1.0..1.0);
    }
    f
}

/// out = M f, applied mode-wise (M constant in x).
fn apply_matrix(mat: &[f64], f: &DGField) -> DGField {
    let (n, m, k) = (f.n_cells(), f.n_comp(), f.degree());
    let mut out = DGField::zeros(n, m, k);
    for j in 0..n {
        for ell in 0..=k {
            for i in 0..m {
                let mut s = 0.0;
                for c in 0..m {
                    s += mat[i * m + c] * f.get(j, c, ell);
                }
                out.set(j, i, ell, s);
            }
        }
    }
    out
}

fn dot(a: &DGField, b: &DGField) -> f64 {
    a.coeff().iter().zip(b.coeff()).map(|(x, y)| x * y).sum()
}

#[test]
fn h_forms_are_skew_adjoint() {
    // sum_j H^theta_j(M xi, psi) = -sum_j H^(1-theta)_j(M psi, xi)
    // for any symmetric M and periodic fields
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1001);
    let prob = builtin("ex1_cubic").unwrap();
    for _case in 0..100 {
        let n = rng.random_range(4..20);
        let k = rng.random_range(0..=4usize);
        let m = rng.random_range(1..=3usize);
        let theta = rng.random_range(0.55..1.4);
        let part = build_uniform(0.0, 1.0, n, true).unwrap();
        let op = SemiDiscreteOp::new(
            *prob,
            part.clone(),
            k,
            FluxConfig::new(theta),
            DiffusionPath::Auto,
            None,
        )
        .unwrap();

        let mut mat = vec![0.0; m * m];
        for i in 0..m {
            for c in 0..=i {
                let v = rng.random_range(-1.0..1.0);
                mat[i * m + c] = v;
                mat[c * m + i] = v;
            }
        }
        let xi = random_field(&mut rng, n, m, k);
        let psi = random_field(&mut rng, n, m, k);

        let mut r1 = DGField::zeros(n, m, k);
        let mut r2 = DGField::zeros(n, m, k);
        op.h_theta(&apply_matrix(&mat, &xi), theta, &mut r1);
        op.h_theta(&apply_matrix(&mat, &psi), 1.0 - theta, &mut r2);
        let s = dot(&psi, &r1) + dot(&xi, &r2);

        let scale = 1.0 + xi.l2_norm_modal(&part) * psi.l2_norm_modal(&part);
        assert!(s.abs() <= 1e-12 * scale, "case {_case}: residual {s:e}");
    }
}

fn pure_diffusion_spec() -> ProblemSpec {
    fn zero_vec(_u: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }
    let mut p = *builtin("ex1_cubic").unwrap();
    p.f = zero_vec;
    p.fprime = zero_vec;
    p.has_source = false;
    p.eig_hint = None;
    p
}

#[test]
fn energy_identity_for_pure_diffusion() {
    // f = 0, s = 0, A = I, periodic: (u_h, L u_h) = -||p_h||^2
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1002);
    let prob = pure_diffusion_spec();
    for case in 0..50 {
        let n = rng.random_range(6..16);
        let k = rng.random_range(0..=3usize);
        let theta = rng.random_range(0.55..1.4);
        let variant = if rng.random_bool(0.5) { FluxVariant::Flux1 } else { FluxVariant::Flux2 };
        let part = build_uniform(0.0, 1.0, n, true).unwrap();
        let cfg = FluxConfig::new(theta).with_variant(variant);
        let mut op =
            SemiDiscreteOp::new(prob, part.clone(), k, cfg, DiffusionPath::Auto, None).unwrap();

        let u = random_field(&mut rng, n, 3, k);
        let mut rhs = DGField::zeros(n, 3, k);
        op.rhs(&u, 0.0, &mut rhs).unwrap();
        let lhs = u.inner_modal(&rhs, &part);
        let p = op.compute_aux(&u, 0.0);
        let pp = p.inner_modal(p, &part);
        assert!(
            (lhs + pp).abs() <= 1e-11 * pp.max(1e-30),
            "case {case}: (u, Lu) = {lhs:e}, ||p||^2 = {pp:e}"
        );
    }
}

#[test]
fn cell_averages_are_conserved() {
    // periodic, no source: the mode-0 RHS rows telescope to zero
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1003);
    for id in ["ex1_cubic", "ex5_nonlindiff"] {
        let prob = builtin(id).unwrap();
        let mut p = *prob;
        p.has_source = false;
        let n = 16;
        let k = 2;
        let part = build_uniform(prob.domain.0, prob.domain.1, n, true).unwrap();
        let mut op = SemiDiscreteOp::new(
            p,
            part.clone(),
            k,
            FluxConfig::new(0.8),
            DiffusionPath::Auto,
            None,
        )
        .unwrap();
        let mut u = random_field(&mut rng, n, p.m, k);
        u.scale(0.5);
        let mut rhs = DGField::zeros(n, p.m, k);
        op.rhs(&u, 0.0, &mut rhs).unwrap();
        for i in 0..p.m {
            let total: f64 = (0..n).map(|j| part.width(j) * rhs.get(j, i, 0)).sum();
            assert!(total.abs() <= 1e-12, "{id} component {i}: drift {total:e}");
        }
    }
}

#[test]
fn linear_and_nonlinear_paths_agree_on_linear_problems() {
    // constant A, m = 3: both paths must produce the same RHS
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1004);
    let prob = builtin("ex1_cubic").unwrap();
    let n = 12;
    let k = 2;
    let part = build_uniform(prob.domain.0, prob.domain.1, n, true).unwrap();
    let cfg = FluxConfig::new(0.85);
    let mut lin =
        SemiDiscreteOp::new(*prob, part.clone(), k, cfg, DiffusionPath::Linear, None).unwrap();
    let mut non =
        SemiDiscreteOp::new(*prob, part.clone(), k, cfg, DiffusionPath::Nonlinear, None).unwrap();
    for _ in 0..10 {
        let u = random_field(&mut rng, n, 3, k);
        let mut r1 = DGField::zeros(n, 3, k);
        let mut r2 = DGField::zeros(n, 3, k);
        lin.rhs(&u, 0.3, &mut r1).unwrap();
        non.rhs(&u, 0.3, &mut r2).unwrap();
        let scale = 1.0 + r1.max_abs();
        let diff = r1
            .coeff()
            .iter()
            .zip(r2.coeff())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(diff <= 1e-13 * scale, "paths diverge by {diff:e}");
    }
}

fn scalar_heat_spec(linear: bool) -> ProblemSpec {
    const A: f64 = 0.7;
    fn f(u: &[f64], out: &mut [f64]) {
        out[0] = 0.5 * u[0] * u[0];
    }
    fn fprime(u: &[f64], out: &mut [f64]) {
        out[0] = u[0];
    }
    fn a_mat(_u: &[f64], out: &mut [f64]) {
        out[0] = A;
    }
    fn b_mat(_u: &[f64], out: &mut [f64]) {
        out[0] = libm::sqrt(A);
    }
    fn g(u: &[f64], out: &mut [f64]) {
        out[0] = libm::sqrt(A) * u[0];
    }
    fn zero_src(_x: f64, _t: f64, out: &mut [f64]) {
        out.fill(0.0);
    }
    fn init(x: f64, out: &mut [f64]) {
        out[0] = libm::sin(x);
    }
    ProblemSpec {
        id: "scalar_heat",
        m: 1,
        domain: (0.0, core::f64::consts::TAU),
        f,
        fprime,
        a_mat,
        b_mat,
        g,
        source: zero_src,
        has_source: false,
        initial: init,
        exact: None,
        bc: BoundaryCondition::Periodic,
        eig_hint: None,
        linear_diffusion: linear,
    }
}

#[test]
fn scalar_secant_matches_linear_path() {
    // m = 1, constant A, linear_diffusion unset: the secant matrix is taken
    // for real and must still reproduce the linear path on O(1) jumps
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1005);
    let plin = scalar_heat_spec(true);
    let pnon = scalar_heat_spec(false);
    let n = 14;
    let k = 2;
    let part = build_uniform(0.0, core::f64::consts::TAU, n, true).unwrap();
    let cfg = FluxConfig::new(0.8);
    let mut lin =
        SemiDiscreteOp::new(plin, part.clone(), k, cfg, DiffusionPath::Auto, None).unwrap();
    let mut non =
        SemiDiscreteOp::new(pnon, part.clone(), k, cfg, DiffusionPath::Auto, None).unwrap();
    for case in 0..20 {
        let u = random_field(&mut rng, n, 1, k);
        let mut r1 = DGField::zeros(n, 1, k);
        let mut r2 = DGField::zeros(n, 1, k);
        lin.rhs(&u, 0.0, &mut r1).unwrap();
        non.rhs(&u, 0.0, &mut r2).unwrap();
        let scale = 1.0 + r1.max_abs();
        let diff = r1
            .coeff()
            .iter()
            .zip(r2.coeff())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(diff <= 1e-13 * scale, "case {case}: secant deviates by {diff:e}");
    }
}

fn op_for(id: &str, n: usize, k: usize, theta: f64) -> (SemiDiscreteOp, Partition1D) {
    let prob = builtin(id).unwrap();
    let part = build_uniform(prob.domain.0, prob.domain.1, n, true).unwrap();
    let op = SemiDiscreteOp::new(
        *prob,
        part.clone(),
        k,
        FluxConfig::new(theta),
        DiffusionPath::Auto,
        None,
    )
    .unwrap();
    (op, part)
}

#[test]
fn integrate_steps_and_clipping() {
    let (mut op, part) = op_for("ex1_cubic", 4, 0, 1.0);
    let quad = op.quad().clone();
    let prob = builtin("ex1_cubic").unwrap();
    let mut u0 = ldg_core::projections::l2_project(
        3,
        |x, out| (prob.initial)(x, out),
        &part,
        0,
        &quad,
    );

    // t_end an exact multiple of dt: four equal steps, landing exactly
    let mut times = Vec::new();
    let ctl = TimeControl { cfl: 1.0, t_end: 1e-3, dt_override: Some(2.5e-4) };
    let stats = integrate_with(&mut op, &mut u0, &ctl, |t, _| times.push(t)).unwrap();
    assert_eq!(stats.steps, 4);
    assert_eq!(times, vec![2.5e-4, 5e-4, 7.5e-4, 1e-3]);

    // non-multiple: the last step is clipped and still lands exactly
    let mut times = Vec::new();
    let ctl = TimeControl { cfl: 1.0, t_end: 9e-4, dt_override: Some(2.5e-4) };
    let stats = integrate_with(&mut op, &mut u0, &ctl, |t, _| times.push(t)).unwrap();
    assert_eq!(stats.steps, 4);
    assert_eq!(*times.last().unwrap(), 9e-4);
}

#[test]
fn ssp_rk3_is_third_order_in_time() {
    // fixed coarse mesh, shrinking dt, error measured against a tiny-dt
    // reference isolates the temporal component
    let prob = builtin("ex1_cubic").unwrap();
    let n = 10;
    let k = 2;
    let t_end = 0.5;
    let run = |dt: f64| -> DGField {
        let (mut op, part) = op_for("ex1_cubic", n, k, 1.0);
        let quad = op.quad().clone();
        let mut u = ldg_core::projections::l2_project(
            3,
            |x, out| (prob.initial)(x, out),
            &part,
            k,
            &quad,
        );
        let ctl = TimeControl { cfl: 0.0, t_end, dt_override: Some(dt) };
        ldg_core::timestep::integrate(&mut op, &mut u, &ctl).unwrap();
        u
    };
    let reference = run(2.5e-4);
    let errs: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| {
            let u = run(dt);
            let mut d = u.clone();
            d.axpy(-1.0, &reference);
            d.max_abs()
        })
        .collect();
    for w in errs.windows(2) {
        let slope = (w[0] / w[1]).log2();
        assert!((slope - 3.0).abs() <= 0.4, "temporal slope {slope}, errors {errs:?}");
    }
}

#[test]
fn manufactured_convergence_smoke() {
    // ex1_cubic, theta = 1, P1: errors halve at second order and the finest
    // level sits near the reference value 5.55e-3 at N = 40
    let prob = builtin("ex1_cubic").unwrap();
    let mut errs = Vec::new();
    for n in [10usize, 20, 40] {
        let (mut op, part) = op_for("ex1_cubic", n, 1, 1.0);
        let quad = op.quad().clone();
        let mut u = ldg_core::projections::l2_project(
            3,
            |x, out| (prob.initial)(x, out),
            &part,
            1,
            &quad,
        );
        let ctl = TimeControl { cfl: 0.005, t_end: 1.0, dt_override: None };
        ldg_core::timestep::integrate(&mut op, &mut u, &ctl).unwrap();
        let exact = prob.exact.unwrap();
        let err = l2_error_vs(&u, &part, &ldg_core::basis::quad_rule(1 + 3).unwrap(), |x, out| {
            exact(x, 1.0, out)
        });
        errs.push(err);
    }
    let order = (errs[1] / errs[2]).log2();
    assert!((order - 2.0).abs() <= 0.15, "order {order}, errors {errs:?}");
    let rel = (errs[2] - 5.55e-3).abs() / 5.55e-3;
    assert!(rel <= 0.15, "N=40 error {:.3e} vs 5.55e-3 ({:.1}%)", errs[2], 100.0 * rel);
}

#[test]
fn dirichlet_boundary_damps_every_mode() {
    // u_t = u_xx on (0, pi), u = exp(-9 t) sin(3 x), homogeneous Dirichlet.
    // The jump penalty at the right boundary is what couples the top cell
    // mode of odd degrees to the diffusion; without it the last-cell slope
    // for k = 1 is a zero mode of the spatial operator and never relaxes.
    fn zero_vec(_u: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }
    fn zero_t(_t: f64, out: &mut [f64]) {
        out.fill(0.0);
    }
    let mut prob = *builtin("ex4_dirichlet").unwrap();
    prob.f = zero_vec;
    prob.fprime = zero_vec;
    prob.has_source = false;
    prob.eig_hint = None;
    prob.bc = BoundaryCondition::Dirichlet { g1: zero_t, g2: zero_t };
    prob.initial = |x, out| {
        out[0] = (3.0 * x).sin();
        out[1] = (3.0 * x).sin();
    };
    let t_end: f64 = 0.1;
    let exact = move |x: f64, out: &mut [f64]| {
        let v = (-9.0 * t_end).exp() * (3.0 * x).sin();
        out[0] = v;
        out[1] = v;
    };
    for k in [1usize, 2] {
        let mut errs = Vec::new();
        for n in [20usize, 40] {
            let part = build_uniform(prob.domain.0, prob.domain.1, n, false).unwrap();
            let mut op = SemiDiscreteOp::new(
                prob,
                part.clone(),
                k,
                FluxConfig::new(1.0),
                DiffusionPath::Auto,
                None,
            )
            .unwrap();
            let mut u = ldg_core::projections::l2_project(
                prob.m,
                |x, out| (prob.initial)(x, out),
                &part,
                k,
                op.quad(),
            );
            let ctl = TimeControl { cfl: 0.005, t_end, dt_override: None };
            ldg_core::timestep::integrate(&mut op, &mut u, &ctl).unwrap();
            errs.push(l2_error_vs(
                &u,
                &part,
                &ldg_core::basis::quad_rule(k + 4).unwrap(),
                exact,
            ));
            if n == 40 {
                // the last-cell slope must track the exact boundary slope
                let mut lo = [0.0f64; 2];
                let mut hi = [0.0f64; 2];
                u.eval_into(n - 1, -1.0, &mut lo);
                u.eval_into(n - 1, 1.0, &mut hi);
                let slope = (hi[0] - lo[0]) / part.width(n - 1);
                let want = 3.0 * (-9.0 * t_end).exp() * (3.0 * core::f64::consts::PI).cos();
                assert!(
                    (slope - want).abs() <= 0.15 * want.abs(),
                    "k={k}: last-cell slope {slope} vs exact {want}"
                );
            }
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(
            order >= (k as f64) + 0.8,
            "k={k}: errors {errs:?} give order {order}"
        );
    }
}
