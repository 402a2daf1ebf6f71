//! Experiment drivers. Each one takes a validated [`RunConfig`] and returns
//! the finished CSV as a string, so the binary and the test suite share the
//! exact same code paths.

use std::fmt::Write as _;

use ldg_core::field::l2_error_vs;
use ldg_core::fluxes::FluxConfig;
use ldg_core::ldg::{DiffusionPath, SemiDiscreteOp};
use ldg_core::mesh::build_uniform;
use ldg_core::problems::{BoundaryCondition, ProblemSpec};
use ldg_core::projections::{ggr_scalar, ggr_vector, l2_project, modified_projection_p, GgrSide};
use ldg_core::smalleig::{decompose, EigenDecomp};
use ldg_core::timestep::{integrate, integrate_with, TimeControl};
use ldg_core::{basis::quad_rule, DGField, Partition1D, QuadRule};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Mode, RunConfig};
use crate::csv::{plain, sci, CsvBuilder};

#[derive(Debug)]
pub enum DriverError {
    /// Configuration rejected by the scheme itself (bad degree/quadrature,
    /// boundary mismatch); maps to the same exit code as a parse error.
    Config(String),
    /// The integration failed (blow-up, interface eigendecomposition).
    Run(String),
}

impl std::fmt::Display for DriverError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DriverError::Config(m) | DriverError::Run(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for DriverError {}

pub fn dispatch(cfg: &RunConfig) -> Result<String, DriverError> {
    match cfg.mode {
        Mode::Run => run_snapshot(cfg),
        Mode::Convergence => run_convergence(cfg),
        Mode::History => run_history(cfg),
        Mode::Projtest => run_projtest(cfg),
        Mode::Fluxtest => run_fluxtest(cfg),
    }
}

fn make_op(cfg: &RunConfig, n: usize) -> Result<SemiDiscreteOp, DriverError> {
    let (x_lo, x_hi) = cfg.problem.domain;
    let periodic = matches!(cfg.problem.bc, BoundaryCondition::Periodic);
    let part = build_uniform(x_lo, x_hi, n, periodic)
        .map_err(|e| DriverError::Config(format!("cannot build mesh with {n} cells: {e}")))?;
    let fc = FluxConfig::new(cfg.theta).with_variant(cfg.variant);
    SemiDiscreteOp::new(*cfg.problem, part, cfg.k, fc, DiffusionPath::Auto, None)
        .map_err(|e| DriverError::Config(format!("cannot build scheme: {e}")))
}

fn control(cfg: &RunConfig) -> TimeControl {
    TimeControl {
        cfl: cfg.cfl.unwrap_or(1.0),
        t_end: cfg.t_end.expect("validated for integrating modes"),
        dt_override: cfg.dt_override,
    }
}

fn err_quad(k: usize) -> Result<QuadRule, DriverError> {
    quad_rule(k + 3).map_err(|e| DriverError::Config(format!("quadrature: {e}")))
}

/// ln(e_prev / e_cur) / ln(n_cur / n_prev); empty when undefined.
fn order_field(prev: Option<(usize, f64)>, n: usize, err: f64) -> String {
    match prev {
        Some((pn, pe)) if pe > 0.0 && err > 0.0 => {
            sci((pe / err).ln() / (n as f64 / pn as f64).ln())
        }
        _ => String::new(),
    }
}

/// Grid refinement against the exact solution: one row per cell count.
pub fn run_convergence(cfg: &RunConfig) -> Result<String, DriverError> {
    let prob = cfg.problem;
    let exact = prob.exact.expect("validated");
    let t_end = cfg.t_end.expect("validated");
    let eq = err_quad(cfg.k)?;
    let mut csv = CsvBuilder::new("k,theta,N,error,order");
    let mut prev: Option<(usize, f64)> = None;
    for &n in &cfg.cells {
        let mut op = make_op(cfg, n)?;
        let mut u = l2_project(prob.m, prob.initial, op.partition(), cfg.k, op.quad());
        integrate(&mut op, &mut u, &control(cfg))
            .map_err(|e| DriverError::Run(format!("N = {n}: {e}")))?;
        let err = l2_error_vs(&u, op.partition(), &eq, |x, out| exact(x, t_end, out));
        csv.row(&[
            cfg.k.to_string(),
            plain(cfg.theta),
            n.to_string(),
            sci(err),
            order_field(prev, n, err),
        ]);
        prev = Some((n, err));
    }
    Ok(csv.finish())
}

/// Error against the exact solution sampled along the time axis.
pub fn run_history(cfg: &RunConfig) -> Result<String, DriverError> {
    let prob = cfg.problem;
    let exact = prob.exact.expect("validated");
    let t_end = cfg.t_end.expect("validated");
    let n = cfg.cells[0];
    let eq = err_quad(cfg.k)?;
    let mut op = make_op(cfg, n)?;
    let part = op.partition().clone();
    let mut u = l2_project(prob.m, prob.initial, &part, cfg.k, op.quad());

    let mut csv = CsvBuilder::new("theta,t,error");
    let e0 = l2_error_vs(&u, &part, &eq, |x, out| exact(x, 0.0, out));
    csv.row(&[plain(cfg.theta), plain(0.0), sci(e0)]);

    let stride = cfg.history_stride as u64;
    let mut step: u64 = 0;
    let mut last_sampled = 0.0;
    integrate_with(&mut op, &mut u, &control(cfg), |t, uh| {
        step += 1;
        if step % stride == 0 {
            let e = l2_error_vs(uh, &part, &eq, |x, out| exact(x, t, out));
            csv.row(&[plain(cfg.theta), plain(t), sci(e)]);
            last_sampled = t;
        }
    })
    .map_err(|e| DriverError::Run(e.to_string()))?;

    // the stride may skip the last accepted step; always close at t_end
    if last_sampled != t_end {
        let e = l2_error_vs(&u, &part, &eq, |x, out| exact(x, t_end, out));
        csv.row(&[plain(cfg.theta), plain(t_end), sci(e)]);
    }
    Ok(csv.finish())
}

/// Solution dump on a fixed per-cell point grid.
pub fn snapshot_csv(u: &DGField, part: &Partition1D) -> String {
    let m = u.n_comp();
    let mut header = String::from("x");
    for i in 1..=m {
        let _ = write!(header, ",u{i}");
    }
    let mut csv = CsvBuilder::new(&header);
    let mut val = vec![0.0; m];
    for j in 0..u.n_cells() {
        // ten reference points per cell, endpoints included: both one-sided
        // traces at every interior interface appear in the file
        for r in 0..10 {
            let s = -1.0 + 2.0 * r as f64 / 9.0;
            u.eval_into(j, s, &mut val);
            let mut fields = vec![sci(part.to_physical(j, s))];
            fields.extend(val.iter().map(|&v| sci(v)));
            csv.row(&fields);
        }
    }
    csv.finish()
}

/// Integrate once and dump the solution at t_end.
pub fn run_snapshot(cfg: &RunConfig) -> Result<String, DriverError> {
    let prob = cfg.problem;
    let n = cfg.cells[0];
    let mut op = make_op(cfg, n)?;
    let part = op.partition().clone();
    let mut u = l2_project(prob.m, prob.initial, &part, cfg.k, op.quad());
    integrate(&mut op, &mut u, &control(cfg)).map_err(|e| DriverError::Run(e.to_string()))?;
    Ok(snapshot_csv(&u, &part))
}

/// Frozen characteristic decompositions at the mesh nodes, for the vector
/// projections: node t carries f'(u(x_t)).
fn frozen_eigs(
    prob: &ProblemSpec,
    mut u: impl FnMut(f64, &mut [f64]),
    part: &Partition1D,
) -> Result<Vec<EigenDecomp>, DriverError> {
    let m = prob.m;
    let mut state = vec![0.0; m];
    let mut jac = vec![0.0; m * m];
    let mut out = Vec::with_capacity(part.n_cells());
    for t in 0..part.n_cells() {
        let x = part.to_physical(t, -1.0);
        u(x, &mut state);
        (prob.fprime)(&state, &mut jac);
        let hint = prob.eig_hint.and_then(|h| h(&state));
        let d = decompose(&jac, m, hint).map_err(|e| {
            DriverError::Config(format!("eigendecomposition failed at node {t}: {e}"))
        })?;
        out.push(d);
    }
    Ok(out)
}

/// Accuracy ladder for every projection the problem supports.
pub fn run_projtest(cfg: &RunConfig) -> Result<String, DriverError> {
    let prob = cfg.problem;
    let m = prob.m;
    let k = cfg.k;
    let theta = cfg.theta;
    let (x_lo, x_hi) = prob.domain;
    let omega = core::f64::consts::TAU / (x_hi - x_lo);

    // smooth periodic targets; components dephased so the vector kinds do not
    // degenerate to copies of one scalar problem
    let uf = move |x: f64, out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            *o = (omega * x + 0.7 * i as f64).sin();
        }
    };
    let zf = move |x: f64| (omega * x).sin();

    // for constant-A problems p = B u_x is the compatible auxiliary target
    let mut bmat = vec![0.0; m * m];
    (prob.b_mat)(&vec![0.0; m], &mut bmat);
    let pf = {
        let bmat = bmat.clone();
        move |x: f64, out: &mut [f64]| {
            let mut du = vec![0.0; m];
            for (i, d) in du.iter_mut().enumerate() {
                *d = omega * (omega * x + 0.7 * i as f64).cos();
            }
            for i in 0..m {
                out[i] = (0..m).map(|c| bmat[i * m + c] * du[c]).sum();
            }
        }
    };

    let pq = quad_rule(k + 4).map_err(|e| DriverError::Config(format!("quadrature: {e}")))?;
    let eq = err_quad(k)?;

    let mut kinds: Vec<&str> = vec!["l2", "ggr_plus", "ggr_minus", "ggr_vector"];
    if prob.linear_diffusion {
        kinds.push("modified");
    }

    let mut csv = CsvBuilder::new("kind,k,theta,N,error,order");
    for kind in kinds {
        let mut prev: Option<(usize, f64)> = None;
        for &n in &cfg.cells {
            let part = build_uniform(x_lo, x_hi, n, true)
                .map_err(|e| DriverError::Config(format!("mesh: {e}")))?;
            let proj = match kind {
                "l2" => l2_project(m, uf, &part, k, &pq),
                "ggr_plus" | "ggr_minus" => {
                    let side = if kind == "ggr_plus" { GgrSide::Plus } else { GgrSide::Minus };
                    ggr_scalar(zf, &part, k, theta, side, &pq)
                        .map_err(|e| DriverError::Config(format!("{kind}: {e}")))?
                }
                "ggr_vector" => {
                    let eigs = frozen_eigs(prob, uf, &part)?;
                    ggr_vector(m, uf, &part, k, theta, &eigs, &pq)
                        .map_err(|e| DriverError::Config(format!("{kind}: {e}")))?
                }
                "modified" => {
                    let eigs = frozen_eigs(prob, uf, &part)?;
                    let pi_u = ggr_vector(m, uf, &part, k, theta, &eigs, &pq)
                        .map_err(|e| DriverError::Config(format!("ggr_vector: {e}")))?;
                    modified_projection_p(&pf, uf, &pi_u, prob, &part, k, theta, &pq)
                        .map_err(|e| DriverError::Config(format!("{kind}: {e}")))?
                }
                _ => unreachable!(),
            };
            let err = if kind == "ggr_plus" || kind == "ggr_minus" {
                l2_error_vs(&proj, &part, &eq, |x, out| out[0] = zf(x))
            } else if kind == "modified" {
                l2_error_vs(&proj, &part, &eq, |x, out| pf(x, out))
            } else {
                l2_error_vs(&proj, &part, &eq, |x, out| uf(x, out))
            };
            csv.row(&[
                kind.to_string(),
                k.to_string(),
                plain(theta),
                n.to_string(),
                sci(err),
                order_field(prev, n, err),
            ]);
            prev = Some((n, err));
        }
    }
    Ok(csv.finish())
}

fn random_field(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> DGField {
    let mut f = DGField::zeros(n, m, k);
    for c in f.coeff_mut() {
        *c = rng.random_range(-1.0..1.0);
    }
    f
}

fn apply_matrix(mat: &[f64], f: &DGField) -> DGField {
    let (n, m, k) = (f.n_cells(), f.n_comp(), f.degree());
    let mut out = DGField::zeros(n, m, k);
    for j in 0..n {
        for ell in 0..=k {
            for i in 0..m {
                let v: f64 = (0..m).map(|c| mat[i * m + c] * f.get(j, c, ell)).sum();
                out.set(j, i, ell, v);
            }
        }
    }
    out
}

fn coeff_dot(a: &DGField, b: &DGField) -> f64 {
    a.coeff().iter().zip(b.coeff()).map(|(x, y)| x * y).sum()
}

/// Worst residual of the discrete flux identities over random fields:
/// skew-adjointness of the H^theta pair, the energy balance of the pure
/// diffusion operator, and conservation of cell averages.
pub fn run_fluxtest(cfg: &RunConfig) -> Result<String, DriverError> {
    const TRIALS: usize = 5;
    let prob = cfg.problem;
    let m = prob.m;
    let k = cfg.k;
    let theta = cfg.theta;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_C511);

    let mut csv = CsvBuilder::new("check,k,theta,N,residual");
    for &n in &cfg.cells {
        let op = make_op(cfg, n)?;
        let part = op.partition().clone();

        // B at a fixed interior state is a symmetric constant matrix M;
        // sum_j H^theta_j(M xi, psi) + H^(1-theta)_j(M psi, xi) = 0
        let mut mat = vec![0.0; m * m];
        (prob.b_mat)(&vec![0.3; m], &mut mat);
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let xi = random_field(&mut rng, n, m, k);
            let psi = random_field(&mut rng, n, m, k);
            let mut r1 = DGField::zeros(n, m, k);
            let mut r2 = DGField::zeros(n, m, k);
            op.h_theta(&apply_matrix(&mat, &xi), theta, &mut r1);
            op.h_theta(&apply_matrix(&mat, &psi), 1.0 - theta, &mut r2);
            let s = coeff_dot(&psi, &r1) + coeff_dot(&xi, &r2);
            let scale = 1.0 + xi.l2_norm_modal(&part) * psi.l2_norm_modal(&part);
            worst = worst.max(s.abs() / scale);
        }
        csv.row(&[
            "skew".to_string(),
            k.to_string(),
            plain(theta),
            n.to_string(),
            sci(worst),
        ]);

        // (u, L u) = -||p||^2 needs the convection terms off and a state
        // independent A; only then is the identity exact
        if prob.linear_diffusion {
            fn zero_vec(_u: &[f64], out: &mut [f64]) {
                out.fill(0.0);
            }
            let mut pd = *prob;
            pd.f = zero_vec;
            pd.fprime = zero_vec;
            pd.has_source = false;
            pd.eig_hint = None;
            let fc = FluxConfig::new(theta).with_variant(cfg.variant);
            let mut dop = SemiDiscreteOp::new(pd, part.clone(), k, fc, DiffusionPath::Linear, None)
                .map_err(|e| DriverError::Config(format!("cannot build scheme: {e}")))?;
            let mut worst = 0.0f64;
            for _ in 0..TRIALS {
                let u = random_field(&mut rng, n, m, k);
                let mut rhs = DGField::zeros(n, m, k);
                dop.rhs(&u, 0.0, &mut rhs)
                    .map_err(|e| DriverError::Run(e.to_string()))?;
                let lhs = u.inner_modal(&rhs, &part);
                let p = dop.compute_aux(&u, 0.0);
                let pp = p.inner_modal(p, &part);
                worst = worst.max((lhs + pp).abs() / pp.max(1e-30));
            }
            csv.row(&[
                "energy".to_string(),
                k.to_string(),
                plain(theta),
                n.to_string(),
                sci(worst),
            ]);
        }

        // no source, periodic: integral of the RHS vanishes componentwise
        let mut ns = *prob;
        ns.has_source = false;
        let fc = FluxConfig::new(theta).with_variant(cfg.variant);
        let mut cop = SemiDiscreteOp::new(ns, part.clone(), k, fc, DiffusionPath::Auto, None)
            .map_err(|e| DriverError::Config(format!("cannot build scheme: {e}")))?;
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let mut u = random_field(&mut rng, n, m, k);
            u.scale(0.5);
            let mut rhs = DGField::zeros(n, m, k);
            cop.rhs(&u, 0.0, &mut rhs)
                .map_err(|e| DriverError::Run(e.to_string()))?;
            for i in 0..m {
                let total: f64 = (0..n).map(|j| part.width(j) * rhs.get(j, i, 0)).sum();
                worst = worst.max(total.abs());
            }
        }
        csv.row(&[
            "conservation".to_string(),
            k.to_string(),
            plain(theta),
            n.to_string(),
            sci(worst),
        ]);
    }
    Ok(csv.finish())
}
