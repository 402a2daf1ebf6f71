//! Explicit SSP-RK3 time integration (Shu-Osher form) with the parabolic
//! step-size rule dt = cfl * h_max^2 and exact landing on t_end.

use core::fmt;

use crate::field::DGField;
use crate::ldg::{SchemeError, SemiDiscreteOp};

#[derive(Debug, Clone, Copy)]
pub struct TimeControl {
    pub cfl: f64,
    pub t_end: f64,
    /// Bypass the cfl rule with a fixed step (temporal-order studies).
    pub dt_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeError {
    /// Non-finite state after a stage; `t` is the start of the offending step.
    BlowUp { t: f64, max_abs: f64 },
    Scheme(SchemeError),
}

impl fmt::Display for TimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeError::BlowUp { t, max_abs } => {
                write!(f, "solution blew up during the step starting at t = {t}: max |u| = {max_abs}")
            }
            TimeError::Scheme(e) => write!(f, "{e}"),
        }
    }
}

impl From<SchemeError> for TimeError {
    fn from(e: SchemeError) -> Self {
        TimeError::Scheme(e)
    }
}

/// Stage storage reused across steps.
pub struct RkScratch {
    l: DGField,
    tmp: DGField,
}

impl RkScratch {
    pub fn like(u: &DGField) -> Self {
        let z = DGField::zeros(u.n_cells(), u.n_comp(), u.degree());
        RkScratch { l: z.clone(), tmp: z }
    }
}

fn check_finite(state: &DGField, t: f64) -> Result<(), TimeError> {
    let mut worst = 0.0f64;
    let mut finite = true;
    for &v in state.coeff() {
        if !v.is_finite() {
            finite = false;
        }
        worst = worst.max(libm::fabs(v));
    }
    if finite {
        Ok(())
    } else {
        // all-NaN overflow leaves `worst` finite; report NaN rather than that
        let max_abs = if worst.is_finite() { f64::NAN } else { worst };
        Err(TimeError::BlowUp { t, max_abs })
    }
}

/// One Shu-Osher SSP-RK3 step of du/dt = rhs(u, t), u in place.
///
///   u1     = u + dt L(u, t)
///   u2     = 3/4 u + 1/4 (u1 + dt L(u1, t + dt))
///   u_next = 1/3 u + 2/3 (u2 + dt L(u2, t + dt/2))
pub fn rk3_stages<F>(
    u: &mut DGField,
    t: f64,
    dt: f64,
    mut rhs: F,
    work: &mut RkScratch,
) -> Result<(), TimeError>
where
    F: FnMut(&DGField, f64, &mut DGField) -> Result<(), SchemeError>,
{
    assert!(dt > 0.0, "dt must be positive");
    let (l, tmp) = (&mut work.l, &mut work.tmp);

    rhs(u, t, l)?;
    tmp.copy_from(u);
    tmp.axpy(dt, l);
    check_finite(tmp, t)?;

    rhs(tmp, t + dt, l)?;
    tmp.axpy(dt, l);
    tmp.scale(0.25);
    tmp.axpy(0.75, u);
    check_finite(tmp, t)?;

    rhs(tmp, t + 0.5 * dt, l)?;
    tmp.axpy(dt, l);
    tmp.scale(2.0 / 3.0);
    tmp.axpy(1.0 / 3.0, u);
    check_finite(tmp, t)?;

    u.copy_from(tmp);
    Ok(())
}

/// One SSP-RK3 step of the semi-discrete LDG operator.
pub fn ssp_rk3_step(
    op: &mut SemiDiscreteOp,
    u: &mut DGField,
    t: f64,
    dt: f64,
    work: &mut RkScratch,
) -> Result<(), TimeError> {
    rk3_stages(u, t, dt, |v, s, out| op.rhs(v, s, out), work)
}

#[derive(Debug, Clone, Copy)]
pub struct TimeStats {
    pub steps: u64,
    pub dt: f64,
}

/// March u from t = 0 to control.t_end. Step times are k * dt (no
/// accumulation drift); the final step is clipped to land on t_end exactly.
/// `on_step(t, u)` fires after every accepted step.
pub fn integrate_with(
    op: &mut SemiDiscreteOp,
    u: &mut DGField,
    control: &TimeControl,
    mut on_step: impl FnMut(f64, &DGField),
) -> Result<TimeStats, TimeError> {
    let dt0 = match control.dt_override {
        Some(d) => d,
        None => {
            let h = op.partition().max_width();
            control.cfl * h * h
        }
    };
    assert!(dt0 > 0.0 && dt0.is_finite(), "step size must be positive");
    assert!(control.t_end >= 0.0 && control.t_end.is_finite());

    let mut work = RkScratch::like(u);
    let mut steps: u64 = 0;
    let mut t = 0.0;
    while t < control.t_end {
        let remaining = control.t_end - t;
        let clipped = remaining <= dt0 * (1.0 + 1e-9);
        let dt = if clipped { remaining } else { dt0 };
        ssp_rk3_step(op, u, t, dt, &mut work)?;
        steps += 1;
        t = if clipped { control.t_end } else { steps as f64 * dt0 };
        on_step(t, u);
    }
    Ok(TimeStats { steps, dt: dt0 })
}

/// `integrate_with` without an observer.
pub fn integrate(
    op: &mut SemiDiscreteOp,
    u: &mut DGField,
    control: &TimeControl,
) -> Result<TimeStats, TimeError> {
    integrate_with(op, u, control, |_, _| {})
}
