//! Interface numerical fluxes: theta-weighted averages, the characteristic
//! upwind-biased convective flux, generalized alternating diffusive fluxes,
//! and the secant matrix B-hat used with nonlinear diffusion.

use crate::smalleig::EigenDecomp;

/// Pairing of the u-trace and p-trace weights in the alternating fluxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxVariant {
    /// u-hat = u^(theta), p-hat = p^(1-theta).
    Flux1,
    /// u-hat = u^(1-theta), p-hat = p^(theta).
    Flux2,
}

#[derive(Debug, Clone, Copy)]
pub struct FluxConfig {
    pub theta: f64,
    pub variant: FluxVariant,
    /// Jump magnitude below which B-hat falls back to B at the trace average.
    pub jump_floor: f64,
}

impl FluxConfig {
    /// The analysis requires theta > 1/2; any positive finite weight is
    /// accepted here so that the front experiments can probe other values.
    pub fn new(theta: f64) -> Self {
        assert!(theta.is_finite() && theta > 0.0, "flux weight must be finite and positive");
        FluxConfig { theta, variant: FluxVariant::Flux1, jump_floor: 1e-12 }
    }

    pub fn with_variant(mut self, variant: FluxVariant) -> Self {
        self.variant = variant;
        self
    }

    /// Weight applied to the minus trace of u (and of g(u)).
    pub fn u_weight(&self) -> f64 {
        match self.variant {
            FluxVariant::Flux1 => self.theta,
            FluxVariant::Flux2 => 1.0 - self.theta,
        }
    }

    /// Weight applied to the minus trace of the auxiliary variable p.
    pub fn p_weight(&self) -> f64 {
        match self.variant {
            FluxVariant::Flux1 => 1.0 - self.theta,
            FluxVariant::Flux2 => self.theta,
        }
    }
}

/// v^(theta) = theta v^- + (1 - theta) v^+.
pub fn weighted_average(minus: &[f64], plus: &[f64], theta: f64, out: &mut [f64]) {
    let tb = 1.0 - theta;
    for ((o, a), b) in out.iter_mut().zip(minus).zip(plus) {
        *o = theta * a + tb * b;
    }
}

/// Characteristic convective flux: project the one-sided flux traces onto the
/// left eigenvectors, upwind-bias each characteristic component by the sign of
/// its eigenvalue (zero rides the nonnegative branch), and transform back.
pub fn convective_flux(
    f_minus: &[f64],
    f_plus: &[f64],
    eig: &EigenDecomp,
    theta: f64,
    out: &mut [f64],
) {
    let m = eig.m();
    let tb = 1.0 - theta;
    out[..m].fill(0.0);
    for i in 0..m {
        let zm = eig.left_dot(i, f_minus);
        let zp = eig.left_dot(i, f_plus);
        let zh = if eig.lambda()[i] >= 0.0 {
            theta * zm + tb * zp
        } else {
            tb * zm + theta * zp
        };
        for row in 0..m {
            out[row] += zh * eig.r_entry(row, i);
        }
    }
}

/// The alternating pair (u-hat, p-hat) for the chosen variant.
pub fn diffusive_fluxes(
    u_minus: &[f64],
    u_plus: &[f64],
    p_minus: &[f64],
    p_plus: &[f64],
    config: &FluxConfig,
    u_hat: &mut [f64],
    p_hat: &mut [f64],
) {
    weighted_average(u_minus, u_plus, config.u_weight(), u_hat);
    weighted_average(p_minus, p_plus, config.p_weight(), p_hat);
}

/// g-hat = g^(theta), assembled from one-sided traces of g(u_h).
pub fn g_hat(g_minus: &[f64], g_plus: &[f64], theta: f64, out: &mut [f64]) {
    weighted_average(g_minus, g_plus, theta, out);
}

/// Secant matrix B-hat = [g(u)] [u]^T / |[u]|^2 (m x m row-major in `out`),
/// falling back to `fallback` (B at the trace average) below the jump floor.
pub fn b_hat(
    u_minus: &[f64],
    u_plus: &[f64],
    g_minus: &[f64],
    g_plus: &[f64],
    jump_floor: f64,
    fallback: &[f64],
    out: &mut [f64],
) {
    let m = u_minus.len();
    let mut nrm2 = 0.0;
    for i in 0..m {
        let d = u_plus[i] - u_minus[i];
        nrm2 += d * d;
    }
    if libm::sqrt(nrm2) >= jump_floor {
        for r in 0..m {
            let gj = g_plus[r] - g_minus[r];
            for c in 0..m {
                out[r * m + c] = gj * (u_plus[c] - u_minus[c]) / nrm2;
            }
        }
    } else {
        out[..m * m].copy_from_slice(&fallback[..m * m]);
    }
}
