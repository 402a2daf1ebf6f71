//! Eigendecomposition of small (m <= 4) real flux Jacobians at interfaces,
//! with analytic override.
//!
//! The numeric path runs characteristic-polynomial root finding (closed form
//! through m = 3, fixed-point iteration on the monic quartic for m = 4),
//! groups eigenvalues closer than 1e-8 * |J| into clusters, and extracts an
//! invariant-subspace basis per cluster by complete-pivot elimination. Exactly
//! repeated eigenvalues are handled through the cluster branch; *nearly*
//! repeated eigenvalues (gaps around the 1e-8 grouping threshold) sit on an
//! inherently ill-posed boundary and may be rejected — problems with such
//! Jacobians should register analytic decompositions.

use alloc::vec::Vec;
use core::fmt;

use crate::dense;

/// Largest supported Jacobian dimension.
pub const MMAX: usize = 4;

const CLUSTER_REL: f64 = 1e-8;
const RANK_REL: f64 = 1e-8;
const ABSORB_REL: f64 = 1e-4;
const VALIDATE_LR: f64 = 1e-10;
const VALIDATE_RESID_REL: f64 = 1e-10;

/// Eigenvalues (descending), right-eigenvector matrix R (columns r_i) and
/// left-eigenvector matrix L = R^{-1} (rows l_i), normalized so that
/// l_a . r_b = delta_ab. Fixed-capacity storage; logical size is `m`.
#[derive(Debug, Clone, Copy)]
pub struct EigenDecomp {
    m: usize,
    lambda: [f64; MMAX],
    r: [f64; MMAX * MMAX],
    l: [f64; MMAX * MMAX],
}

impl EigenDecomp {
    /// Assemble from slices; `r` and `l` are m x m row-major.
    pub fn from_parts(m: usize, lambda: &[f64], r: &[f64], l: &[f64]) -> Self {
        assert!(m >= 1 && m <= MMAX);
        assert_eq!(lambda.len(), m);
        assert_eq!(r.len(), m * m);
        assert_eq!(l.len(), m * m);
        let mut d = EigenDecomp {
            m,
            lambda: [0.0; MMAX],
            r: [0.0; MMAX * MMAX],
            l: [0.0; MMAX * MMAX],
        };
        d.lambda[..m].copy_from_slice(lambda);
        d.r[..m * m].copy_from_slice(r);
        d.l[..m * m].copy_from_slice(l);
        d
    }

    /// Decomposition of a diagonal Jacobian: eigen-pairs (d_i, e_i) sorted by
    /// descending eigenvalue, ties keeping the lower component first.
    pub fn from_diag(diag: &[f64]) -> Self {
        let m = diag.len();
        assert!(m >= 1 && m <= MMAX);
        let mut order: [usize; MMAX] = [0, 1, 2, 3];
        order[..m].sort_by(|&a, &b| diag[b].partial_cmp(&diag[a]).unwrap());
        let mut d = EigenDecomp {
            m,
            lambda: [0.0; MMAX],
            r: [0.0; MMAX * MMAX],
            l: [0.0; MMAX * MMAX],
        };
        for (pos, &i) in order[..m].iter().enumerate() {
            d.lambda[pos] = diag[i];
            d.r[i * m + pos] = 1.0;
            d.l[pos * m + i] = 1.0;
        }
        d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda[..self.m]
    }

    #[inline]
    pub fn r_entry(&self, row: usize, col: usize) -> f64 {
        self.r[row * self.m + col]
    }

    #[inline]
    pub fn l_entry(&self, row: usize, col: usize) -> f64 {
        self.l[row * self.m + col]
    }

    /// Row i of L as a slice (the i-th left eigenvector).
    #[inline]
    pub fn l_row(&self, i: usize) -> &[f64] {
        &self.l[i * self.m..(i + 1) * self.m]
    }

    /// z_i = l_i . v.
    #[inline]
    pub fn left_dot(&self, i: usize, v: &[f64]) -> f64 {
        let mut s = 0.0;
        for (a, b) in self.l_row(i).iter().zip(v) {
            s += a * b;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigError {
    /// m outside 1..=MMAX or slice length mismatch.
    BadShape,
    /// Complex eigenvalue pair beyond tolerance: non-symmetrizable Jacobian.
    Complex { max_im: f64 },
    /// Eigenvector rank deficiency (defective matrix).
    Defective,
    /// Assembled decomposition missed the L R = I / J R = R Lambda gates.
    Tolerance { residual: f64 },
    /// A problem-supplied analytic decomposition failed validation.
    InvalidHint { residual: f64 },
}

impl fmt::Display for EigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EigError::BadShape => write!(f, "jacobian must be m x m with 1 <= m <= {MMAX}"),
            EigError::Complex { max_im } => {
                write!(f, "non-symmetrizable jacobian: complex eigenvalues, |Im| up to {max_im:e}")
            }
            EigError::Defective => write!(f, "defective jacobian: eigenvector rank deficiency"),
            EigError::Tolerance { residual } => {
                write!(f, "eigendecomposition residual {residual:e} exceeds tolerance")
            }
            EigError::InvalidHint { residual } => {
                write!(f, "analytic decomposition failed validation (residual {residual:e})")
            }
        }
    }
}

fn frob_norm(j: &[f64]) -> f64 {
    let mut s = 0.0;
    for &v in j {
        s += v * v;
    }
    libm::sqrt(s)
}

/// Max-norm residuals (|L R - I|, |J R - R Lambda|) of a decomposition.
pub fn validation_residuals(d: &EigenDecomp, j: &[f64]) -> (f64, f64) {
    let m = d.m;
    let mut lr = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let mut s = 0.0;
            for t in 0..m {
                s += d.l_entry(a, t) * d.r_entry(t, b);
            }
            let want = if a == b { 1.0 } else { 0.0 };
            lr = lr.max(libm::fabs(s - want));
        }
    }
    let mut jr = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let mut s = 0.0;
            for t in 0..m {
                s += j[a * m + t] * d.r_entry(t, b);
            }
            s -= d.lambda[b] * d.r_entry(a, b);
            jr = jr.max(libm::fabs(s));
        }
    }
    (lr, jr)
}

/// Eigendecomposition of an m x m real Jacobian. A problem-supplied analytic
/// decomposition is validated and returned as-is; otherwise the numeric path
/// runs. Errors on complex spectra and defective matrices.
pub fn decompose(j: &[f64], m: usize, hint: Option<EigenDecomp>) -> Result<EigenDecomp, EigError> {
    if m == 0 || m > MMAX || j.len() != m * m {
        return Err(EigError::BadShape);
    }
    let scale = frob_norm(j).max(f64::MIN_POSITIVE);

    if let Some(h) = hint {
        if h.m != m {
            return Err(EigError::BadShape);
        }
        let (lr, jr) = validation_residuals(&h, j);
        if lr <= VALIDATE_LR && jr <= VALIDATE_RESID_REL * scale.max(1.0) {
            return Ok(h);
        }
        return Err(EigError::InvalidHint { residual: lr.max(jr / scale.max(1.0)) });
    }

    // characteristic polynomial lambda^m + a[0] lambda^{m-1} + ... + a[m-1]
    // by the Faddeev-LeVerrier recurrence
    let mut a = [0.0f64; MMAX];
    {
        let mut nmat = alloc::vec![0.0; m * m]; // N_1 = I
        for i in 0..m {
            nmat[i * m + i] = 1.0;
        }
        let mut jn = alloc::vec![0.0; m * m];
        for k in 1..=m {
            // jn = J * N_k
            for r in 0..m {
                for c in 0..m {
                    let mut s = 0.0;
                    for t in 0..m {
                        s += j[r * m + t] * nmat[t * m + c];
                    }
                    jn[r * m + c] = s;
                }
            }
            let mut tr = 0.0;
            for i in 0..m {
                tr += jn[i * m + i];
            }
            a[k - 1] = -tr / k as f64;
            if k < m {
                nmat.copy_from_slice(&jn);
                for i in 0..m {
                    nmat[i * m + i] += a[k - 1];
                }
            }
        }
    }

    let ctol = CLUSTER_REL * scale;
    let mut roots = [0.0f64; MMAX];
    match m {
        1 => roots[0] = -a[0],
        2 => {
            let disc = a[0] * a[0] - 4.0 * a[1];
            if disc < 0.0 {
                let im = 0.5 * libm::sqrt(-disc);
                if im > ctol {
                    return Err(EigError::Complex { max_im: im });
                }
                roots[0] = -0.5 * a[0];
                roots[1] = roots[0];
            } else {
                let sq = libm::sqrt(disc);
                // stable quadratic: avoid cancellation on the smaller root
                let q = -0.5 * (a[0] + if a[0] >= 0.0 { sq } else { -sq });
                roots[0] = q;
                roots[1] = if q != 0.0 { a[1] / q } else { -a[0] - q };
            }
        }
        3 => cubic_roots(a[0], a[1], a[2], ctol, &mut roots)?,
        4 => quartic_roots(&a, ctol, scale, &mut roots)?,
        _ => unreachable!(),
    }

    // Newton polish on the monic characteristic polynomial.  At a multiple
    // root p and p' are both rounding noise, where a raw Newton step is O(1)
    // and would wreck an already-exact root; skip residuals at noise level
    // and cap the total displacement instead.
    let mut pscale = 1.0f64;
    for &c in &a[..m] {
        pscale = pscale.max(libm::fabs(c));
    }
    for r in roots[..m].iter_mut() {
        let r0 = *r;
        for _ in 0..8 {
            let (p, dp) = horner_monic(&a[..m], *r);
            if libm::fabs(p) <= 1e-14 * pscale || libm::fabs(dp) < 1e-300 {
                break;
            }
            let step = p / dp;
            if libm::fabs(*r - step - r0) > 1e-6 * (1.0 + libm::fabs(r0)) {
                *r = r0;
                break;
            }
            *r -= step;
            if libm::fabs(step) <= 1e-15 * (1.0 + libm::fabs(*r)) {
                break;
            }
        }
    }

    roots[..m].sort_by(|x, y| y.partial_cmp(x).unwrap());


    // cluster nearly equal roots and extract an invariant-subspace basis per
    // cluster via complete-pivot elimination on J - mean(cluster) I.  A
    // multiple root comes out of the polynomial pipeline split by up to
    // ~sqrt(eps)*scale, so the rank test is the arbiter: a null space bigger
    // than the cluster absorbs the adjacent root, and the shift is then
    // re-centered on the subspace Rayleigh mean (second-order accurate)
    // before the basis is extracted again.
    let mut rmat = alloc::vec![0.0; m * m];
    let mut lambda = [0.0f64; MMAX];
    let mut col = 0usize;
    let mut start = 0usize;
    while start < m {
        let mut end = start + 1;
        while end < m && roots[end - 1] - roots[end] < ctol {
            end += 1;
        }
        let (mut basis, mean) = loop {
            let csize = end - start;
            let mut mean = 0.0;
            for &r in &roots[start..end] {
                mean += r;
            }
            mean /= csize as f64;

            let mut basis = null_space_at(j, m, mean, RANK_REL * scale);
            if basis.len() > csize
                && end < m
                && roots[end - 1] - roots[end] <= ABSORB_REL * scale
            {
                end += 1;
                continue;
            }
            if basis.len() != csize {
                return Err(EigError::Defective);
            }
            if csize > 1 {
                orthonormalize(&mut basis, m)?;
                let mut rq = 0.0;
                for v in &basis {
                    for r in 0..m {
                        for c in 0..m {
                            rq += v[r] * j[r * m + c] * v[c];
                        }
                    }
                }
                rq /= csize as f64;
                let refined = null_space_at(j, m, rq, RANK_REL * scale);
                if refined.len() == csize {
                    break (refined, rq);
                }
            }
            break (basis, mean);
        };
        let csize = end - start;
        debug_assert_eq!(basis.len(), csize);
        orthonormalize(&mut basis, m)?;
        // deterministic order and sign within the cluster
        basis.sort_by(|x, y| lex_desc(&x[..m], &y[..m]));
        for v in &mut basis {
            fix_sign(&mut v[..m]);
        }
        for v in &basis {
            for row in 0..m {
                rmat[row * m + col] = v[row];
            }
            lambda[col] = mean;
            col += 1;
        }
        start = end;
    }

    let lmat = dense::invert(&rmat, m).ok_or(EigError::Defective)?;

    let mut d = EigenDecomp {
        m,
        lambda: [0.0; MMAX],
        r: [0.0; MMAX * MMAX],
        l: [0.0; MMAX * MMAX],
    };
    d.lambda[..m].copy_from_slice(&lambda[..m]);
    d.r[..m * m].copy_from_slice(&rmat);
    d.l[..m * m].copy_from_slice(&lmat);

    let (lr, jr) = validation_residuals(&d, j);
    if lr > VALIDATE_LR || jr > VALIDATE_RESID_REL * scale.max(1.0) {
        return Err(EigError::Tolerance { residual: lr.max(jr / scale.max(1.0)) });
    }
    Ok(d)
}

/// Monic polynomial x^n + a[0] x^{n-1} + ... + a[n-1] and derivative at x.
fn horner_monic(a: &[f64], x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut dp = 0.0;
    for &c in a {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Real roots of x^3 + a x^2 + b x + c, trig form on the depressed cubic.
fn cubic_roots(a: f64, b: f64, c: f64, ctol: f64, out: &mut [f64; MMAX]) -> Result<(), EigError> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    if p < 0.0 {
        let sp = libm::sqrt(-p / 3.0);
        let arg = 3.0 * q / (2.0 * p * sp);
        if libm::fabs(arg) <= 1.0 + 1e-10 {
            // three real roots
            let phi = libm::acos(arg.clamp(-1.0, 1.0)) / 3.0;
            for k in 0..3 {
                out[k] = 2.0 * sp * libm::cos(phi - 2.0 * core::f64::consts::PI * k as f64 / 3.0)
                    - shift;
            }
            return Ok(());
        }
        // |arg| > 1: one real root, complex pair
        let t = single_real_depressed(p, q);
        return finish_cubic(t, p, q, shift, ctol, out);
    }
    if p == 0.0 && q == 0.0 {
        out[0] = -shift;
        out[1] = -shift;
        out[2] = -shift;
        return Ok(());
    }
    let t = single_real_depressed(p, q);
    finish_cubic(t, p, q, shift, ctol, out)
}

/// The real root of t^3 + p t + q when there is exactly one (Cardano).
fn single_real_depressed(p: f64, q: f64) -> f64 {
    let d = q * q / 4.0 + p * p * p / 27.0; // > 0 here
    let sd = libm::sqrt(libm::fabs(d));
    let u = libm::cbrt(-q / 2.0 + sd);
    let v = libm::cbrt(-q / 2.0 - sd);
    u + v
}

/// Deflate the depressed cubic by its real root t and vet the quadratic pair.
fn finish_cubic(
    t: f64,
    p: f64,
    _q: f64,
    shift: f64,
    ctol: f64,
    out: &mut [f64; MMAX],
) -> Result<(), EigError> {
    // t^3 + p t + q = (x - t)(x^2 + t x + (p + t^2))
    let disc = t * t - 4.0 * (p + t * t);
    if disc < 0.0 {
        let im = 0.5 * libm::sqrt(-disc);
        if im > ctol {
            return Err(EigError::Complex { max_im: im });
        }
        out[0] = t - shift;
        out[1] = -0.5 * t - shift;
        out[2] = -0.5 * t - shift;
        return Ok(());
    }
    let sq = libm::sqrt(disc);
    out[0] = t - shift;
    out[1] = 0.5 * (-t + sq) - shift;
    out[2] = 0.5 * (-t - sq) - shift;
    Ok(())
}

/// Roots of the monic quartic by Durand-Kerner iteration in complex
/// arithmetic; rejects spectra with imaginary parts beyond tolerance.
fn quartic_roots(
    a: &[f64; MMAX],
    ctol: f64,
    scale: f64,
    out: &mut [f64; MMAX],
) -> Result<(), EigError> {
    #[derive(Clone, Copy)]
    struct C {
        re: f64,
        im: f64,
    }
    impl C {
        fn sub(self, o: C) -> C {
            C { re: self.re - o.re, im: self.im - o.im }
        }
        fn mul(self, o: C) -> C {
            C {
                re: self.re * o.re - self.im * o.im,
                im: self.re * o.im + self.im * o.re,
            }
        }
        fn div(self, o: C) -> C {
            let d = o.re * o.re + o.im * o.im;
            C {
                re: (self.re * o.re + self.im * o.im) / d,
                im: (self.im * o.re - self.re * o.im) / d,
            }
        }
        fn abs(self) -> f64 {
            libm::hypot(self.re, self.im)
        }
    }

    let eval = |z: C| -> C {
        let mut p = C { re: 1.0, im: 0.0 };
        for &c in a.iter() {
            p = p.mul(z);
            p.re += c;
        }
        p
    };

    // Cauchy-style radius keeps the iterates in range
    let mut radius = 1.0f64;
    for &c in a.iter() {
        radius = radius.max(libm::fabs(c));
    }
    radius += 1.0;
    let seed = C { re: 0.4, im: 0.9 };
    let mut z = [C { re: 0.0, im: 0.0 }; 4];
    let mut cur = C { re: radius, im: 0.0 };
    for zi in z.iter_mut() {
        cur = cur.mul(seed);
        *zi = cur;
    }

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..4 {
            let mut denom = C { re: 1.0, im: 0.0 };
            for t in 0..4 {
                if t != i {
                    denom = denom.mul(z[i].sub(z[t]));
                }
            }
            let step = eval(z[i]).div(denom);
            z[i] = z[i].sub(step);
            max_step = max_step.max(step.abs());
        }
        if max_step < 1e-15 * (1.0 + radius) {
            break;
        }
    }

    let mut max_im = 0.0f64;
    for zi in &z {
        max_im = max_im.max(libm::fabs(zi.im));
    }
    if max_im > ctol.max(1e-13 * scale) {
        return Err(EigError::Complex { max_im });
    }
    for (o, zi) in out.iter_mut().zip(&z) {
        *o = zi.re;
    }
    Ok(())
}

/// Null-space basis of an m x m matrix by complete-pivot elimination;
/// pivots at or below `tol` count as zero. Basis vectors are appended.
/// Null-space basis of J - mu I.
fn null_space_at(j: &[f64], m: usize, mu: f64, tol: f64) -> Vec<[f64; MMAX]> {
    let mut w = alloc::vec![0.0; m * m];
    w.copy_from_slice(j);
    for i in 0..m {
        w[i * m + i] -= mu;
    }
    let mut basis = Vec::new();
    null_space(&mut w, m, tol, &mut basis);
    basis
}

fn null_space(w: &mut [f64], m: usize, tol: f64, basis: &mut Vec<[f64; MMAX]>) {
    let mut perm: [usize; MMAX] = [0, 1, 2, 3];
    let mut rank = 0usize;
    for step in 0..m {
        let mut best = 0.0f64;
        let (mut prow, mut pcol) = (step, step);
        for r in step..m {
            for c in step..m {
                let v = libm::fabs(w[r * m + perm[c]]);
                if v > best {
                    best = v;
                    prow = r;
                    pcol = c;
                }
            }
        }
        if best <= tol {
            break;
        }
        if prow != step {
            for c in 0..m {
                w.swap(prow * m + c, step * m + c);
            }
        }
        perm.swap(step, pcol);
        let d = w[step * m + perm[step]];
        for r in step + 1..m {
            let f = w[r * m + perm[step]] / d;
            if f != 0.0 {
                for c in step..m {
                    w[r * m + perm[c]] -= f * w[step * m + perm[c]];
                }
            }
            w[r * m + perm[step]] = 0.0;
        }
        rank += 1;
    }

    for free in rank..m {
        let mut x = [0.0f64; MMAX]; // logical coordinates
        x[free] = 1.0;
        for row in (0..rank).rev() {
            let mut s = 0.0;
            for c in row + 1..m {
                s += w[row * m + perm[c]] * x[c];
            }
            x[row] = -s / w[row * m + perm[row]];
        }
        let mut v = [0.0f64; MMAX];
        for c in 0..m {
            v[perm[c]] = x[c];
        }
        basis.push(v);
    }
}

fn orthonormalize(basis: &mut Vec<[f64; MMAX]>, m: usize) -> Result<(), EigError> {
    for i in 0..basis.len() {
        for t in 0..i {
            let mut dot = 0.0;
            for c in 0..m {
                dot += basis[i][c] * basis[t][c];
            }
            for c in 0..m {
                basis[i][c] -= dot * basis[t][c];
            }
        }
        let mut norm = 0.0;
        for c in 0..m {
            norm += basis[i][c] * basis[i][c];
        }
        let norm = libm::sqrt(norm);
        if norm < 1e-8 {
            return Err(EigError::Defective);
        }
        for c in 0..m {
            basis[i][c] /= norm;
        }
    }
    Ok(())
}

fn lex_desc(x: &[f64], y: &[f64]) -> core::cmp::Ordering {
    for (a, b) in x.iter().zip(y) {
        match b.partial_cmp(a) {
            Some(core::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    core::cmp::Ordering::Equal
}

/// First component of magnitude above 1e-12 made positive.
fn fix_sign(v: &mut [f64]) {
    for &c in v.iter() {
        if libm::fabs(c) > 1e-12 {
            if c < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_two_by_two() {
        let j = [3.0, 0.0, 0.0, 1.0];
        let d = decompose(&j, 2, None).unwrap();
        assert_eq!(d.lambda(), &[3.0, 1.0]);
        for r in 0..2 {
            for c in 0..2 {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((d.r_entry(r, c) - want).abs() < 1e-12);
                assert!((d.l_entry(r, c) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_degenerate_branch() {
        let j = [1.0, 0.0, 0.0, 1.0];
        let d = decompose(&j, 2, None).unwrap();
        assert!((d.lambda()[0] - 1.0).abs() < 1e-12);
        assert!((d.lambda()[1] - 1.0).abs() < 1e-12);
        // any orthonormal basis is acceptable
        for a in 0..2 {
            for b in 0..2 {
                let mut dot = 0.0;
                for r in 0..2 {
                    dot += d.r_entry(r, a) * d.r_entry(r, b);
                }
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
        let (lr, jr) = validation_residuals(&d, &j);
        assert!(lr < 1e-12 && jr < 1e-12);
    }

    #[test]
    fn antidiagonal_buckley_leverett_shape() {
        // J = [[0, c], [c, 0]] -> lambda = +-c, eigenvectors (1, +-1)/sqrt(2)
        let c = 1.2371791482634838; // value in the style of f'(1/2) for the BL flux
        let j = [0.0, c, c, 0.0];
        let d = decompose(&j, 2, None).unwrap();
        assert!((d.lambda()[0] - c).abs() < 1e-12);
        assert!((d.lambda()[1] + c).abs() < 1e-12);
        let s = 1.0 / 2f64.sqrt();
        assert!((d.r_entry(0, 0) - s).abs() < 1e-10);
        assert!((d.r_entry(1, 0) - s).abs() < 1e-10);
        assert!((d.r_entry(0, 1) - s).abs() < 1e-10);
        assert!((d.r_entry(1, 1) + s).abs() < 1e-10);
    }

    #[test]
    fn complex_rotation_rejected() {
        let j = [0.0, -1.0, 1.0, 0.0];
        match decompose(&j, 2, None) {
            Err(EigError::Complex { max_im }) => assert!((max_im - 1.0).abs() < 1e-12),
            other => panic!("expected complex rejection, got {other:?}"),
        }
    }

    #[test]
    fn defective_jordan_block_rejected() {
        let j = [1.0, 1.0, 0.0, 1.0];
        assert!(matches!(decompose(&j, 2, None), Err(EigError::Defective)));
    }

    #[test]
    fn hint_is_validated_and_returned() {
        let j = [2.0, 0.0, 0.0, -1.0];
        let good = EigenDecomp::from_diag(&[2.0, -1.0]);
        let d = decompose(&j, 2, Some(good)).unwrap();
        assert_eq!(d.lambda(), &[2.0, -1.0]);

        let bad = EigenDecomp::from_diag(&[5.0, -1.0]);
        assert!(matches!(decompose(&j, 2, Some(bad)), Err(EigError::InvalidHint { .. })));
    }

    #[test]
    fn from_diag_sorts_descending_with_permuted_axes() {
        let d = EigenDecomp::from_diag(&[1.0, 3.0, 2.0]);
        assert_eq!(d.lambda(), &[3.0, 2.0, 1.0]);
        // column 0 must be e_1 (the eigenvector of 3.0)
        assert_eq!(d.r_entry(1, 0), 1.0);
        assert_eq!(d.r_entry(0, 2), 1.0);
        let j = [1.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 2.0];
        let (lr, jr) = validation_residuals(&d, &j);
        assert!(lr == 0.0 && jr == 0.0);
    }

    #[test]
    fn cubic_and_quartic_spectra() {
        // companion-style matrices with known spectra
        let j3 = [
            0.0, 1.0, 0.0, //
            0.0, 0.0, 1.0, //
            6.0, -11.0, 6.0, // char poly x^3-6x^2+11x-6 = (x-1)(x-2)(x-3)
        ];
        let d = decompose(&j3, 3, None).unwrap();
        let want = [3.0, 2.0, 1.0];
        for (g, w) in d.lambda().iter().zip(want) {
            assert!((g - w).abs() < 1e-10, "got {g} want {w}");
        }

        let j4 = [
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            -24.0, 50.0, -35.0, 10.0, // (x-1)(x-2)(x-3)(x-4)
        ];
        let d = decompose(&j4, 4, None).unwrap();
        let want = [4.0, 3.0, 2.0, 1.0];
        for (g, w) in d.lambda().iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "got {g} want {w}");
        }
        let (lr, jr) = validation_residuals(&d, &j4);
        assert!(lr < 1e-10 && jr < 1e-9);
    }

    #[test]
    fn one_by_one() {
        let d = decompose(&[-0.7], 1, None).unwrap();
        assert_eq!(d.lambda(), &[-0.7]);
        assert_eq!(d.r_entry(0, 0), 1.0);
        assert_eq!(d.l_entry(0, 0), 1.0);
    }

    #[test]
    fn bad_shapes() {
        assert!(matches!(decompose(&[1.0; 25], 5, None), Err(EigError::BadShape)));
        assert!(matches!(decompose(&[1.0; 3], 2, None), Err(EigError::BadShape)));
    }
}
