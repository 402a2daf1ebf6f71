//! Minimal dense linear algebra on row-major storage: partial-pivot LU
//! solves and small-matrix inversion. Used by the eigendecomposition and the
//! globally coupled projection systems (sizes up to a few hundred).

use alloc::vec::Vec;

/// Solve A x = b in place. `a` is n x n row-major and is destroyed; `b`
/// holds the solution on return. Returns false on a zero pivot.
pub(crate) fn solve_in_place(a: &mut [f64], n: usize, b: &mut [f64]) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut piv = col;
        let mut best = libm::fabs(a[col * n + col]);
        for r in col + 1..n {
            let v = libm::fabs(a[r * n + col]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return false;
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            b.swap(piv, col);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f != 0.0 {
                for c in col + 1..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                b[r] -= f * b[col];
            }
            a[r * n + col] = 0.0;
        }
    }
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r * n + c] * b[c];
        }
        b[r] = s / a[r * n + r];
    }
    true
}

/// Inverse of a small n x n matrix by Gauss-Jordan with partial pivoting.
/// Returns None on a zero pivot.
pub(crate) fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut w = a.to_vec();
    let mut inv = alloc::vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let mut piv = col;
        let mut best = libm::fabs(w[col * n + col]);
        for r in col + 1..n {
            let v = libm::fabs(w[r * n + col]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                w.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
        }
        let d = w[col * n + col];
        for c in 0..n {
            w[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = w[r * n + col];
                if f != 0.0 {
                    for c in 0..n {
                        w[r * n + c] -= f * w[col * n + c];
                        inv[r * n + c] -= f * inv[col * n + c];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// out = M v for a row-major n x n matrix.
#[cfg(test)]
fn matvec(m: &[f64], n: usize, v: &[f64], out: &mut [f64]) {
    for r in 0..n {
        let row = &m[r * n..(r + 1) * n];
        let mut s = 0.0;
        for c in 0..n {
            s += row[c] * v[c];
        }
        out[r] = s;
    }
}
