//! Small dense / tridiagonal kernels used by the Mathieu engine, the
//! finite-difference oracles and the Bethe Newton solver.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

/// Number of eigenvalues of the symmetric tridiagonal matrix `(d, e)` that are
/// strictly less than `x` (`e[i]` couples rows `i` and `i + 1`).
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut t = 1.0;
    for i in 0..d.len() {
        let e2 = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        t = d[i] - x - if i == 0 { 0.0 } else { e2 / t };
        if t == 0.0 {
            t = -f64::EPSILON * (d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if t < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..d.len() {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i < e.len() { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    (lo, hi)
}

/// `k`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
pub fn tridiag_eigenvalue(d: &[f64], e: &[f64], k: usize) -> f64 {
    assert!(k < d.len());
    let (mut lo, mut hi) = gershgorin(d, e);
    let pad = 1e-12 * (lo.abs().max(hi.abs()).max(1.0));
    lo -= pad;
    hi += pad;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Lowest `count` eigenvalues in ascending order.
pub fn tridiag_lowest(d: &[f64], e: &[f64], count: usize) -> Vec<f64> {
    (0..count.min(d.len())).map(|k| tridiag_eigenvalue(d, e, k)).collect()
}

/// Solves `(T − σI)x = b` for tridiagonal `T` with partial pivoting.
fn tridiag_shifted_solve(d: &[f64], e: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    // banded LU with pivoting: rows carry up to two super-diagonals
    let mut diag: Vec<f64> = d.iter().map(|x| x - sigma).collect();
    let mut up1: Vec<f64> = (0..n).map(|i| if i + 1 < n { e[i] } else { 0.0 }).collect();
    let mut up2 = vec![0.0; n];
    let mut low: Vec<f64> = (0..n).map(|i| if i + 1 < n { e[i] } else { 0.0 }).collect();
    let mut rhs = b.to_vec();
    let tiny = f64::EPSILON * d.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..n.saturating_sub(1) {
        if low[i].abs() > diag[i].abs() {
            // swap rows i and i+1
            let (a0, a1, a2) = (diag[i], up1[i], up2[i]);
            diag[i] = low[i];
            up1[i] = diag[i + 1];
            up2[i] = up1[i + 1];
            low[i] = a0;
            diag[i + 1] = a1;
            up1[i + 1] = a2;
            rhs.swap(i, i + 1);
        }
        if diag[i] == 0.0 {
            diag[i] = tiny;
        }
        let m = low[i] / diag[i];
        diag[i + 1] -= m * up1[i];
        up1[i + 1] -= m * up2[i];
        rhs[i + 1] -= m * rhs[i];
        low[i] = m;
    }
    if diag[n - 1] == 0.0 {
        diag[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= up1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= up2[i] * x[i + 2];
        }
        x[i] = s / diag[i];
    }
    x
}

/// Unit eigenvector for the (isolated) eigenvalue `lambda` by inverse iteration.
pub fn tridiag_eigenvector(d: &[f64], e: &[f64], lambda: f64) -> Vec<f64> {
    let n = d.len();
    let scale = d.iter().chain(e.iter()).fold(1.0f64, |m, x| m.max(x.abs()));
    let sigma = lambda + 4.0 * f64::EPSILON * scale;
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * ((i * 7 + 3) % 11) as f64).collect();
    normalize(&mut v);
    for _ in 0..4 {
        let mut w = tridiag_shifted_solve(d, e, sigma, &v);
        normalize(&mut w);
        v = w;
    }
    v
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Solves the dense complex system `A x = b` (row-major `A`) by Gaussian
/// elimination with partial pivoting. Returns `None` if `A` is singular.
pub fn complex_solve(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))?;
        if a[piv * n + col].norm() == 0.0 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        let inv = a[col * n + col].inv();
        for r in col + 1..n {
            let f = a[r * n + col] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let t = a[col * n + k];
                a[r * n + k] -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[i * n + k] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_eigenvalues() {
        // tridiag(−1, 2, −1) of size n: 2 − 2cos(kπ/(n+1))
        let n = 20;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        for k in 0..n {
            let exact = 2.0 - 2.0 * (((k + 1) as f64) * core::f64::consts::PI / (n + 1) as f64).cos();
            assert!((tridiag_eigenvalue(&d, &e, k) - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenvector_satisfies_equation() {
        let d = [1.0, 4.0, 9.0, 16.0, 25.0];
        let e = [0.7, 0.7, 0.7, 0.7];
        for k in 0..5 {
            let lam = tridiag_eigenvalue(&d, &e, k);
            let v = tridiag_eigenvector(&d, &e, lam);
            for i in 0..5 {
                let mut tv = d[i] * v[i];
                if i > 0 {
                    tv += e[i - 1] * v[i - 1];
                }
                if i < 4 {
                    tv += e[i] * v[i + 1];
                }
                assert!((tv - lam * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complex_solve_roundtrip() {
        let c = |r, i| Complex64::new(r, i);
        let a = vec![c(0.0, 1.0), c(2.0, 0.0), c(1.0, -1.0), c(3.0, 0.5)];
        let x = [c(1.0, 2.0), c(-0.5, 0.25)];
        let b = vec![a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
        let got = complex_solve(a, b).unwrap();
        assert!((got[0] - x[0]).norm() < 1e-14 && (got[1] - x[1]).norm() < 1e-14);
        assert!(complex_solve(vec![c(0.0, 0.0); 4], vec![c(1.0, 0.0); 2]).is_none());
    }
}
