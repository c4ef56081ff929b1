//! Eigenvalues of small Hermitian matrices (cyclic Jacobi).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

/// Eigenvalues of the Hermitian part `(A + A†)/2` of a square matrix given
/// row-major, in ascending order.
///
/// The `n×n` complex problem is embedded as the `2n×2n` real symmetric
/// matrix `[[Re, −Im], [Im, Re]]`, whose spectrum is that of the original
/// with every eigenvalue doubled; every other sorted value is returned.
pub(crate) fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let m = 2 * n;
    let mut s = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let h = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            s[i * m + j] = h.re;
            s[(i + n) * m + (j + n)] = h.re;
            s[i * m + (j + n)] = -h.im;
            s[(i + n) * m + j] = h.im;
        }
    }
    let mut eig = symmetric_eigenvalues(&mut s, m);
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    eig.into_iter().step_by(2).collect()
}

fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() < 1e-15 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_hermitian() {
        // [[2, i], [−i, 2]] has eigenvalues 1 and 3.
        let a = [
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(2.0, 0.0),
        ];
        let e = hermitian_eigenvalues(&a, 2);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn identity_and_diagonal() {
        let mut a = vec![Complex64::new(0.0, 0.0); 9];
        for (i, d) in [5.0, -1.0, 2.0].iter().enumerate() {
            a[i * 3 + i] = Complex64::new(*d, 0.0);
        }
        let e = hermitian_eigenvalues(&a, 3);
        assert_eq!(e.len(), 3);
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[2] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn trace_is_preserved() {
        let n = 4;
        let a: Vec<Complex64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let x = ((i * 7 + j * 3) % 5) as f64 - 2.0;
                let y = if i == j { 0.0 } else { (i as f64) - (j as f64) };
                Complex64::new(
                    x + if i == j {
                        0.0
                    } else {
                        ((j * 7 + i * 3) % 5) as f64 - 2.0
                    },
                    y,
                )
            })
            .collect();
        let e = hermitian_eigenvalues(&a, n);
        let trace: f64 = (0..n).map(|i| a[i * n + i].re).sum();
        assert!((e.iter().sum::<f64>() - trace).abs() < 1e-12);
    }
}
