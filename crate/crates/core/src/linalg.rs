//! Dense linear algebra for tiny matrices.
//!
//! Emission kernels are at most a few dozen rows, so singular values are
//! computed through a cyclic Jacobi eigen-solve of the Gram matrix. Intended
//! for symmetric matrices up to 32x32; accuracy is ~1e-14 relative there.

use crate::error::{CoreError, Result};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric `n x n` matrix (row-major), sorted descending.
pub fn symmetric_eigenvalues(n: usize, m: &[f64]) -> Result<Vec<f64>> {
    if m.len() != n * n {
        return Err(CoreError::DimensionMismatch(format!(
            "matrix {n}x{n} with {} entries",
            m.len()
        )));
    }
    if n > 32 {
        return Err(CoreError::InvalidInput(
            "symmetric eigen-solve supports matrices up to 32x32".into(),
        ));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[i * n + j] - m[j * n + i]).abs() > 1e-12 {
                return Err(CoreError::InvalidInput("matrix is not symmetric".into()));
            }
        }
    }
    let mut a = m.to_vec();
    let scale = a
        .iter()
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
        .max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() <= 1e-15 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows/columns p and q.
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

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(eig)
}

/// Singular values of an `r x c` matrix (row-major), sorted descending, via
/// the eigenvalues of the smaller Gram matrix.
pub fn singular_values(r: usize, c: usize, m: &[f64]) -> Result<Vec<f64>> {
    if m.len() != r * c {
        return Err(CoreError::DimensionMismatch(format!(
            "matrix {r}x{c} with {} entries",
            m.len()
        )));
    }
    let n = r.min(c);
    // Gram of the smaller side: M^T M (c x c) or M M^T (r x r).
    let mut gram = vec![0.0_f64; n * n];
    if c <= r {
        for i in 0..c {
            for j in i..c {
                let mut t = 0.0;
                for l in 0..r {
                    t += m[l * c + i] * m[l * c + j];
                }
                gram[i * c + j] = t;
                gram[j * c + i] = t;
            }
        }
    } else {
        for i in 0..r {
            for j in i..r {
                let mut t = 0.0;
                for l in 0..c {
                    t += m[i * c + l] * m[j * c + l];
                }
                gram[i * r + j] = t;
                gram[j * r + i] = t;
            }
        }
    }
    let eig = symmetric_eigenvalues(n, &gram)?;
    Ok(eig.into_iter().map(|x| x.max(0.0).sqrt()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let eig = symmetric_eigenvalues(3, &[2.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        assert!((eig[0] - 5.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
        assert!((eig[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_closed_form() {
        // Eigenvalues of [[a, b], [b, d]] are (a+d)/2 +/- sqrt(((a-d)/2)^2 + b^2).
        let (a, b, d) = (1.3, -0.4, 0.7);
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let eig = symmetric_eigenvalues(2, &[a, b, b, d]).unwrap();
        assert!((eig[0] - (mid + rad)).abs() < 1e-13);
        assert!((eig[1] - (mid - rad)).abs() < 1e-13);
    }

    #[test]
    fn singular_values_of_identity_padded() {
        // 3x2 matrix with identity block: singular values (1, 1).
        let m = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        let sv = singular_values(3, 2, &m).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-13);
        assert!((sv[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rank_deficient_matrix_has_zero_singular_value() {
        // Two identical columns.
        let m = [0.5, 0.5, 0.2, 0.2, 0.3, 0.3];
        let sv = singular_values(3, 2, &m).unwrap();
        assert!(sv[1].abs() < 1e-13);
    }
}
