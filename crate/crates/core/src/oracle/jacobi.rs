use crate::error::{EitError, Result};
use crate::hamiltonian::Mat3;

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub dim: usize,
    /// Ascending.
    pub values: Vec<f64>,
    /// Column-major: vector `k` is `vectors[k * dim..(k + 1) * dim]`.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEigen {
    /// Ascending.
    pub values: [f64; 3],
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: [[f64; 3]; 3],
}

/// Cyclic Jacobi rotations on a row-major symmetric matrix.
pub fn symmetric_eigen(dim: usize, matrix: &[f64]) -> Result<SymmetricEigen> {
    assert_eq!(matrix.len(), dim * dim, "matrix must be dim x dim");
    let mut a = matrix.to_vec();
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut asym = 0.0f64;
    for i in 0..dim {
        for j in 0..i {
            asym = asym.max((a[i * dim + j] - a[j * dim + i]).abs());
        }
    }
    if asym > 1e-10 * norm.max(f64::MIN_POSITIVE) {
        return Err(EitError::NonHermitian { asymmetry: asym });
    }

    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    s += a[i * dim + j] * a[i * dim + j];
                }
            }
        }
        s.sqrt()
    };

    for _sweep in 0..100 {
        if off(&a) <= f64::EPSILON * 1e-3 * norm {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| a[i * dim + i].total_cmp(&a[j * dim + j]));
    let values = order.iter().map(|&i| a[i * dim + i]).collect();
    let mut vectors = Vec::with_capacity(dim * dim);
    for &k in &order {
        vectors.extend((0..dim).map(|row| v[row * dim + k]));
    }
    Ok(SymmetricEigen {
        dim,
        values,
        vectors,
    })
}

/// Independent 3×3 eigensolver for block checks.
pub fn dense_block_eigen(m: &Mat3) -> Result<BlockEigen> {
    let flat: Vec<f64> = m.iter().flatten().copied().collect();
    let eig = symmetric_eigen(3, &flat)?;
    let mut vectors = [[0.0; 3]; 3];
    for (k, vec) in vectors.iter_mut().enumerate() {
        vec.copy_from_slice(eig.vector(k));
    }
    Ok(BlockEigen {
        values: [eig.values[0], eig.values[1], eig.values[2]],
        vectors,
    })
}
