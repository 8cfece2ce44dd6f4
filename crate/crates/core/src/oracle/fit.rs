//! Least-squares polynomial fitting on centered and scaled abscissae.

use nalgebra::{DMatrix, DVector};

use crate::error::{EitError, Result};

/// Condition numbers above this are flagged.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    /// Ascending powers of the original abscissa.
    pub coefficients: Vec<f64>,
    /// Condition number of the scaled design matrix.
    pub condition: f64,
    pub ill_conditioned: bool,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn polynomial_fit(xs: &[f64], ys: &[f64], degree: usize) -> Result<PolyFit> {
    if xs.len() != ys.len() {
        return Err(EitError::FitInput("xs and ys differ in length"));
    }
    if xs.len() < degree + 2 {
        return Err(EitError::FitInput("need at least degree + 2 points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(EitError::FitInput("non-finite sample"));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(EitError::FitInput("abscissae must be distinct"));
    }

    let center = xs.iter().sum::<f64>() / xs.len() as f64;
    let scale = xs.iter().fold(0.0f64, |m, x| m.max((x - center).abs()));
    let cols = degree + 1;
    let design = DMatrix::from_fn(xs.len(), cols, |r, c| ((xs[r] - center) / scale).powi(c as i32));
    let rhs = DVector::from_column_slice(ys);

    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let scaled = svd
        .solve(&rhs, smax * f64::EPSILON)
        .map_err(|_| EitError::FitInput("singular value decomposition failed"))?;

    let residual = &design * &scaled - &rhs;
    let rms_residual = (residual.norm_squared() / xs.len() as f64).sqrt();

    // p(x) = Σ bₖ ((x − c)/s)ᵏ expanded into powers of x
    let mut coefficients = vec![0.0; cols];
    for k in 0..cols {
        let bk = scaled[k] / scale.powi(k as i32);
        for (j, coeff) in coefficients.iter_mut().enumerate().take(k + 1) {
            *coeff += bk * binomial(k, j) * (-center).powi((k - j) as i32);
        }
    }

    Ok(PolyFit {
        coefficients,
        condition,
        ill_conditioned: condition > MAX_CONDITION,
        rms_residual,
    })
}
