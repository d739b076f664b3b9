//! Gaussian distributions with density proportional to `exp(-π ‖A^{-1}(x - c)‖²)`.
//!
//! A spherical width `r` has per-coordinate variance `r² / (2π)`.

mod discrete;
mod real;
mod smoothing;
pub mod stats;
mod wfamily;

pub use discrete::{sample_discrete, sample_z, validity_multiplier, DiscreteSampler};
pub use real::RealBasis;
pub use smoothing::{
    dual_series, dual_series_matrix, gaussian_series, smoothing_bounds, smoothing_condition_matrix,
    statistical_distance_bound, SeriesValue, SmoothingBounds, SERIES_DIM_CAP,
};
pub use wfamily::{build_w_family, WFamily};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{f64_to_rat, Matrix};

/// Independent generator for stream `stream` of a 64-bit seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Parses a seed in decimal or `0x` hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| Error::Parse(format!("seed {s:?}: {e}")))
}

#[derive(Debug, Clone, PartialEq)]
pub enum GaussianParams {
    Spherical(f64),
    /// Independent coordinates with widths `rvec[i]`.
    Elliptical(Vec<f64>),
    /// `x = A y` with `y` spherical of width 1.
    MatrixForm(Matrix<f64>),
}

impl GaussianParams {
    pub fn spherical(r: f64) -> Result<Self> {
        let p = GaussianParams::Spherical(r);
        p.validate()?;
        Ok(p)
    }

    pub fn elliptical(rvec: Vec<f64>) -> Result<Self> {
        let p = GaussianParams::Elliptical(rvec);
        p.validate()?;
        Ok(p)
    }

    pub fn matrix(a: Matrix<f64>) -> Result<Self> {
        let p = GaussianParams::MatrixForm(a);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        match self {
            GaussianParams::Spherical(r) if !positive(*r) => Err(Error::Parameter(format!("width must be positive, got {r}"))),
            GaussianParams::Elliptical(v) if v.is_empty() || !v.iter().all(|&x| positive(x)) => {
                Err(Error::Parameter("elliptical widths must be positive".into()))
            }
            GaussianParams::MatrixForm(a) => {
                if !a.is_square() || a.rows() == 0 {
                    return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
                }
                if a.data().iter().any(|x| !x.is_finite()) || a.map(|&x| f64_to_rat(x)).determinant() == num_traits::Zero::zero() {
                    return Err(Error::Singular);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Dimension fixed by the parameters, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            GaussianParams::Spherical(_) => None,
            GaussianParams::Elliptical(v) => Some(v.len()),
            GaussianParams::MatrixForm(a) => Some(a.rows()),
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) if d != dim => Err(Error::DimensionMismatch { expected: d, got: dim }),
            _ => Ok(()),
        }
    }

    /// Membership in `Ψ_{≤α}`: elliptical with every width at most `alpha`.
    pub fn within_psi(&self, alpha: f64) -> bool {
        match self {
            GaussianParams::Spherical(r) => *r <= alpha,
            GaussianParams::Elliptical(v) => v.iter().all(|&x| x <= alpha),
            GaussianParams::MatrixForm(_) => false,
        }
    }

    /// The matrix `A` of the parameters in dimension `dim`.
    pub fn to_matrix(&self, dim: usize) -> Result<Matrix<f64>> {
        self.check_dim(dim)?;
        Ok(match self {
            GaussianParams::Spherical(r) => Matrix::from_fn(dim, dim, |i, j| if i == j { *r } else { 0.0 }),
            GaussianParams::Elliptical(v) => Matrix::from_fn(dim, dim, |i, j| if i == j { v[i] } else { 0.0 }),
            GaussianParams::MatrixForm(a) => a.clone(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            GaussianParams::Spherical(r) => GaussianParams::Spherical(r * factor),
            GaussianParams::Elliptical(v) => GaussianParams::Elliptical(v.iter().map(|x| x * factor).collect()),
            GaussianParams::MatrixForm(a) => GaussianParams::MatrixForm(a.map(|x| x * factor)),
        }
    }
}

/// Standard deviation of one coordinate of a width-`r` Gaussian.
pub fn sigma(r: f64) -> f64 {
    r / (2.0 * std::f64::consts::PI).sqrt()
}

/// A continuous Gaussian vector centered at zero.
pub fn sample_continuous<R: Rng + ?Sized>(params: &GaussianParams, dim: usize, rng: &mut R) -> Result<Vec<f64>> {
    params.validate()?;
    params.check_dim(dim)?;
    let mut normal = |s: f64| s * rng.sample::<f64, _>(StandardNormal);
    Ok(match params {
        GaussianParams::Spherical(r) => (0..dim).map(|_| normal(sigma(*r))).collect(),
        GaussianParams::Elliptical(v) => v.iter().map(|&r| normal(sigma(r))).collect(),
        GaussianParams::MatrixForm(a) => {
            let y: Vec<f64> = (0..dim).map(|_| normal(sigma(1.0))).collect();
            a.mul_vec(&y)
        }
    })
}
