//! Discrete Gaussians on lattices by randomized nearest plane.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::real::RealBasis;
use super::GaussianParams;
use crate::error::{Error, Result};
use crate::lattices::LatticeBasis;
use crate::matrix::{f64_to_rat, Matrix};

/// Tail cut of the one-dimensional sampler, in units of the width.
const TAIL_CUT: f64 = 12.0;

/// `D_{Z,s,c}`: rejection from the uniform distribution on `[c - 12s, c + 12s] ∩ Z`,
/// with acceptance normalized by the mode so tiny widths stay efficient.
pub fn sample_z<R: Rng + ?Sized>(center: f64, s: f64, rng: &mut R) -> i64 {
    let lo = (center - TAIL_CUT * s).floor() as i64;
    let hi = (center + TAIL_CUT * s).ceil() as i64;
    let mode = center.round();
    let log_rho = |x: f64| -std::f64::consts::PI * (x - center).powi(2) / (s * s);
    let log_max = log_rho(mode);
    loop {
        let x = rng.random_range(lo..=hi);
        if rng.random::<f64>() < (log_rho(x as f64) - log_max).exp() {
            return x;
        }
    }
}

/// Required ratio between the width and the largest Gram–Schmidt norm in dimension `n`.
pub fn validity_multiplier(n: usize) -> f64 {
    ((2.0 * n as f64 + 4.0).ln() / std::f64::consts::PI).sqrt()
}

/// Sampler for `D_{L,A,c}`, density proportional to `exp(-π ‖A^{-1}(x - c)‖²)` on `L`.
#[derive(Debug, Clone)]
pub struct DiscreteSampler {
    basis: Matrix<BigRational>,
    basis_f64: Matrix<f64>,
    a_inv: Matrix<f64>,
    reduced: RealBasis,
}

impl DiscreteSampler {
    pub fn new(lattice: &LatticeBasis, params: &GaussianParams) -> Result<Self> {
        Self::with_multiplier(lattice, params, validity_multiplier(lattice.dim()))
    }

    /// Rejects parameters unless every scaled Gram–Schmidt norm is at most `1 / multiplier`.
    pub fn with_multiplier(lattice: &LatticeBasis, params: &GaussianParams, multiplier: f64) -> Result<Self> {
        params.validate()?;
        let n = lattice.dim();
        let a_inv = match params {
            GaussianParams::MatrixForm(_) => params.to_matrix(n)?.map(|&x| f64_to_rat(x)).inverse()?.to_f64(),
            _ => {
                let a = params.to_matrix(n)?;
                Matrix::from_fn(n, n, |i, j| if i == j { 1.0 / a.row(i)[i] } else { 0.0 })
            }
        };
        let basis_f64 = lattice.basis_f64();
        let scaled = a_inv.mul(&basis_f64);
        let reduced = RealBasis::reduce(scaled.columns(), 0.99)?;
        let g = reduced.max_gram_schmidt_norm();
        if g * multiplier > 1.0 {
            return Err(Error::Parameter(format!(
                "width below sampler threshold: need {multiplier:.4} x max Gram-Schmidt norm <= 1 after scaling, got {:.4}",
                g * multiplier
            )));
        }
        Ok(DiscreteSampler { basis: lattice.basis().clone(), basis_f64, a_inv, reduced })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Integer coordinates of a sample in the lattice basis.
    pub fn sample_coords<R: Rng + ?Sized>(&self, center: &[f64], rng: &mut R) -> Result<Vec<i64>> {
        let n = self.dim();
        if center.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: center.len() });
        }
        let mut t = self.a_inv.mul_vec(center);
        let widths = self.reduced.gram_schmidt_norms();
        let mut z = vec![0i64; n];
        for i in (0..n).rev() {
            let c = self.reduced.projection(&t, i);
            z[i] = sample_z(c, 1.0 / widths[i], rng);
            self.reduced.subtract(&mut t, i, z[i] as f64);
        }
        Ok(self.reduced.original_coords(&z))
    }

    pub fn sample<R: Rng + ?Sized>(&self, center: &[f64], rng: &mut R) -> Result<Vec<BigRational>> {
        let z: Vec<BigRational> = self.sample_coords(center, rng)?.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect();
        Ok(self.basis.mul_vec(&z))
    }

    pub fn sample_f64<R: Rng + ?Sized>(&self, center: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        let z: Vec<f64> = self.sample_coords(center, rng)?.into_iter().map(|x| x as f64).collect();
        Ok(self.basis_f64.mul_vec(&z))
    }
}

/// One sample of `D_{L,params,center}`.
pub fn sample_discrete<R: Rng + ?Sized>(
    lattice: &LatticeBasis,
    params: &GaussianParams,
    center: &[f64],
    rng: &mut R,
) -> Result<Vec<BigRational>> {
    DiscreteSampler::new(lattice, params)?.sample(center, rng)
}
