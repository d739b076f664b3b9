//! Smoothing-parameter bounds and certified evaluation of Gaussian lattice series.

use std::f64::consts::{E, PI};
use std::ops::ControlFlow;

use super::real::RealBasis;
use crate::error::{Error, Result};
use crate::lattices::{lambda1_enum, lll, LatticeBasis, ENUM_CAP};
use crate::matrix::{rat_to_f64, Matrix};

/// Largest dimension accepted by the series evaluator.
pub const SERIES_DIM_CAP: usize = 24;
const TERM_LIMIT: usize = 5_000_000;
const TAIL_TARGET: f64 = 1e-12;

/// `Σ_{x ∈ Λ \ 0} exp(-π ‖x‖²)` truncated at `radius`, with a certified bound on the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    pub sum: f64,
    pub tail_bound: f64,
    pub radius: f64,
    pub terms: usize,
    /// False when evaluation stopped early because the partial sum passed the stop value.
    pub complete: bool,
}

impl SeriesValue {
    /// Certified upper bound on the full series (infinite when incomplete).
    pub fn upper(&self) -> f64 {
        if self.complete {
            self.sum + self.tail_bound
        } else {
            f64::INFINITY
        }
    }
}

/// `C(c)^n` from the Gaussian tail bound `ρ(Λ \ c√n B) < C^n ρ(Λ)`, `C = c√(2πe) e^{-πc²}`.
fn tail_factor(c: f64, n: usize) -> f64 {
    (c * (2.0 * PI * E).sqrt() * (-PI * c * c).exp()).powi(n as i32)
}

fn radius_factor(n: usize, target: f64) -> f64 {
    let mut c = 1.0;
    while tail_factor(c, n) > target {
        c += 0.01;
    }
    c
}

/// Series over the lattice spanned by the real columns `cols`. Stops once the partial
/// sum exceeds `stop`, which already decides any comparison against `stop`.
pub fn gaussian_series(cols: &[Vec<f64>], stop: Option<f64>) -> Result<SeriesValue> {
    let n = cols.len();
    if n > SERIES_DIM_CAP {
        return Err(Error::DimensionCap { dim: n, cap: SERIES_DIM_CAP });
    }
    let basis = RealBasis::reduce(cols.to_vec(), 0.99)?;
    let mut target = TAIL_TARGET / 10.0;
    loop {
        let c = radius_factor(n, target);
        let p = tail_factor(c, n);
        let radius = c * (n as f64).sqrt();
        let (mut sum, mut terms, mut overflow) = (0.0, 0usize, false);
        let flow = basis.for_each_short(radius * radius, &mut |_, nsq| {
            sum += (-PI * nsq).exp();
            terms += 1;
            if terms > TERM_LIMIT {
                overflow = true;
                return ControlFlow::Break(());
            }
            match stop {
                Some(s) if sum > s => ControlFlow::Break(()),
                _ => ControlFlow::Continue(()),
            }
        });
        if overflow {
            return Err(Error::Parameter(format!("series needs more than {TERM_LIMIT} terms")));
        }
        if flow.is_break() {
            return Ok(SeriesValue { sum, tail_bound: f64::INFINITY, radius, terms, complete: false });
        }
        let tail_bound = p * (1.0 + sum) / (1.0 - p);
        if tail_bound < TAIL_TARGET {
            return Ok(SeriesValue { sum, tail_bound, radius, terms, complete: true });
        }
        target = TAIL_TARGET / (10.0 * (1.0 + sum));
    }
}

fn dual_columns(lattice: &LatticeBasis) -> Matrix<f64> {
    lattice.dual().basis_f64()
}

/// `Σ_{y ∈ L^∨ \ 0} exp(-π s² ‖y‖²)`.
pub fn dual_series(lattice: &LatticeBasis, s: f64, stop: Option<f64>) -> Result<SeriesValue> {
    let cols: Vec<Vec<f64>> = dual_columns(lattice).map(|x| x * s).columns();
    gaussian_series(&cols, stop)
}

/// `Σ_{y ∈ L^∨ \ 0} exp(-π yᵗ A Aᵗ y)`.
pub fn dual_series_matrix(lattice: &LatticeBasis, a: &Matrix<f64>, stop: Option<f64>) -> Result<SeriesValue> {
    if a.rows() != lattice.dim() || !a.is_square() {
        return Err(Error::DimensionMismatch { expected: lattice.dim(), got: a.rows() });
    }
    gaussian_series(&a.transpose().mul(&dual_columns(lattice)).columns(), stop)
}

/// Whether `A ≥ η_ε(L)`, i.e. the dual series of `A` is at most `eps`.
pub fn smoothing_condition_matrix(lattice: &LatticeBasis, a: &Matrix<f64>, eps: f64) -> Result<bool> {
    Ok(dual_series_matrix(lattice, a, Some(eps))?.upper() <= eps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingBounds {
    pub dim: usize,
    pub eps: f64,
    pub lambda1_dual: f64,
    /// Largest LLL basis norm, an upper estimate of `λ_n`.
    pub lambda_n_upper: f64,
    /// `√n / λ_1(L^∨)`, an upper bound on `η_{2^{-2n}}`.
    pub eta_small: f64,
    /// `√(ln(n/ε)) λ_n`, an upper bound on `η_ε`.
    pub eta_eps: f64,
    pub series_small: SeriesValue,
    pub series_eps: SeriesValue,
}

impl SmoothingBounds {
    pub fn small_eps(&self) -> f64 {
        2f64.powi(-2 * self.dim as i32)
    }

    /// Both series certified below their targets.
    pub fn confirmed(&self) -> bool {
        self.series_small.upper() <= self.small_eps() && self.series_eps.upper() <= self.eps
    }
}

pub fn smoothing_bounds(lattice: &LatticeBasis, eps: f64) -> Result<SmoothingBounds> {
    let n = lattice.dim();
    if n > ENUM_CAP {
        return Err(Error::DimensionCap { dim: n, cap: ENUM_CAP });
    }
    if !(eps > 0.0 && eps < n as f64) {
        return Err(Error::Parameter(format!("need 0 < eps < n, got {eps}")));
    }
    let lambda1_dual = rat_to_f64(&lambda1_enum(&lattice.dual(), ENUM_CAP)?.1).sqrt();
    let lambda_n_upper = lll(lattice, 0.99).max_basis_norm();
    let eta_small = (n as f64).sqrt() / lambda1_dual;
    let eta_eps = (n as f64 / eps).ln().sqrt() * lambda_n_upper;
    let small = 2f64.powi(-2 * n as i32);
    Ok(SmoothingBounds {
        dim: n,
        eps,
        lambda1_dual,
        lambda_n_upper,
        eta_small,
        eta_eps,
        series_small: dual_series(lattice, eta_small, Some(small))?,
        series_eps: dual_series(lattice, eta_eps, Some(eps))?,
    })
}

/// `10 (β/α - 1)`, a bound on the statistical distance between widths `α ≤ β ≤ 2α`.
pub fn statistical_distance_bound(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= beta && beta <= 2.0 * alpha) {
        return Err(Error::Parameter(format!("need 0 < alpha <= beta <= 2 alpha, got {alpha}, {beta}")));
    }
    Ok(10.0 * (beta / alpha - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    /// Independent oracle: `(θ(s²) )^n - 1` with the one-dimensional theta sum.
    fn zn_series(n: usize, s: f64) -> f64 {
        let theta: f64 = (-50i64..=50).map(|k| (-PI * s * s * (k * k) as f64).exp()).sum();
        theta.powi(n as i32) - 1.0
    }

    #[test]
    fn zn_series_matches_theta_product() {
        for (n, s) in [(1, 0.8), (2, 1.0), (3, 1.3), (5, 1.1)] {
            let v = dual_series(&LatticeBasis::integer(n), s, None).unwrap();
            assert!(v.complete && v.tail_bound < 1e-12);
            assert!((v.sum - zn_series(n, s)).abs() < 1e-11, "{n} {s}: {} vs {}", v.sum, zn_series(n, s));
        }
    }

    #[test]
    fn zn_bounds() {
        for n in 1..=4 {
            let b = smoothing_bounds(&LatticeBasis::integer(n), 0.01).unwrap();
            assert!((b.eta_small - (n as f64).sqrt()).abs() < 1e-12);
            assert!(b.confirmed());
        }
        let z2 = smoothing_bounds(&LatticeBasis::integer(2), 0.01).unwrap();
        assert!(z2.series_eps.upper() <= 0.01);
    }

    #[test]
    fn bounds_scale_with_the_lattice() {
        let z = smoothing_bounds(&LatticeBasis::integer(1), 0.01).unwrap();
        let two = smoothing_bounds(&LatticeBasis::scaled_integer(1, rat(2)).unwrap(), 0.01).unwrap();
        assert!((two.eta_small - 2.0 * z.eta_small).abs() < 1e-12);
        assert!((two.eta_eps - 2.0 * z.eta_eps).abs() < 1e-12);
    }

    #[test]
    fn matrix_condition() {
        let l = LatticeBasis::integer(2);
        let s = 1.5;
        let a = Matrix::from_fn(2, 2, |i, j| if i == j { s } else { 0.0 });
        let scalar = dual_series(&l, s, None).unwrap().sum;
        let matrix = dual_series_matrix(&l, &a, None).unwrap().sum;
        assert!((scalar - matrix).abs() < 1e-15);
        assert!(smoothing_condition_matrix(&l, &a, 0.01).unwrap());
        let thin = Matrix::from_rows(vec![vec![3.0, 0.0], vec![0.0, 1e-3]]);
        assert!(!smoothing_condition_matrix(&l, &thin, 0.01).unwrap());
    }

    #[test]
    fn distance_bound() {
        assert_eq!(statistical_distance_bound(1.0, 1.0).unwrap(), 0.0);
        assert!((statistical_distance_bound(1.0, 1.1).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(statistical_distance_bound(1.0, 2.0).unwrap(), 10.0);
        assert!(statistical_distance_bound(2.0, 1.0).is_err());
        assert!(statistical_distance_bound(1.0, 2.5).is_err());
    }
}
