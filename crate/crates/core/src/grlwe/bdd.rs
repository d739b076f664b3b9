//! Turning a bounded-distance-decoding point near `I^{-1}` into an LWE sample.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::{frac, LweSample};
use crate::error::{Error, Result};
use crate::gaussian::{dual_series, sample_continuous, DiscreteSampler, GaussianParams, SeriesValue};
use crate::groupring::{matrix_norm, RingElem, RingSpec};
use crate::lattices::{ideal_product_span, inverse_ideal, lll, InclusionMap, LatticeBasis, Provenance};
use crate::matrix::{f64_to_rat, rat_to_f64};

/// An integral right ideal with a verified inverse and a certified smoothing bound.
#[derive(Debug, Clone)]
pub struct CertifiedIdeal {
    pub ring: RingSpec,
    pub ideal: LatticeBasis,
    pub inverse: LatticeBasis,
    pub det: BigInt,
    pub eps: f64,
    /// `√(ln(n/ε)) λ_n` with `λ_n` estimated from above by LLL.
    pub eta_upper: f64,
    /// Dual series at `eta_upper`, certified at most `eps`.
    pub series: SeriesValue,
}

impl CertifiedIdeal {
    pub fn new(ideal: &LatticeBasis, eps: f64) -> Result<Self> {
        let ring = match ideal.provenance() {
            Provenance::Ideal { ring, .. } => ring.clone(),
            _ => return Err(Error::Parameter("lattice was not built from ideal generators".into())),
        };
        let n = ideal.dim();
        if !(eps > 0.0 && eps < n as f64) {
            return Err(Error::Parameter(format!("need 0 < eps < n, got {eps}")));
        }
        if !LatticeBasis::integer(n).contains_lattice(ideal) {
            return Err(Error::Parameter("ideal is not integral".into()));
        }
        let inverse = inverse_ideal(ideal)?;
        if !ideal_product_span(&ring, &inverse, ideal)?.same_lattice(&LatticeBasis::integer(n)) {
            return Err(Error::NotInvertible("I^{-1} I does not span the ring".into()));
        }
        let det = ideal.determinant().to_integer();
        let eta_upper = (n as f64 / eps).ln().sqrt() * lll(ideal, 0.99).max_basis_norm();
        let series = dual_series(ideal, eta_upper, Some(eps))?;
        if series.upper() > eps {
            return Err(Error::NoConvergence(format!("smoothing bound not confirmed: series {} > {eps}", series.sum)));
        }
        Ok(CertifiedIdeal { ring, ideal: ideal.clone(), inverse, det, eps, eta_upper, series })
    }
}

/// Consistent `(q, α, r, d)` for the transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub q: i64,
    pub alpha: f64,
    pub r: f64,
    /// `√2 q η`, the least admissible `r`.
    pub min_r: f64,
    /// `α q / (√2 r)`, the matrix-norm bound on the offset.
    pub d: f64,
    /// Width `α / √2` of the added error.
    pub error_width: f64,
}

impl Plan {
    /// Uses the least admissible `r` when `r` is `None`.
    pub fn new(ideal: &CertifiedIdeal, q: i64, alpha: f64, r: Option<f64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::Parameter(format!("modulus must be at least 2, got {q}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if !ideal.det.gcd(&BigInt::from(q)).is_one() {
            return Err(Error::Parameter(format!("gcd(q = {q}, det I = {}) is not 1", ideal.det)));
        }
        let min_r = 2f64.sqrt() * q as f64 * ideal.eta_upper;
        let r = r.unwrap_or(min_r);
        if r < min_r {
            return Err(Error::Parameter(format!("width {r} below sqrt(2) q eta = {min_r}")));
        }
        let error_width = alpha / 2f64.sqrt();
        Ok(Plan { q, alpha, r, min_r, d: alpha * q as f64 / (2f64.sqrt() * r), error_width })
    }
}

/// Randomness of one run, kept only in transparent mode.
#[derive(Debug, Clone, PartialEq)]
pub struct BddTranscript {
    pub z: RingElem<i64>,
    pub e_prime: Vec<BigRational>,
    /// `b` in exact arithmetic, coordinates in `[0, 1)`.
    pub b_exact: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BddOutput {
    pub sample: LweSample,
    pub transcript: Option<BddTranscript>,
}

fn frac_rat(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// `z ← D_{I,r}`, `a = z mod qR`, `b = coeffs(y·z)/q + e′ mod 1` with `e′ ← D_{α/√2}`.
pub fn bdd_to_lwe<R: Rng + ?Sized>(
    ideal: &CertifiedIdeal,
    plan: &Plan,
    y: &RingElem<BigRational>,
    transparent: bool,
    rng: &mut R,
) -> Result<BddOutput> {
    bdd_to_lwe_with(ideal, plan, &bdd_sampler(ideal, plan)?, y, transparent, rng)
}

/// The sampler for `D_{I,r}`, reusable across runs of one plan.
pub fn bdd_sampler(ideal: &CertifiedIdeal, plan: &Plan) -> Result<DiscreteSampler> {
    DiscreteSampler::new(&ideal.ideal, &GaussianParams::spherical(plan.r)?)
}

/// [`bdd_to_lwe`] with a prebuilt sampler from [`bdd_sampler`].
pub fn bdd_to_lwe_with<R: Rng + ?Sized>(
    ideal: &CertifiedIdeal,
    plan: &Plan,
    sampler: &DiscreteSampler,
    y: &RingElem<BigRational>,
    transparent: bool,
    rng: &mut R,
) -> Result<BddOutput> {
    if y.ring() != &ideal.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", y.ring(), ideal.ring)));
    }
    let n = ideal.ring.dim();
    if sampler.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: sampler.dim() });
    }
    let z_vec = sampler.sample(&vec![0.0; n], rng)?;
    let z_int: Vec<i64> = z_vec
        .iter()
        .map(|c| c.to_integer().to_i64().ok_or_else(|| Error::Parameter("sample exceeds 64 bits".into())))
        .collect::<Result<_>>()?;
    let z = RingElem::from_coeffs(&ideal.ring, z_int)?;
    let a = z.reduce_mod(plan.q);
    let e_prime: Vec<BigRational> = sample_continuous(&GaussianParams::spherical(plan.error_width)?, n, rng)?
        .into_iter()
        .map(f64_to_rat)
        .collect();
    let q = BigRational::from_integer(BigInt::from(plan.q));
    let yz = y * &z.to_rational();
    let b_exact: Vec<BigRational> = yz.coeffs().iter().zip(&e_prime).map(|(c, e)| frac_rat(&(c / &q + e))).collect();
    let b = b_exact.iter().map(|x| frac(rat_to_f64(x))).collect();
    let transcript = transparent.then_some(BddTranscript { z, e_prime, b_exact });
    Ok(BddOutput { sample: LweSample { a, b }, transcript })
}

/// `s̄ ∈ R` with `s̄ ≡ x (mod q I^{-1})`, through the inclusion `R ⊆ I^{-1}`.
pub fn hidden_secret(ideal: &CertifiedIdeal, q: i64, x: &RingElem<BigRational>) -> Result<RingElem<i64>> {
    let n = ideal.ring.dim();
    let qb = BigInt::from(q);
    let map = InclusionMap::new(&LatticeBasis::integer(n), &ideal.inverse, &qb)?;
    let coords = ideal.inverse.coordinates(x.coeffs())?.ok_or(Error::NotContained)?;
    let reduced: Vec<BigInt> = coords.iter().map(|c| c.mod_floor(&qb)).collect();
    let s = map.inverse(&reduced)?;
    let s: Vec<i64> = s.iter().map(|c| c.to_i64().expect("reduced mod q")).collect();
    RingElem::from_coeffs(&ideal.ring, s)
}

/// Checks `b - coeffs(s̄·a)/q ≡ coeffs(e·z)/q + e′ (mod 1)` exactly.
pub fn verify_identity(
    ideal: &CertifiedIdeal,
    plan: &Plan,
    out: &BddOutput,
    x: &RingElem<BigRational>,
    e: &RingElem<BigRational>,
) -> Result<bool> {
    let t = out.transcript.as_ref().ok_or_else(|| Error::Parameter("output was produced without a transcript".into()))?;
    let s_bar = hidden_secret(ideal, plan.q, x)?.to_rational();
    let q = BigRational::from_integer(BigInt::from(plan.q));
    let sa = &s_bar * &out.sample.a.to_rational();
    let ez = e * &t.z.to_rational();
    Ok(t.b_exact
        .iter()
        .zip(sa.coeffs())
        .zip(ez.coeffs().iter().zip(&t.e_prime))
        .all(|((b, sa), (ez, ep))| (b - sa / &q - ez / &q - ep).is_integer()))
}

/// `x` uniform over a box of `I^{-1}` and `e` Gaussian, rescaled so `‖e‖_Mat ≤ d`.
pub fn random_bdd_point<R: Rng + ?Sized>(
    ideal: &CertifiedIdeal,
    d: f64,
    rng: &mut R,
) -> Result<(RingElem<BigRational>, RingElem<BigRational>)> {
    let n = ideal.ring.dim();
    let coords: Vec<BigRational> = (0..n).map(|_| BigRational::from_integer(BigInt::from(rng.random_range(-5i64..=5)))).collect();
    let x = RingElem::from_coeffs(&ideal.ring, ideal.inverse.basis().mul_vec(&coords))?;
    let raw = sample_continuous(&GaussianParams::spherical(1.0)?, n, rng)?;
    let norm = matrix_norm(&RingElem::from_coeffs(&ideal.ring, raw.clone())?);
    let scale = if norm > 0.0 { 0.9 * d / norm } else { 0.0 };
    let e = RingElem::from_coeffs(&ideal.ring, raw.into_iter().map(|v| f64_to_rat(v * scale)).collect())?;
    if e.coeffs().iter().all(Zero::is_zero) && scale != 0.0 {
        return Err(Error::Parameter("degenerate offset".into()));
    }
    Ok((x, e))
}
