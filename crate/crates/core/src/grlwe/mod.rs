//! Group-ring LWE samples over the torus `R_ℝ / R` in the coefficient basis.

mod bdd;

pub use bdd::{bdd_sampler, bdd_to_lwe, bdd_to_lwe_with, hidden_secret, random_bdd_point, verify_identity, BddOutput, BddTranscript, CertifiedIdeal, Plan};

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::{sample_continuous, GaussianParams};
use crate::groupring::{join_coeffs, matrix_norm, spectrum, split_coeffs, RingElem, RingSpec};
use crate::groups::{parse_record, record_value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecretMode {
    UniformModQ,
    /// Secret drawn like the error, rounded to integers.
    ShortNormalForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LweParams {
    pub ring: RingSpec,
    pub q: i64,
    /// Errors come from `Ψ_{≤α}`.
    pub alpha: f64,
    pub secret_mode: SecretMode,
}

impl LweParams {
    pub fn new(ring: RingSpec, q: i64, alpha: f64, secret_mode: SecretMode) -> Result<Self> {
        if q < 2 {
            return Err(Error::Parameter(format!("modulus must be at least 2, got {q}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(LweParams { ring, q, alpha, secret_mode })
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// `α q ≥ 2n`, reported but not enforced.
    pub fn hypothesis_holds(&self) -> bool {
        self.alpha * self.q as f64 >= 2.0 * self.dim() as f64
    }

    /// `<ring record> q=<q> alpha=<α>`.
    pub fn header(&self) -> String {
        format!("{} q={} alpha={}", self.ring, self.q, self.alpha)
    }

    pub fn parse_header(line: &str) -> Result<Self> {
        let fields = parse_record(line)?;
        let ring: RingSpec = line.parse()?;
        let q = record_value(&fields, "q")?.parse().map_err(|_| Error::Parse("bad q".into()))?;
        let alpha = record_value(&fields, "alpha")?.parse().map_err(|_| Error::Parse("bad alpha".into()))?;
        LweParams::new(ring, q, alpha, SecretMode::UniformModQ)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LweSample {
    /// Coefficients in `[0, q)`.
    pub a: RingElem<i64>,
    /// Torus coordinates in `[0, 1)`.
    pub b: Vec<f64>,
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

pub fn uniform_mod_q<R: Rng + ?Sized>(ring: &RingSpec, q: i64, rng: &mut R) -> RingElem<i64> {
    RingElem::from_coeffs(ring, (0..ring.dim()).map(|_| rng.random_range(0..q)).collect()).expect("matching dimension")
}

/// Rounded continuous Gaussian of width `width`; zero width gives zero.
pub fn rounded_gaussian<R: Rng + ?Sized>(ring: &RingSpec, width: f64, rng: &mut R) -> Result<RingElem<i64>> {
    if width == 0.0 {
        return Ok(RingElem::zero(ring));
    }
    let x = sample_continuous(&GaussianParams::spherical(width)?, ring.dim(), rng)?;
    RingElem::from_coeffs(ring, x.into_iter().map(|v| v.round() as i64).collect())
}

/// `(a, coeffs(s·a)/q + e mod 1)` for given `a` and `e`.
pub fn lwe_sample_with(params: &LweParams, s: &RingElem<i64>, a: &RingElem<i64>, e: &[f64]) -> Result<LweSample> {
    if e.len() != params.dim() {
        return Err(Error::DimensionMismatch { expected: params.dim(), got: e.len() });
    }
    let a = a.reduce_mod(params.q);
    let sa = s.try_mul(&a)?.reduce_mod(params.q);
    let q = params.q as f64;
    let b = sa.coeffs().iter().zip(e).map(|(&c, &ei)| frac(c as f64 / q + ei)).collect();
    Ok(LweSample { a, b })
}

/// A sample of `A_{s,ψ}` with `a` uniform and `e ← ψ`.
pub fn lwe_sample<R: Rng + ?Sized>(
    params: &LweParams,
    s: &RingElem<i64>,
    psi: &GaussianParams,
    rng: &mut R,
) -> Result<LweSample> {
    if !psi.within_psi(params.alpha) {
        return Err(Error::Parameter(format!("error distribution is not in the family with cap {}", params.alpha)));
    }
    let a = uniform_mod_q(&params.ring, params.q, rng);
    let e = sample_continuous(psi, params.dim(), rng)?;
    lwe_sample_with(params, s, &a, &e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coin {
    Real,
    Random,
}

pub fn draw_secret<R: Rng + ?Sized>(params: &LweParams, rng: &mut R) -> Result<RingElem<i64>> {
    match params.secret_mode {
        SecretMode::UniformModQ => Ok(uniform_mod_q(&params.ring, params.q, rng)),
        SecretMode::ShortNormalForm => Ok(rounded_gaussian(&params.ring, params.alpha * params.q as f64, rng)?.reduce_mod(params.q)),
    }
}

/// `count` samples: from `A_{s,D_α}` with one secret, or uniform over `R_q × T`.
pub fn decision_instance<R: Rng + ?Sized>(params: &LweParams, count: usize, coin: Coin, rng: &mut R) -> Result<Vec<LweSample>> {
    match coin {
        Coin::Real => {
            let s = draw_secret(params, rng)?;
            let psi = GaussianParams::spherical(params.alpha)?;
            (0..count).map(|_| lwe_sample(params, &s, &psi, rng)).collect()
        }
        Coin::Random => Ok((0..count)
            .map(|_| LweSample {
                a: uniform_mod_q(&params.ring, params.q, rng),
                b: (0..params.dim()).map(|_| rng.random::<f64>()).collect(),
            })
            .collect()),
    }
}

/// Decimal with 17 significant digits.
pub fn format_torus(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let lead = x.abs().log10().floor() as i32;
    let decimals = (16 - lead).max(0) as usize;
    format!("{x:.decimals$}")
}

impl LweSample {
    pub fn to_line(&self) -> String {
        let b: Vec<String> = self.b.iter().map(|&x| format_torus(x)).collect();
        format!("a={} b={}", join_coeffs(self.a.coeffs()), b.join(","))
    }

    pub fn from_line(params: &LweParams, line: &str) -> Result<Self> {
        let fields = parse_record(line)?;
        let a: Vec<i64> = split_coeffs(record_value(&fields, "a")?)?;
        let b: Vec<f64> = split_coeffs(record_value(&fields, "b")?)?;
        if b.len() != params.dim() {
            return Err(Error::DimensionMismatch { expected: params.dim(), got: b.len() });
        }
        if a.iter().any(|&x| x < 0 || x >= params.q) || b.iter().any(|&x| !(0.0..1.0).contains(&x)) {
            return Err(Error::Parse("sample coordinates out of range".into()));
        }
        Ok(LweSample { a: RingElem::from_coeffs(&params.ring, a)?, b })
    }
}

/// Header line with the count, then one line per sample.
pub fn write_samples(params: &LweParams, samples: &[LweSample]) -> String {
    let mut out = format!("{} count={}\n", params.header(), samples.len());
    for s in samples {
        let _ = writeln!(out, "{}", s.to_line());
    }
    out
}

pub fn read_samples(text: &str) -> Result<(LweParams, Vec<LweSample>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty sample file".into()))?;
    let params = LweParams::parse_header(header)?;
    let count: usize = record_value(&parse_record(header)?, "count")?.parse().map_err(|_| Error::Parse("bad count".into()))?;
    let samples: Vec<LweSample> = lines.map(|l| LweSample::from_line(&params, l)).collect::<Result<_>>()?;
    if samples.len() != count {
        return Err(Error::Parse(format!("header promises {count} samples, found {}", samples.len())));
    }
    Ok((params, samples))
}

/// Width bounds for `h·v + e` with `v ← D_r` and `e ← D_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBound {
    /// `‖h‖_Mat`.
    pub alpha: f64,
    /// `√(r²α² + s²)`.
    pub overall: f64,
    /// `√(r²|λ_i|² + s²)` per eigenvalue, for full group rings.
    pub refined: Option<Vec<f64>>,
}

pub fn error_after_transform(h: &RingElem<f64>, r: f64, s: f64) -> Result<ErrorBound> {
    let alpha = matrix_norm(h);
    let width = |x: f64| (r * r * x * x + s * s).sqrt();
    let refined = if h.ring().is_full() {
        Some(spectrum(h)?.iter().map(|e| width(e.value.norm())).collect())
    } else {
        None
    };
    Ok(ErrorBound { alpha, overall: width(alpha), refined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::seeded_rng;
    use crate::gaussian::stats::{chi_square_uniform, ks_two_sample};
    use crate::groups::{GroupElem, GroupSpec};

    fn params(q: i64, alpha: f64) -> LweParams {
        LweParams::new(RingSpec::full(GroupSpec::type_i(2, 4).unwrap()), q, alpha, SecretMode::UniformModQ).unwrap()
    }

    #[test]
    fn zero_secret_zero_error() {
        let p = params(17, 0.01);
        let mut rng = seeded_rng(1, 0);
        let a = uniform_mod_q(&p.ring, 17, &mut rng);
        let s = lwe_sample_with(&p, &RingElem::zero(&p.ring), &a, &[0.0; 8]).unwrap();
        assert!(s.b.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn noiseless_identity() {
        let p = params(17, 0.01);
        let mut rng = seeded_rng(2, 0);
        for _ in 0..100 {
            let s = uniform_mod_q(&p.ring, 17, &mut rng);
            let a = uniform_mod_q(&p.ring, 17, &mut rng);
            let sample = lwe_sample_with(&p, &s, &a, &[0.0; 8]).unwrap();
            let sa = s.try_mul(&sample.a).unwrap().reduce_mod(17);
            let qb: Vec<i64> = sample.b.iter().map(|x| (x * 17.0).round() as i64 % 17).collect();
            assert_eq!(qb, sa.coeffs());
        }
    }

    #[test]
    fn a_is_uniform() {
        let p = params(17, 0.01);
        let mut rng = seeded_rng(3, 0);
        let s = uniform_mod_q(&p.ring, 17, &mut rng);
        let psi = GaussianParams::spherical(0.01).unwrap();
        let mut counts = vec![vec![0u64; 17]; 8];
        for _ in 0..10_000 {
            let sample = lwe_sample(&p, &s, &psi, &mut rng).unwrap();
            for (i, &c) in sample.a.coeffs().iter().enumerate() {
                counts[i][c as usize] += 1;
            }
        }
        for c in &counts {
            assert!(chi_square_uniform(c).unwrap().p_value > 0.01);
        }
    }

    #[test]
    fn psi_outside_family_is_rejected() {
        let p = params(17, 0.01);
        let s = RingElem::zero(&p.ring);
        assert!(lwe_sample(&p, &s, &GaussianParams::Spherical(0.5), &mut seeded_rng(0, 0)).is_err());
    }

    #[test]
    fn decision_coins() {
        let p = params(17, 0.01);
        let mut rng = seeded_rng(4, 0);
        let random = decision_instance(&p, 2000, Coin::Random, &mut rng).unwrap();
        let mut b: Vec<f64> = random.iter().flat_map(|s| s.b.clone()).collect();
        let mut u: Vec<f64> = (0..b.len()).map(|_| rng.random::<f64>()).collect();
        assert!(ks_two_sample(&mut b, &mut u).p_value > 0.01);
        assert!(decision_instance(&p, 0, Coin::Real, &mut rng).unwrap().is_empty());

        let real = write_samples(&p, &decision_instance(&p, 20, Coin::Real, &mut rng).unwrap());
        let rand = write_samples(&p, &decision_instance(&p, 20, Coin::Random, &mut rng).unwrap());
        let shape = |t: &str| t.lines().map(|l| l.split(',').count()).collect::<Vec<_>>();
        assert_eq!(shape(&real), shape(&rand));
    }

    #[test]
    fn small_noise_rounds_back() {
        let p = LweParams::new(RingSpec::full(GroupSpec::type_i(2, 4).unwrap()), 65537, 0.001, SecretMode::UniformModQ).unwrap();
        let mut rng = seeded_rng(5, 0);
        let s = draw_secret(&p, &mut rng).unwrap();
        let psi = GaussianParams::spherical(p.alpha / p.q as f64).unwrap();
        let (mut ok, mut total) = (0, 0);
        for _ in 0..200 {
            let sample = lwe_sample(&p, &s, &psi, &mut rng).unwrap();
            let sa = s.try_mul(&sample.a).unwrap().reduce_mod(p.q);
            for (x, &c) in sample.b.iter().zip(sa.coeffs()) {
                total += 1;
                ok += usize::from((x * p.q as f64).round() as i64 % p.q == c);
            }
        }
        assert!(ok as f64 / total as f64 > 0.99);
    }

    #[test]
    fn serialization_round_trip() {
        let p = params(17, 0.01);
        let mut rng = seeded_rng(6, 0);
        let samples = decision_instance(&p, 5, Coin::Real, &mut rng).unwrap();
        let text = write_samples(&p, &samples);
        let (p2, back) = read_samples(&text).unwrap();
        assert_eq!(p2, p);
        assert_eq!(back, samples);
        assert_eq!(format_torus(0.5), "0.50000000000000000");
        assert_eq!(format_torus(0.001234).len(), "0.00".len() + 17);
    }

    #[test]
    fn error_bounds() {
        let ring = RingSpec::full(GroupSpec::type_i(2, 4).unwrap());
        let zero = error_after_transform(&RingElem::zero(&ring), 3.0, 2.0).unwrap();
        assert!((zero.overall - 2.0).abs() < 1e-12);
        let one = error_after_transform(&RingElem::one(&ring), 3.0, 2.0).unwrap();
        assert!((one.overall - 13f64.sqrt()).abs() < 1e-9);
        let t = error_after_transform(&RingElem::monomial(&ring, GroupElem::new(0, 1), 1.0), 3.0, 2.0).unwrap();
        assert!(t.refined.unwrap().iter().all(|w| (w - 13f64.sqrt()).abs() < 1e-9));
    }
}
