//! Property suites behind `verify`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::config::Config;
use super::CliError;
use crate::error::{Error, Result};
use crate::gaussian::stats::{chi_square_uniform, total_variation};
use crate::gaussian::{
    build_w_family, dual_series_matrix, sample_continuous, seeded_rng, smoothing_bounds, GaussianParams,
};
use crate::groupring::{match_multisets, numerical_eigenvalues, spectrum, RingElem, RingSpec};
use crate::groups::GroupSpec;
use crate::grlwe::{bdd_sampler, bdd_to_lwe_with, random_bdd_point, verify_identity, CertifiedIdeal, Plan};
use crate::lattices::{check_dual_equals_permuted_inverse, ideal_lattice, InclusionMap, LatticeBasis, Side};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Eigen,
    Dualinv,
    Inclusion,
    Smoothing,
    Wfamily,
    Bddlwe,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check { name: name.to_string(), passed, detail }
    }

    pub fn line(&self) -> String {
        format!("{} {} {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Runs `f` for trials `0..trials`, each with its own stream, results in trial order.
fn per_trial<T: Send>(
    cfg: &Config,
    suite: u64,
    trials: usize,
    f: impl Fn(&mut ChaCha20Rng) -> Result<T> + Sync,
) -> std::result::Result<Vec<T>, CliError> {
    let seed = cfg.seed()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs()?)
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    let out = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| f(&mut seeded_rng(seed, (suite << 32) | t as u64)))
            .collect::<Result<Vec<T>>>()
    })?;
    Ok(out)
}

pub fn run(suite: Suite, cfg: &Config) -> std::result::Result<Vec<Check>, CliError> {
    match suite {
        Suite::Eigen => eigen(cfg),
        Suite::Dualinv => dualinv(cfg),
        Suite::Inclusion => inclusion(cfg),
        Suite::Smoothing => smoothing(cfg),
        Suite::Wfamily => wfamily(cfg),
        Suite::Bddlwe => bddlwe(cfg),
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Eigen, Suite::Dualinv, Suite::Inclusion, Suite::Smoothing, Suite::Wfamily, Suite::Bddlwe] {
                all.extend(run(s, cfg)?);
            }
            Ok(all)
        }
    }
}

fn full_ring(cfg: &Config) -> std::result::Result<RingSpec, CliError> {
    Ok(RingSpec::full(cfg.group()?))
}

pub const EIGEN_TOL: f64 = 1e-8;

fn eigen(cfg: &Config) -> std::result::Result<Vec<Check>, CliError> {
    let ring = full_ring(cfg)?;
    let trials = cfg.usize("trials")?;
    let devs = per_trial(cfg, 1, trials, |rng| {
        let x = RingElem::from_coeffs(&ring, (0..ring.dim()).map(|_| rng.random_range(-50..=50) as f64).collect())?;
        let closed: Vec<_> = spectrum(&x)?.iter().map(|e| e.value).collect();
        let numeric = numerical_eigenvalues(&x.matrix_rep())?;
        Ok(match_multisets(&closed, &numeric).unwrap_or(f64::INFINITY))
    })?;
    let matched = devs.iter().filter(|&&d| d <= EIGEN_TOL).count();
    let worst = devs.iter().cloned().fold(0.0, f64::max);
    Ok(vec![Check::new(
        "eigen.spectrum",
        matched == trials,
        format!("ring={ring} trials={trials} matched={matched} max_dev={worst:.3e} tol={EIGEN_TOL:e}"),
    )])
}

/// A principal right ideal `hR` with `h` invertible over the rationals.
pub fn random_principal_ideal<R: Rng + ?Sized>(ring: &RingSpec, coeff: i64, rng: &mut R) -> LatticeBasis {
    loop {
        let h = RingElem::from_coeffs(ring, (0..ring.dim()).map(|_| rng.random_range(-coeff..=coeff)).collect())
            .expect("matching dimension");
        if let Ok(lat) = ideal_lattice(ring, &[h], Side::Right) {
            return lat;
        }
    }
}

fn dualinv(cfg: &Config) -> std::result::Result<Vec<Check>, CliError> {
    let ring = full_ring(cfg)?;
    let trials = cfg.usize("trials")?;
    let holds = per_trial(cfg, 2, trials, |rng| {
        let ideal = random_principal_ideal(&ring, 2, rng);
        Ok(check_dual_equals_permuted_inverse(&ideal)?.holds)
    })?;
    let matched = holds.iter().filter(|&&h| h).count();
    Ok(vec![Check::new(
        "dualinv.exact_hnf",
        matched == trials,
        format!("ring={ring} ideals={trials} matched={matched} tol=exact"),
    )])
}

/// Outcome of one inclusion-map triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionOutcome {
    pub dim: usize,
    pub q: i64,
    pub coprime: bool,
    pub correct: bool,
}

fn random_nonsingular<R: Rng + ?Sized>(dim: usize, range: i64, rng: &mut R) -> Matrix<i64> {
    loop {
        let m = Matrix::from_fn(dim, dim, |_, _| rng.random_range(-range..=range));
        if !m.to_bigint().determinant().is_zero() {
            return m;
        }
    }
}

/// Random `L' = L·T ⊆ L` and `q` with `q^dim ≤ 4096`; checks the map on every residue.
pub fn inclusion_triple<R: Rng + ?Sized>(rng: &mut R) -> Result<InclusionOutcome> {
    let dim = rng.random_range(1..=6usize);
    let moduli: Vec<i64> = (2..=12).filter(|&q| (q as f64).powi(dim as i32) <= 4096.0).collect();
    let q = moduli[rng.random_range(0..moduli.len())];
    let l = random_nonsingular(dim, 4, rng);
    let t = random_nonsingular(dim, 2, rng);
    let sup = LatticeBasis::from_integer_columns(&l)?;
    let sub = LatticeBasis::from_integer_columns(&l.to_bigint().mul(&t.to_bigint()).map(|x| x.to_i64().expect("small")))?;
    let qb = BigInt::from(q);
    let map = InclusionMap::new(&sub, &sup, &qb)?;
    let coprime = map.index().gcd(&qb).is_one();
    let mut correct = map.is_bijective() == coprime;
    let mut point = vec![BigInt::from(0); dim];
    let total = (q as usize).pow(dim as u32);
    let mut images = std::collections::HashSet::new();
    for idx in 0..total {
        let mut rest = idx;
        for c in point.iter_mut() {
            *c = BigInt::from((rest % q as usize) as i64);
            rest /= q as usize;
        }
        let there = map.forward(&point);
        if coprime {
            correct &= map.inverse(&there)? == point && map.forward(&map.inverse(&point)?) == point;
        } else {
            correct &= map.inverse(&point).is_err();
        }
        images.insert(there);
    }
    // the forward map is onto exactly in the coprime case
    correct &= (images.len() == total) == coprime;
    Ok(InclusionOutcome { dim, q, coprime, correct })
}

fn inclusion(cfg: &Config) -> std::result::Result<Vec<Check>, CliError> {
    let trials = cfg.usize("trials")?;
    let outcomes = per_trial(cfg, 3, trials, inclusion_triple)?;
    let wrong = outcomes.iter().filter(|o| !o.correct).count();
    let coprime = outcomes.iter().filter(|o| o.coprime).count();
    Ok(vec![Check::new(
        "inclusion.classification",
        wrong == 0,
        format!("triples={trials} bijective={coprime} refused={} misclassified={wrong} tol=exact", trials - coprime),
    )])
}

/// `Z²` followed by `count` random two-dimensional lattices.
pub fn smoothing_lattices<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Result<Vec<LatticeBasis>> {
    let mut out = vec![LatticeBasis::integer(2)];
    while out.len() < count + 1 {
        let m = random_nonsingular(2, 5, rng);
        out.push(LatticeBasis::from_integer_columns(&m)?);
    }
    Ok(out)
}

pub const SMOOTH_EPS: f64 = 0.01;
pub const TORUS_TV_TOL: f64 = 0.02;

/// TV distance between `D_r mod Z²` on a `grid × grid` partition and uniform.
pub fn torus_tv<R: Rng + ?Sized>(r: f64, draws: usize, grid: usize, rng: &mut R) -> Result<f64> {
    let params = GaussianParams::spherical(r)?;
    let mut counts = vec![0u64; grid * grid];
    for _ in 0..draws {
        let x = sample_continuous(&params, 2, rng)?;
        let cell = |v: f64| (((v - v.floor()) * grid as f64) as usize).min(grid - 1);
        counts[cell(x[0]) * grid + cell(x[1])] += 1;
    }
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / draws as f64).collect();
    let uniform = vec![1.0 / (grid * grid) as f64; grid * grid];
    Ok(total_variation(&empirical, &uniform))
}

fn smoothing(cfg: &Config) -> std::result::Result<Vec<Check>, CliError> {
    let seed = cfg.seed()?;
    let mut rng = seeded_rng(seed, 4 << 32);
    let mut checks = Vec::new();
    for (idx, lat) in smoothing_lattices(3, &mut rng)?.iter().enumerate() {
        let b = smoothing_bounds(lat, SMOOTH_EPS)?;
        checks.push(Check::new(
            "smoothing.bounds",
            b.confirmed(),
            format!(
                "lattice={idx} eta_small={:.4} series={:.3e}<={:.3e} eta_eps={:.4} series={:.3e}<={SMOOTH_EPS}",
                b.eta_small,
                b.series_small.upper(),
                b.small_eps(),
                b.eta_eps,
                b.series_eps.upper()
            ),
        ));
    }
    let eta = smoothing_bounds(&LatticeBasis::integer(2), SMOOTH_EPS)?.eta_eps;
    let draws = 1_000_000;
    let tv = torus_tv(eta, draws, 10, &mut seeded_rng(seed, (4 << 32) | 1))?;
    checks.push(Check::new(
        "smoothing.torus_uniformity",
        tv <= TORUS_TV_TOL,
        format!("r={eta:.4} draws={draws} grid=10x10 tv={tv:.4} tol={TORUS_TV_TOL}"),
    ));
    Ok(checks)
}

pub const W_TOL: f64 = 1e-9;

/// Dual series of `Z^{2v}` under the matrix of `r_T^{(i)}(t)` in `Z[Z_2 ⋉ Z_v]`, against `exp(-c² v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeSmoothCheck {
    pub i: usize,
    pub c: f64,
    pub series: f64,
    pub bound: f64,
}

pub fn large_smooth_check(r: f64, iota: f64, t: usize, v: usize) -> Result<LargeSmoothCheck> {
    let w = build_w_family(r, iota, t, v)?;
    let i = (0..v)
        .find(|&i| w.c_constant(i, t) >= 1.0)
        .ok_or_else(|| Error::Parameter(format!("no member with c >= 1 at r = {r}")))?;
    let c = w.c_constant(i, t);
    let ring = RingSpec::full(GroupSpec::type_i(2, v)?);
    let a = w.element(&ring, i, t)?.matrix_rep();
    let bound = (-c * c * v as f64).exp() * 1.01;
    let series = dual_series_matrix(&LatticeBasis::integer(ring.dim()), &a, Some(bound))?.upper();
    Ok(LargeSmoothCheck { i, c, series, bound })
}

fn wfamily(_cfg: &Config) -> std::result::Result<Vec<Check>, CliError> {
    let (r, iota, t, v) = (2.0, 0.25, 8, 8);
    let w = build_w_family(r, iota, t, v)?;
    let dev = w.max_deviation();
    let mut checks = vec![Check::new(
        "wfamily.interpolation",
        dev <= W_TOL,
        format!("v={v} T={t} iota={iota} r={r} members={} max_dev={dev:.3e} tol={W_TOL:e}", v * (t + 1)),
    )];
    let ls = large_smooth_check(r, iota, t, v)?;
    checks.push(Check::new(
        "wfamily.large_smoothing",
        ls.series <= ls.bound,
        format!("member=({}, {t}) c={:.4} series={:.3e} bound={:.3e}", ls.i, ls.c, ls.series, ls.bound),
    ));
    Ok(checks)
}

pub const CHI_P_MIN: f64 = 0.01;

/// A certified principal ideal with determinant prime to `q`.
pub fn certified_ideal<R: Rng + ?Sized>(ring: &RingSpec, q: i64, rng: &mut R) -> Result<CertifiedIdeal> {
    loop {
        let lat = random_principal_ideal(ring, 1, rng);
        if lat.determinant().to_integer().gcd(&BigInt::from(q)).is_one() && lat.determinant().to_integer().abs() > BigInt::one() {
            return CertifiedIdeal::new(&lat, SMOOTH_EPS);
        }
    }
}

fn bddlwe(cfg: &Config) -> std::result::Result<Vec<Check>, CliError> {
    let ring = full_ring(cfg)?;
    let q = cfg.i64("q")?;
    let alpha = cfg.f64("alpha")?;
    let trials = cfg.usize("trials")?;
    let ideals = trials.div_ceil(10).max(1);
    let certified = per_trial(cfg, 5, ideals, |rng| certified_ideal(&ring, q, rng))?;
    let plans: Vec<Plan> = certified.iter().map(|c| Plan::new(c, q, alpha, None)).collect::<Result<_>>()?;
    let samplers = certified.iter().zip(&plans).map(|(c, p)| bdd_sampler(c, p)).collect::<Result<Vec<_>>>()?;
    let holds = per_trial(cfg, 6, trials, |rng| {
        let idx = rng.random_range(0..certified.len());
        let (ideal, plan) = (&certified[idx], &plans[idx]);
        let (x, e) = random_bdd_point(ideal, plan.d, rng)?;
        let out = bdd_to_lwe_with(ideal, plan, &samplers[idx], &(&x + &e), true, rng)?;
        verify_identity(ideal, plan, &out, &x, &e)
    })?;
    let matched = holds.iter().filter(|&&h| h).count();
    let mut checks = vec![Check::new(
        "bddlwe.identity",
        matched == trials,
        format!("ring={ring} q={q} alpha={alpha} ideals={ideals} runs={trials} matched={matched} tol=exact"),
    )];
    let runs = 2000;
    let (ideal, plan) = (&certified[0], &plans[0]);
    let zero = RingElem::zero(&ring).to_rational();
    let samples = per_trial(cfg, 7, runs, |rng| {
        Ok(bdd_to_lwe_with(ideal, plan, &samplers[0], &zero, false, rng)?.sample.a)
    })?;
    let mut counts = vec![0u64; q as usize];
    for a in &samples {
        for &c in a.coeffs() {
            counts[c.rem_euclid(q) as usize] += 1;
        }
    }
    let test = chi_square_uniform(&counts)?;
    checks.push(Check::new(
        "bddlwe.a_uniformity",
        test.p_value > CHI_P_MIN,
        format!(
            "q={q} r={:.3} min_r={:.3} runs={runs} chi2={:.2} p={:.4} tol=p>{CHI_P_MIN}",
            plan.r, plan.min_r, test.statistic, test.p_value
        ),
    ));
    Ok(checks)
}
