//! Acceptance criteria, one line per criterion. Exits non-zero when any criterion fails.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use grlwe::gaussian::stats::chi_square_uniform;
use grlwe::gaussian::{
    build_w_family, dual_series_matrix, sample_continuous, sample_z, seeded_rng, smoothing_bounds, DiscreteSampler,
    GaussianParams,
};
use grlwe::groupring::{
    explicit_irreps, irreducible_reps, match_multisets, matrix_norm, numerical_eigenvalues, numerical_irrep_dimensions,
    spectrum, IrrepSummary, RingElem, RingSpec,
};
use grlwe::groups::GroupSpec;
use grlwe::grlwe::{bdd_sampler, bdd_to_lwe_with, random_bdd_point, verify_identity, CertifiedIdeal, Plan};
use grlwe::lattices::{check_dual_equals_permuted_inverse, ideal_lattice, InclusionMap, LatticeBasis, Side};
use grlwe::matrix::Matrix;
use grlwe::pke::{correctness_rate, PkeParams};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn type_i(m: usize, n: usize) -> GroupSpec {
    GroupSpec::type_i(m, n).unwrap()
}

fn type_ii(p: usize, k: u32) -> GroupSpec {
    GroupSpec::type_ii(p, k).unwrap()
}

fn random_elem<R: Rng>(ring: &RingSpec, range: i64, rng: &mut R) -> RingElem<i64> {
    RingElem::from_coeffs(ring, (0..ring.dim()).map(|_| rng.random_range(-range..=range)).collect()).unwrap()
}

fn nonsingular_ideal<R: Rng>(ring: &RingSpec, range: i64, rng: &mut R) -> LatticeBasis {
    loop {
        if let Ok(lat) = ideal_lattice(ring, &[random_elem(ring, range, rng)], Side::Right) {
            return lat;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(1, 0);
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for g in [type_i(2, 4), type_i(4, 6), type_ii(5, 1)] {
        let ring = RingSpec::full(g);
        for _ in 0..100 {
            let x = random_elem(&ring, 50, &mut rng).to_f64();
            let closed: Vec<_> = spectrum(&x).unwrap().iter().map(|e| e.value).collect();
            let numeric = numerical_eigenvalues(&x.matrix_rep()).unwrap();
            let dev = match_multisets(&closed, &numeric).unwrap_or(f64::INFINITY);
            worst = worst.max(dev);
            matched += usize::from(dev <= 1e-8);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        matched == 300 && elapsed < Duration::from_secs(30),
        format!("{matched}/300 spectra within 1e-8 (max deviation {worst:.2e}), {:.1}s < 30s", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(2, 0);
    let mut holds = 0;
    for g in [type_i(2, 4), type_i(4, 4), type_ii(5, 1)] {
        let ring = RingSpec::full(g);
        for _ in 0..50 {
            let ideal = nonsingular_ideal(&ring, 2, &mut rng);
            holds += usize::from(check_dual_equals_permuted_inverse(&ideal).unwrap().holds);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        holds == 150 && elapsed < Duration::from_secs(120),
        format!("{holds}/150 exact HNF equalities, {:.1}s < 120s", elapsed.as_secs_f64()),
    )
}

fn random_nonsingular<R: Rng>(dim: usize, range: i64, rng: &mut R) -> Matrix<i64> {
    loop {
        let m = Matrix::from_fn(dim, dim, |_, _| rng.random_range(-range..=range));
        if !m.to_bigint().determinant().is_zero() {
            return m;
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = seeded_rng(3, 0);
    let mut wrong = 0;
    let mut coprime_count = 0;
    for _ in 0..100 {
        let dim = rng.random_range(1..=6usize);
        let moduli: Vec<i64> = (2..=12).filter(|&q| (q as f64).powi(dim as i32) <= 4096.0).collect();
        let q = moduli[rng.random_range(0..moduli.len())];
        let basis = random_nonsingular(dim, 4, &mut rng);
        let t = random_nonsingular(dim, 2, &mut rng);
        let sub_cols = basis.to_bigint().mul(&t.to_bigint()).map(|x| x.to_i64().unwrap());
        let sup = LatticeBasis::from_integer_columns(&basis).unwrap();
        let sub = LatticeBasis::from_integer_columns(&sub_cols).unwrap();
        let qb = BigInt::from(q);
        let map = InclusionMap::new(&sub, &sup, &qb).unwrap();
        let coprime = t.to_bigint().determinant().abs().gcd(&qb).is_one();
        coprime_count += usize::from(coprime);
        let mut ok = map.is_bijective() == coprime;
        let tb = t.to_bigint();
        let total = (q as usize).pow(dim as u32);
        let mut images = HashSet::new();
        for idx in 0..total {
            let point: Vec<BigInt> = (0..dim).map(|c| BigInt::from((idx / (q as usize).pow(c as u32)) % q as usize)).collect();
            let expected: Vec<BigInt> = tb.mul_vec(&point).iter().map(|x| x.mod_floor(&qb)).collect();
            let image = map.forward(&point);
            ok &= image == expected;
            match map.inverse(&point) {
                Ok(pre) => ok &= coprime && map.forward(&pre) == point && map.inverse(&image).unwrap() == point,
                Err(_) => ok &= !coprime,
            }
            images.insert(image);
        }
        ok &= (images.len() == total) == coprime;
        wrong += usize::from(!ok);
    }
    outcome(wrong == 0, format!("100 triples ({coprime_count} coprime), {wrong} misclassified"))
}

fn criterion_4() -> Outcome {
    let ring = RingSpec::full(type_i(2, 4));
    let mut rng = seeded_rng(4, 0);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let h = RingElem::from_coeffs(&ring, (0..8).map(|_| sample_z(0.0, 1.0, &mut rng) as f64).collect()).unwrap();
        let norm = matrix_norm(&h);
        worst = worst.max(norm);
        violations += usize::from(norm > 8.0);
    }
    outcome(violations == 0, format!("{violations} of 10^4 draws exceed 8 (max {worst:.3})"))
}

/// `ρ_s(x - c)` normalized over a window wide enough that the remainder is below `1e-30`.
fn z_pmf_oracle(s: f64, center: f64, lo: i64, hi: i64) -> Vec<f64> {
    let rho = |x: i64| (-PI * (x as f64 - center).powi(2) / (s * s)).exp();
    let total: f64 = (-200..=200).map(rho).sum();
    (lo..=hi).map(|x| rho(x) / total).collect()
}

fn criterion_5() -> Outcome {
    let mut rng = seeded_rng(5, 0);
    let sampler = DiscreteSampler::new(&LatticeBasis::integer(8), &GaussianParams::spherical(4.0).unwrap()).unwrap();
    let bound = 4.0 * 8f64.sqrt();
    let mut violations = 0;
    for _ in 0..10_000 {
        let x = sampler.sample_f64(&[0.0; 8], &mut rng).unwrap();
        violations += usize::from(x.iter().map(|v| v * v).sum::<f64>().sqrt() > bound);
    }
    let (s, center) = (3.0, 0.3);
    let one = DiscreteSampler::new(&LatticeBasis::integer(1), &GaussianParams::spherical(s).unwrap()).unwrap();
    let (lo, hi) = (-40i64, 40i64);
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    let draws = 100_000;
    for _ in 0..draws {
        let x = one.sample_coords(&[center], &mut rng).unwrap()[0];
        counts[(x.clamp(lo, hi) - lo) as usize] += 1;
    }
    let exact = z_pmf_oracle(s, center, lo, hi);
    let tv = 0.5 * counts.iter().zip(&exact).map(|(&c, p)| (c as f64 / draws as f64 - p).abs()).sum::<f64>();
    outcome(
        violations == 0 && tv <= 0.02,
        format!("{violations} of 10^4 samples exceed 4*sqrt(8); one-dimensional TV {tv:.4} <= 0.02"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = seeded_rng(6, 0);
    let eps = 0.01;
    let mut lattices = vec![LatticeBasis::integer(2)];
    while lattices.len() < 4 {
        lattices.push(LatticeBasis::from_integer_columns(&random_nonsingular(2, 5, &mut rng)).unwrap());
    }
    let mut ok = true;
    let mut worst_small: f64 = 0.0;
    let mut worst_eps: f64 = 0.0;
    for l in &lattices {
        let b = smoothing_bounds(l, eps).unwrap();
        let small_target = 2f64.powi(-4);
        ok &= b.series_small.upper() <= small_target && b.series_eps.upper() <= eps;
        worst_small = worst_small.max(b.series_small.upper() / small_target);
        worst_eps = worst_eps.max(b.series_eps.upper() / eps);
    }
    let r = smoothing_bounds(&lattices[0], eps).unwrap().eta_eps;
    let params = GaussianParams::spherical(r).unwrap();
    let grid = 10;
    let draws = 1_000_000;
    let mut counts = vec![0u64; grid * grid];
    for _ in 0..draws {
        let x = sample_continuous(&params, 2, &mut rng).unwrap();
        let cell = |v: f64| (((v - v.floor()) * grid as f64) as usize).min(grid - 1);
        counts[cell(x[0]) * grid + cell(x[1])] += 1;
    }
    let uniform = 1.0 / (grid * grid) as f64;
    let tv = 0.5 * counts.iter().map(|&c| (c as f64 / draws as f64 - uniform).abs()).sum::<f64>();
    outcome(
        ok && tv <= 0.02,
        format!(
            "4 lattices, worst series/target {worst_small:.3} at 2^-2n and {worst_eps:.3} at eps=0.01; torus TV {tv:.4} <= 0.02 at r={r:.4}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let (r, iota, t, v) = (2.0, 0.25, 8, 8);
    let w = build_w_family(r, iota, t, v).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..v {
        for k in 0..=t {
            for l in 0..v {
                let z = num_complex::Complex64::from_polar(1.0, 2.0 * PI * l as f64 / v as f64);
                let value = w.polys[i][k].iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
                let target = if l == i || l == (v - i) % v { r * (1.0 + iota).powi(k as i32) } else { r };
                worst = worst.max((value - target).norm());
            }
        }
    }
    let all_real = w.polys.iter().flatten().flatten().all(|c| c.is_finite());
    let i = (0..v).find(|&i| w.c_constant(i, t) >= 1.0);
    let Some(i) = i else {
        return outcome(false, "no member with c >= 1".into());
    };
    let c = w.c_constant(i, t);
    let ring = RingSpec::full(type_i(2, v));
    let a = w.element(&ring, i, t).unwrap().matrix_rep();
    let bound = (-c * c * v as f64).exp() * 1.01;
    let series = dual_series_matrix(&LatticeBasis::integer(ring.dim()), &a, Some(bound)).unwrap().upper();
    outcome(
        worst <= 1e-9 && all_real && series <= bound,
        format!("interpolation error {worst:.2e} <= 1e-9; member i={i} c={c:.4}: series {series:.3e} <= {bound:.3e}"),
    )
}

fn certified<R: Rng>(ring: &RingSpec, q: i64, rng: &mut R) -> CertifiedIdeal {
    loop {
        let lat = nonsingular_ideal(ring, 1, rng);
        let det = lat.determinant().to_integer().abs();
        if det > BigInt::one() && det.gcd(&BigInt::from(q)).is_one() {
            return CertifiedIdeal::new(&lat, 0.01).unwrap();
        }
    }
}

fn criterion_8() -> Outcome {
    let q = 17;
    let alpha = 0.01;
    let mut rng = seeded_rng(8, 0);
    let mut matched = 0;
    let mut runs = 0;
    let mut min_p: f64 = 1.0;
    for g in [type_i(2, 4), type_i(4, 4), type_ii(5, 1)] {
        let ring = RingSpec::full(g);
        let ideals: Vec<CertifiedIdeal> = (0..10).map(|_| certified(&ring, q, &mut rng)).collect();
        let plans: Vec<Plan> = ideals.iter().map(|c| Plan::new(c, q, alpha, None).unwrap()).collect();
        let samplers: Vec<DiscreteSampler> = ideals.iter().zip(&plans).map(|(c, p)| bdd_sampler(c, p).unwrap()).collect();
        for run in 0..100 {
            let idx = run % 10;
            let (x, e) = random_bdd_point(&ideals[idx], plans[idx].d, &mut rng).unwrap();
            let out = bdd_to_lwe_with(&ideals[idx], &plans[idx], &samplers[idx], &(&x + &e), true, &mut rng).unwrap();
            matched += usize::from(verify_identity(&ideals[idx], &plans[idx], &out, &x, &e).unwrap());
            runs += 1;
        }
        let zero: RingElem<BigRational> = RingElem::zero(&ring);
        let mut counts = vec![0u64; q as usize];
        for _ in 0..2000 {
            let out = bdd_to_lwe_with(&ideals[0], &plans[0], &samplers[0], &zero, false, &mut rng).unwrap();
            for &c in out.sample.a.coeffs() {
                counts[c.rem_euclid(q) as usize] += 1;
            }
        }
        min_p = min_p.min(chi_square_uniform(&counts).unwrap().p_value);
    }
    outcome(
        matched == runs && min_p > 0.01,
        format!("{matched}/{runs} exact identities over three families; smallest uniformity p-value {min_p:.4} > 0.01"),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let desk = PkeParams::desk();
    let report = correctness_rate(&desk, 1000, 9, 4).unwrap();
    let noiseless = correctness_rate(&PkeParams::new(desk.ring.clone(), desk.q, 0.0).unwrap(), 1000, 9, 4).unwrap();
    let elapsed = start.elapsed();
    outcome(
        report.identity_failures == 0 && report.rate() >= 0.99 && noiseless.rate() == 1.0 && elapsed < Duration::from_secs(60),
        format!(
            "identity failures {}/1000, desk rate {:.3} >= 0.99, noiseless rate {:.3}, {:.1}s < 60s",
            report.identity_failures,
            report.rate(),
            noiseless.rate(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_10a() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut groups = 0;
    for m in [2, 4, 6] {
        for n in 1..=8 {
            let g = type_i(m, n);
            let irreps = explicit_irreps(&g).unwrap();
            let order = m * n;
            ok &= irreps.iter().map(|r| r.dim * r.dim).sum::<usize>() == order;
            for (a, ra) in irreps.iter().enumerate() {
                worst = worst.max(ra.relation_defect(m, n));
                for rb in &irreps[a..] {
                    // first orthogonality relation: <χ_a, χ_b> = δ_ab
                    let inner: num_complex::Complex64 =
                        g.elements().map(|x| ra.character(x) * rb.character(x).conj()).sum::<num_complex::Complex64>() / order as f64;
                    let expected = if std::ptr::eq(ra, rb) { 1.0 } else { 0.0 };
                    ok &= (inner - expected).norm() < 1e-9;
                }
            }
            groups += 1;
        }
    }
    outcome(
        ok && worst <= 1e-12,
        format!("{groups} Type I groups: relation defect {worst:.2e} <= 1e-12, squared dimensions sum to |G|, characters orthonormal"),
    )
}

fn criterion_10b() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, k) in [(5usize, 1u32), (3, 2), (5, 2)] {
        let g = type_ii(p, k);
        let numeric = numerical_irrep_dimensions(&g, 10).unwrap();
        let IrrepSummary::TypeII(orbits) = irreducible_reps(&g) else { unreachable!() };
        let mut orbit_dims: Vec<usize> = orbits.dims.iter().flat_map(|&(d, c)| std::iter::repeat_n(d, c)).collect();
        orbit_dims.sort_unstable();
        let largest = numeric.iter().copied().max().unwrap_or(0);
        let bound = p.pow(k - 1);
        ok &= orbit_dims == numeric && largest <= bound;
        parts.push(format!("p^k={}: largest block {largest} vs bound {bound}", p.pow(k)));
    }
    outcome(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
        ("10a", criterion_10a),
        ("10b", criterion_10b),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = run();
        failed += usize::from(!result.passed);
        println!(
            "criterion {name:<3} {} ({:.1}s) {}",
            if result.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!("RESULT pass={} fail={failed}", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
