//! Eigenvalues of left multiplication in a full group ring.
//!
//! Type I: for each `c ∈ Z_n` and `ℓ < m/2` the vectors
//! `Σ_k λ^{-k} e_{2k+ε,c}` (`λ = ω^{2ℓ}`, `e_{i,c} = Σ_j ξ^{cj} s^i t^j`)
//! span an invariant plane on which `s ↦ [[0, λ], [1, 0]]` and
//! `t ↦ diag(ξ^{-c}, ξ^c)`. Each plane contributes the two eigenvalues of a
//! 2x2 block.
//!
//! Type II: `V_c = span{Σ_j ξ^{cj} (a ⊙ g^j)}` is invariant with
//! `b ⊙ g^k : e_{a,c} ↦ ξ^{-c k a^{-1}} e_{ba,c}`, giving an `m x m` block per `c`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::RingElem;
use crate::error::{Error, Result};
use crate::groups::{Family, GroupSpec};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpectrumIndex {
    /// Row inside the representation block, `< m`.
    pub i: usize,
    /// Root index `c`, `< n` (Type I) or `< p^k` (Type II).
    pub j: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub index: SpectrumIndex,
    pub value: Complex64,
}

fn root(order: usize, power: i64) -> Complex64 {
    let e = power.rem_euclid(order as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * e / order as f64)
}

/// `Σ_b coeffs[b] z^b` by Horner.
fn poly_eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Spectrum of left multiplication by `x`, labelled by representation block.
pub fn spectrum(x: &RingElem<f64>) -> Result<Vec<SpectrumEntry>> {
    let ring = x.ring();
    if !ring.is_full() {
        return Err(Error::UnsupportedRing(format!(
            "closed-form spectrum needs a full group ring, got {ring}"
        )));
    }
    let group = ring.group();
    match group.family() {
        Family::TypeI { m, n } => Ok(type_i_spectrum(x.coeffs(), m, n)),
        Family::TypeII { .. } => type_ii_spectrum(x.coeffs(), group),
    }
}

fn type_i_spectrum(coeffs: &[f64], m: usize, n: usize) -> Vec<SpectrumEntry> {
    let blocks: Vec<&[f64]> = coeffs.chunks(n).collect();
    let mut out = Vec::with_capacity(m * n);
    for c in 0..n {
        let (z_minus, z_plus) = (root(n, -(c as i64)), root(n, c as i64));
        let f_minus: Vec<Complex64> = blocks.iter().map(|f| poly_eval(f, z_minus)).collect();
        let f_plus: Vec<Complex64> = blocks.iter().map(|f| poly_eval(f, z_plus)).collect();
        for l in 0..m / 2 {
            // λ = ω^{2ℓ}; s^a = λ^{a/2} for even a, λ^{(a-1)/2} ρ(s) for odd a
            let lambda = root(m, 2 * l as i64);
            let zero = Complex64::new(0.0, 0.0);
            let (mut a0, mut a1, mut c0, mut c1) = (zero, zero, zero, zero);
            let mut pw = Complex64::new(1.0, 0.0);
            for a in (0..m).step_by(2) {
                a0 += pw * f_minus[a];
                a1 += pw * f_plus[a];
                c0 += pw * f_minus[a + 1];
                c1 += pw * f_plus[a + 1];
                pw *= lambda;
            }
            // block [[a0, λ c1], [c0, a1]]
            let (e1, e2) = eig2(a0, lambda * c1, c0, a1);
            out.push(SpectrumEntry { index: SpectrumIndex { i: 2 * l, j: c }, value: e1 });
            out.push(SpectrumEntry { index: SpectrumIndex { i: 2 * l + 1, j: c }, value: e2 });
        }
    }
    out
}

/// Eigenvalues of `[[a, b], [c, d]]`.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let r = disc.sqrt();
    (half_tr + r, half_tr - r)
}

fn type_ii_spectrum(coeffs: &[f64], group: &GroupSpec) -> Result<Vec<SpectrumEntry>> {
    let m = group.first_order();
    let n = group.second_order();
    let units = group.units();
    let blocks: Vec<&[f64]> = coeffs.chunks(n).collect();
    let mut out = Vec::with_capacity(m * n);
    // c = 0: regular representation of the cyclic unit group weighted by F_b(1)
    let weights: Vec<f64> = blocks.iter().map(|f| f.iter().sum()).collect();
    let gen = primitive_root_index(group);
    let logs = discrete_logs(group, gen);
    for i in 0..m {
        let value = (0..m).fold(Complex64::new(0.0, 0.0), |acc, b| acc + root(m, (i * logs[b]) as i64) * weights[b]);
        out.push(SpectrumEntry { index: SpectrumIndex { i, j: 0 }, value });
    }
    for c in 1..n {
        let mut block = faer::Mat::<Complex64>::zeros(m, m);
        for (a_idx, &a) in units.iter().enumerate() {
            let a_inv = group.unit_position(inverse_mod_small(a, n)).expect("unit");
            let z = root(n, -((c * units[a_inv]) as i64));
            for (b_idx, &b) in units.iter().enumerate() {
                let row = group.unit_position(b * a % n).expect("unit");
                block[(row, a_idx)] += poly_eval(blocks[b_idx], z);
            }
        }
        let values = complex_block_eigenvalues(block)?;
        for (i, value) in values.into_iter().enumerate() {
            out.push(SpectrumEntry { index: SpectrumIndex { i, j: c }, value });
        }
    }
    Ok(out)
}

fn complex_block_eigenvalues(block: faer::Mat<Complex64>) -> Result<Vec<Complex64>> {
    block.eigenvalues().map_err(|e| Error::NoConvergence(format!("{e:?}")))
}

fn inverse_mod_small(a: usize, n: usize) -> usize {
    (1..n).find(|&v| a * v % n == 1).unwrap_or(1)
}

/// Position in the unit list of a generator of the (cyclic) unit group.
fn primitive_root_index(group: &GroupSpec) -> usize {
    let n = group.second_order();
    let m = group.first_order();
    let units = group.units();
    (0..m)
        .find(|&idx| {
            let mut x = units[idx];
            let mut order = 1;
            while x != 1 && order <= m {
                x = x * units[idx] % n;
                order += 1;
            }
            order == m
        })
        .expect("unit group of Z_{p^k} is cyclic for admitted parameters")
}

/// `logs[b]` with `units[b] = units[gen]^{logs[b]}`.
fn discrete_logs(group: &GroupSpec, gen: usize) -> Vec<usize> {
    let n = group.second_order();
    let m = group.first_order();
    let mut logs = vec![0; m];
    let mut x = 1;
    for r in 0..m {
        logs[group.unit_position(x).expect("unit")] = r;
        x = x * group.units()[gen] % n;
    }
    logs
}

/// The scalar values `Σ_{a,b} f_{a,b} ω^{ia} ξ^{jb}` (Type I, elements `s^a t^b`) or
/// `Σ_{r,s} f_{r,s} ω^{ir} ξ^{js}` (Type II, elements `γ^r ⊙ g^s` for a primitive root γ).
///
/// These coincide with the spectrum when `x` is supported on an abelian subgroup
/// such as `<t>` or `<s>`, but not for general elements.
pub fn character_formula_values(x: &RingElem<f64>) -> Result<Vec<SpectrumEntry>> {
    let ring = x.ring();
    if !ring.is_full() {
        return Err(Error::UnsupportedRing(format!("need a full group ring, got {ring}")));
    }
    let group = ring.group();
    let m = group.first_order();
    let n = group.second_order();
    let blocks: Vec<&[f64]> = x.coeffs().chunks(n).collect();
    let exps: Vec<usize> = match group.family() {
        Family::TypeI { .. } => (0..m).collect(),
        Family::TypeII { .. } => discrete_logs(group, primitive_root_index(group)),
    };
    let mut out = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let xi = root(n, j as i64);
            let value = (0..m).fold(Complex64::new(0.0, 0.0), |acc, a| {
                acc + root(m, (i * exps[a]) as i64) * poly_eval(blocks[a], xi)
            });
            out.push(SpectrumEntry { index: SpectrumIndex { i, j }, value });
        }
    }
    Ok(out)
}

/// Eigenvalues of a real square matrix.
pub fn numerical_eigenvalues(m: &Matrix<f64>) -> Result<Vec<Complex64>> {
    m.to_faer().eigenvalues().map_err(|e| Error::NoConvergence(format!("{e:?}")))
}

/// Largest distance under greedy nearest pairing; `None` if the sizes differ.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (best, dist) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[best] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::RingSpec;
    use crate::groups::GroupElem;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn values(entries: &[SpectrumEntry]) -> Vec<Complex64> {
        entries.iter().map(|e| e.value).collect()
    }

    fn check(x: &RingElem<f64>) -> f64 {
        let closed = values(&spectrum(x).unwrap());
        assert_eq!(closed.len(), x.ring().dim());
        match_multisets(&closed, &numerical_eigenvalues(&x.matrix_rep()).unwrap()).unwrap()
    }

    #[test]
    fn generator_spectra_in_d8() {
        let r = RingSpec::full(GroupSpec::type_i(2, 4).unwrap());
        let t = RingElem::monomial(&r, GroupElem::new(0, 1), 1.0);
        let mut expected = Vec::new();
        for _ in 0..2 {
            expected.extend((0..4).map(|j| root(4, j)));
        }
        assert!(match_multisets(&values(&spectrum(&t).unwrap()), &expected).unwrap() < 1e-12);
        let s = RingElem::monomial(&r, GroupElem::new(1, 0), 1.0);
        let signs: Vec<Complex64> = (0..8).map(|k| Complex64::new(if k < 4 { 1.0 } else { -1.0 }, 0.0)).collect();
        assert!(match_multisets(&values(&spectrum(&s).unwrap()), &signs).unwrap() < 1e-12);
        let one = RingElem::<f64>::one(&r);
        assert!(spectrum(&one).unwrap().iter().all(|e| (e.value - 1.0).norm() < 1e-12));
    }

    #[test]
    fn scalar_formula_fails_for_s_plus_t() {
        let r = RingSpec::full(GroupSpec::type_i(2, 4).unwrap());
        let x = &RingElem::monomial(&r, GroupElem::new(1, 0), 1.0) + &RingElem::monomial(&r, GroupElem::new(0, 1), 1.0);
        let numeric = numerical_eigenvalues(&x.matrix_rep()).unwrap();
        // the 2-dim blocks are nilpotent Jordan blocks, so numerics only reach ~sqrt(eps)
        assert!(check(&x) < 1e-6);
        let mut exact = vec![Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)];
        exact.extend([Complex64::new(0.0, 0.0); 6]);
        assert!(match_multisets(&values(&spectrum(&x).unwrap()), &exact).unwrap() < 1e-7);
        let formula = values(&character_formula_values(&x).unwrap());
        assert!(match_multisets(&formula, &numeric).unwrap() > 0.5);
    }

    #[test]
    fn scalar_formula_holds_on_abelian_support() {
        let r = RingSpec::full(GroupSpec::type_i(4, 6).unwrap());
        let x = RingElem::from_coeffs(&r, (0..24).map(|k| if k < 6 { k as f64 - 2.0 } else { 0.0 }).collect()).unwrap();
        let numeric = numerical_eigenvalues(&x.matrix_rep()).unwrap();
        assert!(match_multisets(&values(&character_formula_values(&x).unwrap()), &numeric).unwrap() < 1e-8);
    }

    #[test]
    fn random_elements_match_numerics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in [
            GroupSpec::type_i(2, 4).unwrap(),
            GroupSpec::type_i(4, 6).unwrap(),
            GroupSpec::type_ii(5, 1).unwrap(),
            GroupSpec::type_ii(3, 2).unwrap(),
            GroupSpec::type_ii(2, 2).unwrap(),
        ] {
            let r = RingSpec::full(g);
            for _ in 0..20 {
                let x = RingElem::from_coeffs(&r, (0..r.dim()).map(|_| rng.random_range(-50..=50) as f64).collect())
                    .unwrap();
                assert!(check(&x) < 1e-8, "{}", r);
            }
        }
    }

    #[test]
    fn quotient_is_rejected() {
        let r = RingSpec::quotient_of(GroupSpec::type_i(2, 4).unwrap()).unwrap();
        assert!(matches!(spectrum(&RingElem::one(&r)), Err(Error::UnsupportedRing(_))));
    }
}
