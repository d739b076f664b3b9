//! Irreducible representations and central idempotents.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{numerical_eigenvalues, RingElem, RingSpec};
use crate::error::{Error, Result};
use crate::groups::{Family, GroupElem, GroupSpec};

type CMat = Vec<Vec<Complex64>>;

/// A representation given by the images of the generators `s` and `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub dim: usize,
    pub s: CMat,
    pub t: CMat,
}

fn root(order: usize, power: i64) -> Complex64 {
    let e = power.rem_euclid(order as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * e / order as f64)
}

fn identity(d: usize) -> CMat {
    (0..d)
        .map(|r| (0..d).map(|c| if r == c { Complex64::one() } else { Complex64::zero() }).collect())
        .collect()
}

fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let d = a.len();
    (0..d)
        .map(|r| (0..d).map(|c| (0..d).map(|k| a[r][k] * b[k][c]).sum()).collect())
        .collect()
}

fn mat_pow(a: &CMat, e: usize) -> CMat {
    (0..e).fold(identity(a.len()), |acc, _| mat_mul(&acc, a))
}

fn max_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

impl Irrep {
    /// Image of `s^a t^b`.
    pub fn image(&self, g: GroupElem) -> CMat {
        mat_mul(&mat_pow(&self.s, g.i), &mat_pow(&self.t, g.j))
    }

    pub fn character(&self, g: GroupElem) -> Complex64 {
        let m = self.image(g);
        (0..self.dim).map(|k| m[k][k]).sum()
    }

    /// Largest entry deviation over `s^m = 1`, `t^n = 1` and `s t = t^{-1} s`.
    pub fn relation_defect(&self, m: usize, n: usize) -> f64 {
        let id = identity(self.dim);
        let t_inv = mat_pow(&self.t, n - 1);
        let lhs = mat_mul(&self.s, &self.t);
        let rhs = mat_mul(&t_inv, &self.s);
        max_diff(&mat_pow(&self.s, m), &id)
            .max(max_diff(&mat_pow(&self.t, n), &id))
            .max(max_diff(&lhs, &rhs))
    }
}

/// Irreducible dimensions of `Z_{p^k}^* ⋉ Z_{p^k}` by orbits of the unit group on
/// the characters of `Z_{p^k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeIIDimensions {
    pub p: usize,
    pub k: u32,
    /// The claimed upper bound `p^{k-1}`.
    pub claimed_bound: usize,
    /// `(dimension, number of irreducibles)` pairs, ascending by dimension.
    pub dims: Vec<(usize, usize)>,
    pub order: usize,
}

impl TypeIIDimensions {
    pub fn count(&self) -> usize {
        self.dims.iter().map(|&(_, c)| c).sum()
    }

    pub fn sum_of_squares(&self) -> usize {
        self.dims.iter().map(|&(d, c)| d * d * c).sum()
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().map(|&(d, _)| d).max().unwrap_or(0)
    }

    pub fn bound_holds(&self) -> bool {
        self.max_dim() <= self.claimed_bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IrrepSummary {
    TypeI(Vec<Irrep>),
    TypeII(TypeIIDimensions),
}

/// Explicit tables for Type I, dimension data for Type II.
pub fn irreducible_reps(group: &GroupSpec) -> IrrepSummary {
    match group.family() {
        Family::TypeI { m, n } => IrrepSummary::TypeI(type_i_irreps(m, n)),
        Family::TypeII { p, k } => IrrepSummary::TypeII(type_ii_dimensions(group, p, k)),
    }
}

/// Explicit representation matrices; only available for Type I.
pub fn explicit_irreps(group: &GroupSpec) -> Result<Vec<Irrep>> {
    match group.family() {
        Family::TypeI { m, n } => Ok(type_i_irreps(m, n)),
        Family::TypeII { .. } => Err(Error::NotImplemented(format!(
            "explicit representation matrices for {group}"
        ))),
    }
}

fn type_i_irreps(m: usize, n: usize) -> Vec<Irrep> {
    let one_dim = |s: Complex64, t: Complex64| Irrep { dim: 1, s: vec![vec![s]], t: vec![vec![t]] };
    let t_values: &[f64] = if n.is_multiple_of(2) { &[1.0, -1.0] } else { &[1.0] };
    let mut reps = Vec::new();
    for &tv in t_values {
        for i in 0..m {
            reps.push(one_dim(root(m, i as i64), Complex64::new(tv, 0.0)));
        }
    }
    let z = Complex64::zero();
    let o = Complex64::one();
    for i in 0..m / 2 {
        for j in 1..n.div_ceil(2) {
            reps.push(Irrep {
                dim: 2,
                s: vec![vec![z, root(m, 2 * i as i64)], vec![o, z]],
                t: vec![vec![root(n, j as i64), z], vec![z, root(n, -(j as i64))]],
            });
        }
    }
    reps
}

fn euler_phi_prime_power(p: usize, e: u32) -> usize {
    if e == 0 {
        1
    } else {
        (p - 1) * p.pow(e - 1)
    }
}

fn type_ii_dimensions(group: &GroupSpec, p: usize, k: u32) -> TypeIIDimensions {
    let m = group.first_order();
    // the trivial character of Z_{p^k} gives m one-dimensional irreducibles;
    // characters of valuation v form one orbit of size φ(p^{k-v}) with p^v irreducibles each
    let mut dims = vec![(1usize, m)];
    for v in 0..k {
        let d = euler_phi_prime_power(p, k - v);
        let count = m / d;
        match dims.iter_mut().find(|(dd, _)| *dd == d) {
            Some(entry) => entry.1 += count,
            None => dims.push((d, count)),
        }
    }
    dims.sort_unstable();
    TypeIIDimensions { p, k, claimed_bound: p.pow(k - 1), dims, order: group.order() }
}

/// Conjugacy class sums as index lists.
pub fn class_sums(group: &GroupSpec) -> Vec<Vec<usize>> {
    let order = group.order();
    let mut class_of = vec![usize::MAX; order];
    let mut classes = Vec::new();
    for x in group.elements() {
        let xi = group.index(x);
        if class_of[xi] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for g in group.elements() {
            let y = group.mul_unchecked(group.mul_unchecked(g, x), group.inv_unchecked(g));
            let yi = group.index(y);
            if class_of[yi] == usize::MAX {
                class_of[yi] = id;
                members.push(yi);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    classes
}

/// Irreducible dimensions read off the eigenvalue multiplicities `d^2` of a random
/// central element acting on the regular representation.
pub fn numerical_irrep_dimensions(group: &GroupSpec, seed: u64) -> Result<Vec<usize>> {
    let ring = RingSpec::full(group.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![0.0; ring.dim()];
    for class in class_sums(group) {
        let alpha: f64 = rng.random_range(-1.0..1.0);
        for idx in class {
            coeffs[idx] = alpha;
        }
    }
    let z = RingElem::from_coeffs(&ring, coeffs)?;
    let eigen = numerical_eigenvalues(&z.matrix_rep())?;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for value in eigen {
        match clusters.iter_mut().find(|(c, _)| (c - value).norm() < 1e-6) {
            Some(entry) => entry.1 += 1,
            None => clusters.push((value, 1)),
        }
    }
    let mut dims = Vec::with_capacity(clusters.len());
    for (value, size) in clusters {
        let d = (size as f64).sqrt().round() as usize;
        if d * d != size {
            return Err(Error::Parameter(format!(
                "eigenvalue {value} has multiplicity {size}, not a square"
            )));
        }
        dims.push(d);
    }
    dims.sort_unstable();
    Ok(dims)
}

/// The central idempotents `(1/2n)(Σ t^j)(1 ± s)` and, for even `n`,
/// `(1/2n)(Σ (-1)^j t^j)(1 ± s)` in `Q[Z_2 ⋉ Z_n]`.
pub fn one_dim_idempotents(group: &GroupSpec) -> Result<Vec<RingElem<BigRational>>> {
    let n = match group.family() {
        Family::TypeI { m: 2, n } => n,
        _ => {
            return Err(Error::InvalidGroup(format!(
                "one-dimensional idempotents are provided for Z_2 ⋉ Z_n, got {group}"
            )))
        }
    };
    let ring = RingSpec::full(group.clone());
    let scale = BigRational::new(BigInt::one(), BigInt::from(2 * n));
    let signs: &[i64] = if n % 2 == 0 { &[1, -1] } else { &[1] };
    let mut out = Vec::new();
    for &t_sign in signs {
        for s_sign in [1i64, -1] {
            let mut coeffs = vec![BigRational::zero(); ring.dim()];
            for j in 0..n {
                let tj = if j % 2 == 1 { t_sign } else { 1 };
                coeffs[j] = scale.clone() * BigRational::from_integer(tj.into());
                // t^j s = s t^{-j}
                let idx = group.index(GroupElem::new(1, (n - j) % n));
                coeffs[idx] = scale.clone() * BigRational::from_integer((tj * s_sign).into());
            }
            out.push(RingElem::from_coeffs(&ring, coeffs)?);
        }
    }
    Ok(out)
}
