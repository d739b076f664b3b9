//! Arithmetic in `Z[G]`, `Q[G]`, `R[G]` and the two quotient rings
//! `Z[G_1]/<t^(n/2) + 1>` and `Z[G_2]/<1 + g + ... + g^(p^k - 1)>`.
//!
//! Coefficients are indexed by the flattened group index `i * second + j`.
//! In a quotient ring the `j` component is truncated (`j < n/2`, resp.
//! `j < p^k - 1`) and every product is reduced eagerly, so elements are
//! always stored in canonical form.

mod norm;
mod reps;
mod spectrum;

pub use norm::{matrix_norm, spectral_norm};
pub use reps::{
    class_sums, explicit_irreps, irreducible_reps, numerical_irrep_dimensions, one_dim_idempotents,
    Irrep, IrrepSummary, TypeIIDimensions,
};
pub use spectrum::{
    character_formula_values, match_multisets, numerical_eigenvalues, spectrum, SpectrumEntry,
    SpectrumIndex,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{parse_record, record_value, Family, GroupElem, GroupSpec};
use crate::matrix::{format_rat, parse_rat, Matrix};

/// Scalars a ring element can carry.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quotient {
    None,
    /// `t^(n/2) + 1`, Type I with `4 | n`.
    TypeI,
    /// `1 + g + ... + g^(p^k - 1)`, Type II.
    TypeII,
}

struct RingInner {
    group: GroupSpec,
    quotient: Quotient,
    /// Retained length of the second component (`n`, `n/2`, `p^k` or `p^k - 1`).
    block: usize,
    dim: usize,
    /// Full group index of the product of reduced basis elements `u` and `v`.
    products: Vec<u32>,
}

#[derive(Clone)]
pub struct RingSpec(Arc<RingInner>);

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.group == other.0.group && self.0.quotient == other.0.quotient)
    }
}
impl Eq for RingSpec {}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingSpec({self})")
    }
}

impl RingSpec {
    pub fn new(group: GroupSpec, quotient: Quotient) -> Result<Self> {
        let second = group.second_order();
        let block = match (quotient, group.family()) {
            (Quotient::None, _) => second,
            (Quotient::TypeI, Family::TypeI { n, .. }) => {
                if n % 4 != 0 {
                    return Err(Error::UnsupportedRing(format!(
                        "quotient by t^(n/2)+1 needs 4 | n, got n={n}"
                    )));
                }
                n / 2
            }
            (Quotient::TypeII, Family::TypeII { .. }) => second - 1,
            (q, _) => {
                return Err(Error::UnsupportedRing(format!("{q:?} quotient does not match {group}")))
            }
        };
        let dim = group.first_order() * block;
        let mut products = Vec::with_capacity(dim * dim);
        for u in 0..dim {
            let x = GroupElem::new(u / block, u % block);
            for v in 0..dim {
                let y = GroupElem::new(v / block, v % block);
                products.push(group.index(group.mul_unchecked(x, y)) as u32);
            }
        }
        Ok(RingSpec(Arc::new(RingInner { group, quotient, block, dim, products })))
    }

    /// The full group ring `Z[G]`.
    pub fn full(group: GroupSpec) -> Self {
        RingSpec::new(group, Quotient::None).expect("full ring always exists")
    }

    /// The family's quotient ring (`R^(1)` or `R^(2)`).
    pub fn quotient_of(group: GroupSpec) -> Result<Self> {
        let q = if group.is_type_i() { Quotient::TypeI } else { Quotient::TypeII };
        RingSpec::new(group, q)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.0.group
    }

    pub fn quotient(&self) -> Quotient {
        self.0.quotient
    }

    pub fn is_full(&self) -> bool {
        self.0.quotient == Quotient::None
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Length of each unit/`s`-indexed coefficient block.
    pub fn block(&self) -> usize {
        self.0.block
    }

    /// Reduced index of a group element whose second component is in range.
    pub fn basis_index(&self, x: GroupElem) -> Option<usize> {
        (x.i < self.0.group.first_order() && x.j < self.0.block).then(|| x.i * self.0.block + x.j)
    }

    pub fn basis_elem(&self, idx: usize) -> GroupElem {
        GroupElem::new(idx / self.0.block, idx % self.0.block)
    }

    /// The ring with the same group and no quotient.
    pub fn full_ring(&self) -> RingSpec {
        if self.is_full() {
            self.clone()
        } else {
            RingSpec::full(self.0.group.clone())
        }
    }

    /// Adds `value` times the full-group basis element `full_idx` into reduced coefficients.
    ///
    /// For Type II quotients the top monomial `a ⊙ g^(p^k-1)` is collected in `tops`
    /// and expanded by [`RingSpec::flush_tops`].
    fn accumulate<T: Scalar>(&self, out: &mut [T], tops: &mut [T], full_idx: usize, value: T) {
        let second = self.0.group.second_order();
        let (i, j) = (full_idx / second, full_idx % second);
        let block = self.0.block;
        match self.0.quotient {
            Quotient::None => {
                let slot = &mut out[full_idx];
                *slot = std::mem::replace(slot, T::zero()) + value;
            }
            Quotient::TypeI => {
                // t^(n/2) = -1
                let slot;
                if j >= block {
                    slot = &mut out[i * block + j - block];
                    *slot = std::mem::replace(slot, T::zero()) - value;
                } else {
                    slot = &mut out[i * block + j];
                    *slot = std::mem::replace(slot, T::zero()) + value;
                }
            }
            Quotient::TypeII => {
                if j == block {
                    let slot = &mut tops[i];
                    *slot = std::mem::replace(slot, T::zero()) + value;
                } else {
                    let slot = &mut out[i * block + j];
                    *slot = std::mem::replace(slot, T::zero()) + value;
                }
            }
        }
    }

    /// `g^(p^k - 1) = -(1 + g + ... + g^(p^k - 2))` in each unit block.
    fn flush_tops<T: Scalar>(&self, out: &mut [T], tops: Vec<T>) {
        if self.0.quotient != Quotient::TypeII {
            return;
        }
        let block = self.0.block;
        for (i, top) in tops.into_iter().enumerate() {
            if top.is_zero() {
                continue;
            }
            for slot in &mut out[i * block..(i + 1) * block] {
                *slot = std::mem::replace(slot, T::zero()) - top.clone();
            }
        }
    }

    /// Reduces a full-group coefficient vector into this ring.
    pub fn reduce_full<T: Scalar>(&self, full: &[T]) -> Result<Vec<T>> {
        let order = self.0.group.order();
        if full.len() != order {
            return Err(Error::DimensionMismatch { expected: order, got: full.len() });
        }
        let mut out = vec![T::zero(); self.dim()];
        let mut tops = vec![T::zero(); self.0.group.first_order()];
        for (idx, c) in full.iter().enumerate() {
            if !c.is_zero() {
                self.accumulate(&mut out, &mut tops, idx, c.clone());
            }
        }
        self.flush_tops(&mut out, tops);
        Ok(out)
    }

    /// The reduced-representative embedding back into the full group ring.
    pub fn lift<T: Scalar>(&self, x: &RingElem<T>) -> RingElem<T> {
        let full = self.full_ring();
        let second = self.0.group.second_order();
        let mut coeffs = vec![T::zero(); full.dim()];
        for (idx, c) in x.coeffs.iter().enumerate() {
            let e = self.basis_elem(idx);
            coeffs[e.i * second + e.j] = c.clone();
        }
        RingElem { ring: full, coeffs }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = if self.is_full() { "none" } else { "auto" };
        write!(f, "{} quotient={q}", self.0.group)
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields = parse_record(s)?;
        let group_text: Vec<String> = fields
            .iter()
            .filter(|(k, _)| matches!(*k, "family" | "m" | "n" | "p" | "k"))
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let group: GroupSpec = group_text.join(" ").parse()?;
        match record_value(&fields, "quotient").unwrap_or("none") {
            "none" => Ok(RingSpec::full(group)),
            "auto" => RingSpec::quotient_of(group),
            other => Err(Error::Parse(format!("unknown quotient {other:?}"))),
        }
    }
}

/// An element of a group ring or quotient ring, stored by coefficients.
#[derive(Clone, PartialEq)]
pub struct RingElem<T> {
    ring: RingSpec,
    coeffs: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for RingElem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem[{}]{:?}", self.ring, self.coeffs)
    }
}

impl<T: Scalar> RingElem<T> {
    pub fn from_coeffs(ring: &RingSpec, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != ring.dim() {
            return Err(Error::DimensionMismatch { expected: ring.dim(), got: coeffs.len() });
        }
        Ok(RingElem { ring: ring.clone(), coeffs })
    }

    pub fn zero(ring: &RingSpec) -> Self {
        RingElem { ring: ring.clone(), coeffs: vec![T::zero(); ring.dim()] }
    }

    pub fn one(ring: &RingSpec) -> Self {
        Self::monomial(ring, ring.group().identity(), T::one())
    }

    /// `coeff · g`, reduced into the ring.
    pub fn monomial(ring: &RingSpec, g: GroupElem, coeff: T) -> Self {
        let mut out = vec![T::zero(); ring.dim()];
        let mut tops = vec![T::zero(); ring.group().first_order()];
        ring.accumulate(&mut out, &mut tops, ring.group().index(g), coeff);
        ring.flush_tops(&mut out, tops);
        RingElem { ring: ring.clone(), coeffs: out }
    }

    /// The `idx`-th basis element of the ring.
    pub fn basis(ring: &RingSpec, idx: usize) -> Self {
        let mut coeffs = vec![T::zero(); ring.dim()];
        coeffs[idx] = T::one();
        RingElem { ring: ring.clone(), coeffs }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> RingElem<U> {
        RingElem { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(RingElem { ring: self.ring.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(RingElem { ring: self.ring.clone(), coeffs })
    }

    /// Group-law convolution followed by quotient reduction.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let ring = &self.ring;
        let dim = ring.dim();
        let mut out = vec![T::zero(); dim];
        let mut tops = vec![T::zero(); ring.group().first_order()];
        for (u, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let row = &ring.0.products[u * dim..(u + 1) * dim];
            for (v, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                ring.accumulate(&mut out, &mut tops, row[v] as usize, a.clone() * b.clone());
            }
        }
        ring.flush_tops(&mut out, tops);
        Ok(RingElem { ring: ring.clone(), coeffs: out })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// Matrix of left multiplication: column `g` is `coeffs(self · basis_g)`.
    pub fn matrix_rep(&self) -> Matrix<T> {
        self.multiplication_matrix(true)
    }

    /// Matrix of right multiplication: column `g` is `coeffs(basis_g · self)`.
    pub fn right_matrix_rep(&self) -> Matrix<T> {
        self.multiplication_matrix(false)
    }

    fn multiplication_matrix(&self, left: bool) -> Matrix<T> {
        let ring = &self.ring;
        let dim = ring.dim();
        let columns: Vec<Vec<T>> = (0..dim)
            .map(|g| {
                let mut out = vec![T::zero(); dim];
                let mut tops = vec![T::zero(); ring.group().first_order()];
                for (u, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let prod = if left { ring.0.products[u * dim + g] } else { ring.0.products[g * dim + u] };
                    ring.accumulate(&mut out, &mut tops, prod as usize, a.clone());
                }
                ring.flush_tops(&mut out, tops);
                out
            })
            .collect();
        Matrix::from_columns(&columns)
    }
}

impl RingElem<i64> {
    /// Coefficients reduced into `[0, q)`.
    pub fn reduce_mod(&self, q: i64) -> Self {
        self.map(|c| c.rem_euclid(q))
    }

    pub fn to_rational(&self) -> RingElem<BigRational> {
        self.map(|&c| BigRational::from_integer(BigInt::from(c)))
    }

    pub fn to_f64(&self) -> RingElem<f64> {
        self.map(|&c| c as f64)
    }
}

impl RingElem<BigRational> {
    pub fn to_f64(&self) -> RingElem<f64> {
        self.map(crate::matrix::rat_to_f64)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<T: Scalar> $trait for &RingElem<T> {
            type Output = RingElem<T>;
            /// Panics if the operands live in different rings.
            fn $method(self, rhs: &RingElem<T>) -> RingElem<T> {
                self.$try(rhs).expect("ring elements from different rings")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<T: Scalar> Neg for &RingElem<T> {
    type Output = RingElem<T>;
    fn neg(self) -> RingElem<T> {
        self.map(|c| -c.clone())
    }
}

/// Text encoding of coefficient scalars.
pub trait TextScalar: Scalar {
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self>;
}

impl TextScalar for i64 {
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str) -> Result<Self> {
        s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
    }
}

impl TextScalar for BigInt {
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str) -> Result<Self> {
        s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
    }
}

impl TextScalar for BigRational {
    fn to_text(&self) -> String {
        format_rat(self)
    }
    fn from_text(s: &str) -> Result<Self> {
        parse_rat(s)
    }
}

impl TextScalar for f64 {
    fn to_text(&self) -> String {
        // Display is the shortest representation that round-trips
        self.to_string()
    }
    fn from_text(s: &str) -> Result<Self> {
        s.trim().parse().map_err(|_| Error::Parse(format!("not a real: {s:?}")))
    }
}

pub(crate) fn join_coeffs<T: TextScalar>(coeffs: &[T]) -> String {
    coeffs.iter().map(TextScalar::to_text).collect::<Vec<_>>().join(",")
}

pub(crate) fn split_coeffs<T: TextScalar>(s: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(T::from_text).collect()
}

impl<T: TextScalar> RingElem<T> {
    /// Header line with the ring record, then `coeffs=c0,c1,...`.
    pub fn to_text(&self) -> String {
        format!("{}\ncoeffs={}\n", self.ring, join_coeffs(&self.coeffs))
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty ring element".into()))?;
        let ring: RingSpec = header.parse()?;
        let body = lines.next().ok_or_else(|| Error::Parse("missing coeffs line".into()))?;
        let list = body
            .trim()
            .strip_prefix("coeffs=")
            .ok_or_else(|| Error::Parse("expected coeffs=".into()))?;
        RingElem::from_coeffs(&ring, split_coeffs(list)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;
    use proptest::prelude::*;

    fn d8() -> RingSpec {
        RingSpec::full(GroupSpec::type_i(2, 4).unwrap())
    }

    fn elem(ring: &RingSpec, pairs: &[((usize, usize), i64)]) -> RingElem<i64> {
        pairs.iter().fold(RingElem::zero(ring), |acc, &((i, j), c)| {
            &acc + &RingElem::monomial(ring, GroupElem::new(i, j), c)
        })
    }

    #[test]
    fn addition_examples() {
        let r = d8();
        let x = elem(&r, &[((0, 0), 1), ((0, 1), 1)]);
        let y = elem(&r, &[((1, 0), 1), ((0, 1), 1)]);
        assert_eq!(&x + &y, elem(&r, &[((0, 0), 1), ((0, 1), 2), ((1, 0), 1)]));
        assert_eq!(&x + &RingElem::zero(&r), x);
        assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn dihedral_noncommutative() {
        let r = d8();
        let s = elem(&r, &[((1, 0), 1)]);
        let t = elem(&r, &[((0, 1), 1)]);
        assert_eq!(&s * &t, elem(&r, &[((1, 1), 1)]));
        assert_eq!(&t * &s, elem(&r, &[((1, 3), 1)]));
        assert_ne!(&s * &t, &t * &s);
        let x = elem(&r, &[((0, 2), 3), ((1, 1), -2)]);
        assert_eq!(&RingElem::one(&r) * &x, x);
        assert_eq!(&x * &RingElem::one(&r), x);
    }

    #[test]
    fn negacyclic_relation() {
        let r = RingSpec::quotient_of(GroupSpec::type_i(2, 4).unwrap()).unwrap();
        assert_eq!(r.dim(), 4);
        let t = RingElem::<i64>::monomial(&r, GroupElem::new(0, 1), 1);
        assert_eq!(&t * &t, RingElem::monomial(&r, GroupElem::new(0, 0), -1));
    }

    #[test]
    fn quotient_shapes() {
        assert!(RingSpec::quotient_of(GroupSpec::type_i(2, 6).unwrap()).is_err());
        let r2 = RingSpec::quotient_of(GroupSpec::type_ii(5, 1).unwrap()).unwrap();
        assert_eq!(r2.dim(), 4 * 4);
        assert!(RingSpec::new(GroupSpec::type_i(2, 4).unwrap(), Quotient::TypeII).is_err());
    }

    #[test]
    fn type_ii_top_monomial_expands() {
        let g = GroupSpec::type_ii(5, 1).unwrap();
        let r = RingSpec::quotient_of(g.clone()).unwrap();
        let top = RingElem::<i64>::monomial(&r, GroupElem::new(2, 4), 1);
        let expected: Vec<i64> = (0..r.dim()).map(|idx| if idx / 4 == 2 { -1 } else { 0 }).collect();
        assert_eq!(top.coeffs(), &expected[..]);
    }

    #[test]
    fn ring_mismatch_is_error() {
        let a = RingElem::<i64>::one(&d8());
        let b = RingElem::<i64>::one(&RingSpec::full(GroupSpec::type_i(2, 3).unwrap()));
        assert!(matches!(a.try_mul(&b), Err(Error::RingMismatch(_))));
        assert!(matches!(a.try_add(&b), Err(Error::RingMismatch(_))));
    }

    fn cayley_convolution(ring: &RingSpec, x: &[i64], y: &[i64]) -> Vec<i64> {
        let table = ring.group().cayley_table().unwrap();
        let mut out = vec![0; ring.dim()];
        for (a, &xa) in x.iter().enumerate() {
            for (b, &yb) in y.iter().enumerate() {
                out[table[a][b]] += xa * yb;
            }
        }
        out
    }

    fn small_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, len)
    }

    proptest! {
        #[test]
        fn matches_cayley_oracle_and_associates(x in small_vec(16), y in small_vec(16), z in small_vec(16)) {
            let ring = RingSpec::full(GroupSpec::type_i(4, 4).unwrap());
            let (a, b, c) = (
                RingElem::from_coeffs(&ring, x.clone()).unwrap(),
                RingElem::from_coeffs(&ring, y.clone()).unwrap(),
                RingElem::from_coeffs(&ring, z).unwrap(),
            );
            let ab = &a * &b;
            prop_assert_eq!(ab.coeffs(), &cayley_convolution(&ring, &x, &y)[..]);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn matrix_rep_is_homomorphism(x in small_vec(8), y in small_vec(8)) {
            for ring in [RingSpec::full(GroupSpec::type_i(2, 4).unwrap()),
                         RingSpec::quotient_of(GroupSpec::type_i(2, 16).unwrap()).unwrap()] {
                let d = ring.dim();
                let a = RingElem::from_coeffs(&ring, x.iter().cycle().take(d).copied().collect()).unwrap();
                let b = RingElem::from_coeffs(&ring, y.iter().cycle().take(d).copied().collect()).unwrap();
                prop_assert_eq!((&a * &b).matrix_rep(), a.matrix_rep().mul(&b.matrix_rep()));
                prop_assert_eq!((&a * &b).right_matrix_rep(), b.right_matrix_rep().mul(&a.right_matrix_rep()));
            }
        }
    }

    #[test]
    fn quotient_product_equals_full_product_then_reduce() {
        for (g, q) in [
            (GroupSpec::type_i(2, 8).unwrap(), Quotient::TypeI),
            (GroupSpec::type_i(4, 4).unwrap(), Quotient::TypeI),
            (GroupSpec::type_ii(5, 1).unwrap(), Quotient::TypeII),
            (GroupSpec::type_ii(3, 2).unwrap(), Quotient::TypeII),
        ] {
            let quot = RingSpec::new(g.clone(), q).unwrap();
            for u in 0..quot.dim() {
                for v in 0..quot.dim() {
                    let a = RingElem::<i64>::basis(&quot, u);
                    let b = RingElem::<i64>::basis(&quot, v);
                    let full = &quot.lift(&a) * &quot.lift(&b);
                    let reduced = quot.reduce_full(full.coeffs()).unwrap();
                    assert_eq!((&a * &b).coeffs(), &reduced[..]);
                }
            }
        }
    }

    #[test]
    fn modulus_reduces_to_zero() {
        let g = GroupSpec::type_ii(3, 2).unwrap();
        let quot = RingSpec::quotient_of(g.clone()).unwrap();
        let full = RingSpec::full(g.clone());
        // a ⊙ (1 + g + ... + g^8) for the unit at index 3
        let phi: RingElem<i64> = (0..9).fold(RingElem::zero(&full), |acc, j| {
            &acc + &RingElem::monomial(&full, GroupElem::new(3, j), 1)
        });
        assert!(quot.reduce_full(phi.coeffs()).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn matrix_rep_basics() {
        let r = d8();
        assert_eq!(RingElem::<i64>::one(&r).matrix_rep(), Matrix::identity(8));
        let t = RingElem::<i64>::monomial(&r, GroupElem::new(0, 1), 1);
        let m = t.matrix_rep();
        let m4 = m.mul(&m).mul(&m).mul(&m);
        assert_eq!(m4, Matrix::identity(8));
        assert_ne!(m, Matrix::identity(8));
    }

    #[test]
    fn text_round_trip() {
        let r = RingSpec::quotient_of(GroupSpec::type_i(2, 8).unwrap()).unwrap();
        let x = RingElem::from_coeffs(&r, vec![rat(1), rat(-2), rat(0), rat(3), rat(5), rat(0), rat(1), rat(7)])
            .unwrap()
            .scale(&BigRational::new(1.into(), 3.into()));
        let text = x.to_text();
        assert!(text.starts_with("family=I m=2 n=8 quotient=auto\ncoeffs=1/3,-2/3,0,1,5/3,0,1/3,7/3"));
        assert_eq!(RingElem::<BigRational>::from_text(&text).unwrap(), x);
        let y = RingElem::from_coeffs(&d8(), vec![0.1, -2.5, 0.0, 1e-17, 3.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(RingElem::<f64>::from_text(&y.to_text()).unwrap(), y);
    }
}
