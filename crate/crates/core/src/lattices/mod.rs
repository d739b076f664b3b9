//! Full-rank lattices in `Q^n` with exact arithmetic.
//!
//! Bases are stored column-wise: the lattice is `B · Z^n`. The canonical
//! form is the column Hermite normal form of `D · B` divided by `D`, which is
//! independent of the common denominator `D`.

mod ideal;
mod inclusion;
mod reduce;

pub use ideal::{
    check_dual_equals_permuted_inverse, ideal_lattice, ideal_product_span, inverse_ideal,
    inverse_permutation, DualCheck, Side,
};
pub use inclusion::InclusionMap;
pub use reduce::{babai_nearest, enumerate_short, lambda1_enum, lll, LllReduced, ENUM_CAP};

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groupring::{RingElem, RingSpec};
use crate::matrix::{format_rat, parse_rat, rat_to_f64, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Generic,
    Ideal { ring: RingSpec, generators: Vec<RingElem<i64>>, side: Side },
    DualOf(Arc<LatticeBasis>),
    InverseOf(Arc<LatticeBasis>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    basis: Matrix<BigRational>,
    hnf: Matrix<BigRational>,
    provenance: Provenance,
}

/// Column Hermite normal form of an integer generating matrix.
///
/// The result is square, upper triangular, with positive diagonal and every
/// entry right of a pivot reduced into `[0, pivot)`.
pub fn hnf(generators: &Matrix<BigInt>) -> Result<Matrix<BigInt>> {
    let d = generators.rows();
    let mut h: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); d]; d]; // columns
    let mut has_pivot = vec![false; d];
    for col in generators.columns() {
        insert_column(&mut h, &mut has_pivot, col);
    }
    if has_pivot.iter().any(|p| !p) {
        return Err(Error::NotFullRank);
    }
    normalize(&mut h);
    Ok(Matrix::from_columns(&h))
}

/// Folds `v` into the triangular column set `h`, one row at a time from the bottom.
fn insert_column(h: &mut [Vec<BigInt>], has_pivot: &mut [bool], mut v: Vec<BigInt>) {
    let d = h.len();
    for r in (0..d).rev() {
        if v[r].is_zero() {
            continue;
        }
        if !has_pivot[r] {
            h[r] = v;
            has_pivot[r] = true;
            normalize_column(h, has_pivot, r);
            return;
        }
        let egcd = h[r][r].extended_gcd(&v[r]);
        let g = egcd.gcd;
        let (hv, vv) = (&h[r][r] / &g, &v[r] / &g);
        // unimodular [[x, y], [-vv, hv]] on (h_r, v)
        let new_pivot: Vec<BigInt> = (0..d).map(|k| &egcd.x * &h[r][k] + &egcd.y * &v[k]).collect();
        let new_v: Vec<BigInt> = (0..d).map(|k| &hv * &v[k] - &vv * &h[r][k]).collect();
        h[r] = new_pivot;
        v = new_v;
        debug_assert!(v[r].is_zero());
        normalize_column(h, has_pivot, r);
        // keep the remainder small before descending
        reduce_against(h, has_pivot, &mut v, r);
    }
}

/// Makes the pivot of column `r` positive and reduces later columns against it.
fn normalize_column(h: &mut [Vec<BigInt>], has_pivot: &[bool], r: usize) {
    if h[r][r].is_negative() {
        h[r].iter_mut().for_each(|x| *x = -x.clone());
    }
    for j in r + 1..h.len() {
        if has_pivot[j] {
            let (left, right) = h.split_at_mut(j);
            reduce_entry(&left[r], &mut right[0], r);
        }
    }
}

/// `v -= floor(v[r] / p) * col` for pivot `p = col[r]`.
fn reduce_entry(col: &[BigInt], v: &mut [BigInt], r: usize) {
    let q = v[r].div_floor(&col[r]);
    if !q.is_zero() {
        for (x, c) in v.iter_mut().zip(col) {
            *x -= &q * c;
        }
    }
}

fn reduce_against(h: &[Vec<BigInt>], has_pivot: &[bool], v: &mut [BigInt], below: usize) {
    for r in (0..below).rev() {
        if has_pivot[r] && !v[r].is_zero() {
            reduce_entry(&h[r], v, r);
        }
    }
}

fn normalize(h: &mut [Vec<BigInt>]) {
    let d = h.len();
    for j in 0..d {
        if h[j][j].is_negative() {
            h[j].iter_mut().for_each(|x| *x = -x.clone());
        }
    }
    for j in 0..d {
        for i in (0..j).rev() {
            let (left, right) = h.split_at_mut(j);
            reduce_entry(&left[i], &mut right[0], i);
        }
    }
}

/// Canonical rational HNF of the lattice generated by the columns of `gens`.
pub fn rational_hnf(gens: &Matrix<BigRational>) -> Result<Matrix<BigRational>> {
    let denom = gens.common_denominator();
    let h = hnf(&gens.scale_to_integer(&denom))?;
    let d = BigRational::from_integer(denom);
    Ok(h.map(|x| BigRational::from_integer(x.clone()) / &d))
}

impl LatticeBasis {
    /// Lattice spanned by the columns of a nonsingular square matrix.
    pub fn new(basis: Matrix<BigRational>) -> Result<Self> {
        Self::with_provenance(basis, Provenance::Generic)
    }

    pub fn from_integer_columns(basis: &Matrix<i64>) -> Result<Self> {
        Self::new(basis.to_rational())
    }

    pub(crate) fn with_provenance(basis: Matrix<BigRational>, provenance: Provenance) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch { expected: basis.rows(), got: basis.cols() });
        }
        let hnf = rational_hnf(&basis)?;
        Ok(LatticeBasis { basis, hnf, provenance })
    }

    /// Lattice generated by any number of columns (must have full rank); the basis is the HNF.
    pub fn from_generators(gens: &Matrix<BigRational>) -> Result<Self> {
        Self::generated_with_provenance(gens, Provenance::Generic)
    }

    pub(crate) fn generated_with_provenance(gens: &Matrix<BigRational>, provenance: Provenance) -> Result<Self> {
        let hnf = rational_hnf(gens)?;
        Ok(LatticeBasis { basis: hnf.clone(), hnf, provenance })
    }

    /// `Z^n`.
    pub fn integer(dim: usize) -> Self {
        Self::new(Matrix::identity(dim)).expect("identity is nonsingular")
    }

    /// `c · Z^n`.
    pub fn scaled_integer(dim: usize, c: BigRational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::NotFullRank);
        }
        Self::new(Matrix::<BigRational>::identity(dim).map(|x| x * &c))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<BigRational> {
        &self.basis
    }

    pub fn hnf(&self) -> &Matrix<BigRational> {
        &self.hnf
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Same lattice with the canonical basis.
    pub fn canonical(&self) -> LatticeBasis {
        LatticeBasis { basis: self.hnf.clone(), hnf: self.hnf.clone(), provenance: self.provenance.clone() }
    }

    /// Lattice equality.
    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        self.hnf == other.hnf
    }

    /// `|det B|`, the covolume.
    pub fn determinant(&self) -> BigRational {
        // HNF is triangular with positive diagonal
        (0..self.dim()).fold(BigRational::one(), |acc, i| acc * &self.hnf[(i, i)])
    }

    /// Basis `B^{-T}` of the dual lattice.
    pub fn dual(&self) -> LatticeBasis {
        let inv = self.basis.inverse().expect("basis is nonsingular");
        LatticeBasis::with_provenance(inv.transpose(), Provenance::DualOf(Arc::new(self.clone())))
            .expect("dual basis is nonsingular")
    }

    /// Integer coordinates of `v`, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigRational]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        // back-substitution on the upper-triangular HNF
        let h = &self.hnf;
        let n = self.dim();
        let mut rest = v.to_vec();
        let mut coords = vec![BigInt::zero(); n];
        for i in (0..n).rev() {
            let c = &rest[i] / &h[(i, i)];
            if !c.is_integer() {
                return Ok(None);
            }
            for (r, slot) in rest.iter_mut().enumerate().take(i + 1) {
                *slot -= &c * &h[(r, i)];
            }
            coords[i] = c.to_integer();
        }
        if self.basis == self.hnf {
            return Ok(Some(coords));
        }
        // express in the stored basis: B x = H c
        let x = self.basis.inverse()?.mul_vec(&h.mul_vec(&coords.iter().cloned().map(BigRational::from_integer).collect::<Vec<_>>()));
        Ok(Some(x.into_iter().map(|c| c.to_integer()).collect()))
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        matches!(self.coordinates(v), Ok(Some(_)))
    }

    pub fn contains_lattice(&self, sub: &LatticeBasis) -> bool {
        sub.basis.columns().iter().all(|c| self.contains(c))
    }

    /// `L_1 + L_2`.
    pub fn sum(&self, other: &LatticeBasis) -> Result<LatticeBasis> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let mut cols = self.basis.columns();
        cols.extend(other.basis.columns());
        LatticeBasis::from_generators(&Matrix::from_columns(&cols))
    }

    /// `L_1 ∩ L_2 = (L_1^∨ + L_2^∨)^∨`.
    pub fn intersection(&self, other: &LatticeBasis) -> Result<LatticeBasis> {
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// Permutes coordinates: output coordinate `k` is input coordinate `perm[k]`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<LatticeBasis> {
        LatticeBasis::new(self.basis.permute_rows(perm))
    }

    pub fn basis_f64(&self) -> Matrix<f64> {
        self.basis.map(rat_to_f64)
    }

    /// `dim=<d>` and `d` rows of the HNF.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim={}\n", self.dim());
        for r in 0..self.dim() {
            let row: Vec<String> = self.hnf.row(r).iter().map(format_rat).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty lattice".into()))?;
        let dim: usize = header
            .trim()
            .strip_prefix("dim=")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected dim=<d>, got {header:?}")))?;
        let rows: Vec<Vec<BigRational>> = lines
            .take(dim)
            .map(|l| l.split_whitespace().map(parse_rat).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Parse(format!("expected {dim} rows of {dim} entries")));
        }
        LatticeBasis::new(Matrix::from_rows(rows))
    }
}
