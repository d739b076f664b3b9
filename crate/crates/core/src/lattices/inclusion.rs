//! The map `L'/qL' → L/qL` induced by a sublattice inclusion `L' ⊆ L`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::LatticeBasis;
use crate::error::{Error, Result};
use crate::matrix::{inverse_mod, Matrix};

#[derive(Debug, Clone)]
pub struct InclusionMap {
    pub sub: LatticeBasis,
    pub sup: LatticeBasis,
    /// Integer matrix with `B_sub = B_sup · T`.
    pub t: Matrix<BigInt>,
    pub q: BigInt,
    t_inv_mod_q: Option<Matrix<BigInt>>,
}

impl InclusionMap {
    pub fn new(sub: &LatticeBasis, sup: &LatticeBasis, q: &BigInt) -> Result<Self> {
        if sub.dim() != sup.dim() {
            return Err(Error::DimensionMismatch { expected: sup.dim(), got: sub.dim() });
        }
        if !q.is_positive() {
            return Err(Error::Parameter(format!("modulus must be positive, got {q}")));
        }
        let t_rat = sup.basis().inverse()?.mul(sub.basis());
        if t_rat.data().iter().any(|x| !x.is_integer()) {
            return Err(Error::NotContained);
        }
        let t = t_rat.map(|x| x.to_integer());
        let t_inv_mod_q = inverse_mod(&t, q).ok();
        Ok(InclusionMap { sub: sub.clone(), sup: sup.clone(), t, q: q.clone(), t_inv_mod_q })
    }

    /// `|det T| = [L : L']`.
    pub fn index(&self) -> BigInt {
        self.t.determinant().abs()
    }

    pub fn is_bijective(&self) -> bool {
        self.t_inv_mod_q.is_some()
    }

    /// Coordinates in `L'` to coordinates in `L`, modulo `q`.
    pub fn forward(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.t.mul_vec(coords).into_iter().map(|x| x.mod_floor(&self.q)).collect()
    }

    /// Coordinates in `L` to coordinates in `L'`, modulo `q`.
    pub fn inverse(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        let inv = self.t_inv_mod_q.as_ref().ok_or_else(|| {
            Error::NotInvertible(format!("gcd({}, index {}) is not 1", self.q, self.index()))
        })?;
        Ok(inv.mul_vec(coords).into_iter().map(|x| x.mod_floor(&self.q)).collect())
    }
}
