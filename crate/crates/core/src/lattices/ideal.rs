//! Ideal lattices under the coefficient embedding.

use std::sync::Arc;

use num_rational::BigRational;

use super::{LatticeBasis, Provenance};
use crate::error::{Error, Result};
use crate::groupring::{RingElem, RingSpec};
use crate::groups::{Family, GroupElem};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `R h`, spanned by `g · h`.
    Left,
    /// `h R`, spanned by `h · g`.
    Right,
}

fn check_ring(ring: &RingSpec, x: &RingElem<i64>) -> Result<()> {
    if x.ring() == ring {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("{} vs {}", x.ring(), ring)))
    }
}

/// The one-sided ideal generated by `generators`.
pub fn ideal_lattice(ring: &RingSpec, generators: &[RingElem<i64>], side: Side) -> Result<LatticeBasis> {
    if generators.is_empty() {
        return Err(Error::NotFullRank);
    }
    let mut cols = Vec::with_capacity(generators.len() * ring.dim());
    for h in generators {
        check_ring(ring, h)?;
        let m = match side {
            Side::Right => h.matrix_rep(),
            Side::Left => h.right_matrix_rep(),
        };
        cols.extend(m.to_rational().columns());
    }
    let lattice = LatticeBasis::generated_with_provenance(
        &Matrix::from_columns(&cols),
        Provenance::Ideal { ring: ring.clone(), generators: generators.to_vec(), side },
    )?;
    debug_assert!(generators.iter().all(|h| lattice.contains(&h.to_rational().into_coeffs())));
    Ok(lattice)
}

fn ideal_parts(ideal: &LatticeBasis) -> Result<(&RingSpec, &[RingElem<i64>], Side)> {
    match ideal.provenance() {
        Provenance::Ideal { ring, generators, side } => Ok((ring, generators, *side)),
        _ => Err(Error::Parameter("lattice was not built from ideal generators".into())),
    }
}

/// `{x : x · h_j ∈ Z[G] for every generator h_j}` of a right ideal.
pub fn inverse_ideal(ideal: &LatticeBasis) -> Result<LatticeBasis> {
    let (_, generators, side) = ideal_parts(ideal)?;
    if side != Side::Right {
        return Err(Error::Parameter("inverse is defined here for right ideals".into()));
    }
    let mut acc: Option<LatticeBasis> = None;
    for h in generators {
        let inv = h
            .right_matrix_rep()
            .to_rational()
            .inverse()
            .map_err(|_| Error::NotInvertible("generator has a singular multiplication matrix".into()))?;
        let part = LatticeBasis::new(inv)?;
        acc = Some(match acc {
            None => part,
            Some(prev) => prev.intersection(&part)?,
        });
    }
    let result = acc.expect("at least one generator");
    LatticeBasis::with_provenance(result.basis().clone(), Provenance::InverseOf(Arc::new(ideal.clone())))
}

/// The lattice spanned by all products `x · y` of basis vectors.
pub fn ideal_product_span(ring: &RingSpec, left: &LatticeBasis, right: &LatticeBasis) -> Result<LatticeBasis> {
    let xs: Vec<RingElem<BigRational>> =
        left.basis().columns().into_iter().map(|c| RingElem::from_coeffs(ring, c)).collect::<Result<_>>()?;
    let ys: Vec<RingElem<BigRational>> =
        right.basis().columns().into_iter().map(|c| RingElem::from_coeffs(ring, c)).collect::<Result<_>>()?;
    let mut cols = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            cols.push((x * y).into_coeffs());
        }
    }
    LatticeBasis::from_generators(&Matrix::from_columns(&cols))
}

/// Coordinate permutation `z_g = x_{g^{-1}}`: output index `k` reads input `perm[k]`.
///
/// Type I: block `i` reads block `m - i`, reversing positions `1..n` when `i` is even.
/// Type II: `z_{i,j} = x_{m-i, -j a_i}`.
pub fn inverse_permutation(ring: &RingSpec) -> Result<Vec<usize>> {
    if !ring.is_full() {
        return Err(Error::UnsupportedRing(format!("coordinate permutation needs a full group ring, got {ring}")));
    }
    let group = ring.group();
    let m = group.first_order();
    let n = group.second_order();
    let mut perm = vec![0; ring.dim()];
    for i in 0..m {
        let src_block = (m - i) % m;
        for j in 0..n {
            let src_j = match group.family() {
                Family::TypeI { .. } if i % 2 == 0 => (n - j) % n,
                Family::TypeI { .. } => j,
                Family::TypeII { .. } => (n - (j * group.units()[i]) % n) % n,
            };
            perm[i * n + j] = src_block * n + src_j;
        }
    }
    debug_assert!(perm.iter().enumerate().all(|(k, &src)| {
        group.index(group.inv_unchecked(GroupElem::new(k / n, k % n))) == src
    }));
    Ok(perm)
}

#[derive(Debug, Clone)]
pub struct DualCheck {
    pub holds: bool,
    pub permutation: Vec<usize>,
    pub dual: LatticeBasis,
    pub permuted_inverse: LatticeBasis,
}

/// Compares the dual of a right ideal with its coordinate-permuted inverse.
///
/// Fails with [`Error::NotInvertible`] unless `I^{-1} · I` spans the whole ring.
pub fn check_dual_equals_permuted_inverse(ideal: &LatticeBasis) -> Result<DualCheck> {
    let (ring, _, _) = ideal_parts(ideal)?;
    let ring = ring.clone();
    let perm = inverse_permutation(&ring)?;
    let inv = inverse_ideal(ideal)?;
    let span = ideal_product_span(&ring, &inv, ideal)?;
    if !span.same_lattice(&LatticeBasis::integer(ring.dim())) {
        return Err(Error::NotInvertible("I^{-1} I does not span the ring".into()));
    }
    let permuted_inverse = inv.permute_coordinates(&perm)?;
    let dual = ideal.dual();
    Ok(DualCheck { holds: dual.same_lattice(&permuted_inverse), permutation: perm, dual, permuted_inverse })
}
