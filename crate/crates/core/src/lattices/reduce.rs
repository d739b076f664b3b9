//! LLL reduction, nearest-plane decoding and short-vector enumeration.
//!
//! The basis is kept exactly (integer columns over a common denominator);
//! Gram–Schmidt data is floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::LatticeBasis;
use crate::error::{Error, Result};
use crate::matrix::{rat_to_f64, Matrix};

/// Largest dimension accepted by the exact shortest-vector oracle.
pub const ENUM_CAP: usize = 10;

/// An LLL-reduced basis `B · U` of a lattice with basis `B`.
#[derive(Debug, Clone)]
pub struct LllReduced {
    denom: BigInt,
    /// Reduced columns scaled by `denom`.
    cols: Vec<Vec<BigInt>>,
    /// Unimodular transform, column `k` holds the coordinates of reduced vector `k`.
    transform: Vec<Vec<BigInt>>,
    /// Gram–Schmidt vectors of the reduced basis.
    bstar: Vec<Vec<f64>>,
    bstar_sq: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_f64(v: &[BigInt], denom: f64) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN) / denom).collect()
}

fn gram_schmidt(cols: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>) {
    let n = cols.len();
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut sq = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = cols[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&cols[i], &bstar[j]) / sq[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= mu[i][j] * y;
            }
        }
        mu[i][i] = 1.0;
        sq.push(dot(&v, &v));
        bstar.push(v);
    }
    (bstar, sq, mu)
}

/// LLL with Lovász parameter `delta`.
pub fn lll(lattice: &LatticeBasis, delta: f64) -> LllReduced {
    let basis = lattice.basis();
    let n = lattice.dim();
    let denom = basis.common_denominator();
    let scaled = basis.scale_to_integer(&denom);
    let mut cols = scaled.columns();
    let mut transform: Vec<Vec<BigInt>> = Matrix::<BigInt>::identity(n).columns();
    let df = denom.to_f64().unwrap_or(f64::INFINITY);
    let float_cols = |cols: &[Vec<BigInt>]| cols.iter().map(|c| to_f64(c, df)).collect::<Vec<_>>();
    let (_, mut sq, mut mu) = gram_schmidt(&float_cols(&cols));
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        assert!(guard < 1_000_000, "LLL failed to terminate");
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                let rb = BigInt::from(r as i64);
                let (head, tail) = cols.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= &rb * y;
                }
                let (head, tail) = transform.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= &rb * y;
                }
                for i in 0..=j {
                    mu[k][i] -= r * mu[j][i];
                }
            }
        }
        if sq[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * sq[k - 1] {
            k += 1;
        } else {
            cols.swap(k, k - 1);
            transform.swap(k, k - 1);
            (_, sq, mu) = gram_schmidt(&float_cols(&cols));
            k = (k - 1).max(1);
        }
    }
    let (bstar, sq, mu) = gram_schmidt(&float_cols(&cols));
    LllReduced { denom, cols, transform, bstar, bstar_sq: sq, mu }
}

impl LllReduced {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Reduced basis columns.
    pub fn basis(&self) -> Matrix<BigRational> {
        let d = BigRational::from_integer(self.denom.clone());
        Matrix::from_columns(&self.cols).map(|x| BigRational::from_integer(x.clone()) / &d)
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        let df = self.denom.to_f64().unwrap_or(f64::INFINITY);
        self.cols.iter().map(|c| to_f64(c, df)).collect()
    }

    /// `U` with reduced basis `= B · U`.
    pub fn transform(&self) -> Matrix<BigInt> {
        Matrix::from_columns(&self.transform)
    }

    pub fn gram_schmidt_norms(&self) -> Vec<f64> {
        self.bstar_sq.iter().map(|x| x.sqrt()).collect()
    }

    /// Largest basis-vector norm, an upper bound on `λ_n`.
    pub fn max_basis_norm(&self) -> f64 {
        self.basis_f64().iter().map(|c| dot(c, c).sqrt()).fold(0.0, f64::max)
    }

    /// Nearest-plane decoding; returns coordinates in the reduced basis.
    pub fn nearest_plane_coords(&self, target: &[f64]) -> Vec<i64> {
        let n = self.dim();
        let basis = self.basis_f64();
        let mut t = target.to_vec();
        let mut coords = vec![0i64; n];
        for i in (0..n).rev() {
            let c = (dot(&t, &self.bstar[i]) / self.bstar_sq[i]).round();
            coords[i] = c as i64;
            for (x, y) in t.iter_mut().zip(&basis[i]) {
                *x -= c * y;
            }
        }
        coords
    }

    /// Lattice vector with the given reduced coordinates, exactly.
    pub fn vector(&self, coords: &[i64]) -> Vec<BigRational> {
        let n = self.dim();
        let d = BigRational::from_integer(self.denom.clone());
        (0..n)
            .map(|r| {
                let s: BigInt = self.cols.iter().zip(coords).map(|(c, &x)| &c[r] * x).sum();
                BigRational::from_integer(s) / &d
            })
            .collect()
    }

    /// Coordinates in the original basis of the vector with reduced coordinates `coords`.
    pub fn original_coords(&self, coords: &[i64]) -> Vec<BigInt> {
        let n = self.dim();
        (0..n).map(|r| self.transform.iter().zip(coords).map(|(c, &x)| &c[r] * x).sum()).collect()
    }

    /// Reduced coordinates of all nonzero vectors of squared norm at most `radius_sq`
    /// (both signs), or an error once more than `limit` are found.
    pub fn enumerate(&self, radius_sq: f64, limit: usize) -> Result<Vec<Vec<i64>>> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        self.enum_level(n, radius_sq, 0.0, &mut x, &mut out, limit)?;
        Ok(out)
    }

    fn enum_level(
        &self,
        level: usize,
        radius_sq: f64,
        partial: f64,
        x: &mut [i64],
        out: &mut Vec<Vec<i64>>,
        limit: usize,
    ) -> Result<()> {
        if level == 0 {
            if x.iter().any(|&c| c != 0) {
                if out.len() >= limit {
                    return Err(Error::Parameter(format!("more than {limit} vectors within the radius")));
                }
                out.push(x.to_vec());
            }
            return Ok(());
        }
        let i = level - 1;
        let n = self.dim();
        let center: f64 = -(i + 1..n).map(|j| x[j] as f64 * self.mu[j][i]).sum::<f64>();
        let slack = (radius_sq - partial).max(0.0);
        let half_width = (slack / self.bstar_sq[i]).sqrt() * (1.0 + 1e-12);
        let lo = (center - half_width).ceil() as i64;
        let hi = (center + half_width).floor() as i64;
        for c in lo..=hi {
            let d = c as f64 - center;
            let next = partial + d * d * self.bstar_sq[i];
            if next > radius_sq * (1.0 + 1e-12) {
                continue;
            }
            x[i] = c;
            self.enum_level(level - 1, radius_sq, next, x, out, limit)?;
        }
        x[i] = 0;
        Ok(())
    }
}

fn norm_sq_exact(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |acc, x| acc + x * x)
}

/// Nearest-plane decoding of `target` on an LLL-reduced basis (`δ = 0.99`).
pub fn babai_nearest(lattice: &LatticeBasis, target: &[BigRational]) -> Vec<BigRational> {
    let red = lll(lattice, 0.99);
    let t: Vec<f64> = target.iter().map(rat_to_f64).collect();
    red.vector(&red.nearest_plane_coords(&t))
}

/// Shortest nonzero vector by exhaustive enumeration, with its exact squared norm.
pub fn lambda1_enum(lattice: &LatticeBasis, cap: usize) -> Result<(Vec<BigRational>, BigRational)> {
    let n = lattice.dim();
    let cap = cap.min(ENUM_CAP);
    if n > cap {
        return Err(Error::DimensionCap { dim: n, cap });
    }
    let red = lll(lattice, 0.99);
    let first = red.vector(&(0..n).map(|k| i64::from(k == 0)).collect::<Vec<_>>());
    let bound = rat_to_f64(&norm_sq_exact(&first)) * (1.0 + 1e-9);
    let candidates = red.enumerate(bound, 1 << 22)?;
    let mut best = (first.clone(), norm_sq_exact(&first));
    for c in candidates {
        let v = red.vector(&c);
        let nsq = norm_sq_exact(&v);
        if nsq < best.1 {
            best = (v, nsq);
        }
    }
    Ok(best)
}

/// Squared norms of all nonzero lattice vectors with norm at most `radius`.
pub fn enumerate_short(lattice: &LatticeBasis, radius: f64, limit: usize) -> Result<Vec<f64>> {
    let red = lll(lattice, 0.99);
    let basis = red.basis_f64();
    let n = red.dim();
    let coords = red.enumerate(radius * radius, limit)?;
    Ok(coords
        .iter()
        .map(|c| {
            (0..n)
                .map(|r| basis.iter().zip(c).map(|(col, &x)| col[r] * x as f64).sum::<f64>())
                .map(|x| x * x)
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{f64_to_rat, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_lattice(rng: &mut ChaCha8Rng, n: usize) -> LatticeBasis {
        loop {
            let m = Matrix::from_fn(n, n, |_, _| rng.random_range(-9i64..=9));
            if let Ok(l) = LatticeBasis::from_integer_columns(&m) {
                return l;
            }
        }
    }

    #[test]
    fn babai_on_z2() {
        let z2 = LatticeBasis::integer(2);
        let t = |a: f64, b: f64| vec![f64_to_rat(a), f64_to_rat(b)];
        assert_eq!(babai_nearest(&z2, &t(0.3, -0.4)), vec![rat(0), rat(0)]);
        assert_eq!(babai_nearest(&z2, &t(0.9, 2.1)), vec![rat(1), rat(2)]);
    }

    #[test]
    fn lll_preserves_lattice_and_is_reduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let l = random_lattice(&mut rng, 5);
            let red = lll(&l, 0.99);
            assert!(LatticeBasis::new(red.basis()).unwrap().same_lattice(&l));
            assert_eq!(l.basis().mul(&red.transform().to_rational()), red.basis());
            for k in 1..5 {
                assert!(red.bstar_sq[k] >= (0.99 - red.mu[k][k - 1].powi(2)) * red.bstar_sq[k - 1] - 1e-9);
            }
        }
    }

    #[test]
    fn lambda1_examples() {
        assert_eq!(lambda1_enum(&LatticeBasis::integer(4), 10).unwrap().1, rat(1));
        assert_eq!(lambda1_enum(&LatticeBasis::scaled_integer(3, rat(2)).unwrap(), 10).unwrap().1, rat(4));
        assert!(matches!(lambda1_enum(&LatticeBasis::integer(11), 10), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn lambda1_not_longer_than_lll_vector_and_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let l = random_lattice(&mut rng, 3);
            let (v, nsq) = lambda1_enum(&l, 10).unwrap();
            assert!(l.contains(&v));
            let red = lll(&l, 0.99);
            let first = red.basis().column(0);
            assert!(nsq <= norm_sq_exact(&first));
            // brute force over small coefficient boxes of the reduced basis
            for a in -4i64..=4 {
                for b in -4i64..=4 {
                    for c in -4i64..=4 {
                        if (a, b, c) != (0, 0, 0) {
                            assert!(norm_sq_exact(&red.vector(&[a, b, c])) >= nsq);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn babai_recovers_within_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut trials = 0;
        while trials < 100 {
            let l = random_lattice(&mut rng, 4);
            let lambda1 = rat_to_f64(&lambda1_enum(&l, 10).unwrap().1).sqrt();
            let coeffs: Vec<i64> = (0..4).map(|_| rng.random_range(-5i64..=5)).collect();
            let v = l.basis().mul_vec(&coeffs.iter().map(|&c| rat(c)).collect::<Vec<_>>());
            let dir: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let scale = 0.25 * lambda1 * 0.999 * rng.random_range(0.0..1.0) / norm;
            let target: Vec<BigRational> = v.iter().zip(&dir).map(|(x, d)| x + f64_to_rat(d * scale)).collect();
            assert_eq!(babai_nearest(&l, &target), v);
            trials += 1;
        }
    }

    #[test]
    fn enumeration_counts_z2_shells() {
        // Z^2 vectors with norm ≤ √2: (±1,0),(0,±1),(±1,±1)
        assert_eq!(enumerate_short(&LatticeBasis::integer(2), 2f64.sqrt(), 100).unwrap().len(), 8);
        assert!(enumerate_short(&LatticeBasis::integer(2), 10.0, 5).is_err());
    }
}
