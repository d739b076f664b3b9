//! Real lattice bases in floating point: LLL with an exact integer transform,
//! Gram–Schmidt data and Fincke–Pohst enumeration.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone)]
pub struct RealBasis {
    cols: Vec<Vec<f64>>,
    /// Column `k` holds the coordinates of reduced vector `k` in the input basis.
    transform: Vec<Vec<i64>>,
    bstar: Vec<Vec<f64>>,
    bstar_sq: Vec<f64>,
    mu: Vec<Vec<f64>>,
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

impl RealBasis {
    /// LLL-reduces the lattice spanned by `cols` (square, nonsingular).
    pub fn reduce(cols: Vec<Vec<f64>>, delta: f64) -> Result<Self> {
        let n = cols.len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: cols.iter().map(Vec::len).max().unwrap_or(0) });
        }
        if cols.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("basis has non-finite entries".into()));
        }
        let mut cols = cols;
        let mut transform: Vec<Vec<i64>> = (0..n).map(|k| (0..n).map(|r| i64::from(r == k)).collect()).collect();
        let (_, mut sq, mut mu) = gram_schmidt(&cols);
        let scale = sq.iter().cloned().fold(0.0, f64::max);
        if sq.iter().any(|&s| s <= scale * 1e-28 || s == 0.0) {
            return Err(Error::Singular);
        }
        let mut k = 1;
        let mut guard = 0usize;
        while k < n {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::NoConvergence("floating-point LLL".into()));
            }
            for j in (0..k).rev() {
                let r = mu[k][j].round();
                if r != 0.0 {
                    let (head, tail) = cols.split_at_mut(k);
                    for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                        *x -= r * y;
                    }
                    let ri = r as i64;
                    let (head, tail) = transform.split_at_mut(k);
                    for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                        *x -= ri * y;
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
                (_, sq, mu) = gram_schmidt(&cols);
                k = (k - 1).max(1);
            }
        }
        let (bstar, bstar_sq, mu) = gram_schmidt(&cols);
        Ok(RealBasis { cols, transform, bstar, bstar_sq, mu })
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.cols
    }

    pub fn gram_schmidt_norms(&self) -> Vec<f64> {
        self.bstar_sq.iter().map(|x| x.sqrt()).collect()
    }

    pub fn max_gram_schmidt_norm(&self) -> f64 {
        self.gram_schmidt_norms().into_iter().fold(0.0, f64::max)
    }

    pub fn max_basis_norm(&self) -> f64 {
        self.cols.iter().map(|c| dot(c, c).sqrt()).fold(0.0, f64::max)
    }

    /// Coordinates in the input basis of the vector with reduced coordinates `z`.
    pub fn original_coords(&self, z: &[i64]) -> Vec<i64> {
        let n = self.dim();
        (0..n).map(|r| self.transform.iter().zip(z).map(|(c, &x)| c[r] * x).sum()).collect()
    }

    pub fn vector(&self, z: &[i64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|r| self.cols.iter().zip(z).map(|(c, &x)| c[r] * x as f64).sum()).collect()
    }

    /// Component of `t` along `b̃_i`, in units of `b̃_i`.
    pub(crate) fn projection(&self, t: &[f64], i: usize) -> f64 {
        dot(t, &self.bstar[i]) / self.bstar_sq[i]
    }

    pub(crate) fn subtract(&self, t: &mut [f64], i: usize, c: f64) {
        for (x, y) in t.iter_mut().zip(&self.cols[i]) {
            *x -= c * y;
        }
    }

    /// Visits every nonzero lattice vector with squared norm at most `radius_sq`
    /// as `(reduced coordinates, squared norm)`.
    pub fn for_each_short<F>(&self, radius_sq: f64, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64], f64) -> ControlFlow<()>,
    {
        let mut x = vec![0i64; self.dim()];
        self.level(self.dim(), radius_sq, 0.0, &mut x, f)
    }

    fn level<F>(&self, level: usize, radius_sq: f64, partial: f64, x: &mut [i64], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64], f64) -> ControlFlow<()>,
    {
        if level == 0 {
            if x.iter().any(|&c| c != 0) {
                return f(x, partial);
            }
            return ControlFlow::Continue(());
        }
        let i = level - 1;
        let n = self.dim();
        let center: f64 = -(i + 1..n).map(|j| x[j] as f64 * self.mu[j][i]).sum::<f64>();
        let slack = (radius_sq - partial).max(0.0);
        let half = (slack / self.bstar_sq[i]).sqrt();
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for c in lo..=hi {
            let d = c as f64 - center;
            let next = partial + d * d * self.bstar_sq[i];
            if next > radius_sq {
                continue;
            }
            x[i] = c;
            self.level(level - 1, radius_sq, next, x, f)?;
        }
        x[i] = 0;
        ControlFlow::Continue(())
    }
}
