//! Real polynomials with prescribed values at the `v`-th roots of unity.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groupring::{RingElem, RingSpec};
use crate::groups::{Family, GroupElem};

/// `polys[i][k]` is the interpolant equal to `r (1+ι)^k` at `ξ^i, ξ^{v-i}` and `r` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct WFamily {
    pub r: f64,
    pub iota: f64,
    pub t: usize,
    pub v: usize,
    pub polys: Vec<Vec<Vec<f64>>>,
}

fn root(v: usize, l: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * l as f64 / v as f64)
}

pub fn build_w_family(r: f64, iota: f64, t: usize, v: usize) -> Result<WFamily> {
    if v < 2 || !(r > 0.0) || !(iota > 0.0) {
        return Err(Error::Parameter(format!("need v >= 2, r > 0, iota > 0; got v={v}, r={r}, iota={iota}")));
    }
    let mut polys = Vec::with_capacity(v);
    for i in 0..v {
        let mut row = Vec::with_capacity(t + 1);
        for k in 0..=t {
            let mut values: Vec<Complex64> = (0..v).map(|l| Complex64::from(target(r, iota, v, i, k, l))).collect();
            // conjugate symmetry f(ξ^{v-l}) = conj f(ξ^l) makes the interpolant real
            let sym: Vec<Complex64> = (0..v).map(|l| (values[l] + values[(v - l) % v].conj()) / 2.0).collect();
            values = sym;
            let mut coeffs = Vec::with_capacity(v);
            for j in 0..v {
                let c: Complex64 = (0..v).map(|l| values[l] * root(v, (l * j) % v).conj()).sum::<Complex64>() / v as f64;
                if c.im.abs() > 1e-10 * r.max(1.0) * (1.0 + iota).powi(k as i32) {
                    return Err(Error::NoConvergence(format!("interpolant ({i}, {k}) has imaginary part {}", c.im)));
                }
                coeffs.push(c.re);
            }
            row.push(coeffs);
        }
        polys.push(row);
    }
    Ok(WFamily { r, iota, t, v, polys })
}

fn target(r: f64, iota: f64, v: usize, i: usize, k: usize, l: usize) -> f64 {
    if l == i || l == (v - i) % v {
        r * (1.0 + iota).powi(k as i32)
    } else {
        r
    }
}

impl WFamily {
    /// Prescribed value of `r_k^{(i)}` at `ξ^l`.
    pub fn target(&self, i: usize, k: usize, l: usize) -> f64 {
        target(self.r, self.iota, self.v, i, k, l)
    }

    pub fn eval(&self, i: usize, k: usize, z: Complex64) -> Complex64 {
        self.polys[i][k].iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Largest interpolation error over all members and roots.
    pub fn max_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.v {
            for k in 0..=self.t {
                for l in 0..self.v {
                    let d = (self.eval(i, k, root(self.v, l)) - self.target(i, k, l)).norm();
                    worst = worst.max(d);
                }
            }
        }
        worst
    }

    /// `(Π_l |r(ξ^l)| / √v)^{1/v}`.
    pub fn c_constant(&self, i: usize, k: usize) -> f64 {
        let v = self.v as f64;
        let log_sum: f64 = (0..self.v).map(|l| (self.eval(i, k, root(self.v, l)).norm() / v.sqrt()).ln()).sum();
        (log_sum / v).exp()
    }

    /// `r_k^{(i)}(t)` in a ring whose group has `t` of order `v`.
    pub fn element(&self, ring: &RingSpec, i: usize, k: usize) -> Result<RingElem<f64>> {
        let g = ring.group();
        if !matches!(g.family(), Family::TypeI { .. }) || g.second_order() != self.v {
            return Err(Error::UnsupportedRing(format!("need a Type I group with t of order {}, got {g}", self.v)));
        }
        let mut acc = RingElem::zero(ring);
        for (j, &c) in self.polys[i][k].iter().enumerate() {
            acc = &acc + &RingElem::monomial(ring, GroupElem::new(0, j), c);
        }
        Ok(acc)
    }
}
