//! Small dense matrices over any numeric scalar, plus the exact-rational
//! routines (inverse, determinant) the lattice code relies on.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Reorders rows so that row `r` of the result is row `perm[r]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| self[(perm[r], c)].clone())
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        let mut out = Matrix { rows: self.rows, cols: other.cols, data: vec![T::zero(); self.rows * other.cols] };
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a.clone() * other[(k, c)].clone();
                    let slot = &mut out.data[r * other.cols + c];
                    *slot = std::mem::replace(slot, T::zero()) + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl Matrix<f64> {
    pub fn to_faer(&self) -> faer::Mat<f64> {
        faer::Mat::from_fn(self.rows, self.cols, |r, c| self[(r, c)])
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64 individually
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact rational value of a finite float.
pub fn f64_to_rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

impl Matrix<BigRational> {
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(rat_to_f64)
    }

    /// Gauss–Jordan inverse in exact arithmetic.
    pub fn inverse(&self) -> Result<Matrix<BigRational>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<BigRational>::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(Error::Singular)?;
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = &a[(col, c)] / &p;
                inv[(col, c)] = &inv[(col, c)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let da = &f * &a[(col, c)];
                    a[(r, c)] -= da;
                    let di = &f * &inv[(col, c)];
                    inv[(r, c)] -= di;
                }
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> BigRational {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &p;
                for c in col..n {
                    let d = &f * &a[(col, c)];
                    a[(r, c)] -= d;
                }
            }
        }
        det
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Scales by `d` and returns the integer matrix; panics if an entry stays fractional.
    pub fn scale_to_integer(&self, d: &BigInt) -> Matrix<BigInt> {
        self.map(|x| {
            let y = x * BigRational::from_integer(d.clone());
            assert!(y.is_integer(), "denominator does not clear matrix");
            y.to_integer()
        })
    }
}

impl Matrix<BigInt> {
    pub fn to_rational(&self) -> Matrix<BigRational> {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn determinant(&self) -> BigInt {
        self.to_rational().determinant().to_integer()
    }
}

impl Matrix<i64> {
    pub fn to_bigint(&self) -> Matrix<BigInt> {
        self.map(|&x| BigInt::from(x))
    }

    pub fn to_rational(&self) -> Matrix<BigRational> {
        self.map(|&x| rat(x))
    }
}

/// Inverse of an integer matrix modulo `q`, when `gcd(det, q) = 1`.
pub fn inverse_mod(a: &Matrix<BigInt>, q: &BigInt) -> Result<Matrix<BigInt>> {
    assert!(a.is_square());
    let det = a.determinant();
    let det_inv = mod_inverse(&det, q)
        .ok_or_else(|| Error::NotInvertible(format!("determinant {det} shares a factor with {q}")))?;
    // adj(A) = det(A) A^{-1} is integral
    let inv = a.to_rational().inverse()?;
    let det_rat = BigRational::from_integer(det);
    Ok(inv.map(|x| ((x * &det_rat).to_integer() * &det_inv).mod_floor(q)))
}

pub fn mod_inverse(a: &BigInt, q: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(q).extended_gcd(q);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(q))
    } else {
        None
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rat(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Absolute value helper that keeps the rational type.
pub fn rat_abs(x: &BigRational) -> BigRational {
    x.abs()
}
