//! The two semi-direct-product group families.
//!
//! Type I is `Z_m ⋉ Z_n = <s, t | s^m = t^n = 1, s t s^-1 = t^-1>` with `m` even.
//! Type II is `Z_{p^k}^* ⋉ Z_{p^k}`, elements `a ⊙ g^k` multiplying as
//! `(a ⊙ g^k1)(b ⊙ g^k2) = ab ⊙ g^(k1 b^-1 + k2)`.
//!
//! Elements are pairs `(i, j)`: for Type I, `s^i t^j`; for Type II, `a_i ⊙ g^j`
//! where `a_i` is the `i`-th entry of the unit list. The unit list is arranged
//! so that `a_0 = 1` and `a_{m-i} = a_i^-1`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the group order accepted by [`GroupSpec::cayley_table`].
pub const CAYLEY_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    TypeI { m: usize, n: usize },
    TypeII { p: usize, k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    pub i: usize,
    pub j: usize,
}

impl GroupElem {
    pub const fn new(i: usize, j: usize) -> Self {
        GroupElem { i, j }
    }
}

#[derive(Debug)]
struct Inner {
    family: Family,
    /// Order of the acting cyclic factor (`m`, or `p^k - p^(k-1)`).
    first: usize,
    /// Order of the normal cyclic factor (`n`, or `p^k`).
    second: usize,
    units: Vec<usize>,
    /// `unit_index[u]` is the position of unit `u` in `units`, `usize::MAX` for non-units.
    unit_index: Vec<usize>,
    /// `unit_inverse[u]` is `u^-1 mod p^k` (Type II only).
    unit_inverse: Vec<usize>,
}

/// An immutable, cheaply clonable description of one group.
#[derive(Clone)]
pub struct GroupSpec(Arc<Inner>);

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.family == other.0.family
    }
}
impl Eq for GroupSpec {}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Units of `Z_modulus` ordered so that position `m - i` holds the inverse of position `i`.
fn arrange_units(modulus: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut inverse = vec![0usize; modulus];
    let units: Vec<usize> = (1..modulus).filter(|&u| gcd(u, modulus) == 1).collect();
    for &u in &units {
        inverse[u] = units
            .iter()
            .copied()
            .find(|&v| (u * v) % modulus == 1)
            .expect("units are invertible");
    }
    let m = units.len();
    let self_inverse: Vec<usize> = units.iter().copied().filter(|&u| inverse[u] == u).collect();
    let expected_self_inverse = if m.is_multiple_of(2) && m > 1 { 2 } else { 1 };
    if self_inverse.len() != expected_self_inverse {
        return Err(Error::InvalidGroup(format!(
            "units of Z_{modulus} contain {} self-inverse elements; the paired ordering needs {expected_self_inverse}",
            self_inverse.len()
        )));
    }
    let mut list = vec![usize::MAX; m];
    list[0] = 1;
    if m > 1 && m.is_multiple_of(2) {
        list[m / 2] = modulus - 1;
    }
    let mut pos = 1;
    for &u in &units {
        if inverse[u] == u || list.contains(&u) {
            continue;
        }
        list[pos] = u;
        list[m - pos] = inverse[u];
        pos += 1;
    }
    debug_assert!(list.iter().all(|&u| u != usize::MAX));
    Ok((list, inverse))
}

impl GroupSpec {
    /// `Z_m ⋉ Z_n` with `s` acting on `t` by inversion.
    pub fn type_i(m: usize, n: usize) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(2) {
            return Err(Error::InvalidGroup(format!("Type I needs an even positive m, got {m}")));
        }
        if n == 0 {
            return Err(Error::InvalidGroup("Type I needs a positive n".into()));
        }
        Ok(GroupSpec(Arc::new(Inner {
            family: Family::TypeI { m, n },
            first: m,
            second: n,
            units: Vec::new(),
            unit_index: Vec::new(),
            unit_inverse: Vec::new(),
        })))
    }

    /// `Z_{p^k}^* ⋉ Z_{p^k}`.
    pub fn type_ii(p: usize, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("Type II needs a prime p, got {p}")));
        }
        if k == 0 {
            return Err(Error::InvalidGroup("Type II needs k >= 1".into()));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|&q| q <= 1 << 20)
            .ok_or_else(|| Error::InvalidGroup(format!("p^k = {p}^{k} is too large")))?;
        let (units, unit_inverse) = arrange_units(modulus)?;
        let mut unit_index = vec![usize::MAX; modulus];
        for (idx, &u) in units.iter().enumerate() {
            unit_index[u] = idx;
        }
        Ok(GroupSpec(Arc::new(Inner {
            family: Family::TypeII { p, k },
            first: units.len(),
            second: modulus,
            units,
            unit_index,
            unit_inverse,
        })))
    }

    pub fn family(&self) -> Family {
        self.0.family
    }

    pub fn is_type_i(&self) -> bool {
        matches!(self.0.family, Family::TypeI { .. })
    }

    /// Order of the acting factor: `m` for both families.
    pub fn first_order(&self) -> usize {
        self.0.first
    }

    /// Order of the normal cyclic factor: `n` (Type I) or `p^k` (Type II).
    pub fn second_order(&self) -> usize {
        self.0.second
    }

    pub fn order(&self) -> usize {
        self.0.first * self.0.second
    }

    /// The ordered unit list `a_0, ..., a_{m-1}` (empty for Type I).
    pub fn units(&self) -> &[usize] {
        &self.0.units
    }

    /// Position of a unit in the unit list.
    pub fn unit_position(&self, unit: usize) -> Option<usize> {
        self.0
            .unit_index
            .get(unit % self.0.second.max(1))
            .copied()
            .filter(|&i| i != usize::MAX)
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem::new(0, 0)
    }

    /// The generator `s` (Type I) or the unit `a_1` (Type II).
    pub fn s(&self) -> GroupElem {
        GroupElem::new(1 % self.0.first, 0)
    }

    /// The generator `t` (Type I) or `g` (Type II).
    pub fn t(&self) -> GroupElem {
        GroupElem::new(0, 1 % self.0.second)
    }

    /// Type II element `a ⊙ g^exp` given the unit value `a`.
    pub fn from_unit(&self, unit: usize, exp: usize) -> Result<GroupElem> {
        let i = self
            .unit_position(unit)
            .ok_or(Error::InvalidElement { i: unit, j: exp })?;
        self.check(GroupElem::new(i, exp))
    }

    pub fn check(&self, x: GroupElem) -> Result<GroupElem> {
        if x.i < self.0.first && x.j < self.0.second {
            Ok(x)
        } else {
            Err(Error::InvalidElement { i: x.i, j: x.j })
        }
    }

    /// Flattened index `i * second + j`.
    pub fn index(&self, x: GroupElem) -> usize {
        x.i * self.0.second + x.j
    }

    pub fn elem(&self, index: usize) -> GroupElem {
        GroupElem::new(index / self.0.second, index % self.0.second)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.order()).map(move |idx| self.elem(idx))
    }

    pub fn mul(&self, x: GroupElem, y: GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: GroupElem, y: GroupElem) -> GroupElem {
        let inner = &*self.0;
        match inner.family {
            Family::TypeI { m, n } => {
                // s^a t^b · s^c t^d = s^(a+c) t^((-1)^c b + d)
                let b = if y.i.is_multiple_of(2) { x.j } else { (n - x.j) % n };
                GroupElem::new((x.i + y.i) % m, (b + y.j) % n)
            }
            Family::TypeII { .. } => {
                let q = inner.second;
                let a = inner.units[x.i];
                let b = inner.units[y.i];
                let ab = (a * b) % q;
                let exp = (x.j * inner.unit_inverse[b] + y.j) % q;
                GroupElem::new(inner.unit_index[ab], exp)
            }
        }
    }

    pub fn inv(&self, x: GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        Ok(self.inv_unchecked(x))
    }

    pub(crate) fn inv_unchecked(&self, x: GroupElem) -> GroupElem {
        let inner = &*self.0;
        match inner.family {
            Family::TypeI { m, n } => {
                // (s^i t^j)^-1 = s^-i t^(-(-1)^i j)
                let j = if x.i.is_multiple_of(2) { (n - x.j) % n } else { x.j };
                GroupElem::new((m - x.i) % m, j)
            }
            Family::TypeII { .. } => {
                // (a ⊙ g^k)^-1 = a^-1 ⊙ g^(-k a)
                let q = inner.second;
                let a = inner.units[x.i];
                let i = (inner.first - x.i) % inner.first;
                GroupElem::new(i, (q - (x.j * a) % q) % q)
            }
        }
    }

    /// Full multiplication table of flattened indices. Row `x`, column `y` holds `x·y`.
    pub fn cayley_table(&self) -> Result<Vec<Vec<usize>>> {
        self.cayley_table_capped(CAYLEY_CAP)
    }

    pub fn cayley_table_capped(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let order = self.order();
        if order > cap {
            return Err(Error::TooLarge { order, cap });
        }
        Ok((0..order)
            .map(|x| {
                (0..order)
                    .map(|y| self.index(self.mul_unchecked(self.elem(x), self.elem(y))))
                    .collect()
            })
            .collect())
    }

    /// `x^e` by repeated multiplication.
    pub fn pow(&self, x: GroupElem, e: usize) -> GroupElem {
        (0..e).fold(self.identity(), |acc, _| self.mul_unchecked(acc, x))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.family {
            Family::TypeI { m, n } => write!(f, "family=I m={m} n={n}"),
            Family::TypeII { p, k } => write!(f, "family=II p={p} k={k}"),
        }
    }
}

/// Splits `key=value` tokens separated by whitespace.
pub(crate) fn parse_record(s: &str) -> Result<Vec<(&str, &str)>> {
    s.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))
        })
        .collect()
}

pub(crate) fn record_value<'a>(fields: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("missing field {key}")))
}

fn parse_num<T: FromStr>(fields: &[(&str, &str)], key: &str) -> Result<T> {
    record_value(fields, key)?
        .parse()
        .map_err(|_| Error::Parse(format!("field {key} is not a number")))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields = parse_record(s)?;
        match record_value(&fields, "family")? {
            "I" => GroupSpec::type_i(parse_num(&fields, "m")?, parse_num(&fields, "n")?),
            "II" => GroupSpec::type_ii(parse_num(&fields, "p")?, parse_num(&fields, "k")?),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d8() -> GroupSpec {
        GroupSpec::type_i(2, 4).unwrap()
    }

    #[test]
    fn sts_is_t_inverse() {
        let g = d8();
        let st = GroupElem::new(1, 1);
        let s = GroupElem::new(1, 0);
        assert_eq!(g.mul(st, s).unwrap(), GroupElem::new(0, 3));
    }

    #[test]
    fn type_ii_law_example() {
        let g = GroupSpec::type_ii(5, 1).unwrap();
        let x = g.from_unit(2, 1).unwrap();
        let y = g.from_unit(3, 2).unwrap();
        let z = g.mul(x, y).unwrap();
        assert_eq!(g.units()[z.i], 1);
        assert_eq!(z.j, 4);
    }

    #[test]
    fn identity_is_neutral() {
        for g in [d8(), GroupSpec::type_ii(3, 2).unwrap()] {
            for x in g.elements() {
                assert_eq!(g.mul(g.identity(), x).unwrap(), x);
                assert_eq!(g.mul(x, g.identity()).unwrap(), x);
            }
        }
    }

    #[test]
    fn inverses_exhaustive_d8() {
        let g = d8();
        assert_eq!(g.inv(g.identity()).unwrap(), g.identity());
        assert_eq!(g.inv(GroupElem::new(1, 0)).unwrap(), GroupElem::new(1, 0));
        for x in g.elements() {
            let xi = g.inv(x).unwrap();
            assert_eq!(g.mul(x, xi).unwrap(), g.identity());
            assert_eq!(g.mul(xi, x).unwrap(), g.identity());
        }
    }

    #[test]
    fn out_of_range_rejected() {
        let g = d8();
        assert!(matches!(
            g.mul(GroupElem::new(2, 0), g.identity()),
            Err(Error::InvalidElement { .. })
        ));
        assert!(g.inv(GroupElem::new(0, 4)).is_err());
    }

    #[test]
    fn unit_list_pairs_inverses() {
        for (p, k) in [(3, 1), (5, 1), (5, 2), (7, 1), (3, 3), (2, 1), (2, 2), (11, 1)] {
            let g = GroupSpec::type_ii(p, k).unwrap();
            let q = g.second_order();
            let units = g.units();
            let m = units.len();
            assert_eq!(m, q - q / p);
            assert_eq!(units[0], 1);
            for i in 1..m {
                assert_eq!((units[m - i] * units[i]) % q, 1, "p={p} k={k} i={i}");
            }
            let mut sorted = units.to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), m);
        }
    }

    #[test]
    fn two_power_with_four_involutions_rejected() {
        assert!(GroupSpec::type_ii(2, 3).is_err());
        assert!(GroupSpec::type_ii(4, 1).is_err());
        assert!(GroupSpec::type_i(3, 4).is_err());
    }

    #[test]
    fn cayley_tables_are_latin_squares() {
        for g in [
            GroupSpec::type_i(2, 2).unwrap(),
            d8(),
            GroupSpec::type_ii(3, 2).unwrap(),
        ] {
            let table = g.cayley_table().unwrap();
            let order = g.order();
            for row in &table {
                let mut seen = vec![false; order];
                row.iter().for_each(|&v| seen[v] = true);
                assert!(seen.iter().all(|&b| b));
            }
            for col in 0..order {
                let mut seen = vec![false; order];
                table.iter().for_each(|row| seen[row[col]] = true);
                assert!(seen.iter().all(|&b| b));
            }
        }
        let g = d8();
        let table = g.cayley_table().unwrap();
        assert_eq!(table[0], (0..8).collect::<Vec<_>>());
        assert_eq!(GroupSpec::type_ii(3, 2).unwrap().order(), 54);
    }

    #[test]
    fn cayley_cap_enforced() {
        let g = GroupSpec::type_i(2, 8).unwrap();
        assert_eq!(
            g.cayley_table_capped(8),
            Err(Error::TooLarge { order: 16, cap: 8 })
        );
    }

    #[test]
    fn associativity_exhaustive_small() {
        for g in [
            GroupSpec::type_i(2, 4).unwrap(),
            GroupSpec::type_i(4, 6).unwrap(),
            GroupSpec::type_i(6, 3).unwrap(),
            GroupSpec::type_ii(5, 1).unwrap(),
            GroupSpec::type_ii(7, 1).unwrap(),
        ] {
            assert!(g.order() <= 64);
            for x in g.elements() {
                for y in g.elements() {
                    let xy = g.mul_unchecked(x, y);
                    for z in g.elements() {
                        assert_eq!(
                            g.mul_unchecked(xy, z),
                            g.mul_unchecked(x, g.mul_unchecked(y, z))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn type_i_relation() {
        for (m, n) in [(2, 3), (2, 4), (4, 5), (6, 8), (4, 1)] {
            let g = GroupSpec::type_i(m, n).unwrap();
            let (s, t) = (g.s(), g.t());
            let conj = g.mul_unchecked(s, g.mul_unchecked(t, g.inv_unchecked(s)));
            assert_eq!(conj, g.inv_unchecked(t));
            assert_eq!(g.pow(s, m), g.identity());
            assert_eq!(g.pow(t, n), g.identity());
        }
    }

    #[test]
    fn type_ii_conjugation_is_power_map() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)] {
            let g = GroupSpec::type_ii(p, k).unwrap();
            if g.second_order() > 27 {
                continue;
            }
            let gen = g.t();
            for (i, &a) in g.units().iter().enumerate() {
                let ae = GroupElem::new(i, 0);
                let conj = g.mul_unchecked(g.mul_unchecked(ae, gen), g.inv_unchecked(ae));
                assert_eq!(conj, GroupElem::new(0, a % g.second_order()));
            }
        }
    }

    #[test]
    fn record_round_trip() {
        for g in [d8(), GroupSpec::type_ii(5, 2).unwrap()] {
            let text = g.to_string();
            assert_eq!(text.parse::<GroupSpec>().unwrap(), g);
        }
        assert_eq!(d8().to_string(), "family=I m=2 n=4");
        assert!("family=III m=2".parse::<GroupSpec>().is_err());
    }
}
