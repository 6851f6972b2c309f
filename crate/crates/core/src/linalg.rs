//! Exact sparse row echelon forms over the rationals.
//!
//! Rows are stored as primitive integer vectors. Arithmetic runs in `i128`
//! with overflow checks and switches to big integers on the first overflow.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{primitive_integer, Q};

/// Sparse vector: strictly increasing keys with nonzero values.
pub type SparseVec = Vec<(u32, Q)>;

trait Int: Clone + Sized {
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn abs_lt(&self, o: &Self) -> bool;
}

impl Int for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o).filter(|x| *x != i128::MIN)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o).filter(|x| *x != i128::MIN)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        *self / *o
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
}

impl Int for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_unit(&self) -> bool {
        self.is_one() || (-self).is_one()
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
}

type Row<T> = Vec<(u32, T)>;

/// Rows in insertion order, each with a pivot key that no later row contains.
#[derive(Clone, Debug)]
struct Rows<T> {
    rows: Vec<(u32, Row<T>)>,
}

impl<T> Default for Rows<T> {
    fn default() -> Self {
        Rows { rows: Vec::new() }
    }
}

fn make_primitive<T: Int>(v: &mut Row<T>) {
    if v.is_empty() {
        return;
    }
    let mut g = v[0].1.clone();
    if g.is_neg() {
        g = g.neg();
    }
    for (_, x) in v.iter().skip(1) {
        if g.is_unit() {
            break;
        }
        g = g.gcd(x);
    }
    if v[0].1.is_neg() {
        g = g.neg();
    }
    if !(g.is_unit() && !g.is_neg()) {
        for (_, x) in v.iter_mut() {
            *x = x.div(&g);
        }
    }
}

/// `a*v - b*row`, dropping zeros.
fn combine<T: Int>(a: &T, v: &Row<T>, b: &T, row: &Row<T>) -> Option<Row<T>> {
    let mut out = Vec::with_capacity(v.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < row.len() {
        let ki = v.get(i).map(|e| e.0);
        let kj = row.get(j).map(|e| e.0);
        match (ki, kj) {
            (Some(x), Some(y)) if x == y => {
                let val = v[i].1.mul(a)?.sub(&row[j].1.mul(b)?)?;
                if !val.is_zero() {
                    out.push((x, val));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, v[i].1.mul(a)?));
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, v[i].1.mul(a)?));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, row[j].1.mul(b)?.neg()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some(out)
}

impl<T: Int> Rows<T> {
    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates every pivot key from `v`; `None` signals overflow.
    fn reduce(&self, mut v: Row<T>) -> Option<Row<T>> {
        // a row contains no pivot of an earlier row, so one pass in order suffices
        for (k, row) in &self.rows {
            if v.is_empty() {
                break;
            }
            let Ok(i) = v.binary_search_by_key(k, |e| e.0) else { continue };
            let p = row.binary_search_by_key(k, |e| e.0).expect("pivot lies in its row");
            let a = row[p].1.clone();
            let b = v[i].1.clone();
            let g = a.gcd(&b);
            let (a, b) = (a.div(&g), b.div(&g));
            v = combine(&a, &v, &b, row)?;
            make_primitive(&mut v);
        }
        Some(v)
    }

    /// Adds a reduced nonzero row, pivoting on an entry of least magnitude.
    fn push(&mut self, row: Row<T>) {
        let mut best = 0;
        for (i, (_, x)) in row.iter().enumerate() {
            if x.abs_lt(&row[best].1) {
                best = i;
            }
        }
        self.rows.push((row[best].0, row));
    }
}

#[derive(Clone, Debug)]
enum Inner {
    Small(Rows<i128>),
    Big(Rows<BigInt>),
}

/// Incremental echelon form used for ranks and span membership.
#[derive(Clone, Debug)]
pub struct Echelon {
    inner: Inner,
}

impl Default for Echelon {
    fn default() -> Self {
        Self::new()
    }
}

fn to_int_row(v: &SparseVec) -> Row<BigInt> {
    let vals: Vec<Q> = v.iter().map(|(_, x)| x.clone()).collect();
    let ints = primitive_integer(&vals);
    v.iter().zip(ints).map(|((k, _), x)| (*k, x)).collect()
}

fn small_row(v: &Row<BigInt>) -> Option<Row<i128>> {
    v.iter().map(|(k, x)| x.to_i128().filter(|y| y.abs() < (1i128 << 100)).map(|y| (*k, y))).collect()
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { inner: Inner::Small(Rows::default()) }
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            Inner::Small(r) => r.len(),
            Inner::Big(r) => r.len(),
        }
    }

    fn promote(&mut self) {
        if let Inner::Small(r) = &self.inner {
            let rows = r
                .rows
                .iter()
                .map(|(k, row)| (*k, row.iter().map(|(c, x)| (*c, BigInt::from(*x))).collect::<Row<BigInt>>()))
                .collect();
            self.inner = Inner::Big(Rows { rows });
        }
    }

    /// Reduced remainder (empty iff the row lies in the span).
    fn remainder(&mut self, big: Row<BigInt>, small: Option<Row<i128>>) -> Remainder {
        if let Inner::Small(r) = &self.inner {
            if let Some(small) = small {
                if let Some(out) = r.reduce(small) {
                    return Remainder::Small(out);
                }
            }
            self.promote();
        }
        match &self.inner {
            Inner::Big(r) => Remainder::Big(r.reduce(big).expect("big integer arithmetic cannot overflow")),
            Inner::Small(_) => unreachable!(),
        }
    }

    fn insert_remainder(&mut self, rem: Remainder) -> bool {
        match rem {
            Remainder::Small(row) => {
                if row.is_empty() {
                    return false;
                }
                match &mut self.inner {
                    Inner::Small(r) => {
                        r.push(row);
                    }
                    Inner::Big(r) => {
                        let row: Row<BigInt> = row.into_iter().map(|(k, x)| (k, BigInt::from(x))).collect();
                        r.push(row);
                    }
                }
                true
            }
            Remainder::Big(row) => {
                if row.is_empty() {
                    return false;
                }
                self.promote();
                if let Inner::Big(r) = &mut self.inner {
                    r.push(row);
                }
                true
            }
        }
    }

    /// Inserts `v`; returns whether the rank increased.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        if v.is_empty() {
            return false;
        }
        let big = to_int_row(v);
        let small = small_row(&big);
        let rem = self.remainder(big, small);
        self.insert_remainder(rem)
    }

    /// Inserts an integer vector with strictly increasing keys.
    pub fn insert_int(&mut self, v: &[(u32, i128)]) -> bool {
        if v.is_empty() {
            return false;
        }
        let mut small: Row<i128> = v.to_vec();
        make_primitive(&mut small);
        let fits = small.iter().all(|(_, x)| x.abs() < (1i128 << 100));
        let big: Row<BigInt> = small.iter().map(|(k, x)| (*k, BigInt::from(*x))).collect();
        let rem = self.remainder(big, if fits { Some(small) } else { None });
        self.insert_remainder(rem)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        if v.is_empty() {
            return true;
        }
        let mut probe = self.clone();
        !probe.insert(v)
    }

    /// Membership test that does not modify the form.
    pub fn contains_int(&self, v: &[(u32, i128)]) -> bool {
        if v.is_empty() {
            return true;
        }
        let mut small: Row<i128> = v.to_vec();
        make_primitive(&mut small);
        let rest = match &self.inner {
            Inner::Small(r) if small.iter().all(|(_, x)| x.abs() < (1i128 << 100)) => {
                r.reduce(small.clone()).map(|x| x.is_empty())
            }
            _ => None,
        };
        match rest {
            Some(b) => b,
            None => {
                let big: Row<BigInt> = small.iter().map(|(k, x)| (*k, BigInt::from(*x))).collect();
                let rows = match &self.inner {
                    Inner::Big(r) => r.clone(),
                    Inner::Small(r) => Rows {
                        rows: r
                            .rows
                            .iter()
                            .map(|(k, row)| {
                                (*k, row.iter().map(|(c, x)| (*c, BigInt::from(*x))).collect::<Row<BigInt>>())
                            })
                            .collect(),
                    },
                };
                rows.reduce(big).expect("big integer arithmetic cannot overflow").is_empty()
            }
        }
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn mod_mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn mod_inv(a: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u64, a, PRIME - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mod_mul(r, base);
        }
        base = mod_mul(base, base);
        e >>= 1;
    }
    r
}

/// Echelon form over the prime field `F_p`, `p = 2^61 − 1`.
///
/// Ranks over `F_p` of integer vectors bound ranks over the rationals from below,
/// and vectors independent mod `p` are independent over the rationals.
#[derive(Clone, Debug, Default)]
pub struct ModEchelon {
    rows: HashMap<u32, Row<u64>>,
}

impl ModEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts an integer vector with strictly increasing keys; returns whether the rank increased.
    pub fn insert_int(&mut self, v: &[(u32, i128)]) -> bool {
        let p = PRIME as i128;
        let mut acc: BTreeMap<u32, u64> =
            v.iter().map(|(k, x)| (*k, x.rem_euclid(p) as u64)).filter(|(_, x)| *x != 0).collect();
        let mut from = 0;
        loop {
            let Some((&k, &c)) = acc.range(from..).find(|(k, _)| self.rows.contains_key(k)) else { break };
            from = k;
            let row = &self.rows[&k];
            for (j, x) in row {
                let e = acc.entry(*j).or_insert(0);
                *e = (*e + PRIME - mod_mul(c, *x)) % PRIME;
                if *e == 0 {
                    acc.remove(j);
                }
            }
        }
        let Some((&k, &c)) = acc.iter().next() else { return false };
        let inv = mod_inv(c);
        let row: Row<u64> = acc.into_iter().map(|(j, x)| (j, mod_mul(x, inv))).collect();
        self.rows.insert(k, row);
        true
    }
}

enum Remainder {
    Small(Row<i128>),
    Big(Row<BigInt>),
}

/// Echelon form over the rationals that remembers how each row was built from
/// tagged inputs; used to read off coordinates in a chosen basis.
#[derive(Clone, Debug, Default)]
pub struct TrackedEchelon {
    rows: HashMap<u32, (SparseVec, Vec<(usize, Q)>)>,
}

fn sparse_axpy(v: &SparseVec, c: &Q, w: &SparseVec) -> SparseVec {
    // v + c*w
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        match (v.get(i), w.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                let x = &a.1 + c * &b.1;
                if !x.is_zero() {
                    out.push((a.0, x));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                out.push(a.clone());
                i += 1;
            }
            (Some(a), None) => {
                out.push(a.clone());
                i += 1;
            }
            (_, Some(b)) => {
                out.push((b.0, c * &b.1));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn tag_axpy(v: &mut Vec<(usize, Q)>, c: &Q, w: &[(usize, Q)]) {
    for (k, x) in w {
        match v.iter_mut().find(|(j, _)| j == k) {
            Some(e) => e.1 += c * x,
            None => v.push((*k, c * x)),
        }
    }
    v.retain(|(_, x)| !x.is_zero());
}

impl TrackedEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: SparseVec, mut tag: Vec<(usize, Q)>) -> (SparseVec, Vec<(usize, Q)>) {
        let mut i = 0;
        while i < v.len() {
            let k = v[i].0;
            if let Some((row, rtag)) = self.rows.get(&k) {
                let c = -(&v[i].1 / &row[0].1);
                v = sparse_axpy(&v, &c, row);
                tag_axpy(&mut tag, &c, rtag);
            } else {
                i += 1;
            }
        }
        (v, tag)
    }

    /// Inserts `v` carrying `tag`; returns whether it was independent.
    pub fn insert(&mut self, v: SparseVec, tag: Option<usize>) -> bool {
        let tag = tag.map(|t| vec![(t, Q::one())]).unwrap_or_default();
        let (v, tag) = self.reduce(v, tag);
        if v.is_empty() {
            return false;
        }
        self.rows.insert(v[0].0, (v, tag));
        true
    }

    /// Canonical representative of `v` modulo the span: no entry sits on a pivot.
    pub fn remainder(&self, v: SparseVec) -> SparseVec {
        self.reduce(v, Vec::new()).0
    }

    /// Writes `v` as a combination of tagged inputs, modulo untagged ones.
    /// Returns `None` if `v` is outside the span.
    pub fn coordinates(&self, v: SparseVec) -> Option<Vec<(usize, Q)>> {
        let (rest, tag) = self.reduce(v, Vec::new());
        if !rest.is_empty() {
            return None;
        }
        let mut out: Vec<(usize, Q)> = tag.into_iter().map(|(k, x)| (k, -x)).collect();
        out.sort_by_key(|(k, _)| *k);
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn v(pairs: &[(u32, i64)]) -> SparseVec {
        pairs.iter().map(|(k, x)| (*k, q(*x))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 1), (1, 2)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 1), (1, 3), (2, 1)])));
        assert!(e.insert(&v(&[(2, 5)])));
        assert_eq!(e.rank(), 3);
        assert!(e.contains(&v(&[(0, 7)])));
    }

    #[test]
    fn overflow_promotes_to_big_integers() {
        let mut e = Echelon::new();
        let big = 1i64 << 62;
        assert!(e.insert(&v(&[(0, big), (1, 3)])));
        assert!(e.insert(&v(&[(0, 3), (1, big), (2, big)])));
        assert!(e.insert(&v(&[(0, big - 1), (1, big - 3), (2, 7)])));
        assert!(!e.insert(&v(&[(0, big), (1, 3)])));
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn integer_rows_agree_with_rational_rows() {
        let mut a = Echelon::new();
        let mut b = Echelon::new();
        let rows: [&[(u32, i64)]; 4] = [&[(0, 2), (3, -4)], &[(1, 3), (3, 1)], &[(0, 1), (1, 3), (3, -1)], &[(2, 7)]];
        for r in rows {
            let int: Vec<(u32, i128)> = r.iter().map(|(k, x)| (*k, *x as i128)).collect();
            assert_eq!(a.insert(&v(r)), b.insert_int(&int));
        }
        assert_eq!(a.rank(), 3);
        assert!(b.contains_int(&[(0, 5), (3, -10)]));
        assert!(!b.contains_int(&[(3, 1)]));
    }

    #[test]
    fn coordinates_in_tagged_basis() {
        let mut t = TrackedEchelon::new();
        t.insert(v(&[(0, 1), (1, 1)]), None);
        t.insert(v(&[(1, 1), (2, 1)]), Some(0));
        t.insert(v(&[(2, 2)]), Some(1));
        // (0,0,1) = 1/2 * tag1 ; (1,2,1) = row0 + tag0 modulo the untagged row
        assert_eq!(t.coordinates(v(&[(2, 1)])).unwrap(), vec![(1, qf(1, 2))]);
        assert_eq!(t.coordinates(v(&[(0, 1), (1, 2), (2, 1)])).unwrap(), vec![(0, q(1))]);
        assert!(t.coordinates(v(&[(3, 1)])).is_none());
    }
}
