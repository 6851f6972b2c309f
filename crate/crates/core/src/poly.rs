//! Sparse commutative polynomials over the rationals in an arbitrary ordered variable set.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V>(Vec<(V, u32)>);

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut m: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        Monomial(m.into_iter().collect())
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn weighted_degree(&self, w: impl Fn(&V) -> i64) -> i64 {
        self.0.iter().map(|(v, e)| w(v) * *e as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<V: Ord> {
    terms: BTreeMap<Monomial<V>, Q>,
}

impl<V: Ord + Clone> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone> Poly<V> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(q(1))
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: V) -> Self {
        Self::term(q(1), Monomial::var(v))
    }

    pub fn term(c: Q, m: Monomial<V>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial<V>) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, c: Q, m: Monomial<V>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(c * x, m.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&q(1), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&q(-1), other);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial<V>) -> bool) -> Self {
        Poly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Ring homomorphism determined by the images of the variables.
    pub fn substitute<W: Ord + Clone>(&self, mut image: impl FnMut(&V) -> Poly<W>) -> Poly<W> {
        let mut cache: BTreeMap<V, Poly<W>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in m.factors() {
                let base = cache.entry(v.clone()).or_insert_with(|| image(v)).clone();
                t = t.mul(&base.pow(*e));
                if t.is_zero() {
                    break;
                }
            }
            out.add_scaled(&q(1), &t);
        }
        out
    }

    pub fn map_vars<W: Ord + Clone>(&self, f: impl Fn(&V) -> W) -> Poly<W> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(c.clone(), Monomial::from_pairs(m.factors().iter().map(|(v, e)| (f(v), *e))));
        }
        out
    }

    pub fn eval(&self, value: impl Fn(&V) -> Q) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = value(v);
                for _ in 0..*e {
                    t *= &x;
                }
            }
            total += t;
        }
        total
    }

    /// Whether every term has weighted degree `d`.
    pub fn is_homogeneous(&self, w: impl Fn(&V) -> i64) -> bool {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(&w));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: i64, w: impl Fn(&V) -> i64) -> Self {
        self.filter(|m| m.weighted_degree(&w) == d)
    }

    pub fn max_degree(&self, w: impl Fn(&V) -> i64) -> Option<i64> {
        self.terms.keys().map(|m| m.weighted_degree(&w)).max()
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if m.is_one() || !c.is_one() {
                parts.push(c.to_string());
            }
            for (v, e) in m.factors() {
                if *e == 1 {
                    parts.push(v.to_string());
                } else {
                    parts.push(format!("{v}^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels() {
        let x: Poly<u8> = Poly::var(0);
        let y: Poly<u8> = Poly::var(1);
        let s = x.add(&y);
        let d = x.sub(&y);
        let p = s.mul(&d);
        assert_eq!(p, x.pow(2).sub(&y.pow(2)));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_is_multiplicative() {
        let x: Poly<u8> = Poly::var(0);
        let f = x.pow(3).add(&Poly::constant(q(2)));
        let g = f.substitute(|_| Poly::<u8>::var(7).add(&Poly::one()));
        assert_eq!(g.eval(|_| q(1)), q(10));
    }
}
