//! Symmetric functions in the elementary basis, generating series, the coproduct and
//! the finite-variable quotients indexed by a list of dominant weights.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::{Node, Weight};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::rational::{parse_q, q, Q};

/// The generator `e_{i,r}`, `r ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EVar {
    pub node: Node,
    pub r: u32,
}

impl fmt::Display for EVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[i={},r={}]", self.node, self.r)
    }
}

pub type SymFunc = Poly<EVar>;

pub fn sym_degree(v: &EVar) -> i64 {
    2 * v.r as i64
}

pub fn degree_of(f: &SymFunc) -> Option<i64> {
    f.max_degree(sym_degree)
}

pub fn e(node: Node, r: u32) -> SymFunc {
    if r == 0 {
        SymFunc::one()
    } else {
        SymFunc::var(EVar { node, r })
    }
}

/// `e_{i,r}` with the convention `e_{i,r} = 0` for negative `r`.
pub fn e_signed(node: Node, r: i64) -> SymFunc {
    if r < 0 {
        SymFunc::zero()
    } else {
        e(node, r as u32)
    }
}

static H_CACHE: Mutex<Option<HashMap<u32, Poly<u32>>>> = Mutex::new(None);
static P_CACHE: Mutex<Option<HashMap<u32, Poly<u32>>>> = Mutex::new(None);

fn at_node(f: &Poly<u32>, node: Node) -> SymFunc {
    f.map_vars(|r| EVar { node, r: *r })
}

/// `h_r` in the elementary basis of a single alphabet, `h_r = Σ_{j≥1} (−1)^{j−1} e_j h_{r−j}`.
fn h_single(r: u32) -> Poly<u32> {
    let mut guard = H_CACHE.lock().expect("cache poisoned");
    let cache = guard.get_or_insert_with(HashMap::new);
    if let Some(p) = cache.get(&r) {
        return p.clone();
    }
    let mut table: Vec<Poly<u32>> = vec![Poly::one()];
    for s in 1..=r {
        let mut acc = Poly::zero();
        for j in 1..=s {
            let sign = if j % 2 == 1 { q(1) } else { q(-1) };
            acc.add_scaled(&sign, &Poly::var(j).mul(&table[(s - j) as usize]));
        }
        table.push(acc);
    }
    for (s, p) in table.iter().enumerate() {
        cache.insert(s as u32, p.clone());
    }
    table[r as usize].clone()
}

/// `p_r` via Newton: `p_r = Σ_{j=1}^{r−1} (−1)^{j−1} e_j p_{r−j} + (−1)^{r−1} r e_r`.
fn p_single(r: u32) -> Poly<u32> {
    let mut guard = P_CACHE.lock().expect("cache poisoned");
    let cache = guard.get_or_insert_with(HashMap::new);
    if let Some(p) = cache.get(&r) {
        return p.clone();
    }
    let mut table: Vec<Poly<u32>> = vec![Poly::zero()];
    for s in 1..=r {
        let mut acc = Poly::zero();
        for j in 1..s {
            let sign = if j % 2 == 1 { q(1) } else { q(-1) };
            acc.add_scaled(&sign, &Poly::var(j).mul(&table[(s - j) as usize]));
        }
        let sign = if s % 2 == 1 { q(1) } else { q(-1) };
        acc.add_scaled(&(sign * q(s as i64)), &Poly::var(s));
        table.push(acc);
    }
    for (s, p) in table.iter().enumerate().skip(1) {
        cache.insert(s as u32, p.clone());
    }
    table[r as usize].clone()
}

pub fn h(node: Node, r: u32) -> SymFunc {
    at_node(&h_single(r), node)
}

pub fn h_signed(node: Node, r: i64) -> SymFunc {
    if r < 0 {
        SymFunc::zero()
    } else {
        h(node, r as u32)
    }
}

/// Power sum; `p_{i,0}` is taken to be zero.
pub fn p(node: Node, r: u32) -> SymFunc {
    if r == 0 {
        SymFunc::zero()
    } else {
        at_node(&p_single(r), node)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Basis {
    P,
    E,
    H,
}

/// A generator `p_{i,r}`, `e_{i,r}` or `h_{i,r}` of one of the three bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisVar {
    pub basis: Basis,
    pub node: Node,
    pub r: u32,
}

impl fmt::Display for BasisVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.basis {
            Basis::P => 'p',
            Basis::E => 'e',
            Basis::H => 'h',
        };
        write!(f, "{c}[i={},r={}]", self.node, self.r)
    }
}

/// Polynomial in the generators of one basis.
pub type BasisExpansion = Poly<BasisVar>;

/// `e_r` written in the generators of `basis`.
fn e_in(basis: Basis, node: Node, r: u32) -> BasisExpansion {
    let var = |s: u32| BasisExpansion::var(BasisVar { basis, node, r: s });
    match basis {
        Basis::E => var(r),
        // h and e satisfy the same recursion
        Basis::H => h_single(r).map_vars(|s| BasisVar { basis, node, r: *s }),
        Basis::P => {
            // e_s = (1/s) Σ_{j=1}^{s} (−1)^{j−1} e_{s−j} p_j
            let mut table: Vec<BasisExpansion> = vec![BasisExpansion::one()];
            for s in 1..=r {
                let mut acc = BasisExpansion::zero();
                for j in 1..=s {
                    let sign = if j % 2 == 1 { q(1) } else { q(-1) };
                    acc.add_scaled(&sign, &table[(s - j) as usize].mul(&var(j)));
                }
                table.push(acc.scale(&(q(1) / q(s as i64))));
            }
            table[r as usize].clone()
        }
    }
}

/// Exact change of basis from the internal elementary basis.
pub fn convert(f: &SymFunc, target: Basis) -> BasisExpansion {
    f.substitute(|v| e_in(target, v.node, v.r))
}

/// Back to the elementary basis.
pub fn from_basis(g: &BasisExpansion) -> SymFunc {
    g.substitute(|v| match v.basis {
        Basis::E => e(v.node, v.r),
        Basis::H => h(v.node, v.r),
        Basis::P => p(v.node, v.r),
    })
}

/// A variable in slot `slot` of a tensor power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot<V> {
    pub slot: u8,
    pub var: V,
}

impl<V: fmt::Display> fmt::Display for Slot<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.var, self.slot)
    }
}

pub type SymTensor = Poly<Slot<EVar>>;

pub fn in_slot(f: &SymFunc, slot: u8) -> SymTensor {
    f.map_vars(|v| Slot { slot, var: *v })
}

/// Applies the coproduct to slot `s`, shifting later slots up by one.
pub fn split_slot(t: &SymTensor, s: u8) -> SymTensor {
    t.substitute(|v| {
        if v.slot < s {
            SymTensor::var(*v)
        } else if v.slot > s {
            SymTensor::var(Slot { slot: v.slot + 1, var: v.var })
        } else {
            let mut acc = SymTensor::zero();
            for a in 0..=v.var.r {
                let left = in_slot(&e(v.var.node, a), s);
                let right = in_slot(&e(v.var.node, v.var.r - a), s + 1);
                acc.add_scaled(&q(1), &left.mul(&right));
            }
            acc
        }
    })
}

pub fn coproduct(f: &SymFunc) -> SymTensor {
    split_slot(&in_slot(f, 0), 0)
}

/// Splits a two-slot tensor into `(slot 0 part, slot 1 part, coefficient)` triples.
pub fn tensor_terms(t: &SymTensor) -> Vec<(SymFunc, SymFunc, Q)> {
    let mut out = Vec::new();
    for (m, c) in t.terms() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (v, k) in m.factors() {
            if v.slot == 0 {
                a.push((v.var, *k));
            } else {
                b.push((v.var, *k));
            }
        }
        out.push((
            SymFunc::term(q(1), Monomial::from_pairs(a)),
            SymFunc::term(q(1), Monomial::from_pairs(b)),
            c.clone(),
        ));
    }
    out
}

/// The finite-variable generator `e^{(k)}_{i,r}` of the quotient algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AVar {
    pub factor: usize,
    pub node: Node,
    pub r: u32,
}

impl fmt::Display for AVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[k={},i={},r={}]", self.factor, self.node, self.r)
    }
}

pub type APoly = Poly<AVar>;

pub fn a_degree(v: &AVar) -> i64 {
    2 * v.r as i64
}

/// The variable `z_{i,j}^{(k)}`, `1 ≤ j ≤ λ^{(k)}_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZVar {
    pub factor: usize,
    pub node: Node,
    pub index: usize,
}

impl fmt::Display for ZVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z[k={},i={},j={}]", self.factor, self.node, self.index)
    }
}

/// The list `λ^{(1)}, …, λ^{(n)}` together with its quotient algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightList {
    pub weights: Vec<Weight>,
}

impl WeightList {
    pub fn new(weights: Vec<Weight>) -> Self {
        WeightList { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `λ^{(k)}_i` for `k` in `1..=n`.
    pub fn level(&self, k: usize, node: Node) -> u32 {
        self.weights[k - 1].0[node - 1].max(0) as u32
    }

    pub fn total(&self) -> Weight {
        let rank = self.weights.first().map_or(0, |w| w.0.len());
        self.weights.iter().fold(Weight::zero(rank), |acc, w| &acc + w)
    }

    /// All generators of the quotient algebra.
    pub fn generators(&self) -> Vec<AVar> {
        let mut out = Vec::new();
        for (k, w) in self.weights.iter().enumerate() {
            for node in 1..=w.0.len() {
                for r in 1..=self.level(k + 1, node) {
                    out.push(AVar { factor: k + 1, node, r });
                }
            }
        }
        out
    }

    pub fn z_vars(&self) -> Vec<ZVar> {
        let mut out = Vec::new();
        for (k, w) in self.weights.iter().enumerate() {
            for node in 1..=w.0.len() {
                for index in 1..=self.level(k + 1, node) as usize {
                    out.push(ZVar { factor: k + 1, node, index });
                }
            }
        }
        out
    }

    /// Dimension of the degree `d` piece of the quotient algebra.
    pub fn a_dim(&self, d: i64) -> u64 {
        if d < 0 || d % 2 != 0 {
            return 0;
        }
        let half = (d / 2) as usize;
        let mut counts = vec![0u64; half + 1];
        counts[0] = 1;
        for g in self.generators() {
            let w = g.r as usize;
            for s in w..=half {
                counts[s] += counts[s - w];
            }
        }
        counts[half]
    }

    /// The projection `a_k`: an algebra map killing `e_{i,r}` with `r > λ^{(k)}_i`.
    pub fn project_a(&self, k: usize, f: &SymFunc) -> Result<APoly> {
        if k == 0 || k > self.len() {
            return Err(Error::Invalid(format!("factor {k} out of range 1..={}", self.len())));
        }
        Ok(f.substitute(|v| {
            if v.node == 0 || v.node > self.weights[k - 1].0.len() || v.r > self.level(k, v.node) {
                APoly::zero()
            } else {
                APoly::var(AVar { factor: k, node: v.node, r: v.r })
            }
        }))
    }

    /// Evaluates the elementary symmetric generators at the given values.
    pub fn specialize(&self, a: &APoly, values: &BTreeMap<ZVar, Q>) -> Result<Q> {
        let missing = std::cell::RefCell::new(None);
        let out = a.eval(|v| {
            let mut vals = Vec::new();
            for index in 1..=self.level(v.factor, v.node) as usize {
                let z = ZVar { factor: v.factor, node: v.node, index };
                match values.get(&z) {
                    Some(x) => vals.push(x.clone()),
                    None => {
                        missing.borrow_mut().get_or_insert(z);
                    }
                }
            }
            elementary_value(&vals, v.r as usize)
        });
        match missing.into_inner() {
            Some(z) => Err(Error::MissingAssignment(z.to_string())),
            None => Ok(out),
        }
    }
}

/// `e_r` evaluated at a list of numbers.
pub fn elementary_value(vals: &[Q], r: usize) -> Q {
    let mut es = vec![q(0); r + 1];
    es[0] = q(1);
    for x in vals {
        for s in (1..=r).rev() {
            let prev = es[s - 1].clone();
            es[s] += prev * x;
        }
    }
    es[r].clone()
}

/// Commutative ring operations needed by [`SeriesX`].
pub trait Ring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl<V: Ord + Clone> Ring for Poly<V> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

pub const DEFAULT_ORDER: usize = 10;

/// Power series in one indeterminate truncated after `x^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesX<T: Ring> {
    coeffs: Vec<T>,
}

impl<T: Ring> SeriesX<T> {
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        SeriesX { coeffs }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> T) -> Self {
        SeriesX { coeffs: (0..=order).map(f).collect() }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![T::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, r: usize) -> &T {
        &self.coeffs[r]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self::from_fn(n, |r| self.coeffs[r].add(&o.coeffs[r]))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self::from_fn(n, |r| {
            let mut acc = T::zero();
            for a in 0..=r {
                let (x, y) = (&self.coeffs[a], &o.coeffs[r - a]);
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            acc
        })
    }

    /// `f(x) ↦ f(−x)`.
    pub fn negate_x(&self) -> Self {
        Self::from_fn(self.order(), |r| if r % 2 == 1 { self.coeffs[r].neg() } else { self.coeffs[r].clone() })
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> SeriesX<U> {
        SeriesX { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == T::one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }
}

pub fn e_series(node: Node, order: usize) -> SeriesX<SymFunc> {
    SeriesX::from_fn(order, |r| e(node, r as u32))
}

pub fn h_series(node: Node, order: usize) -> SeriesX<SymFunc> {
    SeriesX::from_fn(order, |r| h(node, r as u32))
}

/// `Π_{z}(1 + z x)` over the given values.
pub fn product_series(vals: &[Q], order: usize) -> SeriesX<Q> {
    SeriesX::from_fn(order, |r| elementary_value(vals, r))
}

/// `Π_{z}(1 − z x)^{−1}` over the given values.
pub fn inverse_product_series(vals: &[Q], order: usize) -> SeriesX<Q> {
    let mut out = SeriesX::one(order);
    for z in vals {
        out = out.mul(&SeriesX::from_fn(order, |r| {
            let mut v = q(1);
            for _ in 0..r {
                v *= z;
            }
            v
        }));
    }
    out
}

/// Parses the textual form, e.g. `3*e[i=1,r=2]*e[i=2,r=1] + -1/2*e[i=1,r=1]^2`.
pub fn parse_symfunc(s: &str) -> Result<SymFunc> {
    let bad = |m: &str| Error::Parse(format!("{m} in `{s}`"));
    let mut out = SymFunc::zero();
    if s.trim() == "0" {
        return Ok(out);
    }
    for term in s.split(" + ") {
        let mut coeff = q(1);
        let mut pairs = Vec::new();
        for factor in term.trim().split('*') {
            let factor = factor.trim();
            if let Some(rest) = factor.strip_prefix("e[") {
                let (body, tail) = rest.split_once(']').ok_or_else(|| bad("unterminated generator"))?;
                let mut node = None;
                let mut r = None;
                for kv in body.split(',') {
                    match kv.split_once('=') {
                        Some(("i", v)) => node = v.trim().parse::<usize>().ok(),
                        Some(("r", v)) => r = v.trim().parse::<u32>().ok(),
                        _ => return Err(bad("bad generator field")),
                    }
                }
                let (node, r) = (node.ok_or_else(|| bad("missing i"))?, r.ok_or_else(|| bad("missing r"))?);
                let power = match tail.strip_prefix('^') {
                    Some(x) => x.parse::<u32>().map_err(|_| bad("bad exponent"))?,
                    None if tail.is_empty() => 1,
                    None => return Err(bad("trailing characters")),
                };
                if r == 0 {
                    continue;
                }
                pairs.push((EVar { node, r }, power));
            } else {
                coeff *= parse_q(factor)?;
            }
        }
        out.add_term(coeff, Monomial::from_pairs(pairs));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use proptest::prelude::*;

    fn ev(r: u32) -> SymFunc {
        e(1, r)
    }

    #[test]
    fn conversion_examples() {
        assert_eq!(p(1, 1), ev(1));
        assert_eq!(h(1, 2), ev(1).pow(2).sub(&ev(2)));
        let e2 = convert(&ev(2), Basis::P);
        let p1 = BasisExpansion::var(BasisVar { basis: Basis::P, node: 1, r: 1 });
        let p2 = BasisExpansion::var(BasisVar { basis: Basis::P, node: 1, r: 2 });
        assert_eq!(e2, p1.pow(2).sub(&p2).scale(&qf(1, 2)));
    }

    #[test]
    fn coproduct_examples() {
        let t = coproduct(&ev(2));
        let one = SymFunc::one();
        let expect = in_slot(&ev(2), 0).add(&in_slot(&ev(1), 0).mul(&in_slot(&ev(1), 1))).add(&in_slot(&ev(2), 1));
        assert_eq!(t, expect);
        assert_eq!(coproduct(&one), SymTensor::one());
        for r in 1..6 {
            assert_eq!(coproduct(&p(1, r)), in_slot(&p(1, r), 0).add(&in_slot(&p(1, r), 1)));
        }
    }

    #[test]
    fn projection_examples() {
        let lam = WeightList::new(vec![Weight(vec![2])]);
        assert!(lam.project_a(1, &ev(3)).unwrap().is_zero());
        assert_eq!(lam.project_a(1, &SymFunc::one()).unwrap(), APoly::one());
        let a1 = APoly::var(AVar { factor: 1, node: 1, r: 1 });
        let a2 = APoly::var(AVar { factor: 1, node: 1, r: 2 });
        let expect = a1.pow(3).sub(&a1.mul(&a2).scale(&q(2)));
        assert_eq!(lam.project_a(1, &h(1, 3)).unwrap(), expect);
        assert!(lam.project_a(2, &ev(1)).is_err());
    }

    #[test]
    fn specialization_examples() {
        let lam = WeightList::new(vec![Weight(vec![2])]);
        let z = |j| ZVar { factor: 1, node: 1, index: j };
        let a1 = APoly::var(AVar { factor: 1, node: 1, r: 1 });
        let a2 = APoly::var(AVar { factor: 1, node: 1, r: 2 });
        let zero: BTreeMap<ZVar, Q> = [(z(1), q(0)), (z(2), q(0))].into();
        let vals: BTreeMap<ZVar, Q> = [(z(1), q(1)), (z(2), q(2))].into();
        assert_eq!(lam.specialize(&a1, &zero).unwrap(), q(0));
        assert_eq!(lam.specialize(&a1, &vals).unwrap(), q(3));
        assert_eq!(lam.specialize(&a2, &vals).unwrap(), q(2));
        let partial: BTreeMap<ZVar, Q> = [(z(1), q(1))].into();
        assert!(matches!(lam.specialize(&a1, &partial), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn grassmannian_series_identity() {
        for order in [0, 1, 5, 10] {
            let prod = h_series(1, order).mul(&e_series(1, order).negate_x());
            assert!(prod.is_one(), "order {order}");
        }
    }

    #[test]
    fn a_dims() {
        let lam = WeightList::new(vec![Weight(vec![2])]);
        let dims: Vec<u64> = (0..8).map(|d| lam.a_dim(d)).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 2, 0, 2, 0]);
    }

    #[test]
    fn text_round_trip() {
        let f = parse_symfunc("3*e[i=1,r=2]*e[i=2,r=1]").unwrap();
        assert_eq!(f, e(1, 2).mul(&e(2, 1)).scale(&q(3)));
        assert_eq!(f.to_string(), "3*e[i=1,r=2]*e[i=2,r=1]");
        let g = h(1, 3).add(&p(2, 2));
        assert_eq!(parse_symfunc(&g.to_string()).unwrap(), g);
        assert!(parse_symfunc("e[i=1").is_err());
    }

    fn arb_sym() -> impl Strategy<Value = SymFunc> {
        proptest::collection::vec((1usize..3, 1u32..4, 0u32..3, -3i64..4), 0..4).prop_map(|ts| {
            let mut f = SymFunc::zero();
            for (node, r, k, c) in ts {
                f.add_scaled(&q(c), &e(node, r).pow(k));
            }
            f
        })
    }

    proptest! {
        #[test]
        fn basis_round_trips(f in arb_sym()) {
            for b in [Basis::P, Basis::E, Basis::H] {
                prop_assert_eq!(from_basis(&convert(&f, b)), f.clone());
            }
        }

        #[test]
        fn coproduct_is_multiplicative(f in arb_sym(), g in arb_sym()) {
            prop_assert_eq!(coproduct(&f.mul(&g)), coproduct(&f).mul(&coproduct(&g)));
        }

        #[test]
        fn coproduct_is_coassociative(f in arb_sym()) {
            let d = coproduct(&f);
            prop_assert_eq!(split_slot(&d, 0), split_slot(&d, 1));
        }

        #[test]
        fn projection_is_multiplicative(f in arb_sym(), g in arb_sym(), l1 in 0i64..3, l2 in 0i64..3) {
            let lam = WeightList::new(vec![Weight(vec![l1, l2])]);
            let lhs = lam.project_a(1, &f.mul(&g)).unwrap();
            let rhs = lam.project_a(1, &f).unwrap().mul(&lam.project_a(1, &g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn finite_variable_series(a in -4i64..5, b in -4i64..5) {
            let lam = WeightList::new(vec![Weight(vec![2])]);
            let z = |j| ZVar { factor: 1, node: 1, index: j };
            let vals: BTreeMap<ZVar, Q> = [(z(1), q(a)), (z(2), q(b))].into();
            let order = 8;
            let es = e_series(1, order).map(|f| lam.specialize(&lam.project_a(1, f).unwrap(), &vals).unwrap());
            let hs = h_series(1, order).map(|f| lam.specialize(&lam.project_a(1, f).unwrap(), &vals).unwrap());
            prop_assert_eq!(es, product_series(&[q(a), q(b)], order));
            prop_assert_eq!(hs, inverse_product_series(&[q(a), q(b)], order));
        }
    }
}
