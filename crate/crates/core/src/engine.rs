//! Polynomial representation shared by the diagram algebras.
//!
//! Black strands in a slice are numbered left to right and carry the variables
//! `y_0, …, y_{m-1}`; further variables hold deformation parameters. Every
//! elementary diagram acts on `ℚ[y, params]` by one of the operators in [`Op`].

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// Largest number of polynomial variables a single computation may use.
pub const MAX_VARS: usize = 12;

pub type Exp = [u8; MAX_VARS];

const OVERFLOW: &str = "integer coefficient overflow in the polynomial representation";

pub fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        Err(Error::TooManyVariables(n))
    } else {
        Ok(())
    }
}

pub fn exp_from(values: &[u8]) -> Exp {
    let mut e = [0u8; MAX_VARS];
    e[..values.len()].copy_from_slice(values);
    e
}

pub fn exp_mul(a: &Exp, b: &Exp) -> Exp {
    let mut e = *a;
    for (x, y) in e.iter_mut().zip(b) {
        *x = x.checked_add(*y).expect("exponent overflow");
    }
    e
}

/// Sparse polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FPoly {
    terms: BTreeMap<Exp, i128>,
}

impl FPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial([0; MAX_VARS], 1)
    }

    pub fn monomial(e: Exp, c: i128) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &i128)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> i128 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Exp, c: i128) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot = slot.checked_add(c).expect(OVERFLOW);
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, c: i128, other: &FPoly) {
        for (e, x) in &other.terms {
            self.add_term(*e, c.checked_mul(*x).expect(OVERFLOW));
        }
    }

    pub fn scale(&self, c: i128) -> FPoly {
        let mut out = FPoly::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn mul(&self, other: &FPoly) -> FPoly {
        let mut out = FPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(exp_mul(a, b), x.checked_mul(*y).expect(OVERFLOW));
            }
        }
        out
    }

    pub fn mul_monomial(&self, e: &Exp) -> FPoly {
        FPoly { terms: self.terms.iter().map(|(a, x)| (exp_mul(a, e), *x)).collect() }
    }

    /// Exchanges variables `a` and `b`.
    pub fn swap(&self, a: usize, b: usize) -> FPoly {
        FPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| {
                    let mut e = *e;
                    e.swap(a, b);
                    (e, *x)
                })
                .collect(),
        }
    }

    /// Divided difference `(f − s f) / (y_a − y_b)`.
    pub fn demazure(&self, a: usize, b: usize) -> FPoly {
        let mut out = FPoly::zero();
        for (e, x) in &self.terms {
            let (p, q) = (e[a], e[b]);
            if p == q {
                continue;
            }
            let (lo, hi, sign) = if p > q { (q, p, 1) } else { (p, q, -1) };
            for u in 0..(hi - lo) {
                let mut f = *e;
                f[a] = lo + u;
                f[b] = lo + (hi - lo - 1 - u);
                out.add_term(f, sign * x);
            }
        }
        out
    }

    /// Substitutes integer values for the variables flagged in `values`.
    pub fn evaluate_vars(&self, values: &[Option<i128>]) -> FPoly {
        let mut out = FPoly::zero();
        for (e, x) in &self.terms {
            let mut e = *e;
            let mut c = *x;
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    c = c.checked_mul(v.checked_pow(e[i] as u32).expect(OVERFLOW)).expect(OVERFLOW);
                    e[i] = 0;
                }
            }
            out.add_term(e, c);
        }
        out
    }

    pub fn degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms.keys().map(|e| weighted(e, weights)).max()
    }

    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        let mut it = self.terms.keys().map(|e| weighted(e, weights));
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }
}

pub fn weighted(e: &Exp, weights: &[i64]) -> i64 {
    e.iter().zip(weights).map(|(a, w)| *a as i64 * w).sum()
}

/// Elementary symmetric polynomial `e_r` in the listed variables.
pub fn elementary(vars: &[usize], r: usize) -> FPoly {
    fn rec(vars: &[usize], r: usize, start: usize, cur: &mut Exp, out: &mut FPoly) {
        if r == 0 {
            out.add_term(*cur, 1);
            return;
        }
        for k in start..vars.len() {
            if vars.len() - k < r {
                break;
            }
            cur[vars[k]] += 1;
            rec(vars, r - 1, k + 1, cur, out);
            cur[vars[k]] -= 1;
        }
    }
    let mut out = FPoly::zero();
    rec(vars, r, 0, &mut [0; MAX_VARS], &mut out);
    out
}

/// Action of one elementary diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Identity,
    MulVar(usize),
    /// Exchange `y_l` and `y_{l+1}`.
    Swap(usize),
    /// `f ↦ g · s_l f`.
    SwapTimes(usize, FPoly),
    /// Divided difference in `y_l, y_{l+1}`.
    Demazure(usize),
    MulPoly(FPoly),
}

impl Op {
    pub fn apply(&self, f: &FPoly) -> FPoly {
        match self {
            Op::Identity => f.clone(),
            Op::MulVar(j) => {
                let mut e = [0; MAX_VARS];
                e[*j] = 1;
                f.mul_monomial(&e)
            }
            Op::Swap(l) => f.swap(*l, l + 1),
            Op::SwapTimes(l, g) => g.mul(&f.swap(*l, l + 1)),
            Op::Demazure(l) => f.demazure(*l, l + 1),
            Op::MulPoly(g) => g.mul(f),
        }
    }
}

pub fn apply_ops(ops: &[Op], f: &FPoly) -> FPoly {
    ops.iter().fold(f.clone(), |acc, op| op.apply(&acc))
}

/// Test monomials `y^t` on which an operator linear over the label-symmetric
/// polynomials is determined: within each label group the `s`-th strand gets
/// an exponent below `s + 1`.
pub fn artin_tests(labels: &[usize]) -> Vec<Exp> {
    let mut bounds = Vec::with_capacity(labels.len());
    for (j, l) in labels.iter().enumerate() {
        bounds.push(labels[..j].iter().filter(|x| *x == l).count() as u8);
    }
    let mut out = vec![[0u8; MAX_VARS]];
    for (j, b) in bounds.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (*b as usize + 1));
        for e in &out {
            for v in 0..=*b {
                let mut f = *e;
                f[j] = v;
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// All exponent vectors on the first `n` variables with total degree `total`.
pub fn monomials_of_degree(n: usize, total: usize) -> Vec<Exp> {
    fn rec(n: usize, j: usize, left: usize, cur: &mut Exp, out: &mut Vec<Exp>) {
        if j + 1 == n {
            cur[j] = left as u8;
            out.push(*cur);
            cur[j] = 0;
            return;
        }
        for v in (0..=left).rev() {
            cur[j] = v as u8;
            rec(n, j + 1, left - v, cur, out);
        }
        cur[j] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push([0; MAX_VARS]);
        }
        return out;
    }
    rec(n, 0, total, &mut [0; MAX_VARS], &mut out);
    out
}

/// Applies compiled words to polynomials, memoizing the action on monomials.
#[derive(Default, Debug)]
pub struct WordEvaluator {
    words: Vec<Vec<Op>>,
    index: HashMap<Vec<Op>, usize>,
    cache: HashMap<(usize, Exp), FPoly>,
}

impl WordEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, ops: Vec<Op>) -> usize {
        if let Some(i) = self.index.get(&ops) {
            return *i;
        }
        let i = self.words.len();
        self.words.push(ops.clone());
        self.index.insert(ops, i);
        i
    }

    pub fn ops(&self, word: usize) -> &[Op] {
        &self.words[word]
    }

    pub fn apply_monomial(&mut self, word: usize, e: &Exp) -> FPoly {
        if let Some(p) = self.cache.get(&(word, *e)) {
            return p.clone();
        }
        let p = apply_ops(&self.words[word], &FPoly::monomial(*e, 1));
        self.cache.insert((word, *e), p.clone());
        p
    }

    pub fn apply(&mut self, word: usize, f: &FPoly) -> FPoly {
        let mut out = FPoly::zero();
        for (e, c) in f.terms() {
            let img = self.apply_monomial(word, e);
            out.add_scaled(*c, &img);
        }
        out
    }
}

/// Assigns dense column indices to sparse keys.
#[derive(Debug, Clone)]
pub struct KeyInterner<K: std::hash::Hash + Eq + Clone> {
    map: HashMap<K, u32>,
}

impl<K: std::hash::Hash + Eq + Clone> Default for KeyInterner<K> {
    fn default() -> Self {
        KeyInterner { map: HashMap::new() }
    }
}

impl<K: std::hash::Hash + Eq + Clone> KeyInterner<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, k: &K) -> u32 {
        if let Some(i) = self.map.get(k) {
            return *i;
        }
        let i = self.map.len() as u32;
        self.map.insert(k.clone(), i);
        i
    }

    pub fn lookup(&self, k: &K) -> Option<u32> {
        self.map.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn into_map(self) -> HashMap<K, u32> {
        self.map
    }
}

/// Sorts and merges `(column, value)` pairs into an integer sparse vector.
pub fn to_sparse(mut entries: Vec<(u32, i128)>) -> Vec<(u32, i128)> {
    entries.sort_unstable_by_key(|(k, _)| *k);
    let mut out: Vec<(u32, i128)> = Vec::with_capacity(entries.len());
    for (k, v) in entries {
        match out.last_mut() {
            Some((lk, lv)) if *lk == k => *lv = lv.checked_add(v).expect(OVERFLOW),
            _ => out.push((k, v)),
        }
    }
    out.retain(|(_, v)| *v != 0);
    out
}
