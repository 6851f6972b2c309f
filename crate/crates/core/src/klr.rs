//! KLR algebras over the rationals: the diagram basis, multiplication through the
//! faithful polynomial representation, and graded dimensions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Node};
use crate::engine::{artin_tests, check_vars, exp_from, monomials_of_degree, Exp, FPoly, KeyInterner, Op};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec, TrackedEchelon};
use crate::rational::{q, Q};

/// Operator of the crossing of black positions `l, l+1` whose bottom labels are `(a, b)`.
pub fn crossing_op(cartan: &CartanDatum, l: usize, a: Node, b: Node) -> Op {
    if a == b {
        Op::Demazure(l)
    } else if cartan.a(a, b) == 0 || a < b {
        Op::Swap(l)
    } else {
        // Q_{ba}(y_l, y_{l+1}) = t_{ba} y_l + t_{ab} y_{l+1}
        let mut g = FPoly::var(l).scale(cartan.scalar_t(b, a) as i128);
        g.add_scaled(cartan.scalar_t(a, b) as i128, &FPoly::var(l + 1));
        Op::SwapTimes(l, g)
    }
}

pub fn crossing_degree(cartan: &CartanDatum, a: Node, b: Node) -> i64 {
    -cartan.a(a, b)
}

/// Leftmost-first bubble sort word for `perm`, where `perm[p]` is the top
/// position of the strand starting at bottom position `p`.
pub fn lex_min_word(perm: &[usize]) -> Vec<usize> {
    let mut cur: Vec<usize> = (0..perm.len()).collect();
    let mut word = Vec::new();
    loop {
        let Some(l) = (0..perm.len().saturating_sub(1)).find(|&l| perm[cur[l]] > perm[cur[l + 1]]) else {
            break;
        };
        cur.swap(l, l + 1);
        word.push(l);
    }
    word
}

/// `ψ_w` followed by dots at the top of the strands.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KlrBasisElement {
    pub bottom: Vec<Node>,
    pub perm: Vec<usize>,
    pub dots: Vec<u8>,
}

impl KlrBasisElement {
    pub fn top(&self) -> Vec<Node> {
        let mut t = vec![0; self.bottom.len()];
        for (p, &w) in self.perm.iter().enumerate() {
            t[w] = self.bottom[p];
        }
        t
    }

    pub fn word(&self) -> Vec<usize> {
        lex_min_word(&self.perm)
    }

    pub fn degree(&self, cartan: &CartanDatum) -> i64 {
        let mut d = 2 * self.dots.iter().map(|x| *x as i64).sum::<i64>();
        let m = self.perm.len();
        for p in 0..m {
            for r in p + 1..m {
                if self.perm[p] > self.perm[r] {
                    d += crossing_degree(cartan, self.bottom[p], self.bottom[r]);
                }
            }
        }
        d
    }

    /// Operators applied bottom to top.
    pub fn ops(&self, cartan: &CartanDatum) -> Vec<Op> {
        let mut labels = self.bottom.clone();
        let mut ops = Vec::new();
        for l in self.word() {
            ops.push(crossing_op(cartan, l, labels[l], labels[l + 1]));
            labels.swap(l, l + 1);
        }
        for (j, &k) in self.dots.iter().enumerate() {
            for _ in 0..k {
                ops.push(Op::MulVar(j));
            }
        }
        ops
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..m {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Permutations `w` with `w(bottom) = top`.
pub fn matching_perms(bottom: &[Node], top: &[Node]) -> Vec<Vec<usize>> {
    if bottom.len() != top.len() {
        return Vec::new();
    }
    permutations(bottom.len()).into_iter().filter(|w| w.iter().enumerate().all(|(p, &t)| top[t] == bottom[p])).collect()
}

/// Linear combination of basis elements between fixed bottom and top sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlrElement {
    pub bottom: Vec<Node>,
    pub top: Vec<Node>,
    pub terms: BTreeMap<KlrBasisElement, Q>,
}

impl KlrElement {
    pub fn zero(bottom: Vec<Node>, top: Vec<Node>) -> Self {
        KlrElement { bottom, top, terms: BTreeMap::new() }
    }

    pub fn basis(b: KlrBasisElement) -> Self {
        let top = b.top();
        let bottom = b.bottom.clone();
        KlrElement { bottom, top, terms: [(b, q(1))].into() }
    }

    pub fn idempotent(seq: &[Node]) -> Self {
        Self::basis(KlrBasisElement { bottom: seq.to_vec(), perm: (0..seq.len()).collect(), dots: vec![0; seq.len()] })
    }

    pub fn dot(seq: &[Node], pos: usize) -> Self {
        let mut dots = vec![0; seq.len()];
        dots[pos] = 1;
        Self::basis(KlrBasisElement { bottom: seq.to_vec(), perm: (0..seq.len()).collect(), dots })
    }

    pub fn crossing(seq: &[Node], l: usize) -> Self {
        let mut perm: Vec<usize> = (0..seq.len()).collect();
        perm.swap(l, l + 1);
        Self::basis(KlrBasisElement { bottom: seq.to_vec(), perm, dots: vec![0; seq.len()] })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, c: &Q, other: &KlrElement) -> Result<()> {
        if self.bottom != other.bottom || self.top != other.top {
            return Err(Error::SequenceMismatch("addition needs equal bottom and top sequences".into()));
        }
        for (b, x) in &other.terms {
            let slot = self.terms.entry(b.clone()).or_insert_with(Q::zero);
            *slot += c * x;
            if slot.is_zero() {
                self.terms.remove(b);
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.bottom.clone(), self.top.clone());
        out.add_scaled(c, self).expect("same sequences");
        out
    }

    pub fn sub(&self, other: &KlrElement) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(&q(-1), other)?;
        Ok(out)
    }
}

struct Space {
    basis: Vec<KlrBasisElement>,
    keys: HashMap<(u32, Exp), u32>,
    solver: TrackedEchelon,
    rank: usize,
}

type SpaceKey = (Vec<Node>, Vec<Node>, i64);

/// KLR algebra of a Cartan datum, with a synchronized cache of per-degree solvers.
pub struct KlrAlgebra {
    pub cartan: CartanDatum,
    spaces: Mutex<HashMap<SpaceKey, Arc<Space>>>,
}

fn values_on_tests(ops: &[Op], tests: &[Exp]) -> Vec<FPoly> {
    tests.iter().map(|t| crate::engine::apply_ops(ops, &FPoly::monomial(*t, 1))).collect()
}

fn vectorize(values: &[FPoly], keys: &mut KeyInterner<(u32, Exp)>) -> SparseVec {
    let mut out: Vec<(u32, Q)> = Vec::new();
    for (t, f) in values.iter().enumerate() {
        for (e, c) in f.terms() {
            out.push((keys.get(&(t as u32, *e)), q(*c as i64)));
        }
    }
    out.sort_by_key(|(k, _)| *k);
    out
}

fn lookup(values: &[FPoly], keys: &HashMap<(u32, Exp), u32>) -> Option<SparseVec> {
    let mut out: Vec<(u32, Q)> = Vec::new();
    for (t, f) in values.iter().enumerate() {
        for (e, c) in f.terms() {
            out.push((*keys.get(&(t as u32, *e))?, Q::from_integer((*c).into())));
        }
    }
    out.sort_by_key(|(k, _)| *k);
    Some(out)
}

impl KlrAlgebra {
    pub fn new(cartan: CartanDatum) -> Self {
        KlrAlgebra { cartan, spaces: Mutex::new(HashMap::new()) }
    }

    /// Basis elements from `bottom` to `top` of degree `d`.
    pub fn basis(&self, bottom: &[Node], top: &[Node], d: i64) -> Vec<KlrBasisElement> {
        let m = bottom.len();
        let mut out = Vec::new();
        for perm in matching_perms(bottom, top) {
            let b0 = KlrBasisElement { bottom: bottom.to_vec(), perm: perm.clone(), dots: vec![0; m] };
            let rest = d - b0.degree(&self.cartan);
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            for e in monomials_of_degree(m, (rest / 2) as usize) {
                out.push(KlrBasisElement { dots: e[..m].to_vec(), ..b0.clone() });
            }
        }
        out
    }

    /// Number of basis elements `(w, a)` with `w(bottom) = top` in degree `d`.
    pub fn graded_dim(&self, bottom: &[Node], top: &[Node], d: i64) -> usize {
        self.basis(bottom, top, d).len()
    }

    /// Smallest degree of a basis element between the two sequences.
    pub fn min_degree(&self, bottom: &[Node], top: &[Node]) -> Option<i64> {
        matching_perms(bottom, top)
            .into_iter()
            .map(|perm| {
                KlrBasisElement { bottom: bottom.to_vec(), perm, dots: vec![0; bottom.len()] }.degree(&self.cartan)
            })
            .min()
    }

    fn space(&self, bottom: &[Node], top: &[Node], d: i64) -> Arc<Space> {
        let key = (bottom.to_vec(), top.to_vec(), d);
        if let Some(s) = self.spaces.lock().expect("cache poisoned").get(&key) {
            return s.clone();
        }
        let tests = artin_tests(bottom);
        let basis = self.basis(bottom, top, d);
        let mut interner = KeyInterner::new();
        let mut solver = TrackedEchelon::new();
        let mut rank = 0;
        for (idx, b) in basis.iter().enumerate() {
            let v = vectorize(&values_on_tests(&b.ops(&self.cartan), &tests), &mut interner);
            if solver.insert(v, Some(idx)) {
                rank += 1;
            }
        }
        let keys = interner_map(interner);
        let s = Arc::new(Space { basis, keys, solver, rank });
        self.spaces.lock().expect("cache poisoned").insert(key, s.clone());
        s
    }

    /// Rank of the basis of a degree piece inside the polynomial representation.
    pub fn representation_rank(&self, bottom: &[Node], top: &[Node], d: i64) -> usize {
        self.space(bottom, top, d).rank
    }

    fn check_size(&self, m: usize) -> Result<()> {
        check_vars(m)
    }

    /// Expresses the operator `ops` (from `bottom` to `top`, homogeneous of degree `d`) in the basis.
    fn express(&self, bottom: &[Node], top: &[Node], d: i64, ops: &[Op]) -> Result<KlrElement> {
        let space = self.space(bottom, top, d);
        let values = values_on_tests(ops, &artin_tests(bottom));
        let mut out = KlrElement::zero(bottom.to_vec(), top.to_vec());
        if values.iter().all(|v| v.is_zero()) {
            return Ok(out);
        }
        let v = lookup(&values, &space.keys)
            .ok_or_else(|| Error::Invalid("product escaped the span of the basis".into()))?;
        let coords = space
            .solver
            .coordinates(v)
            .ok_or_else(|| Error::Invalid("product escaped the span of the basis".into()))?;
        for (idx, c) in coords {
            out.terms.insert(space.basis[idx].clone(), c);
        }
        Ok(out)
    }

    /// `x · y`: `y` below `x`.
    pub fn multiply(&self, x: &KlrElement, y: &KlrElement) -> Result<KlrElement> {
        if y.top != x.bottom {
            return Err(Error::SequenceMismatch(format!("top {:?} does not match bottom {:?}", y.top, x.bottom)));
        }
        self.check_size(y.bottom.len())?;
        let mut out = KlrElement::zero(y.bottom.clone(), x.top.clone());
        for (bx, cx) in &x.terms {
            let ox = bx.ops(&self.cartan);
            for (by, cy) in &y.terms {
                let mut ops = by.ops(&self.cartan);
                ops.extend(ox.iter().cloned());
                let d = bx.degree(&self.cartan) + by.degree(&self.cartan);
                let prod = self.express(&y.bottom, &x.top, d, &ops)?;
                out.add_scaled(&(cx * cy), &prod)?;
            }
        }
        Ok(out)
    }

    /// Rank of all products `b1 · b2` through every middle sequence, degree `d`.
    pub fn product_span_rank(&self, bottom: &[Node], top: &[Node], d: i64, middles: &[Vec<Node>]) -> usize {
        let tests = artin_tests(bottom);
        let mut keys = KeyInterner::new();
        let mut ech = Echelon::new();
        for mid in middles {
            let (Some(lo1), Some(lo2)) = (self.min_degree(mid, top), self.min_degree(bottom, mid)) else {
                continue;
            };
            let mut d1 = lo1;
            while d - d1 >= lo2 {
                for b1 in self.basis(mid, top, d1) {
                    let o1 = b1.ops(&self.cartan);
                    for b2 in self.basis(bottom, mid, d - d1) {
                        let mut ops = b2.ops(&self.cartan);
                        ops.extend(o1.iter().cloned());
                        ech.insert(&vectorize(&values_on_tests(&ops, &tests), &mut keys));
                    }
                }
                d1 += 1;
            }
        }
        ech.rank()
    }
}

fn interner_map(k: KeyInterner<(u32, Exp)>) -> HashMap<(u32, Exp), u32> {
    k.into_map()
}

/// All sequences in `I^m`.
pub fn all_sequences(cartan: &CartanDatum, m: usize) -> Vec<Vec<Node>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|s: Vec<Node>| cartan.nodes().map(move |i| [s.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

/// Rearrangements of `seq`, sorted and deduplicated.
pub fn rearrangements(seq: &[Node]) -> Vec<Vec<Node>> {
    let mut out: Vec<Vec<Node>> =
        permutations(seq.len()).into_iter().map(|w| w.iter().map(|&p| seq[p]).collect()).collect();
    out.sort();
    out.dedup();
    out
}

pub fn dot_exponents(dots: &[u8]) -> Exp {
    exp_from(dots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(t: &str) -> KlrAlgebra {
        KlrAlgebra::new(CartanDatum::new(t).unwrap())
    }

    fn mul(a: &KlrAlgebra, x: &KlrElement, y: &KlrElement) -> KlrElement {
        a.multiply(x, y).unwrap()
    }

    #[test]
    fn idempotents_are_orthogonal() {
        let a = alg("A2");
        let e1 = KlrElement::idempotent(&[1]);
        assert_eq!(mul(&a, &e1, &e1), e1);
        let e2 = KlrElement::idempotent(&[2]);
        assert!(matches!(a.multiply(&e1, &e2), Err(Error::SequenceMismatch(_))));
    }

    #[test]
    fn double_crossings() {
        let a = alg("A3");
        let s = [1, 3];
        let psi = KlrElement::crossing(&s, 0);
        let back = KlrElement::crossing(&[3, 1], 0);
        assert_eq!(mul(&a, &back, &psi), KlrElement::idempotent(&s));
        let s = [1, 2];
        let psi = KlrElement::crossing(&s, 0);
        let back = KlrElement::crossing(&[2, 1], 0);
        let c = &a.cartan;
        let mut expect = KlrElement::dot(&s, 0).scale(&q(c.scalar_t(1, 2)));
        expect.add_scaled(&q(c.scalar_t(2, 1)), &KlrElement::dot(&s, 1)).unwrap();
        assert_eq!(mul(&a, &back, &psi), expect);
        let s = [1, 1];
        let psi = KlrElement::crossing(&s, 0);
        assert!(mul(&a, &psi, &psi).is_zero());
    }

    #[test]
    fn nil_hecke_relation() {
        // y_1 ψ − ψ y_2 = e on equal labels
        let a = alg("A1");
        let s = [1, 1];
        let psi = KlrElement::crossing(&s, 0);
        let lhs = mul(&a, &KlrElement::dot(&s, 0), &psi).sub(&mul(&a, &psi, &KlrElement::dot(&s, 1))).unwrap();
        assert_eq!(lhs, KlrElement::idempotent(&s));
        let lhs = mul(&a, &psi, &KlrElement::dot(&s, 0)).sub(&mul(&a, &KlrElement::dot(&s, 1), &psi)).unwrap();
        assert_eq!(lhs, KlrElement::idempotent(&s));
    }

    #[test]
    fn braid_deviation() {
        let a = alg("A2");
        for (i, j) in [(1, 2), (2, 1)] {
            let s = [i, j, i];
            let p = |seq: &[Node], l| KlrElement::crossing(seq, l);
            let lhs = mul(&a, &p(&[j, i, i], 0), &mul(&a, &p(&[j, i, i], 1), &p(&s, 0)));
            let rhs = mul(&a, &p(&[i, i, j], 1), &mul(&a, &p(&[i, i, j], 0), &p(&s, 1)));
            let diff = lhs.sub(&rhs).unwrap();
            assert_eq!(diff, KlrElement::idempotent(&s).scale(&q(a.cartan.scalar_t(i, j))));
        }
    }

    #[test]
    fn graded_dimension_examples() {
        let a1 = alg("A1");
        assert_eq!(a1.graded_dim(&[1], &[1], 0), 1);
        assert_eq!(a1.graded_dim(&[1, 1], &[1, 1], -2), 1);
        let a2 = alg("A2");
        assert_eq!(a2.graded_dim(&[1, 2], &[2, 1], 1), 1);
    }

    #[test]
    fn basis_is_independent_and_closed() {
        let a = alg("A2");
        for bottom in all_sequences(&a.cartan, 2) {
            for top in rearrangements(&bottom) {
                for d in -2..=4 {
                    let n = a.graded_dim(&bottom, &top, d);
                    assert_eq!(a.representation_rank(&bottom, &top, d), n);
                    let mids = rearrangements(&bottom);
                    assert_eq!(a.product_span_rank(&bottom, &top, d, &mids), n);
                }
            }
        }
    }
}
