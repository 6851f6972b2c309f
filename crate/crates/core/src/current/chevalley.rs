use std::collections::HashMap;

use crate::cartan::{CartanDatum, Node, Weight};
use crate::error::{Error, Result};

/// Sparse combination of basis elements of the Lie algebra.
pub type LieVec = Vec<(usize, i64)>;

/// Chevalley basis of a simply-laced Lie algebra: `E_α` for every root `α`
/// followed by `h_1, …, h_r`. Signs come from the bimultiplicative cocycle with
/// `ε(α_i, α_i) = −1` and `ε(α_i, α_j) = −1` for adjacent `i < j`.
/// Then `[E_α, E_β] = ε(α, β) E_{α+β}` and `[E_α, E_{−α}] = −h_α`;
/// `e_i = E_{α_i}` and `f_i = −E_{−α_i}`.
#[derive(Clone, Debug)]
pub struct ChevalleyData {
    pub cartan: CartanDatum,
    /// All roots in simple-root coordinates: positive roots by height, then their negatives.
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    table: Vec<Vec<LieVec>>,
}

impl ChevalleyData {
    pub fn new(cartan: CartanDatum) -> Result<Self> {
        let r = cartan.rank;
        let mut positive: Vec<Vec<i64>> = (0..r).map(|i| unit(r, i)).collect();
        let mut k = 0;
        while k < positive.len() {
            let beta = positive[k].clone();
            for i in 0..r {
                // β + α_i is a root iff (β, α_i) = −1
                if pair(&cartan, &beta, &unit(r, i)) == -1 {
                    let mut g = beta.clone();
                    g[i] += 1;
                    if !positive.contains(&g) {
                        positive.push(g);
                    }
                }
            }
            k += 1;
        }
        positive.sort_by_key(|b| (b.iter().sum::<i64>(), std::cmp::Reverse(b.clone())));
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|b| b.iter().map(|x| -x).collect::<Vec<_>>()));
        let index: HashMap<Vec<i64>, usize> = roots.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
        let mut data = ChevalleyData { cartan, roots, index, table: Vec::new() };
        let dim = data.dim();
        data.table = (0..dim).map(|a| (0..dim).map(|b| data.compute_bracket(a, b)).collect()).collect();
        data.self_test()?;
        Ok(data)
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    pub fn dim(&self) -> usize {
        self.roots.len() + self.rank()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.roots.len() / 2]
    }

    /// Root of `E_α` in simple-root coordinates, or `None` for a Cartan element.
    pub fn root(&self, a: usize) -> Option<&[i64]> {
        self.roots.get(a).map(|v| v.as_slice())
    }

    /// Root coordinates of the weight of basis element `a` (zero on the Cartan).
    pub fn root_weight(&self, a: usize) -> Vec<i64> {
        self.root(a).map_or_else(|| vec![0; self.rank()], |v| v.to_vec())
    }

    pub fn root_index(&self, alpha: &[i64]) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    pub fn e(&self, i: Node) -> usize {
        self.root_index(&unit(self.rank(), i - 1)).expect("simple root")
    }

    /// Index of `E_{−α_i}`; note `f_i = −E_{−α_i}`.
    pub fn f_root(&self, i: Node) -> usize {
        self.root_index(&unit(self.rank(), i - 1).iter().map(|x| -x).collect::<Vec<_>>()).expect("simple root")
    }

    pub fn h(&self, i: Node) -> usize {
        self.roots.len() + i - 1
    }

    pub fn is_negative(&self, a: usize) -> bool {
        self.root(a).is_some_and(|v| v.iter().any(|x| *x < 0))
    }

    pub fn is_cartan(&self, a: usize) -> bool {
        a >= self.roots.len()
    }

    pub fn name(&self, a: usize) -> String {
        match self.root(a) {
            Some(v) => format!("E{v:?}"),
            None => format!("h{}", a - self.roots.len() + 1),
        }
    }

    fn cocycle(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut odd = 0;
        for i in 0..a.len() {
            for j in 0..b.len() {
                if i == j || (i < j && self.cartan.a(i + 1, j + 1) == -1) {
                    odd += a[i] * b[j];
                }
            }
        }
        if odd.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    fn compute_bracket(&self, a: usize, b: usize) -> LieVec {
        let n = self.roots.len();
        match (a < n, b < n) {
            (false, false) => Vec::new(),
            (false, true) => {
                let c = pair_coroot(&self.cartan, a - n, &self.roots[b]);
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(b, c)]
                }
            }
            (true, false) => self.compute_bracket(b, a).into_iter().map(|(k, c)| (k, -c)).collect(),
            (true, true) => {
                let (x, y) = (&self.roots[a], &self.roots[b]);
                let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                if s.iter().all(|v| *v == 0) {
                    // −h_α = −Σ α_i h_i
                    x.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (n + i, -c)).collect()
                } else if let Some(k) = self.root_index(&s) {
                    vec![(k, self.cocycle(x, y))]
                } else {
                    Vec::new()
                }
            }
        }
    }

    pub fn bracket(&self, a: usize, b: usize) -> &LieVec {
        &self.table[a][b]
    }

    fn bracket_vec(&self, x: &LieVec, y: &LieVec) -> Vec<i64> {
        let mut out = vec![0; self.dim()];
        for (a, c) in x {
            for (b, d) in y {
                for (k, e) in self.bracket(*a, *b) {
                    out[*k] += c * d * e;
                }
            }
        }
        out
    }

    /// Jacobi identity on all basis triples (when the algebra is small) and `[e_i, f_j] = δ_ij h_i`.
    pub fn self_test(&self) -> Result<()> {
        for i in self.cartan.nodes() {
            for j in self.cartan.nodes() {
                let v = self.bracket_vec(&vec![(self.e(i), 1)], &vec![(self.f_root(j), -1)]);
                let mut expect = vec![0; self.dim()];
                if i == j {
                    expect[self.h(i)] = 1;
                }
                if v != expect {
                    return Err(Error::Invalid(format!("[e_{i}, f_{j}] is wrong")));
                }
            }
        }
        if self.dim() > 80 {
            return Ok(());
        }
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                let ab: LieVec = self.bracket(a, b).clone();
                for c in 0..d {
                    let bc = self.bracket(b, c).clone();
                    let ca = self.bracket(c, a).clone();
                    let mut sum = self.bracket_vec(&ab, &vec![(c, 1)]);
                    let t = self.bracket_vec(&bc, &vec![(a, 1)]);
                    let u = self.bracket_vec(&ca, &vec![(b, 1)]);
                    for k in 0..d {
                        sum[k] += t[k] + u[k];
                    }
                    if sum.iter().any(|x| *x != 0) {
                        return Err(Error::Invalid(format!("Jacobi fails on {a},{b},{c}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Root coordinates of `λ − w₀λ`, found by reflecting until antidominant.
    pub fn lowest_weight_depth(&self, lambda: &Weight) -> Vec<i64> {
        let mut w = lambda.clone();
        let mut depth = vec![0; self.rank()];
        while let Some(i) = (0..self.rank()).find(|&i| w.0[i] > 0) {
            let k = w.0[i];
            depth[i] += k;
            w = &w - &(k * &self.cartan.alpha(i + 1));
        }
        depth
    }
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

fn pair(c: &CartanDatum, x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] * c.a(i + 1, j + 1) * y[j];
        }
    }
    s
}

/// `⟨α_i^∨, β⟩` for `β` in root coordinates, `i` zero-based.
fn pair_coroot(c: &CartanDatum, i: usize, beta: &[i64]) -> i64 {
    beta.iter().enumerate().map(|(j, b)| c.a(i + 1, j + 1) * b).sum()
}
