use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::cartan::{CartanDatum, Node, Weight};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::rational::Q;
use crate::stendhal::StendhalPair;
use crate::symfunc::WeightList;

/// `f_{i_1} ⋯ f_{i_s} v_λ`, stored as `[i_1, …, i_s]`.
pub type FWord = Vec<Node>;
/// Vector of `V(λ^{(1)}) ⊗ ⋯ ⊗ V(λ^{(n)})`, one word per factor.
pub type WordTensor = BTreeMap<Vec<FWord>, Q>;

/// Contravariant form on a highest weight module of highest weight `λ`,
/// `⟨v_λ, v_λ⟩ = 1` and `⟨f_j x, y⟩ = ⟨x, e_j y⟩`.
#[derive(Debug)]
pub struct ShapovalovForm {
    cartan: CartanDatum,
    lambda: Weight,
    memo: HashMap<(FWord, FWord), Q>,
}

impl ShapovalovForm {
    pub fn new(cartan: &CartanDatum, lambda: Weight) -> Result<Self> {
        if lambda.0.len() != cartan.rank {
            return Err(Error::Invalid(format!("{lambda} has the wrong rank")));
        }
        Ok(ShapovalovForm { cartan: cartan.clone(), lambda, memo: HashMap::new() })
    }

    /// `e_j f_{i_1} ⋯ f_{i_s} v = Σ_{p: i_p = j} ⟨j, λ − Σ_{q>p} α_{i_q}⟩ · (word without p)`.
    fn raise(&self, j: Node, w: &[Node]) -> Vec<(FWord, i64)> {
        let mut out = Vec::new();
        let mut mu = self.lambda.clone();
        for p in (0..w.len()).rev() {
            if w[p] == j {
                let c = mu.0[j - 1];
                if c != 0 {
                    let mut v = w.to_vec();
                    v.remove(p);
                    out.push((v, c));
                }
            }
            mu = &mu - &self.cartan.alpha(w[p]);
        }
        out
    }

    pub fn pair_words(&mut self, x: &[Node], y: &[Node]) -> Q {
        if x.len() != y.len() {
            return Q::zero();
        }
        if x.is_empty() {
            return Q::one();
        }
        let mut sx = x.to_vec();
        let mut sy = y.to_vec();
        sx.sort_unstable();
        sy.sort_unstable();
        if sx != sy {
            return Q::zero();
        }
        let key = (x.to_vec(), y.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut acc = Q::zero();
        for (w, c) in self.raise(x[0], y) {
            acc += self.pair_words(&x[1..], &w) * Q::from_integer(c.into());
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// Gram matrix on the given words.
    pub fn gram(&mut self, words: &[FWord]) -> Vec<Vec<Q>> {
        words.iter().map(|x| words.iter().map(|y| self.pair_words(x, y)).collect()).collect()
    }
}

/// Words in the `f_i` of total weight `ν = Σ c_i α_i`.
pub fn words_of_content(content: &[usize]) -> Vec<FWord> {
    let total: usize = content.iter().sum();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(total);
    let mut left = content.to_vec();
    fn rec(left: &mut [usize], cur: &mut FWord, total: usize, out: &mut Vec<FWord>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(i + 1);
                rec(left, cur, total, out);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    rec(&mut left, &mut cur, total, &mut out);
    out
}

/// `dim V(λ)_{λ−ν}` as the rank of the Gram matrix.
pub fn simple_weight_dim(cartan: &CartanDatum, lambda: &Weight, content: &[usize]) -> Result<usize> {
    let mut form = ShapovalovForm::new(cartan, lambda.clone())?;
    let words = words_of_content(content);
    let mut ech = Echelon::new();
    for row in form.gram(&words) {
        let v = row.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u32, c)).collect();
        ech.insert(&v);
    }
    Ok(ech.rank())
}

/// Weight multiplicities of `V(λ)` down to depth `max_depth`, by Gram ranks.
pub fn simple_character(cartan: &CartanDatum, lambda: &Weight, max_depth: usize) -> Result<BTreeMap<Weight, usize>> {
    let mut out = BTreeMap::new();
    let mut contents: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..cartan.rank {
        contents =
            contents.into_iter().flat_map(|c| (0..=max_depth).map(move |x| [c.clone(), vec![x]].concat())).collect();
    }
    for c in contents {
        if c.iter().sum::<usize>() > max_depth {
            continue;
        }
        let x = simple_weight_dim(cartan, lambda, &c)?;
        if x > 0 {
            let mut w = lambda.clone();
            for (i, k) in c.iter().enumerate() {
                w = &w - &(*k as i64 * &cartan.alpha(i + 1));
            }
            out.insert(w, x);
        }
    }
    Ok(out)
}

/// Symmetric and positive semidefinite, by a rational `LDLᵀ` with pivoting on the diagonal.
pub fn is_positive_semidefinite(g: &[Vec<Q>]) -> bool {
    let n = g.len();
    let mut a: Vec<Vec<Q>> = g.to_vec();
    for i in 0..n {
        for j in 0..n {
            if a[i][j] != a[j][i] {
                return false;
            }
        }
    }
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        let Some(&p) = alive.iter().find(|&&i| !a[i][i].is_zero()) else {
            return alive.iter().all(|&i| alive.iter().all(|&j| a[i][j].is_zero()));
        };
        if a[p][p] < Q::zero() {
            return false;
        }
        let piv = a[p][p].clone();
        alive.retain(|&i| i != p);
        for &i in &alive {
            let f = &a[i][p] / &piv;
            if f.is_zero() {
                continue;
            }
            for &j in &alive {
                let d = &f * &a[p][j];
                a[i][j] -= d;
            }
        }
    }
    true
}

/// The vector attached to a Stendhal pair: strands are read right to left and a
/// strand with `k` red strings to its right applies `Σ_{l≤k} f_i` on factor `l`.
/// Factor `l` belongs to red string `(l)`.
pub fn stendhal_vector(pair: &StendhalPair) -> WordTensor {
    let n = pair.n();
    let mut v: WordTensor = [(vec![Vec::new(); n], Q::one())].into();
    for j in (0..pair.m()).rev() {
        let i = pair.labels[j];
        let k = pair.reds_right_of(j);
        let mut next = BTreeMap::new();
        for (ws, c) in &v {
            for l in 0..k {
                let mut key = ws.clone();
                key[l].insert(0, i);
                *next.entry(key).or_insert_with(Q::zero) += c;
            }
        }
        next.retain(|_, c: &mut Q| !c.is_zero());
        v = next;
    }
    v
}

/// Tensor product of the contravariant forms of the factors.
pub fn pair_tensors(cartan: &CartanDatum, lambdas: &WeightList, x: &WordTensor, y: &WordTensor) -> Result<Q> {
    let mut forms =
        lambdas.weights.iter().map(|l| ShapovalovForm::new(cartan, l.clone())).collect::<Result<Vec<_>>>()?;
    let mut acc = Q::zero();
    for (wx, cx) in x {
        for (wy, cy) in y {
            let mut prod = cx * cy;
            for (l, form) in forms.iter_mut().enumerate() {
                if prod.is_zero() {
                    break;
                }
                prod *= form.pair_words(&wx[l], &wy[l]);
            }
            acc += prod;
        }
    }
    Ok(acc)
}

/// `⟨v_S, v_{S'}⟩` in the tensor product of simple modules.
pub fn shapovalov_pair(cartan: &CartanDatum, lambdas: &WeightList, s: &StendhalPair, t: &StendhalPair) -> Result<Q> {
    if s.n() != lambdas.len() || t.n() != lambdas.len() {
        return Err(Error::ObjectMismatch(format!(
            "pairs with {} and {} red strings for {} weights",
            s.n(),
            t.n(),
            lambdas.len()
        )));
    }
    for &i in s.labels.iter().chain(&t.labels) {
        if i == 0 || i > cartan.rank {
            return Err(Error::UnknownNode(i));
        }
    }
    pair_tensors(cartan, lambdas, &stendhal_vector(s), &stendhal_vector(t))
}
