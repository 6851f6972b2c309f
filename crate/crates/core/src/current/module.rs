use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::chevalley::ChevalleyData;
use crate::cartan::{Node, Weight};
use crate::error::{Error, Result};
use crate::linalg::{SparseVec, TrackedEchelon};
use crate::rational::Q;
use crate::symfunc::{convert, Basis, SymFunc};

/// `x ⊗ t^t` for a Chevalley basis element `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurrentGen {
    pub basis: usize,
    pub t: u32,
}

/// Normal-ordered monomial in lowering generators, as sorted generator codes.
pub type Mono = Vec<u32>;
/// Vector of an enumerated module in monomial coordinates.
pub type ModVec = BTreeMap<Mono, Q>;
/// `(weight, degree) → dimension`.
pub type Character = BTreeMap<(Weight, i64), usize>;

/// What the enumeration window certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilization {
    pub weights_complete: bool,
    /// No nonzero piece in the top two degrees of the window.
    pub degree_tail_vanishes: bool,
}

impl Stabilization {
    pub fn stabilized(&self) -> bool {
        self.weights_complete && self.degree_tail_vanishes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuleKind {
    /// Induced from the character `λ` of `𝔥 ⊕ 𝔫⁺[t]`; free over `U(𝔫⁻[t] ⊕ 𝔥t[t])`.
    Verma,
    /// Adds `f_i^{⟨i,λ⟩+1} m = 0`.
    GlobalWeyl,
    /// Also kills `(h ⊗ t^r) m` for `r ≥ 1`.
    LocalWeyl,
}

/// PBW straightening in the Verma-type module.
#[derive(Debug)]
struct Straightener {
    chev: Arc<ChevalleyData>,
    lambda: Vec<i64>,
    tmax: u32,
    memo: HashMap<(u32, Mono), Vec<(Mono, Q)>>,
}

impl Straightener {
    fn code(&self, g: CurrentGen) -> u32 {
        g.basis as u32 * (self.tmax + 1) + g.t
    }

    fn decode(&self, c: u32) -> CurrentGen {
        CurrentGen { basis: (c / (self.tmax + 1)) as usize, t: c % (self.tmax + 1) }
    }

    fn is_lowering(&self, c: u32) -> bool {
        let g = self.decode(c);
        self.chev.is_negative(g.basis) || (self.chev.is_cartan(g.basis) && g.t >= 1)
    }

    /// `[x, y]` as generator codes.
    fn bracket(&self, x: u32, y: u32) -> Vec<(u32, i64)> {
        let (gx, gy) = (self.decode(x), self.decode(y));
        let t = gx.t + gy.t;
        assert!(t <= self.tmax, "t-power beyond the degree cutoff");
        self.chev
            .bracket(gx.basis, gy.basis)
            .iter()
            .map(|(k, c)| (self.code(CurrentGen { basis: *k, t }), *c))
            .collect()
    }

    fn act(&mut self, x: u32, mono: &[u32]) -> Vec<(Mono, Q)> {
        if let Some(v) = self.memo.get(&(x, mono.to_vec())) {
            return v.clone();
        }
        let mut out: ModVec = BTreeMap::new();
        if mono.is_empty() {
            let g = self.decode(x);
            if self.is_lowering(x) {
                out.insert(vec![x], Q::one());
            } else if self.chev.is_cartan(g.basis) {
                let i = g.basis - self.chev.h(1);
                if self.lambda[i] != 0 {
                    out.insert(Vec::new(), Q::from_integer(self.lambda[i].into()));
                }
            }
        } else if self.is_lowering(x) && x <= mono[0] {
            let mut m = vec![x];
            m.extend_from_slice(mono);
            out.insert(m, Q::one());
        } else {
            let g1 = mono[0];
            let rest = &mono[1..];
            let inner = self.act(x, rest);
            for (m, c) in inner {
                for (m2, c2) in self.act(g1, &m) {
                    add(&mut out, m2, &(&c * &c2));
                }
            }
            for (y, c) in self.bracket(x, g1) {
                for (m2, c2) in self.act(y, rest) {
                    add(&mut out, m2, &(c2 * Q::from_integer(c.into())));
                }
            }
        }
        let v: Vec<(Mono, Q)> = out.into_iter().collect();
        self.memo.insert((x, mono.to_vec()), v.clone());
        v
    }

    fn act_vec(&mut self, x: u32, v: &ModVec) -> ModVec {
        let mut out = BTreeMap::new();
        for (m, c) in v {
            for (m2, c2) in self.act(x, m) {
                add(&mut out, m2, &(c * &c2));
            }
        }
        out
    }
}

fn add(v: &mut ModVec, m: Mono, c: &Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(m.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&m);
    }
}

#[derive(Debug)]
struct Space {
    monos: Vec<Mono>,
    index: HashMap<Mono, u32>,
    relations: TrackedEchelon,
}

type Key = (Vec<i64>, i64);

/// A cyclic graded module, enumerated on weights `λ − ν` with `ht ν ≤ max_depth`
/// and degrees `≤ max_degree`. Inside this window the computation is exact.
#[derive(Debug)]
pub struct CurrentModule {
    chev: Arc<ChevalleyData>,
    pub lambda: Weight,
    pub kind: ModuleKind,
    pub max_degree: i64,
    pub max_depth: i64,
    straight: Mutex<Straightener>,
    spaces: BTreeMap<Key, Space>,
}

impl CurrentModule {
    /// Default depth: enough to contain every weight of the local module.
    pub fn default_depth(chev: &ChevalleyData, lambda: &Weight) -> i64 {
        let sum: i64 = lambda.0.iter().sum();
        let low: i64 = chev.lowest_weight_depth(lambda).iter().sum();
        let top = lambda.0.iter().copied().max().unwrap_or(0);
        (sum + 2).max(low + 1).max(top + 1)
    }

    pub fn new(
        chev: Arc<ChevalleyData>,
        lambda: Weight,
        kind: ModuleKind,
        max_degree: i64,
        max_depth: Option<i64>,
    ) -> Result<Self> {
        if lambda.0.len() != chev.rank() || !lambda.is_dominant() {
            return Err(Error::Invalid(format!("{lambda} is not a dominant weight of rank {}", chev.rank())));
        }
        if max_degree < 0 {
            return Err(Error::Invalid("negative degree cutoff".into()));
        }
        let max_depth = max_depth.unwrap_or_else(|| Self::default_depth(&chev, &lambda));
        let tmax = (max_degree / 2) as u32;
        let straight = Straightener { chev: chev.clone(), lambda: lambda.0.clone(), tmax, memo: HashMap::new() };
        let mut module = CurrentModule {
            chev,
            lambda,
            kind,
            max_degree,
            max_depth,
            straight: Mutex::new(straight),
            spaces: BTreeMap::new(),
        };
        module.enumerate_monomials();
        let seeds = module.seeds();
        if kind != ModuleKind::Verma {
            for i in module.chev.cartan.nodes() {
                let k = module.lambda.0[i - 1] + 1;
                if k > module.max_depth {
                    return Err(Error::NotStabilized(format!(
                        "depth {} is below the integrability relation for node {i}",
                        module.max_depth
                    )));
                }
            }
        }
        module.close(seeds);
        Ok(module)
    }

    pub fn chevalley(&self) -> &ChevalleyData {
        &self.chev
    }

    fn tmax(&self) -> u32 {
        (self.max_degree / 2) as u32
    }

    pub fn code(&self, g: CurrentGen) -> u32 {
        self.straight.lock().expect("lock").code(g)
    }

    pub fn decode(&self, c: u32) -> CurrentGen {
        self.straight.lock().expect("lock").decode(c)
    }

    fn key_of(&self, m: &[u32]) -> Key {
        let mut nu = vec![0; self.chev.rank()];
        let mut d = 0;
        for &c in m {
            let g = self.decode(c);
            for (x, r) in nu.iter_mut().zip(self.chev.root_weight(g.basis)) {
                *x -= r;
            }
            d += 2 * g.t as i64;
        }
        (nu, d)
    }

    fn in_window(&self, key: &Key) -> bool {
        key.0.iter().all(|x| *x >= 0) && key.0.iter().sum::<i64>() <= self.max_depth && key.1 <= self.max_degree
    }

    fn enumerate_monomials(&mut self) {
        let tmax = self.tmax();
        let mut gens: Vec<(u32, Vec<i64>, i64)> = Vec::new();
        for a in 0..self.chev.dim() {
            for t in 0..=tmax {
                let c = self.code(CurrentGen { basis: a, t });
                if self.straight.lock().expect("lock").is_lowering(c) {
                    let nu: Vec<i64> = self.chev.root_weight(a).iter().map(|x| -x).collect();
                    gens.push((c, nu, 2 * t as i64));
                }
            }
        }
        gens.sort();
        let (h, dmax) = (self.max_depth, self.max_degree);
        let mut out: Vec<Mono> = Vec::new();
        fn rec(
            gens: &[(u32, Vec<i64>, i64)],
            start: usize,
            cur: &mut Mono,
            nu: i64,
            d: i64,
            h: i64,
            dmax: i64,
            out: &mut Vec<Mono>,
        ) {
            out.push(cur.clone());
            for k in start..gens.len() {
                let (c, v, dg) = &gens[k];
                let ht: i64 = v.iter().sum();
                if nu + ht > h || d + dg > dmax {
                    continue;
                }
                cur.push(*c);
                rec(gens, k, cur, nu + ht, d + dg, h, dmax, out);
                cur.pop();
            }
        }
        rec(&gens, 0, &mut Vec::new(), 0, 0, h, dmax, &mut out);
        for m in out {
            let key = self.key_of(&m);
            let space = self.spaces.entry(key).or_insert_with(|| Space {
                monos: Vec::new(),
                index: HashMap::new(),
                relations: TrackedEchelon::new(),
            });
            space.index.insert(m.clone(), space.monos.len() as u32);
            space.monos.push(m);
        }
    }

    fn seeds(&self) -> Vec<ModVec> {
        let mut out = Vec::new();
        if self.kind == ModuleKind::Verma {
            return out;
        }
        for i in self.chev.cartan.nodes() {
            let f = self.code(CurrentGen { basis: self.chev.f_root(i), t: 0 });
            let k = (self.lambda.0[i - 1] + 1) as usize;
            out.push([(vec![f; k], Q::one())].into());
        }
        if self.kind == ModuleKind::LocalWeyl {
            for i in self.chev.cartan.nodes() {
                for t in 1..=self.tmax() {
                    let h = self.code(CurrentGen { basis: self.chev.h(i), t });
                    out.push([(vec![h], Q::one())].into());
                }
            }
        }
        out
    }

    fn sparse(&self, key: &Key, v: &ModVec) -> SparseVec {
        let space = &self.spaces[key];
        let mut s: SparseVec = v.iter().map(|(m, c)| (space.index[m], c.clone())).collect();
        s.sort_by_key(|e| e.0);
        s
    }

    fn close(&mut self, seeds: Vec<ModVec>) {
        let mut queue: VecDeque<(Key, ModVec)> = VecDeque::new();
        let insert = |this: &mut CurrentModule, v: ModVec, queue: &mut VecDeque<(Key, ModVec)>| {
            let Some(m) = v.keys().next() else { return };
            let key = this.key_of(m);
            if !this.in_window(&key) {
                return;
            }
            let s = this.sparse(&key, &v);
            if this.spaces.get_mut(&key).expect("window space").relations.insert(s, None) {
                queue.push_back((key, v));
            }
        };
        for s in seeds {
            insert(self, s, &mut queue);
        }
        let tmax = self.tmax();
        while let Some((key, v)) = queue.pop_front() {
            for a in 0..self.chev.dim() {
                let nu: Vec<i64> = key.0.iter().zip(self.chev.root_weight(a)).map(|(x, r)| x - r).collect();
                for t in 0..=tmax {
                    let target = (nu.clone(), key.1 + 2 * t as i64);
                    if !self.in_window(&target) {
                        continue;
                    }
                    let x = self.code(CurrentGen { basis: a, t });
                    let w = self.straight.lock().expect("lock").act_vec(x, &v);
                    insert(self, w, &mut queue);
                }
            }
        }
    }

    fn weight_of(&self, nu: &[i64]) -> Weight {
        let mut w = self.lambda.clone();
        for (i, k) in nu.iter().enumerate() {
            w = &w - &(*k * &self.chev.cartan.alpha(i + 1));
        }
        w
    }

    fn key_for(&self, mu: &Weight, d: i64) -> Option<Key> {
        let nu = self.chev.cartan.root_coordinates(&(&self.lambda - mu))?;
        Some((nu, d))
    }

    pub fn dim(&self, mu: &Weight, d: i64) -> usize {
        self.key_for(mu, d).and_then(|k| self.spaces.get(&k)).map_or(0, |s| s.monos.len() - s.relations.rank())
    }

    /// Nonzero graded pieces inside the window.
    pub fn character(&self) -> Character {
        let mut out = BTreeMap::new();
        for ((nu, d), s) in &self.spaces {
            let x = s.monos.len() - s.relations.rank();
            if x > 0 {
                out.insert((self.weight_of(nu), *d), x);
            }
        }
        out
    }

    pub fn total_dim(&self) -> usize {
        self.character().values().sum()
    }

    /// Whether the enumeration covers the whole module.
    pub fn stabilization(&self) -> Stabilization {
        let ch = self.character();
        let tail = ch.keys().any(|(_, d)| *d >= self.max_degree - 1);
        Stabilization { weights_complete: self.weights_complete(), degree_tail_vanishes: !tail }
    }

    /// Every weight of the module lies inside the depth window.
    pub fn weights_complete(&self) -> bool {
        self.kind == ModuleKind::LocalWeyl
            && self.max_depth >= self.chev.lowest_weight_depth(&self.lambda).iter().sum::<i64>()
    }

    pub fn cyclic_vector(&self) -> ModVec {
        [(Vec::new(), Q::one())].into()
    }

    /// Standard monomials of a graded piece: a basis of the quotient.
    pub fn basis(&self, mu: &Weight, d: i64) -> Vec<ModVec> {
        let Some(key) = self.key_for(mu, d) else { return Vec::new() };
        let Some(space) = self.spaces.get(&key) else { return Vec::new() };
        space
            .monos
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let v: SparseVec = vec![(*i as u32, Q::one())];
                space.relations.remainder(v.clone()) == v
            })
            .map(|(_, m)| [(m.clone(), Q::one())].into())
            .collect()
    }

    fn check_room(&self, v: &ModVec, t: u32) -> Result<()> {
        match v.keys().map(|m| self.key_of(m).1).max() {
            Some(d) if d + 2 * t as i64 > self.max_degree => {
                Err(Error::Invalid(format!("degree {} exceeds the cutoff {}", d + 2 * t as i64, self.max_degree)))
            }
            _ => Ok(()),
        }
    }

    /// Canonical representative modulo the relations; errors outside the window.
    pub fn reduce(&self, v: &ModVec) -> Result<ModVec> {
        let mut by_key: BTreeMap<Key, ModVec> = BTreeMap::new();
        for (m, c) in v {
            by_key.entry(self.key_of(m)).or_default().insert(m.clone(), c.clone());
        }
        let mut out = BTreeMap::new();
        for (key, part) in by_key {
            if !self.in_window(&key) {
                return Err(Error::Invalid(format!(
                    "vector of depth {:?} and degree {} is outside the window",
                    key.0, key.1
                )));
            }
            let s = self.sparse(&key, &part);
            let space = &self.spaces[&key];
            for (i, c) in space.relations.remainder(s) {
                out.insert(space.monos[i as usize].clone(), c);
            }
        }
        Ok(out)
    }

    /// `(x ⊗ t^t) · v`, reduced.
    pub fn act(&self, x: CurrentGen, v: &ModVec) -> Result<ModVec> {
        if x.basis >= self.chev.dim() || x.t > self.tmax() {
            return Err(Error::Invalid(format!("generator {x:?} is outside the cutoff")));
        }
        self.check_room(v, x.t)?;
        let c = self.code(x);
        let w = self.straight.lock().expect("lock").act_vec(c, v);
        self.reduce(&w)
    }

    /// Right action of `p_{i,r}`: `(u m) · p_{i,r} = u (h_i ⊗ t^r) m`.
    pub fn pi_action(&self, v: &ModVec, i: Node, r: u32) -> Result<ModVec> {
        if i == 0 || i > self.chev.rank() {
            return Err(Error::UnknownNode(i));
        }
        if r == 0 {
            return Ok(BTreeMap::new());
        }
        if r > self.tmax() {
            return Err(Error::Invalid(format!("t^{r} is outside the degree cutoff")));
        }
        self.check_room(v, r)?;
        let h = self.code(CurrentGen { basis: self.chev.h(i), t: r });
        let mut out = BTreeMap::new();
        let mut st = self.straight.lock().expect("lock");
        for (m, c) in v {
            let mut w: ModVec = [(vec![h], Q::one())].into();
            for &g in m.iter().rev() {
                w = st.act_vec(g, &w);
            }
            for (m2, c2) in w {
                add(&mut out, m2, &(c * &c2));
            }
        }
        drop(st);
        self.reduce(&out)
    }

    /// Right action of a symmetric function, through its power-sum expansion.
    pub fn pi_action_sym(&self, v: &ModVec, f: &SymFunc) -> Result<ModVec> {
        let expansion = convert(f, Basis::P);
        let mut out = BTreeMap::new();
        for (mono, c) in expansion.terms() {
            let mut w = v.clone();
            for (var, k) in mono.factors() {
                for _ in 0..*k {
                    w = self.pi_action(&w, var.node, var.r)?;
                }
            }
            for (m, x) in w {
                add(&mut out, m, &(c * &x));
            }
        }
        self.reduce(&out)
    }
}

/// Character of a tensor product, truncated at `max_degree`.
pub fn tensor_character(chars: &[Character], rank: usize, max_degree: i64) -> Character {
    let mut acc: Character = [((Weight::zero(rank), 0), 1)].into();
    for ch in chars {
        let mut next = BTreeMap::new();
        for ((w1, d1), x1) in &acc {
            for ((w2, d2), x2) in ch {
                if d1 + d2 <= max_degree {
                    *next.entry((w1 + w2, d1 + d2)).or_insert(0) += x1 * x2;
                }
            }
        }
        acc = next;
    }
    acc
}

/// Vector in a tensor product of enumerated modules.
pub type TensorVec = BTreeMap<Vec<Mono>, Q>;

/// Tensor product of enumerated modules with the diagonal action.
#[derive(Debug)]
pub struct TensorModule {
    pub factors: Vec<CurrentModule>,
}

impl TensorModule {
    pub fn new(factors: Vec<CurrentModule>) -> Self {
        TensorModule { factors }
    }

    pub fn cyclic_vector(&self) -> TensorVec {
        [(vec![Vec::new(); self.factors.len()], Q::one())].into()
    }

    /// `x` acts by `Σ_k 1 ⊗ … ⊗ x ⊗ … ⊗ 1`.
    pub fn act(&self, x: CurrentGen, v: &TensorVec) -> Result<TensorVec> {
        let mut out = BTreeMap::new();
        for (ms, c) in v {
            for (k, f) in self.factors.iter().enumerate() {
                let img = f.act(x, &[(ms[k].clone(), Q::one())].into())?;
                for (m, c2) in img {
                    let mut key = ms.clone();
                    key[k] = m;
                    add_tensor(&mut out, key, &(c * &c2));
                }
            }
        }
        Ok(out)
    }

    pub fn character(&self) -> Character {
        let rank = self.factors.first().map_or(0, |f| f.chev.rank());
        let d = self.factors.iter().map(|f| f.max_degree).min().unwrap_or(0);
        tensor_character(&self.factors.iter().map(|f| f.character()).collect::<Vec<_>>(), rank, d)
    }

    /// Weight and degree of a pure tensor of monomials.
    pub fn key_of(&self, ms: &[Mono]) -> (Weight, i64) {
        let rank = self.factors.first().map_or(0, |f| f.chev.rank());
        let mut w = Weight::zero(rank);
        let mut d = 0;
        for (f, m) in self.factors.iter().zip(ms) {
            let (nu, e) = f.key_of(m);
            w = &w + &f.weight_of(&nu);
            d += e;
        }
        (w, d)
    }
}

fn add_tensor(v: &mut TensorVec, m: Vec<Mono>, c: &Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(m.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&m);
    }
}

/// A lowering monomial `f_{i_1}⊗t^{r_1} ⋯ f_{i_s}⊗t^{r_s}`, leftmost factor applied last.
pub type LoweringWord = Vec<(Node, u32)>;

/// `w(u_1, …, u_k) = u_k · (w(u_1, …, u_{k−1}) ⊗ w_{λ_k})` in the tensor product of
/// the first `k` factors; `us.len()` must equal the number of factors.
pub fn weyl_vector(t: &TensorModule, us: &[LoweringWord]) -> Result<TensorVec> {
    if us.len() != t.factors.len() {
        return Err(Error::Invalid("one lowering monomial per factor".into()));
    }
    let n = t.factors.len();
    let mut v: TensorVec = t.cyclic_vector();
    for k in 0..n {
        // act on the first k+1 factors only
        for &(i, r) in us[k].iter().rev() {
            let chev = &t.factors[0].chev;
            if i == 0 || i > chev.rank() {
                return Err(Error::UnknownNode(i));
            }
            // f_i = −E_{−α_i}
            let x = CurrentGen { basis: chev.f_root(i), t: r };
            let mut out = BTreeMap::new();
            for (ms, c) in &v {
                for j in 0..=k {
                    let img = t.factors[j].act(x, &[(ms[j].clone(), Q::one())].into())?;
                    for (m, c2) in img {
                        let mut key = ms.clone();
                        key[j] = m;
                        add_tensor(&mut out, key, &(-(c * &c2)));
                    }
                }
            }
            v = out;
        }
    }
    Ok(v)
}

/// Lowering words with total depth `≤ depth` and degree `≤ max_degree`.
pub fn lowering_words(rank: usize, depth: usize, max_degree: i64) -> Vec<LoweringWord> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 0i64)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (w, d) in &frontier {
            for i in 1..=rank {
                for r in 0..=((max_degree - d) / 2) as u32 {
                    let mut w2: LoweringWord = w.clone();
                    w2.push((i, r));
                    next.push((w2, d + 2 * r as i64));
                }
            }
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    out
}

/// The vectors `w(u_1, …, u_n)` span every graded piece of the tensor product
/// of depth `≤ depth` and degree `≤ max_degree`.
pub fn weyl_vectors_span(t: &TensorModule, depth: usize, max_degree: i64) -> Result<bool> {
    let rank = t.factors.first().map_or(0, |f| f.chev.rank());
    let words = lowering_words(rank, depth, max_degree);
    let n = t.factors.len();
    let mut tuples: Vec<(Vec<LoweringWord>, usize, i64)> = vec![(Vec::new(), 0, 0)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (tu, len, d) in &tuples {
            for w in &words {
                let dw: i64 = w.iter().map(|(_, r)| 2 * *r as i64).sum();
                if len + w.len() <= depth && d + dw <= max_degree {
                    let mut t2 = tu.clone();
                    t2.push(w.clone());
                    next.push((t2, len + w.len(), d + dw));
                }
            }
        }
        tuples = next;
    }
    let mut spaces: BTreeMap<(Weight, i64), (HashMap<Vec<Mono>, u32>, crate::linalg::Echelon)> = BTreeMap::new();
    for (tu, _, _) in tuples {
        let v = weyl_vector(t, &tu)?;
        let Some(first) = v.keys().next() else { continue };
        let key = t.key_of(first);
        let (index, ech) = spaces.entry(key).or_insert_with(|| (HashMap::new(), crate::linalg::Echelon::new()));
        let mut s: SparseVec = v
            .into_iter()
            .map(|(m, c)| {
                let k = index.len() as u32;
                (*index.entry(m).or_insert(k), c)
            })
            .collect();
        s.sort_by_key(|e| e.0);
        ech.insert(&s);
    }
    let ch = t.character();
    let lambda_total = t.factors.iter().fold(Weight::zero(rank), |acc, f| &acc + &f.lambda);
    let chev = &t.factors[0].chev;
    for ((w, d), x) in ch {
        let depth_of = chev.cartan.height(&(&lambda_total - &w)).unwrap_or(i64::MAX);
        if depth_of > depth as i64 || d > max_degree {
            continue;
        }
        let got = spaces.get(&(w.clone(), d)).map_or(0, |s| s.1.rank());
        if got != x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Graded character of `W(λ^{(1)}) ⊗ ⋯ ⊗ W(λ^{(n)})` up to `max_degree`.
pub fn weyl_graded_char(chev: &Arc<ChevalleyData>, lambdas: &[Weight], max_degree: i64) -> Result<Character> {
    let mut chars = Vec::new();
    for l in lambdas {
        let w = CurrentModule::new(chev.clone(), l.clone(), ModuleKind::LocalWeyl, max_degree, None)?;
        if !w.weights_complete() {
            return Err(Error::NotStabilized(format!("weights of W({l}) exceed the depth window")));
        }
        chars.push(w.character());
    }
    Ok(tensor_character(&chars, chev.rank(), max_degree))
}

/// `dim 𝕎(λ)_{μ,d} = Σ_{d'} dim W(λ)_{μ,d'} · dim 𝔸_{λ,d−d'}` on the window.
pub fn freeness_check(chev: &Arc<ChevalleyData>, lambda: &Weight, max_degree: i64) -> Result<bool> {
    let global = CurrentModule::new(chev.clone(), lambda.clone(), ModuleKind::GlobalWeyl, max_degree, None)?;
    let local = CurrentModule::new(chev.clone(), lambda.clone(), ModuleKind::LocalWeyl, max_degree, None)?;
    let a = crate::symfunc::WeightList::new(vec![lambda.clone()]);
    let lc = local.character();
    let mut weights: Vec<Weight> = lc.keys().map(|(w, _)| w.clone()).collect();
    weights.dedup();
    for w in weights {
        for d in 0..=max_degree {
            let expect: u64 = (0..=d).map(|e| local.dim(&w, e) as u64 * a.a_dim(d - e)).sum();
            if global.dim(&w, d) as u64 != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Quotienting the global module by the image of the right action of the
/// power sums recovers the local module, degree by degree.
pub fn local_from_global_check(chev: &Arc<ChevalleyData>, lambda: &Weight, max_degree: i64) -> Result<bool> {
    let global = CurrentModule::new(chev.clone(), lambda.clone(), ModuleKind::GlobalWeyl, max_degree, None)?;
    let local = CurrentModule::new(chev.clone(), lambda.clone(), ModuleKind::LocalWeyl, max_degree, None)?;
    let gc = global.character();
    for (w, d) in gc.keys() {
        let key = global.key_for(w, *d).expect("weight in the root lattice coset");
        let mut ech = crate::linalg::Echelon::new();
        for i in chev.cartan.nodes() {
            for r in 1..=(*d / 2) as u32 {
                for v in global.basis(w, d - 2 * r as i64) {
                    let img = global.pi_action(&v, i, r)?;
                    ech.insert(&global.sparse(&key, &img));
                }
            }
        }
        if global.dim(w, *d) - ech.rank() != local.dim(w, *d) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use crate::rational::q;

    fn chev(t: &str) -> Arc<ChevalleyData> {
        Arc::new(ChevalleyData::new(CartanDatum::new(t).unwrap()).unwrap())
    }

    fn nonzero(ch: &Character) -> Vec<((Vec<i64>, i64), usize)> {
        ch.iter().map(|((w, d), x)| ((w.0.clone(), *d), *x)).collect()
    }

    #[test]
    fn local_weyl_modules_of_sl2() {
        let c = chev("A1");
        let w1 = CurrentModule::new(c.clone(), Weight(vec![1]), ModuleKind::LocalWeyl, 6, None).unwrap();
        assert_eq!(nonzero(&w1.character()), vec![((vec![-1], 0), 1), ((vec![1], 0), 1)]);
        let w2 = CurrentModule::new(c.clone(), Weight(vec![2]), ModuleKind::LocalWeyl, 6, None).unwrap();
        assert_eq!(
            nonzero(&w2.character()),
            vec![((vec![-2], 0), 1), ((vec![0], 0), 1), ((vec![0], 2), 1), ((vec![2], 0), 1)]
        );
        assert!(w2.weights_complete());
        assert_eq!(w2.total_dim(), 4);
    }

    #[test]
    fn tensor_products() {
        let c = chev("A1");
        let w1 = CurrentModule::new(c.clone(), Weight(vec![1]), ModuleKind::LocalWeyl, 6, None).unwrap();
        let t = tensor_character(&[w1.character(), w1.character()], 1, 6);
        assert_eq!(nonzero(&t), vec![((vec![-2], 0), 1), ((vec![0], 0), 2), ((vec![2], 0), 1)]);
        let trivial: Character = [((Weight(vec![0]), 0), 1)].into();
        assert_eq!(tensor_character(&[w1.character(), trivial], 1, 6), w1.character());
        let a2 = chev("A2");
        let ch = weyl_graded_char(&a2, &[Weight(vec![1, 0]), Weight(vec![0, 1])], 6).unwrap();
        assert_eq!(ch.values().sum::<usize>(), 9);
        assert_eq!(ch[&(Weight(vec![0, 0]), 0)], 3);
        assert_eq!(weyl_graded_char(&a2, &[], 6).unwrap(), [((Weight(vec![0, 0]), 0), 1)].into());
    }

    #[test]
    fn relations_and_brackets_hold_on_the_window() {
        let c = chev("A1");
        let m = CurrentModule::new(c.clone(), Weight(vec![2]), ModuleKind::GlobalWeyl, 4, None).unwrap();
        let v = m.cyclic_vector();
        let f = CurrentGen { basis: c.f_root(1), t: 0 };
        let mut x = v.clone();
        for _ in 0..3 {
            x = m.act(f, &x).unwrap();
        }
        assert!(x.is_empty());
        let e1 = CurrentGen { basis: c.e(1), t: 1 };
        assert!(m.act(e1, &v).unwrap().is_empty());
        let h0 = CurrentGen { basis: c.h(1), t: 0 };
        assert_eq!(m.act(h0, &v).unwrap(), [(Vec::new(), q(2))].into());
        // [x, y] v = x y v − y x v on basis vectors of low depth and degree
        for (w, d) in [(Weight(vec![0]), 0), (Weight(vec![0]), 2), (Weight(vec![2]), 2)] {
            for b in m.basis(&w, d) {
                for xa in 0..c.dim() {
                    for ya in 0..c.dim() {
                        let (x, y) = (CurrentGen { basis: xa, t: 0 }, CurrentGen { basis: ya, t: 1 });
                        let Ok(xy) = m.act(y, &b).and_then(|u| m.act(x, &u)) else { continue };
                        let Ok(yx) = m.act(x, &b).and_then(|u| m.act(y, &u)) else { continue };
                        let mut lhs = xy.clone();
                        for (k, c2) in yx {
                            add(&mut lhs, k, &(-c2));
                        }
                        let mut rhs = BTreeMap::new();
                        for (k, c2) in c.bracket(xa, ya) {
                            for (mm, cc) in m.act(CurrentGen { basis: *k, t: 1 }, &b).unwrap() {
                                add(&mut rhs, mm, &(cc * Q::from_integer((*c2).into())));
                            }
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn pi_action_examples() {
        let c = chev("A1");
        let w = CurrentModule::new(c.clone(), Weight(vec![2]), ModuleKind::LocalWeyl, 6, None).unwrap();
        let v = w.cyclic_vector();
        assert!(w.pi_action(&v, 1, 1).unwrap().is_empty());
        assert_eq!(w.pi_action_sym(&v, &SymFunc::one()).unwrap(), v);
        let g = CurrentModule::new(c.clone(), Weight(vec![2]), ModuleKind::GlobalWeyl, 6, None).unwrap();
        let fv = g.act(CurrentGen { basis: c.f_root(1), t: 0 }, &g.cyclic_vector()).unwrap();
        let x = g.pi_action(&fv, 1, 1).unwrap();
        assert!(!x.is_empty());
        // agrees with f · (h ⊗ t) m
        let hv = g.act(CurrentGen { basis: c.h(1), t: 1 }, &g.cyclic_vector()).unwrap();
        assert_eq!(x, g.act(CurrentGen { basis: c.f_root(1), t: 0 }, &hv).unwrap());
    }

    #[test]
    fn global_modules_are_free_and_recover_local_ones() {
        let c = chev("A1");
        for l in 1..=2 {
            assert!(freeness_check(&c, &Weight(vec![l]), 6).unwrap());
            assert!(local_from_global_check(&c, &Weight(vec![l]), 6).unwrap());
        }
    }

    #[test]
    fn weyl_vectors_span_tensor_products() {
        let c = chev("A1");
        let mk = |l| CurrentModule::new(c.clone(), Weight(vec![l]), ModuleKind::LocalWeyl, 6, None).unwrap();
        let t = TensorModule::new(vec![mk(2), mk(1)]);
        assert!(weyl_vectors_span(&t, 3, 6).unwrap());
        assert_eq!(t.character().values().sum::<usize>(), 8);
    }
}
