use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{objects_for, Deformation, DiagramWord, StendhalPair, Strand, TensorSetup};
use crate::engine::{
    artin_tests, exp_from, monomials_of_degree, to_sparse, Exp, FPoly, KeyInterner, Op, WordEvaluator, MAX_VARS,
};
use crate::error::{Error, Result};
use crate::klr::{crossing_op, matching_perms};
use crate::linalg::{Echelon, ModEchelon, SparseVec, TrackedEchelon};
use crate::poly::Monomial;
use crate::rational::Q;
use crate::symfunc::{APoly, AVar, ZVar};

/// A basis diagram of `Hom(S, S')`: the label-preserving bijection `sigma`
/// (bottom black `j` ends at top black `sigma[j]`) with dots at the bottom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NormalDiagram {
    pub sigma: Vec<usize>,
    pub dots: Vec<u8>,
}

/// Linear combination of normal diagrams with coefficients in the parameter
/// algebra (constants when undeformed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TpaElement {
    pub bottom: StendhalPair,
    pub top: StendhalPair,
    pub deformed: bool,
    pub terms: BTreeMap<NormalDiagram, APoly>,
}

impl TpaElement {
    pub fn zero(bottom: StendhalPair, top: StendhalPair, deformed: bool) -> Self {
        TpaElement { bottom, top, deformed, terms: BTreeMap::new() }
    }

    pub fn idempotent(s: &StendhalPair, deformed: bool) -> Self {
        let mut x = Self::zero(s.clone(), s.clone(), deformed);
        x.terms.insert(NormalDiagram { sigma: (0..s.m()).collect(), dots: vec![0; s.m()] }, APoly::one());
        x
    }

    pub fn dot(s: &StendhalPair, j: usize, deformed: bool) -> Self {
        let mut x = Self::zero(s.clone(), s.clone(), deformed);
        let mut dots = vec![0; s.m()];
        dots[j] = 1;
        x.terms.insert(NormalDiagram { sigma: (0..s.m()).collect(), dots }, APoly::one());
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, c: &APoly, other: &TpaElement) -> Result<()> {
        if self.bottom != other.bottom || self.top != other.top {
            return Err(Error::ObjectMismatch("summands have different objects".into()));
        }
        if self.deformed != other.deformed {
            return Err(Error::RegimeMismatch);
        }
        for (k, v) in &other.terms {
            let e = self.terms.entry(k.clone()).or_insert_with(APoly::zero);
            *e = e.add(&c.mul(v));
            if e.is_zero() {
                self.terms.remove(k);
            }
        }
        Ok(())
    }

    /// Evaluates the parameters, giving an undeformed element.
    pub fn specialize(&self, setup: &TensorSetup, values: &BTreeMap<ZVar, Q>) -> Result<TpaElement> {
        let mut out = TpaElement::zero(self.bottom.clone(), self.top.clone(), false);
        for (k, v) in &self.terms {
            let x = setup.lambdas.specialize(v, values)?;
            if !x.is_zero() {
                out.terms.insert(k.clone(), APoly::constant(x));
            }
        }
        Ok(out)
    }
}

/// Graded dimensions of a Hom space and, when finite, its total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDims {
    pub graded: BTreeMap<i64, usize>,
    pub total: Option<usize>,
}

/// One degree of the cocenter of a block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLevel {
    pub degree: i64,
    pub dim: usize,
    /// `Σ_S dim End(S)_d` over non-violated `S`.
    pub end_dim: usize,
    pub commutator_rank: usize,
    pub crossing_free_spans: Option<bool>,
    pub idempotent_dots_span: Option<bool>,
    /// Dimension of `F_{≤ν}/F_{<ν}` for each composition `ν`.
    pub filtration: Option<BTreeMap<Vec<usize>, usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Stage {
    Word(usize),
    Dots(Exp),
}

#[derive(Clone, Debug)]
struct Elem {
    stages: Vec<Stage>,
    coef: Vec<u8>,
    degree: i64,
}

impl Elem {
    fn times_dot(&self, j: usize) -> Elem {
        let mut out = self.clone();
        match out.stages.first_mut() {
            Some(Stage::Dots(e)) => e[j] += 1,
            _ => {
                let mut e = [0; MAX_VARS];
                e[j] = 1;
                out.stages.insert(0, Stage::Dots(e));
            }
        }
        out.degree += 2;
        out
    }

    fn times_gen(&self, g: usize, deg: i64) -> Elem {
        let mut out = self.clone();
        out.coef[g] += 1;
        out.degree += deg;
        out
    }
}

#[derive(Clone, Debug)]
struct BWord {
    sigma: Vec<usize>,
    word: usize,
    degree: i64,
    red_crossings: usize,
}

#[derive(Clone, Debug)]
struct BasisRef {
    word: usize,
    dots: Exp,
    coef: Vec<u8>,
}

#[derive(Clone, Debug)]
struct Level {
    /// `None` when the ideal is the whole span.
    ideal: Option<Echelon>,
    ideal_rank: usize,
    ideal_elems: Vec<Elem>,
    quotient: Vec<(Elem, BasisRef)>,
    /// The spanning set is independent and contains the ideal.
    consistent: bool,
}

#[derive(Debug)]
struct HomData {
    words: Rc<Vec<BWord>>,
    gens: BTreeMap<i64, Vec<Elem>>,
    min_degree: i64,
    max_word: i64,
    levels: BTreeMap<i64, Level>,
}

#[derive(Debug)]
struct CoefGen {
    degree: i64,
    value: FPoly,
    avar: Option<AVar>,
}

/// One weight block of the tensor product algebra: every object whose black
/// labels form a fixed multiset, with lazily computed Hom spaces.
#[derive(Debug)]
pub struct Block {
    setup: TensorSetup,
    multiset: Vec<usize>,
    m: usize,
    objects: Vec<StendhalPair>,
    index: HashMap<StendhalPair, usize>,
    tests: Vec<Vec<Exp>>,
    gens: Vec<CoefGen>,
    coef_cache: HashMap<Vec<u8>, FPoly>,
    eval: WordEvaluator,
    keys: KeyInterner<(u32, u32, Exp)>,
    words: HashMap<(usize, usize), Rc<Vec<BWord>>>,
    homs: HashMap<(usize, usize), HomData>,
    tracked: HashMap<(usize, usize, i64), Rc<TrackedEchelon>>,
}

impl Block {
    pub fn new(setup: &TensorSetup, multiset: &[usize]) -> Result<Block> {
        let mut multiset = multiset.to_vec();
        multiset.sort();
        for &i in &multiset {
            if i == 0 || i > setup.cartan.rank {
                return Err(Error::UnknownNode(i));
            }
        }
        let m = multiset.len();
        setup.check_size(m)?;
        let objects = objects_for(&multiset, setup.lambdas.len());
        let index = objects.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let tests = objects.iter().map(|s| artin_tests(&s.labels)).collect();
        let gens = match &setup.deformation {
            Deformation::Zero => Vec::new(),
            Deformation::Ray(_) => vec![CoefGen { degree: 2, value: FPoly::var(m), avar: None }],
            Deformation::Symbolic => setup
                .lambdas
                .generators()
                .into_iter()
                .map(|g| CoefGen {
                    degree: 2 * g.r as i64,
                    value: setup.a_generator_value(m, g.factor, g.node, g.r),
                    avar: Some(g),
                })
                .collect(),
        };
        Ok(Block {
            setup: setup.clone(),
            multiset,
            m,
            objects,
            index,
            tests,
            gens,
            coef_cache: HashMap::new(),
            eval: WordEvaluator::new(),
            keys: KeyInterner::new(),
            words: HashMap::new(),
            homs: HashMap::new(),
            tracked: HashMap::new(),
        })
    }

    pub fn setup(&self) -> &TensorSetup {
        &self.setup
    }

    pub fn multiset(&self) -> &[usize] {
        &self.multiset
    }

    pub fn objects(&self) -> &[StendhalPair] {
        &self.objects
    }

    pub fn nonviolated(&self) -> Vec<StendhalPair> {
        self.objects.iter().filter(|s| !s.is_violated()).cloned().collect()
    }

    fn obj(&self, s: &StendhalPair) -> Result<usize> {
        self.index.get(s).copied().ok_or_else(|| Error::ObjectMismatch(format!("{s:?} is not in this block")))
    }

    fn tag(&self, a: usize, b: usize) -> u32 {
        (a * self.objects.len() + b) as u32
    }

    fn coef_monomials(&self, d: i64) -> Vec<Vec<u8>> {
        fn rec(gens: &[CoefGen], g: usize, left: i64, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if g == gens.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut k = 0;
            loop {
                let used = k as i64 * gens[g].degree;
                if used > left {
                    break;
                }
                cur[g] = k;
                rec(gens, g + 1, left - used, cur, out);
                k += 1;
            }
            cur[g] = 0;
        }
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        rec(&self.gens, 0, d, &mut vec![0; self.gens.len()], &mut out);
        out
    }

    fn coef_value(&mut self, e: &[u8]) -> FPoly {
        if let Some(v) = self.coef_cache.get(e) {
            return v.clone();
        }
        let mut v = FPoly::one();
        for (g, &k) in e.iter().enumerate() {
            for _ in 0..k {
                v = v.mul(&self.gens[g].value);
            }
        }
        self.coef_cache.insert(e.to_vec(), v.clone());
        v
    }

    fn compile_cross(&self, slice: &mut [Strand], p: usize) -> (Option<Op>, i64, bool) {
        compile_cross(&self.setup, self.m, slice, p)
    }

    /// Compiles crossings at the given slice positions starting from `bottom`.
    fn compile_positions(&mut self, bottom: &StendhalPair, positions: &[usize]) -> (usize, i64, usize, Vec<Strand>) {
        let mut slice = bottom.slice();
        let mut ops = Vec::new();
        let mut degree = 0;
        let mut reds = 0;
        for &p in positions {
            let (op, d, red) = self.compile_cross(&mut slice, p);
            ops.extend(op);
            degree += d;
            reds += red as usize;
        }
        (self.eval.intern(ops), degree, reds, slice)
    }

    /// Undotted basis words from object `a` to object `b`.
    fn basis_words(&mut self, a: usize, b: usize) -> Rc<Vec<BWord>> {
        if let Some(w) = self.words.get(&(a, b)) {
            return w.clone();
        }
        let bottom = self.objects[a].clone();
        let top = self.objects[b].clone();
        let m = self.m;
        let ids = |slice: &[Strand], black_id: &dyn Fn(usize) -> usize| -> Vec<usize> {
            let mut j = 0;
            slice
                .iter()
                .map(|s| match s {
                    Strand::Black(_) => {
                        j += 1;
                        black_id(j - 1)
                    }
                    Strand::Red(k) => m + k - 1,
                })
                .collect()
        };
        let bottom_ids = ids(&bottom.slice(), &|j| j);
        let mut out = Vec::new();
        for sigma in matching_perms(&bottom.labels, &top.labels) {
            let mut inverse = vec![0; m];
            for (j, &t) in sigma.iter().enumerate() {
                inverse[t] = j;
            }
            let top_ids = ids(&top.slice(), &|t| inverse[t]);
            let mut target = vec![0; top_ids.len()];
            for (p, &id) in top_ids.iter().enumerate() {
                target[id] = p;
            }
            // bubble sort: right crossings, then black crossings, then left crossings
            let mut cur = bottom_ids.clone();
            let mut positions = Vec::new();
            loop {
                let mut best: Option<(u8, usize)> = None;
                for p in 0..cur.len().saturating_sub(1) {
                    let (u, v) = (cur[p], cur[p + 1]);
                    if target[u] < target[v] {
                        continue;
                    }
                    let class = match (u < m, v < m) {
                        (true, false) => 0,
                        (true, true) => 1,
                        (false, true) => 2,
                        (false, false) => unreachable!("red strings keep their order"),
                    };
                    if best.map_or(true, |b| (class, p) < b) {
                        best = Some((class, p));
                    }
                }
                let Some((_, p)) = best else { break };
                cur.swap(p, p + 1);
                positions.push(p);
            }
            let (word, degree, red_crossings, slice) = self.compile_positions(&bottom, &positions);
            debug_assert_eq!(StendhalPair::from_slice(&slice), top);
            out.push(BWord { sigma, word, degree, red_crossings });
        }
        let out = Rc::new(out);
        self.words.insert((a, b), out.clone());
        out
    }

    fn apply_stages(&mut self, stages: &[Stage], start: Exp) -> FPoly {
        let mut f = FPoly::monomial(start, 1);
        for s in stages {
            f = match s {
                Stage::Dots(e) => f.mul_monomial(e),
                Stage::Word(w) => self.eval.apply(*w, &f),
            };
            if f.is_zero() {
                break;
            }
        }
        f
    }

    /// Values on the test monomials of object `a`, keyed under `tag`.
    fn vector(&mut self, a: usize, tag: u32, stages: &[Stage], coef: &FPoly) -> Vec<(u32, i128)> {
        let tests = self.tests[a].clone();
        let mut out = Vec::new();
        for (ti, t) in tests.iter().enumerate() {
            let mut f = self.apply_stages(stages, *t);
            if *coef != FPoly::one() {
                f = f.mul(coef);
            }
            for (e, c) in f.terms() {
                out.push((self.keys.get(&(tag, ti as u32, *e)), *c));
            }
        }
        to_sparse(out)
    }

    fn elem_vector(&mut self, a: usize, tag: u32, x: &Elem) -> Vec<(u32, i128)> {
        let coef = self.coef_value(&x.coef);
        self.vector(a, tag, &x.stages, &coef)
    }

    fn hom_data(&mut self, a: usize, b: usize) -> HomData {
        if let Some(h) = self.homs.remove(&(a, b)) {
            return h;
        }
        let words = self.basis_words(a, b);
        let ng = self.gens.len();
        let mut gens: BTreeMap<i64, Vec<Elem>> = BTreeMap::new();
        for v in 0..self.objects.len() {
            if !self.objects[v].is_violated() {
                continue;
            }
            let lower = self.basis_words(a, v);
            let upper = self.basis_words(v, b);
            for r in lower.iter() {
                for u in upper.iter() {
                    let degree = r.degree + u.degree;
                    gens.entry(degree).or_default().push(Elem {
                        stages: vec![Stage::Word(r.word), Stage::Word(u.word)],
                        coef: vec![0; ng],
                        degree,
                    });
                }
            }
        }
        let min_degree = words.iter().map(|w| w.degree).min().expect("a label-preserving bijection exists");
        let max_word = words.iter().map(|w| w.degree).max().expect("nonempty");
        HomData { words, gens, min_degree, max_word, levels: BTreeMap::new() }
    }

    fn compute_level(&mut self, h: &HomData, a: usize, b: usize, d: i64) -> Level {
        let tag = self.tag(a, b);
        let m = self.m;
        let mut candidates: Vec<Elem> = h.gens.get(&d).cloned().unwrap_or_default();
        if let Some(prev) = h.levels.get(&(d - 2)) {
            for x in &prev.ideal_elems {
                candidates.extend((0..m).map(|j| x.times_dot(j)));
            }
        }
        for (g, gen) in self.gens.iter().enumerate() {
            if let Some(prev) = h.levels.get(&(d - gen.degree)) {
                candidates.extend(prev.ideal_elems.iter().map(|x| x.times_gen(g, gen.degree)));
            }
        }
        // parameters of higher degree first, so the basis lifts the undeformed one
        let top = if self.gens.is_empty() { 0 } else { (d - h.min_degree).max(0) };
        let mut spanning = Vec::new();
        for dmu in (0..=top).rev().filter(|x| x % 2 == 0) {
            for mu in self.coef_monomials(dmu) {
                for (wi, w) in h.words.iter().enumerate() {
                    let rem = d - dmu - w.degree;
                    if rem < 0 || rem % 2 != 0 {
                        continue;
                    }
                    for dots in monomials_of_degree(m, (rem / 2) as usize) {
                        let x =
                            Elem { stages: vec![Stage::Dots(dots), Stage::Word(w.word)], coef: mu.clone(), degree: d };
                        let v = self.elem_vector(a, tag, &x);
                        spanning.push((x, BasisRef { word: wi, dots, coef: mu.clone() }, v));
                    }
                }
            }
        }
        let full = spanning.len();
        // ranks mod p bound rational ranks from below, so reaching the size of
        // the spanning set certifies the rational rank
        let mut span_p = ModEchelon::new();
        for (_, _, v) in &spanning {
            span_p.insert_int(v);
        }
        let independent = span_p.rank() == full;
        if independent {
            let vectors: Vec<Vec<(u32, i128)>> = candidates.iter().map(|x| self.elem_vector(a, tag, x)).collect();
            let mut ideal_p = ModEchelon::new();
            let mut chosen = Vec::new();
            for (x, v) in candidates.iter().zip(&vectors) {
                if ideal_p.rank() == full {
                    break;
                }
                if ideal_p.insert_int(v) {
                    chosen.push(x.clone());
                }
            }
            if ideal_p.rank() == full {
                // the ideal is all of the span
                return Level {
                    ideal: None,
                    ideal_rank: full,
                    ideal_elems: chosen,
                    quotient: Vec::new(),
                    consistent: true,
                };
            }
        }
        let mut ideal = Echelon::new();
        let mut ideal_elems = Vec::new();
        for x in candidates {
            let v = self.elem_vector(a, tag, &x);
            if ideal.insert_int(&v) {
                ideal_elems.push(x);
            }
        }
        let mut span = Echelon::new();
        let mut ech = ideal.clone();
        let mut quotient = Vec::new();
        for (x, r, v) in spanning {
            if !independent {
                span.insert_int(&v);
            }
            if ech.insert_int(&v) {
                quotient.push((x, r));
            }
        }
        let spanned = if independent { full } else { span.rank() };
        let consistent = spanned == full && ech.rank() == spanned;
        Level { ideal_rank: ideal.rank(), ideal: Some(ideal), ideal_elems, quotient, consistent }
    }

    fn ensure(&mut self, a: usize, b: usize, d: i64) {
        let mut h = self.hom_data(a, b);
        let start = h.levels.keys().next_back().map_or(h.min_degree, |k| k + 1);
        for e in start..=d {
            let level = self.compute_level(&h, a, b, e);
            h.levels.insert(e, level);
        }
        self.homs.insert((a, b), h);
    }

    fn level(&mut self, a: usize, b: usize, d: i64) -> Option<&Level> {
        self.ensure(a, b, d);
        self.homs[&(a, b)].levels.get(&d)
    }

    /// Dimension over the rationals of `Hom(S, S')_d` in the quotient.
    pub fn hom_dim(&mut self, s: &StendhalPair, t: &StendhalPair, d: i64) -> Result<usize> {
        let (a, b) = (self.obj(s)?, self.obj(t)?);
        Ok(self.level(a, b, d).map_or(0, |l| l.quotient.len()))
    }

    /// Checks that the spanning set is consistent with the ideal in degree `d`:
    /// the ideal lies in the span of the basis diagrams and those are independent.
    pub fn spanning_set_consistent(&mut self, s: &StendhalPair, t: &StendhalPair, d: i64) -> Result<bool> {
        let (a, b) = (self.obj(s)?, self.obj(t)?);
        Ok(self.level(a, b, d).map_or(true, |l| l.consistent))
    }

    /// Dimension of the ideal of diagrams through violated objects in `Hom(S, S')_d`.
    pub fn ideal_dim(&mut self, s: &StendhalPair, t: &StendhalPair, d: i64) -> Result<usize> {
        let (a, b) = (self.obj(s)?, self.obj(t)?);
        Ok(self.level(a, b, d).map_or(0, |l| l.ideal_rank))
    }

    pub fn min_degree(&mut self, s: &StendhalPair, t: &StendhalPair) -> Result<i64> {
        let (a, b) = (self.obj(s)?, self.obj(t)?);
        let h = self.hom_data(a, b);
        let d = h.min_degree;
        self.homs.insert((a, b), h);
        Ok(d)
    }

    /// Graded ranks over the parameter algebra: dimensions when undeformed,
    /// `dim_d − dim_{d−2}` along a ray, Hilbert series division when symbolic.
    pub fn hom_ranks(&mut self, s: &StendhalPair, t: &StendhalPair, max_degree: i64) -> Result<BTreeMap<i64, usize>> {
        let lo = self.min_degree(s, t)?;
        let mut dims = BTreeMap::new();
        for d in lo..=max_degree {
            dims.insert(d, self.hom_dim(s, t, d)?);
        }
        Ok(self.ranks_from_dims(&dims))
    }

    fn ranks_from_dims(&self, dims: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
        let mut out: BTreeMap<i64, usize> = BTreeMap::new();
        for (&d, &x) in dims {
            let mut r = x as i64;
            match self.setup.deformation {
                Deformation::Zero => {}
                Deformation::Ray(_) => r -= dims.get(&(d - 2)).copied().unwrap_or(0) as i64,
                Deformation::Symbolic => {
                    for (&e, &y) in &out {
                        r -= self.setup.lambdas.a_dim(d - e) as i64 * y as i64;
                    }
                }
            }
            out.insert(d, r.max(0) as usize);
        }
        out
    }

    /// Smallest `K` such that every dot monomial of degree `K` on every
    /// non-violated idempotent lies in the ideal.
    pub fn nilpotency_bound(&mut self) -> Result<usize> {
        if !matches!(self.setup.deformation, Deformation::Zero) {
            return Err(Error::RegimeMismatch);
        }
        let nv: Vec<usize> = (0..self.objects.len()).filter(|&a| !self.objects[a].is_violated()).collect();
        for k in 0..=64usize {
            let mut all = true;
            'obj: for &a in &nv {
                let id = self.eval.intern(Vec::new());
                let tag = self.tag(a, a);
                for dots in monomials_of_degree(self.m, k) {
                    let v = self.vector(a, tag, &[Stage::Dots(dots), Stage::Word(id)], &FPoly::one());
                    let inside = match self.level(a, a, 2 * k as i64) {
                        Some(l) => l.ideal.as_ref().map_or(true, |i| i.contains_int(&v)),
                        None => v.is_empty(),
                    };
                    if !inside {
                        all = false;
                        break 'obj;
                    }
                }
            }
            if all {
                return Ok(k);
            }
        }
        Err(Error::Invalid("dot nilpotency bound exceeds 64".into()))
    }

    /// Graded and total dimensions of `Hom(S, S')` when undeformed.
    pub fn hom_dims(&mut self, s: &StendhalPair, t: &StendhalPair) -> Result<HomDims> {
        let k = self.nilpotency_bound()? as i64;
        let (a, b) = (self.obj(s)?, self.obj(t)?);
        let h = self.hom_data(a, b);
        let (lo, hi) = (h.min_degree, h.max_word + 2 * (k - 1));
        self.homs.insert((a, b), h);
        let mut graded = BTreeMap::new();
        for d in lo..=hi {
            let x = self.hom_dim(s, t, d)?;
            if x > 0 {
                graded.insert(d, x);
            }
        }
        let total = graded.values().sum();
        Ok(HomDims { graded, total: Some(total) })
    }

    fn word_for(&mut self, a: usize, b: usize, sigma: &[usize]) -> Result<BWord> {
        self.basis_words(a, b)
            .iter()
            .find(|w| w.sigma == sigma)
            .cloned()
            .ok_or_else(|| Error::Invalid(format!("{sigma:?} is not a label-preserving bijection")))
    }

    fn coef_exps(&self, mono: &Monomial<AVar>) -> Result<Vec<u8>> {
        let mut e = vec![0u8; self.gens.len()];
        for (v, k) in mono.factors() {
            let g = self
                .gens
                .iter()
                .position(|g| g.avar == Some(*v))
                .ok_or_else(|| Error::Invalid(format!("{v} is not a parameter of this setup")))?;
            e[g] += *k as u8;
        }
        Ok(e)
    }

    fn coef_degree(&self, e: &[u8]) -> i64 {
        e.iter().zip(&self.gens).map(|(k, g)| *k as i64 * g.degree).sum()
    }

    fn check_regime(&self, deformed: bool) -> Result<()> {
        match (&self.setup.deformation, deformed) {
            (Deformation::Zero, false) | (Deformation::Symbolic, true) => Ok(()),
            _ => Err(Error::RegimeMismatch),
        }
    }

    fn tracked(&mut self, a: usize, b: usize, d: i64) -> Rc<TrackedEchelon> {
        if let Some(t) = self.tracked.get(&(a, b, d)) {
            return t.clone();
        }
        let tag = self.tag(a, b);
        let level = self.level(a, b, d).cloned();
        let mut t = TrackedEchelon::new();
        if let Some(level) = level {
            for x in &level.ideal_elems {
                let v = self.elem_vector(a, tag, x);
                t.insert(rational(&v), None);
            }
            for (i, (x, _)) in level.quotient.iter().enumerate() {
                let v = self.elem_vector(a, tag, x);
                t.insert(rational(&v), Some(i));
            }
        }
        let t = Rc::new(t);
        self.tracked.insert((a, b, d), t.clone());
        t
    }

    /// Writes a combination of stage lists as a normal form in `Hom(a, b)`.
    fn express(
        &mut self,
        a: usize,
        b: usize,
        deformed: bool,
        parts: Vec<(Vec<Stage>, i64, APoly)>,
    ) -> Result<TpaElement> {
        let tag = self.tag(a, b);
        let mut by_degree: BTreeMap<i64, BTreeMap<u32, Q>> = BTreeMap::new();
        for (stages, degree, coef) in parts {
            for (mono, c) in coef.terms() {
                let e = self.coef_exps(mono)?;
                let d = degree + self.coef_degree(&e);
                let value = self.coef_value(&e);
                let v = self.vector(a, tag, &stages, &value);
                let acc = by_degree.entry(d).or_default();
                for (k, x) in v {
                    *acc.entry(k).or_insert_with(Q::zero) += c * Q::from_integer(x.into());
                }
            }
        }
        let mut out = TpaElement::zero(self.objects[a].clone(), self.objects[b].clone(), deformed);
        for (d, acc) in by_degree {
            let v: SparseVec = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            if v.is_empty() {
                continue;
            }
            let t = self.tracked(a, b, d);
            let coords = t.coordinates(v).ok_or_else(|| Error::Invalid("element outside the spanning set".into()))?;
            let level = &self.homs[&(a, b)].levels[&d];
            let words = self.homs[&(a, b)].words.clone();
            for (i, c) in coords {
                let r = &level.quotient[i].1;
                let key = NormalDiagram { sigma: words[r.word].sigma.clone(), dots: r.dots[..self.m].to_vec() };
                let mut mono = Vec::new();
                for (g, &k) in r.coef.iter().enumerate() {
                    if k > 0 {
                        mono.push((self.gens[g].avar.expect("symbolic parameters are named"), k as u32));
                    }
                }
                let term = APoly::term(c, Monomial::from_pairs(mono));
                let entry = out.terms.entry(key.clone()).or_insert_with(APoly::zero);
                *entry = entry.add(&term);
                if entry.is_zero() {
                    out.terms.remove(&key);
                }
            }
        }
        Ok(out)
    }

    fn element_parts(&mut self, x: &TpaElement) -> Result<Vec<(Vec<Stage>, i64, APoly)>> {
        let (a, b) = (self.obj(&x.bottom)?, self.obj(&x.top)?);
        let mut out = Vec::new();
        for (k, c) in &x.terms {
            if k.dots.len() != self.m {
                return Err(Error::Invalid("dot vector has the wrong length".into()));
            }
            let w = self.word_for(a, b, &k.sigma)?;
            let dots = exp_from(&k.dots);
            let degree = w.degree + 2 * k.dots.iter().map(|&d| d as i64).sum::<i64>();
            out.push((vec![Stage::Dots(dots), Stage::Word(w.word)], degree, c.clone()));
        }
        Ok(out)
    }

    /// Rewrites `x` in the normal-form basis of the quotient.
    pub fn normalize(&mut self, x: &TpaElement) -> Result<TpaElement> {
        self.check_regime(x.deformed)?;
        let (a, b) = (self.obj(&x.bottom)?, self.obj(&x.top)?);
        let parts = self.element_parts(x)?;
        self.express(a, b, x.deformed, parts)
    }

    /// Composite `x ∘ y`: first `y`, then `x`.
    pub fn multiply(&mut self, x: &TpaElement, y: &TpaElement) -> Result<TpaElement> {
        if x.deformed != y.deformed {
            return Err(Error::RegimeMismatch);
        }
        self.check_regime(x.deformed)?;
        if x.bottom != y.top {
            return Err(Error::ObjectMismatch("the factors are not composable".into()));
        }
        let (a, c) = (self.obj(&y.bottom)?, self.obj(&x.top)?);
        let xs = self.element_parts(x)?;
        let ys = self.element_parts(y)?;
        let mut parts = Vec::new();
        for (sy, dy, cy) in &ys {
            for (sx, dx, cx) in &xs {
                let stages = sy.iter().chain(sx.iter()).cloned().collect();
                parts.push((stages, dy + dx, cy.mul(cx)));
            }
        }
        self.express(a, c, x.deformed, parts)
    }

    /// Normal form of a composable word of elementary diagrams.
    pub fn evaluate_word(&mut self, w: &DiagramWord, deformed: bool) -> Result<TpaElement> {
        self.check_regime(deformed)?;
        let top = w.top()?;
        let (a, b) = (self.obj(&w.bottom)?, self.obj(&top)?);
        let mut slice = w.bottom.slice();
        let mut stages = Vec::new();
        let mut degree = 0;
        for (dot, p) in w.positions()? {
            if let Some(j) = dot {
                let mut e = [0; MAX_VARS];
                e[j] = 1;
                stages.push(Stage::Dots(e));
                degree += 2;
            }
            if let Some(p) = p {
                let (op, d, _) = self.compile_cross(&mut slice, p);
                degree += d;
                if let Some(op) = op {
                    stages.push(Stage::Word(self.eval.intern(vec![op])));
                }
            }
        }
        self.express(a, b, deformed, vec![(stages, degree, APoly::one())])
    }

    /// Elementary diagrams leaving object `a` and ending at a non-violated object.
    fn letters(&mut self, a: usize) -> Vec<(usize, Vec<Stage>, i64)> {
        let mut out = Vec::new();
        for j in 0..self.m {
            let mut e = [0; MAX_VARS];
            e[j] = 1;
            out.push((a, vec![Stage::Dots(e)], 2));
        }
        let s = self.objects[a].clone();
        let slice = s.slice();
        for p in 0..slice.len().saturating_sub(1) {
            if matches!((slice[p], slice[p + 1]), (Strand::Red(_), Strand::Red(_))) {
                continue;
            }
            let (word, degree, _, top) = self.compile_positions(&s, &[p]);
            let top = StendhalPair::from_slice(&top);
            if top.is_violated() {
                continue;
            }
            out.push((self.index[&top], vec![Stage::Word(word)], degree));
        }
        out
    }

    /// Cocenter in degree `d`; with `checks`, also tests the spanning claims
    /// and the composition filtration.
    pub fn trace_level(&mut self, d: i64, checks: bool) -> TraceLevel {
        let nv: Vec<usize> = (0..self.objects.len()).filter(|&a| !self.objects[a].is_violated()).collect();
        let end_dim: usize = nv.iter().map(|&a| self.level(a, a, d).map_or(0, |l| l.quotient.len())).sum();
        if end_dim == 0 {
            let filtration = nv.iter().map(|&a| self.objects[a].composition()).map(|c| (c, 0)).collect();
            return TraceLevel {
                degree: d,
                dim: 0,
                end_dim: 0,
                commutator_rank: 0,
                crossing_free_spans: checks.then_some(true),
                idempotent_dots_span: checks.then_some(true),
                filtration: checks.then_some(filtration),
            };
        }
        let mut ech = Echelon::new();
        let mut end_dim = 0;
        for &a in &nv {
            let tag = self.tag(a, a);
            let level = self.level(a, a, d).cloned();
            if let Some(level) = level {
                end_dim += level.quotient.len();
                for x in &level.ideal_elems {
                    let v = self.elem_vector(a, tag, x);
                    ech.insert_int(&v);
                }
            }
        }
        let rank_ideal = ech.rank();
        for &a in &nv {
            for (b, g, dg) in self.letters(a) {
                // a → b along g; pair with the basis of Hom(b, a)
                let level = self.level(b, a, d - dg).cloned();
                let Some(level) = level else { continue };
                for (x, _) in &level.quotient {
                    let coef = self.coef_value(&x.coef);
                    let ga: Vec<Stage> = x.stages.iter().chain(g.iter()).cloned().collect();
                    let ag: Vec<Stage> = g.iter().chain(x.stages.iter()).cloned().collect();
                    let tb = self.tag(b, b);
                    let ta = self.tag(a, a);
                    let mut v = self.vector(b, tb, &ga, &coef);
                    v.extend(self.vector(a, ta, &ag, &coef).into_iter().map(|(k, c)| (k, -c)));
                    let v = to_sparse(v);
                    ech.insert_int(&v);
                }
            }
        }
        let commutator_rank = ech.rank() - rank_ideal;
        let dim = end_dim - commutator_rank;
        let mut out = TraceLevel {
            degree: d,
            dim,
            end_dim,
            commutator_rank,
            crossing_free_spans: None,
            idempotent_dots_span: None,
            filtration: None,
        };
        if !checks {
            return out;
        }
        let base = ech.rank();
        let gain = |this: &mut Block, cands: Vec<(usize, Elem)>| -> usize {
            let mut e = ech.clone();
            for (a, x) in cands {
                let tag = this.tag(a, a);
                let v = this.elem_vector(a, tag, &x);
                e.insert_int(&v);
            }
            e.rank() - base
        };
        let mut crossing_free = Vec::new();
        let mut idempotent = Vec::new();
        for &a in &nv {
            let words = self.basis_words(a, a);
            let id = self.eval.intern(Vec::new());
            let mut dmu = 0;
            while dmu <= d - self.homs[&(a, a)].min_degree {
                for mu in self.coef_monomials(dmu) {
                    for w in words.iter().filter(|w| w.red_crossings == 0) {
                        let rem = d - dmu - w.degree;
                        if rem < 0 || rem % 2 != 0 {
                            continue;
                        }
                        for dots in monomials_of_degree(self.m, (rem / 2) as usize) {
                            let stages = vec![Stage::Dots(dots), Stage::Word(w.word)];
                            crossing_free.push((a, Elem { stages, coef: mu.clone(), degree: d }));
                        }
                    }
                    let rem = d - dmu;
                    if rem >= 0 && rem % 2 == 0 {
                        for dots in monomials_of_degree(self.m, (rem / 2) as usize) {
                            let stages = vec![Stage::Dots(dots), Stage::Word(id)];
                            idempotent.push((a, Elem { stages, coef: mu.clone(), degree: d }));
                        }
                    }
                }
                if self.gens.is_empty() {
                    break;
                }
                dmu += 2;
            }
        }
        out.crossing_free_spans = Some(gain(self, crossing_free) == dim);
        out.idempotent_dots_span = Some(gain(self, idempotent) == dim);
        let mut filtration = BTreeMap::new();
        let comps: Vec<Vec<usize>> = {
            let mut c: Vec<Vec<usize>> = nv.iter().map(|&a| self.objects[a].composition()).collect();
            c.sort();
            c.dedup();
            c
        };
        // ν ≤ ν' iff κ(j) ≥ κ'(j) for every j
        let kappa_of = |nu: &[usize]| -> Vec<usize> {
            let mut acc = 0;
            let mut out = vec![0];
            for x in nu {
                acc += x;
                out.push(acc);
            }
            out
        };
        let leq = |u: &[usize], v: &[usize]| kappa_of(u).iter().zip(kappa_of(v)).all(|(x, y)| *x >= y);
        for nu in &comps {
            let mut below = Vec::new();
            let mut strictly = Vec::new();
            for &a in &nv {
                let c = self.objects[a].composition();
                if !leq(&c, nu) {
                    continue;
                }
                let level = self.level(a, a, d).cloned();
                let Some(level) = level else { continue };
                for (x, _) in level.quotient {
                    if c != *nu {
                        strictly.push((a, x.clone()));
                    }
                    below.push((a, x));
                }
            }
            let piece = gain(self, below) - gain(self, strictly);
            filtration.insert(nu.clone(), piece);
        }
        out.filtration = Some(filtration);
        out
    }

    /// Lowest degree in which an endomorphism space of a non-violated object can be nonzero.
    pub fn trace_min_degree(&mut self) -> Option<i64> {
        let nv: Vec<usize> = (0..self.objects.len()).filter(|&a| !self.objects[a].is_violated()).collect();
        nv.into_iter()
            .map(|a| {
                let h = self.hom_data(a, a);
                let d = h.min_degree;
                self.homs.insert((a, a), h);
                d
            })
            .min()
    }

    /// Graded cocenter dimensions up to `max_degree`.
    pub fn trace_dims(&mut self, max_degree: i64) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        if let Some(lo) = self.trace_min_degree() {
            for d in lo..=max_degree {
                out.insert(d, self.trace_level(d, false).dim);
            }
        }
        out
    }

    /// Cocenter ranks over the parameter algebra (see [`Block::hom_ranks`]).
    pub fn trace_ranks(&mut self, max_degree: i64) -> BTreeMap<i64, usize> {
        let dims = self.trace_dims(max_degree);
        self.ranks_from_dims(&dims)
    }
}

/// Operator, degree and redness of the crossing at slice positions `p, p+1`
/// for `m` black strands; swaps the slice.
pub(crate) fn compile_cross(setup: &TensorSetup, m: usize, slice: &mut [Strand], p: usize) -> (Option<Op>, i64, bool) {
    let l = slice[..p].iter().filter(|s| matches!(s, Strand::Black(_))).count();
    let c = &setup.cartan;
    let out = match (slice[p], slice[p + 1]) {
        (Strand::Black(a), Strand::Black(b)) => (Some(crossing_op(c, l, a, b)), -c.a(a, b), false),
        (Strand::Black(a), Strand::Red(k)) => (None, setup.lambdas.level(k, a) as i64, true),
        (Strand::Red(k), Strand::Black(a)) => {
            let g = setup.bigon(m, k, a, l);
            let op = if g == FPoly::one() { None } else { Some(Op::MulPoly(g)) };
            (op, setup.lambdas.level(k, a) as i64, true)
        }
        (Strand::Red(_), Strand::Red(_)) => panic!("red strings never cross"),
    };
    slice.swap(p, p + 1);
    out
}

fn rational(v: &[(u32, i128)]) -> SparseVec {
    v.iter().map(|(k, x)| (*k, Q::from_integer((*x).into()))).collect()
}
