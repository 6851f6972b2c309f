//! Tensor product algebras on downward black strands: objects, elementary
//! diagrams, deformations and the basis of Hom spaces.

mod block;
mod relations;

pub use block::{Block, HomDims, NormalDiagram, TpaElement, TraceLevel};
pub use relations::{relation_battery, RelationCheck};

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Node, Weight};
use crate::engine::{elementary, FPoly, MAX_VARS};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::symfunc::{WeightList, ZVar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strand {
    Black(Node),
    /// Red string `(k)`, `k` in `1..=n`.
    Red(usize),
}

/// Black labels with the function `κ`: `kappa[k-1] = κ(k)` counts the black strands
/// to the right of red string `(k)`, and `κ(n+1) = m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StendhalPair {
    pub labels: Vec<Node>,
    pub kappa: Vec<usize>,
}

impl StendhalPair {
    pub fn new(labels: Vec<Node>, kappa: Vec<usize>) -> Result<Self> {
        let m = labels.len();
        if kappa.is_empty() || *kappa.last().expect("nonempty") != m {
            return Err(Error::Invalid(format!("κ must end with the strand count {m}")));
        }
        if kappa.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid("κ must be weakly increasing".into()));
        }
        Ok(StendhalPair { labels, kappa })
    }

    /// No black strands, `n` red strings.
    pub fn red_only(n: usize) -> Self {
        StendhalPair { labels: Vec::new(), kappa: vec![0; n + 1] }
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn n(&self) -> usize {
        self.kappa.len() - 1
    }

    /// A black strand right of every red string.
    pub fn is_violated(&self) -> bool {
        self.kappa[0] > 0
    }

    /// `ν_k = κ(k+1) − κ(k)`: strands between red `(k+1)` and red `(k)`.
    pub fn composition(&self) -> Vec<usize> {
        self.kappa.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn slice(&self) -> Vec<Strand> {
        let m = self.m();
        let mut out = Vec::with_capacity(m + self.n());
        let mut next = 0;
        for k in (1..=self.n()).rev() {
            let before = m - self.kappa[k - 1];
            while next < before {
                out.push(Strand::Black(self.labels[next]));
                next += 1;
            }
            out.push(Strand::Red(k));
        }
        while next < m {
            out.push(Strand::Black(self.labels[next]));
            next += 1;
        }
        out
    }

    pub fn from_slice(slice: &[Strand]) -> Self {
        let labels: Vec<Node> = slice
            .iter()
            .filter_map(|s| match s {
                Strand::Black(i) => Some(*i),
                Strand::Red(_) => None,
            })
            .collect();
        let n = slice.iter().filter(|s| matches!(s, Strand::Red(_))).count();
        let mut kappa = vec![labels.len(); n + 1];
        let mut right = 0;
        for s in slice.iter().rev() {
            match s {
                Strand::Black(_) => right += 1,
                Strand::Red(k) => kappa[k - 1] = right,
            }
        }
        StendhalPair { labels, kappa }
    }

    /// Number of red strings to the right of black strand `j`.
    pub fn reds_right_of(&self, j: usize) -> usize {
        let m = self.m();
        (1..=self.n()).filter(|&k| j < m - self.kappa[k - 1]).count()
    }

    /// Weight of the leftmost region.
    pub fn leftmost_weight(&self, cartan: &CartanDatum, lambdas: &WeightList) -> Weight {
        let mut w = if lambdas.is_empty() { Weight::zero(cartan.rank) } else { lambdas.total() };
        for &i in &self.labels {
            w = &w - &cartan.alpha(i);
        }
        w
    }
}

/// All objects with the given label multiset, in a fixed order.
pub fn objects_for(multiset: &[Node], n: usize) -> Vec<StendhalPair> {
    let m = multiset.len();
    let mut kappas: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        kappas = kappas
            .into_iter()
            .flat_map(|k: Vec<usize>| {
                let lo = k.last().copied().unwrap_or(0);
                (lo..=m).map(move |x| [k.clone(), vec![x]].concat())
            })
            .collect();
    }
    let mut out = Vec::new();
    for labels in crate::klr::rearrangements(multiset) {
        for k in &kappas {
            let mut kappa = k.clone();
            kappa.push(m);
            out.push(StendhalPair { labels: labels.clone(), kappa });
        }
    }
    out.sort();
    out
}

/// Label multisets of size `m`, sorted.
pub fn multisets(cartan: &CartanDatum, m: usize) -> Vec<Vec<Node>> {
    fn rec(nodes: &[Node], start: usize, left: usize, cur: &mut Vec<Node>, out: &mut Vec<Vec<Node>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..nodes.len() {
            cur.push(nodes[k]);
            rec(nodes, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let nodes: Vec<Node> = cartan.nodes().collect();
    let mut out = Vec::new();
    rec(&nodes, 0, m, &mut Vec::new(), &mut out);
    out
}

/// Which red-black crossing: a `Right` crossing carries the black strand from the
/// left of the red string (bottom) to its right (top).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossDir {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    /// Dot on black strand `j`.
    Dot(usize),
    /// Crossing of black strands `l` and `l + 1`.
    BlackCross(usize),
    RedCross {
        red: usize,
        black: usize,
        direction: CrossDir,
    },
}

/// A composable list of elementary diagrams, read bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramWord {
    pub bottom: StendhalPair,
    pub letters: Vec<Letter>,
}

/// Position in the slice of black strand `j`.
fn black_position(slice: &[Strand], j: usize) -> Option<usize> {
    slice.iter().enumerate().filter(|(_, s)| matches!(s, Strand::Black(_))).nth(j).map(|(p, _)| p)
}

impl DiagramWord {
    /// Slice positions of the crossings, with dots as `None`.
    pub(crate) fn positions(&self) -> Result<Vec<(Option<usize>, Option<usize>)>> {
        let mut slice = self.bottom.slice();
        let m = self.bottom.m();
        let mut out = Vec::new();
        for letter in &self.letters {
            match *letter {
                Letter::Dot(j) => {
                    if j >= m {
                        return Err(Error::Invalid(format!("no black strand {j}")));
                    }
                    out.push((Some(j), None));
                }
                Letter::BlackCross(l) => {
                    let p = black_position(&slice, l).ok_or_else(|| Error::Invalid(format!("no black strand {l}")))?;
                    if !matches!(slice.get(p + 1), Some(Strand::Black(_))) {
                        return Err(Error::Invalid(format!("black strands {l} and {} are not adjacent", l + 1)));
                    }
                    slice.swap(p, p + 1);
                    out.push((None, Some(p)));
                }
                Letter::RedCross { red, black, direction } => {
                    let p = black_position(&slice, black)
                        .ok_or_else(|| Error::Invalid(format!("no black strand {black}")))?;
                    let q = match direction {
                        CrossDir::Right => p,
                        CrossDir::Left => {
                            p.checked_sub(1).ok_or_else(|| Error::Invalid("nothing to the left".into()))?
                        }
                    };
                    let other = match direction {
                        CrossDir::Right => slice.get(p + 1),
                        CrossDir::Left => slice.get(q),
                    };
                    if other != Some(&Strand::Red(red)) {
                        return Err(Error::Invalid(format!("black strand {black} is not next to red string {red}")));
                    }
                    slice.swap(q, q + 1);
                    out.push((None, Some(q)));
                }
            }
        }
        Ok(out)
    }

    pub fn top(&self) -> Result<StendhalPair> {
        let mut slice = self.bottom.slice();
        for (_, p) in self.positions()? {
            if let Some(p) = p {
                slice.swap(p, p + 1);
            }
        }
        Ok(StendhalPair::from_slice(&slice))
    }

    /// `2·#dots + Σ −⟨i,j⟩ over black crossings + Σ λ^{(k)}_i over red crossings`.
    pub fn degree(&self, cartan: &CartanDatum, lambdas: &WeightList) -> Result<i64> {
        let mut slice = self.bottom.slice();
        let mut d = 0;
        for (dot, p) in self.positions()? {
            if dot.is_some() {
                d += 2;
            }
            if let Some(p) = p {
                d += crossing_degree(cartan, lambdas, slice[p], slice[p + 1]);
                slice.swap(p, p + 1);
            }
        }
        Ok(d)
    }
}

pub(crate) fn crossing_degree(cartan: &CartanDatum, lambdas: &WeightList, u: Strand, v: Strand) -> i64 {
    match (u, v) {
        (Strand::Black(a), Strand::Black(b)) => -cartan.a(a, b),
        (Strand::Black(a), Strand::Red(k)) | (Strand::Red(k), Strand::Black(a)) => lambdas.level(k, a) as i64,
        (Strand::Red(_), Strand::Red(_)) => 0,
    }
}

/// How the red bigon is deformed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deformation {
    /// `y^{λ_i}`.
    Zero,
    /// One-parameter family through the integer point `ζ`, homogenized by a
    /// degree-2 parameter `c`: the bigon becomes `Π_z (y + c ζ_z)`.
    Ray(BTreeMap<ZVar, i128>),
    /// Generic: the bigon is `Π_z (y + z)` with formal `z`.
    Symbolic,
}

impl Deformation {
    /// A ray through rational values; requires every variable and pairwise distinct values.
    pub fn ray(lambdas: &WeightList, values: &BTreeMap<ZVar, Q>) -> Result<Self> {
        let vars = lambdas.z_vars();
        let mut vals = Vec::with_capacity(vars.len());
        for z in &vars {
            vals.push(values.get(z).cloned().ok_or_else(|| Error::MissingAssignment(z.to_string()))?);
        }
        let mut sorted = vals.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedValues);
        }
        // the ray through ζ is the ray through L·ζ; clear denominators
        let mut l = num_bigint::BigInt::from(1);
        for v in &vals {
            l = l.lcm(v.denom());
        }
        let mut out = BTreeMap::new();
        for (z, v) in vars.iter().zip(vals) {
            let n = v.numer() * (&l / v.denom());
            let n = n
                .to_i128()
                .filter(|x| x.abs() < 1 << 40)
                .ok_or_else(|| Error::Invalid(format!("specialization value {v} is too large")))?;
            out.insert(*z, n);
        }
        Ok(Deformation::Ray(out))
    }

    /// Seeded random distinct rationals.
    pub fn random_values(lambdas: &WeightList, seed: u64) -> BTreeMap<ZVar, Q> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = BTreeMap::new();
        let mut seen = Vec::new();
        for z in lambdas.z_vars() {
            loop {
                let v = Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
                if !seen.contains(&v) && !v.is_negative() && v != Q::from_integer(0.into()) {
                    seen.push(v.clone());
                    out.insert(z, v);
                    break;
                }
            }
        }
        out
    }

    pub fn random_ray(lambdas: &WeightList, seed: u64) -> Self {
        Self::ray(lambdas, &Self::random_values(lambdas, seed)).expect("distinct values with every variable assigned")
    }

    /// Number of parameter variables appended after the dot variables.
    pub fn parameter_count(&self, lambdas: &WeightList) -> usize {
        match self {
            Deformation::Zero => 0,
            Deformation::Ray(_) => 1,
            Deformation::Symbolic => lambdas.z_vars().len(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Deformation::Symbolic)
    }
}

/// Cartan datum, red labels and deformation.
#[derive(Clone, Debug)]
pub struct TensorSetup {
    pub cartan: CartanDatum,
    pub lambdas: WeightList,
    pub deformation: Deformation,
}

impl TensorSetup {
    pub fn new(cartan: CartanDatum, lambdas: WeightList, deformation: Deformation) -> Result<Self> {
        for w in &lambdas.weights {
            if w.0.len() != cartan.rank {
                return Err(Error::Invalid(format!("weight {w} has the wrong rank")));
            }
            if !w.is_dominant() {
                return Err(Error::Invalid(format!("weight {w} is not dominant")));
            }
        }
        Ok(TensorSetup { cartan, lambdas, deformation })
    }

    pub fn with_deformation(&self, deformation: Deformation) -> Self {
        TensorSetup { deformation, ..self.clone() }
    }

    pub fn check_size(&self, m: usize) -> Result<()> {
        crate::engine::check_vars(m + self.deformation.parameter_count(&self.lambdas))
    }

    /// Degree weight of each polynomial variable for `m` strands.
    pub fn var_degrees(&self, _m: usize) -> Vec<i64> {
        vec![2; MAX_VARS]
    }

    /// `R_{k,i}(y_l)`: the action of a red bigon on a black strand at position `l`.
    pub fn bigon(&self, m: usize, k: usize, i: Node, l: usize) -> FPoly {
        let level = self.lambdas.level(k, i) as usize;
        let zs: Vec<(usize, ZVar)> =
            self.lambdas.z_vars().into_iter().enumerate().filter(|(_, z)| z.factor == k && z.node == i).collect();
        let y = FPoly::var(l);
        let mut out = FPoly::zero();
        match &self.deformation {
            Deformation::Zero => {
                out = FPoly::one();
                for _ in 0..level {
                    out = out.mul(&y);
                }
            }
            Deformation::Symbolic => {
                out = FPoly::one();
                for (idx, _) in &zs {
                    let mut f = y.clone();
                    f.add_scaled(1, &FPoly::var(m + idx));
                    out = out.mul(&f);
                }
            }
            Deformation::Ray(vals) => {
                let vs: Vec<i128> = zs.iter().map(|(_, z)| vals[z]).collect();
                let c = FPoly::var(m);
                for p in 0..=level {
                    // e_p(ζ) c^p y^{λ−p}
                    let mut ep = 0i128;
                    let mut coeffs = vec![0i128; level + 1];
                    coeffs[0] = 1;
                    for v in &vs {
                        for s in (1..=level).rev() {
                            coeffs[s] += coeffs[s - 1] * v;
                        }
                    }
                    ep += coeffs[p];
                    let mut t = FPoly::one().scale(ep);
                    for _ in 0..p {
                        t = t.mul(&c);
                    }
                    for _ in 0..level - p {
                        t = t.mul(&y);
                    }
                    out.add_scaled(1, &t);
                }
            }
        }
        out
    }

    /// Polynomial value of the generator `e^{(k)}_{i,r}` in the symbolic layout.
    pub(crate) fn a_generator_value(&self, m: usize, k: usize, i: Node, r: u32) -> FPoly {
        let vars: Vec<usize> = self
            .lambdas
            .z_vars()
            .into_iter()
            .enumerate()
            .filter(|(_, z)| z.factor == k && z.node == i)
            .map(|(idx, _)| m + idx)
            .collect();
        elementary(&vars, r as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn a1_setup(ls: &[i64]) -> TensorSetup {
        let c = CartanDatum::new("A1").unwrap();
        let lam = WeightList::new(ls.iter().map(|x| Weight(vec![*x])).collect());
        TensorSetup::new(c, lam, Deformation::Zero).unwrap()
    }

    #[test]
    fn slices_round_trip() {
        let s = StendhalPair::new(vec![1, 2, 1], vec![0, 1, 3]).unwrap();
        assert_eq!(
            s.slice(),
            vec![Strand::Black(1), Strand::Black(2), Strand::Red(2), Strand::Black(1), Strand::Red(1)]
        );
        assert_eq!(StendhalPair::from_slice(&s.slice()), s);
        assert_eq!(s.composition(), vec![1, 2]);
        assert!(!s.is_violated());
        assert_eq!(s.reds_right_of(0), 2);
        assert_eq!(s.reds_right_of(2), 1);
        assert!(StendhalPair::new(vec![1], vec![1, 0, 1]).is_err());
        assert!(StendhalPair::new(vec![1], vec![1, 1]).unwrap().is_violated());
    }

    #[test]
    fn object_enumeration() {
        assert_eq!(objects_for(&[1, 1], 2).len(), 6);
        assert_eq!(objects_for(&[1, 2], 1).len(), 6);
        assert_eq!(objects_for(&[], 2), vec![StendhalPair::red_only(2)]);
        let c = CartanDatum::new("A2").unwrap();
        assert_eq!(multisets(&c, 2), vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn word_degrees() {
        let setup = a1_setup(&[2]);
        let s = StendhalPair::new(vec![1], vec![0, 1]).unwrap();
        let w = DiagramWord {
            bottom: s.clone(),
            letters: vec![
                Letter::RedCross { red: 1, black: 0, direction: CrossDir::Right },
                Letter::RedCross { red: 1, black: 0, direction: CrossDir::Left },
                Letter::Dot(0),
            ],
        };
        assert_eq!(w.degree(&setup.cartan, &setup.lambdas).unwrap(), 6);
        assert_eq!(w.top().unwrap(), s);
        let bad =
            DiagramWord { bottom: s, letters: vec![Letter::RedCross { red: 1, black: 0, direction: CrossDir::Left }] };
        assert!(bad.top().is_err());
    }

    #[test]
    fn ray_values_are_checked() {
        let lam = WeightList::new(vec![Weight(vec![2])]);
        let z = |j| ZVar { factor: 1, node: 1, index: j };
        let same: BTreeMap<ZVar, Q> = [(z(1), q(1)), (z(2), q(1))].into();
        assert_eq!(Deformation::ray(&lam, &same), Err(Error::RepeatedValues));
        let vals: BTreeMap<ZVar, Q> = [(z(1), qf(1, 2)), (z(2), qf(1, 3))].into();
        assert_eq!(Deformation::ray(&lam, &vals).unwrap(), Deformation::Ray([(z(1), 3), (z(2), 2)].into()));
        let partial: BTreeMap<ZVar, Q> = [(z(1), q(1))].into();
        assert!(matches!(Deformation::ray(&lam, &partial), Err(Error::MissingAssignment(_))));
        let r = Deformation::random_values(&lam, 7);
        assert_eq!(r, Deformation::random_values(&lam, 7));
        assert_ne!(r[&z(1)], r[&z(2)]);
    }

    #[test]
    fn bigon_polynomials() {
        let setup = a1_setup(&[2]);
        assert_eq!(setup.bigon(1, 1, 1, 0), FPoly::var(0).mul(&FPoly::var(0)));
        let sym = setup.with_deformation(Deformation::Symbolic);
        // (y + z1)(y + z2)
        assert_eq!(sym.bigon(1, 1, 1, 0).len(), 4);
    }
}
