//! Bubbles as symmetric functions and the slide identities past black strands and
//! red strings, checked as identities in `ℚ[y] ⊗ Π` and `𝔸 ⊗ Π`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Node, SignedIndex, Weight};
use crate::error::Result;
use crate::poly::{Monomial, Poly};
use crate::rational::{binomial, q, Q};
use crate::symfunc::{
    coproduct, e, e_series, h, h_series, inverse_product_series, p, product_series, split_slot, sym_degree,
    tensor_terms, APoly, AVar, EVar, SeriesX, SymFunc, WeightList, ZVar,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
}

/// A bubble labelled `i` in a region of weight `μ` carrying `♠ + r` dots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BubbleSpec {
    pub node: Node,
    pub weight: Weight,
    pub orientation: Orientation,
    pub dot_count: i64,
}

impl BubbleSpec {
    pub fn degree(&self) -> i64 {
        2 * self.dot_count
    }

    /// Number of dots actually drawn.
    pub fn literal_dots(&self) -> i64 {
        let pairing = self.weight.0[self.node - 1];
        match self.orientation {
            Orientation::Clockwise => pairing - 1 + self.dot_count,
            Orientation::CounterClockwise => -pairing - 1 + self.dot_count,
        }
    }

    pub fn is_fake(&self) -> bool {
        self.literal_dots() < 0
    }
}

/// The symmetric function a bubble evaluates to.
pub fn bubble_value(cartan: &CartanDatum, spec: &BubbleSpec) -> SymFunc {
    if spec.dot_count < 0 {
        return SymFunc::zero();
    }
    let r = spec.dot_count as u32;
    let c = cartan.bubble_param(spec.node, &spec.weight);
    match spec.orientation {
        Orientation::Clockwise => h(spec.node, r).scale(&c),
        Orientation::CounterClockwise => {
            let sign = if r % 2 == 0 { q(1) } else { q(-1) };
            e(spec.node, r).scale(&(sign / c))
        }
    }
}

/// Whether the clockwise and counterclockwise bubble series multiply to 1 up to `order`.
pub fn grassmannian_check(cartan: &CartanDatum, node: Node, weight: &Weight, order: usize) -> bool {
    let series = |o| {
        SeriesX::from_fn(order, |r| {
            bubble_value(cartan, &BubbleSpec { node, weight: weight.clone(), orientation: o, dot_count: r as i64 })
        })
    };
    series(Orientation::Clockwise).mul(&series(Orientation::CounterClockwise)).is_one()
}

/// Variables appearing in slide results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlideVar {
    /// A dot on the black strand the bubble slid past.
    Dot,
    Coef(AVar),
    Sym(EVar),
}

impl fmt::Display for SlideVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlideVar::Dot => write!(f, "y"),
            SlideVar::Coef(a) => write!(f, "{a}"),
            SlideVar::Sym(s) => write!(f, "{s}"),
        }
    }
}

pub fn slide_degree(v: &SlideVar) -> i64 {
    match v {
        SlideVar::Dot => 2,
        SlideVar::Coef(a) => 2 * a.r as i64,
        SlideVar::Sym(s) => sym_degree(s),
    }
}

/// `Σ (left factor) ⊗ (symmetric function remaining on the far side)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlideResult {
    pub expr: Poly<SlideVar>,
    pub order: usize,
}

impl SlideResult {
    /// Splits into `(dot or 𝔸 part, remainder, coefficient)`.
    pub fn terms(&self) -> Vec<(Poly<SlideVar>, SymFunc, Q)> {
        self.expr
            .terms()
            .map(|(m, c)| {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (v, k) in m.factors() {
                    match v {
                        SlideVar::Sym(s) => right.push((*s, *k)),
                        other => left.push((*other, *k)),
                    }
                }
                (
                    Poly::term(q(1), Monomial::from_pairs(left)),
                    SymFunc::term(q(1), Monomial::from_pairs(right)),
                    c.clone(),
                )
            })
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.expr.is_homogeneous(slide_degree)
    }

    pub fn degree(&self) -> Option<i64> {
        self.expr.max_degree(slide_degree)
    }
}

fn sym_part(f: &SymFunc) -> Poly<SlideVar> {
    f.map_vars(|v| SlideVar::Sym(*v))
}

fn coef_part(a: &APoly) -> Poly<SlideVar> {
    a.map_vars(|v| SlideVar::Coef(*v))
}

/// Slides a bubble `b_{μ+α_i}(f)` right past an `i`-strand:
/// `e_j(x) ↦ (1 + y x)^{⟨j,i⟩} e_j(x)`, extended multiplicatively.
pub fn slide_black(cartan: &CartanDatum, f: &SymFunc, i: SignedIndex, order: usize) -> SlideResult {
    let alpha = cartan.alpha_signed(i);
    let expr = f.substitute(|v| {
        let pairing = alpha.0[v.node - 1];
        let mut acc = Poly::zero();
        for a in 0..=v.r {
            let c = binomial(pairing, a);
            if c == q(0) {
                continue;
            }
            let y = Poly::term(c, Monomial::from_pairs([(SlideVar::Dot, a)]));
            acc = acc.add(&y.mul(&sym_part(&e(v.node, v.r - a))));
        }
        acc
    });
    SlideResult { expr, order }
}

/// Slides `b_{μ+λ^{(k)}}(f)` right past the red string `(k)`: with `δ(f) = Σ g_s ⊗ g′_s`
/// the result is `Σ a_k(g′_s) ⊗ g_s`.
pub fn slide_red(lambdas: &WeightList, f: &SymFunc, k: usize) -> Result<SlideResult> {
    let mut expr = Poly::zero();
    let order = crate::symfunc::degree_of(f).unwrap_or(0).max(0) as usize / 2;
    for (g, g2, c) in tensor_terms(&coproduct(f)) {
        let a = lambdas.project_a(k, &g2)?;
        if a.is_zero() {
            continue;
        }
        expr.add_scaled(&c, &coef_part(&a).mul(&sym_part(&g)));
    }
    Ok(SlideResult { expr, order })
}

/// Slides past `(k)` and then past `(k2)`, applying both slides in sequence.
pub fn slide_red_twice(lambdas: &WeightList, f: &SymFunc, k: usize, k2: usize) -> Result<SlideResult> {
    let first = slide_red(lambdas, f, k)?;
    let mut expr = Poly::zero();
    for (left, g, c) in first.terms() {
        let second = slide_red(lambdas, &g, k2)?;
        expr.add_scaled(&c, &left.mul(&second.expr));
    }
    Ok(SlideResult { expr, order: first.order })
}

/// The same double slide read off from `(δ ⊗ id) δ (f)`.
pub fn slide_red_twice_coassociative(lambdas: &WeightList, f: &SymFunc, k: usize, k2: usize) -> Result<SlideResult> {
    let triple = split_slot(&coproduct(f), 0);
    let mut expr = Poly::zero();
    for (m, c) in triple.terms() {
        let mut parts: [Vec<(EVar, u32)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (v, e) in m.factors() {
            parts[v.slot as usize].push((v.var, *e));
        }
        let [g, g_mid, g_last] = parts.map(|ps| SymFunc::term(q(1), Monomial::from_pairs(ps)));
        let a = lambdas.project_a(k, &g_last)?.mul(&lambdas.project_a(k2, &g_mid)?);
        expr.add_scaled(c, &coef_part(&a).mul(&sym_part(&g)));
    }
    Ok(SlideResult { expr, order: crate::symfunc::degree_of(f).unwrap_or(0).max(0) as usize / 2 })
}

/// Outcome of one identity in the symbolic battery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
}

fn check(name: &str, results: impl IntoIterator<Item = bool>) -> IdentityCheck {
    let mut cases = 0;
    let mut passed = true;
    for r in results {
        cases += 1;
        passed &= r;
    }
    IdentityCheck { name: name.to_string(), passed, cases }
}

/// Partitions of `n` with parts at most `max`.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Elementary monomials of degree at most `2 * half` on the given nodes, one partition per node.
fn battery(nodes: &[Node], half: u32) -> Vec<SymFunc> {
    let mut out = Vec::new();
    for n in 0..=half {
        for part in partitions(n, n) {
            for (idx, node) in nodes.iter().enumerate() {
                let mut f = SymFunc::one();
                for (j, r) in part.iter().enumerate() {
                    // alternate nodes across parts for mixed monomials
                    let nd = if j % 2 == 1 { nodes[(idx + 1) % nodes.len()] } else { *node };
                    f = f.mul(&e(nd, *r));
                }
                out.push(f);
            }
        }
    }
    out.sort_by_key(|f| f.to_string());
    out.dedup();
    out
}

fn distinct_values(count: usize) -> Vec<Q> {
    (0..count).map(|j| q(2 * j as i64 + 1) / q(j as i64 + 2)).collect()
}

/// Runs every identity of the symbolic battery.
pub fn identity_suite(
    cartan: &CartanDatum,
    lambdas: &WeightList,
    order: usize,
    coassoc_degree: u32,
) -> Vec<IdentityCheck> {
    let nodes: Vec<Node> = cartan.nodes().collect();
    let mut out = Vec::new();

    out.push(check(
        "h(x)e(-x)=1",
        nodes.iter().map(|i| h_series(*i, order).mul(&e_series(*i, order).negate_x()).is_one()),
    ));

    let gens = battery(&nodes, coassoc_degree / 2);
    out.push(check(
        "coproduct coassociative",
        gens.iter().map(|f| {
            let d = coproduct(f);
            split_slot(&d, 0) == split_slot(&d, 1)
        }),
    ));

    let mut box_weights = vec![Vec::new()];
    for _ in 0..cartan.rank {
        box_weights = box_weights
            .into_iter()
            .flat_map(|w: Vec<i64>| (-2..=2).map(move |x| [w.clone(), vec![x]].concat()))
            .collect();
    }
    out.push(check(
        "infinite grassmannian",
        box_weights.iter().flat_map(|w| {
            let w = Weight(w.clone());
            nodes.iter().map(move |i| grassmannian_check(cartan, *i, &w, order)).collect::<Vec<_>>()
        }),
    ));

    out.push(check(
        "degree zero and negative bubbles",
        nodes.iter().flat_map(|i| {
            let w = Weight::zero(cartan.rank);
            let c = cartan.bubble_param(*i, &w);
            let spec = |o, r| BubbleSpec { node: *i, weight: w.clone(), orientation: o, dot_count: r };
            vec![
                bubble_value(cartan, &spec(Orientation::Clockwise, -1)).is_zero(),
                bubble_value(cartan, &spec(Orientation::CounterClockwise, -1)).is_zero(),
                bubble_value(cartan, &spec(Orientation::Clockwise, 0)) == SymFunc::constant(c.clone()),
                bubble_value(cartan, &spec(Orientation::CounterClockwise, 0)) == SymFunc::constant(q(1) / c),
            ]
        }),
    ));

    let signed: Vec<SignedIndex> = nodes.iter().flat_map(|i| [SignedIndex::pos(*i), SignedIndex::neg(*i)]).collect();
    let mut black_e = Vec::new();
    let mut black_h = Vec::new();
    let mut black_p = Vec::new();
    let mut black_hom = Vec::new();
    for &i in &signed {
        let alpha = cartan.alpha_signed(i);
        for &j in &nodes {
            let pairing = alpha.0[j - 1];
            let y_series = |exp: i64| {
                SeriesX::from_fn(order, |r| {
                    Poly::term(binomial(exp, r as u32), Monomial::from_pairs([(SlideVar::Dot, r as u32)]))
                })
            };
            let slid_e = e_series(j, order).map(|f| slide_black(cartan, f, i, order).expr);
            black_e.push(slid_e == y_series(pairing).mul(&e_series(j, order).map(sym_part)));
            let slid_h = h_series(j, order).map(|f| slide_black(cartan, f, i, order).expr);
            black_h.push(slid_h == y_series(-pairing).negate_x().mul(&h_series(j, order).map(sym_part)));
            for r in 1..=order as u32 {
                let slid = slide_black(cartan, &p(j, r), i, order);
                black_hom.push(slid.is_homogeneous());
                let y_r = Poly::term(q(pairing), Monomial::from_pairs([(SlideVar::Dot, r)]));
                black_p.push(slid.expr == sym_part(&p(j, r)).add(&y_r));
            }
        }
    }
    out.push(check("black slide of e(x)", black_e));
    out.push(check("black slide of h(x)", black_h));
    out.push(check("black slide of power sums", black_p));
    out.push(check("black slides homogeneous", black_hom));

    let mut red_e = Vec::new();
    let mut red_h = Vec::new();
    let mut red_p = Vec::new();
    let mut red_hom = Vec::new();
    let mut red_twice = Vec::new();
    let mut ccw_through_red = Vec::new();
    let mut cw_through_red = Vec::new();
    let zs = lambdas.z_vars();
    let vals: BTreeMap<ZVar, Q> = zs.iter().cloned().zip(distinct_values(zs.len())).collect();
    let specialize_left = |expr: &Poly<SlideVar>| -> Poly<SlideVar> {
        // specialize the 𝔸 part, keep the rest
        let mut out = Poly::zero();
        for (m, c) in expr.terms() {
            let mut coef = APoly::one();
            let mut rest = Vec::new();
            for (v, k) in m.factors() {
                match v {
                    SlideVar::Coef(a) => coef = coef.mul(&APoly::var(*a).pow(*k)),
                    other => rest.push((*other, *k)),
                }
            }
            let x = lambdas.specialize(&coef, &vals).expect("all variables assigned");
            out.add_term(c * x, Monomial::from_pairs(rest));
        }
        out
    };
    for k in 1..=lambdas.len() {
        for &i in &nodes {
            let z_i: Vec<Q> = zs.iter().filter(|z| z.factor == k && z.node == i).map(|z| vals[z].clone()).collect();
            let lhs_e = e_series(i, order).map(|f| specialize_left(&slide_red(lambdas, f, k).expect("valid factor").expr));
            let rhs_e =
                product_series(&z_i, order).map(|x| Poly::constant(x.clone())).mul(&e_series(i, order).map(sym_part));
            red_e.push(lhs_e == rhs_e);
            let lhs_h = h_series(i, order).map(|f| specialize_left(&slide_red(lambdas, f, k).expect("valid factor").expr));
            let rhs_h = inverse_product_series(&z_i, order)
                .map(|x| Poly::constant(x.clone()))
                .mul(&h_series(i, order).map(sym_part));
            red_h.push(lhs_h == rhs_h);
            for r in 1..=order as u32 {
                let slid = slide_red(lambdas, &p(i, r), k).expect("valid factor");
                red_hom.push(slid.is_homogeneous());
                let ap = lambdas.project_a(k, &p(i, r)).expect("valid factor");
                red_p.push(slid.expr == coef_part(&ap).add(&sym_part(&p(i, r))));
            }
            let a_e = |r: u32| coef_part(&lambdas.project_a(k, &e(i, r)).expect("valid factor"));
            let sgn = |r: u32| if r % 2 == 0 { q(1) } else { q(-1) };
            for s in 0..=6u32 {
                // slide of a counterclockwise bubble (−1)^s e_s
                let lhs = slide_red(lambdas, &e(i, s).scale(&sgn(s)), k).expect("valid factor").expr;
                let mut rhs = Poly::zero();
                for r in 0..=s {
                    rhs.add_scaled(&(sgn(r) * sgn(s - r)), &a_e(r).mul(&sym_part(&e(i, s - r))));
                }
                ccw_through_red.push(lhs == rhs);
                // pulling a clockwise bubble h_s through
                let mut acc = Poly::zero();
                for r in 0..=s {
                    let slid = slide_red(lambdas, &h(i, s - r), k).expect("valid factor").expr;
                    acc.add_scaled(&sgn(r), &a_e(r).mul(&slid));
                }
                cw_through_red.push(acc == sym_part(&h(i, s)));
            }
        }
        for k2 in 1..=lambdas.len() {
            for f in battery(&nodes, 4) {
                let a = slide_red_twice(lambdas, &f, k, k2).expect("valid factor");
                let b = slide_red_twice_coassociative(lambdas, &f, k, k2).expect("valid factor");
                red_twice.push(a == b && a.is_homogeneous());
            }
        }
    }
    out.push(check("red slide of e(x)", red_e));
    out.push(check("red slide of h(x)", red_h));
    out.push(check("red slide of power sums", red_p));
    out.push(check("red slides homogeneous", red_hom));
    out.push(check("two red strings", red_twice));
    out.push(check("counterclockwise bubble through red", ccw_through_red));
    out.push(check("clockwise bubble through red", cw_through_red));
    out
}
