use serde::{Deserialize, Serialize};

use super::block::compile_cross;
use super::{StendhalPair, TensorSetup};
use crate::engine::{apply_ops, artin_tests, FPoly, MAX_VARS};
use crate::error::Result;

/// One instance of a defining relation, checked for homogeneity and for
/// validity in the polynomial representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub bottom: StendhalPair,
    pub degrees: Vec<i64>,
    pub homogeneous: bool,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug)]
enum L {
    /// Crossing at slice positions `p, p+1`.
    X(usize),
    /// Dot on black strand `j`.
    D(usize),
}

/// `coef · (word)`, the polynomial multiplied at the top.
struct Term {
    coef: FPoly,
    word: Vec<L>,
}

fn term(c: i128, word: &[L]) -> Term {
    Term { coef: FPoly::one().scale(c), word: word.to_vec() }
}

fn check(setup: &TensorSetup, name: String, bottom: StendhalPair, terms: Vec<Term>) -> RelationCheck {
    let m = bottom.m();
    let weights = vec![2; MAX_VARS];
    let mut degrees = Vec::new();
    let mut tops = Vec::new();
    let mut compiled = Vec::new();
    for t in &terms {
        let mut slice = bottom.slice();
        let mut ops = Vec::new();
        let mut d = 0;
        for l in &t.word {
            match *l {
                L::X(p) => {
                    let (op, dx, _) = compile_cross(setup, m, &mut slice, p);
                    ops.extend(op);
                    d += dx;
                }
                L::D(j) => {
                    ops.push(crate::engine::Op::MulVar(j));
                    d += 2;
                }
            }
        }
        if !t.coef.is_zero() {
            let homogeneous = t.coef.is_homogeneous(&weights);
            let cd = t.coef.degree(&weights).unwrap_or(0);
            degrees.push(if homogeneous { d + cd } else { i64::MIN });
        }
        if !t.coef.is_zero() {
            tops.push(slice);
        }
        compiled.push(ops);
    }
    let homogeneous = !degrees.contains(&i64::MIN) && degrees.windows(2).all(|w| w[0] == w[1]);
    let mut holds = tops.windows(2).all(|w| w[0] == w[1]);
    for e in artin_tests(&bottom.labels) {
        let f = FPoly::monomial(e, 1);
        let mut sum = FPoly::zero();
        for (t, ops) in terms.iter().zip(&compiled) {
            sum.add_scaled(1, &t.coef.mul(&apply_ops(ops, &f)));
        }
        holds &= sum.is_zero();
    }
    RelationCheck { name, bottom, degrees, homogeneous, holds }
}

/// Every instance of the local relations for the nodes of the Cartan datum and
/// the red strings of the setup.
pub fn relation_battery(setup: &TensorSetup) -> Result<Vec<RelationCheck>> {
    setup.check_size(3)?;
    let c = &setup.cartan;
    let n = setup.lambdas.len();
    let nodes: Vec<usize> = c.nodes().collect();
    let mut out = Vec::new();
    let left = |labels: Vec<usize>| {
        let m = labels.len();
        let mut kappa = vec![0; n + 1];
        kappa[n] = m;
        StendhalPair { labels, kappa }
    };
    let y = FPoly::var;
    for &i in &nodes {
        for &j in &nodes {
            let b = left(vec![i, j]);
            if i != j {
                out.push(check(
                    setup,
                    format!("dot slide ({i},{j}) left"),
                    b.clone(),
                    vec![term(1, &[L::D(0), L::X(0)]), term(-1, &[L::X(0), L::D(1)])],
                ));
                out.push(check(
                    setup,
                    format!("dot slide ({i},{j}) right"),
                    b.clone(),
                    vec![term(1, &[L::D(1), L::X(0)]), term(-1, &[L::X(0), L::D(0)])],
                ));
            } else {
                out.push(check(
                    setup,
                    format!("nil-Hecke ({i},{i}) top"),
                    b.clone(),
                    vec![term(1, &[L::X(0), L::D(0)]), term(-1, &[L::D(1), L::X(0)]), term(-1, &[])],
                ));
                out.push(check(
                    setup,
                    format!("nil-Hecke ({i},{i}) bottom"),
                    b.clone(),
                    vec![term(1, &[L::D(0), L::X(0)]), term(-1, &[L::X(0), L::D(1)]), term(-1, &[])],
                ));
            }
            let q = if i == j {
                FPoly::zero()
            } else if c.a(i, j) == 0 {
                FPoly::one()
            } else {
                let mut g = y(0).scale(c.scalar_t(i, j) as i128);
                g.add_scaled(c.scalar_t(j, i) as i128, &y(1));
                g
            };
            out.push(check(
                setup,
                format!("double crossing ({i},{j})"),
                b,
                vec![term(1, &[L::X(0), L::X(0)]), Term { coef: q.scale(-1), word: vec![] }],
            ));
            for &k in &nodes {
                let deviation = if i == k && c.a(i, j) == -1 { c.scalar_t(i, j) as i128 } else { 0 };
                out.push(check(
                    setup,
                    format!("braid ({i},{j},{k})"),
                    left(vec![i, j, k]),
                    vec![
                        term(1, &[L::X(0), L::X(1), L::X(0)]),
                        term(-1, &[L::X(1), L::X(0), L::X(1)]),
                        term(-deviation, &[]),
                    ],
                ));
            }
        }
    }
    for k in 1..=n {
        // a single red string (k) with the given blacks placed around it
        let with_red = |labels: Vec<usize>, right: usize| {
            let m = labels.len();
            let mut kappa = vec![m; n + 1];
            for x in kappa.iter_mut().take(k - 1) {
                *x = 0;
            }
            kappa[k - 1] = right;
            StendhalPair { labels, kappa }
        };
        for &i in &nodes {
            let r = setup.bigon(1, k, i, 0);
            out.push(check(
                setup,
                format!("red bigon (k={k},{i}) from the left"),
                with_red(vec![i], 0),
                vec![term(1, &[L::X(n - k), L::X(n - k)]), Term { coef: r.scale(-1), word: vec![] }],
            ));
            out.push(check(
                setup,
                format!("red bigon (k={k},{i}) from the right"),
                with_red(vec![i], 1),
                vec![term(1, &[L::X(n - k), L::X(n - k)]), Term { coef: r.scale(-1), word: vec![] }],
            ));
            out.push(check(
                setup,
                format!("dot through red (k={k},{i})"),
                with_red(vec![i], 0),
                vec![term(1, &[L::D(0), L::X(n - k)]), term(-1, &[L::X(n - k), L::D(0)])],
            ));
            for &j in &nodes {
                let p = n - k;
                // black i, red k, black j
                let mid = with_red(vec![i, j], 1);
                let correction = if i == j { setup.bigon(2, k, i, 0).demazure(0, 1) } else { FPoly::zero() };
                out.push(check(
                    setup,
                    format!("red triple point (k={k},{i},{j})"),
                    mid,
                    vec![
                        term(1, &[L::X(p), L::X(p + 1), L::X(p)]),
                        term(-1, &[L::X(p + 1), L::X(p), L::X(p + 1)]),
                        Term { coef: correction.scale(-1), word: vec![] },
                    ],
                ));
                out.push(check(
                    setup,
                    format!("red slides under a crossing (k={k},{i},{j}) left"),
                    with_red(vec![i, j], 0),
                    vec![term(1, &[L::X(p), L::X(p + 1), L::X(p)]), term(-1, &[L::X(p + 1), L::X(p), L::X(p + 1)])],
                ));
                out.push(check(
                    setup,
                    format!("red slides under a crossing (k={k},{i},{j}) right"),
                    with_red(vec![i, j], 2),
                    vec![term(1, &[L::X(p), L::X(p + 1), L::X(p)]), term(-1, &[L::X(p + 1), L::X(p), L::X(p + 1)])],
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanDatum, Weight};
    use crate::stendhal::Deformation;
    use crate::symfunc::WeightList;

    #[test]
    fn all_relations_hold_and_are_homogeneous() {
        for (t, ls) in [("A1", vec![vec![2], vec![1]]), ("A2", vec![vec![1, 0], vec![1, 1]])] {
            let c = CartanDatum::new(t).unwrap();
            let lam = WeightList::new(ls.into_iter().map(Weight).collect());
            for def in [Deformation::Zero, Deformation::Symbolic, Deformation::random_ray(&lam, 3)] {
                let setup = TensorSetup::new(c.clone(), lam.clone(), def).unwrap();
                let checks = relation_battery(&setup).unwrap();
                assert!(checks.len() > 10);
                for r in &checks {
                    assert!(r.homogeneous && r.holds, "{t}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn a_wrong_relation_is_caught() {
        let c = CartanDatum::new("A1").unwrap();
        let lam = WeightList::new(vec![Weight(vec![1])]);
        let setup = TensorSetup::new(c, lam, Deformation::Zero).unwrap();
        let b = StendhalPair { labels: vec![1, 1], kappa: vec![2, 2] };
        let r = check(&setup, "bad".into(), b, vec![term(1, &[L::D(0)]), term(-1, &[])]);
        assert!(!r.homogeneous && !r.holds);
    }
}
