use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;

use cocenter::current::{shapovalov_pair, tensor_character, ChevalleyData, CurrentGen, CurrentModule, ModuleKind};
use cocenter::klr::{KlrAlgebra, KlrElement};
use cocenter::linalg::{Echelon, ModEchelon, TrackedEchelon};
use cocenter::rational::q;
use cocenter::stendhal::StendhalPair;
use cocenter::symfunc::WeightList;
use cocenter::{CartanDatum, Node, Weight, Q};

/// Rank by plain Gaussian elimination over the rationals.
fn oracle_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for k in 0..cols {
                    let t = &f * &m[rank][k];
                    m[i][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn sparse(r: &[i64]) -> Vec<(u32, i128)> {
    r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i as u32, *x as i128)).collect()
}

fn arb_pair(m: usize, n: usize) -> impl Strategy<Value = StendhalPair> {
    (proptest::collection::vec(1usize..3, m), proptest::collection::vec(0..=m, n)).prop_map(move |(labels, mut k)| {
        k.sort();
        k.push(m);
        StendhalPair::new(labels, k).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn echelon_ranks_agree_with_elimination(rows in proptest::collection::vec(proptest::collection::vec(-4i64..5, 6), 0..8)) {
        let expected = oracle_rank(&rows);
        let mut e = Echelon::new();
        let mut p = ModEchelon::new();
        let mut t = TrackedEchelon::new();
        for (i, r) in rows.iter().enumerate() {
            let s = sparse(r);
            e.insert_int(&s);
            p.insert_int(&s);
            t.insert(s.iter().map(|(k, x)| (*k, Q::from_integer((*x).into()))).collect(), Some(i));
        }
        prop_assert_eq!(e.rank(), expected);
        prop_assert_eq!(t.rank(), expected);
        prop_assert!(p.rank() <= expected);
    }

    #[test]
    fn every_row_lies_in_the_span(rows in proptest::collection::vec(proptest::collection::vec(-6i64..7, 5), 1..6)) {
        let mut e = Echelon::new();
        for r in &rows {
            e.insert_int(&sparse(r));
        }
        for r in &rows {
            prop_assert!(e.contains_int(&sparse(r)));
        }
    }

    #[test]
    fn klr_products_associate(seq in proptest::collection::vec(1usize..3, 3), gens in proptest::collection::vec((0usize..2, 0usize..3), 3)) {
        let alg = KlrAlgebra::new(CartanDatum::new("A2").unwrap());
        // three composable generators, each starting where the previous ends
        let mut cur: Vec<Node> = seq.clone();
        let mut elems = Vec::new();
        for (kind, pos) in gens {
            let e = if kind == 0 { KlrElement::dot(&cur, pos) } else { KlrElement::crossing(&cur, pos.min(1)) };
            cur = e.top.clone();
            elems.push(e);
        }
        let (a, b, c) = (&elems[2], &elems[1], &elems[0]);
        let left = alg.multiply(&alg.multiply(a, b).unwrap(), c).unwrap();
        let right = alg.multiply(a, &alg.multiply(b, c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn idempotents_are_units(seq in proptest::collection::vec(1usize..3, 3), pos in 0usize..2) {
        let alg = KlrAlgebra::new(CartanDatum::new("A2").unwrap());
        let x = KlrElement::crossing(&seq, pos);
        prop_assert_eq!(alg.multiply(&KlrElement::idempotent(&x.top), &x).unwrap(), x.clone());
        prop_assert_eq!(alg.multiply(&x, &KlrElement::idempotent(&seq)).unwrap(), x);
    }

    #[test]
    fn contravariant_pairing_is_symmetric(s in arb_pair(2, 2), perm in any::<bool>(), l in (0i64..3, 0i64..3, 0i64..3, 0i64..3)) {
        let c = CartanDatum::new("A2").unwrap();
        let lambdas = WeightList::new(vec![Weight(vec![l.0, l.1]), Weight(vec![l.2, l.3])]);
        let mut labels = s.labels.clone();
        if perm {
            labels.reverse();
        }
        let t = StendhalPair::new(labels, vec![0, s.kappa[1], 2]).unwrap();
        let st = shapovalov_pair(&c, &lambdas, &s, &t).unwrap();
        let ts = shapovalov_pair(&c, &lambdas, &t, &s).unwrap();
        prop_assert_eq!(st, ts);
    }

    #[test]
    fn norms_are_nonnegative(s in arb_pair(2, 2), l in (0i64..3, 0i64..3)) {
        let c = CartanDatum::new("A1").unwrap();
        let lambdas = WeightList::new(vec![Weight(vec![l.0]), Weight(vec![l.1])]);
        let mut s = s;
        s.labels = vec![1; s.labels.len()];
        let v = shapovalov_pair(&c, &lambdas, &s, &s).unwrap();
        prop_assert!(v >= Q::zero());
    }
}

fn sl2() -> Arc<ChevalleyData> {
    Arc::new(ChevalleyData::new(CartanDatum::new("A1").unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_characters_commute_and_multiply(a in 0i64..4, b in 0i64..4) {
        let c = sl2();
        let wa = CurrentModule::new(c.clone(), Weight(vec![a]), ModuleKind::LocalWeyl, 10, None).unwrap();
        let wb = CurrentModule::new(c.clone(), Weight(vec![b]), ModuleKind::LocalWeyl, 10, None).unwrap();
        let ab = tensor_character(&[wa.character(), wb.character()], 1, 10);
        let ba = tensor_character(&[wb.character(), wa.character()], 1, 10);
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab.values().sum::<usize>(), wa.total_dim() * wb.total_dim());
    }

    #[test]
    fn highest_weight_action_commutes_with_the_current_algebra(
        l in 1i64..3, idx in 0usize..6, basis in 0usize..3, t in 0u32..2, r in 1u32..3,
    ) {
        let c = sl2();
        let m = CurrentModule::new(c.clone(), Weight(vec![l]), ModuleKind::GlobalWeyl, 6, None).unwrap();
        let vs: Vec<_> = [(Weight(vec![l]), 0), (Weight(vec![l - 2]), 0), (Weight(vec![l - 2]), 1), (Weight(vec![l - 2]), 2)]
            .iter()
            .flat_map(|(w, d)| m.basis(w, *d))
            .collect();
        let v = &vs[idx % vs.len()];
        let x = CurrentGen { basis, t };
        let lhs = m.pi_action(v, 1, r).and_then(|u| m.act(x, &u));
        let rhs = m.act(x, v).and_then(|u| m.pi_action(&u, 1, r));
        if let (Ok(lhs), Ok(rhs)) = (lhs, rhs) {
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn scaling_a_row_keeps_rank() {
    let mut e = Echelon::new();
    assert!(e.insert_int(&[(0, 3), (2, -6)]));
    assert!(!e.insert_int(&[(0, -1), (2, 2)]));
    assert_eq!(e.rank(), 1);
}
