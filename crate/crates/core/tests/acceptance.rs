//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact (rational arithmetic, tolerance 0). Cutoffs are pinned below.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use cocenter::bubbles::identity_suite;
use cocenter::cartan::{CartanDatum, Node, Weight};
use cocenter::current::{shapovalov_pair, weyl_graded_char, ChevalleyData};
use cocenter::klr::{all_sequences, rearrangements, KlrAlgebra, KlrBasisElement, KlrElement};
use cocenter::rational::Q;
use cocenter::stendhal::{multisets, objects_for, relation_battery, Block, Deformation, TensorSetup};
use cocenter::symfunc::WeightList;
use cocenter::trace::{cocenter_dims, crossing_free_span_check, flatness_report, phi_image_span_check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SERIES_ORDER: usize = 10;
const COASSOC_DEGREE: u32 = 20;
const SLIDE_ORDER: usize = 8;
const KLR_M_MAX: usize = 3;
const KLR_DEGREE: i64 = 8;
const TRIPLES: usize = 500;
const M_MAX: usize = 3;
const DEGREE: i64 = 6;
const SEEDS: [u64; 3] = [7, 1729, 65537];
const TOLERANCE: i64 = 0;

fn setup(t: &str, ws: &[&[i64]], def: Deformation) -> TensorSetup {
    let c = CartanDatum::new(t).unwrap();
    let l = WeightList::new(ws.iter().map(|w| Weight(w.to_vec())).collect());
    TensorSetup::new(c, l, def).unwrap()
}

fn shapovalov_cases() -> Vec<(&'static str, Vec<&'static [i64]>)> {
    vec![("A1", vec![&[1]]), ("A1", vec![&[2]]), ("A1", vec![&[1], &[1]]), ("A2", vec![&[1, 0], &[0, 1]])]
}

fn comparison_cases() -> Vec<(&'static str, Vec<&'static [i64]>)> {
    vec![
        ("A1", vec![&[1]]),
        ("A1", vec![&[2]]),
        ("A1", vec![&[1], &[1]]),
        ("A1", vec![&[2], &[1]]),
        ("A2", vec![&[1, 0]]),
        ("A2", vec![&[1, 0], &[0, 1]]),
    ]
}

fn report(n: usize, name: &str, pass: bool, detail: String, start: Instant) -> bool {
    println!(
        "criterion {n} [{name}]: {} ({detail}; tolerance {TOLERANCE}; {:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    pass
}

fn identities() -> (bool, String) {
    let mut failed = Vec::new();
    let mut cases = 0;
    for (t, ws) in [("A1", vec![&[2][..], &[1][..]]), ("A2", vec![&[1, 0][..], &[0, 1][..]])] {
        let s = setup(t, &ws, Deformation::Zero);
        let long = identity_suite(&s.cartan, &s.lambdas, SERIES_ORDER, COASSOC_DEGREE);
        let short = identity_suite(&s.cartan, &s.lambdas, SLIDE_ORDER, 2);
        for chk in long.iter().take(3).chain(short.iter().skip(3)) {
            cases += chk.cases;
            if !chk.passed {
                failed.push(format!("{t} {}", chk.name));
            }
        }
    }
    (failed.is_empty(), format!("{cases} cases, failed {failed:?}"))
}

fn random_element(alg: &KlrAlgebra, bottom: &[Node], top: &[Node], rng: &mut ChaCha8Rng) -> KlrElement {
    let mut x = KlrElement::zero(bottom.to_vec(), top.to_vec());
    let lo = alg.min_degree(bottom, top).unwrap();
    for _ in 0..3 {
        let d = lo + 2 * rng.gen_range(0..2);
        let basis: Vec<KlrBasisElement> = alg.basis(bottom, top, d);
        if basis.is_empty() {
            continue;
        }
        let b = basis[rng.gen_range(0..basis.len())].clone();
        let c = Q::from_integer(rng.gen_range(-3i64..=3).into());
        x.add_scaled(&c, &KlrElement::basis(b)).unwrap();
    }
    x
}

fn klr_dimensions() -> (bool, String) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for t in ["A1", "A2"] {
        let alg = KlrAlgebra::new(CartanDatum::new(t).unwrap());
        for m in 1..=KLR_M_MAX {
            for bottom in all_sequences(&alg.cartan, m) {
                let middles = rearrangements(&bottom);
                for top in &middles {
                    for d in -8..=KLR_DEGREE {
                        let count = alg.graded_dim(&bottom, top, d);
                        let rep = alg.representation_rank(&bottom, top, d);
                        let span = alg.product_span_rank(&bottom, top, d, &middles);
                        checked += 1;
                        if rep != count || span != count {
                            bad.push((t, bottom.clone(), top.clone(), d));
                        }
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEEDS[0]);
    let alg = KlrAlgebra::new(CartanDatum::new("A2").unwrap());
    let mut assoc_fail = 0;
    for _ in 0..TRIPLES {
        let m = rng.gen_range(1..=KLR_M_MAX);
        let seqs = all_sequences(&alg.cartan, m);
        let s0 = seqs[rng.gen_range(0..seqs.len())].clone();
        let r = rearrangements(&s0);
        let (s1, s2, s3) =
            (&r[rng.gen_range(0..r.len())], &r[rng.gen_range(0..r.len())], &r[rng.gen_range(0..r.len())]);
        let x = random_element(&alg, s2, s3, &mut rng);
        let y = random_element(&alg, s1, s2, &mut rng);
        let z = random_element(&alg, &s0, s1, &mut rng);
        let left = alg.multiply(&alg.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = alg.multiply(&x, &alg.multiply(&y, &z).unwrap()).unwrap();
        if left != right {
            assoc_fail += 1;
        }
    }
    (
        bad.is_empty() && assoc_fail == 0,
        format!("{checked} graded pieces, mismatches {bad:?}, {TRIPLES} triples, non-associative {assoc_fail}"),
    )
}

fn shapovalov_oracle() -> (bool, String) {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (t, ws) in shapovalov_cases() {
        let s = setup(t, &ws, Deformation::Zero);
        let n = s.lambdas.len();
        for m in 0..=M_MAX {
            for ms in multisets(&s.cartan, m) {
                let objs = objects_for(&ms, n);
                let mut block = Block::new(&s, &ms).unwrap();
                for a in &objs {
                    for b in &objs {
                        let dim = if a.is_violated() || b.is_violated() {
                            0
                        } else {
                            block.hom_dims(a, b).unwrap().total.expect("finite total")
                        };
                        let form = shapovalov_pair(&s.cartan, &s.lambdas, a, b).unwrap();
                        pairs += 1;
                        if Q::from_integer((dim as i64).into()) != form {
                            bad.push(format!("{t} {ws:?} {a:?} {b:?}: {dim} vs {form}"));
                        }
                    }
                }
            }
        }
    }
    (bad.is_empty(), format!("{pairs} pairs, mismatches {bad:?}"))
}

fn flatness() -> (bool, String) {
    let mut rows = 0;
    let mut homs = 0;
    let mut bad = Vec::new();
    for (t, ws) in shapovalov_cases() {
        let s = setup(t, &ws, Deformation::Zero);
        for seed in SEEDS {
            let r = flatness_report(&s, M_MAX, DEGREE, seed, None).unwrap();
            rows += r.rows.len();
            if !r.flat {
                bad.push(format!("{t} {ws:?} seed {seed}: cocenter"));
            }
            let ray = s.with_deformation(Deformation::random_ray(&s.lambdas, seed));
            for m in 0..=M_MAX {
                for ms in multisets(&s.cartan, m) {
                    let mut b0 = Block::new(&s, &ms).unwrap();
                    let mut b1 = Block::new(&ray, &ms).unwrap();
                    for a in b0.nonviolated() {
                        for b in b0.nonviolated() {
                            homs += 1;
                            if b0.hom_ranks(&a, &b, DEGREE).unwrap() != b1.hom_ranks(&a, &b, DEGREE).unwrap() {
                                bad.push(format!("{t} {ws:?} seed {seed}: Hom({a:?}, {b:?})"));
                            }
                        }
                    }
                }
            }
        }
    }
    (bad.is_empty(), format!("{rows} cocenter rows, {homs} Hom spaces, {} seeds, mismatches {bad:?}", SEEDS.len()))
}

fn depth(c: &CartanDatum, top: &Weight, w: &Weight) -> i64 {
    c.height(&(top - w)).unwrap_or(i64::MAX)
}

fn cocenter_matches_weyl() -> (bool, String) {
    let mut rows = 0;
    let mut bad = Vec::new();
    let mut anchors = Vec::new();
    for (t, ws) in comparison_cases() {
        let s = setup(t, &ws, Deformation::Zero);
        let chev = Arc::new(ChevalleyData::new(s.cartan.clone()).unwrap());
        let weyl = weyl_graded_char(&chev, &s.lambdas.weights, DEGREE).unwrap();
        let trace = cocenter_dims(&s, M_MAX, DEGREE).unwrap();
        let top = s.lambdas.total();
        let mut keys: Vec<(Weight, i64)> = weyl.keys().chain(trace.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        for (w, d) in keys {
            if depth(&s.cartan, &top, &w) > M_MAX as i64 || d > DEGREE {
                continue;
            }
            let a = trace.get(&(w.clone(), d)).copied().unwrap_or(0);
            let b = weyl.get(&(w.clone(), d)).copied().unwrap_or(0);
            rows += 1;
            if a != b {
                bad.push(format!("{t} {ws:?} weight {w} degree {d}: {a} vs {b}"));
            }
        }
        let at = |w: &[i64]| -> BTreeMap<i64, usize> {
            (0..=DEGREE)
                .map(|d| (d, trace.get(&(Weight(w.to_vec()), d)).copied().unwrap_or(0)))
                .filter(|x| x.1 > 0)
                .collect()
        };
        match (t, ws.as_slice()) {
            ("A1", [[2]]) => anchors.push(at(&[0]) == [(0, 1), (2, 1)].into()),
            ("A1", [[1], [1]]) => anchors.push(at(&[0]) == [(0, 2)].into()),
            ("A1", [[1]]) => anchors.push(at(&[1]) == [(0, 1)].into() && at(&[-1]) == [(0, 1)].into()),
            _ => {}
        }
    }
    let ok = bad.is_empty() && anchors.len() == 3 && anchors.iter().all(|x| *x);
    (ok, format!("{rows} rows, anchors {anchors:?}, mismatches {bad:?}"))
}

fn spanning() -> (bool, String) {
    let mut bad = Vec::new();
    for (t, ws) in comparison_cases() {
        let s = setup(t, &ws, Deformation::Zero);
        if !crossing_free_span_check(&s, M_MAX, DEGREE).unwrap() {
            bad.push(format!("{t} {ws:?} crossing-free"));
        }
        if !phi_image_span_check(&s, M_MAX, DEGREE).unwrap() {
            bad.push(format!("{t} {ws:?} idempotent image"));
        }
    }
    (bad.is_empty(), format!("{} cases, failures {bad:?}", comparison_cases().len()))
}

fn homogeneity() -> (bool, String) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (t, ws) in comparison_cases() {
        for def in [Deformation::Zero, Deformation::Symbolic] {
            let s = setup(t, &ws, def);
            for r in relation_battery(&s).unwrap() {
                checked += 1;
                if !r.homogeneous || !r.holds {
                    bad.push(format!("{t} {ws:?} {} {:?}", r.name, r.bottom));
                }
            }
        }
    }
    (bad.is_empty(), format!("{checked} relation instances, failures {bad:?}"))
}

fn main() {
    let mut all = true;
    let criteria: [(&str, fn() -> (bool, String)); 7] = [
        ("identity suites", identities),
        ("KLR dimension oracle", klr_dimensions),
        ("Shapovalov oracle", shapovalov_oracle),
        ("flatness", flatness),
        ("cocenter equals Weyl character", cocenter_matches_weyl),
        ("spanning", spanning),
        ("homogeneity", homogeneity),
    ];
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = f();
        all &= report(n + 1, name, pass, detail, start);
    }
    if !all {
        eprintln!("acceptance criteria failed");
        std::process::exit(1);
    }
}
