use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use cocenter::bubbles::identity_suite;
use cocenter::current::{shapovalov_pair, weyl_graded_char, ChevalleyData, CurrentModule, ModuleKind};
use cocenter::klr::{all_sequences, rearrangements, KlrAlgebra};
use cocenter::stendhal::{multisets, Block, StendhalPair, Strand};
use cocenter::trace::{all_blocks, cocenter_dims, crossing_free_span_check, flatness_report, phi_image_span_check};
use cocenter::{Error, Node, Weight};
use serde::{Deserialize, Serialize};

use crate::settings::{format_rational, parse_rational, Settings};

pub const SERIES_ORDER: usize = 10;
pub const COASSOC_DEGREE: u32 = 20;

fn seq(s: &[Node]) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

/// Left-to-right slice, red strings as `(k)`.
pub fn pair_notation(p: &StendhalPair) -> String {
    p.slice()
        .iter()
        .map(|s| match s {
            Strand::Black(i) => i.to_string(),
            Strand::Red(k) => format!("({k})"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
}

pub fn symcheck(s: &Settings) -> Vec<SuiteRow> {
    identity_suite(&s.cartan, &s.lambdas, SERIES_ORDER, COASSOC_DEGREE)
        .into_iter()
        .map(|c| SuiteRow { name: c.name, cases: c.cases, passed: c.passed })
        .collect()
}

#[derive(Serialize)]
pub struct KlrRow {
    pub m: usize,
    pub bottom: String,
    pub top: String,
    pub degree: i64,
    pub dim: usize,
}

pub fn klr_dims(s: &Settings) -> Vec<KlrRow> {
    let alg = KlrAlgebra::new(s.cartan.clone());
    let mut rows = Vec::new();
    for m in 0..=s.m_max {
        for bottom in all_sequences(&s.cartan, m) {
            for top in rearrangements(&bottom) {
                let Some(lo) = alg.min_degree(&bottom, &top) else { continue };
                for d in lo..=s.max_degree {
                    let dim = alg.graded_dim(&bottom, &top, d);
                    if dim > 0 {
                        rows.push(KlrRow { m, bottom: seq(&bottom), top: seq(&top), degree: d, dim });
                    }
                }
            }
        }
    }
    rows
}

#[derive(Serialize)]
pub struct TpaRow {
    pub m: usize,
    #[serde(rename = "S")]
    pub source: String,
    #[serde(rename = "S'")]
    pub target: String,
    pub degree: i64,
    pub dim: usize,
}

pub fn tpa_dims(s: &Settings) -> Result<Vec<TpaRow>> {
    let setup = s.setup()?;
    let mut rows = Vec::new();
    for m in 0..=s.m_max {
        for ms in multisets(&s.cartan, m) {
            let mut block = Block::new(&setup, &ms)?;
            let objs = block.nonviolated();
            for a in &objs {
                for b in &objs {
                    for (d, dim) in block.hom_ranks(a, b, s.max_degree)? {
                        if dim > 0 {
                            rows.push(TpaRow { m, source: pair_notation(a), target: pair_notation(b), degree: d, dim });
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
pub struct TraceRow {
    pub m: usize,
    pub weight: String,
    pub degree: i64,
    pub trace_dim: usize,
}

/// Along a deformation, the dimensions of the specialized cocenter.
pub fn trace_dims(s: &Settings) -> Result<Vec<TraceRow>> {
    let setup = s.setup()?;
    let top = s.top_weight();
    let mut rows: Vec<TraceRow> = cocenter_dims(&setup, s.m_max, s.max_degree)?
        .into_iter()
        .map(|((w, d), x)| {
            let m = s.cartan.height(&(&top - &w)).unwrap_or_default() as usize;
            TraceRow { m, weight: w.to_string(), degree: d, trace_dim: x }
        })
        .collect();
    rows.sort_by_key(|r| r.m);
    Ok(rows)
}

#[derive(Serialize)]
pub struct CharRow {
    pub weight: String,
    pub degree: i64,
    pub dim: usize,
}

#[derive(Serialize)]
pub struct WeylCharReport {
    pub cartan_type: String,
    pub weights: Vec<Vec<i64>>,
    pub max_degree: i64,
    pub stabilized: bool,
    pub rows: Vec<CharRow>,
}

fn chevalley(s: &Settings) -> Result<Arc<ChevalleyData>> {
    Ok(Arc::new(ChevalleyData::new(s.cartan.clone())?))
}

/// Every factor must be complete inside its window.
fn check_stabilized(chev: &Arc<ChevalleyData>, s: &Settings) -> Result<()> {
    for w in &s.lambdas.weights {
        let m = CurrentModule::new(chev.clone(), w.clone(), ModuleKind::LocalWeyl, s.max_degree, None)?;
        let st = m.stabilization();
        if !st.weights_complete {
            return Err(Error::NotStabilized(format!(
                "W{w} has weights beyond the default depth; the character below that depth is still exact"
            ))
            .into());
        }
    }
    Ok(())
}

pub fn weyl_char(s: &Settings) -> Result<WeylCharReport> {
    let chev = chevalley(s)?;
    check_stabilized(&chev, s)?;
    let stabilized = s.lambdas.weights.iter().all(|w| {
        CurrentModule::new(chev.clone(), w.clone(), ModuleKind::LocalWeyl, s.max_degree, None)
            .map(|m| m.stabilization().stabilized())
            .unwrap_or(false)
    });
    let ch = weyl_graded_char(&chev, &s.lambdas.weights, s.max_degree)?;
    Ok(WeylCharReport {
        cartan_type: s.cartan_type.clone(),
        weights: s.lambdas.weights.iter().map(|w| w.0.clone()).collect(),
        max_degree: s.max_degree,
        stabilized,
        rows: ch.into_iter().map(|((w, d), dim)| CharRow { weight: w.to_string(), degree: d, dim }).collect(),
    })
}

#[derive(Deserialize)]
pub struct PairInput {
    pub s: StendhalPair,
    pub t: StendhalPair,
}

#[derive(Serialize)]
pub struct PairRow {
    #[serde(rename = "S")]
    pub source: String,
    #[serde(rename = "S'")]
    pub target: String,
    pub value: String,
}

/// The pairs file is a JSON list of `{"s": {"labels", "kappa"}, "t": {...}}`.
pub fn shapovalov(s: &Settings, pairs: &Path) -> Result<Vec<PairRow>> {
    let text = std::fs::read_to_string(pairs).with_context(|| format!("reading {}", pairs.display()))?;
    let input: Vec<PairInput> = serde_json::from_str(&text).with_context(|| format!("parsing {}", pairs.display()))?;
    input
        .iter()
        .map(|p| {
            for x in [&p.s, &p.t] {
                StendhalPair::new(x.labels.clone(), x.kappa.clone())?;
            }
            let v = shapovalov_pair(&s.cartan, &s.lambdas, &p.s, &p.t)?;
            Ok(PairRow { source: pair_notation(&p.s), target: pair_notation(&p.t), value: format_rational(&v) })
        })
        .collect()
}

#[derive(Serialize)]
pub struct VerifyRow {
    pub m: usize,
    pub weight: String,
    pub degree: i64,
    pub trace_dim: usize,
    pub weyl_dim: usize,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Set on mismatches.
    pub context: Option<String>,
}

#[derive(Serialize)]
pub struct Cutoffs {
    pub max_degree: i64,
    pub m_max: usize,
    pub series_order: usize,
    pub coassoc_degree: u32,
}

#[derive(Serialize)]
pub struct FlatnessSummary {
    pub seed: u64,
    pub values: BTreeMap<String, String>,
    pub rows: usize,
    pub flat: bool,
    pub mismatches: Vec<String>,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub cartan_type: String,
    pub weights: Vec<Vec<i64>>,
    pub cutoffs: Cutoffs,
    pub deformed: String,
    pub rows: Vec<VerifyRow>,
    pub suites: Vec<SuiteRow>,
    pub flatness: FlatnessSummary,
    pub verdict: String,
    pub version: String,
    pub seed: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

fn reproduce(s: &Settings, cmd: &str) -> String {
    format!(
        "cocenter {cmd} --type {} --weights '{}' --m-max {} --max-degree {}",
        s.cartan_type, s.weights_text, s.m_max, s.max_degree
    )
}

pub fn verify(s: &Settings) -> Result<VerifyReport> {
    let chev = chevalley(s)?;
    check_stabilized(&chev, s)?;
    let weyl = weyl_graded_char(&chev, &s.lambdas.weights, s.max_degree)?;
    let zero = s.setup()?.with_deformation(cocenter::stendhal::Deformation::Zero);
    let blocks = all_blocks(&zero, s.m_max, s.max_degree, false)?;
    let top = s.top_weight();
    let depth = |w: &Weight| s.cartan.height(&(&top - w)).filter(|h| *h >= 0);

    let mut trace: BTreeMap<(Weight, i64), (usize, Vec<Node>)> = BTreeMap::new();
    for b in &blocks {
        for (d, x) in b.dims() {
            if x > 0 {
                trace.insert((b.weight.clone(), d), (x, b.labels.clone()));
            }
        }
    }
    let mut keys: Vec<(Weight, i64)> = weyl.keys().chain(trace.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let mut entries: Vec<(usize, Weight, i64)> = keys
        .into_iter()
        .filter_map(|(w, d)| depth(&w).map(|m| (m as usize, w, d)))
        .filter(|(m, _, d)| *m <= s.m_max && *d <= s.max_degree)
        .collect();
    entries.sort_by(|a, b| (a.0, &b.1, a.2).cmp(&(b.0, &a.1, b.2)));
    let rows: Vec<VerifyRow> = entries
        .into_iter()
        .map(|(m, w, d)| {
            let (t, labels) = trace.get(&(w.clone(), d)).cloned().unwrap_or_default();
            let y = weyl.get(&(w.clone(), d)).copied().unwrap_or(0);
            let context = (t != y).then(|| {
                format!(
                    "block with labels [{}], weight {w}, degree {d}; reproduce: {}",
                    seq(&labels),
                    reproduce(s, "trace-dims")
                )
            });
            VerifyRow { m, weight: w.to_string(), degree: d, trace_dim: t, weyl_dim: y, matches: t == y, context }
        })
        .collect();

    let mut suites = symcheck(s);
    suites.push(SuiteRow {
        name: "crossing-free spanning".into(),
        cases: blocks.len(),
        passed: crossing_free_span_check(&zero, s.m_max, s.max_degree)?,
    });
    suites.push(SuiteRow {
        name: "idempotent image spanning".into(),
        cases: blocks.len(),
        passed: phi_image_span_check(&zero, s.m_max, s.max_degree)?,
    });

    let values = s.values();
    let fr = flatness_report(&zero, s.m_max, s.max_degree, s.seed, values.as_ref())?;
    let flatness = FlatnessSummary {
        seed: fr.seed,
        values: fr
            .values
            .iter()
            .map(|(k, v)| Ok((k.clone(), format_rational(&parse_rational(v)?))))
            .collect::<Result<_>>()?,
        rows: fr.rows.len(),
        flat: fr.flat,
        mismatches: fr
            .rows
            .iter()
            .filter(|r| r.undeformed != r.specialized)
            .map(|r| {
                format!(
                    "m {} weight {} degree {}: {} at zero vs {} specialized; reproduce: {} --deformed generic --seed {}",
                    r.m,
                    r.weight,
                    r.degree,
                    r.undeformed,
                    r.specialized,
                    reproduce(s, "trace-dims"),
                    s.seed
                )
            })
            .collect(),
    };

    let pass = rows.iter().all(|r| r.matches) && suites.iter().all(|x| x.passed) && flatness.flat;
    Ok(VerifyReport {
        cartan_type: s.cartan_type.clone(),
        weights: s.lambdas.weights.iter().map(|w| w.0.clone()).collect(),
        cutoffs: Cutoffs {
            max_degree: s.max_degree,
            m_max: s.m_max,
            series_order: SERIES_ORDER,
            coassoc_degree: COASSOC_DEGREE,
        },
        deformed: s.deformed_label(),
        rows,
        suites,
        flatness,
        verdict: if pass { "pass" } else { "fail" }.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: s.seed,
    })
}
