use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use cocenter::stendhal::{Deformation, TensorSetup};
use cocenter::symfunc::{WeightList, ZVar};
use cocenter::{CartanDatum, Weight, Q};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand. Each one may also come from `--config`.
#[derive(Args, Debug, Default, Clone)]
pub struct GlobalArgs {
    /// TOML file with any of the keys below; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cartan type, e.g. A1, A2, D4, E6.
    #[arg(long = "type", global = true)]
    pub cartan_type: Option<String>,
    /// Comma-separated dominant weights; coefficients inside one weight are separated by `:`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub weights: Option<String>,
    #[arg(long, global = true)]
    pub max_degree: Option<i64>,
    #[arg(long, global = true)]
    pub m_max: Option<usize>,
    /// `zero`, `generic`, or a path to a JSON file of specialization values.
    #[arg(long, global = true)]
    pub deformed: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "type")]
    cartan_type: Option<String>,
    weights: Option<String>,
    max_degree: Option<i64>,
    m_max: Option<usize>,
    deformed: Option<String>,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeformMode {
    Zero,
    Generic,
    Values(BTreeMap<ZVar, Q>),
}

#[derive(Debug)]
pub struct Settings {
    pub cartan_type: String,
    pub cartan: CartanDatum,
    pub weights_text: String,
    pub lambdas: WeightList,
    pub max_degree: i64,
    pub m_max: usize,
    pub deformed: DeformMode,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str::<ConfigFile>(&text).with_context(|| format!("parsing config {}", p.display()))?
            }
            None => ConfigFile::default(),
        };
        let cartan_type = args.cartan_type.clone().or(file.cartan_type).unwrap_or_else(|| "A1".into());
        let cartan = CartanDatum::new(&cartan_type)?;
        let weights_text = args.weights.clone().or(file.weights).unwrap_or_default();
        let lambdas = WeightList::new(parse_weights(&weights_text, cartan.rank)?);
        let max_degree = args.max_degree.or(file.max_degree).unwrap_or(6);
        if max_degree < 0 {
            bail!("--max-degree must be nonnegative");
        }
        let deformed = match args.deformed.clone().or(file.deformed).as_deref() {
            None | Some("zero") => DeformMode::Zero,
            Some("generic") => DeformMode::Generic,
            Some(path) => DeformMode::Values(read_values(Path::new(path))?),
        };
        Ok(Settings {
            cartan_type,
            cartan,
            weights_text,
            lambdas,
            max_degree,
            m_max: args.m_max.or(file.m_max).unwrap_or(3),
            deformed,
            seed: args.seed.or(file.seed).unwrap_or(7),
            format: args.format.or(file.format).unwrap_or(Format::Json),
            out: args.out.clone().or(file.out),
        })
    }

    /// Specialization values for the generic and file modes.
    pub fn values(&self) -> Option<BTreeMap<ZVar, Q>> {
        match &self.deformed {
            DeformMode::Zero => None,
            DeformMode::Generic => Some(Deformation::random_values(&self.lambdas, self.seed)),
            DeformMode::Values(v) => Some(v.clone()),
        }
    }

    pub fn setup(&self) -> Result<TensorSetup> {
        let deformation = match self.values() {
            None => Deformation::Zero,
            Some(v) => Deformation::ray(&self.lambdas, &v)?,
        };
        Ok(TensorSetup::new(self.cartan.clone(), self.lambdas.clone(), deformation)?)
    }

    pub fn deformed_label(&self) -> String {
        match &self.deformed {
            DeformMode::Zero => "zero".into(),
            DeformMode::Generic => "generic".into(),
            DeformMode::Values(_) => "values-file".into(),
        }
    }

    pub fn top_weight(&self) -> Weight {
        if self.lambdas.is_empty() {
            Weight::zero(self.cartan.rank)
        } else {
            self.lambdas.total()
        }
    }
}

/// `"2"` is one weight, `"1,1"` two, `"1:0,0:1"` two weights of rank 2.
pub fn parse_weights(text: &str, rank: usize) -> Result<Vec<Weight>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for item in text.split(',') {
        let coeffs: Vec<i64> = item
            .split(|c: char| c == ':' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i64>().with_context(|| format!("bad coefficient `{s}` in weight `{item}`")))
            .collect::<Result<_>>()?;
        if coeffs.len() != rank {
            bail!("weight `{}` has {} coefficients, the Cartan type has rank {rank}", item.trim(), coeffs.len());
        }
        if coeffs.iter().any(|x| *x < 0) {
            bail!("weight `{}` is not dominant", item.trim());
        }
        out.push(Weight(coeffs));
    }
    Ok(out)
}

#[derive(Deserialize)]
struct ValueEntry {
    factor: usize,
    node: usize,
    index: usize,
    value: String,
}

/// A JSON list of `{"factor", "node", "index", "value": "p/q"}` entries.
pub fn read_values(path: &Path) -> Result<BTreeMap<ZVar, Q>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading values file {}", path.display()))?;
    let entries: Vec<ValueEntry> =
        serde_json::from_str(&text).with_context(|| format!("parsing values file {}", path.display()))?;
    let mut out = BTreeMap::new();
    for e in entries {
        let v = parse_rational(&e.value)?;
        out.insert(ZVar { factor: e.factor, node: e.node, index: e.index }, v);
    }
    Ok(out)
}

pub fn parse_rational(s: &str) -> Result<Q> {
    s.trim().parse::<Q>().map_err(|e| anyhow::anyhow!("bad rational `{s}`: {e}"))
}

/// Always `p/q`, denominator positive.
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}
