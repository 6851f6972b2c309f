//! Graded cocenters of tensor product algebra blocks.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{Node, Weight};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::stendhal::{multisets, Block, Deformation, StendhalPair, TensorSetup, TraceLevel};
use crate::symfunc::ZVar;

/// Cocenter of one block, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTrace {
    pub m: usize,
    pub labels: Vec<Node>,
    pub weight: Weight,
    pub levels: Vec<TraceLevel>,
}

impl BlockTrace {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.levels.iter().map(|l| (l.degree, l.dim)).collect()
    }

    pub fn crossing_free_spans(&self) -> bool {
        self.levels.iter().all(|l| l.crossing_free_spans != Some(false))
    }

    pub fn idempotent_dots_span(&self) -> bool {
        self.levels.iter().all(|l| l.idempotent_dots_span != Some(false))
    }

    /// The associated graded of the composition filtration adds up to the cocenter.
    pub fn filtration_adds_up(&self) -> bool {
        self.levels.iter().all(|l| l.filtration.as_ref().map_or(true, |f| f.values().sum::<usize>() == l.dim))
    }
}

fn block_weight(setup: &TensorSetup, labels: &[Node]) -> Weight {
    let s = StendhalPair { labels: labels.to_vec(), kappa: vec![labels.len(); setup.lambdas.len() + 1] };
    s.leftmost_weight(&setup.cartan, &setup.lambdas)
}

/// Cocenter of the block with the given label multiset, degrees up to `max_degree`.
pub fn block_trace(setup: &TensorSetup, labels: &[Node], max_degree: i64, checks: bool) -> Result<BlockTrace> {
    let mut block = Block::new(setup, labels)?;
    let mut levels = Vec::new();
    if let Some(lo) = block.trace_min_degree() {
        for d in lo..=max_degree {
            levels.push(block.trace_level(d, checks));
        }
    }
    Ok(BlockTrace { m: labels.len(), labels: block.multiset().to_vec(), weight: block_weight(setup, labels), levels })
}

/// Every block with at most `m_max` black strands.
pub fn all_blocks(setup: &TensorSetup, m_max: usize, max_degree: i64, checks: bool) -> Result<Vec<BlockTrace>> {
    let jobs: Vec<Vec<Node>> = (0..=m_max).flat_map(|m| multisets(&setup.cartan, m)).collect();
    jobs.par_iter().map(|labels| block_trace(setup, labels, max_degree, checks)).collect()
}

/// `(weight, degree) → dim` of the cocenter over blocks with at most `m_max` strands;
/// along a ray, ranks over the parameter instead of dimensions.
pub fn cocenter_dims(setup: &TensorSetup, m_max: usize, max_degree: i64) -> Result<BTreeMap<(Weight, i64), usize>> {
    let jobs: Vec<Vec<Node>> = (0..=m_max).flat_map(|m| multisets(&setup.cartan, m)).collect();
    let tables: Vec<(Weight, BTreeMap<i64, usize>)> = jobs
        .par_iter()
        .map(|labels| -> Result<_> {
            let mut block = Block::new(setup, labels)?;
            Ok((block_weight(setup, labels), block.trace_ranks(max_degree)))
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for (w, table) in tables {
        for (d, x) in table {
            if x > 0 {
                *out.entry((w.clone(), d)).or_insert(0) += x;
            }
        }
    }
    Ok(out)
}

/// Classes of normal diagrams without red-black crossings span every degree up to `max_degree`.
pub fn crossing_free_span_check(setup: &TensorSetup, m_max: usize, max_degree: i64) -> Result<bool> {
    Ok(all_blocks(setup, m_max, max_degree, true)?.iter().all(|b| b.crossing_free_spans()))
}

/// Classes of `e_S y^a`, the images of lowering monomials, span every degree up to `max_degree`.
pub fn phi_image_span_check(setup: &TensorSetup, m_max: usize, max_degree: i64) -> Result<bool> {
    Ok(all_blocks(setup, m_max, max_degree, true)?.iter().all(|b| b.idempotent_dots_span()))
}

/// Diagram representing the image of a tuple of lowering monomials: the strands of
/// `monomials[k-1]` sit immediately left of red string `(k)`, each carrying its power of `t` as dots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiImage {
    pub object: StendhalPair,
    pub dots: Vec<u8>,
    pub degree: i64,
}

/// `monomials[k-1]` lists the factors `f_i ⊗ t^r` of `u_k`, leftmost first.
pub fn phi_image(setup: &TensorSetup, monomials: &[Vec<(Node, u32)>]) -> Result<PhiImage> {
    let n = setup.lambdas.len();
    if monomials.len() != n {
        return Err(Error::Invalid(format!("expected {n} monomials, got {}", monomials.len())));
    }
    let mut labels = Vec::new();
    let mut dots = Vec::new();
    let mut kappa = vec![0; n + 1];
    // regions from the left: the strands of u_n come first
    for k in (1..=n).rev() {
        for &(i, r) in &monomials[k - 1] {
            if i == 0 || i > setup.cartan.rank {
                return Err(Error::UnknownNode(i));
            }
            labels.push(i);
            dots.push(u8::try_from(r).map_err(|_| Error::Invalid(format!("t-power {r} is too large")))?);
        }
    }
    let m = labels.len();
    let mut right = 0;
    for k in 1..=n {
        kappa[k - 1] = right;
        right += monomials[k - 1].len();
    }
    kappa[n] = m;
    let degree = 2 * dots.iter().map(|&d| d as i64).sum::<i64>();
    Ok(PhiImage { object: StendhalPair::new(labels, kappa)?, dots, degree })
}

/// One row of a flatness comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessRow {
    pub m: usize,
    pub weight: Weight,
    pub degree: i64,
    pub undeformed: usize,
    pub specialized: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub seed: u64,
    pub values: BTreeMap<String, String>,
    pub rows: Vec<FlatnessRow>,
    pub flat: bool,
}

/// Compares cocenter dimensions at `z = 0` with those at seeded random distinct
/// rational values (or the given ones).
pub fn flatness_report(
    setup: &TensorSetup,
    m_max: usize,
    max_degree: i64,
    seed: u64,
    values: Option<&BTreeMap<ZVar, Q>>,
) -> Result<FlatnessReport> {
    let values = match values {
        Some(v) => v.clone(),
        None => Deformation::random_values(&setup.lambdas, seed),
    };
    let ray = setup.with_deformation(Deformation::ray(&setup.lambdas, &values)?);
    let zero = setup.with_deformation(Deformation::Zero);
    let jobs: Vec<Vec<Node>> = (0..=m_max).flat_map(|m| multisets(&setup.cartan, m)).collect();
    let blocks: Vec<Vec<FlatnessRow>> = jobs
        .par_iter()
        .map(|labels| -> Result<Vec<FlatnessRow>> {
            let a = Block::new(&zero, labels)?.trace_ranks(max_degree);
            let b = Block::new(&ray, labels)?.trace_ranks(max_degree);
            let weight = block_weight(setup, labels);
            let mut degrees: Vec<i64> = a.keys().chain(b.keys()).copied().collect();
            degrees.sort();
            degrees.dedup();
            Ok(degrees
                .into_iter()
                .map(|d| FlatnessRow {
                    m: labels.len(),
                    weight: weight.clone(),
                    degree: d,
                    undeformed: a.get(&d).copied().unwrap_or(0),
                    specialized: b.get(&d).copied().unwrap_or(0),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let rows: Vec<FlatnessRow> = blocks.into_iter().flatten().collect();
    let flat = rows.iter().all(|r| r.undeformed == r.specialized);
    Ok(FlatnessReport {
        seed,
        values: values.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        rows,
        flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use crate::rational::q;
    use crate::symfunc::WeightList;

    fn setup(t: &str, ls: &[Vec<i64>]) -> TensorSetup {
        let c = CartanDatum::new(t).unwrap();
        TensorSetup::new(c, WeightList::new(ls.iter().map(|w| Weight(w.clone())).collect()), Deformation::Zero).unwrap()
    }

    #[test]
    fn small_cocenters() {
        let s = setup("A1", &[vec![2]]);
        let b = block_trace(&s, &[1], 6, true).unwrap();
        let dims: BTreeMap<i64, usize> = b.dims().into_iter().filter(|(_, x)| *x > 0).collect();
        assert_eq!(dims, [(0, 1), (2, 1)].into());
        assert!(b.crossing_free_spans() && b.idempotent_dots_span() && b.filtration_adds_up());
        let e = block_trace(&s, &[], 6, true).unwrap();
        assert_eq!(e.dims().into_iter().filter(|(_, x)| *x > 0).collect::<Vec<_>>(), vec![(0, 1)]);
        let s = setup("A1", &[vec![1], vec![1]]);
        let b = block_trace(&s, &[1], 6, true).unwrap();
        assert_eq!(b.weight, Weight(vec![0]));
        assert_eq!(b.dims().into_iter().filter(|(_, x)| *x > 0).collect::<Vec<_>>(), vec![(0, 2)]);
        assert!(b.crossing_free_spans() && b.idempotent_dots_span() && b.filtration_adds_up());
    }

    #[test]
    fn phi_images() {
        let s = setup("A1", &[vec![1], vec![1]]);
        let p = phi_image(&s, &[vec![], vec![]]).unwrap();
        assert_eq!(p.object, StendhalPair::red_only(2));
        let p = phi_image(&s, &[vec![(1, 0)], vec![(1, 0)]]).unwrap();
        assert_eq!(p.object, StendhalPair::new(vec![1, 1], vec![0, 1, 2]).unwrap());
        assert_eq!(p.degree, 0);
        let s1 = setup("A1", &[vec![2]]);
        let p = phi_image(&s1, &[vec![(1, 1)]]).unwrap();
        assert_eq!((p.dots.clone(), p.degree), (vec![1], 2));
        assert!(phi_image(&s1, &[vec![(3, 1)]]).is_err());
        assert!(phi_image(&s1, &[]).is_err());
    }

    #[test]
    fn flatness_small() {
        let s = setup("A1", &[vec![2]]);
        let r = flatness_report(&s, 2, 6, 11, None).unwrap();
        assert!(r.flat, "{r:?}");
        let s = setup("A1", &[vec![1]]);
        assert!(flatness_report(&s, 2, 6, 5, None).unwrap().flat);
        let z = |j| ZVar { factor: 1, node: 1, index: j };
        let s = setup("A1", &[vec![2]]);
        let same: BTreeMap<ZVar, Q> = [(z(1), q(2)), (z(2), q(2))].into();
        assert_eq!(flatness_report(&s, 1, 4, 0, Some(&same)), Err(Error::RepeatedValues));
    }
}
