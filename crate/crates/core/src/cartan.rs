//! Simply-laced Cartan data of finite type, weights as pairing vectors, scalars and
//! bubble parameters.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Node ids are `1..=rank`.
pub type Node = usize;

/// A weight, stored as its pairings `(⟨i,μ⟩)_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|x| *x >= 0)
    }

    /// Sum of the pairings, i.e. the number of strands a highest weight vector
    /// of this weight admits under each `f_i`.
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Weight> for i64 {
    type Output = Weight;
    fn mul(self, o: &Weight) -> Weight {
        Weight(o.0.iter().map(|a| self * a).collect())
    }
}

/// `±i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedIndex {
    pub node: Node,
    pub positive: bool,
}

impl SignedIndex {
    pub fn pos(node: Node) -> Self {
        SignedIndex { node, positive: true }
    }

    pub fn neg(node: Node) -> Self {
        SignedIndex { node, positive: false }
    }

    pub fn base(&self) -> Node {
        self.node
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    pub type_letter: char,
    pub rank: usize,
    matrix: Vec<Vec<i64>>,
    /// Oriented edges `(from, to)`.
    edges: Vec<(Node, Node)>,
    inverse: Vec<Vec<Q>>,
}

fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|x| q(*x)).collect();
            r.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|r| !a[*r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl CartanDatum {
    /// Builds the datum for a type string such as `A2`, `D4` or `E6`, with the default
    /// orientation `i → j` for every edge with `i < j`.
    pub fn new(type_name: &str) -> Result<Self> {
        let t = type_name.trim();
        let bad = || Error::UnsupportedType(t.to_string());
        let mut chars = t.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let mut edges: Vec<(Node, Node)> = Vec::new();
        match letter {
            'A' if rank >= 1 => edges.extend((1..rank).map(|i| (i, i + 1))),
            'D' if rank >= 4 => {
                edges.extend((1..rank - 1).map(|i| (i, i + 1)));
                edges.push((rank - 2, rank));
            }
            'E' if (6..=8).contains(&rank) => {
                edges.extend([(1, 3), (3, 4), (2, 4), (4, 5)]);
                edges.extend((5..rank).map(|i| (i, i + 1)));
            }
            _ => return Err(bad()),
        }
        let mut matrix = vec![vec![0i64; rank]; rank];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in &edges {
            matrix[a - 1][b - 1] = -1;
            matrix[b - 1][a - 1] = -1;
        }
        let inverse = rational_inverse(&matrix).ok_or_else(bad)?;
        Ok(CartanDatum { type_letter: letter, rank, matrix, edges, inverse })
    }

    /// Replaces the orientation; `spec` is a comma list such as `1->2,3->2`.
    pub fn with_orientation(mut self, spec: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part
                .split_once("->")
                .ok_or_else(|| Error::InvalidOrientation(format!("expected `i->j`, got `{part}`")))?;
            let a: Node = a.trim().parse().map_err(|_| Error::InvalidOrientation(part.to_string()))?;
            let b: Node = b.trim().parse().map_err(|_| Error::InvalidOrientation(part.to_string()))?;
            self.check(a)?;
            self.check(b)?;
            if self.matrix[a - 1][b - 1] != -1 {
                return Err(Error::InvalidOrientation(format!("{a} and {b} are not adjacent")));
            }
            edges.push((a, b));
        }
        let mut want: Vec<(Node, Node)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut got: Vec<(Node, Node)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        want.sort();
        got.sort();
        if want != got {
            return Err(Error::InvalidOrientation("every edge must be oriented exactly once".into()));
        }
        self.edges = edges;
        Ok(self)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.type_letter, self.rank)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        1..=self.rank
    }

    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    fn check(&self, i: Node) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::UnknownNode(i))
        } else {
            Ok(())
        }
    }

    /// `⟨i,j⟩`; panics on unknown nodes.
    pub fn a(&self, i: Node, j: Node) -> i64 {
        self.matrix[i - 1][j - 1]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn determinant(&self) -> i64 {
        // for connected simply-laced diagrams
        match self.type_letter {
            'A' => self.rank as i64 + 1,
            'D' => 4,
            _ => 9 - self.rank as i64,
        }
    }

    pub fn pairing(&self, i: Node, mu: &Weight) -> Result<i64> {
        self.check(i)?;
        Ok(mu.0[i - 1])
    }

    pub fn alpha(&self, i: Node) -> Weight {
        Weight((0..self.rank).map(|r| self.matrix[r][i - 1]).collect())
    }

    pub fn alpha_signed(&self, i: SignedIndex) -> Weight {
        let a = self.alpha(i.node);
        if i.positive {
            a
        } else {
            -&a
        }
    }

    pub fn fundamental(&self, i: Node) -> Weight {
        let mut v = vec![0; self.rank];
        v[i - 1] = 1;
        Weight(v)
    }

    pub fn weight(&self, pairings: Vec<i64>) -> Result<Weight> {
        if pairings.len() != self.rank {
            return Err(Error::Invalid(format!("weight needs {} pairings, got {}", self.rank, pairings.len())));
        }
        Ok(Weight(pairings))
    }

    /// Coordinates of `μ` in the simple roots when they are integral.
    pub fn root_coordinates(&self, mu: &Weight) -> Option<Vec<i64>> {
        self.rational_root_coordinates(mu)
            .into_iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn rational_root_coordinates(&self, mu: &Weight) -> Vec<Q> {
        (0..self.rank)
            .map(|j| {
                let mut s = Q::zero();
                for k in 0..self.rank {
                    s += &self.inverse[j][k] * q(mu.0[k]);
                }
                s
            })
            .collect()
    }

    /// `t_{ij}`.
    pub fn scalar_t(&self, i: Node, j: Node) -> i64 {
        if i == j || self.a(i, j) == 0 {
            1
        } else if self.edges.contains(&(j, i)) {
            1
        } else {
            -1
        }
    }

    /// `c_{i,μ}`, normalized to 1 on the coset representative `C·frac(C⁻¹μ)`.
    pub fn bubble_param(&self, i: Node, mu: &Weight) -> Q {
        let coords = self.rational_root_coordinates(mu);
        let mut sign = 1i64;
        for (j, x) in coords.iter().enumerate() {
            let fl = x.floor().to_integer();
            if self.scalar_t(i, j + 1) == -1 && (&fl % 2i32).abs().is_one() {
                sign = -sign;
            }
        }
        q(sign)
    }

    /// Height of `μ` in the simple roots, if it lies in the positive root cone.
    pub fn height(&self, mu: &Weight) -> Option<i64> {
        let c = self.root_coordinates(mu)?;
        if c.iter().all(|x| *x >= 0) {
            Some(c.iter().sum())
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pairings() {
        let a2 = CartanDatum::new("A2").unwrap();
        assert_eq!(a2.pairing(1, &a2.fundamental(1)).unwrap(), 1);
        assert_eq!(a2.pairing(1, &a2.alpha(1)).unwrap(), 2);
        assert_eq!(a2.pairing(1, &a2.alpha(2)).unwrap(), -1);
        assert_eq!(a2.pairing(3, &a2.alpha(2)), Err(Error::UnknownNode(3)));
    }

    #[test]
    fn scalars_follow_orientation() {
        let a2 = CartanDatum::new("A2").unwrap();
        assert_eq!(a2.scalar_t(1, 1), 1);
        assert_eq!(a2.scalar_t(2, 1), 1);
        assert_eq!(a2.scalar_t(1, 2), -1);
        let a3 = CartanDatum::new("A3").unwrap();
        assert_eq!(a3.scalar_t(1, 3), 1);
        let flipped = CartanDatum::new("A2").unwrap().with_orientation("2->1").unwrap();
        assert_eq!(flipped.scalar_t(1, 2), 1);
        assert_eq!(flipped.scalar_t(2, 1), -1);
    }

    #[test]
    fn orientation_must_cover_edges() {
        assert!(CartanDatum::new("A3").unwrap().with_orientation("1->2").is_err());
        assert!(CartanDatum::new("A3").unwrap().with_orientation("1->3,2->3").is_err());
        assert!(CartanDatum::new("B2").is_err());
        assert!(CartanDatum::new("D3").is_err());
    }

    #[test]
    fn determinants_match_inverse() {
        for t in ["A1", "A2", "A4", "D4", "D5", "E6", "E7", "E8"] {
            let c = CartanDatum::new(t).unwrap();
            for i in c.nodes() {
                let coords = c.rational_root_coordinates(&c.fundamental(i));
                for x in coords {
                    assert!((x * q(c.determinant())).is_integer(), "{t}");
                }
            }
        }
    }

    #[test]
    fn bubble_parameter_examples() {
        let a2 = CartanDatum::new("A2").unwrap();
        let mu0 = a2.fundamental(1);
        assert_eq!(a2.bubble_param(1, &mu0), q(1));
        let shifted = &mu0 + &a2.alpha(2);
        assert_eq!(a2.bubble_param(1, &shifted), q(a2.scalar_t(1, 2)));
        let twice = &shifted + &a2.alpha(2);
        assert_eq!(a2.bubble_param(1, &twice), q(1));
    }

    #[test]
    fn scalar_products_over_all_pairs() {
        for t in ["A1", "A3", "D4", "E6"] {
            let c = CartanDatum::new(t).unwrap();
            for i in c.nodes() {
                for j in c.nodes() {
                    if i != j && c.a(i, j) == -1 {
                        assert_eq!(c.scalar_t(i, j) * c.scalar_t(j, i), -1);
                    } else {
                        assert_eq!((c.scalar_t(i, j), c.scalar_t(j, i)), (1, 1));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bubble_cocycle(a in -6i64..6, b in -6i64..6, i in 1usize..3, j in 1usize..3) {
            let c = CartanDatum::new("A2").unwrap();
            let mu = Weight(vec![a, b]);
            let next = &mu + &c.alpha(j);
            prop_assert_eq!(c.bubble_param(i, &next), q(c.scalar_t(i, j)) * c.bubble_param(i, &mu));
        }

        #[test]
        fn d4_cocycle(v in proptest::collection::vec(-3i64..4, 4), i in 1usize..5, j in 1usize..5) {
            let c = CartanDatum::new("D4").unwrap();
            let mu = Weight(v);
            let next = &mu + &c.alpha(j);
            prop_assert_eq!(c.bubble_param(i, &next), q(c.scalar_t(i, j)) * c.bubble_param(i, &mu));
        }

        #[test]
        fn root_round_trip(m in proptest::collection::vec(-4i64..5, 3), n in proptest::collection::vec(0i64..3, 3)) {
            let c = CartanDatum::new("A3").unwrap();
            let mut mu = Weight(n.clone());
            for (j, k) in m.iter().enumerate() {
                mu = &mu + &(*k * &c.alpha(j + 1));
            }
            let back = &mu - &Weight(n);
            prop_assert_eq!(c.root_coordinates(&back), Some(m));
        }
    }
}
