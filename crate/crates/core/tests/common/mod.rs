#![allow(dead_code)]

//! Shared fixtures and independent oracles for the integration tests.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use treespace::space::{Axis, ScaffoldGraph, Space};
use treespace::split::{all_splits, Split};
use treespace::{GenericPoint, Point, Rat};

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The six-axis scaffold of the worked two-tree example.
pub fn example_scaffold() -> Arc<Space> {
    let g = ScaffoldGraph::from_names(
        &["e1", "e2", "e3", "e4", "e5", "e6"],
        &[
            ("e1", "e2"),
            ("e1", "e3"),
            ("e2", "e3"),
            ("e4", "e5"),
            ("e4", "e6"),
            ("e5", "e6"),
            ("e1", "e6"),
            ("e2", "e5"),
            ("e3", "e4"),
        ],
    )
    .unwrap();
    Space::scaffold(g, false)
}

/// Three quadrants glued along shared axes; the (e1p, e2) orthant is
/// missing, so geodesics crossing it go through the origin.
pub fn three_orthant_space() -> Arc<Space> {
    let g = ScaffoldGraph::from_names(
        &["e1", "e2", "e1p", "e2p"],
        &[("e1", "e2"), ("e1", "e2p"), ("e1p", "e2p")],
    )
    .unwrap();
    Space::scaffold(g, false)
}

pub fn pt(space: &Arc<Space>, coords: &[(&str, f64)]) -> Point {
    GenericPoint::new(
        space.clone(),
        coords.iter().map(|(n, v)| (Axis::named(*n), *v)).collect(),
    )
    .unwrap()
}

/// A random binary tree topology on leaves {0..n} as a set of splits
/// (internal and pendant), built by random cluster merging.  Always 2n−1
/// axes: n+1 pendant splits plus n−2 internal ones.
pub fn random_binary_tree_axes<R: Rng>(rng: &mut R, n: u32) -> BTreeSet<Axis> {
    let mut clusters: Vec<BTreeSet<u32>> = (0..=n).map(|i| [i].into_iter().collect()).collect();
    let mut axes: BTreeSet<Axis> = (0..=n)
        .map(|leaf| Axis::Split(Split::pendant(leaf, n).unwrap()))
        .collect();
    while clusters.len() > 1 {
        let i = rng.gen_range(0..clusters.len());
        let mut merged = clusters.swap_remove(i);
        let j = rng.gen_range(0..clusters.len());
        merged.extend(clusters.swap_remove(j));
        if merged.len() as u32 <= n {
            axes.insert(Axis::Split(Split::canonical(&merged, n).unwrap()));
        }
        clusters.push(merged);
    }
    assert_eq!(axes.len() as u32, 2 * n - 1);
    axes
}

/// A random tree-space point on a random binary topology, with every axis
/// positive (interior to a maximal orthant).
pub fn random_tree_point<R: Rng>(rng: &mut R, space: &Arc<Space>, n: u32) -> Point {
    let axes = random_binary_tree_axes(rng, n);
    let coords: BTreeMap<Axis, f64> = axes
        .into_iter()
        .map(|a| (a, rng.gen_range(0.05..2.0)))
        .collect();
    GenericPoint::new(space.clone(), coords).unwrap()
}

/// A random point of a scaffold space: positive coordinates on a random
/// subset of a random maximal clique.
pub fn random_scaffold_point<R: Rng>(
    rng: &mut R,
    space: &Arc<Space>,
    graph: &ScaffoldGraph,
) -> Point {
    let cliques = graph.maximal_cliques();
    let clique = &cliques[rng.gen_range(0..cliques.len())];
    let mut coords: BTreeMap<Axis, f64> = BTreeMap::new();
    for &i in clique {
        if rng.gen_bool(0.7) {
            coords.insert(graph.axes()[i].clone(), rng.gen_range(0.05..2.0));
        }
    }
    GenericPoint::new(space.clone(), coords).unwrap()
}

/// A random connected-ish compatibility graph on `m` named axes.
pub fn random_scaffold<R: Rng>(rng: &mut R, m: usize, p: f64) -> (Arc<Space>, ScaffoldGraph) {
    let axes: Vec<Axis> = (0..m).map(|i| Axis::named(format!("a{i}"))).collect();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    let graph = ScaffoldGraph::new(axes, &pairs).unwrap();
    (Space::scaffold(graph.clone(), false), graph)
}

/// All canonical splits of tree space with n+1 leaves, as axes.
#[allow(dead_code)]
pub fn tree_axes(n: u32) -> Vec<Axis> {
    all_splits(n).into_iter().map(Axis::Split).collect()
}

// ----- exact comparison of sums of square roots ------------------------

/// A sum Σ cᵢ·√Nᵢ with rational cᵢ and squarefree positive integers Nᵢ.
/// Distinct squarefree radicands are linearly independent over the
/// rationals, so equality is coefficient equality and strict comparisons
/// terminate under interval refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtSum {
    terms: BTreeMap<BigInt, Rat>,
}

impl SqrtSum {
    pub fn zero() -> SqrtSum {
        SqrtSum {
            terms: BTreeMap::new(),
        }
    }

    /// √r for a nonnegative rational r: √(p/q) = √(pq)/q.
    pub fn sqrt_of_rat(r: &Rat) -> SqrtSum {
        assert!(!r.is_negative());
        if r.is_zero() {
            return SqrtSum::zero();
        }
        let p = r.numer().clone();
        let q = r.denom().clone();
        let inside = &p * &q;
        let (square, squarefree) = extract_square(&inside);
        let coeff = Rat::new(square, q);
        let mut terms = BTreeMap::new();
        terms.insert(squarefree, coeff);
        SqrtSum { terms }
    }

    pub fn add(&mut self, other: &SqrtSum) {
        for (n, c) in &other.terms {
            let entry = self.terms.entry(n.clone()).or_insert_with(Rat::zero);
            *entry += c.clone();
            if entry.is_zero() {
                self.terms.remove(n);
            }
        }
    }

    /// Interval [lo, hi] containing the value, with 2^-bits precision.
    fn interval(&self, bits: u32) -> (Rat, Rat) {
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (n, c) in &self.terms {
            let (slo, shi) = sqrt_interval(n, bits);
            if c.is_negative() {
                lo += c.clone() * shi.clone();
                hi += c.clone() * slo.clone();
            } else {
                lo += c.clone() * slo;
                hi += c.clone() * shi;
            }
        }
        (lo, hi)
    }

    pub fn cmp_exact(&self, other: &SqrtSum) -> std::cmp::Ordering {
        if self.terms == other.terms {
            return std::cmp::Ordering::Equal;
        }
        // The difference is a nonzero combination of independent radicals,
        // so refinement separates the intervals.
        let mut diff = self.clone();
        let neg = SqrtSum {
            terms: other
                .terms
                .iter()
                .map(|(n, c)| (n.clone(), -c.clone()))
                .collect(),
        };
        diff.add(&neg);
        let mut bits = 32;
        loop {
            let (lo, hi) = diff.interval(bits);
            if lo.is_positive() {
                return std::cmp::Ordering::Greater;
            }
            if hi.is_negative() {
                return std::cmp::Ordering::Less;
            }
            bits *= 2;
            assert!(bits <= 4096, "radical comparison failed to separate");
        }
    }
}

/// Split n = s²·f with f squarefree (trial division; intended for the
/// small integers used in tests).
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut remaining = n.clone();
    let mut square_part = BigInt::one();
    let mut f = BigInt::from(2u32);
    while &f * &f <= remaining {
        let f2 = &f * &f;
        while (&remaining % &f2).is_zero() {
            remaining /= &f2;
            square_part *= &f;
        }
        f += 1u32;
    }
    (square_part, remaining)
}

/// Rational bounds on √n with error below 2^-bits.
fn sqrt_interval(n: &BigInt, bits: u32) -> (Rat, Rat) {
    let scaled = n << (2 * bits);
    let root = scaled.sqrt(); // floor square root
    let denom = BigInt::one() << bits;
    (
        Rat::new(root.clone(), denom.clone()),
        Rat::new(root + 1, denom),
    )
}

/// Squared path length of a support as an exact sum of square roots:
/// Σ (‖Aᵢ‖² + ‖Bᵢ‖²) + 2 Σ √(‖Aᵢ‖²·‖Bᵢ‖²).
pub fn support_length_squared(pairs: &[(Rat, Rat)]) -> SqrtSum {
    let mut total = SqrtSum::zero();
    let mut rational_part = Rat::zero();
    for (a2, b2) in pairs {
        rational_part += a2.clone() + b2.clone();
        let cross = SqrtSum::sqrt_of_rat(&(a2.clone() * b2.clone()));
        total.add(&cross);
        total.add(&cross); // 2·√(a²b²)
    }
    let mut constant = SqrtSum::zero();
    if !rational_part.is_zero() {
        constant.terms.insert(BigInt::one(), rational_part);
    }
    total.add(&constant);
    total
}

#[cfg(test)]
mod sanity {
    use super::*;

    #[test]
    fn radical_comparison_basics() {
        // √2 + √3 > √5 + 1/10
        let mut a = SqrtSum::sqrt_of_rat(&int(2));
        a.add(&SqrtSum::sqrt_of_rat(&int(3)));
        let mut b = SqrtSum::sqrt_of_rat(&int(5));
        b.add(&SqrtSum::sqrt_of_rat(&rat(1, 100)));
        assert_eq!(a.cmp_exact(&b), std::cmp::Ordering::Greater);
        // √8 = 2√2.
        let mut two_sqrt2 = SqrtSum::sqrt_of_rat(&int(2));
        two_sqrt2.add(&SqrtSum::sqrt_of_rat(&int(2)));
        assert_eq!(
            SqrtSum::sqrt_of_rat(&int(8)).cmp_exact(&two_sqrt2),
            std::cmp::Ordering::Equal
        );
    }
}
