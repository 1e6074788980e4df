//! Geodesics: support computation by successive refinement, distance, and
//! points along the path.
//!
//! The geodesic between two points is encoded by its support: an ordered
//! partition pair of the endpoints' disjoint axes.  Starting from the
//! single pair of all disjoint axes, any pair that admits a vertex cover of
//! weight < 1 in its incompatibility graph is split at the certifying min
//! cut; the procedure terminates with nondecreasing ratios, and merging
//! equal-ratio neighbours yields the unique minimal support.  All ratio and
//! cover decisions are made in exact rational arithmetic on squared
//! lengths; only the final metric quantities are floating point.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::flow::IncompatibilityGraph;
use crate::point::GenericPoint;
use crate::scalar::Scalar;
use crate::space::{Axis, Space};
use crate::Rat;

/// Classification of a support pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// Axes present in both endpoints, grouped by equal length ratio; the
    /// formal ratio is negative, so these precede everything.
    NegativeCommon,
    /// Axes of the source compatible with every disjoint target axis
    /// (pair (A, ∅)); they shrink linearly along the whole path.
    ZeroRatio,
    /// A genuine support pair with both sides nonempty.
    Positive,
    /// Axes of the target compatible with every disjoint source axis
    /// (pair (∅, B)); they grow linearly along the whole path.
    InfiniteRatio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportPair {
    pub a: BTreeSet<Axis>,
    pub b: BTreeSet<Axis>,
    pub class: PairClass,
}

/// Ordered support of a geodesic: common groups first, then the
/// source-vanishing pair, the positive pairs by increasing ratio, and the
/// target-growing pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    pub pairs: Vec<SupportPair>,
}

impl Support {
    pub fn positive_pairs(&self) -> impl Iterator<Item = &SupportPair> {
        self.pairs
            .iter()
            .filter(|p| p.class == PairClass::Positive)
    }
}

/// One positive pair with its exact squared norms and float norms.
#[derive(Debug, Clone)]
pub struct PositivePairData {
    pub a: BTreeSet<Axis>,
    pub b: BTreeSet<Axis>,
    /// Σ x_e² over A (exact).
    pub a_norm2: Rat,
    /// Σ t_e² over B (exact).
    pub b_norm2: Rat,
    pub a_norm: f64,
    pub b_norm: f64,
}

impl PositivePairData {
    /// Ratio ‖A‖/‖B‖ as a float.
    pub fn ratio(&self) -> f64 {
        self.a_norm / self.b_norm
    }
}

/// A geodesic between two fixed endpoints, ready for evaluation.
#[derive(Debug, Clone)]
pub struct GeodesicDescriptor {
    space: Arc<Space>,
    /// Raw (signed) source coordinates.
    source: BTreeMap<Axis, f64>,
    target: BTreeMap<Axis, f64>,
    /// Minimal support (strictly increasing ratios).
    pub support: Support,
    /// Positive pairs of the minimal support, in ratio order.
    pub positive: Vec<PositivePairData>,
    /// The pre-merge refinement produced by the splitting loop (equal-ratio
    /// neighbours not yet combined).
    pub refined_positive: Vec<(BTreeSet<Axis>, BTreeSet<Axis>)>,
    /// Ratios ‖A_i‖/‖B_i‖ of the minimal support's positive pairs.
    pub ratios: Vec<f64>,
    /// Axes present in both endpoints with their two raw lengths.
    pub common: BTreeMap<Axis, (f64, f64)>,
    /// Source-only axes compatible with all disjoint target axes.
    pub source_vanishing: BTreeSet<Axis>,
    /// Target-only axes compatible with all disjoint source axes.
    pub target_growing: BTreeSet<Axis>,
    pub distance: f64,
}

/// Compute the minimal support of the geodesic between two points.
pub fn gtp_support<S: Scalar>(
    x: &GenericPoint<S>,
    t: &GenericPoint<S>,
) -> Result<GeodesicDescriptor> {
    use num_bigint::BigInt;

    if !x.same_space(t) {
        return Err(Error::PointsInDifferentSpaces);
    }
    let space = x.space().clone();

    // Intern the supported axes of both endpoints and precompute the
    // compatibility matrix once; all combinatorics below run on indices.
    let x_sup = x.support();
    let t_sup = t.support();
    let axes: Vec<Axis> = x_sup.union(&t_sup).cloned().collect();
    let n = axes.len();
    let index: BTreeMap<&Axis, usize> = axes.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut compat = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = space.compatible(&axes[i], &axes[j])?;
            compat[i][j] = c;
            compat[j][i] = c;
        }
    }
    let in_x: Vec<bool> = axes.iter().map(|a| x_sup.contains(a)).collect();
    let in_t: Vec<bool> = axes.iter().map(|a| t_sup.contains(a)).collect();

    // Raw float coordinates for metric output, exact rationals for the
    // decisions.  All combinatorial decisions are invariant under one
    // common scaling of both coordinate vectors, so clear every
    // denominator up front and work with integers m_e = x_e·L, where L is
    // the lcm of all denominators.  Squared integers m² also kill any
    // sign, matching the rule that non-common negative lengths enter by
    // absolute value.
    let mut xv = vec![0.0f64; n];
    let mut tv = vec![0.0f64; n];
    let mut x_rat: Vec<Rat> = vec![<Rat as num_traits::Zero>::zero(); n];
    let mut t_rat: Vec<Rat> = vec![<Rat as num_traits::Zero>::zero(); n];
    for (a, v) in x.coords() {
        let i = index[a];
        xv[i] = v.to_f64();
        x_rat[i] = v.to_rat();
    }
    for (a, v) in t.coords() {
        let i = index[a];
        tv[i] = v.to_f64();
        t_rat[i] = v.to_rat();
    }
    let mut lcm = BigInt::from(1u8);
    for r in x_rat.iter().chain(t_rat.iter()) {
        lcm = num_integer::Integer::lcm(&lcm, r.denom());
    }
    let scaled = |r: &Rat| -> BigInt { (r * Rat::from_integer(lcm.clone())).to_integer() };
    let x_m: Vec<BigInt> = x_rat.iter().map(&scaled).collect();
    let t_m: Vec<BigInt> = t_rat.iter().map(&scaled).collect();
    // Squared coordinates scaled by L²; the scale cancels in every cover
    // weight and ratio comparison below.
    let xi: Vec<BigInt> = x_m.iter().map(|m| m * m).collect();
    let tau: Vec<BigInt> = t_m.iter().map(|m| m * m).collect();
    let scale2 = &lcm * &lcm;

    let common_idx: Vec<usize> = (0..n).filter(|&i| in_x[i] && in_t[i]).collect();
    let x_only: Vec<usize> = (0..n).filter(|&i| in_x[i] && !in_t[i]).collect();
    let t_only: Vec<usize> = (0..n).filter(|&i| in_t[i] && !in_x[i]).collect();

    let mut vanishing_idx: Vec<usize> = Vec::new();
    let mut a0: BTreeSet<usize> = BTreeSet::new();
    for &e in &x_only {
        if t_only.iter().all(|&f| compat[e][f]) {
            vanishing_idx.push(e);
        } else {
            a0.insert(e);
        }
    }
    let mut growing_idx: Vec<usize> = Vec::new();
    let mut b0: BTreeSet<usize> = BTreeSet::new();
    for &f in &t_only {
        if x_only.iter().all(|&e| compat[e][f]) {
            growing_idx.push(f);
        } else {
            b0.insert(f);
        }
    }
    debug_assert_eq!(a0.is_empty(), b0.is_empty());

    // Successive refinement: split any pair whose min cover weighs < 1.
    let mut pairs: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = if a0.is_empty() {
        Vec::new()
    } else {
        vec![(a0, b0)]
    };
    loop {
        let mut split_at = None;
        for (idx, (a, b)) in pairs.iter().enumerate() {
            let av: Vec<(usize, Rat)> = a
                .iter()
                .map(|&e| (e, Rat::from_integer(xi[e].clone())))
                .collect();
            let bv: Vec<(usize, Rat)> = b
                .iter()
                .map(|&f| (f, Rat::from_integer(tau[f].clone())))
                .collect();
            let graph =
                IncompatibilityGraph::from_squared(av, bv, |&e, &f| !compat[e][f])?;
            if let Some(cut) = graph.p3_split() {
                let label = |side: &BTreeSet<usize>, items: &[usize]| -> BTreeSet<usize> {
                    side.iter().map(|&i| items[i]).collect()
                };
                // Sink-side pair precedes the source-side pair.  Neither
                // piece can be one-sided: the root pair has no isolated
                // vertices and splits preserve that.
                let first = (
                    label(&cut.hbar_a, graph.labels_a()),
                    label(&cut.hbar_b, graph.labels_b()),
                );
                let second = (
                    label(&cut.h_a, graph.labels_a()),
                    label(&cut.h_b, graph.labels_b()),
                );
                debug_assert!(!first.0.is_empty() && !first.1.is_empty());
                debug_assert!(!second.0.is_empty() && !second.1.is_empty());
                split_at = Some((idx, first, second));
                break;
            }
        }
        match split_at {
            Some((idx, first, second)) => {
                pairs.splice(idx..=idx, [first, second]);
            }
            None => break,
        }
    }

    let pair_norms = |a: &BTreeSet<usize>, b: &BTreeSet<usize>| -> (BigInt, BigInt) {
        (a.iter().map(|&e| &xi[e]).sum(), b.iter().map(|&f| &tau[f]).sum())
    };
    // Ratios are nondecreasing on exit; exact cross-multiplied comparison.
    debug_assert!(pairs.windows(2).all(|w| {
        let (p2, q2) = pair_norms(&w[0].0, &w[0].1);
        let (r2, s2) = pair_norms(&w[1].0, &w[1].1);
        p2 * s2 <= r2 * q2
    }));

    // Merge equal-ratio neighbours into the minimal support.
    let refined_idx = pairs.clone();
    let mut merged: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = Vec::new();
    for (a, b) in pairs {
        if let Some(last) = merged.last_mut() {
            let (p2, q2) = pair_norms(&last.0, &last.1);
            let (r2, s2) = pair_norms(&a, &b);
            if p2 * s2 == r2 * q2 {
                last.0.extend(a);
                last.1.extend(b);
                continue;
            }
        }
        merged.push((a, b));
    }

    let to_axes = |set: &BTreeSet<usize>| -> BTreeSet<Axis> {
        set.iter().map(|&i| axes[i].clone()).collect()
    };
    let positive: Vec<PositivePairData> = merged
        .iter()
        .map(|(a, b)| {
            let (a2_int, b2_int) = pair_norms(a, b);
            // True (unscaled) squared norms.
            let a2 = Rat::new(a2_int, scale2.clone());
            let b2 = Rat::new(b2_int, scale2.clone());
            PositivePairData {
                a: to_axes(a),
                b: to_axes(b),
                a_norm: crate::scalar::rat_to_f64(&a2).sqrt(),
                b_norm: crate::scalar::rat_to_f64(&b2).sqrt(),
                a_norm2: a2,
                b_norm2: b2,
            }
        })
        .collect();
    let refined_positive: Vec<(BTreeSet<Axis>, BTreeSet<Axis>)> = refined_idx
        .iter()
        .map(|(a, b)| (to_axes(a), to_axes(b)))
        .collect();

    let common: BTreeMap<Axis, (f64, f64)> = common_idx
        .iter()
        .map(|&i| (axes[i].clone(), (xv[i], tv[i])))
        .collect();
    let source_vanishing: BTreeSet<Axis> = vanishing_idx.iter().map(|&i| axes[i].clone()).collect();
    let target_growing: BTreeSet<Axis> = growing_idx.iter().map(|&i| axes[i].clone()).collect();

    // Common axes grouped by equal (signed) length ratio, ascending.
    let mut common_groups: BTreeMap<(Rat,), BTreeSet<Axis>> = BTreeMap::new();
    for &i in &common_idx {
        let ratio = Rat::new(x_m[i].clone(), t_m[i].clone());
        common_groups
            .entry((ratio,))
            .or_default()
            .insert(axes[i].clone());
    }

    let mut support_pairs: Vec<SupportPair> = Vec::new();
    for (_, group) in common_groups {
        support_pairs.push(SupportPair {
            a: group.clone(),
            b: group,
            class: PairClass::NegativeCommon,
        });
    }
    if !source_vanishing.is_empty() {
        support_pairs.push(SupportPair {
            a: source_vanishing.clone(),
            b: BTreeSet::new(),
            class: PairClass::ZeroRatio,
        });
    }
    for p in &positive {
        support_pairs.push(SupportPair {
            a: p.a.clone(),
            b: p.b.clone(),
            class: PairClass::Positive,
        });
    }
    if !target_growing.is_empty() {
        support_pairs.push(SupportPair {
            a: BTreeSet::new(),
            b: target_growing.clone(),
            class: PairClass::InfiniteRatio,
        });
    }

    let mut dist2 = 0.0f64;
    for p in &positive {
        let leg = p.a_norm + p.b_norm;
        dist2 += leg * leg;
    }
    for &i in &common_idx {
        dist2 += (tv[i] - xv[i]) * (tv[i] - xv[i]);
    }
    for &i in &vanishing_idx {
        dist2 += xv[i] * xv[i];
    }
    for &i in &growing_idx {
        dist2 += tv[i] * tv[i];
    }

    let source: BTreeMap<Axis, f64> = x_sup.iter().map(|a| (a.clone(), xv[index[a]])).collect();
    let target: BTreeMap<Axis, f64> = t_sup.iter().map(|a| (a.clone(), tv[index[a]])).collect();
    let ratios: Vec<f64> = positive.iter().map(|p| p.ratio()).collect();
    Ok(GeodesicDescriptor {
        space,
        source,
        target,
        support: Support {
            pairs: support_pairs,
        },
        positive,
        refined_positive,
        ratios,
        common,
        source_vanishing,
        target_growing,
        distance: dist2.sqrt(),
    })
}

impl GeodesicDescriptor {
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// The point at parameter λ ∈ [0, 1] along the geodesic.
    pub fn point_at(&self, lambda: f64) -> Result<GenericPoint<f64>> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let mut coords: BTreeMap<Axis, f64> = BTreeMap::new();
        for (e, (xv, tv)) in &self.common {
            let v = (1.0 - lambda) * xv + lambda * tv;
            if v != 0.0 {
                coords.insert(e.clone(), v);
            }
        }
        for e in &self.source_vanishing {
            let v = (1.0 - lambda) * self.source[e];
            if v != 0.0 {
                coords.insert(e.clone(), v);
            }
        }
        for e in &self.target_growing {
            let v = lambda * self.target[e];
            if v != 0.0 {
                coords.insert(e.clone(), v);
            }
        }
        for p in &self.positive {
            // An A-axis is alive while λ/(1-λ) has not passed the pair's
            // ratio; the coefficient formula is nonpositive afterwards.
            let ca = ((1.0 - lambda) * p.a_norm - lambda * p.b_norm) / p.a_norm;
            if ca > 0.0 {
                for e in &p.a {
                    coords.insert(e.clone(), ca * self.source[e]);
                }
            }
            let cb = (lambda * p.b_norm - (1.0 - lambda) * p.a_norm) / p.b_norm;
            if cb > 0.0 {
                for e in &p.b {
                    coords.insert(e.clone(), cb * self.target[e]);
                }
            }
        }
        Ok(GenericPoint::new_unchecked(self.space.clone(), coords))
    }
}

/// Geodesic distance between two points.
pub fn distance<S: Scalar>(x: &GenericPoint<S>, t: &GenericPoint<S>) -> Result<f64> {
    Ok(gtp_support(x, t)?.distance)
}

/// The point at parameter λ along the geodesic from `x` to `t`.
pub fn point_at<S: Scalar>(
    x: &GenericPoint<S>,
    t: &GenericPoint<S>,
    lambda: f64,
) -> Result<GenericPoint<f64>> {
    gtp_support(x, t)?.point_at(lambda)
}

/// Outcome of checking a support against the defining properties.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportVerdict {
    Valid,
    /// (P1): some later A-set is incompatible with an earlier B-set.
    ViolatesP1 { later: usize, earlier: usize },
    /// (P2): ratios not nondecreasing at this boundary.
    ViolatesP2 { index: usize },
    /// (P3): this pair admits a cover of weight < 1.
    ViolatesP3 { index: usize },
}

/// Check (P1), (P2), (P3) for the positive pairs of a support, reporting
/// the first violated property.
pub fn verify_support<S: Scalar>(
    x: &GenericPoint<S>,
    t: &GenericPoint<S>,
    support: &Support,
) -> Result<SupportVerdict> {
    if !x.same_space(t) {
        return Err(Error::PointsInDifferentSpaces);
    }
    let space = x.space();
    let xi: BTreeMap<Axis, Rat> = x
        .coords()
        .iter()
        .map(|(a, v)| {
            let r = v.to_rat();
            (a.clone(), r.clone() * r)
        })
        .collect();
    let tau: BTreeMap<Axis, Rat> = t
        .coords()
        .iter()
        .map(|(a, v)| {
            let r = v.to_rat();
            (a.clone(), r.clone() * r)
        })
        .collect();

    let positive: Vec<&SupportPair> = support.positive_pairs().collect();
    for p in &positive {
        if p.a.is_empty() || p.b.is_empty() {
            return Err(Error::SupportMismatch(
                "positive pair with an empty side".into(),
            ));
        }
        for e in &p.a {
            if !xi.contains_key(e) {
                return Err(Error::SupportMismatch(format!(
                    "axis {e} not supported by the source"
                )));
            }
        }
        for e in &p.b {
            if !tau.contains_key(e) {
                return Err(Error::SupportMismatch(format!(
                    "axis {e} not supported by the target"
                )));
            }
        }
    }

    // (P1)
    for i in 0..positive.len() {
        for j in 0..i {
            for ea in &positive[i].a {
                for eb in &positive[j].b {
                    if !space.compatible(ea, eb)? {
                        return Ok(SupportVerdict::ViolatesP1 {
                            later: i,
                            earlier: j,
                        });
                    }
                }
            }
        }
    }
    // (P2): exact cross-multiplied squared ratios.
    let norms = |p: &SupportPair| -> (Rat, Rat) {
        (
            p.a.iter().map(|e| xi[e].clone()).sum(),
            p.b.iter().map(|e| tau[e].clone()).sum(),
        )
    };
    for i in 1..positive.len() {
        let (p2, q2) = norms(positive[i - 1]);
        let (r2, s2) = norms(positive[i]);
        if p2 * s2 > r2 * q2 {
            return Ok(SupportVerdict::ViolatesP2 { index: i });
        }
    }
    // (P3)
    for (i, p) in positive.iter().enumerate() {
        let av: Vec<(Axis, Rat)> = p.a.iter().map(|e| (e.clone(), xi[e].clone())).collect();
        let bv: Vec<(Axis, Rat)> = p.b.iter().map(|e| (e.clone(), tau[e].clone())).collect();
        let mut incompat = BTreeSet::new();
        for (ea, _) in &av {
            for (eb, _) in &bv {
                if !space.compatible(ea, eb)? {
                    incompat.insert((ea.clone(), eb.clone()));
                }
            }
        }
        let graph = IncompatibilityGraph::from_squared(av, bv, move |ea, eb| {
            incompat.contains(&(ea.clone(), eb.clone()))
        })?;
        if !graph.satisfies_p3() {
            return Ok(SupportVerdict::ViolatesP3 { index: i });
        }
    }
    Ok(SupportVerdict::Valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::ScaffoldGraph;

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

    pub fn pt(space: &Arc<Space>, coords: &[(&str, f64)]) -> GenericPoint<f64> {
        GenericPoint::new(
            space.clone(),
            coords
                .iter()
                .map(|(n, v)| (Axis::named(*n), *v))
                .collect(),
        )
        .unwrap()
    }

    fn axis_set(names: &[&str]) -> BTreeSet<Axis> {
        names.iter().map(|n| Axis::named(*n)).collect()
    }

    #[test]
    fn example_pair_minimal_support_and_distance() {
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 10.0), ("e2", 4.0), ("e3", 3.0)]);
        let t = pt(&space, &[("e4", 4.0), ("e5", 3.0), ("e6", 10.0)]);
        let desc = gtp_support(&x, &t).unwrap();
        let pos: Vec<_> = desc.support.positive_pairs().collect();
        assert_eq!(pos.len(), 2);
        assert_eq!(pos[0].a, axis_set(&["e2", "e3"]));
        assert_eq!(pos[0].b, axis_set(&["e6"]));
        assert_eq!(pos[1].a, axis_set(&["e1"]));
        assert_eq!(pos[1].b, axis_set(&["e4", "e5"]));
        let expected = 15.0 * 2.0f64.sqrt();
        assert!((desc.distance - expected).abs() < 1e-9 * expected);
        assert_eq!(
            verify_support(&x, &t, &desc.support).unwrap(),
            SupportVerdict::Valid
        );
    }

    #[test]
    fn example_pair_swapped_support_is_invalid() {
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 10.0), ("e2", 4.0), ("e3", 3.0)]);
        let t = pt(&space, &[("e4", 4.0), ("e5", 3.0), ("e6", 10.0)]);
        let support = Support {
            pairs: vec![
                SupportPair {
                    a: axis_set(&["e1"]),
                    b: axis_set(&["e4", "e5"]),
                    class: PairClass::Positive,
                },
                SupportPair {
                    a: axis_set(&["e2", "e3"]),
                    b: axis_set(&["e6"]),
                    class: PairClass::Positive,
                },
            ],
        };
        // The swap breaks the ratio order (2 then 1/2), and with it the
        // pairwise compatibility condition, which is checked first.
        assert_eq!(
            verify_support(&x, &t, &support).unwrap(),
            SupportVerdict::ViolatesP1 {
                later: 1,
                earlier: 0
            }
        );
    }

    #[test]
    fn decreasing_ratios_violate_p2() {
        // Same support structure as the minimal one, but the lengths of e1
        // and e6 are swapped so the ratio sequence is 5 then 1/5.
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 1.0), ("e2", 4.0), ("e3", 3.0)]);
        let t = pt(&space, &[("e4", 4.0), ("e5", 3.0), ("e6", 1.0)]);
        let support = Support {
            pairs: vec![
                SupportPair {
                    a: axis_set(&["e2", "e3"]),
                    b: axis_set(&["e6"]),
                    class: PairClass::Positive,
                },
                SupportPair {
                    a: axis_set(&["e1"]),
                    b: axis_set(&["e4", "e5"]),
                    class: PairClass::Positive,
                },
            ],
        };
        assert_eq!(
            verify_support(&x, &t, &support).unwrap(),
            SupportVerdict::ViolatesP2 { index: 1 }
        );
    }

    #[test]
    fn example_pair_single_pair_support_violates_p3() {
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 10.0), ("e2", 4.0), ("e3", 3.0)]);
        let t = pt(&space, &[("e4", 4.0), ("e5", 3.0), ("e6", 10.0)]);
        let support = Support {
            pairs: vec![SupportPair {
                a: axis_set(&["e1", "e2", "e3"]),
                b: axis_set(&["e4", "e5", "e6"]),
                class: PairClass::Positive,
            }],
        };
        assert_eq!(
            verify_support(&x, &t, &support).unwrap(),
            SupportVerdict::ViolatesP3 { index: 0 }
        );
    }

    #[test]
    fn path_table_of_the_example_pair() {
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 10.0), ("e2", 4.0), ("e3", 3.0)]);
        let t = pt(&space, &[("e4", 4.0), ("e5", 3.0), ("e6", 10.0)]);
        let desc = gtp_support(&x, &t).unwrap();
        let rows: [[f64; 6]; 7] = [
            [10.0, 4.0, 3.0, 0.0, 0.0, 0.0],
            [7.5, 2.0, 1.5, 0.0, 0.0, 0.0],
            [5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [2.5, 0.0, 0.0, 0.0, 0.0, 2.5],
            [0.0, 0.0, 0.0, 0.0, 0.0, 5.0],
            [0.0, 0.0, 0.0, 2.0, 1.5, 7.5],
            [0.0, 0.0, 0.0, 4.0, 3.0, 10.0],
        ];
        let names = ["e1", "e2", "e3", "e4", "e5", "e6"];
        for (i, row) in rows.iter().enumerate() {
            let p = desc.point_at(i as f64 / 6.0).unwrap();
            for (k, name) in names.iter().enumerate() {
                let got = p.get(&Axis::named(*name)).copied().unwrap_or(0.0);
                assert!(
                    (got - row[k]).abs() < 1e-9,
                    "row {i}, axis {name}: got {got}, want {}",
                    row[k]
                );
            }
        }
    }

    #[test]
    fn identical_points_are_all_common() {
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 2.0), ("e2", 1.0)]);
        let desc = gtp_support(&x, &x).unwrap();
        assert_eq!(desc.support.positive_pairs().count(), 0);
        assert_eq!(desc.distance, 0.0);
        assert_eq!(desc.common.len(), 2);
    }

    #[test]
    fn same_orthant_distance_is_euclidean() {
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 1.0), ("e2", 2.0)]);
        let t = pt(&space, &[("e1", 4.0), ("e3", 2.0)]);
        let d = distance(&x, &t).unwrap();
        let expected = (9.0f64 + 4.0 + 4.0).sqrt();
        assert!((d - expected).abs() < 1e-12);
    }

    #[test]
    fn distance_from_origin_is_the_norm() {
        let space = example_scaffold();
        let origin = GenericPoint::<f64>::origin(space.clone());
        let t = pt(&space, &[("e4", 3.0), ("e5", 4.0)]);
        assert!((distance(&origin, &t).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn endpoints_are_reproduced_exactly() {
        let space = example_scaffold();
        let x = pt(&space, &[("e1", 10.0), ("e2", 4.0), ("e3", 3.0)]);
        let t = pt(&space, &[("e4", 4.0), ("e5", 3.0), ("e6", 10.0)]);
        let desc = gtp_support(&x, &t).unwrap();
        assert_eq!(desc.point_at(0.0).unwrap(), x);
        assert_eq!(desc.point_at(1.0).unwrap(), t);
        assert!(matches!(
            desc.point_at(1.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn signed_space_common_axis_interpolates_raw_values() {
        let g = ScaffoldGraph::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        let space = Space::scaffold(g, true);
        let x = pt(&space, &[("a", -2.0)]);
        let t = pt(&space, &[("a", 3.0)]);
        assert!((distance(&x, &t).unwrap() - 5.0).abs() < 1e-12);
        let mid = point_at(&x, &t, 0.5).unwrap();
        assert!((mid.get(&Axis::named("a")).copied().unwrap_or(0.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn signed_space_noncommon_axis_contributes_absolute_value() {
        let g = ScaffoldGraph::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        let space = Space::scaffold(g, true);
        let x = pt(&space, &[("a", -2.0)]);
        let t = pt(&space, &[("b", 3.0)]);
        // a is compatible with b, so both are linear legs: distance is the
        // Euclidean length with |−2|.
        let d = distance(&x, &t).unwrap();
        assert!((d - (4.0f64 + 9.0).sqrt()).abs() < 1e-12);
        // The sign survives along the path.
        let p = point_at(&x, &t, 0.25).unwrap();
        assert!((p.get(&Axis::named("a")).copied().unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn unsigned_space_rejects_negative_input() {
        let space = example_scaffold();
        let bad = GenericPoint::new(
            space.clone(),
            [(Axis::named("e1"), -1.0)].into_iter().collect(),
        );
        assert!(matches!(bad, Err(Error::NegativeLength(_))));
    }

    #[test]
    fn cone_path_when_everything_is_incompatible() {
        // Two axes, not compatible: the only route is through the origin.
        let g = ScaffoldGraph::from_names(&["a", "b"], &[]).unwrap();
        let space = Space::scaffold(g, false);
        let x = pt(&space, &[("a", 3.0)]);
        let t = pt(&space, &[("b", 4.0)]);
        assert!((distance(&x, &t).unwrap() - 7.0).abs() < 1e-12);
        let mid = point_at(&x, &t, 3.0 / 7.0).unwrap();
        assert!(mid.is_origin());
    }
}
