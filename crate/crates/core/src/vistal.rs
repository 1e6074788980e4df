//! Vistal cells: the polyhedral regions of squared coordinates whose
//! points share a fixed geodesic combinatorics toward a fixed source.
//!
//! After squaring coordinates, the set of points in an orthant whose
//! geodesic to a source point has a given support and ratio-equality
//! pattern is cut out by a homogeneous linear system: nonnegativity (O),
//! one ratio-order row per consecutive positive pair (P2, with the
//! relation taken from the signature), and one no-shortcut row (P3) per
//! compatible subset pair inside each support pair.  All coefficients are
//! exact rationals derived from the source's squared lengths.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geodesic::{PairClass, Support, SupportPair};
use crate::point::{GenericPoint, SquaredPoint};
use crate::scalar::Scalar;
use crate::simplex::{LinearSystem, RowRel};
use crate::space::{Axis, Space};
use crate::Rat;

/// One signature symbol between consecutive positive pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sig {
    Eq,
    Leq,
}

/// Ratio-equality pattern of a support: length k−1 for k positive pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature(pub Vec<Sig>);

impl Signature {
    pub fn all_leq(k: usize) -> Signature {
        Signature(vec![Sig::Leq; k.saturating_sub(1)])
    }

    pub fn eq_count(&self) -> usize {
        self.0.iter().filter(|s| **s == Sig::Eq).count()
    }

    /// Renders as a string over '<' and '=', e.g. "<=<".
    pub fn render(&self) -> String {
        self.0
            .iter()
            .map(|s| match s {
                Sig::Eq => '=',
                Sig::Leq => '<',
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowKind {
    /// ξ_e ≥ 0.
    Orthant(Axis),
    /// Ratio order between positive pairs i and i+1.
    RatioOrder(usize),
    /// No improving subsplit (I, J) of positive pair `pair`.
    NoShortcut {
        pair: usize,
        i_set: BTreeSet<Axis>,
        j_set: BTreeSet<Axis>,
    },
}

/// One row `coeffs · ξ ⋈ 0` of a cell system.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRow {
    pub kind: RowKind,
    pub coeffs: BTreeMap<Axis, Rat>,
    /// `Ge` rows must be strict at interior points; `Eq` rows come from
    /// the signature's '=' symbols.
    pub rel: RowRel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VistalCell {
    space: Arc<Space>,
    /// Squared lengths of the source point.
    pub source_squared: BTreeMap<Axis, Rat>,
    pub orthant: BTreeSet<Axis>,
    pub support: Support,
    pub signature: Signature,
    pub rows: Vec<CellRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Coordinatewise squaring.
pub fn square<S: Scalar>(p: &GenericPoint<S>) -> SquaredPoint<S> {
    let coords: BTreeMap<Axis, S> = p
        .coords()
        .iter()
        .map(|(a, v)| (a.clone(), v.clone() * v.clone()))
        .collect();
    SquaredPoint(GenericPoint::new_unchecked(p.space().clone(), coords))
}

/// Coordinatewise square root; rejects negative squared coordinates.
pub fn unsquare<S: Scalar>(xi: &SquaredPoint<S>) -> Result<GenericPoint<f64>> {
    let mut coords = BTreeMap::new();
    for (a, v) in xi.coords() {
        if v.is_negative_value() {
            return Err(Error::InvalidSquaredCoordinate(a.to_string()));
        }
        coords.insert(a.clone(), v.to_f64().sqrt());
    }
    Ok(GenericPoint::new_unchecked(xi.space().clone(), coords))
}

/// The derived segregation of an (orthant, source) configuration.
struct Segregation {
    /// Orthant axes shared with the source.
    common: BTreeSet<Axis>,
    /// Orthant-only axes compatible with every disjoint source axis.
    vanishing: BTreeSet<Axis>,
    /// Source-only axes compatible with every disjoint orthant axis.
    growing: BTreeSet<Axis>,
    /// Orthant axes that must be partitioned by the A-sets.
    a_axes: BTreeSet<Axis>,
    /// Source axes that must be partitioned by the B-sets.
    b_axes: BTreeSet<Axis>,
}

fn segregate(
    space: &Space,
    orthant: &BTreeSet<Axis>,
    source_support: &BTreeSet<Axis>,
) -> Result<Segregation> {
    let common: BTreeSet<Axis> = orthant.intersection(source_support).cloned().collect();
    let x_only: BTreeSet<Axis> = orthant.difference(&common).cloned().collect();
    let t_only: BTreeSet<Axis> = source_support.difference(&common).cloned().collect();
    let mut vanishing = BTreeSet::new();
    let mut a_axes = BTreeSet::new();
    for e in &x_only {
        let mut all = true;
        for f in &t_only {
            if !space.compatible(e, f)? {
                all = false;
                break;
            }
        }
        if all {
            vanishing.insert(e.clone());
        } else {
            a_axes.insert(e.clone());
        }
    }
    let mut growing = BTreeSet::new();
    let mut b_axes = BTreeSet::new();
    for f in &t_only {
        let mut all = true;
        for e in &x_only {
            if !space.compatible(e, f)? {
                all = false;
                break;
            }
        }
        if all {
            growing.insert(f.clone());
        } else {
            b_axes.insert(f.clone());
        }
    }
    Ok(Segregation {
        common,
        vanishing,
        growing,
        a_axes,
        b_axes,
    })
}

fn positive_pairs_of(support: &Support) -> Vec<(BTreeSet<Axis>, BTreeSet<Axis>)> {
    support
        .positive_pairs()
        .map(|p| (p.a.clone(), p.b.clone()))
        .collect()
}

fn check_partition(
    blocks: &[BTreeSet<Axis>],
    universe: &BTreeSet<Axis>,
    what: &str,
) -> Result<()> {
    let mut seen = BTreeSet::new();
    for b in blocks {
        if b.is_empty() {
            return Err(Error::SupportMismatch(format!("empty {what} block")));
        }
        for e in b {
            if !seen.insert(e.clone()) {
                return Err(Error::SupportMismatch(format!(
                    "axis {e} appears in two {what} blocks"
                )));
            }
        }
    }
    if &seen != universe {
        return Err(Error::SupportMismatch(format!(
            "{what} blocks do not partition the required axes"
        )));
    }
    Ok(())
}

/// Build the full canonical support (common groups, vanishing/growing
/// pairs, positive pairs) for presentation purposes.
fn assemble_support<S: Scalar>(
    source: &GenericPoint<S>,
    seg: &Segregation,
    positive: &[(BTreeSet<Axis>, BTreeSet<Axis>)],
) -> Support {
    let mut pairs = Vec::new();
    if !seg.common.is_empty() {
        // Common axes are grouped only when interpreted at a concrete
        // point; for a cell the grouping is irrelevant, so keep one group.
        pairs.push(SupportPair {
            a: seg.common.clone(),
            b: seg.common.clone(),
            class: PairClass::NegativeCommon,
        });
    }
    if !seg.vanishing.is_empty() {
        pairs.push(SupportPair {
            a: seg.vanishing.clone(),
            b: BTreeSet::new(),
            class: PairClass::ZeroRatio,
        });
    }
    for (a, b) in positive {
        pairs.push(SupportPair {
            a: a.clone(),
            b: b.clone(),
            class: PairClass::Positive,
        });
    }
    if !seg.growing.is_empty() {
        pairs.push(SupportPair {
            a: BTreeSet::new(),
            b: seg.growing.clone(),
            class: PairClass::InfiniteRatio,
        });
    }
    let _ = source;
    Support { pairs }
}

/// Pair-size cap for the no-shortcut row enumeration, which is
/// exponential in the pair size.
const P3_ENUMERATION_CAP: usize = 12;

/// Build the cell of (source, orthant, support, signature).
pub fn cell_system<S: Scalar>(
    source: &GenericPoint<S>,
    orthant: &BTreeSet<Axis>,
    support: &Support,
    signature: &Signature,
) -> Result<VistalCell> {
    let space = source.space().clone();
    for e in orthant {
        space.check_axis(e)?;
    }
    if !space.is_clique(orthant)? {
        return Err(Error::NotAFace("orthant is not a clique".into()));
    }
    let seg = segregate(&space, orthant, &source.support())?;
    let positive = positive_pairs_of(support);
    let a_blocks: Vec<BTreeSet<Axis>> = positive.iter().map(|(a, _)| a.clone()).collect();
    let b_blocks: Vec<BTreeSet<Axis>> = positive.iter().map(|(_, b)| b.clone()).collect();
    check_partition(&a_blocks, &seg.a_axes, "A")?;
    check_partition(&b_blocks, &seg.b_axes, "B")?;
    if signature.0.len() + 1 != positive.len().max(1) {
        return Err(Error::SupportMismatch(format!(
            "signature length {} does not match {} positive pairs",
            signature.0.len(),
            positive.len()
        )));
    }

    let tau: BTreeMap<Axis, Rat> = source
        .coords()
        .iter()
        .map(|(a, v)| {
            let r = v.to_rat();
            (a.clone(), r.clone() * r)
        })
        .collect();
    let tau_sum = |set: &BTreeSet<Axis>| -> Rat { set.iter().map(|e| tau[e].clone()).sum() };

    let mut rows = Vec::new();
    for e in orthant {
        rows.push(CellRow {
            kind: RowKind::Orthant(e.clone()),
            coeffs: [(e.clone(), Rat::one())].into_iter().collect(),
            rel: RowRel::Ge,
        });
    }
    // Ratio order: ‖B_i‖²·Σ_{A_{i+1}} ξ − ‖B_{i+1}‖²·Σ_{A_i} ξ ⋈ 0.
    for i in 0..positive.len().saturating_sub(1) {
        let bi = tau_sum(&positive[i].1);
        let bnext = tau_sum(&positive[i + 1].1);
        let mut coeffs: BTreeMap<Axis, Rat> = BTreeMap::new();
        for e in &positive[i + 1].0 {
            *coeffs.entry(e.clone()).or_insert_with(Rat::zero) += bi.clone();
        }
        for e in &positive[i].0 {
            *coeffs.entry(e.clone()).or_insert_with(Rat::zero) -= bnext.clone();
        }
        rows.push(CellRow {
            kind: RowKind::RatioOrder(i),
            coeffs,
            rel: match signature.0[i] {
                Sig::Eq => RowRel::Eq,
                Sig::Leq => RowRel::Ge,
            },
        });
    }
    // No-shortcut rows: for nonempty I ⊆ A_i, J ⊆ B_i with I ∪ J
    // compatible: ‖B∖J‖²·Σ_{A∖I} ξ − ‖J‖²·Σ_I ξ ≥ 0.
    for (pair_idx, (a_set, b_set)) in positive.iter().enumerate() {
        if a_set.len() + b_set.len() > P3_ENUMERATION_CAP {
            return Err(Error::LimitExceeded(format!(
                "no-shortcut enumeration for a pair of size {}",
                a_set.len() + b_set.len()
            )));
        }
        let a_vec: Vec<&Axis> = a_set.iter().collect();
        let b_vec: Vec<&Axis> = b_set.iter().collect();
        let mut incompat = vec![vec![false; b_vec.len()]; a_vec.len()];
        for (ia, ea) in a_vec.iter().enumerate() {
            for (jb, eb) in b_vec.iter().enumerate() {
                incompat[ia][jb] = !space.compatible(ea, eb)?;
            }
        }
        for i_mask in 1u32..(1 << a_vec.len()) {
            for j_mask in 1u32..(1 << b_vec.len()) {
                let crossing = (0..a_vec.len()).any(|ia| {
                    i_mask & (1 << ia) != 0
                        && (0..b_vec.len())
                            .any(|jb| j_mask & (1 << jb) != 0 && incompat[ia][jb])
                });
                if crossing {
                    continue;
                }
                let i_set: BTreeSet<Axis> = (0..a_vec.len())
                    .filter(|ia| i_mask & (1 << ia) != 0)
                    .map(|ia| a_vec[ia].clone())
                    .collect();
                let j_set: BTreeSet<Axis> = (0..b_vec.len())
                    .filter(|jb| j_mask & (1 << jb) != 0)
                    .map(|jb| b_vec[jb].clone())
                    .collect();
                let j_weight = tau_sum(&j_set);
                let rest_b: BTreeSet<Axis> = b_set.difference(&j_set).cloned().collect();
                let rest_weight = tau_sum(&rest_b);
                let mut coeffs: BTreeMap<Axis, Rat> = BTreeMap::new();
                for e in a_set.difference(&i_set) {
                    *coeffs.entry(e.clone()).or_insert_with(Rat::zero) += rest_weight.clone();
                }
                for e in &i_set {
                    *coeffs.entry(e.clone()).or_insert_with(Rat::zero) -= j_weight.clone();
                }
                rows.push(CellRow {
                    kind: RowKind::NoShortcut {
                        pair: pair_idx,
                        i_set,
                        j_set,
                    },
                    coeffs,
                    rel: RowRel::Ge,
                });
            }
        }
    }

    Ok(VistalCell {
        space,
        source_squared: tau,
        orthant: orthant.clone(),
        support: assemble_support(source, &seg, &positive),
        signature: signature.clone(),
        rows,
    })
}

/// The facet of a support: the cell with the all-'<' signature.
pub fn facet_system<S: Scalar>(
    source: &GenericPoint<S>,
    orthant: &BTreeSet<Axis>,
    support: &Support,
) -> Result<VistalCell> {
    let k = support.positive_pairs().count();
    cell_system(source, orthant, support, &Signature::all_leq(k))
}

impl VistalCell {
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// Evaluate one row at exact squared coordinates.
    fn evaluate_row(&self, row: &CellRow, xi: &BTreeMap<Axis, Rat>) -> Rat {
        row.coeffs
            .iter()
            .map(|(a, c)| c.clone() * xi.get(a).cloned().unwrap_or_else(Rat::zero))
            .sum()
    }

    /// Exact membership classification.
    pub fn membership<S: Scalar>(&self, xi: &SquaredPoint<S>) -> Membership {
        let exact: BTreeMap<Axis, Rat> = xi
            .coords()
            .iter()
            .map(|(a, v)| (a.clone(), v.to_rat()))
            .collect();
        // (O) includes ξ_e = 0 for axes outside the orthant.
        for (a, v) in &exact {
            if !self.orthant.contains(a) && !v.is_zero() {
                return Membership::Outside;
            }
        }
        let mut tight = false;
        for row in &self.rows {
            let val = self.evaluate_row(row, &exact);
            match row.rel {
                RowRel::Eq => {
                    if !val.is_zero() {
                        return Membership::Outside;
                    }
                }
                RowRel::Ge | RowRel::GeStrict => {
                    if val.is_negative() {
                        return Membership::Outside;
                    }
                    if val.is_zero() {
                        tight = true;
                    }
                }
            }
        }
        if tight {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    /// The cell's system as input for the exact feasibility solver, with
    /// every non-equality row marked strict (relative-interior query).
    pub fn strict_system(&self) -> LinearSystem {
        LinearSystem {
            rows: self
                .rows
                .iter()
                .map(|r| {
                    let rel = match r.rel {
                        RowRel::Eq => RowRel::Eq,
                        _ => RowRel::GeStrict,
                    };
                    (r.coeffs.clone(), rel)
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        let rat_str = |r: &Rat| -> Value { Value::String(r.to_string()) };
        let axis_str = |a: &Axis| -> Value { Value::String(a.to_string()) };
        let coeff_map = |coeffs: &BTreeMap<Axis, Rat>| -> Value {
            let mut m = Map::new();
            for (a, c) in coeffs {
                m.insert(a.to_string(), rat_str(c));
            }
            Value::Object(m)
        };
        let mut source = Map::new();
        for (a, t) in &self.source_squared {
            source.insert(a.to_string(), rat_str(t));
        }
        let support: Vec<Value> = self
            .support
            .pairs
            .iter()
            .map(|p| {
                json!({
                    "a": p.a.iter().map(axis_str).collect::<Vec<_>>(),
                    "b": p.b.iter().map(axis_str).collect::<Vec<_>>(),
                    "class": match p.class {
                        PairClass::NegativeCommon => "negative-common",
                        PairClass::ZeroRatio => "zero-ratio",
                        PairClass::Positive => "positive",
                        PairClass::InfiniteRatio => "infinite-ratio",
                    },
                })
            })
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let kind = match &r.kind {
                    RowKind::Orthant(a) => json!({"type": "orthant", "axis": a.to_string()}),
                    RowKind::RatioOrder(i) => json!({"type": "ratio-order", "index": i}),
                    RowKind::NoShortcut { pair, i_set, j_set } => json!({
                        "type": "no-shortcut",
                        "pair": pair,
                        "i": i_set.iter().map(axis_str).collect::<Vec<_>>(),
                        "j": j_set.iter().map(axis_str).collect::<Vec<_>>(),
                    }),
                };
                json!({
                    "kind": kind,
                    "rel": match r.rel { RowRel::Eq => "=", _ => ">=" },
                    "coeffs": coeff_map(&r.coeffs),
                })
            })
            .collect();
        json!({
            "source_squared": Value::Object(source),
            "orthant": self.orthant.iter().map(axis_str).collect::<Vec<_>>(),
            "support": support,
            "signature": self.signature.render(),
            "system": rows,
        })
    }
}

/// Maximal runs of consecutive positive pairs joined by '=' symbols.
fn equality_runs(k: usize, signature: &Signature) -> Vec<std::ops::Range<usize>> {
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 0..k {
        let run_continues = i < k - 1 && signature.0[i] == Sig::Eq;
        if !run_continues {
            runs.push(start..i + 1);
            start = i + 1;
        }
    }
    runs
}

/// Validity of a support sequence: within each maximal equality run the
/// pairs must be nonempty (F1), have connected incompatibility graphs
/// (F2), and contract to an acyclic quotient (F3); across runs the
/// ordinary compatibility order must hold.
pub fn is_valid_support_sequence<S: Scalar>(
    source: &GenericPoint<S>,
    orthant: &BTreeSet<Axis>,
    support: &Support,
    signature: &Signature,
) -> Result<bool> {
    let space = source.space().clone();
    let seg = segregate(&space, orthant, &source.support())?;
    let positive = positive_pairs_of(support);
    let a_blocks: Vec<BTreeSet<Axis>> = positive.iter().map(|(a, _)| a.clone()).collect();
    let b_blocks: Vec<BTreeSet<Axis>> = positive.iter().map(|(_, b)| b.clone()).collect();
    check_partition(&a_blocks, &seg.a_axes, "A")?;
    check_partition(&b_blocks, &seg.b_axes, "B")?;
    if positive.is_empty() {
        return Ok(true);
    }
    if signature.0.len() + 1 != positive.len() {
        return Err(Error::SupportMismatch(
            "signature length does not match the positive pairs".into(),
        ));
    }
    let k = positive.len();
    let runs = equality_runs(k, signature);
    let run_of = {
        let mut v = vec![0usize; k];
        for (r, range) in runs.iter().enumerate() {
            for i in range.clone() {
                v[i] = r;
            }
        }
        v
    };
    // Cross-run compatibility: a later run's A-axes must be compatible
    // with every earlier run's B-axes.
    for i in 0..k {
        for j in 0..i {
            if run_of[i] == run_of[j] {
                continue;
            }
            for ea in &positive[i].0 {
                for eb in &positive[j].1 {
                    if !space.compatible(ea, eb)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    // (F1)–(F3) per run.
    for range in &runs {
        let pairs = &positive[range.clone()];
        // F1 is the nonemptiness already checked by check_partition.
        // F2: each pair's incompatibility graph is connected.
        for (a, b) in pairs {
            if !incompat_connected(&space, a, b)? {
                return Ok(false);
            }
        }
        // F3: contract each pair in the run's merged graph and require an
        // acyclic quotient; an arc goes from the block of an A-axis to the
        // block of an incompatible B-axis.
        let blocks = pairs.len();
        let mut adj = vec![BTreeSet::<usize>::new(); blocks];
        for (bi, (a_set, _)) in pairs.iter().enumerate() {
            for (bj, (_, b_set)) in pairs.iter().enumerate() {
                if bi == bj {
                    continue;
                }
                'outer: for ea in a_set {
                    for eb in b_set {
                        if !space.compatible(ea, eb)? {
                            adj[bi].insert(bj);
                            break 'outer;
                        }
                    }
                }
            }
        }
        if has_cycle(&adj) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn incompat_connected(space: &Space, a: &BTreeSet<Axis>, b: &BTreeSet<Axis>) -> Result<bool> {
    let a_vec: Vec<&Axis> = a.iter().collect();
    let b_vec: Vec<&Axis> = b.iter().collect();
    let n = a_vec.len() + b_vec.len();
    if n == 0 {
        return Ok(true);
    }
    let mut adj = vec![Vec::new(); n];
    for (i, ea) in a_vec.iter().enumerate() {
        for (j, eb) in b_vec.iter().enumerate() {
            if !space.compatible(ea, eb)? {
                adj[i].push(a_vec.len() + j);
                adj[a_vec.len() + j].push(i);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    Ok(count == n)
}

fn has_cycle(adj: &[BTreeSet<usize>]) -> bool {
    let n = adj.len();
    let mut state = vec![0u8; n]; // 0 unseen, 1 on stack, 2 done
    fn dfs(u: usize, adj: &[BTreeSet<usize>], state: &mut [u8]) -> bool {
        state[u] = 1;
        for &v in &adj[u] {
            if state[v] == 1 {
                return true;
            }
            if state[v] == 0 && dfs(v, adj, state) {
                return true;
            }
        }
        state[u] = 2;
        false
    }
    (0..n).any(|u| state[u] == 0 && dfs(u, adj, &mut state))
}

/// Construct a point in the relative interior of a cell, or `None` when
/// the cell's relative interior is empty.
///
/// Within each equality run the A-weights are rebuilt by spreading each
/// B-weight uniformly over its incident incompatibility edges, which makes
/// every ratio in the run equal and every no-shortcut row strict; runs are
/// then scaled by increasing multipliers to make the ratio order strict
/// across runs.
pub fn interior_witness(cell: &VistalCell) -> Result<Option<SquaredPoint<Rat>>> {
    let space = cell.space.clone();
    let source_support: BTreeSet<Axis> = cell.source_squared.keys().cloned().collect();
    let source_exact = GenericPoint::new_unchecked(
        space.clone(),
        cell.source_squared
            .iter()
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect(),
    );
    // `source_exact` holds squared values; segregation and validity only
    // look at supports and compatibility, so this is safe.
    if !is_valid_support_sequence(&source_exact, &cell.orthant, &cell.support, &cell.signature)? {
        return Ok(None);
    }
    let _ = source_support;

    let positive = positive_pairs_of(&cell.support);
    let k = positive.len();
    let runs = equality_runs(k, &cell.signature);

    let tau = &cell.source_squared;
    for escalation in 1..=50u32 {
        let mut xi: BTreeMap<Axis, Rat> = BTreeMap::new();
        // Axes with no role in the positive pairs (common with the source,
        // or vanishing) only need positivity.
        let in_pairs: BTreeSet<Axis> = positive.iter().flat_map(|(a, _)| a.iter().cloned()).collect();
        for e in &cell.orthant {
            if !in_pairs.contains(e) {
                xi.insert(e.clone(), Rat::one());
            }
        }
        let base = Rat::from_integer(num_bigint::BigInt::from(2u64)) ;
        for (run_idx, range) in runs.iter().enumerate() {
            // Multiplier 2^(run · escalation): strictly increasing ratios.
            let multiplier = num_traits::pow::pow(base.clone(), run_idx * escalation as usize);
            for (a_set, b_set) in &positive[range.clone()] {
                // deg(b): number of incompatibility edges from this pair's
                // A-side into b.
                for a in a_set {
                    let mut weight = Rat::zero();
                    for b in b_set {
                        if !space.compatible(a, b)? {
                            let deg = {
                                let mut d = 0usize;
                                for a2 in a_set {
                                    if !space.compatible(a2, b)? {
                                        d += 1;
                                    }
                                }
                                d
                            };
                            weight += tau[b].clone()
                                / Rat::from_integer(num_bigint::BigInt::from(deg as u64));
                        }
                    }
                    xi.insert(a.clone(), weight * multiplier.clone());
                }
            }
        }
        let point = SquaredPoint(GenericPoint::new_unchecked(space.clone(), xi));
        if cell.membership(&point) == Membership::Interior {
            return Ok(Some(point));
        }
    }
    Err(Error::LimitExceeded(
        "witness scaling did not reach the interior after 50 escalations".into(),
    ))
}

/// Dimension of a cell with nonempty relative interior.
pub fn cell_dimension(cell: &VistalCell) -> Result<usize> {
    if interior_witness(cell)?.is_none() {
        return Err(Error::EmptyInterior);
    }
    Ok(cell.orthant.len() - cell.signature.eq_count())
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationLimits {
    pub max_candidates: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_candidates: 100_000,
        }
    }
}

/// Enumerate the facets of the vistal subdivision restricted to one
/// orthant: all supports whose all-'<' cell has nonempty interior.
pub fn enumerate_facets<S: Scalar>(
    source: &GenericPoint<S>,
    orthant: &BTreeSet<Axis>,
    limits: EnumerationLimits,
) -> Result<Vec<VistalCell>> {
    let space = source.space().clone();
    let seg = segregate(&space, orthant, &source.support())?;
    let a_axes: Vec<Axis> = seg.a_axes.iter().cloned().collect();
    let b_axes: Vec<Axis> = seg.b_axes.iter().cloned().collect();

    if a_axes.is_empty() {
        // Everything is common, vanishing, or growing: a single facet.
        let support = assemble_support(source, &seg, &[]);
        let cell = cell_system(source, orthant, &support, &Signature(vec![]))?;
        return Ok(vec![cell]);
    }

    let mut facets = Vec::new();
    let mut candidates = 0usize;
    let max_k = a_axes.len().min(b_axes.len());
    for k in 1..=max_k {
        for a_part in ordered_partitions(&a_axes, k) {
            for b_part in ordered_partitions(&b_axes, k) {
                candidates += 1;
                if candidates > limits.max_candidates {
                    return Err(Error::LimitExceeded(format!(
                        "facet candidate enumeration past {}",
                        limits.max_candidates
                    )));
                }
                let pairs: Vec<(BTreeSet<Axis>, BTreeSet<Axis>)> = a_part
                    .iter()
                    .cloned()
                    .zip(b_part.iter().cloned())
                    .collect();
                if !pairs_satisfy_p1(&space, &pairs)? {
                    continue;
                }
                let mut connected = true;
                for (a, b) in &pairs {
                    if !incompat_connected(&space, a, b)? {
                        connected = false;
                        break;
                    }
                }
                if !connected {
                    continue;
                }
                let support = assemble_support(source, &seg, &pairs);
                let cell = facet_system(source, orthant, &support)?;
                debug_assert!(interior_witness(&cell)?.is_some());
                facets.push(cell);
            }
        }
    }
    Ok(facets)
}

fn pairs_satisfy_p1(
    space: &Space,
    pairs: &[(BTreeSet<Axis>, BTreeSet<Axis>)],
) -> Result<bool> {
    for i in 0..pairs.len() {
        for j in 0..i {
            for ea in &pairs[i].0 {
                for eb in &pairs[j].1 {
                    if !space.compatible(ea, eb)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// All ordered partitions of `items` into exactly `k` nonempty blocks.
fn ordered_partitions(items: &[Axis], k: usize) -> Vec<Vec<BTreeSet<Axis>>> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; items.len()];
    loop {
        // Check all blocks nonempty.
        let mut used = vec![false; k];
        for &b in &assignment {
            used[b] = true;
        }
        if used.iter().all(|&u| u) {
            let mut blocks = vec![BTreeSet::new(); k];
            for (i, &b) in assignment.iter().enumerate() {
                blocks[b].insert(items[i].clone());
            }
            out.push(blocks);
        }
        // Next assignment in base k.
        let mut pos = 0;
        loop {
            if pos == items.len() {
                return out;
            }
            assignment[pos] += 1;
            if assignment[pos] < k {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Membership in the intersection of several cells (conjunction of their
/// systems).
pub fn multivistal_membership<S: Scalar>(
    xi: &SquaredPoint<S>,
    cells: &[VistalCell],
) -> Membership {
    let mut tight = false;
    for cell in cells {
        match cell.membership(xi) {
            Membership::Outside => return Membership::Outside,
            Membership::Boundary => tight = true,
            Membership::Interior => {}
        }
    }
    if tight {
        Membership::Boundary
    } else {
        Membership::Interior
    }
}
