//! Weighted bipartite incompatibility graphs and the max-flow machinery
//! behind the no-shortcut test (P3), in exact rational arithmetic.
//!
//! A support pair (A, B) induces a bipartite graph with an edge wherever an
//! A-axis is incompatible with a B-axis; vertex weights are the squared
//! lengths normalized by their side sums.  The pair admits no improving
//! subsplit exactly when every vertex cover weighs at least 1, equivalently
//! when the max flow of the associated network is 1.  Cuts of the residual
//! graph enumerate the equal-ratio refinements of the pair.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// Weighted bipartite incompatibility graph over label type `L`.
/// Weights are normalized: each side sums to exactly 1.
///
/// Internally the weights live as integers over a per-side common scale
/// (only the ratios weight/total matter), so the flow machinery never
/// reduces a rational; the normalized sides are materialized on demand.
#[derive(Debug, Clone)]
pub struct IncompatibilityGraph<L: Clone + Ord + std::fmt::Debug> {
    labels_a: Vec<L>,
    labels_b: Vec<L>,
    a_int: Vec<BigInt>,
    b_int: Vec<BigInt>,
    a_total: BigInt,
    b_total: BigInt,
    edges: BTreeSet<(usize, usize)>,
    normalized_a: std::sync::OnceLock<Vec<(L, Rat)>>,
    normalized_b: std::sync::OnceLock<Vec<(L, Rat)>>,
}

impl<L: Clone + Ord + std::fmt::Debug> PartialEq for IncompatibilityGraph<L> {
    fn eq(&self, other: &Self) -> bool {
        self.labels_a == other.labels_a
            && self.labels_b == other.labels_b
            && self.edges == other.edges
            && self
                .a_int
                .iter()
                .zip(&other.a_int)
                .all(|(x, y)| x * &other.a_total == y * &self.a_total)
            && self
                .b_int
                .iter()
                .zip(&other.b_int)
                .all(|(x, y)| x * &other.b_total == y * &self.b_total)
    }
}

/// A maximum flow on the network of an incompatibility graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    /// Flow value; equals the min-cut capacity and the min cover weight.
    pub value: Rat,
    /// Flow on the source arc into each A-vertex.
    pub source_arcs: Vec<Rat>,
    /// Flow on the sink arc out of each B-vertex.
    pub sink_arcs: Vec<Rat>,
    /// Flow on the incompatibility arcs.
    pub middle: BTreeMap<(usize, usize), Rat>,
}

/// Integer form of a flow: everything scaled by a_total·b_total.
struct IntFlow {
    value: BigInt,
    source_arcs: Vec<BigInt>,
    sink_arcs: Vec<BigInt>,
    middle: BTreeMap<(usize, usize), BigInt>,
    scale: BigInt,
}

/// Min-weight vertex cover extracted from a min cut.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover<L> {
    pub weight: Rat,
    pub a_vertices: BTreeSet<usize>,
    pub b_vertices: BTreeSet<usize>,
    pub a_labels: BTreeSet<L>,
    pub b_labels: BTreeSet<L>,
}

/// One equal-ratio refinement: the (A', B') blocks in ratio order.
pub type Refinement<L> = Vec<(BTreeSet<L>, BTreeSet<L>)>;

/// A nontrivial source/sink partition of the (residual) network.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPartition {
    /// A-indices on the source side.
    pub h_a: BTreeSet<usize>,
    pub h_b: BTreeSet<usize>,
    /// A-indices on the sink side.
    pub hbar_a: BTreeSet<usize>,
    pub hbar_b: BTreeSet<usize>,
}

/// Strongly connected components of the residual graph, contracted into an
/// acyclic quotient.  Group 0 never exists for the terminals: the source
/// and sink are always singleton groups.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualDag {
    /// Non-terminal groups: (A-indices, B-indices), sorted by least vertex.
    pub groups: Vec<(BTreeSet<usize>, BTreeSet<usize>)>,
    /// Precedence edges between non-terminal groups: `(g, h)` means group
    /// g's pair precedes group h's pair in every ratio sequence.
    pub edges: BTreeSet<(usize, usize)>,
}

impl<L: Clone + Ord + std::fmt::Debug> IncompatibilityGraph<L> {
    /// Build from squared lengths.  `incompatible(a, b)` decides the edges.
    pub fn from_squared(
        a: Vec<(L, Rat)>,
        b: Vec<(L, Rat)>,
        incompatible: impl Fn(&L, &L) -> bool,
    ) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySide);
        }
        for (l, w) in a.iter().chain(b.iter()) {
            if w.is_zero() || w.is_negative() {
                return Err(Error::ZeroWeight(format!("{l:?}")));
            }
        }
        let clear = |side: &[(L, Rat)]| -> (Vec<L>, Vec<BigInt>, BigInt) {
            let mut denom = BigInt::one();
            for (_, w) in side {
                denom = denom.lcm(w.denom());
            }
            let labels: Vec<L> = side.iter().map(|(l, _)| l.clone()).collect();
            let ints: Vec<BigInt> = side
                .iter()
                .map(|(_, w)| (w * Rat::from_integer(denom.clone())).to_integer())
                .collect();
            let total: BigInt = ints.iter().sum();
            (labels, ints, total)
        };
        let (labels_a, a_int, a_total) = clear(&a);
        let (labels_b, b_int, b_total) = clear(&b);
        let mut edges = BTreeSet::new();
        for (i, la) in labels_a.iter().enumerate() {
            for (j, lb) in labels_b.iter().enumerate() {
                if incompatible(la, lb) {
                    edges.insert((i, j));
                }
            }
        }
        Ok(IncompatibilityGraph {
            labels_a,
            labels_b,
            a_int,
            b_int,
            a_total,
            b_total,
            edges,
            normalized_a: std::sync::OnceLock::new(),
            normalized_b: std::sync::OnceLock::new(),
        })
    }

    /// Build from (unsquared) lengths; weights are the squared lengths.
    pub fn from_lengths(
        a: Vec<(L, Rat)>,
        b: Vec<(L, Rat)>,
        incompatible: impl Fn(&L, &L) -> bool,
    ) -> Result<Self> {
        let sq = |(l, w): (L, Rat)| {
            let w2 = w.clone() * w;
            (l, w2)
        };
        Self::from_squared(
            a.into_iter().map(sq).collect(),
            b.into_iter().map(sq).collect(),
            incompatible,
        )
    }

    /// A-side vertices with their normalized weights (ξ̃ sums to 1).
    pub fn a_side(&self) -> &[(L, Rat)] {
        self.normalized_a.get_or_init(|| {
            self.labels_a
                .iter()
                .zip(&self.a_int)
                .map(|(l, w)| (l.clone(), Rat::new(w.clone(), self.a_total.clone())))
                .collect()
        })
    }
    /// B-side vertices with their normalized weights (τ̃ sums to 1).
    pub fn b_side(&self) -> &[(L, Rat)] {
        self.normalized_b.get_or_init(|| {
            self.labels_b
                .iter()
                .zip(&self.b_int)
                .map(|(l, w)| (l.clone(), Rat::new(w.clone(), self.b_total.clone())))
                .collect()
        })
    }
    pub fn labels_a(&self) -> &[L] {
        &self.labels_a
    }
    pub fn labels_b(&self) -> &[L] {
        &self.labels_b
    }
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    fn a_len(&self) -> usize {
        self.labels_a.len()
    }
    fn b_len(&self) -> usize {
        self.labels_b.len()
    }

    /// Integer max flow: capacities are the weights put over the common
    /// denominator a_total·b_total, so a flow of value `scale` is a
    /// normalized flow of value 1.
    fn int_max_flow(&self, reverse_order: bool) -> IntFlow {
        let na = self.a_len();
        let nb = self.b_len();
        let n = 2 + na + nb;
        let s = 0usize;
        let t = 1usize;
        let a_of = |i: usize| 2 + i;
        let b_of = |j: usize| 2 + na + j;

        let scale = &self.a_total * &self.b_total;
        // Middle arcs get a sentinel capacity strictly above the total
        // weight, so they can never be saturated by a cut.
        let sentinel: BigInt = BigInt::from(3u8) * &scale;

        struct Edge {
            to: usize,
            cap: BigInt,
            flow: BigInt,
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut edges_store: Vec<Edge> = Vec::new();
        let add_edge = |adj: &mut Vec<Vec<usize>>,
                        edges_store: &mut Vec<Edge>,
                        u: usize,
                        v: usize,
                        cap: BigInt| {
            adj[u].push(edges_store.len());
            edges_store.push(Edge {
                to: v,
                cap,
                flow: BigInt::zero(),
            });
            adj[v].push(edges_store.len());
            edges_store.push(Edge {
                to: u,
                cap: BigInt::zero(),
                flow: BigInt::zero(),
            });
        };

        for (i, w) in self.a_int.iter().enumerate() {
            add_edge(&mut adj, &mut edges_store, s, a_of(i), w * &self.b_total);
        }
        for (j, w) in self.b_int.iter().enumerate() {
            add_edge(&mut adj, &mut edges_store, b_of(j), t, w * &self.a_total);
        }
        let mut middle_eid = BTreeMap::new();
        for &(i, j) in &self.edges {
            middle_eid.insert((i, j), edges_store.len());
            add_edge(&mut adj, &mut edges_store, a_of(i), b_of(j), sentinel.clone());
        }
        if reverse_order {
            for list in adj.iter_mut() {
                list.reverse();
            }
        }

        let mut value = BigInt::zero();
        loop {
            // BFS for a shortest augmenting path.
            let mut prev: Vec<Option<usize>> = vec![None; n]; // edge id into vertex
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::new();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &eid in &adj[u] {
                    let e = &edges_store[eid];
                    if !seen[e.to] && e.flow < e.cap {
                        seen[e.to] = true;
                        prev[e.to] = Some(eid);
                        queue.push_back(e.to);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            // Bottleneck.
            let mut bottleneck: Option<BigInt> = None;
            let mut v = t;
            while v != s {
                let eid = prev[v].unwrap();
                let e = &edges_store[eid];
                let r = &e.cap - &e.flow;
                bottleneck = Some(match bottleneck {
                    None => r,
                    Some(b) if r < b => r,
                    Some(b) => b,
                });
                v = edges_store[eid ^ 1].to;
            }
            let aug = bottleneck.unwrap();
            let mut v = t;
            while v != s {
                let eid = prev[v].unwrap();
                edges_store[eid].flow += &aug;
                edges_store[eid ^ 1].flow -= &aug;
                v = edges_store[eid ^ 1].to;
            }
            value += aug;
        }

        IntFlow {
            value,
            source_arcs: (0..na).map(|i| edges_store[2 * i].flow.clone()).collect(),
            sink_arcs: (0..nb)
                .map(|j| edges_store[2 * (na + j)].flow.clone())
                .collect(),
            middle: middle_eid
                .iter()
                .map(|(&k, &eid)| (k, edges_store[eid].flow.clone()))
                .collect(),
            scale,
        }
    }

    /// Max flow via shortest augmenting paths, in normalized units.
    /// `reverse_order` flips the adjacency scan, which can produce a
    /// different (still maximum) flow; the residual quotient must not
    /// depend on the choice.
    pub fn max_flow(&self, reverse_order: bool) -> Flow {
        let int = self.int_max_flow(reverse_order);
        let unscale = |f: &BigInt| Rat::new(f.clone(), int.scale.clone());
        Flow {
            value: unscale(&int.value),
            source_arcs: int.source_arcs.iter().map(&unscale).collect(),
            sink_arcs: int.sink_arcs.iter().map(&unscale).collect(),
            middle: int.middle.iter().map(|(&k, f)| (k, unscale(f))).collect(),
        }
    }

    /// No-shortcut test and certifying cut in one integer pass: `None`
    /// when every cover weighs at least 1, otherwise the canonical min
    /// cut (residual reachability from the source).
    pub(crate) fn p3_split(&self) -> Option<CutPartition> {
        let int = self.int_max_flow(false);
        if int.value == int.scale {
            return None;
        }
        // Residual reachability with integer saturation checks.
        let mut reach_a: BTreeSet<usize> = BTreeSet::new();
        let mut reach_b: BTreeSet<usize> = BTreeSet::new();
        let mut queue: VecDeque<(bool, usize)> = VecDeque::new();
        for (i, f) in int.source_arcs.iter().enumerate() {
            if *f < &self.a_int[i] * &self.b_total {
                reach_a.insert(i);
                queue.push_back((true, i));
            }
        }
        while let Some((is_a, v)) = queue.pop_front() {
            if is_a {
                for &(i, j) in &self.edges {
                    if i == v && !reach_b.contains(&j) {
                        reach_b.insert(j);
                        queue.push_back((false, j));
                    }
                }
            } else {
                for &(i, j) in &self.edges {
                    if j == v
                        && !reach_a.contains(&i)
                        && int.middle.get(&(i, j)).map(|f| f.is_positive()) == Some(true)
                    {
                        reach_a.insert(i);
                        queue.push_back((true, i));
                    }
                }
            }
        }
        let hbar_a: BTreeSet<usize> = (0..self.a_len()).filter(|i| !reach_a.contains(i)).collect();
        let hbar_b: BTreeSet<usize> = (0..self.b_len()).filter(|j| !reach_b.contains(j)).collect();
        Some(CutPartition {
            h_a: reach_a,
            h_b: reach_b,
            hbar_a,
            hbar_b,
        })
    }

    /// Min-weight vertex cover: weight equals the max-flow value; the cover
    /// is read off the canonical min cut (residual reachability from the
    /// source in the flow network).
    pub fn min_weight_cover(&self) -> (Rat, Cover<L>, Flow) {
        let flow = self.max_flow(false);
        let reach = self.network_reachable_from_source(&flow);
        let a_vertices: BTreeSet<usize> =
            (0..self.a_len()).filter(|i| !reach.0.contains(i)).collect();
        let b_vertices: BTreeSet<usize> =
            (0..self.b_len()).filter(|j| reach.1.contains(j)).collect();
        let cover = Cover {
            weight: flow.value.clone(),
            a_labels: a_vertices
                .iter()
                .map(|&i| self.labels_a[i].clone())
                .collect(),
            b_labels: b_vertices
                .iter()
                .map(|&j| self.labels_b[j].clone())
                .collect(),
            a_vertices,
            b_vertices,
        };
        (flow.value.clone(), cover, flow)
    }

    /// Property (P3): every vertex cover weighs at least 1.
    pub fn satisfies_p3(&self) -> bool {
        let int = self.int_max_flow(false);
        int.value == int.scale
    }

    /// Vertices reachable from the source in the residual network of the
    /// given flow (terminals excluded from the returned sets).
    fn network_reachable_from_source(&self, flow: &Flow) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let mut reach_a = BTreeSet::new();
        let mut reach_b = BTreeSet::new();
        let mut queue: VecDeque<(bool, usize)> = VecDeque::new();
        for i in 0..self.a_len() {
            if flow.source_arcs[i] < self.a_side()[i].1 {
                reach_a.insert(i);
                queue.push_back((true, i));
            }
        }
        while let Some((is_a, v)) = queue.pop_front() {
            if is_a {
                for &(i, j) in &self.edges {
                    // middle arcs are never saturated (sentinel capacity)
                    if i == v && !reach_b.contains(&j) {
                        reach_b.insert(j);
                        queue.push_back((false, j));
                    }
                }
            } else {
                for &(i, j) in &self.edges {
                    if j == v
                        && !reach_a.contains(&i)
                        && flow.middle.get(&(i, j)).map(|f| f.is_positive()) == Some(true)
                    {
                        reach_a.insert(i);
                        queue.push_back((true, i));
                    }
                }
            }
        }
        (reach_a, reach_b)
    }

    /// A nontrivial source/sink cut, if one exists.
    ///
    /// For a non-maximal value (< 1) this is the canonical min cut given by
    /// residual reachability from the source.  For value exactly 1 the
    /// reachable set is trivial, so the smallest nontrivial successor-closed
    /// set of the contracted residual quotient is returned instead; `None`
    /// when the quotient has a single non-terminal group.
    pub fn min_cut_partition(&self, flow: &Flow) -> Option<CutPartition> {
        if flow.value < Rat::one() {
            let (reach_a, reach_b) = self.network_reachable_from_source(flow);
            let hbar_a: BTreeSet<usize> =
                (0..self.a_len()).filter(|i| !reach_a.contains(i)).collect();
            let hbar_b: BTreeSet<usize> =
                (0..self.b_len()).filter(|j| !reach_b.contains(j)).collect();
            debug_assert!(!reach_a.is_empty() || !reach_b.is_empty());
            return Some(CutPartition {
                h_a: reach_a,
                h_b: reach_b,
                hbar_a,
                hbar_b,
            });
        }
        let dag = self.residual_dag_from(flow);
        if dag.groups.len() < 2 {
            return None;
        }
        // First group (least vertex) with no successors among non-terminals.
        let with_succ: BTreeSet<usize> = dag.edges.iter().map(|&(g, _)| g).collect();
        let g = (0..dag.groups.len()).find(|g| !with_succ.contains(g))?;
        let (ga, gb) = &dag.groups[g];
        let h_a = ga.clone();
        let h_b = gb.clone();
        let hbar_a: BTreeSet<usize> = (0..self.a_len()).filter(|i| !h_a.contains(i)).collect();
        let hbar_b: BTreeSet<usize> = (0..self.b_len()).filter(|j| !h_b.contains(j)).collect();
        Some(CutPartition {
            h_a,
            h_b,
            hbar_a,
            hbar_b,
        })
    }

    /// Contract the strongly connected components of the residual graph of
    /// a value-1 maximum flow.
    pub fn residual_dag(&self, flow: &Flow) -> Result<ResidualDag> {
        if flow.value != Rat::one() {
            return Err(Error::FlowNotMaximum);
        }
        Ok(self.residual_dag_from(flow))
    }

    fn residual_dag_from(&self, flow: &Flow) -> ResidualDag {
        let na = self.a_len();
        let nb = self.b_len();
        // Vertices: a-side 0..na, b-side na..na+nb.  Terminals are omitted:
        // with a value-1 flow the source has no outgoing residual arcs and
        // the sink no incoming ones, so neither can join a cycle.
        let n = na + nb;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            adj[i].push(na + j); // forward, never saturated
            if flow.middle.get(&(i, j)).map(|f| f.is_positive()) == Some(true) {
                adj[na + j].push(i); // reverse arc of a positive flow
            }
        }
        let scc = kosaraju_scc(n, &adj);
        let mut comp_of = vec![0usize; n];
        for (c, members) in scc.iter().enumerate() {
            for &v in members {
                comp_of[v] = c;
            }
        }
        // Sort groups by least vertex for a canonical presentation.
        let mut order: Vec<usize> = (0..scc.len()).collect();
        order.sort_by_key(|&c| *scc[c].iter().min().unwrap());
        let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let groups: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = order
            .iter()
            .map(|&c| {
                let a: BTreeSet<usize> = scc[c].iter().filter(|&&v| v < na).copied().collect();
                let b: BTreeSet<usize> = scc[c]
                    .iter()
                    .filter(|&&v| v >= na)
                    .map(|&v| v - na)
                    .collect();
                (a, b)
            })
            .collect();
        let mut edges = BTreeSet::new();
        for &(i, j) in &self.edges {
            let (g, h) = (rank[&comp_of[i]], rank[&comp_of[na + j]]);
            if g != h {
                // A zero-flow incompatibility arc across groups: the source
                // group's pair must precede the target group's pair.
                edges.insert((g, h));
            }
        }
        ResidualDag { groups, edges }
    }

    /// All equal-ratio refinements of the pair: ordered partitions of the
    /// residual quotient's groups into contiguous blocks of a linear
    /// extension, mapped back to (A', B') pairs.
    pub fn enumerate_refinements(
        &self,
        flow: &Flow,
        max_count: usize,
    ) -> Result<Vec<Refinement<L>>> {
        let dag = self.residual_dag(flow)?;
        let m = dag.groups.len();
        let mut preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
        for &(g, h) in &dag.edges {
            preds[h].insert(g);
        }
        let mut results: BTreeSet<Vec<(BTreeSet<usize>, BTreeSet<usize>)>> = BTreeSet::new();
        let mut order = Vec::with_capacity(m);
        let mut placed = vec![false; m];
        enumerate_orders(
            &preds,
            &mut placed,
            &mut order,
            &dag,
            &mut results,
            max_count,
        )?;
        let mut out: Vec<Refinement<L>> = results
            .into_iter()
            .map(|blocks| {
                blocks
                    .into_iter()
                    .map(|(a, b)| {
                        (
                            a.iter().map(|&i| self.labels_a[i].clone()).collect(),
                            b.iter().map(|&j| self.labels_b[j].clone()).collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

fn enumerate_orders(
    preds: &[BTreeSet<usize>],
    placed: &mut Vec<bool>,
    order: &mut Vec<usize>,
    dag: &ResidualDag,
    results: &mut BTreeSet<Vec<(BTreeSet<usize>, BTreeSet<usize>)>>,
    max_count: usize,
) -> Result<()> {
    let m = preds.len();
    if order.len() == m {
        // Every contiguous composition of this linear extension is a
        // refinement.
        for mask in 0..(1u64 << (m.saturating_sub(1))) {
            let mut blocks: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = Vec::new();
            let mut cur_a = BTreeSet::new();
            let mut cur_b = BTreeSet::new();
            for (pos, &g) in order.iter().enumerate() {
                cur_a.extend(dag.groups[g].0.iter().copied());
                cur_b.extend(dag.groups[g].1.iter().copied());
                let boundary = pos + 1 == m || mask & (1 << pos) != 0;
                if boundary {
                    blocks.push((
                        std::mem::take(&mut cur_a),
                        std::mem::take(&mut cur_b),
                    ));
                }
            }
            results.insert(blocks);
            if results.len() > max_count {
                return Err(Error::CountExceeded(max_count));
            }
        }
        return Ok(());
    }
    for g in 0..m {
        if !placed[g] && preds[g].iter().all(|&p| placed[p]) {
            placed[g] = true;
            order.push(g);
            enumerate_orders(preds, placed, order, dag, results, max_count)?;
            order.pop();
            placed[g] = false;
        }
    }
    Ok(())
}

fn kosaraju_scc(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            radj[v].push(u);
        }
    }
    let mut visited = vec![false; n];
    let mut finish = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] {
            continue;
        }
        // Iterative DFS recording finish order.
        let mut stack = vec![(start, 0usize)];
        visited[start] = true;
        while let Some(&mut (u, ref mut idx)) = stack.last_mut() {
            if *idx < adj[u].len() {
                let v = adj[u][*idx];
                *idx += 1;
                if !visited[v] {
                    visited[v] = true;
                    stack.push((v, 0));
                }
            } else {
                finish.push(u);
                stack.pop();
            }
        }
    }
    let mut comp = Vec::new();
    let mut assigned = vec![false; n];
    for &start in finish.iter().rev() {
        if assigned[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut stack = vec![start];
        assigned[start] = true;
        while let Some(u) = stack.pop() {
            members.push(u);
            for &v in &radj[u] {
                if !assigned[v] {
                    assigned[v] = true;
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        comp.push(members);
    }
    comp
}
