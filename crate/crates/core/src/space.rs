//! Orthant spaces: axes plus a pairwise compatibility relation.
//!
//! The orthants of the space are the cliques of the scaffold graph; the
//! space is globally NPC exactly when the scaffold complex is flag, which
//! holds by construction when the complex is the clique complex of the
//! graph.  Tree space is the instance whose axes are splits.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::split::{all_splits, splits_compatible, Split};

/// An axis of an orthant space: a split in tree-space mode, an opaque name
/// in scaffold mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Split(Split),
    Named(String),
}

impl Axis {
    pub fn named(s: impl Into<String>) -> Axis {
        Axis::Named(s.into())
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Split(s) => write!(f, "{s}"),
            Axis::Named(s) => write!(f, "{s}"),
        }
    }
}

/// Explicit axes plus a symmetric irreflexive compatibility relation.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaffoldGraph {
    axes: Vec<Axis>,
    index: BTreeMap<Axis, usize>,
    adj: Vec<Vec<bool>>,
}

impl ScaffoldGraph {
    pub fn new(axes: Vec<Axis>, compat_pairs: &[(usize, usize)]) -> Result<ScaffoldGraph> {
        let mut index = BTreeMap::new();
        for (i, a) in axes.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate axis {a}")));
            }
        }
        let m = axes.len();
        let mut adj = vec![vec![false; m]; m];
        for &(i, j) in compat_pairs {
            if i >= m || j >= m {
                return Err(Error::UnknownAxis(format!("edge index {}", i.max(j))));
            }
            if i == j {
                return Err(Error::InvalidInput(format!(
                    "axis {} compatible with itself",
                    axes[i]
                )));
            }
            adj[i][j] = true;
            adj[j][i] = true;
        }
        Ok(ScaffoldGraph { axes, index, adj })
    }

    pub fn from_names(names: &[&str], edges: &[(&str, &str)]) -> Result<ScaffoldGraph> {
        let axes: Vec<Axis> = names.iter().map(|n| Axis::named(*n)).collect();
        let index: BTreeMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let i = *index.get(a).ok_or_else(|| Error::UnknownAxis((*a).into()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownAxis((*b).into()))?;
            pairs.push((i, j));
        }
        ScaffoldGraph::new(axes, &pairs)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis_index(&self, a: &Axis) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn compatible_idx(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i][j]
    }

    /// Maximal cliques of the compatibility graph.
    pub fn maximal_cliques(&self) -> Vec<BTreeSet<usize>> {
        maximal_cliques(self.axes.len(), &|i, j| self.compatible_idx(i, j))
    }
}

/// The scaffold graph of tree space: all canonical splits of {0..n} with
/// split compatibility.
pub fn tree_scaffold(n: u32) -> ScaffoldGraph {
    assert!(n >= 2, "tree space needs n >= 2");
    let splits = all_splits(n);
    let axes: Vec<Axis> = splits.iter().cloned().map(Axis::Split).collect();
    let mut pairs = Vec::new();
    for i in 0..splits.len() {
        for j in (i + 1)..splits.len() {
            if splits_compatible(&splits[i], &splits[j]).unwrap() {
                pairs.push((i, j));
            }
        }
    }
    ScaffoldGraph::new(axes, &pairs).expect("split axes are unique")
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// Tree space on leaves {0..n}; axes are splits, enumerated lazily.
    Tree { n: u32 },
    /// A general orthant space given by an explicit scaffold graph.
    Scaffold(ScaffoldGraph),
}

/// An orthant space.  `signed` opts in to negative coordinate values.
#[derive(Debug, Clone, PartialEq)]
pub struct Space {
    pub kind: SpaceKind,
    pub signed: bool,
}

impl Space {
    pub fn tree(n: u32) -> Arc<Space> {
        assert!(n >= 2, "tree space needs n >= 2");
        Arc::new(Space {
            kind: SpaceKind::Tree { n },
            signed: false,
        })
    }

    pub fn scaffold(graph: ScaffoldGraph, signed: bool) -> Arc<Space> {
        Arc::new(Space {
            kind: SpaceKind::Scaffold(graph),
            signed,
        })
    }

    pub fn contains_axis(&self, a: &Axis) -> bool {
        match (&self.kind, a) {
            (SpaceKind::Tree { n }, Axis::Split(s)) => s.leaf_count() == *n,
            (SpaceKind::Scaffold(g), _) => g.axis_index(a).is_some(),
            _ => false,
        }
    }

    pub fn check_axis(&self, a: &Axis) -> Result<()> {
        if self.contains_axis(a) {
            Ok(())
        } else {
            Err(Error::UnknownAxis(a.to_string()))
        }
    }

    /// Pairwise compatibility; never true on equal axes.
    pub fn compatible(&self, a: &Axis, b: &Axis) -> Result<bool> {
        self.check_axis(a)?;
        self.check_axis(b)?;
        match (&self.kind, a, b) {
            (SpaceKind::Tree { .. }, Axis::Split(sa), Axis::Split(sb)) => splits_compatible(sa, sb),
            (SpaceKind::Scaffold(g), _, _) => {
                let i = g.axis_index(a).unwrap();
                let j = g.axis_index(b).unwrap();
                Ok(g.compatible_idx(i, j))
            }
            _ => unreachable!("check_axis filtered mixed axis kinds"),
        }
    }

    pub fn is_clique(&self, axes: &BTreeSet<Axis>) -> Result<bool> {
        let v: Vec<&Axis> = axes.iter().collect();
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                if !self.compatible(v[i], v[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether a clique is a maximal orthant of the space.
    ///
    /// In tree space the maximal orthants are the binary-tree orthants with
    /// all pendant axes, of dimension exactly 2n-1.
    pub fn is_maximal_clique(&self, axes: &BTreeSet<Axis>) -> Result<bool> {
        if !self.is_clique(axes)? {
            return Ok(false);
        }
        match &self.kind {
            SpaceKind::Tree { n } => Ok(axes.len() as u32 == 2 * n - 1),
            SpaceKind::Scaffold(g) => {
                let members: BTreeSet<usize> = axes
                    .iter()
                    .map(|a| g.axis_index(a).expect("validated above"))
                    .collect();
                for cand in 0..g.axes().len() {
                    if members.contains(&cand) {
                        continue;
                    }
                    if members.iter().all(|&m| g.compatible_idx(cand, m)) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Flag condition for a complex given by its (maximal) faces: every clique
/// of the pairwise-compatibility graph induced by the faces must lie in a
/// face.
pub fn is_flag(axes: &[Axis], faces: &[BTreeSet<usize>]) -> Result<bool> {
    let m = axes.len();
    for f in faces {
        if let Some(&bad) = f.iter().find(|&&i| i >= m) {
            return Err(Error::UnknownAxis(format!("face index {bad}")));
        }
    }
    let mut adj = vec![vec![false; m]; m];
    for f in faces {
        let v: Vec<usize> = f.iter().copied().collect();
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                adj[v[i]][v[j]] = true;
                adj[v[j]][v[i]] = true;
            }
        }
    }
    let cliques = maximal_cliques(m, &|i, j| i != j && adj[i][j]);
    for clique in cliques {
        if !faces.iter().any(|f| clique.is_subset(f)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bron–Kerbosch with pivoting.  Isolated vertices count as singleton
/// cliques.
pub fn maximal_cliques(n: usize, compatible: &dyn Fn(usize, usize) -> bool) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    let mut r = BTreeSet::new();
    let p: BTreeSet<usize> = (0..n).collect();
    let x = BTreeSet::new();
    bron_kerbosch(&mut r, p, x, compatible, &mut out);
    out.sort();
    out
}

fn bron_kerbosch(
    r: &mut BTreeSet<usize>,
    p: BTreeSet<usize>,
    x: BTreeSet<usize>,
    compatible: &dyn Fn(usize, usize) -> bool,
    out: &mut Vec<BTreeSet<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| compatible(u, v)).count())
        .expect("nonempty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !compatible(pivot, v)).collect();
    let mut p = p;
    let mut x = x;
    for v in candidates {
        r.insert(v);
        let p2: BTreeSet<usize> = p.iter().copied().filter(|&u| compatible(v, u)).collect();
        let x2: BTreeSet<usize> = x.iter().copied().filter(|&u| compatible(v, u)).collect();
        bron_kerbosch(r, p2, x2, compatible, out);
        r.remove(&v);
        p.remove(&v);
        x.insert(v);
    }
}

/// Maximal cliques containing a given clique, restricted to a universe of
/// axis indices.
pub fn maximal_cliques_containing(
    universe: &[usize],
    seed: &BTreeSet<usize>,
    compatible: &dyn Fn(usize, usize) -> bool,
) -> Vec<BTreeSet<usize>> {
    let candidates: Vec<usize> = universe
        .iter()
        .copied()
        .filter(|u| !seed.contains(u) && seed.iter().all(|&s| compatible(*u, s)))
        .collect();
    let local = maximal_cliques(candidates.len(), &|i, j| {
        compatible(candidates[i], candidates[j])
    });
    let mut out: Vec<BTreeSet<usize>> = local
        .into_iter()
        .map(|c| {
            let mut full: BTreeSet<usize> = seed.clone();
            full.extend(c.into_iter().map(|i| candidates[i]));
            full
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
