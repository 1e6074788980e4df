//! Newick parsing and deterministic writing.
//!
//! Grammar: `tree := subtree ";"`, `subtree := leaf | "(" subtree (","
//! subtree)+ ")" [label] [":" length]`, `leaf := label [":" length]`,
//! labels alphanumeric/underscore, lengths decimal literals.  Leaf labels
//! map to indices by lexicographic order (the smallest becomes label 0
//! unless overridden); internal edges become canonical splits and
//! zero-length edges are dropped.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use treespace::scalar::format_sig;
use treespace::space::{Axis, Space};
use treespace::split::Split;
use treespace::{GenericPoint, Point};

#[derive(Debug, Error, PartialEq)]
pub enum NewickError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("duplicate leaf label {0}")]
    DuplicateLeaf(String),
    #[error("trees need at least 3 leaves, found {0}")]
    FewerThanThreeLeaves(usize),
    #[error("negative branch length {0}")]
    NegativeLength(f64),
    #[error("trees in one file must share a leaf set")]
    LeafSetMismatch,
    #[error("unknown root label {0}")]
    UnknownRootLabel(String),
    #[error("tree is malformed: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone)]
pub struct NewickDocument {
    pub space: Arc<Space>,
    /// index -> leaf label, with index 0 the designated anchor.
    pub labels: Vec<String>,
    pub trees: Vec<(Point, Option<String>)>,
}

#[derive(Debug, Clone)]
struct RawNode {
    children: Vec<RawNode>,
    label: Option<String>,
    length: Option<f64>,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text: text.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> NewickError {
        NewickError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), NewickError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected '{}', found {:?}",
                c as char,
                self.peek().map(|b| b as char)
            )))
        }
    }

    fn label(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        if self.pos == start {
            None
        } else {
            Some(String::from_utf8_lossy(&self.text[start..self.pos]).into_owned())
        }
    }

    fn length(&mut self) -> Result<Option<f64>, NewickError> {
        if self.peek() != Some(b':') {
            return Ok(None);
        }
        self.bump();
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || matches!(c, b'.' | b'-' | b'+' | b'e' | b'E'))
        {
            self.bump();
        }
        let s = String::from_utf8_lossy(&self.text[start..self.pos]).into_owned();
        s.parse::<f64>()
            .map(Some)
            .map_err(|_| self.error(format!("bad branch length {s:?}")))
    }

    fn subtree(&mut self) -> Result<RawNode, NewickError> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.bump();
            let mut children = vec![self.subtree()?];
            self.skip_ws();
            while self.peek() == Some(b',') {
                self.bump();
                children.push(self.subtree()?);
                self.skip_ws();
            }
            if children.len() < 2 {
                return Err(self.error("internal nodes need at least 2 children"));
            }
            self.expect(b')')?;
            let label = self.label();
            let length = self.length()?;
            Ok(RawNode {
                children,
                label,
                length,
            })
        } else {
            let Some(label) = self.label() else {
                return Err(self.error("expected a leaf label or '('"));
            };
            let length = self.length()?;
            Ok(RawNode {
                children: Vec::new(),
                label: Some(label),
                length,
            })
        }
    }

    fn document(&mut self) -> Result<Vec<RawNode>, NewickError> {
        let mut trees = Vec::new();
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
            let tree = self.subtree()?;
            self.skip_ws();
            self.expect(b';')?;
            trees.push(tree);
        }
        if trees.is_empty() {
            return Err(self.error("no trees in input"));
        }
        Ok(trees)
    }
}

fn collect_leaves(node: &RawNode, out: &mut Vec<String>) -> Result<(), NewickError> {
    if node.children.is_empty() {
        let label = node
            .label
            .clone()
            .ok_or_else(|| NewickError::Malformed("leaf without a label".into()))?;
        out.push(label);
    } else {
        for c in &node.children {
            collect_leaves(c, out)?;
        }
    }
    Ok(())
}

/// Parse one or more trees.  `root_label` overrides which leaf maps to
/// index 0; remaining labels keep lexicographic order.
pub fn parse_newick(text: &str, root_label: Option<&str>) -> Result<NewickDocument, NewickError> {
    let raw_trees = Parser::new(text).document()?;

    let mut leaves = Vec::new();
    collect_leaves(&raw_trees[0], &mut leaves)?;
    {
        let mut seen = BTreeSet::new();
        for l in &leaves {
            if !seen.insert(l.clone()) {
                return Err(NewickError::DuplicateLeaf(l.clone()));
            }
        }
    }
    if leaves.len() < 3 {
        return Err(NewickError::FewerThanThreeLeaves(leaves.len()));
    }
    let mut sorted = leaves.clone();
    sorted.sort();
    if let Some(root) = root_label {
        let idx = sorted
            .iter()
            .position(|l| l == root)
            .ok_or_else(|| NewickError::UnknownRootLabel(root.to_string()))?;
        let r = sorted.remove(idx);
        sorted.insert(0, r);
    }
    let labels = sorted;
    let index: BTreeMap<&str, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();
    let n = labels.len() as u32 - 1;
    let space = Space::tree(n);

    let mut trees = Vec::new();
    for (tree_idx, raw) in raw_trees.iter().enumerate() {
        let mut tree_leaves = Vec::new();
        collect_leaves(raw, &mut tree_leaves)?;
        let mut tree_sorted = tree_leaves.clone();
        tree_sorted.sort();
        {
            let mut expect = labels.clone();
            expect.sort();
            if tree_sorted != expect {
                return Err(NewickError::LeafSetMismatch);
            }
        }
        let mut coords: BTreeMap<Axis, f64> = BTreeMap::new();
        // The root node itself has no parent edge; its length is ignored.
        for child in &raw.children {
            accumulate_edges(child, &index, n, &mut coords)?;
        }
        let point = GenericPoint::new(space.clone(), coords)
            .map_err(|e| NewickError::Malformed(e.to_string()))?;
        trees.push((point, Some(format!("t{tree_idx}"))));
    }
    Ok(NewickDocument {
        space,
        labels,
        trees,
    })
}

fn accumulate_edges(
    node: &RawNode,
    index: &BTreeMap<&str, u32>,
    n: u32,
    coords: &mut BTreeMap<Axis, f64>,
) -> Result<BTreeSet<u32>, NewickError> {
    let cluster: BTreeSet<u32> = if node.children.is_empty() {
        let label = node.label.as_ref().expect("leaves are labeled");
        [index[label.as_str()]].into_iter().collect()
    } else {
        let mut cluster = BTreeSet::new();
        for c in &node.children {
            cluster.extend(accumulate_edges(c, index, n, coords)?);
        }
        cluster
    };
    if let Some(len) = node.length {
        if len < 0.0 {
            return Err(NewickError::NegativeLength(len));
        }
        if len > 0.0 {
            let split = Split::canonical(&cluster, n)
                .map_err(|e| NewickError::Malformed(e.to_string()))?;
            *coords.entry(Axis::Split(split)).or_insert(0.0) += len;
        }
    }
    Ok(cluster)
}

/// Deterministic writer: rooted at label 0's attachment node, children
/// ordered by smallest leaf index, lengths at 12 significant digits,
/// zero-length axes omitted.
#[cfg_attr(not(test), allow(dead_code))]
pub fn write_newick(doc: &NewickDocument) -> String {
    doc.trees
        .iter()
        .map(|(point, _)| write_tree(point, &doc.labels))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn write_tree(point: &Point, labels: &[String]) -> String {
    let n = labels.len() as u32 - 1;
    // Clusters keyed by their (label-0-free) side.
    let mut clusters: BTreeMap<BTreeSet<u32>, f64> = BTreeMap::new();
    for (axis, len) in point.coords() {
        let Axis::Split(split) = axis else {
            continue;
        };
        clusters.insert(split.side().clone(), *len);
    }
    let full: BTreeSet<u32> = (1..=n).collect();
    let root_pendant = clusters.get(&full).copied();

    // Children of a cluster: the maximal proper sub-clusters, plus any
    // member leaf not covered by them.
    let mut order: Vec<&BTreeSet<u32>> = clusters
        .keys()
        .filter(|c| c.len() >= 2 && **c != full)
        .collect();
    order.sort_by_key(|c| c.len());

    fn render(
        cluster: &BTreeSet<u32>,
        length: Option<f64>,
        internal: &[&BTreeSet<u32>],
        clusters: &BTreeMap<BTreeSet<u32>, f64>,
        labels: &[String],
    ) -> String {
        let mut children: Vec<&BTreeSet<u32>> = Vec::new();
        for cand in internal.iter().rev() {
            // maximal first
            if cand.is_subset(cluster)
                && cand.len() < cluster.len()
                && children.iter().all(|c| cand.intersection(c).next().is_none())
            {
                children.push(cand);
            }
        }
        let covered: BTreeSet<u32> = children.iter().flat_map(|c| c.iter().copied()).collect();
        let mut parts: Vec<(u32, String)> = Vec::new();
        for &leaf in cluster.difference(&covered) {
            let label = &labels[leaf as usize];
            let single: BTreeSet<u32> = [leaf].into_iter().collect();
            match clusters.get(&single) {
                Some(len) => parts.push((leaf, format!("{label}:{}", format_sig(*len, 12)))),
                None => parts.push((leaf, label.clone())),
            }
        }
        for child in children {
            let min = *child.iter().next().unwrap();
            parts.push((
                min,
                render(child, clusters.get(child).copied(), internal, clusters, labels),
            ));
        }
        parts.sort_by_key(|(min, _)| *min);
        let inner = parts
            .into_iter()
            .map(|(_, s)| s)
            .collect::<Vec<_>>()
            .join(",");
        match length {
            Some(len) => format!("({inner}):{}", format_sig(len, 12)),
            None => format!("({inner})"),
        }
    }

    // The root node is adjacent to leaf 0: children are leaf 0 itself and
    // the maximal clusters of {1..n}.
    let mut top_children: Vec<&BTreeSet<u32>> = Vec::new();
    for cand in order.iter().rev() {
        if top_children
            .iter()
            .all(|c| cand.intersection(c).next().is_none())
        {
            top_children.push(cand);
        }
    }
    let covered: BTreeSet<u32> = top_children.iter().flat_map(|c| c.iter().copied()).collect();
    let mut parts: Vec<(u32, String)> = Vec::new();
    let label0 = &labels[0];
    parts.push((
        0,
        match root_pendant {
            Some(len) => format!("{label0}:{}", format_sig(len, 12)),
            None => label0.clone(),
        },
    ));
    for leaf in full.difference(&covered) {
        let single: BTreeSet<u32> = [*leaf].into_iter().collect();
        let label = &labels[*leaf as usize];
        match clusters.get(&single) {
            Some(len) => parts.push((*leaf, format!("{label}:{}", format_sig(*len, 12)))),
            None => parts.push((*leaf, label.clone())),
        }
    }
    for child in top_children {
        let min = *child.iter().next().unwrap();
        parts.push((
            min,
            render(child, clusters.get(child).copied(), &order, &clusters, labels),
        ));
    }
    parts.sort_by_key(|(min, _)| *min);
    let inner = parts
        .into_iter()
        .map(|(_, s)| s)
        .collect::<Vec<_>>()
        .join(",");
    format!("({inner});")
}
