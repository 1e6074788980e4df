//! Line-oriented scaffold space files.
//!
//! ```text
//! axes: a b c
//! edge: a b
//! edge: b c
//! signed: true          # optional
//! face: a b             # optional: declare the complex's maximal faces
//! ```
//!
//! Without `face:` lines the complex is the clique complex of the edges
//! (flag by construction).  With them, `space check` can detect non-flag
//! complexes; the geometric commands reject those.

use std::collections::BTreeSet;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};

use treespace::space::{is_flag, Axis, ScaffoldGraph, Space};

#[derive(Debug, Clone)]
pub struct SpaceFile {
    pub axes: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub faces: Option<Vec<Vec<String>>>,
    pub signed: bool,
}

pub fn parse_spacefile(text: &str) -> Result<SpaceFile> {
    let mut axes: Option<Vec<String>> = None;
    let mut edges = Vec::new();
    let mut faces: Vec<Vec<String>> = Vec::new();
    let mut signed = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .with_context(|| format!("line {}: expected 'key: values'", lineno + 1))?;
        let tokens: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
        match key.trim() {
            "axes" => {
                if axes.is_some() {
                    bail!("line {}: duplicate axes header", lineno + 1);
                }
                axes = Some(tokens);
            }
            "edge" => {
                if tokens.len() != 2 {
                    bail!("line {}: edge needs exactly two axes", lineno + 1);
                }
                edges.push((tokens[0].clone(), tokens[1].clone()));
            }
            "face" => {
                if tokens.is_empty() {
                    bail!("line {}: empty face", lineno + 1);
                }
                faces.push(tokens);
            }
            "signed" => {
                signed = first_token_bool(&tokens, lineno + 1)?;
            }
            other => bail!("line {}: unknown key {other:?}", lineno + 1),
        }
    }
    let axes = axes.ok_or_else(|| anyhow!("missing 'axes:' header"))?;
    Ok(SpaceFile {
        axes,
        edges,
        faces: if faces.is_empty() { None } else { Some(faces) },
        signed,
    })
}

fn first_token_bool(tokens: &[String], lineno: usize) -> Result<bool> {
    match tokens {
        [t] if t == "true" => Ok(true),
        [t] if t == "false" => Ok(false),
        _ => bail!("line {lineno}: signed must be 'true' or 'false'"),
    }
}

impl SpaceFile {
    fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| anyhow!("unknown axis {name:?}"))
    }

    /// The compatibility graph: declared edges, plus pairs co-occurring in
    /// a declared face.
    pub fn graph(&self) -> Result<ScaffoldGraph> {
        let axes: Vec<Axis> = self.axes.iter().map(Axis::named).collect();
        let mut pairs = BTreeSet::new();
        for (a, b) in &self.edges {
            let (i, j) = (self.axis_index(a)?, self.axis_index(b)?);
            pairs.insert((i.min(j), i.max(j)));
        }
        if let Some(faces) = &self.faces {
            for face in faces {
                let idx: Vec<usize> = face
                    .iter()
                    .map(|n| self.axis_index(n))
                    .collect::<Result<_>>()?;
                for x in 0..idx.len() {
                    for y in (x + 1)..idx.len() {
                        let (i, j) = (idx[x].min(idx[y]), idx[x].max(idx[y]));
                        pairs.insert((i, j));
                    }
                }
            }
        }
        let pair_vec: Vec<(usize, usize)> = pairs.into_iter().collect();
        Ok(ScaffoldGraph::new(axes, &pair_vec)?)
    }

    /// Flag verdict of the declared complex (clique complexes are flag by
    /// construction).
    pub fn is_flag_complex(&self) -> Result<bool> {
        let Some(faces) = &self.faces else {
            return Ok(true);
        };
        let axes: Vec<Axis> = self.axes.iter().map(Axis::named).collect();
        let face_sets: Vec<BTreeSet<usize>> = faces
            .iter()
            .map(|f| f.iter().map(|n| self.axis_index(n)).collect())
            .collect::<Result<_>>()?;
        Ok(is_flag(&axes, &face_sets)?)
    }

    /// Build the orthant space; non-flag complexes are rejected.
    pub fn space(&self) -> Result<Arc<Space>> {
        if !self.is_flag_complex()? {
            bail!("the declared complex is not flag; the space is not globally NPC");
        }
        Ok(Space::scaffold(self.graph()?, self.signed))
    }
}
