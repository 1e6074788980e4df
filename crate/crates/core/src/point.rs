//! Points of an orthant space: sparse coordinate vectors whose support is a
//! face (clique) of the scaffold complex.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;



use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Axis, Space};
use crate::Rat;

/// A point with coordinates in scalar type `S`.  Zero coordinates are not
/// stored; immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericPoint<S: Scalar> {
    space: Arc<Space>,
    coords: BTreeMap<Axis, S>,
}

impl<S: Scalar> GenericPoint<S> {
    /// Validates axes, sign (unsigned spaces reject negatives), and that the
    /// support is a clique.
    pub fn new(space: Arc<Space>, coords: BTreeMap<Axis, S>) -> Result<Self> {
        let coords: BTreeMap<Axis, S> = coords
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        for (a, v) in &coords {
            space.check_axis(a)?;
            if !space.signed && v.is_negative_value() {
                return Err(Error::NegativeLength(a.to_string()));
            }
        }
        let support: BTreeSet<Axis> = coords.keys().cloned().collect();
        let p = GenericPoint { space, coords };
        if !p.space.is_clique(&support)? {
            let pair = first_incompatible_pair(&p.space, &support)?;
            return Err(Error::NotAFace(pair));
        }
        Ok(p)
    }

    pub fn origin(space: Arc<Space>) -> Self {
        GenericPoint {
            space,
            coords: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn coords(&self) -> &BTreeMap<Axis, S> {
        &self.coords
    }

    pub fn get(&self, a: &Axis) -> Option<&S> {
        self.coords.get(a)
    }

    pub fn support(&self) -> BTreeSet<Axis> {
        self.coords.keys().cloned().collect()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    /// The face spanned by the support.  Errors with `NotAFace` if two
    /// supported axes are incompatible (possible only for points built
    /// through `new_unchecked`).
    pub fn orthant_of(&self) -> Result<BTreeSet<Axis>> {
        let support = self.support();
        if !self.space.is_clique(&support)? {
            let pair = first_incompatible_pair(&self.space, &support)?;
            return Err(Error::NotAFace(pair));
        }
        Ok(support)
    }

    /// Skips validation; intended for tests and internal hot paths that
    /// already hold a validated support.
    pub fn new_unchecked(space: Arc<Space>, coords: BTreeMap<Axis, S>) -> Self {
        let coords = coords.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        GenericPoint { space, coords }
    }

    pub fn to_f64_point(&self) -> GenericPoint<f64> {
        GenericPoint {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .map(|(a, v)| (a.clone(), v.to_f64()))
                .collect(),
        }
    }

    pub fn to_exact_point(&self) -> GenericPoint<Rat> {
        GenericPoint {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .map(|(a, v)| (a.clone(), v.to_rat()))
                .collect(),
        }
    }

    /// Euclidean norm of the coordinate vector (the cone-path distance to
    /// the origin).
    pub fn norm(&self) -> f64 {
        self.coords
            .values()
            .map(|v| {
                let x = v.to_f64();
                x * x
            })
            .sum::<f64>()
            .sqrt()
    }
}

fn first_incompatible_pair(space: &Space, support: &BTreeSet<Axis>) -> Result<String> {
    let v: Vec<&Axis> = support.iter().collect();
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if !space.compatible(v[i], v[j])? {
                return Ok(format!("{} and {}", v[i], v[j]));
            }
        }
    }
    Ok("unknown pair".into())
}

/// A point in squared coordinates (coordinatewise image of the squaring
/// map).  Wrapped so squared and unsquared points cannot be mixed up.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredPoint<S: Scalar>(pub GenericPoint<S>);

impl<S: Scalar> SquaredPoint<S> {
    pub fn space(&self) -> &Arc<Space> {
        self.0.space()
    }
    pub fn coords(&self) -> &BTreeMap<Axis, S> {
        self.0.coords()
    }
    pub fn support(&self) -> BTreeSet<Axis> {
        self.0.support()
    }
    pub fn to_exact(&self) -> SquaredPoint<Rat> {
        SquaredPoint(self.0.to_exact_point())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::ScaffoldGraph;

    /// The six-axis scaffold of the worked two-tree example: two triangles
    /// of mutually compatible axes plus the three cross-compatible pairs.
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

    fn pt(space: &Arc<Space>, coords: &[(&str, f64)]) -> Result<GenericPoint<f64>> {
        GenericPoint::new(
            space.clone(),
            coords
                .iter()
                .map(|(n, v)| (Axis::named(*n), *v))
                .collect(),
        )
    }

    #[test]
    fn orthant_of_examples() {
        let space = example_scaffold();
        let origin = GenericPoint::<f64>::origin(space.clone());
        assert!(origin.orthant_of().unwrap().is_empty());

        let p = pt(&space, &[("e1", 10.0), ("e2", 4.0), ("e3", 3.0)]).unwrap();
        let orthant = p.orthant_of().unwrap();
        assert_eq!(orthant.len(), 3);

        let bad = pt(&space, &[("e1", 1.0), ("e4", 1.0)]);
        assert!(matches!(bad, Err(Error::NotAFace(_))));
    }

    #[test]
    fn unsigned_space_rejects_negative_lengths() {
        let space = example_scaffold();
        let bad = pt(&space, &[("e1", -1.0)]);
        assert!(matches!(bad, Err(Error::NegativeLength(_))));
    }

    #[test]
    fn zero_coordinates_are_dropped() {
        let space = example_scaffold();
        let p = pt(&space, &[("e1", 1.0), ("e2", 0.0)]).unwrap();
        assert_eq!(p.support().len(), 1);
    }

    #[test]
    fn orthant_of_random_sparse_points_is_a_clique() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let space = example_scaffold();
        let names = ["e1", "e2", "e3", "e4", "e5", "e6"];
        let mut built = 0;
        while built < 50 {
            let mut coords: BTreeMap<Axis, f64> = BTreeMap::new();
            for n in names {
                if rng.gen_bool(0.4) {
                    coords.insert(Axis::named(n), rng.gen_range(0.1..2.0));
                }
            }
            if let Ok(p) = GenericPoint::new(space.clone(), coords) {
                let orthant = p.orthant_of().unwrap();
                assert!(space.is_clique(&orthant).unwrap());
                built += 1;
            }
        }
    }
}
