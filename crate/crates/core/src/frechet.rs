//! Fréchet means and variance: the variance function and its gradients in
//! both coordinate systems, the inductive-mean stochastic approximation,
//! the orthant descent method in squared coordinates, and consensus-tree
//! comparators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::geodesic::{distance, gtp_support, GeodesicDescriptor, PairClass};
use crate::point::{GenericPoint, SquaredPoint};
use crate::space::{maximal_cliques_containing, Axis};
use crate::vistal::unsquare;

type Point = GenericPoint<f64>;

/// A finite sample with nonnegative weights summing to 1.
#[derive(Debug, Clone)]
pub struct WeightedSample {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl WeightedSample {
    pub fn uniform(points: Vec<Point>) -> Result<Self> {
        let r = points.len();
        if r == 0 {
            return Err(Error::InvalidInput("empty sample".into()));
        }
        let w = 1.0 / r as f64;
        Self::with_weights(points, vec![w; r])
    }

    pub fn with_weights(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty sample".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidInput(
                "weights and points have different lengths".into(),
            ));
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidInput("negative or non-finite weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, not 1"
            )));
        }
        for p in &points[1..] {
            if !p.same_space(&points[0]) {
                return Err(Error::PointsInDifferentSpaces);
            }
        }
        Ok(WeightedSample { points, weights })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Union of all sample supports: by the mean-composition property,
    /// every axis of the mean comes from here.
    pub fn axis_universe(&self) -> BTreeSet<Axis> {
        self.points.iter().flat_map(|p| p.support()).collect()
    }

    fn draw(&self, rng: &mut ChaCha12Rng) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return i;
            }
        }
        self.points.len() - 1
    }
}

/// Weighted sum of squared distances, scaled by the sample size so the
/// uniform case is the plain sum Σ d(X, T^ℓ)².
pub fn variance(x: &Point, sample: &WeightedSample) -> Result<f64> {
    let r = sample.len() as f64;
    let mut s = 0.0;
    for (p, w) in sample.points.iter().zip(&sample.weights) {
        let d = distance(x, p)?;
        s += r * w * d * d;
    }
    Ok(s)
}

fn check_interior_to_maximal(x: &Point) -> Result<BTreeSet<Axis>> {
    let orthant = x.orthant_of()?;
    if !x.space().is_maximal_clique(&orthant)? {
        return Err(Error::NotInteriorToMaximalOrthant(format!(
            "support of size {} is not a maximal orthant",
            orthant.len()
        )));
    }
    Ok(orthant)
}

/// Per-axis contribution of one geodesic to the variance gradient at its
/// source, in original coordinates: 2 x_e (1 + ‖B_i‖/‖x_{A_i}‖), with the
/// common-edge groups carrying the negative-norm convention.
fn gradient_contribution(
    desc: &GeodesicDescriptor,
    x: &Point,
    grad: &mut BTreeMap<Axis, f64>,
    scale: f64,
) {
    for pair in &desc.support.pairs {
        match pair.class {
            PairClass::NegativeCommon => {
                let xg: f64 = pair
                    .a
                    .iter()
                    .map(|e| {
                        let v = x.get(e).copied().unwrap_or(0.0);
                        v * v
                    })
                    .sum::<f64>()
                    .sqrt();
                let tg: f64 = pair
                    .b
                    .iter()
                    .map(|e| {
                        let (_, tv) = desc.common[e];
                        tv * tv
                    })
                    .sum::<f64>()
                    .sqrt();
                for e in &pair.a {
                    let xe = x.get(e).copied().unwrap_or(0.0);
                    *grad.entry(e.clone()).or_insert(0.0) += scale * 2.0 * xe * (1.0 - tg / xg);
                }
            }
            PairClass::ZeroRatio => {
                for e in &pair.a {
                    let xe = x.get(e).copied().unwrap_or(0.0);
                    *grad.entry(e.clone()).or_insert(0.0) += scale * 2.0 * xe;
                }
            }
            PairClass::Positive => {}
            PairClass::InfiniteRatio => {}
        }
    }
    for p in &desc.positive {
        let factor = 1.0 + p.b_norm / p.a_norm;
        for e in &p.a {
            let xe = x.get(e).copied().unwrap_or(0.0);
            *grad.entry(e.clone()).or_insert(0.0) += scale * 2.0 * xe * factor;
        }
    }
}

/// Gradient of the variance at a point interior to a maximal orthant.
pub fn variance_gradient(x: &Point, sample: &WeightedSample) -> Result<BTreeMap<Axis, f64>> {
    let orthant = check_interior_to_maximal(x)?;
    let r = sample.len() as f64;
    let mut grad: BTreeMap<Axis, f64> = orthant.iter().map(|a| (a.clone(), 0.0)).collect();
    for (p, w) in sample.points.iter().zip(&sample.weights) {
        let desc = gtp_support(x, p)?;
        gradient_contribution(&desc, x, &mut grad, r * w);
    }
    Ok(grad)
}

/// The variance in squared coordinates: S²(ξ) = S(√ξ).
pub fn squared_variance(xi: &SquaredPoint<f64>, sample: &WeightedSample) -> Result<f64> {
    let x = unsquare(xi)?;
    variance(&x, sample)
}

/// Gradient of S² at a squared point interior to a maximal orthant:
/// per sample 1 + δ·‖B_{i(e)}‖/√(ξ̄_{i(e)}), with δ = −1 on common-edge
/// groups.
pub fn squared_variance_gradient(
    xi: &SquaredPoint<f64>,
    sample: &WeightedSample,
) -> Result<BTreeMap<Axis, f64>> {
    let x = unsquare(xi)?;
    let orthant = check_interior_to_maximal(&x)?;
    squared_gradient_unchecked(&x, &orthant, sample)
}

/// Same formula without the maximal-orthant check; the caller guarantees
/// that every orthant axis is positive at `x`.
fn squared_gradient_unchecked(
    x: &Point,
    orthant: &BTreeSet<Axis>,
    sample: &WeightedSample,
) -> Result<BTreeMap<Axis, f64>> {
    let r = sample.len() as f64;
    let mut grad: BTreeMap<Axis, f64> = orthant.iter().map(|a| (a.clone(), 0.0)).collect();
    for (p, w) in sample.points.iter().zip(&sample.weights) {
        let scale = r * w;
        let desc = gtp_support(x, p)?;
        for pair in &desc.support.pairs {
            match pair.class {
                PairClass::NegativeCommon => {
                    let xi_bar: f64 = pair
                        .a
                        .iter()
                        .map(|e| {
                            let v = x.get(e).copied().unwrap_or(0.0);
                            v * v
                        })
                        .sum();
                    let tau_bar: f64 = pair
                        .b
                        .iter()
                        .map(|e| {
                            let (_, tv) = desc.common[e];
                            tv * tv
                        })
                        .sum();
                    let term = 1.0 - (tau_bar / xi_bar).sqrt();
                    for e in &pair.a {
                        *grad.entry(e.clone()).or_insert(0.0) += scale * term;
                    }
                }
                PairClass::ZeroRatio => {
                    for e in &pair.a {
                        *grad.entry(e.clone()).or_insert(0.0) += scale;
                    }
                }
                PairClass::Positive | PairClass::InfiniteRatio => {}
            }
        }
        for pp in &desc.positive {
            let term = 1.0 + pp.b_norm / pp.a_norm;
            for e in &pp.a {
                *grad.entry(e.clone()).or_insert(0.0) += scale * term;
            }
        }
    }
    Ok(grad)
}

/// Sequential inductive mean: μ_1 is the first point and μ_ℓ is the point
/// 1/ℓ of the way from μ_{ℓ−1} to the ℓ-th point.
pub fn inductive_mean(points: &[Point]) -> Result<Point> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("empty point list".into()));
    };
    let mut mu = first.clone();
    for (idx, p) in points.iter().enumerate().skip(1) {
        let step = 1.0 / (idx as f64 + 1.0);
        mu = gtp_support(&mu, p)?.point_at(step)?;
    }
    Ok(mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanMethod {
    Sturm,
    Descent,
}

#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub iteration: u64,
    pub point: Point,
    pub variance: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct MeanResult {
    pub mean: Point,
    pub variance: f64,
    pub iterations: u64,
    pub method: MeanMethod,
    pub trace: Option<Vec<TraceEntry>>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SturmParams {
    /// Minimum number of iterations before the window test applies.
    pub k_min: u64,
    /// Window size: the last `window` iterates must be pairwise close.
    pub window: usize,
    /// Pairwise distance tolerance for the window test.
    pub eps: f64,
    pub seed: u64,
    pub max_iter: u64,
    /// Record every iterate.
    pub trace: bool,
    /// Also compute the variance of each traced iterate (costly).
    pub trace_variance: bool,
}

impl Default for SturmParams {
    fn default() -> Self {
        SturmParams {
            k_min: 100_000,
            window: 10,
            eps: 1e-4,
            seed: 0,
            max_iter: 10_000_000,
            trace: false,
            trace_variance: false,
        }
    }
}

/// The inductive-mean stochastic approximation: draw sample points by
/// weight and step 1/(k+1) of the way toward each; stop once `k_min`
/// iterations have passed and the last `window` iterates are pairwise
/// within `eps`.  Reproducible for a fixed seed (ChaCha12 stream).
pub fn sturm_mean(sample: &WeightedSample, params: &SturmParams) -> Result<MeanResult> {
    if params.k_min < 1 || params.window < 2 || params.eps <= 0.0 || params.eps.is_nan() {
        return Err(Error::InvalidInput(
            "sturm parameters need k_min ≥ 1, window ≥ 2, eps > 0".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let mut mu = sample.points[sample.draw(&mut rng)].clone();
    let mut k: u64 = 1;
    let mut trace: Option<Vec<TraceEntry>> = params.trace.then(Vec::new);
    let push_trace = |k: u64, mu: &Point, trace: &mut Option<Vec<TraceEntry>>| -> Result<()> {
        if let Some(entries) = trace {
            let variance = if params.trace_variance {
                Some(variance(mu, sample)?)
            } else {
                None
            };
            entries.push(TraceEntry {
                iteration: k,
                point: mu.clone(),
                variance,
            });
        }
        Ok(())
    };
    push_trace(k, &mu, &mut trace)?;

    // Ring of the last `window` iterates with cached pairwise distances;
    // row i holds distances to the earlier ring entries.
    let mut ring: VecDeque<Point> = VecDeque::with_capacity(params.window);
    let mut rows: VecDeque<Vec<f64>> = VecDeque::with_capacity(params.window);
    ring.push_back(mu.clone());
    rows.push_back(Vec::new());

    loop {
        let window_ok = ring.len() == params.window
            && rows.iter().all(|row| row.iter().all(|d| *d <= params.eps));
        if k >= params.k_min && window_ok {
            break;
        }
        if k >= params.max_iter {
            return Err(Error::TimedOut(params.max_iter));
        }
        let t = &sample.points[sample.draw(&mut rng)];
        let desc = gtp_support(&mu, t)?;
        mu = desc.point_at(1.0 / (k as f64 + 1.0))?;
        k += 1;
        push_trace(k, &mu, &mut trace)?;
        if ring.len() == params.window {
            ring.pop_front();
            rows.pop_front();
            for row in rows.iter_mut() {
                if !row.is_empty() {
                    row.remove(0);
                }
            }
        }
        // Distances are only needed once the window can decide the stop;
        // skip the metric work during the burn-in phase.
        let near_decision = k + params.window as u64 >= params.k_min;
        let mut row = Vec::with_capacity(ring.len());
        if near_decision {
            for q in ring.iter() {
                row.push(distance(q, &mu)?);
            }
        }
        ring.push_back(mu.clone());
        rows.push_back(row);
    }

    let variance = variance(&mu, sample)?;
    Ok(MeanResult {
        mean: mu,
        variance,
        iterations: k,
        method: MeanMethod::Sturm,
        trace,
        seed: params.seed,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DescentOptions {
    pub seed: u64,
    /// Iterations of the stochastic warm start.
    pub warm_start_iters: u64,
    pub max_outer: usize,
    /// Gradient tolerance of the inner interior minimization.
    pub grad_tol: f64,
    pub inner_max_iters: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            seed: 0,
            warm_start_iters: 1000,
            max_outer: 100,
            grad_tol: 1e-8,
            inner_max_iters: 600,
        }
    }
}

/// Orthant descent in squared coordinates: from a stochastic warm start,
/// repeatedly search every maximal orthant containing the current point
/// (restricted to axes occurring in the sample) with a log-barrier
/// interior minimization, and move to the best strict improver.
pub fn descent_mean(sample: &WeightedSample, options: &DescentOptions) -> Result<MeanResult> {
    let space = sample.points[0].space().clone();
    let universe: Vec<Axis> = sample.axis_universe().into_iter().collect();
    let axis_idx: BTreeMap<&Axis, usize> =
        universe.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut compat = vec![vec![false; universe.len()]; universe.len()];
    for i in 0..universe.len() {
        for j in 0..universe.len() {
            if i != j {
                compat[i][j] = space.compatible(&universe[i], &universe[j])?;
            }
        }
    }

    let warm = if options.warm_start_iters >= 1 {
        sturm_mean(
            sample,
            &SturmParams {
                k_min: options.warm_start_iters,
                window: 2,
                eps: f64::INFINITY,
                seed: options.seed,
                max_iter: options.warm_start_iters + 2,
                trace: false,
                trace_variance: false,
            },
        )?
        .mean
    } else {
        sample.points[0].clone()
    };

    let snap_tol = 1e-18;
    let snap = |coords: BTreeMap<Axis, f64>| -> BTreeMap<Axis, f64> {
        let max = coords.values().fold(1.0f64, |m, v| m.max(v.abs()));
        coords
            .into_iter()
            .filter(|(_, v)| v.abs() > snap_tol * max)
            .collect()
    };

    let mut current: BTreeMap<Axis, f64> = snap(
        warm.coords()
            .iter()
            .map(|(a, v)| (a.clone(), v * v))
            .collect(),
    );
    let point_of = |coords: &BTreeMap<Axis, f64>| -> Point {
        GenericPoint::new_unchecked(
            space.clone(),
            coords
                .iter()
                .map(|(a, v)| (a.clone(), v.sqrt()))
                .collect(),
        )
    };
    let mut current_value = variance(&point_of(&current), sample)?;
    let mut outer_count = 0u64;
    let mut converged = false;

    for _ in 0..options.max_outer {
        outer_count += 1;
        let support_idx: BTreeSet<usize> = current
            .keys()
            .map(|a| {
                *axis_idx
                    .get(a)
                    .expect("descent iterates stay within sample axes")
            })
            .collect();
        let all: Vec<usize> = (0..universe.len()).collect();
        let orthants = maximal_cliques_containing(&all, &support_idx, &|i, j| compat[i][j]);

        let mut best: Option<(f64, BTreeMap<Axis, f64>)> = None;
        for orthant_idx in &orthants {
            let orthant: BTreeSet<Axis> =
                orthant_idx.iter().map(|&i| universe[i].clone()).collect();
            let u = inner_minimize(&orthant, &current, sample, options, &point_of)?;
            let u = snap(u);
            let value = variance(&point_of(&u), sample)?;
            if best.as_ref().map(|(v, _)| value < *v).unwrap_or(true) {
                best = Some((value, u));
            }
        }
        let Some((best_value, best_point)) = best else {
            converged = true;
            break;
        };
        let improvement = current_value - best_value;
        let moved = {
            let keys: BTreeSet<&Axis> = current.keys().chain(best_point.keys()).collect();
            keys.iter().any(|a| {
                let x = current.get(*a).copied().unwrap_or(0.0);
                let y = best_point.get(*a).copied().unwrap_or(0.0);
                (x - y).abs() > 1e-8
            })
        };
        if improvement > 1e-11 * (1.0 + current_value.abs()) && moved {
            current = best_point;
            current_value = best_value;
        } else {
            if best_value < current_value {
                current = best_point;
                current_value = best_value;
            }
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::MaxOuterIterationsExceeded(options.max_outer));
    }

    let mean = point_of(&current);
    Ok(MeanResult {
        variance: current_value,
        mean,
        iterations: outer_count,
        method: MeanMethod::Descent,
        trace: None,
        seed: options.seed,
    })
}

/// Log-barrier interior minimization of S² over one orthant.
fn inner_minimize(
    orthant: &BTreeSet<Axis>,
    start: &BTreeMap<Axis, f64>,
    sample: &WeightedSample,
    options: &DescentOptions,
    point_of: &dyn Fn(&BTreeMap<Axis, f64>) -> Point,
) -> Result<BTreeMap<Axis, f64>> {
    let scale: f64 = {
        let positive: Vec<f64> = start.values().copied().filter(|v| *v > 0.0).collect();
        if positive.is_empty() {
            1.0
        } else {
            positive.iter().sum::<f64>() / positive.len() as f64
        }
    };
    let floor = 1e-4 * scale.max(1e-12);
    let mut u: BTreeMap<Axis, f64> = orthant
        .iter()
        .map(|a| (a.clone(), start.get(a).copied().unwrap_or(0.0).max(floor)))
        .collect();

    let objective = |coords: &BTreeMap<Axis, f64>, mu: f64| -> Result<f64> {
        let s = variance(&point_of(coords), sample)?;
        let barrier: f64 = coords.values().map(|v| -v.ln()).sum();
        Ok(s + mu * barrier)
    };

    let value_scale = 1.0 + variance(&point_of(&u), sample)?.abs();
    let mut mu = 1e-2 * value_scale;
    let mu_min = 1e-9 * value_scale;
    let mut step = 1.0;
    while mu > mu_min {
        let stage_tol = options.grad_tol.max(1e-3 * mu);
        for _ in 0..options.inner_max_iters {
            let x = point_of(&u);
            let mut grad = squared_gradient_unchecked(&x, orthant, sample)?;
            for (a, g) in grad.iter_mut() {
                *g -= mu / u[a];
            }
            let gnorm = grad.values().fold(0.0f64, |m, g| m.max(g.abs()));
            if gnorm <= stage_tol {
                break;
            }
            let g2: f64 = grad.values().map(|g| g * g).sum();
            let f0 = objective(&u, mu)?;
            let mut t = step;
            let mut accepted = false;
            while t > 1e-18 {
                let mut trial = u.clone();
                let mut feasible = true;
                for (a, v) in trial.iter_mut() {
                    *v -= t * grad[a];
                    if *v <= 0.0 {
                        feasible = false;
                        break;
                    }
                }
                if feasible {
                    let f1 = objective(&trial, mu)?;
                    if f1 <= f0 - 1e-4 * t * g2 {
                        u = trial;
                        step = (t * 2.0).min(1e6);
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        mu *= 0.01;
    }
    // Boundary polish: the barrier cannot reach the orthant boundary, but
    // the local minimum may live there.  Zero out any coordinate whose
    // removal does not increase the variance.
    let mut best = variance(&point_of(&u), sample)?;
    loop {
        let mut zeroed = None;
        let mut order: Vec<(Axis, f64)> = u.iter().map(|(a, v)| (a.clone(), *v)).collect();
        order.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (axis, _) in order {
            let mut trial = u.clone();
            trial.remove(&axis);
            let value = variance(&point_of(&trial), sample)?;
            if value <= best + 1e-14 * (1.0 + best.abs()) {
                best = value.min(best);
                zeroed = Some(trial);
                break;
            }
        }
        match zeroed {
            Some(trial) => u = trial,
            None => break,
        }
    }
    Ok(u)
}

/// Majority-rule consensus: the axes occurring in a strict majority of the
/// sample points, each with its mean length over the points containing it.
pub fn mrc_tree(sample: &WeightedSample) -> Result<Point> {
    let r = sample.len();
    let mut counts: BTreeMap<Axis, (usize, f64)> = BTreeMap::new();
    for p in sample.points() {
        for (a, v) in p.coords() {
            let entry = counts.entry(a.clone()).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 += v;
        }
    }
    let coords: BTreeMap<Axis, f64> = counts
        .into_iter()
        .filter(|(_, (c, _))| 2 * c > r)
        .map(|(a, (c, sum))| (a, sum / c as f64))
        .collect();
    GenericPoint::new(sample.points[0].space().clone(), coords)
}

/// Iterated subset-centroid construction: replace the r-set by the
/// centroids of its (r−1)-subsets until the diameter drops below `tol`.
pub fn bhv_centroid(points: &[Point], tol: f64) -> Result<Point> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("centroid needs at least 2 points".into()));
    }
    if points.len() > 8 {
        return Err(Error::LimitExceeded(
            "subset-centroid recursion past 8 points".into(),
        ));
    }
    centroid_recursive(points, tol)
}

fn centroid_recursive(points: &[Point], tol: f64) -> Result<Point> {
    let r = points.len();
    if r == 1 {
        return Ok(points[0].clone());
    }
    if r == 2 {
        return gtp_support(&points[0], &points[1])?.point_at(0.5);
    }
    let mut current: Vec<Point> = points.to_vec();
    for _ in 0..10_000 {
        let mut diameter = 0.0f64;
        for i in 0..r {
            for j in (i + 1)..r {
                diameter = diameter.max(distance(&current[i], &current[j])?);
            }
        }
        if diameter < tol {
            return Ok(current[0].clone());
        }
        let mut next = Vec::with_capacity(r);
        for skip in 0..r {
            let subset: Vec<Point> = current
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| p.clone())
                .collect();
            next.push(centroid_recursive(&subset, tol)?);
        }
        current = next;
    }
    Err(Error::TimedOut(10_000))
}

/// Post-hoc consistency report for a computed mean: every mean axis must
/// occur in some sample point, and every axis common to all sample points
/// must occur in the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanEdgeReport {
    /// Mean axes (above tolerance) that occur in no sample point.
    pub foreign_axes: Vec<Axis>,
    /// Axes present in every sample point but absent from the mean.
    pub missing_required: Vec<Axis>,
}

impl MeanEdgeReport {
    pub fn is_clean(&self) -> bool {
        self.foreign_axes.is_empty() && self.missing_required.is_empty()
    }
}

pub fn mean_edge_report(mean: &Point, sample: &WeightedSample, tol: f64) -> MeanEdgeReport {
    let universe = sample.axis_universe();
    let foreign_axes: Vec<Axis> = mean
        .coords()
        .iter()
        .filter(|(a, v)| v.abs() > tol && !universe.contains(*a))
        .map(|(a, _)| a.clone())
        .collect();
    let mut in_all: BTreeSet<Axis> = sample.points[0].support();
    for p in &sample.points[1..] {
        let s = p.support();
        in_all = in_all.intersection(&s).cloned().collect();
    }
    let missing_required: Vec<Axis> = in_all
        .into_iter()
        .filter(|a| mean.get(a).map(|v| v.abs() <= tol).unwrap_or(true))
        .collect();
    MeanEdgeReport {
        foreign_axes,
        missing_required,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::point_at;
    use crate::space::{ScaffoldGraph, Space};
    use crate::vistal::square;
    use std::sync::Arc;

    /// Three quadrants glued along shared axes: e2–e1–e2p–e1p is the path
    /// of compatibilities; the (e1p, e2)-orthant is missing.
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

    /// The sticky sample: three points around the origin whose mean is the
    /// origin itself.
    pub fn sticky_sample(space: &Arc<Space>) -> WeightedSample {
        WeightedSample::uniform(vec![
            pt(space, &[("e1", 3.0), ("e2", 10.0)]),
            pt(space, &[("e1", 3.0), ("e2p", 3.0)]),
            pt(space, &[("e1p", 10.0), ("e2p", 3.0)]),
        ])
        .unwrap()
    }

    #[test]
    fn variance_examples() {
        let space = three_orthant_space();
        let sample = sticky_sample(&space);
        let origin = GenericPoint::<f64>::origin(space.clone());
        assert!((variance(&origin, &sample).unwrap() - 236.0).abs() < 1e-9);

        let single =
            WeightedSample::uniform(vec![pt(&space, &[("e1", 1.0), ("e2", 2.0)])]).unwrap();
        assert_eq!(variance(single.points().first().unwrap(), &single).unwrap(), 0.0);

        // Two points: S((1−λ) along the geodesic) = (1−λ)²·0 + ... check
        // against the closed form (1−λ)² d² + λ² d² at the endpoints' pair.
        let a = pt(&space, &[("e1", 1.0), ("e2", 1.0)]);
        let b = pt(&space, &[("e1", 3.0), ("e2", 2.0)]);
        let two = WeightedSample::uniform(vec![a.clone(), b.clone()]).unwrap();
        let d = distance(&a, &b).unwrap();
        let lambda = 0.3;
        let m = point_at(&a, &b, lambda).unwrap();
        let expected = lambda * lambda * d * d + (1.0 - lambda) * (1.0 - lambda) * d * d;
        assert!((variance(&m, &two).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let space = three_orthant_space();
        let p = pt(&space, &[("e1", 1.0)]);
        assert!(WeightedSample::with_weights(vec![p.clone()], vec![0.5]).is_err());
        assert!(WeightedSample::with_weights(vec![p], vec![1.0]).is_ok());
    }

    #[test]
    fn euclidean_gradient_is_twice_the_difference() {
        let space = three_orthant_space();
        let x = pt(&space, &[("e1", 2.0), ("e2", 1.0)]);
        let t = pt(&space, &[("e1", 0.5), ("e2", 3.0)]);
        let sample = WeightedSample::uniform(vec![t.clone()]).unwrap();
        let grad = variance_gradient(&x, &sample).unwrap();
        assert!((grad[&Axis::named("e1")] - 2.0 * (2.0 - 0.5)).abs() < 1e-12);
        assert!((grad[&Axis::named("e2")] - 2.0 * (1.0 - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn gradient_vanishes_at_a_two_point_midpoint() {
        // Midpoint of (3,1) and (1,3) in the outer orthants lies interior
        // to the middle orthant; the full gradient must vanish there.
        let space = three_orthant_space();
        let a = pt(&space, &[("e1", 3.0), ("e2", 1.0)]);
        let b = pt(&space, &[("e1p", 1.0), ("e2p", 3.0)]);
        let m = point_at(&a, &b, 0.5).unwrap();
        assert_eq!(m.support().len(), 2);
        let sample = WeightedSample::uniform(vec![a, b]).unwrap();
        let grad = variance_gradient(&m, &sample).unwrap();
        for g in grad.values() {
            assert!(g.abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_requires_interior_to_maximal_orthant() {
        let space = three_orthant_space();
        let x = pt(&space, &[("e1", 1.0)]);
        let sample = WeightedSample::uniform(vec![pt(&space, &[("e2", 1.0)])]).unwrap();
        assert!(matches!(
            variance_gradient(&x, &sample),
            Err(Error::NotInteriorToMaximalOrthant(_))
        ));
    }

    #[test]
    fn gradients_match_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        let space = three_orthant_space();
        for _ in 0..20 {
            let x = pt(
                &space,
                &[
                    ("e1", rng.gen_range(0.5..3.0)),
                    ("e2", rng.gen_range(0.5..3.0)),
                ],
            );
            let mut points = Vec::new();
            for _ in 0..3 {
                let which = rng.gen_range(0..3);
                let (a, b) = match which {
                    0 => ("e1", "e2"),
                    1 => ("e1", "e2p"),
                    _ => ("e1p", "e2p"),
                };
                points.push(pt(
                    &space,
                    &[(a, rng.gen_range(0.5..4.0)), (b, rng.gen_range(0.5..4.0))],
                ));
            }
            let sample = WeightedSample::uniform(points).unwrap();
            let grad = variance_gradient(&x, &sample).unwrap();
            let h = 1e-6;
            for axis in ["e1", "e2"] {
                let a = Axis::named(axis);
                let mut up = x.coords().clone();
                let mut dn = x.coords().clone();
                *up.get_mut(&a).unwrap() += h;
                *dn.get_mut(&a).unwrap() -= h;
                let fu = variance(
                    &GenericPoint::new(space.clone(), up).unwrap(),
                    &sample,
                )
                .unwrap();
                let fd = variance(
                    &GenericPoint::new(space.clone(), dn).unwrap(),
                    &sample,
                )
                .unwrap();
                let fdval = (fu - fd) / (2.0 * h);
                let g = grad[&a];
                assert!(
                    (g - fdval).abs() <= 1e-4 * (1.0 + g.abs()),
                    "axis {axis}: analytic {g} vs fd {fdval}"
                );
            }
            // Squared-coordinate gradient against finite differences of S².
            let xi = square(&x);
            let sgrad = squared_variance_gradient(&xi, &sample).unwrap();
            for axis in ["e1", "e2"] {
                let a = Axis::named(axis);
                let mut up = xi.coords().clone();
                let mut dn = xi.coords().clone();
                *up.get_mut(&a).unwrap() += h;
                *dn.get_mut(&a).unwrap() -= h;
                let fu = squared_variance(
                    &SquaredPoint(GenericPoint::new(space.clone(), up).unwrap()),
                    &sample,
                )
                .unwrap();
                let fd = squared_variance(
                    &SquaredPoint(GenericPoint::new(space.clone(), dn).unwrap()),
                    &sample,
                )
                .unwrap();
                let fdval = (fu - fd) / (2.0 * h);
                let g = sgrad[&a];
                assert!(
                    (g - fdval).abs() <= 1e-4 * (1.0 + g.abs()),
                    "squared axis {axis}: analytic {g} vs fd {fdval}"
                );
            }
        }
    }

    #[test]
    fn squared_variance_agrees_with_variance() {
        let space = three_orthant_space();
        let sample = sticky_sample(&space);
        let x = pt(&space, &[("e1", 1.5), ("e2p", 0.7)]);
        let xi = square(&x);
        assert!(
            (squared_variance(&xi, &sample).unwrap() - variance(&x, &sample).unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn inductive_mean_in_one_orthant_is_the_centroid() {
        let space = three_orthant_space();
        let pts = vec![
            pt(&space, &[("e1", 1.0), ("e2", 2.0)]),
            pt(&space, &[("e1", 3.0), ("e2", 1.0)]),
            pt(&space, &[("e1", 2.0), ("e2", 3.0)]),
        ];
        let m = inductive_mean(&pts).unwrap();
        assert!((m.get(&Axis::named("e1")).unwrap() - 2.0).abs() < 1e-12);
        assert!((m.get(&Axis::named("e2")).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inductive_mean_order_dependence() {
        let space = three_orthant_space();
        let t1 = pt(&space, &[("e1", 3.0), ("e2", 10.0)]);
        let t2 = pt(&space, &[("e1", 3.0), ("e2p", 3.0)]);
        let t3 = pt(&space, &[("e1p", 10.0), ("e2p", 3.0)]);

        // T1 and T3 first: the midpoint is the origin, and the final step
        // lands at (1,1) in T2's orthant.
        let m = inductive_mean(&[t1.clone(), t3.clone(), t2.clone()]).unwrap();
        assert!((m.get(&Axis::named("e1")).copied().unwrap() - 1.0).abs() < 1e-9);
        assert!((m.get(&Axis::named("e2p")).copied().unwrap() - 1.0).abs() < 1e-9);

        // T1 and T2 first: lands in T3's orthant at (0.390, 0.117).
        let m = inductive_mean(&[t1.clone(), t2.clone(), t3.clone()]).unwrap();
        assert!((m.get(&Axis::named("e1p")).copied().unwrap() - 0.390).abs() < 1e-3);
        assert!((m.get(&Axis::named("e2p")).copied().unwrap() - 0.117).abs() < 1e-3);

        // T2 and T3 first: lands in T1's orthant at (0.117, 0.390).
        let m = inductive_mean(&[t2, t3, t1]).unwrap();
        assert!((m.get(&Axis::named("e1")).copied().unwrap() - 0.117).abs() < 1e-3);
        assert!((m.get(&Axis::named("e2")).copied().unwrap() - 0.390).abs() < 1e-3);
    }

    #[test]
    fn sturm_single_point_returns_it() {
        let space = three_orthant_space();
        let p = pt(&space, &[("e1", 1.0), ("e2", 2.0)]);
        let sample = WeightedSample::uniform(vec![p.clone()]).unwrap();
        let result = sturm_mean(
            &sample,
            &SturmParams {
                k_min: 10,
                window: 3,
                eps: 1e-9,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(result.mean, p);
        assert_eq!(result.variance, 0.0);
    }

    #[test]
    fn sturm_two_points_approaches_the_midpoint() {
        let space = three_orthant_space();
        let a = pt(&space, &[("e1", 1.0), ("e2", 1.0)]);
        let b = pt(&space, &[("e1", 3.0), ("e2", 2.0)]);
        let sample = WeightedSample::uniform(vec![a.clone(), b.clone()]).unwrap();
        let mid = point_at(&a, &b, 0.5).unwrap();
        let result = sturm_mean(
            &sample,
            &SturmParams {
                k_min: 20_000,
                window: 5,
                eps: 1e-2,
                seed: 5,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(distance(&result.mean, &mid).unwrap() < 5e-2);
    }

    #[test]
    fn sturm_sticky_sample_reaches_the_origin() {
        let space = three_orthant_space();
        let sample = sticky_sample(&space);
        let result = sturm_mean(
            &sample,
            &SturmParams {
                k_min: 100_000,
                window: 10,
                eps: 1e-3,
                seed: 2,
                ..Default::default()
            },
        )
        .unwrap();
        for v in result.mean.coords().values() {
            assert!(v.abs() < 1e-3);
        }
        assert!((result.variance - 236.0).abs() < 0.5);
    }

    #[test]
    fn sturm_is_reproducible_for_a_seed() {
        let space = three_orthant_space();
        let sample = sticky_sample(&space);
        let params = SturmParams {
            k_min: 500,
            window: 5,
            eps: 1e9,
            seed: 7,
            ..Default::default()
        };
        let a = sturm_mean(&sample, &params).unwrap();
        let b = sturm_mean(&sample, &params).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn descent_one_orthant_sample_finds_the_centroid() {
        let space = three_orthant_space();
        let sample = WeightedSample::uniform(vec![
            pt(&space, &[("e1", 1.0), ("e2", 2.0)]),
            pt(&space, &[("e1", 3.0), ("e2", 1.0)]),
            pt(&space, &[("e1", 2.0), ("e2", 3.0)]),
        ])
        .unwrap();
        let result = descent_mean(&sample, &DescentOptions::default()).unwrap();
        assert!((result.mean.get(&Axis::named("e1")).copied().unwrap() - 2.0).abs() < 1e-6);
        assert!((result.mean.get(&Axis::named("e2")).copied().unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn descent_sticky_sample_reaches_the_origin() {
        let space = three_orthant_space();
        let sample = sticky_sample(&space);
        let result = descent_mean(&sample, &DescentOptions::default()).unwrap();
        for v in result.mean.coords().values() {
            assert!(v.abs() < 1e-6, "coordinate {v} should vanish");
        }
    }

    #[test]
    fn descent_interior_mean_with_zero_gradient() {
        // Sample with barycenter (1,2) in the e1p/e2p orthant.
        let space = three_orthant_space();
        let sample = WeightedSample::uniform(vec![
            pt(&space, &[("e1", 1.0), ("e2", 1.0)]),
            pt(&space, &[("e1", 1.0), ("e2p", 1.0)]),
            pt(&space, &[("e1p", 5.0), ("e2p", 6.0)]),
        ])
        .unwrap();
        let result = descent_mean(&sample, &DescentOptions::default()).unwrap();
        assert!((result.mean.get(&Axis::named("e1p")).copied().unwrap_or(0.0) - 1.0).abs() < 1e-4);
        assert!((result.mean.get(&Axis::named("e2p")).copied().unwrap_or(0.0) - 2.0).abs() < 1e-4);
        // The squared-coordinate gradient vanishes at the squared mean.
        let xi = square(&result.mean);
        let grad = squared_variance_gradient(&xi, &sample).unwrap();
        for g in grad.values() {
            assert!(g.abs() < 1e-4);
        }
    }

    #[test]
    fn descent_agrees_with_sturm_on_clustered_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        let space = three_orthant_space();
        // Low-variance cluster in one orthant: both methods must agree
        // tightly.
        for _ in 0..3 {
            let base = (rng.gen_range(1.0..2.0), rng.gen_range(1.0..2.0));
            let points: Vec<Point> = (0..5)
                .map(|_| {
                    pt(
                        &space,
                        &[
                            ("e1", base.0 + rng.gen_range(-0.05..0.05)),
                            ("e2p", base.1 + rng.gen_range(-0.05..0.05)),
                        ],
                    )
                })
                .collect();
            let sample = WeightedSample::uniform(points).unwrap();
            let d = descent_mean(&sample, &DescentOptions::default()).unwrap();
            let s = sturm_mean(
                &sample,
                &SturmParams {
                    k_min: 100_000,
                    window: 10,
                    eps: 1e-4,
                    seed: 11,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(distance(&d.mean, &s.mean).unwrap() < 1e-3);
        }
    }

    #[test]
    fn mrc_examples() {
        let space = three_orthant_space();
        // Identical trees: the consensus is that tree.
        let p = pt(&space, &[("e1", 1.0), ("e2", 2.0)]);
        let sample = WeightedSample::uniform(vec![p.clone(), p.clone(), p.clone()]).unwrap();
        assert_eq!(mrc_tree(&sample).unwrap(), p);

        // Majority topology with averaged lengths.
        let sample = WeightedSample::uniform(vec![
            pt(&space, &[("e1", 1.0), ("e2", 1.0)]),
            pt(&space, &[("e1", 1.0), ("e2p", 1.0)]),
            pt(&space, &[("e1p", 5.0), ("e2p", 6.0)]),
        ])
        .unwrap();
        let mrc = mrc_tree(&sample).unwrap();
        assert_eq!(mrc.support(), [Axis::named("e1"), Axis::named("e2p")].into_iter().collect());
        assert!((mrc.get(&Axis::named("e1")).unwrap() - 1.0).abs() < 1e-12);
        assert!((mrc.get(&Axis::named("e2p")).unwrap() - 3.5).abs() < 1e-12);

        // Two points with disjoint supports: no strict majority.
        let sample = WeightedSample::uniform(vec![
            pt(&space, &[("e2", 1.0)]),
            pt(&space, &[("e2p", 1.0)]),
        ])
        .unwrap();
        assert!(mrc_tree(&sample).unwrap().is_origin());
    }

    #[test]
    fn centroid_examples() {
        let space = three_orthant_space();
        let a = pt(&space, &[("e1", 1.0), ("e2", 1.0)]);
        let b = pt(&space, &[("e1", 3.0), ("e2", 2.0)]);
        let mid = point_at(&a, &b, 0.5).unwrap();
        assert_eq!(bhv_centroid(&[a.clone(), b.clone()], 1e-9).unwrap(), mid);

        // One orthant: the centroid is the Euclidean centroid.
        let c = pt(&space, &[("e1", 2.0), ("e2", 3.0)]);
        let centroid = bhv_centroid(&[a, b, c], 1e-9).unwrap();
        assert!((centroid.get(&Axis::named("e1")).unwrap() - 2.0).abs() < 1e-6);
        assert!((centroid.get(&Axis::named("e2")).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn centroid_differs_from_the_mean_off_origin() {
        let space = three_orthant_space();
        let pts = vec![
            pt(&space, &[("e1", 2.0), ("e2", 4.0)]),
            pt(&space, &[("e1", 2.0), ("e2p", 2.0)]),
            pt(&space, &[("e1p", 4.0), ("e2p", 2.0)]),
        ];
        let centroid = bhv_centroid(&pts, 1e-6).unwrap();
        let off_origin = centroid.coords().values().any(|v| v.abs() > 1e-3);
        assert!(off_origin, "the centroid stays off the origin");
        let sample = WeightedSample::uniform(pts).unwrap();
        let mean = descent_mean(&sample, &DescentOptions::default()).unwrap();
        for v in mean.mean.coords().values() {
            assert!(v.abs() < 1e-6, "the mean is the origin");
        }
    }

    #[test]
    fn mean_edge_report_examples() {
        let space = three_orthant_space();
        let sample = WeightedSample::uniform(vec![
            pt(&space, &[("e1", 1.0), ("e2", 1.0)]),
            pt(&space, &[("e1", 2.0), ("e2p", 1.0)]),
        ])
        .unwrap();
        // Single-tree sample: the mean is the tree itself.
        let single = WeightedSample::uniform(vec![pt(&space, &[("e1", 1.0)])]).unwrap();
        let report = mean_edge_report(&single.points()[0].clone(), &single, 1e-6);
        assert!(report.is_clean());

        // A mean with a foreign axis is reported.
        let bad = pt(&space, &[("e1p", 1.0)]);
        let report = mean_edge_report(&bad, &sample, 1e-6);
        assert_eq!(report.foreign_axes, vec![Axis::named("e1p")]);
        // e1 occurs in every sample point, so it is required.
        assert_eq!(report.missing_required, vec![Axis::named("e1")]);

        // A sturm mean of the sample passes the report.
        let result = sturm_mean(
            &sample,
            &SturmParams {
                k_min: 30_000,
                window: 5,
                eps: 1e-2,
                seed: 3,
                ..Default::default()
            },
        )
        .unwrap();
        let report = mean_edge_report(&result.mean, &sample, 1e-3);
        assert!(report.is_clean(), "{report:?}");
    }

    #[test]
    fn stickiness_under_perturbations() {
        let space = three_orthant_space();
        // Perturb each coordinate of the sticky sample by ±0.9 in turn;
        // the mean stays at the origin.
        let base: Vec<Vec<(&str, f64)>> = vec![
            vec![("e1", 3.0), ("e2", 10.0)],
            vec![("e1", 3.0), ("e2p", 3.0)],
            vec![("e1p", 10.0), ("e2p", 3.0)],
        ];
        let mut cases = Vec::new();
        for point_idx in 0..3 {
            for coord_idx in 0..2 {
                for delta in [0.9, -0.9] {
                    let mut sample = base.clone();
                    sample[point_idx][coord_idx].1 += delta;
                    cases.push(sample);
                }
            }
        }
        for case in cases {
            let points: Vec<Point> = case.iter().map(|c| pt(&space, c)).collect();
            let sample = WeightedSample::uniform(points).unwrap();
            let result = descent_mean(&sample, &DescentOptions::default()).unwrap();
            for v in result.mean.coords().values() {
                assert!(v.abs() < 1e-4, "perturbed mean should stick at the origin");
            }
        }
    }
}
