//! Learning algorithms built on label and comparison queries.
//!
//! - [`sort_with_queries`]: merge sort of a label class by distance from the
//!   boundary, paying one comparison query per merge step;
//! - [`learn_2d`]: the planar cone algorithm — sample, label, find the point
//!   closest to the boundary in each class, mark the spanned cones confident;
//! - [`weak_confident_learn`]: label and sort a small sample, then infer over
//!   the whole pool;
//! - [`boost`]: drive the weak learner until every pool label is known,
//!   halving the undetermined set per accepted round;
//! - [`learn_statistical`]: sample-label-fit wrapper that returns an explicit
//!   consistent concept.
//!
//! Every learner only touches the hidden concept through the oracle, and
//! never emits a label it cannot certify.

use crate::error::{Error, Result};
use crate::geometry::{LinearConcept, RationalVector, Sign};
use crate::infer::{self, PartialHypothesis};
use crate::lp::{self, ConstraintSystem, LinearForm};
use crate::query::{QueryStats, QueryTranscript, SimulatedOracle};
use crate::Rat;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;

/// Parameters of the boosting loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoostConfig {
    /// Inference-dimension budget of the instance.
    pub k: usize,
    /// Sample size per update step.
    pub subsample_size: usize,
    /// Below this many undetermined points, query the rest directly.
    pub direct_label_threshold: usize,
    pub rng_seed: u64,
}

impl BoostConfig {
    /// Defaults: both the sample size and the direct-label threshold are 4k.
    pub fn new(k: usize, rng_seed: u64) -> Self {
        BoostConfig {
            k,
            subsample_size: 4 * k.max(1),
            direct_label_threshold: 4 * k.max(1),
            rng_seed,
        }
    }
}

/// Outcome of a learner run: a total labeling plus exact accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub labels: BTreeMap<usize, Sign>,
    pub stats: QueryStats,
    /// Accepted update steps (the direct-label fallback is not counted).
    pub iterations: usize,
    /// Rejected update steps whose coverage fell below 1/2.
    pub resamples: usize,
    /// Number of still-unlabeled points before the run and after each
    /// accepted iteration.
    pub dis_trajectory: Vec<usize>,
    /// Queries spent in each accepted iteration (resamples included for
    /// boosting; the final direct-label sweep is not an iteration).
    pub iteration_queries: Vec<usize>,
}

/// Sorts ids carrying the shared hidden label `y` by nondecreasing `|f|`,
/// using one comparison query per merge step (at most `m * ceil(log2 m)`).
///
/// For positives `|f|` order is `f` order; for negatives it is reversed, so
/// the comparison is asked with swapped operands.
pub fn sort_with_queries(
    ids: &[usize],
    y: Sign,
    oracle: &mut SimulatedOracle,
) -> Result<Vec<usize>> {
    // leq(a, b) <=> |f(a)| <= |f(b)|.
    fn merge(
        left: Vec<usize>,
        right: Vec<usize>,
        y: Sign,
        oracle: &mut SimulatedOracle,
    ) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(left.len() + right.len());
        let mut l = left.into_iter().peekable();
        let mut r = right.into_iter().peekable();
        while let (Some(&a), Some(&b)) = (l.peek(), r.peek()) {
            let leq = match y {
                Sign::Pos => oracle.query_compare(b, a)?,
                Sign::Neg => oracle.query_compare(a, b)?,
            };
            if leq {
                out.push(a);
                l.next();
            } else {
                out.push(b);
                r.next();
            }
        }
        out.extend(l);
        out.extend(r);
        Ok(out)
    }

    fn msort(ids: &[usize], y: Sign, oracle: &mut SimulatedOracle) -> Result<Vec<usize>> {
        if ids.len() <= 1 {
            return Ok(ids.to_vec());
        }
        let mid = ids.len() / 2;
        let left = msort(&ids[..mid], y, oracle)?;
        let right = msort(&ids[mid..], y, oracle)?;
        merge(left, right, y, oracle)
    }

    msort(ids, y, oracle)
}

fn cross(u: &RationalVector, v: &RationalVector) -> Rat {
    &u.coords()[0] * &v.coords()[1] - &u.coords()[1] * &v.coords()[0]
}

fn dot2(u: &RationalVector, v: &RationalVector) -> Rat {
    &u.coords()[0] * &v.coords()[0] + &u.coords()[1] * &v.coords()[1]
}

/// Membership of `w` in the planar cone spanned by `u` and `v` (apex at the
/// origin), decided without divisions via sign tests on 2x2 determinants.
fn cone_contains(u: &RationalVector, v: &RationalVector, w: &RationalVector) -> bool {
    if w.is_zero() {
        return true;
    }
    let det = cross(u, v);
    if !det.is_zero() {
        // w = alpha u + beta v with alpha = (w x v)/det, beta = (u x w)/det.
        let alpha_num = cross(w, v);
        let beta_num = cross(u, w);
        let pos = det.is_positive();
        let ok = |n: &Rat| if pos { !n.is_negative() } else { !n.is_positive() };
        return ok(&alpha_num) && ok(&beta_num);
    }
    // Degenerate spans: a point, a ray, or a line.
    match (u.is_zero(), v.is_zero()) {
        (true, true) => false,
        (true, false) => cross(w, v).is_zero() && dot2(w, v).is_positive(),
        (false, true) => cross(w, u).is_zero() && dot2(w, u).is_positive(),
        (false, false) => {
            if !cross(w, u).is_zero() {
                return false;
            }
            if dot2(u, v).is_negative() {
                true // opposite generators span the whole line
            } else {
                dot2(w, u).is_positive()
            }
        }
    }
}

/// True iff `z - apex` is a nonnegative combination of `a - apex` and
/// `b - apex`; all inputs are planar points.
pub fn in_cone2d(
    apex: &RationalVector,
    a: &RationalVector,
    b: &RationalVector,
    z: &RationalVector,
) -> Result<bool> {
    for p in [apex, a, b, z] {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: p.dim(),
            });
        }
    }
    Ok(cone_contains(&a.sub(apex)?, &b.sub(apex)?, &z.sub(apex)?))
}

/// A class cone at an apex: tests membership against the hull of the class
/// directions.
struct ClassCone {
    apex: RationalVector,
    dirs: Vec<RationalVector>,
    /// A pair covering every class direction, when one exists.
    covering: Option<(usize, usize)>,
}

impl ClassCone {
    fn new(apex: RationalVector, others: &[&RationalVector]) -> Result<Self> {
        let mut dirs = Vec::new();
        for p in others {
            let d = p.sub(&apex)?;
            if !d.is_zero() {
                dirs.push(d);
            }
        }
        let mut covering = None;
        'outer: for i in 0..dirs.len() {
            for j in 0..dirs.len() {
                if dirs
                    .iter()
                    .all(|v| cone_contains(&dirs[i], &dirs[j], v))
                {
                    covering = Some((i, j));
                    break 'outer;
                }
            }
        }
        Ok(ClassCone { apex, dirs, covering })
    }

    fn contains(&self, z: &RationalVector) -> Result<bool> {
        let w = z.sub(&self.apex)?;
        if w.is_zero() {
            return Ok(true);
        }
        if self.dirs.is_empty() {
            return Ok(false);
        }
        if let Some((i, j)) = self.covering {
            return Ok(cone_contains(&self.dirs[i], &self.dirs[j], &w));
        }
        // No single pair covers the class (directions span a full halfplane
        // boundary to boundary); by Caratheodory in the plane, membership in
        // the full cone equals membership in some pairwise cone.
        for i in 0..self.dirs.len() {
            for j in i..self.dirs.len() {
                if cone_contains(&self.dirs[i], &self.dirs[j], &w) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Pool points projected to the plane the cones live in: native 2D pools are
/// used as-is; lifted-affine pools (last coordinate identically 1) are
/// projected back.
fn planar_pool(pool: &[RationalVector]) -> Result<Vec<RationalVector>> {
    let Some(first) = pool.first() else {
        return Err(Error::DegeneratePool);
    };
    match first.dim() {
        2 => Ok(pool.to_vec()),
        3 if pool
            .iter()
            .all(|p| p.coords()[2] == Rat::from_integer(1.into())) =>
        {
            Ok(pool
                .iter()
                .map(|p| RationalVector::new(p.coords()[..2].to_vec()))
                .collect())
        }
        d => Err(Error::InvalidParameter(format!(
            "learn_2d needs a planar pool (native 2D or lifted affine), got dimension {d}"
        ))),
    }
}

/// The planar cone algorithm. Each iteration samples `subsample` unlabeled
/// points without replacement, queries their labels, locates the point
/// closest to the boundary in each class with one pass of comparisons, and
/// marks the class cones at those points confident.
///
/// With `subsample = 30` an iteration pays at most 30 labels plus 28
/// comparisons, under the budget of 60.
pub fn learn_2d(
    oracle: &mut SimulatedOracle,
    subsample: usize,
    seed: u64,
) -> Result<RunReport> {
    if subsample == 0 {
        return Err(Error::InvalidParameter("subsample must be positive".into()));
    }
    let plane = planar_pool(oracle.pool())?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut labels: BTreeMap<usize, Sign> = BTreeMap::new();
    let mut remaining: Vec<usize> = (0..plane.len()).collect();
    let mut iterations = 0usize;
    let mut dis_trajectory = vec![remaining.len()];
    let mut iteration_queries = Vec::new();

    while !remaining.is_empty() {
        let queries_before = oracle.stats().total();
        let amount = subsample.min(remaining.len());
        let picked: Vec<usize> = rand::seq::index::sample(&mut rng, remaining.len(), amount)
            .into_iter()
            .map(|i| remaining[i])
            .collect();

        let mut pos: Vec<usize> = Vec::new();
        let mut neg: Vec<usize> = Vec::new();
        for &id in &picked {
            match oracle.query_label(id)? {
                Sign::Pos => pos.push(id),
                Sign::Neg => neg.push(id),
            }
        }

        // The point closest to the boundary minimizes f over the positives
        // and maximizes f over the negatives; ties keep the first minimal
        // element in comparison order.
        let mut cones: Vec<(Sign, ClassCone)> = Vec::new();
        for (y, class) in [(Sign::Pos, &pos), (Sign::Neg, &neg)] {
            let Some(&first) = class.first() else { continue };
            let mut q = first;
            for &x in &class[1..] {
                let keep = match y {
                    Sign::Pos => oracle.query_compare(x, q)?,
                    Sign::Neg => oracle.query_compare(q, x)?,
                };
                if !keep {
                    q = x;
                }
            }
            let others: Vec<&RationalVector> =
                class.iter().filter(|&&x| x != q).map(|&x| &plane[x]).collect();
            cones.push((y, ClassCone::new(plane[q].clone(), &others)?));
        }

        for &id in &picked {
            let y = if pos.contains(&id) { Sign::Pos } else { Sign::Neg };
            labels.insert(id, y);
        }
        let mut next = Vec::with_capacity(remaining.len());
        for &id in &remaining {
            if labels.contains_key(&id) {
                continue;
            }
            let mut marked = false;
            for (y, cone) in &cones {
                if cone.contains(&plane[id])? {
                    labels.insert(id, *y);
                    marked = true;
                    break;
                }
            }
            if !marked {
                next.push(id);
            }
        }
        remaining = next;
        iterations += 1;
        dis_trajectory.push(remaining.len());
        iteration_queries.push(oracle.stats().total() - queries_before);
    }

    Ok(RunReport {
        labels,
        stats: oracle.stats(),
        iterations,
        resamples: 0,
        dis_trajectory,
        iteration_queries,
    })
}

/// Labels a small sample, certifies the `|f|` order inside each class by
/// comparisons, and infers over the entire pool from that transcript alone.
///
/// Queries exactly `sample_ids.len()` labels plus at most
/// `m * ceil(log2 m)` comparisons.
pub fn weak_confident_learn(
    sample_ids: &[usize],
    oracle: &mut SimulatedOracle,
) -> Result<(PartialHypothesis, QueryTranscript)> {
    let start = oracle.transcript().len();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for &id in sample_ids {
        match oracle.query_label(id)? {
            Sign::Pos => pos.push(id),
            Sign::Neg => neg.push(id),
        }
    }
    sort_with_queries(&pos, Sign::Pos, oracle)?;
    sort_with_queries(&neg, Sign::Neg, oracle)?;

    let mut local = QueryTranscript::new();
    for e in &oracle.transcript().entries()[start..] {
        local.push(*e);
    }
    let pool = oracle.pool().to_vec();
    let targets: Vec<usize> = (0..pool.len()).collect();
    let h = infer::infer_all(&local, &pool, &targets)?;
    Ok((h, local))
}

/// Boosts the weak learner until every pool label is determined.
///
/// Maintains the undetermined set, draws `subsample_size` ids i.i.d. with
/// replacement from it per update step, and accepts a step only when the
/// weak hypothesis covers at least half of the undetermined set — which
/// halves it. Once at most `direct_label_threshold` points remain, their
/// labels are queried directly.
pub fn boost(oracle: &mut SimulatedOracle, cfg: &BoostConfig) -> Result<RunReport> {
    if cfg.subsample_size == 0 {
        return Err(Error::InvalidParameter(
            "subsample_size must be positive".into(),
        ));
    }
    let n = oracle.pool_size();
    if n == 0 {
        return Err(Error::DegeneratePool);
    }
    let guard = (64.0 * (n as f64).log2()).ceil().max(1.0) as usize;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.rng_seed);
    let mut labels: BTreeMap<usize, Sign> = BTreeMap::new();
    let mut dis: Vec<usize> = (0..n).collect();
    let mut iterations = 0usize;
    let mut resamples = 0usize;
    let mut dis_trajectory = vec![dis.len()];
    let mut iteration_queries = Vec::new();

    while dis.len() > cfg.direct_label_threshold {
        let queries_before = oracle.stats().total();
        let mut rejected = 0usize;
        loop {
            let sample: Vec<usize> = (0..cfg.subsample_size)
                .map(|_| dis[rand::Rng::random_range(&mut rng, 0..dis.len())])
                .collect();
            let (h, _) = weak_confident_learn(&sample, oracle)?;
            let e_t = infer::coverage(&h, &dis)?;
            if e_t >= crate::ratio(1, 2) {
                let before = dis.len();
                dis.retain(|&id| match h.label(id) {
                    Some(s) => {
                        labels.insert(id, s);
                        false
                    }
                    None => true,
                });
                debug_assert!(dis.len() <= before / 2);
                iterations += 1;
                dis_trajectory.push(dis.len());
                iteration_queries.push(oracle.stats().total() - queries_before);
                break;
            }
            resamples += 1;
            rejected += 1;
            if rejected > guard {
                return Err(Error::ResampleGuard {
                    iteration: iterations,
                    resamples: rejected,
                });
            }
        }
    }
    for id in dis {
        let s = oracle.query_label(id)?;
        labels.insert(id, s);
    }

    Ok(RunReport {
        labels,
        stats: oracle.stats(),
        iterations,
        resamples,
        dis_trajectory,
        iteration_queries,
    })
}

/// Parameters of the statistical wrapper.
#[derive(Debug, Clone, Copy)]
pub struct StatConfig {
    pub eps: f64,
    pub delta: f64,
    /// Sample-size constant in `n = ceil(c * (d + log2(1/delta)) / eps)`.
    pub c: f64,
    pub k: usize,
    pub seed: u64,
}

impl StatConfig {
    pub fn new(eps: f64, delta: f64, k: usize, seed: u64) -> Self {
        StatConfig { eps, delta, c: 8.0, k, seed }
    }

    pub fn sample_size(&self, d: usize) -> usize {
        ((self.c * (d as f64 + (1.0 / self.delta).log2()) / self.eps).ceil() as usize).max(1)
    }
}

/// Draws an i.i.d. sample, labels it completely with [`boost`], and fits an
/// explicit consistent homogeneous concept with one feasibility call.
pub fn learn_statistical<S, F>(
    mut sample_point: S,
    make_oracle: F,
    d: usize,
    cfg: &StatConfig,
) -> Result<(LinearConcept, RunReport)>
where
    S: FnMut(&mut ChaCha12Rng) -> RationalVector,
    F: FnOnce(Vec<RationalVector>) -> Result<SimulatedOracle>,
{
    if !(cfg.eps > 0.0 && cfg.eps <= 1.0) || !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(Error::InvalidParameter(
            "eps must be in (0,1] and delta in (0,1)".into(),
        ));
    }
    let n = cfg.sample_size(d);
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let pool: Vec<RationalVector> = (0..n).map(|_| sample_point(&mut rng)).collect();
    let mut oracle = make_oracle(pool.clone())?;
    let report = boost(&mut oracle, &BoostConfig::new(cfg.k, cfg.seed ^ 0x9e37_79b9))?;

    let dim = pool[0].dim();
    let mut system = ConstraintSystem::new(dim);
    for (&id, &sign) in &report.labels {
        match sign {
            Sign::Pos => system.push_nonstrict(LinearForm::new(pool[id].clone())),
            Sign::Neg => system.push_strict(LinearForm::new(
                pool[id].scale(&-Rat::from_integer(1.into())),
            )),
        }
    }
    match lp::feasible(&system)? {
        lp::Feasibility::Feasible(w) => Ok((LinearConcept::new(w), report)),
        lp::Feasibility::Infeasible => Err(Error::InconsistentTranscript {
            context: "consistent fit after boosting".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn oracle_from(w: &[i64], pts: &[Vec<i64>]) -> SimulatedOracle {
        let pool = pts.iter().map(|p| RationalVector::from_ints(p)).collect();
        SimulatedOracle::new(LinearConcept::from_ints(w), pool).unwrap()
    }

    fn random_planar_oracle(
        rng: &mut ChaCha12Rng,
        n: usize,
        coord_range: i64,
    ) -> SimulatedOracle {
        let pts: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                vec![
                    rng.random_range(-coord_range..=coord_range),
                    rng.random_range(-coord_range..=coord_range),
                ]
            })
            .collect();
        let w = loop {
            let w = vec![rng.random_range(-5..=5), rng.random_range(-5..=5)];
            if w.iter().any(|&c| c != 0) {
                break w;
            }
        };
        oracle_from(&w, &pts)
    }

    #[test]
    fn sort_single_id_is_free() {
        let mut o = oracle_from(&[1, 0], &[vec![3, 0]]);
        assert_eq!(sort_with_queries(&[0], Sign::Pos, &mut o).unwrap(), vec![0]);
        assert_eq!(o.stats().compare_count, 0);
    }

    #[test]
    fn sort_pair_costs_one_comparison() {
        let mut o = oracle_from(&[1, 0], &[vec![5, 0], vec![2, 0]]);
        let order = sort_with_queries(&[0, 1], Sign::Pos, &mut o).unwrap();
        assert_eq!(order, vec![1, 0]);
        assert_eq!(o.stats().compare_count, 1);
    }

    #[test]
    fn sort_matches_exact_abs_order_within_budget() {
        let mut rng = ChaCha12Rng::seed_from_u64(501);
        for &y in &[Sign::Pos, Sign::Neg] {
            for _ in 0..20 {
                let mut o = random_planar_oracle(&mut rng, 200, 50);
                let ids: Vec<usize> = (0..o.pool_size())
                    .filter(|&i| {
                        o.hidden().label_of(&o.pool()[i].clone()).unwrap() == y
                    })
                    .take(64)
                    .collect();
                if ids.len() < 2 {
                    continue;
                }
                let m = ids.len();
                let before = o.stats().compare_count;
                let order = sort_with_queries(&ids, y, &mut o).unwrap();
                let cost = o.stats().compare_count - before;
                assert!(cost <= m * (m as f64).log2().ceil() as usize);
                let hidden = o.hidden().clone();
                for pair in order.windows(2) {
                    let fa = hidden.eval(&o.pool()[pair[0]]).unwrap().abs();
                    let fb = hidden.eval(&o.pool()[pair[1]]).unwrap().abs();
                    assert!(fa <= fb);
                }
            }
        }
    }

    #[test]
    fn in_cone2d_first_quadrant() {
        let p = |a: i64, b: i64| RationalVector::from_ints(&[a, b]);
        let apex = p(0, 0);
        let a = p(1, 0);
        let b = p(0, 1);
        assert!(in_cone2d(&apex, &a, &b, &apex).unwrap());
        assert!(in_cone2d(&apex, &a, &b, &p(2, 3)).unwrap());
        assert!(!in_cone2d(&apex, &a, &b, &p(-1, 0)).unwrap());
    }

    #[test]
    fn in_cone2d_degenerate_rays() {
        let p = |a: i64, b: i64| RationalVector::from_ints(&[a, b]);
        let apex = p(1, 1);
        // a == apex: the cone collapses to the ray towards b.
        assert!(in_cone2d(&apex, &apex, &p(3, 1), &p(7, 1)).unwrap());
        assert!(!in_cone2d(&apex, &apex, &p(3, 1), &p(0, 1)).unwrap());
        assert!(!in_cone2d(&apex, &apex, &p(3, 1), &p(3, 2)).unwrap());
        // Both degenerate: only the apex itself is inside.
        assert!(in_cone2d(&apex, &apex, &apex, &apex).unwrap());
        assert!(!in_cone2d(&apex, &apex, &apex, &p(1, 2)).unwrap());
        // Opposite generators span the whole line.
        assert!(in_cone2d(&apex, &p(0, 1), &p(2, 1), &p(-5, 1)).unwrap());
        assert!(!in_cone2d(&apex, &p(0, 1), &p(2, 1), &p(0, 0)).unwrap());
    }

    /// in_cone2d must agree with a direct feasibility formulation of
    /// membership in the two-generator cone.
    #[test]
    fn in_cone2d_matches_feasibility() {
        let mut rng = ChaCha12Rng::seed_from_u64(503);
        for _ in 0..400 {
            let mut p =
                || RationalVector::from_ints(&[rng.random_range(-3..=3), rng.random_range(-3..=3)]);
            let (apex, a, b, z) = (p(), p(), p(), p());
            let by_cone = in_cone2d(&apex, &a, &b, &z).unwrap();

            // z - apex = alpha (a - apex) + beta (b - apex), alpha, beta >= 0,
            // homogenized with a strict slack s.
            let u = a.sub(&apex).unwrap();
            let v = b.sub(&apex).unwrap();
            let w = z.sub(&apex).unwrap();
            let mut sys = ConstraintSystem::new(3);
            for c in 0..2 {
                let row = RationalVector::new(vec![
                    u.coords()[c].clone(),
                    v.coords()[c].clone(),
                    -w.coords()[c].clone(),
                ]);
                sys.push_nonstrict(LinearForm::new(row.clone()));
                sys.push_nonstrict(LinearForm::new(
                    row.scale(&-Rat::from_integer(1.into())),
                ));
            }
            sys.push_nonstrict(LinearForm::from_ints(&[1, 0, 0]));
            sys.push_nonstrict(LinearForm::from_ints(&[0, 1, 0]));
            sys.push_strict(LinearForm::from_ints(&[0, 0, 1]));
            let by_lp = lp::feasible(&sys).unwrap().is_feasible();
            assert_eq!(by_cone, by_lp);
        }
    }

    #[test]
    fn learn_2d_collinear_class_finishes_fast() {
        // 100 collinear points, all positive: one cone covers everything.
        let pts: Vec<Vec<i64>> = (1..=100).map(|i| vec![i, i]).collect();
        let mut o = oracle_from(&[1, 1], &pts);
        let report = learn_2d(&mut o, 30, 9).unwrap();
        assert!(report.iterations <= 5, "iterations = {}", report.iterations);
        assert_eq!(report.labels.len(), 100);
        for (&id, &s) in &report.labels {
            assert_eq!(s, o.hidden().label_of(&o.pool()[id].clone()).unwrap());
        }
    }

    #[test]
    fn learn_2d_labels_everything_correctly() {
        let mut rng = ChaCha12Rng::seed_from_u64(509);
        for trial in 0..10 {
            let mut o = random_planar_oracle(&mut rng, 400, 100);
            let report = learn_2d(&mut o, 30, trial).unwrap();
            assert_eq!(report.labels.len(), 400);
            for (&id, &s) in &report.labels {
                assert_eq!(
                    s,
                    o.hidden().label_of(&o.pool()[id].clone()).unwrap(),
                    "wrong label emitted"
                );
            }
            assert_eq!(report.stats, o.stats());
        }
    }

    #[test]
    fn learn_2d_respects_per_iteration_budget() {
        let mut rng = ChaCha12Rng::seed_from_u64(521);
        let mut o = random_planar_oracle(&mut rng, 1000, 500);
        let report = learn_2d(&mut o, 30, 77).unwrap();
        assert_eq!(report.iteration_queries.len(), report.iterations);
        assert!(report.iteration_queries.iter().all(|&q| q <= 60));
        // The unlabeled set shrinks strictly every iteration.
        for pair in report.dis_trajectory.windows(2) {
            assert!(pair[1] < pair[0]);
        }
    }

    #[test]
    fn learn_2d_accepts_lifted_affine_pools() {
        let pts: Vec<Vec<i64>> = (0..50)
            .flat_map(|i| [vec![i, 3, 1], vec![-i - 1, -7, 1]])
            .collect();
        let mut o = oracle_from(&[2, -1, 5], &pts);
        let report = learn_2d(&mut o, 30, 3).unwrap();
        for (&id, &s) in &report.labels {
            assert_eq!(s, o.hidden().label_of(&o.pool()[id].clone()).unwrap());
        }
    }

    #[test]
    fn weak_learner_with_everything_sampled_has_full_coverage() {
        let mut rng = ChaCha12Rng::seed_from_u64(523);
        let mut o = random_planar_oracle(&mut rng, 12, 5);
        let all: Vec<usize> = (0..o.pool_size()).collect();
        let (h, transcript) = weak_confident_learn(&all, &mut o).unwrap();
        assert_eq!(h.assigned_count(), o.pool_size());
        assert!(!transcript.is_empty());
        assert_eq!(
            infer::coverage(&h, &all).unwrap(),
            crate::rat(1)
        );
    }

    #[test]
    fn weak_learner_query_accounting() {
        let mut rng = ChaCha12Rng::seed_from_u64(541);
        for _ in 0..10 {
            let mut o = random_planar_oracle(&mut rng, 300, 60);
            let m = 48;
            let sample: Vec<usize> =
                (0..m).map(|_| rng.random_range(0..o.pool_size())).collect();
            let before = o.stats();
            let (h, _) = weak_confident_learn(&sample, &mut o).unwrap();
            let after = o.stats();
            assert_eq!(after.label_count - before.label_count, m);
            assert!(
                after.compare_count - before.compare_count
                    <= m * (m as f64).log2().ceil() as usize
            );
            for (id, label) in h.iter() {
                if let Some(s) = label {
                    assert_eq!(s, o.hidden().label_of(&o.pool()[id].clone()).unwrap());
                }
            }
        }
    }

    #[test]
    fn boost_small_pool_uses_direct_fallback() {
        let mut rng = ChaCha12Rng::seed_from_u64(547);
        let mut o = random_planar_oracle(&mut rng, 9, 5);
        let cfg = BoostConfig::new(3, 1); // threshold 12 >= pool size
        let report = boost(&mut o, &cfg).unwrap();
        assert_eq!(report.iterations, 0);
        assert_eq!(report.stats.label_count, 9);
        assert_eq!(report.stats.compare_count, 0);
        assert_eq!(report.labels.len(), 9);
    }

    #[test]
    fn boost_labels_everything_correctly() {
        let mut rng = ChaCha12Rng::seed_from_u64(557);
        for trial in 0..5 {
            let mut o = random_planar_oracle(&mut rng, 300, 40);
            let cfg = BoostConfig::new(12, trial);
            let report = boost(&mut o, &cfg).unwrap();
            assert_eq!(report.labels.len(), 300);
            for (&id, &s) in &report.labels {
                assert_eq!(s, o.hidden().label_of(&o.pool()[id].clone()).unwrap());
            }
            assert_eq!(report.stats, o.stats());
        }
    }

    #[test]
    fn boost_is_deterministic_given_seed() {
        let mut rng = ChaCha12Rng::seed_from_u64(563);
        let o = random_planar_oracle(&mut rng, 200, 30);
        let cfg = BoostConfig::new(10, 42);
        let r1 = boost(&mut o.clone(), &cfg).unwrap();
        let r2 = boost(&mut o.clone(), &cfg).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn statistical_wrapper_on_a_point_mass() {
        let point = RationalVector::from_ints(&[2, -1]);
        let hidden = LinearConcept::from_ints(&[3, 1]);
        let cfg = StatConfig::new(0.5, 0.5, 2, 5);
        let (concept, report) = learn_statistical(
            |_| point.clone(),
            |pool| SimulatedOracle::new(hidden.clone(), pool),
            2,
            &cfg,
        )
        .unwrap();
        assert!(report.stats.total() >= 1);
        assert_eq!(
            concept.label_of(&point).unwrap(),
            hidden.label_of(&point).unwrap()
        );
    }

    #[test]
    fn statistical_wrapper_fits_a_consistent_concept() {
        let hidden = LinearConcept::from_ints(&[2, -3, 1]);
        let cfg = StatConfig::new(0.25, 0.25, 6, 11);
        let (concept, report) = learn_statistical(
            |rng| {
                RationalVector::from_ints(&[
                    rng.random_range(-10..=10),
                    rng.random_range(-10..=10),
                    rng.random_range(-10..=10),
                ])
            },
            |pool| SimulatedOracle::new(hidden.clone(), pool),
            3,
            &cfg,
        )
        .unwrap();
        // The fitted concept must reproduce every boosted label; those labels
        // in turn equal the hidden ones, so spot-check agreement on a fresh
        // sample of the same distribution.
        assert!(!report.labels.is_empty());
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let mut agree = 0;
        for _ in 0..200 {
            let x = RationalVector::from_ints(&[
                rng.random_range(-10..=10),
                rng.random_range(-10..=10),
                rng.random_range(-10..=10),
            ]);
            if concept.label_of(&x).unwrap() == hidden.label_of(&x).unwrap() {
                agree += 1;
            }
        }
        assert!(agree >= 150, "agreement {agree}/200");
    }
}
