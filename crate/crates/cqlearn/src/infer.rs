//! Version-space inference: which labels does a transcript force?
//!
//! A transcript pins down a set of consistent concepts through linear
//! constraints on `w`. A point's label is *forced* when every consistent
//! concept agrees on it. Two engines decide this:
//!
//! - [`infer_label`] asks two feasibility questions per point (the source of
//!   truth);
//! - [`VersionSpace`] / [`infer_all`] build one double-description cone for
//!   the whole transcript and classify each point by a scan over its rays,
//!   which is what makes large batch runs affordable.
//!
//! The cone rules [`cone_infer`] / [`cone_infer_margin`] are certified
//! sufficient conditions used by the learners as fast paths.

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::geometry::{RationalVector, Sign};
use crate::lp::{self, ConstraintSystem, Feasibility, LinearForm};
use crate::query::{AnsweredQuery, QueryTranscript};
use crate::Rat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashSet};

/// Verdict for a single point under a transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InferenceResult {
    /// No consistent concept labels the point `-1`.
    ForcedPositive,
    /// No consistent concept labels the point `+1`.
    ForcedNegative,
    /// Both labels are realizable.
    Unknown,
}

impl InferenceResult {
    pub fn forced_sign(&self) -> Option<Sign> {
        match self {
            InferenceResult::ForcedPositive => Some(Sign::Pos),
            InferenceResult::ForcedNegative => Some(Sign::Neg),
            InferenceResult::Unknown => None,
        }
    }
}

/// A partial labeling of a target set; `None` is an abstention.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialHypothesis {
    assignments: BTreeMap<usize, Option<Sign>>,
}

impl PartialHypothesis {
    pub fn new() -> Self {
        PartialHypothesis::default()
    }

    pub fn insert(&mut self, id: usize, label: Option<Sign>) {
        self.assignments.insert(id, label);
    }

    /// `Some(Some(s))`: assigned; `Some(None)`: abstains; `None`: outside the
    /// hypothesis' domain.
    pub fn assignment(&self, id: usize) -> Option<Option<Sign>> {
        self.assignments.get(&id).copied()
    }

    pub fn label(&self, id: usize) -> Option<Sign> {
        self.assignments.get(&id).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assigned_count(&self) -> usize {
        self.assignments.values().filter(|v| v.is_some()).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Option<Sign>)> + '_ {
        self.assignments.iter().map(|(&id, &label)| (id, label))
    }
}

/// Exact fraction of targets on which the hypothesis does not abstain.
pub fn coverage(h: &PartialHypothesis, targets: &[usize]) -> Result<Rat> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let assigned = targets
        .iter()
        .filter(|&&id| h.label(id).is_some())
        .count();
    Ok(Rat::new(BigInt::from(assigned), BigInt::from(targets.len())))
}

/// Converts a transcript into the linear system cutting out its version
/// space, with duplicate constraints removed.
///
/// `Label(x) = +1` gives the non-strict `<w, x> >= 0` and `Label(x) = -1` the
/// strict `<w, -x> > 0`, matching the `f(x) >= 0 => +1` convention so the
/// hidden concept always lies in its own version space. A true
/// `Compare(x1, x2)` gives the non-strict `<w, x1 - x2> >= 0`, a false one
/// the strict `<w, x2 - x1> > 0`.
pub fn constraints_of(
    transcript: &QueryTranscript,
    pool: &[RationalVector],
) -> Result<ConstraintSystem> {
    let Some(first) = pool.first() else {
        return Err(Error::EmptyDimension);
    };
    let dim = first.dim();
    let point = |id: usize| -> Result<&RationalVector> {
        pool.get(id).ok_or(Error::UnknownPointId(id))
    };

    let mut system = ConstraintSystem::new(dim);
    let mut seen: HashSet<(bool, Vec<BigInt>)> = HashSet::new();
    let mut push = |system: &mut ConstraintSystem, strict: bool, v: RationalVector| {
        if seen.insert((strict, v.primitive_integers())) {
            if strict {
                system.push_strict(LinearForm::new(v));
            } else {
                system.push_nonstrict(LinearForm::new(v));
            }
        }
    };

    for entry in transcript.entries() {
        match *entry {
            AnsweredQuery::Label { x, sign } => {
                let p = point(x)?;
                match sign {
                    Sign::Pos => push(&mut system, false, p.clone()),
                    Sign::Neg => push(&mut system, true, p.scale(&-Rat::from_integer(1.into()))),
                }
            }
            AnsweredQuery::Compare { x1, x2, geq } => {
                let p1 = point(x1)?;
                let p2 = point(x2)?;
                if geq {
                    push(&mut system, false, p1.sub(p2)?);
                } else {
                    push(&mut system, true, p2.sub(p1)?);
                }
            }
        }
    }
    Ok(system)
}

/// Decides a single point's verdict by direct feasibility calls.
pub fn infer_label(
    transcript: &QueryTranscript,
    pool: &[RationalVector],
    x: usize,
) -> Result<InferenceResult> {
    let base = constraints_of(transcript, pool)?;
    let target = pool.get(x).ok_or(Error::UnknownPointId(x))?;
    if !lp::feasible(&base)?.is_feasible() {
        return Err(Error::InconsistentTranscript {
            context: format!("infer_label({x})"),
        });
    }

    // Forced +1 <=> no consistent w has <w, x> < 0.
    let mut deny_pos = base.clone();
    deny_pos.push_strict(LinearForm::new(
        target.scale(&-Rat::from_integer(1.into())),
    ));
    if matches!(lp::feasible(&deny_pos)?, Feasibility::Infeasible) {
        return Ok(InferenceResult::ForcedPositive);
    }

    // Forced -1 <=> no consistent w has <w, x> >= 0.
    let mut deny_neg = base;
    deny_neg.push_nonstrict(LinearForm::new(target.clone()));
    if matches!(lp::feasible(&deny_neg)?, Feasibility::Infeasible) {
        return Ok(InferenceResult::ForcedNegative);
    }
    Ok(InferenceResult::Unknown)
}

/// The version space of a transcript, held as a polyhedral cone for batch
/// classification.
///
/// Strictness is homogenized with one shared slack coordinate `t`: the cone
/// lives in `(w, t)` space with `t >= 0`, `<a, w> >= 0` per non-strict form
/// and `<b, w> >= t` per strict form. Concepts in the version space are
/// exactly the `w` parts of cone points with `t > 0`.
#[derive(Debug, Clone)]
pub struct VersionSpace {
    dim: usize,
    cone: Cone,
    nonempty: bool,
}

impl VersionSpace {
    pub fn from_system(system: &ConstraintSystem) -> Result<Self> {
        let dim = system.dim;
        let mut cone = Cone::full_space(dim + 1)?;

        // t >= 0 first, which keeps the lineality space inside {t = 0} from
        // here on.
        let mut slack = vec![BigInt::zero(); dim + 1];
        slack[dim] = BigInt::from(1);
        cone.add_halfspace(&slack)?;

        for form in &system.nonstrict {
            let mut coeffs = form.coeffs.primitive_integers();
            coeffs.push(BigInt::zero());
            cone.add_halfspace(&coeffs)?;
        }
        for form in &system.strict {
            let mut coords = form.coeffs.coords().to_vec();
            coords.push(-Rat::from_integer(1.into()));
            cone.add_halfspace(&RationalVector::new(coords).primitive_integers())?;
        }

        debug_assert!(cone
            .lineality()
            .iter()
            .all(|l| l[dim].is_zero()));
        let nonempty = cone.rays().any(|r| r[dim].is_positive());
        Ok(VersionSpace { dim, cone, nonempty })
    }

    pub fn from_transcript(
        transcript: &QueryTranscript,
        pool: &[RationalVector],
    ) -> Result<Self> {
        VersionSpace::from_system(&constraints_of(transcript, pool)?)
    }

    /// True iff no concept is consistent with the transcript.
    pub fn is_empty(&self) -> bool {
        !self.nonempty
    }

    /// Verdict for `x` by scanning the cone's description.
    ///
    /// With every consistent `w` a combination of lineality vectors and
    /// nonnegative ray multiples, `<w, x>` is pinned to a sign exactly when
    /// the lineality is orthogonal to `x` and the rays' `w`-parts agree in
    /// sign against `x`; a forced `-1` additionally requires that no cone
    /// point with `t > 0` sits on `<w, x> = 0`, i.e. no ray has both
    /// `t > 0` and `<r_w, x> = 0`.
    pub fn classify(&self, x: &RationalVector) -> Result<InferenceResult> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        if self.is_empty() {
            return Err(Error::InconsistentTranscript {
                context: "classify on an empty version space".into(),
            });
        }
        let xi = x.primitive_integers();
        let wdot = |v: &[BigInt]| -> BigInt {
            xi.iter().zip(v).map(|(a, b)| a * b).sum()
        };

        for l in self.cone.lineality() {
            if !wdot(l).is_zero() {
                return Ok(InferenceResult::Unknown);
            }
        }
        let mut any_neg = false;
        let mut any_pos = false;
        let mut zero_with_t = false;
        for r in self.cone.rays() {
            let s = wdot(r);
            if s.is_positive() {
                any_pos = true;
            } else if s.is_negative() {
                any_neg = true;
            } else if r[self.dim].is_positive() {
                zero_with_t = true;
            }
        }
        if !any_neg {
            Ok(InferenceResult::ForcedPositive)
        } else if !any_pos && !zero_with_t {
            Ok(InferenceResult::ForcedNegative)
        } else {
            Ok(InferenceResult::Unknown)
        }
    }
}

/// Verdicts for every target under one transcript, abstaining on Unknown.
pub fn infer_all(
    transcript: &QueryTranscript,
    pool: &[RationalVector],
    targets: &[usize],
) -> Result<PartialHypothesis> {
    let vs = VersionSpace::from_transcript(transcript, pool)?;
    if vs.is_empty() {
        return Err(Error::InconsistentTranscript {
            context: "infer_all".into(),
        });
    }
    let mut h = PartialHypothesis::new();
    for &id in targets {
        let x = pool.get(id).ok_or(Error::UnknownPointId(id))?;
        h.insert(id, vs.classify(x)?.forced_sign());
    }
    Ok(h)
}

/// Builds the feasibility system shared by the two cone rules.
///
/// Variables are `(alpha_1, .., alpha_{m-1}, s)` with `s > 0` a shared
/// homogenization slack: `x - x_1 = sum_i alpha_i (x_{i+1} - x_i)` becomes
/// the pair of non-strict inequalities per coordinate, and each lower bound
/// `alpha_i >= -eta` becomes `alpha_i + eta * s >= 0`.
fn cone_system(
    sorted_pts: &[RationalVector],
    x: &RationalVector,
    eta: &Rat,
) -> Result<ConstraintSystem> {
    let m = sorted_pts.len();
    if m < 2 {
        return Err(Error::TooFewConePoints(m));
    }
    if eta.is_negative() {
        return Err(Error::NegativeEta);
    }
    let d = sorted_pts[0].dim();
    let u = x.sub(&sorted_pts[0])?;
    let steps: Vec<RationalVector> = (0..m - 1)
        .map(|i| sorted_pts[i + 1].sub(&sorted_pts[i]))
        .collect::<Result<_>>()?;

    let vars = m; // m-1 alphas plus s
    let mut system = ConstraintSystem::new(vars);
    for c in 0..d {
        let mut row: Vec<Rat> = steps.iter().map(|v| v.coords()[c].clone()).collect();
        row.push(-u.coords()[c].clone());
        let form = RationalVector::new(row);
        system.push_nonstrict(LinearForm::new(form.clone()));
        system.push_nonstrict(LinearForm::new(
            form.scale(&-Rat::from_integer(1.into())),
        ));
    }
    for i in 0..m - 1 {
        let mut row = vec![Rat::zero(); vars];
        row[i] = Rat::from_integer(1.into());
        row[vars - 1] = eta.clone();
        system.push_nonstrict(LinearForm::new(RationalVector::new(row)));
    }
    let mut srow = vec![Rat::zero(); vars];
    srow[vars - 1] = Rat::from_integer(1.into());
    system.push_strict(LinearForm::new(RationalVector::new(srow)));
    Ok(system)
}

/// Cone rule: is `x - x_1` a nonnegative combination of the consecutive
/// differences of `sorted_pts`?
///
/// `sorted_pts` must all carry the label `y` and be ordered by nondecreasing
/// `|f|`; a true answer then certifies `c(x) = y` for every consistent
/// concept. The combination certificate itself is label-agnostic; `y` names
/// the label being inferred.
pub fn cone_infer(sorted_pts: &[RationalVector], y: Sign, x: &RationalVector) -> Result<bool> {
    let _ = y;
    let system = cone_system(sorted_pts, x, &Rat::zero())?;
    Ok(lp::feasible(&system)?.is_feasible())
}

/// Margin-relaxed cone rule: the combination may use `alpha_i >= -eta`.
///
/// Sound only under the promise that the hidden concept has minimal ratio
/// at least `eta` on the pool.
pub fn cone_infer_margin(
    sorted_pts: &[RationalVector],
    y: Sign,
    x: &RationalVector,
    eta: &Rat,
) -> Result<bool> {
    let _ = y;
    let system = cone_system(sorted_pts, x, eta)?;
    Ok(lp::feasible(&system)?.is_feasible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LinearConcept;
    use crate::query::SimulatedOracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn pts(rows: &[&[i64]]) -> Vec<RationalVector> {
        rows.iter().map(|r| RationalVector::from_ints(r)).collect()
    }

    fn random_instance(
        rng: &mut ChaCha12Rng,
        max_d: usize,
        max_n: usize,
    ) -> (Vec<RationalVector>, LinearConcept) {
        let d = rng.random_range(1..=max_d);
        let n = rng.random_range(1..=max_n);
        let pool: Vec<RationalVector> = (0..n)
            .map(|_| {
                RationalVector::from_ints(
                    &(0..d).map(|_| rng.random_range(-3..=3)).collect::<Vec<_>>(),
                )
            })
            .collect();
        let hidden = loop {
            let w: Vec<i64> = (0..d).map(|_| rng.random_range(-3..=3)).collect();
            if w.iter().any(|&c| c != 0) {
                break LinearConcept::from_ints(&w);
            }
        };
        (pool, hidden)
    }

    fn random_transcript(
        rng: &mut ChaCha12Rng,
        oracle: &mut SimulatedOracle,
        queries: usize,
    ) -> QueryTranscript {
        let n = oracle.pool_size();
        for _ in 0..queries {
            if rng.random_bool(0.5) {
                oracle.query_label(rng.random_range(0..n)).unwrap();
            } else {
                oracle
                    .query_compare(rng.random_range(0..n), rng.random_range(0..n))
                    .unwrap();
            }
        }
        oracle.transcript().clone()
    }

    #[test]
    fn empty_transcript_gives_empty_system() {
        let pool = pts(&[&[1, 0], &[0, 1]]);
        let sys = constraints_of(&QueryTranscript::new(), &pool).unwrap();
        assert!(sys.is_empty());
        assert_eq!(sys.dim, 2);
    }

    #[test]
    fn label_constraints_unfold_by_definition() {
        let pool = pts(&[&[1, 0], &[0, 1]]);
        let mut t = QueryTranscript::new();
        t.push(AnsweredQuery::Label { x: 0, sign: Sign::Pos });
        t.push(AnsweredQuery::Label { x: 1, sign: Sign::Neg });
        let sys = constraints_of(&t, &pool).unwrap();
        assert_eq!(sys.nonstrict, vec![LinearForm::from_ints(&[1, 0])]);
        assert_eq!(sys.strict, vec![LinearForm::from_ints(&[0, -1])]);
    }

    #[test]
    fn duplicate_entries_deduplicated() {
        let pool = pts(&[&[1, 2], &[0, 1]]);
        let mut t = QueryTranscript::new();
        for _ in 0..3 {
            t.push(AnsweredQuery::Label { x: 0, sign: Sign::Pos });
            t.push(AnsweredQuery::Compare { x1: 0, x2: 1, geq: true });
        }
        let sys = constraints_of(&t, &pool).unwrap();
        assert_eq!(sys.len(), 2);
    }

    #[test]
    fn hidden_concept_satisfies_its_own_transcript() {
        let mut rng = ChaCha12Rng::seed_from_u64(401);
        for _ in 0..200 {
            let (pool, hidden) = random_instance(&mut rng, 3, 6);
            let mut oracle = SimulatedOracle::new(hidden.clone(), pool.clone()).unwrap();
            let t = random_transcript(&mut rng, &mut oracle, 8);
            let sys = constraints_of(&t, &pool).unwrap();
            let w = RationalVector::new(hidden.weights().coords().to_vec());
            assert!(sys.satisfied_by(&w).unwrap());
            assert!(lp::feasible(&sys).unwrap().is_feasible());
        }
    }

    #[test]
    fn threshold_midpoint_is_forced() {
        // Lifted thresholds on the line: +1 at 1 and at 3 forces +1 at 2.
        let pool = pts(&[&[1, 1], &[2, 1], &[3, 1]]);
        let mut t = QueryTranscript::new();
        t.push(AnsweredQuery::Label { x: 0, sign: Sign::Pos });
        t.push(AnsweredQuery::Label { x: 2, sign: Sign::Pos });
        assert_eq!(
            infer_label(&t, &pool, 1).unwrap(),
            InferenceResult::ForcedPositive
        );
    }

    #[test]
    fn queried_points_are_inferred() {
        let pool = pts(&[&[2, -1], &[1, 1]]);
        let mut t = QueryTranscript::new();
        t.push(AnsweredQuery::Label { x: 0, sign: Sign::Pos });
        assert_eq!(
            infer_label(&t, &pool, 0).unwrap(),
            InferenceResult::ForcedPositive
        );
        assert_eq!(
            infer_label(&t, &pool, 1).unwrap(),
            InferenceResult::Unknown
        );
    }

    #[test]
    fn sum_of_positive_and_nonnegative_is_forced() {
        // w1 >= 0 and -w2 > 0 force <w, (1, -1)> = w1 - w2 > 0.
        let pool = pts(&[&[1, 0], &[0, 1], &[1, -1]]);
        let mut t = QueryTranscript::new();
        t.push(AnsweredQuery::Label { x: 0, sign: Sign::Pos });
        t.push(AnsweredQuery::Label { x: 1, sign: Sign::Neg });
        assert_eq!(
            infer_label(&t, &pool, 2).unwrap(),
            InferenceResult::ForcedPositive
        );
    }

    #[test]
    fn contradictory_transcript_is_reported() {
        let pool = pts(&[&[1, 1]]);
        let mut t = QueryTranscript::new();
        t.push(AnsweredQuery::Label { x: 0, sign: Sign::Pos });
        t.push(AnsweredQuery::Label { x: 0, sign: Sign::Neg });
        assert!(matches!(
            infer_label(&t, &pool, 0),
            Err(Error::InconsistentTranscript { .. })
        ));
        assert!(matches!(
            infer_all(&t, &pool, &[0]),
            Err(Error::InconsistentTranscript { .. })
        ));
    }

    #[test]
    fn empty_transcript_abstains_everywhere() {
        let pool = pts(&[&[1, 0], &[0, 1], &[-2, 3]]);
        let h = infer_all(&QueryTranscript::new(), &pool, &[0, 1, 2]).unwrap();
        assert_eq!(h.assigned_count(), 0);
        assert_eq!(coverage(&h, &[0, 1, 2]).unwrap(), Rat::zero());
    }

    #[test]
    fn fully_labeled_transcript_matches_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(409);
        for _ in 0..50 {
            let (pool, hidden) = random_instance(&mut rng, 3, 6);
            let mut oracle = SimulatedOracle::new(hidden.clone(), pool.clone()).unwrap();
            let targets: Vec<usize> = (0..pool.len()).collect();
            for &id in &targets {
                oracle.query_label(id).unwrap();
            }
            let h = infer_all(oracle.transcript(), &pool, &targets).unwrap();
            assert_eq!(h.assigned_count(), targets.len());
            for &id in &targets {
                assert_eq!(h.label(id).unwrap(), hidden.label_of(&pool[id]).unwrap());
            }
        }
    }

    /// The double-description batch path must agree with the per-point
    /// feasibility path on every verdict.
    #[test]
    fn batch_and_lp_paths_agree() {
        let mut rng = ChaCha12Rng::seed_from_u64(419);
        for _ in 0..150 {
            let (pool, hidden) = random_instance(&mut rng, 3, 6);
            let mut oracle = SimulatedOracle::new(hidden, pool.clone()).unwrap();
            let t = random_transcript(&mut rng, &mut oracle, 6);
            let targets: Vec<usize> = (0..pool.len()).collect();
            let h = infer_all(&t, &pool, &targets).unwrap();
            for &id in &targets {
                let by_lp = infer_label(&t, &pool, id).unwrap();
                assert_eq!(h.assignment(id).unwrap(), by_lp.forced_sign());
            }
        }
    }

    #[test]
    fn forced_verdicts_are_sound() {
        let mut rng = ChaCha12Rng::seed_from_u64(421);
        for _ in 0..150 {
            let (pool, hidden) = random_instance(&mut rng, 3, 6);
            let mut oracle = SimulatedOracle::new(hidden.clone(), pool.clone()).unwrap();
            let t = random_transcript(&mut rng, &mut oracle, 10);
            let targets: Vec<usize> = (0..pool.len()).collect();
            let h = infer_all(&t, &pool, &targets).unwrap();
            for &id in &targets {
                if let Some(sign) = h.label(id) {
                    assert_eq!(sign, hidden.label_of(&pool[id]).unwrap());
                }
            }
        }
    }

    #[test]
    fn forced_verdicts_are_monotone_under_extension() {
        let mut rng = ChaCha12Rng::seed_from_u64(431);
        for _ in 0..100 {
            let (pool, hidden) = random_instance(&mut rng, 3, 5);
            let mut oracle = SimulatedOracle::new(hidden, pool.clone()).unwrap();
            let before = random_transcript(&mut rng, &mut oracle, 5);
            let after = random_transcript(&mut rng, &mut oracle, 5);
            let targets: Vec<usize> = (0..pool.len()).collect();
            let h1 = infer_all(&before, &pool, &targets).unwrap();
            let h2 = infer_all(&after, &pool, &targets).unwrap();
            for &id in &targets {
                if let Some(sign) = h1.label(id) {
                    assert_eq!(h2.label(id), Some(sign), "forced verdict was lost");
                }
            }
        }
    }

    #[test]
    fn cone_infer_accepts_the_apex() {
        let pool = pts(&[&[1, 1], &[3, 1]]);
        assert!(cone_infer(&pool, Sign::Pos, &pool[0]).unwrap());
    }

    #[test]
    fn cone_infer_midpoint_example() {
        let pool = pts(&[&[1, 1], &[3, 1]]);
        let x = RationalVector::from_ints(&[2, 1]);
        assert!(cone_infer(&pool, Sign::Pos, &x).unwrap());
        let outside = RationalVector::from_ints(&[0, 1]);
        assert!(!cone_infer(&pool, Sign::Pos, &outside).unwrap());
    }

    #[test]
    fn cone_infer_needs_two_points() {
        let pool = pts(&[&[1, 1]]);
        let x = RationalVector::from_ints(&[2, 1]);
        assert!(matches!(
            cone_infer(&pool, Sign::Pos, &x),
            Err(Error::TooFewConePoints(1))
        ));
    }

    #[test]
    fn negative_eta_rejected() {
        let pool = pts(&[&[1, 1], &[3, 1]]);
        let x = RationalVector::from_ints(&[2, 1]);
        assert!(matches!(
            cone_infer_margin(&pool, Sign::Pos, &x, &crate::ratio(-1, 2)),
            Err(Error::NegativeEta)
        ));
    }

    /// Sorted prefix of a label class by |f|, plus the hidden concept.
    fn sorted_class(
        rng: &mut ChaCha12Rng,
    ) -> (Vec<RationalVector>, LinearConcept, Sign, Vec<RationalVector>) {
        loop {
            let (pool, hidden) = random_instance(rng, 3, 8);
            let y = if rng.random_bool(0.5) { Sign::Pos } else { Sign::Neg };
            let mut class: Vec<RationalVector> = pool
                .iter()
                .filter(|p| hidden.label_of(p).unwrap() == y)
                .cloned()
                .collect();
            if class.len() < 2 {
                continue;
            }
            class.sort_by_key(|p| hidden.eval(p).unwrap().abs());
            let rest: Vec<RationalVector> = pool
                .iter()
                .filter(|p| hidden.label_of(p).unwrap() != y)
                .cloned()
                .collect();
            return (class, hidden, y, rest);
        }
    }

    #[test]
    fn cone_verdicts_are_sound() {
        let mut rng = ChaCha12Rng::seed_from_u64(433);
        for _ in 0..200 {
            let (class, hidden, y, rest) = sorted_class(&mut rng);
            for x in class.iter().chain(&rest) {
                if cone_infer(&class, y, x).unwrap() {
                    assert_eq!(hidden.label_of(x).unwrap(), y);
                }
            }
        }
    }

    /// A true cone verdict must also be a forced verdict of the version
    /// space once the transcript holds the class labels and sorting
    /// comparisons.
    #[test]
    fn cone_rule_is_special_case_of_version_space() {
        let mut rng = ChaCha12Rng::seed_from_u64(439);
        for _ in 0..60 {
            let (class, hidden, y, rest) = sorted_class(&mut rng);
            let mut pool = class.clone();
            pool.extend(rest.iter().cloned());
            let mut oracle = SimulatedOracle::new(hidden, pool.clone()).unwrap();
            for i in 0..class.len() {
                oracle.query_label(i).unwrap();
            }
            // Consecutive comparisons certify the |f| order of the class.
            for i in 0..class.len() - 1 {
                match y {
                    Sign::Pos => oracle.query_compare(i + 1, i).unwrap(),
                    Sign::Neg => oracle.query_compare(i, i + 1).unwrap(),
                };
            }
            let t = oracle.transcript().clone();
            for (id, x) in pool.iter().enumerate() {
                if cone_infer(&class, y, x).unwrap() {
                    let verdict = infer_label(&t, &pool, id).unwrap();
                    assert_eq!(verdict.forced_sign(), Some(y));
                }
            }
        }
    }

    #[test]
    fn margin_rule_with_zero_eta_matches_cone_rule() {
        let mut rng = ChaCha12Rng::seed_from_u64(443);
        for _ in 0..100 {
            let (class, _, y, rest) = sorted_class(&mut rng);
            for x in class.iter().chain(&rest) {
                assert_eq!(
                    cone_infer(&class, y, x).unwrap(),
                    cone_infer_margin(&class, y, x, &Rat::zero()).unwrap()
                );
            }
        }
    }

    #[test]
    fn margin_rule_relaxes_monotonically() {
        let mut rng = ChaCha12Rng::seed_from_u64(449);
        for _ in 0..100 {
            let (class, _, y, rest) = sorted_class(&mut rng);
            let eta = crate::ratio(rng.random_range(0..=4), 4);
            for x in class.iter().chain(&rest) {
                if cone_infer(&class, y, x).unwrap() {
                    assert!(cone_infer_margin(&class, y, x, &eta).unwrap());
                }
            }
        }
    }

    #[test]
    fn coverage_examples() {
        let mut h = PartialHypothesis::new();
        for id in 0..4 {
            h.insert(id, None);
        }
        let targets = [0, 1, 2, 3];
        assert_eq!(coverage(&h, &targets).unwrap(), Rat::zero());
        h.insert(0, Some(Sign::Pos));
        h.insert(1, Some(Sign::Neg));
        h.insert(2, Some(Sign::Pos));
        assert_eq!(coverage(&h, &targets).unwrap(), crate::ratio(3, 4));
        h.insert(3, Some(Sign::Neg));
        assert_eq!(coverage(&h, &targets).unwrap(), crate::rat(1));
        assert!(matches!(coverage(&h, &[]), Err(Error::EmptyTargets)));
    }
}
