//! Instance generators and lower-bound witness certificates.
//!
//! Positive-side generators produce realizable pools with known structure:
//! integer grids (bounded bit complexity) and minimal-ratio pools (bounded
//! margin), each carrying the `k` its structure suggests for boosting.
//!
//! Negative-side generators build *witness instances*: a pool `x_1..x_n`
//! plus concepts `c_0..c_n` such that `c_0` and `c_i` answer every label and
//! comparison identically outside `x_i` yet disagree on `x_i`. A verified
//! witness certifies that no transcript avoiding `x_i` can infer its label,
//! i.e. the hosting class has inference dimension above `n - 1` and any
//! learner needs order-`n` queries on this pool.

use crate::error::{Error, Result};
use crate::geometry::{margin_report, LinearConcept, RationalVector};
use crate::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::HashSet;

/// Structural family of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceKind {
    /// Integer grid `[0, N]^d` (lifted to `d + 1` homogeneous coordinates).
    Grid { n_side: u64, d: usize },
    /// Pool with exact minimal ratio at least `eta`.
    Margin { eta: Rat },
    Custom,
}

/// A realizable labeled pool with generation metadata.
#[derive(Debug, Clone)]
pub struct Instance {
    pub pool: Vec<RationalVector>,
    pub hidden: LinearConcept,
    pub kind: InstanceKind,
    /// Inference-dimension budget suggested by the instance's structure.
    pub suggested_k: usize,
    /// Set when a parameter had to be adjusted (e.g. `n` clamped to the grid
    /// size).
    pub note: Option<String>,
}

/// Kind marker for witness instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessKind {
    /// Moment-curve construction in 3 dimensions; `m` is the certified base.
    R3 { m: BigInt },
    /// Bounded-margin construction in `n + 1` dimensions.
    Margin,
    /// Loaded from a file without structural metadata; margin checks are
    /// skipped.
    Custom,
}

/// Pool `x_1..x_n` with concepts `c_0..c_n`, `c_0` first.
#[derive(Debug, Clone)]
pub struct WitnessInstance {
    pub pool: Vec<RationalVector>,
    pub concepts: Vec<LinearConcept>,
    pub kind: WitnessKind,
}

impl WitnessInstance {
    pub fn n(&self) -> usize {
        self.pool.len()
    }
}

/// `ceil(16 d log2(4 N d))`, the grid's suggested boosting budget.
fn grid_k(n_side: u64, d: usize) -> usize {
    (16.0 * d as f64 * (4.0 * n_side as f64 * d as f64).log2()).ceil() as usize
}

/// `ceil(10 d log2(d+1) log2(2/eta))`, the margin pool's suggested budget.
fn margin_k(d: usize, eta: &Rat) -> usize {
    let eta_f = big_to_f64(eta.numer()) / big_to_f64(eta.denom());
    (10.0 * d as f64 * ((d + 1) as f64).log2() * (2.0 / eta_f).log2()).ceil() as usize
}

fn big_to_f64(x: &BigInt) -> f64 {
    // Good enough for k formulas; exactness is never needed here.
    x.to_string().parse::<f64>().unwrap_or(f64::MAX)
}

/// `n` distinct uniform points of the grid `[0, N]^d`, lifted to homogeneous
/// coordinates, with a hidden small-integer concept that is not constant on
/// the pool. `n` beyond the grid size is clamped with a note.
pub fn gen_grid(n_side: u64, d: usize, n: usize, seed: u64) -> Result<Instance> {
    if n_side < 1 || d < 1 || n < 1 {
        return Err(Error::InvalidParameter(
            "gen_grid needs N >= 1, d >= 1, n >= 1".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let grid_size = (n_side as u128 + 1)
        .checked_pow(d as u32)
        .unwrap_or(u128::MAX);
    let (n, note) = if (n as u128) >= grid_size {
        (
            grid_size as usize,
            Some(format!(
                "n clamped to the full grid size {grid_size} of [0,{n_side}]^{d}"
            )),
        )
    } else {
        (n, None)
    };

    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(n);
    let mut coords: Vec<Vec<u64>> = Vec::with_capacity(n);
    if n as u128 == grid_size {
        // Full grid, enumerated in row-major order.
        let mut cur = vec![0u64; d];
        loop {
            coords.push(cur.clone());
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                if cur[i] < n_side {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    } else {
        while coords.len() < n {
            let p: Vec<u64> = (0..d).map(|_| rng.random_range(0..=n_side)).collect();
            if seen.insert(p.clone()) {
                coords.push(p);
            }
        }
    }
    let pool: Vec<RationalVector> = coords
        .iter()
        .map(|p| {
            let ints: Vec<i64> = p.iter().map(|&c| c as i64).collect();
            RationalVector::from_ints(&ints).lift()
        })
        .collect();

    // Small random integer weights, redrawn until the labels are not all
    // equal (single-point pools are exempt — no split exists).
    let bound = 2 * n_side as i64 * d as i64;
    let mut hidden = None;
    for _ in 0..10_000 {
        let w: Vec<i64> = (0..=d).map(|_| rng.random_range(-bound..=bound)).collect();
        if w.iter().all(|&c| c == 0) {
            continue;
        }
        let candidate = LinearConcept::from_ints(&w);
        let mut labels = pool.iter().map(|p| candidate.label_of(p).unwrap());
        let first = labels.next().unwrap();
        if pool.len() == 1 || labels.any(|l| l != first) {
            hidden = Some(candidate);
            break;
        }
    }
    let Some(hidden) = hidden else {
        return Err(Error::RejectionBudgetExhausted { attempts: 10_000 });
    };

    Ok(Instance {
        pool,
        hidden,
        kind: InstanceKind::Grid { n_side, d },
        suggested_k: grid_k(n_side, d),
        note,
    })
}

/// Pool of `n` rational points in `[-1, 1]^d` whose minimal ratio under the
/// hidden concept is at least `eta_target`, exactly.
///
/// Each point is rejection-sampled until `|f(x)| >= eta_target * sum|w_i|`;
/// since `|f| <= sum|w_i|` on `[-1, 1]^d`, min|f|/max|f| >= eta_target
/// follows for the whole pool with no global retry.
pub fn gen_margin(d: usize, n: usize, eta_target: &Rat, seed: u64) -> Result<Instance> {
    if d < 1 || n < 1 {
        return Err(Error::InvalidParameter("gen_margin needs d >= 1, n >= 1".into()));
    }
    if !eta_target.is_positive() || eta_target > &Rat::one() {
        return Err(Error::InvalidParameter(
            "eta_target must satisfy 0 < eta <= 1".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let w: Vec<i64> = loop {
        let w: Vec<i64> = (0..d).map(|_| rng.random_range(-5..=5)).collect();
        if w.iter().any(|&c| c != 0) {
            break w;
        }
    };
    let hidden = LinearConcept::from_ints(&w);
    let weight_sum = Rat::from_integer(BigInt::from(w.iter().map(|c| c.abs()).sum::<i64>()));
    let floor = eta_target * &weight_sum;

    const DENOM: i64 = 8;
    const BUDGET: usize = 200_000;
    let mut attempts = 0usize;
    let mut pool = Vec::with_capacity(n);
    while pool.len() < n {
        if attempts >= BUDGET {
            return Err(Error::RejectionBudgetExhausted { attempts });
        }
        attempts += 1;
        let x = RationalVector::new(
            (0..d)
                .map(|_| crate::ratio(rng.random_range(-DENOM..=DENOM), DENOM))
                .collect(),
        );
        if hidden.eval(&x)?.abs() >= floor {
            pool.push(x);
        }
    }

    let report = margin_report(&hidden, &pool)?;
    debug_assert!(report.eta >= *eta_target);
    Ok(Instance {
        pool,
        hidden,
        kind: InstanceKind::Margin { eta: eta_target.clone() },
        suggested_k: margin_k(d, eta_target),
        note: None,
    })
}

/// `|g_i(j)|` in units of `M^j`: `|2 (j - i)^2 - 1|`, small enough for `i64`.
fn abs_unit(i: i64, j: i64) -> i64 {
    (2 * (j - i) * (j - i) - 1).abs()
}

/// Smallest power of two `M` such that `|g_i(1)| < ... < |g_i(n)|` for every
/// `0 <= i <= n`, where `|g_i(j)| = M^j |2 (j-i)^2 - 1|`. The inequality at
/// step `j` reduces to `|..|_j < M |..|_{j+1}` — no big powers needed.
fn find_r3_base(n: usize) -> BigInt {
    let n = n as i64;
    let mut m: i64 = 2;
    loop {
        let ok = (0..=n).all(|i| {
            (1..n).all(|j| abs_unit(i, j) < m.saturating_mul(abs_unit(i, j + 1)))
        });
        if ok {
            return BigInt::from(m);
        }
        m *= 2;
    }
}

/// Moment-curve witness in 3D: `x_j = (M^j, j M^j, j^2 M^j)` and concepts
/// `c_i` with weights `(2 i^2 - 1, -4 i, 2)`, so that
/// `f_i(x_j) = M^j (2 (j - i)^2 - 1)` — negative exactly at `j = i`, and
/// positive everywhere for `c_0`.
pub fn gen_lb_r3(n: usize) -> Result<WitnessInstance> {
    if n < 2 {
        return Err(Error::InvalidParameter("gen_lb_r3 needs n >= 2".into()));
    }
    let m = find_r3_base(n);
    let mut pool = Vec::with_capacity(n);
    let mut power = m.clone();
    for j in 1..=n as i64 {
        let coords = vec![
            Rat::from_integer(power.clone()),
            Rat::from_integer(&power * j),
            Rat::from_integer(&power * (j * j)),
        ];
        pool.push(RationalVector::new(coords));
        power *= &m;
    }
    let concepts = (0..=n as i64)
        .map(|i| LinearConcept::from_ints(&[2 * i * i - 1, -4 * i, 2]))
        .collect();
    Ok(WitnessInstance {
        pool,
        concepts,
        kind: WitnessKind::R3 { m },
    })
}

/// Bounded-margin witness in `n + 1` dimensions: `x_i = e_i + e_{n+1}`
/// (an overall `1/sqrt(2)` normalization is dropped — labels, comparisons,
/// and normalized margins are invariant under uniform positive scaling), and
///
/// - `w_0(j) = -j / (10 n^2)` for `j <= n`, `w_0(n+1) = -1/2`;
/// - `w_i` equals `w_0` except `w_i(i) = 1 + i / (10 n^2)`.
///
/// So `f_i = f_0` on all of the pool except `x_i`, where the sign flips, and
/// `|f_i(x_j)| = 1/2 + j/(10 n^2)` is independent of `i`.
pub fn gen_lb_margin(n: usize) -> Result<WitnessInstance> {
    if n < 2 {
        return Err(Error::InvalidParameter("gen_lb_margin needs n >= 2".into()));
    }
    let scale = BigInt::from(10 * (n as i64) * (n as i64));
    let base: Vec<Rat> = (1..=n as i64)
        .map(|j| -Rat::new(BigInt::from(j), scale.clone()))
        .chain(std::iter::once(crate::ratio(-1, 2)))
        .collect();

    let mut pool = Vec::with_capacity(n);
    for i in 0..n {
        let mut coords = vec![Rat::zero(); n + 1];
        coords[i] = Rat::one();
        coords[n] = Rat::one();
        pool.push(RationalVector::new(coords));
    }

    let mut concepts = Vec::with_capacity(n + 1);
    concepts.push(LinearConcept::new(RationalVector::new(base.clone())));
    for i in 1..=n {
        let mut w = base.clone();
        w[i - 1] = Rat::one() + Rat::new(BigInt::from(i as i64), scale.clone());
        concepts.push(LinearConcept::new(RationalVector::new(w)));
    }
    Ok(WitnessInstance {
        pool,
        concepts,
        kind: WitnessKind::Margin,
    })
}

/// Result of exact witness verification; clean iff `violations` is empty.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub n: usize,
    pub kind: WitnessKind,
    pub violations: Vec<String>,
    /// Smallest squared normalized margin over the concepts (margin
    /// witnesses only): the proof-level bound is 1/64, the report records the
    /// stronger value actually found.
    pub min_margin_sq: Option<Rat>,
}

impl VerificationReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, exactly, that every `c_i` (`i >= 1`) disagrees with `c_0` on
/// `x_i` and is indistinguishable from it on the rest: equal labels and
/// equal answers to every pairwise comparison within the pool minus `x_i`.
/// For margin witnesses also checks squared normalized margin >= 1/64.
pub fn verify_witness(w: &WitnessInstance) -> Result<VerificationReport> {
    let n = w.n();
    let mut violations = Vec::new();
    if w.concepts.len() != n + 1 {
        violations.push(format!(
            "expected {} concepts (c_0..c_{n}), got {}",
            n + 1,
            w.concepts.len()
        ));
        return Ok(VerificationReport {
            n,
            kind: w.kind.clone(),
            violations,
            min_margin_sq: None,
        });
    }

    // values[i][j] = f_i(x_j).
    let mut values: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
    for c in &w.concepts {
        values.push(w.pool.iter().map(|x| c.eval(x)).collect::<Result<_>>()?);
    }
    let label = |v: &Rat| !v.is_negative();

    for i in 1..=n {
        let xi = i - 1; // pool index of x_i
        if label(&values[0][xi]) == label(&values[i][xi]) {
            violations.push(format!("c_0 and c_{i} agree on x_{i}"));
        }
        for j in 0..n {
            if j == xi {
                continue;
            }
            if label(&values[0][j]) != label(&values[i][j]) {
                violations.push(format!("c_0 and c_{i} give different labels at x_{}", j + 1));
            }
        }
        for j in 0..n {
            for k in 0..n {
                if j == xi || k == xi || j == k {
                    continue;
                }
                let base = values[0][j] >= values[0][k];
                let alt = values[i][j] >= values[i][k];
                if base != alt {
                    violations.push(format!(
                        "c_0 and c_{i} answer compare(x_{}, x_{}) differently",
                        j + 1,
                        k + 1
                    ));
                }
            }
        }
    }

    let mut min_margin_sq = None;
    if w.kind == WitnessKind::Margin {
        let bound = crate::ratio(1, 64);
        let mut min_seen: Option<Rat> = None;
        for (i, c) in w.concepts.iter().enumerate() {
            let report = margin_report(c, &w.pool)?;
            if report.gamma_over_rho_sq < bound {
                violations.push(format!(
                    "c_{i} has squared normalized margin below 1/64"
                ));
            }
            min_seen = Some(match min_seen {
                None => report.gamma_over_rho_sq,
                Some(cur) => cur.min(report.gamma_over_rho_sq),
            });
        }
        min_margin_sq = min_seen;
    }

    Ok(VerificationReport {
        n,
        kind: w.kind.clone(),
        violations,
        min_margin_sq,
    })
}
