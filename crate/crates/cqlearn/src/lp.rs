//! Exact-rational feasibility for homogeneous systems of strict and
//! non-strict linear inequalities.
//!
//! A system asks for `w` with `<a, w> >= 0` for every non-strict form and
//! `<b, w> > 0` for every strict form. By positive homogeneity the strict
//! constraints are replaced by `<b, w> >= 1`, which turns the open problem
//! into a closed one with no epsilon tuning. The closed system is decided by
//! a phase-1 simplex with exact rationals and Bland's anti-cycling rule,
//! applied to its Farkas dual (`d + 1` tableau rows instead of one per
//! constraint); a feasible verdict always carries an exact witness.
//!
//! The engine is feasibility-only: no objective is ever optimized.

use crate::error::{Error, Result};
use crate::geometry::RationalVector;
use crate::Rat;
use num_traits::{One, Zero};

/// A linear functional `w -> <coeffs, w>` on the system's ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: RationalVector,
}

impl LinearForm {
    pub fn new(coeffs: RationalVector) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinearForm::new(RationalVector::from_ints(coeffs))
    }
}

/// A positively homogeneous system of linear inequalities on `w`.
#[derive(Debug, Clone, Default)]
pub struct ConstraintSystem {
    pub dim: usize,
    /// Each form requires `<a, w> >= 0`.
    pub nonstrict: Vec<LinearForm>,
    /// Each form requires `<b, w> > 0`.
    pub strict: Vec<LinearForm>,
}

impl ConstraintSystem {
    pub fn new(dim: usize) -> Self {
        ConstraintSystem {
            dim,
            nonstrict: Vec::new(),
            strict: Vec::new(),
        }
    }

    pub fn push_nonstrict(&mut self, form: LinearForm) {
        self.nonstrict.push(form);
    }

    pub fn push_strict(&mut self, form: LinearForm) {
        self.strict.push(form);
    }

    pub fn len(&self) -> usize {
        self.nonstrict.len() + self.strict.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::EmptyDimension);
        }
        for form in self.nonstrict.iter().chain(&self.strict) {
            if form.coeffs.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: form.coeffs.dim(),
                });
            }
        }
        Ok(())
    }

    /// True iff `w` satisfies every constraint exactly.
    pub fn satisfied_by(&self, w: &RationalVector) -> Result<bool> {
        self.validate()?;
        for form in &self.nonstrict {
            if form.coeffs.dot(w)? < Rat::zero() {
                return Ok(false);
            }
        }
        for form in &self.strict {
            if form.coeffs.dot(w)? <= Rat::zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of a feasibility call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// The witness satisfies every constraint exactly.
    Feasible(RationalVector),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&RationalVector> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// Decides whether some `w` satisfies all non-strict and strict constraints.
pub fn feasible(system: &ConstraintSystem) -> Result<Feasibility> {
    system.validate()?;
    let d = system.dim;
    if system.is_empty() {
        return Ok(Feasibility::Feasible(RationalVector::zero(d)));
    }

    // Closed rows: <row, w> >= rhs with rhs in {0, 1}.
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(system.len());
    let mut rhs: Vec<Rat> = Vec::with_capacity(system.len());
    for form in &system.nonstrict {
        rows.push(
            form.coeffs
                .primitive_integers()
                .into_iter()
                .map(Rat::from_integer)
                .collect(),
        );
        rhs.push(Rat::zero());
    }
    for form in &system.strict {
        rows.push(
            form.coeffs
                .primitive_integers()
                .into_iter()
                .map(Rat::from_integer)
                .collect(),
        );
        rhs.push(Rat::one());
    }

    match solve_closed(d, &rows, &rhs) {
        Some(witness) => {
            let w = RationalVector::new(witness);
            debug_assert!(system.satisfied_by(&w).unwrap());
            Ok(Feasibility::Feasible(w))
        }
        None => Ok(Feasibility::Infeasible),
    }
}

/// Finds `w` with `rows[i] . w >= rhs[i]` for all `i`, or None.
///
/// Farkas: the primal is infeasible iff some `y >= 0` has `rows^T y = 0` and
/// `rhs^T y = 1`. That dual system is decided by phase-1 simplex with Bland's
/// rule on a `(d+1) x m` tableau; when it is infeasible the final simplex
/// multipliers yield a primal witness.
fn solve_closed(d: usize, rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let m = rows.len();
    let height = d + 1; // equality rows of the dual system
    let width = m + height + 1; // y columns, artificials, rhs

    // tableau[i][j]: column j < m is constraint j's coefficients (transposed),
    // columns m..m+height are artificials, last column is the rhs (0,..,0,1).
    let mut t: Vec<Vec<Rat>> = (0..height)
        .map(|i| {
            let mut row: Vec<Rat> = Vec::with_capacity(width);
            for j in 0..m {
                row.push(if i < d { rows[j][i].clone() } else { rhs[j].clone() });
            }
            for k in 0..height {
                row.push(if k == i { Rat::one() } else { Rat::zero() });
            }
            row.push(if i == height - 1 { Rat::one() } else { Rat::zero() });
            row
        })
        .collect();
    let mut basis: Vec<usize> = (m..m + height).collect();

    loop {
        // Reduced cost of y column j is -sum of its entries over rows whose
        // basic variable is still artificial; entering columns have a
        // positive such sum. Bland: smallest eligible index.
        let mut entering = None;
        for j in 0..m {
            if basis.contains(&j) {
                continue;
            }
            let mut z = Rat::zero();
            for i in 0..height {
                if basis[i] >= m {
                    z += &t[i][j];
                }
            }
            if z > Rat::zero() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { break };

        // Ratio test; Bland tie-break on the smallest basic variable.
        let mut leave: Option<usize> = None;
        for i in 0..height {
            if t[i][j] > Rat::zero() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let cmp = (&t[i][width - 1] * &t[l][j])
                            .cmp(&(&t[l][width - 1] * &t[i][j]));
                        cmp == std::cmp::Ordering::Less
                            || (cmp == std::cmp::Ordering::Equal && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        // Phase-1 objective is bounded below by zero, so a pivot column
        // always has a positive entry.
        let l = leave.expect("phase-1 simplex: unbounded pivot column");

        let pivot = t[l][j].clone();
        for entry in t[l].iter_mut() {
            *entry /= &pivot;
        }
        for i in 0..height {
            if i != l && !t[i][j].is_zero() {
                let factor = t[i][j].clone();
                for col in 0..width {
                    let delta = &t[l][col] * &factor;
                    t[i][col] -= delta;
                }
            }
        }
        basis[l] = j;
    }

    // Remaining infeasibility of the dual system.
    let mut opt = Rat::zero();
    for i in 0..height {
        if basis[i] >= m {
            opt += &t[i][width - 1];
        }
    }
    if opt.is_zero() {
        // Dual system solvable: Farkas certificate of primal infeasibility.
        return None;
    }

    // Simplex multipliers pi_i = sum over artificial-basic rows of the
    // artificial column i; the witness is -pi[0..d] / pi[d].
    let mut pi: Vec<Rat> = vec![Rat::zero(); height];
    for (k, p) in pi.iter_mut().enumerate() {
        for i in 0..height {
            if basis[i] >= m {
                *p += &t[i][m + k];
            }
        }
    }
    debug_assert_eq!(pi[d], opt);
    Some((0..d).map(|i| -(&pi[i] / &pi[d])).collect())
}
