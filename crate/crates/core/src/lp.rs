//! Exact rational linear feasibility and optimization over a
//! [`ConstraintSystem`] with nonnegative variables.
//!
//! The solver works on a dense simplex tableau of rationals and never
//! rounds. Feasibility is decided in two stages:
//!
//!   1. an exact Gauss-Jordan crash with sparsity-guided (Markowitz-style)
//!      pivot selection builds a basis out of structural columns, dropping
//!      redundant rows and detecting inconsistent equality combinations
//!      outright;
//!   2. when some basic values come out negative, one artificial column
//!      covering exactly the negative rows is entered and minimized by
//!      primal phase-one pivoting, starting from an otherwise structural
//!      basis.
//!
//! Infeasibility yields a Farkas certificate from one exact linear solve
//! against the final basis, and every certificate is re-verified against
//! the original rows before it is returned. Optimization runs ordinary
//! primal pivoting from the repaired basis. Heuristic pivot choices
//! (guaranteed-improvement columns, Dantzig pricing) are used while they
//! make progress; after a fixed number of stalled pivots the solver drops
//! to Bland's rule, which cannot cycle, so every solve terminates. All
//! choices are index-deterministic: identical systems yield identical
//! outcomes, witnesses and certificates.

use num::traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::polytope::{ConstraintSystem, Relation};
use crate::ratmat::Rat;

/// Default pivot budget; a solve that exceeds it reports a resource error
/// instead of spinning.
pub const DEFAULT_PIVOT_CAP: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub pivot_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pivot_cap: DEFAULT_PIVOT_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("pivot cap {cap} exceeded")]
    PivotCapExceeded { cap: usize },
    #[error("objective requested over an infeasible system")]
    InfeasibleInput,
    #[error("objective is unbounded over the feasible set")]
    Unbounded,
    #[error("malformed system: {0}")]
    BadSystem(String),
}

/// Row multipliers that combine the system's rows into a contradiction:
/// multipliers of `Le` rows are nonnegative, the combined coefficient of
/// every variable is nonnegative, and the combined right-hand side is
/// negative. Against x >= 0 this is impossible, so the system is infeasible.
#[derive(Debug, Clone)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Feasible { witness: Vec<Rat> },
    Infeasible { certificate: FarkasCertificate },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Feasible { witness } => Some(witness),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match self {
            LpOutcome::Feasible { .. } => None,
            LpOutcome::Infeasible { certificate } => Some(certificate),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpOptimum {
    pub value: Rat,
    pub argmax: Vec<Rat>,
}

/// Decides feasibility of `sys` with all variables >= 0.
pub fn solve_feasibility(sys: &ConstraintSystem) -> Result<LpOutcome, LpError> {
    solve_feasibility_with(sys, &SolveOptions::default())
}

pub fn solve_feasibility_with(
    sys: &ConstraintSystem,
    opts: &SolveOptions,
) -> Result<LpOutcome, LpError> {
    let mut tab = Tableau::build(sys, opts)?;
    let trace = std::env::var_os("LP_TRACE").is_some();
    let t0 = std::time::Instant::now();
    let crashed = tab.crash()?;
    if trace {
        eprintln!("crash took {:?}", t0.elapsed());
    }
    match crashed {
        Crash::Inconsistent { certificate } => Ok(LpOutcome::Infeasible { certificate }),
        Crash::Basic => match tab.repair()? {
            Repair::Feasible => Ok(LpOutcome::Feasible {
                witness: tab.witness(),
            }),
            Repair::Infeasible { certificate } => Ok(LpOutcome::Infeasible { certificate }),
        },
    }
}

/// Exact maximum of a linear objective over the (bounded) feasible set.
pub fn maximize(sys: &ConstraintSystem, objective: &[(usize, Rat)]) -> Result<LpOptimum, LpError> {
    maximize_with(sys, objective, &SolveOptions::default())
}

pub fn maximize_with(
    sys: &ConstraintSystem,
    objective: &[(usize, Rat)],
    opts: &SolveOptions,
) -> Result<LpOptimum, LpError> {
    for (v, _) in objective {
        if *v >= sys.num_vars {
            return Err(LpError::BadSystem(format!(
                "objective references variable {v} but the system has {} variables",
                sys.num_vars
            )));
        }
    }
    let mut tab = Tableau::build(sys, opts)?;
    match tab.crash()? {
        Crash::Inconsistent { .. } => Err(LpError::InfeasibleInput),
        Crash::Basic => match tab.repair()? {
            Repair::Infeasible { .. } => Err(LpError::InfeasibleInput),
            Repair::Feasible => {
                tab.primal_maximize(objective)?;
                Ok(LpOptimum {
                    value: tab.objective_value(),
                    argmax: tab.witness(),
                })
            }
        },
    }
}

/// Re-multiplies a Farkas certificate against the rows of `sys`, with no
/// recourse to the solver. Returns a description of the first failure.
pub fn verify_certificate(sys: &ConstraintSystem, cert: &FarkasCertificate) -> Result<(), String> {
    if cert.multipliers.len() != sys.rows.len() {
        return Err(format!(
            "certificate has {} multipliers for {} rows",
            cert.multipliers.len(),
            sys.rows.len()
        ));
    }
    let mut combined = vec![Rat::zero(); sys.num_vars];
    let mut rhs = Rat::zero();
    for (row, mult) in sys.rows.iter().zip(&cert.multipliers) {
        if mult.is_zero() {
            continue;
        }
        if row.relation == Relation::Le && mult.is_negative() {
            return Err("negative multiplier on a <= row".into());
        }
        for (v, c) in &row.coeffs {
            combined[*v] += mult * c;
        }
        rhs += mult * &row.rhs;
    }
    if let Some(v) = combined.iter().position(|c| c.is_negative()) {
        return Err(format!("combined coefficient of variable {v} is negative"));
    }
    if !rhs.is_negative() {
        return Err(format!("combined right-hand side {rhs} is not negative"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tableau
// ---------------------------------------------------------------------------

enum Crash {
    Basic,
    Inconsistent { certificate: FarkasCertificate },
}

enum Repair {
    Feasible,
    Infeasible { certificate: FarkasCertificate },
}

/// Materialized columns are the structural variables followed by one slack
/// per inequality row. Rows are normalized so that the right-hand side of
/// every original row is nonnegative (inequalities flip to their slack's
/// disadvantage and `row_sign` remembers the flip).
struct Tableau<'a> {
    sys: &'a ConstraintSystem,
    nstruct: usize,
    /// Materialized columns: structural variables then slacks. Column
    /// `ncols` is reserved for the single repair artificial, `ncols + 1`
    /// holds the rhs.
    ncols: usize,
    rhs_col: usize,
    /// Rows negative after the crash (the artificial's support) paired
    /// with their crash-basis columns, recorded before any repair pivot.
    art_support: Vec<(usize, usize)>,
    /// Active tableau rows.
    rows: Vec<Vec<Rat>>,
    /// Reduced-cost row for the primal phase; last entry is minus the
    /// objective value. All zero during crash and repair.
    obj: Vec<Rat>,
    /// Basic column of each active row (set during the crash).
    basis: Vec<usize>,
    /// Original row index of each active row (redundant rows are dropped).
    row_of: Vec<usize>,
    /// Sign applied to each original row to make its rhs nonnegative.
    row_sign: Vec<i32>,
    /// Normalized original rows and right-hand sides, in original row
    /// order, kept for certificate extraction.
    orig: Vec<Vec<(usize, Rat)>>,
    norm_rhs: Vec<Rat>,
    /// Devex-style pricing weights. Heuristic only: they influence which
    /// pivot is taken, never the arithmetic, so exactness is unaffected.
    weight: Vec<f64>,
    pivots: usize,
    cap: usize,
}

impl<'a> Tableau<'a> {
    fn build(sys: &'a ConstraintSystem, opts: &SolveOptions) -> Result<Self, LpError> {
        let m = sys.rows.len();
        for (i, row) in sys.rows.iter().enumerate() {
            if row.coeffs.iter().any(|(v, _)| *v >= sys.num_vars) {
                return Err(LpError::BadSystem(format!(
                    "row {i} references a variable out of range"
                )));
            }
        }
        let nslack = sys
            .rows
            .iter()
            .filter(|r| r.relation == Relation::Le)
            .count();
        let nstruct = sys.num_vars;
        let ncols = nstruct + nslack;

        let rhs_col = ncols + 1;
        let mut rows = Vec::with_capacity(m);
        let mut orig = Vec::with_capacity(m);
        let mut norm_rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut next_slack = nstruct;

        for row in &sys.rows {
            let flip = row.rhs.is_negative();
            let sign = if flip { -1 } else { 1 };
            let mut dense = vec![Rat::zero(); rhs_col + 1];
            let mut sparse = Vec::with_capacity(row.coeffs.len() + 1);
            for (v, c) in &row.coeffs {
                let val = if flip { -c.clone() } else { c.clone() };
                dense[*v] = val.clone();
                sparse.push((*v, val));
            }
            let rhs = if flip { -row.rhs.clone() } else { row.rhs.clone() };
            dense[rhs_col] = rhs.clone();
            if row.relation == Relation::Le {
                let sc = next_slack;
                next_slack += 1;
                let coef = if flip { -Rat::one() } else { Rat::one() };
                dense[sc] = coef.clone();
                sparse.push((sc, coef));
            }
            rows.push(dense);
            orig.push(sparse);
            norm_rhs.push(rhs);
            row_sign.push(sign);
        }

        Ok(Tableau {
            sys,
            nstruct,
            ncols,
            rhs_col,
            art_support: Vec::new(),
            rows,
            obj: vec![Rat::zero(); rhs_col + 1],
            basis: Vec::new(),
            row_of: (0..m).collect(),
            row_sign,
            orig,
            norm_rhs,
            weight: vec![1.0; ncols],
            pivots: 0,
            cap: opts.pivot_cap,
        })
    }

    /// Gauss-Jordan elimination onto a basis of materialized columns,
    /// picking at each step the sparsest eligible row and, within it, the
    /// column with the fewest nonzeros (ties by lowest index), which keeps
    /// fill-in and coefficient growth down. Rows reduced to 0 = 0 are
    /// dropped as redundant; a row reduced to 0 = c with c != 0 proves the
    /// system infeasible and is turned into a Farkas certificate.
    /// Afterwards `basis[r]` is the unit column of active row r and the
    /// rhs column holds the (sign-free) basic values.
    fn crash(&mut self) -> Result<Crash, LpError> {
        let m = self.rows.len();
        let mut processed = vec![false; m];
        let mut active: Vec<usize> = Vec::new();
        let mut basis: Vec<usize> = Vec::new();
        let mut col_count = vec![0usize; self.ncols];
        for row in &self.rows {
            for (j, cc) in col_count.iter_mut().enumerate() {
                if !row[j].is_zero() {
                    *cc += 1;
                }
            }
        }
        let row_nnz = |row: &[Rat]| -> usize {
            row[..self.ncols].iter().filter(|v| !v.is_zero()).count()
        };
        loop {
            // sparsest unprocessed row with support; empty rows are settled
            // immediately (redundant or inconsistent)
            let mut pick: Option<(usize, usize)> = None; // (nnz, row)
            for r in 0..m {
                if processed[r] {
                    continue;
                }
                let nnz = row_nnz(&self.rows[r]);
                if nnz == 0 {
                    if !self.rows[r][self.rhs_col].is_zero() {
                        let certificate = self.crash_certificate(r, &active, &basis)?;
                        return Ok(Crash::Inconsistent { certificate });
                    }
                    processed[r] = true; // redundant
                    continue;
                }
                if pick.is_none_or(|(best, _)| nnz < best) {
                    pick = Some((nnz, r));
                }
            }
            let Some((_, r)) = pick else {
                break;
            };
            processed[r] = true;
            let pc = (0..self.ncols)
                .filter(|&j| !self.rows[r][j].is_zero())
                .min_by_key(|&j| (col_count[j], j))
                .expect("picked row has support");

            let p = self.rows[r][pc].clone();
            if !p.is_one() {
                for v in self.rows[r].iter_mut() {
                    if !v.is_zero() {
                        *v /= &p;
                    }
                }
            }
            let nz = row_nonzeros(&self.rows[r]);
            for i in 0..m {
                if i == r || self.rows[i][pc].is_zero() {
                    continue;
                }
                let f = self.rows[i][pc].clone();
                // maintain column occupancy counts across the update
                for (j, _) in &nz {
                    if *j < self.ncols && !self.rows[i][*j].is_zero() {
                        col_count[*j] -= 1;
                    }
                }
                eliminate_row(&mut self.rows[i], &f, &nz);
                self.rows[i][pc] = Rat::zero();
                for (j, _) in &nz {
                    if *j < self.ncols && !self.rows[i][*j].is_zero() {
                        col_count[*j] += 1;
                    }
                }
            }
            active.push(r);
            basis.push(pc);
        }
        // keep tableau rows in original relative order for determinism
        let mut order: Vec<usize> = (0..active.len()).collect();
        order.sort_by_key(|&s| active[s]);
        if std::env::var_os("LP_TRACE").is_some() {
            eprintln!(
                "crash done: rank {} of {} rows, neg_rhs={}",
                active.len(),
                m,
                active
                    .iter()
                    .filter(|&&r| self.rows[r][self.rhs_col].is_negative())
                    .count()
            );
        }
        let mut new_rows = Vec::with_capacity(active.len());
        let mut new_row_of = Vec::with_capacity(active.len());
        let mut new_basis = Vec::with_capacity(active.len());
        for &s in &order {
            new_rows.push(std::mem::take(&mut self.rows[active[s]]));
            new_row_of.push(self.row_of[active[s]]);
            new_basis.push(basis[s]);
        }
        self.rows = new_rows;
        self.row_of = new_row_of;
        self.basis = new_basis;
        Ok(Crash::Basic)
    }

    /// Certificate for a row that the crash reduced to 0 = c, c != 0. The
    /// reduced row is original row `r` plus a combination of the pivot
    /// rows found so far; the combination coefficients solve a small
    /// linear system over the pivot columns.
    fn crash_certificate(
        &self,
        r: usize,
        active: &[usize],
        basis: &[usize],
    ) -> Result<FarkasCertificate, LpError> {
        let k = active.len();
        // alpha solves: orig_r[pc_q] + sum_p alpha_p * orig_{active_p}[pc_q] = 0
        let mut mat = vec![vec![Rat::zero(); k]; k];
        let mut rhs = vec![Rat::zero(); k];
        for (q, &pc) in basis.iter().enumerate() {
            for (p, &ap) in active.iter().enumerate() {
                if let Some((_, c)) = self.orig[self.row_of[ap]].iter().find(|(v, _)| *v == pc) {
                    mat[q][p] = c.clone();
                }
            }
            if let Some((_, c)) = self.orig[self.row_of[r]].iter().find(|(v, _)| *v == pc) {
                rhs[q] = -c.clone();
            }
        }
        let alpha = gaussian_solve(mat, rhs)
            .ok_or_else(|| LpError::BadSystem("crash certificate solve failed".into()))?;
        let total = self.sys.rows.len();
        let mut y = vec![Rat::zero(); total];
        y[self.row_of[r]] = Rat::one();
        for (p, &ap) in active.iter().enumerate() {
            y[self.row_of[ap]] = alpha[p].clone();
        }
        // orient so the combined rhs comes out negative, then map back
        // through the row signs
        let combined_rhs: Rat = y
            .iter()
            .zip(&self.norm_rhs)
            .map(|(yi, bi)| yi * bi)
            .sum();
        debug_assert!(!combined_rhs.is_zero());
        let flip = combined_rhs.is_positive();
        let multipliers = y
            .into_iter()
            .enumerate()
            .map(|(i, yi)| {
                let v = if flip { -yi } else { yi };
                if self.row_sign[i] < 0 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let cert = FarkasCertificate { multipliers };
        verify_certificate(self.sys, &cert)
            .map_err(|e| LpError::BadSystem(format!("internal: crash certificate invalid: {e}")))?;
        Ok(cert)
    }

    /// Repairs negative basic values by classic single-artificial primal
    /// phase one: one artificial column with a -1 in exactly the negative
    /// rows enters at the most negative row (making the whole rhs
    /// nonnegative), then its value is minimized by primal pivoting. Value
    /// zero at the optimum means feasible; a positive optimum turns the
    /// final basis into a Farkas certificate.
    fn repair(&mut self) -> Result<Repair, LpError> {
        let m = self.rows.len();
        self.art_support = (0..m)
            .filter(|&r| self.rows[r][self.rhs_col].is_negative())
            .map(|r| (r, self.basis[r]))
            .collect();
        if self.art_support.is_empty() {
            return Ok(Repair::Feasible);
        }
        let mut worst = self.art_support[0].0;
        for &(r, _) in &self.art_support {
            self.rows[r][self.ncols] = -Rat::one();
            if self.rows[r][self.rhs_col] < self.rows[worst][self.rhs_col] {
                worst = r;
            }
        }
        self.pivot(worst, self.ncols)?;
        debug_assert!(self
            .rows
            .iter()
            .all(|row| !row[self.rhs_col].is_negative()));

        // minimize the artificial: cost 1 on its column, priced out
        let nz = row_nonzeros(&self.rows[worst]);
        for v in self.obj.iter_mut() {
            *v = Rat::zero();
        }
        self.obj[self.ncols] = Rat::one();
        for (j, val) in nz {
            self.obj[j] -= val;
        }
        self.primal_iterate(true)?;

        if self.obj[self.rhs_col].is_zero() {
            // the artificial sits at value zero (or left the basis); pivot
            // it out if it is still basic so later phases never see it
            if let Some(r) = (0..m).find(|&r| self.basis[r] == self.ncols) {
                debug_assert!(self.rows[r][self.rhs_col].is_zero());
                if let Some(e) = (0..self.ncols).find(|&j| !self.rows[r][j].is_zero()) {
                    self.pivot(r, e)?;
                } else {
                    // the artificial spans nothing structural; the row is
                    // 0 = 0 in disguise and can be dropped
                    self.rows.remove(r);
                    self.basis.remove(r);
                    self.row_of.remove(r);
                }
            }
            return Ok(Repair::Feasible);
        }
        let certificate = self.phase_one_certificate()?;
        Ok(Repair::Infeasible { certificate })
    }

    /// Farkas certificate at a phase-one optimum with positive value:
    /// y solves y^T B = c_B for the final basis B (the artificial's
    /// original-space column is reconstructed from the crash basis), and
    /// then y^T A_j <= 0 for every materialized column with y^T b > 0.
    fn phase_one_certificate(&self) -> Result<FarkasCertificate, LpError> {
        let m = self.rows.len();
        let mut bt = vec![vec![Rat::zero(); m]; m];
        let mut cb = vec![Rat::zero(); m];
        for (s, &col) in self.basis.iter().enumerate() {
            if col == self.ncols {
                // artificial column in original coordinates
                for (i, v) in self.artificial_original_column() {
                    bt[s][i] = v;
                }
                cb[s] = Rat::one();
            } else {
                for i in 0..m {
                    if let Some((_, c)) =
                        self.orig[self.row_of[i]].iter().find(|(v, _)| *v == col)
                    {
                        bt[s][i] = c.clone();
                    }
                }
            }
        }
        let y = gaussian_solve(bt, cb)
            .ok_or_else(|| LpError::BadSystem("phase-one certificate solve failed".into()))?;
        let total = self.sys.rows.len();
        let mut multipliers = vec![Rat::zero(); total];
        for (i, yi) in y.into_iter().enumerate() {
            let oi = self.row_of[i];
            multipliers[oi] = if self.row_sign[oi] < 0 { yi } else { -yi };
        }
        let cert = FarkasCertificate { multipliers };
        verify_certificate(self.sys, &cert).map_err(|e| {
            LpError::BadSystem(format!("internal: phase-one certificate invalid: {e}"))
        })?;
        Ok(cert)
    }

    /// The artificial's column expressed over the active rows in original
    /// coordinates: -1 on each support row, mapped through the crash basis,
    /// i.e. minus the sum of the support rows' basis columns at crash time.
    /// Equivalently, in the *normalized row* coordinate system the column
    /// is: column_i = -[i in support] pushed through B_crash. Since the
    /// crash left basis column b_r as the unit vector of row r, the
    /// artificial's original column is -sum over support rows of the
    /// original column of that row's crash-basis variable.
    fn artificial_original_column(&self) -> Vec<(usize, Rat)> {
        let mut acc = vec![Rat::zero(); self.rows.len()];
        for &(_, col) in &self.art_support {
            for i in 0..self.rows.len() {
                if let Some((_, c)) = self.orig[self.row_of[i]].iter().find(|(v, _)| *v == col) {
                    acc[i] -= c;
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Installs the phase-two objective (maximize `objective`) and runs
    /// primal simplex from the current (feasible) basis.
    fn primal_maximize(&mut self, objective: &[(usize, Rat)]) -> Result<(), LpError> {
        // minimize -objective, pricing out the current basis
        let mut cost = vec![Rat::zero(); self.rhs_col + 1];
        for (v, c) in objective {
            cost[*v] -= c;
        }
        self.obj = cost.clone();
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if !cost[b].is_zero() {
                let f = cost[b].clone();
                let nz = row_nonzeros(&self.rows[r]);
                for (j, v) in nz {
                    self.obj[j] -= &f * &v;
                }
            }
        }
        self.primal_iterate(false)
    }

    /// Primal pivoting to optimality. Entering picks the best devex score
    /// among columns with an exactly negative reduced cost, preferring
    /// columns whose ratio test is guaranteed positive (no blocking
    /// zero-rhs row), which strictly improves the objective. After a stall
    /// the selection drops to Bland's rule, which cannot cycle, so the
    /// iteration terminates.
    fn primal_iterate(&mut self, stop_at_zero: bool) -> Result<(), LpError> {
        const STALL_LIMIT: usize = 64;
        let m = self.rows.len();
        let mut bland = false;
        let mut stalled = 0usize;
        loop {
            if stop_at_zero && self.obj[self.rhs_col].is_zero() {
                return Ok(());
            }
            let entering = if bland {
                (0..self.ncols).find(|&j| self.obj[j].is_negative())
            } else {
                let rhs_zero: Vec<bool> = (0..m)
                    .map(|r| self.rows[r][self.rhs_col].is_zero())
                    .collect();
                let mut best: Option<(usize, f64)> = None;
                let mut best_unblocked: Option<(usize, f64)> = None;
                for j in 0..self.ncols {
                    if !self.obj[j].is_negative() {
                        continue;
                    }
                    let d = self.obj[j].to_f64().unwrap_or(-1.0).min(-f64::MIN_POSITIVE);
                    let score = d * d / self.weight[j];
                    if best.is_none_or(|(_, s)| score > s) {
                        best = Some((j, score));
                    }
                    if best_unblocked.is_none_or(|(_, s)| score > s) {
                        let mut has_positive = false;
                        let mut blocked = false;
                        for r in 0..m {
                            if self.rows[r][j].is_positive() {
                                has_positive = true;
                                if rhs_zero[r] {
                                    blocked = true;
                                    break;
                                }
                            }
                        }
                        if has_positive && !blocked {
                            best_unblocked = Some((j, score));
                        }
                    }
                }
                best_unblocked.or(best).map(|(j, _)| j)
            };
            let Some(e) = entering else {
                return Ok(());
            };
            // minimum-ratio test; ratios b_r / a_re compared by
            // cross-multiplication to avoid forming quotients. Ties go to
            // the largest pivot entry (lowest basic id under Bland).
            let mut leave: Option<usize> = None;
            for r in 0..m {
                let a = &self.rows[r][e];
                if !a.is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(best) => {
                        let lhs = &self.rows[r][self.rhs_col] * &self.rows[best][e];
                        let rhs = &self.rows[best][self.rhs_col] * a;
                        match lhs.cmp(&rhs) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Greater => false,
                            std::cmp::Ordering::Equal => {
                                if bland {
                                    self.basis[r] < self.basis[best]
                                } else {
                                    a > &self.rows[best][e]
                                }
                            }
                        }
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            let Some(r) = leave else {
                return Err(LpError::Unbounded);
            };
            let before = self.obj[self.rhs_col].clone();
            self.pivot(r, e)?;
            if self.obj[self.rhs_col] == before {
                stalled += 1;
                if stalled >= STALL_LIMIT {
                    bland = true;
                }
            } else {
                stalled = 0;
                bland = false;
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > self.cap {
            return Err(LpError::PivotCapExceeded { cap: self.cap });
        }
        if std::env::var_os("LP_TRACE").is_some() && self.pivots % 10 == 0 {
            let mut nnz = 0usize;
            let mut max_bits = 0u64;
            for row in &self.rows {
                for v in row {
                    if !v.is_zero() {
                        nnz += 1;
                        let b = v.numer().magnitude().bits().max(v.denom().magnitude().bits());
                        max_bits = max_bits.max(b);
                    }
                }
            }
            eprintln!(
                "pivot {} obj={} nnz={} maxbits={}",
                self.pivots, self.obj[self.rhs_col], nnz, max_bits
            );
        }
        let p = self.rows[r][e].clone();
        debug_assert!(!p.is_zero());
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_nonzeros = row_nonzeros(&self.rows[r]);
        if e < self.ncols {
            let we = self.weight[e].max(1.0);
            let mut overflow = false;
            for (j, pv) in &pivot_nonzeros {
                if *j < self.ncols && *j != e {
                    let p = pv.to_f64().unwrap_or(1e3);
                    let cand = p * p * we;
                    if cand > self.weight[*j] {
                        self.weight[*j] = cand;
                        overflow |= cand > 1e12;
                    }
                }
            }
            if overflow {
                self.weight.iter_mut().for_each(|w| *w = 1.0);
            }
        }
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][e].clone();
            if f.is_zero() {
                continue;
            }
            eliminate_row(&mut self.rows[i], &f, &pivot_nonzeros);
            self.rows[i][e] = Rat::zero();
        }
        let f = self.obj[e].clone();
        if !f.is_zero() {
            eliminate_row(&mut self.obj, &f, &pivot_nonzeros);
            self.obj[e] = Rat::zero();
        }
        self.basis[r] = e;
        Ok(())
    }

    /// Structural variable values of the current basic solution.
    fn witness(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.nstruct];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.nstruct {
                x[b] = self.rows[r][self.rhs_col].clone();
            }
        }
        x
    }

    fn objective_value(&self) -> Rat {
        // primal phase minimizes the negated objective; obj[rhs] holds its
        // negated value, which is the maximum of the original
        self.obj[self.rhs_col].clone()
    }
}

fn row_nonzeros(row: &[Rat]) -> Vec<(usize, Rat)> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (j, v.clone()))
        .collect()
}

/// `row -= f * pivot_row`, walking only the pivot row's nonzeros.
fn eliminate_row(row: &mut [Rat], f: &Rat, pivot_nonzeros: &[(usize, Rat)]) {
    if f.is_one() {
        for (j, pv) in pivot_nonzeros {
            row[*j] -= pv;
        }
    } else {
        for (j, pv) in pivot_nonzeros {
            if pv.is_one() {
                row[*j] -= f;
            } else {
                row[*j] -= f * pv;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Exact dense linear algebra helpers
// ---------------------------------------------------------------------------

/// Solves the square system `a x = rhs` by Gauss-Jordan elimination; None
/// if singular. Consumes its inputs.
fn gaussian_solve(mut a: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let m = a.len();
    let mut piv_row_of_col = vec![usize::MAX; m];
    let mut used = vec![false; m];
    for col in 0..m {
        let r = (0..m).find(|&r| !used[r] && !a[r][col].is_zero())?;
        used[r] = true;
        piv_row_of_col[col] = r;
        let p = a[r][col].clone();
        if !p.is_one() {
            for v in a[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            rhs[r] /= &p;
        }
        let pivot_nonzeros = row_nonzeros(&a[r]);
        let pivot_rhs = rhs[r].clone();
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = a[i][col].clone();
            if f.is_zero() {
                continue;
            }
            eliminate_row(&mut a[i], &f, &pivot_nonzeros);
            a[i][col] = Rat::zero();
            if !pivot_rhs.is_zero() {
                let d = &f * &pivot_rhs;
                rhs[i] -= d;
            }
        }
    }
    let mut x = vec![Rat::zero(); m];
    for (col, x_slot) in x.iter_mut().enumerate() {
        *x_slot = rhs[piv_row_of_col[col]].clone();
    }
    Some(x)
}

/// Indices of a maximal linearly independent subset of the rows of `a`
/// (dense row-major), found by forward elimination.
fn independent_rows(mut a: Vec<Vec<Rat>>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivot_cols: Vec<(usize, usize)> = Vec::new(); // (col, row-in-out)
    for r in 0..a.len() {
        for &(pc, pr) in &pivot_cols {
            let f = a[r][pc].clone();
            if f.is_zero() {
                continue;
            }
            let pivot_row = out[pr];
            let nz = row_nonzeros(a[pivot_row].as_slice());
            eliminate_row(&mut a[r], &f, &nz);
            a[r][pc] = Rat::zero();
        }
        if let Some(pc) = (0..ncols).find(|&c| !a[r][c].is_zero()) {
            let p = a[r][pc].clone();
            if !p.is_one() {
                for v in a[r].iter_mut() {
                    if !v.is_zero() {
                        *v /= &p;
                    }
                }
            }
            pivot_cols.push((pc, out.len()));
            out.push(r);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Vertex enumeration by exhaustive basis inspection
// ---------------------------------------------------------------------------

/// All distinct basic feasible solutions of an all-equality system: every
/// choice of rank-many columns whose basis submatrix is nonsingular, solved
/// exactly, kept when the full system (and nonnegativity) holds. Intended
/// for desk-scale vertex enumeration; refuses to look at more than
/// `combination_cap` candidate bases.
pub fn enumerate_basic_feasible_solutions(
    sys: &ConstraintSystem,
    combination_cap: u64,
) -> Result<Vec<Vec<Rat>>, LpError> {
    if sys.rows.iter().any(|r| r.relation != Relation::Eq) {
        return Err(LpError::BadSystem(
            "vertex enumeration expects an all-equality system".into(),
        ));
    }
    let n = sys.num_vars;
    let dense: Vec<Vec<Rat>> = sys
        .rows
        .iter()
        .map(|row| {
            let mut d = vec![Rat::zero(); n];
            for (v, c) in &row.coeffs {
                d[*v] = c.clone();
            }
            d
        })
        .collect();
    let keep = independent_rows(dense.clone());
    let rank = keep.len();
    let count = binomial(n as u64, rank as u64);
    if count > combination_cap {
        return Err(LpError::BadSystem(format!(
            "C({n},{rank}) = {count} candidate bases exceed the cap {combination_cap}"
        )));
    }

    let basis_rows: Vec<&Vec<Rat>> = keep.iter().map(|&r| &dense[r]).collect();
    let basis_rhs: Vec<Rat> = keep.iter().map(|&r| sys.rows[r].rhs.clone()).collect();

    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..rank).collect();
    loop {
        let sub: Vec<Vec<Rat>> = basis_rows
            .iter()
            .map(|row| subset.iter().map(|&c| row[c].clone()).collect())
            .collect();
        if let Some(xb) = gaussian_solve(sub, basis_rhs.clone()) {
            let mut x = vec![Rat::zero(); n];
            for (slot, &col) in subset.iter().enumerate() {
                x[col] = xb[slot].clone();
            }
            if x.iter().all(|v| !v.is_negative())
                && sys.rows.iter().all(|row| row.lhs(&x) == row.rhs)
                && seen.insert(x.clone())
            {
                out.push(x);
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{build_omega, build_phi, check_point, rosenberg, RowLabel};
    use crate::ratmat::{frac, rat, Permutation};

    #[test]
    fn omega_two_is_feasible_and_witness_checks() {
        let sys = build_omega(2);
        let outcome = solve_feasibility(&sys).unwrap();
        let witness = outcome.witness().expect("feasible");
        assert!(check_point(&sys, witness).unwrap().is_empty());
    }

    #[test]
    fn pinned_entry_above_one_is_infeasible_with_valid_certificate() {
        let mut sys = build_omega(2);
        sys.pin_value(0, rat(2));
        let outcome = solve_feasibility(&sys).unwrap();
        let cert = outcome.certificate().expect("infeasible");
        verify_certificate(&sys, cert).unwrap();
    }

    #[test]
    fn phi_with_rosenberg_pinned_is_feasible() {
        let p = Permutation::from_cycle_visits(&[0, 2, 1, 3]).unwrap();
        let q = Permutation::from_cycle_visits(&[0, 1, 2, 3]).unwrap();
        let d = rosenberg(&p, &q, 4).unwrap().to_flat();
        let mut sys = build_phi(4, 4);
        sys.pin_assignment(d.entries());
        let outcome = solve_feasibility(&sys).unwrap();
        assert!(outcome.is_feasible());
    }

    #[test]
    fn maximize_diagonal_over_birkhoff() {
        let sys = build_omega(2);
        let opt = maximize(&sys, &[(0, rat(1)), (3, rat(1))]).unwrap();
        assert_eq!(opt.value, rat(2));
        assert_eq!(opt.argmax, vec![rat(1), rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn maximize_total_mass_over_phi() {
        let sys = build_phi(2, 2);
        let objective: Vec<_> = (0..sys.num_vars).map(|v| (v, rat(1))).collect();
        let opt = maximize(&sys, &objective).unwrap();
        assert_eq!(opt.value, rat(4));
        assert!(check_point(&sys, &opt.argmax).unwrap().is_empty());
    }

    #[test]
    fn maximize_over_infeasible_input_errors() {
        let mut sys = build_omega(2);
        sys.pin_value(0, rat(5));
        assert!(matches!(
            maximize(&sys, &[(0, rat(1))]),
            Err(LpError::InfeasibleInput)
        ));
    }

    #[test]
    fn unbounded_maximization_is_reported() {
        // single row x0 - x1 = 0 over two nonnegative vars: x0 unbounded
        let mut sys = ConstraintSystem::new(2);
        sys.push_row(
            RowLabel::Pin,
            vec![(0, rat(1)), (1, rat(-1))],
            Relation::Eq,
            rat(0),
        );
        assert!(matches!(
            maximize(&sys, &[(0, rat(1))]),
            Err(LpError::Unbounded)
        ));
    }

    #[test]
    fn pivot_cap_is_enforced() {
        let sys = build_phi(4, 4);
        let opts = SolveOptions { pivot_cap: 2 };
        assert!(matches!(
            solve_feasibility_with(&sys, &opts),
            Err(LpError::PivotCapExceeded { cap: 2 })
        ));
    }

    #[test]
    fn determinism_across_runs() {
        let sys = build_phi(2, 3);
        let a = solve_feasibility(&sys).unwrap();
        let b = solve_feasibility(&sys).unwrap();
        assert_eq!(a.witness().unwrap(), b.witness().unwrap());
    }

    #[test]
    fn le_rows_and_negative_rhs_normalization() {
        // x0 + x1 <= 1, -x0 <= -1/2  (i.e. x0 >= 1/2)
        let mut sys = ConstraintSystem::new(2);
        sys.push_row(
            RowLabel::Pin,
            vec![(0, rat(1)), (1, rat(1))],
            Relation::Le,
            rat(1),
        );
        sys.push_row(RowLabel::Pin, vec![(0, rat(-1))], Relation::Le, frac(-1, 2));
        let outcome = solve_feasibility(&sys).unwrap();
        let w = outcome.witness().unwrap();
        assert!(&w[0] + &w[1] <= rat(1) && w[0] >= frac(1, 2));

        // force a contradiction: additionally x0 <= 1/4
        sys.push_row(RowLabel::Pin, vec![(0, rat(1))], Relation::Le, frac(1, 4));
        let outcome = solve_feasibility(&sys).unwrap();
        verify_certificate(&sys, outcome.certificate().unwrap()).unwrap();
    }

    #[test]
    fn all_zero_row_with_nonzero_rhs_is_inconsistent() {
        let mut sys = ConstraintSystem::new(2);
        sys.push_row(RowLabel::Pin, vec![(0, rat(1)), (1, rat(1))], Relation::Eq, rat(1));
        // x0 + x1 = 2 contradicts the first row linearly
        sys.push_row(RowLabel::Pin, vec![(0, rat(1)), (1, rat(1))], Relation::Eq, rat(2));
        let outcome = solve_feasibility(&sys).unwrap();
        let cert = outcome.certificate().expect("infeasible");
        verify_certificate(&sys, cert).unwrap();
    }

    #[test]
    fn vertex_enumeration_on_birkhoff_two() {
        let sys = build_omega(2);
        let verts = enumerate_basic_feasible_solutions(&sys, 100).unwrap();
        assert_eq!(verts.len(), 2);
        let id = vec![rat(1), rat(0), rat(0), rat(1)];
        let swap = vec![rat(0), rat(1), rat(1), rat(0)];
        assert!(verts.contains(&id) && verts.contains(&swap));
    }
}
