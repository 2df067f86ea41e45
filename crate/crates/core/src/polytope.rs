//! Linear constraint systems for the polytopes Omega_mn, Phi_mn and
//! Theta_mn over the variables z_(i,k)(j,l), plus the block-level tools
//! that go with them: Lambda membership, Theta decomposition and the
//! Rosenberg block family.
//!
//! Row groups:
//!   dscon  - doubly stochastic row/column sums (rhs 1)
//!   klcond - for each inner index pair (k,l), the m x m outer slice
//!            [z_(i,k)(j,l)]_ij has equal row/column sums (rhs 0)
//!   ijcond - each n x n block (i,j) has equal row/column sums (rhs 0)
//!
//! Phi uses all three groups, Theta drops klcond, Omega is dscon alone.
//! All rows are kept verbatim, including the linearly dependent ones, so
//! that the emitted counts are exactly testable.

use std::collections::BTreeMap;
use std::fmt;

use num::traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ratmat::{frac, Permutation, Rat, RatMatrix};

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{which} permutation is not cyclic (powers do not cover all positions)")]
    NotCyclic { which: &'static str },
    #[error("not a member: {0}")]
    NotAMember(String),
}

// ---------------------------------------------------------------------------
// Variable indexing
// ---------------------------------------------------------------------------

/// Double index (i,k),(j,l) of a variable z over an mn x mn matrix:
/// i,j are outer (block) indices in 0..m, k,l inner indices in 0..n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarIndex {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
}

impl VarIndex {
    pub fn new(i: usize, k: usize, j: usize, l: usize) -> Self {
        VarIndex { i, k, j, l }
    }

    /// Row-major position in the flat variable vector: the matrix row is
    /// i*n + k, the column j*n + l.
    pub fn flatten(&self, m: usize, n: usize) -> usize {
        (self.i * n + self.k) * (m * n) + (self.j * n + self.l)
    }

    pub fn unflatten(v: usize, m: usize, n: usize) -> Self {
        let mn = m * n;
        let row = v / mn;
        let col = v % mn;
        VarIndex {
            i: row / n,
            k: row % n,
            j: col / n,
            l: col % n,
        }
    }
}

// ---------------------------------------------------------------------------
// Constraint systems
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowLabel {
    Dscon,
    Klcond,
    Ijcond,
    /// Similarity rows Z vec(A+tI) = vec(B+tI).
    Sim,
    /// Equivalence rows Z vec(A) = vec(B).
    Equiv,
    /// Subgraph inequality rows Z vec(C+cI) <= vec(B+cI).
    Sgip,
    /// A single variable pinned to a value.
    Pin,
    /// Convex-combination rows of the Psi membership program.
    PsiMatch,
    PsiConvex,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RowLabel::Dscon => "dscon",
            RowLabel::Klcond => "klcond",
            RowLabel::Ijcond => "ijcond",
            RowLabel::Sim => "sim",
            RowLabel::Equiv => "equiv",
            RowLabel::Sgip => "sgip",
            RowLabel::Pin => "pin",
            RowLabel::PsiMatch => "psimatch",
            RowLabel::PsiConvex => "psiconvex",
        };
        f.write_str(s)
    }
}

/// One sparse affine row: sorted (variable, coefficient) pairs, a relation
/// and a right-hand side.
#[derive(Debug, Clone)]
pub struct ConstraintRow {
    pub label: RowLabel,
    pub coeffs: Vec<(usize, Rat)>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl ConstraintRow {
    /// Left-hand side evaluated at `values`.
    pub fn lhs(&self, values: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (v, c) in &self.coeffs {
            if !values[*v].is_zero() {
                acc += c * &values[*v];
            }
        }
        acc
    }
}

/// Indexed list of sparse rows over nonnegative variables. Row ordinals are
/// positions in `rows` and stay stable once built.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub num_vars: usize,
    pub rows: Vec<ConstraintRow>,
    /// All systems built here constrain every variable to be >= 0.
    pub nonneg: bool,
    /// Outer/inner shape (m,n) when the variables are z_(i,k)(j,l); None for
    /// systems over plain weight vectors.
    pub dims: Option<(usize, usize)>,
}

impl ConstraintSystem {
    pub fn new(num_vars: usize) -> Self {
        ConstraintSystem {
            num_vars,
            rows: Vec::new(),
            nonneg: true,
            dims: None,
        }
    }

    pub fn with_dims(mut self, m: usize, n: usize) -> Self {
        self.dims = Some((m, n));
        self
    }

    pub fn push_row(
        &mut self,
        label: RowLabel,
        coeffs: Vec<(usize, Rat)>,
        relation: Relation,
        rhs: Rat,
    ) {
        debug_assert!(coeffs.iter().all(|(v, _)| *v < self.num_vars));
        self.rows.push(ConstraintRow {
            label,
            coeffs,
            relation,
            rhs,
        });
    }

    /// Appends one `Pin` equality per variable fixing the whole assignment.
    pub fn pin_assignment(&mut self, values: &[Rat]) {
        assert_eq!(values.len(), self.num_vars);
        for (v, val) in values.iter().enumerate() {
            self.push_row(
                RowLabel::Pin,
                vec![(v, Rat::one())],
                Relation::Eq,
                val.clone(),
            );
        }
    }

    pub fn pin_value(&mut self, var: usize, value: Rat) {
        self.push_row(RowLabel::Pin, vec![(var, Rat::one())], Relation::Eq, value);
    }

    pub fn row_counts_by_label(&self) -> BTreeMap<RowLabel, usize> {
        let mut counts = BTreeMap::new();
        for row in &self.rows {
            *counts.entry(row.label).or_insert(0) += 1;
        }
        counts
    }

    /// Plain-text serialization, one line per row:
    /// `<ordinal> <label> : <coef>*z[i,k,j,l] ... (=|<=) <rhs>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (ordinal, row) in self.rows.iter().enumerate() {
            out.push_str(&format!("{} {} :", ordinal, row.label));
            for (v, c) in &row.coeffs {
                let name = match self.dims {
                    Some((m, n)) => {
                        let vi = VarIndex::unflatten(*v, m, n);
                        format!("z[{},{},{},{}]", vi.i, vi.k, vi.j, vi.l)
                    }
                    None => format!("w[{}]", v),
                };
                out.push_str(&format!(" {}*{}", c, name));
            }
            let rel = match row.relation {
                Relation::Eq => "=",
                Relation::Le => "<=",
            };
            out.push_str(&format!(" {} {}\n", rel, row.rhs));
        }
        out
    }
}

/// Accumulates coefficients for one row, merging duplicate variables and
/// dropping exact zeros.
pub(crate) struct RowBuilder {
    coeffs: BTreeMap<usize, Rat>,
}

impl RowBuilder {
    pub(crate) fn new() -> Self {
        RowBuilder {
            coeffs: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, var: usize, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(var).or_insert_with(Rat::zero);
        *slot += coef;
        if slot.is_zero() {
            self.coeffs.remove(&var);
        }
    }

    pub(crate) fn finish(self) -> Vec<(usize, Rat)> {
        self.coeffs.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Number of equality rows of the Phi_{m,n} system.
pub const fn phi_row_count(m: usize, n: usize) -> usize {
    2 * m * n + (2 * n - 2) * m * m + (2 * m - 2) * n * n
}

/// Number of equality rows of the Theta_{m,n} system.
pub const fn theta_row_count(m: usize, n: usize) -> usize {
    2 * m * n + (2 * n - 2) * m * m
}

/// Doubly stochastic system for s x s matrices: 2s equality rows (all row
/// sums and all column sums equal 1) over s^2 variables. The one dependent
/// row is kept.
pub fn build_omega(s: usize) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(s * s);
    for r in 0..s {
        let coeffs = (0..s).map(|c| (r * s + c, Rat::one())).collect();
        sys.push_row(RowLabel::Dscon, coeffs, Relation::Eq, Rat::one());
    }
    for c in 0..s {
        let coeffs = (0..s).map(|r| (r * s + c, Rat::one())).collect();
        sys.push_row(RowLabel::Dscon, coeffs, Relation::Eq, Rat::one());
    }
    sys
}

/// Which reading of the second outer-slice condition to emit. The printed
/// form equates each column sum of the (k,l) slice to the slice's first
/// *row* sum; the symmetric form references the first *column* sum instead.
/// Both cut out the same polytope; the row sets differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KlcondVariant {
    #[default]
    Printed,
    Symmetric,
}

/// The Phi_{m,n} system: dscon + klcond + ijcond, exactly
/// `phi_row_count(m, n)` equality rows over (mn)^2 variables.
pub fn build_phi(m: usize, n: usize) -> ConstraintSystem {
    build_phi_with(m, n, KlcondVariant::Printed)
}

pub fn build_phi_with(m: usize, n: usize, variant: KlcondVariant) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(m * m * n * n).with_dims(m, n);
    push_dscon_rows(&mut sys, m, n);
    push_klcond_rows(&mut sys, m, n, variant);
    push_ijcond_rows(&mut sys, m, n);
    debug_assert_eq!(sys.rows.len(), phi_row_count(m, n));
    sys
}

/// The Theta_{m,n} system: Phi minus the klcond group.
pub fn build_theta(m: usize, n: usize) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(m * m * n * n).with_dims(m, n);
    push_dscon_rows(&mut sys, m, n);
    push_ijcond_rows(&mut sys, m, n);
    debug_assert_eq!(sys.rows.len(), theta_row_count(m, n));
    sys
}

fn push_dscon_rows(sys: &mut ConstraintSystem, m: usize, n: usize) {
    // row sums: for each (i,k), sum over (j,l)
    for i in 0..m {
        for k in 0..n {
            let mut rb = RowBuilder::new();
            for j in 0..m {
                for l in 0..n {
                    rb.add(VarIndex::new(i, k, j, l).flatten(m, n), Rat::one());
                }
            }
            sys.push_row(RowLabel::Dscon, rb.finish(), Relation::Eq, Rat::one());
        }
    }
    // column sums: for each (i,k), sum over (j,l) of z_(j,l)(i,k)
    for i in 0..m {
        for k in 0..n {
            let mut rb = RowBuilder::new();
            for j in 0..m {
                for l in 0..n {
                    rb.add(VarIndex::new(j, l, i, k).flatten(m, n), Rat::one());
                }
            }
            sys.push_row(RowLabel::Dscon, rb.finish(), Relation::Eq, Rat::one());
        }
    }
}

// For each fixed inner pair (k,l), the outer slice G = [z_(i,k)(j,l)]_{i,j}
// must have all row sums and column sums equal to its first row sum.
// Rows are emitted as (sum - reference sum = 0).
fn push_klcond_rows(sys: &mut ConstraintSystem, m: usize, n: usize, variant: KlcondVariant) {
    for i in 1..m {
        for k in 0..n {
            for l in 0..n {
                // row i sum of the slice = row 0 sum
                let mut rb = RowBuilder::new();
                for j in 0..m {
                    rb.add(VarIndex::new(i, k, j, l).flatten(m, n), Rat::one());
                    rb.add(VarIndex::new(0, k, j, l).flatten(m, n), -Rat::one());
                }
                sys.push_row(RowLabel::Klcond, rb.finish(), Relation::Eq, Rat::zero());

                // column i sum of the slice = reference
                let mut rb = RowBuilder::new();
                for j in 0..m {
                    rb.add(VarIndex::new(j, k, i, l).flatten(m, n), Rat::one());
                    match variant {
                        KlcondVariant::Printed => {
                            rb.add(VarIndex::new(0, k, j, l).flatten(m, n), -Rat::one())
                        }
                        KlcondVariant::Symmetric => {
                            rb.add(VarIndex::new(j, k, 0, l).flatten(m, n), -Rat::one())
                        }
                    }
                }
                sys.push_row(RowLabel::Klcond, rb.finish(), Relation::Eq, Rat::zero());
            }
        }
    }
}

// Each n x n block (i,j) must have all row sums and column sums equal to its
// first row sum, i.e. lie in the cone Lambda_n.
fn push_ijcond_rows(sys: &mut ConstraintSystem, m: usize, n: usize) {
    for k in 1..n {
        for i in 0..m {
            for j in 0..m {
                // row k sum of block (i,j) = row 0 sum
                let mut rb = RowBuilder::new();
                for l in 0..n {
                    rb.add(VarIndex::new(i, k, j, l).flatten(m, n), Rat::one());
                    rb.add(VarIndex::new(i, 0, j, l).flatten(m, n), -Rat::one());
                }
                sys.push_row(RowLabel::Ijcond, rb.finish(), Relation::Eq, Rat::zero());

                // column k sum of block (i,j) = row 0 sum
                let mut rb = RowBuilder::new();
                for l in 0..n {
                    rb.add(VarIndex::new(i, l, j, k).flatten(m, n), Rat::one());
                    rb.add(VarIndex::new(i, 0, j, l).flatten(m, n), -Rat::one());
                }
                sys.push_row(RowLabel::Ijcond, rb.finish(), Relation::Eq, Rat::zero());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lambda membership
// ---------------------------------------------------------------------------

/// Tests membership in the cone Lambda_m of nonnegative matrices with all
/// row and column sums equal; returns the common scale on success. With
/// `require_nonneg = false` only the 2(m-1) sum equalities are checked.
pub fn lambda_member(a: &RatMatrix, require_nonneg: bool) -> Option<Rat> {
    if !a.is_square() {
        return None;
    }
    if require_nonneg && !a.is_nonneg() {
        return None;
    }
    let scale = a.row_sum(0);
    for i in 1..a.rows() {
        if a.row_sum(i) != scale || a.col_sum(i) != scale {
            return None;
        }
    }
    Some(scale)
}

// ---------------------------------------------------------------------------
// Block matrices
// ---------------------------------------------------------------------------

/// An mn x mn matrix viewed as an m x m array of n x n blocks under the
/// fixed index convention (i,k) -> i*n + k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMatrix {
    m: usize,
    n: usize,
    blocks: Vec<Vec<RatMatrix>>,
}

impl BlockMatrix {
    pub fn from_blocks(blocks: Vec<Vec<RatMatrix>>) -> Result<Self, PolytopeError> {
        let m = blocks.len();
        if m == 0 || blocks.iter().any(|r| r.len() != m) {
            return Err(PolytopeError::DimensionMismatch(
                "block grid must be square and nonempty".into(),
            ));
        }
        let n = blocks[0][0].rows();
        for row in &blocks {
            for b in row {
                if b.rows() != n || b.cols() != n {
                    return Err(PolytopeError::DimensionMismatch(format!(
                        "every block must be {n}x{n}"
                    )));
                }
            }
        }
        Ok(BlockMatrix { m, n, blocks })
    }

    pub fn from_flat(flat: &RatMatrix, m: usize, n: usize) -> Result<Self, PolytopeError> {
        if flat.rows() != m * n || flat.cols() != m * n {
            return Err(PolytopeError::DimensionMismatch(format!(
                "expected {0}x{0} matrix for m={m}, n={n}",
                m * n
            )));
        }
        let blocks = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        RatMatrix::from_fn(n, n, |k, l| flat.get(i * n + k, j * n + l).clone())
                    })
                    .collect()
            })
            .collect();
        Ok(BlockMatrix { m, n, blocks })
    }

    pub fn to_flat(&self) -> RatMatrix {
        let (m, n) = (self.m, self.n);
        RatMatrix::from_fn(m * n, m * n, |r, c| {
            self.blocks[r / n][c / n].get(r % n, c % n).clone()
        })
    }

    pub fn outer_size(&self) -> usize {
        self.m
    }

    pub fn inner_size(&self) -> usize {
        self.n
    }

    pub fn block(&self, i: usize, j: usize) -> &RatMatrix {
        &self.blocks[i][j]
    }
}

/// Blockwise decomposition of a Theta member: C_ij = F_ij * D_ij with F
/// doubly stochastic and every D_ij doubly stochastic. Zero blocks get the
/// uniform matrix as their (arbitrary) D_ij.
pub struct ThetaDecomposition {
    pub outer: RatMatrix,
    pub inner: Vec<Vec<RatMatrix>>,
}

pub fn theta_decompose(c: &BlockMatrix) -> Result<ThetaDecomposition, PolytopeError> {
    let (m, n) = (c.outer_size(), c.inner_size());
    let mut outer = RatMatrix::zeros(m, m);
    let mut inner = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let block = c.block(i, j);
            let scale = lambda_member(block, true).ok_or_else(|| {
                PolytopeError::NotAMember(format!("block ({i},{j}) is not in Lambda_{n}"))
            })?;
            let d = if scale.is_zero() {
                RatMatrix::uniform_doubly_stochastic(n)
            } else {
                block.scale(&scale.recip())
            };
            outer.set(i, j, scale);
            row.push(d);
        }
        inner.push(row);
    }
    if !outer.is_doubly_stochastic() {
        return Err(PolytopeError::NotAMember(
            "outer scale matrix is not doubly stochastic".into(),
        ));
    }
    Ok(ThetaDecomposition { outer, inner })
}

// ---------------------------------------------------------------------------
// Rosenberg construction
// ---------------------------------------------------------------------------

/// The block matrix D = (1/n) [P^i Q^j] for cyclic permutations P, Q, with
/// 1-based powers: block (i,j) is (1/n) * view(P)^(i+1) * view(Q)^(j+1).
/// Always lands in Phi_{n,n}; lands in Psi_{n,n} only when P is a power of Q.
pub fn rosenberg(
    p: &Permutation,
    q: &Permutation,
    n: usize,
) -> Result<BlockMatrix, PolytopeError> {
    if p.n() != n || q.n() != n {
        return Err(PolytopeError::DimensionMismatch(format!(
            "permutations act on {} and {} symbols, expected {n}",
            p.n(),
            q.n()
        )));
    }
    if !p.is_cyclic() {
        return Err(PolytopeError::NotCyclic { which: "first" });
    }
    if !q.is_cyclic() {
        return Err(PolytopeError::NotCyclic { which: "second" });
    }
    let inv_n = frac(1, n as i64);
    let mut p_pow = p.clone();
    let mut blocks = Vec::with_capacity(n);
    for _ in 0..n {
        let mut q_pow = q.clone();
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            row.push(p_pow.compose(&q_pow).matrix_view().scale(&inv_n));
            q_pow = q.compose(&q_pow);
        }
        blocks.push(row);
        p_pow = p.compose(&p_pow);
    }
    BlockMatrix::from_blocks(blocks)
}

// ---------------------------------------------------------------------------
// Point checking
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum Violation {
    Row {
        ordinal: usize,
        label: RowLabel,
        residual: Rat,
    },
    NegativeVar {
        var: usize,
        value: Rat,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Row {
                ordinal,
                label,
                residual,
            } => write!(f, "row {ordinal} ({label}): residual {residual}"),
            Violation::NegativeVar { var, value } => {
                write!(f, "variable {var} negative: {value}")
            }
        }
    }
}

/// Evaluates every row at `values` and lists every violation, including
/// negativity of any variable. Empty result means the point is feasible.
pub fn check_point(
    sys: &ConstraintSystem,
    values: &[Rat],
) -> Result<Vec<Violation>, PolytopeError> {
    if values.len() != sys.num_vars {
        return Err(PolytopeError::DimensionMismatch(format!(
            "assignment has {} values, system has {} variables",
            values.len(),
            sys.num_vars
        )));
    }
    let mut out = Vec::new();
    for (ordinal, row) in sys.rows.iter().enumerate() {
        let residual = row.lhs(values) - &row.rhs;
        let violated = match row.relation {
            Relation::Eq => !residual.is_zero(),
            Relation::Le => residual.is_positive(),
        };
        if violated {
            out.push(Violation::Row {
                ordinal,
                label: row.label,
                residual,
            });
        }
    }
    if sys.nonneg {
        for (var, value) in values.iter().enumerate() {
            if value.is_negative() {
                out.push(Violation::NegativeVar {
                    var,
                    value: value.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Same as [`check_point`] but takes the point as an mn x mn matrix in the
/// fixed variable order (row-major flattening).
pub fn check_matrix(sys: &ConstraintSystem, z: &RatMatrix) -> Result<Vec<Violation>, PolytopeError> {
    check_point(sys, z.entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::{enumerate_permutations, rat};

    #[test]
    fn var_index_round_trip() {
        let (m, n) = (3, 4);
        for v in 0..(m * m * n * n) {
            let vi = VarIndex::unflatten(v, m, n);
            assert_eq!(vi.flatten(m, n), v);
            assert!(vi.i < m && vi.j < m && vi.k < n && vi.l < n);
        }
    }

    #[test]
    fn omega_counts_and_membership() {
        let sys = build_omega(2);
        assert_eq!(sys.rows.len(), 4);
        assert_eq!(sys.num_vars, 4);

        let uniform = RatMatrix::uniform_doubly_stochastic(2);
        assert!(check_matrix(&sys, &uniform).unwrap().is_empty());

        let bad = RatMatrix::from_int_rows(&[vec![1, 1], vec![0, 0]]);
        assert!(!check_matrix(&sys, &bad).unwrap().is_empty());
    }

    #[test]
    fn phi_row_counts_match_formula() {
        for (m, n, dscon, ij, kl) in [
            (2usize, 2usize, 8usize, 8usize, 8usize),
            (3, 3, 18, 36, 36),
            (2, 3, 12, 16, 18),
        ] {
            let sys = build_phi(m, n);
            assert_eq!(sys.rows.len(), dscon + ij + kl, "total for ({m},{n})");
            let counts = sys.row_counts_by_label();
            assert_eq!(counts[&RowLabel::Dscon], dscon);
            assert_eq!(counts[&RowLabel::Ijcond], ij);
            assert_eq!(counts[&RowLabel::Klcond], kl);
        }
        for m in 1..=5 {
            for n in 1..=5 {
                assert_eq!(build_phi(m, n).rows.len(), phi_row_count(m, n));
                assert_eq!(build_theta(m, n).rows.len(), theta_row_count(m, n));
            }
        }
    }

    #[test]
    fn theta_rows_are_phi_minus_klcond() {
        let (m, n) = (2, 3);
        let phi = build_phi(m, n);
        let theta = build_theta(m, n);
        let phi_without_kl: Vec<_> = phi
            .rows
            .iter()
            .filter(|r| r.label != RowLabel::Klcond)
            .collect();
        assert_eq!(phi_without_kl.len(), theta.rows.len());
        for (a, b) in phi_without_kl.iter().zip(&theta.rows) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.coeffs, b.coeffs);
            assert_eq!(a.rhs, b.rhs);
        }
    }

    #[test]
    fn kron_of_permutations_satisfies_phi_exhaustively() {
        for (m, n) in [(2, 2), (2, 3), (3, 3)] {
            let sys = build_phi(m, n);
            let theta = build_theta(m, n);
            for p in enumerate_permutations(m).unwrap() {
                for q in enumerate_permutations(n).unwrap() {
                    let z = p.kron(&q).matrix_view();
                    assert!(check_matrix(&sys, &z).unwrap().is_empty());
                    assert!(check_matrix(&theta, &z).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn klcond_variants_agree_on_feasibility_but_not_rows() {
        let printed = build_phi_with(3, 2, KlcondVariant::Printed);
        let symmetric = build_phi_with(3, 2, KlcondVariant::Symmetric);
        assert_eq!(printed.rows.len(), symmetric.rows.len());
        // same points pass both (spot check on kron vertices and barycenter)
        for p in enumerate_permutations(3).unwrap() {
            for q in enumerate_permutations(2).unwrap() {
                let z = p.kron(&q).matrix_view();
                assert!(check_matrix(&printed, &z).unwrap().is_empty());
                assert!(check_matrix(&symmetric, &z).unwrap().is_empty());
            }
        }
        let uniform = RatMatrix::filled(6, 6, frac(1, 6));
        assert!(check_matrix(&printed, &uniform).unwrap().is_empty());
        assert!(check_matrix(&symmetric, &uniform).unwrap().is_empty());
        // but the emitted row sets differ
        let row_set = |s: &ConstraintSystem| {
            s.rows
                .iter()
                .map(|r| format!("{:?}{:?}", r.coeffs, r.rhs))
                .collect::<std::collections::BTreeSet<_>>()
        };
        assert_ne!(row_set(&printed), row_set(&symmetric));
    }

    #[test]
    fn perturbed_vertex_reports_dscon_violation() {
        let sys = build_phi(2, 2);
        let p = Permutation::identity(2);
        let mut z = p.kron(&p).matrix_view();
        z.set(0, 0, rat(2));
        let violations = check_matrix(&sys, &z).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::Row { label: RowLabel::Dscon, .. })));
    }

    #[test]
    fn lambda_membership_examples() {
        assert_eq!(lambda_member(&RatMatrix::identity(3), true), Some(rat(1)));
        let ones = RatMatrix::filled(3, 3, rat(1));
        assert_eq!(lambda_member(&ones, true), Some(rat(3)));
        let bad = RatMatrix::from_int_rows(&[vec![1, 0], vec![0, 2]]);
        assert_eq!(lambda_member(&bad, true), None);
        let negative = RatMatrix::from_int_rows(&[vec![-1, 1], vec![1, -1]]);
        assert_eq!(lambda_member(&negative, true), None);
        assert_eq!(lambda_member(&negative, false), Some(rat(0)));
    }

    #[test]
    fn lambda_is_a_multiplicative_cone() {
        // members built as nonnegative combinations of permutation matrices
        let perms: Vec<_> = enumerate_permutations(3).unwrap().collect();
        let a = perms[1]
            .matrix_view()
            .scale(&rat(2))
            .add(&perms[3].matrix_view().scale(&frac(1, 2)))
            .unwrap();
        let b = perms[0]
            .matrix_view()
            .scale(&frac(3, 4))
            .add(&perms[5].matrix_view().scale(&rat(5)))
            .unwrap();
        let (sa, sb) = (
            lambda_member(&a, true).unwrap(),
            lambda_member(&b, true).unwrap(),
        );
        assert_eq!(sa, frac(5, 2));
        assert_eq!(sb, frac(23, 4));
        assert_eq!(lambda_member(&a.add(&b).unwrap(), true), Some(&sa + &sb));
        assert_eq!(lambda_member(&a.scale(&frac(7, 3)), true), Some(&sa * frac(7, 3)));
        assert_eq!(lambda_member(&a.mul(&b).unwrap(), true), Some(&sa * &sb));
    }

    #[test]
    fn block_matrix_round_trip() {
        let p = Permutation::from_image(vec![1, 0]).unwrap();
        let q = Permutation::from_image(vec![0, 1]).unwrap();
        let flat = p.matrix_view().kron(&q.matrix_view()).unwrap();
        let blocks = BlockMatrix::from_flat(&flat, 2, 2).unwrap();
        assert_eq!(blocks.to_flat(), flat);
        assert_eq!(*blocks.block(1, 0), q.matrix_view());
    }

    #[test]
    fn theta_decompose_kron_and_uniform() {
        let p = Permutation::from_image(vec![1, 2, 0]).unwrap();
        let q = Permutation::from_image(vec![1, 0]).unwrap();
        let flat = p.matrix_view().kron(&q.matrix_view()).unwrap();
        let dec = theta_decompose(&BlockMatrix::from_flat(&flat, 3, 2).unwrap()).unwrap();
        assert_eq!(dec.outer, p.matrix_view());
        for i in 0..3 {
            let j = p.image()[i];
            // nonzero block sits at (image[i], i) and carries Q
            assert_eq!(dec.inner[j][i], q.matrix_view());
        }

        let uniform = RatMatrix::filled(6, 6, frac(1, 6));
        let dec = theta_decompose(&BlockMatrix::from_flat(&uniform, 3, 2).unwrap()).unwrap();
        assert_eq!(dec.outer, RatMatrix::uniform_doubly_stochastic(3));
        assert_eq!(dec.inner[0][0], RatMatrix::uniform_doubly_stochastic(2));
    }

    #[test]
    fn theta_decompose_recomposes_convex_combinations() {
        // oracle: recompose C_ij = F_ij * D_ij and compare with the input
        let (m, n) = (2, 3);
        let pm: Vec<_> = enumerate_permutations(m).unwrap().collect();
        let pn: Vec<_> = enumerate_permutations(n).unwrap().collect();
        let terms = [
            (frac(1, 2), &pm[0], &pn[2]),
            (frac(1, 3), &pm[1], &pn[4]),
            (frac(1, 6), &pm[1], &pn[0]),
        ];
        let mut c = RatMatrix::zeros(m * n, m * n);
        for (w, p, q) in &terms {
            c = c.add(&p.kron(q).matrix_view().scale(w)).unwrap();
        }
        let blocks = BlockMatrix::from_flat(&c, m, n).unwrap();
        let dec = theta_decompose(&blocks).unwrap();
        let recomposed = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| dec.inner[i][j].scale(dec.outer.get(i, j)))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        assert_eq!(BlockMatrix::from_blocks(recomposed).unwrap().to_flat(), c);
    }

    #[test]
    fn theta_decompose_rejects_non_members() {
        let bad = RatMatrix::from_int_rows(&[
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
        ]);
        let blocks = BlockMatrix::from_flat(&bad, 2, 2).unwrap();
        assert!(matches!(
            theta_decompose(&blocks),
            Err(PolytopeError::NotAMember(_))
        ));
    }

    #[test]
    fn rosenberg_paper_cycles_land_in_phi() {
        // P: 1->3->2->4->1, Q: 1->2->3->4->1 (1-based in the source)
        let p = Permutation::from_cycle_visits(&[0, 2, 1, 3]).unwrap();
        let q = Permutation::from_cycle_visits(&[0, 1, 2, 3]).unwrap();
        let d = rosenberg(&p, &q, 4).unwrap();
        let flat = d.to_flat();
        assert!(check_matrix(&build_phi(4, 4), &flat).unwrap().is_empty());
        // every block is (1/4) times a permutation matrix
        for i in 0..4 {
            for j in 0..4 {
                let b = d.block(i, j);
                assert_eq!(lambda_member(b, true), Some(frac(1, 4)));
                assert!(b.scale(&rat(4)).is_zero_one());
            }
        }
    }

    #[test]
    fn rosenberg_rejects_non_cyclic() {
        let id = Permutation::identity(4);
        let q = Permutation::from_cycle_visits(&[0, 1, 2, 3]).unwrap();
        assert!(matches!(
            rosenberg(&id, &q, 4),
            Err(PolytopeError::NotCyclic { which: "first" })
        ));
    }

    #[test]
    fn serialization_shape() {
        let sys = build_omega(1).with_dims(1, 1);
        let text = sys.to_text();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "0 dscon : 1*z[0,0,0,0] = 1");
        assert_eq!(lines[1], "1 dscon : 1*z[0,0,0,0] = 1");
    }
}
