//! Dense operator algebra on small composite Hilbert spaces.
//!
//! Single-qubit operators use the basis ordering `|g⟩ = 0`, `|e⟩ = 1`. The
//! composite space of the atom–cavity system is ordered `[atom a, atom b,
//! cavity]`, with the left factor of every Kronecker product varying slowest.
//! Code outside this module goes through [`SpaceLayout`] instead of computing
//! strides itself.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Ket = DVector<C64>;

/// Entrywise bound on `|ρ − ρ†|` for a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Bound on `|tr ρ − 1|` for a density matrix.
pub const TRACE_TOL: f64 = 1e-8;
/// Smallest eigenvalue tolerated in a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex square matrix.
#[derive(Clone, PartialEq)]
pub struct Operator {
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                context: "square operator",
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidArgument("operator dimension must be positive".into()));
        }
        Ok(Self { matrix })
    }

    /// Builds a `dim × dim` operator from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "operator entries",
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self {
            matrix: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// `|ket⟩⟨bra|`.
    pub fn outer(ket: &Ket, bra: &Ket) -> Self {
        assert_eq!(ket.len(), bra.len(), "outer product of unequal lengths");
        Self {
            matrix: ket * bra.adjoint(),
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(ket: &Ket) -> Self {
        Self::outer(ket, ket)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn dagger(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            matrix: self.matrix.map(|z| z.conj()),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            matrix: &self.matrix * factor,
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        assert_eq!(ket.len(), self.dim(), "ket length does not match operator");
        &self.matrix * ket
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation_in(&self, ket: &Ket) -> C64 {
        ket.dotc(&self.apply(ket))
    }

    /// `tr(A ρ)` without forming the product.
    pub fn expectation(&self, rho: &Operator) -> C64 {
        assert_eq!(self.dim(), rho.dim(), "expectation of unequal dimensions");
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for k in 0..d {
                acc += self.matrix[(i, k)] * rho.matrix[(k, i)];
            }
        }
        acc
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        &(self * other) - &(other * self)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise `|a_ij − b_ij|`; panics on a dimension mismatch.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "comparison of unequal dimensions");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Exact dimension equality and entrywise agreement within `tol`.
    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) <= tol
    }

    /// `max |A − A†|` entrywise.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            matrix: (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0),
        }
    }

    /// Column-stacking vectorization.
    pub fn vec(&self) -> DVector<C64> {
        DVector::from_column_slice(self.matrix.as_slice())
    }

    /// Inverse of [`Operator::vec`].
    pub fn unvec(v: &DVector<C64>) -> Result<Self> {
        let d = (v.len() as f64).sqrt().round() as usize;
        if d * d != v.len() {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} is not a vectorized square matrix",
                v.len()
            )));
        }
        Self::new(DMatrix::from_column_slice(d, d, v.as_slice()))
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator(dim = {}){}", self.dim(), self.matrix)
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn mul(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "product of unequal dimensions");
        Operator {
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn add(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "sum of unequal dimensions");
        Operator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn sub(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "difference of unequal dimensions");
        Operator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants at the module tolerances.
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_residual();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let trace_residual = (op.trace() - ONE).norm();
        if trace_residual > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace differs from one by {trace_residual:e}"
            )));
        }
        let min_eig = min_eigenvalue(&op.hermitian_part());
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { op })
    }

    /// Skips validation; the caller vouches for the invariants.
    pub(crate) fn new_unchecked(op: Operator) -> Self {
        Self { op }
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(ket: &Ket) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        Self::new(Operator::projector(&(ket / C64::new(norm, 0.0))))
    }

    /// Basis projector `|index⟩⟨index|`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        Self::pure(&basis_ket(dim, index))
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new_unchecked(Operator::identity(dim).scale_re(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn trace_residual(&self) -> f64 {
        (self.op.trace() - ONE).norm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.op)
    }

    /// Real diagonal, i.e. the basis populations.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.op.get(i, i).re).collect()
    }

    /// Fidelity with a pure state, `⟨ψ|ρ|ψ⟩`.
    pub fn overlap(&self, ket: &Ket) -> f64 {
        self.op.expectation_in(ket).re
    }
}

/// Ordered subsystem dimensions of a composite space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceLayout {
    factor_dims: Vec<usize>,
}

impl SpaceLayout {
    pub const ATOM_A: usize = 0;
    pub const ATOM_B: usize = 1;
    pub const CAVITY: usize = 2;

    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidArgument("layout needs at least one factor".into()));
        }
        if factor_dims.contains(&0) {
            return Err(Error::InvalidArgument("layout factors must be positive".into()));
        }
        Ok(Self { factor_dims })
    }

    /// `[2, 2, N + 1]`: atom a, atom b, cavity truncated at `cutoff` photons.
    pub fn atoms_and_cavity(cutoff: usize) -> Self {
        Self {
            factor_dims: vec![2, 2, cutoff + 1],
        }
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn composite_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Composite index of a per-factor digit tuple.
    pub fn index_of(&self, digits: &[usize]) -> usize {
        assert_eq!(digits.len(), self.factor_dims.len(), "digit count");
        digits.iter().zip(&self.factor_dims).fold(0, |acc, (&digit, &dim)| {
            assert!(digit < dim, "digit {digit} out of range for factor of dimension {dim}");
            acc * dim + digit
        })
    }

    /// Per-factor digits of a composite index.
    pub fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.factor_dims.len()];
        for (slot, &dim) in self.factor_dims.iter().enumerate().rev() {
            digits[slot] = index % dim;
            index /= dim;
        }
        digits
    }

    /// Product basis ket from per-factor basis indices.
    pub fn product_ket(&self, digits: &[usize]) -> Ket {
        basis_ket(self.composite_dim(), self.index_of(digits))
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.factor_dims.len() {
            return Err(Error::InvalidArgument(format!(
                "slot {slot} out of range for a layout with {} factors",
                self.factor_dims.len()
            )));
        }
        Ok(())
    }
}

pub fn basis_ket(dim: usize, index: usize) -> Ket {
    assert!(index < dim, "basis index {index} out of range for dimension {dim}");
    let mut ket = Ket::zeros(dim);
    ket[index] = ONE;
    ket
}

/// Truncated cavity annihilation operator on `cutoff + 1` Fock levels.
pub fn annihilation(cutoff: usize) -> Result<Operator> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("Fock cutoff must be at least 1 photon".into()));
    }
    Ok(Operator::from_fn(cutoff + 1, |row, col| {
        if col == row + 1 {
            C64::new((col as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    }))
}

pub fn creation(cutoff: usize) -> Result<Operator> {
    annihilation(cutoff).map(|a| a.dagger())
}

/// Photon number operator `diag(0, 1, …, N)`.
pub fn number(cutoff: usize) -> Result<Operator> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("Fock cutoff must be at least 1 photon".into()));
    }
    Ok(Operator::from_fn(cutoff + 1, |row, col| {
        if row == col {
            C64::new(row as f64, 0.0)
        } else {
            ZERO
        }
    }))
}

fn qubit(entries: [[f64; 2]; 2]) -> Operator {
    Operator::from_fn(2, |r, c| C64::new(entries[r][c], 0.0))
}

/// `σᶻ = |e⟩⟨e| − |g⟩⟨g|`.
pub fn pauli_z() -> Operator {
    qubit([[-1.0, 0.0], [0.0, 1.0]])
}

/// `σ⁺ = |e⟩⟨g|`.
pub fn sigma_plus() -> Operator {
    qubit([[0.0, 0.0], [1.0, 0.0]])
}

/// `σ⁻ = |g⟩⟨e|`.
pub fn sigma_minus() -> Operator {
    qubit([[0.0, 1.0], [0.0, 0.0]])
}

/// `|g⟩⟨g|`.
pub fn ground_projector() -> Operator {
    qubit([[1.0, 0.0], [0.0, 0.0]])
}

/// `|e⟩⟨e|`.
pub fn excited_projector() -> Operator {
    qubit([[0.0, 0.0], [0.0, 1.0]])
}

/// `σʸ` in the `|g⟩, |e⟩` ordering.
pub fn pauli_y() -> Operator {
    Operator::from_fn(2, |r, c| match (r, c) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => ZERO,
    })
}

/// Kronecker product; `a` indexes the slower-varying factor.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator {
        matrix: a.matrix.kronecker(&b.matrix),
    }
}

/// Kronecker product of a nonempty sequence, left to right.
pub fn tensor_all<'a>(ops: impl IntoIterator<Item = &'a Operator>) -> Operator {
    let mut iter = ops.into_iter();
    let first = iter.next().expect("tensor_all needs at least one factor").clone();
    iter.fold(first, |acc, op| tensor(&acc, op))
}

/// Places `op` on `slot` with identities on every other factor.
pub fn embed(op: &Operator, slot: usize, layout: &SpaceLayout) -> Result<Operator> {
    layout.check_slot(slot)?;
    let expected = layout.factor_dims[slot];
    if op.dim() != expected {
        return Err(Error::DimensionMismatch {
            context: "embedded operator",
            expected,
            found: op.dim(),
        });
    }
    let factors: Vec<Operator> = layout
        .factor_dims
        .iter()
        .enumerate()
        .map(|(s, &d)| if s == slot { op.clone() } else { Operator::identity(d) })
        .collect();
    Ok(tensor_all(&factors))
}

/// Partial trace of an arbitrary operator, keeping the listed factors in
/// layout order.
pub fn partial_trace_operator(op: &Operator, layout: &SpaceLayout, keep: &[usize]) -> Result<Operator> {
    let total = layout.composite_dim();
    if op.dim() != total {
        return Err(Error::DimensionMismatch {
            context: "partial trace input",
            expected: total,
            found: op.dim(),
        });
    }
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "partial trace must keep at least one factor".into(),
        ));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    for &slot in &kept {
        layout.check_slot(slot)?;
    }
    let traced: Vec<usize> = (0..layout.num_factors()).filter(|s| !kept.contains(s)).collect();

    let kept_layout = SpaceLayout::new(kept.iter().map(|&s| layout.factor_dims[s]).collect())?;
    let traced_dim: usize = traced.iter().map(|&s| layout.factor_dims[s]).product();
    let traced_layout = SpaceLayout::new(if traced.is_empty() {
        vec![1]
    } else {
        traced.iter().map(|&s| layout.factor_dims[s]).collect()
    })?;

    let reduced_dim = kept_layout.composite_dim();
    let mut digits = vec![0; layout.num_factors()];
    let mut full_index = |kept_digits: &[usize], traced_digits: &[usize]| {
        for (&slot, &d) in kept.iter().zip(kept_digits) {
            digits[slot] = d;
        }
        for (&slot, &d) in traced.iter().zip(traced_digits) {
            digits[slot] = d;
        }
        layout.index_of(&digits)
    };

    let mut out = DMatrix::from_element(reduced_dim, reduced_dim, ZERO);
    for r in 0..reduced_dim {
        let r_digits = kept_layout.digits_of(r);
        for c in 0..reduced_dim {
            let c_digits = kept_layout.digits_of(c);
            let mut acc = ZERO;
            for t in 0..traced_dim {
                let t_digits = if traced.is_empty() {
                    vec![]
                } else {
                    traced_layout.digits_of(t)
                };
                let i = full_index(&r_digits, &t_digits);
                let j = full_index(&c_digits, &t_digits);
                acc += op.matrix[(i, j)];
            }
            out[(r, c)] = acc;
        }
    }
    Operator::new(out)
}

/// Reduced state on the factors in `keep`, in their layout order.
pub fn partial_trace(rho: &DensityMatrix, layout: &SpaceLayout, keep: &[usize]) -> Result<DensityMatrix> {
    partial_trace_operator(rho.as_operator(), layout, keep).map(DensityMatrix::new_unchecked)
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Operator,
}

impl Eigensystem {
    /// `V · f(diag λ) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Operator {
        let d = self.values.len();
        let v = self.vectors.matrix();
        let mut scaled = v.clone();
        for (col, &lambda) in self.values.iter().enumerate() {
            let w = C64::new(f(lambda), 0.0);
            for row in 0..d {
                scaled[(row, col)] *= w;
            }
        }
        Operator {
            matrix: scaled * v.adjoint(),
        }
    }

    pub fn reconstruct(&self) -> Operator {
        self.reconstruct_with(|x| x)
    }
}

pub fn hermitian_eigensystem(op: &Operator) -> Result<Eigensystem> {
    let residual = op.hermiticity_residual();
    if residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(eigensystem_of(&op.hermitian_part()))
}

fn eigensystem_of(op: &Operator) -> Eigensystem {
    let eig = SymmetricEigen::new(op.matrix.clone());
    let mut order: Vec<usize> = (0..op.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(op.dim(), op.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Eigensystem {
        values,
        vectors: Operator { matrix: vectors },
    }
}

/// Smallest eigenvalue of the Hermitian part of `op`.
pub fn min_eigenvalue(op: &Operator) -> f64 {
    SymmetricEigen::new(op.hermitian_part().matrix)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
