//! Bipartite state vectors, density operators, and local truncation.
//!
//! A vector `|ω⟩ = Σ_ij d_ij |ij⟩` on `H⊗K` is stored as its
//! `dim_a × dim_b` coefficient matrix `D = (d_ij)`, rows indexed by the
//! first factor. Dense operators are laid out in the product basis with
//! the fixed row-major ordering `(i, j) ↦ i·dim_b + j`; conjugation is
//! entrywise in that basis. Amplitudes are complex throughout.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Default tolerance for Hermiticity / trace / positivity validation of
/// inputs. Configurable per call where it matters.
pub const VALIDATION_TOL: f64 = 1e-9;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A vector in `H⊗K`, stored as its coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteVector {
    coeffs: DMatrix<C64>,
}

impl BipartiteVector {
    /// Wraps a coefficient matrix. Both dimensions must be at least 1.
    pub fn new(coeffs: DMatrix<C64>) -> Result<Self> {
        if coeffs.nrows() == 0 || coeffs.ncols() == 0 {
            return Err(Error::InvalidState(
                "coefficient matrix must have positive dimensions".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Builds from a row-major flat amplitude list of length `dim_a * dim_b`.
    pub fn from_flat(dim_a: usize, dim_b: usize, flat: &[C64]) -> Result<Self> {
        if flat.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                axis: "coefficients",
                expected: dim_a * dim_b,
                actual: flat.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim_a, dim_b, flat))
    }

    /// The product basis vector `|ij⟩`.
    pub fn basis_state(dim_a: usize, dim_b: usize, i: usize, j: usize) -> Self {
        let mut coeffs = DMatrix::zeros(dim_a, dim_b);
        coeffs[(i, j)] = real(1.0);
        Self { coeffs }
    }

    /// `(1/√n) Σ_i |ii⟩` on an `n × n` system; its coefficient matrix is `I/√n`.
    pub fn maximally_entangled(n: usize) -> Self {
        let coeffs = DMatrix::identity(n, n) * real(1.0 / (n as f64).sqrt());
        Self { coeffs }
    }

    /// Product vector `|α⟩⊗|β⟩`, whose coefficient matrix is the rank-one `α βᵀ`.
    pub fn product(alpha: &DVector<C64>, beta: &DVector<C64>) -> Self {
        Self {
            coeffs: alpha * beta.transpose(),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn coeffs(&self) -> &DMatrix<C64> {
        &self.coeffs
    }

    /// Vector norm; equals the Frobenius norm of the coefficient matrix.
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            coeffs: &self.coeffs * real(1.0 / n),
        })
    }

    /// Largest singular value of the coefficient matrix, `‖D_ω‖`.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.clone().svd(false, false).singular_values.max()
    }

    /// `⟨α|D_ω|β̄⟩`, which equals the full inner product `⟨α⊗β|ω⟩`.
    ///
    /// `β̄` is the entrywise conjugate of `β` in the fixed product basis.
    pub fn product_overlap(&self, alpha: &DVector<C64>, beta: &DVector<C64>) -> Result<C64> {
        if alpha.len() != self.dim_a() {
            return Err(Error::DimensionMismatch {
                axis: "dim_a",
                expected: self.dim_a(),
                actual: alpha.len(),
            });
        }
        if beta.len() != self.dim_b() {
            return Err(Error::DimensionMismatch {
                axis: "dim_b",
                expected: self.dim_b(),
                actual: beta.len(),
            });
        }
        Ok(alpha.dotc(&(&self.coeffs * beta.map(|z| z.conj()))))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_dims(other.dim_a(), other.dim_b())?;
        Ok(self.coeffs.dotc(&other.coeffs))
    }

    /// Row-major flattening into a ket of length `dim_a * dim_b`.
    pub fn ket(&self) -> DVector<C64> {
        let (da, db) = (self.dim_a(), self.dim_b());
        DVector::from_fn(da * db, |r, _| self.coeffs[(r / db, r % db)])
    }

    /// The rank-one projector `|ω⟩⟨ω|` in the product basis.
    pub fn projector(&self) -> DMatrix<C64> {
        let k = self.ket();
        &k * k.adjoint()
    }

    /// Zero-pads into a larger `dim_a × dim_b` space, keeping amplitudes.
    pub fn embedded(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < self.dim_a() || dim_b < self.dim_b() {
            return Err(Error::InvalidState(
                "embedding target must not be smaller than the vector".into(),
            ));
        }
        let mut coeffs = DMatrix::zeros(dim_a, dim_b);
        coeffs
            .view_mut((0, 0), (self.dim_a(), self.dim_b()))
            .copy_from(&self.coeffs);
        Ok(Self { coeffs })
    }

    /// Compression `(P_k ⊗ Q_l)|ω⟩` to the leading block, without
    /// renormalization. Dimensions shrink to the block size.
    pub fn compressed(&self, spec: &TruncationSpec) -> Self {
        let ka = spec.rows.min(self.dim_a());
        let lb = spec.cols.min(self.dim_b());
        Self {
            coeffs: self.coeffs.view((0, 0), (ka, lb)).into_owned(),
        }
    }

    fn check_dims(&self, dim_a: usize, dim_b: usize) -> Result<()> {
        if self.dim_a() != dim_a {
            return Err(Error::DimensionMismatch {
                axis: "dim_a",
                expected: self.dim_a(),
                actual: dim_a,
            });
        }
        if self.dim_b() != dim_b {
            return Err(Error::DimensionMismatch {
                axis: "dim_b",
                expected: self.dim_b(),
                actual: dim_b,
            });
        }
        Ok(())
    }
}

/// Local truncation onto the leading `rows × cols` product subspace
/// `P_rows ⊗ Q_cols`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    pub rows: usize,
    pub cols: usize,
}

impl TruncationSpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidConfig(
                "truncation must keep at least one row and one column".into(),
            ));
        }
        Ok(Self { rows, cols })
    }
}

/// A Hermitian, positive semidefinite, unit-trace operator on a finite
/// tensor-product space with explicit local dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim_a: usize,
    dim_b: usize,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity at [`VALIDATION_TOL`].
    pub fn new(dim_a: usize, dim_b: usize, matrix: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(dim_a, dim_b, matrix, VALIDATION_TOL)
    }

    /// As [`Self::new`] with an explicit validation tolerance.
    pub fn with_tolerance(
        dim_a: usize,
        dim_b: usize,
        matrix: DMatrix<C64>,
        tol: f64,
    ) -> Result<Self> {
        let d = dim_a * dim_b;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                axis: "matrix",
                expected: d,
                actual: matrix.nrows(),
            });
        }
        let dev = hermitian_deviation(&matrix);
        if dev > tol {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace {:.12} != 1 beyond tolerance {:.1e}",
                trace.re, tol
            )));
        }
        let op = Self {
            dim_a,
            dim_b,
            matrix,
        };
        let min = op.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {:.3e} below -{:.1e}",
                min, tol
            )));
        }
        Ok(op)
    }

    /// Constructor for operators that are valid by construction
    /// (mixtures of unit vectors, renormalized compressions). Skips the
    /// O(d³) positivity check.
    pub(crate) fn from_valid_parts(dim_a: usize, dim_b: usize, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), dim_a * dim_b);
        debug_assert!((matrix.trace().re - 1.0).abs() < 1e-6);
        Self {
            dim_a,
            dim_b,
            matrix,
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Total dimension `dim_a * dim_b`.
    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigenvalues(&self.matrix)?.min())
    }

    /// `⟨v|ρ|v⟩` (real for Hermitian ρ).
    pub fn expectation(&self, v: &BipartiteVector) -> Result<f64> {
        v.check_dims(self.dim_a, self.dim_b)?;
        let k = v.ket();
        Ok(k.dotc(&(&self.matrix * &k)).re)
    }

    /// Spectral decomposition into a pure mixture. Eigenvalues below
    /// `-tol` abort; those in `[-tol, tol]` are dropped.
    pub fn eigen_mixture(&self, tol: f64) -> Result<Vec<(f64, BipartiteVector)>> {
        let eig = nalgebra::SymmetricEigen::try_new(self.matrix.clone(), f64::EPSILON, 0)
            .ok_or(Error::EigenFailed { dim: self.dim() })?;
        let mut terms = Vec::new();
        for (idx, &val) in eig.eigenvalues.iter().enumerate() {
            if val < -tol {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {:.3e} in spectral decomposition",
                    val
                )));
            }
            if val <= tol {
                continue;
            }
            let col = eig.eigenvectors.column(idx).into_owned();
            let coeffs = DMatrix::from_fn(self.dim_a, self.dim_b, |i, j| col[i * self.dim_b + j]);
            terms.push((val, BipartiteVector { coeffs }));
        }
        Ok(terms)
    }
}

fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<DVector<f64>> {
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or(Error::EigenFailed { dim: m.nrows() })?;
    Ok(eig.eigenvalues)
}

/// A convex mixture `Σ_i p_i |ω_i⟩⟨ω_i|` kept in decomposed form.
///
/// Terms need not be orthogonal; constructors that require an orthonormal
/// decomposition check it themselves.
#[derive(Debug, Clone)]
pub struct PureMixture {
    dim_a: usize,
    dim_b: usize,
    terms: Vec<(f64, BipartiteVector)>,
}

impl PureMixture {
    /// Validates weights (nonnegative, summing to 1) and unit vectors of
    /// consistent dimensions.
    pub fn new(terms: Vec<(f64, BipartiteVector)>) -> Result<Self> {
        let (dim_a, dim_b) = match terms.first() {
            Some((_, v)) => (v.dim_a(), v.dim_b()),
            None => {
                return Err(Error::InvalidState("mixture needs at least one term".into()));
            }
        };
        let mut sum = 0.0;
        for (w, v) in &terms {
            if *w < -VALIDATION_TOL {
                return Err(Error::InvalidState(format!("negative weight {}", w)));
            }
            sum += w;
            v.check_dims(dim_a, dim_b)?;
            if (v.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidState(format!(
                    "mixture vector has norm {:.9}, expected 1",
                    v.norm()
                )));
            }
        }
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidState(format!("weights sum {} != 1", sum)));
        }
        Ok(Self {
            dim_a,
            dim_b,
            terms,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn terms(&self) -> &[(f64, BipartiteVector)] {
        &self.terms
    }

    /// Whether the vectors form an orthonormal set within `tol`.
    pub fn is_orthonormal(&self, tol: f64) -> bool {
        for (i, (_, vi)) in self.terms.iter().enumerate() {
            for (j, (_, vj)) in self.terms.iter().enumerate() {
                let g = vi.inner(vj).expect("dims validated").norm();
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Assembles the dense density operator `Σ p_i |ω_i⟩⟨ω_i|`.
    pub fn to_density(&self) -> DensityOperator {
        let d = self.dim_a * self.dim_b;
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (w, v) in &self.terms {
            let k = v.ket();
            let n2 = k.norm_squared();
            // gerc: m += (w/‖v‖²)·k k†, so each term contributes exactly w to the trace
            m.gerc(real(w / n2), &k, &k, real(1.0));
        }
        DensityOperator::from_valid_parts(self.dim_a, self.dim_b, m)
    }
}

/// `Σ p_i |ω_i⟩⟨ω_i|` as a dense [`DensityOperator`], after validating the
/// mixture.
pub fn assemble_mixture(terms: Vec<(f64, BipartiteVector)>) -> Result<DensityOperator> {
    Ok(PureMixture::new(terms)?.to_density())
}

/// Closed-form weight families for [`SequenceVector`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFamily {
    /// `c_i ∝ 1/(i+1)`; squared weights sum to `π²/6`.
    InverseLinear,
    /// `c_i ∝ r^i` for `0 < r < 1`; squared weights sum to `1/(1−r²)`.
    Geometric { ratio: f64 },
    /// Equal weights on `i < len`, zero beyond.
    FiniteUniform { len: usize },
}

/// An infinite-dimensional bipartite vector of weighted-shift form
/// `Σ_i c_i |(i+s) i⟩` with a closed-form, square-summable weight family.
///
/// The coefficient matrix is a shifted diagonal, so its operator norm is
/// the supremum weight, available exactly. Only this shifted-diagonal
/// shape is supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceVector {
    family: WeightFamily,
    shift: usize,
}

impl SequenceVector {
    pub fn new(family: WeightFamily, shift: usize) -> Result<Self> {
        match family {
            WeightFamily::Geometric { ratio } if !(ratio > 0.0 && ratio < 1.0) => {
                return Err(Error::InvalidConfig(format!(
                    "geometric ratio must lie in (0, 1), got {}",
                    ratio
                )));
            }
            WeightFamily::FiniteUniform { len: 0 } => {
                return Err(Error::InvalidConfig(
                    "finite-uniform family needs positive support".into(),
                ));
            }
            _ => {}
        }
        Ok(Self { family, shift })
    }

    pub fn family(&self) -> WeightFamily {
        self.family
    }

    /// Row shift `s`: the vector is `Σ_i c_i |(i+s) i⟩`.
    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Unnormalized closed-form weight at index `i`.
    pub fn raw_weight(&self, i: usize) -> f64 {
        match self.family {
            WeightFamily::InverseLinear => 1.0 / (i as f64 + 1.0),
            WeightFamily::Geometric { ratio } => ratio.powi(i as i32),
            WeightFamily::FiniteUniform { len } => {
                if i < len {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Squared normalizer `1 / Σ_i raw(i)²`, from the closed form.
    pub fn normalizer_sq(&self) -> f64 {
        match self.family {
            WeightFamily::InverseLinear => 6.0 / (std::f64::consts::PI * std::f64::consts::PI),
            WeightFamily::Geometric { ratio } => 1.0 - ratio * ratio,
            WeightFamily::FiniteUniform { len } => 1.0 / len as f64,
        }
    }

    /// Normalizing scalar making the full vector unit norm.
    pub fn normalizer(&self) -> f64 {
        self.normalizer_sq().sqrt()
    }

    /// Normalized weight `c_i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.normalizer() * self.raw_weight(i)
    }

    /// Exact squared operator norm of the coefficient operator: the
    /// weights decrease, so `‖D‖² = c_0²` in closed form.
    pub fn operator_norm_sq(&self) -> f64 {
        self.normalizer_sq() * self.raw_weight(0) * self.raw_weight(0)
    }

    /// Exact operator norm `‖D‖ = sup_i |c_i|`.
    pub fn operator_norm(&self) -> f64 {
        self.operator_norm_sq().sqrt()
    }

    /// Upper bound on the squared norm of the discarded tail `Σ_{i≥n} c_i²`.
    /// Exact for the geometric and finite families.
    pub fn tail_sq_bound(&self, n: usize) -> f64 {
        if n == 0 {
            return 1.0;
        }
        match self.family {
            // Σ_{k>n} k⁻² < 1/n
            WeightFamily::InverseLinear => self.normalizer_sq() / n as f64,
            WeightFamily::Geometric { ratio } => ratio.powi(2 * n as i32),
            WeightFamily::FiniteUniform { len } => {
                if n >= len {
                    0.0
                } else {
                    (len - n) as f64 / len as f64
                }
            }
        }
    }

    /// Smallest truncation length whose tail bound is below `tail_tol`,
    /// capped at `cap`.
    pub fn truncation_for_tail(&self, tail_tol: f64, cap: usize) -> usize {
        let mut n = 1;
        while n < cap && self.tail_sq_bound(n) > tail_tol {
            n += 1;
        }
        n
    }

    /// First `n` terms with the exact full-family normalizer, on
    /// `(n + shift) × n` local dimensions. Not renormalized: the result
    /// has norm `< 1` by the discarded tail.
    pub fn truncated(&self, n: usize) -> BipartiteVector {
        let spec = TruncationSpec {
            rows: n + self.shift,
            cols: n,
        };
        self.compressed(&spec)
    }

    /// As [`Self::truncated`], renormalized to unit norm.
    pub fn truncated_unit(&self, n: usize) -> Result<BipartiteVector> {
        self.truncated(n).normalized()
    }

    /// Compression `(P_rows ⊗ Q_cols)|ω⟩` keeping entries with
    /// `i + shift < rows` and `i < cols`, with the exact normalizer.
    pub fn compressed(&self, spec: &TruncationSpec) -> BipartiteVector {
        let mut coeffs = DMatrix::zeros(spec.rows, spec.cols);
        let keep = spec.cols.min(spec.rows.saturating_sub(self.shift));
        let scale = self.normalizer();
        for i in 0..keep {
            coeffs[(i + self.shift, i)] = real(scale * self.raw_weight(i));
        }
        BipartiteVector { coeffs }
    }
}

/// `Tr(P ρ P)⁻¹ · P ρ P` for the product projection `P = P_rows ⊗ Q_cols`:
/// the compression of `ρ` to the leading product subspace, renormalized.
pub fn truncate_normalize(rho: &DensityOperator, spec: &TruncationSpec) -> Result<DensityOperator> {
    let ka = spec.rows.min(rho.dim_a());
    let lb = spec.cols.min(rho.dim_b());
    let d = ka * lb;
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 0..ka {
        for j in 0..lb {
            for k in 0..ka {
                for l in 0..lb {
                    m[(i * lb + j, k * lb + l)] =
                        rho.matrix()[(i * rho.dim_b() + j, k * rho.dim_b() + l)];
                }
            }
        }
    }
    let trace = m.trace().re;
    if trace <= VALIDATION_TOL {
        return Err(Error::TruncationAnnihilatesState {
            trace,
            tol: VALIDATION_TOL,
        });
    }
    m /= real(trace);
    Ok(DensityOperator::from_valid_parts(ka, lb, m))
}

/// Truncates a mixture of weighted-shift vectors: every term is
/// compressed by the same projection and the whole mixture is
/// renormalized by the total compressed trace.
pub fn truncate_normalize_mixture(
    terms: &[(f64, SequenceVector)],
    spec: &TruncationSpec,
) -> Result<PureMixture> {
    let mut compressed = Vec::with_capacity(terms.len());
    let mut total = 0.0;
    for (w, v) in terms {
        let c = v.compressed(spec);
        let mass = w * c.norm().powi(2);
        total += mass;
        compressed.push((mass, c));
    }
    if total <= VALIDATION_TOL {
        return Err(Error::TruncationAnnihilatesState {
            trace: total,
            tol: VALIDATION_TOL,
        });
    }
    let mut out = Vec::new();
    for (mass, c) in compressed {
        if mass <= f64::EPSILON {
            continue;
        }
        out.push((mass / total, c.normalized()?));
    }
    PureMixture::new(out)
}

/// Truncation spec covering `n` weights of every term in a shift-family
/// mixture: `(n + max shift) × n`.
pub fn sequence_truncation_spec(terms: &[(f64, SequenceVector)], n: usize) -> TruncationSpec {
    let max_shift = terms.iter().map(|(_, v)| v.shift()).max().unwrap_or(0);
    TruncationSpec {
        rows: n + max_shift,
        cols: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cv(xs: &[f64]) -> DVector<C64> {
        DVector::from_iterator(xs.len(), xs.iter().map(|&x| real(x)))
    }

    #[test]
    fn product_overlap_basis_aligned() {
        let w = BipartiteVector::basis_state(2, 2, 0, 0);
        let got = w.product_overlap(&cv(&[1.0, 0.0]), &cv(&[1.0, 0.0])).unwrap();
        assert_eq!(got, real(1.0));
    }

    #[test]
    fn product_overlap_off_diagonal_of_bell() {
        let w = BipartiteVector::maximally_entangled(2);
        let got = w.product_overlap(&cv(&[1.0, 0.0]), &cv(&[0.0, 1.0])).unwrap();
        assert_eq!(got.norm(), 0.0);
    }

    #[test]
    fn product_overlap_uniform_on_maximally_entangled() {
        // ⟨α⊗β|ω₁⟩ = Σ_ij d_ij ᾱ_i β̄_j = 3 · (1/√3)(1/√3)(1/√3) = 1/√3
        let w = BipartiteVector::maximally_entangled(3);
        let u = 1.0 / 3f64.sqrt();
        let got = w
            .product_overlap(&cv(&[u, u, u]), &cv(&[u, u, u]))
            .unwrap();
        assert!((got.re - u).abs() < 1e-15, "{got}");
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn product_overlap_rejects_mismatched_axes() {
        let w = BipartiteVector::maximally_entangled(3);
        let err = w.product_overlap(&cv(&[1.0, 0.0]), &cv(&[1.0, 0.0, 0.0]));
        match err {
            Err(Error::DimensionMismatch { axis: "dim_a", .. }) => {}
            other => panic!("expected dim_a mismatch, got {:?}", other),
        }
    }

    #[test]
    fn coefficient_norm_of_maximally_entangled() {
        for n in [2usize, 3, 5] {
            let w = BipartiteVector::maximally_entangled(n);
            let got = w.coefficient_norm();
            assert!((got - 1.0 / (n as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficient_norm_of_product_vector_is_one() {
        let alpha = cv(&[0.6, 0.8]);
        let beta = cv(&[1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt()]);
        let w = BipartiteVector::product(&alpha, &beta);
        assert!((w.coefficient_norm() - 1.0).abs() < 1e-12);
        assert!((w.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficient_norm_of_truncated_inverse_linear() {
        // sup weight sits at i = 0, so the truncated SVD reproduces √6/π
        let v = SequenceVector::new(WeightFamily::InverseLinear, 0).unwrap();
        let got = v.truncated(200).coefficient_norm();
        assert!((got - 6f64.sqrt() / PI).abs() < 1e-4, "got {got}");
    }

    #[test]
    fn shift_family_norms() {
        for shift in 0..3 {
            let v = SequenceVector::new(WeightFamily::InverseLinear, shift).unwrap();
            assert_eq!(v.operator_norm_sq(), 6.0 / (PI * PI));
            assert!((v.operator_norm() - 6f64.sqrt() / PI).abs() < 1e-15);
        }
        let u = SequenceVector::new(WeightFamily::FiniteUniform { len: 4 }, 0).unwrap();
        assert!((u.operator_norm() - 0.5).abs() < 1e-15);
        // Σ 4⁻ⁱ = 4/3, so the sup weight is 1/√(4/3) = √3/2
        let g = SequenceVector::new(WeightFamily::Geometric { ratio: 0.5 }, 1).unwrap();
        assert!((g.operator_norm() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let svd = g.truncated(80).coefficient_norm();
        assert!((svd - 3f64.sqrt() / 2.0).abs() < 1e-12, "svd {svd}");
    }

    #[test]
    fn truncation_keeps_block_supported_state() {
        let bell = BipartiteVector::maximally_entangled(2).embedded(4, 4).unwrap();
        let rho = assemble_mixture(vec![(1.0, bell.clone())]).unwrap();
        let spec = TruncationSpec::new(2, 2).unwrap();
        let got = truncate_normalize(&rho, &spec).unwrap();
        let want = assemble_mixture(vec![(1.0, BipartiteVector::maximally_entangled(2))]).unwrap();
        assert!((got.matrix() - want.matrix()).norm() < 1e-12);
        // a spec beyond the support leaves the state untouched
        let wide = truncate_normalize(&rho, &TruncationSpec::new(8, 8).unwrap()).unwrap();
        assert!((wide.matrix() - rho.matrix()).norm() < 1e-12);
    }

    #[test]
    fn truncation_of_ghz_like_vector_gives_bell() {
        // compressing (|00⟩+|11⟩+|22⟩)/√3 to 2×2 and renormalizing gives
        // the projector onto (|00⟩+|11⟩)/√2
        let w = BipartiteVector::maximally_entangled(3);
        let rho = assemble_mixture(vec![(1.0, w)]).unwrap();
        let got = truncate_normalize(&rho, &TruncationSpec::new(2, 2).unwrap()).unwrap();
        let want = assemble_mixture(vec![(1.0, BipartiteVector::maximally_entangled(2))]).unwrap();
        assert!((got.matrix() - want.matrix()).norm() < 1e-12);
        assert!((got.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_annihilation_is_reported() {
        let w = BipartiteVector::basis_state(3, 3, 2, 2);
        let rho = assemble_mixture(vec![(1.0, w)]).unwrap();
        let err = truncate_normalize(&rho, &TruncationSpec::new(2, 2).unwrap());
        assert!(matches!(err, Err(Error::TruncationAnnihilatesState { .. })));
    }

    #[test]
    fn mixture_truncation_trace_grows_monotonically() {
        // compressed mass of the inverse-linear family is the partial sum
        // (6/π²) Σ_{i<n} (i+1)⁻², monotone increasing toward 1
        let terms: Vec<(f64, SequenceVector)> = (0..3)
            .map(|s| {
                (
                    [0.5, 0.3, 0.2][s],
                    SequenceVector::new(WeightFamily::InverseLinear, s).unwrap(),
                )
            })
            .collect();
        let mut prev = 0.0;
        for n in [4usize, 8, 16, 32, 64] {
            let spec = sequence_truncation_spec(&terms, n);
            assert_eq!((spec.rows, spec.cols), (n + 2, n));
            let mass: f64 = terms
                .iter()
                .map(|(w, v)| w * v.compressed(&spec).norm().powi(2))
                .sum();
            let partial: f64 = (0..n).map(|i| 1.0 / ((i + 1) * (i + 1)) as f64).sum();
            assert!((mass - partial * 6.0 / (PI * PI)).abs() < 1e-12);
            assert!(mass > prev);
            prev = mass;
        }
        assert!(prev < 1.0 && prev > 0.98);
    }

    #[test]
    fn assemble_single_term_is_projector() {
        let w = BipartiteVector::maximally_entangled(2);
        let rho = assemble_mixture(vec![(1.0, w.clone())]).unwrap();
        assert!((rho.matrix() - w.projector()).norm() < 1e-14);
    }

    #[test]
    fn assemble_equal_mixture_is_diagonal() {
        let rho = assemble_mixture(vec![
            (0.5, BipartiteVector::basis_state(2, 2, 0, 0)),
            (0.5, BipartiteVector::basis_state(2, 2, 1, 1)),
        ])
        .unwrap();
        let mut want = DMatrix::<C64>::zeros(4, 4);
        want[(0, 0)] = real(0.5);
        want[(3, 3)] = real(0.5);
        assert_eq!(rho.matrix(), &want);
    }

    #[test]
    fn assemble_rejects_bad_weight_sum() {
        let err = assemble_mixture(vec![
            (0.5, BipartiteVector::basis_state(2, 2, 0, 0)),
            (0.4, BipartiteVector::basis_state(2, 2, 1, 1)),
        ]);
        match err {
            Err(Error::InvalidState(msg)) => assert!(msg.contains("weights sum 0.9"), "{msg}"),
            other => panic!("expected weight-sum error, got {:?}", other),
        }
    }

    #[test]
    fn density_validation_catches_bad_inputs() {
        // non-Hermitian
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = real(1.0);
        m[(0, 1)] = real(0.5);
        assert!(matches!(
            DensityOperator::new(2, 2, m),
            Err(Error::NotHermitian { .. })
        ));
        // wrong trace
        let m = DMatrix::<C64>::identity(4, 4);
        assert!(matches!(
            DensityOperator::new(2, 2, m),
            Err(Error::InvalidState(_))
        ));
        // negative eigenvalue
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = real(1.5);
        m[(1, 1)] = real(-0.5);
        assert!(matches!(
            DensityOperator::new(2, 2, m),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn eigen_mixture_recovers_rank_one() {
        let w = BipartiteVector::maximally_entangled(3);
        let rho = assemble_mixture(vec![(1.0, w.clone())]).unwrap();
        let terms = rho.eigen_mixture(1e-9).unwrap();
        assert_eq!(terms.len(), 1);
        assert!((terms[0].0 - 1.0).abs() < 1e-10);
        let overlap = terms[0].1.inner(&w).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sequence_tail_bounds() {
        let v = SequenceVector::new(WeightFamily::InverseLinear, 0).unwrap();
        let tail64: f64 = (64..200_000).map(|i| v.weight(i).powi(2)).sum();
        assert!(tail64 <= v.tail_sq_bound(64));
        assert!(v.tail_sq_bound(64) < 0.01);
        let g = SequenceVector::new(WeightFamily::Geometric { ratio: 0.5 }, 0).unwrap();
        assert_eq!(g.truncation_for_tail(1e-10, 4096), 17);
        assert!(g.tail_sq_bound(17) < 1e-10);
    }
}
