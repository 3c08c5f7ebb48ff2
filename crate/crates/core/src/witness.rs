//! Finite-rank entanglement witnesses: construction, evaluation, and
//! numerical certification.
//!
//! A witness is `W = αI + Σ_k λ_k |ω_k⟩⟨ω_k|` with orthonormal `ω_k`.
//! `Tr(Wσ) ≥ 0` for every separable `σ` together with non-positivity of
//! `W` makes it an entanglement witness; `Tr(Wρ) < 0` then certifies `ρ`
//! entangled. The constructors here implement the two special forms
//! `c_T I − T` (from the coefficient-norm bound `c_T = Σ|λ_k|‖D_k‖²`) and
//! `‖D_{k₀}‖² I − |ω_{k₀}⟩⟨ω_{k₀}|`.

use serde::{Deserialize, Serialize};

use crate::bipartite::{
    sequence_truncation_spec, BipartiteVector, DensityOperator, PureMixture, SequenceVector,
};
use crate::criteria::{CriterionReport, REPORT_TOL};
use crate::error::{Error, Result};
use crate::optimizer::{seesaw_max_terms, OptimizerConfig};

/// Orthonormality tolerance for witness terms.
const ORTHO_TOL: f64 = 1e-9;

/// Default certification tolerance: the separable infimum may sit this
/// far below zero and still count as certified (see-saw noise).
pub const DEFAULT_CERT_TOL: f64 = 1e-6;

/// Outcome of a numerical certification run.
///
/// A see-saw infimum is a numerical certificate, not a proof; consumers
/// can judge confidence from the recorded restarts and tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certification {
    /// Computed infimum of `⟨α⊗β|W|α⊗β⟩` over unit product vectors.
    pub infimum: f64,
    pub method: String,
    pub restarts: usize,
    pub tolerance: f64,
    pub certified: bool,
}

/// `W = αI + Σ_k λ_k |ω_k⟩⟨ω_k|` with pairwise orthonormal `ω_k`.
#[derive(Debug, Clone)]
pub struct FiniteRankWitness {
    alpha: f64,
    terms: Vec<(f64, BipartiteVector)>,
    certification: Option<Certification>,
}

impl FiniteRankWitness {
    /// Validates term dimensions and pairwise orthonormality.
    pub fn new(alpha: f64, terms: Vec<(f64, BipartiteVector)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidWitness(
                "witness needs at least one rank-one term".into(),
            ));
        }
        let (da, db) = (terms[0].1.dim_a(), terms[0].1.dim_b());
        for (_, v) in &terms {
            if v.dim_a() != da || v.dim_b() != db {
                return Err(Error::DimensionMismatch {
                    axis: "dim_a",
                    expected: da,
                    actual: v.dim_a(),
                });
            }
        }
        for (i, (_, vi)) in terms.iter().enumerate() {
            for (j, (_, vj)) in terms.iter().enumerate().skip(i) {
                let g = vi.inner(vj)?.norm();
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > ORTHO_TOL {
                    return Err(Error::InvalidWitness(format!(
                        "terms {i} and {j} are not orthonormal: |<w_i|w_j>| = {g:.3e}"
                    )));
                }
            }
        }
        Ok(Self {
            alpha,
            terms,
            certification: None,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn terms(&self) -> &[(f64, BipartiteVector)] {
        &self.terms
    }

    pub fn dim_a(&self) -> usize {
        self.terms[0].1.dim_a()
    }

    pub fn dim_b(&self) -> usize {
        self.terms[0].1.dim_b()
    }

    pub fn certification(&self) -> Option<&Certification> {
        self.certification.as_ref()
    }

    /// Attaches a certification record.
    pub fn with_certification(mut self, cert: Certification) -> Self {
        self.certification = Some(cert);
        self
    }

    /// Whether `W` fails positive semidefiniteness.
    ///
    /// Decided from the compression of the finite-rank part to its own
    /// range, which is exact: in the orthonormal term basis that
    /// compression is `diag(λ)`, so `W` is non-positive iff
    /// `α + min_k λ_k < -tol`, or `α < -tol` when the terms do not span
    /// the whole space.
    pub fn is_non_positive(&self) -> bool {
        let min_lambda = self
            .terms
            .iter()
            .map(|(l, _)| *l)
            .fold(f64::INFINITY, f64::min);
        if self.alpha + min_lambda < -REPORT_TOL {
            return true;
        }
        let range_is_proper = self.terms.len() < self.dim_a() * self.dim_b();
        range_is_proper && self.alpha < -REPORT_TOL
    }

    /// Whether this operator has the entanglement-witness form: `α ≥ 0`
    /// and `W` not positive semidefinite.
    pub fn is_witness(&self) -> bool {
        self.alpha >= -REPORT_TOL && self.is_non_positive()
    }

    /// `Tr(Wρ) = α·Tr(ρ) + Σ_k λ_k ⟨ω_k|ρ|ω_k⟩`.
    pub fn evaluate(&self, rho: &DensityOperator) -> Result<f64> {
        if rho.dim_a() != self.dim_a() || rho.dim_b() != self.dim_b() {
            return Err(Error::DimensionMismatch {
                axis: "dim_a",
                expected: self.dim_a(),
                actual: rho.dim_a(),
            });
        }
        let mut acc = self.alpha * rho.trace();
        for (lam, w) in &self.terms {
            acc += lam * rho.expectation(w)?;
        }
        Ok(acc)
    }

    /// `Tr(Wρ)` for a state kept in decomposed form, without assembling
    /// the dense operator.
    pub fn evaluate_mixture(&self, mix: &PureMixture) -> Result<f64> {
        if mix.dim_a() != self.dim_a() || mix.dim_b() != self.dim_b() {
            return Err(Error::DimensionMismatch {
                axis: "dim_a",
                expected: self.dim_a(),
                actual: mix.dim_a(),
            });
        }
        let mut acc = self.alpha;
        for (lam, w) in &self.terms {
            for (p, v) in mix.terms() {
                acc += lam * p * w.inner(v)?.norm_sqr();
            }
        }
        Ok(acc)
    }

    /// Detection report for `Tr(Wρ)`; detected iff the value clears
    /// `-REPORT_TOL`.
    pub fn report(&self, rho: &DensityOperator) -> Result<CriterionReport> {
        self.report_with_tol(rho, REPORT_TOL)
    }

    pub fn report_with_tol(&self, rho: &DensityOperator, tol: f64) -> Result<CriterionReport> {
        let margin = self.evaluate(rho)?;
        Ok(CriterionReport::negative_side(
            "witness",
            margin,
            (self.dim_a(), self.dim_b()),
            tol,
        ))
    }

    /// The dense matrix `αI + Σ λ_k |ω_k⟩⟨ω_k|`; for tests and small dims.
    pub fn to_matrix(&self) -> nalgebra::DMatrix<crate::C64> {
        let d = self.dim_a() * self.dim_b();
        let mut m = nalgebra::DMatrix::identity(d, d) * crate::C64::new(self.alpha, 0.0);
        for (lam, w) in &self.terms {
            let k = w.ket();
            m.gerc(crate::C64::new(*lam, 0.0), &k, &k, crate::C64::new(1.0, 0.0));
        }
        m
    }

    /// The same witness on an enlarged local space, terms zero-padded.
    pub fn embedded(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(l, w)| Ok((*l, w.embedded(dim_a, dim_b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha: self.alpha,
            terms,
            certification: self.certification.clone(),
        })
    }

    /// Computes `inf ⟨α⊗β|W|α⊗β⟩ = α + min over products of
    /// Σ_k λ_k |⟨ω_k|α⊗β⟩|²` by running the see-saw on the negated
    /// finite-rank part. Certified iff the infimum clears `-cert_tol`.
    pub fn certify_with_tol(&self, cfg: &OptimizerConfig, cert_tol: f64) -> Result<Certification> {
        let negated: Vec<(f64, BipartiteVector)> =
            self.terms.iter().map(|(l, w)| (-l, w.clone())).collect();
        let max = seesaw_max_terms(&negated, (self.dim_a(), self.dim_b()), cfg)?;
        let infimum = self.alpha - max.value;
        Ok(Certification {
            infimum,
            method: "seesaw".into(),
            restarts: cfg.restarts,
            tolerance: cert_tol,
            certified: infimum >= -cert_tol,
        })
    }

    pub fn certify(&self, cfg: &OptimizerConfig) -> Result<Certification> {
        self.certify_with_tol(cfg, DEFAULT_CERT_TOL)
    }

    /// Runs [`Self::certify`] and attaches the record.
    pub fn certified(self, cfg: &OptimizerConfig) -> Result<Self> {
        let cert = self.certify(cfg)?;
        Ok(self.with_certification(cert))
    }
}

/// `c_T = Σ_k |λ_k| ‖D_k‖²`: an upper bound on `|Tr(Tσ)|` over separable
/// `σ` for `T = Σ_k λ_k |ω_k⟩⟨ω_k|`.
pub fn c_bound(terms: &[(f64, BipartiteVector)]) -> f64 {
    terms
        .iter()
        .map(|(lam, w)| lam.abs() * w.coefficient_norm().powi(2))
        .sum()
}

fn require_orthonormal(mix: &PureMixture) -> Result<()> {
    if !mix.is_orthonormal(ORTHO_TOL) {
        return Err(Error::InvalidWitness(
            "construction requires an orthonormal decomposition".into(),
        ));
    }
    Ok(())
}

/// `W = c_{ρ₁} I − ρ₁` for `ρ₁` given as an orthonormal mixture.
///
/// The result is a valid entanglement witness iff it is non-positive,
/// i.e. the largest mixture weight exceeds `c_{ρ₁}`; query
/// [`FiniteRankWitness::is_witness`] for the flag.
pub fn special_witness(rho1: &PureMixture) -> Result<FiniteRankWitness> {
    require_orthonormal(rho1)?;
    let c = c_bound(rho1.terms());
    let terms = rho1.terms().iter().map(|(p, w)| (-p, w.clone())).collect();
    FiniteRankWitness::new(c, terms)
}

/// `W = ‖D_{k₀}‖² I − |ω_{k₀}⟩⟨ω_{k₀}|` for an orthonormal mixture
/// `ρ = Σ_k p_k |ω_k⟩⟨ω_k|`, plus its detection report on that same
/// state: `Tr(Wρ) = ‖D_{k₀}‖² − p_{k₀}`, detected iff negative.
pub fn corollary_witness(
    mix: &PureMixture,
    k0: usize,
) -> Result<(FiniteRankWitness, CriterionReport)> {
    require_orthonormal(mix)?;
    let (p, w) = mix
        .terms()
        .get(k0)
        .ok_or(Error::IndexOutOfRange {
            index: k0,
            len: mix.terms().len(),
        })?
        .clone();
    let alpha = w.coefficient_norm().powi(2);
    let witness = FiniteRankWitness::new(alpha, vec![(-1.0, w)])?;
    let margin = alpha - p;
    let report = CriterionReport::negative_side(
        "witness",
        margin,
        (mix.dim_a(), mix.dim_b()),
        REPORT_TOL,
    );
    Ok((witness, report))
}

fn check_sequence_mixture(terms: &[(f64, SequenceVector)]) -> Result<()> {
    if terms.is_empty() {
        return Err(Error::InvalidState("mixture needs at least one term".into()));
    }
    let sum: f64 = terms.iter().map(|(p, _)| *p).sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("weights sum {sum} != 1")));
    }
    for (i, (_, a)) in terms.iter().enumerate() {
        for (_, b) in terms.iter().skip(i + 1) {
            if a.shift() == b.shift() {
                // shifted diagonals with equal shifts overlap, so the
                // decomposition cannot be orthonormal
                return Err(Error::InvalidWitness(
                    "sequence mixture terms must have pairwise distinct shifts".into(),
                ));
            }
        }
    }
    Ok(())
}

/// [`corollary_witness`] over a weighted-shift mixture. The identity
/// coefficient uses the exact closed-form norm of the infinite family;
/// the rank-one term is the unit-normalized compression covering `n`
/// weights, so the detection margin `‖D_{k₀}‖² − p_{k₀}` is reproduced
/// exactly by evaluation against the matching truncated state.
pub fn corollary_witness_sequence(
    terms: &[(f64, SequenceVector)],
    k0: usize,
    n: usize,
) -> Result<(FiniteRankWitness, CriterionReport)> {
    check_sequence_mixture(terms)?;
    let (p, v) = terms.get(k0).ok_or(Error::IndexOutOfRange {
        index: k0,
        len: terms.len(),
    })?;
    let spec = sequence_truncation_spec(terms, n);
    let alpha = v.operator_norm_sq();
    let term = v.compressed(&spec).normalized()?;
    let witness = FiniteRankWitness::new(alpha, vec![(-1.0, term)])?;
    let margin = alpha - p;
    let report =
        CriterionReport::negative_side("witness", margin, (spec.rows, spec.cols), REPORT_TOL);
    Ok((witness, report))
}

/// [`special_witness`] over a weighted-shift mixture:
/// `W = (Σ_k p_k ‖D_k‖²) I − ρ₁` with exact closed-form norms and terms
/// truncated to `n` weights.
pub fn special_witness_sequence(
    terms: &[(f64, SequenceVector)],
    n: usize,
) -> Result<FiniteRankWitness> {
    check_sequence_mixture(terms)?;
    let spec = sequence_truncation_spec(terms, n);
    let c = terms
        .iter()
        .map(|(p, v)| p * v.operator_norm_sq())
        .sum::<f64>();
    let rank_terms = terms
        .iter()
        .map(|(p, v)| Ok((-p, v.compressed(&spec).normalized()?)))
        .collect::<Result<Vec<_>>>()?;
    FiniteRankWitness::new(c, rank_terms)
}
