//! Built-in state families used by the reproduction commands and as
//! test fixtures.
//!
//! Three families are bundled:
//!
//! * the *shift family*: three weighted-shift vectors with inverse-linear
//!   weights and row shifts 0, 1, 2 on an infinite-dimensional system;
//! * the *cyclic basis*: the `n` maximally entangled vectors
//!   `ω_k = (1/√n) Σ_i |i, (i+k) mod n⟩`, an orthonormal family whose
//!   equal mixture is separable;
//! * the *qutrit triple*: two cyclic-basis projectors on a 3×3 system
//!   plus the diagonal component `(|02⟩⟨02| + |10⟩⟨10| + |21⟩⟨21|)/3`,
//!   whose mixtures `ρ(q) = q₁ρ₁ + q₂ρ₂ + q₃ρ₃` have a closed-form PPT
//!   condition `q₁q₂q₃ ≥ q₁³ + q₂³`.

use nalgebra::DMatrix;

use crate::bipartite::{
    BipartiteVector, DensityOperator, PureMixture, SequenceVector, WeightFamily,
};
use crate::error::Result;
use crate::hyperplane::{witness_from_plane, FeatureMap};
use crate::witness::FiniteRankWitness;
use crate::C64;

/// The inverse-linear weighted-shift vectors with shifts 0, 1, 2.
pub fn shift_family() -> [SequenceVector; 3] {
    [0, 1, 2].map(|s| SequenceVector::new(WeightFamily::InverseLinear, s).expect("valid family"))
}

/// The shift family weighted by `p`.
pub fn shift_family_mixture(p: [f64; 3]) -> Vec<(f64, SequenceVector)> {
    shift_family().into_iter().zip(p).map(|(v, w)| (w, v)).collect()
}

/// `ω_k = (1/√n) Σ_i |i, (i+k) mod n⟩` for `k = 0 … n−1`.
pub fn cyclic_basis(n: usize) -> Vec<BipartiteVector> {
    (0..n)
        .map(|k| {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, (i + k) % n)] = C64::new(1.0 / (n as f64).sqrt(), 0.0);
            }
            BipartiteVector::new(m).expect("positive dims")
        })
        .collect()
}

/// Mixture `Σ_k q_k |ω_k⟩⟨ω_k|` over the cyclic basis.
pub fn cyclic_mixture(q: &[f64]) -> Result<PureMixture> {
    let basis = cyclic_basis(q.len());
    PureMixture::new(q.iter().copied().zip(basis).collect())
}

/// The two entangled projectors and the diagonal component of the
/// qutrit triple, as density operators.
pub fn qutrit_components() -> [DensityOperator; 3] {
    let basis = cyclic_basis(3);
    let rho1 = PureMixture::new(vec![(1.0, basis[0].clone())])
        .expect("unit vector")
        .to_density();
    let rho2 = PureMixture::new(vec![(1.0, basis[1].clone())])
        .expect("unit vector")
        .to_density();
    let rho3 = PureMixture::new(
        qutrit_diagonal_vectors()
            .into_iter()
            .map(|v| (1.0 / 3.0, v))
            .collect(),
    )
    .expect("unit vectors")
    .to_density();
    [rho1, rho2, rho3]
}

/// `|02⟩, |10⟩, |21⟩`: the support of the diagonal component.
fn qutrit_diagonal_vectors() -> [BipartiteVector; 3] {
    [(0, 2), (1, 0), (2, 1)].map(|(i, j)| BipartiteVector::basis_state(3, 3, i, j))
}

/// `ρ(q) = q₁ρ₁ + q₂ρ₂ + q₃ρ₃` as a pure decomposition (five terms:
/// the two entangled projectors and the three diagonal basis states at
/// weight `q₃/3` each).
pub fn qutrit_mixture(q: [f64; 3]) -> Result<PureMixture> {
    let basis = cyclic_basis(3);
    let mut terms = vec![(q[0], basis[0].clone()), (q[1], basis[1].clone())];
    for v in qutrit_diagonal_vectors() {
        terms.push((q[2] / 3.0, v));
    }
    PureMixture::new(terms)
}

/// Dense form of [`qutrit_mixture`].
pub fn qutrit_state(q: [f64; 3]) -> Result<DensityOperator> {
    Ok(qutrit_mixture(q)?.to_density())
}

/// The feature map over the qutrit triple.
pub fn qutrit_feature_map() -> FeatureMap {
    FeatureMap::new(qutrit_components().to_vec()).expect("orthogonal components")
}

/// `W = I − f₁ρ₁ − f₂ρ₂ − f₃ρ₃` expanded into rank-one terms.
pub fn qutrit_witness(f: [f64; 3]) -> FiniteRankWitness {
    witness_from_plane(&qutrit_feature_map(), &f).expect("orthonormal component eigenvectors")
}

/// Three-valued answer for the closed-form PPT condition, keeping
/// numerically boundary cases out of both verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PptCondition {
    Holds,
    Violated,
    Boundary,
}

/// `q₁q₂q₃ − q₁³ − q₂³`: nonnegative exactly when `ρ(q)` is PPT.
pub fn qutrit_ppt_condition(q: [f64; 3]) -> f64 {
    q[0] * q[1] * q[2] - q[0].powi(3) - q[1].powi(3)
}

/// Classifies [`qutrit_ppt_condition`] with a `tol`-wide boundary band.
pub fn qutrit_ppt_predicate(q: [f64; 3], tol: f64) -> PptCondition {
    let c = qutrit_ppt_condition(q);
    if c > tol {
        PptCondition::Holds
    } else if c < -tol {
        PptCondition::Violated
    } else {
        PptCondition::Boundary
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{ppt_check, Verdict};

    #[test]
    fn cyclic_basis_is_orthonormal() {
        for n in [2usize, 3, 4] {
            let q = vec![1.0 / n as f64; n];
            let mix = cyclic_mixture(&q).unwrap();
            assert!(mix.is_orthonormal(1e-12));
        }
    }

    #[test]
    fn qutrit_mixture_matches_component_combination() {
        let q = [0.2, 0.3, 0.5];
        let rho = qutrit_state(q).unwrap();
        let [r1, r2, r3] = qutrit_components();
        let want = r1.matrix() * C64::new(q[0], 0.0)
            + r2.matrix() * C64::new(q[1], 0.0)
            + r3.matrix() * C64::new(q[2], 0.0);
        assert!((rho.matrix() - want).norm() < 1e-14);
    }

    #[test]
    fn qutrit_state_matches_reference_pattern() {
        // the same family written in (second ⊗ first) index ordering and
        // scaled by 3 has q₁ blocks on {00,11,22}, a q₂ block on the
        // cyclic triple and q₃ on the remaining diagonal
        let q = [0.2, 0.3, 0.5];
        let rho = qutrit_state(q).unwrap();
        let mut swapped = DMatrix::<C64>::zeros(9, 9);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        swapped[(3 * j + i, 3 * l + k)] =
                            rho.matrix()[(3 * i + j, 3 * k + l)] * C64::new(3.0, 0.0);
                    }
                }
            }
        }
        let (q1, q2, q3) = (q[0], q[1], q[2]);
        let mut want = DMatrix::<C64>::zeros(9, 9);
        for &r in &[0usize, 4, 8] {
            for &c in &[0usize, 4, 8] {
                want[(r, c)] = C64::new(q1, 0.0);
            }
        }
        for &r in &[2usize, 3, 7] {
            for &c in &[2usize, 3, 7] {
                want[(r, c)] = C64::new(q2, 0.0);
            }
        }
        for &r in &[1usize, 5, 6] {
            want[(r, r)] = C64::new(q3, 0.0);
        }
        assert!((swapped - want).norm() < 1e-12);
    }

    #[test]
    fn realign_matches_reference_pattern() {
        // realignment of ρ(q) in (second ⊗ first) ordering, scaled by 3:
        // q₁ down the diagonal, q₃ on the cyclic triple (0,4),(4,8),(8,0),
        // q₂ on the complementary cycle structure
        let q = [0.2, 0.3, 0.5];
        let mine = crate::criteria::realign_mixture(&qutrit_mixture(q).unwrap());
        let swapped = mine.transpose() * C64::new(3.0, 0.0);
        let mut want = DMatrix::<C64>::zeros(9, 9);
        for i in 0..9 {
            want[(i, i)] = C64::new(q[0], 0.0);
        }
        for &(r, c) in &[(0, 4), (4, 8), (8, 0)] {
            want[(r, c)] = C64::new(q[2], 0.0);
        }
        for &(r, c) in &[
            (0, 8),
            (1, 6),
            (2, 7),
            (3, 2),
            (4, 0),
            (5, 1),
            (6, 5),
            (7, 3),
            (8, 4),
        ] {
            want[(r, c)] = C64::new(q[1], 0.0);
        }
        assert!((swapped - want).norm() < 1e-12);
    }

    #[test]
    fn tangent_witness_certifies_with_zero_infimum() {
        let w = qutrit_witness([1.5, 0.3, 3.0]);
        let cfg = crate::optimizer::OptimizerConfig {
            restarts: 64,
            ..crate::optimizer::OptimizerConfig::with_seed(4)
        };
        let cert = w.certify_with_tol(&cfg, 1e-4).unwrap();
        assert!(cert.infimum.abs() <= 1e-4, "infimum {}", cert.infimum);
        assert!(cert.certified);
    }

    #[test]
    fn fixed_functional_at_equal_weights_has_no_violation() {
        // at q = (1/3, 1/3, 1/3) the tangent functional reaches only
        // f·L(ρ) = 1 + (0.5 − 0.7)/3 = 14/15 < 1: W₁ does not detect there
        let map = qutrit_feature_map();
        let rho = qutrit_state([1.0 / 3.0; 3]).unwrap();
        let l = crate::hyperplane::feature_vector(&map, &rho).unwrap();
        let fl: f64 = [1.5, 0.3, 3.0].iter().zip(&l).map(|(f, x)| f * x).sum();
        assert!((fl - 14.0 / 15.0).abs() < 1e-12, "f·L = {fl}");
        assert!(fl < 1.0);
        let tr = qutrit_witness([1.5, 0.3, 3.0]).evaluate(&rho).unwrap();
        assert!((tr - (1.0 - fl)).abs() < 1e-12);
        // the components themselves map to the coordinate points
        let e1 = crate::hyperplane::feature_vector(&map, &qutrit_components()[0]).unwrap();
        assert!((e1[0] - 1.0).abs() < 1e-12 && e1[1].abs() < 1e-12 && e1[2].abs() < 1e-12);
    }

    #[test]
    fn ppt_condition_at_known_points() {
        // equal weights: 1/27 < 2/27 violates the condition
        assert!(qutrit_ppt_condition([1.0 / 3.0; 3]) < 0.0);
        let rho = qutrit_state([1.0 / 3.0; 3]).unwrap();
        let rep = ppt_check(&rho).unwrap();
        assert_eq!(rep.verdict, Verdict::Detected);
        assert!(rep.margin < 0.0);

        // 0.014 >= 0.009: PPT holds
        assert!(qutrit_ppt_condition([0.2, 0.1, 0.7]) > 0.0);
        let rep = ppt_check(&qutrit_state([0.2, 0.1, 0.7]).unwrap()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotDetected);

        // 0.03125 < 0.140625: violated
        assert!(qutrit_ppt_condition([0.5, 0.25, 0.25]) < 0.0);
        let rep = ppt_check(&qutrit_state([0.5, 0.25, 0.25]).unwrap()).unwrap();
        assert_eq!(rep.verdict, Verdict::Detected);

        assert_eq!(
            qutrit_ppt_predicate([0.2, 0.1, 0.7], 1e-9),
            PptCondition::Holds
        );
        assert_eq!(
            qutrit_ppt_predicate([0.0, 0.0, 1.0], 1e-9),
            PptCondition::Boundary
        );
    }

    #[test]
    fn qutrit_witness_expands_to_five_terms() {
        let w = qutrit_witness([1.5, 0.3, 3.0]);
        assert_eq!(w.terms().len(), 5);
        assert!((w.alpha() - 1.0).abs() < 1e-15);
        assert!(w.is_witness());
    }
}
