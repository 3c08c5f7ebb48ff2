//! Automated separating-hyperplane search.
//!
//! Given mutually orthogonal components `ρ_1, …, ρ_n` and a target state
//! `ρ`, the feature map `L(T) = (Tr(ρ_1 T), …, Tr(ρ_n T))` sends the
//! separable set to a compact convex subset of `ℝⁿ`. A functional `f`
//! with `f·L(σ) ≤ 1` on every separable `σ` but `f·L(ρ) > 1` yields the
//! entanglement witness `W = I − Σ_i f_i ρ_i`.
//!
//! The search is a cutting-plane loop: a small LP maximizes `f·L(ρ)`
//! subject to `f·v ≤ 1` over a growing set `V` of product-state feature
//! vectors, and the product optimizer acts as the separation oracle on
//! `Σ_i f_i ρ_i`, feeding the feature vector of any violating maximizer
//! back into `V`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bipartite::{BipartiteVector, DensityOperator};
use crate::error::{Error, Result};
use crate::optimizer::{random_unit_vector, seesaw_max, OptimizerConfig};
use crate::witness::{Certification, FiniteRankWitness};
use crate::C64;

/// Mutually orthogonal state components spanning the feature space.
#[derive(Debug, Clone)]
pub struct FeatureMap {
    components: Vec<DensityOperator>,
}

impl FeatureMap {
    /// Validates pairwise orthogonality `ρ_i ρ_j = 0` and consistent
    /// dimensions.
    pub fn new(components: Vec<DensityOperator>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidConfig(
                "feature map needs at least one component".into(),
            ));
        }
        let (da, db) = (components[0].dim_a(), components[0].dim_b());
        for c in &components {
            if c.dim_a() != da || c.dim_b() != db {
                return Err(Error::DimensionMismatch {
                    axis: "dim_a",
                    expected: da,
                    actual: c.dim_a(),
                });
            }
        }
        for (i, a) in components.iter().enumerate() {
            for b in components.iter().skip(i + 1) {
                let prod = a.matrix() * b.matrix();
                if prod.norm() > 1e-9 {
                    return Err(Error::InvalidConfig(format!(
                        "components are not orthogonal: |rho_i rho_j| = {:.3e}",
                        prod.norm()
                    )));
                }
            }
        }
        Ok(Self { components })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim_a(&self) -> usize {
        self.components[0].dim_a()
    }

    pub fn dim_b(&self) -> usize {
        self.components[0].dim_b()
    }

    pub fn components(&self) -> &[DensityOperator] {
        &self.components
    }

    /// The combination `Σ_i f_i ρ_i` as a dense Hermitian matrix.
    fn combination(&self, f: &[f64]) -> nalgebra::DMatrix<C64> {
        let d = self.dim_a() * self.dim_b();
        let mut m = nalgebra::DMatrix::<C64>::zeros(d, d);
        for (fi, c) in f.iter().zip(&self.components) {
            m += c.matrix() * C64::new(*fi, 0.0);
        }
        m
    }
}

/// `L(ρ) = (Tr(ρ_1 ρ), …, Tr(ρ_n ρ))`.
pub fn feature_vector(map: &FeatureMap, rho: &DensityOperator) -> Result<Vec<f64>> {
    if rho.dim_a() != map.dim_a() || rho.dim_b() != map.dim_b() {
        return Err(Error::DimensionMismatch {
            axis: "dim_a",
            expected: map.dim_a(),
            actual: rho.dim_a(),
        });
    }
    Ok(map
        .components
        .iter()
        .map(|c| overlap_trace(c, rho))
        .collect())
}

/// `Tr(AB)` for Hermitian `A`, `B` of equal shape.
fn overlap_trace(a: &DensityOperator, b: &DensityOperator) -> f64 {
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..ma.nrows() {
        for j in 0..ma.ncols() {
            acc += ma[(i, j)] * mb[(j, i)];
        }
    }
    acc.re
}

fn feature_of_product(map: &FeatureMap, alpha: &DVector<C64>, beta: &DVector<C64>) -> Vec<f64> {
    let v = BipartiteVector::product(alpha, beta);
    map.components
        .iter()
        .map(|c| c.expectation(&v).expect("dims match"))
        .collect()
}

/// Settings for [`search`]. Oracle tolerance (`cut_tol`) and
/// certification tolerance are distinct so that see-saw noise does not
/// generate spurious cuts.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub optimizer: OptimizerConfig,
    pub max_rounds: usize,
    /// Oracle values above `1 + cut_tol` trigger a new cut.
    pub cut_tol: f64,
    /// After rescaling, the certified separable maximum must land within
    /// this distance of 1.
    pub certification_tol: f64,
    /// Required strict violation `f·L(ρ) − 1` for success.
    pub detection_tol: f64,
    /// Box bound `|f_i| ≤ box_bound` keeping the LP finite.
    pub box_bound: f64,
    /// Number of random product states seeding the constraint set.
    pub init_samples: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            max_rounds: 200,
            cut_tol: 1e-6,
            certification_tol: 1e-4,
            detection_tol: 1e-9,
            box_bound: 100.0,
            init_samples: 200,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            optimizer: OptimizerConfig::with_seed(seed),
            ..Self::default()
        }
    }
}

/// One LP/oracle round of the cutting-plane loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    /// LP optimum `f·L(ρ)` for the round's functional.
    pub lp_value: f64,
    /// Separable maximum reported by the oracle for that functional.
    pub oracle_value: f64,
    pub cut_added: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SearchTrace {
    pub rounds: Vec<RoundRecord>,
}

impl SearchTrace {
    pub fn cut_count(&self) -> usize {
        self.rounds.iter().filter(|r| r.cut_added).count()
    }
}

/// A separating functional and the witness it induces.
#[derive(Debug, Clone)]
pub struct SeparatingResult {
    /// Functional coefficients `a_1 … a_n`, rescaled so the certified
    /// separable maximum of `Σ a_i Tr(ρ_i σ)` is 1.
    pub coefficients: Vec<f64>,
    pub certified_max: f64,
    /// `f·L(ρ) − 1 = −Tr(Wρ)`; positive on success.
    pub violation: f64,
    /// `W = I − Σ_i a_i ρ_i`, certification attached.
    pub witness: FiniteRankWitness,
    /// Probability mass of `ρ` inside the components' combined range.
    pub in_span_mass: f64,
    pub trace: SearchTrace,
}

/// Expands `W = I − Σ_i f_i ρ_i` into orthonormal rank-one witness terms
/// via the components' spectral decompositions.
pub fn witness_from_plane(map: &FeatureMap, f: &[f64]) -> Result<FiniteRankWitness> {
    if f.len() != map.len() {
        return Err(Error::DimensionMismatch {
            axis: "coefficients",
            expected: map.len(),
            actual: f.len(),
        });
    }
    let mut terms = Vec::new();
    for (fi, c) in f.iter().zip(map.components()) {
        for (p, v) in c.eigen_mixture(1e-9)? {
            terms.push((-fi * p, v));
        }
    }
    FiniteRankWitness::new(1.0, terms)
}

/// Certified separable maximum of `f·L(σ)` and whether the plane
/// `f·x = 1` is tangent to the image of the separable set (within
/// `certification_tol`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneCheck {
    pub separable_max: f64,
    pub tangent: bool,
}

pub fn check_plane(map: &FeatureMap, f: &[f64], cfg: &SearchConfig) -> Result<PlaneCheck> {
    if f.len() != map.len() {
        return Err(Error::DimensionMismatch {
            axis: "coefficients",
            expected: map.len(),
            actual: f.len(),
        });
    }
    let t = map.combination(f);
    let max = seesaw_max(&t, (map.dim_a(), map.dim_b()), &cfg.optimizer)?;
    Ok(PlaneCheck {
        separable_max: max.value,
        tangent: (max.value - 1.0).abs() <= cfg.certification_tol,
    })
}

/// Cutting-plane search for `f` with `f·L(ρ) > 1 ≥ f·L(σ)` for all
/// separable `σ`, yielding `W = I − Σ_i f_i ρ_i` with `Tr(Wρ) < 0`.
pub fn search(map: &FeatureMap, rho: &DensityOperator, cfg: &SearchConfig) -> Result<SeparatingResult> {
    let target = feature_vector(map, rho)?;
    let mut trace = SearchTrace::default();

    // initial constraints: each coordinate point scaled to the
    // component's own separable maximum, plus sampled product states
    let mut cuts: Vec<Vec<f64>> = Vec::new();
    for (i, c) in map.components().iter().enumerate() {
        let m = seesaw_max(c.matrix(), (map.dim_a(), map.dim_b()), &cfg.optimizer)?;
        let mut v = vec![0.0; map.len()];
        v[i] = m.value;
        cuts.push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.optimizer.seed);
    for _ in 0..cfg.init_samples {
        let alpha = random_unit_vector(map.dim_a(), &mut rng);
        let beta = random_unit_vector(map.dim_b(), &mut rng);
        cuts.push(feature_of_product(map, &alpha, &beta));
    }

    for round in 0..cfg.max_rounds {
        let f = solve_lp(&target, &cuts, cfg.box_bound).map_err(|reason| Error::SearchFailed {
            reason,
            trace: trace.clone(),
        })?;
        let lp_value: f64 = f.iter().zip(&target).map(|(a, b)| a * b).sum();
        if lp_value <= 1.0 + cfg.detection_tol {
            // L(ρ) is inside every remaining half-space; the opposite
            // orientation (f·L(ρ) < 1 ≤ f·L(σ)) never occurs for states
            return Err(Error::SearchFailed {
                reason: format!(
                    "no separating functional: LP optimum {lp_value:.6} does not exceed 1"
                ),
                trace,
            });
        }
        let oracle = seesaw_max(
            &map.combination(&f),
            (map.dim_a(), map.dim_b()),
            &cfg.optimizer,
        )?;
        let cut = oracle.value > 1.0 + cfg.cut_tol;
        trace.rounds.push(RoundRecord {
            round,
            lp_value,
            oracle_value: oracle.value,
            cut_added: cut,
        });
        if cut {
            cuts.push(feature_of_product(map, &oracle.alpha, &oracle.beta));
            continue;
        }

        // oracle certifies f·L(σ) ≤ oracle.value ≈ 1: rescale to touch 1
        let mut coeffs = f;
        let mut certified = oracle.value;
        for _ in 0..3 {
            if certified <= 0.0 {
                return Err(Error::SearchFailed {
                    reason: format!("separable maximum {certified:.3e} is not positive"),
                    trace,
                });
            }
            coeffs.iter_mut().for_each(|a| *a /= certified);
            certified = seesaw_max(
                &map.combination(&coeffs),
                (map.dim_a(), map.dim_b()),
                &cfg.optimizer,
            )?
            .value;
            if (certified - 1.0).abs() <= cfg.certification_tol {
                break;
            }
        }
        if (certified - 1.0).abs() > cfg.certification_tol {
            return Err(Error::SearchFailed {
                reason: format!(
                    "rescaled functional failed certification: separable max {certified:.8}"
                ),
                trace,
            });
        }
        let violation = coeffs
            .iter()
            .zip(&target)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            - 1.0;
        if violation <= cfg.detection_tol {
            return Err(Error::SearchFailed {
                reason: format!("violation {violation:.3e} vanished after rescaling"),
                trace,
            });
        }
        let witness = witness_from_plane(map, &coeffs)?.with_certification(Certification {
            infimum: 1.0 - certified,
            method: "seesaw".into(),
            restarts: cfg.optimizer.restarts,
            tolerance: cfg.certification_tol,
            certified: true,
        });
        let in_span_mass = span_mass(map, rho)?;
        return Ok(SeparatingResult {
            coefficients: coeffs,
            certified_max: certified,
            violation,
            witness,
            in_span_mass,
            trace,
        });
    }
    Err(Error::SearchFailed {
        reason: "round limit reached".into(),
        trace,
    })
}

/// Mass of `ρ` inside the combined range of the components. Detection
/// requires the out-of-span remainder `(1 − mass)` to stay below
/// `mass · (−Tr(W′ρ′))`, which is exactly `f·L(ρ) > 1`.
fn span_mass(map: &FeatureMap, rho: &DensityOperator) -> Result<f64> {
    let mut mass = 0.0;
    for c in map.components() {
        for (_, v) in c.eigen_mixture(1e-9)? {
            mass += rho.expectation(&v)?;
        }
    }
    Ok(mass)
}

/// Maximizes `target·f` subject to `cut·f ≤ 1` for every cut and
/// `|f_i| ≤ box_bound`.
fn solve_lp(target: &[f64], cuts: &[Vec<f64>], box_bound: f64) -> std::result::Result<Vec<f64>, String> {
    let mut prob = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = target
        .iter()
        .map(|&c| prob.add_var(c, (-box_bound, box_bound)))
        .collect();
    for cut in cuts {
        let lhs: Vec<_> = vars.iter().copied().zip(cut.iter().copied()).collect();
        prob.add_constraint(&lhs, ComparisonOp::Le, 1.0);
    }
    let sol = prob.solve().map_err(|e| format!("LP solve failed: {e}"))?;
    Ok(vars.iter().map(|v| sol[*v]).collect())
}
