//! Maximization of `⟨α⊗β|T|α⊗β⟩` over unit product vectors.
//!
//! Every witness certification in this crate reduces to this quantity:
//! the supremum of `Tr(Tσ)` over separable states is attained on pure
//! product states by linearity, so only the pure-product search is
//! implemented.
//!
//! The main routine is an alternating top-eigenvector ("see-saw")
//! iteration with deterministic multi-start. For fixed `β`, the
//! contraction `M_β` with entries `⟨i⊗β|T|k⊗β⟩` is Hermitian and the
//! optimal `α` is its top eigenvector; the roles then swap. Each
//! half-step is a global maximization over one factor, so the objective
//! never decreases. A brute-force grid oracle over real vectors is
//! provided for small instances to validate the see-saw independently.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bipartite::BipartiteVector;
use crate::error::{Error, Result};
use crate::C64;

/// Multi-start see-saw settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop a restart once the full-sweep objective improvement drops
    /// below this.
    pub convergence_tol: f64,
    /// Seed for the restart initialization; restart `r` draws from an
    /// independent stream `r` of the same generator.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 500,
            convergence_tol: 1e-12,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(Error::InvalidConfig("convergence_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Best product expectation found, with the attaining local vectors.
#[derive(Debug, Clone)]
pub struct ProductMaxResult {
    pub value: f64,
    pub alpha: DVector<C64>,
    pub beta: DVector<C64>,
    pub restarts_used: usize,
    /// Per-restart flag: did the sweep converge before `max_iters`?
    pub converged: Vec<bool>,
    /// Index of the restart that produced `value` (lowest wins ties).
    pub best_restart: usize,
}

/// `max ⟨α⊗β|T|α⊗β⟩` over unit product vectors for a dense Hermitian `T`
/// on `dims.0 × dims.1` local factors.
pub fn seesaw_max(
    t: &DMatrix<C64>,
    dims: (usize, usize),
    cfg: &OptimizerConfig,
) -> Result<ProductMaxResult> {
    let (da, db) = dims;
    if t.nrows() != da * db || t.ncols() != da * db {
        return Err(Error::DimensionMismatch {
            axis: "matrix",
            expected: da * db,
            actual: t.nrows(),
        });
    }
    let dev = hermitian_deviation(t);
    if dev > 1e-9 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let th = (t + t.adjoint()) * C64::new(0.5, 0.0);
    run_seesaw(
        da,
        db,
        cfg,
        |beta| contract_first(&th, da, db, beta),
        |alpha| contract_second(&th, da, db, alpha),
        |alpha, beta| product_expectation(&th, da, db, alpha, beta),
    )
}

/// As [`seesaw_max`] for `T = Σ_k λ_k |ω_k⟩⟨ω_k|` given by its rank-one
/// terms; contractions cost `O(rank · d)` instead of `O(d²)`.
pub fn seesaw_max_terms(
    terms: &[(f64, BipartiteVector)],
    dims: (usize, usize),
    cfg: &OptimizerConfig,
) -> Result<ProductMaxResult> {
    let (da, db) = dims;
    for (_, v) in terms {
        if v.dim_a() != da || v.dim_b() != db {
            return Err(Error::DimensionMismatch {
                axis: "dim_a",
                expected: da,
                actual: v.dim_a(),
            });
        }
    }
    run_seesaw(
        da,
        db,
        cfg,
        |beta| {
            // M_β = Σ_k λ_k v_k v_k† with v_k = D_k β̄, since ⟨α⊗β|ω_k⟩ = ⟨α|D_k β̄⟩
            let mut m = DMatrix::<C64>::zeros(da, da);
            for (lam, w) in terms {
                let v = w.coeffs() * beta.map(|z| z.conj());
                m.gerc(C64::new(*lam, 0.0), &v, &v, C64::new(1.0, 0.0));
            }
            m
        },
        |alpha| {
            // M_α = Σ_k λ_k w_k w_k† with w_k = D_kᵀ ᾱ, since ⟨α⊗β|ω_k⟩ = Σ_j β̄_j (D_kᵀ ᾱ)_j
            let mut m = DMatrix::<C64>::zeros(db, db);
            for (lam, w) in terms {
                let u = w.coeffs().transpose() * alpha.map(|z| z.conj());
                m.gerc(C64::new(*lam, 0.0), &u, &u, C64::new(1.0, 0.0));
            }
            m
        },
        |alpha, beta| {
            terms
                .iter()
                .map(|(lam, w)| {
                    lam * w
                        .product_overlap(alpha, beta)
                        .expect("dims checked")
                        .norm_sqr()
                })
                .sum()
        },
    )
}

fn run_seesaw(
    da: usize,
    db: usize,
    cfg: &OptimizerConfig,
    contract_a: impl Fn(&DVector<C64>) -> DMatrix<C64>,
    contract_b: impl Fn(&DVector<C64>) -> DMatrix<C64>,
    objective: impl Fn(&DVector<C64>, &DVector<C64>) -> f64,
) -> Result<ProductMaxResult> {
    cfg.validate()?;
    let mut best: Option<ProductMaxResult> = None;
    let mut converged = Vec::with_capacity(cfg.restarts);
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let mut alpha = random_unit(da, &mut rng);
        let mut beta = random_unit(db, &mut rng);
        let mut value = f64::NEG_INFINITY;
        let mut did_converge = false;
        for _ in 0..cfg.max_iters {
            let (_, a) = top_eigenvector(&contract_a(&beta))?;
            alpha = a;
            let (lam_b, b) = top_eigenvector(&contract_b(&alpha))?;
            beta = b;
            if lam_b - value < cfg.convergence_tol {
                did_converge = true;
                break;
            }
            value = lam_b;
        }
        converged.push(did_converge);
        let value = objective(&alpha, &beta);
        let better = match &best {
            None => true,
            Some(b) => value > b.value,
        };
        if better {
            best = Some(ProductMaxResult {
                value,
                alpha,
                beta,
                restarts_used: cfg.restarts,
                converged: Vec::new(),
                best_restart: restart,
            });
        }
    }
    let mut out = best.expect("restarts >= 1");
    out.converged = converged;
    Ok(out)
}

/// Uniform random unit vector on the complex sphere (shared with the
/// hyperplane search for seeding product states).
pub(crate) fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> DVector<C64> {
    random_unit(dim, rng)
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> DVector<C64> {
    // independent standard complex Gaussian entries, normalized: uniform
    // on the complex unit sphere
    loop {
        let v = DVector::from_fn(dim, |_, _| {
            C64::new(sample_gaussian(rng), sample_gaussian(rng))
        });
        let n = v.norm();
        if n > 1e-6 {
            return v / C64::new(n, 0.0);
        }
    }
}

fn sample_gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; avoids log(0)
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Top eigenpair of a Hermitian matrix with a deterministic tie-break:
/// among eigenvectors within 1e-12 of the maximum, the one whose
/// absolute-amplitude sequence is lexicographically largest wins, and
/// its first significant component is phase-fixed to be real positive.
fn top_eigenvector(m: &DMatrix<C64>) -> Result<(f64, DVector<C64>)> {
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or(Error::EigenFailed { dim: m.nrows() })?;
    let lam_max = eig.eigenvalues.max();
    let mut pick: Option<usize> = None;
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam < lam_max - 1e-12 {
            continue;
        }
        match pick {
            None => pick = Some(idx),
            Some(prev) => {
                let a = eig.eigenvectors.column(idx);
                let b = eig.eigenvectors.column(prev);
                for (x, y) in a.iter().zip(b.iter()) {
                    let diff = x.norm() - y.norm();
                    if diff.abs() > 1e-12 {
                        if diff > 0.0 {
                            pick = Some(idx);
                        }
                        break;
                    }
                }
            }
        }
    }
    let idx = pick.expect("nonempty spectrum");
    let mut v = eig.eigenvectors.column(idx).into_owned();
    if let Some(lead) = v.iter().position(|z| z.norm() > 1e-12) {
        let phase = v[lead] / C64::new(v[lead].norm(), 0.0);
        v /= phase;
    }
    Ok((eig.eigenvalues[idx], v))
}

fn contract_first(t: &DMatrix<C64>, da: usize, db: usize, beta: &DVector<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(da, da);
    for i in 0..da {
        for k in 0..da {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..db {
                for l in 0..db {
                    acc += beta[j].conj() * t[(i * db + j, k * db + l)] * beta[l];
                }
            }
            m[(i, k)] = acc;
        }
    }
    m
}

fn contract_second(t: &DMatrix<C64>, da: usize, db: usize, alpha: &DVector<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(db, db);
    for j in 0..db {
        for l in 0..db {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..da {
                for k in 0..da {
                    acc += alpha[i].conj() * t[(i * db + j, k * db + l)] * alpha[k];
                }
            }
            m[(j, l)] = acc;
        }
    }
    m
}

fn product_expectation(
    t: &DMatrix<C64>,
    da: usize,
    db: usize,
    alpha: &DVector<C64>,
    beta: &DVector<C64>,
) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    acc += alpha[i].conj()
                        * beta[j].conj()
                        * t[(i * db + j, k * db + l)]
                        * alpha[k]
                        * beta[l];
                }
            }
        }
    }
    acc.re
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

/// Exhaustive maximum over real unit vectors sampled on angular grids of
/// the given resolution, followed by two local refinement sweeps around
/// the best cell. Only validates [`seesaw_max`]: restricted to real
/// symmetric `T` with local dimensions at most 3.
pub fn grid_oracle_max(t: &DMatrix<C64>, dims: (usize, usize), resolution: usize) -> Result<f64> {
    let (da, db) = dims;
    if da > 3 || db > 3 || da == 0 || db == 0 {
        return Err(Error::GridOracleUnsupported(format!(
            "local dimensions {da}x{db} outside the supported range (1..=3)"
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidConfig("grid resolution must be at least 2".into()));
    }
    if t.nrows() != da * db || t.ncols() != da * db {
        return Err(Error::DimensionMismatch {
            axis: "matrix",
            expected: da * db,
            actual: t.nrows(),
        });
    }
    let mut tr = DMatrix::<f64>::zeros(da * db, da * db);
    for i in 0..da * db {
        for j in 0..da * db {
            let z = t[(i, j)];
            if z.im.abs() > 1e-9 || (z - t[(j, i)]).norm() > 1e-9 {
                return Err(Error::GridOracleUnsupported(
                    "grid oracle requires a real-symmetric operator".into(),
                ));
            }
            tr[(i, j)] = z.re;
        }
    }

    let n_angles_a = da - 1;
    let n_angles_b = db - 1;
    let coarse_a = coarse_axes(da, resolution);
    let coarse_b = coarse_axes(db, resolution);
    let mut best_val = f64::NEG_INFINITY;
    let mut best_angles = vec![0.0; n_angles_a + n_angles_b];
    scan(
        &tr,
        da,
        db,
        &coarse_a,
        &coarse_b,
        &mut best_val,
        &mut best_angles,
    );
    // two refinement sweeps: re-grid ±1 coarse cell at 10x resolution
    let mut steps: Vec<f64> = coarse_a
        .iter()
        .chain(coarse_b.iter())
        .map(|ax| ax.step)
        .collect();
    for _ in 0..2 {
        let axes: Vec<Axis> = best_angles
            .iter()
            .zip(steps.iter())
            .map(|(&c, &s)| Axis {
                start: c - s,
                step: s / 10.0,
                count: 21,
            })
            .collect();
        let (ra, rb) = axes.split_at(n_angles_a);
        scan(&tr, da, db, ra, rb, &mut best_val, &mut best_angles);
        steps.iter_mut().for_each(|s| *s /= 10.0);
    }
    Ok(best_val)
}

#[derive(Clone, Copy)]
struct Axis {
    start: f64,
    step: f64,
    count: usize,
}

fn coarse_axes(dim: usize, resolution: usize) -> Vec<Axis> {
    use std::f64::consts::PI;
    match dim {
        1 => vec![],
        // sign of a direction is irrelevant for a quadratic form
        2 => vec![Axis {
            start: 0.0,
            step: PI / resolution as f64,
            count: resolution,
        }],
        3 => vec![
            Axis {
                start: 0.0,
                step: PI / resolution as f64,
                count: resolution + 1,
            },
            Axis {
                start: 0.0,
                step: PI / resolution as f64,
                count: 2 * resolution,
            },
        ],
        _ => unreachable!("dims validated"),
    }
}

fn direction(dim: usize, angles: &[f64]) -> DVector<f64> {
    match dim {
        1 => DVector::from_element(1, 1.0),
        2 => DVector::from_vec(vec![angles[0].cos(), angles[0].sin()]),
        3 => DVector::from_vec(vec![
            angles[0].cos(),
            angles[0].sin() * angles[1].cos(),
            angles[0].sin() * angles[1].sin(),
        ]),
        _ => unreachable!(),
    }
}

fn scan(
    tr: &DMatrix<f64>,
    da: usize,
    db: usize,
    axes_a: &[Axis],
    axes_b: &[Axis],
    best_val: &mut f64,
    best_angles: &mut [f64],
) {
    let mut angles_a = vec![0.0; axes_a.len()];
    let mut angles_b = vec![0.0; axes_b.len()];
    let mut idx_a = vec![0usize; axes_a.len()];
    loop {
        for (k, ax) in axes_a.iter().enumerate() {
            angles_a[k] = ax.start + idx_a[k] as f64 * ax.step;
        }
        let alpha = direction(da, &angles_a);
        // M_α[j,l] = Σ_ik α_i T[(i,j),(k,l)] α_k; exact inner maximum would
        // be its top eigenvalue, but the oracle must stay grid-only
        let mut ma = DMatrix::<f64>::zeros(db, db);
        for j in 0..db {
            for l in 0..db {
                let mut acc = 0.0;
                for i in 0..da {
                    for k in 0..da {
                        acc += alpha[i] * tr[(i * db + j, k * db + l)] * alpha[k];
                    }
                }
                ma[(j, l)] = acc;
            }
        }
        let mut idx_b = vec![0usize; axes_b.len()];
        loop {
            for (k, ax) in axes_b.iter().enumerate() {
                angles_b[k] = ax.start + idx_b[k] as f64 * ax.step;
            }
            let beta = direction(db, &angles_b);
            let val = beta.dot(&(&ma * &beta));
            if val > *best_val {
                *best_val = val;
                best_angles[..axes_a.len()].copy_from_slice(&angles_a);
                best_angles[axes_a.len()..].copy_from_slice(&angles_b);
            }
            if !advance(&mut idx_b, axes_b) {
                break;
            }
        }
        if !advance(&mut idx_a, axes_a) {
            break;
        }
    }
}

fn advance(idx: &mut [usize], axes: &[Axis]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < axes[k].count {
            return true;
        }
        idx[k] = 0;
    }
    false
}
