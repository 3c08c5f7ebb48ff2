//! On-disk JSON schemas for states and witnesses.
//!
//! Complex amplitudes are `[re, im]` pairs; coefficient lists are
//! row-major of length `dim_a * dim_b` in the product-basis ordering
//! `(i, j) ↦ i·dim_b + j`. Numbers round-trip IEEE doubles exactly
//! (shortest-representation decimal).

use serde::{Deserialize, Serialize};

use entwit_core::bipartite::{
    BipartiteVector, DensityOperator, PureMixture, SequenceVector, WeightFamily,
};
use entwit_core::witness::{Certification, FiniteRankWitness};
use entwit_core::C64;

use crate::CliError;

/// A state on disk is one of three kinds — an explicit pure-state
/// mixture, a dense matrix, or a mixture of closed-form weighted-shift
/// vectors — discriminated by the `kind` field. Each kind parses through
/// its own struct so schema errors keep line/column information.
#[derive(Debug, Deserialize)]
struct KindProbe {
    kind: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureFile {
    kind: String,
    dims: [usize; 2],
    terms: Vec<CoeffTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DenseFile {
    kind: String,
    dims: [usize; 2],
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceFile {
    kind: String,
    terms: Vec<SequenceTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffTerm {
    pub weight: f64,
    /// Row-major amplitudes of a unit vector, `[re, im]` each.
    pub coeffs: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceTerm {
    pub weight: f64,
    /// `"inverse-linear"` (weights 1/(i+1)) or `"geometric(r)"`.
    pub family: String,
    /// Row shift `s` in `Σ_i c_i |(i+s) i⟩`.
    pub shift: usize,
}

/// A finite-rank witness on disk: `alpha` plus `(lambda, coeffs)` terms.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub dims: [usize; 2],
    pub alpha: f64,
    pub terms: Vec<WitnessTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<Certification>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessTerm {
    pub lambda: f64,
    pub coeffs: Vec<[f64; 2]>,
}

/// A parsed state, still in its most structured form.
pub enum LoadedState {
    Mixture(PureMixture),
    Dense(DensityOperator),
    Sequence(Vec<(f64, SequenceVector)>),
}

pub fn parse_family(s: &str) -> Result<WeightFamily, CliError> {
    if s == "inverse-linear" {
        return Ok(WeightFamily::InverseLinear);
    }
    if let Some(inner) = s.strip_prefix("geometric(").and_then(|t| t.strip_suffix(')')) {
        let ratio: f64 = inner.parse().map_err(|_| {
            CliError::Input(format!("field `family`: bad geometric ratio {inner:?}"))
        })?;
        return Ok(WeightFamily::Geometric { ratio });
    }
    Err(CliError::Input(format!(
        "field `family`: unknown weight family {s:?} (expected \"inverse-linear\" or \"geometric(r)\")"
    )))
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn from_complex(v: &BipartiteVector) -> Vec<[f64; 2]> {
    v.ket().iter().map(|z| [z.re, z.im]).collect()
}

pub fn load_state(path: &str, tol: f64) -> Result<LoadedState, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    parse_state(&text, tol).map_err(|e| e.prefix(path))
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Input(e.to_string())
}

fn parse_state(text: &str, tol: f64) -> Result<LoadedState, CliError> {
    let probe: KindProbe = serde_json::from_str(text).map_err(json_err)?;
    match probe.kind.as_str() {
        "mixture" => {
            let file: MixtureFile = serde_json::from_str(text).map_err(json_err)?;
            let [da, db] = file.dims;
            let mut parsed = Vec::with_capacity(file.terms.len());
            for (idx, t) in file.terms.iter().enumerate() {
                let v = BipartiteVector::from_flat(da, db, &to_complex(&t.coeffs))
                    .map_err(|e| CliError::Input(format!("terms[{idx}].coeffs: {e}")))?;
                parsed.push((t.weight, v));
            }
            let mix =
                PureMixture::new(parsed).map_err(|e| CliError::Input(format!("terms: {e}")))?;
            Ok(LoadedState::Mixture(mix))
        }
        "dense" => {
            let file: DenseFile = serde_json::from_str(text).map_err(json_err)?;
            let [da, db] = file.dims;
            let d = da * db;
            if file.matrix.len() != d || file.matrix.iter().any(|row| row.len() != d) {
                return Err(CliError::Input(format!(
                    "field `matrix`: expected a {d}x{d} matrix for dims {da}x{db}"
                )));
            }
            let m = nalgebra_matrix(&file.matrix);
            let rho = DensityOperator::with_tolerance(da, db, m, tol)
                .map_err(|e| CliError::Input(format!("field `matrix`: {e}")))?;
            Ok(LoadedState::Dense(rho))
        }
        "sequence-mixture" => {
            let file: SequenceFile = serde_json::from_str(text).map_err(json_err)?;
            let mut parsed = Vec::with_capacity(file.terms.len());
            let mut sum = 0.0;
            for (idx, t) in file.terms.iter().enumerate() {
                let family = parse_family(&t.family)
                    .map_err(|e| e.prefix(&format!("terms[{idx}]")))?;
                let v = SequenceVector::new(family, t.shift)
                    .map_err(|e| CliError::Input(format!("terms[{idx}]: {e}")))?;
                sum += t.weight;
                parsed.push((t.weight, v));
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(CliError::Input(format!("terms: weights sum {sum} != 1")));
            }
            Ok(LoadedState::Sequence(parsed))
        }
        other => Err(CliError::Input(format!(
            "field `kind`: unknown state kind {other:?} (expected \"mixture\", \"dense\" or \
             \"sequence-mixture\")"
        ))),
    }
}

fn nalgebra_matrix(rows: &[Vec<[f64; 2]>]) -> nalgebra::DMatrix<C64> {
    let d = rows.len();
    nalgebra::DMatrix::from_fn(d, d, |i, j| C64::new(rows[i][j][0], rows[i][j][1]))
}

pub fn load_witness(path: &str) -> Result<FiniteRankWitness, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    let file: WitnessFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let [da, db] = file.dims;
    let mut terms = Vec::with_capacity(file.terms.len());
    for (idx, t) in file.terms.iter().enumerate() {
        let v = BipartiteVector::from_flat(da, db, &to_complex(&t.coeffs))
            .map_err(|e| CliError::Input(format!("{path}: terms[{idx}].coeffs: {e}")))?;
        terms.push((t.lambda, v));
    }
    let w = FiniteRankWitness::new(file.alpha, terms)
        .map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    Ok(match file.certification {
        Some(cert) => w.with_certification(cert),
        None => w,
    })
}

pub fn save_witness(path: &str, w: &FiniteRankWitness) -> Result<(), CliError> {
    let file = WitnessFile {
        dims: [w.dim_a(), w.dim_b()],
        alpha: w.alpha(),
        terms: w
            .terms()
            .iter()
            .map(|(lambda, v)| WitnessTerm {
                lambda: *lambda,
                coeffs: from_complex(v),
            })
            .collect(),
        certification: w.certification().cloned(),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| CliError::Op(format!("serializing witness: {e}")))?;
    std::fs::write(path, text).map_err(|e| CliError::Op(format!("cannot write {path}: {e}")))?;
    Ok(())
}
