//! Construction, evaluation, and certification of finite-rank entanglement
//! witnesses for bipartite quantum states.
//!
//! A witness here is an operator `W = αI + Σ_k λ_k |ω_k⟩⟨ω_k|` with `α ≥ 0`
//! and finitely many rank-one terms. The crate provides
//!
//! * [`bipartite`] — state vectors as coefficient matrices, density
//!   operators, weighted-shift vector families, and local truncation;
//! * [`criteria`] — the PPT and realignment separability criteria with
//!   numeric margins;
//! * [`optimizer`] — see-saw maximization of `⟨α⊗β|T|α⊗β⟩` over unit
//!   product vectors, plus a brute-force grid oracle;
//! * [`witness`] — witness constructors, evaluation `Tr(Wρ)`, and numerical
//!   certification of the separable infimum;
//! * [`hyperplane`] — a cutting-plane search for witnesses of the form
//!   `I − Σ_i a_i ρ_i` separating a target state from the separable set;
//! * [`families`] — the built-in state families used by the reproduction
//!   commands and test fixtures.
//!
//! All types are immutable after construction; operations are pure
//! functions and safe to use concurrently.
//!
//! ```
//! use entwit_core::criteria::{ppt_check, Verdict};
//! use entwit_core::families::{qutrit_state, qutrit_witness};
//!
//! // a PPT state that the bundled tangent witness still detects
//! let rho = qutrit_state([0.2, 0.1, 0.7]).unwrap();
//! assert_eq!(ppt_check(&rho).unwrap().verdict, Verdict::NotDetected);
//!
//! let w = qutrit_witness([1.5, 0.3, 3.0]);
//! let value = w.evaluate(&rho).unwrap(); // -0.5 q₁ + 0.7 q₂
//! assert!((value - (-0.03)).abs() < 1e-12);
//! ```

pub mod bipartite;
pub mod criteria;
pub mod error;
pub mod families;
pub mod hyperplane;
pub mod optimizer;
pub mod witness;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
