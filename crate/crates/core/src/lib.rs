//! Real forms, Lagrangian splittings and Poisson structures on flag varieties.
//!
//! The crate is organized bottom-up:
//!
//! * [`rootdata`] — root systems and exact Chevalley bases of types A–G;
//! * [`weyl`] — Weyl group arithmetic, twisted involutions and the `∗`-action;
//! * [`vogan_realform`] — Vogan diagrams, the conjugations `θ`, `γ_d`, `τ_v`,
//!   the real form `g_v` and the Lagrangian splitting `g = g_v + l_d`;
//! * [`leaves`] — exact symplectic-leaf dimensions `2l(w) − l(u) − δ`;
//! * [`tensor_oracle`] — a floating-point oracle evaluating the bivector at
//!   explicit points of the flag variety.

pub mod error;
pub mod exact;
pub mod rootdata;
pub mod weyl;
pub mod vogan_realform;
pub mod leaves;
pub mod tensor_oracle;

pub use error::{Error, Result};
