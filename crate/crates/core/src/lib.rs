//! Fundamental operators, Möbius transport, characteristic functions,
//! functional models and unitary invariants for finite-dimensional
//! commuting pairs `(S, P)`.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32`, `f64`); the
//! aliases below fix the scalar.

pub mod charfn;
pub mod cli;
pub mod domain;
pub mod error;
pub mod fundamental;
pub mod invariant;
pub mod io;
pub mod matcore;
pub mod mobius;
pub mod model;
pub mod pair;
pub mod scalar;

pub use error::{GammaError, Result};

pub type CMatrix64 = scalar::CMatrix<f64>;
pub type GammaPair64 = pair::GammaPair<f64>;
pub type FundamentalPair64 = fundamental::FundamentalPair<f64>;
pub type CharFn64 = charfn::CharFn<f64>;
pub type ModelData64 = model::ModelData<f64>;
pub type Witness64 = invariant::Witness<f64>;

pub type CMatrix32 = scalar::CMatrix<f32>;
pub type GammaPair32 = pair::GammaPair<f32>;
pub type FundamentalPair32 = fundamental::FundamentalPair<f32>;
pub type CharFn32 = charfn::CharFn<f32>;
pub type ModelData32 = model::ModelData<f32>;
pub type Witness32 = invariant::Witness<f32>;
