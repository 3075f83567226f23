//! Half-maps, slow divergence integrals and canard limit cycles of
//! regularized piecewise-linear visible–invisible two-folds.

pub mod error;
pub mod geometry;
pub mod halfmap;
pub mod model;
pub mod numerics;
pub mod regsim;
pub mod regularization;
pub mod scalar;
pub mod sdi;
pub mod theorem;
pub mod verify;

pub use error::{Error, Result};
pub use halfmap::{HalfMap, HalfMapEval, HalfMapMethod};
pub use model::{AffineMap, ExtReal, LinearField, NormalForm, Regime, RegimeKind};
pub use regularization::{ArctanSigmoid, Regularization, Sigmoid, TanhSigmoid};
pub use scalar::Real;
pub use sdi::{Sdi, SdiDomain, SdiReport};
pub use theorem::{predict, Claim, Prediction};

pub type NormalForm64 = NormalForm<f64>;
pub type Regime64 = Regime<f64>;
pub type HalfMap64 = HalfMap<f64>;
pub type Sdi64 = Sdi<f64>;
