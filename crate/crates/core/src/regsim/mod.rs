//! Direct simulation of the regularized system
//!
//! ```text
//! ż = Z⁺_λ(z) φ(y/ε²) + Z⁻(z) (1 − φ(y/ε²)),   λ = ε λ̃,
//! ```
//!
//! with `λ` added to the y-component of `Z⁺`, and detection of its limit
//! cycles through a first-return map on `{x = 0, y < 0}`.

mod cycles;
mod field;
mod sweep;

pub use cycles::{canard_cycle, lower_section_point, find_limit_cycles, hausdorff_distance, CycleScan, LimitCycle, Stability};
pub use field::{integrate, return_map, Axis, Direction, Hit, Rect, ReturnEval, Section, SimConfig, SimError, SimErrorKind, RegularizedField, Trajectory};
pub use sweep::{
    default_section_range, escapes_upward, find_critical_lambda, locate_canard_window, section_range, sweep_lambda,
    sweep_lambda_values, BifurcationRow, CanardWindow, CriticalLambda, SweepTable, WindowSearch,
};
