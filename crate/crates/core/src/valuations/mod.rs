//! Valuation expressions, their evaluation on polytopes and subspace balls,
//! Klain functions, the product of projection valuations, multiplication by
//! intrinsic volumes and the operator `Lambda`.

pub mod evaluate;
pub mod expr;
pub mod lambda;
pub mod lemmas;
pub mod proportion;

pub use evaluate::{evaluate, klain_function, product_projection, product_projection_ball, Budget};
pub use expr::{BodySpec, ValuationExpr};
pub use lambda::{default_lambda_grid, lambda_apply, LambdaResult, LAMBDA_RESIDUAL_LIMIT};
pub use lemmas::{claim23_check, lemma22_formula, multiply_by_intrinsic, multiply_eval, Claim23};
pub use proportion::{fit_scalar, proportionality_check, ratio_spread, ProportionalityReport, ScalarFit};
