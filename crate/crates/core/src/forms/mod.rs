//! Auxiliary linear forms in the variables `x_0, x_{j,k,sigma}`.

mod engine;
mod linear_form;
mod operator;

pub use engine::FormsEngine;
pub use linear_form::{var_indices, FormJson, IntegerLinearForm, LinearForm, TermJson, VarIndex};
pub use operator::{apply_nested, OperatorPoly};
