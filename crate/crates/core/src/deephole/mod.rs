//! Deep holes of TRS codes: the subset criterion on syndromes, the
//! reconstruction of a word from its syndrome, explicit families, and the
//! algebra and witness searches used for A = F_q^*, l = k − 1.

mod classes;
mod criterion;
mod families;
mod group;
mod range;
mod scan;
mod witness;

pub use classes::*;
pub use criterion::*;
pub use families::*;
pub use group::*;
pub use range::*;
pub use scan::*;
pub use witness::*;

use crate::code::CodeError;
use crate::field::FieldError;
use crate::trs::TrsError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeepholeError {
    #[error("needs {needed} evaluations, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("bad subset: {0}")]
    Subset(String),
    #[error("expected length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("wrong setting: {0}")]
    Setting(String),
    #[error("syndrome is not a deep-hole syndrome")]
    NotDeep,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("reconstructed word has the wrong syndrome")]
    Reconstruction,
    #[error(transparent)]
    Trs(#[from] TrsError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type Result<T> = std::result::Result<T, DeepholeError>;

pub(crate) fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(DeepholeError::Budget { needed, budget });
    }
    Ok(())
}
