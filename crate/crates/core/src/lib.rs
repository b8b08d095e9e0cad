//! Twisted Reed-Solomon codes over small finite fields.
//!
//! The crate builds TRS codes, computes covering radii and deep holes by
//! exhaustive search, and checks the closed-form deep-hole criteria,
//! reconstruction formulas, classification statements and character-sum
//! identities against those oracles.

pub mod char_sums;
pub mod code;
pub mod combin;
pub mod deephole;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod sym;
pub mod trs;
pub mod verify;

pub use field::{Elem, Field, FieldError};
