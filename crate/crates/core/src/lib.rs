//! Finite quotients of self-similar pro-p groups and the structural checks
//! that can be run on them.

pub mod checks;
pub mod error;
pub mod field;
pub mod group;
pub mod matrix;
pub mod nottingham;
pub mod presentation;
pub mod tree;

pub use error::{Error, Result};
