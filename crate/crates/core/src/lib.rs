//! Exact computations in quantum virtual Grothendieck rings of finite type
//! and their quantum cluster algebra structure.

pub mod cartan;
pub mod characters;
pub mod cluster;
pub mod error;
pub mod laurent;
pub mod monomial;
pub mod screening;
pub mod tcartan;
pub mod torus;
pub mod tsystem;

pub use error::{Error, Result};
