//! Exact meet and join matrices on finite posets and the divisor lattice.
//!
//! The crate covers the incidence algebra of finite posets ([`poset`]),
//! ambient lattices with valuations ([`lattice`]), exact matrices and the
//! semimultiplicative factorization of join matrices ([`matrix`]), the
//! element-by-element invertibility criterion ([`invertibility`]),
//! enumeration of small meet semilattices ([`enumeration`]) and the
//! GCD/LCM specifics on positive integers ([`numtheory`]).

pub mod enumeration;
pub mod error;
pub mod exec;
pub mod invertibility;
pub mod lattice;
pub mod matrix;
pub mod numtheory;
pub mod poset;
pub mod rational;
pub mod reproduce;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rational::Rational;
