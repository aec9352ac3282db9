//! Exact homological algebra over the integers for length-3 complexes of
//! finitely generated abelian groups.
//!
//! The layers build on each other: [`exactlin`] (Smith normal form) under
//! [`abgrp`] (presented groups) under [`chain`] (cochain complexes) under
//! [`derived`] (RHom, Ext, extension classes). [`site`] computes RΓ over
//! finite posets and [`barres`] builds the bar-type complex 𝕃.(ℙ).

pub mod abgrp;
pub mod barres;
pub mod chain;
pub mod derived;
pub mod error;
pub mod exactlin;
pub mod gen;
pub mod oracle;
pub mod site;
pub mod verify;

pub use error::{Error, Result};
