//! Numerical and combinatorial toolkit for Reeb dynamics in dimension three.
//!
//! The crate is `no_std` and only needs `alloc`. Modules:
//!
//! - [`sp_paths`]: paths in Sp(2,R), Maslov and Conley-Zehnder indices.
//! - [`contact_models`]: chart based contact forms on the connected-sum neck.
//! - [`reeb_flow`]: RK4 Reeb flow, the equatorial orbit and its Floquet data.
//! - [`asym_op`]: spectra and eigenvector windings of asymptotic operators.
//! - [`curve_ledger`]: exact index, energy and intersection arithmetic for curve classes.
#![no_std]

extern crate alloc;

pub mod asym_op;
pub mod contact_models;
pub mod curve_ledger;
pub mod reeb_flow;
pub mod sp_paths;
