//! Front end for the `dipole-landau` library: configuration parsing,
//! command dispatch and artifact writing.

pub mod commands;
pub mod config;
pub mod output;
