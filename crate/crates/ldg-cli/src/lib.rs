//! Experiment harness for the LDG solver: config parsing, CSV assembly and
//! the run/convergence/history/projtest/fluxtest drivers. The `ldg` binary is
//! a thin shell over [`drivers::dispatch`]; tests call the drivers directly
//! and compare the returned CSV bytes.

pub mod config;
pub mod csv;
pub mod drivers;
