//! Command-line front end for the tether guidance toolkit: scenario runs,
//! parameter sweeps, stability checks, and bundled presets.

pub mod commands;
pub mod config;
pub mod error;
pub mod presets;
pub mod report;
pub mod svg;
