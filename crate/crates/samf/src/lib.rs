//! Files, fixtures, batch runs and the `samf` command line around
//! [`samf_core`].
//!
//! Images are read as 8-bit RGB and converted to `[0, 1]` floats; outputs are
//! rounded back to 8 bits. Batch runs write one JSON record per pair to a
//! line-delimited manifest.

pub mod cli;
pub mod config;
pub mod error;
pub mod fixture;
pub mod io;
pub mod manifest;
pub mod run;

pub use error::{CliError, Result};
