//! Command-line front end, JSON file formats and brute-force reference computations for
//! [`renyisim_core`].

pub mod cli;
pub mod io;
pub mod oracle;
pub mod sweep;

mod error;

pub use error::CliError;
