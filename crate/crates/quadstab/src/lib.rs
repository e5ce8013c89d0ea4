//! File formats, parallel sweeps and the `quadstab` command line built on
//! `quadstab-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod grid;
pub mod io;
pub mod sweep;

pub use cli::run;
pub use error::CliError;
