//! Spec files, exports and command implementations for the `circlemix` tool.
//!
//! The numerical work lives in [`circlemix_core`]; this crate reads measure
//! specs, runs one diagnostic per subcommand and writes CSV, JSON and binary
//! snapshot files.

pub mod commands;
pub mod error;
pub mod output;
pub mod schema;

pub use commands::{run, Command, Format, Outcome, RunConfig};
pub use error::{CliError, ExitKind};
pub use schema::{parse_spec, SchemaError};
