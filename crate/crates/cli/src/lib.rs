//! The `wallx` command-line front end: target loading, command dispatch,
//! result rendering, a content-addressed result cache and the acceptance battery.

pub mod acceptance;
pub mod app;
pub mod cache;
pub mod commands;
pub mod error;
pub mod output;
pub mod request;

pub use app::run;
pub use cache::{Cache, Lookup, Source};
pub use error::CliError;
pub use output::{flat_table, render_csv, render_json, Format, Table};
pub use request::{Request, ARTIFACT_VERSION};
