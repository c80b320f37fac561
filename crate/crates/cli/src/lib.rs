//! The `sesforge` command-line tool and HTTP service.

pub mod cli;
pub mod convert;
pub mod http;

pub use cli::run;
