//! The `textgraph` command line tool and HTTP service.

pub mod commands;
pub mod library;
pub mod manifest;
pub mod server;

pub use library::{Library, QueryRequest, QueryResponse};
