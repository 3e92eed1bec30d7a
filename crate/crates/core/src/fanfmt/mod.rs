//! Fan and certificate documents, the built-in catalog, and fan products.
//!
//! Fan files (`.fan.json`) use an integers-only JSON profile:
//!
//! ```text
//! {"name":"P2","lattice_rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}
//! ```
//!
//! Unknown keys are rejected unless they start with `x-`.

mod catalog;
mod certificate;
mod document;

use thiserror::Error;

pub use catalog::{catalog_fan, catalog_names, resolve_catalog_expr};
pub use certificate::{parse_certificate, serialize_certificate, CertificateDocument};
pub use document::{canonicalize, parse_fan, product_fan, serialize_fan, subject_hash, FanDocument};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown catalog fan '{0}'")]
    UnknownCatalogName(String),
}
