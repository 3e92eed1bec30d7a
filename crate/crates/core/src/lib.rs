//! Machine-checked Oka certificates for smooth toric varieties.
//!
//! Given a rational polyhedral fan, [`oka::certify`] validates it, splits off
//! any torus factor, checks smoothness, builds the quotient presentation
//! `X = (C^m \ Z) / G`, and assembles a derivation tree concluding that `X` is
//! an Oka manifold. [`oka::verify_certificate`] rechecks such a tree against a
//! fan from scratch. Failures come back as a [`oka::Rejection`] naming the
//! offending datum.
//!
//! All arithmetic is exact.

mod bigjson;
pub mod cox;
pub mod fan;
pub mod fanfmt;
pub mod feasibility;
pub mod intlinalg;
pub mod oka;

pub use fan::{validate_fan, Fan, FanError, ValidatedFan};
pub use fanfmt::{parse_certificate, parse_fan, serialize_certificate, serialize_fan, FanDocument, FormatError};
pub use intlinalg::IntMatrix;
pub use oka::{certify, verify_certificate, CheckError, OkaCertificate, Rejection, RejectionReason};
