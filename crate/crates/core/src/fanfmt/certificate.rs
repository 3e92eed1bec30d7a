use super::FormatError;
use crate::oka::OkaCertificate;

/// On-disk form of an [`OkaCertificate`] (`.oka.json`).
pub type CertificateDocument = OkaCertificate;

/// Compact JSON with a fixed key order; `parse_certificate` inverts it exactly.
pub fn serialize_certificate(cert: &CertificateDocument) -> String {
    serde_json::to_string(cert).expect("certificate serializes")
}

/// Strict parse: unknown fields and float literals are errors. Schema errors
/// carry the JSON path of the offending value.
pub fn parse_certificate(text: &str) -> Result<CertificateDocument, FormatError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let cert: CertificateDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            FormatError::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        } else {
            FormatError::Schema {
                path,
                message: inner.to_string(),
            }
        }
    })?;
    de.end().map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fanfmt::catalog_fan;
    use crate::oka::certify;

    #[test]
    fn round_trip_is_byte_exact() {
        let cert = certify(&catalog_fan("P2").unwrap().to_fan()).unwrap();
        let text = serialize_certificate(&cert);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(serialize_certificate(&back), text);
    }

    #[test]
    fn schema_errors_are_located() {
        let cert = certify(&catalog_fan("P2").unwrap().to_fan()).unwrap();
        let text = serialize_certificate(&cert).replace("\"format_version\":\"1\"", "\"format_version\":1");
        match parse_certificate(&text).unwrap_err() {
            FormatError::Schema { path, .. } => assert_eq!(path, "format_version"),
            other => panic!("{other}"),
        }
        assert!(matches!(parse_certificate("{\"format_version\":"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_certificate("{} {}"), Err(FormatError::Schema { .. } | FormatError::Syntax { .. })));
    }
}
