//! JSON documents written and read by the command-line tool.
//!
//! Every document is plain `serde_json` over the core types. Struct fields
//! serialize in declaration order and no floating point is involved, so equal
//! values always produce identical bytes.

use bnglue_core::certifier::Refusal;
use bnglue_core::{Certificate, Instance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

/// A certificate with its claim repeated at the top level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format_version: u32,
    pub instance: Instance,
    pub tree: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefusalDocument {
    pub format_version: u32,
    pub instance: Instance,
    pub refusal: Refusal,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed certificate document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("document claims {claimed} but its tree proves {tree}")]
    InstanceMismatch { claimed: Instance, tree: Instance },
}

impl CertificateDocument {
    pub fn new(tree: Certificate) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            instance: tree.instance.clone(),
            tree,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// Parses and checks the version and the top-level claim.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        if doc.instance != doc.tree.instance {
            return Err(DocumentError::InstanceMismatch {
                claimed: doc.instance,
                tree: doc.tree.instance,
            });
        }
        Ok(doc)
    }
}

impl RefusalDocument {
    pub fn new(instance: Instance, refusal: Refusal) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            instance,
            refusal,
        }
    }
}

/// Pretty-printed JSON; serializing the core types cannot fail.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("core documents serialize infallibly")
}

#[cfg(test)]
mod tests {
    use super::*;
    use bnglue_core::{certify_main, GluingInstance};

    fn worked() -> CertificateDocument {
        let inst = GluingInstance::from_parts(4, 1, 5, 2, 3, 6).unwrap();
        CertificateDocument::new(certify_main(&inst).unwrap())
    }

    #[test]
    fn parse_inverts_serialization() {
        let doc = worked();
        let text = doc.to_json();
        assert_eq!(CertificateDocument::parse(&text).unwrap(), doc);
        assert_eq!(CertificateDocument::parse(&text).unwrap().to_json(), text);
    }

    #[test]
    fn rejects_other_versions() {
        let text = worked()
            .to_json()
            .replacen("\"format_version\": 1", "\"format_version\": 2", 1);
        assert!(matches!(
            CertificateDocument::parse(&text),
            Err(DocumentError::Version(2))
        ));
    }

    #[test]
    fn rejects_a_claim_the_tree_does_not_prove() {
        let mut doc = worked();
        doc.instance = Instance::Gluing(GluingInstance::from_parts(4, 1, 5, 2, 3, 5).unwrap());
        let err = CertificateDocument::parse(&doc.to_json()).unwrap_err();
        assert!(matches!(err, DocumentError::InstanceMismatch { .. }));
    }

    #[test]
    fn invalid_curve_classes_fail_to_parse() {
        let text = worked().to_json().replacen("\"r\": 3", "\"r\": 0", 1);
        assert!(matches!(
            CertificateDocument::parse(&text),
            Err(DocumentError::Json(_))
        ));
    }
}
