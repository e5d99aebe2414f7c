use serde_json::{json, Value};

/// Failures surfaced by the front end, each mapped to a JSON error object
/// and an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed JSON, a bad flag, or an unreadable input file.
    Parse(String),
    Lib(mkt_core::Error),
}

impl From<mkt_core::Error> for CliError {
    fn from(e: mkt_core::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    /// The library variant name, or `ParseError`.
    pub fn kind(&self) -> String {
        match self {
            CliError::Parse(_) => "ParseError".into(),
            CliError::Lib(e) => {
                let debug = format!("{e:?}");
                let end = debug.find(['(', ' ', '{']).unwrap_or(debug.len());
                debug[..end].to_string()
            }
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Parse(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }

    /// 2 when the library detected a broken mathematical invariant, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(
                mkt_core::Error::InvariantViolated(_)
                | mkt_core::Error::RecursionInvariantViolated(_),
            ) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "message": self.message()}})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_are_variant_names() {
        assert_eq!(CliError::Lib(mkt_core::Error::Singular).kind(), "Singular");
        assert_eq!(
            CliError::Lib(mkt_core::Error::NotPrime(4)).kind(),
            "NotPrime"
        );
        let w = mkt_core::Error::WeightMismatch {
            expected: 1,
            found: 2,
        };
        assert_eq!(CliError::Lib(w).kind(), "WeightMismatch");
        assert_eq!(CliError::Parse("x".into()).exit_code(), 1);
        let bad = mkt_core::Error::InvariantViolated("sum".into());
        assert_eq!(CliError::Lib(bad).exit_code(), 2);
    }
}
