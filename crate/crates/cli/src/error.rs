use kite_core::CertError;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BadInput(_) | CliError::Cert(CertError::InvalidInput(_)) => 4,
            CliError::Cert(CertError::BudgetExceeded(_)) => 3,
            CliError::Cert(_) => 2,
            CliError::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::BadInput(_) | CliError::Cert(CertError::InvalidInput(_)) => "bad_input",
            CliError::Cert(CertError::BudgetExceeded(_)) => "budget_exceeded",
            CliError::Cert(_) => "certification_failed",
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() })
            .to_string()
    }
}
