use std::fmt;

use qaoa_core::Error;

/// A failed command: bad input exits with 2, anything else with 1.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Runtime(String),
}

impl Failure {
    pub fn validation(msg: impl Into<String>) -> Self {
        Failure::Validation(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Failure::Runtime(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }

    /// Prefixes the message, keeping the kind.
    pub fn context(self, what: impl fmt::Display) -> Self {
        match self {
            Failure::Validation(m) => Failure::Validation(format!("{what}: {m}")),
            Failure::Runtime(m) => Failure::Runtime(format!("{what}: {m}")),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::EmptyProblem
            | Error::InvalidAlpha(_)
            | Error::QubitCount { .. }
            | Error::ZeroShots
            | Error::OptimizerConfig(_)
            | Error::NearZeroDenominator(_)
            | Error::TooLarge { .. }
            | Error::Topology(_)
            | Error::Calibration(_)
            | Error::DeviceTooSmall { .. }
            | Error::Serde(_) => Failure::Validation(msg),
            _ => Failure::Runtime(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::InvalidAlpha(2.0)).exit_code(), 2);
        let small = Error::DeviceTooSmall {
            device: "d".into(),
            needed: 9,
            available: 4,
        };
        assert_eq!(Failure::from(small).exit_code(), 2);
        assert_eq!(Failure::from(Error::EmptyHistogram).exit_code(), 1);
        let io = std::io::Error::new(std::io::ErrorKind::PermissionDenied, "no");
        assert_eq!(Failure::from(io).context("out").to_string(), "out: no");
    }
}
