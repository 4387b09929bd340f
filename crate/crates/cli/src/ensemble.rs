//! Ensemble description files.
//!
//! ```text
//! # two fermions and a boson
//! fermion 1.0
//! fermion 2.0
//! boson 0.5 40
//! ```

use std::fmt;
use std::path::Path;

use schwinger_core::fock::ModeSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleParseError {
    /// 1-based; 0 when the file itself could not be read.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for EnsembleParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for EnsembleParseError {}

pub fn parse_ensemble(text: &str) -> Result<Vec<ModeSpace>, EnsembleParseError> {
    let mut modes = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| EnsembleParseError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let omega = |s: &str| -> Result<f64, EnsembleParseError> {
            s.parse::<f64>()
                .map_err(|_| err(format!("omega {s:?} is not a number")))
        };
        let mode = match fields.as_slice() {
            ["fermion", w] => ModeSpace::fermion(omega(w)?),
            ["boson", w, d] => {
                let cutoff = d
                    .parse::<usize>()
                    .map_err(|_| err(format!("cutoff {d:?} is not a non-negative integer")))?;
                ModeSpace::boson(cutoff, omega(w)?)
            }
            ["fermion", ..] => return Err(err("expected `fermion <omega>`".into())),
            ["boson", ..] => return Err(err("expected `boson <omega> <cutoff>`".into())),
            [kind, ..] => return Err(err(format!("unknown mode kind {kind:?}"))),
            [] => unreachable!("blank lines are skipped"),
        };
        modes.push(mode.map_err(|e| err(e.to_string()))?);
    }
    if modes.is_empty() {
        return Err(EnsembleParseError {
            line: 0,
            message: "ensemble file lists no modes".into(),
        });
    }
    Ok(modes)
}

pub fn parse_ensemble_file(path: &Path) -> Result<Vec<ModeSpace>, EnsembleParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| EnsembleParseError {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_ensemble(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use schwinger_core::fock::ModeKind;

    #[test]
    fn examples() {
        let m = parse_ensemble("fermion 1.0").unwrap();
        assert_eq!((m[0].kind(), m[0].omega()), (ModeKind::Fermion, 1.0));
        let m = parse_ensemble("boson 2.0 32").unwrap();
        assert_eq!(
            (m[0].kind(), m[0].omega(), m[0].cutoff()),
            (ModeKind::Boson, 2.0, 32)
        );
        assert_eq!(parse_ensemble("boson x").unwrap_err().line, 1);
    }

    #[test]
    fn comments_and_line_numbers() {
        let text = "# header\n\nfermion 1 # trailing\n  boson 1 10\nfermion -1\n";
        let err = parse_ensemble(text).unwrap_err();
        assert_eq!(err.line, 5);
        let ok = parse_ensemble(&text.replace("fermion -1\n", "")).unwrap();
        assert_eq!(ok.len(), 2);
        assert!(parse_ensemble("# nothing\n").is_err());
        assert_eq!(parse_ensemble("fermion 1\nspin 1").unwrap_err().line, 2);
        assert_eq!(parse_ensemble("boson 1 1").unwrap_err().line, 1);
    }
}
