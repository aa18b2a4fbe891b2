use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cauchy::CauchyProblem;
use crate::matrep::{Interval, MatrixFunction, PolyMatrix, PolyVector, VectorFunction};
use crate::pbs::TransitionOptions;
use crate::verify::ClosedFormCase;

/// Input problems are rejected with the offending field named in the message.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for InputError {}

/// `A` as written in a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    /// `"example1(a=2)"` or `"airy(a=1)"`.
    Builtin(String),
    /// Row-major grid of coefficient lists, lowest degree first.
    Coefficients(Vec<Vec<Vec<f64>>>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
}

/// On-disk JSON problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dim: usize,
    pub t0: f64,
    pub domain: [f64; 2],
    /// Expansion point of every coefficient list.
    #[serde(default)]
    pub origin: f64,
    #[serde(rename = "A")]
    pub a: MatrixSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default)]
    pub options: OptionsSpec,
}

/// A validated problem file.
#[derive(Debug, Clone)]
pub struct ParsedProblem {
    pub file: ProblemFile,
    pub problem: CauchyProblem,
    /// Set when `A` is one of the closed-form builtins.
    pub builtin: Option<ClosedFormCase>,
    /// Whether the file supplied `x0` (otherwise `problem.x0` is zero).
    pub has_x0: bool,
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MU_MAX: f64 = 1.0;

/// Reads and validates a problem file.
pub fn parse_problem(path: &Path) -> Result<ParsedProblem, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new("", format!("cannot read {}: {e}", path.display())))?;
    parse_problem_str(&text)
}

/// Parses problem JSON held in memory.
pub fn parse_problem_str(text: &str) -> Result<ParsedProblem, InputError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let field = if path == "." { String::new() } else { path };
        InputError::new(
            field,
            format!("{inner} (line {}, column {})", inner.line(), inner.column()),
        )
    })?;
    file.validate()
}

/// Parses `name(a=value)`.
pub fn parse_builtin(spec: &str) -> Result<ClosedFormCase, InputError> {
    let bad = || {
        InputError::new(
            "A",
            format!("unknown builtin {spec:?}; expected \"example1(a=<x>)\" or \"airy(a=<x>)\""),
        )
    };
    let spec_trim = spec.trim();
    let open = spec_trim.find('(').ok_or_else(bad)?;
    if !spec_trim.ends_with(')') {
        return Err(bad());
    }
    let name = spec_trim[..open].trim();
    let arg = spec_trim[open + 1..spec_trim.len() - 1].trim();
    let value = arg
        .strip_prefix('a')
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(bad)?
        .trim();
    let a: f64 = value.parse().map_err(|_| {
        InputError::new("A", format!("builtin parameter {value:?} is not a number"))
    })?;
    if !a.is_finite() {
        return Err(InputError::new("A", "builtin parameter must be finite"));
    }
    match name {
        "example1" => Ok(ClosedFormCase::example1(a)),
        "airy" => Ok(ClosedFormCase::airy(a)),
        _ => Err(bad()),
    }
}

fn finite(field: &str, v: f64) -> Result<(), InputError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(InputError::new(field, "must be finite"))
    }
}

impl ProblemFile {
    pub fn options(&self) -> TransitionOptions {
        let defaults = TransitionOptions::default();
        TransitionOptions {
            tol: self.options.tol.unwrap_or(DEFAULT_TOL),
            mu_max: self.options.mu_max.unwrap_or(DEFAULT_MU_MAX),
            degree_cap: self.options.degree_cap.unwrap_or(defaults.degree_cap),
            interp_degree: defaults.interp_degree,
        }
    }

    /// Shape and range checks, then conversion to engine types.
    pub fn validate(self) -> Result<ParsedProblem, InputError> {
        if self.dim == 0 {
            return Err(InputError::new("dim", "must be positive"));
        }
        let d = self.dim;
        finite("t0", self.t0)?;
        finite("origin", self.origin)?;
        finite("domain[0]", self.domain[0])?;
        finite("domain[1]", self.domain[1])?;
        let domain = Interval::new(self.domain[0], self.domain[1])
            .map_err(|_| InputError::new("domain", "lower end exceeds upper end"))?;
        if !domain.contains(self.t0) {
            return Err(InputError::new(
                "t0",
                format!(
                    "{} lies outside the domain [{}, {}]",
                    self.t0,
                    domain.lo(),
                    domain.hi()
                ),
            ));
        }

        let (a, builtin) = match &self.a {
            MatrixSpec::Builtin(spec) => {
                let case = parse_builtin(spec)?;
                if d != 2 {
                    return Err(InputError::new(
                        "dim",
                        format!("builtin {} is 2-dimensional, dim is {d}", case.name),
                    ));
                }
                (case.family(), Some(case))
            }
            MatrixSpec::Coefficients(rows) => {
                if rows.len() != d {
                    return Err(InputError::new(
                        "A",
                        format!("expected {d} rows, found {}", rows.len()),
                    ));
                }
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != d {
                        return Err(InputError::new(
                            format!("A[{i}]"),
                            format!("expected {d} entries, found {}", row.len()),
                        ));
                    }
                    for (j, coeffs) in row.iter().enumerate() {
                        if coeffs.iter().any(|c| !c.is_finite()) {
                            return Err(InputError::new(
                                format!("A[{i}][{j}]"),
                                "coefficients must be finite",
                            ));
                        }
                    }
                }
                let m = PolyMatrix::from_coeffs(self.origin, rows)
                    .map_err(|e| InputError::new("A", e.to_string()))?;
                (m, None)
            }
        };

        let b = match &self.b {
            None => None,
            Some(entries) => {
                if entries.len() != d {
                    return Err(InputError::new(
                        "b",
                        format!("expected {d} entries, found {}", entries.len()),
                    ));
                }
                for (i, coeffs) in entries.iter().enumerate() {
                    if coeffs.iter().any(|c| !c.is_finite()) {
                        return Err(InputError::new(
                            format!("b[{i}]"),
                            "coefficients must be finite",
                        ));
                    }
                }
                let v = PolyVector::from_coeffs(self.origin, entries)
                    .map_err(|e| InputError::new("b", e.to_string()))?;
                Some(VectorFunction::Polynomial(v))
            }
        };

        let has_x0 = self.x0.is_some();
        let x0 = match &self.x0 {
            None => vec![0.0; d],
            Some(x0) => {
                if x0.len() != d {
                    return Err(InputError::new(
                        "x0",
                        format!("expected {d} entries, found {}", x0.len()),
                    ));
                }
                for (i, &v) in x0.iter().enumerate() {
                    finite(&format!("x0[{i}]"), v)?;
                }
                x0.clone()
            }
        };

        let options = self.options();
        if options.tol <= 0.0 || !options.tol.is_finite() {
            return Err(InputError::new(
                "options.tol",
                "must be positive and finite",
            ));
        }
        if options.mu_max <= 0.0 || !options.mu_max.is_finite() {
            return Err(InputError::new(
                "options.mu_max",
                "must be positive and finite",
            ));
        }
        if options.degree_cap == 0 {
            return Err(InputError::new("options.degree_cap", "must be positive"));
        }

        let problem = CauchyProblem::new(
            MatrixFunction::Polynomial(a),
            b,
            self.t0,
            x0,
            domain,
            options,
        )
        .map_err(|e| InputError::new("", e.to_string()))?;

        Ok(ParsedProblem {
            file: self,
            problem,
            builtin,
            has_x0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::ClosedFormKind;

    #[test]
    fn minimal_scalar_problem() {
        let p =
            parse_problem_str(r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1.0]]]}"#).unwrap();
        assert_eq!(p.problem.dim(), 1);
        assert!(!p.has_x0);
        assert_eq!(p.problem.options.tol, 1e-10);
        assert_eq!(p.problem.options.mu_max, 1.0);
        assert_eq!(p.problem.options.degree_cap, 64);
        assert_eq!(p.problem.a.eval(0.3).unwrap()[(0, 0)], 1.0);
    }

    #[test]
    fn builtin_families() {
        let p = parse_problem_str(r#"{"dim": 2, "t0": 0, "domain": [0, 2], "A": "example1(a=2)"}"#)
            .unwrap();
        let case = p.builtin.unwrap();
        assert_eq!(case.kind, ClosedFormKind::Example1);
        assert_eq!(case.a, 2.0);
        assert_eq!(p.problem.a.eval(1.5).unwrap()[(0, 1)], 1.5);
        assert_eq!(p.problem.a.eval(1.5).unwrap()[(1, 1)], 2.0);
        assert_eq!(parse_builtin(" airy( a = -1 ) ").unwrap().a, -1.0);
        assert!(parse_builtin("bessel(a=1)").is_err());
        assert!(parse_builtin("airy(b=1)").is_err());
    }

    #[test]
    fn shape_errors_name_the_field() {
        let cases = [
            (
                r#"{"dim": 2, "t0": 0, "domain": [0, 1], "A": [[[1.0],[0.0]]]}"#,
                "A",
            ),
            (
                r#"{"dim": 2, "t0": 0, "domain": [0, 1], "A": [[[1.0],[0.0]],[[1.0]]]}"#,
                "A[1]",
            ),
            (
                r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1.0]]], "x0": [1, 2]}"#,
                "x0",
            ),
            (
                r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1.0]]], "b": []}"#,
                "b",
            ),
            (
                r#"{"dim": 1, "t0": 5, "domain": [0, 1], "A": [[[1.0]]]}"#,
                "t0",
            ),
            (
                r#"{"dim": 1, "t0": 0, "domain": [1, 0], "A": [[[1.0]]]}"#,
                "domain",
            ),
            (
                r#"{"dim": 3, "t0": 0, "domain": [0, 1], "A": "airy(a=1)"}"#,
                "dim",
            ),
            (
                r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1.0]]], "options": {"tol": -1}}"#,
                "options.tol",
            ),
        ];
        for (text, field) in cases {
            let err = parse_problem_str(text).unwrap_err();
            assert_eq!(err.field, field, "{text}: {err}");
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_problem_str("{\"dim\": 1,\n \"t0\": }").unwrap_err();
        assert!(err.message.contains("line 2"), "{err}");
        let err = parse_problem_str(r#"{"dim": 1, "t0": "zero", "domain": [0, 1], "A": [[[1]]]}"#)
            .unwrap_err();
        assert_eq!(err.field, "t0");
        let err =
            parse_problem_str(r#"{"dim": 1, "t0": 0, "domain": [0, 1], "A": [[[1]]], "extra": 1}"#)
                .unwrap_err();
        assert!(err.message.contains("extra"), "{err}");
    }

    #[test]
    fn reserialized_file_parses_to_the_same_problem() {
        let text = r#"{"dim": 2, "t0": 0.5, "domain": [0, 2], "origin": 1.0,
            "A": [[[1.0, 2.0], []], [[0.5], [0.0, 0.0, 3.0]]],
            "b": [[1.0], [0.0, -1.0]], "x0": [1, 2], "options": {"tol": 1e-12}}"#;
        let first = parse_problem_str(text).unwrap();
        let again = parse_problem_str(&serde_json::to_string(&first.file).unwrap()).unwrap();
        assert_eq!(first.file, again.file);
    }
}
