//! Problem configuration files.
//!
//! A configuration is a list of `key = value` lines. Blank lines and
//! everything after `#` are ignored. Numeric values may be constant
//! expressions (`1/144`, `exp(-1)/45 + 1/2`, `gamma(2.5)/0.5^1.5`).
//!
//! | key         | required | meaning                                   |
//! |-------------|----------|-------------------------------------------|
//! | `q`         | yes      | order of the equation, `1 < q ≤ 2`        |
//! | `nu`        | yes      | order in the first condition, `0 < ν ≤ 1` |
//! | `p`         | yes      | order of the integral condition, `p > 0`  |
//! | `alpha`     | yes      | coefficient of the integral condition     |
//! | `beta`      | yes      | coefficient of the derivative condition   |
//! | `xi`, `eta` | yes      | `0 ≤ ξ < η < 1`                           |
//! | `rhs`       | yes      | right-hand side, see [`parse_rhs`]        |
//! | `lipschitz` | no       | Lipschitz constant of `f` in `x`          |
//! | `rhs_bound` | no       | uniform bound on `|f|`                    |

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use super::expr::{eval_constant, Expr};
use crate::examples;
use crate::problem::{Params, ProblemSpec, Rhs};

const PARAM_KEYS: [&str; 7] = ["q", "nu", "p", "alpha", "beta", "xi", "eta"];
const OPTIONAL_KEYS: [&str; 2] = ["lipschitz", "rhs_bound"];

/// A configuration error, tied to a line when one is responsible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Right-hand side by name or expression.
///
/// - `example1`, `example2`, `example3`: the reference problems;
/// - `zero`: `f ≡ 0`;
/// - `linear:a,b`: the state-independent forcing `f(t, x) = a + b·t`;
/// - anything else is parsed as an expression in `t` and `x`.
pub fn parse_rhs(value: &str) -> Result<Rhs, String> {
    let value = value.trim();
    let builtin: Option<Rhs> = match value {
        "example1" => Some(Arc::new(examples::example1_rhs)),
        "example2" => Some(Arc::new(examples::example2_rhs)),
        "example3" => Some(Arc::new(examples::example3_rhs)),
        "zero" => Some(Arc::new(|_, _| 0.0)),
        _ => None,
    };
    if let Some(rhs) = builtin {
        return Ok(rhs);
    }
    if let Some(coeffs) = value.strip_prefix("linear:") {
        let parts: Vec<&str> = coeffs.split(',').collect();
        let [a, b] = parts.as_slice() else {
            return Err(format!(
                "linear rhs needs two coefficients 'a,b', got '{coeffs}'"
            ));
        };
        let a = eval_constant(a).map_err(|e| format!("linear coefficient a: {e}"))?;
        let b = eval_constant(b).map_err(|e| format!("linear coefficient b: {e}"))?;
        return Ok(Arc::new(move |t, _| a + b * t));
    }
    let expr = Expr::parse(value).map_err(|e| format!("rhs expression: {e}"))?;
    Ok(Arc::new(move |t, x| expr.eval(t, x)))
}

/// Parses a configuration document into a problem.
pub fn parse_config(text: &str) -> Result<ProblemSpec, ConfigError> {
    let mut numbers: HashMap<&str, (usize, f64)> = HashMap::new();
    let mut rhs: Option<(usize, Rhs)> = None;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, "expected 'key = value'"))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(ConfigError::at(line, format!("missing value for '{key}'")));
        }
        let seen = numbers.contains_key(key) || (key == "rhs" && rhs.is_some());
        if seen {
            return Err(ConfigError::at(line, format!("duplicate key '{key}'")));
        }
        if key == "rhs" {
            rhs = Some((
                line,
                parse_rhs(value).map_err(|m| ConfigError::at(line, m))?,
            ));
            continue;
        }
        let Some(&key) = PARAM_KEYS.iter().chain(&OPTIONAL_KEYS).find(|k| **k == key) else {
            return Err(ConfigError::at(line, format!("unknown key '{key}'")));
        };
        let v = eval_constant(value).map_err(|e| ConfigError::at(line, format!("{key}: {e}")))?;
        if !v.is_finite() {
            return Err(ConfigError::at(line, format!("{key} is not finite")));
        }
        numbers.insert(key, (line, v));
    }

    let get = |key: &str| {
        numbers.get(key).copied().ok_or_else(|| ConfigError {
            line: None,
            message: format!("missing required key '{key}'"),
        })
    };
    let mut values = [(0, 0.0); 7];
    for (slot, key) in values.iter_mut().zip(PARAM_KEYS) {
        *slot = get(key)?;
    }
    let [q, nu, p, alpha, beta, xi, eta] = values;
    check_range(q, "q", |v| v > 1.0 && v <= 2.0, "(1, 2]")?;
    check_range(nu, "nu", |v| v > 0.0 && v <= 1.0, "(0, 1]")?;
    check_range(p, "p", |v| v > 0.0, "(0, inf)")?;
    check_range(xi, "xi", |v| (0.0..1.0).contains(&v), "[0, 1)")?;
    check_range(eta, "eta", |v| v > 0.0 && v < 1.0, "(0, 1)")?;
    if xi.1 >= eta.1 {
        return Err(ConfigError::at(
            eta.0,
            format!("eta = {} must exceed xi = {}", eta.1, xi.1),
        ));
    }

    let params = Params {
        q: q.1,
        nu: nu.1,
        p: p.1,
        alpha: alpha.1,
        beta: beta.1,
        xi: xi.1,
        eta: eta.1,
    };
    let (_, rhs) = rhs.ok_or_else(|| ConfigError {
        line: None,
        message: "missing required key 'rhs'".into(),
    })?;
    let mut spec = ProblemSpec::new(params, rhs).map_err(|e| ConfigError {
        line: None,
        message: e.to_string(),
    })?;
    if let Some(&(line, l)) = numbers.get("lipschitz") {
        spec = spec
            .with_lipschitz(l)
            .map_err(|e| ConfigError::at(line, e.to_string()))?;
    }
    if let Some(&(line, m)) = numbers.get("rhs_bound") {
        spec = spec
            .with_rhs_bound(m)
            .map_err(|e| ConfigError::at(line, e.to_string()))?;
    }
    Ok(spec)
}

fn check_range(
    (line, value): (usize, f64),
    key: &str,
    ok: impl Fn(f64) -> bool,
    range: &str,
) -> Result<(), ConfigError> {
    if ok(value) {
        Ok(())
    } else {
        Err(ConfigError::at(
            line,
            format!("{key} = {value} must lie in {range}"),
        ))
    }
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<ProblemSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config(&text)
}
