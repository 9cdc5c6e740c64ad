//! The `rg-w/1` model file format.
//!
//! ```text
//! format = rg-w/1
//! mode = restricted
//! # comments run to the end of the line
//! a = "1/3"
//! a15 = "44/81 sqrt3"
//! ```
//!
//! General mode lists terms instead: `term x^3 y^0 = "1/3"`. A template may
//! declare `param eps = "8/3"` and use `"$eps"` as a coefficient; callers can
//! override parameter values at parse time.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{ExactScalar, Var};
use crate::model::{ModelKind, WModel, DERIVED_TERM, RESTRICTED_TERMS};
use crate::Rational;

pub const FORMAT_TAG: &str = "rg-w/1";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ModelFileError {
    /// 1-based; `None` for whole-file problems.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ModelFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ModelFileError> {
    Err(ModelFileError {
        line: Some(line),
        message: message.into(),
    })
}

fn file_err(message: impl Into<String>) -> ModelFileError {
    ModelFileError {
        line: None,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileMode {
    Restricted,
    General,
}

/// A parsed model file.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub model: WModel,
    pub mode: FileMode,
    /// Effective template parameter values, after overrides.
    pub params: BTreeMap<String, ExactScalar>,
}

pub fn parse_model(text: &str) -> Result<WModel, ModelFileError> {
    parse_model_file(text, &BTreeMap::new()).map(|f| f.model)
}

enum Value {
    Literal(ExactScalar),
    Param(String),
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(v: &str, line: usize) -> Result<&str, ModelFileError> {
    match v.strip_prefix('"').and_then(|s| s.strip_suffix('"')) {
        Some(inner) if !inner.contains('"') => Ok(inner),
        _ => err(line, format!("expected a quoted value, found `{v}`")),
    }
}

fn parse_value(v: &str, line: usize) -> Result<Value, ModelFileError> {
    let inner = unquote(v, line)?.trim();
    if let Some(name) = inner.strip_prefix('$') {
        if !valid_ident(name) {
            return err(line, format!("malformed parameter reference `{inner}`"));
        }
        return Ok(Value::Param(name.to_string()));
    }
    inner
        .parse::<ExactScalar>()
        .map(Value::Literal)
        .or_else(|e| err(line, e.to_string()))
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `x^i y^j`, with `x`, `y` meaning exponent 1 and an omitted factor 0.
fn parse_term_key(s: &str, line: usize) -> Result<(u32, u32), ModelFileError> {
    let mut exps = [None, None];
    for factor in s
        .split_whitespace()
        .flat_map(|w| w.split('*'))
        .filter(|w| !w.is_empty())
    {
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => match e.parse::<u32>() {
                Ok(n) => (v, n),
                Err(_) => return err(line, format!("malformed exponent in `{factor}`")),
            },
            None => (factor, 1),
        };
        let slot = match var {
            "x" => 0,
            "y" => 1,
            _ => return err(line, format!("unknown variable `{var}` in term")),
        };
        if exps[slot].replace(exp).is_some() {
            return err(line, format!("variable `{var}` repeated in term"));
        }
    }
    if exps == [None, None] {
        return err(line, "term needs a monomial such as `x^3 y^0`");
    }
    Ok((exps[0].unwrap_or(0), exps[1].unwrap_or(0)))
}

enum Entry {
    Coeff(Var),
    Term((u32, u32)),
}

/// Parses a model file; `overrides` replace the defaults of `param` lines.
pub fn parse_model_file(
    text: &str,
    overrides: &BTreeMap<String, ExactScalar>,
) -> Result<ModelFile, ModelFileError> {
    let mut format_seen = false;
    let mut mode: Option<(FileMode, usize)> = None;
    let mut params: BTreeMap<String, ExactScalar> = BTreeMap::new();
    let mut entries: Vec<(Entry, Value, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return err(line, format!("expected `key = value`, found `{content}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if !format_seen {
            if key != "format" {
                return err(
                    line,
                    format!("the first entry must be `format = {FORMAT_TAG}`"),
                );
            }
            let tag = value.trim_matches('"');
            if tag != FORMAT_TAG {
                return err(line, format!("unsupported format `{tag}`"));
            }
            format_seen = true;
            continue;
        }
        match key {
            "format" => return err(line, "duplicate `format`"),
            "mode" => {
                if mode.is_some() {
                    return err(line, "duplicate `mode`");
                }
                let m = match value.trim_matches('"') {
                    "restricted" => FileMode::Restricted,
                    "general" => FileMode::General,
                    other => {
                        return err(
                            line,
                            format!("mode must be `restricted` or `general`, found `{other}`"),
                        )
                    }
                };
                mode = Some((m, line));
            }
            _ => {
                if let Some(name) = key.strip_prefix("param ") {
                    let name = name.trim();
                    if !valid_ident(name) {
                        return err(line, format!("malformed parameter name `{name}`"));
                    }
                    let Value::Literal(v) = parse_value(value, line)? else {
                        return err(line, "parameter defaults must be literal");
                    };
                    if params.insert(name.to_string(), v).is_some() {
                        return err(line, format!("duplicate parameter `{name}`"));
                    }
                } else if let Some(mono) = key.strip_prefix("term ") {
                    entries.push((
                        Entry::Term(parse_term_key(mono, line)?),
                        parse_value(value, line)?,
                        line,
                    ));
                } else if let Some(v) = Var::PARAMS.iter().find(|v| v.name() == key) {
                    entries.push((Entry::Coeff(*v), parse_value(value, line)?, line));
                } else if key == "x4y" {
                    return err(
                        line,
                        "the x^4 y coefficient is derived (9 a^2) and cannot be set",
                    );
                } else {
                    return err(line, format!("unknown key `{key}`"));
                }
            }
        }
    }

    if !format_seen {
        return Err(file_err("empty model file"));
    }
    let Some((mode, _)) = mode else {
        return Err(file_err("missing `mode`"));
    };
    for (name, v) in overrides {
        match params.get_mut(name) {
            Some(slot) => *slot = v.clone(),
            None => {
                return Err(file_err(format!(
                    "the model declares no parameter `{name}`"
                )))
            }
        }
    }

    let mut coeffs: [ExactScalar; 12] = Default::default();
    let mut set = [false; 12];
    let mut terms: BTreeMap<(u32, u32), ExactScalar> = BTreeMap::new();
    for (entry, value, line) in entries {
        let c = match value {
            Value::Literal(c) => c,
            Value::Param(p) => match params.get(&p) {
                Some(c) => c.clone(),
                None => return err(line, format!("undeclared parameter `${p}`")),
            },
        };
        if !c.is_nonneg() {
            return err(
                line,
                format!("negative coefficient {}", format_coefficient(&c)),
            );
        }
        match (entry, mode) {
            (Entry::Coeff(v), FileMode::Restricted) => {
                let i = Var::PARAMS.iter().position(|p| *p == v).expect("parameter");
                if std::mem::replace(&mut set[i], true) {
                    return err(line, format!("duplicate coefficient `{}`", v.name()));
                }
                coeffs[i] = c;
            }
            (Entry::Term(t), FileMode::General) => {
                if terms.insert(t, c).is_some() {
                    return err(line, format!("duplicate term x^{} y^{}", t.0, t.1));
                }
            }
            (Entry::Term(t), FileMode::Restricted) if t == DERIVED_TERM => {
                return err(
                    line,
                    "the x^4 y coefficient is derived (9 a^2) and cannot be set",
                );
            }
            (Entry::Term(_), FileMode::Restricted) => {
                return err(line, "`term` entries need `mode = general`");
            }
            (Entry::Coeff(v), FileMode::General) => {
                return err(
                    line,
                    format!("named coefficient `{}` needs `mode = restricted`", v.name()),
                );
            }
        }
    }

    let model = match mode {
        FileMode::Restricted => WModel::restricted(coeffs),
        FileMode::General => WModel::general(terms),
    }
    .map_err(|e| file_err(e.to_string()))?;
    Ok(ModelFile {
        model,
        mode,
        params,
    })
}

fn fmt_q(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `p/q`, `r/s sqrt3`, or `p/q + r/s sqrt3`, as accepted by the parser.
pub fn format_coefficient(c: &ExactScalar) -> String {
    let (q, r) = (c.rational_part(), c.sqrt3_part());
    match (q.is_zero(), r.is_zero()) {
        (_, true) => fmt_q(q),
        (true, false) => format!("{} sqrt3", fmt_q(r)),
        (false, false) => {
            let sign = if r.is_negative() { '-' } else { '+' };
            format!("{} {sign} {} sqrt3", fmt_q(q), fmt_q(&r.abs()))
        }
    }
}

/// Canonical text for `m`: restricted models list their nonzero
/// coefficients in parameter order, general models their terms in
/// exponent order.
pub fn serialize_model(m: &WModel) -> String {
    let mut out = format!("format = {FORMAT_TAG}\n");
    match m.kind() {
        ModelKind::Restricted(c) => {
            out.push_str("mode = restricted\n");
            for ((_, v), c) in RESTRICTED_TERMS.iter().zip(c.iter()) {
                if !c.is_zero() {
                    out.push_str(&format!("{} = \"{}\"\n", v.name(), format_coefficient(c)));
                }
            }
        }
        ModelKind::General(t) => {
            out.push_str("mode = general\n");
            for ((i, j), c) in t {
                out.push_str(&format!(
                    "term x^{i} y^{j} = \"{}\"\n",
                    format_coefficient(c)
                ));
            }
        }
    }
    out
}
