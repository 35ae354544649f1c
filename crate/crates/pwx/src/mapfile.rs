//! The `.pwmap` text format.
//!
//! ```text
//! # doubling on the left, halving on the right
//! family = paper
//! p = 2
//! s = 0.5
//! ```
//!
//! One `key = value` pair per line, `#` starts a comment. Keys are `family`
//! (`paper` or `classF`), `p`, `s`, and for `classF` also `a`, `b`, `d`.
//! Values are rational literals: `3`, `-1/4` or exact decimals like `0.9`.

use std::fmt::Write as _;

use pwx_core::rational::parse_rational;
use pwx_core::{build_class_f_map, build_paper_map, PiecewiseLinearMap, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `a = 0`, `b = -s/p`, `d = 1/p`.
    Paper,
    ClassF,
}

impl Family {
    fn keyword(self) -> &'static str {
        match self {
            Family::Paper => "paper",
            Family::ClassF => "classF",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub family: Family,
    pub p: Rational,
    pub s: Rational,
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub d: Option<Rational>,
}

impl MapSpec {
    pub fn paper(p: Rational, s: Rational) -> Self {
        MapSpec {
            family: Family::Paper,
            p,
            s,
            a: None,
            b: None,
            d: None,
        }
    }

    pub fn class_f(p: Rational, s: Rational, a: Rational, b: Rational, d: Rational) -> Self {
        MapSpec {
            family: Family::ClassF,
            p,
            s,
            a: Some(a),
            b: Some(b),
            d: Some(d),
        }
    }

    pub fn to_map(&self) -> Result<PiecewiseLinearMap, pwx_core::Error> {
        match self.family {
            Family::Paper => build_paper_map(self.p.clone(), self.s.clone()),
            Family::ClassF => {
                let field = |v: &Option<Rational>| v.clone().unwrap_or_default();
                build_class_f_map(
                    self.p.clone(),
                    self.s.clone(),
                    field(&self.a),
                    field(&self.b),
                    field(&self.d),
                )
            }
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MapfileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    /// A key given twice, or `a`/`b`/`d` given with `family = paper`.
    #[error("line {line}: {}", duplicate_message(.key, *.fixed_by_family))]
    DuplicateKey {
        key: String,
        line: usize,
        fixed_by_family: bool,
    },
    #[error("{0}")]
    ValueDomain(#[from] pwx_core::Error),
}

const KEYS: [&str; 6] = ["family", "p", "s", "a", "b", "d"];

pub fn parse_mapfile(text: &str) -> Result<MapSpec, MapfileError> {
    let mut family: Option<Family> = None;
    let mut values: [Option<(Rational, usize)>; 5] = Default::default();
    let mut family_line = 0;

    for (idx, raw_line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let syntax = |column: usize, message: String| MapfileError::Syntax {
            line: line_no,
            column,
            message,
        };
        let Some(eq) = content.find('=') else {
            let column = content.len() - content.trim_start().len() + 1;
            return Err(syntax(column, "expected `key = value`".into()));
        };
        let key = content[..eq].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        let value_part = &content[eq + 1..];
        let value = value_part.trim();
        let value_col = eq + 2 + (value_part.len() - value_part.trim_start().len());
        if key.is_empty() {
            return Err(syntax(key_col, "missing key before `=`".into()));
        }
        if value.is_empty() {
            return Err(syntax(value_col, format!("missing value for `{key}`")));
        }
        let Some(slot) = KEYS.iter().position(|k| *k == key) else {
            return Err(syntax(key_col, format!("unknown key `{key}`")));
        };
        if slot == 0 {
            if family.is_some() {
                return Err(MapfileError::DuplicateKey {
                    key: key.into(),
                    line: line_no,
                    fixed_by_family: false,
                });
            }
            family = Some(match value {
                "paper" => Family::Paper,
                "classF" => Family::ClassF,
                other => {
                    return Err(syntax(
                        value_col,
                        format!("unknown family `{other}` (expected `paper` or `classF`)"),
                    ))
                }
            });
            family_line = line_no;
            continue;
        }
        let entry = &mut values[slot - 1];
        if entry.is_some() {
            return Err(MapfileError::DuplicateKey {
                key: key.into(),
                line: line_no,
                fixed_by_family: false,
            });
        }
        let parsed = parse_rational(value)
            .map_err(|e| syntax(value_col + e.offset, format!("invalid value for `{key}`: {e}")))?;
        *entry = Some((parsed, line_no));
    }

    let family = family.ok_or(MapfileError::MissingKey("family"))?;
    let [p, s, a, b, d] = values;
    let p = p.ok_or(MapfileError::MissingKey("p"))?.0;
    let s = s.ok_or(MapfileError::MissingKey("s"))?.0;
    let spec = match family {
        Family::Paper => {
            for (name, v) in [("a", &a), ("b", &b), ("d", &d)] {
                if let Some((_, line)) = v {
                    return Err(MapfileError::DuplicateKey {
                        key: name.into(),
                        line: (*line).max(family_line),
                        fixed_by_family: true,
                    });
                }
            }
            MapSpec::paper(p, s)
        }
        Family::ClassF => MapSpec::class_f(
            p,
            s,
            a.ok_or(MapfileError::MissingKey("a"))?.0,
            b.ok_or(MapfileError::MissingKey("b"))?.0,
            d.ok_or(MapfileError::MissingKey("d"))?.0,
        ),
    };
    spec.to_map()?;
    Ok(spec)
}

fn duplicate_message(key: &str, fixed_by_family: bool) -> String {
    if fixed_by_family {
        format!("key `{key}` is already fixed by `family = paper`")
    } else {
        format!("duplicate key `{key}`")
    }
}

/// Canonical text: fixed key order, lowest-terms rationals, LF-terminated.
pub fn emit_mapfile(spec: &MapSpec) -> String {
    let mut out = String::new();
    writeln!(out, "family = {}", spec.family.keyword()).unwrap();
    writeln!(out, "p = {}", spec.p).unwrap();
    writeln!(out, "s = {}", spec.s).unwrap();
    if spec.family == Family::ClassF {
        for (key, v) in [("a", &spec.a), ("b", &spec.b), ("d", &spec.d)] {
            if let Some(v) = v {
                writeln!(out, "{key} = {v}").unwrap();
            }
        }
    }
    out
}
