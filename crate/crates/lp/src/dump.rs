// Copyright (c) 2026 The rdarp developers.
//
// Permission is hereby granted, free of charge, to any person obtaining
// a copy of this software and associated documentation files (the
// "Software"), to deal in the Software without restriction, including
// without limitation the rights to use, copy, modify, merge, publish,
// distribute, sublicense, and/or sell copies of the Software, and to
// permit persons to whom the Software is furnished to do so, subject to
// the following conditions:
//
// The above copyright notice and this permission notice shall be
// included in all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
// EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
// MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
// NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE
// LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION
// OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION
// WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.


//! Plain text dump of a [`LinearModel`], one variable or constraint per line.
//!
//! ```text
//! VAR <name> <lb> <ub> <obj>
//! CON <name> <le|eq|ge> <rhs> <idx>:<coef> ...
//! ```

use std::fmt::Write as _;

use crate::model::{LinearModel, Sense};

fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:?}")
    }
}

fn token(name: &str) -> String {
    if name.is_empty() {
        "_".to_string()
    } else {
        name.replace(char::is_whitespace, "_")
    }
}

pub fn dump_model(model: &LinearModel) -> String {
    let mut out = String::new();
    for v in &model.vars {
        let _ = writeln!(out, "VAR {} {} {} {}", token(&v.name), num(v.lb), num(v.ub), num(v.obj));
    }
    for c in &model.cons {
        let sense = match c.sense {
            Sense::Le => "le",
            Sense::Eq => "eq",
            Sense::Ge => "ge",
        };
        let _ = write!(out, "CON {} {} {}", token(&c.name), sense, num(c.rhs));
        for &(j, a) in &c.coeffs {
            let _ = write!(out, " {}:{}", j, num(a));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct DumpParseError {
    pub line: usize,
    pub msg: String,
}

fn parse_num(s: &str, line: usize) -> Result<f64, DumpParseError> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse().map_err(|_| DumpParseError {
            line,
            msg: format!("bad number {s:?}"),
        }),
    }
}

/// Inverse of [`dump_model`].
pub fn parse_dump(text: &str) -> Result<LinearModel, DumpParseError> {
    let mut model = LinearModel::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut it = raw.split_whitespace();
        let err = |msg: &str| DumpParseError {
            line,
            msg: msg.to_string(),
        };
        match it.next() {
            None => continue,
            Some("VAR") => {
                let name = it.next().ok_or_else(|| err("missing name"))?;
                let lb = parse_num(it.next().ok_or_else(|| err("missing lb"))?, line)?;
                let ub = parse_num(it.next().ok_or_else(|| err("missing ub"))?, line)?;
                let obj = parse_num(it.next().ok_or_else(|| err("missing obj"))?, line)?;
                model.add_var(name, lb, ub, obj);
            }
            Some("CON") => {
                let name = it.next().ok_or_else(|| err("missing name"))?;
                let sense = match it.next() {
                    Some("le") => Sense::Le,
                    Some("eq") => Sense::Eq,
                    Some("ge") => Sense::Ge,
                    _ => return Err(err("bad sense")),
                };
                let rhs = parse_num(it.next().ok_or_else(|| err("missing rhs"))?, line)?;
                let mut coeffs = Vec::new();
                for tok in it {
                    let (j, a) = tok.split_once(':').ok_or_else(|| err("bad coefficient"))?;
                    let j: usize = j.parse().map_err(|_| err("bad index"))?;
                    coeffs.push((j, parse_num(a, line)?));
                }
                model.add_con(name, coeffs, sense, rhs);
            }
            Some(other) => return Err(err(&format!("unknown record {other}"))),
        }
    }
    Ok(model)
}
