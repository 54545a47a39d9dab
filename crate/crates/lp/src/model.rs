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


use std::fmt;

use thiserror::Error;

/// Row sense of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Le => write!(f, "<="),
            Sense::Eq => write!(f, "="),
            Sense::Ge => write!(f, ">="),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lb: f64,
    pub ub: f64,
    pub obj: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A minimisation LP given row-wise.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearModel {
    pub vars: Vec<Variable>,
    pub cons: Vec<Constraint>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("model has no variables")]
    Empty,
    #[error("variable {index} ({name}): lower bound {lb} exceeds upper bound {ub}")]
    InvertedBounds {
        index: usize,
        name: String,
        lb: f64,
        ub: f64,
    },
    #[error("variable {index} ({name}): non-finite objective coefficient")]
    BadObjective { index: usize, name: String },
    #[error("constraint {row} ({name}): {what}")]
    BadRow {
        row: usize,
        name: String,
        what: String,
    },
}

impl LinearModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: f64, ub: f64, obj: f64) -> usize {
        self.vars.push(Variable {
            name: name.into(),
            lb,
            ub,
            obj,
        });
        self.vars.len() - 1
    }

    pub fn add_con(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> usize {
        self.cons.push(Constraint {
            name: name.into(),
            coeffs,
            sense,
            rhs,
        });
        self.cons.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_cons(&self) -> usize {
        self.cons.len()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.vars.is_empty() {
            return Err(ModelError::Empty);
        }
        for (index, v) in self.vars.iter().enumerate() {
            if v.lb.is_nan() || v.ub.is_nan() || v.lb > v.ub || v.lb == f64::INFINITY || v.ub == f64::NEG_INFINITY {
                return Err(ModelError::InvertedBounds {
                    index,
                    name: v.name.clone(),
                    lb: v.lb,
                    ub: v.ub,
                });
            }
            if !v.obj.is_finite() {
                return Err(ModelError::BadObjective {
                    index,
                    name: v.name.clone(),
                });
            }
        }
        for (row, c) in self.cons.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(ModelError::BadRow {
                    row,
                    name: c.name.clone(),
                    what: format!("non-finite right-hand side {}", c.rhs),
                });
            }
            for &(j, a) in &c.coeffs {
                if j >= self.vars.len() {
                    return Err(ModelError::BadRow {
                        row,
                        name: c.name.clone(),
                        what: format!("unknown variable index {j}"),
                    });
                }
                if !a.is_finite() {
                    return Err(ModelError::BadRow {
                        row,
                        name: c.name.clone(),
                        what: format!("non-finite coefficient on variable {j}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Row activity `a_r · x` for every constraint.
    pub fn row_activity(&self, x: &[f64]) -> Vec<f64> {
        self.cons
            .iter()
            .map(|c| c.coeffs.iter().map(|&(j, a)| a * x[j]).sum())
            .collect()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.vars.iter().zip(x).map(|(v, xi)| v.obj * xi).sum()
    }
}
