//! Partially specified Boolean networks.
//!
//! A network is parsed from the `bnet-psbn` text format, its uninterpreted
//! functions are expanded into explicit inputs (one per truth-table row), and
//! the resulting update functions are encoded as symbolic sets.

mod encode;
mod expand;
mod expr;
mod parser;

use thiserror::Error;

use crate::engine::VariableUniverse;

pub use encode::{encode, valid_colours};
pub use expand::expand;
pub use expr::Expr;
pub use parser::parse_model;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("undeclared symbol `{name}` at {line}:{column}")]
    Undeclared { line: usize, column: usize, name: String },
    #[error("function `{name}` has arity {expected} but is applied to {found} arguments at {line}:{column}")]
    Arity { line: usize, column: usize, name: String, expected: usize, found: usize },
    #[error("{0}")]
    Declaration(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

/// Declaration of an uninterpreted function symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub arity: usize,
}

impl FunctionDecl {
    /// Number of truth-table rows, i.e. expanded inputs.
    pub fn rows(&self) -> usize {
        1 << self.arity
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBooleanNetwork {
    pub variables: Vec<String>,
    pub functions: Vec<FunctionDecl>,
    /// One update per variable, in variable order.
    pub updates: Vec<Expr>,
    /// Constraint over expanded inputs; references them as [`Expr::Input`]
    /// using the layout of [`input_layout`].
    pub colour_constraint: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedNetwork {
    pub variables: Vec<String>,
    pub inputs: Vec<String>,
    /// For every input, the function it belongs to and its row (argument
    /// values left to right).
    pub input_rows: Vec<(usize, Vec<bool>)>,
    /// No applications remain, only variables, inputs and constants.
    pub updates: Vec<Expr>,
    pub valid_colour_constraint: Expr,
}

/// Expanded input names and rows of the given declarations, in input order.
///
/// Inputs of `f_k` are contiguous and follow declaration order. Within one
/// function, rows are listed with the all-true row first (the positive
/// branch of every expansion step comes first). A row is named
/// `<symbol>_<bits>`, e.g. `f2_10` for `f2(1, 0)`; nullary symbols keep
/// their name.
pub fn input_layout(functions: &[FunctionDecl]) -> Vec<(String, usize, Vec<bool>)> {
    let mut layout = Vec::new();
    for (k, f) in functions.iter().enumerate() {
        for r in 0..f.rows() {
            let value = f.rows() - 1 - r;
            let bits: Vec<bool> = (0..f.arity).map(|i| value >> (f.arity - 1 - i) & 1 == 1).collect();
            layout.push((input_name(&f.name, &bits), k, bits));
        }
    }
    layout
}

pub fn input_name(symbol: &str, row: &[bool]) -> String {
    if row.is_empty() {
        symbol.to_string()
    } else {
        let bits: String = row.iter().map(|b| if *b { '1' } else { '0' }).collect();
        format!("{symbol}_{bits}")
    }
}

/// Index of the input standing for `functions[func]` at `row`.
pub(crate) fn input_index(functions: &[FunctionDecl], func: usize, row: &[bool]) -> usize {
    let offset: usize = functions[..func].iter().map(FunctionDecl::rows).sum();
    let value = row.iter().fold(0usize, |acc, b| acc << 1 | *b as usize);
    offset + functions[func].rows() - 1 - value
}

impl PartialBooleanNetwork {
    /// Renders the network back into the `bnet-psbn` format.
    pub fn to_bnet(&self) -> String {
        let inputs: Vec<String> = input_layout(&self.functions).into_iter().map(|(n, _, _)| n).collect();
        let names = expr::Names { variables: &self.variables, functions: &self.functions, inputs: &inputs };
        let mut out = String::from("targets, factors\n");
        for f in &self.functions {
            out.push_str(&format!("fun {}/{}\n", f.name, f.arity));
        }
        if let Some(c) = &self.colour_constraint {
            out.push_str(&format!("constraint {}\n", c.display(&names)));
        }
        for (v, update) in self.variables.iter().zip(&self.updates) {
            out.push_str(&format!("{v}, {}\n", update.display(&names)));
        }
        out
    }

    pub fn num_inputs(&self) -> usize {
        self.functions.iter().map(FunctionDecl::rows).sum()
    }
}

impl ExpandedNetwork {
    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    /// Variable universe with one state variable per network variable and
    /// one input variable per expanded input.
    pub fn universe(&self) -> Result<VariableUniverse, ModelError> {
        VariableUniverse::new(self.variables.clone(), self.inputs.clone())
            .map_err(|e| ModelError::Declaration(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_lists_true_rows_first() {
        let fs = vec![
            FunctionDecl { name: "f1".into(), arity: 1 },
            FunctionDecl { name: "f2".into(), arity: 2 },
            FunctionDecl { name: "f3".into(), arity: 0 },
        ];
        let names: Vec<String> = input_layout(&fs).into_iter().map(|(n, _, _)| n).collect();
        assert_eq!(names, ["f1_1", "f1_0", "f2_11", "f2_10", "f2_01", "f2_00", "f3"]);
        assert_eq!(input_index(&fs, 1, &[false, true]), 4);
        assert_eq!(input_index(&fs, 2, &[]), 6);
    }
}
