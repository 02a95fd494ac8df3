use std::fmt;

use super::FunctionDecl;

/// Boolean update expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    /// Network variable by index.
    Var(usize),
    /// Expanded input by index.
    Input(usize),
    /// Application of an uninterpreted function (index into the declarations).
    Apply { func: usize, args: Vec<Expr> },
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Imp(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Expr, b: Expr) -> Expr {
        Expr::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Expr, b: Expr) -> Expr {
        Expr::Iff(Box::new(a), Box::new(b))
    }

    /// Evaluates the expression. Applications are resolved by `apply`,
    /// which receives the function index and the evaluated arguments.
    pub fn eval_with(
        &self,
        var: &dyn Fn(usize) -> bool,
        input: &dyn Fn(usize) -> bool,
        apply: &dyn Fn(usize, &[bool]) -> bool,
    ) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => var(*i),
            Expr::Input(j) => input(*j),
            Expr::Apply { func, args } => {
                let values: Vec<bool> = args.iter().map(|a| a.eval_with(var, input, apply)).collect();
                apply(*func, &values)
            }
            Expr::Not(e) => !e.eval_with(var, input, apply),
            Expr::And(a, b) => a.eval_with(var, input, apply) && b.eval_with(var, input, apply),
            Expr::Or(a, b) => a.eval_with(var, input, apply) || b.eval_with(var, input, apply),
            Expr::Imp(a, b) => !a.eval_with(var, input, apply) || b.eval_with(var, input, apply),
            Expr::Iff(a, b) => a.eval_with(var, input, apply) == b.eval_with(var, input, apply),
        }
    }

    /// Evaluates an application-free expression.
    ///
    /// # Panics
    /// On an uninterpreted application.
    pub fn eval(&self, var: &dyn Fn(usize) -> bool, input: &dyn Fn(usize) -> bool) -> bool {
        self.eval_with(var, input, &|f, _| panic!("unexpanded application of function #{f}"))
    }

    pub fn mentions_var(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Var(_)))
    }

    pub fn has_application(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Apply { .. }))
    }

    fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Const(_) | Expr::Var(_) | Expr::Input(_) => false,
            Expr::Apply { args, .. } => args.iter().any(|a| a.any(pred)),
            Expr::Not(e) => e.any(pred),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Imp(a, b) | Expr::Iff(a, b) => a.any(pred) || b.any(pred),
        }
    }

    pub(crate) fn display<'a>(&'a self, names: &'a Names<'a>) -> Display<'a> {
        Display { expr: self, names }
    }
}

pub(crate) struct Names<'a> {
    pub variables: &'a [String],
    pub functions: &'a [FunctionDecl],
    pub inputs: &'a [String],
}

pub(crate) struct Display<'a> {
    expr: &'a Expr,
    names: &'a Names<'a>,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |e: &'_ Expr| Display { expr: e, names: self.names }.to_string();
        match self.expr {
            Expr::Const(b) => write!(f, "{}", *b as u8),
            Expr::Var(i) => write!(f, "{}", self.names.variables[*i]),
            Expr::Input(j) => write!(f, "{}", self.names.inputs[*j]),
            Expr::Apply { func, args } => {
                let args: Vec<String> = args.iter().map(sub).collect();
                write!(f, "{}({})", self.names.functions[*func].name, args.join(", "))
            }
            Expr::Not(e) => write!(f, "!{}", sub(e)),
            // Binary operators are always parenthesised, so precedence
            // never matters when the text is parsed back.
            Expr::And(a, b) => write!(f, "({} & {})", sub(a), sub(b)),
            Expr::Or(a, b) => write!(f, "({} | {})", sub(a), sub(b)),
            Expr::Imp(a, b) => write!(f, "({} => {})", sub(a), sub(b)),
            Expr::Iff(a, b) => write!(f, "({} <=> {})", sub(a), sub(b)),
        }
    }
}
