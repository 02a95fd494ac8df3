//! Reader for the `bnet-psbn` format.
//!
//! ```text
//! # comment
//! targets, factors
//! fun f1/1
//! fun f2/2
//! constraint f1_0 => f1_1
//! x1, x1 & f1(x2)
//! x2, !x1 | f2(x1, x2)
//! ```
//!
//! Operators by increasing binding strength: `<=>`, `=>` (right
//! associative), `|`, `&`, `!`.

use std::collections::HashMap;

use super::{input_layout, Expr, FunctionDecl, ModelError, PartialBooleanNetwork};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Const(bool),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Imp,
    Iff,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    token: Token,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes `text`, which starts at `column` (1-based) of `line`.
fn tokenize(text: &str, line: usize, column: usize) -> Result<Vec<Spanned>, ModelError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = column + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (token, len) = match c {
            '(' => (Token::LParen, 1),
            ')' => (Token::RParen, 1),
            ',' => (Token::Comma, 1),
            '!' => (Token::Not, 1),
            '&' => (Token::And, 1),
            '|' => (Token::Or, 1),
            '0' | '1' if !chars.get(i + 1).is_some_and(|n| is_ident_char(*n)) => (Token::Const(c == '1'), 1),
            '=' if chars.get(i + 1) == Some(&'>') => (Token::Imp, 2),
            '<' if chars.get(i + 1) == Some(&'=') && chars.get(i + 2) == Some(&'>') => (Token::Iff, 3),
            c if is_ident_start(c) => {
                let len = chars[i..].iter().take_while(|c| is_ident_char(**c)).count();
                (Token::Ident(chars[i..i + len].iter().collect()), len)
            }
            other => {
                return Err(ModelError::Syntax { line, column: col, message: format!("unexpected character `{other}`") })
            }
        };
        tokens.push(Spanned { token, column: col });
        i += len;
    }
    tokens.push(Spanned { token: Token::End, column: column + chars.len() });
    Ok(tokens)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    Update,
    Constraint,
}

struct Symbols<'a> {
    variables: &'a HashMap<String, usize>,
    functions: &'a HashMap<String, usize>,
    decls: &'a [FunctionDecl],
    inputs: &'a HashMap<String, usize>,
}

struct ExprParser<'a> {
    tokens: Vec<Spanned>,
    pos: usize,
    line: usize,
    symbols: &'a Symbols<'a>,
    context: Context,
}

impl ExprParser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn column(&self) -> usize {
        self.tokens[self.pos].column
    }

    fn advance(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ModelError {
        ModelError::Syntax { line: self.line, column: self.column(), message: message.into() }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ModelError> {
        if *self.peek() == token {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn parse(mut self) -> Result<Expr, ModelError> {
        let e = self.iff()?;
        if *self.peek() != Token::End {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(e)
    }

    fn iff(&mut self) -> Result<Expr, ModelError> {
        let mut left = self.imp()?;
        while *self.peek() == Token::Iff {
            self.advance();
            let right = self.imp()?;
            left = Expr::iff(left, right);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Expr, ModelError> {
        let left = self.or()?;
        if *self.peek() == Token::Imp {
            self.advance();
            let right = self.imp()?;
            return Ok(Expr::imp(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Expr, ModelError> {
        let mut left = self.and()?;
        while *self.peek() == Token::Or {
            self.advance();
            left = Expr::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Expr, ModelError> {
        let mut left = self.unary()?;
        while *self.peek() == Token::And {
            self.advance();
            left = Expr::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, ModelError> {
        if *self.peek() == Token::Not {
            self.advance();
            return Ok(Expr::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ModelError> {
        let Spanned { token, column } = self.advance();
        match token {
            Token::Const(b) => Ok(Expr::Const(b)),
            Token::LParen => {
                let e = self.iff()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(e)
            }
            Token::Ident(name) => {
                if *self.peek() == Token::LParen {
                    self.advance();
                    let mut args = Vec::new();
                    if *self.peek() != Token::RParen {
                        args.push(self.iff()?);
                        while *self.peek() == Token::Comma {
                            self.advance();
                            args.push(self.iff()?);
                        }
                    }
                    self.expect(Token::RParen, "`)` or `,`")?;
                    self.application(name, args, column)
                } else {
                    self.identifier(name, column)
                }
            }
            Token::End => Err(ModelError::Syntax { line: self.line, column, message: "unexpected end of expression".into() }),
            other => Err(ModelError::Syntax { line: self.line, column, message: format!("unexpected token {other:?}") }),
        }
    }

    fn application(&self, name: String, args: Vec<Expr>, column: usize) -> Result<Expr, ModelError> {
        if self.context == Context::Constraint {
            return Err(ModelError::Syntax {
                line: self.line,
                column,
                message: "function applications are not allowed in constraints".into(),
            });
        }
        let Some(&func) = self.symbols.functions.get(&name) else {
            return Err(ModelError::Undeclared { line: self.line, column, name });
        };
        let expected = self.symbols.decls[func].arity;
        if expected != args.len() {
            return Err(ModelError::Arity { line: self.line, column, name, expected, found: args.len() });
        }
        Ok(Expr::Apply { func, args })
    }

    fn identifier(&self, name: String, column: usize) -> Result<Expr, ModelError> {
        if self.context == Context::Constraint {
            if let Some(&j) = self.symbols.inputs.get(&name) {
                return Ok(Expr::Input(j));
            }
        }
        if let Some(&i) = self.symbols.variables.get(&name) {
            return Ok(Expr::Var(i));
        }
        // A bare function name is a nullary application; `application`
        // reports the mismatch when the symbol takes arguments.
        if self.context == Context::Update && self.symbols.functions.contains_key(&name) {
            return self.application(name, Vec::new(), column);
        }
        Err(ModelError::Undeclared { line: self.line, column, name })
    }
}

struct Pending<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn parse_identifier(text: &str, line: usize, column: usize, what: &str) -> Result<String, ModelError> {
    let valid = text.chars().next().is_some_and(is_ident_start) && text.chars().all(is_ident_char);
    if valid {
        Ok(text.to_string())
    } else {
        Err(ModelError::Syntax { line, column, message: format!("invalid {what} `{text}`") })
    }
}

/// Column (1-based) at which `part` starts inside `line`.
fn column_of(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

/// Parses a model in the `bnet-psbn` format.
pub fn parse_model(text: &str) -> Result<PartialBooleanNetwork, ModelError> {
    let mut decls: Vec<FunctionDecl> = Vec::new();
    let mut constraints: Vec<Pending> = Vec::new();
    let mut updates: Vec<(String, Pending)> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lowered = trimmed.to_ascii_lowercase();
        let compact: String = lowered.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "targets,factors" {
            continue;
        }
        let col = column_of(raw, trimmed);
        if let Some(rest) = trimmed.strip_prefix("fun ") {
            let rest = rest.trim();
            let rest_col = column_of(raw, rest);
            let Some((name, arity)) = rest.split_once('/') else {
                return Err(ModelError::Syntax { line: line_no, column: rest_col, message: "expected `fun <name>/<arity>`".into() });
            };
            let name = parse_identifier(name.trim(), line_no, rest_col, "function name")?;
            let arity: usize = arity.trim().parse().map_err(|_| ModelError::Syntax {
                line: line_no,
                column: column_of(raw, arity),
                message: format!("invalid arity `{}`", arity.trim()),
            })?;
            if arity > 16 {
                return Err(ModelError::Declaration(format!("function `{name}` has arity {arity}; at most 16 is supported")));
            }
            if decls.iter().any(|d| d.name == name) {
                return Err(ModelError::Declaration(format!("function `{name}` declared twice")));
            }
            decls.push(FunctionDecl { name, arity });
        } else if let Some(rest) = trimmed.strip_prefix("constraint ") {
            constraints.push(Pending { line: line_no, column: column_of(raw, rest), text: rest });
        } else {
            let Some((name, body)) = trimmed.split_once(',') else {
                return Err(ModelError::Syntax { line: line_no, column: col, message: "expected `<variable>, <expression>`".into() });
            };
            let name = parse_identifier(name.trim(), line_no, col, "variable name")?;
            if updates.iter().any(|(n, _)| *n == name) {
                return Err(ModelError::Declaration(format!("variable `{name}` has more than one update function")));
            }
            updates.push((name, Pending { line: line_no, column: column_of(raw, body), text: body }));
        }
    }

    if updates.is_empty() {
        return Err(ModelError::Declaration("the model declares no variables".into()));
    }
    let variables: HashMap<String, usize> = updates.iter().enumerate().map(|(i, (n, _))| (n.clone(), i)).collect();
    let functions: HashMap<String, usize> = decls.iter().enumerate().map(|(k, d)| (d.name.clone(), k)).collect();
    if let Some(clash) = decls.iter().find(|d| variables.contains_key(&d.name)) {
        return Err(ModelError::Declaration(format!("`{}` is both a variable and a function", clash.name)));
    }
    let inputs: HashMap<String, usize> =
        input_layout(&decls).into_iter().enumerate().map(|(j, (name, _, _))| (name, j)).collect();
    let symbols = Symbols { variables: &variables, functions: &functions, decls: &decls, inputs: &inputs };

    let parse = |pending: &Pending, context| -> Result<Expr, ModelError> {
        let tokens = tokenize(pending.text, pending.line, pending.column)?;
        ExprParser { tokens, pos: 0, line: pending.line, symbols: &symbols, context }.parse()
    };

    let mut parsed_updates = Vec::with_capacity(updates.len());
    for (_, pending) in &updates {
        parsed_updates.push(parse(pending, Context::Update)?);
    }
    let mut colour_constraint: Option<Expr> = None;
    for pending in &constraints {
        let c = parse(pending, Context::Constraint)?;
        colour_constraint = Some(match colour_constraint {
            None => c,
            Some(prev) => Expr::and(prev, c),
        });
    }

    Ok(PartialBooleanNetwork {
        variables: updates.into_iter().map(|(n, _)| n).collect(),
        functions: decls,
        updates: parsed_updates,
        colour_constraint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_application() {
        let net = parse_model("fun f1/1\nx1, x1 & f1(x2)\nx2, x2\n").unwrap();
        assert_eq!(net.variables, ["x1", "x2"]);
        assert_eq!(
            net.updates[0],
            Expr::and(Expr::Var(0), Expr::Apply { func: 0, args: vec![Expr::Var(1)] })
        );
    }

    #[test]
    fn input_free_network() {
        let net = parse_model("b1, b1").unwrap();
        assert!(net.functions.is_empty());
        assert_eq!(net.updates, vec![Expr::Var(0)]);
    }

    #[test]
    fn undeclared_function() {
        let err = parse_model("b1, f9(b1)").unwrap_err();
        assert_eq!(err, ModelError::Undeclared { line: 1, column: 5, name: "f9".into() });
    }

    #[test]
    fn undeclared_variable() {
        let err = parse_model("a, a & b").unwrap_err();
        assert!(matches!(err, ModelError::Undeclared { name, column: 8, .. } if name == "b"));
    }

    #[test]
    fn arity_mismatch() {
        let err = parse_model("fun f/2\na, f(a)").unwrap_err();
        assert!(matches!(err, ModelError::Arity { expected: 2, found: 1, line: 2, .. }));
        let err = parse_model("fun f/1\na, a | f").unwrap_err();
        assert!(matches!(err, ModelError::Arity { expected: 1, found: 0, .. }));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_model("# header\na, a &\n").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { line: 2, column: 7, .. }), "{err:?}");
        let err = parse_model("a, a $ a").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { line: 1, column: 6, .. }), "{err:?}");
        let err = parse_model("a, (a").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { .. }));
    }

    #[test]
    fn precedence_and_associativity() {
        let net = parse_model("a, !a & a | a => a => a <=> a").unwrap();
        let v = || Expr::Var(0);
        let expected = Expr::iff(
            Expr::imp(Expr::or(Expr::and(Expr::not(v()), v()), v()), Expr::imp(v(), v())),
            v(),
        );
        assert_eq!(net.updates[0], expected);
    }

    #[test]
    fn constraints_resolve_inputs() {
        let text = "targets, factors\nfun f1/1\nfun g/0\nconstraint f1_0 => f1_1\nconstraint !g\nx, f1(x) | g\n";
        let net = parse_model(text).unwrap();
        let expected = Expr::and(Expr::imp(Expr::Input(1), Expr::Input(0)), Expr::not(Expr::Input(2)));
        assert_eq!(net.colour_constraint, Some(expected));
        assert_eq!(net.updates[0], Expr::or(
            Expr::Apply { func: 0, args: vec![Expr::Var(0)] },
            Expr::Apply { func: 1, args: vec![] },
        ));
    }

    #[test]
    fn constraint_may_name_state_variable() {
        // Rejected later, when the colour set is built.
        let net = parse_model("fun f/0\nconstraint x & f\nx, f").unwrap();
        assert!(net.colour_constraint.unwrap().mentions_var());
    }

    #[test]
    fn declaration_errors() {
        assert!(matches!(parse_model(""), Err(ModelError::Declaration(_))));
        assert!(matches!(parse_model("a, a\na, !a"), Err(ModelError::Declaration(_))));
        assert!(matches!(parse_model("fun a/0\na, a"), Err(ModelError::Declaration(_))));
        assert!(matches!(parse_model("fun f/0\nfun f/1\na, a"), Err(ModelError::Declaration(_))));
    }

    #[test]
    fn round_trips_through_text() {
        let text = "fun f1/1\nfun f2/2\nfun f3/0\nconstraint f1_0 => f1_1\n\
                    x1, x1 & f1(x2)\nx2, !x1 | f2(x1, x3)\nx3, (f3 <=> x3) & f2(!x1, x2)\n";
        let net = parse_model(text).unwrap();
        assert_eq!(parse_model(&net.to_bnet()).unwrap(), net);
    }
}
