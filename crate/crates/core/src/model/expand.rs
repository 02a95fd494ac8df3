use super::{input_layout, input_index, ExpandedNetwork, Expr, FunctionDecl, PartialBooleanNetwork};

/// Replaces every application by its truth-table expansion over inputs.
///
/// `f(a1, ..., ak)` becomes `(a1 => f_1(a2..)) & (!a1 => f_0(a2..))`,
/// recursively, until only inputs remain. Arguments are expanded first.
pub fn expand(net: &PartialBooleanNetwork) -> ExpandedNetwork {
    let layout = input_layout(&net.functions);
    ExpandedNetwork {
        variables: net.variables.clone(),
        inputs: layout.iter().map(|(name, _, _)| name.clone()).collect(),
        input_rows: layout.into_iter().map(|(_, func, row)| (func, row)).collect(),
        updates: net.updates.iter().map(|e| expand_expr(e, &net.functions)).collect(),
        valid_colour_constraint: net.colour_constraint.clone().unwrap_or(Expr::Const(true)),
    }
}

fn expand_expr(e: &Expr, functions: &[FunctionDecl]) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var(_) | Expr::Input(_) => e.clone(),
        Expr::Apply { func, args } => {
            let args: Vec<Expr> = args.iter().map(|a| expand_expr(a, functions)).collect();
            let mut row = Vec::with_capacity(args.len());
            table(*func, &args, &mut row, functions)
        }
        Expr::Not(a) => Expr::not(expand_expr(a, functions)),
        Expr::And(a, b) => Expr::and(expand_expr(a, functions), expand_expr(b, functions)),
        Expr::Or(a, b) => Expr::or(expand_expr(a, functions), expand_expr(b, functions)),
        Expr::Imp(a, b) => Expr::imp(expand_expr(a, functions), expand_expr(b, functions)),
        Expr::Iff(a, b) => Expr::iff(expand_expr(a, functions), expand_expr(b, functions)),
    }
}

fn table(func: usize, args: &[Expr], row: &mut Vec<bool>, functions: &[FunctionDecl]) -> Expr {
    let Some((first, rest)) = args.split_first() else {
        return Expr::Input(input_index(functions, func, row));
    };
    row.push(true);
    let positive = table(func, rest, row, functions);
    row.pop();
    row.push(false);
    let negative = table(func, rest, row, functions);
    row.pop();
    Expr::and(
        Expr::imp(first.clone(), positive),
        Expr::imp(Expr::not(first.clone()), negative),
    )
}
