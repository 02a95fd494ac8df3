use crate::engine::{Engine, SymSet, VarSet};

use super::{ExpandedNetwork, Expr, ModelError};

fn check_universe(net: &ExpandedNetwork, engine: &Engine) -> Result<(), ModelError> {
    let u = engine.universe();
    if u.state_names() != net.variables.as_slice() || u.input_names() != net.inputs.as_slice() {
        return Err(ModelError::Contract("engine universe was not built from this network".into()));
    }
    Ok(())
}

/// Builds `e` as a set over `support`. Each call is one symbolic step.
fn build(e: &Expr, engine: &Engine, support: &VarSet) -> SymSet {
    let u = engine.universe();
    let rec = |e: &Expr| build(e, engine, support);
    let set = engine.counted(|| match e {
        Expr::Const(true) => engine.mk_full(support.clone()),
        Expr::Const(false) => engine.mk_empty(support.clone()),
        Expr::Var(i) => engine.mk_literal(u.state_var(*i), true),
        Expr::Input(j) => engine.mk_literal(u.input_var(*j), true),
        Expr::Apply { .. } => panic!("unexpanded application reached the encoder"),
        Expr::Not(a) => rec(a).complement(),
        Expr::And(a, b) => rec(a).intersect(&rec(b)),
        Expr::Or(a, b) => rec(a).union(&rec(b)),
        Expr::Imp(a, b) => rec(a).complement().union(&rec(b)),
        Expr::Iff(a, b) => {
            let (a, b) = (rec(a), rec(b));
            a.intersect(&b).union(&a.complement().intersect(&b.complement()))
        }
    });
    set.extend_support(support)
}

/// Update functions `b_i` as sets of `(s, c)` assignments.
///
/// Every set has the full state-and-input support.
pub fn encode(net: &ExpandedNetwork, engine: &Engine) -> Result<Vec<SymSet>, ModelError> {
    check_universe(net, engine)?;
    let support = engine.universe().vertex_colour_set();
    Ok(net.updates.iter().map(|b| build(b, engine, &support)).collect())
}

/// The valid colours: input valuations satisfying the colour constraint.
pub fn valid_colours(net: &ExpandedNetwork, engine: &Engine) -> Result<SymSet, ModelError> {
    check_universe(net, engine)?;
    if net.valid_colour_constraint.mentions_var() {
        return Err(ModelError::Contract("the colour constraint mentions a state variable".into()));
    }
    if net.valid_colour_constraint.has_application() {
        return Err(ModelError::Contract("the colour constraint applies an uninterpreted function".into()));
    }
    let support = engine.universe().input_set();
    Ok(build(&net.valid_colour_constraint, engine, &support))
}
