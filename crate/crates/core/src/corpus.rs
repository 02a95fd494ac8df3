//! Seeded generator of small random partially specified networks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{input_layout, Expr, FunctionDecl, PartialBooleanNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusParams {
    pub max_variables: usize,
    /// Bound on the number of expanded inputs.
    pub max_inputs: usize,
    pub max_arity: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_variables: 8, max_inputs: 6, max_arity: 2 }
    }
}

/// Network number `index` of the corpus with seed `seed`.
pub fn random_network(seed: u64, index: u64, params: &CorpusParams) -> PartialBooleanNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    Generator { rng: &mut rng, params }.network()
}

/// The first `count` networks of the corpus with seed `seed`.
pub fn corpus(seed: u64, count: usize, params: &CorpusParams) -> Vec<PartialBooleanNetwork> {
    (0..count as u64).map(|i| random_network(seed, i, params)).collect()
}

struct Generator<'a> {
    rng: &'a mut ChaCha8Rng,
    params: &'a CorpusParams,
}

impl Generator<'_> {
    fn network(&mut self) -> PartialBooleanNetwork {
        let n = self.rng.random_range(1..=self.params.max_variables.max(1));
        let variables: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();

        let mut functions = Vec::new();
        let mut budget = self.rng.random_range(0..=self.params.max_inputs);
        while budget > 0 {
            let widest = (usize::BITS - 1 - budget.leading_zeros()) as usize;
            let arity = self.rng.random_range(0..=widest.min(self.params.max_arity));
            budget -= 1 << arity;
            functions.push(FunctionDecl { name: format!("f{}", functions.len()), arity });
        }

        let mut updates: Vec<Expr> = (0..n).map(|_| self.expr(n, &functions, 3)).collect();
        // Every declared function appears somewhere.
        for (func, decl) in functions.iter().enumerate() {
            if updates.iter().any(|u| applies(u, func)) {
                continue;
            }
            let args = (0..decl.arity).map(|_| self.literal(n)).collect();
            let app = Expr::Apply { func, args };
            let i = self.rng.random_range(0..n);
            let old = std::mem::replace(&mut updates[i], Expr::Const(false));
            updates[i] = if self.rng.random_bool(0.5) { Expr::and(old, app) } else { Expr::or(old, app) };
        }

        let m = functions.iter().map(FunctionDecl::rows).sum::<usize>();
        let colour_constraint = (m > 0 && self.rng.random_bool(0.2)).then(|| self.constraint(&functions));
        PartialBooleanNetwork { variables, functions, updates, colour_constraint }
    }

    fn literal(&mut self, n: usize) -> Expr {
        let v = Expr::Var(self.rng.random_range(0..n));
        if self.rng.random_bool(0.4) {
            Expr::not(v)
        } else {
            v
        }
    }

    fn expr(&mut self, n: usize, functions: &[FunctionDecl], depth: usize) -> Expr {
        if depth == 0 || self.rng.random_bool(0.25) {
            if !functions.is_empty() && self.rng.random_bool(0.3) {
                let func = self.rng.random_range(0..functions.len());
                let args = (0..functions[func].arity).map(|_| self.literal(n)).collect();
                return Expr::Apply { func, args };
            }
            if self.rng.random_bool(0.05) {
                return Expr::Const(self.rng.random_bool(0.5));
            }
            return self.literal(n);
        }
        let a = self.expr(n, functions, depth - 1);
        match self.rng.random_range(0..6) {
            0 => Expr::not(a),
            1 | 2 => Expr::and(a, self.expr(n, functions, depth - 1)),
            3 | 4 => Expr::or(a, self.expr(n, functions, depth - 1)),
            _ => Expr::iff(a, self.expr(n, functions, depth - 1)),
        }
    }

    /// Monotonicity of a unary function, or a random clause over inputs.
    fn constraint(&mut self, functions: &[FunctionDecl]) -> Expr {
        let layout = input_layout(functions);
        let unary: Vec<usize> = (0..functions.len()).filter(|&f| functions[f].arity == 1).collect();
        if !unary.is_empty() && self.rng.random_bool(0.5) {
            let f = unary[self.rng.random_range(0..unary.len())];
            let row = |value: bool| layout.iter().position(|(_, func, r)| *func == f && r[0] == value).unwrap();
            return Expr::imp(Expr::Input(row(false)), Expr::Input(row(true)));
        }
        let mut clause = Expr::Const(false);
        for _ in 0..self.rng.random_range(1..=3) {
            let j = Expr::Input(self.rng.random_range(0..layout.len()));
            let lit = if self.rng.random_bool(0.5) { Expr::not(j) } else { j };
            clause = match clause {
                Expr::Const(false) => lit,
                c => Expr::or(c, lit),
            };
        }
        clause
    }
}

fn applies(e: &Expr, func: usize) -> bool {
    match e {
        Expr::Apply { func: f, args } => *f == func || args.iter().any(|a| applies(a, func)),
        Expr::Const(_) | Expr::Var(_) | Expr::Input(_) => false,
        Expr::Not(a) => applies(a, func),
        Expr::And(a, b) | Expr::Or(a, b) | Expr::Imp(a, b) | Expr::Iff(a, b) => applies(a, func) || applies(b, func),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{expand, parse_model};

    #[test]
    fn corpus_respects_bounds() {
        let params = CorpusParams::default();
        for net in corpus(7, 300, &params) {
            assert!((1..=8).contains(&net.variables.len()));
            assert!(net.num_inputs() <= 6);
            for (f, _) in net.functions.iter().enumerate() {
                assert!(net.updates.iter().any(|u| applies(u, f)));
            }
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let params = CorpusParams::default();
        assert_eq!(corpus(3, 20, &params), corpus(3, 20, &params));
        assert_ne!(corpus(3, 20, &params), corpus(4, 20, &params));
        assert_eq!(random_network(3, 5, &params), corpus(3, 6, &params)[5]);
    }

    #[test]
    fn generated_text_parses_back() {
        let params = CorpusParams::default();
        for net in corpus(11, 200, &params) {
            let text = net.to_bnet();
            let parsed = parse_model(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(expand(&parsed), expand(&net), "{text}");
        }
    }
}
