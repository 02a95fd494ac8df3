use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::engine::VariableUniverse;
use crate::model::{expand, parse_model};

const FIG2: &str = include_str!("../../tests/data/fig2.edges");

fn fig2() -> ColouredGraph {
    ColouredGraph::from_edge_list(&parse_edges(FIG2).unwrap()).unwrap()
}

fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
    let mut v: Vec<_> = list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    v.sort();
    v
}

fn set_of(g: &ColouredGraph, list: &[(&str, &str)]) -> SymSet {
    list.iter().fold(g.empty(), |acc, (v, c)| acc.union(&g.coloured_vertex(v, c).unwrap()))
}

fn decoded(g: &ColouredGraph, s: &SymSet) -> Vec<(String, String)> {
    let mut v = g.decode(s).unwrap();
    v.sort();
    v
}

fn network(text: &str) -> ColouredGraph {
    let net = expand(&parse_model(text).unwrap());
    let engine = Engine::new(Arc::new(net.universe().unwrap()));
    ColouredGraph::from_network(&net, &engine).unwrap()
}

/// Coloured vertices of an update-based graph as `(state bits, input bits)`.
fn explicit(g: &ColouredGraph, s: &SymSet) -> BTreeSet<(u32, u32)> {
    let u = g.engine().universe();
    let full = s.extend_support(&u.vertex_colour_set());
    let vars = full.support().to_vec();
    full.witnesses()
        .map(|values| {
            let (mut x, mut c) = (0u32, 0u32);
            for (v, b) in vars.iter().zip(values) {
                if let Some(i) = u.state_index(*v) {
                    x |= (b as u32) << i;
                } else if let Some(j) = u.input_index(*v) {
                    c |= (b as u32) << j;
                }
            }
            (x, c)
        })
        .collect()
}

fn from_explicit(g: &ColouredGraph, items: &BTreeSet<(u32, u32)>) -> SymSet {
    let u = g.engine().universe();
    items.iter().fold(g.empty(), |acc, &(x, c)| {
        let mut cube: Vec<(VarId, bool)> = (0..u.num_states()).map(|i| (u.state_var(i), x >> i & 1 == 1)).collect();
        cube.extend((0..u.num_inputs()).map(|j| (u.input_var(j), c >> j & 1 == 1)));
        acc.union(&g.engine().mk_cube(&cube))
    })
}

#[test]
fn fig2_post_and_pre() {
    let g = fig2();
    let post = g.post(&set_of(&g, &[("b", "blue")]));
    assert_eq!(decoded(&g, &post), pairs(&[("c", "blue"), ("e", "blue"), ("f", "blue")]));
    let pre = g.pre(&set_of(&g, &[("b", "red")]));
    assert_eq!(decoded(&g, &pre), pairs(&[("a", "red"), ("d", "red"), ("e", "red"), ("f", "red")]));
    assert!(g.post(&g.empty()).is_empty());
}

#[test]
fn images_cost_one_step() {
    let g = fig2();
    let x = g.vertex_colour_space();
    let before = g.engine().steps();
    g.post(&x);
    g.pre(&x);
    g.join(&x);
    g.colours(&x);
    assert_eq!(g.engine().steps() - before, 4);
}

#[test]
fn edgeless_and_self_loop() {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let g = ColouredGraph::build_from_edges(&s(&["u", "v"]), &s(&["red"]), &[]).unwrap();
    assert!(g.post(&g.vertex_colour_space()).is_empty());
    let loop_edge = vec![("v".to_string(), "red".to_string(), "v".to_string())];
    let g = ColouredGraph::build_from_edges(&s(&["u", "v"]), &s(&["red"]), &loop_edge).unwrap();
    let x = set_of(&g, &[("v", "red")]);
    assert!(g.post(&x).same_members(&x));
}

#[test]
fn colours_projection() {
    let g = fig2();
    let x = set_of(&g, &[("a", "red"), ("b", "blue")]);
    assert!(g.colours(&x).same_members(g.valid_colours()));
    assert!(g.colours(&g.empty()).is_empty());
    assert!(g.colours(&g.vertex_colour_space()).same_members(g.valid_colours()));
    let only_red = g.colours(&set_of(&g, &[("a", "red"), ("c", "red")]));
    assert_eq!(only_red.cardinality(), 1u32.into());
}

#[test]
fn var_images_on_small_networks() {
    let neg = network("s1, !s1");
    let u = neg.engine().universe().clone();
    let off = neg.engine().mk_literal(u.state_var(0), false).extend_support(&u.vertex_colour_set());
    let on = neg.engine().mk_literal(u.state_var(0), true).extend_support(&u.vertex_colour_set());
    assert!(neg.var_post(0, &off).unwrap().same_members(&on));
    assert!(neg.var_pre(0, &on).unwrap().same_members(&off));

    let id = network("s1, s1");
    assert!(id.var_post(0, &id.vertex_colour_space()).unwrap().is_empty());
}

#[test]
fn toggle_network_matches_enumeration() {
    // s1 follows s2, s2 negates s1.
    let g = network("s1, s2\ns2, !s1");
    let succ = |x: u32| -> Vec<u32> {
        let (s1, s2) = (x & 1 == 1, x >> 1 & 1 == 1);
        let mut out = Vec::new();
        if s2 != s1 {
            out.push(x ^ 1);
        }
        if !s1 != s2 {
            out.push(x ^ 2);
        }
        out
    };
    for x in 0u32..4 {
        let single = from_explicit(&g, &BTreeSet::from([(x, 0)]));
        let got = explicit(&g, &g.post(&single));
        let want: BTreeSet<(u32, u32)> = succ(x).into_iter().map(|y| (y, 0)).collect();
        assert_eq!(got, want, "from state {x}");
        let preds: BTreeSet<(u32, u32)> = (0u32..4).filter(|y| succ(*y).contains(&x)).map(|y| (y, 0)).collect();
        assert_eq!(explicit(&g, &g.pre(&single)), preds);
    }
}

#[test]
fn var_post_needs_updates() {
    let g = fig2();
    assert!(matches!(g.var_post(0, &g.vertex_colour_space()), Err(GraphError::Engine(_))));
    assert_eq!(g.transitions(), 1);
}

#[test]
fn mono_images() {
    let g = fig2();
    let u = g.engine().universe().clone();
    let blue = g.colours(&g.coloured_vertex("b", "blue").unwrap());
    let b = g.coloured_vertex("b", "blue").unwrap().exists_set(&u.input_set());
    let image = g.mono_post(&blue, &b).unwrap();
    let expected = ["c", "e", "f"]
        .iter()
        .fold(g.engine().mk_empty(u.state_set()), |acc, v| {
            acc.union(&g.coloured_vertex(v, "blue").unwrap().exists_set(&u.input_set()))
        });
    assert!(image.same_members(&expected));
    assert!(g.mono_post(g.valid_colours(), &b).is_err());
}

#[test]
fn join_examples() {
    let g = fig2();
    let a = set_of(&g, &[("a", "red"), ("b", "red")]);
    assert_eq!(g.join(&a).cardinality(), 4u32.into());
    let mixed = set_of(&g, &[("a", "red"), ("b", "blue")]);
    let j = g.join(&mixed);
    assert!(j.same_members(&g.diagonal(&mixed)));
    assert!(g.join(&g.empty()).is_empty());
}

#[test]
fn join_is_symmetric() {
    let g = fig2();
    let a = set_of(&g, &[("a", "red"), ("c", "red"), ("b", "blue"), ("f", "blue")]);
    let j = g.join(&a);
    let u = g.engine().universe();
    let swap: Vec<(VarId, VarId)> = (0..u.num_states())
        .flat_map(|i| [(u.state_var(i), u.primed_var(i)), (u.primed_var(i), u.state_var(i))])
        .collect();
    assert!(j.rename(&swap).unwrap().same_members(&j));
}

fn per_colour_count(g: &ColouredGraph, p: &SymSet) -> BTreeMap<u32, usize> {
    let mut counts = BTreeMap::new();
    for (_, c) in explicit(g, p) {
        *counts.entry(c).or_insert(0) += 1;
    }
    counts
}

/// The explicit loop: pick any pair, add its vertex for all its colours,
/// drop those colours.
fn naive_pivots(g: &ColouredGraph, v: &SymSet) -> SymSet {
    let u = g.engine().universe();
    let mut rest = v.clone();
    let mut result = g.empty();
    while let Some(w) = rest.first_witness() {
        let vertex: Vec<(VarId, bool)> = w.into_iter().filter(|(var, _)| u.state_index(*var).is_some()).collect();
        let cube = g.engine().mk_cube(&vertex);
        let picked = rest.intersect(&cube);
        result = result.union(&picked);
        rest = rest.minus(&g.colours(&picked));
    }
    result
}

#[test]
fn fig2_pivots_one_per_colour() {
    let g = fig2();
    let v = g.vertex_colour_space();
    let p = g.pivots(&v);
    let counts = per_colour_count(&g, &p);
    assert_eq!(counts.len(), 2);
    assert!(counts.values().all(|c| *c == 1));
    let single = set_of(&g, &[("e", "red")]);
    assert!(g.pivots(&single).same_members(&single));
    assert!(g.pivots(&g.empty()).is_empty());
}

#[test]
fn pivots_on_random_sets() {
    let g = network("fun f/1\nfun h/0\na, f(b) | h\nb, a & c\nc, !c\nd, a <=> d");
    let n = g.num_states();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let items: BTreeSet<(u32, u32)> =
            (0..rng.random_range(0..40)).map(|_| (rng.random_range(0..16), rng.random_range(0..8))).collect();
        let v = from_explicit(&g, &items);
        let before = g.engine().steps();
        let p = g.pivots(&v);
        assert!(g.engine().steps() - before <= 3 * n as u64 + 2);
        assert!(p.is_subset(&v));
        assert!(g.colours(&p).same_members(&g.colours(&v)));
        assert!(per_colour_count(&g, &p).values().all(|c| *c == 1));
        let naive = naive_pivots(&g, &v);
        assert!(g.colours(&naive).same_members(&g.colours(&p)));
        assert!(per_colour_count(&g, &naive).values().all(|c| *c == 1));
    }
}

fn trim_fixpoint(g: &ColouredGraph, v: &SymSet) -> SymSet {
    let mut current = v.clone();
    loop {
        let next = g.trim_step(&g.trim_step(&current, TrimDirection::NoPredecessor), TrimDirection::NoSuccessor);
        if next.same_members(&current) {
            return current;
        }
        current = next;
    }
}

#[test]
fn trimming_chain_and_loop() {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let t = |a: &str, b: &str| (a.to_string(), "k".to_string(), b.to_string());
    let chain = ColouredGraph::build_from_edges(&s(&["u", "v", "w"]), &s(&["k"]), &[t("u", "v"), t("v", "w")]).unwrap();
    assert!(trim_fixpoint(&chain, &chain.vertex_colour_space()).is_empty());
    let looped = ColouredGraph::build_from_edges(&s(&["u", "v"]), &s(&["k"]), &[t("u", "v"), t("v", "v")]).unwrap();
    let kept = trim_fixpoint(&looped, &looped.vertex_colour_space());
    assert_eq!(decoded(&looped, &kept), pairs(&[("v", "k")]));
}

#[test]
fn fig2_trimming_matches_explicit_fixpoint() {
    let g = fig2();
    let list = parse_edges(FIG2).unwrap();
    let mut alive: BTreeSet<(String, String)> = decoded(&g, &g.vertex_colour_space()).into_iter().collect();
    loop {
        let keep: BTreeSet<(String, String)> = alive
            .iter()
            .filter(|(v, c)| {
                let has_pred = list.triples.iter().any(|(a, k, b)| b == v && k == c && alive.contains(&(a.clone(), c.clone())));
                let has_succ = list.triples.iter().any(|(a, k, b)| a == v && k == c && alive.contains(&(b.clone(), c.clone())));
                has_pred && has_succ
            })
            .cloned()
            .collect();
        if keep == alive {
            break;
        }
        alive = keep;
    }
    let symbolic = trim_fixpoint(&g, &g.vertex_colour_space());
    assert_eq!(decoded(&g, &symbolic), alive.into_iter().collect::<Vec<_>>());
    // Neither (a, blue) nor (c, red) has a predecessor.
    assert!(!decoded(&g, &symbolic).contains(&("a".to_string(), "blue".to_string())));
    assert!(!decoded(&g, &symbolic).contains(&("c".to_string(), "red".to_string())));
}

#[test]
fn portable_graph_round_trip() {
    let g = network("fun f/1\na, f(b)\nb, !a");
    let other = Engine::new(g.engine().universe_arc());
    let h = g.to_portable().load(&other).unwrap();
    let x = g.vertex_colour_space();
    let moved = x.transfer(&other).unwrap();
    assert_eq!(g.post(&x).dump(), h.post(&moved).dump());
    assert_eq!(g.pre(&x).dump(), h.pre(&moved).dump());

    let f = fig2();
    let other = Engine::new(f.engine().universe_arc());
    let h = f.to_portable().load(&other).unwrap();
    let x = f.vertex_colour_space();
    assert_eq!(f.post(&x).dump(), h.post(&x.transfer(&other).unwrap()).dump());
    assert_eq!(h.labels(), f.labels());
}

#[test]
fn relation_graph_over_anonymous_universe() {
    let engine = Engine::new(Arc::new(VariableUniverse::anonymous(1, 0)));
    let u = engine.universe().clone();
    // 0 -> 1 only.
    let e = engine.mk_cube(&[(u.state_var(0), false), (u.primed_var(0), true)]);
    let g = ColouredGraph::from_relation(&engine, e, engine.mk_full(u.state_set()), engine.mk_full(u.input_set()));
    let zero = engine.mk_literal(u.state_var(0), false);
    let one = engine.mk_literal(u.state_var(0), true);
    assert!(g.post(&zero).same_members(&one));
    assert!(g.pre(&one).same_members(&zero));
    assert!(g.pre(&zero).is_empty());
}

fn arb_edges() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize, usize)>)> {
    (1usize..=5, 1usize..=3).prop_flat_map(|(nv, nc)| {
        let triple = (0..nv, 0..nc, 0..nv);
        (Just(nv), Just(nc), proptest::collection::vec(triple, 0..16))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn images_match_enumeration((nv, nc, triples) in arb_edges(), subset in any::<u32>()) {
        let vl: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        let cl: Vec<String> = (0..nc).map(|i| format!("k{i}")).collect();
        let t: Vec<(String, String, String)> =
            triples.iter().map(|(a, c, b)| (vl[*a].clone(), cl[*c].clone(), vl[*b].clone())).collect();
        let g = ColouredGraph::build_from_edges(&vl, &cl, &t).unwrap();
        let all: Vec<(String, String)> =
            vl.iter().flat_map(|v| cl.iter().map(move |c| (v.clone(), c.clone()))).collect();
        let chosen: Vec<(String, String)> =
            all.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).map(|(_, p)| p.clone()).collect();
        let x = chosen.iter().fold(g.empty(), |acc, (v, c)| acc.union(&g.coloured_vertex(v, c).unwrap()));
        let mut want_post: Vec<(String, String)> = t.iter()
            .filter(|(a, c, _)| chosen.contains(&(a.clone(), c.clone())))
            .map(|(_, c, b)| (b.clone(), c.clone())).collect::<BTreeSet<_>>().into_iter().collect();
        let mut want_pre: Vec<(String, String)> = t.iter()
            .filter(|(_, c, b)| chosen.contains(&(b.clone(), c.clone())))
            .map(|(a, c, _)| (a.clone(), c.clone())).collect::<BTreeSet<_>>().into_iter().collect();
        want_post.sort();
        want_pre.sort();
        prop_assert_eq!(decoded(&g, &g.post(&x)), want_post);
        prop_assert_eq!(decoded(&g, &g.pre(&x)), want_pre);

        // Colour by colour, the coloured image is the monochromatic one.
        let u = g.engine().universe().clone();
        for c in &cl {
            let colour = g.colours(&g.coloured_vertex(&vl[0], c).unwrap());
            let restricted = x.intersect(&colour);
            let vertices = restricted.exists_set(&u.input_set());
            let mono = g.mono_post(&colour, &vertices).unwrap();
            let coloured = g.post(&restricted).intersect(&colour).exists_set(&u.input_set());
            prop_assert!(mono.same_members(&coloured));
            let mono = g.mono_pre(&colour, &vertices).unwrap();
            let coloured = g.pre(&restricted).intersect(&colour).exists_set(&u.input_set());
            prop_assert!(mono.same_members(&coloured));
        }
    }
}
