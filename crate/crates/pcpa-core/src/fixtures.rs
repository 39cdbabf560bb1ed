//! Ready-made example systems and machines.
//!
//! Each constructor documents the language its machine is built to accept;
//! the predicates at the bottom state those languages independently of any
//! engine, so tests can cross-check search verdicts against them. The
//! degree-2 and degree-4 systems are designed so that every constraint a
//! component contributes is carried by its *stack content at query time*
//! (suppliers keep their bottom symbol and only ever push on reads, post.
//! reset continuations exist from exactly the states a reset can hit), the
//! shape preserved by the known-communication and multi-head
//! constructions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::multihead::{MhTransition, MhpdaMachine};
use crate::symbol::{state, sym, Symbol};
use crate::system::{Mode, PcpaSystem, PdaComponent, Transition};

fn component(
    states: &[&str],
    initial: &str,
    initial_stack: &str,
    finals: &[&str],
    transitions: Vec<Transition>,
) -> PdaComponent {
    PdaComponent {
        states: states.iter().map(|s| state(s)).collect(),
        initial: state(initial),
        initial_stack: sym(initial_stack),
        finals: finals.iter().map(|s| state(s)).collect(),
        transitions,
        kc_states: None,
    }
}

fn t(from: &str, read: Option<&str>, pop: &str, to: &str, push: &[&str]) -> Transition {
    Transition::new(
        state(from),
        read.map(sym),
        sym(pop),
        state(to),
        push.iter().map(|s| sym(s)).collect(),
    )
}

/// Degree-1 system accepting `a^n b^n` for `n ≥ 1`.
///
/// The final state is guarded by the bottom symbol resurfacing, so words
/// with unread input or unmatched letters are rejected even though
/// acceptance ignores stack contents.
pub fn m_anbn() -> PcpaSystem {
    PcpaSystem {
        mode: Mode::Returning,
        input_alphabet: vec![sym("a"), sym("b")],
        stack_alphabet: vec![sym("Z"), sym("A")],
        components: vec![component(
            &["q0", "q1", "q2"],
            "q0",
            "Z",
            &["q2"],
            vec![
                t("q0", Some("a"), "Z", "q0", &["A", "Z"]),
                t("q0", Some("a"), "A", "q0", &["A", "A"]),
                t("q0", Some("b"), "A", "q1", &[]),
                t("q1", Some("b"), "A", "q1", &[]),
                t("q1", None, "Z", "q2", &["Z"]),
            ],
        )],
        query_map: BTreeMap::new(),
    }
}

/// Degree-2 centralized returning system accepting `a^n b^n c^n` for
/// `n ≥ 1`.
///
/// The master matches `a`s against `b`s on its own stack, then queries the
/// second component, which has counted the `a`s it read itself; the
/// received counters are matched against the `c`s. The second component
/// keeps its bottom symbol untouched and accepts liberally — every
/// constraint it contributes travels through the queried stack.
pub fn sys_abc() -> PcpaSystem {
    PcpaSystem {
        mode: Mode::Returning,
        input_alphabet: vec![sym("a"), sym("b"), sym("c")],
        stack_alphabet: vec![sym("Z1"), sym("Z2"), sym("A"), sym("B"), sym("K2")],
        components: vec![
            component(
                &["p0", "p1", "p2", "p3"],
                "p0",
                "Z1",
                &["p3"],
                vec![
                    t("p0", Some("a"), "Z1", "p0", &["B", "Z1"]),
                    t("p0", Some("a"), "B", "p0", &["B", "B"]),
                    t("p0", Some("b"), "B", "p1", &[]),
                    t("p1", Some("b"), "B", "p1", &[]),
                    t("p1", None, "Z1", "p2", &["K2", "Z1"]),
                    t("p2", Some("c"), "A", "p2", &[]),
                    t("p2", None, "Z2", "p2", &[]),
                    t("p2", None, "Z1", "p3", &["Z1"]),
                ],
            ),
            component(
                &["t0", "s0", "s1", "s2"],
                "t0",
                "Z2",
                &["s2"],
                vec![
                    t("t0", Some("a"), "Z2", "s0", &["A", "Z2"]),
                    t("s0", Some("a"), "A", "s0", &["A", "A"]),
                    t("s0", Some("b"), "A", "s1", &["A"]),
                    t("s1", Some("b"), "A", "s1", &["A"]),
                    t("s1", Some("c"), "A", "s2", &["A"]),
                    t("s1", Some("b"), "Z2", "s1", &["Z2"]),
                    t("s1", Some("c"), "Z2", "s2", &["Z2"]),
                    t("s2", Some("c"), "Z2", "s2", &["Z2"]),
                    t("s2", None, "Z2", "s2", &["Z2"]),
                ],
            ),
        ],
        query_map: [(sym("K2"), 1usize)].into_iter().collect(),
    }
}

/// Degree-4 simple returning system accepting `a^n b^n c^n` for `n ≥ 1`.
///
/// Two independent querier/supplier pairs share the input: components 1
/// and 2 enforce `#a = #b` (the supplier counts `a`s, the master matches
/// them against `b`s), components 3 and 4 enforce `#b = #c` the same way.
/// The supplier sets are disjoint and no querier is queried, so the
/// system decomposes into two centralized parts whose languages intersect
/// to the system's own.
pub fn sys_simple4() -> PcpaSystem {
    PcpaSystem {
        mode: Mode::Returning,
        input_alphabet: vec![sym("a"), sym("b"), sym("c")],
        stack_alphabet: vec![
            sym("Z1"),
            sym("Z2"),
            sym("Z3"),
            sym("Z4"),
            sym("A"),
            sym("B"),
            sym("K2"),
            sym("K4"),
        ],
        components: vec![
            component(
                &["m0", "ma", "m1", "m2", "m3"],
                "m0",
                "Z1",
                &["m3"],
                vec![
                    t("m0", Some("a"), "Z1", "ma", &["Z1"]),
                    t("ma", Some("a"), "Z1", "ma", &["Z1"]),
                    t("ma", None, "Z1", "m1", &["K2", "Z1"]),
                    t("m1", Some("b"), "A", "m1", &[]),
                    t("m1", None, "Z2", "m2", &[]),
                    t("m2", Some("c"), "Z1", "m2", &["Z1"]),
                    t("m2", None, "Z1", "m3", &["Z1"]),
                    t("m3", None, "Z1", "m3", &["Z1"]),
                ],
            ),
            component(
                &["u0", "u1", "u2", "u3"],
                "u0",
                "Z2",
                &["u2", "u3"],
                vec![
                    t("u0", Some("a"), "Z2", "u1", &["A", "Z2"]),
                    t("u1", Some("a"), "A", "u1", &["A", "A"]),
                    t("u1", Some("b"), "A", "u2", &["A"]),
                    t("u2", Some("b"), "Z2", "u2", &["Z2"]),
                    t("u2", Some("c"), "Z2", "u3", &["Z2"]),
                    t("u3", Some("c"), "Z2", "u3", &["Z2"]),
                    t("u2", None, "Z2", "u2", &["Z2"]),
                    t("u3", None, "Z2", "u3", &["Z2"]),
                ],
            ),
            component(
                &["w0", "w1", "w2", "w3"],
                "w0",
                "Z3",
                &["w3"],
                vec![
                    t("w0", Some("a"), "Z3", "w0", &["Z3"]),
                    t("w0", Some("b"), "Z3", "w1", &["Z3"]),
                    t("w1", Some("b"), "Z3", "w1", &["Z3"]),
                    t("w1", None, "Z3", "w2", &["K4", "Z3"]),
                    t("w2", Some("c"), "B", "w2", &[]),
                    t("w2", None, "Z4", "w3", &[]),
                    t("w3", None, "Z3", "w3", &["Z3"]),
                ],
            ),
            component(
                &["v0", "v1", "v2"],
                "v0",
                "Z4",
                &["v2"],
                vec![
                    t("v0", Some("a"), "Z4", "v0", &["Z4"]),
                    t("v0", Some("b"), "Z4", "v1", &["B", "Z4"]),
                    t("v1", Some("b"), "B", "v1", &["B", "B"]),
                    t("v1", Some("c"), "B", "v2", &["B"]),
                    t("v2", Some("c"), "B", "v2", &["B"]),
                    t("v2", Some("c"), "Z4", "v2", &["Z4"]),
                    t("v2", None, "Z4", "v2", &["Z4"]),
                ],
            ),
        ],
        query_map: [(sym("K2"), 1usize), (sym("K4"), 3)].into_iter().collect(),
    }
}

/// Degree-5 returning system violating *both* simplicity conditions:
/// components 1 and 3 query the same component 2, and component 4 queries
/// component 1, which is itself a querier. Component 5 participates in no
/// query at all.
pub fn nonsimple5() -> PcpaSystem {
    let idle = |st: &str, zi: &str| t(st, None, zi, st, &[zi]);
    let push_query = |st: &str, zi: &str, k: &str| {
        Transition::new(state(st), None, sym(zi), state(st), vec![sym(k), sym(zi)])
    };
    PcpaSystem {
        mode: Mode::Returning,
        input_alphabet: vec![sym("a")],
        stack_alphabet: vec![
            sym("Z1"),
            sym("Z2"),
            sym("Z3"),
            sym("Z4"),
            sym("Z5"),
            sym("K1"),
            sym("K2"),
        ],
        components: vec![
            component(
                &["x0"],
                "x0",
                "Z1",
                &["x0"],
                vec![push_query("x0", "Z1", "K2"), idle("x0", "Z1")],
            ),
            component(&["y0"], "y0", "Z2", &["y0"], vec![idle("y0", "Z2")]),
            component(
                &["z0"],
                "z0",
                "Z3",
                &["z0"],
                vec![push_query("z0", "Z3", "K2"), idle("z0", "Z3")],
            ),
            component(
                &["w0"],
                "w0",
                "Z4",
                &["w0"],
                vec![push_query("w0", "Z4", "K1"), idle("w0", "Z4")],
            ),
            component(&["o0"], "o0", "Z5", &["o0"], vec![idle("o0", "Z5")]),
        ],
        query_map: [(sym("K1"), 0usize), (sym("K2"), 1)].into_iter().collect(),
    }
}

/// One-head machine accepting `a^n b^n` for `n ≥ 1` — the same language as
/// [`m_anbn`], for cross-formalism comparisons.
pub fn mh_anbn() -> MhpdaMachine {
    let mh = |from: &str, read: &str, pop: &str, to: &str, advance: bool, push: &[&str]| {
        MhTransition {
            from: state(from),
            reads: vec![Some(sym(read))],
            pop: sym(pop),
            to: state(to),
            advances: vec![advance],
            push: push.iter().map(|s| sym(s)).collect(),
        }
    };
    MhpdaMachine {
        heads: 1,
        input_alphabet: vec![sym("a"), sym("b")],
        stack_alphabet: vec![sym("Z"), sym("A")],
        endmarker: sym("$"),
        states: [state("h0"), state("h1"), state("h2")].into_iter().collect(),
        initial: state("h0"),
        initial_stack: sym("Z"),
        finals: [state("h2")].into_iter().collect(),
        transitions: vec![
            mh("h0", "a", "Z", "h0", true, &["A", "Z"]),
            mh("h0", "a", "A", "h0", true, &["A", "A"]),
            mh("h0", "b", "A", "h1", true, &[]),
            mh("h1", "b", "A", "h1", true, &[]),
            mh("h1", "$", "Z", "h2", false, &["Z"]),
        ],
    }
}

/// True exactly for words of the form `a^n b^n` with `n ≥ 1`.
pub fn is_anbn(word: &[Symbol]) -> bool {
    let a = word.iter().take_while(|s| s.as_str() == "a").count();
    let b = word.len() - a;
    a >= 1 && a == b && word[a..].iter().all(|s| s.as_str() == "b")
}

/// True exactly for words of the form `a^n b^n c^n` with `n ≥ 1`.
pub fn is_anbncn(word: &[Symbol]) -> bool {
    let a = word.iter().take_while(|s| s.as_str() == "a").count();
    let b = word[a..].iter().take_while(|s| s.as_str() == "b").count();
    let c = word.len() - a - b;
    a >= 1 && a == b && b == c && word[a + b..].iter().all(|s| s.as_str() == "c")
}
