//! Cross-validation of the bounded search against an independent reference
//! decider.
//!
//! The decider below is written directly from the documented step and
//! acceptance rules and deliberately shares no code with the library
//! engine: configurations are plain symbol vectors, transitions are matched
//! by scanning the component tables, and the exploration is a hand-rolled
//! breadth-first loop. Every verdict the library produces on the bundled
//! example systems is checked against it word by word, and the accepted
//! sets are additionally frozen against the documented languages.

use std::collections::{BTreeSet, VecDeque};

use pcpa_core::fixtures::{is_anbn, is_anbncn, m_anbn, mh_anbn, nonsimple5, sys_abc, sys_simple4};
use pcpa_core::harness::enumerate_words;
use pcpa_core::multihead::mh_run_bounded;
use pcpa_core::search::run_bounded;
use pcpa_core::symbol::{sym, StateId, Symbol};
use pcpa_core::system::{Mode, PcpaSystem};
use pcpa_core::{SearchLimits, SearchOutcome};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RefComp {
    state: StateId,
    pos: usize,
    stack: Vec<Symbol>, // top first
}

type RefCfg = Vec<RefComp>;

fn ref_initial(sys: &PcpaSystem) -> RefCfg {
    sys.components
        .iter()
        .map(|c| RefComp {
            state: c.initial.clone(),
            pos: 0,
            stack: vec![c.initial_stack.clone()],
        })
        .collect()
}

fn ref_accepting(sys: &PcpaSystem, word_len: usize, cfg: &RefCfg) -> bool {
    cfg.iter()
        .zip(&sys.components)
        .all(|(rc, comp)| rc.pos == word_len && comp.finals.contains(&rc.state))
}

/// All configurations reachable from `cfg` in one step: the single
/// communication successor while any query symbol is exposed (none if the
/// pending queries deadlock), otherwise the cross product of one applicable
/// transition per component.
fn ref_successors(sys: &PcpaSystem, word: &[Symbol], cfg: &RefCfg) -> Vec<RefCfg> {
    let target_of = |rc: &RefComp| {
        rc.stack
            .first()
            .and_then(|top| sys.query_map.get(top))
            .copied()
    };

    let pending: Vec<(usize, usize)> = cfg
        .iter()
        .enumerate()
        .filter_map(|(i, rc)| target_of(rc).map(|j| (i, j)))
        .collect();
    if !pending.is_empty() {
        let served: Vec<(usize, usize)> = pending
            .iter()
            .copied()
            .filter(|&(_, j)| target_of(&cfg[j]).is_none())
            .collect();
        if served.is_empty() {
            return Vec::new();
        }
        let mut next = cfg.clone();
        for &(i, j) in &served {
            let mut stack = cfg[j].stack.clone();
            stack.extend_from_slice(&cfg[i].stack[1..]);
            next[i].stack = stack;
        }
        if sys.mode == Mode::Returning {
            for &(_, j) in &served {
                next[j].stack = vec![sys.components[j].initial_stack.clone()];
            }
        }
        return vec![next];
    }

    let mut per_component: Vec<Vec<RefComp>> = Vec::new();
    for (idx, rc) in cfg.iter().enumerate() {
        let comp = &sys.components[idx];
        let mut options = Vec::new();
        if let Some(top) = rc.stack.first() {
            for t in &comp.transitions {
                if t.from != rc.state || t.pop != *top {
                    continue;
                }
                let advance = match &t.read {
                    None => false,
                    Some(s) if rc.pos < word.len() && word[rc.pos] == *s => true,
                    Some(_) => continue,
                };
                let mut stack = t.push.clone();
                stack.extend_from_slice(&rc.stack[1..]);
                options.push(RefComp {
                    state: t.to.clone(),
                    pos: rc.pos + usize::from(advance),
                    stack,
                });
            }
        }
        if options.is_empty() {
            return Vec::new();
        }
        per_component.push(options);
    }

    let mut product: Vec<RefCfg> = vec![Vec::new()];
    for options in &per_component {
        let mut grown = Vec::with_capacity(product.len() * options.len());
        for partial in &product {
            for option in options {
                let mut next = partial.clone();
                next.push(option.clone());
                grown.push(next);
            }
        }
        product = grown;
    }
    product
}

/// Breadth-first membership decision with generous bounds. Panics if a
/// bound is ever hit: the example systems are designed so that every word
/// in the tested ranges is fully decidable, and a truncation here would
/// silently weaken the cross-check.
fn ref_decide(sys: &PcpaSystem, word: &[Symbol]) -> SearchOutcome {
    const MAX_DEPTH: u32 = 10_000;
    const MAX_CONFIGS: usize = 200_000;
    let initial = ref_initial(sys);
    let mut seen: BTreeSet<RefCfg> = BTreeSet::new();
    let mut queue: VecDeque<(RefCfg, u32)> = VecDeque::new();
    seen.insert(initial.clone());
    queue.push_back((initial, 0));
    while let Some((cfg, depth)) = queue.pop_front() {
        if ref_accepting(sys, word.len(), &cfg) {
            return SearchOutcome::Accepted;
        }
        for next in ref_successors(sys, word, &cfg) {
            assert!(depth < MAX_DEPTH, "reference decider hit its step bound");
            if seen.contains(&next) {
                continue;
            }
            assert!(
                seen.len() < MAX_CONFIGS,
                "reference decider hit its configuration bound"
            );
            seen.insert(next.clone());
            queue.push_back((next, depth + 1));
        }
    }
    SearchOutcome::Rejected
}

fn word(text: &str) -> Vec<Symbol> {
    text.chars().map(|c| sym(&c.to_string())).collect()
}

fn render(w: &[Symbol]) -> String {
    w.iter().map(|s| s.as_str()).collect()
}

/// Engine verdicts for every word up to `max_len`, asserting word-by-word
/// agreement with the reference decider and full decidability.
fn cross_check(sys: &PcpaSystem, max_len: usize, limits: &SearchLimits) -> Vec<String> {
    let mut accepted = Vec::new();
    for w in enumerate_words(&sys.input_alphabet, max_len) {
        let engine = run_bounded(sys, &w, limits).outcome;
        let reference = ref_decide(sys, &w);
        assert_eq!(
            engine,
            reference,
            "engine and reference disagree on {:?}",
            render(&w)
        );
        assert_ne!(engine, SearchOutcome::Unknown, "undecided: {:?}", render(&w));
        if engine == SearchOutcome::Accepted {
            accepted.push(render(&w));
        }
    }
    accepted
}

#[test]
fn single_component_system_matches_reference_up_to_length_8() {
    let sys = m_anbn();
    let accepted = cross_check(&sys, 8, &SearchLimits::default());
    assert_eq!(accepted, ["ab", "aabb", "aaabbb", "aaaabbbb"]);
    for text in &accepted {
        assert!(is_anbn(&word(text)));
    }
}

#[test]
fn degree_2_system_matches_reference_up_to_length_6() {
    let sys = sys_abc();
    let accepted = cross_check(&sys, 6, &SearchLimits::default());
    assert_eq!(accepted, ["abc", "aabbcc"]);
}

#[test]
fn degree_4_system_matches_reference_up_to_length_6() {
    let sys = sys_simple4();
    let accepted = cross_check(&sys, 6, &SearchLimits::default());
    assert_eq!(accepted, ["abc", "aabbcc"]);
}

#[test]
fn nonsimple_fixture_matches_reference_on_short_words() {
    let sys = nonsimple5();
    let accepted = cross_check(&sys, 2, &SearchLimits::default());
    // Every component idles in a final state, so only the empty word is in
    // the language: nothing ever reads the input letter.
    assert_eq!(accepted, [""]);
}

#[test]
fn degree_2_system_accepts_exactly_the_documented_language_up_to_8() {
    let sys = sys_abc();
    let limits = SearchLimits::default();
    for w in enumerate_words(&sys.input_alphabet, 8) {
        let engine = run_bounded(&sys, &w, &limits).outcome;
        let expected = if is_anbncn(&w) {
            SearchOutcome::Accepted
        } else {
            SearchOutcome::Rejected
        };
        assert_eq!(engine, expected, "word {:?}", render(&w));
    }
}

#[test]
fn degree_4_system_accepts_exactly_the_documented_language_up_to_8() {
    let sys = sys_simple4();
    let limits = SearchLimits::default();
    for w in enumerate_words(&sys.input_alphabet, 8) {
        let engine = run_bounded(&sys, &w, &limits).outcome;
        let expected = if is_anbncn(&w) {
            SearchOutcome::Accepted
        } else {
            SearchOutcome::Rejected
        };
        assert_eq!(engine, expected, "word {:?}", render(&w));
    }
}

#[test]
fn one_head_machine_accepts_exactly_the_documented_language_up_to_8() {
    let machine = mh_anbn();
    let limits = SearchLimits::default();
    for w in enumerate_words(&machine.input_alphabet, 8) {
        let engine = mh_run_bounded(&machine, &w, &limits).outcome;
        let expected = if is_anbn(&w) {
            SearchOutcome::Accepted
        } else {
            SearchOutcome::Rejected
        };
        assert_eq!(engine, expected, "word {:?}", render(&w));
    }
}
