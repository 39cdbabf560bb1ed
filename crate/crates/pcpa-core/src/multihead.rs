//! Multi-head single-stack pushdown machines.
//!
//! An `h`-head machine reads one input word through `h` independent
//! one-way heads while maintaining a single stack. Each head scans either
//! an input symbol or, once it has moved past the end of the word, the
//! reserved *endmarker*. A transition may consult any subset of the heads
//! (requiring specific scanned symbols) and advance any subset of the
//! consulted heads; heads only ever move right. The machine accepts when
//! it reaches a final state with every head on the endmarker.
//!
//! Machines of this kind arise as compilation targets for centralized
//! returning communicating systems (see
//! [`compile_to_multihead`](crate::transform::compile_to_multihead)): one
//! head per original component tracks that component's progress through
//! the shared input.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::search::{bounded_bfs, SearchLimits, SearchOutcome, SearchStats, Verdict};
use crate::step::StepKind;
use crate::symbol::{StateId, Symbol};

/// One transition of a multi-head machine.
///
/// `reads`, `advances` have one entry per head. `reads[i]` is `None` when
/// head `i` is not consulted, or `Some(s)` to require that head `i`
/// currently scans `s` (an input symbol, or the endmarker once the head
/// has passed the end of the word). `advances[i]` moves head `i` one
/// position right; only a consulted head scanning a proper input symbol
/// may advance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MhTransition {
    /// Source state.
    pub from: StateId,
    /// Per-head scan requirements.
    pub reads: Vec<Option<Symbol>>,
    /// Stack symbol popped.
    pub pop: Symbol,
    /// Target state.
    pub to: StateId,
    /// Per-head advancement flags.
    pub advances: Vec<bool>,
    /// Symbols pushed, top of stack first.
    pub push: Vec<Symbol>,
}

/// A multi-head single-stack pushdown machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MhpdaMachine {
    /// Number of heads (at least 1).
    pub heads: usize,
    /// Input alphabet.
    pub input_alphabet: Vec<Symbol>,
    /// Stack alphabet.
    pub stack_alphabet: Vec<Symbol>,
    /// Symbol scanned beyond the end of the input; must not be an input
    /// symbol.
    pub endmarker: Symbol,
    /// All states.
    pub states: BTreeSet<StateId>,
    /// Start state.
    pub initial: StateId,
    /// Initial stack content (a single symbol).
    pub initial_stack: Symbol,
    /// Accepting states.
    pub finals: BTreeSet<StateId>,
    /// Transition list.
    pub transitions: Vec<MhTransition>,
}

/// A configuration of a multi-head machine on some input word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MhConfiguration {
    /// Current state.
    pub state: StateId,
    /// Head positions (0-based offsets into the word; the word length
    /// means "on the endmarker").
    pub positions: Vec<usize>,
    /// Stack content, top first.
    pub stack: Vec<Symbol>,
}

impl fmt::Display for MhConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},", self.state)?;
        for (i, p) in self.positions.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(",")?;
        if self.stack.is_empty() {
            f.write_str("_")?;
        } else {
            for (i, s) in self.stack.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{s}")?;
            }
        }
        f.write_str(")")
    }
}

/// A structural defect found by [`validate_mhpda`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MhValidationError {
    /// The machine declares zero heads.
    NoHeads,
    /// The endmarker is also an input symbol.
    EndmarkerInInputAlphabet,
    /// A symbol occurs twice in the same alphabet.
    DuplicateAlphabetSymbol {
        /// Offending symbol.
        symbol: Symbol,
        /// `"input"` or `"stack"`.
        alphabet: &'static str,
    },
    /// A symbol occurs in both alphabets.
    AlphabetOverlap {
        /// Offending symbol.
        symbol: Symbol,
    },
    /// The initial state is not declared.
    InitialStateUndeclared,
    /// A final state is not declared.
    FinalStateUndeclared {
        /// The undeclared state.
        state: StateId,
    },
    /// The initial stack symbol is not in the stack alphabet.
    InitialStackUndeclared,
    /// A transition's `reads` or `advances` vector does not have one entry
    /// per head.
    HeadArityMismatch {
        /// Index into the transition list.
        transition: usize,
    },
    /// A transition refers to an undeclared state.
    TransitionStateUndeclared {
        /// Index into the transition list.
        transition: usize,
        /// The undeclared state.
        state: StateId,
    },
    /// A transition reads a symbol that is neither an input symbol nor the
    /// endmarker.
    TransitionReadUndeclared {
        /// Index into the transition list.
        transition: usize,
        /// Head index.
        head: usize,
        /// The undeclared symbol.
        symbol: Symbol,
    },
    /// A transition pops or pushes a symbol outside the stack alphabet.
    TransitionStackUndeclared {
        /// Index into the transition list.
        transition: usize,
        /// The undeclared symbol.
        symbol: Symbol,
    },
    /// A transition advances a head it does not consult.
    AdvanceWithoutRead {
        /// Index into the transition list.
        transition: usize,
        /// Head index.
        head: usize,
    },
    /// A transition advances a head that scans the endmarker.
    AdvanceOnEndmarker {
        /// Index into the transition list.
        transition: usize,
        /// Head index.
        head: usize,
    },
}

impl fmt::Display for MhValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MhValidationError::*;
        match self {
            NoHeads => write!(f, "machine declares zero heads"),
            EndmarkerInInputAlphabet => write!(f, "endmarker is also an input symbol"),
            DuplicateAlphabetSymbol { symbol, alphabet } => {
                write!(f, "{alphabet} alphabet declares {symbol} twice")
            }
            AlphabetOverlap { symbol } => {
                write!(f, "symbol {symbol} is in both the input and the stack alphabet")
            }
            InitialStateUndeclared => write!(f, "initial state is not declared"),
            FinalStateUndeclared { state } => write!(f, "final state {state} is not declared"),
            InitialStackUndeclared => {
                write!(f, "initial stack symbol is not in the stack alphabet")
            }
            HeadArityMismatch { transition } => write!(
                f,
                "transition {transition}: reads/advances must have one entry per head"
            ),
            TransitionStateUndeclared { transition, state } => {
                write!(f, "transition {transition}: state {state} is not declared")
            }
            TransitionReadUndeclared {
                transition,
                head,
                symbol,
            } => write!(
                f,
                "transition {transition}, head {head}: scanned symbol {symbol} is neither an input symbol nor the endmarker"
            ),
            TransitionStackUndeclared { transition, symbol } => write!(
                f,
                "transition {transition}: stack symbol {symbol} is not in the stack alphabet"
            ),
            AdvanceWithoutRead { transition, head } => write!(
                f,
                "transition {transition}: head {head} advances without being consulted"
            ),
            AdvanceOnEndmarker { transition, head } => write!(
                f,
                "transition {transition}: head {head} advances while scanning the endmarker"
            ),
        }
    }
}

impl core::error::Error for MhValidationError {}

/// Checks the static structure of a multi-head machine and reports every
/// defect found.
pub fn validate_mhpda(m: &MhpdaMachine) -> Vec<MhValidationError> {
    use MhValidationError::*;
    let mut violations = Vec::new();

    if m.heads == 0 {
        violations.push(NoHeads);
    }

    let mut input_set: BTreeSet<&Symbol> = BTreeSet::new();
    for s in &m.input_alphabet {
        if !input_set.insert(s) {
            violations.push(DuplicateAlphabetSymbol {
                symbol: s.clone(),
                alphabet: "input",
            });
        }
    }
    let mut stack_set: BTreeSet<&Symbol> = BTreeSet::new();
    for s in &m.stack_alphabet {
        if !stack_set.insert(s) {
            violations.push(DuplicateAlphabetSymbol {
                symbol: s.clone(),
                alphabet: "stack",
            });
        }
        if input_set.contains(s) {
            violations.push(AlphabetOverlap { symbol: s.clone() });
        }
    }
    if input_set.contains(&m.endmarker) {
        violations.push(EndmarkerInInputAlphabet);
    }

    if !m.states.contains(&m.initial) {
        violations.push(InitialStateUndeclared);
    }
    for s in &m.finals {
        if !m.states.contains(s) {
            violations.push(FinalStateUndeclared { state: s.clone() });
        }
    }
    if !stack_set.contains(&m.initial_stack) {
        violations.push(InitialStackUndeclared);
    }

    for (ti, t) in m.transitions.iter().enumerate() {
        for st in [&t.from, &t.to] {
            if !m.states.contains(st) {
                violations.push(TransitionStateUndeclared {
                    transition: ti,
                    state: st.clone(),
                });
            }
        }
        if t.reads.len() != m.heads || t.advances.len() != m.heads {
            violations.push(HeadArityMismatch { transition: ti });
            continue;
        }
        for (hi, read) in t.reads.iter().enumerate() {
            if let Some(s) = read {
                if s != &m.endmarker && !input_set.contains(s) {
                    violations.push(TransitionReadUndeclared {
                        transition: ti,
                        head: hi,
                        symbol: s.clone(),
                    });
                }
            }
        }
        for (hi, &adv) in t.advances.iter().enumerate() {
            if !adv {
                continue;
            }
            match &t.reads[hi] {
                None => violations.push(AdvanceWithoutRead {
                    transition: ti,
                    head: hi,
                }),
                Some(s) if s == &m.endmarker => violations.push(AdvanceOnEndmarker {
                    transition: ti,
                    head: hi,
                }),
                Some(_) => {}
            }
        }
        if !stack_set.contains(&t.pop) {
            violations.push(TransitionStackUndeclared {
                transition: ti,
                symbol: t.pop.clone(),
            });
        }
        for p in &t.push {
            if !stack_set.contains(p) {
                violations.push(TransitionStackUndeclared {
                    transition: ti,
                    symbol: p.clone(),
                });
            }
        }
    }

    violations
}

/// The configuration in which the machine starts on `word`: initial state,
/// all heads at position 0, the initial stack symbol on the stack.
pub fn mh_initial_configuration(m: &MhpdaMachine) -> MhConfiguration {
    MhConfiguration {
        state: m.initial.clone(),
        positions: vec![0; m.heads],
        stack: vec![m.initial_stack.clone()],
    }
}

/// True when `cfg` is accepting on `word`: final state and every head on
/// the endmarker.
pub fn mh_is_accepting(m: &MhpdaMachine, cfg: &MhConfiguration, word: &[Symbol]) -> bool {
    m.finals.contains(&cfg.state) && cfg.positions.iter().all(|&p| p == word.len())
}

/// All configurations reachable from `cfg` by one transition on `word`.
pub fn mh_step_successors(
    m: &MhpdaMachine,
    cfg: &MhConfiguration,
    word: &[Symbol],
) -> Vec<MhConfiguration> {
    let Some(top) = cfg.stack.first() else {
        return Vec::new();
    };
    let mut result = Vec::new();
    'next_transition: for t in &m.transitions {
        if t.from != cfg.state || &t.pop != top {
            continue;
        }
        if t.reads.len() != m.heads || t.advances.len() != m.heads {
            continue; // malformed; reported by validation
        }
        for (hi, read) in t.reads.iter().enumerate() {
            let pos = cfg.positions[hi];
            let scanned = word.get(pos).unwrap_or(&m.endmarker);
            if let Some(required) = read {
                if required != scanned {
                    continue 'next_transition;
                }
            }
            if t.advances[hi] && pos >= word.len() {
                continue 'next_transition;
            }
        }
        let positions = cfg
            .positions
            .iter()
            .zip(&t.advances)
            .map(|(&p, &adv)| if adv { p + 1 } else { p })
            .collect();
        let mut stack = t.push.clone();
        stack.extend_from_slice(&cfg.stack[1..]);
        result.push(MhConfiguration {
            state: t.to.clone(),
            positions,
            stack,
        });
    }
    result
}

// ---------------------------------------------------------------------------
// Compiled fast path, mirroring the one for communicating systems.
// ---------------------------------------------------------------------------

type SymId = u32;

struct CompiledMhTransition {
    reads: Vec<Option<SymId>>,
    advances: Vec<bool>,
    to: u32,
    push: Vec<SymId>,
}

struct CompiledMh {
    symbol_names: Vec<Symbol>,
    symbol_ids: BTreeMap<Symbol, SymId>,
    endmarker: SymId,
    heads: usize,
    state_names: Vec<StateId>,
    initial: u32,
    initial_stack: SymId,
    is_final: Vec<bool>,
    delta: BTreeMap<(u32, SymId), Vec<CompiledMhTransition>>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct MhCompiledConfig {
    state: u32,
    positions: Vec<u32>,
    stack: Vec<SymId>,
}

impl CompiledMh {
    fn compile(m: &MhpdaMachine) -> CompiledMh {
        let mut symbol_names: Vec<Symbol> = Vec::new();
        let mut symbol_ids: BTreeMap<Symbol, SymId> = BTreeMap::new();
        let intern_sym = |s: &Symbol,
                          names: &mut Vec<Symbol>,
                          ids: &mut BTreeMap<Symbol, SymId>| {
            if let Some(&id) = ids.get(s) {
                return id;
            }
            let id = names.len() as SymId;
            names.push(s.clone());
            ids.insert(s.clone(), id);
            id
        };
        for s in m.input_alphabet.iter().chain(&m.stack_alphabet) {
            intern_sym(s, &mut symbol_names, &mut symbol_ids);
        }
        let endmarker = intern_sym(&m.endmarker, &mut symbol_names, &mut symbol_ids);

        let mut state_names: Vec<StateId> = m.states.iter().cloned().collect();
        let mut state_id: BTreeMap<StateId, u32> = state_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        let mut intern_state = |s: &StateId, names: &mut Vec<StateId>| {
            if let Some(&id) = state_id.get(s) {
                return id;
            }
            let id = names.len() as u32;
            names.push(s.clone());
            state_id.insert(s.clone(), id);
            id
        };
        let initial = intern_state(&m.initial, &mut state_names);
        let mut delta: BTreeMap<(u32, SymId), Vec<CompiledMhTransition>> = BTreeMap::new();
        for t in &m.transitions {
            if t.reads.len() != m.heads || t.advances.len() != m.heads {
                continue; // malformed; reported by validation
            }
            let from = intern_state(&t.from, &mut state_names);
            let to = intern_state(&t.to, &mut state_names);
            let key = (from, intern_sym(&t.pop, &mut symbol_names, &mut symbol_ids));
            delta.entry(key).or_default().push(CompiledMhTransition {
                reads: t
                    .reads
                    .iter()
                    .map(|r| {
                        r.as_ref()
                            .map(|s| intern_sym(s, &mut symbol_names, &mut symbol_ids))
                    })
                    .collect(),
                advances: t.advances.clone(),
                to,
                push: t
                    .push
                    .iter()
                    .map(|p| intern_sym(p, &mut symbol_names, &mut symbol_ids))
                    .collect(),
            });
        }
        let is_final = state_names.iter().map(|s| m.finals.contains(s)).collect();
        let initial_stack = intern_sym(&m.initial_stack, &mut symbol_names, &mut symbol_ids);
        CompiledMh {
            symbol_names,
            symbol_ids,
            endmarker,
            heads: m.heads,
            state_names,
            initial,
            initial_stack,
            is_final,
            delta,
        }
    }

    fn initial_config(&self) -> MhCompiledConfig {
        MhCompiledConfig {
            state: self.initial,
            positions: vec![0; self.heads],
            stack: vec![self.initial_stack],
        }
    }

    fn is_accepting(&self, cfg: &MhCompiledConfig, word_len: u32) -> bool {
        self.is_final[cfg.state as usize] && cfg.positions.iter().all(|&p| p == word_len)
    }

    fn successors(&self, cfg: &MhCompiledConfig, word: &[SymId]) -> Vec<MhCompiledConfig> {
        let Some(&top) = cfg.stack.first() else {
            return Vec::new();
        };
        let Some(ts) = self.delta.get(&(cfg.state, top)) else {
            return Vec::new();
        };
        let mut result = Vec::new();
        'next_transition: for t in ts {
            for hi in 0..self.heads {
                let pos = cfg.positions[hi] as usize;
                let scanned = word.get(pos).copied().unwrap_or(self.endmarker);
                if let Some(required) = t.reads[hi] {
                    if required != scanned {
                        continue 'next_transition;
                    }
                }
                if t.advances[hi] && pos >= word.len() {
                    continue 'next_transition;
                }
            }
            let positions = cfg
                .positions
                .iter()
                .zip(&t.advances)
                .map(|(&p, &adv)| if adv { p + 1 } else { p })
                .collect();
            let mut stack = t.push.clone();
            stack.extend_from_slice(&cfg.stack[1..]);
            result.push(MhCompiledConfig {
                state: t.to,
                positions,
                stack,
            });
        }
        result
    }

    fn decompile(&self, cfg: &MhCompiledConfig) -> MhConfiguration {
        MhConfiguration {
            state: self.state_names[cfg.state as usize].clone(),
            positions: cfg.positions.iter().map(|&p| p as usize).collect(),
            stack: cfg
                .stack
                .iter()
                .map(|&s| self.symbol_names[s as usize].clone())
                .collect(),
        }
    }
}

/// Decides bounded membership of `word` in the language of `m`.
///
/// Same verdict semantics as [`run_bounded`](crate::search::run_bounded):
/// `Accepted` carries a shortest witness, `Rejected` certifies exhaustion
/// of the reachable configuration space, `Unknown` reports a truncated
/// exploration. Words mentioning symbols the machine does not declare are
/// rejected immediately.
pub fn mh_run_bounded(
    m: &MhpdaMachine,
    word: &[Symbol],
    limits: &SearchLimits,
) -> Verdict<MhConfiguration> {
    let compiled = CompiledMh::compile(m);
    let cword: Option<Vec<SymId>> = word
        .iter()
        .map(|s| compiled.symbol_ids.get(s).copied())
        .collect();
    let Some(cword) = cword else {
        return Verdict {
            outcome: SearchOutcome::Rejected,
            witness: None,
            stats: SearchStats::default(),
        };
    };
    let word_len = cword.len() as u32;
    let verdict = bounded_bfs(
        compiled.initial_config(),
        limits,
        |c| (StepKind::Usual, compiled.successors(c, &cword)),
        |c| compiled.is_accepting(c, word_len),
    );
    verdict.map(|c| compiled.decompile(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{state, sym};

    fn word(s: &str) -> Vec<Symbol> {
        s.chars()
            .map(|c| sym(&alloc::string::String::from(c)))
            .collect()
    }

    /// One-head machine accepting `a^n b^n`, `n >= 1`, by counting on the
    /// stack and checking the bottom marker on the endmarker.
    fn mh_anbn() -> MhpdaMachine {
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
                MhTransition {
                    from: state("h0"),
                    reads: vec![Some(sym("a"))],
                    pop: sym("Z"),
                    to: state("h0"),
                    advances: vec![true],
                    push: vec![sym("A"), sym("Z")],
                },
                MhTransition {
                    from: state("h0"),
                    reads: vec![Some(sym("a"))],
                    pop: sym("A"),
                    to: state("h0"),
                    advances: vec![true],
                    push: vec![sym("A"), sym("A")],
                },
                MhTransition {
                    from: state("h0"),
                    reads: vec![Some(sym("b"))],
                    pop: sym("A"),
                    to: state("h1"),
                    advances: vec![true],
                    push: vec![],
                },
                MhTransition {
                    from: state("h1"),
                    reads: vec![Some(sym("b"))],
                    pop: sym("A"),
                    to: state("h1"),
                    advances: vec![true],
                    push: vec![],
                },
                MhTransition {
                    from: state("h1"),
                    reads: vec![Some(sym("$"))],
                    pop: sym("Z"),
                    to: state("h2"),
                    advances: vec![false],
                    push: vec![sym("Z")],
                },
            ],
        }
    }

    /// Two-head machine accepting `a^n b^n`, `n >= 0`, without using the
    /// stack: the second head walks the `a`-block while the first walks
    /// the `b`-block.
    fn two_head_anbn() -> MhpdaMachine {
        let t = |from: &str,
                 reads: Vec<Option<Symbol>>,
                 advances: Vec<bool>,
                 to: &str| MhTransition {
            from: state(from),
            reads,
            pop: sym("Z"),
            to: state(to),
            advances,
            push: vec![sym("Z")],
        };
        MhpdaMachine {
            heads: 2,
            input_alphabet: vec![sym("a"), sym("b")],
            stack_alphabet: vec![sym("Z")],
            endmarker: sym("$"),
            states: [state("s0"), state("s1"), state("s2"), state("s3")]
                .into_iter()
                .collect(),
            initial: state("s0"),
            initial_stack: sym("Z"),
            finals: [state("s3")].into_iter().collect(),
            transitions: vec![
                t("s0", vec![Some(sym("$")), Some(sym("$"))], vec![false, false], "s3"),
                t("s0", vec![Some(sym("a")), None], vec![true, false], "s0"),
                t("s0", vec![Some(sym("b")), Some(sym("a"))], vec![true, true], "s1"),
                t("s1", vec![Some(sym("b")), Some(sym("a"))], vec![true, true], "s1"),
                t("s1", vec![Some(sym("$")), Some(sym("b"))], vec![false, true], "s2"),
                t("s2", vec![Some(sym("$")), Some(sym("b"))], vec![false, true], "s2"),
                t("s2", vec![Some(sym("$")), Some(sym("$"))], vec![false, false], "s3"),
            ],
        }
    }

    #[test]
    fn fixtures_validate() {
        assert!(validate_mhpda(&mh_anbn()).is_empty());
        assert!(validate_mhpda(&two_head_anbn()).is_empty());
    }

    #[test]
    fn one_head_counts_with_stack() {
        let m = mh_anbn();
        let limits = SearchLimits::default();
        for (w, expect) in [
            ("", SearchOutcome::Rejected),
            ("ab", SearchOutcome::Accepted),
            ("aabb", SearchOutcome::Accepted),
            ("aaabbb", SearchOutcome::Accepted),
            ("aab", SearchOutcome::Rejected),
            ("abb", SearchOutcome::Rejected),
            ("ba", SearchOutcome::Rejected),
            ("aabbb", SearchOutcome::Rejected),
        ] {
            let v = mh_run_bounded(&m, &word(w), &limits);
            assert_eq!(v.outcome, expect, "word {w:?}");
        }
    }

    #[test]
    fn two_heads_count_without_stack() {
        let m = two_head_anbn();
        let limits = SearchLimits::default();
        for (w, expect) in [
            ("", SearchOutcome::Accepted),
            ("ab", SearchOutcome::Accepted),
            ("aaabbb", SearchOutcome::Accepted),
            ("aab", SearchOutcome::Rejected),
            ("abb", SearchOutcome::Rejected),
            ("ba", SearchOutcome::Rejected),
            ("abab", SearchOutcome::Rejected),
        ] {
            let v = mh_run_bounded(&m, &word(w), &limits);
            assert_eq!(v.outcome, expect, "word {w:?}");
        }
    }

    #[test]
    fn acceptance_needs_all_heads_at_end() {
        let m = two_head_anbn();
        let cfg = MhConfiguration {
            state: state("s3"),
            positions: vec![2, 1],
            stack: vec![sym("Z")],
        };
        assert!(!mh_is_accepting(&m, &cfg, &word("ab")));
        let done = MhConfiguration {
            state: state("s3"),
            positions: vec![2, 2],
            stack: vec![sym("Z")],
        };
        assert!(mh_is_accepting(&m, &done, &word("ab")));
    }

    #[test]
    fn witness_trace_follows_heads() {
        let m = mh_anbn();
        let v = mh_run_bounded(&m, &word("ab"), &SearchLimits::default());
        let trace = v.witness.expect("accepts ab");
        // Read a, read b, endmarker check.
        assert_eq!(trace.configurations.len(), 4);
        assert_eq!(
            trace.configurations.last().unwrap().positions,
            alloc::vec![2]
        );
        assert_eq!(trace.configurations.last().unwrap().state, state("h2"));
    }

    #[test]
    fn symbolic_and_compiled_successors_agree() {
        let m = two_head_anbn();
        let w = word("aabb");
        let compiled = CompiledMh::compile(&m);
        let cw: Vec<SymId> = w.iter().map(|s| compiled.symbol_ids[s]).collect();

        // Walk a few layers breadth-first with both engines.
        let mut sym_frontier = vec![mh_initial_configuration(&m)];
        let mut comp_frontier = vec![compiled.initial_config()];
        for _ in 0..4 {
            let mut sym_next: Vec<MhConfiguration> = sym_frontier
                .iter()
                .flat_map(|c| mh_step_successors(&m, c, &w))
                .collect();
            let mut comp_next: Vec<MhConfiguration> = comp_frontier
                .iter()
                .flat_map(|c| compiled.successors(c, &cw))
                .map(|c| compiled.decompile(&c))
                .collect();
            sym_next.sort();
            sym_next.dedup();
            comp_next.sort();
            comp_next.dedup();
            assert_eq!(sym_next, comp_next);
            sym_frontier = sym_next;
            comp_frontier = comp_frontier
                .iter()
                .flat_map(|c| compiled.successors(c, &cw))
                .collect();
        }
    }

    #[test]
    fn validation_catches_head_misuse() {
        let mut m = mh_anbn();
        m.transitions.push(MhTransition {
            from: state("h0"),
            reads: vec![None],
            pop: sym("Z"),
            to: state("h0"),
            advances: vec![true],
            push: vec![sym("Z")],
        });
        m.transitions.push(MhTransition {
            from: state("h0"),
            reads: vec![Some(sym("$"))],
            pop: sym("Z"),
            to: state("h0"),
            advances: vec![true],
            push: vec![sym("Z")],
        });
        m.transitions.push(MhTransition {
            from: state("h0"),
            reads: vec![Some(sym("a")), Some(sym("b"))],
            pop: sym("Z"),
            to: state("h0"),
            advances: vec![true, true],
            push: vec![sym("Z")],
        });
        let violations = validate_mhpda(&m);
        use MhValidationError::*;
        assert!(violations.iter().any(|v| matches!(v, AdvanceWithoutRead { .. })));
        assert!(violations.iter().any(|v| matches!(v, AdvanceOnEndmarker { .. })));
        assert!(violations.iter().any(|v| matches!(v, HeadArityMismatch { .. })));
    }

    #[test]
    fn validation_catches_endmarker_clash() {
        let mut m = mh_anbn();
        m.endmarker = sym("a");
        assert!(validate_mhpda(&m)
            .iter()
            .any(|v| matches!(v, MhValidationError::EndmarkerInInputAlphabet)));
    }
}
