//! Data model for parallel communicating pushdown automata systems.
//!
//! A system of degree `n` consists of `n` pushdown components that read a
//! shared input word in lock-step and exchange stack contents through
//! *query symbols*: when component `i` exposes a query symbol addressing
//! component `j` on top of its stack, the symbol is replaced by the entire
//! stack content of `j` before any ordinary transition may fire.
//!
//! This module defines the static structure ([`PcpaSystem`],
//! [`PdaComponent`], [`Transition`]), structural validation
//! ([`validate_system`]) and a small classification summary
//! ([`classify`]). Operational semantics live in [`crate::step`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::symbol::{StateId, Symbol};

/// What happens to the *source* component's stack when it is queried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    /// After its stack content is transferred, the source stack is reset to
    /// its initial stack symbol.
    Returning,
    /// The source stack is left unchanged by the transfer.
    NonReturning,
}

impl Mode {
    /// Canonical lower-case token used in files and reports.
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Returning => "returning",
            Mode::NonReturning => "non_returning",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One transition of one pushdown component.
///
/// Firing requires the component to be in state `from`, the next unread
/// input symbol to equal `read` (or any input position when `read` is
/// `None`, an ε-move), and the top of stack to equal `pop`. The transition
/// consumes the input symbol (if any), pops the top symbol and pushes
/// `push` so that `push[0]` becomes the new top of stack.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    /// Source state.
    pub from: StateId,
    /// Input symbol consumed, or `None` for an ε-move.
    pub read: Option<Symbol>,
    /// Stack symbol popped (always exactly one).
    pub pop: Symbol,
    /// Target state.
    pub to: StateId,
    /// Symbols pushed, top of stack first. Empty means a plain pop.
    pub push: Vec<Symbol>,
}

impl Transition {
    /// Convenience constructor.
    pub fn new(
        from: StateId,
        read: Option<Symbol>,
        pop: Symbol,
        to: StateId,
        push: Vec<Symbol>,
    ) -> Self {
        Transition {
            from,
            read,
            pop,
            to,
            push,
        }
    }
}

/// Phase tag of a state in a known-communication-shaped component.
///
/// Components produced by
/// [`to_known_communication`](crate::transform::to_known_communication)
/// carry per-state annotations describing where the state sits in the
/// two-phase simulation rhythm. `Sim1`/`Sim2` states simulate the original
/// component; the three start-up phases occur once per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KcPhase {
    /// Fresh initial state, before the first move.
    Initial,
    /// First start-up half-step done.
    Primed1,
    /// Second start-up half-step done; next move enters the simulation.
    Primed2,
    /// First half of the two-step simulation rhythm.
    Sim1,
    /// Second half of the two-step simulation rhythm.
    Sim2,
}

impl KcPhase {
    /// Canonical lower-case token used in files and reports.
    pub fn as_str(self) -> &'static str {
        match self {
            KcPhase::Initial => "initial",
            KcPhase::Primed1 => "primed1",
            KcPhase::Primed2 => "primed2",
            KcPhase::Sim1 => "sim1",
            KcPhase::Sim2 => "sim2",
        }
    }

    /// Parses the canonical token.
    pub fn from_token(s: &str) -> Option<Self> {
        Some(match s {
            "initial" => KcPhase::Initial,
            "primed1" => KcPhase::Primed1,
            "primed2" => KcPhase::Primed2,
            "sim1" => KcPhase::Sim1,
            "sim2" => KcPhase::Sim2,
            _ => return None,
        })
    }
}

impl fmt::Display for KcPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Annotation attached to each state of a known-communication-shaped
/// component.
///
/// `switch` is the communication flag: a state with `switch == true` is
/// entered by a component's first ordinary move after that component served
/// as the source of a communication. The switch property checker
/// ([`crate::harness::check_switch_property`]) verifies that executions
/// respect exactly this reading.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct KcState {
    /// The original (pre-transform) state this one simulates.
    pub base: StateId,
    /// Position in the simulation rhythm.
    pub phase: KcPhase,
    /// Communication flag.
    pub switch: bool,
}

/// One pushdown component of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdaComponent {
    /// All states of this component.
    pub states: BTreeSet<StateId>,
    /// Start state.
    pub initial: StateId,
    /// Symbol the stack holds initially (and is reset to in returning mode).
    pub initial_stack: Symbol,
    /// Accepting states.
    pub finals: BTreeSet<StateId>,
    /// Transition list. Order is irrelevant to the semantics; it is kept
    /// stable for deterministic serialization.
    pub transitions: Vec<Transition>,
    /// Per-state annotations present on known-communication-shaped
    /// components, `None` otherwise. When present the map must cover
    /// exactly `states`.
    pub kc_states: Option<BTreeMap<StateId, KcState>>,
}

/// A parallel communicating pushdown automata system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpaSystem {
    /// Communication mode shared by all components.
    pub mode: Mode,
    /// Input alphabet. Declared order is significant: word enumeration and
    /// sample reports follow it.
    pub input_alphabet: Vec<Symbol>,
    /// Stack alphabet shared by all components (query symbols included).
    pub stack_alphabet: Vec<Symbol>,
    /// The components; index 0 is component 1, conventionally the master
    /// in centralized systems.
    pub components: Vec<PdaComponent>,
    /// Maps each query symbol to the 0-based index of the component whose
    /// stack it requests.
    pub query_map: BTreeMap<Symbol, usize>,
}

impl PcpaSystem {
    /// Number of components.
    pub fn degree(&self) -> usize {
        self.components.len()
    }

    /// True if `s` is a query symbol of this system.
    pub fn is_query_symbol(&self, s: &Symbol) -> bool {
        self.query_map.contains_key(s)
    }
}

/// A structural defect found by [`validate_system`].
///
/// Component indices in the variants are 0-based; rendered messages number
/// components from 1 as is conventional for these systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationError {
    /// The system has no components.
    NoComponents,
    /// A symbol occurs twice in the same alphabet.
    DuplicateAlphabetSymbol {
        /// Offending symbol.
        symbol: Symbol,
        /// `"input"` or `"stack"`.
        alphabet: &'static str,
    },
    /// A symbol occurs in both the input and the stack alphabet.
    AlphabetOverlap {
        /// Offending symbol.
        symbol: Symbol,
    },
    /// A query symbol is not part of the stack alphabet.
    QuerySymbolNotInStackAlphabet {
        /// Offending query symbol.
        symbol: Symbol,
    },
    /// A query symbol targets a component index that does not exist.
    QueryTargetOutOfRange {
        /// Offending query symbol.
        symbol: Symbol,
        /// The out-of-range 0-based target.
        target: usize,
    },
    /// A component's initial state is not in its state set.
    InitialStateUndeclared {
        /// 0-based component index.
        component: usize,
    },
    /// A component's final state is not in its state set.
    FinalStateUndeclared {
        /// 0-based component index.
        component: usize,
        /// The undeclared state.
        state: StateId,
    },
    /// A component's initial stack symbol is not in the stack alphabet.
    InitialStackUndeclared {
        /// 0-based component index.
        component: usize,
    },
    /// A component's initial stack symbol is a query symbol.
    InitialStackIsQuery {
        /// 0-based component index.
        component: usize,
    },
    /// A transition refers to an undeclared state.
    TransitionStateUndeclared {
        /// 0-based component index.
        component: usize,
        /// Index into the component's transition list.
        transition: usize,
        /// The undeclared state.
        state: StateId,
    },
    /// A transition reads a symbol outside the input alphabet.
    TransitionReadUndeclared {
        /// 0-based component index.
        component: usize,
        /// Index into the component's transition list.
        transition: usize,
        /// The undeclared symbol.
        symbol: Symbol,
    },
    /// A transition pops or pushes a symbol outside the stack alphabet.
    TransitionStackUndeclared {
        /// 0-based component index.
        component: usize,
        /// Index into the component's transition list.
        transition: usize,
        /// The undeclared symbol.
        symbol: Symbol,
    },
    /// A transition pops a query symbol. Communication consumes query
    /// symbols before ordinary transitions may fire, so such a transition
    /// could never be meant to run.
    TransitionPopsQuerySymbol {
        /// 0-based component index.
        component: usize,
        /// Index into the component's transition list.
        transition: usize,
        /// The query symbol.
        symbol: Symbol,
    },
    /// A component's annotation map does not cover exactly its state set.
    KcAnnotationMismatch {
        /// 0-based component index.
        component: usize,
        /// A state present in exactly one of the two sets.
        state: StateId,
    },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationError::*;
        match self {
            NoComponents => write!(f, "system has no components"),
            DuplicateAlphabetSymbol { symbol, alphabet } => {
                write!(f, "{alphabet} alphabet declares {symbol} twice")
            }
            AlphabetOverlap { symbol } => {
                write!(f, "symbol {symbol} is in both the input and the stack alphabet")
            }
            QuerySymbolNotInStackAlphabet { symbol } => {
                write!(f, "query symbol {symbol} is not in the stack alphabet")
            }
            QueryTargetOutOfRange { symbol, target } => write!(
                f,
                "query symbol {symbol} targets component {}, but the system has fewer components",
                target + 1
            ),
            InitialStateUndeclared { component } => {
                write!(f, "component {}: initial state is not declared", component + 1)
            }
            FinalStateUndeclared { component, state } => write!(
                f,
                "component {}: final state {state} is not declared",
                component + 1
            ),
            InitialStackUndeclared { component } => write!(
                f,
                "component {}: initial stack symbol is not in the stack alphabet",
                component + 1
            ),
            InitialStackIsQuery { component } => write!(
                f,
                "component {}: initial stack symbol is a query symbol",
                component + 1
            ),
            TransitionStateUndeclared {
                component,
                transition,
                state,
            } => write!(
                f,
                "component {}, transition {}: state {state} is not declared",
                component + 1,
                transition
            ),
            TransitionReadUndeclared {
                component,
                transition,
                symbol,
            } => write!(
                f,
                "component {}, transition {}: read symbol {symbol} is not in the input alphabet",
                component + 1,
                transition
            ),
            TransitionStackUndeclared {
                component,
                transition,
                symbol,
            } => write!(
                f,
                "component {}, transition {}: stack symbol {symbol} is not in the stack alphabet",
                component + 1,
                transition
            ),
            TransitionPopsQuerySymbol {
                component,
                transition,
                symbol,
            } => write!(
                f,
                "component {}, transition {}: pops query symbol {symbol}",
                component + 1,
                transition
            ),
            KcAnnotationMismatch { component, state } => write!(
                f,
                "component {}: annotation map and state set disagree on {state}",
                component + 1
            ),
        }
    }
}

impl core::error::Error for ValidationError {}

/// Result of [`validate_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// All structural defects found, in a deterministic order.
    pub violations: Vec<ValidationError>,
    /// For each component (by index), the set of query symbols it can push.
    /// Computed even when violations are present, for diagnostics.
    pub query_pushers: Vec<BTreeSet<Symbol>>,
}

impl ValidationReport {
    /// True when no violations were found.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the static structure of a system and reports every defect found.
///
/// The checks are purely structural (declaredness, alphabet hygiene, query
/// bookkeeping); they do not attempt to decide semantic properties such as
/// emptiness. A system with an empty violation list is safe to execute.
pub fn validate_system(sys: &PcpaSystem) -> ValidationReport {
    let mut violations = Vec::new();
    let mut query_pushers: Vec<BTreeSet<Symbol>> = Vec::new();

    if sys.components.is_empty() {
        violations.push(ValidationError::NoComponents);
    }

    let mut input_set: BTreeSet<&Symbol> = BTreeSet::new();
    for s in &sys.input_alphabet {
        if !input_set.insert(s) {
            violations.push(ValidationError::DuplicateAlphabetSymbol {
                symbol: s.clone(),
                alphabet: "input",
            });
        }
    }
    let mut stack_set: BTreeSet<&Symbol> = BTreeSet::new();
    for s in &sys.stack_alphabet {
        if !stack_set.insert(s) {
            violations.push(ValidationError::DuplicateAlphabetSymbol {
                symbol: s.clone(),
                alphabet: "stack",
            });
        }
        if input_set.contains(s) {
            violations.push(ValidationError::AlphabetOverlap { symbol: s.clone() });
        }
    }

    for (q, &target) in &sys.query_map {
        if !stack_set.contains(q) {
            violations.push(ValidationError::QuerySymbolNotInStackAlphabet { symbol: q.clone() });
        }
        if target >= sys.components.len() {
            violations.push(ValidationError::QueryTargetOutOfRange {
                symbol: q.clone(),
                target,
            });
        }
    }

    for (ci, comp) in sys.components.iter().enumerate() {
        let mut pushes: BTreeSet<Symbol> = BTreeSet::new();

        if !comp.states.contains(&comp.initial) {
            violations.push(ValidationError::InitialStateUndeclared { component: ci });
        }
        for fs in &comp.finals {
            if !comp.states.contains(fs) {
                violations.push(ValidationError::FinalStateUndeclared {
                    component: ci,
                    state: fs.clone(),
                });
            }
        }
        if !stack_set.contains(&comp.initial_stack) {
            violations.push(ValidationError::InitialStackUndeclared { component: ci });
        }
        if sys.query_map.contains_key(&comp.initial_stack) {
            violations.push(ValidationError::InitialStackIsQuery { component: ci });
        }

        for (ti, t) in comp.transitions.iter().enumerate() {
            for st in [&t.from, &t.to] {
                if !comp.states.contains(st) {
                    violations.push(ValidationError::TransitionStateUndeclared {
                        component: ci,
                        transition: ti,
                        state: st.clone(),
                    });
                }
            }
            if let Some(r) = &t.read {
                if !input_set.contains(r) {
                    violations.push(ValidationError::TransitionReadUndeclared {
                        component: ci,
                        transition: ti,
                        symbol: r.clone(),
                    });
                }
            }
            if !stack_set.contains(&t.pop) {
                violations.push(ValidationError::TransitionStackUndeclared {
                    component: ci,
                    transition: ti,
                    symbol: t.pop.clone(),
                });
            }
            if sys.query_map.contains_key(&t.pop) {
                violations.push(ValidationError::TransitionPopsQuerySymbol {
                    component: ci,
                    transition: ti,
                    symbol: t.pop.clone(),
                });
            }
            for p in &t.push {
                if !stack_set.contains(p) {
                    violations.push(ValidationError::TransitionStackUndeclared {
                        component: ci,
                        transition: ti,
                        symbol: p.clone(),
                    });
                }
                if sys.query_map.contains_key(p) {
                    pushes.insert(p.clone());
                }
            }
        }

        if let Some(kc) = &comp.kc_states {
            for st in comp.states.iter() {
                if !kc.contains_key(st) {
                    violations.push(ValidationError::KcAnnotationMismatch {
                        component: ci,
                        state: st.clone(),
                    });
                }
            }
            for st in kc.keys() {
                if !comp.states.contains(st) {
                    violations.push(ValidationError::KcAnnotationMismatch {
                        component: ci,
                        state: st.clone(),
                    });
                }
            }
        }

        query_pushers.push(pushes);
    }

    ValidationReport {
        violations,
        query_pushers,
    }
}

/// Structural classification of a system, as reported by [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemClass {
    /// Number of components.
    pub degree: usize,
    /// Communication mode.
    pub mode: Mode,
    /// 0-based indices of components that can push at least one query
    /// symbol.
    pub queriers: BTreeSet<usize>,
    /// True when at most the first component issues queries.
    pub centralized: bool,
}

impl SystemClass {
    /// True if the system has any queriers at all.
    pub fn communicating(&self) -> bool {
        !self.queriers.is_empty()
    }
}

/// Computes degree, mode and the querier structure of a system.
///
/// A system is *centralized* when only the first component (the master)
/// can introduce query symbols; systems without any queriers count as
/// centralized degenerately.
pub fn classify(sys: &PcpaSystem) -> SystemClass {
    let report = validate_system(sys);
    let queriers: BTreeSet<usize> = report
        .query_pushers
        .iter()
        .enumerate()
        .filter(|(_, qs)| !qs.is_empty())
        .map(|(i, _)| i)
        .collect();
    let centralized = queriers.iter().all(|&i| i == 0);
    SystemClass {
        degree: sys.degree(),
        mode: sys.mode,
        queriers,
        centralized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{state, sym};
    use alloc::vec;

    fn tiny_valid() -> PcpaSystem {
        PcpaSystem {
            mode: Mode::Returning,
            input_alphabet: vec![sym("a")],
            stack_alphabet: vec![sym("Z1"), sym("Z2"), sym("K2")],
            components: vec![
                PdaComponent {
                    states: [state("p0"), state("p1")].into_iter().collect(),
                    initial: state("p0"),
                    initial_stack: sym("Z1"),
                    finals: [state("p1")].into_iter().collect(),
                    transitions: vec![Transition::new(
                        state("p0"),
                        Some(sym("a")),
                        sym("Z1"),
                        state("p1"),
                        vec![sym("K2"), sym("Z1")],
                    )],
                    kc_states: None,
                },
                PdaComponent {
                    states: [state("t0")].into_iter().collect(),
                    initial: state("t0"),
                    initial_stack: sym("Z2"),
                    finals: [state("t0")].into_iter().collect(),
                    transitions: vec![],
                    kc_states: None,
                },
            ],
            query_map: [(sym("K2"), 1usize)].into_iter().collect(),
        }
    }

    #[test]
    fn valid_system_passes_and_classifies() {
        let sys = tiny_valid();
        let report = validate_system(&sys);
        assert!(report.is_valid(), "unexpected violations: {:?}", report.violations);
        assert_eq!(report.query_pushers[0], [sym("K2")].into_iter().collect());
        assert!(report.query_pushers[1].is_empty());

        let class = classify(&sys);
        assert_eq!(class.degree, 2);
        assert_eq!(class.mode, Mode::Returning);
        assert!(class.centralized);
        assert_eq!(class.queriers, [0usize].into_iter().collect());
        assert!(class.communicating());
    }

    #[test]
    fn detects_undeclared_and_query_pop() {
        let mut sys = tiny_valid();
        sys.components[0].transitions.push(Transition::new(
            state("p1"),
            Some(sym("b")),
            sym("K2"),
            state("missing"),
            vec![sym("W")],
        ));
        let report = validate_system(&sys);
        assert!(!report.is_valid());
        use ValidationError::*;
        assert!(report.violations.iter().any(|v| matches!(
            v,
            TransitionStateUndeclared { component: 0, transition: 1, .. }
        )));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, TransitionReadUndeclared { .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, TransitionStackUndeclared { .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, TransitionPopsQuerySymbol { .. })));
    }

    #[test]
    fn detects_alphabet_problems() {
        let mut sys = tiny_valid();
        sys.input_alphabet.push(sym("a"));
        sys.stack_alphabet.push(sym("a"));
        let report = validate_system(&sys);
        use ValidationError::*;
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, DuplicateAlphabetSymbol { alphabet: "input", .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, AlphabetOverlap { .. })));
    }

    #[test]
    fn detects_bad_query_map_and_initial_stack() {
        let mut sys = tiny_valid();
        sys.query_map.insert(sym("K9"), 7);
        sys.components[1].initial_stack = sym("K2");
        let report = validate_system(&sys);
        use ValidationError::*;
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, QuerySymbolNotInStackAlphabet { .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, QueryTargetOutOfRange { target: 7, .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, InitialStackIsQuery { component: 1 })));
    }

    #[test]
    fn kc_annotation_coverage_is_checked() {
        let mut sys = tiny_valid();
        let mut map = BTreeMap::new();
        map.insert(
            state("p0"),
            KcState {
                base: state("p0"),
                phase: KcPhase::Sim1,
                switch: false,
            },
        );
        // p1 missing, and one extra state present.
        map.insert(
            state("zz"),
            KcState {
                base: state("zz"),
                phase: KcPhase::Sim2,
                switch: true,
            },
        );
        sys.components[0].kc_states = Some(map);
        let report = validate_system(&sys);
        let mismatches: Vec<_> = report
            .violations
            .iter()
            .filter(|v| matches!(v, ValidationError::KcAnnotationMismatch { .. }))
            .collect();
        assert_eq!(mismatches.len(), 2);
    }

    #[test]
    fn noncentralized_when_other_component_queries() {
        let mut sys = tiny_valid();
        sys.components[1].states.insert(state("t1"));
        sys.components[1].transitions.push(Transition::new(
            state("t0"),
            None,
            sym("Z2"),
            state("t1"),
            vec![sym("K2"), sym("Z2")],
        ));
        let class = classify(&sys);
        assert!(!class.centralized);
        assert_eq!(class.queriers, [0usize, 1usize].into_iter().collect());
    }
}
