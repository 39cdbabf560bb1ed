//! Operational semantics: configurations, communication steps and lock-step
//! usual steps.
//!
//! A *configuration* of a degree-`n` system records, for every component,
//! its current state, the suffix of the input it has not yet read, and its
//! stack (top first). Computation alternates two kinds of steps:
//!
//! * **Communication steps** have priority. Whenever at least one component
//!   exposes a query symbol on top of its stack, the only possible step is
//!   the communication step: every query whose target component does *not*
//!   itself expose a query symbol is served by replacing the query symbol
//!   with the full stack content of the target. In returning mode each
//!   target that transferred its stack is reset to its initial stack
//!   symbol. If queries are pending but none can be served (circular or
//!   self-directed queries), the system is blocked.
//! * **Usual steps** fire exactly one transition in *every* component
//!   simultaneously. A component with no applicable transition stalls the
//!   whole system.
//!
//! A configuration is accepting when every component has read its entire
//! input and is in a final state; stack contents are unconstrained.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::symbol::{StateId, Symbol};
use crate::system::{Mode, PcpaSystem};

/// The situation of a single component within a [`SystemConfiguration`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentConfiguration {
    /// Current state.
    pub state: StateId,
    /// Unread suffix of the input word.
    pub unread: Vec<Symbol>,
    /// Stack content, top of stack first.
    pub stack: Vec<Symbol>,
}

/// A global configuration of a system: one entry per component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SystemConfiguration {
    /// Component situations, indexed like
    /// [`PcpaSystem::components`](crate::system::PcpaSystem::components).
    pub components: Vec<ComponentConfiguration>,
}

impl fmt::Display for SystemConfiguration {
    /// Renders `(state,unread,stack | state,unread,stack | …)` with symbols
    /// dot-joined and `_` for an empty sequence.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn seq(f: &mut fmt::Formatter<'_>, xs: &[Symbol]) -> fmt::Result {
            if xs.is_empty() {
                return f.write_str("_");
            }
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        }
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{},", c.state)?;
            seq(f, &c.unread)?;
            f.write_str(",")?;
            seq(f, &c.stack)?;
        }
        f.write_str(")")
    }
}

/// Kind of a step taken between two configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepKind {
    /// A lock-step round of ordinary transitions.
    Usual,
    /// A communication step serving at least one query.
    Communication,
}

impl StepKind {
    /// Canonical lower-case token used in rendered traces.
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Usual => "usual",
            StepKind::Communication => "communication",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of attempting a communication step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommStep {
    /// No component exposes a query symbol; usual steps apply instead.
    NotPending,
    /// The step was performed. `transfers` lists `(receiver, source)`
    /// component index pairs that were served, in ascending receiver order.
    Applied {
        /// Configuration after the communication step.
        next: SystemConfiguration,
        /// Served queries as `(receiver, source)` pairs.
        transfers: Vec<(usize, usize)>,
    },
    /// Queries are pending but none can be served: every target itself
    /// exposes a query symbol (circular or self-directed queries). The
    /// computation halts here.
    Blocked,
}

/// The configuration in which every component is in its initial state with
/// its initial stack symbol and the whole input `word` unread.
pub fn initial_configuration(sys: &PcpaSystem, word: &[Symbol]) -> SystemConfiguration {
    SystemConfiguration {
        components: sys
            .components
            .iter()
            .map(|c| ComponentConfiguration {
                state: c.initial.clone(),
                unread: word.to_vec(),
                stack: vec![c.initial_stack.clone()],
            })
            .collect(),
    }
}

/// True when `cfg` is accepting: all input read and all components in a
/// final state. Stack contents do not matter.
pub fn is_accepting(sys: &PcpaSystem, cfg: &SystemConfiguration) -> bool {
    sys.components
        .iter()
        .zip(&cfg.components)
        .all(|(comp, c)| c.unread.is_empty() && comp.finals.contains(&c.state))
}

/// Attempts the communication step on `cfg`.
///
/// Every component whose stack top is a query symbol requests the stack of
/// the addressed component. Requests whose target does not itself expose a
/// query symbol are served simultaneously: the query symbol is replaced by
/// the target's entire stack content (as it was before the step), and in
/// returning mode each target that served at least one request is reset to
/// its initial stack symbol. Requests whose target exposes a query symbol
/// stay pending for a later communication step; if no request at all can
/// be served, the result is [`CommStep::Blocked`].
pub fn communication_step(sys: &PcpaSystem, cfg: &SystemConfiguration) -> CommStep {
    // (receiver, source) for every component exposing a query symbol.
    let pending: Vec<(usize, usize)> = cfg
        .components
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let top = c.stack.first()?;
            sys.query_map.get(top).map(|&j| (i, j))
        })
        .collect();
    if pending.is_empty() {
        return CommStep::NotPending;
    }

    let exposes_query = |j: usize| {
        cfg.components[j]
            .stack
            .first()
            .is_some_and(|top| sys.query_map.contains_key(top))
    };
    let transfers: Vec<(usize, usize)> = pending
        .iter()
        .copied()
        .filter(|&(_, j)| !exposes_query(j))
        .collect();
    if transfers.is_empty() {
        return CommStep::Blocked;
    }

    let mut next = cfg.clone();
    // All transfers read the pre-step stacks; sources with non-query tops
    // are never receivers in the same step, so receiver updates cannot
    // interfere with source reads.
    for &(i, j) in &transfers {
        let mut stack = cfg.components[j].stack.clone();
        stack.extend_from_slice(&cfg.components[i].stack[1..]);
        next.components[i].stack = stack;
    }
    if sys.mode == Mode::Returning {
        for &(_, j) in &transfers {
            next.components[j].stack = vec![sys.components[j].initial_stack.clone()];
        }
    }
    CommStep::Applied { next, transfers }
}

/// All configurations reachable from `cfg` by one lock-step usual step.
///
/// Every component must fire exactly one applicable transition; the result
/// is the cross product of the per-component choices. The list is empty if
/// any component has no applicable transition. Callers are responsible for
/// ensuring communication does not take priority (see [`step_successors`]).
pub fn usual_step_successors(sys: &PcpaSystem, cfg: &SystemConfiguration) -> Vec<SystemConfiguration> {
    let mut per_component: Vec<Vec<ComponentConfiguration>> = Vec::with_capacity(sys.degree());
    for (comp, c) in sys.components.iter().zip(&cfg.components) {
        let Some(top) = c.stack.first() else {
            return Vec::new();
        };
        let mut options = Vec::new();
        for t in &comp.transitions {
            if t.from != c.state || &t.pop != top {
                continue;
            }
            let unread = match &t.read {
                None => c.unread.clone(),
                Some(r) => match c.unread.first() {
                    Some(next_sym) if next_sym == r => c.unread[1..].to_vec(),
                    _ => continue,
                },
            };
            let mut stack = t.push.clone();
            stack.extend_from_slice(&c.stack[1..]);
            options.push(ComponentConfiguration {
                state: t.to.clone(),
                unread,
                stack,
            });
        }
        if options.is_empty() {
            return Vec::new();
        }
        per_component.push(options);
    }

    // Cross product, first component varying slowest.
    let mut result = vec![SystemConfiguration {
        components: Vec::with_capacity(sys.degree()),
    }];
    for options in per_component {
        let mut grown = Vec::with_capacity(result.len() * options.len());
        for partial in &result {
            for opt in &options {
                let mut next = partial.clone();
                next.components.push(opt.clone());
                grown.push(next);
            }
        }
        result = grown;
    }
    result
}

/// All successor configurations of `cfg`, labelled with the kind of step
/// that produces them.
///
/// Communication has priority: when any query symbol is exposed the only
/// possible step is the communication step (one successor, or none when
/// blocked). Otherwise all lock-step usual successors are returned.
pub fn step_successors(sys: &PcpaSystem, cfg: &SystemConfiguration) -> (StepKind, Vec<SystemConfiguration>) {
    match communication_step(sys, cfg) {
        CommStep::NotPending => (StepKind::Usual, usual_step_successors(sys, cfg)),
        CommStep::Applied { next, .. } => (StepKind::Communication, vec![next]),
        CommStep::Blocked => (StepKind::Communication, Vec::new()),
    }
}

// ---------------------------------------------------------------------------
// Compiled fast path. The bounded search explores many thousands of
// configurations; it runs on an index-based representation and converts
// back to symbolic configurations only for witnesses.
// ---------------------------------------------------------------------------

pub(crate) type SymId = u32;
pub(crate) type LocalState = u32;

#[derive(Debug)]
pub(crate) struct CompiledTransition {
    pub read: Option<SymId>,
    pub to: LocalState,
    pub push: Vec<SymId>,
}

#[derive(Debug)]
pub(crate) struct CompiledComponent {
    pub state_names: Vec<StateId>,
    pub initial: LocalState,
    pub initial_stack: SymId,
    pub is_final: Vec<bool>,
    /// Applicable transitions keyed by (state, stack top).
    pub delta: BTreeMap<(LocalState, SymId), Vec<CompiledTransition>>,
}

#[derive(Debug)]
pub(crate) struct CompiledSystem {
    pub mode: Mode,
    pub symbol_names: Vec<Symbol>,
    pub symbol_ids: BTreeMap<Symbol, SymId>,
    pub comps: Vec<CompiledComponent>,
    /// Query target per symbol id, `None` for non-query symbols.
    pub query_target: Vec<Option<u32>>,
}

/// Per-component part of a compiled configuration. The unread suffix is
/// represented by the number of input symbols already consumed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct CompiledComponentConfig {
    pub state: LocalState,
    pub pos: u32,
    pub stack: Vec<SymId>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct CompiledConfig {
    pub comps: Vec<CompiledComponentConfig>,
}

impl CompiledSystem {
    /// Builds the indexed form of a system.
    ///
    /// Compilation is total: symbols or states a transition mentions
    /// without declaring are interned on the fly, so even systems that
    /// [`validate_system`](crate::system::validate_system) would reject
    /// execute without panicking (their defects simply behave as written).
    pub fn compile(sys: &PcpaSystem) -> CompiledSystem {
        struct Interner {
            names: Vec<Symbol>,
            ids: BTreeMap<Symbol, SymId>,
        }
        impl Interner {
            fn get(&mut self, s: &Symbol) -> SymId {
                if let Some(&id) = self.ids.get(s) {
                    return id;
                }
                let id = self.names.len() as SymId;
                self.names.push(s.clone());
                self.ids.insert(s.clone(), id);
                id
            }
        }
        let mut interner = Interner {
            names: Vec::new(),
            ids: BTreeMap::new(),
        };
        for s in sys.input_alphabet.iter().chain(&sys.stack_alphabet) {
            interner.get(s);
        }
        for q in sys.query_map.keys() {
            interner.get(q);
        }

        let comps: Vec<CompiledComponent> = sys
            .components
            .iter()
            .map(|comp| {
                let mut state_names: Vec<StateId> = comp.states.iter().cloned().collect();
                let mut state_id: BTreeMap<StateId, LocalState> = state_names
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i as LocalState))
                    .collect();
                let mut intern_state = |s: &StateId, names: &mut Vec<StateId>| {
                    if let Some(&id) = state_id.get(s) {
                        return id;
                    }
                    let id = names.len() as LocalState;
                    names.push(s.clone());
                    state_id.insert(s.clone(), id);
                    id
                };
                let initial = intern_state(&comp.initial, &mut state_names);
                let initial_stack = interner.get(&comp.initial_stack);
                let mut delta: BTreeMap<(LocalState, SymId), Vec<CompiledTransition>> =
                    BTreeMap::new();
                for t in &comp.transitions {
                    let from = intern_state(&t.from, &mut state_names);
                    let to = intern_state(&t.to, &mut state_names);
                    let key = (from, interner.get(&t.pop));
                    delta.entry(key).or_default().push(CompiledTransition {
                        read: t.read.as_ref().map(|r| interner.get(r)),
                        to,
                        push: t.push.iter().map(|p| interner.get(p)).collect(),
                    });
                }
                let is_final = state_names.iter().map(|s| comp.finals.contains(s)).collect();
                CompiledComponent {
                    initial,
                    initial_stack,
                    state_names,
                    is_final,
                    delta,
                }
            })
            .collect();

        let mut query_target = vec![None; interner.names.len()];
        for (q, &t) in &sys.query_map {
            let id = interner.ids[q] as usize;
            query_target[id] = Some(t as u32);
        }

        CompiledSystem {
            mode: sys.mode,
            symbol_names: interner.names,
            symbol_ids: interner.ids,
            comps,
            query_target,
        }
    }

    /// Converts a word to symbol ids; `None` if it mentions a symbol the
    /// system does not declare (such a word is trivially rejected).
    pub fn compile_word(&self, word: &[Symbol]) -> Option<Vec<SymId>> {
        word.iter().map(|s| self.symbol_ids.get(s).copied()).collect()
    }

    pub fn initial_config(&self) -> CompiledConfig {
        CompiledConfig {
            comps: self
                .comps
                .iter()
                .map(|c| CompiledComponentConfig {
                    state: c.initial,
                    pos: 0,
                    stack: vec![c.initial_stack],
                })
                .collect(),
        }
    }

    pub fn is_accepting(&self, cfg: &CompiledConfig, word_len: u32) -> bool {
        self.comps
            .iter()
            .zip(&cfg.comps)
            .all(|(comp, c)| c.pos == word_len && comp.is_final[c.state as usize])
    }

    fn query_of_top(&self, c: &CompiledComponentConfig) -> Option<u32> {
        c.stack
            .first()
            .and_then(|&top| self.query_target[top as usize])
    }

    /// Compiled analogue of [`communication_step`]; `None` when no query is
    /// pending, `Some(None)` when blocked.
    #[allow(clippy::option_option)]
    pub fn comm_step(&self, cfg: &CompiledConfig) -> Option<Option<CompiledConfig>> {
        let pending: Vec<(usize, usize)> = cfg
            .comps
            .iter()
            .enumerate()
            .filter_map(|(i, c)| self.query_of_top(c).map(|j| (i, j as usize)))
            .collect();
        if pending.is_empty() {
            return None;
        }
        let transfers: Vec<(usize, usize)> = pending
            .iter()
            .copied()
            .filter(|&(_, j)| self.query_of_top(&cfg.comps[j]).is_none())
            .collect();
        if transfers.is_empty() {
            return Some(None);
        }
        let mut next = cfg.clone();
        for &(i, j) in &transfers {
            let mut stack = cfg.comps[j].stack.clone();
            stack.extend_from_slice(&cfg.comps[i].stack[1..]);
            next.comps[i].stack = stack;
        }
        if self.mode == Mode::Returning {
            for &(_, j) in &transfers {
                next.comps[j].stack = vec![self.comps[j].initial_stack];
            }
        }
        Some(Some(next))
    }

    pub fn usual_successors(&self, cfg: &CompiledConfig, word: &[SymId]) -> Vec<CompiledConfig> {
        let mut per_component: Vec<Vec<CompiledComponentConfig>> = Vec::with_capacity(self.comps.len());
        for (comp, c) in self.comps.iter().zip(&cfg.comps) {
            let Some(&top) = c.stack.first() else {
                return Vec::new();
            };
            let Some(ts) = comp.delta.get(&(c.state, top)) else {
                return Vec::new();
            };
            let mut options = Vec::new();
            for t in ts {
                let pos = match t.read {
                    None => c.pos,
                    Some(r) => {
                        if word.get(c.pos as usize) == Some(&r) {
                            c.pos + 1
                        } else {
                            continue;
                        }
                    }
                };
                let mut stack = t.push.clone();
                stack.extend_from_slice(&c.stack[1..]);
                options.push(CompiledComponentConfig {
                    state: t.to,
                    pos,
                    stack,
                });
            }
            if options.is_empty() {
                return Vec::new();
            }
            per_component.push(options);
        }

        let mut result = vec![CompiledConfig {
            comps: Vec::with_capacity(self.comps.len()),
        }];
        for options in per_component {
            let mut grown = Vec::with_capacity(result.len() * options.len());
            for partial in &result {
                for opt in &options {
                    let mut next = partial.clone();
                    next.comps.push(opt.clone());
                    grown.push(next);
                }
            }
            result = grown;
        }
        result
    }

    pub fn step_successors(
        &self,
        cfg: &CompiledConfig,
        word: &[SymId],
    ) -> (StepKind, Vec<CompiledConfig>) {
        match self.comm_step(cfg) {
            None => (StepKind::Usual, self.usual_successors(cfg, word)),
            Some(Some(next)) => (StepKind::Communication, vec![next]),
            Some(None) => (StepKind::Communication, Vec::new()),
        }
    }

    /// Converts a compiled configuration back to the symbolic form.
    pub fn decompile(&self, cfg: &CompiledConfig, word: &[SymId]) -> SystemConfiguration {
        SystemConfiguration {
            components: self
                .comps
                .iter()
                .zip(&cfg.comps)
                .map(|(comp, c)| ComponentConfiguration {
                    state: comp.state_names[c.state as usize].clone(),
                    unread: word[c.pos as usize..]
                        .iter()
                        .map(|&s| self.symbol_names[s as usize].clone())
                        .collect(),
                    stack: c
                        .stack
                        .iter()
                        .map(|&s| self.symbol_names[s as usize].clone())
                        .collect(),
                })
                .collect(),
        }
    }
}
