//! Structure-preserving transforms between system classes.
//!
//! Three constructions are provided, each with the preconditions it needs:
//!
//! * [`to_known_communication`] rewrites a returning system into an
//!   equivalent one in which every component *knows* when it has served as
//!   a communication source: each state carries a switch flag that is
//!   raised exactly on the component's first move after its stack was
//!   reset by a query. The construction simulates every original move in
//!   a two-move rhythm — an ε half-step that inspects the stack top,
//!   followed by a half-step that fires one original transition — and
//!   renames each component's own bottom symbol internally so that the
//!   bare bottom symbol can only ever surface through a reset.
//! * [`compile_to_multihead`] serializes a *centralized* returning system
//!   in known-communication shape into a single-stack machine with one
//!   head per component. The master is simulated directly; queried
//!   components are replayed segment by segment on demand, with the replay
//!   end chosen nondeterministically (wrong choices strand the replayed
//!   component when it is later resumed). The serialization does not
//!   enforce the lock-step move counting of the source system, so for
//!   systems whose components encode constraints *only* through stack
//!   content at query time — the class the shipped fixtures live in — the
//!   compiled machine is equivalent; the comparison harness checks this
//!   empirically.
//! * [`decompose`] splits a *simple* returning system (pairwise disjoint
//!   supplier sets, no querier ever queried) into one centralized system
//!   per querier; the original language is the intersection of the part
//!   languages, which [`crate::harness::intersection_check`] verifies on
//!   samples.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::multihead::{MhTransition, MhpdaMachine};
use crate::symbol::{StateId, Symbol};
use crate::system::{
    classify, validate_system, KcPhase, KcState, Mode, PcpaSystem, PdaComponent, Transition,
    ValidationError,
};

/// Why a transform refused its input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    /// The input system fails structural validation.
    InvalidSystem {
        /// The violations found.
        violations: Vec<ValidationError>,
    },
    /// The transform requires returning mode.
    UnsupportedMode {
        /// The mode the system actually has.
        found: Mode,
    },
    /// Compilation requires a centralized system (only the first component
    /// may query).
    NotCentralized {
        /// 0-based indices of all querying components.
        queriers: BTreeSet<usize>,
    },
    /// Compilation requires known-communication shape (per-state
    /// annotations on every component).
    MissingKnownCommunication {
        /// First component lacking annotations (0-based).
        component: usize,
    },
    /// Decomposition requires a simple system.
    NotSimple {
        /// The simplicity violations found.
        violations: Vec<SimplicityViolation>,
    },
    /// Decomposition requires at least one querier.
    NoQueriers,
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::InvalidSystem { violations } => {
                write!(f, "system fails validation with {} violation(s)", violations.len())
            }
            TransformError::UnsupportedMode { found } => {
                write!(f, "transform requires returning mode, system is {found}")
            }
            TransformError::NotCentralized { queriers } => {
                write!(f, "system is not centralized; querying components: ")?;
                for (i, q) in queriers.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", q + 1)?;
                }
                Ok(())
            }
            TransformError::MissingKnownCommunication { component } => write!(
                f,
                "component {} carries no known-communication annotations",
                component + 1
            ),
            TransformError::NotSimple { violations } => {
                write!(f, "system is not simple ({} violation(s))", violations.len())
            }
            TransformError::NoQueriers => write!(f, "system has no querying component"),
        }
    }
}

impl core::error::Error for TransformError {}

fn require_valid(sys: &PcpaSystem) -> Result<(), TransformError> {
    let report = validate_system(sys);
    if report.is_valid() {
        Ok(())
    } else {
        Err(TransformError::InvalidSystem {
            violations: report.violations,
        })
    }
}

fn require_returning(sys: &PcpaSystem) -> Result<(), TransformError> {
    if sys.mode == Mode::Returning {
        Ok(())
    } else {
        Err(TransformError::UnsupportedMode { found: sys.mode })
    }
}

/// Phase tags used when generating state names; uniform length keeps the
/// generated names collision-free (equal names imply equal base and tag).
const TAG_INITIAL: &str = "'ini";
const TAG_PRIMED1: &str = "'pr1";
const TAG_PRIMED2: &str = "'pr2";
const TAG_SIM: [[&str; 2]; 2] = [["'s10", "'s11"], ["'s20", "'s21"]];

/// Rewrites a returning system into known-communication shape.
///
/// Every component simulates its original behaviour in a two-move rhythm:
/// from a `sim1` state it performs an ε half-step that inspects the stack
/// top, and from a `sim2` state it fires exactly one original transition
/// (with the component's own bottom symbol renamed on both pop and push).
/// Because pushes are renamed, the bare bottom symbol can only surface
/// after a communication reset; the inspecting half-step that finds it
/// re-establishes the renamed floor and raises the switch flag of the
/// state it enters — making the component aware, on its first move after
/// serving a query, that it was queried. Queriers additionally convert the
/// renamed floor symbols they receive from other components back to the
/// bare form their original transitions expect.
///
/// The result has `4·|Q| + 3` states per component (the four
/// simulation copies of each original state plus three start-up states)
/// and a stack alphabet larger by exactly one fresh symbol per component.
/// Query symbols, the query map, the input alphabet, the mode and each
/// component's initial stack symbol are unchanged. Because the renaming
/// never changes the *shape* of a push, transferred stack contents match
/// the original system's transfers symbol for symbol up to the renaming —
/// in particular a component that empties its stack is stuck in both
/// systems alike until (and unless) a communication reset restores its
/// bottom symbol.
pub fn to_known_communication(sys: &PcpaSystem) -> Result<PcpaSystem, TransformError> {
    require_valid(sys)?;
    require_returning(sys)?;
    let report = validate_system(sys);

    let n = sys.degree();
    let query_set: BTreeSet<&Symbol> = sys.query_map.keys().collect();

    // One fresh renamed floor symbol per component.
    let mut taken: BTreeSet<Symbol> = sys
        .input_alphabet
        .iter()
        .chain(&sys.stack_alphabet)
        .cloned()
        .collect();
    let mut primed: Vec<Symbol> = Vec::with_capacity(n);
    for (i, comp) in sys.components.iter().enumerate() {
        let mut name = format!("{}'d{}", comp.initial_stack, i + 1);
        while taken.contains(&Symbol::new(&name).expect("generated symbol is valid")) {
            name.push('\'');
        }
        let s = Symbol::new(&name).expect("generated symbol is valid");
        taken.insert(s.clone());
        primed.push(s);
    }

    let mut stack_alphabet = sys.stack_alphabet.clone();
    stack_alphabet.extend(primed.iter().cloned());

    let components = sys
        .components
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            let bottom = &comp.initial_stack;
            let floor = &primed[i];
            let rename = |s: &Symbol| -> Symbol {
                if s == bottom {
                    floor.clone()
                } else {
                    s.clone()
                }
            };
            let named = |base: &StateId, tag: &str| -> StateId {
                StateId::new(&format!("{base}{tag}")).expect("generated state is valid")
            };
            let sim = |base: &StateId, phase: usize, switch: usize| named(base, TAG_SIM[phase][switch]);

            let ini = named(&comp.initial, TAG_INITIAL);
            let pr1 = named(&comp.initial, TAG_PRIMED1);
            let pr2 = named(&comp.initial, TAG_PRIMED2);

            let mut states: BTreeSet<StateId> = BTreeSet::new();
            let mut kc: BTreeMap<StateId, KcState> = BTreeMap::new();
            let add = |st: StateId, base: &StateId, phase: KcPhase, switch: bool,
                       states: &mut BTreeSet<StateId>, kc: &mut BTreeMap<StateId, KcState>| {
                states.insert(st.clone());
                kc.insert(
                    st,
                    KcState {
                        base: base.clone(),
                        phase,
                        switch,
                    },
                );
            };
            add(ini.clone(), &comp.initial, KcPhase::Initial, false, &mut states, &mut kc);
            add(pr1.clone(), &comp.initial, KcPhase::Primed1, false, &mut states, &mut kc);
            add(pr2.clone(), &comp.initial, KcPhase::Primed2, false, &mut states, &mut kc);
            for q in &comp.states {
                add(sim(q, 0, 0), q, KcPhase::Sim1, false, &mut states, &mut kc);
                add(sim(q, 0, 1), q, KcPhase::Sim1, true, &mut states, &mut kc);
                add(sim(q, 1, 0), q, KcPhase::Sim2, false, &mut states, &mut kc);
                add(sim(q, 1, 1), q, KcPhase::Sim2, true, &mut states, &mut kc);
            }

            // Symbols the inspecting half-step may pass over: everything
            // except query symbols and the component's own bare bottom
            // symbol (whose appearance must be handled by the
            // reset-detecting rule alone), plus the renamed floor.
            let peek_set: Vec<Symbol> = sys
                .stack_alphabet
                .iter()
                .filter(|s| *s != bottom && !query_set.contains(s))
                .cloned()
                .chain([floor.clone()])
                .collect();

            let mut transitions: Vec<Transition> = Vec::new();
            // Start-up: convert the initial bare bottom to the renamed
            // floor, then idle into the rhythm.
            transitions.push(Transition::new(ini.clone(), None, bottom.clone(), pr1.clone(), vec![floor.clone()]));
            transitions.push(Transition::new(pr1.clone(), None, floor.clone(), pr2.clone(), vec![floor.clone()]));
            transitions.push(Transition::new(pr2.clone(), None, floor.clone(), sim(&comp.initial, 1, 0), vec![floor.clone()]));
            // Inspecting half-step: pass over an unremarkable top.
            for q in &comp.states {
                for switch in 0..2usize {
                    for x in &peek_set {
                        transitions.push(Transition::new(
                            sim(q, 0, switch),
                            None,
                            x.clone(),
                            sim(q, 1, 0),
                            vec![x.clone()],
                        ));
                    }
                }
            }
            // Reset detection: a bare bottom symbol can only come from a
            // communication reset; re-establish the floor and raise the
            // switch.
            for q in &comp.states {
                for switch in 0..2usize {
                    transitions.push(Transition::new(
                        sim(q, 0, switch),
                        None,
                        bottom.clone(),
                        sim(q, 1, 1),
                        vec![floor.clone()],
                    ));
                }
            }
            // Queriers receive other components' stacks whose floor
            // carries that component's renamed bottom; convert it back to
            // the bare form the original transitions expect.
            if !report.query_pushers[i].is_empty() {
                for (j, other) in sys.components.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    for q in &comp.states {
                        for switch in 0..2usize {
                            transitions.push(Transition::new(
                                sim(q, 0, switch),
                                None,
                                primed[j].clone(),
                                sim(q, 1, 0),
                                vec![other.initial_stack.clone()],
                            ));
                        }
                    }
                }
            }
            // Simulating half-step: fire one original transition, renamed.
            for switch in 0..2usize {
                for t in &comp.transitions {
                    transitions.push(Transition::new(
                        sim(&t.from, 1, switch),
                        t.read.clone(),
                        rename(&t.pop),
                        sim(&t.to, 0, 0),
                        t.push.iter().map(&rename).collect(),
                    ));
                }
            }

            let mut finals: BTreeSet<StateId> = BTreeSet::new();
            for q in &comp.finals {
                finals.insert(sim(q, 0, 0));
                finals.insert(sim(q, 0, 1));
                finals.insert(sim(q, 1, 0));
                finals.insert(sim(q, 1, 1));
            }
            if comp.finals.contains(&comp.initial) {
                finals.insert(ini.clone());
                finals.insert(pr1.clone());
                finals.insert(pr2.clone());
            }

            PdaComponent {
                states,
                initial: ini,
                initial_stack: comp.initial_stack.clone(),
                finals,
                transitions,
                kc_states: Some(kc),
            }
        })
        .collect();

    Ok(PcpaSystem {
        mode: Mode::Returning,
        input_alphabet: sys.input_alphabet.clone(),
        stack_alphabet,
        components,
        query_map: sys.query_map.clone(),
    })
}

// ---------------------------------------------------------------------------
// Compilation to a multi-head machine.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum TagEntry {
    At(StateId),
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Tag {
    entries: Vec<TagEntry>,
    active: usize,
}

struct TagRegistry {
    names: BTreeMap<Tag, StateId>,
    used: BTreeSet<StateId>,
}

impl TagRegistry {
    fn new() -> Self {
        TagRegistry {
            names: BTreeMap::new(),
            used: BTreeSet::new(),
        }
    }

    fn intern(&mut self, tag: &Tag) -> StateId {
        if let Some(name) = self.names.get(tag) {
            return name.clone();
        }
        let mut candidate = String::new();
        for (i, e) in tag.entries.iter().enumerate() {
            if i > 0 {
                candidate.push_str("__");
            }
            match e {
                TagEntry::At(s) => candidate.push_str(s.as_str()),
                TagEntry::Done => candidate.push_str(&format!("End_{}", i + 1)),
            }
        }
        candidate.push_str(&format!("__a{}", tag.active + 1));
        let mut name = StateId::new(&candidate).expect("generated state is valid");
        while self.used.contains(&name) {
            candidate.push('\'');
            name = StateId::new(&candidate).expect("generated state is valid");
        }
        self.used.insert(name.clone());
        self.names.insert(tag.clone(), name.clone());
        name
    }
}

/// Compiles a centralized returning system in known-communication shape
/// into an equivalent multi-head single-stack machine.
///
/// The machine has one head per component and simulates one component at a
/// time, recording the others' states in its own control state:
///
/// * The master (component 1) is simulated directly on the stack, its
///   input progress tracked by head 1.
/// * When the master exposes a query symbol, the machine pops it, pushes
///   the queried component's bare bottom symbol as a fresh floor and
///   switches to replaying that component from where it last froze — the
///   replay's first move is precisely the reset-detecting rule of the
///   known-communication shape popping that floor. The replay end is
///   guessed nondeterministically at inspection-phase states with a
///   lowered switch; the content produced so far then sits exactly where
///   the query symbol stood, and the queried component freezes in its
///   guessed state. Too-early guesses leave the component in a state from
///   which its later resumption cannot finish, so they contribute nothing.
/// * Once the master finishes (final state, head 1 at the endmarker), the
///   remaining components are resumed in order on fresh floors and must
///   each finish the same way; the machine accepts in the unique control
///   state in which every component has finished.
///
/// Requirements: the system validates, is returning, is centralized (only
/// component 1 queries; systems without queries count), and every
/// component carries known-communication annotations (see
/// [`to_known_communication`]).
pub fn compile_to_multihead(sys: &PcpaSystem) -> Result<MhpdaMachine, TransformError> {
    require_valid(sys)?;
    require_returning(sys)?;
    for (i, comp) in sys.components.iter().enumerate() {
        if comp.kc_states.is_none() {
            return Err(TransformError::MissingKnownCommunication { component: i });
        }
    }
    let class = classify(sys);
    if !class.centralized {
        return Err(TransformError::NotCentralized {
            queriers: class.queriers,
        });
    }

    let n = sys.degree();
    let query_set: BTreeSet<&Symbol> = sys.query_map.keys().collect();

    // Fresh endmarker.
    let mut end_name = "$".to_owned();
    let taken: BTreeSet<&Symbol> = sys.input_alphabet.iter().chain(&sys.stack_alphabet).collect();
    while taken.contains(&Symbol::new(&end_name).expect("generated symbol is valid")) {
        end_name.push('\'');
    }
    let endmarker = Symbol::new(&end_name).expect("generated symbol is valid");

    // Per-component transition index by source state.
    let by_from: Vec<BTreeMap<&StateId, Vec<&Transition>>> = sys
        .components
        .iter()
        .map(|comp| {
            let mut m: BTreeMap<&StateId, Vec<&Transition>> = BTreeMap::new();
            for t in &comp.transitions {
                m.entry(&t.from).or_default().push(t);
            }
            m
        })
        .collect();

    let freezable = |comp: usize, state: &StateId| -> bool {
        let kc = sys.components[comp]
            .kc_states
            .as_ref()
            .expect("checked above");
        kc.get(state)
            .is_some_and(|k| k.phase == KcPhase::Sim1 && !k.switch)
    };

    let mut registry = TagRegistry::new();
    let initial_tag = Tag {
        entries: sys
            .components
            .iter()
            .map(|c| TagEntry::At(c.initial.clone()))
            .collect(),
        active: 0,
    };
    let final_tag = Tag {
        entries: vec![TagEntry::Done; n],
        active: n - 1,
    };
    let initial_name = registry.intern(&initial_tag);

    let mut transitions: Vec<MhTransition> = Vec::new();
    let mut seen: BTreeSet<Tag> = BTreeSet::new();
    let mut worklist: VecDeque<Tag> = VecDeque::new();
    seen.insert(initial_tag.clone());
    worklist.push_back(initial_tag);

    while let Some(tag) = worklist.pop_front() {
        let from_name = registry.intern(&tag);
        let a = tag.active;
        let TagEntry::At(ref p) = tag.entries[a] else {
            continue; // every component finished: the accepting tag
        };
        let done = tag
            .entries
            .iter()
            .take_while(|e| matches!(e, TagEntry::Done))
            .count();
        debug_assert!(done == 0 || done == a, "finished components form a prefix");

        let base_reads = |own: Option<Symbol>| -> Vec<Option<Symbol>> {
            let mut reads: Vec<Option<Symbol>> = vec![None; n];
            for r in reads.iter_mut().take(done) {
                *r = Some(endmarker.clone());
            }
            reads[a] = own;
            reads
        };
        let emit = |from: StateId,
                    reads: Vec<Option<Symbol>>,
                    pop: Symbol,
                    to_tag: &Tag,
                    advances: Vec<bool>,
                    push: Vec<Symbol>,
                    registry: &mut TagRegistry,
                    seen: &mut BTreeSet<Tag>,
                    worklist: &mut VecDeque<Tag>,
                    transitions: &mut Vec<MhTransition>| {
            let to = registry.intern(to_tag);
            if seen.insert(to_tag.clone()) {
                worklist.push_back(to_tag.clone());
            }
            transitions.push(MhTransition {
                from,
                reads,
                pop,
                to,
                advances,
                push,
            });
        };

        // Simulate one move of the active component.
        if let Some(ts) = by_from[a].get(p) {
            for t in ts {
                if query_set.contains(&t.pop) {
                    continue; // served by the query rule below
                }
                let mut advances = vec![false; n];
                advances[a] = t.read.is_some();
                let mut to_tag = tag.clone();
                to_tag.entries[a] = TagEntry::At(t.to.clone());
                emit(
                    from_name.clone(),
                    base_reads(t.read.clone()),
                    t.pop.clone(),
                    &to_tag,
                    advances,
                    t.push.clone(),
                    &mut registry,
                    &mut seen,
                    &mut worklist,
                    &mut transitions,
                );
            }
        }

        // Master exposes a query symbol: seed the target's floor and
        // switch to replaying it.
        if a == 0 && done == 0 {
            for (k, &target) in &sys.query_map {
                if target == 0 || target >= n {
                    continue; // self-addressed queries block forever
                }
                let mut to_tag = tag.clone();
                to_tag.active = target;
                emit(
                    from_name.clone(),
                    base_reads(None),
                    k.clone(),
                    &to_tag,
                    vec![false; n],
                    vec![sys.components[target].initial_stack.clone()],
                    &mut registry,
                    &mut seen,
                    &mut worklist,
                    &mut transitions,
                );
            }
        }

        // Replay end: freeze the replayed component and hand the produced
        // stack content to the master, leaving the stack untouched.
        if a != 0 && done == 0 && freezable(a, p) {
            let own_bottom = &sys.components[a].initial_stack;
            for x in &sys.stack_alphabet {
                if query_set.contains(x) || x == own_bottom {
                    continue;
                }
                let mut to_tag = tag.clone();
                to_tag.active = 0;
                emit(
                    from_name.clone(),
                    base_reads(None),
                    x.clone(),
                    &to_tag,
                    vec![false; n],
                    vec![x.clone()],
                    &mut registry,
                    &mut seen,
                    &mut worklist,
                    &mut transitions,
                );
            }
        }

        // Promotion: the active component has finished; move on to the
        // next one (seeding its floor), or accept after the last.
        if done == a && sys.components[a].finals.contains(p) {
            for x in &sys.stack_alphabet {
                if query_set.contains(x) {
                    continue;
                }
                let mut to_tag = tag.clone();
                to_tag.entries[a] = TagEntry::Done;
                let push = if a + 1 < n {
                    to_tag.active = a + 1;
                    vec![sys.components[a + 1].initial_stack.clone(), x.clone()]
                } else {
                    vec![x.clone()]
                };
                emit(
                    from_name.clone(),
                    base_reads(Some(endmarker.clone())),
                    x.clone(),
                    &to_tag,
                    vec![false; n],
                    push,
                    &mut registry,
                    &mut seen,
                    &mut worklist,
                    &mut transitions,
                );
            }
        }
    }

    let final_name = registry.intern(&final_tag);

    Ok(MhpdaMachine {
        heads: n,
        input_alphabet: sys.input_alphabet.clone(),
        stack_alphabet: sys.stack_alphabet.clone(),
        endmarker,
        states: registry.used.clone(),
        initial: initial_name,
        initial_stack: sys.components[0].initial_stack.clone(),
        finals: [final_name].into_iter().collect(),
        transitions,
    })
}

// ---------------------------------------------------------------------------
// Query structure, simplicity, decomposition.
// ---------------------------------------------------------------------------

/// Who queries whom, derived from the transitions that push query symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGraph {
    /// `targets[i]`: components whose stack component `i` can request.
    pub targets: Vec<BTreeSet<usize>>,
    /// `requesters[i]`: components that can request component `i`'s stack.
    pub requesters: Vec<BTreeSet<usize>>,
}

impl QueryGraph {
    /// Components that can issue at least one query.
    pub fn queriers(&self) -> BTreeSet<usize> {
        self.targets
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// Components whose stack at least one other (or the same) component
    /// can request.
    pub fn queried(&self) -> BTreeSet<usize> {
        self.requesters
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Computes the query graph of a system.
///
/// Edges follow the transitions: `i → j` when some transition of `i`
/// pushes a query symbol mapped to `j`. Query symbols with out-of-range
/// targets (a validation error) contribute no edges.
pub fn query_graph(sys: &PcpaSystem) -> QueryGraph {
    let n = sys.degree();
    let report = validate_system(sys);
    let mut targets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut requesters: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, pushes) in report.query_pushers.iter().enumerate() {
        for q in pushes {
            if let Some(&j) = sys.query_map.get(q) {
                if j < n {
                    targets[i].insert(j);
                    requesters[j].insert(i);
                }
            }
        }
    }
    QueryGraph {
        targets,
        requesters,
    }
}

/// A way in which a system fails to be simple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SimplicityViolation {
    /// Two distinct components can request the same component's stack.
    SharedTarget {
        /// Smaller requester index (0-based).
        first: usize,
        /// Larger requester index (0-based).
        second: usize,
        /// The shared target (0-based).
        target: usize,
    },
    /// A component that issues queries can itself be queried.
    QuerierQueried {
        /// The querier (0-based).
        querier: usize,
        /// A component that can request the querier's stack (0-based).
        requester: usize,
    },
}

impl fmt::Display for SimplicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplicityViolation::SharedTarget {
                first,
                second,
                target,
            } => write!(
                f,
                "components {} and {} both query component {}",
                first + 1,
                second + 1,
                target + 1
            ),
            SimplicityViolation::QuerierQueried { querier, requester } => write!(
                f,
                "component {} issues queries but is itself queried by component {}",
                querier + 1,
                requester + 1
            ),
        }
    }
}

/// Result of [`is_simple`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    /// All violations found, in a deterministic order.
    pub violations: Vec<SimplicityViolation>,
}

impl SimplicityReport {
    /// True when the system is simple.
    pub fn is_simple(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the two simplicity conditions of a returning system: no two
/// components query the same component, and no querier is ever queried.
pub fn is_simple(sys: &PcpaSystem) -> Result<SimplicityReport, TransformError> {
    require_returning(sys)?;
    let graph = query_graph(sys);
    let mut violations = Vec::new();
    for (t, reqs) in graph.requesters.iter().enumerate() {
        let reqs: Vec<usize> = reqs.iter().copied().collect();
        for i in 0..reqs.len() {
            for j in (i + 1)..reqs.len() {
                violations.push(SimplicityViolation::SharedTarget {
                    first: reqs[i],
                    second: reqs[j],
                    target: t,
                });
            }
        }
    }
    let queriers = graph.queriers();
    for &q in &queriers {
        for &r in &graph.requesters[q] {
            violations.push(SimplicityViolation::QuerierQueried {
                querier: q,
                requester: r,
            });
        }
    }
    Ok(SimplicityReport { violations })
}

/// Splits a simple returning system into one centralized system per
/// querier.
///
/// Each part consists of a querier (as its first component, the master)
/// followed by the components it queries, in ascending original order;
/// components neither querying nor queried are appended to the first
/// part. Alphabets and mode are shared; each part keeps exactly the query
/// symbols addressing its own members, re-targeted to the new indices.
/// The language of the original system is the intersection of the part
/// languages, which [`crate::harness::intersection_check`] verifies on
/// bounded samples.
pub fn decompose(sys: &PcpaSystem) -> Result<Vec<PcpaSystem>, TransformError> {
    require_valid(sys)?;
    require_returning(sys)?;
    let report = is_simple(sys)?;
    if !report.is_simple() {
        return Err(TransformError::NotSimple {
            violations: report.violations,
        });
    }
    let graph = query_graph(sys);
    let queriers: Vec<usize> = graph.queriers().into_iter().collect();
    if queriers.is_empty() {
        return Err(TransformError::NoQueriers);
    }

    let mut memberships: Vec<Vec<usize>> = queriers
        .iter()
        .map(|&q| {
            let mut members = vec![q];
            members.extend(graph.targets[q].iter().copied());
            members
        })
        .collect();
    let covered: BTreeSet<usize> = memberships.iter().flatten().copied().collect();
    for i in 0..sys.degree() {
        if !covered.contains(&i) {
            memberships[0].push(i);
        }
    }

    Ok(memberships
        .into_iter()
        .map(|members| {
            let position: BTreeMap<usize, usize> = members
                .iter()
                .enumerate()
                .map(|(new, &old)| (old, new))
                .collect();
            let query_map: BTreeMap<Symbol, usize> = sys
                .query_map
                .iter()
                .filter_map(|(k, &t)| position.get(&t).map(|&new| (k.clone(), new)))
                .collect();
            PcpaSystem {
                mode: sys.mode,
                input_alphabet: sys.input_alphabet.clone(),
                stack_alphabet: sys.stack_alphabet.clone(),
                components: members
                    .iter()
                    .map(|&old| sys.components[old].clone())
                    .collect(),
                query_map,
            }
        })
        .collect())
}

/// Decomposes a simple returning system and compiles every part to a
/// multi-head machine (via the known-communication shape).
///
/// The original language is then the intersection of the machines'
/// languages, over words the bounded searches can decide.
pub fn decompose_to_multihead(sys: &PcpaSystem) -> Result<Vec<MhpdaMachine>, TransformError> {
    decompose(sys)?
        .iter()
        .map(|part| compile_to_multihead(&to_known_communication(part)?))
        .collect()
}
