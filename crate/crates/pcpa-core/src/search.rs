//! Bounded breadth-first membership search with honest three-valued
//! verdicts.
//!
//! Configuration spaces of communicating pushdown systems are infinite in
//! general (stacks grow without bound), so membership is explored
//! breadth-first under two resource limits: a maximum step depth and a
//! maximum number of distinct configurations. The search never guesses:
//!
//! * [`SearchOutcome::Accepted`] comes with a shortest witness run,
//! * [`SearchOutcome::Rejected`] means the *entire* reachable configuration
//!   space was exhausted without meeting either limit,
//! * [`SearchOutcome::Unknown`] means a limit truncated the exploration
//!   before an accepting configuration was found.
//!
//! Because rejection requires full exhaustion, enlarging the limits can
//! only turn `Unknown` into `Accepted` or `Rejected`; it can never flip
//! `Accepted` and `Rejected` into each other. The exploration order is
//! deterministic: successors are enqueued in the order the step functions
//! produce them, and all collections iterate deterministically.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::step::{CompiledSystem, StepKind, SystemConfiguration};
use crate::symbol::Symbol;
use crate::system::PcpaSystem;

/// Resource limits for the bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum run length in steps (depth of the breadth-first search).
    pub max_steps: u32,
    /// Maximum number of distinct configurations to keep.
    pub max_configs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_steps: 10_000,
            max_configs: 100_000,
        }
    }
}

impl SearchLimits {
    /// Limits with the given bounds.
    pub fn new(max_steps: u32, max_configs: usize) -> Self {
        SearchLimits {
            max_steps,
            max_configs,
        }
    }
}

/// Three-valued outcome of a bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchOutcome {
    /// An accepting configuration was reached; the verdict carries a
    /// shortest witness run.
    Accepted,
    /// Every reachable configuration was explored and none accepts.
    Rejected,
    /// A resource limit truncated the exploration before acceptance.
    Unknown,
}

impl SearchOutcome {
    /// Canonical lower-case token used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            SearchOutcome::Accepted => "accepted",
            SearchOutcome::Rejected => "rejected",
            SearchOutcome::Unknown => "unknown",
        }
    }
}

impl core::fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exploration statistics reported alongside every verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Number of distinct configurations discovered.
    pub explored: usize,
    /// Maximum size the frontier queue reached.
    pub frontier_peak: usize,
    /// True when a successor beyond the step limit was cut off.
    pub step_bound_hit: bool,
    /// True when the configuration limit prevented storing a successor.
    pub config_bound_hit: bool,
}

/// A witness run: the configurations visited and the kind of each step.
///
/// `kinds[k]` labels the step from `configurations[k]` to
/// `configurations[k + 1]`; `kinds` is therefore one element shorter than
/// `configurations`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace<C> {
    /// Visited configurations, starting with the initial one.
    pub configurations: Vec<C>,
    /// Step kinds between consecutive configurations.
    pub kinds: Vec<StepKind>,
}

impl<C> Trace<C> {
    /// Number of steps in the witness run.
    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    /// True for a zero-step run (the initial configuration accepts).
    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }
}

/// Outcome, optional witness and statistics of one bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<C> {
    /// The three-valued outcome.
    pub outcome: SearchOutcome,
    /// A shortest accepting run; present exactly when `outcome` is
    /// [`SearchOutcome::Accepted`].
    pub witness: Option<Trace<C>>,
    /// Exploration statistics.
    pub stats: SearchStats,
}

impl<C> Verdict<C> {
    /// Maps the configuration type of the verdict, preserving everything
    /// else.
    pub fn map<D>(self, mut f: impl FnMut(&C) -> D) -> Verdict<D> {
        Verdict {
            outcome: self.outcome,
            witness: self.witness.map(|t| Trace {
                configurations: t.configurations.iter().map(&mut f).collect(),
                kinds: t.kinds,
            }),
            stats: self.stats,
        }
    }
}

struct Node<C> {
    config: Rc<C>,
    parent: usize,
    kind: StepKind,
    depth: u32,
}

/// Deterministic bounded breadth-first search over an arbitrary
/// configuration type.
///
/// `successors` must return all one-step successors of a configuration
/// together with the kind of step that produces them; `accepting` is
/// checked on every configuration when it is dequeued, so a reported
/// witness is a shortest accepting run. Nodes at the depth limit are still
/// expanded to find out whether anything unexplored lies beyond them (which
/// would make a negative answer untrustworthy), but their successors are
/// not enqueued.
pub(crate) fn bounded_bfs<C, FS, FA>(
    initial: C,
    limits: &SearchLimits,
    mut successors: FS,
    mut accepting: FA,
) -> Verdict<Rc<C>>
where
    C: Ord,
    FS: FnMut(&C) -> (StepKind, Vec<C>),
    FA: FnMut(&C) -> bool,
{
    let mut stats = SearchStats::default();

    if limits.max_configs == 0 {
        stats.config_bound_hit = true;
        return Verdict {
            outcome: SearchOutcome::Unknown,
            witness: None,
            stats,
        };
    }

    let mut nodes: Vec<Node<C>> = Vec::new();
    let mut visited: BTreeMap<Rc<C>, usize> = BTreeMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let root = Rc::new(initial);
    nodes.push(Node {
        config: Rc::clone(&root),
        parent: usize::MAX,
        kind: StepKind::Usual,
        depth: 0,
    });
    visited.insert(root, 0);
    queue.push_back(0);
    stats.frontier_peak = 1;

    let mut accepted_at: Option<usize> = None;

    while let Some(idx) = queue.pop_front() {
        let depth = nodes[idx].depth;
        if accepting(&nodes[idx].config) {
            accepted_at = Some(idx);
            break;
        }
        let (kind, succs) = successors(&nodes[idx].config);
        for succ in succs {
            if visited.contains_key(&succ) {
                continue;
            }
            if depth == limits.max_steps {
                // The successor is new but lies beyond the depth limit.
                stats.step_bound_hit = true;
                continue;
            }
            if visited.len() == limits.max_configs {
                stats.config_bound_hit = true;
                continue;
            }
            let rc = Rc::new(succ);
            let node_idx = nodes.len();
            nodes.push(Node {
                config: Rc::clone(&rc),
                parent: idx,
                kind,
                depth: depth + 1,
            });
            visited.insert(rc, node_idx);
            queue.push_back(node_idx);
            if queue.len() > stats.frontier_peak {
                stats.frontier_peak = queue.len();
            }
        }
    }

    stats.explored = nodes.len();

    match accepted_at {
        Some(idx) => {
            let mut configurations: Vec<Rc<C>> = Vec::new();
            let mut kinds: Vec<StepKind> = Vec::new();
            let mut cur = idx;
            loop {
                configurations.push(Rc::clone(&nodes[cur].config));
                if nodes[cur].parent == usize::MAX {
                    break;
                }
                kinds.push(nodes[cur].kind);
                cur = nodes[cur].parent;
            }
            configurations.reverse();
            kinds.reverse();
            Verdict {
                outcome: SearchOutcome::Accepted,
                witness: Some(Trace {
                    configurations,
                    kinds,
                }),
                stats,
            }
        }
        None => Verdict {
            outcome: if stats.step_bound_hit || stats.config_bound_hit {
                SearchOutcome::Unknown
            } else {
                SearchOutcome::Rejected
            },
            witness: None,
            stats,
        },
    }
}

/// Decides bounded membership of `word` in the language of `sys`.
///
/// Runs a deterministic breadth-first search over the reachable
/// configurations of the system on `word` under `limits`. See the module
/// documentation for the meaning of the three outcomes. Words mentioning
/// symbols the system does not declare are rejected immediately (no
/// transition could ever consume them).
pub fn run_bounded(
    sys: &PcpaSystem,
    word: &[Symbol],
    limits: &SearchLimits,
) -> Verdict<SystemConfiguration> {
    let compiled = CompiledSystem::compile(sys);
    let Some(cword) = compiled.compile_word(word) else {
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
        |c| compiled.step_successors(c, &cword),
        |c| compiled.is_accepting(c, word_len),
    );
    verdict.map(|c| compiled.decompile(c, &cword))
}
