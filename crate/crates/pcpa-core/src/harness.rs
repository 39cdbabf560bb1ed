//! Empirical comparison harness: bounded language samples, equivalence
//! checks between machines, intersection checks for decompositions, and a
//! behavioural check of the known-communication property.
//!
//! All checks in this module are exhaustive over every word up to a length
//! bound (in a canonical order) and honest about resource limits: a word
//! whose membership search was truncated is reported as unknown rather
//! than silently dropped or guessed.

use alloc::collections::BTreeSet;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::multihead::{mh_run_bounded, MhpdaMachine};
use crate::search::{run_bounded, SearchLimits, SearchOutcome};
use crate::step::{CompiledComponentConfig, CompiledConfig, CompiledSystem};
use crate::symbol::{StateId, Symbol};
use crate::system::PcpaSystem;

/// Why a harness check refused its input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HarnessError {
    /// Two machines under comparison declare different input alphabets.
    AlphabetMismatch {
        /// Symbols only the left machine declares.
        left_only: Vec<Symbol>,
        /// Symbols only the right machine declares.
        right_only: Vec<Symbol>,
    },
    /// The switch-property check needs per-state annotations on every
    /// component.
    NotKnownCommShaped {
        /// First component lacking (or not covered by) annotations
        /// (0-based).
        component: usize,
    },
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::AlphabetMismatch {
                left_only,
                right_only,
            } => {
                f.write_str("input alphabets differ")?;
                let mut render = |label: &str, syms: &[Symbol]| -> fmt::Result {
                    if !syms.is_empty() {
                        write!(f, "; {label}:")?;
                        for s in syms {
                            write!(f, " {s}")?;
                        }
                    }
                    Ok(())
                };
                render("only left", left_only)?;
                render("only right", right_only)
            }
            HarnessError::NotKnownCommShaped { component } => write!(
                f,
                "component {} carries no usable known-communication annotations",
                component + 1
            ),
        }
    }
}

impl core::error::Error for HarnessError {}

/// Enumerates every word over `alphabet` of length at most `max_len`, in
/// canonical order: shorter words first, words of equal length in
/// lexicographic order of the alphabet as declared.
pub fn enumerate_words(alphabet: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut words: Vec<Vec<Symbol>> = vec![Vec::new()];
    let mut previous_length: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 1..=max_len {
        let mut next_length = Vec::with_capacity(previous_length.len() * alphabet.len());
        for w in &previous_length {
            for s in alphabet {
                let mut longer = w.clone();
                longer.push(s.clone());
                next_length.push(longer);
            }
        }
        words.extend(next_length.iter().cloned());
        previous_length = next_length;
    }
    words
}

/// A reference to either kind of machine the harness can run.
#[derive(Debug, Clone, Copy)]
pub enum MachineRef<'a> {
    /// A parallel communicating system.
    System(&'a PcpaSystem),
    /// A multi-head single-stack machine.
    Multihead(&'a MhpdaMachine),
}

impl<'a> MachineRef<'a> {
    /// The machine's declared input alphabet, in declared order.
    pub fn input_alphabet(&self) -> &'a [Symbol] {
        match self {
            MachineRef::System(sys) => &sys.input_alphabet,
            MachineRef::Multihead(m) => &m.input_alphabet,
        }
    }

    /// Bounded membership outcome for one word.
    pub fn decide(&self, word: &[Symbol], limits: &SearchLimits) -> SearchOutcome {
        match self {
            MachineRef::System(sys) => run_bounded(sys, word, limits).outcome,
            MachineRef::Multihead(m) => mh_run_bounded(m, word, limits).outcome,
        }
    }
}

/// Bounded sample of a machine's language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSample {
    /// The length bound the sample covers.
    pub max_len: usize,
    /// Words accepted within the limits, in canonical order.
    pub accepted: Vec<Vec<Symbol>>,
    /// Words whose entire configuration space was exhausted without
    /// acceptance.
    pub rejected: Vec<Vec<Symbol>>,
    /// Words whose search was truncated by the limits.
    pub unknown: Vec<Vec<Symbol>>,
}

/// Classifies every word up to `max_len` over the machine's input
/// alphabet.
pub fn language_sample(machine: MachineRef<'_>, max_len: usize, limits: &SearchLimits) -> LanguageSample {
    let mut sample = LanguageSample {
        max_len,
        accepted: Vec::new(),
        rejected: Vec::new(),
        unknown: Vec::new(),
    };
    for word in enumerate_words(machine.input_alphabet(), max_len) {
        let bucket = match machine.decide(&word, limits) {
            SearchOutcome::Accepted => &mut sample.accepted,
            SearchOutcome::Rejected => &mut sample.rejected,
            SearchOutcome::Unknown => &mut sample.unknown,
        };
        bucket.push(word);
    }
    sample
}

/// A word on which two machines provably disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    /// The separating word.
    pub word: Vec<Symbol>,
    /// Outcome on the left machine.
    pub left: SearchOutcome,
    /// Outcome on the right machine.
    pub right: SearchOutcome,
}

/// Result of comparing two machines word by word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageComparison {
    /// Number of words examined.
    pub words_checked: usize,
    /// Words both machines accepted.
    pub agreed_accepted: usize,
    /// Words both machines rejected.
    pub agreed_rejected: usize,
    /// Words with opposite definite outcomes, in canonical order.
    pub disagreements: Vec<Disagreement>,
    /// Words the left search could not decide.
    pub left_unknown: Vec<Vec<Symbol>>,
    /// Words the right search could not decide.
    pub right_unknown: Vec<Vec<Symbol>>,
}

impl LanguageComparison {
    /// True when no word yielded opposite definite outcomes.
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }

    /// True when every word was decided on both sides.
    pub fn fully_decided(&self) -> bool {
        self.left_unknown.is_empty() && self.right_unknown.is_empty()
    }
}

fn check_alphabets(left: &[Symbol], right: &[Symbol]) -> Result<(), HarnessError> {
    let l: BTreeSet<&Symbol> = left.iter().collect();
    let r: BTreeSet<&Symbol> = right.iter().collect();
    if l == r {
        Ok(())
    } else {
        Err(HarnessError::AlphabetMismatch {
            left_only: l.difference(&r).map(|s| (*s).clone()).collect(),
            right_only: r.difference(&l).map(|s| (*s).clone()).collect(),
        })
    }
}

fn record(
    comparison: &mut LanguageComparison,
    word: Vec<Symbol>,
    left: SearchOutcome,
    right: SearchOutcome,
) {
    comparison.words_checked += 1;
    if left == SearchOutcome::Unknown {
        comparison.left_unknown.push(word.clone());
    }
    if right == SearchOutcome::Unknown {
        comparison.right_unknown.push(word.clone());
    }
    match (left, right) {
        (SearchOutcome::Accepted, SearchOutcome::Accepted) => comparison.agreed_accepted += 1,
        (SearchOutcome::Rejected, SearchOutcome::Rejected) => comparison.agreed_rejected += 1,
        (SearchOutcome::Accepted, SearchOutcome::Rejected)
        | (SearchOutcome::Rejected, SearchOutcome::Accepted) => {
            comparison.disagreements.push(Disagreement { word, left, right });
        }
        _ => {}
    }
}

/// Compares two machines on every word up to `max_len`.
///
/// The machines must declare the same input alphabet (as a set);
/// enumeration follows the left machine's declared order. Words searched
/// past a limit on either side are reported as unknown on that side and
/// never counted as disagreements.
pub fn compare_languages(
    left: MachineRef<'_>,
    right: MachineRef<'_>,
    max_len: usize,
    limits: &SearchLimits,
) -> Result<LanguageComparison, HarnessError> {
    check_alphabets(left.input_alphabet(), right.input_alphabet())?;
    let mut comparison = LanguageComparison {
        words_checked: 0,
        agreed_accepted: 0,
        agreed_rejected: 0,
        disagreements: Vec::new(),
        left_unknown: Vec::new(),
        right_unknown: Vec::new(),
    };
    for word in enumerate_words(left.input_alphabet(), max_len) {
        let l = left.decide(&word, limits);
        let r = right.decide(&word, limits);
        record(&mut comparison, word, l, r);
    }
    Ok(comparison)
}

/// Compares a system's language against the intersection of its parts'
/// languages, word by word up to `max_len`.
///
/// The intersection side accepts a word when every part accepts it and
/// rejects as soon as any part rejects it; otherwise (some part unknown,
/// none rejecting) it is unknown. Alphabets of all machines must agree as
/// sets; enumeration follows the original system's declared order.
pub fn intersection_check(
    original: &PcpaSystem,
    parts: &[PcpaSystem],
    max_len: usize,
    limits: &SearchLimits,
) -> Result<LanguageComparison, HarnessError> {
    for part in parts {
        check_alphabets(&original.input_alphabet, &part.input_alphabet)?;
    }
    let mut comparison = LanguageComparison {
        words_checked: 0,
        agreed_accepted: 0,
        agreed_rejected: 0,
        disagreements: Vec::new(),
        left_unknown: Vec::new(),
        right_unknown: Vec::new(),
    };
    for word in enumerate_words(&original.input_alphabet, max_len) {
        let left = run_bounded(original, &word, limits).outcome;
        let mut all_accepted = true;
        let mut any_rejected = false;
        for part in parts {
            match run_bounded(part, &word, limits).outcome {
                SearchOutcome::Accepted => {}
                SearchOutcome::Rejected => {
                    all_accepted = false;
                    any_rejected = true;
                    break;
                }
                SearchOutcome::Unknown => all_accepted = false,
            }
        }
        let right = if any_rejected {
            SearchOutcome::Rejected
        } else if all_accepted {
            SearchOutcome::Accepted
        } else {
            SearchOutcome::Unknown
        };
        record(&mut comparison, word, left, right);
    }
    Ok(comparison)
}

// ---------------------------------------------------------------------------
// Switch-property check.
// ---------------------------------------------------------------------------

/// The two ways an execution can contradict the known-communication
/// annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchViolationKind {
    /// A component entered a raised-switch state although it had not
    /// served a query since its previous move.
    SpuriousSwitch,
    /// A component served a query but its next move entered a state whose
    /// switch is not raised.
    MissedSwitch,
}

impl SwitchViolationKind {
    /// Canonical lower-case token used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            SwitchViolationKind::SpuriousSwitch => "spurious_switch",
            SwitchViolationKind::MissedSwitch => "missed_switch",
        }
    }
}

impl fmt::Display for SwitchViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A concrete contradiction between an execution and the switch
/// annotations, at the shallowest step depth where one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchViolation {
    /// What went wrong.
    pub kind: SwitchViolationKind,
    /// The offending component (0-based).
    pub component: usize,
    /// The state the component entered.
    pub state: StateId,
    /// 1-based index of the offending step in its run.
    pub step: u32,
}

impl fmt::Display for SwitchViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} by component {} entering {} at step {}",
            self.kind,
            self.component + 1,
            self.state,
            self.step
        )
    }
}

/// Result of [`check_switch_property`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchCheck {
    /// The shallowest violation found, if any.
    pub violation: Option<SwitchViolation>,
    /// Number of distinct (configuration, pending-flags) pairs explored.
    pub explored: usize,
    /// True when a resource limit truncated the exploration.
    pub truncated: bool,
}

impl SwitchCheck {
    /// True when no violation was found (within the explored space).
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks, over every run of `sys` on `word` within `limits`, that the
/// per-state switch annotations mean exactly what the known-communication
/// property promises: a component enters a raised-switch state on its
/// first move after serving as a communication source, and never
/// otherwise.
///
/// Both failure directions are detected and the shallowest one is
/// reported. Every component must carry annotations covering all its
/// states.
pub fn check_switch_property(
    sys: &PcpaSystem,
    word: &[Symbol],
    limits: &SearchLimits,
) -> Result<SwitchCheck, HarnessError> {
    let compiled = CompiledSystem::compile(sys);
    let mut switch_of: Vec<Vec<bool>> = Vec::with_capacity(compiled.comps.len());
    for (i, (ccomp, comp)) in compiled.comps.iter().zip(&sys.components).enumerate() {
        let Some(kc) = comp.kc_states.as_ref() else {
            return Err(HarnessError::NotKnownCommShaped { component: i });
        };
        let mut table = Vec::with_capacity(ccomp.state_names.len());
        for name in &ccomp.state_names {
            match kc.get(name) {
                Some(k) => table.push(k.switch),
                None => return Err(HarnessError::NotKnownCommShaped { component: i }),
            }
        }
        switch_of.push(table);
    }

    let Some(cword) = compiled.compile_word(word) else {
        // A word outside the alphabet has no run at all.
        return Ok(SwitchCheck {
            violation: None,
            explored: 0,
            truncated: false,
        });
    };

    let n = compiled.comps.len();
    let mut truncated = false;
    if limits.max_configs == 0 {
        return Ok(SwitchCheck {
            violation: None,
            explored: 0,
            truncated: true,
        });
    }

    let top_query = |c: &CompiledComponentConfig| -> Option<u32> {
        c.stack
            .first()
            .and_then(|&top| compiled.query_target[top as usize])
    };

    type Flags = Vec<bool>;
    let initial = (compiled.initial_config(), vec![false; n]);
    let mut visited: BTreeSet<(CompiledConfig, Flags)> = BTreeSet::new();
    let mut queue: VecDeque<(CompiledConfig, Flags, u32)> = VecDeque::new();
    visited.insert(initial.clone());
    queue.push_back((initial.0, initial.1, 0));

    while let Some((cfg, flags, depth)) = queue.pop_front() {
        let mut outputs: Vec<(CompiledConfig, Flags)> = Vec::new();
        match compiled.comm_step(&cfg) {
            Some(Some(next)) => {
                // A communication step changes no states; it only marks
                // the components that served a query.
                let mut new_flags = flags.clone();
                for c in &cfg.comps {
                    if let Some(j) = top_query(c) {
                        let j = j as usize;
                        if j < n && top_query(&cfg.comps[j]).is_none() {
                            new_flags[j] = true;
                        }
                    }
                }
                outputs.push((next, new_flags));
            }
            Some(None) => {} // blocked: the run halts here
            None => {
                for succ in compiled.usual_successors(&cfg, &cword) {
                    for i in 0..n {
                        let entered = succ.comps[i].state as usize;
                        let raised = switch_of[i][entered];
                        if raised != flags[i] {
                            return Ok(SwitchCheck {
                                violation: Some(SwitchViolation {
                                    kind: if raised {
                                        SwitchViolationKind::SpuriousSwitch
                                    } else {
                                        SwitchViolationKind::MissedSwitch
                                    },
                                    component: i,
                                    state: compiled.comps[i].state_names[entered].clone(),
                                    step: depth + 1,
                                }),
                                explored: visited.len(),
                                truncated,
                            });
                        }
                    }
                    outputs.push((succ, vec![false; n]));
                }
            }
        }

        if depth == limits.max_steps {
            if !outputs.is_empty() {
                truncated = true;
            }
            continue;
        }
        for out in outputs {
            if visited.contains(&out) {
                continue;
            }
            if visited.len() == limits.max_configs {
                truncated = true;
                continue;
            }
            visited.insert(out.clone());
            queue.push_back((out.0, out.1, depth + 1));
        }
    }

    Ok(SwitchCheck {
        violation: None,
        explored: visited.len(),
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symbol::sym;
    use crate::transform::to_known_communication;
    use alloc::format;

    fn words(texts: &[&str]) -> Vec<Vec<Symbol>> {
        texts
            .iter()
            .map(|t| {
                t.chars()
                    .map(|c| sym(&alloc::string::String::from(c)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn enumeration_is_length_then_lex_in_declared_order() {
        let alphabet = [sym("b"), sym("a")];
        let got = enumerate_words(&alphabet, 2);
        assert_eq!(got, words(&["", "b", "a", "bb", "ba", "ab", "aa"]));
    }

    #[test]
    fn enumeration_counts_match() {
        let alphabet = [sym("a"), sym("b")];
        assert_eq!(enumerate_words(&alphabet, 8).len(), 511);
        assert_eq!(enumerate_words(&alphabet, 0), words(&[""]));
        let three = [sym("a"), sym("b"), sym("c")];
        assert_eq!(enumerate_words(&three, 3).len(), 1 + 3 + 9 + 27);
    }

    #[test]
    fn sample_separates_outcomes() {
        let sys = fixtures::m_anbn();
        let sample = language_sample(
            MachineRef::System(&sys),
            4,
            &SearchLimits::default(),
        );
        assert_eq!(sample.accepted, words(&["ab", "aabb"]));
        assert_eq!(sample.unknown, Vec::<Vec<Symbol>>::new());
        assert_eq!(sample.rejected.len(), 31 - 2);
    }

    #[test]
    fn tight_limits_surface_as_unknown() {
        let sys = fixtures::m_anbn();
        let sample = language_sample(
            MachineRef::System(&sys),
            2,
            &SearchLimits::new(1, 100_000),
        );
        // Within one step nothing of length 2 can be decided positively,
        // and most searches are truncated.
        assert!(sample.accepted.is_empty());
        assert!(!sample.unknown.is_empty());
    }

    #[test]
    fn comparison_agrees_between_system_and_multihead_variant() {
        let sys = fixtures::m_anbn();
        let mh = fixtures::mh_anbn();
        let cmp = compare_languages(
            MachineRef::System(&sys),
            MachineRef::Multihead(&mh),
            6,
            &SearchLimits::default(),
        )
        .expect("same alphabet");
        assert_eq!(cmp.words_checked, 127);
        assert!(cmp.agrees());
        assert!(cmp.fully_decided());
        assert_eq!(cmp.agreed_accepted, 3); // ab, aabb, aaabbb
        assert_eq!(cmp.agreed_rejected, 124);
    }

    #[test]
    fn comparison_detects_disagreements() {
        let sys = fixtures::m_anbn();
        let mut other = fixtures::m_anbn();
        // Marking the initial state final makes the variant accept every
        // a-prefix (the initial state loops on `a`), so up to length 2 the
        // two systems split on exactly the empty word, "a", and "aa".
        let initial = other.components[0].initial.clone();
        other.components[0].finals.insert(initial);
        let cmp = compare_languages(
            MachineRef::System(&sys),
            MachineRef::System(&other),
            2,
            &SearchLimits::default(),
        )
        .expect("same alphabet");
        assert_eq!(cmp.disagreements.len(), 3);
        let words: Vec<Vec<Symbol>> = cmp.disagreements.iter().map(|d| d.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![sym("a")], vec![sym("a"), sym("a")]]);
        for d in &cmp.disagreements {
            assert_eq!(d.left, SearchOutcome::Rejected);
            assert_eq!(d.right, SearchOutcome::Accepted);
        }
        assert!(!cmp.agrees());
        assert!(cmp.fully_decided());
    }

    #[test]
    fn comparison_requires_matching_alphabets() {
        let sys = fixtures::m_anbn();
        let mut other = fixtures::m_anbn();
        other.input_alphabet.push(sym("c"));
        let err = compare_languages(
            MachineRef::System(&sys),
            MachineRef::System(&other),
            1,
            &SearchLimits::default(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            HarnessError::AlphabetMismatch {
                left_only: vec![],
                right_only: vec![sym("c")],
            }
        );
        assert!(format!("{err}").contains("only right"));
    }

    #[test]
    fn intersection_of_identical_parts_matches() {
        let sys = fixtures::m_anbn();
        let parts = vec![fixtures::m_anbn(), fixtures::m_anbn()];
        let cmp = intersection_check(&sys, &parts, 4, &SearchLimits::default())
            .expect("same alphabet");
        assert!(cmp.agrees());
        assert!(cmp.fully_decided());
        assert_eq!(cmp.agreed_accepted, 2);
    }

    #[test]
    fn switch_property_holds_for_transformed_system() {
        let kc = to_known_communication(&fixtures::sys_abc()).expect("transformable");
        let check = check_switch_property(
            &kc,
            &words(&["abc"])[0],
            &SearchLimits::new(5_000, 50_000),
        )
        .expect("annotated");
        assert!(check.holds(), "violation: {:?}", check.violation);
        assert!(!check.truncated);
        assert!(check.explored > 0);
    }

    #[test]
    fn switch_property_catches_planted_annotation_errors() {
        let kc = to_known_communication(&fixtures::sys_abc()).expect("transformable");

        // Spurious: claim a switch on a state reached without any query.
        let mut spurious = kc.clone();
        {
            let comp = &mut spurious.components[0];
            let target = comp
                .kc_states
                .as_ref()
                .unwrap()
                .iter()
                .find(|(name, k)| {
                    k.phase == crate::system::KcPhase::Sim2
                        && !k.switch
                        && name.as_str().starts_with("p0")
                })
                .map(|(name, _)| name.clone())
                .unwrap();
            comp.kc_states.as_mut().unwrap().get_mut(&target).unwrap().switch = true;
        }
        let check = check_switch_property(
            &spurious,
            &words(&["abc"])[0],
            &SearchLimits::new(5_000, 50_000),
        )
        .expect("annotated");
        assert_eq!(
            check.violation.as_ref().map(|v| v.kind),
            Some(SwitchViolationKind::SpuriousSwitch)
        );

        // Missed: strip the raised switch from the state the queried
        // component enters right after serving.
        let mut missed = kc.clone();
        {
            let comp = &mut missed.components[1];
            let names: Vec<StateId> = comp
                .kc_states
                .as_ref()
                .unwrap()
                .iter()
                .filter(|(_, k)| k.switch)
                .map(|(name, _)| name.clone())
                .collect();
            for name in names {
                comp.kc_states.as_mut().unwrap().get_mut(&name).unwrap().switch = false;
            }
        }
        let check = check_switch_property(
            &missed,
            &words(&["abc"])[0],
            &SearchLimits::new(5_000, 50_000),
        )
        .expect("annotated");
        assert_eq!(
            check.violation.as_ref().map(|v| v.kind),
            Some(SwitchViolationKind::MissedSwitch)
        );
        assert_eq!(check.violation.as_ref().map(|v| v.component), Some(1));
    }

    #[test]
    fn switch_check_requires_annotations() {
        let sys = fixtures::m_anbn();
        let err = check_switch_property(&sys, &[], &SearchLimits::default()).unwrap_err();
        assert_eq!(err, HarnessError::NotKnownCommShaped { component: 0 });
    }

    #[test]
    fn words_outside_the_alphabet_have_no_runs() {
        let kc = to_known_communication(&fixtures::sys_abc()).expect("transformable");
        let check = check_switch_property(&kc, &[sym("z")], &SearchLimits::default())
            .expect("annotated");
        assert!(check.holds());
        assert_eq!(check.explored, 0);
    }
}
