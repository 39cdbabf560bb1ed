//! JSON file format for systems and multi-head machines.
//!
//! A file is a single JSON object with a `format_version` (currently 1) and
//! a `kind` of either `"pcpa"` or `"mhpda"`. Transitions are compact
//! arrays; the empty string stands for "no input symbol read" (an ε-move,
//! or a head that is not consulted). Query targets are written 1-based, as
//! component numbers are everywhere in rendered output. Serialization is
//! deterministic: objects are emitted with fixed field order, maps are
//! sorted, and the result always ends in a newline, so a parse/serialize
//! round trip of a file produced here is byte-identical.

use std::collections::BTreeMap;
use std::fmt;

use pcpa_core::multihead::{MhTransition, MhpdaMachine};
use pcpa_core::symbol::{StateId, Symbol, TokenError};
use pcpa_core::system::{KcPhase, KcState, Mode, PcpaSystem, PdaComponent, Transition};
use serde::{Deserialize, Serialize};

/// Version emitted by [`serialize_document`] and accepted by
/// [`parse_document`].
pub const FORMAT_VERSION: u32 = 1;

/// Everything that can go wrong turning file text into a machine.
#[derive(Debug)]
pub enum ParseError {
    /// The text is not valid JSON or does not match the document shape.
    Json(serde_json::Error),
    /// The document declares a version this build does not understand.
    UnsupportedVersion(u32),
    /// The document declares a kind other than `pcpa` or `mhpda`.
    UnknownKind(String),
    /// A state or symbol token is malformed; `context` names the field.
    Token {
        /// Which field held the offending token.
        context: String,
        /// The underlying token error.
        source: TokenError,
    },
    /// A field holds a value outside its fixed vocabulary.
    Field(String),
    /// A query target is not a valid 1-based component number.
    QueryTarget {
        /// The query symbol whose target is out of range.
        symbol: String,
        /// The target as written.
        target: u64,
        /// Number of components in the document.
        degree: usize,
    },
    /// A switch flag is neither 0 nor 1.
    SwitchFlag {
        /// The annotated state.
        state: String,
        /// The flag as written.
        value: u64,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Json(e) => write!(f, "{e}"),
            ParseError::UnsupportedVersion(v) => {
                write!(f, "unsupported format_version {v} (expected {FORMAT_VERSION})")
            }
            ParseError::UnknownKind(k) => {
                write!(f, "unknown kind {k:?} (expected \"pcpa\" or \"mhpda\")")
            }
            ParseError::Token { context, source } => write!(f, "{context}: {source}"),
            ParseError::Field(message) => f.write_str(message),
            ParseError::QueryTarget {
                symbol,
                target,
                degree,
            } => write!(
                f,
                "query symbol {symbol:?} addresses component {target}, but components \
                 are numbered 1..={degree}"
            ),
            ParseError::SwitchFlag { state, value } => {
                write!(f, "state {state:?}: switch flag must be 0 or 1, got {value}")
            }
        }
    }
}

impl std::error::Error for ParseError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ParseError::Json(e) => Some(e),
            ParseError::Token { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json(e)
    }
}

/// A parsed file: either a system or a multi-head machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    /// A `"kind": "pcpa"` file.
    Pcpa(PcpaSystem),
    /// A `"kind": "mhpda"` file.
    Mhpda(MhpdaMachine),
}

// Transition rows: [from, read, pop, to, [push…]] with "" for ε, and
// [from, [reads…], pop, to, [advances…], [push…]] with "" for an
// unconsulted head.
type PcpaRow = (String, String, String, String, Vec<String>);
type MhRow = (String, Vec<String>, String, String, Vec<bool>, Vec<String>);

#[derive(Serialize, Deserialize)]
struct KcStateDoc {
    base: String,
    phase: String,
    switch: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    states: Vec<String>,
    initial: String,
    initial_stack: String,
    finals: Vec<String>,
    transitions: Vec<PcpaRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kc_states: Option<BTreeMap<String, KcStateDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PcpaDoc {
    format_version: u32,
    kind: String,
    mode: String,
    input_alphabet: Vec<String>,
    stack_alphabet: Vec<String>,
    query_map: Vec<(String, u64)>,
    components: Vec<ComponentDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MhDoc {
    format_version: u32,
    kind: String,
    heads: usize,
    input_alphabet: Vec<String>,
    stack_alphabet: Vec<String>,
    endmarker: String,
    states: Vec<String>,
    initial: String,
    initial_stack: String,
    finals: Vec<String>,
    transitions: Vec<MhRow>,
}

fn symbol(context: &str, text: &str) -> Result<Symbol, ParseError> {
    Symbol::new(text).map_err(|source| ParseError::Token {
        context: context.to_owned(),
        source,
    })
}

fn state_id(context: &str, text: &str) -> Result<StateId, ParseError> {
    StateId::new(text).map_err(|source| ParseError::Token {
        context: context.to_owned(),
        source,
    })
}

fn symbols(context: &str, texts: &[String]) -> Result<Vec<Symbol>, ParseError> {
    texts.iter().map(|t| symbol(context, t)).collect()
}

fn optional_symbol(context: &str, text: &str) -> Result<Option<Symbol>, ParseError> {
    if text.is_empty() {
        Ok(None)
    } else {
        symbol(context, text).map(Some)
    }
}

fn mode_token(mode: Mode) -> &'static str {
    match mode {
        Mode::Returning => "returning",
        Mode::NonReturning => "non_returning",
    }
}

fn phase_token(phase: KcPhase) -> &'static str {
    match phase {
        KcPhase::Initial => "initial",
        KcPhase::Primed1 => "primed1",
        KcPhase::Primed2 => "primed2",
        KcPhase::Sim1 => "sim1",
        KcPhase::Sim2 => "sim2",
    }
}

fn parse_phase(state: &str, text: &str) -> Result<KcPhase, ParseError> {
    match text {
        "initial" => Ok(KcPhase::Initial),
        "primed1" => Ok(KcPhase::Primed1),
        "primed2" => Ok(KcPhase::Primed2),
        "sim1" => Ok(KcPhase::Sim1),
        "sim2" => Ok(KcPhase::Sim2),
        other => Err(ParseError::Field(format!(
            "state {state:?}: unknown phase {other:?}"
        ))),
    }
}

fn system_to_doc(sys: &PcpaSystem) -> PcpaDoc {
    let row = |t: &Transition| -> PcpaRow {
        (
            t.from.as_str().to_owned(),
            t.read.as_ref().map(|s| s.as_str()).unwrap_or("").to_owned(),
            t.pop.as_str().to_owned(),
            t.to.as_str().to_owned(),
            t.push.iter().map(|s| s.as_str().to_owned()).collect(),
        )
    };
    PcpaDoc {
        format_version: FORMAT_VERSION,
        kind: "pcpa".to_owned(),
        mode: mode_token(sys.mode).to_owned(),
        input_alphabet: sys.input_alphabet.iter().map(|s| s.as_str().to_owned()).collect(),
        stack_alphabet: sys.stack_alphabet.iter().map(|s| s.as_str().to_owned()).collect(),
        query_map: sys
            .query_map
            .iter()
            .map(|(sym, &target)| (sym.as_str().to_owned(), target as u64 + 1))
            .collect(),
        components: sys
            .components
            .iter()
            .map(|comp| ComponentDoc {
                states: comp.states.iter().map(|s| s.as_str().to_owned()).collect(),
                initial: comp.initial.as_str().to_owned(),
                initial_stack: comp.initial_stack.as_str().to_owned(),
                finals: comp.finals.iter().map(|s| s.as_str().to_owned()).collect(),
                transitions: comp.transitions.iter().map(row).collect(),
                kc_states: comp.kc_states.as_ref().map(|kc| {
                    kc.iter()
                        .map(|(st, k)| {
                            (
                                st.as_str().to_owned(),
                                KcStateDoc {
                                    base: k.base.as_str().to_owned(),
                                    phase: phase_token(k.phase).to_owned(),
                                    switch: u64::from(k.switch),
                                },
                            )
                        })
                        .collect()
                }),
            })
            .collect(),
    }
}

fn doc_to_system(doc: PcpaDoc) -> Result<PcpaSystem, ParseError> {
    let mode = match doc.mode.as_str() {
        "returning" => Mode::Returning,
        "non_returning" => Mode::NonReturning,
        other => {
            return Err(ParseError::Field(format!(
                "mode: expected \"returning\" or \"non_returning\", got {other:?}"
            )))
        }
    };
    let degree = doc.components.len();
    let mut query_map = BTreeMap::new();
    for (sym_text, target) in &doc.query_map {
        let sym = symbol("query_map", sym_text)?;
        if *target == 0 || *target > degree as u64 {
            return Err(ParseError::QueryTarget {
                symbol: sym_text.clone(),
                target: *target,
                degree,
            });
        }
        query_map.insert(sym, *target as usize - 1);
    }
    let mut components = Vec::with_capacity(degree);
    for (idx, comp) in doc.components.into_iter().enumerate() {
        let cx = |field: &str| format!("component {}: {field}", idx + 1);
        let mut transitions = Vec::with_capacity(comp.transitions.len());
        for (from, read, pop, to, push) in &comp.transitions {
            transitions.push(Transition::new(
                state_id(&cx("transition from-state"), from)?,
                optional_symbol(&cx("transition read symbol"), read)?,
                symbol(&cx("transition pop symbol"), pop)?,
                state_id(&cx("transition to-state"), to)?,
                push.iter()
                    .map(|s| symbol(&cx("transition push symbol"), s))
                    .collect::<Result<Vec<_>, _>>()?,
            ));
        }
        let kc_states = match comp.kc_states {
            None => None,
            Some(map) => {
                let mut out = BTreeMap::new();
                for (st, k) in map {
                    if k.switch > 1 {
                        return Err(ParseError::SwitchFlag {
                            state: st,
                            value: k.switch,
                        });
                    }
                    out.insert(
                        state_id(&cx("kc_states key"), &st)?,
                        KcState {
                            base: state_id(&cx("kc_states base"), &k.base)?,
                            phase: parse_phase(&st, &k.phase)?,
                            switch: k.switch == 1,
                        },
                    );
                }
                Some(out)
            }
        };
        components.push(PdaComponent {
            states: comp
                .states
                .iter()
                .map(|s| state_id(&cx("states"), s))
                .collect::<Result<_, _>>()?,
            initial: state_id(&cx("initial state"), &comp.initial)?,
            initial_stack: symbol(&cx("initial stack symbol"), &comp.initial_stack)?,
            finals: comp
                .finals
                .iter()
                .map(|s| state_id(&cx("final states"), s))
                .collect::<Result<_, _>>()?,
            transitions,
            kc_states,
        });
    }
    Ok(PcpaSystem {
        mode,
        input_alphabet: symbols("input_alphabet", &doc.input_alphabet)?,
        stack_alphabet: symbols("stack_alphabet", &doc.stack_alphabet)?,
        components,
        query_map,
    })
}

fn machine_to_doc(m: &MhpdaMachine) -> MhDoc {
    let row = |t: &MhTransition| -> MhRow {
        (
            t.from.as_str().to_owned(),
            t.reads
                .iter()
                .map(|r| r.as_ref().map(|s| s.as_str()).unwrap_or("").to_owned())
                .collect(),
            t.pop.as_str().to_owned(),
            t.to.as_str().to_owned(),
            t.advances.clone(),
            t.push.iter().map(|s| s.as_str().to_owned()).collect(),
        )
    };
    MhDoc {
        format_version: FORMAT_VERSION,
        kind: "mhpda".to_owned(),
        heads: m.heads,
        input_alphabet: m.input_alphabet.iter().map(|s| s.as_str().to_owned()).collect(),
        stack_alphabet: m.stack_alphabet.iter().map(|s| s.as_str().to_owned()).collect(),
        endmarker: m.endmarker.as_str().to_owned(),
        states: m.states.iter().map(|s| s.as_str().to_owned()).collect(),
        initial: m.initial.as_str().to_owned(),
        initial_stack: m.initial_stack.as_str().to_owned(),
        finals: m.finals.iter().map(|s| s.as_str().to_owned()).collect(),
        transitions: m.transitions.iter().map(row).collect(),
    }
}

fn doc_to_machine(doc: MhDoc) -> Result<MhpdaMachine, ParseError> {
    let mut transitions = Vec::with_capacity(doc.transitions.len());
    for (from, reads, pop, to, advances, push) in &doc.transitions {
        transitions.push(MhTransition {
            from: state_id("transition from-state", from)?,
            reads: reads
                .iter()
                .map(|r| optional_symbol("transition read symbol", r))
                .collect::<Result<_, _>>()?,
            pop: symbol("transition pop symbol", pop)?,
            to: state_id("transition to-state", to)?,
            advances: advances.clone(),
            push: push
                .iter()
                .map(|s| symbol("transition push symbol", s))
                .collect::<Result<_, _>>()?,
        });
    }
    Ok(MhpdaMachine {
        heads: doc.heads,
        input_alphabet: symbols("input_alphabet", &doc.input_alphabet)?,
        stack_alphabet: symbols("stack_alphabet", &doc.stack_alphabet)?,
        endmarker: symbol("endmarker", &doc.endmarker)?,
        states: doc
            .states
            .iter()
            .map(|s| state_id("states", s))
            .collect::<Result<_, _>>()?,
        initial: state_id("initial state", &doc.initial)?,
        initial_stack: symbol("initial stack symbol", &doc.initial_stack)?,
        finals: doc
            .finals
            .iter()
            .map(|s| state_id("final states", s))
            .collect::<Result<_, _>>()?,
        transitions,
    })
}

/// Parses file text into a [`Document`].
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    #[derive(Deserialize)]
    struct Header {
        format_version: u32,
        kind: String,
    }
    let header: Header = serde_json::from_str(text)?;
    if header.format_version != FORMAT_VERSION {
        return Err(ParseError::UnsupportedVersion(header.format_version));
    }
    match header.kind.as_str() {
        "pcpa" => {
            let doc: PcpaDoc = serde_json::from_str(text)?;
            doc_to_system(doc).map(Document::Pcpa)
        }
        "mhpda" => {
            let doc: MhDoc = serde_json::from_str(text)?;
            doc_to_machine(doc).map(Document::Mhpda)
        }
        other => Err(ParseError::UnknownKind(other.to_owned())),
    }
}

/// Renders a [`Document`] as deterministic pretty-printed JSON ending in a
/// newline.
pub fn serialize_document(doc: &Document) -> String {
    let mut text = match doc {
        Document::Pcpa(sys) => {
            serde_json::to_string_pretty(&system_to_doc(sys)).expect("serialization cannot fail")
        }
        Document::Mhpda(m) => {
            serde_json::to_string_pretty(&machine_to_doc(m)).expect("serialization cannot fail")
        }
    };
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use pcpa_core::fixtures;
    use pcpa_core::transform::to_known_communication;

    #[test]
    fn system_round_trips_through_text() {
        for sys in [
            fixtures::m_anbn(),
            fixtures::sys_abc(),
            fixtures::sys_simple4(),
            fixtures::nonsimple5(),
        ] {
            let text = serialize_document(&Document::Pcpa(sys.clone()));
            match parse_document(&text).expect("parses") {
                Document::Pcpa(back) => assert_eq!(back, sys),
                Document::Mhpda(_) => panic!("kind changed"),
            }
        }
    }

    #[test]
    fn annotated_system_round_trips_kc_states() {
        let kc = to_known_communication(&fixtures::sys_abc()).expect("transformable");
        assert!(kc.components[0].kc_states.is_some());
        let text = serialize_document(&Document::Pcpa(kc.clone()));
        assert!(text.contains("kc_states"));
        match parse_document(&text).expect("parses") {
            Document::Pcpa(back) => assert_eq!(back, kc),
            Document::Mhpda(_) => panic!("kind changed"),
        }
    }

    #[test]
    fn machine_round_trips_through_text() {
        let machine = fixtures::mh_anbn();
        let text = serialize_document(&Document::Mhpda(machine.clone()));
        match parse_document(&text).expect("parses") {
            Document::Mhpda(back) => assert_eq!(back, machine),
            Document::Pcpa(_) => panic!("kind changed"),
        }
    }

    #[test]
    fn serialization_is_a_fixed_point_of_parse() {
        let text = serialize_document(&Document::Pcpa(fixtures::sys_abc()));
        let reparsed = parse_document(&text).expect("parses");
        assert_eq!(serialize_document(&reparsed), text);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn query_targets_are_one_based_in_text() {
        let text = serialize_document(&Document::Pcpa(fixtures::sys_abc()));
        let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        assert_eq!(
            value["query_map"],
            serde_json::json!([["K2", 2]]),
            "text:\n{text}"
        );
    }

    #[test]
    fn rejects_unknown_version_and_kind() {
        let err = parse_document(r#"{"format_version": 2, "kind": "pcpa"}"#).unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedVersion(2)));
        let err = parse_document(r#"{"format_version": 1, "kind": "dfa"}"#).unwrap_err();
        assert!(matches!(err, ParseError::UnknownKind(k) if k == "dfa"));
    }

    #[test]
    fn rejects_out_of_range_query_target() {
        let mut bad = serialize_document(&Document::Pcpa(fixtures::sys_abc()));
        bad = bad.replace("\"K2\",\n      2", "\"K2\",\n      3");
        let err = parse_document(&bad).unwrap_err();
        assert!(
            matches!(err, ParseError::QueryTarget { target: 3, degree: 2, .. }),
            "{err}"
        );
    }

    #[test]
    fn rejects_bad_tokens_with_context() {
        let bad = serialize_document(&Document::Pcpa(fixtures::m_anbn())).replace("\"q1\"", "\"q 1\"");
        let err = parse_document(&bad).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("component 1"), "{message}");
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = serialize_document(&Document::Pcpa(fixtures::m_anbn()))
            .replace("\"mode\"", "\"extra\": 1, \"mode\"");
        assert!(parse_document(&text).is_err());
    }

    #[test]
    fn empty_read_means_no_input_symbol() {
        let text = serialize_document(&Document::Pcpa(fixtures::m_anbn()));
        let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        // The ε-move (q1, ε, Z) → (q2, [Z]) serializes with an empty read.
        let rows = value["components"][0]["transitions"]
            .as_array()
            .expect("array");
        assert_eq!(
            rows.last().unwrap(),
            &serde_json::json!(["q1", "", "Z", "q2", ["Z"]]),
            "text:\n{text}"
        );
    }
}
