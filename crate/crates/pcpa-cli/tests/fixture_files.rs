//! Keeps the shipped machine files in `fixtures/` in lock-step with the
//! in-code constructors.
//!
//! Each file must be byte-identical to the serialization of its
//! constructor. After changing a constructor, regenerate the files with
//!
//! ```text
//! REGEN_FIXTURES=1 cargo test -p pcpa-cli --test fixture_files
//! ```

use std::path::PathBuf;

use pcpa_cli::format::{parse_document, serialize_document, Document};
use pcpa_core::fixtures;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn check(name: &str, doc: Document) {
    let path = fixture_path(name);
    let expected = serialize_document(&doc);
    if std::env::var_os("REGEN_FIXTURES").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).expect("create fixtures dir");
        std::fs::write(&path, &expected).expect("write fixture");
        return;
    }
    let on_disk = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}; regenerate with REGEN_FIXTURES=1", path.display()));
    assert_eq!(
        on_disk,
        expected,
        "{} is out of date; regenerate with REGEN_FIXTURES=1",
        path.display()
    );
    // And the file itself must round-trip to the same machine.
    let parsed = parse_document(&on_disk).expect("shipped fixture parses");
    assert_eq!(serialize_document(&parsed), expected);
}

#[test]
fn m_anbn_file_matches_constructor() {
    check("m_anbn.json", Document::Pcpa(fixtures::m_anbn()));
}

#[test]
fn sys_abc_file_matches_constructor() {
    check("sys_abc.json", Document::Pcpa(fixtures::sys_abc()));
}

#[test]
fn sys_simple4_file_matches_constructor() {
    check("sys_simple4.json", Document::Pcpa(fixtures::sys_simple4()));
}

#[test]
fn nonsimple5_file_matches_constructor() {
    check("nonsimple5.json", Document::Pcpa(fixtures::nonsimple5()));
}

#[test]
fn mh_anbn_file_matches_constructor() {
    check("mh_anbn.json", Document::Mhpda(fixtures::mh_anbn()));
}
