//! Transcriptions against their checked-in golden files and against the
//! published C. Set `UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::PathBuf;

use liffig::corpus::{program, sources::published, Entry};
use liffig::transpile::{function_text, normal_lines, sections, transpile};

fn golden_path(e: Entry) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(e.name())
        .join("golden")
        .join(format!("{}.c", e.name()))
}

fn transcription(e: Entry) -> String {
    transpile(program(e), &e.transpile_config()).unwrap()
}

fn trimmed(s: &str) -> Vec<&str> {
    s.lines().map(str::trim_end).collect()
}

#[test]
fn transcriptions_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for e in Entry::ALL {
        let path = golden_path(e);
        let ours = transcription(e);
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &ours).unwrap();
            continue;
        }
        let golden = std::fs::read_to_string(&path).unwrap_or_else(|err| panic!("{}: {err}", path.display()));
        assert_eq!(trimmed(&ours), trimmed(&golden), "{e} differs from {}", path.display());
    }
}

#[test]
fn fh_is_the_published_routine_line_for_line() {
    for e in [Entry::FhPartition, Entry::FhPartitionMedian] {
        let ours = transcription(e);
        let ours = normal_lines(function_text(&ours, "partition").unwrap());
        let theirs = normal_lines(function_text(published::FH_C, "partition").unwrap());
        if e == Entry::FhPartition {
            assert_eq!(ours, theirs);
        } else {
            // only the pivot line differs
            let differing: Vec<_> = ours.iter().zip(&theirs).filter(|(a, b)| a != b).collect();
            assert_eq!(differing.len(), 1, "{differing:?}");
            assert!(differing[0].0.starts_with("S:r=a[(m+n)/2];"), "{differing:?}");
        }
    }
}

#[test]
fn dnf_has_the_published_shape() {
    let ours = sections(function_text(&transcription(Entry::DnfPartition), "partition").unwrap());
    let theirs = sections(function_text(published::DNF_C, "partition").unwrap());
    for label in ["A", "B"] {
        let find = |s: &[liffig::transpile::Section]| s.iter().find(|x| x.label == label).cloned().unwrap();
        assert_eq!(find(&ours), find(&theirs), "section {label}");
    }
    let a = &ours.iter().find(|s| s.label == "A").unwrap().lines;
    assert_eq!(a[0], "if(s==t)*j=f-1;*i=t;return;");
    assert_eq!(a.last().unwrap(), "assert(0);");
}

#[test]
fn every_goto_target_is_an_emitted_label() {
    for e in Entry::ALL {
        let text = transcription(e);
        let secs = sections(&text);
        let labels: Vec<&str> = secs.iter().map(|s| s.label.as_str()).collect();
        for s in &secs {
            for line in &s.lines {
                for part in line.split("goto").skip(1) {
                    let target: String = part.chars().take_while(|c| c.is_ascii_alphanumeric()).collect();
                    assert!(labels.contains(&target.as_str()), "{e}: goto {target}");
                }
            }
        }
        let h = secs.iter().find(|s| s.label == "H").unwrap();
        assert_eq!(h.lines.iter().filter(|l| l.contains("return;")).count(), 1, "{e}");
    }
}
