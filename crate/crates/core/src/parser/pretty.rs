use std::fmt::Write;

use super::SourceFormat;
use crate::model::{BlockBody, Command, Formula, GuardedArm, LabelBlock, Program, Target};

pub fn pretty_print(p: &Program, format: SourceFormat) -> String {
    match format {
        SourceFormat::Liffig => pretty_print_liffig(p),
        SourceFormat::Triples => pretty_print_triples(p),
    }
}

fn write_decls(p: &Program, out: &mut String) {
    for d in &p.signature.vars {
        let _ = write!(out, "var {}: {}", d.name, d.ty);
        if d.output {
            out.push_str(" output");
        }
        out.push('\n');
    }
    if !p.signature.vars.is_empty() {
        out.push('\n');
    }
}

fn label_line(b: &LabelBlock) -> String {
    match &b.doc {
        Some(doc) => format!("{}: {} // {}", b.label, b.assertion, doc),
        None => format!("{}: {}", b.label, b.assertion),
    }
}

fn target_text(t: &Target) -> String {
    match t {
        Target::Label(l) => format!("goto {l}"),
        Target::Return => "return".to_string(),
    }
}

pub fn pretty_print_liffig(p: &Program) -> String {
    let mut out = String::new();
    write_decls(p, &mut out);
    for b in &p.blocks {
        out.push_str(&label_line(b));
        out.push('\n');
        match &b.body {
            BlockBody::Return => out.push_str("  return\n"),
            BlockBody::Arms(arms) if arms.is_empty() => out.push_str("  if\n  fi\n"),
            BlockBody::Arms(arms) => {
                for (k, arm) in arms.iter().enumerate() {
                    out.push_str(if k == 0 { "  if " } else { "   | " });
                    let _ = write!(out, "{} -> ", arm.guard);
                    for c in &arm.body {
                        let _ = write!(out, "{c}; ");
                    }
                    out.push_str(&target_text(&arm.target));
                    out.push('\n');
                }
                out.push_str("  fi\n");
            }
        }
    }
    out
}

/// The command part of a triple. A leading formula is read back as the
/// guard, so an unguarded arm whose body starts with a formula (or is
/// empty) is written with an explicit `true`.
pub(crate) fn triple_command(arm: &GuardedArm) -> String {
    let mut parts: Vec<String> = Vec::new();
    let first_is_guard = matches!(arm.body.first(), Some(Command::Guard(_)));
    if !arm.guard.is_true() {
        parts.push(Command::Guard(arm.guard.clone()).to_string());
    } else if arm.body.is_empty() || first_is_guard {
        parts.push(Formula::Bool(true).to_string());
    }
    parts.extend(arm.body.iter().map(|c| c.to_string()));
    parts.join("; ")
}

pub fn pretty_print_triples(p: &Program) -> String {
    let mut out = String::new();
    write_decls(p, &mut out);
    out.push_str("Label declarations\n------------------\n");
    for b in &p.blocks {
        out.push_str(&label_line(b));
        out.push('\n');
    }
    out.push_str("\nTriples\n-------\n");
    for b in &p.blocks {
        for arm in b.arms() {
            let post = match &arm.target {
                Target::Label(l) => l.to_string(),
                Target::Return => "return".to_string(),
            };
            let _ = writeln!(out, "{{{}}} {} {{{}}}", b.label, triple_command(arm), post);
        }
    }
    out
}
