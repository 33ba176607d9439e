//! Compile a transcription with the host C compiler and run it on batches
//! of input states, for comparison against the interpreter.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use thiserror::Error;

use super::{transpile, Binding, TranspileConfig, TranspileError};
use crate::model::{Ident, Int, IntArray, Program, State, Type, Value};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("no C compiler found (tried $CC and cc)")]
    NoCompiler,
    #[error(transparent)]
    Transpile(#[from] TranspileError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("C compiler rejected the transcription:\n{0}")]
    Rejected(String),
    #[error("input {case}: {detail}")]
    Input { case: usize, detail: String },
    #[error("the compiled program stopped abnormally at input {case} ({status}): {stderr}")]
    Crashed { case: usize, status: String, stderr: String },
    #[error("unreadable output at input {case}: {detail}")]
    Output { case: usize, detail: String },
}

/// The C compiler to use: `$CC` if set, else `cc`, if it runs.
pub fn c_compiler() -> Option<PathBuf> {
    let cc = std::env::var_os("CC").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("cc"));
    let ok = Command::new(&cc)
        .arg("--version")
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .status()
        .is_ok_and(|s| s.success());
    ok.then_some(cc)
}

/// A transcription linked into a driver that reads input states on stdin
/// and writes final states on stdout, one line per state.
pub struct CompiledProgram {
    _dir: tempfile::TempDir,
    exe: PathBuf,
    params: Vec<(Ident, Type, Binding)>,
}

/// What a compiled run produced.
#[derive(Clone, Debug, PartialEq)]
pub struct CRun {
    /// Parameter arrays and pointer-carried variables after the call.
    pub state: State,
    /// Values passed to the emit function, in order.
    pub printed: Vec<f64>,
}

const SUPPORT: &str = r#"#include <stdio.h>
#include <stdlib.h>
void swap(int a[], int i, int j) { int t = a[i]; a[i] = a[j]; a[j] = t; }
/* the interpreter's random stream cannot be reproduced here */
int rndm(int lo, int hi) { (void)lo; (void)hi; abort(); }
void emit(double v) { printf("p %.17g ", v); }
"#;

impl CompiledProgram {
    pub fn build(p: &Program, cfg: &TranspileConfig) -> Result<CompiledProgram, CompileError> {
        let cc = c_compiler().ok_or(CompileError::NoCompiler)?;
        let mut cfg = cfg.clone();
        cfg.prelude = true;
        cfg.emit_fn = "emit".to_string();
        let body = transpile(p, &cfg)?;
        let params: Vec<(Ident, Type, Binding)> = cfg
            .params()
            .into_iter()
            .map(|(v, b)| (v.clone(), p.signature.type_of(v.as_str()).unwrap_or(Type::Int), b.clone()))
            .collect();

        let mut src = String::from(SUPPORT);
        src.push_str(&body);
        src.push_str(&driver(&cfg.fn_name, &params));

        let dir = tempfile::tempdir()?;
        let c_path = dir.path().join("prog.c");
        let exe = dir.path().join("prog");
        std::fs::write(&c_path, src)?;
        compile(&cc, &c_path, &exe)?;
        Ok(CompiledProgram {
            _dir: dir,
            exe,
            params,
        })
    }

    /// Run the function once per input state.
    pub fn run(&self, inputs: &[State]) -> Result<Vec<CRun>, CompileError> {
        let mut stdin = format!("{}\n", inputs.len());
        for (case, s) in inputs.iter().enumerate() {
            for (v, ty, b) in &self.params {
                let bad = |detail: String| CompileError::Input { case, detail };
                match (b, ty, s.get(v.as_str())) {
                    (Binding::Result(_), ..) => {}
                    (_, Type::IntArray, Some(Value::Array(a))) if a.lo() == 0 => {
                        let _ = write!(stdin, "{}", a.len());
                        for e in a.elems() {
                            let _ = write!(stdin, " {}", small(e).ok_or_else(|| bad(format!("{v}: {e} exceeds int")))?);
                        }
                        stdin.push('\n');
                    }
                    (_, Type::IntArray, other) => {
                        return Err(bad(format!("{v} must be a zero-based array, got {other:?}")))
                    }
                    (_, Type::Int, Some(Value::Int(x))) => {
                        let _ = writeln!(stdin, "{}", small(x).ok_or_else(|| bad(format!("{v}: {x} exceeds int")))?);
                    }
                    (_, Type::Float, Some(Value::Float(x))) => {
                        let _ = writeln!(stdin, "{x:?}");
                    }
                    (_, Type::Float, Some(Value::Int(x))) => {
                        let _ = writeln!(stdin, "{x}");
                    }
                    (Binding::Pointer, _, None) => stdin.push_str("0\n"),
                    (_, _, other) => return Err(bad(format!("{v}: expected {ty}, got {other:?}"))),
                }
            }
        }

        let mut child = Command::new(&self.exe)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()?;
        // feed stdin from another thread so a large batch cannot fill both pipes
        let mut pipe = child.stdin.take().expect("piped");
        let writer = std::thread::spawn(move || pipe.write_all(stdin.as_bytes()));
        let out = child.wait_with_output()?;
        writer.join().expect("stdin writer panicked")?;
        let text = String::from_utf8_lossy(&out.stdout);
        let lines: Vec<&str> = text.lines().collect();
        if !out.status.success() || lines.len() != inputs.len() {
            return Err(CompileError::Crashed {
                case: lines.len(),
                status: out.status.to_string(),
                stderr: String::from_utf8_lossy(&out.stderr).trim().to_string(),
            });
        }
        lines.iter().enumerate().map(|(case, l)| self.parse_line(case, l)).collect()
    }

    fn parse_line(&self, case: usize, line: &str) -> Result<CRun, CompileError> {
        let bad = |detail: &str| CompileError::Output {
            case,
            detail: format!("{detail} in `{line}`"),
        };
        let mut toks = line.split_whitespace().peekable();
        let mut printed = Vec::new();
        while toks.peek() == Some(&"p") {
            toks.next();
            let v = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad printed value"))?;
            printed.push(v);
        }
        let mut state = State::new();
        for (v, ty, b) in &self.params {
            if matches!(b, Binding::Param) && *ty != Type::IntArray {
                continue;
            }
            if toks.next() != Some(v.as_str()) {
                return Err(bad(&format!("expected `{v}`")));
            }
            let mut int = || -> Result<i64, CompileError> {
                toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad integer"))
            };
            let value = match ty {
                Type::IntArray => {
                    let len = int()?;
                    let elems = (0..len).map(|_| int()).collect::<Result<Vec<_>, _>>()?;
                    Value::array(IntArray::zero_based(elems))
                }
                Type::Int => Value::int(int()?),
                Type::Float => Value::Float(toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad float"))?),
            };
            state.set(v.clone(), value);
        }
        Ok(CRun { state, printed })
    }
}

fn small(x: &Int) -> Option<i32> {
    x.to_i64().and_then(|v| i32::try_from(v).ok())
}

fn compile(cc: &Path, c_path: &Path, exe: &Path) -> Result<(), CompileError> {
    let out = Command::new(cc)
        .args(["-std=c99", "-O1", "-o"])
        .arg(exe)
        .arg(c_path)
        .output()?;
    if out.status.success() {
        Ok(())
    } else {
        Err(CompileError::Rejected(String::from_utf8_lossy(&out.stderr).into_owned()))
    }
}

/// `main`: read a case count, then per case every parameter's input, call
/// the function and print the printed values and the outputs.
fn driver(fn_name: &str, params: &[(Ident, Type, Binding)]) -> String {
    let mut d = String::from("\nint main(void) {\n  int cases;\n  if (scanf(\"%d\", &cases) != 1) return 2;\n  for (int k = 0; k < cases; ++k) {\n");
    let mut args = Vec::new();
    let mut report = Vec::new();
    for (v, ty, b) in params {
        let c = format!("v_{v}");
        let (ct, fmt_in, fmt_out) = match ty {
            Type::Float => ("double", "%lf", "%.17g"),
            _ => ("int", "%d", "%d"),
        };
        match (b, ty) {
            (Binding::Result(_), _) => {
                let _ = writeln!(d, "    {ct} {c} = 0;");
                args.push(format!("&{c}"));
                report.push(format!("    printf(\" {v} {fmt_out}\", {c});\n"));
            }
            (_, Type::IntArray) => {
                let _ = writeln!(d, "    int {c}_len;\n    if (scanf(\"%d\", &{c}_len) != 1) return 2;");
                let _ = writeln!(d, "    int* {c} = malloc(sizeof(int) * ({c}_len + 1));");
                let _ = writeln!(d, "    for (int q = 0; q < {c}_len; ++q) if (scanf(\"%d\", &{c}[q]) != 1) return 2;");
                args.push(c.clone());
                report.push(format!(
                    "    printf(\" {v} %d\", {c}_len);\n    for (int q = 0; q < {c}_len; ++q) printf(\" %d\", {c}[q]);\n    free({c});\n"
                ));
            }
            (Binding::Pointer, _) => {
                let _ = writeln!(d, "    {ct} {c};\n    if (scanf(\"{fmt_in}\", &{c}) != 1) return 2;");
                args.push(format!("&{c}"));
                report.push(format!("    printf(\" {v} {fmt_out}\", {c});\n"));
            }
            _ => {
                let _ = writeln!(d, "    {ct} {c};\n    if (scanf(\"{fmt_in}\", &{c}) != 1) return 2;");
                args.push(c);
            }
        }
    }
    let _ = writeln!(d, "    {fn_name}({});", args.join(", "));
    for r in report {
        d.push_str(&r);
    }
    d.push_str("    printf(\"\\n\");\n    fflush(stdout);\n  }\n  return 0;\n}\n");
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{ParseOptions, SourceFile};

    #[test]
    fn compiled_counter_matches_by_hand() {
        if c_compiler().is_none() {
            eprintln!("no C compiler; skipping");
            return;
        }
        let src = "var n: int\nvar k: int output\nvar b: int[]\nS: true\n  if true -> goto L\n  fi\nL: true\n  if n > 0 -> b[n - 1] := n; n := n - 1; k := k + 1; goto L\n   | n <= 0 -> print k; return\n  fi\nH: true\n  return\n";
        let p = SourceFile::detect(src).parse(ParseOptions::default()).unwrap().program;
        let cfg = TranspileConfig::for_program(&p, "count");
        let exe = CompiledProgram::build(&p, &cfg).unwrap();
        let input = State::new()
            .with("n", Value::int(3))
            .with("k", Value::int(10))
            .with("b", Value::array(IntArray::zero_based([0, 0, 0])));
        let got = exe.run(&[input]).unwrap();
        assert_eq!(got[0].printed, [13.0]);
        assert_eq!(got[0].state.get("k").unwrap().to_string(), "13");
        assert_eq!(got[0].state.get("b").unwrap().to_string(), "[1,2,3]");
    }
}
