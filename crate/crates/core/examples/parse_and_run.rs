//! Parse a small Liffig program, report a located error, then run the
//! corpus Egyptian multiplication with a trace.

use liffig::corpus::{program, Entry};
use liffig::interp::{Interpreter, RunConfig};
use liffig::model::{State, Value};
use liffig::parser::{ParseOptions, SourceFile};

const BROKEN: &str = "var x: int
S: true
  if x > 0 -> x := x - 1; goto Q
  fi
H: true
  return
";

fn main() {
    if let Err(diags) = SourceFile::detect(BROKEN).parse(ParseOptions::default()) {
        for d in diags {
            println!("{}", d.render("broken.liffig"));
        }
    }

    let interp = Interpreter::new(program(Entry::Egyptian)).expect("corpus programs expand");
    let inputs = State::new().with("n", Value::int(13)).with("a", Value::Float(3.0));
    let mut cfg = RunConfig::with_inputs(inputs);
    cfg.trace = true;
    let r = interp.run(&cfg);
    print!("{}", r.trace.dump());
    println!("outcome {:?} after {} steps, out = {:?}", r.outcome, r.steps, r.state.out());
    println!("additions: {}", r.trace.counters.additions);
}
