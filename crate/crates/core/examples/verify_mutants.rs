//! Discharge the verification conditions of each corpus program and of its
//! mutants over the small fixpoint domain.

use liffig::corpus::{mutant, program, Entry};
use liffig::verify::{verify_program, Status};

fn main() {
    for e in Entry::ALL {
        let d = &e.inputs().fixpoint;
        let r = verify_program(program(e), d).expect("corpus programs verify");
        println!("{e}: {} VCs, all hold: {}", r.vcs.len(), r.all_hold);
        for (kind, _) in e.mutants() {
            let p = mutant(e, kind).unwrap().expect("mutants parse");
            let r = verify_program(&p, d).expect("mutants verify");
            let first = r.vcs.iter().find(|v| v.status == Status::Refuted);
            match first.and_then(|v| v.witness.as_ref().map(|w| (v, w))) {
                Some((v, w)) => println!("  {kind}: {} refuted from {}", v.vc_id, w.pre),
                None => println!("  {kind}: not refuted"),
            }
        }
    }
}
