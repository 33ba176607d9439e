//! Build the code matrix of Egyptian multiplication, square it, and check
//! the fixpoint property MA ⊆ A on a small domain.

use liffig::corpus::{program, Entry};
use liffig::verify::{fixpoint_check, matrix_of};

fn main() {
    let p = program(Entry::Egyptian);
    let m = matrix_of(p);
    println!("labels: {:?}", m.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>());
    for cell in m.cell_listing() {
        println!("  [{}, {}] {}", cell.row, cell.col, cell.commands.join(" + "));
    }
    let two_steps = m.product(&m).expect("same labels").simplified();
    println!("M^2 has {} nonzero cells", two_steps.cell_listing().len());

    let f = fixpoint_check(p, &Entry::Egyptian.inputs().fixpoint).expect("fixpoint check runs");
    println!("MA contained in A: {}, equal: {}", f.contained, f.equal);
}
