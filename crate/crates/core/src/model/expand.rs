use thiserror::Error;

use super::ast::{Formula, Ident, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("cyclic assertion reference: {}", .0.iter().map(Ident::as_str).collect::<Vec<_>>().join(" -> "))]
    Cycle(Vec<Ident>),
    #[error("assertion refers to unknown label {0}")]
    UnknownLabel(Ident),
}

/// Replace every label reference in `f` by that label's (recursively
/// expanded) assertion.
pub fn expand_label_refs(f: &Formula, program: &Program) -> Result<Formula, ExpandError> {
    let mut stack = Vec::new();
    expand(f, program, &mut stack)
}

fn expand(f: &Formula, p: &Program, stack: &mut Vec<Ident>) -> Result<Formula, ExpandError> {
    Ok(match f {
        Formula::Label(l) => {
            if let Some(pos) = stack.iter().position(|s| s == l) {
                let mut cycle = stack[pos..].to_vec();
                cycle.push(l.clone());
                return Err(ExpandError::Cycle(cycle));
            }
            let block = p
                .block(l.as_str())
                .ok_or_else(|| ExpandError::UnknownLabel(l.clone()))?;
            stack.push(l.clone());
            let out = expand(&block.assertion, p, stack)?;
            stack.pop();
            out
        }
        Formula::Not(g) => Formula::Not(Box::new(expand(g, p, stack)?)),
        Formula::And(fs) => Formula::And(
            fs.iter()
                .map(|g| expand(g, p, stack))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Or(fs) => Formula::Or(
            fs.iter()
                .map(|g| expand(g, p, stack))
                .collect::<Result<_, _>>()?,
        ),
        other => other.clone(),
    })
}

/// The expanded assertion of `label`, cycle errors included.
pub fn expanded_assertion(p: &Program, label: &str) -> Result<Formula, ExpandError> {
    expand_label_refs(&Formula::Label(Ident::new(label)), p)
}
