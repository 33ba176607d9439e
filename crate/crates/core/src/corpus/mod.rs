//! The program corpus, reference oracles, the Quicksort harness and the
//! information-yield analysis.

pub mod info;
pub mod partition;
pub mod quicksort;
pub mod sources;
pub mod native;
mod suite;
pub mod versions;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::model::{Ident, Program, State, Type, Value};
use crate::parser::{Diagnostic, ParseOptions, SourceFile};
use crate::transpile::{Binding, TranspileConfig};
use crate::verify::Domain;

pub use suite::{cases, run_suite, survey_alg63, Alg63Case, Alg63Survey, CaseFailure, SuiteMode, SuiteReport};

/// The Liffig programs that ship with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Entry {
    Egyptian,
    Fastexp,
    DnfPartition,
    FhPartition,
    FhPartitionMedian,
}

impl Entry {
    pub const ALL: [Entry; 5] = [
        Entry::Egyptian,
        Entry::Fastexp,
        Entry::DnfPartition,
        Entry::FhPartition,
        Entry::FhPartitionMedian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Entry::Egyptian => "egyptian",
            Entry::Fastexp => "fastexp",
            Entry::DnfPartition => "dnf_partition",
            Entry::FhPartition => "fh_partition",
            Entry::FhPartitionMedian => "fh_partition_median",
        }
    }

    pub fn from_name(name: &str) -> Option<Entry> {
        Entry::ALL.into_iter().find(|e| e.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn source(self) -> &'static str {
        match self {
            Entry::Egyptian => sources::EGYPTIAN,
            Entry::Fastexp => sources::FASTEXP,
            Entry::DnfPartition => sources::DNF_PARTITION,
            Entry::FhPartition => sources::FH_PARTITION,
            Entry::FhPartitionMedian => sources::FH_PARTITION_MEDIAN,
        }
    }

    /// Where the program comes from and how it differs from its listing.
    pub fn provenance(self) -> &'static str {
        match self {
            Entry::Egyptian => "Egyptian multiplication in Liffig, as published; `a` is a float.",
            Entry::Fastexp => "Egyptian multiplication with `+` replaced by `*`: exponentiation by squaring.",
            Entry::DnfPartition => {
                "Three-way partition after Algorithm 63; the pivot value X is an input and the \
                 exit assignments to i and j sit on A's `s = t` arm."
            }
            Entry::FhPartition => {
                "Foley and Hoare's partition with pivot (a[m] + a[n]) / 2 and strengthened \
                 E, A and H assertions."
            }
            Entry::FhPartitionMedian => {
                "Foley and Hoare's partition with the middle element a[(m + n) / 2] as pivot, \
                 as in their C routine."
            }
        }
    }

    fn inputs_json(self) -> &'static str {
        match self {
            Entry::Egyptian => sources::inputs::EGYPTIAN,
            Entry::Fastexp => sources::inputs::FASTEXP,
            Entry::DnfPartition => sources::inputs::DNF_PARTITION,
            Entry::FhPartition => sources::inputs::FH_PARTITION,
            Entry::FhPartitionMedian => sources::inputs::FH_PARTITION_MEDIAN,
        }
    }

    /// Input schema, examples and domains.
    pub fn inputs(self) -> &'static InputSpec {
        const INIT: OnceLock<InputSpec> = OnceLock::new();
        static SPECS: [OnceLock<InputSpec>; 5] = [INIT; 5];
        SPECS[self.index()].get_or_init(|| {
            serde_json::from_str(self.inputs_json()).unwrap_or_else(|e| panic!("{}/inputs.json: {e}", self.name()))
        })
    }

    /// `(kind, source)` for each checked-in mutant.
    pub fn mutants(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Entry::Egyptian => &sources::mutants::EGYPTIAN,
            Entry::Fastexp => &sources::mutants::FASTEXP,
            Entry::DnfPartition => &sources::mutants::DNF_PARTITION,
            Entry::FhPartition => &sources::mutants::FH_PARTITION,
            Entry::FhPartitionMedian => &sources::mutants::FH_PARTITION_MEDIAN,
        }
    }

    /// The C signature each program is transcribed into.
    pub fn transpile_config(self) -> TranspileConfig {
        let p = program(self);
        match self {
            Entry::Egyptian => TranspileConfig::for_program(p, "egyptian"),
            Entry::Fastexp => TranspileConfig::for_program(p, "fastexp"),
            Entry::DnfPartition => TranspileConfig::for_program(p, "partition"),
            Entry::FhPartition | Entry::FhPartitionMedian => {
                // The published routine: `partition(int a[], int* Ip, int* Jp, int m, int n)`.
                let mut cfg = TranspileConfig::for_program(p, "partition");
                cfg.bindings = ["a", "i", "j", "m", "n", "r", "a0"]
                    .iter()
                    .map(|v| {
                        let b = match *v {
                            "a" | "m" | "n" => Binding::Param,
                            "i" => Binding::Result("Ip".into()),
                            "j" => Binding::Result("Jp".into()),
                            "a0" => Binding::Omitted,
                            _ => Binding::Local,
                        };
                        (Ident::new(v), b)
                    })
                    .collect();
                cfg
            }
        }
    }
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The parsed program of a corpus entry.
pub fn program(e: Entry) -> &'static Program {
    const INIT: OnceLock<Program> = OnceLock::new();
    static PROGRAMS: [OnceLock<Program>; 5] = [INIT; 5];
    PROGRAMS[e.index()].get_or_init(|| {
        SourceFile::detect(e.source())
            .parse(ParseOptions::default())
            .unwrap_or_else(|d| panic!("{} does not parse: {d:?}", e.name()))
            .program
    })
}

/// Parse one of an entry's mutants by kind.
pub fn mutant(e: Entry, kind: &str) -> Option<Result<Program, Vec<Diagnostic>>> {
    let (_, src) = e.mutants().iter().find(|(k, _)| *k == kind)?;
    Some(SourceFile::detect(*src).parse(ParseOptions::default()).map(|p| p.program))
}

/// Contents of an entry's `inputs.json`.
#[derive(Clone, Debug, Deserialize)]
pub struct InputSpec {
    /// Input variables and their types, as documentation of the schema.
    pub variables: BTreeMap<String, String>,
    pub examples: Vec<serde_json::Map<String, serde_json::Value>>,
    /// Inputs of the exhaustive suite.
    pub exhaustive: Grid,
    /// Ranges the random suite draws from.
    pub random: Grid,
    /// Domain for VC discharge.
    pub verify: Domain,
    /// Smaller domain for the matrix fixpoint check.
    pub fixpoint: Domain,
}

/// Ranges of inputs: scalars by name, and arrays by length and element.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default)]
pub struct Grid {
    pub ranges: BTreeMap<String, (i64, i64)>,
    pub array_len: Option<(usize, usize)>,
    pub elem_range: Option<(i64, i64)>,
}

impl Grid {
    pub fn range(&self, var: &str) -> (i64, i64) {
        self.ranges.get(var).copied().unwrap_or((0, 0))
    }
}

impl InputSpec {
    /// The examples as states, typed by `p`'s signature.
    pub fn example_states(&self, p: &Program) -> Result<Vec<State>, String> {
        self.examples
            .iter()
            .map(|ex| {
                let mut s = State::new();
                for (k, v) in ex {
                    let ty = p.signature.type_of(k).ok_or_else(|| format!("unknown variable `{k}`"))?;
                    s.set(Ident::new(k), Value::from_json(v, ty)?);
                }
                Ok(s)
            })
            .collect()
    }

    /// The declared type of each input, checked against `p`.
    pub fn types(&self, p: &Program) -> Result<Vec<(Ident, Type)>, String> {
        self.variables
            .iter()
            .map(|(k, declared)| {
                let ty = p.signature.type_of(k).ok_or_else(|| format!("unknown variable `{k}`"))?;
                if ty.to_string() != *declared {
                    return Err(format!("`{k}` is declared {ty}, the schema says {declared}"));
                }
                Ok((Ident::new(k), ty))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::validate;

    #[test]
    fn every_entry_parses_validates_and_matches_its_schema() {
        for e in Entry::ALL {
            let p = program(e);
            assert!(validate(p).iter().all(|d| !d.is_error()), "{e}");
            let spec = e.inputs();
            spec.types(p).unwrap_or_else(|m| panic!("{e}: {m}"));
            assert!(!spec.example_states(p).unwrap().is_empty());
            assert_eq!(Entry::from_name(e.name()), Some(e));
        }
    }

    #[test]
    fn every_mutant_parses_and_differs_from_its_source() {
        for e in Entry::ALL {
            assert_eq!(e.mutants().len(), 3);
            for (kind, src) in e.mutants() {
                let m = mutant(e, kind).unwrap().unwrap_or_else(|d| panic!("{e}/{kind}: {d:?}"));
                assert_ne!(&m, program(e), "{e}/{kind}");
                assert_ne!(*src, e.source());
            }
        }
    }
}
