//! Corpus sources, embedded at build time from the workspace `corpus/`
//! directory.

pub const EGYPTIAN: &str = include_str!("../../../../corpus/egyptian/source.liffig");
pub const FASTEXP: &str = include_str!("../../../../corpus/fastexp/source.liffig");
pub const DNF_PARTITION: &str = include_str!("../../../../corpus/dnf_partition/source.liffig");
pub const FH_PARTITION: &str = include_str!("../../../../corpus/fh_partition/source.liffig");
pub const FH_PARTITION_MEDIAN: &str =
    include_str!("../../../../corpus/fh_partition_median/source.liffig");

/// Per-entry input schema, examples and domains.
pub mod inputs {
    pub const EGYPTIAN: &str = include_str!("../../../../corpus/egyptian/inputs.json");
    pub const FASTEXP: &str = include_str!("../../../../corpus/fastexp/inputs.json");
    pub const DNF_PARTITION: &str = include_str!("../../../../corpus/dnf_partition/inputs.json");
    pub const FH_PARTITION: &str = include_str!("../../../../corpus/fh_partition/inputs.json");
    pub const FH_PARTITION_MEDIAN: &str =
        include_str!("../../../../corpus/fh_partition_median/inputs.json");
}

macro_rules! mutants {
    ($dir:literal) => {
        [
            ("wrong_increment", include_str!(concat!("../../../../corpus/", $dir, "/mutants/wrong_increment.liffig"))),
            ("swapped_guard", include_str!(concat!("../../../../corpus/", $dir, "/mutants/swapped_guard.liffig"))),
            ("off_by_one", include_str!(concat!("../../../../corpus/", $dir, "/mutants/off_by_one.liffig"))),
        ]
    };
}

/// Single-edit mutants of each program, by kind.
pub mod mutants {
    pub const EGYPTIAN: [(&str, &str); 3] = mutants!("egyptian");
    pub const FASTEXP: [(&str, &str); 3] = mutants!("fastexp");
    pub const DNF_PARTITION: [(&str, &str); 3] = mutants!("dnf_partition");
    pub const FH_PARTITION: [(&str, &str); 3] = mutants!("fh_partition");
    pub const FH_PARTITION_MEDIAN: [(&str, &str); 3] = mutants!("fh_partition_median");
}

/// The listings as published, verbatim, including their prose assertions.
pub mod published {
    pub const EGYPTIAN: &str = include_str!("../../../../corpus/egyptian/published/egyptian.liffig");
    /// The four incremental triple-form versions of Egyptian multiplication.
    pub const EGYPTIAN_TRIPLES: [&str; 4] = [
        include_str!("../../../../corpus/egyptian/published/v1.triples"),
        include_str!("../../../../corpus/egyptian/published/v2.triples"),
        include_str!("../../../../corpus/egyptian/published/v3.triples"),
        include_str!("../../../../corpus/egyptian/published/v4.triples"),
    ];
    pub const DNF: &str = include_str!("../../../../corpus/dnf_partition/published/dnf.liffig");
    pub const FH: &str = include_str!("../../../../corpus/fh_partition/published/fh.liffig");
    pub const DNF_C: &str = include_str!("../../../../corpus/dnf_partition/published/dnf.c");
    pub const FH_C: &str = include_str!("../../../../corpus/fh_partition/published/fh.c");
    pub const FH_ORIGINAL_C: &str =
        include_str!("../../../../corpus/fh_partition/published/fh_original.c");
    pub const ALG63_C: &str = include_str!("../../../../corpus/alg63/published/alg63.c");
}
