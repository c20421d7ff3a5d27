//! Builds constrained-LCS instances from shortest-common-supersequence
//! instances, and checks the length correspondence between the two with the
//! exhaustive oracles.
//!
//! For strings `R` over `Σ` and a target length `l`, with `#` a fresh
//! delimiter and `w` listing every symbol of `Σ` once:
//!
//! ```text
//! s1 = (w#)^l     s2 = (rev(w)#)^l     C_s = {#^l} ∪ { c(r) : r ∈ R }
//! ```
//!
//! where `c(y1 y2 … yz) = y1# y2# … yz#`. The constructed instance has a
//! feasible solution of length `2l` iff `R` has a common supersequence of
//! length at most `l`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format::serialize_instance;
use crate::model::{Instance, OccurrenceConstraint, Sequence, StringConstraint, Symbol};
use crate::oracle::{brute_force_dclcs, brute_force_scs, OracleLimits};

pub const DELIMITER: char = '#';

fn delimiter() -> Symbol {
    Symbol::from_char(DELIMITER).expect("delimiter is printable")
}

fn contains_delimiter(s: &Sequence) -> bool {
    s.symbols().any(|c| c == delimiter())
}

/// Strings over an explicit, delimiter-free alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScsInstance {
    strings: BTreeSet<Sequence>,
    alphabet: Vec<Symbol>,
}

impl ScsInstance {
    pub fn new<I: IntoIterator<Item = Sequence>>(strings: I, alphabet: BTreeSet<Symbol>) -> Result<Self> {
        let strings: BTreeSet<Sequence> = strings.into_iter().collect();
        if alphabet.contains(&delimiter()) || strings.iter().any(contains_delimiter) {
            return Err(Error::Input(format!("SCS input must not use the delimiter '{DELIMITER}'")));
        }
        if alphabet.is_empty() {
            return Err(Error::Input("SCS alphabet must not be empty".into()));
        }
        if let Some(stray) = strings.iter().flat_map(|s| s.symbols()).find(|c| !alphabet.contains(c)) {
            return Err(Error::Input(format!("symbol '{stray}' is not in the SCS alphabet")));
        }
        Ok(ScsInstance {
            strings,
            alphabet: alphabet.into_iter().collect(),
        })
    }

    /// Alphabet taken to be exactly the symbols used by the strings.
    pub fn from_strings<I: IntoIterator<Item = Sequence>>(strings: I) -> Result<Self> {
        let strings: Vec<Sequence> = strings.into_iter().collect();
        let alphabet = strings.iter().flat_map(|s| s.symbols()).collect();
        ScsInstance::new(strings, alphabet)
    }

    pub fn strings(&self) -> impl Iterator<Item = &Sequence> + '_ {
        self.strings.iter()
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }
}

/// `c(r)`: every symbol of `r` followed by the delimiter.
pub fn interleave(r: &Sequence) -> Result<Sequence> {
    if contains_delimiter(r) {
        return Err(Error::Input(format!("{r:?} contains the delimiter '{DELIMITER}'")));
    }
    Ok(Sequence::from_symbols(r.symbols().flat_map(|c| [c, delimiter()])))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub s1: Sequence,
    pub s2: Sequence,
    pub cs: StringConstraint,
    /// Target supersequence length.
    pub l: usize,
    pub w: Sequence,
}

impl ReductionOutput {
    /// The constructed instance with default (unbounded) occurrence caps.
    pub fn instance(&self) -> Instance {
        Instance::new(self.s1.clone(), self.s2.clone(), self.cs.clone(), OccurrenceConstraint::new())
    }

    /// Instance file with a comment header recording the source instance.
    pub fn to_instance_file(&self, scs: &ScsInstance) -> String {
        let mut out = String::new();
        let strings: Vec<String> = scs.strings().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "% reduced from shortest common supersequence");
        let _ = writeln!(out, "% R = {{{}}}", strings.join(", "));
        let _ = writeln!(out, "% l = {}", self.l);
        let _ = writeln!(out, "% w = {}", self.w);
        let _ = writeln!(out, "% |C_s| = {}, |alphabet| = {}", self.cs.len(), scs.alphabet().len() + 1);
        out.push_str(&serialize_instance(&self.instance()));
        out
    }
}

pub fn build_reduction(scs: &ScsInstance, l: usize) -> Result<ReductionOutput> {
    if l == 0 {
        return Err(Error::Parameter("target length must be at least 1".into()));
    }
    let hash = Sequence::from_symbols([delimiter()]);
    let w = Sequence::from_symbols(scs.alphabet().iter().copied());
    let s1 = w.concat(&hash).repeat(l);
    let s2 = w.reversed().concat(&hash).repeat(l);
    let mut members: BTreeSet<Sequence> = BTreeSet::from([hash.repeat(l)]);
    for r in scs.strings() {
        members.insert(interleave(r)?);
    }
    let cs = StringConstraint::from_strings(members)?;
    Ok(ReductionOutput { s1, s2, cs, l, w })
}

/// Both sides of the length correspondence, each decided by an exhaustive oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub scs_length: usize,
    /// Shortest common supersequence length is at most `l`.
    pub scs_side: bool,
    /// Longest feasible solution of the constructed instance, if any.
    pub clcs_length: Option<usize>,
    /// The constructed instance has a feasible solution of length `2l`.
    pub clcs_side: bool,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.scs_side == self.clcs_side
    }
}

/// Default limits for the correspondence check; constructed inputs have
/// length `(|Σ| + 1)·l`, beyond the default oracle cap for larger alphabets.
pub fn reduction_limits() -> OracleLimits {
    OracleLimits {
        max_shorter_len: 32,
        ..OracleLimits::default()
    }
}

pub fn verify_equivalence(scs: &ScsInstance, l: usize, limits: &OracleLimits) -> Result<EquivalenceReport> {
    let strings: Vec<Sequence> = scs.strings().cloned().collect();
    let scs_length = brute_force_scs(&strings, limits)?.len();
    let reduced = build_reduction(scs, l)?;
    let clcs_length = brute_force_dclcs(&reduced.instance(), limits)?.map(|s| s.len());
    Ok(EquivalenceReport {
        scs_length,
        scs_side: scs_length <= l,
        clcs_length,
        clcs_side: clcs_length.is_some_and(|n| n >= 2 * l),
    })
}
