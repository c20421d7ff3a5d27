//! Domain types shared by every solver: symbols, sequences, the two kinds of
//! constraints, instances and certified solutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A single printable, non-whitespace ASCII character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Symbol(u8);

impl Symbol {
    pub fn new(code: u8) -> Result<Self> {
        if code.is_ascii_graphic() {
            Ok(Symbol(code))
        } else {
            Err(Error::Input(format!(
                "symbol {:?} is not a printable non-whitespace ASCII character",
                code as char
            )))
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        if c.is_ascii() {
            Symbol::new(c as u8)
        } else {
            Err(Error::Input(format!("symbol {c:?} is not ASCII")))
        }
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn as_char(self) -> char {
        self.0 as char
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An ordered list of symbols. Stored 0-based; documentation of the
/// recurrences uses 1-based positions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence(Vec<u8>);

impl Sequence {
    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn from_symbols<I: IntoIterator<Item = Symbol>>(symbols: I) -> Self {
        Sequence(symbols.into_iter().map(Symbol::code).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Symbol at 0-based position `idx`.
    pub fn at(&self, idx: usize) -> Symbol {
        Symbol(self.0[idx])
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().map(|&b| Symbol(b))
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s.0);
    }

    pub fn pop(&mut self) -> Option<Symbol> {
        self.0.pop().map(Symbol)
    }

    pub fn reversed(&self) -> Sequence {
        Sequence(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Sequence) -> Sequence {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Sequence(v)
    }

    pub fn repeat(&self, times: usize) -> Sequence {
        Sequence(self.0.repeat(times))
    }

    /// Distinct symbols in ascending order.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.symbols().collect()
    }
}

impl FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(Symbol::from_char)
            .collect::<Result<Vec<_>>>()
            .map(Sequence::from_symbols)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Only printable ASCII ever gets in.
        f.write_str(std::str::from_utf8(&self.0).unwrap_or("<invalid>"))
    }
}

impl Serialize for Sequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Test helper and CLI convenience: panics on non-ASCII input.
pub fn seq(s: &str) -> Sequence {
    s.parse().expect("sequence literal must be printable ASCII")
}

/// The string constraint set; set semantics, iterated in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StringConstraint(BTreeSet<Sequence>);

impl StringConstraint {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a constraint set, rejecting duplicate members.
    pub fn from_strings<I: IntoIterator<Item = Sequence>>(strings: I) -> Result<Self> {
        let mut out = Self::new();
        for s in strings {
            out.insert(s)?;
        }
        Ok(out)
    }

    pub fn insert(&mut self, s: Sequence) -> Result<()> {
        if self.0.contains(&s) {
            return Err(Error::Input(format!("duplicate constraint string {s:?}")));
        }
        self.0.insert(s);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sequence> + '_ {
        self.0.iter()
    }

    pub fn contains(&self, s: &Sequence) -> bool {
        self.0.contains(s)
    }
}

/// Per-symbol occurrence caps. Only explicit entries are stored; every other
/// symbol receives the instance default `|s1| + |s2|`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OccurrenceConstraint {
    explicit: BTreeMap<Symbol, usize>,
}

impl OccurrenceConstraint {
    pub fn new() -> Self {
        Self::default()
    }

    /// The same cap for every listed symbol.
    pub fn uniform<I: IntoIterator<Item = Symbol>>(symbols: I, bound: usize) -> Self {
        OccurrenceConstraint {
            explicit: symbols.into_iter().map(|s| (s, bound)).collect(),
        }
    }

    pub fn set(&mut self, sym: Symbol, bound: usize) -> Result<()> {
        if self.explicit.insert(sym, bound).is_some() {
            return Err(Error::Input(format!("duplicate occurrence bound for symbol '{sym}'")));
        }
        Ok(())
    }

    pub fn explicit(&self, sym: Symbol) -> Option<usize> {
        self.explicit.get(&sym).copied()
    }

    pub fn bound(&self, sym: Symbol, default: usize) -> usize {
        self.explicit(sym).unwrap_or(default)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Symbol, usize)> + '_ {
        self.explicit.iter().map(|(&s, &b)| (s, b))
    }
}

/// Which named special case an instance falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Lcs,
    CLcs,
    RfLcs,
    DcLcs,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lcs => "LCS",
            Mode::CLcs => "C-LCS",
            Mode::RfLcs => "RF-LCS",
            Mode::DcLcs => "DC-LCS",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub s1: Sequence,
    pub s2: Sequence,
    pub cs: StringConstraint,
    pub co: OccurrenceConstraint,
}

impl Instance {
    pub fn new(s1: Sequence, s2: Sequence, cs: StringConstraint, co: OccurrenceConstraint) -> Self {
        Instance { s1, s2, cs, co }
    }

    /// Plain instance: no string constraints, default occurrence caps.
    pub fn unconstrained(s1: Sequence, s2: Sequence) -> Self {
        Instance::new(s1, s2, StringConstraint::new(), OccurrenceConstraint::new())
    }

    pub fn default_bound(&self) -> usize {
        self.s1.len() + self.s2.len()
    }

    /// Occurrence cap of `sym`, with the default applied.
    pub fn co_bound(&self, sym: Symbol) -> usize {
        self.co.bound(sym, self.default_bound())
    }

    /// Every symbol mentioned by the inputs or the constraints.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        let mut out = self.s1.alphabet();
        out.extend(self.s2.symbols());
        for c in self.cs.iter() {
            out.extend(c.symbols());
        }
        out
    }

    pub fn mode(&self) -> Mode {
        let alphabet = self.alphabet();
        let default = self.default_bound();
        let all_default = alphabet.iter().all(|&s| self.co_bound(s) >= default);
        if all_default {
            return if self.cs.is_empty() { Mode::Lcs } else { Mode::CLcs };
        }
        if self.cs.is_empty() && alphabet.iter().all(|&s| self.co_bound(s) == 1) {
            return Mode::RfLcs;
        }
        Mode::DcLcs
    }
}

/// A solution together with its embedding positions (0-based) into both inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub sequence: Sequence,
    pub pos1: Vec<usize>,
    pub pos2: Vec<usize>,
}

impl Solution {
    pub fn empty() -> Self {
        Solution {
            sequence: Sequence::empty(),
            pos1: Vec::new(),
            pos2: Vec::new(),
        }
    }

    /// Builds a solution with greedy embedding certificates, or `None` when the
    /// sequence is not a common subsequence.
    pub fn certify(sequence: Sequence, s1: &Sequence, s2: &Sequence) -> Option<Self> {
        let pos1 = embed(&sequence, s1)?;
        let pos2 = embed(&sequence, s2)?;
        Some(Solution { sequence, pos1, pos2 })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// True iff both position lists are strictly increasing and select exactly
    /// the solution's symbols.
    pub fn certificate_valid(&self, s1: &Sequence, s2: &Sequence) -> bool {
        fn check(seq: &Sequence, pos: &[usize], host: &Sequence) -> bool {
            pos.len() == seq.len()
                && pos.windows(2).all(|w| w[0] < w[1])
                && pos
                    .iter()
                    .zip(seq.as_bytes())
                    .all(|(&p, &c)| host.as_bytes().get(p) == Some(&c))
        }
        check(&self.sequence, &self.pos1, s1) && check(&self.sequence, &self.pos2, s2)
    }
}

/// Greedy left-to-right embedding of `a` into `b`.
pub fn embed(a: &Sequence, b: &Sequence) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(a.len());
    let mut it = b.as_bytes().iter().enumerate();
    for &c in a.as_bytes() {
        let (p, _) = it.by_ref().find(|(_, &d)| d == c)?;
        out.push(p);
    }
    Some(out)
}

/// True iff `a` can be obtained from `b` by deleting symbols.
pub fn is_subsequence(a: &Sequence, b: &Sequence) -> bool {
    let mut rest = b.as_bytes().iter();
    a.as_bytes().iter().all(|c| rest.any(|d| d == c))
}

pub fn occ(sigma: Symbol, s: &Sequence) -> usize {
    s.as_bytes().iter().filter(|&&c| c == sigma.code()).count()
}

/// Outcome of checking a candidate against the three defining clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub common_subsequence: bool,
    pub satisfies_strings: bool,
    pub satisfies_occurrences: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.common_subsequence && self.satisfies_strings && self.satisfies_occurrences
    }
}

pub fn verify_solution(inst: &Instance, cand: &Sequence) -> VerifyReport {
    VerifyReport {
        common_subsequence: is_subsequence(cand, &inst.s1) && is_subsequence(cand, &inst.s2),
        satisfies_strings: inst.cs.iter().all(|c| is_subsequence(c, cand)),
        satisfies_occurrences: cand.alphabet().iter().all(|&s| occ(s, cand) <= inst.co_bound(s)),
    }
}
