//! Colored alphabet, hash-function families over it, and the per-symbol label
//! sets that drive the subset recurrence.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fpt::EffectiveOcc;
use crate::model::{Sequence, Symbol};

/// Labels live in a `u32` bitmask, so at most this many are supported.
pub const MAX_LABELS: usize = 31;

/// Default cap on the number of functions the exhaustive family may enumerate.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1_000_000;

pub const DEFAULT_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredSymbol {
    pub symbol: Symbol,
    /// 1-based copy index.
    pub index: usize,
}

impl fmt::Display for ColoredSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.symbol, self.index)
    }
}

/// Pairs `(σ, i)` for `i` in `1..=C'_o(σ)`, sorted by symbol then index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColoredAlphabet {
    members: Vec<ColoredSymbol>,
}

impl ColoredAlphabet {
    pub fn members(&self) -> &[ColoredSymbol] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of copies of each symbol, in symbol order.
    pub fn copies(&self) -> Vec<(Symbol, usize)> {
        let mut out: Vec<(Symbol, usize)> = Vec::new();
        for m in &self.members {
            match out.last_mut() {
                Some((s, n)) if *s == m.symbol => *n += 1,
                _ => out.push((m.symbol, 1)),
            }
        }
        out
    }
}

pub fn build_colored_alphabet(c_eff: &EffectiveOcc) -> ColoredAlphabet {
    let members = c_eff
        .iter()
        .flat_map(|(symbol, bound)| (1..=bound).map(move |index| ColoredSymbol { symbol, index }))
        .collect();
    ColoredAlphabet { members }
}

/// A total map from the colored alphabet to labels `1..=k`, stored
/// positionally against the alphabet's member order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HashAssignment {
    k: usize,
    labels: Vec<u8>,
}

impl HashAssignment {
    pub fn new(k: usize, labels: Vec<u8>) -> Result<Self> {
        if k == 0 || k > MAX_LABELS {
            return Err(Error::Parameter(format!("label count {k} outside 1..={MAX_LABELS}")));
        }
        if let Some(bad) = labels.iter().find(|&&l| l == 0 || l as usize > k) {
            return Err(Error::Parameter(format!("label {bad} outside 1..={k}")));
        }
        Ok(HashAssignment { k, labels })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Label of the alphabet member at `position`.
    pub fn label(&self, position: usize) -> u8 {
        self.labels[position]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
}

/// A set of labels, bit `λ - 1` standing for label `λ`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet(pub u32);

impl LabelSet {
    pub fn full(k: usize) -> Self {
        LabelSet(((1u64 << k) - 1) as u32)
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        LabelSet(labels.into_iter().fold(0, |acc, l| acc | 1 << (l - 1)))
    }

    pub fn contains(self, label: usize) -> bool {
        label >= 1 && self.0 >> (label - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |b| self.0 >> b & 1 == 1).map(|b| b + 1)
    }
}

/// `l(σ) = { f(σ, i) }` for every symbol of the colored alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelFunction {
    sets: BTreeMap<Symbol, LabelSet>,
}

impl LabelFunction {
    pub fn from_sets<I: IntoIterator<Item = (Symbol, LabelSet)>>(sets: I) -> Self {
        LabelFunction {
            sets: sets.into_iter().collect(),
        }
    }

    /// Labels of `sym`; empty for symbols outside the colored alphabet.
    pub fn get(&self, sym: Symbol) -> LabelSet {
        self.sets.get(&sym).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, LabelSet)> + '_ {
        self.sets.iter().map(|(&s, &l)| (s, l))
    }

    /// Union of all label sets.
    pub fn image(&self) -> LabelSet {
        LabelSet(self.sets.values().fold(0, |acc, l| acc | l.0))
    }

    /// Dense lookup table indexed by symbol byte.
    pub fn table(&self) -> [u32; 128] {
        let mut t = [0u32; 128];
        for (s, l) in self.iter() {
            t[s.code() as usize] = l.0;
        }
        t
    }
}

pub fn label_function(f: &HashAssignment, sigma_tilde: &ColoredAlphabet) -> LabelFunction {
    let mut sets: BTreeMap<Symbol, LabelSet> = BTreeMap::new();
    for (pos, m) in sigma_tilde.members().iter().enumerate() {
        sets.entry(m.symbol).or_default().0 |= 1 << (f.label(pos) - 1);
    }
    LabelFunction { sets }
}

/// Which hash family to iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    /// Every total map `Σ̃ → {1..k}` in mixed-radix order, refused beyond `cap`.
    Exhaustive { cap: u64 },
    /// One canonical coloring per per-symbol count vector `(n_σ)` with
    /// `n_σ ≤ C'_o(σ)` and `Σ n_σ = k`: copies `1..=n_σ` of `σ` get a private
    /// contiguous block of labels. Any solution with those counts is colorful
    /// under that coloring, so the family is complete for the recurrence while
    /// being far smaller than the exhaustive one.
    Exact,
    /// `⌈e^k ln(1/δ)⌉` independent uniform colorings drawn from `seed`.
    Randomized { delta: f64, seed: u64 },
}

impl FamilySpec {
    pub fn exhaustive() -> Self {
        FamilySpec::Exhaustive {
            cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }

    pub fn randomized(seed: u64) -> Self {
        FamilySpec::Randomized {
            delta: DEFAULT_DELTA,
            seed,
        }
    }

    /// Whether an empty result proves infeasibility.
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, FamilySpec::Randomized { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Exhaustive { .. } => "exhaustive",
            FamilySpec::Exact => "exact",
            FamilySpec::Randomized { .. } => "random",
        }
    }
}

/// Number of random colorings needed so that a fixed k-subset is missed with
/// probability at most `delta`.
pub fn randomized_trials(k: usize, delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta {delta} must lie in (0, 1)")));
    }
    Ok(((k as f64).exp() * (1.0 / delta).ln()).ceil() as u64)
}

/// A finite, deterministic stream of hash assignments.
pub struct Family {
    k: usize,
    len: Option<u64>,
    inner: FamilyIter,
}

enum FamilyIter {
    Counter { digits: Option<Vec<u8>> },
    Compositions { copies: Vec<usize>, counts: Option<Vec<usize>> },
    Random { rng: Box<ChaCha8Rng>, remaining: u64, width: usize },
}

impl Family {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of assignments, when known up front.
    pub fn size(&self) -> Option<u64> {
        self.len
    }
}

pub fn enumerate_family(sigma_tilde: &ColoredAlphabet, k: usize, spec: FamilySpec) -> Result<Family> {
    if k == 0 || k > MAX_LABELS {
        return Err(Error::Parameter(format!("k = {k} outside 1..={MAX_LABELS}")));
    }
    let width = sigma_tilde.len();
    let (len, inner) = match spec {
        FamilySpec::Exhaustive { cap } => {
            let total = (k as u64)
                .checked_pow(width as u32)
                .filter(|&t| t <= cap)
                .ok_or_else(|| {
                    Error::Sizing(format!(
                        "exhaustive family needs {k}^{width} functions, above the cap of {cap}"
                    ))
                })?;
            (Some(total), FamilyIter::Counter { digits: Some(vec![1; width]) })
        }
        FamilySpec::Exact => {
            let copies: Vec<usize> = sigma_tilde.copies().into_iter().map(|(_, n)| n).collect();
            let counts = first_composition(&copies, k);
            (None, FamilyIter::Compositions { copies, counts })
        }
        FamilySpec::Randomized { delta, seed } => {
            let trials = randomized_trials(k, delta)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            (
                Some(trials),
                FamilyIter::Random {
                    rng: Box::new(rng),
                    remaining: trials,
                    width,
                },
            )
        }
    };
    Ok(Family { k, len, inner })
}

/// Lexicographically smallest vector `c` with `c[i] ≤ copies[i]` and sum `k`.
fn first_composition(copies: &[usize], k: usize) -> Option<Vec<usize>> {
    let mut counts = vec![0; copies.len()];
    let mut rest = k;
    for i in (0..copies.len()).rev() {
        let take = rest.min(copies[i]);
        counts[i] = take;
        rest -= take;
    }
    (rest == 0).then_some(counts)
}

/// Next vector in lexicographic order with the same sum and bounds.
fn next_composition(copies: &[usize], counts: &mut [usize]) -> bool {
    let n = counts.len();
    // Find the rightmost position that can grow while something to its right shrinks.
    let mut suffix_sum = 0;
    for i in (0..n).rev() {
        if suffix_sum > 0 && counts[i] < copies[i] {
            counts[i] += 1;
            let mut rest = suffix_sum - 1;
            for j in (i + 1..n).rev() {
                let take = rest.min(copies[j]);
                counts[j] = take;
                rest -= take;
            }
            debug_assert_eq!(rest, 0);
            return true;
        }
        suffix_sum += counts[i];
    }
    false
}

fn composition_labels(copies: &[usize], counts: &[usize]) -> Vec<u8> {
    let mut labels = Vec::with_capacity(copies.iter().sum());
    let mut next = 1u8;
    for (&c, &n) in copies.iter().zip(counts) {
        let first = if n > 0 { next } else { 1 };
        for i in 0..c {
            labels.push(if i < n { next + i as u8 } else { first });
        }
        next += n as u8;
    }
    labels
}

impl Iterator for Family {
    type Item = HashAssignment;

    fn next(&mut self) -> Option<HashAssignment> {
        let k = self.k;
        let labels = match &mut self.inner {
            FamilyIter::Counter { digits } => {
                let current = digits.as_ref()?.clone();
                // Odometer: the last member varies fastest.
                let d = digits.as_mut().unwrap();
                let mut pos = d.len();
                loop {
                    if pos == 0 {
                        *digits = None;
                        break;
                    }
                    pos -= 1;
                    if (d[pos] as usize) < k {
                        d[pos] += 1;
                        break;
                    }
                    d[pos] = 1;
                }
                current
            }
            FamilyIter::Compositions { copies, counts } => {
                let current = counts.as_ref()?;
                let labels = composition_labels(copies, current);
                let c = counts.as_mut().unwrap();
                if !next_composition(copies, c) {
                    *counts = None;
                }
                labels
            }
            FamilyIter::Random { rng, remaining, width } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                (0..*width).map(|_| rng.gen_range(1..=k as u8)).collect()
            }
        };
        Some(HashAssignment { k, labels })
    }
}

/// Whether the occurrences of `s` can receive pairwise distinct labels, each
/// occurrence of `σ` drawing from `l(σ) ∩ allowed`. Decided by bipartite
/// matching with augmenting paths.
pub fn is_colorful(s: &Sequence, l: &LabelFunction, allowed: LabelSet) -> bool {
    let slots: Vec<u32> = s.symbols().map(|sym| l.get(sym).0 & allowed.0).collect();
    if slots.len() > allowed.len() {
        return false;
    }
    let mut owner: [Option<usize>; 32] = [None; 32];

    fn augment(slot: usize, slots: &[u32], owner: &mut [Option<usize>; 32], seen: &mut u32) -> bool {
        let mut cand = slots[slot] & !*seen;
        while cand != 0 {
            let b = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            *seen |= 1 << b;
            let free = match owner[b] {
                None => true,
                Some(other) => augment(other, slots, owner, seen),
            };
            if free {
                owner[b] = Some(slot);
                return true;
            }
        }
        false
    }

    (0..slots.len()).all(|slot| {
        let mut seen = 0u32;
        augment(slot, &slots, &mut owner, &mut seen)
    })
}
