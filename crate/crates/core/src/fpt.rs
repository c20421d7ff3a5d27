//! Color-coding solver for instances with at most one constraint string.
//!
//! For a coloring `f` of the colored alphabet and its label function `l`, the
//! table `V[i, j, h, L]` is true iff some common subsequence of `s1[1..i]` and
//! `s2[1..j]` that contains `sc[1..h]` can be labelled injectively with exactly
//! the labels of `L`, each occurrence of `σ` drawing from `l(σ)`:
//!
//! ```text
//! V[i,j,h,L] = max { V[i-1,j,h,L],
//!                    V[i,j-1,h,L],
//!                    V[i-1,j-1,h,L∖{λ}]    if s1[i] = s2[j],          λ ∈ L ∩ l(s1[i]),
//!                    V[i-1,j-1,h-1,L∖{λ}]  if s1[i] = s2[j] = sc[h],  λ ∈ L ∩ l(s1[i]) }
//! ```
//!
//! with `V[0,j,h,L] = V[i,0,h,L] = 0` for `L ≠ ∅`, `V[i,j,0,∅] = 1` and
//! `V[i,j,h,∅] = 0` for `h > 0`. A length-`k` solution exists under `f` iff
//! `V[|s1|, |s2|, |sc|, {1..k}]` holds.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::color::{build_colored_alphabet, enumerate_family, label_function, FamilySpec, LabelFunction, LabelSet, MAX_LABELS};
use crate::error::{Error, Result};
use crate::model::{occ, OccurrenceConstraint, Sequence, Solution, Symbol};

/// `C'_o(σ) = min(C_o(σ), occ(σ, s1), occ(σ, s2))`, zero for absent symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EffectiveOcc {
    bounds: BTreeMap<Symbol, usize>,
}

impl EffectiveOcc {
    pub fn from_bounds<I: IntoIterator<Item = (Symbol, usize)>>(bounds: I) -> Self {
        EffectiveOcc {
            bounds: bounds.into_iter().collect(),
        }
    }

    pub fn get(&self, sym: Symbol) -> usize {
        self.bounds.get(&sym).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, usize)> + '_ {
        self.bounds.iter().map(|(&s, &b)| (s, b))
    }

    pub fn total(&self) -> usize {
        self.bounds.values().sum()
    }
}

pub fn effective_occ(s1: &Sequence, s2: &Sequence, co: &OccurrenceConstraint) -> EffectiveOcc {
    let default = s1.len() + s2.len();
    let mut symbols = s1.alphabet();
    symbols.extend(s2.symbols());
    EffectiveOcc {
        bounds: symbols
            .into_iter()
            .map(|s| (s, co.bound(s, default).min(occ(s, s1)).min(occ(s, s2))))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub family: FamilySpec,
    pub max_k: usize,
    /// Upper bound, in bytes, on a single table.
    pub memory_budget: u64,
    pub parallel_trials: bool,
}

pub const DEFAULT_MAX_K: usize = 16;
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 * 1024 * 1024 * 1024;

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            family: FamilySpec::randomized(0),
            max_k: DEFAULT_MAX_K,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            parallel_trials: true,
        }
    }
}

impl SolverConfig {
    pub fn with_family(family: FamilySpec) -> Self {
        SolverConfig {
            family,
            ..Self::default()
        }
    }
}

/// Number of cells of a table, `(n1+1)(n2+1)(nc+1)·2^k`.
pub fn table_cells(n1: usize, n2: usize, nc: usize, k: usize) -> u128 {
    ((n1 as u128 + 1) * (n2 as u128 + 1) * (nc as u128 + 1)) << k
}

fn check_budget(n1: usize, n2: usize, nc: usize, k: usize, budget: u64) -> Result<()> {
    if k > MAX_LABELS {
        return Err(Error::Sizing(format!("k = {k} exceeds the {MAX_LABELS}-label limit")));
    }
    let bits = table_cells(n1, n2, nc, k);
    if bits.div_ceil(8) > budget as u128 {
        return Err(Error::Sizing(format!(
            "table needs {bits} bits for k = {k}, above the memory budget of {budget} bytes"
        )));
    }
    Ok(())
}

/// One bit per cell, one `(i, j, h)` plane per label subset.
#[derive(Debug, Clone)]
pub struct DpTable {
    n1: usize,
    n2: usize,
    nc: usize,
    k: usize,
    plane: usize,
    bits: Vec<u64>,
    cells_filled: u64,
}

impl DpTable {
    #[inline]
    fn index(&self, i: usize, j: usize, h: usize, mask: u32) -> usize {
        mask as usize * self.plane + (i * (self.n2 + 1) + j) * (self.nc + 1) + h
    }

    #[inline]
    fn bit(&self, idx: usize) -> bool {
        self.bits[idx >> 6] >> (idx & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, idx: usize) {
        self.bits[idx >> 6] |= 1 << (idx & 63);
    }

    pub fn get(&self, i: usize, j: usize, h: usize, labels: LabelSet) -> bool {
        assert!(i <= self.n1 && j <= self.n2 && h <= self.nc && (labels.0 as u64) < 1u64 << self.k);
        self.bit(self.index(i, j, h, labels.0))
    }

    /// `(|s1|, |s2|, |sc|, k)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.n1, self.n2, self.nc, self.k)
    }

    /// Cells written while filling, boundary cells included.
    pub fn cells_filled(&self) -> u64 {
        self.cells_filled
    }

    /// The success test `V[|s1|, |s2|, |sc|, {1..k}]`.
    pub fn accepts(&self) -> bool {
        self.get(self.n1, self.n2, self.nc, LabelSet::full(self.k))
    }
}

/// Iterates all subsets of `{1..k}` by nondecreasing size, numeric order within
/// one size.
pub fn subsets_by_size(k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << k;
    (0..=k).flat_map(move |size| {
        let mut next = Some(((1u64 << size) - 1) as u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 {
                None
            } else {
                // Gosper's hack.
                let c = cur as u64;
                let low = c & c.wrapping_neg();
                let ripple = c + low;
                let succ = (((ripple ^ c) >> 2) / low) | ripple;
                (succ < limit).then_some(succ as u32)
            };
            Some(cur)
        })
    })
}

pub fn dp_fill(
    s1: &Sequence,
    s2: &Sequence,
    sc: &Sequence,
    l: &LabelFunction,
    k: usize,
    memory_budget: u64,
) -> Result<DpTable> {
    let (a, b, c) = (s1.as_bytes(), s2.as_bytes(), sc.as_bytes());
    let (n1, n2, nc) = (a.len(), b.len(), c.len());
    check_budget(n1, n2, nc, k, memory_budget)?;

    let plane = (n1 + 1) * (n2 + 1) * (nc + 1);
    let total = plane << k;
    let mut t = DpTable {
        n1,
        n2,
        nc,
        k,
        plane,
        bits: vec![0u64; total.div_ceil(64)],
        cells_filled: 0,
    };
    let labels = l.table();
    let image = l.image().0;
    let full = LabelSet::full(k).0;

    for mask in subsets_by_size(k) {
        let size = mask.count_ones() as usize;
        // A label no symbol carries can never be consumed.
        let unusable = mask & !image & full != 0;
        for i in 0..=n1 {
            for j in 0..=n2 {
                for h in 0..=nc {
                    t.cells_filled += 1;
                    let value = if mask == 0 {
                        h == 0
                    } else if i == 0 || j == 0 || h > size || unusable {
                        false
                    } else {
                        fill_cell(&t, a, b, c, &labels, i, j, h, mask)
                    };
                    if value {
                        let idx = t.index(i, j, h, mask);
                        t.set(idx);
                    }
                }
            }
        }
    }
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn fill_cell(t: &DpTable, a: &[u8], b: &[u8], c: &[u8], labels: &[u32; 128], i: usize, j: usize, h: usize, mask: u32) -> bool {
    if t.bit(t.index(i - 1, j, h, mask)) || t.bit(t.index(i, j - 1, h, mask)) {
        return true;
    }
    let sym = a[i - 1];
    if sym != b[j - 1] {
        return false;
    }
    let advances = h > 0 && c[h - 1] == sym;
    let mut cand = mask & labels[sym as usize];
    while cand != 0 {
        let bit = cand & cand.wrapping_neg();
        cand ^= bit;
        let sub = mask ^ bit;
        if t.bit(t.index(i - 1, j - 1, h, sub)) || (advances && t.bit(t.index(i - 1, j - 1, h - 1, sub))) {
            return true;
        }
    }
    false
}

/// Reconstructs a solution from a filled table, starting at
/// `V[|s1|, |s2|, |sc|, L]`. Cases are tried in recurrence order, labels in
/// increasing order.
pub fn backtrack(
    table: &DpTable,
    s1: &Sequence,
    s2: &Sequence,
    sc: &Sequence,
    l: &LabelFunction,
    target: LabelSet,
) -> Result<Solution> {
    let (a, b, c) = (s1.as_bytes(), s2.as_bytes(), sc.as_bytes());
    if table.dims() != (a.len(), b.len(), c.len(), table.k) {
        return Err(Error::Internal("table dimensions do not match the inputs".into()));
    }
    let (mut i, mut j, mut h, mut mask) = (a.len(), b.len(), c.len(), target.0);
    if !table.get(i, j, h, target) {
        return Err(Error::Internal("backtrack started from a false cell".into()));
    }
    let labels = l.table();
    let mut pos1 = Vec::with_capacity(mask.count_ones() as usize);
    let mut pos2 = Vec::with_capacity(mask.count_ones() as usize);

    'walk: while mask != 0 {
        if i > 0 && table.bit(table.index(i - 1, j, h, mask)) {
            i -= 1;
            continue;
        }
        if j > 0 && table.bit(table.index(i, j - 1, h, mask)) {
            j -= 1;
            continue;
        }
        if i == 0 || j == 0 || a[i - 1] != b[j - 1] {
            return Err(Error::Internal(format!("no predecessor at ({i}, {j}, {h}, {mask:b})")));
        }
        let sym = a[i - 1];
        let cand = mask & labels[sym as usize];
        let consume = |pos1: &mut Vec<usize>, pos2: &mut Vec<usize>| {
            pos1.push(i - 1);
            pos2.push(j - 1);
        };
        for bit in set_bits(cand) {
            if table.bit(table.index(i - 1, j - 1, h, mask ^ bit)) {
                consume(&mut pos1, &mut pos2);
                (i, j, mask) = (i - 1, j - 1, mask ^ bit);
                continue 'walk;
            }
        }
        if h > 0 && c[h - 1] == sym {
            for bit in set_bits(cand) {
                if table.bit(table.index(i - 1, j - 1, h - 1, mask ^ bit)) {
                    consume(&mut pos1, &mut pos2);
                    (i, j, h, mask) = (i - 1, j - 1, h - 1, mask ^ bit);
                    continue 'walk;
                }
            }
        }
        return Err(Error::Internal(format!("no predecessor at ({i}, {j}, {h}, {mask:b})")));
    }
    if h != 0 {
        return Err(Error::Internal("backtrack ended with an unmatched constraint prefix".into()));
    }
    pos1.reverse();
    pos2.reverse();
    let sequence = Sequence::from_symbols(pos1.iter().map(|&p| s1.at(p)));
    Ok(Solution { sequence, pos1, pos2 })
}

fn set_bits(mut m: u32) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let bit = m & m.wrapping_neg();
            m ^= bit;
            bit
        })
    })
}

/// Result of testing one length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KOutcome {
    pub solution: Option<Solution>,
    /// Hash assignments consumed: index of the accepted one plus one, or the
    /// whole family when none succeeds.
    pub trials: u64,
}

const CHUNK: usize = 64;

/// Searches for a feasible solution of length exactly `k` whose constraint
/// string is `sc`, trying each coloring of the configured family in order.
pub fn solve_for_k(
    s1: &Sequence,
    s2: &Sequence,
    sc: &Sequence,
    c_eff: &EffectiveOcc,
    k: usize,
    cfg: &SolverConfig,
) -> Result<KOutcome> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if k > cfg.max_k {
        return Err(Error::Sizing(format!("k = {k} exceeds max-k {}", cfg.max_k)));
    }
    check_budget(s1.len(), s2.len(), sc.len(), k, cfg.memory_budget)?;

    let sigma_tilde = build_colored_alphabet(c_eff);
    let mut family = enumerate_family(&sigma_tilde, k, cfg.family)?;
    let full = LabelSet::full(k);
    let needed: Vec<(Symbol, usize)> = sc.alphabet().into_iter().map(|s| (s, occ(s, sc))).collect();

    let attempt = |f: &crate::color::HashAssignment| -> Result<Option<Solution>> {
        let l = label_function(f, &sigma_tilde);
        // Both filters only skip colorings whose table is provably all-false
        // at the success cell.
        if l.image() != full || needed.iter().any(|&(s, n)| l.get(s).len() < n) {
            return Ok(None);
        }
        let table = dp_fill(s1, s2, sc, &l, k, cfg.memory_budget)?;
        if table.accepts() {
            backtrack(&table, s1, s2, sc, &l, full).map(Some)
        } else {
            Ok(None)
        }
    };

    let mut consumed = 0u64;
    loop {
        let chunk: Vec<_> = family.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(KOutcome {
                solution: None,
                trials: consumed,
            });
        }
        let hit = if cfg.parallel_trials {
            chunk
                .par_iter()
                .enumerate()
                .map(|(idx, f)| attempt(f).map(|s| s.map(|s| (idx, s))))
                .find_map_first(|r| match r {
                    Ok(None) => None,
                    other => Some(other),
                })
        } else {
            chunk
                .iter()
                .enumerate()
                .map(|(idx, f)| attempt(f).map(|s| s.map(|s| (idx, s))))
                .find(|r| !matches!(r, Ok(None)))
        };
        match hit {
            Some(Ok(Some((idx, solution)))) => {
                return Ok(KOutcome {
                    solution: Some(solution),
                    trials: consumed + idx as u64 + 1,
                })
            }
            Some(Err(e)) => return Err(e),
            _ => consumed += chunk.len() as u64,
        }
    }
}

/// Outcome of a full search over lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: Option<Solution>,
    pub trials_used: u64,
    pub k_tested: Vec<usize>,
}

/// Upper bound on the length of any feasible solution: the input lengths, the
/// total effective occurrence budget, and the plain LCS length.
pub fn length_upper_bound(s1: &Sequence, s2: &Sequence, c_eff: &EffectiveOcc) -> usize {
    s1.len().min(s2.len()).min(c_eff.total()).min(lcs_length(s1.as_bytes(), s2.as_bytes()))
}

fn lcs_length(a: &[u8], b: &[u8]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &x in a {
        for (j, &y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Maximum-length solution with at most one constraint string `sc` (empty for
/// none): lengths are tried from the upper bound downwards and the first
/// success is returned.
pub fn solve_single_constraint(
    s1: &Sequence,
    s2: &Sequence,
    sc: &Sequence,
    co: &OccurrenceConstraint,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    let c_eff = effective_occ(s1, s2, co);
    let upper = length_upper_bound(s1, s2, &c_eff);
    if upper > cfg.max_k {
        return Err(Error::Sizing(format!(
            "solutions may reach length {upper}, above max-k {}",
            cfg.max_k
        )));
    }
    check_budget(s1.len(), s2.len(), sc.len(), upper, cfg.memory_budget)?;

    let mut report = SolveReport {
        solution: None,
        trials_used: 0,
        k_tested: Vec::new(),
    };
    for k in (sc.len().max(1)..=upper).rev() {
        let out = solve_for_k(s1, s2, sc, &c_eff, k, cfg)?;
        report.k_tested.push(k);
        report.trials_used += out.trials;
        if out.solution.is_some() {
            report.solution = out.solution;
            return Ok(report);
        }
    }
    if sc.is_empty() {
        report.solution = Some(Solution::empty());
    }
    Ok(report)
}
