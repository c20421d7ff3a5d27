//! Exhaustive reference solvers. They rely only on the sequence predicates of
//! [`crate::model`], never on the dynamic programs, so agreement with the
//! color-coding solver is independent evidence.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{is_subsequence, verify_solution, Instance, Sequence, Solution, Symbol};

pub const DEFAULT_MAX_SHORTER_LEN: usize = 20;
pub const DEFAULT_MAX_SCS_STATES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Refuse instances whose shorter input exceeds this length.
    pub max_shorter_len: usize,
    /// Refuse SCS instances with more index-vector states than this.
    pub max_scs_states: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_shorter_len: DEFAULT_MAX_SHORTER_LEN,
            max_scs_states: DEFAULT_MAX_SCS_STATES,
        }
    }
}

/// `next[p][c]`: first position `≥ p` holding byte `c`, or `usize::MAX`.
fn next_table(s: &[u8], alphabet: &[u8]) -> Vec<Vec<usize>> {
    let mut table = vec![vec![usize::MAX; alphabet.len()]; s.len() + 1];
    for p in (0..s.len()).rev() {
        table[p] = table[p + 1].clone();
        if let Some(ci) = alphabet.iter().position(|&c| c == s[p]) {
            table[p][ci] = p;
        }
    }
    table
}

/// Depth-first walk over the distinct subsequences of the shorter input that
/// also embed in the longer one, children in symbol order (lexicographic
/// preorder). Branches that can no longer satisfy a constraint string or an
/// occurrence cap are cut; neither cut discards a feasible string.
struct Search<'a> {
    inst: &'a Instance,
    alphabet: Vec<u8>,
    next1: Vec<Vec<usize>>,
    next2: Vec<Vec<usize>>,
    caps: Vec<usize>,
    constraints: Vec<&'a [u8]>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, limits: &OracleLimits) -> Result<Self> {
        let shorter = inst.s1.len().min(inst.s2.len());
        if shorter > limits.max_shorter_len {
            return Err(Error::Sizing(format!(
                "oracle enumerates subsequences of a length-{shorter} input, above the cap of {}",
                limits.max_shorter_len
            )));
        }
        let common: Vec<u8> = inst
            .s1
            .alphabet()
            .intersection(&inst.s2.alphabet())
            .map(|s| s.code())
            .collect();
        let caps = common
            .iter()
            .map(|&c| inst.co_bound(Symbol::new(c).expect("alphabet symbol")))
            .collect();
        Ok(Search {
            inst,
            next1: next_table(inst.s1.as_bytes(), &common),
            next2: next_table(inst.s2.as_bytes(), &common),
            alphabet: common,
            caps,
            constraints: inst.cs.iter().map(Sequence::as_bytes).collect(),
        })
    }

    /// Whether every constraint remainder still fits in both input suffixes.
    fn completable(&self, matched: &[usize], p1: usize, p2: usize) -> bool {
        let rest1 = &self.inst.s1.as_bytes()[p1..];
        let rest2 = &self.inst.s2.as_bytes()[p2..];
        self.constraints.iter().zip(matched).all(|(c, &m)| {
            let tail = &c[m..];
            embeds(tail, rest1) && embeds(tail, rest2)
        })
    }

    fn satisfied(&self, matched: &[usize]) -> bool {
        self.constraints.iter().zip(matched).all(|(c, &m)| m == c.len())
    }

    /// Visits feasible strings in lexicographic preorder. `bound` returns the
    /// length a subtree must be able to exceed to be worth entering.
    fn walk(&self, visit: &mut dyn FnMut(&Sequence), bound: &dyn Fn() -> Option<usize>) {
        let mut built = Sequence::empty();
        let mut counts = vec![0usize; self.alphabet.len()];
        let mut matched = vec![0usize; self.constraints.len()];
        self.rec(0, 0, &mut built, &mut counts, &mut matched, visit, bound);
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        p1: usize,
        p2: usize,
        built: &mut Sequence,
        counts: &mut [usize],
        matched: &mut [usize],
        visit: &mut dyn FnMut(&Sequence),
        bound: &dyn Fn() -> Option<usize>,
    ) {
        if self.satisfied(matched) {
            visit(built);
        }
        let reach = built.len() + (self.inst.s1.len() - p1).min(self.inst.s2.len() - p2);
        if bound().is_some_and(|b| reach <= b) {
            return;
        }
        for (ci, &c) in self.alphabet.iter().enumerate() {
            let (q1, q2) = (self.next1[p1][ci], self.next2[p2][ci]);
            if q1 == usize::MAX || q2 == usize::MAX || counts[ci] + 1 > self.caps[ci] {
                continue;
            }
            let saved: Vec<usize> = matched.to_vec();
            for (m, con) in matched.iter_mut().zip(&self.constraints) {
                if *m < con.len() && con[*m] == c {
                    *m += 1;
                }
            }
            if self.completable(matched, q1 + 1, q2 + 1) {
                counts[ci] += 1;
                built.push(Symbol::new(c).expect("alphabet symbol"));
                self.rec(q1 + 1, q2 + 1, built, counts, matched, visit, bound);
                built.pop();
                counts[ci] -= 1;
            }
            matched.copy_from_slice(&saved);
        }
    }
}

fn embeds(a: &[u8], b: &[u8]) -> bool {
    let mut rest = b.iter();
    a.iter().all(|c| rest.any(|d| d == c))
}

/// A maximum-length feasible solution, lexicographically least among the
/// maxima, or `None` when nothing is feasible.
pub fn brute_force_dclcs(inst: &Instance, limits: &OracleLimits) -> Result<Option<Solution>> {
    let search = Search::new(inst, limits)?;
    let best: std::cell::RefCell<Option<Sequence>> = std::cell::RefCell::new(None);
    let mut visit = |cand: &Sequence| {
        let longer = best.borrow().as_ref().is_none_or(|b| cand.len() > b.len());
        if longer && verify_solution(inst, cand).passed() {
            *best.borrow_mut() = Some(cand.clone());
        }
    };
    let bound = || best.borrow().as_ref().map(Sequence::len);
    search.walk(&mut visit, &bound);
    let best = best.into_inner();
    Ok(best.map(|s| Solution::certify(s, &inst.s1, &inst.s2).expect("oracle output is a common subsequence")))
}

/// Every feasible solution, in lexicographic order.
pub fn enumerate_feasible(inst: &Instance, limits: &OracleLimits) -> Result<Vec<Sequence>> {
    let search = Search::new(inst, limits)?;
    let mut out = Vec::new();
    let mut visit = |cand: &Sequence| {
        if verify_solution(inst, cand).passed() {
            out.push(cand.clone());
        }
    };
    search.walk(&mut visit, &|| None);
    Ok(out)
}

/// A shortest common supersequence of `strings`, by breadth-first search over
/// per-string matched-prefix vectors. Among shortest answers the
/// lexicographically least is returned.
pub fn brute_force_scs(strings: &[Sequence], limits: &OracleLimits) -> Result<Sequence> {
    let mut uniq: Vec<&Sequence> = strings.iter().collect();
    uniq.sort();
    uniq.dedup();
    let states = uniq
        .iter()
        .try_fold(1u64, |acc, s| acc.checked_mul(s.len() as u64 + 1))
        .filter(|&n| n <= limits.max_scs_states)
        .ok_or_else(|| {
            Error::Sizing(format!(
                "SCS search space exceeds the cap of {} states",
                limits.max_scs_states
            ))
        })?;
    let mut alphabet: Vec<Symbol> = uniq.iter().flat_map(|s| s.symbols()).collect();
    alphabet.sort();
    alphabet.dedup();

    let start = vec![0usize; uniq.len()];
    let goal: Vec<usize> = uniq.iter().map(|s| s.len()).collect();
    let mut parent: HashMap<Vec<usize>, Option<(Vec<usize>, Symbol)>> = HashMap::with_capacity(states.min(1 << 20) as usize);
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if state == goal {
            let mut out = Vec::new();
            let mut cur = state;
            while let Some(Some((prev, sym))) = parent.get(&cur) {
                out.push(*sym);
                cur = prev.clone();
            }
            out.reverse();
            return Ok(Sequence::from_symbols(out));
        }
        for &sym in &alphabet {
            let next: Vec<usize> = state
                .iter()
                .zip(&uniq)
                .map(|(&p, s)| if p < s.len() && s.at(p) == sym { p + 1 } else { p })
                .collect();
            if next != state && !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((state.clone(), sym)));
                queue.push_back(next);
            }
        }
    }
    Err(Error::Internal("goal state unreachable".into()))
}

/// Convenience check used by tests: `q` is a common supersequence of `strings`.
pub fn is_common_supersequence(q: &Sequence, strings: &[Sequence]) -> bool {
    strings.iter().all(|s| is_subsequence(s, q))
}
