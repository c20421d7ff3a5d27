//! General string-constraint sets, handled by reduction to single-constraint
//! searches over short common supersequences of the constraint strings.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fpt::{effective_occ, length_upper_bound, solve_for_k, solve_single_constraint, EffectiveOcc, SolveReport, SolverConfig};
use crate::model::{is_subsequence, occ, Instance, Sequence, StringConstraint, Symbol};

/// Symbols occurring in at least one constraint string, ascending.
pub fn restricted_alphabet(cs: &StringConstraint) -> Vec<Symbol> {
    cs.iter()
        .flat_map(|s| s.symbols())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Search state: the string built so far and, for each constraint string, the
/// length of its longest prefix embedded greedily in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedState {
    pub positions: Vec<usize>,
    pub built: Sequence,
}

impl EmbedState {
    fn root(n: usize) -> Self {
        EmbedState {
            positions: vec![0; n],
            built: Sequence::empty(),
        }
    }

    fn extend(&self, strings: &[&Sequence], sym: Symbol) -> Self {
        let positions = self
            .positions
            .iter()
            .zip(strings)
            .map(|(&p, s)| if p < s.len() && s.at(p) == sym { p + 1 } else { p })
            .collect();
        let mut built = self.built.clone();
        built.push(sym);
        EmbedState { positions, built }
    }

    fn complete(&self, strings: &[&Sequence]) -> bool {
        self.positions.iter().zip(strings).all(|(&p, s)| p == s.len())
    }

    fn max_remaining(&self, strings: &[&Sequence]) -> usize {
        self.positions
            .iter()
            .zip(strings)
            .map(|(&p, s)| s.len() - p)
            .max()
            .unwrap_or(0)
    }
}

fn sort_candidates(out: &mut [Sequence]) {
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
}

/// Every string `q` over the restricted alphabet with `1 ≤ |q| ≤ k` that is a
/// supersequence of all constraint strings (plus the empty string when there
/// are none), ordered by length then lexicographically.
pub fn enumerate_common_supersequences(cs: &StringConstraint, k: usize) -> Vec<Sequence> {
    if cs.is_empty() {
        return vec![Sequence::empty()];
    }
    let strings: Vec<&Sequence> = cs.iter().collect();
    let alphabet = restricted_alphabet(cs);
    let mut out = Vec::new();
    let mut stack = vec![EmbedState::root(strings.len())];
    while let Some(state) = stack.pop() {
        if !state.built.is_empty() && state.complete(&strings) {
            out.push(state.built.clone());
        }
        if state.built.len() == k {
            continue;
        }
        for &sym in &alphabet {
            let next = state.extend(&strings, sym);
            if next.built.len() + next.max_remaining(&strings) <= k {
                stack.push(next);
            }
        }
    }
    sort_candidates(&mut out);
    out
}

fn is_common_supersequence(q: &Sequence, cs: &StringConstraint) -> bool {
    cs.iter().all(|s| is_subsequence(s, q))
}

/// Common supersequences from which no single symbol can be deleted without
/// losing a constraint string, up to length `max_len`, ordered by length then
/// lexicographically.
///
/// Every common supersequence contains one of these as a subsequence, so a
/// solution containing some candidate of `enumerate_common_supersequences`
/// also contains a minimal one.
pub fn minimal_common_supersequences(cs: &StringConstraint, max_len: usize) -> Vec<Sequence> {
    if cs.is_empty() {
        return vec![Sequence::empty()];
    }
    let strings: Vec<&Sequence> = cs.iter().collect();
    let alphabet = restricted_alphabet(cs);
    let mut out = Vec::new();
    let mut stack = vec![EmbedState::root(strings.len())];
    while let Some(state) = stack.pop() {
        if state.complete(&strings) {
            // Appending to a complete state never yields a minimal string.
            if is_minimal(&state.built, cs) {
                out.push(state.built);
            }
            continue;
        }
        if state.built.len() == max_len {
            continue;
        }
        for &sym in &alphabet {
            let next = state.extend(&strings, sym);
            // A symbol that advances no greedy embedding is deletable.
            if next.positions == state.positions {
                continue;
            }
            if next.built.len() + next.max_remaining(&strings) <= max_len {
                stack.push(next);
            }
        }
    }
    sort_candidates(&mut out);
    out
}

fn is_minimal(q: &Sequence, cs: &StringConstraint) -> bool {
    (0..q.len()).all(|skip| {
        let shorter = Sequence::from_symbols(q.symbols().enumerate().filter(|&(i, _)| i != skip).map(|(_, s)| s));
        !is_common_supersequence(&shorter, cs)
    })
}

/// Candidate constraint strings worth running the single-constraint search
/// on: minimal common supersequences that could still fit inside a solution.
fn viable_candidates(inst: &Instance, c_eff: &EffectiveOcc, upper: usize) -> Vec<Sequence> {
    minimal_common_supersequences(&inst.cs, upper)
        .into_iter()
        .filter(|q| {
            is_subsequence(q, &inst.s1)
                && is_subsequence(q, &inst.s2)
                && q.alphabet().into_iter().all(|s| occ(s, q) <= c_eff.get(s))
        })
        .collect()
}

/// Maximum-length feasible solution of a general instance.
pub fn solve_dclcs(inst: &Instance, cfg: &SolverConfig) -> Result<SolveReport> {
    if inst.cs.len() <= 1 {
        let sc = inst.cs.iter().next().cloned().unwrap_or_default();
        return solve_single_constraint(&inst.s1, &inst.s2, &sc, &inst.co, cfg);
    }
    let c_eff = effective_occ(&inst.s1, &inst.s2, &inst.co);
    let upper = length_upper_bound(&inst.s1, &inst.s2, &c_eff);
    if upper > cfg.max_k {
        return Err(Error::Sizing(format!(
            "solutions may reach length {upper}, above max-k {}",
            cfg.max_k
        )));
    }
    let candidates = viable_candidates(inst, &c_eff, upper);
    let mut report = SolveReport {
        solution: None,
        trials_used: 0,
        k_tested: Vec::new(),
    };
    for k in (1..=upper).rev() {
        let mut tested = false;
        for sc in candidates.iter().filter(|q| q.len() <= k) {
            tested = true;
            let out = solve_for_k(&inst.s1, &inst.s2, sc, &c_eff, k, cfg)?;
            report.trials_used += out.trials;
            if out.solution.is_some() {
                report.k_tested.push(k);
                report.solution = out.solution;
                return Ok(report);
            }
        }
        if tested {
            report.k_tested.push(k);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::FamilySpec;
    use crate::model::{seq, verify_solution, OccurrenceConstraint};

    fn cs(strings: &[&str]) -> StringConstraint {
        StringConstraint::from_strings(strings.iter().map(|s| seq(s))).unwrap()
    }

    fn strs(v: &[Sequence]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn exact() -> SolverConfig {
        SolverConfig::with_family(FamilySpec::Exact)
    }

    /// All strings over `alphabet` of length 0..=k.
    fn all_strings(alphabet: &[Symbol], k: usize) -> Vec<Sequence> {
        let mut out = vec![Sequence::empty()];
        let mut frontier = vec![Sequence::empty()];
        for _ in 0..k {
            let mut next = Vec::new();
            for s in &frontier {
                for &c in alphabet {
                    let mut t = s.clone();
                    t.push(c);
                    next.push(t);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn restricted_alphabet_examples() {
        let syms = |v: Vec<Symbol>| v.into_iter().map(|s| s.as_char()).collect::<String>();
        assert_eq!(syms(restricted_alphabet(&cs(&["ab", "ba"]))), "ab");
        assert_eq!(syms(restricted_alphabet(&StringConstraint::new())), "");
        assert_eq!(syms(restricted_alphabet(&cs(&["###", "a#b#", "b#a#"]))), "#ab");
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(strs(&enumerate_common_supersequences(&cs(&["ab", "ba"]), 3)), vec!["aba", "bab"]);
        assert_eq!(strs(&enumerate_common_supersequences(&cs(&["a"]), 1)), vec!["a"]);
        assert!(enumerate_common_supersequences(&cs(&["ab", "ba"]), 2).is_empty());
        assert_eq!(enumerate_common_supersequences(&StringConstraint::new(), 3), vec![Sequence::empty()]);
        // Non-minimal supersequences are included.
        let got = strs(&enumerate_common_supersequences(&cs(&["a"]), 2));
        assert_eq!(got, vec!["a", "aa"]);
    }

    #[test]
    fn enumeration_matches_filtering_all_strings() {
        for members in [&["ab", "ba"][..], &["abc", "cb"], &["a", "b", "c"], &["aa", "b"], &["abc"], &["ca", "ab", "bc"]] {
            let c = cs(members);
            let alphabet = restricted_alphabet(&c);
            for k in 0..=6 {
                let mut expected: Vec<Sequence> = all_strings(&alphabet, k)
                    .into_iter()
                    .filter(|q| !q.is_empty() && is_common_supersequence(q, &c))
                    .collect();
                sort_candidates(&mut expected);
                let got = enumerate_common_supersequences(&c, k);
                assert_eq!(got, expected, "{members:?} k={k}");
                // Counting bound, per length: at most |Σ(cs)|^m strings of
                // length m, and |Σ(cs)| ≤ m whenever one exists.
                for m in 1..=k {
                    let of_len = got.iter().filter(|q| q.len() == m).count() as u64;
                    assert!(of_len <= (alphabet.len() as u64).pow(m as u32));
                    if of_len > 0 {
                        assert!(alphabet.len() <= m);
                        assert!(of_len <= (m as u64).pow(m as u32));
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_candidates_are_the_minimal_members() {
        for members in [&["ab", "ba"][..], &["abc", "cb"], &["a", "b"], &["aab", "ba"], &["ca", "ab", "bc"]] {
            let c = cs(members);
            for k in 0..=6 {
                let expected: Vec<Sequence> = enumerate_common_supersequences(&c, k)
                    .into_iter()
                    .filter(|q| is_minimal(q, &c))
                    .collect();
                assert_eq!(minimal_common_supersequences(&c, k), expected, "{members:?} k={k}");
            }
        }
    }

    #[test]
    fn solve_examples() {
        let mut co = OccurrenceConstraint::new();
        co.set(Symbol::from_char('a').unwrap(), 1).unwrap();
        co.set(Symbol::from_char('b').unwrap(), 1).unwrap();
        let inst = Instance::new(seq("aab"), seq("aba"), StringConstraint::new(), co);
        assert_eq!(solve_dclcs(&inst, &exact()).unwrap().solution.unwrap().len(), 2);

        let inst = Instance::new(seq("abc"), seq("abc"), cs(&["abc"]), OccurrenceConstraint::new());
        assert_eq!(solve_dclcs(&inst, &exact()).unwrap().solution.unwrap().sequence, seq("abc"));

        let inst = Instance::new(seq("ab#ab#ab#"), seq("ba#ba#ba#"), cs(&["###", "a#b#", "b#a#"]), OccurrenceConstraint::new());
        let sol = solve_dclcs(&inst, &exact()).unwrap().solution.unwrap();
        assert_eq!(sol.len(), 6);
        assert!(verify_solution(&inst, &sol.sequence).passed());
        assert!(verify_solution(&inst, &seq("a#b#a#")).passed());

        let inst = Instance::new(seq("ab"), seq("ab"), cs(&["ab", "ba"]), OccurrenceConstraint::new());
        assert!(solve_dclcs(&inst, &exact()).unwrap().solution.is_none());
    }
}
