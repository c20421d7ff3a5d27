//! Classical quadratic LCS and the cubic single-constraint variant. These are
//! cross-checks for the color-coding solver and share no code with it.

use crate::model::{Sequence, Solution};

/// A longest common subsequence. On ties the backtrack prefers a diagonal
/// match, then moving left (shorter `s2` prefix), then up.
pub fn lcs(s1: &Sequence, s2: &Sequence) -> Solution {
    let (a, b) = (s1.as_bytes(), s2.as_bytes());
    let (n, m) = (a.len(), b.len());
    let w = m + 1;
    let mut dp = vec![0u32; (n + 1) * w];
    for i in 1..=n {
        for j in 1..=m {
            dp[i * w + j] = if a[i - 1] == b[j - 1] {
                dp[(i - 1) * w + j - 1] + 1
            } else {
                dp[(i - 1) * w + j].max(dp[i * w + j - 1])
            };
        }
    }

    let (mut i, mut j) = (n, m);
    let mut pos1 = Vec::new();
    let mut pos2 = Vec::new();
    while i > 0 && j > 0 {
        let v = dp[i * w + j];
        if v == 0 {
            break;
        }
        if a[i - 1] == b[j - 1] && dp[(i - 1) * w + j - 1] + 1 == v {
            pos1.push(i - 1);
            pos2.push(j - 1);
            i -= 1;
            j -= 1;
        } else if dp[i * w + j - 1] == v {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    pos1.reverse();
    pos2.reverse();
    let sequence = Sequence::from_symbols(pos1.iter().map(|&p| s1.at(p)));
    Solution { sequence, pos1, pos2 }
}

const UNDEF: i32 = -1;

/// Longest common subsequence of `s1` and `s2` that contains `sc` as a
/// subsequence, or `None` when no common subsequence contains it.
///
/// `D[i][j][h]` is the length of the longest common subsequence of the
/// prefixes `s1[..i]`, `s2[..j]` that contains `sc[..h]`, or undefined.
pub fn clcs_single(s1: &Sequence, s2: &Sequence, sc: &Sequence) -> Option<Solution> {
    let (a, b, c) = (s1.as_bytes(), s2.as_bytes(), sc.as_bytes());
    let (n, m, p) = (a.len(), b.len(), c.len());
    let idx = |i: usize, j: usize, h: usize| (i * (m + 1) + j) * (p + 1) + h;
    let mut d = vec![UNDEF; (n + 1) * (m + 1) * (p + 1)];
    for i in 0..=n {
        for j in 0..=m {
            d[idx(i, j, 0)] = 0;
        }
    }
    let plus1 = |v: i32| if v == UNDEF { UNDEF } else { v + 1 };
    for i in 1..=n {
        for j in 1..=m {
            for h in 0..=p {
                let mut v = d[idx(i - 1, j, h)].max(d[idx(i, j - 1, h)]);
                if a[i - 1] == b[j - 1] {
                    v = v.max(plus1(d[idx(i - 1, j - 1, h)]));
                    if h > 0 && c[h - 1] == a[i - 1] {
                        v = v.max(plus1(d[idx(i - 1, j - 1, h - 1)]));
                    }
                }
                d[idx(i, j, h)] = v;
            }
        }
    }
    if d[idx(n, m, p)] == UNDEF {
        return None;
    }

    let (mut i, mut j, mut h) = (n, m, p);
    let mut pos1 = Vec::new();
    let mut pos2 = Vec::new();
    loop {
        let v = d[idx(i, j, h)];
        if v == 0 {
            debug_assert_eq!(h, 0);
            break;
        }
        if a[i - 1] == b[j - 1] {
            if h > 0 && c[h - 1] == a[i - 1] && plus1(d[idx(i - 1, j - 1, h - 1)]) == v {
                pos1.push(i - 1);
                pos2.push(j - 1);
                i -= 1;
                j -= 1;
                h -= 1;
                continue;
            }
            if plus1(d[idx(i - 1, j - 1, h)]) == v {
                pos1.push(i - 1);
                pos2.push(j - 1);
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if d[idx(i, j - 1, h)] == v {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    pos1.reverse();
    pos2.reverse();
    let sequence = Sequence::from_symbols(pos1.iter().map(|&q| s1.at(q)));
    Some(Solution { sequence, pos1, pos2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_subsequence, seq};
    use proptest::prelude::*;

    /// Longest subsequence of the shorter input that embeds in the other,
    /// optionally required to contain `sc`. Plain 2^n enumeration.
    fn brute(s1: &Sequence, s2: &Sequence, sc: Option<&Sequence>) -> Option<usize> {
        let (short, long) = if s1.len() <= s2.len() { (s1, s2) } else { (s2, s1) };
        let n = short.len();
        let mut best: Option<usize> = None;
        for mask in 0u32..(1 << n) {
            let cand = Sequence::from_symbols((0..n).filter(|i| mask >> i & 1 == 1).map(|i| short.at(i)));
            if !is_subsequence(&cand, long) {
                continue;
            }
            if let Some(c) = sc {
                if !is_subsequence(c, &cand) {
                    continue;
                }
            }
            best = best.max(Some(cand.len()));
        }
        best
    }

    #[test]
    fn lcs_examples() {
        let s = lcs(&seq("abc"), &seq("abc"));
        assert_eq!(s.sequence, seq("abc"));
        assert_eq!(lcs(&seq(""), &seq("abc")).len(), 0);
        let s = lcs(&seq("abcbdab"), &seq("bdcaba"));
        assert_eq!(s.len(), 4);
        assert_eq!(brute(&seq("abcbdab"), &seq("bdcaba"), None), Some(4));
        assert!(s.certificate_valid(&seq("abcbdab"), &seq("bdcaba")));
    }

    #[test]
    fn lcs_is_deterministic() {
        let a = lcs(&seq("abcbdab"), &seq("bdcaba"));
        let b = lcs(&seq("abcbdab"), &seq("bdcaba"));
        assert_eq!(a, b);
    }

    #[test]
    fn clcs_examples() {
        let s = clcs_single(&seq("abc"), &seq("abc"), &seq("b")).unwrap();
        assert_eq!(s.sequence, seq("abc"));
        assert!(clcs_single(&seq("a"), &seq("a"), &seq("b")).is_none());

        let (s1, s2, sc) = (seq("ab#ab#"), seq("ba#ba#"), seq("##"));
        let s = clcs_single(&s1, &s2, &sc).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(brute(&s1, &s2, Some(&sc)), Some(4));
        assert!(is_subsequence(&sc, &s.sequence));
        assert!(s.certificate_valid(&s1, &s2));
    }

    fn arb(max: usize) -> impl Strategy<Value = Sequence> {
        proptest::string::string_regex(&format!("[abcd]{{0,{max}}}"))
            .unwrap()
            .prop_map(|s| seq(&s))
    }

    proptest! {
        #[test]
        fn lcs_matches_brute_force(s1 in arb(12), s2 in arb(12)) {
            let sol = lcs(&s1, &s2);
            prop_assert!(sol.certificate_valid(&s1, &s2));
            prop_assert_eq!(Some(sol.len()), brute(&s1, &s2, None));
        }

        #[test]
        fn clcs_matches_brute_force(s1 in arb(9), s2 in arb(9), sc in arb(3)) {
            let got = clcs_single(&s1, &s2, &sc);
            prop_assert_eq!(got.as_ref().map(Solution::len), brute(&s1, &s2, Some(&sc)));
            if let Some(sol) = got {
                prop_assert!(sol.certificate_valid(&s1, &s2));
                prop_assert!(is_subsequence(&sc, &sol.sequence));
            }
        }

        #[test]
        fn clcs_with_empty_constraint_is_lcs(s1 in arb(10), s2 in arb(10)) {
            let c = clcs_single(&s1, &s2, &Sequence::empty()).unwrap();
            prop_assert_eq!(c.len(), lcs(&s1, &s2).len());
        }
    }
}
