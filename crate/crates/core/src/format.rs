//! Line-oriented instance files and the solution output format.
//!
//! ```text
//! % comment
//! S1 <string>
//! S2 <string>
//! CS <string>        (zero or more)
//! CO <symbol> <int>  (zero or more, at most once per symbol)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Instance, OccurrenceConstraint, Sequence, Solution, StringConstraint, Symbol};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut s1: Option<Sequence> = None;
    let mut s2: Option<Sequence> = None;
    let mut cs = StringConstraint::new();
    let mut co = OccurrenceConstraint::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap_or_default();
        let args: Vec<&str> = tokens.collect();
        let as_sequence = |args: &[&str]| -> Result<Sequence> {
            match args {
                [] => Ok(Sequence::empty()),
                [s] => s.parse().map_err(|e: Error| parse_err(lineno, e.to_string())),
                _ => Err(parse_err(lineno, format!("{keyword} takes one string"))),
            }
        };
        match keyword {
            "S1" | "S2" => {
                let slot = if keyword == "S1" { &mut s1 } else { &mut s2 };
                if slot.is_some() {
                    return Err(parse_err(lineno, format!("{keyword} given more than once")));
                }
                *slot = Some(as_sequence(&args)?);
            }
            "CS" => {
                let s = as_sequence(&args)?;
                cs.insert(s).map_err(|e| parse_err(lineno, e.to_string()))?;
            }
            "CO" => {
                let [sym, bound] = args[..] else {
                    return Err(parse_err(lineno, "CO takes a symbol and a bound"));
                };
                let mut chars = sym.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(parse_err(lineno, format!("CO symbol {sym:?} is not a single character")));
                };
                let sym = Symbol::from_char(c).map_err(|e| parse_err(lineno, e.to_string()))?;
                let bound: usize = bound
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad occurrence bound {bound:?}")))?;
                co.set(sym, bound).map_err(|e| parse_err(lineno, e.to_string()))?;
            }
            other => return Err(parse_err(lineno, format!("unknown keyword {other:?}"))),
        }
    }

    let eof = text.lines().count() + 1;
    let s1 = s1.ok_or_else(|| parse_err(eof, "missing S1 line"))?;
    let s2 = s2.ok_or_else(|| parse_err(eof, "missing S2 line"))?;
    Ok(Instance::new(s1, s2, cs, co))
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "S1 {}", inst.s1);
    let _ = writeln!(out, "S2 {}", inst.s2);
    for c in inst.cs.iter() {
        let _ = writeln!(out, "CS {c}");
    }
    for (sym, bound) in inst.co.entries() {
        let _ = writeln!(out, "CO {sym} {bound}");
    }
    out
}

/// `LENGTH n` / `SOLUTION s`, or `INFEASIBLE`.
pub fn format_solution(sol: Option<&Solution>) -> String {
    match sol {
        Some(s) => format!("LENGTH {}\nSOLUTION {}\n", s.len(), s.sequence),
        None => "INFEASIBLE\n".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{seq, Mode};
    use proptest::prelude::*;

    #[test]
    fn parses_plain_instance() {
        let inst = parse_instance("S1 abc\nS2 abc\n").unwrap();
        assert_eq!(inst.s1, seq("abc"));
        assert_eq!(inst.s2, seq("abc"));
        assert!(inst.cs.is_empty());
        assert_eq!(inst.co_bound(Symbol::from_char('a').unwrap()), 6);
    }

    #[test]
    fn parses_rf_instance() {
        let inst = parse_instance("S1 aab\nS2 aba\nCO a 1\nCO b 1\n").unwrap();
        assert_eq!(inst.mode(), Mode::RfLcs);
    }

    #[test]
    fn comments_blank_lines_and_hash_symbols() {
        let inst = parse_instance("% header\n\nS1 a#b#\n  \nS2 b#a#\nCS ##\n% CS x\n").unwrap();
        assert_eq!(inst.cs.len(), 1);
        assert!(inst.cs.contains(&seq("##")));
    }

    #[test]
    fn empty_sequences_allowed() {
        let inst = parse_instance("S1\nS2 \n").unwrap();
        assert!(inst.s1.is_empty() && inst.s2.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_instance("S1 ab\nS2 ab\nCS b\nCS b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");

        let err = parse_instance("S1 ab\nS2 ab\nCO a 1\nCO a 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");

        let err = parse_instance("S1 ab\nXX ab\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = parse_instance("S1 ab\nS2 a b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = parse_instance("S1 ab\nS2 ab\nCO ab 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let err = parse_instance("S1 ab\nS2 ab\nCO a -1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        assert!(parse_instance("S1 ab\n").is_err());
        assert!(parse_instance("S1 ab\nS1 ab\nS2 b\n").is_err());
    }

    #[test]
    fn solution_output() {
        let sol = Solution::certify(seq("ab"), &seq("ab"), &seq("ab")).unwrap();
        assert_eq!(format_solution(Some(&sol)), "LENGTH 2\nSOLUTION ab\n");
        assert_eq!(format_solution(None), "INFEASIBLE\n");
    }

    fn arb_seq(max: usize) -> impl Strategy<Value = Sequence> {
        proptest::string::string_regex(&format!("[a-c#]{{0,{max}}}"))
            .unwrap()
            .prop_map(|s| seq(&s))
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(
            s1 in arb_seq(8),
            s2 in arb_seq(8),
            cs in proptest::collection::btree_set(arb_seq(4), 0..4),
            co in proptest::collection::btree_map(prop::sample::select(vec!['a', 'b', 'c', '#']), 0usize..5, 0..4),
        ) {
            let mut occ = OccurrenceConstraint::new();
            for (c, b) in co {
                occ.set(Symbol::from_char(c).unwrap(), b).unwrap();
            }
            let inst = Instance::new(s1, s2, StringConstraint::from_strings(cs).unwrap(), occ);
            let back = parse_instance(&serialize_instance(&inst)).unwrap();
            prop_assert_eq!(back, inst);
        }
    }
}
