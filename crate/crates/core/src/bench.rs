//! Table-fill timing on random inputs, one row per label count `k`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::color::{build_colored_alphabet, enumerate_family, label_function, FamilySpec, MAX_LABELS};
use crate::error::{Error, Result};
use crate::fpt::{dp_fill, effective_occ, table_cells, DEFAULT_MEMORY_BUDGET};
use crate::model::{OccurrenceConstraint, Sequence, Symbol};

pub const CSV_HEADER: &str = "k,n,cells_filled,trials,wall_time_ms,found";

const BENCH_ALPHABET: &[u8] = b"acgt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub n: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub repeats: usize,
    pub seed: u64,
    pub constraint_len: usize,
    pub memory_budget: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n: 20,
            k_min: 4,
            k_max: 8,
            repeats: 3,
            seed: 0,
            constraint_len: 0,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub k: usize,
    pub n: usize,
    /// Cells written per trial; identical across trials.
    pub cells_filled: u64,
    pub trials: usize,
    /// Median fill time of one trial.
    pub wall_time_ms: f64,
    /// Trials whose table accepted.
    pub found: usize,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{}",
            self.k, self.n, self.cells_filled, self.trials, self.wall_time_ms, self.found
        )
    }
}

fn random_sequence(rng: &mut ChaCha8Rng, len: usize) -> Sequence {
    Sequence::from_symbols((0..len).map(|_| {
        let c = BENCH_ALPHABET[rng.gen_range(0..BENCH_ALPHABET.len())];
        Symbol::new(c).expect("bench alphabet is printable")
    }))
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.k_min == 0 || cfg.k_min > cfg.k_max || cfg.k_max > MAX_LABELS {
        return Err(Error::Parameter(format!(
            "k range {}..{} must satisfy 1 ≤ A ≤ B ≤ {MAX_LABELS}",
            cfg.k_min, cfg.k_max
        )));
    }
    if cfg.repeats == 0 {
        return Err(Error::Parameter("repeats must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for k in cfg.k_min..=cfg.k_max {
        let expected = table_cells(cfg.n, cfg.n, cfg.constraint_len, k);
        let mut times = Vec::with_capacity(cfg.repeats);
        let mut found = 0;
        let mut cells = 0;
        for rep in 0..cfg.repeats {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(((k as u64) << 32) | rep as u64);
            let s1 = random_sequence(&mut rng, cfg.n);
            let s2 = random_sequence(&mut rng, cfg.n);
            let sc = random_sequence(&mut rng, cfg.constraint_len);
            let sigma_tilde = build_colored_alphabet(&effective_occ(&s1, &s2, &OccurrenceConstraint::new()));
            let coloring_seed = rng.gen();
            let spec = FamilySpec::Randomized {
                delta: 0.5,
                seed: coloring_seed,
            };
            let f = enumerate_family(&sigma_tilde, k, spec)?
                .next()
                .ok_or_else(|| Error::Internal("empty random family".into()))?;
            let l = label_function(&f, &sigma_tilde);

            let start = Instant::now();
            let table = dp_fill(&s1, &s2, &sc, &l, k, cfg.memory_budget)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);

            if table.cells_filled() as u128 != expected {
                return Err(Error::Internal(format!(
                    "filled {} cells, expected {expected}",
                    table.cells_filled()
                )));
            }
            cells = table.cells_filled();
            found += usize::from(table.accepts());
        }
        times.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            k,
            n: cfg.n,
            cells_filled: cells,
            trials: cfg.repeats,
            wall_time_ms: times[times.len() / 2],
            found,
        });
    }
    Ok(rows)
}
