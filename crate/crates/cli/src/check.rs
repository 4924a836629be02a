//! Differential checking of the engines against the reference semantics.
//!
//! Engines are reached through [`Engines`] so a test can substitute a
//! deliberately broken implementation and confirm that the checker notices.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqmon::oracle::{eval_pointfree, eval_pointy_discrete, DiscreteTrace, HomStructure};
use seqmon::random::{random_behavior, random_cuts, random_formula, random_trace, FormulaSpec};
use seqmon::{parse, DenseNetwork, DiscreteNetwork, Formula, PeriodSet, Time, TimeModel};

use crate::csvio::{write_dense_behavior, write_discrete_trace};
use crate::error::CliError;
use crate::Mode;

/// The monitors under test.
pub trait Engines {
    /// Outputs for every row of `w`.
    fn discrete(&self, f: &Formula, w: &DiscreteTrace) -> Result<Vec<bool>, String>;
    /// Union of the outputs when `h` is fed in pieces split at `cuts`.
    fn dense(&self, f: &Formula, h: &HomStructure, cuts: &[Time]) -> Result<PeriodSet, String>;
}

/// The engines of this crate.
pub struct Builtin;

impl Engines for Builtin {
    fn discrete(&self, f: &Formula, w: &DiscreteTrace) -> Result<Vec<bool>, String> {
        let mut net = DiscreteNetwork::compile(f).map_err(|e| e.to_string())?;
        let cols: Vec<usize> = net
            .propositions()
            .iter()
            .map(|p| w.names().iter().position(|n| n == p).ok_or(format!("trace lacks `{p}`")))
            .collect::<Result<_, _>>()?;
        let mut row = vec![false; cols.len()];
        w.rows()
            .iter()
            .map(|values| {
                for (slot, &c) in row.iter_mut().zip(&cols) {
                    *slot = values[c];
                }
                net.step(&row).map_err(|e| e.to_string())
            })
            .collect()
    }

    fn dense(&self, f: &Formula, h: &HomStructure, cuts: &[Time]) -> Result<PeriodSet, String> {
        let mut net = DenseNetwork::compile(f, h.start()).map_err(|e| e.to_string())?;
        let mut out = PeriodSet::new();
        for chunk in h.to_chunk().split_many(cuts).map_err(|e| e.to_string())? {
            out = out.union(&net.feed_chunk(&chunk).map_err(|e| e.to_string())?);
        }
        net.finish().map_err(|e| e.to_string())?;
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// A fixed formula; random formulas when `None`.
    pub formula: Option<String>,
    pub trials: usize,
    pub seed: u64,
    /// Time models to check; both when `None`.
    pub mode: Option<Mode>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub discrete_trials: usize,
    pub dense_trials: usize,
}

/// A minimized instance on which an engine and the reference disagree.
#[derive(Debug, Clone)]
pub enum Counterexample {
    Discrete { formula: Formula, trace: DiscreteTrace, step: usize, expected: bool, found: Result<bool, String> },
    Dense { formula: Formula, behavior: HomStructure, cuts: Vec<Time>, expected: PeriodSet, found: Result<PeriodSet, String> },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Discrete { formula, trace, step, expected, found } => {
                writeln!(f, "discrete mismatch for `{formula}` at step {step}")?;
                writeln!(f, "expected {}, engine gave {}", expected, show(found))?;
                let mut buf = Vec::new();
                write_discrete_trace(trace, &mut buf).map_err(|_| fmt::Error)?;
                write!(f, "{}", String::from_utf8_lossy(&buf))
            }
            Counterexample::Dense { formula, behavior, cuts, expected, found } => {
                writeln!(f, "dense mismatch for `{formula}`")?;
                writeln!(f, "expected {}, engine gave {}", expected, show(found))?;
                let cuts: Vec<String> = cuts.iter().map(|c| c.to_string()).collect();
                writeln!(f, "chunk cuts: [{}]", cuts.join(","))?;
                let mut buf = Vec::new();
                write_dense_behavior(behavior, &mut buf).map_err(|_| fmt::Error)?;
                write!(f, "{}", String::from_utf8_lossy(&buf))
            }
        }
    }
}

fn show<T: fmt::Display>(r: &Result<T, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error `{e}`"),
    }
}

impl Counterexample {
    /// Writes `formula.txt`, `trace.csv` and, for dense runs, `cuts.txt`.
    pub fn write_artifacts(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        match self {
            Counterexample::Discrete { formula, trace, .. } => {
                fs::write(dir.join("formula.txt"), format!("{formula}\n"))?;
                write_discrete_trace(trace, fs::File::create(dir.join("trace.csv"))?)
            }
            Counterexample::Dense { formula, behavior, cuts, .. } => {
                fs::write(dir.join("formula.txt"), format!("{formula}\n"))?;
                let cuts: Vec<String> = cuts.iter().map(|c| format!("{c}\n")).collect();
                fs::write(dir.join("cuts.txt"), cuts.concat())?;
                write_dense_behavior(behavior, fs::File::create(dir.join("trace.csv"))?)
            }
        }
    }
}

const PROPS: [&str; 3] = ["p", "q", "r"];

fn props_of(f: &Formula) -> Vec<String> {
    let p = f.propositions();
    if p.is_empty() {
        vec!["p".to_string()]
    } else {
        p
    }
}

/// Parses the fixed formula for `model`. `Ok(None)` means the mode does not
/// apply and was not asked for explicitly.
fn fixed_formula(text: &str, model: TimeModel, explicit: bool) -> Result<Option<Formula>, CliError> {
    let f = match parse(text, model) {
        Ok(f) => f,
        Err(e) if explicit => return Err(e.into()),
        Err(_) => return Ok(None),
    };
    let usable = match model {
        TimeModel::Discrete => DiscreteNetwork::compile(&f).map(|_| ()).map_err(|e| e.to_string()),
        TimeModel::Dense => f.desugar_for_dense().map(|_| ()).map_err(|e| e.to_string()),
    };
    match usable {
        Ok(()) => Ok(Some(f)),
        Err(e) if explicit => Err(CliError::Usage(e)),
        Err(_) => Ok(None),
    }
}

/// Runs the trials; `Err(Mismatch)` is never returned here, a mismatch is
/// reported as `Ok(Err(..))` so the caller can dump it.
pub fn run_check(cfg: &CheckConfig, engines: &dyn Engines) -> Result<Result<CheckSummary, Box<Counterexample>>, CliError> {
    let mut summary = CheckSummary::default();
    let modes = match cfg.mode {
        Some(m) => vec![m],
        None => vec![Mode::Discrete, Mode::Dense],
    };
    for mode in modes {
        let explicit = cfg.mode.is_some();
        let model = match mode {
            Mode::Discrete => TimeModel::Discrete,
            Mode::Dense => TimeModel::Dense,
        };
        let fixed = match &cfg.formula {
            Some(text) => match fixed_formula(text, model, explicit)? {
                Some(f) => Some(f),
                None => continue,
            },
            None => None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (mode as u64) << 32);
        for _ in 0..cfg.trials {
            let found = match mode {
                Mode::Discrete => {
                    summary.discrete_trials += 1;
                    discrete_trial(&mut rng, fixed.as_ref(), engines)
                }
                Mode::Dense => {
                    summary.dense_trials += 1;
                    dense_trial(&mut rng, fixed.as_ref(), engines)
                }
            };
            if let Some(cex) = found {
                return Ok(Err(Box::new(cex)));
            }
        }
    }
    Ok(Ok(summary))
}

fn discrete_trial(rng: &mut ChaCha8Rng, fixed: Option<&Formula>, engines: &dyn Engines) -> Option<Counterexample> {
    let f = match fixed {
        Some(f) => f.clone(),
        None => random_formula(rng, &FormulaSpec::discrete(&PROPS, 4, 8)),
    };
    let names = props_of(&f);
    let len = rng.gen_range(1..=30);
    let w = random_trace(rng, &names, len);
    let _ = discrete_mismatch(&f, &w, engines)?;
    Some(shrink_discrete(f, w, engines))
}

/// First step where the engine and the oracle disagree.
fn discrete_mismatch(f: &Formula, w: &DiscreteTrace, engines: &dyn Engines) -> Option<(usize, bool, Result<bool, String>)> {
    let got = engines.discrete(f, w);
    for t in 1..=w.len() {
        let want = eval_pointy_discrete(f, w, t as i64).expect("trace covers the formula");
        match &got {
            Ok(out) if out.get(t - 1) == Some(&want) => {}
            Ok(out) => return Some((t, want, out.get(t - 1).copied().ok_or("too few outputs".to_string()))),
            Err(e) => return Some((t, want, Err(e.clone()))),
        }
    }
    None
}

fn shrink_discrete(f: Formula, w: DiscreteTrace, engines: &dyn Engines) -> Counterexample {
    let names = w.names().to_vec();
    let fails = |rows: &[Vec<bool>]| {
        let w = DiscreteTrace::new(names.clone(), rows.to_vec()).ok()?;
        discrete_mismatch(&f, &w, engines).map(|m| m.0)
    };
    let mut rows = w.rows().to_vec();
    let mut changed = true;
    while changed {
        changed = false;
        if let Some(t) = fails(&rows) {
            rows.truncate(t);
        }
        let mut i = 0;
        while i < rows.len() && rows.len() > 1 {
            let mut fewer = rows.clone();
            fewer.remove(i);
            if fails(&fewer).is_some() {
                rows = fewer;
                changed = true;
            } else {
                i += 1;
            }
        }
        for i in 0..rows.len() {
            for j in 0..names.len() {
                if rows[i][j] {
                    rows[i][j] = false;
                    if fails(&rows).is_some() {
                        changed = true;
                    } else {
                        rows[i][j] = true;
                    }
                }
            }
        }
    }
    let trace = DiscreteTrace::new(names, rows).expect("rows keep their width");
    let (step, expected, found) = discrete_mismatch(&f, &trace, engines).expect("shrinking preserves the failure");
    Counterexample::Discrete { formula: f, trace, step, expected, found }
}

fn dense_trial(rng: &mut ChaCha8Rng, fixed: Option<&Formula>, engines: &dyn Engines) -> Option<Counterexample> {
    let f = match fixed {
        Some(f) => f.clone(),
        None => random_formula(rng, &FormulaSpec::dense(&PROPS, 3, 6)),
    };
    let names = props_of(&f);
    let end = rng.gen_range(2..=20);
    let h = random_behavior(rng, &names, end);
    let cuts = random_cuts(rng, 0, end, 4);
    let _ = dense_mismatch(&f, &h, &cuts, engines)?;
    Some(shrink_dense(f, h, cuts, engines))
}

fn dense_mismatch(
    f: &Formula,
    h: &HomStructure,
    cuts: &[Time],
    engines: &dyn Engines,
) -> Option<(PeriodSet, Result<PeriodSet, String>)> {
    let want = eval_pointfree(f, h).expect("behavior covers the formula");
    let got = engines.dense(f, h, cuts);
    match &got {
        Ok(out) if *out == want => None,
        _ => Some((want, got)),
    }
}

fn shrink_dense(f: Formula, h: HomStructure, mut cuts: Vec<Time>, engines: &dyn Engines) -> Counterexample {
    let mut h = h;
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < cuts.len() {
            let mut fewer = cuts.clone();
            fewer.remove(i);
            if dense_mismatch(&f, &h, &fewer, engines).is_some() {
                cuts = fewer;
                changed = true;
            } else {
                i += 1;
            }
        }
        let names: Vec<String> = h.names().map(str::to_string).collect();
        for name in &names {
            let periods = h.get(name).expect("listed name").periods().to_vec();
            for skip in 0..periods.len() {
                let kept = PeriodSet::from_periods(periods.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, p)| *p));
                let candidate = h.clone().with(name, kept).expect("subset stays in the span");
                if dense_mismatch(&f, &candidate, &cuts, engines).is_some() {
                    h = candidate;
                    changed = true;
                    break;
                }
            }
        }
    }
    let (expected, found) = dense_mismatch(&f, &h, &cuts, engines).expect("shrinking preserves the failure");
    Counterexample::Dense { formula: f, behavior: h, cuts, expected, found }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_engines_pass() {
        let cfg = CheckConfig { formula: None, trials: 30, seed: 3, mode: None };
        let summary = run_check(&cfg, &Builtin).unwrap().unwrap();
        assert_eq!(summary, CheckSummary { discrete_trials: 30, dense_trials: 30 });
    }

    #[test]
    fn fixed_formula_skips_inapplicable_mode() {
        let cfg = CheckConfig { formula: Some("pre p".into()), trials: 5, seed: 0, mode: None };
        let summary = run_check(&cfg, &Builtin).unwrap().unwrap();
        assert_eq!(summary.dense_trials, 0);
        let cfg = CheckConfig { mode: Some(Mode::Dense), ..cfg };
        assert!(matches!(run_check(&cfg, &Builtin), Err(CliError::Usage(_))));
    }

    #[test]
    fn zero_trials_do_nothing() {
        let cfg = CheckConfig { formula: None, trials: 0, seed: 0, mode: None };
        assert_eq!(run_check(&cfg, &Builtin).unwrap().unwrap(), CheckSummary::default());
    }
}
