//! Random instances for differential testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Formula, TimeBound, TimeModel};
use crate::interval::{Period, PeriodSet};
use crate::oracle::{DiscreteTrace, HomStructure};
use crate::time::Time;

/// Shape of generated formulas.
#[derive(Debug, Clone)]
pub struct FormulaSpec {
    pub props: Vec<String>,
    /// Depth of the syntax tree; atoms have depth 1.
    pub max_depth: usize,
    /// Largest finite bound endpoint.
    pub max_bound: i64,
    pub model: TimeModel,
    /// Restrict to propositions, `!`, `&&` and bounded `since`.
    pub core_only: bool,
}

impl FormulaSpec {
    pub fn discrete(props: &[&str], max_depth: usize, max_bound: i64) -> Self {
        FormulaSpec {
            props: props.iter().map(|s| s.to_string()).collect(),
            max_depth,
            max_bound,
            model: TimeModel::Discrete,
            core_only: false,
        }
    }

    pub fn dense(props: &[&str], max_depth: usize, max_bound: i64) -> Self {
        FormulaSpec { model: TimeModel::Dense, ..Self::discrete(props, max_depth, max_bound) }
    }
}

pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, spec: &FormulaSpec) -> Formula {
    gen(rng, spec, spec.max_depth)
}

fn atom<R: Rng + ?Sized>(rng: &mut R, spec: &FormulaSpec) -> Formula {
    match rng.gen_range(0..12) {
        0 if !spec.core_only => Formula::True,
        1 if !spec.core_only => Formula::False,
        _ => Formula::prop(spec.props.choose(rng).expect("at least one proposition").clone()),
    }
}

fn bound<R: Rng + ?Sized>(rng: &mut R, spec: &FormulaSpec) -> Option<TimeBound> {
    let m = spec.max_bound;
    match rng.gen_range(0..10) {
        0 if !spec.core_only => None,
        1 => Some(TimeBound::new(Time::from_int(rng.gen_range(0..=m)), None)),
        _ => {
            let lo = rng.gen_range(0..=m);
            let hi = rng.gen_range(lo..=m);
            Some(TimeBound::finite(lo, hi))
        }
    }
}

fn gen<R: Rng + ?Sized>(rng: &mut R, spec: &FormulaSpec, depth: usize) -> Formula {
    if depth <= 1 || rng.gen_ratio(1, 5) {
        return atom(rng, spec);
    }
    let d = depth - 1;
    if spec.core_only {
        return match rng.gen_range(0..3) {
            0 => Formula::not(gen(rng, spec, d)),
            1 => Formula::and(gen(rng, spec, d), gen(rng, spec, d)),
            _ => {
                let b = bound(rng, spec);
                Formula::since(gen(rng, spec, d), gen(rng, spec, d), b)
            }
        };
    }
    let pre_allowed = spec.model == TimeModel::Discrete;
    loop {
        return match rng.gen_range(0..9) {
            0 => Formula::not(gen(rng, spec, d)),
            1 => Formula::and(gen(rng, spec, d), gen(rng, spec, d)),
            2 => Formula::or(gen(rng, spec, d), gen(rng, spec, d)),
            3 => Formula::implies(gen(rng, spec, d), gen(rng, spec, d)),
            4 if pre_allowed => Formula::pre(gen(rng, spec, d)),
            4 => continue,
            5 | 6 => {
                let b = bound(rng, spec);
                Formula::since(gen(rng, spec, d), gen(rng, spec, d), b)
            }
            7 => {
                let b = bound(rng, spec);
                Formula::once(gen(rng, spec, d), b)
            }
            _ => {
                let b = bound(rng, spec);
                Formula::historically(gen(rng, spec, d), b)
            }
        };
    }
}

/// Independent fair bits for each proposition.
pub fn random_trace<R: Rng + ?Sized>(rng: &mut R, names: &[String], len: usize) -> DiscreteTrace {
    let rows = (0..len).map(|_| names.iter().map(|_| rng.gen_bool(0.5)).collect()).collect();
    DiscreteTrace::new(names.to_vec(), rows).expect("rows have one value per name")
}

/// Piecewise behavior over `(0, end)` with integer switching points.
pub fn random_behavior<R: Rng + ?Sized>(rng: &mut R, names: &[String], end: i64) -> HomStructure {
    let mut h = HomStructure::new(Time::ZERO, Time::from_int(end)).expect("end > 0");
    for name in names {
        let switches = rng.gen_range(0..=(end - 1).clamp(0, 12) as usize);
        let mut points: Vec<i64> = (0..switches).map(|_| rng.gen_range(1..end)).collect();
        points.sort_unstable();
        points.dedup();
        let mut value = rng.gen_bool(0.5);
        let mut prev = 0;
        let mut set = PeriodSet::new();
        for p in points.into_iter().chain(std::iter::once(end)) {
            if value {
                set.insert(Period::ints(prev, p));
            }
            value = !value;
            prev = p;
        }
        h = h.with(name, set).expect("inside the span");
    }
    h
}

/// Up to `max` sorted, distinct cut points strictly inside `(start, end)`,
/// on the half-unit grid.
pub fn random_cuts<R: Rng + ?Sized>(rng: &mut R, start: i64, end: i64, max: usize) -> Vec<Time> {
    if end - start < 1 {
        return Vec::new();
    }
    let k = rng.gen_range(0..=max);
    let mut halves: Vec<i64> = (0..k).map(|_| rng.gen_range(2 * start + 1..2 * end)).collect();
    halves.sort_unstable();
    halves.dedup();
    halves.into_iter().map(|h| Time::from_ratio(h, 2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_formulas_respect_the_spec() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = FormulaSpec::dense(&["p", "q"], 4, 8);
        for _ in 0..200 {
            let f = random_formula(&mut rng, &spec);
            assert!(f.depth() <= 4);
            assert!(!f.contains_pre());
        }
        let core = FormulaSpec { core_only: true, ..spec };
        for _ in 0..200 {
            let f = random_formula(&mut rng, &core);
            assert!(f.desugar_for_dense().unwrap() == f);
        }
    }

    #[test]
    fn behaviors_and_cuts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let names = vec!["a".to_string(), "b".to_string()];
        let h = random_behavior(&mut rng, &names, 20);
        assert_eq!(h.names().count(), 2);
        let unit = random_behavior(&mut rng, &names, 1);
        assert!(unit.get("a").unwrap().len() <= 1);
        let cuts = random_cuts(&mut rng, 0, 20, 5);
        assert!(cuts.windows(2).all(|w| w[0] < w[1]));
        assert!(cuts.iter().all(|&c| c > Time::ZERO && c < Time::from_int(20)));
        assert_eq!(random_trace(&mut rng, &names, 9).len(), 9);
    }
}
