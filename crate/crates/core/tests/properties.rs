use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqmon::oracle::{
    check_continuity, check_flattening, check_mcl_equivalences, eval_pointfree, eval_pointfree_refined,
    eval_pointy_discrete, HomStructure,
};
use seqmon::random::{random_behavior, random_cuts, random_formula, random_trace, FormulaSpec};
use seqmon::{parse, DenseNetwork, DiscreteNetwork, Formula, PeriodSet, Time, TimeBound, TimeModel};

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

#[test]
fn printing_then_parsing_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for model in [TimeModel::Discrete, TimeModel::Dense] {
        let spec = FormulaSpec { model, ..FormulaSpec::discrete(&["p", "q", "r"], 5, 10) };
        for _ in 0..500 {
            let f = random_formula(&mut rng, &spec);
            let text = f.to_string();
            assert_eq!(parse(&text, model).unwrap(), f, "{text}");
        }
    }
}

#[test]
fn dag_is_topologically_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let spec = FormulaSpec::discrete(&["p", "q"], 6, 5);
    for _ in 0..300 {
        let dag = random_formula(&mut rng, &spec).build_dag();
        assert_eq!(dag.root(), dag.len() - 1);
        for (i, n) in dag.nodes().iter().enumerate() {
            assert!(n.children().iter().all(|&c| c < i));
        }
        let mut seen = std::collections::HashSet::new();
        assert!(dag.nodes().iter().all(|n| seen.insert(n.clone())));
    }
}

#[test]
fn dense_desugaring_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let spec = FormulaSpec::dense(&["p", "q"], 5, 6);
    for _ in 0..300 {
        let once = random_formula(&mut rng, &spec).desugar_for_dense().unwrap();
        assert_eq!(once.desugar_for_dense().unwrap(), once);
    }
}

#[test]
fn discrete_engine_agrees_with_recursive_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let spec = FormulaSpec::discrete(&["p", "q", "r"], 4, 8);
    for _ in 0..400 {
        let f = random_formula(&mut rng, &spec);
        let len = rng.gen_range(1..=30);
        let w = random_trace(&mut rng, &names(&["p", "q", "r"]), len);
        let mut net = DiscreteNetwork::compile(&f).unwrap();
        let cols: Vec<usize> =
            net.propositions().iter().map(|n| w.names().iter().position(|m| m == n).unwrap()).collect();
        for t in 1..=len {
            let row: Vec<bool> = cols.iter().map(|&c| w.row(t)[c]).collect();
            let got = net.step(&row).unwrap();
            assert_eq!(got, eval_pointy_discrete(&f, &w, t as i64).unwrap(), "{f} at {t}");
        }
    }
}

#[test]
fn nested_once_equals_widened_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let nested = parse("once[1:2] once[1:2] (p || q)", TimeModel::Discrete).unwrap();
    let flat = parse("once[2:4] (p || q)", TimeModel::Discrete).unwrap();
    for _ in 0..200 {
        let w = random_trace(&mut rng, &names(&["p", "q"]), 25);
        let mut a = DiscreteNetwork::compile(&nested).unwrap();
        let mut b = DiscreteNetwork::compile(&flat).unwrap();
        for row in w.rows() {
            assert_eq!(a.step(row).unwrap(), b.step(row).unwrap());
        }
    }
}

#[test]
fn forward_shifted_state_stays_in_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..200 {
        let lo = rng.gen_range(0..6);
        let hi = rng.gen_range(lo..12);
        let f = Formula::since(Formula::prop("p"), Formula::prop("q"), Some(TimeBound::finite(lo, hi)));
        let mut net = DiscreteNetwork::compile(&f).unwrap();
        let root = net.dag().root();
        let w = random_trace(&mut rng, &names(&["p", "q"]), 40);
        for (k, row) in w.rows().iter().enumerate() {
            net.step(row).unwrap();
            let v = net.timed_state(root).unwrap();
            let k = k as i64 + 1;
            if let Some(min) = v.min() {
                assert!(min >= k);
                assert!(v.max().unwrap().unwrap() <= k + hi);
            }
            assert!(v.interval_count() as i64 <= (hi - lo) / 2 + hi / 2 + 1);
        }
    }
}

fn run_dense(f: &Formula, h: &HomStructure, cuts: &[Time]) -> PeriodSet {
    let mut net = DenseNetwork::compile(f, h.start()).unwrap();
    let mut out = PeriodSet::new();
    for c in h.to_chunk().split_many(cuts).unwrap() {
        out = out.union(&net.feed_chunk(&c).unwrap());
    }
    net.finish().unwrap();
    out
}

#[test]
fn dense_engine_agrees_with_point_free_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let spec = FormulaSpec::dense(&["p", "q"], 3, 6);
    for _ in 0..60 {
        let f = random_formula(&mut rng, &spec);
        let end = rng.gen_range(2..=20);
        let h = random_behavior(&mut rng, &names(&["p", "q"]), end);
        let want = eval_pointfree(&f, &h).unwrap();
        for _ in 0..3 {
            let cuts = random_cuts(&mut rng, 0, end, 4);
            assert_eq!(run_dense(&f, &h, &cuts), want, "{f} on cuts {cuts:?}");
        }
    }
}

#[test]
fn oracle_is_refinement_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let spec = FormulaSpec::dense(&["p", "q"], 3, 5);
    for _ in 0..40 {
        let f = random_formula(&mut rng, &spec);
        let end = rng.gen_range(2..=12);
        let h = random_behavior(&mut rng, &names(&["p", "q"]), end);
        assert_eq!(eval_pointfree_refined(&f, &h, 2).unwrap(), eval_pointfree_refined(&f, &h, 4).unwrap(), "{f}");
    }
}

#[test]
fn flattening_and_continuity_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let spec = FormulaSpec::dense(&["p", "q"], 3, 4);
    for _ in 0..25 {
        let f = random_formula(&mut rng, &spec);
        let end = rng.gen_range(2..=10);
        let h = random_behavior(&mut rng, &names(&["p", "q"]), end);
        assert!(check_flattening(&f, &h).unwrap(), "{f}");
        assert!(check_continuity(&f, &h).unwrap(), "{f}");
    }
}

#[test]
fn compass_translation_is_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let spec = FormulaSpec { core_only: true, ..FormulaSpec::dense(&["p", "q"], 3, 3) };
    for _ in 0..10 {
        let f = random_formula(&mut rng, &spec);
        let end = rng.gen_range(2..=6);
        let h = random_behavior(&mut rng, &names(&["p", "q"]), end);
        assert!(check_mcl_equivalences(&f, &h).unwrap(), "{f}");
    }
}
