//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqmon::oracle::{
    check_flattening, check_mcl_equivalences, eval_pointfree, eval_pointy_discrete, HomStructure,
};
use seqmon::random::{random_behavior, random_cuts, random_formula, random_trace, FormulaSpec};
use seqmon::workload::{median_of, run_dense, run_discrete, BenchReport, BenchSpec, Property, Trace};
use seqmon::{
    parse, Chunk, DenseNetwork, DiscreteNetwork, Formula, NodeKind, Period, PeriodSet, Time, TimeModel,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn bits(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

fn tf(v: &[bool]) -> String {
    v.iter().map(|&b| if b { 'T' } else { 'F' }).collect()
}

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

/// Runs a discrete formula and records the state of `node` after each step.
fn discrete_run(text: &str, cols: &[&str], node: impl Fn(&seqmon::SubformulaDag) -> usize) -> (String, Vec<String>) {
    let f = parse(text, TimeModel::Discrete).unwrap();
    let mut net = DiscreteNetwork::compile(&f).unwrap();
    let i = node(net.dag());
    let len = cols[0].len();
    let mut out = Vec::new();
    let mut states = Vec::new();
    for k in 0..len {
        let row: Vec<bool> = cols.iter().map(|c| bits(c)[k]).collect();
        out.push(net.step(&row).unwrap());
        states.push(net.timed_state(i).unwrap().to_string());
    }
    (tf(&out), states)
}

fn golden_nested_once() -> Outcome {
    let start = Instant::now();
    let text = "once[1:2] once[1:2] (p || q)";
    let (out, v3) = discrete_run(text, &["100000", "000010"], |d| d.root());
    let (_, v2) = discrete_run(text, &["100000", "000010"], |d| {
        (0..d.len()).find(|&i| matches!(d.nodes()[i], NodeKind::Once(c, _) if matches!(d.nodes()[c], NodeKind::Or(..)))).unwrap()
    });
    let ok = out == "FFTTTF"
        && v2 == ["[2,3]", "[2,3]", "{3}", "{}", "[6,7]", "[6,7]"]
        && v3 == ["{}", "[3,4]", "[3,5]", "[4,5]", "{5}", "[7,8]"]
        && start.elapsed() < Duration::from_secs(1);
    ensure(ok, format!("outputs {out}, V(2) {v2:?}, V(3) {v3:?}"))
}

fn golden_historically() -> Outcome {
    let start = Instant::now();
    let (out, v) = discrete_run("historically[1:2] psi", &["001110"], |d| d.root());
    let f = parse("historically[1:2] psi", TimeModel::Discrete).unwrap();
    let mut strong = DiscreteNetwork::compile(&f).unwrap();
    strong.set_strong_historically(true).unwrap();
    let s: Vec<bool> = bits("001110").iter().map(|&x| strong.step(&[x]).unwrap()).collect();
    let ok = out == "TFFFTT"
        && v == ["[2,3]", "[2,4]", "[3,4]", "{4}", "{}", "[7,8]"]
        && tf(&s) == "FFFFTT"
        && start.elapsed() < Duration::from_secs(1);
    ensure(ok, format!("weak {out}, V {v:?}, strong {}", tf(&s)))
}

fn golden_since() -> Outcome {
    let start = Instant::now();
    let (out, v) = discrete_run("p since[2:3] q", &["001111", "010010"], |d| d.root());
    let ok = out == "FFFTTF" && v[4] == "{5} u [7,8]" && start.elapsed() < Duration::from_secs(1);
    ensure(ok, format!("outputs {out}, V {v:?}"))
}

fn table6_chunks() -> Vec<Chunk> {
    let c = |s: i64, e: i64, a: &[(i64, i64)], b: &[(i64, i64)]| {
        let cols = vec![("phi1".to_string(), PeriodSet::from_ints(a)), ("phi2".to_string(), PeriodSet::from_ints(b))];
        Chunk::from_columns(Time::from_int(s), Time::from_int(e), cols).unwrap()
    };
    vec![
        c(0, 30, &[(7, 30)], &[(3, 8)]),
        c(30, 47, &[(30, 35), (39, 47)], &[(38, 39)]),
        c(47, 75, &[(47, 49), (63, 75)], &[(70, 75)]),
        c(75, 99, &[(75, 99)], &[(75, 89)]),
    ]
}

fn golden_dense_since() -> Outcome {
    let start = Instant::now();
    let f = parse("phi1 since[18:24] phi2", TimeModel::Dense).unwrap();
    let mut net = DenseNetwork::compile(&f, Time::ZERO).unwrap();
    net.set_tracing(true);
    let mut outs = Vec::new();
    let mut last = Vec::new();
    for c in table6_chunks() {
        outs.push(net.feed_chunk(&c).unwrap().to_string());
        last = net.trace().iter().map(|s| s.state.to_string()).collect();
    }
    let ok = outs == ["{(25,30)}", "{(30,32)}", "{}", "{(88,99)}"]
        && last == ["{(88,113)}", "{(89,113)}"]
        && start.elapsed() < Duration::from_secs(1);
    ensure(ok, format!("outputs {outs:?}, chunk-4 states {last:?}"))
}

fn golden_boolean() -> Outcome {
    let p = PeriodSet::from_ints(&[(2, 4), (7, 10), (11, 17)]);
    let q = PeriodSet::from_ints(&[(3, 8), (14, 15)]);
    let not = p.complement(&Period::ints(0, 20)).unwrap().to_string();
    let and = p.intersect(&q).to_string();
    let or = p.union(&q).to_string();
    let ok = not == "{(0,2),(4,7),(10,11),(17,20)}" && and == "{(3,4),(7,8),(14,15)}" && or == "{(2,10),(11,17)}";
    ensure(ok, format!("~p {not}, p&q {and}, p|q {or}"))
}

fn seqmon(args: &[&str], stdin: &str) -> (Option<i32>, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_seqmon"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    (o.status.code(), String::from_utf8(o.stdout).unwrap())
}

fn golden_cli() -> Outcome {
    let discrete = seqmon(&["monitor", "--formula", "once[1:2] once[1:2] (p || q)"], "p,q\n1,0\n0,0\n0,0\n0,0\n0,1\n0,0\n");
    let dense_csv = "time,phi1,phi2\n3,0,0\n7,0,1\n8,1,1\n30,1,0\n35,1,0\n38,0,0\n39,0,1\n47,1,0\n\
                     49,1,0\n63,0,0\n70,1,0\n75,1,1\n89,1,1\n99,1,0\n";
    let dense = seqmon(
        &["monitor", "--mode", "dense", "--chunk-rows", "4", "--formula", "phi1 since[18:24] phi2"],
        dense_csv,
    );
    let empty = seqmon(&["monitor", "--formula", "p"], "");
    let ok = discrete == (Some(0), "0\n0\n1\n1\n1\n0\n".into())
        && dense == (Some(0), "25,30\n30,32\n88,99\n".into())
        && empty == (Some(0), String::new());
    ensure(ok, format!("discrete {:?}, dense {:?}", discrete.1, dense.1))
}

fn differential_discrete() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let spec = FormulaSpec::discrete(&["p", "q", "r"], 4, 8);
    let mut mismatches = 0;
    let mut steps = 0;
    for _ in 0..1000 {
        let f = random_formula(&mut rng, &spec);
        let len = rng.gen_range(1..=30);
        let w = random_trace(&mut rng, &names(&["p", "q", "r"]), len);
        let mut net = DiscreteNetwork::compile(&f).unwrap();
        let cols: Vec<usize> =
            net.propositions().iter().map(|n| w.names().iter().position(|m| m == n).unwrap()).collect();
        for t in 1..=len {
            let row: Vec<bool> = cols.iter().map(|&c| w.row(t)[c]).collect();
            steps += 1;
            if net.step(&row).unwrap() != eval_pointy_discrete(&f, &w, t as i64).unwrap() {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches == 0, format!("1000 instances, {steps} steps, {mismatches} mismatching steps"))
}

struct DenseInstance {
    f: Formula,
    h: HomStructure,
}

fn dense_instances() -> Vec<DenseInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let spec = FormulaSpec::dense(&["p", "q", "r"], 4, 8);
    (0..300)
        .map(|_| {
            let f = random_formula(&mut rng, &spec);
            let end = rng.gen_range(1..=50);
            DenseInstance { f, h: random_behavior(&mut rng, &names(&["p", "q", "r"]), end) }
        })
        .collect()
}

fn run_chunks(f: &Formula, h: &HomStructure, cuts: &[Time]) -> PeriodSet {
    let mut net = DenseNetwork::compile(f, h.start()).unwrap();
    let mut out = PeriodSet::new();
    for c in h.to_chunk().split_many(cuts).unwrap() {
        out = out.union(&net.feed_chunk(&c).unwrap());
    }
    net.finish().unwrap();
    out
}

fn differential_dense(instances: &[DenseInstance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    let mut mixed = 0;
    for inst in instances {
        let want = eval_pointfree(&inst.f, &inst.h).unwrap();
        if !want.is_empty() && want != PeriodSet::single(inst.h.span()) {
            mixed += 1;
        }
        let end = inst.h.end().to_integer().unwrap();
        let mut segmentations = vec![Vec::new()];
        segmentations.extend((0..3).map(|_| random_cuts(&mut rng, 0, end, 6)));
        for cuts in &segmentations {
            if run_chunks(&inst.f, &inst.h, cuts) != want {
                mismatches += 1;
            }
        }
    }
    ensure(
        mismatches == 0,
        format!(
            "{} instances ({mixed} with mixed output) x (whole + 3 re-chunkings), {mismatches} mismatches",
            instances.len()
        ),
    )
}

fn flattening(instances: &[DenseInstance]) -> Outcome {
    let failures = instances.iter().filter(|i| !check_flattening(&i.f, &i.h).unwrap()).count();
    ensure(failures == 0, format!("{} instances, {failures} failures", instances.len()))
}

fn compass_equivalences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let spec = FormulaSpec { core_only: true, ..FormulaSpec::dense(&["p", "q"], 3, 4) };
    let mut failures = 0;
    for _ in 0..100 {
        let f = random_formula(&mut rng, &spec);
        let end = rng.gen_range(2..=8);
        let h = random_behavior(&mut rng, &names(&["p", "q"]), end);
        if !check_mcl_equivalences(&f, &h).unwrap() {
            failures += 1;
        }
    }
    ensure(failures == 0, format!("100 instances, {failures} failures"))
}

const N: usize = 1_000_000;

fn timed(property: Property) -> BenchReport {
    let trace = BenchSpec::new(property, N).with_seed(1).generate();
    let f = property.formula();
    median_of(3, || run_discrete(&property.to_string(), &f, &trace))
}

fn ratio_check(small: Property, large: Property, limit: f64) -> Outcome {
    let a = timed(small);
    let b = timed(large);
    let r = b.elapsed.as_secs_f64() / a.elapsed.as_secs_f64();
    ensure(
        r <= limit,
        format!("{small} {:.3}s, {large} {:.3}s, ratio {r:.2} (limit {limit})", a.elapsed.as_secs_f64(), b.elapsed.as_secs_f64()),
    )
}

fn delay_peaks() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for b in [6, 60, 600] {
        let r = timed(Property::Delay(b));
        let want = (b as usize).div_ceil(2);
        ok &= r.peak_intervals + 1 >= want && r.peak_intervals <= want + 1;
        detail.push(format!("b={b}: peak {} (want {want}±1)", r.peak_intervals));
    }
    ensure(ok, detail.join(", "))
}

fn stuttering_speedup() -> Outcome {
    let trace = Trace::stuttering(N, 1000);
    let f = parse("p since[1:600] q", TimeModel::Discrete).unwrap();
    let discrete = median_of(3, || run_discrete("stutter/discrete", &f, &trace));
    let dense = median_of(3, || run_dense("stutter/dense", &f, &trace, 1000));
    let d = discrete.elapsed.as_secs_f64();
    let c = dense.elapsed.as_secs_f64();
    ensure(c <= 0.5 * d, format!("discrete {d:.4}s, dense {c:.4}s, speedup {:.1}x", d / c))
}

/// The never-stuttering delay trace in dense mode, with the generator's
/// formula widened to `since[b-1:b]` (a point bound is empty over dense
/// time). Checked against the reference on a prefix and in closed form on
/// the whole run.
fn dense_delay_correctness() -> Outcome {
    let b = 600;
    let f = parse(&format!("p since[{}:{b}] q", b - 1), TimeModel::Dense).unwrap();
    let prefix = BenchSpec::new(Property::Delay(b), 1500).generate();
    let mut h = HomStructure::new(Time::ZERO, Time::from_int(prefix.len() as i64)).unwrap();
    for (i, name) in prefix.names.iter().enumerate() {
        let ones: Vec<(i64, i64)> =
            prefix.rows().enumerate().filter(|(_, r)| r[i] == 1).map(|(k, _)| (k as i64, k as i64 + 1)).collect();
        h = h.with(name, PeriodSet::from_ints(&ones)).unwrap();
    }
    let want = eval_pointfree(&f, &h).unwrap();
    let got = run_chunks(&f, &h, &(1..prefix.len() as i64).step_by(64).map(Time::from_int).collect::<Vec<_>>());
    let whole = BenchSpec::new(Property::Delay(b), N).generate();
    let mut net = DenseNetwork::compile(&f, Time::ZERO).unwrap();
    let mut builder = seqmon::ChunkBuilder::new(whole.names.clone(), Time::ZERO, 64);
    let mut out = PeriodSet::new();
    for (k, r) in whole.rows().enumerate() {
        let row: Vec<bool> = r.iter().map(|&v| v == 1).collect();
        if let Some(c) = builder.push(Time::from_int(k as i64 + 1), &row).unwrap() {
            out = out.union(&net.feed_chunk(&c).unwrap());
        }
    }
    if let Some(c) = builder.flush() {
        out = out.union(&net.feed_chunk(&c).unwrap());
    }
    let closed = PeriodSet::from_ints(&[(b - 1, N as i64)]);
    ensure(
        got == want && out == closed,
        format!("prefix: engine {got} vs reference {want}; whole run {out} (expected {closed})"),
    )
}

fn main() {
    let instances = dense_instances();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("golden: nested timed once run", Box::new(golden_nested_once)),
        ("golden: timed historically run (weak and strong)", Box::new(golden_historically)),
        ("golden: timed since run", Box::new(golden_since)),
        ("golden: dense timed since over four chunks", Box::new(golden_dense_since)),
        ("golden: point-free Boolean operations", Box::new(golden_boolean)),
        ("golden: command-line monitor runs", Box::new(golden_cli)),
        ("differential: discrete engine vs recursive semantics", Box::new(differential_discrete)),
        ("differential: dense engine vs point-free semantics, re-chunked", Box::new(|| differential_dense(&instances))),
        ("flattening holds on the dense instances", Box::new(|| flattening(&instances))),
        ("compass logic translation is equivalent", Box::new(compass_equivalences)),
        (
            "scaling: pandq(1,600) within 1.5x of pandq(1,6)",
            Box::new(|| ratio_check(Property::Pandq(1, 6), Property::Pandq(1, 600), 1.5)),
        ),
        (
            "scaling: qpr(300,600) within 1.5x of qpr(3,6)",
            Box::new(|| ratio_check(Property::Qpr(3, 6), Property::Qpr(300, 600), 1.5)),
        ),
        ("scaling: delay(b) peak state size", Box::new(delay_peaks)),
        (
            "scaling: delay(600) within 80x of delay(6)",
            Box::new(|| ratio_check(Property::Delay(6), Property::Delay(600), 80.0)),
        ),
        ("stuttering: dense at most half the discrete time", Box::new(stuttering_speedup)),
        ("dense delay(600) output is correct", Box::new(dense_delay_correctness)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} [{secs:.2}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{secs:.2}s] {detail}");
            }
        }
    }
    println!("{} criteria, {} passed, {failed} failed", criteria.len(), criteria.len() - failed);
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
