//! Dense-time reference semantics.
//!
//! [`eval_pointfree`] decides every grid cell of the span with a
//! left-continuous pointy reading sampled at the cell midpoint. This is
//! exact: every boundary of a formula's valuation is an input endpoint
//! shifted by sums of bounds, so it lies on the grid and truth is constant
//! inside a cell.
//!
//! [`check_flattening`] compares that table with a separate, literal
//! evaluator of the period relation `(t,t') ⊨ f`.

use std::collections::HashMap;

use super::lattice::{self, covers, Lattice, UNIT};
use super::{HomStructure, OracleError};
use crate::formula::Formula;
use crate::interval::{Period, PeriodSet};

/// Maximal periods of the span on which `f` holds.
pub fn eval_pointfree(f: &Formula, h: &HomStructure) -> Result<PeriodSet, OracleError> {
    eval_pointfree_refined(f, h, 2)
}

/// [`eval_pointfree`] on a grid refined by `refine`; the result does not
/// depend on it.
pub fn eval_pointfree_refined(f: &Formula, h: &HomStructure, refine: i64) -> Result<PeriodSet, OracleError> {
    let g = f.desugar_for_dense()?;
    h.require(&g)?;
    let table = CellTable::new(&g, h, refine);
    Ok(table.read_back(&table.eval(&g)))
}

struct CellTable<'a> {
    lat: Lattice,
    n: i64,
    h: &'a HomStructure,
}

impl<'a> CellTable<'a> {
    fn new(f: &Formula, h: &'a HomStructure, refine: i64) -> Self {
        let lat = Lattice::new(f, h, refine);
        let n = lat.index(h.end());
        CellTable { lat, n, h }
    }

    fn eval(&self, f: &Formula) -> Vec<bool> {
        let n = self.n as usize;
        match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Prop(p) => {
                let set = self.h.get(p).expect("checked");
                (0..self.n)
                    .map(|i| set.covers(self.lat.time(i), self.lat.time(i + 1).into()))
                    .collect()
            }
            Formula::Not(a) => self.eval(a).into_iter().map(|v| !v).collect(),
            Formula::And(a, b) => zip(self.eval(a), self.eval(b), |x, y| x && y),
            Formula::Or(a, b) => zip(self.eval(a), self.eval(b), |x, y| x || y),
            Formula::Implies(a, b) => zip(self.eval(a), self.eval(b), |x, y| !x || y),
            Formula::Since(a, b, bound) => {
                let (y1, y2) = (self.eval(a), self.eval(b));
                // Bounds and positions in half-cells, so midpoints are integers.
                let (lo, hi) = match bound {
                    Some(bd) => (2 * self.lat.length(bd.lower), bd.upper.map(|u| 2 * self.lat.length(u))),
                    None => (0, None),
                };
                (0..n).map(|i| since_at(&y1, &y2, i, lo, hi)).collect()
            }
            Formula::Pre(_) | Formula::Once(..) | Formula::Historically(..) => {
                unreachable!("desugared")
            }
        }
    }

    fn read_back(&self, cells: &[bool]) -> PeriodSet {
        let mut out = PeriodSet::new();
        let mut i = 0;
        while i < cells.len() {
            if !cells[i] {
                i += 1;
                continue;
            }
            let j = (i..cells.len()).find(|&j| !cells[j]).unwrap_or(cells.len());
            out.insert(Period::new(self.lat.time(i as i64), self.lat.time(j as i64)));
            i = j;
        }
        out
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Since at the midpoint `m` of cell `i`: some `r' < m` with φ2 just
/// before `r'`, φ1 on `(r', m)` and `lo < m − r' < hi` (half-cell units).
fn since_at(y1: &[bool], y2: &[bool], i: usize, lo: i64, hi: Option<i64>) -> bool {
    let m = 2 * i as i64 + 1;
    let in_bound = |d: i64| d > lo && hi.map_or(true, |h| d < h);
    let mut c = i;
    loop {
        if !y1[c] {
            return false;
        }
        let c2 = 2 * c as i64;
        // r' strictly inside cell c
        if y2[c] {
            let from = hi.map_or(c2, |h| c2.max(m - h));
            let to = (c2 + 2).min(m).min(m - lo);
            if from < to {
                return true;
            }
        }
        // r' on the left edge of cell c
        if c >= 1 && y2[c - 1] && in_bound(m - c2) {
            return true;
        }
        if c == 0 || hi.is_some_and(|h| m - c2 >= h) {
            return false;
        }
        c -= 1;
    }
}

/// Checks, at every grid point `g` of the span, that the left-continuous
/// pointy value at `g` equals `∃t<g. (t,g) ⊨ f`.
///
/// The pointy side is the cell table: under left continuity the value at
/// `g` is the value on the cell that ends at `g`. The period side is a
/// literal evaluator of the satisfaction relation.
pub fn check_flattening(f: &Formula, h: &HomStructure) -> Result<bool, OracleError> {
    let g = f.desugar_for_dense()?;
    h.require(&g)?;
    let table = CellTable::new(&g, h, 1);
    let cells = table.eval(&g);
    let mut ev = PeriodEval::new(&g, h, &table.lat);
    for j in 1..=table.n {
        let at = j * UNIT;
        let lhs = cells[j as usize - 1];
        let rhs = [UNIT, UNIT / 2, UNIT / 4].iter().any(|&e| ev.holds(ev.root, at - e, at));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the period evaluator against [`eval_pointfree`]: `f` holds on
/// each maximal period as a whole and fails on every cell outside them.
pub fn check_continuity(f: &Formula, h: &HomStructure) -> Result<bool, OracleError> {
    let g = f.desugar_for_dense()?;
    h.require(&g)?;
    let table = CellTable::new(&g, h, 1);
    let cells = table.eval(&g);
    let mut ev = PeriodEval::new(&g, h, &table.lat);
    for p in table.read_back(&cells).iter() {
        let (s, e) = (table.lat.ticks(p.start), table.lat.ticks(p.end.finite().unwrap()));
        if !ev.holds(ev.root, s, e) {
            return Ok(false);
        }
    }
    for (i, &v) in cells.iter().enumerate() {
        let i = i as i64;
        if !v && ev.holds(ev.root, i * UNIT, (i + 1) * UNIT) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy)]
enum Node {
    True,
    False,
    Prop(usize),
    Not(usize),
    And(usize, usize),
    /// Bounds in ticks.
    Since(usize, usize, i64, Option<i64>),
}

/// Literal period semantics over tick coordinates `0..n·UNIT`.
///
/// Quantified instants are enumerated: grid points, translates of the
/// instants already in scope, and midpoints between consecutive ones. The
/// universally quantified instant of `since` ranges over piece midpoints
/// only; negation inspects the pieces between grid points, which suffices
/// because valuations are homogeneous with boundaries on the grid.
struct PeriodEval {
    nodes: Vec<Node>,
    props: Vec<Vec<(i64, i64)>>,
    root: usize,
    memo: HashMap<(usize, i64, i64), bool>,
}

impl PeriodEval {
    fn new(f: &Formula, h: &HomStructure, lat: &Lattice) -> Self {
        let mut ev = PeriodEval { nodes: Vec::new(), props: Vec::new(), root: 0, memo: HashMap::new() };
        let mut names = HashMap::new();
        ev.root = ev.compile(f, h, lat, &mut names);
        ev
    }

    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn compile(&mut self, f: &Formula, h: &HomStructure, lat: &Lattice, names: &mut HashMap<String, usize>) -> usize {
        match f {
            Formula::True => self.push(Node::True),
            Formula::False => self.push(Node::False),
            Formula::Prop(p) => {
                let slot = match names.get(p) {
                    Some(&s) => s,
                    None => {
                        self.props.push(lat.periods(h.get(p).expect("checked")));
                        names.insert(p.clone(), self.props.len() - 1);
                        self.props.len() - 1
                    }
                };
                self.push(Node::Prop(slot))
            }
            Formula::Not(a) => {
                let a = self.compile(a, h, lat, names);
                self.push(Node::Not(a))
            }
            Formula::And(a, b) => {
                let (a, b) = (self.compile(a, h, lat, names), self.compile(b, h, lat, names));
                self.push(Node::And(a, b))
            }
            // a ∨ b = ¬(¬a ∧ ¬b)
            Formula::Or(a, b) => {
                let (a, b) = (self.compile(a, h, lat, names), self.compile(b, h, lat, names));
                let (na, nb) = (self.push(Node::Not(a)), self.push(Node::Not(b)));
                let both = self.push(Node::And(na, nb));
                self.push(Node::Not(both))
            }
            // a → b = ¬(a ∧ ¬b)
            Formula::Implies(a, b) => {
                let (a, b) = (self.compile(a, h, lat, names), self.compile(b, h, lat, names));
                let nb = self.push(Node::Not(b));
                let both = self.push(Node::And(a, nb));
                self.push(Node::Not(both))
            }
            Formula::Since(a, b, bound) => {
                let (a, b) = (self.compile(a, h, lat, names), self.compile(b, h, lat, names));
                let (lo, hi) = match bound {
                    Some(bd) => (lat.length(bd.lower) * UNIT, bd.upper.map(|u| lat.length(u) * UNIT)),
                    None => (0, None),
                };
                self.push(Node::Since(a, b, lo, hi))
            }
            Formula::Pre(_) | Formula::Once(..) | Formula::Historically(..) => unreachable!("desugared"),
        }
    }

    fn holds(&mut self, n: usize, t: i64, u: i64) -> bool {
        debug_assert!(t < u);
        if let Some(&v) = self.memo.get(&(n, t, u)) {
            return v;
        }
        let v = match self.nodes[n] {
            Node::True => true,
            Node::False => false,
            Node::Prop(s) => covers(&self.props[s], t, u),
            // no sub-period satisfies a
            Node::Not(a) => {
                let cuts = lattice::cuts(t, u, &[]);
                let mut ends = vec![t];
                ends.extend_from_slice(&cuts);
                ends.push(u);
                !ends.windows(2).any(|w| self.holds(a, w[0], w[1]))
            }
            Node::And(a, b) => self.holds(a, t, u) && self.holds(b, t, u),
            // every t'' in (t,u) has a witness r' < t''
            Node::Since(a, b, lo, hi) => {
                let cuts = lattice::cuts(t, u, &[]);
                lattice::midpoints(t, u, &cuts)
                    .into_iter()
                    .all(|m| self.witness(a, b, lo, hi, m))
            }
        };
        self.memo.insert((n, t, u), v);
        v
    }

    /// ∃ r < r' < m. (r,r') ⊨ b, (r',m) ⊨ a, lo < m − r' < hi.
    fn witness(&mut self, a: usize, b: usize, lo: i64, hi: Option<i64>, m: i64) -> bool {
        let cand = lattice::candidates(0, m, &[lattice::offset(m)]);
        for k in (0..cand.len()).rev() {
            let r1 = cand[k];
            let d = m - r1;
            if hi.is_some_and(|h| d >= h) {
                return false;
            }
            // a fails on (r1, m), hence on every longer period too
            if !self.holds(a, r1, m) {
                return false;
            }
            let r0 = if k > 0 { cand[k - 1] } else { 0 };
            if d > lo && self.holds(b, r0, r1) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, TimeModel};
    use crate::time::Time;

    fn t(n: i64) -> Time {
        Time::from_int(n)
    }

    fn dense(s: &str) -> Formula {
        parse(s, TimeModel::Dense).unwrap()
    }

    fn table6() -> HomStructure {
        HomStructure::new(t(0), t(99))
            .unwrap()
            .with("phi1", PeriodSet::from_ints(&[(7, 35), (39, 49), (63, 99)]))
            .unwrap()
            .with("phi2", PeriodSet::from_ints(&[(3, 8), (38, 39), (70, 89)]))
            .unwrap()
    }

    #[test]
    fn disjunction_example() {
        let h = HomStructure::new(t(0), t(9))
            .unwrap()
            .with("p", PeriodSet::from_ints(&[(3, 4)]))
            .unwrap()
            .with("q", PeriodSet::from_ints(&[(4, 6)]))
            .unwrap();
        assert_eq!(eval_pointfree(&dense("p || q"), &h).unwrap(), PeriodSet::from_ints(&[(3, 6)]));
        assert!(check_flattening(&dense("p || q"), &h).unwrap());
        assert!(check_flattening(&dense("p"), &h).unwrap());
        assert_eq!(eval_pointfree(&dense("true"), &h).unwrap(), PeriodSet::from_ints(&[(0, 9)]));
    }

    #[test]
    fn since_over_the_whole_dense_run() {
        let h = table6();
        let f = dense("phi1 since[18:24] phi2");
        let v = eval_pointfree(&f, &h).unwrap();
        assert_eq!(v, PeriodSet::from_ints(&[(25, 32), (88, 99)]));
        assert_eq!(eval_pointfree_refined(&f, &h, 4).unwrap(), v);
        assert!(check_flattening(&f, &h).unwrap());
    }

    #[test]
    fn untimed_and_point_bounds() {
        let h = HomStructure::new(t(0), t(10))
            .unwrap()
            .with("p", PeriodSet::from_ints(&[(2, 8)]))
            .unwrap()
            .with("q", PeriodSet::from_ints(&[(1, 3)]))
            .unwrap();
        assert_eq!(eval_pointfree(&dense("p since q"), &h).unwrap(), PeriodSet::from_ints(&[(2, 8)]));
        assert!(eval_pointfree(&dense("p since[2:2] q"), &h).unwrap().is_empty());
        assert_eq!(
            eval_pointfree(&dense("once[0.5:1] q"), &h).unwrap().to_string(),
            "{(1.5,4)}"
        );
        for f in ["p since q", "p since[2:2] q", "once[0.5:1] q", "!(p since[1:3] !q)"] {
            assert!(check_flattening(&dense(f), &h).unwrap(), "{f}");
            assert!(check_continuity(&dense(f), &h).unwrap(), "{f}");
        }
    }

    #[test]
    fn errors() {
        let h = HomStructure::new(t(0), t(5)).unwrap();
        assert_eq!(eval_pointfree(&dense("p"), &h), Err(OracleError::UnknownProposition("p".into())));
        assert!(matches!(
            eval_pointfree(&dense("pre true"), &h),
            Err(OracleError::Formula(_))
        ));
        assert_eq!(HomStructure::new(t(3), t(3)), Err(OracleError::EmptySpan));
        assert!(matches!(
            HomStructure::new(t(0), t(5)).unwrap().with("p", PeriodSet::from_ints(&[(4, 6)])),
            Err(OracleError::OutsideSpan(_))
        ));
    }
}
