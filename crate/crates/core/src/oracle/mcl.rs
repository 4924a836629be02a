//! Metric compass logic: modal logic over the Allen relations between
//! periods, used as a second, structurally different dense oracle.
//!
//! The translation of past MTL follows the usual equivalences with two
//! adjustments that the literal clauses need:
//!
//! * the bound of `since` constrains the distance from the end of the φ2
//!   period to the current instant, i.e. the *length* of the φ1 period,
//!   so it is expressed with a [`MclFormula::Duration`] atom rather than on
//!   `⟨Ā⟩` (whose bound measures the φ2 period itself);
//! * the φ1 period may start exactly where the enclosing period starts,
//!   so `⟨E ∪ Ē⟩` also admits the period itself.

use std::collections::HashMap;
use std::fmt;

use super::lattice::{self, covers, Lattice, UNIT};
use super::pointfree::eval_pointfree_refined;
use super::{HomStructure, OracleError};
use crate::formula::{Formula, FormulaError, TimeBound};
use crate::interval::Period;
use crate::time::Time;

/// Allen relation of a modality, seen from the current period `(t,t')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `(t,t'')` with `t'' < t'`
    B,
    /// `(t,t'')` with `t'' > t'`
    BBar,
    /// `(t'',t')` with `t'' > t`
    E,
    /// `(t'',t')` with `t'' < t`
    EBar,
    /// `(t',t'')`
    A,
    /// `(t'',t)`
    ABar,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MclFormula {
    Top,
    Prop(String),
    Complement(Box<MclFormula>),
    Intersect(Box<MclFormula>, Box<MclFormula>),
    /// `⟨X⟩_(a,b) φ`; no bound means `(0,∞)`.
    Diamond(Relation, Option<TimeBound>, Box<MclFormula>),
    /// Holds on `(t,t')` iff `a < t' − t < b`.
    Duration(TimeBound),
}

impl MclFormula {
    pub fn complement(f: MclFormula) -> Self {
        MclFormula::Complement(Box::new(f))
    }

    pub fn intersect(a: MclFormula, b: MclFormula) -> Self {
        MclFormula::Intersect(Box::new(a), Box::new(b))
    }

    pub fn union(a: MclFormula, b: MclFormula) -> Self {
        Self::complement(Self::intersect(Self::complement(a), Self::complement(b)))
    }

    pub fn diamond(rel: Relation, bound: Option<TimeBound>, f: MclFormula) -> Self {
        MclFormula::Diamond(rel, bound, Box::new(f))
    }

    /// `[X] φ = ¬⟨X⟩¬φ`, unbounded.
    pub fn boxed(rel: Relation, f: MclFormula) -> Self {
        Self::complement(Self::diamond(rel, None, Self::complement(f)))
    }

    fn bounds(&self, out: &mut Vec<Time>) {
        match self {
            MclFormula::Top | MclFormula::Prop(_) => {}
            MclFormula::Complement(a) => a.bounds(out),
            MclFormula::Intersect(a, b) => {
                a.bounds(out);
                b.bounds(out);
            }
            MclFormula::Diamond(_, bd, a) => {
                if let Some(bd) = bd {
                    out.push(bd.lower);
                    out.extend(bd.upper);
                }
                a.bounds(out);
            }
            MclFormula::Duration(bd) => {
                out.push(bd.lower);
                out.extend(bd.upper);
            }
        }
    }
}

impl fmt::Display for MclFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MclFormula::Top => f.write_str("T"),
            MclFormula::Prop(p) => f.write_str(p),
            MclFormula::Complement(a) => write!(f, "~({a})"),
            MclFormula::Intersect(a, b) => write!(f, "({a} & {b})"),
            MclFormula::Diamond(r, bd, a) => match bd {
                Some(bd) => write!(f, "<{r:?}>{bd} {a}"),
                None => write!(f, "<{r:?}> {a}"),
            },
            MclFormula::Duration(bd) => write!(f, "dur{bd}"),
        }
    }
}

/// Which of the two equivalent encodings of negation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegationStyle {
    /// `¬φ = [B][E] φ̄`
    BeginEnd,
    /// `¬φ = [E][B] φ̄`
    EndBegin,
}

/// Encodes a past-MTL formula in compass logic.
pub fn translate_to_mcl(f: &Formula, style: NegationStyle) -> Result<MclFormula, OracleError> {
    use MclFormula as M;
    Ok(match f {
        Formula::True => M::Top,
        Formula::False => M::complement(M::Top),
        Formula::Prop(p) => M::Prop(p.clone()),
        Formula::Not(a) => {
            let bar = M::complement(translate_to_mcl(a, style)?);
            match style {
                NegationStyle::BeginEnd => M::boxed(Relation::B, M::boxed(Relation::E, bar)),
                NegationStyle::EndBegin => M::boxed(Relation::E, M::boxed(Relation::B, bar)),
            }
        }
        Formula::And(a, b) => M::intersect(translate_to_mcl(a, style)?, translate_to_mcl(b, style)?),
        Formula::Or(a, b) => translate_to_mcl(
            &Formula::not(Formula::and(Formula::not((**a).clone()), Formula::not((**b).clone()))),
            style,
        )?,
        Formula::Implies(a, b) => translate_to_mcl(
            &Formula::not(Formula::and((**a).clone(), Formula::not((**b).clone()))),
            style,
        )?,
        Formula::Since(a, b, bound) => {
            let dur = bound.unwrap_or(TimeBound::new(Time::ZERO, None));
            let chi = M::intersect(
                M::intersect(
                    translate_to_mcl(a, style)?,
                    M::diamond(Relation::ABar, None, translate_to_mcl(b, style)?),
                ),
                M::Duration(dur),
            );
            let ends_here = M::union(
                chi.clone(),
                M::union(
                    M::diamond(Relation::E, None, chi.clone()),
                    M::diamond(Relation::EBar, None, chi),
                ),
            );
            M::boxed(Relation::B, ends_here)
        }
        Formula::Once(..) | Formula::Historically(..) => {
            translate_to_mcl(&f.desugar_for_dense()?, style)?
        }
        Formula::Pre(_) => return Err(FormulaError::PreInDense.into()),
    })
}

/// Truth of `m` on `period`, whose endpoints must lie on the instance grid.
pub fn eval_mcl(m: &MclFormula, h: &HomStructure, period: Period) -> Result<bool, OracleError> {
    let end = period.end.finite().ok_or(OracleError::OutsideSpan(period))?;
    if !h.span().covers(period.start, period.end) {
        return Err(OracleError::OutsideSpan(period));
    }
    let mut times = vec![period.start, end];
    m.bounds(&mut times);
    let lat = Lattice::with_times(h, &times, 1);
    let mut ev = MclEval::new(h, &lat);
    let root = ev.compile(m, h, &lat)?;
    Ok(ev.holds(root, lat.ticks(period.start), lat.ticks(end)))
}

/// Compares the point-free semantics of `f` with both compass-logic
/// encodings on every period between two grid points of the span.
pub fn check_mcl_equivalences(f: &Formula, h: &HomStructure) -> Result<bool, OracleError> {
    let g = f.desugar_for_dense()?;
    h.require(&g)?;
    let truth = eval_pointfree_refined(&g, h, 1)?;
    let encodings = [
        translate_to_mcl(&g, NegationStyle::BeginEnd)?,
        translate_to_mcl(&g, NegationStyle::EndBegin)?,
    ];
    let mut times = Vec::new();
    encodings[0].bounds(&mut times);
    let lat = Lattice::with_times(h, &times, 1);
    let n = lat.index(h.end());
    let mut ev = MclEval::new(h, &lat);
    let roots = encodings
        .iter()
        .map(|m| ev.compile(m, h, &lat))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..n {
        for j in i + 1..=n {
            let expect = truth.covers(lat.time(i), lat.time(j).into());
            for &r in &roots {
                if ev.holds(r, i * UNIT, j * UNIT) != expect {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Top,
    Prop(usize),
    Complement(usize),
    Intersect(usize, usize),
    Diamond(Relation, i64, Option<i64>, usize),
    Duration(i64, Option<i64>),
}

/// Clause-by-clause evaluation by enumerating instants: grid points,
/// translates of the current endpoints, and midpoints between them.
/// Unbounded searches outside the span stop one cell beyond the largest
/// bound, after which nothing changes.
struct MclEval {
    nodes: Vec<Node>,
    index: HashMap<MclFormulaKey, usize>,
    props: Vec<Vec<(i64, i64)>>,
    names: HashMap<String, usize>,
    below: i64,
    above: i64,
    memo: HashMap<(usize, i64, i64), bool>,
}

type MclFormulaKey = MclFormula;

impl MclEval {
    fn new(h: &HomStructure, lat: &Lattice) -> Self {
        let n = lat.index(h.end());
        MclEval {
            nodes: Vec::new(),
            index: HashMap::new(),
            props: Vec::new(),
            names: HashMap::new(),
            below: 0,
            above: n * UNIT,
            memo: HashMap::new(),
        }
    }

    fn compile(&mut self, m: &MclFormula, h: &HomStructure, lat: &Lattice) -> Result<usize, OracleError> {
        if let Some(&i) = self.index.get(m) {
            return Ok(i);
        }
        let ticks = |bd: &Option<TimeBound>| match bd {
            Some(bd) => (lat.length(bd.lower) * UNIT, bd.upper.map(|u| lat.length(u) * UNIT)),
            None => (0, None),
        };
        let node = match m {
            MclFormula::Top => Node::Top,
            MclFormula::Prop(p) => {
                let set = h.get(p).ok_or_else(|| OracleError::UnknownProposition(p.clone()))?;
                let slot = match self.names.get(p) {
                    Some(&s) => s,
                    None => {
                        self.props.push(lat.periods(set));
                        self.names.insert(p.clone(), self.props.len() - 1);
                        self.props.len() - 1
                    }
                };
                Node::Prop(slot)
            }
            MclFormula::Complement(a) => Node::Complement(self.compile(a, h, lat)?),
            MclFormula::Intersect(a, b) => Node::Intersect(self.compile(a, h, lat)?, self.compile(b, h, lat)?),
            MclFormula::Diamond(r, bd, a) => {
                let (lo, hi) = ticks(bd);
                let margin = hi.unwrap_or(lo) + UNIT;
                self.below = self.below.min(-margin);
                self.above = self.above.max(lat.index(h.end()) * UNIT + margin);
                Node::Diamond(*r, lo, hi, self.compile(a, h, lat)?)
            }
            MclFormula::Duration(bd) => {
                let (lo, hi) = ticks(&Some(*bd));
                Node::Duration(lo, hi)
            }
        };
        self.nodes.push(node);
        self.index.insert(m.clone(), self.nodes.len() - 1);
        Ok(self.nodes.len() - 1)
    }

    fn holds(&mut self, n: usize, t: i64, u: i64) -> bool {
        if let Some(&v) = self.memo.get(&(n, t, u)) {
            return v;
        }
        let v = match self.nodes[n] {
            Node::Top => true,
            Node::Prop(s) => covers(&self.props[s], t, u),
            Node::Complement(a) => !self.holds(a, t, u),
            Node::Intersect(a, b) => self.holds(a, t, u) && self.holds(b, t, u),
            Node::Duration(lo, hi) => in_bound(u - t, lo, hi),
            Node::Diamond(rel, lo, hi, a) => self.diamond(rel, lo, hi, a, t, u),
        };
        self.memo.insert((n, t, u), v);
        v
    }

    fn diamond(&mut self, rel: Relation, lo: i64, hi: Option<i64>, a: usize, t: i64, u: i64) -> bool {
        let offs = [lattice::offset(t), lattice::offset(u)];
        match rel {
            Relation::B => {
                let cuts = lattice::cuts(t, u, &offs);
                lattice::midpoints(t, u, &cuts)
                    .into_iter()
                    .any(|s| in_bound(u - s, lo, hi) && self.holds(a, t, s))
            }
            Relation::E => lattice::candidates(t, u, &offs)
                .into_iter()
                .any(|s| in_bound(s - t, lo, hi) && self.holds(a, s, u)),
            Relation::BBar => lattice::candidates(u, self.above, &offs)
                .into_iter()
                .any(|s| in_bound(s - u, lo, hi) && self.holds(a, t, s)),
            Relation::EBar => lattice::candidates(self.below, t, &offs)
                .into_iter()
                .any(|s| in_bound(t - s, lo, hi) && self.holds(a, s, u)),
            Relation::A => lattice::candidates(u, self.above, &offs)
                .into_iter()
                .any(|s| in_bound(s - u, lo, hi) && self.holds(a, u, s)),
            Relation::ABar => lattice::candidates(self.below, t, &offs)
                .into_iter()
                .any(|s| in_bound(t - s, lo, hi) && self.holds(a, s, t)),
        }
    }
}

fn in_bound(d: i64, lo: i64, hi: Option<i64>) -> bool {
    d > lo && hi.map_or(true, |h| d < h)
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
