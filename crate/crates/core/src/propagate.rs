//! Fixpoint propagation of bounds on the concordance invariant M, together
//! with lower bounds for r2, across a graph of knots related by crossing
//! changes, mirrors, connected sums, clasp data and torus/genus facts.
//!
//! A node state is an interval for M inside the lattice 4Z, augmented with
//! a finite set of excluded |M| values. Bounds on |M| alone (torus knots,
//! genus bounds for L-space knots) are not convex in M, so they are stored
//! as exclusions and only sharpen the interval at its endpoints; once
//! another edge pins the sign they collapse to ordinary bounds. Every edge
//! application is a meet, so iteration is monotone and the fixpoint is
//! independent of edge order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knotdb::KnotTable;
use crate::obstruct::genus_bound;

/// Interval-with-lattice constraint on M plus a lower bound on r2.
/// Finite bounds are always multiples of 4; `None` means unbounded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundState {
    m_lo: Option<i64>,
    m_hi: Option<i64>,
    r2_lo: u64,
    abs_m_exclusions: BTreeSet<u64>,
}

impl Default for BoundState {
    fn default() -> Self {
        BoundState::top()
    }
}

fn ceil4(v: i64) -> i64 {
    v.div_euclid(4) * 4 + if v.rem_euclid(4) == 0 { 0 } else { 4 }
}

fn floor4(v: i64) -> i64 {
    v.div_euclid(4) * 4
}

impl BoundState {
    /// The unconstrained state.
    pub fn top() -> Self {
        BoundState { m_lo: None, m_hi: None, r2_lo: 0, abs_m_exclusions: BTreeSet::new() }
    }

    pub fn pinned_value(value: i64) -> Result<Self> {
        if value % 4 != 0 {
            return Err(Error::Domain(format!("M = {value} is not a multiple of 4")));
        }
        Ok(BoundState { m_lo: Some(value), m_hi: Some(value), ..BoundState::top() })
    }

    pub fn m_lo(&self) -> Option<i64> {
        self.m_lo
    }

    pub fn m_hi(&self) -> Option<i64> {
        self.m_hi
    }

    pub fn r2_lo(&self) -> u64 {
        self.r2_lo
    }

    pub fn abs_m_exclusions(&self) -> &BTreeSet<u64> {
        &self.abs_m_exclusions
    }

    pub fn pinned(&self) -> Option<i64> {
        match (self.m_lo, self.m_hi) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    fn is_empty(&self) -> bool {
        matches!((self.m_lo, self.m_hi), (Some(a), Some(b)) if a > b)
    }

    /// Meets the interval with [lo, hi] (either side may be unbounded),
    /// snapping inward to the lattice. Returns whether anything changed.
    fn meet_interval(&mut self, lo: Option<i64>, hi: Option<i64>) -> bool {
        let mut changed = false;
        if let Some(lo) = lo {
            let lo = ceil4(lo);
            if self.m_lo.is_none_or(|cur| lo > cur) {
                self.m_lo = Some(lo);
                changed = true;
            }
        }
        if let Some(hi) = hi {
            let hi = floor4(hi);
            if self.m_hi.is_none_or(|cur| hi < cur) {
                self.m_hi = Some(hi);
                changed = true;
            }
        }
        if changed {
            self.tighten_endpoints();
        }
        changed
    }

    fn exclude_abs(&mut self, values: impl IntoIterator<Item = u64>) -> bool {
        let mut changed = false;
        for v in values {
            debug_assert_eq!(v % 4, 0);
            changed |= self.abs_m_exclusions.insert(v);
        }
        if changed {
            self.tighten_endpoints();
        }
        changed
    }

    /// Walks finite endpoints inward past excluded |M| values. Interior
    /// holes stay as exclusions; only endpoints can move without breaking
    /// convexity.
    fn tighten_endpoints(&mut self) {
        loop {
            if self.is_empty() {
                return;
            }
            if let Some(lo) = self.m_lo {
                if self.abs_m_exclusions.contains(&lo.unsigned_abs()) {
                    self.m_lo = Some(lo + 4);
                    continue;
                }
            }
            if let Some(hi) = self.m_hi {
                if self.abs_m_exclusions.contains(&hi.unsigned_abs()) {
                    self.m_hi = Some(hi - 4);
                    continue;
                }
            }
            return;
        }
    }

    fn feasible(&self, m: i64) -> bool {
        self.m_lo.is_none_or(|lo| m >= lo)
            && self.m_hi.is_none_or(|hi| m <= hi)
            && !self.abs_m_exclusions.contains(&m.unsigned_abs())
    }

    /// Minimal |m| over the feasible set; None when the set is empty.
    pub fn min_abs_m(&self) -> Option<u64> {
        if self.is_empty() {
            return None;
        }
        if self.feasible(0) {
            return Some(0);
        }
        // The exclusion set is finite, so each directed scan ends.
        let horizon = self.abs_m_exclusions.last().copied().unwrap_or(0) as i64 + 4;
        let mut best: Option<u64> = None;
        let mut up = self.m_lo.unwrap_or(0).max(0);
        if up == 0 {
            up = 4;
        }
        while self.m_hi.is_none_or(|hi| up <= hi) && up <= horizon.max(self.m_lo.unwrap_or(0)) {
            if self.feasible(up) {
                best = Some(up.unsigned_abs());
                break;
            }
            up += 4;
        }
        let mut down = self.m_hi.unwrap_or(0).min(0);
        if down == 0 {
            down = -4;
        }
        while self.m_lo.is_none_or(|lo| down >= lo) && down >= (-horizon).min(self.m_hi.unwrap_or(0)) {
            if self.feasible(down) {
                best = Some(best.map_or(down.unsigned_abs(), |b| b.min(down.unsigned_abs())));
                break;
            }
            down -= 4;
        }
        best
    }

    pub fn describe(&self) -> String {
        let mut s = match (self.m_lo, self.m_hi) {
            (Some(a), Some(b)) if a == b => format!("M = {a}"),
            (Some(a), Some(b)) => format!("M in [{a}, {b}]"),
            (Some(a), None) => format!("M >= {a}"),
            (None, Some(b)) => format!("M <= {b}"),
            (None, None) => "M unconstrained".to_string(),
        };
        if !self.abs_m_exclusions.is_empty() {
            let vals: Vec<String> = self.abs_m_exclusions.iter().map(u64::to_string).collect();
            s.push_str(&format!(", |M| not in {{{}}}", vals.join(", ")));
        }
        if self.r2_lo > 0 {
            s.push_str(&format!(", r2 >= {}", self.r2_lo));
        }
        s
    }
}

/// One constraint relating the M values (and through them r2) of the named
/// knots.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintEdge {
    /// `from` becomes `to` by changing `pos` positive and `neg` negative
    /// crossings: -4 neg <= M(from) - M(to) <= 4 pos.
    CrossingChange { from: String, to: String, pos: u64, neg: u64 },
    /// M(a) = -M(b).
    Mirror { a: String, b: String },
    /// M(sum) = M(left) + M(right).
    ConnectedSum { left: String, right: String, sum: String },
    /// -4 c_plus <= M <= 4 c_minus.
    Clasp { knot: String, c_plus: u64, c_minus: u64 },
    /// An L-space knot over F2 of this genus has |M| >= 2g (g even) or
    /// 2g + 2 (g odd).
    LspaceGenus { knot: String, genus: u64 },
    /// pq - p - q <= |M| <= pq - 2 for the (p,q) torus knot.
    Torus { knot: String, p: u64, q: u64 },
    /// Pins M to a known value.
    Seed { knot: String, value: i64 },
    /// SPECULATIVE: |M| <= 4 g4 is an open question, not a theorem. Never
    /// generated automatically; opt in only, and labeled wherever it
    /// prints.
    SliceGenusHypothesis { knot: String, g4: u64 },
}

impl ConstraintEdge {
    pub fn nodes(&self) -> Vec<&str> {
        match self {
            ConstraintEdge::CrossingChange { from, to, .. } => vec![from, to],
            ConstraintEdge::Mirror { a, b } => vec![a, b],
            ConstraintEdge::ConnectedSum { left, right, sum } => vec![left, right, sum],
            ConstraintEdge::Clasp { knot, .. }
            | ConstraintEdge::LspaceGenus { knot, .. }
            | ConstraintEdge::Torus { knot, .. }
            | ConstraintEdge::Seed { knot, .. }
            | ConstraintEdge::SliceGenusHypothesis { knot, .. } => vec![knot],
        }
    }
}

impl fmt::Display for ConstraintEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintEdge::CrossingChange { from, to, pos, neg } => {
                write!(f, "crossing_change({pos}+, {neg}-) {from} -> {to}")
            }
            ConstraintEdge::Mirror { a, b } => write!(f, "mirror {a} <-> {b}"),
            ConstraintEdge::ConnectedSum { left, right, sum } => {
                write!(f, "connected_sum {left} # {right} = {sum}")
            }
            ConstraintEdge::Clasp { knot, c_plus, c_minus } => {
                write!(f, "clasp(c+ = {c_plus}, c- = {c_minus}) on {knot}")
            }
            ConstraintEdge::LspaceGenus { knot, genus } => {
                write!(f, "lspace_genus({genus}) on {knot}")
            }
            ConstraintEdge::Torus { knot, p, q } => write!(f, "torus({p},{q}) on {knot}"),
            ConstraintEdge::Seed { knot, value } => write!(f, "seed {knot} = {value}"),
            ConstraintEdge::SliceGenusHypothesis { knot, g4 } => {
                write!(f, "slice_genus_hypothesis({g4}) on {knot} [speculative]")
            }
        }
    }
}

/// Per-node data that feeds the r2 lower bound: r2 >= r0 always, and
/// r2 >= r0 + |M - nu#| once M is pinned.
#[derive(Clone, Default, Debug)]
pub struct NodeAux {
    pub r0: Option<u64>,
    pub nu_sharp: Option<i64>,
}

/// A finite constraint graph.
#[derive(Default)]
pub struct Graph {
    nodes: BTreeMap<String, NodeAux>,
    edges: Vec<ConstraintEdge>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn add_node(&mut self, name: &str, aux: NodeAux) {
        self.nodes.insert(name.to_string(), aux);
    }

    pub fn add_edge(&mut self, edge: ConstraintEdge) {
        for n in edge.nodes() {
            self.nodes.entry(n.to_string()).or_default();
        }
        self.edges.push(edge);
    }

    pub fn edges(&self) -> &[ConstraintEdge] {
        &self.edges
    }

    pub fn node_names(&self) -> impl Iterator<Item = &str> {
        self.nodes.keys().map(String::as_str)
    }

    /// Builds the graph from a table's constraints array, pulling r0/nu#
    /// from any record or family instance the table can resolve.
    pub fn from_table(table: &KnotTable) -> Graph {
        let mut g = Graph::new();
        for e in table.constraints() {
            g.add_edge(e.clone());
        }
        let names: Vec<String> = g.nodes.keys().cloned().collect();
        for name in names {
            if let Ok(rec) = table.get(&name) {
                g.nodes.insert(name, NodeAux { r0: rec.r0, nu_sharp: rec.nu_sharp });
            }
        }
        g
    }

    /// The crossing-change ladder for the twist-knot family K_1 .. K_{2m}:
    /// K_1 and K_2 are seeded, every knot unknots by one crossing change
    /// (negative for odd index, positive for even), and K_{n+2} becomes K_n
    /// by one negative crossing change.
    pub fn twist_chain(max_m: usize) -> Graph {
        let mut g = Graph::new();
        g.add_edge(ConstraintEdge::Seed { knot: "unknot".into(), value: 0 });
        g.add_edge(ConstraintEdge::Seed { knot: "K_1".into(), value: -4 });
        g.add_edge(ConstraintEdge::Seed { knot: "K_2".into(), value: 0 });
        for n in 1..=(2 * max_m as i64) {
            let (pos, neg) = if n % 2 == 1 { (0, 1) } else { (1, 0) };
            g.add_edge(ConstraintEdge::CrossingChange {
                from: format!("K_{n}"),
                to: "unknot".into(),
                pos,
                neg,
            });
            if n + 2 <= 2 * max_m as i64 {
                g.add_edge(ConstraintEdge::CrossingChange {
                    from: format!("K_{}", n + 2),
                    to: format!("K_{n}"),
                    pos: 0,
                    neg: 1,
                });
            }
        }
        g
    }
}

/// The tightest assignment reachable by repeated edge application.
#[derive(Debug)]
pub struct Fixpoint {
    pub states: BTreeMap<String, BoundState>,
    pub rounds: usize,
}

impl Fixpoint {
    pub fn state(&self, name: &str) -> Option<&BoundState> {
        self.states.get(name)
    }

    pub fn pinned(&self, name: &str) -> Option<i64> {
        self.states.get(name).and_then(BoundState::pinned)
    }

    pub fn render(&self) -> String {
        self.states
            .iter()
            .map(|(name, st)| format!("{name}: {}", st.describe()))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Clone, Default)]
struct Trail {
    lo: Vec<usize>,
    hi: Vec<usize>,
    excl: Vec<usize>,
}

impl Trail {
    fn all(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &e in self.lo.iter().chain(&self.hi).chain(&self.excl) {
            if seen.insert(e) {
                out.push(e);
            }
        }
        out
    }
}

struct Engine<'g> {
    graph: &'g Graph,
    states: BTreeMap<String, BoundState>,
    trails: BTreeMap<String, Trail>,
}

impl<'g> Engine<'g> {
    fn new(graph: &'g Graph) -> Self {
        let states = graph.nodes.keys().map(|k| (k.clone(), BoundState::top())).collect();
        let trails = graph.nodes.keys().map(|k| (k.clone(), Trail::default())).collect();
        Engine { graph, states, trails }
    }

    fn contradiction(&self, name: &str) -> Error {
        let trail = &self.trails[name];
        let steps: Vec<String> =
            trail.all().iter().map(|&ei| format!("[{ei}] {}", self.graph.edges[ei])).collect();
        Error::Contradiction(format!(
            "no feasible M for '{name}' after {}",
            if steps.is_empty() { "initialization".to_string() } else { steps.join(", ") }
        ))
    }

    /// Meets `name`'s interval with [lo, hi]; the trail explains where the
    /// tightening came from.
    fn meet(
        &mut self,
        name: &str,
        lo: Option<i64>,
        hi: Option<i64>,
        ei: usize,
        lo_src: Option<&Trail>,
        hi_src: Option<&Trail>,
    ) -> Result<bool> {
        let st = self.states.get_mut(name).expect("node registered");
        let before = st.clone();
        let changed = st.meet_interval(lo, hi);
        if changed {
            debug_assert!(
                before.m_lo.is_none_or(|b| st.m_lo.is_some_and(|n| n >= b))
                    && before.m_hi.is_none_or(|b| st.m_hi.is_some_and(|n| n <= b)),
                "edge application must shrink the interval"
            );
            let trail = self.trails.get_mut(name).unwrap();
            if st.m_lo != before.m_lo {
                trail.lo = lo_src.map(|t| t.lo.clone()).unwrap_or_default();
                trail.lo.push(ei);
            }
            if st.m_hi != before.m_hi {
                trail.hi = hi_src.map(|t| t.hi.clone()).unwrap_or_default();
                trail.hi.push(ei);
            }
            if self.states[name].is_empty() {
                return Err(self.contradiction(name));
            }
        }
        Ok(changed)
    }

    fn exclude(&mut self, name: &str, values: Vec<u64>, ei: usize) -> Result<bool> {
        let st = self.states.get_mut(name).expect("node registered");
        let changed = st.exclude_abs(values);
        if changed {
            self.trails.get_mut(name).unwrap().excl.push(ei);
            if self.states[name].is_empty() {
                return Err(self.contradiction(name));
            }
        }
        Ok(changed)
    }

    fn apply(&mut self, ei: usize) -> Result<bool> {
        let edge = self.graph.edges[ei].clone();
        let mut changed = false;
        match &edge {
            ConstraintEdge::CrossingChange { from, to, pos, neg } => {
                let (p4, n4) = (4 * *pos as i64, 4 * *neg as i64);
                let f = self.states[from].clone();
                let t = self.states[to].clone();
                let ft = self.trails[from].clone();
                let tt = self.trails[to].clone();
                // M(from) in M(to) + [-4n, 4p]
                changed |= self.meet(
                    from,
                    t.m_lo.map(|v| v - n4),
                    t.m_hi.map(|v| v + p4),
                    ei,
                    Some(&tt),
                    Some(&tt),
                )?;
                // M(to) in M(from) + [-4p, 4n]
                changed |= self.meet(
                    to,
                    f.m_lo.map(|v| v - p4),
                    f.m_hi.map(|v| v + n4),
                    ei,
                    Some(&ft),
                    Some(&ft),
                )?;
            }
            ConstraintEdge::Mirror { a, b } => {
                for (x, y) in [(a, b), (b, a)] {
                    let sy = self.states[y].clone();
                    let ty = self.trails[y].clone();
                    changed |= self.meet(
                        x,
                        sy.m_hi.map(|v| -v),
                        sy.m_lo.map(|v| -v),
                        ei,
                        Some(&ty),
                        Some(&ty),
                    )?;
                    let excl: Vec<u64> = sy.abs_m_exclusions.iter().copied().collect();
                    changed |= self.exclude(x, excl, ei)?;
                }
            }
            ConstraintEdge::ConnectedSum { left, right, sum } => {
                let l = self.states[left].clone();
                let r = self.states[right].clone();
                let s = self.states[sum].clone();
                let (lt, rt, st) =
                    (self.trails[left].clone(), self.trails[right].clone(), self.trails[sum].clone());
                let add = |x: Option<i64>, y: Option<i64>| Some(x? + y?);
                let sub = |x: Option<i64>, y: Option<i64>| Some(x? - y?);
                changed |= self.meet(sum, add(l.m_lo, r.m_lo), add(l.m_hi, r.m_hi), ei, Some(&lt), Some(&rt))?;
                changed |= self.meet(left, sub(s.m_lo, r.m_hi), sub(s.m_hi, r.m_lo), ei, Some(&st), Some(&st))?;
                changed |= self.meet(right, sub(s.m_lo, l.m_hi), sub(s.m_hi, l.m_lo), ei, Some(&st), Some(&st))?;
            }
            ConstraintEdge::Clasp { knot, c_plus, c_minus } => {
                changed |= self.meet(
                    knot,
                    Some(-4 * *c_plus as i64),
                    Some(4 * *c_minus as i64),
                    ei,
                    None,
                    None,
                )?;
            }
            ConstraintEdge::LspaceGenus { knot, genus } => {
                let bound = genus_bound(*genus);
                changed |= self.exclude(knot, (0..bound).step_by(4).collect(), ei)?;
            }
            ConstraintEdge::Torus { knot, p, q } => {
                let (p, q) = (*p as i64, *q as i64);
                let hi = p * q - 2;
                let lo_abs = (p * q - p - q) as u64;
                changed |= self.meet(knot, Some(-hi), Some(hi), ei, None, None)?;
                changed |= self.exclude(knot, (0..lo_abs).step_by(4).collect(), ei)?;
            }
            ConstraintEdge::Seed { knot, value } => {
                if value % 4 != 0 {
                    return Err(Error::Domain(format!(
                        "seed {value} for '{knot}' is not a multiple of 4"
                    )));
                }
                changed |= self.meet(knot, Some(*value), Some(*value), ei, None, None)?;
            }
            ConstraintEdge::SliceGenusHypothesis { knot, g4 } => {
                let b = 4 * *g4 as i64;
                changed |= self.meet(knot, Some(-b), Some(b), ei, None, None)?;
            }
        }
        Ok(changed)
    }

    /// r2 is bounded by r0, by the pinned-M gap r0 + |M - nu#|, and by the
    /// smallest feasible |M|.
    fn finalize_r2(&mut self) {
        for (name, st) in &mut self.states {
            let aux = &self.graph.nodes[name];
            let mut r2 = st.min_abs_m().unwrap_or(0);
            if let Some(r0) = aux.r0 {
                r2 = r2.max(r0);
                if let (Some(m), Some(nu)) = (st.pinned(), aux.nu_sharp) {
                    r2 = r2.max(r0 + (m - nu).unsigned_abs());
                }
            }
            st.r2_lo = st.r2_lo.max(r2);
        }
    }
}

/// Runs chaotic iteration to the greatest fixpoint in deterministic edge
/// order.
pub fn propagate(graph: &Graph) -> Result<Fixpoint> {
    let order: Vec<usize> = (0..graph.edges.len()).collect();
    propagate_with_order(graph, &order)
}

/// Same fixpoint, custom edge order; used to check confluence.
pub fn propagate_with_order(graph: &Graph, order: &[usize]) -> Result<Fixpoint> {
    let mut engine = Engine::new(graph);
    let cap = 64 + 4 * (graph.nodes.len() + graph.edges.len());
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > cap {
            return Err(Error::Internal(format!(
                "propagation did not stabilize within {cap} rounds; the graph forces unbounded descent"
            )));
        }
        let mut changed = false;
        for &ei in order {
            changed |= engine.apply(ei)?;
        }
        if !changed {
            break;
        }
    }
    engine.finalize_r2();
    Ok(Fixpoint { states: engine.states, rounds })
}

/// Applies a single edge to a pair of states, per the edge relation. Sum
/// edges relate three knots; use [`apply_sum_edge`] or [`propagate`] for
/// those.
pub fn apply_edge(
    state_a: &BoundState,
    state_b: &BoundState,
    edge: &ConstraintEdge,
) -> Result<(BoundState, BoundState)> {
    let mut g = Graph::new();
    let mut e = edge.clone();
    // Rewrite endpoints onto two scratch nodes so callers only provide states.
    match &mut e {
        ConstraintEdge::CrossingChange { from, to, .. } => {
            *from = "a".into();
            *to = "b".into();
        }
        ConstraintEdge::Mirror { a, b } => {
            *a = "a".into();
            *b = "b".into();
        }
        ConstraintEdge::ConnectedSum { .. } => {
            return Err(Error::ShapeMismatch(
                "connected sums relate three knots; use apply_sum_edge".into(),
            ));
        }
        ConstraintEdge::Clasp { knot, .. }
        | ConstraintEdge::LspaceGenus { knot, .. }
        | ConstraintEdge::Torus { knot, .. }
        | ConstraintEdge::Seed { knot, .. }
        | ConstraintEdge::SliceGenusHypothesis { knot, .. } => *knot = "a".into(),
    }
    g.add_edge(e);
    g.nodes.entry("a".into()).or_default();
    g.nodes.entry("b".into()).or_default();
    let mut engine = Engine::new(&g);
    engine.states.insert("a".into(), state_a.clone());
    engine.states.insert("b".into(), state_b.clone());
    engine.apply(0)?;
    engine.finalize_r2();
    let b = engine.states.remove("b").unwrap();
    let a = engine.states.remove("a").unwrap();
    Ok((a, b))
}

/// Single application of a connected-sum edge to (left, right, sum).
pub fn apply_sum_edge(
    left: &BoundState,
    right: &BoundState,
    sum: &BoundState,
) -> Result<(BoundState, BoundState, BoundState)> {
    let mut g = Graph::new();
    g.add_edge(ConstraintEdge::ConnectedSum { left: "l".into(), right: "r".into(), sum: "s".into() });
    let mut engine = Engine::new(&g);
    engine.states.insert("l".into(), left.clone());
    engine.states.insert("r".into(), right.clone());
    engine.states.insert("s".into(), sum.clone());
    engine.apply(0)?;
    engine.finalize_r2();
    Ok((
        engine.states.remove("l").unwrap(),
        engine.states.remove("r").unwrap(),
        engine.states.remove("s").unwrap(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_edge_from_seeded_neighbor() {
        // K_3 -> K_1 by one negative crossing change, M(K_1) = -4:
        // M(K_3) lands in [-8, -4]; the unknotting edge then pins -4.
        let k1 = BoundState::pinned_value(-4).unwrap();
        let k3 = BoundState::top();
        let e = ConstraintEdge::CrossingChange {
            from: "K_3".into(),
            to: "K_1".into(),
            pos: 0,
            neg: 1,
        };
        let (k3, k1b) = apply_edge(&k3, &k1, &e).unwrap();
        assert_eq!((k3.m_lo(), k3.m_hi()), (Some(-8), Some(-4)));
        assert_eq!(k1b.pinned(), Some(-4));

        let unknot = BoundState::pinned_value(0).unwrap();
        let e = ConstraintEdge::CrossingChange {
            from: "K_3".into(),
            to: "unknot".into(),
            pos: 0,
            neg: 1,
        };
        let (k3, _) = apply_edge(&k3, &unknot, &e).unwrap();
        assert_eq!(k3.pinned(), Some(-4));
    }

    #[test]
    fn clasp_edge_bounds() {
        let e = ConstraintEdge::Clasp { knot: "k".into(), c_plus: 1, c_minus: 0 };
        let (st, _) = apply_edge(&BoundState::top(), &BoundState::top(), &e).unwrap();
        assert_eq!((st.m_lo(), st.m_hi()), (Some(-4), Some(0)));
    }

    #[test]
    fn torus_edge_gives_lattice_window_on_abs_m() {
        let e = ConstraintEdge::Torus { knot: "t".into(), p: 3, q: 5 };
        let (st, _) = apply_edge(&BoundState::top(), &BoundState::top(), &e).unwrap();
        // |M| in [7, 13] meets 4Z at {8, 12}
        assert_eq!((st.m_lo(), st.m_hi()), (Some(-12), Some(12)));
        assert!(st.abs_m_exclusions().contains(&0) && st.abs_m_exclusions().contains(&4));
        assert_eq!(st.min_abs_m(), Some(8));
        assert_eq!(st.r2_lo(), 8);
    }

    #[test]
    fn mirror_edge_negates() {
        let a = BoundState::pinned_value(-4).unwrap();
        let e = ConstraintEdge::Mirror { a: "a".into(), b: "b".into() };
        let (_, b) = apply_edge(&a, &BoundState::top(), &e).unwrap();
        assert_eq!(b.pinned(), Some(4));
    }

    #[test]
    fn idempotent_on_tight_states() {
        let st = BoundState::pinned_value(0).unwrap();
        let e = ConstraintEdge::Clasp { knot: "unknot".into(), c_plus: 0, c_minus: 0 };
        let (a, _) = apply_edge(&st, &BoundState::top(), &e).unwrap();
        assert_eq!(a.pinned(), Some(0));
        let (again, _) = apply_edge(&a, &BoundState::top(), &e).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn inconsistent_seeds_contradict() {
        let mut g = Graph::new();
        g.add_edge(ConstraintEdge::Seed { knot: "k".into(), value: 0 });
        g.add_edge(ConstraintEdge::Seed { knot: "k".into(), value: -4 });
        let err = propagate(&g).unwrap_err();
        assert!(matches!(err, Error::Contradiction(_)));
        let msg = err.to_string();
        assert!(msg.contains("seed"), "witness names the seeds: {msg}");
    }

    #[test]
    fn twist_chain_pins_the_family() {
        let g = Graph::twist_chain(6);
        let fp = propagate(&g).unwrap();
        for m in 1..=6i64 {
            assert_eq!(fp.pinned(&format!("K_{}", 2 * m - 1)), Some(-4), "odd index {m}");
            assert_eq!(fp.pinned(&format!("K_{}", 2 * m)), Some(0), "even index {m}");
        }
    }

    #[test]
    fn slice_genus_hypothesis_is_opt_in_and_labeled() {
        let e = ConstraintEdge::SliceGenusHypothesis { knot: "k".into(), g4: 1 };
        assert!(e.to_string().contains("[speculative]"));
        let (st, _) = apply_edge(&BoundState::top(), &BoundState::top(), &e).unwrap();
        assert_eq!((st.m_lo(), st.m_hi()), (Some(-4), Some(4)));
        // nothing in the bundled constraints uses it
        assert!(crate::knotdb::KnotTable::bundled()
            .constraints()
            .iter()
            .all(|c| !matches!(c, ConstraintEdge::SliceGenusHypothesis { .. })));
    }

    #[test]
    fn sum_edge_propagates_all_directions() {
        let l = BoundState::pinned_value(-4).unwrap();
        let s = BoundState::pinned_value(-8).unwrap();
        let (_, r, _) = apply_sum_edge(&l, &BoundState::top(), &s).unwrap();
        assert_eq!(r.pinned(), Some(-4));
    }
}
