//! Trail construction: decisions under a policy, dependency-aware unit
//! propagation for clauses and cubes, conflict and satisfaction detection,
//! and antecedent tracking.
//!
//! Propagation scans the matrix by index, then learnt clauses oldest-first,
//! then learnt cubes oldest-first; the first unit or conflict found wins and
//! the scan restarts. Merged occurrences in learnt antecedents are treated as
//! permanently unassigned: they stay in the residual and only vanish through
//! reduction.

use std::fmt;

use thiserror::Error;

use crate::deps::{reduce_clause, reduce_cube, DepRelation};
use crate::qbf::{
    trail_status, Assignment, Constraint, ConstraintKind, Literal, Occ, Restriction, Variable,
    PCNF,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrailError {
    #[error("decision on {var} violates the policy (unassigned supporter {supporter})")]
    PolicyViolation { var: Variable, supporter: Variable },
    #[error("decision on {0} but the variable is already assigned")]
    AlreadyAssigned(Variable),
    #[error("trail already has an outcome")]
    AlreadyFinished,
}

/// Decision policy: level order, dependency order with its own relation
/// (which may differ from the learning scheme), or unrestricted.
#[derive(Clone, Debug)]
pub enum DecisionPolicy {
    LevOrd,
    DepOrd(DepRelation),
    AnyOrd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CubePolicy {
    NoCube,
    /// Cube propagation and reduction with the trivial scheme; learning uses
    /// long-distance term resolution.
    CubeLd,
    /// Cube propagation, reduction and learning with the clause scheme's
    /// relation, plain term resolution only.
    CubeDep,
}

/// The evolving formula: base PCNF plus learnt clauses and cubes, with the
/// relations used for clause- and cube-side reductions.
#[derive(Clone, Debug)]
pub struct FormulaState {
    pub base: PCNF,
    pub learnt_clauses: Vec<Constraint>,
    pub learnt_cubes: Vec<Constraint>,
    pub clause_dep: DepRelation,
    pub cube_policy: CubePolicy,
    cube_dep: Option<DepRelation>,
}

/// Reference into the constraint database; learnt constraints are indexed in
/// learn order within their kind.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConstraintRef {
    Matrix(usize),
    LearntClause(usize),
    LearntCube(usize),
}

impl FormulaState {
    pub fn new(
        base: PCNF,
        clause_dep: DepRelation,
        cube_policy: CubePolicy,
        cube_dep: Option<DepRelation>,
    ) -> Self {
        debug_assert_eq!(cube_policy == CubePolicy::NoCube, cube_dep.is_none());
        FormulaState {
            base,
            learnt_clauses: Vec::new(),
            learnt_cubes: Vec::new(),
            clause_dep,
            cube_policy,
            cube_dep,
        }
    }

    pub fn cube_dep(&self) -> Option<&DepRelation> {
        self.cube_dep.as_ref()
    }

    pub fn constraint(&self, r: ConstraintRef) -> &Constraint {
        match r {
            ConstraintRef::Matrix(i) => &self.base.matrix[i],
            ConstraintRef::LearntClause(i) => &self.learnt_clauses[i],
            ConstraintRef::LearntCube(i) => &self.learnt_cubes[i],
        }
    }

    /// Flat index for the trail text form: matrix, then learnt clauses, then
    /// learnt cubes.
    pub fn ref_index(&self, r: ConstraintRef) -> usize {
        let m = self.base.matrix.len();
        match r {
            ConstraintRef::Matrix(i) => i,
            ConstraintRef::LearntClause(i) => m + i,
            ConstraintRef::LearntCube(i) => m + self.learnt_clauses.len() + i,
        }
    }

    pub fn ref_from_index(&self, idx: usize) -> Option<ConstraintRef> {
        let m = self.base.matrix.len();
        let lc = self.learnt_clauses.len();
        if idx < m {
            Some(ConstraintRef::Matrix(idx))
        } else if idx < m + lc {
            Some(ConstraintRef::LearntClause(idx - m))
        } else if idx < m + lc + self.learnt_cubes.len() {
            Some(ConstraintRef::LearntCube(idx - m - lc))
        } else {
            None
        }
    }

    pub fn learn(&mut self, c: Constraint) {
        match c.kind() {
            ConstraintKind::Clause => self.learnt_clauses.push(c),
            ConstraintKind::Cube => {
                debug_assert_ne!(self.cube_policy, CubePolicy::NoCube);
                self.learnt_cubes.push(c)
            }
        }
    }

    pub fn knows(&self, c: &Constraint) -> bool {
        match c.kind() {
            ConstraintKind::Clause => {
                self.base.matrix.contains(c) || self.learnt_clauses.contains(c)
            }
            ConstraintKind::Cube => self.learnt_cubes.contains(c),
        }
    }

    fn clause_refs(&self) -> impl Iterator<Item = ConstraintRef> {
        let m = self.base.matrix.len();
        let lc = self.learnt_clauses.len();
        (0..m)
            .map(ConstraintRef::Matrix)
            .chain((0..lc).map(ConstraintRef::LearntClause))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TrailOutcome {
    ClauseConflict,
    CubeConflict,
    TotalSatisfaction,
    Incomplete,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TrailEntry {
    Decision(Literal),
    Propagated { lit: Literal, ante: ConstraintRef },
    /// The terminal pseudo-entry: the empty clause or satisfied cube, with
    /// its antecedent.
    Conflict { ante: ConstraintRef },
}

impl TrailEntry {
    pub fn lit(&self) -> Option<Literal> {
        match self {
            TrailEntry::Decision(l) => Some(*l),
            TrailEntry::Propagated { lit, .. } => Some(*lit),
            TrailEntry::Conflict { .. } => None,
        }
    }

    pub fn is_decision(&self) -> bool {
        matches!(self, TrailEntry::Decision(_))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trail {
    pub entries: Vec<TrailEntry>,
    pub outcome: TrailOutcome,
}

impl Trail {
    pub fn lits(&self) -> impl Iterator<Item = Literal> + '_ {
        self.entries.iter().filter_map(|e| e.lit())
    }

    pub fn num_decisions(&self) -> usize {
        self.entries.iter().filter(|e| e.is_decision()).count()
    }

    pub fn assignment(&self, num_vars: usize) -> Assignment {
        let mut a = Assignment::new(num_vars);
        for l in self.lits() {
            a.assign(l).expect("trail assigns a variable twice");
        }
        a
    }

    /// Text form: `; `-separated decision groups, decisions marked `d`,
    /// propagations `lit@ante`, the terminal `0@ante` (clause conflict) or
    /// `T@ante` (cube conflict).
    pub fn to_text(&self, state: &FormulaState) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut group: Vec<String> = Vec::new();
        for e in &self.entries {
            match e {
                TrailEntry::Decision(l) => {
                    if !group.is_empty() {
                        parts.push(group.join(" : "));
                        group = Vec::new();
                    }
                    group.push(format!("d {}", l.to_dimacs()));
                }
                TrailEntry::Propagated { lit, ante } => {
                    group.push(format!("{}@{}", lit.to_dimacs(), state.ref_index(*ante)));
                }
                TrailEntry::Conflict { ante } => {
                    let tag = if self.outcome == TrailOutcome::CubeConflict { "T" } else { "0" };
                    group.push(format!("{}@{}", tag, state.ref_index(*ante)));
                }
            }
        }
        if !group.is_empty() {
            parts.push(group.join(" : "));
        }
        parts.join(" ; ")
    }

    pub fn parse_text(
        text: &str,
        state: &FormulaState,
        outcome: TrailOutcome,
    ) -> Result<Trail, String> {
        let mut entries = Vec::new();
        for group in text.split(';') {
            for tok in group.split(':') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                if let Some(rest) = tok.strip_prefix("d ") {
                    let n: i64 = rest.trim().parse().map_err(|_| format!("bad decision `{tok}`"))?;
                    entries.push(TrailEntry::Decision(
                        Literal::from_dimacs(n).ok_or("decision literal 0")?,
                    ));
                } else if let Some((lhs, rhs)) = tok.split_once('@') {
                    let idx: usize = rhs.trim().parse().map_err(|_| format!("bad index `{tok}`"))?;
                    let ante = state
                        .ref_from_index(idx)
                        .ok_or_else(|| format!("antecedent index {idx} out of range"))?;
                    match lhs.trim() {
                        "0" | "T" => entries.push(TrailEntry::Conflict { ante }),
                        l => {
                            let n: i64 = l.parse().map_err(|_| format!("bad literal `{tok}`"))?;
                            entries.push(TrailEntry::Propagated {
                                lit: Literal::from_dimacs(n).ok_or("propagated literal 0")?,
                                ante,
                            });
                        }
                    }
                } else {
                    return Err(format!("bad trail token `{tok}`"));
                }
            }
        }
        Ok(Trail { entries, outcome })
    }
}

impl fmt::Display for TrailOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrailOutcome::ClauseConflict => "clause-conflict",
            TrailOutcome::CubeConflict => "cube-conflict",
            TrailOutcome::TotalSatisfaction => "satisfaction",
            TrailOutcome::Incomplete => "incomplete",
        };
        f.write_str(s)
    }
}

/// Variables on which a decision is currently permitted.
pub fn decidable_vars(
    s: &FormulaState,
    a: &Assignment,
    pol: &DecisionPolicy,
) -> Vec<Variable> {
    let p = &s.base.prefix;
    match pol {
        DecisionPolicy::LevOrd => {
            let mut block = None;
            for v in p.vars() {
                if !a.is_assigned(v) {
                    block = Some(p.block(v));
                    break;
                }
            }
            match block {
                None => Vec::new(),
                Some(b) => p
                    .vars()
                    .filter(|&v| p.block(v) == b && !a.is_assigned(v))
                    .collect(),
            }
        }
        DecisionPolicy::DepOrd(d) => p
            .vars()
            .filter(|&x| {
                !a.is_assigned(x)
                    && p.vars().all(|y| !d.contains(y, x) || a.is_assigned(y))
            })
            .collect(),
        DecisionPolicy::AnyOrd => p.vars().filter(|&v| !a.is_assigned(v)).collect(),
    }
}

/// One propagation event found by a scan.
enum Event {
    Unit { lit: Literal, ante: ConstraintRef },
    EmptyClause { ante: ConstraintRef },
    SatisfiedCube { ante: ConstraintRef },
}

/// Incrementally builds one trail over a fixed formula state.
pub struct TrailBuilder<'a> {
    state: &'a FormulaState,
    pub assignment: Assignment,
    entries: Vec<TrailEntry>,
    outcome: Option<TrailOutcome>,
}

impl<'a> TrailBuilder<'a> {
    pub fn new(state: &'a FormulaState) -> Self {
        TrailBuilder {
            state,
            assignment: Assignment::new(state.base.num_vars()),
            entries: Vec::new(),
            outcome: None,
        }
    }

    fn scan(&self) -> Option<Event> {
        let s = self.state;
        let prefix = &s.base.prefix;
        for r in s.clause_refs() {
            let c = s.constraint(r);
            match trail_status(c, &self.assignment) {
                Restriction::Satisfied => {}
                Restriction::Falsified => return Some(Event::EmptyClause { ante: r }),
                Restriction::Residual(res) => {
                    let red = reduce_clause(&res, &s.clause_dep, prefix);
                    if red.is_empty() {
                        return Some(Event::EmptyClause { ante: r });
                    }
                    if red.width() == 1 {
                        let (v, occ) = red.occs()[0];
                        // a post-reduction unit is never merged and never
                        // universal (it would have been reduced)
                        if occ != Occ::Both && prefix.is_existential(v) {
                            return Some(Event::Unit {
                                lit: Literal::new(v, occ == Occ::Pos),
                                ante: r,
                            });
                        }
                    }
                }
            }
        }
        if s.cube_policy != CubePolicy::NoCube {
            let cube_dep = s.cube_dep().expect("cube policy carries a relation");
            for (i, c) in s.learnt_cubes.iter().enumerate() {
                let r = ConstraintRef::LearntCube(i);
                match trail_status(c, &self.assignment) {
                    Restriction::Satisfied => return Some(Event::SatisfiedCube { ante: r }),
                    Restriction::Falsified => {}
                    Restriction::Residual(res) => {
                        let red = reduce_cube(&res, cube_dep, prefix);
                        if red.width() == 1 {
                            let (v, occ) = red.occs()[0];
                            if occ != Occ::Both && prefix.is_universal(v) {
                                // propagate the falsifying value
                                return Some(Event::Unit {
                                    lit: Literal::new(v, occ != Occ::Pos),
                                    ante: r,
                                });
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Runs propagation to fixpoint; records a conflict outcome if one is hit.
    pub fn propagate(&mut self) {
        debug_assert!(self.outcome.is_none());
        while let Some(ev) = self.scan() {
            match ev {
                Event::Unit { lit, ante } => {
                    self.assignment.assign(lit).expect("unit literal already assigned");
                    self.entries.push(TrailEntry::Propagated { lit, ante });
                }
                Event::EmptyClause { ante } => {
                    self.entries.push(TrailEntry::Conflict { ante });
                    self.outcome = Some(TrailOutcome::ClauseConflict);
                    return;
                }
                Event::SatisfiedCube { ante } => {
                    self.entries.push(TrailEntry::Conflict { ante });
                    self.outcome = Some(TrailOutcome::CubeConflict);
                    return;
                }
            }
        }
    }

    pub fn decide(&mut self, lit: Literal, pol: &DecisionPolicy) -> Result<(), TrailError> {
        if self.outcome.is_some() {
            return Err(TrailError::AlreadyFinished);
        }
        if self.assignment.is_assigned(lit.var()) {
            return Err(TrailError::AlreadyAssigned(lit.var()));
        }
        let decidable = decidable_vars(self.state, &self.assignment, pol);
        if !decidable.contains(&lit.var()) {
            let supporter = self.blocking_supporter(lit.var(), pol);
            return Err(TrailError::PolicyViolation { var: lit.var(), supporter });
        }
        self.assignment.assign(lit).expect("decision on assigned variable");
        self.entries.push(TrailEntry::Decision(lit));
        Ok(())
    }

    fn blocking_supporter(&self, x: Variable, pol: &DecisionPolicy) -> Variable {
        let p = &self.state.base.prefix;
        match pol {
            DecisionPolicy::DepOrd(d) => p
                .vars()
                .find(|&y| d.contains(y, x) && !self.assignment.is_assigned(y))
                .unwrap_or(x),
            _ => p
                .vars()
                .find(|&y| p.position(y) < p.position(x) && !self.assignment.is_assigned(y))
                .unwrap_or(x),
        }
    }

    pub fn outcome(&self) -> Option<TrailOutcome> {
        self.outcome
    }

    /// Declares total satisfaction: all variables assigned, every clause
    /// satisfied, no learnt cube satisfied (the scan would have flagged one).
    fn finish_satisfied(&mut self) {
        debug_assert!(self.assignment.is_total());
        debug_assert!(self
            .state
            .clause_refs()
            .all(|r| trail_status(self.state.constraint(r), &self.assignment)
                == Restriction::Satisfied));
        self.outcome = Some(TrailOutcome::TotalSatisfaction);
    }

    pub fn into_trail(self, outcome: TrailOutcome) -> Trail {
        Trail { entries: self.entries, outcome }
    }
}

/// A source of decisions; `None` means the source is exhausted.
pub trait DecisionSource {
    fn next_decision(
        &mut self,
        state: &FormulaState,
        a: &Assignment,
        decidable: &[Variable],
    ) -> Option<Literal>;
}

/// Fixed decision list for scripted replay.
pub struct ScriptedDecisions {
    lits: Vec<Literal>,
    at: usize,
}

impl ScriptedDecisions {
    pub fn new(lits: Vec<Literal>) -> Self {
        ScriptedDecisions { lits, at: 0 }
    }

    pub fn fully_consumed(&self) -> bool {
        self.at == self.lits.len()
    }
}

impl DecisionSource for ScriptedDecisions {
    fn next_decision(
        &mut self,
        _state: &FormulaState,
        _a: &Assignment,
        _decidable: &[Variable],
    ) -> Option<Literal> {
        let l = self.lits.get(self.at).copied();
        self.at += 1.min(self.lits.len() - self.at);
        l
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ValueHeuristic {
    FalseFirst,
    TrueFirst,
}

/// Default heuristic: decide the decidable variable of smallest prefix
/// position with the configured value.
pub struct SmallestPositionChooser {
    pub value: ValueHeuristic,
}

impl DecisionSource for SmallestPositionChooser {
    fn next_decision(
        &mut self,
        state: &FormulaState,
        _a: &Assignment,
        decidable: &[Variable],
    ) -> Option<Literal> {
        let p = &state.base.prefix;
        let v = decidable.iter().copied().min_by_key(|&v| p.position(v))?;
        Some(Literal::new(v, self.value == ValueHeuristic::TrueFirst))
    }
}

/// Alternates propagate-to-fixpoint and single decisions until an outcome.
/// Natural by construction: a decision is only taken at a propagation
/// fixpoint.
pub fn run_trail(
    state: &FormulaState,
    pol: &DecisionPolicy,
    chooser: &mut dyn DecisionSource,
) -> Result<Trail, TrailError> {
    let mut b = TrailBuilder::new(state);
    loop {
        b.propagate();
        if let Some(out) = b.outcome() {
            return Ok(b.into_trail(out));
        }
        if b.assignment.is_total() {
            b.finish_satisfied();
            return Ok(b.into_trail(TrailOutcome::TotalSatisfaction));
        }
        let decidable = decidable_vars(state, &b.assignment, pol);
        match chooser.next_decision(state, &b.assignment, &decidable) {
            None => return Ok(b.into_trail(TrailOutcome::Incomplete)),
            Some(lit) => b.decide(lit, pol)?,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deps::compute_dtrv;
    use crate::qbf::parse_qdimacs;

    fn lit(n: i64) -> Literal {
        Literal::from_dimacs(n).unwrap()
    }

    fn v(n: u32) -> Variable {
        Variable::new(n)
    }

    fn state_of(text: &str) -> FormulaState {
        let f = parse_qdimacs(text).unwrap();
        let d = compute_dtrv(&f);
        FormulaState::new(f, d, CubePolicy::NoCube, None)
    }

    #[test]
    fn lev_ord_is_leftmost_incomplete_block() {
        let s = state_of("p cnf 4 0\ne 1 2 0\na 3 0\ne 4 0\n");
        let mut a = Assignment::new(4);
        assert_eq!(decidable_vars(&s, &a, &DecisionPolicy::LevOrd), vec![v(1), v(2)]);
        a.assign(lit(1)).unwrap();
        assert_eq!(decidable_vars(&s, &a, &DecisionPolicy::LevOrd), vec![v(2)]);
        a.assign(lit(2)).unwrap();
        assert_eq!(decidable_vars(&s, &a, &DecisionPolicy::LevOrd), vec![v(3)]);
    }

    #[test]
    fn dep_ord_waits_for_supporters() {
        // ∀u1 ∃x2 with clause {u1, x2}: (u1, x2) is a std pair
        let f = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
        let d = crate::deps::compute_dstd(&f);
        let s = FormulaState::new(f, d.clone(), CubePolicy::NoCube, None);
        let a = Assignment::new(2);
        assert_eq!(
            decidable_vars(&s, &a, &DecisionPolicy::DepOrd(d.clone())),
            vec![v(1)]
        );
        let mut b = TrailBuilder::new(&s);
        let err = b.decide(lit(2), &DecisionPolicy::DepOrd(d)).unwrap_err();
        assert_eq!(err, TrailError::PolicyViolation { var: v(2), supporter: v(1) });
    }

    #[test]
    fn propagation_reduces_then_units() {
        // ∃x1 ∀u2 ∃t3, clause {x1, u2}: after nothing, u2 unblocked, unit x1
        let s = state_of("p cnf 3 1\ne 1 0\na 2 0\ne 3 0\n1 2 0\n");
        let mut b = TrailBuilder::new(&s);
        b.propagate();
        assert_eq!(
            b.entries,
            vec![TrailEntry::Propagated { lit: lit(1), ante: ConstraintRef::Matrix(0) }]
        );
    }

    #[test]
    fn cube_unit_propagates_falsifying_value() {
        let f = parse_qdimacs("p cnf 2 0\ne 1 0\na 2 0\n").unwrap();
        let trv = compute_dtrv(&f);
        let mut s = FormulaState::new(f, trv.clone(), CubePolicy::CubeLd, Some(trv));
        s.learn(Constraint::cube([lit(1), lit(-2)]));
        let mut b = TrailBuilder::new(&s);
        b.decide(lit(1), &DecisionPolicy::LevOrd).unwrap();
        b.propagate();
        // cube {x1, -u2} restricted to {-u2}: propagate u2
        assert_eq!(
            b.entries[1],
            TrailEntry::Propagated { lit: lit(2), ante: ConstraintRef::LearntCube(0) }
        );
    }

    #[test]
    fn satisfied_cube_is_a_conflict() {
        // ∃x1 ∀u2, learnt cube {x1, -u2}: deciding -u2 first (any-order)
        // leaves the residual {x1}, whose reduction to the empty cube stays
        // inert; deciding x1 then satisfies the cube outright.
        let f = parse_qdimacs("p cnf 2 0\ne 1 0\na 2 0\n").unwrap();
        let trv = compute_dtrv(&f);
        let mut s = FormulaState::new(f, trv.clone(), CubePolicy::CubeLd, Some(trv));
        s.learn(Constraint::cube([lit(1), lit(-2)]));
        let mut b = TrailBuilder::new(&s);
        b.decide(lit(-2), &DecisionPolicy::AnyOrd).unwrap();
        b.propagate();
        assert!(b.outcome().is_none());
        b.decide(lit(1), &DecisionPolicy::AnyOrd).unwrap();
        b.propagate();
        assert_eq!(b.outcome(), Some(TrailOutcome::CubeConflict));
    }

    #[test]
    fn merged_antecedent_literal_is_pending_until_reduced() {
        // ∃x1 ∀u2 ∃t3: learnt clause {x1, u2, -u2, t3}; the merge is blocked
        // by t3, pends while u2 is assigned, and reduces away once t3 leaves
        // the residual, giving the empty clause.
        let f = parse_qdimacs("p cnf 3 0\ne 1 0\na 2 0\ne 3 0\n").unwrap();
        let trv = compute_dtrv(&f);
        let mut s = FormulaState::new(f, trv, CubePolicy::NoCube, None);
        s.learn(Constraint::clause([lit(1), lit(2), lit(-2), lit(3)]));
        let mut b = TrailBuilder::new(&s);
        b.propagate();
        assert!(b.outcome().is_none());
        b.decide(lit(-1), &DecisionPolicy::LevOrd).unwrap();
        b.propagate();
        assert!(b.outcome().is_none()); // residual {u2*, t3} is not unit
        b.decide(lit(2), &DecisionPolicy::LevOrd).unwrap();
        b.propagate();
        assert!(b.outcome().is_none()); // the merge pends even with u2 assigned
        b.decide(lit(-3), &DecisionPolicy::LevOrd).unwrap();
        b.propagate();
        assert_eq!(b.outcome(), Some(TrailOutcome::ClauseConflict));
    }

    #[test]
    fn run_trail_deterministic_and_natural() {
        let s = state_of(
            "p cnf 4 4\ne 1 2 0\na 3 0\ne 4 0\n1 2 0\n-1 2 4 0\n-2 3 4 0\n-2 -4 0\n",
        );
        let mut c1 = SmallestPositionChooser { value: ValueHeuristic::FalseFirst };
        let t1 = run_trail(&s, &DecisionPolicy::LevOrd, &mut c1).unwrap();
        let mut c2 = SmallestPositionChooser { value: ValueHeuristic::FalseFirst };
        let t2 = run_trail(&s, &DecisionPolicy::LevOrd, &mut c2).unwrap();
        assert_eq!(t1, t2);
        assert_ne!(t1.outcome, TrailOutcome::Incomplete);
        // no variable assigned twice
        let _ = t1.assignment(4);
    }

    #[test]
    fn trail_text_roundtrip() {
        let s = state_of("p cnf 2 2\ne 1 2 0\n1 2 0\n-1 -2 0\n");
        let mut ch = ScriptedDecisions::new(vec![lit(-1)]);
        let t = run_trail(&s, &DecisionPolicy::LevOrd, &mut ch).unwrap();
        let text = t.to_text(&s);
        let back = Trail::parse_text(&text, &s, t.outcome).unwrap();
        assert_eq!(back, t);
    }
}
