//! Computes the learnable constraints of a finished trail: the backward
//! conflict-analysis recurrence for clause and cube conflicts, and subset
//! extraction for satisfying trails.

use thiserror::Error;

use crate::calculus::{
    resolve_clauses, resolve_cubes, CalculusError, Derivation, Flavor, RuleMode, Step,
};
use crate::deps::{reduce_clause, reduce_cube};
use crate::qbf::{Constraint, ConstraintKind, Literal, Prefix, Quant, Variable};
use crate::trail::{CubePolicy, FormulaState, Trail, TrailEntry, TrailOutcome};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LearnError {
    #[error("trail outcome {0} does not admit this learning rule")]
    WrongOutcome(crate::trail::TrailOutcome),
    #[error("cube learning is disabled under the NoCube policy")]
    NoCubePolicy,
    #[error("conflict-analysis resolution failed: {0}")]
    ResolutionFailed(#[from] CalculusError),
    #[error("trail has no conflict antecedent")]
    MissingAntecedent,
}

/// One learnable constraint and the side derivation that certifies it.
#[derive(Clone, Debug)]
pub struct LearnableItem {
    pub constraint: Constraint,
    pub derivation: Derivation,
}

#[derive(Clone, Debug, Default)]
pub struct LearnableSet {
    pub items: Vec<LearnableItem>,
}

impl LearnableSet {
    pub fn constraints(&self) -> Vec<Constraint> {
        self.items.iter().map(|i| i.constraint.clone()).collect()
    }

    pub fn find(&self, c: &Constraint) -> Option<&LearnableItem> {
        self.items.iter().find(|i| &i.constraint == c)
    }

    fn push_dedup(&mut self, constraint: Constraint, derivation: Derivation) {
        if self.items.iter().all(|i| i.constraint != constraint) {
            self.items.push(LearnableItem { constraint, derivation });
        }
    }
}

/// Builds a derivation incrementally; reductions are recorded as single
/// variable steps in prefix right-to-left order.
struct Deriver<'a> {
    steps: Vec<Step>,
    prefix: &'a Prefix,
}

impl<'a> Deriver<'a> {
    fn new(prefix: &'a Prefix) -> Self {
        Deriver { steps: Vec::new(), prefix }
    }

    fn axiom(&mut self, c: &Constraint) -> usize {
        self.steps.push(Step::Axiom(c.clone()));
        self.steps.len()
    }

    /// Emits one Reduce step per variable dropped between `from` and `to`.
    fn reduce_chain(&mut self, from_id: usize, from: &Constraint, to: &Constraint) -> usize {
        let mut gone: Vec<Variable> =
            from.vars().filter(|&v| to.occ(v).is_none()).collect();
        gone.sort_by_key(|&v| std::cmp::Reverse(self.prefix.position(v)));
        let mut id = from_id;
        for v in gone {
            self.steps.push(Step::Reduce { from: id, var: v });
            id = self.steps.len();
        }
        id
    }

    fn resolve(&mut self, left: usize, right: usize, pivot: Variable) -> usize {
        self.steps.push(Step::Resolve { left, right, pivot });
        self.steps.len()
    }

    fn snapshot(&self) -> Derivation {
        Derivation { steps: self.steps.clone() }
    }
}

fn conflict_antecedent(s: &FormulaState, t: &Trail) -> Result<Constraint, LearnError> {
    match t.entries.last() {
        Some(TrailEntry::Conflict { ante }) => Ok(s.constraint(*ante).clone()),
        _ => Err(LearnError::MissingAntecedent),
    }
}

/// Learning from a clause conflict: starting from the reduced conflict
/// antecedent, resolve in reverse over the antecedents of propagated
/// existential literals whose negation is in the current clause; decisions
/// and non-firing steps are skipped. Every intermediate clause is learnable;
/// duplicates collapse keeping the first position.
pub fn learn_from_clause_conflict(
    s: &FormulaState,
    t: &Trail,
) -> Result<LearnableSet, LearnError> {
    if t.outcome != TrailOutcome::ClauseConflict {
        return Err(LearnError::WrongOutcome(t.outcome));
    }
    let prefix = &s.base.prefix;
    let d = &s.clause_dep;
    let mode = RuleMode::new(Flavor::LongDistance, ConstraintKind::Clause, d, prefix)
        .expect("clause mode is always constructible");

    let ante = conflict_antecedent(s, t)?;
    let mut deriver = Deriver::new(prefix);
    let id = deriver.axiom(&ante);
    let mut current = reduce_clause(&ante, d, prefix);
    let mut cur_id = deriver.reduce_chain(id, &ante, &current);
    let seed = current.clone();
    let seed_deriv = deriver.snapshot();

    let mut set = LearnableSet::default();
    for entry in t.entries.iter().rev().skip(1) {
        let (p, ante_ref) = match entry {
            TrailEntry::Propagated { lit, ante } => (*lit, *ante),
            _ => continue,
        };
        // a non-firing step associates the unchanged clause with p
        if prefix.quant(p.var()) == Quant::Exists && current.contains(p.negate()) {
            let pante = s.constraint(ante_ref).clone();
            let a_id = deriver.axiom(&pante);
            let red_ante = reduce_clause(&pante, d, prefix);
            let ra_id = deriver.reduce_chain(a_id, &pante, &red_ante);
            // orient: the antecedent contains p, the current clause holds ¬p
            let resolvent = if p.is_positive() {
                resolve_clauses(&red_ante, &current, p.var(), &mode)?
            } else {
                resolve_clauses(&current, &red_ante, p.var(), &mode)?
            };
            let res_id = if p.is_positive() {
                deriver.resolve(ra_id, cur_id, p.var())
            } else {
                deriver.resolve(cur_id, ra_id, p.var())
            };
            let reduced = reduce_clause(&resolvent, d, prefix);
            cur_id = deriver.reduce_chain(res_id, &resolvent, &reduced);
            current = reduced;
            debug_assert!(current
                .occs()
                .iter()
                .all(|&(v, o)| !o.is_merged() || prefix.is_universal(v)));
        }
        set.push_dedup(current.clone(), deriver.snapshot());
    }
    if set.items.is_empty() {
        set.push_dedup(seed, seed_deriv);
    }
    Ok(set)
}

/// The dual recurrence for cube conflicts, resolving over propagated
/// universal literals. Under the dependency cube policy a resolution is only
/// performed when it is a valid plain term-resolution step; otherwise the
/// previously derived cube is carried through.
pub fn learn_from_cube_conflict(
    s: &FormulaState,
    t: &Trail,
) -> Result<LearnableSet, LearnError> {
    if t.outcome != TrailOutcome::CubeConflict {
        return Err(LearnError::WrongOutcome(t.outcome));
    }
    let (flavor, cube_dep) = match s.cube_policy {
        CubePolicy::NoCube => return Err(LearnError::NoCubePolicy),
        CubePolicy::CubeLd => (Flavor::LongDistance, s.cube_dep().unwrap()),
        CubePolicy::CubeDep => (Flavor::Plain, s.cube_dep().unwrap()),
    };
    let prefix = &s.base.prefix;
    let mode = RuleMode::new(flavor, ConstraintKind::Cube, cube_dep, prefix)
        .expect("cube policy invariant keeps LD on the trivial scheme");

    let ante = conflict_antecedent(s, t)?;
    let mut deriver = Deriver::new(prefix);
    let id = deriver.axiom(&ante);
    let mut current = reduce_cube(&ante, cube_dep, prefix);
    let mut cur_id = deriver.reduce_chain(id, &ante, &current);
    let seed = current.clone();
    let seed_deriv = deriver.snapshot();

    let mut set = LearnableSet::default();
    for entry in t.entries.iter().rev().skip(1) {
        let (p, ante_ref) = match entry {
            TrailEntry::Propagated { lit, ante } => (*lit, *ante),
            _ => continue,
        };
        // the current cube holds trail literals; the antecedent cube holds ¬p
        if prefix.quant(p.var()) == Quant::Forall && current.contains(p) {
            let pante = s.constraint(ante_ref).clone();
            let red_ante = reduce_cube(&pante, cube_dep, prefix);
            let oriented = if p.is_positive() {
                resolve_cubes(&current, &red_ante, p.var(), &mode)
            } else {
                resolve_cubes(&red_ante, &current, p.var(), &mode)
            };
            match (oriented, s.cube_policy) {
                (Ok(resolvent), _) => {
                    let a_id = deriver.axiom(&pante);
                    let ra_id = deriver.reduce_chain(a_id, &pante, &red_ante);
                    let res_id = if p.is_positive() {
                        deriver.resolve(cur_id, ra_id, p.var())
                    } else {
                        deriver.resolve(ra_id, cur_id, p.var())
                    };
                    let reduced = reduce_cube(&resolvent, cube_dep, prefix);
                    cur_id = deriver.reduce_chain(res_id, &resolvent, &reduced);
                    current = reduced;
                }
                // plain term resolution undefined here: keep the previous cube
                (Err(_), CubePolicy::CubeDep) => {}
                (Err(e), _) => return Err(LearnError::ResolutionFailed(e)),
            }
        }
        set.push_dedup(current.clone(), deriver.snapshot());
    }
    if set.items.is_empty() {
        set.push_dedup(seed, seed_deriv);
    }
    Ok(set)
}

/// Subset selection for satisfaction learning. The full powerset is
/// exponential; the default emits greedy inclusion-minimal covers plus the
/// whole trail, and scripted replay may supply subsets explicitly.
#[derive(Clone, Debug, Default)]
pub enum SatStrategy {
    #[default]
    Default,
    Explicit(Vec<Vec<Literal>>),
}

/// Learning from a satisfying trail: each emitted cube is the reduction of
/// the conjunction of a trail subset that satisfies every matrix clause and
/// every learnt clause.
pub fn learn_from_satisfaction(
    s: &FormulaState,
    t: &Trail,
    strategy: &SatStrategy,
) -> Result<LearnableSet, LearnError> {
    if t.outcome != TrailOutcome::TotalSatisfaction {
        return Err(LearnError::WrongOutcome(t.outcome));
    }
    let cube_dep = match s.cube_policy {
        CubePolicy::NoCube => return Err(LearnError::NoCubePolicy),
        _ => s.cube_dep().unwrap(),
    };
    let prefix = &s.base.prefix;
    let trail_lits: Vec<Literal> = t.lits().collect();

    let candidates: Vec<Vec<Literal>> = match strategy {
        SatStrategy::Explicit(subsets) => subsets.clone(),
        SatStrategy::Default => {
            let mut cands = vec![
                greedy_cover(s, &trail_lits, false),
                greedy_cover(s, &trail_lits, true),
            ];
            cands.push(trail_lits.clone());
            cands
        }
    };

    let mut set = LearnableSet::default();
    for sub in candidates {
        if !sub.iter().all(|l| trail_lits.contains(l)) {
            continue;
        }
        if !covers_all(s, &sub) {
            continue;
        }
        let t_sub = Constraint::cube(sub);
        let mut deriver = Deriver::new(prefix);
        let id = deriver.axiom(&t_sub);
        let reduced = reduce_cube(&t_sub, cube_dep, prefix);
        deriver.reduce_chain(id, &t_sub, &reduced);
        set.push_dedup(reduced, deriver.snapshot());
    }
    Ok(set)
}

/// Does the subset satisfy every matrix clause and learnt clause? Shares the
/// literal-containment reading with the term axiom rule.
fn covers_all(s: &FormulaState, sub: &[Literal]) -> bool {
    s.base
        .matrix
        .iter()
        .chain(s.learnt_clauses.iter())
        .all(|c| sub.iter().any(|&l| c.contains(l)))
}

/// Greedy cover over the clause list in index order; the literal choice per
/// clause prefers the smallest or largest prefix position. The result is
/// pruned to an inclusion-minimal cover.
fn greedy_cover(s: &FormulaState, trail_lits: &[Literal], prefer_late: bool) -> Vec<Literal> {
    let prefix = &s.base.prefix;
    let mut chosen: Vec<Literal> = Vec::new();
    for c in s.base.matrix.iter().chain(s.learnt_clauses.iter()) {
        if chosen.iter().any(|&l| c.contains(l)) {
            continue;
        }
        let pick = trail_lits
            .iter()
            .copied()
            .filter(|&l| c.contains(l))
            .min_by_key(|&l| {
                let pos = prefix.position(l.var()) as i64;
                if prefer_late {
                    -pos
                } else {
                    pos
                }
            });
        if let Some(l) = pick {
            chosen.push(l);
        }
    }
    // prune to inclusion-minimal, trying late additions first
    let mut i = chosen.len();
    while i > 0 {
        i -= 1;
        let mut without = chosen.clone();
        without.remove(i);
        if covers_all(s, &without) {
            chosen = without;
        }
    }
    chosen
}

/// Independent learnability witness for satisfaction cubes, used by the
/// trace validator: a cube is learnable from a satisfying trail iff its
/// literals are trail literals, its existentials are all blocked by its own
/// universals, and the maximal compatible subset covers every clause.
pub fn satisfaction_learnable(s: &FormulaState, t: &Trail, cube: &Constraint) -> bool {
    if cube.kind() != ConstraintKind::Cube || cube.has_merge() {
        return false;
    }
    let cube_dep = match s.cube_dep() {
        Some(d) => d,
        None => return false,
    };
    let prefix = &s.base.prefix;
    let trail_lits: Vec<Literal> = t.lits().collect();
    let lits: Vec<Literal> = cube.lits().collect();
    if !lits.iter().all(|l| trail_lits.contains(l)) {
        return false;
    }
    let universals: Vec<Variable> = cube
        .vars()
        .filter(|&v| prefix.is_universal(v))
        .collect();
    // reduction must keep exactly the cube's existentials
    for l in &lits {
        if prefix.is_existential(l.var())
            && !universals
                .iter()
                .any(|&u| cube_dep.blocks_cube_reduction(l.var(), u))
        {
            return false;
        }
    }
    // extend with every trail existential that reduction would strip again
    let mut witness = lits.clone();
    for &l in &trail_lits {
        if cube.occ(l.var()).is_some() || prefix.is_universal(l.var()) {
            continue;
        }
        let strippable = !universals
            .iter()
            .any(|&u| cube_dep.blocks_cube_reduction(l.var(), u));
        if strippable {
            witness.push(l);
        }
    }
    if !covers_all(s, &witness) {
        return false;
    }
    reduce_cube(&Constraint::cube(witness), cube_dep, prefix) == *cube
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deps::compute_dtrv;
    use crate::qbf::parse_qdimacs;
    use crate::trail::{run_trail, DecisionPolicy, ScriptedDecisions};

    fn lit(n: i64) -> Literal {
        Literal::from_dimacs(n).unwrap()
    }

    #[test]
    fn clause_conflict_walk_produces_all_intermediates() {
        // ∃1 ∃2 with {1,2},{1,-2},{-1,2},{-1,-2}: decide -1, propagate 2 via
        // {1,2}, conflict on {1,-2}
        let f = parse_qdimacs("p cnf 2 4\ne 1 2 0\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n")
            .unwrap();
        let d = compute_dtrv(&f);
        let s = FormulaState::new(f, d, CubePolicy::NoCube, None);
        let mut ch = ScriptedDecisions::new(vec![lit(-1)]);
        let t = run_trail(&s, &DecisionPolicy::LevOrd, &mut ch).unwrap();
        assert_eq!(t.outcome, TrailOutcome::ClauseConflict);
        let set = learn_from_clause_conflict(&s, &t).unwrap();
        assert_eq!(set.constraints(), vec![Constraint::clause([lit(1)])]);
    }

    #[test]
    fn cube_conflict_resolves_on_universal() {
        // ∃x1 ∀u2, matrix {x1}, learnt cubes {x1,u2} and {x1,-u2}: x1 is
        // propagated, cube 0 becomes unit and propagates -u2, cube 1 is then
        // satisfied. Term resolution on u2 gives {x1}, whose reduction is ⊤.
        let f = parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 0\n").unwrap();
        let trv = compute_dtrv(&f);
        let mut s = FormulaState::new(f, trv.clone(), CubePolicy::CubeLd, Some(trv));
        s.learn(Constraint::cube([lit(1), lit(2)]));
        s.learn(Constraint::cube([lit(1), lit(-2)]));
        let mut ch = ScriptedDecisions::new(vec![]);
        let t = run_trail(&s, &DecisionPolicy::LevOrd, &mut ch).unwrap();
        assert_eq!(t.outcome, TrailOutcome::CubeConflict);
        let set = learn_from_cube_conflict(&s, &t).unwrap();
        assert_eq!(set.constraints(), vec![Constraint::cube([])]);
    }

    #[test]
    fn satisfaction_learns_reduced_subsets() {
        // ∃x1 ∀u2: {x1∨u2}, {x1∨-u2}: both clauses reduce to {x1}, so x1 is
        // propagated; deciding -u2 completes a satisfying trail.
        let f = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n1 -2 0\n").unwrap();
        let trv = compute_dtrv(&f);
        let s = FormulaState::new(f, trv.clone(), CubePolicy::CubeLd, Some(trv));
        let mut ch = ScriptedDecisions::new(vec![lit(-2)]);
        let t = run_trail(&s, &DecisionPolicy::LevOrd, &mut ch).unwrap();
        assert_eq!(t.outcome, TrailOutcome::TotalSatisfaction);
        let set = learn_from_satisfaction(&s, &t, &SatStrategy::Default).unwrap();
        // {x1} covers everything and has no universal in the cube to block
        // it, so it reduces away: the empty cube is learnable
        assert!(set.items.iter().any(|i| i.constraint.is_empty()));
        for item in &set.items {
            assert!(satisfaction_learnable(&s, &t, &item.constraint));
        }
    }

    #[test]
    fn satisfaction_witness_rejects_foreign_cube() {
        let f = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n1 -2 0\n").unwrap();
        let trv = compute_dtrv(&f);
        let s = FormulaState::new(f, trv.clone(), CubePolicy::CubeLd, Some(trv));
        let mut ch = ScriptedDecisions::new(vec![lit(-2)]);
        let t = run_trail(&s, &DecisionPolicy::LevOrd, &mut ch).unwrap();
        // {-x1, -u2} is not a trail subset
        assert!(!satisfaction_learnable(
            &s,
            &t,
            &Constraint::cube([lit(-1), lit(-2)])
        ));
    }
}
