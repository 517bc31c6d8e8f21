//! The full proof-search loop: iterate trails, learn one constraint per
//! trail, restart, until the empty clause (FALSE) or the empty cube (TRUE).
//! Also scripted replay, an independently-implemented trace validator, and
//! the trace file format.

use std::fmt;

use thiserror::Error;

use crate::calculus::{check_derivation, CheckOutcome, Derivation, Flavor, RuleMode};
use crate::deps::{compute, compute_dtrv, preprocess, reduce_clause, reduce_cube, DepRelation, SchemeTag};
use crate::learning::{
    learn_from_clause_conflict, learn_from_cube_conflict, learn_from_satisfaction,
    satisfaction_learnable, LearnError, LearnableSet, SatStrategy,
};
use crate::qbf::{
    trail_status, Assignment, Constraint, ConstraintKind, Literal, Occ, Restriction, PCNF,
};
use crate::trail::{
    decidable_vars, run_trail, ConstraintRef, CubePolicy, DecisionPolicy, FormulaState,
    ScriptedDecisions, SmallestPositionChooser, Trail, TrailEntry, TrailError, TrailOutcome,
    ValueHeuristic,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrdPolicy {
    Lev,
    Dep(SchemeTag),
    Any,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CubeConfig {
    NoCube,
    CubeLd,
    CubeDep,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pick {
    Last,
    FirstNew,
    Scripted,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SolverConfig {
    pub ord: OrdPolicy,
    pub clause_dep: SchemeTag,
    pub cube: CubeConfig,
    pub preprocess: Option<SchemeTag>,
    pub pick: Pick,
    pub value: ValueHeuristic,
    pub step_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            ord: OrdPolicy::Lev,
            clause_dep: SchemeTag::Trv,
            cube: CubeConfig::NoCube,
            preprocess: None,
            pick: Pick::FirstNew,
            value: ValueHeuristic::FalseFirst,
            step_limit: 1_000_000,
        }
    }
}

impl SolverConfig {
    pub fn config_line(&self) -> String {
        let ord = match self.ord {
            OrdPolicy::Lev => "lev".to_string(),
            OrdPolicy::Dep(t) => format!("dep:{}", t.name()),
            OrdPolicy::Any => "any".to_string(),
        };
        let cube = match self.cube {
            CubeConfig::NoCube => "none",
            CubeConfig::CubeLd => "ld",
            CubeConfig::CubeDep => "dep",
        };
        let pre = match self.preprocess {
            None => "none".to_string(),
            Some(t) => t.name().to_string(),
        };
        let pick = match self.pick {
            Pick::Last => "last",
            Pick::FirstNew => "first-new",
            Pick::Scripted => "scripted",
        };
        let value = match self.value {
            ValueHeuristic::FalseFirst => "false-first",
            ValueHeuristic::TrueFirst => "true-first",
        };
        format!(
            "ord={} clause-dep={} cube={} pre={} pick={} value={} limit={}",
            ord,
            self.clause_dep.name(),
            cube,
            pre,
            pick,
            value,
            self.step_limit
        )
    }

    pub fn parse_config_line(line: &str) -> Result<Self, String> {
        let mut cfg = SolverConfig::default();
        for kv in line.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("bad field `{kv}`"))?;
            match k {
                "ord" => {
                    cfg.ord = match v {
                        "lev" => OrdPolicy::Lev,
                        "any" => OrdPolicy::Any,
                        "dep:trv" => OrdPolicy::Dep(SchemeTag::Trv),
                        "dep:std" => OrdPolicy::Dep(SchemeTag::Std),
                        "dep:rrs" => OrdPolicy::Dep(SchemeTag::Rrs),
                        _ => return Err(format!("bad ord `{v}`")),
                    }
                }
                "clause-dep" => cfg.clause_dep = parse_scheme(v)?,
                "cube" => {
                    cfg.cube = match v {
                        "none" => CubeConfig::NoCube,
                        "ld" => CubeConfig::CubeLd,
                        "dep" => CubeConfig::CubeDep,
                        _ => return Err(format!("bad cube `{v}`")),
                    }
                }
                "pre" => {
                    cfg.preprocess = match v {
                        "none" => None,
                        _ => Some(parse_scheme(v)?),
                    }
                }
                "pick" => {
                    cfg.pick = match v {
                        "last" => Pick::Last,
                        "first-new" => Pick::FirstNew,
                        "scripted" => Pick::Scripted,
                        _ => return Err(format!("bad pick `{v}`")),
                    }
                }
                "value" => {
                    cfg.value = match v {
                        "false-first" => ValueHeuristic::FalseFirst,
                        "true-first" => ValueHeuristic::TrueFirst,
                        _ => return Err(format!("bad value `{v}`")),
                    }
                }
                "limit" => {
                    cfg.step_limit = v.parse().map_err(|_| format!("bad limit `{v}`"))?
                }
                _ => return Err(format!("unknown config key `{k}`")),
            }
        }
        Ok(cfg)
    }
}

fn parse_scheme(v: &str) -> Result<SchemeTag, String> {
    match v {
        "trv" => Ok(SchemeTag::Trv),
        "std" => Ok(SchemeTag::Std),
        "rrs" => Ok(SchemeTag::Rrs),
        _ => Err(format!("bad scheme `{v}`")),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "TRUE",
            Verdict::False => "FALSE",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Triple {
    pub trail: Trail,
    pub learnt: Constraint,
    pub derivation: Derivation,
}

#[derive(Clone, Debug)]
pub struct DerivationTrace {
    pub triples: Vec<Triple>,
    pub verdict: Verdict,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("satisfaction unusable under NoCube")]
    SatisfactionUnderNoCube,
    #[error(transparent)]
    Trail(#[from] TrailError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("trail {trail}: script exhausted mid-trail")]
    ScriptExhausted { trail: usize },
    #[error("trail {trail}: {unused} scripted decisions left unconsumed")]
    ScriptOverlong { trail: usize, unused: usize },
    #[error("trail {trail}: scripted pick `{expected}` not learnable; learnable set: [{got}]")]
    PickDivergence { trail: usize, expected: String, got: String },
    #[error("pick=scripted requires replay_script")]
    ScriptedPickInSolve,
}

/// The working formula, evolving state, and decision policy a config induces.
pub struct Session {
    pub working: PCNF,
    pub state: FormulaState,
    pub policy: DecisionPolicy,
    pub config: SolverConfig,
}

impl Session {
    pub fn prepare(f: &PCNF, cfg: &SolverConfig) -> Session {
        let working = match cfg.preprocess {
            None => f.clone(),
            Some(tag) => preprocess(f, &compute(f, tag)),
        };
        let clause_rel = compute(&working, cfg.clause_dep);
        let (cube_policy, cube_rel): (CubePolicy, Option<DepRelation>) = match cfg.cube {
            CubeConfig::NoCube => (CubePolicy::NoCube, None),
            CubeConfig::CubeLd => (CubePolicy::CubeLd, Some(compute_dtrv(&working))),
            // the cube relation is the clause scheme's relation on the
            // working formula
            CubeConfig::CubeDep => (CubePolicy::CubeDep, Some(clause_rel.clone())),
        };
        let policy = match cfg.ord {
            OrdPolicy::Lev => DecisionPolicy::LevOrd,
            OrdPolicy::Any => DecisionPolicy::AnyOrd,
            OrdPolicy::Dep(tag) => DecisionPolicy::DepOrd(compute(&working, tag)),
        };
        let state = FormulaState::new(working.clone(), clause_rel, cube_policy, cube_rel);
        Session { working, state, policy, config: *cfg }
    }

    fn learnable(
        &self,
        trail: &Trail,
        strategy: &SatStrategy,
    ) -> Result<LearnableSet, SolveError> {
        match trail.outcome {
            TrailOutcome::ClauseConflict => {
                Ok(learn_from_clause_conflict(&self.state, trail)?)
            }
            TrailOutcome::CubeConflict => Ok(learn_from_cube_conflict(&self.state, trail)?),
            TrailOutcome::TotalSatisfaction => {
                if self.config.cube == CubeConfig::NoCube {
                    Err(SolveError::SatisfactionUnderNoCube)
                } else {
                    Ok(learn_from_satisfaction(&self.state, trail, strategy)?)
                }
            }
            TrailOutcome::Incomplete => Err(SolveError::ScriptExhausted { trail: 0 }),
        }
    }
}

fn verdict_of(learnt: &Constraint) -> Option<Verdict> {
    if !learnt.is_empty() {
        return None;
    }
    Some(match learnt.kind() {
        ConstraintKind::Clause => Verdict::False,
        ConstraintKind::Cube => Verdict::True,
    })
}

/// Heuristic proof search: smallest-position decisions, one learnt
/// constraint per trail, full restart. Returns UNKNOWN at the step limit or
/// when the pick policy can make no progress.
pub fn solve(f: &PCNF, cfg: &SolverConfig) -> Result<DerivationTrace, SolveError> {
    if cfg.pick == Pick::Scripted {
        return Err(SolveError::ScriptedPickInSolve);
    }
    let mut session = Session::prepare(f, cfg);
    let mut triples = Vec::new();
    while triples.len() < cfg.step_limit {
        let mut chooser = SmallestPositionChooser { value: cfg.value };
        let trail = run_trail(&session.state, &session.policy, &mut chooser)?;
        let set = session.learnable(&trail, &SatStrategy::Default)?;
        // an empty constraint decides the formula; take it when offered
        let deciding = set.items.iter().find(|i| i.constraint.is_empty());
        let item = match deciding {
            Some(i) => Some(i),
            None => match cfg.pick {
                Pick::Last => set.items.last(),
                Pick::FirstNew => set.items.iter().find(|i| !session.state.knows(&i.constraint)),
                Pick::Scripted => unreachable!(),
            },
        };
        let item = match item {
            // no learnable progress: an honest UNKNOWN
            None => break,
            Some(i) if cfg.pick == Pick::Last && session.state.knows(&i.constraint) => break,
            Some(i) => i.clone(),
        };
        triples.push(Triple {
            trail,
            learnt: item.constraint.clone(),
            derivation: item.derivation,
        });
        session.state.learn(item.constraint.clone());
        if let Some(v) = verdict_of(&item.constraint) {
            return Ok(DerivationTrace { triples, verdict: v });
        }
    }
    Ok(DerivationTrace { triples, verdict: Verdict::Unknown })
}

/// How a scripted trail selects from the learnable set.
#[derive(Clone, Debug)]
pub enum ScriptPick {
    Last,
    Index(usize),
    Constraint(Constraint),
}

#[derive(Clone, Debug)]
pub struct TrailScript {
    pub decisions: Vec<Literal>,
    pub pick: ScriptPick,
    /// Explicit satisfaction subset, for trails ending in total satisfaction.
    pub subset: Option<Vec<Literal>>,
}

#[derive(Clone, Debug, Default)]
pub struct Script {
    pub trails: Vec<TrailScript>,
}

impl Script {
    /// One line per trail: `decisions: <lits>; subset: <lits>; pick:
    /// last|<index>|<constraint text>`. `#` starts a comment line.
    pub fn parse_text(text: &str) -> Result<Script, String> {
        let mut trails = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut ts = TrailScript {
                decisions: Vec::new(),
                pick: ScriptPick::Last,
                subset: None,
            };
            for part in line.split(';') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let (key, val) =
                    part.split_once(':').ok_or_else(|| format!("bad field `{part}`"))?;
                let val = val.trim();
                match key.trim() {
                    "decisions" => ts.decisions = parse_lits(val)?,
                    "subset" => ts.subset = Some(parse_lits(val)?),
                    "pick" => {
                        ts.pick = if val == "last" {
                            ScriptPick::Last
                        } else if let Ok(i) = val.parse::<usize>() {
                            ScriptPick::Index(i)
                        } else {
                            ScriptPick::Constraint(
                                Constraint::parse_text(val).map_err(|e| e.to_string())?,
                            )
                        }
                    }
                    other => return Err(format!("unknown script key `{other}`")),
                }
            }
            trails.push(ts);
        }
        Ok(Script { trails })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.trails {
            let mut parts = Vec::new();
            if !t.decisions.is_empty() {
                parts.push(format!(
                    "decisions: {}",
                    t.decisions.iter().map(|l| l.to_dimacs().to_string()).collect::<Vec<_>>().join(" ")
                ));
            }
            if let Some(sub) = &t.subset {
                parts.push(format!(
                    "subset: {}",
                    sub.iter().map(|l| l.to_dimacs().to_string()).collect::<Vec<_>>().join(" ")
                ));
            }
            match &t.pick {
                ScriptPick::Last => parts.push("pick: last".into()),
                ScriptPick::Index(i) => parts.push(format!("pick: {i}")),
                ScriptPick::Constraint(c) => parts.push(format!("pick: {}", c.to_text())),
            }
            out.push_str(&parts.join("; "));
            out.push('\n');
        }
        out
    }
}

fn parse_lits(s: &str) -> Result<Vec<Literal>, String> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .ok()
                .and_then(Literal::from_dimacs)
                .ok_or_else(|| format!("bad literal `{t}`"))
        })
        .collect()
}

/// Replays a script: decisions and learn picks are script-driven; the replay
/// fails loudly on the first divergence.
pub fn replay_script(
    f: &PCNF,
    cfg: &SolverConfig,
    script: &Script,
) -> Result<DerivationTrace, SolveError> {
    let mut session = Session::prepare(f, cfg);
    let mut triples = Vec::new();
    let mut verdict = Verdict::Unknown;
    for (ti, ts) in script.trails.iter().enumerate() {
        let mut chooser = ScriptedDecisions::new(ts.decisions.clone());
        let trail = run_trail(&session.state, &session.policy, &mut chooser)?;
        if trail.outcome == TrailOutcome::Incomplete {
            return Err(SolveError::ScriptExhausted { trail: ti + 1 });
        }
        if !chooser.fully_consumed() {
            let used = trail.num_decisions();
            return Err(SolveError::ScriptOverlong {
                trail: ti + 1,
                unused: ts.decisions.len() - used,
            });
        }
        let strategy = match &ts.subset {
            Some(sub) => SatStrategy::Explicit(vec![sub.clone()]),
            None => SatStrategy::Default,
        };
        let set = session.learnable(&trail, &strategy)?;
        let divergence = |expected: String| SolveError::PickDivergence {
            trail: ti + 1,
            expected,
            got: set
                .constraints()
                .iter()
                .map(|c| c.to_text())
                .collect::<Vec<_>>()
                .join(", "),
        };
        let item = match &ts.pick {
            ScriptPick::Last => set.items.last().cloned(),
            ScriptPick::Index(i) => set.items.get(*i).cloned(),
            ScriptPick::Constraint(c) => set.find(c).cloned(),
        };
        let item = match item {
            Some(i) => i,
            None => {
                let expected = match &ts.pick {
                    ScriptPick::Last => "last".to_string(),
                    ScriptPick::Index(i) => format!("index {i}"),
                    ScriptPick::Constraint(c) => c.to_text(),
                };
                return Err(divergence(expected));
            }
        };
        triples.push(Triple {
            trail,
            learnt: item.constraint.clone(),
            derivation: item.derivation.clone(),
        });
        session.state.learn(item.constraint.clone());
        if let Some(v) = verdict_of(&item.constraint) {
            verdict = v;
            break;
        }
    }
    Ok(DerivationTrace { triples, verdict })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Validity {
    Valid,
    Invalid { triple: usize, reason: String },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        *self == Validity::Valid
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validity::Valid => f.write_str("Valid"),
            Validity::Invalid { triple, reason } => {
                write!(f, "Invalid(triple {triple}: {reason})")
            }
        }
    }
}

/// Re-derives each intermediate formula and re-checks every trail entry,
/// learnt constraint and side derivation. Trail checking walks the recorded
/// entries directly — it never runs the engine's propagation loop — so
/// engine bugs cannot validate themselves.
pub fn validate_trace(f: &PCNF, cfg: &SolverConfig, trace: &DerivationTrace) -> Validity {
    let mut session = Session::prepare(f, cfg);
    let n = session.working.num_vars();
    for (i, triple) in trace.triples.iter().enumerate() {
        let tno = i + 1;
        let invalid = |reason: String| Validity::Invalid { triple: tno, reason };
        match check_trail(&session, &triple.trail, n) {
            Ok(()) => {}
            Err(reason) => return invalid(reason),
        }
        // learnability of the picked constraint
        match triple.trail.outcome {
            TrailOutcome::ClauseConflict => {
                match learn_from_clause_conflict(&session.state, &triple.trail) {
                    Ok(set) => {
                        if set.find(&triple.learnt).is_none() {
                            return invalid(format!(
                                "constraint {} is not learnable from this trail",
                                triple.learnt
                            ));
                        }
                    }
                    Err(e) => return invalid(format!("conflict analysis failed: {e}")),
                }
            }
            TrailOutcome::CubeConflict => {
                match learn_from_cube_conflict(&session.state, &triple.trail) {
                    Ok(set) => {
                        if set.find(&triple.learnt).is_none() {
                            return invalid(format!(
                                "constraint {} is not learnable from this trail",
                                triple.learnt
                            ));
                        }
                    }
                    Err(e) => return invalid(format!("conflict analysis failed: {e}")),
                }
            }
            TrailOutcome::TotalSatisfaction => {
                if !satisfaction_learnable(&session.state, &triple.trail, &triple.learnt) {
                    return invalid(format!(
                        "cube {} is not learnable from this satisfying trail",
                        triple.learnt
                    ));
                }
            }
            TrailOutcome::Incomplete => {
                return invalid("incomplete trail in trace".into());
            }
        }
        // the side derivation must be valid and derive exactly the learnt
        // constraint
        let whitelist: Vec<Constraint> = session
            .state
            .learnt_clauses
            .iter()
            .chain(session.state.learnt_cubes.iter())
            .cloned()
            .collect();
        let mode = match triple.learnt.kind() {
            ConstraintKind::Clause => RuleMode::new(
                Flavor::LongDistance,
                ConstraintKind::Clause,
                &session.state.clause_dep,
                &session.working.prefix,
            ),
            ConstraintKind::Cube => {
                let dep = session.state.cube_dep().expect("cube triple under NoCube");
                let flavor = match cfg.cube {
                    CubeConfig::CubeLd => Flavor::LongDistance,
                    _ => Flavor::Plain,
                };
                RuleMode::new(flavor, ConstraintKind::Cube, dep, &session.working.prefix)
            }
        };
        let mode = match mode {
            Ok(m) => m,
            Err(e) => return invalid(e.to_string()),
        };
        match check_derivation(&session.working, &triple.derivation, &mode, &whitelist) {
            CheckOutcome::Valid(final_c) => {
                if final_c != triple.learnt {
                    return invalid(format!(
                        "derivation ends in {} but the learnt constraint is {}",
                        final_c, triple.learnt
                    ));
                }
            }
            CheckOutcome::Invalid { step, reason } => {
                return invalid(format!("derivation step {step}: {reason}"));
            }
        }
        if triple.learnt.kind() == ConstraintKind::Cube && cfg.cube == CubeConfig::NoCube {
            return invalid("cube triple under NoCube".into());
        }
        session.state.learn(triple.learnt.clone());
    }
    // verdict consistency with the last learnt constraint
    let expected = trace
        .triples
        .last()
        .and_then(|t| verdict_of(&t.learnt))
        .unwrap_or(Verdict::Unknown);
    if expected != trace.verdict {
        return Validity::Invalid {
            triple: trace.triples.len(),
            reason: format!("verdict {} but trails derive {}", trace.verdict, expected),
        };
    }
    Validity::Valid
}

/// Direct legality check of one recorded trail: assignment consistency,
/// antecedent legality per entry, policy conformance and naturalness before
/// each decision, and the claimed outcome.
fn check_trail(session: &Session, trail: &Trail, n: usize) -> Result<(), String> {
    let state = &session.state;
    let prefix = &session.working.prefix;
    let mut a = Assignment::new(n);
    let last = trail.entries.len().checked_sub(1);
    for (j, e) in trail.entries.iter().enumerate() {
        match e {
            TrailEntry::Conflict { ante } => {
                if Some(j) != last {
                    return Err("conflict entry before the end of the trail".into());
                }
                let c = state.constraint(*ante);
                match trail.outcome {
                    TrailOutcome::ClauseConflict => {
                        if c.kind() != ConstraintKind::Clause {
                            return Err("clause conflict cites a cube".into());
                        }
                        let dead = match trail_status(c, &a) {
                            Restriction::Falsified => true,
                            Restriction::Residual(res) => {
                                reduce_clause(&res, &state.clause_dep, prefix).is_empty()
                            }
                            Restriction::Satisfied => false,
                        };
                        if !dead {
                            return Err(format!("antecedent {c} is not falsified"));
                        }
                    }
                    TrailOutcome::CubeConflict => {
                        if c.kind() != ConstraintKind::Cube {
                            return Err("cube conflict cites a clause".into());
                        }
                        if !matches!(ante, ConstraintRef::LearntCube(_)) {
                            return Err("cube conflict must cite a learnt cube".into());
                        }
                        if trail_status(c, &a) != Restriction::Satisfied {
                            return Err(format!("cube {c} is not satisfied"));
                        }
                    }
                    _ => return Err("conflict entry without a conflict outcome".into()),
                }
            }
            TrailEntry::Decision(l) => {
                if propagation_available(state, &a) {
                    return Err(format!(
                        "not natural: a propagation is available before deciding {l}"
                    ));
                }
                if a.is_assigned(l.var()) {
                    return Err(format!("decision {l} on an assigned variable"));
                }
                let decidable = decidable_vars(state, &a, &session.policy);
                if !decidable.contains(&l.var()) {
                    return Err(format!("decision {l} violates the decision policy"));
                }
                a.assign(*l).map_err(|e| e.to_string())?;
            }
            TrailEntry::Propagated { lit, ante } => {
                check_propagation(state, &a, *lit, *ante, prefix)?;
                a.assign(*lit).map_err(|e| e.to_string())?;
            }
        }
    }
    match trail.outcome {
        TrailOutcome::ClauseConflict | TrailOutcome::CubeConflict => {
            match trail.entries.last() {
                Some(TrailEntry::Conflict { .. }) => Ok(()),
                _ => Err("conflict outcome without a terminal conflict entry".into()),
            }
        }
        TrailOutcome::TotalSatisfaction => {
            if session.config.cube == CubeConfig::NoCube {
                return Err("satisfaction trail under NoCube".into());
            }
            if !a.is_total() {
                return Err("satisfaction claimed with unassigned variables".into());
            }
            for r in (0..state.base.matrix.len()).map(ConstraintRef::Matrix) {
                if trail_status(state.constraint(r), &a) != Restriction::Satisfied {
                    return Err(format!("clause {} not satisfied", state.constraint(r)));
                }
            }
            for c in &state.learnt_clauses {
                if trail_status(c, &a) != Restriction::Satisfied {
                    return Err(format!("learnt clause {c} not satisfied"));
                }
            }
            for c in &state.learnt_cubes {
                if trail_status(c, &a) == Restriction::Satisfied {
                    return Err(format!("cube {c} satisfied on a satisfaction trail"));
                }
            }
            Ok(())
        }
        TrailOutcome::Incomplete => Err("incomplete trail".into()),
    }
}

/// Is the given propagation legal right now? The antecedent must restrict
/// and reduce to exactly the unit that forces this literal.
fn check_propagation(
    state: &FormulaState,
    a: &Assignment,
    lit: Literal,
    ante: ConstraintRef,
    prefix: &crate::qbf::Prefix,
) -> Result<(), String> {
    let c = state.constraint(ante);
    match c.kind() {
        ConstraintKind::Clause => {
            let res = match trail_status(c, a) {
                Restriction::Residual(r) => r,
                other => return Err(format!("antecedent {c} is {other:?}, not residual")),
            };
            let red = reduce_clause(&res, &state.clause_dep, prefix);
            let unit = (red.width() == 1).then(|| red.occs()[0]);
            match unit {
                Some((v, occ))
                    if occ != Occ::Both
                        && prefix.is_existential(v)
                        && Literal::new(v, occ == Occ::Pos) == lit => Ok(()),
                _ => Err(format!("antecedent {c} does not propagate {lit}")),
            }
        }
        ConstraintKind::Cube => {
            if !matches!(ante, ConstraintRef::LearntCube(_)) {
                return Err("cube antecedent must be a learnt cube".into());
            }
            let dep = state
                .cube_dep()
                .ok_or_else(|| "cube propagation under NoCube".to_string())?;
            let res = match trail_status(c, a) {
                Restriction::Residual(r) => r,
                other => return Err(format!("antecedent {c} is {other:?}, not residual")),
            };
            let red = reduce_cube(&res, dep, prefix);
            let unit = (red.width() == 1).then(|| red.occs()[0]);
            match unit {
                Some((v, occ))
                    if occ != Occ::Both
                        && prefix.is_universal(v)
                        && Literal::new(v, occ != Occ::Pos) == lit => Ok(()),
                _ => Err(format!("antecedent {c} does not propagate {lit}")),
            }
        }
    }
}

/// Any unit or conflict available under the current assignment? Used for the
/// naturalness check; evaluates every constraint directly.
fn propagation_available(state: &FormulaState, a: &Assignment) -> bool {
    let prefix = &state.base.prefix;
    let clauses = state
        .base
        .matrix
        .iter()
        .chain(state.learnt_clauses.iter());
    for c in clauses {
        match trail_status(c, a) {
            Restriction::Satisfied => {}
            Restriction::Falsified => return true,
            Restriction::Residual(res) => {
                let red = reduce_clause(&res, &state.clause_dep, prefix);
                if red.is_empty() {
                    return true;
                }
                if red.width() == 1 {
                    let (v, occ) = red.occs()[0];
                    if occ != Occ::Both && prefix.is_existential(v) {
                        return true;
                    }
                }
            }
        }
    }
    if let Some(dep) = state.cube_dep() {
        for c in &state.learnt_cubes {
            match trail_status(c, a) {
                Restriction::Satisfied => return true,
                Restriction::Falsified => {}
                Restriction::Residual(res) => {
                    let red = reduce_cube(&res, dep, prefix);
                    if red.width() == 1 {
                        let (v, occ) = red.occs()[0];
                        if occ != Occ::Both && prefix.is_universal(v) {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Trace file: `qcdcl-trace v1` header, config line, verdict, then one block
/// per triple (trail line, learnt line, derivation block).
pub fn write_trace(f: &PCNF, cfg: &SolverConfig, trace: &DerivationTrace) -> String {
    let mut session = Session::prepare(f, cfg);
    let mut out = String::from("qcdcl-trace v1\n");
    out.push_str(&format!("config {}\n", cfg.config_line()));
    out.push_str(&format!("verdict {}\n", trace.verdict));
    for (i, triple) in trace.triples.iter().enumerate() {
        out.push_str(&format!("triple {}\n", i + 1));
        out.push_str(&format!("trail {}\n", triple.trail.to_text(&session.state)));
        out.push_str(&format!("learnt {}\n", triple.learnt.to_text()));
        let deriv_text = triple.derivation.to_text();
        let lines = deriv_text.lines().count();
        out.push_str(&format!("deriv {lines}\n"));
        out.push_str(&deriv_text);
        session.state.learn(triple.learnt.clone());
    }
    out
}

pub fn parse_trace(f: &PCNF, text: &str) -> Result<(SolverConfig, DerivationTrace), String> {
    let mut lines = text.lines();
    match lines.next() {
        Some("qcdcl-trace v1") => {}
        other => return Err(format!("bad trace header {other:?}")),
    }
    let cfg_line = lines
        .next()
        .and_then(|l| l.strip_prefix("config "))
        .ok_or("missing config line")?;
    let cfg = SolverConfig::parse_config_line(cfg_line)?;
    let verdict = match lines.next().and_then(|l| l.strip_prefix("verdict ")) {
        Some("TRUE") => Verdict::True,
        Some("FALSE") => Verdict::False,
        Some("UNKNOWN") => Verdict::Unknown,
        other => return Err(format!("bad verdict line {other:?}")),
    };
    let mut session = Session::prepare(f, &cfg);
    let mut triples = Vec::new();
    while let Some(line) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        if !line.starts_with("triple ") {
            return Err(format!("expected triple header, got `{line}`"));
        }
        let trail_line = lines
            .next()
            .and_then(|l| l.strip_prefix("trail "))
            .ok_or("missing trail line")?;
        let last_tok = trail_line
            .rsplit([';', ':'])
            .next()
            .map(str::trim)
            .unwrap_or_default();
        let outcome = if last_tok.starts_with("0@") {
            TrailOutcome::ClauseConflict
        } else if last_tok.starts_with("T@") {
            TrailOutcome::CubeConflict
        } else {
            TrailOutcome::TotalSatisfaction
        };
        let trail = Trail::parse_text(trail_line, &session.state, outcome)?;
        let learnt_line = lines
            .next()
            .and_then(|l| l.strip_prefix("learnt "))
            .ok_or("missing learnt line")?;
        let learnt = Constraint::parse_text(learnt_line).map_err(|e| e.to_string())?;
        let count: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("deriv "))
            .ok_or("missing deriv header")?
            .trim()
            .parse()
            .map_err(|_| "bad deriv count")?;
        let mut deriv_text = String::new();
        for _ in 0..count {
            let l = lines.next().ok_or("truncated derivation block")?;
            deriv_text.push_str(l);
            deriv_text.push('\n');
        }
        let derivation = Derivation::parse_text(&deriv_text)?;
        session.state.learn(learnt.clone());
        triples.push(Triple { trail, learnt, derivation });
    }
    Ok((cfg, DerivationTrace { triples, verdict }))
}
