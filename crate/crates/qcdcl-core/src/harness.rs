//! Experiment harness: brute-force evaluation by game-tree search, the gauge
//! measure for XUT formulas, seeded random instances, the separation suite
//! with CSV output, the scripted refutation corpus, and trace mutations for
//! validator testing.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calculus::Step;
use crate::gen::{generate, s_n, EqVars, Family, FamilySpec, PreRrsVars, StdDepTrapVars, TwoPhpVars};
use crate::qbf::{Constraint, ConstraintKind, Literal, Occ, Prefix, Quant, Variable, PCNF};
use crate::solver::{
    replay_script, solve, CubeConfig, DerivationTrace, OrdPolicy, Pick, Script, ScriptPick,
    SolveError, SolverConfig, TrailScript, Verdict,
};
use crate::deps::SchemeTag;
use crate::trail::{TrailEntry, ValueHeuristic};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("formula has {vars} variables, over the {guard}-variable guard")]
    SizeGuard { vars: usize, guard: usize },
    #[error("not an XUT formula (prefix must be ∃X ∀U ∃T)")]
    NotXut,
    #[error("gauge closure exceeded the {0}-clause budget")]
    GaugeBudget(usize),
    #[error("no X-clause derivable")]
    NoXClause,
}

pub const BRUTE_FORCE_GUARD: usize = 26;

/// Two-player game-tree evaluation in prefix order: existential levels are
/// OR, universal levels AND, leaves evaluate the matrix.
pub fn brute_force_eval(f: &PCNF) -> Result<bool, HarnessError> {
    brute_force_eval_with_guard(f, BRUTE_FORCE_GUARD)
}

pub fn brute_force_eval_with_guard(f: &PCNF, guard: usize) -> Result<bool, HarnessError> {
    let n = f.num_vars();
    if n > guard {
        return Err(HarnessError::SizeGuard { vars: n, guard });
    }
    let mut eval = GameEval::new(f);
    Ok(eval.run(0))
}

struct GameEval<'a> {
    f: &'a PCNF,
    /// (clause index, literal is positive) per variable
    occs: Vec<Vec<(usize, bool)>>,
    sat_count: Vec<u32>,
    unassigned: Vec<u32>,
    satisfied: usize,
    falsified: usize,
}

impl<'a> GameEval<'a> {
    fn new(f: &'a PCNF) -> Self {
        let n = f.num_vars();
        let mut occs = vec![Vec::new(); n];
        let mut unassigned = Vec::with_capacity(f.matrix.len());
        for (ci, c) in f.matrix.iter().enumerate() {
            for &(v, o) in c.occs() {
                occs[v.index()].push((ci, o == Occ::Pos));
            }
            unassigned.push(c.width() as u32);
        }
        let falsified = f.matrix.iter().filter(|c| c.is_empty()).count();
        GameEval {
            f,
            occs,
            sat_count: vec![0; f.matrix.len()],
            unassigned,
            satisfied: 0,
            falsified,
        }
    }

    fn assign(&mut self, v: Variable, value: bool) {
        for i in 0..self.occs[v.index()].len() {
            let (ci, positive) = self.occs[v.index()][i];
            self.unassigned[ci] -= 1;
            if positive == value {
                self.sat_count[ci] += 1;
                if self.sat_count[ci] == 1 {
                    self.satisfied += 1;
                }
            } else if self.sat_count[ci] == 0 && self.unassigned[ci] == 0 {
                self.falsified += 1;
            }
        }
    }

    fn unassign(&mut self, v: Variable, value: bool) {
        for i in 0..self.occs[v.index()].len() {
            let (ci, positive) = self.occs[v.index()][i];
            if positive == value {
                if self.sat_count[ci] == 1 {
                    self.satisfied -= 1;
                }
                self.sat_count[ci] -= 1;
            } else if self.sat_count[ci] == 0 && self.unassigned[ci] == 0 {
                self.falsified -= 1;
            }
            self.unassigned[ci] += 1;
        }
    }

    fn run(&mut self, depth: usize) -> bool {
        if self.falsified > 0 {
            return false;
        }
        if self.satisfied == self.f.matrix.len() {
            return true;
        }
        debug_assert!(depth < self.f.num_vars());
        let (v, q) = self.f.prefix.order()[depth];
        // a variable in no unsatisfied clause cannot matter
        let relevant = self.occs[v.index()].iter().any(|&(ci, _)| self.sat_count[ci] == 0);
        if !relevant {
            return self.run(depth + 1);
        }
        let mut result = q == Quant::Forall;
        for value in [false, true] {
            self.assign(v, value);
            let sub = self.run(depth + 1);
            self.unassign(v, value);
            match q {
                Quant::Exists if sub => {
                    result = true;
                    break;
                }
                Quant::Forall if !sub => {
                    result = false;
                    break;
                }
                _ => {}
            }
        }
        result
    }
}

pub const GAUGE_BUDGET: usize = 500_000;

/// Gauge of an XUT formula: the minimum width over nonempty clauses on X
/// variables alone that are derivable using only reductions and resolutions
/// with pivots in T. Exhaustive closure, so only suitable for small inputs.
pub fn compute_gauge(f: &PCNF, budget: usize) -> Result<usize, HarnessError> {
    let blocks = f.prefix.blocks();
    if blocks.len() != 3 || blocks[0].0 != Quant::Exists || blocks[1].0 != Quant::Forall {
        return Err(HarnessError::NotXut);
    }
    let x_block = 0usize;
    let t_block = 2usize;
    let prefix = &f.prefix;
    let trv = crate::deps::compute_dtrv(f);

    let mut seen: std::collections::HashSet<Constraint> = std::collections::HashSet::new();
    let mut worklist: Vec<Constraint> = Vec::new();
    let mut best: Option<usize> = None;

    let push = |c: Constraint,
                    seen: &mut std::collections::HashSet<Constraint>,
                    worklist: &mut Vec<Constraint>,
                    best: &mut Option<usize>| {
        if seen.contains(&c) {
            return;
        }
        if !c.is_empty() && c.vars().all(|v| prefix.block(v) == x_block) {
            let w = c.width();
            if best.map_or(true, |b| w < b) {
                *best = Some(w);
            }
        }
        seen.insert(c.clone());
        worklist.push(c);
    };

    for c in &f.matrix {
        push(c.clone(), &mut seen, &mut worklist, &mut best);
    }
    let mut processed: Vec<Constraint> = Vec::new();
    while let Some(c) = worklist.pop() {
        if seen.len() > budget {
            return Err(HarnessError::GaugeBudget(budget));
        }
        let red = crate::deps::reduce_clause(&c, &trv, prefix);
        push(red, &mut seen, &mut worklist, &mut best);
        for other in processed.iter() {
            for &(pv, po) in c.occs() {
                if prefix.block(pv) != t_block || po == Occ::Both {
                    continue;
                }
                let oo = match other.occ(pv) {
                    Some(o) => o,
                    None => continue,
                };
                if oo == po || oo == Occ::Both {
                    continue;
                }
                let (a, b) = if po == Occ::Pos { (&c, other) } else { (other, &c) };
                if let Some(r) = t_resolvent(a, b, pv) {
                    push(r, &mut seen, &mut worklist, &mut best);
                }
            }
        }
        processed.push(c);
    }
    best.ok_or(HarnessError::NoXClause)
}

/// Plain resolvent on a T pivot; merged results of either kind are illegal
/// (pivots in T sit right of every universal, so the long-distance side
/// condition can never hold).
fn t_resolvent(a: &Constraint, b: &Constraint, pivot: Variable) -> Option<Constraint> {
    let mut occs: Vec<(Variable, Occ)> = Vec::new();
    let mut vars: Vec<Variable> = a.vars().chain(b.vars()).filter(|&v| v != pivot).collect();
    vars.sort();
    vars.dedup();
    for v in vars {
        let occ = match (a.occ(v), b.occ(v)) {
            (Some(x), None) | (None, Some(x)) => x,
            (Some(x), Some(y)) if x == y => x,
            _ => return None,
        };
        if occ == Occ::Both {
            return None;
        }
        occs.push((v, occ));
    }
    Some(Constraint::from_occs(ConstraintKind::Clause, occs))
}

/// Seeded random PCNF: uniform prefix with 2..=4 blocks, clause width 2..=4,
/// tautological clauses rejected by resampling.
pub fn random_pcnf(seed: u64, max_vars: u32, max_clauses: u32) -> PCNF {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = rng.gen_range(4..=max_vars.max(4));
    let nclauses = rng.gen_range(2..=max_clauses.max(2));
    let nblocks = rng.gen_range(2..=4u32).min(nvars);
    // block boundaries: split 1..=nvars into nblocks runs
    let mut cuts: Vec<u32> = (1..nvars).collect();
    for i in (1..cuts.len()).rev() {
        let j = rng.gen_range(0..=i);
        cuts.swap(i, j);
    }
    let mut cuts: Vec<u32> = cuts.into_iter().take(nblocks as usize - 1).collect();
    cuts.sort_unstable();
    cuts.push(nvars);
    let first_quant = if rng.gen_bool(0.5) { Quant::Exists } else { Quant::Forall };
    let mut order = Vec::new();
    let mut start = 1u32;
    let mut q = first_quant;
    for cut in cuts {
        for v in start..=cut {
            order.push((Variable::new(v), q));
        }
        start = cut + 1;
        q = q.flip();
    }
    let prefix = Prefix::new(order).unwrap();
    let mut matrix = Vec::new();
    for _ in 0..nclauses {
        loop {
            let width = rng.gen_range(2..=4u32).min(nvars);
            let lits: Vec<Literal> = (0..width)
                .map(|_| {
                    let v = Variable::new(rng.gen_range(1..=nvars));
                    Literal::new(v, rng.gen_bool(0.5))
                })
                .collect();
            let c = Constraint::clause(lits.clone());
            if c.width() == width as usize {
                matrix.push(c);
                break;
            }
        }
    }
    PCNF::new(prefix, matrix).unwrap()
}

/// One cell of the separation experiment grid.
#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub family: String,
    pub n: u32,
    pub config: SolverConfig,
    pub verdict: Verdict,
    pub triples: usize,
    pub literals: usize,
    pub ms: u128,
    pub seed: u64,
}

pub const CSV_HEADER: &str = "family,n,ord,clause_dep,cube,pre,pick,verdict,triples,literals,ms,seed";

impl ExperimentRow {
    pub fn csv_line(&self) -> String {
        let ord = match self.config.ord {
            OrdPolicy::Lev => "lev".to_string(),
            OrdPolicy::Dep(t) => format!("dep:{}", t.name()),
            OrdPolicy::Any => "any".to_string(),
        };
        let cube = match self.config.cube {
            CubeConfig::NoCube => "none",
            CubeConfig::CubeLd => "ld",
            CubeConfig::CubeDep => "dep",
        };
        let pre = self.config.preprocess.map_or("none", |t| t.name());
        let pick = match self.config.pick {
            Pick::Last => "last",
            Pick::FirstNew => "first-new",
            Pick::Scripted => "scripted",
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.n,
            ord,
            self.config.clause_dep.name(),
            cube,
            pre,
            pick,
            self.verdict,
            self.triples,
            self.literals,
            self.ms,
            self.seed
        )
    }
}

fn trace_literals(trace: &DerivationTrace) -> usize {
    trace.triples.iter().map(|t| t.trail.lits().count()).sum()
}

/// Runs every grid cell; UNKNOWN rows are retained. Cells run concurrently.
pub fn run_separation_suite(grid: &[(FamilySpec, SolverConfig)]) -> Vec<ExperimentRow> {
    let results: Vec<std::sync::Mutex<Option<ExperimentRow>>> =
        grid.iter().map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(4, |p| p.get()).min(grid.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= grid.len() {
                    break;
                }
                let (spec, cfg) = grid[i];
                let f = generate(spec);
                let start = Instant::now();
                // scripted cells measure the proof system, not the search:
                // they replay the matching corpus refutation
                let outcome = if cfg.pick == Pick::Scripted {
                    paper_corpus(spec.n)
                        .into_iter()
                        .find(|e| e.spec == spec && e.config == cfg)
                        .and_then(|e| replay_script(&f, &cfg, &e.script).ok())
                } else {
                    solve(&f, &cfg).ok()
                };
                let (verdict, triples, literals) = match outcome {
                    Some(trace) => (trace.verdict, trace.triples.len(), trace_literals(&trace)),
                    None => (Verdict::Unknown, 0, 0),
                };
                *results[i].lock().unwrap() = Some(ExperimentRow {
                    family: spec.family.name().to_string(),
                    n: spec.n,
                    config: cfg,
                    verdict,
                    triples,
                    literals,
                    ms: start.elapsed().as_millis(),
                    seed: 0,
                });
            });
        }
    });
    results.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// The full 36-cell policy grid used by the soundness sweep.
pub fn full_config_grid(step_limit: usize) -> Vec<SolverConfig> {
    let mut out = Vec::new();
    for ord in [
        OrdPolicy::Lev,
        OrdPolicy::Dep(SchemeTag::Std),
        OrdPolicy::Dep(SchemeTag::Rrs),
        OrdPolicy::Any,
    ] {
        for clause_dep in [SchemeTag::Trv, SchemeTag::Std, SchemeTag::Rrs] {
            for cube in [CubeConfig::NoCube, CubeConfig::CubeLd, CubeConfig::CubeDep] {
                out.push(SolverConfig {
                    ord,
                    clause_dep,
                    cube,
                    preprocess: None,
                    pick: Pick::FirstNew,
                    value: ValueHeuristic::FalseFirst,
                    step_limit,
                });
            }
        }
    }
    out
}

/// An expected trail entry for corpus comparison: decision flag, literal,
/// and, for propagations, the antecedent clause or cube.
#[derive(Clone, Debug)]
pub struct ExpectedEntry {
    pub decision: bool,
    pub lit: Literal,
    pub ante: Option<Constraint>,
}

#[derive(Clone, Debug)]
pub struct ExpectedTrail {
    pub entries: Vec<ExpectedEntry>,
    pub conflict_ante: Option<Constraint>,
}

/// One scripted refutation from the literature, with its expected shape.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: FamilySpec,
    pub config: SolverConfig,
    pub script: Script,
    pub expected_learnt: Vec<Constraint>,
    pub expected_verdict: Verdict,
    /// Exact expected trails where the source displays them.
    pub expected_trails: Option<Vec<ExpectedTrail>>,
}

fn lit(v: u32, positive: bool) -> Literal {
    Literal::new(Variable::new(v), positive)
}

fn pos(v: u32) -> Literal {
    lit(v, true)
}

fn neg(v: u32) -> Literal {
    lit(v, false)
}

fn clause(lits: impl IntoIterator<Item = Literal>) -> Constraint {
    Constraint::clause(lits)
}

fn cube(lits: impl IntoIterator<Item = Literal>) -> Constraint {
    Constraint::cube(lits)
}

fn scripted(ord: OrdPolicy, clause_dep: SchemeTag, cube: CubeConfig, pre: Option<SchemeTag>) -> SolverConfig {
    SolverConfig {
        ord,
        clause_dep,
        cube,
        preprocess: pre,
        pick: Pick::Scripted,
        value: ValueHeuristic::FalseFirst,
        step_limit: 1_000_000,
    }
}

fn pick(c: Constraint) -> ScriptPick {
    ScriptPick::Constraint(c)
}

/// Machine-readable scripts for every explicit refutation displayed in the
/// source material, each with expected trails and learnt constraints.
pub fn paper_corpus(n: u32) -> Vec<CorpusEntry> {
    assert!(n >= 2, "corpus scripts assume n >= 2");
    vec![
        corpus_two_php_rrs(n),
        corpus_two_php_std_learning(n),
        corpus_std_dep_trap(n),
        corpus_pre_rrs_trapdoor(n),
        corpus_double_long_eq(n),
    ]
}

fn corpus_two_php_rrs(n: u32) -> CorpusEntry {
    let v = TwoPhpVars { n };
    let (vv, z1, z2) = (v.v(), v.z1(), v.z2());
    let script = Script {
        trails: vec![
            TrailScript {
                decisions: vec![neg(vv), pos(z1)],
                pick: pick(clause([neg(z1)])),
                subset: None,
            },
            TrailScript { decisions: vec![], pick: pick(clause([])), subset: None },
        ],
    };
    let expected_trails = vec![
        ExpectedTrail {
            entries: vec![
                ExpectedEntry { decision: true, lit: neg(vv), ante: None },
                ExpectedEntry { decision: true, lit: pos(z1), ante: None },
                ExpectedEntry {
                    decision: false,
                    lit: pos(z2),
                    ante: Some(clause([pos(vv), neg(z1), pos(z2)])),
                },
            ],
            conflict_ante: Some(clause([pos(vv), neg(z1), neg(z2)])),
        },
        ExpectedTrail {
            entries: vec![
                ExpectedEntry { decision: false, lit: neg(z1), ante: Some(clause([neg(z1)])) },
                ExpectedEntry {
                    decision: false,
                    lit: pos(z2),
                    ante: Some(clause([pos(vv), pos(z1), pos(z2)])),
                },
            ],
            conflict_ante: Some(clause([pos(vv), pos(z1), neg(z2)])),
        },
    ];
    CorpusEntry {
        name: format!("two_php_and_ct:{n} D-ORD(rrs) + rrs learning"),
        spec: FamilySpec::new(Family::TwoPhpAndCt, n),
        config: scripted(OrdPolicy::Dep(SchemeTag::Rrs), SchemeTag::Rrs, CubeConfig::NoCube, None),
        script,
        expected_learnt: vec![clause([neg(z1)]), clause([])],
        expected_verdict: Verdict::False,
        expected_trails: Some(expected_trails),
    }
}

fn corpus_two_php_std_learning(n: u32) -> CorpusEntry {
    let v = TwoPhpVars { n };
    let (vv, z1, z2) = (v.v(), v.z1(), v.z2());
    let script = Script {
        trails: vec![
            TrailScript {
                decisions: vec![neg(vv), pos(z1)],
                pick: pick(clause([pos(vv), neg(z1)])),
                subset: None,
            },
            TrailScript {
                decisions: vec![neg(vv)],
                pick: pick(clause([])),
                subset: None,
            },
        ],
    };
    let expected_trails = vec![
        ExpectedTrail {
            entries: vec![
                ExpectedEntry { decision: true, lit: neg(vv), ante: None },
                ExpectedEntry { decision: true, lit: pos(z1), ante: None },
                ExpectedEntry {
                    decision: false,
                    lit: pos(z2),
                    ante: Some(clause([pos(vv), neg(z1), pos(z2)])),
                },
            ],
            conflict_ante: Some(clause([pos(vv), neg(z1), neg(z2)])),
        },
        ExpectedTrail {
            entries: vec![
                ExpectedEntry { decision: true, lit: neg(vv), ante: None },
                ExpectedEntry {
                    decision: false,
                    lit: neg(z1),
                    ante: Some(clause([pos(vv), neg(z1)])),
                },
                ExpectedEntry {
                    decision: false,
                    lit: pos(z2),
                    ante: Some(clause([pos(vv), pos(z1), pos(z2)])),
                },
            ],
            conflict_ante: Some(clause([pos(vv), pos(z1), neg(z2)])),
        },
    ];
    CorpusEntry {
        name: format!("two_php_and_ct:{n} D-ORD(rrs) + std learning"),
        spec: FamilySpec::new(Family::TwoPhpAndCt, n),
        config: scripted(OrdPolicy::Dep(SchemeTag::Rrs), SchemeTag::Std, CubeConfig::NoCube, None),
        script,
        expected_learnt: vec![clause([pos(vv), neg(z1)]), clause([])],
        expected_verdict: Verdict::False,
        expected_trails: Some(expected_trails),
    }
}

fn corpus_std_dep_trap(n: u32) -> CorpusEntry {
    let v = StdDepTrapVars { n };
    let script = Script {
        trails: vec![
            TrailScript {
                decisions: vec![neg(v.b())],
                pick: pick(clause([neg(v.y())])),
                subset: None,
            },
            TrailScript { decisions: vec![], pick: pick(clause([])), subset: None },
        ],
    };
    let expected_trails = vec![
        ExpectedTrail {
            entries: vec![
                ExpectedEntry { decision: true, lit: neg(v.b()), ante: None },
                ExpectedEntry {
                    decision: false,
                    lit: pos(v.y()),
                    ante: Some(clause([pos(v.b()), pos(v.y())])),
                },
                ExpectedEntry {
                    decision: false,
                    lit: pos(v.a()),
                    ante: Some(clause([pos(v.a()), neg(v.y())])),
                },
                ExpectedEntry {
                    decision: false,
                    lit: pos(v.x()),
                    ante: Some(clause([neg(v.a()), pos(v.x())])),
                },
                ExpectedEntry {
                    decision: false,
                    lit: neg(v.c()),
                    ante: Some(clause([neg(v.c()), pos(v.u()), neg(v.x())])),
                },
                ExpectedEntry {
                    decision: false,
                    lit: pos(v.d()),
                    ante: Some(clause([pos(v.d()), pos(v.c()), neg(v.y())])),
                },
            ],
            conflict_ante: Some(clause([neg(v.d()), pos(v.c()), neg(v.y())])),
        },
        ExpectedTrail {
            entries: vec![
                ExpectedEntry { decision: false, lit: neg(v.y()), ante: Some(clause([neg(v.y())])) },
                ExpectedEntry {
                    decision: false,
                    lit: pos(v.p()),
                    ante: Some(clause([pos(v.y()), pos(v.p())])),
                },
            ],
            conflict_ante: Some(clause([pos(v.y()), neg(v.p())])),
        },
    ];
    CorpusEntry {
        name: format!("std_dep_trap:{n} LEV-ORD + std learning"),
        spec: FamilySpec::new(Family::StdDepTrap, n),
        config: scripted(OrdPolicy::Lev, SchemeTag::Std, CubeConfig::NoCube, None),
        script,
        expected_learnt: vec![clause([neg(v.y())]), clause([])],
        expected_verdict: Verdict::False,
        expected_trails: Some(expected_trails),
    }
}

fn corpus_pre_rrs_trapdoor(n: u32) -> CorpusEntry {
    let v = PreRrsVars { n };
    let (a, p, y1, vv, t, b, q, s) = (v.a(), v.p(), v.y(1), v.v(), v.t(), v.b(), v.q(), v.s());
    // antecedents in the preprocessed formula: every w literal is gone
    let t_clause = |y_pos: bool, t_pos: bool| {
        clause([lit(y1, y_pos), pos(vv), lit(t, t_pos), pos(b)])
    };
    let script = Script {
        trails: vec![
            TrailScript {
                decisions: vec![pos(a), pos(p), pos(y1)],
                pick: pick(clause([neg(a), neg(y1)])),
                subset: None,
            },
            TrailScript {
                decisions: vec![neg(a), pos(p), neg(y1)],
                pick: pick(clause([pos(a), pos(y1)])),
                subset: None,
            },
            TrailScript {
                decisions: vec![pos(a)],
                pick: pick(clause([neg(a)])),
                subset: None,
            },
            TrailScript { decisions: vec![], pick: pick(clause([])), subset: None },
        ],
    };
    let prop = |l: Literal, ante: Constraint| ExpectedEntry { decision: false, lit: l, ante: Some(ante) };
    let dec = |l: Literal| ExpectedEntry { decision: true, lit: l, ante: None };
    let expected_trails = vec![
        ExpectedTrail {
            entries: vec![
                dec(pos(a)),
                prop(neg(b), clause([neg(a), neg(b)])),
                prop(pos(s), clause([neg(vv), pos(b), pos(s)])),
                dec(pos(p)),
                prop(neg(q), clause([neg(p), neg(q)])),
                dec(pos(y1)),
                prop(pos(t), t_clause(false, true)),
            ],
            conflict_ante: Some(t_clause(false, false)),
        },
        ExpectedTrail {
            entries: vec![
                dec(neg(a)),
                prop(neg(b), clause([pos(a), neg(b)])),
                prop(pos(s), clause([neg(vv), pos(b), pos(s)])),
                dec(pos(p)),
                prop(neg(q), clause([neg(p), neg(q)])),
                dec(neg(y1)),
                prop(pos(t), t_clause(true, true)),
            ],
            conflict_ante: Some(t_clause(true, false)),
        },
        ExpectedTrail {
            entries: vec![
                dec(pos(a)),
                prop(neg(b), clause([neg(a), neg(b)])),
                prop(pos(s), clause([neg(vv), pos(b), pos(s)])),
                prop(neg(y1), clause([neg(a), neg(y1)])),
                prop(pos(t), t_clause(true, true)),
            ],
            conflict_ante: Some(t_clause(true, false)),
        },
        ExpectedTrail {
            entries: vec![
                prop(neg(a), clause([neg(a)])),
                prop(neg(b), clause([pos(a), neg(b)])),
                prop(pos(s), clause([neg(vv), pos(b), pos(s)])),
                prop(pos(y1), clause([pos(a), pos(y1)])),
                prop(pos(t), t_clause(false, true)),
            ],
            conflict_ante: Some(t_clause(false, false)),
        },
    ];
    CorpusEntry {
        name: format!("pre_rrs_trapdoor:{n} rrs-preprocessed + rrs propagation"),
        spec: FamilySpec::new(Family::PreRrsTrapdoor, n),
        config: scripted(OrdPolicy::Lev, SchemeTag::Rrs, CubeConfig::NoCube, Some(SchemeTag::Rrs)),
        script,
        expected_learnt: vec![
            clause([neg(a), neg(y1)]),
            clause([pos(a), pos(y1)]),
            clause([neg(a)]),
            clause([]),
        ],
        expected_verdict: Verdict::False,
        expected_trails: Some(expected_trails),
    }
}

/// The cube-learning refutation: 2(n-1) satisfaction trails learning the
/// cubes x_i ∧ ū_i and x̄_i ∧ u_i, then clause trails learning L_i and R_i
/// down to the empty clause — 4n-4 triples in total.
fn corpus_double_long_eq(n: u32) -> CorpusEntry {
    let v = EqVars { n };
    let mut trails = Vec::new();
    let mut expected_learnt = Vec::new();
    // stage 1: satisfaction trails
    for i in 1..n {
        for flip in [false, true] {
            let sign = |l: Literal| if flip { l.negate() } else { l };
            let mut decisions: Vec<Literal> = (1..=n).map(|j| sign(pos(v.x(j)))).collect();
            decisions.extend((i..=n).map(|j| sign(neg(v.u(j)))));
            decisions.push(neg(v.t(i)));
            decisions.extend((i + 1..=n).map(|j| pos(v.t(j))));
            if flip && i == 1 && n == 2 {
                // in the complementary first trail every u is positive, so
                // for n = 2 the all-positive-t clause goes unit after the
                // single negative t decision and propagates t_2 itself
                decisions.pop();
            }
            let mut subset = vec![sign(pos(v.x(i))), sign(neg(v.u(i)))];
            subset.extend((1..i).map(|j| pos(v.t(j))));
            subset.push(neg(v.t(i)));
            subset.extend((i + 1..=n).map(|j| pos(v.t(j))));
            let learnt = cube([sign(pos(v.x(i))), sign(neg(v.u(i)))]);
            trails.push(TrailScript {
                decisions,
                pick: pick(learnt.clone()),
                subset: Some(subset),
            });
            expected_learnt.push(learnt);
        }
    }
    // stage 2: clause trails U_i, V_i for i = n-1 down to 1
    let l_clause = |i: u32| -> Constraint {
        // L_i = ¬x_i ∨ ¬u_i ∨ (u_j ∨ ¬u_j for j > i) ∨ (¬t_1..¬t_{i-1})
        let mut lits = vec![neg(v.x(i)), neg(v.u(i))];
        for j in i + 1..=n {
            lits.push(pos(v.u(j)));
            lits.push(neg(v.u(j)));
        }
        lits.extend((1..i).map(|j| neg(v.t(j))));
        clause(lits)
    };
    let r_clause = |i: u32| -> Constraint {
        let mut lits = vec![pos(v.x(i)), pos(v.u(i))];
        for j in i + 1..=n {
            lits.push(pos(v.u(j)));
            lits.push(neg(v.u(j)));
        }
        lits.extend((1..i).map(|j| neg(v.t(j))));
        clause(lits)
    };
    for i in (1..n).rev() {
        let learnt_l = if i == 1 { clause([neg(v.x(1))]) } else { l_clause(i) };
        trails.push(TrailScript {
            decisions: (1..=i).map(|j| pos(v.x(j))).collect(),
            pick: pick(learnt_l.clone()),
            subset: None,
        });
        expected_learnt.push(learnt_l);
        let learnt_r = if i == 1 { clause([]) } else { r_clause(i) };
        // in V_i the freshly learnt L_i forces ¬x_i once the first i-1
        // groups are assigned, so only i-1 decisions remain
        let decisions = (1..i).map(|j| neg(v.x(j))).collect();
        trails.push(TrailScript { decisions, pick: pick(learnt_r.clone()), subset: None });
        expected_learnt.push(learnt_r);
    }
    CorpusEntry {
        name: format!("double_long_eq:{n} LEV-ORD + cube learning"),
        spec: FamilySpec::new(Family::DoubleLongEq, n),
        config: scripted(OrdPolicy::Lev, SchemeTag::Trv, CubeConfig::CubeLd, None),
        script: Script { trails },
        expected_learnt,
        expected_verdict: Verdict::False,
        expected_trails: None,
    }
}

/// Replays a corpus entry and checks it against the expected shape; the
/// returned trace has already been compared triple by triple.
pub fn run_corpus_entry(entry: &CorpusEntry) -> Result<DerivationTrace, String> {
    let f = generate(entry.spec);
    let trace = replay_script(&f, &entry.config, &entry.script)
        .map_err(|e| format!("{}: replay failed: {e}", entry.name))?;
    if trace.verdict != entry.expected_verdict {
        return Err(format!(
            "{}: verdict {} instead of {}",
            entry.name, trace.verdict, entry.expected_verdict
        ));
    }
    if trace.triples.len() != entry.expected_learnt.len() {
        return Err(format!(
            "{}: {} triples instead of {}",
            entry.name,
            trace.triples.len(),
            entry.expected_learnt.len()
        ));
    }
    for (i, (triple, expected)) in
        trace.triples.iter().zip(entry.expected_learnt.iter()).enumerate()
    {
        if &triple.learnt != expected {
            return Err(format!(
                "{}: triple {} learns {} instead of {}",
                entry.name,
                i + 1,
                triple.learnt,
                expected
            ));
        }
    }
    if let Some(expected_trails) = &entry.expected_trails {
        let session = crate::solver::Session::prepare(&f, &entry.config);
        let mut state = session.state;
        for (ti, (triple, exp)) in trace.triples.iter().zip(expected_trails.iter()).enumerate() {
            let entries = &triple.trail.entries;
            if entries.len() != exp.entries.len() + 1 {
                return Err(format!(
                    "{}: trail {} has {} entries, expected {}",
                    entry.name,
                    ti + 1,
                    entries.len(),
                    exp.entries.len() + 1
                ));
            }
            for (j, (got, want)) in entries.iter().zip(exp.entries.iter()).enumerate() {
                let ok = match got {
                    TrailEntry::Decision(l) => want.decision && *l == want.lit,
                    TrailEntry::Propagated { lit, ante } => {
                        !want.decision
                            && *lit == want.lit
                            && want.ante.as_ref().map_or(true, |c| state.constraint(*ante) == c)
                    }
                    TrailEntry::Conflict { .. } => false,
                };
                if !ok {
                    return Err(format!(
                        "{}: trail {} entry {} is {:?}, expected {:?} {} {:?}",
                        entry.name,
                        ti + 1,
                        j + 1,
                        got,
                        if want.decision { "decision" } else { "propagation" },
                        want.lit,
                        want.ante.as_ref().map(|c| c.to_text()),
                    ));
                }
            }
            if let Some(TrailEntry::Conflict { ante }) = entries.last() {
                if let Some(want) = &exp.conflict_ante {
                    if state.constraint(*ante) != want {
                        return Err(format!(
                            "{}: trail {} conflict antecedent {} instead of {}",
                            entry.name,
                            ti + 1,
                            state.constraint(*ante),
                            want
                        ));
                    }
                }
            } else {
                return Err(format!("{}: trail {} does not end in a conflict", entry.name, ti + 1));
            }
            state.learn(triple.learnt.clone());
        }
    }
    Ok(trace)
}

/// A single corruption of a valid trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationKind {
    FlipPropagatedLit,
    DropFinalReduce,
    SwapDecisions,
    DeleteUniversalFromLearnt,
    SwapLearntAcrossTriples,
}

/// Enumerates single corruptions of a valid trace. Every emitted mutant is a
/// genuine corruption: flipped propagations contradict their antecedent,
/// decision swaps cross prefix blocks under the level-order policy, dropped
/// reductions desynchronize the derivation from the learnt constraint, and
/// learnt-constraint edits break learnability or the derivation target.
pub fn mutate_trace(
    f: &PCNF,
    cfg: &SolverConfig,
    trace: &DerivationTrace,
) -> Vec<(MutationKind, DerivationTrace)> {
    let prefix = &f.prefix;
    let mut out = Vec::new();
    for (ti, triple) in trace.triples.iter().enumerate() {
        // flip each propagated literal
        for (ei, e) in triple.trail.entries.iter().enumerate() {
            if let TrailEntry::Propagated { lit, ante } = e {
                let mut m = trace.clone();
                m.triples[ti].trail.entries[ei] =
                    TrailEntry::Propagated { lit: lit.negate(), ante: *ante };
                out.push((MutationKind::FlipPropagatedLit, m));
            }
        }
        // drop the final reduce step if the derivation ends in one
        if let Some(Step::Reduce { .. }) = triple.derivation.steps.last() {
            let mut m = trace.clone();
            m.triples[ti].derivation.steps.pop();
            out.push((MutationKind::DropFinalReduce, m));
        }
        // under level order, swap two decisions from different blocks
        if cfg.ord == OrdPolicy::Lev {
            let decisions: Vec<(usize, Literal)> = triple
                .trail
                .entries
                .iter()
                .enumerate()
                .filter_map(|(i, e)| match e {
                    TrailEntry::Decision(l) => Some((i, *l)),
                    _ => None,
                })
                .collect();
            if let Some(((i, li), (j, lj))) = decisions
                .iter()
                .zip(decisions.iter().skip(1))
                .find(|((_, a), (_, b))| prefix.block(a.var()) != prefix.block(b.var()))
                .map(|(&a, &b)| (a, b))
            {
                let mut m = trace.clone();
                m.triples[ti].trail.entries[i] = TrailEntry::Decision(lj);
                m.triples[ti].trail.entries[j] = TrailEntry::Decision(li);
                out.push((MutationKind::SwapDecisions, m));
            }
        }
        // delete a literal from the learnt constraint, universal first
        let target = triple
            .learnt
            .occs()
            .iter()
            .find(|&&(v, _)| prefix.is_universal(v))
            .or_else(|| triple.learnt.occs().first())
            .map(|&(v, _)| v);
        if let Some(uv) = target {
            let mut m = trace.clone();
            m.triples[ti].learnt = triple.learnt.without_var(uv);
            out.push((MutationKind::DeleteUniversalFromLearnt, m));
        }
    }
    // swap learnt constraints (with their derivations) between consecutive
    // same-kind triples
    for ti in 0..trace.triples.len().saturating_sub(1) {
        let a = &trace.triples[ti];
        let b = &trace.triples[ti + 1];
        if a.learnt.kind() == b.learnt.kind() && a.learnt != b.learnt {
            let mut m = trace.clone();
            m.triples[ti].learnt = b.learnt.clone();
            m.triples[ti].derivation = b.derivation.clone();
            m.triples[ti + 1].learnt = a.learnt.clone();
            m.triples[ti + 1].derivation = a.derivation.clone();
            out.push((MutationKind::SwapLearntAcrossTriples, m));
        }
    }
    out
}

/// Convenience: heuristic hardness measurements for the growth checks.
pub fn heuristic_triples(spec: FamilySpec, cfg: &SolverConfig) -> Result<usize, SolveError> {
    let f = generate(spec);
    let trace = solve(&f, cfg)?;
    match trace.verdict {
        Verdict::Unknown => Ok(usize::MAX),
        _ => Ok(trace.triples.len()),
    }
}

/// A default separation grid over the named families: the hard cells search
/// heuristically, the easy cells replay the corpus refutations.
pub fn default_grid() -> Vec<(FamilySpec, SolverConfig)> {
    let mut grid = Vec::new();
    let corpus = paper_corpus(2);
    let cfg_of = |name_prefix: &str| {
        corpus
            .iter()
            .find(|e| e.name.starts_with(name_prefix))
            .expect("corpus entry")
            .config
    };
    let std_easy = cfg_of("std_dep_trap");
    let two_php_easy = cfg_of("two_php_and_ct:2 D-ORD(rrs) + rrs");
    for n in 2..=4 {
        grid.push((FamilySpec::new(Family::StdDepTrap, n), std_easy));
        grid.push((
            FamilySpec::new(Family::StdDepTrap, n),
            SolverConfig { step_limit: 50_000, ..SolverConfig::default() },
        ));
        grid.push((FamilySpec::new(Family::TwoPhpAndCt, n), two_php_easy));
        grid.push((
            FamilySpec::new(Family::TwoPhpAndCt, n),
            SolverConfig {
                clause_dep: SchemeTag::Rrs,
                step_limit: 50_000,
                ..SolverConfig::default()
            },
        ));
    }
    grid
}

pub fn sn_of(n: u32) -> u32 {
    s_n(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::parse_qdimacs;

    #[test]
    fn brute_force_tiny_hand_cases() {
        // ∀u ∃t: (u∨t)(¬u∨¬t): t = ¬u works: true
        let f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n").unwrap();
        assert_eq!(brute_force_eval(&f), Ok(true));
        // ∃t ∀u: (u∨t)(¬u∨¬t): t fixed before u: false
        let f = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n2 1 0\n-2 -1 0\n").unwrap();
        assert_eq!(brute_force_eval(&f), Ok(false));
        // php(1) is an unsatisfiable existential formula
        let f = generate(FamilySpec::new(Family::Php, 1));
        assert_eq!(brute_force_eval(&f), Ok(false));
        // double_long_eq(1) is false
        let f = generate(FamilySpec::new(Family::DoubleLongEq, 1));
        assert_eq!(brute_force_eval(&f), Ok(false));
    }

    #[test]
    fn brute_force_guard() {
        let f = generate(FamilySpec::new(Family::TwoPhpAndCt, 3));
        assert!(matches!(brute_force_eval(&f), Err(HarnessError::SizeGuard { .. })));
        assert_eq!(brute_force_eval_with_guard(&f, 40), Ok(false));
    }

    #[test]
    fn gauge_rejects_non_xut() {
        let f = generate(FamilySpec::new(Family::Php, 1));
        assert_eq!(compute_gauge(&f, GAUGE_BUDGET), Err(HarnessError::NotXut));
    }

    #[test]
    fn gauge_finds_existing_x_clause() {
        // ∃x ∀u ∃t with an X-clause {x} already present
        let f = parse_qdimacs("p cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 0\n2 3 0\n").unwrap();
        assert_eq!(compute_gauge(&f, GAUGE_BUDGET), Ok(1));
    }

    #[test]
    fn random_pcnf_is_reproducible_and_valid() {
        let a = random_pcnf(7, 12, 20);
        let b = random_pcnf(7, 12, 20);
        assert_eq!(a, b);
        assert!(a.validate().is_ok());
        let blocks = a.prefix.blocks().len();
        assert!((2..=4).contains(&blocks));
        for c in &a.matrix {
            assert!((2..=4).contains(&c.width()));
        }
    }

    #[test]
    fn csv_header_matches_schema() {
        assert_eq!(
            CSV_HEADER,
            "family,n,ord,clause_dep,cube,pre,pick,verdict,triples,literals,ms,seed"
        );
        let rows = run_separation_suite(&[]);
        assert_eq!(rows_to_csv(&rows), format!("{CSV_HEADER}\n"));
    }
}
