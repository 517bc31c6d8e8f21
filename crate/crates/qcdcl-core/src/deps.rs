//! Dependency schemes: the trivial scheme, the standard scheme, and the
//! reflexive resolution path scheme, plus the dependency-aware reductions
//! `red-D` (clauses) and `red-D∃` (cubes) and whole-formula preprocessing.
//!
//! A relation holds pairs `(x, y)` meaning "y may depend on x". Clause
//! reduction consults the universal-to-existential part; cube reduction
//! consults the existential-to-universal part. Both parts are computed by the
//! same path search, run from left endpoints of the respective kind. The
//! connector condition follows the schemes' prose reading: connectors are
//! existential variables quantified strictly right of the pair's left
//! endpoint.

use std::collections::HashSet;

use crate::qbf::{Constraint, ConstraintKind, Occ, Prefix, Quant, Variable, PCNF};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SchemeTag {
    Trv,
    Std,
    Rrs,
}

impl SchemeTag {
    pub fn name(self) -> &'static str {
        match self {
            SchemeTag::Trv => "trv",
            SchemeTag::Std => "std",
            SchemeTag::Rrs => "rrs",
        }
    }
}

/// A per-formula dependency relation.
#[derive(Clone, Debug)]
pub struct DepRelation {
    scheme: SchemeTag,
    /// (u, e): existential e may depend on universal u. Drives `red-D`.
    clause_pairs: HashSet<(Variable, Variable)>,
    /// (e, u): universal u may depend on existential e. Drives `red-D∃`.
    cube_pairs: HashSet<(Variable, Variable)>,
}

impl DepRelation {
    pub fn scheme(&self) -> SchemeTag {
        self.scheme
    }

    /// True iff y may depend on x (either direction).
    pub fn contains(&self, x: Variable, y: Variable) -> bool {
        self.clause_pairs.contains(&(x, y)) || self.cube_pairs.contains(&(x, y))
    }

    pub fn blocks_clause_reduction(&self, u: Variable, e: Variable) -> bool {
        self.clause_pairs.contains(&(u, e))
    }

    pub fn blocks_cube_reduction(&self, e: Variable, u: Variable) -> bool {
        self.cube_pairs.contains(&(e, u))
    }

    /// The universal-to-existential pairs, sorted. This is the set the
    /// formula families' dependency fingerprints are stated over.
    pub fn universal_pairs(&self) -> Vec<(Variable, Variable)> {
        let mut v: Vec<_> = self.clause_pairs.iter().copied().collect();
        v.sort();
        v
    }

    pub fn existential_pairs(&self) -> Vec<(Variable, Variable)> {
        let mut v: Vec<_> = self.cube_pairs.iter().copied().collect();
        v.sort();
        v
    }

    /// All pairs, sorted lexicographically.
    pub fn pairs(&self) -> Vec<(Variable, Variable)> {
        let mut v: Vec<_> = self
            .clause_pairs
            .iter()
            .chain(self.cube_pairs.iter())
            .copied()
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn is_subset_of(&self, other: &DepRelation) -> bool {
        self.clause_pairs.is_subset(&other.clause_pairs)
            && self.cube_pairs.is_subset(&other.cube_pairs)
    }

    /// Dump format: one `d <x> <y>` line per pair, sorted.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (x, y) in self.pairs() {
            out.push_str(&format!("d {} {}\n", x.id(), y.id()));
        }
        out
    }
}

/// D^trv: all pairs (x, y) with y quantified after, and differently from, x.
pub fn compute_dtrv(f: &PCNF) -> DepRelation {
    let p = &f.prefix;
    let mut clause_pairs = HashSet::new();
    let mut cube_pairs = HashSet::new();
    for x in p.vars() {
        for y in p.vars() {
            if p.position(y) > p.position(x) && p.quant(x) != p.quant(y) {
                match p.quant(x) {
                    Quant::Forall => clause_pairs.insert((x, y)),
                    Quant::Exists => cube_pairs.insert((x, y)),
                };
            }
        }
    }
    DepRelation { scheme: SchemeTag::Trv, clause_pairs, cube_pairs }
}

fn trv_pair(p: &Prefix, x: Variable, y: Variable) -> bool {
    p.position(y) > p.position(x) && p.quant(x) != p.quant(y)
}

/// D^std: (x, y) is in iff (x, y) is a trivial pair and some clause sequence
/// links an x-clause to a y-clause, consecutive clauses sharing an existential
/// connector variable right of x. Polarities are ignored.
pub fn compute_dstd(f: &PCNF) -> DepRelation {
    let p = &f.prefix;
    let mut clause_pairs = HashSet::new();
    let mut cube_pairs = HashSet::new();
    for x in p.vars() {
        let reach = std_reachable_clauses(f, x);
        for (ci, hit) in reach.iter().enumerate() {
            if !hit {
                continue;
            }
            for y in f.matrix[ci].vars() {
                if trv_pair(p, x, y) {
                    match p.quant(x) {
                        Quant::Forall => clause_pairs.insert((x, y)),
                        Quant::Exists => cube_pairs.insert((x, y)),
                    };
                }
            }
        }
    }
    DepRelation { scheme: SchemeTag::Std, clause_pairs, cube_pairs }
}

/// Clause-level BFS from all clauses mentioning x over existential connector
/// variables strictly right of x.
fn std_reachable_clauses(f: &PCNF, x: Variable) -> Vec<bool> {
    let p = &f.prefix;
    let m = f.matrix.len();
    let mut reach = vec![false; m];
    let mut queue: Vec<usize> = Vec::new();
    for (ci, c) in f.matrix.iter().enumerate() {
        if c.occ(x).is_some() {
            reach[ci] = true;
            queue.push(ci);
        }
    }
    let connector = |v: Variable| p.is_existential(v) && p.position(v) > p.position(x);
    while let Some(ci) = queue.pop() {
        for v in f.matrix[ci].vars() {
            if !connector(v) {
                continue;
            }
            for (cj, c) in f.matrix.iter().enumerate() {
                if !reach[cj] && c.occ(v).is_some() {
                    reach[cj] = true;
                    queue.push(cj);
                }
            }
        }
    }
    reach
}

/// D^rrs: (x, y) is in iff (x, y) is a trivial pair and either both (x, y)
/// and (¬x, ¬y), or both (x, ¬y) and (¬x, y), are connected by resolution
/// paths: consecutive clauses linked by an existential connector occurring in
/// opposite polarities, connectors right of x, entry and exit literal of each
/// clause on distinct variables.
pub fn compute_drrs(f: &PCNF) -> DepRelation {
    let p = &f.prefix;
    let mut clause_pairs = HashSet::new();
    let mut cube_pairs = HashSet::new();
    for x in p.vars() {
        let pos_targets = rrs_connected_lits(f, crate::qbf::Literal::positive(x));
        let neg_targets = rrs_connected_lits(f, crate::qbf::Literal::negative(x));
        for y in p.vars() {
            if !trv_pair(p, x, y) {
                continue;
            }
            let yp = crate::qbf::Literal::positive(y);
            let yn = crate::qbf::Literal::negative(y);
            let same = pos_targets.contains(&yp) && neg_targets.contains(&yn);
            let cross = pos_targets.contains(&yn) && neg_targets.contains(&yp);
            if same || cross {
                match p.quant(x) {
                    Quant::Forall => clause_pairs.insert((x, y)),
                    Quant::Exists => cube_pairs.insert((x, y)),
                };
            }
        }
    }
    DepRelation { scheme: SchemeTag::Rrs, clause_pairs, cube_pairs }
}

/// Literal-level BFS: which literals are connected to `start` via a
/// resolution path? States are (clause, entry literal).
fn rrs_connected_lits(f: &PCNF, start: crate::qbf::Literal) -> HashSet<crate::qbf::Literal> {
    let p = &f.prefix;
    let x = start.var();
    let mut targets = HashSet::new();
    let mut visited: HashSet<(usize, crate::qbf::Literal)> = HashSet::new();
    let mut queue: Vec<(usize, crate::qbf::Literal)> = Vec::new();
    for (ci, c) in f.matrix.iter().enumerate() {
        if c.contains(start) {
            queue.push((ci, start));
            visited.insert((ci, start));
        }
    }
    let connector =
        |v: Variable| p.is_existential(v) && p.position(v) > p.position(x);
    while let Some((ci, entry)) = queue.pop() {
        for lit in f.matrix[ci].lits() {
            if lit.var() == entry.var() {
                continue;
            }
            // any such literal is a valid path endpoint
            targets.insert(lit);
            // and, if a connector, the path may continue through its negation
            if connector(lit.var()) {
                let flipped = lit.negate();
                for (cj, c) in f.matrix.iter().enumerate() {
                    if c.contains(flipped) && visited.insert((cj, flipped)) {
                        queue.push((cj, flipped));
                    }
                }
            }
        }
    }
    targets
}

/// red-D: simultaneously removes every universal occurrence (merged included)
/// on which no existential in the clause depends. Returns the empty clause
/// when everything goes.
pub fn reduce_clause(c: &Constraint, d: &DepRelation, p: &Prefix) -> Constraint {
    debug_assert_eq!(c.kind(), ConstraintKind::Clause);
    let occs: Vec<(Variable, Occ)> = c
        .occs()
        .iter()
        .copied()
        .filter(|&(v, _)| {
            if p.is_existential(v) {
                return true;
            }
            c.vars()
                .any(|e| p.is_existential(e) && d.blocks_clause_reduction(v, e))
        })
        .collect();
    Constraint::from_occs(ConstraintKind::Clause, occs)
}

/// red-D∃: the dual — removes existential occurrences on which no universal
/// in the cube depends.
pub fn reduce_cube(c: &Constraint, d: &DepRelation, p: &Prefix) -> Constraint {
    debug_assert_eq!(c.kind(), ConstraintKind::Cube);
    let occs: Vec<(Variable, Occ)> = c
        .occs()
        .iter()
        .copied()
        .filter(|&(v, _)| {
            if p.is_universal(v) {
                return true;
            }
            c.vars()
                .any(|u| p.is_universal(u) && d.blocks_cube_reduction(v, u))
        })
        .collect();
    Constraint::from_occs(ConstraintKind::Cube, occs)
}

/// Replaces every clause of the matrix by its red-D reduction; the prefix is
/// unchanged. A single simultaneous pass suffices since blockedness depends
/// only on existential literals, which reduction never removes.
pub fn preprocess(f: &PCNF, d: &DepRelation) -> PCNF {
    PCNF {
        prefix: f.prefix.clone(),
        matrix: f
            .matrix
            .iter()
            .map(|c| reduce_clause(c, d, &f.prefix))
            .collect(),
    }
}

pub fn compute(f: &PCNF, tag: SchemeTag) -> DepRelation {
    match tag {
        SchemeTag::Trv => compute_dtrv(f),
        SchemeTag::Std => compute_dstd(f),
        SchemeTag::Rrs => compute_drrs(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{parse_qdimacs, Literal};

    fn lit(n: i64) -> Literal {
        Literal::from_dimacs(n).unwrap()
    }

    fn var(n: u32) -> Variable {
        Variable::new(n)
    }

    #[test]
    fn dtrv_is_cross_quantifier_later_pairs() {
        // ∃x ∀u ∃t, empty matrix
        let f = parse_qdimacs("p cnf 3 0\ne 1 0\na 2 0\ne 3 0\n").unwrap();
        let d = compute_dtrv(&f);
        assert_eq!(d.pairs(), vec![(var(1), var(2)), (var(2), var(3))]);
        assert_eq!(d.universal_pairs(), vec![(var(2), var(3))]);
        assert_eq!(d.existential_pairs(), vec![(var(1), var(2))]);
    }

    #[test]
    fn dtrv_single_block_is_empty() {
        let f = parse_qdimacs("p cnf 2 0\ne 1 2 0\n").unwrap();
        assert!(compute_dtrv(&f).pairs().is_empty());
    }

    #[test]
    fn dstd_single_clause_co_occurrence() {
        // ∀u ∃x with clause {u, x}: x depends on u
        let f = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
        let d = compute_dstd(&f);
        assert_eq!(d.universal_pairs(), vec![(var(1), var(2))]);
    }

    #[test]
    fn dstd_needs_connector_right_of_left_endpoint() {
        // ∀u ∃x ∃y, clauses {u, x}, {x, y}: connector x is right of u,
        // so (u, y) is in; but with clauses {u, x} only, (u, y) is not.
        let f = parse_qdimacs("p cnf 3 2\na 1 0\ne 2 3 0\n1 2 0\n2 3 0\n").unwrap();
        let d = compute_dstd(&f);
        assert_eq!(d.universal_pairs(), vec![(var(1), var(2)), (var(1), var(3))]);
    }

    #[test]
    fn drrs_requires_polarity_flip() {
        // ∀u ∃x ∃y, clauses {u,x},{x,y}: path u→x exits positively but no
        // clause contains ¬x, so y is not rrs-connected onward; also ū never
        // occurs, so nothing can depend on u in rrs.
        let f = parse_qdimacs("p cnf 3 2\na 1 0\ne 2 3 0\n1 2 0\n2 3 0\n").unwrap();
        let d = compute_drrs(&f);
        assert!(d.universal_pairs().is_empty());

        // with both polarities the connection exists:
        // {u,x},{¬u,¬x} gives (u,x); {u,x},{¬x,y},{¬u,¬y}... build the
        // cross case {u,¬x} & {¬u,x}.
        let f =
            parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n").unwrap();
        let d = compute_drrs(&f);
        assert_eq!(d.universal_pairs(), vec![(var(1), var(2))]);
    }

    #[test]
    fn reduce_clause_removes_unblocked_universals() {
        // ∃x ∀u ∃t: clause {x, u} — nothing right of u in it, u goes
        let f = parse_qdimacs("p cnf 3 0\ne 1 0\na 2 0\ne 3 0\n").unwrap();
        let d = compute_dtrv(&f);
        let c = Constraint::clause([lit(1), lit(2)]);
        assert_eq!(reduce_clause(&c, &d, &f.prefix), Constraint::clause([lit(1)]));
        // {u, t} keeps u (t depends on u)
        let c = Constraint::clause([lit(2), lit(3)]);
        assert_eq!(reduce_clause(&c, &d, &f.prefix), c);
        // merged universal with no existential at all reduces to the empty clause
        let c = Constraint::clause([lit(2), lit(-2)]);
        assert!(reduce_clause(&c, &d, &f.prefix).is_empty());
    }

    #[test]
    fn reduce_cube_dual() {
        let f = parse_qdimacs("p cnf 3 0\ne 1 0\na 2 0\ne 3 0\n").unwrap();
        let d = compute_dtrv(&f);
        // {x, ū}: x blocked by u (u right of x), stays
        let c = Constraint::cube([lit(1), lit(-2)]);
        assert_eq!(reduce_cube(&c, &d, &f.prefix), c);
        // {x, ū, t}: t has no universal right of it, goes
        let c = Constraint::cube([lit(1), lit(-2), lit(3)]);
        assert_eq!(
            reduce_cube(&c, &d, &f.prefix),
            Constraint::cube([lit(1), lit(-2)])
        );
        // all-existential cube reduces to the empty cube
        let c = Constraint::cube([lit(1), lit(3)]);
        assert!(reduce_cube(&c, &d, &f.prefix).is_empty());
    }

    #[test]
    fn reductions_idempotent() {
        let f = parse_qdimacs("p cnf 4 0\ne 1 0\na 2 3 0\ne 4 0\n").unwrap();
        let d = compute_dtrv(&f);
        let c = Constraint::clause([lit(1), lit(2), lit(-3), lit(4)]);
        let r1 = reduce_clause(&c, &d, &f.prefix);
        assert_eq!(reduce_clause(&r1, &d, &f.prefix), r1);
    }

    #[test]
    fn nesting_on_a_small_instance() {
        let f = parse_qdimacs(
            "p cnf 4 3\ne 1 0\na 2 0\ne 3 4 0\n1 2 3 0\n-3 4 0\n-1 -2 -4 0\n",
        )
        .unwrap();
        let rrs = compute_drrs(&f);
        let std = compute_dstd(&f);
        let trv = compute_dtrv(&f);
        assert!(rrs.is_subset_of(&std));
        assert!(std.is_subset_of(&trv));
    }
}
