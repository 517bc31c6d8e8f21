//! Core QBF data model: variables, literals, quantifier prefixes, clauses and
//! cubes with merged occurrences, partial assignments, and QDIMACS I/O.

use std::fmt;

use thiserror::Error;

/// Errors from parsing, validation and restriction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QbfError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: variable {var} out of range (nvars = {nvars})")]
    VarOutOfRange { line: usize, var: i64, nvars: u32 },
    #[error("line {line}: tautological input clause")]
    TautologicalClause { line: usize },
    #[error("line {line}: empty quantifier block")]
    EmptyQuantifierBlock { line: usize },
    #[error("line {line}: variable {var} occurs twice in the prefix")]
    DuplicatePrefixVar { line: usize, var: u32 },
    #[error("line {line}: missing terminating 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: unexpected token `{token}`")]
    UnexpectedToken { line: usize, token: String },
    #[error("prefix is not a bijection onto 1..{expected}")]
    PrefixNotDense { expected: u32 },
    #[error("variable {0} used in matrix but absent from prefix")]
    UnboundVariable(u32),
    #[error("initial clause contains a merged occurrence of variable {0}")]
    InitialMerge(u32),
    #[error("merged restriction unsupported")]
    MergedRestriction,
    #[error("assignment conflict on variable {0}")]
    AssignmentConflict(u32),
    #[error("malformed constraint text: {0}")]
    BadConstraintText(String),
}

/// A propositional variable, identified by a dense 1-based index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Variable(u32);

impl Variable {
    pub fn new(id: u32) -> Self {
        debug_assert!(id >= 1);
        Variable(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// 0-based index for dense per-variable tables.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A variable or its negation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    var: Variable,
    positive: bool,
}

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn positive(var: Variable) -> Self {
        Literal { var, positive: true }
    }

    pub fn negative(var: Variable) -> Self {
        Literal { var, positive: false }
    }

    pub fn var(self) -> Variable {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }

    /// Signed DIMACS encoding: `v` or `-v`.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var.id() as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(n: i64) -> Option<Self> {
        if n == 0 {
            return None;
        }
        Some(Literal { var: Variable::new(n.unsigned_abs() as u32), positive: n > 0 })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn flip(self) -> Self {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

/// Quantifier prefix: a total order on variables with per-variable quantifier,
/// position, and block level (maximal same-quantifier runs).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Prefix {
    order: Vec<(Variable, Quant)>,
    position: Vec<u32>,
    block: Vec<u32>,
    quant: Vec<Quant>,
}

impl Prefix {
    /// Builds a prefix from an ordered variable list; the variables must be a
    /// permutation of 1..=n.
    pub fn new(order: Vec<(Variable, Quant)>) -> Result<Self, QbfError> {
        let n = order.len() as u32;
        let mut position = vec![u32::MAX; n as usize];
        let mut block = vec![0u32; n as usize];
        let mut quant = vec![Quant::Exists; n as usize];
        let mut level = 0u32;
        for (i, &(v, q)) in order.iter().enumerate() {
            if v.id() == 0 || v.id() > n {
                return Err(QbfError::PrefixNotDense { expected: n });
            }
            if position[v.index()] != u32::MAX {
                return Err(QbfError::PrefixNotDense { expected: n });
            }
            if i > 0 && order[i - 1].1 != q {
                level += 1;
            }
            position[v.index()] = i as u32;
            block[v.index()] = level;
            quant[v.index()] = q;
        }
        Ok(Prefix { order, position, block, quant })
    }

    pub fn num_vars(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[(Variable, Quant)] {
        &self.order
    }

    pub fn quant(&self, v: Variable) -> Quant {
        self.quant[v.index()]
    }

    pub fn is_existential(&self, v: Variable) -> bool {
        self.quant(v) == Quant::Exists
    }

    pub fn is_universal(&self, v: Variable) -> bool {
        self.quant(v) == Quant::Forall
    }

    pub fn position(&self, v: Variable) -> usize {
        self.position[v.index()] as usize
    }

    pub fn block(&self, v: Variable) -> usize {
        self.block[v.index()] as usize
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.order.iter().map(|&(v, _)| v)
    }

    /// Maximal same-quantifier runs in prefix order.
    pub fn blocks(&self) -> Vec<(Quant, Vec<Variable>)> {
        let mut out: Vec<(Quant, Vec<Variable>)> = Vec::new();
        for &(v, q) in &self.order {
            match out.last_mut() {
                Some((lq, vs)) if *lq == q => vs.push(v),
                _ => out.push((q, vec![v])),
            }
        }
        out
    }
}

/// Whether a variable occurs positively, negatively, or merged (both) in a
/// constraint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Occ {
    Pos,
    Neg,
    Both,
}

impl Occ {
    fn of(positive: bool) -> Self {
        if positive {
            Occ::Pos
        } else {
            Occ::Neg
        }
    }

    pub fn is_merged(self) -> bool {
        self == Occ::Both
    }

    fn union(self, other: Occ) -> Occ {
        if self == other {
            self
        } else {
            Occ::Both
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ConstraintKind {
    Clause,
    Cube,
}

/// A clause or cube, stored as a per-variable polarity set so that merged
/// occurrences produced by long-distance resolution are first-class.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Constraint {
    kind: ConstraintKind,
    occs: Vec<(Variable, Occ)>,
}

impl Constraint {
    pub fn empty(kind: ConstraintKind) -> Self {
        Constraint { kind, occs: Vec::new() }
    }

    pub fn from_lits(kind: ConstraintKind, lits: impl IntoIterator<Item = Literal>) -> Self {
        let mut occs: Vec<(Variable, Occ)> = Vec::new();
        for lit in lits {
            let occ = Occ::of(lit.is_positive());
            match occs.iter_mut().find(|(v, _)| *v == lit.var()) {
                Some((_, o)) => *o = o.union(occ),
                None => occs.push((lit.var(), occ)),
            }
        }
        occs.sort_by_key(|&(v, _)| v);
        Constraint { kind, occs }
    }

    pub fn clause(lits: impl IntoIterator<Item = Literal>) -> Self {
        Self::from_lits(ConstraintKind::Clause, lits)
    }

    pub fn cube(lits: impl IntoIterator<Item = Literal>) -> Self {
        Self::from_lits(ConstraintKind::Cube, lits)
    }

    pub fn from_occs(kind: ConstraintKind, mut occs: Vec<(Variable, Occ)>) -> Self {
        occs.sort_by_key(|&(v, _)| v);
        occs.dedup();
        Constraint { kind, occs }
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.occs.is_empty()
    }

    /// Number of distinct variables occurring.
    pub fn width(&self) -> usize {
        self.occs.len()
    }

    pub fn occs(&self) -> &[(Variable, Occ)] {
        &self.occs
    }

    pub fn occ(&self, v: Variable) -> Option<Occ> {
        self.occs
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.occs[i].1)
    }

    pub fn contains(&self, lit: Literal) -> bool {
        matches!(
            (self.occ(lit.var()), lit.is_positive()),
            (Some(Occ::Pos), true) | (Some(Occ::Neg), false) | (Some(Occ::Both), _)
        )
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.occs.iter().map(|&(v, _)| v)
    }

    /// Iterates literals; a merged occurrence yields both polarities.
    pub fn lits(&self) -> impl Iterator<Item = Literal> + '_ {
        self.occs.iter().flat_map(|&(v, o)| {
            let (pos, neg) = match o {
                Occ::Pos => (Some(Literal::positive(v)), None),
                Occ::Neg => (None, Some(Literal::negative(v))),
                Occ::Both => (Some(Literal::positive(v)), Some(Literal::negative(v))),
            };
            pos.into_iter().chain(neg)
        })
    }

    pub fn has_merge(&self) -> bool {
        self.occs.iter().any(|&(_, o)| o.is_merged())
    }

    pub fn without_var(&self, v: Variable) -> Self {
        Constraint {
            kind: self.kind,
            occs: self.occs.iter().copied().filter(|&(w, _)| w != v).collect(),
        }
    }

    /// Merged occurrences are only legal for universals in clauses and
    /// existentials in cubes.
    pub fn validate_merges(&self, prefix: &Prefix) -> Result<(), QbfError> {
        for &(v, o) in &self.occs {
            if o.is_merged() {
                let ok = match self.kind {
                    ConstraintKind::Clause => prefix.is_universal(v),
                    ConstraintKind::Cube => prefix.is_existential(v),
                };
                if !ok {
                    return Err(QbfError::InitialMerge(v.id()));
                }
            }
        }
        Ok(())
    }

    /// Text form: `l*` (clause) or `c*` (cube) followed by DIMACS literals;
    /// a merged occurrence is written as both literals.
    pub fn to_text(&self) -> String {
        let tag = match self.kind {
            ConstraintKind::Clause => "l*",
            ConstraintKind::Cube => "c*",
        };
        let mut s = String::from(tag);
        for lit in self.lits() {
            s.push(' ');
            s.push_str(&lit.to_dimacs().to_string());
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, QbfError> {
        let mut toks = text.split_whitespace();
        let kind = match toks.next() {
            Some("l*") => ConstraintKind::Clause,
            Some("c*") => ConstraintKind::Cube,
            other => {
                return Err(QbfError::BadConstraintText(format!(
                    "expected l* or c*, got {other:?}"
                )))
            }
        };
        let mut lits = Vec::new();
        for t in toks {
            let n: i64 = t
                .parse()
                .map_err(|_| QbfError::BadConstraintText(format!("bad literal `{t}`")))?;
            match Literal::from_dimacs(n) {
                Some(l) => lits.push(l),
                None => {
                    return Err(QbfError::BadConstraintText("literal 0 not allowed".into()))
                }
            }
        }
        Ok(Constraint::from_lits(kind, lits))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A PCNF formula: prefix plus an ordered clause matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PCNF {
    pub prefix: Prefix,
    pub matrix: Vec<Constraint>,
}

impl PCNF {
    pub fn new(prefix: Prefix, matrix: Vec<Constraint>) -> Result<Self, QbfError> {
        let f = PCNF { prefix, matrix };
        f.validate()?;
        Ok(f)
    }

    pub fn num_vars(&self) -> usize {
        self.prefix.num_vars()
    }

    pub fn validate(&self) -> Result<(), QbfError> {
        let n = self.prefix.num_vars() as u32;
        for c in &self.matrix {
            debug_assert_eq!(c.kind(), ConstraintKind::Clause);
            for v in c.vars() {
                if v.id() > n {
                    return Err(QbfError::UnboundVariable(v.id()));
                }
            }
            if let Some(&(v, _)) = c.occs().iter().find(|&&(_, o)| o.is_merged()) {
                return Err(QbfError::InitialMerge(v.id()));
            }
        }
        Ok(())
    }
}

/// Partial assignment; at most one polarity per variable.
#[derive(Clone, Debug)]
pub struct Assignment {
    values: Vec<Option<bool>>,
    assigned: usize,
}

impl Assignment {
    pub fn new(num_vars: usize) -> Self {
        Assignment { values: vec![None; num_vars], assigned: 0 }
    }

    pub fn value(&self, v: Variable) -> Option<bool> {
        self.values[v.index()]
    }

    pub fn lit_value(&self, lit: Literal) -> Option<bool> {
        self.value(lit.var()).map(|b| b == lit.is_positive())
    }

    pub fn is_assigned(&self, v: Variable) -> bool {
        self.value(v).is_some()
    }

    pub fn assign(&mut self, lit: Literal) -> Result<(), QbfError> {
        match self.value(lit.var()) {
            None => {
                self.values[lit.var().index()] = Some(lit.is_positive());
                self.assigned += 1;
                Ok(())
            }
            Some(b) if b == lit.is_positive() => Ok(()),
            Some(_) => Err(QbfError::AssignmentConflict(lit.var().id())),
        }
    }

    pub fn unassign(&mut self, v: Variable) {
        if self.values[v.index()].take().is_some() {
            self.assigned -= 1;
        }
    }

    pub fn assigned_count(&self) -> usize {
        self.assigned
    }

    pub fn is_total(&self) -> bool {
        self.assigned == self.values.len()
    }
}

/// Outcome of restricting a constraint by a partial assignment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Restriction {
    Satisfied,
    Falsified,
    Residual(Constraint),
}

/// Semantic restriction of a merge-free constraint. For clauses: satisfied if
/// some literal is true, falsified if all are false, residual otherwise. For
/// cubes the roles dualize.
pub fn restrict(c: &Constraint, a: &Assignment) -> Result<Restriction, QbfError> {
    if c.has_merge() {
        return Err(QbfError::MergedRestriction);
    }
    Ok(trail_status(c, a))
}

/// Restriction as the trail engine sees it: merged occurrences are treated as
/// permanently unassigned, so they stay in the residual and can only vanish
/// through reduction.
pub fn trail_status(c: &Constraint, a: &Assignment) -> Restriction {
    let mut residual: Vec<(Variable, Occ)> = Vec::new();
    match c.kind() {
        ConstraintKind::Clause => {
            for &(v, o) in c.occs() {
                if o.is_merged() {
                    residual.push((v, o));
                    continue;
                }
                match a.value(v) {
                    None => residual.push((v, o)),
                    Some(b) => {
                        if b == (o == Occ::Pos) {
                            return Restriction::Satisfied;
                        }
                    }
                }
            }
            if residual.is_empty() {
                Restriction::Falsified
            } else {
                Restriction::Residual(Constraint { kind: c.kind(), occs: residual })
            }
        }
        ConstraintKind::Cube => {
            for &(v, o) in c.occs() {
                if o.is_merged() {
                    residual.push((v, o));
                    continue;
                }
                match a.value(v) {
                    None => residual.push((v, o)),
                    Some(b) => {
                        if b != (o == Occ::Pos) {
                            return Restriction::Falsified;
                        }
                    }
                }
            }
            if residual.is_empty() {
                Restriction::Satisfied
            } else {
                Restriction::Residual(Constraint { kind: c.kind(), occs: residual })
            }
        }
    }
}

/// Parses QDIMACS text. Free variables (used in the matrix or declared in the
/// header but absent from every quantifier line) are prepended as a leading
/// existential block, DepQBF-style.
pub fn parse_qdimacs(text: &str) -> Result<PCNF, QbfError> {
    let mut nvars: Option<u32> = None;
    let mut prefix_lines: Vec<(Quant, Vec<Variable>, usize)> = Vec::new();
    let mut clauses: Vec<Constraint> = Vec::new();
    let mut seen_in_prefix: Vec<bool> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if nvars.is_some() {
                return Err(QbfError::MalformedHeader("duplicate header".into()));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(QbfError::MalformedHeader(line.into()));
            }
            let n: u32 = toks[2]
                .parse()
                .map_err(|_| QbfError::MalformedHeader(line.into()))?;
            let _nclauses: u64 = toks[3]
                .parse()
                .map_err(|_| QbfError::MalformedHeader(line.into()))?;
            nvars = Some(n);
            seen_in_prefix = vec![false; n as usize];
            continue;
        }
        let n = nvars.ok_or_else(|| QbfError::MalformedHeader("missing header".into()))?;
        if line.starts_with('a') || line.starts_with('e') {
            if !clauses.is_empty() {
                return Err(QbfError::UnexpectedToken { line: lineno, token: line.chars().next().unwrap().to_string() });
            }
            let q = if line.starts_with('a') { Quant::Forall } else { Quant::Exists };
            let mut vars = Vec::new();
            let mut terminated = false;
            for t in line[1..].split_whitespace() {
                let x: i64 = t
                    .parse()
                    .map_err(|_| QbfError::UnexpectedToken { line: lineno, token: t.into() })?;
                if x == 0 {
                    terminated = true;
                    break;
                }
                if x < 0 || x as u32 > n {
                    return Err(QbfError::VarOutOfRange { line: lineno, var: x, nvars: n });
                }
                let v = Variable::new(x as u32);
                if seen_in_prefix[v.index()] {
                    return Err(QbfError::DuplicatePrefixVar { line: lineno, var: v.id() });
                }
                seen_in_prefix[v.index()] = true;
                vars.push(v);
            }
            if !terminated {
                return Err(QbfError::MissingTerminator { line: lineno });
            }
            if vars.is_empty() {
                return Err(QbfError::EmptyQuantifierBlock { line: lineno });
            }
            prefix_lines.push((q, vars, lineno));
            continue;
        }
        // clause line
        let mut lits = Vec::new();
        let mut terminated = false;
        for t in line.split_whitespace() {
            let x: i64 = t
                .parse()
                .map_err(|_| QbfError::UnexpectedToken { line: lineno, token: t.into() })?;
            if x == 0 {
                terminated = true;
                break;
            }
            if x.unsigned_abs() > n as u64 {
                return Err(QbfError::VarOutOfRange { line: lineno, var: x, nvars: n });
            }
            lits.push(Literal::from_dimacs(x).unwrap());
        }
        if !terminated {
            return Err(QbfError::MissingTerminator { line: lineno });
        }
        let clause = Constraint::clause(lits);
        if clause.has_merge() {
            return Err(QbfError::TautologicalClause { line: lineno });
        }
        clauses.push(clause);
    }

    let n = nvars.ok_or_else(|| QbfError::MalformedHeader("missing header".into()))?;
    let mut order: Vec<(Variable, Quant)> = Vec::new();
    // free variables join a leading existential block
    for i in 0..n {
        if !seen_in_prefix[i as usize] {
            order.push((Variable::new(i + 1), Quant::Exists));
        }
    }
    for (q, vars, _) in &prefix_lines {
        for &v in vars {
            order.push((v, *q));
        }
    }
    let prefix = Prefix::new(order)?;
    PCNF::new(prefix, clauses)
}

/// Writes QDIMACS; `parse_qdimacs(write_qdimacs(f)) == f`.
pub fn write_qdimacs(f: &PCNF) -> String {
    let mut out = String::new();
    out.push_str(&format!("p cnf {} {}\n", f.num_vars(), f.matrix.len()));
    for (q, vars) in f.prefix.blocks() {
        out.push(match q {
            Quant::Exists => 'e',
            Quant::Forall => 'a',
        });
        for v in vars {
            out.push_str(&format!(" {}", v.id()));
        }
        out.push_str(" 0\n");
    }
    for c in &f.matrix {
        for lit in c.lits() {
            out.push_str(&format!("{} ", lit.to_dimacs()));
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(n: i64) -> Literal {
        Literal::from_dimacs(n).unwrap()
    }

    #[test]
    fn negation_is_involution() {
        let l = lit(-7);
        assert_eq!(l.negate().negate(), l);
    }

    #[test]
    fn parse_small_qdimacs() {
        let f = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert!(f.prefix.is_universal(Variable::new(1)));
        assert!(f.prefix.is_existential(Variable::new(2)));
        assert_eq!(f.matrix.len(), 1);
        assert!(f.matrix[0].contains(lit(1)));
        assert!(f.matrix[0].contains(lit(2)));
    }

    #[test]
    fn parse_rejects_tautological_clause() {
        let err = parse_qdimacs("p cnf 1 1\ne 1 0\n1 -1 0\n").unwrap_err();
        assert_eq!(err, QbfError::TautologicalClause { line: 3 });
    }

    #[test]
    fn parse_rejects_empty_block() {
        let err = parse_qdimacs("p cnf 1 0\na 0\ne 1 0\n").unwrap_err();
        assert_eq!(err, QbfError::EmptyQuantifierBlock { line: 2 });
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let err = parse_qdimacs("p cnf 2 1\ne 1 2 0\n3 0\n").unwrap_err();
        assert!(matches!(err, QbfError::VarOutOfRange { var: 3, .. }));
    }

    #[test]
    fn free_vars_become_leading_existentials() {
        let f = parse_qdimacs("p cnf 3 1\na 2 0\ne 3 0\n1 2 3 0\n").unwrap();
        assert!(f.prefix.is_existential(Variable::new(1)));
        assert_eq!(f.prefix.position(Variable::new(1)), 0);
        assert_eq!(f.prefix.block(Variable::new(1)), 0);
        assert_eq!(f.prefix.block(Variable::new(2)), 1);
    }

    #[test]
    fn empty_matrix_and_empty_clause_roundtrip() {
        let text = "p cnf 2 0\ne 1 2 0\n";
        let f = parse_qdimacs(text).unwrap();
        assert_eq!(write_qdimacs(&f), text);

        let f = parse_qdimacs("p cnf 1 1\ne 1 0\n0\n").unwrap();
        assert!(f.matrix[0].is_empty());
        assert!(write_qdimacs(&f).contains("\n0\n"));
    }

    #[test]
    fn restrict_clause() {
        let n = 2;
        let c = Constraint::clause([lit(1), lit(2)]);
        let mut a = Assignment::new(n);
        a.assign(lit(-1)).unwrap();
        assert_eq!(
            restrict(&c, &a).unwrap(),
            Restriction::Residual(Constraint::clause([lit(2)]))
        );
        a.assign(lit(-2)).unwrap();
        assert_eq!(restrict(&c, &a).unwrap(), Restriction::Falsified);
    }

    #[test]
    fn restrict_cube_leaves_unit() {
        // cube {x1, -u2} with x1 true leaves {-u2}
        let c = Constraint::cube([lit(1), lit(-2)]);
        let mut a = Assignment::new(2);
        a.assign(lit(1)).unwrap();
        assert_eq!(
            restrict(&c, &a).unwrap(),
            Restriction::Residual(Constraint::cube([lit(-2)]))
        );
    }

    #[test]
    fn restrict_rejects_merged() {
        let c = Constraint::clause([lit(1), lit(-1)]);
        let a = Assignment::new(1);
        assert_eq!(restrict(&c, &a).unwrap_err(), QbfError::MergedRestriction);
        // the trail engine keeps the merge pending instead
        assert_eq!(trail_status(&c, &a), Restriction::Residual(c));
    }

    #[test]
    fn constraint_text_roundtrip() {
        let c = Constraint::clause([lit(1), lit(3), lit(-3), lit(-2)]);
        let s = c.to_text();
        assert_eq!(s, "l* 1 -2 3 -3");
        assert_eq!(Constraint::parse_text(&s).unwrap(), c);
        assert_eq!(Constraint::parse_text("c*").unwrap(), Constraint::cube([]));
    }

    #[test]
    fn assignment_rejects_opposite() {
        let mut a = Assignment::new(1);
        a.assign(lit(1)).unwrap();
        assert!(a.assign(lit(-1)).is_err());
    }
}
