//! Deterministic generators for the benchmark formula families, with fixed
//! variable-numbering conventions (prefix order, left to right, 1-based).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qbf::{Constraint, Literal, Prefix, Quant, Variable, PCNF};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    Php,
    Equality,
    DoubleLongEq,
    TwoPhpAndCt,
    PreRrsTrapdoor,
    StdDepTrap,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Php,
        Family::Equality,
        Family::DoubleLongEq,
        Family::TwoPhpAndCt,
        Family::PreRrsTrapdoor,
        Family::StdDepTrap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Php => "php",
            Family::Equality => "equality",
            Family::DoubleLongEq => "double_long_eq",
            Family::TwoPhpAndCt => "two_php_and_ct",
            Family::PreRrsTrapdoor => "pre_rrs_trapdoor",
            Family::StdDepTrap => "std_dep_trap",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown family `{0}`")]
pub struct UnknownFamily(String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FamilySpec {
    pub family: Family,
    pub n: u32,
}

impl FamilySpec {
    pub fn new(family: Family, n: u32) -> Self {
        assert!(n >= 1, "family parameter must be positive");
        FamilySpec { family, n }
    }

    /// Parses `<family>:<n>`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let (fam, n) = s.split_once(':').ok_or("expected <family>:<n>")?;
        let family: Family = fam.parse().map_err(|e: UnknownFamily| e.to_string())?;
        let n: u32 = n.parse().map_err(|_| format!("bad parameter `{n}`"))?;
        if n == 0 {
            return Err("parameter must be at least 1".into());
        }
        Ok(FamilySpec { family, n })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.n)
    }
}

/// Number of pigeon-hole variables for parameter n: n(n+1).
pub fn s_n(n: u32) -> u32 {
    n * (n + 1)
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

/// PHP_n^{n+1} clauses over the flat variables given by `var(i, j)` for
/// pigeon i in 1..=n+1 and hole j in 1..=n, each clause extended by `extra`.
/// Pigeon clauses come first by pigeon index, then hole clauses in
/// lexicographic (i, k, j) order.
fn php_clauses(n: u32, var: impl Fn(u32, u32) -> u32, extra: &[Literal]) -> Vec<Constraint> {
    let mut out = Vec::new();
    for i in 1..=n + 1 {
        let mut lits = extra.to_vec();
        lits.extend((1..=n).map(|j| pos(var(i, j))));
        out.push(Constraint::clause(lits));
    }
    for i in 1..=n + 1 {
        for k in i + 1..=n + 1 {
            for j in 1..=n {
                let mut lits = extra.to_vec();
                lits.push(neg(var(i, j)));
                lits.push(neg(var(k, j)));
                out.push(Constraint::clause(lits));
            }
        }
    }
    out
}

fn block(order: &mut Vec<(Variable, Quant)>, q: Quant, vars: impl IntoIterator<Item = u32>) {
    for v in vars {
        order.push((Variable::new(v), q));
    }
}

pub fn generate(spec: FamilySpec) -> PCNF {
    let n = spec.n;
    match spec.family {
        Family::Php => gen_php(n),
        Family::Equality => gen_eq_like(n, false),
        Family::DoubleLongEq => gen_eq_like(n, true),
        Family::TwoPhpAndCt => gen_two_php_and_ct(n),
        Family::PreRrsTrapdoor => gen_pre_rrs_trapdoor(n),
        Family::StdDepTrap => gen_std_dep_trap(n),
    }
}

fn gen_php(n: u32) -> PCNF {
    let sn = s_n(n);
    let mut order = Vec::new();
    block(&mut order, Quant::Exists, 1..=sn);
    let matrix = php_clauses(n, |i, j| (i - 1) * n + j, &[]);
    PCNF::new(Prefix::new(order).unwrap(), matrix).unwrap()
}

/// Variable layout for the equality-style families: x_i, u_i, t_i.
#[derive(Clone, Copy)]
pub struct EqVars {
    pub n: u32,
}

impl EqVars {
    pub fn x(&self, i: u32) -> u32 {
        i
    }
    pub fn u(&self, i: u32) -> u32 {
        self.n + i
    }
    pub fn t(&self, i: u32) -> u32 {
        2 * self.n + i
    }
}

fn gen_eq_like(n: u32, with_ut: bool) -> PCNF {
    let v = EqVars { n };
    let mut order = Vec::new();
    block(&mut order, Quant::Exists, (1..=n).map(|i| v.x(i)));
    block(&mut order, Quant::Forall, (1..=n).map(|i| v.u(i)));
    block(&mut order, Quant::Exists, (1..=n).map(|i| v.t(i)));
    let mut matrix = Vec::new();
    // T_n
    matrix.push(Constraint::clause((1..=n).map(|i| neg(v.t(i)))));
    for i in 1..=n {
        // A_i and B_i
        matrix.push(Constraint::clause([pos(v.x(i)), pos(v.u(i)), pos(v.t(i))]));
        matrix.push(Constraint::clause([neg(v.x(i)), neg(v.u(i)), pos(v.t(i))]));
    }
    if with_ut {
        let mut ut: Vec<Literal> = (1..=n).map(|i| neg(v.u(i))).collect();
        let mut ut2 = ut.clone();
        ut.extend((1..=n).map(|i| neg(v.t(i))));
        ut2.extend((1..=n).map(|i| pos(v.t(i))));
        matrix.push(Constraint::clause(ut));
        matrix.push(Constraint::clause(ut2));
    }
    PCNF::new(Prefix::new(order).unwrap(), matrix).unwrap()
}

/// Variable layout: u, then the two pigeon-hole copies, then v, z1, z2.
#[derive(Clone, Copy)]
pub struct TwoPhpVars {
    pub n: u32,
}

impl TwoPhpVars {
    pub fn u(&self) -> u32 {
        1
    }
    pub fn x(&self, i: u32, j: u32) -> u32 {
        1 + (i - 1) * self.n + j
    }
    pub fn y(&self, i: u32, j: u32) -> u32 {
        1 + s_n(self.n) + (i - 1) * self.n + j
    }
    pub fn v(&self) -> u32 {
        2 + 2 * s_n(self.n)
    }
    pub fn z1(&self) -> u32 {
        3 + 2 * s_n(self.n)
    }
    pub fn z2(&self) -> u32 {
        4 + 2 * s_n(self.n)
    }
}

fn gen_two_php_and_ct(n: u32) -> PCNF {
    let v = TwoPhpVars { n };
    let sn = s_n(n);
    let mut order = Vec::new();
    block(&mut order, Quant::Forall, [v.u()]);
    block(&mut order, Quant::Exists, 2..=1 + 2 * sn);
    block(&mut order, Quant::Forall, [v.v()]);
    block(&mut order, Quant::Exists, [v.z1(), v.z2()]);
    let mut matrix = php_clauses(n, |i, j| v.x(i, j), &[pos(v.u())]);
    matrix.extend(php_clauses(n, |i, j| v.y(i, j), &[neg(v.u())]));
    matrix.push(Constraint::clause([pos(v.v()), pos(v.z1()), pos(v.z2())]));
    matrix.push(Constraint::clause([pos(v.v()), neg(v.z1()), pos(v.z2())]));
    matrix.push(Constraint::clause([pos(v.v()), pos(v.z1()), neg(v.z2())]));
    matrix.push(Constraint::clause([pos(v.v()), neg(v.z1()), neg(v.z2())]));
    PCNF::new(Prefix::new(order).unwrap(), matrix).unwrap()
}

/// Variable layout: a, p, the y row, w, v, t, the x row, u, b, q, r, s.
#[derive(Clone, Copy)]
pub struct PreRrsVars {
    pub n: u32,
}

impl PreRrsVars {
    pub fn a(&self) -> u32 {
        1
    }
    pub fn p(&self) -> u32 {
        2
    }
    pub fn y(&self, i: u32) -> u32 {
        2 + i
    }
    pub fn w(&self) -> u32 {
        s_n(self.n) + 3
    }
    pub fn v(&self) -> u32 {
        s_n(self.n) + 4
    }
    pub fn t(&self) -> u32 {
        s_n(self.n) + 5
    }
    pub fn x(&self, i: u32) -> u32 {
        s_n(self.n) + 5 + i
    }
    pub fn u(&self) -> u32 {
        2 * s_n(self.n) + 6
    }
    pub fn b(&self) -> u32 {
        2 * s_n(self.n) + 7
    }
    pub fn q(&self) -> u32 {
        2 * s_n(self.n) + 8
    }
    pub fn r(&self) -> u32 {
        2 * s_n(self.n) + 9
    }
    pub fn s(&self) -> u32 {
        2 * s_n(self.n) + 10
    }
}

fn gen_pre_rrs_trapdoor(n: u32) -> PCNF {
    let v = PreRrsVars { n };
    let sn = s_n(n);
    let mut order = Vec::new();
    block(&mut order, Quant::Exists, [v.a()]);
    block(&mut order, Quant::Forall, [v.p()]);
    block(&mut order, Quant::Exists, (1..=sn).map(|i| v.y(i)));
    block(&mut order, Quant::Forall, [v.w(), v.v()]);
    block(&mut order, Quant::Exists, [v.t()]);
    block(&mut order, Quant::Exists, (1..=sn).map(|i| v.x(i)));
    block(&mut order, Quant::Forall, [v.u()]);
    block(&mut order, Quant::Exists, [v.b(), v.q(), v.r(), v.s()]);

    let flat_x = |i: u32, j: u32| v.x((i - 1) * n + j);
    let mut matrix = php_clauses(n, flat_x, &[]);
    // the t clauses precede the x clauses so that under the scheme-driven
    // propagation a y decision hits the t tautology first
    for i in 1..=sn {
        for (yi, ti) in [(true, true), (true, false), (false, true), (false, false)] {
            matrix.push(Constraint::clause([
                lit(v.y(i), yi),
                pos(v.w()),
                pos(v.v()),
                lit(v.t(), ti),
                pos(v.b()),
            ]));
        }
    }
    for i in 1..=sn {
        matrix.push(Constraint::clause([neg(v.y(i)), pos(v.x(i)), pos(v.u()), pos(v.b())]));
        matrix.push(Constraint::clause([pos(v.y(i)), neg(v.x(i)), pos(v.u()), pos(v.b())]));
    }
    matrix.push(Constraint::clause([neg(v.u()), neg(v.b())]));
    matrix.push(Constraint::clause([pos(v.v()), neg(v.b()), neg(v.r())]));
    matrix.push(Constraint::clause([neg(v.v()), pos(v.b()), pos(v.s())]));
    matrix.push(Constraint::clause([pos(v.a()), neg(v.b())]));
    matrix.push(Constraint::clause([neg(v.a()), neg(v.b())]));
    matrix.push(Constraint::clause([pos(v.p()), pos(v.q())]));
    matrix.push(Constraint::clause([neg(v.p()), neg(v.q())]));
    PCNF::new(Prefix::new(order).unwrap(), matrix).unwrap()
}

/// Variable layout: b, w1, the z row, w2, a, d, c, u, x, y, p, e1, e2.
#[derive(Clone, Copy)]
pub struct StdDepTrapVars {
    pub n: u32,
}

impl StdDepTrapVars {
    pub fn b(&self) -> u32 {
        1
    }
    pub fn w1(&self) -> u32 {
        2
    }
    pub fn z(&self, i: u32) -> u32 {
        2 + i
    }
    pub fn w2(&self) -> u32 {
        s_n(self.n) + 3
    }
    pub fn a(&self) -> u32 {
        s_n(self.n) + 4
    }
    pub fn d(&self) -> u32 {
        s_n(self.n) + 5
    }
    pub fn c(&self) -> u32 {
        s_n(self.n) + 6
    }
    pub fn u(&self) -> u32 {
        s_n(self.n) + 7
    }
    pub fn x(&self) -> u32 {
        s_n(self.n) + 8
    }
    pub fn y(&self) -> u32 {
        s_n(self.n) + 9
    }
    pub fn p(&self) -> u32 {
        s_n(self.n) + 10
    }
    pub fn e1(&self) -> u32 {
        s_n(self.n) + 11
    }
    pub fn e2(&self) -> u32 {
        s_n(self.n) + 12
    }
}

fn gen_std_dep_trap(n: u32) -> PCNF {
    let v = StdDepTrapVars { n };
    let sn = s_n(n);
    let mut order = Vec::new();
    block(&mut order, Quant::Exists, [v.b()]);
    block(&mut order, Quant::Forall, [v.w1()]);
    block(&mut order, Quant::Exists, (1..=sn).map(|i| v.z(i)));
    block(&mut order, Quant::Forall, [v.w2()]);
    block(&mut order, Quant::Exists, [v.a(), v.d(), v.c()]);
    block(&mut order, Quant::Forall, [v.u()]);
    block(&mut order, Quant::Exists, [v.x(), v.y(), v.p(), v.e1(), v.e2()]);

    let flat_z = |i: u32, j: u32| v.z((i - 1) * n + j);
    let mut matrix = php_clauses(n, flat_z, &[neg(v.b())]);
    matrix.push(Constraint::clause([pos(v.y()), pos(v.p())]));
    matrix.push(Constraint::clause([pos(v.y()), neg(v.p())]));
    matrix.push(Constraint::clause([pos(v.w1()), pos(v.e1())]));
    matrix.push(Constraint::clause([pos(v.w2()), pos(v.e2())]));
    matrix.push(Constraint::clause([pos(v.b()), pos(v.y())]));
    matrix.push(Constraint::clause([pos(v.a()), neg(v.y())]));
    matrix.push(Constraint::clause([neg(v.a()), pos(v.x())]));
    matrix.push(Constraint::clause([neg(v.c()), pos(v.u()), neg(v.x())]));
    matrix.push(Constraint::clause([pos(v.d()), pos(v.c()), neg(v.y())]));
    matrix.push(Constraint::clause([neg(v.d()), pos(v.c()), neg(v.y())]));
    PCNF::new(Prefix::new(order).unwrap(), matrix).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{parse_qdimacs, write_qdimacs};

    #[test]
    fn php_smallest() {
        let f = generate(FamilySpec::new(Family::Php, 1));
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.matrix.len(), 3);
        assert_eq!(f.matrix[0], Constraint::clause([pos(1)]));
        assert_eq!(f.matrix[1], Constraint::clause([pos(2)]));
        assert_eq!(f.matrix[2], Constraint::clause([neg(1), neg(2)]));
    }

    #[test]
    fn double_long_eq_counts() {
        for n in 1..=4 {
            let f = generate(FamilySpec::new(Family::DoubleLongEq, n));
            assert_eq!(f.num_vars(), 3 * n as usize);
            assert_eq!(f.matrix.len(), 2 * n as usize + 3);
        }
    }

    #[test]
    fn equality_is_double_long_eq_without_ut() {
        let eq = generate(FamilySpec::new(Family::Equality, 3));
        let dle = generate(FamilySpec::new(Family::DoubleLongEq, 3));
        assert_eq!(eq.matrix[..], dle.matrix[..dle.matrix.len() - 2]);
        assert_eq!(eq.prefix, dle.prefix);
    }

    #[test]
    fn two_php_and_ct_shape() {
        let n = 2;
        let f = generate(FamilySpec::new(Family::TwoPhpAndCt, n));
        let v = TwoPhpVars { n };
        assert_eq!(f.num_vars() as u32, 2 * s_n(n) + 4);
        assert!(f.prefix.is_universal(Variable::new(v.u())));
        assert!(f.prefix.is_universal(Variable::new(v.v())));
        // x and y share one existential block
        assert_eq!(
            f.prefix.block(Variable::new(v.x(1, 1))),
            f.prefix.block(Variable::new(v.y(1, 1)))
        );
        // every PHP clause of the first copy carries u
        let php_count = php_clauses(n, |i, j| v.x(i, j), &[]).len();
        for c in &f.matrix[..php_count] {
            assert!(c.contains(pos(v.u())));
        }
        for c in &f.matrix[php_count..2 * php_count] {
            assert!(c.contains(neg(v.u())));
        }
    }

    #[test]
    fn generators_roundtrip_through_qdimacs() {
        for fam in Family::ALL {
            let f = generate(FamilySpec::new(fam, 2));
            let text = write_qdimacs(&f);
            assert_eq!(parse_qdimacs(&text).unwrap(), f, "{fam}");
        }
    }

    #[test]
    fn std_dep_trap_php_carries_not_b() {
        let f = generate(FamilySpec::new(Family::StdDepTrap, 2));
        let v = StdDepTrapVars { n: 2 };
        let php_count = php_clauses(2, |i, j| v.z((i - 1) * 2 + j), &[]).len();
        for c in &f.matrix[..php_count] {
            assert!(c.contains(neg(v.b())));
        }
    }
}
