//! Optimization-model emitters and the solution importer/validator.
//!
//! Three model families are emitted, never solved in-process:
//!
//! - **LP** (fixed heights): minimize the total gap area subject to outer-edge
//!   alignment, exact cell widths, and per-column adjacency witnesses `d`
//!   that force stream connectivity.
//! - **QCQP** (variable heights): the same system with the heights as
//!   variables, bilinear width constraints, and a total-height constraint.
//! - **GP** (variable heights, relaxed areas): the floorplanning-style
//!   geometric program in monomial/posynomial standard form; cells may cover
//!   more than their weight.
//!
//! LP and QCQP serialize to the standard LP file format (decimal numbers;
//! quadratic terms in square brackets). The GP serializes to a JSON monomial
//! list with exact `p/q` coefficients. Exact rational copies of every
//! constraint are kept alongside the text, and the importer validates
//! solutions against those with exact arithmetic: rational inputs must
//! satisfy every constraint exactly, while decimal solver output is snapped
//! to rationals (denominator at most 10^9) and allowed slack up to 10^-6.

use crate::greedy::greedy_layout;
use crate::layout::{CellRect, Layout, RowHeights};
use crate::rational::{self, Rational};
use crate::table::Table;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: String },
    #[error("assignment is missing variable `{0}`")]
    MissingVariable(String),
    #[error("constraint `{name}` violated with slack {slack}")]
    ConstraintViolated { name: String, slack: String },
    #[error("geometric-program variable `{0}` must be positive")]
    NonPositiveGpVariable(String),
    #[error("cannot parse solution: {0}")]
    SolutionSyntax(String),
    #[error("model kind does not match this operation")]
    KindMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lp,
    Qcqp,
    Gp,
}

impl ModelKind {
    pub fn token(self) -> &'static str {
        match self {
            ModelKind::Lp => "lp",
            ModelKind::Qcqp => "qcqp",
            ModelKind::Gp => "gp",
        }
    }
}

/// Index into a model's variable list.
pub type VarId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    Eq,
    LessEq,
    GreaterEq,
}

impl Relation {
    fn lp_token(&self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::LessEq => "<=",
            Relation::GreaterEq => ">=",
        }
    }
}

/// Exact linear/bilinear constraint: `sum coef*x + sum coef*x*y  rel  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub linear: Vec<(Rational, VarId)>,
    pub quadratic: Vec<(Rational, VarId, VarId)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObjectiveExpr {
    pub linear: Vec<(Rational, VarId)>,
    pub quadratic: Vec<(Rational, VarId, VarId)>,
}

/// A positive-coefficient product term `coef * prod var^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coef: Rational,
    pub exps: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpRelation {
    /// Posynomial at most 1.
    LessEq,
    /// Monomial equal to 1.
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpConstraint {
    pub name: String,
    pub relation: GpRelation,
    pub terms: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpModel {
    pub objective: Vec<Monomial>,
    pub constraints: Vec<GpConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum System {
    Algebraic { objective: ObjectiveExpr, constraints: Vec<Constraint> },
    Geometric(GpModel),
}

/// An emitted model: serialized text plus the exact constraint system used
/// for validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub kind: ModelKind,
    pub text: String,
    pub var_index: BTreeMap<String, VarId>,
    var_names: Vec<String>,
    rows: usize,
    cols: usize,
    /// Heights baked into an LP model (None for QCQP/GP, where h_i are
    /// variables).
    fixed_heights: Option<RowHeights>,
    system: System,
}

impl ModelFile {
    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    pub fn constraint_count(&self) -> usize {
        match &self.system {
            System::Algebraic { constraints, .. } => constraints.len(),
            System::Geometric(gp) => gp.constraints.len(),
        }
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn gp_model(&self) -> Option<&GpModel> {
        match &self.system {
            System::Geometric(gp) => Some(gp),
            _ => None,
        }
    }
}

fn a_name(i: usize, j: usize) -> String {
    format!("a_{}_{}", i + 1, j + 1)
}

fn b_name(i: usize, j: usize) -> String {
    format!("b_{}_{}", i + 1, j + 1)
}

fn d_name(i: usize, j: usize) -> String {
    format!("d_{}_{}", i + 1, j + 1)
}

fn h_name(i: usize) -> String {
    format!("h_{}", i + 1)
}

struct VarTable {
    names: Vec<String>,
    index: BTreeMap<String, VarId>,
}

impl VarTable {
    fn new() -> Self {
        VarTable { names: Vec::new(), index: BTreeMap::new() }
    }

    fn add(&mut self, name: String) -> VarId {
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        id
    }
}

/// Exact decimal rendering for LP text; non-terminating expansions round at
/// 12 fractional digits.
fn lp_number(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let scale = BigInt::from(10u32).pow(12);
    let scaled = (r * Rational::from_integer(scale.clone())).round();
    let negative = scaled.is_negative();
    let digits = scaled.numer().abs().to_string();
    let padded = format!("{digits:0>13}");
    let (int_part, frac_part) = padded.split_at(padded.len() - 12);
    let frac_part = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

fn push_lp_terms(line: &mut String, coef: &Rational, body: &str, first: &mut bool) {
    if coef.is_zero() {
        return;
    }
    let magnitude = coef.abs();
    if *first {
        if coef.is_negative() {
            line.push_str("- ");
        }
        *first = false;
    } else if coef.is_negative() {
        line.push_str(" - ");
    } else {
        line.push_str(" + ");
    }
    if magnitude.is_one() {
        line.push_str(body);
    } else {
        let _ = write!(line, "{} {}", lp_number(&magnitude), body);
    }
}

fn render_lp_text(
    kind: ModelKind,
    objective: &ObjectiveExpr,
    constraints: &[Constraint],
    vars: &VarTable,
) -> String {
    let mut text = String::new();
    text.push_str("Minimize\n obj: ");
    let mut first = true;
    let mut line = String::new();
    for (coef, var) in &objective.linear {
        push_lp_terms(&mut line, coef, &vars.names[*var], &mut first);
    }
    if !objective.quadratic.is_empty() {
        // LP-format convention: quadratic objective terms are doubled inside
        // [ ... ] / 2.
        if !first {
            line.push(' ');
        }
        line.push_str("[ ");
        let mut qfirst = true;
        for (coef, x, y) in &objective.quadratic {
            let doubled = coef * rational::from_i64(2);
            let body = format!("{} * {}", vars.names[*x], vars.names[*y]);
            push_lp_terms(&mut line, &doubled, &body, &mut qfirst);
        }
        line.push_str(" ] / 2");
        first = false;
    }
    if first {
        line.push('0');
    }
    text.push_str(&line);
    text.push_str("\nSubject To\n");
    for constraint in constraints {
        let mut line = format!(" {}: ", constraint.name);
        let mut first = true;
        for (coef, var) in &constraint.linear {
            push_lp_terms(&mut line, coef, &vars.names[*var], &mut first);
        }
        if !constraint.quadratic.is_empty() {
            if !first {
                line.push(' ');
            }
            line.push_str("[ ");
            let mut qfirst = true;
            for (coef, x, y) in &constraint.quadratic {
                let body = format!("{} * {}", vars.names[*x], vars.names[*y]);
                push_lp_terms(&mut line, coef, &body, &mut qfirst);
            }
            line.push_str(" ]");
            first = false;
        }
        if first {
            line.push('0');
        }
        let _ = write!(line, " {} {}", constraint.relation.lp_token(), lp_number(&constraint.rhs));
        text.push_str(&line);
        text.push('\n');
    }
    text.push_str("Bounds\n");
    for name in &vars.names {
        let _ = writeln!(text, " {name} >= 0");
    }
    text.push_str("End\n");
    debug_assert!(matches!(kind, ModelKind::Lp | ModelKind::Qcqp));
    text
}

/// Emits the fixed-height linear program: 2rc position variables, (r-1)c
/// adjacency variables, and 2(r-1) + rc + 4(r-1)c constraints.
pub fn emit_lp_model(table: &Table, heights: &RowHeights) -> ModelFile {
    let (r, c) = (table.rows(), table.cols());
    assert_eq!(heights.len(), r);
    let mut vars = VarTable::new();
    let a: Vec<Vec<VarId>> =
        (0..r).map(|i| (0..c).map(|j| vars.add(a_name(i, j))).collect()).collect();
    let b: Vec<Vec<VarId>> =
        (0..r).map(|i| (0..c).map(|j| vars.add(b_name(i, j))).collect()).collect();
    let d: Vec<Vec<VarId>> =
        (0..r.saturating_sub(1)).map(|i| (0..c).map(|j| vars.add(d_name(i, j))).collect()).collect();

    let mut objective = ObjectiveExpr::default();
    for i in 0..r {
        let h = heights.get(i);
        for j in 0..c - 1 {
            objective.linear.push((h.clone(), a[i][j + 1]));
            objective.linear.push((-h.clone(), b[i][j]));
        }
    }

    let mut constraints = Vec::new();
    push_alignment_constraints(&mut constraints, &a, &b, r, c);
    for i in 0..r {
        for j in 0..c {
            constraints.push(Constraint {
                name: format!("width_{}_{}", i + 1, j + 1),
                linear: vec![(Rational::one(), b[i][j]), (-Rational::one(), a[i][j])],
                quadratic: vec![],
                relation: Relation::Eq,
                rhs: table.weight(i, j) / heights.get(i),
            });
        }
    }
    push_adjacency_constraints(&mut constraints, &a, &b, &d, r, c);

    let text = render_lp_text(ModelKind::Lp, &objective, &constraints, &vars);
    ModelFile {
        kind: ModelKind::Lp,
        text,
        var_index: vars.index.clone(),
        var_names: vars.names,
        rows: r,
        cols: c,
        fixed_heights: Some(heights.clone()),
        system: System::Algebraic { objective, constraints },
    }
}

/// Emits the variable-height QCQP: the LP system with bilinear width
/// constraints, quadratic objective, r height variables, and one
/// total-height constraint (sum h_i = H).
pub fn emit_qcqp_model(table: &Table, total_height: &Rational) -> Result<ModelFile, ModelError> {
    if !total_height.is_positive() {
        return Err(ModelError::NonPositiveParameter {
            name: "H",
            value: rational::to_string(total_height),
        });
    }
    let (r, c) = (table.rows(), table.cols());
    let mut vars = VarTable::new();
    let a: Vec<Vec<VarId>> =
        (0..r).map(|i| (0..c).map(|j| vars.add(a_name(i, j))).collect()).collect();
    let b: Vec<Vec<VarId>> =
        (0..r).map(|i| (0..c).map(|j| vars.add(b_name(i, j))).collect()).collect();
    let d: Vec<Vec<VarId>> =
        (0..r.saturating_sub(1)).map(|i| (0..c).map(|j| vars.add(d_name(i, j))).collect()).collect();
    let h: Vec<VarId> = (0..r).map(|i| vars.add(h_name(i))).collect();

    let mut objective = ObjectiveExpr::default();
    for i in 0..r {
        for j in 0..c - 1 {
            objective.quadratic.push((Rational::one(), h[i], a[i][j + 1]));
            objective.quadratic.push((-Rational::one(), h[i], b[i][j]));
        }
    }

    let mut constraints = Vec::new();
    push_alignment_constraints(&mut constraints, &a, &b, r, c);
    for i in 0..r {
        for j in 0..c {
            constraints.push(Constraint {
                name: format!("width_{}_{}", i + 1, j + 1),
                linear: vec![],
                quadratic: vec![
                    (Rational::one(), h[i], b[i][j]),
                    (-Rational::one(), h[i], a[i][j]),
                ],
                relation: Relation::Eq,
                rhs: table.weight(i, j).clone(),
            });
        }
    }
    push_adjacency_constraints(&mut constraints, &a, &b, &d, r, c);
    constraints.push(Constraint {
        name: "total_height".into(),
        linear: h.iter().map(|&v| (Rational::one(), v)).collect(),
        quadratic: vec![],
        relation: Relation::Eq,
        rhs: total_height.clone(),
    });

    let text = render_lp_text(ModelKind::Qcqp, &objective, &constraints, &vars);
    Ok(ModelFile {
        kind: ModelKind::Qcqp,
        text,
        var_index: vars.index.clone(),
        var_names: vars.names,
        rows: r,
        cols: c,
        fixed_heights: None,
        system: System::Algebraic { objective, constraints },
    })
}

fn push_alignment_constraints(
    constraints: &mut Vec<Constraint>,
    a: &[Vec<VarId>],
    b: &[Vec<VarId>],
    r: usize,
    c: usize,
) {
    for i in 0..r.saturating_sub(1) {
        constraints.push(Constraint {
            name: format!("align_a_{}", i + 1),
            linear: vec![(Rational::one(), a[i][0]), (-Rational::one(), a[i + 1][0])],
            quadratic: vec![],
            relation: Relation::Eq,
            rhs: Rational::zero(),
        });
        constraints.push(Constraint {
            name: format!("align_b_{}", i + 1),
            linear: vec![(Rational::one(), b[i][c - 1]), (-Rational::one(), b[i + 1][c - 1])],
            quadratic: vec![],
            relation: Relation::Eq,
            rhs: Rational::zero(),
        });
    }
}

fn push_adjacency_constraints(
    constraints: &mut Vec<Constraint>,
    a: &[Vec<VarId>],
    b: &[Vec<VarId>],
    d: &[Vec<VarId>],
    r: usize,
    c: usize,
) {
    for i in 0..r.saturating_sub(1) {
        for j in 0..c {
            let pairs = [
                ("adj_low_up", d[i][j], a[i][j]),
                ("adj_high_up", b[i][j], d[i][j]),
                ("adj_low_dn", d[i][j], a[i + 1][j]),
                ("adj_high_dn", b[i + 1][j], d[i][j]),
            ];
            for (tag, hi, lo) in pairs {
                constraints.push(Constraint {
                    name: format!("{}_{}_{}", tag, i + 1, j + 1),
                    linear: vec![(Rational::one(), hi), (-Rational::one(), lo)],
                    quadratic: vec![],
                    relation: Relation::GreaterEq,
                    rhs: Rational::zero(),
                });
            }
        }
    }
}

fn monomial(coef: Rational, factors: &[(&str, i64)]) -> Monomial {
    assert!(coef.is_positive(), "posynomial coefficients must be positive");
    Monomial { coef, exps: factors.iter().map(|&(v, e)| (v.to_string(), e)).collect() }
}

/// Emits the geometric program in monomial-list form: the area objective
/// `sum h_j * b_{j,c}`, alignment as monomial equalities, relaxed widths as
/// posynomials, adjacency inequalities as monomials, and the global height
/// and width caps.
pub fn emit_gp_model(
    table: &Table,
    max_width: &Rational,
    max_height: &Rational,
) -> Result<ModelFile, ModelError> {
    if !max_width.is_positive() {
        return Err(ModelError::NonPositiveParameter {
            name: "W",
            value: rational::to_string(max_width),
        });
    }
    if !max_height.is_positive() {
        return Err(ModelError::NonPositiveParameter {
            name: "H",
            value: rational::to_string(max_height),
        });
    }
    let (r, c) = (table.rows(), table.cols());
    let mut vars = VarTable::new();
    for i in 0..r {
        for j in 0..c {
            vars.add(a_name(i, j));
        }
    }
    for i in 0..r {
        for j in 0..c {
            vars.add(b_name(i, j));
        }
    }
    for i in 0..r {
        vars.add(h_name(i));
    }

    let objective: Vec<Monomial> = (0..r)
        .map(|i| monomial(Rational::one(), &[(&h_name(i), 1), (&b_name(i, c - 1), 1)]))
        .collect();

    let mut constraints = Vec::new();
    for i in 0..r.saturating_sub(1) {
        constraints.push(GpConstraint {
            name: format!("align_a_{}", i + 1),
            relation: GpRelation::Eq,
            terms: vec![monomial(
                Rational::one(),
                &[(&a_name(i, 0), 1), (&a_name(i + 1, 0), -1)],
            )],
        });
    }
    for i in 0..r.saturating_sub(1) {
        constraints.push(GpConstraint {
            name: format!("align_b_{}", i + 1),
            relation: GpRelation::Eq,
            terms: vec![monomial(
                Rational::one(),
                &[(&b_name(i, c - 1), 1), (&b_name(i + 1, c - 1), -1)],
            )],
        });
    }
    for i in 0..r {
        for j in 0..c {
            constraints.push(GpConstraint {
                name: format!("width_{}_{}", i + 1, j + 1),
                relation: GpRelation::LessEq,
                terms: vec![
                    monomial(
                        table.weight(i, j).clone(),
                        &[(&h_name(i), -1), (&b_name(i, j), -1)],
                    ),
                    monomial(Rational::one(), &[(&a_name(i, j), 1), (&b_name(i, j), -1)]),
                ],
            });
        }
    }
    for i in 0..r {
        for j in 0..c {
            constraints.push(GpConstraint {
                name: format!("order_{}_{}", i + 1, j + 1),
                relation: GpRelation::LessEq,
                terms: vec![monomial(
                    Rational::one(),
                    &[(&a_name(i, j), 1), (&b_name(i, j), -1)],
                )],
            });
        }
    }
    for i in 0..r.saturating_sub(1) {
        for j in 0..c {
            constraints.push(GpConstraint {
                name: format!("adj_dn_{}_{}", i + 1, j + 1),
                relation: GpRelation::LessEq,
                terms: vec![monomial(
                    Rational::one(),
                    &[(&a_name(i, j), 1), (&b_name(i + 1, j), -1)],
                )],
            });
        }
    }
    for i in 0..r.saturating_sub(1) {
        for j in 0..c {
            constraints.push(GpConstraint {
                name: format!("adj_up_{}_{}", i + 1, j + 1),
                relation: GpRelation::LessEq,
                terms: vec![monomial(
                    Rational::one(),
                    &[(&a_name(i + 1, j), 1), (&b_name(i, j), -1)],
                )],
            });
        }
    }
    constraints.push(GpConstraint {
        name: "total_height".into(),
        relation: GpRelation::LessEq,
        terms: (0..r)
            .map(|i| monomial(max_height.recip(), &[(&h_name(i), 1)]))
            .collect(),
    });
    constraints.push(GpConstraint {
        name: "total_width".into(),
        relation: GpRelation::LessEq,
        terms: vec![monomial(max_width.recip(), &[(&b_name(0, c - 1), 1)])],
    });

    let gp = GpModel { objective, constraints };
    let text = gp_to_json(&gp);
    Ok(ModelFile {
        kind: ModelKind::Gp,
        text,
        var_index: vars.index.clone(),
        var_names: vars.names,
        rows: r,
        cols: c,
        fixed_heights: None,
        system: System::Geometric(gp),
    })
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coef: String,
    exps: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
struct GpConstraintJson {
    name: String,
    relation: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct GpJson {
    objective: Vec<TermJson>,
    constraints: Vec<GpConstraintJson>,
}

fn term_to_json(m: &Monomial) -> TermJson {
    TermJson { coef: rational::to_string(&m.coef), exps: m.exps.clone() }
}

/// Serializes a GP model to the documented JSON monomial-list schema.
pub fn gp_to_json(gp: &GpModel) -> String {
    let doc = GpJson {
        objective: gp.objective.iter().map(term_to_json).collect(),
        constraints: gp
            .constraints
            .iter()
            .map(|c| GpConstraintJson {
                name: c.name.clone(),
                relation: match c.relation {
                    GpRelation::LessEq => "<=".into(),
                    GpRelation::Eq => "=".into(),
                },
                terms: c.terms.iter().map(term_to_json).collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("gp serialization");
    text.push('\n');
    text
}

/// Parses the GP JSON schema back into a model.
pub fn gp_from_json(text: &str) -> Result<GpModel, ModelError> {
    let doc: GpJson =
        serde_json::from_str(text).map_err(|e| ModelError::SolutionSyntax(e.to_string()))?;
    let term = |t: &TermJson| -> Result<Monomial, ModelError> {
        let coef =
            rational::parse(&t.coef).map_err(|e| ModelError::SolutionSyntax(e.to_string()))?;
        if !coef.is_positive() {
            return Err(ModelError::SolutionSyntax(format!(
                "monomial coefficient {} is not positive",
                t.coef
            )));
        }
        Ok(Monomial { coef, exps: t.exps.clone() })
    };
    Ok(GpModel {
        objective: doc.objective.iter().map(&term).collect::<Result<_, _>>()?,
        constraints: doc
            .constraints
            .iter()
            .map(|c| {
                let relation = match c.relation.as_str() {
                    "<=" => GpRelation::LessEq,
                    "=" => GpRelation::Eq,
                    other => {
                        return Err(ModelError::SolutionSyntax(format!(
                            "unknown relation `{other}`"
                        )))
                    }
                };
                Ok(GpConstraint {
                    name: c.name.clone(),
                    relation,
                    terms: c.terms.iter().map(&term).collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<_, _>>()?,
    })
}

/// A parsed variable assignment plus whether any value used float notation
/// (which selects the slack tolerance).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<String, Rational>,
    pub from_float: bool,
}

impl Assignment {
    pub fn exact(values: BTreeMap<String, Rational>) -> Self {
        Assignment { values, from_float: false }
    }
}

/// Denominator bound for snapping decimal solver output to rationals.
pub fn float_denominator_bound() -> BigInt {
    BigInt::from(1_000_000_000u64)
}

/// Slack tolerance applied to solutions that used float notation.
pub fn float_slack_tolerance() -> Rational {
    rational::pow10_inv(6)
}

/// Parses solver output: either a JSON object mapping names to values, or
/// plain `name value` lines (comments starting with `#` ignored). Decimal
/// values are snapped to rationals with denominator at most 10^9.
pub fn parse_solution(text: &str) -> Result<Assignment, ModelError> {
    let trimmed = text.trim_start();
    let mut from_float = false;
    let bound = float_denominator_bound();
    let mut values = BTreeMap::new();
    if trimmed.starts_with('{') {
        let doc: BTreeMap<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| ModelError::SolutionSyntax(e.to_string()))?;
        for (name, value) in doc {
            let parsed = match &value {
                serde_json::Value::String(s) => {
                    if rational::is_float_notation(s) {
                        from_float = true;
                    }
                    rational::parse(s).map_err(|e| ModelError::SolutionSyntax(e.to_string()))?
                }
                serde_json::Value::Number(n) => {
                    let raw = n.to_string();
                    if rational::is_float_notation(&raw) {
                        from_float = true;
                    }
                    rational::parse(&raw)
                        .map_err(|e| ModelError::SolutionSyntax(e.to_string()))?
                }
                other => {
                    return Err(ModelError::SolutionSyntax(format!(
                        "value for `{name}` must be a string or number, got {other}"
                    )))
                }
            };
            values.insert(name, rational::limit_denominator(&parsed, &bound));
        }
    } else {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (name, value) = match (parts.next(), parts.next(), parts.next()) {
                (Some(n), Some(v), None) => (n, v),
                _ => {
                    return Err(ModelError::SolutionSyntax(format!(
                        "expected `name value`, got `{line}`"
                    )))
                }
            };
            if rational::is_float_notation(value) {
                from_float = true;
            }
            let parsed =
                rational::parse(value).map_err(|e| ModelError::SolutionSyntax(e.to_string()))?;
            values.insert(name.to_string(), rational::limit_denominator(&parsed, &bound));
        }
    }
    Ok(Assignment { values, from_float })
}

/// Builds the exact assignment induced by a layout: positions from the
/// rects, adjacency witnesses at the shared x of each touching pair, and
/// heights when the model has height variables.
pub fn assignment_from_layout(model: &ModelFile, layout: &Layout) -> Assignment {
    let (r, c) = (model.rows, model.cols);
    let mut values = BTreeMap::new();
    for i in 0..r {
        for j in 0..c {
            let rect = layout.rect(i, j);
            values.insert(a_name(i, j), rect.left.clone());
            values.insert(b_name(i, j), rect.right.clone());
        }
    }
    if model.var_index.contains_key(&d_name(0, 0)) {
        for i in 0..r.saturating_sub(1) {
            for j in 0..c {
                let upper = layout.rect(i, j);
                let lower = layout.rect(i + 1, j);
                // Any shared x works; the max of the lefts lies in both
                // intervals whenever the pair is adjacent.
                let witness = std::cmp::max(upper.left.clone(), lower.left.clone());
                values.insert(d_name(i, j), witness);
            }
        }
    }
    if model.var_index.contains_key(&h_name(0)) {
        for i in 0..r {
            values.insert(h_name(i), layout.heights().get(i).clone());
        }
    }
    Assignment::exact(values)
}

/// A cell whose GP rectangle covers more than its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OversizedCell {
    pub row: usize,
    pub col: usize,
    pub area_excess: Rational,
}

/// Validation outcome for an imported solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionImport {
    pub kind: ModelKind,
    /// Every constraint held with zero slack.
    pub exact: bool,
    /// Model objective evaluated at the assignment.
    pub objective: Rational,
    /// GP only: cells allowed to exceed their weights, reported and never
    /// shrunk (shrinking could disconnect streams).
    pub oversized_cells: Vec<OversizedCell>,
    /// The validated layout. Built directly from the assignment when it is
    /// exactly feasible; rebuilt by the greedy algorithm from the imported
    /// heights when the solution is only float-close or its geometry cannot
    /// form a strict layout (GP with oversized cells).
    pub layout: Option<Layout>,
    /// True when `layout` was rebuilt from the heights instead of taken
    /// verbatim.
    pub relaid_from_heights: bool,
}

fn eval_linear(
    linear: &[(Rational, VarId)],
    quadratic: &[(Rational, VarId, VarId)],
    values: &[Rational],
) -> Rational {
    let mut total = Rational::zero();
    for (coef, var) in linear {
        total += coef * &values[*var];
    }
    for (coef, x, y) in quadratic {
        total += coef * &values[*x] * &values[*y];
    }
    total
}

fn eval_monomial(m: &Monomial, values: &BTreeMap<String, Rational>) -> Result<Rational, ModelError> {
    let mut total = m.coef.clone();
    for (name, &exp) in &m.exps {
        let value = values.get(name).ok_or_else(|| ModelError::MissingVariable(name.clone()))?;
        if !value.is_positive() {
            return Err(ModelError::NonPositiveGpVariable(name.clone()));
        }
        total *= value.pow(exp as i32);
    }
    Ok(total)
}

/// Checks every model constraint at the assignment with exact arithmetic and,
/// on success, produces a layout. Rational assignments must satisfy the
/// model exactly; assignments that used float notation are allowed slack up
/// to 10^-6 per constraint, and their layout is rebuilt by the greedy
/// algorithm from the imported heights.
pub fn import_and_validate_solution(
    model: &ModelFile,
    assignment: &Assignment,
    table: &Table,
) -> Result<SolutionImport, ModelError> {
    let tolerance =
        if assignment.from_float { float_slack_tolerance() } else { Rational::zero() };
    for name in &model.var_names {
        if !assignment.values.contains_key(name) {
            return Err(ModelError::MissingVariable(name.clone()));
        }
    }

    match &model.system {
        System::Algebraic { objective, constraints } => {
            let values: Vec<Rational> = model
                .var_names
                .iter()
                .map(|n| assignment.values[n].clone())
                .collect();
            let mut exact = true;
            for constraint in constraints {
                let value = eval_linear(&constraint.linear, &constraint.quadratic, &values);
                let slack = match constraint.relation {
                    Relation::Eq => (&value - &constraint.rhs).abs(),
                    Relation::LessEq => {
                        std::cmp::max(Rational::zero(), &value - &constraint.rhs)
                    }
                    Relation::GreaterEq => {
                        std::cmp::max(Rational::zero(), &constraint.rhs - &value)
                    }
                };
                if slack > tolerance {
                    return Err(ModelError::ConstraintViolated {
                        name: constraint.name.clone(),
                        slack: rational::to_string(&slack),
                    });
                }
                if !slack.is_zero() {
                    exact = false;
                }
            }
            let objective_value = eval_linear(&objective.linear, &objective.quadratic, &values);

            let heights = match (&model.fixed_heights, model.var_index.get(&h_name(0))) {
                (Some(fixed), _) => fixed.clone(),
                (None, Some(_)) => RowHeights::new(
                    (0..model.rows).map(|i| assignment.values[&h_name(i)].clone()).collect(),
                )
                .map_err(|_| ModelError::NonPositiveGpVariable(h_name(0)))?,
                (None, None) => unreachable!("algebraic models fix heights or carry h variables"),
            };
            let (layout, relaid) = if exact {
                match layout_from_assignment(model, table, &heights, &assignment.values) {
                    Some(layout) => (Some(layout), false),
                    None => (Some(greedy_layout(table, &heights)), true),
                }
            } else {
                (Some(greedy_layout(table, &heights)), true)
            };
            Ok(SolutionImport {
                kind: model.kind,
                exact,
                objective: objective_value,
                oversized_cells: Vec::new(),
                layout,
                relaid_from_heights: relaid,
            })
        }
        System::Geometric(gp) => {
            let mut exact = true;
            for constraint in &gp.constraints {
                let mut total = Rational::zero();
                for term in &constraint.terms {
                    total += eval_monomial(term, &assignment.values)?;
                }
                let one = Rational::one();
                let slack = match constraint.relation {
                    GpRelation::LessEq => std::cmp::max(Rational::zero(), &total - &one),
                    GpRelation::Eq => (&total - &one).abs(),
                };
                if slack > tolerance {
                    return Err(ModelError::ConstraintViolated {
                        name: constraint.name.clone(),
                        slack: rational::to_string(&slack),
                    });
                }
                if !slack.is_zero() {
                    exact = false;
                }
            }
            let mut objective_value = Rational::zero();
            for term in &gp.objective {
                objective_value += eval_monomial(term, &assignment.values)?;
            }

            let heights = RowHeights::new(
                (0..model.rows).map(|i| assignment.values[&h_name(i)].clone()).collect(),
            )
            .map_err(|_| ModelError::NonPositiveGpVariable(h_name(0)))?;

            // Cells may legally cover more than their weight; report, never
            // shrink.
            let mut oversized = Vec::new();
            for i in 0..model.rows {
                for j in 0..model.cols {
                    let width = &assignment.values[&b_name(i, j)]
                        - &assignment.values[&a_name(i, j)];
                    let area = width * heights.get(i);
                    let excess = &area - table.weight(i, j);
                    if excess.is_positive() {
                        oversized.push(OversizedCell { row: i, col: j, area_excess: excess });
                    }
                }
            }

            let (layout, relaid) = if exact && oversized.is_empty() {
                match layout_from_assignment(model, table, &heights, &assignment.values) {
                    Some(layout) => (Some(layout), false),
                    None => (Some(greedy_layout(table, &heights)), true),
                }
            } else {
                (Some(greedy_layout(table, &heights)), true)
            };
            Ok(SolutionImport {
                kind: model.kind,
                exact,
                objective: objective_value,
                oversized_cells: oversized,
                layout,
                relaid_from_heights: relaid,
            })
        }
    }
}

fn layout_from_assignment(
    model: &ModelFile,
    table: &Table,
    heights: &RowHeights,
    values: &BTreeMap<String, Rational>,
) -> Option<Layout> {
    let (r, c) = (model.rows, model.cols);
    let mut rects = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            rects.push(CellRect {
                row: i,
                col: j,
                left: values[&a_name(i, j)].clone(),
                right: values[&b_name(i, j)].clone(),
                height: heights.get(i).clone(),
            });
        }
    }
    Layout::new(table.clone(), heights.clone(), (0..r).collect(), rects).ok()
}
