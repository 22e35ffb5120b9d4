//! Mixed-variable search spaces with hierarchical activation conditions.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A single entry of an assignment. `Na` marks an inactive variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Cat(String),
    Na,
}

impl Value {
    pub fn is_na(&self) -> bool {
        matches!(self, Value::Na)
    }

    /// Numeric view of a continuous or integer value.
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Real(v) => Some(v),
            Value::Int(v) => Some(v as f64),
            _ => None,
        }
    }

    pub fn as_label(&self) -> Option<&str> {
        match self {
            Value::Cat(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Cat(s) => f.write_str(s),
            Value::Na => f.write_str("NA"),
        }
    }
}

/// A parent value that activates a conditioned variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Level {
    Number(f64),
    Label(String),
}

impl Level {
    pub fn matches(&self, value: &Value) -> bool {
        match (self, value) {
            (Level::Label(l), Value::Cat(c)) => l == c,
            (Level::Number(x), Value::Int(i)) => *x == *i as f64,
            (Level::Number(x), Value::Real(r)) => x == r,
            _ => false,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Number(x) => write!(f, "{x}"),
            Level::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub parent: String,
    pub values: Vec<Level>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Continuous,
    Integer,
    Categorical,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Continuous { lower: f64, upper: f64 },
    Integer { lower: i64, upper: i64 },
    Categorical { categories: Vec<String> },
}

impl Domain {
    pub fn kind(&self) -> Kind {
        match self {
            Domain::Continuous { .. } => Kind::Continuous,
            Domain::Integer { .. } => Kind::Integer,
            Domain::Categorical { .. } => Kind::Categorical,
        }
    }

    /// Known numeric bounds of a continuous or integer domain.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Domain::Continuous { lower, upper } => Some((lower, upper)),
            Domain::Integer { lower, upper } => Some((lower as f64, upper as f64)),
            Domain::Categorical { .. } => None,
        }
    }

    pub fn categories(&self) -> Option<&[String]> {
        match self {
            Domain::Categorical { categories } => Some(categories),
            _ => None,
        }
    }

    /// Whether `value` is a non-NA member of this domain.
    pub fn contains(&self, value: &Value) -> bool {
        match (self, value) {
            (Domain::Continuous { lower, upper }, Value::Real(v)) => v.is_finite() && *lower <= *v && *v <= *upper,
            (Domain::Integer { lower, upper }, Value::Int(v)) => lower <= v && v <= upper,
            (Domain::Categorical { categories }, Value::Cat(c)) => categories.contains(c),
            _ => false,
        }
    }

    fn contains_level(&self, level: &Level) -> bool {
        match (self, level) {
            (Domain::Categorical { categories }, Level::Label(l)) => categories.contains(l),
            (Domain::Integer { lower, upper }, Level::Number(x)) => {
                libm::trunc(*x) == *x && (*lower as f64) <= *x && *x <= (*upper as f64)
            }
            (Domain::Continuous { lower, upper }, Level::Number(x)) => lower <= x && x <= upper,
            _ => false,
        }
    }
}

/// A decision variable. Serialized flat as
/// `{"id","kind","lower","upper","categories","condition"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVariable", into = "RawVariable")]
pub struct VariableSpec {
    pub id: String,
    pub domain: Domain,
    pub condition: Option<Condition>,
}

impl VariableSpec {
    pub fn continuous(id: &str, lower: f64, upper: f64) -> Self {
        Self { id: id.to_owned(), domain: Domain::Continuous { lower, upper }, condition: None }
    }

    pub fn integer(id: &str, lower: i64, upper: i64) -> Self {
        Self { id: id.to_owned(), domain: Domain::Integer { lower, upper }, condition: None }
    }

    pub fn categorical(id: &str, categories: &[&str]) -> Self {
        Self {
            id: id.to_owned(),
            domain: Domain::Categorical { categories: categories.iter().map(|c| (*c).to_owned()).collect() },
            condition: None,
        }
    }

    /// Makes the variable active only when `parent` takes one of `values`.
    pub fn when(mut self, parent: &str, values: Vec<Level>) -> Self {
        self.condition = Some(Condition { parent: parent.to_owned(), values });
        self
    }

    pub fn kind(&self) -> Kind {
        self.domain.kind()
    }
}

#[derive(Serialize, Deserialize)]
struct RawVariable {
    id: String,
    kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    categories: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    condition: Option<Condition>,
}

impl TryFrom<RawVariable> for VariableSpec {
    type Error = String;

    fn try_from(raw: RawVariable) -> core::result::Result<Self, String> {
        let bounds = |what: &str| match (raw.lower, raw.upper) {
            (Some(l), Some(u)) => Ok((l, u)),
            _ => Err(format!("{what} variable `{}` needs `lower` and `upper`", raw.id)),
        };
        let domain = match raw.kind {
            Kind::Continuous => {
                let (lower, upper) = bounds("continuous")?;
                Domain::Continuous { lower, upper }
            }
            Kind::Integer => {
                let (l, u) = bounds("integer")?;
                if libm::trunc(l) != l || libm::trunc(u) != u {
                    return Err(format!("integer variable `{}` has fractional bounds", raw.id));
                }
                Domain::Integer { lower: l as i64, upper: u as i64 }
            }
            Kind::Categorical => Domain::Categorical {
                categories: raw
                    .categories
                    .ok_or_else(|| format!("categorical variable `{}` needs `categories`", raw.id))?,
            },
        };
        Ok(VariableSpec { id: raw.id, domain, condition: raw.condition })
    }
}

impl From<VariableSpec> for RawVariable {
    fn from(v: VariableSpec) -> Self {
        let kind = v.kind();
        let (lower, upper, categories) = match v.domain {
            Domain::Continuous { lower, upper } => (Some(lower), Some(upper), None),
            Domain::Integer { lower, upper } => (Some(lower as f64), Some(upper as f64), None),
            Domain::Categorical { categories } => (None, None, Some(categories)),
        };
        RawVariable { id: v.id, kind, lower, upper, categories, condition: v.condition }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Empty,
    DuplicateId,
    Bounds,
    Cardinality,
    DuplicateCategory,
    UnknownParent,
    ActivatingValues,
    Cycle,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Empty => "empty",
            ViolationKind::DuplicateId => "duplicate id",
            ViolationKind::Bounds => "bounds",
            ViolationKind::Cardinality => "cardinality",
            ViolationKind::DuplicateCategory => "duplicate category",
            ViolationKind::UnknownParent => "unknown parent",
            ViolationKind::ActivatingValues => "activating values",
            ViolationKind::Cycle => "cycle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub name: String,
    pub variables: Vec<VariableSpec>,
}

impl SearchSpace {
    pub fn new(name: &str, variables: Vec<VariableSpec>) -> Self {
        Self { name: name.to_owned(), variables }
    }

    /// Number of decision variables, D.
    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.id == id)
    }

    pub fn n_categorical(&self) -> usize {
        self.variables.iter().filter(|v| v.kind() == Kind::Categorical).count()
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |kind, message: String| out.push(Violation { kind, message });

        if self.variables.is_empty() {
            push(ViolationKind::Empty, "space has no variables".to_string());
        }
        for (i, v) in self.variables.iter().enumerate() {
            if self.variables[..i].iter().any(|w| w.id == v.id) {
                push(ViolationKind::DuplicateId, format!("`{}` declared more than once", v.id));
            }
            match &v.domain {
                Domain::Continuous { lower, upper } => {
                    if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                        push(
                            ViolationKind::Bounds,
                            format!("`{}` needs finite lower < upper, got [{lower}, {upper}]", v.id),
                        );
                    }
                }
                Domain::Integer { lower, upper } => {
                    if lower > upper {
                        push(ViolationKind::Bounds, format!("`{}` needs lower <= upper, got [{lower}, {upper}]", v.id));
                    }
                }
                Domain::Categorical { categories } => {
                    if categories.len() < 2 {
                        push(
                            ViolationKind::Cardinality,
                            format!("`{}` has {} categories, at least 2 required", v.id, categories.len()),
                        );
                    }
                    for (j, c) in categories.iter().enumerate() {
                        if categories[..j].contains(c) {
                            push(ViolationKind::DuplicateCategory, format!("`{}` lists category `{c}` twice", v.id));
                        }
                    }
                }
            }
            if let Some(cond) = &v.condition {
                match self.variables.iter().find(|w| w.id == cond.parent) {
                    None => push(
                        ViolationKind::UnknownParent,
                        format!("`{}` is conditioned on unknown `{}`", v.id, cond.parent),
                    ),
                    Some(parent) => {
                        if cond.values.is_empty() {
                            push(ViolationKind::ActivatingValues, format!("`{}` has an empty activating set", v.id));
                        }
                        for level in &cond.values {
                            if !parent.domain.contains_level(level) {
                                push(
                                    ViolationKind::ActivatingValues,
                                    format!("`{}` activates on `{level}`, outside the domain of `{}`", v.id, parent.id),
                                );
                            }
                        }
                    }
                }
            }
        }
        for id in self.cycle_members() {
            push(ViolationKind::Cycle, format!("`{id}` lies on a condition cycle"));
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Returns an error carrying every violation if the space is invalid.
    pub fn check(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
        Err(Error::InvalidSpace(msg.join("; ")))
    }

    fn parent_index(&self, i: usize) -> Option<usize> {
        self.variables[i].condition.as_ref().and_then(|c| self.index_of(&c.parent))
    }

    fn cycle_members(&self) -> Vec<String> {
        let mut out = Vec::new();
        for start in 0..self.variables.len() {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = self.parent_index(cur) {
                steps += 1;
                if p == start {
                    out.push(self.variables[start].id.clone());
                    break;
                }
                if steps > self.variables.len() {
                    break;
                }
                cur = p;
            }
        }
        out
    }

    /// Variable indices ordered so that every parent precedes its children.
    /// Assumes a validated (acyclic) space.
    pub fn dependency_order(&self) -> Vec<usize> {
        let d = self.variables.len();
        let depth: Vec<usize> = (0..d)
            .map(|i| {
                let mut depth = 0;
                let mut cur = i;
                while let Some(p) = self.parent_index(cur) {
                    depth += 1;
                    cur = p;
                    if depth > d {
                        break;
                    }
                }
                depth
            })
            .collect();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&i| (depth[i], i));
        order
    }

    /// Activity mask of an assignment. A variable is active iff it has no
    /// condition, or its parent is active and takes an activating value.
    pub fn active_mask(&self, assignment: &[Value]) -> Result<Vec<bool>> {
        if assignment.len() != self.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), got: assignment.len() });
        }
        for (v, a) in self.variables.iter().zip(assignment) {
            if v.condition.is_none() && a.is_na() {
                return Err(Error::NaOnUnconditioned(v.id.clone()));
            }
        }
        let mut active = vec![false; self.dim()];
        for i in self.dependency_order() {
            active[i] = match &self.variables[i].condition {
                None => true,
                Some(cond) => match self.index_of(&cond.parent) {
                    Some(p) => active[p] && cond.values.iter().any(|l| l.matches(&assignment[p])),
                    None => false,
                },
            };
        }
        Ok(active)
    }

    /// Ids of the active variables, in declaration order.
    pub fn active_variables(&self, assignment: &[Value]) -> Result<Vec<&str>> {
        let mask = self.active_mask(assignment)?;
        Ok(self.variables.iter().zip(mask).filter(|(_, a)| *a).map(|(v, _)| v.id.as_str()).collect())
    }

    /// Verifies that values are in their domains and NA sits exactly on the
    /// inactive variables. Returns the activity mask.
    pub fn check_feasible(&self, assignment: &[Value]) -> Result<Vec<bool>> {
        let mask = self.active_mask(assignment)?;
        for ((v, a), active) in self.variables.iter().zip(assignment).zip(&mask) {
            match (active, a.is_na()) {
                (true, true) => return Err(Error::Infeasible(format!("active variable `{}` is NA", v.id))),
                (false, false) => {
                    return Err(Error::Infeasible(format!("inactive variable `{}` carries value {a}", v.id)))
                }
                (true, false) if !v.domain.contains(a) => {
                    return Err(Error::OutOfDomain { var: v.id.clone(), detail: a.to_string() })
                }
                _ => {}
            }
        }
        Ok(mask)
    }
}

/// Objective of a problem: maps a feasible assignment to a finite value.
pub type Objective = dyn Fn(&[Value]) -> f64 + Send + Sync;

/// A search space together with its deterministic objective.
#[derive(Clone)]
pub struct Problem {
    space: SearchSpace,
    objective: Arc<Objective>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem").field("space", &self.space).finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new<F>(space: SearchSpace, objective: F) -> Result<Self>
    where
        F: Fn(&[Value]) -> f64 + Send + Sync + 'static,
    {
        space.check()?;
        Ok(Self { space, objective: Arc::new(objective) })
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn name(&self) -> &str {
        &self.space.name
    }

    /// Evaluates a feasible assignment.
    pub fn evaluate(&self, assignment: &[Value]) -> Result<f64> {
        self.space.check_feasible(assignment)?;
        let y = (self.objective)(assignment);
        if !y.is_finite() {
            return Err(Error::NonFinite(format!("objective of `{}` returned {y}", self.name())));
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

    fn fig2() -> SearchSpace {
        problems::hier1().space().clone()
    }

    #[test]
    fn minimal_space_is_valid() {
        let s = SearchSpace::new("one", vec![VariableSpec::continuous("x", 0.0, 1.0)]);
        assert!(s.validate().is_empty());
    }

    #[test]
    fn self_condition_is_a_cycle() {
        let s = SearchSpace::new("loop", vec![VariableSpec::integer("k", 0, 3).when("k", vec![Level::Number(1.0)])]);
        let v = s.validate();
        assert!(v.iter().any(|v| v.kind == ViolationKind::Cycle), "{v:?}");
    }

    #[test]
    fn longer_cycle_reports_every_member() {
        let s = SearchSpace::new(
            "loop",
            vec![
                VariableSpec::categorical("a", &["x", "y"]).when("b", vec![Level::Label("x".into())]),
                VariableSpec::categorical("b", &["x", "y"]).when("a", vec![Level::Label("x".into())]),
            ],
        );
        let cycles = s.validate().into_iter().filter(|v| v.kind == ViolationKind::Cycle).count();
        assert_eq!(cycles, 2);
    }

    #[test]
    fn single_category_violates_cardinality() {
        let s = SearchSpace::new("c", vec![VariableSpec::categorical("c", &["only"])]);
        let v = s.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Cardinality);
    }

    #[test]
    fn all_violations_are_reported() {
        let s = SearchSpace::new(
            "bad",
            vec![
                VariableSpec::continuous("x", 1.0, 1.0),
                VariableSpec::continuous("x", 0.0, 1.0),
                VariableSpec::categorical("c", &["a", "a"]),
                VariableSpec::integer("k", 0, 1).when("nope", vec![Level::Number(0.0)]),
                VariableSpec::integer("m", 0, 1).when("c", vec![Level::Label("z".into())]),
            ],
        );
        let kinds: Vec<_> = s.validate().into_iter().map(|v| v.kind).collect();
        for k in [
            ViolationKind::Bounds,
            ViolationKind::DuplicateId,
            ViolationKind::DuplicateCategory,
            ViolationKind::UnknownParent,
            ViolationKind::ActivatingValues,
        ] {
            assert!(kinds.contains(&k), "{k:?} missing from {kinds:?}");
        }
        assert!(s.check().is_err());
    }

    #[test]
    fn empty_space_is_invalid() {
        let s = SearchSpace::new("e", vec![]);
        assert_eq!(s.validate()[0].kind, ViolationKind::Empty);
    }

    #[test]
    fn fig2_activity() {
        let s = fig2();
        let a = s.active_variables(&[Value::Cat("a".into()), Value::Na]).unwrap();
        assert_eq!(a, vec!["X_cat"]);
        let b = s.active_variables(&[Value::Cat("b".into()), Value::Real(3.5)]).unwrap();
        assert_eq!(b, vec!["X_cat", "X_cont"]);
    }

    #[test]
    fn unconditioned_space_is_fully_active() {
        let s = SearchSpace::new("u", vec![VariableSpec::continuous("x", 0.0, 1.0), VariableSpec::integer("k", 0, 2)]);
        let a = s.active_variables(&[Value::Real(0.3), Value::Int(1)]).unwrap();
        assert_eq!(a, vec!["x", "k"]);
    }

    #[test]
    fn activity_errors() {
        let s = fig2();
        assert_eq!(s.active_mask(&[Value::Cat("a".into())]), Err(Error::LengthMismatch { expected: 2, got: 1 }));
        assert_eq!(s.active_mask(&[Value::Na, Value::Na]), Err(Error::NaOnUnconditioned("X_cat".into())));
    }

    #[test]
    fn chains_are_conjunctive() {
        // z active iff y active and y = 1; y active iff x = "on".
        let s = SearchSpace::new(
            "chain",
            vec![
                VariableSpec::integer("z", 0, 5).when("y", vec![Level::Number(1.0)]),
                VariableSpec::integer("y", 0, 1).when("x", vec![Level::Label("on".into())]),
                VariableSpec::categorical("x", &["on", "off"]),
            ],
        );
        assert!(s.is_valid());
        assert_eq!(s.dependency_order(), vec![2, 1, 0]);
        let m = s.active_mask(&[Value::Int(3), Value::Int(1), Value::Cat("on".into())]).unwrap();
        assert_eq!(m, vec![true, true, true]);
        let m = s.active_mask(&[Value::Na, Value::Int(0), Value::Cat("on".into())]).unwrap();
        assert_eq!(m, vec![false, true, true]);
        // y = 1 would activate z, but y itself is inactive.
        let m = s.active_mask(&[Value::Na, Value::Na, Value::Cat("off".into())]).unwrap();
        assert_eq!(m, vec![false, false, true]);
    }

    #[test]
    fn feasibility_checks() {
        let s = fig2();
        assert!(s.check_feasible(&[Value::Cat("a".into()), Value::Na]).is_ok());
        assert!(matches!(s.check_feasible(&[Value::Cat("a".into()), Value::Real(1.0)]), Err(Error::Infeasible(_))));
        assert!(matches!(s.check_feasible(&[Value::Cat("b".into()), Value::Na]), Err(Error::Infeasible(_))));
        assert!(matches!(
            s.check_feasible(&[Value::Cat("b".into()), Value::Real(6.0)]),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(s.check_feasible(&[Value::Cat("c".into()), Value::Na]), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn hier1_values() {
        let p = problems::hier1();
        assert_eq!(p.evaluate(&[Value::Cat("a".into()), Value::Na]).unwrap(), 1.0);
        assert_eq!(p.evaluate(&[Value::Cat("b".into()), Value::Real(0.0)]).unwrap(), 0.0);
        assert_eq!(p.evaluate(&[Value::Cat("b".into()), Value::Real(5.0)]).unwrap(), 1.0);
        assert!(p.evaluate(&[Value::Cat("a".into()), Value::Real(3.5)]).is_err());
    }

    #[test]
    fn problem_rejects_invalid_space() {
        let s = SearchSpace::new("c", vec![VariableSpec::categorical("c", &["only"])]);
        assert!(Problem::new(s, |_| 0.0).is_err());
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        let s = SearchSpace::new("x", vec![VariableSpec::continuous("x", 0.0, 1.0)]);
        let p = Problem::new(s, |_| f64::NAN).unwrap();
        assert!(matches!(p.evaluate(&[Value::Real(0.5)]), Err(Error::NonFinite(_))));
    }
}
