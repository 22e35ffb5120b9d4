//! Uniform random initial designs and imputation of inactive entries.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::rng::{self, stream};
use crate::space::{Domain, Problem, SearchSpace, Value};
use crate::{Error, Result};

/// Default initial design size per decision variable.
pub const DEFAULT_SAMPLE_FACTOR: usize = 50;

/// A raw mixed-valued sample `(X, y)`. Rows may hold `Value::Na` on inactive
/// variables until [`impute_inactive`] has run.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub space_name: String,
    pub rows: Vec<Vec<Value>>,
    pub y: Vec<f64>,
    pub seed: u64,
}

impl Design {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn has_na(&self) -> bool {
        self.rows.iter().flatten().any(Value::is_na)
    }

    /// Checks that every row is feasible for `space`, `y` is finite and
    /// `n >= 2`.
    pub fn check_feasible(&self, space: &SearchSpace) -> Result<()> {
        if self.rows.len() < 2 {
            return Err(Error::InvalidArgument(format!("design needs n >= 2, got {}", self.rows.len())));
        }
        if self.rows.len() != self.y.len() {
            return Err(Error::InvalidArgument(format!(
                "design has {} rows but {} objective values",
                self.rows.len(),
                self.y.len()
            )));
        }
        if let Some(i) = self.y.iter().position(|y| !y.is_finite()) {
            return Err(Error::NonFinite(format!("objective value in row {}", i + 1)));
        }
        for row in &self.rows {
            space.check_feasible(row)?;
        }
        Ok(())
    }
}

pub(crate) fn draw(domain: &Domain, rng: &mut rng::Rng) -> Value {
    match domain {
        Domain::Continuous { lower, upper } => Value::Real(rng.gen_range(*lower..=*upper)),
        Domain::Integer { lower, upper } => Value::Int(rng.gen_range(*lower..=*upper)),
        Domain::Categorical { categories } => Value::Cat(categories[rng.gen_range(0..categories.len())].clone()),
    }
}

/// Draws one feasible assignment, top-down along the condition graph.
pub(crate) fn draw_feasible(space: &SearchSpace, order: &[usize], rng: &mut rng::Rng) -> Vec<Value> {
    let mut row = alloc::vec![Value::Na; space.dim()];
    let mut active = alloc::vec![false; space.dim()];
    for &i in order {
        let var = &space.variables[i];
        active[i] = match &var.condition {
            None => true,
            Some(c) => {
                space.index_of(&c.parent).is_some_and(|p| active[p] && c.values.iter().any(|l| l.matches(&row[p])))
            }
        };
        if active[i] {
            row[i] = draw(&var.domain, rng);
        }
    }
    row
}

/// Samples `n` assignments uniformly at random and evaluates them.
pub fn sample_design(problem: &Problem, n: usize, seed: u64) -> Result<Design> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sample size must be >= 2, got {n}")));
    }
    let space = problem.space();
    space.check()?;
    let order = space.dependency_order();
    let mut rng = rng::rng(rng::derive(seed, stream::SAMPLE));
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let row = draw_feasible(space, &order, &mut rng);
        y.push(problem.evaluate(&row)?);
        rows.push(row);
    }
    Ok(Design { space_name: space.name.clone(), rows, y, seed })
}

/// Replaces every NA by a single uniform draw from the variable's full
/// domain. Non-NA entries and `y` are untouched.
pub fn impute_inactive(design: &Design, space: &SearchSpace, seed: u64) -> Design {
    let mut rng = rng::rng(rng::derive(seed, stream::IMPUTE));
    let rows = design
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&space.variables)
                .map(|(v, spec)| if v.is_na() { draw(&spec.domain, &mut rng) } else { v.clone() })
                .collect()
        })
        .collect();
    Design { rows, ..design.clone() }
}
