//! Preprocessing of a raw design into a numeric sample in `[0, 1]`.
//!
//! The pipeline order is fixed: impute inactive entries, normalize the
//! objective values, encode the categorical variables (one-hot or target
//! encoding, the latter reading the *normalized* objective), then normalize
//! the decision space.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::sampling::{impute_inactive, Design};
use crate::space::{Domain, SearchSpace, Value};
use crate::{stats, Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Encoding {
    OneHot,
    Target,
}

impl Encoding {
    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::OneHot => "oh",
            Encoding::Target => "te",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oh" | "onehot" | "one-hot" => Ok(Encoding::OneHot),
            "te" | "target" => Ok(Encoding::Target),
            _ => Err(Error::InvalidArgument(format!("unknown encoding `{s}` (expected oh or te)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    /// Continuous or integer variable, normalized by its known bounds.
    Numeric,
    /// One-hot indicator, already in {0, 1}.
    Indicator,
    /// Target-encoded categorical, normalized by its sample range.
    Target,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// Index of the source variable in the search space.
    pub source: usize,
    pub role: ColumnRole,
}

/// A numeric matrix together with the provenance of each column.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedMatrix {
    pub matrix: Matrix,
    pub columns: Vec<Column>,
}

/// Fully numeric, normalized sample ready for feature computation.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSample {
    pub matrix: Matrix,
    pub y: Vec<f64>,
    pub columns: Vec<Column>,
    pub encoding: Encoding,
}

impl EncodedSample {
    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    /// Source variable id of every column.
    pub fn origin<'a>(&self, space: &'a SearchSpace) -> Vec<&'a str> {
        self.columns.iter().map(|c| space.variables[c.source].id.as_str()).collect()
    }

    /// Verifies the sample invariants: no NaN, everything in `[0, 1]`,
    /// one-hot blocks summing to one, and `p = D` under target encoding.
    pub fn check(&self, space: &SearchSpace) -> Result<()> {
        let in_unit = |v: f64| (0.0..=1.0).contains(&v);
        if !self.matrix.as_slice().iter().all(|&v| in_unit(v)) || !self.y.iter().all(|&v| in_unit(v)) {
            return Err(Error::InvalidArgument("encoded sample leaves [0, 1]".to_string()));
        }
        match self.encoding {
            Encoding::Target if self.matrix.ncols() != space.dim() => Err(Error::InvalidArgument(format!(
                "target encoding changed dimensionality from {} to {}",
                space.dim(),
                self.matrix.ncols()
            ))),
            Encoding::OneHot => {
                for var in 0..space.dim() {
                    let block: Vec<usize> = (0..self.columns.len())
                        .filter(|&j| self.columns[j].source == var && self.columns[j].role == ColumnRole::Indicator)
                        .collect();
                    if block.is_empty() {
                        continue;
                    }
                    for row in self.matrix.rows_iter() {
                        if block.iter().map(|&j| row[j]).sum::<f64>() != 1.0 {
                            return Err(Error::InvalidArgument(format!(
                                "one-hot block of `{}` does not sum to 1",
                                space.variables[var].id
                            )));
                        }
                    }
                }
                Ok(())
            }
            Encoding::Target => Ok(()),
        }
    }
}

/// Min-max normalization by the sample range; a constant vector maps to 0.5.
pub fn normalize_objective(y: &[f64]) -> Result<Vec<f64>> {
    if y.len() < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 objective values, got {}", y.len())));
    }
    if let Some(v) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("objective value {v}")));
    }
    Ok(rescale_by_sample(y))
}

fn rescale_by_sample(v: &[f64]) -> Vec<f64> {
    let (lo, hi) = stats::min_max(v);
    if hi == lo {
        return alloc::vec![0.5; v.len()];
    }
    v.iter().map(|x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0)).collect()
}

fn numeric_value(var: &str, domain: &Domain, value: &Value) -> Result<f64> {
    match (domain, value) {
        (Domain::Continuous { .. }, Value::Real(v)) => Ok(*v),
        (Domain::Integer { .. }, Value::Int(v)) => Ok(*v as f64),
        (_, Value::Na) => Err(Error::InvalidArgument(format!("`{var}` is NA; impute before encoding"))),
        _ => Err(Error::OutOfDomain {
            var: var.to_string(),
            detail: format!("{value} does not match the variable kind"),
        }),
    }
}

fn category_index(var: &str, categories: &[String], value: &Value) -> Result<usize> {
    match value {
        Value::Cat(c) => categories
            .iter()
            .position(|k| k == c)
            .ok_or_else(|| Error::OutOfDomain { var: var.to_string(), detail: format!("unknown category `{c}`") }),
        Value::Na => Err(Error::InvalidArgument(format!("`{var}` is NA; impute before encoding"))),
        other => Err(Error::OutOfDomain { var: var.to_string(), detail: format!("{other} is not a category") }),
    }
}

fn check_shape(design: &Design, space: &SearchSpace) -> Result<()> {
    for row in &design.rows {
        if row.len() != space.dim() {
            return Err(Error::LengthMismatch { expected: space.dim(), got: row.len() });
        }
    }
    Ok(())
}

/// Replaces each categorical variable of cardinality `c` by `c` indicator
/// columns in declaration order; numeric variables pass through.
pub fn one_hot(design: &Design, space: &SearchSpace) -> Result<EncodedMatrix> {
    check_shape(design, space)?;
    let mut columns = Vec::new();
    for (j, var) in space.variables.iter().enumerate() {
        match &var.domain {
            Domain::Categorical { categories } => {
                for c in categories {
                    columns.push(Column { name: format!("{}={c}", var.id), source: j, role: ColumnRole::Indicator });
                }
            }
            _ => columns.push(Column { name: var.id.clone(), source: j, role: ColumnRole::Numeric }),
        }
    }
    let mut matrix = Matrix::zeros(design.len(), columns.len());
    for (i, row) in design.rows.iter().enumerate() {
        let mut col = 0;
        for (var, value) in space.variables.iter().zip(row) {
            match &var.domain {
                Domain::Categorical { categories } => {
                    let k = category_index(&var.id, categories, value)?;
                    matrix.set(i, col + k, 1.0);
                    col += categories.len();
                }
                domain => {
                    matrix.set(i, col, numeric_value(&var.id, domain, value)?);
                    col += 1;
                }
            }
        }
    }
    Ok(EncodedMatrix { matrix, columns })
}

/// Smoothing weight `n_j / (n_j + σ²_j / ρ²)`; 1 when `ρ² = 0`.
pub fn smoothing_lambda(n_j: usize, var_j: f64, var_global: f64) -> f64 {
    if var_global == 0.0 {
        return 1.0;
    }
    let n = n_j as f64;
    n / (n + var_j / var_global)
}

/// Replaces every category `j` by `λ·mean(Y_j) + (1 − λ)·mean(Y)` computed
/// on the normalized objective, with population variances inside `λ`.
pub fn target_encode(design: &Design, y_norm: &[f64], space: &SearchSpace) -> Result<EncodedMatrix> {
    check_shape(design, space)?;
    if y_norm.len() != design.len() {
        return Err(Error::InvalidArgument(format!("{} objective values for {} rows", y_norm.len(), design.len())));
    }
    let n = design.len();
    let global_mean = stats::mean(y_norm);
    let global_var = stats::var_pop(y_norm);
    let mut matrix = Matrix::zeros(n, space.dim());
    let mut columns = Vec::with_capacity(space.dim());
    for (j, var) in space.variables.iter().enumerate() {
        match &var.domain {
            Domain::Categorical { categories } => {
                let idx: Vec<usize> = design
                    .rows
                    .iter()
                    .map(|row| category_index(&var.id, categories, &row[j]))
                    .collect::<Result<_>>()?;
                let mut groups: Vec<Vec<f64>> = alloc::vec![Vec::new(); categories.len()];
                for (k, y) in idx.iter().zip(y_norm) {
                    groups[*k].push(*y);
                }
                let encoded: Vec<f64> = groups
                    .iter()
                    .map(|g| {
                        if g.is_empty() {
                            return global_mean;
                        }
                        let lambda = smoothing_lambda(g.len(), stats::var_pop(g), global_var);
                        lambda * stats::mean(g) + (1.0 - lambda) * global_mean
                    })
                    .collect();
                for (i, k) in idx.iter().enumerate() {
                    matrix.set(i, j, encoded[*k]);
                }
                columns.push(Column { name: var.id.clone(), source: j, role: ColumnRole::Target });
            }
            domain => {
                for (i, row) in design.rows.iter().enumerate() {
                    matrix.set(i, j, numeric_value(&var.id, domain, &row[j])?);
                }
                columns.push(Column { name: var.id.clone(), source: j, role: ColumnRole::Numeric });
            }
        }
    }
    Ok(EncodedMatrix { matrix, columns })
}

/// Maps numeric columns by their known bounds, leaves indicators alone and
/// rescales target-encoded columns by their sample range (constant → 0.5).
pub fn normalize_decision(encoded: &EncodedMatrix, space: &SearchSpace) -> Result<EncodedMatrix> {
    let mut matrix = encoded.matrix.clone();
    for (j, col) in encoded.columns.iter().enumerate() {
        match col.role {
            ColumnRole::Indicator => {}
            ColumnRole::Target => matrix.set_column(j, &rescale_by_sample(&encoded.matrix.column(j))),
            ColumnRole::Numeric => {
                let var = &space.variables[col.source];
                let (lo, hi) = var.domain.bounds().ok_or_else(|| Error::OutOfDomain {
                    var: var.id.clone(),
                    detail: "numeric column without bounds".to_string(),
                })?;
                for i in 0..matrix.nrows() {
                    let v = matrix.get(i, j);
                    if !(lo <= v && v <= hi) {
                        return Err(Error::OutOfDomain {
                            var: var.id.clone(),
                            detail: format!("{v} outside [{lo}, {hi}]"),
                        });
                    }
                    matrix.set(i, j, if hi == lo { 0.5 } else { (v - lo) / (hi - lo) });
                }
            }
        }
    }
    Ok(EncodedMatrix { matrix, columns: encoded.columns.clone() })
}

/// Runs the full preprocessing pipeline on a feasible design.
pub fn preprocess(design: &Design, space: &SearchSpace, encoding: Encoding, seed: u64) -> Result<EncodedSample> {
    design.check_feasible(space)?;
    let imputed = impute_inactive(design, space, seed);
    let y = normalize_objective(&imputed.y)?;
    let encoded = match encoding {
        Encoding::OneHot => one_hot(&imputed, space)?,
        Encoding::Target => target_encode(&imputed, &y, space)?,
    };
    let normalized = normalize_decision(&encoded, space)?;
    Ok(EncodedSample { matrix: normalized.matrix, y, columns: normalized.columns, encoding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::hier1;
    use crate::sampling::sample_design;
    use crate::space::VariableSpec;
    use alloc::vec;
    use alloc::vec::Vec;

    fn cat_design(labels: &[&str], y: &[f64]) -> Design {
        Design {
            space_name: "t".into(),
            rows: labels.iter().map(|l| vec![Value::Cat((*l).into())]).collect(),
            y: y.to_vec(),
            seed: 0,
        }
    }

    #[test]
    fn objective_normalization() {
        assert_eq!(normalize_objective(&[2.0, 4.0, 6.0]).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(normalize_objective(&[3.0, 3.0, 3.0]).unwrap(), vec![0.5; 3]);
        assert_eq!(normalize_objective(&[-1.0, 0.0, 3.0]).unwrap(), vec![0.0, 0.25, 1.0]);
        assert!(normalize_objective(&[1.0, f64::NAN]).is_err());
        assert!(normalize_objective(&[1.0]).is_err());
    }

    #[test]
    fn one_hot_of_middle_category() {
        let space = SearchSpace::new("c", vec![VariableSpec::categorical("X_cat", &["a", "b", "c"])]);
        let d = cat_design(&["a", "b", "c"], &[0.0, 1.0, 2.0]);
        let e = one_hot(&d, &space).unwrap();
        assert_eq!(e.matrix.row(1), &[0.0, 1.0, 0.0]);
        assert_eq!(e.columns[2].name, "X_cat=c");
    }

    #[test]
    fn three_cardinality_ten_variables_give_thirty_columns() {
        let labels: Vec<String> = (0..10).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let space = SearchSpace::new(
            "c30",
            vec![
                VariableSpec::categorical("c1", &refs),
                VariableSpec::categorical("c2", &refs),
                VariableSpec::categorical("c3", &refs),
            ],
        );
        let p = crate::space::Problem::new(space.clone(), |_| 0.0).unwrap();
        let d = sample_design(&p, 20, 1).unwrap();
        assert_eq!(one_hot(&d, &space).unwrap().matrix.ncols(), 30);
    }

    #[test]
    fn one_hot_without_categoricals_is_identity() {
        let space =
            SearchSpace::new("n", vec![VariableSpec::continuous("x", 0.0, 1.0), VariableSpec::integer("k", 0, 4)]);
        let d = Design {
            space_name: "n".into(),
            rows: vec![vec![Value::Real(0.25), Value::Int(3)], vec![Value::Real(0.5), Value::Int(1)]],
            y: vec![0.0, 1.0],
            seed: 0,
        };
        assert_eq!(one_hot(&d, &space).unwrap().matrix, Matrix::from_rows(&[[0.25, 3.0], [0.5, 1.0]]));
    }

    #[test]
    fn unknown_category_is_an_error() {
        let space = SearchSpace::new("c", vec![VariableSpec::categorical("c", &["a", "b"])]);
        let d = cat_design(&["a", "z"], &[0.0, 1.0]);
        assert!(matches!(one_hot(&d, &space), Err(Error::OutOfDomain { .. })));
        assert!(matches!(target_encode(&d, &[0.0, 1.0], &space), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn lambda_cases() {
        assert!((smoothing_lambda(2, 0.01, 0.14) - 0.9655172413793103).abs() < 1e-15);
        assert_eq!(smoothing_lambda(5, 0.0, 0.3), 1.0);
        assert_eq!(smoothing_lambda(4, 0.2, 0.2), 0.8);
        assert_eq!(smoothing_lambda(3, 0.7, 0.0), 1.0);
    }

    #[test]
    fn target_encoding_hand_example() {
        // Category a on rows 1-2: n=2, mean 0.1, var 0.01; global mean 0.4, var 0.14.
        let space = SearchSpace::new("c", vec![VariableSpec::categorical("c", &["a", "b"])]);
        let y = [0.0, 0.2, 0.4, 1.0];
        let d = cat_design(&["a", "a", "b", "b"], &y);
        let e = target_encode(&d, &y, &space).unwrap();
        let expected = 0.9655172413793103 * 0.1 + 0.034482758620689655 * 0.4;
        assert!((e.matrix.get(0, 0) - expected).abs() < 1e-12);
        assert!((e.matrix.get(0, 0) - 0.1103448).abs() < 1e-7);
        assert_eq!(e.matrix.get(0, 0), e.matrix.get(1, 0));
    }

    #[test]
    fn single_category_gives_global_mean() {
        let space = SearchSpace::new("c", vec![VariableSpec::categorical("c", &["a", "b"])]);
        let y = [0.1, 0.5, 0.9];
        let d = cat_design(&["b", "b", "b"], &y);
        let e = target_encode(&d, &y, &space).unwrap();
        assert!((e.matrix.get(0, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_group_gives_group_mean() {
        let space = SearchSpace::new("c", vec![VariableSpec::categorical("c", &["a", "b"])]);
        let y = [0.3, 0.3, 0.0, 1.0];
        let d = cat_design(&["a", "a", "b", "b"], &y);
        let e = target_encode(&d, &y, &space).unwrap();
        assert_eq!(e.matrix.get(0, 0), 0.3);
    }

    #[test]
    fn decision_normalization() {
        let space = SearchSpace::new(
            "n",
            vec![
                VariableSpec::continuous("x", -5.0, 5.0),
                VariableSpec::integer("k", 1, 3),
                VariableSpec::categorical("c", &["a", "b"]),
            ],
        );
        let d = Design {
            space_name: "n".into(),
            rows: vec![
                vec![Value::Real(0.0), Value::Int(3), Value::Cat("a".into())],
                vec![Value::Real(5.0), Value::Int(1), Value::Cat("b".into())],
                vec![Value::Real(-5.0), Value::Int(2), Value::Cat("a".into())],
            ],
            y: vec![0.0, 1.0, 0.5],
            seed: 0,
        };
        let oh = normalize_decision(&one_hot(&d, &space).unwrap(), &space).unwrap();
        assert_eq!(oh.matrix.row(0), &[0.5, 1.0, 1.0, 0.0]);
        assert_eq!(oh.matrix.column(2), vec![1.0, 0.0, 1.0]);
        let te = normalize_decision(&target_encode(&d, &d.y, &space).unwrap(), &space).unwrap();
        assert_eq!(te.matrix.column(2), vec![0.0, 1.0, 0.0]);

        let bad = EncodedMatrix {
            matrix: Matrix::from_rows(&[[6.0]]),
            columns: vec![Column { name: "x".into(), source: 0, role: ColumnRole::Numeric }],
        };
        assert!(normalize_decision(&bad, &space).is_err());
    }

    #[test]
    fn preprocess_hier1() {
        let p = hier1();
        let d = sample_design(&p, 50, 4).unwrap();
        assert!(d.has_na());
        let te = preprocess(&d, p.space(), Encoding::Target, 4).unwrap();
        assert_eq!(te.matrix.ncols(), 2);
        te.check(p.space()).unwrap();
        let oh = preprocess(&d, p.space(), Encoding::OneHot, 4).unwrap();
        assert_eq!(oh.column_names(), vec!["X_cat=a", "X_cat=b", "X_cont"]);
        assert_eq!(oh.origin(p.space()), vec!["X_cat", "X_cat", "X_cont"]);
        oh.check(p.space()).unwrap();
        assert_eq!(te, preprocess(&d, p.space(), Encoding::Target, 4).unwrap());
    }

    #[test]
    fn preprocess_rejects_infeasible_rows() {
        let p = hier1();
        let mut d = sample_design(&p, 10, 4).unwrap();
        let i = d.rows.iter().position(|r| r[1].is_na()).unwrap();
        d.rows[i][1] = Value::Real(1.0);
        assert!(preprocess(&d, p.space(), Encoding::Target, 0).is_err());
    }

    #[test]
    fn encoding_parses() {
        assert_eq!("te".parse::<Encoding>().unwrap(), Encoding::Target);
        assert_eq!("OH".parse::<Encoding>().unwrap(), Encoding::OneHot);
        assert!("x".parse::<Encoding>().is_err());
    }
}
