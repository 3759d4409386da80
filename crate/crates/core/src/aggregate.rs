//! Pairwise comparison matrices and the weights derived from them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{option_ids, OptionId, OrderError, Ranking, Tournament};

/// Relative tolerance on `a_ij * a_ji = 1`, and the band around 1 treated as a tie.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-6;
/// Relative tolerance under which two weights count as tied.
pub const WEIGHT_TIE_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_EV_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_EV_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("matrix is not square: {0}")]
    NotSquare(String),
    #[error("entry ({row}, {col}) = {value} is not a positive finite number")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },
    #[error("diagonal entry ({index}, {index}) = {value} is not 1")]
    DiagonalNotOne { index: usize, value: f64 },
    #[error(
        "reciprocity violated at ({row}, {col}): a_ij * a_ji deviates from 1 by {residual:e}"
    )]
    ReciprocityViolation { row: usize, col: usize, residual: f64 },
    #[error("tied comparison at ({row}, {col}): a_ij = {value} gives no strict verdict")]
    TiedComparison { row: usize, col: usize, value: f64 },
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("weights of `{0}` and `{1}` are tied")]
    TiedWeights(OptionId, OptionId),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error(transparent)]
    Options(#[from] OrderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

/// A validated positive reciprocal matrix with strict off-diagonal verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    options: Vec<OptionId>,
    entries: Vec<f64>,
}

impl ComparisonMatrix {
    /// Validates `rows` against the reciprocal-matrix invariants.
    /// Without `options`, rows are labelled `1..=n`.
    pub fn new(options: Option<Vec<OptionId>>, rows: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::NotSquare("no rows".into()));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NotSquare(format!(
                    "row {} has {} entries, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
        }
        let options = match options {
            Some(options) => {
                if options.len() != n {
                    return Err(MatrixError::NotSquare(format!(
                        "{} option names for a {n}x{n} matrix",
                        options.len()
                    )));
                }
                option_ids(&options)?
            }
            None => default_labels(n),
        };
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        let at = |i: usize, j: usize| entries[i * n + j];

        for i in 0..n {
            for j in 0..n {
                let value = at(i, j);
                if !(value.is_finite() && value > 0.0) {
                    return Err(MatrixError::NonPositiveEntry { row: i, col: j, value });
                }
            }
        }
        for i in 0..n {
            let value = at(i, i);
            if (value - 1.0).abs() > RECIPROCITY_TOLERANCE {
                return Err(MatrixError::DiagonalNotOne { index: i, value });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let value = at(i, j);
                if i != j && (value - 1.0).abs() <= RECIPROCITY_TOLERANCE {
                    return Err(MatrixError::TiedComparison { row: i, col: j, value });
                }
            }
        }
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let residual = (at(i, j) * at(j, i) - 1.0).abs();
                if residual > RECIPROCITY_TOLERANCE && worst.is_none_or(|w| residual > w.2) {
                    worst = Some((i, j, residual));
                }
            }
        }
        if let Some((row, col, residual)) = worst {
            return Err(MatrixError::ReciprocityViolation { row, col, residual });
        }
        Ok(ComparisonMatrix { options, entries })
    }

    /// The consistent matrix `a_ij = v_i / v_j`.
    pub fn consistent(options: Option<Vec<OptionId>>, values: &[f64]) -> Result<Self, MatrixError> {
        let rows = values
            .iter()
            .map(|vi| values.iter().map(|vj| vi / vj).collect())
            .collect();
        ComparisonMatrix::new(options, rows)
    }

    pub fn parse(document: &str, format: MatrixFormat) -> Result<Self, MatrixError> {
        match format {
            MatrixFormat::Csv => parse_csv(document),
            MatrixFormat::Json => parse_json(document),
        }
    }

    pub fn options(&self) -> &[OptionId] {
        &self.options
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.len();
        let entries = (0..n * n).map(|k| self.get(k % n, k / n)).collect();
        ComparisonMatrix {
            options: self.options.clone(),
            entries,
        }
    }

    /// `i` beats `j` exactly when `a_ij > 1`.
    pub fn tournament(&self) -> Tournament {
        Tournament::from_fn(self.options.clone(), |i, j| self.get(i, j) > 1.0)
            .expect("matrix options are validated")
    }

    /// Row geometric means, unnormalised.
    pub fn gm_weights(&self) -> WeightVector {
        let n = self.len() as f64;
        let weights = (0..self.len())
            .map(|i| (self.row(i).iter().map(|a| a.ln()).sum::<f64>() / n).exp())
            .collect();
        WeightVector {
            options: self.options.clone(),
            weights,
        }
    }

    /// Principal eigenvector by power iteration from the uniform vector,
    /// normalised to unit sum. Stops once successive iterates differ by less
    /// than `tol` in max-norm.
    pub fn ev_weights(&self, tol: f64, max_iter: usize) -> Result<WeightVector, MatrixError> {
        let n = self.len();
        let mut current = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        for _ in 0..max_iter {
            for (i, slot) in next.iter_mut().enumerate() {
                *slot = self.row(i).iter().zip(&current).map(|(a, x)| a * x).sum();
            }
            let total: f64 = next.iter().sum();
            next.iter_mut().for_each(|x| *x /= total);
            let delta = next
                .iter()
                .zip(&current)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            std::mem::swap(&mut current, &mut next);
            if delta < tol {
                return Ok(WeightVector {
                    options: self.options.clone(),
                    weights: current,
                });
            }
        }
        Err(MatrixError::NoConvergence(max_iter))
    }

    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc {
            options: Some(self.options.iter().map(|o| o.to_string()).collect()),
            matrix: (0..self.len())
                .map(|i| self.row(i).iter().map(|&a| Entry::Number(a)).collect())
                .collect(),
        }
    }
}

fn default_labels(n: usize) -> Vec<OptionId> {
    (1..=n)
        .map(|k| OptionId::new(k.to_string()).expect("non-empty"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    options: Vec<OptionId>,
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(options: Vec<OptionId>, weights: Vec<f64>) -> Result<Self, MatrixError> {
        if options.len() != weights.len() {
            return Err(MatrixError::InvalidWeights(format!(
                "{} options but {} weights",
                options.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(MatrixError::InvalidWeights(format!(
                "weight {w} is not positive"
            )));
        }
        let options = option_ids(&options)?;
        Ok(WeightVector { options, weights })
    }

    pub fn options(&self) -> &[OptionId] {
        &self.options
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OptionId, f64)> {
        self.options.iter().zip(self.weights.iter().copied())
    }

    /// Options by strictly decreasing weight. Near-equal weights are an error
    /// rather than being broken arbitrarily.
    pub fn ranking(&self) -> Result<Ranking, MatrixError> {
        let mut idx: Vec<usize> = (0..self.weights.len()).collect();
        idx.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]));
        for pair in idx.windows(2) {
            let (a, b) = (self.weights[pair[0]], self.weights[pair[1]]);
            if a - b <= WEIGHT_TIE_TOLERANCE * a.abs().max(b.abs()) {
                let (x, y) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                return Err(MatrixError::TiedWeights(
                    self.options[x].clone(),
                    self.options[y].clone(),
                ));
            }
        }
        Ok(Ranking::new(idx.into_iter().map(|k| self.options[k].clone()).collect())?)
    }
}

/// A matrix cell as written in JSON: a number or a string such as `"1/9"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Text(String),
}

/// Wire format: `{"options": [...], "matrix": [[...]]}`; `options` may be omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Vec<String>>,
    pub matrix: Vec<Vec<Entry>>,
}

impl TryFrom<MatrixDoc> for ComparisonMatrix {
    type Error = MatrixError;

    fn try_from(doc: MatrixDoc) -> Result<Self, Self::Error> {
        let rows = doc
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        Entry::Number(x) => Ok(*x),
                        Entry::Text(s) => parse_number(s),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let options = doc.options.map(|names| option_ids(&names)).transpose()?;
        ComparisonMatrix::new(options, rows)
    }
}

/// Parses a decimal, scientific or `p/q` fraction literal.
pub fn parse_number(text: &str) -> Result<f64, MatrixError> {
    let text = text.trim();
    let bad = || MatrixError::Syntax(format!("`{text}` is not a number"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            Ok(num / den)
        }
        None => text.parse().map_err(|_| bad()),
    }
}

fn parse_json(document: &str) -> Result<ComparisonMatrix, MatrixError> {
    let doc: MatrixDoc =
        serde_json::from_str(document).map_err(|e| MatrixError::Syntax(e.to_string()))?;
    doc.try_into()
}

/// Plain numeric grid, one row per line, with an optional header row of names.
fn parse_csv(document: &str) -> Result<ComparisonMatrix, MatrixError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(document.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| MatrixError::Syntax(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        records.push(record.iter().map(str::to_owned).collect::<Vec<_>>());
    }
    let Some(first) = records.first() else {
        return Err(MatrixError::Syntax("empty document".into()));
    };
    let header = if first.iter().any(|f| parse_number(f).is_err()) {
        Some(records.remove(0))
    } else {
        None
    };
    let rows = records
        .iter()
        .map(|r| r.iter().map(|f| parse_number(f)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let options = header.map(|names| option_ids(&names)).transpose()?;
    ComparisonMatrix::new(options, rows)
}
