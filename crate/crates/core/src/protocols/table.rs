use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::Outcome;
use crate::scalar::Real;

/// Which control record a column is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// Control read out +1 (spin ↑ after its basis rotation).
    Up,
    /// Control read out −1.
    Down,
    /// Control record ignored.
    Unconditioned,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::Up, Condition::Down, Condition::Unconditioned];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Up => "C=up",
            Condition::Down => "C=down",
            Condition::Unconditioned => "C=?",
        }
    }

    pub fn outcome(self) -> Option<Outcome> {
        match self {
            Condition::Up => Some(Outcome::Plus),
            Condition::Down => Some(Outcome::Minus),
            Condition::Unconditioned => None,
        }
    }

    pub fn from_outcome(o: Outcome) -> Self {
        match o {
            Outcome::Plus => Condition::Up,
            Outcome::Minus => Condition::Down,
        }
    }

    fn column(self) -> usize {
        match self {
            Condition::Up => 0,
            Condition::Down => 1,
            Condition::Unconditioned => 2,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Joint outcome-by-control probability table.
///
/// Columns are always `C=up`, `C=down`, `C=?`. Entries in the conditioned
/// columns are joint probabilities (each column sums to the control outcome's
/// weight, ½ for every experiment here); `C=?` is the marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable<T> {
    row_labels: Vec<String>,
    entries: Vec<[T; 3]>,
}

impl<T: Real> ProbabilityTable<T> {
    pub fn new(row_labels: Vec<String>, entries: Vec<[T; 3]>) -> Result<Self> {
        if row_labels.len() != entries.len() {
            return Err(Error::Argument(format!(
                "{} row labels for {} rows",
                row_labels.len(),
                entries.len()
            )));
        }
        Ok(Self { row_labels, entries })
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn column_labels() -> [&'static str; 3] {
        Condition::ALL.map(Condition::label)
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, condition: Condition) -> T {
        self.entries[row][condition.column()]
    }

    pub fn row(&self, label: &str) -> Option<[T; 3]> {
        self.row_labels.iter().position(|l| l == label).map(|i| self.entries[i])
    }

    pub fn column(&self, condition: Condition) -> Vec<T> {
        self.entries.iter().map(|r| r[condition.column()]).collect()
    }

    pub fn column_sum(&self, condition: Condition) -> T {
        self.column(condition).into_iter().fold(T::zero(), |a, b| a + b)
    }

    /// Largest entrywise difference to another table with the same rows.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.row_labels != other.row_labels {
            return T::infinity();
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .flat_map(|(a, b)| (0..3).map(move |k| (a[k] - b[k]).abs()))
            .fold(T::zero(), T::max)
    }

    /// Checks the table invariants: entries in [0, 1], `C=?` equal to the sum
    /// of the conditioned columns, and the marginal summing to one.
    pub fn check_invariants(&self, tol: T) -> Result<()> {
        for (label, r) in self.row_labels.iter().zip(&self.entries) {
            if r.iter().any(|p| *p < -tol || *p > T::one() + tol) {
                return Err(Error::Argument(format!("row {label} has an entry outside [0, 1]")));
            }
            if (r[0] + r[1] - r[2]).abs() > tol {
                return Err(Error::Argument(format!("row {label}: C=? is not the sum of the conditioned columns")));
            }
        }
        if (self.column_sum(Condition::Unconditioned) - T::one()).abs() > tol {
            return Err(Error::Argument("marginal column does not sum to one".into()));
        }
        Ok(())
    }

    /// CSV with header `outcome,C=up,C=down,C=?`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome");
        for l in Self::column_labels() {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (label, r) in self.row_labels.iter().zip(&self.entries) {
            let _ = writeln!(out, "{label},{},{},{}", r[0], r[1], r[2]);
        }
        out
    }

    /// Aligned plain-text rendering.
    pub fn to_summary(&self, title: &str) -> String {
        let mut out = format!("{title}\n");
        let _ = writeln!(out, "{:<10}{:>14}{:>14}{:>14}", "outcome", "C=up", "C=down", "C=?");
        for (label, r) in self.row_labels.iter().zip(&self.entries) {
            let _ = writeln!(out, "{label:<10}{:>14.10}{:>14.10}{:>14.10}", r[0], r[1], r[2]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let t = ProbabilityTable::new(vec!["x".into(), "y".into()], vec![[0.25, 0.25, 0.5], [0.25, 0.25, 0.5]]).unwrap();
        assert_eq!(t.to_csv(), "outcome,C=up,C=down,C=?\nx,0.25,0.25,0.5\ny,0.25,0.25,0.5\n");
        t.check_invariants(1e-12).unwrap();
    }

    #[test]
    fn invariant_violation_detected() {
        let t = ProbabilityTable::new(vec!["x".into()], vec![[0.5, 0.25, 1.0]]).unwrap();
        assert!(t.check_invariants(1e-12).is_err());
    }
}
