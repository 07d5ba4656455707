//! Frequencies, estimators and homogeneity tests on joined data.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::config::ExperimentKind;
use super::join::JoinedData;
use super::record::{MeasurementRecord, ShotSettings, SystemOutcome};
use crate::error::{Error, Result};
use crate::fock::PortPattern;
use crate::protocols::chsh::{CHSH_ROWS, CHSH_ROW_LABELS};
use crate::protocols::Condition;
use crate::qubit::Outcome;

/// Relative frequency of one table cell with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalCell {
    pub count: u64,
    pub frequency: f64,
    pub std_error: f64,
    /// Set when no shot landed in the cell.
    pub flagged: bool,
}

impl EmpiricalCell {
    fn new(count: u64, total: u64) -> Self {
        let p = count as f64 / total as f64;
        Self { count, frequency: p, std_error: (p * (1.0 - p) / total as f64).sqrt(), flagged: count == 0 }
    }

    /// Distance to `expected` in units of the binomial standard error of
    /// `expected` itself, which stays finite for empty cells.
    pub fn sigmas_from(&self, expected: f64, total: u64) -> f64 {
        let sd = (expected * (1.0 - expected) / total as f64).sqrt();
        let diff = (self.frequency - expected).abs();
        if sd > 0.0 {
            diff / sd
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Empirical counterpart of a probability table: joint frequencies over all
/// shots in columns `C=up`, `C=down`, `C=?`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalTable {
    row_labels: Vec<String>,
    cells: Vec<[EmpiricalCell; 3]>,
    total: u64,
}

pub fn row_labels(kind: ExperimentKind) -> Vec<String> {
    match kind {
        ExperimentKind::Hom => PortPattern::ALL.iter().map(|p| p.label().to_string()).collect(),
        ExperimentKind::Chsh => CHSH_ROW_LABELS.iter().map(|s| s.to_string()).collect(),
        ExperimentKind::Metrology => vec!["+1".into(), "-1".into()],
    }
}

fn row_index(outcome: SystemOutcome) -> usize {
    match outcome {
        SystemOutcome::Ports(p) => PortPattern::ALL.iter().position(|q| *q == p).expect("listed"),
        SystemOutcome::Spins { a, b } => CHSH_ROWS.iter().position(|r| *r == (a, b)).expect("listed"),
        SystemOutcome::Parity(o) => usize::from(o == Outcome::Minus),
    }
}

fn count_rows(records: &[MeasurementRecord], kind: ExperimentKind) -> Result<Vec<u64>> {
    let mut counts = vec![0; row_labels(kind).len()];
    for r in records {
        if r.experiment != kind {
            return Err(Error::Argument(format!("{} record in a {kind} table", r.experiment)));
        }
        counts[row_index(r.outcome)] += 1;
    }
    Ok(counts)
}

impl EmpiricalTable {
    pub fn from_joined(joined: &JoinedData, kind: ExperimentKind) -> Result<Self> {
        let total = joined.unjoined.len() as u64;
        if total == 0 {
            return Err(Error::Argument("empirical table needs at least one record".into()));
        }
        let up = count_rows(&joined.up, kind)?;
        let down = count_rows(&joined.down, kind)?;
        let all = count_rows(&joined.unjoined, kind)?;
        let cells = (0..all.len())
            .map(|r| [up[r], down[r], all[r]].map(|c| EmpiricalCell::new(c, total)))
            .collect();
        Ok(Self { row_labels: row_labels(kind), cells, total })
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, row: usize, condition: Condition) -> EmpiricalCell {
        self.cells[row][condition_column(condition)]
    }

    /// Frequency of `row` among the shots carrying `condition`.
    pub fn conditional_frequency(&self, row: usize, condition: Condition) -> Option<f64> {
        let col = condition_column(condition);
        let n: u64 = self.cells.iter().map(|r| r[col].count).sum();
        (n > 0).then(|| self.cells[row][col].count as f64 / n as f64)
    }

    pub fn flagged_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.flagged).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome,C=up,C=down,C=?,se_up,se_down,se_marginal\n");
        for (label, r) in self.row_labels.iter().zip(&self.cells) {
            out.push_str(&format!(
                "{label},{},{},{},{},{},{}\n",
                r[0].frequency, r[1].frequency, r[2].frequency, r[0].std_error, r[1].std_error, r[2].std_error
            ));
        }
        out
    }
}

fn condition_column(condition: Condition) -> usize {
    match condition {
        Condition::Up => 0,
        Condition::Down => 1,
        Condition::Unconditioned => 2,
    }
}

/// Empirical CHSH value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshEstimate {
    /// `E(a0,b0) + E(a0,b1) + E(a1,b0) − E(a1,b1)`, signed.
    pub s: f64,
    pub sigma: f64,
    /// Correlator, its standard error and shot count per setting pair `2a + b`.
    pub correlators: [(f64, f64, u64); 4],
}

impl ChshEstimate {
    /// `(|S| − 2)/σ`.
    pub fn significance_over_classical(&self) -> f64 {
        (self.s.abs() - 2.0) / self.sigma
    }
}

/// Estimates S from CHSH records; each correlator is the sample mean of
/// `a·b` over the shots with that setting pair.
pub fn empirical_chsh(records: &[MeasurementRecord]) -> Result<ChshEstimate> {
    let mut sums = [(0i64, 0u64); 4];
    for r in records {
        match (r.settings, r.outcome) {
            (ShotSettings::Chsh { a, b, .. }, SystemOutcome::Spins { a: oa, b: ob }) => {
                let slot = &mut sums[2 * a as usize + b as usize];
                slot.0 += i64::from(oa.value() * ob.value());
                slot.1 += 1;
            }
            _ => return Err(Error::Argument("CHSH estimate needs CHSH records".into())),
        }
    }
    let mut correlators = [(0.0, 0.0, 0); 4];
    for (out, (sum, n)) in correlators.iter_mut().zip(sums) {
        if n == 0 {
            return Err(Error::Argument("a setting pair has no shots".into()));
        }
        let e = sum as f64 / n as f64;
        *out = (e, ((1.0 - e * e) / n as f64).sqrt(), n);
    }
    let s = correlators[0].0 + correlators[1].0 + correlators[2].0 - correlators[3].0;
    let sigma = correlators.iter().map(|c| c.1 * c.1).sum::<f64>().sqrt();
    Ok(ChshEstimate { s, sigma, correlators })
}

/// Sample mean of a ±1 observable with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityEstimate {
    pub mean: f64,
    pub sigma: f64,
    pub count: u64,
}

/// Mean parity over metrology records.
pub fn empirical_parity(records: &[MeasurementRecord]) -> Result<ParityEstimate> {
    let mut sum = 0i64;
    for r in records {
        match r.outcome {
            SystemOutcome::Parity(o) => sum += i64::from(o.value()),
            _ => return Err(Error::Argument("parity estimate needs metrology records".into())),
        }
    }
    if records.is_empty() {
        return Err(Error::Argument("parity estimate needs at least one record".into()));
    }
    let n = records.len() as f64;
    let mean = sum as f64 / n;
    Ok(ParityEstimate { mean, sigma: ((1.0 - mean * mean) / n).sqrt(), count: records.len() as u64 })
}

/// Mean parity for each phase value, in order of first appearance.
pub fn parity_by_theta(records: &[MeasurementRecord]) -> Result<Vec<(f64, ParityEstimate)>> {
    let mut order: Vec<u64> = Vec::new();
    let mut groups: BTreeMap<u64, Vec<MeasurementRecord>> = BTreeMap::new();
    for r in records {
        let ShotSettings::Phase { theta } = r.settings else {
            return Err(Error::Argument("parity scan needs metrology records".into()));
        };
        let key = theta.to_bits();
        if !groups.contains_key(&key) {
            order.push(key);
        }
        groups.entry(key).or_default().push(*r);
    }
    order.into_iter().map(|k| Ok((f64::from_bits(k), empirical_parity(&groups[&k])?))).collect()
}

fn settings_key(s: &ShotSettings) -> String {
    match s {
        ShotSettings::None => "-".into(),
        ShotSettings::Chsh { a, b, .. } => format!("a{a}b{b}"),
        ShotSettings::Phase { theta } => format!("theta={theta}"),
    }
}

/// Counts of (settings, system outcome) over `records`.
pub fn system_counts(records: &[MeasurementRecord]) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for r in records {
        *counts.entry(format!("{}|{}", settings_key(&r.settings), r.outcome)).or_default() += 1;
    }
    counts
}

/// Counts of (settings, system outcome, control outcome) over joined data.
pub fn joint_counts(joined: &JoinedData) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for (tag, set) in [("C=up", &joined.up), ("C=down", &joined.down)] {
        for (k, v) in system_counts(set) {
            counts.insert(format!("{k}|{tag}"), v);
        }
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson chi-square test that two count vectors over the same categories
/// come from one distribution (2 × k contingency table). Categories empty
/// in both samples are dropped.
pub fn chi_square_homogeneity(a: &BTreeMap<String, u64>, b: &BTreeMap<String, u64>) -> Result<ChiSquareTest> {
    let keys: Vec<&String> = a.keys().chain(b.keys()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let rows: Vec<(f64, f64)> = keys
        .iter()
        .map(|k| (a.get(*k).copied().unwrap_or(0) as f64, b.get(*k).copied().unwrap_or(0) as f64))
        .filter(|(x, y)| x + y > 0.0)
        .collect();
    let (na, nb) = rows.iter().fold((0.0, 0.0), |(sa, sb), (x, y)| (sa + x, sb + y));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Argument("chi-square test needs two nonempty samples".into()));
    }
    if rows.len() < 2 {
        return Ok(ChiSquareTest { statistic: 0.0, degrees_of_freedom: 0, p_value: 1.0 });
    }
    let n = na + nb;
    let statistic = rows
        .iter()
        .map(|(x, y)| {
            let col = x + y;
            let (ea, eb) = (col * na / n, col * nb / n);
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum::<f64>();
    let dof = rows.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Argument(e.to_string()))?;
    Ok(ChiSquareTest { statistic, degrees_of_freedom: dof, p_value: dist.sf(statistic) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::delayed_join;
    use crate::sampler::ControlRecord;

    fn hom(i: u64, p: PortPattern) -> MeasurementRecord {
        MeasurementRecord {
            shot_index: i,
            experiment: ExperimentKind::Hom,
            outcome: SystemOutcome::Ports(p),
            settings: ShotSettings::None,
        }
    }

    fn controls(n: u64) -> Vec<ControlRecord> {
        (0..n).map(|i| ControlRecord { shot_index: i, control_outcome: Outcome::Plus, basis_angle: None }).collect()
    }

    #[test]
    fn four_records_unjoined() {
        let recs = [hom(0, PortPattern::AB), hom(1, PortPattern::AB), hom(2, PortPattern::AA), hom(3, PortPattern::BB)];
        let j = delayed_join(&recs, &controls(4)).unwrap();
        let t = EmpiricalTable::from_joined(&j, ExperimentKind::Hom).unwrap();
        let freqs: Vec<f64> = (0..3).map(|r| t.cell(r, Condition::Unconditioned).frequency).collect();
        assert_eq!(freqs, [0.5, 0.25, 0.25]);
        assert_eq!(t.conditional_frequency(0, Condition::Up), Some(0.5));
        assert_eq!(t.conditional_frequency(0, Condition::Down), None);
    }

    #[test]
    fn single_record_flags_empty_cells() {
        let rec = MeasurementRecord {
            shot_index: 0,
            experiment: ExperimentKind::Chsh,
            outcome: SystemOutcome::Spins { a: Outcome::Plus, b: Outcome::Plus },
            settings: ShotSettings::Chsh { a: 0, b: 0, theta_a: 0.0, theta_b: 0.0 },
        };
        let j = delayed_join(&[rec], &controls(1)).unwrap();
        let t = EmpiricalTable::from_joined(&j, ExperimentKind::Chsh).unwrap();
        let marginal: Vec<EmpiricalCell> = (0..4).map(|r| t.cell(r, Condition::Unconditioned)).collect();
        assert_eq!(marginal.iter().filter(|c| c.flagged).count(), 3);
        assert_eq!(marginal[3].frequency, 1.0);
    }

    #[test]
    fn empty_table_is_an_error() {
        let j = delayed_join(&[], &[]).unwrap();
        assert!(EmpiricalTable::from_joined(&j, ExperimentKind::Hom).is_err());
    }

    #[test]
    fn chi_square_identical_and_disjoint() {
        let a: BTreeMap<String, u64> = [("x".to_string(), 500), ("y".to_string(), 500)].into();
        let same = chi_square_homogeneity(&a, &a).unwrap();
        assert!(same.statistic.abs() < 1e-12 && (same.p_value - 1.0).abs() < 1e-12);
        let b: BTreeMap<String, u64> = [("x".to_string(), 900), ("y".to_string(), 100)].into();
        assert!(chi_square_homogeneity(&a, &b).unwrap().p_value < 1e-10);
    }

    #[test]
    fn parity_mean() {
        let rec = |i, o| MeasurementRecord {
            shot_index: i,
            experiment: ExperimentKind::Metrology,
            outcome: SystemOutcome::Parity(o),
            settings: ShotSettings::Phase { theta: 0.5 },
        };
        let e = empirical_parity(&[rec(0, Outcome::Plus), rec(1, Outcome::Plus), rec(2, Outcome::Minus), rec(3, Outcome::Plus)])
            .unwrap();
        assert_eq!(e.mean, 0.5);
        assert_eq!(e.count, 4);
    }
}
