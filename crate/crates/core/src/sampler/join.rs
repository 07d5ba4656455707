use std::collections::BTreeMap;

use super::record::{ControlRecord, MeasurementRecord};
use crate::error::{Error, Result};
use crate::qubit::Outcome;

/// System records partitioned by the control readout, plus the view that
/// ignores the control stream. All three are sorted by shot index.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinedData {
    pub up: Vec<MeasurementRecord>,
    pub down: Vec<MeasurementRecord>,
    pub unjoined: Vec<MeasurementRecord>,
}

impl JoinedData {
    pub fn set(&self, outcome: Option<Outcome>) -> &[MeasurementRecord] {
        match outcome {
            Some(Outcome::Plus) => &self.up,
            Some(Outcome::Minus) => &self.down,
            None => &self.unjoined,
        }
    }
}

/// Merges the two streams by shot index after the fact.
///
/// Fails if either stream repeats a shot index or if the index sets differ;
/// the error lists the orphans on each side.
pub fn delayed_join(system: &[MeasurementRecord], control: &[ControlRecord]) -> Result<JoinedData> {
    let mut by_shot = BTreeMap::new();
    for c in control {
        if by_shot.insert(c.shot_index, c.control_outcome).is_some() {
            return Err(Error::DuplicateShot(c.shot_index));
        }
    }
    let mut unjoined = system.to_vec();
    unjoined.sort_by_key(|r| r.shot_index);
    if let Some(w) = unjoined.windows(2).find(|w| w[0].shot_index == w[1].shot_index) {
        return Err(Error::DuplicateShot(w[0].shot_index));
    }
    let orphaned_system: Vec<u64> =
        unjoined.iter().map(|r| r.shot_index).filter(|i| !by_shot.contains_key(i)).collect();
    let orphaned_control: Vec<u64> = by_shot
        .keys()
        .copied()
        .filter(|i| unjoined.binary_search_by_key(i, |r| r.shot_index).is_err())
        .collect();
    if !orphaned_system.is_empty() || !orphaned_control.is_empty() {
        return Err(Error::Join { orphaned_system, orphaned_control });
    }
    let (up, down) = unjoined.iter().partition(|r| by_shot[&r.shot_index] == Outcome::Plus);
    Ok(JoinedData { up, down, unjoined })
}
