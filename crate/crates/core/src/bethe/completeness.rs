//! Matching Bethe energies against an exactly diagonalized spectrum.

use serde::{Deserialize, Serialize};

use crate::spectrum::{Level, SpectrumResult};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedLevel {
    pub bethe_energy: C64,
    pub level: Level,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    /// One entry per ED level reached, with its closest Bethe energy.
    pub matched_levels: Vec<MatchedLevel>,
    pub unmatched_ed_levels: Vec<Level>,
    /// Bethe energies farther than the tolerance from every level.
    pub unmatched_bethe: Vec<C64>,
    pub coverage_fraction: f64,
}

/// Assigns every Bethe energy to its nearest ED level and keeps the
/// assignments closer than `tol`. Degenerate levels may receive several Bethe
/// energies; the closest one is reported.
pub fn match_spectrum(bethe_energies: &[C64], ed: &SpectrumResult, tol: f64) -> CompletenessReport {
    let mut best: Vec<Option<(C64, f64)>> = vec![None; ed.levels.len()];
    let mut unmatched_bethe = Vec::new();
    for &e in bethe_energies {
        let nearest = ed
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l.value - e).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match nearest {
            Some((i, d)) if d < tol => {
                if best[i].is_none_or(|(_, old)| d < old) {
                    best[i] = Some((e, d));
                }
            }
            _ => unmatched_bethe.push(e),
        }
    }
    let mut matched_levels = Vec::new();
    let mut unmatched_ed_levels = Vec::new();
    for (level, b) in ed.levels.iter().zip(best) {
        match b {
            Some((bethe_energy, defect)) => matched_levels.push(MatchedLevel { bethe_energy, level: *level, defect }),
            None => unmatched_ed_levels.push(*level),
        }
    }
    let coverage_fraction =
        if ed.levels.is_empty() { 0.0 } else { matched_levels.len() as f64 / ed.levels.len() as f64 };
    CompletenessReport { matched_levels, unmatched_ed_levels, unmatched_bethe, coverage_fraction }
}
