//! Piecewise-constant azimuthal phase plates.
//!
//! A plate is a list of sector start angles and the phase each sector
//! imprints. Sector `k` covers `[boundaries[k], boundaries[k + 1])`, the last
//! one wrapping through 2pi back to `boundaries[0]`. Plates are kept in a
//! canonical form: zero-width sectors are dropped, adjacent sectors with equal
//! phase are merged and the smallest boundary comes first.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{circular_distance, reduce, Angle, ANGLE_TOLERANCE};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SectorPlate {
    boundaries: Vec<f64>,
    phases: Vec<f64>,
}

/// A discontinuity of the transmission: at `angle` it steps by `step`
/// (the phasor of the sector starting there minus that of the sector before).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump {
    pub angle: f64,
    pub step: Complex64,
}

impl SectorPlate {
    /// Builds a plate from sector start angles (radians) and sector phases.
    pub fn new(boundaries: &[f64], phases: &[f64]) -> Result<Self> {
        if boundaries.is_empty() || phases.is_empty() {
            return Err(Error::EmptyPlate);
        }
        if boundaries.len() != phases.len() {
            return Err(Error::LengthMismatch {
                boundaries: boundaries.len(),
                phases: phases.len(),
            });
        }
        for (index, &b) in boundaries.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::NonFinite { field: "boundaries", index });
            }
            if !(0.0..TAU).contains(&b) {
                return Err(Error::BoundaryOutOfRange { index, value: b });
            }
            if index > 0 && b - boundaries[index - 1] <= ANGLE_TOLERANCE {
                return Err(Error::NotIncreasing { index });
            }
        }
        if let Some(index) = phases.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { field: "phases", index });
        }
        let phases: Vec<f64> = phases.iter().map(|&p| reduce(p)).collect();
        Ok(canonicalize(boundaries.to_vec(), phases))
    }

    /// Plate with no phase structure: transmission 1 everywhere.
    pub fn uniform() -> Self {
        SectorPlate {
            boundaries: vec![0.0],
            phases: vec![0.0],
        }
    }

    /// Phase pi on `[0, delta)`, 0 elsewhere.
    pub fn single_sector(delta: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&delta) {
            return Err(Error::AngleOutOfRange {
                value: delta,
                min: 0.0,
                max: TAU,
            });
        }
        if delta <= ANGLE_TOLERANCE {
            return Ok(Self::uniform());
        }
        Self::new(&[0.0, delta], &[PI, 0.0])
    }

    /// Binary plate whose sectors alternate pi, 0, pi, 0, ... starting at
    /// `boundaries[0]`. `2N` boundaries give `N` mesas.
    pub fn alternating(boundaries: &[f64]) -> Result<Self> {
        if boundaries.is_empty() || !boundaries.len().is_multiple_of(2) {
            return Err(Error::OddBoundaryCount(boundaries.len()));
        }
        let phases: Vec<f64> = (0..boundaries.len())
            .map(|k| if k % 2 == 0 { PI } else { 0.0 })
            .collect();
        Self::new(boundaries, &phases)
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn sector_count(&self) -> usize {
        self.boundaries.len()
    }

    /// Angular extent of each sector.
    pub fn widths(&self) -> Vec<f64> {
        let n = self.boundaries.len();
        (0..n)
            .map(|k| {
                if k + 1 < n {
                    self.boundaries[k + 1] - self.boundaries[k]
                } else {
                    self.boundaries[0] + TAU - self.boundaries[k]
                }
            })
            .collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.boundaries.len() == 1
    }

    /// True when every phase is 0 or pi, i.e. the transmission is real.
    pub fn is_binary(&self) -> bool {
        self.phases
            .iter()
            .all(|&p| circular_distance(p, 0.0) <= ANGLE_TOLERANCE || circular_distance(p, PI) <= ANGLE_TOLERANCE)
    }

    /// Index of the sector containing `theta`. Boundaries belong to the sector
    /// they start.
    pub fn sector_at(&self, theta: Angle) -> usize {
        let t = theta.radians();
        match self.boundaries.partition_point(|&b| b <= t) {
            0 => self.boundaries.len() - 1,
            k => k - 1,
        }
    }

    pub fn transmission_at(&self, theta: Angle) -> Complex64 {
        Complex64::from_polar(1.0, self.phases[self.sector_at(theta)])
    }

    /// The plate turned by `alpha`: `t'(theta) = t(theta - alpha)`.
    pub fn rotate(&self, alpha: Angle) -> SectorPlate {
        let mut sectors: Vec<(f64, f64)> = self
            .boundaries
            .iter()
            .zip(&self.phases)
            .map(|(&b, &p)| (reduce(b + alpha.radians()), p))
            .collect();
        sectors.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (boundaries, phases) = sectors.into_iter().unzip();
        canonicalize(boundaries, phases)
    }

    /// Mirror image `t'(theta) = t(-theta)`.
    pub fn reflect(&self) -> SectorPlate {
        // sector [a, b) maps to (-b, -a]; the start of the image is -b
        let widths = self.widths();
        let mut sectors: Vec<(f64, f64)> = self
            .boundaries
            .iter()
            .zip(&widths)
            .zip(&self.phases)
            .map(|((&b, &w), &p)| (reduce(-(b + w)), p))
            .collect();
        sectors.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (boundaries, phases) = sectors.into_iter().unzip();
        canonicalize(boundaries, phases)
    }

    /// Discontinuities of the transmission. Empty for a uniform plate.
    pub fn jumps(&self) -> Vec<Jump> {
        if self.is_uniform() {
            return Vec::new();
        }
        let n = self.boundaries.len();
        (0..n)
            .map(|k| {
                let prev = self.phases[(k + n - 1) % n];
                Jump {
                    angle: self.boundaries[k],
                    step: Complex64::from_polar(1.0, self.phases[k]) - Complex64::from_polar(1.0, prev),
                }
            })
            .collect()
    }

    /// Equality up to `tolerance` on every boundary and phase, comparing
    /// around the circle so that a boundary just below 2pi matches one at 0.
    pub fn approx_eq(&self, other: &SectorPlate, tolerance: f64) -> bool {
        let n = self.boundaries.len();
        if n != other.boundaries.len() {
            return false;
        }
        (0..n).any(|shift| {
            (0..n).all(|k| {
                let j = (k + shift) % n;
                circular_distance(self.boundaries[k], other.boundaries[j]) <= tolerance
                    && circular_distance(self.phases[k], other.phases[j]) <= tolerance
            })
        })
    }

    pub fn to_file(&self) -> PlateFile {
        PlateFile {
            boundaries_rad: self.boundaries.clone(),
            phases_rad: self.phases.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plate serializes")
    }

    /// Reads a plate file, reporting the offending line and field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PlateFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        SectorPlate::new(&file.boundaries_rad, &file.phases_rad).map_err(|e| {
            let (field, detail) = match &e {
                Error::NotIncreasing { index } | Error::BoundaryOutOfRange { index, .. } => {
                    ("boundaries_rad", format!("boundaries_rad[{index}]: {e}"))
                }
                Error::NonFinite { field: "phases", index } => ("phases_rad", format!("phases_rad[{index}]: {e}")),
                Error::NonFinite { index, .. } => ("boundaries_rad", format!("boundaries_rad[{index}]: {e}")),
                Error::LengthMismatch { .. } => ("phases_rad", format!("phases_rad: {e}")),
                _ => ("boundaries_rad", format!("boundaries_rad: {e}")),
            };
            Error::Parse {
                line: line_of_key(text, field),
                message: detail,
            }
        })
    }

    /// Plate equality for tests: canonical forms match within the angle
    /// tolerance.
    pub fn same_as(&self, other: &SectorPlate) -> bool {
        self.approx_eq(other, 1e-9)
    }
}

impl PartialEq for SectorPlate {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, ANGLE_TOLERANCE)
    }
}

/// On-disk plate description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateFile {
    pub boundaries_rad: Vec<f64>,
    pub phases_rad: Vec<f64>,
}

fn line_of_key(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    match text.find(&needle) {
        Some(pos) => text[..pos].matches('\n').count() + 1,
        None => 1,
    }
}

fn canonicalize(mut boundaries: Vec<f64>, mut phases: Vec<f64>) -> SectorPlate {
    // zero-width sectors
    loop {
        let n = boundaries.len();
        if n <= 1 {
            break;
        }
        let narrow = (0..n).find(|&k| {
            let width = if k + 1 < n {
                boundaries[k + 1] - boundaries[k]
            } else {
                boundaries[0] + TAU - boundaries[k]
            };
            width <= ANGLE_TOLERANCE
        });
        match narrow {
            Some(k) => {
                boundaries.remove(k);
                phases.remove(k);
            }
            None => break,
        }
    }

    // equal-phase neighbours: drop every sector that repeats its predecessor
    let n = boundaries.len();
    let keep: Vec<bool> = (0..n)
        .map(|k| circular_distance(phases[k], phases[(k + n - 1) % n]) > ANGLE_TOLERANCE)
        .collect();
    if n <= 1 || keep.iter().all(|&k| !k) {
        return SectorPlate {
            boundaries: vec![0.0],
            phases: vec![phases[0]],
        };
    }
    let (boundaries, phases) = boundaries
        .into_iter()
        .zip(phases)
        .zip(keep)
        .filter_map(|(bp, k)| k.then_some(bp))
        .unzip();
    SectorPlate { boundaries, phases }
}
