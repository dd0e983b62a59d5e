//! Effective dimensionalities: Shannon dimensionality of an analyzer, Schmidt
//! number of a source, the closed form for single-sector plates and the
//! estimate read off a measured coincidence fringe.

use std::f64::consts::{PI, TAU};

use crate::angle::ANGLE_TOLERANCE;
use crate::error::{Error, Result};
use crate::fringe::Fringe;
use crate::spectrum::ModeSpectrum;

/// Schmidt weights `lambda_l` of the generated two-photon state over
/// `-l_max..=l_max`, normalized to unit sum.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceSpectrum {
    l_max: usize,
    // unnormalized; lambda_l = raw_l / total
    raw: Vec<f64>,
    total: f64,
}

impl SourceSpectrum {
    /// `weights` runs from `-l_max` to `l_max` (odd length) and is normalized
    /// on construction.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch {
                boundaries: weights.len(),
                phases: weights.len() + 1,
            });
        }
        let total = checked_total(&weights)?;
        Ok(SourceSpectrum {
            l_max: weights.len() / 2,
            raw: weights,
            total,
        })
    }

    /// Equal weight on every `|l| <= l_max`.
    pub fn flat(l_max: usize) -> Self {
        let n = 2 * l_max + 1;
        SourceSpectrum {
            l_max,
            raw: vec![1.0; n],
            total: n as f64,
        }
    }

    /// `lambda_l ~ exp(-l^2 / (2 width^2))` cut at `l_max`.
    pub fn gaussian(width: f64, l_max: usize) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidWeight { index: 0, value: width });
        }
        let weights = (-(l_max as i64)..=l_max as i64)
            .map(|l| (-((l * l) as f64) / (2.0 * width * width)).exp())
            .collect();
        Self::new(weights)
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn weight(&self, l: i64) -> f64 {
        if l.unsigned_abs() as usize > self.l_max {
            0.0
        } else {
            self.raw[(l + self.l_max as i64) as usize] / self.total
        }
    }

    /// Normalized weights from `-l_max` to `l_max`.
    pub fn weights(&self) -> Vec<f64> {
        self.raw.iter().map(|w| w / self.total).collect()
    }

    pub(crate) fn peak_weight(&self) -> f64 {
        self.raw.iter().copied().fold(0.0, f64::max) / self.total
    }
}

/// `(sum gamma)^2 / sum gamma^2`: the Shannon dimensionality of the analyzer
/// after normalizing `gamma` to unit sum.
pub fn shannon_dimension(spectrum: &ModeSpectrum) -> Result<f64> {
    let (first, second) = spectrum.power_sums();
    if !(first > 0.0 && second > 0.0) {
        return Err(Error::ZeroSpectrum);
    }
    Ok(first * first / second)
}

/// `1 / sum lambda_l^2`
pub fn schmidt_number(source: &SourceSpectrum) -> f64 {
    inverse_purity(&source.raw, source.total)
}

/// Schmidt number of an arbitrary list of nonnegative weights, normalized
/// first.
pub fn schmidt_number_from_weights(weights: &[f64]) -> Result<f64> {
    let total = checked_total(weights)?;
    Ok(inverse_purity(weights, total))
}

// (sum w)^2 / sum w^2, exact for equal weights
fn inverse_purity(raw: &[f64], total: f64) -> f64 {
    total * total / raw.iter().map(|w| w * w).sum::<f64>()
}

/// Closed-form dimensionality of a plate with a single pi-sector of width
/// `delta`, for `delta` in `[0, 2pi]`.
pub fn single_sector_dimension(delta: f64) -> Result<f64> {
    if !(0.0..=TAU + ANGLE_TOLERANCE).contains(&delta) {
        return Err(Error::AngleOutOfRange {
            value: delta,
            min: 0.0,
            max: TAU,
        });
    }
    let folded = if delta > PI { (TAU - delta).max(0.0) } else { delta };
    let x = folded / PI;
    Ok(1.0 / (1.0 - 4.0 * x + 6.0 * x * x - 8.0 / 3.0 * x * x * x))
}

/// Inverse of the mean of the peak-normalized fringe over a full turn.
pub fn fringe_dimension(fringe: &Fringe) -> Result<f64> {
    fringe.check_uniform()?;
    if fringe.len() < 3 {
        return Err(Error::Undersampled {
            required: 3,
            given: fringe.len(),
        });
    }
    let peak = fringe.peak();
    if !(peak > 0.0) {
        return Err(Error::ZeroFringe);
    }
    let mean = fringe.rates().iter().map(|r| r / peak).sum::<f64>() / fringe.len() as f64;
    Ok(1.0 / mean)
}

/// Parses a list of source weights: numbers separated by whitespace or
/// commas, `#` starts a comment.
pub fn parse_weights(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        for token in content.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("'{token}' is not a number"),
            })?;
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("weight {token} must be finite and nonnegative"),
                });
            }
            out.push(value);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no weights found".into(),
        });
    }
    Ok(out)
}

fn checked_total(weights: &[f64]) -> Result<f64> {
    if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidWeight { index, value });
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::ZeroWeights);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::plate::SectorPlate;
    use crate::spectrum::{mode_spectrum, truncate_spectrum, LMaxRule};
    use crate::testutil::arb_plate;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn window(gammas: &[f64]) -> ModeSpectrum {
        ModeSpectrum::from_window(gammas.iter().map(|g| Complex64::new(g.sqrt(), 0.0)).collect()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon_dimension(&window(&[0.0, 0.25, 0.25, 0.25, 0.25])).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(shannon_dimension(&window(&[0.0, 0.7, 0.0])).unwrap(), 1.0);
        let half = mode_spectrum(&SectorPlate::single_sector(PI).unwrap(), 64);
        assert!((shannon_dimension(&half).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(shannon_dimension(&window(&[0.0, 0.0, 0.0])).unwrap_err(), Error::ZeroSpectrum);
    }

    #[test]
    fn schmidt_examples() {
        assert!((schmidt_number(&SourceSpectrum::flat(15)) - 31.0).abs() < 1e-12);
        assert_eq!(schmidt_number(&SourceSpectrum::new(vec![1.0]).unwrap()), 1.0);
        let s = SourceSpectrum::new(vec![0.25, 0.5, 0.25]).unwrap();
        assert!((schmidt_number(&s) - 8.0 / 3.0).abs() < 1e-14);
        assert!((schmidt_number_from_weights(&[2.0, 1.0, 1.0]).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert_eq!(schmidt_number_from_weights(&[0.0, 0.0]).unwrap_err(), Error::ZeroWeights);
        assert!(matches!(schmidt_number_from_weights(&[1.0, -1.0]), Err(Error::InvalidWeight { index: 1, .. })));
    }

    #[test]
    fn uniform_source_schmidt_number_is_exact() {
        for m in 0..40 {
            assert_eq!(schmidt_number(&SourceSpectrum::flat(m)), (2 * m + 1) as f64);
        }
    }

    #[test]
    fn gaussian_source_is_normalized() {
        let g = SourceSpectrum::gaussian(3.0, 20).unwrap();
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(g.weight(0) > g.weight(3));
        assert_eq!(g.weight(21), 0.0);
        assert!(SourceSpectrum::gaussian(0.0, 3).is_err());
    }

    #[test]
    fn closed_form_anchors() {
        let cases = [(0.0, 1.0), (PI, 3.0), (FRAC_PI_2, 6.0), (1.5 * PI, 6.0), (TAU, 1.0)];
        for (delta, d) in cases {
            assert!((single_sector_dimension(delta).unwrap() - d).abs() < 1e-12, "delta={delta}");
        }
        assert!(single_sector_dimension(2.2 * PI).is_err());
        assert!(single_sector_dimension(-0.1).is_err());
    }

    #[test]
    fn closed_form_is_symmetric() {
        for k in 0..=100 {
            let delta = TAU * k as f64 / 100.0;
            let a = single_sector_dimension(delta).unwrap();
            let b = single_sector_dimension(TAU - delta).unwrap();
            assert!((a - b).abs() < 1e-9 * a);
        }
    }

    #[test]
    fn spectral_route_matches_closed_form() {
        for k in 1..20 {
            let delta = TAU * k as f64 / 20.0 - 0.01;
            let plate = SectorPlate::single_sector(delta).unwrap();
            let d = shannon_dimension(&mode_spectrum(&plate, LMaxRule::DEFAULT.resolve(&plate))).unwrap();
            assert!((d - single_sector_dimension(delta).unwrap()).abs() < 1e-4, "delta={delta}");
        }
    }

    #[test]
    fn fringe_dimension_examples() {
        let n = 400;
        let cos2 = Fringe::uniform((0..n).map(|i| (TAU * i as f64 / n as f64).cos().powi(2)).collect()).unwrap();
        assert!((fringe_dimension(&cos2).unwrap() - 2.0).abs() < 1e-12);
        let flat = Fringe::uniform(vec![0.3; 17]).unwrap();
        assert_eq!(fringe_dimension(&flat).unwrap(), 1.0);
        let n = 1 << 14;
        let parabola = Fringe::uniform(
            (0..n)
                .map(|i| {
                    let d = crate::angle::circular_distance(TAU * i as f64 / n as f64, 0.0);
                    (1.0 - 2.0 * d / PI).powi(2)
                })
                .collect(),
        )
        .unwrap();
        assert!((fringe_dimension(&parabola).unwrap() - 3.0).abs() < 1e-6);
        assert_eq!(fringe_dimension(&Fringe::uniform(vec![0.0; 8]).unwrap()).unwrap_err(), Error::ZeroFringe);
    }

    #[test]
    fn fringe_dimension_rejects_uneven_grid() {
        let f = Fringe::new(vec![0.0, 1.0, 3.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(fringe_dimension(&f), Err(Error::NonUniformGrid { .. })));
    }

    #[test]
    fn weights_file_parsing() {
        assert_eq!(parse_weights("# source\n2, 1\n1 # tail\n").unwrap(), vec![2.0, 1.0, 1.0]);
        assert!(matches!(parse_weights("1\nx\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_weights("1 -2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_weights("# nothing"), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn dimension_bounds(gammas in prop::collection::vec(0.0f64..1.0, 1..20)) {
            let mut g = gammas.clone();
            if g.len() % 2 == 0 { g.push(0.0); }
            prop_assume!(g.iter().any(|&x| x > 1e-6));
            let d = shannon_dimension(&window(&g)).unwrap();
            let support = g.iter().filter(|&&x| x > 0.0).count() as f64;
            prop_assert!(d >= 1.0 - 1e-12 && d <= support + 1e-9);
            let scaled: Vec<f64> = g.iter().map(|x| 3.7 * x).collect();
            prop_assert!((shannon_dimension(&window(&scaled)).unwrap() - d).abs() < 1e-12 * d);
        }

        #[test]
        fn dimension_is_rotation_invariant(p in arb_plate(), alpha in 0.0..TAU) {
            let d = shannon_dimension(&mode_spectrum(&p, 8)).unwrap();
            let r = shannon_dimension(&mode_spectrum(&p.rotate(Angle::new(alpha)), 8)).unwrap();
            prop_assert!((d - r).abs() < 1e-12 * d);
            let t = truncate_spectrum(&mode_spectrum(&p, 8), 8);
            if let Ok(t) = t {
                let tr = truncate_spectrum(&mode_spectrum(&p.rotate(Angle::new(alpha)), 8), 8).unwrap();
                prop_assert!((shannon_dimension(&t).unwrap() - shannon_dimension(&tr).unwrap()).abs() < 1e-10);
            }
        }
    }
}
