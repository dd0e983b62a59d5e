//! Two-photon coincidence fringes.
//!
//! The source emits `sum_l sqrt(lambda_l) |l>|-l>`; projecting on the two
//! analyzer states gives the coincidence amplitude
//!
//! ```text
//! g(Delta) = sum_l sqrt(lambda_l) conj(cA_l) conj(cB_{-l}) e^{-il Delta},
//! ```
//!
//! with analyzer B turned by `Delta` relative to A, and the rate
//! `C(Delta) = |g(Delta)|^2`.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angle::{reduce, Angle};
use crate::dimension::SourceSpectrum;
use crate::error::{Error, Result};
use crate::lattice::inverse_square_sum;
use crate::plate::SectorPlate;
use crate::spectrum::ModeSpectrum;

/// Relative grid tolerance when checking that a fringe is uniformly sampled.
const GRID_TOLERANCE: f64 = 1e-9;

/// Coincidence rate sampled on `Delta_m = 2 pi m / M`, `m = 0..M`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fringe {
    deltas: Vec<f64>,
    rates: Vec<f64>,
}

impl Fringe {
    /// Rates on the uniform grid over `[0, 2pi)`.
    pub fn uniform(rates: Vec<f64>) -> Result<Self> {
        let n = rates.len();
        let deltas = (0..n).map(|m| TAU * m as f64 / n as f64).collect();
        Self::new(deltas, rates)
    }

    /// Arbitrary sample positions; rates must be finite and nonnegative.
    /// Grid uniformity is checked where it matters ([`crate::fringe_dimension`]).
    pub fn new(deltas: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if deltas.len() != rates.len() {
            return Err(Error::LengthMismatch {
                boundaries: deltas.len(),
                phases: rates.len(),
            });
        }
        if let Some(index) = rates.iter().position(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidRate { index });
        }
        if let Some(index) = deltas.iter().position(|d| !d.is_finite()) {
            return Err(Error::NonUniformGrid { index });
        }
        Ok(Fringe { deltas, rates })
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.rates.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn check_uniform(&self) -> Result<()> {
        let n = self.deltas.len();
        for (m, &d) in self.deltas.iter().enumerate() {
            let expected = TAU * m as f64 / n as f64;
            if (d - expected).abs() > GRID_TOLERANCE * TAU {
                return Err(Error::NonUniformGrid { index: m });
            }
        }
        Ok(())
    }

    /// `delta_rad,rate` with full-precision values.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "delta_rad,rate")?;
        for (d, r) in self.deltas.iter().zip(&self.rates) {
            writeln!(out, "{d:?},{r:?}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ascii")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim() == "delta_rad,rate" => {}
            Some((i, _)) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "expected header 'delta_rad,rate'".into(),
                })
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "empty fringe file".into(),
                })
            }
        }
        let mut deltas = Vec::new();
        let mut rates = Vec::new();
        for (i, line) in lines {
            let parse_error = |message: String| Error::Parse { line: i + 1, message };
            let mut fields = line.split(',');
            let (Some(d), Some(r), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_error("expected two fields".into()));
            };
            let d: f64 = d.trim().parse().map_err(|_| parse_error(format!("bad delta '{d}'")))?;
            let r: f64 = r.trim().parse().map_err(|_| parse_error(format!("bad rate '{r}'")))?;
            if !(r.is_finite() && r >= 0.0) {
                return Err(parse_error(format!("rate {r} must be finite and nonnegative")));
            }
            if !d.is_finite() {
                return Err(parse_error(format!("delta {d} is not finite")));
            }
            deltas.push(d);
            rates.push(r);
        }
        Fringe::new(deltas, rates)
    }
}

/// Two-photon source model for fringe simulation.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum Source {
    /// Equal weight on every `l` without cutoff: the `K >> D` limit.
    #[default]
    Flat,
    /// Finite Schmidt spectrum; amplitudes are taken relative to its largest
    /// weight so rates stay comparable with [`Source::Flat`].
    Spectrum(SourceSpectrum),
}

impl Source {
    fn amplitude(&self, l: i64) -> f64 {
        match self {
            Source::Flat => 1.0,
            Source::Spectrum(s) => (s.weight(l) / s.peak_weight()).sqrt(),
        }
    }

    fn l_limit(&self) -> Option<usize> {
        match self {
            Source::Flat => None,
            Source::Spectrum(s) => Some(s.l_max()),
        }
    }
}

/// Fringe rates `|g(Delta)|^2` on a uniform grid of `samples` points.
///
/// Spectra that carry their jump series are summed to all orders when the
/// source is flat, so ideal plates produce their exact fringe.
pub fn coincidence_fringe(a: &ModeSpectrum, b: &ModeSpectrum, source: &Source, samples: usize) -> Result<Fringe> {
    let required = 4 * a.l_max().max(b.l_max()) + 1;
    if samples < required {
        return Err(Error::Undersampled { required, given: samples });
    }

    let limit = [
        (!a.has_tail()).then_some(a.l_max()),
        (!b.has_tail()).then_some(b.l_max()),
        source.l_limit(),
    ]
    .into_iter()
    .flatten()
    .min();

    let rates: Vec<f64> = match (limit, a.tail_jumps(), b.tail_jumps()) {
        (None, Some(ja), Some(jb)) => {
            let zeroth = (a.coefficient(0) * b.coefficient(0)).conj();
            let pairs: Vec<(f64, Complex64)> = ja
                .iter()
                .flat_map(|x| jb.iter().map(move |y| (x.angle - y.angle, (x.step * y.step).conj())))
                .collect();
            let scale = 1.0 / (4.0 * PI * PI);
            (0..samples)
                .into_par_iter()
                .map(|m| {
                    let delta = TAU * m as f64 / samples as f64;
                    let series: Complex64 = pairs.iter().map(|&(x, w)| w * inverse_square_sum(x - delta)).sum();
                    (zeroth + series * scale).norm_sqr()
                })
                .collect()
        }
        (limit, _, _) => {
            let window = limit.unwrap_or(0) as i64;
            let terms: Vec<(i64, Complex64)> = (-window..=window)
                .map(|l| (l, (a.coefficient(l) * b.coefficient(-l)).conj() * source.amplitude(l)))
                .filter(|(_, t)| *t != Complex64::new(0.0, 0.0))
                .collect();
            // e^{-il Delta_m} = roots[(l m) mod M]
            let roots: Vec<Complex64> = (0..samples)
                .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / samples as f64))
                .collect();
            let n = samples as i64;
            (0..samples)
                .into_par_iter()
                .map(|m| {
                    let g: Complex64 = terms
                        .iter()
                        .map(|&(l, t)| t * roots[(l * m as i64).rem_euclid(n) as usize])
                        .sum();
                    g.norm_sqr()
                })
                .collect()
        }
    };
    Fringe::uniform(rates)
}

/// Gram-matrix entry `<X(xi)|X(xi')> = sum_l gamma_l e^{il(xi' - xi)}` for one
/// analyzer turned to two settings.
pub fn analyzer_overlap(spectrum: &ModeSpectrum, xi: Angle, xi_prime: Angle) -> Complex64 {
    let shift = xi_prime.radians() - xi.radians();
    match spectrum.tail_jumps() {
        Some(jumps) => {
            // gamma_l = sum_{jk} J_j conj(J_k) e^{-il(theta_j - theta_k)} / (4 pi^2 l^2)
            let series: Complex64 = jumps
                .iter()
                .flat_map(|x| jumps.iter().map(move |y| x.step * y.step.conj() * inverse_square_sum(shift - (x.angle - y.angle))))
                .sum();
            spectrum.gamma(0) + series / (4.0 * PI * PI)
        }
        None => spectrum
            .window()
            .map(|(l, c)| c.norm_sqr() * Complex64::from_polar(1.0, l as f64 * shift))
            .sum(),
    }
}

/// Real-space fringe `|(1/2pi) int conj(tA(theta)) conj(tB(theta - Delta))|^2`
/// by midpoint quadrature on panels split at every sector boundary of both
/// plates. Independent of the Fourier pipeline.
pub fn overlap_fringe_oracle(a: &SectorPlate, b: &SectorPlate, samples: usize, quad_points: usize) -> Result<Fringe> {
    let required = 4 * (a.sector_count() + b.sector_count());
    if quad_points < required {
        return Err(Error::InsufficientSamples {
            required,
            given: quad_points,
        });
    }
    if samples == 0 {
        return Err(Error::Undersampled { required: 1, given: 0 });
    }
    let rates = (0..samples)
        .into_par_iter()
        .map(|m| {
            let delta = TAU * m as f64 / samples as f64;
            let mut cuts: Vec<f64> = a
                .boundaries()
                .iter()
                .copied()
                .chain(b.boundaries().iter().map(|&x| reduce(x + delta)))
                .collect();
            cuts.sort_by(f64::total_cmp);
            let mut integral = Complex64::new(0.0, 0.0);
            for (k, &start) in cuts.iter().enumerate() {
                let end = if k + 1 < cuts.len() { cuts[k + 1] } else { cuts[0] + TAU };
                let width = end - start;
                if width <= 0.0 {
                    continue;
                }
                let panels = ((quad_points as f64 * width / TAU).floor() as usize).max(1);
                let h = width / panels as f64;
                let panel_sum: Complex64 = (0..panels)
                    .map(|j| {
                        let theta = start + (j as f64 + 0.5) * h;
                        (a.transmission_at(Angle::new(theta)) * b.transmission_at(Angle::new(theta - delta))).conj()
                    })
                    .sum();
                integral += panel_sum * h;
            }
            (integral / TAU).norm_sqr()
        })
        .collect();
    Fringe::uniform(rates)
}

/// `(max - min) / (max + min)`
pub fn visibility(fringe: &Fringe) -> Result<f64> {
    let max = fringe.peak();
    if !(max > 0.0) {
        return Err(Error::ZeroFringe);
    }
    let min = fringe.rates().iter().copied().fold(f64::INFINITY, f64::min);
    Ok((max - min) / (max + min))
}

/// Default sample count for a fringe between spectra of window `l_max`.
pub fn default_samples(l_max: usize) -> usize {
    4 * l_max + 9
}
