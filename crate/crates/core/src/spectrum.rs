//! OAM mode spectra of analyzer detection states.
//!
//! A plate coupled to a fundamental fiber mode projects onto the state
//! `sum_l c_l |l>`, where `c_l` is the `l`-th azimuthal Fourier coefficient of
//! the plate transmission. For a piecewise-constant transmission every
//! nonzero coefficient follows from the jumps of the profile,
//!
//! ```text
//! c_l = sum_k J_k e^{-il theta_k} / (2 pi i l),      l != 0,
//! ```
//!
//! so a spectrum computed from a plate keeps that jump series alongside the
//! dense window `|l| <= l_max`. Power sums over all `l` are then evaluated in
//! closed form instead of being cut off at the window edge.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{inverse_quartic_sum, inverse_square_sum};
use crate::plate::{Jump, SectorPlate};

/// How many modes to materialize for a plate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LMaxRule {
    Fixed(usize),
    /// Smallest `L` whose Parseval residual `1 - sum gamma_l` is below
    /// `tolerance`, but never more than `cap`.
    Residual { tolerance: f64, cap: usize },
}

impl LMaxRule {
    pub const DEFAULT: LMaxRule = LMaxRule::Residual {
        tolerance: 1e-6,
        cap: 4096,
    };

    pub fn resolve(&self, plate: &SectorPlate) -> usize {
        match *self {
            LMaxRule::Fixed(l) => l,
            LMaxRule::Residual { tolerance, cap } => residual_l_max(plate, tolerance, cap),
        }
    }
}

impl Default for LMaxRule {
    fn default() -> Self {
        LMaxRule::DEFAULT
    }
}

#[derive(Clone, Debug)]
pub struct ModeSpectrum {
    l_max: usize,
    /// `c_l` for `l = -l_max..=l_max`
    coefficients: Vec<Complex64>,
    /// Jump series describing every `c_l` with `l != 0`, if known.
    tail: Option<Vec<Jump>>,
}

impl ModeSpectrum {
    /// Spectrum over `|l| <= l_max` with nothing outside the window.
    /// `coefficients` runs from `-l_max` to `l_max`.
    pub fn from_window(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch {
                boundaries: coefficients.len(),
                phases: coefficients.len() + 1,
            });
        }
        Ok(ModeSpectrum {
            l_max: coefficients.len() / 2,
            coefficients,
            tail: None,
        })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// `(l, c_l)` over the stored window.
    pub fn window(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let l_max = self.l_max as i64;
        self.coefficients.iter().enumerate().map(move |(i, &c)| (i as i64 - l_max, c))
    }

    /// True when coefficients beyond the window are known exactly.
    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    pub(crate) fn tail_jumps(&self) -> Option<&[Jump]> {
        self.tail.as_deref()
    }

    /// `c_l` for any `l`; outside the window this is the jump series, or zero
    /// for spectra without one.
    pub fn coefficient(&self, l: i64) -> Complex64 {
        if l.unsigned_abs() as usize <= self.l_max {
            return self.coefficients[(l + self.l_max as i64) as usize];
        }
        match &self.tail {
            Some(jumps) => series_coefficient(jumps, l),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn gamma(&self, l: i64) -> f64 {
        self.coefficient(l).norm_sqr()
    }

    /// Sum of `gamma_l` over the stored window. `1 - captured_power` is the
    /// truncation residual for a spectrum computed from a plate.
    pub fn captured_power(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `sum gamma_l` over every `l` the spectrum describes.
    pub fn total_power(&self) -> f64 {
        self.power_sums().0
    }

    /// `(sum gamma_l, sum gamma_l^2)` over every `l` the spectrum describes.
    pub fn power_sums(&self) -> (f64, f64) {
        match &self.tail {
            None => self
                .coefficients
                .iter()
                .map(|c| c.norm_sqr())
                .fold((0.0, 0.0), |(s1, s2), g| (s1 + g, s2 + g * g)),
            Some(jumps) => {
                let g0 = self.coefficients[self.l_max].norm_sqr();
                let (s1, s2) = series_power_sums(jumps);
                (g0 + s1, g0 * g0 + s2)
            }
        }
    }

    /// Records `(l, c_l, gamma_l)` over the window, ascending in `l`.
    pub fn records(&self) -> Vec<SpectrumRecord> {
        self.window()
            .map(|(l, c)| SpectrumRecord {
                l,
                re_c: c.re,
                im_c: c.im,
                gamma: c.norm_sqr(),
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "l,re_c,im_c,gamma")?;
        for r in self.records() {
            writeln!(out, "{},{:?},{:?},{:?}", r.l, r.re_c, r.im_c, r.gamma)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRecord {
    pub l: i64,
    pub re_c: f64,
    pub im_c: f64,
    pub gamma: f64,
}

/// Fourier coefficients of the plate transmission over `|l| <= l_max`.
pub fn mode_spectrum(plate: &SectorPlate, l_max: usize) -> ModeSpectrum {
    let jumps = plate.jumps();
    let mut coefficients = vec![Complex64::new(0.0, 0.0); 2 * l_max + 1];
    coefficients[l_max] = zeroth_coefficient(plate);
    for l in 1..=l_max as i64 {
        coefficients[l_max + l as usize] = series_coefficient(&jumps, l);
        coefficients[l_max - l as usize] = series_coefficient(&jumps, -l);
    }
    ModeSpectrum {
        l_max,
        coefficients,
        tail: Some(jumps),
    }
}

pub fn mode_spectrum_with_rule(plate: &SectorPlate, rule: LMaxRule) -> ModeSpectrum {
    mode_spectrum(plate, rule.resolve(plate))
}

/// A quadrature estimate of a spectrum with a bound on its error per
/// coefficient.
#[derive(Clone, Debug)]
pub struct QuadratureSpectrum {
    pub spectrum: ModeSpectrum,
    pub error_bound: f64,
}

/// Midpoint-rule evaluation of `c_l = (1/2pi) int t(theta) e^{-il theta}`.
///
/// Each sector gets its own uniform panels so the integrand is smooth on
/// every panel. Independent of the jump series used by [`mode_spectrum`].
pub fn mode_spectrum_quadrature(plate: &SectorPlate, l_max: usize, samples: usize) -> Result<QuadratureSpectrum> {
    let required = 4 * (l_max + plate.sector_count());
    if samples < required {
        return Err(Error::InsufficientSamples { required, given: samples });
    }
    let widths = plate.widths();
    let mut coefficients = vec![Complex64::new(0.0, 0.0); 2 * l_max + 1];
    let mut widest_panel: f64 = 0.0;
    for ((&start, &width), &phase) in plate.boundaries().iter().zip(&widths).zip(plate.phases()) {
        let panels = ((samples as f64 * width / TAU).floor() as usize).max(1);
        let h = width / panels as f64;
        widest_panel = widest_panel.max(h);
        let t = phasor(phase);
        let weight = width / TAU / panels as f64;
        for (i, c) in coefficients.iter_mut().enumerate() {
            let l = i as f64 - l_max as f64;
            let sum: Complex64 = (0..panels)
                .map(|j| Complex64::from_polar(1.0, -l * (start + (j as f64 + 0.5) * h)))
                .sum();
            *c += t * sum * weight;
        }
    }
    // |d^2/dtheta^2 e^{-il theta}| = l^2, midpoint error h^2 l^2 / 24 per unit length
    let l = l_max as f64;
    let error_bound = widest_panel * widest_panel * l * l / 24.0 + 8.0 * samples as f64 * f64::EPSILON;
    Ok(QuadratureSpectrum {
        spectrum: ModeSpectrum {
            l_max,
            coefficients,
            tail: None,
        },
        error_bound,
    })
}

/// Hard cut at `|l| <= l_cut` followed by a common rescaling to unit power.
pub fn truncate_spectrum(spectrum: &ModeSpectrum, l_cut: usize) -> Result<ModeSpectrum> {
    let l_max = if spectrum.has_tail() {
        l_cut
    } else {
        l_cut.min(spectrum.l_max)
    };
    let mut coefficients: Vec<Complex64> = (-(l_max as i64)..=l_max as i64).map(|l| spectrum.coefficient(l)).collect();
    let power: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    if !(power > 1e-24 * spectrum.total_power().max(f64::MIN_POSITIVE)) {
        return Err(Error::NothingRetained { l_cut });
    }
    let scale = power.sqrt().recip();
    for c in &mut coefficients {
        *c *= scale;
    }
    Ok(ModeSpectrum {
        l_max,
        coefficients,
        tail: None,
    })
}

/// `sum gamma_l` over the window.
pub fn captured_power(spectrum: &ModeSpectrum) -> f64 {
    spectrum.captured_power()
}

/// `e^{i phase}`, exact at 0 and pi.
pub(crate) fn phasor(phase: f64) -> Complex64 {
    if phase == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if phase == PI {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, phase)
    }
}

fn zeroth_coefficient(plate: &SectorPlate) -> Complex64 {
    plate
        .widths()
        .iter()
        .zip(plate.phases())
        .map(|(&w, &p)| phasor(p) * (w / TAU))
        .sum()
}

fn series_coefficient(jumps: &[Jump], l: i64) -> Complex64 {
    let lf = l as f64;
    let sum: Complex64 = jumps
        .iter()
        .map(|j| j.step * Complex64::from_polar(1.0, -lf * j.angle))
        .sum();
    // 1 / (2 pi i l) = -i / (2 pi l)
    sum * Complex64::new(0.0, -1.0 / (TAU * lf))
}

/// `(sum_{l != 0} gamma_l, sum_{l != 0} gamma_l^2)` for a jump series.
///
/// With `a_p = J_j conj(J_k)` and `x_p = theta_j - theta_k`,
/// `gamma_l = sum_p a_p e^{-il x_p} / (4 pi^2 l^2)`, so both sums collapse to
/// lattice sums over pairs (and pairs of pairs).
pub(crate) fn series_power_sums(jumps: &[Jump]) -> (f64, f64) {
    if jumps.is_empty() {
        return (0.0, 0.0);
    }
    let mut pairs: Vec<(f64, Complex64)> = Vec::with_capacity(jumps.len() * jumps.len());
    let mut diagonal = 0.0;
    for (j, a) in jumps.iter().enumerate() {
        diagonal += a.step.norm_sqr();
        for (k, b) in jumps.iter().enumerate() {
            if j != k {
                pairs.push((a.angle - b.angle, a.step * b.step.conj()));
            }
        }
    }
    pairs.push((0.0, Complex64::new(diagonal, 0.0)));

    let four_pi2 = 4.0 * PI * PI;
    let first: f64 = pairs.iter().map(|&(x, a)| a.re * inverse_square_sum(x)).sum::<f64>() / four_pi2;

    let mut second = 0.0;
    for (p, &(xp, ap)) in pairs.iter().enumerate() {
        second += ap.norm_sqr() * inverse_quartic_sum(0.0);
        let mut cross = 0.0;
        for &(xq, aq) in &pairs[p + 1..] {
            cross += (ap * aq.conj()).re * inverse_quartic_sum(xp - xq);
        }
        second += 2.0 * cross;
    }
    (first, second / (four_pi2 * four_pi2))
}

fn residual_l_max(plate: &SectorPlate, tolerance: f64, cap: usize) -> usize {
    let jumps = plate.jumps();
    let mut power = zeroth_coefficient(plate).norm_sqr();
    let mut l = 0usize;
    while 1.0 - power >= tolerance && l < cap {
        l += 1;
        let li = l as i64;
        power += series_coefficient(&jumps, li).norm_sqr() + series_coefficient(&jumps, -li).norm_sqr();
    }
    l
}
