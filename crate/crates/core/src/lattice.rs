//! Closed forms for the lattice sums `sum_{l != 0} e^{ilx} / l^2` and
//! `sum_{l != 0} e^{ilx} / l^4`, i.e. the periodic Bernoulli polynomials of
//! degree 2 and 4. Both are real, even and 2pi-periodic in `x`.

use std::f64::consts::PI;

use crate::angle::reduce;

const PI2: f64 = PI * PI;
const PI4: f64 = PI2 * PI2;

/// `sum_{l != 0} e^{ilx} / l^2`
#[inline]
pub(crate) fn inverse_square_sum(x: f64) -> f64 {
    let y = reduce(x);
    PI2 / 3.0 - PI * y + 0.5 * y * y
}

/// `sum_{l != 0} e^{ilx} / l^4`
#[inline]
pub(crate) fn inverse_quartic_sum(x: f64) -> f64 {
    let y = reduce(x);
    let y2 = y * y;
    2.0 * (PI4 / 90.0 - PI2 * y2 / 12.0 + PI * y2 * y / 12.0 - y2 * y2 / 48.0)
}
