//! Sine and cosine integrals, the entire function I(i tau), and the
//! characteristic function rho0_hat(tau) = exp(I(i tau)) of the Dickman law.
//!
//! |tau| <= 4 uses the power series of I(s) = sum_j s^j/(j j!); beyond that
//! Si and Ci come from E1(i x) evaluated by a modified-Lentz continued
//! fraction (110 iterations at the x = 4 seam, a handful for large x).

use num_complex::Complex64;

use crate::dickman::EULER_GAMMA;

const SERIES_SWITCH: f64 = 4.0;

/// e^{i theta} - 1 without cancellation for small theta.
#[inline]
pub fn cis_minus_one(theta: f64) -> Complex64 {
    let s = (0.5 * theta).sin();
    let c = (0.5 * theta).cos();
    Complex64::new(-2.0 * s * s, 2.0 * s * c)
}

/// E1(i x) for x > 0 via the continued fraction
/// E1(z) = e^{-z} / (z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...))))).
fn e1_of_ix(x: f64) -> Complex64 {
    debug_assert!(x > 0.0);
    let z = Complex64::new(0.0, x);
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z;
    if f.norm_sqr() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for it in 1..400u32 {
        let (a, b) = if it % 2 == 1 {
            (((it + 1) / 2) as f64, Complex64::new(1.0, 0.0))
        } else {
            ((it / 2) as f64, z)
        };
        d = b + a * d;
        if d.norm_sqr() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm_sqr() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-z).exp() / f
}

fn si_ci_large(x: f64) -> (f64, f64) {
    let e1 = e1_of_ix(x);
    (std::f64::consts::FRAC_PI_2 + e1.im, -e1.re)
}

/// I(i tau) by power series, |tau| <= SERIES_SWITCH.
fn int_i_series(tau: f64) -> Complex64 {
    let z = Complex64::new(0.0, tau);
    let mut term = z; // z^j / j!
    let mut sum = z; // term / j accumulated
    let mut j = 1.0;
    loop {
        j += 1.0;
        term *= z / j;
        let add = term / j;
        sum += add;
        if add.norm() < 1e-18 * (1.0 + sum.norm()) || j > 60.0 {
            break;
        }
    }
    sum
}

/// Sine integral Si(x) = int_0^x sin t / t dt (odd in x).
pub fn si(x: f64) -> f64 {
    if x < 0.0 {
        return -si(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= SERIES_SWITCH {
        int_i_series(x).im
    } else {
        si_ci_large(x).0
    }
}

/// Cosine integral Ci(x) for x > 0.
pub fn ci(x: f64) -> f64 {
    assert!(x > 0.0, "Ci requires a positive argument");
    if x <= SERIES_SWITCH {
        int_i_series(x).re + EULER_GAMMA + x.ln()
    } else {
        si_ci_large(x).1
    }
}

/// I(i tau) = int_0^1 (e^{i v tau} - 1) dv / v; entire, I(0) = 0,
/// Re = Ci(|tau|) - gamma - log|tau|, Im = Si(tau).
pub fn int_i(tau: f64) -> Complex64 {
    if tau == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let x = tau.abs();
    let v = if x <= SERIES_SWITCH {
        int_i_series(x)
    } else {
        let (s, c) = si_ci_large(x);
        Complex64::new(c - EULER_GAMMA - x.ln(), s)
    };
    if tau < 0.0 {
        v.conj()
    } else {
        v
    }
}

/// Fourier transform of the Dickman density,
/// rho0_hat(tau) = int e^{i tau u} rho0(u) du = exp(I(i tau)).
pub fn rho0_hat(tau: f64) -> Complex64 {
    int_i(tau).exp()
}
