//! Clausen function Cl2, the dilogarithm on the unit circle, and tail sums
//! sum_{k>K} e^{ik theta}/k^2 used by the oscillatory kernel evaluations.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::kahan::KahanComplex;
use crate::kahan::KahanSum;

/// Series coefficients zeta(2m) / (m (2m+1) (2pi)^{2m}), m = 1..=40.
fn cl2_coeffs() -> &'static [f64; 40] {
    static COEFFS: OnceLock<[f64; 40]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut c = [0.0; 40];
        for m in 1..=40usize {
            let s = 2 * m as u32;
            let zeta = if m == 1 {
                PI * PI / 6.0
            } else {
                // direct sum with an Euler-Maclaurin tail at j = 40
                let mut acc = KahanSum::new();
                for j in (1..=40u32).rev() {
                    acc.add((j as f64).powi(-(s as i32)));
                }
                let n = 40.0f64;
                let sf = s as f64;
                acc.add(n.powf(1.0 - sf) / (sf - 1.0));
                acc.add(0.5 * n.powf(-sf));
                acc.add(sf / 12.0 * n.powf(-sf - 1.0));
                acc.value()
            };
            let m_f = m as f64;
            c[m - 1] = zeta / (m_f * (2.0 * m_f + 1.0) * (2.0 * PI).powi(2 * m as i32));
        }
        c
    })
}

/// Clausen function Cl2(theta) = sum_{k>=1} sin(k theta)/k^2.
///
/// Accelerated series: Cl2(t) = t - t ln t + sum_m c_m t^{2m+1} on [0, pi],
/// extended by oddness and 2pi-periodicity.
pub fn cl2(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t < 0.0 {
        t += 2.0 * PI;
    }
    let (t, sign) = if t > PI { (2.0 * PI - t, -1.0) } else { (t, 1.0) };
    if t == 0.0 {
        return 0.0;
    }
    let coeffs = cl2_coeffs();
    let t2 = t * t;
    let mut pow = t * t2; // t^{2m+1}
    let mut s = t - t * t.ln();
    for &c in coeffs {
        let add = c * pow;
        s += add;
        if add.abs() < 1e-18 * s.abs() {
            break;
        }
        pow *= t2;
    }
    sign * s
}

/// Li2(e^{i theta}): real part has the Bernoulli closed form
/// pi^2/6 - pi t/2 + t^2/4 on [0, 2pi], imaginary part is Cl2.
pub fn li2_circle(theta: f64) -> Complex64 {
    let mut t = theta % (2.0 * PI);
    if t < 0.0 {
        t += 2.0 * PI;
    }
    Complex64::new(PI * PI / 6.0 - PI * t / 2.0 + t * t / 4.0, cl2(t))
}

/// sum_{k > kmax} 1/k^2.
pub fn tail_inv_sq(kmax: usize) -> f64 {
    if kmax < 32 {
        let mut acc = KahanSum::new();
        acc.add(PI * PI / 6.0);
        for k in 1..=kmax {
            acc.add(-1.0 / (k as f64 * k as f64));
        }
        return acc.value();
    }
    let n = kmax as f64;
    1.0 / n - 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n * n * n) - 1.0 / (30.0 * n.powi(5))
        + 1.0 / (42.0 * n.powi(7))
}

/// sum_{k > kmax} e^{i k theta} / k^2 = Li2(e^{i theta}) - partial sum.
pub fn tail_exp_over_k2(theta: f64, kmax: usize) -> Complex64 {
    let mut acc = KahanComplex::new();
    for k in 1..=kmax {
        let kt = k as f64 * theta;
        let (s, c) = kt.sin_cos();
        let k2 = (k as f64) * (k as f64);
        acc.add(Complex64::new(c / k2, s / k2));
    }
    li2_circle(theta) - acc.value()
}
