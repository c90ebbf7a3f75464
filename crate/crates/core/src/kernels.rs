//! The analytic kernels entering the characteristic-function factorization
//! of T_n: the finite sums S_n, the convergent series U, the boundary
//! integrals V and V_n, the oscillatory tail W_n, the boundary weight a,
//! the combination F = e^{U+V} - 1 with its divided form G, and the exact
//! characteristic function phi_n.  All satisfy conjugate symmetry in tau;
//! everything is evaluated for |tau| <= pi.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahan::KahanComplex;
use crate::polylog::{tail_exp_over_k2, tail_inv_sq};
use crate::quad::{adaptive_gk15, composite_gl5};
use crate::sici::{cis_minus_one, rho0_hat};

/// Truncation index for the U series; the quadratic tail is summed in
/// closed form, leaving a cubic remainder below 4/K^2 = 4e-10.
pub const U_TRUNCATION: usize = 100_000;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Exact characteristic function E e^{i tau T_n} as a finite product.
pub fn phi_n(n: u32, tau: f64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for k in 1..=n as u64 {
        p *= 1.0 + cis_minus_one(tau * k as f64) / k as f64;
    }
    p
}

/// S_n(tau) = sum_{k<=n} (e^{i tau k} - 1)/k.
pub fn kernel_s(n: u32, tau: f64) -> Complex64 {
    let mut acc = KahanComplex::new();
    for k in 1..=n as u64 {
        acc.add(cis_minus_one(tau * k as f64) / k as f64);
    }
    acc.value()
}

// Bernoulli coefficients B_{2m}/(2m)! for the expansion
// 1/(1-e^{-z}) - 1/z = 1/2 + sum_m B_{2m} z^{2m-1}/(2m)! .
const BERN_OVER_FACT: [f64; 6] = [
    8.333_333_333_333_333e-2,   // B2/2!   = 1/12
    -1.388_888_888_888_888_9e-3, // B4/4!   = -1/720
    3.306_878_306_878_307e-5,   // B6/6!   = 1/30240
    -8.267_195_767_195_768e-7,  // B8/8!   = -1/1209600
    2.087_675_698_786_81e-8,    // B10/10! = 1/47900160
    -5.284_190_138_687_493e-10, // B12/12!
];

/// g_tau(v) = i tau/(1 - e^{-i tau v}) - 1/v, the integrand of V and V_n.
/// Removable singularity at v = 0 handled by the Bernoulli series.
fn g_tau(tau: f64, v: f64) -> Complex64 {
    let z = Complex64::new(0.0, tau * v);
    if (tau * v).abs() <= 0.5 {
        let z2 = z * z;
        let mut sum = Complex64::new(0.5, 0.0);
        let mut pow = z; // z^{2m-1}
        for &c in &BERN_OVER_FACT {
            sum += c * pow;
            pow *= z2;
        }
        I * tau * sum
    } else {
        // 1 - e^{-i theta} = -conj(e^{i theta} - 1)
        let denom = -cis_minus_one(-tau * v);
        I * tau / denom - 1.0 / v
    }
}

// B_{2m}/(2m (2m)!), antiderivative coefficients of the series above.
const BERN_INT: [f64; 6] = [
    4.166_666_666_666_667e-2,   // 1/24
    -3.472_222_222_222_222e-4,  // -1/2880
    5.511_463_844_797_178e-6,   // 1/181440
    -1.033_399_470_899_471e-7,  // -1/9676800
    2.087_675_698_786_81e-9,    // 1/479001600
    -4.403_491_782_239_578e-11, // B12/(12*12!)
];

/// V(tau) = -int_0^1 g_tau(v) dv, by term-wise integration of the series
/// near zero plus adaptive quadrature on the rest.
pub fn kernel_v(tau: f64) -> Complex64 {
    if tau == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let vs = (0.5 / tau.abs()).min(1.0);
    // int_0^{vs} g = i tau vs / 2 + sum_m B_{2m} (i tau vs)^{2m} / (2m (2m)!)
    let zs = Complex64::new(0.0, tau * vs);
    let zs2 = zs * zs;
    let mut series = I * tau * vs / 2.0;
    let mut pow = zs2;
    for &c in &BERN_INT {
        series += c * pow;
        pow *= zs2;
    }
    let quad = if vs < 1.0 {
        adaptive_gk15(&|v| g_tau(tau, v), vs, 1.0, 1e-12).0
    } else {
        Complex64::new(0.0, 0.0)
    };
    -(series + quad)
}

/// V_n(tau) = int_0^1 (e^{i n tau v} - 1) g_tau(v) dv, by a composite
/// Gauss-Legendre rule with the panel count tied to the oscillation.
pub fn kernel_vn(n: u32, tau: f64) -> Complex64 {
    let freq = (n as f64 * tau).abs();
    let panels = (freq.ceil() as usize).max(16);
    composite_gl5(
        |v| cis_minus_one(n as f64 * tau * v) * g_tau(tau, v),
        0.0,
        1.0,
        panels,
    )
}

/// a(tau) = 1/(1 - e^{-i tau}) - 1/(i tau), continuous value 1/2 at 0.
pub fn kernel_a(tau: f64) -> Complex64 {
    if tau.abs() <= 0.25 {
        let z = Complex64::new(0.0, tau);
        let z2 = z * z;
        let mut sum = Complex64::new(0.5, 0.0);
        let mut pow = z;
        for &c in &BERN_OVER_FACT {
            sum += c * pow;
            pow *= z2;
        }
        sum
    } else {
        let denom = -cis_minus_one(-tau);
        1.0 / denom - 1.0 / (I * tau)
    }
}

/// U(tau) = sum_{k>=1} { log(1 + (e^{i tau k}-1)/k) - (e^{i tau k}-1)/k }.
///
/// Branch policy: the k = 1 term is written directly as
/// i tau - (e^{i tau} - 1); every k >= 2 factor satisfies |x_k| <= 1 and
/// takes the principal logarithm.  Partial sum to `U_TRUNCATION`, then the
/// quadratic tail -x^2/2 is summed in closed form through dilogarithm
/// tails; the cubic remainder is below 4/K^2.
///
/// U has logarithmic singularities at tau = +-pi/2 where the k = 2 factor
/// vanishes (F = e^{U+V} - 1 stays analytic there).
pub fn kernel_u(tau: f64) -> Complex64 {
    if tau < 0.0 {
        return kernel_u(-tau).conj();
    }
    debug_assert!(tau <= PI + 1e-12);
    if tau == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = KahanComplex::new();
    acc.add(I * tau - cis_minus_one(tau));
    for k in 2..=U_TRUNCATION as u64 {
        let x = cis_minus_one(tau * k as f64) / k as f64;
        acc.add((1.0 + x).ln() - x);
    }
    let k = U_TRUNCATION;
    let tail = -0.5
        * (tail_exp_over_k2(2.0 * tau, k) - 2.0 * tail_exp_over_k2(tau, k)
            + tail_inv_sq(k));
    acc.add(tail);
    acc.value()
}

/// W_n(tau) = sum_{k>n} (e^{i tau k} - 1)^2 / (2 k^2), via
/// (e^{i theta}-1)^2 = e^{2 i theta} - 2 e^{i theta} + 1 and closed-form
/// tails of sum e^{i k theta}/k^2.
pub fn kernel_w(n: u32, tau: f64) -> Complex64 {
    if tau < 0.0 {
        return kernel_w(n, -tau).conj();
    }
    let n = n as usize;
    0.5 * (tail_exp_over_k2(2.0 * tau, n) - 2.0 * tail_exp_over_k2(tau, n) + tail_inv_sq(n))
}

/// F(tau) = e^{U(tau) + V(tau)} - 1, F(0) = 0.
pub fn kernel_f(tau: f64) -> Complex64 {
    if tau == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (kernel_u(tau) + kernel_v(tau)).exp() - 1.0
}

/// F'(0) = U'(0+) + V'(0) = i log 2 - i/2; the sum-level derivative of U
/// at 0 is i log 2 even though each term has zero derivative there.
fn g_at_zero() -> Complex64 {
    Complex64::new(0.0, std::f64::consts::LN_2 - 0.5)
}

/// G(tau) = F(tau)/tau with the continuous value G(0) = F'(0).
pub fn kernel_g(tau: f64) -> Complex64 {
    if tau.abs() < 1e-8 {
        return g_at_zero();
    }
    kernel_f(tau) / tau
}

/// Residual of the characteristic-function factorization after removing
/// all explicit terms:
/// | phi_n(tau)/rho0_hat(n tau) - 1 - F(tau) - a(tau)(1+F(tau)) e^{i n tau}/n |.
/// What remains is exactly the unspecified remainder of the factorization.
pub fn factorization_residual(n: u32, tau: f64) -> Result<f64> {
    let denom = rho0_hat(n as f64 * tau);
    if denom.norm() < 1e-250 {
        return Err(Error::Numerical {
            what: "factorization_residual",
            message: format!("rho0_hat({}) underflowed", n as f64 * tau),
        });
    }
    let f = kernel_f(tau);
    let a = kernel_a(tau);
    let w_star_main = a * (1.0 + f) * (I * (n as f64) * tau).exp() / n as f64;
    let r = phi_n(n, tau) / denom - 1.0 - f - w_star_main;
    Ok(r.norm())
}

/// Which kernel a [`KernelValue`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    S,
    U,
    V,
    Vn,
    W,
    A,
    F,
    G,
    Phi,
}

impl KernelKind {
    pub fn needs_n(self) -> bool {
        matches!(self, KernelKind::S | KernelKind::Vn | KernelKind::W | KernelKind::Phi)
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "S" | "s" => KernelKind::S,
            "U" | "u" => KernelKind::U,
            "V" | "v" => KernelKind::V,
            "Vn" | "vn" => KernelKind::Vn,
            "W" | "w" => KernelKind::W,
            "a" | "A" => KernelKind::A,
            "F" | "f" => KernelKind::F,
            "G" | "g" => KernelKind::G,
            "phi" | "Phi" => KernelKind::Phi,
            _ => return None,
        })
    }
}

/// One kernel evaluation with a conservative truncation-error bound.
#[derive(Debug, Clone, Serialize)]
pub struct KernelValue {
    pub kind: KernelKind,
    pub n: Option<u32>,
    pub tau: f64,
    pub re: f64,
    pub im: f64,
    /// Bound on the truncation error of the evaluation scheme.
    pub est_abs_err: f64,
}

/// Evaluate a kernel by kind.  `n` is required for the n-indexed kernels.
pub fn eval_kernel(kind: KernelKind, n: Option<u32>, tau: f64) -> Result<KernelValue> {
    if !tau.is_finite() || tau.abs() > PI + 1e-12 {
        return Err(Error::InvalidInput {
            what: "kernel tau",
            message: format!("tau = {tau} outside [-pi, pi]"),
        });
    }
    let need_n = kind.needs_n();
    let n_val = match (need_n, n) {
        (true, Some(v)) if v >= 1 => Some(v),
        (true, _) => {
            return Err(Error::InvalidInput {
                what: "kernel n",
                message: format!("kernel {kind:?} requires n >= 1"),
            })
        }
        (false, _) => None,
    };
    let u_tail_err = 4.0 / (U_TRUNCATION as f64 * U_TRUNCATION as f64) + 2e-11;
    let (value, est) = match kind {
        KernelKind::S => (kernel_s(n_val.unwrap(), tau), 1e-13),
        KernelKind::U => (kernel_u(tau), u_tail_err),
        KernelKind::V => (kernel_v(tau), 1e-10),
        KernelKind::Vn => (kernel_vn(n_val.unwrap(), tau), 1e-10),
        KernelKind::W => (kernel_w(n_val.unwrap(), tau), 1e-10),
        KernelKind::A => (kernel_a(tau), 1e-14),
        KernelKind::F => {
            let f = kernel_f(tau);
            (f, (f + 1.0).norm() * (u_tail_err + 1e-10))
        }
        KernelKind::G => {
            let g = kernel_g(tau);
            let scale = if tau.abs() < 1e-8 { 1e-8 } else { tau.abs() };
            (g, (g * scale + 1.0).norm() * (u_tail_err + 1e-10) / scale)
        }
        KernelKind::Phi => (
            phi_n(n_val.unwrap(), tau),
            1e-16 * n_val.unwrap() as f64,
        ),
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Numerical {
            what: "kernel evaluation",
            message: format!("{kind:?}({tau}) produced a non-finite value"),
        });
    }
    Ok(KernelValue {
        kind,
        n: n_val,
        tau,
        re: value.re,
        im: value.im,
        est_abs_err: est,
    })
}
