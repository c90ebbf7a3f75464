//! Quadrature building blocks: fixed Gauss-Legendre rules and an adaptive
//! Gauss-Kronrod integrator for complex-valued integrands on real intervals.

use num_complex::Complex64;

use crate::kahan::KahanComplex;

/// 5-point Gauss-Legendre abscissae on `[0, 1]`.
pub const GL5_X: [f64; 5] = [
    0.046_910_077_030_668_004,
    0.230_765_344_947_158_45,
    0.5,
    0.769_234_655_052_841_5,
    0.953_089_922_969_332,
];

/// 5-point Gauss-Legendre weights on `[0, 1]` (sum to 1).
pub const GL5_W: [f64; 5] = [
    0.118_463_442_528_094_54,
    0.239_314_335_249_683_24,
    0.284_444_444_444_444_44,
    0.239_314_335_249_683_24,
    0.118_463_442_528_094_54,
];

/// Composite 5-point Gauss-Legendre rule with `panels` equal panels.
pub fn composite_gl5<F>(f: F, a: f64, b: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let w = (b - a) / panels as f64;
    let mut acc = KahanComplex::new();
    for p in 0..panels {
        let lo = a + w * p as f64;
        for g in 0..5 {
            acc.add(f(lo + GL5_X[g] * w) * (GL5_W[g] * w));
        }
    }
    acc.value()
}

// 15-point Kronrod / 7-point Gauss pair (standard QUADPACK qk15 constants).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

fn qk15_complex<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = (kronrod - gauss).norm() * half.abs();
    (value, err)
}

/// Adaptive Gauss-Kronrod integration of a complex-valued integrand.
///
/// Returns the integral and an error estimate.  Bisects until the local
/// error estimate is below the interval's share of `tol` or `max_depth`
/// is reached.
pub fn adaptive_gk15<F>(f: &F, a: f64, b: f64, tol: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    fn recurse<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
    ) -> (Complex64, f64) {
        let (v, e) = qk15_complex(f, a, b);
        if e <= tol || depth >= 40 {
            return (v, e);
        }
        let mid = 0.5 * (a + b);
        let (v1, e1) = recurse(f, a, mid, 0.5 * tol, depth + 1);
        let (v2, e2) = recurse(f, mid, b, 0.5 * tol, depth + 1);
        (v1 + v2, e1 + e2)
    }
    recurse(f, a, b, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl5_integrates_polynomials_exactly() {
        // degree 9 is the highest exactly integrated by 5-point GL
        let f = |x: f64| Complex64::new(x.powi(9), x.powi(4));
        let v = composite_gl5(f, 0.0, 1.0, 1);
        assert!((v.re - 0.1).abs() < 1e-15);
        assert!((v.im - 0.2).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        // int_0^1 e^{50 i x} dx = (e^{50i} - 1)/(50 i)
        let f = |x: f64| Complex64::new(0.0, 50.0 * x).exp();
        let (v, e) = adaptive_gk15(&f, 0.0, 1.0, 1e-12);
        let exact = (Complex64::new(0.0, 50.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        assert!((v - exact).norm() < 1e-11, "err={e}");
    }
}
