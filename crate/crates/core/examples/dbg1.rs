use dickman_core::*;
fn main() {
    // U at pi
    let u = kernels::kernel_u(std::f64::consts::PI);
    println!("U(pi) = {u}  im - pi = {:e}", u.im - std::f64::consts::PI);
    println!("exp(U(pi)) = {}  want {}", u.exp(), -2.0*(EULER_GAMMA).exp());
    // G near zero
    println!("G(1e-9) = {}", kernels::kernel_g(1e-9));
    println!("G(1e-7) = {}", kernels::kernel_g(1e-7));
    println!("G(1e-5) = {}", kernels::kernel_g(1e-5));
    println!("G(1e-3) = {}", kernels::kernel_g(1e-3));
    // integral equation residual
    let t = DickmanTable::shared();
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..800 {
        let u = 1.0 + (t.u_max() - 1.0) * (i as f64 + 0.5) / 800.0;
        let lhs = u * t.rho(u).unwrap();
        let rhs = t.rho_integral(u) - t.rho_integral(u - 1.0);
        let res = (lhs - rhs).abs() / rhs.max(1e-300);
        if res > worst.0 { worst = (res, u); }
    }
    println!("integral-eq worst rel {} at u={}", worst.0, worst.1);
    // poisson mean
    let p = poisson::yn_pmf(4, 0).unwrap();
    println!("yn(4) mean = {} deficit = {:e} support {}", p.mean(), p.mass_deficit(), p.support_end());
    let p = poisson::yn_pmf(25, 0).unwrap();
    println!("yn(25) mean = {} deficit = {:e} support {}", p.mean(), p.mass_deficit(), p.support_end());
}
