// Scratch probe: rho_TH on the exact CSL spectrum, and the reworked HPC.
use cslfa::kgrid::{
    beta_min, ellipse_rho_estimate, exact_csl_spectrum, fit_spectrum_ellipse, hpc_min_beta,
    CyclePlan, Smoother,
};
use cslfa::symbols::Dimension;

fn main() {
    println!("--- rho_TH on the exact CSL spectrum, 2D N=32 sigma=-1000 ---");
    for beta in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let spectrum = exact_csl_spectrum(Dimension::Two, 32, -1000.0, beta);
        match fit_spectrum_ellipse(&spectrum) {
            Ok(e) => {
                let rho = ellipse_rho_estimate(&spectrum, &e).unwrap();
                println!("beta={beta}: rho_TH = {rho:.4}  (bx={:.4}, by={:.4}, c={:.4})", e.semi_real, e.semi_imag, e.center);
            }
            Err(err) => println!("beta={beta}: fit failed: {err}"),
        }
    }

    let plan = CyclePlan {
        dimension: Dimension::Two,
        levels: 2,
        pre_smooth: 1,
        post_smooth: 0,
        smoother: Smoother::Jacobi { omega: 2.0 / 3.0 },
        finest_n: 32,
    };
    println!("--- hpc_min_beta vs beta_min, 2D two-grid N=32 ---");
    for sigma in [-300.0, -1000.0, -2000.0] {
        let bm = beta_min(&plan, sigma).unwrap();
        for mu in [1u32, 3, 5, 10] {
            let h = hpc_min_beta(&plan, sigma, mu).unwrap();
            let ok = h <= bm;
            println!("sigma={sigma} mu={mu}: hpc={h:.4} vs beta_min={bm:.4}  (hpc<=beta_min: {ok})");
        }
    }
}
