// Scratch probe: resonance-aligned wavenumbers for the experimental check.
use cslfa::kgrid::{beta_min, CyclePlan, Smoother};
use cslfa::multigrid::{asymptotic_factor, experimental_beta_min, CycleSpec, Depth, Multigrid};
use cslfa::symbols::{Dimension, Shift};

fn main() {
    let plan2 = CyclePlan {
        dimension: Dimension::One,
        levels: 2,
        pre_smooth: 1,
        post_smooth: 0,
        smoother: Smoother::Jacobi { omega: 2.0 / 3.0 },
        finest_n: 64,
    };
    let spec2 = CycleSpec::v_cycle(Depth::Levels(2), 2.0 / 3.0);
    // sigma = -600: the two-grid resonance frequency asin(sqrt(600/4096))
    // coincides with the Dirichlet mode 8*pi/64.
    for sigma in [-600.0, -550.0, -650.0] {
        let lfa = beta_min(&plan2, sigma).unwrap();
        let exp = experimental_beta_min(Dimension::One, 64, &spec2, sigma, 150, 42).unwrap();
        println!("sigma={sigma}: LFA={lfa:.4}, experimental={exp:.4}, diff={:.4}", (lfa - exp).abs());
    }
    // Divergence check at -600 just below the threshold:
    let lfa600 = beta_min(&plan2, -600.0).unwrap();
    for beta in [0.5 * lfa600, lfa600 + 0.01] {
        let mg = Multigrid::new(Dimension::One, 64, Shift::new(-600.0, beta), spec2).unwrap();
        let f = asymptotic_factor(&mg, 200, 11).unwrap();
        println!("sigma=-600 beta={beta:.4}: factor={f:.4}");
    }
}
