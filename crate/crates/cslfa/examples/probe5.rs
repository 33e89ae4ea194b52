// Scratch probe: fine 1D two-grid curve near the expected -4096 minimum.
use cslfa::kgrid::{beta_min, CyclePlan, Smoother};
use cslfa::symbols::Dimension;

fn main() {
    let plan = CyclePlan {
        dimension: Dimension::One,
        levels: 2,
        pre_smooth: 1,
        post_smooth: 0,
        smoother: Smoother::Jacobi { omega: 2.0 / 3.0 },
        finest_n: 64,
    };
    for i in 0..23 {
        let sigma = -3200.0 - 150.0 * i as f64;
        let b = beta_min(&plan, sigma).unwrap();
        println!("sigma={sigma:.0}: beta_min={b:.4}");
    }
}
