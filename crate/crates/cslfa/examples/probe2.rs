// Scratch probe: which (nu1, nu2, omega, k) reproduces the published
// beta_min anchors?
use cslfa::kgrid::{beta_min, CyclePlan, Smoother};
use cslfa::symbols::Dimension;

fn main() {
    let plan = |levels, nu1, nu2, omega, n| CyclePlan {
        dimension: Dimension::Two,
        levels,
        pre_smooth: nu1,
        post_smooth: nu2,
        smoother: Smoother::Jacobi { omega },
        finest_n: n,
    };

    println!("--- target 0.42: 2D 4-grid N=32 sigma=-1000 ---");
    for (nu1, nu2) in [(1, 0), (0, 1), (1, 1), (2, 0)] {
        let b = beta_min(&plan(4, nu1, nu2, 2.0 / 3.0, 32), -1000.0).unwrap();
        println!("nu=({nu1},{nu2}) omega=2/3: beta_min = {b:.4}");
    }
    for omega in [0.5, 0.8, 1.0] {
        let b = beta_min(&plan(4, 1, 0, omega, 32), -1000.0).unwrap();
        println!("nu=(1,0) omega={omega}: beta_min = {b:.4}");
    }
    for k in 2..=3 {
        let b = beta_min(&plan(k, 1, 0, 2.0 / 3.0, 32), -1000.0).unwrap();
        println!("k={k} nu=(1,0) omega=2/3: beta_min = {b:.4}");
    }

    println!("--- target 0.20: 2D 4-grid N=64 sigma=-1600 ---");
    for (nu1, nu2) in [(1, 0), (1, 1), (2, 0)] {
        let b = beta_min(&plan(4, nu1, nu2, 2.0 / 3.0, 64), -1600.0).unwrap();
        println!("nu=({nu1},{nu2}) omega=2/3: beta_min = {b:.4}");
    }

    println!("--- 2D 4-grid N=32 nu=1 curve shape ---");
    for sigma in [-200.0, -500.0, -1000.0, -1500.0, -2000.0, -4000.0] {
        let b = beta_min(&plan(4, 1, 0, 2.0 / 3.0, 32), sigma).unwrap();
        println!("sigma={sigma}: beta_min = {b:.4}");
    }
}
