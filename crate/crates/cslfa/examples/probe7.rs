// Scratch probe: full iteration-count curves for the two-grid GMRES runs.
use cslfa::krylov::{solve, CslPreconditioner, KrylovSpec};
use cslfa::multigrid::{CycleSpec, Depth, GridFunction, HelmholtzOperator};
use cslfa::kgrid::Smoother;
use cslfa::symbols::{Dimension, Shift};
use num_complex::Complex64;

fn main() {
    let n = 32;
    let op = HelmholtzOperator::new(Dimension::Two, n, Shift::unshifted(-1000.0));
    let rhs = GridFunction::constant(Dimension::Two, n, Complex64::new(1.0, 0.0));

    for (nu1, nu2) in [(1u32, 0u32), (1, 1)] {
        let cycle = CycleSpec {
            depth: Depth::Levels(2),
            pre_smooth: nu1,
            post_smooth: nu2,
            smoother: Smoother::Jacobi { omega: 2.0 / 3.0 },
        };
        println!("=== V({nu1},{nu2}) two-grid ===");
        for mu in [1u32, 3] {
            print!("mu={mu}: ");
            for i in 8..=24 {
                let beta = 0.02 * i as f64;
                let spec = KrylovSpec::gmres().with_preconditioner(CslPreconditioner {
                    beta,
                    mu,
                    cycle,
                });
                let (_, report) = solve(&op, &rhs, &spec).unwrap();
                print!("{:.2}:{} ", beta, report.iterations);
            }
            println!();
        }
    }
}
