// Scratch probe: geometry of the exact CSL spectrum vs the ellipse family.
use cslfa::kgrid::exact_csl_spectrum;
use cslfa::symbols::Dimension;

fn main() {
    for beta in [0.2, 0.3, 0.5] {
        let s = exact_csl_spectrum(Dimension::Two, 32, -1000.0, beta);
        let min_re = s.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let max_re = s.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let max_im = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let c = 0.5 * (min_re + max_re);
        println!("beta={beta}: Re in [{min_re:.5}, {max_re:.5}], max|Im|={max_im:.5}, c={c:.5}");
        for by in [max_im * 1.001, 0.6, 0.8, 1.0, 2.0, 5.0] {
            let bx = s
                .iter()
                .map(|z| {
                    let x = (z.re - c).abs();
                    let t = 1.0 - (z.im / by).powi(2);
                    if t <= 0.0 { f64::INFINITY } else { x / t.sqrt() }
                })
                .fold(0.0, f64::max);
            println!("  by={by:.3}: bx={bx:.5} (valid: {})", bx < c.abs());
        }
    }
}
