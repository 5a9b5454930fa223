//! Water-filling over a set of noise variances, checked against bisection.

use peakcap::bounds::waterfill;
use peakcap::oracle::waterfill_bisection_oracle;

fn main() -> peakcap::Result<()> {
    let noise = [0.2, 0.5, 1.0, 3.0];
    for budget in [0.1, 1.0, 10.0] {
        let a = waterfill(&noise, budget)?;
        let b = waterfill_bisection_oracle(&noise, budget)?;
        let diff = a
            .powers
            .iter()
            .zip(&b.powers)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        println!(
            "budget {budget:5}: level {:.4}, powers {:?}, KKT {}, |exact - bisection| {diff:.1e}",
            a.water_level,
            a.powers.iter().map(|p| (p * 1e4).round() / 1e4).collect::<Vec<_>>(),
            a.satisfies_kkt(&noise, 1e-10)
        );
    }
    Ok(())
}
