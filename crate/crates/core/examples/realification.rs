//! Complex channel to its real form, and the paired singular values.

use num_complex::Complex64;
use peakcap::linalg::{paired_singular_values, realify, svd, ComplexMatrix};

fn main() -> peakcap::Result<()> {
    let hc = ComplexMatrix::from_rows(&[
        vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 0.2)],
        vec![Complex64::new(0.1, -0.7), Complex64::new(0.8, 0.0)],
    ])?;
    let h = realify(&hc)?;
    println!("real form (4x4):");
    for row in h.to_rows() {
        println!("  {}", row.iter().map(|v| format!("{v:7.3}")).collect::<Vec<_>>().join(" "));
    }
    println!("singular values: {:?}", svd(&h)?.singular_values);
    println!("one per pair:    {:?}", paired_singular_values(&h)?);
    let det = hc.as_dmatrix().clone().determinant();
    println!(
        "det of real form {:.6} = |det|^2 {:.6}",
        h.as_dmatrix().clone().determinant(),
        det.norm_sqr()
    );
    Ok(())
}
