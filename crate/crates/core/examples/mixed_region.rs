//! A region mixing a ball and a box, with radii normalized before bounding.

use peakcap::bounds::{evaluate, subspace_upper_bound, GaussianPower};
use peakcap::channel::{ChannelModel, ConstraintRegion, SubRegion};
use peakcap::linalg::RealMatrix;

fn main() -> peakcap::Result<()> {
    let region = ConstraintRegion::new(vec![SubRegion::ball(2, 1.0)?, SubRegion::cube(1, 2.0)?])?;
    let h = RealMatrix::from_rows(&[
        vec![1.0, 0.3, 0.0],
        vec![0.2, 0.9, 0.1],
        vec![0.0, 0.4, 1.2],
    ])?;
    let model = ChannelModel::new(h, 0.05, region)?;
    let normalized = model.normalize_radii();
    println!("radii {:?} -> {:?}", model.region().radii(), normalized.region().radii());
    let r = evaluate(&model)?;
    println!("per-antenna bound applies: {}", r.per_antenna.is_some());
    println!("lower {:.4}, compound upper {:.4}", r.epi.value_bits, r.compound.value_bits);
    let t1 = subspace_upper_bound(&model, &GaussianPower)?;
    println!("sub-space terms {:?}", t1.detail.map(|d| d.subspace_bits));
    Ok(())
}
