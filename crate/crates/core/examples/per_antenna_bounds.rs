//! Every bound for a random per-antenna channel, with the per-stream terms.

use peakcap::bounds::evaluate;
use peakcap::channel::{random_channel, ChannelModel};

fn main() -> peakcap::Result<()> {
    let model = ChannelModel::per_antenna(&random_channel(3, 42)?, 1.0, 1.0)?;
    for snr in [0.0, 20.0, 40.0] {
        let r = evaluate(&model.with_snr_db(snr)?)?;
        let pa = r.per_antenna.as_ref().expect("per-antenna region");
        println!("{snr} dB");
        println!("  entropy-power lower  {:.4}", r.epi.value_bits);
        println!("  sub-space sum upper  {:.4}", r.subspace.value_bits);
        println!("  water-filling upper  {:.4}", r.waterfilling.value_bits);
        println!("  per-antenna upper    {:.4}", pa.value_bits);
        if let Some(d) = &pa.detail {
            println!("    streams {:?} + correction {:.4}", d.subspace_bits, d.correction_bits);
        }
        println!("  compound upper       {:.4}, gap {:.4}", r.compound.value_bits, r.gap_bits());
    }
    Ok(())
}
