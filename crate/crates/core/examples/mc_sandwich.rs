//! Achievable rate of a ring constellation sits between the bounds.

use peakcap::bounds::evaluate;
use peakcap::channel::{random_channel, ChannelModel};
use peakcap::oracle::{default_constellation, mc_mutual_information};

fn main() -> peakcap::Result<()> {
    let model = ChannelModel::per_antenna(&random_channel(2, 5)?, 1.0, 1.0)?;
    println!("snr_db  lower   estimate (se)       upper");
    for snr in [-5.0, 5.0, 15.0, 25.0] {
        let m = model.with_snr_db(snr)?;
        let c = default_constellation(&m)?;
        let est = mc_mutual_information(&m, &c, 50_000, 1)?;
        let r = evaluate(&m)?;
        println!(
            "{snr:6}  {:.4}  {:.4} ({:.4})  {:.4}   [{} points]",
            r.epi.value_bits,
            est.value_bits,
            est.std_error_bits,
            r.compound.value_bits,
            c.len()
        );
    }
    Ok(())
}
