//! The water-filling bound tends to zero as the SNR drops, while the
//! sub-space sum keeps a constant offset from the log-det correction.

use peakcap::bounds::evaluate;
use peakcap::channel::{random_channel, unit_spectral_norm, ChannelModel};

fn main() -> peakcap::Result<()> {
    let hc = unit_spectral_norm(&random_channel(2, 11)?)?;
    let model = ChannelModel::per_antenna(&hc, 1.0, 1.0)?;
    println!("snr_db  water-filling  sub-space  correction");
    for snr in [0.0, -10.0, -20.0, -30.0, -40.0] {
        let r = evaluate(&model.with_snr_db(snr)?)?;
        println!(
            "{snr:6}  {:13.6}  {:9.6}  {:10.6}",
            r.waterfilling.value_bits, r.subspace.value_bits, r.correction_bits
        );
    }
    Ok(())
}
