//! Strict improvement of a no-feedback point by mixing in a relayed compression.

use bcfb::channel::{make_bebc, make_bsbc};
use bcfb::region::{find_dominating_enh, theorem3_construct, InputPmf};

fn main() -> bcfb::Result<()> {
    let family: Vec<InputPmf> =
        (0..=1000).map(|k| InputPmf::superposition(0.5 * k as f64 / 1000.0)).collect::<bcfb::Result<_>>()?;
    for (name, ch) in [("BS-BC(0.2, 0.1)", make_bsbc(0.2, 0.1)?), ("BE-BC(0.3, 0.1)", make_bebc(0.3, 0.1)?)] {
        println!("{name}");
        let base = InputPmf::superposition(0.15)?;
        let enh = find_dominating_enh(&ch, &base, &family)?;
        for rfb in [0.01, 0.05, 0.5] {
            let r = theorem3_construct(&ch, &base, &enh, rfb)?;
            println!(
                "  rfb {rfb:<5} ({:.5}, {:.5}) -> ({:.5}, {:.5})  gamma {:.5}  compression {:.5} <= {:.5}  feasible {}",
                r.base.r1,
                r.base.r2,
                r.improved.r1,
                r.improved.r2,
                r.gamma,
                r.compression,
                rfb.min(r.gap),
                r.feasible
            );
        }
    }
    Ok(())
}
