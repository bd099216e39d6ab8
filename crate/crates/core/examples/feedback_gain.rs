//! Feedback gain on asymmetric binary symmetric broadcast channels.
//!
//! Writes `r1,r2` frontiers for each `p1` into `target/feedback_gain/`.

use std::fs::{self, File};

use bcfb::region::{gain_curve, SearchConfig};

fn main() -> bcfb::Result<()> {
    let (p2, rfb) = (0.1, 0.85);
    let out = std::path::Path::new("target/feedback_gain");
    fs::create_dir_all(out)?;
    let cfg = SearchConfig::default();
    for p1 in [0.2, 0.25, 0.3] {
        let c = gain_curve(p1, p2, rfb, 100, &cfg)?;
        c.nofb.write_csv(File::create(out.join(format!("nofb_{p1}.csv")))?)?;
        c.fb.write_csv(File::create(out.join(format!("fb_{p1}.csv")))?)?;
        println!(
            "p1 = {p1}: no-feedback corner ({:.4}, {:.4}); largest gain {:.5} at R1 = {:.4}",
            c.nofb.max_r1(),
            c.nofb.max_r2(),
            c.gain,
            c.gain_at
        );
    }
    println!("frontiers written to {}", out.display());
    Ok(())
}
