//! No-feedback superposition region and the enhanced-channel outer region.

use bcfb::channel::make_bsbc;
use bcfb::region::{eval_enh, eval_nofb, includes, SearchConfig};

fn main() -> bcfb::Result<()> {
    let ch = make_bsbc(0.25, 0.1)?;
    let cfg = SearchConfig { seed: 3, ..Default::default() };
    let nofb = eval_nofb(&ch, &cfg)?;
    let enh = eval_enh(&ch, &cfg)?;

    println!("no feedback: {} points, max R1 {:.4}, max R2 {:.4}", nofb.len(), nofb.max_r1(), nofb.max_r2());
    println!("enhanced:    {} points, max R1 {:.4}, max R2 {:.4}", enh.len(), enh.max_r1(), enh.max_r2());
    println!("enhanced contains no-feedback: {}", includes(&enh, &nofb, 1e-9)?);

    println!("\n   R1      nofb R2   enh R2");
    for k in 0..=8 {
        let r1 = nofb.max_r1() * k as f64 / 8.0;
        let h0 = nofb.height_at(r1)?.unwrap_or(0.0);
        let h1 = enh.height_at(r1)?.unwrap_or(0.0);
        println!("{r1:8.4} {h0:9.4} {h1:9.4}");
    }
    Ok(())
}
