//! Pairwise inclusions between the no-feedback, feedback and enhanced regions.

use bcfb::channel::make_bsbc;
use bcfb::region::{
    eval_bsbc_example, eval_enh, eval_nofb, half_grid, includes, search_corollary1, search_thm1, search_thm2,
    RateRegion, SearchConfig,
};

fn main() -> bcfb::Result<()> {
    let (p1, p2, rfb) = (0.2, 0.1, 0.85);
    let ch = make_bsbc(p1, p2)?;
    let cfg = SearchConfig { samples: 1000, ..Default::default() };
    let g = half_grid(60);
    let regions: Vec<(&str, RateRegion)> = vec![
        ("nofb", eval_nofb(&ch, &cfg)?),
        ("thm1", search_thm1(&ch, rfb, &cfg)?),
        ("cor1", search_corollary1(&ch, rfb, &cfg)?),
        ("thm2", search_thm2(&ch, rfb, &cfg)?),
        ("example", eval_bsbc_example(p1, p2, rfb, &g, &g)?),
        ("enh", eval_enh(&ch, &cfg)?),
    ];
    print!("{:>9}", "outer\\inner");
    for (name, _) in &regions {
        print!("{name:>9}");
    }
    println!();
    for (outer, ro) in &regions {
        print!("{outer:>11}");
        for (_, ri) in &regions {
            print!("{:>9}", if includes(ro, ri, 2e-3)? { "yes" } else { "-" });
        }
        println!();
    }
    Ok(())
}
