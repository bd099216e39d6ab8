//! Degradedness and less-noisy checks on standard broadcast channels.

use bcfb::channel::{check_less_noisy, enhance, is_physically_degraded, make_bebc, make_bsbc, make_cascade};

fn main() -> bcfb::Result<()> {
    let channels = [
        ("BS-BC(0.2, 0.1)", make_bsbc(0.2, 0.1)?),
        ("BS-BC(0.1, 0.2)", make_bsbc(0.1, 0.2)?),
        ("BE-BC(0.3, 0.1)", make_bebc(0.3, 0.1)?),
        (
            "cascade BSC(0.1) -> BSC(0.125)",
            make_cascade(&[vec![0.9, 0.1], vec![0.1, 0.9]], &[vec![0.875, 0.125], vec![0.125, 0.875]])?,
        ),
    ];
    for (name, ch) in &channels {
        let r = check_less_noisy(ch, 20, 5000, 1)?;
        println!("{name}");
        println!("  physically degraded:          {}", is_physically_degraded(ch));
        println!("  enhanced channel degraded:    {}", is_physically_degraded(&enhance(ch)));
        println!("  Y2 less noisy than Y1:        {:?} (strict: {})", r.verdict, r.strict);
        println!("  largest I(U;Y1) - I(U;Y2):    {:.6} over {} input laws", r.max_deficit, r.points_checked);
    }
    Ok(())
}
