//! Monte Carlo error rates of the block-Markov scheme at desk-scale block lengths.
//!
//! Rates are 1% of the target so the codebooks fit in memory, and the channel
//! keeps every joint symbol probability away from zero so that robust
//! typicality is attainable at a few hundred channel uses.

use bcfb::channel::make_bsbc;
use bcfb::region::example1_aux;
use bcfb::sim::{estimate_error, rates_from_aux, write_series_csv, SchemeParams};

fn main() -> bcfb::Result<()> {
    let rfb = 0.01;
    let ch = make_bsbc(0.1, 0.05)?;
    let aux = example1_aux(&ch, 0.3, 0.45)?;
    let rates = rates_from_aux(&ch, &aux, rfb, 0.01)?;
    println!(
        "R1 = {:.5}, R2 = {:.5}, bin rate = {:.5}, compression rate = {:.5}",
        rates.r1, rates.r2, rates.r_tilde, rates.r_hat
    );

    let mut series = Vec::new();
    for n in [250, 500, 1000] {
        let p = SchemeParams::new(rates, n, 2, 1.0, 11, rfb)?;
        let s = p.sizes()?;
        let e = estimate_error(&ch, &aux, &p, 100)?;
        println!(
            "n = {n:4}: |M1| {} |M2| {} bins {} compressions {}; p_err {:.2} [{:.2}, {:.2}]; feedback {} of {:.1} bits",
            s.m1, s.m2, s.bins, s.comp, e.p_err, e.ci_low, e.ci_high, e.max_feedback_bits, e.feedback_budget
        );
        series.push(e);
    }
    write_series_csv(&series, std::io::stdout())?;
    Ok(())
}
