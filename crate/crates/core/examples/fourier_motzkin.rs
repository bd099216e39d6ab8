//! Eliminating a variable from a linear system, and the scheme's bin rate.

use bcfb::channel::make_bsbc;
use bcfb::fm::{derive_thm1_constraints, eliminate, remove_redundant, LinSys, Row, Thm1Values};
use bcfb::region::example1_aux;

fn main() -> bcfb::Result<()> {
    // x + y <= 4, x - y <= 1, -x <= 0, -y <= -1
    let sys = LinSys::new(
        vec!["x".into(), "y".into()],
        vec![
            Row::new(vec![1.0, 1.0], 4.0),
            Row::new(vec![1.0, -1.0], 1.0),
            Row::new(vec![-1.0, 0.0], 0.0),
            Row::new(vec![0.0, -1.0], -1.0),
        ],
    )?;
    let proj = eliminate(&sys, "y")?;
    println!("system:\n{sys}\nprojected onto x:\n{proj}\nreduced:\n{}", remove_redundant(&proj));

    let ch = make_bsbc(0.2, 0.1)?;
    let m = example1_aux(&ch, 0.15, 0.3)?.measures(&ch)?;
    let v = Thm1Values {
        i_u_y1: m.i_u_y1,
        i_u_y2: m.i_u_y2,
        i_x_yty2_given_u: m.i_x_yty2_given_u,
        i_yt_y1_given_uy2: m.i_yt_y1_given_uy2,
    };
    let d = derive_thm1_constraints(&v, 0.85)?;
    println!("scheme constraints:\n{}\nwithout the bin rate:\n{}\nfeasible: {}", d.full, d.reduced, d.feasible);
    Ok(())
}
