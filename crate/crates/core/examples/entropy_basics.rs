//! Entropies and (conditional) mutual information of a small joint pmf.
//!
//! Run with `cargo run --example entropy_basics`.

use bcfb::prob::{binary_entropy, star, Axis, FinitePmf, JointPmf, Kernel};

fn main() -> bcfb::Result<()> {
    // X uniform, Y = X through BSC(0.1), Z = Y through BSC(0.2)
    let x = FinitePmf::uniform(2)?.into_joint("X");
    let bsc = |from: &str, to: &str, p: f64| {
        Kernel::from_rows(vec![Axis::binary(from)], vec![Axis::binary(to)], vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    };
    let j = x.compose(&bsc("X", "Y", 0.1)?)?.compose(&bsc("Y", "Z", 0.2)?)?;

    println!("H(X)       = {:.6}", j.entropy(&["X"])?);
    println!("H(X,Y,Z)   = {:.6}", j.entropy(&["X", "Y", "Z"])?);
    println!("I(X;Y)     = {:.6}  (1 - h(0.1) = {:.6})", j.mutual_info(&["X"], &["Y"])?, 1.0 - binary_entropy(0.1));
    println!("I(X;Z)     = {:.6}  (1 - h(0.1*0.2) = {:.6})", j.mutual_info(&["X"], &["Z"])?, 1.0 - binary_entropy(star(0.1, 0.2)?));
    println!("I(X;Z|Y)   = {:.2e}  (Markov chain)", j.cond_mutual_info(&["X"], &["Z"], &["Y"])?);

    let skew = JointPmf::new(vec![Axis::binary("A"), Axis::indexed("B", 3)], vec![0.3, 0.1, 0.1, 0.0, 0.2, 0.3])?;
    println!("H(B|A)     = {:.6}", skew.cond_entropy(&["B"], &["A"])?);
    println!("I(A;B)     = {:.6}", skew.mutual_info(&["A"], &["B"])?);
    Ok(())
}
