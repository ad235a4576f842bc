//! Jacobi elliptic functions over one real period.

use focal_renorm::elliptic::{complete_k, jacobi};

fn main() -> focal_renorm::Result<()> {
    let m = 0.7;
    let k = complete_k(m)?;
    println!("K({m}) = {k:.15}");
    println!("{:>10} {:>12} {:>12} {:>12}", "u/K", "sn", "cn", "dn");
    for i in 0..=8 {
        let u = k * i as f64 / 2.0;
        let j = jacobi(u, m)?;
        println!("{:>10.2} {:>12.8} {:>12.8} {:>12.8}", u / k, j.sn, j.cn, j.dn);
    }
    Ok(())
}
