//! Exact dyadic arithmetic and stage-indexed approximations.
//!
//! Run with `cargo run --example dyadic_streams`.

use omega_sim::dyadic::{dy, Dyadic};
use omega_sim::streams::{read_script, solovay_domination_check, write_script, AnyStream, LeftCeStream, RightCeStream};

fn main() {
    let a = dy(3, 2); // 3/4
    let b = dy(5, 4); // 5/16
    println!("{a} + {b} = {}", &a + &b);
    println!("{a} * {b} = {}", &a * &b);
    println!("floor_log2({b}) = {:?}", b.floor_log2());

    // beta_s = 13/16 - 2^-(s+2), and alpha = 2 beta - 1 / 2, which grows twice as fast.
    let beta = LeftCeStream::default_beta(12);
    let alpha = beta.affine(&Dyadic::from_int(2), &dy(-1, 1)).unwrap();
    for s in [0, 1, 5, 12, 40] {
        // Stages past the horizon repeat the last value.
        println!("s = {s:>2}: beta = {}, alpha = {}", beta.at(s), alpha.at(s));
    }
    println!("alpha <=_S beta with n = 2: {:?}", solovay_domination_check(&alpha, &beta, 2, 12));
    println!("alpha <=_S beta with n = 1: {:?}", solovay_domination_check(&alpha, &beta, 1, 12));

    // A right-c.e. stream written as a script and read back.
    let theta = RightCeStream::scripted(&[(0, dy(7, 3)), (4, dy(5, 3)), (9, dy(9, 4))]).unwrap();
    let mut buf = Vec::new();
    write_script(&mut buf, &AnyStream::Right(theta.clone())).unwrap();
    print!("{}", String::from_utf8_lossy(&buf));
    let back = read_script(buf.as_slice()).unwrap().into_right().unwrap();
    assert_eq!(back, theta);

    // Going the wrong way is refused.
    let err = LeftCeStream::from_values(vec![dy(1, 1), dy(1, 2)]).unwrap_err();
    println!("rejected: {err}");
}
