//! Prefix-free code allocation from a stream of length requests, and a
//! machine whose halting measure tracks a left-c.e. real exactly.

use omega_sim::dyadic::dy;
use omega_sim::kraft_chaitin::{kc_allocate, real_to_machine, Request};
use omega_sim::streams::LeftCeStream;

fn main() {
    let requests = [3, 1, 4, 4, 2, 5, 1].iter().enumerate().map(|(s, &n)| (s as u64, Request::of_length(n)));
    let alloc = kc_allocate(requests);
    for (i, p) in alloc.programs.iter().enumerate() {
        match p {
            Some(p) => println!("request {i}: {p}"),
            None => println!("request {i}: refused"),
        }
    }
    for (i, e) in &alloc.rejected {
        println!("  #{i}: {e}");
    }
    println!("granted measure {}", alloc.tape.omega());

    let alpha = LeftCeStream::scripted(&[(0, dy(0, 0)), (2, dy(1, 2)), (3, dy(5, 4)), (7, dy(27, 5))]).unwrap();
    let m = real_to_machine(&alpha, 8).unwrap();
    for e in m.events() {
        println!("stage {}: program {}", e.stage, e.program);
    }
    for s in 0..=8 {
        assert_eq!(m.omega_at(s), *alpha.at(s));
    }
    println!("Omega_M[s] = alpha_s at every stage; final {}", m.omega());
}
