//! Machine tapes: complexity queries, a universal machine by adjunction and
//! the even-length re-encoding.

use omega_sim::bits::bits;
use omega_sim::machines::{adjoin_universal, footnote_pad, DescriptionEvent, MachineTape};

fn tape(events: &[(u64, &str, &str)]) -> MachineTape {
    MachineTape::from_prefix_free(events.iter().map(|&(s, p, o)| DescriptionEvent::new(s, bits(p), bits(o)))).unwrap()
}

fn main() {
    let m0 = tape(&[(1, "0", "11"), (2, "10", "0"), (4, "110", "11")]);
    let m1 = tape(&[(1, "1", "0"), (3, "01", "111")]);
    println!("Omega_M0 = {}, K_M0(11) = {:?}", m0.omega(), m0.complexity(&bits("11")));
    println!("K_M0(0) at stage 1 = {:?}, at stage 2 = {:?}", m0.complexity_at(&bits("0"), 1), m0.complexity_at(&bits("0"), 2));

    let u = adjoin_universal(&[m0.clone(), m1.clone()]);
    for e in u.events() {
        println!("U: stage {} {} -> {}", e.stage, e.program, e.output);
    }
    for out in ["0", "11", "111"] {
        println!("K_U({out}) = {:?}", u.complexity(&bits(out)));
    }

    let padded = footnote_pad(&m0);
    for e in padded.events() {
        println!("padded: {} -> {}", e.program, e.output);
    }
    assert_eq!(padded.omega(), m0.omega());

    let mut t = MachineTape::new();
    t.push_strict(DescriptionEvent::new(1, bits("01"), bits(""))).unwrap();
    let err = t.push_strict(DescriptionEvent::new(2, bits("011"), bits("1"))).unwrap_err();
    println!("rejected: {err}");
}
