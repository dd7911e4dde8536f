//! Building `V` from `U` so that `Omega_U - Omega_V` is exactly accounted
//! for, and averaging the two into `W`.

use omega_sim::bits::bits;
use omega_sim::machines::{DescriptionEvent, MachineTape};
use omega_sim::omega_diff::{combine_w, ledger_check, transform_v, verify_omega_diff, Expansion, HSpec};

fn tape(events: &[(u64, &str, &str)]) -> MachineTape {
    MachineTape::from_prefix_free(events.iter().map(|&(s, p, o)| DescriptionEvent::new(s, bits(p), bits(o)))).unwrap()
}

fn main() {
    let u = tape(&[(1, "00", ""), (2, "01", "0"), (2, "100", "10"), (4, "1010", "1"), (5, "11", "0")]);
    let q = tape(&[(1, "1", "0"), (3, "01", "1")]);
    let h = HSpec::Offset(3);
    let run = transform_v(&u, &h, &q, 6, Expansion::Compact).unwrap();

    for r in &run.records {
        println!(
            "stage {} Omega_U {:<8} Omega_V {:<10} gamma {:<6} withheld {:<8} predicted {}",
            r.stage,
            r.omega_u.to_string(),
            r.omega_v.to_string(),
            r.gamma.to_string(),
            r.withheld.to_string(),
            r.predicted_difference()
        );
    }
    for e in run.v.events() {
        println!("V: stage {} {} -> {}", e.stage, e.program, e.output);
    }
    for a in &run.ledger.short {
        println!("A: {} (short program {}, h = {})", a.output, a.program, a.h);
    }
    println!("{}", ledger_check(&u, &run.v, &run.ledger, 6).checks.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n"));

    let w = combine_w(&u, &run.v);
    println!("Omega_W = {} = ({} + {}) / 2", w.omega(), u.omega(), run.v.omega());
    assert!(verify_omega_diff(&run.records).passed());
}
