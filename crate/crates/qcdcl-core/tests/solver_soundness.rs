//! Anti-vacuity guard for the oracle sweep: the heuristic solver must
//! actually decide most random instances, in both directions, for the
//! soundness comparison to mean anything.

use qcdcl_core::harness::{brute_force_eval, full_config_grid, random_pcnf};
use qcdcl_core::solver::{solve, Verdict};

#[test]
fn sweep_decides_often() {
    let configs = full_config_grid(200);
    let (mut decided, mut unknown, mut errs, mut true_v, mut false_v) = (0u32, 0u32, 0u32, 0u32, 0u32);
    let (mut truths_t, mut truths_f) = (0u32, 0u32);
    for seed in 1..=500u64 {
        let f = random_pcnf(seed, 12, 20);
        if brute_force_eval(&f).unwrap() { truths_t += 1 } else { truths_f += 1 }
        for cfg in &configs {
            match solve(&f, cfg) {
                Ok(t) => match t.verdict {
                    Verdict::Unknown => unknown += 1,
                    Verdict::True => { decided += 1; true_v += 1 }
                    Verdict::False => { decided += 1; false_v += 1 }
                },
                Err(_) => errs += 1,
            }
        }
    }
    println!("formulas: {truths_t} true / {truths_f} false");
    println!("decided: {decided} (TRUE {true_v} / FALSE {false_v}), unknown: {unknown}, aborted: {errs}");
    assert!(decided > 5000);
    assert!(true_v > 500);
    assert!(false_v > 500);
}
