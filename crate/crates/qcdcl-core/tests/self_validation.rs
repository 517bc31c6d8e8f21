//! Self-validation sweep: every trace the solver emits must pass the
//! independent validator — on the generated families and on random
//! instances across the policy grid.

use qcdcl_core::gen::{generate, Family, FamilySpec};
use qcdcl_core::harness::{full_config_grid, random_pcnf};
use qcdcl_core::solver::{solve, validate_trace, CubeConfig, SolverConfig};

#[test]
fn family_traces_validate() {
    for fam in Family::ALL {
        for n in 1..=4u32 {
            for cube in [CubeConfig::NoCube, CubeConfig::CubeLd] {
                let cfg = SolverConfig { cube, step_limit: 400, ..SolverConfig::default() };
                let f = generate(FamilySpec::new(fam, n));
                // satisfiable-matrix families abort under NoCube; skip those
                let trace = match solve(&f, &cfg) {
                    Ok(t) => t,
                    Err(_) => continue,
                };
                let validity = validate_trace(&f, &cfg, &trace);
                assert!(
                    validity.is_valid(),
                    "{fam}:{n} cube={cube:?} verdict={}: {validity}",
                    trace.verdict
                );
            }
        }
    }
}

#[test]
fn random_traces_validate_across_grid() {
    let configs = full_config_grid(80);
    for seed in 500..560u64 {
        let f = random_pcnf(seed, 10, 16);
        for (ci, cfg) in configs.iter().enumerate() {
            let trace = match solve(&f, cfg) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let validity = validate_trace(&f, cfg, &trace);
            assert!(validity.is_valid(), "seed {seed} config {ci}: {validity}");
        }
    }
}
