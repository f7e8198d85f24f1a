//! Witness multipartite entanglement and locate noise thresholds.

use netcfg::experiments::{threshold_bisect, visibility_threshold_ghz, Experiment, InequalityId};
use netcfg::inequality::DEFAULT_TOL;
use netcfg::quantum::{assemble, make_state, StateSpec};
use netcfg::witness::witness_entanglement;
use std::f64::consts::FRAC_PI_3;

fn main() -> netcfg::Result<()> {
    // n-party GHZ states: every adjacent pair is correlated, so n-1 cheap
    // two-party tests certify genuine n-party entanglement.
    for n in [3usize, 4, 5] {
        let c = make_state(&StateSpec::Ghz {
            theta: 0.9,
            qubits: n,
        })?;
        let state = assemble(vec![c], vec![(1..=n).collect()], n)?;
        let verdict = witness_entanglement(&state, None, DEFAULT_TOL)?;
        println!(
            "ghz n={n}: {} ({} pair tests)",
            verdict.render().lines().last().unwrap(),
            verdict.pairs.len()
        );
    }

    // Noise robustness: how much depolarizing noise a GHZ state tolerates
    // before the chain-form violation disappears.
    let formula = visibility_threshold_ghz(FRAC_PI_3)?;
    let measured = threshold_bisect(Experiment::NoisyGhz, FRAC_PI_3, 1000, InequalityId::Fin3)?
        .expect("the pure state violates");
    println!("noisy ghz threshold at pi/3: formula {formula:.4}, bisection {measured:.4}");
    Ok(())
}
