//! Simulate networks, evaluate inequalities, refute a wrong topology.

use netcfg::classical::triangle_bits;
use netcfg::fis::FractionalWeights;
use netcfg::inequality::{chain_min_check, check_config, DEFAULT_TOL};
use netcfg::quantum::{assemble, born_distribution, make_state, StateSpec};
use netcfg::topology::{BuiltinKind, NetworkTopology};
use netcfg::witness::{compatibility_check, Strategy};
use num_rational::BigRational;

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn main() -> netcfg::Result<()> {
    // Entanglement swapping: two EPR pairs in a line, the middle party
    // measuring both of its qubits at once.
    let epr = |theta| make_state(&StateSpec::Epr { theta });
    let chain = assemble(vec![epr(0.7)?, epr(1.1)?], vec![vec![1, 2], vec![2, 3]], 3)?;
    let d = born_distribution(&chain, &chain.computational_bases()?)?;

    // The square-root bound is saturated but never violated: swapping
    // cannot be told apart from a triangle this way.
    let w = FractionalWeights::user(vec![half(), half(), half()]);
    let report = check_config(&d, &w, DEFAULT_TOL)?;
    println!("swapping vs sqrt bound: {}", report.summary());

    // A GHZ-like three-way correlation does violate it.
    let ghz = assemble(
        vec![make_state(&StateSpec::Ghz {
            theta: 0.6,
            qubits: 3,
        })?],
        vec![vec![1, 2, 3]],
        3,
    )?;
    let d_ghz = born_distribution(&ghz, &ghz.computational_bases()?)?;
    let report = check_config(&d_ghz, &w, DEFAULT_TOL)?;
    println!("ghz vs sqrt bound:      {}", report.summary());

    // The sharper two-sided chain form refutes the classical triangle too.
    let d_tri = triangle_bits(0.5, 0.5, 0.5)?;
    let report = chain_min_check(&d_tri, 1000, 1, DEFAULT_TOL)?;
    println!("triangle vs chain form: {}", report.summary());

    // Packaged as a verdict against a candidate topology.
    let chain3 = NetworkTopology::builtin(BuiltinKind::Chain, 3, 2)?;
    let verdict = compatibility_check(
        &d_tri,
        &chain3,
        Strategy::Family { m: 1000, k: 1 },
        DEFAULT_TOL,
    )?;
    println!("{}", verdict.render());
    Ok(())
}
