//! Build topologies and synthesize inequality exponent vectors.

use netcfg::fis::{
    facet_weights, fis_family, fis_greedy, fis_optimal, is_valid_fis, FacetVariant, FamilyVariant,
};
use netcfg::topology::{BuiltinKind, NetworkTopology};

fn main() -> netcfg::Result<()> {
    // A triangle: three parties, each pair sharing one independent source.
    let triangle = NetworkTopology::builtin(BuiltinKind::Complete, 3, 2)?;
    println!("triangle greedy:  {}", fis_greedy(&triangle).render());
    println!(
        "triangle optimal: {}",
        fis_optimal(&triangle, None)?.render()
    );

    // A 5-party network mixing bipartite sources with a 3-party source.
    let mixed = NetworkTopology::new(
        (1..=5).map(|i| format!("A{i}")).collect(),
        vec![vec![1, 2], vec![2, 3], vec![1, 3], vec![3, 4, 5]],
    )?;
    let greedy = fis_greedy(&mixed);
    println!("mixed greedy:     {}", greedy.render());
    assert!(is_valid_fis(&mixed, &greedy)?);

    // Parametric chain weights and their m -> infinity facet limit.
    let family = fis_family(BuiltinKind::Chain, 3, 1000, 1, FamilyVariant::A)?;
    let facet = facet_weights(BuiltinKind::Chain, 3, FacetVariant::OddParties)?;
    println!("chain family:     {}", family.render());
    println!("chain facet:      {}", facet.render());

    // The optimizer prefers extremal vertices: ends of a chain get weight 1.
    let chain4 = NetworkTopology::builtin(BuiltinKind::Chain, 4, 2)?;
    println!("chain-4 optimal:  {}", fis_optimal(&chain4, None)?.render());
    Ok(())
}
