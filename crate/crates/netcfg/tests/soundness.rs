//! Cross-module properties: one-sided soundness of the compatibility check,
//! the single-source bound for arbitrary distributions, the expectation
//! form on classical networks, and violation-count monotonicity between the
//! greedy and optimal weight generators.

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netcfg::classical::{classical_joint_f64, random_classical_network};
use netcfg::dist::{parse_distribution, OutcomeDistribution};
use netcfg::fis::{fis_greedy, fis_optimal, FractionalWeights};
use netcfg::inequality::{check_config, expectation_finner, DEFAULT_TOL};
use netcfg::quantum::{assemble, born_distribution, make_state, StateSpec};
use netcfg::topology::NetworkTopology;
use netcfg::witness::{compatibility_check, Compatibility, Strategy};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn random_table(rng: &mut ChaCha8Rng, alphabets: &[usize]) -> OutcomeDistribution {
    let size: usize = alphabets.iter().product();
    let mut probs: Vec<f64> = (0..size).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= total;
    }
    OutcomeDistribution::new(alphabets.to_vec(), probs).unwrap()
}

#[test]
fn compatibility_never_refutes_the_true_classical_topology() {
    for seed in 0..60u64 {
        let n = 2 + (seed as usize % 4);
        let sources = 1 + seed as usize % 4;
        let (t, srcs, resp) = random_classical_network(seed, n, sources, 3, 3).unwrap();
        let d = classical_joint_f64(&t, &srcs, &resp).unwrap();
        let mut strategies = vec![Strategy::Greedy, Strategy::Optimal];
        if t.classify().is_some() {
            strategies.push(Strategy::Family { m: 1000, k: 1 });
        }
        for strategy in strategies {
            let verdict = compatibility_check(&d, &t, strategy, DEFAULT_TOL).unwrap();
            assert_eq!(
                verdict.conclusion,
                Compatibility::NotRefuted,
                "seed {seed} {strategy:?} refuted its own topology"
            );
        }
    }
}

#[test]
fn compatibility_never_refutes_the_true_quantum_topology() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // chain of EPR pairs with random angles
        let n = 3 + (seed as usize % 2);
        let comps = (0..n - 1)
            .map(|_| {
                make_state(&StateSpec::Epr {
                    theta: rng.gen_range(0.1..1.4),
                })
                .unwrap()
            })
            .collect();
        let assignment = (1..n).map(|j| vec![j, j + 1]).collect();
        let s = assemble(comps, assignment, n).unwrap();
        let d = born_distribution(&s, &s.computational_bases().unwrap()).unwrap();
        let topo = s.induced_topology();
        for strategy in [
            Strategy::Greedy,
            Strategy::Optimal,
            Strategy::Family { m: 1000, k: 1 },
            Strategy::Facet,
        ] {
            let verdict = compatibility_check(&d, &topo, strategy, DEFAULT_TOL).unwrap();
            assert_eq!(verdict.conclusion, Compatibility::NotRefuted, "seed {seed}");
        }
    }
}

/// With weights summing to at most 1 the bound holds for any probability
/// distribution at all, not only network-generated ones.
#[test]
fn single_source_weights_hold_for_arbitrary_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let alphabets: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let d = random_table(&mut rng, &alphabets);
        // random nonnegative weights scaled to sum <= 1
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
        let denom: i64 = raw.iter().sum::<i64>().max(1) + rng.gen_range(0..=3);
        let w = FractionalWeights::user(raw.into_iter().map(|x| big(x) / big(denom)).collect());
        let report = check_config(&d, &w, DEFAULT_TOL).unwrap();
        assert!(report.max_margin <= 1e-12, "margin {}", report.max_margin);
    }
}

/// A no-input box with perfectly anticorrelated outputs, supplied as a
/// document: still bounded by any single-source weight vector.
#[test]
fn pr_box_style_table_satisfies_single_source_weights() {
    let doc = r#"{
        "parties": [{"name":"A","alphabet":2},{"name":"B","alphabet":2}],
        "probs": [{"outcome":[0,1],"p":0.5},{"outcome":[1,0],"p":0.5}]
    }"#;
    let d = parse_distribution(doc).unwrap();
    for (a, b) in [(1i64, 0i64), (0, 1), (1, 1)] {
        let w = FractionalWeights::user(vec![big(a) / big(2), big(b) / big(2)]);
        let report = check_config(&d, &w, DEFAULT_TOL).unwrap();
        assert!(!report.violated);
    }
}

/// Soundness of the expectation form: classical joints with
/// greedy weights satisfy it for arbitrary nonnegative post-processing.
#[test]
fn expectation_form_holds_on_classical_networks() {
    for seed in 0..60u64 {
        let n = 2 + (seed as usize % 3);
        let (t, srcs, resp) = random_classical_network(seed, n, 3, 2, 3).unwrap();
        let d = classical_joint_f64(&t, &srcs, &resp).unwrap();
        let w = fis_greedy(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf00d);
        for _ in 0..5 {
            let fs: Vec<Vec<f64>> = d
                .alphabets()
                .iter()
                .map(|&k| (0..k).map(|_| rng.gen_range(0.0..2.0)).collect())
                .collect();
            let (lhs, rhs, satisfied) = expectation_finner(&d, &fs, &w, DEFAULT_TOL).unwrap();
            assert!(satisfied, "seed {seed}: E = {lhs} > bound {rhs}");
        }
    }
}

/// Entrywise-smaller weights never shrink the right-hand side, so the
/// optimizer's report never contains fewer violated outcomes than greedy's.
#[test]
fn optimal_reports_at_least_as_many_violations_as_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..80u64 {
        let n = 2 + (seed as usize % 4);
        let sources = 1 + seed as usize % 4;
        let (t, _, _) = random_classical_network(seed ^ 0xc0de, n, sources, 3, 2).unwrap();
        let alphabets: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let d = random_table(&mut rng, &alphabets);
        let count = |w: &FractionalWeights| {
            check_config(&d, w, DEFAULT_TOL)
                .unwrap()
                .entries
                .iter()
                .filter(|e| e.margin > DEFAULT_TOL)
                .count()
        };
        let greedy = count(&fis_greedy(&t));
        let optimal = count(&fis_optimal(&t, None).unwrap());
        assert!(
            optimal >= greedy,
            "seed {seed}: optimal found {optimal} violations, greedy {greedy} on {:?}",
            t.sources()
        );
    }
}

/// Biseparable and fully separable three-party states never violate the
/// square-root bound: one lone qubit plus an EPR pair, and three lone
/// qubits.
#[test]
fn separable_states_satisfy_the_sqrt_bound() {
    use netcfg::quantum::Cx;
    let half = FractionalWeights::user(vec![big(1) / big(2); 3]);
    for (t1, t2) in [(0.4f64, 0.9f64), (1.1, 0.3), (0.7, 0.7)] {
        let lone = make_state(&StateSpec::Product {
            vectors: vec![vec![Cx::new(t1.cos(), 0.0), Cx::new(t1.sin(), 0.0)]],
        })
        .unwrap();
        let pair = make_state(&StateSpec::Epr { theta: t2 }).unwrap();
        let s = assemble(vec![lone, pair], vec![vec![1], vec![2, 3]], 3).unwrap();
        let d = born_distribution(&s, &s.computational_bases().unwrap()).unwrap();
        let report = check_config(&d, &half, DEFAULT_TOL).unwrap();
        assert!(!report.violated, "biseparable t1={t1} t2={t2}");

        let vectors = (0..3)
            .map(|i| {
                let t = t1 + 0.3 * i as f64;
                vec![Cx::new(t.cos(), 0.0), Cx::new(t.sin(), 0.0)]
            })
            .collect();
        let prod = make_state(&StateSpec::Product { vectors }).unwrap();
        let s = assemble(vec![prod], vec![vec![1, 2, 3]], 3).unwrap();
        let d = born_distribution(&s, &s.computational_bases().unwrap()).unwrap();
        let report = check_config(&d, &half, DEFAULT_TOL).unwrap();
        assert!(!report.violated, "fully separable t1={t1}");
    }
}

/// The chain-3 check at (m, k) = (2, 1) is the symmetric square-root bound.
#[test]
fn chain_min_m2_equals_half_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..30 {
        let d = random_table(&mut rng, &[2, 3, 2]);
        let two_sided = netcfg::inequality::chain_min_check(&d, 2, 1, DEFAULT_TOL).unwrap();
        let half = FractionalWeights::user(vec![big(1) / big(2); 3]);
        let sym = check_config(&d, &half, DEFAULT_TOL).unwrap();
        assert!((two_sided.max_margin - sym.max_margin).abs() < 1e-12);
    }
}

/// Distributions generated on a sub-network are reproduced on any
/// super-network, so weights of the larger topology never flag them.
#[test]
fn super_topology_weights_hold_for_sub_network_distributions() {
    for seed in 0..40u64 {
        let (t2, _, _) = random_classical_network(seed ^ 0xdead, 4, 4, 3, 2).unwrap();
        if t2.n_sources() < 2 {
            continue;
        }
        // generate on the sub-network missing the last source
        let kept: Vec<Vec<usize>> = t2.sources()[..t2.n_sources() - 1]
            .iter()
            .map(|s| s.iter().map(|&p| p + 1).collect())
            .collect();
        let t1 = NetworkTopology::new(t2.party_names().to_vec(), kept).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let srcs: Vec<netcfg::classical::ClassicalSource> = (0..t1.n_sources())
            .map(|_| netcfg::classical::ClassicalSource::fair_bit())
            .collect();
        let resp: Vec<netcfg::classical::ResponseTable> = (0..4)
            .map(|p| {
                let inc = t1.incident_sources(p);
                let alphas: Vec<usize> = inc.iter().map(|&s| srcs[s].alphabet()).collect();
                let domain: usize = alphas.iter().product();
                let outs: Vec<usize> = (0..domain).map(|_| rng.gen_range(0..2)).collect();
                netcfg::classical::ResponseTable::new(alphas, outs, 2).unwrap()
            })
            .collect();
        let d = classical_joint_f64(&t1, &srcs, &resp).unwrap();
        for w in [fis_greedy(&t2), fis_optimal(&t2, None).unwrap()] {
            let report = check_config(&d, &w, DEFAULT_TOL).unwrap();
            assert!(report.max_margin <= 1e-12, "seed {seed}");
        }
    }
}
