mod common;

use proptest::prelude::*;

use qaoa_core::adapt::{build_mixer_pool, select_mixer, DEFAULT_GAMMA0};
use qaoa_core::classical::{branch_and_bound_min, brute_force_min};
use qaoa_core::hardware::{
    build_topology, builtin_device, compute_depth_profile, default_mapping, estimate_error_probability,
    estimation_circuit, profile_on, route_circuit, verify_routing, CalibrationData, DepthProfile, Topology,
    TopologyKind, TopologySpec,
};
use qaoa_core::optimizer::{powell_minimize, OptimizerConfig};
use qaoa_core::problem::{EntryDistribution, FeatureSelectionInstance};
use qaoa_core::rng::{stream, Stream};
use qaoa_core::sim::{Circuit, Gate, Pauli, PauliString, StateVector};

fn instance(n: usize, alpha: f64, seed: u64) -> FeatureSelectionInstance {
    FeatureSelectionInstance::generate(n, alpha, seed, EntryDistribution::default()).unwrap()
}

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    proptest::collection::btree_map(0..n, pauli(), 1..=n.min(4))
        .prop_map(|m| PauliString::new(m.into_iter().collect()).unwrap())
}

fn gate(n: usize) -> BoxedStrategy<Gate> {
    let q = 0..n;
    let t = -4.0..4.0f64;
    let mut options = vec![
        q.clone().prop_map(Gate::H).boxed(),
        (q.clone(), t.clone()).prop_map(|(q, t)| Gate::Rx(q, t)).boxed(),
        (q.clone(), t.clone()).prop_map(|(q, t)| Gate::Ry(q, t)).boxed(),
        (q.clone(), t.clone()).prop_map(|(q, t)| Gate::Rz(q, t)).boxed(),
        (pauli_string(n), t).prop_map(|(p, t)| Gate::PauliRotation(p, t)).boxed(),
    ];
    if n > 1 {
        let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
        options.push(pair.clone().prop_map(|(control, target)| Gate::Cnot { control, target }).boxed());
        options.push(pair.prop_map(|(a, b)| Gate::Swap(a, b)).boxed());
    }
    proptest::strategy::Union::new(options).boxed()
}

fn circuit(n: usize, len: usize) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(gate(n), len).prop_map(move |gates| {
        let mut c = Circuit::new(n);
        gates.into_iter().for_each(|g| c.push(g).unwrap());
        c
    })
}

/// Random connected graph: a random tree plus a few extra edges.
fn custom_topology() -> impl Strategy<Value = Topology> {
    (8usize..14)
        .prop_flat_map(|nodes| {
            let parents: Vec<_> = (1..nodes).map(|v| 0..v).collect();
            (Just(nodes), parents, proptest::collection::vec((0..nodes, 0..nodes), 0..4))
        })
        .prop_map(|(nodes, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(k, p)| (k + 1, p)).collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a != b));
            build_topology(&TopologySpec::Custom { nodes, edges }).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ising_energy_matches_objective(n in 1usize..=8, alpha in 0.0..=1.0f64, seed: u64) {
        let inst = instance(n, alpha, seed);
        let h = inst.to_ising();
        for x in 0..1usize << n {
            prop_assert!((h.energy_of_index(x) - common::objective(&inst, x)).abs() <= 1e-9);
        }
    }

    #[test]
    fn alpha_zero_selects_positive_diagonal(n in 1usize..=10, seed: u64) {
        let inst = instance(n, 0.0, seed);
        prop_assume!(inst.q.diagonal().iter().all(|&d| d != 0.0));
        let s = brute_force_min(&inst).unwrap();
        let expect: Vec<bool> = inst.q.diagonal().iter().map(|&d| d > 0.0).collect();
        prop_assert_eq!(s.minimizer.bits(), expect.as_slice());
    }

    #[test]
    fn generation_is_reproducible(n in 1usize..=12, alpha in 0.0..=1.0f64, seed: u64) {
        let a = instance(n, alpha, seed).to_json().unwrap();
        let b = instance(n, alpha, seed).to_json().unwrap();
        prop_assert_eq!(&a, &b);
        let back = FeatureSelectionInstance::from_json(&a).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), a);
    }

    #[test]
    fn rotations_compose(p in pauli_string(4), a in -3.0..3.0f64, b in -3.0..3.0f64, seed in 0u64..1000) {
        let start = common::random_state(4, &mut stream(seed, Stream::Instance));
        let mut two = start.clone();
        two.apply_pauli_rotation(&p, a).unwrap();
        two.apply_pauli_rotation(&p, b).unwrap();
        let mut one = start;
        one.apply_pauli_rotation(&p, a + b).unwrap();
        for (x, y) in one.amplitudes().iter().zip(two.amplitudes()) {
            prop_assert!((x - y).norm() <= 1e-10);
        }
    }

    #[test]
    fn brute_force_is_the_enumerated_minimum(n in 1usize..=10, alpha in 0.0..=1.0f64, seed: u64) {
        let inst = instance(n, alpha, seed);
        let (mut best, mut arg) = (f64::INFINITY, 0);
        for x in 0..1u64 << n {
            let v = inst.evaluate_index(x);
            if v < best {
                best = v;
                arg = x;
            }
        }
        let s = brute_force_min(&inst).unwrap();
        prop_assert_eq!(s.value, best);
        prop_assert_eq!(s.minimizer.to_index(), arg);
    }

    #[test]
    fn branch_and_bound_brackets_the_minimum(
        n in 2usize..=12, alpha in 0.0..=1.0f64, seed: u64, gap in prop_oneof![Just(0.0), 1e-6..0.2f64]
    ) {
        let inst = instance(n, alpha, seed);
        let bf = brute_force_min(&inst).unwrap();
        let bb = branch_and_bound_min(&inst, gap).unwrap();
        prop_assert!(bb.value >= bf.value);
        prop_assert!(bb.value - bf.value <= gap * bf.value.abs() + 1e-12);
        if gap == 0.0 {
            prop_assert_eq!(bb.minimizer, bf.minimizer);
        }
        prop_assert!(branch_and_bound_min(&inst, gap * 2.0).unwrap().nodes <= bb.nodes);
    }

    #[test]
    fn powell_reports_best_seen(x0 in proptest::collection::vec(-3.0..3.0f64, 1..5), iters in 1usize..30) {
        let cfg = OptimizerConfig { max_iterations: iters, ..OptimizerConfig::default() };
        let mut seen = Vec::new();
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (v - i as f64).powi(2) + (3.0 * v).sin()).sum::<f64>();
        let r = powell_minimize(|x| { let v = f(x); seen.push(v); v }, &x0, &cfg).unwrap();
        let min = seen.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(r.best_value, min);
        prop_assert_eq!(r.evaluations, seen.len());
        prop_assert!(r.evaluations <= cfg.evaluation_cap());
        prop_assert_eq!(f(&r.best_parameters), r.best_value);
        let again = powell_minimize(f, &x0, &cfg).unwrap();
        prop_assert_eq!(again, r);
    }

    #[test]
    fn error_probability_is_monotone(
        n1 in 0u64..500, n2 in 0u64..500, nm in 0u64..20,
        e1 in 0.0..0.05f64, e2 in 0.0..0.05f64, em in 0.0..0.05f64,
        which in 0usize..6, bump in 1u64..50, de in 0.0..0.05f64,
    ) {
        let d = DepthProfile { n1, n2, nm, ..Default::default() };
        let c = CalibrationData { t1_us: 1.0, t2_us: 1.0, e1, e2, em };
        let base = estimate_error_probability(&d, &c);
        let (mut d2, mut c2) = (d, c);
        match which {
            0 => d2.n1 += bump,
            1 => d2.n2 += bump,
            2 => d2.nm += bump,
            3 => c2.e1 += de,
            4 => c2.e2 += de,
            _ => c2.em += de,
        }
        prop_assert!(estimate_error_probability(&d2, &c2) >= base);
        prop_assert!((0.0..=1.0).contains(&base));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn long_random_circuits_preserve_norm(c in (1usize..=10).prop_flat_map(|n| circuit(n, 1000))) {
        let mut s = StateVector::plus(c.n()).unwrap();
        s.run(&c).unwrap();
        prop_assert!((s.norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn mixer_selection_is_repeatable(n in 1usize..=5, seed in 0u64..1000) {
        let inst = instance(n, 0.5, seed);
        let h = inst.to_ising();
        let pool = build_mixer_pool(n).unwrap();
        let state = common::random_state(n, &mut stream(seed, Stream::AngleInit));
        let a = select_mixer(&state, &h, &pool, DEFAULT_GAMMA0).unwrap();
        let b = select_mixer(&state, &h, &pool, DEFAULT_GAMMA0).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&pool.entries[a.index], &a.mixer);
    }

    #[test]
    fn routing_preserves_semantics(c in (2usize..=8).prop_flat_map(|n| circuit(n, 40)), t in custom_topology()) {
        let native = qaoa_core::hardware::to_native(&c).unwrap();
        let routed = route_circuit(&native, &t, None).unwrap();
        prop_assert!(routed.respects(&t));
        prop_assert!(verify_routing(&c, &routed).is_ok());

        let map = default_mapping(c.n(), &t).unwrap();
        let all_adjacent = native.gates().iter().all(|g| {
            let q = g.qubits();
            q.len() < 2 || t.are_adjacent(map[q[0]], map[q[1]])
        });
        prop_assert_eq!(routed.swaps == 0, all_adjacent);
    }
}

#[test]
fn routing_on_device_topologies() {
    for name in ["ibm_brisbane", "ibm_brisbane_square", "ibm_brisbane_all_to_all"] {
        let t = builtin_device(name).unwrap().build_topology().unwrap();
        for n in [3, 6, 8] {
            let c = estimation_circuit(&instance(n, 0.4, 21), 2).unwrap();
            let (routed, _) = profile_on(&c, &t, 3).unwrap();
            assert!(routed.respects(&t));
            verify_routing(&c, &routed).unwrap();
            if t.kind() == TopologyKind::AllToAll {
                assert_eq!(routed.swaps, 0);
            }
        }
    }
}

#[test]
fn swap_counts_follow_connectivity() {
    let c = estimation_circuit(&instance(6, 0.3, 4), 1).unwrap();
    let swaps: Vec<usize> = ["ibm_brisbane_all_to_all", "ibm_brisbane_square", "ibm_brisbane"]
        .iter()
        .map(|d| {
            let t = builtin_device(d).unwrap().build_topology().unwrap();
            profile_on(&c, &t, 3).unwrap().0.swaps
        })
        .collect();
    assert!(swaps[0] <= swaps[1] && swaps[1] <= swaps[2], "{swaps:?}");
}

#[test]
fn all_to_all_profile_ignores_the_seed() {
    let t = builtin_device("ibm_brisbane_all_to_all").unwrap().build_topology().unwrap();
    for n in [4, 6] {
        let profiles: Vec<DepthProfile> = (1..=4)
            .map(|seed| {
                let c = estimation_circuit(&instance(n, 0.5, seed), 3).unwrap();
                profile_on(&c, &t, 3).unwrap().1
            })
            .collect();
        assert!(profiles.windows(2).all(|w| w[0] == w[1]), "{profiles:?}");
        assert_eq!(profiles[0], compute_depth_profile(&qaoa_core::hardware::to_native(
            &estimation_circuit(&instance(n, 0.5, 9), 3).unwrap()).unwrap()));
    }
}
