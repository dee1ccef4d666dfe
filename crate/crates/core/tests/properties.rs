use llg_core::config::{Configuration, Orientation, Pattern, RandomPattern};
use llg_core::cycles::decompose;
use llg_core::dynamics::{run, InitialCondition, SystemKind};
use llg_core::hexclass::{component_of, hexagon_transition, HexWord};
use llg_core::lattice::{is_site, Direction, HexId, Site, Sublattice};
use llg_core::stats::{
    fit_power_law, fraction_of_cycles, tamsd, CycleLengthHistogram, Series, SeriesKind,
};
use proptest::prelude::*;

fn site() -> impl Strategy<Value = Site> {
    (-500i32..500, -500i32..500).prop_filter_map("valid site", |(p, q)| Site::new(p, q).ok())
}

fn hex() -> impl Strategy<Value = HexId> {
    (-200i32..200, -200i32..200).prop_filter_map("valid hexagon", |(p, q)| HexId::new(p, q).ok())
}

fn state() -> impl Strategy<Value = (Site, Direction)> {
    (site(), 0usize..3).prop_map(|(s, i)| (s, s.allowed_directions()[i]))
}

fn orientation() -> impl Strategy<Value = Orientation> {
    prop_oneof![Just(Orientation::Left), Just(Orientation::Right)]
}

proptest! {
    #[test]
    fn neighbor_round_trip((s, d) in state()) {
        let n = s.neighbor(d).unwrap();
        prop_assert_eq!(n.neighbor(d.opposite()).unwrap(), s);
        prop_assert!(is_site(n.p(), n.q()));
    }

    #[test]
    fn bonds_join_opposite_sublattices((s, d) in state()) {
        let n = s.neighbor(d).unwrap();
        prop_assert_ne!(n.sublattice(), s.sublattice());
        let a = s.allowed_directions();
        let b = n.allowed_directions();
        prop_assert!(a.iter().all(|x| !b.contains(x)));
    }

    #[test]
    fn sublattice_follows_p(s in site()) {
        let want = if s.p().rem_euclid(3) == 2 { Sublattice::Plus } else { Sublattice::Minus };
        prop_assert_eq!(s.sublattice(), want);
    }

    #[test]
    fn three_hexagons_per_site(s in site()) {
        let hs = s.hexagons();
        for h in hs {
            prop_assert_eq!(h.p().rem_euclid(3), 1);
            prop_assert!(h.ring().contains(&s));
        }
        prop_assert!(hs[0] != hs[1] && hs[1] != hs[2]);
    }

    #[test]
    fn ring_closes_in_six(h in hex(), start in 0usize..6) {
        let ring = h.ring();
        let mut i = start;
        for _ in 0..6 {
            let a = ring[i];
            let b = ring[(i + 1) % 6];
            prop_assert!(a.direction_to(b).is_some());
            i = (i + 1) % 6;
        }
        prop_assert_eq!(i, start);
    }

    #[test]
    fn all_right_walk_closes_in_six((s, d) in state()) {
        let mut c = Configuration::all_right();
        let t = run(SystemKind::Rotator, InitialCondition::new(s, d).unwrap(), &mut c, 6).unwrap();
        prop_assert_eq!(t.positions[6], s);
        prop_assert_eq!(t.dirs[6], d);
        prop_assert!((1..6).all(|i| t.positions[i] != s));
    }

    #[test]
    fn rotations_invert(d in 0u8..6, z in orientation()) {
        let d = Direction::new(d).unwrap();
        prop_assert_eq!(d.rotate(z).rotate(-z), d);
    }

    #[test]
    fn phi_negates_exactly_minus_sites(seed in any::<u64>(), s in site()) {
        let c = Configuration::new(Pattern::Random(RandomPattern::new(seed, 0.5).unwrap()));
        let f = c.phi();
        let want = match s.sublattice() {
            Sublattice::Plus => c.orientation(s),
            Sublattice::Minus => -c.orientation(s),
        };
        prop_assert_eq!(f.orientation(s), want);
        prop_assert_eq!(f.phi().orientation(s), c.orientation(s));
    }

    #[test]
    fn pattern_evaluation_is_deterministic(seed in any::<u64>(), s in site()) {
        let a = Configuration::new(Pattern::Random(RandomPattern::new(seed, 0.3).unwrap()));
        let b = Configuration::new(Pattern::Random(RandomPattern::new(seed, 0.3).unwrap()));
        prop_assert_eq!(a.orientation(s), b.orientation(s));
    }

    #[test]
    fn flip_is_an_involution(s in site(), other in site()) {
        let mut c = Configuration::new(Pattern::pattern_a());
        let before = (c.orientation(s), c.orientation(other));
        c.flip(s);
        prop_assert_eq!(c.orientation(s), -before.0);
        if other != s {
            prop_assert_eq!(c.orientation(other), before.1);
        }
        c.flip(s);
        prop_assert_eq!(c.orientation(s), before.0);
        prop_assert_eq!(c.flip_count(), 2);
    }

    #[test]
    fn flip_count_equals_steps(seed in any::<u64>(), steps in 0usize..2000) {
        let mut c = Configuration::new(Pattern::Random(RandomPattern::new(seed, 0.5).unwrap()));
        let t = run(SystemKind::Rotator, InitialCondition::default(), &mut c, steps).unwrap();
        prop_assert_eq!(c.flip_count(), steps as u64);
        for w in t.positions.windows(2) {
            prop_assert!(w[0].direction_to(w[1]).is_some());
        }
    }

    #[test]
    fn decomposition_partitions_the_run(seed in any::<u64>(), steps in 0usize..3000) {
        let mut c = Configuration::new(Pattern::Random(RandomPattern::new(seed, 0.7).unwrap()));
        let t = run(SystemKind::Rotator, InitialCondition::default(), &mut c, steps).unwrap();
        let d = decompose(&t);
        let tail = d.trailing.map_or(0, |s| s.length());
        prop_assert_eq!(d.lengths().iter().sum::<usize>() + tail, steps);
        for cy in &d.cycles {
            let sites = cy.sites(&t);
            prop_assert_eq!(sites[0], t.positions[0]);
            prop_assert_eq!(*sites.last().unwrap(), t.positions[0]);
            prop_assert!(sites[1..sites.len() - 1].iter().all(|&s| s != t.positions[0]));
        }
    }

    #[test]
    fn passage_preserves_component(bits in 0u8..64, entry in 0usize..6) {
        let w = HexWord::from_bits(bits).unwrap();
        let t = hexagon_transition(w, entry).unwrap();
        prop_assert_eq!(component_of(t.word), component_of(w));
        prop_assert!(t.exit < 6);
    }

    #[test]
    fn canonical_is_dihedral_invariant(bits in 0u8..64, g in 0usize..12) {
        let w = HexWord::from_bits(bits).unwrap();
        prop_assert_eq!(w.images()[g].canonical(), w.canonical());
    }

    #[test]
    fn tamsd_is_linear(
        a in 0.0f64..10.0,
        b in 0.0f64..10.0,
        xs in prop::collection::vec(0.0f64..100.0, 1..200),
        ys in prop::collection::vec(0.0f64..100.0, 1..200),
    ) {
        let n = xs.len().min(ys.len());
        let s1 = Series::new(SeriesKind::Generic, xs[..n].to_vec());
        let s2 = Series::new(SeriesKind::Generic, ys[..n].to_vec());
        let mixed = Series::new(
            SeriesKind::Generic,
            (0..n).map(|i| a * xs[i] + b * ys[i]).collect(),
        );
        let lhs = tamsd(&mixed);
        let (t1, t2) = (tamsd(&s1), tamsd(&s2));
        for t in 1..=n {
            let rhs = a * t1.at(t) + b * t2.at(t);
            prop_assert!((lhs.at(t) - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn tamsd_preserves_monotonicity(xs in prop::collection::vec(0.0f64..100.0, 2..200)) {
        let mut v = xs.clone();
        v.sort_by(f64::total_cmp);
        let out = tamsd(&Series::new(SeriesKind::Generic, v));
        for t in 2..=out.len() {
            prop_assert!(out.at(t) >= out.at(t - 1) - 1e-12);
        }
    }

    #[test]
    fn fractions_sum_to_one(lengths in prop::collection::vec(1usize..50, 1..300)) {
        let h = CycleLengthHistogram::from_lengths(lengths.iter().copied(), 0);
        let f = fraction_of_cycles(&h).unwrap();
        let total: f64 = f.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(h.counts.values().sum::<usize>(), h.total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn fit_recovers_synthetic_power_laws(c in 0.05f64..5.0, alpha in 0.1f64..2.5) {
        let s = Series::from_fn(SeriesKind::Generic, 100_000, |t| c * (t as f64).powf(alpha));
        let fit = fit_power_law(&s, (1000, 100_000)).unwrap();
        prop_assert!((fit.alpha - alpha).abs() < 1e-6);
        prop_assert!((fit.c - c).abs() < 1e-6 * c.max(1.0));
    }

    #[test]
    fn equivalence_holds_for_random_configurations(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let c = Configuration::new(Pattern::Random(RandomPattern::new(seed, p).unwrap()));
        prop_assert!(llg_core::dynamics::check_equivalence(InitialCondition::default(), &c, 2000));
    }
}
