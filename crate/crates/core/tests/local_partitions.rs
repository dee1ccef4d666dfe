use llg_core::config::{Configuration, SplitMix64};
use llg_core::dynamics::{step, InitialCondition, ParticleState, Simulation, SystemKind};
use llg_core::hexclass::is_admissible;
use llg_core::lattice::{HexId, Site};
use llg_core::localtraj::{
    enumerate_local_trajectories, find_triperfect, relabel_to_agree, verify_triperfect, LocalKind,
    Region,
};

/// Admissible configurations: snapshots of the all-right run at return times.
fn admissible_snapshots(n: usize) -> Vec<Configuration> {
    let ic = InitialCondition::default();
    let mut sim = Simulation::new(SystemKind::Rotator, ic, Configuration::all_right());
    let mut out = vec![Configuration::all_right()];
    while out.len() < n {
        if sim.advance().site == ic.site {
            out.push(sim.config().clone());
        }
    }
    out
}

/// A small random region of whole hexagons near the origin.
fn random_region(rng: &mut SplitMix64) -> Region {
    let start = Site::ORIGIN.hexagons()[rng.below(3) as usize];
    let mut hexes = vec![start];
    for _ in 0..rng.below(6) {
        let from = hexes[rng.below(hexes.len() as u64) as usize];
        hexes.push(from.adjacent()[rng.below(6) as usize]);
    }
    Region::new(hexes)
}

#[test]
fn partitions_merge_consistently() {
    let snapshots = admissible_snapshots(40);
    let mut rng = SplitMix64::new(7);
    let mut checked = 0;
    while checked < 50 {
        let c = &snapshots[rng.below(snapshots.len() as u64) as usize];
        let omega = random_region(&mut rng);
        let outside: Vec<HexId> = omega
            .hexes()
            .iter()
            .flat_map(|h| h.adjacent())
            .filter(|g| !omega.hexes().contains(g))
            .collect();
        let h = outside[rng.below(outside.len() as u64) as usize];
        let mut hexes = omega.hexes().to_vec();
        hexes.push(h);
        assert!(is_admissible(c, &hexes).unwrap());

        let single = Region::new([h]);
        let (a, a_part) = find_triperfect(&omega, c).unwrap();
        let (b, b_part) = find_triperfect(&single, c).unwrap();
        let (a_part, b_part) = (a_part.unwrap(), b_part.unwrap());
        assert!(verify_triperfect(&omega, &a, &a_part));
        assert!(verify_triperfect(&single, &b, &b_part));
        let perm = relabel_to_agree(&a, &a_part, &b, &b_part).expect("relabeling exists");
        let mut sorted = perm;
        sorted.sort_unstable();
        assert_eq!(sorted, [0, 1, 2]);
        checked += 1;
    }
}

#[test]
fn sites_are_covered_three_times_and_crossings_avoid_themselves() {
    let snapshots = admissible_snapshots(30);
    let mut rng = SplitMix64::new(11);
    for c in &snapshots {
        let r = random_region(&mut rng);
        let found = enumerate_local_trajectories(&r, c).unwrap();
        assert!(found.unexplained.is_empty());
        assert!(found.cover_counts(&r).iter().all(|&(_, n)| n == 3));
        assert!(found.crossings().all(|t| t.is_self_avoiding()));
    }
}

#[test]
fn local_cycles_have_no_distinguished_base() {
    let snapshots = admissible_snapshots(30);
    let mut cycles_seen = 0;
    for c in &snapshots {
        let r = Region::disc(Site::ORIGIN.hexagons()[0], 1);
        let found = enumerate_local_trajectories(&r, c).unwrap();
        // Replay on the region's own scatterers over an all-right background.
        let mut local = Configuration::all_right();
        for &s in r.sites() {
            local.set(s, c.orientation(s));
        }
        for t in found
            .trajectories
            .iter()
            .filter(|t| t.kind == LocalKind::LocalCycle)
        {
            cycles_seen += 1;
            let n = t.states.len();
            for start in 0..n {
                let (site, dir) = t.states[start];
                let mut cc = local.clone();
                let mut st = ParticleState { site, dir, time: 0 };
                for k in 1..=n {
                    st = step(SystemKind::Rotator, st, &mut cc);
                    assert_eq!((st.site, st.dir), t.states[(start + k) % n]);
                }
            }
        }
    }
    assert!(cycles_seen > 0);
}
