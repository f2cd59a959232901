//! Exhaustive cross-check of the sector enumeration: every configuration
//! with at most 12 links is compared against a brute-force filter over all
//! |G|^links assignments, both as a set and in order.

use fluxtube::group::GaugeGroup;
use fluxtube::lattice::{Boundary, LatticeSpec};
use fluxtube::sector::{enumerate_sector, ChargeConfig};
use std::sync::Arc;

/// Lexicographic odometer over all assignments, filtered by Gauss's law
/// evaluated directly from the definition.
fn brute_force(
    spec: &LatticeSpec,
    group: GaugeGroup,
    charges: &ChargeConfig,
) -> Vec<Vec<i32>> {
    let values = group.electric_values();
    let links = spec.num_links();
    assert!(links <= 12, "brute force capped at 12 links");
    let mut out = Vec::new();
    let mut idx = vec![0usize; links];
    loop {
        let assignment: Vec<i32> = idx.iter().map(|&i| values[i]).collect();
        if satisfies_gauss(spec, group, charges, &assignment) {
            out.push(assignment);
        }
        // advance odometer, most significant digit first for lexicographic order
        let mut pos = links;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn satisfies_gauss(
    spec: &LatticeSpec,
    group: GaugeGroup,
    charges: &ChargeConfig,
    assignment: &[i32],
) -> bool {
    for site in 0..spec.num_sites() {
        let mut div = 0i64;
        for &(link, sign) in spec.incident(site) {
            div += sign as i64 * assignment[link] as i64;
        }
        let residual = div - charges.charge_at(site) as i64;
        let ok = match group.modulus() {
            Some(n) => residual.rem_euclid(n as i64) == 0,
            None => residual == 0,
        };
        if !ok {
            return false;
        }
    }
    true
}

fn check(spec: &Arc<LatticeSpec>, group: GaugeGroup, charges: &ChargeConfig) {
    let sector = enumerate_sector(spec, group, charges, 1_000_000).unwrap();
    let expected = brute_force(spec, group, charges);
    assert_eq!(
        sector.dim(),
        expected.len(),
        "dimension mismatch: {group} on {:?}",
        spec.dims()
    );
    for (i, want) in expected.iter().enumerate() {
        assert_eq!(
            sector.basis_state(i),
            want.as_slice(),
            "order mismatch at {i}: {group} on {:?}",
            spec.dims()
        );
    }
}

#[test]
fn chains_match_brute_force() {
    let groups = [
        GaugeGroup::Z2,
        GaugeGroup::ZN(3),
        GaugeGroup::U1Truncated(1),
        GaugeGroup::U1Truncated(2),
    ];
    for sites in [3usize, 5, 6] {
        let spec = Arc::new(LatticeSpec::chain(sites).unwrap());
        for group in groups {
            check(&spec, group, &ChargeConfig::empty());
            check(&spec, group, &ChargeConfig::meson(0, sites - 1));
            check(&spec, group, &ChargeConfig::meson(0, 1));
        }
    }
}

#[test]
fn grids_match_brute_force() {
    let g22 = Arc::new(LatticeSpec::grid(2, 2).unwrap());
    let g23 = Arc::new(LatticeSpec::grid(2, 3).unwrap());
    for group in [GaugeGroup::Z2, GaugeGroup::ZN(3), GaugeGroup::U1Truncated(1)] {
        check(&g22, group, &ChargeConfig::empty());
        check(&g22, group, &ChargeConfig::meson(0, 1));
        check(&g23, group, &ChargeConfig::empty());
        check(&g23, group, &ChargeConfig::meson(0, 2));
    }
}

#[test]
fn ladder_and_square_z2_match_brute_force() {
    // 2x4 ladder: 10 links; 3x3 square: 12 links (4096 assignments)
    let ladder = Arc::new(LatticeSpec::grid(2, 4).unwrap());
    let square = Arc::new(LatticeSpec::grid(3, 3).unwrap());
    for charges in [
        ChargeConfig::empty(),
        ChargeConfig::meson(0, 1),
        ChargeConfig::meson(0, 3),
    ] {
        check(&ladder, GaugeGroup::Z2, &charges);
    }
    check(&square, GaugeGroup::Z2, &ChargeConfig::empty());
    check(
        &square,
        GaugeGroup::Z2,
        &ChargeConfig::meson(0, 2),
    );
}

#[test]
fn periodic_chain_matches_brute_force() {
    let spec = Arc::new(LatticeSpec::new(&[4], &[Boundary::Periodic]).unwrap());
    for group in [GaugeGroup::Z2, GaugeGroup::ZN(3), GaugeGroup::U1Truncated(1)] {
        check(&spec, group, &ChargeConfig::empty());
        check(&spec, group, &ChargeConfig::meson(0, 2));
    }
    // periodic Z2 vacuum: all links equal, two states
    let sector = enumerate_sector(&spec, GaugeGroup::Z2, &ChargeConfig::empty(), 100).unwrap();
    assert_eq!(sector.dim(), 2);
}

#[test]
fn gauss_residuals_vanish_on_every_member() {
    let spec = Arc::new(LatticeSpec::grid(3, 3).unwrap());
    for group in [GaugeGroup::Z2, GaugeGroup::ZN(4)] {
        let sector =
            enumerate_sector(&spec, group, &ChargeConfig::meson(0, 2), 1_000_000).unwrap();
        for state in sector.basis_iter() {
            for site in 0..spec.num_sites() {
                assert_eq!(sector.gauss_residual(state, site), 0);
            }
        }
    }
}
