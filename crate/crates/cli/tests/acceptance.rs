//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers (`--nocapture` to see them).
//! Tolerances are pinned here, not configurable.

use fluxtube::analysis::{
    area_law_probe, auto_t_grid, extract_tension, fit_fringe, static_potential,
    strong_coupling_omega, FringeSeries, ProbeOpts, ProbeSource, Verdict,
};
use fluxtube::engine::{evolve, ground_state, propagator, EvolveMethod, EvolveParams};
use fluxtube::group::GaugeGroup;
use fluxtube::hamiltonian::{assemble, Couplings, SparseHamiltonian};
use fluxtube::lattice::LatticeSpec;
use fluxtube::protocol::{
    fringe_sweep, meson_sites, prepare, return_amplitude, PrepMode, PrepareOpts,
};
use fluxtube::rng::SplitMix64;
use fluxtube::sector::{enumerate_sector, straight_path, ChargeConfig};
use fluxtube::C64;
use std::f64::consts::TAU;
use std::sync::Arc;
use std::time::Instant;

fn chain_spec(sites: usize) -> Arc<LatticeSpec> {
    Arc::new(LatticeSpec::chain(sites).unwrap())
}

fn ladder_spec() -> Arc<LatticeSpec> {
    Arc::new(LatticeSpec::grid(2, 4).unwrap())
}

/// Criterion 1: strong-coupling reproduction of the ideal fringe law:
/// P_R(T) = sin²(T) exactly (ΔE = 2), fitted ω = 2, γ = g²/2 = 1.
#[test]
fn criterion_1_ideal_fringe_law() {
    let started = Instant::now();
    let spec = chain_spec(7);
    let register = prepare(
        &spec,
        GaugeGroup::U1Truncated(1),
        &Couplings::electric_only(2.0).unwrap(),
        2,
        2,
        PrepMode::BareString,
        &PrepareOpts::default(),
    )
    .unwrap();
    let ts: Vec<f64> = (0..64).map(|k| TAU * k as f64 / 63.0).collect();
    let results = fringe_sweep(&register, &ts).unwrap();

    let mut max_dev: f64 = 0.0;
    for p in &results {
        max_dev = max_dev.max((p.p_r - (p.t).sin().powi(2)).abs());
    }
    assert!(max_dev <= 1e-10, "max fringe deviation {max_dev:.3e}");

    let series = FringeSeries::from_protocol(&results, 2, 2, 2.0, PrepMode::BareString);
    let fit = fit_fringe(&series).unwrap();
    assert!((fit.omega - 2.0).abs() <= 1e-8, "omega = {}", fit.omega);
    let gamma = extract_tension(&fit, 2).unwrap().gamma;
    assert!((gamma - 1.0).abs() <= 1e-8, "gamma = {gamma}");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 1 PASS: max|P_R - sin²T| = {max_dev:.2e}, omega = {:.12}, gamma = {gamma:.12}, {elapsed:?}",
        fit.omega
    );
}

/// Criterion 2: interferometric string tension vs the static-potential
/// slope on the Z2 ladder, three strongly-coupled g², within 1%.
#[test]
fn criterion_2_cross_method_tension() {
    let started = Instant::now();
    let spec = ladder_spec();
    let opts = PrepareOpts::default();
    let mut lines = Vec::new();
    for g2 in [2.5f64, 3.0, 4.0] {
        let couplings = Couplings::new(g2).unwrap();
        let register = prepare(
            &spec,
            GaugeGroup::Z2,
            &couplings,
            1,
            2,
            PrepMode::SectorGround,
            &opts,
        )
        .unwrap();
        let grid = auto_t_grid(strong_coupling_omega(GaugeGroup::Z2, &couplings, 2), 3.0, 24);
        let results = fringe_sweep(&register, &grid).unwrap();
        let series = FringeSeries::from_protocol(&results, 1, 2, g2, PrepMode::SectorGround);
        let gamma_interf = extract_tension(&fit_fringe(&series).unwrap(), 2)
            .unwrap()
            .gamma;

        let table = static_potential(&spec, GaugeGroup::Z2, &couplings, &[1, 2, 3], &opts).unwrap();
        let gamma_pot = table.fit.unwrap().slope;

        let rel = (gamma_interf - gamma_pot).abs() / gamma_pot.abs();
        assert!(
            rel < 0.01,
            "g2={g2}: interferometric {gamma_interf} vs potential {gamma_pot} (rel {rel:.2e})"
        );
        // strongly coupled: both sit close to the electric-only tension g²/2
        let electric_only = g2 / 2.0;
        assert!((gamma_interf - electric_only).abs() / electric_only < 0.05);
        lines.push(format!("g2={g2}: rel dev {rel:.2e}"));
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!("criterion 2 PASS: {} ({elapsed:?})", lines.join("; "));
}

/// Criterion 3: Minkowskian area phase of the return amplitude:
/// |B| = 1 and arg B = −(g²/2)·R·T (mod 2π) for bare strings in the
/// electric-only limit, 20 random (R, T) pairs.
#[test]
fn criterion_3_area_phase() {
    let spec = chain_spec(8);
    let mut rng = SplitMix64::new(0xA5EA);
    let params = EvolveParams::default();
    let mut worst_mod = 0.0f64;
    let mut worst_phase = 0.0f64;
    for k in 0..20 {
        let r = 1 + rng.next_below(6);
        let t = 8.0 * rng.next_f64();
        let g2 = [1.3, 2.0, 3.7][k % 3];
        let couplings = Couplings::electric_only(g2).unwrap();
        let (plus, minus) = meson_sites(&spec, r).unwrap();
        let sector = Arc::new(
            enumerate_sector(
                &spec,
                GaugeGroup::U1Truncated(1),
                &ChargeConfig::meson(plus, minus),
                100_000,
            )
            .unwrap(),
        );
        let chi = sector
            .string_state(&straight_path(&spec, plus, minus).unwrap())
            .unwrap();
        let h = Arc::new(assemble(&sector, &couplings).unwrap());
        let prop = propagator(&h, &params).unwrap();
        let b = return_amplitude(&prop, &chi, t).unwrap();

        worst_mod = worst_mod.max((b.norm() - 1.0).abs());
        let expected = -(g2 / 2.0) * r as f64 * t;
        let wrapped = (b.arg() - expected).rem_euclid(TAU);
        let dist = wrapped.min(TAU - wrapped);
        worst_phase = worst_phase.max(dist);
    }
    assert!(worst_mod <= 1e-12, "|B| deviation {worst_mod:.3e}");
    assert!(worst_phase <= 1e-10, "phase deviation {worst_phase:.3e}");
    println!(
        "criterion 3 PASS: max ||B|-1| = {worst_mod:.2e}, max phase dev = {worst_phase:.2e}"
    );
}

/// Criterion 4: two-level algebra: U² maps (1,0) to (0,1), U preserves
/// norm, and the T = 0 sequence yields P_R = 0, P_{R+L} = 1.
#[test]
fn criterion_4_two_level_algebra() {
    let spec = chain_spec(7);
    let register = prepare(
        &spec,
        GaugeGroup::U1Truncated(1),
        &Couplings::electric_only(2.0).unwrap(),
        2,
        2,
        PrepMode::BareString,
        &PrepareOpts::default(),
    )
    .unwrap();

    let mut reg = register.clone();
    reg.rotate();
    let (nd, nu) = reg.component_norms();
    assert!((nd * nd + nu * nu - 1.0).abs() <= 1e-12);
    reg.rotate();
    let (c_down, c_up) = reg.reference_amplitudes();
    assert!(c_down.norm() <= 1e-12, "c_down = {c_down}");
    assert!((c_up - C64::new(1.0, 0.0)).norm() <= 1e-12, "c_up = {c_up}");

    let res = register.run_sequence(0.0).unwrap();
    assert!(res.p_r.abs() <= 1e-12);
    assert!((res.p_rl - 1.0).abs() <= 1e-12);
    println!(
        "criterion 4 PASS: U²(1,0)→(0,1) to {:.1e}, T=0 gives P_R = {:.1e}, P_RL = 1-{:.1e}",
        c_down.norm(),
        res.p_r,
        (res.p_rl - 1.0).abs()
    );
}

/// Criterion 5: Krylov propagation matches dense eigendecomposition on
/// 25 random sparse Hermitian instances (dim ≤ 512) to 1e-8, and ground
/// states converge to residual ≤ 1e-10.
#[test]
fn criterion_5_engine_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(0x5EED);
    let mut worst_diff = 0.0f64;
    let mut worst_residual = 0.0f64;
    for inst in 0..25 {
        let dim = 8 + rng.next_below(505); // 8..=512
        let mut diag = Vec::with_capacity(dim);
        for _ in 0..dim {
            diag.push(2.0 * rng.next_symmetric());
        }
        let mut off = Vec::new();
        for i in 0..dim {
            for _ in 0..4 {
                let j = rng.next_below(dim);
                if i != j {
                    let v = 0.5 * rng.next_symmetric();
                    off.push((i, j, v));
                    off.push((j, i, v));
                }
            }
        }
        let h = Arc::new(SparseHamiltonian::from_triplets(dim, diag, &off).unwrap());
        let mut psi: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.next_symmetric(), rng.next_symmetric()))
            .collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|z| *z /= norm);

        let t = 0.5 + 2.0 * rng.next_f64();
        let dense = evolve(
            &h,
            &psi,
            t,
            &EvolveParams {
                method: EvolveMethod::ExactDiagonalization,
                ..Default::default()
            },
        )
        .unwrap();
        let krylov = evolve(
            &h,
            &psi,
            t,
            &EvolveParams {
                method: EvolveMethod::Krylov,
                ..Default::default()
            },
        )
        .unwrap();
        let diff: f64 = dense
            .iter()
            .zip(&krylov)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 1e-8, "instance {inst} dim {dim}: diff {diff:.3e}");
        worst_diff = worst_diff.max(diff);

        let eig = ground_state(
            &h,
            &EvolveParams {
                method: EvolveMethod::Krylov,
                dense_threshold: 1,
                ..Default::default()
            },
            rng.next_u64(),
        )
        .unwrap();
        // recompute the residual independently of the solver's report
        let mut hv = vec![0.0; dim];
        h.matvec_real(&eig.vector, &mut hv);
        let residual: f64 = hv
            .iter()
            .zip(&eig.vector)
            .map(|(a, b)| (a - eig.energy * b) * (a - eig.energy * b))
            .sum::<f64>()
            .sqrt();
        assert!(residual <= 1e-10, "instance {inst}: residual {residual:.3e}");
        worst_residual = worst_residual.max(residual);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 5 PASS: max evolve diff = {worst_diff:.2e}, max ground residual = {worst_residual:.2e} ({elapsed:?})"
    );
}

/// Criterion 6: Gauss-law and sector invariants: zero residual on every
/// basis state, brute-force agreement up to 12 links, and no norm
/// transfer between charge sectors during protocol runs.
#[test]
fn criterion_6_gauss_and_sector_invariants() {
    // brute force vs enumeration, all tested configs at ≤ 12 links
    let mut checked_configs = 0;
    let lattices: [Arc<LatticeSpec>; 6] = [
        chain_spec(5),
        chain_spec(6),
        Arc::new(LatticeSpec::grid(2, 2).unwrap()),
        Arc::new(LatticeSpec::grid(2, 3).unwrap()),
        Arc::new(LatticeSpec::grid(2, 4).unwrap()),
        Arc::new(LatticeSpec::grid(3, 3).unwrap()),
    ];
    for spec in &lattices {
        let groups: Vec<GaugeGroup> = if spec.num_links() > 10 {
            vec![GaugeGroup::Z2]
        } else {
            vec![GaugeGroup::Z2, GaugeGroup::ZN(3), GaugeGroup::U1Truncated(1)]
        };
        for group in groups {
            for charges in [ChargeConfig::empty(), ChargeConfig::meson(0, 1)] {
                let sector = enumerate_sector(spec, group, &charges, 1 << 20).unwrap();
                let brute = brute_force_basis(spec, group, &charges);
                assert_eq!(sector.dim(), brute.len());
                for (i, want) in brute.iter().enumerate() {
                    assert_eq!(sector.basis_state(i), want.as_slice());
                }
                for state in sector.basis_iter() {
                    for site in 0..spec.num_sites() {
                        assert_eq!(sector.gauss_residual(state, site), 0);
                    }
                }
                checked_configs += 1;
            }
        }
    }

    // sector leakage during protocol evolution
    let spec = ladder_spec();
    let mut worst = 0.0f64;
    for (g2, mode) in [(1.5, PrepMode::BareString), (3.0, PrepMode::SectorGround)] {
        let register = prepare(
            &spec,
            GaugeGroup::Z2,
            &Couplings::new(g2).unwrap(),
            1,
            2,
            mode,
            &PrepareOpts::default(),
        )
        .unwrap();
        let mut reg = register.clone();
        reg.rotate();
        let before = reg.component_norms();
        for _ in 0..8 {
            reg.evolve(0.9).unwrap();
            let after = reg.component_norms();
            worst = worst
                .max((after.0 - before.0).abs())
                .max((after.1 - before.1).abs());
        }
    }
    assert!(worst <= 1e-10, "sector norm drift {worst:.3e}");
    println!(
        "criterion 6 PASS: {checked_configs} configs brute-force-checked, sector leakage ≤ {worst:.2e}"
    );
}

/// Criterion 7: phase probe: area-law verdict exactly for β = 1 at the
/// default 2% threshold, non-area-law for β = 0.5 and β = 2.
#[test]
fn criterion_7_phase_probe() {
    let started = Instant::now();
    let r_list = [1usize, 2, 3, 4];
    let l_list = [1usize, 2];
    let opts = ProbeOpts::default();
    assert!((opts.threshold - 0.02).abs() < 1e-15);
    let mut seen = Vec::new();
    for (beta, expect) in [
        (0.5, Verdict::NonAreaLaw),
        (1.0, Verdict::AreaLaw),
        (2.0, Verdict::NonAreaLaw),
    ] {
        let report = area_law_probe(
            &ProbeSource::Toy { gamma: 1.0, beta },
            &r_list,
            &l_list,
            &opts,
        )
        .unwrap();
        assert_eq!(report.verdict, expect, "beta = {beta}");
        seen.push(format!("β={beta}→{}", report.verdict.as_str()));
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 7 PASS: {} ({elapsed:?})", seen.join(", "));
}

/// Criterion 8: determinism: the criterion-2 workload run twice through
/// the CLI with the same seed produces byte-identical files.
#[test]
fn criterion_8_byte_identical_outputs() {
    let work = std::env::temp_dir().join(format!("fluxtube_accept_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&work);
    std::fs::create_dir_all(&work).unwrap();

    // the criterion-2 workload split per subcommand (R+L must fit on the
    // 2x4 ladder, max separation 3)
    let base = |protocol: &str| {
        format!(
            r#"{{
        "lattice": {{"dims": [2, 4]}},
        "group": {{"kind": "z2"}},
        "couplings": {{"g2": 3.0}},
        "protocol": {protocol},
        "engine": {{"seed": 12648430}}
    }}"#
        )
    };
    let jobs = [
        ("interfere", base(r#"{"r": [1], "l": [2], "mode": "sector-ground"}"#)),
        ("potential", base(r#"{"r": [1, 2, 3], "mode": "sector-ground"}"#)),
        ("probe", base(r#"{"r": [1], "l": [1, 2], "mode": "sector-ground"}"#)),
    ];
    for (sub, cfg) in &jobs {
        std::fs::write(work.join(format!("{sub}.json")), cfg).unwrap();
    }

    // identical configs and flags; only the working directory differs, so
    // the embedded resolved configs (and thus all bytes) must match
    let bin = env!("CARGO_BIN_EXE_fluxtube");
    let run = |label: &str| {
        let cwd = work.join(label);
        std::fs::create_dir_all(&cwd).unwrap();
        for (sub, _) in &jobs {
            let cfg_path = work.join(format!("{sub}.json"));
            let status = std::process::Command::new(bin)
                .args([sub, "--config", cfg_path.to_str().unwrap(), "--svg"])
                .current_dir(&cwd)
                .status()
                .unwrap();
            assert!(status.success(), "{sub} failed in {label}");
        }
        cwd.join("out")
    };
    let dir_a = run("a");
    let dir_b = run("b");

    let mut names: Vec<String> = std::fs::read_dir(&dir_a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.len() >= 6, "expected several output files, got {names:?}");
    for name in &names {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "file {name} differs between identical runs");
    }
    let _ = std::fs::remove_dir_all(&work);
    println!(
        "criterion 8 PASS: {} files byte-identical across repeated runs",
        names.len()
    );
}

/// Odometer brute force over all assignments, lexicographic, filtered by
/// the Gauss-law definition.
fn brute_force_basis(
    spec: &LatticeSpec,
    group: GaugeGroup,
    charges: &ChargeConfig,
) -> Vec<Vec<i32>> {
    let values = group.electric_values();
    let links = spec.num_links();
    assert!(links <= 12);
    let mut out = Vec::new();
    let mut idx = vec![0usize; links];
    'outer: loop {
        let assignment: Vec<i32> = idx.iter().map(|&i| values[i]).collect();
        let ok = (0..spec.num_sites()).all(|site| {
            let mut div = 0i64;
            for &(link, sign) in spec.incident(site) {
                div += sign as i64 * assignment[link] as i64;
            }
            let residual = div - charges.charge_at(site) as i64;
            match group.modulus() {
                Some(n) => residual.rem_euclid(n as i64) == 0,
                None => residual == 0,
            }
        });
        if ok {
            out.push(assignment);
        }
        let mut pos = links;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    out
}
