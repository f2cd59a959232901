//! Charge sectors: enumeration of the Gauss-law constrained basis and bare
//! flux-string states.
//!
//! A sector is the set of all link-field assignments `e: links → values`
//! satisfying, at every site v,
//!
//! ```text
//! Σ_{links leaving v} e  −  Σ_{links entering v} e  =  q_v
//! ```
//!
//! (mod N for cyclic groups, exactly for truncated U(1)). Static charges
//! make the Hamiltonian block-diagonal across sectors, so each sector is a
//! self-contained Hilbert space.
//!
//! Enumeration is a depth-first assignment in link order with a Gauss check
//! fired as soon as all links incident to a site are assigned. Bases come
//! out in lexicographic order of the assignment vector, so two runs always
//! agree element by element.

use crate::cvec::{self, C64};
use crate::group::GaugeGroup;
use crate::lattice::{Boundary, LatticeSpec};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Static charges by site. Sites not listed carry zero charge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChargeConfig {
    charges: BTreeMap<usize, i32>,
}

impl ChargeConfig {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = (usize, i32)>>(charges: I) -> Self {
        Self {
            charges: charges.into_iter().filter(|&(_, q)| q != 0).collect(),
        }
    }

    /// Quark–antiquark pair: +1 at `plus`, -1 at `minus`.
    pub fn meson(plus: usize, minus: usize) -> Self {
        Self::new([(plus, 1), (minus, -1)])
    }

    pub fn charge_at(&self, site: usize) -> i32 {
        self.charges.get(&site).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.charges.iter().map(|(&s, &q)| (s, q))
    }

    pub fn total(&self) -> i64 {
        self.charges.values().map(|&q| q as i64).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.charges.is_empty()
    }

    /// The (+1, -1) site pair if this is exactly a meson configuration.
    pub fn meson_endpoints(&self) -> Option<(usize, usize)> {
        if self.charges.len() != 2 {
            return None;
        }
        let mut it = self.charges.iter();
        let (&a, &qa) = it.next()?;
        let (&b, &qb) = it.next()?;
        match (qa, qb) {
            (1, -1) => Some((a, b)),
            (-1, 1) => Some((b, a)),
            _ => None,
        }
    }
}

/// Enumerated Gauss-law basis of one charge sector.
#[derive(Debug, Clone)]
pub struct GaugeSector {
    spec: Arc<LatticeSpec>,
    group: GaugeGroup,
    charges: ChargeConfig,
    /// `dim * num_links` link assignments, basis state i at
    /// `basis[i*stride .. (i+1)*stride]`, lexicographically ordered.
    basis: Vec<i32>,
    stride: usize,
    index: HashMap<Vec<i32>, usize>,
}

/// First-K-states debug view, serializable for inspection dumps.
#[derive(Debug, Clone, Serialize)]
pub struct SectorDump {
    pub group: String,
    pub charges: Vec<(usize, i32)>,
    pub dimension: usize,
    pub shown: Vec<Vec<i32>>,
}

/// Enumerates every link-field assignment satisfying Gauss's law for
/// `charges`. An empty basis is a legal outcome in 2D; provably infeasible
/// configurations (bad total charge, over-truncated chain flux) error out
/// up front.
pub fn enumerate_sector(
    spec: &Arc<LatticeSpec>,
    group: GaugeGroup,
    charges: &ChargeConfig,
    max_dim: usize,
) -> Result<GaugeSector> {
    if max_dim == 0 {
        return Err(Error::InvalidInput("max_dim must be positive".into()));
    }
    for (site, _) in charges.iter() {
        if site >= spec.num_sites() {
            return Err(Error::ChargeOutOfRange {
                site,
                sites: spec.num_sites(),
            });
        }
    }
    check_total_charge(&group, charges)?;
    check_chain_flux(spec, &group, charges)?;

    let num_links = spec.num_links();
    let values = group.electric_values();

    // Sites become checkable once their highest-index incident link is set.
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); num_links];
    for site in 0..spec.num_sites() {
        let last = spec
            .incident(site)
            .iter()
            .map(|&(l, _)| l)
            .max()
            .expect("every site touches a link");
        check_at[last].push(site);
    }

    let mut basis: Vec<i32> = Vec::new();
    let mut assignment = vec![0i32; num_links];
    dfs_assign(
        spec,
        &group,
        charges,
        &values,
        &check_at,
        &mut assignment,
        0,
        &mut basis,
        max_dim,
    )?;

    let dim = basis.len() / num_links.max(1);
    let mut index = HashMap::with_capacity(dim);
    for i in 0..dim {
        index.insert(basis[i * num_links..(i + 1) * num_links].to_vec(), i);
    }

    Ok(GaugeSector {
        spec: Arc::clone(spec),
        group,
        charges: charges.clone(),
        basis,
        stride: num_links,
        index,
    })
}

/// Every link joins two sites with opposite signs, so residuals telescope:
/// the total charge must vanish (mod N for cyclic groups).
fn check_total_charge(group: &GaugeGroup, charges: &ChargeConfig) -> Result<()> {
    let total = charges.total();
    let bad = match group.modulus() {
        Some(n) => total.rem_euclid(n as i64) != 0,
        None => total != 0,
    };
    if bad {
        return Err(Error::InfeasibleCharges(format!(
            "total charge {total} does not vanish for {group}"
        )));
    }
    Ok(())
}

/// On an open chain each link flux is the cumulative charge to its left,
/// so truncated U(1) feasibility is decidable by partial sums.
fn check_chain_flux(
    spec: &LatticeSpec,
    group: &GaugeGroup,
    charges: &ChargeConfig,
) -> Result<()> {
    let lambda = match *group {
        GaugeGroup::U1Truncated(l) => l as i64,
        _ => return Ok(()),
    };
    if spec.ndim() != 1 || spec.boundary()[0] != Boundary::Open {
        return Ok(());
    }
    let mut running = 0i64;
    for site in 0..spec.num_sites() {
        running += charges.charge_at(site) as i64;
        if site + 1 < spec.num_sites() && running.abs() > lambda {
            return Err(Error::InfeasibleCharges(format!(
                "chain link {site} would need flux {running}, truncation is ±{lambda}"
            )));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn dfs_assign(
    spec: &LatticeSpec,
    group: &GaugeGroup,
    charges: &ChargeConfig,
    values: &[i32],
    check_at: &[Vec<usize>],
    assignment: &mut [i32],
    depth: usize,
    basis: &mut Vec<i32>,
    max_dim: usize,
) -> Result<()> {
    if depth == assignment.len() {
        if basis.len() / assignment.len().max(1) == max_dim {
            return Err(Error::DimensionExceeded {
                max_dim,
                lower_bound: max_dim + 1,
            });
        }
        basis.extend_from_slice(assignment);
        return Ok(());
    }
    for &v in values {
        assignment[depth] = v;
        let ok = check_at[depth].iter().all(|&site| {
            gauss_residual_raw(spec, group, charges, assignment, site) == 0
        });
        if ok {
            dfs_assign(
                spec, group, charges, values, check_at, assignment, depth + 1, basis, max_dim,
            )?;
        }
    }
    Ok(())
}

fn gauss_residual_raw(
    spec: &LatticeSpec,
    group: &GaugeGroup,
    charges: &ChargeConfig,
    assignment: &[i32],
    site: usize,
) -> i64 {
    let mut div = 0i64;
    for &(link, sign) in spec.incident(site) {
        div += sign as i64 * assignment[link] as i64;
    }
    let residual = div - charges.charge_at(site) as i64;
    match group.modulus() {
        Some(n) => residual.rem_euclid(n as i64),
        None => residual,
    }
}

impl GaugeSector {
    pub fn dim(&self) -> usize {
        self.basis.len().checked_div(self.stride).unwrap_or(0)
    }

    pub fn spec(&self) -> &Arc<LatticeSpec> {
        &self.spec
    }

    pub fn group(&self) -> GaugeGroup {
        self.group
    }

    pub fn charges(&self) -> &ChargeConfig {
        &self.charges
    }

    /// Link assignment of basis state `i`.
    pub fn basis_state(&self, i: usize) -> &[i32] {
        &self.basis[i * self.stride..(i + 1) * self.stride]
    }

    pub fn basis_iter(&self) -> impl Iterator<Item = &[i32]> + '_ {
        (0..self.dim()).map(move |i| self.basis_state(i))
    }

    /// Position of an assignment in the basis, if present.
    pub fn position(&self, assignment: &[i32]) -> Option<usize> {
        self.index.get(assignment).copied()
    }

    /// Gauss residual of an assignment at one site (0 for basis members).
    pub fn gauss_residual(&self, assignment: &[i32], site: usize) -> i64 {
        gauss_residual_raw(&self.spec, &self.group, &self.charges, assignment, site)
    }

    pub fn require_non_empty(self) -> Result<Self> {
        if self.dim() == 0 {
            return Err(Error::InfeasibleCharges(
                "enumeration produced no Gauss-law states under the truncation".into(),
            ));
        }
        Ok(self)
    }

    /// Bare flux string: raises the link field by one unit along `path` on
    /// top of the flux-free background and returns the matching basis
    /// vector. The walk must run from the +1 charge to the -1 charge.
    pub fn string_state(&self, path: &SitePath) -> Result<Vec<C64>> {
        let (plus, minus) = self.charges.meson_endpoints().ok_or_else(|| {
            Error::PathInvalid("sector charges are not a single ±1 meson pair".into())
        })?;
        let sites = path.sites();
        if sites.len() < 2 {
            return Err(Error::PathInvalid("path needs at least two sites".into()));
        }
        let (start, end) = (sites[0], *sites.last().unwrap());
        // Mod-2 groups cannot tell +1 from -1, so either orientation works.
        let order_free = self.group.modulus() == Some(2);
        let endpoints_ok =
            (start, end) == (plus, minus) || (order_free && (start, end) == (minus, plus));
        if !endpoints_ok {
            return Err(Error::PathInvalid(format!(
                "path runs {start}→{end}, charges sit at +{plus}/-{minus}"
            )));
        }

        let mut assignment = vec![0i32; self.spec.num_links()];
        for pair in sites.windows(2) {
            let (link, dir) = self.spec.link_between(pair[0], pair[1]).ok_or_else(|| {
                Error::PathInvalid(format!("sites {} and {} are not adjacent", pair[0], pair[1]))
            })?;
            assignment[link] = self
                .group
                .raise(assignment[link], dir as i32)
                .ok_or(Error::NotInBasis)?;
        }

        let pos = self.position(&assignment).ok_or(Error::NotInBasis)?;
        Ok(cvec::basis_vector(self.dim(), pos))
    }

    /// Dimension plus the first `k` basis assignments, for inspection.
    pub fn dump(&self, k: usize) -> SectorDump {
        SectorDump {
            group: self.group.to_string(),
            charges: self.charges.iter().collect(),
            dimension: self.dim(),
            shown: self
                .basis_iter()
                .take(k)
                .map(|a| a.to_vec())
                .collect(),
        }
    }
}

/// Walk along lattice sites, consecutive entries adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SitePath(Vec<usize>);

impl SitePath {
    pub fn new(sites: Vec<usize>) -> Self {
        Self(sites)
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }
}

/// Axis-aligned walk between two sites differing along exactly one axis.
pub fn straight_path(spec: &LatticeSpec, from: usize, to: usize) -> Result<SitePath> {
    let a = spec.site_coords(from);
    let b = spec.site_coords(to);
    let mut moving_axis = None;
    for axis in 0..spec.ndim() {
        if a[axis] != b[axis] {
            if moving_axis.is_some() {
                return Err(Error::PathInvalid(
                    "sites are not aligned along a single axis".into(),
                ));
            }
            moving_axis = Some(axis);
        }
    }
    let axis = moving_axis
        .ok_or_else(|| Error::PathInvalid("path endpoints coincide".into()))?;
    let step: i64 = if b[axis] > a[axis] { 1 } else { -1 };
    let mut sites = vec![from];
    let mut c = a;
    while c[axis] != b[axis] {
        c[axis] = (c[axis] as i64 + step) as usize;
        sites.push(spec.site_index(&c));
    }
    Ok(SitePath::new(sites))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;

    fn chain(n: usize) -> Arc<LatticeSpec> {
        Arc::new(LatticeSpec::chain(n).unwrap())
    }

    fn grid(x: usize, y: usize) -> Arc<LatticeSpec> {
        Arc::new(LatticeSpec::grid(x, y).unwrap())
    }

    #[test]
    fn chain_meson_sector_is_one_dimensional() {
        let spec = chain(5);
        let sector = enumerate_sector(
            &spec,
            GaugeGroup::U1Truncated(1),
            &ChargeConfig::meson(0, 2),
            1000,
        )
        .unwrap();
        assert_eq!(sector.dim(), 1);
        assert_eq!(sector.basis_state(0), &[1, 1, 0, 0]);
    }

    #[test]
    fn z2_vacuum_square_has_two_states() {
        let spec = grid(2, 2);
        let sector =
            enumerate_sector(&spec, GaugeGroup::Z2, &ChargeConfig::empty(), 1000).unwrap();
        assert_eq!(sector.dim(), 2);
        assert_eq!(sector.basis_state(0), &[0, 0, 0, 0]);
        assert_eq!(sector.basis_state(1), &[1, 1, 1, 1]);
    }

    #[test]
    fn overtruncated_chain_charges_rejected() {
        let spec = chain(5);
        let err = enumerate_sector(
            &spec,
            GaugeGroup::U1Truncated(1),
            &ChargeConfig::new([(0, 2), (2, -2)]),
            1000,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InfeasibleCharges(_)));
    }

    #[test]
    fn nonzero_total_charge_rejected() {
        let spec = chain(4);
        let err = enumerate_sector(
            &spec,
            GaugeGroup::U1Truncated(1),
            &ChargeConfig::new([(0, 1)]),
            1000,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InfeasibleCharges(_)));
        // Z3: a +1/+2 pair sums to 0 mod 3, legal
        let ok = enumerate_sector(
            &spec,
            GaugeGroup::ZN(3),
            &ChargeConfig::new([(0, 1), (3, 2)]),
            1000,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn empty_basis_is_legal_in_2d() {
        // ±3 on degree-2 corners of a 2x2 square cannot be carried by Λ=1 links
        let spec = grid(2, 2);
        let sector = enumerate_sector(
            &spec,
            GaugeGroup::U1Truncated(1),
            &ChargeConfig::new([(0, 3), (3, -3)]),
            1000,
        )
        .unwrap();
        assert_eq!(sector.dim(), 0);
        assert!(matches!(
            sector.require_non_empty(),
            Err(Error::InfeasibleCharges(_))
        ));
    }

    #[test]
    fn dimension_guard_fires() {
        let spec = grid(2, 2);
        let err =
            enumerate_sector(&spec, GaugeGroup::Z2, &ChargeConfig::empty(), 1).unwrap_err();
        match err {
            Error::DimensionExceeded { max_dim, lower_bound } => {
                assert_eq!(max_dim, 1);
                assert_eq!(lower_bound, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn every_basis_state_satisfies_gauss_law() {
        let spec = grid(2, 3);
        for charges in [ChargeConfig::empty(), ChargeConfig::meson(0, 4)] {
            let sector =
                enumerate_sector(&spec, GaugeGroup::Z2, &charges, 100_000).unwrap();
            assert!(sector.dim() > 0);
            for state in sector.basis_iter() {
                for site in 0..spec.num_sites() {
                    assert_eq!(sector.gauss_residual(state, site), 0);
                }
            }
        }
    }

    #[test]
    fn chain_mesons_always_dim_one() {
        for sites in 3..=7 {
            let spec = chain(sites);
            for r in 1..sites {
                let sector = enumerate_sector(
                    &spec,
                    GaugeGroup::U1Truncated(2),
                    &ChargeConfig::meson(0, r),
                    1000,
                )
                .unwrap();
                assert_eq!(sector.dim(), 1, "sites={sites} r={r}");
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let spec = grid(2, 3);
        let a = enumerate_sector(&spec, GaugeGroup::ZN(3), &ChargeConfig::empty(), 100_000)
            .unwrap();
        let b = enumerate_sector(&spec, GaugeGroup::ZN(3), &ChargeConfig::empty(), 100_000)
            .unwrap();
        assert_eq!(a.basis, b.basis);
    }

    #[test]
    fn string_state_on_chain() {
        let spec = chain(5);
        let sector = enumerate_sector(
            &spec,
            GaugeGroup::U1Truncated(1),
            &ChargeConfig::meson(0, 2),
            1000,
        )
        .unwrap();
        let path = straight_path(&spec, 0, 2).unwrap();
        let state = sector.string_state(&path).unwrap();
        assert_eq!(state.len(), 1);
        assert!((state[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn string_state_wrong_endpoints() {
        let spec = chain(5);
        let sector = enumerate_sector(
            &spec,
            GaugeGroup::U1Truncated(1),
            &ChargeConfig::meson(0, 2),
            1000,
        )
        .unwrap();
        let path = straight_path(&spec, 0, 3).unwrap();
        assert!(matches!(
            sector.string_state(&path),
            Err(Error::PathInvalid(_))
        ));
        // wrong orientation matters for U(1)
        let reversed = straight_path(&spec, 2, 0).unwrap();
        assert!(matches!(
            sector.string_state(&reversed),
            Err(Error::PathInvalid(_)) | Err(Error::NotInBasis)
        ));
    }

    #[test]
    fn string_state_respects_truncation() {
        // a walk that reuses a link in the same direction pushes flux to 2
        let spec = grid(2, 3);
        let plus = spec.site_index(&[0, 0]);
        let minus = spec.site_index(&[0, 2]);
        let sector = enumerate_sector(
            &spec,
            GaugeGroup::U1Truncated(1),
            &ChargeConfig::meson(plus, minus),
            100_000,
        )
        .unwrap();
        let s = |x: usize, y: usize| spec.site_index(&[x, y]);
        // straight works
        let straight = straight_path(&spec, plus, minus).unwrap();
        assert!(sector.string_state(&straight).is_ok());
        // loop around the lower square, then the first rung again: flux 2
        let wander = SitePath::new(vec![
            s(0, 0),
            s(0, 1),
            s(1, 1),
            s(1, 0),
            s(0, 0),
            s(0, 1),
            s(0, 2),
        ]);
        assert!(matches!(
            sector.string_state(&wander),
            Err(Error::NotInBasis)
        ));
    }

    #[test]
    fn straight_path_requires_alignment() {
        let spec = grid(3, 3);
        let a = spec.site_index(&[0, 0]);
        let b = spec.site_index(&[2, 2]);
        assert!(straight_path(&spec, a, b).is_err());
        assert!(straight_path(&spec, a, a).is_err());
    }

    #[test]
    fn ladder_string_state_lands_on_straight_configuration() {
        // Z2 ladder, meson two plaquettes apart: the bare string must be
        // the unit vector on the assignment that raises exactly the
        // straight-line links, located through the enumerated index
        let spec = grid(2, 3);
        let plus = spec.site_index(&[0, 0]);
        let minus = spec.site_index(&[0, 2]);
        let sector = enumerate_sector(
            &spec,
            GaugeGroup::Z2,
            &ChargeConfig::meson(plus, minus),
            100_000,
        )
        .unwrap();
        let path = straight_path(&spec, plus, minus).unwrap();
        let state = sector.string_state(&path).unwrap();

        let mut expected = vec![0i32; spec.num_links()];
        for pair in [(plus, spec.site_index(&[0, 1])), (spec.site_index(&[0, 1]), minus)] {
            let (link, _) = spec.link_between(pair.0, pair.1).unwrap();
            expected[link] = 1;
        }
        let idx = sector.position(&expected).expect("straight string in basis");
        for (i, amp) in state.iter().enumerate() {
            let want = if i == idx { 1.0 } else { 0.0 };
            assert!((amp.re - want).abs() < 1e-15 && amp.im == 0.0);
        }
    }

    #[test]
    fn z2_string_orientation_free() {
        let spec = chain(4);
        let sector =
            enumerate_sector(&spec, GaugeGroup::Z2, &ChargeConfig::meson(0, 3), 1000).unwrap();
        let forward = straight_path(&spec, 0, 3).unwrap();
        let backward = straight_path(&spec, 3, 0).unwrap();
        assert!(sector.string_state(&forward).is_ok());
        assert!(sector.string_state(&backward).is_ok());
    }
}
