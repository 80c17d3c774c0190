//! Tables behind the command-line experiments.
//!
//! Every table serializes to CSV with a `#`-prefixed metadata header, a
//! column-name row and values printed with 12 significant digits. Nothing
//! time- or host-dependent is written unless a timestamp is supplied, so
//! identical inputs give byte-identical files.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, try_map_indexed, Execution};
use crate::families::{
    discord_low_family, discord_up_family, make_low_family, make_up_family, StsFamilyPoint,
};
use crate::gaussian::{
    purity, symplectic_invariants, to_standard_form, validate_physical, SeedParams, StandardForm,
    SymplecticInvariants, TwoModeCovariance,
};
use crate::measures::{
    ggd_alternative_warm, ggd_numeric, ggd_sts_closed, gqc_invariant, gqc_standard_form,
    MeasureResult, OptimizerOptions, ProductParams, STS_TOL,
};
use crate::sampling::{draw_rng, random_family_point, sample_general, sample_sts, SamplerConfig};

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Header block written at the top of every output file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunMetadata {
    pub command: String,
    pub seed: Option<u64>,
    pub sampler: Option<String>,
    pub tolerances: Vec<(String, String)>,
    pub notes: Vec<(String, String)>,
    pub timestamp: Option<String>,
}

impl RunMetadata {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn tolerance(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.tolerances.push((key.to_string(), value.to_string()));
        self
    }

    pub fn note(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    pub fn header(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| {
            out.push_str("# ");
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v.replace('\n', " "));
            out.push('\n');
        };
        line("command", &self.command);
        line("version", CODE_VERSION);
        line(
            "seed",
            &self
                .seed
                .map_or_else(|| "none".to_string(), |s| s.to_string()),
        );
        if let Some(s) = &self.sampler {
            line("sampler", s);
        }
        for (k, v) in &self.tolerances {
            line(&format!("tol.{k}"), v);
        }
        for (k, v) in &self.notes {
            line(k, v);
        }
        line("timestamp", self.timestamp.as_deref().unwrap_or("omitted"));
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => f.write_str(&format_number(*x)),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Empty => Ok(()),
        }
    }
}

/// Scientific notation with 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        // Collapse -0 so sign noise never reaches the file.
        return format!("{:.11e}", 0.0);
    }
    format!("{x:.11e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub metadata: RunMetadata,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.metadata.header();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Numeric values of a column, `None` for empty or boolean cells.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[idx] {
                    Cell::Num(x) => Some(x),
                    _ => None,
                })
                .collect(),
        )
    }
}

// ---------------------------------------------------------------- fig 1

#[derive(Clone, Debug)]
pub struct Fig1Config {
    pub n_states: usize,
    pub sampler: SamplerConfig,
    pub optimizer: OptimizerOptions,
    pub exec: Execution,
}

#[derive(Clone, Copy, Debug)]
pub struct Fig1Row {
    pub state: StandardForm,
    pub ggd: MeasureResult<SeedParams>,
    pub alternative: MeasureResult<ProductParams>,
}

impl Fig1Row {
    pub fn converged(&self) -> bool {
        self.ggd.converged && self.alternative.converged
    }
}

/// Both Gaussian extensions of the geometric discord on random states.
pub fn fig1_rows(cfg: &Fig1Config) -> Result<Vec<Fig1Row>> {
    if cfg.n_states == 0 {
        return Err(Error::Config("fig1 needs at least one state".into()));
    }
    let states = sample_general(&cfg.sampler, cfg.n_states, cfg.exec)?;
    try_map_indexed(states.len(), cfg.exec, |i| {
        let state = states[i];
        let ggd = ggd_numeric(&state, &cfg.optimizer)?;
        let alternative = ggd_alternative_warm(&state, &cfg.optimizer, &ggd.argmin)?;
        Ok(Fig1Row {
            state,
            ggd,
            alternative,
        })
    })
}

pub fn fig1_table(rows: &[Fig1Row], metadata: RunMetadata) -> Table {
    Table {
        metadata,
        columns: vec!["a", "b", "c", "d", "ggd", "ggd_alternative", "converged"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Num(r.state.a),
                    Cell::Num(r.state.b),
                    Cell::Num(r.state.c),
                    Cell::Num(r.state.d),
                    Cell::Num(r.ggd.value),
                    Cell::Num(r.alternative.value),
                    Cell::Bool(r.converged()),
                ]
            })
            .collect(),
    }
}

// ---------------------------------------------------------- fig 2 lower

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerPoint {
    pub energy_cap: f64,
    pub a: f64,
    pub epsilon: f64,
    pub discord: f64,
    pub ggd: f64,
}

/// The `b = 1 + ε` family at `a = N` for each `N = 2^k`, swept over
/// `grid` equally spaced `ε ∈ [0, N-1]`. Curves come out in the order of
/// `k_list`.
pub fn fig2_lower(k_list: &[u32], grid: usize) -> Result<Vec<LowerPoint>> {
    if k_list.is_empty() {
        return Err(Error::Config("fig2-lower needs at least one k".into()));
    }
    if grid < 2 {
        return Err(Error::Config(
            "fig2-lower grid needs at least 2 points".into(),
        ));
    }
    let mut out = Vec::with_capacity(k_list.len() * grid);
    for &k in k_list {
        if k > 60 {
            return Err(Error::Config(format!("k = {k} is too large")));
        }
        let cap = 2f64.powi(k as i32);
        for i in 0..grid {
            let epsilon = (cap - 1.0) * i as f64 / (grid - 1) as f64;
            let point = make_low_family(cap, epsilon)?;
            out.push(LowerPoint {
                energy_cap: cap,
                a: cap,
                epsilon,
                discord: discord_low_family(cap, epsilon)?,
                ggd: point.ggd(),
            });
        }
    }
    Ok(out)
}

pub fn fig2_lower_table(points: &[LowerPoint], metadata: RunMetadata) -> Table {
    Table {
        metadata,
        columns: vec!["N", "a", "epsilon", "discord", "ggd"],
        rows: points
            .iter()
            .map(|p| {
                vec![
                    Cell::Num(p.energy_cap),
                    Cell::Num(p.a),
                    Cell::Num(p.epsilon),
                    Cell::Num(p.discord),
                    Cell::Num(p.ggd),
                ]
            })
            .collect(),
    }
}

/// GGD on the lower boundary under cap `N` at the given discord, or `None`
/// when the discord exceeds what the boundary family reaches.
pub fn lower_bound_at(energy_cap: f64, discord: f64) -> Option<f64> {
    let top = energy_cap - 1.0;
    let d_top = discord_low_family(energy_cap, top).ok()?;
    if discord <= 0.0 {
        return Some(0.0);
    }
    if discord > d_top {
        return None;
    }
    let (mut lo, mut hi) = (0.0, top);
    while hi - lo > 1e-13 * top.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if discord_low_family(energy_cap, mid).ok()? < discord {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The boundary GGD is evaluated at the bracket end with the larger discord.
    make_low_family(energy_cap, hi).ok().map(|p| p.ggd())
}

// ---------------------------------------------------------- fig 2 upper

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperSearch {
    /// Largest `b` considered when solving for the contour.
    pub b_max: f64,
    /// `ε` is searched in `[0, eps_max]`.
    pub eps_max: f64,
    /// Coarse log-spaced scan points in `ε` before golden-section refinement.
    pub scan_points: usize,
    /// Bisection tolerance on `b`, relative to `max(1, b)`.
    pub b_tol: f64,
    /// Golden-section tolerance on `ε`.
    pub eps_tol: f64,
}

impl Default for UpperSearch {
    fn default() -> Self {
        Self {
            b_max: 1e9,
            eps_max: 1e3,
            scan_points: 200,
            b_tol: 1e-10,
            eps_tol: 1e-8,
        }
    }
}

impl UpperSearch {
    pub fn describe(&self) -> String {
        format!(
            "contour b by bisection to {} (relative), eps by log scan ({} points in [0, {}]) + golden section to {}, b <= {}",
            self.b_tol, self.scan_points, self.eps_max, self.eps_tol, self.b_max
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperPoint {
    pub target_discord: f64,
    pub b: f64,
    pub epsilon: f64,
    pub ggd_max: f64,
    pub reachable: bool,
}

/// Checks on a grid that the `a = b - ε` discord increases with `b` at
/// fixed `ε`, which the contour bisection relies on.
pub fn verify_up_family_monotone() -> Result<()> {
    for &eps in &[0.0, 1e-3, 0.5, 2.0, 10.0, 100.0] {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=400 {
            let b = 1.0 + eps + (1e4 * (i as f64 / 400.0)).powf(1.5) / 1e4;
            let d = discord_up_family(b, eps)?;
            if d < prev {
                return Err(Error::Consistency(format!(
                    "discord of the a = b - eps family decreases in b at eps = {eps}, b = {b}"
                )));
            }
            prev = d;
        }
    }
    Ok(())
}

/// `b` with `discord_up_family(b, ε) = target`, or `None` if it exceeds
/// `b_max`.
pub fn solve_contour_b(target: f64, epsilon: f64, search: &UpperSearch) -> Option<f64> {
    let mut lo = 1.0 + epsilon;
    let mut hi = search.b_max;
    if discord_up_family(hi, epsilon).ok()? < target {
        return None;
    }
    if discord_up_family(lo, epsilon).ok()? >= target {
        return Some(lo);
    }
    while hi - lo > search.b_tol * lo.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if discord_up_family(mid, epsilon).ok()? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn contour_ggd(target: f64, epsilon: f64, search: &UpperSearch) -> Option<(f64, f64)> {
    let b = solve_contour_b(target, epsilon, search)?;
    let eps = epsilon.min(b - 1.0);
    let p = make_up_family(b, eps).ok()?;
    Some((p.ggd(), b))
}

/// Maximum GGD along the constant-discord contour of the `a = b - ε` family.
pub fn upper_point(target: f64, search: &UpperSearch) -> UpperPoint {
    let unreachable = UpperPoint {
        target_discord: target,
        b: f64::NAN,
        epsilon: f64::NAN,
        ggd_max: f64::NAN,
        reachable: false,
    };
    if !(target > 0.0) {
        return unreachable;
    }
    let n = search.scan_points.max(3);
    let lo_exp = -10.0f64;
    let hi_exp = search.eps_max.log10();
    let mut grid = vec![0.0];
    grid.extend((0..n).map(|i| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (n - 1) as f64)));

    let values: Vec<Option<(f64, f64)>> = grid
        .iter()
        .map(|&e| contour_ggd(target, e, search))
        .collect();
    let best = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|(g, b)| (i, g, b)))
        .fold(None, |acc: Option<(usize, f64, f64)>, x| match acc {
            Some(a) if a.1 >= x.1 => Some(a),
            _ => Some(x),
        });
    let Some((k, mut g_best, mut b_best)) = best else {
        return unreachable;
    };
    let mut e_best = grid[k];

    // Golden-section refinement on the bracket around the coarse maximum.
    let mut lo = grid[k.saturating_sub(1)];
    let mut hi = grid[(k + 1).min(grid.len() - 1)];
    let objective = |e: f64| contour_ggd(target, e, search).map_or(f64::NEG_INFINITY, |(g, _)| g);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while hi - lo > search.eps_tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        }
    }
    let e_mid = 0.5 * (lo + hi);
    if let Some((g, b)) = contour_ggd(target, e_mid, search) {
        if g > g_best {
            g_best = g;
            b_best = b;
            e_best = e_mid;
        }
    }
    UpperPoint {
        target_discord: target,
        b: b_best,
        epsilon: e_best,
        ggd_max: g_best,
        reachable: true,
    }
}

/// The upper boundary at each target discord. No energy cap enters.
pub fn fig2_upper(
    targets: &[f64],
    search: &UpperSearch,
    exec: Execution,
) -> Result<Vec<UpperPoint>> {
    if targets.is_empty() {
        return Err(Error::Config("fig2-upper needs at least one target".into()));
    }
    if let Some(t) = targets.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Err(Error::Config(format!(
            "target discord {t} must be positive"
        )));
    }
    verify_up_family_monotone()?;
    Ok(map_indexed(targets.len(), exec, |i| {
        upper_point(targets[i], search)
    }))
}

pub fn fig2_upper_table(points: &[UpperPoint], metadata: RunMetadata) -> Table {
    let num = |x: f64, ok: bool| if ok { Cell::Num(x) } else { Cell::Empty };
    Table {
        metadata,
        columns: vec!["target_discord", "b", "epsilon", "ggd_max", "reachable"],
        rows: points
            .iter()
            .map(|p| {
                vec![
                    Cell::Num(p.target_discord),
                    num(p.b, p.reachable),
                    num(p.epsilon, p.reachable),
                    num(p.ggd_max, p.reachable),
                    Cell::Bool(p.reachable),
                ]
            })
            .collect(),
    }
}

/// Evenly spaced targets in `(0, d_max]`.
pub fn default_upper_targets(d_max: f64, points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| d_max * i as f64 / points as f64)
        .collect()
}

// ---------------------------------------------------------- fig 2 cloud

/// Relative tolerance for recognizing a sampled state as a family member.
pub const FAMILY_MATCH_TOL: f64 = 1e-9;

/// Discord of a squeezed thermal state that lies on one of the two
/// closed-form families, else `None`.
pub fn family_discord(a: f64, b: f64, c: f64) -> Option<f64> {
    let c2 = c * c;
    let close = |x: f64, y: f64| (x - y).abs() <= FAMILY_MATCH_TOL * x.abs().max(y.abs()).max(1.0);
    let eps_low = b - 1.0;
    if eps_low >= 0.0 && eps_low <= a - 1.0 && close(c2, (a + 1.0) * eps_low) {
        return discord_low_family(a, eps_low).ok();
    }
    let eps_up = b - a;
    if eps_up >= 0.0 && close(c2, (b + 1.0) * (a - 1.0)) {
        return discord_up_family(b, eps_up).ok();
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloudPoint {
    pub point: StsFamilyPoint,
    pub ggd: f64,
    pub discord: Option<f64>,
}

/// `n_states` uniform squeezed thermal states under cap `N`, followed by
/// `family_states` states drawn on the two closed-form families (streams
/// `n_states..`). The discord column is filled only for family members.
pub fn fig2_cloud(
    n_states: usize,
    energy_cap: f64,
    seed: u64,
    family_states: usize,
    exec: Execution,
) -> Result<Vec<CloudPoint>> {
    let cfg = SamplerConfig::squeezed_thermal(seed, energy_cap);
    let mut points = sample_sts(&cfg, n_states, exec)?;
    let extra = try_map_indexed(family_states, exec, |j| {
        let stream = (n_states + j) as u64;
        random_family_point(energy_cap, j as u64, &mut draw_rng(seed, stream))
    })?;
    points.extend(extra);
    Ok(map_indexed(points.len(), exec, |i| {
        let p = points[i];
        CloudPoint {
            point: p,
            ggd: p.ggd(),
            discord: family_discord(p.a, p.b, p.c),
        }
    }))
}

pub fn fig2_cloud_table(points: &[CloudPoint], metadata: RunMetadata) -> Table {
    Table {
        metadata,
        columns: vec!["a", "b", "c", "ggd", "discord_if_on_family"],
        rows: points
            .iter()
            .map(|p| {
                vec![
                    Cell::Num(p.point.a),
                    Cell::Num(p.point.b),
                    Cell::Num(p.point.c),
                    Cell::Num(p.ggd),
                    p.discord.map_or(Cell::Empty, Cell::Num),
                ]
            })
            .collect(),
    }
}

// ---------------------------------------------------------- single state

#[derive(Clone, Debug)]
pub struct StateReport {
    pub standard_form: StandardForm,
    pub invariants: SymplecticInvariants,
    pub purity: f64,
    pub ggd_closed: Option<(f64, SeedParams)>,
    pub ggd_numeric: Option<MeasureResult<SeedParams>>,
    pub gqc: f64,
    pub gqc_from_invariants: f64,
}

impl StateReport {
    /// The reported GGD: closed form when available, numeric otherwise.
    pub fn ggd(&self) -> f64 {
        match (&self.ggd_closed, &self.ggd_numeric) {
            (Some((v, _)), _) => *v,
            (None, Some(r)) => r.value,
            (None, None) => f64::NAN,
        }
    }

    pub fn converged(&self) -> bool {
        self.ggd_numeric.as_ref().is_none_or(|r| r.converged)
    }
}

/// All measures for one state. The numeric GGD runs when the state is not
/// squeezed thermal, or always when `force_numeric` is set.
pub fn state_report(
    sigma: &TwoModeCovariance,
    force_numeric: bool,
    opts: &OptimizerOptions,
    tol: f64,
) -> Result<StateReport> {
    let check = validate_physical(sigma, tol);
    if !check.physical {
        return Err(Error::Unphysical {
            nu_minus: check.nu_minus,
        });
    }
    let sf = to_standard_form(sigma)?;
    let ggd_closed = if sf.is_squeezed_thermal(STS_TOL) {
        Some(ggd_sts_closed(&sf)?)
    } else {
        None
    };
    let ggd_numeric = if ggd_closed.is_none() || force_numeric {
        Some(ggd_numeric(&sf, opts)?)
    } else {
        None
    };
    let invariants = symplectic_invariants(sigma);
    Ok(StateReport {
        standard_form: sf,
        invariants,
        purity: purity(sigma),
        ggd_closed,
        ggd_numeric,
        gqc: gqc_standard_form(&sf),
        gqc_from_invariants: gqc_invariant(&invariants),
    })
}

impl fmt::Display for StateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.standard_form;
        let inv = &self.invariants;
        writeln!(f, "a = {}", format_number(s.a))?;
        writeln!(f, "b = {}", format_number(s.b))?;
        writeln!(f, "c = {}", format_number(s.c))?;
        writeln!(f, "d = {}", format_number(s.d))?;
        writeln!(f, "det_alpha = {}", format_number(inv.det_alpha))?;
        writeln!(f, "det_beta = {}", format_number(inv.det_beta))?;
        writeln!(f, "det_gamma = {}", format_number(inv.det_gamma))?;
        writeln!(f, "det_sigma = {}", format_number(inv.det_sigma))?;
        writeln!(f, "nu_minus = {}", format_number(inv.nu_minus))?;
        writeln!(f, "nu_plus = {}", format_number(inv.nu_plus))?;
        writeln!(f, "purity = {}", format_number(self.purity))?;
        if let Some((v, p)) = &self.ggd_closed {
            writeln!(f, "ggd_closed = {}", format_number(*v))?;
            writeln!(f, "optimal_seed_closed = {p}")?;
        }
        if let Some(r) = &self.ggd_numeric {
            writeln!(f, "ggd_numeric = {}", format_number(r.value))?;
            writeln!(f, "optimal_seed_numeric = {}", r.argmin)?;
            writeln!(
                f,
                "optimizer = converged={} evaluations={} restarts={}",
                r.converged, r.evaluations, r.restarts_used
            )?;
        }
        writeln!(f, "ggd = {}", format_number(self.ggd()))?;
        writeln!(f, "gqc = {}", format_number(self.gqc))?;
        write!(
            f,
            "gqc_invariant = {}",
            format_number(self.gqc_from_invariants)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::PHYSICAL_TOL;

    #[test]
    fn number_format_has_twelve_digits() {
        assert_eq!(format_number(0.5), "5.00000000000e-1");
        assert_eq!(format_number(-0.0), "0.00000000000e0");
        assert_eq!(format_number(12.0), "1.20000000000e1");
    }

    #[test]
    fn header_is_deterministic_without_timestamp() {
        let m = RunMetadata::new("ggd fig1 --n 3").tolerance("xtol", 1e-9);
        assert_eq!(m.header(), m.clone().header());
        assert!(m.header().contains("# timestamp: omitted"));
        assert!(m.header().starts_with("# command: ggd fig1 --n 3\n"));
    }

    #[test]
    fn lower_curves_start_at_origin_and_shift_right() {
        let pts = fig2_lower(&[1, 2, 3, 4], 50).unwrap();
        for chunk in pts.chunks(50) {
            assert_eq!(chunk[0].discord, 0.0);
            assert_eq!(chunk[0].ggd, 0.0);
        }
        // At a common GGD level the larger cap reaches larger discord.
        for w in [2.0f64, 4.0, 8.0].windows(2) {
            let (small, large) = (w[0], w[1]);
            for &d in &[0.1, 0.3, 0.6] {
                if let (Some(gs), Some(gl)) = (lower_bound_at(small, d), lower_bound_at(large, d)) {
                    assert!(gl <= gs + 1e-12, "N={large} above N={small} at D={d}");
                }
            }
        }
    }

    #[test]
    fn lower_bound_inverts_the_family() {
        let p = make_low_family(25.0, 7.0).unwrap();
        let d = p.discord().unwrap();
        let g = lower_bound_at(25.0, d).unwrap();
        assert!((g - p.ggd()).abs() < 1e-9);
        assert!(lower_bound_at(25.0, 100.0).is_none());
    }

    #[test]
    fn upper_point_for_strong_correlations_is_pure() {
        let p = upper_point(6.0, &UpperSearch::default());
        assert!(p.reachable);
        assert!(p.ggd_max > 0.99);
        assert!(p.epsilon < 1e-6, "{p:?}");
        let d = discord_up_family(p.b, p.epsilon).unwrap();
        assert!((d - 6.0).abs() < 1e-8);
    }

    #[test]
    fn upper_point_unreachable_target_is_flagged() {
        let tight = UpperSearch {
            b_max: 3.0,
            ..Default::default()
        };
        let p = upper_point(5.0, &tight);
        assert!(!p.reachable);
        assert!(fig2_upper(&[0.0], &UpperSearch::default(), Execution::Sequential).is_err());
    }

    #[test]
    fn family_recognition() {
        let low = make_low_family(10.0, 3.0).unwrap();
        assert_eq!(family_discord(low.a, low.b, low.c), low.discord());
        let up = make_up_family(10.0, 3.0).unwrap();
        let got = family_discord(up.a, up.b, up.c).unwrap();
        assert!((got - up.discord().unwrap()).abs() < 1e-12);
        assert_eq!(family_discord(5.0, 4.0, 1.234), None);
    }

    #[test]
    fn cloud_unit_cap_is_the_origin() {
        for p in fig2_cloud(20, 1.0, 1, 0, Execution::Sequential).unwrap() {
            assert_eq!(p.ggd, 0.0);
        }
    }

    #[test]
    fn state_report_examples() {
        let opts = OptimizerOptions::default();
        let vac = state_report(&TwoModeCovariance::vacuum(), true, &opts, PHYSICAL_TOL).unwrap();
        assert!(vac.ggd() <= 1e-10);
        assert_eq!(vac.gqc, 0.0);
        let c = 1.732_050_8;
        let tmss = TwoModeCovariance::from_standard_entries(2.0, 2.0, c, -c);
        let r = state_report(&tmss, false, &opts, PHYSICAL_TOL).unwrap();
        assert!((r.ggd() - 0.583_00).abs() < 1e-5);
        assert!((r.gqc - 12.0).abs() < 1e-6);
        let bad = TwoModeCovariance::from_standard_entries(1.0, 5.0, 1.0, 1.0);
        match state_report(&bad, false, &opts, PHYSICAL_TOL) {
            Err(Error::Unphysical { nu_minus }) => assert!((nu_minus - 0.764).abs() < 1e-3),
            other => panic!("{other:?}"),
        }
    }
}
