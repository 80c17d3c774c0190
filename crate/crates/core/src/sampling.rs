//! Seeded random physical two-mode Gaussian states.
//!
//! Draw `i` of a run with seed `s` uses its own ChaCha8 generator seeded
//! from `s` with stream number `i`. Any subset of draws can therefore be
//! produced independently, in any order and on any thread, and the merged
//! result is identical to a serial run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::families::{make_low_family, make_sts, make_up_family, StsFamilyPoint};
use crate::gaussian::{StandardForm, PHYSICAL_TOL};

/// Recorded in output metadata.
pub const RNG_DESCRIPTION: &str =
    "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = draw index";

/// Default parameter interval when no energy cap is set.
pub const DEFAULT_RANGE: (f64, f64) = (1.0, 50.0);

/// Consecutive rejections tolerated before a configuration is declared
/// unusable.
pub const REJECTION_WINDOW: usize = 1000;

/// Bisection tolerance on `c` for the squeezed thermal boundary.
pub const C_MAX_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateFamily {
    General,
    SqueezedThermal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub energy_cap: Option<f64>,
    /// `None` means [`DEFAULT_RANGE`], or `[1, N]` under an energy cap.
    pub a_range: Option<(f64, f64)>,
    pub b_range: Option<(f64, f64)>,
    pub family: StateFamily,
}

impl SamplerConfig {
    pub fn general(seed: u64) -> Self {
        Self {
            seed,
            energy_cap: None,
            a_range: None,
            b_range: None,
            family: StateFamily::General,
        }
    }

    pub fn squeezed_thermal(seed: u64, energy_cap: f64) -> Self {
        Self {
            seed,
            energy_cap: Some(energy_cap),
            a_range: None,
            b_range: None,
            family: StateFamily::SqueezedThermal,
        }
    }

    fn effective(&self, range: Option<(f64, f64)>, name: &str) -> Result<(f64, f64)> {
        let (mut lo, mut hi) = match (range, self.energy_cap) {
            (Some(r), _) => r,
            (None, Some(cap)) => (1.0, cap),
            (None, None) => DEFAULT_RANGE,
        };
        if let Some(cap) = self.energy_cap {
            if !(cap >= 1.0) {
                return Err(Error::Config(format!("energy cap {cap} must be >= 1")));
            }
            lo = lo.max(1.0);
            hi = hi.min(cap);
        }
        lo = lo.max(1.0);
        if !(lo <= hi) || !hi.is_finite() {
            return Err(Error::Config(format!("{name} range [{lo}, {hi}] is empty")));
        }
        Ok((lo, hi))
    }

    /// Ranges actually sampled, after clipping to `[1, N]`.
    pub fn ranges(&self) -> Result<((f64, f64), (f64, f64))> {
        Ok((
            self.effective(self.a_range, "a")?,
            self.effective(self.b_range, "b")?,
        ))
    }

    pub fn describe(&self) -> String {
        let ranges = match self.ranges() {
            Ok((a, b)) => format!("a in [{}, {}], b in [{}, {}]", a.0, a.1, b.0, b.1),
            Err(e) => e.to_string(),
        };
        let cap = self
            .energy_cap
            .map_or_else(|| "none".to_string(), |n| n.to_string());
        let family = match self.family {
            StateFamily::General => {
                "general: c ~ U[0, sqrt(ab-1)], d ~ U[-c, c], rejection on physicality"
            }
            StateFamily::SqueezedThermal => "squeezed thermal: c ~ U[0, c_max(a,b)], d = -c",
        };
        format!(
            "seed={}; energy_cap={cap}; {ranges}; {family}; rng={RNG_DESCRIPTION}",
            self.seed
        )
    }
}

/// Generator for draw `index` of a run seeded with `seed`.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// `a, b` uniform in range, `c` uniform in `[0, √(ab-1)]`, `d` uniform in
/// `[-c, c]`, redrawn until physical.
pub fn random_general_state(cfg: &SamplerConfig, rng: &mut ChaCha8Rng) -> Result<StandardForm> {
    let (a_range, b_range) = cfg.ranges()?;
    for _ in 0..REJECTION_WINDOW {
        let a = uniform(rng, a_range);
        let b = uniform(rng, b_range);
        let c = uniform(rng, (0.0, (a * b - 1.0).max(0.0).sqrt()));
        let d = uniform(rng, (-c, c));
        if let Ok(sf) = StandardForm::new(a, b, c, d) {
            return Ok(sf);
        }
    }
    Err(Error::SamplerStalled {
        rejected: REJECTION_WINDOW,
        window: REJECTION_WINDOW,
    })
}

fn sts_physical(a: f64, b: f64, c: f64) -> bool {
    StandardForm { a, b, c, d: -c }.is_physical(PHYSICAL_TOL)
}

/// Largest `c` (to [`C_MAX_TOL`]) for which `(a, b, c, -c)` is physical.
pub fn sts_c_max(a: f64, b: f64) -> f64 {
    let mut hi = (a * b - 1.0).max(0.0).sqrt();
    if sts_physical(a, b, hi) {
        return hi;
    }
    let mut lo = 0.0;
    while hi - lo > C_MAX_TOL {
        let mid = 0.5 * (lo + hi);
        if sts_physical(a, b, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `a, b` uniform in `[1, N]`, `c` uniform in `[0, c_max(a, b)]`, `d = -c`.
pub fn random_sts(cfg: &SamplerConfig, rng: &mut ChaCha8Rng) -> Result<StsFamilyPoint> {
    if cfg.energy_cap.is_none() {
        return Err(Error::Config(
            "squeezed thermal sampling needs an energy cap".into(),
        ));
    }
    let (a_range, b_range) = cfg.ranges()?;
    for _ in 0..REJECTION_WINDOW {
        let a = uniform(rng, a_range);
        let b = uniform(rng, b_range);
        let c = uniform(rng, (0.0, sts_c_max(a, b)));
        if let Ok(p) = make_sts(a, b, c, -1.0) {
            return Ok(p);
        }
    }
    Err(Error::SamplerStalled {
        rejected: REJECTION_WINDOW,
        window: REJECTION_WINDOW,
    })
}

/// A state on one of the two closed-form families under cap `N`: even
/// indices on the `b = 1 + ε` family, odd on the `a = b - ε` family.
pub fn random_family_point(
    energy_cap: f64,
    index: u64,
    rng: &mut ChaCha8Rng,
) -> Result<StsFamilyPoint> {
    if !(energy_cap >= 1.0) {
        return Err(Error::Config(format!(
            "energy cap {energy_cap} must be >= 1"
        )));
    }
    let top = uniform(rng, (1.0, energy_cap));
    let epsilon = uniform(rng, (0.0, top - 1.0));
    if index.is_multiple_of(2) {
        make_low_family(top, epsilon)
    } else {
        make_up_family(top, epsilon)
    }
}

pub fn sample_general(cfg: &SamplerConfig, n: usize, exec: Execution) -> Result<Vec<StandardForm>> {
    cfg.ranges()?;
    try_map_indexed(n, exec, |i| {
        random_general_state(cfg, &mut draw_rng(cfg.seed, i as u64))
    })
}

pub fn sample_sts(cfg: &SamplerConfig, n: usize, exec: Execution) -> Result<Vec<StsFamilyPoint>> {
    cfg.ranges()?;
    try_map_indexed(n, exec, |i| {
        random_sts(cfg, &mut draw_rng(cfg.seed, i as u64))
    })
}

pub fn sample_family_points(
    energy_cap: f64,
    seed: u64,
    n: usize,
    exec: Execution,
) -> Result<Vec<StsFamilyPoint>> {
    try_map_indexed(n, exec, |i| {
        random_family_point(energy_cap, i as u64, &mut draw_rng(seed, i as u64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::mean_energy_per_mode;

    #[test]
    fn unit_ranges_give_vacuum() {
        let cfg = SamplerConfig {
            a_range: Some((1.0, 1.0)),
            b_range: Some((1.0, 1.0)),
            ..SamplerConfig::general(7)
        };
        for s in sample_general(&cfg, 50, Execution::Sequential).unwrap() {
            assert_eq!(s, StandardForm::vacuum());
        }
    }

    #[test]
    fn unit_cap_gives_vacuum() {
        let cfg = SamplerConfig::squeezed_thermal(3, 1.0);
        for p in sample_sts(&cfg, 50, Execution::Sequential).unwrap() {
            assert_eq!((p.a, p.b, p.c), (1.0, 1.0, 0.0));
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let cfg = SamplerConfig::general(11);
        let x = sample_general(&cfg, 64, Execution::Sequential).unwrap();
        let y = sample_general(&cfg, 64, Execution::Parallel).unwrap();
        assert_eq!(x, y);
        let other = sample_general(&SamplerConfig::general(12), 64, Execution::Sequential).unwrap();
        assert_ne!(x, other);
        // Any single draw can be regenerated on its own.
        assert_eq!(
            random_general_state(&cfg, &mut draw_rng(11, 40)).unwrap(),
            x[40]
        );
    }

    #[test]
    fn sts_draws_respect_cap() {
        let cfg = SamplerConfig::squeezed_thermal(5, 25.0);
        for p in sample_sts(&cfg, 2000, Execution::Parallel).unwrap() {
            let (ea, eb) = mean_energy_per_mode(&p.standard_form().to_covariance());
            assert!(ea <= 25.0 && eb <= 25.0);
            assert_eq!(p.sign_d, -1.0);
        }
    }

    #[test]
    fn c_max_is_on_the_boundary() {
        for &(a, b) in &[(2.0, 2.0), (3.0, 7.0), (24.0, 1.5), (1.0, 10.0)] {
            let c = sts_c_max(a, b);
            assert!(sts_physical(a, b, c));
            if c < (a * b - 1.0).sqrt() - 1e-9 {
                assert!(!sts_physical(a, b, c + 1e-6 * c.max(1.0)));
                let sf = StandardForm { a, b, c, d: -c };
                let nu = crate::gaussian::validate_physical(&sf.to_covariance(), 0.0).nu_minus;
                assert!((nu - 1.0).abs() < 1e-8, "nu_minus = {nu}");
            }
        }
        assert!((sts_c_max(5.0, 5.0) - 24f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn config_errors() {
        let bad = SamplerConfig {
            a_range: Some((5.0, 2.0)),
            ..SamplerConfig::general(1)
        };
        assert!(matches!(
            sample_general(&bad, 1, Execution::Sequential),
            Err(Error::Config(_))
        ));
        let mut no_cap = SamplerConfig::squeezed_thermal(1, 10.0);
        no_cap.energy_cap = None;
        assert!(random_sts(&no_cap, &mut draw_rng(1, 0)).is_err());
        assert!(SamplerConfig::squeezed_thermal(1, 0.5).ranges().is_err());
    }

    #[test]
    fn family_points_alternate() {
        let pts = sample_family_points(25.0, 9, 10, Execution::Sequential).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let expected = if i % 2 == 0 {
                crate::families::FamilyKind::Low
            } else {
                crate::families::FamilyKind::Up
            };
            assert_eq!(p.kind, expected);
            assert!(p.discord().is_some());
            assert!(p.a <= 25.0 && p.b <= 25.0);
        }
    }
}
