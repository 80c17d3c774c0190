//! Hilbert-Schmidt and phase-space distance measures of correlations for
//! two-mode Gaussian states.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::gaussian::{
    det2, gaussian_overlap, local, log_det_pd4, posterior_covariance, seed_covariance, SeedParams,
    StandardForm, SymplecticInvariants, TwoModeCovariance,
};
use crate::optimize::{multistart, MultiStartMinimum, SimplexOptions};

/// Residuals below zero by at most this much are rounding noise.
pub const NEGATIVE_SLACK: f64 = 1e-12;
/// Tolerance on `|d| = c` when dispatching to the squeezed thermal closed form.
pub const STS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerOptions {
    /// Number of multi-starts, including the deterministic ones.
    pub starts: usize,
    /// Seed for the random starting points.
    pub seed: u64,
    pub simplex: SimplexOptions,
    /// Squeezing box `[lambda_min, 1/lambda_min]`.
    pub lambda_min: f64,
    /// `m ≤ m_max_factor · max(a, b)`.
    pub m_max_factor: f64,
    /// Widen the box once when the optimum sits on its boundary.
    pub widen_on_boundary: bool,
}

/// Rounding level of the residuals, whose terms are overlaps of size at
/// most one. A simplex whose values agree to this is treated as converged.
pub const OBJECTIVE_NOISE: f64 = 1e-15;

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            seed: 0x5eed,
            simplex: SimplexOptions {
                ftol: OBJECTIVE_NOISE,
                ..Default::default()
            },
            lambda_min: 1e-3,
            m_max_factor: 1e3,
            widen_on_boundary: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureResult<P> {
    pub value: f64,
    pub argmin: P,
    pub converged: bool,
    pub evaluations: usize,
    pub restarts_used: usize,
}

/// Parameters of a product of two single-mode states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductParams {
    pub first: SeedParams,
    pub second: SeedParams,
}

fn clamp_residual(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_SLACK {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!(
            "squared distance evaluated to {value:e}"
        )))
    }
}

fn to_dyn(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(4, 4, m.iter().cloned())
}

/// Squared Hilbert-Schmidt distance between the state and the product of the
/// seed with the conditional state of mode A:
/// `tr ρ² + tr χ² - 2 tr ρχ`, each term an overlap of Gaussian states.
pub fn hs_residual(sf: &StandardForm, p: &SeedParams) -> Result<f64> {
    hs_residual_covariance(&sf.to_covariance(), p)
}

/// [`hs_residual`] for a covariance that need not be in standard form.
pub fn hs_residual_covariance(sigma: &TwoModeCovariance, p: &SeedParams) -> Result<f64> {
    let seed = seed_covariance(p);
    let post = posterior_covariance(sigma, &seed)?;
    let chi = to_dyn(TwoModeCovariance::product(&post, &seed).matrix());
    let rho = to_dyn(sigma.matrix());
    let value = gaussian_overlap(&rho, &rho)? + gaussian_overlap(&chi, &chi)?
        - 2.0 * gaussian_overlap(&rho, &chi)?;
    clamp_residual(value)
}

/// The same residual at `θ = 0`, written out in the standard-form entries.
pub fn hs_residual_theta0(sf: &StandardForm, m: f64, lambda: f64) -> Result<f64> {
    if !(m >= 1.0) {
        return Err(domain("m", m, "m >= 1"));
    }
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "lambda > 0"));
    }
    let StandardForm { a, b, c, d } = *sf;
    let l = lambda;
    let x = (a * (b + l * m) - c * c) * (a * (b * l + m) - d * d * l);
    let t1 = 1.0 / (m * m * x / ((b * l + m) * (b + l * m))).sqrt();
    let t2 = -4.0 / (x / l).sqrt();
    let t3 = 1.0 / ((a * b - c * c) * (a * b - d * d)).sqrt();
    clamp_residual(t1 + t2 + t3)
}

/// Precomputed pieces of the residual for repeated evaluation inside the
/// optimizer.
struct Kernel {
    sigma: Matrix4<f64>,
    alpha: Matrix2<f64>,
    beta: Matrix2<f64>,
    gamma: Matrix2<f64>,
    state_term: f64,
}

impl Kernel {
    fn new(sigma: &TwoModeCovariance) -> Result<Self> {
        let log_det = log_det_pd4(sigma.matrix())
            .ok_or_else(|| Error::Degenerate("covariance is not positive definite".into()))?;
        Ok(Self {
            sigma: *sigma.matrix(),
            alpha: sigma.alpha(),
            beta: sigma.beta(),
            gamma: sigma.gamma(),
            state_term: (-0.5 * log_det).exp(),
        })
    }

    /// `2 tr(ρ χ)` for χ with covariance `first ⊕ second`.
    fn cross_term(&self, first: &Matrix2<f64>, second: &Matrix2<f64>) -> f64 {
        let mean = (self.sigma + local(first, second)) * 0.5;
        match log_det_pd4(&mean) {
            Some(ld) => 2.0 * (-0.5 * ld).exp(),
            None => f64::NAN,
        }
    }

    fn ggd(&self, seed: &Matrix2<f64>, seed_det: f64) -> f64 {
        let shifted = self.beta + seed;
        let det_shifted = det2(&shifted);
        if !(det_shifted > 0.0) {
            return f64::NAN;
        }
        let inv = Matrix2::new(
            shifted[(1, 1)],
            -shifted[(0, 1)],
            -shifted[(1, 0)],
            shifted[(0, 0)],
        ) / det_shifted;
        let post = self.alpha - self.gamma * inv * self.gamma.transpose();
        let post = (post + post.transpose()) * 0.5;
        let det_post = det2(&post);
        if !(det_post > 0.0) {
            return f64::NAN;
        }
        let product_term = (-0.5 * (det_post.ln() + seed_det.ln())).exp();
        self.state_term + product_term - self.cross_term(&post, seed)
    }

    fn product(&self, first: &Matrix2<f64>, second: &Matrix2<f64>, det_product: f64) -> f64 {
        self.state_term + (-0.5 * det_product.ln()).exp() - self.cross_term(first, second)
    }
}

/// Box on the seed parameters. Coordinates are `(u, v, θ)` with
/// `m = 1 + u²` and `λ = e^v`, clamped into the box.
#[derive(Clone, Copy, Debug)]
struct SeedBox {
    m_max: f64,
    ln_lambda_max: f64,
}

impl SeedBox {
    fn new(sf: &StandardForm, opts: &OptimizerOptions) -> Self {
        Self {
            m_max: opts.m_max_factor * sf.a.max(sf.b).max(1.0),
            ln_lambda_max: -opts.lambda_min.ln(),
        }
    }

    fn widened(self) -> Self {
        Self {
            m_max: self.m_max * 1e3,
            ln_lambda_max: self.ln_lambda_max * 2.0,
        }
    }

    fn decode(&self, x: &[f64]) -> SeedParams {
        let m = (1.0 + x[0] * x[0]).min(self.m_max);
        let v = x[1].clamp(-self.ln_lambda_max, self.ln_lambda_max);
        SeedParams {
            m,
            lambda: v.exp(),
            theta: x[2].rem_euclid(std::f64::consts::PI),
        }
    }

    fn encode(p: &SeedParams) -> [f64; 3] {
        [(p.m - 1.0).max(0.0).sqrt(), p.lambda.ln(), p.theta]
    }

    fn touches(&self, p: &SeedParams) -> bool {
        p.m >= self.m_max * (1.0 - 1e-9) || p.lambda.ln().abs() >= self.ln_lambda_max * (1.0 - 1e-9)
    }
}

fn random_seed_coords(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 3] {
    let m = 1.0 + 2.0 * scale * rng.gen::<f64>();
    let v = 4.0 * rng.gen::<f64>() - 2.0;
    let theta = std::f64::consts::PI * rng.gen::<f64>();
    [(m - 1.0).sqrt(), v, theta]
}

fn seed_matrix(p: &SeedParams) -> Matrix2<f64> {
    *seed_covariance(p).matrix()
}

/// Runs `search` in the default box and, if its optimum touches a wall,
/// once more in a widened box.
fn with_widening<P, F>(
    sf: &StandardForm,
    opts: &OptimizerOptions,
    mut search: F,
) -> Result<MeasureResult<P>>
where
    F: FnMut(SeedBox) -> Result<(MeasureResult<P>, bool)>,
{
    let bounds = SeedBox::new(sf, opts);
    let (result, touched) = search(bounds)?;
    if touched && opts.widen_on_boundary {
        let (wide, _) = search(bounds.widened())?;
        let mut wide = wide;
        wide.evaluations += result.evaluations;
        wide.restarts_used += result.restarts_used;
        if wide.value <= result.value {
            return Ok(wide);
        }
        return Ok(MeasureResult {
            evaluations: wide.evaluations,
            restarts_used: wide.restarts_used,
            ..result
        });
    }
    Ok(result)
}

fn require_physical(sf: &StandardForm) -> Result<TwoModeCovariance> {
    if !sf.is_physical(crate::gaussian::PHYSICAL_TOL) {
        return Err(Error::Unphysical {
            nu_minus: sf.invariants().nu_minus,
        });
    }
    Ok(sf.to_covariance())
}

/// Gaussian geometric discord by direct minimization over the seed
/// `(m, λ, θ)`.
pub fn ggd_numeric(
    sf: &StandardForm,
    opts: &OptimizerOptions,
) -> Result<MeasureResult<SeedParams>> {
    let sigma = require_physical(sf)?;
    let kernel = Kernel::new(&sigma)?;
    with_widening(sf, opts, |bounds| {
        let objective = |x: &[f64]| {
            let p = bounds.decode(x);
            kernel.ggd(&seed_matrix(&p), p.m * p.m)
        };
        let mut starts = vec![
            vec![0.0, 0.0, 0.0],
            vec![(sf.b - 1.0).max(0.0).sqrt(), 0.0, 0.0],
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        while starts.len() < opts.starts.max(1) {
            starts.push(random_seed_coords(&mut rng, sf.b).to_vec());
        }
        starts.truncate(opts.starts.max(1));
        let run = multistart(objective, &starts, &opts.simplex);
        let argmin = bounds.decode(&run.best.x);
        let value = clamp_residual(kernel.ggd(&seed_matrix(&argmin), argmin.m * argmin.m))?;
        Ok((finish(value, argmin, &run), bounds.touches(&argmin)))
    })
}

fn finish<P>(value: f64, argmin: P, run: &MultiStartMinimum) -> MeasureResult<P> {
    MeasureResult {
        value,
        argmin,
        converged: run.best.converged,
        evaluations: run.evaluations,
        restarts_used: run.restarts,
    }
}

/// `1/(ab - c²) - 9/(√(4ab - 3c²) + √(ab))²`.
pub(crate) fn ggd_sts_value(a: f64, b: f64, c: f64) -> f64 {
    if c == 0.0 {
        // Product state.
        return 0.0;
    }
    let ab = a * b;
    let c2 = c * c;
    let root = (4.0 * ab - 3.0 * c2).sqrt() + ab.sqrt();
    (1.0 / (ab - c2) - 9.0 / (root * root)).max(0.0)
}

/// Closed-form Gaussian geometric discord of a squeezed thermal state
/// (`|d| = c`), attained by heterodyne detection with
/// `m* = √(ab) (√(4ab - 3c²) + √(ab)) / (3a)`.
pub fn ggd_sts_closed(sf: &StandardForm) -> Result<(f64, SeedParams)> {
    if !sf.is_squeezed_thermal(STS_TOL) {
        return Err(Error::Domain {
            name: "d",
            value: sf.d,
            expected: "|d| = c (use ggd_numeric for general states)",
        });
    }
    let StandardForm { a, b, c, .. } = *sf;
    let ab = a * b;
    let m_star = ab.sqrt() * ((4.0 * ab - 3.0 * c * c).sqrt() + ab.sqrt()) / (3.0 * a);
    Ok((
        ggd_sts_value(a, b, c),
        SeedParams::heterodyne(m_star.max(1.0))?,
    ))
}

/// Closed form when `|d| = c`, numeric minimization otherwise.
pub fn ggd(sf: &StandardForm, opts: &OptimizerOptions) -> Result<MeasureResult<SeedParams>> {
    match ggd_sts_closed(sf) {
        Ok((value, argmin)) => Ok(MeasureResult {
            value,
            argmin,
            converged: true,
            evaluations: 0,
            restarts_used: 0,
        }),
        Err(Error::Domain { .. }) => ggd_numeric(sf, opts),
        Err(e) => Err(e),
    }
}

fn product_starts(warm: &[[f64; 6]], scale: f64, opts: &OptimizerOptions) -> Vec<Vec<f64>> {
    let mut starts: Vec<Vec<f64>> = warm.iter().map(|w| w.to_vec()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xa17e_5a7e);
    while starts.len() < opts.starts.max(warm.len()) {
        let first = random_seed_coords(&mut rng, scale);
        let second = random_seed_coords(&mut rng, scale);
        starts.push(first.iter().chain(second.iter()).cloned().collect());
    }
    starts
}

fn concat(x: [f64; 3], y: [f64; 3]) -> [f64; 6] {
    [x[0], x[1], x[2], y[0], y[1], y[2]]
}

/// Minimal squared Hilbert-Schmidt distance to any product of single-mode
/// Gaussian states. Starts from the GGD optimum, so the result never
/// exceeds the GGD found with the same options.
pub fn ggd_alternative(
    sf: &StandardForm,
    opts: &OptimizerOptions,
) -> Result<MeasureResult<ProductParams>> {
    let warm = ggd_numeric(sf, opts)?;
    ggd_alternative_warm(sf, opts, &warm.argmin)
}

/// [`ggd_alternative`] warm-started from a known GGD seed.
pub fn ggd_alternative_warm(
    sf: &StandardForm,
    opts: &OptimizerOptions,
    ggd_seed: &SeedParams,
) -> Result<MeasureResult<ProductParams>> {
    let sigma = require_physical(sf)?;
    let kernel = Kernel::new(&sigma)?;
    let post = posterior_covariance(&sigma, &seed_covariance(ggd_seed))?;
    let post_params = SeedParams::from_covariance(&post)?;
    with_widening(sf, opts, |bounds| {
        let decode = |x: &[f64]| ProductParams {
            first: bounds.decode(&x[..3]),
            second: bounds.decode(&x[3..]),
        };
        let eval = |p: &ProductParams| {
            kernel.product(
                &seed_matrix(&p.first),
                &seed_matrix(&p.second),
                (p.first.m * p.second.m).powi(2),
            )
        };
        let warm = [
            concat(SeedBox::encode(&post_params), SeedBox::encode(ggd_seed)),
            concat(
                [(sf.a - 1.0).max(0.0).sqrt(), 0.0, 0.0],
                [(sf.b - 1.0).max(0.0).sqrt(), 0.0, 0.0],
            ),
            [0.0; 6],
        ];
        let starts = product_starts(&warm, sf.a.max(sf.b), opts);
        let run = multistart(|x: &[f64]| eval(&decode(x)), &starts, &opts.simplex);
        let argmin = decode(&run.best.x);
        let value = clamp_residual(eval(&argmin))?;
        let touched = bounds.touches(&argmin.first) || bounds.touches(&argmin.second);
        Ok((finish(value, argmin, &run), touched))
    })
}

/// Geometric quadrature correlations in standard form: `2(c² + d²)`.
pub fn gqc_standard_form(sf: &StandardForm) -> f64 {
    2.0 * (sf.c * sf.c + sf.d * sf.d)
}

/// Geometric quadrature correlations from the local invariants:
/// `2(det α det β + det²γ - det Σ)/√(det α det β)`.
pub fn gqc_invariant(inv: &SymplecticInvariants) -> f64 {
    let marg = inv.det_alpha * inv.det_beta;
    2.0 * (marg + inv.det_gamma * inv.det_gamma - inv.det_sigma) / marg.sqrt()
}

/// Geometric quadrature correlations by direct minimization of
/// `tr[(Σ - σ₁ ⊕ σ₂)²]` over two single-mode seeds.
pub fn gqc_numeric(
    sf: &StandardForm,
    opts: &OptimizerOptions,
) -> Result<MeasureResult<ProductParams>> {
    let sigma = require_physical(sf)?;
    let target = *sigma.matrix();
    with_widening(sf, opts, |bounds| {
        let decode = |x: &[f64]| ProductParams {
            first: bounds.decode(&x[..3]),
            second: bounds.decode(&x[3..]),
        };
        let eval = |p: &ProductParams| {
            let diff = target - local(&seed_matrix(&p.first), &seed_matrix(&p.second));
            diff.norm_squared()
        };
        let starts = product_starts(&[[0.0; 6]], sf.a.max(sf.b), opts);
        let run = multistart(|x: &[f64]| eval(&decode(x)), &starts, &opts.simplex);
        let argmin = decode(&run.best.x);
        let value = eval(&argmin).max(0.0);
        let touched = bounds.touches(&argmin.first) || bounds.touches(&argmin.second);
        Ok((finish(value, argmin, &run), touched))
    })
}

/// Covariance of the product state described by `p`.
pub fn product_covariance(p: &ProductParams) -> TwoModeCovariance {
    TwoModeCovariance::product(&seed_covariance(&p.first), &seed_covariance(&p.second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_pure_tmss, make_total_correlated};
    use crate::gaussian::{purity, symplectic_invariants};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sf(a: f64, b: f64, c: f64, d: f64) -> StandardForm {
        StandardForm::new(a, b, c, d).unwrap()
    }

    #[test]
    fn residual_vanishes_on_product_states_at_marginal_seed() {
        let s = sf(3.0, 2.0, 0.0, 0.0);
        let p = SeedParams::heterodyne(2.0).unwrap();
        assert!(hs_residual(&s, &p).unwrap() <= 1e-15);
        assert!(hs_residual_theta0(&s, 2.0, 1.0).unwrap() <= 1e-15);
    }

    #[test]
    fn residual_is_theta_independent_without_squeezing() {
        let s = sf(3.0, 2.0, 1.4, -0.3);
        let base = hs_residual(&s, &SeedParams::new(1.7, 1.0, 0.0).unwrap()).unwrap();
        for &t in &[0.3, 1.0, 2.5] {
            let v = hs_residual(&s, &SeedParams::new(1.7, 1.0, t).unwrap()).unwrap();
            assert!((v - base).abs() <= 1e-12);
        }
    }

    #[test]
    fn residual_at_closed_form_optimum() {
        let c = 3f64.sqrt();
        let s = sf(2.0, 2.0, c, -c);
        let (value, seed) = ggd_sts_closed(&s).unwrap();
        assert_relative_eq!(seed.m, (7f64.sqrt() + 2.0) / 3.0, epsilon = 1e-14);
        assert!((hs_residual(&s, &seed).unwrap() - value).abs() <= 1e-10);
        assert!((hs_residual_theta0(&s, seed.m, 1.0).unwrap() - value).abs() <= 1e-10);
    }

    #[test]
    fn closed_form_examples() {
        let (v, p) = ggd_sts_closed(&StandardForm::vacuum()).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(p.m, 1.0);
        let (v, _) = ggd_sts_closed(&make_pure_tmss(2.0).unwrap().standard_form()).unwrap();
        let expected = 1.0 - 9.0 / (7f64.sqrt() + 2.0).powi(2);
        assert_relative_eq!(v, expected, epsilon = 1e-12);
        assert_relative_eq!(v, 0.583_005, epsilon = 1e-6);
        assert!(matches!(
            ggd_sts_closed(&sf(3.0, 2.0, 1.0, 0.2)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn numeric_matches_closed_form_on_pure_tmss() {
        let s = make_pure_tmss(2.0).unwrap().standard_form();
        let r = ggd_numeric(&s, &OptimizerOptions::default()).unwrap();
        let (v, p) = ggd_sts_closed(&s).unwrap();
        assert!(r.converged);
        assert!((r.value - v).abs() <= 1e-10, "{r:?}");
        assert!((r.argmin.lambda - 1.0).abs() <= 1e-5);
        assert!((r.argmin.m - p.m).abs() <= 1e-5 * p.m);
    }

    /// Exhaustive grid over (m, λ, θ) with two rounds of local refinement.
    fn grid_minimum(s: &StandardForm) -> f64 {
        let eval = |m: f64, l: f64, t: f64| {
            hs_residual(s, &SeedParams::new(m, l, t).unwrap()).unwrap_or(f64::INFINITY)
        };
        let (mut m_lo, mut m_hi) = (1.0, 1.0 + 4.0 * s.b);
        let (mut l_lo, mut l_hi) = (-3.0f64, 3.0f64);
        let mut best = (f64::INFINITY, 1.0, 0.0);
        for _round in 0..3 {
            let n = 200;
            for i in 0..=n {
                let m = m_lo + (m_hi - m_lo) * i as f64 / n as f64;
                for j in 0..=n {
                    let v = l_lo + (l_hi - l_lo) * j as f64 / n as f64;
                    for k in 0..20 {
                        let t = PI * k as f64 / 20.0;
                        let f = eval(m, v.exp(), t);
                        if f < best.0 {
                            best = (f, m, v);
                        }
                    }
                }
            }
            let dm = 2.0 * (m_hi - m_lo) / 200.0;
            let dl = 2.0 * (l_hi - l_lo) / 200.0;
            m_lo = (best.1 - dm).max(1.0);
            m_hi = best.1 + dm;
            l_lo = best.2 - dl;
            l_hi = best.2 + dl;
        }
        best.0
    }

    #[test]
    #[ignore = "slow brute-force oracle; run with --ignored"]
    fn grid_oracle_agrees_on_pure_tmss() {
        let s = make_pure_tmss(2.0).unwrap().standard_form();
        let g = grid_minimum(&s);
        let expected = 1.0 - 9.0 / (7f64.sqrt() + 2.0).powi(2);
        assert!((g - expected).abs() < 1e-6, "{g}");
    }

    #[test]
    fn numeric_on_product_state_is_zero() {
        let s = sf(3.0, 2.0, 0.0, 0.0);
        let r = ggd_numeric(&s, &OptimizerOptions::default()).unwrap();
        assert!(r.value <= 1e-10);
        assert!((r.argmin.lambda - 1.0).abs() < 1e-3);
        assert!((r.argmin.m - 2.0).abs() < 1e-3);
        let v = ggd_numeric(&StandardForm::vacuum(), &OptimizerOptions::default()).unwrap();
        assert!(v.value <= 1e-10);
    }

    #[test]
    fn numeric_rejects_unphysical() {
        let bad = StandardForm {
            a: 1.0,
            b: 5.0,
            c: 1.0,
            d: 1.0,
        };
        assert!(matches!(
            ggd_numeric(&bad, &OptimizerOptions::default()),
            Err(Error::Unphysical { .. })
        ));
    }

    #[test]
    fn alternative_never_exceeds_ggd() {
        let opts = OptimizerOptions::default();
        for s in [
            sf(3.0, 2.0, 1.4, -0.3),
            sf(5.0, 1.5, 1.2, 0.9),
            make_pure_tmss(2.0).unwrap().standard_form(),
            make_total_correlated(3.0).unwrap(),
        ] {
            let g = ggd_numeric(&s, &opts).unwrap();
            let alt = ggd_alternative_warm(&s, &opts, &g.argmin).unwrap();
            assert!(alt.value <= g.value + 1e-8, "{alt:?} vs {g:?}");
            assert!(alt.value >= 0.0);
            assert!(g.value <= purity(&s.to_covariance()) + 1e-8);
        }
        assert!(
            ggd_alternative(&sf(3.0, 2.0, 0.0, 0.0), &opts)
                .unwrap()
                .value
                <= 1e-10
        );
    }

    #[test]
    fn gqc_examples() {
        assert_eq!(gqc_standard_form(&sf(3.0, 2.0, 0.0, 0.0)), 0.0);
        assert_eq!(gqc_standard_form(&make_total_correlated(2.0).unwrap()), 2.0);
        let tmss = make_pure_tmss(2.0).unwrap().standard_form();
        assert_relative_eq!(gqc_standard_form(&tmss), 12.0, epsilon = 1e-12);
        assert_eq!(gqc_invariant(&StandardForm::vacuum().invariants()), 0.0);
    }

    #[test]
    fn gqc_numeric_finds_marginals() {
        let s = sf(3.0, 2.0, 1.4, -0.3);
        let r = gqc_numeric(&s, &OptimizerOptions::default()).unwrap();
        assert!((r.value - gqc_standard_form(&s)).abs() <= 1e-8, "{r:?}");
        assert!((r.argmin.first.m - 3.0).abs() < 1e-4);
        assert!((r.argmin.second.m - 2.0).abs() < 1e-4);
        assert!((r.argmin.first.lambda - 1.0).abs() < 1e-4);
        assert!((r.argmin.second.lambda - 1.0).abs() < 1e-4);
        let p = gqc_numeric(&sf(4.0, 2.0, 0.0, 0.0), &OptimizerOptions::default()).unwrap();
        assert!(p.value <= 1e-10);
        assert_eq!(product_covariance(&p.argmin).gamma(), Matrix2::zeros());
    }

    #[test]
    fn gqc_invariant_on_rotated_state() {
        use crate::gaussian::{local as loc, rotation, squeezer};
        let s = sf(3.0, 2.0, 1.4, -0.3);
        let moved = s
            .to_covariance()
            .transformed(&loc(&(rotation(0.4) * squeezer(0.2)), &rotation(1.3)));
        assert_relative_eq!(
            gqc_invariant(&symplectic_invariants(&moved)),
            gqc_standard_form(&s),
            max_relative = 1e-10
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn theta0_formula_matches_overlap_route(
            a in 1.0f64..30.0, b in 1.0f64..30.0, cf in 0.0f64..1.0, df in -1.0f64..1.0,
            m in 1.0f64..50.0, ln_l in -3.0f64..3.0,
        ) {
            let c = cf * (a * b - 1.0).sqrt();
            let cand = StandardForm { a, b, c, d: df * c };
            prop_assume!(crate::gaussian::validate_physical(&cand.to_covariance(), 0.0).physical);
            let l = ln_l.exp();
            let x = hs_residual(&cand, &SeedParams::new(m, l, 0.0).unwrap()).unwrap();
            let y = hs_residual_theta0(&cand, m, l).unwrap();
            prop_assert!((x - y).abs() <= 1e-12, "{} vs {}", x, y);
        }

        #[test]
        fn gqc_invariant_matches_standard_form(
            a in 1.0f64..50.0, b in 1.0f64..50.0, cf in 0.0f64..1.0, df in -1.0f64..1.0,
        ) {
            let c = cf * (a * b - 1.0).sqrt();
            let cand = StandardForm { a, b, c, d: df * c };
            let x = gqc_invariant(&cand.invariants());
            let y = gqc_standard_form(&cand);
            prop_assert!((x - y).abs() <= 1e-10 * y.max(1.0));
        }

        #[test]
        fn closed_form_is_party_symmetric(a in 1.0f64..100.0, b in 1.0f64..100.0, cf in 0.0f64..1.0) {
            let c = cf * (a * b - 1.0).sqrt();
            prop_assert!((ggd_sts_value(a, b, c) - ggd_sts_value(b, a, c)).abs() <= 1e-12);
        }
    }
}
