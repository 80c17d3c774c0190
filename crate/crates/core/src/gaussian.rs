//! Covariance-matrix algebra for two-mode Gaussian states.
//!
//! Units are chosen so that the vacuum covariance is the identity. With this
//! convention the uncertainty relation reads `Σ + iΩ ≥ 0`, the purity of a
//! state is `1/√det Σ` and every symplectic eigenvalue of a physical state is
//! at least one. Quadratures are ordered `(x_A, p_A, x_B, p_B)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Matrix4};

use crate::error::{domain, Error, Result};

/// Entrywise slack allowed when checking symmetry.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Slack on the uncertainty relation `ν₋ ≥ 1`.
pub const PHYSICAL_TOL: f64 = 1e-10;

/// Single-mode symplectic form.
pub fn omega() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// Phase-space rotation by `phi`.
pub fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Single-mode squeezer `diag(e^r, e^-r)`.
pub fn squeezer(r: f64) -> Matrix2<f64> {
    Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp())
}

/// Local transformation `S_A ⊕ S_B`.
pub fn local(s_a: &Matrix2<f64>, s_b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(s_a);
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(s_b);
    s
}

fn check_symmetric<const D: usize>(m: &nalgebra::SMatrix<f64, D, D>, tol: f64) -> Result<()> {
    for i in 0..D {
        for j in (i + 1)..D {
            let deviation = (m[(i, j)] - m[(j, i)]).abs();
            if !(deviation <= tol) {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

/// `ln det` of a symmetric positive-definite matrix, or `None` if it is not
/// positive definite.
pub(crate) fn log_det_pd4(m: &Matrix4<f64>) -> Option<f64> {
    let chol = nalgebra::Cholesky::new(*m)?;
    let l = chol.l_dirty();
    let mut acc = 0.0;
    for i in 0..4 {
        acc += l[(i, i)].ln();
    }
    Some(2.0 * acc)
}

pub(crate) fn det2(m: &Matrix2<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

fn is_pd2(m: &Matrix2<f64>) -> bool {
    m[(0, 0)] > 0.0 && det2(m) > 0.0
}

/// Covariance matrix of a zero-mean two-mode Gaussian state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeCovariance {
    m: Matrix4<f64>,
}

impl TwoModeCovariance {
    /// Wraps a matrix after checking symmetry with the default tolerance.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        Self::with_tolerance(m, SYMMETRY_TOL)
    }

    /// The input is symmetrized exactly once it passes the check.
    pub fn with_tolerance(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        check_symmetric(&m, tol)?;
        Ok(Self {
            m: (m + m.transpose()) * 0.5,
        })
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn vacuum() -> Self {
        Self {
            m: Matrix4::identity(),
        }
    }

    /// The matrix of the standard form with the given entries, with no
    /// physicality check.
    pub fn from_standard_entries(a: f64, b: f64, c: f64, d: f64) -> Self {
        #[rustfmt::skip]
        let m = Matrix4::new(
            a, 0.0, c, 0.0,
            0.0, a, 0.0, d,
            c, 0.0, b, 0.0,
            0.0, d, 0.0, b,
        );
        Self { m }
    }

    pub fn from_blocks(
        alpha: &Matrix2<f64>,
        beta: &Matrix2<f64>,
        gamma: &Matrix2<f64>,
    ) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(alpha);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(beta);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(gamma);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&gamma.transpose());
        Self::new(m)
    }

    /// Covariance of the product state `σ_A ⊗ σ_B`.
    pub fn product(a: &SingleModeCovariance, b: &SingleModeCovariance) -> Self {
        Self {
            m: local(a.matrix(), b.matrix()),
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn alpha(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn beta(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn gamma(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// `S Σ Sᵀ`.
    pub fn transformed(&self, s: &Matrix4<f64>) -> Self {
        let m = s * self.m * s.transpose();
        Self {
            m: (m + m.transpose()) * 0.5,
        }
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    /// Text form: four lines of four whitespace-separated decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..4 {
            let row: Vec<String> = (0..4).map(|j| format!("{}", self.m[(i, j)])).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl FromStr for TwoModeCovariance {
    type Err = Error;

    /// Blank lines and lines starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if rows.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 rows, found {}",
                rows.len()
            )));
        }
        let mut m = Matrix4::zeros();
        for (i, line) in rows.iter().enumerate() {
            let vals = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("row {}: `{t}`: {e}", i + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            if vals.len() != 4 {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected 4",
                    i + 1,
                    vals.len()
                )));
            }
            for (j, v) in vals.into_iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Parse(format!("row {}: non-finite entry", i + 1)));
                }
                m[(i, j)] = v;
            }
        }
        Self::new(m)
    }
}

/// Local symplectic invariants of a two-mode covariance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticInvariants {
    pub det_alpha: f64,
    pub det_beta: f64,
    pub det_gamma: f64,
    pub det_sigma: f64,
    /// `det α + det β + 2 det γ`
    pub seralian: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
}

impl SymplecticInvariants {
    fn from_dets(det_alpha: f64, det_beta: f64, det_gamma: f64, det_sigma: f64) -> Self {
        let seralian = det_alpha + det_beta + 2.0 * det_gamma;
        let disc = seralian * seralian - 4.0 * det_sigma;
        Self::from_parts(det_alpha, det_beta, det_gamma, det_sigma, seralian, disc)
    }

    /// `disc` is `Δ² - 4 det Σ`, passed in so callers with a cancellation-free
    /// expression can supply it.
    fn from_parts(
        det_alpha: f64,
        det_beta: f64,
        det_gamma: f64,
        det_sigma: f64,
        seralian: f64,
        disc: f64,
    ) -> Self {
        let disc = disc.max(0.0).sqrt();
        let nu_plus_sq = 0.5 * (seralian + disc);
        // ν₋² ν₊² = det Σ avoids the cancellation in (Δ - √disc)/2.
        let nu_minus_sq = if det_sigma > 0.0 && nu_plus_sq > 0.0 {
            det_sigma / nu_plus_sq
        } else {
            0.5 * (seralian - disc)
        };
        Self {
            det_alpha,
            det_beta,
            det_gamma,
            det_sigma,
            seralian,
            nu_minus: nu_minus_sq.max(0.0).sqrt(),
            nu_plus: nu_plus_sq.max(0.0).sqrt(),
        }
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.nu_minus >= 1.0 - tol
    }
}

pub fn symplectic_invariants(sigma: &TwoModeCovariance) -> SymplecticInvariants {
    let mut inv = SymplecticInvariants::from_dets(
        det2(&sigma.alpha()),
        det2(&sigma.beta()),
        det2(&sigma.gamma()),
        sigma.det(),
    );
    if let Some((lo, hi)) = symplectic_spectrum(sigma) {
        inv.nu_minus = lo;
        inv.nu_plus = hi;
    }
    inv
}

/// `(ν₋, ν₊)` as square roots of the eigenvalues of `Lᵀ Ωᵀ Σ Ω L`, where
/// `Σ = L Lᵀ`. Unlike the closed-form roots this stays accurate when the
/// two symplectic eigenvalues coincide. `None` if `Σ` is not positive
/// definite.
fn symplectic_spectrum(sigma: &TwoModeCovariance) -> Option<(f64, f64)> {
    let l = nalgebra::Cholesky::new(*sigma.matrix())?.l();
    let w = local(&omega(), &omega());
    let m = l.transpose() * w.transpose() * sigma.matrix() * w * l;
    let m = (m + m.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(m).eigenvalues;
    let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Some((lo.max(0.0).sqrt(), hi.max(0.0).sqrt()))
}

/// `tr(α ω γ ω β ω γᵀ ω)`, which equals `det α det β + det²γ - det Σ`
/// without the cancellation of evaluating the right-hand side.
pub(crate) fn cross_invariant(sigma: &TwoModeCovariance) -> f64 {
    let w = omega();
    let g = sigma.gamma();
    (sigma.alpha() * w * g * w * sigma.beta() * w * g.transpose() * w).trace()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalityReport {
    pub physical: bool,
    pub positive_definite: bool,
    pub nu_minus: f64,
}

/// Positive definiteness plus `ν₋ ≥ 1 - tol`, with `ν₋` taken from the
/// symplectic invariants.
pub fn validate_physical(sigma: &TwoModeCovariance, tol: f64) -> PhysicalityReport {
    let positive_definite = nalgebra::Cholesky::new(*sigma.matrix()).is_some();
    let inv = symplectic_invariants(sigma);
    PhysicalityReport {
        physical: positive_definite && inv.is_physical(tol),
        positive_definite,
        nu_minus: inv.nu_minus,
    }
}

fn require_physical(sigma: &TwoModeCovariance) -> Result<()> {
    let report = validate_physical(sigma, PHYSICAL_TOL);
    if report.physical {
        Ok(())
    } else {
        Err(Error::Unphysical {
            nu_minus: report.nu_minus,
        })
    }
}

/// Standard-form parameters `(a, b, c, d)` of a two-mode covariance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl StandardForm {
    /// Checks `a, b ≥ 1`, `c ≥ |d|` and physicality of the reconstruction.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let slack = PHYSICAL_TOL;
        if !(a >= 1.0 - slack) {
            return Err(domain("a", a, "a >= 1"));
        }
        if !(b >= 1.0 - slack) {
            return Err(domain("b", b, "b >= 1"));
        }
        if !(c >= d.abs() - slack * c.max(1.0)) {
            return Err(domain("c", c, "c >= |d|"));
        }
        let sf = Self { a, b, c, d };
        if !sf.is_physical(PHYSICAL_TOL) {
            return Err(Error::Unphysical {
                nu_minus: sf.invariants().nu_minus,
            });
        }
        Ok(sf)
    }

    /// Positive definite with `ν₋ ≥ 1 - tol`, both from the closed-form
    /// invariants (the x and p quadratures decouple in standard form).
    pub fn is_physical(&self, tol: f64) -> bool {
        let ab = self.a * self.b;
        self.a > 0.0
            && ab - self.c * self.c > 0.0
            && ab - self.d * self.d > 0.0
            && self.invariants().is_physical(tol)
    }

    pub fn vacuum() -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            c: 0.0,
            d: 0.0,
        }
    }

    pub fn to_covariance(&self) -> TwoModeCovariance {
        TwoModeCovariance::from_standard_entries(self.a, self.b, self.c, self.d)
    }

    /// Invariants from the closed-form identities. `Δ` and `Δ² - 4 det Σ`
    /// are regrouped so that the near-cancelling pieces (`ab - c²`, `c + d`,
    /// `a - b`) are formed first; this keeps `ν₋` accurate for large
    /// entries and for coinciding symplectic eigenvalues.
    pub fn invariants(&self) -> SymplecticInvariants {
        let Self { a, b, c, d } = *self;
        let p = a * b - c * c;
        let q = a * b - d * d;
        let (amb, cpd) = (a - b, c + d);
        let seralian = amb * amb + 2.0 * p + 2.0 * c * cpd;
        let x = c * amb + b * cpd;
        let y = a * cpd - c * amb;
        let disc = amb * amb * (a + b) * (a + b) + 4.0 * x * y;
        SymplecticInvariants::from_parts(a * a, b * b, c * d, p * q, seralian, disc)
    }

    /// True when `|d| = c` within `tol` (squeezed thermal states).
    pub fn is_squeezed_thermal(&self, tol: f64) -> bool {
        (self.d.abs() - self.c).abs() <= tol * self.c.max(1.0)
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            ..*self
        }
    }
}

/// Reduces a physical covariance to its standard form.
///
/// `c ≥ |d|`, and `d` carries the sign of `det γ` (zero when `det γ = 0`).
pub fn to_standard_form(sigma: &TwoModeCovariance) -> Result<StandardForm> {
    require_physical(sigma)?;
    let det_alpha = det2(&sigma.alpha());
    let det_beta = det2(&sigma.beta());
    let det_gamma = det2(&sigma.gamma());
    let a = det_alpha.sqrt();
    let b = det_beta.sqrt();
    let ab = a * b;
    // c² + d² and c²d² are the sum and product of the two roots.
    let sum = cross_invariant(sigma) / ab;
    let prod = det_gamma * det_gamma;
    let mut disc = sum * sum - 4.0 * prod;
    if disc < 0.0 {
        if disc < -1e-9 * sum.abs().max(1.0).powi(2) {
            return Err(Error::Degenerate(format!(
                "no real (c, d) with c²+d² = {sum} and cd = {det_gamma}"
            )));
        }
        disc = 0.0;
    }
    let c_sq = (0.5 * (sum + disc.sqrt())).max(0.0);
    let c = c_sq.sqrt();
    let d = if det_gamma == 0.0 || c == 0.0 {
        0.0
    } else {
        det_gamma / c
    };
    Ok(StandardForm { a, b, c, d })
}

/// Real symmetric 2×2 covariance of a single mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleModeCovariance {
    m: Matrix2<f64>,
}

impl SingleModeCovariance {
    /// Requires symmetry and positive definiteness.
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        check_symmetric(&m, SYMMETRY_TOL)?;
        let m = (m + m.transpose()) * 0.5;
        if !is_pd2(&m) {
            return Err(Error::Degenerate(
                "single-mode covariance is not positive definite".into(),
            ));
        }
        Ok(Self { m })
    }

    pub fn thermal(m: f64) -> Self {
        Self {
            m: Matrix2::identity() * m,
        }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn det(&self) -> f64 {
        det2(&self.m)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.det() >= 1.0 - tol
    }
}

/// Parameters of a rotated, squeezed, thermal single-mode seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedParams {
    pub m: f64,
    pub lambda: f64,
    pub theta: f64,
}

impl SeedParams {
    /// `theta` is reduced into `[0, π)`.
    pub fn new(m: f64, lambda: f64, theta: f64) -> Result<Self> {
        if !(m >= 1.0) || !m.is_finite() {
            return Err(domain("m", m, "m >= 1"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain("lambda", lambda, "lambda > 0"));
        }
        if !theta.is_finite() {
            return Err(domain("theta", theta, "finite angle"));
        }
        Ok(Self {
            m,
            lambda,
            theta: theta.rem_euclid(std::f64::consts::PI),
        })
    }

    pub fn heterodyne(m: f64) -> Result<Self> {
        Self::new(m, 1.0, 0.0)
    }

    /// Inverse of [`seed_covariance`] for a covariance with `det ≥ 1`.
    ///
    /// The representative with `lambda ≥ 1` is returned.
    pub fn from_covariance(sigma: &SingleModeCovariance) -> Result<Self> {
        let det = sigma.det();
        if det < 1.0 - PHYSICAL_TOL {
            return Err(domain("det", det, "det >= 1"));
        }
        let m = det.max(1.0).sqrt();
        let s = sigma.matrix();
        let (p, q, r) = (s[(0, 0)], s[(0, 1)], s[(1, 1)]);
        let half_tr = 0.5 * (p + r);
        let spread = (0.25 * (p - r) * (p - r) + q * q).sqrt();
        let lambda = ((half_tr + spread) / m).max(1.0);
        // Major axis at angle φ; the seed's major axis points along (cos θ, -sin θ).
        let phi = 0.5 * (2.0 * q).atan2(p - r);
        let theta = if spread == 0.0 { 0.0 } else { -phi };
        Self::new(m, lambda, theta)
    }
}

impl fmt::Display for SeedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} lambda={} theta={}",
            self.m, self.lambda, self.theta
        )
    }
}

/// Covariance of the seed state:
/// `m R diag(λ, 1/λ) Rᵀ` in the rotation convention where the off-diagonal
/// entry is `-m (λ² - 1) cos θ sin θ / λ`.
pub fn seed_covariance(p: &SeedParams) -> SingleModeCovariance {
    let (s, c) = p.theta.sin_cos();
    let (m, l) = (p.m, p.lambda);
    let xx = m * l * c * c + m * s * s / l;
    let xp = -m * (l * l - 1.0) * c * s / l;
    let pp = m * c * c / l + m * l * s * s;
    SingleModeCovariance {
        m: Matrix2::new(xx, xp, xp, pp),
    }
}

/// Conditional covariance of mode A after mode B is projected on `seed`:
/// the Schur complement `α - γ (β + σ_seed)⁻¹ γᵀ`.
pub fn posterior_covariance(
    sigma: &TwoModeCovariance,
    seed: &SingleModeCovariance,
) -> Result<SingleModeCovariance> {
    let shifted = sigma.beta() + seed.matrix();
    let inv = shifted
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("β + σ_seed is singular".into()))?;
    let g = sigma.gamma();
    let post = sigma.alpha() - g * inv * g.transpose();
    SingleModeCovariance::new((post + post.transpose()) * 0.5)
}

/// Overlap `tr(ρ₁ρ₂) = 1/√det[(σ₁+σ₂)/2]` of two zero-mean Gaussian states.
pub fn gaussian_overlap(sigma1: &DMatrix<f64>, sigma2: &DMatrix<f64>) -> Result<f64> {
    let n = sigma1.nrows();
    if !sigma1.is_square() || !sigma2.is_square() || sigma2.nrows() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: sigma2.nrows(),
        });
    }
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch { left: n, right: n });
    }
    let mean = (sigma1 + sigma2) * 0.5;
    let chol = nalgebra::Cholesky::new(mean)
        .ok_or_else(|| Error::Degenerate("(σ₁+σ₂)/2 is not positive definite".into()))?;
    let l = chol.l_dirty();
    let log_det: f64 = (0..n).map(|i| 2.0 * l[(i, i)].ln()).sum();
    Ok((-0.5 * log_det).exp())
}

/// `tr ρ² = 1/√det Σ`.
pub fn purity(sigma: &TwoModeCovariance) -> f64 {
    match log_det_pd4(sigma.matrix()) {
        Some(ld) => (-0.5 * ld).exp(),
        None => 1.0 / sigma.det().sqrt(),
    }
}

/// Mean energy per mode `(tr α / 2, tr β / 2)`.
pub fn mean_energy_per_mode(sigma: &TwoModeCovariance) -> (f64, f64) {
    (0.5 * sigma.alpha().trace(), 0.5 * sigma.beta().trace())
}
