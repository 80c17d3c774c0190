//! Squeezed thermal families and the closed-form entropic discord known
//! for them.
//!
//! All logarithms are natural.

use crate::error::{domain, Result};
use crate::gaussian::StandardForm;
use crate::measures::ggd_sts_value;

/// Which parameterization produced a [`StsFamilyPoint`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `b = 1 + ε`, `c = √((a+1)ε)`, `0 ≤ ε ≤ a-1`.
    Low,
    /// `a = b - ε`, `c = √((b+1)(b-ε-1))`, `0 ≤ ε ≤ b-1`.
    Up,
    /// `b = a`, `c = √(a²-1)`.
    PureTmss,
    /// Any other squeezed thermal state.
    Generic,
}

/// A squeezed thermal state, `d = sign_d · c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StsFamilyPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub sign_d: f64,
    /// Family parameter; zero for [`FamilyKind::Generic`].
    pub epsilon: f64,
    pub kind: FamilyKind,
}

impl StsFamilyPoint {
    pub fn standard_form(&self) -> StandardForm {
        StandardForm {
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.sign_d * self.c,
        }
    }

    /// Closed-form Gaussian geometric discord.
    pub fn ggd(&self) -> f64 {
        ggd_sts_value(self.a, self.b, self.c)
    }

    /// Entropic discord from the family formula, when one applies.
    pub fn discord(&self) -> Option<f64> {
        match self.kind {
            FamilyKind::Low => discord_low_family(self.a, self.epsilon).ok(),
            FamilyKind::Up => discord_up_family(self.b, self.epsilon).ok(),
            FamilyKind::PureTmss => discord_up_family(self.b, 0.0).ok(),
            FamilyKind::Generic => None,
        }
    }
}

fn sign_of(sign_d: f64) -> Result<f64> {
    if sign_d == 1.0 || sign_d == -1.0 {
        Ok(sign_d)
    } else {
        Err(domain("sign_d", sign_d, "sign_d = ±1"))
    }
}

fn build(
    a: f64,
    b: f64,
    c: f64,
    sign_d: f64,
    epsilon: f64,
    kind: FamilyKind,
) -> Result<StsFamilyPoint> {
    let sign_d = sign_of(sign_d)?;
    StandardForm::new(a, b, c, sign_d * c)?;
    Ok(StsFamilyPoint {
        a,
        b,
        c,
        sign_d,
        epsilon,
        kind,
    })
}

/// `epsilon` clamped to `upper` when it exceeds it by rounding only (as
/// when `upper = b - 1` is formed from `b = 1 + ε`).
fn check_epsilon(epsilon: f64, upper: f64) -> Result<f64> {
    let slack = 4.0 * f64::EPSILON * (upper.abs() + 1.0);
    if !(epsilon >= 0.0 && epsilon <= upper + slack) {
        return Err(domain("epsilon", epsilon, "0 <= epsilon <= (a or b) - 1"));
    }
    Ok(epsilon.min(upper.max(0.0)))
}

pub fn make_sts(a: f64, b: f64, c: f64, sign_d: f64) -> Result<StsFamilyPoint> {
    build(a, b, c, sign_d, 0.0, FamilyKind::Generic)
}

pub fn make_low_family(a: f64, epsilon: f64) -> Result<StsFamilyPoint> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(domain("a", a, "a >= 1"));
    }
    let epsilon = check_epsilon(epsilon, a - 1.0)?;
    let c = ((a + 1.0) * epsilon).sqrt();
    build(a, 1.0 + epsilon, c, -1.0, epsilon, FamilyKind::Low)
}

pub fn make_up_family(b: f64, epsilon: f64) -> Result<StsFamilyPoint> {
    if !(b >= 1.0) || !b.is_finite() {
        return Err(domain("b", b, "b >= 1"));
    }
    let epsilon = check_epsilon(epsilon, b - 1.0)?;
    let c = ((b + 1.0) * (b - epsilon - 1.0)).max(0.0).sqrt();
    build(b - epsilon, b, c, -1.0, epsilon, FamilyKind::Up)
}

pub fn make_pure_tmss(a: f64) -> Result<StsFamilyPoint> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(domain("a", a, "a >= 1"));
    }
    let c = ((a - 1.0) * (a + 1.0)).sqrt();
    build(a, a, c, -1.0, 0.0, FamilyKind::PureTmss)
}

/// The `b = a, c = a - 1, d = 0` family: strong total correlations with
/// little discord.
pub fn make_total_correlated(a: f64) -> Result<StandardForm> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(domain("a", a, "a >= 1"));
    }
    StandardForm::new(a, a, a - 1.0, 0.0)
}

/// `x ln(1 + 2/x)`, continuous at `x = 0`.
fn x_ln1p_two_over(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (2.0 / x).ln_1p()
    }
}

/// Discord of the `b = 1 + ε`, `c = √((a+1)ε)` family.
pub fn discord_low_family(a: f64, epsilon: f64) -> Result<f64> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(domain("a", a, "a >= 1"));
    }
    let epsilon = check_epsilon(epsilon, a - 1.0)?;
    if epsilon == 0.0 {
        return Ok(0.0);
    }
    let e = epsilon;
    let t_atanh = 4.0 * (a + 1.0) * (e / (2.0 * a - e + 2.0)).atanh();
    // 2ε(1 - y) arcoth(y) with y = a - ε; arcoth(y) = ½ ln(1 + 2/(y-1)).
    let r = a - e - 1.0;
    let t_acoth = -e * x_ln1p_two_over(r);
    // -ε(ε+2) ln(ε/(ε+2)) = (ε+2) · ε ln(1 + 2/ε)
    let t_log = (e + 2.0) * x_ln1p_two_over(e);
    Ok((t_atanh + t_acoth + t_log) / (2.0 * (2.0 + e)))
}

/// Discord of the `a = b - ε`, `c = √((b+1)(b-ε-1))` family.
///
/// Written as `½[(b-1) ln(1 + 2/(b-1)) + 2 ln(b+1) - ε ln(1 + 2/ε) - 2 ln(ε+2)]`,
/// which is the direct form rearranged to avoid cancellation at large `b`.
pub fn discord_up_family(b: f64, epsilon: f64) -> Result<f64> {
    if !(b >= 1.0) || !b.is_finite() {
        return Err(domain("b", b, "b >= 1"));
    }
    let epsilon = check_epsilon(epsilon, b - 1.0)?;
    let value = 0.5
        * (x_ln1p_two_over(b - 1.0) + 2.0 * (b + 1.0).ln()
            - x_ln1p_two_over(epsilon)
            - 2.0 * (epsilon + 2.0).ln());
    Ok(value.max(0.0))
}
