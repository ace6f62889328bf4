//! One-variable smooth profiles for form coefficients.
//!
//! Each [`Profile`] is a closed-form function together with a derivative
//! order; differentiating a profile just bumps the order. Values of
//! derivatives are computed exactly through [`Jet`] arithmetic (or closed
//! forms for the oscillatory case).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::jet::{Jet, JET_ORDER};

/// Arguments of `e^{-1/u}` below this are flushed to zero (`e^{-700}` underflows).
const FLAT_CUTOFF: f64 = 1.0 / 700.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    /// Constant `1`.
    One,
    /// Smooth plateau: support `[lo, hi]`, equal to `1` on `[lo + ramp, hi - ramp]`.
    Plateau { lo: f64, hi: f64, ramp: f64 },
    /// `exp(-1/(1 - ((x - center)/half_width)^2))` inside the support.
    Bump { center: f64, half_width: f64 },
    /// `Σ coeffs[i] x^i`.
    Polynomial { coeffs: Vec<f64> },
    /// `exp(i freq x)`.
    Oscillation { freq: f64 },
    /// `exp(-rate e^t)`; in the log-height variable this is `e^{-rate y}`.
    ExpDecay { rate: f64 },
}

/// A profile together with the order of the derivative it represents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub order: u8,
}

impl Profile {
    pub fn one() -> Self {
        Self::from(ProfileKind::One)
    }

    pub fn plateau(lo: f64, hi: f64, ramp: f64) -> Self {
        assert!(ramp > 0.0 && hi - lo >= 2.0 * ramp, "plateau needs room for both ramps");
        Self::from(ProfileKind::Plateau { lo, hi, ramp })
    }

    pub fn bump(center: f64, half_width: f64) -> Self {
        assert!(half_width > 0.0);
        Self::from(ProfileKind::Bump { center, half_width })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::from(ProfileKind::Polynomial { coeffs })
    }

    pub fn oscillation(freq: f64) -> Self {
        Self::from(ProfileKind::Oscillation { freq })
    }

    pub fn exp_decay(rate: f64) -> Self {
        Self::from(ProfileKind::ExpDecay { rate })
    }

    pub fn is_one(&self) -> bool {
        self.order == 0 && self.kind == ProfileKind::One
    }

    /// The derivative profile, or `None` when it vanishes identically.
    pub fn derivative(&self) -> Option<Profile> {
        match &self.kind {
            ProfileKind::One => None,
            ProfileKind::Polynomial { coeffs } if usize::from(self.order) + 1 >= coeffs.len() => None,
            kind => Some(Profile {
                kind: kind.clone(),
                order: self.order + 1,
            }),
        }
    }

    /// Whether evaluation is supported at this derivative order.
    pub fn evaluable(&self) -> bool {
        match self.kind {
            ProfileKind::Oscillation { .. } | ProfileKind::One => true,
            _ => usize::from(self.order) <= JET_ORDER,
        }
    }

    /// Closed support interval; `None` when unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.kind {
            ProfileKind::Plateau { lo, hi, .. } => Some((lo, hi)),
            ProfileKind::Bump {
                center,
                half_width,
            } => Some((center - half_width, center + half_width)),
            _ => None,
        }
    }

    /// Points where the profile changes character (support ends, ramp ends).
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            ProfileKind::Plateau { lo, hi, ramp } => vec![lo, lo + ramp, hi - ramp, hi],
            ProfileKind::Bump {
                center,
                half_width,
            } => vec![center - half_width, center, center + half_width],
            _ => Vec::new(),
        }
    }

    /// Value of the represented derivative at `x`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let n = usize::from(self.order);
        match &self.kind {
            ProfileKind::One => Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0),
            ProfileKind::Oscillation { freq } => {
                let factor = Complex64::new(0.0, *freq).powu(n as u32);
                factor * Complex64::from_polar(1.0, freq * x)
            }
            kind => {
                assert!(n <= JET_ORDER, "profile derivative order {n} exceeds jet order");
                Complex64::new(real_jet(kind, x).derivative(n), 0.0)
            }
        }
    }
}

impl From<ProfileKind> for Profile {
    fn from(kind: ProfileKind) -> Self {
        Self { kind, order: 0 }
    }
}

fn real_jet(kind: &ProfileKind, x: f64) -> Jet {
    let v = Jet::variable(x);
    match kind {
        ProfileKind::Plateau { lo, hi, ramp } => {
            let up = smooth_step((v.offset(-lo)).scale(1.0 / ramp));
            let down = smooth_step((-v).offset(*hi).scale(1.0 / ramp));
            up * down
        }
        ProfileKind::Bump {
            center,
            half_width,
        } => {
            let u = v.offset(-center).scale(1.0 / half_width);
            let q = (-(u * u)).offset(1.0);
            flat_exp(q)
        }
        ProfileKind::Polynomial { coeffs } => coeffs
            .iter()
            .rev()
            .fold(Jet::zero(), |acc, &c| (acc * v).offset(c)),
        ProfileKind::ExpDecay { rate } => v.exp().scale(-rate).exp(),
        ProfileKind::One | ProfileKind::Oscillation { .. } => unreachable!("handled in closed form"),
    }
}

/// `e^{-1/u}` for `u > 0`, flat zero otherwise.
fn flat_exp(u: Jet) -> Jet {
    if u.value() <= FLAT_CUTOFF {
        Jet::zero()
    } else {
        (-u.recip()).exp()
    }
}

/// C^∞ step from 0 (u <= 0) to 1 (u >= 1).
fn smooth_step(u: Jet) -> Jet {
    let u0 = u.value();
    if u0 <= FLAT_CUTOFF {
        return Jet::zero();
    }
    if u0 >= 1.0 - FLAT_CUTOFF {
        return Jet::constant(1.0);
    }
    let a = flat_exp(u);
    let b = flat_exp((-u).offset(1.0));
    a * (a + b).recip()
}
