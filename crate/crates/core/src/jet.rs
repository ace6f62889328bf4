//! Truncated Taylor series ("jets") for exact derivatives of smooth profiles.
//!
//! A jet stores `f(x0), f'(x0)/1!, ..., f^(K)(x0)/K!`. Arithmetic propagates
//! the truncated series, so derivatives come out analytically rather than
//! from difference quotients.

use std::ops::{Add, Mul, Neg, Sub};

/// Highest derivative order carried by a jet.
pub const JET_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; JET_ORDER + 1],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; JET_ORDER + 1];
        c[0] = v;
        Self { c }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; JET_ORDER + 1];
        c[0] = x0;
        c[1] = 1.0;
        Self { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `n`-th derivative at the expansion point.
    pub fn derivative(&self, n: usize) -> f64 {
        assert!(n <= JET_ORDER, "jet carries derivatives up to order {JET_ORDER}");
        let mut fact = 1.0;
        for i in 2..=n {
            fact *= i as f64;
        }
        self.c[n] * fact
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= s);
        Self { c }
    }

    pub fn offset(self, s: f64) -> Self {
        let mut c = self.c;
        c[0] += s;
        Self { c }
    }

    pub fn exp(self) -> Self {
        let mut b = [0.0; JET_ORDER + 1];
        b[0] = self.c[0].exp();
        for n in 1..=JET_ORDER {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += k as f64 * self.c[k] * b[n - k];
            }
            b[n] = acc / n as f64;
        }
        Self { c: b }
    }

    pub fn recip(self) -> Self {
        let a0 = self.c[0];
        let mut b = [0.0; JET_ORDER + 1];
        b[0] = 1.0 / a0;
        for n in 1..=JET_ORDER {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += self.c[k] * b[n - k];
            }
            b[n] = -acc / a0;
        }
        Self { c: b }
    }

    pub fn powi(self, e: u32) -> Self {
        let mut out = Jet::constant(1.0);
        for _ in 0..e {
            out = out * self;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a += b);
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; JET_ORDER + 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.c[..=JET_ORDER - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Jet { c }
    }
}
