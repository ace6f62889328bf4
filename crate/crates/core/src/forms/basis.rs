//! Coordinate basis forms `dy∧dx^I` and `dx^J` on the half-space model.
//!
//! Coordinates are numbered `0 = y`, `1..=N = x_1..x_N`; a basis form is the
//! ordered wedge of its coordinate set, so `dy` always comes first.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::FormError;

/// Coordinate direction: `0` is `∂y`, `i >= 1` is `∂x_i`.
pub type Coord = u32;

pub const Y: Coord = 0;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisForm {
    /// `true` for the `dy∧dx^I` family.
    pub has_dy: bool,
    /// Strictly increasing x-indices in `[1, N]`.
    pub indices: Vec<u32>,
}

impl BasisForm {
    pub fn dx(indices: &[u32]) -> Result<Self, FormError> {
        Self::checked(false, indices.to_vec())
    }

    pub fn dy_dx(indices: &[u32]) -> Result<Self, FormError> {
        Self::checked(true, indices.to_vec())
    }

    fn checked(has_dy: bool, indices: Vec<u32>) -> Result<Self, FormError> {
        if indices.contains(&0) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FormError::InvalidMultiIndex(indices));
        }
        Ok(Self { has_dy, indices })
    }

    /// `1` (the empty wedge, degree 0).
    pub fn unit() -> Self {
        Self {
            has_dy: false,
            indices: Vec::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.indices.len() as u32 + u32::from(self.has_dy)
    }

    pub fn max_index(&self) -> u32 {
        self.indices.last().copied().unwrap_or(0)
    }

    /// Coordinate list in wedge order.
    pub fn coords(&self) -> Vec<Coord> {
        let mut c = Vec::with_capacity(self.indices.len() + 1);
        if self.has_dy {
            c.push(Y);
        }
        c.extend_from_slice(&self.indices);
        c
    }

    fn from_coords(coords: &[Coord]) -> Self {
        let has_dy = coords.first() == Some(&Y);
        let indices = if has_dy { coords[1..].to_vec() } else { coords.to_vec() };
        Self { has_dy, indices }
    }

    pub fn contains(&self, a: Coord) -> bool {
        if a == Y {
            self.has_dy
        } else {
            self.indices.binary_search(&a).is_ok()
        }
    }

    /// `d(coord a) ∧ self` as `sign · basis`, or `None` when it vanishes.
    pub fn wedge_left(&self, a: Coord) -> Option<(f64, BasisForm)> {
        let coords = self.coords();
        match coords.binary_search(&a) {
            Ok(_) => None,
            Err(pos) => {
                let mut out = coords;
                out.insert(pos, a);
                Some((parity(pos), Self::from_coords(&out)))
            }
        }
    }

    /// Wedge of two basis forms `self ∧ other`.
    pub fn wedge(&self, other: &BasisForm) -> Option<(f64, BasisForm)> {
        let mut sign = 1.0;
        let mut acc = other.clone();
        for &a in self.coords().iter().rev() {
            let (s, next) = acc.wedge_left(a)?;
            sign *= s;
            acc = next;
        }
        Some((sign, acc))
    }

    /// Interior product `ι(∂_a) self` as `sign · basis`, or `None` when `a` is absent.
    pub fn contract(&self, a: Coord) -> Option<(f64, BasisForm)> {
        let coords = self.coords();
        let pos = coords.binary_search(&a).ok()?;
        let mut out = coords;
        out.remove(pos);
        Some((parity(pos), Self::from_coords(&out)))
    }
}

fn parity(pos: usize) -> f64 {
    if pos % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl fmt::Display for BasisForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if self.has_dy {
            parts.push("dy".to_string());
        }
        if !self.indices.is_empty() {
            let idx: Vec<String> = self.indices.iter().map(u32::to_string).collect();
            parts.push(format!("dx^{{{}}}", idx.join(",")));
        }
        write!(f, "{}", parts.join("∧"))
    }
}
