//! Parabolic spectral regions `Q_{p,k}` of the k-form Laplacian on `H^{N+1}`.
//!
//! The region is `{ (N/2 - k)^2 + z^2 : |Im z| <= |N/p - N/2| }` for
//! `k <= (N+1)/2`, extended to higher degrees by `k -> N+1-k`. Its boundary is
//! the parabola traced by [`boundary_point`]. Membership is decided by the
//! closed-form inequality `x >= v - d^2 + y^2/(4 d^2)` obtained by minimising
//! over `|Im z| <= d`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack applied to every region inequality.
pub const REGION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("form degree {k} out of range for H^{{{dim}}} (need 0 <= k <= {dim})", dim = .n + 1)]
    DegreeOutOfRange { n: u32, k: u32 },
    #[error("dimension parameter N must be positive")]
    ZeroDimension,
    #[error("integrability exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("spectral point has non-finite components ({0}, {1})")]
    NonFinite(f64, f64),
}

/// A candidate spectral value `x + iy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub re: f64,
    pub im: f64,
}

impl SpectralPoint {
    pub fn new(re: f64, im: f64) -> Result<Self, RegionError> {
        if re.is_finite() && im.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(RegionError::NonFinite(re, im))
        }
    }

    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for SpectralPoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Integrability exponent `p` in `[1, ∞]`. `∞` is stored as `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self, RegionError> {
        if p.is_nan() || p < 1.0 {
            Err(RegionError::InvalidExponent(p))
        } else {
            Ok(Self(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    pub fn dual(self) -> Exponent {
        Exponent(dual_exponent(self.0))
    }

    /// Representative in `[1, 2]` with the same spectrum.
    pub fn at_most_two(self) -> Exponent {
        if self.0 > 2.0 {
            self.dual()
        } else {
            self
        }
    }
}

/// Hölder conjugate `p*` with `1/p + 1/p* = 1`.
pub fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Maps a degree above the middle to its Poincaré dual, `k -> N+1-k` when `k > (N+1)/2`.
pub fn reduce_degree(n: u32, k: u32) -> Result<u32, RegionError> {
    if n == 0 {
        return Err(RegionError::ZeroDimension);
    }
    if k > n + 1 {
        return Err(RegionError::DegreeOutOfRange { n, k });
    }
    // k > (N+1)/2  <=>  2k > N+1
    Ok(if 2 * k > n + 1 { n + 1 - k } else { k })
}

/// `(N, k, p)` naming the region `Q_{p,k}` in `H^{N+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub n: u32,
    pub k: u32,
    pub p: Exponent,
}

/// Vertex and half-width of the parabola bounding a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaGeometry {
    /// `(N/2 - k')^2`
    pub vertex: f64,
    /// `|N/p - N/2|`
    pub half_width: f64,
}

impl RegionSpec {
    pub fn new(n: u32, k: u32, p: f64) -> Result<Self, RegionError> {
        reduce_degree(n, k)?;
        Ok(Self {
            n,
            k,
            p: Exponent::new(p)?,
        })
    }

    pub fn reduced_degree(&self) -> u32 {
        reduce_degree(self.n, self.k).expect("validated at construction")
    }

    pub fn geometry(&self) -> ParabolaGeometry {
        let n = f64::from(self.n);
        let kr = f64::from(self.reduced_degree());
        let vertex = (n / 2.0 - kr).powi(2);
        let half_width = (n * self.p.reciprocal() - n / 2.0).abs();
        ParabolaGeometry { vertex, half_width }
    }

    /// True for the middle degree `(N+1)/2` with `N` odd, where `0` is an extra spectral point.
    pub fn is_odd_middle(&self) -> bool {
        self.n % 2 == 1 && 2 * self.reduced_degree() == self.n + 1
    }

    pub fn with_degree(&self, k: u32) -> Result<Self, RegionError> {
        Self::new(self.n, k, self.p.value())
    }

    pub fn with_exponent(&self, p: f64) -> Result<Self, RegionError> {
        Self::new(self.n, self.k, p)
    }
}

/// Point of the boundary parabola `P_{p,k}` at parameter `s`:
/// `-(N/p + is - k')(N(1/p - 1) + is + k')`, with `p > 2` replaced by its dual.
pub fn boundary_point(spec: &RegionSpec, s: f64) -> SpectralPoint {
    let n = f64::from(spec.n);
    let kr = f64::from(spec.reduced_degree());
    let inv_p = spec.p.at_most_two().reciprocal();
    let first = Complex64::new(n * inv_p - kr, s);
    let second = Complex64::new(n * (inv_p - 1.0) + kr, s);
    SpectralPoint::from(-(first * second))
}

/// Same boundary point via the vertex form `v + z^2`, `z = -s + i d`.
pub fn boundary_point_vertex_form(spec: &RegionSpec, s: f64) -> SpectralPoint {
    let g = spec.geometry();
    let z = Complex64::new(-s, g.half_width);
    SpectralPoint::from(g.vertex + z * z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Closed,
    Interior,
}

/// Signed excess `x - (v - d^2 + y^2/(4 d^2))`; positive inside the parabola.
///
/// Meaningless when `d = 0` (the region degenerates to a ray); callers branch on that.
pub fn region_excess(geometry: &ParabolaGeometry, lambda: SpectralPoint) -> f64 {
    let d2 = geometry.half_width * geometry.half_width;
    lambda.re - (geometry.vertex - d2 + lambda.im * lambda.im / (4.0 * d2))
}

pub fn contains(spec: &RegionSpec, lambda: SpectralPoint, mode: Membership) -> bool {
    contains_with_margin(spec, lambda, mode, 0.0)
}

/// Membership with an explicit boundary margin: closed membership accepts points up to
/// `margin` outside, interior membership demands at least `margin` clearance.
pub fn contains_with_margin(
    spec: &RegionSpec,
    lambda: SpectralPoint,
    mode: Membership,
    margin: f64,
) -> bool {
    let g = spec.geometry();
    let slack = REGION_TOL + margin;
    if g.half_width == 0.0 {
        return match mode {
            Membership::Closed => lambda.im.abs() <= slack && lambda.re >= g.vertex - slack,
            // a ray has empty interior in the plane
            Membership::Interior => false,
        };
    }
    let excess = region_excess(&g, lambda);
    match mode {
        Membership::Closed => excess >= -slack,
        Membership::Interior => excess > slack,
    }
}

/// Membership in the full spectrum `σ(p,k)`: the closed region, plus `{0}` in the odd middle degree.
pub fn spectrum_contains(spec: &RegionSpec, lambda: SpectralPoint) -> bool {
    contains(spec, lambda, Membership::Closed)
        || (spec.is_odd_middle() && lambda.re.abs() <= REGION_TOL && lambda.im.abs() <= REGION_TOL)
}

/// Whether `λ` is an `L^p` eigenvalue: interior points for `p > 2`, never for `p <= 2`.
pub fn is_lp_eigenvalue(spec: &RegionSpec, lambda: SpectralPoint) -> bool {
    spec.p.value() > 2.0 && contains(spec, lambda, Membership::Interior)
}

/// Bottoms `((N/2 - k' + 1)^2, (N/2 - k')^2)` of the two formal eigenform parabolas at `p = 2`.
pub fn bottom_values(n: u32, k: u32) -> Result<(f64, f64), RegionError> {
    let kr = f64::from(reduce_degree(n, k)?);
    let half = f64::from(n) / 2.0;
    Ok(((half - kr + 1.0).powi(2), (half - kr).powi(2)))
}

/// Locates `q ∈ [p, 2]` and `s` with `boundary_point((N,k,q), s) = λ`, witnessing the
/// union `Q_{p,k} = ∪_{p<=q<=2} P_{q,k}` for `p <= 2`. Returns `None` for points outside
/// the closed region.
pub fn boundary_exponent_for(spec: &RegionSpec, lambda: SpectralPoint) -> Option<(f64, f64)> {
    let p = spec.p.at_most_two();
    let spec = RegionSpec { p, ..*spec };
    if !contains(&spec, lambda, Membership::Closed) {
        return None;
    }
    let n = f64::from(spec.n);
    let v = spec.geometry().vertex;
    let shifted = lambda.re - v;
    // half-width as a function of q in [p, 2], decreasing from d_p to 0
    let width = |q: f64| n / q - n / 2.0;
    let y = lambda.im;

    if y.abs() <= REGION_TOL {
        if shifted >= 0.0 {
            return Some((2.0, shifted.sqrt()));
        }
        // s = 0 and d_q^2 = -shifted
        let target = (-shifted).sqrt();
        let q = n / (target + n / 2.0);
        return Some((q.clamp(p.value(), 2.0), 0.0));
    }

    // g(q) = y^2/(4 d_q^2) - d_q^2 - (x - v): increasing in q, <= 0 at q = p, +∞ at q = 2.
    let g = |q: f64| {
        let d = width(q);
        y * y / (4.0 * d * d) - d * d - shifted
    };
    let mut lo = p.value();
    let mut hi = 2.0;
    if g(lo) > 0.0 {
        // within REGION_TOL of the outer boundary
        let d = width(lo);
        return Some((lo, -y / (2.0 * d)));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let q = 0.5 * (lo + hi);
    let d = width(q);
    Some((q, -y / (2.0 * d)))
}

/// One CSV row of a boundary sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub s: f64,
    pub re: f64,
    pub im: f64,
}

/// Region metadata as emitted next to boundary samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMetadata {
    #[serde(rename = "N")]
    pub n: u32,
    pub k: u32,
    /// `null` encodes `p = ∞`
    pub p: Option<f64>,
    pub vertex: f64,
    pub half_width: f64,
}

impl RegionMetadata {
    pub fn of(spec: &RegionSpec) -> Self {
        let g = spec.geometry();
        Self {
            n: spec.n,
            k: spec.k,
            p: (!spec.p.is_infinite()).then(|| spec.p.value()),
            vertex: g.vertex,
            half_width: g.half_width,
        }
    }
}

/// `count` boundary samples at evenly spaced `s ∈ [-s_max, s_max]`.
pub fn boundary_samples(spec: &RegionSpec, s_max: f64, count: usize) -> Vec<BoundarySample> {
    let count = count.max(2);
    (0..count)
        .map(|i| {
            let s = -s_max + 2.0 * s_max * i as f64 / (count - 1) as f64;
            let pt = boundary_point(spec, s);
            BoundarySample {
                s,
                re: pt.re,
                im: pt.im,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32, k: u32, p: f64) -> RegionSpec {
        RegionSpec::new(n, k, p).unwrap()
    }

    fn close(a: SpectralPoint, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12
    }

    #[test]
    fn dual_exponent_examples() {
        assert!(dual_exponent(1.0).is_infinite());
        assert_eq!(dual_exponent(2.0), 2.0);
        assert!((dual_exponent(4.0 / 3.0) - 4.0).abs() < 1e-12);
        assert_eq!(dual_exponent(f64::INFINITY), 1.0);
        for p in [1.0, 1.1, 1.5, 2.0, 3.0, 7.5, f64::INFINITY] {
            let back = dual_exponent(dual_exponent(p));
            assert!(back == p || (back - p).abs() < 1e-12 * p);
        }
    }

    #[test]
    fn reduce_degree_examples() {
        assert_eq!(reduce_degree(3, 3), Ok(1));
        assert_eq!(reduce_degree(3, 2), Ok(2));
        assert_eq!(reduce_degree(4, 0), Ok(0));
        assert_eq!(reduce_degree(4, 5), Ok(0));
        assert_eq!(
            reduce_degree(3, 5),
            Err(RegionError::DegreeOutOfRange { n: 3, k: 5 })
        );
        assert_eq!(reduce_degree(0, 0), Err(RegionError::ZeroDimension));
    }

    #[test]
    fn rejects_bad_exponents_and_points() {
        assert!(RegionSpec::new(3, 1, 0.5).is_err());
        assert!(RegionSpec::new(3, 1, f64::NAN).is_err());
        assert!(RegionSpec::new(3, 1, f64::INFINITY).is_ok());
        assert!(SpectralPoint::new(f64::NAN, 0.0).is_err());
        assert!(SpectralPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn boundary_point_examples() {
        assert!(close(boundary_point(&spec(3, 0, 2.0), 0.0), 2.25, 0.0));
        assert!(close(boundary_point(&spec(3, 0, 1.0), 0.0), 0.0, 0.0));
        assert!(close(boundary_point(&spec(3, 0, 1.0), 1.0), 1.0, -3.0));
        // p = ∞ goes through duality to p = 1
        assert!(close(boundary_point(&spec(3, 0, f64::INFINITY), 1.0), 1.0, -3.0));
    }

    #[test]
    fn p_two_collapses_to_ray() {
        let sp = spec(5, 1, 2.0);
        for s in [-3.0, -0.5, 0.0, 1.25, 4.0] {
            let b = boundary_point(&sp, s);
            assert_eq!(b.im, 0.0);
            assert!((b.re - (s * s + 2.25)).abs() < 1e-12);
        }
    }

    #[test]
    fn contains_examples() {
        assert!(!contains(&spec(3, 0, 2.0), SpectralPoint::real(2.0), Membership::Closed));
        assert!(contains(&spec(3, 1, 2.0), SpectralPoint::real(0.25), Membership::Closed));
        let q = spec(3, 0, 1.0);
        assert!(contains(&q, SpectralPoint::real(0.0), Membership::Closed));
        assert!(!contains(&q, SpectralPoint::real(0.0), Membership::Interior));
    }

    #[test]
    fn margin_widens_or_shrinks() {
        let q = spec(3, 0, 1.0);
        let outside = SpectralPoint::real(-1e-4);
        assert!(!contains(&q, outside, Membership::Closed));
        assert!(contains_with_margin(&q, outside, Membership::Closed, 1e-3));
        let inside = SpectralPoint::real(1e-4);
        assert!(contains(&q, inside, Membership::Interior));
        assert!(!contains_with_margin(&q, inside, Membership::Interior, 1e-3));
    }

    #[test]
    fn spectrum_examples() {
        assert!(spectrum_contains(&spec(3, 2, 2.0), SpectralPoint::real(0.0)));
        assert!(!spectrum_contains(&spec(3, 2, 2.0), SpectralPoint::real(0.1)));
        assert!(spectrum_contains(&spec(4, 2, 2.0), SpectralPoint::real(0.0)));
        assert!(!spectrum_contains(&spec(4, 1, 2.0), SpectralPoint::real(0.0)));
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(is_lp_eigenvalue(&spec(3, 1, 4.0), SpectralPoint::real(0.25)));
        assert!(!is_lp_eigenvalue(&spec(3, 1, 2.0), SpectralPoint::real(0.25)));
        let sp = spec(3, 1, 4.0);
        for s in [-2.0, 0.0, 0.7, 3.0] {
            assert!(!is_lp_eigenvalue(&sp, boundary_point(&sp, s)));
        }
        // p <= 2 never has eigenvalues, even deep inside
        assert!(!is_lp_eigenvalue(&spec(3, 1, 1.0), SpectralPoint::real(50.0)));
    }

    #[test]
    fn bottom_value_examples() {
        assert_eq!(bottom_values(3, 0), Ok((6.25, 2.25)));
        assert_eq!(bottom_values(3, 2), Ok((0.25, 0.25)));
        assert_eq!(bottom_values(4, 2), Ok((1.0, 0.0)));
        for n in 1..7 {
            for k in 0..=n + 1 {
                let (_, b) = bottom_values(n, k).unwrap();
                assert!((boundary_point(&spec(n, k, 2.0), 0.0).re - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn middle_degree_window_matches_thresholds() {
        for n in [1u32, 3, 5, 7] {
            let nf = f64::from(n);
            let lo = 2.0 * nf / (nf + 1.0);
            let hi = if n > 1 { 2.0 * nf / (nf - 1.0) } else { f64::INFINITY };
            for i in 1..400 {
                let p = 1.0 + 0.01 * i as f64;
                if (p - lo).abs() < 1e-6 || (p - hi).abs() < 1e-6 {
                    continue;
                }
                let sp = spec(n, (n + 1) / 2, p);
                let excluded = !contains(&sp, SpectralPoint::real(0.0), Membership::Closed);
                assert_eq!(excluded, lo < p && p < hi, "N={n} p={p}");
            }
        }
    }

    #[test]
    fn union_root_search_lands_on_boundary() {
        let sp = spec(3, 1, 1.25);
        for (x, y) in [(3.0, 1.0), (0.5, 0.0), (-0.2, 0.0), (16.0, -7.0), (0.3, 0.05)] {
            let lambda = SpectralPoint::new(x, y).unwrap();
            let (q, s) = boundary_exponent_for(&sp, lambda).expect("inside");
            assert!((1.25..=2.0).contains(&q));
            let b = boundary_point(&sp.with_exponent(q).unwrap(), s);
            assert!((b.re - x).abs() < 1e-8 && (b.im - y).abs() < 1e-8, "{b:?} vs {x},{y}");
        }
        assert!(boundary_exponent_for(&sp, SpectralPoint::real(-5.0)).is_none());
    }

    #[test]
    fn metadata_encodes_infinity_as_null() {
        let m = RegionMetadata::of(&spec(3, 0, f64::INFINITY));
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"N\":3"));
        assert!(json.contains("\"p\":null"));
    }
}
