//! Exact integer arithmetic on curve classes `(d, g, r)`.
//!
//! Every parameter is bounded by [`MAX_PARAM`] at construction and node counts
//! are `u32`, so every intermediate of the quantities below (products of two
//! parameters, sums of a handful of such products) fits comfortably in `i64`.

use core::fmt;

use crate::error::{Error, Result};

/// Upper bound accepted for `d`, `g` and `r`.
pub const MAX_PARAM: u32 = 1 << 24;

/// The two classes whose interpolation capacity is one less than the formula.
pub const EXCEPTIONAL_TRIPLES: [(u32, u32, u32); 2] = [(5, 2, 3), (7, 2, 5)];

/// Capacity returned for the exceptional triples.
pub const EXCEPTIONAL_CAPACITY: u64 = 9;

/// A class of curves of degree `d` and genus `g` mapping to `P^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSpec"))]
pub struct CurveSpec {
    d: u32,
    g: u32,
    r: u32,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawSpec {
    d: u32,
    g: u32,
    r: u32,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSpec> for CurveSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        CurveSpec::new(raw.d, raw.g, raw.r)
    }
}

fn bounded(field: &'static str, value: u32, min: u32) -> Result<u32> {
    if value < min || value > MAX_PARAM {
        return Err(Error::OutOfRange {
            field,
            value: value as i64,
            expected: if min == 0 {
                "0 <= value <= 2^24"
            } else {
                "1 <= value <= 2^24"
            },
        });
    }
    Ok(value)
}

impl CurveSpec {
    pub fn new(d: u32, g: u32, r: u32) -> Result<Self> {
        Ok(Self {
            d: bounded("d", d, 1)?,
            g: bounded("g", g, 0)?,
            r: bounded("r", r, 1)?,
        })
    }

    /// The rational normal curve `(r, 0, r)`.
    pub fn rational_normal(r: u32) -> Result<Self> {
        Self::new(r, 0, r)
    }

    /// A line `(1, 0, r)`.
    pub fn line(r: u32) -> Result<Self> {
        Self::new(1, 0, r)
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn g(&self) -> u32 {
        self.g
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Nondegenerate nonspecial range: `d >= g + r`.
    pub fn is_nns(&self) -> bool {
        self.d as i64 >= self.g as i64 + self.r as i64
    }

    /// `d = g + r`: nondegenerate nonspecial and limit linearly normal.
    pub fn is_limit_linearly_normal(&self) -> bool {
        self.d as i64 == self.g as i64 + self.r as i64
    }

    /// `g <= d < g + r`: the general nonspecial curve spans a proper subspace.
    pub fn is_degenerate_nonspecial(&self) -> bool {
        self.d >= self.g && !self.is_nns()
    }

    /// Excess `d - g - r` over the limit linearly normal degree.
    pub fn excess(&self) -> i64 {
        self.d as i64 - self.g as i64 - self.r as i64
    }

    /// The same abstract curve viewed in an ambient space of dimension `r`.
    pub fn with_ambient(&self, r: u32) -> Result<Self> {
        Self::new(self.d, self.g, r)
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.d, self.g, self.r)
    }
}

/// Maximum number of general points a class passes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Capacity {
    Bounded(u64),
    /// Only for `r = 1`, where the point condition is vacuous.
    Unbounded,
}

impl Capacity {
    pub fn admits(&self, n: u32) -> bool {
        match *self {
            Capacity::Bounded(max) => n as u64 <= max,
            Capacity::Unbounded => true,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Bounded(n) => write!(f, "{n}"),
            Capacity::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Brill-Noether number `(r+1)d - rg - r(r+1)`.
pub fn rho(spec: &CurveSpec) -> i64 {
    let (d, g, r) = (spec.d as i64, spec.g as i64, spec.r as i64);
    (r + 1) * d - r * g - r * (r + 1)
}

pub fn is_exceptional(spec: &CurveSpec) -> bool {
    EXCEPTIONAL_TRIPLES.contains(&(spec.d, spec.g, spec.r))
}

/// `(r+1)d - (r-3)(g-1)`, the point-count budget before subtracting `(r-1)n`.
pub fn interpolation_budget(spec: &CurveSpec) -> i64 {
    let (d, g, r) = (spec.d as i64, spec.g as i64, spec.r as i64);
    (r + 1) * d - (r - 3) * (g - 1)
}

/// `(r+1)d - (r-3)(g-1) - (r-1)n`.
pub fn margin(spec: &CurveSpec, n: u32) -> i64 {
    interpolation_budget(spec) - (spec.r as i64 - 1) * n as i64
}

pub fn interpolation_capacity(spec: &CurveSpec) -> Result<Capacity> {
    if spec.d < spec.g {
        return Err(Error::NoNonspecialClass {
            d: spec.d,
            g: spec.g,
        });
    }
    if spec.r == 1 {
        return Ok(Capacity::Unbounded);
    }
    if !spec.is_nns() {
        return Ok(Capacity::Bounded((spec.d - spec.g + 1) as u64));
    }
    if is_exceptional(spec) {
        return Ok(Capacity::Bounded(EXCEPTIONAL_CAPACITY));
    }
    let value = interpolation_budget(spec).div_euclid(spec.r as i64 - 1);
    debug_assert!(value >= 0);
    Ok(Capacity::Bounded(value.max(0) as u64))
}

pub fn passes_through(spec: &CurveSpec, n: u32) -> Result<bool> {
    Ok(interpolation_capacity(spec)?.admits(n))
}

/// Signed slack of "the general curve of this class passes through `n`
/// general points", computed from the inequalities rather than the capacity.
///
/// In the nondegenerate range this is `margin(spec, n)`, less one at the
/// exceptional triples where the inequality is strict. In the degenerate
/// range it is `d + 1 - g - n`. Classes with `d < g` get the negative slack
/// `d - g`. For `r = 1` the condition is vacuous and the slack is `0`.
pub fn interpolation_slack(spec: &CurveSpec, n: u32) -> i64 {
    if spec.d < spec.g {
        return spec.d as i64 - spec.g as i64;
    }
    if spec.r == 1 {
        return 0;
    }
    if !spec.is_nns() {
        return spec.d as i64 + 1 - spec.g as i64 - n as i64;
    }
    margin(spec, n) - is_exceptional(spec) as i64
}

/// The class of `left ∪_Γ right` with `#Γ = n`.
pub fn glue(left: &CurveSpec, right: &CurveSpec, n: u32) -> Result<CurveSpec> {
    if left.r != right.r {
        return Err(Error::AmbientMismatch {
            left: left.r,
            right: right.r,
        });
    }
    if n == 0 {
        return Err(Error::NoNodes);
    }
    let genus = left.g as u64 + right.g as u64 + n as u64 - 1;
    let degree = left.d as u64 + right.d as u64;
    CurveSpec::new(clamp(degree), clamp(genus), left.r)
}

fn clamp(v: u64) -> u32 {
    v.min(u32::MAX as u64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: u32, g: u32, r: u32) -> CurveSpec {
        CurveSpec::new(d, g, r).unwrap()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&spec(5, 2, 3)), 2);
        assert_eq!(rho(&spec(6, 2, 3)), 6);
        for r in 1..20 {
            assert_eq!(rho(&spec(r, 0, r)), 0);
        }
        assert_eq!(rho(&spec(9, 9, 3)), -3);
    }

    #[test]
    fn exceptional_membership() {
        assert!(is_exceptional(&spec(5, 2, 3)));
        assert!(is_exceptional(&spec(7, 2, 5)));
        assert!(!is_exceptional(&spec(6, 2, 3)));
        assert!(!is_exceptional(&spec(5, 2, 4)));
    }

    #[test]
    fn margin_examples() {
        assert_eq!(margin(&spec(6, 3, 3), 10), 4);
        assert_eq!(margin(&spec(6, 2, 3), 11), 2);
        for r in 1..30 {
            assert_eq!(margin(&spec(r, 0, r), r + 3), 0, "r = {r}");
        }
    }

    #[test]
    fn capacity_examples() {
        let cap = |d, g, r| interpolation_capacity(&spec(d, g, r)).unwrap();
        assert_eq!(cap(5, 2, 3), Capacity::Bounded(9));
        assert_eq!(cap(7, 2, 5), Capacity::Bounded(9));
        assert_eq!(cap(1, 0, 3), Capacity::Bounded(2));
        assert_eq!(cap(3, 0, 3), Capacity::Bounded(6));
        assert_eq!(cap(6, 2, 3), Capacity::Bounded(12));
        assert_eq!(cap(4, 1, 3), Capacity::Bounded(8));
        assert_eq!(cap(4, 1, 1), Capacity::Unbounded);
        // degenerate range: a conic in P^3 spans a plane
        assert_eq!(cap(2, 0, 3), Capacity::Bounded(3));
    }

    #[test]
    fn exceptional_override_is_one_below_formula() {
        for (d, g, r) in EXCEPTIONAL_TRIPLES {
            let s = spec(d, g, r);
            assert_eq!(interpolation_budget(&s).div_euclid(r as i64 - 1), 10);
            assert_eq!(interpolation_capacity(&s).unwrap(), Capacity::Bounded(9));
        }
    }

    #[test]
    fn capacity_rejects_special_classes() {
        assert_eq!(
            interpolation_capacity(&spec(2, 3, 3)),
            Err(Error::NoNonspecialClass { d: 2, g: 3 })
        );
        assert!(passes_through(&spec(2, 3, 3), 0).is_err());
    }

    #[test]
    fn passes_through_examples() {
        assert!(passes_through(&spec(5, 2, 3), 9).unwrap());
        assert!(!passes_through(&spec(5, 2, 3), 10).unwrap());
        assert!(passes_through(&spec(4, 1, 3), 8).unwrap());
        assert!(!passes_through(&spec(4, 1, 3), 9).unwrap());
        assert!(passes_through(&spec(9, 1, 4), 0).unwrap());
    }

    #[test]
    fn slack_agrees_with_capacity() {
        for r in 1..8 {
            for g in 0..12 {
                for d in g.max(1)..g + 3 * r + 4 {
                    let s = spec(d, g, r);
                    for n in 0..60 {
                        assert_eq!(
                            interpolation_slack(&s, n) >= 0,
                            passes_through(&s, n).unwrap(),
                            "{s} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn glue_examples() {
        assert_eq!(
            glue(&spec(3, 0, 3), &spec(3, 0, 3), 5).unwrap(),
            spec(6, 4, 3)
        );
        assert_eq!(
            glue(&spec(4, 1, 3), &spec(5, 2, 3), 6).unwrap(),
            spec(9, 8, 3)
        );
        assert_eq!(
            glue(&spec(7, 3, 4), &spec(1, 0, 4), 1).unwrap(),
            spec(8, 3, 4)
        );
    }

    #[test]
    fn glue_errors() {
        assert_eq!(
            glue(&spec(3, 0, 3), &spec(3, 0, 4), 1),
            Err(Error::AmbientMismatch { left: 3, right: 4 })
        );
        assert_eq!(glue(&spec(3, 0, 3), &spec(3, 0, 3), 0), Err(Error::NoNodes));
        let big = spec(MAX_PARAM, MAX_PARAM, 3);
        assert!(matches!(glue(&big, &big, 1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn construction_bounds() {
        assert!(CurveSpec::new(0, 0, 3).is_err());
        assert!(CurveSpec::new(1, 0, 0).is_err());
        assert!(CurveSpec::new(MAX_PARAM + 1, 0, 3).is_err());
        assert!(CurveSpec::new(1, 0, 1).is_ok());
    }

    #[test]
    fn role_flags() {
        assert!(spec(5, 2, 3).is_limit_linearly_normal());
        assert!(spec(6, 2, 3).is_nns());
        assert!(!spec(6, 2, 3).is_limit_linearly_normal());
        assert!(spec(2, 0, 3).is_degenerate_nonspecial());
        assert!(!spec(2, 3, 3).is_degenerate_nonspecial());
    }
}
