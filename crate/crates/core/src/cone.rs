//! Strictly convex rational cones in the plane and the uniform multiple `m`
//! with `m·ξ ∈ R + C` for every lattice point `ξ` interior to `C`.
//!
//! Every lattice point off an integral line `⟨x, u⟩ = 0` sits at distance at
//! least `1/‖u‖` from it, so interior lattice points keep a uniform distance
//! `c = min_i 1/‖u_i‖` from the boundary. Similar triangles along the ray
//! through `ξ` then show `m ≥ ‖R‖/c` suffices. All quantities are handled
//! squared and cross-multiplied; nothing here touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;

pub type Point = [i64; 2];

/// Squared distance `⟨P,u⟩² / ‖u‖²` with the denominator kept as `‖u‖²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistanceSq {
    pub numerator: BigInt,
    pub denominator: BigInt,
}

impl ExactDistanceSq {
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), self.denominator.clone())
    }
}

impl std::fmt::Display for ExactDistanceSq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = self.to_ratio();
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for ExactDistanceSq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Squared distance from `P` to the hyperplane `⟨x, u⟩ = 0` in any dimension.
pub fn hyperplane_distance_sq(point: &[BigInt], normal: &[BigInt]) -> Result<ExactDistanceSq> {
    if point.len() != normal.len() {
        return Err(Error::DimensionMismatch {
            left: point.len(),
            right: normal.len(),
        });
    }
    let norm_sq = dot(normal, normal);
    if norm_sq.is_zero() {
        return Err(Error::Degenerate("zero normal vector".into()));
    }
    let pairing = dot(point, normal);
    Ok(ExactDistanceSq {
        numerator: &pairing * &pairing,
        denominator: norm_sq,
    })
}

#[inline]
fn dot2(a: Point, b: Point) -> i128 {
    a[0] as i128 * b[0] as i128 + a[1] as i128 * b[1] as i128
}

fn primitive(v: Point) -> Point {
    let g = v[0].gcd(&v[1]);
    [v[0] / g, v[1] / g]
}

/// The cone `R_+ v1 + R_+ v2` with primitive generators and primitive inward
/// edge normals: `u1` vanishes on `v1` and is positive on `v2`, and
/// symmetrically for `u2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalCone2D {
    v1: Point,
    v2: Point,
    u1: Point,
    u2: Point,
}

const COORD_LIMIT: i64 = 1 << 30;

impl RationalCone2D {
    pub fn new(v1: Point, v2: Point) -> Result<Self> {
        if v1.iter().chain(&v2).any(|c| c.abs() >= COORD_LIMIT) {
            return Err(Error::InvalidCone(
                "generator entries must stay below 2^30".into(),
            ));
        }
        if v1 == [0, 0] || v2 == [0, 0] {
            return Err(Error::InvalidCone("zero generator".into()));
        }
        if v1[0] as i128 * v2[1] as i128 - v1[1] as i128 * v2[0] as i128 == 0 {
            return Err(Error::InvalidCone(format!(
                "{v1:?} and {v2:?} are parallel; the cone is not strictly convex"
            )));
        }
        let (v1, v2) = (primitive(v1), primitive(v2));
        let inward = |edge: Point, other: Point| {
            let n = [-edge[1], edge[0]];
            if dot2(n, other) > 0 {
                n
            } else {
                [edge[1], -edge[0]]
            }
        };
        Ok(RationalCone2D {
            v1,
            v2,
            u1: inward(v1, v2),
            u2: inward(v2, v1),
        })
    }

    pub fn generators(&self) -> [Point; 2] {
        [self.v1, self.v2]
    }

    pub fn normals(&self) -> [Point; 2] {
        [self.u1, self.u2]
    }

    pub fn contains(&self, p: Point) -> bool {
        dot2(p, self.u1) >= 0 && dot2(p, self.u2) >= 0
    }

    pub fn interior_contains(&self, p: Point) -> bool {
        dot2(p, self.u1) > 0 && dot2(p, self.u2) > 0
    }

    /// `c² = min(1/‖u1‖², 1/‖u2‖²)`: every interior lattice point is at
    /// squared distance at least `c²` from the boundary.
    pub fn lattice_distance_constant_sq(&self) -> ExactDistanceSq {
        ExactDistanceSq {
            numerator: BigInt::from(1),
            denominator: BigInt::from(dot2(self.u1, self.u1).max(dot2(self.u2, self.u2))),
        }
    }

    /// Smallest `m` with `m·c ≥ ‖R‖`, i.e. `m² ≥ ‖R‖² / c²`.
    pub fn effective_multiple_bound(&self, anchor: Point) -> Result<u64> {
        if !self.interior_contains(anchor) {
            return Err(Error::InvalidAnchor(format!(
                "{anchor:?} is not strictly inside the cone"
            )));
        }
        let c_sq = self.lattice_distance_constant_sq();
        // ‖R‖² / c² = ‖R‖² · denominator
        let target = BigInt::from(dot2(anchor, anchor)) * &c_sq.denominator;
        let mut m = target.sqrt();
        if &m * &m < target {
            m += 1;
        }
        Ok(u64::try_from(&m).expect("bounded by the coordinate limit"))
    }

    /// Whether `m·ξ - R ∈ C`.
    pub fn multiple_lands_in_translate(&self, xi: Point, anchor: Point, m: i64) -> bool {
        let shifted = [
            m as i128 * xi[0] as i128 - anchor[0] as i128,
            m as i128 * xi[1] as i128 - anchor[1] as i128,
        ];
        let pair = |u: Point| shifted[0] * u[0] as i128 + shifted[1] * u[1] as i128;
        pair(self.u1) >= 0 && pair(self.u2) >= 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceReport {
    pub holds: bool,
    /// First failing `ξ` in row-major order over `[-B, B]²`.
    pub witness: Option<Point>,
    pub interior_points_checked: u64,
}

/// Checks `m·ξ ∈ R + C` for every interior lattice point with `‖ξ‖_∞ ≤ B`.
pub fn brute_force_verify_with(
    cone: &RationalCone2D,
    anchor: Point,
    m: u64,
    box_radius: u64,
    exec: Execution,
) -> Result<BruteForceReport> {
    if m == 0 || box_radius == 0 {
        return Err(Error::InvalidArgument(
            "m and the box radius must be positive".into(),
        ));
    }
    let b = i64::try_from(box_radius)
        .ok()
        .filter(|&b| b < COORD_LIMIT)
        .ok_or_else(|| Error::InvalidArgument("box radius too large".into()))?;
    let m = i64::try_from(m).map_err(|_| Error::InvalidArgument("m too large".into()))?;
    let width = (2 * b + 1) as usize;
    // one row of the box per work item
    let rows = exec.map_range(0..width, |ix| {
        let x = ix as i64 - b;
        let mut checked = 0u64;
        for y in -b..=b {
            let xi = [x, y];
            if !cone.interior_contains(xi) {
                continue;
            }
            checked += 1;
            if !cone.multiple_lands_in_translate(xi, anchor, m) {
                return (checked, Some(xi));
            }
        }
        (checked, None)
    });
    let mut total = 0;
    for (checked, witness) in rows {
        total += checked;
        if witness.is_some() {
            return Ok(BruteForceReport {
                holds: false,
                witness,
                interior_points_checked: total,
            });
        }
    }
    Ok(BruteForceReport {
        holds: true,
        witness: None,
        interior_points_checked: total,
    })
}

pub fn brute_force_verify(
    cone: &RationalCone2D,
    anchor: Point,
    m: u64,
    box_radius: u64,
) -> Result<BruteForceReport> {
    brute_force_verify_with(cone, anchor, m, box_radius, Execution::default())
}

/// Smallest `m ≤ upper` passing [`brute_force_verify`] on the box, found by
/// bisection (membership of `m·ξ - R` is monotone in `m`). `None` if even
/// `upper` fails.
pub fn minimal_multiple_in_box(
    cone: &RationalCone2D,
    anchor: Point,
    box_radius: u64,
    upper: u64,
    exec: Execution,
) -> Result<Option<u64>> {
    if !brute_force_verify_with(cone, anchor, upper, box_radius, exec)?.holds {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1u64, upper);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if brute_force_verify_with(cone, anchor, mid, box_radius, exec)?.holds {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// The full result of a bound computation, as emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeBound {
    pub m: u64,
    pub c_sq: ExactDistanceSq,
    pub verified: Option<bool>,
}

pub fn cone_bound(
    cone: &RationalCone2D,
    anchor: Point,
    verify_box: Option<u64>,
) -> Result<ConeBound> {
    let m = cone.effective_multiple_bound(anchor)?;
    let verified = verify_box
        .map(|b| brute_force_verify(cone, anchor, m, b).map(|r| r.holds))
        .transpose()?;
    Ok(ConeBound {
        m,
        c_sq: cone.lattice_distance_constant_sq(),
        verified,
    })
}
