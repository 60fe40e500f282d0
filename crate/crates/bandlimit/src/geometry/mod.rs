//! Plane regions and exact boolean operations on them.
//!
//! A [`Region`] is a list of closed rings. Membership uses the nonzero
//! winding rule summed over all rings, so inputs may self-intersect, overlap,
//! or wind multiple times. Operations that combine regions first map
//! coordinates into a shared [`FixedPointFrame`]; from there everything runs
//! on integers with i128 predicates, which makes intersection, area, and
//! coverage tests deterministic and exactly reproducible. Outputs are
//! normalized: disjoint simple rings, counterclockwise with the interior on
//! the left, holes clockwise.
//!
//! The price of snapping to the grid is that derived vertices (crossing
//! points, offset corners) move by at most one grid quantum, about 1e-7 in
//! default frames. Tolerances in callers should treat that as the resolution
//! floor.

mod boolean;
mod offset;

pub use offset::{fatten_points, offset_outward};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use boolean::{boolean, ring_area2, BoolOp, IPt, MAX_COORD};

/// A point in user coordinates. Serialized as a `[x, y]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub fn new(x: f64, y: f64) -> Self {
        Pt { x, y }
    }
}

impl From<[f64; 2]> for Pt {
    fn from(v: [f64; 2]) -> Self {
        Pt { x: v[0], y: v[1] }
    }
}

impl From<Pt> for [f64; 2] {
    fn from(p: Pt) -> Self {
        [p.x, p.y]
    }
}

/// A plane region given by closed rings under the nonzero winding rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub rings: Vec<Vec<Pt>>,
}

impl Region {
    pub fn empty() -> Self {
        Region { rings: Vec::new() }
    }

    pub fn from_ring(ring: Vec<Pt>) -> Self {
        Region { rings: vec![ring] }
    }

    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
    }

    /// Total vertex count across rings.
    pub fn vertex_count(&self) -> usize {
        self.rings.iter().map(Vec::len).sum()
    }

    /// Axis-aligned bounding box, None for an empty region.
    pub fn bbox(&self) -> Option<(Pt, Pt)> {
        let mut it = self.rings.iter().flatten();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in self.rings.iter().flatten() {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Nonzero-rule membership, evaluated in floating point. Points on or
    /// extremely near ring edges may land on either side.
    pub fn contains(&self, p: Pt) -> bool {
        self.rings.iter().map(|r| winding_number(r, p)).sum::<i32>() != 0
    }
}

/// Maps user coordinates onto the integer grid shared by boolean operations.
///
/// All regions entering one operation must use the same frame; drivers build
/// a single frame up front from an a-priori bound on everything they will
/// touch. The default scale keeps a grid quantum of 1e-7; frames covering
/// very large extents shrink the scale to stay inside the safe integer range.
#[derive(Clone, Copy, Debug)]
pub struct FixedPointFrame {
    scale: f64,
    origin: Pt,
}

impl FixedPointFrame {
    pub const DEFAULT_SCALE: f64 = 1.0e7;

    /// Safety headroom between the declared extent and the integer limit.
    const MARGIN: f64 = 1.05;

    pub fn new(scale: f64, origin: Pt) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Parameter(format!("frame scale must be positive, got {scale}")));
        }
        if !(origin.x.is_finite() && origin.y.is_finite()) {
            return Err(Error::Parameter("frame origin must be finite".into()));
        }
        Ok(FixedPointFrame { scale, origin })
    }

    /// Frame centered at `origin` guaranteed to hold every point within
    /// `half_extent` of it in either coordinate. Uses the default scale when
    /// possible and shrinks it for larger extents.
    pub fn centered(origin: Pt, half_extent: f64) -> Result<Self> {
        if !(half_extent >= 0.0 && half_extent.is_finite()) {
            return Err(Error::Parameter(format!(
                "frame half-extent must be finite and nonnegative, got {half_extent}"
            )));
        }
        let limit = MAX_COORD as f64;
        let needed = half_extent * Self::MARGIN;
        let scale = if needed * Self::DEFAULT_SCALE <= limit {
            Self::DEFAULT_SCALE
        } else {
            limit / needed
        };
        Self::new(scale, origin)
    }

    /// Like [`centered`](Self::centered), but at the finest scale whose
    /// integer coordinates still fit the boolean core's budget. Long
    /// intersection chains accumulate snapping drift proportional to the
    /// quantum, so they want the quantum as small as the extent allows.
    pub fn tightest(origin: Pt, half_extent: f64) -> Result<Self> {
        if !(half_extent > 0.0 && half_extent.is_finite()) {
            return Err(Error::Parameter(format!(
                "frame half-extent must be finite and positive, got {half_extent}"
            )));
        }
        Self::new(MAX_COORD as f64 / (half_extent * Self::MARGIN), origin)
    }

    /// Frame fitted to the bounding box of the given regions plus a margin on
    /// every side.
    pub fn fit<'a>(regions: impl IntoIterator<Item = &'a Region>, margin: f64) -> Result<Self> {
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(Error::Parameter(format!("frame margin must be nonnegative, got {margin}")));
        }
        let mut bbox: Option<(Pt, Pt)> = None;
        for region in regions {
            if let Some((lo, hi)) = region.bbox() {
                bbox = Some(match bbox {
                    None => (lo, hi),
                    Some((l, h)) => (
                        Pt::new(l.x.min(lo.x), l.y.min(lo.y)),
                        Pt::new(h.x.max(hi.x), h.y.max(hi.y)),
                    ),
                });
            }
        }
        match bbox {
            None => Self::new(Self::DEFAULT_SCALE, Pt::new(0.0, 0.0)),
            Some((lo, hi)) => {
                if ![lo.x, lo.y, hi.x, hi.y].iter().all(|v| v.is_finite()) {
                    return Err(Error::Input("region has non-finite coordinates".into()));
                }
                let origin = Pt::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
                let half = 0.5 * (hi.x - lo.x).max(hi.y - lo.y) + margin;
                Self::centered(origin, half)
            }
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Length of one integer grid step in user units.
    pub fn quantum(&self) -> f64 {
        1.0 / self.scale
    }

    fn to_int(&self, p: Pt) -> Result<IPt> {
        let x = ((p.x - self.origin.x) * self.scale).round();
        let y = ((p.y - self.origin.y) * self.scale).round();
        let lim = MAX_COORD as f64;
        if !(x.abs() <= lim && y.abs() <= lim) {
            return Err(Error::FrameOverflow { x: p.x, y: p.y });
        }
        Ok((x as i64, y as i64))
    }

    fn to_user(&self, q: IPt) -> Pt {
        Pt::new(
            q.0 as f64 / self.scale + self.origin.x,
            q.1 as f64 / self.scale + self.origin.y,
        )
    }

    fn area_from_doubled(&self, a2: i128) -> f64 {
        a2 as f64 / (2.0 * self.scale * self.scale)
    }
}

fn to_int_rings(region: &Region, frame: &FixedPointFrame) -> Result<Vec<Vec<IPt>>> {
    region
        .rings
        .iter()
        .map(|ring| ring.iter().map(|&p| frame.to_int(p)).collect())
        .collect()
}

fn from_int_rings(rings: Vec<Vec<IPt>>, frame: &FixedPointFrame) -> Region {
    Region {
        rings: rings
            .into_iter()
            .map(|ring| ring.into_iter().map(|q| frame.to_user(q)).collect())
            .collect(),
    }
}

/// Self-union: resolves arbitrary winding into disjoint simple rings
/// (counterclockwise outers, clockwise holes) covering the same set.
pub fn normalize(region: &Region, frame: &FixedPointFrame) -> Result<Region> {
    let ra = to_int_rings(region, frame)?;
    Ok(from_int_rings(boolean(&ra, &[], BoolOp::Normalize)?, frame))
}

/// Intersection of two regions under the nonzero rule on each operand.
pub fn intersect(a: &Region, b: &Region, frame: &FixedPointFrame) -> Result<Region> {
    if a.is_empty() || b.is_empty() {
        return Ok(Region::empty());
    }
    let ra = to_int_rings(a, frame)?;
    let rb = to_int_rings(b, frame)?;
    Ok(from_int_rings(boolean(&ra, &rb, BoolOp::Intersect)?, frame))
}

/// Area of the covered set (multiply wound parts count once).
pub fn area(region: &Region, frame: &FixedPointFrame) -> Result<f64> {
    let ra = to_int_rings(region, frame)?;
    let rings = boolean(&ra, &[], BoolOp::Normalize)?;
    Ok(frame.area_from_doubled(rings.iter().map(|r| ring_area2(r)).sum()))
}

/// Fast area for regions already produced by a boolean operation in the same
/// frame: plain signed shoelace sum, no arrangement pass.
pub(crate) fn area_of_normalized(region: &Region, frame: &FixedPointFrame) -> Result<f64> {
    let ra = to_int_rings(region, frame)?;
    Ok(frame.area_from_doubled(ra.iter().map(|r| ring_area2(r)).sum()))
}

/// Total boundary length over all rings, ignoring orientation and overlap.
pub(crate) fn perimeter_of(region: &Region) -> f64 {
    region
        .rings
        .iter()
        .map(|r| {
            (0..r.len())
                .map(|i| {
                    let p = r[i];
                    let q = r[(i + 1) % r.len()];
                    (q.x - p.x).hypot(q.y - p.y)
                })
                .sum::<f64>()
        })
        .sum()
}

/// True when `area(b \ a) <= tol`. With `tol <= 0` the comparison is exact in
/// the fixed-point grid, so `covers(x, x, 0.0)` always holds.
pub fn covers(a: &Region, b: &Region, tol: f64, frame: &FixedPointFrame) -> Result<bool> {
    if !tol.is_finite() && !(tol == f64::INFINITY) {
        return Err(Error::Parameter("coverage tolerance must not be NaN".into()));
    }
    let rb = to_int_rings(b, frame)?;
    let nb = boolean(&rb, &[], BoolOp::Normalize)?;
    let b2: i128 = nb.iter().map(|r| ring_area2(r)).sum();
    let i2: i128 = if a.is_empty() {
        0
    } else {
        let ra = to_int_rings(a, frame)?;
        boolean(&ra, &rb, BoolOp::Intersect)?
            .iter()
            .map(|r| ring_area2(r))
            .sum()
    };
    let diff2 = b2 - i2;
    if tol <= 0.0 {
        Ok(diff2 <= 0)
    } else {
        Ok(frame.area_from_doubled(diff2) <= tol)
    }
}

/// Winding number of a closed ring around a point, positive for
/// counterclockwise loops. Evaluated in floating point; exact away from the
/// ring, unspecified side for points on it.
pub fn winding_number(ring: &[Pt], p: Pt) -> i32 {
    let mut w = 0;
    let n = ring.len();
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        let orient = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if a.y <= p.y {
            if b.y > p.y && orient > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && orient < 0.0 {
            w -= 1;
        }
    }
    w
}
