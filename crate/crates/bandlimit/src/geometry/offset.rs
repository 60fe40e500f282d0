//! Outward offsets and point fattening.
//!
//! Both constructions bracket a true Euclidean neighborhood between an inner
//! and an outer polygon so callers get two-sided guarantees: the offset of a
//! region by `delta` contains every point within `delta` of it and stays
//! within `cap`; a fattened point set contains the `radius`-balls and stays
//! within the circumradius `radius / cos(pi/sides)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::boolean::{boolean, BoolOp, IPt};
use crate::geometry::{from_int_rings, normalize, FixedPointFrame, Pt, Region};

/// Expands a region outward by at least `delta` and at most `cap`.
///
/// Each boundary edge grows a rectangular collar of width `delta` on its
/// outer side; each convex corner grows a polygonal fan whose chords stay at
/// distance exactly `delta` while its vertices reach `delta / cos(step/2)`,
/// with the step count chosen so that radius never exceeds `cap`. Requires
/// `delta < cap <= 2 * delta`; the result is the normalized union, accurate
/// to the frame's grid quantum.
pub fn offset_outward(region: &Region, delta: f64, cap: f64, frame: &FixedPointFrame) -> Result<Region> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Parameter(format!("offset delta must be positive, got {delta}")));
    }
    if !(cap > delta && cap <= 2.0 * delta) {
        return Err(Error::Parameter(format!(
            "offset cap must lie in (delta, 2*delta], got delta = {delta}, cap = {cap}"
        )));
    }
    if region.is_empty() {
        return Ok(Region::empty());
    }
    let base = normalize(region, frame)?;
    if base.is_empty() {
        return Ok(Region::empty());
    }

    // Largest fan step keeping vertex radius delta / cos(step/2) within cap.
    let max_step = 2.0 * (delta / cap).acos().max(1.0e-3);

    let mut rings = base.rings.clone();
    for ring in &base.rings {
        let mut pts = ring.clone();
        pts.dedup();
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        let n = pts.len();
        if n < 3 {
            continue;
        }
        // Edge collars: the exact delta-neighborhood of each edge on its
        // right (outward) side.
        for i in 0..n {
            let p = pts[i];
            let q = pts[(i + 1) % n];
            let (dx, dy) = (q.x - p.x, q.y - p.y);
            let len = dx.hypot(dy);
            if len == 0.0 {
                continue;
            }
            let (nx, ny) = (dy / len, -dx / len);
            rings.push(vec![
                p,
                Pt::new(p.x + delta * nx, p.y + delta * ny),
                Pt::new(q.x + delta * nx, q.y + delta * ny),
                q,
            ]);
        }
        // Corner fans where the boundary turns left: the outward normal cone
        // is nonempty exactly there.
        for i in 0..n {
            let a = pts[(i + n - 1) % n];
            let v = pts[i];
            let b = pts[(i + 1) % n];
            let (ux, uy) = (v.x - a.x, v.y - a.y);
            let (wx, wy) = (b.x - v.x, b.y - v.y);
            if ux * wy - uy * wx <= 0.0 {
                continue;
            }
            let lu = ux.hypot(uy);
            let lw = wx.hypot(wy);
            if lu == 0.0 || lw == 0.0 {
                continue;
            }
            // Right normals of the incoming and outgoing edges.
            let n1 = (uy / lu, -ux / lu);
            let n2 = (wy / lw, -wx / lw);
            let turn = (n1.0 * n2.1 - n1.1 * n2.0).atan2(n1.0 * n2.0 + n1.1 * n2.1);
            if turn <= 0.0 {
                continue;
            }
            let steps = (turn / max_step).ceil().max(1.0);
            let step = turn / steps;
            let radius = delta / (0.5 * step).cos();
            let start = n1.1.atan2(n1.0);
            let mut fan = Vec::with_capacity(steps as usize + 2);
            fan.push(v);
            for k in 0..=(steps as usize) {
                let ang = start + step * k as f64;
                fan.push(Pt::new(v.x + radius * ang.cos(), v.y + radius * ang.sin()));
            }
            rings.push(fan);
        }
    }
    normalize(&Region { rings }, frame)
}

/// Union of regular polygons centered at the given points, each with inradius
/// `radius` (so the polygons contain the radius-balls) and circumradius
/// `radius / cos(pi/sides)`.
pub fn fatten_points(points: &[Pt], radius: f64, sides: usize, frame: &FixedPointFrame) -> Result<Region> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Parameter(format!("fatten radius must be positive, got {radius}")));
    }
    if sides < 3 {
        return Err(Error::Parameter(format!("fatten needs at least 3 sides, got {sides}")));
    }
    if points.is_empty() {
        return Ok(Region::empty());
    }
    let circum = radius / (PI / sides as f64).cos();
    let template: Vec<(f64, f64)> = (0..sides)
        .map(|j| {
            let ang = PI * (2 * j + 1) as f64 / sides as f64;
            (circum * ang.cos(), circum * ang.sin())
        })
        .collect();

    // Thousands of overlapping polygons in one arrangement pass would square
    // the crossing count. Instead: order centers along a Morton curve so
    // chunks are spatially coherent, union each chunk (neighbors collapse
    // into short outlines immediately), then merge pairwise up a tree. Every
    // union of already-normalized inputs is a plain renormalization, because
    // their windings are 0/1 and add.
    let chunk_len = (1024 / sides).max(1);
    let mut level: Vec<Vec<Vec<IPt>>> = Vec::new();
    for group in morton_order(points).chunks(chunk_len) {
        let rings: Vec<Vec<IPt>> = group
            .iter()
            .map(|&i| {
                let c = points[i];
                template
                    .iter()
                    .map(|&(dx, dy)| frame.to_int(Pt::new(c.x + dx, c.y + dy)))
                    .collect()
            })
            .collect::<Result<_>>()?;
        level.push(boolean(&rings, &[], BoolOp::Normalize)?);
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(mut a) = it.next() {
            match it.next() {
                Some(b) => {
                    a.extend(b);
                    next.push(boolean(&a, &[], BoolOp::Normalize)?);
                }
                None => next.push(a),
            }
        }
        level = next;
    }
    Ok(from_int_rings(level.pop().unwrap_or_default(), frame))
}

/// Indices of `points` sorted along a Morton (Z-order) curve.
fn morton_order(points: &[Pt]) -> Vec<usize> {
    let mut lo = Pt::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Pt::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    let cells = ((1u32 << 21) - 1) as f64;
    let sx = if hi.x > lo.x { cells / (hi.x - lo.x) } else { 0.0 };
    let sy = if hi.y > lo.y { cells / (hi.y - lo.y) } else { 0.0 };
    let mut keyed: Vec<(u64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let key = spread(((p.x - lo.x) * sx) as u32) | (spread(((p.y - lo.y) * sy) as u32) << 1);
            (key, i)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Spaces the low 21 bits out to even positions.
fn spread(v: u32) -> u64 {
    let mut x = v as u64 & 0x1f_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}
