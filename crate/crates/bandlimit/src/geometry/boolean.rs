//! Exact boolean operations on integer-coordinate polygon sets.
//!
//! Input rings may self-intersect, overlap, repeat edges, or wind multiple
//! times; membership is the nonzero rule applied to the sum of ring winding
//! numbers per operand. The pipeline is
//!
//!   1. snap-round the segment arrangement: collect hot pixels (unit grid
//!      squares around endpoints and rounded crossing points, found with
//!      exact i128 predicates) and reroute every segment through the center
//!      of every hot pixel it touches, until no crossings remain,
//!   2. merge coincident segments, summing signed multiplicities,
//!   3. a left-to-right sweep that attaches to each segment the operand
//!      winding numbers of the face on its low side,
//!   4. keep segments where the inside/outside classification differs across
//!      the segment, directed so the interior is on the left,
//!   5. stitch directed edges into rings by angular continuation.
//!
//! Every step is deterministic: all orderings are total orders on integer
//! tuples, and hash maps are only ever used for keyed lookup, never iterated.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub(crate) type IPt = (i64, i64);

/// Largest |coordinate| the exact predicates accept. Crossing-point
/// computations multiply three coordinate-sized factors, so 2^40 keeps every
/// intermediate below 2^125 < i128::MAX.
pub(crate) const MAX_COORD: i64 = 1 << 40;

/// Which operand-winding combinations count as inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BoolOp {
    /// Nonzero winding of operand A alone (self-union / normalization).
    Normalize,
    /// Nonzero winding of both operands.
    Intersect,
}

impl BoolOp {
    #[inline]
    fn inside(self, wa: i64, wb: i64) -> bool {
        match self {
            BoolOp::Normalize => wa != 0,
            BoolOp::Intersect => wa != 0 && wb != 0,
        }
    }
}

#[derive(Debug, Clone)]
struct Seg {
    a: IPt,
    b: IPt,
    /// Net traversal multiplicity of each operand along a -> b.
    da: i64,
    db: i64,
}

#[inline]
fn cross(o: IPt, p: IPt, q: IPt) -> i128 {
    (p.0 - o.0) as i128 * (q.1 - o.1) as i128 - (p.1 - o.1) as i128 * (q.0 - o.0) as i128
}

#[inline]
fn vec_cross(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.1 as i128 - u.1 as i128 * v.0 as i128
}

#[inline]
fn vec_dot(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.0 as i128 + u.1 as i128 * v.1 as i128
}

/// Rounded division, ties away from zero. Exact for |num| < 2^126.
#[inline]
fn round_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    if num >= 0 {
        (num + den / 2) / den
    } else {
        -((-num + den / 2) / den)
    }
}

/// Collects ring edges as canonical segments (a < b lexicographically) with
/// signed multiplicity on the chosen operand.
fn collect_segments(rings: &[Vec<IPt>], operand_b: bool, out: &mut Vec<Seg>) {
    for ring in rings {
        let n = ring.len();
        for i in 0..n {
            let p = ring[i];
            let q = ring[(i + 1) % n];
            if p == q {
                continue;
            }
            let (a, b, sign) = if p < q { (p, q, 1) } else { (q, p, -1) };
            let (da, db) = if operand_b { (0, sign) } else { (sign, 0) };
            out.push(Seg { a, b, da, db });
        }
    }
}

/// True if collinear point p lies strictly inside segment (a, b).
#[inline]
fn strictly_between(a: IPt, b: IPt, p: IPt) -> bool {
    debug_assert!(a < b);
    a < p && p < b
}

/// Collects every pairwise incident point: rounded proper crossings, exact
/// touch points (endpoint on another segment's interior), and endpoints
/// contained in a collinear overlap. An empty result certifies the segment
/// set is planar up to shared endpoints.
fn incident_points(segs: &[Seg]) -> std::collections::BTreeSet<IPt> {
    let mut pts = std::collections::BTreeSet::new();

    // x-sweep over segment spans; active holds indices whose span may still
    // overlap the sweep position.
    let mut order: Vec<u32> = (0..segs.len() as u32).collect();
    order.sort_unstable_by_key(|&i| {
        let s = &segs[i as usize];
        (s.a, s.b, i)
    });
    let mut active: Vec<u32> = Vec::new();
    for &i in &order {
        let si = &segs[i as usize];
        active.retain(|&j| segs[j as usize].b.0 >= si.a.0);
        let (ilo, ihi) = if si.a.1 <= si.b.1 {
            (si.a.1, si.b.1)
        } else {
            (si.b.1, si.a.1)
        };
        for &j in &active {
            let sj = &segs[j as usize];
            let (jlo, jhi) = if sj.a.1 <= sj.b.1 {
                (sj.a.1, sj.b.1)
            } else {
                (sj.b.1, sj.a.1)
            };
            if jlo > ihi || jhi < ilo || sj.a.0 > si.b.0 {
                continue;
            }
            pair_incidents(si, sj, &mut pts);
        }
        active.push(i);
    }
    pts
}

/// Records the incident points of one segment pair.
fn pair_incidents(s: &Seg, t: &Seg, pts: &mut std::collections::BTreeSet<IPt>) {
    let d1 = cross(s.a, s.b, t.a);
    let d2 = cross(s.a, s.b, t.b);
    let d3 = cross(t.a, t.b, s.a);
    let d4 = cross(t.a, t.b, s.b);

    if d1 == 0 && d2 == 0 {
        // Collinear: endpoints strictly inside the other segment.
        for p in [t.a, t.b] {
            if strictly_between(s.a, s.b, p) {
                pts.insert(p);
            }
        }
        for p in [s.a, s.b] {
            if strictly_between(t.a, t.b, p) {
                pts.insert(p);
            }
        }
        return;
    }

    if (d1 > 0) != (d2 > 0) && d1 != 0 && d2 != 0 && (d3 > 0) != (d4 > 0) && d3 != 0 && d4 != 0 {
        // Proper crossing: parameter on s is num / den along (s.a -> s.b).
        // Rounding then clamping to the bounding box keeps the point within
        // half a grid unit of the true crossing per coordinate, so the pixel
        // around it is guaranteed to touch both segments.
        let ds = (s.b.0 - s.a.0, s.b.1 - s.a.1);
        let dt = (t.b.0 - t.a.0, t.b.1 - t.a.1);
        let mut den = vec_cross(ds, dt);
        let mut num = vec_cross((t.a.0 - s.a.0, t.a.1 - s.a.1), dt);
        if den < 0 {
            den = -den;
            num = -num;
        }
        debug_assert!(den > 0 && num >= 0 && num <= den);
        let x = s.a.0 as i128 + round_div(num * ds.0 as i128, den);
        let y = s.a.1 as i128 + round_div(num * ds.1 as i128, den);
        pts.insert((
            (x.clamp(s.a.0.min(s.b.0) as i128, s.a.0.max(s.b.0) as i128)) as i64,
            (y.clamp(s.a.1.min(s.b.1) as i128, s.a.1.max(s.b.1) as i128)) as i64,
        ));
        return;
    }

    // Touching: an endpoint of one lies on the interior of the other.
    if d1 == 0 && strictly_between(s.a, s.b, t.a) {
        pts.insert(t.a);
    }
    if d2 == 0 && strictly_between(s.a, s.b, t.b) {
        pts.insert(t.b);
    }
    if d3 == 0 && strictly_between(t.a, t.b, s.a) {
        pts.insert(s.a);
    }
    if d4 == 0 && strictly_between(t.a, t.b, s.b) {
        pts.insert(s.b);
    }
}

/// True if segment (a, b) intersects the closed unit square centered on
/// lattice point c. Exact: works in doubled translated coordinates, so the
/// square spans [-1, 1]^2. A segment intersects an axis-aligned box iff their
/// bounding boxes overlap and the box does not lie strictly on one side of
/// the segment's supporting line.
fn seg_touches_pixel(a: IPt, b: IPt, c: IPt) -> bool {
    let ax = 2 * (a.0 - c.0);
    let ay = 2 * (a.1 - c.1);
    let bx = 2 * (b.0 - c.0);
    let by = 2 * (b.1 - c.1);
    if ax.max(bx) < -1 || ax.min(bx) > 1 || ay.max(by) < -1 || ay.min(by) > 1 {
        return false;
    }
    let dx = (bx - ax) as i128;
    let dy = (by - ay) as i128;
    let (mut pos, mut neg) = (false, false);
    for (cx, cy) in [(-1i64, -1i64), (1, -1), (1, 1), (-1, 1)] {
        let cr = dx * (cy - ay) as i128 - dy * (cx - ax) as i128;
        if cr > 0 {
            pos = true;
        } else if cr < 0 {
            neg = true;
        } else {
            return true;
        }
    }
    pos && neg
}

/// For every segment, the hot pixel centers it must be rerouted through:
/// pixels the segment touches without having the center as an endpoint.
fn pixel_incidences(
    segs: &[Seg],
    hot: &std::collections::BTreeSet<IPt>,
) -> HashMap<u32, Vec<IPt>> {
    let mut order: Vec<u32> = (0..segs.len() as u32).collect();
    order.sort_unstable_by_key(|&i| segs[i as usize].a.0);
    let mut inc: HashMap<u32, Vec<IPt>> = HashMap::new();
    let mut active: Vec<u32> = Vec::new();
    let mut next = 0usize;
    // A pixel centered at integer c can only touch segments whose x-span
    // contains c.0 (the half-unit apron rounds away), and likewise in y.
    for &c in hot {
        while next < order.len() && segs[order[next] as usize].a.0 <= c.0 {
            active.push(order[next]);
            next += 1;
        }
        active.retain(|&i| segs[i as usize].b.0 >= c.0);
        for &i in &active {
            let s = &segs[i as usize];
            let (ylo, yhi) = if s.a.1 <= s.b.1 {
                (s.a.1, s.b.1)
            } else {
                (s.b.1, s.a.1)
            };
            if c.1 < ylo || c.1 > yhi || c == s.a || c == s.b {
                continue;
            }
            if seg_touches_pixel(s.a, s.b, c) {
                inc.entry(i).or_default().push(c);
            }
        }
    }
    inc
}

/// Splits segments at recorded points and merges coincident pieces.
///
/// Split points need not lie on the segment: a rounded crossing can sit a
/// grid unit off the line, and the segment is rerouted through it. Points are
/// therefore ordered by projection onto the segment direction (not
/// lexicographically), and each piece of the resulting polyline is
/// re-canonicalized on its own.
fn split_and_merge(segs: Vec<Seg>, mut splits: HashMap<u32, Vec<IPt>>) -> Vec<Seg> {
    fn emit(pieces: &mut Vec<Seg>, from: IPt, to: IPt, da: i64, db: i64) {
        if from == to {
            return;
        }
        if from < to {
            pieces.push(Seg { a: from, b: to, da, db });
        } else {
            pieces.push(Seg { a: to, b: from, da: -da, db: -db });
        }
    }
    let mut pieces: Vec<Seg> = Vec::with_capacity(segs.len() * 2);
    for (idx, seg) in segs.into_iter().enumerate() {
        match splits.remove(&(idx as u32)) {
            None => pieces.push(seg),
            Some(mut pts) => {
                let d = (seg.b.0 - seg.a.0, seg.b.1 - seg.a.1);
                pts.sort_unstable_by_key(|&p| {
                    (vec_dot((p.0 - seg.a.0, p.1 - seg.a.1), d), p)
                });
                pts.dedup();
                let mut prev = seg.a;
                for p in pts {
                    emit(&mut pieces, prev, p, seg.da, seg.db);
                    prev = p;
                }
                emit(&mut pieces, prev, seg.b, seg.da, seg.db);
            }
        }
    }
    pieces.sort_unstable_by_key(|s| (s.a, s.b));
    let mut merged: Vec<Seg> = Vec::with_capacity(pieces.len());
    for piece in pieces {
        match merged.last_mut() {
            Some(last) if last.a == piece.a && last.b == piece.b => {
                last.da += piece.da;
                last.db += piece.db;
            }
            _ => merged.push(piece),
        }
    }
    merged.retain(|s| s.da != 0 || s.db != 0);
    merged
}

/// y-position comparison of non-vertical segment s at sweep column x against
/// a doubled target ordinate y2: sign of (2 * y_s(x) - y2).
#[inline]
fn cmp_seg_y2(s: &Seg, x: i64, y2: i128) -> std::cmp::Ordering {
    let dx = (s.b.0 - s.a.0) as i128;
    debug_assert!(dx > 0);
    let dy = (s.b.1 - s.a.1) as i128;
    let lhs = 2 * (s.a.1 as i128 * dx + (x - s.a.0) as i128 * dy);
    lhs.cmp(&(y2 * dx))
}

/// Winding data attached to each merged segment: operand windings of the face
/// on the segment's low side (below for rightward segments, east for vertical
/// ones).
struct Classified {
    seg: Seg,
    wa_low: i64,
    wb_low: i64,
}

/// One sweep left to right computes low-side windings for every segment.
fn sweep_windings(segs: Vec<Seg>) -> Vec<Classified> {
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Kind {
        Remove,
        Insert,
        Vertical,
    }
    let mut events: Vec<(i64, Kind, u32)> = Vec::with_capacity(segs.len() * 2);
    for (i, s) in segs.iter().enumerate() {
        if s.a.0 == s.b.0 {
            events.push((s.a.0, Kind::Vertical, i as u32));
        } else {
            events.push((s.a.0, Kind::Insert, i as u32));
            events.push((s.b.0, Kind::Remove, i as u32));
        }
    }
    // Removals first at each column, then insertions bottom-up (ordinate,
    // then slope): a segment's low-side winding must already include every
    // same-column segment passing below it just right of the column.
    events.sort_unstable_by(|&(x1, k1, i1), &(x2, k2, i2)| {
        (x1, k1).cmp(&(x2, k2)).then_with(|| {
            if k1 == Kind::Insert && k2 == Kind::Insert {
                let (s1, s2) = (&segs[i1 as usize], &segs[i2 as usize]);
                s1.a.1
                    .cmp(&s2.a.1)
                    .then_with(|| {
                        let d1 = (s1.b.0 - s1.a.0, s1.b.1 - s1.a.1);
                        let d2 = (s2.b.0 - s2.a.0, s2.b.1 - s2.a.1);
                        // Ascending slope; cross(d2, d1) < 0 means d1 is shallower.
                        vec_cross(d2, d1).cmp(&0)
                    })
                    .then(i1.cmp(&i2))
            } else {
                i1.cmp(&i2)
            }
        })
    });

    let mut low = vec![(0i64, 0i64); segs.len()];
    // Active list ordered bottom to top.
    let mut active: Vec<u32> = Vec::new();
    for &(x, kind, idx) in &events {
        let s = &segs[idx as usize];
        match kind {
            Kind::Remove => {
                if let Some(pos) = active.iter().position(|&j| j == idx) {
                    active.remove(pos);
                }
            }
            Kind::Insert => {
                // Find the first active segment not below s at x+.
                let y2 = 2 * s.a.1 as i128;
                let dxn = (s.b.0 - s.a.0) as i128;
                let dyn_ = (s.b.1 - s.a.1) as i128;
                let mut pos = active.len();
                for (k, &j) in active.iter().enumerate() {
                    let t = &segs[j as usize];
                    let below = match cmp_seg_y2(t, x, y2) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => {
                            // Shared point: order by slope just right of x.
                            let dxt = (t.b.0 - t.a.0) as i128;
                            let dyt = (t.b.1 - t.a.1) as i128;
                            match (dyt * dxn).cmp(&(dyn_ * dxt)) {
                                std::cmp::Ordering::Less => true,
                                std::cmp::Ordering::Greater => false,
                                std::cmp::Ordering::Equal => j < idx,
                            }
                        }
                    };
                    if !below {
                        pos = k;
                        break;
                    }
                }
                let mut wa = 0;
                let mut wb = 0;
                for &j in &active[..pos] {
                    wa += segs[j as usize].da;
                    wb += segs[j as usize].db;
                }
                low[idx as usize] = (wa, wb);
                active.insert(pos, idx);
            }
            Kind::Vertical => {
                // Winding just east of the segment's midpoint.
                let y2 = (s.a.1 as i128) + (s.b.1 as i128);
                let mut wa = 0;
                let mut wb = 0;
                for &j in &active {
                    let t = &segs[j as usize];
                    let below = match cmp_seg_y2(t, x, y2) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        // Touch mid-segment is impossible post-split; fall
                        // back on the slope sign for safety.
                        std::cmp::Ordering::Equal => t.b.1 < t.a.1,
                    };
                    if below {
                        wa += t.da;
                        wb += t.db;
                    }
                }
                low[idx as usize] = (wa, wb);
            }
        }
    }

    segs.into_iter()
        .zip(low)
        .map(|(seg, (wa_low, wb_low))| Classified { seg, wa_low, wb_low })
        .collect()
}

/// Keeps boundary edges of the chosen operation, directed interior-left.
fn select_edges(classified: &[Classified], op: BoolOp) -> Vec<(IPt, IPt)> {
    let mut out = Vec::new();
    for c in classified {
        let inside_low = op.inside(c.wa_low, c.wb_low);
        let inside_high = op.inside(c.wa_low + c.seg.da, c.wb_low + c.seg.db);
        if inside_low == inside_high {
            continue;
        }
        // The high side is the left of the canonical direction.
        if inside_high {
            out.push((c.seg.a, c.seg.b));
        } else {
            out.push((c.seg.b, c.seg.a));
        }
    }
    out
}

/// Chains directed edges into closed rings. At shared vertices the next edge
/// is the first unused outgoing edge encountered scanning clockwise from the
/// reversed incoming direction, which keeps touching rings from crossing.
fn stitch(edges: Vec<(IPt, IPt)>) -> Vec<Vec<IPt>> {
    let mut by_vertex: HashMap<IPt, Vec<u32>> = HashMap::new();
    for (i, &(from, _)) in edges.iter().enumerate() {
        by_vertex.entry(from).or_default().push(i as u32);
    }
    let mut used = vec![false; edges.len()];
    let mut rings = Vec::new();

    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let mut ring = Vec::new();
        let mut cur = start as u32;
        loop {
            used[cur as usize] = true;
            let (from, to) = edges[cur as usize];
            ring.push(from);
            if to == edges[start].0 {
                break;
            }
            let rev = (from.0 - to.0, from.1 - to.1);
            let Some(next) = pick_next(&edges, &used, by_vertex.get(&to), rev) else {
                // Dead end: drop the partial chain (defensive; cannot happen
                // for consistent boundary data).
                ring.clear();
                break;
            };
            cur = next;
        }
        if ring.len() >= 3 {
            rings.push(ring);
        }
    }
    rings
}

fn pick_next(
    edges: &[(IPt, IPt)],
    used: &[bool],
    candidates: Option<&Vec<u32>>,
    rev: (i64, i64),
) -> Option<u32> {
    let candidates = candidates?;
    let mut best: Option<(u8, (i64, i64), u32)> = None;
    for &cand in candidates {
        if used[cand as usize] {
            continue;
        }
        let (from, to) = edges[cand as usize];
        let dir = (to.0 - from.0, to.1 - from.1);
        let cr = vec_cross(rev, dir);
        if cr == 0 && vec_dot(rev, dir) > 0 {
            // Exact continuation along the reversed direction wins outright.
            return Some(cand);
        }
        // Sector by clockwise distance from rev: cross < 0 is the near side.
        let sector = if cr < 0 {
            0
        } else if cr == 0 {
            1
        } else {
            2
        };
        best = match best {
            None => Some((sector, dir, cand)),
            Some((bs, bd, bc)) => {
                if sector < bs || (sector == bs && vec_cross(dir, bd) < 0) {
                    Some((sector, dir, cand))
                } else {
                    Some((bs, bd, bc))
                }
            }
        };
    }
    best.map(|(_, _, c)| c)
}

/// Doubled signed area of an integer ring.
pub(crate) fn ring_area2(ring: &[IPt]) -> i128 {
    let mut sum = 0i128;
    for i in 0..ring.len() {
        let p = ring[i];
        let q = ring[(i + 1) % ring.len()];
        sum += p.0 as i128 * q.1 as i128 - q.0 as i128 * p.1 as i128;
    }
    sum
}

/// Runs the full pipeline. `rings_b` empty means a one-operand normalization.
pub(crate) fn boolean(rings_a: &[Vec<IPt>], rings_b: &[Vec<IPt>], op: BoolOp) -> Result<Vec<Vec<IPt>>> {
    for ring in rings_a.iter().chain(rings_b) {
        for &(x, y) in ring {
            if x.abs() > MAX_COORD || y.abs() > MAX_COORD {
                return Err(Error::FrameOverflow {
                    x: x as f64,
                    y: y as f64,
                });
            }
        }
    }
    let mut segs = Vec::new();
    collect_segments(rings_a, false, &mut segs);
    collect_segments(rings_b, true, &mut segs);
    if segs.is_empty() {
        return Ok(Vec::new());
    }
    // Snap rounding with hot pixels. A hot pixel is the unit grid square
    // around any vertex: segment endpoints plus rounded crossing points. Every
    // segment is rerouted through the center of every hot pixel it touches,
    // which moves it by at most half a unit per coordinate locally. Rerouting
    // all parties through the same centers (rather than splitting each pair
    // at its own rounded point) is what makes shallow crossings between
    // near-parallel segments collapse into shared vertices instead of weaving
    // back and forth across each other.
    segs = split_and_merge(segs, HashMap::new());
    let mut hot = incident_points(&segs);
    for seg in &segs {
        hot.insert(seg.a);
        hot.insert(seg.b);
    }
    let unstable = || {
        Error::Degenerate(
            "polygon arrangement did not stabilize; input coordinates may be pathological".into(),
        )
    };
    let mut certified = false;
    for _ in 0..8 {
        // Reroute until no segment passes through a non-endpoint hot pixel.
        // Split points always come from the hot set, so piece endpoints stay
        // inside it and the set needs no refresh inside this loop.
        let mut settled = false;
        for _ in 0..64 {
            let inc = pixel_incidences(&segs, &hot);
            if inc.is_empty() {
                settled = true;
                break;
            }
            segs = split_and_merge(segs, inc);
        }
        if !settled {
            return Err(unstable());
        }
        // The exit certificate: no proper crossings, touches, or partial
        // overlaps remain. Any residue means a crossing escaped its pixel;
        // grow the hot set and reroute again.
        let residue = incident_points(&segs);
        if residue.is_empty() {
            certified = true;
            break;
        }
        if residue.iter().all(|p| hot.contains(p)) {
            return Err(unstable());
        }
        hot.extend(residue);
    }
    if !certified {
        return Err(unstable());
    }
    let classified = sweep_windings(segs);
    let edges = select_edges(&classified, op);
    let mut rings = stitch(edges);
    rings.retain(|r| ring_area2(r) != 0);
    Ok(rings)
}
