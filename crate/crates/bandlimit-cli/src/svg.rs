//! Minimal standalone SVG rendering for regions.

use bandlimit::Region;

/// Renders a region as a self-contained SVG document.
///
/// One path element per ring, each with the nonzero fill rule declared.
/// Outer rings (counterclockwise) are painted translucent blue, holes
/// (clockwise) opaque white on top. The y axis points up, so the viewBox is
/// written in flipped coordinates with a 5% margin around the bounding box.
pub fn render(region: &Region) -> String {
    const PIXEL_WIDTH: f64 = 800.0;
    let Some((lo, hi)) = region.bbox() else {
        return concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" ",
            "width=\"800\" height=\"800\"/>\n"
        )
        .into();
    };
    let span_x = (hi.x - lo.x).max(1e-12);
    let span_y = (hi.y - lo.y).max(1e-12);
    let margin = 0.05 * span_x.max(span_y);
    let view_x = lo.x - margin;
    let view_y = -(hi.y + margin);
    let view_w = span_x + 2.0 * margin;
    let view_h = span_y + 2.0 * margin;
    let stroke = 0.002 * view_w.max(view_h);

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{view_x} {view_y} {view_w} {view_h}\" \
         width=\"{PIXEL_WIDTH}\" height=\"{:.2}\">\n",
        PIXEL_WIDTH * view_h / view_w
    );
    // Holes after outers so they visibly punch out what they sit inside.
    let (outers, holes): (Vec<_>, Vec<_>) = region.rings.iter().partition(|r| signed_area2(r) >= 0.0);
    for ring in outers.iter().chain(holes.iter()) {
        let mut d = String::new();
        for (i, p) in ring.iter().enumerate() {
            let op = if i == 0 { 'M' } else { 'L' };
            // `+ 0.0` keeps a flipped 0.0 from printing as "-0".
            d.push_str(&format!("{op}{} {} ", p.x, -p.y + 0.0));
        }
        d.push('Z');
        let (fill, opacity) = if signed_area2(ring) >= 0.0 {
            ("#4878d0", 0.45)
        } else {
            ("#ffffff", 1.0)
        };
        out.push_str(&format!(
            "<path fill-rule=\"nonzero\" fill=\"{fill}\" fill-opacity=\"{opacity}\" \
             stroke=\"#16325c\" stroke-width=\"{stroke}\" d=\"{d}\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn signed_area2(ring: &[bandlimit::Pt]) -> f64 {
    let mut acc = 0.0;
    for (i, p) in ring.iter().enumerate() {
        let q = ring[(i + 1) % ring.len()];
        acc += p.x * q.y - q.x * p.y;
    }
    acc
}
