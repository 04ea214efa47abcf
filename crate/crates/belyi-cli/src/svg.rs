use std::fmt::Write;

use belyi_core::NewtonPolygon;

const SCALE: i64 = 40;
const PAD: i64 = 30;

/// Faithful dump of the polygon data as an SVG: one line per segment
/// carrying its slope and lattice length as data attributes, one dot and
/// coordinate label per vertex. The y axis is flipped so larger
/// valuations sit higher.
pub fn render(polygon: &NewtonPolygon) -> String {
    let vs = polygon.vertices();
    let min_x = vs.iter().map(|v| v.0).min().unwrap_or(0);
    let max_x = vs.iter().map(|v| v.0).max().unwrap_or(0);
    let min_y = vs.iter().map(|v| v.1).min().unwrap_or(0);
    let max_y = vs.iter().map(|v| v.1).max().unwrap_or(0);
    let width = (max_x - min_x) * SCALE + 2 * PAD;
    let height = (max_y - min_y) * SCALE + 2 * PAD;
    let tx = |x: i64| (x - min_x) * SCALE + PAD;
    let ty = |y: i64| (max_y - y) * SCALE + PAD;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    for (edge, segment) in vs.windows(2).zip(polygon.segments()) {
        let (x0, y0) = edge[0];
        let (x1, y1) = edge[1];
        writeln!(
            out,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" \
             data-slope=\"{}\" data-length=\"{}\"/>",
            tx(x0),
            ty(y0),
            tx(x1),
            ty(y1),
            segment.slope,
            segment.length
        )
        .unwrap();
    }
    for &(x, y) in vs {
        writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" data-point=\"({x}, {y})\"/>",
            tx(x),
            ty(y)
        )
        .unwrap();
        writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\">({x}, {y})</text>",
            tx(x) + 6,
            ty(y) - 6
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
