//! Deterministic SVG rendering of a diagram: world outline, cell edges,
//! site dots, and (when present) Delaunay edges, in a y-up coordinate frame.

use std::fmt::Write;

use raycell::{Diagram, Point2};

pub fn render(diagram: &Diagram) -> String {
    let (lo, hi) = diagram.world.bounding_box();
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let margin = 0.02 * span;
    let thin = 0.002 * span;
    let thick = 0.004 * span;
    let dot = 0.005 * span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        lo.x - margin,
        lo.y - margin,
        (hi.x - lo.x) + 2.0 * margin,
        (hi.y - lo.y) + 2.0 * margin
    );
    // Flip to y-up so the picture matches the math coordinates.
    let _ = writeln!(
        out,
        "<g transform=\"translate(0,{}) scale(1,-1)\">",
        lo.y + hi.y
    );

    let _ = writeln!(
        out,
        "<g id=\"world\" fill=\"none\" stroke=\"#333333\" stroke-width=\"{thick}\">"
    );
    let _ = writeln!(out, "<polygon points=\"{}\"/>", points_attr(diagram.world.vertices()));
    out.push_str("</g>\n");

    let _ = writeln!(
        out,
        "<g id=\"cells\" fill=\"none\" stroke=\"#4a78b0\" stroke-width=\"{thin}\">"
    );
    for cell in &diagram.cells {
        let ring: Vec<Point2> = cell.ccw.iter().map(|&i| cell.vertices[i].coords).collect();
        let _ = writeln!(out, "<polygon points=\"{}\"/>", points_attr(&ring));
    }
    out.push_str("</g>\n");

    if let Some(graph) = &diagram.delaunay {
        let _ = writeln!(
            out,
            "<g id=\"delaunay\" stroke=\"#c05040\" stroke-width=\"{thick}\">"
        );
        for (k, j) in graph.edges() {
            let (a, b) = (diagram.sites[k], diagram.sites[j]);
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                a.x, a.y, b.x, b.y
            );
        }
        out.push_str("</g>\n");
    }

    let _ = writeln!(out, "<g id=\"sites\" fill=\"#222222\">");
    for s in &diagram.sites {
        let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{dot}\"/>", s.x, s.y);
    }
    out.push_str("</g>\n");

    out.push_str("</g>\n</svg>\n");
    out
}

fn points_attr(points: &[Point2]) -> String {
    let mut attr = String::new();
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            attr.push(' ');
        }
        let _ = write!(attr, "{},{}", p.x, p.y);
    }
    attr
}
