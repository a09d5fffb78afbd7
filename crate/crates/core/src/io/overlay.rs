//! SVG overlay: the diagram in gray plus one colored layer per solution.

use std::fmt::Write as _;
use std::path::Path;

use super::IoError;
use crate::geometry::{Coord, Orientation, Point, Rect, Shape};
use crate::parser::{Node, SolutionForest};
use crate::scene::Scene;

const EXTENT: f64 = 8192.0;
const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fy<T: Coord>(y: T) -> f64 {
    EXTENT - y.as_f64()
}

fn pts<T: Coord>(ps: &[Point<T>]) -> String {
    ps.iter()
        .map(|p| format!("{:.1},{:.1}", p.x.as_f64(), fy(p.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn draw_shape<T: Coord>(out: &mut String, shape: &Shape<T>, tag: u32) {
    let _ = match shape {
        Shape::Line { p1, p2 } => writeln!(
            out,
            r#"<line data-tag="{tag}" x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
            p1.x.as_f64(),
            fy(p1.y),
            p2.x.as_f64(),
            fy(p2.y)
        ),
        Shape::Circle { center, radius } => writeln!(
            out,
            r#"<circle data-tag="{tag}" cx="{:.1}" cy="{:.1}" r="{:.1}"/>"#,
            center.x.as_f64(),
            fy(center.y),
            radius.as_f64()
        ),
        Shape::Polygon { closed: true, .. } => {
            writeln!(
                out,
                r#"<polygon data-tag="{tag}" points="{}"/>"#,
                pts(&shape.polyline())
            )
        }
        Shape::Polygon { .. } | Shape::Bezier { .. } => {
            writeln!(
                out,
                r#"<polyline data-tag="{tag}" points="{}"/>"#,
                pts(&shape.polyline())
            )
        }
        Shape::Text {
            text,
            anchor,
            height,
            orientation,
        } => {
            let (x, y) = (anchor.x.as_f64(), fy(anchor.y));
            let rotate = match orientation {
                Orientation::Horizontal => String::new(),
                Orientation::Vertical => format!(r#" transform="rotate(-90 {x:.1} {y:.1})""#),
            };
            writeln!(
                out,
                r#"<text data-tag="{tag}" x="{x:.1}" y="{y:.1}" font-size="{:.1}"{rotate}>{}</text>"#,
                height.as_f64(),
                esc(text)
            )
        }
    };
}

fn rect_el(out: &mut String, r: [f64; 4], tag: u32, type_name: &str) {
    let [x0, y0, x1, y1] = r;
    let _ = writeln!(
        out,
        r#"<rect data-tag="{tag}" data-type="{}" x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}"/>"#,
        esc(type_name),
        x0,
        EXTENT - y1,
        x1 - x0,
        y1 - y0
    );
    let _ = writeln!(
        out,
        r#"<text class="label" x="{:.1}" y="{:.1}">{}</text>"#,
        x0,
        EXTENT - y1 - 8.0,
        esc(type_name)
    );
}

fn bounds<T: Coord>(r: Rect<T>) -> [f64; 4] {
    [r.min.x.as_f64(), r.min.y.as_f64(), r.max.x.as_f64(), r.max.y.as_f64()]
}

/// Renders the overlay as an SVG document in grid coordinates (y flipped).
pub fn overlay_svg<T: Coord>(scene: &Scene<T>, forest: &SolutionForest<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {EXTENT} {EXTENT}" width="1024" height="1024">"#
    );
    out.push_str(r##"<g id="diagram" stroke="#999999" fill="none" stroke-width="12">"##);
    out.push('\n');
    for p in scene.primitives() {
        draw_shape(&mut out, &p.shape, p.tag.0);
    }
    out.push_str("</g>\n");
    for (i, root) in forest.solutions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<g class="solution" data-solution="{i}" stroke="{color}" fill="none" stroke-width="10" font-size="90">"#
        );
        root.walk(&mut |n| {
            if let Node::Derived {
                tag, type_name, bbox, ..
            } = n
            {
                rect_el(&mut out, bounds(*bbox), tag.0, type_name.as_str());
            }
        });
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_overlay<T: Coord>(scene: &Scene<T>, forest: &SolutionForest<T>, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, overlay_svg(scene, forest)).map_err(|e| IoError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::grammar::g1;
    use crate::io::fixtures::fixture;
    use crate::parser::parse;
    use regex::Regex;

    fn fig2() -> (Scene<f64>, SolutionForest<f64>) {
        let d = fixture("fig2-ticks").unwrap().to_diagram::<f64>().unwrap();
        let mut scene = Scene::new(d.primitives, Config::default()).unwrap();
        let forest = parse(&g1(), "X-Ticks", &mut scene).unwrap().forest;
        (scene, forest)
    }

    #[test]
    fn one_layer_per_solution() {
        let (scene, forest) = fig2();
        let svg = overlay_svg(&scene, &forest);
        assert_eq!(svg.matches(r#"class="solution""#).count(), 2);
        let empty = SolutionForest {
            start: forest.start.clone(),
            solutions: vec![],
        };
        let base = overlay_svg(&scene, &empty);
        assert_eq!(base.matches(r#"class="solution""#).count(), 0);
        assert_eq!(base.matches("<line ").count(), 24);
    }

    #[test]
    fn rectangles_match_leaf_union() {
        let (scene, forest) = fig2();
        let svg = overlay_svg(&scene, &forest);
        let re = Regex::new(r#"<rect data-tag="(\d+)" data-type="[^"]*" x="([-\d.]+)" y="([-\d.]+)" width="([-\d.]+)" height="([-\d.]+)""#).unwrap();
        let mut seen = 0;
        for c in re.captures_iter(&svg) {
            let tag = crate::geometry::Tag(c[1].parse().unwrap());
            let b = scene
                .leaves(tag)
                .iter()
                .filter_map(|t| scene.bbox(t))
                .reduce(Rect::union)
                .unwrap();
            let got: Vec<f64> = (2..=5).map(|i| c[i].parse().unwrap()).collect();
            let want = [b.min.x, EXTENT - b.max.y, b.max.x - b.min.x, b.max.y - b.min.y];
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() <= 0.06, "{g} vs {w}");
            }
            seen += 1;
        }
        assert!(seen >= 6);
    }
}
