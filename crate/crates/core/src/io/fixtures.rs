//! Deterministic synthetic diagrams used by tests, examples and the CLI.
//!
//! All fixtures carry the frame `[0, 0, 8191, 8191]`, so file coordinates are
//! already grid units and normalization is the identity.

use super::diagram::{DiagramFile, Record, TextOrientation, Xy};
use super::IoError;

pub const FIXTURES: [&str; 3] = ["fig2-ticks", "fig3-micro", "datagraph4"];

const FRAME: [f64; 4] = [0.0, 0.0, 8191.0, 8191.0];

pub fn fixture(name: &str) -> Result<DiagramFile, IoError> {
    let primitives = match name {
        "fig2-ticks" => fig2_ticks(),
        "fig3-micro" => fig3_micro(),
        "datagraph4" => datagraph4(),
        other => return Err(IoError::UnknownFixture(other.to_string())),
    };
    Ok(DiagramFile {
        version: super::diagram::DIAGRAM_VERSION,
        units: Some("grid".to_string()),
        frame: Some(FRAME),
        primitives,
    })
}

fn line(p1: Xy, p2: Xy, id: impl Into<String>) -> Record {
    Record::Line {
        p1,
        p2,
        id: Some(id.into()),
    }
}

fn text(s: &str, anchor: Xy, height: f64, orientation: TextOrientation, id: impl Into<String>) -> Record {
    Record::Text {
        text: s.to_string(),
        anchor,
        height,
        orientation,
        id: Some(id.into()),
    }
}

/// Five regions: (a) a long line with two detached ticks on the far left and
/// seven attached ticks, (b) a long line with four ticks hanging below,
/// (c) a long line with only two ticks, (d) three long verticals, (e) three
/// free-floating ticks. 24 lines; h = W/64 = 100.
fn fig2_ticks() -> Vec<Record> {
    let mut v = Vec::new();
    v.push(line([1500.0, 6000.0], [4500.0, 6000.0], "a-line"));
    for (k, x) in [600.0, 900.0].into_iter().enumerate() {
        v.push(line([x, 6000.0], [x, 6200.0], format!("a-detached-{k}")));
    }
    for k in 0..7 {
        let x = 1800.0 + 350.0 * k as f64;
        v.push(line([x, 6000.0], [x, 6200.0], format!("a-tick-{k}")));
    }
    v.push(line([1500.0, 3500.0], [4500.0, 3500.0], "b-line"));
    for (k, x) in [2000.0, 2600.0, 3200.0, 3800.0].into_iter().enumerate() {
        v.push(line([x, 3500.0], [x, 3300.0], format!("b-tick-{k}")));
    }
    v.push(line([1500.0, 1000.0], [4500.0, 1000.0], "c-line"));
    for (k, x) in [2500.0, 3500.0].into_iter().enumerate() {
        v.push(line([x, 1000.0], [x, 1200.0], format!("c-tick-{k}")));
    }
    for (k, x) in [5500.0, 6000.0, 6500.0].into_iter().enumerate() {
        v.push(line([x, 1000.0], [x, 4000.0], format!("d-vertical-{k}")));
    }
    for (k, x) in [6000.0, 6500.0, 7000.0].into_iter().enumerate() {
        v.push(line([x, 5500.0], [x, 5700.0], format!("e-tick-{k}")));
    }
    v
}

/// Lines A-E on a 128-unit cell grid: A long vertical, B and C short verticals
/// hanging from the horizontal D (three cells), E a diagonal. Endpoints are
/// installed after the lines, so endpoint k of the figure is tag 4 + k.
fn fig3_micro() -> Vec<Record> {
    vec![
        line([1000.0, 1000.0], [1000.0, 1600.0], "A"),
        line([1350.0, 1290.0], [1350.0, 1240.0], "B"),
        line([1580.0, 1290.0], [1580.0, 1240.0], "C"),
        line([1300.0, 1290.0], [1640.0, 1290.0], "D"),
        line([1800.0, 1000.0], [2100.0, 1400.0], "E"),
    ]
}

struct Panel {
    name: &'static str,
    x0: f64,
    y0: f64,
    bottom: bool,
    left: bool,
}

const PANELS: [Panel; 4] = [
    Panel {
        name: "tl",
        x0: 1200.0,
        y0: 4600.0,
        bottom: false,
        left: true,
    },
    Panel {
        name: "tr",
        x0: 5000.0,
        y0: 4600.0,
        bottom: false,
        left: false,
    },
    Panel {
        name: "bl",
        x0: 1200.0,
        y0: 900.0,
        bottom: true,
        left: true,
    },
    Panel {
        name: "br",
        x0: 5000.0,
        y0: 900.0,
        bottom: true,
        left: false,
    },
];

const AXIS_W: f64 = 3191.0;
const AXIS_H: f64 = 3100.0;
const LABEL_H: f64 = 120.0;
const TITLE_H: f64 = 140.0;

fn circle(c: Xy, id: String) -> Record {
    Record::Circle {
        center: c,
        radius: 40.0,
        id: Some(id),
    }
}

fn square(c: Xy, id: String) -> Record {
    let [x, y] = c;
    Record::Polygon {
        vertices: vec![
            [x - 40.0, y - 40.0],
            [x + 40.0, y - 40.0],
            [x + 40.0, y + 40.0],
            [x - 40.0, y + 40.0],
        ],
        closed: true,
        id: Some(id),
    }
}

fn zigzag(v: &mut Vec<Record>, p: &Panel, n: usize, step: f64, lo: f64, hi: f64) {
    let x = |k: usize| p.x0 + 400.0 + step * k as f64;
    let y = |k: usize| if k.is_multiple_of(2) { lo } else { hi };
    for k in 0..n {
        v.push(line([x(k), y(k)], [x(k + 1), y(k + 1)], format!("{}-data-{k}", p.name)));
    }
}

/// A 2x2 grid of x,y data graphs with 133 primitives. Each panel has an
/// L-shaped axis pair with five ticks per axis; numeric x labels sit under the
/// bottom row and numeric y labels left of the left column; one horizontal and
/// one vertical title serve all four panels. Data lines keep every segment
/// below `*very-long*` while each panel's connected curve exceeds it.
fn datagraph4() -> Vec<Record> {
    let mut v = Vec::new();
    for p in &PANELS {
        v.push(line([p.x0, p.y0], [p.x0 + AXIS_W, p.y0], format!("{}-x-axis", p.name)));
        v.push(line([p.x0, p.y0], [p.x0, p.y0 + AXIS_H], format!("{}-y-axis", p.name)));
        for k in 1..=5 {
            let x = p.x0 + 550.0 * k as f64;
            v.push(line([x, p.y0], [x, p.y0 + 100.0], format!("{}-x-tick-{k}", p.name)));
        }
        for k in 1..=5 {
            let y = p.y0 + 560.0 * k as f64;
            v.push(line([p.x0, y], [p.x0 + 100.0, y], format!("{}-y-tick-{k}", p.name)));
        }
    }
    for p in PANELS.iter().filter(|p| p.bottom) {
        for k in 1..=5 {
            let x = p.x0 + 550.0 * k as f64;
            let s = format!("{}", 10 * k);
            v.push(text(
                &s,
                [x - 0.6 * LABEL_H, 500.0],
                LABEL_H,
                TextOrientation::Horizontal,
                format!("{}-x-label-{k}", p.name),
            ));
        }
    }
    for p in PANELS.iter().filter(|p| p.left) {
        for k in 1..=5 {
            let y = p.y0 + 560.0 * k as f64;
            let s = format!("{:.1}", 0.2 * k as f64);
            v.push(text(
                &s,
                [924.0, y - LABEL_H / 2.0],
                LABEL_H,
                TextOrientation::Horizontal,
                format!("{}-y-label-{k}", p.name),
            ));
        }
    }
    v.push(text(
        "Time After Stimulus (min)",
        [3000.0, 0.0],
        TITLE_H,
        TextOrientation::Horizontal,
        "x-title",
    ));
    v.push(text(
        "Fraction Modified",
        [0.0, 3500.0],
        TITLE_H,
        TextOrientation::Vertical,
        "y-title",
    ));

    let [tl, tr, bl, br] = &PANELS;
    zigzag(&mut v, tl, 7, 370.0, tl.y0 + 700.0, tl.y0 + 1700.0);
    for k in 0..9 {
        v.push(circle(
            [1700.0 + 300.0 * k as f64, tl.y0 + 2400.0],
            format!("tl-circle-{k}"),
        ));
    }
    let (lo, hi) = (tr.y0 + 700.0, tr.y0 + 2700.0);
    for k in 0..3 {
        let x0 = tr.x0 + 400.0 + 866.0 * k as f64;
        let (ya, yb) = if k % 2 == 0 { (lo, hi) } else { (hi, lo) };
        v.push(Record::Bezier {
            segments: vec![[[x0, ya], [x0 + 289.0, yb], [x0 + 577.0, ya], [x0 + 866.0, yb]]],
            id: Some(format!("tr-curve-{k}")),
        });
    }
    for k in 0..12 {
        v.push(square(
            [5500.0 + 220.0 * k as f64, tr.y0 + 2900.0],
            format!("tr-square-{k}"),
        ));
    }
    zigzag(&mut v, bl, 6, 430.0, bl.y0 + 600.0, bl.y0 + 2500.0);
    for k in 0..10 {
        v.push(circle(
            [1700.0 + 270.0 * k as f64, bl.y0 + 2750.0],
            format!("bl-circle-{k}"),
        ));
    }
    zigzag(&mut v, br, 6, 430.0, br.y0 + 600.0, br.y0 + 2500.0);
    for k in 0..5 {
        v.push(circle(
            [5500.0 + 250.0 * k as f64, br.y0 + 2750.0],
            format!("br-circle-{k}"),
        ));
    }
    for k in 0..5 {
        v.push(square(
            [6800.0 + 250.0 * k as f64, br.y0 + 2750.0],
            format!("br-square-{k}"),
        ));
    }
    v
}
