//! Self-contained SVG diagnostics.

use std::fmt::Write;

use sharpsob::constants::sharp_constant_squared;
use sharpsob::exactnum::{fmt_rational, rat, to_f64};
use sharpsob::kernel::{KernelB, NodeSet};
use sharpsob::poly::landau_kernel;
use sharpsob::variational::{convergence_sweep, BasisSpec};
use sharpsob::Result;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;
const CELLS: i64 = 64;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * SIZE
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.y1 - y) / (self.y1 - self.y0) * SIZE
    }
}

fn open(title: &str) -> String {
    let total = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, "<title>{title}</title>").unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    s
}

fn axes(s: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    let bottom = MARGIN + SIZE;
    writeln!(s, r#"<text x="{MARGIN}" y="{}">{}</text>"#, bottom + 16.0, f.x0).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, bottom, bottom + 16.0, f.x1).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, MARGIN + SIZE / 2.0, bottom + 32.0).unwrap();
    writeln!(s, r#"<text x="4" y="{}">{:.3}</text>"#, bottom, f.y0).unwrap();
    writeln!(s, r#"<text x="4" y="{}">{:.3}</text>"#, MARGIN + 4.0, f.y1).unwrap();
    writeln!(s, r#"<text x="4" y="{}">{ylabel}</text>"#, MARGIN - 16.0).unwrap();
}

fn polyline(s: &mut String, f: &Frame, pts: &[(f64, f64)], attrs: &str) {
    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y))).collect();
    writeln!(s, r#"<polyline fill="none" {attrs} points="{}"/>"#, path.join(" ")).unwrap();
}

/// Red for positive, blue for negative, opacity by relative magnitude.
pub fn kernel_heatmap(nodes: NodeSet) -> String {
    let kb = KernelB::new(nodes);
    let f = Frame {
        x0: -1.0,
        x1: 1.0,
        y0: -1.0,
        y1: 1.0,
    };
    let centre = |i: i64| rat(2 * i + 1 - CELLS, CELLS);
    let mut values = Vec::with_capacity((CELLS * CELLS) as usize);
    for j in 0..CELLS {
        for i in 0..CELLS {
            values.push(to_f64(&kb.eval(&centre(i), &centre(j))));
        }
    }
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut s = open(&format!("B_{} over [-1,1]^2", kb.k()));
    let cell = SIZE / CELLS as f64;
    for j in 0..CELLS {
        for i in 0..CELLS {
            let v = values[(j * CELLS + i) as usize];
            if v == 0.0 || max == 0.0 {
                continue;
            }
            let colour = if v > 0.0 { "#c0392b" } else { "#2471a3" };
            let x = MARGIN + i as f64 * cell;
            let y = MARGIN + (CELLS - 1 - j) as f64 * cell;
            writeln!(
                s,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{cell:.2}" height="{cell:.2}" fill="{colour}" fill-opacity="{:.3}"/>"#,
                (v.abs() / max).sqrt()
            )
            .unwrap();
        }
    }
    for yn in kb.nodes().nodes() {
        let y = f.py(to_f64(yn));
        writeln!(
            s,
            r#"<line class="node-line" data-y="{}" x1="{MARGIN}" x2="{}" y1="{y:.2}" y2="{y:.2}" stroke="black" stroke-dasharray="4 3"/>"#,
            fmt_rational(yn),
            MARGIN + SIZE
        )
        .unwrap();
    }
    axes(&mut s, &f, "x", "y");
    s.push_str("</svg>\n");
    s
}

/// `L_1, ..., L_k` on `[-1, 1]`.
pub fn landau(k: u32) -> String {
    let f = Frame {
        x0: -1.0,
        x1: 1.0,
        y0: 0.0,
        y1: 1.0,
    };
    let mut s = open(&format!("Landau kernels L_1..L_{k}"));
    axes(&mut s, &f, "x", "L_j(x)");
    for j in 1..=k {
        let p = landau_kernel(j);
        let pts: Vec<(f64, f64)> = (0..=200)
            .map(|i| {
                let x = rat(i - 100, 100);
                (to_f64(&x), to_f64(&p.eval(&x)))
            })
            .collect();
        let hue = 220 - (j * 160 / k.max(1)) as i32;
        polyline(
            &mut s,
            &f,
            &pts,
            &format!(r#"class="landau" data-k="{j}" stroke="hsl({hue},70%,40%)" stroke-width="2""#),
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Subspace optimum against basis size with the `c^2` asymptote.
pub fn convergence(k: u32, max_size: usize) -> Result<String> {
    let c2 = sharp_constant_squared(k);
    let rows = convergence_sweep(k, BasisSpec::LandauExcluded, max_size)?;
    let top = to_f64(&c2) * 1.05;
    let bottom = to_f64(&rows[0].value) * 0.95;
    let f = Frame {
        x0: 0.0,
        x1: (max_size + 1) as f64,
        y0: bottom,
        y1: top,
    };
    let mut s = open(&format!("subspace optimum vs size, k = {k}"));
    axes(&mut s, &f, "basis size", "c'^2");
    let y = f.py(to_f64(&c2));
    writeln!(
        s,
        r#"<line class="asymptote" data-value="{}" x1="{MARGIN}" x2="{}" y1="{y:.2}" y2="{y:.2}" stroke="gray" stroke-dasharray="6 4"/>"#,
        fmt_rational(&c2),
        MARGIN + SIZE
    )
    .unwrap();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.size as f64, to_f64(&r.value))).collect();
    polyline(&mut s, &f, &pts, r#"class="sweep" stroke="black" stroke-width="2""#);
    for (r, (x, v)) in rows.iter().zip(&pts) {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" data-size="{}" data-value="{}"/>"#,
            f.px(*x),
            f.py(*v),
            r.size,
            fmt_rational(&r.value)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}
