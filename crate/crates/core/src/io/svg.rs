use crate::error::{Error, Result};
use crate::metrics::verify_proper;
use crate::model::Drawing;

use std::collections::BTreeSet;
use std::fmt::Write;

/// Rendering options.
#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Multiplies drawing units into SVG user units.
    pub scale: f64,
    /// Draw vertex index labels.
    pub labels: bool,
    /// Edges rendered with the highlight stroke class.
    pub highlight: Vec<(u32, u32)>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 100.0,
            labels: false,
            highlight: Vec::new(),
        }
    }
}

/// Deterministic SVG for a proper drawing: one line per edge, one circle
/// per vertex, viewBox fitted with a 5% margin.
pub fn render_svg(edges: &[(u32, u32)], gamma: &Drawing, options: &SvgOptions) -> Result<String> {
    let verdict = verify_proper(edges, gamma);
    if !verdict.ok {
        return Err(Error::ImproperInput(format!(
            "{} properness violations",
            verdict.violations.len()
        )));
    }
    let s = options.scale;
    let xs: Vec<f64> = gamma.points.iter().map(|p| p.x * s).collect();
    // SVG's y axis grows downward.
    let ys: Vec<f64> = gamma.points.iter().map(|p| -p.y * s).collect();
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for (&x, &y) in xs.iter().zip(&ys) {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let margin = 0.05 * (max_x - min_x).max(max_y - min_y).max(1.0);
    let (vx, vy) = (min_x - margin, min_y - margin);
    let (vw, vh) = (
        max_x - min_x + 2.0 * margin,
        max_y - min_y + 2.0 * margin,
    );

    let hl: BTreeSet<(u32, u32)> = options
        .highlight
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let r = (vw.max(vh) * 0.004).max(0.5);
    let stroke = (r * 0.5).max(0.25);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx:.4} {vy:.4} {vw:.4} {vh:.4}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <style>.e{{stroke:#333;stroke-width:{stroke:.4}}}.h{{stroke:#c22;stroke-width:{w:.4}}}.v{{fill:#06c}}.l{{font-size:{fs:.4}px;font-family:monospace;fill:#000}}</style>"#,
        w = stroke * 2.0,
        fs = r * 3.0,
    )
    .unwrap();
    for &(u, v) in edges {
        let class = if hl.contains(&(u.min(v), u.max(v))) { "h" } else { "e" };
        writeln!(
            out,
            r#"  <line class="{class}" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
            xs[u as usize], ys[u as usize], xs[v as usize], ys[v as usize]
        )
        .unwrap();
    }
    for i in 0..gamma.points.len() {
        writeln!(
            out,
            r#"  <circle class="v" cx="{:.6}" cy="{:.6}" r="{r:.4}"/>"#,
            xs[i], ys[i]
        )
        .unwrap();
    }
    if options.labels {
        for i in 0..gamma.points.len() {
            writeln!(
                out,
                r#"  <text class="l" x="{:.6}" y="{:.6}">{i}</text>"#,
                xs[i] + r * 1.2,
                ys[i] - r * 1.2
            )
            .unwrap();
        }
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn square() -> (Vec<(u32, u32)>, Drawing) {
        (
            vec![(0, 1), (1, 2), (2, 3), (0, 3)],
            Drawing::new(vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(0.0, 1.0),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn unit_square_content() {
        let (edges, d) = square();
        let svg = render_svg(&edges, &d, &SvgOptions::default()).unwrap();
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains("viewBox"));
    }

    #[test]
    fn deterministic_output() {
        let (edges, d) = square();
        let a = render_svg(&edges, &d, &SvgOptions::default()).unwrap();
        let b = render_svg(&edges, &d, &SvgOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn highlight_class() {
        let (edges, d) = square();
        let options = SvgOptions {
            highlight: vec![(1, 0)],
            ..SvgOptions::default()
        };
        let svg = render_svg(&edges, &d, &options).unwrap();
        assert_eq!(svg.matches(r#"class="h""#).count(), 1);
        assert_eq!(svg.matches(r#"class="e""#).count(), 3);
    }

    #[test]
    fn improper_rejected() {
        let edges = vec![(0, 1)];
        let d = Drawing::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 0.0)]).unwrap();
        assert!(matches!(
            render_svg(&edges, &d, &SvgOptions::default()),
            Err(Error::ImproperInput(_))
        ));
    }
}
