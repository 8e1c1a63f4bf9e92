//! SVG renderings of configurations and of the (w, e)-plane. Pictures only:
//! nothing drawn here is used as evidence.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horoball::{Configuration, Family, Horoball};
use crate::interval::{CoverageCertificate, LeafStatus, NamedPredicate};
use crate::points::{special_point, PointId};

const MARGIN: f64 = 20.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Rectangle in model coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Viewport {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
            && x_min < x_max
            && y_min < y_max;
        if !ok {
            return Err(Error::InvalidArgument(
                "viewport must be a nonempty finite rectangle".into(),
            ));
        }
        Ok(Viewport {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    /// Pixels per model unit.
    pub scale: f64,
    pub segment_labels: bool,
    pub ball_labels: bool,
    /// Fitted to the content when absent.
    pub viewport: Option<Viewport>,
    /// Grid samples per axis for region plots.
    pub density: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 200.0,
            segment_labels: true,
            ball_labels: true,
            viewport: None,
            density: 200,
        }
    }
}

impl RenderOptions {
    fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        if self.density < 2 {
            return Err(Error::InvalidArgument("density must be at least 2".into()));
        }
        Ok(())
    }
}

/// Fixed six-decimal formatting, with no negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

struct Canvas {
    view: Viewport,
    scale: f64,
    body: String,
}

impl Canvas {
    fn new(view: Viewport, scale: f64) -> Self {
        Canvas {
            view,
            scale,
            body: String::new(),
        }
    }

    fn x(&self, x: f64) -> String {
        num(MARGIN + (x - self.view.x_min) * self.scale)
    }

    /// The y axis points up in the model and down in SVG.
    fn y(&self, y: f64) -> String {
        num(MARGIN + (self.view.y_max - y) * self.scale)
    }

    fn len(&self, l: f64) -> String {
        num(l * self.scale)
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let (x1, y1, x2, y2) = (self.x(a.0), self.y(a.1), self.x(b.0), self.y(b.1));
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>"#
        );
    }

    fn text(&mut self, at: (f64, f64), label: &str, style: &str) {
        let (x, y) = (self.x(at.0), self.y(at.1));
        let _ = writeln!(
            self.body,
            r#"<text x="{x}" y="{y}" {style}>{}</text>"#,
            escape(label)
        );
    }

    fn finish(self, title: &str) -> String {
        let w = num(2.0 * MARGIN + (self.view.x_max - self.view.x_min) * self.scale);
        let h = num(2.0 * MARGIN + (self.view.y_max - self.view.y_min) * self.scale);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <title>{}</title>\n<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{}</svg>\n",
            escape(title),
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn family_color(f: Family) -> &'static str {
    match f {
        Family::FullSized => "#1f77b4",
        Family::OneOverW => "#2ca02c",
        Family::OneOverE => "#d62728",
        Family::OneOverWCubed => "#9467bd",
        Family::Derived => "#7f7f7f",
    }
}

fn same_ball(a: &Horoball, b: &Horoball) -> bool {
    let tol = 1e-9;
    a.distance(b) < tol && (a.diameter - b.diameter).abs() < tol
}

/// One circle per ball (coincident balls share a circle and a joint label),
/// the edge from `F` to `F'` of length `w`, and the pinned segments.
pub fn render_configuration(c: &Configuration, opts: &RenderOptions) -> Result<String> {
    opts.validate()?;
    let view = match opts.viewport {
        Some(v) => v,
        None => {
            let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
            for b in &c.balls {
                let r = b.diameter / 2.0;
                x0 = x0.min(b.center[0] - r);
                x1 = x1.max(b.center[0] + r);
                y0 = y0.min(b.center[1] - r);
                y1 = y1.max(b.center[1] + r);
            }
            Viewport::new(x0 - 0.1, x1 + 0.1, y0 - 0.1, y1 + 0.1)?
        }
    };
    let mut cv = Canvas::new(view, opts.scale);

    let mut drawn: Vec<(usize, Vec<&str>)> = Vec::new();
    for (i, b) in c.balls.iter().enumerate() {
        match drawn.iter_mut().find(|(j, _)| same_ball(&c.balls[*j], b)) {
            Some((_, labels)) => labels.push(&b.label),
            None => drawn.push((i, vec![&b.label])),
        }
    }
    for (i, labels) in &drawn {
        let b = &c.balls[*i];
        let (cx, cy, r) = (
            cv.x(b.center[0]),
            cv.y(b.center[1]),
            cv.len(b.diameter / 2.0),
        );
        let _ = writeln!(
            cv.body,
            r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="{}" stroke-width="1" data-label="{}"/>"#,
            family_color(b.family),
            escape(&labels.join("=")),
        );
        if opts.ball_labels {
            cv.text(
                (b.center[0], b.center[1]),
                &labels.join("="),
                r#"font-size="10" text-anchor="middle""#,
            );
        }
    }

    cv.line(
        (0.0, 0.0),
        (c.w, 0.0),
        r#"stroke="black" stroke-width="1.5""#,
    );
    cv.text(
        (c.w / 2.0, -0.04),
        &format!("w = {}", num(c.w)),
        r#"font-size="10" text-anchor="middle""#,
    );

    for (name, seg) in &c.segments {
        let (Some(a), Some(b)) = (c.ball(&seg.from), c.ball(&seg.to)) else {
            continue;
        };
        let (p, q) = ((a.center[0], a.center[1]), (b.center[0], b.center[1]));
        cv.line(
            p,
            q,
            r##"stroke="#ff7f0e" stroke-width="1" stroke-dasharray="4 2""##,
        );
        if opts.segment_labels {
            let mid = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
            cv.text(mid, name, r##"font-size="11" fill="#ff7f0e""##);
        }
    }
    Ok(cv.finish(&format!(
        "horoball configuration w = {}, e = {}",
        num(c.w),
        num(c.e)
    )))
}

/// Zero-locus pieces of a sampled function by marching squares.
fn contour(values: &[Vec<f64>], xs: &[f64], ys: &[f64]) -> Vec<((f64, f64), (f64, f64))> {
    let mut out = Vec::new();
    let interp = |a: (f64, f64, f64), b: (f64, f64, f64)| {
        let t = if a.2 == b.2 { 0.5 } else { a.2 / (a.2 - b.2) };
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    };
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            let c = [
                (xs[i], ys[j], values[j][i]),
                (xs[i + 1], ys[j], values[j][i + 1]),
                (xs[i + 1], ys[j + 1], values[j + 1][i + 1]),
                (xs[i], ys[j + 1], values[j + 1][i]),
            ];
            let mut crossings = Vec::with_capacity(4);
            for k in 0..4 {
                let (a, b) = (c[k], c[(k + 1) % 4]);
                if (a.2 < 0.0) != (b.2 < 0.0) {
                    crossings.push(interp(a, b));
                }
            }
            match crossings.len() {
                2 => out.push((crossings[0], crossings[1])),
                4 => {
                    // saddle: pair the crossings by the sign at the center
                    let center = (c[0].2 + c[1].2 + c[2].2 + c[3].2) / 4.0;
                    if (center < 0.0) == (c[0].2 < 0.0) {
                        out.push((crossings[0], crossings[1]));
                        out.push((crossings[2], crossings[3]));
                    } else {
                        out.push((crossings[1], crossings[2]));
                        out.push((crossings[3], crossings[0]));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Violation regions (where a predicate is negative), zero curves, the
/// segments h, i, j and the special points, optionally over the leaves of a
/// coverage certificate.
pub fn render_region_plot(
    predicates: &[NamedPredicate],
    opts: &RenderOptions,
    overlay: Option<&CoverageCertificate>,
) -> Result<String> {
    opts.validate()?;
    let view = opts.viewport.unwrap_or(Viewport {
        x_min: 1.0,
        x_max: 1.25,
        y_min: 0.5,
        y_max: 2.0,
    });
    let mut cv = Canvas::new(view, opts.scale);
    let n = opts.density;
    let xs: Vec<f64> = (0..n)
        .map(|i| view.x_min + (view.x_max - view.x_min) * i as f64 / (n - 1) as f64)
        .collect();
    let ys: Vec<f64> = (0..n)
        .map(|j| view.y_min + (view.y_max - view.y_min) * j as f64 / (n - 1) as f64)
        .collect();
    let color_of = |name: &str| {
        let idx = predicates
            .iter()
            .position(|p| p.name == name)
            .unwrap_or(predicates.len());
        PALETTE[idx % PALETTE.len()]
    };

    if let Some(cert) = overlay {
        let _ = writeln!(cv.body, r#"<g id="certificate" stroke="none">"#);
        for leaf in &cert.leaves {
            let r = &leaf.region;
            let f =
                |q: &crate::exact::Rational| num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN);
            let (w0, w1, e0, e1) = (f(&r.w_lo), f(&r.w_hi), f(&r.e_lo), f(&r.e_hi));
            let fill = match (&leaf.status, &leaf.witness_name) {
                (LeafStatus::Excluded, _) => "#000000",
                (_, Some(name)) => color_of(name),
                (_, None) => "#7f7f7f",
            };
            let (x, y, w, h) = (cv.x(w0), cv.y(e1), cv.len(w1 - w0), cv.len(e1 - e0));
            let _ = writeln!(
                cv.body,
                r#"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="{fill}" fill-opacity="0.3"/>"#
            );
        }
        let _ = writeln!(cv.body, "</g>");
    }

    for p in predicates {
        let color = color_of(&p.name);
        let values: Vec<Vec<f64>> = ys
            .iter()
            .map(|&e| xs.iter().map(|&w| p.polynomial.eval_f64(w, e)).collect())
            .collect();
        if overlay.is_none() {
            let _ = writeln!(
                cv.body,
                r#"<g id="violated-{}" fill="{color}" fill-opacity="0.12" stroke="none">"#,
                escape(&p.name)
            );
            let (dx, dy) = (
                (view.x_max - view.x_min) / (n - 1) as f64,
                (view.y_max - view.y_min) / (n - 1) as f64,
            );
            for (j, row) in values.iter().enumerate() {
                // merge runs of negative samples into one rectangle per row
                let mut i = 0;
                while i < n {
                    if row[i] >= 0.0 {
                        i += 1;
                        continue;
                    }
                    let start = i;
                    while i < n && row[i] < 0.0 {
                        i += 1;
                    }
                    let (x0, x1) = (xs[start] - dx / 2.0, xs[i - 1] + dx / 2.0);
                    let y1 = ys[j] + dy / 2.0;
                    let (x, y, w, h) = (cv.x(x0), cv.y(y1), cv.len(x1 - x0), cv.len(dy));
                    let _ = writeln!(
                        cv.body,
                        r#"<rect x="{x}" y="{y}" width="{w}" height="{h}"/>"#
                    );
                }
            }
            let _ = writeln!(cv.body, "</g>");
        }
        let mut d = String::new();
        for (a, b) in contour(&values, &xs, &ys) {
            let _ = write!(
                d,
                "M{} {}L{} {}",
                cv.x(a.0),
                cv.y(a.1),
                cv.x(b.0),
                cv.y(b.1)
            );
        }
        let _ = writeln!(
            cv.body,
            r#"<path id="curve-{}" d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            escape(&p.name)
        );
    }

    let r4 = 2f64.powf(0.25);
    let pt = |id| {
        let p = special_point(id);
        (p.w_f64(), p.e_f64())
    };
    let guides = [
        ("h", (1.0, 1.0 / r4), (r4, 1.0 / r4)),
        ("i", (1.0, r4), (r4, r4)),
        ("j", pt(PointId::UpperMeetsV), pt(PointId::I)),
    ];
    for (name, a, b) in guides {
        cv.line(
            a,
            b,
            r#"stroke="black" stroke-width="1" stroke-dasharray="3 3""#,
        );
        if opts.segment_labels {
            cv.text(
                ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0 + 0.02),
                name,
                r#"font-size="11""#,
            );
        }
    }
    for id in [PointId::UpperMeetsV, PointId::I, PointId::II, PointId::III] {
        let (w, e) = pt(id);
        let (cx, cy) = (cv.x(w), cv.y(e));
        let _ = writeln!(
            cv.body,
            r#"<circle cx="{cx}" cy="{cy}" r="3" fill="black"/>"#
        );
        cv.text((w, e), id.label(), r#"font-size="11" dx="5" dy="-5""#);
    }
    Ok(cv.finish("inequalities in the (w, e)-plane"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bank::by_name;
    use crate::horoball::{build_configuration, Branch};

    #[test]
    fn number_format() {
        assert_eq!(num(-0.0), "0.000000");
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(1.5), "1.500000");
    }

    #[test]
    fn coincident_balls_share_a_circle() {
        let w = 1.150_963_925_257_758_f64;
        let c = build_configuration(w, w * w, Branch::default()).unwrap();
        let svg = render_configuration(&c, &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("<circle").count(), c.balls.len() - 1);
        assert!(svg.contains(r#"data-label="E=A-P""#));
    }

    #[test]
    fn lower_e_curve_only() {
        let p = vec![NamedPredicate::new(
            "lower-e",
            by_name("lower-e").unwrap().lhs.clone(),
        )];
        let opts = RenderOptions {
            density: 20,
            ..RenderOptions::default()
        };
        let svg = render_region_plot(&p, &opts, None).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(render_region_plot(&p, &RenderOptions { density: 1, ..opts }, None).is_err());
    }
}
