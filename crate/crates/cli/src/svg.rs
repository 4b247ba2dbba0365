//! Minimal SVG output for trajectory pictures in the complex plane.

use std::fmt::Write as _;

use num_complex::Complex64 as C;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    /// Open circle.
    Zero,
    /// Filled circle.
    Pole,
}

/// A picture of the window `[center - half, center + half]` in both axes.
#[derive(Debug, Clone)]
pub struct Picture {
    center: C,
    half: f64,
    size: f64,
    lines: Vec<(Vec<C>, Stroke)>,
    markers: Vec<(C, Marker)>,
}

impl Picture {
    pub fn new(center: C, half: f64) -> Self {
        Picture { center, half: half.max(1e-3), size: 600.0, lines: Vec::new(), markers: Vec::new() }
    }

    /// Window around the given points with a margin.
    pub fn around(points: &[C]) -> Self {
        if points.is_empty() {
            return Self::new(C::new(0.0, 0.0), 2.0);
        }
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = C::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = C::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let half = ((hi.re - lo.re).max(hi.im - lo.im) * 0.5).max(0.5) * 2.0;
        Self::new((lo + hi) * 0.5, half)
    }

    pub fn line(&mut self, pts: &[C], stroke: Stroke) {
        // Cut off the parts far outside the window, where trajectories run
        // into a pole at infinity.
        let limit = 3.0 * self.half;
        let mut run = Vec::new();
        for p in pts {
            if (p - self.center).norm() <= limit {
                run.push(*p);
            } else if run.len() > 1 {
                self.lines.push((std::mem::take(&mut run), stroke));
            } else {
                run.clear();
            }
        }
        if run.len() > 1 {
            self.lines.push((run, stroke));
        }
    }

    pub fn marker(&mut self, z: C, m: Marker) {
        self.markers.push((z, m));
    }

    pub fn line_count(&self, stroke: Stroke) -> usize {
        self.lines.iter().filter(|l| l.1 == stroke).count()
    }

    fn px(&self, z: C) -> (f64, f64) {
        let s = self.size / (2.0 * self.half);
        ((z.re - self.center.re + self.half) * s, (self.center.im + self.half - z.im) * s)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
            self.size
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for (pts, stroke) in &self.lines {
            let coords: Vec<String> = pts
                .iter()
                .map(|p| {
                    let (x, y) = self.px(*p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let dash = match stroke {
                Stroke::Solid => "",
                Stroke::Dashed => r#" stroke-dasharray="6,4""#,
            };
            let color = match stroke {
                Stroke::Solid => "black",
                Stroke::Dashed => "#3060c0",
            };
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.2"{dash} points="{}"/>"#,
                coords.join(" ")
            );
        }
        for (z, m) in &self.markers {
            let (x, y) = self.px(*z);
            let fill = match m {
                Marker::Zero => r#"fill="white" stroke="black" stroke-width="1.5""#,
                Marker::Pole => r#"fill="black""#,
            };
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" {fill}/>"#);
        }
        out.push_str("</svg>\n");
        out
    }
}
