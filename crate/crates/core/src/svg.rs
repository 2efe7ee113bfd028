//! Minimal SVG 1.1 document builder for the figure and dial exports.
//!
//! World coordinates are mathematical (y up); the builder flips the y axis
//! into screen space and scales the viewport to the requested pixel width.

use std::fmt::Write;

pub struct SvgDoc {
    body: String,
    min_x: f64,
    min_y: f64,
    scale: f64,
    width_px: f64,
    height_px: f64,
}

impl SvgDoc {
    /// A document covering the world rectangle [min_x, max_x] × [min_y, max_y],
    /// rendered `width_px` pixels wide.
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64, width_px: f64) -> Self {
        assert!(max_x > min_x && max_y > min_y);
        let scale = width_px / (max_x - min_x);
        SvgDoc {
            body: String::new(),
            min_x,
            min_y,
            scale,
            width_px,
            height_px: (max_y - min_y) * scale,
        }
    }

    fn tx(&self, x: f64) -> f64 {
        (x - self.min_x) * self.scale
    }

    fn ty(&self, y: f64) -> f64 {
        self.height_px - (y - self.min_y) * self.scale
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        writeln!(
            self.body,
            r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="1"/>"#,
            self.tx(x1),
            self.ty(y1),
            self.tx(x2),
            self.ty(y2),
            stroke
        )
        .expect("write to string");
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str, stroke: &str) {
        writeln!(
            self.body,
            r#"  <circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="{}" stroke="{}" stroke-width="1"/>"#,
            self.tx(cx),
            self.ty(cy),
            r * self.scale,
            fill,
            stroke
        )
        .expect("write to string");
    }

    pub fn point(&mut self, x: f64, y: f64, fill: &str) {
        writeln!(
            self.body,
            r#"  <circle cx="{:.3}" cy="{:.3}" r="2.5" fill="{}"/>"#,
            self.tx(x),
            self.ty(y),
            fill
        )
        .expect("write to string");
    }

    pub fn polyline(&mut self, pts: impl IntoIterator<Item = (f64, f64)>, stroke: &str) {
        let mut coords = String::new();
        for (x, y) in pts {
            write!(coords, "{:.3},{:.3} ", self.tx(x), self.ty(y)).expect("write to string");
        }
        writeln!(
            self.body,
            r#"  <polyline points="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
            coords.trim_end(),
            stroke
        )
        .expect("write to string");
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str) {
        writeln!(
            self.body,
            r#"  <text x="{:.3}" y="{:.3}" font-size="11" font-family="sans-serif">{}</text>"#,
            self.tx(x),
            self.ty(y),
            s
        )
        .expect("write to string");
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n{}</svg>\n",
            self.width_px, self.height_px, self.width_px, self.height_px, self.body
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_axis_is_flipped() {
        let doc = SvgDoc::new(0.0, 0.0, 10.0, 10.0, 100.0);
        assert_eq!(doc.ty(0.0), 100.0);
        assert_eq!(doc.ty(10.0), 0.0);
    }

    #[test]
    fn produces_well_formed_document() {
        let mut doc = SvgDoc::new(-1.0, -1.0, 1.0, 1.0, 200.0);
        doc.line(-1.0, 0.0, 1.0, 0.0, "#000");
        doc.polyline([(0.0, 0.0), (0.5, 0.5)], "#f00");
        let s = doc.finish();
        assert!(s.starts_with("<svg") && s.contains("<polyline") && s.ends_with("</svg>\n"));
    }
}
