//! Minimal SVG rendering of trajectories, cycles and partitions.
//!
//! One lattice unit is `SCALE` pixels, with `MARGIN` pixels of padding and
//! y pointing up. Paths are drawn as polylines and the base site as a red
//! disc.

use std::fmt::Write;

use llg_core::lattice::Site;

pub const SCALE: f64 = 20.0;
pub const MARGIN: f64 = 20.0;
const STROKE: f64 = 1.5;
const PART_STYLES: [&str; 3] = ["", "stroke-dasharray=\"6 3\"", "stroke-dasharray=\"1.5 3\""];
const PART_COLORS: [&str; 3] = ["#1f4e99", "#b5452b", "#2d7d3a"];

struct Frame {
    min_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new<'a>(sites: impl Iterator<Item = &'a Site>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut first = true;
        for s in sites {
            let (x, y) = s.euclidean();
            if first {
                (x0, x1, y0, y1) = (x, x, y, y);
                first = false;
            }
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        Frame {
            min_x: x0,
            max_y: y1,
            width: (x1 - x0) * SCALE + 2.0 * MARGIN,
            height: (y1 - y0) * SCALE + 2.0 * MARGIN,
        }
    }

    fn point(&self, s: Site) -> (f64, f64) {
        let (x, y) = s.euclidean();
        (
            (x - self.min_x) * SCALE + MARGIN,
            (self.max_y - y) * SCALE + MARGIN,
        )
    }

    fn open(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1}\" height=\"{:.1}\" viewBox=\"0 0 {:.1} {:.1}\">",
            self.width, self.height, self.width, self.height
        );
        let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    }

    fn polyline(&self, out: &mut String, path: &[Site], color: &str, extra: &str) {
        let pts: Vec<String> = path
            .iter()
            .map(|&s| {
                let (x, y) = self.point(s);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{STROKE}\" stroke-linejoin=\"round\" {extra}/>",
            pts.join(" ")
        );
    }

    fn dot(&self, out: &mut String, s: Site, color: &str) {
        let (x, y) = self.point(s);
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"/>"
        );
    }
}

/// A path with its base marked.
pub fn path_svg(path: &[Site]) -> String {
    let frame = Frame::new(path.iter());
    let mut out = String::new();
    frame.open(&mut out);
    frame.polyline(&mut out, path, "black", "");
    if let Some(&base) = path.first() {
        frame.dot(&mut out, base, "red");
    }
    out.push_str("</svg>\n");
    out
}

/// Local trajectories in three line styles, one per part. Trajectories
/// without a part are drawn in grey.
pub fn partition_svg(
    trajectories: &[(Vec<Site>, bool, Option<u8>)],
    region_sites: &[Site],
) -> String {
    let frame = Frame::new(
        region_sites
            .iter()
            .chain(trajectories.iter().flat_map(|t| t.0.iter())),
    );
    let mut out = String::new();
    frame.open(&mut out);
    for &s in region_sites {
        let (x, y) = frame.point(s);
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2\" fill=\"#888\"/>"
        );
    }
    for (sites, closed, part) in trajectories {
        let mut path = sites.clone();
        if *closed {
            if let Some(&first) = sites.first() {
                path.push(first);
            }
        }
        let (color, style) = match part {
            Some(p) => (PART_COLORS[*p as usize % 3], PART_STYLES[*p as usize % 3]),
            None => ("#999", ""),
        };
        frame.polyline(&mut out, &path, color, style);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use llg_core::lattice::HexId;

    #[test]
    fn svg_is_well_formed() {
        let ring: Vec<Site> = HexId::new(1, -1).unwrap().ring().to_vec();
        let s = path_svg(&ring);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<polyline").count(), 1);
        let p = partition_svg(
            &[
                (ring.clone(), true, Some(1)),
                (ring[..2].to_vec(), false, None),
            ],
            &ring,
        );
        assert_eq!(p.matches("<polyline").count(), 2);
        assert!(p.contains("stroke-dasharray"));
    }
}
