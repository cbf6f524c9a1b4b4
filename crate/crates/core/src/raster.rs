//! Pixel coverage of filled primitives.
//!
//! Pixel `(col, row)` is sampled at the point `(col, row)`. Coverage is a
//! hard inside/outside test; nothing here blends.

use crate::math::{ceil, floor};

/// Segment dilated by a disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Capsule {
    pub ax: f64,
    pub ay: f64,
    pub bx: f64,
    pub by: f64,
    pub radius: f64,
}

impl Capsule {
    pub fn contains(&self, px: f64, py: f64) -> bool {
        let (abx, aby) = (self.bx - self.ax, self.by - self.ay);
        let (apx, apy) = (px - self.ax, py - self.ay);
        let len2 = abx * abx + aby * aby;
        let t = if len2 > 0.0 {
            ((apx * abx + apy * aby) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (dx, dy) = (apx - t * abx, apy - t * aby);
        dx * dx + dy * dy <= self.radius * self.radius
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        (
            self.ax.min(self.bx) - self.radius,
            self.ay.min(self.by) - self.radius,
            self.ax.max(self.bx) + self.radius,
            self.ay.max(self.by) + self.radius,
        )
    }
}

/// Integer pixel range covering `[lo, hi]`, clipped to `0..size`.
fn pixel_span(lo: f64, hi: f64, size: u32) -> Option<(u32, u32)> {
    let max = f64::from(size) - 1.0;
    let lo = ceil(lo).max(0.0);
    let hi = floor(hi).min(max);
    if lo > hi {
        None
    } else {
        Some((lo as u32, hi as u32))
    }
}

fn for_each_in_box(
    bounds: (f64, f64, f64, f64),
    width: u32,
    height: u32,
    mut inside: impl FnMut(f64, f64) -> bool,
    mut visit: impl FnMut(u32, u32),
) {
    let (x0, y0, x1, y1) = bounds;
    let (Some((c0, c1)), Some((r0, r1))) =
        (pixel_span(x0, x1, width), pixel_span(y0, y1, height))
    else {
        return;
    };
    for row in r0..=r1 {
        for col in c0..=c1 {
            if inside(f64::from(col), f64::from(row)) {
                visit(col, row);
            }
        }
    }
}

/// Calls `visit(col, row)` for every in-image pixel the capsule covers.
pub(crate) fn for_each_capsule_pixel(
    capsule: &Capsule,
    width: u32,
    height: u32,
    visit: impl FnMut(u32, u32),
) {
    for_each_in_box(
        capsule.bounds(),
        width,
        height,
        |x, y| capsule.contains(x, y),
        visit,
    );
}

/// Calls `visit(col, row)` for every in-image pixel inside the closed
/// triangle, regardless of winding.
pub(crate) fn for_each_triangle_pixel(
    tri: [(f64, f64); 3],
    width: u32,
    height: u32,
    visit: impl FnMut(u32, u32),
) {
    let edge = |a: (f64, f64), b: (f64, f64), x: f64, y: f64| {
        (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0)
    };
    let [p, q, r] = tri;
    let area = edge(p, q, r.0, r.1);
    if area == 0.0 {
        return;
    }
    let bounds = (
        p.0.min(q.0).min(r.0),
        p.1.min(q.1).min(r.1),
        p.0.max(q.0).max(r.0),
        p.1.max(q.1).max(r.1),
    );
    for_each_in_box(
        bounds,
        width,
        height,
        |x, y| {
            let (e0, e1, e2) = (edge(p, q, x, y), edge(q, r, x, y), edge(r, p, x, y));
            if area > 0.0 {
                e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0
            } else {
                e0 <= 0.0 && e1 <= 0.0 && e2 <= 0.0
            }
        },
        visit,
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    #[test]
    fn horizontal_capsule_coverage() {
        let c = Capsule {
            ax: 10.0,
            ay: 20.0,
            bx: 50.0,
            by: 20.0,
            radius: 1.0,
        };
        let mut px = Vec::new();
        for_each_capsule_pixel(&c, 64, 64, |x, y| px.push((x, y)));
        // rows 19 and 21 span x 10..=50, row 20 spans 9..=51
        assert_eq!(px.len(), 41 * 2 + 43);
        assert!(px.contains(&(9, 20)) && px.contains(&(51, 20)));
        assert!(!px.contains(&(9, 19)));
    }

    #[test]
    fn clipped_when_far_outside() {
        let c = Capsule {
            ax: -1e9,
            ay: -1e9,
            bx: -1e9 + 1.0,
            by: -1e9,
            radius: 3.0,
        };
        let mut n = 0;
        for_each_capsule_pixel(&c, 32, 32, |_, _| n += 1);
        assert_eq!(n, 0);
    }

    #[test]
    fn point_capsule_is_disc() {
        let c = Capsule {
            ax: 5.0,
            ay: 5.0,
            bx: 5.0,
            by: 5.0,
            radius: 1.0,
        };
        let mut n = 0;
        for_each_capsule_pixel(&c, 16, 16, |_, _| n += 1);
        assert_eq!(n, 5);
    }

    #[test]
    fn triangle_either_winding() {
        let mut a = 0;
        let mut b = 0;
        for_each_triangle_pixel([(0.0, 0.0), (4.0, 0.0), (0.0, 4.0)], 16, 16, |_, _| a += 1);
        for_each_triangle_pixel([(0.0, 0.0), (0.0, 4.0), (4.0, 0.0)], 16, 16, |_, _| b += 1);
        assert_eq!(a, 15);
        assert_eq!(a, b);
    }
}
