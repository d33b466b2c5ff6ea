use super::{Point, Polygon};

/// Miter joins longer than this multiple of the offset are beveled.
const MITER_LIMIT: f64 = 4.0;
/// Results smaller than this count as collapsed.
const COLLAPSED_AREA: f64 = 1e-3;

/// Offsets every edge inward by `d`.
///
/// Convex polygons are intersected with the inward-shifted half-planes of
/// their edges, which is the exact miter-joined inset. Other polygons are
/// offset edge by edge, dropping edges that reverse direction, with miter
/// joins at reflex corners beveled past the miter limit. Returns `None` when
/// the polygon collapses.
pub fn polygon_inset(poly: &Polygon, d: f64) -> Option<Polygon> {
    if d <= 0.0 {
        return Some(poly.clone());
    }
    let result = if poly.is_convex() { inset_convex(poly, d) } else { inset_general(poly, d) };
    result.filter(|p| p.len() >= 3 && p.signed_area() >= COLLAPSED_AREA)
}

fn inset_convex(poly: &Polygon, d: f64) -> Option<Polygon> {
    let mut out = poly.clone();
    for (a, b) in poly.edges() {
        let dir = b - a;
        if dir.length() == 0.0 {
            continue;
        }
        let n = dir.left_normal().normalized();
        // Keep dot(p - a, n) >= d.
        out = out.clip_half_plane(-n, -(a.dot(n) + d));
        if out.len() < 3 {
            return None;
        }
    }
    Some(out)
}

/// An offset edge: a point on the line and its direction.
#[derive(Clone, Copy)]
struct Line {
    origin: Point,
    dir: Point,
}

fn intersect(l1: Line, l2: Line) -> Option<Point> {
    let denom = l1.dir.cross(l2.dir);
    if denom.abs() < 1e-12 {
        return None;
    }
    let t = (l2.origin - l1.origin).cross(l2.dir) / denom;
    Some(l1.origin + l1.dir * t)
}

fn inset_general(poly: &Polygon, d: f64) -> Option<Polygon> {
    let src = poly.simplified(1e-9);
    // (original edge direction, offset line)
    let mut lines: Vec<(Point, Line)> = src
        .edges()
        .filter(|(a, b)| a.distance(*b) > 0.0)
        .map(|(a, b)| {
            let dir = b - a;
            let n = dir.left_normal().normalized();
            (dir, Line { origin: a + n * d, dir })
        })
        .collect();

    // Repeatedly drop offset edges whose endpoints come out reversed.
    loop {
        let n = lines.len();
        if n < 3 {
            return None;
        }
        let corners: Vec<Point> = (0..n)
            .map(|i| {
                let prev = lines[(i + n - 1) % n].1;
                let cur = lines[i].1;
                intersect(prev, cur).unwrap_or(cur.origin)
            })
            .collect();
        let reversed = (0..n).find(|&i| (corners[(i + 1) % n] - corners[i]).dot(lines[i].0) <= 0.0);
        match reversed {
            Some(i) => {
                lines.remove(i);
            }
            None => break,
        }
    }

    let n = lines.len();
    let mut out = Vec::with_capacity(n * 2);
    for i in 0..n {
        let (prev_dir, prev) = lines[(i + n - 1) % n];
        let (cur_dir, cur) = lines[i];
        let reflex = prev_dir.cross(cur_dir) < 0.0;
        let n1 = prev_dir.left_normal().normalized();
        let n2 = cur_dir.left_normal().normalized();
        let cos_half = ((1.0 + n1.dot(n2)) / 2.0).max(0.0).sqrt();
        match intersect(prev, cur) {
            Some(p) if !reflex || cos_half * MITER_LIMIT >= 1.0 => out.push(p),
            _ => {
                // Bevel between the two offset edge ends around the corner.
                let corner = cur.origin - n2 * d;
                out.push(corner + n1 * d);
                out.push(cur.origin);
            }
        }
    }
    Some(Polygon::new(out))
}
