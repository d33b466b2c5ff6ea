use std::ops::{Add, Mul, Neg, Sub};

/// A point in canvas pixels: origin top-left, x rightward, y downward.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).length()
    }

    pub fn normalized(self) -> Point {
        let l = self.length();
        if l == 0.0 {
            self
        } else {
            self * (1.0 / l)
        }
    }

    /// The normal pointing to the left of this direction, which is the
    /// interior side of a positively oriented polygon.
    pub fn left_normal(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A simple polygon, closed implicitly.
///
/// Vertices run so that the shoelace signed area is positive; with the y-down
/// canvas frame that is counter-clockwise in the mathematical sense and the
/// interior lies to the left of every edge.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polygon {
    pub points: Vec<Point>,
}

impl Polygon {
    pub fn new(points: Vec<Point>) -> Polygon {
        Polygon { points }
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
        Polygon::new(vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Edges as `(start, end)` pairs, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        self.edges().map(|(a, b)| a.cross(b)).sum::<f64>() / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Area centroid; falls back to the vertex mean for degenerate input.
    pub fn centroid(&self) -> Point {
        let a = self.signed_area();
        if a.abs() < 1e-12 {
            let n = self.points.len().max(1) as f64;
            let s = self.points.iter().fold(Point::default(), |acc, p| acc + *p);
            return s * (1.0 / n);
        }
        // Relative to the first vertex to limit cancellation.
        let o = self.points[0];
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, q) in self.edges() {
            let (p, q) = (p - o, q - o);
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point::new(o.x + cx / (6.0 * a), o.y + cy / (6.0 * a))
    }

    /// `(min, max)` corners of the axis-aligned bounding box.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.points.len();
        if n < 3 {
            return false;
        }
        (0..n).all(|i| {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let c = self.points[(i + 2) % n];
            (b - a).cross(c - b) >= -1e-9 * (b - a).length() * (c - b).length()
        })
    }

    /// Keeps the part of the polygon where `dot(p, normal) <= offset`
    /// (Sutherland–Hodgman against one line). Works for convex input.
    pub fn clip_half_plane(&self, normal: Point, offset: f64) -> Polygon {
        let n = self.points.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let cur = self.points[i];
            let next = self.points[(i + 1) % n];
            let dc = cur.dot(normal) - offset;
            let dn = next.dot(normal) - offset;
            if dc <= 0.0 {
                out.push(cur);
            }
            if (dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0) {
                let t = dc / (dc - dn);
                out.push(cur.lerp(next, t));
            }
        }
        Polygon::new(out)
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Polygon {
        Polygon::new(self.points.iter().map(|p| f(*p)).collect())
    }

    /// Drops consecutive vertices closer than `eps` and vertices whose
    /// neighbours are collinear with them.
    pub fn simplified(&self, eps: f64) -> Polygon {
        let mut pts: Vec<Point> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            if pts.last().is_none_or(|q: &Point| q.distance(*p) > eps) {
                pts.push(*p);
            }
        }
        while pts.len() > 1 && pts[0].distance(*pts.last().unwrap()) <= eps {
            pts.pop();
        }
        let mut changed = true;
        while changed && pts.len() > 3 {
            changed = false;
            let n = pts.len();
            for i in 0..n {
                let a = pts[(i + n - 1) % n];
                let b = pts[i];
                let c = pts[(i + 1) % n];
                let (u, v) = (b - a, c - b);
                if u.cross(v).abs() <= 1e-9 * u.length() * v.length() && u.dot(v) > 0.0 {
                    pts.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        Polygon::new(pts)
    }

    /// Whether any two non-adjacent edges intersect.
    pub fn self_intersects(&self) -> bool {
        let n = self.points.len();
        let edges: Vec<(Point, Point)> = self.edges().collect();
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_intersect(edges[i], edges[j]) {
                    return true;
                }
            }
        }
        false
    }

    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn segments_intersect((p1, p2): (Point, Point), (q1, q2): (Point, Point)) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

/// Area of the intersection of two convex polygons.
pub fn convex_intersection_area(a: &Polygon, b: &Polygon) -> f64 {
    let mut clipped = a.clone();
    for (p, q) in b.edges() {
        if clipped.is_empty() {
            return 0.0;
        }
        // Interior of `b` is left of p->q; keep dot(x, -n) <= -dot(p, n).
        let n = (q - p).left_normal();
        clipped = clipped.clip_half_plane(-n, -p.dot(n));
    }
    if clipped.len() < 3 {
        0.0
    } else {
        clipped.area()
    }
}
