//! Shared-edge dissolve of fragments that carry the same group key.

use std::collections::{BTreeMap, HashMap};

use super::{Fragment, FragmentSet, FragmenterKind, GeometryError, Point, Polygon};
use crate::dsl::CanvasSpec;
use crate::field::{eval_field, FieldExpr};
use crate::num::Num;
use crate::rng::Seed;

/// Vertices closer than this are welded together.
const WELD_EPS: f64 = 1e-6;

/// Deduplicates nearly coincident vertices through a hash of quantized
/// coordinates, probing the neighbouring buckets.
struct VertexPool {
    points: Vec<Point>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl VertexPool {
    fn new() -> VertexPool {
        VertexPool { points: Vec::new(), buckets: HashMap::new() }
    }

    fn key(p: Point) -> (i64, i64) {
        ((p.x / WELD_EPS).floor() as i64, (p.y / WELD_EPS).floor() as i64)
    }

    fn intern(&mut self, p: Point) -> usize {
        let (kx, ky) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if let Some(&id) = ids.iter().find(|&&id| self.points[id].distance(p) <= WELD_EPS) {
                        return id;
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.buckets.entry((kx, ky)).or_default().push(id);
        id
    }
}

/// Splits the edge `a -> b` at every pooled vertex lying on its interior.
fn split_edge(pool: &VertexPool, a: usize, b: usize) -> Vec<(usize, usize)> {
    let (pa, pb) = (pool.points[a], pool.points[b]);
    let d = pb - pa;
    let len2 = d.dot(d);
    let (lo, hi) = (
        Point::new(pa.x.min(pb.x) - WELD_EPS, pa.y.min(pb.y) - WELD_EPS),
        Point::new(pa.x.max(pb.x) + WELD_EPS, pa.y.max(pb.y) + WELD_EPS),
    );
    let mut cuts: Vec<(f64, usize)> = pool
        .points
        .iter()
        .enumerate()
        .filter(|(id, p)| *id != a && *id != b && p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y)
        .filter_map(|(id, p)| {
            let t = (*p - pa).dot(d) / len2;
            let off = (*p - pa).cross(d).abs() / len2.sqrt();
            (t > 0.0 && t < 1.0 && off <= WELD_EPS).then_some((t, id))
        })
        .collect();
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut chain = vec![a];
    chain.extend(cuts.into_iter().map(|(_, id)| id));
    chain.push(b);
    chain.windows(2).map(|w| (w[0], w[1])).collect()
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Outer contour of a set of edge-connected fragments.
fn dissolve(pool: &VertexPool, edges: &[(usize, usize)]) -> Result<Polygon, GeometryError> {
    // Interior edges occur once in each direction and cancel.
    let mut open: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in edges {
        match open.get_mut(&(b, a)) {
            Some(n) if *n > 0 => {
                *n -= 1;
                if *n == 0 {
                    open.remove(&(b, a));
                }
            }
            _ => *open.entry((a, b)).or_default() += 1,
        }
    }
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for (&(a, b), &count) in &open {
        if count != 1 || next.insert(a, b).is_some() {
            return Err(GeometryError::UnsupportedTopology("merged outline touches itself at a vertex".into()));
        }
    }
    let start = *next.keys().next().expect("a component has boundary edges");
    let mut ring = vec![start];
    let mut cur = next[&start];
    while cur != start {
        ring.push(cur);
        cur = *next
            .get(&cur)
            .ok_or_else(|| GeometryError::UnsupportedTopology("merged outline is not closed".into()))?;
        if ring.len() > next.len() {
            return Err(GeometryError::UnsupportedTopology("merged outline is not closed".into()));
        }
    }
    if ring.len() != next.len() {
        return Err(GeometryError::UnsupportedTopology("merge would produce a hole".into()));
    }
    let poly = Polygon::new(ring.into_iter().map(|i| pool.points[i]).collect()).simplified(WELD_EPS);
    if poly.len() < 3 || poly.signed_area() <= 0.0 {
        return Err(GeometryError::UnsupportedTopology("merged outline is degenerate".into()));
    }
    Ok(poly)
}

/// Merges fragments that share `key` into one fragment per connected
/// component of the shared-edge adjacency graph.
///
/// New ids follow the ascending minimum constituent id; row/col are dropped.
/// A component whose outline would enclose a hole is rejected.
pub fn merge_fragments(fs: &FragmentSet, key: &FieldExpr, canvas: &CanvasSpec, seed: Seed) -> Result<FragmentSet, GeometryError> {
    let keys: Vec<Num> = fs
        .fragments
        .iter()
        .map(|f| Ok(Num::from_f64(eval_field(key, &fs.context(f, canvas, seed))?.as_number()?)))
        .collect::<Result<_, GeometryError>>()?;

    let mut pool = VertexPool::new();
    let rings: Vec<Vec<usize>> = fs
        .fragments
        .iter()
        .map(|f| {
            let mut ring: Vec<usize> = f.polygon.points.iter().map(|p| pool.intern(*p)).collect();
            ring.dedup();
            while ring.len() > 1 && ring.first() == ring.last() {
                ring.pop();
            }
            ring
        })
        .collect();
    let edges: Vec<Vec<(usize, usize)>> = rings
        .iter()
        .map(|ring| {
            (0..ring.len())
                .flat_map(|i| split_edge(&pool, ring[i], ring[(i + 1) % ring.len()]))
                .collect()
        })
        .collect();

    let mut owners: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (frag, list) in edges.iter().enumerate() {
        for &(a, b) in list {
            owners.entry((a.min(b), a.max(b))).or_default().push(frag);
        }
    }
    let mut parent: Vec<usize> = (0..fs.len()).collect();
    let mut shared: Vec<(usize, usize)> = owners
        .values()
        .flat_map(|o| {
            o.iter()
                .enumerate()
                .flat_map(move |(i, &x)| o[i + 1..].iter().map(move |&y| (x, y)))
        })
        .collect();
    shared.sort_unstable();
    for (x, y) in shared {
        if keys[x] == keys[y] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..fs.len() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    // Roots are the minimum member ids, so BTreeMap order is the id order.
    let mut fragments = Vec::with_capacity(groups.len());
    for (new_id, members) in groups.values().enumerate() {
        let polygon = if members.len() == 1 {
            fs.fragments[members[0]].polygon.clone()
        } else {
            let all: Vec<(usize, usize)> = members.iter().flat_map(|&m| edges[m].iter().copied()).collect();
            dissolve(&pool, &all)?
        };
        fragments.push(Fragment::new(new_id, None, None, polygon));
    }
    Ok(FragmentSet { fragments, source_kind: FragmenterKind::Merged, row_count: None, col_count: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Color;
    use crate::field::{Axis, ValueList};
    use crate::geometry::{split_brick, split_grid, split_voronoi};

    fn canvas() -> CanvasSpec {
        CanvasSpec::new(100, 100, Color::WHITE)
    }

    fn identity_key(n: usize) -> FieldExpr {
        FieldExpr::Ramp { axis: Axis::Id, from: 0.0.into(), to: ((n - 1) as f64).into() }
    }

    #[test]
    fn injective_key_is_identity_on_geometry() {
        let c = canvas();
        for fs in [split_grid(&c, 3, 4).unwrap(), split_voronoi(&c, 20, 5, 1).unwrap()] {
            let merged = merge_fragments(&fs, &identity_key(fs.len()), &c, 0).unwrap();
            assert_eq!(merged.len(), fs.len());
            for (a, b) in merged.fragments.iter().zip(&fs.fragments) {
                assert_eq!(a.polygon, b.polygon);
                assert_eq!(a.row, None);
            }
        }
    }

    #[test]
    fn alternating_rows_dissolve_into_bands() {
        let c = canvas();
        let fs = split_grid(&c, 2, 2).unwrap();
        let key = FieldExpr::Alt { axis: Axis::Row, values: ValueList::nums(&[0.0, 1.0]) };
        let merged = merge_fragments(&fs, &key, &c, 0).unwrap();
        assert_eq!(merged.len(), 2);
        for f in &merged.fragments {
            assert_eq!(f.polygon.len(), 4);
            assert!((f.area - 5000.0).abs() < 1e-6);
            let (lo, hi) = f.polygon.bbox();
            assert!((hi.x - lo.x - 100.0).abs() < 1e-9 && (hi.y - lo.y - 50.0).abs() < 1e-9);
        }
        assert!(merged.fragments[0].centroid.y < merged.fragments[1].centroid.y);
    }

    /// Connected components of same-key cells under 4-neighbour adjacency.
    fn grid_components(rows: usize, cols: usize, key: impl Fn(usize, usize) -> i32) -> usize {
        let mut seen = vec![false; rows * cols];
        let mut count = 0;
        for start in 0..rows * cols {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                let (r, c) = (i / cols, i % cols);
                let mut nbrs = Vec::new();
                if r > 0 { nbrs.push(i - cols) }
                if r + 1 < rows { nbrs.push(i + cols) }
                if c > 0 { nbrs.push(i - 1) }
                if c + 1 < cols { nbrs.push(i + 1) }
                for j in nbrs {
                    if !seen[j] && key(j / cols, j % cols) == key(r, c) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn corners_sharing_a_key_stay_separate() {
        let c = canvas();
        let fs = split_grid(&c, 3, 3).unwrap();
        let corner = |r: usize, col: usize| ((r == 0 || r == 2) && (col == 0 || col == 2)) as i32;
        let key = FieldExpr::Cycle {
            key: Axis::Id,
            values: ValueList::nums(&[100.0, 1.0, 100.0, 3.0, 4.0, 5.0, 100.0, 7.0, 100.0]),
        };
        let merged = merge_fragments(&fs, &key, &c, 0).unwrap();
        // Key 100 on the four corners, distinct keys elsewhere.
        let oracle = grid_components(3, 3, |r, col| if corner(r, col) == 1 { 100 } else { (r * 3 + col) as i32 });
        assert_eq!(oracle, 9);
        assert_eq!(merged.len(), oracle);
    }

    #[test]
    fn ring_with_hole_is_rejected() {
        let c = canvas();
        let fs = split_grid(&c, 3, 3).unwrap();
        let key = FieldExpr::Cycle { key: Axis::Id, values: ValueList::nums(&[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]) };
        assert!(matches!(merge_fragments(&fs, &key, &c, 0), Err(GeometryError::UnsupportedTopology(_))));
    }

    #[test]
    fn brick_rows_merge_across_t_junctions() {
        let c = canvas();
        let fs = split_brick(&c, 4, 3, 0.5).unwrap();
        let key = FieldExpr::Const(1.0.into());
        let merged = merge_fragments(&fs, &key, &c, 0).unwrap();
        assert_eq!(merged.len(), 1);
        assert!((merged.fragments[0].area - 10_000.0).abs() < 1e-6);
        assert_eq!(merged.fragments[0].polygon.len(), 4);
    }

    #[test]
    fn color_key_is_a_type_error() {
        let c = canvas();
        let fs = split_grid(&c, 2, 2).unwrap();
        let key = FieldExpr::Const(Color::BLACK.into());
        assert!(matches!(merge_fragments(&fs, &key, &c, 0), Err(GeometryError::Field(_))));
    }

    #[test]
    fn voronoi_merge_keeps_area() {
        let c = CanvasSpec::new(200, 200, Color::WHITE);
        let fs = split_voronoi(&c, 30, 3, 1).unwrap();
        let key = FieldExpr::Const(0.0.into());
        let merged = merge_fragments(&fs, &key, &c, 0).unwrap();
        assert_eq!(merged.len(), 1);
        assert!((merged.total_area() - 40_000.0).abs() < 1e-3);
    }
}
