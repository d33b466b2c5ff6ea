use proptest::prelude::*;

use splitweave::dsl::CanvasSpec;
use splitweave::geometry::{
    convex_intersection_area, polygon_inset, split_brick, split_grid, split_stripes, split_voronoi, FragmentSet,
    Orientation, Point, Polygon,
};
use splitweave::Color;

fn canvas(w: i64, h: i64) -> CanvasSpec {
    CanvasSpec::new(w, h, Color::WHITE)
}

fn check_partition(fs: &FragmentSet, c: &CanvasSpec) {
    let wh = c.width_px() * c.height_px();
    let total: f64 = fs.fragments.iter().map(|f| f.polygon.area()).sum();
    assert!((total - wh).abs() / wh <= 5e-3, "area {total} vs {wh}");
    for (i, a) in fs.fragments.iter().enumerate() {
        assert_eq!(a.id, i);
        for b in &fs.fragments[i + 1..] {
            let overlap = convex_intersection_area(&a.polygon, &b.polygon);
            assert!(overlap <= 1e-3 * wh, "fragments {} and {} overlap by {overlap}", a.id, b.id);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_partitions(w in 16i64..600, h in 16i64..600, rows in 1i64..=12, cols in 1i64..=12) {
        let c = canvas(w, h);
        let fs = split_grid(&c, rows, cols).unwrap();
        prop_assert_eq!(fs.len(), (rows * cols) as usize);
        check_partition(&fs, &c);
    }

    #[test]
    fn brick_partitions(w in 16i64..600, h in 16i64..600, rows in 1i64..=10, cols in 1i64..=10, offset in 0.0f64..1.0) {
        let c = canvas(w, h);
        check_partition(&split_brick(&c, rows, cols, offset).unwrap(), &c);
    }

    #[test]
    fn stripes_partition(w in 16i64..600, h in 16i64..600, n in 1i64..=24, vertical in any::<bool>()) {
        let c = canvas(w, h);
        let o = if vertical { Orientation::Vertical } else { Orientation::Horizontal };
        let fs = split_stripes(&c, n, o).unwrap();
        prop_assert_eq!(fs.len(), n as usize);
        check_partition(&fs, &c);
    }

    #[test]
    fn voronoi_partitions(w in 32i64..600, h in 32i64..600, n in 2i64..=40, relax in 0i64..=2, seed in any::<u64>()) {
        let c = canvas(w, h);
        let fs = split_voronoi(&c, n, seed, relax).unwrap();
        check_partition(&fs, &c);
        prop_assert_eq!(&fs, &split_voronoi(&c, n, seed, relax).unwrap());
    }

    #[test]
    fn voronoi_cells_hold_their_nearest_points(seed in any::<u64>(), n in 2i64..=30, px in 0.0f64..1.0, py in 0.0f64..1.0) {
        let c = canvas(300, 200);
        let fs = split_voronoi(&c, n, seed, 0).unwrap();
        let p = Point::new(px * 300.0, py * 200.0);
        let dists: Vec<f64> = fs.fragments.iter().map(|f| f.site.unwrap().distance(p)).collect();
        let best = (0..dists.len()).min_by(|&a, &b| dists[a].total_cmp(&dists[b])).unwrap();
        let mut sorted = dists.clone();
        sorted.sort_by(f64::total_cmp);
        // Skip points within a hair of a bisector.
        prop_assume!(sorted[1] - sorted[0] > 1e-6);
        prop_assert!(fs.fragments[best].polygon.contains(p));
    }

    #[test]
    fn inset_shrinks_rectangles_exactly(x0 in 0.0f64..100.0, y0 in 0.0f64..100.0, w in 10.0f64..200.0, h in 10.0f64..200.0, frac in 0.0f64..0.45) {
        let d = frac * w.min(h);
        let r = Polygon::rect(x0, y0, x0 + w, y0 + h);
        let inner = polygon_inset(&r, d).unwrap();
        let expected = (w - 2.0 * d) * (h - 2.0 * d);
        prop_assert!((inner.area() - expected).abs() <= 1e-6 * expected.max(1.0));
    }
}

#[test]
fn inset_past_the_inradius_is_empty() {
    let r = Polygon::rect(0.0, 0.0, 10.0, 4.0);
    assert!(polygon_inset(&r, 2.5).is_none());
}
