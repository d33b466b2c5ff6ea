use super::{check_range, Fragment, FragmentSet, FragmenterKind, GeometryError, Polygon};
use crate::dsl::CanvasSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub fn from_name(s: &str) -> Option<Orientation> {
        match s {
            "horizontal" => Some(Orientation::Horizontal),
            "vertical" => Some(Orientation::Vertical),
            _ => None,
        }
    }
}

/// `k * total / parts` for `k = 0..=parts`; the last entry is exactly `total`.
fn cuts(total: f64, parts: usize) -> Vec<f64> {
    (0..=parts).map(|k| k as f64 * total / parts as f64).collect()
}

/// Row-major grid: cell `(r, c)` gets id `r * cols + c`.
pub fn split_grid(canvas: &CanvasSpec, rows: i64, cols: i64) -> Result<FragmentSet, GeometryError> {
    let rows = check_range("rows", rows, 1, 64, "1..=64")?;
    let cols = check_range("cols", cols, 1, 64, "1..=64")?;
    let xs = cuts(canvas.width_px(), cols);
    let ys = cuts(canvas.height_px(), rows);
    let mut fragments = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let poly = Polygon::rect(xs[c], ys[r], xs[c + 1], ys[r + 1]);
            fragments.push(Fragment::new(r * cols + c, Some(r), Some(c), poly));
        }
    }
    Ok(FragmentSet { fragments, source_kind: FragmenterKind::Grid, row_count: Some(rows), col_count: Some(cols) })
}

/// Brick bond. Odd rows shift left by `offset` of a cell width; the cut that
/// falls off the left edge leaves a partial cell there, so those rows hold
/// `cols + 1` cells. Rows do not wrap.
pub fn split_brick(canvas: &CanvasSpec, rows: i64, cols: i64, offset: f64) -> Result<FragmentSet, GeometryError> {
    let rows = check_range("rows", rows, 1, 64, "1..=64")?;
    let cols = check_range("cols", cols, 1, 64, "1..=64")?;
    if !(0.0..1.0).contains(&offset) {
        return Err(GeometryError::Range { param: "offset", value: offset, expected: "[0, 1)" });
    }
    let (w, h) = (canvas.width_px(), canvas.height_px());
    let ys = cuts(h, rows);
    let mut fragments = Vec::new();
    let mut col_count = cols;
    for r in 0..rows {
        let xs: Vec<f64> = if r % 2 == 1 && offset > 0.0 {
            let mut xs = vec![0.0];
            xs.extend((1..=cols).map(|c| (c as f64 - offset) * w / cols as f64));
            xs.push(w);
            col_count = cols + 1;
            xs
        } else {
            cuts(w, cols)
        };
        for (c, pair) in xs.windows(2).enumerate() {
            let poly = Polygon::rect(pair[0], ys[r], pair[1], ys[r + 1]);
            fragments.push(Fragment::new(fragments.len(), Some(r), Some(c), poly));
        }
    }
    Ok(FragmentSet { fragments, source_kind: FragmenterKind::Brick, row_count: Some(rows), col_count: Some(col_count) })
}

/// `n` equal bands. Horizontal bands stack along y and carry `row = id`;
/// vertical bands run along x and carry `col = id`.
pub fn split_stripes(canvas: &CanvasSpec, n: i64, orientation: Orientation) -> Result<FragmentSet, GeometryError> {
    let n = check_range("count", n, 1, 128, "1..=128")?;
    let (w, h) = (canvas.width_px(), canvas.height_px());
    let fragments = match orientation {
        Orientation::Horizontal => cuts(h, n)
            .windows(2)
            .enumerate()
            .map(|(i, y)| Fragment::new(i, Some(i), Some(0), Polygon::rect(0.0, y[0], w, y[1])))
            .collect(),
        Orientation::Vertical => cuts(w, n)
            .windows(2)
            .enumerate()
            .map(|(i, x)| Fragment::new(i, Some(0), Some(i), Polygon::rect(x[0], 0.0, x[1], h)))
            .collect(),
    };
    let (row_count, col_count) = match orientation {
        Orientation::Horizontal => (n, 1),
        Orientation::Vertical => (1, n),
    };
    Ok(FragmentSet { fragments, source_kind: FragmenterKind::Stripes, row_count: Some(row_count), col_count: Some(col_count) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Color;

    fn canvas() -> CanvasSpec {
        CanvasSpec::new(100, 100, Color::WHITE)
    }

    #[test]
    fn grid_two_by_two() {
        let fs = split_grid(&canvas(), 2, 2).unwrap();
        assert_eq!(fs.len(), 4);
        for (i, f) in fs.fragments.iter().enumerate() {
            assert_eq!(f.id, i);
            assert_eq!(f.area, 2500.0);
        }
        assert_eq!((fs.fragments[2].row, fs.fragments[2].col), (Some(1), Some(0)));
    }

    #[test]
    fn grid_one_by_one_is_canvas() {
        let fs = split_grid(&canvas(), 1, 1).unwrap();
        assert_eq!(fs.fragments[0].polygon, Polygon::rect(0.0, 0.0, 100.0, 100.0));
    }

    #[test]
    fn grid_two_by_three_cell_four() {
        let fs = split_grid(&canvas(), 2, 3).unwrap();
        let f = &fs.fragments[4];
        assert_eq!((f.row, f.col), (Some(1), Some(1)));
        let (lo, hi) = f.polygon.bbox();
        assert!((lo.x - 33.333333).abs() < 1e-6 && (hi.x - 66.666667).abs() < 1e-6);
        // Area-sum oracle.
        assert!((fs.total_area() - 10_000.0).abs() < 1e-9);
    }

    #[test]
    fn grid_range_errors() {
        assert!(matches!(split_grid(&canvas(), 0, 2), Err(GeometryError::Range { param: "rows", .. })));
        assert!(split_grid(&canvas(), 2, 65).is_err());
    }

    #[test]
    fn brick_zero_offset_matches_grid() {
        let b = split_brick(&canvas(), 3, 4, 0.0).unwrap();
        let g = split_grid(&canvas(), 3, 4).unwrap();
        assert_eq!(b.len(), g.len());
        for (x, y) in b.fragments.iter().zip(&g.fragments) {
            assert_eq!(x.polygon, y.polygon);
            assert_eq!((x.row, x.col), (y.row, y.col));
        }
    }

    #[test]
    fn brick_half_offset_widths() {
        let fs = split_brick(&canvas(), 2, 2, 0.5).unwrap();
        assert_eq!(fs.len(), 5);
        let widths: Vec<f64> = fs.fragments[2..]
            .iter()
            .map(|f| {
                let (lo, hi) = f.polygon.bbox();
                hi.x - lo.x
            })
            .collect();
        assert_eq!(widths, vec![25.0, 50.0, 25.0]);
        assert_eq!(fs.col_count, Some(3));
    }

    #[test]
    fn brick_row_widths_sum_to_canvas_width() {
        let c = CanvasSpec::new(317, 211, Color::WHITE);
        for (rows, cols, offset) in [(5, 7, 0.3), (2, 1, 0.9), (6, 3, 0.01)] {
            let fs = split_brick(&c, rows, cols, offset).unwrap();
            for r in 0..rows as usize {
                let row_area: f64 = fs.fragments.iter().filter(|f| f.row == Some(r)).map(|f| f.area).sum();
                let row_height = 211.0 / rows as f64;
                assert!((row_area / row_height - 317.0).abs() < 1e-9);
            }
        }
        assert!(split_brick(&c, 2, 2, 1.0).is_err());
    }

    #[test]
    fn stripes() {
        let whole = split_stripes(&canvas(), 1, Orientation::Vertical).unwrap();
        assert_eq!(whole.fragments[0].area, 10_000.0);
        let v = split_stripes(&canvas(), 4, Orientation::Vertical).unwrap();
        assert!(v.fragments.iter().all(|f| {
            let (lo, hi) = f.polygon.bbox();
            hi.x - lo.x == 25.0
        }));
        assert_eq!(v.fragments[3].col, Some(3));
        let h = split_stripes(&canvas(), 3, Orientation::Horizontal).unwrap();
        let (lo, hi) = h.fragments[1].polygon.bbox();
        assert!((lo.y - 33.333333).abs() < 1e-6 && (hi.y - 66.666667).abs() < 1e-6);
        assert_eq!(h.fragments[1].row, Some(1));
        assert!(split_stripes(&canvas(), 129, Orientation::Vertical).is_err());
    }
}
