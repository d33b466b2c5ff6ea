use rand::RngCore;

use super::{check_range, Fragment, FragmentSet, FragmenterKind, GeometryError, Point, Polygon};
use crate::dsl::CanvasSpec;
use crate::rng::{substream, unit_interval, Seed};

const COINCIDENT_SITES: f64 = 1e-6;
const SITE_ATTEMPTS: u32 = 8;

/// Voronoi cells of `sites` clipped to the canvas rectangle, in site order.
///
/// Each cell is the canvas clipped against the bisector half-plane of every
/// other site, which is O(n²) per diagram and has no degenerate cases beyond
/// coincident sites.
pub fn voronoi_cells(canvas: &CanvasSpec, sites: &[Point]) -> Vec<Polygon> {
    let frame = Polygon::rect(0.0, 0.0, canvas.width_px(), canvas.height_px());
    sites
        .iter()
        .enumerate()
        .map(|(i, &si)| {
            let mut cell = frame.clone();
            for (j, &sj) in sites.iter().enumerate() {
                if i == j {
                    continue;
                }
                // Points at least as close to si as to sj.
                let normal = sj - si;
                let offset = normal.dot((si + sj) * 0.5);
                cell = cell.clip_half_plane(normal, offset);
                if cell.is_empty() {
                    break;
                }
            }
            cell
        })
        .collect()
}

fn has_coincident(sites: &[Point]) -> bool {
    sites
        .iter()
        .enumerate()
        .any(|(i, a)| sites[i + 1..].iter().any(|b| a.distance(*b) <= COINCIDENT_SITES))
}

/// Seeded voronoi split with optional Lloyd relaxation.
///
/// Sites are drawn uniformly from the seeded stream; each relaxation round
/// moves every site to its cell centroid. Ids follow the final sites sorted
/// by `(y, x, original index)`, so they ramp top to bottom.
pub fn split_voronoi(canvas: &CanvasSpec, n: i64, seed: Seed, relax_iters: i64) -> Result<FragmentSet, GeometryError> {
    let n = check_range("sites", n, 2, 256, "2..=256")?;
    let relax = check_range("relax", relax_iters, 0, 5, "0..=5")?;
    let (w, h) = (canvas.width_px(), canvas.height_px());

    for attempt in 0..SITE_ATTEMPTS {
        let mut rng = substream(seed, "voronoi-sites", attempt as u64);
        let mut sites: Vec<Point> = (0..n)
            .map(|_| {
                let x = unit_interval(rng.next_u64()) * w;
                let y = unit_interval(rng.next_u64()) * h;
                Point::new(x, y)
            })
            .collect();
        if has_coincident(&sites) {
            continue;
        }
        for _ in 0..relax {
            sites = voronoi_cells(canvas, &sites).iter().map(Polygon::centroid).collect();
        }
        if has_coincident(&sites) {
            continue;
        }
        let cells = voronoi_cells(canvas, &sites);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            sites[a]
                .y
                .total_cmp(&sites[b].y)
                .then(sites[a].x.total_cmp(&sites[b].x))
                .then(a.cmp(&b))
        });
        let fragments = order
            .iter()
            .enumerate()
            .map(|(id, &i)| {
                let mut f = Fragment::new(id, None, None, cells[i].clone());
                f.site = Some(sites[i]);
                f
            })
            .collect();
        return Ok(FragmentSet { fragments, source_kind: FragmenterKind::Voronoi, row_count: None, col_count: None });
    }
    Err(GeometryError::DegenerateSites { attempts: SITE_ATTEMPTS })
}
