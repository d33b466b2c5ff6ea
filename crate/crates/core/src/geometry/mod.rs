//! Canvas fragmentation and the polygon utilities it needs.

mod fragmenters;
mod inset;
mod merge;
mod polygon;
mod voronoi;

use std::fmt;

use thiserror::Error;

pub use fragmenters::{split_brick, split_grid, split_stripes, Orientation};
pub use inset::polygon_inset;
pub use merge::merge_fragments;
pub use polygon::{convex_intersection_area, Point, Polygon};
pub use voronoi::{split_voronoi, voronoi_cells};

use crate::dsl::CanvasSpec;
use crate::field::{FieldContext, FieldError};
use crate::rng::Seed;

/// Fragments smaller than this are not painted.
pub const MIN_FRAGMENT_AREA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FragmenterKind {
    Grid,
    Brick,
    Stripes,
    Voronoi,
    /// Output of a merge: no row/col coordinates survive.
    Merged,
}

impl fmt::Display for FragmenterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FragmenterKind::Grid => "grid",
            FragmenterKind::Brick => "brick",
            FragmenterKind::Stripes => "stripes",
            FragmenterKind::Voronoi => "voronoi",
            FragmenterKind::Merged => "merged",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("{param} = {value} is out of range, expected {expected}")]
    Range { param: &'static str, value: f64, expected: &'static str },
    #[error("voronoi sites coincide after {attempts} sampling attempts")]
    DegenerateSites { attempts: u32 },
    #[error("unsupported merge topology: {0}")]
    UnsupportedTopology(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One polygonal canvas region.
#[derive(Clone, Debug, PartialEq)]
pub struct Fragment {
    pub id: usize,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub polygon: Polygon,
    pub centroid: Point,
    pub area: f64,
    /// Generating site, for voronoi cells.
    pub site: Option<Point>,
}

impl Fragment {
    pub fn new(id: usize, row: Option<usize>, col: Option<usize>, polygon: Polygon) -> Fragment {
        let centroid = polygon.centroid();
        let area = polygon.area();
        Fragment { id, row, col, polygon, centroid, area, site: None }
    }
}

/// Fragments sorted by id, ids `0..n` without gaps.
#[derive(Clone, Debug, PartialEq)]
pub struct FragmentSet {
    pub fragments: Vec<Fragment>,
    pub source_kind: FragmenterKind,
    pub row_count: Option<usize>,
    pub col_count: Option<usize>,
}

impl FragmentSet {
    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.fragments.iter().map(|f| f.area).sum()
    }

    /// Field evaluation context for one member fragment.
    pub fn context<'a>(&self, fragment: &'a Fragment, canvas: &'a CanvasSpec, seed: Seed) -> FieldContext<'a> {
        FieldContext {
            fragment,
            fragment_count: self.fragments.len(),
            row_count: self.row_count,
            col_count: self.col_count,
            canvas,
            program_seed: seed,
        }
    }
}

fn check_range(param: &'static str, value: i64, min: i64, max: i64, expected: &'static str) -> Result<usize, GeometryError> {
    if value < min || value > max {
        Err(GeometryError::Range { param, value: value as f64, expected })
    } else {
        Ok(value as usize)
    }
}
