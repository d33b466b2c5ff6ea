//! PNG export.

use resvg::{tiny_skia, usvg};

use super::RenderError;

/// Turns emitted SVG text into PNG bytes. `size` is the output width; the
/// height keeps the document's aspect ratio.
pub trait Rasterizer: Send + Sync {
    fn rasterize(&self, svg: &str, size: u32) -> Result<Vec<u8>, RenderError>;
}

/// resvg-backed rasterizer producing 8-bit RGB PNGs composited over white.
#[derive(Clone, Copy, Debug, Default)]
pub struct ResvgRasterizer;

impl Rasterizer for ResvgRasterizer {
    fn rasterize(&self, svg: &str, size: u32) -> Result<Vec<u8>, RenderError> {
        let err = |e: &dyn std::fmt::Display| RenderError::Raster(e.to_string());
        let tree = usvg::Tree::from_str(svg, &usvg::Options::default()).map_err(|e| err(&e))?;
        let doc = tree.size();
        let width = size.max(1);
        let height = ((width as f64 * doc.height() as f64 / doc.width() as f64).round() as u32).max(1);
        let mut pixmap = tiny_skia::Pixmap::new(width, height).ok_or_else(|| err(&"raster size too large"))?;
        let transform = tiny_skia::Transform::from_scale(width as f32 / doc.width(), height as f32 / doc.height());
        resvg::render(&tree, transform, &mut pixmap.as_mut());

        // Premultiplied RGBA over an opaque white backdrop.
        let rgb: Vec<u8> = pixmap
            .data()
            .chunks_exact(4)
            .flat_map(|px| {
                let a = px[3] as u16;
                [0, 1, 2].map(|i| (px[i] as u16 + 255 - a).min(255) as u8)
            })
            .collect();
        let mut out = Vec::new();
        let mut encoder = png::Encoder::new(&mut out, width, height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(|e| err(&e))?;
        writer.write_image_data(&rgb).map_err(|e| err(&e))?;
        writer.finish().map_err(|e| err(&e))?;
        Ok(out)
    }
}
