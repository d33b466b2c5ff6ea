//! Harmonious color palettes with a minimum perceptual spacing.

use palette::{FromColor, Hsl, Lab, Srgb};
use rand::Rng;

use crate::color::Color;
use crate::rng::{substream, Seed, Stream};

/// Minimum CIE76 distance between any two palette colors.
pub const MIN_DELTA_E: f64 = 10.0;
const ATTEMPTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Analogous,
    Complementary,
    Triadic,
    Monochrome,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Analogous, Scheme::Complementary, Scheme::Triadic, Scheme::Monochrome];

    /// Hue offset in degrees of the `i`-th of `n` colors.
    fn hue_offset(self, i: usize, n: usize) -> f64 {
        match self {
            Scheme::Analogous => -30.0 + 60.0 * i as f64 / (n - 1) as f64,
            Scheme::Complementary => [0.0, 180.0][i % 2],
            Scheme::Triadic => [0.0, 120.0, -120.0][i % 3],
            Scheme::Monochrome => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    pub colors: Vec<Color>,
    pub scheme: Scheme,
}

pub fn to_lab(c: Color) -> Lab<palette::white_point::D65, f64> {
    let rgb = Srgb::new(c.r, c.g, c.b).into_format::<f64>();
    Lab::from_color(rgb)
}

/// CIE76 color difference.
pub fn delta_e(a: Color, b: Color) -> f64 {
    let (x, y) = (to_lab(a), to_lab(b));
    ((x.l - y.l).powi(2) + (x.a - y.a).powi(2) + (x.b - y.b).powi(2)).sqrt()
}

/// HSL hue in degrees.
pub fn hue_of(c: Color) -> f64 {
    let hsl: Hsl<palette::encoding::Srgb, f64> = Hsl::from_color(Srgb::new(c.r, c.g, c.b).into_format::<f64>());
    hsl.hue.into_positive_degrees()
}

fn hsl_color(hue: f64, saturation: f64, lightness: f64) -> Color {
    let hsl: Hsl<palette::encoding::Srgb, f64> = Hsl::new(hue.rem_euclid(360.0), saturation, lightness);
    let rgb: Srgb<u8> = Srgb::from_color(hsl).into_format();
    Color::rgb(rgb.red, rgb.green, rgb.blue)
}

fn well_spaced(colors: &[Color]) -> bool {
    colors.iter().enumerate().all(|(i, &a)| colors[i + 1..].iter().all(|&b| delta_e(a, b) >= MIN_DELTA_E))
}

impl Palette {
    pub fn darkest(&self) -> Color {
        *self.colors.iter().min_by(|a, b| to_lab(**a).l.total_cmp(&to_lab(**b).l)).expect("palettes are non-empty")
    }

    pub fn lightest(&self) -> Color {
        *self.colors.iter().max_by(|a, b| to_lab(**a).l.total_cmp(&to_lab(**b).l)).expect("palettes are non-empty")
    }

    /// All colors but the lightest, darkest first.
    pub fn inks(&self) -> Vec<Color> {
        let light = self.lightest();
        let mut inks: Vec<Color> = self.colors.iter().copied().filter(|c| *c != light).collect();
        inks.sort_by(|a, b| to_lab(*a).l.total_cmp(&to_lab(*b).l));
        inks
    }
}

fn attempt(rng: &mut Stream, scheme: Scheme, base: f64, n: usize, lightness: (f64, f64), jitter: bool) -> Vec<Color> {
    let mut levels: Vec<f64> = (0..n).map(|i| lightness.0 + (lightness.1 - lightness.0) * i as f64 / (n - 1) as f64).collect();
    for i in (1..n).rev() {
        levels.swap(i, rng.gen_range(0..=i));
    }
    (0..n)
        .map(|i| {
            let (s, dl) = if jitter { (rng.gen_range(0.55..0.9), rng.gen_range(-0.03..0.03)) } else { (0.65, 0.0) };
            hsl_color(base + scheme.hue_offset(i, n), s, (levels[i] + dl).clamp(0.0, 1.0))
        })
        .collect()
}

/// Samples 3 to 6 colors around a uniform base hue. Jittered candidates are
/// tried first; if none is spaced widely enough, lightness is spread evenly
/// over a wider band, and finally the palette shrinks to three colors.
pub fn sample_palette(seed: Seed) -> Palette {
    let mut rng = substream(seed, "palette", 0);
    let scheme = Scheme::ALL[rng.gen_range(0..4)];
    let n = rng.gen_range(3..=6usize);
    let base = rng.gen_range(0.0..360.0);
    for _ in 0..ATTEMPTS {
        let colors = attempt(&mut rng, scheme, base, n, (0.25, 0.8), true);
        if well_spaced(&colors) {
            return Palette { colors, scheme };
        }
    }
    for size in (3..=n).rev() {
        let colors = attempt(&mut rng, scheme, base, size, (0.2, 0.85), false);
        if well_spaced(&colors) {
            return Palette { colors, scheme };
        }
    }
    unreachable!("three colors spread over the widened lightness band are always distinct enough")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_e_reference_points() {
        assert!(delta_e(Color::BLACK, Color::WHITE) > 99.9 && delta_e(Color::BLACK, Color::WHITE) < 100.1);
        assert_eq!(delta_e(Color::rgb(10, 20, 30), Color::rgb(10, 20, 30)), 0.0);
    }

    #[test]
    fn palettes_are_spaced_and_sized() {
        for seed in 0..300 {
            let p = sample_palette(seed);
            assert!((3..=6).contains(&p.colors.len()));
            assert!(well_spaced(&p.colors), "seed {seed}");
            if p.scheme == Scheme::Monochrome {
                let h0 = hue_of(p.colors[0]);
                for c in &p.colors {
                    let d = (hue_of(*c) - h0).rem_euclid(360.0);
                    assert!(d.min(360.0 - d) <= 1.0, "seed {seed}: {c}");
                }
            }
        }
        assert_eq!(sample_palette(11), sample_palette(11));
    }

    #[test]
    fn inks_exclude_the_lightest() {
        let p = sample_palette(3);
        let inks = p.inks();
        assert_eq!(inks.len(), p.colors.len() - 1);
        assert_eq!(inks[0], p.darkest());
        assert!(!inks.contains(&p.lightest()));
    }
}
