//! Analogical quartets: one edit applied to a simple and a complex program.

use thiserror::Error;

use crate::dsl::{ast_equals, Program, StyleTag};
use crate::render::{render, PatternImage, RenderOptions};
use crate::rng::{derive_seed, Seed};
use crate::samplers::{nominal_fragment_count, Sampler};

use super::apply::apply_edit;
use super::descriptor::EditDescriptor;

/// Upper bound on the fragment count of the simple program.
pub const MAX_SIMPLE_FRAGMENTS: usize = 16;
/// Program draws per edit before the edit is resampled.
pub const PROGRAM_ATTEMPTS: u64 = 64;
/// Edit draws before giving up.
pub const EDIT_RETRIES: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuartetError {
    #[error("no compatible quartet for seed {seed} ({style}) after {EDIT_RETRIES} edit draws")]
    SamplingExhausted { seed: Seed, style: StyleTag },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quartet {
    pub id: String,
    pub seed: Seed,
    pub style: StyleTag,
    /// Name of the edit template the descriptor was drawn from.
    pub template: &'static str,
    pub edit: EditDescriptor,
    pub a: Program,
    pub a_prime: Program,
    pub b: Program,
    pub b_prime: Program,
    /// Images of `a`, `a_prime`, `b`, `b_prime` in that order.
    pub images: [PatternImage; 4],
}

pub struct QuartetGenerator<'a> {
    pub sampler: Sampler<'a>,
    pub render: RenderOptions,
}

struct Pair {
    before: Program,
    after: Program,
    before_image: PatternImage,
    after_image: PatternImage,
}

impl QuartetGenerator<'_> {
    pub fn sample_program(&self, seed: Seed, style: StyleTag) -> Program {
        match style {
            StyleTag::Mtp => self.sampler.sample_mtp(seed),
            StyleTag::Sfp | StyleTag::Custom => self.sampler.sample_sfp(seed),
        }
    }

    /// Applies `e` and renders both sides; `None` unless the edit is legal,
    /// changes the program and changes the SVG.
    fn pair(&self, p: Program, e: &EditDescriptor, render_seed: Seed) -> Option<Pair> {
        let after = apply_edit(&p, e).ok()?;
        if ast_equals(&p, &after) {
            return None;
        }
        let registry = self.sampler.registry;
        let before_image = render(&p, render_seed, &self.render, registry).ok()?;
        let after_image = render(&after, render_seed, &self.render, registry).ok()?;
        if before_image.svg == after_image.svg {
            return None;
        }
        Some(Pair { before: p, after, before_image, after_image })
    }

    /// Samples an edit, then a simple program (one layer, at most
    /// [`MAX_SIMPLE_FRAGMENTS`] fragments) and a complex one (at least as
    /// many fragments) that both take the edit visibly.
    pub fn make_quartet(&self, seed: Seed, style: StyleTag) -> Result<Quartet, QuartetError> {
        let render_seed = derive_seed(seed, "render", 0);
        for retry in 0..EDIT_RETRIES {
            let (template, edit) = self.sampler.sample_edit_named(derive_seed(seed, "edit", retry), style);
            let draw = |tag: &str, k: u64| self.sample_program(derive_seed(seed, tag, retry * PROGRAM_ATTEMPTS + k), style);
            let a = (0..PROGRAM_ATTEMPTS).find_map(|k| {
                let p = draw("a", k);
                (p.layers.len() == 1 && nominal_fragment_count(&p) <= MAX_SIMPLE_FRAGMENTS)
                    .then(|| self.pair(p, &edit, render_seed))
                    .flatten()
            });
            let Some(a) = a else { continue };
            let floor = nominal_fragment_count(&a.before);
            let b = (0..PROGRAM_ATTEMPTS).find_map(|k| {
                let p = draw("b", k);
                (nominal_fragment_count(&p) >= floor).then(|| self.pair(p, &edit, render_seed)).flatten()
            });
            let Some(b) = b else { continue };
            return Ok(Quartet {
                id: format!("s{seed:016x}"),
                seed,
                style,
                template,
                edit,
                a: a.before,
                a_prime: a.after,
                b: b.before,
                b_prime: b.after,
                images: [a.before_image, a.after_image, b.before_image, b.after_image],
            });
        }
        Err(QuartetError::SamplingExhausted { seed, style })
    }
}
