//! Style-conditioned edit sampling.
//!
//! | style | template           | descriptor                                            |
//! |-------|--------------------|-------------------------------------------------------|
//! | sfp   | replace-fragmenter | replace `fragmenter` #0 with a fresh SFP fragmenter   |
//! | sfp   | replace-fill       | replace `fill` #0 `:color` with a cycle/ramp over ids |
//! | sfp   | insert-outline     | insert an outline into `layer` #0                     |
//! | sfp   | remove-outline     | remove `outline` #0                                   |
//! | sfp   | change-merge-key   | replace `merge` #0 `:key`                             |
//! | sfp   | insert-inset       | insert an inset into `layer` #0                       |
//! | mtp   | replace-motif      | replace `place-motif` #0 `:motif`                     |
//! | mtp   | replace-scale      | replace `place-motif` #0 `:scale`                     |
//! | mtp   | replace-rotate     | replace `place-motif` #0 `:rotate`                    |
//! | mtp   | replace-fill       | replace `place-motif` #0 `:fill`                      |
//! | mtp   | insert-layer       | append a motif layer to the `pattern`                 |
//! | mtp   | remove-accent      | remove `place-motif` #1                               |
//!
//! Weights live in [`EditWeights`](crate::samplers::EditWeights). Payload
//! colors come from one palette drawn for the edit, so both pairs of a
//! quartet receive the same new value.

use crate::dsl::{NodeKind, SlotKind, StyleTag, Value};
use crate::motifs::MotifRegistry;
use crate::rng::{substream, Seed};
use crate::samplers::{pick_weighted, sample_palette, SamplerConfig, Sampler};

use super::descriptor::{EditDescriptor, NodeSelector, Payload, Target};

pub const SFP_TEMPLATES: [&str; 6] =
    ["replace-fragmenter", "replace-fill", "insert-outline", "remove-outline", "change-merge-key", "insert-inset"];
pub const MTP_TEMPLATES: [&str; 6] =
    ["replace-motif", "replace-scale", "replace-rotate", "replace-fill", "insert-layer", "remove-accent"];

impl Sampler<'_> {
    /// Draws `(template name, descriptor)`. Custom style falls back to the
    /// SFP table.
    pub fn sample_edit_named(&self, seed: Seed, style: StyleTag) -> (&'static str, EditDescriptor) {
        let mut rng = substream(seed, "edit", 0);
        let palette = sample_palette(seed);
        let inks = palette.inks();
        match style {
            StyleTag::Mtp => {
                let w = &self.config.edits.mtp;
                let i = pick_weighted(
                    &mut rng,
                    &[w.replace_motif, w.replace_scale, w.replace_rotate, w.replace_fill, w.insert_layer, w.remove_accent],
                );
                let pm = Target::Node(NodeKind::PlaceMotif);
                let e = match i {
                    0 => EditDescriptor::replace(
                        NodeSelector::param(pm, 0, "motif"),
                        Payload::Value(Value::ident(self.motif(&mut rng))),
                    ),
                    1 => EditDescriptor::replace(NodeSelector::param(pm, 0, "scale"), Payload::Value(self.mtp_scale(&mut rng))),
                    2 => EditDescriptor::replace(NodeSelector::param(pm, 0, "rotate"), Payload::Value(self.mtp_rotate(&mut rng))),
                    3 => EditDescriptor::replace(NodeSelector::param(pm, 0, "fill"), Payload::Value(self.mtp_fill(&mut rng, &inks))),
                    4 => EditDescriptor::insert(NodeSelector::new(Target::Pattern, 0), Payload::Layer(self.motif_layer(&mut rng, &inks))),
                    _ => EditDescriptor::remove(NodeSelector::new(pm, 1)),
                };
                (MTP_TEMPLATES[i], e)
            }
            StyleTag::Sfp | StyleTag::Custom => {
                let w = &self.config.edits.sfp;
                let i = pick_weighted(
                    &mut rng,
                    &[w.replace_fragmenter, w.replace_fill, w.insert_outline, w.remove_outline, w.change_merge_key, w.insert_inset],
                );
                let e = match i {
                    0 => EditDescriptor::replace(
                        NodeSelector::new(Target::Slot(SlotKind::Fragmenter), 0),
                        Payload::Node(self.sfp_fragmenter(&mut rng)),
                    ),
                    1 => EditDescriptor::replace(
                        NodeSelector::param(Target::Node(NodeKind::Fill), 0, "color"),
                        Payload::Value(self.sfp_fill(&mut rng, &inks)),
                    ),
                    2 => EditDescriptor::insert(
                        NodeSelector::new(Target::Layer, 0),
                        Payload::Node(self.outline(&mut rng, palette.darkest())),
                    ),
                    3 => EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Outline), 0)),
                    4 => EditDescriptor::replace(
                        NodeSelector::param(Target::Node(NodeKind::Merge), 0, "key"),
                        Payload::Value(self.merge_key(&mut rng)),
                    ),
                    _ => EditDescriptor::insert(NodeSelector::new(Target::Layer, 0), Payload::Node(self.inset(&mut rng))),
                };
                (SFP_TEMPLATES[i], e)
            }
        }
    }

    pub fn sample_edit(&self, seed: Seed, style: StyleTag) -> EditDescriptor {
        self.sample_edit_named(seed, style).1
    }
}

/// Edit sampled with the default table and builtin motifs.
pub fn sample_edit(seed: Seed, style: StyleTag) -> EditDescriptor {
    let (config, registry) = (SamplerConfig::default(), MotifRegistry::builtin());
    Sampler { config: &config, registry: &registry }.sample_edit(seed, style)
}
