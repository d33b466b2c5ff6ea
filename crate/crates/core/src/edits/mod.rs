//! Program edits, analogical quartets and the dataset writer.

mod apply;
mod dataset;
mod descriptor;
mod quartet;
mod sample;

pub use apply::{apply_edit, inverse_of_insert, is_compatible, EditError};
pub use dataset::{
    audit_dataset, quartet_id, quartet_seed, read_manifest, split_of, write_dataset, write_dataset_with_progress, AuditReport, DatasetError,
    DatasetSpec, ManifestRecord, MANIFEST, MEMBERS,
};
pub use descriptor::{edit_from_sexpr, parse_edit, print_edit, EditDescriptor, EditKind, NodeSelector, Payload, Target};
pub use quartet::{Quartet, QuartetError, QuartetGenerator, EDIT_RETRIES, MAX_SIMPLE_FRAGMENTS, PROGRAM_ATTEMPTS};
pub use sample::{sample_edit, MTP_TEMPLATES, SFP_TEMPLATES};
