//! Program AST, node addressing, and semantic validation.

mod ast;
mod path;
pub mod schema;
mod validate;

pub use ast::{ast_equals, CanvasSpec, Layer, Node, NodeKind, Program, SlotKind, StyleTag, Value, PROGRAM_VERSION};
pub use path::{resolve_path, substitute, NodePath, PathError, PathRoot, Subtree, SubtreeRef};
pub use validate::{validate, Diagnostic, Severity};
