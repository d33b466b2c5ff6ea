//! Selector resolution, compatibility and edit application.

use thiserror::Error;

use crate::dsl::schema::{MAX_FRAGMENT_OPS, MAX_LAYERS, MAX_MERGES, MAX_STYLES};
use crate::dsl::{validate, Diagnostic, Node, Program, Severity, SlotKind};

use super::descriptor::{EditDescriptor, EditKind, NodeSelector, Payload, Target};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("incompatible edit: {0}")]
    Incompatible(String),
    #[error("edited program is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidResult(Vec<Diagnostic>),
}

/// A resolved selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Site {
    Node { layer: usize, slot: SlotKind, index: usize },
    Layer(usize),
    Pattern,
}

fn slot_max(slot: SlotKind) -> usize {
    match slot {
        SlotKind::Fragmenter => 1,
        SlotKind::Merge => MAX_MERGES,
        SlotKind::FragmentOp => MAX_FRAGMENT_OPS,
        SlotKind::Style => MAX_STYLES,
    }
}

fn resolve(p: &Program, s: &NodeSelector) -> Result<Site, String> {
    let matches = |n: &Node| match s.target {
        Target::Node(k) => n.kind == k,
        Target::Slot(slot) => n.kind.slot() == slot,
        _ => false,
    };
    match s.target {
        Target::Pattern if s.ordinal == 0 => Ok(Site::Pattern),
        Target::Pattern => Err("pattern ordinal must be 0".into()),
        Target::Layer if s.ordinal < p.layers.len() => Ok(Site::Layer(s.ordinal)),
        Target::Layer => Err(format!("no layer #{} in a {}-layer program", s.ordinal, p.layers.len())),
        Target::Node(_) | Target::Slot(_) => {
            let mut seen = 0;
            for (layer, l) in p.layers.iter().enumerate() {
                for slot in [SlotKind::Fragmenter, SlotKind::Merge, SlotKind::FragmentOp, SlotKind::Style] {
                    for (index, n) in l.slot(slot).iter().enumerate() {
                        if matches(n) {
                            if seen == s.ordinal {
                                return Ok(Site::Node { layer, slot, index });
                            }
                            seen += 1;
                        }
                    }
                }
            }
            Err(format!("no {} #{} (found {seen})", s.target.name(), s.ordinal))
        }
    }
}

/// Structural check: the selector resolves and the payload fits where it
/// would go. The edited program may still fail validation.
fn check(p: &Program, e: &EditDescriptor) -> Result<Site, String> {
    let site = resolve(p, &e.selector)?;
    let param = e.selector.param.as_deref();
    match (e.kind, site, &e.payload, param) {
        (EditKind::Replace, Site::Node { layer, slot, index }, Some(Payload::Value(_)), Some(name)) => {
            let node = &p.layers[layer].slot(slot)[index];
            match node.kind.param_spec(name) {
                Some(_) => Ok(site),
                None => Err(format!("{} has no parameter `{name}`", node.kind)),
            }
        }
        (_, _, _, Some(_)) => Err("parameter selectors only support replace with a value payload".into()),
        (EditKind::Insert, Site::Layer(layer), Some(Payload::Node(n)), None) => {
            let slot = n.kind.slot();
            if slot == SlotKind::Fragmenter {
                Err("a layer has exactly one fragmenter".into())
            } else if p.layers[layer].slot(slot).len() >= slot_max(slot) {
                Err(format!("layer #{layer} already holds the maximum of {} {} nodes", slot_max(slot), slot.as_str()))
            } else {
                Ok(site)
            }
        }
        (EditKind::Insert, Site::Pattern, Some(Payload::Layer(_)), None) if p.layers.len() < MAX_LAYERS => Ok(site),
        (EditKind::Insert, Site::Pattern, Some(Payload::Layer(_)), None) => Err(format!("already {MAX_LAYERS} layers")),
        (EditKind::Insert, ..) => Err("insert takes a node into a layer or a layer into the pattern".into()),
        (EditKind::Remove, Site::Node { layer, slot, .. }, None, None) => match slot {
            SlotKind::Fragmenter => Err("the fragmenter cannot be removed".into()),
            SlotKind::Style if p.layers[layer].styles.len() == 1 => Err("a layer keeps at least one style".into()),
            _ => Ok(site),
        },
        (EditKind::Remove, Site::Layer(_), None, None) if p.layers.len() > 1 => Ok(site),
        (EditKind::Remove, Site::Layer(_), None, None) => Err("the only layer cannot be removed".into()),
        (EditKind::Remove, ..) => Err("remove selects a node or a layer and takes no payload".into()),
        (EditKind::Replace, Site::Node { slot, .. }, Some(Payload::Node(n)), None) if n.kind.slot() == slot => Ok(site),
        (EditKind::Replace, Site::Node { slot, .. }, Some(Payload::Node(n)), None) => {
            Err(format!("{} cannot stand in the {} slot", n.kind, slot.as_str()))
        }
        (EditKind::Replace, Site::Layer(_), Some(Payload::Layer(_)), None) => Ok(site),
        (EditKind::Replace, ..) => Err("replace payload does not match the selected target".into()),
    }
}

pub fn is_compatible(p: &Program, e: &EditDescriptor) -> bool {
    check(p, e).is_ok()
}

pub fn apply_edit(p: &Program, e: &EditDescriptor) -> Result<Program, EditError> {
    let site = check(p, e).map_err(EditError::Incompatible)?;
    let mut q = p.clone();
    match (e.kind, site, &e.payload) {
        (EditKind::Replace, Site::Node { layer, slot, index }, Some(Payload::Value(v))) => {
            let name = e.selector.param.as_deref().expect("checked");
            node_mut(&mut q, layer, slot, index).set(name, v.clone());
        }
        (EditKind::Replace, Site::Node { layer, slot, index }, Some(Payload::Node(n))) => {
            *node_mut(&mut q, layer, slot, index) = n.clone();
        }
        (EditKind::Replace, Site::Layer(i), Some(Payload::Layer(l))) => q.layers[i] = l.clone(),
        (EditKind::Insert, Site::Layer(i), Some(Payload::Node(n))) => slot_mut(&mut q, i, n.kind.slot()).push(n.clone()),
        (EditKind::Insert, Site::Pattern, Some(Payload::Layer(l))) => q.layers.push(l.clone()),
        (EditKind::Remove, Site::Node { layer, slot, index }, None) => {
            slot_mut(&mut q, layer, slot).remove(index);
        }
        (EditKind::Remove, Site::Layer(i), None) => {
            q.layers.remove(i);
        }
        _ => unreachable!("check() admits only the shapes above"),
    }
    let errors: Vec<Diagnostic> = validate(&q).into_iter().filter(|d| d.severity == Severity::Error).collect();
    if errors.is_empty() {
        Ok(q)
    } else {
        Err(EditError::InvalidResult(errors))
    }
}

fn node_mut(p: &mut Program, layer: usize, slot: SlotKind, index: usize) -> &mut Node {
    match slot {
        SlotKind::Fragmenter => &mut p.layers[layer].fragmenter,
        _ => &mut slot_mut(p, layer, slot)[index],
    }
}

fn slot_mut(p: &mut Program, layer: usize, slot: SlotKind) -> &mut Vec<Node> {
    let l = &mut p.layers[layer];
    match slot {
        SlotKind::Fragmenter => unreachable!("the fragmenter is edited in place"),
        SlotKind::Merge => &mut l.merges,
        SlotKind::FragmentOp => &mut l.fragment_ops,
        SlotKind::Style => &mut l.styles,
    }
}

/// The removal that undoes `e`, an insert, when applied to `apply_edit(p, e)`.
pub fn inverse_of_insert(p: &Program, e: &EditDescriptor) -> Option<EditDescriptor> {
    if e.kind != EditKind::Insert {
        return None;
    }
    match (check(p, e).ok()?, e.payload.as_ref()?) {
        (Site::Layer(i), Payload::Node(n)) => {
            let before = p.layers[..=i].iter().flat_map(|l| l.nodes()).filter(|m| m.kind == n.kind).count();
            Some(EditDescriptor::remove(NodeSelector::new(Target::Node(n.kind), before)))
        }
        (Site::Pattern, Payload::Layer(_)) => Some(EditDescriptor::remove(NodeSelector::new(Target::Layer, p.layers.len()))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{ast_equals, NodeKind, Value};
    use crate::parser::parse;

    const BASE: &str = "(pattern (canvas :width 64 :height 64) (layer (grid :rows 2 :cols 2) (fill :color \"#336699\")))";

    fn outline() -> Node {
        Node::new(NodeKind::Outline).with("width", Value::num(2.0))
    }

    #[test]
    fn replace_fragmenter() {
        let p = parse(BASE).unwrap();
        let grid = Node::new(NodeKind::Grid).with("rows", Value::int(3)).with("cols", Value::int(3));
        let e = EditDescriptor::replace(NodeSelector::new(Target::Slot(SlotKind::Fragmenter), 0), Payload::Node(grid.clone()));
        assert!(is_compatible(&p, &e));
        let q = apply_edit(&p, &e).unwrap();
        let mut expected = p.clone();
        expected.layers[0].fragmenter = grid;
        assert!(ast_equals(&q, &expected));
    }

    #[test]
    fn insert_then_remove_restores() {
        let p = parse(BASE).unwrap();
        let e = EditDescriptor::insert(NodeSelector::new(Target::Layer, 0), Payload::Node(outline()));
        let q = apply_edit(&p, &e).unwrap();
        assert_eq!(q.layers[0].styles.len(), 2);
        let undo = inverse_of_insert(&p, &e).unwrap();
        assert_eq!(undo, EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Outline), 0)));
        assert!(ast_equals(&apply_edit(&q, &undo).unwrap(), &p));
    }

    #[test]
    fn incompatible_cases() {
        let p = parse(BASE).unwrap();
        let remove_outline = EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Outline), 0));
        assert!(!is_compatible(&p, &remove_outline));
        assert!(matches!(apply_edit(&p, &remove_outline), Err(EditError::Incompatible(_))));

        let mut full = p.clone();
        full.layers[0].styles.extend([outline(), outline(), outline()]);
        let insert = EditDescriptor::insert(NodeSelector::new(Target::Layer, 0), Payload::Node(outline()));
        assert!(!is_compatible(&full, &insert));
        full.layers[0].styles.pop();
        assert!(is_compatible(&full, &insert));

        let wrong_slot = EditDescriptor::replace(NodeSelector::new(Target::Slot(SlotKind::Fragmenter), 0), Payload::Node(outline()));
        assert!(!is_compatible(&p, &wrong_slot));
        let only_style = EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Fill), 0));
        assert!(!is_compatible(&p, &only_style));
        let bad_param = EditDescriptor::replace(NodeSelector::param(Target::Node(NodeKind::Fill), 0, "width"), Payload::Value(Value::num(1.0)));
        assert!(!is_compatible(&p, &bad_param));
    }

    #[test]
    fn invalid_results_are_reported() {
        let p = parse(BASE).unwrap();
        let e = EditDescriptor::replace(NodeSelector::param(Target::Node(NodeKind::Grid), 0, "rows"), Payload::Value(Value::int(0)));
        assert!(is_compatible(&p, &e));
        assert!(matches!(apply_edit(&p, &e), Err(EditError::InvalidResult(_))));
    }

    #[test]
    fn ordinals_count_across_layers() {
        let two = "(pattern (canvas :width 64 :height 64) (layer (grid) (fill) (outline)) (layer (stripes) (outline :width 3)))";
        let p = parse(two).unwrap();
        let e = EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Outline), 1));
        let q = apply_edit(&p, &e);
        // Removing layer 1's only style is rejected.
        assert!(matches!(q, Err(EditError::Incompatible(_))));
        let e = EditDescriptor::insert(NodeSelector::new(Target::Layer, 1), Payload::Node(outline()));
        let q = apply_edit(&p, &e).unwrap();
        let undo = inverse_of_insert(&p, &e).unwrap();
        assert_eq!(undo.selector.ordinal, 2);
        assert!(ast_equals(&apply_edit(&q, &undo).unwrap(), &p));
    }
}
