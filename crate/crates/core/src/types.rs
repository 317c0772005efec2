//! Shared domain identifiers used across the pipeline.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Identifier of an edge node (and of its digital replica).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

/// Events that are not tied to one edge node (model swaps, retraining) are
/// journaled under this id.
pub const SYSTEM_NODE: &str = "system";

/// One attack category as declared by a dataset profile.
///
/// The set of valid classes is closed per profile; instances are only
/// produced by parsing against a schema or by the schema itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AttackClass(String);

impl AttackClass {
    pub fn new(name: impl Into<String>) -> Self {
        AttackClass(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AttackClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ground-truth or estimated label carried by a flow record.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Normal,
    Attack(AttackClass),
}

impl Label {
    pub fn is_attack(&self) -> bool {
        matches!(self, Label::Attack(_))
    }

    pub fn attack_class(&self) -> Option<&AttackClass> {
        match self {
            Label::Normal => None,
            Label::Attack(c) => Some(c),
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.is_attack() {
            Verdict::Attack
        } else {
            Verdict::Normal
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Normal => f.write_str("Normal"),
            Label::Attack(c) => f.write_str(c.name()),
        }
    }
}

/// Binary detection outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Normal,
    Attack,
}

impl Verdict {
    pub fn is_attack(&self) -> bool {
        matches!(self, Verdict::Attack)
    }
}

/// Compact digest of a feature schema; records and models carry it so that
/// a model never scores a record laid out for a different schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchemaFingerprint(pub u64);

impl fmt::Display for SchemaFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}
