//! Digital replicas of edge nodes.
//!
//! Every edge node has a twin holding its status, a telemetry summary and
//! a version counter that increases with each applied update. All changes
//! are recorded in an append-only journal (optionally persisted as
//! JSON-lines, one object per line, flushed per event) so that any run can
//! be audited or replayed after the fact.

use crate::error::{Error, Result};
use crate::flow::FlowRecord;
use crate::reliability::ReliabilityTrace;
use crate::types::{AttackClass, NodeId};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, LineWriter, Write};
use std::path::Path;
use std::sync::{Mutex, RwLock};

pub const DEFAULT_TELEMETRY_WINDOW: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwinStatus {
    Active,
    PendingIsolation,
    Isolated,
}

impl TwinStatus {
    /// Legal moves: Active -> PendingIsolation -> {Active, Isolated},
    /// Active -> Isolated. Isolated is terminal.
    pub fn can_transition_to(self, next: TwinStatus) -> bool {
        use TwinStatus::*;
        matches!(
            (self, next),
            (Active, PendingIsolation) | (Active, Isolated) | (PendingIsolation, Active) | (PendingIsolation, Isolated)
        )
    }
}

/// Rolling view of what a node has been sending, bounded so twins stay
/// small no matter how long a run is.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TelemetrySummary {
    pub record_count: u64,
    pub last_timestamp: u64,
    /// Alerts per attack class over the most recent `window` alerts.
    pub alert_counts: BTreeMap<String, u64>,
    window: VecDeque<String>,
    capacity: usize,
}

impl TelemetrySummary {
    fn new(capacity: usize) -> Self {
        TelemetrySummary {
            record_count: 0,
            last_timestamp: 0,
            alert_counts: BTreeMap::new(),
            window: VecDeque::new(),
            capacity,
        }
    }

    fn record(&mut self, timestamp: u64) {
        self.record_count += 1;
        self.last_timestamp = timestamp;
    }

    fn alert(&mut self, class: &AttackClass) {
        if self.window.len() == self.capacity {
            if let Some(old) = self.window.pop_front() {
                if let Some(n) = self.alert_counts.get_mut(&old) {
                    *n -= 1;
                    if *n == 0 {
                        self.alert_counts.remove(&old);
                    }
                }
            }
        }
        self.window.push_back(class.name().to_string());
        *self
            .alert_counts
            .entry(class.name().to_string())
            .or_insert(0) += 1;
    }
}

/// Versioned replica of one edge node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwinNode {
    pub node_id: NodeId,
    pub status: TwinStatus,
    pub version: u64,
    pub last_telemetry: TelemetrySummary,
    pub suspended_ips: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwinEventKind {
    Telemetry,
    AlertRaised,
    MitigationApplied,
    ModelSwapped,
    RetrainTriggered,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwinEvent {
    pub seq: u64,
    pub node_id: NodeId,
    pub kind: TwinEventKind,
    pub timestamp: u64,
    pub payload: Value,
}

/// One line of the persisted journal.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum JournalLine {
    Event(TwinEvent),
    Reliability(ReliabilityTrace),
}

struct JournalInner {
    events: Vec<TwinEvent>,
    next_seq: u64,
    writer: Option<LineWriter<File>>,
}

impl JournalInner {
    fn write_line(&mut self, line: &JournalLine) {
        if let Some(w) = self.writer.as_mut() {
            // Journal persistence is best effort; an unwritable disk must
            // not take down the detection path.
            let _ = serde_json::to_string(line)
                .map(|s| writeln!(w, "{s}").and_then(|_| w.flush()));
        }
    }

    fn append(&mut self, node_id: NodeId, kind: TwinEventKind, timestamp: u64, payload: Value) {
        let event = TwinEvent {
            seq: self.next_seq,
            node_id,
            kind,
            timestamp,
            payload,
        };
        self.next_seq += 1;
        self.write_line(&JournalLine::Event(event.clone()));
        self.events.push(event);
    }
}

/// Read a persisted journal back into memory.
pub fn read_journal(path: impl AsRef<Path>) -> Result<Vec<JournalLine>> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        lines.push(serde_json::from_str(&line)?);
    }
    Ok(lines)
}

/// In-process twin layer: node replicas plus the shared event journal.
///
/// One writer per node is assumed (the pipeline routes all of a node's
/// traffic through one place); readers may snapshot from any thread, and
/// updates to distinct nodes may run concurrently. The journal assigns a
/// global dense sequence at append time.
pub struct TwinStore {
    nodes: RwLock<BTreeMap<NodeId, TwinNode>>,
    journal: Mutex<JournalInner>,
    telemetry_window: usize,
}

impl TwinStore {
    pub fn new() -> Self {
        Self::with_window(DEFAULT_TELEMETRY_WINDOW)
    }

    pub fn with_window(telemetry_window: usize) -> Self {
        TwinStore {
            nodes: RwLock::new(BTreeMap::new()),
            journal: Mutex::new(JournalInner {
                events: Vec::new(),
                next_seq: 1,
                writer: None,
            }),
            telemetry_window,
        }
    }

    /// Persist every journal line to `path` as it is appended, replacing
    /// any existing file.
    pub fn journal_to(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = File::create(path)?;
        self.journal.lock().unwrap().writer = Some(LineWriter::new(file));
        Ok(())
    }

    /// Reopen an existing journal for appending; the sequence continues
    /// from the last persisted event.
    pub fn journal_append(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut next_seq = 1;
        if path.as_ref().is_file() {
            for line in read_journal(&path)? {
                if let JournalLine::Event(e) = line {
                    next_seq = next_seq.max(e.seq + 1);
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut journal = self.journal.lock().unwrap();
        journal.writer = Some(LineWriter::new(file));
        journal.next_seq = next_seq;
        Ok(())
    }

    pub fn register(&self, node_id: NodeId) {
        let mut nodes = self.nodes.write().unwrap();
        nodes.entry(node_id.clone()).or_insert_with(|| TwinNode {
            node_id,
            status: TwinStatus::Active,
            version: 1,
            last_telemetry: TelemetrySummary::new(self.telemetry_window),
            suspended_ips: BTreeSet::new(),
        });
    }

    pub fn node(&self, node_id: &NodeId) -> Result<TwinNode> {
        self.nodes
            .read()
            .unwrap()
            .get(node_id)
            .cloned()
            .ok_or_else(|| Error::UnknownNode(node_id.clone()))
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes.read().unwrap().keys().cloned().collect()
    }

    /// Mirror one observed record into the node's twin. Updates against an
    /// isolated node are journaled with a `flagged` marker instead of being
    /// dropped.
    pub fn sync_update(&self, node_id: &NodeId, record: &FlowRecord) -> Result<TwinNode> {
        let snapshot = {
            let mut nodes = self.nodes.write().unwrap();
            let node = nodes
                .get_mut(node_id)
                .ok_or_else(|| Error::UnknownNode(node_id.clone()))?;
            node.last_telemetry.record(record.timestamp);
            node.version += 1;
            node.clone()
        };
        let flagged = snapshot.status == TwinStatus::Isolated;
        self.journal.lock().unwrap().append(
            node_id.clone(),
            TwinEventKind::Telemetry,
            record.timestamp,
            json!({ "src_ip": record.src_ip, "flagged": flagged }),
        );
        Ok(snapshot)
    }

    pub fn apply_status(&self, node_id: &NodeId, new_status: TwinStatus) -> Result<TwinNode> {
        self.apply_status_with(node_id, new_status, json!({}))
    }

    /// Status change with extra journal payload fields (risk tier, alert id,
    /// approval verdict, ...).
    pub fn apply_status_with(
        &self,
        node_id: &NodeId,
        new_status: TwinStatus,
        extra: Value,
    ) -> Result<TwinNode> {
        let (snapshot, from) = {
            let mut nodes = self.nodes.write().unwrap();
            let node = nodes
                .get_mut(node_id)
                .ok_or_else(|| Error::UnknownNode(node_id.clone()))?;
            let from = node.status;
            if !from.can_transition_to(new_status) {
                return Err(Error::IllegalTransition {
                    node: node_id.clone(),
                    from,
                    to: new_status,
                });
            }
            node.status = new_status;
            node.version += 1;
            (node.clone(), from)
        };
        let mut payload = json!({
            "action": "status",
            "from": from,
            "to": new_status,
        });
        if let (Some(obj), Some(extra)) = (payload.as_object_mut(), extra.as_object()) {
            for (k, v) in extra {
                obj.insert(k.clone(), v.clone());
            }
        }
        self.journal.lock().unwrap().append(
            node_id.clone(),
            TwinEventKind::MitigationApplied,
            snapshot.last_telemetry.last_timestamp,
            payload,
        );
        Ok(snapshot)
    }

    /// Restore a status without legality checks (state reload only).
    pub fn force_status(&self, node_id: &NodeId, status: TwinStatus) -> Result<()> {
        let mut nodes = self.nodes.write().unwrap();
        let node = nodes
            .get_mut(node_id)
            .ok_or_else(|| Error::UnknownNode(node_id.clone()))?;
        node.status = status;
        Ok(())
    }

    pub fn raise_alert(
        &self,
        node_id: &NodeId,
        class: &AttackClass,
        alert_id: u64,
        confidence: f64,
        timestamp: u64,
    ) -> Result<TwinNode> {
        let snapshot = {
            let mut nodes = self.nodes.write().unwrap();
            let node = nodes
                .get_mut(node_id)
                .ok_or_else(|| Error::UnknownNode(node_id.clone()))?;
            node.last_telemetry.alert(class);
            node.version += 1;
            node.clone()
        };
        self.journal.lock().unwrap().append(
            node_id.clone(),
            TwinEventKind::AlertRaised,
            timestamp,
            json!({ "alert": alert_id, "class": class.name(), "confidence": confidence }),
        );
        Ok(snapshot)
    }

    /// Track an ip on the node's suspended set; true when newly added.
    pub fn suspend_ip(&self, node_id: &NodeId, ip: &str) -> Result<bool> {
        let mut nodes = self.nodes.write().unwrap();
        let node = nodes
            .get_mut(node_id)
            .ok_or_else(|| Error::UnknownNode(node_id.clone()))?;
        let added = node.suspended_ips.insert(ip.to_string());
        if added {
            node.version += 1;
        }
        Ok(added)
    }

    /// Journal a mitigation effect that does not change twin status.
    pub fn journal_mitigation(&self, node_id: &NodeId, timestamp: u64, payload: Value) {
        self.journal.lock().unwrap().append(
            node_id.clone(),
            TwinEventKind::MitigationApplied,
            timestamp,
            payload,
        );
    }

    pub fn record_swap(&self, timestamp: u64, payload: Value) {
        self.journal.lock().unwrap().append(
            NodeId::new(crate::types::SYSTEM_NODE),
            TwinEventKind::ModelSwapped,
            timestamp,
            payload,
        );
    }

    pub fn record_retrain(&self, timestamp: u64, payload: Value) {
        self.journal.lock().unwrap().append(
            NodeId::new(crate::types::SYSTEM_NODE),
            TwinEventKind::RetrainTriggered,
            timestamp,
            payload,
        );
    }

    pub fn append_reliability(&self, trace: &ReliabilityTrace) {
        let mut journal = self.journal.lock().unwrap();
        journal.write_line(&JournalLine::Reliability(trace.clone()));
    }

    /// Events in sequence order, optionally restricted by kind and/or node.
    pub fn event_log(
        &self,
        kind: Option<TwinEventKind>,
        node: Option<&NodeId>,
    ) -> Vec<TwinEvent> {
        self.journal
            .lock()
            .unwrap()
            .events
            .iter()
            .filter(|e| kind.is_none_or(|k| e.kind == k))
            .filter(|e| node.is_none_or(|n| &e.node_id == n))
            .cloned()
            .collect()
    }

    pub fn event_count(&self) -> usize {
        self.journal.lock().unwrap().events.len()
    }
}

impl Default for TwinStore {
    fn default() -> Self {
        Self::new()
    }
}
