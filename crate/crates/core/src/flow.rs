//! Flow-record schema and dataset ingestion.
//!
//! A dataset profile declares the columns a flow record carries, how each
//! one is normalized (min-max bounds for numerics, a fixed dictionary for
//! categoricals) and which attack classes the label column may hold.
//! Profiles are plain TOML; three ship with the crate (`synthetic-v1`,
//! `edge-iiot`, `ton-iot`) and arbitrary profile files can be loaded by
//! path. Keeping the dictionaries and scaling bounds in the profile, not
//! learned from data, makes repeated replays of the same stream produce
//! identical vectors.

use crate::error::{Error, Result};
use crate::types::{AttackClass, Label, NodeId, SchemaFingerprint, Verdict};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

const BUILTIN_PROFILES: &[(&str, &str)] = &[
    ("synthetic-v1", include_str!("../profiles/synthetic-v1.toml")),
    ("edge-iiot", include_str!("../profiles/edge-iiot.toml")),
    ("ton-iot", include_str!("../profiles/ton-iot.toml")),
];

/// Spelling of the normal (non-attack) label value.
pub const NORMAL_LABEL: &str = "Normal";

/// How one feature column is normalized.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureKind {
    /// Min-max scaled to [0,1] with bounds declared by the profile.
    Numeric { min: f64, max: f64 },
    /// Coded through a fixed dictionary; values not in the dictionary get
    /// the reserved `other_code` (one past the largest declared code).
    Categorical {
        values: BTreeMap<String, u32>,
        other_code: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDef {
    pub name: String,
    pub kind: FeatureKind,
}

/// Normalized flow-record layout for one dataset profile.
#[derive(Debug, Clone)]
pub struct FeatureSchema {
    name: String,
    features: Vec<FeatureDef>,
    label_column: String,
    src_ip_column: Option<String>,
    attack_classes: Vec<AttackClass>,
    index: HashMap<String, usize>,
    fingerprint: SchemaFingerprint,
}

#[derive(Debug, Deserialize)]
struct ProfileDoc {
    name: String,
    label_column: String,
    src_ip_column: Option<String>,
    attack_classes: Vec<String>,
    features: Vec<ProfileFeature>,
}

#[derive(Debug, Deserialize)]
struct ProfileFeature {
    name: String,
    kind: String,
    min: Option<f64>,
    max: Option<f64>,
    values: Option<BTreeMap<String, u32>>,
}

impl FeatureSchema {
    /// Parse and validate a profile document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: ProfileDoc = toml::from_str(text)?;
        Self::from_doc(doc)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Programmatic all-numeric schema with [0,1] bounds; used by the
    /// synthetic generators and throughout the test suite.
    pub fn numeric(
        name: &str,
        feature_count: usize,
        attack_classes: &[&str],
    ) -> Self {
        let features = (0..feature_count)
            .map(|i| FeatureDef {
                name: format!("f{i:02}"),
                kind: FeatureKind::Numeric { min: 0.0, max: 1.0 },
            })
            .collect();
        Self::assemble(
            name.to_string(),
            features,
            "label".to_string(),
            Some("src_ip".to_string()),
            attack_classes.iter().map(|c| AttackClass::new(*c)).collect(),
        )
        .expect("numeric schema is always valid")
    }

    fn from_doc(doc: ProfileDoc) -> Result<Self> {
        let profile = doc.name.clone();
        let mut features = Vec::with_capacity(doc.features.len());
        for f in doc.features {
            let kind = match f.kind.as_str() {
                "numeric" => {
                    let min = f.min.unwrap_or(0.0);
                    let max = f.max.unwrap_or(1.0);
                    if !min.is_finite() || !max.is_finite() || max < min {
                        return Err(Error::InvalidProfile {
                            profile,
                            reason: format!("feature `{}` has bad bounds [{min}, {max}]", f.name),
                        });
                    }
                    FeatureKind::Numeric { min, max }
                }
                "categorical" => {
                    let values = f.values.unwrap_or_default();
                    let mut seen: BTreeMap<u32, &String> = BTreeMap::new();
                    for (value, code) in &values {
                        if let Some(first) = seen.insert(*code, value) {
                            return Err(Error::DictionaryCollision {
                                feature: f.name.clone(),
                                code: *code,
                                first: first.clone(),
                                second: value.clone(),
                            });
                        }
                    }
                    let other_code = values.values().max().map_or(0, |m| m + 1);
                    FeatureKind::Categorical { values, other_code }
                }
                other => {
                    return Err(Error::InvalidProfile {
                        profile,
                        reason: format!("feature `{}` has unknown kind `{other}`", f.name),
                    })
                }
            };
            features.push(FeatureDef { name: f.name, kind });
        }
        Self::assemble(
            doc.name,
            features,
            doc.label_column,
            doc.src_ip_column,
            doc.attack_classes.into_iter().map(AttackClass::new).collect(),
        )
    }

    fn assemble(
        name: String,
        features: Vec<FeatureDef>,
        label_column: String,
        src_ip_column: Option<String>,
        attack_classes: Vec<AttackClass>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, f) in features.iter().enumerate() {
            if index.insert(f.name.clone(), i).is_some() {
                return Err(Error::DuplicateFeature(f.name.clone()));
            }
        }
        let fingerprint = fingerprint_of(&features, &attack_classes);
        Ok(FeatureSchema {
            name,
            features,
            label_column,
            src_ip_column,
            attack_classes,
            index,
            fingerprint,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureDef] {
        &self.features
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    pub fn src_ip_column(&self) -> Option<&str> {
        self.src_ip_column.as_deref()
    }

    pub fn attack_classes(&self) -> &[AttackClass] {
        &self.attack_classes
    }

    pub fn fingerprint(&self) -> SchemaFingerprint {
        self.fingerprint
    }

    /// Parse a label cell against this profile's class list.
    pub fn parse_label(&self, text: &str) -> Result<Label> {
        if text == NORMAL_LABEL {
            return Ok(Label::Normal);
        }
        self.attack_classes
            .iter()
            .find(|c| c.name() == text)
            .map(|c| Label::Attack(c.clone()))
            .ok_or_else(|| Error::UnknownLabel(text.to_string()))
    }

    /// Build the sub-schema spanned by the named features (used for the
    /// shared-feature projection between two profiles). Classes are the
    /// union of `self`'s and `extra_classes`.
    pub fn project(
        &self,
        name: &str,
        feature_names: &[String],
        extra_classes: &[AttackClass],
    ) -> Result<(FeatureSchema, Vec<usize>)> {
        let mut defs = Vec::with_capacity(feature_names.len());
        let mut indices = Vec::with_capacity(feature_names.len());
        for fname in feature_names {
            let idx = self
                .feature_index(fname)
                .ok_or_else(|| Error::MissingFeature(fname.clone()))?;
            defs.push(self.features[idx].clone());
            indices.push(idx);
        }
        let mut classes = self.attack_classes.clone();
        for c in extra_classes {
            if !classes.contains(c) {
                classes.push(c.clone());
            }
        }
        let schema = Self::assemble(
            name.to_string(),
            defs,
            self.label_column.clone(),
            self.src_ip_column.clone(),
            classes,
        )?;
        Ok((schema, indices))
    }
}

fn fingerprint_of(features: &[FeatureDef], classes: &[AttackClass]) -> SchemaFingerprint {
    let mut canon = String::new();
    for f in features {
        match &f.kind {
            FeatureKind::Numeric { min, max } => {
                let _ = write!(canon, "{}|num|{min}|{max};", f.name);
            }
            FeatureKind::Categorical { values, other_code } => {
                let _ = write!(canon, "{}|cat|{other_code}|", f.name);
                for (v, c) in values {
                    let _ = write!(canon, "{v}={c},");
                }
                canon.push(';');
            }
        }
    }
    for c in classes {
        let _ = write!(canon, "#{}", c.name());
    }
    let digest = Sha256::digest(canon.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    SchemaFingerprint(u64::from_be_bytes(bytes))
}

/// Resolve a profile by built-in name or filesystem path.
pub fn load_schema(profile: &str) -> Result<FeatureSchema> {
    for (name, text) in BUILTIN_PROFILES {
        if *name == profile {
            return FeatureSchema::from_toml_str(text);
        }
    }
    let path = Path::new(profile);
    if path.is_file() {
        return FeatureSchema::from_path(path);
    }
    Err(Error::UnknownProfile(profile.to_string()))
}

/// One normalized flow observation; the unit flowing through the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRecord {
    pub values: Vec<f64>,
    pub src_ip: String,
    pub node_id: NodeId,
    pub timestamp: u64,
    pub label: Option<Label>,
    pub schema_fp: SchemaFingerprint,
}

impl FlowRecord {
    pub fn verdict(&self) -> Option<Verdict> {
        self.label.as_ref().map(|l| l.verdict())
    }

    pub fn is_attack(&self) -> bool {
        self.label.as_ref().is_some_and(|l| l.is_attack())
    }

    /// Copy with the label removed (stream records are unlabeled in flight).
    pub fn unlabeled(&self) -> FlowRecord {
        FlowRecord {
            label: None,
            ..self.clone()
        }
    }

    /// Project the vector onto `indices` and restamp with `schema`.
    pub fn project(&self, indices: &[usize], schema: &FeatureSchema) -> FlowRecord {
        FlowRecord {
            values: indices.iter().map(|&i| self.values[i]).collect(),
            src_ip: self.src_ip.clone(),
            node_id: self.node_id.clone(),
            timestamp: self.timestamp,
            label: self.label.clone(),
            schema_fp: schema.fingerprint(),
        }
    }
}

/// Normalize one string-keyed row into a flow record.
///
/// Numerics are parsed and min-max scaled (then clamped to [0,1]);
/// categoricals go through the profile dictionary, unseen values landing
/// on the reserved `other` code. The label column is optional; the source
/// ip column is read when the profile declares one.
pub fn normalize_record(
    raw: &HashMap<String, String>,
    schema: &FeatureSchema,
) -> Result<FlowRecord> {
    let mut values = Vec::with_capacity(schema.feature_count());
    for def in schema.features() {
        let cell = raw
            .get(&def.name)
            .ok_or_else(|| Error::MissingFeature(def.name.clone()))?;
        let v = match &def.kind {
            FeatureKind::Numeric { min, max } => {
                let x: f64 = cell.trim().parse().map_err(|_| Error::BadNumeric {
                    feature: def.name.clone(),
                    value: cell.clone(),
                })?;
                if !x.is_finite() {
                    return Err(Error::BadNumeric {
                        feature: def.name.clone(),
                        value: cell.clone(),
                    });
                }
                if max > min {
                    ((x - min) / (max - min)).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
            FeatureKind::Categorical { values, other_code } => {
                f64::from(values.get(cell.trim()).copied().unwrap_or(*other_code))
            }
        };
        values.push(v);
    }
    let label = match raw.get(schema.label_column()) {
        Some(cell) if !cell.is_empty() => Some(schema.parse_label(cell.trim())?),
        _ => None,
    };
    let src_ip = schema
        .src_ip_column()
        .and_then(|c| raw.get(c))
        .cloned()
        .unwrap_or_else(|| "0.0.0.0".to_string());
    Ok(FlowRecord {
        values,
        src_ip,
        node_id: NodeId::new(""),
        timestamp: 0,
        label,
        schema_fp: schema.fingerprint(),
    })
}

/// Load a raw CSV (header row, comma separated) through a profile.
/// Row order is preserved; any row-level failure is reported with its
/// 1-based data row number.
pub fn load_dataset(path: impl AsRef<Path>, schema: &FeatureSchema) -> Result<Vec<FlowRecord>> {
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let data_row = i + 1;
        let row = row.map_err(|e| Error::from(e).at_row(data_row))?;
        let raw: HashMap<String, String> = headers
            .iter()
            .cloned()
            .zip(row.iter().map(str::to_string))
            .collect();
        let mut record = normalize_record(&raw, schema).map_err(|e| e.at_row(data_row))?;
        record.timestamp = data_row as u64;
        records.push(record);
    }
    Ok(records)
}

/// Write records in the profile-normalized CSV form: one column per
/// feature holding the already-normalized value, then `src_ip` and the
/// label column. Values survive a write/read cycle bit-exactly.
pub fn write_normalized_csv(
    records: &[FlowRecord],
    schema: &FeatureSchema,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    let mut header: Vec<String> = schema.features().iter().map(|f| f.name.clone()).collect();
    header.push("src_ip".to_string());
    header.push(schema.label_column().to_string());
    writer.write_record(&header)?;
    for r in records {
        let mut row: Vec<String> = r.values.iter().map(|v| format!("{v:?}")).collect();
        row.push(r.src_ip.clone());
        row.push(r.label.as_ref().map_or(String::new(), |l| l.to_string()));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Read back the normalized CSV form produced by [`write_normalized_csv`].
pub fn read_normalized_csv(
    path: impl AsRef<Path>,
    schema: &FeatureSchema,
) -> Result<Vec<FlowRecord>> {
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut feature_cols = Vec::with_capacity(schema.feature_count());
    for def in schema.features() {
        let col = headers
            .iter()
            .position(|h| h == &def.name)
            .ok_or_else(|| Error::MissingFeature(def.name.clone()))?;
        feature_cols.push(col);
    }
    let ip_col = headers.iter().position(|h| h == "src_ip");
    let label_col = headers.iter().position(|h| h == schema.label_column());
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let data_row = i + 1;
        let row = row.map_err(|e| Error::from(e).at_row(data_row))?;
        let mut values = Vec::with_capacity(feature_cols.len());
        for (&col, def) in feature_cols.iter().zip(schema.features()) {
            let cell = row.get(col).unwrap_or("");
            let v: f64 = cell.parse().map_err(|_| {
                Error::BadNumeric {
                    feature: def.name.clone(),
                    value: cell.to_string(),
                }
                .at_row(data_row)
            })?;
            values.push(v);
        }
        let label = match label_col.and_then(|c| row.get(c)) {
            Some(cell) if !cell.is_empty() => {
                Some(schema.parse_label(cell).map_err(|e| e.at_row(data_row))?)
            }
            _ => None,
        };
        records.push(FlowRecord {
            values,
            src_ip: ip_col
                .and_then(|c| row.get(c))
                .unwrap_or("0.0.0.0")
                .to_string(),
            node_id: NodeId::new(""),
            timestamp: data_row as u64,
            label,
            schema_fp: schema.fingerprint(),
        });
    }
    Ok(records)
}

/// Labeled reference set with a controlled attack share, used to
/// pseudo-label fresh batches.
#[derive(Debug, Clone)]
pub struct BaselineDataset {
    pub records: Vec<FlowRecord>,
    pub attack_ratio: f64,
}

impl BaselineDataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Draw `n` labeled records without replacement so that exactly
/// `round(n * attack_ratio)` of them are attacks. Deterministic for a
/// fixed seed.
pub fn sample_baseline(
    pool: &[FlowRecord],
    n: usize,
    attack_ratio: f64,
    seed: u64,
) -> Result<BaselineDataset> {
    if n == 0 {
        return Ok(BaselineDataset {
            records: Vec::new(),
            attack_ratio: 0.0,
        });
    }
    for r in pool {
        if r.label.is_none() {
            return Err(Error::UnlabeledRecord);
        }
    }
    let want_attack = (n as f64 * attack_ratio).round() as usize;
    let want_normal = n - want_attack;
    let mut attack_idx: Vec<usize> = Vec::new();
    let mut normal_idx: Vec<usize> = Vec::new();
    for (i, r) in pool.iter().enumerate() {
        if r.is_attack() {
            attack_idx.push(i);
        } else {
            normal_idx.push(i);
        }
    }
    if attack_idx.len() < want_attack {
        return Err(Error::InsufficientRecords {
            class: "attack",
            need: want_attack,
            have: attack_idx.len(),
        });
    }
    if normal_idx.len() < want_normal {
        return Err(Error::InsufficientRecords {
            class: "normal",
            need: want_normal,
            have: normal_idx.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    attack_idx.shuffle(&mut rng);
    normal_idx.shuffle(&mut rng);
    let mut records: Vec<FlowRecord> = attack_idx[..want_attack]
        .iter()
        .chain(normal_idx[..want_normal].iter())
        .map(|&i| pool[i].clone())
        .collect();
    records.shuffle(&mut rng);
    Ok(BaselineDataset {
        records,
        attack_ratio: want_attack as f64 / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn row(pairs: &[(&str, &str)]) -> HashMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn builtin_synthetic_profile_has_twenty_numeric_features() {
        let schema = load_schema("synthetic-v1").unwrap();
        assert_eq!(schema.feature_count(), 20);
        assert!(schema
            .features()
            .iter()
            .all(|f| matches!(f.kind, FeatureKind::Numeric { .. })));
    }

    #[test]
    fn builtin_edge_iiot_profile_declares_the_ten_classes() {
        let schema = load_schema("edge-iiot").unwrap();
        let names: Vec<&str> = schema.attack_classes().iter().map(|c| c.name()).collect();
        assert_eq!(
            names,
            vec![
                "Backdoor",
                "DDoS HTTP",
                "DDoS UDP",
                "Fingerprinting",
                "MITM",
                "Password",
                "Port Scanning",
                "Ransomware",
                "SQL Injection",
                "XSS",
            ]
        );
    }

    #[test]
    fn unknown_profile_is_rejected() {
        assert!(matches!(
            load_schema("missing"),
            Err(Error::UnknownProfile(_))
        ));
    }

    #[test]
    fn duplicate_feature_names_are_rejected() {
        let text = r#"
name = "dup"
label_column = "label"
attack_classes = ["DDoS"]
[[features]]
name = "a"
kind = "numeric"
[[features]]
name = "a"
kind = "numeric"
"#;
        assert!(matches!(
            FeatureSchema::from_toml_str(text),
            Err(Error::DuplicateFeature(_))
        ));
    }

    #[test]
    fn dictionary_code_collision_is_rejected() {
        let text = r#"
name = "coll"
label_column = "label"
attack_classes = ["DDoS"]
[[features]]
name = "proto"
kind = "categorical"
[features.values]
tcp = 1
udp = 1
"#;
        assert!(matches!(
            FeatureSchema::from_toml_str(text),
            Err(Error::DictionaryCollision { .. })
        ));
    }

    fn tiny_schema() -> FeatureSchema {
        FeatureSchema::from_toml_str(
            r#"
name = "tiny"
label_column = "label"
src_ip_column = "src_ip"
attack_classes = ["DDoS UDP"]
[[features]]
name = "len"
kind = "numeric"
min = 0.0
max = 100.0
[[features]]
name = "proto"
kind = "categorical"
[features.values]
tcp = 1
udp = 2
"#,
        )
        .unwrap()
    }

    #[test]
    fn normalize_scales_and_codes() {
        let schema = tiny_schema();
        let r = normalize_record(&row(&[("len", "50"), ("proto", "tcp")]), &schema).unwrap();
        assert_eq!(r.values, vec![0.5, 1.0]);
        let r = normalize_record(&row(&[("len", "0"), ("proto", "udp")]), &schema).unwrap();
        assert_eq!(r.values, vec![0.0, 2.0]);
    }

    #[test]
    fn normalize_all_zero_numerics_gives_zero_vector() {
        let schema = FeatureSchema::numeric("z", 3, &["DDoS UDP"]);
        let r = normalize_record(
            &row(&[("f00", "0"), ("f01", "0"), ("f02", "0")]),
            &schema,
        )
        .unwrap();
        assert_eq!(r.values, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn normalize_unseen_categorical_uses_reserved_code() {
        let schema = tiny_schema();
        let r = normalize_record(&row(&[("len", "1"), ("proto", "sctp")]), &schema).unwrap();
        assert_eq!(r.values[1], 3.0); // max declared code is 2
    }

    #[test]
    fn normalize_missing_column_is_reported() {
        let schema = tiny_schema();
        let err = normalize_record(&row(&[("len", "1")]), &schema).unwrap_err();
        match err {
            Error::MissingFeature(name) => assert_eq!(name, "proto"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn normalize_bad_numeric_is_reported() {
        let schema = tiny_schema();
        let err =
            normalize_record(&row(&[("len", "abc"), ("proto", "tcp")]), &schema).unwrap_err();
        assert!(matches!(err, Error::BadNumeric { .. }));
        let err =
            normalize_record(&row(&[("len", "NaN"), ("proto", "tcp")]), &schema).unwrap_err();
        assert!(matches!(err, Error::BadNumeric { .. }));
    }

    fn write_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn load_dataset_preserves_order_and_labels() {
        let schema = tiny_schema();
        let f = write_csv(
            "len,proto,src_ip,label\n10,tcp,10.0.0.1,Normal\n20,udp,10.0.0.2,DDoS UDP\n30,tcp,10.0.0.3,Normal\n",
        );
        let records = load_dataset(f.path(), &schema).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0].values[0], 0.1);
        assert_eq!(records[1].label, Some(Label::Attack(AttackClass::new("DDoS UDP"))));
        assert_eq!(records[2].label, Some(Label::Normal));
        assert_eq!(records[0].src_ip, "10.0.0.1");
        assert_eq!(
            records.iter().map(|r| r.timestamp).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn load_dataset_reports_corrupt_row_number() {
        let schema = tiny_schema();
        let f = write_csv("len,proto,label\n10,tcp,Normal\nbogus,tcp,Normal\n30,tcp,Normal\n");
        let err = load_dataset(f.path(), &schema).unwrap_err();
        match err {
            Error::Row { row, .. } => assert_eq!(row, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_dataset_concatenation_appends() {
        let schema = tiny_schema();
        let a = write_csv("len,proto,label\n10,tcp,Normal\n20,udp,DDoS UDP\n");
        let b = write_csv("len,proto,label\n30,tcp,Normal\n");
        let both = write_csv(
            "len,proto,label\n10,tcp,Normal\n20,udp,DDoS UDP\n30,tcp,Normal\n",
        );
        let ra = load_dataset(a.path(), &schema).unwrap();
        let rb = load_dataset(b.path(), &schema).unwrap();
        let rab = load_dataset(both.path(), &schema).unwrap();
        let vals = |rs: &[FlowRecord]| rs.iter().map(|r| r.values.clone()).collect::<Vec<_>>();
        let mut joined = vals(&ra);
        joined.extend(vals(&rb));
        assert_eq!(joined, vals(&rab));
    }

    #[test]
    fn normalized_csv_round_trips_values_exactly() {
        let schema = tiny_schema();
        let f = write_csv(
            "len,proto,src_ip,label\n13.37,tcp,10.0.0.1,Normal\n99.999,other,10.0.0.2,DDoS UDP\n",
        );
        let records = load_dataset(f.path(), &schema).unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        write_normalized_csv(&records, &schema, out.path()).unwrap();
        let back = read_normalized_csv(out.path(), &schema).unwrap();
        assert_eq!(back.len(), records.len());
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(a.values, b.values);
            assert_eq!(a.label, b.label);
            assert_eq!(a.src_ip, b.src_ip);
        }
    }

    fn labeled_pool(attacks: usize, normals: usize) -> Vec<FlowRecord> {
        let schema = FeatureSchema::numeric("pool", 2, &["DDoS UDP"]);
        let mut pool = Vec::new();
        for i in 0..attacks {
            pool.push(FlowRecord {
                values: vec![i as f64, 1.0],
                src_ip: format!("10.0.0.{i}"),
                node_id: NodeId::new("e0"),
                timestamp: i as u64,
                label: Some(Label::Attack(AttackClass::new("DDoS UDP"))),
                schema_fp: schema.fingerprint(),
            });
        }
        for i in 0..normals {
            pool.push(FlowRecord {
                values: vec![i as f64, 0.0],
                src_ip: format!("192.168.0.{i}"),
                node_id: NodeId::new("e0"),
                timestamp: (attacks + i) as u64,
                label: Some(Label::Normal),
                schema_fp: schema.fingerprint(),
            });
        }
        pool
    }

    #[test]
    fn baseline_hits_the_sixty_five_percent_mix() {
        let pool = labeled_pool(700, 400);
        let b = sample_baseline(&pool, 1000, 0.65, 42).unwrap();
        assert_eq!(b.len(), 1000);
        let attacks = b.records.iter().filter(|r| r.is_attack()).count();
        assert_eq!(attacks, 650);
        assert!((b.attack_ratio - 0.65).abs() < 1e-12);
    }

    #[test]
    fn baseline_of_zero_records_is_empty() {
        let pool = labeled_pool(5, 5);
        let b = sample_baseline(&pool, 0, 0.65, 1).unwrap();
        assert!(b.is_empty());
        assert_eq!(b.attack_ratio, 0.0);
    }

    #[test]
    fn baseline_sampling_is_deterministic() {
        let pool = labeled_pool(300, 300);
        let key = |b: &BaselineDataset| {
            let mut k: Vec<String> = b.records.iter().map(|r| format!("{:?}", r.values)).collect();
            k.sort();
            k
        };
        let b1 = sample_baseline(&pool, 200, 0.65, 7).unwrap();
        let b2 = sample_baseline(&pool, 200, 0.65, 7).unwrap();
        assert_eq!(key(&b1), key(&b2));
        // and order-identical, not just multiset-identical
        assert_eq!(b1.records, b2.records);
    }

    #[test]
    fn baseline_shortfall_is_an_error() {
        let pool = labeled_pool(10, 500);
        assert!(matches!(
            sample_baseline(&pool, 100, 0.65, 1),
            Err(Error::InsufficientRecords { class: "attack", .. })
        ));
        let pool = labeled_pool(500, 10);
        assert!(matches!(
            sample_baseline(&pool, 100, 0.65, 1),
            Err(Error::InsufficientRecords { class: "normal", .. })
        ));
    }

    #[test]
    fn projection_restamps_schema() {
        let schema = FeatureSchema::numeric("full", 4, &["DDoS UDP"]);
        let (sub, indices) = schema
            .project("sub", &["f01".into(), "f03".into()], &[])
            .unwrap();
        assert_eq!(indices, vec![1, 3]);
        let r = FlowRecord {
            values: vec![0.1, 0.2, 0.3, 0.4],
            src_ip: "10.0.0.1".into(),
            node_id: NodeId::new("e0"),
            timestamp: 9,
            label: Some(Label::Normal),
            schema_fp: schema.fingerprint(),
        };
        let p = r.project(&indices, &sub);
        assert_eq!(p.values, vec![0.2, 0.4]);
        assert_eq!(p.schema_fp, sub.fingerprint());
        assert_ne!(p.schema_fp, r.schema_fp);
    }
}
