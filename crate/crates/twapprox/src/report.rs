//! Schema-stable JSON reports for the CLI.
//!
//! Field order is fixed by struct declaration and all maps are ordered, so
//! a report serializes byte-identically for identical inputs. Wall time is
//! the one nondeterministic field; sweeps omit it so sweep output can be
//! compared bytewise across runs.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::graph::{write_instance, WeightedInstance};
use crate::rounding::Rational;

/// SHA-256 of the canonical instance serialization, hex-encoded.
pub fn instance_hash(inst: &WeightedInstance) -> String {
    let mut hasher = Sha256::new();
    hasher.update(write_instance(inst).as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Exact rational rendered as `"p/q"`.
pub fn ratio_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Serialize)]
pub struct InstanceInfo {
    pub hash: String,
    pub kind: String,
    pub n: usize,
    pub m: usize,
}

impl InstanceInfo {
    pub fn of(inst: &WeightedInstance) -> InstanceInfo {
        InstanceInfo {
            hash: instance_hash(inst),
            kind: inst.kind().to_string(),
            n: inst.graph().n(),
            m: inst.graph().m(),
        }
    }
}

/// One report object per solver run.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub instance: InstanceInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub params: serde_json::Value,
    pub status: String,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub result: serde_json::Value,
    /// Omitted inside sweeps to keep their reports byte-reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

pub const REPORT_SCHEMA: &str = "twapprox/report/v1";

impl Report {
    pub fn new(command: &str, inst: &WeightedInstance) -> Report {
        Report {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            instance: InstanceInfo::of(inst),
            seed: None,
            params: serde_json::Value::Null,
            status: String::new(),
            result: serde_json::Value::Null,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, ProblemKind};

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let a = WeightedInstance::new(g.clone(), ProblemKind::Cvc, vec![1, 1]).unwrap();
        let b = WeightedInstance::new(g, ProblemKind::Cvc, vec![1, 2]).unwrap();
        assert_eq!(instance_hash(&a), instance_hash(&a));
        assert_ne!(instance_hash(&a), instance_hash(&b));
        assert_eq!(instance_hash(&a).len(), 64);
    }

    #[test]
    fn report_serializes_deterministically() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let inst = WeightedInstance::new(g, ProblemKind::Tss, vec![0, 1]).unwrap();
        let mut r = Report::new("solve-tss", &inst);
        r.status = "ok".into();
        r.params = serde_json::json!({"budget": 2});
        assert_eq!(r.to_json(), r.to_json());
        assert!(r.to_json().contains("\"schema\":\"twapprox/report/v1\""));
        assert!(!r.to_json().contains("wall_time_ms"));
    }
}
