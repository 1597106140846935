//! Verification reports and their JSON form (`"schema": "zn-report/1"`).
//!
//! Field order is fixed so that two runs with the same parameters serialise
//! to identical bytes apart from `elapsed_s`, which always comes last.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::zn::ResidueSet;

pub const SCHEMA: &str = "zn-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

impl Verdict {
    /// CLI exit status: 1 for a counterexample, 0 otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Fail => 1,
            Verdict::Pass | Verdict::Vacuous => 0,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
        })
    }
}

/// Margin by which an inequality holds on one instance; negative means violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Slack {
    Int(i64),
    Real(f64),
}

impl Slack {
    pub fn value(self) -> f64 {
        match self {
            Slack::Int(v) => v as f64,
            Slack::Real(v) => v,
        }
    }

    pub fn is_violation(self) -> bool {
        self.value() < 0.0
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slack::Int(a), Slack::Int(b)) => a.cmp(b),
            _ => self.value().total_cmp(&other.value()),
        }
    }
}

impl fmt::Display for Slack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slack::Int(v) => write!(f, "{v}"),
            Slack::Real(v) => write!(f, "{v:e}"),
        }
    }
}

/// A concrete instance: a set together with a human-readable datum.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub set: ResidueSet,
    pub detail: String,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("n", &self.set.n())?;
        st.serialize_field("set", &self.set.to_string())?;
        st.serialize_field("detail", &self.detail)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance(pub ResidueSet);

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Instance", 2)?;
        st.serialize_field("n", &self.0.n())?;
        st.serialize_field("set", &self.0.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    pub n_min: u32,
    pub n_max: u32,
    /// The hypothesis exactly as checked, including strictness.
    pub hypothesis: String,
    pub mode: ModeName,
    pub samples: Option<u64>,
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    pub min_slack: Option<Slack>,
    pub argmin: Option<Instance>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub verifier_id: String,
    pub params: Params,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub stats: Stats,
    pub sets_checked: u64,
    /// Instances the statement itself excludes, found and confirmed.
    pub expected_exceptions: Vec<Witness>,
    pub info: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub elapsed_s: f64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// JSON with `elapsed_s` zeroed, for determinism comparisons.
    pub fn to_json_without_elapsed(&self) -> String {
        let mut r = self.clone();
        r.elapsed_s = 0.0;
        r.to_json()
    }

    pub fn csv_header() -> &'static str {
        "verifier_id,n_min,n_max,mode,samples,seed,verdict,sets_checked,min_slack,argmin_n,argmin_set,witness_detail,elapsed_s"
    }

    pub fn to_csv_row(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.verifier_id.clone(),
            self.params.n_min.to_string(),
            self.params.n_max.to_string(),
            format!("{:?}", self.params.mode).to_lowercase(),
            opt(self.params.samples.map(|s| s.to_string())),
            opt(self.seed.map(|s| s.to_string())),
            self.verdict.to_string(),
            self.sets_checked.to_string(),
            opt(self.stats.min_slack.map(|s| s.to_string())),
            opt(self.stats.argmin.as_ref().map(|a| a.0.n().to_string())),
            quote(&opt(self.stats.argmin.as_ref().map(|a| a.0.to_string()))),
            quote(&opt(self.witness.as_ref().map(|w| w.detail.clone()))),
            format!("{:.3}", self.elapsed_s),
        ]
        .join(",")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} (n {}..{}, {}, {} sets checked)\n  hypothesis: {}\n",
            self.verifier_id,
            self.verdict,
            self.params.n_min,
            self.params.n_max,
            match self.params.mode {
                ModeName::Exhaustive => "exhaustive".to_string(),
                ModeName::Random => format!(
                    "random, {} samples/n, seed {}",
                    self.params.samples.unwrap_or(0),
                    self.seed.unwrap_or(0)
                ),
            },
            self.sets_checked,
            self.params.hypothesis,
        );
        if let (Some(s), Some(a)) = (&self.stats.min_slack, &self.stats.argmin) {
            out.push_str(&format!("  min slack {s} at n={} A={{{}}}\n", a.0.n(), a.0));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!(
                "  COUNTEREXAMPLE n={} A={{{}}}: {}\n",
                w.set.n(),
                w.set,
                w.detail
            ));
        }
        for e in &self.expected_exceptions {
            out.push_str(&format!(
                "  expected exception n={} A={{{}}}: {}\n",
                e.set.n(),
                e.set,
                e.detail
            ));
        }
        for (k, v) in &self.info {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        out.push_str(&format!("  elapsed {:.3}s\n", self.elapsed_s));
        out
    }
}
