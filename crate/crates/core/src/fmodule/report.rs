use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::cyclotomic::CycNumber;
use crate::linalg::Matrix;

/// Outcome of one named check on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub instance: String,
    pub seed: u64,
    pub samples: usize,
    #[serde(serialize_with = "serialize_defect")]
    pub defect: CycNumber,
    pub pass: bool,
    pub details: BTreeMap<String, Value>,
}

fn serialize_defect<S: Serializer>(c: &CycNumber, s: S) -> Result<S::Ok, S::Error> {
    if c.is_zero() {
        s.serialize_str("0")
    } else {
        c.normalized().serialize(s)
    }
}

impl Report {
    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Forces a failure, recording why.
    pub fn fail(mut self, reason: impl Into<String>) -> Self {
        self.pass = false;
        self.details.insert("failure".into(), Value::String(reason.into()));
        self
    }
}

/// Identifies the instance and randomness a check runs under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckContext {
    pub instance: String,
    pub seed: u64,
    pub samples: usize,
}

impl CheckContext {
    pub fn new(instance: impl Into<String>, seed: u64, samples: usize) -> Self {
        CheckContext { instance: instance.into(), seed, samples }
    }

    /// Independent stream for one check, so adding checks never shifts others.
    pub fn rng(&self, check: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(check.as_bytes()))
    }
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Running count of evaluated cases and the first nonzero defect seen.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub empty_cases: usize,
    pub evaluations: usize,
    pub defect: Option<CycNumber>,
    pub witness: Option<String>,
    pub notes: BTreeMap<String, Value>,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, value: Option<&CycNumber>, witness: impl FnOnce() -> String) {
        self.evaluations += 1;
        if let Some(c) = value.filter(|c| !c.is_zero()) {
            if self.defect.is_none() {
                self.defect = Some(c.clone());
                self.witness = Some(witness());
            }
        }
    }

    pub fn record_value(&mut self, diff: &CycNumber, witness: impl FnOnce() -> String) {
        self.record(Some(diff), witness);
    }

    pub fn record_matrix(&mut self, diff: &Matrix, witness: impl FnOnce() -> String) {
        self.record(diff.entries().iter().find(|x| !x.is_zero()), witness);
    }

    /// A hard failure with no scalar defect attached.
    pub fn record_failure(&mut self, witness: impl Into<String>) {
        self.evaluations += 1;
        if self.defect.is_none() {
            self.defect = Some(CycNumber::one());
            self.witness = Some(witness.into());
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.empty_cases += other.empty_cases;
        self.evaluations += other.evaluations;
        if self.defect.is_none() {
            self.defect = other.defect;
            self.witness = other.witness;
        }
        self.notes.extend(other.notes);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.notes.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.defect.is_none() && self.evaluations > 0
    }

    pub fn finish(self, check: &str, ctx: &CheckContext, samples: usize) -> Report {
        let pass = self.passed();
        let mut details = self.notes;
        details.insert("cases".into(), self.cases.into());
        details.insert("empty_cases".into(), self.empty_cases.into());
        details.insert("evaluations".into(), self.evaluations.into());
        if let Some(w) = self.witness {
            details.insert("witness".into(), Value::String(w));
        }
        if self.evaluations == 0 {
            details.insert("failure".into(), Value::String("nothing was evaluated".into()));
        }
        Report {
            check: check.to_string(),
            instance: ctx.instance.clone(),
            seed: ctx.seed,
            samples,
            defect: self.defect.unwrap_or_else(CycNumber::zero),
            pass,
            details,
        }
    }
}
