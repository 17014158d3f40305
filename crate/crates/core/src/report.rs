//! Audit reports: named quantities plus the verdicts computed from them.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(i128),
    Real(f64),
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(i) => i as f64,
            Value::Real(x) => x,
        }
    }

    pub fn as_int(self) -> Option<i128> {
        match self {
            Value::Int(i) => Some(i),
            Value::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub audit: &'static str,
    pub quantities: Vec<Quantity>,
    pub verdicts: Vec<Verdict>,
}

impl BoundReport {
    pub fn new(audit: &'static str) -> Self {
        Self {
            audit,
            quantities: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn int(&mut self, name: &str, value: impl Into<i128>) -> &mut Self {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value: Value::Int(value.into()),
        });
        self
    }

    pub fn real(&mut self, name: &str, value: f64) -> &mut Self {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value: Value::Real(value),
        });
        self
    }

    pub fn verdict(&mut self, claim: &str, holds: bool) -> &mut Self {
        self.verdicts.push(Verdict {
            claim: claim.to_string(),
            holds,
        });
        self
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.quantities.iter().find(|q| q.name == name).map(|q| q.value)
    }

    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }
}
