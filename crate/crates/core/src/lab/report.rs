use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::{Map, Value};

use crate::matrix::Matrix;
use crate::scalar::format_rational;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub desc: String,
    pub value: Rational,
}

impl Witness {
    pub fn new(desc: impl Into<String>, value: Rational) -> Self {
        Self { desc: desc.into(), value }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 2)?;
        st.serialize_field("desc", &self.desc)?;
        st.serialize_field("value", &format_rational(&self.value))?;
        st.end()
    }
}

/// Outcome of one characterization check, with the exact values behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Named boolean findings, e.g. whether a Vandermonde system is regular.
    pub flags: BTreeMap<String, bool>,
    pub max_order: usize,
}

impl CheckReport {
    pub fn new(check: &str, max_order: usize) -> Self {
        Self {
            check: check.to_string(),
            params: Map::new(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            flags: BTreeMap::new(),
            max_order,
        }
    }

    pub fn param(&mut self, key: &str, value: Value) -> &mut Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn witness(&mut self, desc: impl Into<String>, value: Rational) -> &mut Self {
        self.witnesses.push(Witness::new(desc, value));
        self
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.flags.insert(key.to_string(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    /// Value of the first witness with this description.
    pub fn find(&self, desc: &str) -> Option<&Rational> {
        self.witnesses.iter().find(|w| w.desc == desc).map(|w| &w.value)
    }

    pub fn nonzero_witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| w.value != Rational::from_integer(0.into()))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl Serialize for CheckReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CheckReport", 6)?;
        st.serialize_field("check", &self.check)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("verdict", self.verdict.as_str())?;
        st.serialize_field("witnesses", &self.witnesses)?;
        st.serialize_field("flags", &self.flags)?;
        st.serialize_field("max_order", &self.max_order)?;
        st.end()
    }
}

pub(crate) fn rational_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub(crate) fn vector_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub(crate) fn matrix_value(m: &Matrix<Rational>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_value(r)).collect())
}
