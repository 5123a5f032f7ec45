//! Families by name with string parameters, as used by the command line and by sidecar files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::sequence::{periodic_from_str, SymbolicSequence};

use super::*;

pub const FAMILIES: &[(&str, &str)] = &[
    ("sturmian", "beta=golden|silver|quad:a,b,c,d|0.xxx  x0=<real>  relabel=a,b"),
    ("periodic", "cycle=0011"),
    ("two-tails", "(no parameters) 0^inf.1^inf"),
    ("recurrent", "j=2 g=sqrt margin=1"),
    ("stitched", "j=2 i=1 g=sqrt margin=1"),
    ("transitive", "j=3 g=sqrt margin=1"),
    ("nonrecurrent", "case=i1|i2 N=10 beta=… beta1=… beta2=…"),
    ("staircase", "(no parameters)"),
];

/// A family name plus its string parameters; fully determines the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: String,
    pub params: BTreeMap<String, String>,
}

impl FamilySpec {
    pub fn new(family: &str) -> Self {
        FamilySpec { family: family.to_string(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Parses `key=value` pairs.
    pub fn parse(family: &str, pairs: &[String]) -> Result<Self> {
        let mut spec = FamilySpec::new(family);
        for p in pairs {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("parameter {p:?} is not key=value")))?;
            spec.params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(spec)
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Domain(format!("bad value {v:?} for {key}"))),
        }
    }

    fn growth(&self) -> Result<GrowthFunction> {
        GrowthFunction::parse(self.params.get("g").map(String::as_str).unwrap_or("sqrt"))
    }

    pub fn build(&self) -> Result<SymbolicSequence> {
        match self.family.as_str() {
            "sturmian" => {
                let beta = Real::parse(self.params.get("beta").map(String::as_str).unwrap_or("golden"))?;
                let mut p = SturmianParams::new(beta);
                if let Some(x0) = self.params.get("x0") {
                    p = p.with_x0(Real::parse(x0)?);
                }
                if let Some(r) = self.params.get("relabel") {
                    let (a, b) = r
                        .split_once(',')
                        .ok_or_else(|| Error::Domain("relabel needs two tokens a,b".into()))?;
                    p = p.relabeled(a.trim(), b.trim());
                }
                sturmian(p)
            }
            "periodic" => {
                let c = self.params.get("cycle").ok_or_else(|| Error::Domain("periodic needs cycle=…".into()))?;
                periodic_from_str(c)
            }
            "two-tails" => Ok(two_tails()),
            "recurrent" => {
                let s = make_schedule(self.get("j", 2)?, 0, &self.growth()?, self.get("margin", 1)?)?;
                recurrent_sharp_family(&s)
            }
            "stitched" => {
                let (j, i) = (self.get("j", 2)?, self.get("i", 1)?);
                let s = make_schedule(j, i, &self.growth()?, self.get("margin", 1)?)?;
                Ok(stitched_family(&s, &default_sturmians(i))?.sequence)
            }
            "transitive" => transitive_family_with_margin(self.get("j", 3)?, &self.growth()?, self.get("margin", 1)?),
            "nonrecurrent" => {
                let n: u64 = self.get("N", 10)?;
                let case = match self.params.get("case").map(String::as_str).unwrap_or("i1") {
                    "i1" => match self.params.get("beta") {
                        Some(b) => NonrecurrentCase::I1 { beta: Real::parse(b)? },
                        None => NonrecurrentCase::i1_default(n as i64),
                    },
                    "i2" => {
                        let d = NonrecurrentCase::i2_default(n as i64);
                        let (d1, d2) = match d {
                            NonrecurrentCase::I2 { beta1, beta2 } => (beta1, beta2),
                            _ => unreachable!(),
                        };
                        let b1 = self.params.get("beta1").map(|b| Real::parse(b)).transpose()?.unwrap_or(d1);
                        let b2 = self.params.get("beta2").map(|b| Real::parse(b)).transpose()?.unwrap_or(d2);
                        NonrecurrentCase::I2 { beta1: b1, beta2: b2 }
                    }
                    other => return domain(format!("unknown case {other:?}")),
                };
                nonrecurrent_example(&case, n)
            }
            "staircase" => Ok(staircase()),
            other => domain(format!("unknown family {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_builds() {
        for (name, _) in FAMILIES {
            let spec = if *name == "periodic" { FamilySpec::new(name).with("cycle", "01") } else { FamilySpec::new(name) };
            let x = spec.build().unwrap();
            x.window(0, 50).unwrap();
        }
        assert!(FamilySpec::new("nope").build().is_err());
    }
}
