//! JSON form of [`ValuedSet`]. Integers and rationals travel as strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AmbientLattice, Element, TableLattice, Valuation, ValuedSet};
use crate::error::{Error, Result};
use crate::poset::{Poset, PosetJson};
use crate::rational::{format_rational, parse_positive, parse_rational};

/// A named function (`"N"`, `"1/N"`, `"phi"`, ...) or explicit values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FSpec {
    Name(String),
    /// One value per ambient node, in input index order (abstract ambient).
    Values(Vec<String>),
    /// Values keyed by integer (divisor ambient).
    Map(BTreeMap<String, String>),
}

impl Default for FSpec {
    fn default() -> Self {
        FSpec::Name("N".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ambient", rename_all = "lowercase")]
pub enum ValuedSetJson {
    Divisor {
        elements: Vec<String>,
        #[serde(default)]
        f: FSpec,
    },
    Abstract {
        poset: PosetJson,
        meet: Vec<Vec<usize>>,
        join: Vec<Vec<usize>>,
        /// Node indices forming `S`; all nodes when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elements: Option<Vec<usize>>,
        f: FSpec,
    },
}

impl ValuedSetJson {
    pub fn into_valued_set(self) -> Result<ValuedSet> {
        match self {
            ValuedSetJson::Divisor { elements, f } => {
                let ints = elements
                    .iter()
                    .map(|s| parse_positive(s))
                    .collect::<Result<Vec<_>>>()?;
                let f = match f {
                    FSpec::Name(name) => Valuation::parse(&name)?,
                    FSpec::Map(m) => Valuation::Table(
                        m.iter()
                            .map(|(k, v)| {
                                Ok((Element::Int(parse_positive(k)?), parse_rational(v)?))
                            })
                            .collect::<Result<_>>()?,
                    ),
                    FSpec::Values(_) => {
                        return Err(Error::Parse(
                            "divisor sets take a named f or a value map".into(),
                        ))
                    }
                };
                ValuedSet::divisor(&ints, f)
            }
            ValuedSetJson::Abstract {
                poset,
                meet,
                join,
                elements,
                f,
            } => {
                let p = Poset::from_json(&poset)?;
                let n = p.len();
                let origin = p.origin().to_vec();
                let mut position = vec![0; n];
                for (new, &old) in origin.iter().enumerate() {
                    position[old] = new;
                }
                let remap = |table: &[Vec<usize>]| -> Result<Vec<Vec<usize>>> {
                    if table.len() != n || table.iter().any(|r| r.len() != n) {
                        return Err(Error::Shape(format!("tables must be {n}x{n}")));
                    }
                    origin
                        .iter()
                        .map(|&a| {
                            origin
                                .iter()
                                .map(|&b| {
                                    let v = table[a][b];
                                    position.get(v).copied().ok_or(Error::Index { index: v, n })
                                })
                                .collect()
                        })
                        .collect()
                };
                let lattice = TableLattice::new(p, remap(&meet)?, remap(&join)?)?;
                let f = match f {
                    FSpec::Name(name) => Valuation::parse(&name)?,
                    FSpec::Values(vals) => {
                        if vals.len() != n {
                            return Err(Error::Shape(format!(
                                "{} values for {n} nodes",
                                vals.len()
                            )));
                        }
                        Valuation::Table(
                            (0..n)
                                .map(|k| Ok((Element::Node(k), parse_rational(&vals[origin[k]])?)))
                                .collect::<Result<_>>()?,
                        )
                    }
                    FSpec::Map(_) => {
                        return Err(Error::Parse("abstract sets take a value list".into()))
                    }
                };
                let elems = match elements {
                    Some(idx) => idx
                        .iter()
                        .map(|&i| {
                            position
                                .get(i)
                                .map(|&k| Element::Node(k))
                                .ok_or(Error::Index { index: i, n })
                        })
                        .collect::<Result<Vec<_>>>()?,
                    None => (0..n).map(Element::Node).collect(),
                };
                ValuedSet::new(Arc::new(AmbientLattice::Abstract(lattice)), elems, f)
            }
        }
    }

    pub fn from_valued_set(s: &ValuedSet) -> Result<Self> {
        match &**s.ambient() {
            AmbientLattice::Divisor => {
                let f = match s.f() {
                    Valuation::Table(t) => FSpec::Map(
                        t.iter()
                            .map(|(k, v)| (k.to_string(), format_rational(v)))
                            .collect(),
                    ),
                    other => FSpec::Name(other.describe()),
                };
                if matches!(&f, FSpec::Name(n) if n == "multiplicative") {
                    return Err(Error::Shape(
                        "tabulated multiplicative functions have no JSON name".into(),
                    ));
                }
                Ok(ValuedSetJson::Divisor {
                    elements: s.elements().iter().map(|e| e.to_string()).collect(),
                    f,
                })
            }
            AmbientLattice::Abstract(t) => {
                let vals = (0..t.len())
                    .map(|k| s.f().eval(&Element::Node(k)).map(|v| format_rational(&v)))
                    .collect::<Result<Vec<_>>>()?;
                let elements = s
                    .elements()
                    .iter()
                    .map(|e| match e {
                        Element::Node(k) => *k,
                        Element::Int(_) => unreachable!("abstract ambient holds nodes"),
                    })
                    .collect();
                Ok(ValuedSetJson::Abstract {
                    poset: t.poset().to_json(),
                    meet: t.meet_table().to_vec(),
                    join: t.join_table().to_vec(),
                    elements: Some(elements),
                    f: FSpec::Values(vals),
                })
            }
        }
    }
}

impl ValuedSet {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ValuedSetJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.into_valued_set()
    }

    pub fn to_json(&self) -> Result<ValuedSetJson> {
        ValuedSetJson::from_valued_set(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn divisor_round_trip() {
        let text = r#"{"ambient":"divisor","elements":["1","2","3","5","36","230","825","227700"],"f":"N"}"#;
        let s = ValuedSet::from_json_str(text).unwrap();
        assert_eq!(s.len(), 8);
        let back = serde_json::to_string(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, text);
        let default_f =
            ValuedSet::from_json_str(r#"{"ambient":"divisor","elements":["2","1"]}"#).unwrap();
        assert_eq!(default_f.values(), vec![int(1), int(2)]);
    }

    #[test]
    fn abstract_reindexed() {
        // Diamond given with the top first: input index 0 is the top.
        let text = r#"{"ambient":"abstract",
            "poset":{"n":4,"covers":[[1,2],[1,3],[2,0],[3,0]]},
            "meet":[[0,1,2,3],[1,1,1,1],[2,1,2,1],[3,1,1,3]],
            "join":[[0,0,0,0],[0,1,2,3],[0,2,2,0],[0,3,0,3]],
            "f":["4","1","1/2","1/3"]}"#;
        let s = ValuedSet::from_json_str(text).unwrap();
        assert_eq!(s.values(), vec![int(1), ratio(1, 2), ratio(1, 3), int(4)]);
        let again = s.to_json().unwrap().into_valued_set().unwrap();
        assert_eq!(again.values(), s.values());
        assert!(ValuedSet::from_json_str(r#"{"ambient":"divisor","elements":["-1"]}"#).is_err());
        assert!(ValuedSet::from_json_str(r#"{"ambient":"torus","elements":[]}"#).is_err());
    }
}
