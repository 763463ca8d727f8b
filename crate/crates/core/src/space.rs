//! Combinatorial description of a homogeneous space `G/H` and the diagonal
//! coordinates of invariant metrics and prescribed tensors.
//!
//! The isotropy summands `m_1, .., m_s` are assumed pairwise inequivalent,
//! so every invariant metric is diagonal, `g = sum x_i Q|m_i`, and every
//! intermediate subalgebra is a sum of summands plus `h`.

use std::collections::BTreeMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index_set::{IndexSet, MAX_SUMMANDS};

/// One ordered triple `(i, j, k)` with its structure constant `[ijk]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderedTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// Fully symmetric table of structure constants `[ijk]`.
///
/// Entries are stored once per sorted multiset; lookups under any
/// permutation agree and absent multisets read as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    s: usize,
    entries: BTreeMap<[usize; 3], f64>,
    dense: Vec<f64>,
    ordered: Vec<OrderedTriple>,
}

impl StructureConstants {
    /// `entries` are 0-based sorted multisets with non-negative values.
    fn from_sorted(s: usize, entries: BTreeMap<[usize; 3], f64>) -> Self {
        let mut dense = vec![0.0; s * s * s];
        let mut ordered = Vec::new();
        for (&[a, b, c], &value) in &entries {
            for [i, j, k] in distinct_permutations([a, b, c]) {
                dense[(i * s + j) * s + k] = value;
                if value != 0.0 {
                    ordered.push(OrderedTriple { i, j, k, value });
                }
            }
        }
        StructureConstants {
            s,
            entries,
            dense,
            ordered,
        }
    }

    pub fn num_summands(&self) -> usize {
        self.s
    }

    /// `[ijk]` for 0-based indices, in any order.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.dense[(i * self.s + j) * self.s + k]
    }

    /// Stored multisets, 0-based and sorted.
    pub fn entries(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        self.entries.iter().map(|(&key, &v)| (key, v))
    }

    /// Every ordered triple with a nonzero constant. Each multiset expands to
    /// 1, 3 or 6 orderings.
    pub fn ordered(&self) -> &[OrderedTriple] {
        &self.ordered
    }

    pub fn is_zero(&self) -> bool {
        self.ordered.is_empty()
    }
}

fn distinct_permutations([a, b, c]: [usize; 3]) -> Vec<[usize; 3]> {
    let mut perms = vec![
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ];
    perms.sort_unstable();
    perms.dedup();
    perms
}

/// Complete description of `G/H`: summand dimensions `d_i`, Killing
/// coefficients `b_i` (with `B|m_i = -b_i Q|m_i`) and structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousSpace {
    name: String,
    dims: Vec<u32>,
    killing: Vec<f64>,
    constants: StructureConstants,
}

impl HomogeneousSpace {
    /// Validates and builds a space. `triples` carry 1-based indices in any
    /// order; each multiset may appear only once.
    pub fn new(
        name: impl Into<String>,
        dims: Vec<u32>,
        killing: Vec<f64>,
        triples: &[([usize; 3], f64)],
    ) -> Result<Self> {
        let s = dims.len();
        validate_dims(&dims)?;
        if killing.len() != s {
            return Err(Error::Schema {
                path: "b".into(),
                message: format!("expected {s} entries, got {}", killing.len()),
            });
        }
        for (n, &b) in killing.iter().enumerate() {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::InvalidValue {
                    path: format!("b[{n}]"),
                    message: format!("Killing coefficient {b} must be finite and non-negative"),
                });
            }
        }
        let mut entries = BTreeMap::new();
        for (n, &(ijk, value)) in triples.iter().enumerate() {
            let path = format!("triples[{n}]");
            if ijk.iter().any(|&i| i == 0 || i > s) {
                return Err(Error::InvalidValue {
                    path,
                    message: format!("indices {ijk:?} must lie in 1..={s}"),
                });
            }
            if !value.is_finite() {
                return Err(Error::InvalidValue {
                    path: path + ".value",
                    message: format!("{value} is not finite"),
                });
            }
            if value < 0.0 {
                return Err(Error::NegativeConstant {
                    path: path + ".value",
                    value,
                });
            }
            let mut key = [ijk[0] - 1, ijk[1] - 1, ijk[2] - 1];
            key.sort_unstable();
            if entries.insert(key, value).is_some() {
                return Err(Error::DuplicateMultiset {
                    path,
                    i: key[0] + 1,
                    j: key[1] + 1,
                    k: key[2] + 1,
                });
            }
        }
        Ok(HomogeneousSpace {
            name: name.into(),
            dims,
            killing,
            constants: StructureConstants::from_sorted(s, entries),
        })
    }

    /// Parses and validates a JSON space document.
    pub fn from_json(document: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(document);
        let doc: SpaceDocument = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: path_or_root(e.path().to_string()),
            message: e.into_inner().to_string(),
        })?;
        doc.into_space()
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Serializes to the JSON document format accepted by [`Self::from_json`].
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("space documents always serialize")
    }

    pub fn to_document(&self) -> SpaceDocument {
        SpaceDocument {
            name: self.name.clone(),
            d: self.dims.iter().map(|&d| i64::from(d)).collect(),
            b: Some(self.killing.iter().map(|&b| Number::Float(b)).collect()),
            triples: self
                .constants
                .entries()
                .map(|([i, j, k], v)| TripleDocument {
                    i: i as i64 + 1,
                    j: j as i64 + 1,
                    k: k as i64 + 1,
                    value: Number::Float(v),
                })
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of isotropy summands `s`.
    pub fn num_summands(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    #[inline]
    pub fn dim(&self, i: usize) -> f64 {
        f64::from(self.dims[i])
    }

    pub fn killing(&self) -> &[f64] {
        &self.killing
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn total_dimension(&self) -> u64 {
        self.dims.iter().map(|&d| u64::from(d)).sum()
    }

    pub fn full_set(&self) -> IndexSet {
        IndexSet::full(self.num_summands())
    }

    /// Checks that `set` is non-empty and inside `{0, .., s-1}`.
    pub fn check_set(&self, set: IndexSet) -> Result<()> {
        if set.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if set.span() > self.num_summands() {
            return Err(Error::IndexOutOfRange {
                set,
                s: self.num_summands(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, got: usize) -> Result<()> {
        if got != self.num_summands() {
            return Err(Error::DimensionMismatch {
                expected: self.num_summands(),
                got,
            });
        }
        Ok(())
    }
}

fn validate_dims(dims: &[u32]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Schema {
            path: "d".into(),
            message: "at least one summand is required".into(),
        });
    }
    if dims.len() > MAX_SUMMANDS {
        return Err(Error::Schema {
            path: "d".into(),
            message: format!("at most {MAX_SUMMANDS} summands are supported"),
        });
    }
    if let Some(n) = dims.iter().position(|&d| d < 1) {
        return Err(Error::InvalidValue {
            path: format!("d[{n}]"),
            message: "summand dimension must be at least 1".into(),
        });
    }
    let total: u64 = dims.iter().map(|&d| u64::from(d)).sum();
    if total < 3 {
        return Err(Error::TotalDimensionTooSmall { total });
    }
    Ok(())
}

fn path_or_root(path: String) -> String {
    if path == "." { "<root>".into() } else { path }
}

/// `sum over i in set of d_i z_i`, the `Q`-trace of `T` restricted to the
/// summands in `set`.
pub fn trace_q_restricted(
    space: &HomogeneousSpace,
    z: &TensorCoefficients,
    set: IndexSet,
) -> Result<f64> {
    space.check_len(z.len())?;
    space.check_set(set)?;
    Ok(set.iter().map(|i| space.dim(i) * z[i]).sum())
}

/// A real number in a space document: a JSON number or a string such as
/// `"7/2"`, `"-0.5"` or `"3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn resolve(&self, path: &str) -> Result<f64> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(text) => parse_rational(text).ok_or_else(|| Error::InvalidValue {
                path: path.into(),
                message: format!("cannot parse {text:?} as a number or rational p/q"),
            }),
        }
    }
}

/// Parses `"p/q"` or a plain decimal. The quotient is formed once in double
/// precision.
pub fn parse_rational(text: &str) -> Option<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            if q == 0.0 {
                return None;
            }
            p / q
        }
        None => text.parse().ok()?,
    };
    value.is_finite().then_some(value)
}

/// On-disk form of a [`HomogeneousSpace`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub name: String,
    pub d: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Number>>,
    pub triples: Vec<TripleDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDocument {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub value: Number,
}

impl SpaceDocument {
    pub fn into_space(self) -> Result<HomogeneousSpace> {
        let mut dims = Vec::with_capacity(self.d.len());
        for (n, &d) in self.d.iter().enumerate() {
            let d = u32::try_from(d).ok().filter(|&d| d >= 1).ok_or_else(|| Error::InvalidValue {
                path: format!("d[{n}]"),
                message: format!("summand dimension {d} must be an integer >= 1"),
            })?;
            dims.push(d);
        }
        validate_dims(&dims)?;
        let s = dims.len();
        let killing = match &self.b {
            None => vec![1.0; s],
            Some(b) => b
                .iter()
                .enumerate()
                .map(|(n, v)| v.resolve(&format!("b[{n}]")))
                .collect::<Result<_>>()?,
        };
        let mut triples = Vec::with_capacity(self.triples.len());
        for (n, t) in self.triples.iter().enumerate() {
            let path = format!("triples[{n}]");
            let idx = [t.i, t.j, t.k];
            if idx.iter().any(|&i| i < 1 || i > s as i64) {
                return Err(Error::InvalidValue {
                    path,
                    message: format!("indices {idx:?} must lie in 1..={s}"),
                });
            }
            if !(t.i <= t.j && t.j <= t.k) {
                return Err(Error::InvalidValue {
                    path,
                    message: format!("indices {idx:?} must satisfy i <= j <= k"),
                });
            }
            let value = t.value.resolve(&format!("{path}.value"))?;
            triples.push(([t.i as usize, t.j as usize, t.k as usize], value));
        }
        HomogeneousSpace::new(self.name, dims, killing, &triples)
    }
}

fn check_positive(what: &'static str, values: &[f64]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NotPositive { what, index, value });
        }
    }
    Ok(())
}

macro_rules! positive_coefficients {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Serialize)]
        #[serde(transparent)]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(values: Vec<f64>) -> Result<Self> {
                check_positive($what, &values)?;
                Ok($name(values))
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }
        }

        impl Deref for $name {
            type Target = [f64];

            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl TryFrom<Vec<f64>> for $name {
            type Error = Error;

            fn try_from(values: Vec<f64>) -> Result<Self> {
                $name::new(values)
            }
        }
    };
}

positive_coefficients!(
    /// Coefficients `x_i > 0` of a diagonal metric `g = sum x_i Q|m_i`.
    MetricCoefficients,
    "x"
);

positive_coefficients!(
    /// Coefficients `z_i > 0` of the prescribed tensor `T = sum z_i Q|m_i`.
    TensorCoefficients,
    "z"
);

#[cfg(test)]
mod tests {
    use super::*;

    const G2: &str = r#"{
        "name": "G2_U2_long",
        "d": [4, 2, 4],
        "b": [1, 1, 1],
        "triples": [
            {"i": 1, "j": 2, "k": 3, "value": "1/2"},
            {"i": 1, "j": 1, "k": 2, "value": "2/3"}
        ]
    }"#;

    #[test]
    fn loads_rational_constants() {
        let space = HomogeneousSpace::from_json(G2).unwrap();
        assert_eq!(space.dims(), &[4, 2, 4]);
        let c = space.constants();
        assert_eq!(c.get(0, 1, 2), 0.5);
        assert_eq!(c.get(2, 0, 1), 0.5);
        assert_eq!(c.get(1, 0, 0), 2.0 / 3.0);
        assert_eq!(c.get(0, 0, 0), 0.0);
        // 6 orderings of {1,2,3} plus 3 of {1,1,2}
        assert_eq!(c.ordered().len(), 9);
    }

    #[test]
    fn negative_constant_is_rejected() {
        let doc = r#"{"name":"x","d":[4,2,4],"triples":[{"i":1,"j":2,"k":3,"value":-0.5}]}"#;
        let err = HomogeneousSpace::from_json(doc).unwrap_err();
        assert!(err.to_string().contains("negative structure constant"), "{err}");
        assert!(err.to_string().contains("triples[0].value"), "{err}");
    }

    #[test]
    fn duplicate_multiset_is_rejected() {
        let doc = r#"{"name":"x","d":[4,2,4],"triples":[
            {"i":1,"j":2,"k":3,"value":"1/2"},
            {"i":1,"j":2,"k":3,"value":"1/2"}]}"#;
        let err = HomogeneousSpace::from_json(doc).unwrap_err();
        assert!(err.to_string().contains("duplicate multiset"), "{err}");
        assert!(err.to_string().contains("triples[1]"), "{err}");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let err = HomogeneousSpace::from_json(r#"{"name":"x","d":[4,"a"],"triples":[]}"#)
            .unwrap_err();
        assert!(matches!(&err, Error::Schema { path, .. } if path == "d[1]"), "{err}");

        let err = HomogeneousSpace::from_json(r#"{"name":"x","d":[4,0],"triples":[]}"#)
            .unwrap_err();
        assert!(matches!(&err, Error::InvalidValue { path, .. } if path == "d[1]"), "{err}");

        let err = HomogeneousSpace::from_json(r#"{"name":"x","d":[1,1],"triples":[]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::TotalDimensionTooSmall { total: 2 }));

        let err = HomogeneousSpace::from_json(
            r#"{"name":"x","d":[4,2],"triples":[{"i":2,"j":1,"k":2,"value":1}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("i <= j <= k"), "{err}");

        let err = HomogeneousSpace::from_json(r#"{"name":"x","d":[4],"triples":[],"extra":1}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Schema { .. }));
    }

    #[test]
    fn killing_defaults_to_one() {
        let space =
            HomogeneousSpace::from_json(r#"{"name":"x","d":[4],"triples":[]}"#).unwrap();
        assert_eq!(space.killing(), &[1.0]);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("7/2"), Some(3.5));
        assert_eq!(parse_rational(" -1 / 4 "), Some(-0.25));
        assert_eq!(parse_rational("0.125"), Some(0.125));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn coefficients_must_be_positive() {
        assert!(TensorCoefficients::new(vec![1.0, 0.0]).is_err());
        assert!(MetricCoefficients::new(vec![1.0, f64::NAN]).is_err());
        assert!(MetricCoefficients::new(vec![2.0]).is_ok());
    }
}
