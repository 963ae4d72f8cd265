//! JSON catalog of named handlebody-link records.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_presentation, Presentation};
use crate::diagram::parse_diagram;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("catalog JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("record {name}: {reason}")]
    Invalid { name: String, reason: String },
    #[error("duplicate record name {0}")]
    DuplicateName(String),
}

/// Components per genus: entry `i` counts components of genus `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeVector(pub Vec<usize>);

impl TypeVector {
    /// Nonempty, not all zero, no trailing zero.
    pub fn is_well_formed(&self) -> bool {
        matches!(self.0.last(), Some(&n) if n > 0)
    }

    pub fn genus(&self) -> usize {
        self.0.iter().enumerate().map(|(i, &n)| (i + 1) * n).sum()
    }

    pub fn components(&self) -> usize {
        self.0.iter().sum()
    }

    /// The type of a single component of genus `g`.
    pub fn knot(g: usize) -> Self {
        let mut v = vec![0; g];
        v[g - 1] = 1;
        TypeVector(v)
    }

    /// Type of a one-sum: components merge, so one component of each
    /// factor's is replaced by a component of their combined genus.
    pub fn one_sum(&self, a: usize, other: &TypeVector, b: usize) -> Option<TypeVector> {
        if self.0.get(a.wrapping_sub(1)).copied().unwrap_or(0) == 0
            || other.0.get(b.wrapping_sub(1)).copied().unwrap_or(0) == 0
        {
            return None;
        }
        let len = self.0.len().max(other.0.len()).max(a + b);
        let mut v = vec![0usize; len];
        for side in [&self.0, &other.0] {
            for (i, &n) in side.iter().enumerate() {
                v[i] += n;
            }
        }
        v[a - 1] -= 1;
        v[b - 1] -= 1;
        v[a + b - 1] += 1;
        while v.last() == Some(&0) {
            v.pop();
        }
        Some(TypeVector(v))
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// What is known about the rank of the knot group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankAssertion {
    Exact(usize),
    Max(usize),
}

impl RankAssertion {
    pub fn bound(self) -> usize {
        match self {
            RankAssertion::Exact(r) | RankAssertion::Max(r) => r,
        }
    }
}

impl fmt::Display for RankAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankAssertion::Exact(r) => write!(f, "{r}"),
            RankAssertion::Max(r) => write!(f, "<={r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsValues {
    #[serde(rename = "A4", default, skip_serializing_if = "Option::is_none")]
    pub a4: Option<u64>,
    #[serde(rename = "A5", default, skip_serializing_if = "Option::is_none")]
    pub a5: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRecord {
    pub name: String,
    #[serde(rename = "type")]
    pub type_vector: TypeVector,
    pub rank: RankAssertion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<KsValues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl LinkRecord {
    pub fn new(name: impl Into<String>, type_vector: TypeVector, rank: RankAssertion) -> Self {
        LinkRecord {
            name: name.into(),
            type_vector,
            rank,
            presentation: None,
            diagram: None,
            ks: None,
            notes: None,
        }
    }

    pub fn genus(&self) -> usize {
        self.type_vector.genus()
    }

    fn invalid(&self, reason: impl Into<String>) -> CatalogError {
        CatalogError::Invalid {
            name: self.name.clone(),
            reason: reason.into(),
        }
    }

    /// The knot group, from the presentation text or else the diagram.
    pub fn group_presentation(&self) -> Result<Option<Presentation>, CatalogError> {
        if let Some(text) = &self.presentation {
            let p =
                parse_presentation(text).map_err(|e| self.invalid(format!("presentation: {e}")))?;
            return Ok(Some(p));
        }
        if let Some(text) = &self.diagram {
            let d = parse_diagram(text).map_err(|e| self.invalid(format!("diagram: {e}")))?;
            return Ok(Some(d.wirtinger()));
        }
        Ok(None)
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.name.trim().is_empty() {
            return Err(self.invalid("empty name"));
        }
        if !self.type_vector.is_well_formed() {
            return Err(self.invalid(format!("malformed type vector {}", self.type_vector)));
        }
        let g = self.genus();
        let r = self.rank.bound();
        if r < g {
            return Err(self.invalid(format!("rank {} is below the genus {g}", self.rank)));
        }
        if let Some(text) = &self.presentation {
            let p =
                parse_presentation(text).map_err(|e| self.invalid(format!("presentation: {e}")))?;
            let ab = p.abelianization();
            if !ab.is_free_abelian() || ab.free_rank != g {
                return Err(self.invalid(format!(
                    "presentation abelianizes to rank {} with torsion {:?}; expected free abelian of rank {g}",
                    ab.free_rank, ab.torsion
                )));
            }
            if let RankAssertion::Exact(r) = self.rank {
                if r > p.generator_count() {
                    return Err(self.invalid(format!(
                        "rank {r} exceeds the {} generators of the presentation",
                        p.generator_count()
                    )));
                }
            }
        }
        if let Some(text) = &self.diagram {
            let d = parse_diagram(text).map_err(|e| self.invalid(format!("diagram: {e}")))?;
            let (dg, dt) = d.genus_and_type();
            if dt != self.type_vector.0 {
                return Err(self.invalid(format!(
                    "diagram has genus {dg} and type {}, record says {}",
                    TypeVector(dt),
                    self.type_vector
                )));
            }
        }
        Ok(())
    }
}

fn check_all(records: &[LinkRecord]) -> Result<(), CatalogError> {
    let mut names = HashSet::new();
    for r in records {
        r.validate()?;
        if !names.insert(r.name.as_str()) {
            return Err(CatalogError::DuplicateName(r.name.clone()));
        }
    }
    Ok(())
}

pub fn parse_catalog(text: &str) -> Result<Vec<LinkRecord>, CatalogError> {
    let records: Vec<LinkRecord> = serde_json::from_str(text)?;
    check_all(&records)?;
    Ok(records)
}

pub fn catalog_to_json(records: &[LinkRecord]) -> Result<String, CatalogError> {
    check_all(records)?;
    let mut s = serde_json::to_string_pretty(records)?;
    s.push('\n');
    Ok(s)
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<LinkRecord>, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text)
}

pub fn save_catalog(path: impl AsRef<Path>, records: &[LinkRecord]) -> Result<(), CatalogError> {
    let path = path.as_ref();
    let text = catalog_to_json(records)?;
    std::fs::write(path, text).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn published(
        name: &str,
        ty: &[usize],
        rank: RankAssertion,
        a4: u64,
        a5: Option<u64>,
    ) -> LinkRecord {
        let mut r = LinkRecord::new(name, TypeVector(ty.to_vec()), rank);
        r.ks = Some(KsValues { a4: Some(a4), a5 });
        r
    }

    #[test]
    fn accepts_published_rows() {
        published("HK4_1", &[0, 1], RankAssertion::Exact(3), 30, Some(156))
            .validate()
            .unwrap();
        published(
            "HL6_15",
            &[3, 1],
            RankAssertion::Exact(5),
            1242,
            Some(12072),
        )
        .validate()
        .unwrap();
    }

    #[test]
    fn rejects_bad_records() {
        let low = published("x", &[0, 1], RankAssertion::Exact(1), 30, None);
        assert!(matches!(low.validate(), Err(CatalogError::Invalid { .. })));
        for ty in [vec![], vec![0], vec![1, 0]] {
            let r = published("x", &ty, RankAssertion::Exact(3), 30, None);
            assert!(r.validate().is_err(), "{ty:?}");
        }
        let mut torsion = LinkRecord::new("t", TypeVector(vec![1]), RankAssertion::Exact(1));
        torsion.presentation = Some("gens a\nrel aa".into());
        assert!(torsion.validate().is_err());
        let mut many = LinkRecord::new("m", TypeVector(vec![1]), RankAssertion::Exact(3));
        many.presentation = Some("gens a b\nrel aba = bab".into());
        assert!(many.validate().is_err());
        let mut wrong = LinkRecord::new("w", TypeVector(vec![1]), RankAssertion::Exact(2));
        wrong.diagram = Some("arcs 3\nv 1:out 2:out 3:out\nv 3:in 2:in 1:in\n".into());
        assert!(wrong.validate().is_err());
        wrong.type_vector = TypeVector(vec![0, 1]);
        wrong.validate().unwrap();
    }

    #[test]
    fn duplicate_names_rejected() {
        let r = published("HK4_1", &[0, 1], RankAssertion::Exact(3), 30, Some(156));
        let text = serde_json::to_string(&vec![r.clone(), r]).unwrap();
        assert!(matches!(
            parse_catalog(&text),
            Err(CatalogError::DuplicateName(_))
        ));
    }

    #[test]
    fn json_schema_and_round_trip() {
        let text = r#"[
          {"name": "HL5_1", "type": [1,1], "rank": {"max": 4}, "ks": {"A4": 98, "A5": 660}},
          {"name": "trefoil", "type": [1], "rank": {"exact": 2},
           "presentation": "gens a b\nrel aba = bab", "notes": "torus knot"}
        ]"#;
        let records = parse_catalog(text).unwrap();
        assert_eq!(records[0].rank, RankAssertion::Max(4));
        assert_eq!(records[1].ks, None);
        let again = parse_catalog(&catalog_to_json(&records).unwrap()).unwrap();
        assert_eq!(records, again);
        assert!(
            parse_catalog(r#"[{"name":"x","type":[1],"rank":{"exact":1},"bogus":1}]"#).is_err()
        );

        let dir = std::env::temp_dir().join(format!("hlirred-catalog-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        save_catalog(&path, &records).unwrap();
        assert_eq!(load_catalog(&path).unwrap(), records);
        std::fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(
            load_catalog(dir.join("missing.json")),
            Err(CatalogError::Io { .. })
        ));
    }

    #[test]
    fn type_vector_arithmetic() {
        let t = TypeVector(vec![2, 1]);
        assert_eq!((t.genus(), t.components()), (4, 3));
        assert_eq!(TypeVector::knot(3), TypeVector(vec![0, 0, 1]));
        // trivial knot summed onto the genus-1 component of [1,1]
        let sum = TypeVector(vec![1])
            .one_sum(1, &TypeVector(vec![1, 1]), 1)
            .unwrap();
        assert_eq!(sum, TypeVector(vec![0, 2]));
        assert_eq!(sum.genus(), 4);
        assert_eq!(
            TypeVector(vec![1]).one_sum(2, &TypeVector(vec![1]), 1),
            None
        );
        assert_eq!(t.to_string(), "[2,1]");
    }
}
