//! Divisibility criteria for reducibility and the irreducibility verdict.
//!
//! Every criterion is a necessary condition for a specific kind of
//! factorization. A link that fails all criteria of some applicable rule
//! alternative is irreducible; otherwise nothing is concluded.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::homcount::{Engine, HomError};
use crate::ksinv::Target;
use crate::presentation::catalog::{CatalogError, KsValues, LinkRecord, RankAssertion, TypeVector};

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("malformed type vector {0}")]
    MalformedType(TypeVector),
    #[error("rank {rank} is below the genus {genus}")]
    RankBelowGenus { rank: RankAssertion, genus: usize },
    #[error("{id} needs genus at least {min}, got {genus}")]
    GenusTooSmall {
        id: CriterionId,
        genus: u32,
        min: u32,
    },
    #[error("criterion dividend overflows")]
    Overflow,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CriterionId {
    C11,
    C12,
    C13,
    C14,
}

impl CriterionId {
    pub const ALL: [CriterionId; 4] = [
        CriterionId::C11,
        CriterionId::C12,
        CriterionId::C13,
        CriterionId::C14,
    ];

    /// The group whose ks-invariant the criterion reads.
    pub fn target(self) -> Target {
        match self {
            CriterionId::C14 => Target::A5,
            _ => Target::A4,
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CriterionId::C11 => "C11",
            CriterionId::C12 => "C12",
            CriterionId::C13 => "C13",
            CriterionId::C14 => "C14",
        };
        f.write_str(s)
    }
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl Serialize for CriterionId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_display(self, s)
    }
}

/// One divisibility test: does `modulus` divide `dividend`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// `None` for criteria without a parameter.
    pub k: Option<u32>,
    #[serde(serialize_with = "ser_display")]
    pub dividend: u128,
    pub modulus: u64,
    pub remainder: u64,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.k {
            write!(f, "k={k}: ")?;
        }
        write!(
            f,
            "{} mod {} = {}",
            self.dividend, self.modulus, self.remainder
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: CriterionId,
    pub satisfied: bool,
    /// Values of `k` achieving divisibility; `[0]` for parameterless
    /// criteria that hold.
    pub witnesses: Vec<u32>,
    pub trail: Vec<Step>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.satisfied {
            // smallest witness only; the full list is in `witnesses`
            let k = self
                .trail
                .iter()
                .find(|s| s.remainder == 0)
                .and_then(|s| s.k)
                .map_or("\u{2014}".to_string(), |k| k.to_string());
            write!(f, "{} satisfied k={k}", self.id)
        } else {
            let steps: Vec<String> = self.trail.iter().map(Step::to_string).collect();
            write!(f, "{} failed: {}", self.id, steps.join(", "))
        }
    }
}

fn pow(base: u128, exp: u32) -> Result<u128, CriteriaError> {
    base.checked_pow(exp).ok_or(CriteriaError::Overflow)
}

/// Divisibility of `ks + a*3^e + b*4^e + c*5^e` by `m`, per k.
fn run(
    id: CriterionId,
    ks: u64,
    e: u32,
    terms: impl Iterator<Item = (Option<u32>, u64, u128, u128, u128)>,
) -> Result<CriterionResult, CriteriaError> {
    let (p3, p4, p5) = (pow(3, e)?, pow(4, e)?, pow(5, e)?);
    let mut trail = Vec::new();
    let mut witnesses = Vec::new();
    for (k, modulus, a, b, c) in terms {
        let dividend = [a.checked_mul(p3), b.checked_mul(p4), c.checked_mul(p5)]
            .into_iter()
            .try_fold(ks as u128, |acc, t| acc.checked_add(t?))
            .ok_or(CriteriaError::Overflow)?;
        let remainder = (dividend % modulus as u128) as u64;
        if remainder == 0 {
            witnesses.push(k.unwrap_or(0));
        }
        trail.push(Step {
            k,
            dividend,
            modulus,
            remainder,
        });
    }
    Ok(CriterionResult {
        id,
        satisfied: !witnesses.is_empty(),
        witnesses,
        trail,
    })
}

fn need_genus(id: CriterionId, g: u32, min: u32) -> Result<(), CriteriaError> {
    if g < min {
        return Err(CriteriaError::GenusTooSmall { id, genus: g, min });
    }
    Ok(())
}

/// Trivial knot factor, A4: `12 | ks + 6*3^(g-1) + 2*4^(g-1)`.
pub fn c11(ks_a4: u64, g: u32) -> Result<CriterionResult, CriteriaError> {
    need_genus(CriterionId::C11, g, 1)?;
    run(
        CriterionId::C11,
        ks_a4,
        g - 1,
        std::iter::once((None, 12, 6, 2, 0)),
    )
}

/// 2-generator knot factor, A4:
/// `12+24k | ks + (6+16k)*3^(g-1) + (2+6k)*4^(g-1)` for some `k` in 0..=1.
pub fn c12(ks_a4: u64, g: u32) -> Result<CriterionResult, CriteriaError> {
    need_genus(CriterionId::C12, g, 1)?;
    let terms = (0..=1u32).map(|k| {
        let k128 = k as u128;
        (Some(k), 12 + 24 * k as u64, 6 + 16 * k128, 2 + 6 * k128, 0)
    });
    run(CriterionId::C12, ks_a4, g - 1, terms)
}

/// 2-generator link factor, A4:
/// `48+24k | ks + (26+16k)*3^(g-2) + (8+6k)*4^(g-2)` for some `k` in 0..=4.
pub fn c13(ks_a4: u64, g: u32) -> Result<CriterionResult, CriteriaError> {
    need_genus(CriterionId::C13, g, 2)?;
    let terms = (0..=4u32).map(|k| {
        let k128 = k as u128;
        (Some(k), 48 + 24 * k as u64, 26 + 16 * k128, 8 + 6 * k128, 0)
    });
    run(CriterionId::C13, ks_a4, g - 2, terms)
}

/// Trivial knot factor, A5: `60 | ks + 19*3^(g-1) + 14*4^(g-1) + 22*5^(g-1)`.
pub fn c14(ks_a5: u64, g: u32) -> Result<CriterionResult, CriteriaError> {
    need_genus(CriterionId::C14, g, 1)?;
    run(
        CriterionId::C14,
        ks_a5,
        g - 1,
        std::iter::once((None, 60, 19, 14, 22)),
    )
}

pub fn check(id: CriterionId, ks: u64, g: u32) -> Result<CriterionResult, CriteriaError> {
    match id {
        CriterionId::C11 => c11(ks, g),
        CriterionId::C12 => c12(ks, g),
        CriterionId::C13 => c13(ks, g),
        CriterionId::C14 => c14(ks, g),
    }
}

/// A disjunction of alternatives; an alternative holds when every
/// criterion in it fails.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub alternatives: Vec<BTreeSet<CriterionId>>,
}

impl Rule {
    fn from_lists(lists: &[&[CriterionId]]) -> Rule {
        Rule {
            alternatives: lists.iter().map(|l| l.iter().copied().collect()).collect(),
        }
        .simplified()
    }

    /// Drops alternatives containing another alternative, then sorts.
    fn simplified(mut self) -> Rule {
        self.alternatives
            .sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        self.alternatives.dedup();
        let mut kept: Vec<BTreeSet<CriterionId>> = Vec::new();
        for alt in self.alternatives {
            if !kept.iter().any(|k| k.is_subset(&alt)) {
                kept.push(alt);
            }
        }
        kept.sort();
        Rule { alternatives: kept }
    }

    /// Both rules must hold.
    pub fn and(&self, other: &Rule) -> Rule {
        let mut alternatives = Vec::new();
        for a in &self.alternatives {
            for b in &other.alternatives {
                alternatives.push(a.union(b).copied().collect());
            }
        }
        Rule { alternatives }.simplified()
    }

    pub fn criteria(&self) -> BTreeSet<CriterionId> {
        self.alternatives.iter().flatten().copied().collect()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .alternatives
            .iter()
            .map(|alt| {
                let fails: Vec<String> = alt.iter().map(|c| format!("fail({c})")).collect();
                if alt.len() > 1 && self.alternatives.len() > 1 {
                    format!("({})", fails.join(" AND "))
                } else {
                    fails.join(" AND ")
                }
            })
            .collect();
        f.write_str(&parts.join(" OR "))
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_display(self, s)
    }
}

/// Outcome of a rule lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dispatch {
    Rule(Rule),
    Unavailable(String),
}

use CriterionId::{C11, C12, C13, C14};

fn rule_for_rank(tv: &TypeVector, r: usize) -> Option<Rule> {
    let g = tv.genus();
    let extra = r.checked_sub(g)?;
    if tv.components() == 1 {
        // one component of genus g
        return match (g, extra) {
            (g, 0) if g >= 2 => Some(Rule::from_lists(&[&[C11, C14]])),
            (2 | 3, 1) => Some(Rule::from_lists(&[&[C11], &[C14]])),
            (2 | 3, 2) => Some(Rule::from_lists(&[&[C11, C12]])),
            _ => None,
        };
    }
    let rule: &[&[CriterionId]] = match (tv.0.as_slice(), extra) {
        ([1, 1] | [0, 2] | [1, 0, 1] | [0, 1, 1], 0) => &[&[C11], &[C14]],
        ([1, 1] | [0, 2], 1) => &[&[C11, C12]],
        ([1, 0, 1] | [2, 1], 1) => &[&[C11, C12, C13]],
        ([2, 1] | [1, 2] | [2, 0, 1] | [3, 1], 0) => &[&[C11, C13]],
        _ => return None,
    };
    Some(Rule::from_lists(rule))
}

/// The criteria combination certifying irreducibility for a link of the
/// given type and rank. An upper bound on the rank requires the rules for
/// every possible rank to hold at once.
pub fn dispatch(tv: &TypeVector, rank: RankAssertion) -> Result<Dispatch, CriteriaError> {
    if !tv.is_well_formed() {
        return Err(CriteriaError::MalformedType(tv.clone()));
    }
    let g = tv.genus();
    if rank.bound() < g {
        return Err(CriteriaError::RankBelowGenus { rank, genus: g });
    }
    let ranks = match rank {
        RankAssertion::Exact(r) => r..=r,
        RankAssertion::Max(b) => g..=b,
    };
    let mut acc: Option<Rule> = None;
    for r in ranks {
        match rule_for_rank(tv, r) {
            Some(rule) => acc = Some(acc.map_or(rule.clone(), |a| a.and(&rule))),
            None => {
                return Ok(Dispatch::Unavailable(format!(
                    "no rule for type {tv} at rank {r} (genus {g})"
                )))
            }
        }
    }
    Ok(Dispatch::Rule(acc.expect("nonempty rank range")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    Irreducible,
    Inconclusive,
    RuleUnavailable,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::Irreducible => "Irreducible",
            Conclusion::Inconclusive => "Inconclusive",
            Conclusion::RuleUnavailable => "RuleUnavailable",
        })
    }
}

/// Per-group table mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    /// The group's criteria alone certify irreducibility.
    Check,
    /// The group's criteria apply but are satisfied.
    Question,
    NotApplicable,
    /// The group's criteria apply but its invariant is unknown.
    Missing,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Check => "\u{2713}",
            Mark::Question => "?",
            Mark::NotApplicable => "n.a.",
            Mark::Missing => "-",
        })
    }
}

impl Serialize for Mark {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_display(self, s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub conclusion: Conclusion,
    #[serde(serialize_with = "ser_display")]
    pub type_vector: TypeVector,
    #[serde(serialize_with = "ser_display")]
    pub rank: RankAssertion,
    pub genus: usize,
    pub rule: Option<Rule>,
    pub results: Vec<CriterionResult>,
    pub a4_mark: Mark,
    pub a5_mark: Mark,
    /// Why no conclusion could be drawn, for `RuleUnavailable`.
    pub reason: Option<String>,
}

impl Verdict {
    pub fn result(&self, id: CriterionId) -> Option<&CriterionResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn mark(&self, target: Target) -> Mark {
        match target {
            Target::A4 => self.a4_mark,
            Target::A5 => self.a5_mark,
        }
    }

    /// One-line summary, e.g.
    /// `Irreducible (C11 failed: 56 mod 12 = 8; C14 failed: 379 mod 60 = 19)`.
    pub fn summary(&self) -> String {
        let details: Vec<String> = match (&self.reason, self.results.is_empty()) {
            (Some(reason), true) => vec![reason.clone()],
            (Some(reason), false) => self
                .results
                .iter()
                .map(CriterionResult::to_string)
                .chain(std::iter::once(reason.clone()))
                .collect(),
            (None, _) => self
                .results
                .iter()
                .map(CriterionResult::to_string)
                .collect(),
        };
        format!("{} ({})", self.conclusion, details.join("; "))
    }
}

fn column_mark(rule: &Rule, target: Target, failed: &dyn Fn(CriterionId) -> Option<bool>) -> Mark {
    let alts: Vec<&BTreeSet<CriterionId>> = rule
        .alternatives
        .iter()
        .filter(|alt| alt.iter().all(|c| c.target() == target))
        .collect();
    if alts.is_empty() {
        return Mark::NotApplicable;
    }
    let mut missing = false;
    for alt in alts {
        let states: Vec<Option<bool>> = alt.iter().map(|&c| failed(c)).collect();
        if states.iter().all(|s| *s == Some(true)) {
            return Mark::Check;
        }
        missing |= states.iter().any(Option::is_none);
    }
    if missing {
        Mark::Missing
    } else {
        Mark::Question
    }
}

/// Applies the dispatch rule to known invariants.
///
/// An alternative whose criteria need a missing invariant is skipped; if no
/// evaluable alternative certifies irreducibility and some were skipped, the
/// verdict is `RuleUnavailable` rather than `Inconclusive`.
pub fn evaluate(
    tv: &TypeVector,
    rank: RankAssertion,
    ks: KsValues,
) -> Result<Verdict, CriteriaError> {
    let genus = tv.genus();
    let mut verdict = Verdict {
        conclusion: Conclusion::RuleUnavailable,
        type_vector: tv.clone(),
        rank,
        genus,
        rule: None,
        results: Vec::new(),
        a4_mark: Mark::NotApplicable,
        a5_mark: Mark::NotApplicable,
        reason: None,
    };
    let rule = match dispatch(tv, rank)? {
        Dispatch::Rule(rule) => rule,
        Dispatch::Unavailable(reason) => {
            verdict.reason = Some(reason);
            return Ok(verdict);
        }
    };
    let g = genus as u32;
    let mut missing = BTreeSet::new();
    for id in rule.criteria() {
        let value = match id.target() {
            Target::A4 => ks.a4,
            Target::A5 => ks.a5,
        };
        match value {
            Some(v) => verdict.results.push(check(id, v, g)?),
            None => {
                missing.insert(id.target());
            }
        }
    }
    let results = verdict.results.clone();
    let failed = |id: CriterionId| results.iter().find(|r| r.id == id).map(|r| !r.satisfied);
    verdict.a4_mark = column_mark(&rule, Target::A4, &failed);
    verdict.a5_mark = column_mark(&rule, Target::A5, &failed);
    let certified = rule
        .alternatives
        .iter()
        .any(|alt| alt.iter().all(|&c| failed(c) == Some(true)));
    verdict.conclusion = if certified {
        Conclusion::Irreducible
    } else if !missing.is_empty() {
        let names: Vec<String> = missing.iter().map(|t| format!("ks_{t}")).collect();
        verdict.reason = Some(format!("missing {}", names.join(" and ")));
        Conclusion::RuleUnavailable
    } else {
        Conclusion::Inconclusive
    };
    verdict.rule = Some(rule);
    Ok(verdict)
}

/// The record's ks values: published values where given, otherwise
/// computed from its presentation or diagram when one is attached.
pub fn resolve_ks(record: &LinkRecord, engine: &Engine) -> Result<KsValues, CriteriaError> {
    let mut ks = record.ks.unwrap_or_default();
    if ks.a4.is_some() && ks.a5.is_some() {
        return Ok(ks);
    }
    if let Some(p) = record.group_presentation()? {
        if ks.a4.is_none() {
            ks.a4 = Some(engine.ks_burnside(&p, &Target::A4.group())?);
        }
        if ks.a5.is_none() {
            ks.a5 = Some(engine.ks_burnside(&p, &Target::A5.group())?);
        }
    }
    Ok(ks)
}

pub fn verdict(record: &LinkRecord, ks: KsValues) -> Result<Verdict, CriteriaError> {
    evaluate(&record.type_vector, record.rank, ks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(v: &[usize]) -> TypeVector {
        TypeVector(v.to_vec())
    }

    fn rule(lists: &[&[CriterionId]]) -> Dispatch {
        Dispatch::Rule(Rule::from_lists(lists))
    }

    fn ks(a4: u64, a5: Option<u64>) -> KsValues {
        KsValues { a4: Some(a4), a5 }
    }

    #[test]
    fn c11_examples() {
        let r = c11(30, 2).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.trail[0].dividend, 56);
        assert_eq!(r.trail[0].remainder, 8);
        assert!(c11(22, 2).unwrap().satisfied);
        let r = c11(310, 4).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.trail[0].dividend, 600);
        assert_eq!(r.witnesses, vec![0]);
    }

    #[test]
    fn c12_examples() {
        let r = c12(22, 2).unwrap();
        assert!(r.satisfied && r.witnesses.contains(&0));
        let r = c12(30, 2).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.trail[1].dividend, 128);
        assert_eq!(r.trail[1].modulus, 36);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn c13_examples() {
        let r = c13(326, 4).unwrap();
        assert!(!r.satisfied);
        for (k, step) in r.trail.iter().enumerate() {
            assert_eq!(step.dividend, 688 + 240 * k as u128);
            assert_eq!(step.modulus, 48 + 24 * k as u64);
        }
        let r = c13(502, 4).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.trail[0].dividend, 864);
        assert!(r.witnesses.contains(&0));
        assert!(!c13(1242, 5).unwrap().satisfied);
        assert!(matches!(
            c13(4, 1),
            Err(CriteriaError::GenusTooSmall { .. })
        ));
    }

    #[test]
    fn c14_examples() {
        let r = c14(156, 2).unwrap();
        assert_eq!((r.trail[0].dividend, r.trail[0].remainder), (379, 19));
        assert!(!r.satisfied);
        let r = c14(111, 2).unwrap();
        assert_eq!((r.trail[0].dividend, r.trail[0].remainder), (334, 34));
        assert!(c14(77, 2).unwrap().satisfied);
    }

    #[test]
    fn dispatch_examples() {
        let d = |t: &[usize], r| dispatch(&tv(t), r).unwrap();
        assert_eq!(d(&[0, 1], RankAssertion::Exact(3)), rule(&[&[C11], &[C14]]));
        assert_eq!(d(&[0, 1], RankAssertion::Exact(4)), rule(&[&[C11, C12]]));
        assert_eq!(d(&[0, 1], RankAssertion::Exact(2)), rule(&[&[C11, C14]]));
        assert!(matches!(
            d(&[0, 1], RankAssertion::Exact(5)),
            Dispatch::Unavailable(_)
        ));
        assert!(matches!(
            d(&[0, 0, 0, 1], RankAssertion::Exact(5)),
            Dispatch::Unavailable(_)
        ));
        assert!(matches!(
            d(&[1], RankAssertion::Exact(1)),
            Dispatch::Unavailable(_)
        ));
        assert_eq!(d(&[1, 1], RankAssertion::Exact(3)), rule(&[&[C11], &[C14]]));
        assert_eq!(d(&[2, 1], RankAssertion::Exact(4)), rule(&[&[C11, C13]]));
        assert_eq!(
            d(&[2, 1], RankAssertion::Exact(5)),
            rule(&[&[C11, C12, C13]])
        );
        assert!(matches!(
            d(&[0, 1, 1], RankAssertion::Exact(6)),
            Dispatch::Unavailable(_)
        ));
        assert!(matches!(
            dispatch(&tv(&[1, 0]), RankAssertion::Exact(3)),
            Err(CriteriaError::MalformedType(_))
        ));
        assert!(matches!(
            dispatch(&tv(&[0, 1]), RankAssertion::Exact(1)),
            Err(CriteriaError::RankBelowGenus { .. })
        ));
    }

    #[test]
    fn upper_bounds_take_the_conjunction() {
        let d = dispatch(&tv(&[1, 1]), RankAssertion::Max(4)).unwrap();
        assert_eq!(d, rule(&[&[C11, C12]]));
        let d = dispatch(&tv(&[0, 1]), RankAssertion::Max(4)).unwrap();
        assert_eq!(d, rule(&[&[C11, C12, C14]]));
        let d = dispatch(&tv(&[2, 1]), RankAssertion::Max(5)).unwrap();
        assert_eq!(d, rule(&[&[C11, C12, C13]]));
        assert!(matches!(
            dispatch(&tv(&[1, 2]), RankAssertion::Max(6)).unwrap(),
            Dispatch::Unavailable(_)
        ));
    }

    #[test]
    fn rule_display() {
        assert_eq!(
            Rule::from_lists(&[&[C11], &[C14]]).to_string(),
            "fail(C11) OR fail(C14)"
        );
        assert_eq!(
            Rule::from_lists(&[&[C13, C11]]).to_string(),
            "fail(C11) AND fail(C13)"
        );
        assert_eq!(
            Rule::from_lists(&[&[C11, C12], &[C14]]).to_string(),
            "(fail(C11) AND fail(C12)) OR fail(C14)"
        );
    }

    #[test]
    fn verdict_examples() {
        let v = evaluate(&tv(&[0, 1]), RankAssertion::Exact(3), ks(30, Some(156))).unwrap();
        assert_eq!(v.conclusion, Conclusion::Irreducible);
        assert_eq!(
            v.summary(),
            "Irreducible (C11 failed: 56 mod 12 = 8; C14 failed: 379 mod 60 = 19)"
        );
        assert_eq!((v.a4_mark, v.a5_mark), (Mark::Check, Mark::Check));

        let v = evaluate(&tv(&[2, 1]), RankAssertion::Exact(4), ks(310, Some(1841))).unwrap();
        assert_eq!(v.conclusion, Conclusion::Inconclusive);
        assert_eq!(
            (v.a4_mark, v.a5_mark),
            (Mark::Question, Mark::NotApplicable)
        );

        let v = evaluate(&tv(&[2, 1]), RankAssertion::Exact(4), ks(502, Some(5883))).unwrap();
        assert_eq!(
            v.summary(),
            "Inconclusive (C11 satisfied k=\u{2014}; C13 satisfied k=0)"
        );
        assert_eq!(v.result(C13).unwrap().witnesses, vec![0, 2]);

        let v = evaluate(&tv(&[3, 1]), RankAssertion::Exact(5), ks(1242, Some(12072))).unwrap();
        assert_eq!(v.conclusion, Conclusion::Irreducible);

        let v = evaluate(&tv(&[0, 1]), RankAssertion::Exact(3), ks(22, Some(111))).unwrap();
        assert_eq!(v.conclusion, Conclusion::Irreducible);
        assert_eq!((v.a4_mark, v.a5_mark), (Mark::Question, Mark::Check));
    }

    #[test]
    fn missing_invariants() {
        let only_a4 = KsValues {
            a4: Some(22),
            a5: None,
        };
        let v = evaluate(&tv(&[0, 1]), RankAssertion::Exact(3), only_a4).unwrap();
        assert_eq!(v.conclusion, Conclusion::RuleUnavailable);
        assert_eq!(v.a5_mark, Mark::Missing);
        assert!(v.summary().contains("missing ks_A5"));
        let only_a4 = KsValues {
            a4: Some(30),
            a5: None,
        };
        let v = evaluate(&tv(&[0, 1]), RankAssertion::Exact(3), only_a4).unwrap();
        assert_eq!(v.conclusion, Conclusion::Irreducible);
        let v = evaluate(&tv(&[0, 1, 1]), RankAssertion::Exact(6), ks(1, Some(1))).unwrap();
        assert_eq!(v.conclusion, Conclusion::RuleUnavailable);
        assert!(v.rule.is_none());
    }

    #[test]
    fn resolve_from_presentation() {
        let engine = Engine::new(1).unwrap();
        let mut rec = LinkRecord::new("free2", tv(&[0, 1]), RankAssertion::Exact(2));
        rec.presentation = Some("gens a b".into());
        let values = resolve_ks(&rec, &engine).unwrap();
        assert_eq!(values, ks(22, Some(77)));
        let v = verdict(&rec, values).unwrap();
        assert_eq!(v.conclusion, Conclusion::Inconclusive);
    }
}
