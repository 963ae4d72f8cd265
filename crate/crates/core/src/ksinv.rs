//! Closed-form identities for ks-invariants into A4 and A5, and the formulas
//! for one-sums with a trivial knot, a 2-generator knot or a 2-generator
//! link as a factor.
//!
//! All arithmetic is exact. Intermediate values are `i128` and results are
//! checked to fit in `u64`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::homcount::{Engine, HomError};
use crate::permgroup::{check_counting_hypothesis, AbelianType, FiniteGroup, Subgroup};
use crate::presentation::Presentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KsError {
    #[error("{what} is negative ({value}); the inputs cannot come from a handlebody link of genus {genus}")]
    Negative {
        what: &'static str,
        value: i128,
        genus: u32,
    },
    #[error("{numerator} is not divisible by {denominator}; inconsistent inputs")]
    NonIntegral { numerator: i128, denominator: i128 },
    #[error("group {0} fails the hypotheses of the counting formula")]
    HypothesisFails(String),
    #[error("missing counts for abelian subgroup type {0}")]
    MissingType(String),
    #[error("k = {k} is outside 0..={max}")]
    KOutOfRange { k: u32, max: u32 },
    #[error("genus {genus} is below the minimum {min}")]
    GenusTooSmall { genus: u32, min: u32 },
    #[error("abelian subgroup of order {0} is too small")]
    TrivialSubgroup(u64),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("presentation has abelianization rank {free_rank} with torsion {torsion:?}; expected free abelian")]
    NotFreeAbelian { free_rank: usize, torsion: Vec<u64> },
    #[error("the factor has {0} surjective orbits; expected an even count")]
    OddSurjections(u64),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// The two target groups with closed-form formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Target {
    A4,
    A5,
}

impl Target {
    pub fn order(self) -> i128 {
        match self {
            Target::A4 => 12,
            Target::A5 => 60,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::A4 => "A4",
            Target::A5 => "A5",
        }
    }

    pub fn group(self) -> FiniteGroup {
        crate::permgroup::builtin_group(self.name()).expect("builtin")
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A4" => Ok(Target::A4),
            "A5" => Ok(Target::A5),
            _ => Err(format!("expected A4 or A5, got {s:?}")),
        }
    }
}

fn pow(base: i128, exp: u32) -> Result<i128, KsError> {
    base.checked_pow(exp).ok_or(KsError::Overflow)
}

fn to_u64(what: &'static str, value: i128, genus: u32) -> Result<u64, KsError> {
    if value < 0 {
        return Err(KsError::Negative { what, value, genus });
    }
    u64::try_from(value).map_err(|_| KsError::Overflow)
}

fn exact_div(numerator: i128, denominator: i128) -> Result<i128, KsError> {
    if numerator % denominator != 0 {
        return Err(KsError::NonIntegral {
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}

/// Homomorphisms into an abelian group `H` from a group with free abelian
/// abelianization of rank `g`: `|H|^g`.
pub fn ksw_abelian(h: &AbelianType, g: u32) -> Result<u64, KsError> {
    to_u64("ks_w", pow(h.order() as i128, g)?, g)
}

/// Conjugacy classes of homomorphisms landing in a maximal abelian subgroup
/// `H` whose nonidentity elements all have centralizer `H`:
/// `(n_H - 1)(|H|^g - |H|)/(|H| - 1) + n_H`.
pub fn ks_h_g(n_h: u64, h_order: u64, g: u32) -> Result<u64, KsError> {
    if h_order < 2 {
        return Err(KsError::TrivialSubgroup(h_order));
    }
    if g == 0 {
        return Ok(1);
    }
    let (n, h) = (n_h as i128, h_order as i128);
    let value = (n - 1) * exact_div(pow(h, g)? - h, h - 1)? + n;
    to_u64("ks_H_G", value, g)
}

/// The same count by the recursion `l_g = l_{g-1} + (n_H - 1)|H|^{g-1}`,
/// `l_1 = n_H`.
pub fn ks_h_g_recursive(n_h: u64, h_order: u64, g: u32) -> Result<u64, KsError> {
    if g == 0 {
        return Ok(1);
    }
    let mut l = n_h as i128;
    for j in 2..=g {
        l += (n_h as i128 - 1) * pow(h_order as i128, j - 1)?;
    }
    to_u64("ks_H_G", l, g)
}

/// Per-type inputs of the general counting formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupParts {
    #[serde(serialize_with = "ser_display")]
    pub iso_type: AbelianType,
    /// Number of maximal abelian subgroups of this type.
    pub multiplicity: u64,
    pub ks_h_w: u64,
    pub ks_h_g: u64,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Conjugacy class count from the hom count and per-subgroup data.
///
/// Refuses groups where some nonabelian subgroup has nontrivial centralizer
/// or two maximal abelian subgroups overlap.
pub fn ks_from_parts(
    group: &FiniteGroup,
    ks_w: u64,
    parts: &[SubgroupParts],
) -> Result<u64, KsError> {
    let report = check_counting_hypothesis(group);
    if !report.holds() {
        return Err(KsError::HypothesisFails(group.name().to_string()));
    }
    for entry in &report.census.entries {
        if !parts.iter().any(|p| p.iso_type == entry.iso_type) {
            return Err(KsError::MissingType(entry.iso_type.to_string()));
        }
    }
    let n = parts.len() as i128;
    let mut abelian_classes: i128 = 1 - n;
    let mut centerless = ks_w as i128 - 1;
    for p in parts {
        abelian_classes += p.ks_h_g as i128;
        centerless -= p.multiplicity as i128 * (p.ks_h_w as i128 - 1);
    }
    if centerless < 0 {
        return Err(KsError::Negative {
            what: "centerless hom count",
            value: centerless,
            genus: 0,
        });
    }
    let value = abelian_classes + exact_div(centerless, group.order() as i128)?;
    to_u64("ks", value, 0)
}

/// Per-type parts from the closed forms, for a group with free abelian
/// abelianization of rank `g`.
pub fn closed_form_parts(group: &FiniteGroup, g: u32) -> Result<Vec<SubgroupParts>, KsError> {
    let report = check_counting_hypothesis(group);
    if !report.holds() || !report.closed_forms_apply {
        return Err(KsError::HypothesisFails(group.name().to_string()));
    }
    report
        .census
        .entries
        .iter()
        .map(|e| {
            Ok(SubgroupParts {
                iso_type: e.iso_type.clone(),
                multiplicity: e.multiplicity as u64,
                ks_h_w: ksw_abelian(&e.iso_type, g)?,
                ks_h_g: ks_h_g(e.n_h as u64, e.iso_type.order(), g)?,
            })
        })
        .collect()
}

fn normalizer(group: &FiniteGroup, sub: &Subgroup) -> Vec<usize> {
    (0..group.order())
        .filter(|&x| &group.conjugate_subgroup(x, sub) == sub)
        .collect()
}

/// Per-type parts by enumeration. `ks_h_g` counts orbits of the normalizer
/// of one representative on homs into it, which equals the number of
/// conjugacy classes of homs into some subgroup of that type when maximal
/// abelian subgroups meet trivially and each type forms one conjugacy class.
pub fn enumerated_parts(
    engine: &Engine,
    p: &Presentation,
    group: &FiniteGroup,
) -> Result<Vec<SubgroupParts>, KsError> {
    let report = check_counting_hypothesis(group);
    if !report.holds() || !report.closed_forms_apply {
        return Err(KsError::HypothesisFails(group.name().to_string()));
    }
    let mut out = Vec::new();
    for e in &report.census.entries {
        let h = &e.subgroups[0];
        let ks_h_w = engine.count_homs(p, group, Some(h))?;
        let norm = normalizer(group, h);
        let mut fixed: u128 = 0;
        for &x in &norm {
            let inside = h.intersection(group.centralizer(x));
            fixed += engine.count_homs(p, group, Some(&inside))? as u128;
        }
        let orbits = exact_div(fixed as i128, norm.len() as i128)?;
        out.push(SubgroupParts {
            iso_type: e.iso_type.clone(),
            multiplicity: e.multiplicity as u64,
            ks_h_w,
            ks_h_g: to_u64("ks_H_G", orbits, 0)?,
        });
    }
    Ok(out)
}

/// `ks_w` recovered from `ks` for a group with free abelian abelianization
/// of rank `g`.
pub fn ksw_from_ks(target: Target, ks: u64, g: u32) -> Result<u64, KsError> {
    let ks = ks as i128;
    let value = match target {
        Target::A4 => 12 * ks - 8 * pow(3, g)? - 3 * pow(4, g)?,
        Target::A5 => 60 * ks - 20 * pow(3, g)? - 15 * pow(4, g)? - 24 * pow(5, g)?,
    };
    to_u64("ks_w", value, g)
}

/// `ks` from `ks_w`; the inverse of [`ksw_from_ks`].
pub fn ks_from_ksw(target: Target, ks_w: u64, g: u32) -> Result<u64, KsError> {
    let w = ks_w as i128;
    let numerator = match target {
        Target::A4 => w + 8 * pow(3, g)? + 3 * pow(4, g)?,
        Target::A5 => w + 20 * pow(3, g)? + 15 * pow(4, g)? + 24 * pow(5, g)?,
    };
    to_u64("ks", exact_div(numerator, target.order())?, g)
}

/// Conjugacy classes of homs restricting to a fixed hom on the other factor
/// whose image has centralizer of order `c`: orbits of a group of order `c`
/// acting on homs from the genus-`g` factor, where the fixed homs are those
/// into the centralizer itself.
fn stabilized_classes(w: i128, c: i128, g: u32) -> Result<i128, KsError> {
    let fixed = pow(c, g)?;
    Ok(exact_div(w - fixed, c)? + fixed)
}

fn check_genus(g: u32, min: u32) -> Result<(), KsError> {
    if g < min {
        return Err(KsError::GenusTooSmall { genus: g, min });
    }
    Ok(())
}

/// `ks` of a one-sum with a trivial knot, from the `ks` of the genus `g-1`
/// complementary factor.
pub fn onesum_trivial(target: Target, ks_factor: u64, g: u32) -> Result<u64, KsError> {
    check_genus(g, 1)?;
    let ks = ks_factor as i128;
    let value = match target {
        Target::A4 => 12 * ks - 6 * pow(3, g - 1)? - 2 * pow(4, g - 1)?,
        Target::A5 => 60 * ks - 19 * pow(3, g - 1)? - 14 * pow(4, g - 1)? - 22 * pow(5, g - 1)?,
    };
    to_u64("ks", value, g)
}

/// [`onesum_trivial`] computed case by case over the conjugacy classes of
/// homs from the trivial knot group.
pub fn onesum_trivial_by_cases(target: Target, ks_factor: u64, g: u32) -> Result<u64, KsError> {
    check_genus(g, 1)?;
    let gf = g - 1;
    let w = ksw_from_ks(target, ks_factor, gf)? as i128;
    let value = match target {
        Target::A4 => {
            ks_factor as i128 + stabilized_classes(w, 4, gf)? + 2 * stabilized_classes(w, 3, gf)?
        }
        Target::A5 => {
            ks_factor as i128
                + stabilized_classes(w, 4, gf)?
                + stabilized_classes(w, 3, gf)?
                + 2 * stabilized_classes(w, 5, gf)?
        }
    };
    to_u64("ks", value, g)
}

fn check_k(k: u32, max: u32) -> Result<(), KsError> {
    if k > max {
        return Err(KsError::KOutOfRange { k, max });
    }
    Ok(())
}

/// `ks_A4` of a one-sum with a 2-generator knot having `2k` surjective
/// classes, from the `ks_A4` of the genus `g-1` factor.
pub fn onesum_2gen_knot_a4(ks_factor: u64, g: u32, k: u32) -> Result<u64, KsError> {
    check_genus(g, 1)?;
    check_k(k, 1)?;
    let (ks, k) = (ks_factor as i128, k as i128);
    let value = (12 + 24 * k) * ks - (6 + 16 * k) * pow(3, g - 1)? - (2 + 6 * k) * pow(4, g - 1)?;
    to_u64("ks", value, g)
}

pub fn onesum_2gen_knot_a4_by_cases(ks_factor: u64, g: u32, k: u32) -> Result<u64, KsError> {
    check_k(k, 1)?;
    let base = onesum_trivial_by_cases(Target::A4, ks_factor, g)? as i128;
    let w = ksw_from_ks(Target::A4, ks_factor, g - 1)? as i128;
    to_u64("ks", base + 2 * k as i128 * w, g)
}

/// `ks_A4` of a one-sum with a 2-generator link having `2k` surjective
/// classes, from the `ks_A4` of the genus `g-2` factor.
pub fn onesum_2gen_link_a4(ks_factor: u64, g: u32, k: u32) -> Result<u64, KsError> {
    check_genus(g, 2)?;
    check_k(k, 4)?;
    let (ks, k) = (ks_factor as i128, k as i128);
    let value = (48 + 24 * k) * ks - (26 + 16 * k) * pow(3, g - 2)? - (8 + 6 * k) * pow(4, g - 2)?;
    to_u64("ks", value, g)
}

pub fn onesum_2gen_link_a4_by_cases(ks_factor: u64, g: u32, k: u32) -> Result<u64, KsError> {
    check_genus(g, 2)?;
    check_k(k, 4)?;
    let gf = g - 2;
    let w = ksw_from_ks(Target::A4, ks_factor, gf)? as i128;
    let value = ks_factor as i128
        + 5 * stabilized_classes(w, 4, gf)?
        + 8 * stabilized_classes(w, 3, gf)?
        + 2 * k as i128 * w;
    to_u64("ks", value, g)
}

/// The surjection parameter `k` of a 2-generator factor: half its number of
/// surjective conjugacy classes into A4.
pub fn surjection_k(engine: &Engine, factor: &Presentation) -> Result<u32, KsError> {
    let census = engine.classify_homs(factor, &Target::A4.group())?;
    if census.surjective_orbits % 2 != 0 {
        return Err(KsError::OddSurjections(census.surjective_orbits));
    }
    Ok((census.surjective_orbits / 2) as u32)
}

/// ks-invariants of one presentation into one group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KsReport {
    pub group: String,
    pub genus: u32,
    pub ks_w: u64,
    pub ks: u64,
    pub parts: Vec<SubgroupParts>,
    pub surjective_orbits: Option<u64>,
}

/// Enumerates `ks_w`, `ks` (Burnside) and per-subgroup parts. The
/// presentation must have free abelian abelianization; surjective orbits
/// are included when the hom count is within the engine's orbit cap.
pub fn ks_report(
    engine: &Engine,
    p: &Presentation,
    group: &FiniteGroup,
) -> Result<KsReport, KsError> {
    let ab = p.abelianization();
    if !ab.is_free_abelian() {
        return Err(KsError::NotFreeAbelian {
            free_rank: ab.free_rank,
            torsion: ab.torsion,
        });
    }
    let ks_w = engine.count_homs(p, group, None)?;
    let ks = engine.ks_burnside(p, group)?;
    let parts = match enumerated_parts(engine, p, group) {
        Ok(parts) => parts,
        Err(KsError::HypothesisFails(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let surjective_orbits = match engine.classify_homs(p, group) {
        Ok(c) => Some(c.surjective_orbits),
        Err(HomError::CapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(KsReport {
        group: group.name().to_string(),
        genus: ab.free_rank as u32,
        ks_w,
        ks,
        parts,
        surjective_orbits,
    })
}
