//! Small finite permutation groups, fully materialized.
//!
//! Elements are stored in breadth-first order from the identity, so index `0`
//! is always the identity. Products compose left to right: `mul(a, b)` is the
//! permutation "apply `a`, then `b`".

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default bound on the order of a materialized group (the order of A8).
pub const DEFAULT_ORDER_CAP: usize = 20160;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("images {0:?} do not form a permutation")]
    NotBijective(Vec<u32>),
    #[error("group order exceeds the cap of {0}")]
    OrderCapExceeded(usize),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("bad cycle notation: {0}")]
    BadCycles(String),
}

/// A permutation of `{0, .., n-1}` given by its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(GroupError::NotBijective(images));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)` or `(1,2,3)`.
    /// `()` is the identity. The degree is the largest point mentioned, or
    /// `min_degree` if that is larger.
    pub fn from_cycles(text: &str, min_degree: usize) -> Result<Self, GroupError> {
        let bad = || GroupError::BadCycles(text.to_string());
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let points = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| match s.parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(points);
            rest = body[close + 1..].trim_start();
        }
        let degree = cycles
            .iter()
            .flatten()
            .map(|&p| p + 1)
            .max()
            .unwrap_or(0)
            .max(min_degree);
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        for cycle in &cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if moved[p] {
                    return Err(bad());
                }
                moved[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Perm::new(images)
    }

    fn with_degree(&self, degree: usize) -> Perm {
        let mut images = self.images.clone();
        images.extend(self.images.len() as u32..degree as u32);
        Perm { images }
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
                first = false;
                p = self.apply(p);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self)
    }
}

/// A subgroup given as a sorted list of element indices of its parent group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn from_members(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.binary_search(&element).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// Membership mask over `0..group_order`.
    pub fn mask(&self, group_order: usize) -> Vec<bool> {
        let mut mask = vec![false; group_order];
        for &x in &self.members {
            mask[x] = true;
        }
        mask
    }
}

/// Isomorphism type of a finite abelian group as its invariant factors
/// `d_1 | d_2 | ...`, each `> 1`. The trivial group has no factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianType(pub Vec<u64>);

impl AbelianType {
    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.0.len() <= 1
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => write!(f, "1"),
            [2, 2] => write!(f, "V4"),
            factors => {
                let parts: Vec<String> = factors.iter().map(|d| format!("Z{d}")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// A group with dense multiplication and inverse tables plus conjugacy data.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    elements: Vec<Perm>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    centralizers: Vec<Subgroup>,
    element_orders: Vec<u32>,
}

impl FiniteGroup {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &Perm {
        &self.elements[index]
    }

    pub fn index_of(&self, perm: &Perm) -> Option<usize> {
        let perm = if perm.degree() < self.degree {
            perm.with_degree(self.degree)
        } else {
            perm.clone()
        };
        self.elements.iter().position(|p| *p == perm)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g * x * g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Row-major multiplication table.
    pub fn mul_table(&self) -> &[u32] {
        &self.mul
    }

    pub fn inv_table(&self) -> &[u32] {
        &self.inv
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.element_orders[a]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn centralizer(&self, a: usize) -> &Subgroup {
        &self.centralizers[a]
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
        }
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, generators: &[usize]) -> Subgroup {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &s in generators {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
        }
        Subgroup::from_members(members)
    }

    pub fn is_abelian_subgroup(&self, sub: &Subgroup) -> bool {
        let m = sub.members();
        m.iter()
            .enumerate()
            .all(|(i, &a)| m[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    /// Elements commuting with every member of `sub`.
    pub fn centralizer_of_subgroup(&self, sub: &Subgroup) -> Subgroup {
        let mut acc = self.whole();
        for &a in sub.members() {
            if acc.order() == 1 {
                break;
            }
            acc = acc.intersection(self.centralizer(a));
        }
        acc
    }

    pub fn conjugate_subgroup(&self, g: usize, sub: &Subgroup) -> Subgroup {
        Subgroup::from_members(sub.members().iter().map(|&x| self.conj(g, x)).collect())
    }

    /// Invariant factors of an abelian subgroup, recovered from element orders.
    pub fn abelian_type(&self, sub: &Subgroup) -> AbelianType {
        let order = sub.order() as u64;
        let orders: Vec<u64> = sub
            .members()
            .iter()
            .map(|&x| self.element_order(x) as u64)
            .collect();
        // per prime: exponents of the cyclic p-parts, largest first
        let mut prime_parts: Vec<(u64, Vec<u32>)> = Vec::new();
        for p in prime_factors(order) {
            let mut counts_ge = Vec::new();
            let mut prev = 0u32;
            let mut k = 1u32;
            loop {
                let pk = p.pow(k);
                let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                let s = count.ilog(p);
                if s == prev {
                    break;
                }
                counts_ge.push(s - prev);
                prev = s;
                k += 1;
            }
            // counts_ge[k-1] = number of cyclic factors with exponent >= k
            let parts = counts_ge[0] as usize;
            let mut exps = vec![0u32; parts];
            for (k, &c) in counts_ge.iter().enumerate() {
                for e in exps.iter_mut().take(c as usize) {
                    *e = k as u32 + 1;
                }
            }
            prime_parts.push((p, exps));
        }
        let width = prime_parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (p, exps) in &prime_parts {
            for (j, &e) in exps.iter().enumerate() {
                factors[width - 1 - j] *= p.pow(e);
            }
        }
        AbelianType(factors)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Closes the generators under multiplication and materializes all tables.
pub fn make_group(generators: &[Perm], order_cap: usize) -> Result<FiniteGroup, GroupError> {
    let degree = generators.first().ok_or(GroupError::NoGenerators)?.degree();
    for (index, g) in generators.iter().enumerate() {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch {
                index,
                expected: degree,
                found: g.degree(),
            });
        }
        Perm::new(g.images.clone())?;
    }

    let ngen = generators.len();
    let mut elements = vec![Perm::identity(degree)];
    let mut lookup: HashMap<Perm, usize> = HashMap::new();
    lookup.insert(elements[0].clone(), 0);
    // parent[j] * generators[via[j]] == elements[j]
    let mut parent = vec![usize::MAX];
    let mut via = vec![usize::MAX];
    let mut right_gen: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        for (s, gen) in generators.iter().enumerate() {
            let p = elements[head].then(gen);
            let idx = match lookup.get(&p) {
                Some(&i) => i,
                None => {
                    if elements.len() >= order_cap {
                        return Err(GroupError::OrderCapExceeded(order_cap));
                    }
                    let i = elements.len();
                    lookup.insert(p.clone(), i);
                    elements.push(p);
                    parent.push(head);
                    via.push(s);
                    i
                }
            };
            right_gen.push(idx as u32);
        }
        head += 1;
    }

    let n = elements.len();
    let mut mul = vec![0u32; n * n];
    for i in 0..n {
        mul[i * n] = i as u32;
        for j in 1..n {
            let left = mul[i * n + parent[j]] as usize;
            mul[i * n + j] = right_gen[left * ngen + via[j]];
        }
    }
    let mut inv = vec![0u32; n];
    for i in 0..n {
        inv[i] = (0..n)
            .find(|&j| mul[i * n + j] == 0)
            .expect("group inverse") as u32;
    }

    let mut element_orders = vec![0u32; n];
    for (i, order) in element_orders.iter_mut().enumerate() {
        let mut x = i;
        let mut k = 1;
        while x != 0 {
            x = mul[x * n + i] as usize;
            k += 1;
        }
        *order = k;
    }

    let mut group = FiniteGroup {
        name: String::new(),
        degree,
        elements,
        mul,
        inv,
        classes: Vec::new(),
        class_of: vec![usize::MAX; n],
        centralizers: Vec::new(),
        element_orders,
    };

    let mut centralizers: Vec<Option<Subgroup>> = vec![None; n];
    for x in 0..n {
        if group.class_of[x] != usize::MAX {
            continue;
        }
        let class_id = group.classes.len();
        let rep_centralizer =
            Subgroup::from_members((0..n).filter(|&h| group.commute(h, x)).collect());
        let mut members = Vec::new();
        for g in 0..n {
            let y = group.conj(g, x);
            if group.class_of[y] == usize::MAX {
                group.class_of[y] = class_id;
                members.push(y);
                centralizers[y] = Some(group.conjugate_subgroup(g, &rep_centralizer));
            }
        }
        members.sort_unstable();
        group.classes.push(members);
    }
    group.centralizers = centralizers.into_iter().map(|c| c.unwrap()).collect();
    Ok(group)
}

/// Named groups understood by [`builtin_group`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSpec {
    Alternating(usize),
    Symmetric(usize),
    Cyclic(usize),
    Klein,
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Accepts `A4`, `A5`, `V4`, `Z6`, `Zn:6`, `S4`, `Sn:4`, `A6`, `An:6`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GroupError::UnknownGroup(s.to_string());
        let t = s.trim();
        if t.eq_ignore_ascii_case("V4") {
            return Ok(GroupSpec::Klein);
        }
        let mut chars = t.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let rest = chars.as_str();
        let rest = rest
            .strip_prefix("n:")
            .or_else(|| rest.strip_prefix("N:"))
            .unwrap_or(rest);
        let n: usize = rest.parse().map_err(|_| unknown())?;
        match family {
            'A' if n >= 1 => Ok(GroupSpec::Alternating(n)),
            'S' if n >= 1 => Ok(GroupSpec::Symmetric(n)),
            'Z' | 'C' if n >= 1 => Ok(GroupSpec::Cyclic(n)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Cyclic(n) => write!(f, "Z{n}"),
            GroupSpec::Klein => write!(f, "V4"),
        }
    }
}

fn cycle_perm(degree: usize, cycle: &[usize]) -> Perm {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for (k, &p) in cycle.iter().enumerate() {
        images[p] = cycle[(k + 1) % cycle.len()] as u32;
    }
    Perm { images }
}

impl GroupSpec {
    pub fn generators(&self) -> Vec<Perm> {
        match *self {
            GroupSpec::Klein => vec![
                Perm {
                    images: vec![1, 0, 3, 2],
                },
                Perm {
                    images: vec![2, 3, 0, 1],
                },
            ],
            GroupSpec::Cyclic(n) => vec![cycle_perm(n, &(0..n).collect::<Vec<_>>())],
            GroupSpec::Symmetric(n) if n <= 2 => vec![cycle_perm(n, &(0..n).collect::<Vec<_>>())],
            GroupSpec::Symmetric(n) => vec![
                cycle_perm(n, &(0..n).collect::<Vec<_>>()),
                cycle_perm(n, &[0, 1]),
            ],
            GroupSpec::Alternating(n) if n <= 2 => vec![Perm::identity(n)],
            GroupSpec::Alternating(n) => (2..n).map(|k| cycle_perm(n, &[0, 1, k])).collect(),
        }
    }

    pub fn build(&self, order_cap: usize) -> Result<FiniteGroup, GroupError> {
        Ok(make_group(&self.generators(), order_cap)?.with_name(self.to_string()))
    }
}

/// `A4`, `A5`, `V4`, `Zn`, `Sn` (and `An`) by name.
pub fn builtin_group(name: &str) -> Result<FiniteGroup, GroupError> {
    name.parse::<GroupSpec>()?.build(DEFAULT_ORDER_CAP)
}

/// One isomorphism type of maximal abelian subgroup.
#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub iso_type: AbelianType,
    /// Number of maximal abelian subgroups of this type (`l_i`).
    pub multiplicity: usize,
    /// Number of conjugacy classes of the group meeting the first listed subgroup (`n_H`).
    pub n_h: usize,
    pub subgroups: Vec<Subgroup>,
}

#[derive(Debug, Clone)]
pub struct AbelianSubgroupCensus {
    pub entries: Vec<CensusEntry>,
}

impl AbelianSubgroupCensus {
    pub fn entry(&self, iso_type: &AbelianType) -> Option<&CensusEntry> {
        self.entries.iter().find(|e| &e.iso_type == iso_type)
    }

    pub fn all_subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.entries.iter().flat_map(|e| e.subgroups.iter())
    }
}

/// All maximal abelian subgroups, grouped by isomorphism type.
///
/// Abelian subgroups are grown from cyclic ones by adjoining elements of
/// their centralizer until self-centralizing; an abelian subgroup is maximal
/// exactly when it equals its own centralizer.
pub fn abelian_census(group: &FiniteGroup) -> AbelianSubgroupCensus {
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let mut queue: VecDeque<Subgroup> = VecDeque::new();
    for g in 0..group.order() {
        let cyc = group.generated(&[g]);
        if seen.insert(cyc.clone()) {
            queue.push_back(cyc);
        }
    }
    let mut maximal: Vec<Subgroup> = Vec::new();
    while let Some(sub) = queue.pop_front() {
        let cent = group.centralizer_of_subgroup(&sub);
        if cent == sub {
            maximal.push(sub);
            continue;
        }
        for &x in cent.members() {
            if sub.contains(x) {
                continue;
            }
            let mut gens = sub.members().to_vec();
            gens.push(x);
            let bigger = group.generated(&gens);
            if seen.insert(bigger.clone()) {
                queue.push_back(bigger);
            }
        }
    }
    maximal.sort();

    let mut entries: Vec<CensusEntry> = Vec::new();
    for sub in maximal {
        let iso_type = group.abelian_type(&sub);
        match entries.iter_mut().find(|e| e.iso_type == iso_type) {
            Some(e) => {
                e.multiplicity += 1;
                e.subgroups.push(sub);
            }
            None => {
                let mut classes: Vec<usize> =
                    sub.members().iter().map(|&x| group.class_of(x)).collect();
                classes.sort_unstable();
                classes.dedup();
                entries.push(CensusEntry {
                    iso_type,
                    multiplicity: 1,
                    n_h: classes.len(),
                    subgroups: vec![sub],
                });
            }
        }
    }
    entries
        .sort_by(|a, b| (a.iso_type.order(), &a.iso_type).cmp(&(b.iso_type.order(), &b.iso_type)));
    AbelianSubgroupCensus { entries }
}

/// Outcome of checking the hypotheses of the conjugacy-class counting formula.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    /// A pair generating a nonabelian subgroup with nontrivial centralizer.
    pub centered_nonabelian: Option<(usize, usize)>,
    /// Two maximal abelian subgroups meeting nontrivially.
    pub overlapping_maximal: Option<(Subgroup, Subgroup)>,
    /// Every census subgroup is the centralizer of each of its non-identity
    /// members, and subgroups of one type are pairwise conjugate. Needed for
    /// the closed forms of the per-subgroup counts.
    pub closed_forms_apply: bool,
    pub census: AbelianSubgroupCensus,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.centered_nonabelian.is_none() && self.overlapping_maximal.is_none()
    }
}

/// Every subgroup is abelian or centerless-in-G, and maximal abelian
/// subgroups meet trivially.
///
/// Checking 2-generated subgroups suffices for the first clause: any
/// nonabelian subgroup contains a noncommuting pair, and its centralizer sits
/// inside the centralizer of that pair.
pub fn check_counting_hypothesis(group: &FiniteGroup) -> HypothesisReport {
    let n = group.order();
    let mut centered_nonabelian = None;
    'outer: for a in 0..n {
        for b in a + 1..n {
            if group.commute(a, b) {
                continue;
            }
            let cent = group.centralizer(a).intersection(group.centralizer(b));
            if !cent.is_trivial() {
                centered_nonabelian = Some((a, b));
                break 'outer;
            }
        }
    }

    let census = abelian_census(group);
    let subs: Vec<&Subgroup> = census.all_subgroups().collect();
    let mut overlapping_maximal = None;
    'pairs: for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            if !subs[i].intersection(subs[j]).is_trivial() {
                overlapping_maximal = Some((subs[i].clone(), subs[j].clone()));
                break 'pairs;
            }
        }
    }

    let self_centralizing = subs.iter().all(|s| {
        s.members()
            .iter()
            .filter(|&&x| x != group.identity())
            .all(|&x| group.centralizer(x) == *s)
    });
    let conjugate_within_type = census.entries.iter().all(|e| {
        let first = &e.subgroups[0];
        e.subgroups[1..]
            .iter()
            .all(|s| (0..n).any(|g| group.conjugate_subgroup(g, first) == *s))
    });

    HypothesisReport {
        centered_nonabelian,
        overlapping_maximal,
        closed_forms_apply: self_centralizing && conjugate_within_type,
        census,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[u32]) -> Perm {
        Perm::new(images.to_vec()).unwrap()
    }

    fn brute_closure(gens: &[Perm]) -> usize {
        let mut set: HashSet<Perm> = HashSet::new();
        set.insert(Perm::identity(gens[0].degree()));
        loop {
            let current: Vec<Perm> = set.iter().cloned().collect();
            let before = set.len();
            for a in &current {
                for b in gens {
                    set.insert(a.then(b));
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn make_group_orders_match_brute_closure() {
        let a4 = [p(&[1, 2, 0, 3]), p(&[1, 0, 3, 2])];
        assert_eq!(brute_closure(&a4), 12);
        assert_eq!(make_group(&a4, DEFAULT_ORDER_CAP).unwrap().order(), 12);

        let a5 = [p(&[1, 2, 3, 4, 0]), p(&[1, 2, 0, 3, 4])];
        assert_eq!(brute_closure(&a5), 60);
        assert_eq!(make_group(&a5, DEFAULT_ORDER_CAP).unwrap().order(), 60);

        let trivial = make_group(&[Perm::identity(1)], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.classes().len(), 1);
    }

    #[test]
    fn make_group_errors() {
        assert_eq!(make_group(&[], 10).unwrap_err(), GroupError::NoGenerators);
        assert!(matches!(
            make_group(&[p(&[1, 0]), p(&[1, 2, 0])], 100),
            Err(GroupError::DegreeMismatch { index: 1, .. })
        ));
        assert!(matches!(
            Perm::new(vec![0, 0, 1]),
            Err(GroupError::NotBijective(_))
        ));
        assert_eq!(
            GroupSpec::Symmetric(5).build(100).unwrap_err(),
            GroupError::OrderCapExceeded(100)
        );
    }

    #[test]
    fn deterministic_construction() {
        let a = builtin_group("A5").unwrap();
        let b = builtin_group("A5").unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.mul_table(), b.mul_table());
    }

    #[test]
    fn builtin_orders_and_classes() {
        let cases = [
            ("A4", 12, 4),
            ("A5", 60, 5),
            ("V4", 4, 4),
            ("Zn:7", 7, 7),
            ("Z1", 1, 1),
            ("Sn:4", 24, 5),
            ("S3", 6, 3),
            ("S1", 1, 1),
        ];
        for (name, order, classes) in cases {
            let g = builtin_group(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.classes().len(), classes, "{name}");
        }
        assert!(builtin_group("V4").unwrap().is_abelian());
        assert!(matches!(
            builtin_group("Q8"),
            Err(GroupError::UnknownGroup(_))
        ));
    }

    #[test]
    fn table_laws_and_class_equation() {
        for name in ["A4", "A5", "S4", "Z6", "V4"] {
            let g = builtin_group(name).unwrap();
            let n = g.order();
            assert!(g.element(0).is_identity());
            for a in 0..n {
                assert_eq!(g.mul(a, 0), a);
                assert_eq!(g.mul(0, a), a);
                assert_eq!(g.mul(a, g.inv(a)), 0);
                assert_eq!(
                    g.element(a).then(g.element(g.inv(a))),
                    Perm::identity(g.degree())
                );
                for b in 0..n {
                    assert_eq!(g.element(a).then(g.element(b)), *g.element(g.mul(a, b)));
                }
                assert_eq!(
                    g.centralizer(a).order() * g.classes()[g.class_of(a)].len(),
                    n
                );
            }
            assert_eq!(g.classes().iter().map(|c| c.len()).sum::<usize>(), n);
            assert_eq!(g.classes()[g.class_of(0)], vec![0]);
        }
    }

    #[test]
    fn centralizer_examples() {
        let a4 = builtin_group("A4").unwrap();
        assert_eq!(a4.centralizer(0).order(), 12);
        let double = a4.index_of(&p(&[1, 0, 3, 2])).unwrap();
        let cent = a4.centralizer(double);
        assert_eq!(cent.order(), 4);
        assert!(cent.contains(double) && cent.contains(0));
        assert!(cent.members().iter().all(|&x| a4.element_order(x) <= 2));

        let a5 = builtin_group("A5").unwrap();
        let five = a5.index_of(&p(&[1, 2, 3, 4, 0])).unwrap();
        let cent = a5.centralizer(five);
        assert_eq!(cent.order(), 5);
        assert_eq!(cent, &a5.generated(&[five]));
    }

    #[test]
    fn census_of_a4_a5_and_cyclic() {
        let show = |g: &FiniteGroup| {
            abelian_census(g)
                .entries
                .iter()
                .map(|e| (e.iso_type.to_string(), e.multiplicity, e.n_h))
                .collect::<Vec<_>>()
        };
        let a4 = builtin_group("A4").unwrap();
        assert_eq!(
            show(&a4),
            vec![("Z3".to_string(), 4, 3), ("V4".to_string(), 1, 2)]
        );
        let a5 = builtin_group("A5").unwrap();
        assert_eq!(
            show(&a5),
            vec![
                ("Z3".to_string(), 10, 2),
                ("V4".to_string(), 5, 2),
                ("Z5".to_string(), 6, 3)
            ]
        );
        let z6 = builtin_group("Z6").unwrap();
        assert_eq!(show(&z6), vec![("Z6".to_string(), 1, 6)]);
    }

    #[test]
    fn abelian_types() {
        let v4 = builtin_group("V4").unwrap();
        assert_eq!(v4.abelian_type(&v4.whole()), AbelianType(vec![2, 2]));
        let z12 = builtin_group("Z12").unwrap();
        assert_eq!(z12.abelian_type(&z12.whole()), AbelianType(vec![12]));
        let z1 = builtin_group("Z1").unwrap();
        assert_eq!(z1.abelian_type(&z1.whole()), AbelianType(vec![]));
        // Z2 x Z4 inside S6 generated by (1 2) and (3 4 5 6)
        let g = make_group(
            &[
                Perm::from_cycles("(1 2)", 6).unwrap(),
                Perm::from_cycles("(3 4 5 6)", 6).unwrap(),
            ],
            100,
        )
        .unwrap();
        assert_eq!(g.abelian_type(&g.whole()), AbelianType(vec![2, 4]));
        assert_eq!(AbelianType(vec![2, 4]).to_string(), "Z2xZ4");
    }

    #[test]
    fn counting_hypothesis() {
        for name in ["A4", "A5"] {
            let report = check_counting_hypothesis(&builtin_group(name).unwrap());
            assert!(report.holds(), "{name}");
            assert!(report.closed_forms_apply, "{name}");
        }
        let s4 = check_counting_hypothesis(&builtin_group("S4").unwrap());
        assert!(!s4.holds());
        assert!(s4.centered_nonabelian.is_some());
    }

    #[test]
    fn census_subgroups_pairwise_trivial_when_hypothesis_holds() {
        for name in ["A4", "A5", "Z6", "S3", "V4"] {
            let g = builtin_group(name).unwrap();
            let report = check_counting_hypothesis(&g);
            let subs: Vec<_> = report.census.all_subgroups().collect();
            for s in &subs {
                assert!(g.is_abelian_subgroup(s));
                assert_eq!(g.centralizer_of_subgroup(s), **s);
            }
            if report.holds() {
                for i in 0..subs.len() {
                    for j in i + 1..subs.len() {
                        assert!(subs[i].intersection(subs[j]).is_trivial());
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_notation_round_trip() {
        let q = Perm::from_cycles("(1,3)(2 4 5)", 0).unwrap();
        assert_eq!(q.images(), &[2, 3, 0, 4, 1]);
        assert_eq!(q.to_string(), "(1 3)(2 4 5)");
        assert_eq!(Perm::from_cycles(&q.to_string(), 0).unwrap(), q);
        assert!(Perm::from_cycles("()", 3).unwrap().is_identity());
        assert!(Perm::from_cycles("(1 2)(2 3)", 0).is_err());
        assert!(Perm::from_cycles("(0 1)", 0).is_err());
        assert!(Perm::from_cycles("1 2", 0).is_err());
    }
}
