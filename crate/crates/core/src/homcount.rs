//! Counting homomorphisms from a finitely presented group into a finite
//! permutation group, raw and up to conjugacy.
//!
//! The search assigns generator images depth first. Generators are ordered
//! greedily so that relators complete as early as possible; a relator is
//! checked at the depth where its last generator is assigned, and when that
//! generator occurs exactly once in the relator its image is solved for
//! instead of enumerated. Generators split into independent blocks
//! (connected through shared relators) whose counts multiply.
//!
//! Parallel work is split on the images of the first generator of a block;
//! every worker owns its subtree and partial results are merged once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::permgroup::{FiniteGroup, Subgroup};
use crate::presentation::{Presentation, Word};

/// Default bound on the number of homomorphisms `ks_orbits` will accept.
pub const DEFAULT_ORBIT_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("{total} homomorphisms exceed the orbit cap of {cap}; use the Burnside count instead")]
    CapExceeded { total: u64, cap: u64 },
    #[error("homomorphism count overflows 64 bits")]
    Overflow,
    #[error("Burnside sum {sum} is not divisible by the group order {order}")]
    NonIntegral { sum: u128, order: usize },
    #[error("invalid engine configuration: {0}")]
    Config(String),
}

/// Generator images, indexed like the presentation's generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hom {
    pub images: Vec<usize>,
}

impl Hom {
    pub fn is_valid(&self, p: &Presentation, g: &FiniteGroup) -> bool {
        p.relators()
            .iter()
            .all(|w| evaluate(g, w, &self.images) == g.identity())
    }

    pub fn conjugated(&self, g: &FiniteGroup, by: usize) -> Hom {
        Hom {
            images: self.images.iter().map(|&x| g.conj(by, x)).collect(),
        }
    }
}

/// Value of a word under an assignment of generator images.
pub fn evaluate(g: &FiniteGroup, word: &Word, images: &[usize]) -> usize {
    word.letters().iter().fold(g.identity(), |acc, l| {
        let x = images[l.generator];
        g.mul(acc, if l.inverse { g.inv(x) } else { x })
    })
}

/// Isomorphism class of the image of a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ImageType {
    Trivial,
    Cyclic(u64),
    Klein,
    OtherAbelian(Vec<u64>),
    Nonabelian(usize),
    Full,
}

impl fmt::Display for ImageType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageType::Trivial => write!(f, "trivial"),
            ImageType::Cyclic(n) => write!(f, "Z{n}"),
            ImageType::Klein => write!(f, "V4"),
            ImageType::OtherAbelian(factors) => {
                let parts: Vec<String> = factors.iter().map(|d| format!("Z{d}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            ImageType::Nonabelian(order) => write!(f, "nonabelian({order})"),
            ImageType::Full => write!(f, "full"),
        }
    }
}

impl Serialize for ImageType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn classify_image(g: &FiniteGroup, sub: &Subgroup) -> ImageType {
    if sub.order() == 1 {
        ImageType::Trivial
    } else if sub.order() == g.order() {
        ImageType::Full
    } else if g.is_abelian_subgroup(sub) {
        let t = g.abelian_type(sub);
        match t.0.as_slice() {
            [n] => ImageType::Cyclic(*n),
            [2, 2] => ImageType::Klein,
            _ => ImageType::OtherAbelian(t.0),
        }
    } else {
        ImageType::Nonabelian(sub.order())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TypeTally {
    pub homs: u64,
    pub orbits: u64,
}

/// Homomorphisms and conjugacy classes of homomorphisms, by image type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomCensus {
    pub total: u64,
    pub orbits: u64,
    pub by_image_type: BTreeMap<ImageType, TypeTally>,
    pub surjective_orbits: u64,
}

impl HomCensus {
    pub fn tally(&self, t: &ImageType) -> TypeTally {
        self.by_image_type.get(t).copied().unwrap_or_default()
    }

    /// Orbits whose image is abelian (including trivial).
    pub fn abelian_orbits(&self) -> u64 {
        self.by_image_type
            .iter()
            .filter(|(t, _)| {
                matches!(
                    t,
                    ImageType::Trivial
                        | ImageType::Cyclic(_)
                        | ImageType::Klein
                        | ImageType::OtherAbelian(_)
                )
            })
            .map(|(_, c)| c.orbits)
            .sum()
    }
}

/// Orbit count with optional representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCount {
    pub orbits: u64,
    pub representatives: Vec<Hom>,
}

// ---------------------------------------------------------------------------
// search plan

#[derive(Debug, Clone)]
struct Compiled {
    /// (depth slot, inverse)
    letters: Vec<(u32, bool)>,
}

#[derive(Debug, Clone)]
struct Solve {
    /// the relator rotated so the solved generator is last, with it removed
    rest: Compiled,
    /// the generator occurs with exponent +1, so its image is rest^-1
    invert: bool,
}

#[derive(Debug, Clone)]
struct Level {
    generator: usize,
    solve: Option<Solve>,
    checks: Vec<Compiled>,
}

#[derive(Debug, Clone)]
struct Plan {
    levels: Vec<Level>,
}

fn blocks(p: &Presentation, relators: &[Word]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = p.generator_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for w in relators {
        let support = w.support();
        for pair in support.windows(2) {
            let (a, b) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for g in 0..n {
        let r = find(&mut parent, g);
        out.entry(r).or_default().0.push(g);
    }
    for (i, w) in relators.iter().enumerate() {
        let r = find(&mut parent, w.letters()[0].generator);
        out.entry(r).or_default().1.push(i);
    }
    out.into_values().collect()
}

fn reduced_relators(p: &Presentation) -> Vec<Word> {
    p.relators()
        .iter()
        .map(Word::cyclically_reduced)
        .filter(|w| !w.is_empty())
        .collect()
}

impl Plan {
    fn build(generators: &[usize], relators: &[&Word]) -> Plan {
        let supports: Vec<Vec<usize>> = relators.iter().map(|w| w.support()).collect();
        let occurrences = |g: usize| supports.iter().filter(|s| s.contains(&g)).count();
        let single =
            |w: &Word, g: usize| w.letters().iter().filter(|l| l.generator == g).count() == 1;

        let mut assigned: Vec<usize> = Vec::new();
        let mut done = vec![false; relators.len()];
        let mut levels = Vec::new();
        let mut remaining: Vec<usize> = generators.to_vec();
        while !remaining.is_empty() {
            let score = |g: usize| {
                let completing: Vec<usize> = (0..relators.len())
                    .filter(|&r| {
                        !done[r]
                            && supports[r].contains(&g)
                            && supports[r].iter().all(|&x| x == g || assigned.contains(&x))
                    })
                    .collect();
                let solvable = completing.iter().any(|&r| single(relators[r], g));
                (solvable, completing.len(), occurrences(g))
            };
            let (pos, &generator) = remaining
                .iter()
                .enumerate()
                .max_by(|(_, &a), (_, &b)| score(a).cmp(&score(b)).then(b.cmp(&a)))
                .expect("nonempty");
            remaining.remove(pos);
            assigned.push(generator);
            let slot_of = |g: usize| assigned.iter().position(|&x| x == g).unwrap() as u32;
            let compile = |w: &[crate::presentation::Letter]| Compiled {
                letters: w
                    .iter()
                    .map(|l| (slot_of(l.generator), l.inverse))
                    .collect(),
            };

            let mut solve = None;
            let mut checks = Vec::new();
            for r in 0..relators.len() {
                if done[r] || !supports[r].iter().all(|x| assigned.contains(x)) {
                    continue;
                }
                done[r] = true;
                let w = relators[r];
                if solve.is_none() && single(w, generator) {
                    let letters = w.letters();
                    let at = letters
                        .iter()
                        .position(|l| l.generator == generator)
                        .unwrap();
                    // u x^e v = 1  <=>  x^e = (v u)^-1
                    let mut rest = letters[at + 1..].to_vec();
                    rest.extend_from_slice(&letters[..at]);
                    solve = Some(Solve {
                        rest: compile(&rest),
                        invert: !letters[at].inverse,
                    });
                } else {
                    checks.push(compile(w.letters()));
                }
            }
            levels.push(Level {
                generator,
                solve,
                checks,
            });
        }
        Plan { levels }
    }
}

struct Search<'a> {
    group: &'a FiniteGroup,
    n: usize,
    mul: &'a [u32],
    inv: &'a [u32],
    plan: Plan,
    domain: Vec<u32>,
    allowed: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(group: &'a FiniteGroup, plan: Plan, restrict_to: Option<&Subgroup>) -> Self {
        let n = group.order();
        let (domain, allowed) = match restrict_to {
            Some(sub) => (
                sub.members().iter().map(|&x| x as u32).collect(),
                sub.mask(n),
            ),
            None => ((0..n as u32).collect(), vec![true; n]),
        };
        Search {
            group,
            n,
            mul: group.mul_table(),
            inv: group.inv_table(),
            plan,
            domain,
            allowed,
        }
    }

    #[inline]
    fn eval(&self, word: &Compiled, img: &[u32]) -> u32 {
        let mut acc = 0u32;
        for &(slot, inverse) in &word.letters {
            let x = img[slot as usize];
            let x = if inverse { self.inv[x as usize] } else { x };
            acc = self.mul[acc as usize * self.n + x as usize];
        }
        acc
    }

    #[inline]
    fn checks_pass(&self, level: &Level, img: &[u32]) -> bool {
        level.checks.iter().all(|w| self.eval(w, img) == 0)
    }

    /// Images of the level's generator consistent with the prefix.
    #[inline]
    fn candidates<'s>(&'s self, level: &Level, img: &[u32]) -> Candidates<'s> {
        match &level.solve {
            Some(s) => {
                let v = self.eval(&s.rest, img);
                let x = if s.invert { self.inv[v as usize] } else { v };
                if self.allowed[x as usize] {
                    Candidates::One(Some(x))
                } else {
                    Candidates::One(None)
                }
            }
            None => Candidates::Many(self.domain.iter()),
        }
    }

    fn count_from(&self, depth: usize, img: &mut [u32]) -> u64 {
        let level = &self.plan.levels[depth];
        let last = depth + 1 == self.plan.levels.len();
        let mut total = 0u64;
        for x in self.candidates(level, img) {
            img[depth] = x;
            if !self.checks_pass(level, img) {
                continue;
            }
            total += if last {
                1
            } else {
                self.count_from(depth + 1, img)
            };
        }
        total
    }

    fn count(&self, pool: &rayon::ThreadPool) -> u64 {
        let depth = self.plan.levels.len();
        if depth == 0 {
            return 1;
        }
        let first = &self.plan.levels[0];
        let starts: Vec<u32> = self.candidates(first, &[]).collect();
        pool.install(|| {
            starts
                .par_iter()
                .map(|&x| {
                    let mut img = vec![0u32; depth];
                    img[0] = x;
                    if !self.checks_pass(first, &img) {
                        0
                    } else if depth == 1 {
                        1
                    } else {
                        self.count_from(1, &mut img)
                    }
                })
                .sum()
        })
    }

    /// Visits each homomorphism that is lexicographically smallest (in depth
    /// order) among its conjugates, with the size of its stabilizer.
    /// `stab` holds the elements fixing the prefix pointwise.
    fn orbits_from<F: FnMut(&[u32], usize)>(
        &self,
        depth: usize,
        img: &mut [u32],
        stab: &[u32],
        conj: &[u32],
        visit: &mut F,
    ) {
        if depth == self.plan.levels.len() {
            visit(img, stab.len());
            return;
        }
        let level = &self.plan.levels[depth];
        let mut next: Vec<u32> = Vec::with_capacity(stab.len());
        'cand: for x in self.candidates(level, img) {
            img[depth] = x;
            if !self.checks_pass(level, img) {
                continue;
            }
            next.clear();
            for &g in stab {
                let c = conj[g as usize * self.n + x as usize];
                if c < x {
                    continue 'cand;
                }
                if c == x {
                    next.push(g);
                }
            }
            self.orbits_from(depth + 1, img, &next, conj, visit);
        }
    }

    fn fold_orbits<A, I, V, M>(&self, pool: &rayon::ThreadPool, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        V: Fn(&mut A, &[u32], usize) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        let n = self.n;
        let conj: Vec<u32> = (0..n)
            .flat_map(|g| (0..n).map(move |x| (g, x)))
            .map(|(g, x)| self.group.conj(g, x) as u32)
            .collect();
        let all: Vec<u32> = (0..n as u32).collect();
        let depth = self.plan.levels.len();
        if depth == 0 {
            let mut acc = init();
            visit(&mut acc, &[], n);
            return acc;
        }
        let first = &self.plan.levels[0];
        let starts: Vec<u32> = self.candidates(first, &[]).collect();
        pool.install(|| {
            starts
                .par_iter()
                .map(|&x| {
                    let mut acc = init();
                    let mut img = vec![0u32; depth];
                    img[0] = x;
                    if self.checks_pass(first, &img) {
                        let mut stab = Vec::new();
                        let mut minimal = true;
                        for &g in &all {
                            let c = conj[g as usize * n + x as usize];
                            if c < x {
                                minimal = false;
                                break;
                            }
                            if c == x {
                                stab.push(g);
                            }
                        }
                        if minimal {
                            self.orbits_from(1, &mut img, &stab, &conj, &mut |h, s| {
                                visit(&mut acc, h, s)
                            });
                        }
                    }
                    acc
                })
                .reduce(&init, &merge)
        })
    }

    /// Reorders depth-indexed images by generator.
    fn to_hom(&self, img: &[u32], generator_count: usize) -> Hom {
        let mut images = vec![0usize; generator_count];
        for (level, &x) in self.plan.levels.iter().zip(img) {
            images[level.generator] = x as usize;
        }
        Hom { images }
    }

    fn walk_all<F: FnMut(&[u32]) -> bool>(
        &self,
        depth: usize,
        img: &mut [u32],
        visit: &mut F,
    ) -> bool {
        if depth == self.plan.levels.len() {
            return visit(img);
        }
        let level = &self.plan.levels[depth];
        for x in self.candidates(level, img) {
            img[depth] = x;
            if self.checks_pass(level, img) && !self.walk_all(depth + 1, img, visit) {
                return false;
            }
        }
        true
    }
}

enum Candidates<'s> {
    One(Option<u32>),
    Many(std::slice::Iter<'s, u32>),
}

impl Iterator for Candidates<'_> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        match self {
            Candidates::One(x) => x.take(),
            Candidates::Many(it) => it.next().copied(),
        }
    }
}

// ---------------------------------------------------------------------------
// engine

/// Counting engine with a fixed worker count and orbit cap.
#[derive(Clone)]
pub struct Engine {
    jobs: usize,
    orbit_cap: u64,
    pool: Arc<rayon::ThreadPool>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("jobs", &self.jobs)
            .field("orbit_cap", &self.orbit_cap)
            .finish()
    }
}

impl Default for Engine {
    fn default() -> Self {
        let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        Engine::new(jobs).expect("default engine")
    }
}

impl Engine {
    pub fn new(jobs: usize) -> Result<Self, HomError> {
        if jobs == 0 {
            return Err(HomError::Config("worker count must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| HomError::Config(e.to_string()))?;
        Ok(Engine {
            jobs,
            orbit_cap: DEFAULT_ORBIT_CAP,
            pool: Arc::new(pool),
        })
    }

    pub fn with_orbit_cap(mut self, cap: u64) -> Result<Self, HomError> {
        if cap == 0 {
            return Err(HomError::Config("orbit cap must be at least 1".into()));
        }
        self.orbit_cap = cap;
        Ok(self)
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn orbit_cap(&self) -> u64 {
        self.orbit_cap
    }

    /// Number of homomorphisms, optionally with every generator image
    /// restricted to a subgroup.
    pub fn count_homs(
        &self,
        p: &Presentation,
        g: &FiniteGroup,
        restrict_to: Option<&Subgroup>,
    ) -> Result<u64, HomError> {
        let relators = reduced_relators(p);
        let domain_size = restrict_to.map_or(g.order(), Subgroup::order) as u64;
        let mut total: u64 = 1;
        for (gens, rels) in blocks(p, &relators) {
            let factor = if rels.is_empty() {
                domain_size
                    .checked_pow(gens.len() as u32)
                    .ok_or(HomError::Overflow)?
            } else {
                let words: Vec<&Word> = rels.iter().map(|&i| &relators[i]).collect();
                let search = Search::new(g, Plan::build(&gens, &words), restrict_to);
                search.count(&self.pool)
            };
            total = total.checked_mul(factor).ok_or(HomError::Overflow)?;
            if total == 0 {
                break;
            }
        }
        Ok(total)
    }

    fn full_search<'a>(&self, p: &Presentation, g: &'a FiniteGroup) -> Search<'a> {
        let relators = reduced_relators(p);
        let words: Vec<&Word> = relators.iter().collect();
        let gens: Vec<usize> = (0..p.generator_count()).collect();
        Search::new(g, Plan::build(&gens, &words), None)
    }

    fn check_cap(&self, p: &Presentation, g: &FiniteGroup) -> Result<u64, HomError> {
        let total = match self.count_homs(p, g, None) {
            Ok(t) => t,
            Err(HomError::Overflow) => {
                return Err(HomError::CapExceeded {
                    total: u64::MAX,
                    cap: self.orbit_cap,
                })
            }
            Err(e) => return Err(e),
        };
        if total > self.orbit_cap {
            return Err(HomError::CapExceeded {
                total,
                cap: self.orbit_cap,
            });
        }
        Ok(total)
    }

    /// Number of conjugacy classes of homomorphisms, by direct orbit
    /// enumeration. Fails when the hom count exceeds the orbit cap.
    pub fn ks_orbits(&self, p: &Presentation, g: &FiniteGroup) -> Result<u64, HomError> {
        self.check_cap(p, g)?;
        let search = self.full_search(p, g);
        Ok(search.fold_orbits(&self.pool, || 0u64, |acc, _, _| *acc += 1, |a, b| a + b))
    }

    /// One representative per conjugacy class (the lexicographically least
    /// conjugate in search order), sorted.
    pub fn orbit_representatives(
        &self,
        p: &Presentation,
        g: &FiniteGroup,
    ) -> Result<OrbitCount, HomError> {
        self.check_cap(p, g)?;
        let search = self.full_search(p, g);
        let count = p.generator_count();
        let mut reps = search.fold_orbits(
            &self.pool,
            Vec::new,
            |acc: &mut Vec<Hom>, h, _| acc.push(search.to_hom(h, count)),
            |mut a, mut b| {
                a.append(&mut b);
                a
            },
        );
        reps.sort();
        Ok(OrbitCount {
            orbits: reps.len() as u64,
            representatives: reps,
        })
    }

    /// Orbit count by Burnside's lemma: homomorphisms fixed by conjugation
    /// with `x` are those into the centralizer of `x`.
    pub fn ks_burnside(&self, p: &Presentation, g: &FiniteGroup) -> Result<u64, HomError> {
        let mut sum: u128 = 0;
        for class in g.classes() {
            let fixed = self.count_homs(p, g, Some(g.centralizer(class[0])))?;
            sum += fixed as u128 * class.len() as u128;
        }
        let order = g.order();
        if !sum.is_multiple_of(order as u128) {
            return Err(HomError::NonIntegral { sum, order });
        }
        u64::try_from(sum / order as u128).map_err(|_| HomError::Overflow)
    }

    /// Hom and orbit counts broken down by the isomorphism type of the image.
    pub fn classify_homs(&self, p: &Presentation, g: &FiniteGroup) -> Result<HomCensus, HomError> {
        self.check_cap(p, g)?;
        let search = self.full_search(p, g);
        let order = g.order() as u64;
        type Acc = (
            BTreeMap<ImageType, TypeTally>,
            HashMap<Vec<usize>, ImageType>,
        );
        let (by_image_type, _) = search.fold_orbits(
            &self.pool,
            || -> Acc { Default::default() },
            |(tally, cache), img, stab| {
                let mut key: Vec<usize> = img.iter().map(|&x| x as usize).collect();
                key.sort_unstable();
                key.dedup();
                let t = cache
                    .entry(key)
                    .or_insert_with_key(|k| classify_image(g, &g.generated(k)))
                    .clone();
                let entry = tally.entry(t).or_default();
                entry.orbits += 1;
                entry.homs += order / stab as u64;
            },
            |(mut a, cache), (b, _)| {
                for (t, c) in b {
                    let e = a.entry(t).or_default();
                    e.homs += c.homs;
                    e.orbits += c.orbits;
                }
                (a, cache)
            },
        );
        let total = by_image_type.values().map(|c| c.homs).sum();
        let orbits = by_image_type.values().map(|c| c.orbits).sum();
        let surjective_orbits = by_image_type.get(&ImageType::Full).map_or(0, |c| c.orbits);
        Ok(HomCensus {
            total,
            orbits,
            by_image_type,
            surjective_orbits,
        })
    }

    /// Every homomorphism, in search order; fails above the orbit cap.
    pub fn enumerate_homs(&self, p: &Presentation, g: &FiniteGroup) -> Result<Vec<Hom>, HomError> {
        let total = self.check_cap(p, g)?;
        let search = self.full_search(p, g);
        let mut out = Vec::with_capacity(total as usize);
        let mut img = vec![0u32; p.generator_count()];
        search.walk_all(0, &mut img, &mut |h| {
            out.push(search.to_hom(h, p.generator_count()));
            true
        });
        Ok(out)
    }
}
