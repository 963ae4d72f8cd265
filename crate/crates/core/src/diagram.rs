//! Spine diagrams of handlebody links and their Wirtinger presentations.
//!
//! Text form (arcs are numbered `1..=N`, `#` starts a comment):
//!
//! ```text
//! arcs 3
//! x + 1 3 2          # sign, under-incoming arc, over arc, under-outgoing arc
//! v 1:in 2:out 3:out # trivalent vertex, incidences in cyclic order
//! ```
//!
//! A crossing `x s a o c` contributes the relator `m_c = m_o^s m_a m_o^-s`.
//! A vertex contributes the product of its incident meridians in the listed
//! order, incoming arcs with exponent `+1` and outgoing arcs with `-1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::presentation::{default_names, Letter, Presentation, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    fn conjugator_inverse(self) -> bool {
        matches!(self, Sign::Negative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub sign: Sign,
    pub under_in: usize,
    pub over: usize,
    pub under_out: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    /// The arc ends at the vertex.
    In,
    /// The arc starts at the vertex.
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub ends: [(usize, End); 3],
}

/// Crossings and trivalent vertices over `arc_count` oriented arcs (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramCode {
    arc_count: usize,
    crossings: Vec<Crossing>,
    vertices: Vec<Vertex>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: arc {arc} is out of range 1..={count}")]
    ArcOutOfRange {
        line: usize,
        arc: usize,
        count: usize,
    },
    #[error("arc {arc} has {heads} incoming and {tails} outgoing ends; expected one of each")]
    DegreeMismatch {
        arc: usize,
        heads: usize,
        tails: usize,
    },
    #[error("arc {arc} is dangling: it has a {present} end but no {missing} end")]
    Dangling {
        arc: usize,
        present: &'static str,
        missing: &'static str,
    },
}

impl DiagramCode {
    /// Validates that every arc has exactly one start and one end, or none
    /// at all (a closed circle with no under-crossings).
    pub fn new(
        arc_count: usize,
        crossings: Vec<Crossing>,
        vertices: Vec<Vertex>,
    ) -> Result<Self, DiagramError> {
        let mut heads = vec![0usize; arc_count];
        let mut tails = vec![0usize; arc_count];
        let check = |arc: usize| {
            if arc >= arc_count {
                Err(DiagramError::ArcOutOfRange {
                    line: 0,
                    arc: arc + 1,
                    count: arc_count,
                })
            } else {
                Ok(())
            }
        };
        for c in &crossings {
            check(c.under_in)?;
            check(c.over)?;
            check(c.under_out)?;
            heads[c.under_in] += 1;
            tails[c.under_out] += 1;
        }
        for v in &vertices {
            for &(arc, end) in &v.ends {
                check(arc)?;
                match end {
                    End::In => heads[arc] += 1,
                    End::Out => tails[arc] += 1,
                }
            }
        }
        for arc in 0..arc_count {
            match (heads[arc], tails[arc]) {
                (0, 0) | (1, 1) => {}
                (1, 0) => {
                    return Err(DiagramError::Dangling {
                        arc: arc + 1,
                        present: "incoming",
                        missing: "outgoing",
                    })
                }
                (0, 1) => {
                    return Err(DiagramError::Dangling {
                        arc: arc + 1,
                        present: "outgoing",
                        missing: "incoming",
                    })
                }
                (h, t) => {
                    return Err(DiagramError::DegreeMismatch {
                        arc: arc + 1,
                        heads: h,
                        tails: t,
                    })
                }
            }
        }
        Ok(DiagramCode {
            arc_count,
            crossings,
            vertices,
        })
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Closure of a braid on `strands` strands. Letter `i > 0` is the Artin
    /// generator `s_i` (strand `i` passes over strand `i+1`), `-i` its inverse.
    pub fn braid_closure(strands: usize, word: &[i32]) -> Result<Self, DiagramError> {
        let mut parent: Vec<usize> = (0..strands).collect();
        let mut current: Vec<usize> = (0..strands).collect();
        let mut raw = Vec::new();
        let fresh = |parent: &mut Vec<usize>| {
            parent.push(parent.len());
            parent.len() - 1
        };
        for (pos, &letter) in word.iter().enumerate() {
            let i = letter.unsigned_abs() as usize;
            if letter == 0 || i >= strands {
                return Err(DiagramError::Syntax {
                    line: pos + 1,
                    message: format!("braid letter {letter} out of range for {strands} strands"),
                });
            }
            let (left, right) = (i - 1, i);
            let new_arc = fresh(&mut parent);
            if letter > 0 {
                raw.push(Crossing {
                    sign: Sign::Positive,
                    under_in: current[right],
                    over: current[left],
                    under_out: new_arc,
                });
                current[right] = current[left];
                current[left] = new_arc;
            } else {
                raw.push(Crossing {
                    sign: Sign::Negative,
                    under_in: current[left],
                    over: current[right],
                    under_out: new_arc,
                });
                current[left] = current[right];
                current[right] = new_arc;
            }
        }
        // close up: the arc leaving the bottom at position p is the one entering the top
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for (p, &cur) in current.iter().enumerate().take(strands) {
            let a = find(&mut parent, cur);
            let b = find(&mut parent, p);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; parent.len()];
        let mut count = 0;
        let mut relabel = |x: usize, parent: &mut Vec<usize>| {
            let r = find(parent, x);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            label[r]
        };
        let mut crossings = Vec::with_capacity(raw.len());
        for c in raw {
            crossings.push(Crossing {
                sign: c.sign,
                under_in: relabel(c.under_in, &mut parent),
                over: relabel(c.over, &mut parent),
                under_out: relabel(c.under_out, &mut parent),
            });
        }
        for p in 0..strands {
            relabel(p, &mut parent);
        }
        DiagramCode::new(count, crossings, Vec::new())
    }

    /// Renames arc `i` to `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> DiagramCode {
        DiagramCode {
            arc_count: self.arc_count,
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing {
                    sign: c.sign,
                    under_in: perm[c.under_in],
                    over: perm[c.over],
                    under_out: perm[c.under_out],
                })
                .collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    ends: v.ends.map(|(a, e)| (perm[a], e)),
                })
                .collect(),
        }
    }

    /// Disjoint union of two diagrams (a split link).
    pub fn disjoint_union(&self, other: &DiagramCode) -> DiagramCode {
        let shift: Vec<usize> = (self.arc_count..self.arc_count + other.arc_count).collect();
        let moved = other.relabeled(&shift);
        let mut crossings = self.crossings.clone();
        crossings.extend(moved.crossings);
        let mut vertices = self.vertices.clone();
        vertices.extend(moved.vertices);
        DiagramCode {
            arc_count: self.arc_count + other.arc_count,
            crossings,
            vertices,
        }
    }

    /// One generator per arc, one relator per crossing and per vertex.
    pub fn wirtinger(&self) -> Presentation {
        let mut relators = Vec::with_capacity(self.crossings.len() + self.vertices.len());
        for c in &self.crossings {
            let inv = c.sign.conjugator_inverse();
            relators.push(Word::new(vec![
                Letter::new(c.under_out, false),
                Letter::new(c.over, inv),
                Letter::new(c.under_in, true),
                Letter::new(c.over, !inv),
            ]));
        }
        for v in &self.vertices {
            relators.push(Word::new(
                v.ends
                    .iter()
                    .map(|&(arc, end)| Letter::new(arc, end == End::Out))
                    .collect(),
            ));
        }
        Presentation::new(default_names(self.arc_count), relators)
            .expect("arc indices are validated")
    }

    /// Genus and type vector of the underlying spatial graph.
    ///
    /// Arcs joined through an under-crossing form one edge; trivalent
    /// vertices are the nodes. Each connected component has genus
    /// `E - V + 1`, and a vertexless circle has genus 1.
    pub fn genus_and_type(&self) -> (usize, Vec<usize>) {
        let n_arcs = self.arc_count;
        let n_vertices = self.vertices.len();
        // union-find over arcs followed by vertices
        let mut parent: Vec<usize> = (0..n_arcs + n_vertices).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        fn union(parent: &mut [usize], a: usize, b: usize) {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        // first pass: edges as classes of arcs
        let mut edge_of: Vec<usize> = (0..n_arcs).collect();
        for c in &self.crossings {
            union(&mut edge_of, c.under_in, c.under_out);
        }
        let edges: Vec<usize> = (0..n_arcs).map(|a| find(&mut edge_of, a)).collect();
        let mut edge_ids: Vec<usize> = edges.clone();
        edge_ids.sort_unstable();
        edge_ids.dedup();

        // second pass: components over edges and vertices
        for c in &self.crossings {
            union(&mut parent, c.under_in, c.under_out);
        }
        for (v, vert) in self.vertices.iter().enumerate() {
            for &(arc, _) in &vert.ends {
                union(&mut parent, arc, n_arcs + v);
            }
        }
        let mut comps: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
        for &e in &edge_ids {
            let root = find(&mut parent, e);
            comps.entry(root).or_default().0 += 1;
        }
        for v in 0..n_vertices {
            let root = find(&mut parent, n_arcs + v);
            comps.entry(root).or_default().1 += 1;
        }
        let genera: Vec<usize> = comps
            .values()
            .map(|&(e, v)| if v == 0 { 1 } else { e + 1 - v })
            .collect();
        let max = genera.iter().copied().max().unwrap_or(0);
        let mut type_vector = vec![0usize; max];
        for &g in &genera {
            if g > 0 {
                type_vector[g - 1] += 1;
            }
        }
        (genera.iter().sum(), type_vector)
    }
}

fn parse_arc(token: &str, line: usize, count: usize) -> Result<usize, DiagramError> {
    let arc: usize = token.parse().map_err(|_| DiagramError::Syntax {
        line,
        message: format!("expected an arc number, found `{token}`"),
    })?;
    if arc == 0 || arc > count {
        return Err(DiagramError::ArcOutOfRange { line, arc, count });
    }
    Ok(arc - 1)
}

impl FromStr for DiagramCode {
    type Err = DiagramError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut arc_count: Option<usize> = None;
        let mut crossings = Vec::new();
        let mut vertices = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let syntax = |message: String| DiagramError::Syntax { line, message };
            let tokens: Vec<&str> = raw
                .split('#')
                .next()
                .unwrap_or("")
                .split_whitespace()
                .collect();
            let Some((&keyword, args)) = tokens.split_first() else {
                continue;
            };
            match keyword {
                "arcs" => {
                    if arc_count.is_some() {
                        return Err(syntax("second `arcs` line".into()));
                    }
                    let [n] = args else {
                        return Err(syntax("expected `arcs N`".into()));
                    };
                    arc_count = Some(
                        n.parse()
                            .map_err(|_| syntax(format!("bad arc count `{n}`")))?,
                    );
                }
                "x" => {
                    let count = arc_count.ok_or_else(|| syntax("crossing before `arcs`".into()))?;
                    let [sign, a, o, c] = args else {
                        return Err(syntax("expected `x <+|-> <in> <over> <out>`".into()));
                    };
                    let sign = match *sign {
                        "+" => Sign::Positive,
                        "-" => Sign::Negative,
                        s => return Err(syntax(format!("bad crossing sign `{s}`"))),
                    };
                    crossings.push(Crossing {
                        sign,
                        under_in: parse_arc(a, line, count)?,
                        over: parse_arc(o, line, count)?,
                        under_out: parse_arc(c, line, count)?,
                    });
                }
                "v" => {
                    let count = arc_count.ok_or_else(|| syntax("vertex before `arcs`".into()))?;
                    if args.len() != 3 {
                        return Err(syntax(format!(
                            "a vertex needs exactly 3 incidences, found {}",
                            args.len()
                        )));
                    }
                    let mut ends = [(0, End::In); 3];
                    for (slot, token) in ends.iter_mut().zip(args) {
                        let (arc, dir) = token.split_once(':').ok_or_else(|| {
                            syntax(format!("expected `<arc>:in|out`, found `{token}`"))
                        })?;
                        let end = match dir {
                            "in" => End::In,
                            "out" => End::Out,
                            d => return Err(syntax(format!("bad direction `{d}`"))),
                        };
                        *slot = (parse_arc(arc, line, count)?, end);
                    }
                    vertices.push(Vertex { ends });
                }
                other => return Err(syntax(format!("unknown directive `{other}`"))),
            }
        }
        let arc_count = arc_count.ok_or(DiagramError::Syntax {
            line: 1,
            message: "missing `arcs` line".into(),
        })?;
        DiagramCode::new(arc_count, crossings, vertices)
    }
}

impl fmt::Display for DiagramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arcs {}", self.arc_count)?;
        for c in &self.crossings {
            let s = if c.sign == Sign::Positive { '+' } else { '-' };
            writeln!(
                f,
                "x {s} {} {} {}",
                c.under_in + 1,
                c.over + 1,
                c.under_out + 1
            )?;
        }
        for v in &self.vertices {
            write!(f, "v")?;
            for (arc, end) in v.ends {
                let d = if end == End::In { "in" } else { "out" };
                write!(f, " {}:{d}", arc + 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn parse_diagram(text: &str) -> Result<DiagramCode, DiagramError> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "arcs 3\nx + 1 3 2\nx + 2 1 3\nx + 3 2 1\n";
    pub(crate) const THETA: &str = "arcs 3\nv 1:out 2:out 3:out\nv 3:in 2:in 1:in\n";

    #[test]
    fn parse_examples() {
        let d = parse_diagram(TREFOIL).unwrap();
        assert_eq!(d.arc_count(), 3);
        assert_eq!(d.crossings().len(), 3);
        let theta = parse_diagram(THETA).unwrap();
        assert_eq!(theta.vertices().len(), 2);
        assert!(matches!(
            parse_diagram("arcs 3\nx + 1 9 2\n"),
            Err(DiagramError::ArcOutOfRange {
                line: 2,
                arc: 9,
                count: 3
            })
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_diagram("arcs 2\nx + 1 2 2\n"),
            Err(DiagramError::Dangling { arc: 1, .. })
        ));
        assert!(matches!(
            parse_diagram("arcs 1\nx + 1 1 1\nx + 1 1 1\n"),
            Err(DiagramError::DegreeMismatch {
                arc: 1,
                heads: 2,
                tails: 2
            })
        ));
        assert!(matches!(
            parse_diagram("x + 1 2 3"),
            Err(DiagramError::Syntax { .. })
        ));
        assert!(matches!(
            parse_diagram("arcs 3\nx * 1 2 3"),
            Err(DiagramError::Syntax { .. })
        ));
        assert!(matches!(
            parse_diagram("arcs 3\nv 1:in 2:in"),
            Err(DiagramError::Syntax { .. })
        ));
        assert!(matches!(
            parse_diagram("arcs 3\nv 1:in 2:in 3:up"),
            Err(DiagramError::Syntax { .. })
        ));
        assert!(matches!(
            parse_diagram("arcs 0\nvertex"),
            Err(DiagramError::Syntax { .. })
        ));
        assert!(matches!(
            parse_diagram(""),
            Err(DiagramError::Syntax { .. })
        ));
    }

    #[test]
    fn wirtinger_shapes() {
        let p = parse_diagram(TREFOIL).unwrap().wirtinger();
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.relators().len(), 3);
        assert_eq!(p.format_word(&p.relators()[0]), "bcAC");

        let unknot = parse_diagram("arcs 1\n").unwrap().wirtinger();
        assert_eq!(unknot.generator_count(), 1);
        assert!(unknot.relators().is_empty());

        let theta = parse_diagram(THETA).unwrap().wirtinger();
        assert_eq!(theta.abelianization().free_rank, 2);
        assert!(theta.abelianization().is_free_abelian());
    }

    #[test]
    fn genus_and_type_examples() {
        assert_eq!(
            parse_diagram(TREFOIL).unwrap().genus_and_type(),
            (1, vec![1])
        );
        assert_eq!(
            parse_diagram(THETA).unwrap().genus_and_type(),
            (2, vec![0, 1])
        );
        assert_eq!(
            parse_diagram("arcs 2\n").unwrap().genus_and_type(),
            (2, vec![2])
        );
        // handcuff graph: two loops joined by a bar, arcs 1,2 loops, 3 the bar
        let handcuff = parse_diagram("arcs 3\nv 1:out 1:in 3:out\nv 3:in 2:out 2:in\n").unwrap();
        assert_eq!(handcuff.genus_and_type(), (2, vec![0, 1]));
        // theta next to a circle
        let mixed = parse_diagram(THETA)
            .unwrap()
            .disjoint_union(&parse_diagram("arcs 1").unwrap());
        assert_eq!(mixed.genus_and_type(), (3, vec![1, 1]));
    }

    #[test]
    fn braid_closures() {
        let trefoil = DiagramCode::braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(trefoil.genus_and_type(), (1, vec![1]));
        assert_eq!(trefoil.arc_count(), 3);
        let hopf = DiagramCode::braid_closure(2, &[1, 1]).unwrap();
        assert_eq!(hopf.genus_and_type(), (2, vec![2]));
        let chain = DiagramCode::braid_closure(3, &[1, 1, 2, 2]).unwrap();
        assert_eq!(chain.genus_and_type(), (3, vec![3]));
        let unlink = DiagramCode::braid_closure(2, &[]).unwrap();
        assert_eq!(unlink.genus_and_type(), (2, vec![2]));
        assert!(DiagramCode::braid_closure(2, &[2]).is_err());
        assert!(DiagramCode::braid_closure(2, &[0]).is_err());
    }

    #[test]
    fn display_round_trip() {
        for text in [TREFOIL, THETA, "arcs 2\n"] {
            let d = parse_diagram(text).unwrap();
            assert_eq!(parse_diagram(&d.to_string()).unwrap(), d);
        }
        let fig8 = DiagramCode::braid_closure(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!(parse_diagram(&fig8.to_string()).unwrap(), fig8);
    }

    #[test]
    fn link_relators_preserve_exponent_sums_per_component() {
        let d = DiagramCode::braid_closure(3, &[1, 1, 2, -2, 2, 1]).unwrap();
        let mut comp: Vec<usize> = (0..d.arc_count()).collect();
        fn root(comp: &[usize], mut x: usize) -> usize {
            while comp[x] != x {
                x = comp[x];
            }
            x
        }
        for c in d.crossings() {
            let (a, b) = (root(&comp, c.under_in), root(&comp, c.under_out));
            comp[a.max(b)] = a.min(b);
        }
        let p = d.wirtinger();
        for w in p.relators() {
            let mut sums = vec![0i64; d.arc_count()];
            for l in w.letters() {
                sums[root(&comp, l.generator)] += l.exponent();
            }
            assert!(sums.iter().all(|&s| s == 0));
        }
    }
}
