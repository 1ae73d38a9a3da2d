//! Orbits of vector classes under `<P1, P2>` and Schreier coset graphs.
//!
//! The Veech group of `Y_h` is the stabilizer of the class `[h]`, so the orbit
//! of `[h]` is in bijection with its cosets. `-Id` is left out of the search: it
//! acts on vectors as the automorphism `g -> -g` and is therefore trivial on
//! classes.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::action::{act_p1, act_p1_inv, act_p2, act_p2_inv, GeneratorLetter, Word};
use crate::bivector::{EpVector, VectorClass};
use crate::error::{Error, Result};
use crate::finite_index::decide_finite_index;

/// Hard ceiling for [`veech_index`] after the decision procedure said "finite".
pub const MAX_FINITE_ORBIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGraph {
    /// Vertex 0 is the class of the input vector.
    pub vertices: Vec<VectorClass>,
    /// `p1[v]` is the vertex of `P1 . v`; `None` for vertices never expanded.
    pub p1: Vec<Option<usize>>,
    pub p2: Vec<Option<usize>>,
    pub complete: bool,
    pub cap_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphType {
    /// A path with a loop at each end.
    Striezel,
    /// A single cycle alternating `P1` and `P2` edges, without loops.
    Kranz,
    Other(String),
}

impl GraphType {
    pub fn name(&self) -> &'static str {
        match self {
            GraphType::Striezel => "striezel",
            GraphType::Kranz => "kranz",
            GraphType::Other(_) => "other",
        }
    }
}

impl SchreierGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn require_complete(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        if !self.complete {
            return Err(Error::IncompleteGraph);
        }
        let unwrap = |edges: &[Option<usize>]| -> Result<Vec<usize>> {
            edges
                .iter()
                .map(|e| e.ok_or(Error::IncompleteGraph))
                .collect()
        };
        Ok((unwrap(&self.p1)?, unwrap(&self.p2)?))
    }
}

/// Breadth-first closure of `[h]` under `P1`, `P1^-1`, `P2`, `P2^-1`.
///
/// Stops with `complete = false` and `cap_hit = true` as soon as more than
/// `cap` classes have been discovered.
pub fn orbit_bfs(h: &EpVector, cap: usize) -> Result<SchreierGraph> {
    let start = h.canonical_class()?;
    // the only interior mutability is the group's automorphism cache, which hashing ignores
    #[allow(clippy::mutable_key_type)]
    let mut index: FxHashMap<VectorClass, usize> = FxHashMap::default();
    let mut vertices = vec![start.clone()];
    let mut p1 = vec![None];
    let mut p2 = vec![None];
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);

    let moves: [fn(&EpVector) -> EpVector; 4] = [act_p1, act_p2, act_p1_inv, act_p2_inv];
    while let Some(v) = queue.pop_front() {
        let rep = vertices[v].representative().clone();
        for (slot, mv) in moves.iter().enumerate() {
            let class = mv(&rep).canonical_class()?;
            let target = match index.get(&class) {
                Some(&t) => t,
                None => {
                    if vertices.len() >= cap {
                        return Ok(SchreierGraph {
                            vertices,
                            p1,
                            p2,
                            complete: false,
                            cap_hit: true,
                        });
                    }
                    let t = vertices.len();
                    index.insert(class.clone(), t);
                    vertices.push(class);
                    p1.push(None);
                    p2.push(None);
                    queue.push_back(t);
                    t
                }
            };
            match slot {
                0 => p1[v] = Some(target),
                1 => p2[v] = Some(target),
                _ => {}
            }
        }
    }
    Ok(SchreierGraph {
        vertices,
        p1,
        p2,
        complete: true,
        cap_hit: false,
    })
}

/// Size of the orbit of `[h]`, explored up to `cap` classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSize {
    pub size: usize,
    pub complete: bool,
}

/// Like [`orbit_bfs`] but only counts classes.
///
/// Over `Z2` the automorphism group is trivial and `P1`, `P2` are involutions
/// on vectors, so the orbit is a path or a cycle alternating the two letters.
/// It is then walked in both directions without storing visited vectors.
pub fn orbit_size(h: &EpVector, cap: usize) -> Result<OrbitSize> {
    if h.group().order() == 2 {
        return Ok(z2::walk(h, cap));
    }
    let g = orbit_bfs(h, cap)?;
    Ok(OrbitSize {
        size: g.len(),
        complete: g.complete,
    })
}

mod z2 {
    use std::collections::VecDeque;

    use super::OrbitSize;
    use crate::bivector::{EpVector, Tail};
    #[cfg(test)]
    use crate::group::FinAbGroup;

    /// One tail over `Z2`; the effective bit is `stored ^ flip`.
    #[derive(Clone, Debug)]
    struct BitTail {
        prefix: VecDeque<u8>,
        period: VecDeque<u8>,
        flip: u8,
    }

    impl BitTail {
        fn from_tail(t: &Tail) -> Self {
            let bit = |x: &crate::group::GroupElem| x.residues()[0] as u8;
            BitTail {
                prefix: t.prefix.iter().map(bit).collect(),
                period: t.period.iter().map(bit).collect(),
                flip: 0,
            }
        }

        fn first(&self) -> u8 {
            self.get(1)
        }

        /// Effective entry at outward position `i >= 1`.
        fn get(&self, i: usize) -> u8 {
            let i = i - 1;
            let stored = if i < self.prefix.len() {
                self.prefix[i]
            } else {
                self.period[(i - self.prefix.len()) % self.period.len()]
            };
            stored ^ self.flip
        }

        /// Drops `h_1`, shifting every entry one step inward.
        fn drop_first(&mut self) {
            if self.prefix.pop_front().is_none() {
                self.period.rotate_left(1);
            }
        }

        /// Inserts a new innermost entry.
        fn push_first(&mut self, bit: u8) {
            self.prefix.push_front(bit ^ self.flip);
            self.normalize();
        }

        fn normalize(&mut self) {
            while let (Some(p), Some(q)) = (self.prefix.back(), self.period.back()) {
                if p != q {
                    break;
                }
                self.prefix.pop_back();
                self.period.rotate_right(1);
            }
        }

        fn bits(&self) -> impl Iterator<Item = u8> + '_ {
            self.prefix
                .iter()
                .chain(&self.period)
                .map(move |b| b ^ self.flip)
        }

        fn same(&self, other: &BitTail) -> bool {
            self.prefix.len() == other.prefix.len()
                && self.period.len() == other.period.len()
                && self.bits().eq(other.bits())
        }

        #[cfg(test)]
        fn to_tail(&self, g: &FinAbGroup) -> Tail {
            let elem = |b: u8| g.elem(&[i64::from(b ^ self.flip)]).expect("bit");
            Tail::new(
                self.prefix.iter().map(|&b| elem(b)).collect(),
                self.period.iter().map(|&b| elem(b)).collect(),
            )
            .expect("non-empty period")
        }
    }

    #[derive(Clone, Debug)]
    pub(super) struct BitVector {
        right: BitTail,
        left: BitTail,
    }

    impl BitVector {
        pub(super) fn new(h: &EpVector) -> Self {
            BitVector {
                right: BitTail::from_tail(h.right()),
                left: BitTail::from_tail(h.left()),
            }
        }

        /// `(P1 h)_k = h_{-k}` over `Z2`.
        pub(super) fn p1(&mut self) {
            std::mem::swap(&mut self.right, &mut self.left);
        }

        /// `(P2 h)_k = h_{-1} + h_{-k-1}` for `k != -1`, and `(P2 h)_{-1} = h_{-1}`.
        pub(super) fn p2(&mut self) {
            let c = self.left.first();
            std::mem::swap(&mut self.left, &mut self.right);
            self.right.drop_first();
            self.right.flip ^= c;
            self.left.push_first(0);
            self.left.flip ^= c;
        }

        pub(super) fn p1_fixed(&self) -> bool {
            self.right.same(&self.left)
        }

        /// `P2 h = h` iff `h_k = h_{-1} + h_{-k-1}` for all `k >= 1`.
        pub(super) fn p2_fixed(&self) -> bool {
            // both tails are normalized, so equal sequences have equal shapes
            if self.right.period.len() != self.left.period.len()
                || self.right.prefix.len() != self.left.prefix.len().saturating_sub(1)
            {
                return false;
            }
            let c = self.left.first();
            let reach = self.right.prefix.len().max(self.left.prefix.len())
                + num::integer::lcm(self.right.period.len(), self.left.period.len())
                + 1;
            (1..=reach).all(|k| self.right.get(k) == c ^ self.left.get(k + 1))
        }

        pub(super) fn same(&self, other: &BitVector) -> bool {
            self.right.same(&other.right) && self.left.same(&other.left)
        }

        #[cfg(test)]
        pub(super) fn to_vector(&self, g: &FinAbGroup) -> EpVector {
            EpVector::new(g.clone(), self.right.to_tail(g), self.left.to_tail(g))
                .expect("Z2 vector")
        }
    }

    pub(super) fn walk(h: &EpVector, cap: usize) -> OrbitSize {
        let start = BitVector::new(h);
        let mut size = 1;
        // walk first with P1 first, then (if that end was a loop) with P2 first
        for first_p1 in [true, false] {
            let mut cur = start.clone();
            let mut use_p1 = first_p1;
            loop {
                if use_p1 {
                    if cur.p1_fixed() {
                        break;
                    }
                    cur.p1();
                } else {
                    if cur.p2_fixed() {
                        break;
                    }
                    cur.p2();
                }
                if cur.same(&start) {
                    return OrbitSize {
                        size,
                        complete: true,
                    };
                }
                if size >= cap {
                    return OrbitSize {
                        size,
                        complete: false,
                    };
                }
                size += 1;
                use_p1 = !use_p1;
            }
        }
        OrbitSize {
            size,
            complete: true,
        }
    }
}

/// `[Gamma(X) : Gamma(Y_h)]`, or `None` when the index is infinite.
///
/// The orbit search starts with cap `4 d dn` and doubles it until the orbit
/// closes. A "finite" verdict whose orbit exceeds [`MAX_FINITE_ORBIT`] is an
/// internal inconsistency and is reported as an error.
pub fn veech_index(h: &EpVector) -> Result<Option<u64>> {
    Ok(finite_orbit(h)?.map(|g| g.len() as u64))
}

/// The complete Schreier graph when the index is finite.
pub fn finite_orbit(h: &EpVector) -> Result<Option<SchreierGraph>> {
    let verdict = decide_finite_index(h);
    if !verdict.finite {
        return Ok(None);
    }
    let mut cap = (4 * h.group().order() * verdict.checked_window).max(1) as usize;
    loop {
        let graph = orbit_bfs(h, cap.min(MAX_FINITE_ORBIT))?;
        if graph.complete {
            return Ok(Some(graph));
        }
        if cap >= MAX_FINITE_ORBIT {
            return Err(Error::Inconsistency(format!(
                "decision procedure says finite but the orbit of {h} exceeds {MAX_FINITE_ORBIT} classes"
            )));
        }
        cap *= 2;
    }
}

/// Rank of the free group `PGamma(Y_h)`: `n (2 - 1) + 1` for index `n`.
pub fn projective_rank(h: &EpVector) -> Result<Option<u64>> {
    Ok(veech_index(h)?.map(|n| n + 1))
}

/// Shape of a complete graph. `P1` and `P2` must both be involutions on the
/// vertices; a connected graph of two involutions is a path when there are
/// exactly two loops and a cycle when there are none.
pub fn classify_type(g: &SchreierGraph) -> Result<GraphType> {
    let (p1, p2) = g.require_complete()?;
    let n = p1.len();
    for (name, edges) in [("P1", &p1), ("P2", &p2)] {
        if let Some(v) = (0..n).find(|&v| edges[edges[v]] != v) {
            return Ok(GraphType::Other(format!(
                "{name} is not an involution at vertex {v}"
            )));
        }
    }
    let loops = (0..n).filter(|&v| p1[v] == v).count() + (0..n).filter(|&v| p2[v] == v).count();
    Ok(match loops {
        2 => GraphType::Striezel,
        0 if n % 2 == 0 => GraphType::Kranz,
        _ => GraphType::Other(format!("{loops} loops on {n} vertices")),
    })
}

/// Schreier generators of the stabilizer of vertex 0, read off a BFS spanning
/// tree: for every non-tree edge `v --X--> u` the word `t(u)^-1 X t(v)`, where
/// `t(v)` carries vertex 0 to `v`. A complete graph with `n` vertices yields
/// `n + 1` generators.
pub fn stabilizer_generators(g: &SchreierGraph) -> Result<Vec<Word>> {
    let (p1, p2) = g.require_complete()?;
    let n = p1.len();
    let invert = |perm: &[usize]| {
        let mut inv = vec![0; perm.len()];
        for (v, &t) in perm.iter().enumerate() {
            inv[t] = v;
        }
        inv
    };
    let (p1_inv, p2_inv) = (invert(&p1), invert(&p2));

    let mut tree: Vec<Option<Word>> = vec![None; n];
    // tree edges as (source, letter slot) pairs
    let mut tree_edges = HashSet::new();
    tree[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let tv = tree[v].clone().expect("visited");
        let steps = [
            (p1[v], GeneratorLetter::P1, (v, 0)),
            (p2[v], GeneratorLetter::P2, (v, 1)),
            (p1_inv[v], GeneratorLetter::P1Inv, (p1_inv[v], 0)),
            (p2_inv[v], GeneratorLetter::P2Inv, (p2_inv[v], 1)),
        ];
        for (u, letter, edge) in steps {
            if tree[u].is_none() {
                tree[u] = Some(Word::letter(letter).then_left(&tv));
                tree_edges.insert(edge);
                queue.push_back(u);
            }
        }
    }

    let mut gens = Vec::new();
    for v in 0..n {
        for (slot, (target, letter)) in [(p1[v], GeneratorLetter::P1), (p2[v], GeneratorLetter::P2)]
            .into_iter()
            .enumerate()
        {
            if tree_edges.contains(&(v, slot)) {
                continue;
            }
            let tu = tree[target].as_ref().expect("connected");
            let tv = tree[v].as_ref().expect("connected");
            gens.push(tu.inverse().then_left(&Word::letter(letter)).then_left(tv));
        }
    }
    Ok(gens)
}

/// Deterministic DOT rendering with vectors as vertex labels.
pub fn schreier_dot(g: &SchreierGraph) -> String {
    OrbitReport::from_graph("", g).to_dot()
}

/// JSON-serializable summary of an orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct OrbitReport {
    pub group: String,
    /// Number of classes found (the index when `complete`).
    pub order: usize,
    pub complete: bool,
    pub vertices: Vec<String>,
    pub p1_edges: Vec<Option<usize>>,
    pub p2_edges: Vec<Option<usize>>,
    #[serde(rename = "type")]
    pub graph_type: Option<String>,
}

impl OrbitReport {
    pub fn from_graph(group: &str, g: &SchreierGraph) -> Self {
        let graph_type = classify_type(g).ok().map(|t| t.name().to_string());
        OrbitReport {
            group: group.to_string(),
            order: g.len(),
            complete: g.complete,
            vertices: g.vertices.iter().map(|v| v.to_string()).collect(),
            p1_edges: g.p1.clone(),
            p2_edges: g.p2.clone(),
            graph_type,
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph schreier {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{v}\"];");
        }
        for i in 0..self.vertices.len() {
            for (label, edges) in [("P1", &self.p1_edges), ("P2", &self.p2_edges)] {
                if let Some(t) = edges[i] {
                    let _ = writeln!(out, "  v{i} -> v{t} [label=\"{label}\"];");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::act_neg;
    use crate::group::FinAbGroup;

    fn v(group: &str, text: &str) -> EpVector {
        EpVector::parse(&FinAbGroup::parse(group).unwrap(), text).unwrap()
    }

    #[test]
    fn w1_orbit_is_a_single_vertex() {
        let h = v("Z2", "L=(1,0);R=(1,0)");
        let g = orbit_bfs(&h, 100).unwrap();
        assert!(g.complete && !g.cap_hit);
        assert_eq!(g.len(), 1);
        assert_eq!((g.p1[0], g.p2[0]), (Some(0), Some(0)));
        assert_eq!(veech_index(&h).unwrap(), Some(1));
        assert_eq!(projective_rank(&h).unwrap(), Some(2));
        assert_eq!(classify_type(&g).unwrap(), GraphType::Striezel);
        let gens = stabilizer_generators(&g).unwrap();
        let names: Vec<String> = gens.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["P1", "P2"]);
    }

    #[test]
    fn w2_orbit_swaps_under_p1() {
        let h01 = v("Z2", "L=(1,1,0,0);R=(0,1,1,0)");
        let h11 = v("Z2", "L=(0,1,1,0);R=(1,1,0,0)");
        let g = orbit_bfs(&h01, 100).unwrap();
        assert!(g.complete);
        assert_eq!(g.len(), 2);
        assert_eq!(g.vertices[1].representative(), &h11);
        assert_eq!(g.p1, vec![Some(1), Some(0)]);
        assert_eq!(g.p2, vec![Some(0), Some(1)]);
        assert_eq!(classify_type(&g).unwrap(), GraphType::Striezel);
        assert_eq!(projective_rank(&h01).unwrap(), Some(3));

        let gens = stabilizer_generators(&g).unwrap();
        assert_eq!(gens.len(), 3);
        let class = h01.canonical_class().unwrap();
        for w in &gens {
            assert_eq!(w.act(&h01).canonical_class().unwrap(), class, "{w}");
        }
    }

    #[test]
    fn infinite_orbit_hits_the_cap() {
        let h = v("Z2", "L=(0);R=1|(0)");
        let g = orbit_bfs(&h, 1000).unwrap();
        assert!(!g.complete && g.cap_hit);
        assert_eq!(g.len(), 1000);
        assert_eq!(veech_index(&h).unwrap(), None);
        assert_eq!(projective_rank(&h).unwrap(), None);
        assert_eq!(classify_type(&g), Err(Error::IncompleteGraph));
        assert_eq!(stabilizer_generators(&g), Err(Error::IncompleteGraph));
    }

    #[test]
    fn negation_is_trivial_on_classes() {
        for (grp, text) in [("Z3", "L=2,1|(0,1);R=1|(2)"), ("Z4", "L=(1,3);R=2|(1)")] {
            let h = v(grp, text);
            assert_eq!(
                act_neg(&h).canonical_class().unwrap(),
                h.canonical_class().unwrap()
            );
        }
    }

    #[test]
    fn z3_fixed_point_has_finite_orbit() {
        let h = v("Z3", "L=(1,0,2);R=(2,0,1)");
        let g = finite_orbit(&h).unwrap().expect("finite");
        assert!(g.complete);
        let gens = stabilizer_generators(&g).unwrap();
        assert_eq!(gens.len(), g.len() + 1);
        let class = h.canonical_class().unwrap();
        for w in &gens {
            assert_eq!(w.act(&h).canonical_class().unwrap(), class, "{w}");
        }
    }

    #[test]
    fn z2_bit_action_matches_general_action() {
        let g = FinAbGroup::cyclic(2).unwrap();
        for text in [
            "L=(0);R=1|(0)",
            "L=1,0|(0,1);R=0,0,1|(1)",
            "L=(1,0);R=(1,0)",
            "L=(0,1,1,0);R=1|(1,0,0)",
        ] {
            let h = v("Z2", text);
            let mut fast = z2::BitVector::new(&h);
            let mut slow = h.clone();
            for step in 0..40 {
                if step % 3 == 0 {
                    fast.p1();
                    slow = act_p1(&slow);
                } else {
                    fast.p2();
                    slow = act_p2(&slow);
                }
                assert_eq!(fast.to_vector(&g), slow, "{text} step {step}");
                assert_eq!(fast.p1_fixed(), act_p1(&slow) == slow, "{text} step {step}");
                assert_eq!(fast.p2_fixed(), act_p2(&slow) == slow, "{text} step {step}");
            }
            assert_eq!(act_p1_inv(&h), act_p1(&h));
            assert_eq!(act_p2_inv(&h), act_p2(&h));
        }
    }

    #[test]
    fn z2_walk_agrees_with_bfs() {
        for text in [
            "L=(0);R=1|(0)",
            "L=(1,0);R=(1,0)",
            "L=(1,1,0,0);R=(0,1,1,0)",
            "L=(1);R=0|(1)",
            "L=0,1|(1,0,0);R=(0,1,1)",
        ] {
            let h = v("Z2", text);
            for cap in [1, 2, 3, 50, 300] {
                let g = orbit_bfs(&h, cap).unwrap();
                let s = orbit_size(&h, cap).unwrap();
                assert_eq!(
                    (s.size, s.complete),
                    (g.len(), g.complete),
                    "{text} cap {cap}"
                );
            }
        }
    }

    #[test]
    fn dot_output_is_stable() {
        let g = orbit_bfs(&v("Z2", "L=(1,0);R=(1,0)"), 10).unwrap();
        let dot = schreier_dot(&g);
        assert_eq!(
            dot,
            "digraph schreier {\n  v0 [label=\"L=(1,0);R=(1,0)\"];\n  v0 -> v0 [label=\"P1\"];\n  v0 -> v0 [label=\"P2\"];\n}\n"
        );
        assert_eq!(
            dot,
            schreier_dot(&orbit_bfs(&v("Z2", "L=(1,0);R=(1,0)"), 10).unwrap())
        );
    }
}
