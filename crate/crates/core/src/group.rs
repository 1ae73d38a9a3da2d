//! Finite abelian groups given as products of cyclic factors `Z n_1 x ... x Z n_r`.
//!
//! Elements are residue tuples keyed to the presentation. No invariant-factor
//! canonicalization is performed, so `Z2xZ3` and `Z6` are different groups here.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num::integer::{gcd, lcm};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Default upper bound on `|G|` for exhaustive automorphism enumeration.
pub const DEFAULT_AUT_BOUND: u64 = 64;

/// An element of a [`FinAbGroup`], stored as one reduced residue per factor.
///
/// The derived ordering is lexicographic on the residue tuple; canonical
/// vector classes depend on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem(SmallVec<[u32; 4]>);

impl GroupElem {
    pub fn residues(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

struct GroupInner {
    moduli: Vec<u32>,
    order: u64,
    zero: GroupElem,
    automorphisms: OnceLock<Arc<[Automorphism]>>,
}

/// A finite abelian group `Z n_1 x ... x Z n_r` with every `n_i >= 2`.
///
/// Cloning is cheap; clones share the memoized automorphism table.
#[derive(Clone)]
pub struct FinAbGroup(Arc<GroupInner>);

impl FinAbGroup {
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::MalformedGroup("no cyclic factors".into()));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::ModulusTooSmall(m));
        }
        let order = moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m as u64))
            .ok_or_else(|| Error::MalformedGroup("group order overflows u64".into()))?;
        let zero = GroupElem(moduli.iter().map(|_| 0).collect());
        Ok(FinAbGroup(Arc::new(GroupInner {
            moduli,
            order,
            zero,
            automorphisms: OnceLock::new(),
        })))
    }

    /// Cyclic group `Z n`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Parses `Z INT ("x" "Z" INT)*` with no whitespace.
    pub fn parse(spec: &str) -> Result<Self> {
        let malformed = || Error::MalformedGroup(spec.to_string());
        let mut moduli = Vec::new();
        for factor in spec.split('x') {
            let digits = factor.strip_prefix('Z').ok_or_else(malformed)?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            moduli.push(digits.parse::<u32>().map_err(|_| malformed())?);
        }
        Self::new(moduli)
    }

    pub fn moduli(&self) -> &[u32] {
        &self.0.moduli
    }

    /// `d = |G|`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> u64 {
        self.0
            .moduli
            .iter()
            .fold(1u64, |acc, &m| lcm(acc, m as u64))
    }

    pub fn zero(&self) -> GroupElem {
        self.0.zero.clone()
    }

    pub(crate) fn zero_ref(&self) -> &GroupElem {
        &self.0.zero
    }

    /// Builds an element from arbitrary integers, reducing each modulo its factor.
    pub fn elem(&self, residues: &[i64]) -> Result<GroupElem> {
        if residues.len() != self.0.moduli.len() {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElem(
            residues
                .iter()
                .zip(&self.0.moduli)
                .map(|(&r, &m)| r.rem_euclid(m as i64) as u32)
                .collect(),
        ))
    }

    /// The canonical generator of factor `i` (1 in slot `i`, 0 elsewhere).
    pub fn factor_generator(&self, i: usize) -> GroupElem {
        let mut e = self.zero();
        e.0[i] = 1;
        e
    }

    pub fn contains(&self, a: &GroupElem) -> bool {
        a.0.len() == self.0.moduli.len() && a.0.iter().zip(&self.0.moduli).all(|(&r, &m)| r < m)
    }

    fn check(&self, a: &GroupElem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub_unchecked(a, b))
    }

    pub fn scale(&self, k: i64, a: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        Ok(self.scale_unchecked(k, a))
    }

    /// Least `t >= 1` with `t * a = 0`.
    pub fn order_of(&self, a: &GroupElem) -> Result<u64> {
        self.check(a)?;
        Ok(self.order_of_unchecked(a))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        GroupElem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.0.moduli)
                .map(|((&x, &y), &m)| ((x as u64 + y as u64) % m as u64) as u32)
                .collect(),
        )
    }

    pub(crate) fn neg_unchecked(&self, a: &GroupElem) -> GroupElem {
        GroupElem(
            a.0.iter()
                .zip(&self.0.moduli)
                .map(|(&x, &m)| if x == 0 { 0 } else { m - x })
                .collect(),
        )
    }

    pub(crate) fn sub_unchecked(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.add_unchecked(a, &self.neg_unchecked(b))
    }

    pub(crate) fn scale_unchecked(&self, k: i64, a: &GroupElem) -> GroupElem {
        GroupElem(
            a.0.iter()
                .zip(&self.0.moduli)
                .map(|(&x, &m)| {
                    let m = m as i128;
                    ((k as i128).rem_euclid(m) * x as i128 % m) as u32
                })
                .collect(),
        )
    }

    pub(crate) fn order_of_unchecked(&self, a: &GroupElem) -> u64 {
        a.0.iter().zip(&self.0.moduli).fold(1u64, |acc, (&x, &m)| {
            let m = m as u64;
            lcm(acc, m / gcd(m, x as u64))
        })
    }

    /// Position of `a` in the mixed-radix enumeration (first factor most significant).
    pub fn index_of(&self, a: &GroupElem) -> usize {
        a.0.iter()
            .zip(&self.0.moduli)
            .fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
    }

    /// Inverse of [`FinAbGroup::index_of`]; `i` must be below `|G|`.
    pub fn elem_at(&self, mut i: usize) -> GroupElem {
        let mut residues: SmallVec<[u32; 4]> = self.0.moduli.iter().map(|_| 0).collect();
        for (slot, &m) in residues.iter_mut().zip(&self.0.moduli).rev() {
            *slot = (i % m as usize) as u32;
            i /= m as usize;
        }
        GroupElem(residues)
    }

    /// All elements in increasing lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.0.order as usize).map(move |i| self.elem_at(i))
    }

    /// Parses an element written as residues joined by `:`.
    pub fn parse_elem(&self, text: &str) -> Result<GroupElem> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != self.0.moduli.len() {
            return Err(Error::MalformedElement(text.to_string()));
        }
        let mut residues = SmallVec::new();
        for (part, &m) in parts.iter().zip(&self.0.moduli) {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::MalformedElement(text.to_string()));
            }
            let r: u32 = part
                .parse()
                .map_err(|_| Error::MalformedElement(text.to_string()))?;
            if r >= m {
                return Err(Error::ResidueOutOfRange {
                    residue: r,
                    modulus: m,
                });
            }
            residues.push(r);
        }
        Ok(GroupElem(residues))
    }

    /// Smallest subgroup containing `gens`, by closure under adding generators.
    pub fn span(&self, gens: &[GroupElem]) -> Result<Subgroup> {
        for g in gens {
            self.check(g)?;
        }
        let mut elements = BTreeSet::new();
        let mut queue = VecDeque::new();
        elements.insert(self.zero());
        queue.push_back(self.zero());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add_unchecked(&x, g);
                if elements.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup {
            parent: self.clone(),
            elements,
            generators: gens.to_vec(),
        })
    }

    /// All automorphisms, memoized per group value, under [`DEFAULT_AUT_BOUND`].
    pub fn automorphisms(&self) -> Result<Arc<[Automorphism]>> {
        self.automorphisms_bounded(DEFAULT_AUT_BOUND)
    }

    /// All automorphisms, refusing groups with `|G| > bound`.
    ///
    /// Candidates send each factor generator `e_i` to an element of order exactly
    /// `n_i`; each candidate extends to a homomorphism and is kept iff bijective.
    pub fn automorphisms_bounded(&self, bound: u64) -> Result<Arc<[Automorphism]>> {
        if self.order() > bound {
            return Err(Error::AutomorphismBound {
                order: self.order(),
                bound,
            });
        }
        let auts = self
            .0
            .automorphisms
            .get_or_init(|| self.enumerate_automorphisms().into());
        Ok(auts.clone())
    }

    fn enumerate_automorphisms(&self) -> Vec<Automorphism> {
        let moduli = &self.0.moduli;
        let all: Vec<GroupElem> = self.elements().collect();
        let candidates: Vec<Vec<&GroupElem>> = moduli
            .iter()
            .map(|&m| {
                all.iter()
                    .filter(|x| self.order_of_unchecked(x) == m as u64)
                    .collect()
            })
            .collect();

        let mut result = Vec::new();
        let mut choice = vec![0usize; moduli.len()];
        if candidates.iter().any(|c| c.is_empty()) {
            return result;
        }
        loop {
            let images: Vec<GroupElem> = choice
                .iter()
                .zip(&candidates)
                .map(|(&c, cands)| cands[c].clone())
                .collect();
            let table: Vec<GroupElem> = all
                .iter()
                .map(|x| {
                    x.0.iter().zip(&images).fold(self.zero(), |acc, (&r, img)| {
                        self.add_unchecked(&acc, &self.scale_unchecked(r as i64, img))
                    })
                })
                .collect();
            let distinct: BTreeSet<&GroupElem> = table.iter().collect();
            if distinct.len() == table.len() {
                result.push(Automorphism { images, table });
            }

            // odometer over the candidate lists
            let mut i = choice.len();
            loop {
                if i == 0 {
                    return result;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < candidates[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
}

impl PartialEq for FinAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.0.moduli == other.0.moduli
    }
}

impl Eq for FinAbGroup {}

impl Hash for FinAbGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.moduli.hash(state);
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({self})")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.moduli.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl FromStr for FinAbGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// A subgroup materialized as its full element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FinAbGroup,
    elements: BTreeSet<GroupElem>,
    generators: Vec<GroupElem>,
}

impl Subgroup {
    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn elements(&self) -> &BTreeSet<GroupElem> {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElem] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, a: &GroupElem) -> bool {
        self.elements.contains(a)
    }

    pub fn is_whole_group(&self) -> bool {
        self.order() == self.parent.order()
    }

    /// `[G : H] = |G| / |H|`.
    pub fn index(&self) -> u64 {
        self.parent.order() / self.order()
    }
}

/// An automorphism of a [`FinAbGroup`], stored as images of the factor
/// generators together with the full permutation table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    images: Vec<GroupElem>,
    table: Vec<GroupElem>,
}

impl Automorphism {
    /// Images of the canonical factor generators.
    pub fn images(&self) -> &[GroupElem] {
        &self.images
    }

    pub fn apply(&self, group: &FinAbGroup, a: &GroupElem) -> GroupElem {
        self.table[group.index_of(a)].clone()
    }

    pub fn is_identity(&self, group: &FinAbGroup) -> bool {
        self.table
            .iter()
            .enumerate()
            .all(|(i, x)| group.index_of(x) == i)
    }
}
