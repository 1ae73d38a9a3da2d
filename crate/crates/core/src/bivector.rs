//! Eventually periodic defining vectors.
//!
//! A vector `h` is stored as two outward tails around `h_0 = 0`. The right tail
//! lists `h_1, h_2, ...` and the left tail lists `h_{-1}, h_{-2}, ...`; each is a
//! finite prefix followed by a period word repeating forever.
//!
//! Text form: `L=<tail>;R=<tail>` where a tail is `[word|](word)`, for example
//! `L=(0);R=1,1|(0)` is the vector with `h_1 = h_2 = 1` and zeros elsewhere.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num::integer::lcm;

use crate::error::{Error, Result};
use crate::group::{Automorphism, FinAbGroup, GroupElem};

/// One side of a vector: `prefix` then `period` repeated outward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tail {
    pub prefix: Vec<GroupElem>,
    pub period: Vec<GroupElem>,
}

impl Tail {
    pub fn new(prefix: Vec<GroupElem>, period: Vec<GroupElem>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Tail { prefix, period })
    }

    /// Entry at outward position `i >= 1`.
    pub fn get(&self, i: usize) -> &GroupElem {
        debug_assert!(i >= 1);
        let i = i - 1;
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Reduces the period to its primitive root, then absorbs trailing prefix
    /// letters into the period. The result is the unique shortest encoding.
    pub fn normalize(&self) -> Tail {
        let mut period = primitive_root(&self.period);
        let mut prefix = self.prefix.clone();
        while let (Some(p), Some(q)) = (prefix.last(), period.last()) {
            if p != q {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Tail { prefix, period }
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.period.len();
        let primitive = (1..n).all(|len| {
            !n.is_multiple_of(len) || (len..n).any(|i| self.period[i] != self.period[i - len])
        });
        primitive && self.prefix.last() != self.period.last()
    }

    fn letters(&self) -> impl Iterator<Item = &GroupElem> {
        self.prefix.iter().chain(&self.period)
    }

    fn map(&self, f: impl Fn(&GroupElem) -> GroupElem) -> Tail {
        Tail {
            prefix: self.prefix.iter().map(&f).collect(),
            period: self.period.iter().map(&f).collect(),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write_word(f, &self.prefix)?;
            f.write_str("|")?;
        }
        f.write_str("(")?;
        write_word(f, &self.period)?;
        f.write_str(")")
    }
}

fn primitive_root(word: &[GroupElem]) -> Vec<GroupElem> {
    let n = word.len();
    for len in 1..n {
        if n.is_multiple_of(len) && (len..n).all(|i| word[i] == word[i - len]) {
            return word[..len].to_vec();
        }
    }
    word.to_vec()
}

fn write_word(f: &mut fmt::Formatter<'_>, word: &[GroupElem]) -> fmt::Result {
    for (i, x) in word.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// An eventually periodic bi-infinite vector over a finite abelian group.
///
/// Values produced by this crate are always normalized, so structural equality
/// is sequence equality.
#[derive(Clone, Debug)]
pub struct EpVector {
    group: FinAbGroup,
    right: Tail,
    left: Tail,
}

impl EpVector {
    /// Builds and normalizes a vector, checking that every entry lies in `group`.
    pub fn new(group: FinAbGroup, right: Tail, left: Tail) -> Result<Self> {
        Ok(Self::from_raw(group, right, left)?.normalize())
    }

    /// Builds a vector without normalizing it.
    pub fn from_raw(group: FinAbGroup, right: Tail, left: Tail) -> Result<Self> {
        if right.period.is_empty() || left.period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if !right
            .letters()
            .chain(left.letters())
            .all(|x| group.contains(x))
        {
            return Err(Error::GroupMismatch);
        }
        Ok(EpVector { group, right, left })
    }

    /// A vector with the given entries `h_1, h_2, ...` and `h_{-1}, h_{-2}, ...`
    /// and zeros beyond them.
    pub fn with_zero_tails(
        group: FinAbGroup,
        right: Vec<GroupElem>,
        left: Vec<GroupElem>,
    ) -> Result<Self> {
        let zero = vec![group.zero()];
        Self::new(
            group,
            Tail::new(right, zero.clone())?,
            Tail::new(left, zero)?,
        )
    }

    /// Materializes `k -> f(k)` as a vector whose tails are `prefix_len` letters
    /// followed by `period_len` periodic letters, then normalizes.
    ///
    /// The caller guarantees that `f` really is `period_len`-periodic beyond
    /// `prefix_len` on both sides.
    pub(crate) fn from_fn(
        group: &FinAbGroup,
        prefix_len: usize,
        period_len: usize,
        f: impl Fn(i64) -> GroupElem,
    ) -> Self {
        let side = |sign: i64| {
            let mut word: Vec<GroupElem> = (1..=(prefix_len + period_len) as i64)
                .map(|i| f(sign * i))
                .collect();
            let period = word.split_off(prefix_len);
            Tail {
                prefix: word,
                period,
            }
            .normalize()
        };
        EpVector {
            group: group.clone(),
            right: side(1),
            left: side(-1),
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn right(&self) -> &Tail {
        &self.right
    }

    pub fn left(&self) -> &Tail {
        &self.left
    }

    /// `h_k`; `h_0` is always the identity.
    pub fn entry(&self, k: i64) -> &GroupElem {
        match k.cmp(&0) {
            Ordering::Greater => self.right.get(k as usize),
            Ordering::Less => self.left.get(k.unsigned_abs() as usize),
            Ordering::Equal => self.group.zero_ref(),
        }
    }

    pub fn normalize(&self) -> EpVector {
        EpVector {
            group: self.group.clone(),
            right: self.right.normalize(),
            left: self.left.normalize(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.right.is_normalized() && self.left.is_normalized()
    }

    /// Longest prefix over both sides.
    pub fn prefix_len(&self) -> usize {
        self.right.prefix.len().max(self.left.prefix.len())
    }

    /// Least common multiple of the two period lengths.
    pub fn joint_period(&self) -> usize {
        lcm(self.right.period.len(), self.left.period.len())
    }

    /// Every stored letter, in no particular order. The entry set of `h` is
    /// exactly this set plus `0`.
    pub fn letters(&self) -> impl Iterator<Item = &GroupElem> {
        self.right.letters().chain(self.left.letters())
    }

    /// Whether the entries generate the whole group, i.e. the cover is connected.
    pub fn generates(&self) -> bool {
        let letters: Vec<GroupElem> = self.letters().cloned().collect();
        self.group
            .span(&letters)
            .map(|s| s.is_whole_group())
            .unwrap_or(false)
    }

    pub fn require_generating(&self) -> Result<()> {
        if self.generates() {
            Ok(())
        } else {
            Err(Error::NotGenerating)
        }
    }

    /// Applies `f` to every entry. `f` must fix `0`.
    pub fn map_entries(&self, f: impl Fn(&GroupElem) -> GroupElem) -> EpVector {
        EpVector {
            group: self.group.clone(),
            right: self.right.map(&f),
            left: self.left.map(&f),
        }
        .normalize()
    }

    /// `phi . h`, entrywise. Bijections preserve normal form, so no renormalization.
    pub fn apply_automorphism(&self, phi: &Automorphism) -> EpVector {
        let out = EpVector {
            group: self.group.clone(),
            right: self.right.map(|x| phi.apply(&self.group, x)),
            left: self.left.map(|x| phi.apply(&self.group, x)),
        };
        debug_assert!(out.is_normalized());
        out
    }

    /// Canonical representative of the `Aut(G)`-orbit: the least image under the
    /// serialization order.
    pub fn canonical_class(&self) -> Result<VectorClass> {
        let auts = self.group.automorphisms()?;
        let representative = auts
            .iter()
            .map(|phi| self.apply_automorphism(phi))
            .min()
            .expect("identity automorphism is always present");
        Ok(VectorClass { representative })
    }

    /// Least `p >= 1` with `h_{k+p} = h_k` for every `k`, including across `h_0`.
    pub fn is_periodic(&self) -> Option<u64> {
        if !self.right.prefix.is_empty() || !self.left.prefix.is_empty() {
            return None;
        }
        let p = self.joint_period() as i64;
        let holds = |q: i64| (-2 * p..=2 * p).all(|k| self.entry(k + q) == self.entry(k));
        if !holds(p) {
            return None;
        }
        (1..=p).find(|&q| p % q == 0 && holds(q)).map(|q| q as u64)
    }

    /// Least `m >= 1` such that both tails are purely `m`-periodic
    /// (`h_{k+m} = h_k` and `h_{-k-m} = h_{-k}` for `k >= 1`), with no condition
    /// linking the two sides.
    pub fn tail_period(&self) -> Option<u64> {
        if !self.right.prefix.is_empty() || !self.left.prefix.is_empty() {
            return None;
        }
        Some(self.joint_period() as u64)
    }

    /// Parses the `L=<tail>;R=<tail>` text form and normalizes.
    pub fn parse(group: &FinAbGroup, text: &str) -> Result<Self> {
        let malformed = || Error::MalformedVector(text.to_string());
        let rest = text.strip_prefix("L=").ok_or_else(malformed)?;
        let (left, right) = rest.split_once(";R=").ok_or_else(malformed)?;
        let left = parse_tail(group, left).map_err(|e| rewrap(e, text))?;
        let right = parse_tail(group, right).map_err(|e| rewrap(e, text))?;
        Self::new(group.clone(), right, left)
    }
}

fn rewrap(e: Error, text: &str) -> Error {
    match e {
        Error::MalformedVector(_) => Error::MalformedVector(text.to_string()),
        other => other,
    }
}

fn parse_tail(group: &FinAbGroup, text: &str) -> Result<Tail> {
    let malformed = || Error::MalformedVector(text.to_string());
    let body = text.strip_suffix(')').ok_or_else(malformed)?;
    let open = body.rfind('(').ok_or_else(malformed)?;
    let (head, period) = (&body[..open], &body[open + 1..]);
    let head = head.strip_suffix('|').unwrap_or(head);
    let prefix = if head.is_empty() {
        Vec::new()
    } else {
        parse_word(group, head)?
    };
    if period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    Tail::new(prefix, parse_word(group, period)?)
}

fn parse_word(group: &FinAbGroup, text: &str) -> Result<Vec<GroupElem>> {
    text.split(',')
        .map(|tok| {
            if tok.contains(['(', ')', '|']) {
                Err(Error::MalformedVector(text.to_string()))
            } else {
                group.parse_elem(tok)
            }
        })
        .collect()
}

impl fmt::Display for EpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("L=")?;
        self.left.write(f)?;
        f.write_str(";R=")?;
        self.right.write(f)
    }
}

impl PartialEq for EpVector {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.right == other.right && self.left == other.left
    }
}

impl Eq for EpVector {}

impl Hash for EpVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.right.hash(state);
        self.left.hash(state);
    }
}

/// Serialization order: right prefix, right period, left prefix, left period.
impl Ord for EpVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.group
            .moduli()
            .cmp(other.group.moduli())
            .then_with(|| self.right.cmp(&other.right))
            .then_with(|| self.left.cmp(&other.left))
    }
}

impl PartialOrd for EpVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `B_G / Aut(G)`, identified by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorClass {
    representative: EpVector,
}

impl VectorClass {
    pub fn representative(&self) -> &EpVector {
        &self.representative
    }

    pub fn into_representative(self) -> EpVector {
        self.representative
    }
}

impl fmt::Display for VectorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.representative.fmt(f)
    }
}
