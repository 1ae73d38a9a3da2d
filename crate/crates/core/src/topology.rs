//! Ends of the cover `Y_h`.
//!
//! The ends of `Y_h` correspond to the cosets of the subgroup `G'` spanned by
//! the alternating sum `sum_{k=-N}^{N-1} (-1)^k h_k` and all differences of
//! accumulation points of the two tails.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bivector::EpVector;
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem, Subgroup};

/// The two surfaces of infinite genus with one and with two ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum D2Type {
    LochNess,
    JacobsLadder,
}

/// Values that occur infinitely often in `(h_n)` and in `(h_{-n})`.
pub fn accumulation_points(h: &EpVector) -> (BTreeSet<GroupElem>, BTreeSet<GroupElem>) {
    let norm = h.normalize();
    (
        norm.right().period.iter().cloned().collect(),
        norm.left().period.iter().cloned().collect(),
    )
}

/// Smallest `N` such that every `h_k` with `|k| >= N` sits inside a periodic tail.
pub fn minimal_n(h: &EpVector) -> u64 {
    h.prefix_len() as u64 + 1
}

/// `sum_{k=-N}^{N-1} (-1)^k h_k`.
pub fn alt_sum(h: &EpVector, n: u64) -> GroupElem {
    let g = h.group();
    let n = n as i64;
    (-n..n).fold(g.zero(), |acc, k| {
        if k.rem_euclid(2) == 0 {
            g.add_unchecked(&acc, h.entry(k))
        } else {
            g.sub_unchecked(&acc, h.entry(k))
        }
    })
}

/// `G'` computed with an explicit window `n`, which must be at least [`minimal_n`].
pub fn end_subgroup_with(h: &EpVector, n: u64) -> Result<Subgroup> {
    if n < minimal_n(h) {
        return Err(Error::InvalidArgument(format!(
            "window {n} is below the minimal window {}",
            minimal_n(h)
        )));
    }
    let g = h.group();
    let (right, left) = accumulation_points(h);
    let acc: BTreeSet<&GroupElem> = right.iter().chain(&left).collect();
    let mut gens = vec![alt_sum(h, n)];
    for a in &acc {
        for b in &acc {
            gens.push(g.sub_unchecked(a, b));
        }
    }
    g.span(&gens)
}

pub fn end_subgroup(h: &EpVector) -> Subgroup {
    end_subgroup_with(h, minimal_n(h)).expect("minimal window and own entries are valid")
}

/// `[G : G']`.
pub fn num_ends(h: &EpVector) -> u64 {
    end_subgroup(h).index()
}

/// Parity criterion over `Z2`: two ends iff both tails are eventually `0` with an
/// even number of `1` entries, or both are eventually `1` with an even number of
/// `0` entries (counting `h_0`).
pub fn classify_d2(h: &EpVector) -> Result<D2Type> {
    let g = h.group();
    if g.order() != 2 {
        return Err(Error::WrongGroupOrder {
            expected: 2,
            actual: g.order(),
        });
    }
    let norm = h.normalize();
    let (right, left) = (norm.right(), norm.left());
    let constant = |c: bool| {
        let want = if c { g.factor_generator(0) } else { g.zero() };
        right.period == [want.clone()] && left.period == [want]
    };
    let prefix_entries = || right.prefix.iter().chain(&left.prefix);
    let ladder = if constant(false) {
        prefix_entries().filter(|x| !x.is_zero()).count() % 2 == 0
    } else if constant(true) {
        // h_0 is a zero entry as well
        (prefix_entries().filter(|x| x.is_zero()).count() + 1) % 2 == 0
    } else {
        false
    };
    Ok(if ladder {
        D2Type::JacobsLadder
    } else {
        D2Type::LochNess
    })
}

/// A generating vector with zero tails and vanishing alternating sum, so that
/// `Y_h` has `|G|` ends. The factor generators sit at `-2, -3, ...` and `h_1`
/// cancels their alternating sum.
pub fn construct_max_ends(group: &FinAbGroup) -> Result<EpVector> {
    if group.order() < 2 {
        return Err(Error::InvalidArgument(
            "the group must be nontrivial".into(),
        ));
    }
    let gens: Vec<GroupElem> = (0..group.moduli().len())
        .map(|i| group.factor_generator(i))
        .collect();
    // h_{-(i+2)} = gens[i] enters the alternating sum with sign (-1)^i
    let balance = gens.iter().enumerate().fold(group.zero(), |acc, (i, x)| {
        if i % 2 == 0 {
            group.add_unchecked(&acc, x)
        } else {
            group.sub_unchecked(&acc, x)
        }
    });
    let mut left = vec![group.zero()];
    left.extend(gens);
    let h = EpVector::with_zero_tails(group.clone(), vec![balance], left)?;
    debug_assert!(h.generates());
    if num_ends(&h) != group.order() {
        return Err(Error::Inconsistency(format!(
            "{h} does not have {} ends",
            group.order()
        )));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsReport {
    pub right_acc: Vec<String>,
    pub left_acc: Vec<String>,
    #[serde(rename = "N")]
    pub n: u64,
    pub alt_sum: String,
    pub g_prime: Vec<String>,
    pub ends: u64,
    pub d2_type: Option<D2Type>,
}

impl EndsReport {
    pub fn new(h: &EpVector) -> Self {
        let (right, left) = accumulation_points(h);
        let strings = |s: &BTreeSet<GroupElem>| s.iter().map(|x| x.to_string()).collect();
        let n = minimal_n(h);
        let g_prime = end_subgroup(h);
        EndsReport {
            right_acc: strings(&right),
            left_acc: strings(&left),
            n,
            alt_sum: alt_sum(h, n).to_string(),
            g_prime: strings(g_prime.elements()),
            ends: g_prime.index(),
            d2_type: classify_d2(h).ok(),
        }
    }
}
