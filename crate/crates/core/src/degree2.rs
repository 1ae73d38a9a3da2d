//! Degree-2 covers: weakly `n`-periodic vectors, the sets `W_n` and `W_n*`,
//! counting formulas, orbit census and rank realization.
//!
//! A weakly `n`-periodic vector over `Z2` is determined by `(h_1, ..., h_n)`
//! through `h_{k+n} = h_k + h_n`. Elements are stored as bit masks with bit
//! `k - 1` holding `h_k`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bivector::EpVector;
use crate::error::{Error, Result};
use crate::group::FinAbGroup;

/// Default bound on `n` for [`enumerate_wn`] and [`enumerate_wn_star`].
pub const ENUMERATION_BOUND: u32 = 20;
/// Default bound on `n` for [`orbit_census`].
pub const CENSUS_BOUND: u32 = 16;
/// Largest `n` a [`WnElement`] can hold.
pub const MAX_N: u32 = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WnElement {
    n: u32,
    mask: u64,
}

impl WnElement {
    pub fn new(n: u32, mask: u64) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidArgument(format!(
                "n must lie in 1..={MAX_N}, got {n}"
            )));
        }
        if mask >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask {mask:#b} has more than {n} bits"
            )));
        }
        if mask == 0 {
            return Err(Error::ZeroBits);
        }
        Ok(WnElement { n, mask })
    }

    /// From `(h_1, ..., h_n)`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| m | (u64::from(b) << i));
        Self::new(bits.len() as u32, mask)
    }

    /// Parses a bit string such as `"011"` (`h_1` first).
    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!(
                    "not a bit string: {text:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// `h_k` for `1 <= k <= n`.
    pub fn bit(&self, k: u32) -> bool {
        debug_assert!((1..=self.n).contains(&k));
        self.mask >> (k - 1) & 1 == 1
    }

    /// `h_m` of the weakly periodic extension, for any integer `m`.
    pub fn extended(&self, m: i64) -> bool {
        extended(self.n, self.mask, m)
    }

    /// The bit string `h_1 ... h_n`.
    pub fn bitstring(&self) -> String {
        (1..=self.n)
            .map(|k| if self.bit(k) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for WnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

fn extended(n: u32, mask: u64, m: i64) -> bool {
    let n = i64::from(n);
    let r = m.rem_euclid(n);
    let base = r != 0 && mask >> (r - 1) & 1 == 1;
    let hn = mask >> (n - 1) & 1 == 1;
    base ^ (hn && m.div_euclid(n) & 1 == 1)
}

fn z2() -> FinAbGroup {
    FinAbGroup::cyclic(2).expect("Z2 is a valid group")
}

/// The `2n`-periodic vector determined by `e`.
pub fn expand(e: &WnElement) -> EpVector {
    let g = z2();
    let one = g.factor_generator(0);
    let zero = g.zero();
    EpVector::from_fn(&g, 0, 2 * e.n as usize, |k| {
        if e.extended(k) {
            one.clone()
        } else {
            zero.clone()
        }
    })
}

/// Whether `h_{k+n} - h_k = h_n` for every `k`.
pub fn is_weakly_n_periodic(h: &EpVector, n: u64) -> Result<bool> {
    if h.group().order() != 2 {
        return Err(Error::WrongGroupOrder {
            expected: 2,
            actual: h.group().order(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let n = n as i64;
    let reach = (h.prefix_len() + h.joint_period()) as i64;
    let hn = h.entry(n);
    Ok(
        (-reach - n..=reach + n)
            .all(|k| &h.group().sub_unchecked(h.entry(k + n), h.entry(k)) == hn),
    )
}

fn weakly_periodic_mask(n: u32, mask: u64, m: u32) -> bool {
    let hm = extended(n, mask, i64::from(m));
    (0..2 * i64::from(n)).all(|k| extended(n, mask, k + i64::from(m)) ^ extended(n, mask, k) == hm)
}

/// Least divisor `m` of `n` with `h_{k+m} - h_k = h_m` for all `k`.
pub fn minimal_weak_period(e: &WnElement) -> u32 {
    (1..=e.n)
        .filter(|m| e.n.is_multiple_of(*m))
        .find(|&m| weakly_periodic_mask(e.n, e.mask, m))
        .unwrap_or(e.n)
}

fn check_bound(n: u32, bound: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > bound {
        return Err(Error::EnumerationBound {
            n: n as usize,
            bound: bound as usize,
        });
    }
    Ok(())
}

/// All `2^n - 1` elements of `W_n`, in increasing mask order.
pub fn enumerate_wn(n: u32) -> Result<Vec<WnElement>> {
    check_bound(n, ENUMERATION_BOUND)?;
    Ok((1..1u64 << n).map(|mask| WnElement { n, mask }).collect())
}

/// The elements of `W_n` whose minimal weak period is `n`.
pub fn enumerate_wn_star(n: u32) -> Result<Vec<WnElement>> {
    Ok(enumerate_wn(n)?
        .into_iter()
        .filter(|e| minimal_weak_period(e) == e.n)
        .collect())
}

/// `(P1 h)_k = h_{-k}`.
pub fn tuple_p1(e: &WnElement) -> WnElement {
    let mask = (1..=e.n).fold(0, |m, k| {
        m | (u64::from(e.extended(-i64::from(k))) << (k - 1))
    });
    WnElement { n: e.n, mask }
}

/// `(P2 h)_k = h_{-1} + h_{-k-1}`.
pub fn tuple_p2(e: &WnElement) -> WnElement {
    let h_m1 = e.extended(-1);
    let mask = (1..=e.n).fold(0, |m, k| {
        m | (u64::from(h_m1 ^ e.extended(-i64::from(k) - 1)) << (k - 1))
    });
    WnElement { n: e.n, mask }
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `|W_n*|` from `|W_n*| = 2^n - 1 - sum_{m | n, m < n} |W_m*|`.
pub fn wn_star_count(n: u32) -> u64 {
    let mut table = vec![0u64; n as usize + 1];
    for k in 1..=n as usize {
        let below: u64 = (1..k).filter(|m| k % m == 0).map(|m| table[m]).sum();
        table[k] = (1u64 << k) - 1 - below;
    }
    table[n as usize]
}

/// `sum_{m | n} mu(n / m) 2^m`, which agrees with [`wn_star_count`] for `n >= 2`.
pub fn wn_star_mobius(n: u32) -> i64 {
    (1..=n)
        .filter(|m| n.is_multiple_of(*m))
        .map(|m| mobius(u64::from(n / m)) * (1i64 << m))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForms {
    pub wn_star: u64,
    pub fixed_p1: u64,
    pub fixed_p2: u64,
    pub fixed_both: u64,
    pub striezel_wn: u64,
}

/// Closed-form counts for `W_n`: fixed points of `P1`, of `P2`, of both, and
/// the number of elements of `W_n` lying in Striezel orbits.
pub fn count_closed_forms(n: u32) -> Result<ClosedForms> {
    if n == 0 || n > MAX_N - 1 {
        return Err(Error::InvalidArgument(format!(
            "n must lie in 1..={}",
            MAX_N - 1
        )));
    }
    let striezel_wn = if n.is_multiple_of(2) {
        3 * (1u64 << (n / 2 - 1)) - 1
    } else {
        (1u64 << n.div_ceil(2)) - 1
    };
    Ok(ClosedForms {
        wn_star: wn_star_count(n),
        fixed_p1: (1u64 << n.div_ceil(2)) - 1,
        fixed_p2: (1u64 << (n / 2 + 1)) - 1,
        fixed_both: 1,
        striezel_wn,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Striezel,
    Kranz,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusOrbit {
    pub size: usize,
    #[serde(rename = "type")]
    pub kind: OrbitKind,
    /// Bit strings in increasing order.
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub n: u32,
    pub wn_star: usize,
    pub striezel: usize,
    pub kranz: usize,
    pub orbits: Vec<CensusOrbit>,
}

impl Census {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }
}

/// Splits `W_n*` into `<P1, P2>`-orbits. Orbits with a loop are Striezel,
/// the others Kranz. Orbits are listed by least member (as a bit string).
pub fn orbit_census(n: u32) -> Result<Census> {
    check_bound(n, CENSUS_BOUND)?;
    let star = enumerate_wn_star(n)?;
    let mut by_string: BTreeMap<String, WnElement> =
        star.iter().map(|e| (e.bitstring(), *e)).collect();
    let mut orbits = Vec::new();
    while let Some((_, seed)) = by_string.pop_first() {
        let mut members = vec![seed];
        let mut loops = 0;
        let mut i = 0;
        while i < members.len() {
            let e = members[i];
            for image in [tuple_p1(&e), tuple_p2(&e)] {
                if image == e {
                    loops += 1;
                } else if by_string.remove(&image.bitstring()).is_some() {
                    members.push(image);
                }
            }
            i += 1;
        }
        let mut names: Vec<String> = members.iter().map(WnElement::bitstring).collect();
        names.sort();
        orbits.push(CensusOrbit {
            size: names.len(),
            kind: if loops > 0 {
                OrbitKind::Striezel
            } else {
                OrbitKind::Kranz
            },
            members: names,
        });
    }
    let striezel = orbits
        .iter()
        .filter(|o| o.kind == OrbitKind::Striezel)
        .count();
    Ok(Census {
        n,
        wn_star: star.len(),
        striezel,
        kranz: orbits.len() - striezel,
        orbits,
    })
}

/// `(2^{n-1} - 1) / n - 2^{(n-1)/2} + 1`, the number of Kranz orbits for an
/// odd prime `n`.
pub fn kranz_prime_formula(n: u32) -> Result<u64> {
    let prime = n >= 3
        && (2..n)
            .take_while(|p| p * p <= n)
            .all(|p| !n.is_multiple_of(p));
    if !prime || n > MAX_N - 1 {
        return Err(Error::InvalidArgument(format!(
            "{n} is not an odd prime in range"
        )));
    }
    Ok((((1u64 << (n - 1)) - 1) / u64::from(n)) + 1 - (1u64 << ((n - 1) / 2)))
}

/// The least element (by bit string) of `W_{r-1}*` lying in a Striezel orbit.
pub fn realize_rank_element(r: u32) -> Result<WnElement> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "rank must be at least 2, got {r}"
        )));
    }
    let census = orbit_census(r - 1)?;
    let best = census
        .orbits
        .iter()
        .filter(|o| o.kind == OrbitKind::Striezel)
        .flat_map(|o| o.members.iter())
        .min()
        .ok_or_else(|| Error::Inconsistency(format!("no Striezel orbit in W_{}*", r - 1)))?;
    WnElement::parse(best)
}

/// A vector whose projective Veech group is free of rank `r`.
pub fn realize_rank(r: u32) -> Result<EpVector> {
    Ok(expand(&realize_rank_element(r)?))
}
