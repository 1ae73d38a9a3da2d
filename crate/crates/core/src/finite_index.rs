//! Deciding whether the Veech group of a cover has finite index.
//!
//! The index is finite exactly when `h` is fixed by some power of `H`. Fixed
//! points of `H^n` all lie in the finite set `C_n` of vectors satisfying the
//! forward-period/backward-period ("forper-backper") relations with window `dn`,
//! which turns the question into a finite check.

use num::integer::lcm;
use serde::Serialize;

use crate::action::act_h_pow;
use crate::bivector::EpVector;
use crate::error::Result;
use crate::group::FinAbGroup;

/// Whether fixed points are compared as raw vectors or as `Aut(G)` classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixLevel {
    Vector,
    Class,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexVerdict {
    pub finite: bool,
    /// Least `m` with both tails purely `m`-periodic, when such `m` exists.
    pub minimal_period: Option<u64>,
    /// The window `dn = lcm(m, d)` the relations were checked on (0 if never reached).
    pub checked_window: u64,
    /// Which condition failed, for infinite verdicts.
    pub witness: Option<String>,
}

fn forper_backper_failure(h: &EpVector, window: u64) -> Option<String> {
    let g: &FinAbGroup = h.group();
    let n = window as i64;
    let twice_minus =
        |a: i64, b: i64| g.sub_unchecked(&g.scale_unchecked(2, h.entry(a)), h.entry(b));
    for k in 1..n {
        if twice_minus(n - k + 1, n - k) != twice_minus(-k - 1, -k) {
            return Some(format!("forper-backper relation fails at place {k}"));
        }
    }
    if h.entry(n) != &g.scale_unchecked(-2, h.entry(-1)) {
        return Some(format!("h_{n} != -2 h_-1"));
    }
    if h.entry(-n) != &g.scale_unchecked(-2, h.entry(1)) {
        return Some(format!("h_-{n} != -2 h_1"));
    }
    None
}

/// Membership of `h` in `C_n` (window `dn` with `d = |G|`).
pub fn in_cn(h: &EpVector, n: u64) -> bool {
    let g = h.group();
    let window = g.order() * n;
    let tails_periodic = h.right().prefix.is_empty()
        && h.left().prefix.is_empty()
        && window.is_multiple_of(h.right().period.len() as u64)
        && window.is_multiple_of(h.left().period.len() as u64);
    if !tails_periodic {
        return false;
    }
    let period_sum = (1..=window as i64).fold(g.zero(), |acc, j| {
        g.add_unchecked(&acc, &g.sub_unchecked(h.entry(-j), h.entry(j)))
    });
    period_sum.is_zero() && forper_backper_failure(h, window).is_none()
}

/// Whether `H^n` fixes `h` (as a vector, or as a class).
pub fn is_fixed_by_h_pow(h: &EpVector, n: u64, level: FixLevel) -> Result<bool> {
    let image = act_h_pow(h, n);
    Ok(match level {
        FixLevel::Vector => image == *h,
        FixLevel::Class => image == *h || image.canonical_class()? == h.canonical_class()?,
    })
}

/// Finite/infinite verdict for `[Gamma(X) : Gamma(Y_h)]`.
///
/// `h` must be periodic backwards and forwards; with `m` the least common tail
/// period and `dn = lcm(m, d)`, the index is finite iff the forper-backper
/// relations hold at all places `0..=dn`.
pub fn decide_finite_index(h: &EpVector) -> IndexVerdict {
    let Some(m) = h.tail_period() else {
        return IndexVerdict {
            finite: false,
            minimal_period: None,
            checked_window: 0,
            witness: Some("not periodic backwards and forwards".into()),
        };
    };
    let window = lcm(m, h.group().order());
    let witness = forper_backper_failure(h, window);
    IndexVerdict {
        finite: witness.is_none(),
        minimal_period: Some(m),
        checked_window: window,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(group: &str, text: &str) -> EpVector {
        EpVector::parse(&FinAbGroup::parse(group).unwrap(), text).unwrap()
    }

    #[test]
    fn cn_examples() {
        let w1 = v("Z2", "L=(1,0);R=(1,0)");
        assert!(in_cn(&w1, 1));
        assert!(in_cn(&w1, 2));
        assert!(!in_cn(&v("Z2", "L=(0);R=1|(0)"), 1));
        let h01 = v("Z2", "L=(1,1,0,0);R=(0,1,1,0)");
        assert!(!in_cn(&h01, 1));
        assert!(in_cn(&h01, 2));
    }

    #[test]
    fn z3_h_fixed_point_is_in_c1() {
        // H h = h forces h_1 = -h_{-1}, h_k = h_{k-1} + h_{-1}: with h_{-1} = 1
        // the right tail is (2, 0, 1) and the left tail (1, 0, 2).
        let h = v("Z3", "L=(1,0,2);R=(2,0,1)");
        assert!(is_fixed_by_h_pow(&h, 1, FixLevel::Vector).unwrap());
        assert!(in_cn(&h, 1));
        let verdict = decide_finite_index(&h);
        assert!(verdict.finite);
        assert_eq!(verdict.minimal_period, Some(3));
        assert_eq!(verdict.checked_window, 3);
    }

    #[test]
    fn fixed_point_levels() {
        let w1 = v("Z2", "L=(1,0);R=(1,0)");
        assert!(is_fixed_by_h_pow(&w1, 1, FixLevel::Vector).unwrap());
        assert!(is_fixed_by_h_pow(&w1, 1, FixLevel::Class).unwrap());
        let h01 = v("Z2", "L=(1,1,0,0);R=(0,1,1,0)");
        assert!(!is_fixed_by_h_pow(&h01, 1, FixLevel::Vector).unwrap());
        assert!(!is_fixed_by_h_pow(&h01, 1, FixLevel::Class).unwrap());
        assert!(is_fixed_by_h_pow(&h01, 2, FixLevel::Vector).unwrap());
        assert!(is_fixed_by_h_pow(&h01, 2, FixLevel::Class).unwrap());
    }

    #[test]
    fn decide_examples() {
        let w1 = decide_finite_index(&v("Z2", "L=(1,0);R=(1,0)"));
        assert!(w1.finite);
        assert_eq!(w1.minimal_period, Some(2));
        assert_eq!(w1.checked_window, 2);

        let single = decide_finite_index(&v("Z2", "L=(0);R=1|(0)"));
        assert!(!single.finite);
        assert!(single.witness.is_some());

        assert!(decide_finite_index(&v("Z2", "L=(1,1,0,0);R=(0,1,1,0)")).finite);

        // tails periodic but the sides do not match across h_0
        let skew = decide_finite_index(&v("Z2", "L=(0);R=(1)"));
        assert!(!skew.finite);
        assert_eq!(skew.minimal_period, Some(1));
    }
}
