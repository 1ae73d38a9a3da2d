//! Shared helpers for integration tests: seeded vector generators and a
//! brute-force evaluation of the action formulas on a finite window.

#![allow(dead_code)]

use chamanara_core::{EpVector, FinAbGroup, GroupElem, Tail};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Output indices compared against the oracle.
pub const WINDOW: i64 = 64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn group(spec: &str) -> FinAbGroup {
    FinAbGroup::parse(spec).unwrap()
}

pub fn vector(group: &str, text: &str) -> EpVector {
    EpVector::parse(&FinAbGroup::parse(group).unwrap(), text).unwrap()
}

pub fn random_elem(g: &FinAbGroup, rng: &mut impl Rng) -> GroupElem {
    g.elem_at(rng.gen_range(0..g.order() as usize))
}

fn random_word(g: &FinAbGroup, len: usize, rng: &mut impl Rng) -> Vec<GroupElem> {
    (0..len).map(|_| random_elem(g, rng)).collect()
}

/// A random generating vector with prefixes of length `<= max_prefix` and
/// periods of length `1..=max_period`.
pub fn random_vector(
    g: &FinAbGroup,
    max_prefix: usize,
    max_period: usize,
    rng: &mut impl Rng,
) -> EpVector {
    loop {
        let tail = |rng: &mut ChaCha8Rng| {
            let p = rng.gen_range(0..=max_prefix);
            let q = rng.gen_range(1..=max_period);
            Tail::new(random_word(g, p, rng), random_word(g, q, rng)).unwrap()
        };
        // reseed locally so the closure does not need a generic rng
        let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
        let right = tail(&mut local);
        let left = tail(&mut local);
        let h = EpVector::new(g.clone(), right, left).unwrap();
        if h.generates() {
            return h;
        }
    }
}

/// `count` seeded random vectors over `g`.
pub fn corpus(g: &FinAbGroup, count: usize, seed: u64) -> Vec<EpVector> {
    let mut r = rng(seed);
    (0..count).map(|_| random_vector(g, 4, 4, &mut r)).collect()
}

/// A generating fixed point of `H^n`, built from free values `h_{-1}, ..., h_{-n}`.
///
/// With `c = sum_{j=1}^n 2^{n-j} h_{-j}`, the fixed point equations read
/// `h_k = h_{k-n} + c` for `k > n` and `k <= -1`, and the middle entries
/// `h_k = -3 sum_{j=1}^{n-k} 2^{n-k-j} h_{-j} - 2 h_{k-n-1} + c` for `1 <= k <= n`.
/// Returns `None` when the entries do not generate `g`.
pub fn h_power_fixed_point(g: &FinAbGroup, n: usize, free: &[GroupElem]) -> Option<EpVector> {
    assert_eq!(free.len(), n);
    let d = g.order() as usize;
    let len = d * n * 2 + n;
    let scale = |k: i64, x: &GroupElem| g.scale(k, x).unwrap();
    let add = |a: &GroupElem, b: &GroupElem| g.add(a, b).unwrap();
    let c = (1..=n).fold(g.zero(), |acc, j| {
        add(&acc, &scale(1i64 << (n - j), &free[j - 1]))
    });

    // left[i] = h_{-(i+1)}: h_{-k-n} = h_{-k} - c
    let mut left: Vec<GroupElem> = free.to_vec();
    while left.len() < len {
        let prev = left[left.len() - n].clone();
        left.push(g.sub(&prev, &c).unwrap());
    }
    let neg_entry = |m: usize| -> GroupElem {
        if m == 0 {
            g.zero()
        } else {
            left[m - 1].clone()
        }
    };
    let mut right: Vec<GroupElem> = Vec::with_capacity(len);
    for k in 1..=n {
        let s = (1..=n - k).fold(g.zero(), |acc, j| {
            add(&acc, &scale(1i64 << (n - k - j), &neg_entry(j)))
        });
        let v = add(&add(&scale(-3, &s), &scale(-2, &neg_entry(n + 1 - k))), &c);
        right.push(v);
    }
    while right.len() < len {
        // h_k = h_{k-n} + c, where h_0 = 0
        let k = right.len() + 1;
        let prev = if k - n == 0 {
            g.zero()
        } else {
            right[k - n - 1].clone()
        };
        right.push(add(&prev, &c));
    }
    // both sides are d n periodic from the start
    let period = d * n;
    let h = EpVector::new(
        g.clone(),
        Tail::new(vec![], right[..period].to_vec()).unwrap(),
        Tail::new(vec![], left[..period].to_vec()).unwrap(),
    )
    .unwrap();
    debug_assert!((1..len as i64).all(|k| h.entry(k) == &right[k as usize - 1]));
    h.generates().then_some(h)
}

/// Entries `h_k` for `|k| <= reach`, stored with offset `reach`.
pub struct Window<'a> {
    pub g: &'a FinAbGroup,
    reach: i64,
    entries: Vec<GroupElem>,
}

impl<'a> Window<'a> {
    pub fn of(h: &'a EpVector, reach: i64) -> Self {
        Window {
            g: h.group(),
            reach,
            entries: (-reach..=reach).map(|k| h.entry(k).clone()).collect(),
        }
    }

    pub fn h(&self, k: i64) -> &GroupElem {
        assert!(k.abs() <= self.reach, "index {k} outside the window");
        &self.entries[(k + self.reach) as usize]
    }

    fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.g.add(a, b).unwrap()
    }

    fn scale(&self, k: i64, a: &GroupElem) -> GroupElem {
        self.g.scale(k, a).unwrap()
    }

    /// `sum_{j=1}^{m} (-h_j + h_{-j})`.
    fn s(&self, m: i64) -> GroupElem {
        (1..=m).fold(self.g.zero(), |acc, j| {
            let term = self.g.sub(self.h(-j), self.h(j)).unwrap();
            self.add(&acc, &term)
        })
    }

    pub fn p1(&self, k: i64) -> GroupElem {
        match k {
            0 => self.g.zero(),
            k if k >= 1 => self.add(self.h(-k), &self.scale(2, &self.s(k - 1))),
            k => self.add(self.h(-k), &self.scale(2, &self.s(-k))),
        }
    }

    pub fn p2(&self, k: i64) -> GroupElem {
        match k {
            0 => self.g.zero(),
            -1 => self.h(-1).clone(),
            k if k >= 1 => {
                let a = self.add(self.h(-1), self.h(-k - 1));
                let b = self.add(&self.scale(2, self.h(-k)), &self.scale(2, &self.s(k - 1)));
                self.add(&a, &b)
            }
            k => {
                let a = self.add(self.h(-1), self.h(-k - 1));
                let b = self.add(&self.scale(2, self.h(k)), &self.scale(2, &self.s(-k - 1)));
                self.add(&a, &b)
            }
        }
    }

    pub fn neg(&self, k: i64) -> GroupElem {
        self.g.neg(self.h(k)).unwrap()
    }

    pub fn h_act(&self, k: i64) -> GroupElem {
        match k {
            0 => self.g.zero(),
            1 => self.g.neg(self.h(-1)).unwrap(),
            k => self.add(self.h(k - 1), self.h(-1)),
        }
    }

    pub fn h_pow(&self, n: i64, k: i64) -> GroupElem {
        let c = (1..=n).fold(self.g.zero(), |acc, j| {
            self.add(&acc, &self.scale(1 << (n - j), self.h(-j)))
        });
        if k == 0 {
            self.g.zero()
        } else if k > n || k <= -1 {
            self.add(self.h(k - n), &c)
        } else {
            let s = (1..=n - k).fold(self.g.zero(), |acc, j| {
                self.add(&acc, &self.scale(1 << (n - k - j), self.h(-j)))
            });
            let a = self.add(&self.scale(-3, &s), &self.scale(-2, self.h(k - n - 1)));
            self.add(&a, &c)
        }
    }

    /// `sum_{j=1}^{m} (h_j - h_{-j})`.
    fn t(&self, m: i64) -> GroupElem {
        self.g.neg(&self.s(m)).unwrap()
    }

    pub fn p1_inv(&self, k: i64) -> GroupElem {
        match k {
            0 => self.g.zero(),
            k if k >= 1 => {
                let a = self.g.sub(&self.scale(2, self.h(k)), self.h(-k)).unwrap();
                self.add(&a, &self.scale(2, &self.t(k - 1)))
            }
            k => self.add(self.h(-k), &self.scale(2, &self.t(-k - 1))),
        }
    }

    pub fn p2_inv(&self, k: i64) -> GroupElem {
        match k {
            0 => self.g.zero(),
            -1 => self.h(-1).clone(),
            k if k >= 1 => {
                let a = self.scale(2, &self.t(k));
                let b = self.add(self.h(-1), self.h(-k - 1));
                self.g.sub(&a, &b).unwrap()
            }
            k => {
                let m = -k;
                let a = self.scale(2, &self.t(m - 1));
                let b = self.add(self.h(m - 1), self.h(-1));
                self.g.sub(&a, &b).unwrap()
            }
        }
    }

    pub fn h_inv(&self, k: i64) -> GroupElem {
        match k {
            0 => self.g.zero(),
            -1 => self.g.neg(self.h(1)).unwrap(),
            k => self.add(self.h(k + 1), self.h(1)),
        }
    }
}

/// First index in `-WINDOW..=WINDOW` where `actual` and `expected` differ.
pub fn first_mismatch(actual: &EpVector, expected: impl Fn(i64) -> GroupElem) -> Option<i64> {
    (-WINDOW..=WINDOW).find(|&k| actual.entry(k) != &expected(k))
}
