//! Action of the Veech group of the Chamanara surface on defining vectors.
//!
//! The group is generated by `P1`, `P2` and `-Id`; `H = -P1 P2` is the
//! hyperbolic element. Each generator acts by a closed-form formula on the
//! entries of `h`. The formulas for `P1` and `P2` (and their inverses) involve
//! the running sum `S_m = sum_{j=1..m} (-h_j + h_{-j})`, which on an eventually
//! periodic vector grows by a fixed drift `delta` per joint period. Since only
//! `2 S_m` enters, the output repeats after `period * order(2 delta)` letters.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};

use crate::bivector::EpVector;
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem};

/// Entries of `h` on `[-reach, reach]` together with the running sums `S_m`.
struct Window<'a> {
    group: &'a FinAbGroup,
    right: Vec<GroupElem>,
    left: Vec<GroupElem>,
    sums: Vec<GroupElem>,
}

impl<'a> Window<'a> {
    fn new(h: &'a EpVector, reach: usize) -> Self {
        let group = h.group();
        let right: Vec<GroupElem> = (0..=reach as i64).map(|k| h.entry(k).clone()).collect();
        let left: Vec<GroupElem> = (0..=reach as i64).map(|k| h.entry(-k).clone()).collect();
        let mut sums = Vec::with_capacity(reach + 1);
        sums.push(group.zero());
        for j in 1..=reach {
            let step = group.sub_unchecked(&left[j], &right[j]);
            sums.push(group.add_unchecked(&sums[j - 1], &step));
        }
        Window {
            group,
            right,
            left,
            sums,
        }
    }

    fn h(&self, k: i64) -> &GroupElem {
        if k >= 0 {
            &self.right[k as usize]
        } else {
            &self.left[k.unsigned_abs() as usize]
        }
    }

    fn s(&self, m: usize) -> &GroupElem {
        &self.sums[m]
    }

    /// `sum c_i x_i`.
    fn lin(&self, terms: &[(i64, &GroupElem)]) -> GroupElem {
        terms.iter().fold(self.group.zero(), |acc, &(c, x)| {
            self.group
                .add_unchecked(&acc, &self.group.scale_unchecked(c, x))
        })
    }
}

/// Safe output shape `(prefix_len, period_len)` for the drift-carrying actions.
fn drift_shape(h: &EpVector) -> (usize, usize) {
    let g = h.group();
    let k0 = h.prefix_len();
    let p = h.joint_period();
    let w = Window::new(h, k0 + p);
    let delta = g.sub_unchecked(w.s(k0 + p), w.s(k0));
    let twice = g.scale_unchecked(2, &delta);
    (k0 + 2, p * g.order_of_unchecked(&twice) as usize)
}

/// `P1 . h`.
pub fn act_p1(h: &EpVector) -> EpVector {
    let (prefix, period) = drift_shape(h);
    let w = Window::new(h, prefix + period + 2);
    EpVector::from_fn(h.group(), prefix, period, |k| {
        if k >= 1 {
            w.lin(&[(1, w.h(-k)), (2, w.s(k as usize - 1))])
        } else {
            let m = k.unsigned_abs() as usize;
            w.lin(&[(1, w.h(m as i64)), (2, w.s(m))])
        }
    })
}

/// `P2 . h`.
pub fn act_p2(h: &EpVector) -> EpVector {
    let (prefix, period) = drift_shape(h);
    let w = Window::new(h, prefix + period + 2);
    EpVector::from_fn(h.group(), prefix, period, |k| {
        if k >= 1 {
            w.lin(&[
                (1, w.h(-1)),
                (1, w.h(-k - 1)),
                (2, w.h(-k)),
                (2, w.s(k as usize - 1)),
            ])
        } else if k == -1 {
            w.h(-1).clone()
        } else {
            let m = k.unsigned_abs() as usize;
            w.lin(&[
                (1, w.h(-1)),
                (1, w.h(m as i64 - 1)),
                (2, w.h(k)),
                (2, w.s(m - 1)),
            ])
        }
    })
}

/// `-Id . h`, entrywise negation.
pub fn act_neg(h: &EpVector) -> EpVector {
    let g = h.group();
    h.map_entries(|x| g.neg_unchecked(x))
}

/// `H . h`: `(H h)_1 = -h_{-1}` and `(H h)_k = h_{k-1} + h_{-1}` otherwise.
pub fn act_h(h: &EpVector) -> EpVector {
    let prefix = h.prefix_len() + 2;
    let period = h.joint_period();
    let w = Window::new(h, prefix + period + 2);
    let g = h.group();
    EpVector::from_fn(g, prefix, period, |k| {
        if k == 1 {
            g.neg_unchecked(w.h(-1))
        } else {
            g.add_unchecked(w.h(k - 1), w.h(-1))
        }
    })
}

/// `H^n . h` from the closed form, with `c_t = sum_{j=1..t} 2^{t-j} h_{-j}`:
/// `(H^n h)_k = h_{k-n} + c_n` for `k > n` or `k <= -1`, and
/// `-3 c_{n-k} - 2 h_{k-n-1} + c_n` for `1 <= k <= n`.
pub fn act_h_pow(h: &EpVector, n: u64) -> EpVector {
    if n == 0 {
        return h.clone();
    }
    let n = n as usize;
    let prefix = h.prefix_len() + n + 2;
    let period = h.joint_period();
    let w = Window::new(h, prefix + period + n + 2);
    let g = h.group();
    let mut c = Vec::with_capacity(n + 1);
    c.push(g.zero());
    for j in 1..=n {
        c.push(w.lin(&[(2, &c[j - 1]), (1, w.h(-(j as i64)))]));
    }
    let n_i = n as i64;
    EpVector::from_fn(g, prefix, period, |k| {
        if k > n_i || k <= -1 {
            g.add_unchecked(w.h(k - n_i), &c[n])
        } else {
            w.lin(&[(-3, &c[n - k as usize]), (-2, w.h(k - n_i - 1)), (1, &c[n])])
        }
    })
}

/// `P1^{-1} . h`:
/// `(P1^{-1} h)_k = 2h_k - h_{-k} - 2 S_{k-1}` and `(P1^{-1} h)_{-k} = h_k - 2 S_{k-1}` for `k >= 1`.
pub fn act_p1_inv(h: &EpVector) -> EpVector {
    let (prefix, period) = drift_shape(h);
    let w = Window::new(h, prefix + period + 2);
    EpVector::from_fn(h.group(), prefix, period, |k| {
        if k >= 1 {
            w.lin(&[(2, w.h(k)), (-1, w.h(-k)), (-2, w.s(k as usize - 1))])
        } else {
            let m = k.unsigned_abs() as usize;
            w.lin(&[(1, w.h(m as i64)), (-2, w.s(m - 1))])
        }
    })
}

/// `P2^{-1} . h`:
/// `(P2^{-1} h)_k = -2 S_k - h_{-1} - h_{-k-1}` for `k >= 1`, `(P2^{-1} h)_{-1} = h_{-1}`,
/// and `(P2^{-1} h)_{-k} = -2 S_{k-1} - h_{k-1} - h_{-1}` for `k >= 2`.
pub fn act_p2_inv(h: &EpVector) -> EpVector {
    let (prefix, period) = drift_shape(h);
    let w = Window::new(h, prefix + period + 2);
    EpVector::from_fn(h.group(), prefix, period, |k| {
        if k >= 1 {
            w.lin(&[(-2, w.s(k as usize)), (-1, w.h(-1)), (-1, w.h(-k - 1))])
        } else if k == -1 {
            w.h(-1).clone()
        } else {
            let m = k.unsigned_abs() as usize;
            w.lin(&[(-2, w.s(m - 1)), (-1, w.h(m as i64 - 1)), (-1, w.h(-1))])
        }
    })
}

/// `H^{-1} . h`: `(H^{-1} h)_{-1} = -h_1` and `(H^{-1} h)_k = h_{k+1} + h_1` otherwise.
pub fn act_h_inv(h: &EpVector) -> EpVector {
    let prefix = h.prefix_len() + 2;
    let period = h.joint_period();
    let w = Window::new(h, prefix + period + 2);
    let g = h.group();
    EpVector::from_fn(g, prefix, period, |k| {
        if k == -1 {
            g.neg_unchecked(w.h(1))
        } else {
            g.add_unchecked(w.h(k + 1), w.h(1))
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorLetter {
    P1,
    P1Inv,
    P2,
    P2Inv,
    NegId,
    H,
    HInv,
}

impl GeneratorLetter {
    pub fn inverse(self) -> Self {
        use GeneratorLetter::*;
        match self {
            P1 => P1Inv,
            P1Inv => P1,
            P2 => P2Inv,
            P2Inv => P2,
            NegId => NegId,
            H => HInv,
            HInv => H,
        }
    }

    /// The forward letter and the sign of the exponent it stands for.
    fn base(self) -> (Self, i64) {
        use GeneratorLetter::*;
        match self {
            P1Inv => (P1, -1),
            P2Inv => (P2, -1),
            HInv => (H, -1),
            other => (other, 1),
        }
    }

    pub fn act(self, h: &EpVector) -> EpVector {
        use GeneratorLetter::*;
        match self {
            P1 => act_p1(h),
            P1Inv => act_p1_inv(h),
            P2 => act_p2(h),
            P2Inv => act_p2_inv(h),
            NegId => act_neg(h),
            H => act_h(h),
            HInv => act_h_inv(h),
        }
    }

    pub fn matrix(self) -> Mat2Q {
        use GeneratorLetter::*;
        let int = |x: i64| BigRational::from_integer(BigInt::from(x));
        let frac = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        match self {
            P1 => Mat2Q::new(int(4), int(-3), int(3), int(-2)),
            P2 => Mat2Q::new(int(4), frac(-3, 2), int(6), int(-2)),
            NegId => Mat2Q::new(int(-1), int(0), int(0), int(-1)),
            H => Mat2Q::new(int(2), int(0), int(0), frac(1, 2)),
            inv => inv.inverse().matrix().inverse(),
        }
    }

    fn token(self) -> &'static str {
        use GeneratorLetter::*;
        match self.base().0 {
            P1 => "P1",
            P2 => "P2",
            NegId => "-I",
            H => "H",
            _ => unreachable!("base letters are forward"),
        }
    }
}

/// One letter raised to a nonzero power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub letter: GeneratorLetter,
    pub exp: i64,
}

/// A word `A_1 A_2 ... A_m` in the generators. As a left action the rightmost
/// syllable acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Syllable>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn new(syllables: Vec<Syllable>) -> Self {
        Word(syllables).simplified()
    }

    pub fn letter(letter: GeneratorLetter) -> Self {
        Self::power(letter, 1)
    }

    pub fn power(letter: GeneratorLetter, exp: i64) -> Self {
        Self::new(vec![Syllable { letter, exp }])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Rewrites every syllable over forward letters, merges neighbours with
    /// the same letter, reduces `-I` exponents mod 2 and drops trivial syllables.
    pub fn simplified(&self) -> Word {
        let mut out: Vec<Syllable> = Vec::with_capacity(self.0.len());
        for s in &self.0 {
            let (letter, sign) = s.letter.base();
            let exp = sign * s.exp;
            match out.last_mut() {
                Some(last) if last.letter == letter => last.exp += exp,
                _ => out.push(Syllable { letter, exp }),
            }
            if let Some(last) = out.last_mut() {
                if last.letter == GeneratorLetter::NegId {
                    last.exp = last.exp.rem_euclid(2);
                }
                if last.exp == 0 {
                    out.pop();
                }
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word::new(
            self.0
                .iter()
                .rev()
                .map(|s| Syllable {
                    letter: s.letter,
                    exp: -s.exp,
                })
                .collect(),
        )
    }

    /// The product `self * other` (`other` acts first).
    pub fn then_left(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `h -> (A_1 ... A_m) . h`.
    pub fn act(&self, h: &EpVector) -> EpVector {
        let mut out = h.clone();
        for s in self.0.iter().rev() {
            let (letter, sign) = s.letter.base();
            let exp = sign * s.exp;
            out = match letter {
                GeneratorLetter::H if exp > 0 => act_h_pow(&out, exp as u64),
                GeneratorLetter::NegId if exp.rem_euclid(2) == 0 => out,
                GeneratorLetter::NegId => act_neg(&out),
                _ => {
                    let step = if exp > 0 { letter } else { letter.inverse() };
                    (0..exp.unsigned_abs()).fold(out, |acc, _| step.act(&acc))
                }
            };
        }
        out
    }

    /// Exact product of the generator matrices.
    pub fn matrix(&self) -> Mat2Q {
        self.0.iter().fold(Mat2Q::identity(), |acc, s| {
            let (letter, sign) = s.letter.base();
            acc.mul(&letter.matrix().pow(sign * s.exp))
        })
    }

    /// Parses comma-separated tokens from `P1`, `P2`, `-I`, `H`, each with an
    /// optional `^INT` suffix, e.g. `P1^-2,H^3,P2`.
    pub fn parse(text: &str) -> Result<Word> {
        let malformed = || Error::MalformedWord(text.to_string());
        let mut syllables = Vec::new();
        for tok in text.split(',') {
            let (name, exp) = match tok.split_once('^') {
                Some((name, exp)) => {
                    let digits = exp.strip_prefix('-').unwrap_or(exp);
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(malformed());
                    }
                    (name, exp.parse::<i64>().map_err(|_| malformed())?)
                }
                None => (tok, 1),
            };
            let letter = match name {
                "P1" => GeneratorLetter::P1,
                "P2" => GeneratorLetter::P2,
                "-I" => GeneratorLetter::NegId,
                "H" => GeneratorLetter::H,
                _ => return Err(malformed()),
            };
            syllables.push(Syllable { letter, exp });
        }
        Ok(Word::new(syllables))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(s.letter.token())?;
            let exp = s.letter.base().1 * s.exp;
            if exp != 1 {
                write!(f, "^{exp}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

/// `h -> w . h`.
pub fn act_word(h: &EpVector, w: &Word) -> EpVector {
    w.act(h)
}

/// Exact rational matrix of a word.
pub fn word_matrix(w: &Word) -> Mat2Q {
    w.matrix()
}

/// A 2x2 matrix with exact rational entries `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2Q {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl Mat2Q {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Mat2Q { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        Mat2Q::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Mat2Q::from_ints(1, 0, 0, 1)
    }

    pub fn mul(&self, o: &Mat2Q) -> Mat2Q {
        Mat2Q {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Inverse; panics on a singular matrix.
    pub fn inverse(&self) -> Mat2Q {
        let det = self.det();
        assert!(!det.is_zero(), "singular matrix");
        Mat2Q {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        }
    }

    pub fn pow(&self, exp: i64) -> Mat2Q {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut result = Mat2Q::identity();
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }
}

impl fmt::Display for Mat2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}
