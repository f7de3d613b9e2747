//! Contexts as factorial-base digit strings, tail equivalence of times
//! in a context, and the exact Cantor (factorial number system)
//! encoding between rationals in `[0, 1)` and finite contexts.
//!
//! Digits are 1-indexed: digit `c_k` satisfies `0 ≤ c_k ≤ k` and
//! selects the face arrow arriving at time `k`. A finite digit string
//! stands for the infinite context obtained by extending with zeros;
//! trailing zeros are trimmed so equal contexts have identical digit
//! vectors. All arithmetic in the encoding is exact big-rational
//! arithmetic; floating point never enters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite context: digits `c_1, …, c_L` with `0 ≤ c_k ≤ k` and an
/// implicit all-zero tail. Canonical form trims trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ContextPrefix {
    digits: Vec<usize>,
}

impl ContextPrefix {
    pub fn new(digits: Vec<usize>) -> Result<Self> {
        for (idx, &d) in digits.iter().enumerate() {
            let k = idx + 1;
            if d > k {
                return Err(Error::InvalidDigits(format!(
                    "digit c_{k} = {d} exceeds its bound {k}"
                )));
            }
        }
        let mut digits = digits;
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(ContextPrefix { digits })
    }

    /// The all-zero context.
    pub fn empty() -> Self {
        ContextPrefix::default()
    }

    /// Truncated context built from a digit rule: digit `c_k := rule(k)`
    /// for `k = 1, …, len`. This is how non-terminating digit streams
    /// (irrational encodings) enter the system, as finite truncations.
    pub fn from_rule(len: usize, rule: impl FnMut(usize) -> usize) -> Result<Self> {
        ContextPrefix::new((1..=len).map(rule).collect())
    }

    /// Stored digits `c_1, …, c_L` (no trailing zeros).
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit `c_k` (1-indexed); 0 beyond the stored prefix.
    pub fn digit(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.digits.get(k - 1).copied().unwrap_or(0)
    }

    /// The face index selected by this context at level `t ≥ 1`: the
    /// digit `c_t`, which indexes the face arrow `[t−1] → [t]`.
    ///
    /// Panics if `t = 0`; there is no face arrow into time 0.
    pub fn face_index(&self, t: usize) -> usize {
        assert!(t >= 1, "face arrows are indexed from t = 1");
        self.digit(t)
    }

    /// The digit slice from position `start_k` (1-indexed) on.
    pub fn tail_from(&self, start_k: usize) -> &[usize] {
        let cut = start_k.saturating_sub(1).min(self.digits.len());
        &self.digits[cut..]
    }
}

/// A time `t` paired with its context tail beyond `t`.
///
/// Two values are equal exactly when their times match and their digit
/// tails from position `t + 1` on agree; digits at positions `≤ t`
/// never participate in equality, so every choice of past digits
/// yields the same time-in-context.
#[derive(Debug, Clone, Eq)]
pub struct TimeInContext {
    t: usize,
    context: ContextPrefix,
}

impl TimeInContext {
    pub fn new(t: usize, context: ContextPrefix) -> Self {
        TimeInContext { t, context }
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn context(&self) -> &ContextPrefix {
        &self.context
    }

    /// The digits `c_s` for `s ≥ t + 1`.
    pub fn tail(&self) -> &[usize] {
        self.context.tail_from(self.t + 1)
    }
}

impl PartialEq for TimeInContext {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t && self.tail() == other.tail()
    }
}

impl std::hash::Hash for TimeInContext {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.t.hash(state);
        self.tail().hash(state);
    }
}

/// The time `t` in the context `c`.
pub fn time_in_context(t: usize, c: &ContextPrefix) -> TimeInContext {
    TimeInContext::new(t, c.clone())
}

/// Parses a rational from `"m/n"` or a bare integer `"m"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |detail: &str| Error::Parse(format!("invalid rational {s:?}: {detail}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let numerator: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let denominator: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if denominator.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(numerator, denominator))
}

/// Exact factorial-base expansion of a rational `r ∈ [0, 1)`.
///
/// Digits satisfy `r = Σ c_k / (k+1)!` exactly. The loop keeps the
/// remainder as an exact rational: `c_k = ⌊(k+1)·r_k⌋` and
/// `r_{k+1} = (k+1)·r_k − c_k`, stopping when the remainder hits zero,
/// which happens after fewer than `denominator` steps.
pub fn cantor_expand(r: &BigRational) -> Result<ContextPrefix> {
    if r.is_negative() || *r >= BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::RationalOutOfRange(format!("{r} is not in [0, 1)")));
    }
    let mut remainder = r.clone();
    let mut digits = Vec::new();
    let mut k: usize = 0;
    while !remainder.is_zero() {
        k += 1;
        let scaled = remainder * BigRational::from_integer(BigInt::from(k as u64 + 1));
        let digit = scaled.floor().to_integer();
        remainder = scaled - BigRational::from_integer(digit.clone());
        let digit = digit
            .to_usize()
            .ok_or_else(|| Error::InvalidDigits(format!("digit c_{k} overflows usize")))?;
        debug_assert!(digit <= k);
        digits.push(digit);
    }
    ContextPrefix::new(digits)
}

/// Exact value `Σ c_k / (k+1)!` of a finite context, the inverse of
/// [`cantor_expand`] on its image.
pub fn cantor_value(c: &ContextPrefix) -> BigRational {
    let mut acc = BigRational::zero();
    for k in (1..=c.len()).rev() {
        let digit = BigRational::from_integer(BigInt::from(c.digits()[k - 1] as u64));
        acc = (digit + acc) / BigRational::from_integer(BigInt::from(k as u64 + 1));
    }
    acc
}
