use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite binary word, one symbol (0 or 1) per byte.
pub type Word = Vec<u8>;

pub fn parse_word(s: &str) -> Result<Word> {
    s.bytes()
        .map(|b| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(Error::arg(format!("'{s}' is not a binary word"))),
        })
        .collect()
}

pub fn word_string(w: &[u8]) -> String {
    w.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

fn check_word(w: &[u8]) -> Result<()> {
    if w.iter().any(|&b| b > 1) {
        return Err(Error::arg("symbols must be 0 or 1"));
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Eventually periodic point of the full binary shift: `preperiod` followed by
/// `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolSequence {
    preperiod: Word,
    period: Word,
}

impl SymbolSequence {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::arg("period must be nonempty"));
        }
        check_word(&preperiod)?;
        check_word(&period)?;
        Ok(SymbolSequence { preperiod, period })
    }

    pub fn constant(symbol: u8) -> Self {
        SymbolSequence { preperiod: Vec::new(), period: vec![symbol & 1] }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Symbol at 1-based position `i ≥ 1`.
    pub fn symbol(&self, i: u64) -> u8 {
        debug_assert!(i >= 1);
        let p = i - 1;
        let pre = self.preperiod.len() as u64;
        if p < pre {
            self.preperiod[p as usize]
        } else {
            self.period[((p - pre) % self.period.len() as u64) as usize]
        }
    }

    /// First `n` symbols.
    pub fn prefix(&self, n: usize) -> Word {
        (1..=n as u64).map(|i| self.symbol(i)).collect()
    }

    /// First position `> i` at which the symbol may differ from the one at `i`.
    pub fn run_end(&self, i: u64) -> u64 {
        let pre = self.preperiod.len() as u64;
        if i <= pre {
            return i + 1;
        }
        let len = self.period.len();
        let r = ((i - 1 - pre) % len as u64) as usize;
        let s = self.period[r];
        if self.period.iter().all(|&b| b == s) {
            return u64::MAX;
        }
        let mut k = 1;
        while self.period[(r + k) % len] == s {
            k += 1;
        }
        i + k as u64
    }

    /// `σ`: drops the first symbol.
    pub fn shift(&self) -> Self {
        if !self.preperiod.is_empty() {
            return SymbolSequence { preperiod: self.preperiod[1..].to_vec(), period: self.period.clone() };
        }
        let mut period = self.period.clone();
        period.rotate_left(1);
        SymbolSequence { preperiod: Vec::new(), period }
    }

    /// `σᵏ`.
    pub fn shift_by(&self, k: u64) -> Self {
        let pre = self.preperiod.len() as u64;
        if k <= pre {
            return SymbolSequence { preperiod: self.preperiod[k as usize..].to_vec(), period: self.period.clone() };
        }
        let mut period = self.period.clone();
        let r = ((k - pre) % period.len() as u64) as usize;
        period.rotate_left(r);
        SymbolSequence { preperiod: Vec::new(), period }
    }

    /// `w x`.
    pub fn prepend(&self, w: &[u8]) -> Self {
        let mut preperiod = w.to_vec();
        preperiod.extend_from_slice(&self.preperiod);
        SymbolSequence { preperiod, period: self.period.clone() }
    }

    /// Positions that decide equality: agreement on `1..=bound` means equal sequences.
    pub fn comparison_bound(&self, other: &Self) -> u64 {
        let pre = self.preperiod.len().max(other.preperiod.len()) as u64;
        let (a, b) = (self.period.len() as u64, other.period.len() as u64);
        pre + a / gcd(a, b) * b
    }

    /// First 1-based position where the sequences differ, `None` if they are equal.
    pub fn first_difference(&self, other: &Self) -> Option<u64> {
        self.first_difference_from(other, 1)
    }

    /// First position `≥ start` where the sequences differ.
    pub fn first_difference_from(&self, other: &Self, start: u64) -> Option<u64> {
        let bound = self.comparison_bound(other);
        // beyond the preperiods both sequences are periodic with period lcm
        let lcm = bound - self.preperiod.len().max(other.preperiod.len()) as u64;
        let pre = bound - lcm;
        let mut i = start.max(1);
        let end = if i > pre { i + lcm } else { bound + 1 };
        while i < end {
            if self.symbol(i) != other.symbol(i) {
                return Some(i);
            }
            i += 1;
        }
        None
    }

    /// Same sequence, regardless of representation.
    pub fn same_point(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", word_string(&self.preperiod), word_string(&self.period))
    }
}

/// Parses `preperiod|period`, e.g. `101|0`.
impl FromStr for SymbolSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (pre, per) =
            s.split_once('|').ok_or_else(|| Error::arg(format!("sequence '{s}' is not 'preperiod|period'")))?;
        SymbolSequence::new(parse_word(pre)?, parse_word(per)?)
    }
}

/// Exact positive rational radius `num/den ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radius {
    pub num: u64,
    pub den: u64,
}

impl Radius {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::arg("radius must be positive"));
        }
        if num > den {
            return Err(Error::arg(format!("radius {num}/{den} exceeds 1")));
        }
        let g = gcd(num, den);
        Ok(Radius { num: num / g, den: den / g })
    }

    /// `1/m`.
    pub fn reciprocal(m: u64) -> Result<Self> {
        Radius::new(1, m)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact `1/i < ε`.
    pub fn reciprocal_below(&self, i: u64) -> bool {
        (self.den as u128) < (i as u128) * (self.num as u128)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 1 && self.den == 1 {
            write!(f, "1")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Parses `p/q` or a terminating decimal such as `0.25`, exactly.
impl FromStr for Radius {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::arg(format!("radius '{s}' is not a rational number in (0, 1]"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Radius::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac_val)).ok_or_else(bad)?;
        Radius::new(num, den)
    }
}

/// `m(ε)`: least `m` with `1/(m + 1) < ε`, so agreement on the first `m` positions
/// puts a point in the open ball of radius `ε`.
pub fn ball_depth(epsilon: Radius) -> u64 {
    epsilon.den / epsilon.num
}

/// `{x ∈ Σ : x starts with prefix}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylinderSet {
    pub prefix: Word,
}

impl CylinderSet {
    pub fn new(prefix: Word) -> Result<Self> {
        check_word(&prefix)?;
        Ok(CylinderSet { prefix })
    }

    pub fn contains_prefix(&self, word: &[u8]) -> bool {
        word.len() >= self.prefix.len() && word[..self.prefix.len()] == self.prefix[..]
    }

    pub fn contains(&self, x: &SymbolSequence) -> bool {
        self.contains_prefix(&x.prefix(self.prefix.len()))
    }

    /// `self ⊆ other`, decided on prefixes.
    pub fn is_subset_of(&self, other: &CylinderSet) -> bool {
        other.contains_prefix(&self.prefix)
    }

    /// `σⁿ` of the cylinder: again a cylinder (the whole space once the prefix is used up).
    pub fn shift_by(&self, n: usize) -> CylinderSet {
        CylinderSet { prefix: self.prefix[n.min(self.prefix.len())..].to_vec() }
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", word_string(&self.prefix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_drops_first_symbol() {
        let s: SymbolSequence = "1|0".parse().unwrap();
        assert_eq!(s.shift().to_string(), "|0");
        let s: SymbolSequence = "|10".parse().unwrap();
        assert_eq!(s.shift().to_string(), "|01");
    }

    #[test]
    fn shift_by_agrees_with_repeated_shift() {
        let s: SymbolSequence = "10110|011".parse().unwrap();
        let mut t = s.clone();
        for k in 0..20u64 {
            assert_eq!(s.shift_by(k), t);
            t = t.shift();
        }
    }

    #[test]
    fn equality_across_representations() {
        let a: SymbolSequence = "|01".parse().unwrap();
        let b: SymbolSequence = "0|10".parse().unwrap();
        let c: SymbolSequence = "01|0101".parse().unwrap();
        assert!(a.same_point(&b) && a.same_point(&c));
        let x: SymbolSequence = "|0111".parse().unwrap();
        let y: SymbolSequence = "1|0".parse().unwrap();
        assert_eq!(x.first_difference(&y), Some(1));
    }

    #[test]
    fn ball_depth_is_least_admissible_m() {
        for (eps, m) in [("1", 1), ("1/2", 2), ("0.3", 3), ("1/3", 3), ("0.25", 4), ("0.26", 3)] {
            let r: Radius = eps.parse().unwrap();
            let oracle = (1u64..).find(|&m| r.reciprocal_below(m + 1)).unwrap();
            assert_eq!(ball_depth(r), m, "eps {eps}");
            assert_eq!(oracle, m);
        }
        assert!("0".parse::<Radius>().is_err());
        assert!("1.5".parse::<Radius>().is_err());
    }

    #[test]
    fn run_end_of_constant_period_is_unbounded() {
        let s: SymbolSequence = "10|0".parse().unwrap();
        assert_eq!(s.run_end(1), 2);
        assert_eq!(s.run_end(3), u64::MAX);
        let s: SymbolSequence = "|0011".parse().unwrap();
        assert_eq!(s.run_end(1), 3);
        assert_eq!(s.run_end(2), 3);
        assert_eq!(s.run_end(4), 5);
    }
}
