use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of terms resolved eagerly; plateau levels never exceed this.
pub const RESOLVED_TERMS: usize = 32;

/// Linear rule `n_i = a·i + b`, written `2i-1`, `i`, `3i-2`, `i+1`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRule {
    pub a: i64,
    pub b: i64,
}

impl LinearRule {
    pub fn term(&self, i: usize) -> i64 {
        self.a * i as i64 + self.b
    }

    /// `Σ 2^{-n_i}` in closed form, `2^{-(a+b)} / (1 − 2^{-a})`.
    pub fn series_sum(&self) -> f64 {
        2f64.powi(-(self.a + self.b) as i32) / (1.0 - 2f64.powi(-self.a as i32))
    }
}

impl fmt::Display for LinearRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.a {
            1 => write!(f, "i")?,
            a => write!(f, "{a}i")?,
        }
        match self.b {
            0 => Ok(()),
            b if b > 0 => write!(f, "+{b}"),
            b => write!(f, "{b}"),
        }
    }
}

impl FromStr for LinearRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::arg(format!("n-sequence rule {s:?}: expected the form ai+b such as 2i-1"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, tail) = compact.split_once('i').ok_or_else(bad)?;
        let a = if head.is_empty() { 1 } else { head.parse::<i64>().map_err(|_| bad())? };
        let b = if tail.is_empty() { 0 } else { tail.parse::<i64>().map_err(|_| bad())? };
        if a < 1 {
            return Err(bad());
        }
        Ok(LinearRule { a, b })
    }
}

/// The admissible level sequence `{n_i}` of the fiber heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NSequence {
    pub rule: LinearRule,
    pub prefix: Vec<usize>,
    pub series_sum: f64,
}

impl NSequence {
    /// `i` with `n_i ≤ n < n_{i+1}`.
    pub fn index_of_level(&self, n: usize) -> usize {
        self.prefix.iter().take_while(|&&t| t <= n).count()
    }

    /// Height `2^{-(i-1)}` of the plateau at level `n ≥ 1`.
    pub fn height_at_level(&self, n: usize) -> f64 {
        2f64.powi(1 - self.index_of_level(n) as i32)
    }
}

impl Default for NSequence {
    fn default() -> Self {
        choose_n_sequence("2i-1").expect("default rule is admissible")
    }
}

/// Parses and validates a rule: `n_1 = 1`, strictly increasing, and
/// `Σ 2^{-n_i} < 1` both for every resolved prefix and for the whole series.
pub fn choose_n_sequence(rule_id: &str) -> Result<NSequence> {
    let rule: LinearRule = rule_id.parse()?;
    let prefix: Vec<i64> = (1..=RESOLVED_TERMS).map(|i| rule.term(i)).collect();
    let show = |len: usize| {
        prefix[..len].iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
    };
    if prefix[0] != 1 {
        return Err(Error::arg(format!("n-sequence {rule}: first bad prefix [{}] (n_1 must be 1)", show(1))));
    }
    let mut partial = 0.0;
    for (len, &n) in prefix.iter().enumerate() {
        partial += 2f64.powi(-n as i32);
        if partial >= 1.0 {
            return Err(Error::arg(format!("n-sequence {rule}: first bad prefix [{}] (partial sum {partial})", show(len + 1))));
        }
    }
    let series_sum = rule.series_sum();
    if series_sum >= 1.0 {
        // every finite prefix is fine; the tail closes the gap to 1
        let gap = 1.0 - prefix.iter().map(|&n| 2f64.powi(-n as i32)).sum::<f64>();
        let len = prefix.iter().position(|&n| 2f64.powi(-n as i32) <= gap).unwrap_or(prefix.len() - 1) + 1;
        return Err(Error::arg(format!(
            "n-sequence {rule}: series sum {series_sum} is not below 1 (resolved prefix [{}] leaves no room for the tail)",
            show(len)
        )));
    }
    Ok(NSequence { rule, prefix: prefix.into_iter().map(|n| n as usize).collect(), series_sum })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_rule() {
        let s = NSequence::default();
        assert_eq!(&s.prefix[..4], &[1, 3, 5, 7]);
        assert!((s.series_sum - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.height_at_level(1), 1.0);
        assert_eq!(s.height_at_level(2), 1.0);
        assert_eq!(s.height_at_level(3), 0.5);
        assert_eq!(s.height_at_level(8), 0.125);
    }

    #[test]
    fn rejections() {
        assert!(choose_n_sequence("i").unwrap_err().to_string().contains("series sum 1"));
        assert!(choose_n_sequence("i+1").unwrap_err().to_string().contains("[2]"));
        assert!(choose_n_sequence("3i-2").is_ok());
        assert!(choose_n_sequence("x").is_err());
    }

    #[test]
    fn display_round_trip() {
        for r in ["2i-1", "i", "3i-2", "i+1"] {
            assert_eq!(r.parse::<LinearRule>().unwrap().to_string(), r);
        }
    }
}
