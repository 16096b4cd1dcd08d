//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

/// Explicit symbols `1..=len` of `pre|per`.
pub fn periodic_symbols(pre: &[u8], per: &[u8], len: usize) -> Vec<u8> {
    (0..len).map(|p| if p < pre.len() { pre[p] } else { per[(p - pre.len()) % per.len()] }).collect()
}

/// Segment boundaries `a_1 < a_2 < …` extended by `a_{k+1} = (k+1)·a_k`.
pub fn boundaries(lead: &[u64], upto: u64) -> Vec<u64> {
    let mut b = lead.to_vec();
    while *b.last().unwrap() < upto {
        let k = b.len() as u64;
        b.push((k + 1) * b.last().unwrap());
    }
    b
}

/// Explicit symbols of the family member with parameter `alpha`: zero before
/// `a_1` and on even segments, `alpha` indexed by the block enumeration
/// `1,2; 1,2,3; …` (cycled) on odd segments.
pub fn member_symbols(lead: &[u64], alpha: &[u8], len: usize) -> Vec<u8> {
    let b = boundaries(lead, len as u64 + 1);
    let mut coords = Vec::new();
    let mut block = 2;
    while coords.len() < b.len() {
        coords.extend(1..=block);
        block += 1;
    }
    (0..len as u64)
        .map(|p| {
            let k = b.iter().filter(|&&a| a <= p).count();
            if k % 2 == 0 {
                0
            } else {
                let e = coords[(k + 1) / 2 - 1];
                alpha[((e - 1) % alpha.len() as u64) as usize]
            }
        })
        .collect()
}

/// `#{j < n : d(σʲx, σʲy) < t}` for explicit symbol arrays: the shifted points
/// are closer than `t` iff they agree on their first `⌊1/t⌋` symbols.
pub fn shift_xi(x: &[u8], y: &[u8], n: usize, t: f64) -> usize {
    let m = (1.0 / t).floor() as usize;
    (0..n).filter(|&j| x[j..j + m] == y[j..j + m]).count()
}

pub fn tent(x: f64) -> f64 {
    if x < 0.5 {
        2.0 * x
    } else {
        2.0 * (1.0 - x)
    }
}

pub fn logistic4(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

pub fn real_xi(f: impl Fn(f64) -> f64, x: f64, y: f64, n: usize, t: f64) -> usize {
    let (mut a, mut b, mut c) = (x, y, 0);
    for _ in 0..n {
        if (a - b).abs() < t {
            c += 1;
        }
        a = f(a);
        b = f(b);
    }
    c
}
