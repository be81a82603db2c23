//! Integer/rational primitives and partition combinatorics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::Error;

/// Exact rational scalar used everywhere.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 2..=n {
        r *= i;
    }
    r
}

pub fn factorial_q(n: u64) -> Q {
    qi(factorial(n))
}

/// Binomial coefficient C(n, k) with C(n, k) = 0 for k < 0 or k > n (n >= 0).
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Integer power with 0^0 = 1.
pub fn ipow(base: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

pub fn qpow(base: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// (k)!! for odd k >= -1.
pub fn double_factorial_odd(k: i64) -> Result<BigInt, Error> {
    if k < -1 || k % 2 == 0 {
        return Err(Error::Domain(format!("double factorial needs odd k >= -1, got {k}")));
    }
    let mut r = BigInt::one();
    let mut i = k;
    while i > 1 {
        r *= i;
        i -= 2;
    }
    Ok(r)
}

/// (2a-1)!! for a >= 0.
pub fn dfo(a: i64) -> BigInt {
    double_factorial_odd(2 * a - 1).expect("a >= 0")
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

/// Weakly decreasing list of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, Error> {
        if parts.contains(&0) {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// Panics on a zero part; for literals in code and tests.
    pub fn from_slice(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec()).expect("positive parts")
    }

    pub fn empty() -> Self {
        Partition { parts: vec![] }
    }

    pub fn one_part(d: u32) -> Self {
        Partition { parts: vec![d] }
    }

    pub fn ones(d: u32) -> Self {
        Partition { parts: vec![1; d as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// part -> multiplicity
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// Multiplicity vector indexed by part size (index 0 unused), length size+1.
    pub fn mult_vec(&self) -> Vec<u32> {
        let mut v = vec![0u32; self.size() as usize + 1];
        for &p in &self.parts {
            v[p as usize] += 1;
        }
        v
    }

    pub fn from_mult_vec(m: &[u32]) -> Self {
        let mut parts = Vec::new();
        for j in (1..m.len()).rev() {
            for _ in 0..m[j] {
                parts.push(j as u32);
            }
        }
        Partition { parts }
    }

    pub fn union(&self, other: &Partition) -> Partition {
        let mut p = self.parts.clone();
        p.extend_from_slice(&other.parts);
        Partition::new(p).unwrap()
    }

    /// Size of the centralizer of a permutation of this cycle type: prod j^{i_j} i_j!.
    pub fn z_lambda(&self) -> BigInt {
        let mut r = BigInt::one();
        for (j, i) in self.multiplicities() {
            r *= ipow(j as i64, i) * factorial(i as u64);
        }
        r
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn aut_size(p: &Partition) -> BigInt {
    p.multiplicities().values().map(|&i| factorial(i as u64)).product()
}

/// All partitions of n in reverse-lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// Partitions of n with at most `max_len` parts.
pub fn partitions_of_len_le(n: u32, max_len: usize) -> Vec<Partition> {
    partitions_of(n).into_iter().filter(|p| p.len() <= max_len).collect()
}

/// Branch point counts (r^g_alpha, r^g_{alpha,beta}, r^Fab_{g,alpha}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchCounts {
    pub r_single: i64,
    pub r_double: Option<i64>,
    pub r_fab: i64,
}

pub fn branch_counts(g: u32, alpha: &Partition, beta: Option<&Partition>) -> Result<BranchCounts, Error> {
    let d = alpha.size() as i64;
    let l = alpha.len() as i64;
    let g = g as i64;
    let r_double = match beta {
        Some(b) => {
            if b.size() as i64 != d {
                return Err(Error::Domain(format!("size mismatch: {alpha} vs {b}")));
            }
            Some(l + b.len() as i64 + 2 * g - 2)
        }
        None => None,
    };
    Ok(BranchCounts { r_single: d + l + 2 * g - 2, r_double, r_fab: d + l - 1 })
}

pub fn r_single(g: u32, a: &Partition) -> i64 {
    a.size() as i64 + a.len() as i64 + 2 * g as i64 - 2
}

pub fn r_double(g: u32, a: &Partition, b: &Partition) -> i64 {
    a.len() as i64 + b.len() as i64 + 2 * g as i64 - 2
}

pub fn r_fab(a: &Partition) -> i64 {
    a.size() as i64 + a.len() as i64 - 1
}

/// Iterate over all submultisets of a multiplicity vector.
pub fn sub_multisets(m: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; m.len()]];
    for (j, &c) in m.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
        for v in &out {
            for k in 0..=c {
                let mut w = v.clone();
                w[j] = k;
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// All compositions of n into k nonnegative parts.
pub fn weak_compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn rec(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = rem;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rem {
            cur[i] = v;
            rec(i + 1, rem - v, cur, out);
        }
    }
    if k == 0 {
        if n == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, n, &mut cur, &mut out);
    out
}

/// Exponent-wise check used when pretty printing.
pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_one() -> Q {
    Q::one()
}

pub fn q_zero() -> Q {
    Q::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aut_examples() {
        assert_eq!(aut_size(&Partition::from_slice(&[1])), BigInt::from(1));
        assert_eq!(aut_size(&Partition::from_slice(&[2, 2, 1])), BigInt::from(2));
        assert_eq!(aut_size(&Partition::from_slice(&[1, 1, 1, 1])), BigInt::from(24));
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(6).len(), 11);
        assert_eq!(partitions_of(3)[0].parts(), &[3]);
        assert_eq!(partitions_of(3)[2].parts(), &[1, 1, 1]);
    }

    #[test]
    fn dfact() {
        assert_eq!(double_factorial_odd(-1).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial_odd(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial_odd(9).unwrap(), BigInt::from(945));
        assert!(double_factorial_odd(4).is_err());
        assert!(double_factorial_odd(-3).is_err());
    }

    #[test]
    fn branch_examples() {
        let b = branch_counts(0, &Partition::from_slice(&[2, 1]), None).unwrap();
        assert_eq!(b.r_single, 3);
        let b = branch_counts(1, &Partition::from_slice(&[2]), None).unwrap();
        assert_eq!(b.r_fab, 2);
        let b = branch_counts(0, &Partition::from_slice(&[3]), Some(&Partition::ones(3))).unwrap();
        assert_eq!(b.r_double, Some(2));
        assert!(branch_counts(0, &Partition::from_slice(&[3]), Some(&Partition::ones(2))).is_err());
    }

    #[test]
    fn binom() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }
}
