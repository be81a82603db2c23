//! Faber symbols: keys, tables, string/dilaton, the conjectured closed form,
//! recovery of the symbols from Faber-Hurwitz numbers, and the Psi/Phi series.

pub mod psiphi;
pub mod solve;

pub use solve::{solve_symbols, SolveReport};

use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::combinat::{dfo, factorial, ipow, qi, Q};
use crate::{Error, Result};

/// <tau_{a_1} ... tau_{a_n} lambda_k> in genus g, with the a's sorted decreasingly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaberKey {
    pub g: u32,
    pub a: Vec<u32>,
    pub k: u32,
}

impl FaberKey {
    pub fn new(g: u32, mut a: Vec<u32>, k: u32) -> FaberKey {
        a.sort_unstable_by(|x, y| y.cmp(x));
        FaberKey { g, a, k }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// k + sum a = g - 2 + n
    pub fn is_dimensional(&self) -> bool {
        self.k as i64 + self.a.iter().map(|&x| x as i64).sum::<i64>() == self.g as i64 - 2 + self.n() as i64
    }

    /// Top symbols carry no lambda class.
    pub fn is_top(&self) -> bool {
        self.k == 0
    }
}

impl fmt::Display for FaberKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "{};{};{}", self.g, a.join(","), self.k)
    }
}

impl FromStr for FaberKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<FaberKey> {
        let bad = || Error::Domain(format!("bad symbol key {s:?}; expected g;a1,...,an;k"));
        let fields: Vec<&str> = s.split(';').collect();
        if fields.len() != 3 {
            return Err(bad());
        }
        let g = fields[0].trim().parse().map_err(|_| bad())?;
        let a = if fields[1].trim().is_empty() {
            vec![]
        } else {
            fields[1].split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<Vec<u32>>>()?
        };
        let k = fields[2].trim().parse().map_err(|_| bad())?;
        Ok(FaberKey::new(g, a, k))
    }
}

/// All dimensional keys of genus g with exactly n points and lambda index 0..=g.
pub fn keys_for(g: u32, n: usize) -> Vec<FaberKey> {
    let mut out = Vec::new();
    let total = g as i64 - 2 + n as i64;
    for k in 0..=g as i64 {
        let s = total - k;
        if s < 0 {
            continue;
        }
        for a in partitions_with_zeros(s as u32, n) {
            out.push(FaberKey::new(g, a, k as u32));
        }
    }
    out.sort();
    out
}

/// Weakly decreasing n-tuples of nonnegative integers summing to s.
fn partitions_with_zeros(s: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(rem: u32, max: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=max.min(rem)).rev() {
            if (v as u64) * (left as u64) < rem as u64 {
                break;
            }
            cur.push(v);
            rec(rem - v, v, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(s, s, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Solved,
    StringDilaton,
    Conjectured,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Solved => "solved",
            Provenance::StringDilaton => "string-dilaton",
            Provenance::Conjectured => "conjectured",
        }
    }
}

/// Symbol values in units of psi_1^(g-1).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolTable {
    entries: BTreeMap<FaberKey, (Q, Provenance)>,
}

impl SymbolTable {
    pub fn new() -> SymbolTable {
        SymbolTable::default()
    }

    pub fn insert(&mut self, key: FaberKey, v: Q, prov: Provenance) {
        self.entries.insert(key, (v, prov));
    }

    /// Value of a key; keys failing the dimension constraint are zero.
    pub fn get(&self, key: &FaberKey) -> Result<Q> {
        if !key.is_dimensional() {
            return Ok(Q::zero());
        }
        self.entries.get(key).map(|e| e.0.clone()).ok_or_else(|| Error::MissingSymbol(key.to_string()))
    }

    pub fn provenance(&self, key: &FaberKey) -> Option<Provenance> {
        self.entries.get(key).map(|e| e.1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FaberKey, &Q, Provenance)> {
        self.entries.iter().map(|(k, (v, p))| (k, v, *p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn merge(&mut self, other: &SymbolTable) {
        for (k, (v, p)) in &other.entries {
            self.entries.insert(k.clone(), (v.clone(), *p));
        }
    }

    /// CSV with header g,a_indices,k,num,den,provenance.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("g,a_indices,k,num,den,provenance\n");
        for (k, (v, p)) in &self.entries {
            let a: Vec<String> = k.a.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{},{},{},{},{},{}\n", k.g, a.join(" "), k.k, v.numer(), v.denom(), p.as_str()));
        }
        s
    }

    /// Every string/dilaton reduction whose inputs are present, as (key, stored, reduced).
    pub fn string_dilaton_pairs(&self) -> Vec<(FaberKey, Q, Q)> {
        let mut out = Vec::new();
        for (key, (v, _)) in &self.entries {
            if let Some(Ok(r)) = string_dilaton(key, self) {
                out.push((key.clone(), v.clone(), r));
            }
        }
        out
    }

    /// The reductions where stored and reduced values differ.
    pub fn string_dilaton_violations(&self) -> Vec<(FaberKey, Q, Q)> {
        self.string_dilaton_pairs().into_iter().filter(|(_, a, b)| a != b).collect()
    }
}

/// Reduce a key with a tau_0 or tau_1 insertion (and at least two points) to fewer points.
/// Returns None when the key is not reducible, Some(Err) when an input is missing.
pub fn string_dilaton(key: &FaberKey, table: &SymbolTable) -> Option<Result<Q>> {
    if !key.is_dimensional() {
        return Some(Ok(Q::zero()));
    }
    if key.n() < 2 {
        return None;
    }
    let g = key.g;
    if let Some(pos) = key.a.iter().position(|&x| x == 0) {
        let mut rest = key.a.clone();
        rest.remove(pos);
        let mut total = Q::zero();
        for i in 0..rest.len() {
            if rest[i] == 0 {
                continue;
            }
            let mut b = rest.clone();
            b[i] -= 1;
            match table.get(&FaberKey::new(g, b, key.k)) {
                Ok(v) => total += v,
                Err(e) => return Some(Err(e)),
            }
        }
        return Some(Ok(total));
    }
    if let Some(pos) = key.a.iter().position(|&x| x == 1) {
        let mut rest = key.a.clone();
        rest.remove(pos);
        let n = rest.len() as i64;
        let factor = Q::from_integer((2 * g as i64 - 2 + n).into());
        return Some(table.get(&FaberKey::new(g, rest, key.k)).map(|v| v * factor));
    }
    None
}

/// (2g-3+n)! (2g-1)!! / ((2g-1)! prod (2d_j - 1)!!) with all d_j >= 1 and sum d_j = g - 2 + n.
pub fn conjecture_value(g: u32, d: &[u32]) -> Result<Q> {
    let n = d.len() as i64;
    let s: i64 = d.iter().map(|&x| x as i64).sum();
    if g == 0 || s != g as i64 - 2 + n {
        return Err(Error::Domain(format!("dimension mismatch for g = {g}, d = {d:?}")));
    }
    if d.contains(&0) {
        return Err(Error::Domain("conjecture_value needs positive indices".into()));
    }
    let num = factorial((2 * g as i64 - 3 + n) as u64) * dfo(g as i64);
    let mut den = factorial(2 * g as u64 - 1);
    for &x in d {
        den *= dfo(x as i64);
    }
    Ok(Q::new(num, den))
}

/// Conjectured value extended to zero indices through the string equation.
pub fn conjecture_value_smoothed(key: &FaberKey) -> Result<Q> {
    if !key.is_dimensional() || key.k != 0 {
        return Err(Error::Domain(format!("no conjectured value for {key}")));
    }
    if key.n() == 1 {
        return Ok(Q::one());
    }
    if key.a.contains(&0) {
        let mut rest = key.a.clone();
        let pos = rest.iter().position(|&x| x == 0).unwrap();
        rest.remove(pos);
        let mut total = Q::zero();
        for i in 0..rest.len() {
            if rest[i] == 0 {
                continue;
            }
            let mut b = rest.clone();
            b[i] -= 1;
            let k = FaberKey::new(key.g, b, 0);
            if k.is_dimensional() {
                total += conjecture_value_smoothed(&k)?;
            }
        }
        return Ok(total);
    }
    conjecture_value(key.g, &key.a)
}

/// Table of conjectured lambda-free symbols for genus 1..=g_max and 1..=n_max points.
pub fn conjectured_table(g_max: u32, n_max: usize) -> Result<SymbolTable> {
    let mut t = SymbolTable::new();
    for g in 1..=g_max {
        for n in 1..=n_max {
            for key in keys_for(g, n).into_iter().filter(|k| k.k == 0) {
                let v = conjecture_value_smoothed(&key)?;
                t.insert(key, v, Provenance::Conjectured);
            }
        }
    }
    Ok(t)
}

/// sum over dimensional keys of (-1)^k <tau_a lambda_k> prod alpha_j^{a_j}, symmetrized over
/// assignments of the indices to the arguments.
pub fn faber_polynomial(g: u32, args: &[u32], table: &SymbolTable) -> Result<Q> {
    let m = args.len();
    let mut total = Q::zero();
    for key in keys_for(g, m) {
        let v = table.get(&key)?;
        if v.is_zero() {
            continue;
        }
        let sign = if key.k % 2 == 1 { -Q::one() } else { Q::one() };
        for perm in crate::pseries::distinct_permutations(&key.a) {
            let mut mono = Q::one();
            for (j, &a) in perm.iter().enumerate() {
                mono *= qi(ipow(args[j] as i64, a));
            }
            total += &sign * &v * mono;
        }
    }
    Ok(total)
}

/// Affine-free linear combination of symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolLinear {
    pub terms: BTreeMap<FaberKey, Q>,
}

impl SymbolLinear {
    pub fn add_term(&mut self, k: FaberKey, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Q) -> SymbolLinear {
        let mut out = SymbolLinear::default();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn eval(&self, table: &SymbolTable) -> Result<Q> {
        let mut s = Q::zero();
        for (k, v) in &self.terms {
            s += v * table.get(k)?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (k, v) in &self.terms {
            m.insert(k.to_string(), crate::suites::q_json(v));
        }
        serde_json::Value::Object(m)
    }
}

/// 2^g/(g-1)!: the generator ratio in psi_1^(g-1) units.
pub fn generator_ratio(g: u32) -> Q {
    Q::new(ipow(2, g), factorial(g as u64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{q, qf};

    #[test]
    fn key_roundtrip() {
        let k: FaberKey = "3;1,2;0".parse().unwrap();
        assert_eq!(k.a, vec![2, 1]);
        assert_eq!(k.to_string(), "3;2,1;0");
        assert!(k.is_dimensional());
        assert!("3;1".parse::<FaberKey>().is_err());
    }

    #[test]
    fn conjecture_examples() {
        assert_eq!(conjecture_value(2, &[1, 1]).unwrap(), q(3));
        assert_eq!(conjecture_value(3, &[2, 1]).unwrap(), q(5));
        assert_eq!(conjecture_value(2, &[1, 1, 1]).unwrap(), q(12));
        assert_eq!(conjecture_value(4, &[2, 2]).unwrap(), qf(35, 3));
        assert!(conjecture_value(3, &[1]).is_err());
        assert_eq!(conjecture_value(2, &[1]).unwrap(), q(1));
    }

    #[test]
    fn string_dilaton_examples() {
        for g in 1..=4 {
            let mut t = SymbolTable::new();
            t.insert(FaberKey::new(g, vec![g - 1], 0), q(1), Provenance::Solved);
            let s = string_dilaton(&FaberKey::new(g, vec![g, 0], 0), &t).unwrap().unwrap();
            assert_eq!(s, q(1));
            if g >= 2 {
                let d = string_dilaton(&FaberKey::new(g, vec![g - 1, 1], 0), &t).unwrap().unwrap();
                assert_eq!(d, q(2 * g as i64 - 1));
            }
        }
        let t = SymbolTable::new();
        assert_eq!(string_dilaton(&FaberKey::new(2, vec![4, 0, 0], 0), &t).unwrap().unwrap(), q(0));
    }

    #[test]
    fn keys_enumerate() {
        assert_eq!(keys_for(1, 1), vec![FaberKey::new(1, vec![0], 0)]);
        assert!(keys_for(3, 3).iter().all(|k| k.is_dimensional()));
        assert_eq!(keys_for(2, 2).len(), 4);
    }

    #[test]
    fn faber_polynomial_genus_one() {
        let mut t = SymbolTable::new();
        t.insert(FaberKey::new(1, vec![0], 0), q(1), Provenance::Solved);
        t.insert(FaberKey::new(1, vec![], 1), q(0), Provenance::Solved);
        assert_eq!(faber_polynomial(1, &[7], &t).unwrap(), q(1));
        assert!(faber_polynomial(1, &[1, 1], &t).is_err());
    }

    #[test]
    fn ratio() {
        assert_eq!(generator_ratio(1), q(2));
        assert_eq!(generator_ratio(3), q(4));
    }
}
