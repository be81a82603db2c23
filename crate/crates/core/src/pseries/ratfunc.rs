//! Rational functions whose denominators are products of y_i - y_j and y_i + y_j,
//! and truncated t-series with such coefficients.

use num_traits::One;
use std::collections::BTreeMap;

use super::{Mono, MultiSeries, Ring};
use crate::combinat::Q;
use crate::{Error, Result};

/// y_i - y_j (plus = false) or y_i + y_j (plus = true), with i < j as ring indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinFactor {
    pub i: usize,
    pub j: usize,
    pub plus: bool,
}

impl LinFactor {
    /// Canonical factor for y_a -/+ y_b plus the sign that was pulled out.
    pub fn canonical(a: usize, b: usize, plus: bool) -> (LinFactor, bool) {
        assert_ne!(a, b);
        if a < b {
            (LinFactor { i: a, j: b, plus }, false)
        } else {
            (LinFactor { i: b, j: a, plus }, !plus)
        }
    }

    pub fn poly(&self, ring: &Ring) -> MultiSeries {
        let mut a = vec![0; ring.nvars()];
        a[self.i] = 1;
        let mut b = vec![0; ring.nvars()];
        b[self.j] = 1;
        let mut p = ring.monomial(&a, Q::one());
        p.add_term(b, if self.plus { Q::one() } else { -Q::one() });
        p
    }
}

/// Exact quotient of p by (y_i + c y_j) with c = -1 or +1, if it divides.
pub fn div_linear(p: &MultiSeries, f: LinFactor) -> Option<MultiSeries> {
    if p.is_zero() {
        return Some(p.clone());
    }
    let ring = p.ring();
    // p as polynomial in y_i: group by exponent of y_i
    let mut by: BTreeMap<i32, MultiSeries> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m[f.i];
        if e < 0 {
            return None;
        }
        let mut mm = m.clone();
        mm[f.i] = 0;
        by.entry(e).or_insert_with(|| ring.zero()).add_term(mm, c.clone());
    }
    // dividing by (y_i - r) with r = y_j (minus) or -y_j (plus): Horner from the top
    let top = *by.keys().next_back().unwrap();
    let mut rshift = vec![0; ring.nvars()];
    rshift[f.j] = 1;
    let rc = if f.plus { -Q::one() } else { Q::one() };
    let mut quot = ring.zero();
    let mut carry = ring.zero();
    for e in (0..=top).rev() {
        let a = by.remove(&e).unwrap_or_else(|| ring.zero());
        let cur = a.add(&carry);
        if e == 0 {
            return if cur.is_zero() { Some(quot) } else { None };
        }
        let mut sh = vec![0; ring.nvars()];
        sh[f.i] = e - 1;
        quot.add_scaled_shifted(&cur, &Q::one(), &sh);
        carry = cur.mul_mono(&rshift, &rc);
    }
    unreachable!()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: MultiSeries,
    den: BTreeMap<LinFactor, u32>,
}

impl RatFunc {
    pub fn from_poly(p: MultiSeries) -> RatFunc {
        RatFunc { num: p, den: BTreeMap::new() }
    }

    pub fn zero(ring: &Ring) -> RatFunc {
        RatFunc::from_poly(ring.zero())
    }

    pub fn new(num: MultiSeries, den: BTreeMap<LinFactor, u32>) -> RatFunc {
        let mut r = RatFunc { num, den };
        r.reduce();
        r
    }

    /// num / (y_a - y_b)^k  or num / (y_a + y_b)^k
    pub fn over(num: MultiSeries, a: usize, b: usize, plus: bool, k: u32) -> RatFunc {
        let (f, flip) = LinFactor::canonical(a, b, plus);
        let num = if flip && k % 2 == 1 { num.neg() } else { num };
        let mut den = BTreeMap::new();
        if k > 0 {
            den.insert(f, k);
        }
        RatFunc::new(num, den)
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn numer(&self) -> &MultiSeries {
        &self.num
    }

    pub fn denom(&self) -> &BTreeMap<LinFactor, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn to_poly(&self) -> Result<MultiSeries> {
        if self.den.is_empty() {
            Ok(self.num.clone())
        } else {
            Err(Error::NotDivisible(format!("denominator {:?} remains", self.den)))
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<LinFactor> = self.den.keys().cloned().collect();
        for f in keys {
            while self.den.get(&f).copied().unwrap_or(0) > 0 {
                match div_linear(&self.num, f) {
                    Some(q) => {
                        self.num = q;
                        let e = self.den.get_mut(&f).unwrap();
                        *e -= 1;
                        if *e == 0 {
                            self.den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    fn den_poly_extra(&self, target: &BTreeMap<LinFactor, u32>) -> MultiSeries {
        let ring = self.ring();
        let mut p = ring.one();
        for (f, &e) in target {
            let have = self.den.get(f).copied().unwrap_or(0);
            for _ in have..e {
                p = p.mul(&f.poly(ring));
            }
        }
        p
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            let x = den.entry(*f).or_insert(0);
            *x = (*x).max(e);
        }
        let a = self.num.mul(&self.den_poly_extra(&den));
        let b = other.num.mul(&other.den_poly_extra(&den));
        RatFunc::new(a.add(&b), den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            *den.entry(*f).or_insert(0) += e;
        }
        RatFunc::new(self.num.mul(&other.num), den)
    }

    pub fn mul_poly(&self, p: &MultiSeries) -> RatFunc {
        RatFunc::new(self.num.mul(p), self.den.clone())
    }

    /// Rename variables: variable k becomes perm[k].
    pub fn permute(&self, perm: &[usize]) -> RatFunc {
        let ring = self.ring();
        let mut num = ring.zero();
        for (m, c) in self.num.terms() {
            let mut mm: Mono = vec![0; m.len()];
            for (k, &e) in m.iter().enumerate() {
                mm[perm[k]] += e;
            }
            num.add_term(mm, c.clone());
        }
        let mut den = BTreeMap::new();
        let mut flip = false;
        for (f, &e) in &self.den {
            let (g, fl) = LinFactor::canonical(perm[f.i], perm[f.j], f.plus);
            if fl && e % 2 == 1 {
                flip = !flip;
            }
            *den.entry(g).or_insert(0) += e;
        }
        RatFunc::new(if flip { num.neg() } else { num }, den)
    }

    /// Partial derivative in ring variable index k.
    pub fn derive(&self, k: usize) -> RatFunc {
        let ring = self.ring();
        let name = ring.vars()[k].clone();
        let mut out = RatFunc::new(self.num.derive(&name).unwrap(), self.den.clone());
        for (f, &e) in &self.den {
            let d = if f.i == k {
                Q::one()
            } else if f.j == k {
                if f.plus {
                    Q::one()
                } else {
                    -Q::one()
                }
            } else {
                continue;
            };
            let mut den = self.den.clone();
            *den.get_mut(f).unwrap() += 1;
            let coeff = -d * Q::from_integer(e.into());
            out = out.add(&RatFunc::new(self.num.scale(&coeff), den));
        }
        out
    }
}

/// Truncated series in t with rational-function coefficients: coeffs[k] is the t^k coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    ring: Ring,
    coeffs: Vec<RatFunc>,
}

impl TSeries {
    pub fn zero(ring: &Ring, t_max: usize) -> TSeries {
        TSeries { ring: ring.clone(), coeffs: vec![RatFunc::zero(ring); t_max + 1] }
    }

    pub fn t_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeff(&self, k: usize) -> &RatFunc {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn set(&mut self, k: usize, r: RatFunc) {
        if k < self.coeffs.len() {
            self.coeffs[k] = r;
        }
    }

    pub fn from_coeffs(ring: &Ring, coeffs: Vec<RatFunc>) -> TSeries {
        TSeries { ring: ring.clone(), coeffs }
    }

    /// Split a polynomial in y's and t (t a variable of `f`) into a t-series over `ring`.
    pub fn from_series(f: &MultiSeries, t: &str, ring: &Ring, t_max: usize) -> Result<TSeries> {
        let mut out = TSeries::zero(ring, t_max);
        for k in 0..=t_max {
            let c = f.coeff_of(t, k as i32)?.restrict(ring);
            out.coeffs[k] = RatFunc::from_poly(c);
        }
        Ok(out)
    }

    pub fn constant(ring: &Ring, t_max: usize, r: RatFunc) -> TSeries {
        let mut s = TSeries::zero(ring, t_max);
        s.coeffs[0] = r;
        s
    }

    pub fn monomial(ring: &Ring, t_max: usize, k: usize, r: RatFunc) -> TSeries {
        let mut s = TSeries::zero(ring, t_max);
        s.set(k, r);
        s
    }

    pub fn add(&self, o: &TSeries) -> TSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        TSeries { ring: self.ring.clone(), coeffs: (0..n).map(|k| self.coeffs[k].add(&o.coeffs[k])).collect() }
    }

    pub fn sub(&self, o: &TSeries) -> TSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TSeries {
        self.map(|r| r.neg())
    }

    pub fn scale(&self, c: &Q) -> TSeries {
        self.map(|r| r.scale(c))
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> TSeries {
        TSeries { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &TSeries) -> TSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = TSeries::zero(&self.ring, n - 1);
        for a in 0..n {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..n - a {
                if o.coeffs[b].is_zero() {
                    continue;
                }
                out.coeffs[a + b] = out.coeffs[a + b].add(&self.coeffs[a].mul(&o.coeffs[b]));
            }
        }
        out
    }

    pub fn mul_poly(&self, p: &MultiSeries) -> TSeries {
        self.map(|r| r.mul_poly(p))
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: usize) -> TSeries {
        let mut out = TSeries::zero(&self.ring, self.t_max());
        for i in 0..self.coeffs.len() {
            if i + k < self.coeffs.len() {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// The operator E: keep even powers of t.
    pub fn even_t_part(&self) -> TSeries {
        let mut out = self.clone();
        for k in (1..out.coeffs.len()).step_by(2) {
            out.coeffs[k] = RatFunc::zero(&self.ring);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Symmetrize over all permutations of the given variable indices.
    pub fn symmetrize_vars(&self, idx: &[usize]) -> TSeries {
        let n = self.ring.nvars();
        let mut out = TSeries::zero(&self.ring, self.t_max());
        let perms = permutations(idx.len());
        for p in perms {
            let mut perm: Vec<usize> = (0..n).collect();
            for (a, &b) in p.iter().enumerate() {
                perm[idx[a]] = idx[b];
            }
            out = out.add(&self.map(|r| r.permute(&perm)));
        }
        out
    }

    /// sum_i y_i^k d/dy_i over the given variable indices.
    pub fn delta(&self, k: i32, idx: &[usize]) -> TSeries {
        let ring = self.ring.clone();
        self.map(|r| {
            let mut acc = RatFunc::zero(&ring);
            for &i in idx {
                let mut sh = vec![0; ring.nvars()];
                sh[i] = k;
                let d = r.derive(i);
                acc = acc.add(&d.mul_poly(&ring.monomial(&sh, Q::one())));
            }
            acc
        })
    }

    /// Power series (1 - c t)^(-a) for rational a, where c is a polynomial.
    pub fn binomial_power(ring: &Ring, t_max: usize, c: &MultiSeries, a: &Q) -> TSeries {
        let mut out = TSeries::zero(ring, t_max);
        let mut coef = Q::one();
        let mut cp = ring.one();
        for k in 0..=t_max {
            out.coeffs[k] = RatFunc::from_poly(cp.scale(&coef));
            coef = coef * (a + Q::from_integer((k as i64).into())) / Q::from_integer((k as i64 + 1).into());
            cp = cp.mul(c);
        }
        out
    }

    pub fn to_polys(&self) -> Result<Vec<MultiSeries>> {
        self.coeffs.iter().map(|c| c.to_poly()).collect()
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let items: Vec<u32> = (0..n as u32).collect();
    super::transforms::distinct_permutations(&items).into_iter().map(|p| p.into_iter().map(|x| x as usize).collect()).collect()
}

