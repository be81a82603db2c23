//! Truncated multivariate power series over exact rationals.
//!
//! A [`Ring`] fixes the variable names and a list of linear truncation caps
//! `sum_i w_i e_i <= max`. Products are truncated by dropping monomials that
//! violate any cap; for caps with nonnegative weights on series with
//! nonnegative exponents this equals truncating the exact product.

mod ops;
pub mod ratfunc;
mod transforms;

pub use ops::*;
pub use ratfunc::{LinFactor, RatFunc, TSeries};
pub use transforms::*;

use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::combinat::{q_to_string, Q};
use crate::{Error, Result};

pub type Mono = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cap {
    pub weights: Vec<i32>,
    pub max: i64,
}

impl Cap {
    fn degree(&self, m: &[i32]) -> i64 {
        self.weights.iter().zip(m).map(|(&w, &e)| w as i64 * e as i64).sum()
    }

    fn nonneg(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct RingInner {
    vars: Vec<String>,
    caps: Vec<Cap>,
}

/// Variable set plus truncation caps. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring(Arc<RingInner>);

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Ring {
        Ring(Arc::new(RingInner { vars: vars.iter().map(|s| s.as_ref().to_string()).collect(), caps: vec![] }))
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn caps(&self) -> &[Cap] {
        &self.0.caps
    }

    pub fn idx(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.idx(name).ok_or_else(|| Error::Vars(format!("unknown variable {name}")))
    }

    fn with_cap(&self, cap: Cap) -> Ring {
        let mut caps = self.0.caps.clone();
        if !caps.contains(&cap) {
            caps.push(cap);
        }
        Ring(Arc::new(RingInner { vars: self.0.vars.clone(), caps }))
    }

    /// Cap `sum w * e(var) <= max`.
    pub fn cap_weighted(&self, weights: &[(&str, i32)], max: i64) -> Ring {
        let mut w = vec![0; self.nvars()];
        for (name, wt) in weights {
            let i = self.idx(name).unwrap_or_else(|| panic!("unknown variable {name}"));
            w[i] = *wt;
        }
        self.with_cap(Cap { weights: w, max })
    }

    pub fn cap_var(&self, name: &str, max: i64) -> Ring {
        self.cap_weighted(&[(name, 1)], max)
    }

    /// Lower bound on the exponent of `name` (used for the Laurent variable u).
    pub fn cap_min(&self, name: &str, min: i64) -> Ring {
        self.cap_weighted(&[(name, -1)], -min)
    }

    pub fn without_caps(&self) -> Ring {
        Ring::new(&self.0.vars)
    }

    pub fn admits(&self, m: &[i32]) -> bool {
        self.0.caps.iter().all(|c| c.degree(m) <= c.max)
    }

    pub fn zero(&self) -> MultiSeries {
        MultiSeries { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(&self, c: Q) -> MultiSeries {
        self.monomial(&vec![0; self.nvars()], c)
    }

    pub fn one(&self) -> MultiSeries {
        self.constant(Q::one())
    }

    pub fn monomial(&self, m: &[i32], c: Q) -> MultiSeries {
        let mut s = self.zero();
        s.add_term(m.to_vec(), c);
        s
    }

    /// Monomial from named exponents, e.g. `[("z", 2), ("p2", 1)]`.
    pub fn mono_named(&self, exps: &[(&str, i32)], c: Q) -> MultiSeries {
        let m = self.mono_vec(exps);
        self.monomial(&m, c)
    }

    pub fn mono_vec(&self, exps: &[(&str, i32)]) -> Mono {
        let mut m = vec![0; self.nvars()];
        for (name, e) in exps {
            let i = self.idx(name).unwrap_or_else(|| panic!("unknown variable {name}"));
            m[i] += *e;
        }
        m
    }

    pub fn var(&self, name: &str) -> MultiSeries {
        self.mono_named(&[(name, 1)], Q::one())
    }
}

/// Truncated power series; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries {
    ring: Ring,
    terms: BTreeMap<Mono, Q>,
}

impl MultiSeries {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Mono, Q)>) -> MultiSeries {
        let mut s = ring.zero();
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        debug_assert_eq!(m.len(), self.ring.nvars());
        if c.is_zero() || !self.ring.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &[i32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff_named(&self, exps: &[(&str, i32)]) -> Q {
        self.coeff(&self.ring.mono_vec(exps))
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    fn check_ring(&self, other: &MultiSeries) -> Result<Ring> {
        if self.ring == other.ring {
            return Ok(self.ring.clone());
        }
        if self.ring.vars() != other.ring.vars() {
            return Err(Error::Vars(format!("{:?} vs {:?}", self.ring.vars(), other.ring.vars())));
        }
        let mut r = self.ring.clone();
        for c in other.ring.caps() {
            r = r.with_cap(c.clone());
        }
        Ok(r)
    }

    pub fn try_add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        let ring = self.check_ring(other)?;
        let mut out = if ring == self.ring { self.clone() } else { self.rehome(&ring) };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.try_add(&other.neg())
    }

    pub fn add(&self, other: &MultiSeries) -> MultiSeries {
        self.try_add(other).expect("compatible rings")
    }

    pub fn sub(&self, other: &MultiSeries) -> MultiSeries {
        self.try_sub(other).expect("compatible rings")
    }

    pub fn add_assign(&mut self, other: &MultiSeries) {
        debug_assert_eq!(self.ring.vars(), other.ring.vars());
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// self += c * mono * other
    pub fn add_scaled_shifted(&mut self, other: &MultiSeries, c: &Q, shift: &[i32]) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            let mm: Mono = m.iter().zip(shift).map(|(a, b)| a + b).collect();
            self.add_term(mm, v * c);
        }
    }

    pub fn neg(&self) -> MultiSeries {
        MultiSeries { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> MultiSeries {
        if c.is_zero() {
            return self.ring.zero();
        }
        MultiSeries { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_mono(&self, shift: &[i32], c: &Q) -> MultiSeries {
        let mut out = self.ring.zero();
        out.add_scaled_shifted(self, c, shift);
        out
    }

    pub fn try_mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        let ring = self.check_ring(other)?;
        Ok(mul_in(&ring, self, other))
    }

    pub fn mul(&self, other: &MultiSeries) -> MultiSeries {
        self.try_mul(other).expect("compatible rings")
    }

    pub fn pow(&self, k: u32) -> MultiSeries {
        let mut r = self.ring.one();
        let mut b = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Re-express in a ring with the same variables, dropping terms the new caps exclude.
    pub fn rehome(&self, ring: &Ring) -> MultiSeries {
        assert_eq!(ring.vars(), self.ring.vars(), "rehome needs identical variables");
        MultiSeries::from_terms(ring, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Embed into a ring whose variable set contains ours (by name).
    pub fn embed(&self, ring: &Ring) -> Result<MultiSeries> {
        let map: Vec<usize> = self.ring.vars().iter().map(|v| ring.index(v)).collect::<Result<_>>()?;
        let mut out = ring.zero();
        for (m, c) in &self.terms {
            let mut mm = vec![0; ring.nvars()];
            for (i, &e) in m.iter().enumerate() {
                mm[map[i]] += e;
            }
            out.add_term(mm, c.clone());
        }
        Ok(out)
    }

    /// Project onto a ring of a subset of variables; dropped variables must have exponent 0
    /// (terms with nonzero exponents in dropped variables are discarded).
    pub fn restrict(&self, ring: &Ring) -> MultiSeries {
        let map: Vec<Option<usize>> = self.ring.vars().iter().map(|v| ring.idx(v)).collect();
        let mut out = ring.zero();
        'terms: for (m, c) in &self.terms {
            let mut mm = vec![0; ring.nvars()];
            for (i, &e) in m.iter().enumerate() {
                match map[i] {
                    Some(j) => mm[j] = e,
                    None if e != 0 => continue 'terms,
                    None => {}
                }
            }
            out.add_term(mm, c.clone());
        }
        out
    }

    pub fn derive(&self, name: &str) -> Result<MultiSeries> {
        let i = self.ring.index(name)?;
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            if m[i] != 0 {
                let mut mm = m.clone();
                let e = mm[i];
                mm[i] -= 1;
                out.add_term(mm, c * Q::from_integer(e.into()));
            }
        }
        Ok(out)
    }

    /// var * d/dvar
    pub fn euler(&self, name: &str) -> Result<MultiSeries> {
        let i = self.ring.index(name)?;
        Ok(self.map_coeffs(|m, c| c * Q::from_integer(m[i].into())))
    }

    pub fn map_coeffs(&self, f: impl Fn(&[i32], &Q) -> Q) -> MultiSeries {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }

    pub fn filter(&self, f: impl Fn(&[i32]) -> bool) -> MultiSeries {
        MultiSeries {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| f(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Coefficient of var^e as a series in the same ring (var exponent set to 0).
    pub fn coeff_of(&self, name: &str, e: i32) -> Result<MultiSeries> {
        let i = self.ring.index(name)?;
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            if m[i] == e {
                let mut mm = m.clone();
                mm[i] = 0;
                out.add_term(mm, c.clone());
            }
        }
        Ok(out)
    }

    pub fn min_exp(&self, name: &str) -> Option<i32> {
        let i = self.ring.idx(name)?;
        self.terms.keys().map(|m| m[i]).min()
    }

    pub fn max_exp(&self, name: &str) -> Option<i32> {
        let i = self.ring.idx(name)?;
        self.terms.keys().map(|m| m[i]).max()
    }

    /// exp(f) for f with zero constant term; requires f nilpotent under the caps.
    pub fn exp(&self) -> Result<MultiSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp needs zero constant term".into()));
        }
        let mut out = self.ring.one();
        let mut term = self.ring.one();
        for k in 1..=MAX_NILPOTENT {
            term = term.mul(self).scale(&Q::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                return Ok(out);
            }
            out.add_assign(&term);
        }
        Err(Error::Truncation("exp: argument is not nilpotent under the caps".into()))
    }

    /// log(1 + f) for f with zero constant term.
    pub fn log1p(&self) -> Result<MultiSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("log1p needs zero constant term".into()));
        }
        let mut out = self.ring.zero();
        let mut pw = self.ring.one();
        for k in 1..=MAX_NILPOTENT {
            pw = pw.mul(self);
            if pw.is_zero() {
                return Ok(out);
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out.add_assign(&pw.scale(&Q::new(sign.into(), (k as i64).into())));
        }
        Err(Error::Truncation("log1p: argument is not nilpotent under the caps".into()))
    }

    /// 1/f for f with invertible constant term and nilpotent remainder.
    pub fn inv(&self) -> Result<MultiSeries> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Domain("inverse needs nonzero constant term".into()));
        }
        let ci = c.recip();
        let rest = self.sub(&self.ring.constant(c)).scale(&-ci.clone());
        let mut out = self.ring.one();
        let mut pw = self.ring.one();
        for _ in 1..=MAX_NILPOTENT {
            pw = pw.mul(&rest);
            if pw.is_zero() {
                return Ok(out.scale(&ci));
            }
            out.add_assign(&pw);
        }
        Err(Error::Truncation("inverse: remainder is not nilpotent under the caps".into()))
    }

    /// Sum of the given exponents (by variable name) for each term: max over terms.
    pub fn max_weighted(&self, weights: &[(&str, i32)]) -> Option<i64> {
        let w: Vec<(usize, i32)> = weights.iter().filter_map(|(n, w)| self.ring.idx(n).map(|i| (i, *w))).collect();
        self.terms.keys().map(|m| w.iter().map(|&(i, wt)| wt as i64 * m[i] as i64).sum()).max()
    }

    /// Stable JSON: list of {exponents, num, den} in graded-lexicographic order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut ts: Vec<(&Mono, &Q)> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            let da: i64 = a.0.iter().map(|&e| e as i64).sum();
            let db: i64 = b.0.iter().map(|&e| e as i64).sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        let arr: Vec<serde_json::Value> = ts
            .into_iter()
            .map(|(m, c)| {
                let mut ex = serde_json::Map::new();
                for (i, &e) in m.iter().enumerate() {
                    if e != 0 {
                        ex.insert(self.ring.vars()[i].clone(), e.into());
                    }
                }
                serde_json::json!({"exponents": ex, "num": c.numer().to_string(), "den": c.denom().to_string()})
            })
            .collect();
        serde_json::Value::Array(arr)
    }
}

pub(crate) const MAX_NILPOTENT: usize = 4096;

/// Truncated product into `ring`.
pub(crate) fn mul_in(ring: &Ring, a: &MultiSeries, b: &MultiSeries) -> MultiSeries {
    if a.is_zero() || b.is_zero() {
        return ring.zero();
    }
    let caps = ring.caps();
    let n = ring.nvars();
    fn degs<'a>(caps: &[Cap], s: &'a MultiSeries) -> Vec<(Vec<i64>, &'a Mono, &'a Q)> {
        s.terms.iter().map(|(m, c)| (caps.iter().map(|cap| cap.degree(m)).collect(), m, c)).collect()
    }
    let da = degs(caps, a);
    let mut db = degs(caps, b);
    // sort b by the first nonnegative cap so the inner loop can stop early
    let key = caps.iter().position(|c| c.nonneg());
    if let Some(k) = key {
        db.sort_by_key(|t| t.0[k]);
    }
    let mut acc: HashMap<Mono, Q> = HashMap::new();
    for (dx, mx, cx) in &da {
        for (dy, my, cy) in &db {
            if let Some(k) = key {
                if dx[k] + dy[k] > caps[k].max {
                    break;
                }
            }
            if caps.iter().enumerate().any(|(i, c)| dx[i] + dy[i] > c.max) {
                continue;
            }
            let mut m = Vec::with_capacity(n);
            for i in 0..n {
                m.push(mx[i] + my[i]);
            }
            let p = *cx * *cy;
            match acc.get_mut(&m) {
                Some(v) => *v += p,
                None => {
                    acc.insert(m, p);
                }
            }
        }
    }
    MultiSeries { ring: ring.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", q_to_string(c))?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.ring.vars()[i])?,
                    _ => write!(f, "*{}^{}", self.ring.vars()[i], e)?,
                }
            }
        }
        Ok(())
    }
}

/// User-facing truncation profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncProfile {
    pub z_max: u32,
    /// Largest index of p_i and q_i.
    pub n_max: u32,
    pub u_min: i32,
    pub u_max: i32,
    /// Per-variable degree bound for x_i / y_i.
    pub xy_max: u32,
    pub t_max: u32,
    /// Largest number of p factors kept in the localization series.
    pub p_len_max: u32,
}

impl Default for TruncProfile {
    fn default() -> Self {
        TruncProfile { z_max: 6, n_max: 6, u_min: -12, u_max: 12, xy_max: 40, t_max: 8, p_len_max: 3 }
    }
}

impl TruncProfile {
    pub fn validate(&self) -> Result<()> {
        if self.u_min > self.u_max {
            return Err(Error::Domain("empty u window".into()));
        }
        if self.u_min < -2 * self.z_max as i32 - 2 && self.u_min < -12 {
            return Err(Error::Domain("u_min below -2*z_max".into()));
        }
        Ok(())
    }

    /// Ring in z, u, p_1..p_N with z <= z_max and u inside the window.
    pub fn zup_ring(&self) -> Ring {
        let mut vars = vec!["z".to_string(), "u".to_string()];
        vars.extend((1..=self.n_max).map(|i| format!("p{i}")));
        Ring::new(&vars).cap_var("z", self.z_max as i64).cap_var("u", self.u_max as i64).cap_min("u", self.u_min as i64)
    }

    /// Ring in z, p_1..p_N with z <= z_max.
    pub fn zp_ring(&self) -> Ring {
        let mut vars = vec!["z".to_string()];
        vars.extend((1..=self.n_max).map(|i| format!("p{i}")));
        Ring::new(&vars).cap_var("z", self.z_max as i64)
    }

    /// Ring in x_1..x_m (each capped) plus extra uncapped variables.
    pub fn x_ring(&self, prefix: &str, m: usize, extra: &[&str]) -> Ring {
        let mut vars: Vec<String> = (1..=m).map(|i| format!("{prefix}{i}")).collect();
        vars.extend(extra.iter().map(|s| s.to_string()));
        let mut r = Ring::new(&vars);
        for i in 1..=m {
            r = r.cap_var(&format!("{prefix}{i}"), self.xy_max as i64);
        }
        r
    }
}

pub fn pvar(i: usize) -> String {
    format!("p{i}")
}

pub fn qvar(i: usize) -> String {
    format!("q{i}")
}

pub fn xvar(i: usize) -> String {
    format!("x{i}")
}

pub fn yvar(i: usize) -> String {
    format!("y{i}")
}
