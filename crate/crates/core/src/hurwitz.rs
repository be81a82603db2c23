//! Genus-0 (and small genus) single and double Hurwitz numbers.
//!
//! Numbers follow the normalization H_{a,b} = |Aut a| |Aut b| * (transitive tuples)/d!,
//! and H_a = |Aut a| * (transitive tuples)/d! for single numbers.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::combinat::{aut_size, factorial, ipow, partitions_of, qi, qpow, Partition, Q};
use crate::pseries::{qvar, MultiSeries, Ring, TruncProfile};
use crate::{Error, Result};

/// (d-2+l)! d^(l-3) prod a^a/a!
pub fn single_closed(alpha: &Partition) -> Result<Q> {
    if alpha.is_empty() {
        return Err(Error::Domain("single_closed needs a nonempty partition".into()));
    }
    let d = alpha.size() as i64;
    let l = alpha.len() as i64;
    let mut v = qi(factorial((d - 2 + l) as u64)) * qpow(&Q::from_integer(d.into()), l - 3);
    for &a in alpha.parts() {
        v *= Q::new(ipow(a as i64, a), factorial(a as u64));
    }
    Ok(v)
}

/// H^0_{(d),beta} = (l-1)! d^(l-2).
pub fn double_one_part_closed(beta: &Partition) -> Q {
    let d = beta.size() as i64;
    let l = beta.len() as i64;
    qi(factorial((l - 1) as u64)) * qpow(&Q::from_integer(d.into()), l - 2)
}

/// Conjugacy classes of S_d and the action of the transposition class sum.
pub struct ClassAlgebra {
    pub d: u32,
    pub classes: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// for each class, (target class, number of transpositions taking one element there)
    trans: Vec<Vec<(usize, u64)>>,
}

impl ClassAlgebra {
    pub fn new(d: u32) -> ClassAlgebra {
        let classes = partitions_of(d);
        let index: HashMap<Partition, usize> = classes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut trans = Vec::with_capacity(classes.len());
        for lam in &classes {
            let mut row: BTreeMap<usize, u64> = BTreeMap::new();
            let mult = lam.multiplicities();
            let sizes: Vec<u32> = mult.keys().copied().collect();
            // joins of two cycles
            for (ia, &a) in sizes.iter().enumerate() {
                for &b in &sizes[ia..] {
                    let pairs = if a == b {
                        let m = mult[&a] as u64;
                        m * (m.saturating_sub(1)) / 2
                    } else {
                        mult[&a] as u64 * mult[&b] as u64
                    };
                    if pairs == 0 {
                        continue;
                    }
                    let mut parts = remove_parts(lam, &[a, b]);
                    parts.push(a + b);
                    let mu = Partition::new(parts).unwrap();
                    *row.entry(index[&mu]).or_insert(0) += pairs * a as u64 * b as u64;
                }
            }
            // cuts of one cycle into (i, c-i)
            for &c in &sizes {
                for i in 1..=c / 2 {
                    let ways = if 2 * i == c { c as u64 / 2 } else { c as u64 };
                    let mut parts = remove_parts(lam, &[c]);
                    parts.push(i);
                    parts.push(c - i);
                    let mu = Partition::new(parts).unwrap();
                    *row.entry(index[&mu]).or_insert(0) += ways * mult[&c] as u64;
                }
            }
            trans.push(row.into_iter().collect());
        }
        ClassAlgebra { d, classes, index, trans }
    }

    pub fn class_index(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn class_size(&self, i: usize) -> BigInt {
        factorial(self.d as u64) / self.classes[i].z_lambda()
    }

    /// Tuple counts by class of the running product: entry [r][mu] counts
    /// (sigma_0, tau_1..tau_r) with sigma_0 in class alpha and tau_r...tau_1 sigma_0 in class mu.
    pub fn evolve(&self, alpha: &Partition, rmax: usize) -> Vec<Vec<BigInt>> {
        let n = self.classes.len();
        let mut v = vec![BigInt::zero(); n];
        let a = self.index[alpha];
        v[a] = self.class_size(a);
        let mut out = vec![v.clone()];
        for _ in 0..rmax {
            let mut w = vec![BigInt::zero(); n];
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for &(j, c) in &self.trans[i] {
                    w[j] += vi * c;
                }
            }
            v = w;
            out.push(v.clone());
        }
        out
    }
}

fn remove_parts(p: &Partition, rm: &[u32]) -> Vec<u32> {
    let mut parts = p.parts().to_vec();
    for r in rm {
        let pos = parts.iter().position(|x| x == r).expect("part present");
        parts.remove(pos);
    }
    parts
}

/// (1/d!) * #{(sigma_0, tau_1..tau_r, sigma_inf)} with possibly disconnected covers.
pub fn monodromy_disconnected(g: u32, alpha: &Partition, beta: Option<&Partition>) -> Result<Q> {
    let d = alpha.size();
    let beta_p = beta.cloned().unwrap_or_else(|| Partition::ones(d));
    if beta_p.size() != d {
        return Err(Error::Domain(format!("size mismatch: {alpha} vs {beta_p}")));
    }
    let r = match beta {
        Some(b) => crate::combinat::r_double(g, alpha, b),
        None => crate::combinat::r_single(g, alpha),
    };
    if r < 0 {
        return Ok(Q::zero());
    }
    Ok(disconnected_raw(alpha, &beta_p, r as usize))
}

fn disconnected_raw(alpha: &Partition, beta: &Partition, r: usize) -> Q {
    let d = alpha.size();
    if d == 0 {
        return if r == 0 { Q::one() } else { Q::zero() };
    }
    let ca = ClassAlgebra::new(d);
    let v = ca.evolve(alpha, r);
    Q::new(v[r][ca.index[beta]].clone(), factorial(d as u64))
}

/// Raw connected counts (transitive tuples / d!) for all alpha, beta of size <= dmax and r <= rmax.
pub struct ConnectedTable {
    pub dmax: u32,
    pub rmax: u32,
    data: HashMap<(Partition, Partition, u32), Q>,
}

impl ConnectedTable {
    pub fn build(dmax: u32, rmax: u32) -> ConnectedTable {
        // graded ring: s marks branch points (exponential), p_i / q_i mark cycles of sigma_0 / sigma_inf
        let mut vars = vec!["s".to_string()];
        vars.extend((1..=dmax).map(|i| format!("p{i}")));
        vars.extend((1..=dmax).map(|i| format!("q{i}")));
        let ring = Ring::new(&vars).cap_var("s", rmax as i64);
        let pi = |i: u32| i as usize;
        let qi_ = |i: u32| (dmax + i) as usize;
        let mut disc: Vec<MultiSeries> = vec![ring.one()];
        for d in 1..=dmax {
            let ca = ClassAlgebra::new(d);
            let dfact = factorial(d as u64);
            let mut s = ring.zero();
            for alpha in &ca.classes {
                let v = ca.evolve(alpha, rmax as usize);
                for (r, row) in v.iter().enumerate() {
                    for (bi, cnt) in row.iter().enumerate() {
                        if cnt.is_zero() {
                            continue;
                        }
                        let beta = &ca.classes[bi];
                        let mut m = vec![0; ring.nvars()];
                        m[0] = r as i32;
                        for &a in alpha.parts() {
                            m[pi(a)] += 1;
                        }
                        for &b in beta.parts() {
                            m[qi_(b)] += 1;
                        }
                        s.add_term(m, Q::new(cnt.clone(), &dfact * factorial(r as u64)));
                    }
                }
            }
            disc.push(s);
        }
        // D = exp(C) graded by degree: C_d = D_d - (1/d) sum_{k<d} k C_k D_{d-k}
        let mut conn: Vec<MultiSeries> = vec![ring.zero()];
        for d in 1..=dmax as usize {
            let mut c = disc[d].clone();
            for k in 1..d {
                let prod = conn[k].mul(&disc[d - k]);
                c = c.sub(&prod.scale(&Q::new((k as i64).into(), (d as i64).into())));
            }
            conn.push(c);
        }
        let mut data = HashMap::new();
        for (d, c) in conn.iter().enumerate().skip(1) {
            for (m, v) in c.terms() {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for i in 1..=dmax {
                    for _ in 0..m[pi(i)] {
                        a.push(i);
                    }
                    for _ in 0..m[qi_(i)] {
                        b.push(i);
                    }
                }
                let r = m[0] as u32;
                let alpha = Partition::new(a).unwrap();
                debug_assert_eq!(alpha.size() as usize, d);
                data.insert((alpha, Partition::new(b).unwrap(), r), v * qi(factorial(r as u64)));
            }
        }
        ConnectedTable { dmax, rmax, data }
    }

    pub fn raw(&self, alpha: &Partition, beta: &Partition, r: u32) -> Q {
        assert!(alpha.size() <= self.dmax && r <= self.rmax, "connected table too small");
        self.data.get(&(alpha.clone(), beta.clone(), r)).cloned().unwrap_or_else(Q::zero)
    }
}

static TABLE: OnceLock<Mutex<Option<Arc<ConnectedTable>>>> = OnceLock::new();

/// Shared connected table covering at least (dmax, rmax).
pub fn connected_table(dmax: u32, rmax: u32) -> Arc<ConnectedTable> {
    let lock = TABLE.get_or_init(|| Mutex::new(None));
    let mut guard = lock.lock().unwrap();
    if let Some(t) = guard.as_ref() {
        if t.dmax >= dmax && t.rmax >= rmax {
            return t.clone();
        }
    }
    let (d0, r0) = guard.as_ref().map(|t| (t.dmax, t.rmax)).unwrap_or((0, 0));
    let t = Arc::new(ConnectedTable::build(dmax.max(d0), rmax.max(r0)));
    *guard = Some(t.clone());
    t
}

/// Connected Hurwitz number from the monodromy oracle, in the normalization of this module.
pub fn connected_hurwitz(g: u32, alpha: &Partition, beta: Option<&Partition>) -> Result<Q> {
    let d = alpha.size();
    if d == 0 {
        return Err(Error::Domain("empty partition".into()));
    }
    let (beta_p, r, aut) = match beta {
        Some(b) => {
            if b.size() != d {
                return Err(Error::Domain(format!("size mismatch: {alpha} vs {b}")));
            }
            (b.clone(), crate::combinat::r_double(g, alpha, b), qi(aut_size(alpha) * aut_size(b)))
        }
        None => (Partition::ones(d), crate::combinat::r_single(g, alpha), qi(aut_size(alpha))),
    };
    if r < 0 {
        return Ok(Q::zero());
    }
    let t = connected_table(d, r as u32);
    Ok(t.raw(alpha, &beta_p, r as u32) * aut)
}

/// Genus-0 double Hurwitz number via the oracle.
pub fn double_h0(alpha: &Partition, beta: &Partition) -> Q {
    connected_hurwitz(0, alpha, Some(beta)).expect("valid sizes")
}

/// A way of computing Hurwitz numbers, selectable by name.
pub trait HurwitzStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn single(&self, alpha: &Partition) -> Result<Q>;
    fn double(&self, alpha: &Partition, beta: &Partition) -> Result<Q>;
}

pub struct ClosedForm;

impl HurwitzStrategy for ClosedForm {
    fn name(&self) -> &'static str {
        "closed"
    }

    fn single(&self, alpha: &Partition) -> Result<Q> {
        single_closed(alpha)
    }

    fn double(&self, alpha: &Partition, beta: &Partition) -> Result<Q> {
        if alpha.size() != beta.size() {
            return Err(Error::Domain(format!("size mismatch: {alpha} vs {beta}")));
        }
        if alpha.len() == 1 {
            Ok(double_one_part_closed(beta))
        } else if beta.len() == 1 {
            Ok(double_one_part_closed(alpha))
        } else if *beta == Partition::ones(beta.size()) {
            // trivial ramification at one end reduces to single numbers up to |Aut beta|
            Ok(single_closed(alpha)? * qi(factorial(beta.size() as u64)))
        } else {
            Err(Error::Domain("no closed form for this double Hurwitz number; use the monodromy oracle".into()))
        }
    }
}

pub struct Monodromy;

impl HurwitzStrategy for Monodromy {
    fn name(&self) -> &'static str {
        "monodromy"
    }

    fn single(&self, alpha: &Partition) -> Result<Q> {
        connected_hurwitz(0, alpha, None)
    }

    fn double(&self, alpha: &Partition, beta: &Partition) -> Result<Q> {
        connected_hurwitz(0, alpha, Some(beta))
    }
}

pub fn strategies() -> Vec<Box<dyn HurwitzStrategy>> {
    vec![Box::new(ClosedForm), Box::new(Monodromy)]
}

pub fn strategy(name: &str) -> Option<Box<dyn HurwitzStrategy>> {
    strategies().into_iter().find(|s| s.name() == name)
}

/// Single Hurwitz series sum z^|a| p_a/|Aut a| H_a / r_a! in the ring of `profile.zp_ring()`.
pub fn hurwitz_series_single(profile: &TruncProfile) -> MultiSeries {
    let ring = profile.zp_ring();
    let mut s = ring.zero();
    for d in 1..=profile.z_max.min(profile.n_max.max(profile.z_max)) {
        for alpha in partitions_of(d) {
            if alpha.parts()[0] > profile.n_max {
                continue;
            }
            let h = single_closed(&alpha).unwrap();
            let r = crate::combinat::r_single(0, &alpha) as u64;
            let mut m = vec![0; ring.nvars()];
            m[0] = d as i32;
            for &a in alpha.parts() {
                m[a as usize] += 1;
            }
            s.add_term(m, h / qi(aut_size(&alpha) * factorial(r)));
        }
    }
    s
}

/// Ring z, u, p_1..p_N, q_1..q_N (z and u capped as in the profile).
pub fn zupq_ring(profile: &TruncProfile) -> Ring {
    let mut vars = vec!["z".to_string(), "u".to_string()];
    vars.extend((1..=profile.n_max as usize).map(crate::pseries::pvar));
    vars.extend((1..=profile.n_max as usize).map(qvar));
    Ring::new(&vars)
        .cap_var("z", profile.z_max as i64)
        .cap_var("u", profile.u_max as i64)
        .cap_min("u", profile.u_min as i64)
}

/// Double series sum z^|b| p_a q_b u^l(b) H_{a,b}/(r! |Aut a| |Aut b|).
pub fn hurwitz_series_double(profile: &TruncProfile) -> MultiSeries {
    let ring = zupq_ring(profile);
    let n = profile.n_max;
    let dmax = profile.z_max;
    let t = connected_table(dmax, 2 * dmax);
    let mut s = ring.zero();
    for d in 1..=dmax {
        let ps: Vec<Partition> = partitions_of(d).into_iter().filter(|p| p.parts()[0] <= n).collect();
        for alpha in &ps {
            for beta in &ps {
                let r = crate::combinat::r_double(0, alpha, beta) as u32;
                let raw = t.raw(alpha, beta, r);
                if raw.is_zero() {
                    continue;
                }
                let mut m = vec![0; ring.nvars()];
                m[0] = d as i32;
                m[1] = beta.len() as i32;
                for &a in alpha.parts() {
                    m[1 + a as usize] += 1;
                }
                for &b in beta.parts() {
                    m[1 + n as usize + b as usize] += 1;
                }
                s.add_term(m, raw / qi(factorial(r as u64)));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{q, qf};

    fn p(v: &[u32]) -> Partition {
        Partition::from_slice(v)
    }

    #[test]
    fn closed_examples() {
        assert_eq!(single_closed(&p(&[1])).unwrap(), q(1));
        assert_eq!(single_closed(&p(&[2])).unwrap(), qf(1, 2));
        assert_eq!(single_closed(&p(&[2, 1])).unwrap(), q(4));
    }

    #[test]
    fn disconnected_examples() {
        assert_eq!(monodromy_disconnected(0, &p(&[2]), None).unwrap(), qf(1, 2));
        assert_eq!(monodromy_disconnected(0, &p(&[1, 1]), None).unwrap(), qf(1, 2));
        for j in 1..6 {
            let a = Partition::one_part(j);
            assert_eq!(monodromy_disconnected(0, &a, Some(&a)).unwrap(), qf(1, j as i64));
        }
    }

    #[test]
    fn connected_examples() {
        assert_eq!(connected_hurwitz(0, &p(&[1, 1]), None).unwrap(), q(1));
        // raw transitive count is 1/2; with |Aut (1,1)| = 2 the normalized value is 1
        assert_eq!(connected_hurwitz(0, &p(&[2]), Some(&p(&[1, 1]))).unwrap(), q(1));
        assert_eq!(connected_hurwitz(0, &p(&[2, 1]), Some(&p(&[2, 1]))).unwrap(), q(4));
        for j in 1..6 {
            let a = Partition::one_part(j);
            assert_eq!(connected_hurwitz(0, &a, Some(&a)).unwrap(), qf(1, j as i64));
        }
    }

    #[test]
    fn one_part_double_closed_matches_oracle() {
        for d in 1..=6 {
            for beta in partitions_of(d) {
                assert_eq!(double_h0(&Partition::one_part(d), &beta), double_one_part_closed(&beta), "{beta}");
            }
        }
    }

    #[test]
    fn series_examples() {
        let prof = TruncProfile::default();
        let h = hurwitz_series_single(&prof);
        assert_eq!(h.coeff_named(&[("z", 1), ("p1", 1)]), q(1));
        assert_eq!(h.coeff_named(&[("z", 2), ("p2", 1)]), qf(1, 2));
        let small = TruncProfile { z_max: 3, n_max: 3, ..Default::default() };
        let hd = hurwitz_series_double(&small);
        assert_eq!(hd.coeff_named(&[("z", 1), ("p1", 1), ("q1", 1), ("u", 1)]), q(1));
    }

    #[test]
    fn registry() {
        let names: Vec<&str> = strategies().iter().map(|s| s.name()).collect();
        assert_eq!(names, vec!["closed", "monodromy"]);
        assert!(strategy("monodromy").is_some());
        assert!(strategy("nope").is_none());
    }
}
