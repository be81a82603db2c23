//! Localization side: the tree series f_j, g_j, xi^(i), zeta^g, the predicted
//! Faber-Hurwitz numbers as linear forms in Faber symbols, tree enumeration, and
//! the symmetrized series.

pub mod appendix;
pub mod symmetrized;
pub mod trees;

pub use trees::{enumerate_trees, tree_sum, LocTree};

use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

use crate::combinat::{aut_size, binomial, factorial, ipow, partitions_of, qi, r_fab, r_single, Partition, Q};
use crate::faber::{keys_for, FaberKey, SymbolLinear};
use crate::hurwitz::{connected_table, single_closed};
use crate::pseries::{omega_const, pvar, solve_fixed_point, Mono, MultiSeries, Ring, TruncProfile};
use crate::{Error, Result};

/// Ring z, u, p_1..p_D with z <= D, at most L p-factors, u >= u_min and u + 2 (p-length) <= u_max + 2L.
pub fn loc_ring(profile: &TruncProfile) -> Ring {
    let d = profile.z_max as usize;
    let l = profile.p_len_max as i64;
    let mut vars = vec!["z".to_string(), "u".to_string()];
    vars.extend((1..=d).map(pvar));
    let mut r = Ring::new(&vars).cap_var("z", d as i64).cap_min("u", profile.u_min as i64);
    let plen: Vec<(String, i32)> = (1..=d).map(|i| (pvar(i), 1)).collect();
    let w: Vec<(&str, i32)> = plen.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    r = r.cap_weighted(&w, l);
    let mut wu = w.iter().map(|(n, _)| (*n, 2)).collect::<Vec<_>>();
    wu.push(("u", 1));
    r.cap_weighted(&wu, profile.u_max as i64 + 2 * l)
}

fn p_len(m: &[i32]) -> i32 {
    m[2..].iter().sum()
}

/// Multiplicity vectors over indices 1..=n (index 0 unused) of total size <= s.
fn multisets_upto(n: usize, s: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n + 1]];
    let mut frontier = out.clone();
    for _ in 0..s {
        let mut next = Vec::new();
        for v in &frontier {
            let last = (1..=n).rev().find(|&i| v[i] > 0).unwrap_or(1);
            for i in last..=n {
                let mut w = v.clone();
                w[i] += 1;
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Solved tree series.
#[derive(Clone, Debug)]
pub struct TreeSeries {
    pub ring: Ring,
    pub profile: TruncProfile,
    /// f[j-1] = f_j
    pub f: Vec<MultiSeries>,
    /// g[j-1] = g_j
    pub g: Vec<MultiSeries>,
}

struct TaylorTerm {
    alpha_mono: Mono,
    k: Vec<u32>,
    /// coefficient as a Laurent polynomial in u: exponent -> value
    coef: BTreeMap<i32, Q>,
}

/// Solve f_j = u^-2 (j d/dq_j H)|_{q=g}, g_j = (j d/dq_j H^(1;q))|_{q=f}.
pub fn solve_tree_series(profile: &TruncProfile) -> Result<TreeSeries> {
    let ring = loc_ring(profile);
    let dmax = profile.z_max as usize;
    let lmax = profile.p_len_max as usize;
    let table = connected_table(dmax as u32, 2 * dmax as u32);
    let omega: Vec<Q> = (0..=dmax).map(|k| if k == 0 { Q::zero() } else { omega_const(k) }).collect();

    // expansion of (j d/dq_j H_alpha)(Omega + delta) in delta, for each j
    let mut taylor: Vec<Vec<TaylorTerm>> = (0..=dmax).map(|_| Vec::new()).collect();
    for d in 1..=dmax {
        let ps = partitions_of(d as u32);
        for alpha in ps.iter().filter(|a| a.len() <= lmax) {
            let mut am = vec![0; ring.nvars()];
            am[0] = d as i32;
            for &a in alpha.parts() {
                am[1 + a as usize] += 1;
            }
            let ks = multisets_upto(dmax, lmax - alpha.len());
            for j in 1..=d {
                let mut per_k: Vec<BTreeMap<i32, Q>> = vec![BTreeMap::new(); ks.len()];
                for beta in &ps {
                    let bm = beta.mult_vec();
                    if bm.get(j).copied().unwrap_or(0) == 0 {
                        continue;
                    }
                    let r = crate::combinat::r_double(0, alpha, beta) as u32;
                    let c = table.raw(alpha, beta, r) / qi(factorial(r as u64));
                    if c.is_zero() {
                        continue;
                    }
                    let base = &c * Q::from_integer((j as i64 * bm[j] as i64).into());
                    let mut gam = bm.clone();
                    gam[j] -= 1;
                    let ue = beta.len() as i32 - 2;
                    for (ki, k) in ks.iter().enumerate() {
                        let mut v = base.clone();
                        let mut ok = true;
                        for i in 1..=dmax {
                            let gi = gam.get(i).copied().unwrap_or(0);
                            let kk = k[i];
                            if kk > gi {
                                ok = false;
                                break;
                            }
                            if kk > 0 {
                                v *= qi(binomial(gi as i64, kk as i64));
                            }
                            let rest = gi - kk;
                            if rest > 0 {
                                v *= num_traits::pow(omega[i].clone(), rest as usize);
                            }
                        }
                        if ok && !v.is_zero() {
                            *per_k[ki].entry(ue).or_insert_with(Q::zero) += v;
                        }
                    }
                }
                for (ki, coef) in per_k.into_iter().enumerate() {
                    let coef: BTreeMap<i32, Q> = coef.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                    if !coef.is_empty() {
                        taylor[j].push(TaylorTerm { alpha_mono: am.clone(), k: ks[ki].clone(), coef });
                    }
                }
            }
        }
    }

    // g_j coefficients: sum over gamma = {j} + delta of j m_j(gamma)/|Aut gamma| H_gamma / r! * f^delta
    let deltas: Vec<Vec<u32>> = multisets_upto(dmax, lmax);
    let mut gcoef: Vec<Vec<(usize, Q)>> = vec![Vec::new(); dmax + 1];
    for j in 1..=dmax {
        for (di, dm) in deltas.iter().enumerate() {
            let w: usize = (1..=dmax).map(|i| i * dm[i] as usize).sum();
            if w > dmax {
                continue;
            }
            let mut gm = dm.clone();
            gm[j] += 1;
            let gamma = Partition::from_mult_vec(&gm);
            let h = single_closed(&gamma)?;
            let r = r_single(0, &gamma) as u64;
            let c = Q::from_integer((j as i64 * gm[j] as i64).into()) * h / qi(aut_size(&gamma) * factorial(r));
            gcoef[j].push((di, c));
        }
    }

    let nvars = ring.nvars();
    let ui = 1;
    let step = |state: &[MultiSeries]| -> Result<Vec<MultiSeries>> {
        let f = &state[..dmax];
        let g = &state[dmax..];
        // powers f^delta
        let mut fprod: Vec<MultiSeries> = Vec::with_capacity(deltas.len());
        for dm in &deltas {
            let mut p = ring.one();
            for i in 1..=dmax {
                for _ in 0..dm[i] {
                    p = p.mul(&f[i - 1]);
                }
            }
            fprod.push(p);
        }
        let mut gnew = Vec::with_capacity(dmax);
        for j in 1..=dmax {
            let mut s = ring.zero();
            for (di, c) in &gcoef[j] {
                s.add_scaled_shifted(&fprod[*di], c, &vec![0; nvars]);
            }
            gnew.push(s);
        }
        // delta_k = g_k - Omega_k, and products delta^K
        let delta: Vec<MultiSeries> = (1..=dmax).map(|k| g[k - 1].sub(&ring.constant(omega[k].clone()))).collect();
        let mut dprod: HashMap<Vec<u32>, MultiSeries> = HashMap::new();
        let mut fnew = Vec::with_capacity(dmax);
        for j in 1..=dmax {
            let mut s = ring.zero();
            for t in &taylor[j] {
                let dp = match dprod.get(&t.k) {
                    Some(p) => p.clone(),
                    None => {
                        let mut p = ring.one();
                        for i in 1..=dmax {
                            for _ in 0..t.k[i] {
                                p = p.mul(&delta[i - 1]);
                            }
                        }
                        dprod.insert(t.k.clone(), p.clone());
                        p
                    }
                };
                for (e, c) in &t.coef {
                    let mut sh = t.alpha_mono.clone();
                    sh[ui] += e;
                    s.add_scaled_shifted(&dp, c, &sh);
                }
            }
            fnew.push(s);
        }
        let mut out = fnew;
        out.extend(gnew);
        Ok(out)
    };
    let init = vec![ring.zero(); 2 * dmax];
    let sol = solve_fixed_point(init, step, 4 * dmax + 8)?;
    let ts = TreeSeries { ring: ring.clone(), profile: profile.clone(), f: sol[..dmax].to_vec(), g: sol[dmax..].to_vec() };
    ts.check_u_bound()?;
    Ok(ts)
}

impl TreeSeries {
    /// The truncation is exact only if every term has u + 2 (p-length) >= 0.
    fn check_u_bound(&self) -> Result<()> {
        for s in self.f.iter().chain(self.g.iter()) {
            for m in s.terms().keys() {
                if m[1] + 2 * p_len(m) < 0 || m[1] <= self.profile.u_min {
                    return Err(Error::Truncation(format!("u exponent {} at p-length {} escapes the window", m[1], p_len(m))));
                }
            }
        }
        Ok(())
    }

    pub fn f(&self, j: usize) -> &MultiSeries {
        &self.f[j - 1]
    }

    pub fn g(&self, j: usize) -> &MultiSeries {
        &self.g[j - 1]
    }

    /// xi^(i) = sum_j j^(j+i)/j! f_j
    pub fn xi(&self, i: u32) -> MultiSeries {
        let mut s = self.ring.zero();
        let zero = vec![0; self.ring.nvars()];
        for j in 1..=self.f.len() {
            let c = Q::new(ipow(j as i64, j as u32 + i), factorial(j as u64));
            s.add_scaled_shifted(&self.f[j - 1], &c, &zero);
        }
        s
    }

    /// zeta^g as a map from symbol to the series multiplying it.
    pub fn zeta(&self, g: u32) -> SymbolSeries {
        let lmax = self.profile.p_len_max as usize;
        let mut xi_cache: HashMap<u32, MultiSeries> = HashMap::new();
        let mut parts = BTreeMap::new();
        for n in 1..=lmax {
            for key in keys_for(g, n) {
                let mut prod = self.ring.one();
                for &a in &key.a {
                    let x = xi_cache.entry(a).or_insert_with(|| self.xi(a)).clone();
                    prod = prod.mul(&x);
                }
                let mut mult: BTreeMap<u32, u64> = BTreeMap::new();
                for &a in &key.a {
                    *mult.entry(a).or_insert(0) += 1;
                }
                let den: num_bigint::BigInt = mult.values().map(|&m| factorial(m)).product();
                let sign = if key.k % 2 == 1 { -Q::one() } else { Q::one() };
                let s = prod.scale(&(sign / qi(den)));
                if !s.is_zero() {
                    parts.insert(key, s);
                }
            }
        }
        SymbolSeries { ring: self.ring.clone(), parts }
    }

    /// Predicted F^g_alpha, for every alpha within the profile, as linear forms in the symbols.
    pub fn predicted_fh(&self, g: u32) -> Result<BTreeMap<Partition, SymbolLinear>> {
        if g == 0 {
            return Err(Error::Domain("genus must be positive".into()));
        }
        let top = 2 * g as i32 - 1;
        if self.profile.u_max < top - 1 {
            return Err(Error::Truncation(format!("u window must reach {} for genus {g}", top - 1)));
        }
        let zeta = self.zeta(g);
        let norm0 = qi(factorial(g as u64 - 1)) / qi(ipow(2, g));
        let mut out: BTreeMap<Partition, SymbolLinear> = BTreeMap::new();
        for (key, s) in &zeta.parts {
            for (m, c) in s.terms() {
                let alpha = mono_partition(m);
                let l = alpha.len() as i32;
                let d = m[0] as i64;
                let e = m[1] + l;
                let k = top - e;
                if k < 0 {
                    continue;
                }
                let sign = if e.rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
                let b = qi(binomial(d + l as i64 - 1 + k as i64, k as i64));
                let norm = &norm0 * qi(factorial(r_fab(&alpha) as u64) * aut_size(&alpha));
                out.entry(alpha).or_default().add_term(key.clone(), c * sign * b * norm);
            }
        }
        Ok(out)
    }
}

/// Partition read off the p-exponents of a monomial in the loc ring.
pub fn mono_partition(m: &[i32]) -> Partition {
    let mut parts = Vec::new();
    for (i, &e) in m[2..].iter().enumerate() {
        for _ in 0..e {
            parts.push(i as u32 + 1);
        }
    }
    Partition::new(parts).unwrap()
}

/// A series whose coefficients are linear forms in Faber symbols, stored per symbol.
#[derive(Clone, Debug)]
pub struct SymbolSeries {
    pub ring: Ring,
    pub parts: BTreeMap<FaberKey, MultiSeries>,
}

impl SymbolSeries {
    pub fn coeff(&self, m: &[i32]) -> SymbolLinear {
        let mut out = SymbolLinear::default();
        for (k, s) in &self.parts {
            out.add_term(k.clone(), s.coeff(m));
        }
        out
    }

    /// Terms in graded order, each with the linear form as a JSON map.
    pub fn to_json(&self) -> serde_json::Value {
        let mut monos: Vec<Mono> = self.parts.values().flat_map(|s| s.terms().keys().cloned()).collect();
        monos.sort_by(|a, b| {
            let da: i64 = a.iter().map(|&e| e as i64).sum();
            let db: i64 = b.iter().map(|&e| e as i64).sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        monos.dedup();
        let arr: Vec<serde_json::Value> = monos
            .iter()
            .map(|m| {
                let mut ex = serde_json::Map::new();
                for (i, &e) in m.iter().enumerate() {
                    if e != 0 {
                        ex.insert(self.ring.vars()[i].clone(), e.into());
                    }
                }
                serde_json::json!({"exponents": ex, "coefficient": self.coeff(m).to_json()})
            })
            .collect();
        serde_json::Value::Array(arr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::q;

    fn small() -> TruncProfile {
        TruncProfile { z_max: 4, n_max: 4, p_len_max: 2, u_min: -8, u_max: 6, ..Default::default() }
    }

    #[test]
    fn lowest_terms() {
        let ts = solve_tree_series(&small()).unwrap();
        let r = &ts.ring;
        assert_eq!(ts.f(1).coeff(&r.mono_vec(&[("z", 1), ("p1", 1), ("u", -1)])), q(1));
        // only gamma = (1,1) contributes: 2 * (1/2) * H_(1,1) / 2!
        assert_eq!(ts.g(1).coeff(&r.mono_vec(&[("z", 1), ("p1", 1), ("u", -1)])), crate::combinat::qf(1, 2));
        assert_eq!(ts.xi(0).coeff(&r.mono_vec(&[("z", 1), ("p1", 1), ("u", -1)])), q(1));
        assert_eq!(ts.xi(2).coeff(&r.mono_vec(&[("z", 1), ("p1", 1), ("u", -1)])), q(1));
        for j in 1..=4 {
            assert_eq!(ts.g(j).constant_term(), omega_const(j));
        }
    }

    #[test]
    fn genus_one_prediction() {
        let ts = solve_tree_series(&small()).unwrap();
        let pred = ts.predicted_fh(1).unwrap();
        let l = &pred[&Partition::from_slice(&[1])];
        assert_eq!(l.terms.len(), 1);
        assert_eq!(l.terms[&FaberKey::new(1, vec![0], 0)], q(1));
    }
}
