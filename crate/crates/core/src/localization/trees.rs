//! Explicit enumeration of localization trees and the tree sum for F^g_alpha.
//!
//! A tree hangs off a root 0-vertex. Every infinity-vertex owns a nonempty block of
//! t-vertices (the positions of alpha it carries) and hangs from the root or from a
//! labelled non-root 0-vertex; every non-root 0-vertex hangs from an infinity-vertex.

use num_traits::{One, Zero};

use crate::combinat::{binomial, factorial, ipow, qi, r_fab, r_single, Partition, Q};
use crate::faber::{faber_polynomial, generator_ratio, SymbolTable};
use crate::hurwitz::{double_h0, single_closed};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocTree {
    /// positions of alpha carried by each infinity-vertex
    pub blocks: Vec<Vec<usize>>,
    /// parent of each infinity-vertex: None for the root, Some(i) for non-root 0-vertex i
    pub inf_parent: Vec<Option<usize>>,
    /// weight of the edge from each infinity-vertex to its parent
    pub inf_weight: Vec<u32>,
    /// parent infinity-vertex of each non-root 0-vertex
    pub zero_parent: Vec<usize>,
    /// weight of the edge from each non-root 0-vertex to its parent
    pub zero_weight: Vec<u32>,
}

impl LocTree {
    pub fn eta0(&self) -> usize {
        self.zero_parent.len()
    }

    pub fn gamma(&self, alpha: &[u32], v: usize) -> Partition {
        Partition::new(self.blocks[v].iter().map(|&p| alpha[p]).collect()).unwrap()
    }

    pub fn beta(&self, v: usize) -> Partition {
        let mut w = vec![self.inf_weight[v]];
        for (i, &p) in self.zero_parent.iter().enumerate() {
            if p == v {
                w.push(self.zero_weight[i]);
            }
        }
        Partition::new(w).unwrap()
    }

    /// Edge weights at non-root 0-vertex i.
    pub fn delta(&self, i: usize) -> Partition {
        let mut w = vec![self.zero_weight[i]];
        for (v, p) in self.inf_parent.iter().enumerate() {
            if *p == Some(i) {
                w.push(self.inf_weight[v]);
            }
        }
        Partition::new(w).unwrap()
    }

    pub fn delta_root(&self) -> Vec<u32> {
        (0..self.blocks.len()).filter(|&v| self.inf_parent[v].is_none()).map(|v| self.inf_weight[v]).collect()
    }

    /// sum over infinity-vertices of l(gamma) + l(beta) - 2
    pub fn r_inf(&self, alpha: &[u32]) -> i64 {
        (0..self.blocks.len()).map(|v| self.gamma(alpha, v).len() as i64 + self.beta(v).len() as i64 - 2).sum()
    }
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

fn all_functions(domain: usize, range: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..domain {
        let mut next = Vec::new();
        for f in &out {
            for r in 0..range {
                let mut g = f.clone();
                g.push(r);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// Trees with t-vertices carrying `alpha` (in the given part order) and r_inf <= 2g - 1.
pub fn enumerate_trees(g: u32, alpha: &Partition) -> Result<Vec<LocTree>> {
    if g == 0 || g > 2 || alpha.size() > 4 {
        return Err(Error::Domain("tree enumeration is limited to g <= 2 and |alpha| <= 4".into()));
    }
    let a = alpha.parts();
    let l = a.len();
    let rmax = 2 * g as i64 - 1;
    let mut out = Vec::new();
    for blocks in set_partitions(l) {
        let n = blocks.len();
        let sizes: Vec<u32> = blocks.iter().map(|b| b.iter().map(|&p| a[p]).sum()).collect();
        let eta_max = rmax - l as i64 + n as i64;
        for eta0 in 0..=eta_max.max(-1) {
            let eta0 = eta0 as usize;
            // parents: infinity-vertex -> 0 (root) or 1 + zero index; zero -> infinity index
            for ip in all_functions(n, eta0 + 1) {
                for zp in all_functions(eta0, n) {
                    if !acyclic(&ip, &zp) {
                        continue;
                    }
                    let inf_parent: Vec<Option<usize>> = ip.iter().map(|&p| if p == 0 { None } else { Some(p - 1) }).collect();
                    if inf_parent.iter().all(|p| p.is_some()) {
                        continue;
                    }
                    for (iw, zw) in weightings(&sizes, &zp) {
                        out.push(LocTree {
                            blocks: blocks.clone(),
                            inf_parent: inf_parent.clone(),
                            inf_weight: iw,
                            zero_parent: zp.clone(),
                            zero_weight: zw,
                        });
                    }
                }
            }
        }
    }
    Ok(out.into_iter().filter(|t| t.r_inf(a) <= rmax).collect())
}

fn acyclic(ip: &[usize], zp: &[usize]) -> bool {
    // walk up from each infinity-vertex; the root must be reached
    for start in 0..ip.len() {
        let mut v = start;
        for _ in 0..=ip.len() {
            if ip[v] == 0 {
                break;
            }
            v = zp[ip[v] - 1];
        }
        if ip[v] != 0 {
            return false;
        }
    }
    // every zero vertex must have a path too, which holds since its parent does
    true
}

/// Edge weights with |beta^v| = |gamma^v| at every infinity-vertex.
fn weightings(sizes: &[u32], zp: &[usize]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let n = sizes.len();
    let mut per_vertex: Vec<Vec<(u32, Vec<u32>)>> = Vec::with_capacity(n);
    for v in 0..n {
        let kids: Vec<usize> = (0..zp.len()).filter(|&i| zp[i] == v).collect();
        let mut opts = Vec::new();
        // parent weight w >= 1 plus one weight >= 1 per child, summing to sizes[v]
        let k = kids.len() as u32;
        if sizes[v] < 1 + k {
            return vec![];
        }
        for comp in crate::combinat::weak_compositions(sizes[v] - 1 - k, kids.len() + 1) {
            opts.push((comp[0] + 1, comp[1..].iter().map(|x| x + 1).collect::<Vec<u32>>()));
        }
        per_vertex.push(opts);
    }
    let mut out = vec![(vec![0u32; n], vec![0u32; zp.len()])];
    for v in 0..n {
        let kids: Vec<usize> = (0..zp.len()).filter(|&i| zp[i] == v).collect();
        let mut next = Vec::new();
        for (iw, zw) in &out {
            for (w, cw) in &per_vertex[v] {
                let mut iw2 = iw.clone();
                let mut zw2 = zw.clone();
                iw2[v] = *w;
                for (j, &i) in kids.iter().enumerate() {
                    zw2[i] = cw[j];
                }
                next.push((iw2, zw2));
            }
        }
        out = next;
    }
    out
}

/// Contribution of one tree to the class F^{g,alpha} in psi_1^(g-1) units.
pub fn tree_weight(g: u32, alpha: &Partition, t: &LocTree, table: &SymbolTable) -> Result<Q> {
    let a = alpha.parts();
    let r_inf = t.r_inf(a);
    let rf = r_fab(alpha);
    let rg = r_single(g, alpha);
    let bin = binomial(rg - r_inf, rf);
    if bin.is_zero() {
        return Ok(Q::zero());
    }
    let sign = if r_inf % 2 == 1 { -Q::one() } else { Q::one() };
    let mut w = sign * qi(factorial(rf as u64) * bin) / qi(factorial(t.eta0() as u64));
    let root = t.delta_root();
    w *= faber_polynomial(g, &root, table)?;
    for &e in &root {
        w *= Q::new(ipow(e as i64, e), factorial(e as u64));
    }
    for &e in t.inf_weight.iter().chain(t.zero_weight.iter()) {
        w *= Q::from_integer((e as i64).into());
    }
    for i in 0..t.eta0() {
        let d = t.delta(i);
        w *= single_closed(&d)? / qi(factorial(r_single(0, &d) as u64));
    }
    for v in 0..t.blocks.len() {
        let gam = t.gamma(a, v);
        let bet = t.beta(v);
        let r = crate::combinat::r_double(0, &gam, &bet);
        w *= double_h0(&gam, &bet) / qi(factorial(r as u64));
    }
    Ok(w)
}

/// F^g_alpha from the tree sum, normalized by the generator ratio 2^g/(g-1)!.
pub fn tree_sum(g: u32, alpha: &Partition, table: &SymbolTable) -> Result<Q> {
    let mut s = Q::zero();
    for t in enumerate_trees(g, alpha)? {
        s += tree_weight(g, alpha, &t, table)?;
    }
    Ok(s / generator_ratio(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_part_has_a_unique_simplest_tree() {
        for d in 1..=4 {
            let alpha = Partition::one_part(d);
            let trees = enumerate_trees(1, &alpha).unwrap();
            let simplest: Vec<&LocTree> = trees.iter().filter(|t| t.r_inf(alpha.parts()) == 0).collect();
            assert_eq!(simplest.len(), 1);
            assert_eq!(simplest[0].inf_weight, vec![d]);
            assert_eq!(simplest[0].eta0(), 0);
        }
    }

    #[test]
    fn balance_holds() {
        let alpha = Partition::from_slice(&[2, 1, 1]);
        for t in enumerate_trees(2, &alpha).unwrap() {
            for v in 0..t.blocks.len() {
                assert_eq!(t.beta(v).size(), t.gamma(alpha.parts(), v).size());
            }
        }
    }

    #[test]
    fn missing_symbols_fail() {
        let r = tree_sum(1, &Partition::one_part(1), &SymbolTable::new());
        assert!(matches!(r, Err(Error::MissingSymbol(_))));
    }

    #[test]
    fn size_guard() {
        assert!(enumerate_trees(3, &Partition::one_part(1)).is_err());
        assert!(enumerate_trees(1, &Partition::one_part(5)).is_err());
    }
}
