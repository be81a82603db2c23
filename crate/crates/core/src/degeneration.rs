//! Faber-Hurwitz numbers from the join-cut recursion, their generating series,
//! and the residual of the join-cut equation.

use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::combinat::{aut_size, binomial, factorial, ipow, partitions_of, qi, r_fab, Partition, Q};
use crate::hurwitz::{hurwitz_series_single, single_closed};
use crate::pseries::{pvar, MultiSeries, TruncProfile};
use crate::{Error, Result};

type Memo = HashMap<(u32, Partition), Q>;

static MEMO: OnceLock<Mutex<Memo>> = OnceLock::new();

/// F^g_alpha by the join-cut recursion.
///
/// Conventions: the cut term runs over each part position k, each ordered split
/// alpha_k = i + j with i, j >= 1, and each subset S of the other positions, pairing
/// H^0 of {i} + S with F of {j} + (rest); the join term runs over unordered pairs
/// of positions. These are the choices under which the join-cut equation holds.
pub fn faber_hurwitz(g: u32, alpha: &Partition) -> Result<Q> {
    if g == 0 {
        return Err(Error::Domain("Faber-Hurwitz numbers need g >= 1".into()));
    }
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    let mut local: Memo = memo.lock().unwrap().clone();
    let v = fh_rec(g, alpha, &mut local);
    memo.lock().unwrap().extend(local);
    Ok(v)
}

fn fh_rec(g: u32, alpha: &Partition, memo: &mut Memo) -> Q {
    if alpha.is_empty() {
        return Q::zero();
    }
    if let Some(v) = memo.get(&(g, alpha.clone())) {
        return v.clone();
    }
    let parts = alpha.parts();
    let n = parts.len();
    let rf = r_fab(alpha);
    let mut total = Q::zero();
    // cut: part k splits as i + j; i joins a genus-0 component with the parts in S
    for k in 0..n {
        let others: Vec<u32> = (0..n).filter(|&x| x != k).map(|x| parts[x]).collect();
        for i in 1..parts[k] {
            let j = parts[k] - i;
            for mask in 0u32..(1 << others.len()) {
                let mut a1 = vec![i];
                let mut a2 = vec![j];
                for (b, &p) in others.iter().enumerate() {
                    if mask & (1 << b) != 0 {
                        a1.push(p);
                    } else {
                        a2.push(p);
                    }
                }
                let a1 = Partition::new(a1).unwrap();
                let a2 = Partition::new(a2).unwrap();
                let f = fh_rec(g, &a2, memo);
                if f.is_zero() {
                    continue;
                }
                let h = single_closed(&a1).unwrap();
                let bin = binomial(rf - 1, r_fab(&a2));
                total += h * f * qi(bin * (i as i64 * j as i64));
            }
        }
    }
    // join: two parts merge
    for a in 0..n {
        for b in a + 1..n {
            let mut merged: Vec<u32> = (0..n).filter(|&x| x != a && x != b).map(|x| parts[x]).collect();
            merged.push(parts[a] + parts[b]);
            let f = fh_rec(g, &Partition::new(merged).unwrap(), memo);
            total += f * Q::from_integer((parts[a] as i64 + parts[b] as i64).into());
        }
    }
    // the marked branch point
    let h = single_closed(alpha).unwrap();
    for &a in parts {
        total += &h * qi(ipow(a as i64, 2 * g + 1));
    }
    memo.insert((g, alpha.clone()), total.clone());
    total
}

/// (1/d) sum_i C(d,i) i^(2g+i-1) (d-i)^(d-i), with 0^0 = 1.
pub fn one_part_closed(g: u32, d: u32) -> Result<Q> {
    if g == 0 || d == 0 {
        return Err(Error::Domain("one_part_closed needs g, d >= 1".into()));
    }
    let mut s = num_bigint::BigInt::zero();
    for i in 1..=d {
        s += binomial(d as i64, i as i64) * ipow(i as i64, 2 * g + i - 1) * ipow((d - i) as i64, d - i);
    }
    Ok(Q::new(s, (d as i64).into()))
}

/// F^g = sum z^|a| p_a/|Aut a| F^g_a / rFab!.
pub fn fh_series(g: u32, profile: &TruncProfile) -> Result<MultiSeries> {
    let ring = profile.zp_ring();
    let mut s = ring.zero();
    for d in 1..=profile.z_max {
        for alpha in partitions_of(d) {
            if alpha.parts()[0] > profile.n_max {
                continue;
            }
            let f = faber_hurwitz(g, &alpha)?;
            let mut m = vec![0; ring.nvars()];
            m[0] = d as i32;
            for &a in alpha.parts() {
                m[a as usize] += 1;
            }
            s.add_term(m, f / qi(aut_size(&alpha) * factorial(r_fab(&alpha) as u64)));
        }
    }
    Ok(s)
}

/// LHS - RHS of the join-cut equation for a given candidate series `f` (genus g).
pub fn joincut_residual_of(g: u32, f: &MultiSeries, h: &MultiSeries) -> Result<MultiSeries> {
    let ring = f.ring();
    let n = ring.nvars() - 1;
    let mut lhs = f.euler("z")?.sub(f);
    for i in 1..=n {
        lhs = lhs.add(&f.euler(&pvar(i))?);
    }
    let mut rhs = ring.zero();
    let dh: Vec<MultiSeries> = (1..=n).map(|i| h.derive(&pvar(i)).map(|s| s.scale(&Q::from_integer((i as i64).into())))).collect::<Result<_>>()?;
    let df: Vec<MultiSeries> = (1..=n).map(|i| f.derive(&pvar(i)).map(|s| s.scale(&Q::from_integer((i as i64).into())))).collect::<Result<_>>()?;
    for i in 1..=n {
        for j in 1..=n {
            if i + j > n {
                continue;
            }
            let prod = dh[i - 1].mul(&df[j - 1]).mul(&ring.var(&pvar(i + j)));
            rhs = rhs.add(&prod);
            // join part: (1/2) p_i p_j (i+j) d/dp_{i+j}
            let dij = f.derive(&pvar(i + j))?;
            let t = dij.mul(&ring.var(&pvar(i))).mul(&ring.var(&pvar(j)));
            rhs = rhs.add(&t.scale(&Q::new(((i + j) as i64).into(), 2.into())));
        }
    }
    for i in 1..=n {
        let t = h.euler(&pvar(i))?;
        rhs = rhs.add(&t.scale(&qi(ipow(i as i64, 2 * g + 1))));
    }
    Ok(lhs.sub(&rhs))
}

pub fn joincut_residual(g: u32, profile: &TruncProfile) -> Result<MultiSeries> {
    let f = fh_series(g, profile)?;
    let h = hurwitz_series_single(profile);
    joincut_residual_of(g, &f, &h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{q, qf};

    fn p(v: &[u32]) -> Partition {
        Partition::from_slice(v)
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(faber_hurwitz(1, &p(&[1])).unwrap(), q(1));
        assert_eq!(faber_hurwitz(1, &p(&[2])).unwrap(), q(5));
        assert_eq!(faber_hurwitz(1, &p(&[3])).unwrap(), q(39));
        assert_eq!(faber_hurwitz(2, &p(&[1])).unwrap(), q(1));
        assert_eq!(faber_hurwitz(1, &p(&[1, 1])).unwrap(), q(12));
        assert!(faber_hurwitz(0, &p(&[1])).is_err());
    }

    #[test]
    fn closed_examples() {
        assert_eq!(one_part_closed(1, 1).unwrap(), q(1));
        assert_eq!(one_part_closed(1, 2).unwrap(), q(5));
        assert_eq!(one_part_closed(2, 1).unwrap(), q(1));
    }

    #[test]
    fn series_examples() {
        let f = fh_series(1, &TruncProfile::default()).unwrap();
        assert_eq!(f.coeff_named(&[("z", 1), ("p1", 1)]), q(1));
        assert_eq!(f.coeff_named(&[("z", 2), ("p2", 1)]), qf(5, 2));
        assert_eq!(f.coeff_named(&[("z", 2), ("p1", 2)]), q(1));
    }

    #[test]
    fn residual_small() {
        let prof = TruncProfile { z_max: 4, n_max: 4, ..Default::default() };
        for g in 1..=2 {
            assert!(joincut_residual(g, &prof).unwrap().is_zero());
        }
        let f = fh_series(1, &prof).unwrap();
        let bump = f.ring().mono_named(&[("z", 2), ("p2", 1)], qf(1, 6));
        let r = joincut_residual_of(1, &f.add(&bump), &hurwitz_series_single(&prof)).unwrap();
        assert!(!r.coeff_named(&[("z", 2), ("p2", 1)]).is_zero());
    }
}
