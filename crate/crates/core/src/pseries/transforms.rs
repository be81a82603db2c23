//! The series transforms: symmetrization, the u/x substitutions, evaluation
//! of q at the tree-function constants, the change of variables to y, and
//! top-degree restriction.

use num_traits::Zero;
use std::collections::BTreeMap;

use super::ops::{lagrange_invert, neg_binomial_coeffs, substitute};
use super::{MultiSeries, Ring};
use crate::combinat::{factorial, ipow, qi, Partition, Q};
use crate::{Error, Result};

/// Parse "p12" -> Some(12) for the given prefix.
pub fn var_index(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix).and_then(|r| r.parse().ok()).filter(|&i: &usize| i >= 1)
}

/// Distinct orderings of a multiset, in lexicographic order.
pub fn distinct_permutations(items: &[u32]) -> Vec<Vec<u32>> {
    let mut v = items.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    loop {
        let n = v.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
    out
}

/// Xi_m: p_alpha z^|alpha| -> sum over S_m of x_{s(1)}^{a_1}...x_{s(m)}^{a_m}; terms with l(alpha) != m vanish.
/// `target` must contain x1..xm and every source variable other than z and p_i.
pub fn symmetrize(f: &MultiSeries, m: usize, target: &Ring) -> Result<MultiSeries> {
    let src = f.ring();
    let mut pidx: Vec<Option<usize>> = vec![None; src.nvars()];
    let mut carry: Vec<Option<usize>> = vec![None; src.nvars()];
    for (i, v) in src.vars().iter().enumerate() {
        if v == "z" {
            continue;
        }
        if let Some(k) = var_index(v, "p") {
            pidx[i] = Some(k);
        } else {
            carry[i] = Some(target.index(v)?);
        }
    }
    let xs: Vec<usize> = (1..=m).map(|i| target.index(&format!("x{i}"))).collect::<Result<_>>()?;
    let mut out = target.zero();
    for (mono, c) in f.terms() {
        let mut parts = Vec::new();
        for (i, &e) in mono.iter().enumerate() {
            if let Some(k) = pidx[i] {
                for _ in 0..e {
                    parts.push(k as u32);
                }
            }
        }
        if parts.len() != m {
            continue;
        }
        let alpha = Partition::from_slice(&parts);
        let aut = qi(crate::combinat::aut_size(&alpha));
        let mut base = vec![0; target.nvars()];
        for (i, &e) in mono.iter().enumerate() {
            if let Some(j) = carry[i] {
                base[j] += e;
            }
        }
        for perm in distinct_permutations(&parts) {
            let mut mm = base.clone();
            for (k, &a) in perm.iter().enumerate() {
                mm[xs[k]] += a as i32;
            }
            out.add_term(mm, c * &aut);
        }
    }
    Ok(out)
}

/// Lambda on a series in x_1..x_m and u: u -> -u, x_i -> x_i/(1-u).
/// Each monomial is expanded independently, so the result is exact up to `u_max`.
pub fn lambda_sub(f: &MultiSeries, xprefix: &str, u_max: i32) -> Result<MultiSeries> {
    let ring = f.ring();
    let ui = ring.index("u")?;
    let xs: Vec<usize> = (0..ring.nvars()).filter(|&i| var_index(&ring.vars()[i], xprefix).is_some()).collect();
    let mut out = ring.zero();
    for (m, c) in f.terms() {
        let e = m[ui];
        let n: i64 = xs.iter().map(|&i| m[i] as i64).sum();
        let sign = if e.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
        if e > u_max {
            continue;
        }
        let coeffs = neg_binomial_coeffs(n, (u_max - e) as usize);
        for (k, b) in coeffs.iter().enumerate() {
            let mut mm = m.clone();
            mm[ui] = e + k as i32;
            out.add_term(mm, &sign * b);
        }
    }
    Ok(out)
}

/// Lambda in the z, p form: z -> z/(1-u), u -> -u, p_i -> (-u/(1-u)) p_i.
pub fn lambda_sub_zp(f: &MultiSeries, u_max: i32) -> Result<MultiSeries> {
    let ring = f.ring();
    let ui = ring.index("u")?;
    let zi = ring.index("z")?;
    let ps: Vec<usize> = (0..ring.nvars()).filter(|&i| var_index(&ring.vars()[i], "p").is_some()).collect();
    let mut out = ring.zero();
    for (m, c) in f.terms() {
        let l: i32 = ps.iter().map(|&i| m[i]).sum();
        let e = m[ui] + l;
        let n = m[zi] as i64 + l as i64;
        if e > u_max {
            continue;
        }
        let sign = if e.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
        for (k, b) in neg_binomial_coeffs(n, (u_max - e) as usize).iter().enumerate() {
            let mut mm = m.clone();
            mm[ui] = e + k as i32;
            out.add_term(mm, &sign * b);
        }
    }
    Ok(out)
}

/// k^(k-1)/k!
pub fn omega_const(k: usize) -> Q {
    Q::new(ipow(k as i64, k as u32 - 1), factorial(k as u64))
}

/// Omega: q_i -> i^(i-1)/i!, producing a series in `target` (the source ring minus the q's).
pub fn omega_sub(f: &MultiSeries, target: &Ring) -> Result<MultiSeries> {
    let src = f.ring();
    let consts: Vec<(String, MultiSeries)> = src
        .vars()
        .iter()
        .filter_map(|v| var_index(v, "q").map(|k| (v.clone(), target.constant(omega_const(k)))))
        .collect();
    let b: Vec<(&str, &MultiSeries)> = consts.iter().map(|(n, s)| (n.as_str(), s)).collect();
    substitute(f, &b, target)
}

/// sum_{n>=1} n^n s^n / n! in a univariate ring (this is y(x) - 1 as a series in x).
pub fn y_minus_one(ring: &Ring, var: &str, nmax: usize) -> MultiSeries {
    let i = ring.idx(var).expect("variable");
    let mut out = ring.zero();
    for n in 1..=nmax {
        let mut m = vec![0; ring.nvars()];
        m[i] = n as i32;
        out.add_term(m, Q::new(ipow(n as i64, n as u32), factorial(n as u64)));
    }
    out
}

/// The series G with G(y(x) - 1) = x, to degree n.
pub fn tree_inverse(n: usize) -> Result<MultiSeries> {
    let r = Ring::new(&["s"]).cap_var("s", n as i64);
    lagrange_invert(&y_minus_one(&r, "s", n), "s")
}

/// Operator C: x_i = G(y_i - 1). `xs` names the x variables in f, `ys` the matching outputs.
/// Other variables are carried over. Fails if the result has not visibly become a
/// polynomial in the y's below the per-variable truncation `n`.
pub fn change_to_y(f: &MultiSeries, xs: &[&str], ys: &[&str], n: usize) -> Result<MultiSeries> {
    let src = f.ring();
    let others: Vec<String> = src.vars().iter().filter(|v| !xs.contains(&v.as_str())).cloned().collect();
    let mut svars: Vec<String> = (0..xs.len()).map(|i| format!("__s{i}")).collect();
    svars.extend(others.iter().cloned());
    let mut sring = Ring::new(&svars);
    for i in 0..xs.len() {
        sring = sring.cap_var(&format!("__s{i}"), n as i64);
    }
    let g = tree_inverse(n)?;
    let gs: Vec<MultiSeries> = (0..xs.len())
        .map(|i| {
            let sname = format!("__s{i}");
            substitute(&g, &[("s", &sring.var(&sname))], &sring)
        })
        .collect::<Result<_>>()?;
    let binds: Vec<(&str, &MultiSeries)> = xs.iter().zip(&gs).map(|(x, g)| (*x, g)).collect();
    let in_s = substitute(f, &binds, &sring)?;
    for i in 0..xs.len() {
        if let Some(mx) = in_s.max_exp(&format!("__s{i}")) {
            if mx as usize >= n {
                return Err(Error::Truncation(format!(
                    "change_to_y: nonzero coefficient at degree {mx} in {}; raise the per-variable bound above {n}",
                    ys[i]
                )));
            }
        }
    }
    let mut yvars: Vec<String> = ys.iter().map(|s| s.to_string()).collect();
    yvars.extend(others.iter().cloned());
    let yring = Ring::new(&yvars);
    let shifts: Vec<MultiSeries> = ys.iter().map(|y| yring.var(y).sub(&yring.one())).collect();
    let sb: Vec<(String, &MultiSeries)> = (0..xs.len()).map(|i| (format!("__s{i}"), &shifts[i])).collect();
    let sb2: Vec<(&str, &MultiSeries)> = sb.iter().map(|(a, b)| (a.as_str(), *b)).collect();
    substitute(&in_s, &sb2, &yring)
}

/// Which part of a polynomial T' keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopMode {
    /// total degree 4g + 3m - 5
    Faber { g: u32, m: u32 },
    /// total degree 3m - 6
    Hurwitz { m: u32 },
    /// maximal degree present, separately for each power of u
    Xi,
}

fn total_degree(m: &[i32], idx: &[usize]) -> i64 {
    idx.iter().map(|&i| m[i] as i64).sum()
}

/// T': restrict to the top total degree in the given variables.
pub fn top_degree(f: &MultiSeries, ys: &[&str], mode: TopMode) -> Result<MultiSeries> {
    let ring = f.ring();
    let idx: Vec<usize> = ys.iter().map(|y| ring.index(y)).collect::<Result<_>>()?;
    let out = match mode {
        TopMode::Faber { g, m } => {
            let d = 4 * g as i64 + 3 * m as i64 - 5;
            f.filter(|mm| total_degree(mm, &idx) == d)
        }
        TopMode::Hurwitz { m } => {
            let d = 3 * m as i64 - 6;
            f.filter(|mm| total_degree(mm, &idx) == d)
        }
        TopMode::Xi => {
            let ui = ring.index("u")?;
            let mut best: BTreeMap<i32, i64> = BTreeMap::new();
            for mm in f.terms().keys() {
                let d = total_degree(mm, &idx);
                let e = best.entry(mm[ui]).or_insert(d);
                if d > *e {
                    *e = d;
                }
            }
            f.filter(|mm| best.get(&mm[ui]) == Some(&total_degree(mm, &idx)))
        }
    };
    if out.is_zero() && !f.is_zero() {
        return Err(Error::Domain(format!("top_degree: nothing at the expected degree for {mode:?}")));
    }
    Ok(out)
}

/// Coefficients of a univariate series as a dense vector.
pub fn dense_coeffs(f: &MultiSeries, var: &str, n: usize) -> Vec<Q> {
    let i = f.ring().idx(var).expect("variable");
    let mut v = vec![Q::zero(); n + 1];
    for (m, c) in f.terms() {
        if m[i] >= 0 && (m[i] as usize) <= n {
            v[m[i] as usize] += c;
        }
    }
    v
}


/// Operator C with a total-degree truncation: `f` is exact for total x-degree <= n,
/// and the result must visibly be a polynomial of total degree < n in the y's.
pub fn change_to_y_total(f: &MultiSeries, xs: &[&str], ys: &[&str], n: usize) -> Result<MultiSeries> {
    let src = f.ring();
    let others: Vec<String> = src.vars().iter().filter(|v| !xs.contains(&v.as_str())).cloned().collect();
    let snames: Vec<String> = (0..xs.len()).map(|i| format!("__s{i}")).collect();
    let mut svars = snames.clone();
    svars.extend(others.iter().cloned());
    let w: Vec<(&str, i32)> = snames.iter().map(|s| (s.as_str(), 1)).collect();
    let sring = Ring::new(&svars).cap_weighted(&w, n as i64);
    let g = tree_inverse(n)?;
    let gs: Vec<MultiSeries> =
        snames.iter().map(|s| substitute(&g, &[("s", &sring.var(s))], &sring)).collect::<Result<_>>()?;
    let binds: Vec<(&str, &MultiSeries)> = xs.iter().zip(&gs).map(|(x, g)| (*x, g)).collect();
    let f_exact = f.filter(|m| xs.iter().map(|x| m[src.idx(x).unwrap()] as i64).sum::<i64>() <= n as i64);
    let in_s = substitute(&f_exact, &binds, &sring)?;
    if let Some(mx) = in_s.max_weighted(&w) {
        if mx >= n as i64 {
            return Err(Error::Truncation(format!(
                "change of variables: nonzero coefficient at total degree {mx}; raise the bound above {n}"
            )));
        }
    }
    let mut yvars: Vec<String> = ys.iter().map(|s| s.to_string()).collect();
    yvars.extend(others.iter().cloned());
    let yring = Ring::new(&yvars);
    let shifts: Vec<MultiSeries> = ys.iter().map(|y| yring.var(y).sub(&yring.one())).collect();
    let sb: Vec<(&str, &MultiSeries)> = snames.iter().map(|s| s.as_str()).zip(shifts.iter()).collect();
    substitute(&in_s, &sb, &yring)
}

/// Exact quotient f / (a - b) for f vanishing on a = b; fails otherwise.
pub fn div_diff(f: &MultiSeries, a: &str, b: &str) -> Result<MultiSeries> {
    let ring = f.ring();
    let (ia, ib) = (ring.index(a)?, ring.index(b)?);
    // group by the exponents of all other variables and by the total degree in a, b
    let mut groups: BTreeMap<(Vec<i32>, i32), BTreeMap<i32, Q>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut key = m.clone();
        key[ia] = 0;
        key[ib] = 0;
        groups.entry((key, m[ia] + m[ib])).or_default().insert(m[ia], c.clone());
    }
    let mut out = ring.zero();
    for ((key, n), coeffs) in groups {
        let lo = *coeffs.keys().next().unwrap();
        // f = (a - b) q with q_k = -(p_lo + ... + p_k), k = exponent of a in q
        let mut acc = Q::zero();
        for k in lo..n {
            if let Some(p) = coeffs.get(&k) {
                acc += p;
            }
            if !acc.is_zero() {
                let mut m = key.clone();
                m[ia] = k;
                m[ib] = n - 1 - k;
                out.add_term(m, -acc.clone());
            }
        }
        if let Some(p) = coeffs.get(&n) {
            acc += p;
        }
        if !acc.is_zero() {
            return Err(Error::NotDivisible(format!("series does not vanish on {a} = {b}")));
        }
    }
    Ok(out)
}
