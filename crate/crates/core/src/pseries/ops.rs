use num_traits::{One, Zero};
use std::collections::HashMap;

use super::{mul_in, Mono, MultiSeries, Ring};
use crate::combinat::Q;
use crate::{Error, Result};

/// Compose: replace each bound variable of `f` by its binding (a series in `target`).
/// Unbound variables must exist in `target` and are carried over unchanged.
/// Negative exponents are only allowed for variables bound to a single monomial.
pub fn substitute(f: &MultiSeries, bindings: &[(&str, &MultiSeries)], target: &Ring) -> Result<MultiSeries> {
    let src = f.ring();
    let mut bound: Vec<Option<MultiSeries>> = vec![None; src.nvars()];
    for (name, b) in bindings {
        let i = src.index(name)?;
        let b = if b.ring() == target { (*b).clone() } else { b.embed(target)?.rehome(target) };
        bound[i] = Some(b);
    }
    let mut carry: Vec<Option<usize>> = vec![None; src.nvars()];
    for (i, v) in src.vars().iter().enumerate() {
        if bound[i].is_none() {
            carry[i] = Some(target.index(v)?);
        }
    }
    let mut pow_cache: HashMap<(usize, i32), MultiSeries> = HashMap::new();
    let mut prod_cache: HashMap<Vec<i32>, MultiSeries> = HashMap::new();
    let mut out = target.zero();
    for (m, c) in f.terms() {
        let sig: Vec<i32> = (0..src.nvars()).map(|i| if bound[i].is_some() { m[i] } else { 0 }).collect();
        if !prod_cache.contains_key(&sig) {
            let mut p = target.one();
            for i in 0..src.nvars() {
                if let Some(b) = &bound[i] {
                    if sig[i] != 0 {
                        let pw = power_cached(&mut pow_cache, i, b, sig[i], target)?;
                        p = mul_in(target, &p, &pw);
                    }
                }
            }
            prod_cache.insert(sig.clone(), p);
        }
        let p = &prod_cache[&sig];
        let mut shift = vec![0; target.nvars()];
        for i in 0..src.nvars() {
            if let Some(j) = carry[i] {
                shift[j] += m[i];
            }
        }
        out.add_scaled_shifted(p, c, &shift);
    }
    Ok(out)
}

fn power_cached(
    cache: &mut HashMap<(usize, i32), MultiSeries>,
    i: usize,
    b: &MultiSeries,
    e: i32,
    target: &Ring,
) -> Result<MultiSeries> {
    if let Some(p) = cache.get(&(i, e)) {
        return Ok(p.clone());
    }
    let p = if e < 0 {
        if b.len() != 1 {
            return Err(Error::Domain("negative power of a non-monomial binding".into()));
        }
        let (m, c) = b.terms().iter().next().unwrap();
        let inv: Mono = m.iter().map(|&x| -x * (-e)).collect();
        target.monomial(&inv, num_traits::pow(c.recip(), (-e) as usize))
    } else if e == 1 {
        b.clone()
    } else {
        let prev = power_cached(cache, i, b, e - 1, target)?;
        mul_in(target, &prev, b)
    };
    cache.insert((i, e), p.clone());
    Ok(p)
}

/// f(var -> g) within f's ring.
pub fn compose(f: &MultiSeries, var: &str, g: &MultiSeries) -> Result<MultiSeries> {
    substitute(f, &[(var, g)], f.ring())
}

/// Iterate `step` from `init` until a full pass changes nothing.
pub fn solve_fixed_point<F>(init: Vec<MultiSeries>, mut step: F, max_iter: usize) -> Result<Vec<MultiSeries>>
where
    F: FnMut(&[MultiSeries]) -> Result<Vec<MultiSeries>>,
{
    let mut cur = init;
    for _ in 0..max_iter {
        let next = step(&cur)?;
        if next.len() != cur.len() {
            return Err(Error::Domain("fixed point step changed the family size".into()));
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::NoConvergence(format!("no fixed point after {max_iter} passes")))
}

/// Compositional inverse of a univariate series f(var) = c1 var + ...
pub fn lagrange_invert(f: &MultiSeries, var: &str) -> Result<MultiSeries> {
    let ring = f.ring();
    let i = ring.index(var)?;
    if f.terms().keys().any(|m| m.iter().enumerate().any(|(j, &e)| j != i && e != 0)) {
        return Err(Error::Domain("lagrange_invert needs a univariate series".into()));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::Domain("lagrange_invert needs zero constant term".into()));
    }
    let mut lin = vec![0; ring.nvars()];
    lin[i] = 1;
    let c1 = f.coeff(&lin);
    if c1.is_zero() {
        return Err(Error::Domain("lagrange_invert needs a nonzero linear term".into()));
    }
    let z = ring.var(var);
    let c1i = c1.recip();
    let nonlin = f.sub(&z.scale(&c1));
    let init = vec![z.scale(&c1i)];
    let r = solve_fixed_point(
        init,
        |g| {
            let fg = compose(&nonlin, var, &g[0])?;
            Ok(vec![z.sub(&fg).scale(&c1i)])
        },
        super::MAX_NILPOTENT,
    )?;
    Ok(r.into_iter().next().unwrap())
}

/// Binomial-series coefficients of (1 - x)^(-n), k = 0..=kmax.
pub fn neg_binomial_coeffs(n: i64, kmax: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut c = Q::one();
    for k in 0..=kmax {
        out.push(c.clone());
        c = c * Q::from_integer((n + k as i64).into()) / Q::from_integer((k as i64 + 1).into());
    }
    out
}
