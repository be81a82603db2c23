//! The symmetrized route: genus 0 double Hurwitz series in x_1..x_m through the
//! series v = x exp(u Q(v)), and from it Lambda f_{j,m}, Lambda xi^(i)_m for m <= 2,
//! followed by the change of variables to y and the top-degree restriction.

use num_traits::One;

use crate::combinat::{binomial, dfo, factorial, ipow, qi, Q};
use crate::pseries::{change_to_y_total, div_diff, substitute, MultiSeries, Ring};
use crate::{Error, Result};

/// Truncation for the symmetrized route: total x-degree and the largest u power kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymTrunc {
    pub n: usize,
    pub u_max: i32,
}

impl SymTrunc {
    /// Ring in x1..xm and u with total x-degree <= n and -2 <= u <= u_max.
    pub fn ring(&self, m: usize) -> Ring {
        let mut vars: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        vars.push("u".into());
        let w: Vec<(String, i32)> = (1..=m).map(|i| (format!("x{i}"), 1)).collect();
        let w: Vec<(&str, i32)> = w.iter().map(|(s, k)| (s.as_str(), *k)).collect();
        Ring::new(&vars).cap_weighted(&w, self.n as i64).cap_var("u", self.u_max as i64).cap_min("u", -2)
    }

    fn bumped(&self) -> SymTrunc {
        SymTrunc { n: self.n + 1, u_max: self.u_max + 1 }
    }
}

/// sum_{j=1}^{n} c(j) s^j by Horner's rule.
pub fn eval_poly(c: impl Fn(usize) -> Q, s: &MultiSeries, n: usize) -> MultiSeries {
    let ring = s.ring();
    let mut r = ring.zero();
    for j in (1..=n).rev() {
        r = r.add(&ring.constant(c(j))).mul(s);
    }
    r
}

/// j^(j+e)/j!
pub fn tree_coeff(j: usize, e: i64) -> Q {
    let p = j as i64 + e;
    if p >= 0 {
        Q::new(ipow(j as i64, p as u32), factorial(j as u64))
    } else {
        Q::new(1.into(), ipow(j as i64, (-p) as u32) * factorial(j as u64))
    }
}

fn geometric_u(ring: &Ring, u_max: i32) -> MultiSeries {
    let mut s = ring.zero();
    for k in 0..=u_max {
        s = s.add(&ring.mono_named(&[("u", k)], Q::one()));
    }
    s
}

/// V = Lambda Omega v as a series in x1 and u: V = x/(1-u) exp(-u w(V)), w(s) = sum j^(j-1) s^j / j!.
pub fn big_v(tr: SymTrunc) -> Result<MultiSeries> {
    let ring = tr.ring(1);
    let x = ring.var("x1");
    let u = ring.var("u");
    let base = x.mul(&geometric_u(&ring, tr.u_max));
    let mut v = base.clone();
    for _ in 0..=tr.n + 1 {
        let w = eval_poly(|j| tree_coeff(j, -1), &v, tr.n);
        let next = base.mul(&u.mul(&w).neg().exp()?);
        if next == v {
            return Ok(v);
        }
        v = next;
    }
    Err(Error::NoConvergence("V fixed point".into()))
}

/// Lambda Omega mu = 1 / (1 + u sum j^j V^j / j!).
pub fn big_m(v: &MultiSeries, n: usize) -> Result<MultiSeries> {
    let ring = v.ring();
    ring.one().add(&ring.var("u").mul(&eval_poly(|j| tree_coeff(j, 0), v, n))).inv()
}

fn rename(f: &MultiSeries, to: &str, ring: &Ring) -> Result<MultiSeries> {
    substitute(f, &[("x1", &ring.var(to))], ring)
}

/// The pieces shared by the m = 1 and m = 2 computations.
pub struct VRoute {
    pub tr: SymTrunc,
    pub v: MultiSeries,
    pub mu: MultiSeries,
}

impl VRoute {
    pub fn new(tr: SymTrunc) -> Result<VRoute> {
        let v = big_v(tr)?;
        let mu = big_m(&v, tr.n)?;
        Ok(VRoute { tr, v, mu })
    }

    /// Lambda f_{j,1} = -u^(-1) V^j.
    pub fn lambda_f1(&self, j: u32) -> MultiSeries {
        let ring = self.v.ring();
        self.v.pow(j).mul_mono(&ring.mono_vec(&[("u", -1)]), &-Q::one())
    }

    /// Lambda xi^(i)_1 = -u^(-1) sum_j j^(j+i)/j! V^j.
    pub fn lambda_xi1(&self, i: u32) -> MultiSeries {
        let ring = self.v.ring();
        eval_poly(|j| tree_coeff(j, i as i64), &self.v, self.tr.n).mul_mono(&ring.mono_vec(&[("u", -1)]), &-Q::one())
    }

    /// sum_{j1,j2>=1} 1/(j1+j2) j1^(j1+1)/j1! a^j1 j2^j2/j2! b^j2 with a = V1, b = V2.
    fn kernel(&self, ring: &Ring, v1: &MultiSeries, v2: &MultiSeries) -> Result<MultiSeries> {
        let n = self.tr.n;
        let kr = Ring::new(&["a", "b"]).cap_weighted(&[("a", 1), ("b", 1)], n as i64);
        let mut k = kr.zero();
        for j1 in 1..n {
            for j2 in 1..=(n - j1) {
                let c = tree_coeff(j1, 1) * tree_coeff(j2, 0) / Q::from_integer(((j1 + j2) as i64).into());
                k.add_term(vec![j1 as i32, j2 as i32], c);
            }
        }
        substitute(&k, &[("a", v1), ("b", v2)], ring)
    }

    /// Lambda f_{j,2}, or Lambda xi^(i)_2 when `weights` are j^(j+i)/j!:
    /// -u^(-1) sum_j c_j j [ sym V1^j M1 V2/(V1-V2) + sym M1 V1^j K(V1,V2) ].
    fn two_part(&self, series: impl Fn(&MultiSeries) -> MultiSeries) -> Result<MultiSeries> {
        let big = self.tr.bumped();
        let inner = VRoute::new(big)?;
        let ring = big.ring(2);
        let v1 = rename(&inner.v, "x1", &ring)?;
        let v2 = rename(&inner.v, "x2", &ring)?;
        let m1 = rename(&inner.mu, "x1", &ring)?;
        let m2 = rename(&inner.mu, "x2", &ring)?;
        let r1 = series(&v1);
        let r2 = series(&v2);
        let num = r1.mul(&m1).mul(&v2).sub(&r2.mul(&m2).mul(&v1));
        let d12 = div_diff(&v1.sub(&v2), "x1", "x2")?;
        let s1 = div_diff(&num, "x1", "x2")?.mul(&d12.inv()?);
        let k12 = inner.kernel(&ring, &v1, &v2)?;
        let k21 = inner.kernel(&ring, &v2, &v1)?;
        let s2 = m1.mul(&r1).mul(&k12).add(&m2.mul(&r2).mul(&k21));
        let total = s1.add(&s2).mul_mono(&ring.mono_vec(&[("u", -1)]), &-Q::one());
        // computed one step larger: the divisions cost an x-degree, u^(-1) a u-degree
        let out = self.tr.ring(2);
        Ok(total.filter(|m| m[2] < self.tr.u_max).rehome(&out))
    }

    pub fn lambda_f2(&self, j: u32) -> Result<MultiSeries> {
        let jq = Q::from_integer((j as i64).into());
        self.two_part(|v| v.pow(j).scale(&jq))
    }

    pub fn lambda_xi2(&self, i: u32) -> Result<MultiSeries> {
        let n = self.tr.n + 1;
        self.two_part(|v| eval_poly(|j| tree_coeff(j, i as i64 + 1), v, n))
    }

    pub fn lambda_xi(&self, m: usize, i: u32) -> Result<MultiSeries> {
        match m {
            1 => {
                let ring = self.tr.ring(1);
                Ok(self.lambda_xi1(i).filter(|mm| mm[1] < self.tr.u_max).rehome(&ring))
            }
            2 => self.lambda_xi2(i),
            _ => Err(Error::Domain("the symmetrized route is implemented for m <= 2".into())),
        }
    }
}

/// C Lambda xi^(i)_m as a polynomial in y1..ym with u, exact for u^k, k <= u_max - 1.
pub fn c_lambda_xi(m: usize, i: u32, tr: SymTrunc) -> Result<MultiSeries> {
    let vr = VRoute::new(tr)?;
    let f = vr.lambda_xi(m, i)?;
    let xs: Vec<String> = (1..=m).map(|k| format!("x{k}")).collect();
    let ys: Vec<String> = (1..=m).map(|k| format!("y{k}")).collect();
    let xr: Vec<&str> = xs.iter().map(|s| s.as_str()).collect();
    let yr: Vec<&str> = ys.iter().map(|s| s.as_str()).collect();
    change_to_y_total(&f, &xr, &yr, tr.n)
}

/// Total y-degree of the top terms of the u^k coefficient of C Lambda xi^(i)_m.
pub fn xi_top_degree(m: usize, i: u32, k: i32) -> i64 {
    2 * i as i64 + 4 * m as i64 - 2 + k as i64
}

/// T Lambda xi^(i)_m: the u^k coefficients restricted to total degree 2i + 4m - 2 + k.
/// Fails if any coefficient carries terms above that degree.
pub fn t_lambda_xi(m: usize, i: u32, tr: SymTrunc) -> Result<MultiSeries> {
    let c = c_lambda_xi(m, i, tr)?;
    let ring = c.ring().clone();
    let ui = ring.index("u")?;
    let deg = |mm: &[i32]| mm[..m].iter().map(|&e| e as i64).sum::<i64>();
    for mm in c.terms().keys() {
        if deg(mm) > xi_top_degree(m, i, mm[ui]) {
            return Err(Error::Domain(format!("C Lambda xi: term above the top degree at u^{}", mm[ui])));
        }
    }
    Ok(c.filter(|mm| deg(mm) == xi_top_degree(m, i, mm[ui])))
}

/// Closed form of the u^k coefficient of u^m T Lambda xi^(i)_m, m <= 2, in ring (y1..ym).
pub fn xi_top_closed(m: usize, i: u32, k: i32, ring: &Ring) -> Result<MultiSeries> {
    let i = i as i64;
    match m {
        1 => {
            let c = -qi(binomial(2 * i + k as i64, k as i64)) * qi(dfo(i));
            Ok(ring.mono_named(&[("y1", (2 * i + 1 + k as i64) as i32)], c))
        }
        2 => {
            if k < 1 {
                return Ok(ring.zero());
            }
            let c = -qi(binomial(2 * i + 1 + k as i64, k as i64 - 1)) * qi(dfo(i + 1));
            // sym y1^a y2/(y1 - y2) = y1 y2 h_{a-2}(y1, y2)
            let a = 2 * i + 4 + k as i64;
            let mut s = ring.zero();
            for e in 0..=(a - 2) {
                s.add_term(ring.mono_vec(&[("y1", e as i32 + 1), ("y2", (a - 2 - e) as i32 + 1)]), c.clone());
            }
            Ok(s)
        }
        _ => Err(Error::Domain("closed forms are implemented for m <= 2".into())),
    }
}

/// Compare u^m T Lambda xi^(i)_m with its closed form for u-orders 0..=k_max.
/// Returns the list of mismatching orders.
pub fn check_xi_top(m: usize, i: u32, k_max: i32, tr: SymTrunc) -> Result<Vec<i32>> {
    let t = t_lambda_xi(m, i, tr)?;
    let ys: Vec<String> = (1..=m).map(|k| format!("y{k}")).collect();
    let yring = Ring::new(&ys);
    let mut bad = Vec::new();
    for k in 0..=k_max {
        let comp = t.coeff_of("u", k - m as i32)?.restrict(&yring);
        if comp != xi_top_closed(m, i, k, &yring)? {
            bad.push(k);
        }
    }
    Ok(bad)
}

/// Truncation just large enough for u^m T Lambda xi^(i)_m through u^k_max.
pub fn trunc_for(m: usize, i: u32, k_max: i32) -> SymTrunc {
    let top = xi_top_degree(m, i, k_max - m as i32) as usize;
    SymTrunc { n: top + 1, u_max: k_max - m as i32 + 1 }
}

/// Polynomiality check: C Lambda xi^(i)_m at the given truncation and at the next one agree
/// on every u power both determine. Returns the number of compared coefficients.
pub fn check_polynomial(m: usize, i: u32, tr: SymTrunc) -> Result<usize> {
    let a = c_lambda_xi(m, i, tr)?;
    let b = c_lambda_xi(m, i, tr.bumped())?;
    let keep = |s: &MultiSeries| s.filter(|mm| mm[m] < tr.u_max);
    let (a, b) = (keep(&a), keep(&b).rehome(a.ring()));
    if a != b {
        return Err(Error::Domain(format!("C Lambda xi^({i})_{m} changed under a truncation bump")));
    }
    Ok(a.len())
}

/// Ring in x1..xm, u, q1..q_nq with total x-degree <= n and u <= u_max.
pub fn q_ring(m: usize, n: usize, nq: usize, u_max: i32) -> Ring {
    let mut vars: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    vars.push("u".into());
    vars.extend((1..=nq).map(|j| format!("q{j}")));
    let w: Vec<(String, i32)> = (1..=m).map(|i| (format!("x{i}"), 1)).collect();
    let w: Vec<(&str, i32)> = w.iter().map(|(s, k)| (s.as_str(), *k)).collect();
    Ring::new(&vars).cap_weighted(&w, n as i64).cap_var("u", u_max as i64)
}

fn nq_of(ring: &Ring) -> usize {
    ring.vars().iter().filter(|v| v.starts_with('q')).count()
}

/// sum_j c_j q_j s^j over the q variables of the ring.
pub fn q_poly(s: &MultiSeries, c: impl Fn(usize) -> Q) -> MultiSeries {
    let ring = s.ring();
    let mut r = ring.zero();
    for j in (1..=nq_of(ring)).rev() {
        r = r.add(&ring.var(&format!("q{j}")).scale(&c(j))).mul(s);
    }
    r
}

/// v = x exp(u Q(v)) with Q(t) = sum q_j t^j.
pub fn v_of_q(ring: &Ring, x: &str, n: usize) -> Result<MultiSeries> {
    let x = ring.var(x);
    let u = ring.var("u");
    let mut v = x.clone();
    for _ in 0..=n + 1 {
        let next = x.mul(&u.mul(&q_poly(&v, |_| Q::one())).exp()?);
        if next == v {
            return Ok(v);
        }
        v = next;
    }
    Err(Error::NoConvergence("v fixed point".into()))
}

/// mu(v) = (1 - u v Q'(v))^(-1).
pub fn mu_of_q(v: &MultiSeries) -> Result<MultiSeries> {
    let ring = v.ring();
    let vq = q_poly(v, |j| Q::from_integer((j as i64).into()));
    ring.one().sub(&ring.var("u").mul(&vq)).inv()
}

/// Genus 0 symmetrized double Hurwitz series with q_1..q_nq kept as variables (m <= 2).
/// H_1 = integral of u Q(v) dx/x, H_2 = log((v1 - v2)/(x1 - x2)) - u Q1 - u Q2.
pub fn symmetrized_double_hurwitz(m: usize, n: usize, nq: usize, u_max: i32) -> Result<MultiSeries> {
    if !(1..=2).contains(&m) {
        return Err(Error::Domain("symmetrized double Hurwitz series are implemented for m <= 2".into()));
    }
    // one extra x-degree: the divided difference costs one
    let ring = q_ring(m, n + 1, nq, u_max);
    let u = ring.var("u");
    let vs: Vec<MultiSeries> = (1..=m).map(|i| v_of_q(&ring, &format!("x{i}"), n)).collect::<Result<_>>()?;
    let uq = |v: &MultiSeries| u.mul(&q_poly(v, |_| Q::one()));
    let out = if m == 1 {
        uq(&vs[0]).map_coeffs(|mm, c| c / Q::from_integer(mm[0].into()))
    } else {
        let d = div_diff(&vs[0].sub(&vs[1]), "x1", "x2")?;
        d.sub(&ring.one()).log1p()?.sub(&uq(&vs[0])).sub(&uq(&vs[1]))
    };
    Ok(out.rehome(&q_ring(m, n, nq, u_max)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_lowest_terms() {
        let v = big_v(SymTrunc { n: 4, u_max: 3 }).unwrap();
        assert_eq!(v.coeff_named(&[("x1", 1)]), Q::one());
        assert_eq!(v.coeff_named(&[("x1", 1), ("u", 2)]), Q::one());
        // x^2 u: from x/(1-u) * (1 - u x)
        assert_eq!(v.coeff_named(&[("x1", 2), ("u", 1)]), -Q::one());
    }

    #[test]
    fn div_diff_roundtrip() {
        let r = Ring::new(&["x1", "x2", "u"]);
        let f = r.mono_named(&[("x1", 3), ("u", 1)], Q::one()).sub(&r.mono_named(&[("x2", 3), ("u", 1)], Q::one()));
        let q = div_diff(&f, "x1", "x2").unwrap();
        let back = q.mul(&r.var("x1").sub(&r.var("x2")));
        assert_eq!(back, f);
        assert!(div_diff(&r.var("x1"), "x1", "x2").is_err());
    }

    #[test]
    fn xi_top_small() {
        for m in 1..=2 {
            for i in 0..=1 {
                let tr = trunc_for(m, i, 2);
                assert!(check_xi_top(m, i, 2, tr).unwrap().is_empty(), "m={m} i={i}");
            }
        }
    }

    #[test]
    fn h1_lowest() {
        let h = symmetrized_double_hurwitz(1, 3, 3, 3).unwrap();
        assert_eq!(h.coeff_named(&[("x1", 1), ("q1", 1), ("u", 1)]), Q::one());
    }

    #[test]
    fn agrees_with_tree_series() {
        use crate::localization::solve_tree_series;
        use crate::pseries::{lambda_sub, symmetrize, TruncProfile};
        let prof = TruncProfile { z_max: 5, n_max: 5, p_len_max: 2, u_min: -8, u_max: 2, ..Default::default() };
        let ts = solve_tree_series(&prof).unwrap();
        let tr = SymTrunc { n: 5, u_max: 3 };
        let vr = VRoute::new(tr).unwrap();
        for m in 1..=2usize {
            let target = tr.ring(m).without_caps();
            for j in 1..=3u32 {
                let sym = symmetrize(ts.f(j as usize), m, &target).unwrap();
                let tree = lambda_sub(&sym, "x", 2).unwrap();
                let route = if m == 1 { vr.lambda_f1(j) } else { vr.lambda_f2(j).unwrap() };
                let route = route.rehome(&target).filter(|mm| mm[m] <= 2);
                assert!(!route.is_zero());
                assert_eq!(tree, route, "m={m} j={j}");
            }
        }
    }

    #[test]
    fn double_hurwitz_matches_class_algebra() {
        use crate::hurwitz::hurwitz_series_double;
        use crate::pseries::{symmetrize, TruncProfile};
        let prof = TruncProfile { z_max: 4, n_max: 4, ..Default::default() };
        let h = hurwitz_series_double(&prof);
        for m in 1..=2usize {
            let v = symmetrized_double_hurwitz(m, 4, 4, 4).unwrap();
            assert!(v.len() > 10);
            let sym = symmetrize(&h, m, &v.ring().without_caps()).unwrap();
            assert_eq!(sym.rehome(v.ring()), v, "m={m}");
        }
    }

    #[test]
    fn guards() {
        assert!(symmetrized_double_hurwitz(3, 3, 3, 3).is_err());
        assert!(xi_top_closed(3, 0, 0, &Ring::new(&["y1"])).is_err());
    }
}
