//! Identities used by the symmetrized route, checked on truncated series.

use num_traits::One;

use super::symmetrized::{big_m, big_v, eval_poly, mu_of_q, q_ring, symmetrized_double_hurwitz, tree_coeff, v_of_q, SymTrunc};
use crate::combinat::{binomial, dfo, qi, Q};
use crate::pseries::{change_to_y_total, div_diff, MultiSeries, Ring, TSeries};
use crate::suites::Check;
use crate::Result;

fn geometric(ring: &Ring, x: &MultiSeries, k_max: i32) -> MultiSeries {
    let mut s = ring.zero();
    let mut p = ring.one();
    for _ in 0..=k_max {
        s = s.add(&p);
        p = p.mul(x);
    }
    s
}

/// w = x e^w has coefficients n^(n-1)/n!, and 1/(1-w) has n^n/n!.
pub fn check_tree_coefficients(n_max: usize) -> Result<Check> {
    let mut c = Check::new("tree coefficients");
    let ring = Ring::new(&["x"]).cap_var("x", n_max as i64);
    let x = ring.var("x");
    let mut w = x.clone();
    for _ in 0..=n_max {
        w = x.mul(&w.exp()?);
    }
    let y = ring.one().sub(&w).inv()?;
    for n in 1..=n_max {
        let m = [n as i32];
        c.compare_q(format!("w x^{n}"), &w.coeff(&m), &tree_coeff(n, -1));
        c.compare_q(format!("y x^{n}"), &y.coeff(&m), &tree_coeff(n, 0));
    }
    c.compare_q("y x^0", &y.coeff(&[0]), &Q::one());
    Ok(c)
}

/// (y^3/(1-uy) d/dy)^i y/(1-uy) = (2i-1)!! (y/(1-uy))^(2i+1), through u^u_max.
pub fn check_diff_y_ratio(i_max: u32, u_max: i32) -> Result<Check> {
    let mut c = Check::new("y-ratio derivatives");
    let ring = Ring::new(&["y", "u"]).cap_var("u", u_max as i64);
    let y = ring.var("y");
    let geo = geometric(&ring, &ring.var("u").mul(&y), u_max);
    let ratio = y.mul(&geo);
    let op_coeff = y.pow(3).mul(&geo);
    let mut cur = ratio.clone();
    for i in 1..=i_max {
        cur = op_coeff.mul(&cur.derive("y")?);
        let rhs = ratio.pow(2 * i + 1).scale(&qi(dfo(i as i64)));
        c.compare(format!("i = {i}"), &cur, &rhs);
    }
    Ok(c)
}

/// sum 1/(j+k) j^(j+1)/j! a^j k^k/k! b^k = b/(b-a) - y(a)^2 (y(b)-1)/(y(b)-y(a)),
/// compared after multiplying by (b-a)(y(b)-y(a)), through degree `deg` of the left side.
pub fn check_inverse_identity(deg: usize) -> Result<Check> {
    let mut c = Check::new("two-variable tree identity");
    let n = deg + 2;
    let ring = Ring::new(&["a", "b"]).cap_weighted(&[("a", 1), ("b", 1)], n as i64);
    let mut lhs = ring.zero();
    for j in 1..deg {
        for k in 1..=(deg - j) {
            let coef = tree_coeff(j, 1) * tree_coeff(k, 0) / Q::from_integer(((j + k) as i64).into());
            lhs.add_term(vec![j as i32, k as i32], coef);
        }
    }
    let (a, b) = (ring.var("a"), ring.var("b"));
    let ya = eval_poly(|j| tree_coeff(j, 0), &a, n).add(&ring.one());
    let yb = eval_poly(|j| tree_coeff(j, 0), &b, n).add(&ring.one());
    let left = lhs.mul(&b.sub(&a)).mul(&yb.sub(&ya));
    let right = b.mul(&yb.sub(&ya)).sub(&ya.mul(&ya).mul(&yb.sub(&ring.one())).mul(&b.sub(&a)));
    c.compare(format!("through degree {deg}"), &left, &right);
    // the same identity after exact division by (b - a)
    let q = div_diff(&right, "b", "a")?;
    c.compare("divided form", &lhs.mul(&yb.sub(&ya)).filter(|m| ((m[0] + m[1]) as usize) < n), &q.filter(|m| ((m[0] + m[1]) as usize) < n));
    Ok(c)
}

/// C y(V) = (1-u) y/(1-uy) and C mu = (1-uy)/(1-u), through u^u_max.
pub fn check_v_change(u_max: i32) -> Result<Check> {
    let mut c = Check::new("change of variables on V");
    let n = u_max as usize + 3;
    let tr = SymTrunc { n, u_max };
    let v = big_v(tr)?;
    let ring = v.ring().clone();
    let yv = eval_poly(|j| tree_coeff(j, 0), &v, n).add(&ring.one());
    let mu = big_m(&v, n)?;
    let yr = Ring::new(&["y1", "u"]);
    let keep = |s: &MultiSeries| s.filter(|m| m[1] <= u_max);
    let cy = keep(&change_to_y_total(&yv, &["x1"], &["y1"], n)?);
    let cm = keep(&change_to_y_total(&mu, &["x1"], &["y1"], n)?);
    let cap = yr.cap_var("u", u_max as i64);
    let (y, u) = (cap.var("y1"), cap.var("u"));
    let geo_u = geometric(&cap, &u, u_max);
    let want_y = cap.one().sub(&u).mul(&y).mul(&geometric(&cap, &u.mul(&y), u_max));
    let want_m = cap.one().sub(&u.mul(&y)).mul(&geo_u);
    c.compare("C y(V)", &cy.rehome(&cap), &want_y);
    c.compare("C mu", &cm.rehome(&cap), &want_m);
    Ok(c)
}

/// All k-tuples with entries in 1..=n.
fn tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (1..=n).map(move |j| [t.clone(), vec![j]].concat())).collect();
    }
    out
}

/// dH_1/dq_j = (u/j) v^j and d^k H_1/dq_{j_k}..dq_{j_1} = u^k (x d/dx)^(k-2) (mu v^(j_1+..+j_k)),
/// plus dH_2/dq_j = sym u v1^j mu1 v2/(v1-v2).
pub fn check_h_derivatives(n: usize, nq: usize, u_max: i32, k_max: usize) -> Result<Check> {
    let mut c = Check::new("q-derivatives of genus 0 series");
    let h1 = symmetrized_double_hurwitz(1, n, nq, u_max)?;
    let ring = h1.ring().clone();
    let v = v_of_q(&ring, "x1", n)?;
    let mu = mu_of_q(&v)?;
    let u = ring.var("u");
    for j in 1..=nq {
        let lhs = h1.derive(&format!("q{j}"))?;
        let rhs = u.mul(&v.pow(j as u32)).scale(&Q::new(1.into(), (j as i64).into()));
        c.compare(format!("first derivative q{j}"), &lhs, &rhs);
    }
    for k in 2..=k_max {
        for js in tuples(k, nq) {
            let mut lhs = h1.clone();
            for j in &js {
                lhs = lhs.derive(&format!("q{j}"))?;
            }
            let total: usize = js.iter().sum();
            let mut rhs = mu.mul(&v.pow(total as u32));
            for _ in 0..k - 2 {
                rhs = rhs.euler("x1")?;
            }
            rhs = rhs.mul(&u.pow(k as u32));
            c.compare(format!("derivative {js:?}"), &lhs, &rhs);
        }
    }
    let h2 = symmetrized_double_hurwitz(2, n, nq, u_max)?;
    let big = q_ring(2, n + 1, nq, u_max);
    let v1 = v_of_q(&big, "x1", n)?;
    let v2 = v_of_q(&big, "x2", n)?;
    let (m1, m2) = (mu_of_q(&v1)?, mu_of_q(&v2)?);
    let d = div_diff(&v1.sub(&v2), "x1", "x2")?.inv()?;
    let ub = big.var("u");
    for j in 1..=nq {
        let num = v1.pow(j as u32).mul(&m1).mul(&v2).sub(&v2.pow(j as u32).mul(&m2).mul(&v1));
        let rhs = ub.mul(&div_diff(&num, "x1", "x2")?).mul(&d).rehome(h2.ring());
        c.compare(format!("two-point derivative q{j}"), &h2.derive(&format!("q{j}"))?, &rhs);
    }
    Ok(c)
}

/// sum_g t^(2g) [u^(2g-1)] u^k Y(u)^(2g-1) = 1/2 E t (1 + B^(-1)) A^k, for k <= k_max through t^(2 g_max).
pub fn check_lagrange_y(k_max: u32, g_max: u32) -> Result<Check> {
    let mut c = Check::new("Lagrange form in Y(u)");
    let t_max = 2 * g_max as usize;
    let ring = Ring::new(&["y1"]);
    let four_y2 = ring.mono_named(&[("y1", 2)], Q::from_integer(4.into()));
    let b = TSeries::binomial_power(&ring, t_max, &four_y2, &Q::new((-1).into(), 2.into()));
    let binv = TSeries::binomial_power(&ring, t_max, &four_y2, &Q::new(1.into(), 2.into()));
    // A = (1 - B)/(2y)
    let half_over_y = ring.mono_named(&[("y1", -1)], Q::new(1.into(), 2.into()));
    let one = TSeries::constant(&ring, t_max, crate::pseries::RatFunc::from_poly(ring.one()));
    let a = one.sub(&b).mul_poly(&half_over_y);
    let pre = one.add(&binv).shift(1).scale(&Q::new(1.into(), 2.into()));
    let uring = Ring::new(&["y1", "u"]);
    for k in 0..=k_max {
        let mut ak = one.clone();
        for _ in 0..k {
            ak = ak.mul(&a);
        }
        let rhs = pre.mul(&ak).even_t_part().to_polys()?;
        for g in 1..=g_max {
            let e = 2 * g as i32 - 1;
            let cap = uring.cap_var("u", e as i64);
            let (y, u) = (cap.var("y1"), cap.var("u"));
            let big_y = y.mul(&geometric(&cap, &u.mul(&y), e));
            let lhs = u.pow(k).mul(&big_y.pow(e as u32)).coeff_of("u", e)?.restrict(&ring);
            c.compare(format!("k = {k}, t^{}", 2 * g), &lhs, &rhs[2 * g as usize]);
            // closed form of the left side
            let closed = if e - k as i32 >= 0 {
                ring.mono_named(&[("y1", 4 * g as i32 - 2 - k as i32)], qi(binomial(4 * g as i64 - 3 - k as i64, e as i64 - k as i64)))
            } else {
                ring.zero()
            };
            c.compare(format!("k = {k}, t^{} closed", 2 * g), &lhs, &closed);
        }
    }
    Ok(c)
}

/// The full appendix suite at its default sizes.
pub fn appendix_suite() -> Result<Vec<Check>> {
    Ok(vec![
        check_tree_coefficients(10)?,
        check_diff_y_ratio(4, 8)?,
        check_inverse_identity(6)?,
        check_v_change(6)?,
        check_h_derivatives(5, 3, 4, 3)?,
        check_lagrange_y(3, 4)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass() {
        for c in appendix_suite().unwrap() {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
    }

    #[test]
    fn a_wrong_identity_is_caught() {
        let ring = Ring::new(&["y"]);
        let mut c = Check::new("x");
        c.compare("bad", &ring.one(), &ring.var("y"));
        assert!(!c.passed());
    }
}
