//! Phi_m and Psi_m for m <= 2 as t^(2g) coefficients (polynomials in y1..ym),
//! their closed forms, and the operators Delta_k with their inverses.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use super::{FaberKey, SymbolTable};
use crate::combinat::{binomial, dfo, factorial, ipow, qi, r_fab, weak_compositions, Partition, Q};
use crate::degeneration::faber_hurwitz;
use crate::localization::symmetrized::{t_lambda_xi, trunc_for};
use crate::pseries::{change_to_y_total, LinFactor, MultiSeries, RatFunc, Ring, TSeries};
use crate::{Error, Result};

/// Genus-indexed coefficients: g -> [t^(2g)].
pub type GenusSeries = BTreeMap<u32, MultiSeries>;

pub fn y_ring(m: usize) -> Ring {
    let ys: Vec<String> = (1..=m).map(|k| format!("y{k}")).collect();
    Ring::new(&ys)
}

fn y_names(m: usize) -> Vec<String> {
    (1..=m).map(|k| format!("y{k}")).collect()
}

fn check_m(m: usize) -> Result<()> {
    if (1..=2).contains(&m) {
        Ok(())
    } else {
        Err(Error::Domain(format!("Psi/Phi series are implemented for m <= 2, got {m}")))
    }
}

/// 4g + 3m - 5
pub fn faber_top_degree(g: u32, m: usize) -> i64 {
    4 * g as i64 + 3 * m as i64 - 5
}

fn total(mm: &[i32], m: usize) -> i64 {
    mm[..m].iter().map(|&e| e as i64).sum()
}

/// sum over ordered tuples a (a_i >= 1, |a| <= n) of F^g_a / r^Fab! x^a.
pub fn fh_symmetrized(g: u32, m: usize, n: usize) -> Result<MultiSeries> {
    let xs: Vec<String> = (1..=m).map(|k| format!("x{k}")).collect();
    let ring = Ring::new(&xs);
    let mut out = ring.zero();
    for s in m..=n {
        for c in weak_compositions((s - m) as u32, m) {
            let a: Vec<u32> = c.iter().map(|x| x + 1).collect();
            let alpha = Partition::new(a.clone())?;
            let f = faber_hurwitz(g, &alpha)? / qi(factorial(r_fab(&alpha) as u64));
            out.add_term(a.iter().map(|&x| x as i32).collect(), f);
        }
    }
    Ok(out)
}

/// T F^g_m: C applied to the symmetrized Faber-Hurwitz series, which must be a polynomial
/// of total degree at most 4g + 3m - 5; returns its top homogeneous part.
pub fn t_faber(g: u32, m: usize) -> Result<MultiSeries> {
    check_m(m)?;
    let top = faber_top_degree(g, m);
    let n = top as usize + 1;
    let f = fh_symmetrized(g, m, n)?;
    let xs: Vec<String> = (1..=m).map(|k| format!("x{k}")).collect();
    let ys = y_names(m);
    let xr: Vec<&str> = xs.iter().map(|s| s.as_str()).collect();
    let yr: Vec<&str> = ys.iter().map(|s| s.as_str()).collect();
    let c = change_to_y_total(&f, &xr, &yr, n)?;
    if c.terms().keys().any(|mm| total(mm, m) > top) {
        return Err(Error::Domain(format!("C F^{g}_{m} has terms above degree {top}")));
    }
    Ok(c.filter(|mm| total(mm, m) == top).rehome(&y_ring(m)))
}

/// Phi_m: g -> 2^(2g-1)/(2g-1)! T F^g_m.
pub fn build_phi(m: usize, g_max: u32) -> Result<GenusSeries> {
    let mut out = GenusSeries::new();
    for g in 1..=g_max {
        let c = Q::new(ipow(2, 2 * g - 1), factorial(2 * g as u64 - 1));
        out.insert(g, t_faber(g, m)?.scale(&c));
    }
    Ok(out)
}

/// Computed top parts T Lambda xi^(i)_m, each known through some power of u.
#[derive(Default)]
pub struct XiTops {
    tops: BTreeMap<(usize, u32), (i32, MultiSeries)>,
}

impl XiTops {
    /// Enough tops for Psi_1 through t^(2 g1) and Psi_2 through t^(2 g2).
    pub fn for_genera(g1: u32, g2: u32) -> Result<XiTops> {
        let mut x = XiTops::default();
        let need1 = g1.max(g2);
        for i in 0..need1 {
            // Psi_1 uses u^(2g-2) at i = g-1; Psi_2 products use u up to 2 g2 - 2
            let k = if i < g1 { 2 * g1 as i32 - 2 } else { 0 }.max(2 * g2 as i32 - 2);
            x.compute(1, i, k)?;
        }
        if g2 > 0 {
            x.compute(1, g2, 2 * g2 as i32 - 2)?;
        }
        for g in 1..=g2 {
            x.compute(2, g - 1, 2 * g as i32 - 3)?;
        }
        Ok(x)
    }

    /// Compute T Lambda xi^(i)_m through u^k.
    pub fn compute(&mut self, m: usize, i: u32, k: i32) -> Result<()> {
        if let Some((have, _)) = self.tops.get(&(m, i)) {
            if *have >= k {
                return Ok(());
            }
        }
        let t = t_lambda_xi(m, i, trunc_for(m, i, k + m as i32))?;
        self.tops.insert((m, i), (k, t));
        Ok(())
    }

    /// The u^k coefficient of T Lambda xi^(i)_m as a polynomial in y1..ym.
    pub fn get(&self, m: usize, i: u32, k: i32) -> Result<MultiSeries> {
        match self.tops.get(&(m, i)) {
            Some((have, t)) if *have >= k => Ok(t.coeff_of("u", k)?.restrict(&y_ring(m))),
            _ => Err(Error::Truncation(format!("T Lambda xi^({i})_{m} not computed through u^{k}"))),
        }
    }
}

fn rename_y1_y2(p: &MultiSeries, ring2: &Ring) -> MultiSeries {
    MultiSeries::from_terms(ring2, p.terms().iter().map(|(mm, c)| (vec![0, mm[0]], c.clone())))
}

fn lift_y1(p: &MultiSeries, ring2: &Ring) -> MultiSeries {
    MultiSeries::from_terms(ring2, p.terms().iter().map(|(mm, c)| (vec![mm[0], 0], c.clone())))
}

/// Psi_m: g -> 1/(2g-1)!! [u^(2g-1)] (-u)^m T Lambda zeta^g_m. Only lambda-free symbols
/// reach the top degree, so only k = 0 keys are read from the table.
pub fn build_psi(m: usize, g_max: u32, table: &SymbolTable, tops: &XiTops) -> Result<GenusSeries> {
    check_m(m)?;
    let mut out = GenusSeries::new();
    for g in 1..=g_max {
        let norm = qi(dfo(g as i64));
        let one = table.get(&FaberKey::new(g, vec![g - 1], 0))?;
        let val = if m == 1 {
            tops.get(1, g - 1, 2 * g as i32 - 2)?.scale(&-one)
        } else {
            let ring = y_ring(2);
            let target = 2 * g as i32 - 3;
            let mut acc = tops.get(2, g - 1, target)?.scale(&one);
            for a1 in 0..=g {
                let a2 = g - a1;
                let sym = table.get(&FaberKey::new(g, vec![a1, a2], 0))?;
                if sym.is_zero() {
                    continue;
                }
                for k1 in -1..=target + 1 {
                    let k2 = target - k1;
                    let p1 = lift_y1(&tops.get(1, a1, k1)?, &ring);
                    let p2 = rename_y1_y2(&tops.get(1, a2, k2)?, &ring);
                    acc = acc.add(&p1.mul(&p2).scale(&sym));
                }
            }
            acc
        };
        out.insert(g, val.filter(|mm| total(mm, m) == faber_top_degree(g, m)).scale(&(Q::one() / norm)));
    }
    Ok(out)
}

/// Genera at which two genus series differ.
pub fn mismatches(a: &GenusSeries, b: &GenusSeries) -> Vec<u32> {
    let zero = |s: &GenusSeries| s.values().next().map(|p| p.ring().zero());
    let z = zero(a).or_else(|| zero(b));
    let keys: std::collections::BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter()
        .filter(|g| {
            let x = a.get(g).cloned().or_else(|| z.clone()).unwrap();
            let y = b.get(g).cloned().or_else(|| z.clone()).unwrap();
            x != y
        })
        .collect()
}

/// Delta_k = sum_i y_i^k d/dy_i over all variables of the ring.
pub fn delta(f: &MultiSeries, k: i32) -> MultiSeries {
    let ring = f.ring();
    let mut out = ring.zero();
    for (mm, c) in f.terms() {
        for i in 0..mm.len() {
            if mm[i] != 0 {
                let mut n = mm.clone();
                n[i] += k - 1;
                out.add_term(n, c * Q::from_integer(mm[i].into()));
            }
        }
    }
    out
}

pub fn delta_series(s: &GenusSeries, k: i32) -> GenusSeries {
    s.iter().map(|(g, p)| (*g, delta(p, k))).collect()
}

fn positive_compositions(d: i64, m: usize) -> Vec<Vec<i32>> {
    if d < m as i64 {
        return vec![];
    }
    weak_compositions((d - m as i64) as u32, m).into_iter().map(|c| c.iter().map(|&x| x as i32 + 1).collect()).collect()
}

fn sorted_key(n: &[i32]) -> Vec<i32> {
    let mut s = n.to_vec();
    s.sort_unstable();
    s
}

/// Solve Delta_k A = f for A supported on monomials with all exponents >= 1.
/// Unknowns are fixed in increasing order of their sorted exponent vectors: the
/// coefficient of n + (k-1) e_i (i a largest exponent of n) involves only smaller unknowns.
pub fn invert_delta(f: &MultiSeries, k: i32) -> Result<MultiSeries> {
    if k < 2 {
        return Err(Error::Domain("invert_delta needs k >= 2".into()));
    }
    let ring = f.ring();
    let m = ring.nvars();
    let degrees: std::collections::BTreeSet<i64> = f.terms().keys().map(|mm| total(mm, m)).collect();
    let mut a: BTreeMap<Vec<i32>, Q> = BTreeMap::new();
    for d in degrees {
        let mut unknowns = positive_compositions(d - (k as i64 - 1), m);
        unknowns.sort_by_key(|n| sorted_key(n));
        for n in unknowns {
            let i = (0..m).max_by_key(|&j| (n[j], std::cmp::Reverse(j))).unwrap();
            let mut mu = n.clone();
            mu[i] += k - 1;
            let mut rhs = f.coeff(&mu);
            for j in 0..m {
                if j == i || n[j] < k {
                    continue;
                }
                let mut other = mu.clone();
                other[j] -= k - 1;
                if let Some(c) = a.get(&other) {
                    rhs -= c * Q::from_integer((n[j] - k + 1).into());
                }
            }
            let c = rhs / Q::from_integer(n[i].into());
            if !c.is_zero() {
                a.insert(n, c);
            }
        }
    }
    let out = MultiSeries::from_terms(ring, a);
    if delta(&out, k) != *f {
        return Err(Error::Domain(format!("not in the image of Delta_{k}")));
    }
    Ok(out)
}

/// Undo Delta_3 Delta_2 coefficientwise: Delta_2^(-1) Delta_3^(-1).
pub fn reconstruct_from_delta(s: &GenusSeries) -> Result<GenusSeries> {
    s.iter().map(|(g, p)| Ok((*g, invert_delta(&invert_delta(p, 3)?, 2)?))).collect()
}

fn genus_coeffs(s: &TSeries, ring: &Ring) -> Result<GenusSeries> {
    let polys = s.to_polys()?;
    if !polys[0].is_zero() {
        return Err(Error::Domain("series has a constant term".into()));
    }
    Ok(polys.iter().enumerate().filter(|(k, _)| k % 2 == 0 && *k > 0).map(|(k, p)| ((k / 2) as u32, p.rehome(ring))).collect())
}

fn b_power(ring: &Ring, t_max: usize, var: &str, a: Q) -> TSeries {
    let c = ring.mono_named(&[(var, 2)], Q::from_integer(4.into()));
    TSeries::binomial_power(ring, t_max, &c, &a)
}

/// Phi_1 from its one-part closed form: g -> 2^(2g-1)/(2g-1)! (4g-3)!! y^(4g-2)/(4g-2).
pub fn phi1_closed(g_max: u32) -> GenusSeries {
    let ring = y_ring(1);
    (1..=g_max)
        .map(|g| {
            let c = Q::new(ipow(2, 2 * g - 1), factorial(2 * g as u64 - 1)) * qi(dfo(2 * g as i64 - 1))
                / Q::from_integer((4 * g as i64 - 2).into());
            (g, ring.mono_named(&[("y1", 4 * g as i32 - 2)], c))
        })
        .collect()
}

/// y dPhi_1/dy = E t B^(-1), B = sqrt(1 - 4 y^2 t).
pub fn phi1_euler_closed(g_max: u32) -> Result<GenusSeries> {
    let ring = y_ring(1);
    let t_max = 2 * g_max as usize;
    let s = b_power(&ring, t_max, "y1", Q::new(1.into(), 2.into())).shift(1).even_t_part();
    genus_coeffs(&s, &ring)
}

/// Psi_2 = E sym( y1^3 y2 t/(y1-y2) - y1^4 y2^2 t/((y1-y2)(y1^2-y2^2+4y1^2y2^2 t)) ) B1^(-1).
pub fn psi2_closed(g_max: u32) -> Result<GenusSeries> {
    let ring = y_ring(2);
    let t_max = 2 * g_max as usize;
    let minus = LinFactor::canonical(0, 1, false).0;
    let plus = LinFactor::canonical(0, 1, true).0;
    let mut inner = TSeries::monomial(&ring, t_max, 1, RatFunc::over(ring.mono_named(&[("y1", 3), ("y2", 1)], Q::one()), 0, 1, false, 1));
    for k in 0..t_max {
        let c = -qi(ipow(-4, k as u32));
        let num = ring.mono_named(&[("y1", 4 + 2 * k as i32), ("y2", 2 + 2 * k as i32)], c);
        let den = BTreeMap::from([(minus, k as u32 + 2), (plus, k as u32 + 1)]);
        inner = inner.add(&TSeries::monomial(&ring, t_max, k + 1, RatFunc::new(num, den)));
    }
    let s = inner.mul(&b_power(&ring, t_max, "y1", Q::new(1.into(), 2.into())));
    genus_coeffs(&s.symmetrize_vars(&[0, 1]).even_t_part(), &ring)
}

/// Delta_3 Delta_2 Phi_2 = E sym( Delta_3[y1^4 y2/(y1-y2) t B1^(-1)] + 3 y1^5 y2 t B1^(-5) ).
pub fn rhs2_closed(g_max: u32) -> Result<GenusSeries> {
    let ring = y_ring(2);
    let t_max = 2 * g_max as usize;
    let r = RatFunc::over(ring.mono_named(&[("y1", 4), ("y2", 1)], Q::one()), 0, 1, false, 1);
    // Delta_3 acts on the whole product y1^4 y2/(y1-y2) t B1^(-1)
    let a = TSeries::constant(&ring, t_max, r)
        .shift(1)
        .mul(&b_power(&ring, t_max, "y1", Q::new(1.into(), 2.into())))
        .delta(3, &[0, 1]);
    let b = TSeries::constant(&ring, t_max, RatFunc::from_poly(ring.mono_named(&[("y1", 5), ("y2", 1)], Q::from_integer(3.into()))))
        .shift(1)
        .mul(&b_power(&ring, t_max, "y1", Q::new(5.into(), 2.into())));
    genus_coeffs(&a.add(&b).symmetrize_vars(&[0, 1]).even_t_part(), &ring)
}

/// Generator ratio from the closed forms: (2g-3)!! C(4g-3, 2g-1) / ((4g-3)!!/(4g-2)).
pub fn cg_ratio_formula(g: u32) -> Q {
    let g = g as i64;
    let lhs = qi(dfo(g - 1)) * qi(binomial(4 * g - 3, 2 * g - 1));
    let rhs = qi(dfo(2 * g - 1)) / Q::from_integer((4 * g - 2).into());
    lhs / rhs
}

/// The same ratio from computed series: [y^(4g-2)] of [u^(2g-1)](-u) T Lambda xi^(g-1)_1
/// over [y^(4g-2)] T F^g_1.
pub fn cg_ratio_computed(g: u32, tops: &XiTops) -> Result<Q> {
    let e = 4 * g as i32 - 2;
    let loc = -tops.get(1, g - 1, 2 * g as i32 - 2)?.coeff(&[e]);
    let deg = t_faber(g, 1)?.coeff(&[e]);
    if deg.is_zero() {
        return Err(Error::Domain(format!("T F^{g}_1 has no top coefficient")));
    }
    Ok(loc / deg)
}

/// Shape of the equations for the n-part positive symbols in genus g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonsingReport {
    pub equations: usize,
    pub unknowns: usize,
    pub block: usize,
    pub triangular: bool,
}

/// Coefficient of y^i in the n-part term of Psi_n for the symbol with indices a.
pub fn linthr_entry(g: u32, i: &[i32], a: &[i32]) -> Q {
    let mut c = Q::one();
    for (&ij, &aj) in i.iter().zip(a) {
        if ij < 2 * aj + 1 {
            return Q::zero();
        }
        c *= qi(dfo(aj as i64)) * qi(binomial(ij as i64 - 1, (ij - 2 * aj - 1) as i64));
    }
    c / qi(dfo(g as i64))
}

/// Builds the coefficient matrix of the n-part positive symbols and checks that the rows with
/// i_1..i_(n-1) odd, >= 3 and summing to at most 2g - 7 + 3n form a square lower-triangular
/// block with nonzero diagonal when rows and columns are taken in lexicographic order.
pub fn nonsing_check(g: u32, n: usize) -> NonsingReport {
    let row_total = faber_top_degree(g, n);
    let rows: Vec<Vec<i32>> = positive_compositions(row_total - 2 * n as i64, n)
        .into_iter()
        .map(|r| r.iter().map(|x| x + 2).collect())
        .collect();
    let mut cols = positive_compositions(g as i64 - 2 + n as i64, n);
    cols.sort();
    let bound = 2 * g as i64 - 7 + 3 * n as i64;
    let mut block: Vec<Vec<i32>> = rows
        .iter()
        .filter(|r| r[..n - 1].iter().all(|&x| x >= 3 && x % 2 == 1) && r[..n - 1].iter().map(|&x| x as i64).sum::<i64>() <= bound)
        .cloned()
        .collect();
    block.sort();
    let mut triangular = block.len() == cols.len();
    if triangular {
        for (r, row) in block.iter().enumerate() {
            for (c, col) in cols.iter().enumerate() {
                let e = linthr_entry(g, row, col);
                if (c > r && !e.is_zero()) || (c == r && e.is_zero()) {
                    triangular = false;
                }
            }
        }
    }
    NonsingReport { equations: rows.len(), unknowns: cols.len(), block: block.len(), triangular }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::qf;

    #[test]
    fn phi1_low_terms() {
        let phi = build_phi(1, 2).unwrap();
        let r = y_ring(1);
        assert_eq!(phi[&1], r.mono_named(&[("y1", 2)], Q::one()));
        assert_eq!(phi[&2], r.mono_named(&[("y1", 6)], qf(10, 3)));
        assert!(mismatches(&phi, &phi1_closed(2)).is_empty());
    }

    #[test]
    fn phi1_euler_form() {
        let phi = build_phi(1, 3).unwrap();
        let lhs: GenusSeries = phi.iter().map(|(g, p)| (*g, p.euler("y1").unwrap())).collect();
        assert!(mismatches(&lhs, &phi1_euler_closed(3).unwrap()).is_empty());
    }

    #[test]
    fn delta_inverse_roundtrip() {
        let r = y_ring(2);
        let a = r.mono_named(&[("y1", 3), ("y2", 1)], Q::one()).add(&r.mono_named(&[("y1", 2), ("y2", 2)], qf(-5, 7)));
        for k in 2..=3 {
            assert_eq!(invert_delta(&delta(&a, k), k).unwrap(), a);
        }
        // y1 alone: Delta_2 y1 = y1^2 has no preimage with positive exponents in both variables
        assert!(invert_delta(&r.mono_named(&[("y1", 2)], Q::one()), 2).is_err());
    }

    #[test]
    fn cg_ratio_formula_values() {
        for g in 1..=5 {
            assert_eq!(cg_ratio_formula(g), super::super::generator_ratio(g));
        }
        assert_eq!(cg_ratio_formula(1), Q::from_integer(2.into()));
    }

    #[test]
    fn nonsing_shapes() {
        for g in 2..=5 {
            for n in 2..=3 {
                let rep = nonsing_check(g, n);
                assert_eq!(rep.equations as i64, crate::combinat::to_i64(&qi(binomial(4 * g as i64 - 6 + n as i64, n as i64 - 1))).unwrap());
                assert_eq!(rep.unknowns as i64, crate::combinat::to_i64(&qi(binomial(g as i64 - 3 + n as i64, n as i64 - 1))).unwrap());
                assert!(rep.triangular, "g={g} n={n}");
            }
        }
    }

    #[test]
    fn closed_forms_are_polynomial() {
        let p = psi2_closed(2).unwrap();
        assert_eq!(p.len(), 2);
        let r = rhs2_closed(2).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn psi_phi_small() {
        let table = super::super::conjectured_table(3, 2).unwrap();
        let tops = XiTops::for_genera(3, 2).unwrap();
        let p1 = build_psi(1, 3, &table, &tops).unwrap();
        assert_eq!(mismatches(&p1, &build_phi(1, 3).unwrap()), Vec::<u32>::new());
        let p2 = build_psi(2, 2, &table, &tops).unwrap();
        let f2 = build_phi(2, 2).unwrap();
        assert_eq!(mismatches(&p2, &f2), Vec::<u32>::new());
        assert_eq!(mismatches(&p2, &psi2_closed(2).unwrap()), Vec::<u32>::new());
        let d = delta_series(&delta_series(&f2, 2), 3);
        assert_eq!(mismatches(&d, &rhs2_closed(2).unwrap()), Vec::<u32>::new());
        let back = reconstruct_from_delta(&rhs2_closed(2).unwrap()).unwrap();
        assert_eq!(mismatches(&back, &f2), Vec::<u32>::new());
    }
}
