//! Recovering Faber symbols from Faber-Hurwitz numbers by exact elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use super::{keys_for, string_dilaton, FaberKey, Provenance, SymbolLinear, SymbolTable};
use crate::combinat::{qi, Partition, Q};
use crate::degeneration::faber_hurwitz;
use crate::localization::TreeSeries;
use crate::pseries::TruncProfile;
use crate::{Error, Result};

/// Reduced row echelon form of an augmented system, computed fraction-free on integer rows.
pub struct Echelon {
    /// rows of the reduced system: (pivot column, coefficients over columns, rhs)
    pub rows: Vec<(usize, Vec<Q>, Q)>,
    pub ncols: usize,
    pub inconsistent: bool,
}

fn to_integer_row(row: &[Q], rhs: &Q) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for v in row.iter().chain(std::iter::once(rhs)) {
        l = l.lcm(v.denom());
    }
    let mut out: Vec<BigInt> = row.iter().chain(std::iter::once(rhs)).map(|v| (v * qi(l.clone())).to_integer()).collect();
    normalize(&mut out);
    out
}

fn normalize(r: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in r.iter() {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        for v in r.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Deterministic elimination: columns in order, pivot = first remaining row with a nonzero entry.
pub fn echelon(rows: &[(Vec<Q>, Q)], ncols: usize) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|(r, b)| to_integer_row(r, b)).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for c in 0..ncols {
        let Some(p) = (next..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(next, p);
        let prow = m[next].clone();
        for i in 0..m.len() {
            if i == next || m[i][c].is_zero() {
                continue;
            }
            let a = m[i][c].clone();
            let pc = &prow[c];
            for k in 0..=ncols {
                m[i][k] = &m[i][k] * pc - &a * &prow[k];
            }
            normalize(&mut m[i]);
        }
        pivots.push((next, c));
        next += 1;
    }
    let inconsistent = m[next..].iter().any(|r| !r[ncols].is_zero());
    let rows = pivots
        .into_iter()
        .map(|(i, c)| {
            let p = qi(m[i][c].clone());
            let coeffs: Vec<Q> = m[i][..ncols].iter().map(|v| qi(v.clone()) / &p).collect();
            (c, coeffs, qi(m[i][ncols].clone()) / &p)
        })
        .collect();
    Echelon { rows, ncols, inconsistent }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let piv: Vec<usize> = self.rows.iter().map(|r| r.0).collect();
        (0..self.ncols).filter(|c| !piv.contains(c)).collect()
    }

    /// A column is determined when its pivot row does not involve free columns.
    pub fn determined(&self, col: usize) -> bool {
        let free = self.free_columns();
        self.rows.iter().any(|(c, coeffs, _)| *c == col && free.iter().all(|&f| coeffs[f].is_zero()))
    }

    /// Particular solution with free columns set to the given values (default zero).
    pub fn solve(&self, free_values: &BTreeMap<usize, Q>) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.ncols];
        for (&c, v) in free_values {
            x[c] = v.clone();
        }
        for (c, coeffs, b) in &self.rows {
            let mut v = b.clone();
            for (k, a) in coeffs.iter().enumerate() {
                if k != *c && !a.is_zero() {
                    v -= a * &x[k];
                }
            }
            x[*c] = v;
        }
        x
    }
}

/// Outcome of a symbol solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub g: u32,
    pub table: SymbolTable,
    pub unknowns: Vec<FaberKey>,
    pub equations: Vec<Partition>,
    pub rank: usize,
    /// symbols left undetermined by the Faber-Hurwitz equations
    pub free: Vec<FaberKey>,
    /// undetermined symbols fixed afterwards by string/dilaton
    pub fixed_by_string_dilaton: Vec<FaberKey>,
}

/// Tree series profile that determines every symbol of genus g with up to n_max points.
pub fn solve_profile(g: u32, n_max: usize) -> TruncProfile {
    let z = (2 * g + u32::from(n_max >= 3)).max(6);
    TruncProfile {
        z_max: z,
        n_max: z,
        p_len_max: n_max as u32,
        u_min: -2 * z as i32 - 2,
        u_max: 2 * g as i32,
        ..Default::default()
    }
}

/// Build the tree series for `solve_profile` and solve.
pub fn solve_default(g: u32, n_max: usize) -> Result<(TreeSeries, SolveReport)> {
    let ts = crate::localization::solve_tree_series(&solve_profile(g, n_max))?;
    let rep = solve_symbols(g, n_max, &ts)?;
    Ok((ts, rep))
}

/// Unknowns: all symbols of genus g with 1..=n_max points. Equations: predicted F^g_alpha =
/// faber_hurwitz(g, alpha) for every alpha in the tree series profile with l(alpha) <= n_max.
pub fn solve_symbols(g: u32, n_max: usize, ts: &TreeSeries) -> Result<SolveReport> {
    if n_max == 0 || n_max > ts.profile.p_len_max as usize {
        return Err(Error::Domain(format!("n_max = {n_max} outside the tree series profile")));
    }
    let pred = ts.predicted_fh(g)?;
    let unknowns: Vec<FaberKey> = (1..=n_max).flat_map(|n| keys_for(g, n)).collect();
    let col: BTreeMap<&FaberKey, usize> = unknowns.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut rows = Vec::new();
    let mut equations = Vec::new();
    for (alpha, lin) in &pred {
        if alpha.len() > n_max {
            continue;
        }
        let mut row = vec![Q::zero(); unknowns.len()];
        for (k, v) in &lin.terms {
            match col.get(k) {
                Some(&c) => row[c] = v.clone(),
                None => return Err(Error::Linear(format!("symbol {k} outside the unknown set"))),
            }
        }
        rows.push((row, faber_hurwitz(g, alpha)?));
        equations.push(alpha.clone());
    }
    let ech = echelon(&rows, unknowns.len());
    if ech.inconsistent {
        return Err(Error::Linear(format!("genus {g}: predicted and degeneration values are inconsistent")));
    }
    let free_cols = ech.free_columns();
    let free: Vec<FaberKey> = free_cols.iter().map(|&c| unknowns[c].clone()).collect();

    // Undetermined symbols are pinned by string/dilaton where possible, processed by point count.
    let mut fixed = Vec::new();
    let mut extra: Vec<(Vec<Q>, Q)> = Vec::new();
    if !free.is_empty() {
        for (i, key) in unknowns.iter().enumerate() {
            if key.n() < 2 || !(key.a.contains(&0) || key.a.contains(&1)) {
                continue;
            }
            let lin = string_dilaton_linear(key);
            let mut row = vec![Q::zero(); unknowns.len()];
            row[i] += Q::one();
            for (k, v) in &lin.terms {
                if let Some(&c) = col.get(k) {
                    row[c] -= v;
                }
            }
            extra.push((row, Q::zero()));
        }
    }
    let table = if free.is_empty() {
        let x = ech.solve(&BTreeMap::new());
        build_table(&unknowns, &x, &[])
    } else {
        let mut all = rows.clone();
        all.extend(extra);
        let ech2 = echelon(&all, unknowns.len());
        if ech2.inconsistent {
            return Err(Error::Linear(format!("genus {g}: string/dilaton contradict the Faber-Hurwitz equations")));
        }
        for c in &free_cols {
            if ech2.determined(*c) {
                fixed.push(unknowns[*c].clone());
            }
        }
        let x = ech2.solve(&BTreeMap::new());
        build_table(&unknowns, &x, &fixed)
    };
    Ok(SolveReport { g, table, unknowns, equations, rank: ech.rank(), free, fixed_by_string_dilaton: fixed })
}

fn build_table(unknowns: &[FaberKey], x: &[Q], fixed: &[FaberKey]) -> SymbolTable {
    let mut t = SymbolTable::new();
    for (k, v) in unknowns.iter().zip(x) {
        let prov = if fixed.contains(k) { Provenance::StringDilaton } else { Provenance::Solved };
        t.insert(k.clone(), v.clone(), prov);
    }
    t
}

/// The string/dilaton right-hand side of a reducible key as a linear form.
pub fn string_dilaton_linear(key: &FaberKey) -> SymbolLinear {
    let mut probe = SymbolTable::new();
    let mut out = SymbolLinear::default();
    // evaluate against unit tables, one lower key at a time
    let lower: Vec<FaberKey> = if key.a.contains(&0) {
        let mut rest = key.a.clone();
        rest.remove(rest.iter().position(|&x| x == 0).unwrap());
        (0..rest.len())
            .filter(|&i| rest[i] > 0)
            .map(|i| {
                let mut b = rest.clone();
                b[i] -= 1;
                FaberKey::new(key.g, b, key.k)
            })
            .collect()
    } else {
        let mut rest = key.a.clone();
        rest.remove(rest.iter().position(|&x| x == 1).unwrap());
        vec![FaberKey::new(key.g, rest, key.k)]
    };
    for k in &lower {
        probe.insert(k.clone(), Q::zero(), Provenance::Solved);
    }
    for k in &lower {
        probe.insert(k.clone(), Q::one(), Provenance::Solved);
        if let Some(Ok(v)) = string_dilaton(key, &probe) {
            if !v.is_zero() {
                out.terms.insert(k.clone(), v);
            }
        }
        probe.insert(k.clone(), Q::zero(), Provenance::Solved);
    }
    out
}

