//! Nerves, order complexes and integral homology.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::category::{assert_strict, CategoryGraph, MilgramPoset};
use super::QuasiCatError;

/// Default cap on the total number of simplices.
pub const DEFAULT_SIMPLEX_LIMIT: usize = 2_000_000;

/// A semi-simplicial set given by its nondegenerate simplices.
///
/// `simplices[d][s]` records what the simplex is built from (a chain of
/// morphism ids for a nerve, of element ids for an order complex).
/// `faces[d][s][i]` is the index in dimension `d - 1` of the `i`-th face.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SimplicialComplexData {
    pub simplices: Vec<Vec<Vec<usize>>>,
    pub faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplexData {
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().rposition(|s| !s.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Boundary matrix `C_d -> C_{d-1}` as sparse columns.
    pub fn boundary(&self, d: usize) -> Vec<Vec<(usize, i64)>> {
        if d == 0 || d >= self.faces.len() {
            return vec![Vec::new(); self.simplices.get(d).map_or(0, Vec::len)];
        }
        self.faces[d]
            .iter()
            .map(|fs| {
                let mut col: HashMap<usize, i64> = HashMap::new();
                for (i, &f) in fs.iter().enumerate() {
                    *col.entry(f).or_default() += if i % 2 == 0 { 1 } else { -1 };
                }
                let mut v: Vec<(usize, i64)> = col.into_iter().filter(|&(_, c)| c != 0).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Check `∂∂ = 0` in every degree.
    pub fn check_boundary_squared(&self) -> Result<(), QuasiCatError> {
        for d in 2..self.faces.len() {
            let lower = self.boundary(d - 1);
            for (s, col) in self.boundary(d).iter().enumerate() {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(f, c) in col {
                    for &(g, e) in &lower[f] {
                        *acc.entry(g).or_default() += c * e;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(QuasiCatError::InvariantBroken(format!("boundary squared nonzero on simplex {s} of dimension {d}")));
                }
            }
        }
        Ok(())
    }
}

/// Nerve of a strict category, up to dimension `max_dim`.
pub fn nerve(c: &CategoryGraph, max_dim: Option<usize>, limit: usize) -> Result<SimplicialComplexData, QuasiCatError> {
    assert_strict(c).map_err(|e| QuasiCatError::StrictnessRequired(Box::new(e)))?;
    let out = c.outgoing();
    let cap = max_dim.unwrap_or(usize::MAX);
    let mut cx = SimplicialComplexData {
        simplices: vec![(0..c.objects.len()).map(|x| vec![x]).collect()],
        faces: vec![vec![Vec::new(); c.objects.len()]],
    };
    let mut total = c.objects.len();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut prev: Vec<Vec<usize>> = Vec::new();
    let mut d = 1;
    while d <= cap {
        let cur: Vec<Vec<usize>> = if d == 1 {
            (0..c.morphisms.len()).filter(|&f| !c.is_identity(f)).map(|f| vec![f]).collect()
        } else {
            let mut v = Vec::new();
            for chain in &prev {
                let last = *chain.last().expect("nonempty");
                for &g in &out[c.morphisms[last].dst] {
                    let mut ext = chain.clone();
                    ext.push(g);
                    v.push(ext);
                }
            }
            v
        };
        if cur.is_empty() {
            break;
        }
        total += cur.len();
        if total > limit {
            return Err(QuasiCatError::ResourceLimit { what: "simplices", limit: limit as u64 });
        }
        let faces = cur
            .iter()
            .map(|chain| {
                if d == 1 {
                    let m = &c.morphisms[chain[0]];
                    return vec![m.dst, m.src];
                }
                (0..=d)
                    .map(|i| {
                        let face: Vec<usize> = if i == 0 {
                            chain[1..].to_vec()
                        } else if i == d {
                            chain[..d - 1].to_vec()
                        } else {
                            let mut f = chain[..i - 1].to_vec();
                            f.push(c.compose(chain[i - 1], chain[i]).expect("composable"));
                            f.extend_from_slice(&chain[i + 1..]);
                            f
                        };
                        index[&face]
                    })
                    .collect()
            })
            .collect();
        index = cur.iter().enumerate().map(|(i, ch)| (ch.clone(), i)).collect();
        cx.simplices.push(cur.clone());
        cx.faces.push(faces);
        prev = cur;
        d += 1;
    }
    Ok(cx)
}

/// Order complex of a poset: strict chains `x_0 > x_1 > ... > x_d`.
pub fn order_complex(j: &MilgramPoset, max_dim: Option<usize>, limit: usize) -> Result<SimplicialComplexData, QuasiCatError> {
    let cap = max_dim.unwrap_or(usize::MAX);
    let n = j.elements.len();
    let mut cx = SimplicialComplexData { simplices: vec![(0..n).map(|x| vec![x]).collect()], faces: vec![vec![Vec::new(); n]] };
    let mut index: HashMap<Vec<usize>, usize> = (0..n).map(|x| (vec![x], x)).collect();
    let mut prev: Vec<Vec<usize>> = cx.simplices[0].clone();
    let mut total = n;
    let mut d = 1;
    while d <= cap {
        let mut cur = Vec::new();
        for chain in &prev {
            for &y in &j.below[*chain.last().expect("nonempty")] {
                let mut ext = chain.clone();
                ext.push(y);
                cur.push(ext);
            }
        }
        if cur.is_empty() {
            break;
        }
        total += cur.len();
        if total > limit {
            return Err(QuasiCatError::ResourceLimit { what: "simplices", limit: limit as u64 });
        }
        let faces = cur
            .iter()
            .map(|chain| {
                (0..=d)
                    .map(|i| {
                        let mut f = chain.clone();
                        f.remove(i);
                        index[&f]
                    })
                    .collect()
            })
            .collect();
        index = cur.iter().enumerate().map(|(i, ch)| (ch.clone(), i)).collect();
        cx.simplices.push(cur.clone());
        cx.faces.push(faces);
        prev = cur;
        d += 1;
    }
    Ok(cx)
}

fn serialize_torsion<S: Serializer>(t: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for x in t {
        match x.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    pub fn with_torsion(rank: usize, torsion: &[u64]) -> Self {
        Self { rank, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    #[serde(rename = "H")]
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum()
    }
}

/// Integer matrix with arbitrary-precision entries, row-major.
pub type Matrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Smith normal form with unimodular `u`, `v` such that `u * m * v = d`.
pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    diagonalize(&mut a, Some((&mut u, &mut v)));
    SmithForm { d: a, u, v }
}

/// Nonzero invariant factors of an integer matrix.
pub fn invariant_factors(m: &Matrix) -> Vec<BigInt> {
    let mut a = m.clone();
    diagonalize(&mut a, None);
    (0..a.len().min(a.first().map_or(0, Vec::len))).map(|i| a[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

fn row_axpy(a: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(a: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(a: &mut Matrix, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn diagonalize(a: &mut Matrix, mut uv: Option<(&mut Matrix, &mut Matrix)>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(a, t, pj);
        if let Some((u, v)) = uv.as_mut() {
            u.swap(t, pi);
            swap_cols(v, t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_axpy(a, i, t, &q);
                    if let Some((u, _)) = uv.as_mut() {
                        row_axpy(u, i, t, &q);
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(a, j, t, &q);
                    if let Some((_, v)) = uv.as_mut() {
                        col_axpy(v, j, t, &q);
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    if let Some((u, _)) = uv.as_mut() {
                        u.swap(t, best.0);
                    }
                } else if best.1 != t {
                    swap_cols(a, t, best.1);
                    if let Some((_, v)) = uv.as_mut() {
                        swap_cols(v, t, best.1);
                    }
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(a, t, i, &minus_one);
                    if let Some((u, _)) = uv.as_mut() {
                        row_axpy(u, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            a[t].iter_mut().for_each(|x| *x = -&*x);
            if let Some((u, _)) = uv.as_mut() {
                u[t].iter_mut().for_each(|x| *x = -&*x);
            }
        }
        t += 1;
    }
}

fn dense(cols: &[Vec<(usize, i64)>], rows: usize) -> Matrix {
    let mut m = vec![vec![BigInt::zero(); cols.len()]; rows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, c) in col {
            m[i][j] = BigInt::from(c);
        }
    }
    m
}

/// Invariant factors of a sparse matrix given by columns.
///
/// Unit pivots are eliminated sparsely; the remainder goes through the dense
/// Smith form. Falls back to the dense form on any `i64` overflow.
fn boundary_factors(cols: &[Vec<(usize, i64)>], rows: usize) -> Vec<BigInt> {
    sparse_factors(cols, rows).unwrap_or_else(|| invariant_factors(&dense(cols, rows)))
}

fn sparse_factors(cols: &[Vec<(usize, i64)>], nrows: usize) -> Option<Vec<BigInt>> {
    // transpose into rows
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, c) in col {
            rows[i].push((j, c));
        }
    }
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); cols.len()];
    for (i, r) in rows.iter().enumerate() {
        for &(j, _) in r {
            col_rows[j].insert(i);
        }
    }
    let mut alive = vec![true; nrows];
    let mut units = 0usize;
    loop {
        // sparsest row holding a unit entry, then its sparsest unit column
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !alive[i] || r.is_empty() || best.is_some_and(|(_, _, w)| r.len() >= w) {
                continue;
            }
            let pick = r.iter().filter(|(_, c)| c.abs() == 1).min_by_key(|(j, _)| col_rows[*j].len());
            if let Some(&(j, _)) = pick {
                best = Some((i, j, r.len()));
            }
        }
        let Some((p, j, _)) = best else { break };
        let prow = std::mem::take(&mut rows[p]);
        alive[p] = false;
        let pc = prow.iter().find(|(c, _)| *c == j).expect("pivot").1;
        for &(c, _) in &prow {
            col_rows[c].remove(&p);
        }
        let targets: Vec<usize> = col_rows[j].iter().copied().collect();
        for r in targets {
            let rc = rows[r].iter().find(|(c, _)| *c == j).expect("entry").1;
            let q = rc.checked_mul(pc)?; // pc = +-1, so rc / pc = rc * pc
            let old = std::mem::take(&mut rows[r]);
            let mut merged = Vec::with_capacity(old.len() + prow.len());
            let (mut a, mut b) = (0, 0);
            while a < old.len() || b < prow.len() {
                let ca = old.get(a).map_or(usize::MAX, |x| x.0);
                let cb = prow.get(b).map_or(usize::MAX, |x| x.0);
                let (col, val) = if ca < cb {
                    a += 1;
                    (ca, old[a - 1].1)
                } else if cb < ca {
                    b += 1;
                    (cb, 0i64.checked_sub(q.checked_mul(prow[b - 1].1)?)?)
                } else {
                    a += 1;
                    b += 1;
                    (ca, old[a - 1].1.checked_sub(q.checked_mul(prow[b - 1].1)?)?)
                };
                if val != 0 {
                    merged.push((col, val));
                    col_rows[col].insert(r);
                } else {
                    col_rows[col].remove(&r);
                }
            }
            rows[r] = merged;
        }
        units += 1;
    }
    let live: Vec<usize> = (0..nrows).filter(|&i| alive[i] && !rows[i].is_empty()).collect();
    let mut used: Vec<usize> = live.iter().flat_map(|&i| rows[i].iter().map(|e| e.0)).collect();
    used.sort_unstable();
    used.dedup();
    let mut m = vec![vec![BigInt::zero(); used.len()]; live.len()];
    for (a, &i) in live.iter().enumerate() {
        for &(j, c) in &rows[i] {
            m[a][used.binary_search(&j).expect("used")] = BigInt::from(c);
        }
    }
    let mut factors = vec![BigInt::one(); units];
    factors.extend(invariant_factors(&m));
    Some(factors)
}

/// Integral homology in degrees `0..=max_degree` (all degrees when `None`).
///
/// Degree `d` needs simplices up to dimension `d + 1`; callers computing a
/// truncated complex must pass the matching `max_degree`.
pub fn homology(cx: &SimplicialComplexData, max_degree: Option<usize>) -> Result<HomologyResult, QuasiCatError> {
    let counts = cx.counts();
    let top = counts.len().saturating_sub(1);
    let last = max_degree.map_or(top, |m| m.min(top));
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); counts.len() + 1];
    for d in 1..=(last + 1).min(top) {
        factors[d] = boundary_factors(&cx.boundary(d), counts[d - 1]);
    }
    let groups: Vec<HomologyGroup> = (0..=last)
        .map(|d| {
            let rank_out = factors[d].len();
            let rank_in = factors[d + 1].len();
            let torsion = factors[d + 1].iter().filter(|x| !x.is_one()).cloned().collect();
            HomologyGroup { rank: counts[d] - rank_out - rank_in, torsion }
        })
        .collect();
    let result = HomologyResult { groups };
    if max_degree.is_none_or(|m| m >= top) && result.euler_characteristic() != cx.euler_characteristic() {
        return Err(QuasiCatError::InvariantBroken("Euler characteristic mismatch".into()));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasicat::category::{build_j, build_q};

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn snf_examples() {
        let m = mat(&[&[2, 4], &[6, 8]]);
        let f = smith_normal_form(&m);
        assert_eq!(f.d, mat(&[&[2, 0], &[0, 4]]));
        assert_eq!(mul(&mul(&f.u, &m), &f.v), f.d);
        assert_eq!(smith_normal_form(&mat(&[&[0]])).d, mat(&[&[0]]));
        let i = mat(&[&[1, 0], &[0, 1]]);
        assert_eq!(smith_normal_form(&i).d, i);
    }

    #[test]
    fn nerve_examples() {
        let c = nerve(&build_q(2, 2, 100).unwrap(), None, 1000).unwrap();
        assert_eq!(c.counts(), vec![2, 2]);
        let c = nerve(&build_q(3, 2, 100).unwrap(), None, 1000).unwrap();
        assert_eq!(c.counts(), vec![3, 6, 4]);
        assert_eq!(c.euler_characteristic(), 1);
        c.check_boundary_squared().unwrap();
        let h = homology(&c, None).unwrap();
        assert_eq!(
            h.groups,
            vec![HomologyGroup::free(1), HomologyGroup::with_torsion(0, &[2]), HomologyGroup::free(0)]
        );
    }

    #[test]
    fn order_complex_examples() {
        let c = order_complex(&build_j(2, 2, 100).unwrap(), None, 1000).unwrap();
        assert_eq!(c.counts(), vec![4, 4]);
        let c = order_complex(&build_j(3, 2, 100).unwrap(), None, 1000).unwrap();
        assert_eq!(c.euler_characteristic(), 2);
        let c = order_complex(&build_j(3, 1, 100).unwrap(), None, 1000).unwrap();
        assert_eq!(homology(&c, None).unwrap().groups, vec![HomologyGroup::free(1)]);
    }
}
