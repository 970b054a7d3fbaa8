use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::scalar::{rational_to_integer, rational_to_padic, Scalar, Summary};
use crate::dpops::{DPBasisMonomial, GradedLinearMap};
use crate::exactalg::{Matrix, PAdicScalar};
use crate::report::HomologyReport;
use crate::{Error, Result};

/// Where homology is computed: over `Z`, or over `Z/p^N` standing in for `Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomologyBase {
    Integers,
    PAdic { p: u64, precision: u32 },
}

impl HomologyBase {
    pub fn precision(&self) -> Option<u32> {
        match self {
            HomologyBase::Integers => None,
            HomologyBase::PAdic { precision, .. } => Some(*precision),
        }
    }
}

/// The fiber of `D: M → M[s]`; homology has `ker D` in the source degree `d`
/// and `coker D` in degree `d - 1`.
#[derive(Clone, Debug)]
pub struct TwoTermComplex {
    pub map: GradedLinearMap,
    pub base: HomologyBase,
}

/// `(degree, free rank, torsion orders)`.
pub(crate) type Row = (i64, usize, Vec<u64>);

fn convert<T: Scalar>(m: &Matrix<BigRational>, f: &dyn Fn(&BigRational) -> Result<T>, zero: &T) -> Result<Matrix<T>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Matrix::filled(m.rows(), m.cols(), zero.clone()));
    }
    let rows = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows, m.cols()))
}

fn summarize<T: Scalar>(m: &Matrix<T>, one: &T) -> Result<Summary> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Summary::default());
    }
    T::summarize(m, one)
}

fn degree_floor(map: &GradedLinearMap) -> i64 {
    let s = map.source.keys().next().copied().unwrap_or(0);
    let t = map.target.keys().next().map_or(s, |t| t - map.shift);
    s.min(t) - 1
}

pub(crate) fn two_term_rows<T: Scalar>(
    map: &GradedLinearMap,
    conv: &dyn Fn(&BigRational) -> Result<T>,
    one: &T,
    bound: i64,
) -> Result<Vec<Row>> {
    if map.covered < bound + 1 {
        return Err(Error::Precision(format!(
            "map known through degree {}, need {}",
            map.covered,
            bound + 1
        )));
    }
    let zero = one.zero_like();
    let block_summary = |d: i64| -> Result<(usize, usize, Summary)> {
        let cols = map.source_dim(d);
        let rows = map.target_dim(d + map.shift);
        match map.block(d) {
            Some(b) => Ok((cols, rows, summarize(&convert(b, conv, &zero)?, one)?)),
            None => Ok((cols, rows, Summary::default())),
        }
    };
    let mut out = Vec::new();
    for r in degree_floor(map)..=bound {
        let (cols, _, here) = block_summary(r)?;
        let (_, rows_up, up) = block_summary(r + 1)?;
        let free = (cols - here.rank) + (rows_up - up.rank);
        out.push((r, free, up.orders));
    }
    Ok(out)
}

pub(crate) fn fill(report: &mut HomologyReport, rows: Vec<Row>) {
    for (d, free, orders) in rows {
        report.push(d, free, &orders);
    }
}

/// Homology of a two-term fiber in every degree up to `bound`.
pub fn two_term_homology(c: &TwoTermComplex, bound: i64, builder: &str) -> Result<HomologyReport> {
    let mut report = HomologyReport::new(builder, c.base.precision());
    let rows = match c.base {
        HomologyBase::Integers => two_term_rows(&c.map, &rational_to_integer, &BigInt::from(1), bound)?,
        HomologyBase::PAdic { p, precision } => {
            let one = PAdicScalar::one(p, precision)?;
            two_term_rows(&c.map, &|x| rational_to_padic(x, p, precision), &one, bound)?
        }
    };
    fill(&mut report, rows);
    Ok(report)
}

/// Per source degree, `dim ker` of the map over the given base.
pub fn kernel_ranks(map: &GradedLinearMap, base: HomologyBase) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for (d, b) in &map.blocks {
        let s = match base {
            HomologyBase::Integers => {
                summarize(&convert(b, &rational_to_integer, &BigInt::from(0))?, &BigInt::from(1))?
            }
            HomologyBase::PAdic { p, precision } => {
                let one = PAdicScalar::one(p, precision)?;
                summarize(&convert(b, &|x| rational_to_padic(x, p, precision), &one.zero_like())?, &one)?
            }
        };
        out.insert(*d, b.cols() - s.rank);
    }
    Ok(out)
}

/// Commuting operators of a common degree shift on one graded module.
#[derive(Clone, Debug)]
pub struct OperatorFamily {
    pub basis: BTreeMap<i64, Vec<DPBasisMonomial>>,
    pub ops: Vec<GradedLinearMap>,
}

impl OperatorFamily {
    pub fn new(ops: Vec<GradedLinearMap>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidInput("need at least one operator".into()))?;
        let basis = first.source.clone();
        let shift = first.shift;
        for op in &ops {
            if op.source != basis || op.target != basis || op.shift != shift {
                return Err(Error::InvalidInput("operators must share basis and shift".into()));
            }
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                let ab = ops[i].compose(&ops[j])?;
                let ba = ops[j].compose(&ops[i])?;
                if ab.blocks != ba.blocks {
                    return Err(Error::InvalidInput(format!("operators {i} and {j} do not commute")));
                }
            }
        }
        Ok(OperatorFamily { basis, ops })
    }

    fn shift(&self) -> i64 {
        self.ops[0].shift
    }

    fn covered(&self) -> i64 {
        self.ops.iter().map(|o| o.covered).min().unwrap_or(i64::MIN)
    }

    fn dim(&self, e: i64) -> usize {
        self.basis.get(&e).map_or(0, |v| v.len())
    }

    fn reversed(&self) -> Self {
        OperatorFamily { basis: self.basis.clone(), ops: self.ops.iter().rev().cloned().collect() }
    }
}

/// Components of the Koszul total complex in total degree `r`: subsets `S`
/// of the operators with the internal degree `r + |S|(s + 1)`.
fn components(fam: &OperatorFamily, r: i64) -> Vec<(u32, i64)> {
    let n = fam.ops.len() as u32;
    let s = fam.shift();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let k = mask.count_ones() as i64;
        out.push((mask, r + k * (s + 1)));
    }
    out
}

fn differential<T: Scalar>(
    fam: &OperatorFamily,
    conv: &dyn Fn(usize, &BigRational) -> Result<T>,
    zero: &T,
    r: i64,
) -> Result<Matrix<T>> {
    let src = components(fam, r);
    let dst = components(fam, r - 1);
    let offsets = |comps: &[(u32, i64)]| {
        let mut acc = 0;
        comps
            .iter()
            .map(|&(m, e)| {
                let o = acc;
                acc += fam.dim(e);
                ((m, e), o)
            })
            .collect::<BTreeMap<_, _>>()
    };
    let (so, dto) = (offsets(&src), offsets(&dst));
    let cols: usize = src.iter().map(|&(_, e)| fam.dim(e)).sum();
    let rows: usize = dst.iter().map(|&(_, e)| fam.dim(e)).sum();
    let mut m = vec![vec![zero.clone(); cols]; rows];
    let s = fam.shift();
    for &(mask, e) in &src {
        if fam.dim(e) == 0 {
            continue;
        }
        for (i, op) in fam.ops.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let tdim = fam.dim(e + s);
            if tdim == 0 {
                continue;
            }
            if e > op.covered {
                return Err(Error::Precision(format!("operator {i} unknown in degree {e}")));
            }
            let block = op.block(e).ok_or_else(|| Error::Internal(format!("missing block {e}")))?;
            let negative = (mask & ((1 << i) - 1)).count_ones() % 2 == 1;
            let (c0, r0) = (so[&(mask, e)], dto[&(mask | (1 << i), e + s)]);
            for a in 0..block.rows() {
                for b in 0..block.cols() {
                    let v = conv(i, &block[(a, b)])?;
                    let v = if negative { v.negate() } else { v };
                    m[r0 + a][c0 + b] = m[r0 + a][c0 + b].plus(&v);
                }
            }
        }
    }
    if rows == 0 || cols == 0 {
        return Ok(Matrix::filled(rows, cols, zero.clone()));
    }
    Ok(Matrix::from_rows(m, cols))
}

pub(crate) fn koszul_rows<T: Scalar>(
    fam: &OperatorFamily,
    conv: &dyn Fn(usize, &BigRational) -> Result<T>,
    one: &T,
    lo: i64,
    hi: i64,
) -> Result<Vec<Row>> {
    let zero = one.zero_like();
    let n = fam.ops.len() as i64;
    let s = fam.shift();
    // Largest internal degree touched by the incoming differential at hi.
    let need = (0..n).map(|k| hi + 1 + k * (s + 1)).max().unwrap_or(hi);
    if need > fam.covered() {
        return Err(Error::Precision(format!(
            "operators known through degree {}, need {need}",
            fam.covered()
        )));
    }
    let mut out = Vec::new();
    for r in lo..=hi {
        let dim: usize = components(fam, r).iter().map(|&(_, e)| fam.dim(e)).sum();
        let d_out = summarize(&differential(fam, conv, &zero, r)?, one)?;
        let d_in = summarize(&differential(fam, conv, &zero, r + 1)?, one)?;
        out.push((r, dim - d_out.rank - d_in.rank, d_in.orders));
    }
    Ok(out)
}

/// Koszul rows computed in both operator orders; they must agree.
pub(crate) fn total_fiber_rows<T: Scalar>(
    fam: &OperatorFamily,
    conv: &dyn Fn(usize, &BigRational) -> Result<T>,
    one: &T,
    lo: i64,
    hi: i64,
) -> Result<Vec<Row>> {
    let rows = koszul_rows(fam, conv, one, lo, hi)?;
    let n = fam.ops.len();
    let flipped = |i: usize, x: &BigRational| conv(n - 1 - i, x);
    if koszul_rows(&fam.reversed(), &flipped, one, lo, hi)? != rows {
        return Err(Error::Internal("total fiber depends on operator order".into()));
    }
    Ok(rows)
}

pub(crate) fn rows_to_report(builder: &str, precision: Option<u32>, rows: Vec<Row>) -> HomologyReport {
    let mut report = HomologyReport::new(builder, precision);
    fill(&mut report, rows);
    report
}

/// Total fiber of commuting operators; degrees `lo..=hi` of the Koszul
/// total complex, where a `k`-fold fiber sits `k(s+1)` below its internal
/// degree. The result is recomputed with the operators reversed and must
/// agree.
pub fn cube_total_fiber(
    fam: &OperatorFamily,
    base: HomologyBase,
    lo: i64,
    hi: i64,
    builder: &str,
) -> Result<HomologyReport> {
    let rows = match base {
        HomologyBase::Integers => {
            total_fiber_rows(fam, &|_, x| rational_to_integer(x), &BigInt::from(1), lo, hi)?
        }
        HomologyBase::PAdic { p, precision } => {
            let one = PAdicScalar::one(p, precision)?;
            total_fiber_rows(fam, &|_, x| rational_to_padic(x, p, precision), &one, lo, hi)?
        }
    };
    Ok(rows_to_report(builder, base.precision(), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpops::{single, OperatorCube};

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Degree-0 endomorphism of `Z^k` given by a matrix.
    fn matrix_map(m: &[&[i64]]) -> GradedLinearMap {
        let k = m.len();
        let basis: BTreeMap<i64, Vec<DPBasisMonomial>> =
            [(0, (0..k as u64).map(|a| DPBasisMonomial::new(a, 0, 0)).collect())].into();
        GradedLinearMap::from_fn(basis.clone(), basis, 0, i64::MAX / 4, |x| {
            let mut e = crate::dpops::DpElement::new();
            for (i, row) in m.iter().enumerate() {
                if row[x.a as usize] != 0 {
                    e.insert(DPBasisMonomial::new(i as u64, 0, 0), r(row[x.a as usize]));
                }
            }
            e
        })
        .unwrap()
    }

    #[test]
    fn two_term_examples() {
        let z = |m| TwoTermComplex { map: matrix_map(m), base: HomologyBase::Integers };
        let rep = two_term_homology(&z(&[&[0]]), 0, "t").unwrap();
        assert_eq!((rep.at(0).free_rank, rep.at(-1).free_rank), (1, 1));
        let rep = two_term_homology(&z(&[&[6]]), 0, "t").unwrap();
        assert_eq!(rep.at(-1).torsion, vec![6]);
        assert!(rep.at(0).is_zero());
        let rep = two_term_homology(&z(&[&[2, 0], &[0, 0]]), 0, "t").unwrap();
        assert_eq!(rep.at(0).free_rank, 1);
        assert_eq!((rep.at(-1).free_rank, rep.at(-1).torsion.clone()), (1, vec![2]));
    }

    #[test]
    fn zero_cube_is_exterior() {
        let cube = OperatorCube::scalars(&[r(0), r(0), r(0)]).unwrap();
        let fam = OperatorFamily::new(cube.ops).unwrap();
        let rep = cube_total_fiber(&fam, HomologyBase::Integers, -3, 0, "t").unwrap();
        let ranks: Vec<usize> = (0..=3).map(|k| rep.at(-k).free_rank).collect();
        assert_eq!(ranks, vec![1, 3, 3, 1]);
    }

    #[test]
    fn single_operator_matches_two_term() {
        let map = matrix_map(&[&[4, 2], &[0, 6]]);
        let fam = OperatorFamily::new(vec![map.clone()]).unwrap();
        let a = cube_total_fiber(&fam, HomologyBase::Integers, -1, 0, "t").unwrap();
        let b = two_term_homology(&TwoTermComplex { map, base: HomologyBase::Integers }, 0, "t").unwrap();
        assert_eq!(a.degrees, b.degrees);
    }

    #[test]
    fn psi_scalars_total_fiber() {
        // O{3} at p = 2 with Ψ = (3, -3, -24): the unit 3 kills everything.
        let p = 2;
        let cube = OperatorCube::scalars(&[r(3), r(-3), r(-24)]).unwrap();
        let fam = OperatorFamily::new(cube.ops).unwrap();
        let rep = cube_total_fiber(&fam, HomologyBase::PAdic { p, precision: 10 }, -3, 0, "t").unwrap();
        assert!(rep.degrees.is_empty());
        // O{2}: Ψ = (2, -1, -2), so Ψ_1 is a unit too.
        let cube = OperatorCube::scalars(&[r(2), r(-1), r(-2)]).unwrap();
        let fam = OperatorFamily::new(cube.ops).unwrap();
        assert!(cube_total_fiber(&fam, HomologyBase::PAdic { p, precision: 10 }, -3, 0, "t").unwrap().degrees.is_empty());
        // O{4} over Z_2 with only Ψ_0 = 4 and Ψ_2: finite.
        let cube = OperatorCube::scalars(&[r(4), r(-12)]).unwrap();
        let fam = OperatorFamily::new(cube.ops).unwrap();
        let rep = cube_total_fiber(&fam, HomologyBase::PAdic { p, precision: 10 }, -2, 0, "t").unwrap();
        assert_eq!(rep.at(-1).torsion, vec![4]);
        assert_eq!(rep.at(-2).torsion, vec![4]);
        let _ = single(DPBasisMonomial::new(0, 0, 0), r(1));
    }
}
