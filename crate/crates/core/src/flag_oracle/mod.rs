//! Brute-force point counts of open Richardson varieties in type A.
//!
//! A complete flag in `F_q^n` is stored as an `n x n` matrix whose first `i`
//! rows span the `i`-th subspace. Row `k` is the unique vector of its line
//! modulo the previous subspace that vanishes on the earlier rows' pivot
//! columns and has leading entry 1, which makes the form canonical.
//!
//! The open Richardson variety for `y ≤ y'` is the set of flags `F` with
//! `pos(std, F) = y'` and `pos(opp, F) · w0 = y`, where `std` is spanned by
//! leading and `opp` by trailing coordinate vectors.

mod field;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

pub use field::{prime_power, FiniteField, MAX_FIELD};

use crate::coxeter::{CoxeterSystem, Element, Family};
use crate::error::OracleError;
use crate::hecke::HeckeAlgebra;

/// Whether the desk-scale limits `n ≤ 4`, `q ∈ {2, 3, 4, 5}` apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guard {
    On,
    Off,
}

impl Guard {
    /// `Off` when `KLR_GUARD_OFF=1`.
    pub fn from_env() -> Self {
        match std::env::var("KLR_GUARD_OFF") {
            Ok(v) if v == "1" => Guard::Off,
            _ => Guard::On,
        }
    }

    fn check(self, n: usize, q: u64) -> Result<(), OracleError> {
        if self == Guard::On && (n > 4 || ![2, 3, 4, 5].contains(&q)) {
            return Err(OracleError::Guard { n, q });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlagPoint {
    rows: Vec<Vec<u8>>,
}

impl FlagPoint {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// The flag of spans of leading coordinate vectors.
    pub fn standard(n: usize) -> Self {
        Self { rows: (0..n).map(|i| unit(n, i)).collect() }
    }

    /// The flag of spans of trailing coordinate vectors.
    pub fn opposite(n: usize) -> Self {
        Self { rows: (0..n).rev().map(|i| unit(n, i)).collect() }
    }

    /// Canonical form of the flag spanned by the prefixes of `basis`, or
    /// `None` if the rows are dependent.
    pub fn from_basis(field: &FiniteField, basis: &[Vec<u8>]) -> Option<Self> {
        let n = basis.len();
        let mut rows: Vec<Vec<u8>> = Vec::with_capacity(n);
        let mut pivots: Vec<usize> = Vec::with_capacity(n);
        for b in basis {
            let mut v = b.clone();
            // Clear earlier pivot columns, earliest row first; later rows
            // already vanish on earlier pivots.
            for (row, &p) in rows.iter().zip(&pivots) {
                let c = v[p];
                if c != 0 {
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = field.sub(*x, field.mul(c, r));
                    }
                }
            }
            let lead = v.iter().position(|&x| x != 0)?;
            let s = field.inv(v[lead]);
            v.iter_mut().for_each(|x| *x = field.mul(*x, s));
            pivots.push(lead);
            rows.push(v);
        }
        Some(Self { rows })
    }
}

fn unit(n: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn pivot(row: &[u8]) -> usize {
    row.iter().position(|&x| x != 0).expect("flag rows are nonzero")
}

/// Canonical next rows: zero on `pivots`, leading entry 1.
fn candidates(field: &FiniteField, n: usize, pivots: &[usize]) -> Vec<Vec<u8>> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let q = field.order();
    let mut out = Vec::new();
    for (k, &lead) in free.iter().enumerate() {
        let tail = &free[k + 1..];
        for code in 0..q.pow(tail.len() as u32) {
            let mut v = vec![0u8; n];
            v[lead] = 1;
            let mut c = code;
            for &t in tail {
                v[t] = (c % q) as u8;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

struct Frame {
    candidates: Vec<Vec<u8>>,
    next: usize,
}

/// Streams every complete flag of `F_q^n` exactly once.
pub struct FlagIter<'a> {
    field: &'a FiniteField,
    n: usize,
    frames: Vec<Frame>,
    rows: Vec<Vec<u8>>,
}

impl<'a> FlagIter<'a> {
    fn with_roots(field: &'a FiniteField, n: usize, roots: Vec<Vec<u8>>) -> Self {
        Self { field, n, frames: vec![Frame { candidates: roots, next: 0 }], rows: Vec::new() }
    }
}

impl Iterator for FlagIter<'_> {
    type Item = FlagPoint;

    fn next(&mut self) -> Option<FlagPoint> {
        loop {
            let top = self.frames.last_mut()?;
            if top.next == top.candidates.len() {
                self.frames.pop();
                self.rows.pop();
                continue;
            }
            let row = top.candidates[top.next].clone();
            top.next += 1;
            self.rows.push(row);
            if self.rows.len() == self.n {
                let flag = FlagPoint { rows: self.rows.clone() };
                self.rows.pop();
                return Some(flag);
            }
            let pivots: Vec<usize> = self.rows.iter().map(|r| pivot(r)).collect();
            self.frames.push(Frame { candidates: candidates(self.field, self.n, &pivots), next: 0 });
        }
    }
}

pub fn enumerate_flags(field: &FiniteField, n: usize, guard: Guard) -> Result<FlagIter<'_>, OracleError> {
    if n == 0 {
        return Err(OracleError::BadDimension(n));
    }
    guard.check(n, field.order() as u64)?;
    Ok(FlagIter::with_roots(field, n, candidates(field, n, &[])))
}

/// The possible first lines; enumeration can be sharded over these.
pub fn first_lines(field: &FiniteField, n: usize) -> Vec<Vec<u8>> {
    candidates(field, n, &[])
}

/// Flags whose first line is `line` (a canonical vector from [`first_lines`]).
pub fn flags_through(field: &FiniteField, n: usize, line: Vec<u8>) -> FlagIter<'_> {
    FlagIter::with_roots(field, n, vec![line])
}

/// One-line notation `w` of the relative position of two flags:
/// `w(i) = j` iff `d_{ij} - d_{i-1,j} - d_{i,j-1} + d_{i-1,j-1} = 1` with
/// `d_{ij} = dim(E_i ∩ F_j)`. Values are 0-based.
pub fn relative_permutation(field: &FiniteField, e: &FlagPoint, f: &FlagPoint) -> Result<Vec<usize>, OracleError> {
    let n = e.dim();
    if f.dim() != n {
        return Err(OracleError::DimensionMismatch(n, f.dim()));
    }
    let mut d = vec![vec![0usize; n + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            let span: Vec<&[u8]> =
                e.rows[..i].iter().chain(&f.rows[..j]).map(Vec::as_slice).collect();
            d[i][j] = i + j - field.rank(&span);
        }
    }
    let mut w = vec![usize::MAX; n];
    for i in 1..=n {
        for j in 1..=n {
            if d[i][j] + d[i - 1][j - 1] == d[i - 1][j] + d[i][j - 1] + 1 {
                w[i - 1] = j - 1;
            }
        }
    }
    Ok(w)
}

/// Element of `A_{n-1}` for a permutation in one-line notation, with `s_i`
/// the transposition of positions `i` and `i + 1`.
pub fn permutation_to_element(sys: &CoxeterSystem, perm: &[usize]) -> Result<Element, OracleError> {
    check_type_a(sys, perm.len())?;
    let mut w = perm.to_vec();
    let mut letters = Vec::new();
    while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
        w.swap(i, i + 1);
        letters.push(i);
    }
    letters.reverse();
    Ok(sys.from_word(&letters)?)
}

/// One-line notation of an element of `A_{n-1}`.
pub fn element_to_permutation(x: &Element) -> Vec<usize> {
    let n = x.system().rank() + 1;
    let mut w: Vec<usize> = (0..n).collect();
    for &s in x.word() {
        w.swap(s as usize, s as usize + 1);
    }
    w
}

fn check_type_a(sys: &CoxeterSystem, n: usize) -> Result<(), OracleError> {
    let c = sys.cartan();
    if c.family() != Family::A || c.rank() + 1 != n {
        return Err(OracleError::DimensionMismatch(c.rank() + 1, n));
    }
    Ok(())
}

/// Relative position of `f` with respect to `e` as an element of `A_{n-1}`.
pub fn relative_position(
    sys: &CoxeterSystem,
    field: &FiniteField,
    e: &FlagPoint,
    f: &FlagPoint,
) -> Result<Element, OracleError> {
    permutation_to_element(sys, &relative_permutation(field, e, f)?)
}

/// Stratum `(y, y')` of a flag: `y' = pos(std, F)`, `y = pos(opp, F) · w0`.
pub fn stratum(sys: &CoxeterSystem, field: &FiniteField, f: &FlagPoint) -> Result<(Element, Element), OracleError> {
    let n = f.dim();
    let yp = relative_position(sys, field, &FlagPoint::standard(n), f)?;
    let opp = relative_position(sys, field, &FlagPoint::opposite(n), f)?;
    let y = sys.multiply(&opp, &sys.longest_element())?;
    Ok((y, yp))
}

/// Number of flags in each open Richardson stratum, keyed by `(y, y')`.
/// Work is sharded over first lines when `jobs > 1`; counts are summed.
pub fn stratum_counts(
    sys: &CoxeterSystem,
    q: u64,
    jobs: usize,
    guard: Guard,
) -> Result<BTreeMap<(Element, Element), u64>, OracleError> {
    let n = sys.rank() + 1;
    check_type_a(sys, n)?;
    let field = FiniteField::new(q)?;
    guard.check(n, q)?;
    let shard = |line: Vec<u8>| -> Result<BTreeMap<(Element, Element), u64>, OracleError> {
        let mut counts = BTreeMap::new();
        for f in flags_through(&field, n, line) {
            *counts.entry(stratum(sys, &field, &f)?).or_insert(0) += 1;
        }
        Ok(counts)
    };
    let lines = first_lines(&field, n);
    let shards: Vec<_> = if jobs <= 1 {
        lines.into_iter().map(shard).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
        pool.install(|| lines.into_par_iter().map(shard).collect())
    };
    let mut total = BTreeMap::new();
    for s in shards {
        for (k, c) in s? {
            *total.entry(k).or_insert(0) += c;
        }
    }
    Ok(total)
}

/// `R_{y,y'}(q)` from the r-polynomial, zero when `y ≰ y'`.
pub fn r_value(hecke: &HeckeAlgebra, y: &Element, yp: &Element, q: u64) -> Result<BigInt, OracleError> {
    let r = hecke.r_poly(y, yp)?;
    if r.is_zero() {
        return Ok(BigInt::from(0));
    }
    let d = yp.length() as i32 - y.length() as i32;
    let big_r = r.to_r_form(d).expect("r-polynomials have the parity of |y'| - |y|");
    Ok(big_r.eval(&BigInt::from(q)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RichardsonCount {
    pub y: String,
    pub y_prime: String,
    pub q: u64,
    pub count: u64,
    #[serde(rename = "R_value")]
    pub r_value: String,
    pub verdict: String,
    #[serde(skip)]
    pretty: (String, String),
}

impl RichardsonCount {
    pub fn matches(&self) -> bool {
        self.verdict == "OK"
    }
}

/// Exact count of one open Richardson variety, compared with `R_{y,y'}(q)`.
pub fn count_open_richardson(y: &Element, yp: &Element, q: u64, guard: Guard) -> Result<RichardsonCount, OracleError> {
    let sys = y.system();
    if yp.system() != sys {
        return Err(crate::error::CoxeterError::MixedSystems.into());
    }
    let n = sys.rank() + 1;
    check_type_a(sys, n)?;
    let field = FiniteField::new(q)?;
    let mut count = 0u64;
    for f in enumerate_flags(&field, n, guard)? {
        if stratum(sys, &field, &f)? == (y.clone(), yp.clone()) {
            count += 1;
        }
    }
    let hecke = HeckeAlgebra::new(sys)?;
    Ok(make_row(y, yp, q, count, r_value(&hecke, y, yp, q)?))
}

fn make_row(y: &Element, yp: &Element, q: u64, count: u64, r: BigInt) -> RichardsonCount {
    let verdict = if BigInt::from(count) == r { "OK" } else { "MISMATCH" };
    RichardsonCount {
        y: y.to_word_string(),
        y_prime: yp.to_word_string(),
        q,
        count,
        r_value: r.to_string(),
        verdict: verdict.into(),
        pretty: (y.pretty(), yp.pretty()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub q: u64,
    pub total_flags: u64,
    /// `Σ_w q^{|w|}`.
    pub expected_total: String,
    /// Every `y'` has `Σ_y count(y, y') = q^{|y'|}`.
    pub cells_ok: bool,
    pub rows: Vec<RichardsonCount>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.cells_ok && self.expected_total == self.total_flags.to_string() && self.rows.iter().all(RichardsonCount::matches)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "(y, y', q, count, R_value, verdict)");
        for r in &self.rows {
            let _ = writeln!(out, "({}, {}, {}, {}, {}, {})", r.pretty.0, r.pretty.1, r.q, r.count, r.r_value, r.verdict);
        }
        let _ = writeln!(
            out,
            "total flags: {} (expected {}); Schubert cell sums: {}",
            self.total_flags,
            self.expected_total,
            if self.cells_ok { "OK" } else { "MISMATCH" }
        );
        out
    }
}

/// Counts every stratum `(y, y')` of `A_{n-1}` over `F_q` and compares each
/// with `R_{y,y'}(q)`; rows are ordered by `(y, y')`.
pub fn oracle_report(n: usize, q: u64, jobs: usize, guard: Guard) -> Result<OracleReport, OracleError> {
    if n < 2 {
        return Err(OracleError::BadDimension(n));
    }
    let field = FiniteField::new(q)?;
    guard.check(n, field.order() as u64)?;
    let sys = CoxeterSystem::parse(&format!("A{}", n - 1))?;
    let hecke = HeckeAlgebra::new(&sys)?;
    let counts = stratum_counts(&sys, q, jobs, guard)?;
    let elements = sys.enumerate();
    let qb = BigInt::from(q);
    let mut rows = Vec::new();
    let mut cells_ok = true;
    for yp in &elements {
        let mut cell = 0u64;
        for y in &elements {
            let c = counts.get(&(y.clone(), yp.clone())).copied().unwrap_or(0);
            cell += c;
            rows.push((y.clone(), yp.clone(), c));
        }
        cells_ok &= BigInt::from(cell) == num_traits::pow(qb.clone(), yp.length());
    }
    rows.sort();
    let total: u64 = counts.values().sum();
    let expected: BigInt = elements.iter().map(|w| num_traits::pow(qb.clone(), w.length())).sum();
    let rows = rows
        .into_iter()
        .map(|(y, yp, c)| Ok(make_row(&y, &yp, q, c, r_value(&hecke, &y, &yp, q)?)))
        .collect::<Result<Vec<_>, OracleError>>()?;
    Ok(OracleReport { n, q, total_flags: total, expected_total: expected.to_string(), cells_ok, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_counts() {
        let f2 = FiniteField::new(2).unwrap();
        let f5 = FiniteField::new(5).unwrap();
        assert_eq!(enumerate_flags(&f2, 2, Guard::On).unwrap().count(), 3);
        assert_eq!(enumerate_flags(&f5, 2, Guard::On).unwrap().count(), 6);
        assert_eq!(enumerate_flags(&f2, 3, Guard::On).unwrap().count(), 21);
        let f4 = FiniteField::new(4).unwrap();
        assert_eq!(enumerate_flags(&f4, 3, Guard::On).unwrap().count(), 5 * 21);
    }

    #[test]
    fn flags_are_distinct_and_canonical() {
        let f3 = FiniteField::new(3).unwrap();
        let flags: Vec<FlagPoint> = enumerate_flags(&f3, 3, Guard::On).unwrap().collect();
        let set: std::collections::HashSet<_> = flags.iter().cloned().collect();
        assert_eq!(set.len(), flags.len());
        for f in &flags {
            assert_eq!(FlagPoint::from_basis(&f3, f.rows()).as_ref(), Some(f));
        }
    }

    #[test]
    fn guard_limits() {
        let f7 = FiniteField::new(7).unwrap();
        assert!(matches!(enumerate_flags(&f7, 2, Guard::On), Err(OracleError::Guard { .. })));
        assert!(enumerate_flags(&f7, 2, Guard::Off).is_ok());
        let f2 = FiniteField::new(2).unwrap();
        assert!(matches!(enumerate_flags(&f2, 5, Guard::On), Err(OracleError::Guard { .. })));
        assert!(matches!(oracle_report(2, 6, 1, Guard::Off), Err(OracleError::NotPrimePower(6))));
    }

    #[test]
    fn position_examples() {
        let sys = CoxeterSystem::parse("A2").unwrap();
        let f = FiniteField::new(2).unwrap();
        let std = FlagPoint::standard(3);
        let opp = FlagPoint::opposite(3);
        assert!(relative_position(&sys, &f, &std, &std).unwrap().is_identity());
        assert_eq!(relative_position(&sys, &f, &std, &opp).unwrap(), sys.longest_element());
        let a1 = CoxeterSystem::parse("A1").unwrap();
        let mut cells: BTreeMap<Element, usize> = BTreeMap::new();
        for flag in enumerate_flags(&f, 2, Guard::On).unwrap() {
            *cells.entry(relative_position(&a1, &f, &FlagPoint::standard(2), &flag).unwrap()).or_default() += 1;
        }
        assert_eq!(cells[&a1.identity()], 1);
        assert_eq!(cells[&a1.generator(0).unwrap()], 2);
    }

    #[test]
    fn permutation_round_trip() {
        let sys = CoxeterSystem::parse("A3").unwrap();
        for x in sys.enumerate() {
            let p = element_to_permutation(&x);
            assert_eq!(permutation_to_element(&sys, &p).unwrap(), x);
        }
    }

    #[test]
    fn rank_one_counts() {
        let sys = CoxeterSystem::parse("A1").unwrap();
        let (e, s) = (sys.identity(), sys.generator(0).unwrap());
        let r = count_open_richardson(&e, &s, 5, Guard::On).unwrap();
        assert_eq!((r.count, r.r_value.as_str(), r.matches()), (4, "4", true));
        let r = count_open_richardson(&e, &e, 3, Guard::On).unwrap();
        assert_eq!((r.count, r.matches()), (1, true));
        let r = count_open_richardson(&s, &e, 2, Guard::On).unwrap();
        assert_eq!((r.count, r.r_value.as_str(), r.matches()), (0, "0", true));
    }
}
