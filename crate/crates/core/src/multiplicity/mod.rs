//! Graded Jordan-Hölder multiplicities of tilting sheaves and Poincaré
//! polynomials of geometric extensions on Richardson varieties.
//!
//! Everything is a sum over a Bruhat interval `[z, x]` of products of table
//! polynomials. With `h` the (ell-)KL table of the group and `ȟ` the table of
//! its Langlands dual:
//!
//! * `jh_poly(z, x)   = Σ_{z≤y≤x} ȟ_{w0y,w0z}(v) · ȟ_{y,x}(v^{-1})`
//! * `jh_poly_r(z, x) = Σ_{z≤y≤y'≤x} ȟ_{w0y,w0z} · r_{y,y'} · ȟ_{y',x}`
//! * `richardson_poincare(z, x) = v^{|x|-|z|} Σ_{z≤y≤y'≤x} h_{w0y,w0z} · r_{y,y'} · h_{y',x}`
//!
//! The first two agree for any bar-invariant table, which is what the
//! `agreement` suite checks.

mod report;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

pub use report::{ReportRow, SuiteReport, VerifyReport};

use crate::coxeter::{CoxeterSystem, Element, GroupTable};
use crate::error::{CoxeterError, MultiplicityError};
use crate::hecke::HeckeAlgebra;
use crate::kltables::{KLTable, ResolvedTable, TableSet};
use crate::laurent::LaurentPoly;

/// `Σ_i [T_x : L_z⟨i⟩] v^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMultiplicity {
    pub z: Element,
    pub x: Element,
    pub poly: LaurentPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Agreement,
    Duality,
    Reciprocity,
    Parity,
    Positivity,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Agreement, Suite::Duality, Suite::Reciprocity, Suite::Parity, Suite::Positivity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Agreement => "agreement",
            Suite::Duality => "duality",
            Suite::Reciprocity => "reciprocity",
            Suite::Parity => "parity",
            Suite::Positivity => "positivity",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Evaluates a polynomial in `v^2` at `v^2 = q`; `None` if an exponent is
/// odd or negative.
pub fn eval_at_v_squared(p: &LaurentPoly, q: &BigInt) -> Option<BigInt> {
    let mut acc = BigInt::zero();
    for (e, c) in p.terms() {
        if e < 0 || e % 2 != 0 {
            return None;
        }
        acc += c * num_traits::pow(q.clone(), (e / 2) as usize);
    }
    Some(acc)
}

/// Computes every formula for one system and one pair of tables.
pub struct MultiplicityEngine {
    sys: CoxeterSystem,
    group: Arc<GroupTable>,
    hecke: HeckeAlgebra,
    primal: ResolvedTable,
    dual: ResolvedTable,
}

impl MultiplicityEngine {
    /// ell = 0: both tables are the ordinary KL polynomials.
    pub fn ordinary(sys: &CoxeterSystem) -> Result<Self, MultiplicityError> {
        let t = KLTable::default_table(sys)?;
        Self::new(sys, &t, &TableSet::new())
    }

    /// Uses `table` for `h` and resolves `ȟ` through `loaded`.
    pub fn new(sys: &CoxeterSystem, table: &KLTable, loaded: &TableSet) -> Result<Self, MultiplicityError> {
        let dual = loaded.dual_table(table)?;
        Self::from_pair(sys, table, &dual)
    }

    pub fn from_pair(sys: &CoxeterSystem, primal: &KLTable, dual: &KLTable) -> Result<Self, MultiplicityError> {
        let hecke = HeckeAlgebra::new(sys)?;
        Ok(Self {
            sys: sys.clone(),
            group: hecke.group().clone(),
            primal: primal.resolve(sys)?,
            dual: dual.resolve(sys)?,
            hecke,
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    fn idx(&self, x: &Element) -> Result<usize, CoxeterError> {
        if x.system() != &self.sys {
            return Err(CoxeterError::MixedSystems);
        }
        Ok(self.group.index_of(x).expect("enumerated group contains every element"))
    }

    /// `Σ_{z≤y≤x} T(w0y, w0z) · bar(T(y, x))`.
    fn bar_sum(&self, t: &ResolvedTable, z: usize, x: usize) -> LaurentPoly {
        let g = &*self.group;
        let w0z = g.w0_times(z);
        g.interval(z, x)
            .into_iter()
            .map(|y| t.h(g.w0_times(y), w0z) * &t.h(y, x).bar())
            .sum()
    }

    /// `Σ_{z≤y≤y'≤x} T(w0y, w0z) · r_{y,y'} · T(y', x)`, summed literally.
    fn r_sum(&self, t: &ResolvedTable, z: usize, x: usize) -> LaurentPoly {
        let g = &*self.group;
        let w0z = g.w0_times(z);
        let interval = g.interval(z, x);
        let mut acc = LaurentPoly::zero();
        for (i, &y) in interval.iter().enumerate() {
            let left = t.h(g.w0_times(y), w0z);
            for &yp in &interval[i..] {
                if !g.leq(y, yp) {
                    continue;
                }
                acc += &(&(left * self.hecke.r_dense(y, yp)) * t.h(yp, x));
            }
        }
        acc
    }

    fn pair(&self, z: &Element, x: &Element) -> Result<(usize, usize), CoxeterError> {
        Ok((self.idx(z)?, self.idx(x)?))
    }

    pub fn jh_poly(&self, z: &Element, x: &Element) -> Result<GradedMultiplicity, MultiplicityError> {
        let (zi, xi) = self.pair(z, x)?;
        Ok(GradedMultiplicity { z: z.clone(), x: x.clone(), poly: self.bar_sum(&self.dual, zi, xi) })
    }

    pub fn jh_poly_r(&self, z: &Element, x: &Element) -> Result<GradedMultiplicity, MultiplicityError> {
        let (zi, xi) = self.pair(z, x)?;
        Ok(GradedMultiplicity { z: z.clone(), x: x.clone(), poly: self.r_sum(&self.dual, zi, xi) })
    }

    pub fn richardson_poincare(&self, z: &Element, x: &Element) -> Result<LaurentPoly, MultiplicityError> {
        let (zi, xi) = self.pair(z, x)?;
        if !self.group.leq(zi, xi) {
            return Err(MultiplicityError::EmptyVariety { z: z.pretty(), x: x.pretty() });
        }
        Ok(self.richardson_idx(zi, xi))
    }

    fn richardson_idx(&self, z: usize, x: usize) -> LaurentPoly {
        let d = (self.group.length(x) - self.group.length(z)) as i32;
        self.r_sum(&self.primal, z, x).shift(d)
    }

    /// `[T̄_x : L̄_z]`, the graded multiplicity at `v = 1`.
    pub fn ungraded_mult(&self, z: &Element, x: &Element) -> Result<BigInt, MultiplicityError> {
        Ok(self.jh_poly(z, x)?.poly.at_one())
    }

    /// Frobenius trace on the cohomology of the geometric extension, summed
    /// stratum by stratum: `Σ_{z≤y≤y'≤x} P_{w0y,w0z}(q) · count(y, y') ·
    /// P_{y',x}(q)`, where `P_{y,x}(q) = v^{|x|-|y|} h_{y,x}(v^{-1})` at
    /// `v^2 = q` and `count(y, y')` is the number of `F_q`-points of the
    /// open Richardson variety.
    pub fn frobenius_trace<F>(&self, z: &Element, x: &Element, q: &BigInt, mut count: F) -> Result<BigInt, MultiplicityError>
    where
        F: FnMut(&Element, &Element) -> BigInt,
    {
        let (zi, xi) = self.pair(z, x)?;
        let g = &*self.group;
        let t = &self.primal;
        let stalk = |h: &LaurentPoly, d: usize| {
            eval_at_v_squared(&h.bar().shift(d as i32), q).expect("stalk polynomial is a polynomial in v^2")
        };
        let w0z = g.w0_times(zi);
        let interval = g.interval(zi, xi);
        let mut acc = BigInt::zero();
        for (i, &y) in interval.iter().enumerate() {
            let left = stalk(t.h(g.w0_times(y), w0z), g.length(y) - g.length(zi));
            for &yp in &interval[i..] {
                if g.leq(y, yp) {
                    let right = stalk(t.h(yp, xi), g.length(xi) - g.length(yp));
                    acc += &left * count(g.element(y), g.element(yp)) * right;
                }
            }
        }
        Ok(acc)
    }

    fn run<T, F>(pairs: &[(usize, usize)], jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&(usize, usize)) -> T + Sync + Send,
    {
        if jobs <= 1 {
            return pairs.iter().map(f).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
        pool.install(|| pairs.par_iter().map(f).collect())
    }

    /// Runs the identity suites over every comparable pair `z ≤ x`. Row order
    /// is (|z|, z-word, |x|, x-word) regardless of `jobs`.
    pub fn verify(&self, suites: &[Suite], jobs: usize) -> VerifyReport {
        let g = &*self.group;
        let pairs = g.comparable_pairs();
        let strict = pairs.iter().filter(|(z, x)| z != x).count();
        let jh: BTreeMap<(usize, usize), LaurentPoly> =
            pairs.iter().copied().zip(Self::run(&pairs, jobs, |&(z, x)| self.bar_sum(&self.dual, z, x))).collect();

        let mut out = Vec::new();
        for &suite in suites {
            let results: Vec<(LaurentPoly, Option<LaurentPoly>)> = match suite {
                Suite::Agreement => {
                    // Σ_{y≤y'≤x} r_{y,y'} ȟ_{y',x} does not depend on z; cache it per (y, x).
                    let inner: BTreeMap<(usize, usize), LaurentPoly> = pairs
                        .iter()
                        .copied()
                        .zip(Self::run(&pairs, jobs, |&(y, x)| {
                            g.interval(y, x).into_iter().map(|yp| self.hecke.r_dense(y, yp) * self.dual.h(yp, x)).sum()
                        }))
                        .collect();
                    Self::run(&pairs, jobs, |&(z, x)| {
                        let w0z = g.w0_times(z);
                        let rhs: LaurentPoly = g
                            .interval(z, x)
                            .into_iter()
                            .map(|y| self.dual.h(g.w0_times(y), w0z) * &inner[&(y, x)])
                            .sum();
                        let lhs = jh[&(z, x)].clone();
                        let fail = (lhs != rhs).then_some(rhs);
                        (lhs, fail)
                    })
                }
                Suite::Duality => pairs
                    .iter()
                    .map(|k| {
                        let p = jh[k].clone();
                        let b = p.bar();
                        (p.clone(), (b != p).then_some(b))
                    })
                    .collect(),
                Suite::Reciprocity => pairs
                    .iter()
                    .map(|&(z, x)| {
                        let p = jh[&(z, x)].clone();
                        let other = jh[&(g.w0_times(x), g.w0_times(z))].bar();
                        (p.clone(), (other != p).then_some(other))
                    })
                    .collect(),
                Suite::Parity => Self::run(&pairs, jobs, |&(z, x)| {
                    let p = jh[&(z, x)].clone();
                    let d = (g.length(x) - g.length(z)) as i32;
                    let rich = self.richardson_idx(z, x);
                    let ok = p.has_parity(d) && rich.has_parity(0);
                    (p, (!ok).then_some(rich))
                }),
                Suite::Positivity => Self::run(&pairs, jobs, |&(z, x)| {
                    let p = jh[&(z, x)].clone();
                    let rich = self.richardson_idx(z, x);
                    let ok = p.all_nonnegative() && rich.all_nonnegative() && rich.coeff(0) >= BigInt::one();
                    (p, (!ok).then_some(rich))
                }),
            };
            let mut notes = Vec::new();
            if suite == Suite::Positivity {
                let mut constants: BTreeMap<BigInt, usize> = BTreeMap::new();
                for &(z, x) in &pairs {
                    *constants.entry(self.richardson_idx(z, x).coeff(0)).or_default() += 1;
                }
                let parts: Vec<String> = constants.iter().map(|(c, n)| format!("{c} ({n} pairs)")).collect();
                notes.push(format!("Richardson constant terms: {}", parts.join(", ")));
                if let Some(bad) = constants.keys().find(|c| c.is_negative() || c.is_zero()) {
                    notes.push(format!("nonpositive constant term {bad} observed"));
                }
            }
            let rows = pairs
                .iter()
                .zip(results)
                .map(|(&(z, x), (poly, fail))| ReportRow::new(g.element(z), g.element(x), &poly, suite, fail.as_ref()))
                .collect();
            out.push(SuiteReport::new(suite, pairs.len(), strict, rows, notes));
        }
        VerifyReport { cartan: self.sys.cartan().to_string(), suites: out }
    }
}
