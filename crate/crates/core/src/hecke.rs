//! The Hecke algebra of a finite Weyl group over `Z[v, v^{-1}]`.
//!
//! Conventions: `(δ_s + v)(δ_s - v^{-1}) = 0`, so `δ_s^2 = 1 + (v^{-1} - v) δ_s`
//! and `δ_s^{-1} = δ_s + (v - v^{-1})`. The Kazhdan-Lusztig basis element is
//! `b_x = Σ_y h_{y,x} δ_y` with `h_{x,x} = 1` and `h_{y,x} ∈ vZ[v]` for `y < x`
//! (so `b_s = δ_s + v`).
//!
//! The r-polynomials are read off `bar(δ_x) = Σ_y (-1)^{|x|-|y|} r_{y,x} δ_y`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::coxeter::{CoxeterSystem, Element, GroupTable, Side};
use crate::error::CoxeterError;
use crate::laurent::LaurentPoly;

/// Dense per-column tables: `rows[x][y]` is the coefficient attached to the
/// pair `(y, x)`.
type Dense = Vec<Vec<LaurentPoly>>;

/// Lazily built r- and KL tables, shared by every handle on one system.
#[derive(Default)]
pub(crate) struct Caches {
    bar_delta: OnceLock<Dense>,
    r: OnceLock<Dense>,
    kl: OnceLock<Dense>,
}

/// An element `Σ a_x δ_x` of the Hecke algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    sys: CoxeterSystem,
    terms: BTreeMap<Element, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(sys: &CoxeterSystem) -> Self {
        Self { sys: sys.clone(), terms: BTreeMap::new() }
    }

    pub fn delta(x: &Element) -> Self {
        Self::monomial(x, LaurentPoly::one())
    }

    pub fn monomial(x: &Element, coeff: LaurentPoly) -> Self {
        let mut h = Self::zero(x.system());
        h.add_term(x, coeff).unwrap();
        h
    }

    pub fn from_terms<I>(sys: &CoxeterSystem, terms: I) -> Result<Self, CoxeterError>
    where
        I: IntoIterator<Item = (Element, LaurentPoly)>,
    {
        let mut h = Self::zero(sys);
        for (x, c) in terms {
            h.add_term(&x, c)?;
        }
        Ok(h)
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn add_term(&mut self, x: &Element, coeff: LaurentPoly) -> Result<(), CoxeterError> {
        if x.system() != &self.sys {
            return Err(CoxeterError::MixedSystems);
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(x.clone()).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(x);
        }
        Ok(())
    }

    pub fn coeff(&self, x: &Element) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    /// Nonzero terms ordered by (length, ShortLex).
    pub fn terms(&self) -> impl Iterator<Item = (&Element, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoxeterError> {
        let mut out = self.clone();
        for (x, c) in other.terms() {
            out.add_term(x, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(&self.sys);
        for (x, a) in self.terms() {
            out.add_term(x, a * c).unwrap();
        }
        out
    }

    fn to_dense(&self, table: &GroupTable) -> Vec<LaurentPoly> {
        let mut v = vec![LaurentPoly::zero(); table.len()];
        for (x, c) in self.terms() {
            v[table.index_of(x).expect("element of this system")] = c.clone();
        }
        v
    }

    fn from_dense(sys: &CoxeterSystem, table: &GroupTable, v: &[LaurentPoly]) -> Self {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (table.element(i).clone(), c.clone()))
            .collect();
        Self { sys: sys.clone(), terms }
    }
}

/// One `word : polynomial` line per term, ordered by (length, ShortLex).
impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (x, c) in self.terms() {
            writeln!(f, "{} : {}", x.pretty(), c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().map(|(x, c)| format!("({c}) δ_{x}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

/// Outcome of checking `bar(a_x) = Σ_w a_w r_{x,w}` over the Bruhat
/// lower closure of the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarCheck {
    pub holds: bool,
    /// First failing element in (length, ShortLex) order, with both sides.
    pub failure: Option<(Element, LaurentPoly, LaurentPoly)>,
}

/// Handle on the Hecke algebra of a system. Cheap to construct; the heavy
/// tables live in the system and are computed once.
#[derive(Clone)]
pub struct HeckeAlgebra {
    sys: CoxeterSystem,
    table: Arc<GroupTable>,
    caches: Arc<Caches>,
}

/// Right multiplication of a dense element by `δ_s`.
fn dense_right_mul(table: &GroupTable, c: &[LaurentPoly], s: usize) -> Vec<LaurentPoly> {
    let quad = LaurentPoly::v_inv() - LaurentPoly::v();
    let mut out = vec![LaurentPoly::zero(); c.len()];
    for (y, a) in c.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let ys = table.right_mul(y, s);
        out[ys] += a;
        if table.has_descent(y, s, Side::Right) {
            out[y] += &(a * &quad);
        }
    }
    out
}

impl HeckeAlgebra {
    pub fn new(sys: &CoxeterSystem) -> Result<Self, CoxeterError> {
        let table = sys.group_table()?;
        let caches = sys.hecke_slot().get_or_init(|| Arc::new(Caches::default())).clone();
        Ok(Self { sys: sys.clone(), table, caches })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.table
    }

    fn idx(&self, x: &Element) -> Result<usize, CoxeterError> {
        if x.system() != &self.sys {
            return Err(CoxeterError::MixedSystems);
        }
        Ok(self.table.index_of(x).expect("enumerated group contains every element"))
    }

    /// `h · δ_s`.
    pub fn delta_mult(&self, h: &HeckeElement, s: usize) -> Result<HeckeElement, CoxeterError> {
        if h.system() != &self.sys {
            return Err(CoxeterError::MixedSystems);
        }
        if s >= self.sys.rank() {
            return Err(CoxeterError::BadGenerator { index: s, rank: self.sys.rank() });
        }
        let out = dense_right_mul(&self.table, &h.to_dense(&self.table), s);
        Ok(HeckeElement::from_dense(&self.sys, &self.table, &out))
    }

    /// Product in the algebra, expanding `δ_y` along the word of `y`.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement, CoxeterError> {
        if a.system() != &self.sys || b.system() != &self.sys {
            return Err(CoxeterError::MixedSystems);
        }
        let start = a.to_dense(&self.table);
        let mut acc = vec![LaurentPoly::zero(); self.table.len()];
        for (y, c) in b.terms() {
            let mut cur = start.clone();
            for &s in y.word() {
                cur = dense_right_mul(&self.table, &cur, s as usize);
            }
            for (slot, p) in acc.iter_mut().zip(cur) {
                *slot += &(&p * c);
            }
        }
        Ok(HeckeElement::from_dense(&self.sys, &self.table, &acc))
    }

    fn bar_delta_rows(&self) -> &Dense {
        self.caches.bar_delta.get_or_init(|| {
            let t = &*self.table;
            let inv_shift = LaurentPoly::v() - LaurentPoly::v_inv();
            let mut rows: Dense = Vec::with_capacity(t.len());
            let mut unit = vec![LaurentPoly::zero(); t.len()];
            unit[0] = LaurentPoly::one();
            rows.push(unit);
            for x in 1..t.len() {
                // bar(δ_x) = bar(δ_{xs}) · δ_s^{-1} with s the last letter of x.
                let s = *t.element(x).word().last().unwrap() as usize;
                let prev = &rows[t.right_mul(x, s)];
                let mut next = dense_right_mul(t, prev, s);
                for (slot, p) in next.iter_mut().zip(prev) {
                    *slot += &(p * &inv_shift);
                }
                rows.push(next);
            }
            rows
        })
    }

    fn r_rows(&self) -> &Dense {
        self.caches.r.get_or_init(|| {
            let t = &*self.table;
            self.bar_delta_rows()
                .iter()
                .enumerate()
                .map(|(x, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(y, c)| if (t.length(x) + t.length(y)) % 2 == 1 { -c } else { c.clone() })
                        .collect()
                })
                .collect()
        })
    }

    fn kl_rows(&self) -> &Dense {
        self.caches.kl.get_or_init(|| {
            let t = &*self.table;
            let n = t.len();
            let v = LaurentPoly::v();
            let v_inv = LaurentPoly::v_inv();
            let mut rows: Dense = Vec::with_capacity(n);
            let mut unit = vec![LaurentPoly::zero(); n];
            unit[0] = LaurentPoly::one();
            rows.push(unit);
            for x in 1..n {
                let s = *t.element(x).word().last().unwrap() as usize;
                let xp = t.right_mul(x, s);
                // b_{x'} b_s with b_s = δ_s + v.
                let mut c = vec![LaurentPoly::zero(); n];
                for (y, h) in rows[xp].iter().enumerate() {
                    if h.is_zero() {
                        continue;
                    }
                    let ys = t.right_mul(y, s);
                    c[ys] += h;
                    let shift = if t.has_descent(y, s, Side::Right) { &v_inv } else { &v };
                    c[y] += &(h * shift);
                }
                // Subtract μ(z, x') b_z for z < x' with zs < z; μ is the
                // coefficient of v in h_{z,x'}.
                for z in (0..xp).rev() {
                    if !t.has_descent(z, s, Side::Right) {
                        continue;
                    }
                    let mu = rows[xp][z].coeff(1);
                    if mu == 0.into() {
                        continue;
                    }
                    for (slot, h) in c.iter_mut().zip(&rows[z]) {
                        if !h.is_zero() {
                            *slot -= &h.scale(&mu);
                        }
                    }
                }
                rows.push(c);
            }
            rows
        })
    }

    /// `bar(δ_x)`, the ordered product of `δ_s^{-1}` along the word of `x`.
    pub fn bar_delta(&self, x: &Element) -> Result<HeckeElement, CoxeterError> {
        let i = self.idx(x)?;
        Ok(HeckeElement::from_dense(&self.sys, &self.table, &self.bar_delta_rows()[i]))
    }

    /// The bar involution on an arbitrary element.
    pub fn bar(&self, h: &HeckeElement) -> Result<HeckeElement, CoxeterError> {
        let mut acc = vec![LaurentPoly::zero(); self.table.len()];
        for (x, c) in h.terms() {
            let cb = c.bar();
            for (slot, p) in acc.iter_mut().zip(&self.bar_delta_rows()[self.idx(x)?]) {
                if !p.is_zero() {
                    *slot += &(p * &cb);
                }
            }
        }
        Ok(HeckeElement::from_dense(&self.sys, &self.table, &acc))
    }

    pub fn r_poly(&self, y: &Element, x: &Element) -> Result<LaurentPoly, CoxeterError> {
        Ok(self.r_dense(self.idx(y)?, self.idx(x)?).clone())
    }

    /// `r_{y,x}` by table index.
    pub fn r_dense(&self, y: usize, x: usize) -> &LaurentPoly {
        &self.r_rows()[x][y]
    }

    /// `h_{y,x}` for ell = 0.
    pub fn kl_poly(&self, y: &Element, x: &Element) -> Result<LaurentPoly, CoxeterError> {
        Ok(self.kl_dense(self.idx(y)?, self.idx(x)?).clone())
    }

    /// `h_{y,x}` by table index.
    pub fn kl_dense(&self, y: usize, x: usize) -> &LaurentPoly {
        &self.kl_rows()[x][y]
    }

    /// The canonical basis element `b_x`.
    pub fn kl_element(&self, x: &Element) -> Result<HeckeElement, CoxeterError> {
        let i = self.idx(x)?;
        Ok(HeckeElement::from_dense(&self.sys, &self.table, &self.kl_rows()[i]))
    }

    /// Checks the identity `bar(a_x) = Σ_w a_w r_{x,w}` that every
    /// bar-invariant element satisfies, for each `x` below some support
    /// element.
    pub fn bar_invariance_check(&self, h: &HeckeElement) -> Result<BarCheck, CoxeterError> {
        let t = &*self.table;
        let support: Vec<(usize, &LaurentPoly)> =
            h.terms().map(|(x, c)| Ok((self.idx(x)?, c))).collect::<Result<_, CoxeterError>>()?;
        let closure: BTreeSet<usize> =
            (0..t.len()).filter(|&y| support.iter().any(|&(w, _)| t.leq(y, w))).collect();
        for y in closure {
            let lhs = support.iter().find(|&&(w, _)| w == y).map_or_else(LaurentPoly::zero, |(_, c)| c.bar());
            let rhs: LaurentPoly =
                support.iter().map(|&(w, c)| c * self.r_dense(y, w)).sum();
            if lhs != rhs {
                return Ok(BarCheck { holds: false, failure: Some((t.element(y).clone(), lhs, rhs)) });
            }
        }
        Ok(BarCheck { holds: true, failure: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(t: &str) -> (CoxeterSystem, HeckeAlgebra) {
        let sys = CoxeterSystem::parse(t).unwrap();
        let h = HeckeAlgebra::new(&sys).unwrap();
        (sys, h)
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn delta_mult_examples() {
        let (sys, hk) = setup("A2");
        let e = sys.identity();
        let s1 = sys.generator(0).unwrap();
        let s2 = sys.generator(1).unwrap();
        assert_eq!(hk.delta_mult(&HeckeElement::delta(&e), 0).unwrap(), HeckeElement::delta(&s1));
        let sq = hk.delta_mult(&HeckeElement::delta(&s1), 0).unwrap();
        let expected =
            HeckeElement::from_terms(&sys, [(e.clone(), p("1")), (s1.clone(), p("v^-1 - v"))]).unwrap();
        assert_eq!(sq, expected);
        let s1s2 = sys.multiply(&s1, &s2).unwrap();
        assert_eq!(hk.delta_mult(&HeckeElement::delta(&s1), 1).unwrap(), HeckeElement::delta(&s1s2));
        assert!(hk.delta_mult(&HeckeElement::delta(&s1), 2).is_err());
    }

    #[test]
    fn quadratic_relation() {
        let (sys, hk) = setup("B2");
        let s = HeckeElement::delta(&sys.generator(1).unwrap());
        let e = HeckeElement::delta(&sys.identity());
        // (δ_s + v)(δ_s - v^{-1}) = 0
        let a = s.add(&e.scale(&LaurentPoly::v())).unwrap();
        let b = s.add(&e.scale(&-LaurentPoly::v_inv())).unwrap();
        assert!(hk.mul(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn bar_delta_examples() {
        let (sys, hk) = setup("A2");
        let e = sys.identity();
        let s = sys.generator(0).unwrap();
        assert_eq!(hk.bar_delta(&e).unwrap(), HeckeElement::delta(&e));
        let expected = HeckeElement::from_terms(&sys, [(s.clone(), p("1")), (e, p("v - v^-1"))]).unwrap();
        assert_eq!(hk.bar_delta(&s).unwrap(), expected);
        for x in sys.enumerate() {
            let b = hk.bar_delta(&x).unwrap();
            assert_eq!(hk.bar(&b).unwrap(), HeckeElement::delta(&x));
            // bar(δ_x) is the inverse of δ_{x^{-1}}
            let xi = sys.inverse(&x).unwrap();
            let prod = hk.mul(&HeckeElement::delta(&xi), &b).unwrap();
            assert_eq!(prod, HeckeElement::delta(&sys.identity()));
        }
    }

    #[test]
    fn r_poly_examples() {
        let (sys, hk) = setup("A2");
        let e = sys.identity();
        let s1 = sys.generator(0).unwrap();
        let s2 = sys.generator(1).unwrap();
        for x in sys.enumerate() {
            assert!(hk.r_poly(&x, &x).unwrap().is_one());
        }
        assert_eq!(hk.r_poly(&e, &s1).unwrap(), p("v^-1 - v"));
        assert!(hk.r_poly(&s1, &s2).unwrap().is_zero());
        let other = CoxeterSystem::parse("A2").unwrap();
        assert_eq!(hk.r_poly(&other.identity(), &s1), Err(CoxeterError::MixedSystems));
    }

    #[test]
    fn kl_examples() {
        let (sys, hk) = setup("A3");
        for x in sys.enumerate() {
            assert!(hk.kl_poly(&x, &x).unwrap().is_one());
        }
        let s = sys.generator(0).unwrap();
        assert_eq!(hk.kl_poly(&sys.identity(), &s).unwrap(), LaurentPoly::v());
        let x = sys.parse_element("2,1,3,2").unwrap();
        let y = sys.parse_element("2").unwrap();
        assert_eq!(hk.kl_poly(&y, &x).unwrap(), p("v + v^3"));
    }

    #[test]
    fn bar_invariance_examples() {
        let (sys, hk) = setup("A1");
        let e = sys.identity();
        let s = sys.generator(0).unwrap();
        assert!(hk.bar_invariance_check(&HeckeElement::delta(&e)).unwrap().holds);
        let bs = HeckeElement::from_terms(&sys, [(s.clone(), p("1")), (e.clone(), p("v"))]).unwrap();
        assert!(hk.bar_invariance_check(&bs).unwrap().holds);
        let check = hk.bar_invariance_check(&HeckeElement::delta(&s)).unwrap();
        assert!(!check.holds);
        let (at, lhs, rhs) = check.failure.unwrap();
        assert_eq!(at, e);
        assert!(lhs.is_zero());
        assert_eq!(rhs, p("v^-1 - v"));
    }

    #[test]
    fn rendering() {
        let (sys, hk) = setup("A1");
        let b = hk.kl_element(&sys.generator(0).unwrap()).unwrap();
        assert_eq!(b.to_string(), "e : v\ns1 : 1\n");
    }
}
