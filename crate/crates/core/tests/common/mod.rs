//! Independent reference computations shared by the integration tests.
//!
//! Nothing here goes through the Hecke algebra code: R-polynomials come from
//! the classical recursion on descents and KL polynomials from a triangular
//! solve of bar invariance built on those R-polynomials.

#![allow(dead_code)]

use std::collections::HashMap;

use klr_core::coxeter::GroupTable;
use klr_core::{CoxeterSystem, LaurentPoly, QPoly, Side};
use num_bigint::BigInt;

/// Polynomial in `q` with ascending integer coefficients.
pub type Poly = Vec<i64>;

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Classical `R_{y,x}(q)` for all pairs, indexed `[y][x]` by table index.
///
/// `R_{x,x} = 1`, `R_{y,x} = 0` unless `y ≤ x`, and for `xs < x`:
/// `R_{y,x} = R_{ys,xs}` if `ys < y`, else `(q-1) R_{y,xs} + q R_{ys,xs}`.
pub fn classical_r(g: &GroupTable) -> Vec<Vec<Poly>> {
    let n = g.len();
    let mut r = vec![vec![Vec::new(); n]; n];
    // Table indices are sorted by length, so xs is always filled before x.
    for x in 0..n {
        if x == g.identity() {
            r[x][x] = vec![1];
            continue;
        }
        let s = (0..g.rank()).find(|&s| g.has_descent(x, s, Side::Right)).unwrap();
        let xs = g.right_mul(x, s);
        for y in 0..n {
            if !g.leq(y, x) {
                continue;
            }
            let ys = g.right_mul(y, s);
            r[y][x] = if g.length(ys) < g.length(y) {
                r[ys][xs].clone()
            } else {
                poly_add(&poly_mul(&vec![-1, 1], &r[y][xs]), &poly_mul(&vec![0, 1], &r[ys][xs]))
            };
        }
    }
    r
}

/// `r = v^d R(v^{-2})` with `d = |x| - |y|`.
pub fn to_laurent(rq: &Poly, d: usize) -> LaurentPoly {
    LaurentPoly::from_terms(rq.iter().enumerate().map(|(k, &c)| (d as i32 - 2 * k as i32, c)))
}

pub fn to_qpoly(rq: &Poly) -> QPoly {
    QPoly::new(rq.iter().map(|&c| BigInt::from(c)).collect())
}

/// Positive-exponent part of a Laurent polynomial.
fn positive(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().filter(|(e, _)| *e > 0).map(|(e, c)| (e, c.clone())))
}

/// KL polynomials `h_{y,x}` (indexed `[y][x]`) in the normalization
/// `h_{x,x} = 1`, `h_{y,x} ∈ vZ[v]` for `y < x`, solved from
/// `h_y - bar(h_y) = Σ_{y<w≤x} (-1)^{|w|-|y|} bar(h_w) r_{y,w}`.
pub fn kl_oracle(g: &GroupTable) -> Vec<Vec<LaurentPoly>> {
    let n = g.len();
    let rq = classical_r(g);
    let r: Vec<Vec<LaurentPoly>> = (0..n)
        .map(|y| {
            (0..n)
                .map(|w| if g.leq(y, w) { to_laurent(&rq[y][w], g.length(w) - g.length(y)) } else { LaurentPoly::zero() })
                .collect()
        })
        .collect();
    let mut h = vec![vec![LaurentPoly::zero(); n]; n];
    for x in 0..n {
        h[x][x] = LaurentPoly::one();
        for y in (0..x).rev() {
            if !g.leq(y, x) {
                continue;
            }
            let mut rhs = LaurentPoly::zero();
            for w in y + 1..=x {
                if g.leq(y, w) && g.leq(w, x) && !h[w][x].is_zero() {
                    let term = h[w][x].bar() * r[y][w].clone();
                    if (g.length(w) - g.length(y)).is_multiple_of(2) {
                        rhs += term;
                    } else {
                        rhs -= term;
                    }
                }
            }
            h[y][x] = positive(&rhs);
        }
    }
    h
}

/// Cached systems so that several tests share the expensive tables.
pub fn system(name: &str) -> CoxeterSystem {
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<String, CoxeterSystem>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(name.to_string()).or_insert_with(|| CoxeterSystem::parse(name).unwrap()).clone()
}
