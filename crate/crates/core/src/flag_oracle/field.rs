use crate::error::OracleError;

/// Largest field handled; elements are stored as `u8`.
pub const MAX_FIELD: u64 = 256;

/// `Some((p, k))` with `q = p^k`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// A finite field `F_q` with full addition and multiplication tables.
/// Elements are `0..q`; for `q = p^k` element `a` encodes the polynomial
/// whose base-`p` digits are its coefficients.
#[derive(Debug, Clone)]
pub struct FiniteField {
    q: usize,
    p: u64,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn digits(mut a: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self, OracleError> {
        let (p, k) = prime_power(q).ok_or(OracleError::NotPrimePower(q))?;
        if q > MAX_FIELD {
            return Err(OracleError::FieldTooLarge(q));
        }
        let (qs, ps, ks) = (q as usize, p as usize, k as usize);
        let add: Vec<u8> = (0..qs * qs)
            .map(|ab| {
                let (a, b) = (digits(ab / qs, ps, ks), digits(ab % qs, ps, ks));
                let s: Vec<usize> = a.iter().zip(&b).map(|(x, y)| (x + y) % ps).collect();
                undigits(&s, ps) as u8
            })
            .collect();
        // Try monic moduli of degree k until the multiplication table is a field.
        for tail in 0..qs {
            let modulus = digits(tail, ps, ks);
            if let Some(mul) = Self::mul_table(&modulus, ps, ks, qs) {
                let neg = (0..qs).map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8).collect();
                let mut inv = vec![0u8; qs];
                for a in 1..qs {
                    inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u8;
                }
                return Ok(Self { q: qs, p, add, mul, neg, inv });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// Multiplication modulo `x^k + modulus(x)`; `None` if that is not a field.
    fn mul_table(modulus: &[usize], p: usize, k: usize, q: usize) -> Option<Vec<u8>> {
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a, p, k), digits(b, p, k));
                let mut prod = vec![0usize; 2 * k];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                // x^k = -modulus(x)
                for deg in (k..2 * k).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        prod[deg] = 0;
                        for (i, m) in modulus.iter().enumerate() {
                            prod[deg - k + i] = (prod[deg - k + i] + (p - m) % p * c) % p;
                        }
                    }
                }
                mul[a * q + b] = undigits(&prod[..k], p) as u8;
            }
        }
        let is_field = (1..q).all(|a| (1..q).any(|b| mul[a * q + b] == 1));
        is_field.then_some(mul)
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    /// Rank of a list of vectors by Gaussian elimination.
    pub fn rank(&self, vectors: &[&[u8]]) -> usize {
        let mut rows: Vec<Vec<u8>> = vectors.iter().map(|v| v.to_vec()).collect();
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let scale = self.inv(rows[rank][c]);
            let pivot_row: Vec<u8> = rows[rank].iter().map(|&x| self.mul(x, scale)).collect();
            for r in rank + 1..rows.len() {
                let f = rows[r][c];
                if f != 0 {
                    for (x, &pv) in rows[r].iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(f, pv));
                    }
                }
            }
            rows[rank] = pivot_row;
            rank += 1;
        }
        rank
    }
}
