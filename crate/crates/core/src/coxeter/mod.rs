//! Finite Weyl groups.
//!
//! An [`Element`] is stored as its matrix on the root lattice (simple-root
//! coordinates), the inverse matrix, and its ShortLex-minimal reduced word.
//! Generators are numbered from 0 internally; the textual word format
//! (`"2,1,3,2"`, empty for the identity) is 1-based.

mod cartan;
mod table;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

pub use cartan::{CartanType, Family};
pub use table::GroupTable;

use crate::error::CoxeterError;

/// Groups larger than this are not enumerated into a [`GroupTable`].
pub const TABLE_LIMIT: u128 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

type Word = Box<[u8]>;

struct SystemData {
    cartan: CartanType,
    rank: usize,
    cartan_matrix: Vec<Vec<i32>>,
    coxeter_matrix: Vec<Vec<u32>>,
    /// Row-major `rank x rank` matrices of the simple reflections.
    reflections: Vec<Box<[i32]>>,
    positive_roots: Vec<Vec<i32>>,
    bruhat_memo: Mutex<HashMap<(Word, Word), bool>>,
    table: OnceLock<Arc<GroupTable>>,
    hecke: OnceLock<Arc<crate::hecke::Caches>>,
}

/// A finite Weyl group `(W, S)` built from a Cartan type. Cloning is cheap.
#[derive(Clone)]
pub struct CoxeterSystem {
    data: Arc<SystemData>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterSystem({})", self.data.cartan)
    }
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
    }
}

impl Eq for CoxeterSystem {}

#[derive(Clone)]
pub struct Element {
    sys: CoxeterSystem,
    mat: Box<[i32]>,
    inv: Box<[i32]>,
    word: Word,
}

fn mat_mul(a: &[i32], b: &[i32], n: usize) -> Box<[i32]> {
    let mut out = vec![0i32; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out.into_boxed_slice()
}

fn identity_mat(n: usize) -> Box<[i32]> {
    let mut m = vec![0i32; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m.into_boxed_slice()
}

/// Column `j` of `m` is the image of the simple root `j`; roots are either
/// nonnegative or nonpositive, so one negative entry decides the sign.
fn column_is_negative(m: &[i32], n: usize, j: usize) -> bool {
    (0..n).any(|i| m[i * n + j] < 0)
}

impl CoxeterSystem {
    pub fn from_type(cartan: CartanType) -> Self {
        let rank = cartan.rank();
        let cartan_matrix = cartan.cartan_matrix();
        let reflections = (0..rank)
            .map(|i| {
                // s_i(beta) = beta - <alpha_i^vee, beta> alpha_i
                let mut m = identity_mat(rank);
                for j in 0..rank {
                    m[i * rank + j] -= cartan_matrix[i][j];
                }
                m
            })
            .collect::<Vec<_>>();
        let positive_roots = positive_roots(&cartan_matrix);
        Self {
            data: Arc::new(SystemData {
                cartan,
                rank,
                coxeter_matrix: cartan.coxeter_matrix(),
                cartan_matrix,
                reflections,
                positive_roots,
                bruhat_memo: Mutex::new(HashMap::new()),
                table: OnceLock::new(),
                hecke: OnceLock::new(),
            }),
        }
    }

    /// Parses a Cartan type such as `"B3"` and builds its Weyl group.
    pub fn parse(cartan: &str) -> Result<Self, CoxeterError> {
        Ok(Self::from_type(cartan.parse()?))
    }

    pub fn cartan(&self) -> CartanType {
        self.data.cartan
    }

    pub fn rank(&self) -> usize {
        self.data.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.data.cartan_matrix
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.data.coxeter_matrix
    }

    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.data.positive_roots
    }

    pub fn order(&self) -> u128 {
        self.data.cartan.group_order()
    }

    pub fn identity(&self) -> Element {
        let n = self.rank();
        Element { sys: self.clone(), mat: identity_mat(n), inv: identity_mat(n), word: Box::new([]) }
    }

    /// The simple reflection with 0-based index `i`.
    pub fn generator(&self, i: usize) -> Result<Element, CoxeterError> {
        self.from_word(&[i])
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.rank()).map(|i| self.generator(i).unwrap()).collect()
    }

    /// Product of the generators along a 0-based word; the word need not be
    /// reduced.
    pub fn from_word(&self, word: &[usize]) -> Result<Element, CoxeterError> {
        let n = self.rank();
        let mut mat = identity_mat(n);
        let mut inv = identity_mat(n);
        for &s in word {
            let r = self.data.reflections.get(s).ok_or(CoxeterError::BadGenerator { index: s, rank: n })?;
            mat = mat_mul(&mat, r, n);
            inv = mat_mul(r, &inv, n);
        }
        Ok(self.canonicalize(mat, inv))
    }

    /// Parses the comma-separated 1-based word format; `""` and `"e"` are the
    /// identity.
    pub fn parse_element(&self, s: &str) -> Result<Element, CoxeterError> {
        let t = s.trim();
        if t.is_empty() || t == "e" {
            return Ok(self.identity());
        }
        let word = t
            .split(',')
            .map(|tok| match tok.trim().parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(CoxeterError::BadWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.from_word(&word)
    }

    fn canonicalize(&self, mat: Box<[i32]>, inv: Box<[i32]>) -> Element {
        let n = self.rank();
        let mut word = Vec::new();
        let (mut m, mut mi) = (mat.clone(), inv.clone());
        // Peel off the smallest left descent until nothing is left.
        while let Some(s) = (0..n).find(|&s| column_is_negative(&mi, n, s)) {
            let r = &self.data.reflections[s];
            m = mat_mul(r, &m, n);
            mi = mat_mul(&mi, r, n);
            word.push(s as u8);
        }
        debug_assert_eq!(m, identity_mat(n));
        Element { sys: self.clone(), mat, inv, word: word.into_boxed_slice() }
    }

    fn check(&self, x: &Element) -> Result<(), CoxeterError> {
        if &x.sys == self {
            Ok(())
        } else {
            Err(CoxeterError::MixedSystems)
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, CoxeterError> {
        self.check(a)?;
        self.check(b)?;
        let n = self.rank();
        Ok(self.canonicalize(mat_mul(&a.mat, &b.mat, n), mat_mul(&b.inv, &a.inv, n)))
    }

    /// `s_i * x` for the generator with 0-based index `i`.
    pub fn left_mul_gen(&self, i: usize, x: &Element) -> Result<Element, CoxeterError> {
        self.multiply(&self.generator(i)?, x)
    }

    /// `x * s_i` for the generator with 0-based index `i`.
    pub fn right_mul_gen(&self, x: &Element, i: usize) -> Result<Element, CoxeterError> {
        self.multiply(x, &self.generator(i)?)
    }

    pub fn inverse(&self, x: &Element) -> Result<Element, CoxeterError> {
        self.check(x)?;
        Ok(self.canonicalize(x.inv.clone(), x.mat.clone()))
    }

    /// 0-based indices `s` with `|sx| < |x|` (left) or `|xs| < |x|` (right).
    pub fn descents(&self, x: &Element, side: Side) -> BTreeSet<usize> {
        (0..self.rank()).filter(|&s| x.has_descent(s, side)).collect()
    }

    /// The unique element whose descent set is all of `S`.
    pub fn longest_element(&self) -> Element {
        let mut x = self.identity();
        while let Some(s) = (0..self.rank()).find(|&s| !x.has_descent(s, Side::Right)) {
            x = self.right_mul_gen(&x, s).unwrap();
        }
        x
    }

    /// Bruhat order via the lifting property, memoized on canonical words.
    pub fn bruhat_leq(&self, y: &Element, x: &Element) -> Result<bool, CoxeterError> {
        self.check(y)?;
        self.check(x)?;
        Ok(self.bruhat_rec(y, x))
    }

    fn bruhat_rec(&self, y: &Element, x: &Element) -> bool {
        let (ly, lx) = (y.length(), x.length());
        if ly > lx {
            return false;
        }
        if ly == lx {
            return y == x;
        }
        if ly == 0 {
            return true;
        }
        let key = (y.word.clone(), x.word.clone());
        if let Some(&hit) = self.data.bruhat_memo.lock().unwrap().get(&key) {
            return hit;
        }
        let s = x.word[0] as usize;
        let sx = self.left_mul_gen(s, x).unwrap();
        let result = if y.has_descent(s, Side::Left) {
            let sy = self.left_mul_gen(s, y).unwrap();
            self.bruhat_rec(&sy, &sx)
        } else {
            self.bruhat_rec(y, &sx)
        };
        self.data.bruhat_memo.lock().unwrap().insert(key, result);
        result
    }

    /// All `y` with `z <= y <= x`, sorted by length then ShortLex word.
    pub fn interval(&self, z: &Element, x: &Element) -> Result<Vec<Element>, CoxeterError> {
        self.check(z)?;
        self.check(x)?;
        if !self.bruhat_rec(z, x) {
            return Ok(Vec::new());
        }
        // Every subexpression of a reduced word of x lies below x, and every
        // element below x arises this way.
        let mut below: HashSet<Element> = HashSet::from([self.identity()]);
        for &s in x.word.iter() {
            let extra: Vec<Element> =
                below.iter().map(|y| self.right_mul_gen(y, s as usize).unwrap()).collect();
            below.extend(extra);
        }
        let mut out: Vec<Element> = below.into_iter().filter(|y| self.bruhat_rec(z, y)).collect();
        out.sort();
        Ok(out)
    }

    /// Every group element, breadth-first by length and ShortLex within a
    /// length.
    pub fn enumerate(&self) -> Vec<Element> {
        let mut out = vec![self.identity()];
        let mut level = vec![self.identity()];
        while !level.is_empty() {
            let mut next: Vec<Element> = level
                .iter()
                .flat_map(|x| {
                    (0..self.rank())
                        .filter(|&s| !x.has_descent(s, Side::Right))
                        .map(move |s| self.right_mul_gen(x, s).unwrap())
                })
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            next.sort();
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }

    /// Indexed multiplication and Bruhat tables, built on first use and
    /// shared by every clone of this system.
    pub fn group_table(&self) -> Result<Arc<GroupTable>, CoxeterError> {
        if let Some(t) = self.data.table.get() {
            return Ok(t.clone());
        }
        let order = self.order();
        if order > TABLE_LIMIT {
            return Err(CoxeterError::TooLarge {
                cartan: self.cartan().to_string(),
                order,
                limit: TABLE_LIMIT,
            });
        }
        let table = Arc::new(GroupTable::build(self));
        Ok(self.data.table.get_or_init(|| table).clone())
    }
}

impl CoxeterSystem {
    pub(crate) fn hecke_slot(&self) -> &OnceLock<Arc<crate::hecke::Caches>> {
        &self.data.hecke
    }
}

fn positive_roots(a: &[Vec<i32>]) -> Vec<Vec<i32>> {
    let n = a.len();
    let mut roots: Vec<Vec<i32>> = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    let mut seen: HashSet<Vec<i32>> = roots.iter().cloned().collect();
    let mut k = 0;
    while k < roots.len() {
        let beta = roots[k].clone();
        for i in 0..n {
            let pairing: i32 = (0..n).map(|j| a[i][j] * beta[j]).sum();
            let mut gamma = beta.clone();
            gamma[i] -= pairing;
            if gamma.iter().all(|&c| c >= 0) && seen.insert(gamma.clone()) {
                roots.push(gamma);
            }
        }
        k += 1;
    }
    roots.sort_by(|x, y| x.iter().sum::<i32>().cmp(&y.iter().sum()).then(y.cmp(x)));
    roots
}

impl Element {
    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    /// ShortLex-minimal reduced word, 0-based generator indices.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Number of positive roots sent to negative roots; agrees with
    /// [`length`](Self::length).
    pub fn root_length(&self) -> usize {
        let n = self.sys.rank();
        self.sys
            .positive_roots()
            .iter()
            .filter(|beta| {
                (0..n).any(|i| (0..n).map(|j| self.mat[i * n + j] * beta[j]).sum::<i32>() < 0)
            })
            .count()
    }

    pub fn matrix(&self) -> Vec<Vec<i32>> {
        let n = self.sys.rank();
        self.mat.chunks(n).map(<[i32]>::to_vec).collect()
    }

    pub fn has_descent(&self, s: usize, side: Side) -> bool {
        let n = self.sys.rank();
        match side {
            Side::Right => column_is_negative(&self.mat, n, s),
            Side::Left => column_is_negative(&self.inv, n, s),
        }
    }

    /// Serialized word: comma-separated 1-based indices, `""` for identity.
    pub fn to_word_string(&self) -> String {
        let parts: Vec<String> = self.word.iter().map(|s| (s + 1).to_string()).collect();
        parts.join(",")
    }

    /// Human-readable form: `e` or `s2s1s3s2`.
    pub fn pretty(&self) -> String {
        if self.is_identity() {
            return "e".into();
        }
        self.word.iter().map(|s| format!("s{}", s + 1)).collect()
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.sys == other.sys && self.mat == other.mat
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl Ord for Element {
    /// Length first, then ShortLex on canonical words.
    fn cmp(&self, other: &Self) -> Ordering {
        self.length().cmp(&other.length()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}
