use std::collections::HashMap;
use std::sync::OnceLock;

use super::{CoxeterSystem, Element, Side};

/// The whole group laid out by index, in (length, ShortLex) order, with
/// generator multiplication tables and the Bruhat order as bitsets.
///
/// Index 0 is always the identity and the last index is `w0`.
pub struct GroupTable {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    bruhat: OnceLock<Vec<Vec<u64>>>,
}

impl GroupTable {
    pub(super) fn build(sys: &CoxeterSystem) -> Self {
        let elements = sys.enumerate();
        let index: HashMap<Element, usize> =
            elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let rank = sys.rank();
        let lookup = |x: Element| index[&x];
        let right = elements
            .iter()
            .map(|x| (0..rank).map(|s| lookup(sys.right_mul_gen(x, s).unwrap())).collect())
            .collect();
        let left = elements
            .iter()
            .map(|x| (0..rank).map(|s| lookup(sys.left_mul_gen(s, x).unwrap())).collect())
            .collect();
        let inverse = elements.iter().map(|x| lookup(sys.inverse(x).unwrap())).collect();
        Self { elements, index, right, left, inverse, bruhat: OnceLock::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.right.first().map_or(0, Vec::len)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    /// Index of an element of this table's system.
    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn length(&self, i: usize) -> usize {
        self.elements[i].length()
    }

    /// Index of `x * s`.
    pub fn right_mul(&self, x: usize, s: usize) -> usize {
        self.right[x][s]
    }

    /// Index of `s * x`.
    pub fn left_mul(&self, s: usize, x: usize) -> usize {
        self.left[x][s]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.elements.len() - 1
    }

    /// Index of `w0 * x`.
    pub fn w0_times(&self, x: usize) -> usize {
        let mut y = self.longest();
        // w0 x = w0 s_{a1} ... s_{ak} for the canonical word of x.
        for &s in self.elements[x].word() {
            y = self.right_mul(y, s as usize);
        }
        y
    }

    pub fn has_descent(&self, x: usize, s: usize, side: Side) -> bool {
        self.elements[x].has_descent(s, side)
    }

    fn bruhat_rows(&self) -> &Vec<Vec<u64>> {
        self.bruhat.get_or_init(|| {
            let n = self.len();
            let words = n.div_ceil(64);
            let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
            for x in 0..n {
                let mut row = vec![0u64; words];
                if x == 0 {
                    row[0] = 1;
                } else {
                    // Lifting property with s the first letter of x.
                    let s = self.elements[x].word()[0] as usize;
                    let sx = self.left_mul(s, x);
                    let below = &rows[sx];
                    for y in 0..n {
                        let probe = if self.has_descent(y, s, Side::Left) { self.left_mul(s, y) } else { y };
                        if below[probe / 64] >> (probe % 64) & 1 == 1 {
                            row[y / 64] |= 1 << (y % 64);
                        }
                    }
                }
                rows.push(row);
            }
            rows
        })
    }

    /// `y <= x` in Bruhat order.
    pub fn leq(&self, y: usize, x: usize) -> bool {
        self.bruhat_rows()[x][y / 64] >> (y % 64) & 1 == 1
    }

    /// Indices of `y` with `z <= y <= x`, ascending.
    pub fn interval(&self, z: usize, x: usize) -> Vec<usize> {
        if !self.leq(z, x) {
            return Vec::new();
        }
        (z..=x).filter(|&y| self.leq(z, y) && self.leq(y, x)).collect()
    }

    /// All comparable pairs `(z, x)` with `z <= x`, ordered by `z` then `x`.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|z| (z..n).filter(move |&x| self.leq(z, x)).map(move |x| (z, x))).collect()
    }
}
