use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoxeterError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A finite crystallographic Cartan type such as `A3` or `E6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, CoxeterError> {
        let legal = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !legal {
            return Err(CoxeterError::IllegalRank { family: family.letter(), rank });
        }
        Ok(Self { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan type of the Langlands dual group (B and C swap).
    pub fn dual(&self) -> Self {
        let family = match self.family {
            Family::B => Family::C,
            Family::C => Family::B,
            f => f,
        };
        Self { family, rank: self.rank }
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual() == *self
    }

    /// Order of the Weyl group, from the closed formulas per family.
    pub fn group_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    /// Cartan matrix `a[i][j] = <alpha_i^vee, alpha_j>` in Bourbaki numbering.
    pub fn cartan_matrix(&self) -> Vec<Vec<i32>> {
        let n = self.rank;
        let mut a = vec![vec![0i32; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => (0..n - 1).for_each(|i| link(i, i + 1)),
            Family::D => {
                (0..n - 2).for_each(|i| link(i, i + 1));
                link(n - 3, n - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                (2..n - 1).for_each(|i| link(i, i + 1));
            }
            Family::F => (0..3).for_each(|i| link(i, i + 1)),
            Family::G => link(0, 1),
        }
        match self.family {
            // alpha_n short
            Family::B => a[n - 1][n - 2] = -2,
            // alpha_n long
            Family::C => a[n - 2][n - 1] = -2,
            // alpha_3, alpha_4 short
            Family::F => a[2][1] = -2,
            // alpha_1 short
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }

    /// Coxeter matrix derived from the Cartan matrix.
    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        let a = self.cartan_matrix();
        let n = self.rank;
        let mut m = vec![vec![1u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i][j] = match a[i][j] * a[j][i] {
                        0 => 2,
                        1 => 3,
                        2 => 4,
                        3 => 6,
                        p => unreachable!("non-crystallographic product {p}"),
                    };
                }
            }
        }
        m
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = CoxeterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| CoxeterError::UnknownType(s.to_string()))?;
        let rank = chars
            .as_str()
            .parse::<usize>()
            .map_err(|_| CoxeterError::UnknownType(s.to_string()))?;
        Self::new(family, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CartanType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legal_ranks() {
        assert!("A1".parse::<CartanType>().is_ok());
        assert!("D3".parse::<CartanType>().is_err());
        assert!("B1".parse::<CartanType>().is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert!("F3".parse::<CartanType>().is_err());
        assert!("G2".parse::<CartanType>().is_ok());
        assert!("X2".parse::<CartanType>().is_err());
        assert!("A".parse::<CartanType>().is_err());
        assert_eq!("b3".parse::<CartanType>().unwrap().to_string(), "B3");
    }

    #[test]
    fn duals() {
        let b3: CartanType = "B3".parse().unwrap();
        assert_eq!(b3.dual().to_string(), "C3");
        assert_eq!(b3.dual().dual(), b3);
        assert!("F4".parse::<CartanType>().unwrap().is_self_dual());
        assert_eq!(b3.cartan_matrix(), {
            let mut t = b3.dual().cartan_matrix();
            // transpose
            for i in 0..3 {
                for j in 0..i {
                    let tmp = t[i][j];
                    t[i][j] = t[j][i];
                    t[j][i] = tmp;
                }
            }
            t
        });
    }

    #[test]
    fn coxeter_matrices() {
        let g2: CartanType = "G2".parse().unwrap();
        assert_eq!(g2.coxeter_matrix(), vec![vec![1, 6], vec![6, 1]]);
        let b2: CartanType = "B2".parse().unwrap();
        assert_eq!(b2.coxeter_matrix()[0][1], 4);
        let d4: CartanType = "D4".parse().unwrap();
        let m = d4.coxeter_matrix();
        assert_eq!((m[1][2], m[1][3], m[2][3], m[0][1]), (3, 3, 2, 3));
        let e6: CartanType = "E6".parse().unwrap();
        let m = e6.coxeter_matrix();
        assert_eq!((m[0][2], m[1][3], m[2][3], m[0][1]), (3, 3, 3, 2));
    }
}
