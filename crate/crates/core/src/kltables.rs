//! Tables of (ell-)Kazhdan-Lusztig polynomials.
//!
//! For ell = 0 the table is computed from the Hecke algebra. For ell > 0 the
//! polynomials come from JSON files of the form
//!
//! ```json
//! { "cartan": "B3", "ell": 2, "provenance": "...",
//!   "polys": { "<y-word>|<x-word>": [[exp, coeff], ...] } }
//! ```
//!
//! Words are canonical reduced words in the comma-separated 1-based format,
//! exponent/coefficient pairs are strictly increasing in the exponent with
//! nonzero coefficients, and absent keys mean zero. `provenance` is optional.
//!
//! Tables for the Langlands dual type use the same generator numbering: a
//! `C3` table is read with generator `i` of `C3` identified with generator
//! `i` of `B3`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::coxeter::{CartanType, CoxeterSystem, Element, GroupTable};
use crate::error::TableError;
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::laurent::LaurentPoly;

/// A canonical reduced word, ordered by length then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordKey(pub String);

impl WordKey {
    fn letters(&self) -> Vec<u32> {
        if self.0.is_empty() {
            return Vec::new();
        }
        self.0.split(',').map(|t| t.parse().unwrap_or(u32::MAX)).collect()
    }
}

impl Ord for WordKey {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.letters(), other.letters());
        a.len().cmp(&b.len()).then_with(|| a.cmp(&b))
    }
}

impl PartialOrd for WordKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<&Element> for WordKey {
    fn from(x: &Element) -> Self {
        WordKey(x.to_word_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Diagonal,
    Support,
    Nonnegativity,
    BarInvariance,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Diagonal => "diagonal ≠ 1",
            Rule::Support => "support outside Bruhat interval",
            Rule::Nonnegativity => "negative coefficient",
            Rule::BarInvariance => "bar-invariance of b_x",
        })
    }
}

/// One failed table invariant, naming the offending `(y, x)` or `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub y: Option<String>,
    pub x: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.y {
            Some(y) => write!(f, "{} at (y={:?}, x={:?})", self.rule, y, self.x)?,
            None => write!(f, "{} at x={:?}", self.rule, self.x)?,
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLTable {
    cartan: CartanType,
    ell: u32,
    /// Keyed by `(y, x)`.
    polys: BTreeMap<(WordKey, WordKey), LaurentPoly>,
    provenance: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    cartan: String,
    ell: u32,
    #[serde(default)]
    provenance: Option<String>,
    polys: BTreeMap<String, Vec<(i64, i64)>>,
}

struct OrderedPolys<'a>(&'a BTreeMap<(WordKey, WordKey), LaurentPoly>);

impl Serialize for OrderedPolys<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        let mut keys: Vec<&(WordKey, WordKey)> = self.0.keys().collect();
        // x-major so a column b_x is contiguous in the file.
        keys.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        for key in keys {
            let pairs: Result<Vec<(i32, i64)>, S::Error> = self.0[key]
                .terms()
                .map(|(e, c)| {
                    c.to_i64()
                        .map(|c| (e, c))
                        .ok_or_else(|| serde::ser::Error::custom("coefficient exceeds 64 bits"))
                })
                .collect();
            map.serialize_entry(&format!("{}|{}", key.0 .0, key.1 .0), &pairs?)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TableOut<'a> {
    cartan: String,
    ell: u32,
    provenance: &'a str,
    polys: OrderedPolys<'a>,
}

impl KLTable {
    /// The ell = 0 table of ordinary Kazhdan-Lusztig polynomials.
    pub fn default_table(sys: &CoxeterSystem) -> Result<Self, TableError> {
        let hecke = HeckeAlgebra::new(sys)?;
        let t = hecke.group();
        let mut polys = BTreeMap::new();
        for x in 0..t.len() {
            for y in 0..=x {
                let h = hecke.kl_dense(y, x);
                if !h.is_zero() {
                    polys.insert((WordKey::from(t.element(y)), WordKey::from(t.element(x))), h.clone());
                }
            }
        }
        Ok(Self {
            cartan: sys.cartan(),
            ell: 0,
            polys,
            provenance: "computed: ordinary Kazhdan-Lusztig polynomials".into(),
        })
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// `h_{y,x}` by serialized words; zero when absent.
    pub fn get(&self, y: &str, x: &str) -> LaurentPoly {
        self.polys.get(&(WordKey(y.into()), WordKey(x.into()))).cloned().unwrap_or_default()
    }

    /// Entries as `((y, x), h_{y,x})`.
    pub fn entries(&self) -> impl Iterator<Item = ((&str, &str), &LaurentPoly)> {
        self.polys.iter().map(|((y, x), p)| ((y.0.as_str(), x.0.as_str()), p))
    }

    /// The same polynomials under a different `ell` label and provenance.
    pub fn relabelled(&self, ell: u32, provenance: impl Into<String>) -> Self {
        Self { ell, provenance: provenance.into(), ..self.clone() }
    }

    /// Replaces one entry, dropping it when `poly` is zero. Unvalidated.
    pub fn with_entry(&self, y: &str, x: &str, poly: LaurentPoly) -> Self {
        let mut out = self.clone();
        let key = (WordKey(y.into()), WordKey(x.into()));
        if poly.is_zero() {
            out.polys.remove(&key);
        } else {
            out.polys.insert(key, poly);
        }
        out
    }

    pub fn from_json_str(text: &str, expected: CartanType) -> Result<Self, TableError> {
        let file: TableFile =
            serde_json::from_str(text).map_err(|e| TableError::Schema(e.to_string()))?;
        let cartan: CartanType = file.cartan.parse().map_err(|e| TableError::Schema(format!("{e}")))?;
        if cartan != expected {
            return Err(TableError::TypeMismatch { expected: expected.to_string(), found: cartan.to_string() });
        }
        let sys = CoxeterSystem::from_type(cartan);
        let mut polys = BTreeMap::new();
        for (key, pairs) in file.polys {
            let (y, x) = key
                .split_once('|')
                .ok_or_else(|| TableError::Schema(format!("key {key:?} is not of the form \"y|x\"")))?;
            for w in [y, x] {
                let canonical = sys
                    .parse_element(w)
                    .map_err(|e| TableError::Schema(format!("key {key:?}: {e}")))?
                    .to_word_string();
                if canonical != w {
                    return Err(TableError::Schema(format!(
                        "key {key:?}: word {w:?} is not canonical (expected {canonical:?})"
                    )));
                }
            }
            let mut terms = Vec::with_capacity(pairs.len());
            let mut last: Option<i64> = None;
            for (exp, coeff) in pairs {
                if coeff == 0 {
                    return Err(TableError::Schema(format!("key {key:?}: zero coefficient at exponent {exp}")));
                }
                match last {
                    Some(prev) if prev == exp => {
                        return Err(TableError::Schema(format!("key {key:?}: duplicate exponent {exp}")))
                    }
                    Some(prev) if prev > exp => {
                        return Err(TableError::Schema(format!("key {key:?}: exponents not sorted")))
                    }
                    _ => {}
                }
                last = Some(exp);
                let exp = i32::try_from(exp)
                    .map_err(|_| TableError::Schema(format!("key {key:?}: exponent {exp} out of range")))?;
                terms.push((exp, BigInt::from(coeff)));
            }
            let poly = LaurentPoly::from_terms(terms);
            if !poly.is_zero() {
                polys.insert((WordKey(y.into()), WordKey(x.into())), poly);
            }
        }
        let table = Self {
            cartan,
            ell: file.ell,
            polys,
            provenance: file.provenance.unwrap_or_default(),
        };
        table.validate(&sys)?;
        Ok(table)
    }

    /// Reads and fully validates a table file.
    pub fn load(path: impl AsRef<Path>, expected: CartanType) -> Result<Self, TableError> {
        Self::from_json_str(&std::fs::read_to_string(path)?, expected)
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        let out = TableOut {
            cartan: self.cartan.to_string(),
            ell: self.ell,
            provenance: &self.provenance,
            polys: OrderedPolys(&self.polys),
        };
        let mut s = serde_json::to_string_pretty(&out).map_err(|e| TableError::Schema(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TableError> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Checks diagonal, support, nonnegativity and bar-invariance of every
    /// `b_x = Σ_y h_{y,x} δ_y`, returning all violations.
    pub fn violations(&self, sys: &CoxeterSystem) -> Result<Vec<Violation>, TableError> {
        let hecke = HeckeAlgebra::new(sys)?;
        let t = hecke.group();
        let mut out = Vec::new();
        let mut columns: HashMap<usize, Vec<(usize, &LaurentPoly)>> = HashMap::new();
        for ((y, x), p) in &self.polys {
            let yi = index_of(t, sys, &y.0)?;
            let xi = index_of(t, sys, &x.0)?;
            if !t.leq(yi, xi) {
                out.push(Violation { rule: Rule::Support, y: Some(y.0.clone()), x: x.0.clone(), detail: p.to_string() });
            }
            if !p.all_nonnegative() {
                out.push(Violation {
                    rule: Rule::Nonnegativity,
                    y: Some(y.0.clone()),
                    x: x.0.clone(),
                    detail: p.to_string(),
                });
            }
            columns.entry(xi).or_default().push((yi, p));
        }
        for xi in 0..t.len() {
            let x = t.element(xi);
            let diag = columns.get(&xi).and_then(|c| c.iter().find(|(y, _)| *y == xi)).map(|(_, p)| (*p).clone());
            if !diag.as_ref().is_some_and(LaurentPoly::is_one) {
                out.push(Violation {
                    rule: Rule::Diagonal,
                    y: Some(x.to_word_string()),
                    x: x.to_word_string(),
                    detail: format!("found {}", diag.unwrap_or_default()),
                });
            }
            let col = columns.get(&xi).map(Vec::as_slice).unwrap_or_default();
            let b = HeckeElement::from_terms(sys, col.iter().map(|&(y, p)| (t.element(y).clone(), p.clone())))?;
            let check = hecke.bar_invariance_check(&b)?;
            if let Some((at, lhs, rhs)) = check.failure {
                out.push(Violation {
                    rule: Rule::BarInvariance,
                    y: None,
                    x: x.to_word_string(),
                    detail: format!("coefficient of δ_{at}: bar gives {lhs}, r-sum gives {rhs}"),
                });
            }
        }
        Ok(out)
    }

    pub fn validate(&self, sys: &CoxeterSystem) -> Result<(), TableError> {
        if sys.cartan() != self.cartan && sys.cartan() != self.cartan.dual() {
            return Err(TableError::TypeMismatch { expected: sys.cartan().to_string(), found: self.cartan.to_string() });
        }
        let v = self.violations(sys)?;
        if v.is_empty() {
            Ok(())
        } else {
            Err(TableError::Invalid(v))
        }
    }

    /// Dense lookup `h(y, x)` over the group table of `sys`, whose type must
    /// be this table's type or its dual (generators identified by index).
    pub fn resolve(&self, sys: &CoxeterSystem) -> Result<ResolvedTable, TableError> {
        if sys.cartan() != self.cartan && sys.cartan() != self.cartan.dual() {
            return Err(TableError::TypeMismatch { expected: sys.cartan().to_string(), found: self.cartan.to_string() });
        }
        let t = sys.group_table()?;
        let n = t.len();
        let mut rows = vec![vec![LaurentPoly::zero(); n]; n];
        for ((y, x), p) in &self.polys {
            rows[index_of(&t, sys, &x.0)?][index_of(&t, sys, &y.0)?] = p.clone();
        }
        Ok(ResolvedTable { cartan: self.cartan, ell: self.ell, rows })
    }
}

fn index_of(t: &GroupTable, sys: &CoxeterSystem, word: &str) -> Result<usize, TableError> {
    let x = sys.parse_element(word)?;
    Ok(t.index_of(&x).expect("enumerated group contains every element"))
}

/// A table laid out by group-table index: `h(y, x)`.
#[derive(Debug, Clone)]
pub struct ResolvedTable {
    cartan: CartanType,
    ell: u32,
    rows: Vec<Vec<LaurentPoly>>,
}

impl ResolvedTable {
    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn h(&self, y: usize, x: usize) -> &LaurentPoly {
        &self.rows[x][y]
    }
}

/// Loaded tables keyed by `(type, ell)`, used to resolve dual-type data.
#[derive(Debug, Clone, Default)]
pub struct TableSet {
    tables: BTreeMap<(CartanType, u32), KLTable>,
}

impl TableSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: KLTable) {
        self.tables.insert((t.cartan, t.ell), t);
    }

    pub fn get(&self, cartan: CartanType, ell: u32) -> Option<&KLTable> {
        self.tables.get(&(cartan, ell))
    }

    /// The table for the Langlands dual type. For ell = 0 this is a pure
    /// relabelling; for ell > 0 a self-dual type reuses `t` and otherwise a
    /// dual-type table must have been inserted.
    pub fn dual_table(&self, t: &KLTable) -> Result<KLTable, TableError> {
        let dual = t.cartan.dual();
        if t.ell == 0 || dual == t.cartan {
            return Ok(KLTable { cartan: dual, ..t.clone() });
        }
        self.get(dual, t.ell)
            .cloned()
            .ok_or_else(|| TableError::MissingDual { dual: dual.to_string(), ell: t.ell })
    }
}

/// [`TableSet::dual_table`] as a free function.
pub fn dual_table(t: &KLTable, loaded: &TableSet) -> Result<KLTable, TableError> {
    loaded.dual_table(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(t: &str) -> (CoxeterSystem, KLTable) {
        let sys = CoxeterSystem::parse(t).unwrap();
        let table = KLTable::default_table(&sys).unwrap();
        (sys, table)
    }

    #[test]
    fn rank_one_table() {
        let (sys, t) = table("A1");
        assert_eq!(t.len(), 3);
        assert!(t.get("", "").is_one());
        assert_eq!(t.get("", "1"), LaurentPoly::v());
        assert!(t.get("1", "1").is_one());
        assert!(t.get("1", "").is_zero());
        t.validate(&sys).unwrap();
    }

    #[test]
    fn a2_table_is_trivial() {
        let (sys, t) = table("A2");
        let elems = sys.enumerate();
        for x in &elems {
            for y in &elems {
                let h = t.get(&y.to_word_string(), &x.to_word_string());
                if sys.bruhat_leq(y, x).unwrap() {
                    assert_eq!(h, LaurentPoly::monomial(1, (x.length() - y.length()) as i32));
                } else {
                    assert!(h.is_zero());
                }
            }
        }
        t.validate(&sys).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let (_, t) = table("B2");
        let json = t.to_json().unwrap();
        let back = KLTable::from_json_str(&json, "B2".parse().unwrap()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn corrupted_diagonal_is_named() {
        let (sys, t) = table("A2");
        let bad = t.with_entry("1", "1", LaurentPoly::v());
        let v = bad.violations(&sys).unwrap();
        assert!(v.iter().any(|v| v.rule == Rule::Diagonal && v.x == "1"));
        assert!(v.iter().any(|v| v.rule == Rule::Diagonal && v.to_string().contains("diagonal ≠ 1")));
    }

    #[test]
    fn perturbed_coefficient_breaks_bar_invariance() {
        let (sys, t) = table("A2");
        let bad = t.with_entry("", "1,2", "2*v^2".parse().unwrap());
        let v = bad.violations(&sys).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::BarInvariance);
        assert_eq!(v[0].x, "1,2");
    }

    #[test]
    fn support_and_sign_violations() {
        let (sys, t) = table("A2");
        let bad = t.with_entry("1", "2", LaurentPoly::v()).with_entry("", "1", "-v".parse().unwrap());
        let rules: Vec<Rule> = bad.violations(&sys).unwrap().iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::Support));
        assert!(rules.contains(&Rule::Nonnegativity));
    }

    #[test]
    fn schema_errors() {
        let a2: CartanType = "A2".parse().unwrap();
        let cases = [
            r#"{"cartan":"A2","ell":0}"#,
            r#"{"cartan":"A2","ell":0,"polys":{"|":[[0,1],[0,1]]}}"#,
            r#"{"cartan":"A2","ell":0,"polys":{"|":[[0,0]]}}"#,
            r#"{"cartan":"A2","ell":0,"polys":{"|":[[1,1],[0,1]]}}"#,
            r#"{"cartan":"A2","ell":0,"polys":{"2,1,2|":[[0,1]]}}"#,
            r#"{"cartan":"A2","ell":0,"polys":{"x":[[0,1]]}}"#,
            r#"{"cartan":"A2","ell":0,"polys":{},"extra":1}"#,
        ];
        for c in cases {
            assert!(matches!(KLTable::from_json_str(c, a2), Err(TableError::Schema(_))), "{c}");
        }
        let wrong = r#"{"cartan":"B2","ell":0,"polys":{}}"#;
        assert!(matches!(KLTable::from_json_str(wrong, a2), Err(TableError::TypeMismatch { .. })));
    }

    #[test]
    fn dual_tables() {
        let set = TableSet::new();
        let (_, a2) = table("A2");
        assert_eq!(set.dual_table(&a2).unwrap(), a2);
        let (b2sys, b2) = table("B2");
        let c2 = set.dual_table(&b2).unwrap();
        assert_eq!(c2.cartan().to_string(), "C2");
        assert_eq!(c2.polys, b2.polys);
        assert_eq!(set.dual_table(&c2).unwrap(), b2);
        c2.validate(&b2sys).unwrap();

        let (_, b3) = table("B3");
        let b3_ell2 = b3.relabelled(2, "synthetic");
        assert!(matches!(set.dual_table(&b3_ell2), Err(TableError::MissingDual { .. })));
        let mut loaded = TableSet::new();
        let c3_ell2 = KLTable { cartan: "C3".parse().unwrap(), ..b3_ell2.clone() };
        loaded.insert(c3_ell2.clone());
        assert_eq!(dual_table(&b3_ell2, &loaded).unwrap(), c3_ell2);
    }
}
