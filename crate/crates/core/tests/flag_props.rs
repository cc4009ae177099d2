use klr_core::flag_oracle::{
    element_to_permutation, enumerate_flags, oracle_report, relative_permutation, relative_position,
    stratum_counts, FiniteField, FlagPoint, Guard,
};
use klr_core::CoxeterSystem;
use proptest::prelude::*;

#[test]
fn counts_equal_r_polynomials() {
    for (n, q) in [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5), (4, 2)] {
        let report = oracle_report(n, q, 2, Guard::On).unwrap();
        assert!(report.passed(), "n={n} q={q}\n{}", report.to_text());
        assert!(report.cells_ok);
        assert_eq!(report.total_flags.to_string(), report.expected_total);
    }
}

#[test]
fn non_prime_field_of_order_four() {
    let report = oracle_report(3, 4, 1, Guard::On).unwrap();
    assert!(report.passed(), "{}", report.to_text());
    assert_eq!(report.total_flags, 5 * 21);
}

#[test]
fn sharding_does_not_change_counts() {
    let sys = CoxeterSystem::parse("A2").unwrap();
    let one = stratum_counts(&sys, 3, 1, Guard::On).unwrap();
    let four = stratum_counts(&sys, 3, 4, Guard::On).unwrap();
    assert_eq!(one, four);
    let a = oracle_report(3, 3, 1, Guard::On).unwrap();
    let b = oracle_report(3, 3, 4, Guard::On).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn csv_layout() {
    let report = oracle_report(2, 5, 1, Guard::On).unwrap();
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("y,y_prime,q,count,R_value,verdict"));
    assert!(csv.contains("\n,1,5,4,4,OK\n"));
    assert!(report.to_text().contains("(e, s1, 5, 4, 4, OK)"));
}

#[test]
fn relative_positions_of_all_flags_to_standard() {
    let sys = CoxeterSystem::parse("A2").unwrap();
    let f = FiniteField::new(2).unwrap();
    let std = FlagPoint::standard(3);
    let mut sizes = std::collections::BTreeMap::new();
    for flag in enumerate_flags(&f, 3, Guard::On).unwrap() {
        *sizes.entry(relative_position(&sys, &f, &std, &flag).unwrap()).or_insert(0u64) += 1;
    }
    for (w, c) in sizes {
        assert_eq!(c, 1 << w.length());
    }
}

fn random_flag(field: &FiniteField, n: usize, entries: &[u8]) -> Option<FlagPoint> {
    let q = field.order() as u8;
    let basis: Vec<Vec<u8>> = entries.chunks(n).map(|r| r.iter().map(|x| x % q).collect()).collect();
    FlagPoint::from_basis(field, &basis)
}

proptest! {
    #[test]
    fn positions_are_mutually_inverse(q in prop::sample::select(vec![2u64, 3, 4, 5]), a in prop::collection::vec(any::<u8>(), 16), b in prop::collection::vec(any::<u8>(), 16)) {
        let field = FiniteField::new(q).unwrap();
        let (Some(e), Some(f)) = (random_flag(&field, 4, &a), random_flag(&field, 4, &b)) else {
            return Ok(());
        };
        let ef = relative_permutation(&field, &e, &f).unwrap();
        let fe = relative_permutation(&field, &f, &e).unwrap();
        for i in 0..4 {
            prop_assert_eq!(fe[ef[i]], i);
        }
        prop_assert_eq!(relative_permutation(&field, &e, &e).unwrap(), vec![0, 1, 2, 3]);
        let sys = CoxeterSystem::parse("A3").unwrap();
        prop_assert_eq!(element_to_permutation(&relative_position(&sys, &field, &e, &f).unwrap()), ef);
    }

    #[test]
    fn canonical_form_ignores_basis_choice(a in prop::collection::vec(any::<u8>(), 9), c in 1u8..5, k in 0u8..5) {
        // Rescaling a row and adding a multiple of an earlier row keeps the flag.
        let field = FiniteField::new(5).unwrap();
        let basis: Vec<Vec<u8>> = a.chunks(3).map(|r| r.iter().map(|x| x % 5).collect()).collect();
        let Some(flag) = FlagPoint::from_basis(&field, &basis) else {
            return Ok(());
        };
        let mut other = basis.clone();
        other[2] = other[2].iter().zip(&basis[0]).map(|(&x, &y)| field.add(field.mul(c, x), field.mul(k, y))).collect();
        other[1] = other[1].iter().map(|&x| field.mul(c, x)).collect();
        prop_assert_eq!(FlagPoint::from_basis(&field, &other), Some(flag));
    }
}

#[test]
fn dimension_mismatch_and_guard() {
    let f = FiniteField::new(2).unwrap();
    assert!(relative_permutation(&f, &FlagPoint::standard(2), &FlagPoint::standard(3)).is_err());
    assert!(oracle_report(5, 2, 1, Guard::On).is_err());
    assert!(oracle_report(1, 2, 1, Guard::On).is_err());
}
