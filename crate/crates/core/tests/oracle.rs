use semihom_core::oracle::{
    count_contact_jets, milnor_number_oracle, verify_stratification, SparseIntPoly, DEFAULT_BUDGET,
};
use semihom_core::Error;

fn poly(s: &str) -> SparseIntPoly {
    SparseIntPoly::parse(s).unwrap()
}

#[test]
fn counts_depend_only_on_the_initial_form() {
    for (h, f) in [
        ("x0^2 + x1^2 + x2^2", "x0^2 + x1^2 + x2^2 + x0^3"),
        ("x0^2 + x1^2 + x2^2", "x0^2 + x1^2 + x2^2 + 4*x1^5 - x2^3"),
        ("x0^3 + x1^3", "x0^3 + x1^3 + x0^4 + 2*x1^7"),
    ] {
        for m in 1..=4 {
            for p in [5u64, 7] {
                let a = count_contact_jets(&poly(h), m, p, DEFAULT_BUDGET).unwrap();
                let b = count_contact_jets(&poly(f), m, p, DEFAULT_BUDGET).unwrap();
                assert_eq!(a, b, "{f} vs {h}, m = {m}, p = {p}");
            }
        }
    }
}

#[test]
fn empty_below_degree() {
    for (f, d) in [("x0^3 + x1^3 + x2^3", 3), ("x0^4 + x1^4 + x2^4", 4)] {
        for m in 1..d {
            let r = count_contact_jets(&poly(f), m, 5, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.total_count, 0);
            assert!(r.by_order.is_empty() && r.predicted_by_order.is_empty());
        }
    }
}

#[test]
fn stratification_holds_for_other_forms() {
    for (f, m, p) in [
        ("x0^2 + x1^2 + x2^2 + x3^2", 3, 3),
        ("x0^3 + 2*x1^3 + x2^3", 4, 7),
        ("x0^2 + x1^2", 6, 7),
        ("x0^4 + x1^4 + x2^4", 5, 5),
    ] {
        assert!(verify_stratification(&poly(f), m, p, DEFAULT_BUDGET).unwrap(), "{f}, m = {m}, p = {p}");
    }
}

#[test]
fn total_is_sum_of_strata() {
    let r = count_contact_jets(&poly("x0^2 + x1^2 + x2^2"), 4, 5, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.total_count, r.by_order.values().sum::<u64>());
    assert_eq!(r.by_order.len(), 2);
}

#[test]
fn bad_reductions_are_reported() {
    assert!(matches!(
        count_contact_jets(&poly("x0^3 + x1^3 + x2^3"), 3, 3, DEFAULT_BUDGET),
        Err(Error::SingularReduction { p: 3, .. })
    ));
    assert!(matches!(
        count_contact_jets(&poly("x0^2 + x1^2"), 3, 9, DEFAULT_BUDGET),
        Err(Error::NotPrime(9))
    ));
}

#[test]
fn milnor_numbers_of_fermat_forms() {
    for n in 2..=4usize {
        for d in 2..=4u32 {
            assert_eq!(
                milnor_number_oracle(&SparseIntPoly::fermat(n, d)).unwrap(),
                ((d - 1) as u64).pow(n as u32)
            );
        }
    }
}
