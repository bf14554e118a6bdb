mod common;

use common::*;
use liecontract::cyclo::{rat, Cyclo, FieldError, Op};
use proptest::prelude::*;

fn omega_c(n: u32, k: i64) -> (f64, f64) {
    let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
    (t.cos(), t.sin())
}

#[test]
fn root_powers() {
    assert!(Cyclo::root_power(3, 0).unwrap().is_one());
    let w2 = Cyclo::root_power(3, 2).unwrap();
    assert_eq!(w2.coeffs(), &[rat(-1, 1), rat(-1, 1)]);
    assert_eq!(Cyclo::root_power(5, 7).unwrap(), Cyclo::root_power(5, 2).unwrap());
    assert_eq!(Cyclo::root_power(3, -1).unwrap(), w2);
    assert_eq!(Cyclo::root_power(4, 1), Err(FieldError::UnsupportedOrder(4)));
    assert_eq!(Cyclo::root_power(1, 0), Err(FieldError::UnsupportedOrder(1)));
}

#[test]
fn root_powers_match_complex_embedding() {
    for n in [3u32, 5, 7] {
        for k in -2 * n as i64..2 * n as i64 {
            assert!(close(to_complex(&Cyclo::root_power(n, k).unwrap()), omega_c(n, k)), "n={n} k={k}");
        }
    }
}

#[test]
fn roots_of_unity_sum_to_zero() {
    for n in [3u32, 5] {
        let sum = (0..n as i64).fold(Cyclo::zero(n), |acc, k| &acc + &Cyclo::root_power(n, k).unwrap());
        assert!(sum.is_zero());
    }
}

#[test]
fn root_power_multiplication_law() {
    for n in [3u32, 5] {
        for k in 0..2 * n as i64 {
            for m in 0..2 * n as i64 {
                let lhs = &Cyclo::root_power(n, k).unwrap() * &Cyclo::root_power(n, m).unwrap();
                assert_eq!(lhs, Cyclo::root_power(n, k + m).unwrap());
            }
        }
    }
}

#[test]
fn small_identities() {
    let w = Cyclo::omega(3);
    let w2 = &w * &w;
    assert_eq!(&w + &w2, int(-1));
    // (w - 1)(w^2 - 1) = w^3 - w - w^2 + 1 = 2 - (w + w^2) = 3
    assert_eq!(&(&w - &int(1)) * &(&w2 - &int(1)), int(3));
    assert!((&int(0) * &w).is_zero());
    assert_eq!(w.inv().unwrap(), w2);
    assert_eq!(int(3).inv().unwrap(), Cyclo::from_rational(3, rat(1, 3)));
    // (1 - w)(2 + w) = 2 - w - w^2 = 3
    let expected = (&int(2) + &w).scale(&rat(1, 3));
    assert_eq!((&int(1) - &w).inv().unwrap(), expected);
    assert_eq!(Cyclo::zero(3).inv(), Err(FieldError::DivisionByZero));
}

#[test]
fn mixed_orders_are_rejected() {
    let a = Cyclo::omega(3);
    let b = Cyclo::omega(5);
    for op in [Op::Add, Op::Sub, Op::Mul, Op::Div] {
        assert_eq!(a.arith(&b, op), Err(FieldError::OrderMismatch(3, 5)));
    }
}

#[test]
fn text_form() {
    assert_eq!(c3("1-2w").to_string(), "1-2w");
    assert_eq!(c3("(1/3)w").to_string(), "(1/3)w");
    assert_eq!(c3("w^2"), c3("-1-w"));
    assert_eq!(c3("w^3"), int(1));
    assert_eq!(Cyclo::parse(5, "w^4").unwrap().to_string(), "-1-w-w^2-w^3");
    assert_eq!(int(0).to_string(), "0");
    assert!(Cyclo::parse(3, "1+").is_err());
    assert!(Cyclo::parse(3, "1/0").is_err());
    assert!(Cyclo::parse(3, "x").is_err());
}

#[test]
fn galois_and_norm() {
    let w = Cyclo::omega(3);
    assert_eq!(w.conj(), &w * &w);
    // |1 - w|^2 = 3
    assert_eq!((&int(1) - &w).norm(), rat(3, 1));
    let z = Cyclo::omega(5);
    assert_eq!(z.galois(2), Cyclo::root_power(5, 2).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms_order_3(a in cyclo(3), b in cyclo(3), c in cyclo(3)) {
        field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn field_axioms_order_5(a in cyclo(5), b in cyclo(5), c in cyclo(5)) {
        field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn text_round_trip(a in cyclo(5)) {
        prop_assert_eq!(Cyclo::parse(5, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn division_inverts_multiplication(a in cyclo(3), b in nonzero_cyclo(3)) {
        prop_assert_eq!(&(&a * &b) / &b, a);
    }

    #[test]
    fn norm_is_multiplicative(a in cyclo(5), b in cyclo(5)) {
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }
}
