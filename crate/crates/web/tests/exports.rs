use plueckerlab::Field;
use plueckerlab_web::{check_divisor, classify_vector, evaluate_form, parse_vector};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn parses_terms() {
    let w = parse_vector("e[1,2] - 3/2 e[3,4] + 2*e[5,6]", 6, Field::Rational).unwrap();
    assert_eq!(w.len(), 3);
    assert_eq!(w.coefficient(0b1100), Field::Rational.from_ratio(-3, 2).unwrap());
    assert!(parse_vector("e[1,2] e[3,4]", 6, Field::Rational).is_err());
    assert!(parse_vector("e[1,7]", 6, Field::Rational).is_err());
    assert!(parse_vector("", 6, Field::Rational).is_err());
}

#[test]
fn classifies() {
    let v = parse(&classify_vector("e[1,2] + e[3,4]", 6, "q"));
    assert_eq!(v["decomposable"], false);
    assert_eq!(v["verdict"], "FailsMultiplicity");
    let v = parse(&classify_vector("e[1,2] + e[1,3] - 2 e[2,3]", 6, "fp"));
    assert_eq!(v["decomposable"], true);
    assert_eq!(v["verdict"], "InGrassmannian");
    assert_eq!(v["observed_codim"], 18);
    let v = parse(&classify_vector("e[1,2,3] + e[4,5,6]", 6, "q"));
    assert_eq!(v["decomposable"], false);
    assert_eq!(v["membership_test"], false);
    assert_eq!(v["observed_codim"], 1);
    assert!(parse(&classify_vector("e[1]", 40, "q"))["error"].is_string());
}

#[test]
fn evaluates() {
    let v = parse(&evaluate_form("e[1,2]\ne[3,4]\ne[5,6]", 2, "q"));
    assert_eq!(v["value"], "1/1");
    assert_eq!(v["multiplicity"], 0);
    let v = parse(&evaluate_form("e[1,2]\ne[1,2]\ne[3,4]", 2, "q"));
    assert_eq!(v["value"], "0/1");
}

#[test]
fn divisors() {
    let v = parse(&check_divisor("2,2", 3, 20, 1));
    assert_eq!(v["has_plucker_form"], true);
    assert_eq!(v["report"]["all_matched"], true);
    assert_eq!(v["det_map_rank"], 5);
    let v = parse(&check_divisor("3,1", 3, 20, 1));
    assert_eq!(v["has_plucker_form"], false);
    assert_eq!(v["report"]["identically_zero"], true);
    assert!(parse(&check_divisor("2,1", 3, 5, 1))["error"].is_string());
}
