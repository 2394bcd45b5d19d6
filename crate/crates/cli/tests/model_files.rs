use hs_cli::model::ModelFile;
use hs_cli::parse::{parse_form, parse_model, parse_scalar, ErrorKind};
use hs_core::catalog;
use hs_exact::Scalar;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn declared(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn every_catalog_entry_round_trips() {
    for charges in 1..=3 {
        for e in catalog::all(charges) {
            let file = ModelFile::from_entry(&e);
            let text = file.to_text();
            let back = parse_model(&text).unwrap_or_else(|err| panic!("{}: {err}\n{text}", e.name));
            assert_eq!(back, file, "{}", e.name);
            assert_eq!(back.to_text(), text, "{}", e.name);
            let rebuilt = back.to_entry(&e.name).expect("valid entry");
            assert_eq!(rebuilt.model.structure(), e.model.structure(), "{}", e.name);
            assert_eq!(rebuilt.pair, e.pair, "{}", e.name);
        }
    }
}

#[test]
fn h19_second_equation_matches_the_catalog() {
    let text = "[algebra]\ndim = 3\nd w1 = 0\nd w2 = w1^w3 + w1^~w3\nd w3 = i*w1^~w2 - i*w2^~w1\n";
    let m = parse_model(text).unwrap();
    let e = m.to_entry("h19").unwrap();
    assert_eq!(e.model.structure(), catalog::h19_model().structure());
}

#[test]
fn sl2c_first_equation() {
    let f = parse_form("w2^w3", 3, &BTreeSet::new()).unwrap();
    assert_eq!(f, catalog::sl2c_model().structure()[0]);
    let g = parse_form("-w3^w2", 3, &BTreeSet::new()).unwrap();
    assert_eq!(f, g);
}

#[test]
fn degree_mismatch_is_reported() {
    let err = parse_model("[algebra]\ndim = 3\nd w1 = w1\n").unwrap_err();
    assert_eq!(err.kind, ErrorKind::DegreeMismatch);
    assert_eq!(err.line, 3);
    let err = parse_model("[algebra]\ndim = 3\nd w1 = w2^w3 + w1\n").unwrap_err();
    assert_eq!(err.kind, ErrorKind::DegreeMismatch);
}

#[test]
fn lexical_error_position() {
    let err = parse_model("[algebra]\ndim = 3\nd w1 = w2^ $ w3\n").unwrap_err();
    assert_eq!(err.kind, ErrorKind::Lexical);
    assert_eq!((err.line, err.col), (3, 12));
}

#[test]
fn syntax_error_lists_expected_tokens() {
    let err = parse_model("[algebra]\ndim = 3\nd w1 = w2^w3 +\n").unwrap_err();
    assert_eq!(err.kind, ErrorKind::Syntax);
    assert_eq!(err.line, 3);
    assert!(err.expected.iter().any(|x| x.contains("coframe")), "{:?}", err.expected);
    assert!(err.to_string().contains("line 3"));
}

#[test]
fn undeclared_symbol_is_reported() {
    let err = parse_model("[algebra]\ndim = 3\nd w1 = q*w2^w3\n").unwrap_err();
    assert_eq!(err.kind, ErrorKind::UndeclaredSymbol);
    assert_eq!((err.line, err.col), (3, 8));
    assert!(parse_scalar("2*b", &declared(&["a"])).is_err());
    assert!(parse_scalar("2*a", &declared(&["a"])).is_ok());
}

#[test]
fn scalar_powers_and_imaginary_literals() {
    let d = declared(&["a", "pi"]);
    let x = parse_scalar("-1/2*i*a^-1*pi^2 + 3i", &d).unwrap();
    let y = parse_scalar(&x.to_string(), &d).unwrap();
    assert_eq!(x, y);
    assert_eq!(parse_scalar("(1+i)^2", &d).unwrap(), &Scalar::i() * &Scalar::from_int(2));
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    let term = (-5i64..=5, 1i64..=4, -5i64..=5, -2i32..=2, 0i32..=3);
    prop::collection::vec(term, 1..4).prop_map(|ts| {
        let a = Scalar::sym("a");
        let pi = Scalar::sym("pi");
        ts.into_iter().fold(Scalar::zero(), |acc, (re, den, im, ea, ep)| {
            let c = Scalar::gauss((re, den), (im, 1));
            &acc + &(&(&c * &a.pow(ea)) * &pi.pow(ep))
        })
    })
}

proptest! {
    #[test]
    fn scalar_text_round_trips(x in arb_scalar()) {
        let d = declared(&["a", "pi"]);
        prop_assert_eq!(parse_scalar(&x.to_string(), &d).unwrap(), x);
    }
}
