use std::collections::BTreeSet;

use hecke_core::completion::FilterSpec;
use hecke_core::rank::{check_certificate, render_certificate, Certificate, Ordinal};
use hecke_core::{Error, Generator, GroupWord};

/// Programs that parse print to text that parses back to the same program.
pub fn parse_program(text: &str) {
    if let Ok(program) = hecke_cli::parse_program(text) {
        let printed = hecke_cli::print_program(&program);
        let again = hecke_cli::parse_program(&printed).expect("printed program parses");
        assert_eq!(again.without_spans(), program.without_spans());
        assert_eq!(hecke_cli::print_program(&again), printed);
    }
}

/// Command-line arguments, one per whitespace-separated token.
pub fn parse_args(text: &str) {
    let args: Vec<&str> = text.split_whitespace().collect();
    if let Ok((line, cmd)) = hecke_cli::parse_args(&args) {
        let again = hecke_cli::parse_command(&line).expect("joined arguments parse");
        assert_eq!(again.without_spans(), cmd.without_spans());
    }
}

/// Pair expressions with two names in scope.
pub fn parse_expr(text: &str) {
    let names: BTreeSet<String> = ["p", "q"].into_iter().map(String::from).collect();
    if let Ok(expr) = hecke_cli::parse_expr(text, &names) {
        let again = hecke_cli::parse_expr(&expr.to_string(), &names).expect("displayed expression parses");
        assert_eq!(again.without_spans(), expr.without_spans());
    }
}

/// Filter files.
pub fn parse_filter(text: &str) {
    if let Ok(spec) = FilterSpec::parse(text) {
        let again = FilterSpec::parse(&spec.to_string()).expect("displayed filter parses");
        assert_eq!(again, spec);
        let _ = spec.label();
    }
}

/// Words over the alphabet of a wreath product.
pub fn parse_word(text: &str) {
    let gens: Vec<Generator> = ["t", "a", "t'", "r'"].into_iter().map(Generator::new).collect();
    if let Ok(word) = GroupWord::parse(text, &gens) {
        let shown = word.display(&gens).to_string();
        match GroupWord::parse(&shown, &gens) {
            Ok(again) => assert_eq!(again, word),
            Err(Error::WordSyntax { reason, .. }) => assert_eq!(reason, "exponent too large"),
            Err(e) => panic!("`{shown}` does not parse back: {e}"),
        }
    }
}

/// Ordinals in Cantor normal form.
pub fn parse_ordinal(text: &str) {
    if let Ok(o) = text.parse::<Ordinal>() {
        let again: Ordinal = o.to_string().parse().expect("displayed ordinal parses");
        assert_eq!(again, o);
        assert_eq!(Ordinal::zero().add(&o), o);
    }
}

/// Certificate JSON, as read by `rank --certificate`.
pub fn parse_certificate(text: &str) {
    if let Ok(cert) = serde_json::from_str::<Certificate>(text) {
        let _ = check_certificate(&cert);
        let _ = render_certificate(&cert);
        let json = serde_json::to_string(&cert).expect("certificate serializes");
        let again: Certificate = serde_json::from_str(&json).expect("serialized certificate parses");
        assert_eq!(again, cert);
    }
}
