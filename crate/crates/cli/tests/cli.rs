use std::path::PathBuf;
use std::process::{Command, Output};

use idealconv::json::{function_from_json, function_to_json, term_from_json, term_to_json};
use idealconv_core::sample::{SampleMode, TermSampler};
use idealconv_core::{Bijection, Universe};
use proptest::prelude::*;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn idealconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idealconv")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ideal_info_reports_flags() {
    let v = json_of(&idealconv(&["ideal", "info", "pringsheim"]));
    assert_eq!(v["universe"], "natpair");
    assert_eq!(v["admissible"], true);
    assert_eq!(v["proper"], true);

    let v = json_of(&idealconv(&["ideal", "info", "improper"]));
    assert_eq!(v["proper"], false);
    assert_eq!(v["has_maximum"], true);

    let row = r#"{"atom":"row","args":[1]}"#;
    let v = json_of(&idealconv(&["ideal", "info", "principal", "--set", row]));
    assert_eq!(v["maximum"], serde_json::from_str::<Value>(row).unwrap());
}

#[test]
fn partition_ideals_take_parameters() {
    let v = json_of(&idealconv(&["ideal", "info", "mac", "--params", r#"{"partition":"gamma"}"#]));
    assert_eq!(v["ideal"]["params"]["partition"], "gamma");
    assert_eq!(v["admissible"], true);
}

#[test]
fn set_commands() {
    let cell = r#"{"op":"inter","terms":[{"atom":"row","args":[2]},{"atom":"col","args":[3]}]}"#;
    let v = json_of(&idealconv(&["set", "classify", cell]));
    assert_eq!(v["result"], "finite");
    assert_eq!(v["cardinality"], 1);

    let v = json_of(&idealconv(&["set", "member", r#"{"atom":"tail","args":[5]}"#, "4"]));
    assert_eq!(v["member"], false);

    let v = json_of(&idealconv(&["set", "classify", &fixture("lower_quadrant.json"), "--ideal", "pringsheim"]));
    assert_eq!(v["in_ideal"], true);
}

#[test]
fn convergence_commands() {
    let diag = fixture("diagonal_columns.json");
    let v = json_of(&idealconv(&["conv", "decide", &diag, "--I", "uni", "--x", "0"]));
    assert_eq!(v["verdict"], "yes");
    let v = json_of(&idealconv(&["conv", "decide", &diag, "--I", "uni", "--J", "fin"]));
    assert_eq!(v["verdict"], "no");

    let v = json_of(&idealconv(&["conv", "witness", &fixture("constant.json")]));
    assert_eq!(v["verdict"], "converges");
    assert_eq!(v["witness"]["atom"], "full");

    let out = idealconv(&["conv", "witness", &fixture("column_bump.json"), "--output", "text"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "compl(col(1))\n");
}

#[test]
fn finite_codomains() {
    let sp = fixture("sierpinski.json");
    assert_eq!(json_of(&idealconv(&["conv", "decide", &sp]))["verdict"], "yes");
    assert_eq!(json_of(&idealconv(&["conv", "decide", &sp, "--x", "0"]))["verdict"], "no");
}

#[test]
fn additive_property() {
    let v = json_of(&idealconv(&["ap", "--I", "uni", "--J", "fin"]));
    assert_eq!(v["verdict"], "fails");
    assert_eq!(v["witness"]["partition"], "columns");
    let v = json_of(&idealconv(&["ap", "--I", "fin", "--J", "fin"]));
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["rule"], "subset-rule");
    assert_eq!(json_of(&idealconv(&["ap", &fixture("uni_fin.json")]))["verdict"], "fails");
}

#[test]
fn oracle_suite_is_clean() {
    let v = json_of(&idealconv(&["oracle", "run", "--size", "3", "--suite", "lemma"]));
    assert_eq!(v["total_violations"], 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| idealconv(args).status.code();
    assert_eq!(code(&["ideal", "info", "nonesuch"]), Some(2));
    assert_eq!(code(&["set", "classify", r#"{"atom":"tail","args":[1],"extra":0}"#]), Some(2));
    assert_eq!(code(&["set", "classify", "{not json"]), Some(2));
    assert_eq!(code(&["oracle", "run", "--size", "9", "--suite", "lemma"]), Some(2));
    let residues = r#"{"atom":"block","args":[{"residues":3},1]}"#;
    let pushed = r#"{"ideal":"pushforward","params":{"base":"uni","bijection":"shell"}}"#;
    assert_eq!(code(&["set", "classify", residues, "--ideal", pushed]), Some(3));
    let undecided = fixture("undecided.json");
    assert_eq!(code(&["conv", "decide", &undecided]), Some(0));
    assert_eq!(code(&["conv", "decide", &undecided, "--strict"]), Some(3));
}

#[test]
fn fixture_functions_round_trip() {
    for name in ["diagonal_columns.json", "constant.json", "column_bump.json", "sierpinski.json"] {
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let f = function_from_json(&doc["function"]).unwrap();
        assert_eq!(function_from_json(&function_to_json(&f)).unwrap(), f, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn terms_round_trip_byte_for_byte(seed in any::<u64>(), pair in any::<bool>(), mode in 0usize..4) {
        let u = if pair { Universe::NatPair } else { Universe::Nat };
        let mode = match mode {
            0 => SampleMode::Native,
            1 => SampleMode::Residues,
            2 => SampleMode::Pulled(Bijection::Cantor),
            _ => SampleMode::Pulled(Bijection::Shell),
        };
        let t = TermSampler::new(seed).with_mode(mode).term(u);
        let printed = serde_json::to_string(&term_to_json(&t)).unwrap();
        let parsed = term_from_json(&serde_json::from_str(&printed).unwrap()).unwrap();
        prop_assert_eq!(&parsed, &t);
        prop_assert_eq!(serde_json::to_string(&term_to_json(&parsed)).unwrap(), printed);
    }
}
