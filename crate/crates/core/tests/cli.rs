use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use serde_json::Value;

use semiab::algebra::builders::{zmod_cyclic, zring};
use semiab::algebra::{enumerate_homs, HomKind, Morphism};
use semiab::corpus::{quotient_square, Corpus, CORPUS_DIR_VAR};
use semiab::factorisation::NCube;
use semiab::format::{self, cube_to_json, morphism_to_json, to_pretty, SCHEMA};
use semiab::reflectors::split_sequences;

fn semiab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiab")).args(args).env_remove(CORPUS_DIR_VAR).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn z12_to_z2() -> Morphism {
    let (a, b) = (Arc::new(zring(12)), Arc::new(zring(2)));
    enumerate_homs(&a, &b, HomKind::All).unwrap().into_iter().find(|f| f.is_surjective()).unwrap()
}

#[test]
fn reduced_is_protoadditive_on_rings() {
    let o = semiab(&["check-protoadditive", "--reflector", "reduced", "--corpus", "rings"]);
    assert_eq!(o.status.code(), Some(0));
    let n: usize = Corpus::builtin("rings").unwrap().algebras.iter().map(|a| split_sequences(a).unwrap().len()).sum();
    assert!(stdout(&o).starts_with(&format!("protoadditive on {n} split sequences")));
}

#[test]
fn abelianisation_is_not_protoadditive() {
    let o = semiab(&["check-protoadditive", "--reflector", "ab", "--corpus", "groups", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["protoadditive"], false);
    assert_eq!(v["routesAgree"], true);
}

#[test]
fn factorize_emits_reparseable_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = z12_to_z2();
    let input = write(dir.path(), "z12-to-z2.json", &to_pretty(&morphism_to_json(&f)));
    let out = dir.path().to_string_lossy().into_owned();
    let o = semiab(&["factorize", "--reflector", "reduced", "--morphism", &input, "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let e_text = std::fs::read_to_string(dir.path().join("z12-to-z2.e.json")).unwrap();
    let m_text = std::fs::read_to_string(dir.path().join("z12-to-z2.m.json")).unwrap();
    let e = format::read_morphism(&e_text).unwrap();
    let m = format::read_morphism(&m_text).unwrap();
    assert_eq!(e.cod().order(), 6);
    // composing needs a shared middle object
    let m = m.with_dom(e.cod().clone()).unwrap();
    assert_eq!(e.then(&m).unwrap().map(), f.map());
    assert_eq!(to_pretty(&morphism_to_json(&e)), e_text);
}

#[test]
fn homology_of_c2() {
    let dir = tempfile::tempdir().unwrap();
    let obj = write(dir.path(), "c2.json", &to_pretty(&format::algebra_to_json(&zmod_cyclic(4, 2).unwrap())));
    let o = semiab(&["homology", "--variety", "zmod:4", "--coeff", "burnside:2", "--object", &obj, "--degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("C2"));
    assert!(text.contains("presentation 2"));
    let o = semiab(&["homology", "--variety", "zmod:8", "--coeff", "burnside:2", "--object", &obj, "--degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn family_strings_are_accepted_as_objects() {
    let dir = tempfile::tempdir().unwrap();
    let obj = write(dir.path(), "c4.json", "\"cyclic:4\"");
    let o = semiab(&["radical", "--reflector", "burnside:2", "--object", &obj, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["radical"].as_array().unwrap().len(), 2);
    assert_eq!(v["idempotent"], false);
}

#[test]
fn extension_check_on_a_square() {
    let dir = tempfile::tempdir().unwrap();
    let c = Corpus::builtin("rings").unwrap();
    let z4 = c.find("Z/4").cloned().unwrap_or_else(|| Arc::new(zring(4)));
    let subs = semiab::algebra::normal_subobjects(&z4);
    let (zero, two, whole) = (&subs[0], &subs[1], &subs[subs.len() - 1]);
    assert_eq!((zero.len(), two.len(), whole.len()), (1, 2, 4));
    // K = 0 and K = {0, 2} over Z/2: a double extension with ⋂ K = 0
    let sq: NCube = quotient_square(&z4, zero, two, two).unwrap();
    let path = write(dir.path(), "sq.json", &to_pretty(&cube_to_json(&sq)));
    let o = semiab(&["extension-check", "--reflector", "reduced", "--cube", &path, "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["extension"].clone(), v["normal"].clone()), (Value::Bool(true), Value::Bool(true)));
    assert_eq!(v["normalByGalois"], true);
    assert_eq!(o.status.code(), Some(0));
    // both legs Z/4 → Z/2 over 0: the comparison to Z/2 × Z/2 misses half
    let sq = quotient_square(&z4, two, two, whole).unwrap();
    let path = write(dir.path(), "sq2.json", &to_pretty(&cube_to_json(&sq)));
    let o = semiab(&["extension-check", "--reflector", "reduced", "--cube", &path, "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["extension"], false);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let fail = semiab(&["verify", "--suite", "idempotent-radical", "--reflector", "burnside:2", "--corpus", "abelian"]);
    assert_eq!(fail.status.code(), Some(2));
    assert!(stdout(&fail).contains("counterexample: T(T(C4))"));
    assert!(stdout(&fail).contains("statement:"));
    let usage = semiab(&["verify", "--suite", "composite-join", "--reflector", "reduced", "--corpus", "rings"]);
    assert_eq!(usage.status.code(), Some(1));
    let unknown = semiab(&["verify", "--suite", "bogus", "--reflector", "reduced", "--corpus", "rings"]);
    assert_eq!(unknown.status.code(), Some(1));
    let missing = semiab(&["verify", "--suite", "all", "--reflector", "reduced", "--corpus", "nowhere"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\n  \"dom\": \"zring:4\",\n  \"cod\": \n}");
    let o = semiab(&["factorize", "--reflector", "reduced", "--morphism", &bad]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json") && err.contains("line 4"), "{err}");
    let not_hom = write(dir.path(), "nh.json", r#"{"dom": "zring:4", "cod": "zring:2", "map": [0, 1, 1, 0]}"#);
    let o = semiab(&["factorize", "--reflector", "reduced", "--morphism", &not_hom]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn corpus_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let tiny = Corpus { name: "rings".into(), algebras: vec![Arc::new(zring(4)), Arc::new(zring(6))] };
    write(dir.path(), "rings.json", &tiny.to_json());
    let n: usize = tiny.algebras.iter().map(|a| split_sequences(a).unwrap().len()).sum();
    let o = Command::new(env!("CARGO_BIN_EXE_semiab"))
        .args(["check-protoadditive", "--reflector", "reduced", "--corpus", "rings", "--json"])
        .env(CORPUS_DIR_VAR, dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sequences"], n);
}
