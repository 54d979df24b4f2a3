//! The `semiab` command line. Exit codes: 0 success, 1 usage, 2 the checked
//! property fails, 3 unreadable or malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{Algebra, Variety};
use crate::birkhoff::{hopf_homology, relative_commutator};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::factorisation::{
    condition_n, em_factorize, in_e, in_m, is_nfold_extension, is_nfold_normal, is_normal_by_galois, NCube,
};
use crate::format::{self, morphism_to_json, SCHEMA};
use crate::reflectors::{is_protoadditive, split_sequences, Reflector, Route};
use crate::report::Report;
use crate::verification::{verify_all, verify_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "semiab",
    version,
    about = "Torsion theories, protoadditive reflectors and relative commutators on finite algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a reflector preserves split short exact sequences over a corpus.
    CheckProtoadditive {
        #[arg(long)]
        reflector: Reflector,
        #[arg(long)]
        corpus: String,
        /// split-sequences, split-pullbacks, protosplit-monos or all.
        #[arg(long, default_value = "all")]
        route: String,
        #[arg(long)]
        json: bool,
    },
    /// The radical T(A) and reflection F(A) of an algebra.
    Radical {
        #[arg(long)]
        reflector: Reflector,
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Factor a surjection as m∘e with K[e] torsion and K[m] torsion-free.
    Factorize {
        #[arg(long)]
        reflector: Reflector,
        #[arg(long)]
        morphism: PathBuf,
        /// Directory for the `<stem>.e.json` and `<stem>.m.json` files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Whether a cube is an n-fold extension and whether it is normal.
    ExtensionCheck {
        #[arg(long)]
        reflector: Reflector,
        #[arg(long)]
        cube: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Hopf-formula homology of a Z/m-module.
    Homology {
        #[arg(long)]
        variety: Variety,
        #[arg(long)]
        coeff: Reflector,
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite, or all compatible ones.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        reflector: Reflector,
        #[arg(long)]
        corpus: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Format(_)
        | Error::InvalidStructure(_)
        | Error::NotHomomorphism(_)
        | Error::NotSubalgebra
        | Error::NotNormal => EXIT_INPUT,
        Error::VarietyMismatch(..) | Error::Unsupported { .. } | Error::Precondition(_) | Error::Budget(_) => {
            EXIT_USAGE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parse errors carry the file name; serde adds line and column.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        Error::InvalidStructure(m) => Error::InvalidStructure(format!("{}: {m}", path.display())),
        Error::NotHomomorphism(m) => Error::NotHomomorphism(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn corpus(name: &str) -> Result<Corpus> {
    if name.ends_with(".json") {
        Corpus::load(Path::new(name))
    } else {
        Corpus::named(name)
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Some(o), Value::Object(b)) = (v.as_object_mut(), body) {
        o.extend(b);
    }
    v
}

/// What a command produced: an exit code, and either JSON or lines of text.
struct Output {
    code: i32,
    json: Value,
    text: Vec<String>,
}

fn human_report(rep: &Report) -> Vec<String> {
    let mut lines = vec![format!(
        "{} [{} on {}]: {} ({}, {})",
        rep.suite, rep.reflector, rep.corpus, rep.verdict, rep.summary, rep.scope
    )];
    let mut notes = rep.notes.iter();
    if let Some(statement) = rep.notes.last() {
        lines.push(format!("  statement: {statement}"));
        notes = rep.notes[..rep.notes.len() - 1].iter();
    }
    lines.extend(notes.map(|n| format!("  note: {n}")));
    lines.extend(rep.witnesses.iter().map(|w| format!("  counterexample: {}", w.note)));
    lines.extend(rep.illustrations.iter().map(|w| format!("  illustration: {}", w.note)));
    lines
}

fn check_protoadditive(r: &Reflector, corpus_name: &str, route: &str) -> Result<Output> {
    let routes: Vec<Route> = match route {
        "all" => Route::ALL.to_vec(),
        name => vec![Route::ALL
            .into_iter()
            .find(|x| x.to_string() == name)
            .ok_or_else(|| Error::Precondition(format!("unknown route `{name}`")))?],
    };
    let c = corpus(corpus_name)?;
    let v = c.variety().ok_or_else(|| Error::Precondition(format!("corpus `{}` is empty", c.name)))?;
    if !r.applies_to(v) {
        return Err(Error::Precondition(format!("{r} does not apply to {v} corpus `{}`", c.name)));
    }
    let seqs: Vec<_> = c.algebras.iter().map(split_sequences).collect::<Result<Vec<_>>>()?.concat();
    let reports = routes.iter().map(|&rt| is_protoadditive(r, &seqs, rt, &c.name)).collect::<Result<Vec<_>>>()?;
    let verdicts: Vec<bool> = reports.iter().map(Report::passed).collect();
    let agree = verdicts.iter().all(|&p| p == verdicts[0]);
    let proto = agree && verdicts[0];
    let mut text = vec![if proto {
        format!("protoadditive on {} split sequences", seqs.len())
    } else {
        format!("not protoadditive on corpus `{}`", c.name)
    }];
    for (rt, rep) in routes.iter().zip(&reports) {
        text.push(format!("  {rt}: {} ({})", rep.verdict, rep.summary));
        if let Some(w) = rep.first_witness() {
            text.push(format!("    first counterexample: {}", w.note));
        }
    }
    if !agree {
        text.push("  the routes disagree, which contradicts their equivalence".into());
    }
    text.push("  statement: a protoadditive reflector preserves split short exact sequences".into());
    Ok(Output {
        code: if proto { EXIT_OK } else { EXIT_FAIL },
        json: envelope(
            "check-protoadditive",
            json!({ "protoadditive": proto, "routesAgree": agree, "sequences": seqs.len(), "reports": reports }),
        ),
        text,
    })
}

fn read_object(path: &Path) -> Result<Arc<Algebra>> {
    Ok(Arc::new(in_file(path, format::read_algebra(&read(path)?))?))
}

fn radical(r: &Reflector, path: &Path) -> Result<Output> {
    let a = read_object(path)?;
    if !r.applies_to(a.variety()) {
        return Err(Error::Precondition(format!("{r} does not apply to {}", a.variety())));
    }
    let d = r.reflect(&a)?;
    let idempotent = r.is_idempotent_at(&a)?;
    let text = vec![
        format!("T({}) has order {}: {:?}", a.name(), d.radical.len(), d.radical.members()),
        format!("F({}) has order {}", a.name(), d.reflection().order()),
        format!("T(T({})) = T({}): {idempotent}", a.name(), a.name()),
    ];
    Ok(Output {
        code: EXIT_OK,
        json: envelope(
            "radical",
            json!({
                "object": a.name(),
                "radical": d.radical.members(),
                "inclusion": morphism_to_json(&d.inclusion),
                "unit": morphism_to_json(&d.unit),
                "idempotent": idempotent,
            }),
        ),
        text,
    })
}

fn factorize(r: &Reflector, path: &Path, out: &Path) -> Result<Output> {
    let f = in_file(path, format::read_morphism(&read(path)?))?;
    if !r.applies_to(f.dom().variety()) {
        return Err(Error::Precondition(format!("{r} does not apply to {}", f.dom().variety())));
    }
    if !condition_n(r, &f)? {
        let note = format!("T(K[f]) is not normal in {}, so f has no (Ē, M̄) factorisation", f.dom().name());
        return Ok(Output {
            code: EXIT_FAIL,
            json: envelope("factorize", json!({ "conditionN": false })),
            text: vec![note],
        });
    }
    let fz = em_factorize(r, &f)?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "morphism".into());
    let e_path = out.join(format!("{stem}.e.json"));
    let m_path = out.join(format!("{stem}.m.json"));
    write_file(&e_path, &format::to_pretty(&morphism_to_json(&fz.e)))?;
    write_file(&m_path, &format::to_pretty(&morphism_to_json(&fz.m)))?;
    let (e_ok, m_ok) = (in_e(r, &fz.e)?, in_m(r, &fz.m)?);
    let code = if e_ok && m_ok { EXIT_OK } else { EXIT_FAIL };
    let text = vec![
        format!("{} → {} → {}", f.dom().name(), fz.middle().name(), f.cod().name()),
        format!("  e ∈ Ē: {e_ok}, written to {}", e_path.display()),
        format!("  m ∈ M̄: {m_ok}, written to {}", m_path.display()),
        "  statement: under (N) every morphism factors as m∘e with e ∈ Ē and m ∈ M̄".into(),
    ];
    Ok(Output {
        code,
        json: envelope(
            "factorize",
            json!({ "conditionN": true, "e": e_path, "m": m_path, "eInE": e_ok, "mInM": m_ok, "middleOrder": fz.middle().order() }),
        ),
        text,
    })
}

fn extension_check(r: &Reflector, path: &Path) -> Result<Output> {
    let c: NCube = in_file(path, format::read_cube(&read(path)?))?;
    if !r.applies_to(c.top().variety()) {
        return Err(Error::Precondition(format!("{r} does not apply to {}", c.top().variety())));
    }
    let n = c.dim();
    if !is_nfold_extension(&c)? {
        return Ok(Output {
            code: EXIT_FAIL,
            json: envelope("extension-check", json!({ "dimension": n, "extension": false })),
            text: vec![format!("{c} is not a {n}-fold extension")],
        });
    }
    let normal = is_nfold_normal(r, &c)?;
    let galois = if n <= 2 { Some(is_normal_by_galois(r, &c)?) } else { None };
    let commutator = relative_commutator(r, &c)?;
    let agree = galois.is_none_or(|g| g == normal);
    let mut text = vec![format!("{c} is a {n}-fold extension"), format!("  normal (⋂ K[a_i] torsion-free): {normal}")];
    if let Some(g) = galois {
        text.push(format!("  normal (Galois structure): {g}"));
    }
    text.push(format!("  [A]_{{{n},{r}}} has order {}", commutator.len()));
    text.push("  statement: an n-fold extension is normal iff ⋂ K[a_i] is torsion-free".into());
    Ok(Output {
        code: if normal && agree { EXIT_OK } else { EXIT_FAIL },
        json: envelope(
            "extension-check",
            json!({
                "dimension": n,
                "extension": true,
                "normal": normal,
                "normalByGalois": galois,
                "relativeCommutator": commutator.members(),
            }),
        ),
        text,
    })
}

fn homology(v: Variety, b: &Reflector, path: &Path, degree: usize, seed: u64) -> Result<Output> {
    let a = read_object(path)?;
    if a.variety() != v {
        return Err(Error::VarietyMismatch(a.variety(), v));
    }
    let h = match hopf_homology(b, &a, degree, seed) {
        Err(Error::Precondition(why)) if why.starts_with("presentations disagree") => {
            return Ok(Output {
                code: EXIT_FAIL,
                json: envelope("homology", json!({ "degree": degree, "error": why })),
                text: vec![why],
            })
        }
        other => other?,
    };
    let pres: Vec<Value> = h
        .presentations
        .iter()
        .zip(h.cross_checked)
        .map(|(p, checked)| json!({ "dimension": p.dim(), "topRank": p.top_rank(), "crossChecked": checked }))
        .collect();
    let mut text = vec![h.description.clone()];
    for (i, p) in h.presentations.iter().enumerate() {
        text.push(format!("  presentation {}: dimension {}, top rank {}", i + 1, p.dim(), p.top_rank()));
    }
    text.push("  statement: Hopf formula homology does not depend on the presentation".into());
    Ok(Output {
        code: EXIT_OK,
        json: envelope("homology", json!({ "degree": degree, "module": h.description, "presentations": pres })),
        text,
    })
}

fn verify(suite: &str, r: &Reflector, corpus_name: &str, seed: u64) -> Result<Output> {
    let c = corpus(corpus_name)?;
    let (reports, skipped) = if suite == "all" {
        verify_all(r, &c, seed)?
    } else {
        (
            vec![verify_suite(suite.parse::<Suite>().map_err(|e| Error::Precondition(e.to_string()))?, r, &c, seed)?],
            vec![],
        )
    };
    let ok = reports.iter().all(Report::passed);
    let mut text: Vec<String> = reports.iter().flat_map(human_report).collect();
    text.extend(skipped.iter().map(|(s, why)| format!("{s}: skipped ({why})")));
    let skipped_json: Vec<Value> = skipped.iter().map(|(s, why)| json!({ "suite": s.name(), "reason": why })).collect();
    Ok(Output {
        code: if ok { EXIT_OK } else { EXIT_FAIL },
        json: envelope("verify", json!({ "passed": ok, "reports": reports, "skipped": skipped_json })),
        text,
    })
}

fn dispatch(cmd: &Command) -> (bool, Result<Output>) {
    match cmd {
        Command::CheckProtoadditive { reflector, corpus, route, json } => {
            (*json, check_protoadditive(reflector, corpus, route))
        }
        Command::Radical { reflector, object, json } => (*json, radical(reflector, object)),
        Command::Factorize { reflector, morphism, out, json } => (*json, factorize(reflector, morphism, out)),
        Command::ExtensionCheck { reflector, cube, json } => (*json, extension_check(reflector, cube)),
        Command::Homology { variety, coeff, object, degree, seed, json } => {
            (*json, homology(*variety, coeff, object, *degree, *seed))
        }
        Command::Verify { suite, reflector, corpus, seed, json } => (*json, verify(suite, reflector, corpus, *seed)),
    }
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let (as_json, res) = dispatch(&cli.command);
    match res {
        Ok(o) => {
            let _ = if as_json {
                writeln!(out, "{}", format::to_pretty(&o.json))
            } else {
                o.text.iter().try_for_each(|l| writeln!(out, "{l}"))
            };
            o.code
        }
        Err(e) => {
            let code = exit_code(&e);
            if as_json {
                let _ = writeln!(
                    out,
                    "{}",
                    format::to_pretty(&json!({ "schema": SCHEMA, "error": e.to_string(), "exitCode": code }))
                );
            }
            let _ = writeln!(err, "semiab: {e}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("semiab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["radical", "--reflector", "nope", "--object", "x"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--suite", "nope", "--reflector", "ab", "--corpus", "groups"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn missing_files_exit_three() {
        let (code, _, err) = call(&["radical", "--reflector", "ab", "--object", "/nonexistent/a.json"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("/nonexistent/a.json"));
    }

    #[test]
    fn json_envelope_is_versioned() {
        let (code, out, _) =
            call(&["verify", "--suite", "idempotent-radical", "--reflector", "reduced", "--corpus", "rings", "--json"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["reports"][0]["verdict"], "pass");
    }
}
