//! Named corpora of small algebras, and the morphisms and squares derived
//! from them that the sweeps run over.
//!
//! Corpora are built in code. If `SEMIAB_CORPUS_DIR` is set and contains
//! `<name>.json`, that file replaces the built-in corpus of the same name.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::builders::*;
use crate::algebra::{factor_through, normal_subobjects, quotient, Algebra, Morphism, Subobject, Variety};
use crate::error::{Error, Result};
use crate::factorisation::NCube;
use crate::format::{self, AlgebraRef};

pub const CORPUS_DIR_VAR: &str = "SEMIAB_CORPUS_DIR";

/// Built-in corpus names, in the order `verify --corpus all` visits them.
pub const NAMES: &[&str] = &["groups", "abelian", "rings", "nonassoc", "rngstar", "zmod4", "zmod8", "groupoids"];

#[derive(Clone, Debug)]
pub struct Corpus {
    pub name: String,
    pub algebras: Vec<Arc<Algebra>>,
}

#[derive(Serialize, Deserialize)]
struct CorpusFile {
    #[serde(default)]
    schema: Option<String>,
    #[serde(default)]
    name: Option<String>,
    algebras: Vec<AlgebraRef>,
}

impl Corpus {
    /// Looks `name` up in the override directory, then among the built-ins.
    pub fn named(name: &str) -> Result<Corpus> {
        if let Some(dir) = std::env::var_os(CORPUS_DIR_VAR) {
            let path = PathBuf::from(dir).join(format!("{name}.json"));
            if path.exists() {
                return Corpus::load(&path);
            }
        }
        Corpus::builtin(name)
    }

    pub fn builtin(name: &str) -> Result<Corpus> {
        let algebras = match name {
            "groups" => groups(),
            "abelian" => abelian(),
            "rings" => rings(),
            "nonassoc" => nonassoc(),
            "rngstar" => rngstar(),
            "zmod4" => modules(4),
            "zmod8" => modules(8),
            "groupoids" => groupoids(),
            _ => return Err(Error::Format(format!("unknown corpus `{name}` (known: {})", NAMES.join(", ")))),
        }?;
        Ok(Corpus { name: name.to_string(), algebras: algebras.into_iter().map(Arc::new).collect() })
    }

    /// A corpus file: `{"algebras": [...]}` where each entry is a family string
    /// string or an inline algebra.
    pub fn load(path: &Path) -> Result<Corpus> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: CorpusFile = format::parse(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let algebras = file.algebras.iter().map(format::resolve).collect::<Result<Vec<_>>>()?;
        let name =
            file.name.unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
        Ok(Corpus { name, algebras: algebras.into_iter().map(Arc::new).collect() })
    }

    pub fn to_json(&self) -> String {
        let file = CorpusFile {
            schema: Some(format::SCHEMA.to_string()),
            name: Some(self.name.clone()),
            algebras: self.algebras.iter().map(|a| AlgebraRef::Inline(Box::new(format::algebra_to_json(a)))).collect(),
        };
        serde_json::to_string_pretty(&file).expect("corpus serialises")
    }

    pub fn len(&self) -> usize {
        self.algebras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty()
    }

    pub fn variety(&self) -> Option<Variety> {
        self.algebras.first().map(|a| a.variety())
    }

    pub fn find(&self, name: &str) -> Option<&Arc<Algebra>> {
        self.algebras.iter().find(|a| a.name() == name)
    }

    /// Every quotient map `A → A/N`, one per normal subobject.
    pub fn surjections(&self) -> Vec<Morphism> {
        self.algebras.iter().flat_map(quotients).collect()
    }

    /// Composable pairs of quotient maps `A → A/N → A/M` for `N ⊆ M`.
    pub fn composable_surjections(&self) -> Vec<(Morphism, Morphism)> {
        let mut out = Vec::new();
        for a in &self.algebras {
            let ns = normal_subobjects(a);
            for n in &ns {
                let f = quotient(a, n).expect("normal");
                for m in ns.iter().filter(|m| n.is_subset_of(m)) {
                    let img = Subobject::from_members(f.cod().order(), m.members().iter().map(|&x| f.apply(x)));
                    let g = quotient(f.cod(), &img).expect("image of a normal subobject");
                    out.push((f.clone(), g));
                }
            }
        }
        out
    }

    /// Squares of quotient maps `A → A/I`, `A → A/J` over `A/M` for every
    /// `M ⊇ I ∨ J`. Both legs into `A/M` are the induced quotients.
    pub fn quotient_squares(&self) -> Vec<NCube> {
        let mut out = Vec::new();
        for a in &self.algebras {
            let ns = normal_subobjects(a);
            for (x, i) in ns.iter().enumerate() {
                for j in &ns[x..] {
                    for m in ns.iter().filter(|m| i.is_subset_of(m) && j.is_subset_of(m)) {
                        out.push(quotient_square(a, i, j, m).expect("quotient square"));
                    }
                }
            }
        }
        out
    }
}

/// Every quotient map out of `a`.
pub fn quotients(a: &Arc<Algebra>) -> Vec<Morphism> {
    normal_subobjects(a).iter().map(|n| quotient(a, n).expect("normal")).collect()
}

/// The square `A → A/I`, `A → A/J`, both over `A/M`.
pub fn quotient_square(a: &Arc<Algebra>, i: &Subobject, j: &Subobject, m: &Subobject) -> Result<NCube> {
    let qi = quotient(a, i)?;
    let qj = quotient(a, j)?;
    let qm = quotient(a, m)?;
    let bi = factor_through(&qi, &qm)?;
    let bj = factor_through(&qj, &qm)?;
    NCube::square(qi, qj, bi, bj)
}

fn groups() -> Result<Vec<Algebra>> {
    let mut out: Vec<Algebra> = (1..=16).map(cyclic).collect();
    out.extend((4..=8).map(dihedral));
    out.push(quaternion8());
    out.push(dicyclic(3));
    out.push(dicyclic(4));
    out.push(alternating4());
    out.push(symmetric(3));
    for spec in [
        "product:cyclic:2*cyclic:2",
        "product:cyclic:2*cyclic:4",
        "product:cyclic:3*cyclic:3",
        "product:cyclic:2*cyclic:6",
        "product:cyclic:2*cyclic:2*cyclic:2",
        "product:cyclic:4*cyclic:4",
        "product:cyclic:2*cyclic:8",
        "product:cyclic:2*cyclic:2*cyclic:4",
        "product:cyclic:2*cyclic:2*cyclic:2*cyclic:2",
        "product:cyclic:2*dihedral:4",
        "product:cyclic:2*quaternion",
    ] {
        out.push(from_spec(spec)?);
    }
    out.sort_by_key(|g| g.order());
    Ok(out)
}

/// Abelian groups of order at most 16.
fn abelian() -> Result<Vec<Algebra>> {
    Ok(groups()?.into_iter().filter(|g| g.is_commutative_base()).collect())
}

/// Commutative rings: `Z/n` for `n ≤ 16` and the other rings of order 4.
fn rings() -> Result<Vec<Algebra>> {
    let mut out: Vec<Algebra> = (1..=16).map(zring).collect();
    out.push(dual_numbers());
    out.push(field4());
    out.push(from_spec("product:zring:2*zring:2")?);
    out.push(from_spec("product:zring:2*zring:4")?);
    out.push(zero_ring(&cyclic(4), Variety::CommRing)?);
    Ok(out)
}

/// Rings without associativity or commutativity assumed.
fn nonassoc() -> Result<Vec<Algebra>> {
    let mut out = vec![split_square_ring()];
    for n in 1..=8 {
        out.push(as_variety(&zring(n), Variety::NonassocRing)?);
    }
    for spec in ["field4", "dual-numbers", "product:zring:2*zring:2"] {
        out.push(as_variety(&from_spec(spec)?, Variety::NonassocRing)?);
    }
    out.push(zero_ring(&cyclic(4), Variety::NonassocRing)?);
    Ok(out)
}

/// Rings with `xyxy = xy`: Boolean rings, zero rings and their products.
fn rngstar() -> Result<Vec<Algebra>> {
    let v = Variety::RngStar;
    let mut out = vec![as_variety(&zring(1), v)?, as_variety(&zring(2), v)?];
    out.push(as_variety(&from_spec("product:zring:2*zring:2")?, v)?);
    for n in 2..=6 {
        out.push(zero_ring(&cyclic(n), v)?);
    }
    out.push(zero_ring(&from_spec("product:cyclic:2*cyclic:2")?, v)?);
    let z2 = as_variety(&zring(2), v)?;
    out.push(direct_product(&z2, &zero_ring(&cyclic(2), v)?)?);
    out.push(direct_product(&z2, &zero_ring(&cyclic(3), v)?)?);
    Ok(out)
}

/// `Z/m`-modules of rank at most 2, one per isomorphism type.
fn modules(m: u32) -> Result<Vec<Algebra>> {
    let divisors: Vec<usize> = (1..=m as usize).filter(|d| (m as usize).is_multiple_of(*d)).collect();
    let mut out = Vec::new();
    for (i, &d1) in divisors.iter().enumerate() {
        for &d2 in &divisors[i..] {
            let ds: Vec<usize> = [d1, d2].into_iter().filter(|&d| d > 1).collect();
            out.push(zmod_module(m, &ds)?);
        }
    }
    out.sort_by_key(|a| a.order());
    Ok(out)
}

fn groupoids() -> Result<Vec<Algebra>> {
    [
        "gpd-discrete:cyclic:2",
        "gpd-discrete:symmetric:3",
        "gpd-indiscrete:cyclic:2",
        "gpd-indiscrete:cyclic:3",
        "gpd-indiscrete:symmetric:3",
        "gpd-one-object:cyclic:2",
    ]
    .into_iter()
    .map(from_spec)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_have_expected_shape() {
        for name in NAMES {
            let c = Corpus::builtin(name).unwrap();
            assert!(!c.is_empty(), "{name}");
            let v = c.variety().unwrap();
            assert!(c.algebras.iter().all(|a| a.variety() == v), "{name}");
        }
        assert_eq!(Corpus::builtin("abelian").unwrap().algebras[2].name(), "C3");
        assert_eq!(Corpus::builtin("zmod4").unwrap().len(), 6);
        assert_eq!(Corpus::builtin("zmod8").unwrap().len(), 10);
        assert_eq!(Corpus::builtin("groupoids").unwrap().len(), 6);
        assert!(Corpus::builtin("nope").is_err());
    }

    #[test]
    fn every_group_has_order_at_most_sixteen() {
        let g = Corpus::builtin("groups").unwrap();
        assert!(g.algebras.iter().all(|a| a.order() <= 16));
        for name in ["S3", "D4", "Q8", "C4"] {
            assert!(g.find(name).is_some(), "{name}");
        }
    }

    #[test]
    fn quotient_squares_commute() {
        let c = Corpus { name: "t".into(), algebras: vec![Arc::new(zring(12))] };
        let squares = c.quotient_squares();
        assert!(!squares.is_empty());
        assert!(squares.iter().all(|s| s.commutes()));
    }

    #[test]
    fn composable_pairs_compose() {
        let c = Corpus { name: "t".into(), algebras: vec![Arc::new(cyclic(4))] };
        let pairs = c.composable_surjections();
        // three subgroups of C4, six nested pairs
        assert_eq!(pairs.len(), 6);
        assert!(pairs.iter().all(|(f, g)| f.then(g).is_ok()));
    }

    #[test]
    fn file_round_trip() {
        let c = Corpus::builtin("zmod4").unwrap();
        let dir = std::env::temp_dir().join(format!("semiab-corpus-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("zmod4.json");
        std::fs::write(&path, c.to_json()).unwrap();
        let back = Corpus::load(&path).unwrap();
        assert_eq!(back.len(), c.len());
        assert!(back.algebras.iter().zip(&c.algebras).all(|(x, y)| **x == **y));
        std::fs::remove_dir_all(dir).ok();
    }
}
