//! JSON interchange for algebras, morphisms and cubes. Field names are
//! documented in `format.md` at the repository root.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{builders, Algebra, Morphism, Variety};
use crate::error::{Error, Result};
use crate::factorisation::NCube;

/// Version tag carried by every top-level document the CLI writes.
pub const SCHEMA: &str = "semiab/1";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub add: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg: Option<Vec<usize>>,
    /// `smul[k][x] = k·x` for `k < m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smul: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Box<Tables>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Box<Tables>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Vec<usize>>,
    /// Triples `[f, g, g∘f]` over all composable pairs (`target f = source g`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compose: Option<Vec<[usize; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub variety: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub tables: Tables,
}

/// An algebra given inline or by a family string such as `"zring:12"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Spec(String),
    Inline(Box<AlgebraJson>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub dom: AlgebraRef,
    pub cod: AlgebraRef,
    pub map: Vec<usize>,
    /// For groupoids, the induced map on objects (derived; checked if given).
    #[serde(default, rename = "objectMap", skip_serializing_if = "Option::is_none")]
    pub object_map: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CubeJson {
    Object { object: AlgebraRef },
    Arrow { arrow: MorphismJson },
    Morphism { domain: Box<CubeJson>, codomain: Box<CubeJson>, components: Vec<MorphismJson> },
}

fn square(t: &[usize], n: usize) -> Vec<Vec<usize>> {
    t.chunks(n).map(|r| r.to_vec()).collect()
}

fn flatten(rows: &[Vec<usize>], n: usize, what: &str) -> Result<Vec<usize>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Format(format!("table `{what}` must be {n}×{n}")));
    }
    Ok(rows.concat())
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| Error::Format(format!("missing table `{what}`")))
}

pub fn algebra_to_json(a: &Algebra) -> AlgebraJson {
    let n = a.order();
    let mut t = Tables::default();
    match a.variety() {
        Variety::Group => {
            t.mul = Some(square(a.op_table(), n));
            t.inv = Some(a.inv_table().to_vec());
        }
        Variety::ZmodModule(m) => {
            t.add = Some(square(a.op_table(), n));
            t.neg = Some(a.inv_table().to_vec());
            t.smul = Some((0..m as u64).map(|k| a.elements().map(|x| a.power(x, k)).collect()).collect());
        }
        v if v.is_ring() => {
            t.add = Some(square(a.op_table(), n));
            t.neg = Some(a.inv_table().to_vec());
            t.mul = Some(square(a.mul_table().unwrap(), n));
        }
        _ => {
            let objs = a.objects();
            let mut pos = vec![usize::MAX; n];
            for (j, &x) in objs.iter().enumerate() {
                pos[x] = j;
            }
            let k = objs.len();
            let omul = objs.iter().flat_map(|&x| objs.iter().map(move |&y| (x, y))).map(|(x, y)| pos[a.op(x, y)]);
            t.arrows = Some(Box::new(Tables {
                mul: Some(square(a.op_table(), n)),
                inv: Some(a.inv_table().to_vec()),
                ..Tables::default()
            }));
            t.objects = Some(Box::new(Tables {
                mul: Some(square(&omul.collect::<Vec<_>>(), k)),
                inv: Some(objs.iter().map(|&x| pos[a.inv(x)]).collect()),
                ..Tables::default()
            }));
            t.source = Some(a.elements().map(|x| pos[a.source(x)]).collect());
            t.target = Some(a.elements().map(|x| pos[a.target(x)]).collect());
            t.identity = Some(objs.clone());
            let mut compose = Vec::new();
            for f in a.elements() {
                for g in a.elements().filter(|&g| a.source(g) == a.target(f)) {
                    compose.push([f, g, a.op(a.sub(f, a.target(f)), g)]);
                }
            }
            t.compose = Some(compose);
        }
    }
    AlgebraJson { variety: a.variety().to_string(), name: Some(a.name().to_string()), order: n, tables: t }
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<Algebra> {
    let variety: Variety = j.variety.parse()?;
    let n = j.order;
    let name = j.name.clone().unwrap_or_else(|| format!("A{n}"));
    let t = &j.tables;
    let check_len = |v: &Vec<usize>, len: usize, what: &str| {
        if v.len() != len {
            Err(Error::Format(format!("`{what}` must have length {len}")))
        } else {
            Ok(())
        }
    };
    match variety {
        Variety::Group => {
            let op = flatten(need(&t.mul, "mul")?, n, "mul")?;
            let inv = need(&t.inv, "inv")?.clone();
            check_len(&inv, n, "inv")?;
            Algebra::new(variety, name, op, inv, None, None)
        }
        Variety::ZmodModule(m) => {
            let op = flatten(need(&t.add, "add")?, n, "add")?;
            let neg = need(&t.neg, "neg")?.clone();
            check_len(&neg, n, "neg")?;
            let a = Algebra::new(variety, name, op, neg, None, None)?;
            if let Some(smul) = &t.smul {
                let expect: Vec<Vec<usize>> =
                    (0..m as u64).map(|k| a.elements().map(|x| a.power(x, k)).collect()).collect();
                if *smul != expect {
                    return Err(Error::Format("`smul` disagrees with repeated addition".into()));
                }
            }
            Ok(a)
        }
        v if v.is_ring() => {
            let op = flatten(need(&t.add, "add")?, n, "add")?;
            let neg = need(&t.neg, "neg")?.clone();
            check_len(&neg, n, "neg")?;
            let mul = flatten(need(&t.mul, "mul")?, n, "mul")?;
            Algebra::new(variety, name, op, neg, Some(mul), None)
        }
        _ => {
            let arrows = need(&t.arrows, "arrows")?;
            let objects = need(&t.objects, "objects")?;
            let g1 = Algebra::new(
                Variety::Group,
                "arrows",
                flatten(need(&arrows.mul, "arrows.mul")?, n, "arrows.mul")?,
                need(&arrows.inv, "arrows.inv")?.clone(),
                None,
                None,
            )?;
            let omul = need(&objects.mul, "objects.mul")?;
            let k = omul.len();
            let g0 = Algebra::new(
                Variety::Group,
                "objects",
                flatten(omul, k, "objects.mul")?,
                need(&objects.inv, "objects.inv")?.clone(),
                None,
                None,
            )?;
            let d = need(&t.source, "source")?;
            let c = need(&t.target, "target")?;
            let i = need(&t.identity, "identity")?;
            check_len(d, n, "source")?;
            check_len(c, n, "target")?;
            check_len(i, k, "identity")?;
            let g1 = Arc::new(g1);
            let g0 = Arc::new(g0);
            let d = Morphism::new(g1.clone(), g0.clone(), d.clone())?;
            let c = Morphism::new(g1.clone(), g0.clone(), c.clone())?;
            let i = Morphism::new(g0.clone(), g1.clone(), i.clone())?;
            for x in g0.elements() {
                if d.apply(i.apply(x)) != x || c.apply(i.apply(x)) != x {
                    return Err(Error::InvalidStructure("identity is not a section of source and target".into()));
                }
            }
            let s = g1.elements().map(|x| i.apply(d.apply(x))).collect();
            let tt = g1.elements().map(|x| i.apply(c.apply(x))).collect();
            let a = Algebra::new(variety, name, g1.op_table().to_vec(), g1.inv_table().to_vec(), None, Some([s, tt]))?;
            if let Some(compose) = &t.compose {
                for &[f, g, h] in compose {
                    if f >= n || g >= n || h >= n || a.target(f) != a.source(g) {
                        return Err(Error::Format(format!("`compose` entry [{f},{g},{h}] is not composable")));
                    }
                    if a.op(a.sub(f, a.target(f)), g) != h {
                        return Err(Error::InvalidStructure(format!(
                            "composition [{f},{g},{h}] is not the one forced by the group law"
                        )));
                    }
                }
            }
            Ok(a)
        }
    }
}

pub fn resolve(r: &AlgebraRef) -> Result<Algebra> {
    match r {
        AlgebraRef::Spec(s) => builders::from_spec(s),
        AlgebraRef::Inline(j) => algebra_from_json(j),
    }
}

pub fn morphism_to_json(f: &Morphism) -> MorphismJson {
    let object_map = f.dom().is_groupoid().then(|| {
        let (a, b) = (f.dom(), f.cod());
        let bobjs = b.objects();
        a.objects().into_iter().map(|x| bobjs.iter().position(|&y| y == f.apply(x)).unwrap()).collect()
    });
    MorphismJson {
        dom: AlgebraRef::Inline(Box::new(algebra_to_json(f.dom()))),
        cod: AlgebraRef::Inline(Box::new(algebra_to_json(f.cod()))),
        map: f.map().to_vec(),
        object_map,
    }
}

pub fn morphism_from_json(j: &MorphismJson) -> Result<Morphism> {
    morphism_between(Arc::new(resolve(&j.dom)?), Arc::new(resolve(&j.cod)?), j)
}

fn morphism_between(dom: Arc<Algebra>, cod: Arc<Algebra>, j: &MorphismJson) -> Result<Morphism> {
    let f = Morphism::new(dom, cod, j.map.clone())?;
    if let Some(om) = &j.object_map {
        if morphism_to_json(&f).object_map.as_ref() != Some(om) {
            return Err(Error::Format("`objectMap` disagrees with the arrow map".into()));
        }
    }
    Ok(f)
}

pub fn cube_to_json(c: &NCube) -> CubeJson {
    match c.dim() {
        0 => CubeJson::Object { object: AlgebraRef::Inline(Box::new(algebra_to_json(c.top()))) },
        1 => CubeJson::Arrow { arrow: morphism_to_json(c.edge(1, 0)) },
        _ => {
            let (dom, cod, comps) = c.split_last();
            CubeJson::Morphism {
                domain: Box::new(cube_to_json(&dom)),
                codomain: Box::new(cube_to_json(&cod)),
                components: comps.iter().map(morphism_to_json).collect(),
            }
        }
    }
}

pub fn cube_from_json(j: &CubeJson) -> Result<NCube> {
    match j {
        CubeJson::Object { object } => Ok(NCube::object(Arc::new(resolve(object)?))),
        CubeJson::Arrow { arrow } => Ok(NCube::arrow(morphism_from_json(arrow)?)),
        CubeJson::Morphism { domain, codomain, components } => {
            let dom = cube_from_json(domain)?;
            let cod = cube_from_json(codomain)?;
            let comps = components
                .iter()
                .enumerate()
                .map(|(v, m)| morphism_between(dom.vertex(v).clone(), cod.vertex(v).clone(), m))
                .collect::<Result<Vec<_>>>()?;
            NCube::from_components(&dom, &cod, comps)
        }
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_pretty<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serialisable")
}

pub fn read_algebra(text: &str) -> Result<Algebra> {
    resolve(&parse::<AlgebraRef>(text)?)
}

pub fn read_morphism(text: &str) -> Result<Morphism> {
    morphism_from_json(&parse(text)?)
}

pub fn read_cube(text: &str) -> Result<NCube> {
    cube_from_json(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::*;

    #[test]
    fn algebras_round_trip() {
        for a in [
            symmetric(3),
            zring(6),
            split_square_ring(),
            zmod_module(4, &[2, 4]).unwrap(),
            gpd_indiscrete(&cyclic(3)).unwrap(),
            gpd_one_object(&cyclic(2)).unwrap(),
            zero_ring(&cyclic(2), Variety::RngStar).unwrap(),
        ] {
            let j = algebra_to_json(&a);
            let text = to_pretty(&j);
            let back = read_algebra(&text).unwrap();
            assert_eq!(back, a);
            assert_eq!(back.name(), a.name());
        }
    }

    #[test]
    fn family_strings_and_inline_morphisms() {
        let text = r#"{"dom": "zring:4", "cod": "zring:2", "map": [0, 1, 0, 1]}"#;
        let f = read_morphism(text).unwrap();
        assert!(f.is_surjective());
        let back = read_morphism(&to_pretty(&morphism_to_json(&f))).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"dom": "zring:4", "cod": "zring:2", "map": [0, 1, 1, 0]}"#;
        assert!(matches!(read_morphism(bad), Err(Error::NotHomomorphism(_))));
    }

    #[test]
    fn malformed_input_is_a_format_error() {
        assert!(matches!(read_algebra("{"), Err(Error::Format(_))));
        let missing = r#"{"variety": "group", "order": 2, "tables": {"mul": [[0,1],[1,0]]}}"#;
        assert!(matches!(read_algebra(missing), Err(Error::Format(_))));
        let wrong_m = r#"{"variety": "zmod:2", "order": 4, "tables": {"add": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]], "neg": [0,3,2,1]}}"#;
        assert!(matches!(read_algebra(wrong_m), Err(Error::InvalidStructure(_))));
    }

    #[test]
    fn groupoid_composition_is_checked() {
        let g = gpd_indiscrete(&cyclic(2)).unwrap();
        let mut j = algebra_to_json(&g);
        let c = j.tables.compose.as_mut().unwrap();
        c[0][2] = (c[0][2] + 1) % 4;
        assert!(algebra_from_json(&j).is_err());
    }
}
