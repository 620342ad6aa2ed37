//! Loaders for the documented file formats: category files (relations form
//! or explicit table form), presentation files, degree-functor files, and
//! ring-homomorphism assignment files. All files are JSON documents.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::amalgam::{amalgamate, Component, FreeArrow, Presentation};
use crate::boolring::Assignment;
use crate::cat::{PathCategory, PathId};
use crate::degree::DegreeFunctor;
use crate::error::CatError;

/// Parse or semantic failure while loading an input file.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    Semantic { path: String, source: CatError },
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn semantic(path: &Path, source: CatError) -> LoadError {
    LoadError::Semantic { path: path.display().to_string(), source }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    id: String,
    src: String,
    rng: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    morphisms: Vec<String>,
    src: BTreeMap<String, String>,
    rng: BTreeMap<String, String>,
    #[serde(default)]
    compose: Vec<(String, String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    #[serde(default)]
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<ArrowDoc>,
    #[serde(default)]
    relations: Vec<(Vec<String>, Vec<String>)>,
    #[serde(default)]
    table: Option<TableDoc>,
}

fn table_to_category(doc: &TableDoc) -> Result<PathCategory, CatError> {
    let n = doc.morphisms.len();
    let index: BTreeMap<&str, u32> =
        doc.morphisms.iter().enumerate().map(|(i, m)| (m.as_str(), i as u32)).collect();
    let lookup = |name: &str| -> Result<PathId, CatError> {
        index
            .get(name)
            .map(|&i| PathId(i))
            .ok_or_else(|| CatError::UnknownPath(name.to_string()))
    };
    // Vertices are the morphisms with src = rng = themselves; reorder so they
    // come first.
    let is_vertex = |m: &String| doc.src.get(m) == Some(m) && doc.rng.get(m) == Some(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (!is_vertex(&doc.morphisms[i]), i));
    let rank: BTreeMap<usize, u32> =
        order.iter().enumerate().map(|(new, &old)| (old, new as u32)).collect();
    let names: Vec<String> = order.iter().map(|&i| doc.morphisms[i].clone()).collect();
    let vertex_count = doc.morphisms.iter().filter(|m| is_vertex(m)).count() as u32;
    let mut src = Vec::with_capacity(n);
    let mut rng = Vec::with_capacity(n);
    for &i in &order {
        let m = &doc.morphisms[i];
        let s = doc.src.get(m).ok_or_else(|| {
            CatError::MalformedTable(format!("missing src for {m}"))
        })?;
        let r = doc
            .rng
            .get(m)
            .ok_or_else(|| CatError::MalformedTable(format!("missing rng for {m}")))?;
        src.push(PathId(rank[&lookup(s)?.index()]));
        rng.push(PathId(rank[&lookup(r)?.index()]));
    }
    let mut entries = Vec::new();
    for (a, b, ab) in &doc.compose {
        entries.push((
            PathId(rank[&lookup(a)?.index()]),
            PathId(rank[&lookup(b)?.index()]),
            PathId(rank[&lookup(ab)?.index()]),
        ));
    }
    PathCategory::from_table(names, vertex_count, src, rng, &entries)
}

fn doc_to_presentation(doc: &CategoryDoc) -> Presentation {
    Presentation::single(
        doc.vertices.clone(),
        doc.arrows
            .iter()
            .map(|a| FreeArrow { name: a.id.clone(), src: a.src.clone(), rng: a.rng.clone() })
            .collect(),
        doc.relations.clone(),
    )
}

/// Load a category file: explicit table form, or the relations form, which
/// goes through the presentation engine and must come out finite.
pub fn load_category(path: &Path) -> Result<PathCategory, LoadError> {
    let text = read(path)?;
    let doc: CategoryDoc = parse(path, &text)?;
    let cat = if let Some(table) = &doc.table {
        table_to_category(table).map_err(|e| semantic(path, e))?
    } else {
        let pres = doc_to_presentation(&doc);
        let result = amalgamate(&pres, None).map_err(|e| semantic(path, e))?;
        result.exact.ok_or_else(|| {
            semantic(path, CatError::Presentation("relations form must present a finite category".into()))
        })?
    };
    Ok(cat)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    components: Vec<CategoryDoc>,
    #[serde(default)]
    glue: Vec<(String, String)>,
    #[serde(default)]
    relations: Vec<(Vec<String>, Vec<String>)>,
    #[serde(default)]
    bound: Option<u32>,
}

/// A loaded presentation with its optional bound.
pub struct LoadedPresentation {
    pub presentation: Presentation,
    pub bound: Option<u32>,
}

/// Load a presentation file. Components in table form enter as explicit
/// categories; components in relations form are materialized when finite and
/// kept free (their relations hoisted to the top level) otherwise.
pub fn load_presentation(path: &Path) -> Result<LoadedPresentation, LoadError> {
    let text = read(path)?;
    let doc: PresentationDoc = parse(path, &text)?;
    let mut components = Vec::new();
    let mut extra = doc.relations.clone();
    for comp in &doc.components {
        if let Some(table) = &comp.table {
            let cat = table_to_category(table).map_err(|e| semantic(path, e))?;
            components.push(Component::Explicit(cat));
        } else if comp.relations.is_empty() {
            components.push(Component::Free {
                vertices: comp.vertices.clone(),
                arrows: comp
                    .arrows
                    .iter()
                    .map(|a| FreeArrow {
                        name: a.id.clone(),
                        src: a.src.clone(),
                        rng: a.rng.clone(),
                    })
                    .collect(),
            });
        } else {
            // Presented component: materialize when finite, else stay free
            // and treat the relations through the congruence closure.
            let pres = doc_to_presentation(comp);
            match amalgamate(&pres, None) {
                Ok(result) if result.exact.is_some() => {
                    components.push(Component::Explicit(result.exact.unwrap()));
                }
                _ => {
                    components.push(Component::Free {
                        vertices: comp.vertices.clone(),
                        arrows: comp
                            .arrows
                            .iter()
                            .map(|a| FreeArrow {
                                name: a.id.clone(),
                                src: a.src.clone(),
                                rng: a.rng.clone(),
                            })
                            .collect(),
                    });
                    extra.extend(comp.relations.clone());
                }
            }
        }
    }
    Ok(LoadedPresentation {
        presentation: Presentation { components, glue: doc.glue, extra_relations: extra },
        bound: doc.bound,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeDoc {
    rank: usize,
    #[serde(default)]
    torsion: Vec<i64>,
    psi: BTreeMap<String, Vec<i64>>,
}

/// Load a degree functor: generators carry explicit vectors, vertices are
/// zero, and the remaining values are propagated through the composition
/// table.
pub fn load_degree(path: &Path, cat: &PathCategory) -> Result<DegreeFunctor, LoadError> {
    let text = read(path)?;
    let doc: DegreeDoc = parse(path, &text)?;
    let width = doc.rank + doc.torsion.len();
    let mut values: Vec<Option<Vec<i64>>> = vec![None; cat.len()];
    for v in cat.vertices() {
        values[v.index()] = Some(vec![0; width]);
    }
    for (name, val) in &doc.psi {
        let id = cat
            .by_name(name)
            .ok_or_else(|| semantic(path, CatError::UnknownPath(name.clone())))?;
        if val.len() != width {
            return Err(semantic(
                path,
                CatError::NotFunctorial(format!("value of {name} has the wrong width")),
            ));
        }
        values[id.index()] = Some(val.clone());
    }
    // Propagate along compositions until everything is assigned.
    loop {
        let mut progressed = false;
        for a in cat.morphisms() {
            for b in cat.morphisms() {
                if let Some(ab) = cat.compose(a, b) {
                    if values[ab.index()].is_none() {
                        if let (Some(va), Some(vb)) = (&values[a.index()], &values[b.index()]) {
                            let sum: Vec<i64> =
                                va.iter().zip(vb).map(|(x, y)| x + y).collect();
                            values[ab.index()] = Some(sum);
                            progressed = true;
                        }
                    }
                }
            }
        }
        if !progressed {
            break;
        }
    }
    let missing: Vec<String> = cat
        .morphisms()
        .filter(|m| values[m.index()].is_none())
        .map(|m| cat.name(m).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(semantic(
            path,
            CatError::NotFunctorial(format!("no value derivable for: {}", missing.join(", "))),
        ));
    }
    let values: Vec<Vec<i64>> = values.into_iter().map(Option::unwrap).collect();
    DegreeFunctor::new(cat, doc.rank, doc.torsion, values).map_err(|e| semantic(path, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentDoc {
    vertex: String,
    target_size: usize,
    assignment: BTreeMap<String, Vec<u32>>,
}

/// Load a ring-homomorphism assignment into the power set of a small carrier.
pub fn load_assignment(
    path: &Path,
    cat: &PathCategory,
) -> Result<(PathId, usize, Assignment), LoadError> {
    let text = read(path)?;
    let doc: AssignmentDoc = parse(path, &text)?;
    let vertex = cat
        .by_name(&doc.vertex)
        .ok_or_else(|| semantic(path, CatError::UnknownPath(doc.vertex.clone())))?;
    if doc.target_size > 16 {
        return Err(semantic(path, CatError::CarrierTooLarge(doc.target_size)));
    }
    let mut values = BTreeMap::new();
    for (name, elems) in &doc.assignment {
        let id = cat
            .by_name(name)
            .ok_or_else(|| semantic(path, CatError::UnknownPath(name.clone())))?;
        let mut mask = 0u64;
        for &e in elems {
            if e as usize >= doc.target_size {
                return Err(semantic(
                    path,
                    CatError::NotARing(format!("element {e} outside the target carrier")),
                ));
            }
            mask |= 1 << e;
        }
        values.insert(id, mask);
    }
    Ok((vertex, doc.target_size, Assignment { vertex, values }))
}
