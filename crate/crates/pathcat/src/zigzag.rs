//! Zigzags and zigzag maps `φ_ζ = σ^{α1} β1 ⋯ σ^{αn} βn`, with their domains
//! and the reduction to finite unions of maps `γσ^δ`.

use crate::cat::{left_shift_path, min_common_extensions, tail_set, PathCategory, PathId, PathSet};
use crate::error::CatError;

/// An alternating word of shifts and concatenations. Pair `i` contributes
/// `σ^{αi} ∘ (βi ·)`; pairs apply right to left.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Zigzag {
    pairs: Vec<(PathId, PathId)>,
}

impl Zigzag {
    pub fn new(cat: &PathCategory, pairs: Vec<(PathId, PathId)>) -> Result<Self, CatError> {
        if pairs.is_empty() {
            return Err(CatError::BadZigzag("a zigzag needs at least one pair".into()));
        }
        for &(a, b) in &pairs {
            cat.check_id(a)?;
            cat.check_id(b)?;
            if cat.rng(a) != cat.rng(b) {
                return Err(CatError::BadZigzag(format!(
                    "rng({}) != rng({})",
                    cat.name(a),
                    cat.name(b)
                )));
            }
        }
        for w in pairs.windows(2) {
            let (_, b) = w[0];
            let (a2, _) = w[1];
            if cat.src(a2) != cat.src(b) {
                return Err(CatError::BadZigzag(format!(
                    "src({}) != src({})",
                    cat.name(a2),
                    cat.name(b)
                )));
            }
        }
        Ok(Zigzag { pairs })
    }

    /// The identity zigzag `(v, v)` at a vertex.
    pub fn identity(cat: &PathCategory, v: PathId) -> Result<Self, CatError> {
        Zigzag::new(cat, vec![(v, v)])
    }

    pub fn pairs(&self) -> &[(PathId, PathId)] {
        &self.pairs
    }

    /// `s(ζ) = src(βn)`.
    pub fn source(&self, cat: &PathCategory) -> PathId {
        cat.src(self.pairs.last().unwrap().1)
    }

    /// `r(ζ) = src(α1)`.
    pub fn range(&self, cat: &PathCategory) -> PathId {
        cat.src(self.pairs[0].0)
    }

    pub fn reverse(&self) -> Zigzag {
        let pairs = self.pairs.iter().rev().map(|&(a, b)| (b, a)).collect();
        Zigzag { pairs }
    }

    /// Concatenation `ζ1 ζ2`, acting as `φ_{ζ1} ∘ φ_{ζ2}`.
    pub fn compose(&self, cat: &PathCategory, other: &Zigzag) -> Result<Zigzag, CatError> {
        if self.source(cat) != other.range(cat) {
            return Err(CatError::VertexMismatch {
                expected: cat.name(self.source(cat)).to_string(),
                got: cat.name(other.range(cat)).to_string(),
            });
        }
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Ok(Zigzag { pairs })
    }

    /// Drop interior `(v, v)` pairs for display; the map is unchanged.
    pub fn normal_pairs(&self, cat: &PathCategory) -> Vec<(PathId, PathId)> {
        let kept: Vec<(PathId, PathId)> = self
            .pairs
            .iter()
            .copied()
            .filter(|&(a, b)| !(a == b && cat.is_vertex(a)))
            .collect();
        if kept.is_empty() {
            vec![self.pairs[0]]
        } else {
            kept
        }
    }

    pub fn display(&self, cat: &PathCategory) -> String {
        self.normal_pairs(cat)
            .iter()
            .map(|&(a, b)| format!("{},{}", cat.name(a), cat.name(b)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// `φ_ζ(μ)`, or `None` when `μ ∉ A(ζ)`.
pub fn eval(cat: &PathCategory, z: &Zigzag, mu: PathId) -> Result<Option<PathId>, CatError> {
    cat.check_id(mu)?;
    if cat.rng(mu) != z.source(cat) {
        return Err(CatError::VertexMismatch {
            expected: cat.name(z.source(cat)).to_string(),
            got: cat.name(cat.rng(mu)).to_string(),
        });
    }
    let mut x = mu;
    for &(a, b) in z.pairs.iter().rev() {
        let bx = match cat.compose(b, x) {
            Some(bx) => bx,
            None => return Ok(None),
        };
        x = match left_shift_path(cat, a, bx) {
            Some(y) => y,
            None => return Ok(None),
        };
    }
    Ok(Some(x))
}

/// The zigzag set `A(ζ)`, the domain of `φ_ζ`.
pub fn domain(cat: &PathCategory, z: &Zigzag) -> PathSet {
    let s = z.source(cat);
    let members = cat
        .paths_at(s)
        .members()
        .iter()
        .copied()
        .filter(|&m| eval(cat, z, m).unwrap().is_some())
        .collect();
    PathSet::new(s, members)
}

/// A finite union `⋃ γᵢ σ^{δᵢ}` of partial maps, each defined on `δᵢΛ`.
#[derive(Clone, Debug)]
pub struct ShiftPairUnion {
    source: PathId,
    range: PathId,
    terms: Vec<(PathId, PathId)>,
}

impl ShiftPairUnion {
    pub fn terms(&self) -> &[(PathId, PathId)] {
        &self.terms
    }

    pub fn source(&self) -> PathId {
        self.source
    }

    pub fn range(&self) -> PathId {
        self.range
    }

    /// Apply the union to a path; terms agree on overlaps, so the first
    /// applicable term decides.
    pub fn eval(&self, cat: &PathCategory, mu: PathId) -> Option<PathId> {
        for &(g, d) in &self.terms {
            if let Some(rest) = left_shift_path(cat, d, mu) {
                return cat.compose(g, rest);
            }
        }
        None
    }

    /// Every two terms must agree on the intersection of their domains.
    pub fn check_consistent(&self, cat: &PathCategory) -> bool {
        for (i, &(g1, d1)) in self.terms.iter().enumerate() {
            for &(g2, d2) in &self.terms[i + 1..] {
                let overlap = tail_set(cat, d1).unwrap().intersect(&tail_set(cat, d2).unwrap());
                for &x in overlap.members() {
                    let y1 = left_shift_path(cat, d1, x).and_then(|r| cat.compose(g1, r));
                    let y2 = left_shift_path(cat, d2, x).and_then(|r| cat.compose(g2, r));
                    if y1 != y2 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn single_pair_terms(cat: &PathCategory, a: PathId, b: PathId) -> Vec<(PathId, PathId)> {
    // σ^a ∘ (b·) = ⋃_{ε ∈ a∨b} (σ^a ε) σ^{σ^b ε}
    min_common_extensions(cat, &[a, b])
        .unwrap()
        .into_iter()
        .map(|e| {
            let g = left_shift_path(cat, a, e).unwrap();
            let d = left_shift_path(cat, b, e).unwrap();
            (g, d)
        })
        .collect()
}

fn compose_terms(
    cat: &PathCategory,
    outer: &[(PathId, PathId)],
    inner: &[(PathId, PathId)],
) -> Vec<(PathId, PathId)> {
    // (g1 σ^{d1}) ∘ (g2 σ^{d2}) = ⋃_{ε ∈ d1∨g2} (g1 σ^{d1}ε) σ^{d2 σ^{g2}ε}
    let mut out = Vec::new();
    for &(g1, d1) in outer {
        for &(g2, d2) in inner {
            if cat.rng(d1) != cat.rng(g2) {
                continue;
            }
            for e in min_common_extensions(cat, &[d1, g2]).unwrap() {
                let left = cat.compose(g1, left_shift_path(cat, d1, e).unwrap()).unwrap();
                let right = cat.compose(d2, left_shift_path(cat, g2, e).unwrap()).unwrap();
                out.push((left, right));
            }
        }
    }
    out
}

fn prune_terms(cat: &PathCategory, terms: &mut Vec<(PathId, PathId)>) {
    terms.sort_unstable();
    terms.dedup();
    // A term whose domain tail sits inside another's, with consistent values,
    // is a restriction and can be deleted.
    let snapshot = terms.clone();
    terms.retain(|&(g, d)| {
        !snapshot.iter().any(|&(g2, d2)| {
            if (g2, d2) == (g, d) {
                return false;
            }
            match left_shift_path(cat, d2, d) {
                Some(m) => cat.compose(g2, m) == Some(g),
                None => false,
            }
        })
    });
}

/// Rewrite `φ_ζ` as a finite union of maps `γσ^δ`, equal to it pointwise.
pub fn reduce_to_shift_pairs(cat: &PathCategory, z: &Zigzag) -> ShiftPairUnion {
    let mut terms: Option<Vec<(PathId, PathId)>> = None;
    for &(a, b) in z.pairs.iter().rev() {
        let step = single_pair_terms(cat, a, b);
        terms = Some(match terms {
            None => step,
            Some(inner) => compose_terms(cat, &step, &inner),
        });
    }
    let mut terms = terms.unwrap();
    prune_terms(cat, &mut terms);
    let u = ShiftPairUnion { source: z.source(cat), range: z.range(cat), terms };
    debug_assert!(u.check_consistent(cat));
    u
}
