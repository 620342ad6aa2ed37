//! The discrete groupoid `G(Λ)` of a finite category: equivalence classes
//! `[α, β, x]` with composition via common tails, isotropy, orbits, and
//! degree cocycles, plus the restriction to `∂Λ`.

use std::collections::BTreeMap;

use crate::boundary::{boundary, lambda_star_all, HereditaryDirectedSet};
use crate::cat::{
    initial_segments, left_shift_path, min_common_extensions, PathCategory,
    PathId,
};
use crate::degree::DegreeFunctor;
use crate::error::CatError;

/// A canonical representative of `[α, β, x]`: `src(α) = src(β) = vertex(x)`,
/// stored in most-shifted form, so `x` is the trivial point at a vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GroupoidElement {
    pub alpha: PathId,
    pub beta: PathId,
    pub x: HereditaryDirectedSet,
}

impl GroupoidElement {
    pub fn display(&self, cat: &PathCategory) -> String {
        format!("[{},{},{}]", cat.name(self.alpha), cat.name(self.beta), self.x.display(cat))
    }
}

/// Concatenation on points: `αx`, the hereditary closure of `{αγ : γ ∈ x}`.
pub fn concat_point(
    cat: &PathCategory,
    alpha: PathId,
    x: &HereditaryDirectedSet,
) -> Result<HereditaryDirectedSet, CatError> {
    cat.check_id(alpha)?;
    if x.vertex() != cat.src(alpha) {
        return Err(CatError::VertexMismatch {
            expected: cat.name(cat.src(alpha)).to_string(),
            got: cat.name(x.vertex()).to_string(),
        });
    }
    let mut members = Vec::new();
    for &g in x.members() {
        let ag = cat.compose(alpha, g).expect("composable by the vertex check");
        members.extend(initial_segments(cat, ag)?.members().iter().copied());
    }
    HereditaryDirectedSet::new(cat, cat.rng(alpha), members)
}

/// The left shift on points: `σ^α(x)` for `α ∈ x`.
pub fn shift_point(
    cat: &PathCategory,
    alpha: PathId,
    x: &HereditaryDirectedSet,
) -> Option<HereditaryDirectedSet> {
    if !x.contains(alpha) {
        return None;
    }
    let members: Vec<PathId> =
        x.members().iter().filter_map(|&m| left_shift_path(cat, alpha, m)).collect();
    Some(HereditaryDirectedSet::new(cat, cat.src(alpha), members).expect("shift of a point is a point"))
}

/// If `αx = α'x'`, produce `(δ, δ', z)` with `x = δz`, `x' = δ'z`,
/// `αδ = α'δ' ∈ α ∨ α'`.
pub fn common_tail(
    cat: &PathCategory,
    alpha: PathId,
    x: &HereditaryDirectedSet,
    alpha2: PathId,
    x2: &HereditaryDirectedSet,
) -> Result<Option<(PathId, PathId, HereditaryDirectedSet)>, CatError> {
    let ax = concat_point(cat, alpha, x)?;
    let ax2 = concat_point(cat, alpha2, x2)?;
    if ax != ax2 {
        return Ok(None);
    }
    // Some minimal common extension ε = αδ = α'δ' lies in 𝒰_{αx}; on a
    // finite category that means ε ∈ αx, and z = σ^ε(αx).
    for eps in min_common_extensions(cat, &[alpha, alpha2])? {
        if ax.contains(eps) {
            let delta = left_shift_path(cat, alpha, eps).unwrap();
            let delta2 = left_shift_path(cat, alpha2, eps).unwrap();
            let z = shift_point(cat, eps, &ax).unwrap();
            debug_assert_eq!(concat_point(cat, delta, &z)?, *x);
            debug_assert_eq!(concat_point(cat, delta2, &z)?, *x2);
            return Ok(Some((delta, delta2, z)));
        }
    }
    unreachable!("αx = α'x' forces a minimal common extension inside the point")
}

/// The defining relation on triples: `(α,β,x) ~ (α',β',x')` iff there are
/// `z`, `δ`, `δ'` with `x = δz`, `x' = δ'z`, `αδ = α'δ'`, `βδ = β'δ'`.
pub fn equivalent(
    cat: &PathCategory,
    a: (&PathId, &PathId, &HereditaryDirectedSet),
    b: (&PathId, &PathId, &HereditaryDirectedSet),
) -> Result<bool, CatError> {
    let (al, be, x) = a;
    let (al2, be2, x2) = b;
    for &delta in x.members() {
        let z = shift_point(cat, delta, x).unwrap();
        for &delta2 in x2.members() {
            let z2 = shift_point(cat, delta2, x2).unwrap();
            if z != z2 {
                continue;
            }
            if cat.compose(*al, delta) == cat.compose(*al2, delta2)
                && cat.compose(*al, delta).is_some()
                && cat.compose(*be, delta) == cat.compose(*be2, delta2)
                && cat.compose(*be, delta).is_some()
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Shift a triple onto its canonical representative: cancel the largest
/// common tail, leaving the trivial point at a vertex.
pub fn canonicalize(
    cat: &PathCategory,
    alpha: PathId,
    beta: PathId,
    x: &HereditaryDirectedSet,
) -> Result<GroupoidElement, CatError> {
    if cat.src(alpha) != x.vertex() || cat.src(beta) != x.vertex() {
        return Err(CatError::VertexMismatch {
            expected: cat.name(x.vertex()).to_string(),
            got: format!("src {} / {}", cat.name(cat.src(alpha)), cat.name(cat.src(beta))),
        });
    }
    let m = x.generator(cat);
    let alpha = cat.compose(alpha, m).expect("generator composes");
    let beta = cat.compose(beta, m).expect("generator composes");
    let w = cat.src(m);
    let point = HereditaryDirectedSet::new(cat, w, vec![w])?;
    Ok(GroupoidElement { alpha, beta, x: point })
}

/// The groupoid of a finite category, materialized on the full unit space
/// `X = Λ*` or its boundary restriction.
#[derive(Clone, Debug)]
pub struct Groupoid {
    pub elements: Vec<GroupoidElement>,
    pub units: Vec<HereditaryDirectedSet>,
    pub boundary_restricted: bool,
    index: BTreeMap<(PathId, PathId), usize>,
}

impl Groupoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn find(&self, g: &GroupoidElement) -> Option<usize> {
        self.index.get(&(g.alpha, g.beta)).copied()
    }

    /// `s([α,β,x]) = βx`.
    pub fn source(&self, cat: &PathCategory, g: &GroupoidElement) -> HereditaryDirectedSet {
        concat_point(cat, g.beta, &g.x).expect("well-typed element")
    }

    /// `r([α,β,x]) = αx`.
    pub fn range(&self, cat: &PathCategory, g: &GroupoidElement) -> HereditaryDirectedSet {
        concat_point(cat, g.alpha, &g.x).expect("well-typed element")
    }

    pub fn inverse(&self, g: &GroupoidElement) -> GroupoidElement {
        GroupoidElement { alpha: g.beta, beta: g.alpha, x: g.x.clone() }
    }

    pub fn unit_at(&self, cat: &PathCategory, x: &HereditaryDirectedSet) -> GroupoidElement {
        let v = x.vertex();
        canonicalize(cat, v, v, x).expect("unit is well-typed")
    }

    /// `[α,β,x][γ,δ,y]` via a common tail for `βx = γy`; `None` when the pair
    /// is not composable.
    pub fn compose(
        &self,
        cat: &PathCategory,
        g: &GroupoidElement,
        h: &GroupoidElement,
    ) -> Result<Option<GroupoidElement>, CatError> {
        // Canonical elements carry trivial points, where concatenation is
        // injective: βx = γy forces β = γ. Skip the tail search otherwise.
        if g.x.members().len() == 1 && h.x.members().len() == 1 && g.beta != h.alpha {
            return Ok(None);
        }
        match common_tail(cat, g.beta, &g.x, h.alpha, &h.x)? {
            None => Ok(None),
            Some((xi, eta, z)) => {
                let alpha = cat.compose(g.alpha, xi).expect("composable");
                let delta = cat.compose(h.beta, eta).expect("composable");
                Ok(Some(canonicalize(cat, alpha, delta, &z)?))
            }
        }
    }

    /// The isotropy group at a unit: all `g` with `s(g) = r(g) = x`.
    pub fn isotropy(&self, cat: &PathCategory, x: &HereditaryDirectedSet) -> Vec<GroupoidElement> {
        self.elements
            .iter()
            .filter(|g| &self.source(cat, g) == x && &self.range(cat, g) == x)
            .cloned()
            .collect()
    }

    pub fn has_trivial_isotropy_at(&self, cat: &PathCategory, x: &HereditaryDirectedSet) -> bool {
        self.isotropy(cat, x).len() == 1
    }

    /// Partition of the unit space into orbits.
    pub fn orbits(&self, cat: &PathCategory) -> Vec<Vec<HereditaryDirectedSet>> {
        let mut remaining: Vec<HereditaryDirectedSet> = self.units.clone();
        let mut orbits = Vec::new();
        while let Some(seed) = remaining.first().cloned() {
            let mut orbit = vec![seed.clone()];
            loop {
                let mut grew = false;
                for g in &self.elements {
                    let s = self.source(cat, g);
                    let r = self.range(cat, g);
                    if orbit.contains(&s) && !orbit.contains(&r) {
                        orbit.push(r);
                        grew = true;
                    } else if orbit.contains(&r) && !orbit.contains(&s) {
                        orbit.push(s);
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            orbit.sort();
            remaining.retain(|u| !orbit.contains(u));
            orbits.push(orbit);
        }
        orbits.sort();
        orbits
    }

    /// `c_ψ([α,β,x]) = ψ(α) − ψ(β)`.
    pub fn cocycle(
        &self,
        psi: &DegreeFunctor,
        g: &GroupoidElement,
    ) -> Result<Vec<i64>, CatError> {
        psi.sub(psi.value(g.alpha), psi.value(g.beta))
    }

    /// The kernel subgroupoid `G^ψ = c_ψ^{-1}(0)`.
    pub fn kernel_subgroupoid(&self, psi: &DegreeFunctor) -> Result<Groupoid, CatError> {
        let mut elements = Vec::new();
        for g in &self.elements {
            if psi.is_zero(&self.cocycle(psi, g)?) {
                elements.push(g.clone());
            }
        }
        let index = elements.iter().enumerate().map(|(i, g)| ((g.alpha, g.beta), i)).collect();
        Ok(Groupoid {
            elements,
            units: self.units.clone(),
            boundary_restricted: self.boundary_restricted,
            index,
        })
    }
}

/// Materialize `G(Λ)` (or `G|∂Λ`). Elements are enumerated directly in
/// canonical form: pairs of paths with a common source whose trivial point
/// lies in the chosen unit space.
pub fn build_groupoid(cat: &PathCategory, restrict_to_boundary: bool) -> Result<Groupoid, CatError> {
    let units = if restrict_to_boundary { boundary(cat)? } else { lambda_star_all(cat)? };
    let mut elements = Vec::new();
    for w in cat.vertices() {
        let from_w = cat.paths_from(w);
        let point = HereditaryDirectedSet::new(cat, w, vec![w])?;
        for &a in &from_w {
            for &b in &from_w {
                let g = GroupoidElement { alpha: a, beta: b, x: point.clone() };
                if restrict_to_boundary {
                    // s(g) and r(g) must be boundary points; both are
                    // principal at paths with source w.
                    let src_ok = units.contains(&concat_point(cat, b, &point)?);
                    let rng_ok = units.contains(&concat_point(cat, a, &point)?);
                    if !(src_ok && rng_ok) {
                        continue;
                    }
                }
                elements.push(g);
            }
        }
    }
    elements.sort();
    let index = elements.iter().enumerate().map(|(i, g)| ((g.alpha, g.beta), i)).collect();
    Ok(Groupoid { elements, units, boundary_restricted: restrict_to_boundary, index })
}
