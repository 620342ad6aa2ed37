//! Directed hereditary sets `Λ*`, maximal sets `Λ**`, the ultrafilters `𝒰_C`,
//! finite exhaustive sets `FE(v)`, and the boundary `∂Λ` cut out by the
//! closure criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Mutex, OnceLock};

use crate::boolring::{ring_masks, Carrier};
use crate::cat::{
    initial_segments, is_initial_segment, left_shift_path, meets, tail_set, PathCategory, PathId,
    PathSet,
};
use crate::error::CatError;

/// A nonempty, hereditary, directed subset of `vΛ` — an ultrafilter /
/// boundary point candidate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct HereditaryDirectedSet {
    vertex: PathId,
    members: Vec<PathId>,
}

impl HereditaryDirectedSet {
    /// Validate heredity, directedness, and nonemptiness.
    pub fn new(cat: &PathCategory, v: PathId, members: Vec<PathId>) -> Result<Self, CatError> {
        let set = PathSet::new(v, members);
        if !set.contains(v) {
            return Err(CatError::NotHereditaryDirected(format!(
                "must contain the vertex {}",
                cat.name(v)
            )));
        }
        for &m in set.members() {
            if cat.rng(m) != v {
                return Err(CatError::NotHereditaryDirected(format!(
                    "{} is not based at {}",
                    cat.name(m),
                    cat.name(v)
                )));
            }
            for &seg in initial_segments(cat, m)?.members() {
                if !set.contains(seg) {
                    return Err(CatError::NotHereditaryDirected(format!(
                        "not hereditary: {} ∈ C but {} ∉ C",
                        cat.name(m),
                        cat.name(seg)
                    )));
                }
            }
        }
        for &a in set.members() {
            for &b in set.members() {
                let common = tail_set(cat, a)?.intersect(&tail_set(cat, b)?);
                if !common.members().iter().any(|&c| set.contains(c)) {
                    return Err(CatError::NotHereditaryDirected(format!(
                        "not directed at ({}, {})",
                        cat.name(a),
                        cat.name(b)
                    )));
                }
            }
        }
        Ok(HereditaryDirectedSet { vertex: v, members: set.members().to_vec() })
    }

    /// `[μ]`, the principal hereditary directed set of a path.
    pub fn principal(cat: &PathCategory, mu: PathId) -> Result<Self, CatError> {
        let segs = initial_segments(cat, mu)?;
        Ok(HereditaryDirectedSet { vertex: cat.rng(mu), members: segs.members().to_vec() })
    }

    pub fn vertex(&self) -> PathId {
        self.vertex
    }

    pub fn members(&self) -> &[PathId] {
        &self.members
    }

    pub fn contains(&self, p: PathId) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    /// The maximal element. A finite directed hereditary set is an interval
    /// `[μ]`, so the generator exists and is unique.
    pub fn generator(&self, cat: &PathCategory) -> PathId {
        *self
            .members
            .iter()
            .find(|&&m| self.members.iter().all(|&o| o == m || is_initial_segment(cat, o, m)))
            .expect("a finite directed set has a maximum")
    }

    pub fn display(&self, cat: &PathCategory) -> String {
        format!(
            "{{{}}}",
            self.members.iter().map(|&m| cat.name(m)).collect::<Vec<_>>().join(",")
        )
    }
}

/// Every hereditary directed subset of `vΛ`. On a finite category these are
/// exactly the principal sets `[μ]`, `μ ∈ vΛ`; the full-subset scan stays in
/// test code as the oracle.
pub fn lambda_star(cat: &PathCategory, v: PathId) -> Result<Vec<HereditaryDirectedSet>, CatError> {
    cat.check_id(v)?;
    let mut out: Vec<HereditaryDirectedSet> = cat
        .paths_at(v)
        .members()
        .iter()
        .map(|&m| HereditaryDirectedSet::principal(cat, m))
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// `Λ*` over every vertex.
pub fn lambda_star_all(cat: &PathCategory) -> Result<Vec<HereditaryDirectedSet>, CatError> {
    let mut out = Vec::new();
    for v in cat.vertices() {
        out.extend(lambda_star(cat, v)?);
    }
    Ok(out)
}

/// Maximal directed subsets of `vΛ`.
pub fn maximal_sets(cat: &PathCategory, v: PathId) -> Result<Vec<HereditaryDirectedSet>, CatError> {
    Ok(lambda_star(cat, v)?.into_iter().filter(|c| is_maximal(cat, c)).collect())
}

/// Maximality under inclusion among directed sets: no path meets everything
/// in `C` while lying outside it.
pub fn is_maximal(cat: &PathCategory, c: &HereditaryDirectedSet) -> bool {
    let m = c.generator(cat);
    // [m] is maximal iff m has no proper extension.
    tail_set(cat, m).unwrap().len() == 1
}

/// The pair `(𝒰_C, 𝒰_{C,0})` as masks over `𝒜_{vertex(C)}`.
pub fn ultrafilter_of(
    cat: &PathCategory,
    c: &HereditaryDirectedSet,
) -> Result<(BTreeSet<u64>, BTreeSet<u64>), CatError> {
    let v = c.vertex();
    let carrier = Carrier::new(cat, v)?;
    let ring = ring_masks(cat, v)?;
    let mut uc = BTreeSet::new();
    let mut uc0 = BTreeSet::new();
    for &e in &ring {
        let set = carrier.set_of(e);
        for &alpha in c.members() {
            let tail = tail_set(cat, alpha)?;
            // E ⊇ C ∩ αΛ
            if tail.members().iter().filter(|p| c.contains(**p)).all(|&p| set.contains(p)) {
                uc.insert(e);
            }
            // E ⊇ αΛ
            if tail.members().iter().all(|&p| set.contains(p)) {
                uc0.insert(e);
            }
        }
    }
    Ok((uc, uc0))
}

/// Is the filter (given as the set of its member masks) an ultrafilter of
/// `𝒜_v`? Uses the characterization: for each `E`, either `E ∈ 𝒰` or some
/// member of `𝒰` is disjoint from `E`.
pub fn is_ultrafilter(cat: &PathCategory, v: PathId, filter: &BTreeSet<u64>) -> Result<bool, CatError> {
    let ring = ring_masks(cat, v)?;
    if filter.contains(&0) || filter.is_empty() {
        return Ok(false);
    }
    for &e in &ring {
        let inside = filter.contains(&e);
        let separated = filter.iter().any(|&f| f & e == 0);
        if inside == separated {
            return Ok(false);
        }
    }
    // Filter axioms: closed under intersection and supersets within the ring.
    for &a in filter {
        for &b in filter {
            if !filter.contains(&(a & b)) {
                return Ok(false);
            }
        }
        for &e in &ring {
            if e & a == a && !filter.contains(&e) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A finite subset of `vΛ` meeting every path at `v`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ExhaustiveSet {
    pub vertex: PathId,
    pub members: Vec<PathId>,
}

/// `F` is exhaustive at `v`: every `α ∈ vΛ` meets some member.
pub fn is_exhaustive(cat: &PathCategory, v: PathId, members: &[PathId]) -> Result<bool, CatError> {
    for &m in members {
        cat.check_id(m)?;
    }
    for &alpha in cat.paths_at(v).members() {
        let mut hit = false;
        for &beta in members {
            if meets(cat, alpha, beta)? {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

fn fe_cache() -> &'static Mutex<BTreeMap<(u64, u32, bool), Vec<ExhaustiveSet>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(u64, u32, bool), Vec<ExhaustiveSet>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Enumerate `FE(v)`, optionally only the inclusion-minimal sets.
pub fn finite_exhaustive_sets(
    cat: &PathCategory,
    v: PathId,
    minimal_only: bool,
) -> Result<Vec<ExhaustiveSet>, CatError> {
    let key = (cat.uid(), v.0, minimal_only);
    if let Some(hit) = fe_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let paths = cat.paths_at(v);
    let n = paths.len();
    if n > 20 {
        return Err(CatError::CarrierTooLarge(n));
    }
    // A subset is exhaustive iff the union of its members' meet-masks covers
    // all of vΛ.
    let meet_masks: Vec<u64> = paths
        .members()
        .iter()
        .map(|&beta| {
            let mut m = 0u64;
            for (i, &alpha) in paths.members().iter().enumerate() {
                if meets(cat, alpha, beta).unwrap() {
                    m |= 1 << i;
                }
            }
            m
        })
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut masks: Vec<u64> = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let mut covered = 0u64;
        for (i, &mm) in meet_masks.iter().enumerate() {
            if mask & (1 << i) != 0 {
                covered |= mm;
            }
        }
        if covered == all {
            masks.push(mask);
        }
    }
    if minimal_only {
        let snapshot = masks.clone();
        masks.retain(|&m| !snapshot.iter().any(|&o| o != m && (o & m) == o));
    }
    let out: Vec<ExhaustiveSet> = masks
        .into_iter()
        .map(|mask| ExhaustiveSet {
            vertex: v,
            members: paths
                .members()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect(),
        })
        .collect();
    fe_cache().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// The closure criterion for `C ∈ ∂Λ`: for every `α ∈ C` there is
/// `α' ∈ C ∩ αΛ` such that every finite exhaustive set at `s(α')` meets
/// `σ^{α'}C`.
pub fn is_boundary(cat: &PathCategory, c: &HereditaryDirectedSet) -> Result<bool, CatError> {
    for &alpha in c.members() {
        let candidates: Vec<PathId> = tail_set(cat, alpha)?
            .members()
            .iter()
            .copied()
            .filter(|&x| c.contains(x))
            .collect();
        let mut found = false;
        for alpha2 in candidates {
            let s = cat.src(alpha2);
            let shifted: Vec<PathId> = c
                .members()
                .iter()
                .filter_map(|&x| left_shift_path(cat, alpha2, x))
                .collect();
            let all_hit = finite_exhaustive_sets(cat, s, false)?
                .iter()
                .all(|f| f.members.iter().any(|m| shifted.contains(m)));
            if all_hit {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

fn boundary_cache() -> &'static Mutex<BTreeMap<u64, Vec<HereditaryDirectedSet>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Vec<HereditaryDirectedSet>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// `∂Λ`: the points passing the closure criterion. On a finite category this
/// coincides with `Λ**`; the agreement is asserted.
pub fn boundary(cat: &PathCategory) -> Result<Vec<HereditaryDirectedSet>, CatError> {
    if let Some(hit) = boundary_cache().lock().unwrap().get(&cat.uid()) {
        return Ok(hit.clone());
    }
    let mut out = Vec::new();
    for c in lambda_star_all(cat)? {
        let by_criterion = is_boundary(cat, &c)?;
        let by_maximality = is_maximal(cat, &c);
        assert_eq!(
            by_criterion, by_maximality,
            "closure criterion must agree with maximality on finite categories"
        );
        if by_criterion {
            out.push(c);
        }
    }
    boundary_cache().lock().unwrap().insert(cat.uid(), out.clone());
    Ok(out)
}

/// Does `⋃_{α∈Δ} αΛ*` cover `v∂Λ`? Asserted equal to exhaustiveness of `Δ`.
pub fn exhaustive_coverage(cat: &PathCategory, v: PathId, delta: &[PathId]) -> Result<bool, CatError> {
    let covered = boundary(cat)?
        .into_iter()
        .filter(|c| c.vertex() == v)
        .all(|c| delta.iter().any(|&a| c.contains(a)));
    let exhaustive = is_exhaustive(cat, v, delta)?;
    assert_eq!(covered, exhaustive, "coverage lemma must hold on finite categories");
    Ok(covered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testcats::{point, sq1, sq2};

    /// Oracle: scan all subsets of `vΛ` for hereditary directed ones.
    fn lambda_star_by_scan(cat: &PathCategory, v: PathId) -> Vec<HereditaryDirectedSet> {
        let paths = cat.paths_at(v);
        let n = paths.len();
        let mut out = Vec::new();
        for mask in 1u64..(1 << n) {
            let members: Vec<PathId> = paths
                .members()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect();
            if let Ok(c) = HereditaryDirectedSet::new(cat, v, members) {
                out.push(c);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn lambda_star_examples() {
        let cat = sq2();
        let t = cat.by_name("t").unwrap();
        let stars = lambda_star(&cat, t).unwrap();
        assert_eq!(stars.len(), 5);
        assert_eq!(stars, lambda_star_by_scan(&cat, t));

        let v0 = cat.by_name("v0").unwrap();
        let sink = lambda_star(&cat, v0).unwrap();
        assert_eq!(sink.len(), 1);
        assert_eq!(sink[0].members(), &[v0]);

        let sq1 = sq1();
        let t1 = sq1.by_name("t").unwrap();
        assert_eq!(lambda_star(&sq1, t1).unwrap().len(), 4);

        for cat in [point(), sq1, sq2()] {
            for v in cat.vertices() {
                assert_eq!(lambda_star(&cat, v).unwrap(), lambda_star_by_scan(&cat, v));
            }
        }
    }

    #[test]
    fn maximal_sets_examples() {
        let cat = sq2();
        let t = cat.by_name("t").unwrap();
        let eps0 = cat.by_name("eps0").unwrap();
        let eps1 = cat.by_name("eps1").unwrap();
        let max_t = maximal_sets(&cat, t).unwrap();
        assert_eq!(
            max_t,
            vec![
                HereditaryDirectedSet::principal(&cat, eps0).unwrap(),
                HereditaryDirectedSet::principal(&cat, eps1).unwrap(),
            ]
        );

        let v0 = cat.by_name("v0").unwrap();
        assert_eq!(maximal_sets(&cat, v0).unwrap().len(), 1);

        let p = cat.by_name("p").unwrap();
        let gammas = maximal_sets(&cat, p).unwrap();
        assert_eq!(gammas.len(), 2);
    }

    #[test]
    fn ultrafilter_examples() {
        let cat = sq2();
        let t = cat.by_name("t").unwrap();
        let eps0 = cat.by_name("eps0").unwrap();
        let alpha = cat.by_name("alpha").unwrap();
        let carrier = Carrier::new(&cat, t).unwrap();

        // C = [ε0]: 𝒰_C is the fixed ultrafilter at ε0.
        let c = HereditaryDirectedSet::principal(&cat, eps0).unwrap();
        let (uc, uc0) = ultrafilter_of(&cat, &c).unwrap();
        assert!(is_ultrafilter(&cat, t, &uc).unwrap());
        let bit = 1u64 << carrier.index_of(eps0).unwrap();
        for &e in ring_masks(&cat, t).unwrap().iter() {
            assert_eq!(uc.contains(&e), e & bit != 0);
        }
        // ε0 is maximal, so the base is already an ultrafilter.
        assert!(is_ultrafilter(&cat, t, &uc0).unwrap());

        // C = [α] is not maximal: 𝒰_{C,0} is not an ultrafilter (witness ε0Λ).
        let c = HereditaryDirectedSet::principal(&cat, alpha).unwrap();
        let (uc, uc0) = ultrafilter_of(&cat, &c).unwrap();
        assert!(is_ultrafilter(&cat, t, &uc).unwrap());
        assert!(!is_ultrafilter(&cat, t, &uc0).unwrap());

        // Principal at a sink.
        let v0 = cat.by_name("v0").unwrap();
        let c = HereditaryDirectedSet::new(&cat, v0, vec![v0]).unwrap();
        let (uc, _) = ultrafilter_of(&cat, &c).unwrap();
        assert!(is_ultrafilter(&cat, v0, &uc).unwrap());
    }

    #[test]
    fn classification_against_brute_force() {
        // Brute force: principal filters ↑E for nonempty E, kept when they
        // pass the ultrafilter test. Every ultrafilter of a finite ring is
        // principal, so this enumeration is exhaustive.
        for cat in [point(), sq1(), sq2()] {
            for v in cat.vertices() {
                let ring = ring_masks(&cat, v).unwrap();
                let mut brute: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
                for &e in &ring {
                    if e == 0 {
                        continue;
                    }
                    let up: BTreeSet<u64> =
                        ring.iter().copied().filter(|&f| f & e == e).collect();
                    if is_ultrafilter(&cat, v, &up).unwrap() {
                        brute.insert(up);
                    }
                }
                let stars = lambda_star(&cat, v).unwrap();
                let mapped: BTreeSet<BTreeSet<u64>> =
                    stars.iter().map(|c| ultrafilter_of(&cat, c).unwrap().0).collect();
                assert_eq!(mapped.len(), stars.len(), "C ↦ 𝒰_C must be injective");
                assert_eq!(mapped, brute, "C ↦ 𝒰_C must be onto the ultrafilters");
                // 𝒰_{C,0} ultrafilter ⟺ C maximal.
                for c in &stars {
                    let (_, uc0) = ultrafilter_of(&cat, c).unwrap();
                    assert_eq!(is_ultrafilter(&cat, v, &uc0).unwrap(), is_maximal(&cat, c));
                }
            }
        }
    }

    #[test]
    fn exhaustive_sets_examples() {
        let cat = sq2();
        let t = cat.by_name("t").unwrap();
        let alpha = cat.by_name("alpha").unwrap();
        let eps0 = cat.by_name("eps0").unwrap();
        let eps1 = cat.by_name("eps1").unwrap();
        assert!(is_exhaustive(&cat, t, &[alpha]).unwrap());
        assert!(!is_exhaustive(&cat, t, &[eps0]).unwrap());
        assert!(is_exhaustive(&cat, t, &[eps0, eps1]).unwrap());
        assert!(is_exhaustive(&cat, t, &[t]).unwrap());

        let fe = finite_exhaustive_sets(&cat, t, false).unwrap();
        assert!(fe.iter().any(|f| f.members == vec![alpha]));
        assert!(fe.iter().all(|f| is_exhaustive(&cat, t, &f.members).unwrap()));
        let fe_min = finite_exhaustive_sets(&cat, t, true).unwrap();
        for f in &fe_min {
            for drop in 0..f.members.len() {
                let reduced: Vec<PathId> = f
                    .members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, &p)| p)
                    .collect();
                assert!(!is_exhaustive(&cat, t, &reduced).unwrap());
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let cat = sq2();
        let bdy = boundary(&cat).unwrap();
        assert_eq!(bdy.len(), 8);
        let alpha = cat.by_name("alpha").unwrap();
        let c = HereditaryDirectedSet::principal(&cat, alpha).unwrap();
        assert!(!is_boundary(&cat, &c).unwrap());

        let cat = point();
        let bdy = boundary(&cat).unwrap();
        assert_eq!(bdy.len(), 1);
    }

    #[test]
    fn coverage_examples() {
        let cat = sq2();
        let t = cat.by_name("t").unwrap();
        let alpha = cat.by_name("alpha").unwrap();
        let eps0 = cat.by_name("eps0").unwrap();
        assert!(exhaustive_coverage(&cat, t, &[alpha]).unwrap());
        assert!(exhaustive_coverage(&cat, t, &[t]).unwrap());
        assert!(!exhaustive_coverage(&cat, t, &[eps0]).unwrap());
    }
}
