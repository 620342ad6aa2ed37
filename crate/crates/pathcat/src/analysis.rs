//! Structural verdicts on a finite category: aperiodicity, topological
//! freeness, minimality, generalized cycles with entrances, and the local
//! contractivity hypothesis. Every verdict carries a witness and is
//! cross-checked against its groupoid-side characterization.

use crate::boundary::{boundary, finite_exhaustive_sets, is_exhaustive, HereditaryDirectedSet};
use crate::cat::{meets, min_common_extensions, PathCategory, PathId};
use crate::error::CatError;
use crate::groupoid::{build_groupoid, concat_point, shift_point};

/// `x` is aperiodic: distinct `α, β ∈ x` have `σ^α(x) ≠ σ^β(x)`.
pub fn is_aperiodic_point(cat: &PathCategory, x: &HereditaryDirectedSet) -> Result<bool, CatError> {
    let bdy = boundary(cat)?;
    if !bdy.contains(x) {
        return Err(CatError::NotBoundary(x.display(cat)));
    }
    Ok(aperiodic_point_unchecked(cat, x))
}

fn aperiodic_point_unchecked(cat: &PathCategory, x: &HereditaryDirectedSet) -> bool {
    for &a in x.members() {
        for &b in x.members() {
            if a != b && shift_point(cat, a, x) == shift_point(cat, b, x) {
                return false;
            }
        }
    }
    true
}

/// `x` is right-aperiodic: distinct `α, β ∈ Λ r(x)` have `αx ≠ βx`.
pub fn is_right_aperiodic_point(cat: &PathCategory, x: &HereditaryDirectedSet) -> bool {
    let from = cat.paths_from(x.vertex());
    for &a in &from {
        for &b in &from {
            if a != b
                && concat_point(cat, a, x).unwrap() == concat_point(cat, b, x).unwrap()
            {
                return false;
            }
        }
    }
    true
}

/// `{α,β}`-periodicity: `αγ ⋔ βγ` for every `γ ∈ s(α)Λ`. Only parallel pairs
/// (equal source and range) are eligible.
pub fn has_periodicity(cat: &PathCategory, alpha: PathId, beta: PathId) -> Result<bool, CatError> {
    cat.check_id(alpha)?;
    cat.check_id(beta)?;
    if alpha == beta || cat.src(alpha) != cat.src(beta) || cat.rng(alpha) != cat.rng(beta) {
        return Ok(false);
    }
    for &gamma in cat.paths_at(cat.src(alpha)).members() {
        let ag = cat.compose(alpha, gamma).expect("composable");
        let bg = cat.compose(beta, gamma).expect("composable");
        if !meets(cat, ag, bg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Aperiodicity of the category: no parallel pair is periodic. The witness is
/// a periodic pair, if any.
pub fn is_aperiodic_category(
    cat: &PathCategory,
) -> Result<(bool, Option<(PathId, PathId)>), CatError> {
    for a in cat.morphisms() {
        for b in cat.morphisms() {
            if a < b && has_periodicity(cat, a, b)? {
                return Ok((false, Some((a, b))));
            }
        }
    }
    Ok((true, None))
}

/// The boundary form of `{α,β}`-periodicity: `αx = βx` for every
/// `x ∈ s(α)∂Λ`.
pub fn has_periodicity_on_boundary(
    cat: &PathCategory,
    alpha: PathId,
    beta: PathId,
) -> Result<bool, CatError> {
    if alpha == beta || cat.src(alpha) != cat.src(beta) || cat.rng(alpha) != cat.rng(beta) {
        return Ok(false);
    }
    for x in boundary(cat)? {
        if x.vertex() == cat.src(alpha)
            && concat_point(cat, alpha, &x)? != concat_point(cat, beta, &x)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimality criterion: for every ordered vertex pair `(u, v)` there is
/// `F ∈ FE(v)` whose members' sources are all seen from `u`. The witness is
/// a failing pair.
pub fn is_minimal(cat: &PathCategory) -> Result<(bool, Option<(PathId, PathId)>), CatError> {
    for u in cat.vertices() {
        for v in cat.vertices() {
            let fe = finite_exhaustive_sets(cat, v, false)?;
            let ok = fe.iter().any(|f| {
                f.members.iter().all(|&a| {
                    cat.morphisms().any(|m| cat.rng(m) == u && cat.src(m) == cat.src(a))
                })
            });
            if !ok {
                return Ok((false, Some((u, v))));
            }
        }
    }
    Ok((true, None))
}

/// `(μ,ν)` is a generalized cycle: distinct parallel paths with `μτ ⋔ ν` for
/// every `τ ∈ s(μ)Λ`.
pub fn is_generalized_cycle(cat: &PathCategory, mu: PathId, nu: PathId) -> Result<bool, CatError> {
    cat.check_id(mu)?;
    cat.check_id(nu)?;
    if mu == nu || cat.src(mu) != cat.src(nu) || cat.rng(mu) != cat.rng(nu) {
        return Ok(false);
    }
    for &tau in cat.paths_at(cat.src(mu)).members() {
        let mt = cat.compose(mu, tau).expect("composable");
        if !meets(cat, mt, nu)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three equivalent faces of a generalized cycle, all computed.
#[derive(Clone, Debug)]
pub struct GeneralizedCycleChecks {
    pub by_definition: bool,
    /// `σ^μ(μ ∨ ν)` is exhaustive at `s(μ)`.
    pub shifted_vee_exhaustive: bool,
    /// `μ∂Λ ⊆ ν∂Λ`.
    pub boundary_inclusion: bool,
}

pub fn generalized_cycle_checks(
    cat: &PathCategory,
    mu: PathId,
    nu: PathId,
) -> Result<GeneralizedCycleChecks, CatError> {
    let by_definition = is_generalized_cycle(cat, mu, nu)?;
    let shifted: Vec<PathId> = min_common_extensions(cat, &[mu, nu])?
        .into_iter()
        .map(|e| crate::cat::left_shift_path(cat, mu, e).unwrap())
        .collect();
    let shifted_vee_exhaustive = is_exhaustive(cat, cat.src(mu), &shifted)?;
    let mut boundary_inclusion = true;
    for x in boundary(cat)? {
        if x.vertex() != cat.src(mu) {
            continue;
        }
        let mx = concat_point(cat, mu, &x)?;
        if !mx.contains(nu) {
            boundary_inclusion = false;
            break;
        }
    }
    Ok(GeneralizedCycleChecks { by_definition, shifted_vee_exhaustive, boundary_inclusion })
}

/// All generalized cycles, each asserted against the lemma's three faces.
pub fn generalized_cycles(cat: &PathCategory) -> Result<Vec<(PathId, PathId)>, CatError> {
    let mut out = Vec::new();
    for mu in cat.morphisms() {
        for nu in cat.morphisms() {
            if mu == nu || cat.src(mu) != cat.src(nu) || cat.rng(mu) != cat.rng(nu) {
                continue;
            }
            let checks = generalized_cycle_checks(cat, mu, nu)?;
            assert_eq!(checks.by_definition, checks.shifted_vee_exhaustive);
            assert_eq!(checks.by_definition, checks.boundary_inclusion);
            if checks.by_definition {
                out.push((mu, nu));
            }
        }
    }
    Ok(out)
}

/// An entrance of `(μ,ν)`: some `τ ∈ s(μ)Λ` with `μ ⊥ ντ`.
pub fn has_entrance(
    cat: &PathCategory,
    mu: PathId,
    nu: PathId,
) -> Result<(bool, Option<PathId>), CatError> {
    for &tau in cat.paths_at(cat.src(nu)).members() {
        let nt = cat.compose(nu, tau).expect("composable");
        if !meets(cat, mu, nt)? {
            return Ok((true, Some(tau)));
        }
    }
    Ok((false, None))
}

/// Every vertex is seen by a generalized cycle having an entrance.
pub fn local_contractivity_hypothesis(cat: &PathCategory) -> Result<bool, CatError> {
    let cycles: Vec<(PathId, PathId)> = generalized_cycles(cat)?
        .into_iter()
        .filter(|&(m, n)| has_entrance(cat, m, n).map(|(b, _)| b).unwrap_or(false))
        .collect();
    for v in cat.vertices() {
        let seen = cycles.iter().any(|&(m, _)| {
            cat.morphisms().any(|p| cat.rng(p) == v && cat.src(p) == cat.rng(m))
        });
        if !seen {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One generalized cycle with its entrance flag.
#[derive(Clone, Debug)]
pub struct CycleEntry {
    pub mu: PathId,
    pub nu: PathId,
    pub has_entrance: bool,
    pub entrance: Option<PathId>,
}

/// The full structural report, with groupoid-side cross-checks.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub aperiodic: bool,
    pub aperiodicity_witness: Option<(PathId, PathId)>,
    pub minimal: bool,
    pub minimality_witness: Option<(PathId, PathId)>,
    pub generalized_cycles: Vec<CycleEntry>,
    pub locally_contractive_hypothesis: bool,
    /// Every criterion agreed with its oracle.
    pub cross_checks_ok: bool,
}

pub fn structure_report(cat: &PathCategory) -> Result<StructureReport, CatError> {
    let (aperiodic, aperiodicity_witness) = is_aperiodic_category(cat)?;
    let (minimal, minimality_witness) = is_minimal(cat)?;
    let cycles = generalized_cycles(cat)?
        .into_iter()
        .map(|(mu, nu)| {
            let (he, entrance) = has_entrance(cat, mu, nu)?;
            Ok(CycleEntry { mu, nu, has_entrance: he, entrance })
        })
        .collect::<Result<Vec<_>, CatError>>()?;
    let lch = local_contractivity_hypothesis(cat)?;

    let g = build_groupoid(cat, true)?;
    let all_trivial =
        g.units.iter().all(|x| g.has_trivial_isotropy_at(cat, x));
    let single_orbit = g.orbits(cat).len() == 1;
    let mut cross_checks_ok = true;
    // Topological freeness ⟺ aperiodicity (finite unit spaces).
    if aperiodic != all_trivial {
        cross_checks_ok = false;
    }
    // Minimality ⟺ single orbit of G|∂Λ.
    if minimal != single_orbit {
        cross_checks_ok = false;
    }
    // Periodicity ⟺ equality on boundary points, for all parallel pairs.
    for a in cat.morphisms() {
        for b in cat.morphisms() {
            if a < b && has_periodicity(cat, a, b)? != has_periodicity_on_boundary(cat, a, b)? {
                cross_checks_ok = false;
            }
        }
    }
    Ok(StructureReport {
        aperiodic,
        aperiodicity_witness,
        minimal,
        minimality_witness,
        generalized_cycles: cycles,
        locally_contractive_hypothesis: lch,
        cross_checks_ok,
    })
}
