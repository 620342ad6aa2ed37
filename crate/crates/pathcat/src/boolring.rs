//! The Boolean rings `𝒜_v` generated by tail sets under shifts: normal forms
//! as disjoint unions of `αΛ \ ⋃ βᵢΛ` cells, ring generation, shift
//! invariance, and the homomorphism-extension procedure.
//!
//! Subsets of `vΛ` are carried as bit masks over the sorted member list of
//! `vΛ`; the carrier is capped at 64 paths, plenty for desk-scale categories.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Mutex, OnceLock};

use crate::cat::{
    is_initial_segment, left_shift, min_common_extensions, tail_set, PathCategory, PathId, PathSet,
};
use crate::error::CatError;

/// The sorted carrier `vΛ` with mask conversions.
#[derive(Clone, Debug)]
pub struct Carrier {
    vertex: PathId,
    pub paths: Vec<PathId>,
}

impl Carrier {
    pub fn new(cat: &PathCategory, v: PathId) -> Result<Self, CatError> {
        cat.check_id(v)?;
        let paths = cat.paths_at(v).members().to_vec();
        if paths.len() > 64 {
            return Err(CatError::CarrierTooLarge(paths.len()));
        }
        Ok(Carrier { vertex: v, paths })
    }

    pub fn vertex(&self) -> PathId {
        self.vertex
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn full(&self) -> u64 {
        if self.paths.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.paths.len()) - 1
        }
    }

    pub fn index_of(&self, p: PathId) -> Option<usize> {
        self.paths.binary_search(&p).ok()
    }

    pub fn mask_of(&self, set: &PathSet) -> u64 {
        self.mask_of_paths(set.members())
    }

    pub fn mask_of_paths(&self, paths: &[PathId]) -> u64 {
        let mut m = 0u64;
        for &p in paths {
            if let Some(i) = self.index_of(p) {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn set_of(&self, mask: u64) -> PathSet {
        let members = self
            .paths
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        PathSet::new(self.vertex, members)
    }

    pub fn tail_mask(&self, cat: &PathCategory, alpha: PathId) -> u64 {
        self.mask_of(&tail_set(cat, alpha).unwrap())
    }
}

/// One `ℰ_v` cell `head·Λ \ ⋃ hole·Λ`, nonempty, holes proper extensions of head.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Cell {
    pub head: PathId,
    pub holes: Vec<PathId>,
}

/// An element of `𝒜_v` in disjoint-union-of-cells normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingSet {
    vertex: PathId,
    cells: Vec<Cell>,
}

impl RingSet {
    pub fn vertex(&self) -> PathId {
        self.vertex
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn empty(v: PathId) -> Self {
        RingSet { vertex: v, cells: Vec::new() }
    }

    /// Canonical decomposition of an arbitrary subset of `vΛ` into disjoint
    /// cells: repeatedly head the least minimal element of what remains and
    /// punch out the minimal excluded extensions.
    pub fn from_paths(cat: &PathCategory, v: PathId, paths: &PathSet) -> Self {
        let mut work: BTreeSet<PathId> = paths.members().iter().copied().collect();
        let mut cells = Vec::new();
        while let Some(&head) = work
            .iter()
            .find(|&&m| !work.iter().any(|&o| o != m && is_initial_segment(cat, o, m)))
        {
            let tail = tail_set(cat, head).unwrap();
            let removed: Vec<PathId> =
                tail.members().iter().copied().filter(|p| !work.contains(p)).collect();
            let holes: Vec<PathId> = removed
                .iter()
                .copied()
                .filter(|&h| !removed.iter().any(|&o| o != h && is_initial_segment(cat, o, h)))
                .collect();
            for &m in tail.members() {
                if !holes.iter().any(|&h| is_initial_segment(cat, h, m)) {
                    work.remove(&m);
                }
            }
            cells.push(Cell { head, holes });
        }
        cells.sort();
        RingSet { vertex: v, cells }
    }

    pub fn denotation(&self, cat: &PathCategory) -> PathSet {
        let mut members = Vec::new();
        for cell in &self.cells {
            let tail = tail_set(cat, cell.head).unwrap();
            for &m in tail.members() {
                if !cell.holes.iter().any(|&h| is_initial_segment(cat, h, m)) {
                    members.push(m);
                }
            }
        }
        PathSet::new(self.vertex, members)
    }

    pub fn display(&self, cat: &PathCategory) -> String {
        if self.cells.is_empty() {
            return "∅".into();
        }
        self.cells
            .iter()
            .map(|c| {
                if c.holes.is_empty() {
                    format!("{}Λ", cat.name(c.head))
                } else {
                    format!(
                        "{}Λ\\({})",
                        cat.name(c.head),
                        c.holes
                            .iter()
                            .map(|&h| format!("{}Λ", cat.name(h)))
                            .collect::<Vec<_>>()
                            .join("∪")
                    )
                }
            })
            .collect::<Vec<_>>()
            .join(" ⊔ ")
    }
}

/// A set expression over tail sets, the input language of [`normalize`].
#[derive(Clone, Debug)]
pub enum SetExpr {
    Tail(PathId),
    Union(Box<SetExpr>, Box<SetExpr>),
    Inter(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
}

impl SetExpr {
    fn eval(&self, cat: &PathCategory, carrier: &Carrier) -> Result<u64, CatError> {
        Ok(match self {
            SetExpr::Tail(a) => {
                if cat.rng(*a) != carrier.vertex() {
                    return Err(CatError::MixedBase);
                }
                carrier.tail_mask(cat, *a)
            }
            SetExpr::Union(l, r) => l.eval(cat, carrier)? | r.eval(cat, carrier)?,
            SetExpr::Inter(l, r) => l.eval(cat, carrier)? & r.eval(cat, carrier)?,
            SetExpr::Diff(l, r) => l.eval(cat, carrier)? & !r.eval(cat, carrier)?,
        })
    }
}

/// Evaluate an expression over tail sets based at `v` and return its cell
/// normal form. The denotation is checked against direct evaluation.
pub fn normalize(cat: &PathCategory, v: PathId, expr: &SetExpr) -> Result<RingSet, CatError> {
    let carrier = Carrier::new(cat, v)?;
    let mask = expr.eval(cat, &carrier)?;
    let set = carrier.set_of(mask);
    let rs = RingSet::from_paths(cat, v, &set);
    debug_assert_eq!(rs.denotation(cat), set);
    Ok(rs)
}

fn ring_cache() -> &'static Mutex<BTreeMap<(u64, u32), Vec<u64>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn cat_key(cat: &PathCategory) -> u64 {
    cat.uid()
}

/// All elements of `𝒜_v` as masks, derived from the atoms of the partition
/// that the tail-set generators induce on `vΛ`.
pub fn ring_masks(cat: &PathCategory, v: PathId) -> Result<Vec<u64>, CatError> {
    if let Some(hit) = ring_cache().lock().unwrap().get(&(cat_key(cat), v.0)) {
        return Ok(hit.clone());
    }
    let carrier = Carrier::new(cat, v)?;
    let generators: Vec<u64> = carrier.paths.iter().map(|&a| carrier.tail_mask(cat, a)).collect();
    let mut atoms: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for i in 0..carrier.len() {
        let sig: Vec<bool> = generators.iter().map(|g| g & (1 << i) != 0).collect();
        *atoms.entry(sig).or_insert(0) |= 1 << i;
    }
    let atoms: Vec<u64> = atoms.into_values().collect();
    let mut masks = Vec::with_capacity(1 << atoms.len());
    for choice in 0u64..(1u64 << atoms.len()) {
        let mut m = 0u64;
        for (i, &a) in atoms.iter().enumerate() {
            if choice & (1 << i) != 0 {
                m |= a;
            }
        }
        masks.push(m);
    }
    masks.sort_unstable();
    masks.dedup();
    ring_cache().lock().unwrap().insert((cat_key(cat), v.0), masks.clone());
    Ok(masks)
}

/// The atoms of `𝒜_v` as path sets.
pub fn atoms(cat: &PathCategory, v: PathId) -> Result<Vec<PathSet>, CatError> {
    let carrier = Carrier::new(cat, v)?;
    let masks = ring_masks(cat, v)?;
    let out: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| m != 0 && !masks.iter().any(|&o| o != 0 && o != m && (o & m) == o))
        .collect();
    Ok(out.into_iter().map(|m| carrier.set_of(m)).collect())
}

/// All of `𝒜_v` in cell normal form.
pub fn generate_ring(cat: &PathCategory, v: PathId) -> Result<Vec<RingSet>, CatError> {
    let carrier = Carrier::new(cat, v)?;
    let masks = ring_masks(cat, v)?;
    Ok(masks.into_iter().map(|m| RingSet::from_paths(cat, v, &carrier.set_of(m))).collect())
}

/// Independent route to `𝒜_v`: saturate the generators under pairwise
/// intersection, union, and difference until the collection is closed.
pub fn ring_closure_by_saturation(cat: &PathCategory, v: PathId) -> Result<Vec<u64>, CatError> {
    let carrier = Carrier::new(cat, v)?;
    let mut sets: BTreeSet<u64> = carrier.paths.iter().map(|&a| carrier.tail_mask(cat, a)).collect();
    sets.insert(0);
    loop {
        let snapshot: Vec<u64> = sets.iter().copied().collect();
        let before = sets.len();
        for &a in &snapshot {
            for &b in &snapshot {
                sets.insert(a & b);
                sets.insert(a | b);
                sets.insert(a & !b);
            }
        }
        if sets.len() == before {
            break;
        }
    }
    Ok(sets.into_iter().collect())
}

/// One failed identity from the shift-invariance scan.
#[derive(Clone, Debug)]
pub struct ShiftInvarianceFailure {
    pub alpha: PathId,
    pub detail: String,
}

/// Verify `σ^α 𝒜_{r(α)} = 𝒜_{s(α)}` and
/// `α𝒜_{s(α)} = { E ∩ αΛ : E ∈ 𝒜_{r(α)} }` for every morphism.
pub fn check_shift_invariance(cat: &PathCategory) -> Result<Vec<ShiftInvarianceFailure>, CatError> {
    let mut failures = Vec::new();
    for alpha in cat.morphisms() {
        let r = cat.rng(alpha);
        let s = cat.src(alpha);
        let ring_r = ring_masks(cat, r)?;
        let ring_s = ring_masks(cat, s)?;
        let car_r = Carrier::new(cat, r)?;
        let car_s = Carrier::new(cat, s)?;
        let tail = car_r.tail_mask(cat, alpha);

        let mut shifted: BTreeSet<u64> = BTreeSet::new();
        for &e in &ring_r {
            let sh = left_shift(cat, alpha, &car_r.set_of(e))?;
            shifted.insert(car_s.mask_of(&sh));
        }
        let expect: BTreeSet<u64> = ring_s.iter().copied().collect();
        if shifted != expect {
            failures.push(ShiftInvarianceFailure {
                alpha,
                detail: format!("σ^{} 𝒜 differs from the source ring", cat.name(alpha)),
            });
        }

        let mut concat: BTreeSet<u64> = BTreeSet::new();
        for &e in &ring_s {
            let mut mask = 0u64;
            for &b in car_s.set_of(e).members() {
                if let Some(ab) = cat.compose(alpha, b) {
                    mask |= 1 << car_r.index_of(ab).unwrap();
                }
            }
            concat.insert(mask);
        }
        let cuts: BTreeSet<u64> = ring_r.iter().map(|&e| e & tail).collect();
        if concat != cuts {
            failures.push(ShiftInvarianceFailure {
                alpha,
                detail: format!("{}·𝒜 differs from the cut-down range ring", cat.name(alpha)),
            });
        }
    }
    Ok(failures)
}

/// An explicit finite ring of subsets of `{0, .., carrier_size-1}`, closed
/// under intersection, union, and difference.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    carrier_size: usize,
    elements: BTreeSet<u64>,
}

impl FiniteRing {
    pub fn new(carrier_size: usize, mut elements: BTreeSet<u64>) -> Result<Self, CatError> {
        if carrier_size > 64 {
            return Err(CatError::CarrierTooLarge(carrier_size));
        }
        elements.insert(0);
        let all: Vec<u64> = elements.iter().copied().collect();
        for &a in &all {
            for &b in &all {
                for c in [a & b, a | b, a & !b] {
                    if !elements.contains(&c) {
                        return Err(CatError::NotARing(format!("missing element {c:#b}")));
                    }
                }
            }
        }
        Ok(FiniteRing { carrier_size, elements })
    }

    /// The full power set of an `n`-element carrier.
    pub fn power_set(n: usize) -> Result<Self, CatError> {
        if n > 16 {
            return Err(CatError::CarrierTooLarge(n));
        }
        let elements = (0u64..(1u64 << n)).collect();
        Ok(FiniteRing { carrier_size: n, elements })
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn contains(&self, e: u64) -> bool {
        self.elements.contains(&e)
    }
}

/// A total assignment `αΛ ↦` target element on the generators `ℰ^(0)_v`.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub vertex: PathId,
    pub values: BTreeMap<PathId, u64>,
}

impl Assignment {
    fn get(&self, cat: &PathCategory, alpha: PathId) -> Result<u64, CatError> {
        self.values
            .get(&alpha)
            .copied()
            .ok_or_else(|| CatError::PartialAssignment(cat.name(alpha).to_string()))
    }
}

/// A Boolean ring homomorphism `𝒜_v → ℛ` determined by its generator values.
#[derive(Clone, Debug)]
pub struct RingHom {
    pub vertex: PathId,
    pub target: FiniteRing,
    assignment: Assignment,
}

impl RingHom {
    /// Evaluate on an arbitrary ring element via its cell decomposition:
    /// cells map to `μ(headΛ) \ ⋃ μ(holeΛ)` and disjoint unions to unions.
    pub fn eval(&self, cat: &PathCategory, set: &RingSet) -> Result<u64, CatError> {
        let mut out = 0u64;
        for cell in set.cells() {
            let mut m = self.assignment.get(cat, cell.head)?;
            for &h in &cell.holes {
                m &= !self.assignment.get(cat, h)?;
            }
            out |= m;
        }
        Ok(out)
    }

    pub fn eval_paths(&self, cat: &PathCategory, set: &PathSet) -> Result<u64, CatError> {
        self.eval(cat, &RingSet::from_paths(cat, self.vertex, set))
    }
}

/// Outcome of the finitely-aligned extension theorem: either the unique
/// extension, or the pair witnessing that condition (3) fails.
#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    Extended(RingHom),
    Rejected { alpha: PathId, beta: PathId },
}

/// Extend a generator assignment to all of `𝒜_v` when
/// `μ(αΛ) ∩ μ(βΛ) = ⋃_{ε ∈ α∨β} μ(εΛ)` holds for all pairs; otherwise report
/// the violating pair.
pub fn extend_homomorphism(
    cat: &PathCategory,
    v: PathId,
    target: FiniteRing,
    assignment: Assignment,
) -> Result<ExtendOutcome, CatError> {
    let carrier = Carrier::new(cat, v)?;
    for &a in &carrier.paths {
        let m = assignment.get(cat, a)?;
        if !target.contains(m) {
            return Err(CatError::NotARing(format!(
                "value of {}Λ is not in the target",
                cat.name(a)
            )));
        }
    }
    for &a in &carrier.paths {
        for &b in &carrier.paths {
            if a > b {
                continue;
            }
            let lhs = assignment.get(cat, a)? & assignment.get(cat, b)?;
            let mut rhs = 0u64;
            for e in min_common_extensions(cat, &[a, b])? {
                rhs |= assignment.get(cat, e)?;
            }
            if lhs != rhs {
                return Ok(ExtendOutcome::Rejected { alpha: a, beta: b });
            }
        }
    }
    Ok(ExtendOutcome::Extended(RingHom { vertex: v, target, assignment }))
}

/// The zigzag sets `𝒟^(0)_v` for every vertex: the closure of the single-pair
/// domains under pairwise intersection and images of single-pair maps.
pub fn zigzag_set_masks(cat: &PathCategory) -> Result<BTreeMap<PathId, BTreeSet<u64>>, CatError> {
    use crate::zigzag::{domain, eval as zeval, Zigzag};
    let carriers: BTreeMap<PathId, Carrier> =
        cat.vertices().map(|v| (v, Carrier::new(cat, v).unwrap())).collect();
    let mut fam: BTreeMap<PathId, BTreeSet<u64>> =
        cat.vertices().map(|v| (v, BTreeSet::new())).collect();
    let mut pairs = Vec::new();
    for a in cat.morphisms() {
        for b in cat.morphisms() {
            if cat.rng(a) == cat.rng(b) {
                let z = Zigzag::new(cat, vec![(a, b)]).unwrap();
                let dom = domain(cat, &z);
                let v = z.source(cat);
                let mask = carriers[&v].mask_of(&dom);
                if mask != 0 {
                    fam.get_mut(&v).unwrap().insert(mask);
                }
                pairs.push(z);
            }
        }
    }
    loop {
        let mut grew = false;
        for v in cat.vertices() {
            let snapshot: Vec<u64> = fam[&v].iter().copied().collect();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i + 1..] {
                    let c = a & b;
                    if c != 0 && fam.get_mut(&v).unwrap().insert(c) {
                        grew = true;
                    }
                }
            }
        }
        for z in &pairs {
            let sv = z.source(cat);
            let rv = z.range(cat);
            let snapshot: Vec<u64> = fam[&sv].iter().copied().collect();
            for m in snapshot {
                let set = carriers[&sv].set_of(m);
                let mut image = Vec::new();
                for &x in set.members() {
                    if let Some(y) = zeval(cat, z, x)? {
                        image.push(y);
                    }
                }
                if image.is_empty() {
                    continue;
                }
                let mask = carriers[&rv].mask_of_paths(&image);
                if fam.get_mut(&rv).unwrap().insert(mask) {
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(fam);
        }
    }
}

/// The hypotheses of the general extension theorem, checked directly on the
/// zigzag sets `𝒟^(0)_v` for the map induced by a tail-set assignment. `μ` is
/// evaluated on a zigzag set through its minimal tail cover; condition (1) is
/// intersection-preservation, and condition (2) reduces to stability of the
/// value under adjoining any tail lying inside the set (every tail cover of
/// an upward-closed set consists of its minimal elements plus such tails).
pub fn general_conditions_hold(
    cat: &PathCategory,
    v: PathId,
    assignment: &Assignment,
) -> Result<bool, CatError> {
    let carrier = Carrier::new(cat, v)?;
    let dsets: Vec<u64> =
        zigzag_set_masks(cat)?.remove(&v).unwrap_or_default().into_iter().collect();
    let value = |mask: u64| -> Result<u64, CatError> {
        let set = carrier.set_of(mask);
        let minimal: Vec<PathId> = set
            .members()
            .iter()
            .copied()
            .filter(|&m| !set.members().iter().any(|&o| o != m && is_initial_segment(cat, o, m)))
            .collect();
        let mut out = 0;
        for m in minimal {
            out |= assignment.get(cat, m)?;
        }
        Ok(out)
    };
    for &e in &dsets {
        let mu_e = value(e)?;
        for &beta in carrier.set_of(e).members() {
            if assignment.get(cat, beta)? & !mu_e != 0 {
                return Ok(false);
            }
        }
        for &f in &dsets {
            if value(e & f)? != mu_e & value(f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
