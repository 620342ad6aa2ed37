//! Finite categories of paths: composition tables, axiom validation, shifts,
//! extension predicates, and minimal common extensions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::CatError;

/// Interned token for a morphism of a [`PathCategory`]. Ids are dense indices;
/// vertices occupy the low range `0..vertex_count`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PathId(pub u32);

impl PathId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite subset of `vΛ`: paths sharing the range vertex `base`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PathSet {
    base: PathId,
    members: Vec<PathId>,
}

impl PathSet {
    pub fn new(base: PathId, mut members: Vec<PathId>) -> Self {
        members.sort_unstable();
        members.dedup();
        PathSet { base, members }
    }

    pub fn empty(base: PathId) -> Self {
        PathSet { base, members: Vec::new() }
    }

    pub fn base_vertex(&self) -> PathId {
        self.base
    }

    pub fn members(&self) -> &[PathId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: PathId) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn intersect(&self, other: &PathSet) -> PathSet {
        let members = self.members.iter().copied().filter(|p| other.contains(*p)).collect();
        PathSet { base: self.base, members }
    }

    pub fn union(&self, other: &PathSet) -> PathSet {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        PathSet::new(self.base, members)
    }

    pub fn difference(&self, other: &PathSet) -> PathSet {
        let members = self.members.iter().copied().filter(|p| !other.contains(*p)).collect();
        PathSet { base: self.base, members }
    }
}

/// One axiom violation found by [`PathCategory::validate`], with a concrete witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// No vertices at all.
    Empty,
    /// Composition defined although `src(a) != rng(b)`.
    ComposedOffDomain { a: PathId, b: PathId },
    /// Composition undefined although `src(a) == rng(b)`.
    UndefinedComposition { a: PathId, b: PathId },
    /// `rng(ab) != rng(a)` or `src(ab) != src(b)`.
    EndpointMismatch { a: PathId, b: PathId, ab: PathId },
    /// A vertex fails to act as an identity.
    IdentityLaw { v: PathId, a: PathId, got: PathId },
    /// `(ab)c != a(bc)`.
    Associativity { a: PathId, b: PathId, c: PathId },
    /// `ab == ac` with `b != c`.
    LeftCancellation { a: PathId, b: PathId, c: PathId },
    /// `ba == ca` with `b != c`.
    RightCancellation { a: PathId, b: PathId, c: PathId },
    /// `ab == src(b)` without `a`, `b` being that vertex.
    NoInverses { a: PathId, b: PathId },
    /// Non-identity loop `a` with `src(a) == rng(a)`; impossible in a finite
    /// category of paths, reported alongside the no-inverses axiom.
    Acyclicity { a: PathId },
}

impl Violation {
    /// Short stable tag used by reports and tests.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Empty => "empty",
            Violation::ComposedOffDomain { .. } => "composed-off-domain",
            Violation::UndefinedComposition { .. } => "undefined-composition",
            Violation::EndpointMismatch { .. } => "endpoint-mismatch",
            Violation::IdentityLaw { .. } => "identity-law",
            Violation::Associativity { .. } => "associativity",
            Violation::LeftCancellation { .. } => "left-cancellation",
            Violation::RightCancellation { .. } => "right-cancellation",
            Violation::NoInverses { .. } => "no-inverses",
            Violation::Acyclicity { .. } => "acyclicity",
        }
    }
}

/// Result of scanning every axiom of a category of paths. Empty report means
/// the table is a category of paths.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_kind(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }

    pub fn render(&self, cat: &PathCategory) -> String {
        let mut out = String::new();
        for v in &self.violations {
            let n = |p: PathId| cat.name(p).to_string();
            let line = match v {
                Violation::Empty => "empty: category has no vertices".to_string(),
                Violation::ComposedOffDomain { a, b } => {
                    format!("composed-off-domain: ({}, {}) defined but src/rng mismatch", n(*a), n(*b))
                }
                Violation::UndefinedComposition { a, b } => {
                    format!("undefined-composition: ({}, {}) composable but missing", n(*a), n(*b))
                }
                Violation::EndpointMismatch { a, b, ab } => {
                    format!("endpoint-mismatch: {}∘{} = {} has wrong endpoints", n(*a), n(*b), n(*ab))
                }
                Violation::IdentityLaw { v, a, got } => {
                    format!("identity-law: vertex {} on {} gives {}", n(*v), n(*a), n(*got))
                }
                Violation::Associativity { a, b, c } => {
                    format!("associativity: ({} {} {})", n(*a), n(*b), n(*c))
                }
                Violation::LeftCancellation { a, b, c } => {
                    format!("left-cancellation: {}∘{} = {}∘{} but {} != {}", n(*a), n(*b), n(*a), n(*c), n(*b), n(*c))
                }
                Violation::RightCancellation { a, b, c } => {
                    format!("right-cancellation: {}∘{} = {}∘{} but {} != {}", n(*b), n(*a), n(*c), n(*a), n(*b), n(*c))
                }
                Violation::NoInverses { a, b } => {
                    format!("no-inverses: {}∘{} = src({})", n(*a), n(*b), n(*b))
                }
                Violation::Acyclicity { a } => {
                    format!("acyclicity: non-identity loop {}", n(*a))
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// A finite category given by an explicit composition table. Vertices are the
/// identity morphisms and come first in the id order. `compose(a, b)` is the
/// composite `ab`, defined exactly when `src(a) == rng(b)` (paths compose in
/// diagrammatic order `r ← s`).
#[derive(Clone, Debug)]
pub struct PathCategory {
    uid: u64,
    names: Vec<String>,
    vertex_count: u32,
    src: Vec<PathId>,
    rng: Vec<PathId>,
    table: Vec<Option<PathId>>,
    /// `ext[a·n + x]` ⟺ `x ∈ aΛ`; built once on first use.
    ext: std::sync::OnceLock<Vec<bool>>,
}

fn next_uid() -> u64 {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    COUNTER.fetch_add(1, Ordering::Relaxed)
}

impl PathCategory {
    pub fn from_table(
        names: Vec<String>,
        vertex_count: u32,
        src: Vec<PathId>,
        rng: Vec<PathId>,
        entries: &[(PathId, PathId, PathId)],
    ) -> Result<Self, CatError> {
        let n = names.len();
        if (vertex_count as usize) > n {
            return Err(CatError::MalformedTable("more vertices than morphisms".into()));
        }
        if src.len() != n || rng.len() != n {
            return Err(CatError::MalformedTable("src/rng must cover every morphism".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, name) in names.iter().enumerate() {
            if !seen.insert(name.clone()) {
                return Err(CatError::MalformedTable(format!("duplicate morphism name {name}")));
            }
            let check = |p: PathId| (p.index() < n).then_some(()).ok_or_else(|| {
                CatError::MalformedTable(format!("morphism {} has out-of-range endpoint", names[i]))
            });
            check(src[i])?;
            check(rng[i])?;
            if src[i].index() >= vertex_count as usize || rng[i].index() >= vertex_count as usize {
                return Err(CatError::MalformedTable(format!("endpoints of {} are not vertices", names[i])));
            }
        }
        for v in 0..vertex_count as usize {
            if src[v] != PathId(v as u32) || rng[v] != PathId(v as u32) {
                return Err(CatError::MalformedTable(format!("vertex {} must have itself as src and rng", names[v])));
            }
        }
        let mut table: Vec<Option<PathId>> = vec![None; n * n];
        for &(a, b, ab) in entries {
            if a.index() >= n || b.index() >= n || ab.index() >= n {
                return Err(CatError::MalformedTable("composition entry out of range".into()));
            }
            let slot = &mut table[a.index() * n + b.index()];
            if let Some(prev) = *slot {
                if prev != ab {
                    return Err(CatError::MalformedTable(format!(
                        "conflicting entries for ({}, {})",
                        names[a.index()],
                        names[b.index()]
                    )));
                }
            }
            *slot = Some(ab);
        }
        // Identity compositions are implied; fill any the caller omitted.
        let mut cat = PathCategory {
            uid: next_uid(),
            names,
            vertex_count,
            src,
            rng,
            table,
            ext: std::sync::OnceLock::new(),
        };
        for m in 0..n {
            let m = PathId(m as u32);
            let (s, r) = (cat.src[m.index()], cat.rng[m.index()]);
            let n_ = n;
            if cat.table[r.index() * n_ + m.index()].is_none() {
                cat.table[r.index() * n_ + m.index()] = Some(m);
            }
            if cat.table[m.index() * n_ + s.index()].is_none() {
                cat.table[m.index() * n_ + s.index()] = Some(m);
            }
        }
        Ok(cat)
    }

    /// A process-unique token identifying this table (shared by clones).
    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count as usize
    }

    pub fn is_vertex(&self, p: PathId) -> bool {
        p.index() < self.vertex_count as usize
    }

    pub fn name(&self, p: PathId) -> &str {
        &self.names[p.index()]
    }

    pub fn by_name(&self, name: &str) -> Option<PathId> {
        self.names.iter().position(|n| n == name).map(|i| PathId(i as u32))
    }

    pub fn src(&self, p: PathId) -> PathId {
        self.src[p.index()]
    }

    pub fn rng(&self, p: PathId) -> PathId {
        self.rng[p.index()]
    }

    pub fn compose(&self, a: PathId, b: PathId) -> Option<PathId> {
        self.table[a.index() * self.names.len() + b.index()]
    }

    pub fn morphisms(&self) -> impl Iterator<Item = PathId> + '_ {
        (0..self.names.len() as u32).map(PathId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = PathId> + '_ {
        (0..self.vertex_count).map(PathId)
    }

    pub fn check_id(&self, p: PathId) -> Result<(), CatError> {
        if p.index() < self.names.len() {
            Ok(())
        } else {
            Err(CatError::UnknownPath(format!("#{}", p.0)))
        }
    }

    /// All of `vΛ`: morphisms with range `v`.
    pub fn paths_at(&self, v: PathId) -> PathSet {
        let members = self.morphisms().filter(|&m| self.rng(m) == v).collect();
        PathSet { base: v, members }
    }

    /// All of `Λv`: morphisms with source `v`.
    pub fn paths_from(&self, v: PathId) -> Vec<PathId> {
        self.morphisms().filter(|&m| self.src(m) == v).collect()
    }

    fn ext_matrix(&self) -> &[bool] {
        self.ext.get_or_init(|| {
            let n = self.names.len();
            let mut ext = vec![false; n * n];
            for a in 0..n {
                for c in 0..n {
                    if let Some(ac) = self.table[a * n + c] {
                        ext[a * n + ac.index()] = true;
                    }
                }
            }
            ext
        })
    }

    /// `x ∈ aΛ`: `x` extends `a`.
    pub fn in_tail(&self, a: PathId, x: PathId) -> bool {
        self.ext_matrix()[a.index() * self.names.len() + x.index()]
    }

    /// Compose a word given in diagrammatic order (`r ← s`), e.g. `[α, γ]` is `αγ`.
    pub fn compose_word(&self, word: &[PathId]) -> Option<PathId> {
        let mut iter = word.iter();
        let mut acc = *iter.next()?;
        for &next in iter {
            acc = self.compose(acc, next)?;
        }
        Some(acc)
    }

    /// Scan every axiom of a category of paths over the full table.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.names.len();
        if self.vertex_count == 0 {
            report.violations.push(Violation::Empty);
            return report;
        }
        let ids: Vec<PathId> = self.morphisms().collect();
        // Domain exactness and endpoint laws.
        for &a in &ids {
            for &b in &ids {
                let entry = self.table[a.index() * n + b.index()];
                let composable = self.src(a) == self.rng(b);
                match (composable, entry) {
                    (false, Some(_)) => report.violations.push(Violation::ComposedOffDomain { a, b }),
                    (true, None) => report.violations.push(Violation::UndefinedComposition { a, b }),
                    (true, Some(ab)) => {
                        if self.rng(ab) != self.rng(a) || self.src(ab) != self.src(b) {
                            report.violations.push(Violation::EndpointMismatch { a, b, ab });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        // Identities.
        for v in self.vertices() {
            for &a in &ids {
                if self.rng(a) == v {
                    if let Some(got) = self.compose(v, a) {
                        if got != a {
                            report.violations.push(Violation::IdentityLaw { v, a, got });
                        }
                    }
                }
                if self.src(a) == v {
                    if let Some(got) = self.compose(a, v) {
                        if got != a {
                            report.violations.push(Violation::IdentityLaw { v, a, got });
                        }
                    }
                }
            }
        }
        // Associativity over all composable triples.
        for &a in &ids {
            for &b in &ids {
                if self.src(a) != self.rng(b) {
                    continue;
                }
                for &c in &ids {
                    if self.src(b) != self.rng(c) {
                        continue;
                    }
                    let left = self.compose(a, b).and_then(|ab| self.compose(ab, c));
                    let right = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                    if let (Some(l), Some(r)) = (left, right) {
                        if l != r {
                            report.violations.push(Violation::Associativity { a, b, c });
                        }
                    }
                }
            }
        }
        // Cancellation.
        for &a in &ids {
            for &b in &ids {
                for &c in &ids {
                    if b >= c {
                        continue;
                    }
                    if let (Some(ab), Some(ac)) = (self.compose(a, b), self.compose(a, c)) {
                        if ab == ac {
                            report.violations.push(Violation::LeftCancellation { a, b, c });
                        }
                    }
                    if let (Some(ba), Some(ca)) = (self.compose(b, a), self.compose(c, a)) {
                        if ba == ca {
                            report.violations.push(Violation::RightCancellation { a: a, b, c });
                        }
                    }
                }
            }
        }
        // No inverses.
        for &a in &ids {
            for &b in &ids {
                if let Some(ab) = self.compose(a, b) {
                    if ab == self.src(b) && !(self.is_vertex(a) && self.is_vertex(b)) {
                        report.violations.push(Violation::NoInverses { a, b });
                    }
                }
            }
        }
        // Acyclicity, a consequence of the axioms on finite tables.
        for &a in &ids {
            if !self.is_vertex(a) && self.src(a) == self.rng(a) {
                report.violations.push(Violation::Acyclicity { a });
            }
        }
        report
    }
}

impl fmt::Display for PathCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "category with {} vertices, {} morphisms", self.vertex_count, self.names.len())
    }
}

/// Convenience constructor for hand-built tables and the loaders.
#[derive(Default)]
pub struct CategoryBuilder {
    names: Vec<String>,
    vertex_count: u32,
    src: Vec<PathId>,
    rng: Vec<PathId>,
    entries: Vec<(PathId, PathId, PathId)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str) -> PathId {
        assert_eq!(self.names.len() as u32, self.vertex_count, "vertices must be added before arrows");
        let id = PathId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.src.push(id);
        self.rng.push(id);
        self.vertex_count += 1;
        id
    }

    /// Add a non-identity morphism `name : src → rng` (so `rng(name) = rng`).
    pub fn arrow(&mut self, name: &str, src: PathId, rng: PathId) -> PathId {
        let id = PathId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.src.push(src);
        self.rng.push(rng);
        id
    }

    pub fn compose(&mut self, a: PathId, b: PathId, ab: PathId) -> &mut Self {
        self.entries.push((a, b, ab));
        self
    }

    pub fn build(self) -> Result<PathCategory, CatError> {
        PathCategory::from_table(self.names, self.vertex_count, self.src, self.rng, &self.entries)
    }
}

/// The set of initial segments `[α] = { μ : α ∈ μΛ }`, based at `rng(α)`.
pub fn initial_segments(cat: &PathCategory, alpha: PathId) -> Result<PathSet, CatError> {
    cat.check_id(alpha)?;
    let members = cat.morphisms().filter(|&m| cat.in_tail(m, alpha)).collect();
    Ok(PathSet::new(cat.rng(alpha), members))
}

/// `α ∈ [β]`, i.e. `β` extends `α`.
pub fn is_initial_segment(cat: &PathCategory, alpha: PathId, beta: PathId) -> bool {
    cat.in_tail(alpha, beta)
}

/// The tail set `αΛ`, based at `rng(α)`.
pub fn tail_set(cat: &PathCategory, alpha: PathId) -> Result<PathSet, CatError> {
    cat.check_id(alpha)?;
    let members = cat.morphisms().filter(|&x| cat.in_tail(alpha, x)).collect();
    Ok(PathSet::new(cat.rng(alpha), members))
}

/// `σ^α(E ∩ αΛ) = { β : αβ ∈ E }`, based at `src(α)`.
pub fn left_shift(cat: &PathCategory, alpha: PathId, set: &PathSet) -> Result<PathSet, CatError> {
    cat.check_id(alpha)?;
    if set.base_vertex() != cat.rng(alpha) {
        return Err(CatError::VertexMismatch {
            expected: cat.name(cat.rng(alpha)).to_string(),
            got: cat.name(set.base_vertex()).to_string(),
        });
    }
    let members = cat
        .morphisms()
        .filter(|&b| cat.rng(b) == cat.src(alpha))
        .filter(|&b| match cat.compose(alpha, b) {
            Some(ab) => set.contains(ab),
            None => false,
        })
        .collect();
    Ok(PathSet::new(cat.src(alpha), members))
}

/// `σ^α(β)` for a single path `β ∈ αΛ`.
pub fn left_shift_path(cat: &PathCategory, alpha: PathId, beta: PathId) -> Option<PathId> {
    cat.morphisms().find(|&c| cat.compose(alpha, c) == Some(beta))
}

/// `α ⋔ β`: the tail sets intersect.
pub fn meets(cat: &PathCategory, alpha: PathId, beta: PathId) -> Result<bool, CatError> {
    cat.check_id(alpha)?;
    cat.check_id(beta)?;
    if cat.rng(alpha) != cat.rng(beta) {
        return Ok(false);
    }
    Ok(cat.morphisms().any(|x| cat.in_tail(alpha, x) && cat.in_tail(beta, x)))
}

pub fn disjoint(cat: &PathCategory, alpha: PathId, beta: PathId) -> Result<bool, CatError> {
    meets(cat, alpha, beta).map(|m| !m)
}

/// `∨F`: the minimal elements of `⋂_{α∈F} αΛ` under the initial-segment order.
pub fn min_common_extensions(cat: &PathCategory, family: &[PathId]) -> Result<Vec<PathId>, CatError> {
    if family.is_empty() {
        return Err(CatError::EmptyFamily);
    }
    for &a in family {
        cat.check_id(a)?;
    }
    let base = cat.rng(family[0]);
    for &a in family {
        if cat.rng(a) != base {
            return Err(CatError::VertexMismatch {
                expected: cat.name(base).to_string(),
                got: cat.name(cat.rng(a)).to_string(),
            });
        }
    }
    let mut common = tail_set(cat, family[0])?;
    for &a in &family[1..] {
        common = common.intersect(&tail_set(cat, a)?);
    }
    let minimal = common
        .members()
        .iter()
        .copied()
        .filter(|&m| {
            common
                .members()
                .iter()
                .all(|&other| other == m || !is_initial_segment(cat, other, m))
        })
        .collect();
    Ok(minimal)
}

/// Outcome of the pairwise finite-alignment scan.
#[derive(Clone, Debug)]
pub struct AlignmentReport {
    pub finitely_aligned: bool,
    /// A pair whose minimal common extensions fail to recover the
    /// intersection of tail sets, if any.
    pub witness: Option<(PathId, PathId)>,
}

/// Verify `αΛ ∩ βΛ = ⋃_{ε ∈ α∨β} εΛ` for every pair. Always true on a valid
/// finite category; the scan reports any internal inconsistency.
pub fn check_finitely_aligned(cat: &PathCategory) -> AlignmentReport {
    for a in cat.morphisms() {
        for b in cat.morphisms() {
            if a > b || cat.rng(a) != cat.rng(b) {
                continue;
            }
            let inter = tail_set(cat, a).unwrap().intersect(&tail_set(cat, b).unwrap());
            let vee = min_common_extensions(cat, &[a, b]).unwrap();
            let mut union = PathSet::empty(cat.rng(a));
            for &e in &vee {
                union = union.union(&tail_set(cat, e).unwrap());
            }
            if inter != union {
                return AlignmentReport { finitely_aligned: false, witness: Some((a, b)) };
            }
        }
    }
    AlignmentReport { finitely_aligned: true, witness: None }
}
