//! Generator-and-relation presentations, the amalgamation of categories of
//! paths along a vertex equivalence, normal-form rewriting, truncated ball
//! enumeration by bounded congruence closure, and degree-functor sums.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::cat::{
    is_initial_segment, meets, min_common_extensions, CategoryBuilder, PathCategory, PathId,
};
use crate::degree::DegreeFunctor;
use crate::error::CatError;

/// One building block of an amalgamation: an explicit finite category of
/// paths, or a free quiver (whose path category may be infinite).
#[derive(Clone, Debug)]
pub enum Component {
    Explicit(PathCategory),
    Free { vertices: Vec<String>, arrows: Vec<FreeArrow> },
}

#[derive(Clone, Debug)]
pub struct FreeArrow {
    pub name: String,
    pub src: String,
    pub rng: String,
}

/// An amalgamation input: components, a vertex equivalence given by glue
/// pairs, and optional extra relations (words over generator names, applied
/// by bounded congruence closure).
#[derive(Clone, Debug)]
pub struct Presentation {
    pub components: Vec<Component>,
    pub glue: Vec<(String, String)>,
    pub extra_relations: Vec<(Vec<String>, Vec<String>)>,
}

/// A generator of the glued quiver: a non-identity morphism of an explicit
/// component, or an arrow of a free component.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub comp: usize,
    pub src_class: u32,
    pub rng_class: u32,
    origin: Origin,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Origin {
    Morph(PathId),
    Arrow(usize),
}

/// The name-resolved, vertex-glued view of a presentation.
#[derive(Clone, Debug)]
pub struct Glued {
    pub class_names: Vec<String>,
    pub generators: Vec<Generator>,
    gen_by_name: BTreeMap<String, usize>,
    class_by_vertex: BTreeMap<String, u32>,
    /// Component composition facts plus the extra relations, as generator words.
    relations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Glued {
    pub fn class_of_vertex(&self, name: &str) -> Option<u32> {
        self.class_by_vertex.get(name).copied()
    }

    pub fn generator_by_name(&self, name: &str) -> Option<usize> {
        self.gen_by_name.get(name).copied()
    }

    fn chainable(&self, word: &[usize]) -> bool {
        word.windows(2).all(|w| self.generators[w[0]].src_class == self.generators[w[1]].rng_class)
    }

    fn word_rng(&self, word: &[usize]) -> u32 {
        self.generators[word[0]].rng_class
    }

    fn word_src(&self, word: &[usize]) -> u32 {
        self.generators[*word.last().unwrap()].src_class
    }

    pub fn display_word(&self, word: &[usize]) -> String {
        word.iter().map(|&g| self.generators[g].name.as_str()).collect::<Vec<_>>().join(".")
    }
}

fn find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find_root(parent, a), find_root(parent, b));
    if ra != rb {
        let (hi, lo) = (ra.max(rb), ra.min(rb));
        parent[hi] = lo;
    }
}

impl Presentation {
    /// A presentation of a single category from a quiver plus relations.
    pub fn single(
        vertices: Vec<String>,
        arrows: Vec<FreeArrow>,
        relations: Vec<(Vec<String>, Vec<String>)>,
    ) -> Presentation {
        Presentation {
            components: vec![Component::Free { vertices, arrows }],
            glue: Vec::new(),
            extra_relations: relations,
        }
    }

    /// Resolve names, glue vertices, and collect relations. Vertex and
    /// generator names must be globally unique across components.
    pub fn glued(&self) -> Result<Glued, CatError> {
        let mut seen_vertices: BTreeSet<String> = BTreeSet::new();
        let mut all_vertices: Vec<String> = Vec::new();
        for comp in &self.components {
            let names: Vec<String> = match comp {
                Component::Explicit(cat) => {
                    cat.vertices().map(|v| cat.name(v).to_string()).collect()
                }
                Component::Free { vertices, .. } => vertices.clone(),
            };
            for name in names {
                if !seen_vertices.insert(name.clone()) {
                    return Err(CatError::Presentation(format!("duplicate vertex name {name}")));
                }
                all_vertices.push(name);
            }
        }
        let index: BTreeMap<&str, usize> =
            all_vertices.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut parent: Vec<usize> = (0..all_vertices.len()).collect();
        for (a, b) in &self.glue {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| CatError::Presentation(format!("unknown glue vertex {a}")))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| CatError::Presentation(format!("unknown glue vertex {b}")))?;
            union(&mut parent, ia, ib);
        }
        let mut class_members: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, name) in all_vertices.iter().enumerate() {
            class_members.entry(find_root(&mut parent, i)).or_default().push(name.clone());
        }
        let mut class_names: Vec<String> =
            class_members.values().map(|members| members.join("~")).collect();
        class_names.sort();
        let mut class_by_vertex: BTreeMap<String, u32> = BTreeMap::new();
        for members in class_members.values() {
            let joined = members.join("~");
            let class = class_names.iter().position(|c| *c == joined).unwrap() as u32;
            for m in members {
                class_by_vertex.insert(m.clone(), class);
            }
        }
        let mut generators: Vec<Generator> = Vec::new();
        let mut gen_names: BTreeSet<String> = BTreeSet::new();
        for (ci, comp) in self.components.iter().enumerate() {
            match comp {
                Component::Explicit(cat) => {
                    for m in cat.morphisms() {
                        if cat.is_vertex(m) {
                            continue;
                        }
                        let name = cat.name(m).to_string();
                        if !gen_names.insert(name.clone()) {
                            return Err(CatError::Presentation(format!(
                                "duplicate generator name {name}"
                            )));
                        }
                        generators.push(Generator {
                            name,
                            comp: ci,
                            src_class: class_by_vertex[cat.name(cat.src(m))],
                            rng_class: class_by_vertex[cat.name(cat.rng(m))],
                            origin: Origin::Morph(m),
                        });
                    }
                }
                Component::Free { arrows, .. } => {
                    for (ai, a) in arrows.iter().enumerate() {
                        if !gen_names.insert(a.name.clone()) {
                            return Err(CatError::Presentation(format!(
                                "duplicate generator name {}",
                                a.name
                            )));
                        }
                        let src = *class_by_vertex.get(&a.src).ok_or_else(|| {
                            CatError::Presentation(format!("unknown vertex {}", a.src))
                        })?;
                        let rng = *class_by_vertex.get(&a.rng).ok_or_else(|| {
                            CatError::Presentation(format!("unknown vertex {}", a.rng))
                        })?;
                        generators.push(Generator {
                            name: a.name.clone(),
                            comp: ci,
                            src_class: src,
                            rng_class: rng,
                            origin: Origin::Arrow(ai),
                        });
                    }
                }
            }
        }
        let gen_by_name: BTreeMap<String, usize> =
            generators.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect();
        let mut glued = Glued {
            class_names,
            generators,
            gen_by_name,
            class_by_vertex,
            relations: Vec::new(),
        };
        // Composition facts of explicit components.
        let mut relations: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for comp in &self.components {
            if let Component::Explicit(cat) = comp {
                for a in cat.morphisms() {
                    for b in cat.morphisms() {
                        if cat.is_vertex(a) || cat.is_vertex(b) {
                            continue;
                        }
                        if let Some(ab) = cat.compose(a, b) {
                            relations.push((
                                vec![glued.gen_by_name[cat.name(a)], glued.gen_by_name[cat.name(b)]],
                                vec![glued.gen_by_name[cat.name(ab)]],
                            ));
                        }
                    }
                }
            }
        }
        // Extra relations over generator names.
        for (u, v) in &self.extra_relations {
            let resolve = |w: &[String]| -> Result<Vec<usize>, CatError> {
                if w.is_empty() {
                    return Err(CatError::Presentation("empty relation side".into()));
                }
                w.iter()
                    .map(|n| {
                        glued.gen_by_name.get(n).copied().ok_or_else(|| {
                            CatError::Presentation(format!("unknown generator {n}"))
                        })
                    })
                    .collect()
            };
            let (u, v) = (resolve(u)?, resolve(v)?);
            if !glued.chainable(&u) || !glued.chainable(&v) {
                return Err(CatError::Presentation("relation word does not chain".into()));
            }
            if glued.word_rng(&u) != glued.word_rng(&v) || glued.word_src(&u) != glued.word_src(&v)
            {
                return Err(CatError::Presentation(
                    "relation sides have different endpoints".into(),
                ));
            }
            relations.push((u, v));
        }
        glued.relations = relations;
        Ok(glued)
    }
}

// ---------------------------------------------------------------------------
// Words over component letters and their normal form.

/// One letter of an amalgamation word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Letter {
    /// A vertex class (unit).
    Unit(u32),
    /// A non-identity morphism of an explicit component.
    Morph { comp: usize, id: PathId },
    /// A nonempty composable run of arrows in a free component.
    Run { comp: usize, arrows: Vec<usize> },
}

/// A composable word of letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Word {
    pub letters: Vec<Letter>,
}

/// A word with no unit letters in which adjacent same-component letters do
/// not compose; the empty word is the unit of its class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct NormalForm {
    pub rng_class: u32,
    pub src_class: u32,
    pub letters: Vec<Letter>,
}

/// The word machinery over a fixed presentation.
pub struct Amalgam<'a> {
    pub pres: &'a Presentation,
    pub glued: Glued,
}

impl<'a> Amalgam<'a> {
    pub fn new(pres: &'a Presentation) -> Result<Self, CatError> {
        Ok(Amalgam { pres, glued: pres.glued()? })
    }

    fn comp_cat(&self, ci: usize) -> Option<&PathCategory> {
        match &self.pres.components[ci] {
            Component::Explicit(cat) => Some(cat),
            Component::Free { .. } => None,
        }
    }

    fn free_arrows(&self, ci: usize) -> &[FreeArrow] {
        match &self.pres.components[ci] {
            Component::Free { arrows, .. } => arrows,
            Component::Explicit(_) => &[],
        }
    }

    fn letter_rng_class(&self, l: &Letter) -> u32 {
        match l {
            Letter::Unit(c) => *c,
            Letter::Morph { comp, id } => {
                let cat = self.comp_cat(*comp).unwrap();
                self.glued.class_by_vertex[cat.name(cat.rng(*id))]
            }
            Letter::Run { comp, arrows } => {
                self.glued.class_by_vertex[&self.free_arrows(*comp)[arrows[0]].rng]
            }
        }
    }

    fn letter_src_class(&self, l: &Letter) -> u32 {
        match l {
            Letter::Unit(c) => *c,
            Letter::Morph { comp, id } => {
                let cat = self.comp_cat(*comp).unwrap();
                self.glued.class_by_vertex[cat.name(cat.src(*id))]
            }
            Letter::Run { comp, arrows } => {
                self.glued.class_by_vertex[&self.free_arrows(*comp)[*arrows.last().unwrap()].src]
            }
        }
    }

    /// Parse a word from names: vertex names become units, explicit-component
    /// morphism names become letters, free-component arrow names become runs.
    pub fn parse_word(&self, names: &[&str]) -> Result<Word, CatError> {
        let mut letters = Vec::new();
        for &n in names {
            if let Some(class) = self.glued.class_of_vertex(n) {
                letters.push(Letter::Unit(class));
                continue;
            }
            let mut found = None;
            for (ci, comp) in self.pres.components.iter().enumerate() {
                match comp {
                    Component::Explicit(cat) => {
                        if let Some(id) = cat.by_name(n) {
                            if !cat.is_vertex(id) {
                                found = Some(Letter::Morph { comp: ci, id });
                            }
                        }
                    }
                    Component::Free { arrows, .. } => {
                        if let Some(ai) = arrows.iter().position(|a| a.name == n) {
                            found = Some(Letter::Run { comp: ci, arrows: vec![ai] });
                        }
                    }
                }
            }
            letters.push(found.ok_or_else(|| CatError::BadWord(format!("unknown letter {n}")))?);
        }
        let word = Word { letters };
        self.check_word(&word)?;
        Ok(word)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), CatError> {
        if w.letters.is_empty() {
            return Err(CatError::BadWord("empty word".into()));
        }
        for pair in w.letters.windows(2) {
            if self.letter_src_class(&pair[0]) != self.letter_rng_class(&pair[1]) {
                return Err(CatError::BadWord("consecutive endpoints do not chain".into()));
            }
        }
        Ok(())
    }

    fn merge(&self, a: &Letter, b: &Letter) -> Option<Letter> {
        match (a, b) {
            (Letter::Morph { comp: c1, id: m1 }, Letter::Morph { comp: c2, id: m2 })
                if c1 == c2 =>
            {
                let cat = self.comp_cat(*c1).unwrap();
                if cat.src(*m1) != cat.rng(*m2) {
                    return None;
                }
                cat.compose(*m1, *m2).map(|m| Letter::Morph { comp: *c1, id: m })
            }
            (Letter::Run { comp: c1, arrows: r1 }, Letter::Run { comp: c2, arrows: r2 })
                if c1 == c2 =>
            {
                let arrows = self.free_arrows(*c1);
                if arrows[*r1.last().unwrap()].src == arrows[r2[0]].rng {
                    let mut joined = r1.clone();
                    joined.extend_from_slice(r2);
                    Some(Letter::Run { comp: *c1, arrows: joined })
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn applicable_moves(&self, letters: &[Letter]) -> Vec<usize> {
        // Move k < len: delete the unit at k; move len + k: merge (k, k+1).
        let mut moves = Vec::new();
        for (i, l) in letters.iter().enumerate() {
            if matches!(l, Letter::Unit(_)) && letters.len() > 1 {
                moves.push(i);
            }
        }
        for i in 0..letters.len().saturating_sub(1) {
            if self.merge(&letters[i], &letters[i + 1]).is_some() {
                moves.push(letters.len() + i);
            }
        }
        moves
    }

    fn apply_move(&self, letters: &mut Vec<Letter>, mv: usize) {
        if mv < letters.len() {
            letters.remove(mv);
        } else {
            let i = mv - letters.len();
            let merged = self.merge(&letters[i], &letters[i + 1]).unwrap();
            letters[i] = merged;
            letters.remove(i + 1);
        }
    }

    fn finish(&self, rng_class: u32, src_class: u32, mut letters: Vec<Letter>) -> NormalForm {
        if letters.len() == 1 && matches!(letters[0], Letter::Unit(_)) {
            letters.clear();
        }
        NormalForm { rng_class, src_class, letters }
    }

    /// Reduce a word to its unique normal form: delete units, compose
    /// adjacent same-component letters, to fixpoint.
    pub fn normal_form(&self, w: &Word) -> Result<NormalForm, CatError> {
        self.check_word(w)?;
        let rng_class = self.letter_rng_class(&w.letters[0]);
        let src_class = self.letter_src_class(w.letters.last().unwrap());
        let mut letters = w.letters.clone();
        while let Some(&mv) = self.applicable_moves(&letters).first() {
            self.apply_move(&mut letters, mv);
        }
        Ok(self.finish(rng_class, src_class, letters))
    }

    /// Reduce with moves applied in random order; the result must not depend
    /// on the order.
    pub fn normal_form_random<R: Rng>(
        &self,
        w: &Word,
        rng: &mut R,
    ) -> Result<NormalForm, CatError> {
        self.check_word(w)?;
        let rng_class = self.letter_rng_class(&w.letters[0]);
        let src_class = self.letter_src_class(w.letters.last().unwrap());
        let mut letters = w.letters.clone();
        loop {
            let moves = self.applicable_moves(&letters);
            match moves.choose(rng) {
                None => break,
                Some(&mv) => self.apply_move(&mut letters, mv),
            }
        }
        Ok(self.finish(rng_class, src_class, letters))
    }

    /// Concatenate two normal forms and renormalize.
    pub fn compose_nf(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm, CatError> {
        if a.src_class != b.rng_class {
            return Err(CatError::BadWord("endpoint classes do not match".into()));
        }
        if a.letters.is_empty() {
            return Ok(b.clone());
        }
        if b.letters.is_empty() {
            return Ok(a.clone());
        }
        let mut letters = a.letters.clone();
        letters.extend(b.letters.iter().cloned());
        self.normal_form(&Word { letters })
    }

    pub fn display_nf(&self, nf: &NormalForm) -> String {
        if nf.letters.is_empty() {
            return self.glued.class_names[nf.rng_class as usize].clone();
        }
        nf.letters
            .iter()
            .map(|l| match l {
                Letter::Unit(c) => self.glued.class_names[*c as usize].clone(),
                Letter::Morph { comp, id } => self.comp_cat(*comp).unwrap().name(*id).to_string(),
                Letter::Run { comp, arrows } => arrows
                    .iter()
                    .map(|&ai| self.free_arrows(*comp)[ai].name.clone())
                    .collect::<Vec<_>>()
                    .join("."),
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    /// The common-extension test on normal forms: words meet iff one extends
    /// the other below the last letter and the last letters meet inside their
    /// shared component. Returns a common extension as witness.
    pub fn meets_nf(
        &self,
        a: &NormalForm,
        b: &NormalForm,
    ) -> Result<(bool, Option<NormalForm>), CatError> {
        if a.rng_class != b.rng_class {
            return Ok((false, None));
        }
        if a.letters.is_empty() {
            return Ok((true, Some(b.clone())));
        }
        if b.letters.is_empty() {
            return Ok((true, Some(a.clone())));
        }
        let (short, long) = if a.letters.len() <= b.letters.len() { (a, b) } else { (b, a) };
        let m = short.letters.len();
        let k = long.letters.len();
        if short.letters[..m - 1] != long.letters[..m - 1] {
            return Ok((false, None));
        }
        let last_s = &short.letters[m - 1];
        let last_l = &long.letters[m - 1];
        if m != k {
            // The longer word's m-th letter must extend the shorter's last.
            let extends = match (last_s, last_l) {
                (Letter::Morph { comp: c1, id: m1 }, Letter::Morph { comp: c2, id: m2 })
                    if c1 == c2 =>
                {
                    is_initial_segment(self.comp_cat(*c1).unwrap(), *m1, *m2)
                }
                (Letter::Run { comp: c1, arrows: r1 }, Letter::Run { comp: c2, arrows: r2 })
                    if c1 == c2 =>
                {
                    r2.len() >= r1.len() && r2[..r1.len()] == r1[..]
                }
                _ => false,
            };
            return Ok((extends, extends.then(|| long.clone())));
        }
        // Equal length: last letters must meet within the same component.
        match (last_s, last_l) {
            (Letter::Morph { comp: c1, id: m1 }, Letter::Morph { comp: c2, id: m2 })
                if c1 == c2 =>
            {
                let cat = self.comp_cat(*c1).unwrap();
                if !meets(cat, *m1, *m2)? {
                    return Ok((false, None));
                }
                let e = min_common_extensions(cat, &[*m1, *m2])?[0];
                let mut letters = short.letters[..m - 1].to_vec();
                letters.push(Letter::Morph { comp: *c1, id: e });
                let nf = NormalForm {
                    rng_class: short.rng_class,
                    src_class: self.letter_src_class(letters.last().unwrap()),
                    letters,
                };
                Ok((true, Some(nf)))
            }
            (Letter::Run { comp: c1, arrows: r1 }, Letter::Run { comp: c2, arrows: r2 })
                if c1 == c2 =>
            {
                // In a free category two paths meet iff one is a prefix of
                // the other.
                let (p, q) = if r1.len() <= r2.len() { (r1, r2) } else { (r2, r1) };
                if q[..p.len()] != p[..] {
                    return Ok((false, None));
                }
                let mut letters = short.letters[..m - 1].to_vec();
                letters.push(Letter::Run { comp: *c1, arrows: q.clone() });
                let nf = NormalForm {
                    rng_class: short.rng_class,
                    src_class: self.letter_src_class(letters.last().unwrap()),
                    letters,
                };
                Ok((true, Some(nf)))
            }
            _ => Ok((false, None)),
        }
    }
}

// ---------------------------------------------------------------------------
// Bounded congruence closure over generator words.

/// A truncated amalgamation: congruence classes of generator words up to the
/// bound, with partial composition. Verdicts computed on a ball never claim
/// anything about the untruncated object.
#[derive(Clone, Debug)]
pub struct Ball {
    pub bound: u32,
    pub class_names: Vec<String>,
    /// Canonical representatives, units (empty words, one per class) first,
    /// then by (length, lexicographic).
    pub elements: Vec<BallElem>,
    word_class: BTreeMap<Vec<usize>, usize>,
    gen_names: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BallElem {
    /// Empty for units.
    pub rep: Vec<usize>,
    pub rng_class: u32,
    pub src_class: u32,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn display(&self, i: usize) -> String {
        let e = &self.elements[i];
        if e.rep.is_empty() {
            self.class_names[e.rng_class as usize].clone()
        } else {
            e.rep.iter().map(|&g| self.gen_names[g].as_str()).collect::<Vec<_>>().join(".")
        }
    }

    pub fn class_of_word(&self, w: &[usize]) -> Option<usize> {
        if w.is_empty() {
            return None;
        }
        self.word_class.get(w).copied()
    }

    /// Partial composition: `[u][v] = [uv]` when the concatenation stays
    /// within the saturation universe and its class was kept.
    pub fn compose(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (&self.elements[i], &self.elements[j]);
        if a.src_class != b.rng_class {
            return None;
        }
        if a.rep.is_empty() {
            return Some(j);
        }
        if b.rep.is_empty() {
            return Some(i);
        }
        let mut w = a.rep.clone();
        w.extend_from_slice(&b.rep);
        self.class_of_word(&w)
    }

    /// Does element `i` extend element `m` within the ball?
    pub fn extends(&self, i: usize, m: usize) -> bool {
        if self.elements[m].rng_class != self.elements[i].rng_class {
            return false;
        }
        (0..self.elements.len()).any(|c| self.compose(m, c) == Some(i))
    }

    /// Bounded meets: a common extension of `i` and `j` within the ball.
    pub fn meets_bounded(&self, i: usize, j: usize) -> Option<usize> {
        (0..self.elements.len()).find(|&e| self.extends(e, i) && self.extends(e, j))
    }

    /// Elements based at a class.
    pub fn paths_at(&self, class: u32) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| self.elements[i].rng_class == class).collect()
    }
}

/// Saturate the congruence generated by the relations over all generator
/// words of length at most `universe`, keeping classes with a representative
/// of length at most `bound`.
pub fn saturate(glued: &Glued, bound: u32, universe: u32) -> Ball {
    assert!(universe >= bound);
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..glued.generators.len()).map(|g| vec![g]).collect();
    for _ in 0..universe {
        words.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for w in &frontier {
            let src = glued.word_src(w);
            for (g, generator) in glued.generators.iter().enumerate() {
                if generator.rng_class == src {
                    let mut w2 = w.clone();
                    w2.push(g);
                    next.push(w2);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let index: BTreeMap<&[usize], usize> =
        words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    // Merge every in-universe context instance of every relation.
    for (wi, w) in words.iter().enumerate() {
        for (u, v) in &glued.relations {
            for (from, to) in [(u, v), (v, u)] {
                if from.len() > w.len() {
                    continue;
                }
                for i in 0..=w.len() - from.len() {
                    if &w[i..i + from.len()] == from.as_slice() {
                        let mut w2 = w[..i].to_vec();
                        w2.extend_from_slice(to);
                        w2.extend_from_slice(&w[i + from.len()..]);
                        if w2.len() <= universe as usize {
                            if let Some(&j) = index.get(w2.as_slice()) {
                                union(&mut parent, wi, j);
                            }
                        }
                    }
                }
            }
        }
    }
    // Canonical rep per class: min (length, lexicographic).
    let mut reps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (wi, w) in words.iter().enumerate() {
        let root = find_root(&mut parent, wi);
        let better = match reps.get(&root) {
            None => true,
            Some(cur) => (w.len(), w) < (cur.len(), cur),
        };
        if better {
            reps.insert(root, w.clone());
        }
    }
    let mut elements: Vec<BallElem> = Vec::new();
    for class in 0..glued.class_names.len() {
        elements.push(BallElem {
            rep: Vec::new(),
            rng_class: class as u32,
            src_class: class as u32,
        });
    }
    let mut kept: Vec<Vec<usize>> =
        reps.values().filter(|r| r.len() <= bound as usize).cloned().collect();
    kept.sort_by_key(|a| (a.len(), a.clone()));
    for rep in kept {
        elements.push(BallElem {
            rng_class: glued.word_rng(&rep),
            src_class: glued.word_src(&rep),
            rep,
        });
    }
    let elem_index: BTreeMap<&[usize], usize> = elements
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.rep.is_empty())
        .map(|(i, e)| (e.rep.as_slice(), i))
        .collect();
    let mut word_class = BTreeMap::new();
    for (wi, w) in words.iter().enumerate() {
        let root = find_root(&mut parent, wi);
        let rep = &reps[&root];
        if let Some(&ei) = elem_index.get(rep.as_slice()) {
            word_class.insert(w.clone(), ei);
        }
    }
    Ball {
        bound,
        class_names: glued.class_names.clone(),
        elements,
        word_class,
        gen_names: glued.generators.iter().map(|g| g.name.clone()).collect(),
    }
}

/// Result of [`amalgamate`]: the ball, plus the exact category when the
/// object closed up within the scan.
pub struct AmalgamateResult {
    pub ball: Ball,
    pub exact: Option<PathCategory>,
}

/// Build the amalgamation: grow the scan until the normal forms stop (finite
/// case, emitting an exact validated category) or the requested bound is hit.
pub fn amalgamate(pres: &Presentation, bound: Option<u32>) -> Result<AmalgamateResult, CatError> {
    let glued = pres.glued()?;
    let cap = bound.unwrap_or(12);
    // Stabilization: some length L < probe at which no new class appears.
    let mut stable: Option<u32> = None;
    for probe in 1..=cap {
        let ball = saturate(&glued, probe, probe);
        let max_len = ball.elements.iter().map(|e| e.rep.len()).max().unwrap_or(0) as u32;
        if max_len < probe {
            stable = Some(max_len);
            break;
        }
    }
    match (stable, bound) {
        (Some(l), _) => {
            // Finite: re-saturate with margin so any two elements compose
            // inside the universe, then materialize and validate.
            let ball = saturate(&glued, l.max(1), 2 * l.max(1) + 2);
            let cat = materialize(&glued, &ball)?;
            let report = cat.validate();
            if !report.is_valid() {
                return Err(CatError::Presentation(format!(
                    "presented object is not a category of paths:\n{}",
                    report.render(&cat)
                )));
            }
            Ok(AmalgamateResult { ball, exact: Some(cat) })
        }
        (None, Some(b)) => Ok(AmalgamateResult { ball: saturate(&glued, b, b), exact: None }),
        (None, None) => Err(CatError::NotFinite(cap)),
    }
}

fn materialize(glued: &Glued, ball: &Ball) -> Result<PathCategory, CatError> {
    let mut b = CategoryBuilder::new();
    let mut ids: Vec<PathId> = Vec::new();
    for e in &ball.elements {
        if e.rep.is_empty() {
            ids.push(b.vertex(&glued.class_names[e.rng_class as usize]));
        }
    }
    for (i, e) in ball.elements.iter().enumerate() {
        if !e.rep.is_empty() {
            let name = ball.display(i);
            ids.push(b.arrow(&name, PathId(e.src_class), PathId(e.rng_class)));
        }
    }
    for i in 0..ball.elements.len() {
        for j in 0..ball.elements.len() {
            if ball.elements[i].src_class != ball.elements[j].rng_class {
                continue;
            }
            let k = ball.compose(i, j).ok_or_else(|| {
                CatError::Presentation(format!(
                    "composition {} · {} escapes the stabilized ball",
                    ball.display(i),
                    ball.display(j)
                ))
            })?;
            b.compose(ids[i], ids[j], ids[k]);
        }
    }
    b.build()
}

/// Word pairs within the bound whose equality is bound-sensitive: merged when
/// the scan universe grows by two, but not at the plain bound.
pub fn bound_sensitive_pairs(
    pres: &Presentation,
    bound: u32,
) -> Result<Vec<(String, String)>, CatError> {
    let glued = pres.glued()?;
    let small = saturate(&glued, bound, bound);
    let large = saturate(&glued, bound, bound + 2);
    let mut out = Vec::new();
    for (i, a) in small.elements.iter().enumerate() {
        for (j, b) in small.elements.iter().enumerate() {
            if i >= j || a.rep.is_empty() || b.rep.is_empty() {
                continue;
            }
            let in_small = small.class_of_word(&a.rep) == small.class_of_word(&b.rep);
            let in_large = large.class_of_word(&a.rep) == large.class_of_word(&b.rep);
            if !in_small && in_large {
                out.push((small.display(i), small.display(j)));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Degree sums over an amalgamation.

/// Per-component degree data: a functor on an explicit component, or arrow
/// values on a free one.
#[derive(Clone, Debug)]
pub enum ComponentDegree {
    Explicit(DegreeFunctor),
    Free { width: usize, arrow_values: Vec<Vec<i64>> },
}

impl ComponentDegree {
    fn width(&self) -> usize {
        match self {
            ComponentDegree::Explicit(f) => f.width(),
            ComponentDegree::Free { width, .. } => *width,
        }
    }
}

/// The block-sum functor `ψ` into `⊕ᵢ Qᵢ`, carried on ball elements.
#[derive(Clone, Debug)]
pub struct SumDegree {
    pub offsets: Vec<usize>,
    pub width: usize,
    pub values: Vec<Vec<i64>>,
    pub component_reports: Vec<String>,
}

/// Sum the component degree functors over the amalgamation ball, after
/// checking positivity, nondegeneracy, non-isotropy, and splitting stability
/// per component.
pub fn sum_degree(
    pres: &Presentation,
    degrees: &[ComponentDegree],
    ball: &Ball,
) -> Result<SumDegree, CatError> {
    if degrees.len() != pres.components.len() {
        return Err(CatError::Presentation("one degree functor per component required".into()));
    }
    let glued = pres.glued()?;
    let mut offsets = Vec::new();
    let mut width = 0;
    for d in degrees {
        offsets.push(width);
        width += d.width();
    }
    let mut component_reports = Vec::new();
    for (ci, (comp, deg)) in pres.components.iter().zip(degrees).enumerate() {
        match (comp, deg) {
            (Component::Explicit(cat), ComponentDegree::Explicit(f)) => {
                f.validate(cat)?;
                let (nd, w) = crate::degree::is_nondegenerate(cat, f);
                if !nd {
                    return Err(CatError::Presentation(format!(
                        "component {ci}: degenerate at {}",
                        cat.name(w.unwrap())
                    )));
                }
                if cat.morphisms().any(|m| f.value(m).iter().any(|&x| x < 0)) {
                    return Err(CatError::Presentation(format!(
                        "component {ci}: values must lie in the positive cone"
                    )));
                }
                if let crate::degree::IsotropyVerdict::Isotropic { .. } =
                    crate::degree::is_non_isotropic(cat, f)
                {
                    return Err(CatError::Presentation(format!(
                        "component {ci}: isotropic degree functor"
                    )));
                }
                component_reports.push(format!(
                    "component {ci}: nondegenerate, non-isotropic, positive-cone-valued; \
                     splitting stability holds since parts of a composite are coordinatewise \
                     bounded by the whole"
                ));
            }
            (Component::Free { arrows, .. }, ComponentDegree::Free { width, arrow_values }) => {
                if arrow_values.len() != arrows.len()
                    || arrow_values.iter().any(|v| v.len() != *width)
                {
                    return Err(CatError::Presentation(format!(
                        "component {ci}: arrow values have the wrong shape"
                    )));
                }
                if arrow_values.iter().any(|v| v.iter().all(|&x| x == 0)) {
                    return Err(CatError::Presentation(format!(
                        "component {ci}: degenerate arrow value"
                    )));
                }
                if arrow_values.iter().any(|v| v.iter().any(|&x| x < 0)) {
                    return Err(CatError::Presentation(format!(
                        "component {ci}: values must lie in the positive cone"
                    )));
                }
                component_reports.push(format!(
                    "component {ci}: free; nondegenerate positive arrow values; non-isotropic \
                     since distinct paths in a free category differ in their first letter"
                ));
            }
            _ => {
                return Err(CatError::Presentation(format!(
                    "component {ci}: degree data does not match the component kind"
                )));
            }
        }
    }
    let mut values = Vec::with_capacity(ball.elements.len());
    for e in &ball.elements {
        let mut val = vec![0i64; width];
        for &g in &e.rep {
            let generator = &glued.generators[g];
            let off = offsets[generator.comp];
            match (&degrees[generator.comp], generator.origin) {
                (ComponentDegree::Explicit(f), Origin::Morph(id)) => {
                    for (k, &x) in f.value(id).iter().enumerate() {
                        val[off + k] = val[off + k].checked_add(x).ok_or(CatError::Overflow)?;
                    }
                }
                (ComponentDegree::Free { arrow_values, .. }, Origin::Arrow(ai)) => {
                    for (k, &x) in arrow_values[ai].iter().enumerate() {
                        val[off + k] = val[off + k].checked_add(x).ok_or(CatError::Overflow)?;
                    }
                }
                _ => unreachable!("generator origin matches its component kind"),
            }
        }
        values.push(val);
    }
    Ok(SumDegree { offsets, width, values, component_reports })
}

impl SumDegree {
    /// Additive wherever ball composition is defined.
    pub fn check_functorial(&self, ball: &Ball) -> bool {
        for i in 0..ball.len() {
            for j in 0..ball.len() {
                if let Some(k) = ball.compose(i, j) {
                    let sum: Vec<i64> =
                        self.values[i].iter().zip(&self.values[j]).map(|(a, b)| a + b).collect();
                    if sum != self.values[k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Zero exactly on units.
    pub fn check_nondegenerate(&self, ball: &Ball) -> bool {
        ball.elements
            .iter()
            .zip(&self.values)
            .all(|(e, v)| e.rep.is_empty() == v.iter().all(|&x| x == 0))
    }
}

/// Verdict of a bounded scan on a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallVerdict {
    /// No counterexample within the bound; silent about the rest.
    HoldsWithinBound(u32),
    /// A concrete counterexample; it persists at every larger bound.
    FailsWith(String),
}

/// Bounded non-isotropy via the pair graph on ball elements.
pub fn ball_non_isotropic(ball: &Ball, values: &[Vec<i64>]) -> BallVerdict {
    let n = ball.len();
    let mut nodes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j
                && !ball.elements[i].rep.is_empty()
                && !ball.elements[j].rep.is_empty()
                && ball.elements[i].rng_class == ball.elements[j].rng_class
            {
                nodes.push((i, j));
            }
        }
    }
    let index: BTreeMap<(usize, usize), usize> =
        nodes.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (k, &(i, j)) in nodes.iter().enumerate() {
        for i2 in 0..n {
            for j2 in 0..n {
                let left = ball.compose(i, i2);
                if left.is_none() || left != ball.compose(j, j2) {
                    continue;
                }
                if let Some(&k2) = index.get(&(i2, j2)) {
                    adj[k].push(k2);
                }
            }
        }
    }
    let mut alive = vec![true; nodes.len()];
    loop {
        let mut changed = false;
        for k in 0..nodes.len() {
            if alive[k] && adj[k].iter().all(|&k2| !alive[k2]) {
                alive[k] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for (k, &(i, j)) in nodes.iter().enumerate() {
        if alive[k] && values[i] == values[j] {
            return BallVerdict::FailsWith(format!(
                "pair ({}, {}) reaches a cycle in the pair graph",
                ball.display(i),
                ball.display(j)
            ));
        }
    }
    BallVerdict::HoldsWithinBound(ball.bound)
}
