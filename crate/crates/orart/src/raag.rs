//! Groups presented by a special graph: one generator per vertex, a
//! commutator relator per normal edge, and a twisted relator per special
//! edge making the target conjugate the origin to its inverse.
//!
//! The module provides the presentation itself, a terminating rewriting
//! procedure to normal forms ([`normalize`]), exact arithmetic in the
//! groups of complete graphs ([`CliqueGroup`], elements of
//! `Z^m x (Z^n |x Z)`), centers, abelianization, the right-angled
//! Coxeter projection, and homomorphism verification between two such
//! groups.
//!
//! Generators are totally ordered with special vertices last (within a
//! class, lexicographically by id); rewriting sorts words toward that
//! order, so the normal form collects the special generator at the right
//! end, as in `b1^{v1} ... bn^{vn} a^k`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::special_graph::{Adjacency, SpecialGraph};
use crate::util;

/// A word in group generators: a freely reduced sequence of letters
/// `(generator, exponent)` with nonzero exponents and no two adjacent
/// letters sharing a generator. All constructors reduce, so equality of
/// values is equality of reduced words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

fn reduce(letters: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(letters.len());
    for (g, e) in letters {
        if e == 0 {
            continue;
        }
        if let Some(last) = out.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
                continue;
            }
        }
        out.push((g, e));
    }
    out
}

impl Word {
    pub fn new(letters: Vec<(usize, i64)>) -> Word {
        Word {
            letters: reduce(letters),
        }
    }

    pub fn empty() -> Word {
        Word {
            letters: Vec::new(),
        }
    }

    /// The one-letter word `generator^exponent`.
    pub fn one(generator: usize, exponent: i64) -> Word {
        Word::new(vec![(generator, exponent)])
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(
            self.letters
                .iter()
                .chain(other.letters.iter())
                .copied()
                .collect(),
        )
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = Word::empty();
        for _ in 0..exponent.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Parses whitespace-separated tokens `name` or `name^k`; the token
    /// `1` stands for the empty word.
    pub fn parse(text: &str, resolve: impl Fn(&str) -> Option<usize>) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let e: i64 = exp
                        .parse()
                        .map_err(|_| Error::Domain(format!("bad exponent in token '{token}'")))?;
                    (name, e)
                }
                None => (token, 1),
            };
            let g = resolve(name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
            letters.push((g, exp));
        }
        Ok(Word::new(letters))
    }

    /// Renders the word using the given generator names; the empty word
    /// prints as `1`.
    pub fn format(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    names[g].clone()
                } else {
                    format!("{}^{}", names[g], e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A finite presentation: named generators and relator words whose
/// letters index into the generator list.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Order- and orientation-independent form: generators sorted by
    /// name, each relator cyclically reduced and replaced by the least
    /// rotation of itself or its inverse, the list sorted and deduped.
    /// Two presentations with equal canonical forms have the same
    /// generators and the same relator set up to inversion and rotation.
    pub fn canonical(&self) -> CanonicalPresentation {
        let mut generators = self.generators.clone();
        generators.sort();
        let mut relators: Vec<Vec<(String, i64)>> = self
            .relators
            .iter()
            .map(|w| canonical_relator(w, &self.generators))
            .filter(|r| !r.is_empty())
            .collect();
        relators.sort();
        relators.dedup();
        CanonicalPresentation {
            generators,
            relators,
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.generators.join(", "))?;
        let rendered: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.format(&self.generators))
            .collect();
        write!(f, "{} >", rendered.join(", "))
    }
}

/// See [`Presentation::canonical`]. Relators are stored as unit-letter
/// sequences `(name, ±1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<(String, i64)>>,
}

fn canonical_relator(word: &Word, names: &[String]) -> Vec<(String, i64)> {
    // Unit-letter expansion of the reduced word.
    let mut units: Vec<(usize, i64)> = Vec::new();
    for &(g, e) in word.letters() {
        for _ in 0..e.unsigned_abs() {
            units.push((g, e.signum()));
        }
    }
    // Cyclic reduction: strip cancelling first/last pairs.
    while units.len() >= 2 {
        let first = units[0];
        let last = units[units.len() - 1];
        if first.0 == last.0 && first.1 == -last.1 {
            units.remove(0);
            units.pop();
        } else {
            break;
        }
    }
    if units.is_empty() {
        return Vec::new();
    }
    let named: Vec<(String, i64)> = units
        .iter()
        .map(|&(g, s)| (names[g].clone(), s))
        .collect();
    let inverse: Vec<(String, i64)> = named
        .iter()
        .rev()
        .map(|(n, s)| (n.clone(), -s))
        .collect();
    let mut best: Option<Vec<(String, i64)>> = None;
    for candidate in [named, inverse] {
        for shift in 0..candidate.len() {
            let mut rotated = candidate[shift..].to_vec();
            rotated.extend_from_slice(&candidate[..shift]);
            if best.as_ref().is_none_or(|b| rotated < *b) {
                best = Some(rotated);
            }
        }
    }
    best.expect("nonempty relator has a least rotation")
}

/// Vertex ids sorted by the fixed generator order: normal vertices
/// first, then special ones, each class lexicographic by id.
pub fn generator_order(graph: &SpecialGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.vertex_count()).collect();
    order.sort_by_key(|&v| (graph.is_special(v), graph.vertex_name(v).to_string()));
    order
}

/// Position of each vertex in the generator order.
pub fn generator_positions(graph: &SpecialGraph) -> Vec<usize> {
    let order = generator_order(graph);
    let mut pos = vec![0usize; order.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    pos
}

/// The defining presentation of the graph's group: generators are the
/// vertices in generator order; each normal edge contributes one
/// commutator `g h g^-1 h^-1` (earlier generator first), and each
/// special edge `(o, t)` contributes `t o t^-1 o`, so the special target
/// conjugates its origin to the inverse.
pub fn presentation(graph: &SpecialGraph) -> Result<Presentation> {
    graph.require_valid()?;
    Ok(presentation_from_edges(graph))
}

/// Presentation built from the edges alone, with no validity gate.
/// Used for induced subgraphs (clique restrictions), where a special
/// vertex may be separated from its incoming special edge: it still
/// generates, it just contributes no relator of its own here.
pub(crate) fn presentation_from_edges(graph: &SpecialGraph) -> Presentation {
    let order = generator_order(graph);
    let pos = generator_positions(graph);
    let generators: Vec<String> = order
        .iter()
        .map(|&v| graph.vertex_name(v).to_string())
        .collect();

    let mut normal: Vec<(usize, usize)> = graph
        .normal_edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (pos[u], pos[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    normal.sort_unstable();
    let mut special: Vec<(usize, usize)> = graph
        .special_edges()
        .iter()
        .map(|&(o, t)| (pos[o], pos[t]))
        .collect();
    special.sort_unstable();

    let mut relators = Vec::new();
    for (a, b) in normal {
        relators.push(Word::new(vec![(a, 1), (b, 1), (a, -1), (b, -1)]));
    }
    for (o, t) in special {
        relators.push(Word::new(vec![(t, 1), (o, 1), (t, -1), (o, 1)]));
    }
    Presentation {
        generators,
        relators,
    }
}

/// Reinterprets a word over a presentation's generators as a word over
/// the graph's vertex indices, matching generators to vertices by name.
pub fn presentation_word_to_vertices(
    graph: &SpecialGraph,
    pres: &Presentation,
    word: &Word,
) -> Result<Word> {
    let mut letters = Vec::with_capacity(word.letter_count());
    for &(g, e) in word.letters() {
        let name = pres
            .generators
            .get(g)
            .ok_or_else(|| Error::Domain(format!("letter {g} outside the generator list")))?;
        letters.push((graph.vertex(name)?, e));
    }
    Ok(Word::new(letters))
}

/// The inverse reindexing: a word over the graph's vertices becomes a
/// word over the presentation's generator positions, matched by name.
pub fn vertex_word_to_presentation(
    graph: &SpecialGraph,
    pres: &Presentation,
    word: &Word,
) -> Result<Word> {
    let mut letters = Vec::with_capacity(word.letter_count());
    for &(v, e) in word.letters() {
        if v >= graph.vertex_count() {
            return Err(Error::Domain(format!("letter {v} is not a vertex")));
        }
        let name = graph.vertex_name(v);
        let g = pres
            .generator_index(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
        letters.push((g, e));
    }
    Ok(Word::new(letters))
}

/// Substitutes `images[g]` for each letter `g^e` of a word over source
/// generators, producing a word over the image alphabet.
pub fn substitute(word: &Word, images: &[Word]) -> Word {
    let mut out = Word::empty();
    for &(g, e) in word.letters() {
        out = out.concat(&images[g].pow(e));
    }
    out
}

/// Rewrites a word over the graph's vertices to its sorted fixpoint:
/// free reduction throughout; adjacent commuting letters in decreasing
/// generator order are swapped; a special target `t` left of its origin
/// `o` is pushed rightward with a sign flip, `t^a o^b -> o^{(-1)^a b} t^a`.
///
/// Every step is an identity of the group, so equal results certify
/// equal elements for any graph. The fixpoint is a canonical form
/// exactly for the shapes accepted by [`decisive_shape`]. Both swap
/// kinds strictly reduce the word's inversion count and reductions only
/// shorten it, so the procedure terminates well inside the defensive
/// step cap of `10·len² + 10`.
pub fn normalize(graph: &SpecialGraph, word: &Word) -> Result<Word> {
    graph.require_valid()?;
    let n = graph.vertex_count();
    for &(g, _) in word.letters() {
        if g >= n {
            return Err(Error::Domain(format!(
                "letter {g} is not a vertex of the {n}-vertex graph"
            )));
        }
    }
    let pos = generator_positions(graph);
    let mut letters = word.letters().to_vec();
    let cap = 10 * word.letter_count() * word.letter_count() + 10;
    let mut steps = 0usize;

    'scan: loop {
        for i in 0..letters.len().saturating_sub(1) {
            let (g, a) = letters[i];
            let (h, b) = letters[i + 1];
            let replacement = match graph.adjacency_between(g, h) {
                Adjacency::Special { target, .. } if target == g => {
                    let sign = if a % 2 == 0 { 1 } else { -1 };
                    Some(vec![(h, sign * b), (g, a)])
                }
                Adjacency::Normal if pos[g] > pos[h] => Some(vec![(h, b), (g, a)]),
                _ => None,
            };
            if let Some(pair) = replacement {
                letters.splice(i..i + 2, pair);
                letters = reduce(letters);
                steps += 1;
                if steps > cap {
                    return Err(Error::RewriteCap(steps));
                }
                continue 'scan;
            }
        }
        break;
    }
    Ok(Word::new(letters))
}

/// Whether the rewriting fixpoint is a proven canonical form, making
/// word equality decidable by [`normalize`]: complete graphs (semidirect
/// normal form), graphs whose every edge is special with a common origin
/// or a common target (free-by-cyclic normal form collects the lone
/// normal-form block), and edgeless graphs (free reduction alone).
pub fn decisive_shape(graph: &SpecialGraph) -> bool {
    if !graph.is_valid() {
        return false;
    }
    let n = graph.vertex_count();
    let naive = graph.naive();
    if naive.edges().len() == n * (n - 1) / 2 {
        return true;
    }
    if graph.normal_edges().is_empty() {
        let specials = graph.special_edges();
        if specials.is_empty() {
            return true;
        }
        let shared_origin = specials
            .iter()
            .map(|&(o, _)| o)
            .collect::<BTreeSet<_>>()
            .len()
            == 1;
        let shared_target = specials
            .iter()
            .map(|&(_, t)| t)
            .collect::<BTreeSet<_>>()
            .len()
            == 1;
        return shared_origin || shared_target;
    }
    false
}

/// Outcome of checking a candidate homomorphism on relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomVerdict {
    /// Every relator image normalizes to the empty word.
    Holds,
    /// Some relator image has a nonempty canonical form in the target.
    Fails { relator_index: usize, residue: Word },
    /// A relator image did not normalize to empty, but the target graph
    /// has no proven canonical form, so no verdict is possible.
    Inconclusive {
        relator_index: usize,
        reason: String,
    },
}

/// Checks that mapping each source generator to `images[g]` (words over
/// the target graph's vertices) sends every relator of `src` to the
/// identity. Empty normal forms certify this for any target; nonempty
/// ones refute it only when the target shape is decisive.
pub fn verify_hom(
    src: &Presentation,
    images: &[Word],
    target: &SpecialGraph,
) -> Result<HomVerdict> {
    if images.len() != src.generators.len() {
        return Err(Error::Domain(format!(
            "{} images supplied for {} generators",
            images.len(),
            src.generators.len()
        )));
    }
    let decisive = decisive_shape(target);
    for (idx, relator) in src.relators.iter().enumerate() {
        let image = substitute(relator, images);
        match normalize(target, &image) {
            Ok(w) if w.is_empty() => {}
            Ok(w) => {
                return Ok(if decisive {
                    HomVerdict::Fails {
                        relator_index: idx,
                        residue: w,
                    }
                } else {
                    HomVerdict::Inconclusive {
                        relator_index: idx,
                        reason: "nonempty normal form on a graph shape without a canonical form"
                            .into(),
                    }
                });
            }
            Err(Error::RewriteCap(steps)) => {
                return Ok(HomVerdict::Inconclusive {
                    relator_index: idx,
                    reason: format!("rewriting cap of {steps} steps exceeded"),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(HomVerdict::Holds)
}

/// An element of `Z^m x (Z^n |x Z)`: `w` is the commuting block, `v` the
/// block the special generator inverts, `k` the special exponent.
/// Multiplication: `(w,v,k)(w',v',k') = (w+w', v+(-1)^k v', k+k')`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliqueGroupElement {
    pub w: Vec<i64>,
    pub v: Vec<i64>,
    pub k: i64,
}

impl CliqueGroupElement {
    pub fn identity(m: usize, n: usize) -> Self {
        CliqueGroupElement {
            w: vec![0; m],
            v: vec![0; n],
            k: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0 && self.w.iter().all(|&x| x == 0) && self.v.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &CliqueGroupElement) -> Result<CliqueGroupElement> {
        if self.w.len() != other.w.len() || self.v.len() != other.v.len() {
            return Err(Error::Domain(format!(
                "element shapes ({},{}) and ({},{}) differ",
                self.w.len(),
                self.v.len(),
                other.w.len(),
                other.v.len()
            )));
        }
        let sign = if self.k % 2 == 0 { 1 } else { -1 };
        Ok(CliqueGroupElement {
            w: self
                .w
                .iter()
                .zip(&other.w)
                .map(|(a, b)| a + b)
                .collect(),
            v: self
                .v
                .iter()
                .zip(&other.v)
                .map(|(a, b)| a + sign * b)
                .collect(),
            k: self.k + other.k,
        })
    }

    pub fn inverse(&self) -> CliqueGroupElement {
        let sign = if self.k % 2 == 0 { 1 } else { -1 };
        CliqueGroupElement {
            w: self.w.iter().map(|a| -a).collect(),
            v: self.v.iter().map(|a| -sign * a).collect(),
            k: -self.k,
        }
    }

    pub fn commutes_with(&self, other: &CliqueGroupElement) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }
}

impl fmt::Display for CliqueGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[i64]| {
            xs.iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({}; {}; {})", join(&self.w), join(&self.v), self.k)
    }
}

/// Exact arithmetic for the group of a complete special graph. The
/// vertices split into the commuting normal part (joined to the special
/// vertex, if any, by normal edges), the flipped part (origins of
/// special edges), and at most one special vertex.
#[derive(Debug, Clone)]
pub struct CliqueGroup {
    graph: SpecialGraph,
    commuting: Vec<usize>,
    flipped: Vec<usize>,
    special: Option<usize>,
}

impl CliqueGroup {
    pub fn new(graph: &SpecialGraph) -> Result<Self> {
        graph.require_valid()?;
        let n = graph.vertex_count();
        let naive = graph.naive();
        if naive.edges().len() != n * (n - 1) / 2 {
            return Err(Error::UnsupportedShape(
                "clique arithmetic needs a complete graph".into(),
            ));
        }
        let specials = graph.special_vertices();
        let special = specials.first().copied();
        let origins: BTreeSet<usize> = graph.special_edges().iter().map(|&(o, _)| o).collect();
        let order = generator_order(graph);
        let flipped: Vec<usize> = order
            .iter()
            .copied()
            .filter(|v| origins.contains(v))
            .collect();
        let commuting: Vec<usize> = order
            .iter()
            .copied()
            .filter(|v| !origins.contains(v) && Some(*v) != special)
            .collect();
        Ok(CliqueGroup {
            graph: graph.clone(),
            commuting,
            flipped,
            special,
        })
    }

    pub fn graph(&self) -> &SpecialGraph {
        &self.graph
    }

    /// Size of the commuting block.
    pub fn m(&self) -> usize {
        self.commuting.len()
    }

    /// Size of the flipped block.
    pub fn n(&self) -> usize {
        self.flipped.len()
    }

    pub fn special_vertex(&self) -> Option<usize> {
        self.special
    }

    pub fn identity(&self) -> CliqueGroupElement {
        CliqueGroupElement::identity(self.m(), self.n())
    }

    /// The element of a single generator `vertex^exponent`.
    pub fn generator_element(&self, vertex: usize, exponent: i64) -> Result<CliqueGroupElement> {
        let mut e = self.identity();
        if Some(vertex) == self.special {
            e.k = exponent;
        } else if let Some(i) = self.flipped.iter().position(|&v| v == vertex) {
            e.v[i] = exponent;
        } else if let Some(i) = self.commuting.iter().position(|&v| v == vertex) {
            e.w[i] = exponent;
        } else {
            return Err(Error::Domain(format!(
                "vertex {vertex} is not a generator of this clique group"
            )));
        }
        Ok(e)
    }

    /// Evaluates a word over the graph's vertices by successive right
    /// multiplication; a homomorphism from words to the group.
    pub fn word_to_element(&self, word: &Word) -> Result<CliqueGroupElement> {
        let mut acc = self.identity();
        for &(g, e) in word.letters() {
            acc = acc.mul(&self.generator_element(g, e)?)?;
        }
        Ok(acc)
    }

    /// The canonical word of an element: normal vertices in generator
    /// order with their exponents, then the special generator. Inverse
    /// to [`word_to_element`](Self::word_to_element), and equal to the
    /// rewriting fixpoint of any word evaluating to the element.
    pub fn element_to_word(&self, elem: &CliqueGroupElement) -> Result<Word> {
        if elem.w.len() != self.m() || elem.v.len() != self.n() {
            return Err(Error::Domain(format!(
                "element shape ({},{}) does not fit a ({},{}) clique group",
                elem.w.len(),
                elem.v.len(),
                self.m(),
                self.n()
            )));
        }
        let mut letters: Vec<(usize, i64)> = Vec::new();
        for &v in generator_order(&self.graph).iter() {
            if Some(v) == self.special {
                letters.push((v, elem.k));
            } else if let Some(i) = self.flipped.iter().position(|&f| f == v) {
                letters.push((v, elem.v[i]));
            } else if let Some(i) = self.commuting.iter().position(|&c| c == v) {
                letters.push((v, elem.w[i]));
            }
        }
        Ok(Word::new(letters))
    }

    /// True exactly when the word evaluates to the identity.
    pub fn word_is_identity(&self, word: &Word) -> Result<bool> {
        Ok(self.word_to_element(word)?.is_identity())
    }

    /// Generators of the center: the whole commuting block always, plus
    /// the square of the special generator when a flipped block exists;
    /// with no flipped block the group is free abelian and every
    /// generator is central. Each returned element is re-checked to
    /// commute with all generators.
    pub fn center(&self) -> Vec<CliqueGroupElement> {
        let mut gens = Vec::new();
        for i in 0..self.m() {
            let mut e = self.identity();
            e.w[i] = 1;
            gens.push(e);
        }
        if self.n() == 0 {
            if self.special.is_some() {
                let mut e = self.identity();
                e.k = 1;
                gens.push(e);
            }
        } else {
            let mut e = self.identity();
            e.k = 2;
            gens.push(e);
        }
        for g in &gens {
            assert!(
                self.commutation_witness(g).is_none(),
                "claimed center generator fails to commute"
            );
        }
        gens
    }

    /// A generator that fails to commute with the element, if any.
    pub fn commutation_witness(&self, elem: &CliqueGroupElement) -> Option<usize> {
        for &v in generator_order(&self.graph).iter() {
            let g = self
                .generator_element(v, 1)
                .expect("every vertex is a generator");
            if !elem.commutes_with(&g).expect("shapes match by construction") {
                return Some(v);
            }
        }
        None
    }
}

/// Invariant factors and free rank of the abelianized group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    /// Torsion orders > 1, each dividing the next.
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Abelianizes the graph's group. Commutator relators vanish; a special
/// edge `(o, t)` abelianizes to `2·o`, so the relation matrix has one
/// row `2·e_o` per special edge, and its integer normal form gives the
/// invariant factors.
pub fn abelianization(graph: &SpecialGraph) -> Result<Abelianization> {
    graph.require_valid()?;
    let n = graph.vertex_count();
    let rows: Vec<Vec<i64>> = graph
        .special_edges()
        .iter()
        .map(|&(o, _)| {
            let mut row = vec![0i64; n];
            row[o] = 2;
            row
        })
        .collect();
    if rows.is_empty() {
        return Ok(Abelianization {
            invariant_factors: Vec::new(),
            free_rank: n,
        });
    }
    let diag = util::smith_normal_form(rows);
    let nonzero = diag.iter().filter(|&&d| d != 0).count();
    let invariant_factors: Vec<u64> = diag
        .iter()
        .filter(|&&d| d.unsigned_abs() > 1)
        .map(|&d| d.unsigned_abs())
        .collect();
    Ok(Abelianization {
        invariant_factors,
        free_rank: n - nonzero,
    })
}

/// The right-angled Coxeter quotient's presentation on the naive graph:
/// every generator is an involution, adjacent generators commute. The
/// graph's group projects onto it generator-by-generator.
pub fn racg_projection(graph: &SpecialGraph) -> Result<Presentation> {
    graph.require_valid()?;
    let order = generator_order(graph);
    let pos = generator_positions(graph);
    let generators: Vec<String> = order
        .iter()
        .map(|&v| graph.vertex_name(v).to_string())
        .collect();
    let mut relators: Vec<Word> = (0..generators.len())
        .map(|g| Word::one(g, 2))
        .collect();
    let mut pairs: Vec<(usize, usize)> = graph
        .naive()
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (pos[u], pos[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    for (a, b) in pairs {
        relators.push(Word::new(vec![(a, 1), (b, 1), (a, -1), (b, -1)]));
    }
    Ok(Presentation {
        generators,
        relators,
    })
}

/// Order of the Coxeter quotient for a complete graph, by enumerating
/// the group: all generators commute and square to one, so elements are
/// generator subsets and multiplication is symmetric difference. The
/// count is reached by closure from the identity rather than assumed.
pub fn racg_order_by_enumeration(graph: &SpecialGraph) -> Result<u64> {
    graph.require_valid()?;
    let n = graph.vertex_count();
    let naive = graph.naive();
    if naive.edges().len() != n * (n - 1) / 2 {
        return Err(Error::UnsupportedShape(
            "Coxeter order enumeration needs a complete graph".into(),
        ));
    }
    if n > 20 {
        return Err(Error::Domain(format!(
            "enumeration of 2^{n} elements is beyond desk scale"
        )));
    }
    let mut seen = vec![false; 1usize << n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 0u64;
    while let Some(state) = stack.pop() {
        count += 1;
        for g in 0..n {
            let next = state ^ (1 << g);
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    Ok(count)
}

/// Evidence that the even-exponent subgroup generated by the squares of
/// the generators is a copy of `Z^{m+n+s}` of index `2^{m+n+s}`.
#[derive(Debug, Clone)]
pub struct EmbeddingReport {
    pub generator_count: usize,
    /// Squares of distinct small exponent vectors stay distinct.
    pub box_injective: bool,
    /// Every generator's square has all exponents even.
    pub images_in_kernel: bool,
    /// Cosets of the even-exponent subgroup, counted by closure.
    pub coset_count: u64,
    /// Order of the Coxeter quotient, counted independently.
    pub coxeter_order: u64,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.box_injective && self.images_in_kernel && self.coset_count == self.coxeter_order
    }
}

/// Checks, for a complete graph, that mapping each generator to its
/// square embeds a free abelian group of full rank whose index equals
/// the Coxeter quotient's order.
///
/// Exponent parity is multiplicative here because `(-1)^k v'` has the
/// parity of `v'`, so reducing `(w, v, k)` componentwise mod 2 is a
/// homomorphism onto the Coxeter quotient; the coset closure below
/// enumerates its image explicitly.
pub fn embedding_index_check(clique: &CliqueGroup) -> Result<EmbeddingReport> {
    let graph = clique.graph();
    let order = generator_order(graph);
    let r = order.len();
    let squares: Vec<CliqueGroupElement> = order
        .iter()
        .map(|&v| {
            let g = clique.generator_element(v, 1)?;
            g.mul(&g)
        })
        .collect::<Result<_>>()?;

    let images_in_kernel = squares.iter().all(|e| {
        e.k % 2 == 0 && e.w.iter().all(|x| x % 2 == 0) && e.v.iter().all(|x| x % 2 == 0)
    });

    let mut box_injective = true;
    if r <= 8 {
        let mut seen = BTreeSet::new();
        let mut exps = vec![-1i64; r];
        loop {
            let mut acc = clique.identity();
            for (i, &e) in exps.iter().enumerate() {
                acc = acc.mul(&squares[i].clone().pow_elem(e))?;
            }
            if !seen.insert((acc.w.clone(), acc.v.clone(), acc.k)) {
                box_injective = false;
                break;
            }
            let mut i = 0;
            loop {
                if i == r {
                    break;
                }
                exps[i] += 1;
                if exps[i] <= 1 {
                    break;
                }
                exps[i] = -1;
                i += 1;
            }
            if i == r {
                break;
            }
        }
    }

    let parity = |e: &CliqueGroupElement| -> Vec<u8> {
        e.w.iter()
            .chain(e.v.iter())
            .chain(std::iter::once(&e.k))
            .map(|&x| (x.rem_euclid(2)) as u8)
            .collect()
    };
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut stack = vec![clique.identity()];
    seen.insert(parity(&clique.identity()));
    while let Some(state) = stack.pop() {
        for &v in &order {
            let next = state.mul(&clique.generator_element(v, 1)?)?;
            if seen.insert(parity(&next)) {
                stack.push(next);
            }
        }
    }
    let coset_count = seen.len() as u64;
    let coxeter_order = racg_order_by_enumeration(graph)?;

    Ok(EmbeddingReport {
        generator_count: r,
        box_injective,
        images_in_kernel,
        coset_count,
        coxeter_order,
    })
}

impl CliqueGroupElement {
    fn pow_elem(&self, e: i64) -> CliqueGroupElement {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = CliqueGroupElement::identity(self.w.len(), self.v.len());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base).expect("same shape");
        }
        acc
    }
}
