//! Deterministic permutation and free-group engine.
//!
//! Composition is left-to-right everywhere: `p.compose(&q)` applies `p`
//! first, then `q`. Points are 1-based, matching cycle-notation
//! literature. Group closures are materialized as element lists in a
//! deterministic breadth-first order so downstream reports are
//! reproducible.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of elements a closure may materialize.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// A permutation of `{1..d}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree >= 1, "degree must be at least 1");
        Permutation {
            images: (1..=degree).collect(),
        }
    }

    /// Builds a permutation from a 1-based image array, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::NotABijection(images));
        }
        let mut seen = vec![false; d];
        for &x in &images {
            if x < 1 || x > d || seen[x - 1] {
                return Err(Error::NotABijection(images));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint-cycle notation such as `"(1 2 3)(4 5)"` or `"id"`.
    /// Points not mentioned are fixed; `degree` fixes the ambient size.
    pub fn from_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=degree).collect();
        let t = s.trim();
        if t.is_empty() || t == "id" || t == "()" || t == "e" {
            return Permutation::from_images(images);
        }
        let mut rest = t;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::InvalidInput(format!("bad cycle string '{s}'")))?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::InvalidInput(format!("bad cycle string '{s}'")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::InvalidInput(format!("unclosed cycle in '{s}'")))?;
            let body = &rest[open + 1..close];
            let pts: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad point '{x}' in '{s}'")))
                })
                .collect::<Result<_>>()?;
            for &p in &pts {
                if p < 1 || p > degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
            }
            for w in 0..pts.len() {
                let from = pts[w];
                let to = pts[(w + 1) % pts.len()];
                images[from - 1] = to;
            }
            rest = &rest[close + 1..];
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Left-to-right composition: the result applies `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        let images = self.images.iter().map(|&x| other.images[x - 1]).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).map(|p| p.is_identity()).unwrap_or(false)
    }

    /// Disjoint cycles, each rotated to start at its minimum, sorted by minimum.
    /// Fixed points are included as singleton cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 1..=d {
            if seen[start - 1] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start - 1] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x - 1] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Number of fixed points.
    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| x == i + 1)
            .count()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        for cyc in self.cycles() {
            if cyc.len() > 1 {
                write!(f, "(")?;
                for (i, p) in cyc.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

/// All permutations of `{1..d}` in lexicographic order of image arrays.
pub fn all_permutations(degree: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let d = used.len();
        if prefix.len() == d {
            out.push(Permutation {
                images: prefix.clone(),
            });
            return;
        }
        for x in 1..=d {
            if !used[x - 1] {
                used[x - 1] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; degree], &mut out);
    out
}

/// A word in the free group on generators `x_1..x_n`, stored as signed
/// 1-based generator indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    letters: Vec<i64>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: vec![] }
    }

    pub fn generator(j: usize) -> Self {
        assert!(j >= 1);
        Word {
            letters: vec![j as i64],
        }
    }

    pub fn from_letters(letters: Vec<i64>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::GeneratorOutOfRange(0, 0));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Free reduction: cancels adjacent inverse pairs.
    pub fn reduce(&self) -> Word {
        let mut stack: Vec<i64> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last().is_some_and(|&t| t == -l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Homomorphic evaluation of a word under a generator assignment.
/// The empty word maps to the identity of the assignment's degree.
pub fn word_image(w: &Word, assignment: &[Permutation]) -> Result<Permutation> {
    let n = assignment.len();
    let degree = assignment
        .first()
        .map(|p| p.degree())
        .ok_or_else(|| Error::InvalidInput("empty assignment".into()))?;
    for p in assignment {
        if p.degree() != degree {
            return Err(Error::DegreeMismatch(degree, p.degree()));
        }
    }
    let mut acc = Permutation::identity(degree);
    for &l in &w.letters {
        let j = l.unsigned_abs() as usize;
        if j < 1 || j > n {
            return Err(Error::GeneratorOutOfRange(l, n));
        }
        let g = if l > 0 {
            assignment[j - 1].clone()
        } else {
            assignment[j - 1].inverse()
        };
        acc = acc.compose(&g)?;
    }
    Ok(acc)
}

/// The free group on `n` generators with `x_1 x_2 ... x_n` marked trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroupContext {
    pub n: usize,
}

impl FreeGroupContext {
    pub fn new(n: usize) -> Self {
        FreeGroupContext { n }
    }

    /// The marked relation `x_1 x_2 ... x_n`.
    pub fn relation(&self) -> Word {
        Word {
            letters: (1..=self.n as i64).collect(),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.letters
            .iter()
            .all(|&l| l.unsigned_abs() as usize >= 1 && l.unsigned_abs() as usize <= self.n)
    }
}

/// One element of a block permutation representation: one permutation per block.
pub type ElementTuple = Vec<Permutation>;

fn tuple_key(t: &[Permutation]) -> Vec<usize> {
    t.iter().flat_map(|p| p.images().iter().copied()).collect()
}

pub fn tuple_compose(a: &[Permutation], b: &[Permutation]) -> Result<ElementTuple> {
    if a.len() != b.len() {
        return Err(Error::DegreeMismatch(a.len(), b.len()));
    }
    a.iter().zip(b).map(|(p, q)| p.compose(q)).collect()
}

pub fn tuple_inverse(a: &[Permutation]) -> ElementTuple {
    a.iter().map(|p| p.inverse()).collect()
}

pub fn tuple_identity(degrees: &[usize]) -> ElementTuple {
    degrees.iter().map(|&d| Permutation::identity(d)).collect()
}

pub fn tuple_is_identity(a: &[Permutation]) -> bool {
    a.iter().all(|p| p.is_identity())
}

/// The image `G` of a block permutation representation, materialized as a
/// closed element list in deterministic breadth-first order (identity
/// first, then by generator index and insertion order).
#[derive(Clone, Debug)]
pub struct ImageGroup {
    degrees: Vec<usize>,
    generator_images: Vec<ElementTuple>,
    elements: Vec<ElementTuple>,
    /// Per element, a defining word as a sequence of 0-based generator indices.
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// Deterministic closure of generator tuples. All tuples must share block
/// degrees and the list must be nonempty.
pub fn group_closure(gens: &[ElementTuple], cap: usize) -> Result<ImageGroup> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidInput("empty generator list".into()))?;
    let degrees: Vec<usize> = first.iter().map(|p| p.degree()).collect();
    if degrees.is_empty() {
        return Err(Error::InvalidInput("generator tuple has no blocks".into()));
    }
    for g in gens {
        if g.len() != degrees.len() {
            return Err(Error::DegreeMismatch(g.len(), degrees.len()));
        }
        for (p, &d) in g.iter().zip(&degrees) {
            if p.degree() != d {
                return Err(Error::DegreeMismatch(p.degree(), d));
            }
        }
    }
    ImageGroup::closure_from(degrees, gens.to_vec(), cap)
}

impl ImageGroup {
    /// The trivial group in the given block degrees (used when n = 0).
    pub fn trivial(degrees: Vec<usize>) -> Self {
        let id = tuple_identity(&degrees);
        let mut index = HashMap::new();
        index.insert(tuple_key(&id), 0);
        ImageGroup {
            degrees,
            generator_images: vec![],
            elements: vec![id],
            words: vec![vec![]],
            index,
        }
    }

    fn closure_from(
        degrees: Vec<usize>,
        generator_images: Vec<ElementTuple>,
        cap: usize,
    ) -> Result<Self> {
        let id = tuple_identity(&degrees);
        let mut elements = vec![id.clone()];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut index = HashMap::new();
        index.insert(tuple_key(&id), 0usize);
        let mut frontier = 0usize;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            let cur_word = words[frontier].clone();
            for (j, g) in generator_images.iter().enumerate() {
                let next = tuple_compose(&cur, g)?;
                let key = tuple_key(&next);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureLimit(cap));
                    }
                    e.insert(elements.len());
                    let mut w = cur_word.clone();
                    w.push(j);
                    elements.push(next);
                    words.push(w);
                }
            }
            frontier += 1;
        }
        // Inverses are guaranteed by finiteness; the identity sits at index 0.
        Ok(ImageGroup {
            degrees,
            generator_images,
            elements,
            words,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn blocks(&self) -> usize {
        self.degrees.len()
    }

    pub fn generator_images(&self) -> &[ElementTuple] {
        &self.generator_images
    }

    pub fn elements(&self) -> &[ElementTuple] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ElementTuple {
        &self.elements[i]
    }

    pub fn word_of(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn index_of(&self, t: &[Permutation]) -> Option<usize> {
        self.index.get(&tuple_key(t)).copied()
    }

    /// Product of elements by index, left-to-right.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let t = tuple_compose(&self.elements[a], &self.elements[b])
            .expect("elements of one group share degrees");
        *self
            .index
            .get(&tuple_key(&t))
            .expect("group closure is closed under composition")
    }

    pub fn inv(&self, a: usize) -> usize {
        let t = tuple_inverse(&self.elements[a]);
        *self
            .index
            .get(&tuple_key(&t))
            .expect("group closure is closed under inverse")
    }

    /// Checks that the generator images satisfy the marked relation
    /// `x_1 x_2 ... x_n = 1` in every block.
    pub fn satisfies_relation(&self) -> bool {
        let mut acc = tuple_identity(&self.degrees);
        for g in &self.generator_images {
            acc = tuple_compose(&acc, g).expect("consistent degrees");
        }
        tuple_is_identity(&acc)
    }

    /// Whether the projection to block `i` (0-based) is transitive.
    pub fn block_transitive(&self, block: usize) -> bool {
        let d = self.degrees[block];
        let mut seen = vec![false; d];
        seen[0] = true;
        let mut stack = vec![1usize];
        while let Some(x) = stack.pop() {
            for e in &self.elements {
                let y = e[block].apply(x);
                if !seen[y - 1] {
                    seen[y - 1] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// The right regular representation: for each generator, the
    /// permutation `g -> g * gen` of the element list (1-based points).
    pub fn right_regular_rep(&self) -> Vec<Permutation> {
        self.generator_images
            .iter()
            .map(|gen| {
                let gi = self.index_of(gen).expect("generators lie in the closure");
                let images = (0..self.order()).map(|e| self.mul(e, gi) + 1).collect();
                Permutation::from_images(images).expect("right multiplication is a bijection")
            })
            .collect()
    }

    /// Right multiplication by an arbitrary element, as a permutation of
    /// the element list.
    pub fn right_mul_perm(&self, by: usize) -> Permutation {
        let images = (0..self.order()).map(|e| self.mul(e, by) + 1).collect();
        Permutation::from_images(images).expect("right multiplication is a bijection")
    }
}

/// All `g` in `G` whose `block`-th projection fixes `point`, as indices
/// into the parent's deterministic element order.
pub fn point_stabilizer(group: &ImageGroup, block: usize, point: usize) -> Result<Vec<usize>> {
    if block >= group.blocks() {
        return Err(Error::InvalidInput(format!(
            "block {block} out of range ({} blocks)",
            group.blocks()
        )));
    }
    let d = group.degrees()[block];
    if point < 1 || point > d {
        return Err(Error::PointOutOfRange { point, degree: d });
    }
    Ok((0..group.order())
        .filter(|&i| group.element(i)[block].apply(point) == point)
        .collect())
}

/// True iff the closure of the union of the given subgroups is all of `G`.
/// Subgroups are given as element lists of the parent group.
pub fn is_generated_by(group: &ImageGroup, subgroups: &[Vec<ElementTuple>]) -> Result<bool> {
    let mut gen_idx: Vec<usize> = Vec::new();
    for sub in subgroups {
        for e in sub {
            let i = group.index_of(e).ok_or(Error::ForeignElement)?;
            gen_idx.push(i);
        }
    }
    Ok(closure_indices(group, &gen_idx).len() == group.order())
}

/// Index-based variant of [`is_generated_by`].
pub fn is_generated_by_indices(group: &ImageGroup, subgroups: &[Vec<usize>]) -> bool {
    let gens: Vec<usize> = subgroups.iter().flatten().copied().collect();
    closure_indices(group, &gens).len() == group.order()
}

/// Closure of a set of element indices inside a materialized group.
pub fn closure_indices(group: &ImageGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.order()];
    seen[group.identity_index()] = true;
    let mut out = vec![group.identity_index()];
    let mut frontier = 0usize;
    while frontier < out.len() {
        let cur = out[frontier];
        for &g in gens {
            let nxt = group.mul(cur, g);
            if !seen[nxt] {
                seen[nxt] = true;
                out.push(nxt);
            }
        }
        frontier += 1;
    }
    out.sort_unstable();
    out
}

/// Brute-force conjugacy test: true iff some `g` in `amb` has
/// `g^-1 a g = b` (all products left-to-right).
pub fn conjugate_in(a: &[Permutation], b: &[Permutation], amb: &[ElementTuple]) -> bool {
    for g in amb {
        let gi = tuple_inverse(g);
        let left = tuple_compose(&gi, a).and_then(|t| tuple_compose(&t, g));
        if let Ok(t) = left {
            if tuple_key(&t) == tuple_key(b) {
                return true;
            }
        }
    }
    false
}

/// The automorphism of `G` induced by a real structure, together with the
/// solution set `H = { h : alpha(h) * h = 1 }` that parametrizes the
/// involutive lifts on the regular cover.
#[derive(Clone, Debug)]
pub struct InducedAutomorphism {
    /// `table[i]` = index of `alpha(elements[i])`.
    pub table: Vec<usize>,
    /// Indices `h` with `alpha(h) * h = identity`; may be empty.
    pub h_set: Vec<usize>,
}

impl InducedAutomorphism {
    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }
}

/// Extends `rho(x_j) -> rho(sigma_words[j])` to an automorphism of `G`,
/// or reports that the assignment is inconsistent.
pub fn induced_automorphism(
    group: &ImageGroup,
    sigma_words: &[Word],
) -> Result<InducedAutomorphism> {
    let gens = group.generator_images();
    if sigma_words.len() != gens.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} sigma words, got {}",
            gens.len(),
            sigma_words.len()
        )));
    }
    // Image of each generator under alpha, evaluated blockwise.
    let mut alpha_gen: Vec<usize> = Vec::with_capacity(gens.len());
    for w in sigma_words {
        let mut blocks: ElementTuple = Vec::with_capacity(group.blocks());
        for b in 0..group.blocks() {
            let assignment: Vec<Permutation> = gens.iter().map(|g| g[b].clone()).collect();
            blocks.push(word_image(w, &assignment)?);
        }
        let idx = group.index_of(&blocks).ok_or_else(|| {
            Error::IllDefinedAutomorphism("sigma image escapes the group".into())
        })?;
        alpha_gen.push(idx);
    }
    // Define alpha along the BFS words, then verify it is a homomorphism.
    let mut table = vec![0usize; group.order()];
    #[allow(clippy::needless_range_loop)]
    for i in 0..group.order() {
        let mut acc = group.identity_index();
        for &j in group.word_of(i) {
            acc = group.mul(acc, alpha_gen[j]);
        }
        table[i] = acc;
    }
    for i in 0..group.order() {
        for (j, g) in gens.iter().enumerate() {
            let gj = group.index_of(g).expect("generator is in closure");
            let lhs = table[group.mul(i, gj)];
            let rhs = group.mul(table[i], alpha_gen[j]);
            if lhs != rhs {
                return Err(Error::IllDefinedAutomorphism(format!(
                    "two equal products have unequal sigma images (element {i}, generator {j})"
                )));
            }
        }
    }
    for i in 0..group.order() {
        if table[table[i]] != i {
            return Err(Error::IllDefinedAutomorphism(
                "induced map is not an involution".into(),
            ));
        }
    }
    let h_set = (0..group.order())
        .filter(|&h| group.mul(table[h], h) == group.identity_index())
        .collect();
    Ok(InducedAutomorphism { table, h_set })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> Permutation {
        Permutation::from_cycles(s, d).unwrap()
    }

    #[test]
    fn compose_convention() {
        // (1 2) composed with itself is the identity.
        let t = p("(1 2)", 2);
        assert!(t.compose(&t).unwrap().is_identity());
        // Identity laws.
        let c = p("(1 2 3)", 3);
        assert_eq!(Permutation::identity(3).compose(&c).unwrap(), c);
        assert_eq!(c.compose(&Permutation::identity(3)).unwrap(), c);
        // (1 2) then (1 2 3) = (1 3): forced by the left-to-right convention.
        let got = p("(1 2)", 3).compose(&p("(1 2 3)", 3)).unwrap();
        assert_eq!(got, p("(1 3)", 3));
    }

    #[test]
    fn compose_degree_mismatch() {
        let a = Permutation::identity(2);
        let b = Permutation::identity(3);
        assert!(matches!(a.compose(&b), Err(Error::DegreeMismatch(2, 3))));
    }

    #[test]
    fn word_image_examples() {
        let assignment = vec![p("(1 2 3)", 3), p("(1 3 2)", 3)];
        let w = Word::generator(1);
        assert_eq!(word_image(&w, &assignment).unwrap(), p("(1 2 3)", 3));
        // The marked relation x1 x2 evaluates to the identity here.
        let rel = Word::from_letters(vec![1, 2]).unwrap();
        assert!(word_image(&rel, &assignment).unwrap().is_identity());
        // x1 x2^-1 x1^-1: the assignment is abelian, so the image is
        // rho(x2)^-1 = (1 2 3).
        let w = Word::from_letters(vec![1, -2, -1]).unwrap();
        assert_eq!(word_image(&w, &assignment).unwrap(), p("(1 2 3)", 3));
        // Empty word.
        assert!(word_image(&Word::empty(), &assignment).unwrap().is_identity());
    }

    #[test]
    fn word_image_out_of_range() {
        let assignment = vec![Permutation::identity(2)];
        let w = Word::from_letters(vec![2]).unwrap();
        assert!(matches!(
            word_image(&w, &assignment),
            Err(Error::GeneratorOutOfRange(2, 1))
        ));
    }

    #[test]
    fn closure_single_involution() {
        let gens = vec![vec![p("(1 2)", 2), p("(1 2)", 2)]];
        let g = group_closure(&gens, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.block_transitive(0) && g.block_transitive(1));
    }

    #[test]
    fn closure_cycle_pair_order_15() {
        let gens = vec![vec![p("(1 2 3)", 3), p("(1 2 3 4 5)", 5)]];
        let g = group_closure(&gens, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(g.order(), 15);
    }

    #[test]
    fn closure_cap() {
        let gens = vec![vec![p("(1 2 3 4 5)", 5)], vec![p("(1 2)", 5)]];
        assert!(matches!(
            group_closure(&gens, 10),
            Err(Error::ClosureLimit(10))
        ));
    }

    fn e9_group() -> ImageGroup {
        let gens = vec![
            vec![p("(1 2 3)", 3), p("(1 2 3)", 3)],
            vec![p("(1 3 2)", 3), p("(1 2 3)", 3)],
            vec![p("(1 2 3)", 3), p("(1 3 2)", 3)],
            vec![p("(1 3 2)", 3), p("(1 3 2)", 3)],
        ];
        group_closure(&gens, DEFAULT_ELEMENT_CAP).unwrap()
    }

    #[test]
    fn e9_closure_order_9() {
        let g = e9_group();
        assert_eq!(g.order(), 9);
        assert!(g.satisfies_relation());
    }

    #[test]
    fn stabilizers() {
        let g = ImageGroup::trivial(vec![1]);
        assert_eq!(point_stabilizer(&g, 0, 1).unwrap(), vec![0]);

        let g = e9_group();
        let s = point_stabilizer(&g, 0, 1).unwrap();
        assert_eq!(s.len(), 3);
        for &i in &s {
            assert!(g.element(i)[0].is_identity());
        }

        let diag = group_closure(&[vec![p("(1 2)", 2), p("(1 2)", 2)]], 100).unwrap();
        assert_eq!(point_stabilizer(&diag, 0, 1).unwrap(), vec![0]);
    }

    #[test]
    fn orbit_stabilizer() {
        let g = e9_group();
        for block in 0..g.blocks() {
            for point in 1..=g.degrees()[block] {
                let stab = point_stabilizer(&g, block, point).unwrap();
                let orbit: std::collections::HashSet<usize> = (0..g.order())
                    .map(|i| g.element(i)[block].apply(point))
                    .collect();
                assert_eq!(stab.len() * orbit.len(), g.order());
            }
        }
    }

    #[test]
    fn generation() {
        let triv = ImageGroup::trivial(vec![1]);
        assert!(is_generated_by(&triv, &[vec![tuple_identity(&[1])]]).unwrap());

        let g = e9_group();
        let g1: Vec<ElementTuple> = point_stabilizer(&g, 0, 1)
            .unwrap()
            .iter()
            .map(|&i| g.element(i).clone())
            .collect();
        let g2: Vec<ElementTuple> = point_stabilizer(&g, 1, 1)
            .unwrap()
            .iter()
            .map(|&i| g.element(i).clone())
            .collect();
        assert_eq!(g1.len(), 3);
        assert_eq!(g2.len(), 3);
        assert!(is_generated_by(&g, &[g1, g2]).unwrap());

        // Klein four-group: a single order-2 subgroup does not generate.
        let klein = group_closure(
            &[vec![p("(1 2)", 4)], vec![p("(3 4)", 4)]],
            100,
        )
        .unwrap();
        let sub = vec![vec![p("(1 2)", 4)], vec![Permutation::identity(4)]];
        assert!(!is_generated_by(&klein, &[sub]).unwrap());

        // Foreign element is rejected.
        assert!(matches!(
            is_generated_by(&klein, &[vec![vec![p("(1 3)", 4)]]]),
            Err(Error::ForeignElement)
        ));
    }

    #[test]
    fn conjugacy() {
        let id = vec![Permutation::identity(3)];
        assert!(conjugate_in(&id, &id, std::slice::from_ref(&id)));
        let sym3: Vec<ElementTuple> = all_permutations(3).into_iter().map(|q| vec![q]).collect();
        assert!(conjugate_in(
            &[p("(1 2)", 3)],
            &[p("(1 3)", 3)],
            &sym3
        ));
        assert!(!conjugate_in(
            &[p("(1 2)", 3)],
            &[p("(1 2 3)", 3)],
            &sym3
        ));
    }

    #[test]
    fn induced_automorphism_cases() {
        // Trivial group.
        let triv = ImageGroup::trivial(vec![1]);
        let a = induced_automorphism(&triv, &[]).unwrap();
        assert_eq!(a.table, vec![0]);
        assert_eq!(a.h_set, vec![0]);

        // Z2 diagonal with sigma inverting the generator: alpha = id,
        // both elements solve alpha(h) h = 1.
        let z2 = group_closure(&[vec![p("(1 2)", 2), p("(1 2)", 2)]], 100).unwrap();
        let a = induced_automorphism(&z2, &[Word::from_letters(vec![-1]).unwrap()]).unwrap();
        assert_eq!(a.table, vec![0, 1]);
        assert_eq!(a.h_set, vec![0, 1]);

        // E9: inversion on Z3 x Z3, every element is a solution.
        let g = super::tests::e9_group();
        let ctx = FreeGroupContext::new(4);
        let sigma: Vec<Word> = (1..=4).map(|j| crate::realcover::sigma_star(&ctx, j).unwrap()).collect();
        let a = induced_automorphism(&g, &sigma).unwrap();
        for i in 0..g.order() {
            assert_eq!(a.table[i], g.inv(i));
        }
        assert_eq!(a.h_set.len(), 9);
    }

    #[test]
    fn induced_automorphism_ill_defined() {
        // S3 generated by (1 2 3) and its inverse; map x1 to (1 2): the
        // relation x1 x2 = 1 is not preserved.
        let g = group_closure(
            &[vec![p("(1 2 3)", 3)], vec![p("(1 3 2)", 3)], vec![p("(1 2)", 3)]],
            100,
        )
        .unwrap();
        let sigma = vec![
            Word::generator(3),
            Word::generator(3),
            Word::generator(1),
        ];
        assert!(induced_automorphism(&g, &sigma).is_err());
    }

    #[test]
    fn regular_rep_is_homomorphic() {
        let g = e9_group();
        let reg = g.right_regular_rep();
        assert_eq!(reg.len(), 4);
        let mut acc = Permutation::identity(g.order());
        for r in &reg {
            acc = acc.compose(r).unwrap();
        }
        assert!(acc.is_identity());
    }
}
