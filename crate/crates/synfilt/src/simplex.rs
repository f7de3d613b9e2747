//! The simplex category: finite ordinals `[n]`, order-preserving maps,
//! composition, the face/degeneracy generators, and the canonical
//! epi-mono factorization of a map into a generator word.
//!
//! Morphisms are stored as explicit image vectors so that equality is
//! structural and O(n); generator words are a derived normal form.
//! All values are immutable after construction and safe to share
//! across threads.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite ordinal `[n] = {0, 1, …, n}`, an object of the simplex category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordinal(usize);

impl Ordinal {
    pub fn new(n: usize) -> Self {
        Ordinal(n)
    }

    /// The top element; `[n]` has `n + 1` elements.
    pub fn n(self) -> usize {
        self.0
    }

    /// Number of elements, `n + 1`.
    pub fn size(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// An order-preserving map `[source_n] → [target_n]`, stored as its
/// image vector: `image[k]` is where `k` goes.
///
/// Invariants enforced at construction: the image has `source_n + 1`
/// entries, each entry lies in `[target_n]`, and entries are weakly
/// increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderPreservingMap {
    source: Ordinal,
    target: Ordinal,
    image: Vec<usize>,
}

impl OrderPreservingMap {
    pub fn new(source_n: usize, target_n: usize, image: Vec<usize>) -> Result<Self> {
        if image.len() != source_n + 1 {
            return Err(Error::InvalidMap(format!(
                "image has {} entries, expected {} for source [{}]",
                image.len(),
                source_n + 1,
                source_n
            )));
        }
        for (k, &v) in image.iter().enumerate() {
            if v > target_n {
                return Err(Error::InvalidMap(format!(
                    "image[{k}] = {v} exceeds target [{target_n}]"
                )));
            }
            if k > 0 && image[k - 1] > v {
                return Err(Error::InvalidMap(format!(
                    "image is not weakly increasing at position {k}"
                )));
            }
        }
        Ok(OrderPreservingMap {
            source: Ordinal(source_n),
            target: Ordinal(target_n),
            image,
        })
    }

    /// Identity on `[n]`, stored as the explicit image vector `(0, …, n)`.
    pub fn identity(n: usize) -> Self {
        OrderPreservingMap {
            source: Ordinal(n),
            target: Ordinal(n),
            image: (0..=n).collect(),
        }
    }

    /// The coface δⁿᵢ : `[n−1] → [n]`, the injection that misses the
    /// value `i` in the target. Requires `n ≥ 1` and `0 ≤ i ≤ n`.
    pub fn face(n: usize, i: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("face generator needs n >= 1".into()));
        }
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let image = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
        Ok(OrderPreservingMap {
            source: Ordinal(n - 1),
            target: Ordinal(n),
            image,
        })
    }

    /// The codegeneracy σⁿⱼ : `[n+1] → [n]`, the surjection sending
    /// both `j` and `j+1` to `j`. Requires `0 ≤ j ≤ n`.
    pub fn degeneracy(n: usize, j: usize) -> Result<Self> {
        if j > n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        let image = (0..=n + 1)
            .map(|k| if k <= j { k } else { k - 1 })
            .collect();
        Ok(OrderPreservingMap {
            source: Ordinal(n + 1),
            target: Ordinal(n),
            image,
        })
    }

    pub fn source(&self) -> Ordinal {
        self.source
    }

    pub fn target(&self) -> Ordinal {
        self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Where `k` is sent, or `None` if `k` is outside the source.
    pub fn apply(&self, k: usize) -> Option<usize> {
        self.image.get(k).copied()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.image.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `g.compose(&f)` is the composite `g ∘ f` (apply `f` first).
    /// Fails unless `f`'s target equals `g`'s source.
    pub fn compose(&self, inner: &OrderPreservingMap) -> Result<Self> {
        if inner.target != self.source {
            return Err(Error::NotComposable(format!(
                "inner map lands in {}, outer map starts at {}",
                inner.target, self.source
            )));
        }
        let image = inner.image.iter().map(|&k| self.image[k]).collect();
        Ok(OrderPreservingMap {
            source: inner.source,
            target: self.target,
            image,
        })
    }

    /// Canonical epi-mono factorization: degeneracies applied first with
    /// decreasing `j`, then faces with increasing `i`. The composite of
    /// the returned word equals `self` exactly; identities give the
    /// empty word.
    pub fn factorize(&self) -> GeneratorWord {
        let n = self.source.n();
        let m = self.target.n();

        // Degenerate positions: k with image[k] == image[k+1].
        let duplicates: Vec<usize> = (0..n)
            .filter(|&k| self.image[k] == self.image[k + 1])
            .collect();
        let t = duplicates.len();

        let mut generators = Vec::with_capacity(t + m);
        for (idx, &j) in duplicates.iter().enumerate().rev() {
            // Collapse from the top down so lower duplicate positions
            // keep their indices.
            generators.push(Generator::Degeneracy {
                n: n - (t - idx),
                j,
            });
        }

        // Missed target values, inserted from the bottom up.
        let mut hit = vec![false; m + 1];
        for &v in &self.image {
            hit[v] = true;
        }
        let r = n - t;
        let mut step = 0;
        for (v, &was_hit) in hit.iter().enumerate() {
            if !was_hit {
                step += 1;
                generators.push(Generator::Face { n: r + step, i: v });
            }
        }

        GeneratorWord {
            source: self.source,
            generators,
        }
    }
}

impl fmt::Display for OrderPreservingMap {
    /// Textual form `n->m:[a0,a1,...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.image.iter().map(usize::to_string).collect();
        write!(
            f,
            "{}->{}:[{}]",
            self.source.n(),
            self.target.n(),
            entries.join(",")
        )
    }
}

impl FromStr for OrderPreservingMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected n->m:[a0,a1,...], got {s:?}"));
        let (dims, image_part) = s.split_once(':').ok_or_else(bad)?;
        let (src, dst) = dims.split_once("->").ok_or_else(bad)?;
        let source_n: usize = src.trim().parse().map_err(|_| bad())?;
        let target_n: usize = dst.trim().parse().map_err(|_| bad())?;
        let inner = image_part
            .trim()
            .strip_prefix('[')
            .and_then(|v| v.strip_suffix(']'))
            .ok_or_else(bad)?;
        let image = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|tok| tok.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<usize>>>()?
        };
        OrderPreservingMap::new(source_n, target_n, image)
    }
}

/// A single face or degeneracy generator.
///
/// `Face { n, i }` is δⁿᵢ : `[n−1] → [n]`; `Degeneracy { n, j }` is
/// σⁿⱼ : `[n+1] → [n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Face { n: usize, i: usize },
    Degeneracy { n: usize, j: usize },
}

impl Generator {
    pub fn source(&self) -> Ordinal {
        match *self {
            Generator::Face { n, .. } => Ordinal(n - 1),
            Generator::Degeneracy { n, .. } => Ordinal(n + 1),
        }
    }

    pub fn target(&self) -> Ordinal {
        match *self {
            Generator::Face { n, .. } | Generator::Degeneracy { n, .. } => Ordinal(n),
        }
    }

    pub fn to_map(&self) -> Result<OrderPreservingMap> {
        match *self {
            Generator::Face { n, i } => OrderPreservingMap::face(n, i),
            Generator::Degeneracy { n, j } => OrderPreservingMap::degeneracy(n, j),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Face { n, i } => write!(f, "d^{n}_{i}"),
            Generator::Degeneracy { n, j } => write!(f, "s^{n}_{j}"),
        }
    }
}

/// A composable sequence of generators anchored at a source object.
///
/// Generators are listed in application order: `generators[0]` is
/// applied first. An empty word denotes the identity on `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    source: Ordinal,
    generators: Vec<Generator>,
}

impl GeneratorWord {
    pub fn empty(source: Ordinal) -> Self {
        GeneratorWord {
            source,
            generators: Vec::new(),
        }
    }

    /// Validates index ranges and that adjacent generators compose.
    pub fn new(source: Ordinal, generators: Vec<Generator>) -> Result<Self> {
        let mut at = source;
        for g in &generators {
            match *g {
                Generator::Face { n, i } => {
                    if n == 0 || i > n {
                        return Err(Error::IndexOutOfRange { index: i, n });
                    }
                }
                Generator::Degeneracy { n, j } => {
                    if j > n {
                        return Err(Error::IndexOutOfRange { index: j, n });
                    }
                }
            }
            if g.source() != at {
                return Err(Error::NotComposable(format!(
                    "generator {g} starts at {}, expected {at}",
                    g.source()
                )));
            }
            at = g.target();
        }
        Ok(GeneratorWord { source, generators })
    }

    pub fn source(&self) -> Ordinal {
        self.source
    }

    pub fn target(&self) -> Ordinal {
        self.generators
            .last()
            .map_or(self.source, Generator::target)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The composite map of the word; the empty word yields the identity.
    pub fn recompose(&self) -> OrderPreservingMap {
        let mut acc = OrderPreservingMap::identity(self.source.n());
        for g in &self.generators {
            let step = g.to_map().expect("word generators are validated");
            acc = step.compose(&acc).expect("word generators are composable");
        }
        acc
    }
}

/// Enumerates every order-preserving map `[source_n] → [target_n]`
/// (all weakly increasing image vectors), in lexicographic order.
pub fn all_maps(source_n: usize, target_n: usize) -> Vec<OrderPreservingMap> {
    use itertools::Itertools;
    (0..=target_n)
        .combinations_with_replacement(source_n + 1)
        .map(|image| {
            OrderPreservingMap::new(source_n, target_n, image)
                .expect("enumerated images are weakly increasing")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(s: &str) -> OrderPreservingMap {
        s.parse().unwrap()
    }

    #[test]
    fn face_generator_examples() {
        assert_eq!(OrderPreservingMap::face(2, 1).unwrap(), map("1->2:[0,2]"));
        assert_eq!(OrderPreservingMap::face(1, 0).unwrap(), map("0->1:[1]"));
        assert_eq!(OrderPreservingMap::face(3, 3).unwrap(), map("2->3:[0,1,2]"));
        assert!(OrderPreservingMap::face(2, 3).is_err());
        assert!(OrderPreservingMap::face(0, 0).is_err());
    }

    #[test]
    fn degeneracy_generator_examples() {
        assert_eq!(
            OrderPreservingMap::degeneracy(1, 0).unwrap(),
            map("2->1:[0,0,1]")
        );
        assert_eq!(
            OrderPreservingMap::degeneracy(0, 0).unwrap(),
            map("1->0:[0,0]")
        );
        assert_eq!(
            OrderPreservingMap::degeneracy(2, 2).unwrap(),
            map("3->2:[0,1,2,2]")
        );
        assert!(OrderPreservingMap::degeneracy(2, 3).is_err());
    }

    #[test]
    fn compose_worked_example() {
        // δ²₁ ∘ σ¹₀ ∘ σ²₂ : [3] → [2]
        let d21 = OrderPreservingMap::face(2, 1).unwrap();
        let s10 = OrderPreservingMap::degeneracy(1, 0).unwrap();
        let s22 = OrderPreservingMap::degeneracy(2, 2).unwrap();
        let composite = d21.compose(&s10).unwrap().compose(&s22).unwrap();
        assert_eq!(composite, map("3->2:[0,0,2,2]"));
    }

    #[test]
    fn compose_identity_laws() {
        let f = map("3->2:[0,0,2,2]");
        let id2 = OrderPreservingMap::identity(2);
        let id3 = OrderPreservingMap::identity(3);
        assert_eq!(id2.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&id3).unwrap(), f);
    }

    #[test]
    fn compose_mixed_identity_case() {
        // σ¹₀ ∘ δ²₁ = id on [1] (the i = j+1 case).
        let s10 = OrderPreservingMap::degeneracy(1, 0).unwrap();
        let d21 = OrderPreservingMap::face(2, 1).unwrap();
        assert!(s10.compose(&d21).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_mismatched_objects() {
        let f = OrderPreservingMap::face(2, 0).unwrap(); // [1] -> [2]
        let g = OrderPreservingMap::face(2, 1).unwrap(); // [1] -> [2]
        assert!(g.compose(&f).is_err());
    }

    #[test]
    fn factorize_worked_example() {
        let f = map("3->2:[0,0,2,2]");
        let word = f.factorize();
        assert_eq!(
            word.generators(),
            &[
                Generator::Degeneracy { n: 2, j: 2 },
                Generator::Degeneracy { n: 1, j: 0 },
                Generator::Face { n: 2, i: 1 },
            ]
        );
        assert_eq!(word.recompose(), f);
    }

    #[test]
    fn factorize_identity_is_empty() {
        for n in 0..=4 {
            let word = OrderPreservingMap::identity(n).factorize();
            assert!(word.is_empty());
            assert!(word.recompose().is_identity());
        }
    }

    #[test]
    fn factorize_single_face() {
        let d32 = OrderPreservingMap::face(3, 2).unwrap();
        let word = d32.factorize();
        assert_eq!(word.generators(), &[Generator::Face { n: 3, i: 2 }]);
    }

    #[test]
    fn recompose_examples() {
        let empty = GeneratorWord::empty(Ordinal::new(4));
        assert!(empty.recompose().is_identity());

        let single =
            GeneratorWord::new(Ordinal::new(1), vec![Generator::Face { n: 2, i: 1 }]).unwrap();
        assert_eq!(single.recompose(), OrderPreservingMap::face(2, 1).unwrap());

        let word = GeneratorWord::new(
            Ordinal::new(3),
            vec![
                Generator::Degeneracy { n: 2, j: 2 },
                Generator::Degeneracy { n: 1, j: 0 },
                Generator::Face { n: 2, i: 1 },
            ],
        )
        .unwrap();
        assert_eq!(word.recompose(), map("3->2:[0,0,2,2]"));
    }

    #[test]
    fn word_rejects_non_composable() {
        let result = GeneratorWord::new(
            Ordinal::new(1),
            vec![
                Generator::Face { n: 2, i: 0 },
                Generator::Face { n: 4, i: 1 },
            ],
        );
        assert!(result.is_err());
    }

    #[test]
    fn simplicial_identities_exhaustive() {
        // δⁿⱼ ∘ δⁿ⁻¹ᵢ = δⁿᵢ ∘ δⁿ⁻¹ⱼ₋₁ for 0 ≤ i < j ≤ n.
        for n in 2..=6 {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = OrderPreservingMap::face(n, j)
                        .unwrap()
                        .compose(&OrderPreservingMap::face(n - 1, i).unwrap())
                        .unwrap();
                    let rhs = OrderPreservingMap::face(n, i)
                        .unwrap()
                        .compose(&OrderPreservingMap::face(n - 1, j - 1).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs, "delta-delta failed at n={n} i={i} j={j}");
                }
            }
        }
        // σⁿ⁻¹ⱼ ∘ σⁿᵢ = σⁿ⁻¹ᵢ ∘ σⁿⱼ₊₁ for 0 ≤ i ≤ j ≤ n−1.
        for n in 1..=6 {
            for j in 0..n {
                for i in 0..=j {
                    let lhs = OrderPreservingMap::degeneracy(n - 1, j)
                        .unwrap()
                        .compose(&OrderPreservingMap::degeneracy(n, i).unwrap())
                        .unwrap();
                    let rhs = OrderPreservingMap::degeneracy(n - 1, i)
                        .unwrap()
                        .compose(&OrderPreservingMap::degeneracy(n, j + 1).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs, "sigma-sigma failed at n={n} i={i} j={j}");
                }
            }
        }
        // σⁿⱼ ∘ δⁿ⁺¹ᵢ, the three-case identity.
        for n in 1..=6 {
            for i in 0..=n + 1 {
                for j in 0..=n {
                    let lhs = OrderPreservingMap::degeneracy(n, j)
                        .unwrap()
                        .compose(&OrderPreservingMap::face(n + 1, i).unwrap())
                        .unwrap();
                    let rhs = if i < j {
                        OrderPreservingMap::face(n, i)
                            .unwrap()
                            .compose(&OrderPreservingMap::degeneracy(n - 1, j - 1).unwrap())
                            .unwrap()
                    } else if i == j || i == j + 1 {
                        OrderPreservingMap::identity(n)
                    } else {
                        OrderPreservingMap::face(n, i - 1)
                            .unwrap()
                            .compose(&OrderPreservingMap::degeneracy(n - 1, j).unwrap())
                            .unwrap()
                    };
                    assert_eq!(lhs, rhs, "sigma-delta failed at n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn factorization_round_trips_exhaustively() {
        for a in 0..=4 {
            for b in 0..=4 {
                for f in all_maps(a, b) {
                    let word = f.factorize();
                    assert_eq!(word.recompose(), f, "round trip failed for {f}");
                }
            }
        }
    }

    #[test]
    fn composition_is_associative_on_small_objects() {
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    for d in 0..=3 {
                        for f in all_maps(a, b) {
                            for g in all_maps(b, c) {
                                for h in all_maps(c, d) {
                                    let left = h.compose(&g).unwrap().compose(&f).unwrap();
                                    let right = h.compose(&g.compose(&f).unwrap()).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_round_trip() {
        let f = map("3->2:[0,0,2,2]");
        assert_eq!(f.to_string(), "3->2:[0,0,2,2]");
        assert_eq!(map(&f.to_string()), f);
    }

    #[test]
    fn rejects_malformed_maps() {
        assert!(OrderPreservingMap::new(1, 2, vec![0]).is_err()); // short image
        assert!(OrderPreservingMap::new(1, 2, vec![0, 3]).is_err()); // out of range
        assert!(OrderPreservingMap::new(1, 2, vec![2, 0]).is_err()); // decreasing
        assert!("2->1:[0,2,1]".parse::<OrderPreservingMap>().is_err());
        assert!("nonsense".parse::<OrderPreservingMap>().is_err());
    }
}
