//! The standard geometric realizer: barycentric points of the standard
//! simplex, the covariant weight-transport of an order-preserving map,
//! and the concrete face/degeneracy maps acting on weight vectors.
//!
//! The face map with index 0 follows the cyclic convention: the 0th
//! weight is merged into the *last* output slot rather than the first.
//! This differs from the textbook simplicial face map, and the
//! simplicial identities are verified numerically rather than assumed.
//! Both `face_map` and `degeneracy_map` accept arbitrary nonnegative
//! vectors, not just probability weights, so the same formulas drive
//! Dirichlet parameter transport.
//!
//! Everything here is a pure function over immutable values.

use crate::error::{Error, Result};
use crate::simplex::OrderPreservingMap;

/// Allowed deviation of a weight vector's sum from 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// A point of the standard `n`-simplex: `n + 1` weights in `[0, 1]`
/// summing to 1 within [`WEIGHT_SUM_TOLERANCE`].
///
/// Constructors reject out-of-tolerance inputs; weights are never
/// silently re-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricPoint {
    weights: Vec<f64>,
}

impl BarycentricPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        let mut sum = 0.0;
        for (k, &w) in weights.iter().enumerate() {
            if !w.is_finite() || !(0.0..=1.0 + WEIGHT_SUM_TOLERANCE).contains(&w) {
                return Err(Error::InvalidWeights(format!(
                    "weight[{k}] = {w} is outside [0, 1]"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(BarycentricPoint { weights })
    }

    /// Dimension of the carrying simplex (`weights.len() - 1`).
    pub fn dimension(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

/// Covariant transport of a point along `f`: output weight `m` is the
/// sum of input weights over the fiber `f⁻¹{m}`.
pub fn covariant_map(f: &OrderPreservingMap, w: &BarycentricPoint) -> Result<BarycentricPoint> {
    if w.dimension() != f.source().n() {
        return Err(Error::DimensionMismatch(format!(
            "point lives on a {}-simplex, map starts at {}",
            w.dimension(),
            f.source()
        )));
    }
    let mut out = vec![0.0; f.target().size()];
    for (k, &wk) in w.weights().iter().enumerate() {
        out[f.image()[k]] += wk;
    }
    BarycentricPoint::new(out)
}

fn check_vector(n: usize, w: &[f64]) -> Result<()> {
    if w.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "vector has {} entries, expected {}",
            w.len(),
            n + 1
        )));
    }
    for (k, &x) in w.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidWeights(format!(
                "entry[{k}] = {x} must be finite and nonnegative"
            )));
        }
    }
    Ok(())
}

/// The face map dⁿᵢ on nonnegative vectors of length `n + 1`.
///
/// For `i > 0` the adjacent pair `(w[i-1], w[i])` is merged into slot
/// `i − 1`; for `i = 0` the vector is rotated down one slot and `w[0]`
/// is merged into the last slot. The entry sum is preserved.
pub fn face_map(n: usize, i: usize, w: &[f64]) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("face map needs n >= 1".into()));
    }
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    check_vector(n, w)?;
    let mut out = Vec::with_capacity(n);
    if i > 0 {
        out.extend_from_slice(&w[..i - 1]);
        out.push(w[i - 1] + w[i]);
        out.extend_from_slice(&w[i + 1..]);
    } else {
        out.extend_from_slice(&w[1..n]);
        out.push(w[n] + w[0]);
    }
    Ok(out)
}

/// The degeneracy map sⁿⱼ on nonnegative vectors of length `n + 1`:
/// inserts a zero at position `j`. The entry sum is preserved.
pub fn degeneracy_map(n: usize, j: usize, w: &[f64]) -> Result<Vec<f64>> {
    if j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    check_vector(n, w)?;
    let mut out = Vec::with_capacity(n + 2);
    out.extend_from_slice(&w[..j]);
    out.push(0.0);
    out.extend_from_slice(&w[j..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::all_maps;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(ws: &[f64]) -> BarycentricPoint {
        BarycentricPoint::new(ws.to_vec()).unwrap()
    }

    fn random_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
        let raw: Vec<f64> = (0..=n).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }

    #[test]
    fn constructor_rejects_bad_points() {
        assert!(BarycentricPoint::new(vec![]).is_err());
        assert!(BarycentricPoint::new(vec![0.5, 0.6]).is_err());
        assert!(BarycentricPoint::new(vec![-0.1, 1.1]).is_err());
        assert!(BarycentricPoint::new(vec![0.5, 0.5 + 1e-9]).is_err());
        assert!(BarycentricPoint::new(vec![0.5, 0.5]).is_ok());
        assert!(BarycentricPoint::new(vec![1.0]).is_ok());
    }

    #[test]
    fn covariant_map_examples() {
        let s10 = OrderPreservingMap::degeneracy(1, 0).unwrap();
        let out = covariant_map(&s10, &pt(&[0.2, 0.3, 0.5])).unwrap();
        assert_eq!(out.weights(), &[0.5, 0.5]);

        let id = OrderPreservingMap::identity(2);
        let w = pt(&[0.2, 0.3, 0.5]);
        assert_eq!(covariant_map(&id, &w).unwrap(), w);

        let d21 = OrderPreservingMap::face(2, 1).unwrap();
        let out = covariant_map(&d21, &pt(&[0.4, 0.6])).unwrap();
        assert_eq!(out.weights(), &[0.4, 0.0, 0.6]);
    }

    #[test]
    fn covariant_map_checks_dimensions() {
        let d21 = OrderPreservingMap::face(2, 1).unwrap();
        assert!(covariant_map(&d21, &pt(&[0.2, 0.3, 0.5])).is_err());
    }

    #[test]
    fn face_map_examples() {
        assert_eq!(face_map(2, 1, &[0.2, 0.3, 0.5]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(face_map(2, 0, &[0.2, 0.3, 0.5]).unwrap(), vec![0.3, 0.7]);
        assert_eq!(
            face_map(3, 3, &[0.1, 0.2, 0.3, 0.4]).unwrap(),
            vec![0.1, 0.2, 0.7]
        );
        assert!(face_map(2, 3, &[0.2, 0.3, 0.5]).is_err());
        assert!(face_map(2, 1, &[0.2, 0.3]).is_err());
        assert!(face_map(0, 0, &[1.0]).is_err());
    }

    #[test]
    fn degeneracy_map_examples() {
        assert_eq!(
            degeneracy_map(2, 1, &[0.2, 0.3, 0.5]).unwrap(),
            vec![0.2, 0.0, 0.3, 0.5]
        );
        assert_eq!(degeneracy_map(0, 0, &[1.0]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(
            degeneracy_map(1, 1, &[0.4, 0.6]).unwrap(),
            vec![0.4, 0.0, 0.6]
        );
        assert!(degeneracy_map(1, 2, &[0.4, 0.6]).is_err());
    }

    #[test]
    fn maps_preserve_entry_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..50 {
                let w = random_vector(n, &mut rng);
                let total: f64 = w.iter().sum();
                for i in 0..=n {
                    let out = face_map(n, i, &w).unwrap();
                    let got: f64 = out.iter().sum();
                    assert!((got - total).abs() <= 1e-14, "face n={n} i={i}");
                }
                for j in 0..=n {
                    let out = degeneracy_map(n, j, &w).unwrap();
                    let got: f64 = out.iter().sum();
                    assert!((got - total).abs() <= 1e-14, "degeneracy n={n} j={j}");
                }
            }
        }
    }

    /// The three simplicial-object identity families, checked on random
    /// points. Failures would be collected and printed as explicit
    /// counterexamples.
    #[test]
    fn realizer_identities_on_random_points() {
        const TOL: f64 = 1e-12;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut counterexamples: Vec<String> = Vec::new();

        let mut check = |name: &str, n: usize, i: usize, j: usize, lhs: &[f64], rhs: &[f64]| {
            let err = lhs
                .iter()
                .zip(rhs)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if err > TOL {
                counterexamples.push(format!("{name} n={n} i={i} j={j} err={err:e}"));
            }
        };

        for n in 2..=6 {
            for j in 1..=n {
                for i in 0..j {
                    for _ in 0..200 {
                        let w = random_vector(n, &mut rng);
                        let lhs = face_map(n - 1, i, &face_map(n, j, &w).unwrap()).unwrap();
                        let rhs = face_map(n - 1, j - 1, &face_map(n, i, &w).unwrap()).unwrap();
                        check("dd", n, i, j, &lhs, &rhs);
                    }
                }
            }
        }
        for n in 2..=6 {
            for j in 1..n {
                for i in 0..j {
                    for _ in 0..200 {
                        let w = random_vector(n - 1, &mut rng);
                        let lhs =
                            degeneracy_map(n, i, &degeneracy_map(n - 1, j, &w).unwrap()).unwrap();
                        let rhs = degeneracy_map(n, j + 1, &degeneracy_map(n - 1, i, &w).unwrap())
                            .unwrap();
                        check("ss", n, i, j, &lhs, &rhs);
                    }
                }
            }
        }
        for n in 1..=6 {
            for i in 0..=n + 1 {
                for j in 0..=n {
                    for _ in 0..200 {
                        let w = random_vector(n, &mut rng);
                        let lhs = face_map(n + 1, i, &degeneracy_map(n, j, &w).unwrap()).unwrap();
                        let rhs = if i < j {
                            degeneracy_map(n - 1, j - 1, &face_map(n, i, &w).unwrap()).unwrap()
                        } else if i == j || i == j + 1 {
                            w.clone()
                        } else {
                            degeneracy_map(n - 1, j, &face_map(n, i - 1, &w).unwrap()).unwrap()
                        };
                        check("ds", n, i, j, &lhs, &rhs);
                    }
                }
            }
        }

        for line in &counterexamples {
            eprintln!("counterexample: {line}");
        }
        assert!(counterexamples.is_empty());
    }

    #[test]
    fn covariant_map_is_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for a in 0..=4usize {
            for b in 0..=4usize {
                for c in 0..=4usize {
                    let fs = all_maps(a, b);
                    let gs = all_maps(b, c);
                    for _ in 0..10 {
                        let f = &fs[rng.gen_range(0..fs.len())];
                        let g = &gs[rng.gen_range(0..gs.len())];
                        let w = pt(&random_vector(a, &mut rng));
                        let direct = covariant_map(&g.compose(f).unwrap(), &w).unwrap();
                        let staged = covariant_map(g, &covariant_map(f, &w).unwrap()).unwrap();
                        for (x, y) in direct.weights().iter().zip(staged.weights()) {
                            assert!((x - y).abs() <= 1e-12);
                        }
                    }
                }
            }
        }
    }
}
