//! Finite probability spaces, null-preserving point maps, and exact
//! conditional expectation along a map, with the tower property checked
//! by direct summation.
//!
//! Conditional expectations on zero-mass target outcomes are set to 0,
//! a fixed representative of the almost-sure equivalence class, so
//! equality tests stay deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of total mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Tolerance for almost-sure comparisons of random variables.
pub const COMPARISON_TOLERANCE: f64 = 1e-12;

/// A finite probability space: labeled outcomes with nonnegative
/// masses summing to 1 within [`MASS_TOLERANCE`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceWire", into = "SpaceWire")]
pub struct FiniteProbSpace {
    labels: Vec<String>,
    mass: Vec<f64>,
}

impl FiniteProbSpace {
    pub fn new(outcomes: &[(&str, f64)]) -> Result<Self> {
        let labels = outcomes.iter().map(|(l, _)| (*l).to_owned()).collect();
        let mass = outcomes.iter().map(|&(_, m)| m).collect();
        FiniteProbSpace::from_parts(labels, mass)
    }

    pub fn from_parts(labels: Vec<String>, mass: Vec<f64>) -> Result<Self> {
        if labels.is_empty() || labels.len() != mass.len() {
            return Err(Error::InvalidSpace(
                "need equally many labels and masses, at least one outcome".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate outcome {label:?}")));
            }
        }
        let mut total = 0.0;
        for (idx, &m) in mass.iter().enumerate() {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidSpace(format!(
                    "mass of {:?} is {m}, must be finite and nonnegative",
                    labels[idx]
                )));
            }
            total += m;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidSpace(format!(
                "masses sum to {total}, expected 1"
            )));
        }
        Ok(FiniteProbSpace { labels, mass })
    }

    pub fn uniform(labels: &[&str]) -> Result<Self> {
        let m = 1.0 / labels.len() as f64;
        FiniteProbSpace::new(&labels.iter().map(|&l| (l, m)).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn mass_of(&self, idx: usize) -> f64 {
        self.mass[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceWire {
    outcomes: Vec<OutcomeWire>,
}

#[derive(Serialize, Deserialize)]
struct OutcomeWire {
    label: String,
    mass: f64,
}

impl TryFrom<SpaceWire> for FiniteProbSpace {
    type Error = Error;

    fn try_from(wire: SpaceWire) -> Result<Self> {
        let (labels, mass) = wire.outcomes.into_iter().map(|o| (o.label, o.mass)).unzip();
        FiniteProbSpace::from_parts(labels, mass)
    }
}

impl From<FiniteProbSpace> for SpaceWire {
    fn from(space: FiniteProbSpace) -> Self {
        SpaceWire {
            outcomes: space
                .labels
                .into_iter()
                .zip(space.mass)
                .map(|(label, mass)| OutcomeWire { label, mass })
                .collect(),
        }
    }
}

/// A total map between the outcome sets of two finite spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointMapWire", into = "PointMapWire")]
pub struct PointMap {
    source: FiniteProbSpace,
    target: FiniteProbSpace,
    assignment: Vec<usize>,
}

impl PointMap {
    pub fn new(
        source: FiniteProbSpace,
        target: FiniteProbSpace,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::InvalidSpace(format!(
                "assignment covers {} outcomes, source has {}",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&t| t >= target.len()) {
            return Err(Error::InvalidSpace(format!(
                "assignment hits outcome {bad}, target has {}",
                target.len()
            )));
        }
        Ok(PointMap {
            source,
            target,
            assignment,
        })
    }

    pub fn from_labels(
        source: FiniteProbSpace,
        target: FiniteProbSpace,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut assignment = vec![usize::MAX; source.len()];
        for &(from, to) in pairs {
            let s = source
                .index_of(from)
                .ok_or_else(|| Error::InvalidSpace(format!("unknown source outcome {from:?}")))?;
            let t = target
                .index_of(to)
                .ok_or_else(|| Error::InvalidSpace(format!("unknown target outcome {to:?}")))?;
            assignment[s] = t;
        }
        if assignment.contains(&usize::MAX) {
            return Err(Error::InvalidSpace("assignment is not total".into()));
        }
        PointMap::new(source, target, assignment)
    }

    pub fn identity(space: &FiniteProbSpace) -> Self {
        PointMap {
            source: space.clone(),
            target: space.clone(),
            assignment: (0..space.len()).collect(),
        }
    }

    pub fn source(&self) -> &FiniteProbSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteProbSpace {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, idx: usize) -> usize {
        self.assignment[idx]
    }

    /// `psi.compose(&phi)` is `psi ∘ phi`; `phi`'s target space must
    /// equal `psi`'s source space.
    pub fn compose(&self, inner: &PointMap) -> Result<Self> {
        if inner.target != self.source {
            return Err(Error::NotComposable(
                "inner map's target space differs from outer map's source space".into(),
            ));
        }
        let assignment = inner
            .assignment
            .iter()
            .map(|&k| self.assignment[k])
            .collect();
        PointMap::new(inner.source.clone(), self.target.clone(), assignment)
    }
}

#[derive(Serialize, Deserialize)]
struct PointMapWire {
    source: FiniteProbSpace,
    target: FiniteProbSpace,
    assignment: BTreeMap<String, String>,
}

impl TryFrom<PointMapWire> for PointMap {
    type Error = Error;

    fn try_from(wire: PointMapWire) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = wire
            .assignment
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        PointMap::from_labels(wire.source.clone(), wire.target, &pairs)
    }
}

impl From<PointMap> for PointMapWire {
    fn from(map: PointMap) -> Self {
        let assignment = map
            .assignment
            .iter()
            .enumerate()
            .map(|(s, &t)| {
                (
                    map.source.labels()[s].clone(),
                    map.target.labels()[t].clone(),
                )
            })
            .collect();
        PointMapWire {
            source: map.source,
            target: map.target,
            assignment,
        }
    }
}

/// A real-valued function defined on every outcome of a space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RandomVariableWire", into = "RandomVariableWire")]
pub struct RandomVariable {
    space: FiniteProbSpace,
    values: Vec<f64>,
}

impl RandomVariable {
    pub fn new(space: FiniteProbSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} outcomes",
                values.len(),
                space.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value {bad}")));
        }
        Ok(RandomVariable { space, values })
    }

    pub fn constant(space: FiniteProbSpace, value: f64) -> Self {
        let values = vec![value; space.len()];
        RandomVariable { space, values }
    }

    pub fn space(&self) -> &FiniteProbSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_of(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// `Σ f(x)·mass(x)` over all outcomes.
    pub fn expectation(&self) -> f64 {
        self.values
            .iter()
            .zip(self.space.mass())
            .map(|(v, m)| v * m)
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct RandomVariableWire {
    space: FiniteProbSpace,
    values: BTreeMap<String, f64>,
}

impl TryFrom<RandomVariableWire> for RandomVariable {
    type Error = Error;

    fn try_from(wire: RandomVariableWire) -> Result<Self> {
        let mut values = vec![f64::NAN; wire.space.len()];
        for (label, value) in &wire.values {
            let idx = wire
                .space
                .index_of(label)
                .ok_or_else(|| Error::InvalidSpace(format!("unknown outcome {label:?}")))?;
            values[idx] = *value;
        }
        RandomVariable::new(wire.space, values)
    }
}

impl From<RandomVariable> for RandomVariableWire {
    fn from(rv: RandomVariable) -> Self {
        let values = rv
            .space
            .labels()
            .iter()
            .cloned()
            .zip(rv.values.iter().copied())
            .collect();
        RandomVariableWire {
            space: rv.space,
            values,
        }
    }
}

/// Total preimage mass of each target outcome.
fn fiber_masses(map: &PointMap) -> Vec<f64> {
    let mut out = vec![0.0; map.target().len()];
    for (x, &y) in map.assignment().iter().enumerate() {
        out[y] += map.source().mass_of(x);
    }
    out
}

/// The pushforward space: target outcomes weighted by preimage mass.
pub fn pushforward(map: &PointMap) -> FiniteProbSpace {
    FiniteProbSpace::from_parts(map.target().labels().to_vec(), fiber_masses(map))
        .expect("pushforward of a probability space is a probability space")
}

/// True iff every zero-mass target outcome has zero preimage mass,
/// i.e. the pushforward is absolutely continuous with respect to the
/// target measure.
pub fn is_null_preserving(map: &PointMap) -> bool {
    fiber_masses(map)
        .iter()
        .zip(map.target().mass())
        .all(|(&pushed, &m)| m > 0.0 || pushed == 0.0)
}

/// The conditional expectation of `f` along a null-preserving `map`:
/// the function `g` on the target with `∫_B g dP_Y = ∫_{φ⁻¹(B)} f dP_X`
/// for every target event `B`. On zero-mass outcomes `g` is 0.
pub fn conditional_expectation(f: &RandomVariable, map: &PointMap) -> Result<RandomVariable> {
    if f.space() != map.source() {
        return Err(Error::DimensionMismatch(
            "random variable lives on a different space than the map's source".into(),
        ));
    }
    if !is_null_preserving(map) {
        return Err(Error::NotNullPreserving(
            "a zero-mass target outcome receives positive mass".into(),
        ));
    }
    let mut weighted = vec![0.0; map.target().len()];
    for (x, &y) in map.assignment().iter().enumerate() {
        weighted[y] += f.value_of(x) * map.source().mass_of(x);
    }
    let values = weighted
        .iter()
        .zip(map.target().mass())
        .map(|(&num, &m)| if m > 0.0 { num / m } else { 0.0 })
        .collect();
    RandomVariable::new(map.target().clone(), values)
}

/// Almost-sure equality: agreement within `tol` on every outcome of
/// positive mass.
pub fn almost_surely_equal(a: &RandomVariable, b: &RandomVariable, tol: f64) -> bool {
    a.space() == b.space()
        && a.values()
            .iter()
            .zip(b.values())
            .zip(a.space().mass())
            .all(|((x, y), &m)| m == 0.0 || (x - y).abs() <= tol)
}

/// Checks the tower property `E^ψ[E^φ[f]] = E^{ψ∘φ}[f]` almost surely,
/// within [`COMPARISON_TOLERANCE`].
pub fn verify_tower(f: &RandomVariable, phi: &PointMap, psi: &PointMap) -> Result<bool> {
    let staged = conditional_expectation(&conditional_expectation(f, phi)?, psi)?;
    let direct = conditional_expectation(f, &psi.compose(phi)?)?;
    Ok(almost_surely_equal(&staged, &direct, COMPARISON_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_abcd() -> FiniteProbSpace {
        FiniteProbSpace::uniform(&["a", "b", "c", "d"]).unwrap()
    }

    fn collapse_abcd() -> PointMap {
        let source = uniform_abcd();
        let target = FiniteProbSpace::new(&[("u", 0.5), ("v", 0.5)]).unwrap();
        PointMap::from_labels(
            source,
            target,
            &[("a", "u"), ("b", "u"), ("c", "v"), ("d", "v")],
        )
        .unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(FiniteProbSpace::new(&[("a", 0.5), ("b", 0.5)]).is_ok());
        assert!(FiniteProbSpace::new(&[("a", 0.6), ("b", 0.5)]).is_err());
        assert!(FiniteProbSpace::new(&[("a", -0.1), ("b", 1.1)]).is_err());
        assert!(FiniteProbSpace::new(&[("a", 0.5), ("a", 0.5)]).is_err());
        assert!(FiniteProbSpace::new(&[]).is_err());
    }

    #[test]
    fn null_preservation_examples() {
        // Measure-preserving collapse.
        assert!(is_null_preserving(&collapse_abcd()));

        // Mass 0.5 sent onto a zero-mass outcome.
        let source = FiniteProbSpace::new(&[("x", 0.5), ("y", 0.5)]).unwrap();
        let target = FiniteProbSpace::new(&[("u", 1.0), ("v", 0.0)]).unwrap();
        let bad = PointMap::from_labels(source.clone(), target.clone(), &[("x", "u"), ("y", "v")])
            .unwrap();
        assert!(!is_null_preserving(&bad));

        // Constant map onto a positive-mass outcome.
        let constant = PointMap::from_labels(source, target, &[("x", "u"), ("y", "u")]).unwrap();
        assert!(is_null_preserving(&constant));
    }

    #[test]
    fn pushforward_examples() {
        let space = FiniteProbSpace::new(&[("x", 0.3), ("y", 0.7)]).unwrap();
        let id = PointMap::identity(&space);
        assert_eq!(pushforward(&id), space);

        let one = FiniteProbSpace::new(&[("z", 1.0)]).unwrap();
        let collapse = PointMap::from_labels(space, one, &[("x", "z"), ("y", "z")]).unwrap();
        assert_eq!(pushforward(&collapse).mass(), &[1.0]);

        let three = FiniteProbSpace::uniform(&["p", "q", "r"]).unwrap();
        let two = FiniteProbSpace::new(&[("u", 2.0 / 3.0), ("v", 1.0 / 3.0)]).unwrap();
        let pairwise =
            PointMap::from_labels(three, two, &[("p", "u"), ("q", "u"), ("r", "v")]).unwrap();
        let pushed = pushforward(&pairwise);
        assert!((pushed.mass()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((pushed.mass()[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn conditional_expectation_worked_example() {
        let phi = collapse_abcd();
        let f = RandomVariable::new(phi.source().clone(), vec![1.0, 3.0, 5.0, 7.0]).unwrap();
        let g = conditional_expectation(&f, &phi).unwrap();
        assert_eq!(g.values(), &[2.0, 6.0]);
    }

    #[test]
    fn conditional_expectation_identity_and_constants() {
        let space = FiniteProbSpace::new(&[("x", 0.3), ("y", 0.7)]).unwrap();
        let id = PointMap::identity(&space);
        let f = RandomVariable::new(space.clone(), vec![2.0, -1.0]).unwrap();
        assert!(almost_surely_equal(
            &conditional_expectation(&f, &id).unwrap(),
            &f,
            1e-15
        ));

        let phi = collapse_abcd();
        let c = RandomVariable::constant(phi.source().clone(), 4.25);
        let g = conditional_expectation(&c, &phi).unwrap();
        assert!(g.values().iter().all(|&v| (v - 4.25).abs() < 1e-15));
    }

    #[test]
    fn conditional_expectation_requires_null_preserving() {
        let source = FiniteProbSpace::new(&[("x", 0.5), ("y", 0.5)]).unwrap();
        let target = FiniteProbSpace::new(&[("u", 1.0), ("v", 0.0)]).unwrap();
        let bad = PointMap::from_labels(source.clone(), target, &[("x", "u"), ("y", "v")]).unwrap();
        let f = RandomVariable::new(source, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            conditional_expectation(&f, &bad),
            Err(Error::NotNullPreserving(_))
        ));
    }

    #[test]
    fn zero_mass_outcomes_get_the_canonical_representative() {
        let source = FiniteProbSpace::new(&[("x", 1.0)]).unwrap();
        let target = FiniteProbSpace::new(&[("u", 1.0), ("dead", 0.0)]).unwrap();
        let phi = PointMap::from_labels(source.clone(), target, &[("x", "u")]).unwrap();
        let f = RandomVariable::new(source, vec![3.0]).unwrap();
        let g = conditional_expectation(&f, &phi).unwrap();
        assert_eq!(g.values(), &[3.0, 0.0]);
    }

    #[test]
    fn tower_property_with_identities() {
        let phi = collapse_abcd();
        let f = RandomVariable::new(phi.source().clone(), vec![1.0, 3.0, 5.0, 7.0]).unwrap();
        let id_target = PointMap::identity(phi.target());
        assert!(verify_tower(&f, &phi, &id_target).unwrap());
        let id_source = PointMap::identity(phi.source());
        assert!(verify_tower(&f, &id_source, &phi).unwrap());
    }

    #[test]
    fn tower_property_on_a_chain() {
        // Six points collapsed 6 -> 3 -> 2 with pushforward masses.
        let x = FiniteProbSpace::new(&[
            ("x0", 0.10),
            ("x1", 0.15),
            ("x2", 0.20),
            ("x3", 0.05),
            ("x4", 0.30),
            ("x5", 0.20),
        ])
        .unwrap();
        let y = FiniteProbSpace::new(&[("y0", 0.25), ("y1", 0.25), ("y2", 0.50)]).unwrap();
        let z = FiniteProbSpace::new(&[("z0", 0.50), ("z1", 0.50)]).unwrap();
        let phi = PointMap::from_labels(
            x.clone(),
            y.clone(),
            &[
                ("x0", "y0"),
                ("x1", "y0"),
                ("x2", "y1"),
                ("x3", "y1"),
                ("x4", "y2"),
                ("x5", "y2"),
            ],
        )
        .unwrap();
        let psi = PointMap::from_labels(y, z, &[("y0", "z0"), ("y1", "z0"), ("y2", "z1")]).unwrap();
        let f = RandomVariable::new(x, vec![1.0, -2.0, 0.5, 3.0, 7.0, -1.0]).unwrap();
        assert!(verify_tower(&f, &phi, &psi).unwrap());
    }

    #[test]
    fn linearity_and_unit() {
        let phi = collapse_abcd();
        let f = RandomVariable::new(phi.source().clone(), vec![1.0, 3.0, 5.0, 7.0]).unwrap();
        let h = RandomVariable::new(phi.source().clone(), vec![2.0, 0.0, -4.0, 1.0]).unwrap();
        let (a, b) = (2.5, -1.5);
        let combo = RandomVariable::new(
            phi.source().clone(),
            f.values()
                .iter()
                .zip(h.values())
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
        .unwrap();
        let lhs = conditional_expectation(&combo, &phi).unwrap();
        let ef = conditional_expectation(&f, &phi).unwrap();
        let eh = conditional_expectation(&h, &phi).unwrap();
        let rhs = RandomVariable::new(
            phi.target().clone(),
            ef.values()
                .iter()
                .zip(eh.values())
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
        .unwrap();
        assert!(almost_surely_equal(&lhs, &rhs, COMPARISON_TOLERANCE));

        let one = RandomVariable::constant(phi.source().clone(), 1.0);
        let e_one = conditional_expectation(&one, &phi).unwrap();
        assert!(almost_surely_equal(
            &e_one,
            &RandomVariable::constant(phi.target().clone(), 1.0),
            COMPARISON_TOLERANCE
        ));
    }

    #[test]
    fn json_round_trip() {
        let phi = collapse_abcd();
        let json = serde_json::to_string(&phi).unwrap();
        let back: PointMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, phi);

        let f = RandomVariable::new(phi.source().clone(), vec![1.0, 3.0, 5.0, 7.0]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: RandomVariable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
