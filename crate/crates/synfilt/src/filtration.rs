//! Anchored parameter states over a context: backward propagation of a
//! Dirichlet parameter vector through context-selected faces, the
//! constraint set for the next time step, and conjugate Bayesian
//! updating from categorical observations.
//!
//! Only the anchor and its context are stored. Pasts are determined and
//! recomputed on demand through the face chain; futures are constrained
//! but free, so they are never stored — advancing requires choosing a
//! completion. States are immutable values: every operation returns a
//! new state.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::context::ContextPrefix;
use crate::dirichlet::{self, DirichletParams};
use crate::error::{Error, Result};

/// Version tag carried by the JSON persistence format.
pub const FILTRATION_STATE_SCHEMA_VERSION: u32 = 1;

/// A categorical outcome `category ∈ [time]` observed at `time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObservationEvent {
    time: usize,
    category: usize,
}

impl ObservationEvent {
    pub fn new(time: usize, category: usize) -> Result<Self> {
        if category > time {
            return Err(Error::IndexOutOfRange {
                index: category,
                n: time,
            });
        }
        Ok(ObservationEvent { time, category })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn category(&self) -> usize {
        self.category
    }
}

/// The value of the parameter assignment at its anchor time, plus the
/// context digits needed to propagate it backward.
///
/// Invariant: the parameter vector's dimension equals the anchor time,
/// which the constructor enforces by deriving the time from the
/// parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiltrationStateWire", into = "FiltrationStateWire")]
pub struct FiltrationState {
    anchor_params: DirichletParams,
    context: ContextPrefix,
}

#[derive(Serialize, Deserialize)]
struct FiltrationStateWire {
    schema_version: u32,
    t: usize,
    alpha: Vec<f64>,
    context_digits: Vec<usize>,
}

impl TryFrom<FiltrationStateWire> for FiltrationState {
    type Error = Error;

    fn try_from(wire: FiltrationStateWire) -> Result<Self> {
        if wire.schema_version != FILTRATION_STATE_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema version {}",
                wire.schema_version
            )));
        }
        let params = DirichletParams::new(wire.alpha)?;
        if params.dimension() != wire.t {
            return Err(Error::DimensionMismatch(format!(
                "alpha has dimension {}, anchor time is {}",
                params.dimension(),
                wire.t
            )));
        }
        Ok(FiltrationState::new(
            params,
            ContextPrefix::new(wire.context_digits)?,
        ))
    }
}

impl From<FiltrationState> for FiltrationStateWire {
    fn from(state: FiltrationState) -> Self {
        FiltrationStateWire {
            schema_version: FILTRATION_STATE_SCHEMA_VERSION,
            t: state.anchor_time(),
            alpha: state.anchor_params.alpha().to_vec(),
            context_digits: state.context.digits().to_vec(),
        }
    }
}

impl FiltrationState {
    pub fn new(anchor_params: DirichletParams, context: ContextPrefix) -> Self {
        FiltrationState {
            anchor_params,
            context,
        }
    }

    pub fn anchor_time(&self) -> usize {
        self.anchor_params.dimension()
    }

    pub fn anchor_params(&self) -> &DirichletParams {
        &self.anchor_params
    }

    pub fn context(&self) -> &ContextPrefix {
        &self.context
    }

    /// The determined value at a past time `s ≤ anchor_time`: the
    /// anchor pushed down through the faces selected by the stored
    /// context digits, one level at a time.
    pub fn state_at(&self, s: usize) -> Result<DirichletParams> {
        self.state_at_in(s, &self.context)
    }

    /// Like [`state_at`](Self::state_at) but propagating along an
    /// explicit representative context. The representative must agree
    /// with the stored context beyond the anchor time; its digits at
    /// positions `s+1 ..= anchor_time` choose the face chain, so
    /// different representatives may yield different pasts.
    pub fn state_at_in(&self, s: usize, representative: &ContextPrefix) -> Result<DirichletParams> {
        let t = self.anchor_time();
        if s > t {
            return Err(Error::FutureNotDetermined {
                requested: s,
                anchor: t,
            });
        }
        if representative.tail_from(t + 1) != self.context.tail_from(t + 1) {
            return Err(Error::InvalidDigits(
                "representative context differs beyond the anchor time".into(),
            ));
        }
        let mut params = self.anchor_params.clone();
        for level in ((s + 1)..=t).rev() {
            params = dirichlet::params_face(&params, representative.face_index(level))?;
        }
        Ok(params)
    }

    /// The constraint pinning all admissible parameter vectors at time
    /// `anchor_time + 1`: the face selected by the next context digit
    /// must send the completion back onto the anchor parameters.
    pub fn next_constraint(&self) -> FutureConstraint {
        let t = self.anchor_time();
        let alpha = self.anchor_params.alpha();
        let k = self.context.face_index(t + 1);
        let mut entries: Vec<Option<f64>> = vec![None; t + 2];
        let (split_slot, pinned_sum);
        if k > 0 {
            // d^{t+1}_k merges slots k-1 and k; everything below k-1 is
            // copied in place, everything above k shifts up by one.
            for m in 0..k.saturating_sub(1) {
                entries[m] = Some(alpha[m]);
            }
            for m in k..=t {
                entries[m + 1] = Some(alpha[m]);
            }
            split_slot = (k - 1, k);
            pinned_sum = alpha[k - 1];
        } else {
            // The cyclic face merges the first and last slots into the
            // top entry; the rest shift down by one.
            for m in 0..t {
                entries[m + 1] = Some(alpha[m]);
            }
            split_slot = (0, t + 1);
            pinned_sum = alpha[t];
        }
        FutureConstraint {
            time: t + 1,
            face_index: k,
            entries,
            split_slot,
            pinned_sum,
        }
    }

    /// Conjugate update at the anchor: increments the observed
    /// category's parameter by one. The context is unchanged; all past
    /// values shift accordingly through [`state_at`](Self::state_at).
    pub fn bayes_update(&self, obs: &ObservationEvent) -> Result<FiltrationState> {
        let t = self.anchor_time();
        if obs.time() != t {
            return Err(Error::ObservationTimeMismatch {
                observed: obs.time(),
                anchor: t,
            });
        }
        let mut alpha = self.anchor_params.alpha().to_vec();
        alpha[obs.category()] += 1.0;
        Ok(FiltrationState::new(
            DirichletParams::new(alpha)?,
            self.context.clone(),
        ))
    }

    /// Moves the anchor one step into the future, completing the next
    /// constraint with a fixed split fraction.
    pub fn advance(&self, split_fraction: f64) -> Result<FiltrationState> {
        self.advance_with(|_| split_fraction)
    }

    /// Strategy hook for richer completion policies: the policy sees
    /// the constraint and picks the split fraction.
    pub fn advance_with(
        &self,
        policy: impl FnOnce(&FutureConstraint) -> f64,
    ) -> Result<FiltrationState> {
        let constraint = self.next_constraint();
        let fraction = policy(&constraint);
        let params = complete_future(&constraint, fraction)?;
        Ok(FiltrationState::new(params, self.context.clone()))
    }

    /// Draws an outcome probability vector from the anchor's Dirichlet,
    /// then draws `trials` categorical outcomes from it.
    pub fn simulate_observations<R: Rng + ?Sized>(
        &self,
        trials: usize,
        rng: &mut R,
    ) -> Vec<ObservationEvent> {
        let q = dirichlet::sample(&self.anchor_params, rng);
        let t = self.anchor_time();
        (0..trials)
            .map(|_| {
                let category = draw_category(q.weights(), rng);
                ObservationEvent { time: t, category }
            })
            .collect()
    }
}

fn draw_category<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut cumulative = 0.0;
    for (idx, &w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return idx;
        }
    }
    // Rounding left the total a hair under u; take the last live slot.
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .expect("at least one positive weight")
}

/// All admissible parameter vectors one step past an anchor `(t, α)`:
/// entries are fixed copies of `α` except for one adjacent pair (or the
/// first/last pair for the cyclic face) whose sum is pinned.
#[derive(Debug, Clone, PartialEq)]
pub struct FutureConstraint {
    time: usize,
    face_index: usize,
    entries: Vec<Option<f64>>,
    split_slot: (usize, usize),
    pinned_sum: f64,
}

impl FutureConstraint {
    /// The constrained time, `anchor_time + 1`.
    pub fn time(&self) -> usize {
        self.time
    }

    /// The context digit `k = c_{t+1}` selecting the face.
    pub fn face_index(&self) -> usize {
        self.face_index
    }

    /// Fixed entries; `None` marks the two split positions.
    pub fn fixed_entries(&self) -> &[Option<f64>] {
        &self.entries
    }

    pub fn split_slot(&self) -> (usize, usize) {
        self.split_slot
    }

    pub fn pinned_sum(&self) -> f64 {
        self.pinned_sum
    }
}

/// Splits `total` as `(a, b)` with `a ≈ fraction·total` such that
/// `a + b == total` holds exactly in floating point. The fraction is
/// honored to within an ulp or two; exactness of the merged sum wins.
fn exact_split(total: f64, fraction: f64) -> (f64, f64) {
    let mut a = fraction * total;
    let mut b = total - a;
    for _ in 0..4 {
        if a + b == total {
            return (a, b);
        }
        a = total - b;
        if a + b == total {
            return (a, b);
        }
        b = total - a;
    }
    (0.0, total)
}

/// Completes a future constraint with the split
/// `(fraction·pinned_sum, (1−fraction)·pinned_sum)`, adjusted so the
/// selected face map returns the anchor parameters exactly.
pub fn complete_future(
    constraint: &FutureConstraint,
    split_fraction: f64,
) -> Result<DirichletParams> {
    if !split_fraction.is_finite() || !(0.0..=1.0).contains(&split_fraction) {
        return Err(Error::InvalidFraction(split_fraction));
    }
    let (lo, hi) = constraint.split_slot;
    let (a, b) = exact_split(constraint.pinned_sum, split_fraction);
    let mut alpha = Vec::with_capacity(constraint.entries.len());
    for (idx, entry) in constraint.entries.iter().enumerate() {
        match entry {
            Some(v) => alpha.push(*v),
            None if idx == lo => alpha.push(a),
            None if idx == hi => alpha.push(b),
            None => unreachable!("only the split slots are free"),
        }
    }
    DirichletParams::new(alpha)
}
