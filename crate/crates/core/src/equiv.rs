//! The three relations that define `K₁`: stabilization `A ~ A ⊕ I_k`,
//! conjugation `A ~ P A P⁻¹` (unrestricted, since the filtration is
//! trivial), and padding by blocks `u ⊕ u⁻¹`. Random pipelines of these
//! transforms are used to check that [`k1_class`] is an invariant.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::exmat::ExactMatrix;
use crate::gaussq::GaussianRational;
use crate::jordan::{cell_matrix, JordanCell, Spectrum};
use crate::ktheory::{k1_class, K1Class};

/// Largest matrix a random pipeline may produce.
pub const MAX_PIPELINE_SIZE: usize = 48;

/// `a ⊕ I_k`.
pub fn stabilize(a: &ExactMatrix, k: usize) -> Result<ExactMatrix> {
    a.direct_sum(&ExactMatrix::identity(k))
}

/// `a ⊕ u ⊕ u⁻¹`.
pub fn opad(a: &ExactMatrix, u: &ExactMatrix) -> Result<ExactMatrix> {
    let u_inv = u.inverse()?;
    a.direct_sum(u)?.direct_sum(&u_inv)
}

#[derive(Clone, Debug)]
enum ElementaryOp {
    /// `row[target] += c · row[source]`
    AddRow {
        target: usize,
        source: usize,
        c: GaussianRational,
    },
    Swap(usize, usize),
    Scale(usize, GaussianRational),
}

/// An invertible matrix kept as a product of elementary row operations,
/// so both it and its inverse act in `O(n)` per operation.
#[derive(Clone, Debug)]
pub struct Conjugator {
    n: usize,
    ops: Vec<ElementaryOp>,
}

fn small_scalars() -> [GaussianRational; 8] {
    [
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::from_int(2),
        GaussianRational::from_int(-2),
        GaussianRational::i(),
        -GaussianRational::i(),
        GaussianRational::from_parts(1, 1, 1, 1),
        GaussianRational::from_parts(1, 1, -1, 1),
    ]
}

impl Conjugator {
    /// Deterministic in `(n, seed)`: between `n` and `3n` elementary
    /// operations with coefficients from `{±1, ±2, ±i, 1±i}`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scalars = small_scalars();
        let count = if n == 0 {
            0
        } else {
            rng.random_range(n..=3 * n)
        };
        let mut ops = Vec::with_capacity(count);
        for _ in 0..count {
            let roll = rng.random_range(0..10);
            let c = scalars[rng.random_range(0..scalars.len())].clone();
            if n == 1 || roll == 0 {
                ops.push(ElementaryOp::Scale(rng.random_range(0..n), c));
            } else if roll == 1 {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                ops.push(ElementaryOp::Swap(a, b));
            } else {
                let target = rng.random_range(0..n);
                let source = (target + rng.random_range(1..n)) % n;
                ops.push(ElementaryOp::AddRow { target, source, c });
            }
        }
        Conjugator { n, ops }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> ExactMatrix {
        let mut p = ExactMatrix::identity(self.n);
        for op in &self.ops {
            apply_row_op(&mut p, op);
        }
        p
    }

    /// `P a P⁻¹`, applied one elementary operation at a time.
    pub fn conjugate(&self, a: &ExactMatrix) -> Result<ExactMatrix> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "conjugator is {0}x{0}, matrix is {1}x{2}",
                self.n,
                a.rows(),
                a.cols()
            )));
        }
        let mut m = a.clone();
        for op in &self.ops {
            apply_row_op(&mut m, op);
            match op {
                ElementaryOp::AddRow { target, source, c } => {
                    m.add_col_multiple(*source, *target, &-c)
                }
                ElementaryOp::Swap(a, b) => m.swap_cols(*a, *b),
                ElementaryOp::Scale(r, c) => m.scale_col(*r, &c.inv()?),
            }
        }
        Ok(m)
    }
}

fn apply_row_op(m: &mut ExactMatrix, op: &ElementaryOp) {
    match op {
        ElementaryOp::AddRow { target, source, c } => m.add_row_multiple(*target, *source, c),
        ElementaryOp::Swap(a, b) => m.swap_rows(*a, *b),
        ElementaryOp::Scale(r, c) => m.scale_row(*r, c),
    }
}

/// The matrix of [`Conjugator::random`].
pub fn random_conjugator(n: usize, seed: u64) -> ExactMatrix {
    Conjugator::random(n, seed).matrix()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivTransform {
    Stabilize {
        k: usize,
    },
    /// Conjugation by `random_conjugator(size, seed)` at the current size.
    Conjugate {
        seed: u64,
    },
    #[serde(rename = "opad")]
    OPad {
        u: ExactMatrix,
    },
}

impl EquivTransform {
    pub fn apply(&self, a: &ExactMatrix) -> Result<ExactMatrix> {
        match self {
            EquivTransform::Stabilize { k } => stabilize(a, *k),
            EquivTransform::Conjugate { seed } => Conjugator::random(a.rows(), *seed).conjugate(a),
            EquivTransform::OPad { u } => opad(a, u),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformTrace {
    pub initial: ExactMatrix,
    pub steps: Vec<EquivTransform>,
    #[serde(rename = "final")]
    pub final_matrix: ExactMatrix,
}

impl TransformTrace {
    /// Re-applies every step to `initial`.
    pub fn replay(&self) -> Result<ExactMatrix> {
        self.steps
            .iter()
            .try_fold(self.initial.clone(), |m, s| s.apply(&m))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub status: Status,
    pub trials: usize,
    /// Class of the input matrix.
    pub class: K1Class,
    pub failure_trace: Option<TransformTrace>,
}

/// An arithmetic failure inside a pipeline, with the steps applied so far.
#[derive(Debug, Error)]
#[error("{error} (after {} transform steps)", trace.steps.len())]
pub struct TraceError {
    pub error: Error,
    pub trace: Box<TransformTrace>,
}

/// A pipeline result: the trace and the spectrum of its final matrix.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub trace: TransformTrace,
    pub spectrum: Spectrum,
}

#[derive(Clone, Copy)]
enum StepKind {
    Stabilize,
    Conjugate,
    OPad,
}

/// A random invertible `u` assembled from up to three small cells with
/// eigenvalues from `pool`, then conjugated.
fn random_pad_block(
    rng: &mut ChaCha8Rng,
    pool: &[GaussianRational],
    max_size: usize,
) -> ExactMatrix {
    let cells = rng.random_range(1..=3);
    let mut blocks = Vec::new();
    let mut size = 0;
    for _ in 0..cells {
        let n = rng.random_range(1..=3).min(max_size - size);
        if n == 0 {
            break;
        }
        let lambda = pool[rng.random_range(0..pool.len())].clone();
        blocks.push(cell_matrix(&JordanCell::new(n, lambda)));
        size += n;
    }
    let u = ExactMatrix::block_diagonal(&blocks).expect("square blocks");
    Conjugator::random(size, rng.random())
        .conjugate(&u)
        .expect("matching size")
}

/// Builds and runs one random pipeline: at least one step of each kind,
/// plus up to three more, shuffled, never exceeding [`MAX_PIPELINE_SIZE`].
/// Padding eigenvalues are drawn from `spectrum ∪ {2, i, -1}`.
pub fn random_pipeline(
    a: &ExactMatrix,
    spectrum: &Spectrum,
    seed: u64,
) -> std::result::Result<Pipeline, TraceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<GaussianRational> = spectrum
        .iter()
        .filter(|z| !num_traits::Zero::is_zero(*z))
        .cloned()
        .collect();
    for extra in [
        GaussianRational::from_int(2),
        GaussianRational::i(),
        GaussianRational::from_int(-1),
    ] {
        if !pool.contains(&extra) {
            pool.push(extra);
        }
    }

    let mut kinds = vec![StepKind::Stabilize, StepKind::Conjugate, StepKind::OPad];
    for _ in 0..rng.random_range(0..=3) {
        kinds.push(match rng.random_range(0..3) {
            0 => StepKind::Stabilize,
            1 => StepKind::Conjugate,
            _ => StepKind::OPad,
        });
    }
    kinds.shuffle(&mut rng);

    let mut trace = TransformTrace {
        initial: a.clone(),
        steps: Vec::new(),
        final_matrix: a.clone(),
    };
    let mut spectrum = spectrum.clone();
    for kind in kinds {
        let size = trace.final_matrix.rows();
        let room = MAX_PIPELINE_SIZE.saturating_sub(size);
        let step = match kind {
            StepKind::Stabilize if room >= 1 => {
                spectrum.insert(GaussianRational::from_int(1));
                EquivTransform::Stabilize {
                    k: rng.random_range(1..=3.min(room)),
                }
            }
            StepKind::OPad if room >= 2 => {
                let u = random_pad_block(&mut rng, &pool, room / 2);
                EquivTransform::OPad { u }
            }
            _ => EquivTransform::Conjugate { seed: rng.random() },
        };
        if let EquivTransform::OPad { u } = &step {
            for lambda in &pool {
                // cheap membership test: λ is an eigenvalue of u iff u − λI is singular
                if u.shift(lambda)
                    .map(|m| m.rank() < u.rows())
                    .unwrap_or(false)
                {
                    spectrum.insert(lambda.clone());
                    spectrum.insert(lambda.inv().expect("pool is zero-free"));
                }
            }
        }
        match step.apply(&trace.final_matrix) {
            Ok(next) => {
                trace.final_matrix = next;
                trace.steps.push(step);
            }
            Err(error) => {
                trace.steps.push(step);
                return Err(TraceError {
                    error,
                    trace: Box::new(trace),
                });
            }
        }
    }
    Ok(Pipeline { trace, spectrum })
}

/// Seed of the `index`-th trial derived from a base seed (splitmix64).
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `trials` random pipelines on `a` and checks that every final matrix
/// has the same `K₁` class as `a`. Trials run in parallel; the reported
/// failure is the one with the lowest trial index.
pub fn verify_invariance(
    a: &ExactMatrix,
    spectrum: &Spectrum,
    trials: usize,
    seed: u64,
) -> std::result::Result<VerificationReport, TraceError> {
    let wrap = |error: Error| TraceError {
        error,
        trace: Box::new(TransformTrace {
            initial: a.clone(),
            steps: Vec::new(),
            final_matrix: a.clone(),
        }),
    };
    let class = k1_class(a, spectrum).map_err(wrap)?;
    let outcomes: Vec<std::result::Result<Option<TransformTrace>, TraceError>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let pipeline = random_pipeline(a, spectrum, trial_seed(seed, i as u64))?;
            match k1_class(&pipeline.trace.final_matrix, &pipeline.spectrum) {
                Ok(c) if c == class => Ok(None),
                Ok(_) => Ok(Some(pipeline.trace)),
                Err(error) => Err(TraceError {
                    error,
                    trace: Box::new(pipeline.trace),
                }),
            }
        })
        .collect();
    let mut failure = None;
    for outcome in outcomes {
        if let Some(trace) = outcome? {
            failure = Some(trace);
            break;
        }
    }
    Ok(VerificationReport {
        status: if failure.is_some() {
            Status::Fail
        } else {
            Status::Pass
        },
        trials,
        class,
        failure_trace: failure,
    })
}
