//! Named verification suites. Each runs a family of exact checks and
//! reports the first counterexample, if any. The CLI `verify` command and
//! the acceptance tests both go through here.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::equiv::{verify_invariance, Conjugator, Status};
use crate::error::Result;
use crate::exmat::ExactMatrix;
use crate::gaussq::GaussianRational;
use crate::jordan::{
    cell_inverse, cell_matrix, jordan_decompose, jordan_rank, JordanCell, JordanForm, Spectrum,
};
use crate::ktheory::{k0_class, k0_diff, k1_class, K1Class};

/// Eigenvalues used by the fixed grids.
pub const LAMBDA_GRID: [&str; 6] = ["2", "1/2", "-1", "i", "1+i", "3/2-1/4i"];

pub fn lambda_grid() -> Vec<GaussianRational> {
    LAMBDA_GRID
        .iter()
        .map(|s| s.parse().expect("valid scalar"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma5,
    Lemma6,
    Lemma7,
    Equiv,
    InverseFormula,
    K0,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lemma5,
        Suite::Lemma6,
        Suite::Lemma7,
        Suite::Equiv,
        Suite::InverseFormula,
        Suite::K0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma5 => "lemma5",
            Suite::Lemma6 => "lemma6",
            Suite::Lemma7 => "lemma7",
            Suite::Equiv => "equiv",
            Suite::InverseFormula => "inverse-formula",
            Suite::K0 => "k0",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub trials: usize,
    pub seed: u64,
    /// Largest matrix or cell dimension the suite generates.
    pub size: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            trials: 100,
            seed: 0,
            size: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub status: Status,
    pub trials: usize,
    /// Number of individual exact checks performed.
    pub checks: usize,
    pub failure: Option<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Counts checks and records the first failure.
struct Checker {
    checks: usize,
    failure: Option<Value>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            checks: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> Value) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
        ok
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn finish(self, suite: Suite, trials: usize) -> SuiteReport {
        SuiteReport {
            suite,
            status: if self.failure.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            trials,
            checks: self.checks,
            failure: self.failure,
        }
    }
}

pub fn run_suite(suite: Suite, params: SuiteParams) -> Result<SuiteReport> {
    match suite {
        Suite::InverseFormula => inverse_formula(params),
        Suite::Lemma5 => lemma5(params),
        Suite::Lemma6 => lemma6(params),
        Suite::Lemma7 => lemma7(params),
        Suite::Equiv => equiv(params),
        Suite::K0 => k0(params),
    }
}

/// A nonzero Gaussian rational with small numerators and denominators.
pub fn random_scalar(rng: &mut impl Rng) -> GaussianRational {
    loop {
        let re_num = rng.random_range(-5..=5);
        let im_num = if rng.random_bool(0.5) {
            0
        } else {
            rng.random_range(-5..=5)
        };
        let z = GaussianRational::from_parts(
            re_num,
            rng.random_range(1..=4),
            im_num,
            rng.random_range(1..=4),
        );
        if !z.is_zero() {
            return z;
        }
    }
}

/// Eigenvalues for random cell-built matrices. Small on purpose, so that
/// inverse pairs and repeated eigenvalues actually occur.
pub fn eigenvalue_pool() -> Vec<GaussianRational> {
    [
        "1", "-1", "2", "1/2", "i", "-i", "3", "1/3", "1+i", "1/2-1/2i", "3/2-1/4i",
    ]
    .iter()
    .map(|s| s.parse().expect("valid scalar"))
    .collect()
}

/// Random multiset of invertible cells with total dimension `dim`, sizes at
/// most 3, eigenvalues drawn from `pool`.
pub fn random_form(rng: &mut impl Rng, dim: usize, pool: &[GaussianRational]) -> JordanForm {
    let mut form = JordanForm::new();
    let mut left = dim;
    while left > 0 {
        let n = rng.random_range(1..=left.min(3));
        let lambda = pool[rng.random_range(0..pool.len())].clone();
        form.insert(JordanCell::new(n, lambda), 1);
        left -= n;
    }
    form
}

/// `P · compose(form) · P⁻¹` for a random conjugator `P`.
pub fn conjugated(form: &JordanForm, seed: u64) -> ExactMatrix {
    let a = form.compose();
    Conjugator::random(a.rows(), seed)
        .conjugate(&a)
        .expect("conjugator matches matrix size")
}

/// Cells `(n, 1/λ)` for every cell `(n, λ)` of `form`.
pub fn inverse_form(form: &JordanForm) -> Result<JordanForm> {
    let mut out = JordanForm::new();
    for (c, m) in form.iter() {
        out.insert(JordanCell::new(c.size, c.eigenvalue.inv()?), m);
    }
    Ok(out)
}

fn cell_json(n: usize, lambda: &GaussianRational) -> Value {
    json!({"size": n, "eigenvalue": lambda.to_string()})
}

/// Closed-form cell inverse against general elimination on the grid
/// `n ∈ 1..=size`, `λ ∈ LAMBDA_GRID`.
fn inverse_formula(params: SuiteParams) -> Result<SuiteReport> {
    let mut ck = Checker::new();
    for lambda in lambda_grid() {
        for n in 1..=params.size {
            let cell = JordanCell::new(n, lambda.clone());
            let closed = cell_inverse(&cell)?;
            let eliminated = cell_matrix(&cell).inverse()?;
            ck.check(closed == eliminated, || cell_json(n, &lambda));
        }
    }
    Ok(ck.finish(Suite::InverseFormula, 0))
}

/// The inverse of a cell `J_{n,λ}` has Jordan form `J_{n,1/λ}`, checked
/// three ways: decomposition, the rank identities
/// `rank (J − λI)^k = rank (λ⁻¹I − J⁻¹)^k`, and equal Jordan ranks.
pub fn check_cell_inverse_form(n: usize, lambda: &GaussianRational) -> Result<Option<Value>> {
    let cell = JordanCell::new(n, lambda.clone());
    let j = cell_matrix(&cell);
    let j_inv = cell_inverse(&cell)?;
    let inv_lambda = lambda.inv()?;

    let form = jordan_decompose(&j_inv, &Spectrum::new([inv_lambda.clone()]))?;
    if form != JordanForm::single(JordanCell::new(n, inv_lambda.clone())) {
        return Ok(Some(
            json!({"check": "decompose", "cell": cell_json(n, lambda), "form": form}),
        ));
    }

    let lhs_base = j.shift(lambda)?;
    let rhs_base = ExactMatrix::scalar(n, &inv_lambda).sub(&j_inv)?;
    for k in 1..=n {
        let lhs = lhs_base.power(k)?.rank();
        let rhs = rhs_base.power(k)?.rank();
        if lhs != rhs || lhs != n - k {
            return Ok(Some(json!({
                "check": "rank_identity", "cell": cell_json(n, lambda), "k": k,
                "rank_shifted_power": lhs, "rank_inverse_shifted_power": rhs,
            })));
        }
    }

    let jr = jordan_rank(&j, lambda)?;
    let jr_inv = jordan_rank(&j_inv, &inv_lambda)?;
    if jr != n || jr_inv != n {
        return Ok(Some(json!({
            "check": "jordan_rank", "cell": cell_json(n, lambda),
            "jordan_rank": jr, "jordan_rank_inverse": jr_inv,
        })));
    }
    Ok(None)
}

fn lemma5(params: SuiteParams) -> Result<SuiteReport> {
    let mut ck = Checker::new();
    for lambda in lambda_grid() {
        for n in 1..=params.size {
            let failure = check_cell_inverse_form(n, &lambda)?;
            ck.check(failure.is_none(), || failure.unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.trials {
        if ck.failed() {
            break;
        }
        let n = rng.random_range(1..=params.size.max(1));
        let lambda = random_scalar(&mut rng);
        let failure = check_cell_inverse_form(n, &lambda)?;
        ck.check(failure.is_none(), || failure.unwrap());
    }
    Ok(ck.finish(Suite::Lemma5, params.trials))
}

/// `A ⊕ A⁻¹` decomposes into cells paired with their inverses, has class
/// zero, and `[A⁻¹] = −[A]`.
fn lemma6(params: SuiteParams) -> Result<SuiteReport> {
    let mut ck = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let pool: Vec<GaussianRational> = eigenvalue_pool();
    for _ in 0..params.trials {
        if ck.failed() {
            break;
        }
        let dim = rng.random_range(1..=params.size.max(1));
        let form = random_form(&mut rng, dim, &pool);
        let a = conjugated(&form, rng.random());
        let a_inv = a.inverse()?;
        let spectrum = form.spectrum();
        let inv_spectrum = spectrum.inverted()?;
        let both = spectrum.union(&inv_spectrum);

        let u = a.direct_sum(&a_inv)?;
        let u_form = jordan_decompose(&u, &both)?;
        let expected = form.union(&inverse_form(&form)?);
        ck.check(
            u_form == expected,
            || json!({"check": "pad_form", "form": form, "pad_form": u_form}),
        );
        ck.check(
            k1_class(&u, &both)?.is_zero(),
            || json!({"check": "pad_class_zero", "form": form}),
        );
        let class = k1_class(&a, &spectrum)?;
        let inv_class = k1_class(&a_inv, &inv_spectrum)?;
        ck.check(inv_class == class.neg(), || {
            json!({"check": "inverse_negates", "form": form, "class": class, "inverse_class": inv_class})
        });
    }
    Ok(ck.finish(Suite::Lemma6, params.trials))
}

/// Matrices realizing the two sides of an equivalence `u₁ ⊕ ξ₁ ~ u₂ ⊕ ξ₂`:
/// `ξᵢ` is a direct sum of blocks `v ⊕ v⁻¹`, then both sides are padded
/// with identity blocks to a common size.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub pads_left: Vec<JordanCell>,
    pub pads_right: Vec<JordanCell>,
    pub stabilize_left: usize,
    pub stabilize_right: usize,
}

fn is_unit_cell(c: &JordanCell) -> bool {
    c.size == 1 && c.eigenvalue.is_one()
}

/// Split a multiset of cells into pad generators `v` whose blocks
/// `v ⊕ v⁻¹` reproduce it exactly, ignoring `J_{1,1}` cells. Returns `None`
/// if no such split exists. Works on the multiset directly, without any
/// class normalization.
fn pad_generators(cells: &JordanForm) -> Option<Vec<JordanCell>> {
    let mut remaining: BTreeMap<JordanCell, usize> = cells
        .iter()
        .filter(|(c, _)| !is_unit_cell(c))
        .map(|(c, m)| (c.clone(), m))
        .collect();
    let mut gens = Vec::new();
    while let Some((cell, _)) = remaining.iter().next().map(|(c, m)| (c.clone(), *m)) {
        let partner = JordanCell::new(cell.size, cell.eigenvalue.inv().ok()?);
        // take one copy of the cell and one of its partner (a second copy
        // of itself when λ = ±1)
        for c in [&cell, &partner] {
            let m = remaining.get_mut(c)?;
            *m -= 1;
            if *m == 0 {
                remaining.remove(c);
            }
        }
        gens.push(cell);
    }
    Some(gens)
}

/// Constructs an explicit equivalence between `u1` and `u2` from their
/// cell multisets, or `None` if the multiset differences are not sums of
/// `v ⊕ v⁻¹` blocks.
pub fn equivalence_witness(u1: &JordanForm, u2: &JordanForm) -> Option<EquivalenceWitness> {
    let mut only1 = JordanForm::new();
    let mut only2 = JordanForm::new();
    let keys: std::collections::BTreeSet<&JordanCell> =
        u1.iter().chain(u2.iter()).map(|(c, _)| c).collect();
    for c in keys {
        let (m1, m2) = (u1.multiplicity(c), u2.multiplicity(c));
        if m1 > m2 {
            only1.insert(c.clone(), m1 - m2);
        } else if m2 > m1 {
            only2.insert(c.clone(), m2 - m1);
        }
    }
    // u1 ⊕ pads(only2) and u2 ⊕ pads(only1) then contain the same cells,
    // up to J_{1,1}.
    let pads_left = pad_generators(&only2)?;
    let pads_right = pad_generators(&only1)?;
    let pad_dim = |gens: &[JordanCell]| gens.iter().map(|c| 2 * c.size).sum::<usize>();
    let left = u1.dimension() + pad_dim(&pads_left);
    let right = u2.dimension() + pad_dim(&pads_right);
    let target = left.max(right);
    Some(EquivalenceWitness {
        pads_left,
        pads_right,
        stabilize_left: target - left,
        stabilize_right: target - right,
    })
}

impl EquivalenceWitness {
    fn side(a: &ExactMatrix, pads: &[JordanCell], k: usize) -> Result<ExactMatrix> {
        let mut m = a.clone();
        for v in pads {
            m = crate::equiv::opad(&m, &cell_matrix(v))?;
        }
        crate::equiv::stabilize(&m, k)
    }

    /// `(u1 ⊕ ξ1 ⊕ I, u2 ⊕ ξ2 ⊕ I)`.
    pub fn realize(
        &self,
        u1: &ExactMatrix,
        u2: &ExactMatrix,
    ) -> Result<(ExactMatrix, ExactMatrix)> {
        Ok((
            Self::side(u1, &self.pads_left, self.stabilize_left)?,
            Self::side(u2, &self.pads_right, self.stabilize_right)?,
        ))
    }
}

/// Spectrum of a padded side: cells, their inverses, and 1.
fn padded_spectrum(form: &JordanForm) -> Result<Spectrum> {
    let mut s = form.spectrum().union(&form.spectrum().inverted()?);
    s.insert(GaussianRational::one());
    Ok(s)
}

/// Applies a random relation move to a multiset: adds or removes a pair
/// `J_{n,λ}, J_{n,1/λ}`, a doubled order-two cell, or a `J_{1,1}`.
fn relation_move(rng: &mut impl Rng, form: &mut JordanForm, pool: &[GaussianRational]) {
    let n = rng.random_range(1..=3);
    let lambda = pool[rng.random_range(0..pool.len())].clone();
    let partner = JordanCell::new(n, lambda.inv().expect("pool is zero-free"));
    match rng.random_range(0..3) {
        0 => {
            form.insert(JordanCell::new(n, lambda), 1);
            form.insert(partner, 1);
        }
        1 => form.insert(
            JordanCell::new(1, GaussianRational::one()),
            rng.random_range(1..=2),
        ),
        _ => {
            let pm = if rng.random_bool(0.5) {
                GaussianRational::one()
            } else {
                -GaussianRational::one()
            };
            form.insert(JordanCell::new(n, pm), 2);
        }
    }
}

/// Twenty structurally distinct cell multisets with pairwise distinct
/// classes; used to check that no two are identified.
pub fn separation_catalog() -> Vec<JordanForm> {
    let c = |n: usize, s: &str| JordanCell::new(n, s.parse().expect("valid scalar"));
    let f = |cells: Vec<JordanCell>| cells.into_iter().collect::<JordanForm>();
    vec![
        f(vec![c(1, "1")]),
        f(vec![c(1, "-1")]),
        f(vec![c(2, "-1")]),
        f(vec![c(3, "-1")]),
        f(vec![c(2, "1")]),
        f(vec![c(3, "1")]),
        f(vec![c(1, "-1"), c(2, "-1")]),
        f(vec![c(2, "1"), c(2, "-1")]),
        f(vec![c(1, "2")]),
        f(vec![c(1, "1/2")]),
        f(vec![c(1, "2"), c(1, "2")]),
        f(vec![c(2, "2")]),
        f(vec![c(1, "3")]),
        f(vec![c(1, "i")]),
        f(vec![c(1, "-i")]),
        f(vec![c(2, "i")]),
        f(vec![c(1, "1+i")]),
        f(vec![c(1, "3/2-1/4i")]),
        f(vec![c(1, "2"), c(1, "3")]),
        f(vec![c(1, "2"), c(1, "-1"), c(3, "1")]),
    ]
}

/// Relations, integer reduction of inverse pairs, separation of the
/// catalog, and completeness: for random pairs of cell multisets, the
/// classes agree exactly when an explicit equivalence can be built.
fn lemma7(params: SuiteParams) -> Result<SuiteReport> {
    let mut ck = Checker::new();
    let one = GaussianRational::one();
    let minus_one = -GaussianRational::one();
    let class = |cells: &[(usize, GaussianRational, usize)]| -> Result<K1Class> {
        let mut form = JordanForm::new();
        for (n, l, m) in cells {
            form.insert(JordanCell::new(*n, l.clone()), *m);
        }
        k1_class(&form.compose(), &form.spectrum())
    };

    ck.check(
        class(&[(1, one.clone(), 1)])?.is_zero(),
        || json!({"check": "unit_cell"}),
    );
    for n in 1..=params.size {
        let single = class(&[(n, minus_one.clone(), 1)])?;
        let double = class(&[(n, minus_one.clone(), 2)])?;
        ck.check(
            !single.is_zero() && double.is_zero(),
            || json!({"check": "torsion_minus", "size": n}),
        );
        if n >= 2 {
            let single = class(&[(n, one.clone(), 1)])?;
            let double = class(&[(n, one.clone(), 2)])?;
            ck.check(
                !single.is_zero() && double.is_zero(),
                || json!({"check": "torsion_plus", "size": n}),
            );
        }
        for lambda in lambda_grid().into_iter().filter(|l| *l != minus_one) {
            let pair = class(&[(n, lambda.clone(), 1), (n, lambda.inv()?, 1)])?;
            ck.check(
                pair.is_zero(),
                || json!({"check": "inverse_pair", "cell": cell_json(n, &lambda)}),
            );
        }
    }

    for lambda in ["2", "i"].map(|s| s.parse::<GaussianRational>().expect("valid scalar")) {
        for n in 1..=3 {
            for m1 in 0..=4usize {
                for m2 in 0..=4usize {
                    let c = class(&[(n, lambda.clone(), m1), (n, lambda.inv()?, m2)])?;
                    let expected = K1Class::generator(n, &lambda, m1 as i64 - m2 as i64)?;
                    let swapped = class(&[(n, lambda.clone(), m2), (n, lambda.inv()?, m1)])?;
                    ck.check(c == expected && c == swapped.neg(), || {
                        json!({"check": "integer_reduction", "cell": cell_json(n, &lambda), "m1": m1, "m2": m2, "class": c})
                    });
                }
            }
        }
    }

    let catalog = separation_catalog();
    let classes: Vec<K1Class> = catalog
        .iter()
        .map(|f| k1_class(&f.compose(), &f.spectrum()))
        .collect::<Result<_>>()?;
    for i in 0..catalog.len() {
        for j in i + 1..catalog.len() {
            ck.check(
                classes[i] != classes[j],
                || json!({"check": "separation", "left": catalog[i], "right": catalog[j]}),
            );
        }
    }

    let pool = eigenvalue_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let max_dim = params.size.max(1);
    for _ in 0..params.trials {
        if ck.failed() {
            break;
        }
        let d1 = rng.random_range(1..=max_dim);
        let f1 = random_form(&mut rng, d1, &pool);
        let f2 = if rng.random_bool(0.6) {
            let mut f = f1.clone();
            for _ in 0..rng.random_range(1..=2) {
                relation_move(&mut rng, &mut f, &pool);
            }
            f
        } else {
            let d2 = rng.random_range(1..=max_dim);
            random_form(&mut rng, d2, &pool)
        };
        let u1 = conjugated(&f1, rng.random());
        let u2 = conjugated(&f2, rng.random());
        let same = k1_class(&u1, &f1.spectrum())? == k1_class(&u2, &f2.spectrum())?;
        let witness = equivalence_witness(&f1, &f2);
        ck.check(
            same == witness.is_some(),
            || json!({"check": "completeness", "left": f1, "right": f2, "same_class": same}),
        );
        if let Some(w) = witness {
            let (lhs, rhs) = w.realize(&u1, &u2)?;
            let spectrum = padded_spectrum(&f1.union(&f2))?;
            let conj = conjugated_pair_equal(&lhs, &rhs, &spectrum, rng.random())?;
            ck.check(
                conj,
                || json!({"check": "witness_conjugate", "left": f1, "right": f2}),
            );
        }
    }
    Ok(ck.finish(Suite::Lemma7, params.trials))
}

/// Whether `a` and a random conjugate of `b` have the same Jordan form,
/// which is exactly conjugacy.
fn conjugated_pair_equal(
    a: &ExactMatrix,
    b: &ExactMatrix,
    spectrum: &Spectrum,
    seed: u64,
) -> Result<bool> {
    if a.rows() != b.rows() {
        return Ok(false);
    }
    let b = Conjugator::random(b.rows(), seed).conjugate(b)?;
    Ok(jordan_decompose(a, spectrum)? == jordan_decompose(&b, spectrum)?)
}

/// Ten seed matrices of dimension up to `size`; `trials` pipelines are
/// distributed over them round-robin.
fn equiv(params: SuiteParams) -> Result<SuiteReport> {
    const SEED_MATRICES: usize = 10;
    let mut ck = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let pool = eigenvalue_pool();
    for i in 0..SEED_MATRICES {
        let trials = params.trials / SEED_MATRICES + usize::from(i < params.trials % SEED_MATRICES);
        let dim = rng.random_range(1..=params.size.max(1));
        let form = random_form(&mut rng, dim, &pool);
        let a = conjugated(&form, rng.random());
        if trials == 0 {
            continue;
        }
        let report =
            verify_invariance(&a, &form.spectrum(), trials, rng.random()).map_err(|e| e.error)?;
        ck.checks += trials - 1;
        ck.check(
            report.status == Status::Pass,
            || json!({"check": "invariance", "form": form, "report": report}),
        );
        if ck.failed() {
            break;
        }
    }
    Ok(ck.finish(Suite::Equiv, params.trials))
}

/// Random conjugates of diagonal idempotents have class equal to their
/// rank, for every rank up to `min(size, 6)`; stabilization by zero blocks
/// and formal differences behave accordingly.
fn k0(params: SuiteParams) -> Result<SuiteReport> {
    let mut ck = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let max_dim = params.size.max(1);
    for r in 0..=max_dim.min(6) {
        for _ in 0..params.trials {
            let n = rng.random_range(r.max(1)..=max_dim);
            let p =
                ExactMatrix::diagonal((0..n).map(|i| GaussianRational::from_int((i < r) as i64)));
            let conj = Conjugator::random(n, rng.random()).conjugate(&p)?;
            let class = k0_class(&conj)?;
            ck.check(
                class.value == r as i64,
                || json!({"check": "rank", "rank": r, "class": class}),
            );
            let zeros = rng.random_range(1..=3);
            let stable = k0_class(&conj.direct_sum(&ExactMatrix::zeros(zeros, zeros))?)?;
            ck.check(
                stable == class,
                || json!({"check": "stabilization", "rank": r}),
            );
            let diff = k0_diff(&conj, &p)?;
            ck.check(
                diff.value == 0,
                || json!({"check": "difference", "rank": r}),
            );
            if ck.failed() {
                return Ok(ck.finish(Suite::K0, params.trials));
            }
        }
    }
    Ok(ck.finish(Suite::K0, params.trials))
}
