//! Jordan cells and recovery of the Jordan canonical form from rank
//! sequences.
//!
//! For an eigenvalue `λ` of an `n×n` matrix `A`, write `r_k` for the rank of
//! `(A − λI)^k`. The sequence is non-increasing and becomes constant once
//! `k` reaches the size of the largest cell at `λ`. The number of cells of
//! size exactly `k` is the second difference `r_{k-1} − 2 r_k + r_{k+1}`,
//! and `n − r_∞` is the algebraic multiplicity of `λ`. The spectrum is
//! always supplied by the caller and checked for completeness against
//! those multiplicities; no root finding is attempted.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exmat::ExactMatrix;
use crate::gaussq::GaussianRational;
use crate::zmat::GaussIntMatrix;

/// A single Jordan block: `size × size`, eigenvalue on the diagonal and
/// ones on the superdiagonal. Orders by eigenvalue, then size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanCell {
    pub eigenvalue: GaussianRational,
    pub size: usize,
}

impl JordanCell {
    /// Panics if `size == 0`.
    pub fn new(size: usize, eigenvalue: GaussianRational) -> Self {
        assert!(size >= 1, "jordan cells have size at least 1");
        JordanCell { eigenvalue, size }
    }

    pub fn is_invertible(&self) -> bool {
        !self.eigenvalue.is_zero()
    }

    pub fn matrix(&self) -> ExactMatrix {
        cell_matrix(self)
    }
}

/// The matrix of a Jordan cell.
pub fn cell_matrix(cell: &JordanCell) -> ExactMatrix {
    let n = cell.size;
    ExactMatrix::from_fn(n, n, |r, c| {
        if r == c {
            cell.eigenvalue.clone()
        } else if c == r + 1 {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }
    })
}

/// `k`-th power of the `n×n` upper shift: ones on the `k`-th superdiagonal
/// for `k < n`, the zero matrix for `k ≥ n`.
pub fn nilpotent_power(n: usize, k: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n, n, |r, c| {
        if c == r + k {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }
    })
}

/// Closed-form inverse of a Jordan cell,
/// `Σ_{k<n} (−1)^k / λ^{k+1} · M^k` with `M` the upper shift.
pub fn cell_inverse(cell: &JordanCell) -> Result<ExactMatrix> {
    let inv_lambda = cell.eigenvalue.inv().map_err(|_| Error::SingularCell)?;
    let n = cell.size;
    let neg_inv = -&inv_lambda;
    // coeff[k] = (−1)^k / λ^{k+1}
    let mut coeff = Vec::with_capacity(n);
    let mut c = inv_lambda;
    for _ in 0..n {
        let next = &c * &neg_inv;
        coeff.push(c);
        c = next;
    }
    Ok(ExactMatrix::from_fn(n, n, |r, col| {
        if col >= r {
            coeff[col - r].clone()
        } else {
            GaussianRational::zero()
        }
    }))
}

/// A set of distinct eigenvalues supplied alongside a matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Spectrum(BTreeSet<GaussianRational>);

impl Spectrum {
    pub fn new<I: IntoIterator<Item = GaussianRational>>(eigenvalues: I) -> Self {
        Spectrum(eigenvalues.into_iter().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &GaussianRational> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        self.0.contains(z)
    }

    pub fn insert(&mut self, z: GaussianRational) {
        self.0.insert(z);
    }

    pub fn union(&self, other: &Spectrum) -> Spectrum {
        Spectrum(self.0.union(&other.0).cloned().collect())
    }

    /// Spectrum of the inverse matrix. Fails on a zero eigenvalue.
    pub fn inverted(&self) -> Result<Spectrum> {
        self.0
            .iter()
            .map(GaussianRational::inv)
            .collect::<Result<_>>()
            .map(Spectrum)
    }
}

impl FromIterator<GaussianRational> for Spectrum {
    fn from_iter<I: IntoIterator<Item = GaussianRational>>(iter: I) -> Self {
        Spectrum::new(iter)
    }
}

/// Comma-separated scalars, e.g. `"2,1/2,i"`.
impl FromStr for Spectrum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut offset = 0;
        let mut out = BTreeSet::new();
        for part in s.split(',') {
            let z = part.parse::<GaussianRational>().map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: position + offset,
                    message,
                },
                other => other,
            })?;
            out.insert(z);
            offset += part.len() + 1;
        }
        Ok(Spectrum(out))
    }
}

/// Jordan canonical form as a multiset of cells. Equality ignores the
/// order in which cells were inserted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "JordanFormJson", into = "JordanFormJson")]
pub struct JordanForm {
    cells: BTreeMap<JordanCell, usize>,
}

impl JordanForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(cell: JordanCell) -> Self {
        let mut f = Self::new();
        f.insert(cell, 1);
        f
    }

    /// Adds `multiplicity` copies of `cell`.
    pub fn insert(&mut self, cell: JordanCell, multiplicity: usize) {
        if multiplicity > 0 {
            *self.cells.entry(cell).or_insert(0) += multiplicity;
        }
    }

    pub fn multiplicity(&self, cell: &JordanCell) -> usize {
        self.cells.get(cell).copied().unwrap_or(0)
    }

    /// Cells with multiplicities in (eigenvalue, size) order.
    pub fn iter(&self) -> impl Iterator<Item = (&JordanCell, usize)> {
        self.cells.iter().map(|(c, &m)| (c, m))
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Σ size × multiplicity.
    pub fn dimension(&self) -> usize {
        self.iter().map(|(c, m)| c.size * m).sum()
    }

    pub fn spectrum(&self) -> Spectrum {
        self.cells.keys().map(|c| c.eigenvalue.clone()).collect()
    }

    /// Multiset union.
    pub fn union(&self, other: &JordanForm) -> JordanForm {
        let mut out = self.clone();
        for (c, m) in other.iter() {
            out.insert(c.clone(), m);
        }
        out
    }

    /// Direct sum of the cell matrices in (eigenvalue, size) order.
    pub fn compose(&self) -> ExactMatrix {
        let blocks: Vec<ExactMatrix> = self
            .iter()
            .flat_map(|(c, m)| std::iter::repeat_n(c, m))
            .map(cell_matrix)
            .collect();
        ExactMatrix::block_diagonal(&blocks).expect("cell matrices are square")
    }
}

impl FromIterator<JordanCell> for JordanForm {
    fn from_iter<I: IntoIterator<Item = JordanCell>>(iter: I) -> Self {
        let mut f = JordanForm::new();
        for c in iter {
            f.insert(c, 1);
        }
        f
    }
}

/// Direct sum of the cell matrices of `form`; see [`JordanForm::compose`].
pub fn compose(form: &JordanForm) -> ExactMatrix {
    form.compose()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellJson {
    size: usize,
    eigenvalue: GaussianRational,
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JordanFormJson {
    cells: Vec<CellJson>,
}

impl From<JordanForm> for JordanFormJson {
    fn from(f: JordanForm) -> Self {
        JordanFormJson {
            cells: f
                .cells
                .into_iter()
                .map(|(c, m)| CellJson {
                    size: c.size,
                    eigenvalue: c.eigenvalue,
                    multiplicity: m,
                })
                .collect(),
        }
    }
}

impl TryFrom<JordanFormJson> for JordanForm {
    type Error = String;

    fn try_from(json: JordanFormJson) -> std::result::Result<Self, String> {
        let mut f = JordanForm::new();
        for c in json.cells {
            if c.size == 0 || c.multiplicity == 0 {
                return Err("cell size and multiplicity must be at least 1".into());
            }
            f.insert(JordanCell::new(c.size, c.eigenvalue), c.multiplicity);
        }
        Ok(f)
    }
}

/// Ranks `r_0, r_1, …` of `(a − λI)^k`, stopping at the first `k` with
/// `r_k = r_{k-1}`. The last element is therefore the stable rank and the
/// sequence has at least two elements.
pub fn rank_sequence(a: &ExactMatrix, lambda: &GaussianRational) -> Result<Vec<usize>> {
    let shifted = a.shift(lambda)?;
    let n = a.rows();
    let mut ranks = vec![n];
    if n == 0 {
        ranks.push(0);
        return Ok(ranks);
    }
    let base = GaussIntMatrix::scaled_from(&shifted);
    let mut power = base.clone();
    loop {
        let r = if power.is_zero() { 0 } else { power.rank() };
        let stable = Some(&r) == ranks.last();
        ranks.push(r);
        if stable {
            return Ok(ranks);
        }
        power = power.mul(&base);
    }
}

/// Smallest `k` with `rank((a − λI)^k) = rank((a − λI)^{k+1})`: the size of
/// the largest cell at `λ`, or 0 when `λ` is not an eigenvalue.
pub fn jordan_rank(a: &ExactMatrix, lambda: &GaussianRational) -> Result<usize> {
    Ok(rank_sequence(a, lambda)?.len() - 2)
}

/// Cells at `λ` counted from a rank sequence as produced by
/// [`rank_sequence`].
fn cells_from_ranks(lambda: &GaussianRational, ranks: &[usize], form: &mut JordanForm) {
    let at = |k: usize| ranks[k.min(ranks.len() - 1)] as isize;
    for k in 1..ranks.len() {
        let count = at(k - 1) - 2 * at(k) + at(k + 1);
        debug_assert!(count >= 0, "rank sequence is not convex: {ranks:?}");
        if count > 0 {
            form.insert(JordanCell::new(k, lambda.clone()), count as usize);
        }
    }
}

/// Jordan form of `a`, given the complete set of its eigenvalues.
pub fn jordan_decompose(a: &ExactMatrix, spectrum: &Spectrum) -> Result<JordanForm> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut form = JordanForm::new();
    let mut covered = 0;
    for lambda in spectrum.iter() {
        let ranks = rank_sequence(a, lambda)?;
        covered += n - ranks[ranks.len() - 1];
        cells_from_ranks(lambda, &ranks, &mut form);
    }
    if covered != n {
        return Err(Error::IncompleteSpectrum {
            dimension: n,
            covered,
        });
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn cell(n: usize, s: &str) -> JordanCell {
        JordanCell::new(n, q(s))
    }

    /// Upper shift `J_{n,λ} − λI`, built independently of `nilpotent_power`.
    fn shift(n: usize) -> ExactMatrix {
        cell_matrix(&cell(n, "0"))
    }

    /// Rank sequence through plain powers and rank: the oracle for the
    /// fraction-free sequence in `rank_sequence`.
    fn oracle_ranks(a: &ExactMatrix, lambda: &GaussianRational, upto: usize) -> Vec<usize> {
        let shifted = a.shift(lambda).unwrap();
        (0..=upto)
            .map(|k| shifted.power(k).unwrap().rank())
            .collect()
    }

    #[test]
    fn cell_matrix_examples() {
        assert_eq!(
            cell_matrix(&cell(1, "7/3")),
            ExactMatrix::diagonal([q("7/3")])
        );
        assert_eq!(
            cell_matrix(&cell(3, "2")),
            ExactMatrix::from_int_rows(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 2]])
        );
        assert_eq!(cell_matrix(&cell(4, "0")).rank(), 3);
        assert!(!cell(4, "0").is_invertible());
    }

    #[test]
    fn nilpotent_power_examples() {
        let m = nilpotent_power(4, 2);
        let mut expected = ExactMatrix::zeros(4, 4);
        expected.set(0, 2, q("1"));
        expected.set(1, 3, q("1"));
        assert_eq!(m, expected);
        assert!(nilpotent_power(3, 3).is_zero());
        assert_eq!(nilpotent_power(5, 0), ExactMatrix::identity(5));
    }

    #[test]
    fn nilpotent_power_matches_repeated_multiplication() {
        for n in 1..=8 {
            for k in 0..=n + 2 {
                assert_eq!(
                    nilpotent_power(n, k),
                    shift(n).power(k).unwrap(),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn cell_inverse_examples() {
        assert_eq!(
            cell_inverse(&cell(1, "2")).unwrap(),
            ExactMatrix::diagonal([q("1/2")])
        );
        let expected =
            ExactMatrix::from_rows(vec![vec![q("1/2"), q("-1/4")], vec![q("0"), q("1/2")]])
                .unwrap();
        assert_eq!(cell_inverse(&cell(2, "2")).unwrap(), expected);
        assert_eq!(
            cell_inverse(&cell(3, "-1")).unwrap(),
            ExactMatrix::from_int_rows(&[&[-1, -1, -1], &[0, -1, -1], &[0, 0, -1]])
        );
        assert_eq!(cell_inverse(&cell(3, "0")), Err(Error::SingularCell));
    }

    #[test]
    fn cell_inverse_matches_elimination() {
        for lambda in ["2", "1/2", "-1", "i", "1+i", "3/2-1/4i", "-7/5"] {
            for n in 1..=8 {
                let c = cell(n, lambda);
                assert_eq!(
                    cell_inverse(&c).unwrap(),
                    cell_matrix(&c).inverse().unwrap(),
                    "n={n} λ={lambda}"
                );
            }
        }
    }

    #[test]
    fn rank_sequence_matches_power_oracle() {
        let form: JordanForm = [cell(3, "2"), cell(1, "2"), cell(2, "i"), cell(2, "2")]
            .into_iter()
            .collect();
        let a = form.compose();
        for lambda in ["2", "i", "5"] {
            let seq = rank_sequence(&a, &q(lambda)).unwrap();
            let oracle = oracle_ranks(&a, &q(lambda), seq.len() - 1);
            assert_eq!(seq, oracle, "λ={lambda}");
        }
        assert_eq!(rank_sequence(&a, &q("2")).unwrap(), vec![8, 5, 3, 2, 2]);
    }

    #[test]
    fn shifted_ranks_of_a_cell() {
        for n in 1..=6 {
            let j = cell_matrix(&cell(n, "3/2-1/4i"));
            let ranks = oracle_ranks(&j, &q("3/2-1/4i"), n);
            assert_eq!(ranks, (0..=n).map(|k| n - k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn jordan_rank_examples() {
        assert_eq!(
            jordan_rank(&cell_matrix(&cell(3, "5")), &q("5")).unwrap(),
            3
        );
        let inv = cell_inverse(&cell(3, "5")).unwrap();
        assert_eq!(jordan_rank(&inv, &q("1/5")).unwrap(), 3);
        assert_eq!(jordan_rank(&ExactMatrix::identity(3), &q("7")).unwrap(), 0);
        assert_eq!(jordan_rank(&ExactMatrix::identity(3), &q("1")).unwrap(), 1);
        let mixed: JordanForm = [cell(2, "4"), cell(4, "4"), cell(3, "1")]
            .into_iter()
            .collect();
        assert_eq!(jordan_rank(&mixed.compose(), &q("4")).unwrap(), 4);
    }

    #[test]
    fn decompose_examples() {
        let a = cell_matrix(&cell(2, "3"))
            .direct_sum(&cell_matrix(&cell(1, "3")))
            .unwrap();
        let form = jordan_decompose(&a, &Spectrum::new([q("3")])).unwrap();
        let expected: JordanForm = [cell(2, "3"), cell(1, "3")].into_iter().collect();
        assert_eq!(form, expected);

        let id = ExactMatrix::identity(4);
        let mut expected = JordanForm::new();
        expected.insert(cell(1, "1"), 4);
        assert_eq!(
            jordan_decompose(&id, &Spectrum::new([q("1")])).unwrap(),
            expected
        );
    }

    #[test]
    fn decompose_reports_incomplete_spectrum() {
        let id = ExactMatrix::identity(2);
        let err = jordan_decompose(&id, &Spectrum::new([q("5")])).unwrap_err();
        assert_eq!(
            err,
            Error::IncompleteSpectrum {
                dimension: 2,
                covered: 0
            }
        );
        assert_eq!(err.spectrum_deficit(), Some(2));

        let a = ExactMatrix::diagonal([q("2"), q("3"), q("3")]);
        let err = jordan_decompose(&a, &Spectrum::new([q("3")])).unwrap_err();
        assert_eq!(err.spectrum_deficit(), Some(1));
        assert!(matches!(
            jordan_decompose(&ExactMatrix::zeros(2, 3), &Spectrum::default()),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn decompose_empty_matrix() {
        let f = jordan_decompose(&ExactMatrix::zeros(0, 0), &Spectrum::default()).unwrap();
        assert!(f.is_empty());
        assert_eq!(compose(&f), ExactMatrix::zeros(0, 0));
    }

    #[test]
    fn compose_orders_by_eigenvalue_then_size() {
        let f: JordanForm = [cell(1, "3"), cell(2, "3"), cell(1, "i")]
            .into_iter()
            .collect();
        let expected = ExactMatrix::block_diagonal(&[
            cell_matrix(&cell(1, "i")),
            cell_matrix(&cell(1, "3")),
            cell_matrix(&cell(2, "3")),
        ])
        .unwrap();
        assert_eq!(f.compose(), expected);
        assert_eq!(f.dimension(), 4);
    }

    #[test]
    fn form_json() {
        let mut f = JordanForm::new();
        f.insert(cell(2, "3"), 1);
        f.insert(cell(1, "3"), 2);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"cells":[{"size":1,"eigenvalue":"3","multiplicity":2},{"size":2,"eigenvalue":"3","multiplicity":1}]}"#
        );
        assert_eq!(serde_json::from_str::<JordanForm>(&json).unwrap(), f);
        assert!(serde_json::from_str::<JordanForm>(
            r#"{"cells":[{"size":0,"eigenvalue":"3","multiplicity":1}]}"#
        )
        .is_err());
    }

    #[test]
    fn spectrum_parsing() {
        let s: Spectrum = "2,1/2,i,2".parse().unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.contains(&q("1/2")));
        match "2,1/0".parse::<Spectrum>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(s.inverted().unwrap(), "1/2,2,-i".parse().unwrap());
    }
}
