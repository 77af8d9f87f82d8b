//! Classes in `K₀` and `K₁` of the complex numbers with the trivial
//! filtration.
//!
//! `K₀` is the integers, with an idempotent mapped to its rank.
//!
//! `K₁` is generated by the classes `[J_{n,λ}]` of invertible Jordan cells
//! subject to
//!
//! * `[J_{1,1}] = 0`,
//! * `2[J_{n,-1}] = 0` for `n ≥ 1` and `2[J_{n,1}] = 0` for `n ≥ 2`,
//! * `[J_{n,λ}] + [J_{n,1/λ}] = 0` for `λ ≠ ±1`,
//!
//! and no others. A [`K1Class`] is kept in normal form: the two families of
//! order-two generators are stored as sets of sizes, and each remaining
//! generator is keyed by the canonical member of `{λ, 1/λ}` (see
//! [`hat_normalize`]) with an integer coefficient. Normal forms are equal
//! exactly when the classes are.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exmat::ExactMatrix;
use crate::gaussq::GaussianRational;
use crate::jordan::{jordan_decompose, JordanForm, Spectrum};

/// An eigenvalue class `{λ, 1/λ}` for `λ ∉ {-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HatLambda {
    /// The member with norm > 1, or on the unit circle the one with
    /// positive imaginary part.
    pub representative: GaussianRational,
    /// Whether the input was replaced by its inverse.
    pub flipped: bool,
}

fn is_canonical(z: &GaussianRational) -> bool {
    let n = z.norm();
    n > num_rational::BigRational::one() || (n.is_one() && z.im().is_positive())
}

fn is_excluded(z: &GaussianRational) -> bool {
    z.is_zero() || z.is_one() || (-z).is_one()
}

pub fn hat_normalize(lambda: &GaussianRational) -> Result<HatLambda> {
    if is_excluded(lambda) {
        return Err(Error::ExcludedValue(Box::new(lambda.clone())));
    }
    if is_canonical(lambda) {
        Ok(HatLambda {
            representative: lambda.clone(),
            flipped: false,
        })
    } else {
        Ok(HatLambda {
            representative: lambda.inv()?,
            flipped: true,
        })
    }
}

/// Key of a free generator. Orders by eigenvalue, then size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeGenerator {
    pub eigenvalue: GaussianRational,
    pub size: usize,
}

/// An element of `K₁` in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct K1Class {
    torsion_minus: BTreeSet<usize>,
    torsion_plus: BTreeSet<usize>,
    free: BTreeMap<FreeGenerator, i64>,
}

impl K1Class {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.torsion_minus.is_empty() && self.torsion_plus.is_empty() && self.free.is_empty()
    }

    /// `coeff · [J_{size,λ}]`.
    pub fn generator(size: usize, lambda: &GaussianRational, coeff: i64) -> Result<Self> {
        let mut c = Self::zero();
        c.add_generator(size, lambda, coeff)?;
        Ok(c)
    }

    /// Adds `coeff · [J_{size,λ}]`, reducing by the defining relations.
    pub fn add_generator(
        &mut self,
        size: usize,
        lambda: &GaussianRational,
        coeff: i64,
    ) -> Result<()> {
        if size == 0 {
            return Err(Error::InvalidClass(
                "generator size must be at least 1".into(),
            ));
        }
        if lambda.is_zero() {
            return Err(Error::InvalidClass(
                "generator eigenvalue must be nonzero".into(),
            ));
        }
        let odd = coeff.rem_euclid(2) == 1;
        if lambda.is_one() {
            if size >= 2 && odd {
                toggle(&mut self.torsion_plus, size);
            }
            return Ok(());
        }
        if (-lambda).is_one() {
            if odd {
                toggle(&mut self.torsion_minus, size);
            }
            return Ok(());
        }
        let hat = hat_normalize(lambda)?;
        let signed = if hat.flipped { -coeff } else { coeff };
        let key = FreeGenerator {
            eigenvalue: hat.representative,
            size,
        };
        let entry = self.free.entry(key.clone()).or_insert(0);
        *entry += signed;
        if *entry == 0 {
            self.free.remove(&key);
        }
        Ok(())
    }

    /// Class of the direct sum of the cells in `form`.
    pub fn from_form(form: &JordanForm) -> Result<Self> {
        let mut c = Self::zero();
        for (cell, m) in form.iter() {
            let m = i64::try_from(m)
                .map_err(|_| Error::InvalidClass("multiplicity overflow".into()))?;
            c.add_generator(cell.size, &cell.eigenvalue, m)?;
        }
        Ok(c)
    }

    /// Sizes `n` with `[J_{n,-1}]` present.
    pub fn torsion_minus(&self) -> impl Iterator<Item = usize> + '_ {
        self.torsion_minus.iter().copied()
    }

    /// Sizes `n ≥ 2` with `[J_{n,1}]` present.
    pub fn torsion_plus(&self) -> impl Iterator<Item = usize> + '_ {
        self.torsion_plus.iter().copied()
    }

    /// Free generators with their nonzero coefficients.
    pub fn free(&self) -> impl Iterator<Item = (&FreeGenerator, i64)> {
        self.free.iter().map(|(k, &v)| (k, v))
    }

    /// Coefficient of `[J_{size,λ}]` in terms of the canonical generator,
    /// i.e. negated when `λ` is not the canonical member of its class.
    pub fn free_coefficient(&self, size: usize, lambda: &GaussianRational) -> Result<i64> {
        let hat = hat_normalize(lambda)?;
        let key = FreeGenerator {
            eigenvalue: hat.representative,
            size,
        };
        let c = self.free.get(&key).copied().unwrap_or(0);
        Ok(if hat.flipped { -c } else { c })
    }

    pub fn add(&self, other: &K1Class) -> K1Class {
        let mut out = self.clone();
        for &n in &other.torsion_minus {
            toggle(&mut out.torsion_minus, n);
        }
        for &n in &other.torsion_plus {
            toggle(&mut out.torsion_plus, n);
        }
        for (k, &v) in &other.free {
            let entry = out.free.entry(k.clone()).or_insert(0);
            *entry += v;
            if *entry == 0 {
                out.free.remove(k);
            }
        }
        out
    }

    /// Order-two parts are their own inverses; free coefficients negate.
    pub fn neg(&self) -> K1Class {
        K1Class {
            torsion_minus: self.torsion_minus.clone(),
            torsion_plus: self.torsion_plus.clone(),
            free: self.free.iter().map(|(k, &v)| (k.clone(), -v)).collect(),
        }
    }
}

fn toggle(set: &mut BTreeSet<usize>, n: usize) {
    if !set.remove(&n) {
        set.insert(n);
    }
}

impl std::ops::Add for &K1Class {
    type Output = K1Class;
    fn add(self, rhs: &K1Class) -> K1Class {
        K1Class::add(self, rhs)
    }
}

impl std::ops::Neg for &K1Class {
    type Output = K1Class;
    fn neg(self) -> K1Class {
        K1Class::neg(self)
    }
}

/// `K₁` class of an invertible matrix with the given complete spectrum.
pub fn k1_class(a: &ExactMatrix, spectrum: &Spectrum) -> Result<K1Class> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rank() != a.rows() {
        return Err(Error::NotInvertible);
    }
    let form = jordan_decompose(a, spectrum)?;
    K1Class::from_form(&form)
}

pub fn k1_add(x: &K1Class, y: &K1Class) -> K1Class {
    x.add(y)
}

pub fn k1_neg(x: &K1Class) -> K1Class {
    x.neg()
}

/// Equality of normal forms, which is equality in `K₁`.
pub fn k1_eq(x: &K1Class, y: &K1Class) -> bool {
    x == y
}

impl Serialize for K1Class {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Torsion<'a>(&'a BTreeSet<usize>);

        impl Serialize for Torsion<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for n in self.0 {
                    map.serialize_entry(&n.to_string(), &1)?;
                }
                map.end()
            }
        }

        let free: Vec<FreeJson> = self
            .free
            .iter()
            .map(|(k, &coeff)| FreeJson {
                size: k.size,
                eigenvalue: k.eigenvalue.clone(),
                coeff,
            })
            .collect();
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("torsion_minus", &Torsion(&self.torsion_minus))?;
        map.serialize_entry("torsion_plus", &Torsion(&self.torsion_plus))?;
        map.serialize_entry("free", &free)?;
        map.end()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeJson {
    size: usize,
    eigenvalue: GaussianRational,
    coeff: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct K1Json {
    #[serde(default)]
    torsion_minus: BTreeMap<String, i64>,
    #[serde(default)]
    torsion_plus: BTreeMap<String, i64>,
    #[serde(default)]
    free: Vec<FreeJson>,
}

impl TryFrom<K1Json> for K1Class {
    type Error = Error;

    /// Accepts any coefficients and eigenvalues and reduces them to normal
    /// form, so hand-written classes need not be canonical.
    fn try_from(json: K1Json) -> Result<Self> {
        let size = |key: &str| {
            key.parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::InvalidClass(format!("bad torsion size {key:?}")))
        };
        let mut c = K1Class::zero();
        for (key, coeff) in &json.torsion_minus {
            c.add_generator(size(key)?, &-GaussianRational::one(), *coeff)?;
        }
        for (key, coeff) in &json.torsion_plus {
            c.add_generator(size(key)?, &GaussianRational::one(), *coeff)?;
        }
        for f in &json.free {
            c.add_generator(f.size, &f.eigenvalue, f.coeff)?;
        }
        Ok(c)
    }
}

impl<'de> Deserialize<'de> for K1Class {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = K1Json::deserialize(d)?;
        K1Class::try_from(json).map_err(serde::de::Error::custom)
    }
}

/// An element of `K₀ = Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct K0Class {
    pub value: i64,
}

fn require_idempotent(p: &ExactMatrix) -> Result<()> {
    if !p.is_square() {
        return Err(Error::NonSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    if &p.mul(p)? != p {
        return Err(Error::NotIdempotent);
    }
    Ok(())
}

/// Class of an idempotent: its rank.
pub fn k0_class(p: &ExactMatrix) -> Result<K0Class> {
    require_idempotent(p)?;
    Ok(K0Class {
        value: p.rank() as i64,
    })
}

/// Formal difference `[p] − [q]`.
pub fn k0_diff(p: &ExactMatrix, q: &ExactMatrix) -> Result<K0Class> {
    let a = k0_class(p)?;
    let b = k0_class(q)?;
    Ok(K0Class {
        value: a.value - b.value,
    })
}
