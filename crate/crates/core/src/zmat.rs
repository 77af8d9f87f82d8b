//! Fraction-free kernels over the Gaussian integers.
//!
//! Rank computations dominate the cost of Jordan decomposition. Clearing
//! denominators and running Bareiss elimination over `Z[i]` avoids a gcd
//! per arithmetic operation, which is what makes 48x48 conjugated inputs
//! tractable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exmat::ExactMatrix;
use crate::gaussq::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        GaussInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, rhs: &GaussInt) -> GaussInt {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussInt {
                re: &self.re * &rhs.re,
                im: BigInt::zero(),
            };
        }
        GaussInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn sub(&self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn add_assign(&mut self, rhs: &GaussInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }

    /// Division known to be exact in `Z[i]`.
    fn div_exact(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() {
            debug_assert!((&self.re % &d.re).is_zero() && (&self.im % &d.re).is_zero());
            return GaussInt {
                re: &self.re / &d.re,
                im: &self.im / &d.re,
            };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        debug_assert!((&re % &n).is_zero() && (&im % &n).is_zero());
        GaussInt {
            re: re / &n,
            im: im / n,
        }
    }
}

/// Dense square-or-rectangular matrix over `Z[i]`, row-major.
#[derive(Clone, Debug)]
pub(crate) struct GaussIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussInt>,
}

impl GaussIntMatrix {
    /// `d · a` for the least common denominator `d` of every entry of `a`.
    /// The result has the same rank as `a`, and its powers are positive
    /// scalar multiples of the powers of `a`.
    pub(crate) fn scaled_from(a: &ExactMatrix) -> Self {
        let mut lcm = BigInt::one();
        for z in a.entries() {
            lcm = lcm.lcm(z.re().denom());
            lcm = lcm.lcm(z.im().denom());
        }
        let entries = a.entries().iter().map(|z| to_gauss_int(z, &lcm)).collect();
        GaussIntMatrix {
            rows: a.rows(),
            cols: a.cols(),
            entries,
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussInt::is_zero)
    }

    pub(crate) fn mul(&self, rhs: &GaussIntMatrix) -> GaussIntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = vec![GaussInt::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.entries[k * rhs.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    out[i * rhs.cols + j].add_assign(&a.mul(b));
                }
            }
        }
        let mut m = GaussIntMatrix {
            rows: self.rows,
            cols: rhs.cols,
            entries: out,
        };
        m.remove_content();
        m
    }

    /// Divide every entry by the gcd of all integer components.
    fn remove_content(&mut self) {
        let mut g = BigInt::zero();
        for z in &self.entries {
            g = g.gcd(&z.re).gcd(&z.im);
            if g.is_one() {
                return;
            }
        }
        if g.is_zero() {
            return;
        }
        for z in &mut self.entries {
            z.re /= &g;
            z.im /= &g;
        }
    }

    /// Rank by Bareiss fraction-free elimination. Pivots are the first
    /// nonzero entry of each column, scanning columns left to right.
    pub(crate) fn rank(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.entries.clone();
        let mut prev = GaussInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        };
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
                continue;
            };
            if p != rank {
                for j in col..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let pivot = m[rank * cols + col].clone();
            for r in rank + 1..rows {
                let factor = m[r * cols + col].clone();
                for j in col + 1..cols {
                    let lhs = pivot.mul(&m[r * cols + j]);
                    let rhs = factor.mul(&m[rank * cols + j]);
                    m[r * cols + j] = lhs.sub(&rhs).div_exact(&prev);
                }
                m[r * cols + col] = GaussInt::zero();
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

fn to_gauss_int(z: &GaussianRational, lcm: &BigInt) -> GaussInt {
    let scale = |r: &num_rational::BigRational| (lcm / r.denom()) * r.numer();
    GaussInt {
        re: scale(z.re()),
        im: scale(z.im()),
    }
}
