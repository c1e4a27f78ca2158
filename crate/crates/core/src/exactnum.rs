//! Exact rational scalars, vectors and matrices.
//!
//! Everything downstream (hulls, volumes, valuations) is decided by exact
//! arithmetic; floats only ever appear as display approximations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Error;

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p/q" or "p" with optional leading minus on the numerator.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let u = t.strip_prefix('-').unwrap_or(t);
        !u.is_empty() && u.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num) || !ok(den) || den.starts_with('-') {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as "p/q", or just "p" when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64; display-only, never fed back into exact computations.
pub fn to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).expect("rational out of f64 range")
}

/// Fixed-length exact vector in Q^n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RVector {
    coords: Vec<Rational>,
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl RVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RVector::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        RVector::new(vec![Rational::zero(); dim])
    }

    /// Standard basis vector e_i.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = RVector::zero(dim);
        v.coords[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &RVector) -> RVector {
        assert_eq!(self.dim(), other.dim());
        RVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &RVector) -> RVector {
        assert_eq!(self.dim(), other.dim());
        RVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> RVector {
        RVector::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Rational) -> RVector {
        RVector::new(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &RVector) -> Rational {
        assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Writes the integer coordinates, or None if any coordinate is fractional.
    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|c| c.denom().is_one().then(|| c.numer().clone()))
            .collect()
    }

    /// The primitive integer vector w parallel to self together with the
    /// positive scale s such that self = s * w. Errors on the zero vector.
    pub fn primitive(&self) -> Result<(RVector, Rational), Error> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        // Clear denominators, then divide out the gcd; keep the direction.
        let denom_lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |g, v| g.gcd(v));
        let prim = RVector::new(
            ints.iter()
                .map(|v| Rational::from_integer(v / &g))
                .collect(),
        );
        // self = (g / lcm) * prim, and g, lcm > 0.
        let scale = Rational::new(g, denom_lcm);
        Ok((prim, scale))
    }

    pub fn lex_cmp(&self, other: &RVector) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

/// Rectangular exact matrix, stored as rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMatrix {
    rows: Vec<RVector>,
    ncols: usize,
}

impl RMatrix {
    /// A matrix with the given rows; `ncols` disambiguates the zero-row case.
    pub fn new(rows: Vec<RVector>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.dim() == ncols), "ragged rows");
        RMatrix { rows, ncols }
    }

    pub fn from_rows(rows: Vec<RVector>) -> Self {
        let ncols = rows.first().map_or(0, RVector::dim);
        RMatrix::new(rows, ncols)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        RMatrix::from_rows(rows.iter().map(|r| RVector::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        RMatrix::new((0..n).map(|i| RVector::unit(n, i)).collect(), n)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[RVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &RVector {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.rows[i].coord(j)
    }

    /// Matrix-vector product (self as linear map applied to v).
    pub fn apply(&self, v: &RVector) -> RVector {
        RVector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// Reduced row echelon form: pivots are 1 and alone in their column,
    /// pivot columns strictly increase, zero rows sink to the bottom.
    /// Returns the reduced matrix and the pivot column indices.
    pub fn rref(&self) -> (RMatrix, Vec<usize>) {
        let mut rows: Vec<Vec<Rational>> =
            self.rows.iter().map(|r| r.coords().to_vec()).collect();
        let (m, n) = (rows.len(), self.ncols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for x in &mut rows[r] {
                *x *= &inv;
            }
            for i in 0..m {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..n {
                        let t = &rows[r][j] * &f;
                        rows[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        let mat = RMatrix::new(rows.into_iter().map(RVector::new).collect(), n);
        (mat, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of { x : self * x = 0 }, one vector per free column of the RREF,
    /// in increasing free-column order, with the free coordinate set to 1.
    pub fn kernel_basis(&self) -> Vec<RVector> {
        let (red, pivots) = self.rref();
        let n = self.ncols;
        let mut basis = Vec::new();
        for j in 0..n {
            if pivots.contains(&j) {
                continue;
            }
            let mut v = vec![Rational::zero(); n];
            v[j] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -red.entry(i, j).clone();
            }
            basis.push(RVector::new(v));
        }
        basis
    }

    /// Determinant of a square matrix via fraction-based Gaussian elimination.
    pub fn det(&self) -> Rational {
        assert_eq!(self.nrows(), self.ncols, "determinant of non-square matrix");
        let n = self.nrows();
        let mut rows: Vec<Vec<Rational>> =
            self.rows.iter().map(|r| r.coords().to_vec()).collect();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                rows.swap(c, p);
                det = -det;
            }
            det *= &rows[c][c];
            let inv = rows[c][c].recip();
            for i in c + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = &rows[i][c] * &inv;
                for j in c..n {
                    let t = &rows[c][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        det
    }

    /// Solves self * x = rhs for square invertible self.
    pub fn solve(&self, rhs: &RVector) -> Option<RVector> {
        assert_eq!(self.nrows(), self.ncols);
        assert_eq!(rhs.dim(), self.nrows());
        let n = self.nrows();
        let aug = RMatrix::new(
            self.rows
                .iter()
                .zip(rhs.coords())
                .map(|(r, b)| {
                    let mut c = r.coords().to_vec();
                    c.push(b.clone());
                    RVector::new(c)
                })
                .collect(),
            n + 1,
        );
        let (red, pivots) = aug.rref();
        if pivots.len() != n || pivots.contains(&n) {
            return None;
        }
        Some(RVector::new(
            (0..n).map(|i| red.entry(i, n).clone()).collect(),
        ))
    }

    /// Inverse of a square invertible matrix, or None if singular.
    pub fn inverse(&self) -> Option<RMatrix> {
        assert_eq!(self.nrows(), self.ncols);
        let n = self.nrows();
        let aug = RMatrix::new(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut c = r.coords().to_vec();
                    c.extend(RVector::unit(n, i).coords().iter().cloned());
                    RVector::new(c)
                })
                .collect(),
            2 * n,
        );
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(RMatrix::new(
            (0..n)
                .map(|i| RVector::new((n..2 * n).map(|j| red.entry(i, j).clone()).collect()))
                .collect(),
            n,
        ))
    }
}

/// Determinant of the Gram matrix of the given vectors; 1 for the empty set,
/// 0 exactly when the vectors are linearly dependent.
pub fn gram_determinant(vs: &[RVector]) -> Rational {
    let k = vs.len();
    let gram = RMatrix::new(
        (0..k)
            .map(|i| RVector::new((0..k).map(|j| vs[i].dot(&vs[j])).collect()))
            .collect(),
        k,
    );
    gram.det()
}
