//! Quaternions and octonions built by Cayley–Dickson doubling.
//!
//! Both algebras share one value type, [`Hypercomplex`], tagged with its
//! [`Algebra`]. Products go through a signed-index [`BasisTable`] that is
//! generated once from the recursive doubling rule
//!
//! ```text
//! (a, b)(c, d) = (ac − d̄b, da + bc̄)
//! ```
//!
//! starting from the reals. With this rule the quaternion block reads
//! `ij = k`, `jk = i`, `ki = j`, and the octonion table restricted to
//! indices `0..4` is exactly the quaternion table.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default distance from the real axis below which [`unit_imaginary`]
/// refuses to pick a plane.
pub const DEFAULT_EPS_AXIS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algebra {
    Quaternion,
    Octonion,
}

impl Algebra {
    pub const fn dim(self) -> usize {
        match self {
            Algebra::Quaternion => 4,
            Algebra::Octonion => 8,
        }
    }

    pub fn from_dim(dim: usize) -> Result<Self> {
        match dim {
            4 => Ok(Algebra::Quaternion),
            8 => Ok(Algebra::Octonion),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Algebra::Quaternion => "quaternion",
            Algebra::Octonion => "octonion",
        }
    }

    pub fn basis_table(self) -> &'static BasisTable {
        match self {
            Algebra::Quaternion => &QUATERNION_TABLE,
            Algebra::Octonion => &OCTONION_TABLE,
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quaternion" | "4" => Ok(Algebra::Quaternion),
            "octonion" | "8" => Ok(Algebra::Octonion),
            other => Err(Error::Config(format!(
                "unknown algebra `{other}` (expected quaternion or octonion)"
            ))),
        }
    }
}

/// A quaternion or octonion `x₀ + x₁e₁ + … + x_{d−1}e_{d−1}`.
///
/// Components beyond the algebra's dimension are always zero, so derived
/// equality and the arithmetic below never see stale data.
#[derive(Clone, Copy, PartialEq)]
pub struct Hypercomplex {
    algebra: Algebra,
    c: [f64; 8],
}

impl Hypercomplex {
    pub fn new(algebra: Algebra, components: &[f64]) -> Result<Self> {
        if components.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: components.len(),
            });
        }
        let mut c = [0.0; 8];
        c[..components.len()].copy_from_slice(components);
        Ok(Self { algebra, c })
    }

    /// Builds an element from a slice whose length selects the algebra.
    pub fn from_slice(components: &[f64]) -> Result<Self> {
        Self::new(Algebra::from_dim(components.len())?, components)
    }

    pub fn quaternion(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self {
            algebra: Algebra::Quaternion,
            c: [x0, x1, x2, x3, 0.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn zero(algebra: Algebra) -> Self {
        Self {
            algebra,
            c: [0.0; 8],
        }
    }

    pub fn one(algebra: Algebra) -> Self {
        Self::real(algebra, 1.0)
    }

    pub fn real(algebra: Algebra, x: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = x;
        Self { algebra, c }
    }

    /// The basis unit `e_index` (`e_0 = 1`).
    ///
    /// # Panics
    ///
    /// If `index >= algebra.dim()`.
    pub fn unit(algebra: Algebra, index: usize) -> Self {
        assert!(
            index < algebra.dim(),
            "basis index {index} out of range for {algebra}"
        );
        let mut c = [0.0; 8];
        c[index] = 1.0;
        Self { algebra, c }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn components(&self) -> &[f64] {
        &self.c[..self.algebra.dim()]
    }

    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// The pure-imaginary coordinates `x₁ … x_{d−1}`.
    pub fn imag(&self) -> &[f64] {
        &self.c[1..self.algebra.dim()]
    }

    pub fn imag_norm(&self) -> f64 {
        self.imag().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        for x in &mut out.c[1..] {
            *x = -*x;
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for x in &mut out.c {
            *x *= s;
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj().scale(1.0 / n))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(self
            .algebra
            .basis_table()
            .multiply(&self.c, &rhs.c, self.algebra))
    }

    /// `self` raised to a non-negative integer power by repeated left
    /// multiplication, `q·(q·(…·q))`.
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(self.algebra);
        for _ in 0..n {
            acc = *self * acc;
        }
        acc
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Hypercomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.algebra, self.components())
    }
}

impl fmt::Display for Hypercomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const Q: [&str; 4] = ["", "i", "j", "k"];
        write!(f, "{}", self.c[0])?;
        for (k, x) in self.components().iter().enumerate().skip(1) {
            let sign = if x.is_sign_negative() { '-' } else { '+' };
            match self.algebra {
                Algebra::Quaternion => write!(f, " {sign} {}{}", x.abs(), Q[k])?,
                Algebra::Octonion => write!(f, " {sign} {}e{k}", x.abs())?,
            }
        }
        Ok(())
    }
}

impl Add for Hypercomplex {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(
            self.algebra, rhs.algebra,
            "adding elements of different algebras"
        );
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        self
    }
}

impl AddAssign for Hypercomplex {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Hypercomplex {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Hypercomplex {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Hypercomplex {
    type Output = Self;

    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// Algebra product.
///
/// # Panics
///
/// If the operands belong to different algebras; use
/// [`Hypercomplex::try_mul`] for a fallible product.
impl Mul for Hypercomplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs)
            .unwrap_or_else(|e| panic!("hypercomplex product: {e}"))
    }
}

pub fn multiply(a: &Hypercomplex, b: &Hypercomplex) -> Result<Hypercomplex> {
    a.try_mul(b)
}

pub fn conjugate(a: &Hypercomplex) -> Hypercomplex {
    a.conj()
}

pub fn norm_sq(a: &Hypercomplex) -> f64 {
    a.norm_sq()
}

pub fn inverse(a: &Hypercomplex) -> Result<Hypercomplex> {
    a.inverse()
}

/// `ab − ba`
pub fn commutator(a: &Hypercomplex, b: &Hypercomplex) -> Result<Hypercomplex> {
    Ok(a.try_mul(b)? - b.try_mul(a)?)
}

/// `(ab)c − a(bc)`
pub fn associator(a: &Hypercomplex, b: &Hypercomplex, c: &Hypercomplex) -> Result<Hypercomplex> {
    Ok(a.try_mul(b)?.try_mul(c)? - a.try_mul(&b.try_mul(c)?)?)
}

/// Unit pure-imaginary direction; squares to −1.
#[derive(Clone, Copy, PartialEq)]
pub struct ImaginaryDirection {
    algebra: Algebra,
    c: [f64; 7],
}

impl ImaginaryDirection {
    /// Accepts a vector of `dim − 1` imaginary coordinates whose squared
    /// length is within `tol` of one.
    pub fn new(algebra: Algebra, components: &[f64], tol: f64) -> Result<Self> {
        if components.len() != algebra.dim() - 1 {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim() - 1,
                found: components.len(),
            });
        }
        let len_sq: f64 = components.iter().map(|x| x * x).sum();
        if !len_sq.is_finite() || (len_sq - 1.0).abs() > tol {
            return Err(Error::spec(
                "iota",
                format!("not a unit vector (squared length {len_sq})"),
            ));
        }
        let mut c = [0.0; 7];
        c[..components.len()].copy_from_slice(components);
        Ok(Self { algebra, c })
    }

    /// Normalizes an arbitrary nonzero imaginary vector.
    pub fn normalized(algebra: Algebra, components: &[f64]) -> Result<Self> {
        let len = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len == 0.0 {
            return Err(Error::RealAxisSingularity {
                imag_norm: 0.0,
                eps_axis: 0.0,
            });
        }
        let scaled: Vec<f64> = components.iter().map(|x| x / len).collect();
        Self::new(algebra, &scaled, 1e-12)
    }

    /// The basis unit `e_index` as a direction, `1 ≤ index < dim`.
    pub fn axis(algebra: Algebra, index: usize) -> Self {
        assert!((1..algebra.dim()).contains(&index));
        let mut c = [0.0; 7];
        c[index - 1] = 1.0;
        Self { algebra, c }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn components(&self) -> &[f64] {
        &self.c[..self.algebra.dim() - 1]
    }

    pub fn to_element(&self) -> Hypercomplex {
        let mut c = [0.0; 8];
        c[1..].copy_from_slice(&self.c);
        Hypercomplex {
            algebra: self.algebra,
            c,
        }
    }

    /// Euclidean inner product with the imaginary part of `q`.
    pub fn project(&self, q: &Hypercomplex) -> f64 {
        self.components()
            .iter()
            .zip(q.imag())
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl fmt::Debug for ImaginaryDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ι{:?}", self.components())
    }
}

/// The unit imaginary direction `ι = x⃗/|x⃗|` of the complex plane through
/// `a` and the real axis.
pub fn unit_imaginary(a: &Hypercomplex, eps_axis: f64) -> Result<ImaginaryDirection> {
    let n = a.imag_norm();
    if n < eps_axis || n == 0.0 {
        return Err(Error::RealAxisSingularity {
            imag_norm: n,
            eps_axis,
        });
    }
    let mut c = [0.0; 7];
    for (out, x) in c.iter_mut().zip(a.imag()) {
        *out = x / n;
    }
    Ok(ImaginaryDirection {
        algebra: a.algebra,
        c,
    })
}

/// One cell of a [`BasisTable`]: `e_row · e_col = sign · e_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedIndex {
    pub sign: i8,
    pub index: usize,
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        write!(f, "{s}{}", self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisTable {
    algebra: Algebra,
    entries: Vec<SignedIndex>,
}

static QUATERNION_TABLE: LazyLock<BasisTable> =
    LazyLock::new(|| BasisTable::generate(Algebra::Quaternion));
static OCTONION_TABLE: LazyLock<BasisTable> =
    LazyLock::new(|| BasisTable::generate(Algebra::Octonion));

impl BasisTable {
    fn generate(algebra: Algebra) -> Self {
        let d = algebra.dim();
        let mut entries = Vec::with_capacity(d * d);
        let mut out = vec![0.0; d];
        for row in 0..d {
            for col in 0..d {
                let mut a = vec![0.0; d];
                let mut b = vec![0.0; d];
                a[row] = 1.0;
                b[col] = 1.0;
                cayley_dickson_product(&a, &b, &mut out);
                let (index, value) = out
                    .iter()
                    .enumerate()
                    .find(|(_, v)| **v != 0.0)
                    .expect("product of basis units is a signed basis unit");
                debug_assert_eq!(out.iter().filter(|v| **v != 0.0).count(), 1);
                entries.push(SignedIndex {
                    sign: if *value > 0.0 { 1 } else { -1 },
                    index,
                });
            }
        }
        Self { algebra, entries }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `e_row · e_col`, row = left factor.
    pub fn entry(&self, row: usize, col: usize) -> SignedIndex {
        self.entries[row * self.dim() + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[SignedIndex]> {
        self.entries.chunks(self.dim())
    }

    fn multiply(&self, a: &[f64; 8], b: &[f64; 8], algebra: Algebra) -> Hypercomplex {
        let d = self.dim();
        let mut c = [0.0; 8];
        for (row, &x) in a[..d].iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (col, &y) in b[..d].iter().enumerate() {
                let e = self.entries[row * d + col];
                c[e.index] += f64::from(e.sign) * x * y;
            }
        }
        Hypercomplex { algebra, c }
    }
}

pub fn basis_table(dim: usize) -> Result<&'static BasisTable> {
    Ok(Algebra::from_dim(dim)?.basis_table())
}

/// Direct recursive Cayley–Dickson product on coordinate slices of length
/// `2^n`. Used to generate the basis tables, and kept public as an
/// independent route for cross-checking table-driven products.
pub fn cayley_dickson_product(a: &[f64], b: &[f64], out: &mut [f64]) {
    let n = a.len();
    assert!(n.is_power_of_two() && b.len() == n && out.len() == n);
    if n == 1 {
        out[0] = a[0] * b[0];
        return;
    }
    let h = n / 2;
    let (p, q) = a.split_at(h);
    let (r, s) = b.split_at(h);
    let conj = |x: &[f64]| -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, v)| if i == 0 { *v } else { -*v })
            .collect()
    };
    let mut t1 = vec![0.0; h];
    let mut t2 = vec![0.0; h];
    // (p, q)(r, s) = (pr − s̄q, sp + qr̄)
    cayley_dickson_product(p, r, &mut t1);
    cayley_dickson_product(&conj(s), q, &mut t2);
    for i in 0..h {
        out[i] = t1[i] - t2[i];
    }
    cayley_dickson_product(s, p, &mut t1);
    cayley_dickson_product(q, &conj(r), &mut t2);
    for i in 0..h {
        out[h + i] = t1[i] + t2[i];
    }
}
