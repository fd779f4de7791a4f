//! Left-acting differential operators, realized with second-order central
//! differences.
//!
//! Every imaginary unit (or the point-dependent unit `ι`) multiplies the
//! partial derivatives from the left. Right multiplication would give
//! different values as soon as the function has non-real right
//! coefficients.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{unit_imaginary, Algebra, Hypercomplex, ImaginaryDirection};
use crate::error::{Error, Result};
use crate::function::Field;

pub const DEFAULT_H: f64 = 1e-4;

/// Minimum distance from the real axis for the local operators.
pub const DEFAULT_OPERATOR_EPS_AXIS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    HolomorphyTrio,
    GlobalLeft,
    Crf,
    LocalConjCoordinate,
    LocalConjRadial,
    LocalDerivative,
    ThirdOrderProbe,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 7] = [
        OperatorKind::HolomorphyTrio,
        OperatorKind::GlobalLeft,
        OperatorKind::Crf,
        OperatorKind::LocalConjCoordinate,
        OperatorKind::LocalConjRadial,
        OperatorKind::LocalDerivative,
        OperatorKind::ThirdOrderProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::HolomorphyTrio => "holomorphy_trio",
            OperatorKind::GlobalLeft => "global_left",
            OperatorKind::Crf => "crf",
            OperatorKind::LocalConjCoordinate => "local_conj_coordinate",
            OperatorKind::LocalConjRadial => "local_conj_radial",
            OperatorKind::LocalDerivative => "local_derivative",
            OperatorKind::ThirdOrderProbe => "third_order_probe",
        }
    }

    pub fn supports(self, algebra: Algebra) -> bool {
        algebra == Algebra::Quaternion || self.is_local()
    }

    pub fn is_local(self) -> bool {
        matches!(
            self,
            OperatorKind::LocalConjCoordinate
                | OperatorKind::LocalConjRadial
                | OperatorKind::LocalDerivative
        )
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown operator `{s}`")))
    }
}

/// Output of one operator at one point. The holomorphy trio yields three
/// residuals, everything else a single element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorValue {
    Single(Hypercomplex),
    Trio([Hypercomplex; 3]),
}

impl OperatorValue {
    /// Residual magnitude: the norm, or for the trio the largest of the
    /// three norms.
    pub fn magnitude(&self) -> f64 {
        match self {
            OperatorValue::Single(v) => v.norm(),
            OperatorValue::Trio(r) => r.iter().map(Hypercomplex::norm).fold(0.0, f64::max),
        }
    }

    pub fn components(&self) -> Vec<f64> {
        match self {
            OperatorValue::Single(v) => v.components().to_vec(),
            OperatorValue::Trio(r) => r.iter().flat_map(|v| v.components().to_vec()).collect(),
        }
    }

    pub fn single(&self) -> Option<Hypercomplex> {
        match self {
            OperatorValue::Single(v) => Some(*v),
            OperatorValue::Trio(_) => None,
        }
    }

    fn difference(&self, other: &Self) -> f64 {
        match (self, other) {
            (OperatorValue::Single(a), OperatorValue::Single(b)) => a.distance(b),
            (OperatorValue::Trio(a), OperatorValue::Trio(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.distance(y))
                .fold(0.0, f64::max),
            _ => unreachable!("operator values of different shapes"),
        }
    }
}

/// Distance between two outputs of the same operator.
pub fn value_distance(a: &OperatorValue, b: &OperatorValue) -> f64 {
    a.difference(b)
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "finite-difference step must be positive, got {h}"
        )))
    }
}

fn require(op: OperatorKind, algebra: Algebra) -> Result<()> {
    if op.supports(algebra) {
        Ok(())
    } else {
        Err(Error::UnsupportedOperator {
            operator: op.name(),
            algebra: algebra.name(),
        })
    }
}

fn checked<F: Field + ?Sized>(f: &F, q: &Hypercomplex) -> Result<()> {
    if q.algebra() != f.algebra() {
        return Err(Error::DimensionMismatch {
            expected: f.algebra().dim(),
            found: q.dim(),
        });
    }
    f.check_point(q)
}

/// Central difference along an arbitrary direction `dir` (not normalized).
pub fn directional_fd<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    dir: &Hypercomplex,
    h: f64,
) -> Result<Hypercomplex> {
    check_step(h)?;
    let step = dir.scale(h);
    let plus = f.value(&(*q + step))?;
    let minus = f.value(&(*q - step))?;
    Ok((plus - minus).scale(0.5 / h))
}

/// `∂f/∂x_axis` by `(f(q + h e) − f(q − h e)) / 2h`.
pub fn partial_fd<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    axis: usize,
    h: f64,
) -> Result<Hypercomplex> {
    if axis >= q.dim() {
        return Err(Error::Config(format!(
            "axis {axis} out of range for {}",
            q.algebra()
        )));
    }
    directional_fd(f, q, &Hypercomplex::unit(q.algebra(), axis), h)
}

fn gradient<F: Field + ?Sized>(f: &F, q: &Hypercomplex, h: f64) -> Result<Vec<Hypercomplex>> {
    (0..q.dim()).map(|axis| partial_fd(f, q, axis, h)).collect()
}

/// `∂₀f + e_u ∂_u f` for `u = 1, 2, 3`; all three vanish exactly for
/// `f = c₁ + q c₂`.
pub fn apply_holomorphy_trio<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<[Hypercomplex; 3]> {
    require(OperatorKind::HolomorphyTrio, q.algebra())?;
    checked(f, q)?;
    let g = gradient(f, q, h)?;
    Ok(std::array::from_fn(|u| {
        g[0] + Hypercomplex::unit(Algebra::Quaternion, u + 1) * g[u + 1]
    }))
}

/// `½(∂₀ − (i∂₁ + j∂₂ + k∂₃)/3) f`.
pub fn apply_global_left<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<Hypercomplex> {
    require(OperatorKind::GlobalLeft, q.algebra())?;
    checked(f, q)?;
    let g = gradient(f, q, h)?;
    let spatial = imaginary_sum(&g);
    Ok((g[0] - spatial.scale(1.0 / 3.0)).scale(0.5))
}

/// `(∂₀ + i∂₁ + j∂₂ + k∂₃) f`, without a ½.
pub fn apply_crf<F: Field + ?Sized>(f: &F, q: &Hypercomplex, h: f64) -> Result<Hypercomplex> {
    require(OperatorKind::Crf, q.algebra())?;
    checked(f, q)?;
    let g = gradient(f, q, h)?;
    Ok(g[0] + imaginary_sum(&g))
}

/// `Σ_u e_u g_u` over the imaginary partials.
fn imaginary_sum(g: &[Hypercomplex]) -> Hypercomplex {
    let algebra = g[0].algebra();
    g.iter()
        .enumerate()
        .skip(1)
        .fold(Hypercomplex::zero(algebra), |acc, (u, gu)| {
            acc + Hypercomplex::unit(algebra, u) * *gu
        })
}

fn local_plane(q: &Hypercomplex, h: f64) -> Result<ImaginaryDirection> {
    check_step(h)?;
    let eps_axis = DEFAULT_OPERATOR_EPS_AXIS + h;
    unit_imaginary(q, eps_axis)
}

/// `(∂₀f, D_r f, ι)` with `D_r` the central difference along the fixed ray
/// direction `(0, x⃗/|x⃗|)` through `q`.
fn radial_parts<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<(Hypercomplex, Hypercomplex, Hypercomplex)> {
    checked(f, q)?;
    let iota = local_plane(q, h)?.to_element();
    let d0 = partial_fd(f, q, 0, h)?;
    let dr = directional_fd(f, q, &iota, h)?;
    Ok((d0, dr, iota))
}

/// `½(∂₀ + ι ∂_x) f` with `ι` the unit imaginary direction of `q` and
/// `∂_x` the derivative along it.
pub fn apply_local_conj_radial<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<Hypercomplex> {
    let (d0, dr, iota) = radial_parts(f, q, h)?;
    Ok((d0 + iota * dr).scale(0.5))
}

/// `½[∂₀ + (x⃗/|x⃗|²)(Σ_u x_u ∂_u)] f`, with `x⃗` read as a pure imaginary
/// element multiplying from the left.
pub fn apply_local_conj_coordinate<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<Hypercomplex> {
    checked(f, q)?;
    local_plane(q, h)?;
    let g = gradient(f, q, h)?;
    let x = q.imag();
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let euler = g[1..]
        .iter()
        .zip(x)
        .fold(Hypercomplex::zero(q.algebra()), |acc, (gu, xu)| {
            acc + gu.scale(*xu)
        });
    let mut vec = *q;
    vec += Hypercomplex::real(q.algebra(), -q.re());
    Ok((g[0] + vec.scale(1.0 / r2) * euler).scale(0.5))
}

/// `½(∂₀ − ι ∂_x) f`: the local derivative, `Σ n qⁿ⁻¹ cₙ` on right
/// polynomials.
pub fn apply_local_derivative<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<Hypercomplex> {
    let (d0, dr, iota) = radial_parts(f, q, h)?;
    Ok((d0 - iota * dr).scale(0.5))
}

struct Laplacian<'a, F: ?Sized> {
    f: &'a F,
    h: f64,
}

impl<F: Field + ?Sized> Field for Laplacian<'_, F> {
    fn algebra(&self) -> Algebra {
        self.f.algebra()
    }

    fn value(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        let centre = self.f.value(q)?;
        let mut acc = Hypercomplex::zero(q.algebra());
        for axis in 0..q.dim() {
            let e = Hypercomplex::unit(q.algebra(), axis).scale(self.h);
            acc += self.f.value(&(*q + e))? + self.f.value(&(*q - e))? - centre.scale(2.0);
        }
        Ok(acc.scale(1.0 / (self.h * self.h)))
    }
}

/// CRF applied to the four-dimensional Laplacian of `f`, both stages by
/// central differences with step `h`. Exploratory: the form of the
/// third-order condition is a working guess, and its residuals carry no
/// verdict unless asked for.
pub fn apply_third_order_probe<F: Field + ?Sized>(
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<Hypercomplex> {
    require(OperatorKind::ThirdOrderProbe, q.algebra())?;
    checked(f, q)?;
    check_step(h)?;
    apply_crf(&Laplacian { f, h }, q, h)
}

/// Applies `op` to `f` at `q` with step `h`.
pub fn apply<F: Field + ?Sized>(
    op: OperatorKind,
    f: &F,
    q: &Hypercomplex,
    h: f64,
) -> Result<OperatorValue> {
    require(op, q.algebra())?;
    Ok(match op {
        OperatorKind::HolomorphyTrio => OperatorValue::Trio(apply_holomorphy_trio(f, q, h)?),
        OperatorKind::GlobalLeft => OperatorValue::Single(apply_global_left(f, q, h)?),
        OperatorKind::Crf => OperatorValue::Single(apply_crf(f, q, h)?),
        OperatorKind::LocalConjCoordinate => {
            OperatorValue::Single(apply_local_conj_coordinate(f, q, h)?)
        }
        OperatorKind::LocalConjRadial => OperatorValue::Single(apply_local_conj_radial(f, q, h)?),
        OperatorKind::LocalDerivative => OperatorValue::Single(apply_local_derivative(f, q, h)?),
        OperatorKind::ThirdOrderProbe => OperatorValue::Single(apply_third_order_probe(f, q, h)?),
    })
}
