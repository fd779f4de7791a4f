//! Functions of a hypercomplex variable.
//!
//! Four families are supported, all described declaratively by
//! [`FunctionSpec`]:
//!
//! * right-coefficient polynomials `Σ qⁿ cₙ`,
//! * complex polynomials in one canonical variable `x₀ + u·x_u`
//!   (`u ∈ {i, j, k}`) with coefficients in the same complex plane,
//! * polynomials `Σ ζⁿ cₙ` sampled on a fixed, possibly non-canonical
//!   plane `x₀ + ι·t`,
//! * a small catalog of built-ins.
//!
//! Differential operators see functions through the [`Field`] trait, which
//! separates "where is this function defined" ([`Field::check_point`]) from
//! "what value does it take near that point" ([`Field::value`]).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Hypercomplex, ImaginaryDirection};
use crate::error::{Error, Result};

/// Tolerance for plane membership of `plane_poly` points, and for the unit
/// length of a parsed `iota`.
pub const PLANE_TOL: f64 = 1e-9;

/// Anything that can be sampled by the differential operators.
pub trait Field: Sync {
    fn algebra(&self) -> Algebra;

    /// Value at `q`. Operators call this at stencil points, which may sit
    /// slightly outside the set where [`Field::check_point`] succeeds.
    fn value(&self, q: &Hypercomplex) -> Result<Hypercomplex>;

    /// Rejects base points where the function is not defined.
    fn check_point(&self, _q: &Hypercomplex) -> Result<()> {
        Ok(())
    }
}

/// Adapter turning a closure into a [`Field`].
pub struct FnField<F> {
    algebra: Algebra,
    f: F,
}

pub fn field_fn<F>(algebra: Algebra, f: F) -> FnField<F>
where
    F: Fn(&Hypercomplex) -> Hypercomplex + Sync,
{
    FnField { algebra, f }
}

impl<F> Field for FnField<F>
where
    F: Fn(&Hypercomplex) -> Hypercomplex + Sync,
{
    fn algebra(&self) -> Algebra {
        self.algebra
    }

    fn value(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        Ok((self.f)(q))
    }
}

fn check_algebra(expected: Algebra, q: &Hypercomplex) -> Result<()> {
    if q.algebra() != expected {
        return Err(Error::DimensionMismatch {
            expected: expected.dim(),
            found: q.dim(),
        });
    }
    Ok(())
}

/// `Σ qⁿ cₙ`, coefficients multiplying powers of `q` from the right.
#[derive(Debug, Clone, PartialEq)]
pub struct RightPolynomial {
    coeffs: Vec<Hypercomplex>,
}

impl RightPolynomial {
    pub fn new(coeffs: Vec<Hypercomplex>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::spec("coeffs", "a polynomial needs at least one coefficient"))?;
        for c in &coeffs {
            check_algebra(first.algebra(), c)?;
        }
        Ok(Self { coeffs })
    }

    pub fn zero(algebra: Algebra) -> Self {
        Self {
            coeffs: vec![Hypercomplex::zero(algebra)],
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.coeffs[0].algebra()
    }

    pub fn coeffs(&self) -> &[Hypercomplex] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sq() == 0.0)
    }

    /// Nested evaluation `c₀ + q(c₁ + q(c₂ + …))`.
    ///
    /// For octonions this relies on `q(qⁿc) = qⁿ⁺¹c`, which holds because
    /// the subalgebra generated by `q` and `c` is associative.
    pub fn evaluate(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        check_algebra(self.algebra(), q)?;
        let mut rev = self.coeffs.iter().rev();
        let mut acc = *rev.next().expect("nonempty");
        for c in rev {
            acc = *q * acc + *c;
        }
        Ok(acc)
    }

    /// Term-by-term `Σ (qⁿ) cₙ` with explicit powers.
    pub fn evaluate_termwise(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        check_algebra(self.algebra(), q)?;
        let mut sum = Hypercomplex::zero(self.algebra());
        let mut power = Hypercomplex::one(self.algebra());
        for c in &self.coeffs {
            sum += power * *c;
            power = *q * power;
        }
        Ok(sum)
    }

    /// Exact local derivative `Σ n qⁿ⁻¹ cₙ`.
    pub fn formal_local_derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(self.algebra());
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c.scale(n as f64))
                .collect(),
        }
    }

    /// Coefficients of `q·p(q)`.
    pub fn shifted(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Hypercomplex::zero(self.algebra()));
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }
}

/// Seeded random polynomial with coefficient components uniform in
/// `[−coeff_bound, coeff_bound]`.
pub fn random_right_poly(
    seed: u64,
    algebra: Algebra,
    degree: usize,
    coeff_bound: f64,
) -> Result<RightPolynomial> {
    if !(coeff_bound > 0.0 && coeff_bound.is_finite()) {
        return Err(Error::spec("coeff_bound", "must be positive and finite"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..=degree)
        .map(|_| {
            let c: Vec<f64> = (0..algebra.dim())
                .map(|_| rng.random_range(-coeff_bound..=coeff_bound))
                .collect();
            Hypercomplex::new(algebra, &c)
        })
        .collect::<Result<Vec<_>>>()?;
    RightPolynomial::new(coeffs)
}

/// One of the three quaternionic imaginary units, used as the axis of a
/// canonical complex variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalAxis {
    I,
    J,
    K,
}

impl CanonicalAxis {
    pub const ALL: [CanonicalAxis; 3] = [CanonicalAxis::I, CanonicalAxis::J, CanonicalAxis::K];

    pub fn index(self) -> usize {
        match self {
            CanonicalAxis::I => 1,
            CanonicalAxis::J => 2,
            CanonicalAxis::K => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CanonicalAxis::I => "i",
            CanonicalAxis::J => "j",
            CanonicalAxis::K => "k",
        }
    }

    fn parse(field: &str, s: &str) -> Result<Self> {
        match s {
            "i" => Ok(CanonicalAxis::I),
            "j" => Ok(CanonicalAxis::J),
            "k" => Ok(CanonicalAxis::K),
            other => Err(Error::spec(
                field,
                format!("unknown axis `{other}` (expected i, j or k)"),
            )),
        }
    }
}

fn embed(algebra: Algebra, axis: CanonicalAxis, z: Complex64) -> Hypercomplex {
    let mut c = vec![0.0; algebra.dim()];
    c[0] = z.re;
    c[axis.index()] = z.im;
    Hypercomplex::new(algebra, &c).expect("length matches")
}

fn canonical_variable(axis: CanonicalAxis, q: &Hypercomplex) -> Complex64 {
    Complex64::new(q.re(), q.components()[axis.index()])
}

/// Complex polynomial `Σ aₙ zⁿ` in `z = x₀ + u·x_u`, with the complex
/// coefficients embedded in the same plane as `z`. Independent of the
/// other coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPolynomial {
    pub algebra: Algebra,
    pub axis: CanonicalAxis,
    pub coeffs: Vec<Complex64>,
}

impl CanonicalPolynomial {
    pub fn evaluate(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        check_algebra(self.algebra, q)?;
        let z = canonical_variable(self.axis, q);
        let w = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
        Ok(embed(self.algebra, self.axis, w))
    }
}

/// Polynomial `Σ ζⁿ cₙ` attached to the fixed plane spanned by `1` and
/// `iota`.
///
/// On its plane `ζ = q`. Off the plane the variable is continued by the
/// local plane of the point, `ζ(q) = x₀ + ι(q)|x⃗| = q`, so derivatives
/// taken across the plane see `Σ qⁿ cₙ`. Continuing instead by orthogonal
/// projection onto the fixed plane would make every such polynomial
/// satisfy the Cauchy–Riemann–Fueter equation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanePolynomial {
    iota: ImaginaryDirection,
    poly: RightPolynomial,
}

impl PlanePolynomial {
    pub fn new(iota: ImaginaryDirection, coeffs: Vec<Hypercomplex>) -> Result<Self> {
        let poly = RightPolynomial::new(coeffs)?;
        if poly.algebra() != iota.algebra() {
            return Err(Error::DimensionMismatch {
                expected: iota.algebra().dim(),
                found: poly.algebra().dim(),
            });
        }
        Ok(Self { iota, poly })
    }

    pub fn algebra(&self) -> Algebra {
        self.iota.algebra()
    }

    pub fn iota(&self) -> &ImaginaryDirection {
        &self.iota
    }

    pub fn coeffs(&self) -> &[Hypercomplex] {
        self.poly.coeffs()
    }

    /// Distance from `q` to the plane `{x₀ + ι t}`.
    pub fn plane_distance(&self, q: &Hypercomplex) -> f64 {
        let t = self.iota.project(q);
        q.imag()
            .iter()
            .zip(self.iota.components())
            .map(|(x, u)| (x - t * u).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn check_on_plane(&self, q: &Hypercomplex) -> Result<()> {
        check_algebra(self.algebra(), q)?;
        let distance = self.plane_distance(q);
        if distance > PLANE_TOL {
            return Err(Error::PlaneMembership { distance });
        }
        Ok(())
    }

    /// Evaluates `Σ ζⁿ cₙ` with `ζ = x₀ + ι t` rebuilt from the plane
    /// coordinates of `q`; errors if `q` is off the plane.
    pub fn evaluate(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        self.check_on_plane(q)?;
        let t = self.iota.project(q);
        let zeta = Hypercomplex::real(self.algebra(), q.re()) + self.iota.to_element().scale(t);
        self.poly.evaluate(&zeta)
    }

    fn continued(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        self.poly.evaluate(q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinName {
    ConjQ,
    Identity,
    Constant,
    FueterKernel,
    ExpCanonical,
}

impl BuiltinName {
    pub const ALL: [BuiltinName; 5] = [
        BuiltinName::ConjQ,
        BuiltinName::Identity,
        BuiltinName::Constant,
        BuiltinName::FueterKernel,
        BuiltinName::ExpCanonical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinName::ConjQ => "conj_q",
            BuiltinName::Identity => "identity",
            BuiltinName::Constant => "constant",
            BuiltinName::FueterKernel => "fueter_kernel",
            BuiltinName::ExpCanonical => "exp_canonical",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Self::ALL.iter().map(|b| b.name()).collect();
                Error::spec(
                    "name",
                    format!(
                        "unknown builtin `{s}` (expected one of {})",
                        known.join(", ")
                    ),
                )
            })
    }
}

/// A catalog function. `axis` is used by `exp_canonical`, `value` by
/// `constant` (default: the real unit).
#[derive(Debug, Clone, PartialEq)]
pub struct Builtin {
    pub name: BuiltinName,
    pub algebra: Algebra,
    pub axis: CanonicalAxis,
    pub value: Hypercomplex,
}

impl Builtin {
    pub fn new(name: BuiltinName, algebra: Algebra) -> Self {
        Self {
            name,
            algebra,
            axis: CanonicalAxis::I,
            value: Hypercomplex::one(algebra),
        }
    }

    fn continued(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        check_algebra(self.algebra, q)?;
        Ok(match self.name {
            BuiltinName::ConjQ => q.conj(),
            BuiltinName::Identity => *q,
            BuiltinName::Constant => self.value,
            BuiltinName::FueterKernel => {
                let n = q.norm_sq();
                if n == 0.0 {
                    return Err(Error::Singularity {
                        function: "fueter_kernel",
                        point: q.components().to_vec(),
                    });
                }
                q.conj().scale(1.0 / (n * n))
            }
            BuiltinName::ExpCanonical => embed(
                self.algebra,
                self.axis,
                canonical_variable(self.axis, q).exp(),
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    RightPoly(RightPolynomial),
    PlanePoly(PlanePolynomial),
    Canonical(CanonicalPolynomial),
    Builtin(Builtin),
}

impl FunctionSpec {
    pub fn builtin(name: BuiltinName, algebra: Algebra) -> Self {
        FunctionSpec::Builtin(Builtin::new(name, algebra))
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            FunctionSpec::RightPoly(p) => p.algebra(),
            FunctionSpec::PlanePoly(p) => p.algebra(),
            FunctionSpec::Canonical(p) => p.algebra,
            FunctionSpec::Builtin(b) => b.algebra,
        }
    }

    /// Value of the function at a point of its domain.
    pub fn evaluate(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        match self {
            FunctionSpec::PlanePoly(p) => p.evaluate(q),
            _ => self.value(q),
        }
    }

    /// Parses the JSON form, e.g.
    /// `{"type":"right_poly","dim":4,"coeffs":[[1,0,0,0],[0,1,0,0]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpecDoc =
            serde_json::from_str(text).map_err(|e| Error::spec("spec", e.to_string()))?;
        doc.try_into()
    }

    pub fn to_doc(&self) -> SpecDoc {
        let rows = |cs: &[Hypercomplex]| cs.iter().map(|c| c.components().to_vec()).collect();
        match self {
            FunctionSpec::RightPoly(p) => SpecDoc::RightPoly {
                dim: p.algebra().dim(),
                coeffs: rows(p.coeffs()),
            },
            FunctionSpec::PlanePoly(p) => SpecDoc::PlanePoly {
                dim: Some(p.algebra().dim()),
                iota: p.iota().components().to_vec(),
                coeffs: rows(p.coeffs()),
            },
            FunctionSpec::Canonical(p) => SpecDoc::Canonical {
                dim: Some(p.algebra.dim()),
                axis: p.axis.name().to_string(),
                coeffs: p.coeffs.iter().map(|z| vec![z.re, z.im]).collect(),
            },
            FunctionSpec::Builtin(b) => SpecDoc::Builtin {
                name: b.name.name().to_string(),
                dim: b.algebra.dim(),
                axis: (b.name == BuiltinName::ExpCanonical).then(|| b.axis.name().to_string()),
                value: (b.name == BuiltinName::Constant).then(|| b.value.components().to_vec()),
            },
        }
    }
}

impl Field for FunctionSpec {
    fn algebra(&self) -> Algebra {
        FunctionSpec::algebra(self)
    }

    fn value(&self, q: &Hypercomplex) -> Result<Hypercomplex> {
        match self {
            FunctionSpec::RightPoly(p) => p.evaluate(q),
            FunctionSpec::PlanePoly(p) => p.continued(q),
            FunctionSpec::Canonical(p) => p.evaluate(q),
            FunctionSpec::Builtin(b) => b.continued(q),
        }
    }

    fn check_point(&self, q: &Hypercomplex) -> Result<()> {
        check_algebra(FunctionSpec::algebra(self), q)?;
        match self {
            FunctionSpec::PlanePoly(p) => p.check_on_plane(q),
            FunctionSpec::Builtin(b) if b.name == BuiltinName::FueterKernel => {
                b.continued(q).map(|_| ())
            }
            _ => Ok(()),
        }
    }
}

/// Wire form of [`FunctionSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecDoc {
    RightPoly {
        dim: usize,
        coeffs: Vec<Vec<f64>>,
    },
    Canonical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        axis: String,
        coeffs: Vec<Vec<f64>>,
    },
    PlanePoly {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        iota: Vec<f64>,
        coeffs: Vec<Vec<f64>>,
    },
    Builtin {
        name: String,
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axis: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        value: Option<Vec<f64>>,
    },
}

fn parse_dim(field: &str, dim: usize) -> Result<Algebra> {
    Algebra::from_dim(dim).map_err(|_| {
        Error::spec(
            field,
            format!("unsupported dimension {dim} (expected 4 or 8)"),
        )
    })
}

fn parse_element(field: String, algebra: Algebra, c: &[f64]) -> Result<Hypercomplex> {
    if c.len() != algebra.dim() {
        return Err(Error::spec(
            field,
            format!("expected {} components, found {}", algebra.dim(), c.len()),
        ));
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::spec(field, "components must be finite"));
    }
    Hypercomplex::new(algebra, c)
}

fn parse_coeffs(algebra: Algebra, rows: &[Vec<f64>]) -> Result<Vec<Hypercomplex>> {
    if rows.is_empty() {
        return Err(Error::spec(
            "coeffs",
            "at least one coefficient is required",
        ));
    }
    rows.iter()
        .enumerate()
        .map(|(n, c)| parse_element(format!("coeffs[{n}]"), algebra, c))
        .collect()
}

impl TryFrom<SpecDoc> for FunctionSpec {
    type Error = Error;

    fn try_from(doc: SpecDoc) -> Result<Self> {
        match doc {
            SpecDoc::RightPoly { dim, coeffs } => {
                let algebra = parse_dim("dim", dim)?;
                Ok(FunctionSpec::RightPoly(RightPolynomial::new(
                    parse_coeffs(algebra, &coeffs)?,
                )?))
            }
            SpecDoc::Canonical { dim, axis, coeffs } => {
                let algebra = parse_dim("dim", dim.unwrap_or(4))?;
                let axis = CanonicalAxis::parse("axis", &axis)?;
                if coeffs.is_empty() {
                    return Err(Error::spec(
                        "coeffs",
                        "at least one coefficient is required",
                    ));
                }
                let coeffs = coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| match c.as_slice() {
                        [re, im] if re.is_finite() && im.is_finite() => {
                            Ok(Complex64::new(*re, *im))
                        }
                        _ => Err(Error::spec(
                            format!("coeffs[{n}]"),
                            "expected a finite [re, im] pair",
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FunctionSpec::Canonical(CanonicalPolynomial {
                    algebra,
                    axis,
                    coeffs,
                }))
            }
            SpecDoc::PlanePoly { dim, iota, coeffs } => {
                let algebra = match dim {
                    Some(d) => {
                        let algebra = parse_dim("dim", d)?;
                        if iota.len() != d - 1 {
                            return Err(Error::spec(
                                "iota",
                                format!(
                                    "dimension mismatch: dim {d} needs {} components, found {}",
                                    d - 1,
                                    iota.len()
                                ),
                            ));
                        }
                        algebra
                    }
                    None => Algebra::from_dim(iota.len() + 1).map_err(|_| {
                        Error::spec(
                            "iota",
                            format!("expected 3 or 7 components, found {}", iota.len()),
                        )
                    })?,
                };
                let iota = ImaginaryDirection::new(algebra, &iota, PLANE_TOL)?;
                Ok(FunctionSpec::PlanePoly(PlanePolynomial::new(
                    iota,
                    parse_coeffs(algebra, &coeffs)?,
                )?))
            }
            SpecDoc::Builtin {
                name,
                dim,
                axis,
                value,
            } => {
                let algebra = parse_dim("dim", dim)?;
                let name = BuiltinName::parse(&name)?;
                let mut b = Builtin::new(name, algebra);
                match (name, axis) {
                    (BuiltinName::ExpCanonical, Some(a)) => {
                        b.axis = CanonicalAxis::parse("axis", &a)?
                    }
                    (_, Some(_)) => {
                        return Err(Error::spec("axis", "only exp_canonical takes an axis"))
                    }
                    _ => {}
                }
                match (name, value) {
                    (BuiltinName::Constant, Some(v)) => {
                        b.value = parse_element("value".into(), algebra, &v)?
                    }
                    (_, Some(_)) => {
                        return Err(Error::spec("value", "only constant takes a value"))
                    }
                    _ => {}
                }
                Ok(FunctionSpec::Builtin(b))
            }
        }
    }
}

impl Serialize for FunctionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SpecDoc::deserialize(d)?;
        doc.try_into().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x0: f64, x1: f64, x2: f64, x3: f64) -> Hypercomplex {
        Hypercomplex::quaternion(x0, x1, x2, x3)
    }

    #[test]
    fn right_poly_at_k() {
        // 1 + k·i + k²·j = 1 + j − j = 1
        let p = RightPolynomial::new(vec![
            q(1.0, 0.0, 0.0, 0.0),
            q(0.0, 1.0, 0.0, 0.0),
            q(0.0, 0.0, 1.0, 0.0),
        ])
        .unwrap();
        let k = q(0.0, 0.0, 0.0, 1.0);
        assert_eq!(p.evaluate(&k).unwrap(), q(1.0, 0.0, 0.0, 0.0));
        assert_eq!(p.evaluate_termwise(&k).unwrap(), q(1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn constant_poly() {
        let c = q(0.5, -1.0, 2.0, 3.0);
        let p = RightPolynomial::new(vec![c]).unwrap();
        assert_eq!(p.evaluate(&q(9.0, 8.0, 7.0, 6.0)).unwrap(), c);
        assert_eq!(
            p.evaluate(&Hypercomplex::zero(Algebra::Quaternion))
                .unwrap(),
            c
        );
    }

    #[test]
    fn formal_derivative() {
        let c0 = q(1.0, 2.0, 3.0, 4.0);
        let c1 = q(0.0, 0.0, 1.0, 0.0);
        let lin = RightPolynomial::new(vec![c0, c1]).unwrap();
        assert_eq!(lin.formal_local_derivative().coeffs(), &[c1]);
        assert!(RightPolynomial::new(vec![c0])
            .unwrap()
            .formal_local_derivative()
            .is_zero());
        let z = Hypercomplex::zero(Algebra::Quaternion);
        let sq = RightPolynomial::new(vec![z, z, c1]).unwrap();
        assert_eq!(sq.formal_local_derivative().coeffs(), &[z, c1.scale(2.0)]);
    }

    #[test]
    fn random_polys() {
        let p = random_right_poly(1, Algebra::Quaternion, 0, 1.0).unwrap();
        assert_eq!(p.degree(), 0);
        assert_eq!(
            p,
            random_right_poly(1, Algebra::Quaternion, 0, 1.0).unwrap()
        );
        let o = random_right_poly(7, Algebra::Octonion, 5, 2.0).unwrap();
        assert_eq!(o.coeffs().len(), 6);
        assert!(o
            .coeffs()
            .iter()
            .all(|c| c.dim() == 8 && c.components().iter().all(|x| x.abs() <= 2.0)));
        assert!(random_right_poly(1, Algebra::Quaternion, 2, 0.0).is_err());
    }

    #[test]
    fn builtins() {
        let conj = FunctionSpec::builtin(BuiltinName::ConjQ, Algebra::Quaternion);
        assert_eq!(
            conj.evaluate(&q(1.0, 1.0, 1.0, 1.0)).unwrap(),
            q(1.0, -1.0, -1.0, -1.0)
        );
        let kernel = FunctionSpec::builtin(BuiltinName::FueterKernel, Algebra::Quaternion);
        assert!(matches!(
            kernel.evaluate(&Hypercomplex::zero(Algebra::Quaternion)),
            Err(Error::Singularity { .. })
        ));
        // |q|⁻⁴ q̄ at q = 1+i: (1−i)/4
        assert_eq!(
            kernel.evaluate(&q(1.0, 1.0, 0.0, 0.0)).unwrap(),
            q(0.25, -0.25, 0.0, 0.0)
        );
    }

    #[test]
    fn exp_canonical_matches_complex_exp() {
        for axis in CanonicalAxis::ALL {
            let mut b = Builtin::new(BuiltinName::ExpCanonical, Algebra::Quaternion);
            b.axis = axis;
            let f = FunctionSpec::Builtin(b);
            for (x, y) in [(0.3, -1.2), (-0.7, 2.5), (1.1, 0.4)] {
                let mut c = [0.0; 4];
                c[0] = x;
                c[axis.index()] = y;
                let v = f
                    .evaluate(&Hypercomplex::new(Algebra::Quaternion, &c).unwrap())
                    .unwrap();
                let e = Complex64::new(x, y).exp();
                assert!((v.re() - e.re).abs() < 1e-12);
                assert!((v.components()[axis.index()] - e.im).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plane_poly_membership() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let iota = ImaginaryDirection::new(Algebra::Quaternion, &[s, s, 0.0], 1e-12).unwrap();
        let one = Hypercomplex::one(Algebra::Quaternion);
        let z = Hypercomplex::zero(Algebra::Quaternion);
        let p = PlanePolynomial::new(iota, vec![z, z, one]).unwrap();
        let on = q(0.5, 1.5 * s, 1.5 * s, 0.0);
        assert!(p.evaluate(&on).is_ok());
        assert!(matches!(
            p.evaluate(&q(0.5, 1.0, 0.0, 0.0)),
            Err(Error::PlaneMembership { .. })
        ));
    }

    #[test]
    fn spec_json_roundtrip_and_errors() {
        let id = FunctionSpec::from_json(
            r#"{"type":"right_poly","dim":4,"coeffs":[[0,0,0,0],[1,0,0,0]]}"#,
        )
        .unwrap();
        let p = q(0.3, 0.1, -0.2, 0.9);
        assert_eq!(id.evaluate(&p).unwrap(), p);
        let conj =
            FunctionSpec::from_json(r#"{"type":"builtin","name":"conj_q","dim":4}"#).unwrap();
        assert_eq!(
            conj,
            FunctionSpec::builtin(BuiltinName::ConjQ, Algebra::Quaternion)
        );
        let back = FunctionSpec::from_json(&serde_json::to_string(&id).unwrap()).unwrap();
        assert_eq!(back, id);

        let err = |s: &str| match FunctionSpec::from_json(s).unwrap_err() {
            Error::InvalidSpec { field, reason } => (field, reason),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(
            err(r#"{"type":"builtin","name":"sin_q","dim":4}"#).0,
            "name"
        );
        assert_eq!(
            err(r#"{"type":"right_poly","dim":4,"coeffs":[[1,0,0]]}"#).0,
            "coeffs[0]"
        );
        assert_eq!(
            err(r#"{"type":"plane_poly","dim":8,"iota":[1,0,0],"coeffs":[[1,0,0,0,0,0,0,0]]}"#).0,
            "iota"
        );
        assert_eq!(
            err(r#"{"type":"plane_poly","iota":[1,1,0],"coeffs":[[1,0,0,0]]}"#).0,
            "iota"
        );
        assert!(
            err(r#"{"type":"right_poly","dim":4,"coeffs":[[1,0,0,0]],"extra":1}"#)
                .1
                .contains("extra")
        );
        assert!(err(r#"{"type":"right_poly","#).1.contains("EOF"));
    }
}
