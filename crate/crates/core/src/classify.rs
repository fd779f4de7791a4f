//! Grids, residual statistics, per-operator verdicts and convergence-order
//! estimates.
//!
//! A [`RegularityReport`] is a pure function of the function spec and the
//! [`ClassifyConfig`]: points are generated deterministically, evaluated in
//! parallel, and aggregated in grid order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Hypercomplex, ImaginaryDirection};
use crate::error::{Error, Result};
use crate::function::{BuiltinName, Field, FunctionSpec, PLANE_TOL};
use crate::operators::{
    apply, value_distance, OperatorKind, OperatorValue, DEFAULT_H, DEFAULT_OPERATOR_EPS_AXIS,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl AxisRange {
    fn value(&self, k: usize) -> f64 {
        if self.count == 1 {
            0.5 * (self.lo + self.hi)
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / (self.count - 1) as f64
        }
    }

    fn spacing(&self) -> f64 {
        if self.count > 1 {
            (self.hi - self.lo) / (self.count - 1) as f64
        } else {
            0.0
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Config(format!(
                "{what}: point count must be at least 1"
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(Error::Config(format!(
                "{what}: need finite lo <= hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

/// Restricts sampling to the plane `x₀ + ι t`; `x₀` comes from the first
/// axis range of the grid, `t` from `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneRestriction {
    pub iota: Vec<f64>,
    pub t: AxisRange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub algebra: Algebra,
    pub axes: Vec<AxisRange>,
    /// Points with `|x⃗|` (or `|t|` on a plane) below this are dropped.
    pub axis_exclusion_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneRestriction>,
    /// Seeded uniform perturbation of each coordinate, as a fraction of the
    /// lattice spacing.
    pub jitter: f64,
    pub seed: u64,
}

impl GridSpec {
    /// `[lo, hi]` with `count` points on every axis.
    pub fn uniform(
        algebra: Algebra,
        lo: f64,
        hi: f64,
        count: usize,
        axis_exclusion_radius: f64,
    ) -> Self {
        Self {
            algebra,
            axes: vec![AxisRange { lo, hi, count }; algebra.dim()],
            axis_exclusion_radius,
            plane: None,
            jitter: 0.0,
            seed: 0,
        }
    }

    /// `[−1, 1]` per axis, 5 points for quaternions and 3 for octonions,
    /// excluding `|x⃗| < 0.5`.
    pub fn default_for(algebra: Algebra) -> Self {
        let count = match algebra {
            Algebra::Quaternion => 5,
            Algebra::Octonion => 3,
        };
        Self::uniform(algebra, -1.0, 1.0, count, 0.5)
    }

    pub fn with_plane(mut self, iota: &ImaginaryDirection, t: AxisRange) -> Self {
        self.plane = Some(PlaneRestriction {
            iota: iota.components().to_vec(),
            t,
        });
        self
    }

    fn validate(&self) -> Result<()> {
        if self.axes.len() != self.algebra.dim() {
            return Err(Error::Config(format!(
                "grid has {} axis ranges, the {} algebra needs {}",
                self.axes.len(),
                self.algebra,
                self.algebra.dim()
            )));
        }
        for (k, a) in self.axes.iter().enumerate() {
            a.validate(&format!("grid axis {k}"))?;
        }
        if !(self.axis_exclusion_radius >= 0.0 && self.axis_exclusion_radius.is_finite()) {
            return Err(Error::Config(
                "axis exclusion radius must be a finite non-negative number".into(),
            ));
        }
        if !(0.0..0.5).contains(&self.jitter) {
            return Err(Error::Config(format!(
                "jitter must lie in [0, 0.5), got {}",
                self.jitter
            )));
        }
        if let Some(p) = &self.plane {
            p.t.validate("plane t range")?;
            ImaginaryDirection::new(self.algebra, &p.iota, PLANE_TOL)
                .map_err(|e| Error::Config(format!("plane: {e}")))?;
        }
        Ok(())
    }
}

/// Lattice points of `g` (axis 0 varies slowest), minus those too close to
/// the real axis.
pub fn sample_grid(g: &GridSpec) -> Result<Vec<Hypercomplex>> {
    g.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut jitter = |spacing: f64| {
        if g.jitter > 0.0 && spacing > 0.0 {
            rng.random_range(-g.jitter..=g.jitter) * spacing
        } else {
            0.0
        }
    };
    let mut points = Vec::new();
    match &g.plane {
        Some(plane) => {
            let iota = ImaginaryDirection::new(g.algebra, &plane.iota, PLANE_TOL)?.to_element();
            for a in 0..g.axes[0].count {
                for b in 0..plane.t.count {
                    let x0 = g.axes[0].value(a) + jitter(g.axes[0].spacing());
                    let t = plane.t.value(b) + jitter(plane.t.spacing());
                    if t.abs() >= g.axis_exclusion_radius {
                        points.push(Hypercomplex::real(g.algebra, x0) + iota.scale(t));
                    }
                }
            }
        }
        None => {
            let dim = g.algebra.dim();
            let mut idx = vec![0usize; dim];
            let mut coords = vec![0.0; dim];
            'outer: loop {
                for (k, c) in coords.iter_mut().enumerate() {
                    *c = g.axes[k].value(idx[k]) + jitter(g.axes[k].spacing());
                }
                let r = coords[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
                if r >= g.axis_exclusion_radius {
                    points.push(Hypercomplex::new(g.algebra, &coords)?);
                }
                for k in (0..dim).rev() {
                    idx[k] += 1;
                    if idx[k] < g.axes[k].count {
                        continue 'outer;
                    }
                    idx[k] = 0;
                }
                break;
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyGrid {
            radius: g.axis_exclusion_radius,
        });
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub operator: OperatorKind,
    pub count: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// `sqrt(Σ |r|²)` over all points.
    pub l2: f64,
    /// Componentwise mean of the operator output (the three trio residuals
    /// are concatenated).
    pub mean_value: Vec<f64>,
}

fn at_point(index: usize, q: &Hypercomplex, e: Error) -> Error {
    Error::AtPoint {
        index,
        point: q.components().to_vec(),
        source: Box::new(e),
    }
}

/// Operator output at every point, in order. The first failing point is
/// reported with its index.
pub fn pointwise<F: Field + ?Sized>(
    f: &F,
    op: OperatorKind,
    points: &[Hypercomplex],
    h: f64,
) -> Result<Vec<OperatorValue>> {
    points
        .par_iter()
        .enumerate()
        .map(|(i, q)| apply(op, f, q, h).map_err(|e| at_point(i, q, e)))
        .collect()
}

pub fn residual_stats<F: Field + ?Sized>(
    f: &F,
    op: OperatorKind,
    points: &[Hypercomplex],
    h: f64,
) -> Result<ResidualStats> {
    if points.is_empty() {
        return Err(Error::Config("no points to evaluate".into()));
    }
    let values = pointwise(f, op, points, h)?;
    let n = values.len() as f64;
    let mut max_abs: f64 = 0.0;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut mean_value = vec![0.0; values[0].components().len()];
    for v in &values {
        let m = v.magnitude();
        max_abs = max_abs.max(m);
        sum += m;
        sum_sq += m * m;
        for (acc, c) in mean_value.iter_mut().zip(v.components()) {
            *acc += c;
        }
    }
    mean_value.iter_mut().for_each(|x| *x /= n);
    Ok(ResidualStats {
        operator: op,
        count: values.len(),
        max_abs,
        mean_abs: (sum / n).min(max_abs),
        l2: sum_sq.sqrt(),
        mean_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ToleranceRule {
    /// `factor · h² · max|f|` over the grid.
    Auto {
        factor: f64,
    },
    Absolute {
        value: f64,
    },
}

impl ToleranceRule {
    pub fn tolerance(&self, h: f64, function_scale: f64) -> f64 {
        match *self {
            ToleranceRule::Auto { factor } => factor * h * h * function_scale,
            ToleranceRule::Absolute { value } => value,
        }
    }
}

impl Default for ToleranceRule {
    fn default() -> Self {
        ToleranceRule::Auto { factor: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub grid: GridSpec,
    pub h: f64,
    pub tolerance: ToleranceRule,
    /// Step for the third-order probe, whose nested stencil amplifies
    /// rounding by `h⁻³`.
    pub probe_h: f64,
    /// Attach a verdict to the probe's residuals.
    pub judge_probe: bool,
    /// Base step of the three-step convergence-order estimate.
    pub order_h: f64,
    /// Grid points sampled for convergence orders, per operator.
    pub order_samples: usize,
    /// Differences below `noise_floor · max|f|` are treated as rounding.
    pub noise_floor: f64,
    pub operator_eps_axis: f64,
}

impl ClassifyConfig {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            grid,
            h: DEFAULT_H,
            tolerance: ToleranceRule::default(),
            probe_h: 1e-2,
            judge_probe: false,
            order_h: 1e-2,
            order_samples: 5,
            noise_floor: 1e-12,
            operator_eps_axis: DEFAULT_OPERATOR_EPS_AXIS,
        }
    }

    pub fn for_algebra(algebra: Algebra) -> Self {
        Self::new(GridSpec::default_for(algebra))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("h", self.h),
            ("probe_h", self.probe_h),
            ("order_h", self.order_h),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        let (ToleranceRule::Absolute { value } | ToleranceRule::Auto { factor: value }) =
            self.tolerance;
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance must be non-negative, got {value}"
            )));
        }
        if self.noise_floor < 0.0 {
            return Err(Error::Config("noise floor must be non-negative".into()));
        }
        let needed = self.operator_eps_axis + self.h.max(self.order_h);
        if self.grid.axis_exclusion_radius < needed {
            return Err(Error::Config(format!(
                "axis exclusion radius {} is smaller than eps_axis + step = {needed}; local stencils would cross the real axis",
                self.grid.axis_exclusion_radius
            )));
        }
        self.grid.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Regular,
    NotRegular,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderEstimate {
    Order(f64),
    /// Differences sank below the noise floor, typically because the
    /// stencil is exact for the function.
    Indeterminate,
}

impl OrderEstimate {
    pub fn value(self) -> Option<f64> {
        match self {
            OrderEstimate::Order(p) => Some(p),
            OrderEstimate::Indeterminate => None,
        }
    }
}

/// Observed order from three steps `h₀, h₀/2, h₀/4`:
/// `log₂(|R(h₀) − R(h₀/2)| / |R(h₀/2) − R(h₀/4)|)`. Works whether or not
/// the exact residual is zero.
pub fn estimate_convergence_order<F: Field + ?Sized>(
    f: &F,
    op: OperatorKind,
    q: &Hypercomplex,
    h0: f64,
    noise_floor: f64,
) -> Result<OrderEstimate> {
    let r1 = apply(op, f, q, h0)?;
    let r2 = apply(op, f, q, h0 / 2.0)?;
    let r3 = apply(op, f, q, h0 / 4.0)?;
    Ok(order_from(
        value_distance(&r1, &r2),
        value_distance(&r2, &r3),
        noise_floor,
    ))
}

/// `log₂(|R(h₀) − exact| / |R(h₀/2) − exact|)` against a known exact
/// operator value.
pub fn estimate_convergence_order_against<F: Field + ?Sized>(
    f: &F,
    op: OperatorKind,
    q: &Hypercomplex,
    h0: f64,
    exact: &OperatorValue,
    noise_floor: f64,
) -> Result<OrderEstimate> {
    let e1 = value_distance(&apply(op, f, q, h0)?, exact);
    let e2 = value_distance(&apply(op, f, q, h0 / 2.0)?, exact);
    Ok(order_from(e1, e2, noise_floor))
}

fn order_from(coarse: f64, fine: f64, noise_floor: f64) -> OrderEstimate {
    if coarse <= noise_floor || fine <= noise_floor {
        OrderEstimate::Indeterminate
    } else {
        OrderEstimate::Order((coarse / fine).log2())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSummary {
    pub h0: f64,
    pub samples: usize,
    pub determinate: usize,
    pub median_order: Option<f64>,
    pub min_order: Option<f64>,
    pub max_order: Option<f64>,
}

impl ConvergenceSummary {
    pub fn from_estimates(h0: f64, estimates: &[OrderEstimate]) -> Self {
        let mut orders: Vec<f64> = estimates.iter().filter_map(|e| e.value()).collect();
        orders.sort_by(f64::total_cmp);
        let median = match orders.len() {
            0 => None,
            n if n % 2 == 1 => Some(orders[n / 2]),
            n => Some(0.5 * (orders[n / 2 - 1] + orders[n / 2])),
        };
        Self {
            h0,
            samples: estimates.len(),
            determinate: orders.len(),
            median_order: median,
            min_order: orders.first().copied(),
            max_order: orders.last().copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub operator: OperatorKind,
    pub verdict: Verdict,
    pub tolerance: Option<f64>,
    pub stats: Option<ResidualStats>,
    pub convergence: Option<ConvergenceSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub function: FunctionSpec,
    /// `max |f|` over the grid.
    pub function_scale: f64,
    pub operators: Vec<OperatorReport>,
    pub config: ClassifyConfig,
}

impl RegularityReport {
    pub fn operator(&self, op: OperatorKind) -> &OperatorReport {
        self.operators
            .iter()
            .find(|r| r.operator == op)
            .expect("every operator is reported")
    }

    pub fn verdict(&self, op: OperatorKind) -> Verdict {
        self.operator(op).verdict
    }
}

/// The plane a function naturally lives on, if any: the fixed plane of a
/// `plane_poly`, or the canonical plane of a canonical polynomial or of
/// `exp_canonical`.
pub fn natural_plane(f: &FunctionSpec) -> Option<ImaginaryDirection> {
    match f {
        FunctionSpec::PlanePoly(p) => Some(*p.iota()),
        FunctionSpec::Canonical(p) => Some(ImaginaryDirection::axis(p.algebra, p.axis.index())),
        FunctionSpec::Builtin(b) if b.name == BuiltinName::ExpCanonical => {
            Some(ImaginaryDirection::axis(b.algebra, b.axis.index()))
        }
        _ => None,
    }
}

/// Restricts the grid to the function's [`natural_plane`] when the grid
/// has no plane of its own. The local condition at a point only involves
/// the plane through that point, so a complex function of one plane is
/// judged on that plane.
pub fn effective_config(f: &FunctionSpec, config: &ClassifyConfig) -> ClassifyConfig {
    let mut cfg = config.clone();
    if let (Some(iota), None) = (natural_plane(f), &cfg.grid.plane) {
        let lo = cfg.grid.axis_exclusion_radius.max(0.5);
        let t = AxisRange {
            lo,
            hi: lo.max(2.0),
            count: cfg.grid.axes[0].count,
        };
        cfg.grid = cfg.grid.with_plane(&iota, t);
    }
    cfg
}

/// `max |f|` over `points`, with every point checked against the
/// function's domain.
pub fn function_scale(f: &FunctionSpec, points: &[Hypercomplex]) -> Result<f64> {
    let norms: Vec<f64> = points
        .par_iter()
        .enumerate()
        .map(|(i, q)| {
            f.evaluate(q)
                .map(|v| v.norm())
                .map_err(|e| at_point(i, q, e))
        })
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().fold(0.0, f64::max))
}

fn sample_indices(len: usize, samples: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..samples.min(len))
        .map(|k| k * len / samples.min(len))
        .collect();
    idx.dedup();
    idx
}

pub fn classify(f: &FunctionSpec, config: &ClassifyConfig) -> Result<RegularityReport> {
    if f.algebra() != config.grid.algebra {
        return Err(Error::DimensionMismatch {
            expected: config.grid.algebra.dim(),
            found: f.algebra().dim(),
        });
    }
    let config = effective_config(f, config);
    config.validate()?;
    let points = sample_grid(&config.grid)?;
    let scale = function_scale(f, &points)?;
    let floor = config.noise_floor * scale;
    let conv_points: Vec<Hypercomplex> = sample_indices(points.len(), config.order_samples)
        .into_iter()
        .map(|i| points[i])
        .collect();

    let mut operators = Vec::with_capacity(OperatorKind::ALL.len());
    for op in OperatorKind::ALL {
        if !op.supports(f.algebra()) {
            operators.push(OperatorReport {
                operator: op,
                verdict: Verdict::NotApplicable,
                tolerance: None,
                stats: None,
                convergence: None,
            });
            continue;
        }
        let probe = op == OperatorKind::ThirdOrderProbe;
        let h = if probe { config.probe_h } else { config.h };
        let stats = residual_stats(f, op, &points, h)?;
        let tolerance = config.tolerance.tolerance(h, scale);
        let verdict = if probe && !config.judge_probe {
            Verdict::NotApplicable
        } else if stats.max_abs <= tolerance {
            Verdict::Regular
        } else {
            Verdict::NotRegular
        };
        let convergence = if probe {
            None
        } else {
            let estimates = conv_points
                .par_iter()
                .map(|q| estimate_convergence_order(f, op, q, config.order_h, floor))
                .collect::<Result<Vec<_>>>()?;
            Some(ConvergenceSummary::from_estimates(
                config.order_h,
                &estimates,
            ))
        };
        operators.push(OperatorReport {
            operator: op,
            verdict,
            tolerance: Some(tolerance),
            stats: Some(stats),
            convergence,
        });
    }
    Ok(RegularityReport {
        function: f.clone(),
        function_scale: scale,
        operators,
        config,
    })
}
