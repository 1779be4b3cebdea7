//! Sharp lower bounds for the density and the derived Landau/Schottky bound
//! functions for meromorphic function classes.
//!
//! The lower bound is built from the rotationally symmetric model density
//! `lambda_{alpha,R}(z) = (1-alpha) / (|z| sinh[(1-alpha) log(R/|z|)])` on the
//! punctured disk 0 < |z| < R, calibrated so that equality holds exactly at
//! z = -1. Landau and Schottky constants come from the classes M_{j,k,l} of
//! meromorphic functions on the unit disk whose zeros, 1-points and poles have
//! orders >= j, k, l; they reduce to the density of order
//! (1-1/j, 1-1/k, 1-1/l) evaluated at -1.
//!
//! Every bound here is sharp: the extremal functions are the triangle maps of
//! order (j,k,l) with f(0) = -1, and no smaller constant works for the whole
//! class. This library computes the bounds and their equality values but does
//! not construct the extremal maps themselves; sharpness is validated through
//! the equality-at-(-1) checks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metric::{density_at_minus_one, Density, SingularOrders, PUNCTURE_EXCLUSION};
use crate::specialfn::{cos_pi, gamma_real};

/// (1 - alpha) below this is treated as the cusp limit in the C-constants.
const CUSP_LIMIT: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Triangle signatures
// ---------------------------------------------------------------------------

/// A zero/one/pole multiplicity: an integer >= 2 or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("order must be >= 2 or infinite, got {n}")));
        }
        Ok(Order::Finite(n))
    }

    /// 1/n with the convention 1/infinity = 0.
    pub fn reciprocal(&self) -> f64 {
        match self {
            Order::Finite(n) => 1.0 / f64::from(*n),
            Order::Infinite => 0.0,
        }
    }

    /// The singularity order 1 - 1/n this multiplicity induces.
    pub fn alpha(&self) -> f64 {
        1.0 - self.reciprocal()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Order::Infinite);
        }
        let n: u32 = t
            .parse()
            .map_err(|_| Error::param(format!("cannot parse order from {s:?}")))?;
        Order::finite(n)
    }
}

/// The triple (j, k, l) defining the class M_{j,k,l}: meromorphic functions on
/// the unit disk whose zeros have order >= j, 1-points order >= k and poles
/// order >= l, with 1/j + 1/k + 1/l < 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleSignature {
    pub j: Order,
    pub k: Order,
    pub l: Order,
}

impl TriangleSignature {
    pub fn new(j: Order, k: Order, l: Order) -> Result<Self> {
        // exact integer arithmetic: 1/j + 1/k + 1/l < 1 must reject (2,3,6)
        let admissible = match (j, k, l) {
            (Order::Finite(a), Order::Finite(b), Order::Finite(c)) => {
                let (a, b, c) = (u128::from(a), u128::from(b), u128::from(c));
                b * c + a * c + a * b < a * b * c
            }
            (Order::Finite(a), Order::Finite(b), Order::Infinite)
            | (Order::Finite(a), Order::Infinite, Order::Finite(b))
            | (Order::Infinite, Order::Finite(a), Order::Finite(b)) => {
                let (a, b) = (u128::from(a), u128::from(b));
                a + b < a * b
            }
            // at most one finite order >= 2: sum is at most 1/2 < 1
            _ => true,
        };
        if !admissible {
            return Err(Error::param(format!(
                "signature ({j}, {k}, {l}) violates 1/j + 1/k + 1/l < 1"
            )));
        }
        Ok(TriangleSignature { j, k, l })
    }

    /// The singularity orders (1-1/j, 1-1/k, 1-1/l) of the associated density.
    pub fn orders(&self) -> SingularOrders {
        SingularOrders::new(self.j.alpha(), self.k.alpha(), self.l.alpha())
            .expect("signature constraint implies admissible orders")
    }
}

// ---------------------------------------------------------------------------
// Lower bound
// ---------------------------------------------------------------------------

/// The constants of the sharp lower bound, together with the density value at
/// -1 they are built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBoundConstants {
    pub c1: f64,
    pub c3: f64,
    pub lambda_minus_one: f64,
}

fn c_constant(alpha: f64, lambda_m1: f64) -> f64 {
    let t = 1.0 - alpha;
    if t <= CUSP_LIMIT {
        // arcsinh(x)/x -> 1 substituted analytically
        1.0 / lambda_m1
    } else {
        (t / lambda_m1).asinh() / t
    }
}

/// C1 = arcsinh((1-a1)/lambda(-1))/(1-a1) and the analogue C3 for alpha3, with
/// the limit value 1/lambda(-1) at cusp orders.
pub fn lower_bound_constants(orders: &SingularOrders) -> Result<LowerBoundConstants> {
    let lambda_minus_one = density_at_minus_one(orders)?;
    Ok(LowerBoundConstants {
        c1: c_constant(orders.alpha1(), lambda_minus_one),
        c3: c_constant(orders.alpha3(), lambda_minus_one),
        lambda_minus_one,
    })
}

/// Parameters of the rotationally symmetric model density on 0 < |z| < R.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelDensityParams {
    pub alpha: f64,
    pub radius: f64,
}

impl ModelDensityParams {
    pub fn new(alpha: f64, radius: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha > 1.0 {
            return Err(Error::param(format!("model order must satisfy alpha <= 1, got {alpha}")));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::param(format!("model radius must be positive, got {radius}")));
        }
        Ok(ModelDensityParams { alpha, radius })
    }
}

fn sinh_branch(alpha: f64, s: f64, r: f64) -> f64 {
    let t = 1.0 - alpha;
    if t <= CUSP_LIMIT {
        1.0 / (r * s)
    } else {
        t / (r * (t * s).sinh())
    }
}

/// The model density lambda_{alpha,R}(z) = (1-alpha)/(|z| sinh[(1-alpha) log(R/|z|)]),
/// read as 1/(|z| log(R/|z|)) in the cusp limit alpha = 1.
pub fn model_density(params: &ModelDensityParams, z: Complex64) -> Result<f64> {
    let r = z.norm();
    if !(r > 0.0 && r < params.radius) {
        return Err(Error::domain(format!(
            "model density defined on 0 < |z| < {}, got |z| = {r}",
            params.radius
        )));
    }
    Ok(sinh_branch(params.alpha, (params.radius / r).ln(), r))
}

/// The sharp lower bound for the density: equality holds exactly at z = -1.
///
/// ```text
/// lambda(z) >= (1-a1) / (|z| sinh[(1-a1)(C1 - log|z|)])   for |z| <= 1,
/// lambda(z) >= (1-a3) / (|z| sinh[(1-a3)(C3 + log|z|)])   for |z| > 1,
/// ```
/// with the cusp limits read as in [`model_density`].
pub fn lower_bound(orders: &SingularOrders, z: Complex64) -> Result<f64> {
    let r = z.norm();
    if r <= PUNCTURE_EXCLUSION || (z - Complex64::ONE).norm() <= PUNCTURE_EXCLUSION {
        return Err(Error::domain(format!("lower bound undefined at puncture z = {z}")));
    }
    if !r.is_finite() {
        return Err(Error::domain("lower bound undefined at infinity".to_string()));
    }
    let c = lower_bound_constants(orders)?;
    if r <= 1.0 {
        Ok(sinh_branch(orders.alpha1(), c.c1 - r.ln(), r))
    } else {
        Ok(sinh_branch(orders.alpha3(), c.c3 + r.ln(), r))
    }
}

// ---------------------------------------------------------------------------
// Landau and Schottky bounds
// ---------------------------------------------------------------------------

fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

fn landau_c(order: Order, lambda_m1: f64) -> f64 {
    match order {
        Order::Finite(n) => {
            let n = f64::from(n);
            n * (1.0 / (n * lambda_m1)).asinh()
        }
        Order::Infinite => 1.0 / lambda_m1,
    }
}

/// Sharp upper bound on |f'(0)| over f in M_{j,k,l} with f(0) = a0:
///
/// ```text
/// |f'(0)| <= 2 j |a0| sinh[(C1 + |log|a0||)/j]    if |a0| <= 1,
/// |f'(0)| <= 2 l |a0| sinh[(C3 + |log|a0||)/l]    if |a0| >= 1,
/// ```
/// where C1 = j arcsinh(1/(j lambda(-1))), C3 likewise with l, and an infinite
/// order is read in the limit 2 |a0| (C + |log|a0||).
pub fn landau_bound(sig: &TriangleSignature, a0: Complex64) -> Result<f64> {
    let m = a0.norm();
    if m <= PUNCTURE_EXCLUSION || (a0 - Complex64::ONE).norm() <= PUNCTURE_EXCLUSION {
        return Err(Error::domain(format!(
            "Landau bound requires f(0) outside {{0, 1}}, got {a0}"
        )));
    }
    let lambda_m1 = density_at_minus_one(&sig.orders())?;
    let (ord, c) = if m <= 1.0 {
        (sig.j, landau_c(sig.j, lambda_m1))
    } else {
        (sig.l, landau_c(sig.l, lambda_m1))
    };
    let s = c + m.ln().abs();
    Ok(match ord {
        Order::Finite(n) => {
            let n = f64::from(n);
            2.0 * n * m * (s / n).sinh()
        }
        Order::Infinite => 2.0 * m * s,
    })
}

/// Result of the Schottky bound: beyond the pole-free radius the theorem gives
/// no bound, which is a distinguished outcome rather than an error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SchottkyBound {
    Finite(f64),
    Unbounded,
}

impl SchottkyBound {
    pub fn finite(&self) -> Option<f64> {
        match self {
            SchottkyBound::Finite(v) => Some(*v),
            SchottkyBound::Unbounded => None,
        }
    }
}

fn schottky_c1(sig: &TriangleSignature) -> Result<f64> {
    let l = match sig.l {
        Order::Finite(n) => f64::from(n),
        Order::Infinite => {
            return Err(Error::domain(
                "Schottky bound needs finite pole order l; use the zero-free variant for l = inf"
                    .to_string(),
            ))
        }
    };
    let lambda_m1 = density_at_minus_one(&sig.orders())?;
    Ok(l * (1.0 / (l * lambda_m1)).asinh())
}

/// Explicit bound on log|f(z)| for |z| = r and f in M_{j,k,l} with finite l:
///
/// ```text
/// log|f(z)| <= 2 l artanh[ tanh((C~1 + log+|f(0)|)/(2l)) (1+r)/(1-r) ] - C~1
/// ```
/// when the artanh argument is < 1, and [`SchottkyBound::Unbounded`] otherwise;
/// the bound is finite exactly for r below [`pole_free_radius`].
pub fn schottky_bound(sig: &TriangleSignature, f0_abs: f64, r: f64) -> Result<SchottkyBound> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("Schottky bound needs r in [0, 1), got {r}")));
    }
    if !(f0_abs >= 0.0) {
        return Err(Error::domain(format!("|f(0)| must be nonnegative, got {f0_abs}")));
    }
    let c1 = schottky_c1(sig)?;
    let l = match sig.l {
        Order::Finite(n) => f64::from(n),
        Order::Infinite => unreachable!("schottky_c1 rejects infinite l"),
    };
    let t = ((c1 + log_plus(f0_abs)) / (2.0 * l)).tanh() * (1.0 + r) / (1.0 - r);
    if t < 1.0 {
        Ok(SchottkyBound::Finite(2.0 * l * t.atanh() - c1))
    } else {
        Ok(SchottkyBound::Unbounded)
    }
}

/// exp(-(C~1 + log+|f(0)|)/l): within this radius functions of the class have
/// no pole and the Schottky bound is finite. For l = infinity the pole-free
/// radius is the whole disk, returned as 1.
pub fn pole_free_radius(sig: &TriangleSignature, f0_abs: f64) -> Result<f64> {
    match sig.l {
        Order::Infinite => Ok(1.0),
        Order::Finite(n) => {
            let c1 = schottky_c1(sig)?;
            Ok((-(c1 + log_plus(f0_abs)) / f64::from(n)).exp())
        }
    }
}

/// Schottky bound on the whole disk for pole-free classes M_{j,k,inf}:
///
/// ```text
/// log|f(z)| <= [C + log+|f(0)|] (1+|z|)/(1-|z|) - C,   C = 1/lambda_{1-1/j,1-1/k,1}(-1).
/// ```
pub fn schottky_zero_free_bound(j: Order, k: Order, f0_abs: f64, r: f64) -> Result<f64> {
    if j.reciprocal() + k.reciprocal() >= 1.0 {
        return Err(Error::domain(format!(
            "zero-free Schottky bound needs 1/j + 1/k < 1, got j = {j}, k = {k}"
        )));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1), got {r}")));
    }
    if !(f0_abs >= 0.0) {
        return Err(Error::domain(format!("|f(0)| must be nonnegative, got {f0_abs}")));
    }
    let orders = SingularOrders::new(j.alpha(), k.alpha(), 1.0)?;
    let c = 1.0 / density_at_minus_one(&orders)?;
    Ok((c + log_plus(f0_abs)) * (1.0 + r) / (1.0 - r) - c)
}

/// The zero-free Schottky constant in closed form:
///
/// ```text
/// L_k = (1/4 pi^2) Gamma((1+1/k)/4)^2 Gamma((1-1/k)/4)^2 cos(pi/(2k)),
/// ```
/// with L_inf = Gamma(1/4)^4/(4 pi^2); equal to 1/lambda_{1,1-1/k,1}(-1).
pub fn schottky_lk(k: Order) -> f64 {
    let kinv = k.reciprocal();
    let g1 = gamma_real((1.0 + kinv) / 4.0).expect("argument in (0, 1/2]");
    let g2 = gamma_real((1.0 - kinv) / 4.0).expect("argument in (0, 1/2]");
    g1 * g1 * g2 * g2 * cos_pi(0.5 * kinv) / (4.0 * std::f64::consts::PI.powi(2))
}

/// The hyperbolic density 2/(1-|z|^2) of the unit disk, the maximal metric of
/// curvature -1 there.
pub fn hyperbolic_disk_density(z: Complex64) -> Result<f64> {
    let r2 = z.norm_sqr();
    if r2 >= 1.0 {
        return Err(Error::domain(format!("|z| = {} outside the unit disk", r2.sqrt())));
    }
    Ok(2.0 / (1.0 - r2))
}

/// Lower bound evaluation with precomputed constants; what grid scans should
/// call instead of [`lower_bound`].
pub fn lower_bound_with(
    constants: &LowerBoundConstants,
    density: &Density,
    z: Complex64,
) -> Result<f64> {
    let r = z.norm();
    if r <= PUNCTURE_EXCLUSION || (z - Complex64::ONE).norm() <= PUNCTURE_EXCLUSION {
        return Err(Error::domain(format!("lower bound undefined at puncture z = {z}")));
    }
    let orders = density.orders();
    if r <= 1.0 {
        Ok(sinh_branch(orders.alpha1(), constants.c1 - r.ln(), r))
    } else {
        Ok(sinh_branch(orders.alpha3(), constants.c3 + r.ln(), r))
    }
}
