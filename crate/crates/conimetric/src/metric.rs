//! The generalized hyperbolic density of order (alpha1, alpha2, alpha3) on the
//! twice-punctured plane C \ {0, 1}.
//!
//! The density is the unique conformal metric of constant curvature -1 with
//! singularities of the prescribed orders at 0, 1 and infinity. It is
//! evaluated through the explicit hypergeometric formula
//!
//! ```text
//! lambda(z) = 1/(|z|^a1 |1-z|^a2) * 2 K3 / (K1 |phi1|^2 + K2 |phi2|^2 + 2 Re(phi1(z) phi2(conj z)))
//! ```
//!
//! with `phi1(z) = F(alpha,beta;gamma;z)`, `phi2(z) = F(alpha,beta;alpha+beta-gamma+1;1-z)`
//! and Gamma-function constants K1, K2, K3. Far field points are routed
//! through the Moebius map w = 1/z (which swaps the punctures 0 and infinity),
//! so that every hypergeometric evaluation stays on the noise-free
//! series/continuation path.
//!
//! Cusp orders (alpha_j = 1) are handled by the limit constants: K2 = 0 when
//! gamma = 1 and K1 = 0 when gamma - alpha - beta = 0; the rest of the formula
//! stays finite and single-valued.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specialfn::{eval_2f1_clean, gamma_real, sin_pi, CutZ};

/// Points closer than this to a puncture are rejected.
pub const PUNCTURE_EXCLUSION: f64 = 1e-12;

/// Denominators at or below this value are treated as a numerical fault.
const DENOMINATOR_FLOOR: f64 = 1e-300;

/// Orders at least this close to 1 are treated as cusps in the constants.
const CUSP_TOLERANCE: f64 = 1e-9;

/// |z| above which evaluation is routed through w = 1/z.
const FAR_RADIUS: f64 = 1.25;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Singularity orders (alpha1, alpha2, alpha3) at the punctures 0, 1, infinity.
///
/// Each order lies in (0, 1] and the triple satisfies the Gauss-Bonnet
/// admissibility condition alpha1 + alpha2 + alpha3 > 2, which is necessary
/// and sufficient for the metric to exist.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularOrders {
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
}

impl SingularOrders {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Self> {
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2), ("alpha3", alpha3)] {
            if !a.is_finite() || a <= 0.0 || a > 1.0 {
                return Err(Error::param(format!(
                    "{name} = {a} outside the admissible range (0, 1]"
                )));
            }
        }
        if alpha1 + alpha2 + alpha3 <= 2.0 {
            return Err(Error::param(format!(
                "Gauss-Bonnet violated: alpha1 + alpha2 + alpha3 = {} <= 2",
                alpha1 + alpha2 + alpha3
            )));
        }
        Ok(SingularOrders { alpha1, alpha2, alpha3 })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
    pub fn alpha3(&self) -> f64 {
        self.alpha3
    }

    /// Orders seen after the swap w = 1 - z (punctures 0 and 1 exchanged).
    pub fn swapped_01(&self) -> SingularOrders {
        SingularOrders { alpha1: self.alpha2, alpha2: self.alpha1, alpha3: self.alpha3 }
    }

    /// Orders seen after T(z) = z/(z-1) (punctures 1 and infinity exchanged).
    pub fn swapped_1_inf(&self) -> SingularOrders {
        SingularOrders { alpha1: self.alpha1, alpha2: self.alpha3, alpha3: self.alpha2 }
    }

    /// Orders seen after w = 1/z (punctures 0 and infinity exchanged).
    pub fn swapped_0_inf(&self) -> SingularOrders {
        SingularOrders { alpha1: self.alpha3, alpha2: self.alpha2, alpha3: self.alpha1 }
    }
}

impl std::fmt::Display for SingularOrders {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.alpha1, self.alpha2, self.alpha3)
    }
}

/// Hypergeometric parameters derived from the singularity orders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypergeometricParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// The explicit constants of the density formula and the disk representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExplicitConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub c0: f64,
}

/// alpha = (a1+a2-a3)/2, beta = (a1+a2+a3-2)/2, gamma = a1.
///
/// The derived triple satisfies 0 < beta <= alpha and alpha + beta <= gamma <= 1.
pub fn derive_params(orders: &SingularOrders) -> HypergeometricParams {
    let p = HypergeometricParams {
        alpha: 0.5 * (orders.alpha1 + orders.alpha2 - orders.alpha3),
        beta: 0.5 * (orders.alpha1 + orders.alpha2 + orders.alpha3 - 2.0),
        gamma: orders.alpha1,
    };
    debug_assert!(p.beta > 0.0 && p.beta <= p.alpha + 1e-15);
    debug_assert!(p.alpha + p.beta <= p.gamma + 1e-12 && p.gamma <= 1.0);
    p
}

/// K1, K2, K3 of the density formula and the constant c0 of the disk
/// representation, with the cusp limits substituted: K2 = 0 at gamma = 1,
/// K1 = 0 at gamma - alpha - beta = 0.
pub fn compute_constants(p: &HypergeometricParams) -> Result<ExplicitConstants> {
    let (al, be, ga) = (p.alpha, p.beta, p.gamma);
    let k1 = if (ga - al - be).abs() < CUSP_TOLERANCE {
        0.0
    } else {
        -gamma_real(ga - al)? * gamma_real(ga - be)?
            / (gamma_real(ga)? * gamma_real(ga - al - be)?)
    };
    let k2 = if (1.0 - ga).abs() < CUSP_TOLERANCE {
        0.0
    } else {
        -gamma_real(al + 1.0 - ga)? * gamma_real(be + 1.0 - ga)?
            / (gamma_real(1.0 - ga)? * gamma_real(al + be + 1.0 - ga)?)
    };
    let k3 = (sin_pi(al) * sin_pi(be) / (sin_pi(ga - al) * sin_pi(ga - be))).sqrt()
        * gamma_real(al + be + 1.0 - ga)?
        * gamma_real(ga)?
        / (gamma_real(al)? * gamma_real(be)?);
    let c0 = (gamma_real(1.0 - al)? * gamma_real(1.0 - be)? * gamma_real(al + 1.0 - ga)?
        * gamma_real(be + 1.0 - ga)?
        / (gamma_real(al)? * gamma_real(be)? * gamma_real(ga - al)? * gamma_real(ga - be)?))
    .sqrt()
        * gamma_real(ga)?
        / gamma_real(2.0 - ga)?;
    Ok(ExplicitConstants { k1, k2, k3, c0 })
}

// ---------------------------------------------------------------------------
// Evaluation context
// ---------------------------------------------------------------------------

/// Constants for one orders triple, valid for direct evaluation of the
/// hypergeometric formula (used for |z| up to FAR_RADIUS).
#[derive(Clone, Debug)]
struct Core {
    orders: SingularOrders,
    p: HypergeometricParams,
    /// lower parameter of phi2: alpha + beta - gamma + 1
    c2: f64,
    k: ExplicitConstants,
}

impl Core {
    fn new(orders: SingularOrders) -> Result<Self> {
        let p = derive_params(&orders);
        let k = compute_constants(&p)?;
        Ok(Core { orders, p, c2: p.alpha + p.beta - p.gamma + 1.0, k })
    }

    /// Denominator K1 |phi1|^2 + K2 |phi2|^2 + 2 Re(phi1 phi2(conj z)).
    fn denominator(&self, z: CutZ) -> Result<f64> {
        let phi1 = eval_2f1_clean(self.p.alpha, self.p.beta, self.p.gamma, z)?;
        // phi2 evaluated at conj(z), i.e. F(. ; 1 - conj z); |phi2(z)| = |phi2(conj z)|
        let phi2 = eval_2f1_clean(self.p.alpha, self.p.beta, self.c2, z.conj().one_minus())?;
        Ok(self.k.k1 * phi1.norm_sqr() + self.k.k2 * phi2.norm_sqr() + 2.0 * (phi1 * phi2).re)
    }

    fn eval(&self, z: CutZ) -> Result<f64> {
        let den = self.denominator(z)?;
        if den <= DENOMINATOR_FLOOR {
            return Err(Error::NonPositiveDensity { z: z.value(), denom: den });
        }
        let r0 = z.norm();
        let r1 = (1.0 - z.re).hypot(z.im);
        Ok(2.0 * self.k.k3 / (den * r0.powf(self.orders.alpha1) * r1.powf(self.orders.alpha2)))
    }

    /// log lambda + alpha1 log|z| + alpha2 log|1-z| = log(2 K3) - log(denominator).
    fn log_smooth(&self, z: CutZ) -> Result<f64> {
        let den = self.denominator(z)?;
        if den <= DENOMINATOR_FLOOR {
            return Err(Error::NonPositiveDensity { z: z.value(), denom: den });
        }
        Ok((2.0 * self.k.k3).ln() - den.ln())
    }
}

/// Cached evaluation context for the density of one orders triple.
///
/// Construction computes every Gamma-function constant once; evaluation calls
/// are pure, so a context can be shared freely across threads.
#[derive(Clone, Debug)]
pub struct Density {
    orders: SingularOrders,
    near: Core,
    /// reversed orders, used through w = 1/z for far field points
    far: Core,
    exclusion: f64,
}

impl Density {
    pub fn new(orders: SingularOrders) -> Result<Self> {
        Ok(Density {
            orders,
            near: Core::new(orders)?,
            far: Core::new(orders.swapped_0_inf())?,
            exclusion: PUNCTURE_EXCLUSION,
        })
    }

    /// Override the default puncture exclusion radius.
    pub fn with_puncture_exclusion(mut self, radius: f64) -> Self {
        self.exclusion = radius.max(0.0);
        self
    }

    pub fn orders(&self) -> &SingularOrders {
        &self.orders
    }

    pub fn params(&self) -> &HypergeometricParams {
        &self.near.p
    }

    pub fn constants(&self) -> &ExplicitConstants {
        &self.near.k
    }

    fn check_punctures(&self, z: CutZ) -> Result<()> {
        if z.norm() <= self.exclusion {
            return Err(Error::Puncture { z: z.value() });
        }
        if (1.0 - z.re).hypot(z.im) <= self.exclusion {
            return Err(Error::Puncture { z: z.value() });
        }
        Ok(())
    }

    pub(crate) fn eval_cut(&self, z: CutZ) -> Result<f64> {
        self.check_punctures(z)?;
        if z.norm() > FAR_RADIUS {
            // lambda(z) = lambda_rev(1/z) |d(1/z)/dz|
            let lam = self.far.eval(z.recip())?;
            Ok(lam / (z.norm() * z.norm()))
        } else {
            self.near.eval(z)
        }
    }

    /// The density at z. Points on the real line take the same value from
    /// either side of the hypergeometric branch cuts.
    pub fn eval(&self, z: Complex64) -> Result<f64> {
        self.eval_cut(CutZ::new(z))
    }

    /// log lambda(z) + alpha1 log|z| + alpha2 log|1-z|.
    ///
    /// The added terms are harmonic away from the punctures, so this function
    /// has the same Laplacian as log lambda while staying smooth through the
    /// singular scale; finite-difference curvature checks difference it
    /// directly.
    pub fn log_smooth(&self, z: Complex64) -> Result<f64> {
        let z = CutZ::new(z);
        self.check_punctures(z)?;
        if z.norm() > FAR_RADIUS {
            let defect = self.orders.alpha1 + self.orders.alpha2 + self.orders.alpha3 - 2.0;
            Ok(self.far.log_smooth(z.recip())? + defect * z.norm().ln())
        } else {
            self.near.log_smooth(z)
        }
    }

    /// The density at z = -1, computed as lambda_{a1,a3,a2}(1/2)/4 through the
    /// Moebius map T(z) = z/(z-1); both hypergeometric series then converge
    /// rapidly at 1/2.
    pub fn at_minus_one(&self) -> Result<f64> {
        let permuted = Core::new(self.orders.swapped_1_inf())?;
        Ok(permuted.eval(CutZ::upper(0.5, 0.0))? / 4.0)
    }

    /// The disk-representation formula, valid for |z| < 1 off the slit (-1, 0]
    /// and for corner orders alpha1, alpha2 < 1:
    ///
    /// ```text
    /// lambda(z) = 2 c0 (1-alpha1) /
    ///   ( |z|^a1 |1-z|^a2 { |F(alpha,beta;gamma;z)|^2
    ///       - c0^2 |z|^(2-2 alpha1) |F(alpha-gamma+1,beta-gamma+1;2-gamma;z)|^2 } )
    /// ```
    ///
    /// The |z|^(2-2 alpha1) factor comes from the representation
    /// z^(1-gamma) F(alpha-gamma+1,beta-gamma+1;2-gamma;z) of the second
    /// solution; it makes this formula agree with the harmonic-denominator
    /// formula everywhere in the slit disk.
    pub fn eval_disk_formula(&self, z: Complex64) -> Result<f64> {
        if self.orders.alpha1 >= 1.0 - CUSP_TOLERANCE || self.orders.alpha2 >= 1.0 - CUSP_TOLERANCE
        {
            return Err(Error::domain(
                "disk formula requires corner orders alpha1, alpha2 < 1".to_string(),
            ));
        }
        let zc = CutZ::new(z);
        self.check_punctures(zc)?;
        if zc.norm() >= 1.0 {
            return Err(Error::domain(format!(
                "disk formula domain is |z| < 1, got |z| = {}",
                zc.norm()
            )));
        }
        if z.im == 0.0 && z.re < 0.0 {
            return Err(Error::domain(
                "disk formula is single-valued off the slit (-1, 0]".to_string(),
            ));
        }
        let p = &self.near.p;
        let f1 = eval_2f1_clean(p.alpha, p.beta, p.gamma, zc)?;
        let f2 = eval_2f1_clean(
            p.alpha - p.gamma + 1.0,
            p.beta - p.gamma + 1.0,
            2.0 - p.gamma,
            zc,
        )?;
        let c0 = self.near.k.c0;
        let r0 = zc.norm();
        let r1 = (1.0 - z.re).hypot(z.im);
        let braced = f1.norm_sqr()
            - c0 * c0 * r0.powf(2.0 - 2.0 * self.orders.alpha1) * f2.norm_sqr();
        if braced <= DENOMINATOR_FLOOR {
            return Err(Error::NonPositiveDensity { z, denom: braced });
        }
        Ok(2.0 * c0 * (1.0 - self.orders.alpha1)
            / (r0.powf(self.orders.alpha1) * r1.powf(self.orders.alpha2) * braced))
    }

    /// Exact Schwarzian of the metric: with theta_j = 1 - alpha_j,
    ///
    /// ```text
    /// S(z) = 1/2 [ (1-theta1^2)/z^2 + (1-theta2^2)/(1-z)^2
    ///              + (1-theta1^2-theta2^2+theta3^2)/(z(1-z)) ]
    /// ```
    pub fn schwarzian(&self, z: Complex64) -> Result<Complex64> {
        let zc = CutZ::new(z);
        self.check_punctures(zc)?;
        let t1 = 1.0 - self.orders.alpha1;
        let t2 = 1.0 - self.orders.alpha2;
        let t3 = 1.0 - self.orders.alpha3;
        let one_minus = Complex64::ONE - z;
        let s = (1.0 - t1 * t1) / (z * z)
            + (1.0 - t2 * t2) / (one_minus * one_minus)
            + (1.0 - t1 * t1 - t2 * t2 + t3 * t3) / (z * one_minus);
        Ok(0.5 * s)
    }
}

// ---------------------------------------------------------------------------
// Free-function views
// ---------------------------------------------------------------------------

/// One-shot density evaluation; builds a context per call. Prefer [`Density`]
/// for grid scans.
pub fn density(orders: &SingularOrders, z: Complex64) -> Result<f64> {
    Density::new(*orders)?.eval(z)
}

/// One-shot disk-representation evaluation.
pub fn density_disk_formula(orders: &SingularOrders, z: Complex64) -> Result<f64> {
    Density::new(*orders)?.eval_disk_formula(z)
}

/// lambda(-1) through the Moebius reduction to the point 1/2.
pub fn density_at_minus_one(orders: &SingularOrders) -> Result<f64> {
    let permuted = Core::new(orders.swapped_1_inf())?;
    Ok(permuted.eval(CutZ::upper(0.5, 0.0))? / 4.0)
}

/// Closed form of lambda_{a1,a2,a1}(-1) in Gamma functions:
///
/// ```text
/// 2 sqrt( tan(pi/2 (a2/2 + a1)) / tan(pi/2 (a2/2 - a1)) )
///   * G(a1/2 - a2/4 + 1/2) G(a1/2 + a2/4) / ( G(a1/2 - a2/4) G(a1/2 + a2/4 - 1/2) )
/// ```
///
/// Both tangent arguments lie beyond +-pi/2, making both tangents negative and
/// the ratio under the root positive. The implementation rewrites the ratio as
/// tan(pi q/2)/tan(pi p/2) with p = a1 + a2/2 - 1 and q = 1 - a1 + a2/2, which
/// is exact near the admissibility boundary p -> 0.
pub fn symmetric_closed_form(alpha1: f64, alpha2: f64) -> Result<f64> {
    for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
        if !a.is_finite() || a <= 0.0 || a > 1.0 {
            return Err(Error::param(format!("{name} = {a} outside (0, 1]")));
        }
    }
    if 2.0 * alpha1 + alpha2 <= 2.0 {
        return Err(Error::param(format!(
            "inadmissible symmetric orders: 2*{alpha1} + {alpha2} <= 2"
        )));
    }
    let p = alpha1 + 0.5 * alpha2 - 1.0;
    let q = 1.0 - alpha1 + 0.5 * alpha2;
    let ratio = (std::f64::consts::FRAC_PI_2 * q).tan() / (std::f64::consts::FRAC_PI_2 * p).tan();
    let g = gamma_real(0.5 * alpha1 - 0.25 * alpha2 + 0.5)? * gamma_real(0.5 * alpha1 + 0.25 * alpha2)?
        / (gamma_real(0.5 * alpha1 - 0.25 * alpha2)?
            * gamma_real(0.5 * alpha1 + 0.25 * alpha2 - 0.5)?);
    Ok(2.0 * ratio.sqrt() * g)
}

/// Exact Schwarzian of the density (free-function form of [`Density::schwarzian`]).
pub fn schwarzian_exact(orders: &SingularOrders, z: Complex64) -> Result<Complex64> {
    Density::new(*orders)?.schwarzian(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn orders(a1: f64, a2: f64, a3: f64) -> SingularOrders {
        SingularOrders::new(a1, a2, a3).unwrap()
    }

    // Reference values computed with mpmath at 40 significant digits.
    const LAMBDA_111_M1: f64 = 0.228473290522231813;
    const LAMBDA_111_2I: f64 = 0.13379340584619211;
    const LAMBDA_111_MHALF: f64 = 0.446496756118085454;
    const LAMBDA_999_P34: f64 = 0.630129320746532224;
    const LAMBDA_999_M1: f64 = 0.217775202706451891;
    const LAMBDA_879_HALF: f64 = 0.680113660873843945;
    const LAMBDA_879_M1: f64 = 0.183494947749780692;
    const LAMBDA_1_075_1_M1: f64 = 0.215326319473519928;
    const LAMBDA_11_05_M1: f64 = 0.141646048874350816;
    const LAMBDA_989_M1: f64 = 0.210826819708648105;

    #[test]
    fn orders_validation() {
        assert!(SingularOrders::new(0.5, 0.5, 0.5).is_err());
        assert!(SingularOrders::new(1.0, 1.0, 0.0).is_err());
        assert!(SingularOrders::new(1.1, 1.0, 1.0).is_err());
        assert!(SingularOrders::new(1.0, 1.0, 1.0).is_ok());
        assert!(SingularOrders::new(0.7, 0.7, 0.7).is_ok());
    }

    #[test]
    fn parameter_derivation() {
        let p = derive_params(&orders(1.0, 1.0, 1.0));
        assert_eq!((p.alpha, p.beta, p.gamma), (0.5, 0.5, 1.0));
        let p = derive_params(&orders(0.9, 0.9, 0.9));
        assert_relative_eq!(p.alpha, 0.45);
        assert_relative_eq!(p.beta, 0.35);
        assert_relative_eq!(p.gamma, 0.9);
        let p = derive_params(&orders(0.8, 0.7, 0.9));
        assert_relative_eq!(p.alpha, 0.3);
        assert_relative_eq!(p.beta, 0.2, max_relative = 1e-14);
        assert_relative_eq!(p.gamma, 0.8);
    }

    #[test]
    fn cusp_limit_constants() {
        // gamma = 1 forces K2 = 0; gamma - alpha - beta = 0 forces K1 = 0
        let k = compute_constants(&derive_params(&orders(1.0, 0.75, 1.0))).unwrap();
        assert_eq!(k.k2, 0.0);
        assert!(k.k1 != 0.0);
        let k = compute_constants(&derive_params(&orders(0.75, 1.0, 1.0))).unwrap();
        assert_eq!(k.k1, 0.0);
        assert!(k.k2 != 0.0);
        let k = compute_constants(&derive_params(&orders(1.0, 1.0, 1.0))).unwrap();
        assert_eq!((k.k1, k.k2), (0.0, 0.0));
        assert_relative_eq!(k.k3, std::f64::consts::FRAC_1_PI, max_relative = 1e-13);
    }

    #[test]
    fn constants_reference_values() {
        // mpmath: K1 = K2 = -0.31286893008046173802, K3 = 0.21644396658388242351,
        // c0 = 0.75066637772680058405 for orders (0.9, 0.9, 0.9)
        let k = compute_constants(&derive_params(&orders(0.9, 0.9, 0.9))).unwrap();
        assert_relative_eq!(k.k1, -0.31286893008046173802, max_relative = 1e-13);
        assert_relative_eq!(k.k2, -0.31286893008046173802, max_relative = 1e-13);
        assert_relative_eq!(k.k3, 0.21644396658388242351, max_relative = 1e-13);
        assert_relative_eq!(k.c0, 0.75066637772680058405, max_relative = 1e-13);
    }

    #[test]
    fn hempel_value() {
        let d = Density::new(orders(1.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(d.eval(c64(-1.0, 0.0)).unwrap(), LAMBDA_111_M1, max_relative = 1e-11);
        assert_relative_eq!(d.at_minus_one().unwrap(), LAMBDA_111_M1, max_relative = 1e-13);
        // closed form 4 pi^2 / Gamma(1/4)^4
        let g4 = gamma_real(0.25).unwrap().powi(4);
        assert_relative_eq!(
            d.at_minus_one().unwrap(),
            4.0 * std::f64::consts::PI.powi(2) / g4,
            max_relative = 1e-12
        );
    }

    #[test]
    fn density_reference_values() {
        let cases: [(SingularOrders, Complex64, f64); 7] = [
            (orders(1.0, 1.0, 1.0), c64(0.0, 2.0), LAMBDA_111_2I),
            (orders(1.0, 1.0, 1.0), c64(-0.5, 0.0), LAMBDA_111_MHALF),
            (orders(0.9, 0.9, 0.9), c64(0.3, 0.4), LAMBDA_999_P34),
            (orders(0.9, 0.9, 0.9), c64(-1.0, 0.0), LAMBDA_999_M1),
            (orders(0.8, 0.7, 0.9), c64(0.5, 0.0), LAMBDA_879_HALF),
            (orders(0.8, 0.7, 0.9), c64(0.5, 0.5), 0.431979982483433882),
            (orders(0.8, 0.7, 0.9), c64(-1.0, 0.0), LAMBDA_879_M1),
        ];
        for (o, z, expect) in cases {
            let got = density(&o, z).unwrap();
            assert_relative_eq!(got, expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn minus_one_reference_values() {
        let cases = [
            (orders(1.0, 0.75, 1.0), LAMBDA_1_075_1_M1),
            (orders(1.0, 1.0, 0.5), LAMBDA_11_05_M1),
            (orders(0.9, 0.8, 0.9), LAMBDA_989_M1),
        ];
        for (o, expect) in cases {
            assert_relative_eq!(density_at_minus_one(&o).unwrap(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn minus_one_reversal_symmetry() {
        // w = 1/z fixes -1 with |derivative| 1, so reversing the orders
        // leaves lambda(-1) unchanged
        let a = density_at_minus_one(&orders(0.8, 0.7, 0.9)).unwrap();
        let b = density_at_minus_one(&orders(0.9, 0.7, 0.8)).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn reflection_symmetry() {
        let d = Density::new(orders(0.8, 0.7, 0.9)).unwrap();
        for z in [c64(0.3, 0.4), c64(-0.6, 1.2), c64(2.4, 0.7), c64(0.2, -0.9)] {
            let up = d.eval(z).unwrap();
            let dn = d.eval(z.conj()).unwrap();
            assert_relative_eq!(up, dn, max_relative = 1e-12);
        }
    }

    #[test]
    fn real_line_branch_consistency() {
        // on (-inf, 0) and (1, inf) the two rims of the branch cuts must give
        // the same density
        let d = Density::new(orders(0.9, 0.8, 0.85)).unwrap();
        for x in [-2.3, -1.0, -0.17, 1.05, 1.9, 3.4] {
            let up = d.eval_cut(CutZ { re: x, im: 0.0, rim: 1.0 }).unwrap();
            let dn = d.eval_cut(CutZ { re: x, im: 0.0, rim: -1.0 }).unwrap();
            assert_relative_eq!(up, dn, max_relative = 1e-11, epsilon = 1e-300);
            // and the on-axis value is the limit of nearby off-axis values
            let near = d.eval(c64(x, 1e-9)).unwrap();
            assert_relative_eq!(up, near, max_relative = 1e-6);
        }
    }

    #[test]
    fn dual_formula_agreement() {
        use rand::{Rng, SeedableRng};
        let d = Density::new(orders(0.9, 0.9, 0.9)).unwrap();
        for z in [c64(0.3, 0.4), c64(0.5, 0.0), c64(-0.2, 0.3), c64(0.1, -0.55), c64(0.85, 0.1)] {
            let a = d.eval(z).unwrap();
            let b = d.eval_disk_formula(z).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
        // 100-point sample of {|z| < 0.9} off the slit and the punctures
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut n = 0;
        while n < 100 {
            let z = c64(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            if z.norm() >= 0.88
                || z.norm() < 0.05
                || (z - Complex64::ONE).norm() < 0.1
                || (z.im.abs() < 1e-3 && z.re < 0.0)
            {
                continue;
            }
            assert_relative_eq!(
                d.eval(z).unwrap(),
                d.eval_disk_formula(z).unwrap(),
                max_relative = 1e-8
            );
            n += 1;
        }
        // radial limit: |z|^a1 * lambda -> 2 c0 (1 - alpha1) as z -> 0, with
        // the braced factor approaching 1 at the rate c0^2 |z|^(2-2 a1)
        let c0 = d.constants().c0;
        let a1 = 0.9;
        let target = 2.0 * c0 * (1.0 - a1);
        for r in [1e-4f64, 1e-6, 1e-8] {
            let v = d.eval_disk_formula(c64(r, 0.0)).unwrap() * r.powf(a1);
            let deviation = v / target - 1.0;
            let predicted = c0 * c0 * r.powf(2.0 - 2.0 * a1);
            // the prediction is the leading term; its own relative error is
            // again of order the deviation
            assert!(
                (deviation / predicted - 1.0).abs() < 2.5 * predicted + 1e-3,
                "r = {r}: deviation {deviation:.3e} vs predicted {predicted:.3e}"
            );
        }
    }

    #[test]
    fn disk_formula_domain() {
        let d = Density::new(orders(0.9, 0.9, 0.9)).unwrap();
        assert!(d.eval_disk_formula(c64(-0.5, 0.0)).is_err()); // slit
        assert!(d.eval_disk_formula(c64(1.5, 0.0)).is_err()); // outside disk
        let cusp = Density::new(orders(1.0, 0.9, 0.9)).unwrap();
        assert!(cusp.eval_disk_formula(c64(0.3, 0.0)).is_err()); // cusp at 0
    }

    #[test]
    fn log_smooth_consistent_with_density() {
        // log_smooth must equal log lambda + a1 log|z| + a2 log|1-z| exactly
        // (not merely up to harmonic terms) on both sides of the far-field
        // switch, since the Schwarzian oracle differences it
        let o = orders(0.8, 0.7, 0.9);
        let d = Density::new(o).unwrap();
        for z in [c64(0.3, 0.4), c64(-1.1, 0.6), c64(2.4, -1.7), c64(1.2, 0.9), c64(-0.2, 2.9)] {
            let direct = d.eval(z).unwrap().ln()
                + o.alpha1() * z.norm().ln()
                + o.alpha2() * (z - Complex64::ONE).norm().ln();
            let smooth = d.log_smooth(z).unwrap();
            assert_relative_eq!(smooth, direct, max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn disk_formula_half_point_via_moebius() {
        // lambda_{a1,a2,a3}(1/2) = 4 lambda_{a1,a3,a2}(-1): the disk formula
        // at 1/2 against the Gamma-reduction route
        let o = orders(0.8, 0.7, 0.9);
        let disk = Density::new(o).unwrap().eval_disk_formula(c64(0.5, 0.0)).unwrap();
        let reduced = 4.0 * density_at_minus_one(&o.swapped_1_inf()).unwrap();
        assert_relative_eq!(disk, reduced, max_relative = 1e-10);
    }

    #[test]
    fn contexts_are_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Density>();
        assert_send_sync::<SingularOrders>();

        // one context, concurrent evaluation, identical results
        let d = Density::new(orders(0.8, 0.7, 0.9)).unwrap();
        let z = c64(0.3, 0.4);
        let expect = d.eval(z).unwrap();
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..4).map(|_| s.spawn(|| d.eval(z).unwrap())).collect();
            for h in handles {
                assert_eq!(h.join().unwrap(), expect);
            }
        });
    }

    #[test]
    fn moebius_half_relation() {
        // lambda_{a1,a3,a2}(1/2)/4 = lambda_{a1,a2,a3}(-1) and the quarter
        // relation lambda_{a1,a2,a3}(-1) = lambda_{a1,a3,a2}(1/2)/4 reread:
        // direct evaluation at -1 must match the reduction.
        for o in [orders(0.8, 0.7, 0.9), orders(1.0, 0.75, 1.0), orders(0.9, 0.9, 0.9)] {
            let direct = density(&o, c64(-1.0, 0.0)).unwrap();
            let reduced = density_at_minus_one(&o).unwrap();
            assert_relative_eq!(direct, reduced, max_relative = 1e-10);
        }
    }

    #[test]
    fn symmetric_closed_form_values() {
        assert_relative_eq!(
            symmetric_closed_form(1.0, 1.0).unwrap(),
            LAMBDA_111_M1,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            symmetric_closed_form(0.9, 0.8).unwrap(),
            LAMBDA_989_M1,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            symmetric_closed_form(0.9, 0.8).unwrap(),
            density_at_minus_one(&orders(0.9, 0.8, 0.9)).unwrap(),
            max_relative = 1e-10
        );
        assert!(symmetric_closed_form(0.5, 1.0).is_err()); // boundary excluded
        assert!(symmetric_closed_form(0.3, 0.9).is_err());
    }

    #[test]
    fn cusp_limit_continuity() {
        let z = c64(0.3, 0.4);
        let at_cusp = density(&orders(1.0, 0.9, 0.9), z).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let v = density(&orders(1.0 - eps, 0.9, 0.9), z).unwrap();
            let diff = (v - at_cusp).abs() / at_cusp;
            assert!(diff < last, "difference must shrink as eps -> 0");
            // roughly linear in eps
            assert!(diff < 10.0 * eps);
            last = diff;
        }
    }

    #[test]
    fn schwarzian_triple_cusp() {
        // at theta_j = 0 the Schwarzian is (1/2)[1/z^2 + 1/(1-z)^2 + 1/(z(1-z))]
        let d = Density::new(orders(1.0, 1.0, 1.0)).unwrap();
        let z = c64(0.4, 0.7);
        let s = d.schwarzian(z).unwrap();
        let om = Complex64::ONE - z;
        let expect = 0.5 * (1.0 / (z * z) + 1.0 / (om * om) + 1.0 / (z * om));
        assert!((s - expect).norm() < 1e-14);
        // conjugate points give conjugate values
        let sc = d.schwarzian(z.conj()).unwrap();
        assert!((sc - s.conj()).norm() < 1e-14);
    }

    #[test]
    fn puncture_rejection() {
        let d = Density::new(orders(1.0, 1.0, 1.0)).unwrap();
        for z in [c64(0.0, 0.0), c64(1.0, 0.0), c64(1e-13, 0.0), c64(1.0, 1e-13)] {
            assert!(matches!(d.eval(z), Err(Error::Puncture { .. })), "z = {z}");
            assert!(matches!(d.schwarzian(z), Err(Error::Puncture { .. })));
        }
        // the exclusion radius is adjustable
        let wide = Density::new(orders(1.0, 1.0, 1.0)).unwrap().with_puncture_exclusion(1e-3);
        assert!(matches!(wide.eval(c64(5e-4, 0.0)), Err(Error::Puncture { .. })));
        assert!(wide.eval(c64(2e-3, 0.0)).is_ok());
    }
}
