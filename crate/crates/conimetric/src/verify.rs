//! Independent numerical certification of the density implementation:
//! finite-difference curvature and Schwarzian oracles, symmetry and
//! monotonicity scans, and lower-bound audits.
//!
//! The curvature used is the regular-metric form -Delta(log lambda)/lambda^2,
//! which is the right notion here because the density is smooth and strictly
//! positive away from the punctures (the generalized, mean-value-based
//! curvature of non-smooth metrics coincides with it in that case).
//!
//! The curvature check differences `log_smooth`, the log density with its two
//! puncture logarithms removed. Those terms are harmonic, so the Laplacian is
//! unchanged, while the fourth derivatives driving the finite-difference
//! truncation error shrink by one to two orders of magnitude near the
//! punctures. The Schwarzian check differences the same function and restores
//! the removed terms' first and second z-derivatives in closed form.
//!
//! Scans never raise on a mathematical failure; they record it in the report.
//! Only evaluation faults (convergence failures, domain violations) surface as
//! errors.

use num_complex::Complex64;

use crate::bounds::{lower_bound_constants, lower_bound_with};
use crate::error::{Error, Result};
use crate::metric::{Density, SingularOrders};

/// Admissible finite-difference steps.
pub const FD_STEP_RANGE: (f64, f64) = (1e-5, 1e-3);

/// Default finite-difference step.
pub const FD_STEP_DEFAULT: f64 = 1e-4;

/// Default puncture standoff for verification grids.
pub const GRID_STANDOFF: f64 = 0.05;

// ---------------------------------------------------------------------------
// Grids and reports
// ---------------------------------------------------------------------------

/// Sampling region in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max].
    Rect { re_min: f64, re_max: f64, im_min: f64, im_max: f64 },
    /// Annulus r_min <= |z| <= r_max, full angle.
    Annulus { r_min: f64, r_max: f64 },
}

/// A deterministic sampling grid with a puncture exclusion radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub region: Region,
    pub nx: usize,
    pub ny: usize,
    pub exclusion: f64,
}

impl GridSpec {
    pub fn rect(re_min: f64, re_max: f64, im_min: f64, im_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(re_min < re_max && im_min <= im_max) || nx < 2 || ny < 1 {
            return Err(Error::param("degenerate rectangle grid".to_string()));
        }
        Ok(GridSpec {
            region: Region::Rect { re_min, re_max, im_min, im_max },
            nx,
            ny,
            exclusion: GRID_STANDOFF,
        })
    }

    pub fn annulus(r_min: f64, r_max: f64, n_radial: usize, n_angular: usize) -> Result<Self> {
        if !(0.0 < r_min && r_min <= r_max) || n_radial < 1 || n_angular < 4 {
            return Err(Error::param("degenerate annulus grid".to_string()));
        }
        Ok(GridSpec {
            region: Region::Annulus { r_min, r_max },
            nx: n_radial,
            ny: n_angular,
            exclusion: GRID_STANDOFF,
        })
    }

    pub fn with_exclusion(mut self, exclusion: f64) -> Self {
        self.exclusion = exclusion.max(0.0);
        self
    }

    /// Sample points in a fixed row-major order, puncture-adjacent points
    /// removed. The ordering is part of the contract: reports and tables
    /// derived from a grid are byte-stable across runs.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.nx * self.ny);
        match self.region {
            Region::Rect { re_min, re_max, im_min, im_max } => {
                let dx = (re_max - re_min) / (self.nx - 1) as f64;
                let dy = if self.ny > 1 { (im_max - im_min) / (self.ny - 1) as f64 } else { 0.0 };
                for iy in 0..self.ny {
                    for ix in 0..self.nx {
                        pts.push(Complex64::new(re_min + dx * ix as f64, im_min + dy * iy as f64));
                    }
                }
            }
            Region::Annulus { r_min, r_max } => {
                let dr = if self.nx > 1 { (r_max - r_min) / (self.nx - 1) as f64 } else { 0.0 };
                for it in 0..self.ny {
                    let theta = -std::f64::consts::PI
                        + 2.0 * std::f64::consts::PI * it as f64 / self.ny as f64;
                    for ir in 0..self.nx {
                        pts.push(Complex64::from_polar(r_min + dr * ir as f64, theta));
                    }
                }
            }
        }
        pts.retain(|z| {
            z.norm() > self.exclusion && (z - Complex64::ONE).norm() > self.exclusion
        });
        pts
    }
}

/// Outcome of one verification check.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Check name (stable identifier).
    pub check: String,
    /// Number of points actually tested.
    pub points: usize,
    /// Maximum absolute residual seen.
    pub max_abs: f64,
    /// Maximum relative residual seen (for absolute-tolerance checks this
    /// equals `max_abs`; the residual scale is stated in `details`).
    pub max_rel: f64,
    /// Tolerance the check was run against.
    pub tol: f64,
    /// pass <=> max_rel <= tol and no structural violations were recorded.
    pub pass: bool,
    /// Violations and per-identity breakdowns.
    pub details: Vec<String>,
}

impl VerificationReport {
    fn new(check: &str, tol: f64) -> Self {
        VerificationReport {
            check: check.to_string(),
            points: 0,
            max_abs: 0.0,
            max_rel: 0.0,
            tol,
            pass: true,
            details: Vec::new(),
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.pass && self.max_rel <= self.tol;
        self
    }

    /// One line of stable `key=value` fields for scripting.
    pub fn to_record(&self) -> String {
        format!(
            "check={} points={} max_abs={:.6e} max_rel={:.6e} tol={:.3e} pass={}",
            self.check, self.points, self.max_abs, self.max_rel, self.tol, self.pass
        )
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "[{}] {}: {} points, max residual {:.3e} (tol {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.points,
            self.max_rel,
            self.tol
        )?;
        for d in &self.details {
            writeln!(f, "    {d}")?;
        }
        Ok(())
    }
}

/// Verification tolerances; `CONIMETRIC_TOL` overrides the relative ones
/// through [`Tolerances::uniform`].
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub curvature: f64,
    pub schwarzian_abs: f64,
    pub symmetry: f64,
    pub bound_equality: f64,
    pub monotonicity_strict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            curvature: 1e-5,
            schwarzian_abs: 1e-4,
            symmetry: 1e-8,
            bound_equality: 1e-8,
            monotonicity_strict: 1e-12,
        }
    }
}

impl Tolerances {
    /// One override for every residual tolerance; the monotonicity strictness
    /// threshold keeps its default (it separates strictness from noise, not
    /// accuracy from error).
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            curvature: tol,
            schwarzian_abs: tol,
            symmetry: tol,
            bound_equality: tol,
            ..Tolerances::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Finite-difference oracles
// ---------------------------------------------------------------------------

fn check_fd_args(z: Complex64, h: f64) -> Result<()> {
    if !(h >= FD_STEP_RANGE.0 && h <= FD_STEP_RANGE.1) {
        return Err(Error::domain(format!(
            "finite-difference step {h:e} outside [{:e}, {:e}]",
            FD_STEP_RANGE.0, FD_STEP_RANGE.1
        )));
    }
    let dist = z.norm().min((z - Complex64::ONE).norm());
    if dist <= 10.0 * h {
        return Err(Error::domain(format!(
            "point {z} within 10h of a puncture (distance {dist:e}, h = {h:e})"
        )));
    }
    Ok(())
}

/// Finite-difference Gauss curvature of an arbitrary positive density:
/// -(5-point Laplacian of log density)/density^2. Exactly -1 for any metric of
/// constant curvature -1, up to O(h^2) truncation.
pub fn curvature_fd_of<F>(density: F, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let g = |w: Complex64| -> Result<f64> { Ok(density(w)?.ln()) };
    let lap = (g(z + h)? + g(z - h)? + g(z + Complex64::new(0.0, h))?
        + g(z - Complex64::new(0.0, h))?
        - 4.0 * g(z)?)
        / (h * h);
    let lam = density(z)?;
    Ok(-lap / (lam * lam))
}

/// Finite-difference curvature of the density with a cached context.
///
/// The 5-point Laplacian acts on the log density with its harmonic puncture
/// terms removed (same Laplacian, far smaller truncation error).
pub fn curvature_fd_with(d: &Density, z: Complex64, h: f64) -> Result<f64> {
    check_fd_args(z, h)?;
    let g = |w: Complex64| d.log_smooth(w);
    let lap = (g(z + h)? + g(z - h)? + g(z + Complex64::new(0.0, h))?
        + g(z - Complex64::new(0.0, h))?
        - 4.0 * g(z)?)
        / (h * h);
    let lam = d.eval(z)?;
    Ok(-lap / (lam * lam))
}

/// Finite-difference curvature -Delta(log lambda)/lambda^2 of the density of
/// the given orders at z, step h.
pub fn curvature_fd(orders: &SingularOrders, z: Complex64, h: f64) -> Result<f64> {
    curvature_fd_with(&Density::new(*orders)?, z, h)
}

/// Step size for curvature grid scans, balancing the two error floors of a
/// second difference: rounding noise grows like 1/(h lambda)^2, so flat
/// regions (small density) need a longer step, while the truncation term
/// grows like (h/d)^2 towards the punctures, so near-puncture points need a
/// shorter one. Calibrated for residuals a few times 1e-6 with ~2e-15
/// pointwise evaluation noise.
pub fn curvature_step(z: Complex64, lambda: f64) -> f64 {
    let dist = z.norm().min((z - Complex64::ONE).norm());
    let noise_floor = 6.7e-5 / lambda;
    let truncation_cap = 6e-4 * dist;
    noise_floor
        .max(truncation_cap.min(FD_STEP_DEFAULT))
        .clamp(FD_STEP_RANGE.0, FD_STEP_RANGE.1)
}

/// Finite-difference Schwarzian 2[d^2/dz^2 log lambda - (d/dz log lambda)^2]
/// with d/dz = (d/dx - i d/dy)/2, built from axis stencils on `log_smooth`
/// plus the exact derivatives of the removed puncture terms.
pub fn schwarzian_fd_with(d: &Density, z: Complex64, h: f64) -> Result<Complex64> {
    check_fd_args(z, h)?;
    let g = |w: Complex64| d.log_smooth(w);
    let ih = Complex64::new(0.0, h);

    let gp1 = g(z + h)?;
    let gm1 = g(z - h)?;
    let gp2 = g(z + 2.0 * h)?;
    let gm2 = g(z - 2.0 * h)?;
    let gp1i = g(z + ih)?;
    let gm1i = g(z - ih)?;
    let gp2i = g(z + 2.0 * ih)?;
    let gm2i = g(z - 2.0 * ih)?;
    let g0 = g(z)?;

    let gx = (-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h);
    let gy = (-gp2i + 8.0 * gp1i - 8.0 * gm1i + gm2i) / (12.0 * h);
    let gxx = (-gp2 + 16.0 * gp1 - 30.0 * g0 + 16.0 * gm1 - gm2) / (12.0 * h * h);
    let gyy = (-gp2i + 16.0 * gp1i - 30.0 * g0 + 16.0 * gm1i - gm2i) / (12.0 * h * h);
    let gxy = (g(z + h + ih)? - g(z + h - ih)? - g(z - h + ih)? + g(z - h - ih)?)
        / (4.0 * h * h);

    // derivatives of the removed terms -a1 log|z| - a2 log|1-z|
    let a1 = d.orders().alpha1();
    let a2 = d.orders().alpha2();
    let om = Complex64::ONE - z;
    let du = -0.5 * a1 / z + 0.5 * a2 / om;
    let duu = 0.5 * a1 / (z * z) + 0.5 * a2 / (om * om);

    let dz = 0.5 * Complex64::new(gx, -gy) + du;
    let dzz = 0.25 * Complex64::new(gxx - gyy, 0.0) - Complex64::new(0.0, 0.5) * gxy + duu;
    Ok(2.0 * (dzz - dz * dz))
}

/// Finite-difference Schwarzian of the density of the given orders.
pub fn schwarzian_fd(orders: &SingularOrders, z: Complex64, h: f64) -> Result<Complex64> {
    schwarzian_fd_with(&Density::new(*orders)?, z, h)
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

/// Strict angular monotonicity scan on the circle |z| = r: the density must
/// strictly decrease over t in (0, pi) and strictly increase over (-pi, 0).
/// Adjacent samples must differ by more than `strict` relative in the correct
/// direction; violations are recorded, not raised.
pub fn scan_monotonicity(orders: &SingularOrders, r: f64, n: usize) -> Result<VerificationReport> {
    scan_monotonicity_with(orders, r, n, Tolerances::default().monotonicity_strict)
}

pub fn scan_monotonicity_with(
    orders: &SingularOrders,
    r: f64,
    n: usize,
    strict: f64,
) -> Result<VerificationReport> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("circle radius must be positive, got {r}")));
    }
    if n < 8 {
        return Err(Error::domain(format!("need at least 8 samples per half-circle, got {n}")));
    }
    let d = Density::new(*orders)?;
    let mut report = VerificationReport::new("monotonicity", strict);
    let pi = std::f64::consts::PI;

    // ascending angle sequences in each open half-circle
    let mut check_half = |offset: f64, decreasing: bool| -> Result<()> {
        let mut prev: Option<(f64, f64)> = None;
        for k in 1..=n {
            let t = offset + pi * k as f64 / (n + 1) as f64;
            let lam = d.eval(Complex64::from_polar(r, t))?;
            report.points += 1;
            if let Some((tp, lp)) = prev {
                let (hi, lo) = if decreasing { (lp, lam) } else { (lam, lp) };
                let margin = (hi - lo) / hi;
                if margin <= strict {
                    report.pass = false;
                    report.max_rel = report.max_rel.max((lo - hi) / hi + strict);
                    report.details.push(format!(
                        "violation at r = {r}: lambda({tp:.6}) = {lp:.12e} vs lambda({t:.6}) = {lam:.12e}"
                    ));
                }
            }
            prev = Some((t, lam));
        }
        Ok(())
    };

    // strictly decreasing on (0, pi), strictly increasing on (-pi, 0)
    check_half(0.0, true)?;
    check_half(-pi, false)?;
    report.max_abs = report.max_rel;
    Ok(report.finish())
}

/// Residuals of the three exact symmetries on a grid:
/// (i) reflection lambda(conj z) = lambda(z);
/// (ii) swap lambda_{a1,a2,a3}(z) = lambda_{a2,a1,a3}(1 - z);
/// (iii) Moebius lambda_{a1,a2,a3}(z) = lambda_{a1,a3,a2}(T(z)) |T'(z)| with
///       T(z) = z/(z-1).
pub fn scan_symmetries(orders: &SingularOrders, grid: &GridSpec) -> Result<VerificationReport> {
    scan_symmetries_with(orders, grid, Tolerances::default().symmetry)
}

pub fn scan_symmetries_with(
    orders: &SingularOrders,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let d = Density::new(*orders)?;
    let d_swap = Density::new(orders.swapped_01())?;
    let d_moebius = Density::new(orders.swapped_1_inf())?;
    let mut report = VerificationReport::new("symmetry", tol);
    let mut maxima = [0.0f64; 3];

    for z in grid.points() {
        let base = match d.eval(z) {
            Ok(v) => v,
            Err(Error::Puncture { .. }) => continue,
            Err(e) => return Err(e),
        };
        report.points += 1;

        let refl = d.eval(z.conj())?;
        maxima[0] = maxima[0].max((refl - base).abs() / base);

        let w = Complex64::ONE - z;
        if w.norm() > grid.exclusion && (w - Complex64::ONE).norm() > grid.exclusion {
            let swapped = d_swap.eval(w)?;
            maxima[1] = maxima[1].max((swapped - base).abs() / base);
        }

        let t = z / (z - Complex64::ONE);
        let jac = 1.0 / (z - Complex64::ONE).norm_sqr();
        if t.norm() > grid.exclusion && (t - Complex64::ONE).norm() > grid.exclusion {
            let mapped = d_moebius.eval(t)? * jac;
            maxima[2] = maxima[2].max((mapped - base).abs() / base);
        }
    }

    report.details.push(format!("reflection max rel residual {:.3e}", maxima[0]));
    report.details.push(format!("swap 0<->1 max rel residual {:.3e}", maxima[1]));
    report.details.push(format!("Moebius 1<->inf max rel residual {:.3e}", maxima[2]));
    report.max_rel = maxima.iter().cloned().fold(0.0, f64::max);
    report.max_abs = report.max_rel;
    Ok(report.finish())
}

/// Audits the sharp lower bound over a grid: the bound must never exceed the
/// density, the minimal gap must land at the grid point nearest -1, and when
/// that point is -1 itself the gap must vanish within the equality tolerance.
pub fn audit_lower_bound(orders: &SingularOrders, grid: &GridSpec) -> Result<VerificationReport> {
    audit_lower_bound_with(orders, grid, Tolerances::default().bound_equality)
}

pub fn audit_lower_bound_with(
    orders: &SingularOrders,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let d = Density::new(*orders)?;
    let constants = lower_bound_constants(orders)?;
    let mut report = VerificationReport::new("lower_bound", tol);

    let minus_one = Complex64::new(-1.0, 0.0);
    let mut min_gap = f64::INFINITY;
    let mut min_gap_at = Complex64::ZERO;
    let mut nearest = Complex64::ZERO;
    let mut nearest_dist = f64::INFINITY;
    let mut nearest_gap = f64::NAN;

    for z in grid.points() {
        let lam = match d.eval(z) {
            Ok(v) => v,
            Err(Error::Puncture { .. }) => continue,
            Err(e) => return Err(e),
        };
        let lb = lower_bound_with(&constants, &d, z)?;
        report.points += 1;
        let gap = (lam - lb) / lam;
        if gap < -1e-10 {
            report.pass = false;
            report.max_rel = report.max_rel.max(-gap);
            report.details.push(format!("bound exceeds density at z = {z}: gap = {gap:.3e}"));
        }
        if gap < min_gap {
            min_gap = gap;
            min_gap_at = z;
        }
        let dist = (z - minus_one).norm();
        if dist < nearest_dist {
            nearest_dist = dist;
            nearest = z;
            nearest_gap = gap;
        }
    }

    report.details.push(format!(
        "minimal relative gap {min_gap:.3e} at z = {min_gap_at} (grid point nearest -1: {nearest})"
    ));
    if (min_gap_at - nearest).norm() > 1e-14 {
        report.pass = false;
        report.max_rel = f64::INFINITY;
        report.details.push(format!(
            "minimal gap not at the point nearest -1 (found at {min_gap_at}, nearest is {nearest})"
        ));
    }
    if nearest_dist <= 1e-9 {
        report.max_rel = report.max_rel.max(nearest_gap.abs());
        if nearest_gap.abs() > tol {
            report.pass = false;
            report.details.push(format!(
                "equality defect at z = -1: relative gap {nearest_gap:.3e} exceeds {tol:.1e}"
            ));
        }
    }
    report.max_abs = report.max_rel;
    Ok(report.finish())
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Curvature,
    Schwarzian,
    Symmetry,
    Monotonicity,
    Bounds,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "curvature" => Ok(Suite::Curvature),
            "schwarzian" => Ok(Suite::Schwarzian),
            "symmetry" => Ok(Suite::Symmetry),
            "monotone" | "monotonicity" => Ok(Suite::Monotonicity),
            "bounds" => Ok(Suite::Bounds),
            "all" => Ok(Suite::All),
            other => Err(Error::param(format!("unknown verification suite {other:?}"))),
        }
    }
}

fn default_rect() -> GridSpec {
    GridSpec::rect(-2.0, 2.0, 0.05, 2.0, 20, 20).expect("static grid")
}

fn curvature_suite(d: &Density, tol: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("curvature", tol);
    for z in default_rect().points() {
        let lam = d.eval(z)?;
        let h = curvature_step(z, lam);
        let kappa = curvature_fd_with(d, z, h)?;
        let res = (kappa + 1.0).abs();
        report.points += 1;
        if res > report.max_rel {
            report.max_rel = res;
            if res > tol {
                report.details.push(format!("|kappa + 1| = {res:.3e} at z = {z} (h = {h:.1e})"));
            }
        }
    }
    report.max_abs = report.max_rel;
    Ok(report.finish())
}

fn schwarzian_suite(d: &Density, tol: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("schwarzian", tol);
    for z in default_rect().points() {
        let fd = schwarzian_fd_with(d, z, FD_STEP_DEFAULT)?;
        let exact = d.schwarzian(z)?;
        let res = (fd - exact).norm();
        report.points += 1;
        if res > report.max_rel {
            report.max_rel = res;
            if res > tol {
                report.details.push(format!("|S_fd - S| = {res:.3e} at z = {z}"));
            }
        }
    }
    report.details.push("residuals are absolute".to_string());
    report.max_abs = report.max_rel;
    Ok(report.finish())
}

/// Run the selected checks for one orders triple. Reports come back in a
/// fixed order; the run fails only on evaluation faults, while mathematical
/// failures are recorded in the reports.
pub fn run_suite(
    orders: &SingularOrders,
    suite: Suite,
    tol: &Tolerances,
) -> Result<Vec<VerificationReport>> {
    let d = Density::new(*orders)?;
    let mut out = Vec::new();
    if matches!(suite, Suite::Curvature | Suite::All) {
        out.push(curvature_suite(&d, tol.curvature)?);
    }
    if matches!(suite, Suite::Schwarzian | Suite::All) {
        out.push(schwarzian_suite(&d, tol.schwarzian_abs)?);
    }
    if matches!(suite, Suite::Symmetry | Suite::All) {
        let grid = GridSpec::rect(-2.2, 2.4, -1.9, 2.1, 15, 14)?;
        out.push(scan_symmetries_with(orders, &grid, tol.symmetry)?);
    }
    if matches!(suite, Suite::Monotonicity | Suite::All) {
        for r in [0.5, 1.0, 2.0] {
            let mut rep = scan_monotonicity_with(orders, r, 64, tol.monotonicity_strict)?;
            rep.check = format!("monotonicity_r{r}");
            out.push(rep);
        }
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        let grid = GridSpec::annulus(0.5, 2.0, 4, 24)?.with_exclusion(1e-6);
        out.push(audit_lower_bound_with(orders, &grid, tol.bound_equality)?);
    }
    Ok(out)
}
