//! The Gaussian-weighted solution count
//!
//! ```text
//! T = sum_{(x,y,z): Q = 0 mod q, (z,p) = 1} Phi((x-x0)/N) Phi((y-y0)/N) Phi((z-z0)/N)
//! ```
//!
//! computed twice: a literal triple loop, and a fiber decomposition over the
//! conic classes `(x~, y~)` with `x = x~ z`, `y = y~ z mod q`. The two routes
//! share nothing beyond the weight tables. Also here: the main term
//! `C_p(Q) N^3 / q`, the exact count for `q = p`, and the ratio experiment.
//!
//! Summation order is fixed: the naive loop runs x, then y, then z
//! ascending; the class loop runs the classes in enumeration order with z
//! ascending inside. Row totals go through [`CompensatedSum`].

use std::io::{BufRead, Write};
use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::charsum::CompensatedSum;
use crate::conic::{enumerate_all, ConicSolutionSet, TernaryForm};
use crate::error::{Error, Result};
use crate::modarith::PrimePowerModulus;
use crate::oracle::projective_count_mod_p;

/// Default loop budget of the naive triple loop.
pub const NAIVE_BUDGET: u128 = 10_000_000_000;
/// Default loop budget of the class method, `|M|` times the z-window.
pub const CLASS_BUDGET: u128 = 1_000_000_000;
/// Default truncation radius, in units of `N`.
pub const TRUNCATION: f64 = 6.0;

/// A nonnegative weight `Phi` on the real line.
pub trait Weight {
    fn weight(&self, x: f64) -> f64;
    fn weight_hat(&self, xi: f64) -> f64;
    /// Smallest admissible truncation radius.
    fn min_truncation(&self) -> f64;
    /// Bound on the mass of `Phi` outside `[-radius, radius]`.
    fn tail_bound(&self, radius: f64) -> f64;
}

/// `Phi(x) = exp(-pi x^2)`, its own Fourier transform.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianWeight;

impl Weight for GaussianWeight {
    fn weight(&self, x: f64) -> f64 {
        (-std::f64::consts::PI * x * x).exp()
    }

    fn weight_hat(&self, xi: f64) -> f64 {
        self.weight(xi)
    }

    fn min_truncation(&self) -> f64 {
        TRUNCATION
    }

    fn tail_bound(&self, radius: f64) -> f64 {
        (-std::f64::consts::PI * radius * radius).exp()
    }
}

/// Sharp cutoff `1_{[-1/2, 1/2)}`; only used as a period-box diagnostic.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoxWeight;

impl Weight for BoxWeight {
    fn weight(&self, x: f64) -> f64 {
        if (-0.5..0.5).contains(&x) {
            1.0
        } else {
            0.0
        }
    }

    fn weight_hat(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            1.0
        } else {
            let t = std::f64::consts::PI * xi;
            t.sin() / t
        }
    }

    fn min_truncation(&self) -> f64 {
        0.5
    }

    fn tail_bound(&self, radius: f64) -> f64 {
        if radius >= 0.5 {
            0.0
        } else {
            1.0
        }
    }
}

/// `|sum_{|k|<=K} Phi(k+u) - sum_{|k|<=K} Phi^(k) e(ku)|`, the truncated
/// Poisson summation gap.
pub fn poisson_gap<W: Weight>(weight: &W, u: f64, k_max: i64) -> f64 {
    let mut lhs = CompensatedSum::default();
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for k in -k_max..=k_max {
        lhs.add(weight.weight(k as f64 + u));
        let angle = 2.0 * std::f64::consts::PI * k as f64 * u;
        re.add(weight.weight_hat(k as f64) * angle.cos());
        im.add(weight.weight_hat(k as f64) * angle.sin());
    }
    (lhs.value() - re.value()).hypot(im.value())
}

/// `C_p(Q) = (p - s_p(Q))(p - 1) / p^2`.
pub fn c_p(form: &TernaryForm, p: u64) -> Result<Ratio<i64>> {
    form.validate(p).require()?;
    let p = p as i64;
    Ok(Ratio::new((p - form.s_p(p as u64) as i64) * (p - 1), p * p))
}

/// Brute-force count of `Q = 0 mod p` with `z != 0`, checked against
/// `(p-1)(p - s_p(Q))`.
pub fn exact_count_mod_p(form: &TernaryForm, p: u64) -> Result<u64> {
    form.validate(p).require()?;
    let expected = (p - 1) * (p as i64 - form.s_p(p) as i64) as u64;
    let found = projective_count_mod_p(form, p);
    if found != expected {
        return Err(Error::FormulaMismatch { expected, found });
    }
    Ok(found)
}

/// `ceil(q^theta)`, treating values within `1e-12` relative of an integer as
/// that integer so exact powers are not bumped up by rounding.
pub fn scale_for(q: u64, theta: f64) -> u64 {
    let x = (q as f64).powf(theta);
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-12 * x {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountConfig {
    pub form: TernaryForm,
    pub p: u64,
    pub n: u32,
    /// Box scale `N`.
    pub scale: f64,
    pub center: [i64; 3],
    /// Half-width of each summation window in units of `N`.
    pub truncation: f64,
}

impl CountConfig {
    pub fn new(form: TernaryForm, m: PrimePowerModulus, scale: f64, center: [i64; 3]) -> Result<Self> {
        form.validate(m.p()).require()?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidConfig(format!("box scale {scale} must be positive")));
        }
        Ok(Self { form, p: m.p(), n: m.n(), scale, center, truncation: TRUNCATION })
    }

    /// `N = ceil(q^theta)`.
    pub fn with_theta(form: TernaryForm, m: PrimePowerModulus, theta: f64, center: [i64; 3]) -> Result<Self> {
        if !(theta > 0.5 && theta <= 1.0) {
            return Err(Error::InvalidConfig(format!("theta {theta} must lie in (0.5, 1]")));
        }
        Self::new(form, m, scale_for(m.q(), theta) as f64, center)
    }

    pub fn with_truncation(self, truncation: f64) -> Self {
        Self { truncation, ..self }
    }

    pub fn modulus(&self) -> PrimePowerModulus {
        PrimePowerModulus::new(self.p, self.n).expect("validated at construction")
    }

    /// Inclusive integer window of one axis.
    pub fn window(&self, axis: usize) -> (i64, i64) {
        let half = self.truncation * self.scale;
        let c = self.center[axis] as f64;
        ((c - half).ceil() as i64, (c + half).floor() as i64)
    }

    fn width(&self, axis: usize) -> u128 {
        let (lo, hi) = self.window(axis);
        (hi - lo + 1).max(0) as u128
    }

    pub fn naive_visits(&self) -> u128 {
        self.width(0) * self.width(1) * self.width(2)
    }

    pub fn class_visits(&self, classes: usize) -> u128 {
        classes as u128 * self.width(2)
    }

    fn axis_weights<W: Weight>(&self, weight: &W, axis: usize) -> Vec<f64> {
        let (lo, hi) = self.window(axis);
        (lo..=hi)
            .map(|v| weight.weight((v - self.center[axis]) as f64 / self.scale))
            .collect()
    }

    fn check_truncation<W: Weight>(&self, weight: &W) -> Result<()> {
        if self.truncation < weight.min_truncation() {
            return Err(Error::InvalidConfig(format!(
                "truncation {} below the weight's minimum {}",
                self.truncation,
                weight.min_truncation()
            )));
        }
        Ok(())
    }
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// `T` by the literal triple loop with the Gaussian weight.
pub fn smooth_count_naive(cfg: &CountConfig, budget: u128) -> Result<f64> {
    smooth_count_naive_with(cfg, &GaussianWeight, budget)
}

pub fn smooth_count_naive_with<W: Weight>(cfg: &CountConfig, weight: &W, budget: u128) -> Result<f64> {
    cfg.check_truncation(weight)?;
    check_budget(cfg.naive_visits(), budget)?;
    let (p, q) = (cfg.p, cfg.modulus().q());
    let qi = q as i128;
    let [a, b, c, d, e, f] = cfg.form.coefficients().map(i128::from);
    let (wx, wy, wz) = (cfg.axis_weights(weight, 0), cfg.axis_weights(weight, 1), cfg.axis_weights(weight, 2));
    let (x_lo, _) = cfg.window(0);
    let (y_lo, _) = cfg.window(1);
    let (z_lo, _) = cfg.window(2);
    let z0 = z_lo as i128;
    let step = (2 * f).rem_euclid(qi) as u64;
    let z_start = z_lo.rem_euclid(p as i64) as u64;
    let mut total = CompensatedSum::default();
    for (i, &w1) in wx.iter().enumerate() {
        let x = x_lo as i128 + i as i128;
        for (j, &w2) in wy.iter().enumerate() {
            let y = y_lo as i128 + j as i128;
            // Q(x, y, z) mod q, stepped in z by its first difference
            let mut value = (a * x * x + b * x * y + c * y * y + d * x * z0 + e * y * z0 + f * z0 * z0)
                .rem_euclid(qi) as u64;
            let mut delta = (f * (2 * z0 + 1) + d * x + e * y).rem_euclid(qi) as u64;
            let mut zr = z_start;
            let mut row = 0.0;
            for &w3 in &wz {
                if value == 0 && zr != 0 {
                    row += w3;
                }
                value += delta;
                if value >= q {
                    value -= q;
                }
                delta += step;
                if delta >= q {
                    delta -= q;
                }
                zr += 1;
                if zr == p {
                    zr = 0;
                }
            }
            total.add(w1 * w2 * row);
        }
    }
    Ok(total.value())
}

/// `T` by summing over conic classes with the Gaussian weight.
pub fn smooth_count_classes(cfg: &CountConfig, solutions: &ConicSolutionSet, budget: u128) -> Result<f64> {
    smooth_count_classes_with(cfg, solutions, &GaussianWeight, budget)
}

pub fn smooth_count_classes_with<W: Weight>(
    cfg: &CountConfig,
    solutions: &ConicSolutionSet,
    weight: &W,
    budget: u128,
) -> Result<f64> {
    cfg.check_truncation(weight)?;
    let m = cfg.modulus();
    if solutions.modulus() != m {
        return Err(Error::InvalidConfig(format!(
            "solution set is modulo {}, config is modulo {m}",
            solutions.modulus()
        )));
    }
    check_budget(cfg.class_visits(solutions.len()), budget)?;
    let (p, q) = (cfg.p, m.q());
    // fold each axis window onto offsets (v - lo) mod q; the table is
    // min(width, q) long, so an offset past its end carries no weight
    let fold = |axis: usize| {
        let (lo, _) = cfg.window(axis);
        let weights = cfg.axis_weights(weight, axis);
        let mut sums = vec![0.0f64; weights.len().min(q as usize)];
        for (i, w) in weights.into_iter().enumerate() {
            sums[i % q as usize] += w;
        }
        (lo.rem_euclid(q as i64) as u64, sums)
    };
    let ((x_lo, sx), (y_lo, sy)) = (fold(0), fold(1));
    let (lx, ly) = (sx.len() as u64, sy.len() as u64);
    let (z_lo, _) = cfg.window(2);
    let mut wz = cfg.axis_weights(weight, 2);
    for (k, w) in wz.iter_mut().enumerate() {
        if (z_lo + k as i64).rem_euclid(p as i64) == 0 {
            *w = 0.0;
        }
    }
    let z_start = z_lo.rem_euclid(q as i64) as u128;
    let offset = |v: u64, lo: u64| ((v as u128 * z_start + (q - lo) as u128) % q as u128) as u64;
    let mut total = CompensatedSum::default();
    for entry in solutions.entries() {
        let (xt, yt) = (entry.x.value(), entry.y.value());
        let mut ox = offset(xt, x_lo);
        let mut oy = offset(yt, y_lo);
        let mut class_sum = 0.0;
        for &w3 in &wz {
            if ox < lx && oy < ly {
                class_sum += w3 * sx[ox as usize] * sy[oy as usize];
            }
            ox += xt;
            if ox >= q {
                ox -= q;
            }
            oy += yt;
            if oy >= q {
                oy -= q;
            }
        }
        total.add(class_sum);
    }
    Ok(total.value())
}

/// `T_0 = Phi^(0)^3 C_p(Q) N^3 / q` with `Phi^(0) = 1`.
pub fn main_term(cfg: &CountConfig) -> Result<f64> {
    let cp = c_p(&cfg.form, cfg.p)?;
    let cp = *cp.numer() as f64 / *cp.denom() as f64;
    Ok(cp * cfg.scale.powi(3) / cfg.modulus().q() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothCountReport {
    pub config: CountConfig,
    pub t_naive: Option<f64>,
    pub t_classes: f64,
    pub t0: f64,
    pub ratio: f64,
    /// Bound on the truncated mass relative to `T`.
    pub tail_bound: f64,
}

impl SmoothCountReport {
    /// `|T_naive - T_classes| <= 1e-6 max(1, T_classes)`, vacuous when the
    /// naive route was skipped.
    pub fn methods_agree(&self) -> bool {
        self.t_naive
            .map_or(true, |t| (t - self.t_classes).abs() <= 1e-6 * self.t_classes.max(1.0))
    }
}

/// Both methods where the budgets allow; the class method is required.
pub fn smooth_count(cfg: &CountConfig, naive_budget: u128, class_budget: u128) -> Result<SmoothCountReport> {
    let m = cfg.modulus();
    let solutions = enumerate_all(&cfg.form.dehomogenize(), &m)?;
    let t_classes = smooth_count_classes(cfg, &solutions, class_budget)?;
    let t_naive = match smooth_count_naive(cfg, naive_budget) {
        Ok(t) => Some(t),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let t0 = main_term(cfg)?;
    Ok(SmoothCountReport {
        config: *cfg,
        t_naive,
        t_classes,
        t0,
        ratio: t_classes / t0,
        tail_bound: 3.0 * GaussianWeight.tail_bound(cfg.truncation),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub n: u32,
    pub q: u64,
    #[serde(rename = "N")]
    pub scale: u64,
    pub theta: f64,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    #[serde(rename = "T0")]
    pub t0: f64,
    pub ratio: Option<f64>,
    /// `classes`, `classes+naive`, or `skipped-budget`.
    pub method: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentOptions {
    pub center: [i64; 3],
    pub class_budget: u128,
    /// Rows whose naive loop fits this budget are cross-checked.
    pub naive_budget: u128,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self { center: [0, 0, 0], class_budget: CLASS_BUDGET, naive_budget: 20_000_000 }
    }
}

/// One row per exponent: `N = ceil(q^theta)`, `T` by the class method,
/// `T_0`, and `T / T_0`. Rows over budget are kept with a skip marker. A
/// naive cross-check that disagrees is an error.
pub fn run_asymptotic_experiment(
    form: &TernaryForm,
    p: u64,
    exponents: &[u32],
    theta: f64,
    opts: &ExperimentOptions,
) -> Result<Vec<AsymptoticRow>> {
    let mut rows = Vec::with_capacity(exponents.len());
    for &n in exponents {
        let m = PrimePowerModulus::new(p, n)?;
        let cfg = CountConfig::with_theta(*form, m, theta, opts.center)?;
        let t0 = main_term(&cfg)?;
        let start = Instant::now();
        let mut row = AsymptoticRow {
            n,
            q: m.q(),
            scale: cfg.scale as u64,
            theta,
            t: None,
            t0,
            ratio: None,
            method: "skipped-budget".into(),
            seconds: 0.0,
        };
        let classes = (m.q() / p) * (p + 1);
        if cfg.class_visits(classes as usize) <= opts.class_budget {
            let solutions = enumerate_all(&form.dehomogenize(), &m)?;
            let t = smooth_count_classes(&cfg, &solutions, opts.class_budget)?;
            row.method = "classes".into();
            if cfg.naive_visits() <= opts.naive_budget {
                let naive = smooth_count_naive(&cfg, opts.naive_budget)?;
                if (naive - t).abs() > 1e-6 * t.max(1.0) {
                    return Err(Error::IdentityMismatch(format!(
                        "naive T = {naive} but class T = {t} at n = {n}"
                    )));
                }
                row.method = "classes+naive".into();
            }
            row.t = Some(t);
            row.ratio = Some(t / t0);
        }
        row.seconds = start.elapsed().as_secs_f64();
        rows.push(row);
    }
    Ok(rows)
}

/// Writes `# key=value` comment lines followed by the rows as CSV.
pub fn write_rows_csv<W: Write>(rows: &[AsymptoticRow], comments: &[String], mut out: W) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}").map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::InvalidConfig(e.to_string()))
}

/// Reads rows written by [`write_rows_csv`], skipping comment lines.
pub fn read_rows_csv<R: BufRead>(input: R) -> Result<Vec<AsymptoticRow>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere() -> TernaryForm {
        TernaryForm::sum_of_squares()
    }

    fn m(p: u64, n: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, n).unwrap()
    }

    #[test]
    fn weight_examples() {
        let g = GaussianWeight;
        assert_eq!(g.weight(0.0), 1.0);
        assert_eq!(g.weight_hat(0.0), 1.0);
        let lhs: f64 = (-8..=8).map(|k| g.weight(k as f64)).sum();
        let rhs: f64 = (-8..=8).map(|k| g.weight_hat(k as f64)).sum();
        assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn poisson_holds_for_gaussian() {
        for i in 0..50 {
            let u = -1.0 + i as f64 * 0.0417;
            assert!(poisson_gap(&GaussianWeight, u, 8) <= 1e-10, "u = {u}");
        }
    }

    #[test]
    fn c_p_examples() {
        assert_eq!(c_p(&sphere(), 5).unwrap(), Ratio::new(16, 25));
        assert_eq!(c_p(&sphere(), 3).unwrap(), Ratio::new(8, 9));
        assert!(matches!(c_p(&"5 0 1 0 0 1".parse().unwrap(), 5), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn exact_count_examples() {
        assert_eq!(exact_count_mod_p(&sphere(), 5).unwrap(), 16);
        assert_eq!(exact_count_mod_p(&sphere(), 3).unwrap(), 8);
        assert_eq!(exact_count_mod_p(&sphere(), 7).unwrap(), 48);
    }

    #[test]
    fn main_term_examples() {
        let cfg = CountConfig::new(sphere(), m(5, 3), 100.0, [0, 0, 0]).unwrap();
        assert!((main_term(&cfg).unwrap() - 5120.0).abs() < 1e-9);
        let doubled = CountConfig { scale: 200.0, ..cfg };
        assert!((main_term(&doubled).unwrap() - 8.0 * 5120.0).abs() < 1e-6);
        let deeper = CountConfig { n: 4, ..cfg };
        assert!((main_term(&deeper).unwrap() - 1024.0).abs() < 1e-9);
        let moved = CountConfig { center: [7, -3, 11], ..cfg };
        assert_eq!(main_term(&moved).unwrap(), main_term(&cfg).unwrap());
    }

    #[test]
    fn scale_handles_exact_powers() {
        assert_eq!(scale_for(243, 0.6), 27);
        assert_eq!(scale_for(59049, 0.6), 729);
        assert_eq!(scale_for(3u64.pow(7), 0.6), 101);
        assert_eq!(scale_for(125, 1.0), 125);
    }

    #[test]
    fn tiny_box_by_hand() {
        // q = 9, N = 1, center (0,0,1): the truncated window is 13^3 points
        let cfg = CountConfig::new(sphere(), m(3, 2), 1.0, [0, 0, 1]).unwrap();
        assert_eq!(cfg.naive_visits(), 13 * 13 * 13);
        let g = GaussianWeight;
        let mut expected = 0.0;
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                for z in -5i64..=7 {
                    if (x * x + y * y + z * z) % 9 == 0 && z % 3 != 0 {
                        expected += g.weight(x as f64) * g.weight(y as f64) * g.weight((z - 1) as f64);
                    }
                }
            }
        }
        let t = smooth_count_naive(&cfg, NAIVE_BUDGET).unwrap();
        assert!((t - expected).abs() <= 1e-14);
        let set = enumerate_all(&sphere().dehomogenize(), &m(3, 2)).unwrap();
        let c = smooth_count_classes(&cfg, &set, CLASS_BUDGET).unwrap();
        assert!((t - c).abs() <= 1e-12);
    }

    #[test]
    fn methods_agree_on_small_moduli() {
        for (p, n) in [(3u64, 3u32), (5, 2), (7, 1)] {
            for center in [[0, 0, 0], [7, -3, 11]] {
                let cfg = CountConfig::with_theta(sphere(), m(p, n), 0.6, center).unwrap();
                let report = smooth_count(&cfg, NAIVE_BUDGET, CLASS_BUDGET).unwrap();
                assert!(report.methods_agree(), "{report:?}");
                assert!(report.t_classes > 0.0);
            }
        }
    }

    #[test]
    fn period_box_counts_classes() {
        // Phi = 1 on one full period in every variable: phi(q) |M| hits
        let md = m(3, 3);
        let q = md.q() as i64;
        let c = (q - 1) / 2;
        let cfg = CountConfig::new(sphere(), md, q as f64, [c, c, c]).unwrap().with_truncation(1.0);
        let set = enumerate_all(&sphere().dehomogenize(), &md).unwrap();
        let t = smooth_count_classes_with(&cfg, &set, &BoxWeight, CLASS_BUDGET).unwrap();
        let naive = smooth_count_naive_with(&cfg, &BoxWeight, NAIVE_BUDGET).unwrap();
        let expected = (q - q / 3) as f64 * set.len() as f64;
        assert_eq!(t, expected);
        assert_eq!(naive, expected);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = CountConfig::with_theta(sphere(), m(3, 5), 0.75, [0, 0, 0]).unwrap();
        assert!(matches!(smooth_count_naive(&cfg, 1000), Err(Error::BudgetExceeded { .. })));
        let g = CountConfig { truncation: 2.0, ..cfg };
        assert!(matches!(smooth_count_naive(&g, NAIVE_BUDGET), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn experiment_rows_and_csv() {
        let opts = ExperimentOptions::default();
        let rows = run_asymptotic_experiment(&sphere(), 3, &[2, 3, 4], 0.6, &opts).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.method == "classes+naive"));
        let tight = ExperimentOptions { class_budget: 10, ..opts };
        let skipped = run_asymptotic_experiment(&sphere(), 3, &[4], 1.0, &tight).unwrap();
        assert_eq!(skipped[0].method, "skipped-budget");
        assert_eq!(skipped[0].ratio, None);
        let mut buf = Vec::new();
        write_rows_csv(&rows, &["seed=1".into()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# seed=1\nn,q,N,theta,T,T0,ratio,method,seconds\n"));
        assert_eq!(read_rows_csv(&buf[..]).unwrap(), rows);
    }
}
