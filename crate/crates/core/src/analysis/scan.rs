use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::pgf::{phi_fl, phi_nb, Params};

/// Gaps below `-FLOAT_TOL` are float violations.
pub const FLOAT_TOL: f64 = 1e-12;
/// Neighbourhood of `ζ^r` and 1 excluded from the strict-positivity claim in
/// float mode.
pub const EQUALITY_WINDOW: f64 = 1e-6;
/// A gap above this fraction of `φ_NB` is far beyond the rounding error of
/// either evaluation (a few dozen ulps), so its sign is trusted as computed.
pub const RELATIVE_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Float,
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Float => "float",
            Mode::Exact => "exact",
        })
    }
}

/// `ζ` as typed: a decimal only supports float mode, a fraction supports both.
#[derive(Debug, Clone, PartialEq)]
pub enum ZetaValue {
    Float(f64),
    Exact(BigRational),
}

impl ZetaValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ZetaValue::Float(v) => *v,
            ZetaValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// The exact rational; a float converts without rounding.
    pub fn to_exact(&self) -> Option<BigRational> {
        match self {
            ZetaValue::Float(v) => BigRational::from_float(*v),
            ZetaValue::Exact(q) => Some(q.clone()),
        }
    }
}

impl fmt::Display for ZetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaValue::Float(v) => write!(f, "{v}"),
            ZetaValue::Exact(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    /// Uniform points `i / (points - 1)`; `ζ^r` is always added.
    pub points: usize,
    pub mode: Mode,
    /// Extra uniformly random rational arguments evaluated exactly.
    pub exact_samples: usize,
    pub seed: u64,
}

impl GridSpec {
    pub fn new(points: usize, mode: Mode) -> Self {
        GridSpec {
            points,
            mode,
            exact_samples: 0,
            seed: 0,
        }
    }
}

/// One CSV row: `x, phi_nb, phi_fl, gap`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub phi_nb: f64,
    pub phi_fl: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityPoint {
    pub x: String,
    pub gap: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub r: u32,
    pub zeta: String,
    pub mode: Mode,
    pub spec: GridSpec,
    pub tolerance: f64,
    pub window: f64,
    pub points: Vec<GridPoint>,
    pub equality_points: Vec<EqualityPoint>,
    /// Smallest gap away from `ζ^r` and 1 (outside the window in float mode).
    pub min_positive_gap: Option<f64>,
    pub min_positive_gap_at: Option<f64>,
    /// Float gaps near zero that were settled by exact evaluation.
    pub adjudicated: usize,
    /// Float gaps below `-tolerance` (each one was then settled exactly).
    pub float_tolerance_breaches: usize,
    pub exact_samples_checked: usize,
    pub exact_samples_min_gap: Option<String>,
}

impl GridReport {
    pub fn equality_at(&self, x: &str) -> bool {
        self.equality_points.iter().any(|e| e.x == x)
    }
}

struct Exact {
    p: Params<BigRational>,
    q: BigRational,
}

impl Exact {
    fn new(r: u32, zeta: BigRational) -> Result<Self, AnalysisError> {
        let p = Params::new(r, zeta)?;
        let q = p.p_inf();
        Ok(Exact { p, q })
    }

    fn values(&self, x: &BigRational) -> Result<(BigRational, BigRational), AnalysisError> {
        Ok((phi_nb(&self.p, x)?, phi_fl(&self.p, x)?))
    }

    /// Exact gap at `x`; a negative gap or a zero away from `{ζ^r, 1}` is an error.
    fn settle(&self, x: &BigRational) -> Result<BigRational, AnalysisError> {
        let (nb, fl) = self.values(x)?;
        let gap = &nb - &fl;
        if gap.is_negative() {
            return Err(AnalysisError::ViolationFound {
                x: x.to_string(),
                phi_nb: nb.to_string(),
                phi_fl: fl.to_string(),
                gap: gap.to_string(),
            });
        }
        if gap.is_zero() && *x != self.q && !x.is_one() {
            return Err(AnalysisError::UnexpectedEquality { x: x.to_string() });
        }
        Ok(gap)
    }

    fn is_equality_point(&self, x: &BigRational) -> bool {
        *x == self.q || x.is_one()
    }
}

fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn min_by_gap(acc: Option<(f64, f64)>, x: f64, gap: f64) -> Option<(f64, f64)> {
    match acc {
        Some((_, g)) if g <= gap => acc,
        _ => Some((x, gap)),
    }
}

/// Evaluate both generating functions on a grid over `[0, 1]` and confirm
/// `φ_FL <= φ_NB` with equality only at `ζ^r` and 1.
pub fn scan_inequality(r: u32, zeta: &ZetaValue, spec: &GridSpec) -> Result<GridReport, AnalysisError> {
    if spec.points < 2 {
        return Err(AnalysisError::InvalidArgument(format!(
            "grid needs at least 2 points, got {}",
            spec.points
        )));
    }
    let exact_zeta = zeta
        .to_exact()
        .ok_or_else(|| AnalysisError::InvalidArgument(format!("zeta = {zeta}")))?;
    let exact = Exact::new(r, exact_zeta)?;
    let mut report = GridReport {
        r,
        zeta: zeta.to_string(),
        mode: spec.mode,
        spec: spec.clone(),
        tolerance: FLOAT_TOL,
        window: EQUALITY_WINDOW,
        points: Vec::new(),
        equality_points: Vec::new(),
        min_positive_gap: None,
        min_positive_gap_at: None,
        adjudicated: 0,
        float_tolerance_breaches: 0,
        exact_samples_checked: 0,
        exact_samples_min_gap: None,
    };
    match spec.mode {
        Mode::Float => {
            // disputes are settled at the binary value the float grid used
            let z = zeta.to_f64();
            let at_float = Exact::new(r, BigRational::from_float(z).expect("validated zeta"))?;
            scan_float(r, z, &at_float, spec.points, &mut report)?
        }
        Mode::Exact => {
            if !matches!(zeta, ZetaValue::Exact(_)) {
                return Err(AnalysisError::NeedsExactZeta);
            }
            scan_exact(&exact, spec.points, &mut report)?
        }
    }
    if spec.exact_samples > 0 {
        sample_exact(&exact, spec, &mut report)?;
    }
    Ok(report)
}

fn scan_float(
    r: u32,
    zeta: f64,
    exact: &Exact,
    n: usize,
    report: &mut GridReport,
) -> Result<(), AnalysisError> {
    let p = Params::new(r, zeta)?;
    let q = p.p_inf();
    let mut xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    xs.push(q);
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    struct Eval {
        point: GridPoint,
        in_window: bool,
        breach: bool,
        // exact gap for disputed points
        settled: Option<BigRational>,
    }

    let evals: Vec<Eval> = xs
        .par_iter()
        .map(|&x| -> Result<Eval, AnalysisError> {
            let nb = phi_nb(&p, &x)?;
            let fl = phi_fl(&p, &x)?;
            let gap = nb - fl;
            let in_window = (x - q).abs() < EQUALITY_WINDOW || (1.0 - x).abs() < EQUALITY_WINDOW;
            let breach = gap < -FLOAT_TOL;
            let near_zero = gap.abs() <= FLOAT_TOL * nb.abs().max(1.0);
            let clearly_positive = gap > RELATIVE_MARGIN * nb;
            let settled = if breach || (near_zero && !in_window && !clearly_positive) {
                let ex = BigRational::from_float(x).expect("grid points are finite");
                Some(exact.settle(&ex)?)
            } else {
                None
            };
            Ok(Eval {
                point: GridPoint {
                    x,
                    phi_nb: nb,
                    phi_fl: fl,
                    gap,
                },
                in_window,
                breach,
                settled,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut min = None;
    for e in &evals {
        let x = e.point.x;
        if e.breach {
            report.float_tolerance_breaches += 1;
        }
        if let Some(g) = &e.settled {
            report.adjudicated += 1;
            if g.is_zero() {
                report.equality_points.push(EqualityPoint {
                    x: x.to_string(),
                    gap: "0".into(),
                });
            } else {
                min = min_by_gap(min, x, to_f64(g));
            }
        } else if e.in_window {
            if e.point.gap.abs() <= FLOAT_TOL * e.point.phi_nb.abs().max(1.0) {
                report.equality_points.push(EqualityPoint {
                    x: x.to_string(),
                    gap: e.point.gap.to_string(),
                });
            }
        } else {
            min = min_by_gap(min, x, e.point.gap);
        }
    }
    report.min_positive_gap_at = min.map(|m| m.0);
    report.min_positive_gap = min.map(|m| m.1);
    report.points = evals.into_iter().map(|e| e.point).collect();
    Ok(())
}

fn scan_exact(exact: &Exact, n: usize, report: &mut GridReport) -> Result<(), AnalysisError> {
    let den = BigInt::from(n - 1);
    let mut xs: Vec<BigRational> = (0..n)
        .map(|i| BigRational::new(BigInt::from(i), den.clone()))
        .collect();
    xs.push(exact.q.clone());
    xs.sort();
    xs.dedup();

    let evals: Vec<(BigRational, BigRational, BigRational)> = xs
        .into_par_iter()
        .map(|x| {
            let (nb, fl) = exact.values(&x)?;
            exact.settle(&x)?;
            Ok((x, nb, fl))
        })
        .collect::<Result<_, AnalysisError>>()?;

    let mut min: Option<(f64, BigRational)> = None;
    for (x, nb, fl) in &evals {
        let gap = nb - fl;
        if gap.is_zero() {
            report.equality_points.push(EqualityPoint {
                x: x.to_string(),
                gap: "0".into(),
            });
        } else if min.as_ref().is_none_or(|(_, g)| gap < *g) {
            min = Some((to_f64(x), gap.clone()));
        }
        report.points.push(GridPoint {
            x: to_f64(x),
            phi_nb: to_f64(nb),
            phi_fl: to_f64(fl),
            gap: to_f64(&gap),
        });
    }
    for must in [exact.q.clone(), BigRational::one()] {
        if !report.equality_at(&must.to_string()) {
            return Err(AnalysisError::InvalidArgument(format!(
                "equality expected at x = {must} but not observed"
            )));
        }
    }
    report.min_positive_gap_at = min.as_ref().map(|m| m.0);
    report.min_positive_gap = min.map(|m| to_f64(&m.1));
    Ok(())
}

/// Random rationals `a/b` with `b` up to `2^20`, evaluated exactly.
fn sample_exact(exact: &Exact, spec: &GridSpec, report: &mut GridReport) -> Result<(), AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let xs: Vec<BigRational> = (0..spec.exact_samples)
        .map(|_| {
            let b: i64 = rng.random_range(2..=1 << 20);
            let a: i64 = rng.random_range(0..=b);
            BigRational::new(BigInt::from(a), BigInt::from(b))
        })
        .collect();
    let gaps: Vec<(bool, BigRational)> = xs
        .par_iter()
        .map(|x| Ok((exact.is_equality_point(x), exact.settle(x)?)))
        .collect::<Result<_, AnalysisError>>()?;
    let min = gaps
        .into_iter()
        .filter(|(eq, _)| !eq)
        .map(|(_, g)| g)
        .min();
    report.exact_samples_checked = xs.len();
    report.exact_samples_min_gap = min.map(|g| g.to_string());
    Ok(())
}
