use serde::Serialize;

use super::AnalysisError;
use crate::pgf::{phi_nb, Params};

const MAX_ITERATIONS: u64 = 1_000_000;
const CROSS_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extinction {
    /// Smallest fixed point of `φ_NB` in `[0, 1]`.
    pub value: f64,
    pub iterations: u64,
    /// Root of `φ_NB(x) - x` found by bisection, `None` when subcritical.
    pub bisection: Option<f64>,
    /// `ζ^r`.
    pub closed_form: f64,
    pub mean: f64,
    pub supercritical: bool,
}

/// Monotone iteration `x <- φ_NB(x)` from 0, cross-checked by bisection.
///
/// A mean offspring number `<= 1` short-circuits to 1.
pub fn extinction_probability(p: &Params<f64>) -> Result<Extinction, AnalysisError> {
    let mean = p.nb_mean();
    let closed_form = p.p_inf();
    if mean <= 1.0 {
        return Ok(Extinction {
            value: 1.0,
            iterations: 0,
            bisection: None,
            closed_form,
            mean,
            supercritical: false,
        });
    }

    let mut x = 0.0;
    let mut iterations = 0;
    loop {
        let next = phi_nb(p, &x)?;
        iterations += 1;
        // stalls once rounding stops the increase
        let done = next <= x || next - x <= 1e-16 * next;
        x = next.max(x);
        if done {
            break;
        }
        if iterations >= MAX_ITERATIONS {
            return Err(AnalysisError::NoConvergence { iterations, last: x });
        }
    }

    let bisection = bisect(p, x)?;
    if (bisection - x).abs() > CROSS_CHECK_TOL {
        return Err(AnalysisError::CrossCheck {
            iterate: x,
            bisection,
        });
    }
    Ok(Extinction {
        value: x,
        iterations,
        bisection: Some(bisection),
        closed_form,
        mean,
        supercritical: true,
    })
}

fn bisect(p: &Params<f64>, guess: f64) -> Result<f64, AnalysisError> {
    let h = |x: f64| phi_nb(p, &x).map(|v| v - x);
    let (mut lo, mut hi) = (0.0, (guess + 1.0) / 2.0);
    if h(hi)? >= 0.0 {
        return Err(AnalysisError::NoConvergence {
            iterations: 0,
            last: hi,
        });
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if h(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        let e = extinction_probability(&Params::new(2, 0.5).unwrap()).unwrap();
        assert!((e.value - 0.25).abs() < 1e-12);
        assert!(e.supercritical);
        let e = extinction_probability(&Params::new(3, 0.9).unwrap()).unwrap();
        assert!((e.value - 0.729).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_residual() {
        for r in 2..=12 {
            for i in 1..20 {
                let p = Params::new(r, i as f64 / 20.0).unwrap();
                let q = p.p_inf();
                assert!((phi_nb(&p, &q).unwrap() - q).abs() < 1e-14);
                let e = extinction_probability(&p).unwrap();
                assert!((e.value - q).abs() < 1e-12, "r={r} i={i} {e:?}");
                assert!((e.bisection.unwrap() - q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn slow_convergence_close_to_criticality() {
        let p = Params::new(2, 0.999).unwrap();
        let e = extinction_probability(&p).unwrap();
        assert!(e.mean > 1.0 && e.mean < 1.01);
        assert!((e.value - p.p_inf()).abs() < 1e-12, "{e:?}");
    }
}
