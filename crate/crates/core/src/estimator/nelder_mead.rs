//! Nelder-Mead simplex minimization with standard coefficients.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop once the largest vertex distance falls below this...
    pub diam_tol: f64,
    /// ...and the spread of function values below this.
    pub fspread_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            diam_tol: 1e-8,
            fspread_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult<const N: usize> {
    pub x: [f64; N],
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub diameter: f64,
    pub fspread: f64,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0`. The initial simplex perturbs each coordinate by
/// `max(0.05·|x_i|, 0.05)`. Non-finite values are treated as `+∞`.
pub fn nelder_mead<const N: usize>(
    mut f: impl FnMut(&[f64; N]) -> f64,
    x0: [f64; N],
    opts: &NelderMeadOptions,
) -> NelderMeadResult<N> {
    let mut evaluations = 0;
    let mut eval = |x: &[f64; N]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, eval(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += (0.05 * x0[i].abs()).max(0.05);
        simplex.push((x, eval(&x)));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Stable sort keeps older vertices first among ties.
        simplex.sort_by(|p, q| p.1.total_cmp(&q.1));
        let (diameter, fspread) = spread(&simplex);
        if diameter < opts.diam_tol && fspread < opts.fspread_tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let worst = simplex[N];
        let along = |t: f64| -> [f64; N] {
            let mut y = [0.0; N];
            for i in 0..N {
                y[i] = centroid[i] + t * (worst.0[i] - centroid[i]);
            }
            y
        };

        let xr = along(-REFLECT);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-EXPAND);
            let fe = eval(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(-CONTRACT);
            (xc, eval(&xc))
        } else {
            let xc = along(CONTRACT);
            (xc, eval(&xc))
        };
        if fc < fr.min(worst.1) {
            simplex[N] = (xc, fc);
            continue;
        }
        let best = simplex[0].0;
        for v in simplex.iter_mut().skip(1) {
            for i in 0..N {
                v.0[i] = best[i] + SHRINK * (v.0[i] - best[i]);
            }
            v.1 = eval(&v.0);
        }
    }

    let (diameter, fspread) = spread(&simplex);
    NelderMeadResult {
        x: simplex[0].0,
        f: simplex[0].1,
        iterations,
        evaluations,
        converged,
        diameter,
        fspread,
    }
}

/// Largest pairwise vertex distance and `f_worst − f_best` of a sorted simplex.
fn spread<const N: usize>(simplex: &[([f64; N], f64)]) -> (f64, f64) {
    let mut diameter: f64 = 0.0;
    for (i, p) in simplex.iter().enumerate() {
        for q in &simplex[i + 1..] {
            let d2: f64 = p.0.iter().zip(&q.0).map(|(a, b)| (a - b) * (a - b)).sum();
            diameter = diameter.max(d2.sqrt());
        }
    }
    let fspread = simplex[simplex.len() - 1].1 - simplex[0].1;
    (diameter, fspread)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = nelder_mead(
            |x: &[f64; 3]| {
                (x[0] - 1.0).powi(2) + 2.0 * (x[1] + 2.0).powi(2) + 0.5 * (x[2] - 3.0).powi(2)
            },
            [0.0; 3],
            &NelderMeadOptions::default(),
        );
        assert!(r.converged);
        for (x, t) in r.x.iter().zip([1.0, -2.0, 3.0]) {
            assert!((x - t).abs() < 1e-7, "{:?}", r.x);
        }
    }

    #[test]
    fn rosenbrock() {
        let r = nelder_mead(
            |x: &[f64; 2]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            [-1.2, 1.0],
            &NelderMeadOptions::default(),
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn infinite_penalty_is_avoided() {
        let r = nelder_mead(
            |x: &[f64; 2]| {
                if x[0] < 0.5 {
                    f64::INFINITY
                } else {
                    x[0] * x[0] + x[1] * x[1]
                }
            },
            [2.0, 1.0],
            &NelderMeadOptions::default(),
        );
        assert!(
            (r.x[0] - 0.5).abs() < 1e-6 && r.x[1].abs() < 1e-6,
            "{:?}",
            r.x
        );
        assert!(r.f.is_finite());
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let opts = NelderMeadOptions {
            max_iter: 5,
            ..Default::default()
        };
        let r = nelder_mead(|x: &[f64; 2]| x[0].abs() + x[1].abs(), [10.0, -7.0], &opts);
        assert!(!r.converged);
        assert_eq!(r.iterations, 5);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64; 2]| (x[0].sin() + 1.3 * x[1]).powi(2) + 0.1 * x[0].cos();
        let x0 = [0.7, -0.3];
        let r = nelder_mead(f, x0, &NelderMeadOptions::default());
        assert!(r.f <= f(&x0));
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64; 2]| (x[0] - 0.3).powi(4) + (x[1] + x[0]).powi(2);
        let a = nelder_mead(f, [1.0, 1.0], &NelderMeadOptions::default());
        let b = nelder_mead(f, [1.0, 1.0], &NelderMeadOptions::default());
        assert_eq!(a, b);
    }
}
