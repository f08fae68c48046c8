//! Derivative-free maximization over angles.

use std::f64::consts::TAU;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Samples per coordinate used to bracket the maximum before refining.
const BRACKET_SAMPLES: usize = 16;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x_max, f_max)`.
pub fn golden_section_maximize(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    x_tol: f64,
    max_evals: usize,
) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;

    while evals < max_evals && (b - a).abs() > x_tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }

    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes a periodic function of one angle: a coarse scan of the circle
/// picks the best sample, then golden section refines within one scan step
/// on either side.
pub fn maximize_angle(f: impl Fn(f64) -> f64, x_tol: f64) -> (f64, f64) {
    let step = TAU / BRACKET_SAMPLES as f64;
    let (mut best_x, mut best_f) = (0.0, f(0.0));
    for k in 1..BRACKET_SAMPLES {
        let x = k as f64 * step;
        let fx = f(x);
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
    }
    let (x, fx) = golden_section_maximize(&f, best_x - step, best_x + step, x_tol, 200);
    if fx >= best_f {
        (normalize_angle(x), fx)
    } else {
        (best_x, best_f)
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentOutcome<const N: usize> {
    pub point: [f64; N],
    pub value: f64,
    pub cycles: usize,
    pub converged: bool,
}

/// Cyclic coordinate ascent over `N` angles.
///
/// Each cycle maximizes every coordinate in turn with [`maximize_angle`];
/// a coordinate only moves if the objective strictly improves. Stops when a
/// full cycle gains less than `tol`, or after `max_cycles` cycles with
/// `converged = false`.
pub fn coordinate_ascent<const N: usize>(
    f: impl Fn(&[f64; N]) -> f64,
    start: [f64; N],
    tol: f64,
    max_cycles: usize,
) -> AscentOutcome<N> {
    let mut point = start.map(normalize_angle);
    let mut value = f(&point);
    let x_tol = 1e-12;

    for cycle in 1..=max_cycles {
        let before = value;
        for k in 0..N {
            let (x, fx) = maximize_angle(
                |theta| {
                    let mut trial = point;
                    trial[k] = theta;
                    f(&trial)
                },
                x_tol,
            );
            if fx > value {
                point[k] = x;
                value = fx;
            }
        }
        if value - before < tol {
            return AscentOutcome {
                point,
                value,
                cycles: cycle,
                converged: true,
            };
        }
    }
    AscentOutcome {
        point,
        value,
        cycles: max_cycles,
        converged: false,
    }
}
