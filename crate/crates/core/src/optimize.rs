//! Derivative-free local search: Nelder-Mead simplex with multi-starts.

/// Stopping rule for a single simplex run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    /// Converged once every vertex lies within this distance (max-norm) of
    /// the best vertex.
    pub xtol: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Also converged once all vertex values agree to within this
    /// (absolute). Zero disables the test.
    pub ftol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            xtol: 1e-9,
            max_evals: 10_000,
            initial_step: 0.5,
            ftol: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0`. Non-finite objective values are treated as `+∞`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut converged = false;

    loop {
        // Sort vertices by value; ties keep their previous order.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.xtol || values[n] - values[0] < opts.ftol {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = &simplex[n];
        for k in 0..n {
            trial[k] = centroid[k] + REFLECT * (centroid[k] - worst[k]);
        }
        let f_r = eval(&trial, &mut evals);

        if f_r < values[0] {
            for k in 0..n {
                trial2[k] = centroid[k] + EXPAND * (trial[k] - centroid[k]);
            }
            let f_e = eval(&trial2, &mut evals);
            if f_e < f_r {
                simplex[n].copy_from_slice(&trial2);
                values[n] = f_e;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = f_r;
            }
            continue;
        }
        if f_r < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = f_r;
            continue;
        }
        // Contraction: outside if the reflection improved on the worst vertex.
        let outside = f_r < values[n];
        for k in 0..n {
            trial2[k] = if outside {
                centroid[k] + CONTRACT * (trial[k] - centroid[k])
            } else {
                centroid[k] + CONTRACT * (simplex[n][k] - centroid[k])
            };
        }
        let f_c = eval(&trial2, &mut evals);
        let threshold = if outside { f_r } else { values[n] };
        if f_c <= threshold {
            simplex[n].copy_from_slice(&trial2);
            values[n] = f_c;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for k in 0..n {
                simplex[i][k] = best[k] + SHRINK * (simplex[i][k] - best[k]);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    Minimum {
        x: simplex.swap_remove(0),
        f: values[0],
        evaluations: evals,
        converged,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiStartMinimum {
    pub best: Minimum,
    /// Index of the start that produced `best`.
    pub start_index: usize,
    pub evaluations: usize,
    /// Number of simplex restarts beyond the first run of each start.
    pub restarts: usize,
}

/// Restarts of a single start stop once the value improves by less than this.
const RESTART_GAIN: f64 = 1e-15;
const MAX_RESTARTS: usize = 3;

/// Runs the simplex from every start, restarting each run from its own
/// optimum until it stops improving. The best value wins; on ties a
/// converged run beats an unconverged one, then the lowest start index.
pub fn multistart<F>(mut f: F, starts: &[Vec<f64>], opts: &SimplexOptions) -> MultiStartMinimum
where
    F: FnMut(&[f64]) -> f64,
{
    assert!(!starts.is_empty(), "multistart needs at least one start");
    let mut best: Option<(usize, Minimum)> = None;
    let mut evaluations = 0;
    let mut restarts = 0;
    for (idx, x0) in starts.iter().enumerate() {
        let mut run = nelder_mead(&mut f, x0, opts);
        evaluations += run.evaluations;
        for _ in 0..MAX_RESTARTS {
            let step = SimplexOptions {
                initial_step: (opts.initial_step * 0.1).max(100.0 * opts.xtol),
                ..*opts
            };
            let again = nelder_mead(&mut f, &run.x, &step);
            evaluations += again.evaluations;
            restarts += 1;
            let gain = run.f - again.f;
            if again.f <= run.f {
                let total = run.evaluations + again.evaluations;
                run = again;
                run.evaluations = total;
            }
            if !(gain > RESTART_GAIN * run.f.abs().max(1e-300)) {
                break;
            }
        }
        let better = match &best {
            None => true,
            Some((_, b)) => run.f < b.f || (run.f == b.f && run.converged && !b.converged),
        };
        if better {
            best = Some((idx, run));
        }
    }
    let (start_index, best) = best.expect("at least one start");
    MultiStartMinimum {
        best,
        start_index,
        evaluations,
        restarts,
    }
}
