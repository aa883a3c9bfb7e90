//! Nelder-Mead simplex minimizer for the CSS objective.
//!
//! Derivative-free, total over objectives that return infinities for bad
//! regions. Coefficients are the standard reflection 1, expansion 2,
//! contraction 0.5, shrink 0.5.

/// Termination settings. Defaults: f-spread and x-spread below 1e-8, at most
/// `500 * dim` iterations.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_iterations: Option<usize>,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            f_tol: 1e-8,
            x_tol: 1e-8,
            max_iterations: None,
        }
    }
}

/// Outcome of a minimization run.
#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Minimizes `objective` starting from `x0`.
///
/// NaN objective values are treated as positive infinity, so the search
/// simply backs away from invalid regions instead of failing.
pub fn nelder_mead<F>(mut objective: F, x0: &[f64], options: NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut eval = |x: &[f64]| -> f64 {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    if dim == 0 {
        let f = eval(x0);
        return NelderMeadResult {
            x: Vec::new(),
            f,
            converged: true,
            iterations: 0,
        };
    }

    let max_iterations = options.max_iterations.unwrap_or(500 * dim);

    // Initial simplex: x0 plus one perturbed vertex per coordinate.
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += if v[i] == 0.0 { 0.1 } else { 0.05 * v[i].abs() };
        simplex.push(v);
    }
    let mut scores: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        // Order vertices best to worst.
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
        let best = idx[0];
        let worst = idx[dim];
        let second_worst = idx[dim - 1];

        let f_spread = scores[worst] - scores[best];
        let x_spread = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        // The f-spread alone can vanish while the simplex still brackets the
        // minimum symmetrically, so both spreads must collapse.
        if f_spread < options.f_tol && x_spread < options.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; dim];
        for &i in idx.iter().take(dim) {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let blend = |towards: &[f64], from: &[f64], t: f64| -> Vec<f64> {
            towards
                .iter()
                .zip(from)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        // Reflection.
        let reflected = blend(&centroid, &simplex[worst], 1.0);
        let f_reflected = eval(&reflected);
        if f_reflected < scores[second_worst] && f_reflected >= scores[best] {
            simplex[worst] = reflected;
            scores[worst] = f_reflected;
            continue;
        }

        // Expansion.
        if f_reflected < scores[best] {
            let expanded = blend(&centroid, &simplex[worst], 2.0);
            let f_expanded = eval(&expanded);
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                scores[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                scores[worst] = f_reflected;
            }
            continue;
        }

        // Contraction toward the centroid.
        let contracted = blend(&centroid, &simplex[worst], -0.5);
        let f_contracted = eval(&contracted);
        if f_contracted < scores[worst] {
            simplex[worst] = contracted;
            scores[worst] = f_contracted;
            continue;
        }

        // Shrink everything toward the best vertex.
        for &i in idx.iter().skip(1) {
            let shrunk: Vec<f64> = simplex[best]
                .iter()
                .zip(&simplex[i])
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            simplex[i] = shrunk;
            scores[i] = eval(&simplex[i]);
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| scores[a].total_cmp(&scores[b]))
        .expect("simplex is non-empty");
    NelderMeadResult {
        x: simplex[best].clone(),
        f: scores[best],
        converged,
        iterations,
    }
}
