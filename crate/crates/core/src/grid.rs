//! Sample grids for sweeps.

/// `steps` points from `start` to `stop` inclusive, evenly spaced.
pub fn linear(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// `steps` points from `start` to `stop` inclusive, evenly spaced in log.
/// Both ends must be positive.
pub fn logarithmic(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    let mut out: Vec<f64> = linear(a, b, steps).into_iter().map(f64::exp).collect();
    if let Some(first) = out.first_mut() {
        *first = start;
    }
    if steps > 1 {
        if let Some(last) = out.last_mut() {
            *last = stop;
        }
    }
    out
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
