use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Grid;

type Plan = Arc<dyn Fft<f64>>;

fn plans(len: usize) -> (Plan, Plan) {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<usize, (Plan, Plan)>)>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    let (planner, map) = &mut *guard;
    if let Some(p) = map.get(&len) {
        return p.clone();
    }
    let p = (planner.plan_fft_forward(len), planner.plan_fft_inverse(len));
    map.insert(len, p.clone());
    p
}

/// In-place n-dimensional transform over a row-major buffer.
fn transform(grid: &Grid, data: &mut [Complex64], inverse: bool) {
    let m = grid.modes;
    let (fwd, inv) = plans(m);
    let plan = if inverse { inv } else { fwd };
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    // last axis is contiguous
    plan.process_with_scratch(data, &mut scratch);
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..grid.n - 1 {
        let stride = m.pow((grid.n - 1 - axis) as u32);
        let outer = grid.len() / (stride * m);
        for o in 0..outer {
            let base = o * stride * m;
            for inner in 0..stride {
                let start = base + inner;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[start + j * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[start + j * stride] = *v;
                }
            }
        }
    }
}

/// Physical samples to Fourier coefficients, normalised by `1/N^n`.
pub(crate) fn forward(grid: &Grid, data: &mut [Complex64]) {
    transform(grid, data, false);
    let scale = 1.0 / grid.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Fourier coefficients to physical samples.
pub(crate) fn inverse(grid: &Grid, data: &mut [Complex64]) {
    transform(grid, data, true);
}
