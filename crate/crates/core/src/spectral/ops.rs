use rustfft::num_complex::Complex64;

use super::{fft, Grid, Multiplier, SpectralField, Symbol, ZeroModeRule};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficient-wise product with the symbol of `m`.
pub fn apply_multiplier(f: &SpectralField, m: &Multiplier) -> Result<SpectralField> {
    let grid = f.grid();
    let n = grid.n;
    let mut out = f.clone();
    match m.zero_mode {
        ZeroModeRule::Reject if f.mean_norm() > 0.0 => {
            return Err(Error::ZeroMode(format!(
                "{} rejects a field with mean of size {:e}",
                m.label,
                f.mean_norm()
            )));
        }
        _ => {}
    }
    let ncomp = f.ncomp();
    if let Symbol::Matrix(_) = m.symbol {
        if ncomp != n {
            return Err(Error::Grid(format!(
                "matrix symbol needs {n} components, field has {ncomp}"
            )));
        }
    }
    let mut buf = vec![ZERO; ncomp];
    for flat in 0..grid.len() {
        let kv = grid.wavevector(flat);
        let k = &kv[..n];
        if flat == 0 && m.zero_mode != ZeroModeRule::Evaluate {
            if m.zero_mode != ZeroModeRule::Identity {
                for c in 0..ncomp {
                    out.component_mut(c)[0] = ZERO;
                }
            }
            continue;
        }
        match &m.symbol {
            Symbol::Scalar(s) => {
                let v = s(k);
                for c in 0..ncomp {
                    out.component_mut(c)[flat] *= v;
                }
            }
            Symbol::Matrix(s) => {
                let mat = s(k);
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = (0..n).map(|j| mat[i * n + j] * f.component(j)[flat]).sum();
                }
                for (c, b) in buf.iter().enumerate() {
                    out.component_mut(c)[flat] = *b;
                }
            }
        }
    }
    Ok(out)
}

/// Leray projection onto divergence-free fields.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    let grid = f.grid();
    let n = grid.n;
    assert_eq!(f.ncomp(), n, "leray projection needs a vector field");
    let mut out = f.clone();
    for flat in 1..grid.len() {
        let kv = grid.wavevector(flat);
        let kk: f64 = kv[..n].iter().map(|&c| (c * c) as f64).sum();
        let mut dot = ZERO;
        for a in 0..n {
            dot += f.component(a)[flat] * kv[a] as f64;
        }
        let dot = dot / kk;
        for a in 0..n {
            out.component_mut(a)[flat] -= dot * kv[a] as f64;
        }
    }
    out
}

/// `T(t) f` with `T(t) = e^{tΔ}`.
pub fn heat_semigroup(f: &SpectralField, t: f64) -> Result<SpectralField> {
    heat_semigroup_shifted(f, t, 0.0)
}

/// `e^{−t(−Δ+ν)} f`.
pub fn heat_semigroup_shifted(f: &SpectralField, t: f64, nu: f64) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("heat semigroup needs t >= 0, got {t}")));
    }
    let grid = f.grid();
    let mut out = f.clone();
    for flat in 0..grid.len() {
        let g = (-t * (grid.k_squared(flat) + nu)).exp();
        for c in 0..out.ncomp() {
            out.component_mut(c)[flat] *= g;
        }
    }
    Ok(out)
}

/// `(−Δ)^s f`, symbol `|k|^{2s}`. The mean is dropped for `s > 0` and must
/// vanish for `s < 0`.
pub fn fractional_laplacian(f: &SpectralField, s: f64) -> Result<SpectralField> {
    if s == 0.0 {
        return Ok(f.clone());
    }
    apply_multiplier(f, &Multiplier::fractional_laplacian(s))
}

fn derivative_factor(k: i64, modes: usize) -> Complex64 {
    if k == (modes / 2) as i64 {
        ZERO
    } else {
        Complex64::new(0.0, k as f64)
    }
}

/// Scalar divergence `Σ_a ∂_a f_a`.
pub fn divergence(f: &SpectralField) -> SpectralField {
    let grid = f.grid();
    let n = grid.n;
    assert_eq!(f.ncomp(), n, "divergence needs a vector field");
    let mut out = SpectralField::zeros(grid, 1);
    for flat in 0..grid.len() {
        let kv = grid.wavevector(flat);
        let mut acc = ZERO;
        for a in 0..n {
            acc += derivative_factor(kv[a], grid.modes) * f.component(a)[flat];
        }
        out.component_mut(0)[flat] = acc;
    }
    out
}

/// Row divergence of an `n×n` tensor field: `(∇·T)_i = Σ_j ∂_j T_{ij}`,
/// components stored row-major.
pub fn tensor_divergence(t: &SpectralField) -> Result<SpectralField> {
    let grid = t.grid();
    let n = grid.n;
    if t.ncomp() != n * n {
        return Err(Error::Grid(format!(
            "tensor field needs {} components, got {}",
            n * n,
            t.ncomp()
        )));
    }
    let mut out = SpectralField::zeros(grid, n);
    for flat in 0..grid.len() {
        let kv = grid.wavevector(flat);
        for i in 0..n {
            let mut acc = ZERO;
            for j in 0..n {
                acc += derivative_factor(kv[j], grid.modes) * t.component(i * n + j)[flat];
            }
            out.component_mut(i)[flat] = acc;
        }
    }
    Ok(out)
}

/// Largest retained wavenumber per axis under the 2/3 rule.
pub fn dealias_cutoff(grid: &Grid) -> i64 {
    ((grid.modes - 1) / 3) as i64
}

fn retained(grid: &Grid, flat: usize, cutoff: i64) -> bool {
    grid.wavevector(flat)[..grid.n].iter().all(|&k| k.abs() <= cutoff)
}

fn truncated_physical(f: &SpectralField, cutoff: i64) -> Vec<Vec<f64>> {
    let grid = f.grid();
    (0..f.ncomp())
        .map(|c| {
            let mut data: Vec<Complex64> = f
                .component(c)
                .iter()
                .enumerate()
                .map(|(flat, &v)| if retained(&grid, flat, cutoff) { v } else { ZERO })
                .collect();
            fft::inverse(&grid, &mut data);
            data.into_iter().map(|v| v.re).collect()
        })
        .collect()
}

/// Dealiased `∇·(u⊗v)` before projection: component `i` is `Σ_j ∂_j(u_j v_i)`.
pub fn convective_term(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.check_same_shape(v)?;
    let grid = u.grid();
    let n = grid.n;
    if u.ncomp() != n {
        return Err(Error::Grid("nonlinearity needs vector fields".into()));
    }
    let cutoff = dealias_cutoff(&grid);
    let up = truncated_physical(u, cutoff);
    let vp = truncated_physical(v, cutoff);
    let mut out = SpectralField::zeros(grid, n);
    let mut prod = vec![ZERO; grid.len()];
    for i in 0..n {
        for j in 0..n {
            for (p, (a, b)) in prod.iter_mut().zip(up[j].iter().zip(&vp[i])) {
                *p = Complex64::new(a * b, 0.0);
            }
            fft::forward(&grid, &mut prod);
            let dst = out.component_mut(i);
            for flat in 0..grid.len() {
                if retained(&grid, flat, cutoff) {
                    let kj = grid.wavevector(flat)[j];
                    dst[flat] += Complex64::new(0.0, kj as f64) * prod[flat];
                }
            }
        }
    }
    Ok(out)
}

/// `F(u, v) = P∇·(u⊗v)` with 2/3-rule dealiasing.
pub fn nonlinearity(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    Ok(leray_project(&convective_term(u, v)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_mode(grid: Grid, k: &[i64]) -> SpectralField {
        let mut f = SpectralField::zeros(grid, 1);
        f.set_coefficient(0, k, Complex64::new(1.0, 0.0));
        f
    }

    #[test]
    fn derivative_of_single_mode() {
        let g = Grid::new(2, 16).unwrap();
        let f = single_mode(g, &[1, 0]);
        let d = apply_multiplier(&f, &Multiplier::derivative(0, 16)).unwrap();
        assert_eq!(d.coefficient(0, &[1, 0]), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn reject_rule_reports_mean() {
        let g = Grid::new(2, 8).unwrap();
        let f = single_mode(g, &[0, 0]);
        assert!(matches!(
            fractional_laplacian(&f, -0.5),
            Err(Error::ZeroMode(_))
        ));
    }

    #[test]
    fn negative_time_is_rejected() {
        let g = Grid::new(2, 8).unwrap();
        let f = single_mode(g, &[1, 0]);
        assert!(matches!(heat_semigroup(&f, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn leray_matches_matrix_symbol() {
        let g = Grid::new(3, 8).unwrap();
        let f = SpectralField::from_fn(g, 3, |x| vec![x[0].sin() + x[1].cos(), (x[2] - x[0]).sin(), x[1].sin()]);
        let a = leray_project(&f);
        let b = apply_multiplier(&f, &Multiplier::leray(3)).unwrap();
        assert!(a.sub(&b).unwrap().max_abs_coefficient() < 1e-15);
    }

    #[test]
    fn tensor_divergence_of_diagonal() {
        let g = Grid::new(2, 16).unwrap();
        // T = diag(sin x, 0) so (∇·T)_0 = cos x
        let t = SpectralField::from_fn(g, 4, |x| vec![x[0].sin(), 0.0, 0.0, 0.0]);
        let d = tensor_divergence(&t).unwrap();
        let want = SpectralField::from_fn(g, 2, |x| vec![x[0].cos(), 0.0]);
        assert!(d.sub(&want).unwrap().max_abs_coefficient() < 1e-14);
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(dealias_cutoff(&Grid::new(2, 64).unwrap()), 21);
        assert_eq!(dealias_cutoff(&Grid::new(2, 8).unwrap()), 2);
    }
}
