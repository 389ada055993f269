use std::io::{Read, Write};

use rayon::prelude::*;

use super::{weighted_time_norm, TimeGrid, WeightedTimeNorm};
use crate::spaces::space_norm;
use crate::spectral::io::{read_coefficients, write_coefficients};
use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result};

/// One field per node of a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub fields: Vec<SpectralField>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, fields: Vec<SpectralField>) -> Result<Self> {
        if fields.len() != grid.len() {
            return Err(Error::Input(format!(
                "{} fields for {} time nodes",
                fields.len(),
                grid.len()
            )));
        }
        if let Some(first) = fields.first() {
            for f in &fields[1..] {
                first.check_same_shape(f)?;
            }
        }
        Ok(Self { grid, fields })
    }

    pub fn zeros(grid: TimeGrid, space: Grid, ncomp: usize) -> Self {
        let fields = vec![SpectralField::zeros(space, ncomp); grid.len()];
        Self { grid, fields }
    }

    /// Constant-in-time trajectory.
    pub fn constant(grid: TimeGrid, f: &SpectralField) -> Self {
        let fields = vec![f.clone(); grid.len()];
        Self { grid, fields }
    }

    pub fn space_grid(&self) -> Grid {
        self.fields[0].grid()
    }

    pub fn times(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn node(&self, j: usize) -> &SpectralField {
        &self.fields[j]
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Grid("trajectories live on different time grids".into()));
        }
        self.fields[0].check_same_shape(&other.fields[0])
    }

    /// Node-wise `self + a · other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let fields = self
            .fields
            .iter()
            .zip(&other.fields)
            .map(|(x, y)| {
                let mut z = x.clone();
                z.axpy(a, y)?;
                Ok(z)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: self.grid.clone(),
            fields,
        })
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            fields: self.fields.iter().map(|f| f.scale(a)).collect(),
        }
    }

    /// Space norm at every node, `t_0` included.
    pub fn node_norms(&self, space: &crate::spaces::SpaceTag) -> Result<Vec<f64>> {
        self.fields.par_iter().map(|f| space_norm(f, space)).collect()
    }
}

/// `‖t ↦ t^α ‖x(t)‖_Z‖_{L^p}` for the norm's space `Z`.
pub fn trajectory_norm(x: &Trajectory, norm: &WeightedTimeNorm) -> Result<f64> {
    let mut values: Vec<f64> = x.fields[1..]
        .par_iter()
        .map(|f| space_norm(f, &norm.space))
        .collect::<Result<_>>()?;
    values.insert(0, 0.0);
    weighted_time_norm(&values, norm, &x.grid)
}

/// Binary layout: `u64 n`, `u64 N`, `u64 components`, `u64 nodes`, the node
/// times as `f64`, then each node's coefficients in the field container order.
pub fn write_trajectory<W: Write>(w: &mut W, x: &Trajectory) -> Result<()> {
    let g = x.space_grid();
    for v in [g.n, g.modes, x.fields[0].ncomp(), x.fields.len()] {
        w.write_all(&(v as u64).to_le_bytes())?;
    }
    for t in x.times() {
        w.write_all(&t.to_le_bytes())?;
    }
    for f in &x.fields {
        write_coefficients(w, f)?;
    }
    Ok(())
}

/// Reads a trajectory; the time grid must be supplied since only node times
/// are stored.
pub fn read_trajectory<R: Read>(r: &mut R, grid: TimeGrid) -> Result<Trajectory> {
    let mut word = [0u8; 8];
    let mut head = [0usize; 4];
    for h in head.iter_mut() {
        r.read_exact(&mut word)?;
        *h = u64::from_le_bytes(word) as usize;
    }
    let [n, modes, ncomp, nodes] = head;
    let space = Grid::new(n, modes).map_err(|e| Error::Format(format!("bad header: {e}")))?;
    if nodes != grid.len() {
        return Err(Error::Format(format!("{nodes} nodes stored, grid has {}", grid.len())));
    }
    for &t in grid.nodes() {
        r.read_exact(&mut word)?;
        if f64::from_le_bytes(word) != t {
            return Err(Error::Format("stored node times differ from the grid".into()));
        }
    }
    let fields = (0..nodes)
        .map(|_| read_coefficients(r, space, ncomp))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(grid, fields)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_roundtrip() {
        let tg = TimeGrid::graded(1.0, 4, 2.0).unwrap();
        let g = Grid::new(2, 8).unwrap();
        let f = SpectralField::from_fn(g, 2, |x| vec![x[1].sin(), x[0].cos()]);
        let x = Trajectory::new(tg.clone(), (0..5).map(|j| f.scale(j as f64)).collect()).unwrap();
        let mut bytes = Vec::new();
        write_trajectory(&mut bytes, &x).unwrap();
        let back = read_trajectory(&mut bytes.as_slice(), tg).unwrap();
        assert_eq!(back, x);
    }
}
