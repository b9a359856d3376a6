use crate::flow::Density;
use crate::geom::{Hypersurface, Shape};
use crate::transforms::GaussianContext;

/// Grid estimate of `∫_Ω e^ψ dv` with a rough error indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Inside cells with an outside neighbour, as a fraction of inside cells.
    pub boundary_fraction: f64,
    pub cell_size: f64,
    pub inside_cells: usize,
}

/// Fractional grid offset; keeps cell centres off axis-aligned vertices.
const GRID_SHIFT: f64 = 0.381_966_011_250_105;

struct Grid {
    origin: [f64; 3],
    counts: [usize; 3],
    h: f64,
}

impl Grid {
    fn new(lo: &[f64], hi: &[f64], h: f64) -> Self {
        let mut origin = [0.0; 3];
        let mut counts = [1; 3];
        for k in 0..lo.len() {
            origin[k] = lo[k] - GRID_SHIFT * h;
            counts[k] = ((hi[k] - origin[k]) / h).ceil() as usize + 1;
        }
        Self { origin, counts, h }
    }

    fn center(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + (i as f64 + 0.5) * self.h
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.counts[1] + j) * self.counts[0] + i
    }
}

fn fill_between(zs: &mut [f64], grid: &Grid, axis: usize, mut set: impl FnMut(usize)) {
    zs.sort_by(f64::total_cmp);
    for pair in zs.chunks_exact(2) {
        for i in 0..grid.counts[axis] {
            let c = grid.center(axis, i);
            if c > pair[0] && c < pair[1] {
                set(i);
            }
        }
    }
}

fn finish(grid: &Grid, inside: &[bool], weight: impl Fn(f64, f64, f64) -> f64, dim: usize) -> Quadrature {
    let [nx, ny, nz] = grid.counts;
    let cell = grid.h.powi(dim as i32);
    let mut value = 0.0;
    let mut count = 0usize;
    let mut boundary = 0usize;
    let at = |i: isize, j: isize, k: isize| -> bool {
        if i < 0 || j < 0 || k < 0 || i >= nx as isize || j >= ny as isize || k >= nz as isize {
            return false;
        }
        inside[grid.index(i as usize, j as usize, k as usize)]
    };
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if !inside[grid.index(i, j, k)] {
                    continue;
                }
                count += 1;
                let z = if dim == 3 { grid.center(2, k) } else { 0.0 };
                value += weight(grid.center(0, i), grid.center(1, j), z) * cell;
                let (ii, jj, kk) = (i as isize, j as isize, k as isize);
                let mut neighbours = vec![at(ii - 1, jj, kk), at(ii + 1, jj, kk), at(ii, jj - 1, kk), at(ii, jj + 1, kk)];
                if dim == 3 {
                    neighbours.extend([at(ii, jj, kk - 1), at(ii, jj, kk + 1)]);
                }
                if neighbours.iter().any(|b| !b) {
                    boundary += 1;
                }
            }
        }
    }
    Quadrature {
        value,
        boundary_fraction: if count == 0 { 1.0 } else { boundary as f64 / count as f64 },
        cell_size: grid.h,
        inside_cells: count,
    }
}

/// `∫_Ω e^ψ dv` over the enclosed region by a cell-centred grid of spacing
/// `h`, with inside/outside from scanline crossings.
pub fn weighted_volume(s: &Shape, density: &dyn Density, ctx: &GaussianContext, h: f64) -> Quadrature {
    assert!(h > 0.0, "cell size must be positive");
    let weight = |x: f64, y: f64, z: f64| {
        let r = (x * x + y * y + z * z).sqrt();
        density.log_density(r, ctx).map_or(f64::NAN, f64::exp)
    };
    match s {
        Shape::Curve(c) => {
            let v = c.vertices();
            let lo = [v.iter().map(|p| p.x).fold(f64::INFINITY, f64::min), v.iter().map(|p| p.y).fold(f64::INFINITY, f64::min)];
            let hi = [v.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max), v.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max)];
            let grid = Grid::new(&lo, &hi, h);
            let mut inside = vec![false; grid.counts[0] * grid.counts[1]];
            let m = v.len();
            for j in 0..grid.counts[1] {
                let y = grid.center(1, j);
                let mut xs: Vec<f64> = (0..m)
                    .filter_map(|e| {
                        let (a, b) = (v[e], v[(e + 1) % m]);
                        ((a.y > y) != (b.y > y)).then(|| a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
                    })
                    .collect();
                fill_between(&mut xs, &grid, 0, |i| inside[grid.index(i, j, 0)] = true);
            }
            finish(&grid, &inside, weight, 2)
        }
        Shape::Mesh(mesh) => {
            let v = mesh.vertices();
            let mut lo = [f64::INFINITY; 3];
            let mut hi = [f64::NEG_INFINITY; 3];
            for p in v {
                for k in 0..3 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
            let grid = Grid::new(&lo, &hi, h);
            let [nx, ny, _] = grid.counts;
            let mut columns: Vec<Vec<f64>> = vec![Vec::new(); nx * ny];
            for f in mesh.faces() {
                let (a, b, c) = (v[f[0]], v[f[1]], v[f[2]]);
                let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
                if det == 0.0 {
                    continue;
                }
                let to_index = |x: f64, axis: usize| ((x - grid.origin[axis]) / h - 0.5).max(0.0);
                let i0 = to_index(a.x.min(b.x).min(c.x), 0).floor() as usize;
                let i1 = (to_index(a.x.max(b.x).max(c.x), 0).ceil() as usize).min(nx - 1);
                let j0 = to_index(a.y.min(b.y).min(c.y), 1).floor() as usize;
                let j1 = (to_index(a.y.max(b.y).max(c.y), 1).ceil() as usize).min(ny - 1);
                for j in j0..=j1 {
                    let y = grid.center(1, j);
                    for i in i0..=i1 {
                        let x = grid.center(0, i);
                        let l1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / det;
                        let l2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / det;
                        let l0 = 1.0 - l1 - l2;
                        if l0 >= 0.0 && l1 >= 0.0 && l2 >= 0.0 {
                            columns[j * nx + i].push(l0 * a.z + l1 * b.z + l2 * c.z);
                        }
                    }
                }
            }
            let mut inside = vec![false; nx * ny * grid.counts[2]];
            for j in 0..ny {
                for i in 0..nx {
                    let zs = &mut columns[j * nx + i];
                    if zs.len() % 2 == 1 {
                        // column grazes an edge or vertex: drop the duplicate
                        zs.sort_by(f64::total_cmp);
                        zs.dedup_by(|x, y| (*x - *y).abs() < 1e-12 * h);
                    }
                    if zs.len() % 2 == 1 {
                        continue;
                    }
                    fill_between(zs, &grid, 2, |k| inside[grid.index(i, j, k)] = true);
                }
            }
            finish(&grid, &inside, weight, 3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{Flat, Gaussian};
    use crate::geom::{Curve2, Mesh3};
    use crate::transforms::Epsilon;
    use nalgebra::Vector2;
    use std::f64::consts::PI;

    fn disk(r: f64) -> Shape {
        Curve2::new(
            (0..2048)
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / 2048.0;
                    Vector2::new(r * th.cos(), r * th.sin())
                })
                .collect(),
        )
        .unwrap()
        .into()
    }

    #[test]
    fn unit_disk_area() {
        let ctx = GaussianContext::new(Epsilon::Minus, 1.0, 1).unwrap();
        let q = weighted_volume(&disk(1.0), &Flat, &ctx, 2e-3);
        assert!((q.value - PI).abs() < 2.0 * q.boundary_fraction * PI, "{q:?}");
        assert!((q.value - PI).abs() < 1e-3);
    }

    #[test]
    fn gaussian_disk() {
        let ctx = GaussianContext::new(Epsilon::Minus, 1.0, 1).unwrap();
        let exact = 2.0 * PI * (1.0 - (-0.5f64).exp());
        let q = weighted_volume(&disk(1.0), &Gaussian, &ctx, 2e-3);
        assert!((q.value - exact).abs() < 1e-3, "{} vs {exact}", q.value);
        assert!((exact - 2.4724).abs() < 5e-4);
    }

    #[test]
    fn refinement_halves_boundary_fraction() {
        let ctx = GaussianContext::new(Epsilon::Minus, 1.0, 1).unwrap();
        let a = weighted_volume(&disk(1.0), &Flat, &ctx, 1e-2);
        let b = weighted_volume(&disk(1.0), &Flat, &ctx, 5e-3);
        assert!(b.boundary_fraction <= 0.55 * a.boundary_fraction);
    }

    #[test]
    fn sphere_volume() {
        let ctx = GaussianContext::new(Epsilon::Minus, 1.0, 2).unwrap();
        let m: Shape = Mesh3::icosphere(1.0, 4).unwrap().into();
        let q = weighted_volume(&m, &Flat, &ctx, 0.02);
        let exact = m.enclosed_measure();
        assert!((q.value - exact).abs() < 1e-2 * exact, "{} vs {exact}", q.value);
    }
}
