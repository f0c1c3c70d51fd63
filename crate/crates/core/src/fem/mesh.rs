use std::f64::consts::PI;

/// Structured mesh of bilinear quadrilaterals (2D) or trilinear hexahedra
/// (3D).
///
/// Element connectivity follows the reference-element ordering: in 2D
/// counter-clockwise from the `(-1,-1)` corner, in 3D the bottom face
/// counter-clockwise followed by the top face.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub dim: usize,
    pub coords: Vec<[f64; 3]>,
    pub elements: Vec<Vec<usize>>,
}

impl Mesh {
    /// Tensor-product quadrilateral grid on `[x0,x1] x [y0,y1]`; node
    /// `(i, j)` has index `j * (nx + 1) + i`.
    pub fn rectangle(nx: usize, ny: usize, x: [f64; 2], y: [f64; 2]) -> Self {
        assert!(nx >= 1 && ny >= 1, "need at least one element per direction");
        let hx = (x[1] - x[0]) / nx as f64;
        let hy = (y[1] - y[0]) / ny as f64;
        let mut coords = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                // exact endpoints so boundary tests by coordinate are reliable
                let xi = if i == nx { x[1] } else { x[0] + i as f64 * hx };
                let yj = if j == ny { y[1] } else { y[0] + j as f64 * hy };
                coords.push([xi, yj, 0.0]);
            }
        }
        let node = |i: usize, j: usize| j * (nx + 1) + i;
        let mut elements = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                elements.push(vec![node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)]);
            }
        }
        Self { dim: 2, coords, elements }
    }

    /// Full annulus `ri <= r <= ro`, `0 <= z <= thickness`, periodic in the
    /// angle. Node `(ir, it, iz)` has index `ir + (nr + 1) * (it + nt * iz)`.
    pub fn annulus(nr: usize, nt: usize, nz: usize, ri: f64, ro: f64, thickness: f64) -> Self {
        assert!(nr >= 1 && nt >= 3 && nz >= 1, "annulus needs nr >= 1, nt >= 3, nz >= 1");
        let node = |ir: usize, it: usize, iz: usize| ir + (nr + 1) * ((it % nt) + nt * iz);
        let mut coords = vec![[0.0; 3]; (nr + 1) * nt * (nz + 1)];
        for iz in 0..=nz {
            let z = thickness * iz as f64 / nz as f64;
            for it in 0..nt {
                let t = 2.0 * PI * it as f64 / nt as f64;
                for ir in 0..=nr {
                    let r = if ir == nr { ro } else { ri + (ro - ri) * ir as f64 / nr as f64 };
                    coords[node(ir, it, iz)] = [r * t.cos(), r * t.sin(), z];
                }
            }
        }
        let mut elements = Vec::with_capacity(nr * nt * nz);
        for iz in 0..nz {
            for it in 0..nt {
                for ir in 0..nr {
                    elements.push(vec![
                        node(ir, it, iz),
                        node(ir + 1, it, iz),
                        node(ir + 1, it + 1, iz),
                        node(ir, it + 1, iz),
                        node(ir, it, iz + 1),
                        node(ir + 1, it, iz + 1),
                        node(ir + 1, it + 1, iz + 1),
                        node(ir, it + 1, iz + 1),
                    ]);
                }
            }
        }
        Self { dim: 3, coords, elements }
    }

    pub fn n_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn centroid(&self, e: usize) -> [f64; 3] {
        let nodes = &self.elements[e];
        let mut c = [0.0; 3];
        for &n in nodes {
            for (ci, xi) in c.iter_mut().zip(self.coords[n]) {
                *ci += xi;
            }
        }
        c.map(|v| v / nodes.len() as f64)
    }

    /// Element indices touching each node.
    pub fn node_patches(&self) -> Vec<Vec<usize>> {
        let mut patches = vec![Vec::new(); self.n_nodes()];
        for (e, nodes) in self.elements.iter().enumerate() {
            for &n in nodes {
                patches[n].push(e);
            }
        }
        patches
    }
}
