//! The 8,8,4 color code on a `d x d` torus, in dual form.
//!
//! The primal square-octagon tiling is laid out on a grid of cells `(x, y)`:
//! cells with `x + y` even are squares (red checks), the remaining cells are
//! octagons, blue when `x` is even and green when `x` is odd. In the dual
//! picture every cell is a vertex and every square corner is a triangular
//! face (a data qubit) touching the square and the two octagons that meet
//! at that corner.
//!
//! Indexing:
//! - vertex id = `y * d + x`;
//! - red index of the square at `(x, y)` = `(y * d + x) / 2`;
//! - face id = `4 * red_index + corner`, corners ordered NE, NW, SW, SE;
//! - edge ids `0..2d^2` are square sides, `4 * red_index + dir` with dirs
//!   E, N, W, S; edges `2d^2..3d^2` join a blue and a green octagon and are
//!   numbered in order of first appearance when scanning faces by id.
//!
//! Only Z-type checks and X-type errors are represented.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gkp::{cmod, flip_prob_unchecked};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Color {
    Red,
    Green,
    Blue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub color: Color,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: usize,
    /// Incident vertices as `[red, blue, green]`.
    pub vertices: [usize; 3],
    /// Incident edges as `[red-blue, red-green, blue-green]`.
    pub edges: [usize; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: usize,
    pub endpoints: [usize; 2],
    pub faces: [usize; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct DualLattice {
    d: usize,
    vertices: Vec<Vertex>,
    faces: Vec<Face>,
    edges: Vec<Edge>,
    #[serde(skip)]
    vertex_faces: Vec<Vec<usize>>,
    #[serde(skip)]
    vertex_edges: Vec<Vec<usize>>,
    logical_x: [Vec<usize>; 4],
    logical_z: [Vec<usize>; 4],
}

const DX: [isize; 4] = [1, 0, -1, 0];
const DY: [isize; 4] = [0, 1, 0, -1];
/// Square sides bounding each corner face, indexed by corner.
pub(crate) const CORNER_DIRS: [[usize; 2]; 4] = [[0, 1], [1, 2], [2, 3], [3, 0]];

impl DualLattice {
    pub fn build(d: usize) -> Result<Self> {
        if d < 4 || d % 2 != 0 {
            return Err(Error::invalid(format!("distance must be even and at least 4, got {d}")));
        }
        let n = d * d;
        let wrap = |c: usize, delta: isize| -> usize { ((c as isize + delta).rem_euclid(d as isize)) as usize };
        let color_at = |x: usize, y: usize| {
            if (x + y) % 2 == 0 {
                Color::Red
            } else if x % 2 == 0 {
                Color::Blue
            } else {
                Color::Green
            }
        };

        let vertices: Vec<Vertex> = (0..n)
            .map(|id| {
                let (x, y) = (id % d, id / d);
                Vertex { id, color: color_at(x, y), x, y }
            })
            .collect();

        let num_faces = 2 * n;
        let mut faces = Vec::with_capacity(num_faces);
        let mut edges = Vec::with_capacity(3 * n);
        for red in 0..n / 2 {
            let (x, y) = red_cell(red, d);
            let v = y * d + x;
            for dir in 0..4 {
                let nb = wrap(y, DY[dir]) * d + wrap(x, DX[dir]);
                let id = 4 * red + dir;
                // the faces on side `dir` are the two corners that contain it
                let corners: Vec<usize> = (0..4).filter(|c| CORNER_DIRS[*c].contains(&dir)).collect();
                edges.push(Edge {
                    id,
                    endpoints: [v, nb],
                    faces: [4 * red + corners[0], 4 * red + corners[1]],
                });
            }
        }

        let mut diag: std::collections::HashMap<(usize, usize), usize> = Default::default();
        let mut diag_faces: Vec<Vec<usize>> = Vec::new();
        for red in 0..n / 2 {
            let (x, y) = red_cell(red, d);
            let v = y * d + x;
            for corner in 0..4 {
                let id = 4 * red + corner;
                let mut blue = (usize::MAX, 0);
                let mut green = (usize::MAX, 0);
                for dir in CORNER_DIRS[corner] {
                    let nb = edges[4 * red + dir].endpoints[1];
                    match vertices[nb].color {
                        Color::Blue => blue = (nb, 4 * red + dir),
                        Color::Green => green = (nb, 4 * red + dir),
                        Color::Red => unreachable!("square sides end on octagons"),
                    }
                }
                let next = diag.len();
                let slot = *diag.entry((blue.0, green.0)).or_insert(next);
                if slot == diag_faces.len() {
                    diag_faces.push(Vec::new());
                }
                diag_faces[slot].push(id);
                faces.push(Face {
                    id,
                    vertices: [v, blue.0, green.0],
                    edges: [blue.1, green.1, 2 * n + slot],
                });
            }
        }
        let mut diag_pairs: Vec<((usize, usize), usize)> = diag.into_iter().collect();
        diag_pairs.sort_by_key(|(_, slot)| *slot);
        for ((b, g), slot) in diag_pairs {
            let fs = &diag_faces[slot];
            if fs.len() != 2 {
                return Err(Error::ContractViolation(format!(
                    "blue-green edge {b}-{g} has {} faces",
                    fs.len()
                )));
            }
            edges.push(Edge { id: 2 * n + slot, endpoints: [b, g], faces: [fs[0], fs[1]] });
        }

        let mut vertex_faces = vec![Vec::new(); n];
        for f in &faces {
            for v in f.vertices {
                vertex_faces[v].push(f.id);
            }
        }
        let mut vertex_edges = vec![Vec::new(); n];
        for e in &edges {
            for v in e.endpoints {
                vertex_edges[v].push(e.id);
            }
        }

        let mut lattice = DualLattice {
            d,
            vertices,
            faces,
            edges,
            vertex_faces,
            vertex_edges,
            logical_x: Default::default(),
            logical_z: Default::default(),
        };
        lattice.logical_x = lattice.straight_strings();
        lattice.logical_z = lattice.conjugate_supports()?;
        lattice.check_logicals()?;
        Ok(lattice)
    }

    /// Four weight-`d` straight face strips: for each octagon color, one
    /// along x and one along y.
    fn straight_strings(&self) -> [Vec<usize>; 4] {
        let d = self.d;
        let strip = |fixed_row: Option<usize>, fixed_col: Option<usize>, x_parity: usize, corners: [usize; 2]| {
            let mut out = Vec::with_capacity(d);
            for red in 0..d * d / 2 {
                let (x, y) = red_cell(red, d);
                let on_row = fixed_row.map_or(true, |r| r == y);
                let on_col = fixed_col.map_or(true, |c| c == x);
                if on_row && on_col && x % 2 == x_parity {
                    out.extend(corners.iter().map(|c| 4 * red + c));
                }
            }
            out.sort_unstable();
            out
        };
        [
            // along x through blue octagons (odd row, squares at odd x)
            strip(Some(1), None, 1, [0, 1]),
            // along y through blue octagons (even column)
            strip(None, Some(0), 0, [0, 3]),
            // along x through green octagons (even row, squares at even x)
            strip(Some(0), None, 0, [0, 1]),
            // along y through green octagons (odd column)
            strip(None, Some(1), 1, [0, 3]),
        ]
    }

    /// Z-type supports dual to the X strings: `Z_i = sum_j C_ij X_j` with
    /// `C` the GF(2) inverse of the X overlap matrix.
    fn conjugate_supports(&self) -> Result<[Vec<usize>; 4]> {
        let mut a = [[0u8; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] = (overlap(&self.logical_x[i], &self.logical_x[j]) % 2) as u8;
            }
        }
        let inv = gf2_inverse4(a).ok_or_else(|| {
            Error::ContractViolation("logical X strings have a singular overlap matrix".into())
        })?;
        let nf = self.num_faces();
        let mut out: [Vec<usize>; 4] = Default::default();
        for i in 0..4 {
            let mut mask = vec![false; nf];
            for j in 0..4 {
                if inv[i][j] == 1 {
                    for &f in &self.logical_x[j] {
                        mask[f] ^= true;
                    }
                }
            }
            out[i] = (0..nf).filter(|&f| mask[f]).collect();
        }
        Ok(out)
    }

    fn check_logicals(&self) -> Result<()> {
        for (kind, set) in [("X", &self.logical_x), ("Z", &self.logical_z)] {
            for (i, support) in set.iter().enumerate() {
                let mut err = BinaryError::zeros(self.num_faces());
                for &f in support {
                    err.flips[f] = true;
                }
                if self.syndrome_of(&err)?.iter().any(|&b| b) {
                    return Err(Error::ContractViolation(format!("logical {kind}{i} has nonzero syndrome")));
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let want = usize::from(i == j);
                if overlap(&self.logical_z[i], &self.logical_x[j]) % 2 != want {
                    return Err(Error::ContractViolation(format!(
                        "logical Z{i} and X{j} have the wrong commutation"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn color(&self, v: usize) -> Color {
        self.vertices[v].color
    }

    pub fn faces_of_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn edges_of_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    /// Faces around a red vertex in corner order NE, NW, SW, SE.
    pub fn red_faces(&self, v: usize) -> [usize; 4] {
        debug_assert_eq!(self.color(v), Color::Red);
        let r = v / 2;
        [4 * r, 4 * r + 1, 4 * r + 2, 4 * r + 3]
    }

    /// Square sides around a red vertex in order E, N, W, S.
    pub fn red_edges(&self, v: usize) -> [usize; 4] {
        self.red_faces(v)
    }

    /// Red endpoint of a square side.
    pub fn red_of_edge(&self, e: usize) -> Option<usize> {
        (e < 2 * self.vertices.len()).then(|| self.edges[e].endpoints[0])
    }

    pub fn logical_x_supports(&self) -> &[Vec<usize>; 4] {
        &self.logical_x
    }

    pub fn logical_z_supports(&self) -> &[Vec<usize>; 4] {
        &self.logical_z
    }

    pub fn syndrome_of(&self, error: &BinaryError) -> Result<Vec<bool>> {
        if error.flips.len() != self.num_faces() {
            return Err(Error::invalid(format!(
                "error has {} entries, lattice has {} faces",
                error.flips.len(),
                self.num_faces()
            )));
        }
        let mut s = vec![false; self.num_vertices()];
        for (f, &bit) in error.flips.iter().enumerate() {
            if bit {
                for v in self.faces[f].vertices {
                    s[v] ^= true;
                }
            }
        }
        Ok(s)
    }

    /// Analog check outcomes: incident data shifts plus per-check noise.
    pub fn measure_checks<R: Real>(
        &self,
        frame: &ShiftFrame<R>,
        ancilla_noise: &[R],
        sigmas: CheckSigmas<R>,
    ) -> Result<AnalogSyndrome<R>> {
        if frame.q_shift.len() != self.num_faces() || ancilla_noise.len() != self.num_vertices() {
            return Err(Error::invalid("frame or noise length does not match the lattice"));
        }
        let n = self.num_vertices();
        let mut q_m = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        let mut reliability = Vec::with_capacity(n);
        for v in 0..n {
            let mut q = ancilla_noise[v];
            for &f in &self.vertex_faces[v] {
                q = q + frame.q_shift[f];
            }
            let s = sigmas.for_weight(self.vertex_faces[v].len());
            q_m.push(q);
            sign.push(check_sign(q));
            reliability.push(if s > R::zero() { flip_prob_unchecked(q, s) } else { R::zero() });
        }
        Ok(AnalogSyndrome { q_m, sign, reliability })
    }

    /// Bit `i` is the parity of the residual's overlap with the Z-type
    /// support conjugate to logical X number `i`.
    pub fn logical_flips(&self, residual: &BinaryError) -> Result<[bool; 4]> {
        if self.syndrome_of(residual)?.iter().any(|&b| b) {
            return Err(Error::ContractViolation("residual error has a nonzero syndrome".into()));
        }
        Ok(self.logical_parities(&residual.flips))
    }

    pub(crate) fn logical_parities(&self, flips: &[bool]) -> [bool; 4] {
        let mut out = [false; 4];
        for (i, support) in self.logical_z.iter().enumerate() {
            out[i] = support.iter().filter(|&&f| flips[f]).count() % 2 == 1;
        }
        out
    }

    /// GF(2) rank of the check-face incidence matrix.
    pub fn check_rank(&self) -> usize {
        let words = self.num_faces().div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..self.num_vertices())
            .map(|v| {
                let mut r = vec![0u64; words];
                for &f in &self.vertex_faces[v] {
                    r[f / 64] |= 1 << (f % 64);
                }
                r
            })
            .collect();
        gf2_rank(&mut rows, self.num_faces())
    }

    /// Verify counts, degrees, coloring, per-color redundancy, check rank and
    /// logical commutation.
    pub fn check_invariants(&self) -> Result<()> {
        let d = self.d;
        let fail = |m: String| Err(Error::ContractViolation(m));
        if self.num_faces() != 2 * d * d || self.num_vertices() != d * d || self.num_edges() != 3 * d * d {
            return fail("element counts".into());
        }
        for v in &self.vertices {
            let want = if v.color == Color::Red { 4 } else { 8 };
            if self.vertex_faces[v.id].len() != want {
                return fail(format!("vertex {} has degree {}", v.id, self.vertex_faces[v.id].len()));
            }
        }
        for f in &self.faces {
            let colors = f.vertices.map(|v| self.color(v));
            if colors != [Color::Red, Color::Blue, Color::Green] {
                return fail(format!("face {} colors {colors:?}", f.id));
            }
            for (k, &e) in f.edges.iter().enumerate() {
                let edge = &self.edges[e];
                let (a, b) = match k {
                    0 => (f.vertices[0], f.vertices[1]),
                    1 => (f.vertices[0], f.vertices[2]),
                    _ => (f.vertices[1], f.vertices[2]),
                };
                let mut ends = edge.endpoints;
                ends.sort_unstable();
                let mut want = [a, b];
                want.sort_unstable();
                if ends != want || !edge.faces.contains(&f.id) {
                    return fail(format!("face {} edge {e} incidence", f.id));
                }
            }
        }
        for e in &self.edges {
            if self.color(e.endpoints[0]) == self.color(e.endpoints[1]) {
                return fail(format!("edge {} joins equal colors", e.id));
            }
        }
        for color in [Color::Red, Color::Green, Color::Blue] {
            let mut count = vec![0usize; self.num_faces()];
            for v in self.vertices.iter().filter(|v| v.color == color) {
                for &f in &self.vertex_faces[v.id] {
                    count[f] += 1;
                }
            }
            if count.iter().any(|&c| c != 1) {
                return fail(format!("{color:?} checks do not cover every face once"));
            }
        }
        let rank = self.check_rank();
        if rank != d * d - 2 {
            return fail(format!("check rank {rank}, expected {}", d * d - 2));
        }
        self.check_logicals()
    }

    /// Serialize the lattice as JSON: `{"d", "vertices": [{id, color, x, y}],
    /// "faces": [{id, vertices: [r, b, g], edges: [rb, rg, bg]}],
    /// "edges": [{id, endpoints, faces}], "logical_x": [[face]; 4],
    /// "logical_z": [[face]; 4]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lattice serializes")
    }
}

fn red_cell(red: usize, d: usize) -> (usize, usize) {
    let y = (2 * red) / d;
    let x = 2 * red - y * d + (y % 2);
    (x, y)
}

fn overlap(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|f| b.contains(f)).count()
}

fn gf2_inverse4(a: [[u8; 4]; 4]) -> Option<[[u8; 4]; 4]> {
    let mut m = a;
    let mut inv = [[0u8; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1;
    }
    for col in 0..4 {
        let pivot = (col..4).find(|&r| m[r][col] == 1)?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..4 {
            if r != col && m[r][col] == 1 {
                for c in 0..4 {
                    m[r][c] ^= m[col][c];
                    inv[r][c] ^= inv[col][c];
                }
            }
        }
    }
    Some(inv)
}

pub(crate) fn gf2_rank(rows: &mut [Vec<u64>], ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Sign bit of a check outcome: true (check reads -1) when the outcome is
/// closer to an odd multiple of `sqrt(pi)`.
#[inline]
pub fn check_sign<R: Real>(q_m: R) -> bool {
    let sp = R::sqrt_pi();
    cmod(q_m, R::lit(2.0) * sp).abs() >= R::lit(0.5) * sp
}

/// Accumulated q-quadrature displacement of every data qubit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftFrame<R> {
    pub q_shift: Vec<R>,
}

impl<R: Real> ShiftFrame<R> {
    pub fn zeros(num_faces: usize) -> Self {
        Self { q_shift: vec![R::zero(); num_faces] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BinaryError {
    pub flips: Vec<bool>,
}

impl BinaryError {
    pub fn zeros(num_faces: usize) -> Self {
        Self { flips: vec![false; num_faces] }
    }

    pub fn from_faces(num_faces: usize, faces: &[usize]) -> Result<Self> {
        let mut e = Self::zeros(num_faces);
        for &f in faces {
            if f >= num_faces {
                return Err(Error::invalid(format!("face {f} out of range (0..{num_faces})")));
            }
            e.flips[f] ^= true;
        }
        Ok(e)
    }

    pub fn xor(&self, other: &BinaryError) -> BinaryError {
        BinaryError {
            flips: self.flips.iter().zip(&other.flips).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.flips.len()).filter(|&f| self.flips[f]).collect()
    }

    pub fn weight(&self) -> usize {
        self.flips.iter().filter(|&&b| b).count()
    }
}

/// Effective standard deviation of a check outcome by check weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSigmas<R> {
    pub weight4: R,
    pub weight8: R,
}

impl<R: Real> CheckSigmas<R> {
    pub fn uniform(sigma: R) -> Self {
        Self { weight4: sigma, weight8: sigma }
    }

    pub fn for_weight(&self, w: usize) -> R {
        if w <= 4 {
            self.weight4
        } else {
            self.weight8
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalogSyndrome<R> {
    pub q_m: Vec<R>,
    /// True where the check reads -1.
    pub sign: Vec<bool>,
    /// Probability that the sign is wrong.
    pub reliability: Vec<R>,
}
