//! Restriction decoding of the 8,8,4 color code.
//!
//! The dual lattice is split into two restricted lattices, red-blue and
//! red-green, each obtained by deleting the vertices of the third color.
//! Defects are matched on both, the matched edge sets are combined and lifted
//! to a face correction around every red vertex they touch.
//!
//! Matching happens on a stack of `layers` copies of a restricted lattice
//! joined by vertical edges. A single layer is the perfect-measurement
//! decoder; [`crate::spacetime`] drives the same engine with one layer per
//! measurement round.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gkp::{clamp_prob, odds};
use crate::lattice::{Color, DualLattice, CORNER_DIRS};
use crate::matching::{min_weight_perfect_matching, shortest_paths, Dijkstra, Graph};
use crate::scalar::Real;

const NONE: usize = usize::MAX;

/// Resolution used to turn real path lengths into exact integer matching
/// weights.
const WEIGHT_QUANTUM: f64 = 1e-6;

/// Matching weight of a restricted-lattice edge before the other lattice is
/// known: `-log[(r1^2 + r2^2) / (r1 + r2)]` with `r = p / (1 - p)` of the two
/// faces along the edge. Clamped at zero.
pub fn edge_weight_first_pass<R: Real>(p1: R, p2: R) -> R {
    let (r1, r2) = (odds(p1), odds(p2));
    let w = -((r1 * r1 + r2 * r2) / (r1 + r2)).ln();
    w.max(R::zero())
}

/// Matching weight when the responsible face is known: `-log(p / (1 - p))`,
/// clamped at zero.
pub fn edge_weight_second_pass<R: Real>(p: R) -> R {
    (-odds(p).ln()).max(R::zero())
}

/// Log-odds cost `-log(p / (1 - p))` of flipping one face, unclamped.
#[inline]
pub(crate) fn face_cost<R: Real>(p: R) -> R {
    -odds(p).ln()
}

/// One of the two restricted lattices, described by the octagon color that
/// is kept next to red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Restriction {
    RedBlue,
    RedGreen,
}

impl Restriction {
    pub fn kept(self) -> Color {
        match self {
            Restriction::RedBlue => Color::Blue,
            Restriction::RedGreen => Color::Green,
        }
    }

    pub fn removed(self) -> Color {
        match self {
            Restriction::RedBlue => Color::Green,
            Restriction::RedGreen => Color::Blue,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Restriction::RedBlue => Restriction::RedGreen,
            Restriction::RedGreen => Restriction::RedBlue,
        }
    }

    /// Slot of this lattice's edge in [`crate::lattice::Face::edges`].
    fn face_slot(self) -> usize {
        match self {
            Restriction::RedBlue => 0,
            Restriction::RedGreen => 1,
        }
    }
}

/// A restricted lattice stacked `layers` times.
///
/// Graph nodes are `layer * V + vertex` over all lattice vertices (removed
/// ones stay isolated). Graph edges are horizontal first, `layer * E_r + i`
/// for the `i`-th retained lattice edge, then vertical,
/// `layers * E_r + layer * K + j` joining the `j`-th retained vertex in
/// `layer` and `layer + 1`.
#[derive(Debug, Clone)]
pub struct RestrictedLattice {
    pub restriction: Restriction,
    pub layers: usize,
    /// Retained lattice edges (square sides to the kept color).
    edges: Vec<usize>,
    /// Lattice edge id to its index in `edges`.
    local: Vec<usize>,
    /// Retained vertices, red and kept color.
    kept_vertices: Vec<usize>,
    graph: Graph,
}

/// What a graph edge of a [`RestrictedLattice`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GraphEdge {
    Horizontal { edge: usize, layer: usize },
    Vertical { vertex: usize, layer: usize },
}

impl RestrictedLattice {
    pub fn new(lattice: &DualLattice, restriction: Restriction, layers: usize) -> Result<Self> {
        if layers == 0 {
            return Err(Error::invalid("at least one layer is required"));
        }
        let kept = restriction.kept();
        let nv = lattice.num_vertices();
        let mut edges = Vec::new();
        let mut local = vec![NONE; lattice.num_edges()];
        for e in lattice.edges() {
            let colors = e.endpoints.map(|v| lattice.color(v));
            if colors.contains(&Color::Red) && colors.contains(&kept) {
                local[e.id] = edges.len();
                edges.push(e.id);
            }
        }
        let kept_vertices: Vec<usize> = (0..nv)
            .filter(|&v| matches!(lattice.color(v), c if c == Color::Red || c == kept))
            .collect();
        let er = edges.len();
        let mut gedges = Vec::with_capacity(layers * er + (layers - 1) * kept_vertices.len());
        for t in 0..layers {
            for &e in &edges {
                let [a, b] = lattice.edge(e).endpoints;
                gedges.push([t * nv + a, t * nv + b]);
            }
        }
        for t in 0..layers - 1 {
            for &v in &kept_vertices {
                gedges.push([t * nv + v, (t + 1) * nv + v]);
            }
        }
        let graph = Graph::new(layers * nv, gedges)?;
        Ok(Self { restriction, layers, edges, local, kept_vertices, graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Lattice edge ids retained in this restriction.
    pub fn lattice_edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains_vertex(&self, lattice: &DualLattice, v: usize) -> bool {
        let c = lattice.color(v);
        c == Color::Red || c == self.restriction.kept()
    }

    fn num_horizontal(&self) -> usize {
        self.layers * self.edges.len()
    }

    pub fn describe(&self, g: usize) -> GraphEdge {
        let er = self.edges.len();
        if g < self.num_horizontal() {
            GraphEdge::Horizontal { edge: self.edges[g % er], layer: g / er }
        } else {
            let k = self.kept_vertices.len();
            let rest = g - self.num_horizontal();
            GraphEdge::Vertical { vertex: self.kept_vertices[rest % k], layer: rest / k }
        }
    }

    /// Graph edge of a retained lattice edge in `layer`.
    fn horizontal(&self, edge: usize, layer: usize) -> usize {
        layer * self.edges.len() + self.local[edge]
    }
}

/// Best face subset around a red vertex for each set of its four square
/// sides (bit `k` = direction `k`); `None` for odd sets.
fn lift_table() -> [Option<u8>; 16] {
    let mut table = [None; 16];
    for subset in 0u8..16 {
        let mut boundary = 0u8;
        for corner in 0..4 {
            if subset & (1 << corner) != 0 {
                for dir in CORNER_DIRS[corner] {
                    boundary ^= 1 << dir;
                }
            }
        }
        // smaller subsets win; equal sizes go to the smaller sorted face list
        let better = match table[boundary as usize] {
            None => true,
            Some(prev) => {
                let (a, b) = (subset.count_ones(), u8::count_ones(prev));
                a < b || (a == b && lex_smaller(subset, prev))
            }
        };
        if better {
            table[boundary as usize] = Some(subset);
        }
    }
    table
}

/// Compare corner subsets as sorted face-id lists.
fn lex_smaller(a: u8, b: u8) -> bool {
    let list = |m: u8| (0..4).filter(|c| m & (1 << c) != 0).collect::<Vec<u8>>();
    list(a) < list(b)
}

/// Lift a set of square sides at a red vertex to a face set with that
/// boundary: the smallest such set, ties broken towards smaller face ids.
pub fn lift(lattice: &DualLattice, red_vertex: usize, local_edges: &[usize]) -> Result<Vec<usize>> {
    if lattice.color(red_vertex) != Color::Red {
        return Err(Error::invalid(format!("vertex {red_vertex} is not red")));
    }
    let sides = lattice.red_edges(red_vertex);
    let mut mask = 0u8;
    for e in local_edges {
        let dir = sides
            .iter()
            .position(|s| s == e)
            .ok_or_else(|| Error::invalid(format!("edge {e} is not incident to red vertex {red_vertex}")))?;
        mask ^= 1 << dir;
    }
    let faces = lattice.red_faces(red_vertex);
    let subset = lift_table()[mask as usize].ok_or(Error::LiftingFailure { vertex: red_vertex })?;
    Ok((0..4).filter(|c| subset & (1 << c) != 0).map(|c| faces[c]).collect())
}

/// Which restricted lattice is matched first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Order {
    RedBlueFirst,
    RedGreenFirst,
}

impl Order {
    fn first(self) -> Restriction {
        match self {
            Order::RedBlueFirst => Restriction::RedBlue,
            Order::RedGreenFirst => Restriction::RedGreen,
        }
    }
}

/// Per-face flip probabilities seen by the decoder.
#[derive(Debug, Clone, Copy)]
pub enum Reliabilities<'a, R> {
    /// One probability per face (and per layer, layer-major).
    Analog(&'a [R]),
    /// The same probability everywhere.
    Uniform(R),
}

impl<R: Real> Reliabilities<'_, R> {
    #[inline]
    fn get(&self, i: usize) -> R {
        match self {
            Reliabilities::Analog(p) => clamp_prob(p[i]),
            Reliabilities::Uniform(p) => clamp_prob(*p),
        }
    }
}

/// Outcome of one matching order.
#[derive(Debug, Clone, Serialize)]
pub struct OrderTrace {
    pub order: Order,
    /// Matched graph edges on the first and second lattice, with their meaning.
    pub first: Vec<GraphEdge>,
    pub second: Vec<GraphEdge>,
    pub correction: Vec<usize>,
    pub cost: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecodeTrace {
    pub defects_red_blue: Vec<usize>,
    pub defects_red_green: Vec<usize>,
    pub orders: Vec<OrderTrace>,
    pub chosen: Order,
}

/// Decoder output: corrected faces plus the trace of both orders.
#[derive(Debug, Clone)]
pub struct Decoded {
    pub correction: Vec<usize>,
    pub trace: DecodeTrace,
}

/// Layered two-pass restriction decoder. Holds the two stacked restricted
/// lattices and matching scratch space; one instance per worker.
#[derive(Debug, Clone)]
pub struct LayeredDecoder<'a, R> {
    lattice: &'a DualLattice,
    red_blue: RestrictedLattice,
    red_green: RestrictedLattice,
    solver: Dijkstra<R>,
    lift: [Option<u8>; 16],
}

/// Inputs for one decode on `layers` layers.
pub(crate) struct LayeredInput<'s, R> {
    /// Defect flags per `layer * V + vertex`.
    pub defects: &'s [bool],
    /// Face flip probabilities per `layer * F + face`.
    pub data: Reliabilities<'s, R>,
    /// Check error probabilities per `layer * V + vertex`; only layers below
    /// the top are read.
    pub checks: Reliabilities<'s, R>,
}

impl<'a, R: Real> LayeredDecoder<'a, R> {
    pub fn new(lattice: &'a DualLattice, layers: usize) -> Result<Self> {
        let red_blue = RestrictedLattice::new(lattice, Restriction::RedBlue, layers)?;
        let red_green = RestrictedLattice::new(lattice, Restriction::RedGreen, layers)?;
        let solver = Dijkstra::new(red_blue.graph().num_nodes());
        Ok(Self { lattice, red_blue, red_green, solver, lift: lift_table() })
    }

    pub fn layers(&self) -> usize {
        self.red_blue.layers
    }

    pub fn lattice(&self) -> &'a DualLattice {
        self.lattice
    }

    fn restricted(&self, r: Restriction) -> &RestrictedLattice {
        match r {
            Restriction::RedBlue => &self.red_blue,
            Restriction::RedGreen => &self.red_green,
        }
    }

    fn defect_nodes(&self, r: Restriction, defects: &[bool]) -> Result<Vec<usize>> {
        let rl = self.restricted(r);
        let nv = self.lattice.num_vertices();
        let nodes: Vec<usize> = (0..defects.len())
            .filter(|&n| defects[n] && rl.contains_vertex(self.lattice, n % nv))
            .collect();
        if nodes.len() % 2 != 0 {
            return Err(Error::Parity { count: nodes.len(), context: format!("{r:?} defects") });
        }
        Ok(nodes)
    }

    fn vertical_weights(&self, rl: &RestrictedLattice, checks: &Reliabilities<'_, R>, w: &mut [R]) {
        let nv = self.lattice.num_vertices();
        let base = rl.num_horizontal();
        let k = rl.kept_vertices.len();
        for t in 0..rl.layers - 1 {
            for (j, &v) in rl.kept_vertices.iter().enumerate() {
                w[base + t * k + j] = edge_weight_second_pass(checks.get(t * nv + v));
            }
        }
    }

    fn first_pass_weights(&self, rl: &RestrictedLattice, input: &LayeredInput<'_, R>) -> Vec<R> {
        let nf = self.lattice.num_faces();
        let mut w = vec![R::zero(); rl.graph().num_edges()];
        for t in 0..rl.layers {
            for (i, &e) in rl.edges.iter().enumerate() {
                let [f1, f2] = self.lattice.edge(e).faces;
                w[t * rl.edges.len() + i] =
                    edge_weight_first_pass(input.data.get(t * nf + f1), input.data.get(t * nf + f2));
            }
        }
        self.vertical_weights(rl, &input.checks, &mut w);
        w
    }

    /// Second-pass weights: each edge is charged to one of its two faces.
    /// When exactly one face also has its other square side in the first
    /// lattice's matching (same layer), that face is responsible; otherwise
    /// the face with the larger flip odds is.
    fn second_pass_weights(
        &self,
        rl: &RestrictedLattice,
        first: &RestrictedLattice,
        first_matched: &[bool],
        input: &LayeredInput<'_, R>,
    ) -> Vec<R> {
        let nf = self.lattice.num_faces();
        let slot = first.restriction.face_slot();
        let mut w = vec![R::zero(); rl.graph().num_edges()];
        for t in 0..rl.layers {
            for (i, &e) in rl.edges.iter().enumerate() {
                let [f1, f2] = self.lattice.edge(e).faces;
                let partner = |f: usize| first_matched[first.horizontal(self.lattice.face(f).edges[slot], t)];
                let (p1, p2) = (input.data.get(t * nf + f1), input.data.get(t * nf + f2));
                let p = match (partner(f1), partner(f2)) {
                    (true, false) => p1,
                    (false, true) => p2,
                    _ => p1.max(p2),
                };
                w[t * rl.edges.len() + i] = edge_weight_second_pass(p);
            }
        }
        self.vertical_weights(rl, &input.checks, &mut w);
        w
    }

    /// Match defect nodes on a restricted graph and return the matched
    /// edge indicator (edges used an odd number of times).
    fn match_on(&mut self, r: Restriction, weights: &[R], nodes: &[usize]) -> Result<Vec<bool>> {
        let rl = match r {
            Restriction::RedBlue => &self.red_blue,
            Restriction::RedGreen => &self.red_green,
        };
        let mut used = vec![false; rl.graph().num_edges()];
        if nodes.is_empty() {
            return Ok(used);
        }
        let table = shortest_paths(rl.graph(), weights, nodes, &mut self.solver)?;
        let quantum = R::lit(WEIGHT_QUANTUM);
        let m = min_weight_perfect_matching(nodes.len(), |i, j| {
            table.distance(i, j).map(|d| (d / quantum).round().to_i64().unwrap_or(i64::MAX / 4))
        })?;
        for (i, j) in m.pairs {
            for e in table.path(rl.graph(), i, j).expect("matched pair is connected") {
                used[e] ^= true;
            }
        }
        Ok(used)
    }

    fn run_order(&mut self, order: Order, input: &LayeredInput<'_, R>, nodes: [&[usize]; 2]) -> Result<OrderTrace> {
        let first_r = order.first();
        let second_r = first_r.other();
        let idx = |r: Restriction| if r == Restriction::RedBlue { 0 } else { 1 };

        let w1 = self.first_pass_weights(self.restricted(first_r), input);
        let rho1 = self.match_on(first_r, &w1, nodes[idx(first_r)])?;
        let w2 = self.second_pass_weights(self.restricted(second_r), self.restricted(first_r), &rho1, input);
        let rho2 = self.match_on(second_r, &w2, nodes[idx(second_r)])?;

        // project horizontal edges onto one layer, cancelling in pairs
        let mut projected = vec![false; self.lattice.num_edges()];
        let mut vertical: Vec<(usize, usize)> = Vec::new();
        let mut first_desc = Vec::new();
        let mut second_desc = Vec::new();
        for (r, rho, desc) in [(first_r, &rho1, &mut first_desc), (second_r, &rho2, &mut second_desc)] {
            let rl = self.restricted(r);
            for g in (0..rho.len()).filter(|&g| rho[g]) {
                let what = rl.describe(g);
                match what {
                    GraphEdge::Horizontal { edge, .. } => projected[edge] ^= true,
                    GraphEdge::Vertical { vertex, layer } => vertical.push((vertex, layer)),
                }
                desc.push(what);
            }
        }

        let mut correction = Vec::new();
        for v in (0..self.lattice.num_vertices()).filter(|&v| self.lattice.color(v) == Color::Red) {
            let sides = self.lattice.red_edges(v);
            let mut mask = 0u8;
            for (dir, &e) in sides.iter().enumerate() {
                if projected[e] {
                    mask |= 1 << dir;
                }
            }
            if mask == 0 {
                continue;
            }
            let subset = self.lift[mask as usize].ok_or(Error::LiftingFailure { vertex: v })?;
            let faces = self.lattice.red_faces(v);
            correction.extend((0..4).filter(|c| subset & (1 << c) != 0).map(|c| faces[c]));
        }
        correction.sort_unstable();

        let cost = self.cost(&correction, &mut vertical, input);
        Ok(OrderTrace {
            order,
            first: first_desc,
            second: second_desc,
            correction,
            cost: cost.to_f64().unwrap_or(f64::NAN),
        })
    }

    /// Log-likelihood cost of a decoding: the cheapest layer of every
    /// corrected face plus every distinct vertical edge used.
    fn cost(&self, correction: &[usize], vertical: &mut Vec<(usize, usize)>, input: &LayeredInput<'_, R>) -> R {
        let nf = self.lattice.num_faces();
        let nv = self.lattice.num_vertices();
        let mut total = R::zero();
        for &f in correction {
            let mut best = face_cost(input.data.get(f));
            for t in 1..self.layers() {
                best = best.min(face_cost(input.data.get(t * nf + f)));
            }
            total = total + best;
        }
        vertical.sort_unstable();
        vertical.dedup();
        for &(v, t) in vertical.iter() {
            total = total + face_cost(input.checks.get(t * nv + v));
        }
        total
    }

    pub(crate) fn decode_layers(&mut self, input: &LayeredInput<'_, R>) -> Result<Decoded> {
        let nv = self.lattice.num_vertices();
        if input.defects.len() != self.layers() * nv {
            return Err(Error::invalid("defect vector does not match layers x vertices"));
        }
        let rb = self.defect_nodes(Restriction::RedBlue, input.defects)?;
        let rg = self.defect_nodes(Restriction::RedGreen, input.defects)?;
        let a = self.run_order(Order::RedBlueFirst, input, [&rb, &rg])?;
        let b = self.run_order(Order::RedGreenFirst, input, [&rb, &rg])?;
        let chosen = if b.cost < a.cost { Order::RedGreenFirst } else { Order::RedBlueFirst };
        let correction = if chosen == Order::RedBlueFirst { a.correction.clone() } else { b.correction.clone() };
        Ok(Decoded {
            correction,
            trace: DecodeTrace { defects_red_blue: rb, defects_red_green: rg, orders: vec![a, b], chosen },
        })
    }
}

/// Restriction decoder for a single round of perfect check measurements.
#[derive(Debug, Clone)]
pub struct RestrictionDecoder<'a, R> {
    inner: LayeredDecoder<'a, R>,
}

impl<'a, R: Real> RestrictionDecoder<'a, R> {
    pub fn new(lattice: &'a DualLattice) -> Result<Self> {
        Ok(Self { inner: LayeredDecoder::new(lattice, 1)? })
    }

    /// Decode a vertex syndrome using per-face flip probabilities. Pass
    /// [`Reliabilities::Uniform`] to decode without analog information.
    pub fn decode(&mut self, syndrome: &[bool], reliabilities: Reliabilities<'_, R>) -> Result<Decoded> {
        let lattice = self.inner.lattice();
        if syndrome.len() != lattice.num_vertices() {
            return Err(Error::invalid("syndrome length does not match the lattice"));
        }
        if let Reliabilities::Analog(p) = reliabilities {
            if p.len() != lattice.num_faces() {
                return Err(Error::invalid("reliability length does not match the lattice"));
            }
        }
        self.inner.decode_layers(&LayeredInput {
            defects: syndrome,
            data: reliabilities,
            checks: Reliabilities::Uniform(R::lit(0.5)),
        })
    }
}
