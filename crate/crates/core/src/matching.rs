//! Shortest paths and exact matching.
//!
//! [`max_weight_matching`] is the O(n^3) primal-dual blossom algorithm
//! (Edmonds, with Galil's bookkeeping as laid out by Van Rantwijk). Minimum
//! weight perfect matching is obtained from it by asking for maximum
//! cardinality on complemented weights.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Weight;

const NONE: usize = usize::MAX;

/// Undirected multigraph topology in CSR form. Weights are supplied per call
/// so one topology serves every trial.
#[derive(Debug, Clone)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<[usize; 2]>,
    offsets: Vec<usize>,
    adj: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(num_nodes: usize, edges: Vec<[usize; 2]>) -> Result<Self> {
        let mut degree = vec![0usize; num_nodes + 1];
        for (i, &[a, b]) in edges.iter().enumerate() {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::invalid(format!("edge {i} ({a}, {b}) out of range")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = vec![0usize; num_nodes + 1];
        for v in 0..num_nodes {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![(0, 0); offsets[num_nodes]];
        for (e, &[a, b]) in edges.iter().enumerate() {
            adj[fill[a]] = (b, e);
            fill[a] += 1;
            adj[fill[b]] = (a, e);
            fill[b] += 1;
        }
        Ok(Self { num_nodes, edges, offsets, adj })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    /// `(neighbor, edge)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Reusable single-source Dijkstra state.
///
/// On equal tentative distance the predecessor edge with the smaller id is
/// kept, which makes reconstructed paths independent of heap order.
#[derive(Debug, Clone)]
pub struct Dijkstra<W> {
    dist: Vec<Option<W>>,
    pred: Vec<usize>,
    settled: Vec<bool>,
    touched: Vec<usize>,
    /// Min-heap on (distance key, node); stale entries are skipped.
    heap: BinaryHeap<Reverse<(u64, usize)>>,
    is_target: Vec<bool>,
    source: usize,
}

impl<W: Weight> Dijkstra<W> {
    pub fn new(num_nodes: usize) -> Self {
        Self {
            dist: vec![None; num_nodes],
            pred: vec![NONE; num_nodes],
            settled: vec![false; num_nodes],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
            is_target: vec![false; num_nodes],
            source: NONE,
        }
    }

    fn reset(&mut self, n: usize) {
        if self.dist.len() != n {
            *self = Self::new(n);
            return;
        }
        for &v in &self.touched {
            self.dist[v] = None;
            self.pred[v] = NONE;
            self.settled[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Run from `source`, stopping once every node in `targets` is settled
    /// (or the reachable component is exhausted). An empty target list runs
    /// to completion. Weights must be non-negative.
    pub fn run(&mut self, graph: &Graph, weights: &[W], source: usize, targets: &[usize]) {
        self.reset(graph.num_nodes());
        self.source = source;
        let mut remaining = targets.iter().filter(|&&t| t != source).count();
        for &t in targets {
            self.is_target[t] = true;
        }
        self.dist[source] = Some(W::zero());
        self.touched.push(source);
        self.heap.push(Reverse((W::zero().order_key(), source)));
        while let Some(Reverse((_, u))) = self.heap.pop() {
            if self.settled[u] {
                continue;
            }
            self.settled[u] = true;
            let d = self.dist[u].expect("queued nodes have a distance");
            if u != source && self.is_target[u] {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            for &(v, e) in graph.neighbors(u) {
                if self.settled[v] {
                    continue;
                }
                let nd = d + weights[e];
                let better = match self.dist[v] {
                    None => {
                        self.touched.push(v);
                        true
                    }
                    Some(old) => nd < old || (nd == old && e < self.pred[v]),
                };
                if better {
                    self.dist[v] = Some(nd);
                    self.pred[v] = e;
                    self.heap.push(Reverse((nd.order_key(), v)));
                }
            }
        }
        for &t in targets {
            self.is_target[t] = false;
        }
    }

    /// Distance to `v` if it was reached (exact only once `v` is settled).
    pub fn distance(&self, v: usize) -> Option<W> {
        if self.settled[v] {
            self.dist[v]
        } else {
            None
        }
    }

    /// Edge ids along the shortest path from the source to `v`, listed from
    /// `v` back towards the source.
    pub fn path_to(&self, graph: &Graph, v: usize) -> Option<Vec<usize>> {
        if !self.settled[v] {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = v;
        while cur != self.source {
            let e = self.pred[cur];
            out.push(e);
            let [a, b] = graph.endpoints(e);
            cur = if a == cur { b } else { a };
        }
        Some(out)
    }
}

/// Pairwise distances and paths among a set of source nodes.
#[derive(Debug, Clone)]
pub struct PathTable<W> {
    pub sources: Vec<usize>,
    dist: Vec<Option<W>>,
    /// Shortest-path predecessor edge of every graph node, one row per
    /// source except the last. Only nodes settled by that run are valid.
    pred: Vec<usize>,
    num_nodes: usize,
}

impl<W: Weight> PathTable<W> {
    pub fn distance(&self, i: usize, j: usize) -> Option<W> {
        self.dist[i * self.sources.len() + j]
    }

    /// Edges of the shortest path between sources `i` and `j` in the graph
    /// the table was built on.
    pub fn path(&self, graph: &Graph, i: usize, j: usize) -> Option<Vec<usize>> {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        if a == b {
            return Some(Vec::new());
        }
        self.distance(a, b)?;
        let row = &self.pred[a * self.num_nodes..(a + 1) * self.num_nodes];
        let (src, mut cur) = (self.sources[a], self.sources[b]);
        let mut out = Vec::new();
        while cur != src {
            let e = row[cur];
            out.push(e);
            let [x, y] = graph.endpoints(e);
            cur = if x == cur { y } else { x };
        }
        Some(out)
    }
}

/// Shortest paths between every pair of `sources`. Unreachable pairs have
/// no distance.
pub fn shortest_paths<W: Weight>(
    graph: &Graph,
    weights: &[W],
    sources: &[usize],
    solver: &mut Dijkstra<W>,
) -> Result<PathTable<W>> {
    if weights.len() != graph.num_edges() {
        return Err(Error::invalid("weight vector does not match edge count"));
    }
    if weights.iter().any(|w| !(*w >= W::zero())) {
        return Err(Error::invalid("edge weights must be non-negative"));
    }
    let k = sources.len();
    let n = graph.num_nodes();
    let mut dist = vec![None; k * k];
    let mut pred = vec![NONE; k.saturating_sub(1) * n];
    for i in 0..k {
        dist[i * k + i] = Some(W::zero());
        if i + 1 == k {
            break;
        }
        solver.run(graph, weights, sources[i], &sources[i + 1..]);
        for j in i + 1..k {
            let d = solver.distance(sources[j]);
            dist[i * k + j] = d;
            dist[j * k + i] = d;
        }
        let row = &mut pred[i * n..(i + 1) * n];
        for &v in &solver.touched {
            row[v] = solver.pred[v];
        }
    }
    Ok(PathTable { sources: sources.to_vec(), dist, pred, num_nodes: n })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching<W> {
    /// Matched index pairs `(i, j)` with `i < j`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub total_weight: W,
}

/// Exact minimum-weight perfect matching on the complete graph over
/// `0..n`. `weight(i, j)` returns `None` for forbidden pairs.
pub fn min_weight_perfect_matching<W: Weight>(
    n: usize,
    weight: impl Fn(usize, usize) -> Option<W>,
) -> Result<Matching<W>> {
    if n % 2 != 0 {
        return Err(Error::Parity { count: n, context: "matching input".into() });
    }
    if n == 0 {
        return Ok(Matching { pairs: Vec::new(), total_weight: W::zero() });
    }
    let mut raw = Vec::with_capacity(n * (n - 1) / 2);
    let mut max_w = W::zero();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(w) = weight(i, j) {
                if !(w >= W::zero()) {
                    return Err(Error::invalid(format!("negative or NaN weight between {i} and {j}")));
                }
                max_w = max_w.max_of(w);
                raw.push((i, j, w));
            }
        }
    }
    let offset = max_w + W::one();
    let edges: Vec<(usize, usize, W)> = raw.iter().map(|&(i, j, w)| (i, j, offset - w)).collect();
    let mate = max_weight_matching(n, &edges, true);
    let mut pairs = Vec::with_capacity(n / 2);
    for (i, m) in mate.iter().enumerate() {
        match *m {
            Some(j) if i < j => pairs.push((i, j)),
            Some(_) => {}
            None => {
                return Err(Error::ContractViolation(format!("no perfect matching covers node {i}")));
            }
        }
    }
    let mut total = W::zero();
    for &(i, j) in &pairs {
        total = total + weight(i, j).expect("matched pair has an edge");
    }
    Ok(Matching { pairs, total_weight: total })
}

/// Maximum-weight matching on a general graph with `n` nodes.
///
/// With `max_cardinality` the result is the heaviest among matchings of
/// maximum cardinality. Returns the mate of each node. Integer weights keep
/// the computation exact.
pub fn max_weight_matching<W: Weight>(n: usize, edges: &[(usize, usize, W)], max_cardinality: bool) -> Vec<Option<usize>> {
    if edges.is_empty() || n == 0 {
        return vec![None; n];
    }
    let mut m = Blossom::new(n, edges, max_cardinality);
    m.solve();
    m.mate
        .iter()
        .map(|&p| if p == NONE { None } else { Some(m.endpoint[p]) })
        .collect()
}

struct Blossom<'a, W> {
    nv: usize,
    edges: &'a [(usize, usize, W)],
    max_cardinality: bool,
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<W>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a, W: Weight> Blossom<'a, W> {
    fn new(n: usize, edges: &'a [(usize, usize, W)], max_cardinality: bool) -> Self {
        let mut maxweight = W::zero();
        for &(_, _, w) in edges {
            maxweight = maxweight.max_of(w);
        }
        let mut endpoint = Vec::with_capacity(2 * edges.len());
        let mut neighbend = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            endpoint.push(i);
            endpoint.push(j);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut blossombase: Vec<usize> = (0..n).collect();
        blossombase.extend(std::iter::repeat(NONE).take(n));
        let mut dualvar = vec![maxweight; n];
        dualvar.extend(std::iter::repeat(W::zero()).take(n));
        Self {
            nv: n,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; n],
            label: vec![0; 2 * n],
            labelend: vec![NONE; 2 * n],
            inblossom: (0..n).collect(),
            blossomparent: vec![NONE; 2 * n],
            blossomchilds: vec![Vec::new(); 2 * n],
            blossombase,
            blossomendps: vec![Vec::new(); 2 * n],
            bestedge: vec![NONE; 2 * n],
            blossombestedges: vec![None; 2 * n],
            unusedblossoms: (n..2 * n).collect(),
            dualvar,
            allowedge: vec![false; edges.len()],
            queue: Vec::new(),
        }
    }

    #[inline]
    fn slack(&self, k: usize) -> W {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - w.double()
    }

    fn leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nv {
            out.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                self.leaves(t, out);
            }
        }
    }

    fn leaves_of(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.leaves(b, &mut out);
        out
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let leaves = self.leaves_of(b);
            self.queue.extend(leaves);
        } else if t == 2 {
            let base = self.blossombase[b];
            let mb = self.mate[base];
            debug_assert!(mb != NONE);
            self.assign_label(self.endpoint[mb], 1, mb ^ 1);
        }
    }

    fn scan_blossom(&mut self, mut v: usize, mut w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert_eq!(self.label[b], 2);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("free blossom slot");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        debug_assert_eq!(self.label[bb], 1);
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = W::zero();
        for leaf in self.leaves_of(b) {
            if self.label[self.inblossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        let mut bestedgeto = vec![NONE; 2 * self.nv];
        for &sub in &path {
            let lists: Vec<Vec<usize>> = match self.blossombestedges[sub].take() {
                Some(list) => vec![list],
                None => self
                    .leaves_of(sub)
                    .into_iter()
                    .map(|leaf| self.neighbend[leaf].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for list in lists {
                for kk in list {
                    let (mut i, mut j, _) = self.edges[kk];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(kk) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = kk;
                    }
                }
            }
            self.bestedge[sub] = NONE;
        }
        let best: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &kk in &best {
            if self.bestedge[b] == NONE || self.slack(kk) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = kk;
            }
        }
        self.blossombestedges[b] = Some(best);
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nv {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == W::zero() {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.leaves_of(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            let len = childs.len() as isize;
            let at = |j: isize| j.rem_euclid(len) as usize;
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let mut j = childs.iter().position(|&c| c == entrychild).expect("entry child") as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 == 1 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let endps = self.blossomendps[b].clone();
            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = endps[at(j - endptrick as isize)];
                self.label[self.endpoint[q ^ endptrick ^ 1]] = 0;
                self.assign_label(self.endpoint[p ^ 1], 2, p);
                self.allowedge[q / 2] = true;
                j += jstep;
                p = endps[at(j - endptrick as isize)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = childs[at(j)];
            let ep = self.endpoint[p ^ 1];
            self.label[ep] = 2;
            self.label[bv] = 2;
            self.labelend[ep] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while childs[at(j)] != entrychild {
                let bv = childs[at(j)];
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let labelled = self.leaves_of(bv).into_iter().find(|&v| self.label[v] != 0);
                if let Some(v) = labelled {
                    debug_assert_eq!(self.label[v], 2);
                    self.label[v] = 0;
                    let mb = self.mate[self.blossombase[bv]];
                    self.label[self.endpoint[mb]] = 0;
                    self.assign_label(v, 2, self.labelend[v]);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nv {
            self.augment_blossom(t, v);
        }
        let len = self.blossomchilds[b].len() as isize;
        let at = |j: isize| j.rem_euclid(len) as usize;
        let i = self.blossomchilds[b].iter().position(|&c| c == t).expect("child") as isize;
        let mut j = i;
        let (jstep, endptrick): (isize, usize) = if i & 1 == 1 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t1 = self.blossomchilds[b][at(j)];
            let p = self.blossomendps[b][at(j - endptrick as isize)] ^ endptrick;
            if t1 >= self.nv {
                self.augment_blossom(t1, self.endpoint[p]);
            }
            j += jstep;
            let t2 = self.blossomchilds[b][at(j)];
            if t2 >= self.nv {
                self.augment_blossom(t2, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        let i = i as usize;
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], 1);
                if bs >= self.nv {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], 2);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                if bt >= self.nv {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        let n = self.nv;
        for _ in 0..n {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for b in n..2 * n {
                self.blossombestedges[b] = None;
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..n {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while !augmented {
                    let Some(v) = self.queue.pop() else { break };
                    debug_assert_eq!(self.label[self.inblossom[v]], 1);
                    for idx in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][idx];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = W::zero();
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= W::zero() {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                }
                if augmented {
                    break;
                }

                let mut deltatype = 0u8;
                let mut delta = W::zero();
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = self.min_vertex_dual();
                }
                for v in 0..n {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == 0 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * n {
                    if self.blossomparent[b] == NONE && self.label[b] == 1 && self.bestedge[b] != NONE {
                        let d = self.slack(self.bestedge[b]).half();
                        if deltatype == 0 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == 0 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == 0 {
                    deltatype = 1;
                    delta = W::zero().max_of(self.min_vertex_dual());
                }

                for v in 0..n {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] = self.dualvar[v] - delta,
                        2 => self.dualvar[v] = self.dualvar[v] + delta,
                        _ => {}
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            1 => self.dualvar[b] = self.dualvar[b] + delta,
                            2 => self.dualvar[b] = self.dualvar[b] - delta,
                            _ => {}
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        self.queue.push(i);
                    }
                    _ => self.expand_blossom(deltablossom, false),
                }
            }
            if !augmented {
                break;
            }
            for b in n..2 * n {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b] == W::zero()
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    fn min_vertex_dual(&self) -> W {
        let mut m = self.dualvar[0];
        for &d in &self.dualvar[1..self.nv] {
            if d < m {
                m = d;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_distance() {
        let g = Graph::new(3, vec![[0, 1], [1, 2]]).unwrap();
        let mut s = Dijkstra::new(3);
        let t = shortest_paths(&g, &[1i64, 1], &[0, 2], &mut s).unwrap();
        assert_eq!(t.distance(0, 0), Some(0));
        assert_eq!(t.distance(0, 1), Some(2));
        assert_eq!(t.path(&g, 0, 1).unwrap().len(), 2);
    }

    #[test]
    fn disconnected_is_infinite() {
        let g = Graph::new(4, vec![[0, 1], [2, 3]]).unwrap();
        let mut s = Dijkstra::new(4);
        let t = shortest_paths(&g, &[1.0, 1.0], &[0, 3], &mut s).unwrap();
        assert_eq!(t.distance(0, 1), None);
        assert!(shortest_paths(&g, &[1.0, -1.0], &[0, 3], &mut s).is_err());
    }

    #[test]
    fn equal_length_paths_prefer_lower_edge_ids() {
        // square 0-1-2-3-0: two routes of equal weight from 0 to 2
        let g = Graph::new(4, vec![[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap();
        let mut s = Dijkstra::new(4);
        s.run(&g, &[1i64; 4], 0, &[2]);
        let mut p = s.path_to(&g, 2).unwrap();
        p.sort_unstable();
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn matching_small_cases() {
        let m = min_weight_perfect_matching(2, |_, _| Some(3i64)).unwrap();
        assert_eq!(m.pairs, vec![(0, 1)]);
        assert_eq!(m.total_weight, 3);
        // four collinear points at 0, 1, 3, 4
        let pos = [0i64, 1, 3, 4];
        let m = min_weight_perfect_matching(4, |i, j| Some((pos[i] - pos[j]).abs())).unwrap();
        assert_eq!(m.pairs, vec![(0, 1), (2, 3)]);
        assert!(matches!(
            min_weight_perfect_matching(3, |_, _| Some(1i64)),
            Err(Error::Parity { count: 3, .. })
        ));
        assert_eq!(min_weight_perfect_matching::<i64>(0, |_, _| None).unwrap().pairs, vec![]);
    }

    #[test]
    fn max_weight_known_instances() {
        // classic cases from the reference test-suite of the algorithm
        assert_eq!(max_weight_matching(2, &[(0, 1, 1i64)], false), vec![Some(1), Some(0)]);
        assert_eq!(
            max_weight_matching(4, &[(1, 2, 10i64), (2, 3, 11)], false),
            vec![None, None, Some(3), Some(2)]
        );
        assert_eq!(
            max_weight_matching(5, &[(1, 2, 5i64), (2, 3, 11), (3, 4, 5)], false),
            vec![None, None, Some(3), Some(2), None]
        );
        // maximum cardinality beats weight
        let e = [(1, 2, 2i64), (1, 3, -2), (2, 3, 1), (2, 4, -1), (3, 4, -6)];
        assert_eq!(max_weight_matching(5, &e, false), vec![None, Some(2), Some(1), None, None]);
        assert_eq!(max_weight_matching(5, &e, true), vec![None, Some(3), Some(4), Some(1), Some(2)]);
        // blossom with an S-vertex relabelled as T during expansion
        let e = [(1, 2, 9i64), (1, 3, 8), (2, 3, 10), (1, 4, 5), (4, 5, 4), (1, 6, 3)];
        assert_eq!(
            max_weight_matching(7, &e, false),
            vec![None, Some(6), Some(3), Some(2), Some(5), Some(4), Some(1)]
        );
        // nested blossoms, expand recursively
        let e = [
            (1, 2, 40i64),
            (1, 3, 40),
            (2, 3, 60),
            (2, 4, 55),
            (3, 5, 55),
            (4, 5, 50),
            (1, 8, 15),
            (5, 7, 30),
            (7, 6, 10),
            (8, 10, 10),
            (4, 9, 30),
        ];
        assert_eq!(
            max_weight_matching(11, &e, false),
            vec![None, Some(2), Some(1), Some(5), Some(9), Some(3), Some(7), Some(6), Some(10), Some(4), Some(8)]
        );
    }
}
