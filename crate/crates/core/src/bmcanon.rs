//! Canonical forms and automorphism groups of binary matrices with colored
//! rows and columns.
//!
//! Two matrices are isomorphic when a color-preserving permutation of the
//! columns maps the multiset of colored rows of one onto that of the other.
//! Rows carry no identity of their own.
//!
//! The engine is a partition-refinement search. Columns and rows are kept in
//! ordered partitions that are refined until equitable (every column of a
//! cell meets every row cell in the same number of ones, and vice versa).
//! When columns are not yet discrete, the first largest column cell is
//! split by individualizing each of its members in turn. Each leaf of this
//! tree yields a column order; the leaf matrix is the input with columns in
//! that order and rows sorted by `(color, bits)`.
//!
//! Each node records a hash of its refinement trace. Leaves are ranked by
//! their trace sequence first and by leaf matrix second; the canonical form
//! is the least leaf. Traces let whole subtrees be skipped, and equal leaf
//! matrices give automorphisms, which prune children lying in an orbit
//! already explored. The group order is the product of the orbit lengths of
//! the first path's children under the corresponding pointwise stabilizers.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::bits::{words_for, BitMatrix};
use crate::error::{Error, Result};

/// Default limit on search-tree nodes per canonicalization.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredBinaryMatrix {
    bits: BitMatrix,
    row_colors: Vec<u32>,
    col_colors: Vec<u32>,
}

impl ColoredBinaryMatrix {
    pub fn new(bits: BitMatrix, row_colors: Vec<u32>, col_colors: Vec<u32>) -> Result<Self> {
        if row_colors.len() != bits.rows() || col_colors.len() != bits.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with {} row colors and {} column colors",
                bits.rows(),
                bits.cols(),
                row_colors.len(),
                col_colors.len()
            )));
        }
        Ok(ColoredBinaryMatrix {
            bits,
            row_colors,
            col_colors,
        })
    }

    /// All rows and columns colored 0.
    pub fn uncolored(bits: BitMatrix) -> Self {
        let (r, c) = (bits.rows(), bits.cols());
        ColoredBinaryMatrix {
            bits,
            row_colors: vec![0; r],
            col_colors: vec![0; c],
        }
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn row_colors(&self) -> &[u32] {
        &self.row_colors
    }

    pub fn col_colors(&self) -> &[u32] {
        &self.col_colors
    }

    pub fn rows(&self) -> usize {
        self.bits.rows()
    }

    pub fn cols(&self) -> usize {
        self.bits.cols()
    }

    /// Column `c` moves to position `perm[c]`; rows keep their order.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let mut col_colors = vec![0; self.cols()];
        for (c, &p) in perm.iter().enumerate() {
            col_colors[p] = self.col_colors[c];
        }
        ColoredBinaryMatrix {
            bits: self.bits.permute_columns(perm),
            row_colors: self.row_colors.clone(),
            col_colors,
        }
    }

    /// Rows reordered so that new row `i` is old row `order[i]`.
    pub fn reorder_rows(&self, order: &[usize]) -> Self {
        ColoredBinaryMatrix {
            bits: self.bits.select_rows(order),
            row_colors: order.iter().map(|&r| self.row_colors[r]).collect(),
            col_colors: self.col_colors.clone(),
        }
    }

    /// The matrix read with columns in the order `labeling` (position `i`
    /// holds original column `labeling[i]`), rows sorted.
    pub fn relabeled(&self, labeling: &[usize]) -> CanonicalMatrix {
        let cols = self.cols();
        let words = words_for(cols);
        let mut position = vec![0usize; cols];
        for (i, &c) in labeling.iter().enumerate() {
            position[c] = i;
        }
        let mut rows: Vec<(u32, Vec<u64>)> = (0..self.rows())
            .map(|r| {
                let mut w = vec![0u64; words];
                for c in self.bits.row_ones(r) {
                    let p = position[c];
                    w[p / 64] |= 1u64 << (63 - p % 64);
                }
                (self.row_colors[r], w)
            })
            .collect();
        rows.sort_unstable();
        CanonicalMatrix {
            cols,
            col_colors: labeling.iter().map(|&c| self.col_colors[c]).collect(),
            rows,
        }
    }

    /// True iff `perm` maps the colored row multiset onto itself and
    /// preserves column colors.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        crate::lincode::is_permutation(perm)
            && perm.len() == self.cols()
            && (0..self.cols()).all(|c| self.col_colors[c] == self.col_colors[perm[c]])
            && self.relabeled(&identity(self.cols())) == self.permute_columns(perm).relabeled(&identity(self.cols()))
    }
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Column colors followed by the sorted rows; columns are packed most
/// significant bit first so word order is bit-string order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalMatrix {
    cols: usize,
    col_colors: Vec<u32>,
    rows: Vec<(u32, Vec<u64>)>,
}

impl CanonicalMatrix {
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn col_colors(&self) -> &[u32] {
        &self.col_colors
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].1[c / 64] >> (63 - c % 64) & 1 == 1
    }

    pub fn row_color(&self, r: usize) -> u32 {
        self.rows[r].0
    }

    /// Text form used as a deduplication key: a header with the dimensions
    /// and column colors, then one `color:bits` line per row in sorted order.
    pub fn serialize(&self) -> String {
        let mut s = String::with_capacity(self.rows.len() * (self.cols + 4) + 16);
        let _ = write!(s, "{}x{}", self.rows.len(), self.cols);
        for c in &self.col_colors {
            let _ = write!(s, " {}", c);
        }
        s.push('\n');
        for r in 0..self.rows.len() {
            let _ = write!(s, "{}:", self.rows[r].0);
            s.extend((0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct CanonResult {
    pub canonical: CanonicalMatrix,
    /// Canonical position `i` holds input column `labeling[i]`.
    pub labeling: Vec<usize>,
    /// Automorphism generators; `g[c]` is the image of column `c`.
    pub generators: Vec<Vec<usize>>,
    pub group_order: BigUint,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

impl CanonResult {
    pub fn group_is_trivial(&self) -> bool {
        self.group_order == BigUint::from(1u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonOptions {
    pub node_budget: u64,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

pub fn canonical_form(m: &ColoredBinaryMatrix) -> Result<CanonResult> {
    canonical_form_with(m, CanonOptions::default())
}

pub fn canonical_form_with(m: &ColoredBinaryMatrix, opts: CanonOptions) -> Result<CanonResult> {
    Search::new(m, opts).run()
}

/// Column permutation `σ` with `σ[c1] = c2` mapping `m1` onto `m2`, if any.
pub fn is_isomorphic(m1: &ColoredBinaryMatrix, m2: &ColoredBinaryMatrix) -> Result<Option<Vec<usize>>> {
    is_isomorphic_with(m1, m2, CanonOptions::default())
}

pub fn is_isomorphic_with(
    m1: &ColoredBinaryMatrix,
    m2: &ColoredBinaryMatrix,
    opts: CanonOptions,
) -> Result<Option<Vec<usize>>> {
    if m1.rows() != m2.rows() || m1.cols() != m2.cols() {
        return Ok(None);
    }
    let sorted = |v: &[u32]| {
        let mut v = v.to_vec();
        v.sort_unstable();
        v
    };
    if sorted(m1.row_colors()) != sorted(m2.row_colors()) || sorted(m1.col_colors()) != sorted(m2.col_colors()) {
        return Ok(None);
    }
    let c1 = canonical_form_with(m1, opts)?;
    let c2 = canonical_form_with(m2, opts)?;
    Ok(isomorphism_from(&c1, &c2))
}

/// The isomorphism between two canonicalized matrices, if their canonical
/// forms agree.
pub fn isomorphism_from(c1: &CanonResult, c2: &CanonResult) -> Option<Vec<usize>> {
    if c1.canonical != c2.canonical {
        return None;
    }
    let mut sigma = vec![0; c1.labeling.len()];
    for (&a, &b) in c1.labeling.iter().zip(&c2.labeling) {
        sigma[a] = b;
    }
    Some(sigma)
}

// ---------------------------------------------------------------------------
// partitions

#[derive(Debug, Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    /// cell start for every position
    start: Vec<u32>,
    /// cell length, valid at cell starts
    len: Vec<u32>,
    cells: usize,
}

impl Partition {
    /// Cells are the color classes in ascending color order.
    fn by_colors(colors: &[u32]) -> Partition {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&e| (colors[e as usize], e));
        let mut pos = vec![0u32; n];
        for (i, &e) in elems.iter().enumerate() {
            pos[e as usize] = i as u32;
        }
        let mut start = vec![0u32; n];
        let mut len = vec![0u32; n];
        let mut cells = 0;
        let mut i = 0;
        while i < n {
            let c = colors[elems[i] as usize];
            let mut j = i;
            while j < n && colors[elems[j] as usize] == c {
                start[j] = i as u32;
                j += 1;
            }
            len[i] = (j - i) as u32;
            cells += 1;
            i = j;
        }
        Partition {
            elems,
            pos,
            start,
            len,
            cells,
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    fn cell(&self, start: usize) -> &[u32] {
        &self.elems[start..start + self.len[start] as usize]
    }

    /// Splits every cell by `counts`, fragments in ascending count order.
    /// Calls `fragment(start)` for every new or shrunk cell and mixes the
    /// outcome into `trace`.
    fn split_by(&mut self, counts: &[u32], trace: &mut u64, mut fragment: impl FnMut(usize)) {
        let n = self.elems.len();
        let mut s = 0;
        while s < n {
            let l = self.len[s] as usize;
            let first = counts[self.elems[s] as usize];
            if l == 1 || self.elems[s..s + l].iter().all(|&e| counts[e as usize] == first) {
                *trace = mix(*trace, ((s as u64) << 32) | first as u64);
                s += l;
                continue;
            }
            self.elems[s..s + l].sort_by_key(|&e| (counts[e as usize], e));
            let mut i = s;
            while i < s + l {
                let c = counts[self.elems[i] as usize];
                let mut j = i;
                while j < s + l && counts[self.elems[j] as usize] == c {
                    self.start[j] = i as u32;
                    self.pos[self.elems[j] as usize] = j as u32;
                    j += 1;
                }
                self.len[i] = (j - i) as u32;
                *trace = mix(*trace, ((i as u64) << 40) ^ ((c as u64) << 20) ^ (j - i) as u64);
                fragment(i);
                i = j;
            }
            // one old cell became several
            self.cells += self.count_fragments(s, l) - 1;
            s += l;
        }
    }

    fn count_fragments(&self, s: usize, l: usize) -> usize {
        let mut count = 0;
        let mut i = s;
        while i < s + l {
            count += 1;
            i += self.len[i] as usize;
        }
        count
    }

    /// Moves `e` to the front of its cell and makes it a singleton.
    fn individualize(&mut self, e: u32) -> usize {
        let p = self.pos[e as usize] as usize;
        let s = self.start[p] as usize;
        let l = self.len[s] as usize;
        let front = self.elems[s];
        self.elems.swap(s, p);
        self.pos[e as usize] = s as u32;
        self.pos[front as usize] = p as u32;
        self.len[s] = 1;
        self.len[s + 1] = (l - 1) as u32;
        for i in s + 1..s + l {
            self.start[i] = (s + 1) as u32;
        }
        self.cells += 1;
        s
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = h ^ x.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(h << 6);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Rows,
    Cols,
}

#[derive(Debug, Clone)]
struct Node {
    cols: Partition,
    rows: Partition,
}

struct Leaf {
    trace: Vec<u64>,
    matrix: CanonicalMatrix,
    labeling: Vec<usize>,
    path: Vec<u32>,
}

enum Flow {
    Continue,
    /// Abandon the current subtree up to the node with this many
    /// individualized columns.
    Unwind(usize),
}

struct Search<'a> {
    m: &'a ColoredBinaryMatrix,
    opts: CanonOptions,
    nodes: u64,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    order: BigUint,
    // scratch
    counts_rows: Vec<u32>,
    counts_cols: Vec<u32>,
    mask: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(m: &'a ColoredBinaryMatrix, opts: CanonOptions) -> Self {
        Search {
            m,
            opts,
            nodes: 0,
            first: None,
            best: None,
            generators: Vec::new(),
            order: BigUint::from(1u32),
            counts_rows: vec![0; m.rows()],
            counts_cols: vec![0; m.cols()],
            mask: vec![0; words_for(m.cols())],
        }
    }

    fn run(mut self) -> Result<CanonResult> {
        let mut root = Node {
            cols: Partition::by_colors(&self.m.col_colors),
            rows: Partition::by_colors(&self.m.row_colors),
        };
        let mut queue = VecDeque::new();
        let mut s = 0;
        while s < root.cols.elems.len() {
            queue.push_back((Side::Cols, s));
            s += root.cols.len[s] as usize;
        }
        s = 0;
        while s < root.rows.elems.len() {
            queue.push_back((Side::Rows, s));
            s += root.rows.len[s] as usize;
        }
        let mut trace = Vec::new();
        let h = self.refine(&mut root, queue);
        trace.push(h);
        let mut path = Vec::new();
        self.explore(root, &mut trace, &mut path, true)?;

        let best = self.best.take().expect("search reaches at least one leaf");
        let cols = self.m.cols();
        Ok(CanonResult {
            canonical: best.matrix,
            labeling: best.labeling,
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|&x| x as usize).collect())
                .collect(),
            group_order: if cols == 0 { BigUint::from(1u32) } else { self.order },
            nodes: self.nodes,
        })
    }

    fn refine(&mut self, node: &mut Node, mut queue: VecDeque<(Side, usize)>) -> u64 {
        let mut trace = 0x5EED_u64;
        let mut queued_cols = vec![false; node.cols.elems.len()];
        let mut queued_rows = vec![false; node.rows.elems.len()];
        for &(side, s) in &queue {
            match side {
                Side::Cols => queued_cols[s] = true,
                Side::Rows => queued_rows[s] = true,
            }
        }
        while let Some((side, s)) = queue.pop_front() {
            match side {
                Side::Cols => {
                    queued_cols[s] = false;
                    self.mask.iter_mut().for_each(|w| *w = 0);
                    for &c in node.cols.cell(s) {
                        self.mask[c as usize / 64] |= 1 << (c % 64);
                    }
                    for r in 0..self.m.rows() {
                        self.counts_rows[r] = self
                            .m
                            .bits
                            .row_words(r)
                            .iter()
                            .zip(&self.mask)
                            .map(|(a, b)| (a & b).count_ones())
                            .sum();
                    }
                    trace = mix(trace, 1 + ((s as u64) << 1));
                    node.rows.split_by(&self.counts_rows, &mut trace, |f| {
                        if !queued_rows[f] {
                            queued_rows[f] = true;
                            queue.push_back((Side::Rows, f));
                        }
                    });
                }
                Side::Rows => {
                    queued_rows[s] = false;
                    self.counts_cols.iter_mut().for_each(|c| *c = 0);
                    for &r in node.rows.cell(s) {
                        for c in self.m.bits.row_ones(r as usize) {
                            self.counts_cols[c] += 1;
                        }
                    }
                    trace = mix(trace, (s as u64) << 1);
                    node.cols.split_by(&self.counts_cols, &mut trace, |f| {
                        if !queued_cols[f] {
                            queued_cols[f] = true;
                            queue.push_back((Side::Cols, f));
                        }
                    });
                }
            }
            if node.cols.is_discrete() && node.rows.is_discrete() {
                break;
            }
        }
        mix(trace, ((node.cols.cells as u64) << 32) | node.rows.cells as u64)
    }

    fn target_cell(&self, node: &Node) -> usize {
        let p = &node.cols;
        let (mut best, mut best_len) = (usize::MAX, 1);
        let mut s = 0;
        while s < p.elems.len() {
            let l = p.len[s] as usize;
            if l > best_len {
                best = s;
                best_len = l;
            }
            s += l;
        }
        best
    }

    fn explore(&mut self, node: Node, trace: &mut Vec<u64>, path: &mut Vec<u32>, on_first: bool) -> Result<Flow> {
        self.nodes += 1;
        if self.nodes > self.opts.node_budget {
            return Err(Error::BudgetExceeded(format!(
                "canonical form search passed {} nodes",
                self.opts.node_budget
            )));
        }
        if node.cols.is_discrete() {
            return Ok(self.leaf(&node, trace, path));
        }
        if !on_first && self.prunable(trace) {
            return Ok(Flow::Continue);
        }

        let level = path.len();
        let target = self.target_cell(&node);
        let mut children: Vec<u32> = node.cols.cell(target).to_vec();
        children.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        for &w in &children {
            if !explored.is_empty() {
                let uf = self.stabilizer_orbits(path);
                if explored.iter().any(|&x| uf.same(x as usize, w as usize)) {
                    continue;
                }
            }
            let mut child = node.clone();
            let s = child.cols.individualize(w);
            let mut queue = VecDeque::new();
            queue.push_back((Side::Cols, s));
            let h = self.refine(&mut child, queue);
            trace.push(mix(h, s as u64));
            path.push(w);
            let first_child = on_first && explored.is_empty();
            let flow = self.explore(child, trace, path, first_child);
            path.pop();
            trace.pop();
            explored.push(w);
            match flow? {
                Flow::Unwind(to) if to < level => return Ok(Flow::Unwind(to)),
                _ => {}
            }
        }
        if on_first {
            let uf = self.stabilizer_orbits(path);
            let size = uf.size_of(children[0] as usize);
            self.order *= BigUint::from(size);
        }
        Ok(Flow::Continue)
    }

    /// A subtree can be skipped when its trace already differs from the
    /// first leaf's (so it holds no automorphic image of it) and compares
    /// greater than the best leaf's trace (so it cannot improve the best).
    fn prunable(&self, trace: &[u64]) -> bool {
        let first = self.first.as_ref().expect("first leaf precedes other subtrees");
        let best = self.best.as_ref().expect("best leaf exists");
        let n = trace.len();
        let differs_from_first = first.trace.len() < n || first.trace[..n] != *trace;
        if !differs_from_first {
            return false;
        }
        let m = n.min(best.trace.len());
        match trace[..m].cmp(&best.trace[..m]) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => n > best.trace.len(),
        }
    }

    fn leaf(&mut self, node: &Node, trace: &[u64], path: &[u32]) -> Flow {
        let labeling: Vec<usize> = node.cols.elems.iter().map(|&c| c as usize).collect();
        let matrix = self.m.relabeled(&labeling);
        let leaf = Leaf {
            trace: trace.to_vec(),
            matrix,
            labeling,
            path: path.to_vec(),
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                trace: leaf.trace.clone(),
                matrix: leaf.matrix.clone(),
                labeling: leaf.labeling.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return Flow::Continue;
        };

        if first.trace == leaf.trace && first.matrix == leaf.matrix {
            let g = compose_map(&first.labeling, &leaf.labeling);
            let flow = unwind_for(&g, &first.path, &leaf.path);
            self.add_generator(g);
            return flow;
        }
        let best = self.best.as_ref().expect("best leaf exists");
        match (leaf.trace.as_slice(), &leaf.matrix).cmp(&(best.trace.as_slice(), &best.matrix)) {
            Ordering::Less => {
                self.best = Some(leaf);
                Flow::Continue
            }
            Ordering::Equal => {
                let g = compose_map(&best.labeling, &leaf.labeling);
                let flow = unwind_for(&g, &best.path, &leaf.path);
                self.add_generator(g);
                flow
            }
            Ordering::Greater => Flow::Continue,
        }
    }

    fn add_generator(&mut self, g: Vec<u32>) {
        if g.iter().enumerate().any(|(i, &x)| i as u32 != x) && !self.generators.contains(&g) {
            self.generators.push(g);
        }
    }

    /// Orbits of the group generated by the known generators that fix every
    /// column of `prefix`.
    fn stabilizer_orbits(&self, prefix: &[u32]) -> UnionFind {
        let mut uf = UnionFind::new(self.m.cols());
        for g in &self.generators {
            if prefix.iter().all(|&p| g[p as usize] == p) {
                for (i, &x) in g.iter().enumerate() {
                    uf.union(i, x as usize);
                }
            }
        }
        uf
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn compose_map(from: &[usize], to: &[usize]) -> Vec<u32> {
    let mut g = vec![0u32; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        g[a] = b as u32;
    }
    g
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// The rest of the subtree below the divergence point is an image of an
/// explored one only if `g` carries the earlier path onto the current one.
fn unwind_for(g: &[u32], earlier: &[u32], current: &[u32]) -> Flow {
    if earlier.len() == current.len() && earlier.iter().zip(current).all(|(&a, &b)| g[a as usize] == b) {
        Flow::Unwind(common_prefix(earlier, current))
    } else {
        Flow::Continue
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }

    fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    fn size_of(&self, a: usize) -> usize {
        self.size[self.find(a)]
    }
}

/// All elements of the permutation group generated by `generators` on `n`
/// points, or `None` if there are more than `cap`.
pub fn group_elements(generators: &[Vec<usize>], n: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    use std::collections::HashSet;
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in generators {
            let h: Vec<usize> = out[i].iter().map(|&x| g[x]).collect();
            if seen.insert(h.clone()) {
                if out.len() >= cap {
                    return None;
                }
                out.push(h);
            }
        }
        i += 1;
    }
    Some(out)
}
