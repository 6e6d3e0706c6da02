//! Canonical labeling: the lexicographically smallest sorted facet list over
//! all vertex relabelings, found by invariant-guided backtracking with a
//! sound lower bound, so the result always equals the brute-force minimum.
//!
//! Vertices are first grouped by (degree, sorted multiset of incident edge
//! valences); the search assigns new labels 1..n one vertex at a time in that
//! order. At each partial assignment every facet is completed optimistically
//! with the smallest labels still available, which bounds the final sorted
//! list from below; branches that cannot beat the best complete labeling are
//! cut. Near-neighborly complexes prune hard because wrong early labels close
//! oversized facets immediately.

use std::collections::BTreeMap;

use crate::complex::{Facet, Triangulation};

/// Labels are packed four to a `u64`, 16 bits each, so tuple order is integer
/// order. Fill values during bounding reach `n + 3`.
const MAX_CANON_VERTICES: usize = 65000;

/// A relabeling-invariant key for an isomorphism class.
///
/// Equality of the facet lists is the authoritative comparison; the 64-bit
/// digest is a stable FNV-1a over the canonical facet byte string, usable for
/// cross-run dedup stores and manifests.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: u32,
    packed: Vec<u64>,
    hash: u64,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Facets with canonical labels 1..n.
    pub fn facets(&self) -> Vec<Facet> {
        self.packed.iter().map(|&p| unpack(p)).collect()
    }

    pub fn hash64(&self) -> u64 {
        self.hash
    }

    /// Canonical facet-file emission: sorted facets, one per line, LF endings.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        for f in self.facets() {
            out.push_str(&format!("{} {} {} {}\n", f[0], f[1], f[2], f[3]));
        }
        out
    }

    pub fn to_triangulation(&self) -> Triangulation {
        Triangulation::from_facets(&self.facets()).expect("canonical relabeling is valid")
    }
}

fn unpack(p: u64) -> Facet {
    [
        (p >> 48) as u32,
        ((p >> 32) & 0xffff) as u32,
        ((p >> 16) & 0xffff) as u32,
        (p & 0xffff) as u32,
    ]
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

const LANE_SHIFT: [u32; 4] = [48, 32, 16, 0];

struct Search {
    n: usize,
    vert_facets: Vec<Vec<u32>>,
    /// Per facet: assigned labels packed into the leading lanes, zeros after.
    prefix: Vec<u64>,
    assigned_in: Vec<u8>,
    /// `fill_table[k][c]` completes a facet with `c` assigned labels at depth
    /// `k` optimistically with k+1, k+2, ... in its free lanes.
    fill_table: Vec<[u64; 5]>,
    cand_order: Vec<u16>,
    new_label: Vec<u16>,
    best: Option<Vec<u64>>,
    scratch: Vec<u64>,
}

impl Search {
    /// Labels are assigned in increasing order, so a new label always lands in
    /// the first free lane of each of its facets.
    fn assign(&mut self, v: usize, label: u64) {
        for i in 0..self.vert_facets[v].len() {
            let fi = self.vert_facets[v][i] as usize;
            let c = self.assigned_in[fi] as usize;
            self.prefix[fi] |= label << LANE_SHIFT[c];
            self.assigned_in[fi] = c as u8 + 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        for i in 0..self.vert_facets[v].len() {
            let fi = self.vert_facets[v][i] as usize;
            let c = self.assigned_in[fi] as usize - 1;
            self.prefix[fi] &= !(0xffffu64 << LANE_SHIFT[c]);
            self.assigned_in[fi] = c as u8;
        }
    }

    fn run(&mut self, assigned: usize) {
        self.scratch.clear();
        let fills = &self.fill_table[assigned];
        for fi in 0..self.prefix.len() {
            self.scratch
                .push(self.prefix[fi] + fills[self.assigned_in[fi] as usize]);
        }
        self.scratch.sort_unstable();
        if let Some(best) = &self.best {
            if self.scratch.as_slice() >= best.as_slice() {
                return;
            }
        }
        if assigned == self.n {
            self.best = Some(self.scratch.clone());
            return;
        }
        for i in 0..self.cand_order.len() {
            let v = self.cand_order[i] as usize;
            if self.new_label[v] != 0 {
                continue;
            }
            let label = assigned as u16 + 1;
            self.new_label[v] = label;
            self.assign(v, label as u64);
            self.run(assigned + 1);
            self.unassign(v);
            self.new_label[v] = 0;
        }
    }
}

fn build_fill_table(n: usize) -> Vec<[u64; 5]> {
    (0..=n)
        .map(|k| {
            let mut row = [0u64; 5];
            for (c, entry) in row.iter_mut().enumerate().take(4) {
                let mut fill = 0u64;
                for lane in c..4 {
                    fill |= (k as u64 + 1 + (lane - c) as u64) << LANE_SHIFT[lane];
                }
                *entry = fill;
            }
            row
        })
        .collect()
}

/// Computes the canonical form of a triangulation.
pub fn canonical_form(t: &Triangulation) -> CanonicalForm {
    let n = t.vertex_count();
    assert!(
        n <= MAX_CANON_VERTICES,
        "canonical labeling supports up to {MAX_CANON_VERTICES} vertices"
    );
    let index: BTreeMap<u32, u16> = t
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u16))
        .collect();
    let mut vert_facets: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (fi, f) in t.facets().iter().enumerate() {
        for v in f {
            vert_facets[index[v] as usize].push(fi as u32);
        }
    }

    // Invariant per vertex: (degree, sorted incident edge valences). Used only
    // to order candidates; correctness does not depend on it.
    let mut invariant: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); n];
    for &v in t.vertices() {
        let ns = t.neighbors(v).expect("vertex present");
        let mut valences: Vec<usize> = ns
            .iter()
            .map(|&u| t.edge_valence([v, u]).expect("edge present"))
            .collect();
        valences.sort_unstable();
        invariant[index[&v] as usize] = (ns.len(), valences);
    }
    let mut cand_order: Vec<u16> = (0..n as u16).collect();
    cand_order.sort_by(|&a, &b| {
        let (da, va) = &invariant[a as usize];
        let (db, vb) = &invariant[b as usize];
        db.cmp(da).then(va.cmp(vb)).then(a.cmp(&b))
    });

    let facet_count = t.facets().len();
    let mut search = Search {
        n,
        vert_facets,
        prefix: vec![0; facet_count],
        assigned_in: vec![0; facet_count],
        fill_table: build_fill_table(n),
        cand_order,
        new_label: vec![0; n],
        best: None,
        scratch: Vec::with_capacity(facet_count),
    };
    search.run(0);
    let packed = search.best.expect("search visits at least one leaf");
    let mut form = CanonicalForm {
        n: n as u32,
        packed,
        hash: 0,
    };
    form.hash = fnv1a64(form.emit().as_bytes());
    form
}

/// True iff the two triangulations are combinatorially isomorphic.
pub fn are_isomorphic(a: &Triangulation, b: &Triangulation) -> bool {
    if a.vertex_count() != b.vertex_count() || a.facets().len() != b.facets().len() {
        return false;
    }
    canonical_form(a) == canonical_form(b)
}
