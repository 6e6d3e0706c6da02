//! Immutable triangulation values with cached skeleta and validity checks.
//!
//! A [`Triangulation`] is a closed 3-pseudomanifold given by its facet list:
//! every facet is a 4-set of positive vertex labels, every triangle lies in
//! exactly two facets, and the Euler relation V - E + F - T = 0 holds. All
//! derived skeleta (edges, triangles, vertex stars) are computed once at
//! construction; every operation afterwards is a pure query.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A facet: four vertex labels, ascending.
pub type Facet = [u32; 4];
/// A triangle: three vertex labels, ascending.
pub type Triangle = [u32; 3];
/// An edge: two vertex labels, ascending.
pub type Edge = [u32; 2];

pub fn sort4(mut f: Facet) -> Facet {
    f.sort_unstable();
    f
}

pub fn sort3(mut t: Triangle) -> Triangle {
    t.sort_unstable();
    t
}

pub fn sort2(mut e: Edge) -> Edge {
    e.sort_unstable();
    e
}

fn join(labels: &[u32]) -> String {
    labels
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Face counts by dimension. `v - e + f - t == 0` for every valid triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FVector {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub t: usize,
}

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.v as i64 - self.e as i64 + self.f as i64 - self.t as i64
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} {} {} {}", self.v, self.e, self.f, self.t)
    }
}

/// The boundary 2-complex around a vertex: all triangles `t` with `t ∪ {v}` a facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLink {
    pub vertex: u32,
    pub link: Vec<Triangle>,
}

impl VertexLink {
    /// Vertices appearing in the link, ascending.
    pub fn vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.link.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// True iff every link edge lies in exactly two link triangles.
    pub fn is_closed(&self) -> bool {
        let mut counts: BTreeMap<Edge, usize> = BTreeMap::new();
        for t in &self.link {
            for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        counts.values().all(|&c| c == 2)
    }
}

/// All facets containing a given edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStar {
    pub edge: Edge,
    pub incident: Vec<Facet>,
}

impl EdgeStar {
    pub fn valence(&self) -> usize {
        self.incident.len()
    }
}

/// Facet-incidence lists for all simplices of one dimension, stored flat:
/// sorted keys with an offset table into one incidence array.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IncidenceMap<const K: usize> {
    keys: Vec<[u32; K]>,
    offsets: Vec<u32>,
    incidence: Vec<u32>,
}

impl<const K: usize> IncidenceMap<K> {
    fn build(mut items: Vec<([u32; K], u32)>) -> Self {
        items.sort_unstable();
        let mut keys = Vec::new();
        let mut offsets = vec![0u32];
        let mut incidence = Vec::with_capacity(items.len());
        for (key, facet) in items {
            if keys.last() != Some(&key) {
                keys.push(key);
                offsets.push(incidence.len() as u32);
            }
            incidence.push(facet);
            *offsets.last_mut().expect("nonempty") = incidence.len() as u32;
        }
        IncidenceMap {
            keys,
            offsets,
            incidence,
        }
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn get(&self, key: &[u32; K]) -> Option<&[u32]> {
        let i = self.keys.binary_search(key).ok()?;
        Some(&self.incidence[self.offsets[i] as usize..self.offsets[i + 1] as usize])
    }

    fn iter(&self) -> impl Iterator<Item = (&[u32; K], &[u32])> {
        self.keys.iter().enumerate().map(move |(i, key)| {
            (
                key,
                &self.incidence[self.offsets[i] as usize..self.offsets[i + 1] as usize],
            )
        })
    }
}

/// An immutable triangulation of a closed 3-pseudomanifold.
///
/// Vertex labels are positive and need not be contiguous (4-1 flips leave
/// gaps); [`Triangulation::normalized`] compacts them. Values are cheap to
/// clone and safe to share between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    facets: Vec<Facet>,
    vertices: Vec<u32>,
    edges: IncidenceMap<2>,
    triangles: IncidenceMap<3>,
    vertex_facets: IncidenceMap<1>,
}

impl Triangulation {
    /// Validates and builds a triangulation from raw facet tuples, preserving
    /// the given labels. Pass the result through [`Triangulation::normalized`]
    /// to relabel contiguously.
    pub fn from_facets(raw: &[[u32; 4]]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut facets: Vec<Facet> = Vec::with_capacity(raw.len());
        for f in raw {
            let s = sort4(*f);
            if s[0] == 0 || s[0] == s[1] || s[1] == s[2] || s[2] == s[3] {
                return Err(Error::BadFacetArity(join(f)));
            }
            facets.push(s);
        }
        facets.sort_unstable();
        for w in facets.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateFacet(join(&w[0])));
            }
        }
        Self::build(facets)
    }

    /// `from_facets` with labels relabeled to 1..n in ascending label order.
    pub fn from_facets_normalized(raw: &[[u32; 4]]) -> Result<Self> {
        Ok(Self::from_facets(raw)?.normalized())
    }

    fn build(facets: Vec<Facet>) -> Result<Self> {
        let t = facets.len();
        let mut edge_items: Vec<([u32; 2], u32)> = Vec::with_capacity(6 * t);
        let mut tri_items: Vec<([u32; 3], u32)> = Vec::with_capacity(4 * t);
        let mut vert_items: Vec<([u32; 1], u32)> = Vec::with_capacity(4 * t);
        for (i, f) in facets.iter().enumerate() {
            let [a, b, c, d] = *f;
            let i = i as u32;
            for v in *f {
                vert_items.push(([v], i));
            }
            for e in [[a, b], [a, c], [a, d], [b, c], [b, d], [c, d]] {
                edge_items.push((e, i));
            }
            for tri in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
                tri_items.push((tri, i));
            }
        }
        let edges = IncidenceMap::build(edge_items);
        let triangles = IncidenceMap::build(tri_items);
        let vertex_facets = IncidenceMap::build(vert_items);
        for (tri, inc) in triangles.iter() {
            if inc.len() != 2 {
                return Err(Error::NonPseudomanifold(join(tri), inc.len()));
            }
        }
        let vertices: Vec<u32> = vertex_facets.keys.iter().map(|k| k[0]).collect();
        let tri = Triangulation {
            facets,
            vertices,
            edges,
            triangles,
            vertex_facets,
        };
        let chi = tri.f_vector().euler_characteristic();
        if chi != 0 {
            return Err(Error::EulerViolation(chi));
        }
        Ok(tri)
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn max_label(&self) -> u32 {
        *self.vertices.last().expect("nonempty")
    }

    pub fn f_vector(&self) -> FVector {
        FVector {
            v: self.vertices.len(),
            e: self.edges.len(),
            f: self.triangles.len(),
            t: self.facets.len(),
        }
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.vertex_facets.get(&[v]).is_some()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.get(&sort2(e)).is_some()
    }

    pub fn contains_triangle(&self, t: Triangle) -> bool {
        self.triangles.get(&sort3(t)).is_some()
    }

    pub fn contains_facet(&self, f: Facet) -> bool {
        self.facets.binary_search(&sort4(f)).is_ok()
    }

    /// Number of facets containing the edge.
    pub fn edge_valence(&self, e: Edge) -> Result<usize> {
        let e = sort2(e);
        self.edges
            .get(&e)
            .map(|inc| inc.len())
            .ok_or_else(|| Error::EdgeNotPresent(join(&e)))
    }

    pub fn edge_star(&self, e: Edge) -> Result<EdgeStar> {
        let e = sort2(e);
        let inc = self
            .edges
            .get(&e)
            .ok_or_else(|| Error::EdgeNotPresent(join(&e)))?;
        Ok(EdgeStar {
            edge: e,
            incident: inc.iter().map(|&i| self.facets[i as usize]).collect(),
        })
    }

    /// The two facets containing a triangle.
    pub fn triangle_facets(&self, t: Triangle) -> Result<[Facet; 2]> {
        let t = sort3(t);
        let inc = self
            .triangles
            .get(&t)
            .ok_or_else(|| Error::TriangleNotPresent(join(&t)))?;
        Ok([self.facets[inc[0] as usize], self.facets[inc[1] as usize]])
    }

    pub fn link_of_vertex(&self, v: u32) -> Result<VertexLink> {
        let inc = self
            .vertex_facets
            .get(&[v])
            .ok_or(Error::VertexNotPresent(v))?;
        let mut link: Vec<Triangle> = inc
            .iter()
            .map(|&i| {
                let f = self.facets[i as usize];
                let mut t = [0u32; 3];
                let mut k = 0;
                for w in f {
                    if w != v {
                        t[k] = w;
                        k += 1;
                    }
                }
                t
            })
            .collect();
        link.sort_unstable();
        Ok(VertexLink { vertex: v, link })
    }

    /// Number of neighbors of `v` in the 1-skeleton.
    pub fn vertex_degree(&self, v: u32) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    /// Neighbors of `v` in the 1-skeleton, ascending.
    pub fn neighbors(&self, v: u32) -> Result<Vec<u32>> {
        let inc = self
            .vertex_facets
            .get(&[v])
            .ok_or(Error::VertexNotPresent(v))?;
        let mut ns: Vec<u32> = inc
            .iter()
            .flat_map(|&i| self.facets[i as usize].into_iter())
            .filter(|&w| w != v)
            .collect();
        ns.sort_unstable();
        ns.dedup();
        Ok(ns)
    }

    pub fn facet_count_of_vertex(&self, v: u32) -> Result<usize> {
        self.vertex_facets
            .get(&[v])
            .map(|inc| inc.len())
            .ok_or(Error::VertexNotPresent(v))
    }

    /// True iff the 1-skeleton is the complete graph on the vertex set.
    pub fn is_neighborly(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * (n - 1) / 2
    }

    /// Edges with their valences, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&Edge, usize)> {
        self.edges.iter().map(|(e, inc)| (e, inc.len()))
    }

    /// Triangles in lexicographic order.
    pub fn triangles(&self) -> impl Iterator<Item = &Triangle> {
        self.triangles.keys.iter()
    }

    /// Relabels vertices to 1..n, preserving their order.
    pub fn normalized(&self) -> Triangulation {
        let map: BTreeMap<u32, u32> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32 + 1))
            .collect();
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| sort4([map[&f[0]], map[&f[1]], map[&f[2]], map[&f[3]]]))
            .collect();
        Triangulation::from_facets(&facets).expect("relabeling preserves validity")
    }

    /// Applies a vertex permutation given as a label map. Labels absent from
    /// the map keep their value.
    pub fn relabeled(&self, map: &BTreeMap<u32, u32>) -> Result<Triangulation> {
        let get = |v: u32| map.get(&v).copied().unwrap_or(v);
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| sort4([get(f[0]), get(f[1]), get(f[2]), get(f[3])]))
            .collect();
        Triangulation::from_facets(&facets)
    }

    /// One facet per line, vertices space-separated, LF endings.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        for f in &self.facets {
            out.push_str(&format!("{} {} {} {}\n", f[0], f[1], f[2], f[3]));
        }
        out
    }
}

/// Parses the text facet-list format: `#` comment lines and blank lines are
/// ignored, each data line holds 4 whitespace-separated positive integers.
pub fn parse_facet_lines(text: &str) -> Result<Vec<[u32; 4]>> {
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut facet = [0u32; 4];
        let mut count = 0;
        for tok in line.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("expected a positive integer, got {tok:?}"),
            })?;
            if v == 0 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "vertex labels are 1-based".into(),
                });
            }
            if count == 4 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "more than 4 vertices on a line".into(),
                });
            }
            facet[count] = v;
            count += 1;
        }
        if count != 4 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected 4 vertices, got {count}"),
            });
        }
        raw.push(facet);
    }
    Ok(raw)
}

/// Parses a facet file into a validated triangulation.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    Triangulation::from_facets(&parse_facet_lines(text)?)
}

/// All five 4-subsets of {1..5}: the boundary of the 4-simplex.
pub(crate) fn simplex_facets() -> Vec<Facet> {
    vec![
        [1, 2, 3, 4],
        [1, 2, 3, 5],
        [1, 2, 4, 5],
        [1, 3, 4, 5],
        [2, 3, 4, 5],
    ]
}
