//! The four bistellar moves: legality, application, enumeration, inversion.
//!
//! A 2-3 move replaces the two facets sharing a triangle by three facets
//! sharing the opposite edge; 3-2 is its inverse. A 1-4 move stars a facet
//! from a fresh vertex; 4-1 removes a vertex whose link is the boundary of a
//! tetrahedron. Only 2-3 and 3-2 preserve the vertex count.

use std::fmt;
use std::str::FromStr;

use crate::complex::{sort2, sort3, sort4, Edge, Facet, Triangle, Triangulation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlipKind {
    OneFour,
    TwoThree,
    ThreeTwo,
    FourOne,
}

impl FlipKind {
    pub const ALL: [FlipKind; 4] = [
        FlipKind::OneFour,
        FlipKind::TwoThree,
        FlipKind::ThreeTwo,
        FlipKind::FourOne,
    ];
    pub const VERTEX_PRESERVING: [FlipKind; 2] = [FlipKind::TwoThree, FlipKind::ThreeTwo];

    pub fn code(&self) -> &'static str {
        match self {
            FlipKind::OneFour => "14",
            FlipKind::TwoThree => "23",
            FlipKind::ThreeTwo => "32",
            FlipKind::FourOne => "41",
        }
    }

    pub fn from_code(code: &str) -> Option<FlipKind> {
        match code {
            "14" => Some(FlipKind::OneFour),
            "23" => Some(FlipKind::TwoThree),
            "32" => Some(FlipKind::ThreeTwo),
            "41" => Some(FlipKind::FourOne),
            _ => None,
        }
    }

    /// The move kind that undoes this one.
    pub fn inverse(&self) -> FlipKind {
        match self {
            FlipKind::OneFour => FlipKind::FourOne,
            FlipKind::TwoThree => FlipKind::ThreeTwo,
            FlipKind::ThreeTwo => FlipKind::TwoThree,
            FlipKind::FourOne => FlipKind::OneFour,
        }
    }

    pub fn delta(&self) -> FlipDelta {
        match self {
            FlipKind::OneFour => FlipDelta::new(1, 4, 6, 3),
            FlipKind::TwoThree => FlipDelta::new(0, 1, 2, 1),
            FlipKind::ThreeTwo => FlipDelta::new(0, -1, -2, -1),
            FlipKind::FourOne => FlipDelta::new(-1, -4, -6, -3),
        }
    }
}

/// Signed f-vector change of one move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipDelta {
    pub dv: i64,
    pub de: i64,
    pub df: i64,
    pub dt: i64,
}

impl FlipDelta {
    fn new(dv: i64, de: i64, df: i64, dt: i64) -> Self {
        FlipDelta { dv, de, df, dt }
    }
}

/// One bistellar move together with its site. Ordering is by kind, then
/// lexicographically by site, which fixes the enumeration order everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlipMove {
    OneFour { site: Facet, new_vertex: u32 },
    TwoThree { triangle: Triangle },
    ThreeTwo { edge: Edge },
    FourOne { vertex: u32 },
}

impl FlipMove {
    pub fn kind(&self) -> FlipKind {
        match self {
            FlipMove::OneFour { .. } => FlipKind::OneFour,
            FlipMove::TwoThree { .. } => FlipKind::TwoThree,
            FlipMove::ThreeTwo { .. } => FlipKind::ThreeTwo,
            FlipMove::FourOne { .. } => FlipKind::FourOne,
        }
    }
}

impl fmt::Display for FlipMove {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlipMove::OneFour { site, new_vertex } => write!(
                out,
                "14 {} {} {} {} -> {}",
                site[0], site[1], site[2], site[3], new_vertex
            ),
            FlipMove::TwoThree { triangle } => {
                write!(out, "23 {} {} {}", triangle[0], triangle[1], triangle[2])
            }
            FlipMove::ThreeTwo { edge } => write!(out, "32 {} {}", edge[0], edge[1]),
            FlipMove::FourOne { vertex } => write!(out, "41 {}", vertex),
        }
    }
}

impl FromStr for FlipMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<FlipMove> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse {
            line: 0,
            message: format!("{msg}: {s:?}"),
        };
        let num = |tok: &str| -> Result<u32> {
            tok.parse().map_err(|_| bad("expected a vertex label"))
        };
        match toks.as_slice() {
            ["14", a, b, c, d, "->", v] => Ok(FlipMove::OneFour {
                site: sort4([num(a)?, num(b)?, num(c)?, num(d)?]),
                new_vertex: num(v)?,
            }),
            ["23", a, b, c] => Ok(FlipMove::TwoThree {
                triangle: sort3([num(a)?, num(b)?, num(c)?]),
            }),
            ["32", a, b] => Ok(FlipMove::ThreeTwo {
                edge: sort2([num(a)?, num(b)?]),
            }),
            ["41", v] => Ok(FlipMove::FourOne { vertex: num(v)? }),
            _ => Err(bad("unrecognized move")),
        }
    }
}

/// The two vertices opposite a triangle: apexes of the facets containing it.
pub fn apexes(t: &Triangulation, triangle: Triangle) -> Result<[u32; 2]> {
    let triangle = sort3(triangle);
    let [f1, f2] = t.triangle_facets(triangle)?;
    let apex = |f: Facet| f.into_iter().find(|v| !triangle.contains(v)).expect("facet has 4 vertices");
    Ok(sort2([apex(f1), apex(f2)]))
}

/// For a valence-3 edge, the triangle opposite it (the edge's link), if the
/// three incident facets form a bipyramid.
pub fn opposite_triangle(t: &Triangulation, edge: Edge) -> Result<Option<Triangle>> {
    let star = t.edge_star(edge)?;
    if star.valence() != 3 {
        return Ok(None);
    }
    let mut others: Vec<u32> = star
        .incident
        .iter()
        .flat_map(|f| f.iter().copied())
        .filter(|v| !star.edge.contains(v))
        .collect();
    others.sort_unstable();
    others.dedup();
    if others.len() != 3 {
        return Ok(None);
    }
    Ok(Some([others[0], others[1], others[2]]))
}

/// A 2-3 move on a triangle is legal iff the edge joining the two apexes is
/// not yet part of the complex.
pub fn legal_23(t: &Triangulation, triangle: Triangle) -> Result<bool> {
    let [d, e] = apexes(t, triangle)?;
    Ok(!t.contains_edge([d, e]))
}

/// A 3-2 move on an edge is legal iff the edge has valence exactly 3, its
/// three facets form a bipyramid over a triangle, and that triangle is absent.
pub fn legal_32(t: &Triangulation, edge: Edge) -> Result<bool> {
    match opposite_triangle(t, edge)? {
        Some(tri) => Ok(!t.contains_triangle(tri)),
        None => Ok(false),
    }
}

/// A 4-1 move removing a vertex is legal iff the vertex lies in exactly 4
/// facets, has exactly 4 neighbors, and the replacement facet is absent.
pub fn legal_41(t: &Triangulation, v: u32) -> Result<bool> {
    if t.facet_count_of_vertex(v)? != 4 {
        return Ok(false);
    }
    let ns = t.neighbors(v)?;
    if ns.len() != 4 {
        return Ok(false);
    }
    Ok(!t.contains_facet([ns[0], ns[1], ns[2], ns[3]]))
}

/// Checks the legality predicate matching the move's kind.
pub fn legal(t: &Triangulation, m: &FlipMove) -> Result<bool> {
    match m {
        FlipMove::OneFour { site, new_vertex } => {
            Ok(t.contains_facet(*site) && !t.contains_vertex(*new_vertex) && *new_vertex > 0)
        }
        FlipMove::TwoThree { triangle } => {
            if !t.contains_triangle(*triangle) {
                return Ok(false);
            }
            legal_23(t, *triangle)
        }
        FlipMove::ThreeTwo { edge } => {
            if !t.contains_edge(*edge) {
                return Ok(false);
            }
            legal_32(t, *edge)
        }
        FlipMove::FourOne { vertex } => {
            if !t.contains_vertex(*vertex) {
                return Ok(false);
            }
            legal_41(t, *vertex)
        }
    }
}

fn illegal(m: &FlipMove, why: &str) -> Error {
    Error::IllegalMove(m.to_string(), why.into())
}

/// Applies a move, returning a new triangulation. The input is unchanged.
pub fn apply(t: &Triangulation, m: &FlipMove) -> Result<Triangulation> {
    Triangulation::from_facets(&edited_facets(t, m)?)
}

/// The facet list after a move, without building the derived skeleta. This
/// is the single place the facet edits live; [`apply`] validates on top.
pub fn edited_facets(t: &Triangulation, m: &FlipMove) -> Result<Vec<Facet>> {
    let mut facets: Vec<Facet> = t.facets().to_vec();
    match m {
        FlipMove::OneFour { site, new_vertex } => {
            let site = sort4(*site);
            if !t.contains_facet(site) {
                return Err(illegal(m, "site is not a facet"));
            }
            if t.contains_vertex(*new_vertex) || *new_vertex == 0 {
                return Err(illegal(m, "new vertex is not fresh"));
            }
            facets.retain(|f| *f != site);
            let [a, b, c, d] = site;
            for tri in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
                facets.push(sort4([tri[0], tri[1], tri[2], *new_vertex]));
            }
        }
        FlipMove::TwoThree { triangle } => {
            let triangle = sort3(*triangle);
            let [d, e] = apexes(t, triangle)?;
            if t.contains_edge([d, e]) {
                return Err(illegal(m, "apex edge already present"));
            }
            facets.retain(|f| {
                *f != sort4([triangle[0], triangle[1], triangle[2], d])
                    && *f != sort4([triangle[0], triangle[1], triangle[2], e])
            });
            for pair in [
                [triangle[0], triangle[1]],
                [triangle[0], triangle[2]],
                [triangle[1], triangle[2]],
            ] {
                facets.push(sort4([pair[0], pair[1], d, e]));
            }
        }
        FlipMove::ThreeTwo { edge } => {
            let edge = sort2(*edge);
            let tri = opposite_triangle(t, edge)?
                .ok_or_else(|| illegal(m, "edge valence is not 3"))?;
            if t.contains_triangle(tri) {
                return Err(illegal(m, "opposite triangle already present"));
            }
            let star = t.edge_star(edge)?;
            facets.retain(|f| !star.incident.contains(f));
            facets.push(sort4([tri[0], tri[1], tri[2], edge[0]]));
            facets.push(sort4([tri[0], tri[1], tri[2], edge[1]]));
        }
        FlipMove::FourOne { vertex } => {
            if !t.contains_vertex(*vertex) {
                return Err(illegal(m, "vertex not present"));
            }
            if !legal_41(t, *vertex)? {
                return Err(illegal(m, "link is not a 4-vertex sphere with absent base facet"));
            }
            let ns = t.neighbors(*vertex)?;
            facets.retain(|f| !f.contains(vertex));
            facets.push([ns[0], ns[1], ns[2], ns[3]]);
        }
    }
    facets.sort_unstable();
    Ok(facets)
}

/// All legal moves of the requested kinds, ordered by kind then site.
pub fn enumerate_moves(t: &Triangulation, kinds: &[FlipKind]) -> Vec<FlipMove> {
    let mut out = Vec::new();
    for kind in FlipKind::ALL {
        if !kinds.contains(&kind) {
            continue;
        }
        match kind {
            FlipKind::OneFour => {
                let fresh = t.max_label() + 1;
                for f in t.facets() {
                    out.push(FlipMove::OneFour {
                        site: *f,
                        new_vertex: fresh,
                    });
                }
            }
            FlipKind::TwoThree => {
                for tri in t.triangles() {
                    if legal_23(t, *tri).unwrap_or(false) {
                        out.push(FlipMove::TwoThree { triangle: *tri });
                    }
                }
            }
            FlipKind::ThreeTwo => {
                for (e, valence) in t.edges() {
                    if valence == 3 && legal_32(t, *e).unwrap_or(false) {
                        out.push(FlipMove::ThreeTwo { edge: *e });
                    }
                }
            }
            FlipKind::FourOne => {
                for &v in t.vertices() {
                    if legal_41(t, v).unwrap_or(false) {
                        out.push(FlipMove::FourOne { vertex: v });
                    }
                }
            }
        }
    }
    out
}

/// The move that undoes `m`, given the states before and after it.
pub fn inverse(m: &FlipMove, before: &Triangulation, after: &Triangulation) -> Result<FlipMove> {
    let replayed = apply(before, m).map_err(|_| Error::NotInvertiblePair)?;
    if replayed.facets() != after.facets() {
        return Err(Error::NotInvertiblePair);
    }
    Ok(match m {
        FlipMove::OneFour { new_vertex, .. } => FlipMove::FourOne { vertex: *new_vertex },
        FlipMove::TwoThree { triangle } => FlipMove::ThreeTwo {
            edge: apexes(before, *triangle)?,
        },
        FlipMove::ThreeTwo { edge } => FlipMove::TwoThree {
            triangle: opposite_triangle(before, *edge)?.ok_or(Error::NotInvertiblePair)?,
        },
        FlipMove::FourOne { vertex } => {
            let ns = before.neighbors(*vertex)?;
            FlipMove::OneFour {
                site: [ns[0], ns[1], ns[2], ns[3]],
                new_vertex: *vertex,
            }
        }
    })
}

/// Parses a flip trace: one move per line, `#` comments and blanks ignored.
pub fn parse_trace(text: &str) -> Result<Vec<FlipMove>> {
    let mut moves = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let m: FlipMove = line.parse().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                line: lineno + 1,
                message,
            },
            other => other,
        })?;
        moves.push(m);
    }
    Ok(moves)
}

pub fn emit_trace(moves: &[FlipMove]) -> String {
    let mut out = String::new();
    for m in moves {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}

/// Applies a whole trace in order.
pub fn replay(t: &Triangulation, moves: &[FlipMove]) -> Result<Triangulation> {
    let mut cur = t.clone();
    for m in moves {
        cur = apply(&cur, m)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn stacked6() -> Triangulation {
        apply(
            &generators::boundary_simplex(),
            &FlipMove::OneFour {
                site: [1, 2, 3, 4],
                new_vertex: 6,
            },
        )
        .unwrap()
    }

    #[test]
    fn one_four_on_simplex() {
        let t = stacked6();
        let expect = Triangulation::from_facets(&[
            [1, 2, 3, 5],
            [1, 2, 4, 5],
            [1, 3, 4, 5],
            [2, 3, 4, 5],
            [1, 2, 3, 6],
            [1, 2, 4, 6],
            [1, 3, 4, 6],
            [2, 3, 4, 6],
        ])
        .unwrap();
        assert_eq!(t.facets(), expect.facets());
        let fv = t.f_vector();
        assert_eq!((fv.v, fv.e, fv.f, fv.t), (6, 14, 16, 8));
    }

    #[test]
    fn legality_23() {
        let simplex = generators::boundary_simplex();
        for tri in simplex.triangles() {
            assert!(!legal_23(&simplex, *tri).unwrap());
        }
        let t = stacked6();
        assert!(legal_23(&t, [1, 2, 3]).unwrap());
        assert!(!legal_23(&t, [1, 2, 6]).unwrap());
    }

    #[test]
    fn legality_32() {
        let simplex = generators::boundary_simplex();
        assert!(!legal_32(&simplex, [1, 2]).unwrap());
        let t = stacked6();
        assert!(!legal_32(&t, [1, 6]).unwrap());
        let flipped = apply(&t, &FlipMove::TwoThree { triangle: [1, 2, 3] }).unwrap();
        assert_eq!(flipped.edge_valence([5, 6]).unwrap(), 3);
        assert!(legal_32(&flipped, [5, 6]).unwrap());
    }

    #[test]
    fn legality_41() {
        let t = stacked6();
        assert!(legal_41(&t, 6).unwrap());
        assert!(!legal_41(&generators::boundary_simplex(), 5).unwrap());
        let cyclic = generators::cyclic_sphere(6).unwrap();
        for &v in cyclic.vertices() {
            assert!(!legal_41(&cyclic, v).unwrap());
        }
    }

    #[test]
    fn two_three_then_back() {
        let t = stacked6();
        let m = FlipMove::TwoThree { triangle: [1, 2, 3] };
        let flipped = apply(&t, &m).unwrap();
        let fv = flipped.f_vector();
        assert_eq!((fv.v, fv.e, fv.f, fv.t), (6, 15, 18, 9));
        assert!(flipped.is_neighborly());
        let back = apply(&flipped, &FlipMove::ThreeTwo { edge: [5, 6] }).unwrap();
        assert_eq!(back.facets(), t.facets());
    }

    #[test]
    fn four_one_undoes_one_four() {
        let t = stacked6();
        let back = apply(&t, &FlipMove::FourOne { vertex: 6 }).unwrap();
        assert_eq!(back.facets(), generators::boundary_simplex().facets());
    }

    #[test]
    fn enumerate_on_simplex_is_empty() {
        let t = generators::boundary_simplex();
        assert!(enumerate_moves(&t, &FlipKind::VERTEX_PRESERVING).is_empty());
    }

    #[test]
    fn enumerate_on_stacked6() {
        let t = stacked6();
        assert!(enumerate_moves(&t, &[FlipKind::ThreeTwo]).is_empty());
        let moves = enumerate_moves(&t, &[FlipKind::TwoThree]);
        let expect: Vec<FlipMove> = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
            .into_iter()
            .map(|triangle| FlipMove::TwoThree { triangle })
            .collect();
        assert_eq!(moves, expect);
    }

    #[test]
    fn inverse_pairs() {
        let simplex = generators::boundary_simplex();
        let m = FlipMove::OneFour {
            site: [1, 2, 3, 4],
            new_vertex: 6,
        };
        let t = apply(&simplex, &m).unwrap();
        assert_eq!(
            inverse(&m, &simplex, &t).unwrap(),
            FlipMove::FourOne { vertex: 6 }
        );
        let m23 = FlipMove::TwoThree { triangle: [1, 2, 3] };
        let t2 = apply(&t, &m23).unwrap();
        assert_eq!(
            inverse(&m23, &t, &t2).unwrap(),
            FlipMove::ThreeTwo { edge: [5, 6] }
        );
        assert!(matches!(
            inverse(&m23, &simplex, &t2),
            Err(Error::NotInvertiblePair)
        ));
    }

    #[test]
    fn illegal_moves_name_the_condition() {
        let t = generators::boundary_simplex();
        let err = apply(&t, &FlipMove::TwoThree { triangle: [1, 2, 3] }).unwrap_err();
        assert!(matches!(err, Error::IllegalMove(_, ref why) if why.contains("apex edge")));
        let err = apply(&t, &FlipMove::FourOne { vertex: 5 }).unwrap_err();
        assert!(matches!(err, Error::IllegalMove(..)));
    }

    #[test]
    fn trace_round_trip() {
        let text = "14 1 2 3 4 -> 6\n# then flip\n23 1 2 3\n32 5 6\n41 6\n";
        let moves = parse_trace(text).unwrap();
        assert_eq!(moves.len(), 4);
        assert_eq!(emit_trace(&moves), text.replace("# then flip\n", ""));
        let t = replay(&generators::boundary_simplex(), &moves).unwrap();
        assert_eq!(t.facets(), generators::boundary_simplex().facets());
    }
}
