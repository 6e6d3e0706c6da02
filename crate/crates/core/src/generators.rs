//! Constructors for the triangulation families used as anchors and corpora:
//! the 4-simplex boundary, stacked spheres, cyclic polytope boundaries, and
//! seeded random flip walks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::Triangulation;
use crate::error::{Error, Result};
use crate::flips::{self, FlipKind, FlipMove};

/// The boundary of the 4-simplex: all five 4-subsets of {1..5}.
pub fn boundary_simplex() -> Triangulation {
    Triangulation::from_facets(&crate::complex::simplex_facets()).expect("simplex boundary is valid")
}

/// A stacked sphere on `n` vertices: the simplex boundary followed by `n-5`
/// 1-4 flips into uniformly chosen facets. Distinct seeds reach distinct
/// stacked classes once `n >= 8`.
pub fn stacked_sphere(n: usize, rng_seed: u64) -> Result<Triangulation> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "stacked sphere needs n >= 5, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut t = boundary_simplex();
    for next in 6..=n as u32 {
        let site = t.facets()[rng.gen_range(0..t.facets().len())];
        t = flips::apply(
            &t,
            &FlipMove::OneFour {
                site,
                new_vertex: next,
            },
        )?;
    }
    Ok(t)
}

/// The boundary complex of the cyclic 4-polytope C(n,4) by Gale's evenness
/// condition: a 4-subset S of {1..n} is a facet iff every pair of vertices
/// outside S has an even number of elements of S strictly between them.
pub fn cyclic_sphere(n: usize) -> Result<Triangulation> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "cyclic sphere needs n >= 5, got {n}"
        )));
    }
    if n > 64 {
        return Err(Error::InvalidParameter(format!(
            "cyclic sphere generation supports n <= 64, got {n}"
        )));
    }
    let n = n as u32;
    let mut facets = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    let s = [a, b, c, d];
                    if gale_even(&s, n) {
                        facets.push(s);
                    }
                }
            }
        }
    }
    Triangulation::from_facets(&facets)
}

fn gale_even(s: &[u32; 4], n: u32) -> bool {
    let inside = |v: u32| s.contains(&v);
    for i in 1..=n {
        if inside(i) {
            continue;
        }
        for j in i + 1..=n {
            if inside(j) {
                continue;
            }
            let between = s.iter().filter(|&&v| v > i && v < j).count();
            if between % 2 != 0 {
                return false;
            }
        }
    }
    true
}

/// Result of a random walk: the reached triangulation and how many steps were
/// actually applied (fewer than requested only when no legal move was left).
#[derive(Debug, Clone)]
pub struct WalkOutcome {
    pub result: Triangulation,
    pub steps_applied: usize,
    pub moves: Vec<FlipMove>,
}

impl WalkOutcome {
    pub fn terminated_early(&self, requested: usize) -> bool {
        self.steps_applied < requested
    }
}

/// Applies `steps` uniformly chosen legal moves of the given kinds, seeded.
pub fn random_walk(
    t: &Triangulation,
    kinds: &[FlipKind],
    steps: usize,
    rng_seed: u64,
) -> WalkOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut cur = t.clone();
    let mut moves = Vec::new();
    for _ in 0..steps {
        let legal = flips::enumerate_moves(&cur, kinds);
        if legal.is_empty() {
            break;
        }
        let m = legal[rng.gen_range(0..legal.len())];
        cur = flips::apply(&cur, &m).expect("enumerated moves are legal");
        moves.push(m);
    }
    WalkOutcome {
        result: cur,
        steps_applied: moves.len(),
        moves,
    }
}
