//! Shared helpers for the integration and acceptance suites: an independent
//! orderly-generation oracle for small sphere censuses, an RP^3 triangulation
//! built from first principles, corpus builders, and relabeling utilities.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bistellar::canon::{canonical_form, CanonicalForm};
use bistellar::complex::{Facet, Triangulation};
use bistellar::flips::{self, FlipKind};
use bistellar::generators;
use bistellar::homology;

/// Exhaustively enumerates isomorphism classes of n-vertex closed
/// 3-pseudomanifolds with 3-sphere homology, independently of any flip or
/// BFS machinery. Every such complex has a representative containing the
/// facet {1,2,3,4}; starting from it, the lexicographically smallest open
/// triangle is closed in every legal way, which generates each labeled
/// complex exactly once.
pub fn enumerate_sphere_classes(n: usize) -> usize {
    let max_facets = n * (n - 3) / 2;
    let mut seen = Census::default();
    let mut facets: Vec<Facet> = vec![[1, 2, 3, 4]];
    let mut tri_count: BTreeMap<[u32; 3], u8> = BTreeMap::new();
    for t in triangles_of([1, 2, 3, 4]) {
        tri_count.insert(t, 1);
    }
    grow(&mut facets, &mut tri_count, n as u32, max_facets, &mut seen);
    seen.spheres.len()
}

/// Classes seen so far; homology runs once per class, not per labeling.
#[derive(Default)]
struct Census {
    all: HashSet<CanonicalForm>,
    spheres: HashSet<CanonicalForm>,
}

fn triangles_of(f: Facet) -> [[u32; 3]; 4] {
    let [a, b, c, d] = f;
    [[a, b, c], [a, b, d], [a, c, d], [b, c, d]]
}

fn grow(
    facets: &mut Vec<Facet>,
    tri_count: &mut BTreeMap<[u32; 3], u8>,
    n: u32,
    max_facets: usize,
    census: &mut Census,
) {
    let open = tri_count
        .iter()
        .find(|(_, &c)| c == 1)
        .map(|(t, _)| *t);
    let Some(tri) = open else {
        // closed complex; keep it when it uses every label and looks like S^3
        let used: BTreeSet<u32> = facets.iter().flatten().copied().collect();
        if used.len() == n as usize {
            if let Ok(t) = Triangulation::from_facets(facets) {
                let form = canonical_form(&t);
                if census.all.insert(form.clone()) && homology::is_sphere_candidate(&t) {
                    census.spheres.insert(form);
                }
            }
        }
        return;
    };
    if facets.len() >= max_facets {
        return;
    }
    'candidates: for d in 1..=n {
        if tri.contains(&d) {
            continue;
        }
        let mut facet = [tri[0], tri[1], tri[2], d];
        facet.sort_unstable();
        if facets.contains(&facet) {
            continue;
        }
        for t in triangles_of(facet) {
            if tri_count.get(&t).copied().unwrap_or(0) >= 2 {
                continue 'candidates;
            }
        }
        facets.push(facet);
        for t in triangles_of(facet) {
            *tri_count.entry(t).or_insert(0) += 1;
        }
        grow(facets, tri_count, n, max_facets, census);
        facets.pop();
        for t in triangles_of(facet) {
            let c = tri_count.get_mut(&t).expect("just counted");
            *c -= 1;
            if *c == 0 {
                tri_count.remove(&t);
            }
        }
    }
}

/// A triangulation of RP^3: the antipodal quotient of the barycentric
/// subdivision of the 4-dimensional cross-polytope boundary. 40 vertices,
/// 192 facets; the quotient is simplicial because chains have strictly
/// increasing dimensions and opposite faces share no vertices.
pub fn rp3() -> Triangulation {
    // cross-polytope vertices indexed 0..8: coordinate i, sign = low bit
    let mut faces: Vec<Vec<u8>> = Vec::new();
    let mut face_id: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for mask in 1u16..256 {
        let verts: Vec<u8> = (0..8).filter(|i| mask & (1 << i) != 0).collect();
        if verts.len() > 4 {
            continue;
        }
        let coords: BTreeSet<u8> = verts.iter().map(|v| v >> 1).collect();
        if coords.len() != verts.len() {
            continue;
        }
        face_id.insert(verts.clone(), faces.len());
        faces.push(verts);
    }
    let antipode = |f: &[u8]| -> Vec<u8> {
        let mut g: Vec<u8> = f.iter().map(|v| v ^ 1).collect();
        g.sort_unstable();
        g
    };
    let mut orbit_of: Vec<u32> = vec![0; faces.len()];
    let mut next_orbit = 0u32;
    let mut rep_orbit: BTreeMap<Vec<u8>, u32> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        let a = antipode(f);
        let rep = if *f < a { f.clone() } else { a };
        let id = *rep_orbit.entry(rep).or_insert_with(|| {
            next_orbit += 1;
            next_orbit
        });
        orbit_of[i] = id;
    }

    let mut quotient: BTreeSet<Facet> = BTreeSet::new();
    for top in faces.iter().filter(|f| f.len() == 4) {
        permute4(top, &mut |order| {
            let mut chain_orbits = [0u32; 4];
            let mut prefix: Vec<u8> = Vec::with_capacity(4);
            for (k, &v) in order.iter().enumerate() {
                prefix.push(v);
                let mut sorted = prefix.clone();
                sorted.sort_unstable();
                chain_orbits[k] = orbit_of[face_id[&sorted]];
            }
            chain_orbits.sort_unstable();
            quotient.insert(chain_orbits);
        });
    }
    let facets: Vec<Facet> = quotient.into_iter().collect();
    Triangulation::from_facets(&facets).expect("quotient is a closed pseudomanifold")
}

fn permute4(items: &[u8], visit: &mut impl FnMut(&[u8; 4])) {
    let mut arr = [items[0], items[1], items[2], items[3]];
    heap_permute(&mut arr, 4, visit);
}

fn heap_permute(arr: &mut [u8; 4], k: usize, visit: &mut impl FnMut(&[u8; 4])) {
    if k == 1 {
        visit(arr);
        return;
    }
    for i in 0..k {
        heap_permute(arr, k - 1, visit);
        if k % 2 == 0 {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}

/// A named corpus of generator-produced triangulations used across suites.
pub fn corpus() -> Vec<(String, Triangulation)> {
    let mut out: Vec<(String, Triangulation)> = vec![
        ("simplex".into(), generators::boundary_simplex()),
        ("stacked6".into(), generators::stacked_sphere(6, 1).unwrap()),
        ("cyclic6".into(), generators::cyclic_sphere(6).unwrap()),
        ("stacked8".into(), generators::stacked_sphere(8, 2).unwrap()),
        ("cyclic8".into(), generators::cyclic_sphere(8).unwrap()),
        ("stacked10".into(), generators::stacked_sphere(10, 3).unwrap()),
        ("cyclic9".into(), generators::cyclic_sphere(9).unwrap()),
    ];
    for (i, steps) in [(0u64, 25usize), (1, 40), (2, 60)] {
        let start = generators::cyclic_sphere(8).unwrap();
        let w = generators::random_walk(&start, &FlipKind::VERTEX_PRESERVING, steps, 100 + i);
        out.push((format!("walk8_{i}"), w.result));
    }
    out
}

/// 50 mixed 1-4/2-3 steps from the simplex boundary, holding the vertex
/// count at 20 once reached.
pub fn mixed_walk_to_20(seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = generators::boundary_simplex();
    for _ in 0..50 {
        let kinds: &[FlipKind] = if t.vertex_count() < 20 {
            &[FlipKind::OneFour, FlipKind::TwoThree]
        } else {
            &[FlipKind::TwoThree]
        };
        let moves = flips::enumerate_moves(&t, kinds);
        if moves.is_empty() {
            break;
        }
        let m = moves[rng.gen_range(0..moves.len())];
        t = flips::apply(&t, &m).expect("enumerated moves are legal");
    }
    t
}

/// Applies a uniformly random permutation of 1..=n to the labels.
pub fn random_relabel(t: &Triangulation, seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets: Vec<u32> = (1..=t.vertex_count() as u32).collect();
    targets.shuffle(&mut rng);
    let map: BTreeMap<u32, u32> = t
        .vertices()
        .iter()
        .copied()
        .zip(targets)
        .collect();
    t.relabeled(&map).expect("permutation preserves validity")
}

/// Minimum relabeled sorted facet list over all n! permutations.
pub fn brute_force_canonical(t: &Triangulation) -> Vec<Facet> {
    let verts: Vec<u32> = t.vertices().to_vec();
    let n = verts.len();
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    let mut best: Option<Vec<Facet>> = None;
    all_permutations(&mut perm, 0, &mut |p| {
        let map: BTreeMap<u32, u32> = verts.iter().copied().zip(p.iter().copied()).collect();
        let mut facets: Vec<Facet> = t
            .facets()
            .iter()
            .map(|f| {
                let mut g = [map[&f[0]], map[&f[1]], map[&f[2]], map[&f[3]]];
                g.sort_unstable();
                g
            })
            .collect();
        facets.sort_unstable();
        if best.as_ref().map_or(true, |b| facets < *b) {
            best = Some(facets);
        }
    });
    best.expect("at least one permutation")
}

fn all_permutations(p: &mut Vec<u32>, k: usize, visit: &mut impl FnMut(&[u32])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        all_permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Prints the per-criterion verdict line and panics on failure.
pub fn conclude(criterion: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("acceptance {criterion}: PASS");
    } else {
        println!("acceptance {criterion}: FAIL");
        for f in &failures {
            println!("  {f}");
        }
        panic!("acceptance {criterion} failed: {}", failures.join("; "));
    }
}

/// Records a failure message when the condition does not hold.
pub fn check(failures: &mut Vec<String>, ok: bool, message: impl Into<String>) {
    if !ok {
        failures.push(message.into());
    }
}
