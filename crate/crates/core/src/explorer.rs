//! Search over the vertex-preserving flip graph: component enumeration with
//! canonical-form dedup, seed detection, polytopal-closure certificates, and
//! shortest flip paths.
//!
//! The BFS expands one depth level at a time. With `threads > 1` (and the
//! `parallel` feature) the frontier is partitioned across a rayon pool and
//! the per-node neighbor lists are merged back in frontier order, so the
//! visited set *and* its discovery order are identical to the sequential run.

use indexmap::IndexMap;

use crate::anneal::stacked_potential;
use crate::canon::{canonical_form, CanonicalForm};
use crate::complex::Triangulation;
use crate::error::Result;
use crate::flips::{self, FlipKind, FlipMove};

/// Search limits. `max_classes` bounds memory in classes, not bytes.
#[derive(Debug, Clone)]
pub struct BfsLimits {
    pub max_classes: Option<usize>,
    pub max_depth: Option<usize>,
    pub threads: usize,
}

impl Default for BfsLimits {
    fn default() -> Self {
        BfsLimits {
            max_classes: None,
            max_depth: None,
            threads: 1,
        }
    }
}

/// Summary of one component search.
#[derive(Debug, Clone)]
pub struct ComponentReport {
    pub class_count: usize,
    pub seed_classes: Vec<CanonicalForm>,
    pub frontier_exhausted: bool,
    pub max_depth: usize,
}

/// One visited isomorphism class.
#[derive(Debug, Clone)]
pub struct ClassInfo {
    pub canon: CanonicalForm,
    pub depth: usize,
    pub parent: Option<usize>,
    pub is_seed: bool,
}

/// Full BFS output: classes in discovery order plus the report.
#[derive(Debug, Clone)]
pub struct BfsOutcome {
    pub classes: Vec<ClassInfo>,
    pub report: ComponentReport,
}

/// True iff no 3-2 flip is legal anywhere.
pub fn is_seed(t: &Triangulation) -> bool {
    flips::enumerate_moves(t, &[FlipKind::ThreeTwo]).is_empty()
}

fn expand(form: &CanonicalForm, kinds: &[FlipKind]) -> Vec<CanonicalForm> {
    let rep = form.to_triangulation();
    flips::enumerate_moves(&rep, kinds)
        .iter()
        .map(|m| canonical_form(&flips::apply(&rep, m).expect("enumerated moves are legal")))
        .collect()
}

#[cfg(feature = "parallel")]
fn expand_level(
    frontier: &[CanonicalForm],
    kinds: &[FlipKind],
    threads: usize,
) -> Vec<Vec<CanonicalForm>> {
    if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            frontier.par_iter().map(|f| expand(f, kinds)).collect()
        })
    } else {
        frontier.iter().map(|f| expand(f, kinds)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn expand_level(
    frontier: &[CanonicalForm],
    kinds: &[FlipKind],
    _threads: usize,
) -> Vec<Vec<CanonicalForm>> {
    frontier.iter().map(|f| expand(f, kinds)).collect()
}

struct Meta {
    depth: usize,
    parent: Option<usize>,
    is_seed: bool,
}

/// Enumerates the component of `start` under the given kinds, deduplicating
/// by canonical form, and returns every class in discovery order.
pub fn bfs_explore(start: &Triangulation, kinds: &[FlipKind], limits: &BfsLimits) -> BfsOutcome {
    let mut visited: IndexMap<CanonicalForm, Meta> = IndexMap::new();
    let start_form = canonical_form(start);
    let start_seed = is_seed(&start_form.to_triangulation());
    visited.insert(
        start_form,
        Meta {
            depth: 0,
            parent: None,
            is_seed: start_seed,
        },
    );
    let mut exhausted = true;
    let mut level_start = 0usize;
    let mut depth = 0usize;
    let class_cap = limits.max_classes.unwrap_or(usize::MAX);

    'levels: loop {
        let level_end = visited.len();
        if level_start == level_end {
            break;
        }
        if limits.max_depth.is_some_and(|d| depth >= d) {
            exhausted = false;
            break;
        }
        let frontier: Vec<CanonicalForm> = (level_start..level_end)
            .map(|i| visited.get_index(i).expect("in range").0.clone())
            .collect();
        let expansions = expand_level(&frontier, kinds, limits.threads);
        for (offset, neighbors) in expansions.into_iter().enumerate() {
            let parent = level_start + offset;
            for form in neighbors {
                if visited.contains_key(&form) {
                    continue;
                }
                if visited.len() >= class_cap {
                    exhausted = false;
                    break 'levels;
                }
                let seed = is_seed(&form.to_triangulation());
                visited.insert(
                    form,
                    Meta {
                        depth: depth + 1,
                        parent: Some(parent),
                        is_seed: seed,
                    },
                );
            }
        }
        level_start = level_end;
        depth += 1;
    }

    let max_depth = visited.values().map(|m| m.depth).max().unwrap_or(0);
    let classes: Vec<ClassInfo> = visited
        .into_iter()
        .map(|(canon, meta)| ClassInfo {
            canon,
            depth: meta.depth,
            parent: meta.parent,
            is_seed: meta.is_seed,
        })
        .collect();
    let seed_classes: Vec<CanonicalForm> = classes
        .iter()
        .filter(|c| c.is_seed)
        .map(|c| c.canon.clone())
        .collect();
    let report = ComponentReport {
        class_count: classes.len(),
        seed_classes,
        frontier_exhausted: exhausted,
        max_depth,
    };
    BfsOutcome { classes, report }
}

/// The report-only view of [`bfs_explore`].
pub fn bfs_component(
    start: &Triangulation,
    kinds: &[FlipKind],
    limits: &BfsLimits,
) -> ComponentReport {
    bfs_explore(start, kinds, limits).report
}

/// All seed classes among the visited classes of a finished or partial BFS.
pub fn find_seeds(outcome: &BfsOutcome) -> Vec<CanonicalForm> {
    outcome
        .classes
        .iter()
        .filter(|c| c.is_seed)
        .map(|c| c.canon.clone())
        .collect()
}

/// A move sequence between two isomorphism classes. Replaying `moves` from
/// the concrete start representative the path was derived against yields a
/// triangulation isomorphic to `end`.
#[derive(Debug, Clone)]
pub struct FlipPath {
    pub start: CanonicalForm,
    pub end: CanonicalForm,
    pub moves: Vec<FlipMove>,
}

/// Search outcome carrying a path or an in-band miss.
#[derive(Debug, Clone)]
pub enum PathOutcome {
    Found(FlipPath),
    NotFound { classes_searched: usize },
}

impl PathOutcome {
    pub fn found(&self) -> Option<&FlipPath> {
        match self {
            PathOutcome::Found(p) => Some(p),
            PathOutcome::NotFound { .. } => None,
        }
    }
}

/// Re-derives concrete moves along a chain of classes: at each step the first
/// legal move (in enumeration order) whose image lands in the next class.
fn derive_moves(
    start: &Triangulation,
    chain: &[&CanonicalForm],
    kinds: &[FlipKind],
) -> Vec<FlipMove> {
    let mut cur = start.clone();
    let mut moves = Vec::new();
    for target in chain.iter().skip(1) {
        let mut found = false;
        for m in flips::enumerate_moves(&cur, kinds) {
            let next = flips::apply(&cur, &m).expect("enumerated moves are legal");
            if canonical_form(&next) == **target {
                cur = next;
                moves.push(m);
                found = true;
                break;
            }
        }
        assert!(found, "consecutive BFS classes differ by one move");
    }
    moves
}

/// True iff the greedy 4-1 chain reduces the triangulation all the way to the
/// simplex boundary, i.e. the triangulation is stacked. Minimal facet count
/// is an equivalent quick filter.
fn is_stacked(t: &Triangulation) -> bool {
    let n = t.vertex_count();
    t.facets().len() == 3 * n - 10 && stacked_potential(t) == n - 5
}

/// Searches for a vertex-preserving flip path from `start` to any stacked
/// sphere on the same vertex count. Stacked spheres are polytopal and the
/// polytopal triangulations form a connected subgraph, so reaching one
/// certifies membership in the polytopal closure.
pub fn closure_certificate(start: &Triangulation, limits: &BfsLimits) -> Result<PathOutcome> {
    let kinds = FlipKind::VERTEX_PRESERVING;
    let start_form = canonical_form(start);
    if is_stacked(start) {
        return Ok(PathOutcome::Found(FlipPath {
            start: start_form.clone(),
            end: start_form,
            moves: Vec::new(),
        }));
    }

    // Level-synchronous BFS, stopping at the first stacked class.
    let mut visited: IndexMap<CanonicalForm, Option<usize>> = IndexMap::new();
    visited.insert(start_form.clone(), None);
    let mut level_start = 0usize;
    let mut depth = 0usize;
    let class_cap = limits.max_classes.unwrap_or(usize::MAX);
    let mut hit: Option<usize> = None;

    'levels: loop {
        let level_end = visited.len();
        if level_start == level_end || limits.max_depth.is_some_and(|d| depth >= d) {
            break;
        }
        let frontier: Vec<CanonicalForm> = (level_start..level_end)
            .map(|i| visited.get_index(i).expect("in range").0.clone())
            .collect();
        let expansions = expand_level(&frontier, &kinds, limits.threads);
        for (offset, neighbors) in expansions.into_iter().enumerate() {
            let parent = level_start + offset;
            for form in neighbors {
                if visited.contains_key(&form) {
                    continue;
                }
                if visited.len() >= class_cap {
                    break 'levels;
                }
                let stacked = is_stacked(&form.to_triangulation());
                visited.insert(form, Some(parent));
                if stacked {
                    hit = Some(visited.len() - 1);
                    break 'levels;
                }
            }
        }
        level_start = level_end;
        depth += 1;
    }

    match hit {
        None => Ok(PathOutcome::NotFound {
            classes_searched: visited.len(),
        }),
        Some(idx) => {
            let mut chain_idx = vec![idx];
            let mut cur = idx;
            while let Some(p) = visited[cur] {
                chain_idx.push(p);
                cur = p;
            }
            chain_idx.reverse();
            let chain: Vec<&CanonicalForm> = chain_idx
                .iter()
                .map(|&i| visited.get_index(i).expect("in range").0)
                .collect();
            let moves = derive_moves(start, &chain, &kinds);
            Ok(PathOutcome::Found(FlipPath {
                start: start_form,
                end: (*chain.last().expect("nonempty")).clone(),
                moves,
            }))
        }
    }
}

enum SideStep {
    Meet(CanonicalForm),
    Exhausted,
    LimitHit,
    Advanced,
}

/// Expands one full BFS level of one search direction. A meet found here is
/// always on a shortest path: with alternating level expansion, absence of
/// earlier meets bounds the distance from below by the sum of the radii.
fn expand_side(
    map: &mut IndexMap<CanonicalForm, Option<usize>>,
    other: &IndexMap<CanonicalForm, Option<usize>>,
    level: &mut std::ops::Range<usize>,
    side_kinds: &[FlipKind],
    class_budget: usize,
) -> SideStep {
    if level.start == level.end {
        return SideStep::Exhausted;
    }
    let frontier: Vec<CanonicalForm> = level
        .clone()
        .map(|i| map.get_index(i).expect("in range").0.clone())
        .collect();
    let level_end = map.len();
    for (offset, form) in frontier.iter().enumerate() {
        let parent = level.start + offset;
        for neighbor in expand(form, side_kinds) {
            if map.contains_key(&neighbor) {
                continue;
            }
            if map.len() >= class_budget {
                return SideStep::LimitHit;
            }
            map.insert(neighbor.clone(), Some(parent));
            if other.contains_key(&neighbor) {
                return SideStep::Meet(neighbor);
            }
        }
    }
    *level = level_end..map.len();
    SideStep::Advanced
}

/// Bidirectional BFS for a minimum-length move sequence from `a` to `b`.
/// The backward search runs with the inverse kinds; the stitched class chain
/// is then realized as concrete forward moves from `a`.
pub fn shortest_path(
    a: &Triangulation,
    b: &Triangulation,
    kinds: &[FlipKind],
    limit_classes: usize,
) -> PathOutcome {
    let form_a = canonical_form(a);
    let form_b = canonical_form(b);
    if form_a == form_b {
        return PathOutcome::Found(FlipPath {
            start: form_a,
            end: form_b,
            moves: Vec::new(),
        });
    }
    let inverse_kinds: Vec<FlipKind> = kinds.iter().map(|k| k.inverse()).collect();

    // parent index within the same side's map
    let mut fwd: IndexMap<CanonicalForm, Option<usize>> = IndexMap::new();
    let mut bwd: IndexMap<CanonicalForm, Option<usize>> = IndexMap::new();
    fwd.insert(form_a.clone(), None);
    bwd.insert(form_b.clone(), None);
    let mut fwd_level = 0usize..1;
    let mut bwd_level = 0usize..1;
    let mut forward_turn = true;

    let meet = loop {
        let step = if forward_turn {
            let budget = limit_classes.saturating_sub(bwd.len());
            expand_side(&mut fwd, &bwd, &mut fwd_level, kinds, budget)
        } else {
            let budget = limit_classes.saturating_sub(fwd.len());
            expand_side(&mut bwd, &fwd, &mut bwd_level, &inverse_kinds, budget)
        };
        match step {
            SideStep::Meet(m) => break Some(m),
            SideStep::Exhausted | SideStep::LimitHit => break None,
            SideStep::Advanced => forward_turn = !forward_turn,
        }
    };

    let Some(meet_form) = meet else {
        return PathOutcome::NotFound {
            classes_searched: fwd.len() + bwd.len(),
        };
    };

    let chain_of = |map: &IndexMap<CanonicalForm, Option<usize>>, form: &CanonicalForm| {
        let mut idx = map.get_index_of(form).expect("meet visited");
        let mut chain = vec![idx];
        while let Some(p) = map[idx] {
            chain.push(p);
            idx = p;
        }
        chain.reverse();
        chain
    };
    let fwd_chain = chain_of(&fwd, &meet_form);
    let bwd_chain = chain_of(&bwd, &meet_form);
    let mut chain: Vec<&CanonicalForm> = fwd_chain
        .iter()
        .map(|&i| fwd.get_index(i).expect("in range").0)
        .collect();
    for &i in bwd_chain.iter().rev().skip(1) {
        chain.push(bwd.get_index(i).expect("in range").0);
    }
    let moves = derive_moves(a, &chain, kinds);
    PathOutcome::Found(FlipPath {
        start: form_a,
        end: form_b,
        moves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn stacked6() -> Triangulation {
        generators::stacked_sphere(6, 1).unwrap()
    }

    #[test]
    fn simplex_component_is_isolated() {
        let report = bfs_component(
            &generators::boundary_simplex(),
            &FlipKind::VERTEX_PRESERVING,
            &BfsLimits::default(),
        );
        assert_eq!(report.class_count, 1);
        assert!(report.frontier_exhausted);
        assert_eq!(report.max_depth, 0);
        assert_eq!(report.seed_classes.len(), 1);
    }

    #[test]
    fn six_vertex_component_has_two_classes() {
        let outcome = bfs_explore(
            &stacked6(),
            &FlipKind::VERTEX_PRESERVING,
            &BfsLimits::default(),
        );
        assert_eq!(outcome.report.class_count, 2);
        assert!(outcome.report.frontier_exhausted);
        assert_eq!(outcome.report.max_depth, 1);
        assert_eq!(outcome.report.seed_classes.len(), 1);
        assert_eq!(find_seeds(&outcome).len(), 1);
    }

    #[test]
    fn seed_predicate_examples() {
        assert!(is_seed(&generators::boundary_simplex()));
        assert!(is_seed(&stacked6()));
        assert!(!is_seed(&generators::cyclic_sphere(6).unwrap()));
    }

    #[test]
    fn limits_mark_reports_non_exhaustive() {
        let t = generators::stacked_sphere(7, 1).unwrap();
        let report = bfs_component(
            &t,
            &FlipKind::VERTEX_PRESERVING,
            &BfsLimits {
                max_classes: Some(2),
                ..Default::default()
            },
        );
        assert_eq!(report.class_count, 2);
        assert!(!report.frontier_exhausted);
        let report = bfs_component(
            &t,
            &FlipKind::VERTEX_PRESERVING,
            &BfsLimits {
                max_depth: Some(1),
                ..Default::default()
            },
        );
        assert!(!report.frontier_exhausted);
    }

    #[test]
    fn certificate_for_stacked_is_empty() {
        let path = closure_certificate(&stacked6(), &BfsLimits::default())
            .unwrap();
        let p = path.found().expect("stacked start");
        assert!(p.moves.is_empty());
        assert_eq!(p.start, p.end);
    }

    #[test]
    fn certificate_for_cyclic6_is_one_move() {
        let c6 = generators::cyclic_sphere(6).unwrap();
        let path = closure_certificate(&c6, &BfsLimits::default()).unwrap();
        let p = path.found().expect("cyclic reaches stacked");
        assert_eq!(p.moves.len(), 1);
        assert!(matches!(p.moves[0], FlipMove::ThreeTwo { .. }));
        let replayed = flips::replay(&c6, &p.moves).unwrap();
        assert_eq!(canonical_form(&replayed), p.end);
        assert!(is_stacked(&replayed));
    }

    #[test]
    fn shortest_path_trivial_and_one_step() {
        let s = stacked6();
        let same = shortest_path(&s, &s, &FlipKind::VERTEX_PRESERVING, 10_000);
        assert_eq!(same.found().unwrap().moves.len(), 0);
        let c = generators::cyclic_sphere(6).unwrap();
        let one = shortest_path(&s, &c, &FlipKind::VERTEX_PRESERVING, 10_000);
        let p = one.found().unwrap();
        assert_eq!(p.moves.len(), 1);
        let replayed = flips::replay(&s, &p.moves).unwrap();
        assert!(crate::canon::are_isomorphic(
            &replayed,
            &generators::cyclic_sphere(6).unwrap()
        ));
    }

    #[test]
    fn shortest_path_with_insertion() {
        let simplex = generators::boundary_simplex();
        let s6 = stacked6();
        let kinds = [FlipKind::OneFour, FlipKind::TwoThree, FlipKind::ThreeTwo];
        let out = shortest_path(&simplex, &s6, &kinds, 10_000);
        assert_eq!(out.found().unwrap().moves.len(), 1);
    }

    #[test]
    fn mismatched_vertex_counts_not_found() {
        let out = shortest_path(
            &generators::boundary_simplex(),
            &stacked6(),
            &FlipKind::VERTEX_PRESERVING,
            100,
        );
        assert!(out.found().is_none());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_bfs_matches_serial() {
        let t = generators::stacked_sphere(7, 1).unwrap();
        let serial = bfs_explore(&t, &FlipKind::VERTEX_PRESERVING, &BfsLimits::default());
        let parallel = bfs_explore(
            &t,
            &FlipKind::VERTEX_PRESERVING,
            &BfsLimits {
                threads: 4,
                ..Default::default()
            },
        );
        let keys = |o: &BfsOutcome| -> Vec<CanonicalForm> {
            o.classes.iter().map(|c| c.canon.clone()).collect()
        };
        assert_eq!(keys(&serial), keys(&parallel));
        assert_eq!(serial.report.class_count, parallel.report.class_count);
    }
}
