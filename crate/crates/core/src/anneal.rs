//! Simulated annealing over bistellar moves, with two objectives: the
//! classic reduction objective (minimize vertices, then tetrahedra, over all
//! four move kinds) and the stacked-potential objective, which keeps the
//! vertex count fixed and rewards states from which long chains of greedy
//! 4-1 deletions are possible.
//!
//! The stacked potential s(T) is the length of the greedy 4-1 chain that
//! always removes the lowest-labeled removable vertex. With s_max = n - 5 and
//! a weight W >= s_max + 1, the cost (s_max - s(T))·W + m(T) makes one extra
//! deletion always outweigh a tetrahedron, so minimizing it drives the state
//! toward a stacked sphere first and a small one second.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::Triangulation;
use crate::error::{Error, Result};
use crate::flips::{self, FlipKind, FlipMove};

/// Annealing objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Minimize (vertex count, tetrahedron count) lexicographically; all four
    /// move kinds allowed. Success: the simplex boundary is reached.
    Reduction,
    /// Minimize (s_max - s(T))·W + m(T) over vertex-preserving moves.
    /// `weight` defaults to s_max + 1. Success: s(T) = s_max.
    StackedPotential { weight: Option<u64> },
}

/// Schedule parameters. `initial_temperature` defaults to 3·s_max (at least
/// 1.0) when unset; `allowed_kinds` defaults per objective.
#[derive(Debug, Clone)]
pub struct AnnealConfig {
    pub initial_temperature: Option<f64>,
    pub cooling_factor: f64,
    pub steps_per_temperature: usize,
    pub max_flips: usize,
    pub rng_seed: u64,
    pub allowed_kinds: Option<Vec<FlipKind>>,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            initial_temperature: None,
            cooling_factor: 0.99,
            steps_per_temperature: 200,
            max_flips: 100_000,
            rng_seed: 0,
            allowed_kinds: None,
        }
    }
}

impl AnnealConfig {
    pub fn with_seed(rng_seed: u64) -> Self {
        AnnealConfig {
            rng_seed,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(t0) = self.initial_temperature {
            if !(t0 > 0.0) {
                return Err(Error::InvalidParameter(
                    "initial_temperature must be positive".into(),
                ));
            }
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(Error::InvalidParameter(
                "cooling_factor must lie in (0,1)".into(),
            ));
        }
        if self.steps_per_temperature == 0 {
            return Err(Error::InvalidParameter(
                "steps_per_temperature must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one annealing run. The trace always replays from the input to
/// `final_state`; on budget exhaustion that is the best state seen.
#[derive(Debug, Clone)]
pub struct AnnealResult {
    pub final_state: Triangulation,
    pub trace: Vec<FlipMove>,
    pub best_cost: i64,
    pub success: bool,
    pub proposals: usize,
    pub applied: usize,
}

/// Length of the greedy chain of 4-1 flips, removing the lowest-labeled
/// removable vertex at each step, until none remains.
pub fn stacked_potential(t: &Triangulation) -> usize {
    stacked_potential_of_facets(t.facets().to_vec())
}

/// The same greedy chain computed on a bare sorted facet list, so annealing
/// can score candidate states without building their skeleta. A vertex is
/// removable when it lies in exactly 4 facets whose other vertices form a
/// 4-set that is not already a facet; on a valid complex that is exactly the
/// 4-1 legality condition.
fn stacked_potential_of_facets(mut facets: Vec<crate::complex::Facet>) -> usize {
    let mut s = 0;
    'chain: loop {
        let mut incident: Vec<(u32, u32)> = Vec::with_capacity(4 * facets.len());
        for (i, f) in facets.iter().enumerate() {
            for v in *f {
                incident.push((v, i as u32));
            }
        }
        incident.sort_unstable();
        let mut at = 0;
        while at < incident.len() {
            let v = incident[at].0;
            let run = incident[at..].iter().take_while(|(w, _)| *w == v).count();
            if run == 4 {
                let mut others: Vec<u32> = incident[at..at + 4]
                    .iter()
                    .flat_map(|&(_, fi)| facets[fi as usize].into_iter())
                    .filter(|&w| w != v)
                    .collect();
                others.sort_unstable();
                others.dedup();
                if others.len() == 4 {
                    let replacement = [others[0], others[1], others[2], others[3]];
                    if facets.binary_search(&replacement).is_err() {
                        let mut doomed: Vec<u32> =
                            incident[at..at + 4].iter().map(|&(_, fi)| fi).collect();
                        doomed.sort_unstable();
                        for fi in doomed.into_iter().rev() {
                            facets.remove(fi as usize);
                        }
                        let pos = facets.binary_search(&replacement).unwrap_err();
                        facets.insert(pos, replacement);
                        s += 1;
                        continue 'chain;
                    }
                }
            }
            at += run;
        }
        return s;
    }
}

/// Exhaustive variant: the maximum 4-1 chain length over all deletion orders.
/// Exponential; intended for comparing orders at n - 5 <= 8.
pub fn stacked_potential_max(t: &Triangulation) -> usize {
    let removable: Vec<u32> = t
        .vertices()
        .iter()
        .copied()
        .filter(|&v| flips::legal_41(t, v).unwrap_or(false))
        .collect();
    let mut best = 0;
    for v in removable {
        let next = flips::apply(t, &FlipMove::FourOne { vertex: v }).expect("legal 4-1 applies");
        best = best.max(1 + stacked_potential_max(&next));
    }
    best
}

/// The default weight s_max + 1 for an input on `original_n` vertices.
pub fn default_weight(original_n: usize) -> u64 {
    original_n.saturating_sub(5) as u64 + 1
}

/// The stacked-potential cost (s_max - s(T))·W + m(T), with s_max = n - 5
/// taken from the original vertex count.
pub fn stacked_cost(t: &Triangulation, original_n: usize, weight: u64) -> i64 {
    let s_max = original_n.saturating_sub(5) as i64;
    let s = stacked_potential(t) as i64;
    (s_max - s) * weight as i64 + t.facets().len() as i64
}

enum Cost {
    Reduction { scale: i64 },
    Stacked { s_max: i64, weight: i64 },
}

impl Cost {
    fn eval(&self, t: &Triangulation) -> i64 {
        match self {
            Cost::Reduction { scale } => {
                t.vertex_count() as i64 * scale + t.facets().len() as i64
            }
            Cost::Stacked { s_max, weight } => {
                let s = stacked_potential(t) as i64;
                (s_max - s) * weight + t.facets().len() as i64
            }
        }
    }

    /// Cost change of a candidate move, computed without building the next
    /// state's skeleta. The reduction cost depends only on (V, T), so the
    /// flip-delta table decides it; the stacked cost re-scores the edited
    /// facet list.
    fn delta(&self, state: &Triangulation, m: &FlipMove, current: i64) -> Result<i64> {
        match self {
            Cost::Reduction { scale } => {
                let d = m.kind().delta();
                Ok(d.dv * scale + d.dt)
            }
            Cost::Stacked { s_max, weight } => {
                let next = flips::edited_facets(state, m)?;
                let t_count = next.len() as i64;
                let s = stacked_potential_of_facets(next) as i64;
                Ok((s_max - s) * weight + t_count - current)
            }
        }
    }
}

fn is_simplex_boundary(t: &Triangulation) -> bool {
    // the only closed 3-pseudomanifold on 5 vertices
    t.vertex_count() == 5
}

/// Metropolis annealing over legal moves of the allowed kinds.
pub fn run(t: &Triangulation, objective: Objective, config: &AnnealConfig) -> Result<AnnealResult> {
    config.validate()?;
    let n = t.vertex_count();
    let s_max = n.saturating_sub(5);
    let cost = match objective {
        Objective::Reduction => Cost::Reduction {
            scale: 4 * config.max_flips as i64 + t.facets().len() as i64 + 1,
        },
        Objective::StackedPotential { weight } => {
            let weight = weight.unwrap_or_else(|| default_weight(n));
            if weight < default_weight(n) {
                return Err(Error::InvalidParameter(format!(
                    "stacked-potential weight must be at least s_max + 1 = {}",
                    default_weight(n)
                )));
            }
            Cost::Stacked {
                s_max: s_max as i64,
                weight: weight as i64,
            }
        }
    };
    let kinds: Vec<FlipKind> = config.allowed_kinds.clone().unwrap_or_else(|| match objective {
        Objective::Reduction => FlipKind::ALL.to_vec(),
        Objective::StackedPotential { .. } => FlipKind::VERTEX_PRESERVING.to_vec(),
    });
    // Success is readable off the tracked cost: the stacked cost equals the
    // facet count exactly when s = s_max.
    let succeeded = |state: &Triangulation, current_cost: i64| match objective {
        Objective::Reduction => is_simplex_boundary(state),
        Objective::StackedPotential { .. } => current_cost == state.facets().len() as i64,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut state = t.clone();
    let mut current_cost = cost.eval(&state);
    let mut trace: Vec<FlipMove> = Vec::new();
    let mut best_state = state.clone();
    let mut best_cost = current_cost;
    let mut best_len = 0usize;
    let mut temperature = config
        .initial_temperature
        .unwrap_or_else(|| (3 * s_max.max(1)) as f64);
    let mut proposals = 0usize;
    // the legal-move list changes only when a move is applied
    let mut moves = flips::enumerate_moves(&state, &kinds);

    loop {
        if succeeded(&state, current_cost) {
            return Ok(AnnealResult {
                final_state: state,
                best_cost: current_cost,
                success: true,
                proposals,
                applied: trace.len(),
                trace,
            });
        }
        if proposals >= config.max_flips || moves.is_empty() {
            break;
        }
        let candidate = moves[rng.gen_range(0..moves.len())];
        proposals += 1;
        let delta = cost
            .delta(&state, &candidate, current_cost)
            .expect("enumerated moves are legal");
        let accept = delta <= 0 || {
            let p = (-(delta as f64) / temperature).exp();
            rng.gen::<f64>() < p
        };
        if accept {
            state = flips::apply(&state, &candidate).expect("enumerated moves are legal");
            current_cost += delta;
            trace.push(candidate);
            if current_cost < best_cost {
                best_cost = current_cost;
                best_state = state.clone();
                best_len = trace.len();
            }
            moves = flips::enumerate_moves(&state, &kinds);
        }
        if proposals % config.steps_per_temperature == 0 {
            temperature *= config.cooling_factor;
        }
    }

    trace.truncate(best_len);
    Ok(AnnealResult {
        final_state: best_state,
        best_cost,
        success: false,
        proposals,
        applied: trace.len(),
        trace,
    })
}

/// Result of the preprocessing pipeline for unflippable complexes.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub result: Triangulation,
    pub moves: Vec<FlipMove>,
    pub new_vertex: u32,
    /// Vertices of the original complex adjacent to the new vertex at the end.
    pub link_size: usize,
}

/// Inserts one vertex by a 1-4 flip into the lexicographically first facet,
/// then greedily applies 2-3 flips on triangles of the new vertex's link
/// until that link contains every original vertex. Each such flip is legal
/// exactly when the second apex is not yet adjacent to the new vertex, so the
/// link grows by one vertex per flip: n - 4 flips in total when it completes.
pub fn prepare_unflippable(t: &Triangulation) -> Result<Prepared> {
    let original: Vec<u32> = t.vertices().to_vec();
    let site = t.facets()[0];
    let new_vertex = t.max_label() + 1;
    let first = FlipMove::OneFour { site, new_vertex };
    let mut cur = flips::apply(t, &first)?;
    let mut moves = vec![first];
    loop {
        let link: Vec<u32> = cur.neighbors(new_vertex)?;
        if original.iter().all(|v| link.binary_search(v).is_ok()) {
            return Ok(Prepared {
                result: cur,
                moves,
                new_vertex,
                link_size: link.len(),
            });
        }
        // candidate triangles in link(new_vertex), lexicographic order
        let link_triangles = cur.link_of_vertex(new_vertex)?.link;
        let mut chosen = None;
        for tri in link_triangles {
            let [a, b] = flips::apexes(&cur, tri)?;
            let other = if a == new_vertex { b } else { a };
            if link.binary_search(&other).is_err() {
                chosen = Some(FlipMove::TwoThree { triangle: tri });
                break;
            }
        }
        match chosen {
            Some(m) => {
                cur = flips::apply(&cur, &m)?;
                moves.push(m);
            }
            None => return Err(Error::PreparationStalled(link.len())),
        }
    }
}

/// Reduces a triangulation toward the simplex boundary: runs the §-style
/// pipeline (vertex insertion and link expansion) first when no
/// vertex-preserving move is legal, then anneals with the reduction
/// objective. Success certifies the input is a 3-sphere.
pub fn reduce_to_simplex(t: &Triangulation, config: &AnnealConfig) -> Result<AnnealResult> {
    if is_simplex_boundary(t) {
        return Ok(AnnealResult {
            final_state: t.clone(),
            trace: Vec::new(),
            best_cost: 0,
            success: true,
            proposals: 0,
            applied: 0,
        });
    }
    let (start, mut prefix) =
        if flips::enumerate_moves(t, &FlipKind::VERTEX_PRESERVING).is_empty() {
            let p = prepare_unflippable(t)?;
            (p.result, p.moves)
        } else {
            (t.clone(), Vec::new())
        };
    let mut r = run(&start, Objective::Reduction, config)?;
    prefix.extend(r.trace);
    r.applied = prefix.len();
    r.trace = prefix;
    Ok(r)
}
