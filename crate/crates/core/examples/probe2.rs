use std::time::Instant;

use bistellar::anneal::{self, AnnealConfig, Objective};
use bistellar::flips::FlipKind;
use bistellar::generators;
use rayon::prelude::*;

fn main() {
    // criterion-6 shape: 100 mixed walks from the simplex, reduce back
    let t0 = Instant::now();
    let results: Vec<(bool, usize, usize)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            // 50 mixed 1-4/2-3 steps, holding n at 20 once reached
            let mut t = generators::boundary_simplex();
            let mut left = 50;
            while left > 0 {
                let kinds: &[FlipKind] = if t.vertex_count() < 20 {
                    &[FlipKind::OneFour, FlipKind::TwoThree]
                } else {
                    &[FlipKind::TwoThree]
                };
                let w = generators::random_walk(&t, kinds, 1, seed.wrapping_add(left));
                if w.steps_applied == 0 {
                    break;
                }
                t = w.result;
                left -= 1;
            }
            let n = t.vertex_count();
            let r = anneal::reduce_to_simplex(&t, &AnnealConfig::with_seed(seed))
                .expect("valid run");
            (r.success, n, r.proposals)
        })
        .collect();
    let ok = results.iter().filter(|r| r.0).count();
    let max_n = results.iter().map(|r| r.1).max().unwrap();
    let max_prop = results.iter().map(|r| r.2).max().unwrap();
    println!(
        "reduction: {ok}/100 success, max walk n = {max_n}, max proposals = {max_prop}, elapsed {:?}",
        t0.elapsed()
    );

    // criterion-7 shape: stacked-potential annealing from cyclic spheres
    for n in 7..=10 {
        let t0 = Instant::now();
        let start = generators::cyclic_sphere(n).unwrap();
        let stats: Vec<(bool, usize)> = (0..100u64)
            .into_par_iter()
            .map(|seed| {
                let r = anneal::run(
                    &start,
                    Objective::StackedPotential { weight: None },
                    &AnnealConfig::with_seed(seed),
                )
                .expect("valid run");
                (r.success, r.proposals)
            })
            .collect();
        let ok = stats.iter().filter(|s| s.0).count();
        let mean_prop: usize = stats.iter().map(|s| s.1).sum::<usize>() / 100;
        let max_prop = stats.iter().map(|s| s.1).max().unwrap();
        println!(
            "stacked n={n}: {ok}/100 success, proposals mean {mean_prop} max {max_prop}, elapsed {:?}",
            t0.elapsed()
        );
    }
}
