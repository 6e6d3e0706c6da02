use std::time::Instant;

use bistellar::explorer::{bfs_component, BfsLimits};
use bistellar::flips::FlipKind;
use bistellar::generators;

fn main() {
    for n in [6, 7, 8, 9] {
        let start = generators::stacked_sphere(n, 1).unwrap();
        let t0 = Instant::now();
        let report = bfs_component(&start, &FlipKind::VERTEX_PRESERVING, &BfsLimits::default());
        println!(
            "n={} classes={} seeds={} depth={} exhausted={} elapsed={:?}",
            n,
            report.class_count,
            report.seed_classes.len(),
            report.max_depth,
            report.frontier_exhausted,
            t0.elapsed()
        );
    }
}
