//! Integer simplicial homology via Smith normal form, used to screen out
//! non-spheres. Boundary maps use the ascending-vertex orientation with signs
//! (-1)^i, so the chain identity ∂∘∂ = 0 is directly testable. SNF runs over
//! arbitrary-precision integers; intermediate entries outgrow 64 bits even on
//! moderate complexes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::complex::Triangulation;

/// A dense integer matrix carrying one boundary map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        IntegerMatrix {
            rows: r,
            cols: c,
            data: rows
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.data[i][j] = value.into();
    }

    pub fn multiply(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let term = &self.data[i][k] * &rhs.data[k][j];
                    out.data[i][j] += term;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|row| row.iter().all(|x| x.is_zero()))
    }
}

/// The matrix of ∂_k mapping k-simplices to (k-1)-simplices, k in 1..=3.
/// Simplices index rows/columns in ascending lexicographic order.
pub fn boundary_matrix(t: &Triangulation, k: usize) -> IntegerMatrix {
    assert!((1..=3).contains(&k), "boundary maps exist for k in 1..=3");
    let vertices: Vec<Vec<u32>> = t.vertices().iter().map(|&v| vec![v]).collect();
    let edges: Vec<Vec<u32>> = t.edges().map(|(e, _)| e.to_vec()).collect();
    let triangles: Vec<Vec<u32>> = t.triangles().map(|tri| tri.to_vec()).collect();
    let facets: Vec<Vec<u32>> = t.facets().iter().map(|f| f.to_vec()).collect();
    let (lower, upper) = match k {
        1 => (&vertices, &edges),
        2 => (&edges, &triangles),
        _ => (&triangles, &facets),
    };
    let index: std::collections::BTreeMap<&[u32], usize> = lower
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let mut m = IntegerMatrix::zeros(lower.len(), upper.len());
    for (j, simplex) in upper.iter().enumerate() {
        for (i, _) in simplex.iter().enumerate() {
            let mut face = simplex.clone();
            face.remove(i);
            let row = index[face.as_slice()];
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m.set(row, j, sign);
        }
    }
    m
}

/// Invariant factors of an integer matrix: a list of length min(rows, cols)
/// with d1 | d2 | ... | dr followed by zeros. The pivot is always the entry
/// of smallest nonzero absolute value in the remaining submatrix.
pub fn smith_normal_form(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut a = m.data.clone();
    let rows = m.rows;
    let cols = m.cols;
    let bound = rows.min(cols);
    let mut diag: Vec<BigInt> = Vec::with_capacity(bound);

    for t in 0..bound {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if a[pi][pj].abs() <= a[i][j].abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                // remaining submatrix is zero
                for _ in t..bound {
                    diag.push(BigInt::zero());
                }
                return finish(diag, bound);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..cols {
                        let sub = &q * &a[t][j];
                        a[i][j] -= sub;
                    }
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in t..rows {
                        let sub = &q * &a[i][t];
                        a[i][j] -= sub;
                    }
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(a[t][t].abs());
    }
    finish(diag, bound)
}

fn finish(mut diag: Vec<BigInt>, bound: usize) -> Vec<BigInt> {
    diag.retain(|d| !d.is_zero());
    // pairwise gcd/lcm sweep enforces the divisibility chain
    loop {
        let mut changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                if (&diag[j] % &diag[i]).is_zero() {
                    continue;
                }
                let g = diag[i].gcd(&diag[j]);
                let l = (&diag[i] * &diag[j]) / &g;
                diag[i] = g;
                diag[j] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    diag.sort();
    while diag.len() < bound {
        diag.push(BigInt::zero());
    }
    diag
}

fn rank_of(snf: &[BigInt]) -> usize {
    snf.iter().filter(|d| !d.is_zero()).count()
}

/// Betti numbers and torsion coefficients for dimensions 0..=3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub betti: [usize; 4],
    pub torsion: [Vec<BigInt>; 4],
}

impl HomologyProfile {
    /// The profile of the 3-sphere: betti (1,0,0,1), torsion-free.
    pub fn sphere() -> Self {
        HomologyProfile {
            betti: [1, 0, 0, 1],
            torsion: Default::default(),
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(|t| t.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti[0] as i64 - self.betti[1] as i64 + self.betti[2] as i64 - self.betti[3] as i64
    }
}

impl fmt::Display for HomologyProfile {
    /// One line, e.g. `H0=Z H1=Z/2 H2=0 H3=Z`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..4 {
            if k > 0 {
                write!(out, " ")?;
            }
            write!(out, "H{k}=")?;
            let mut terms: Vec<String> = Vec::new();
            match self.betti[k] {
                0 => {}
                1 => terms.push("Z".into()),
                b => terms.push(format!("Z^{b}")),
            }
            for d in &self.torsion[k] {
                terms.push(format!("Z/{d}"));
            }
            if terms.is_empty() {
                write!(out, "0")?;
            } else {
                write!(out, "{}", terms.join("+"))?;
            }
        }
        Ok(())
    }
}

/// Computes integer homology in all four dimensions.
pub fn homology_profile(t: &Triangulation) -> HomologyProfile {
    let fv = t.f_vector();
    let counts = [fv.v, fv.e, fv.f, fv.t];
    let snfs: Vec<Vec<BigInt>> = (1..=3).map(|k| smith_normal_form(&boundary_matrix(t, k))).collect();
    let ranks = [
        0,
        rank_of(&snfs[0]),
        rank_of(&snfs[1]),
        rank_of(&snfs[2]),
        0,
    ];
    let mut betti = [0usize; 4];
    let mut torsion: [Vec<BigInt>; 4] = Default::default();
    for k in 0..4 {
        betti[k] = counts[k] - ranks[k] - ranks[k + 1];
        if k < 3 {
            torsion[k] = snfs[k]
                .iter()
                .filter(|d| !d.is_zero() && **d > BigInt::from(1))
                .cloned()
                .collect();
        }
    }
    HomologyProfile { betti, torsion }
}

/// True iff homology matches the 3-sphere exactly. Necessary but not
/// sufficient for sphericity; the operational certificate is a successful
/// reduction to the simplex boundary.
pub fn is_sphere_candidate(t: &Triangulation) -> bool {
    homology_profile(t) == HomologyProfile::sphere()
}
