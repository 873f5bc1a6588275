//! Reference computations that share no code with the library's solvers.
#![allow(dead_code)]

use rand::Rng;

/// Probability box of one outcome plus its utility.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub utility: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Vertices of `{p : lo <= p <= hi, sum p = 1}`. At a vertex every
/// coordinate but at most one sits on a bound.
pub fn box_simplex_vertices(cells: &[Cell]) -> Vec<Vec<f64>> {
    let n = cells.len();
    let mut out = Vec::new();
    for free in 0..n {
        for mask in 0u32..(1 << (n - 1)) {
            let mut p = vec![0.0; n];
            let mut bit = 0;
            let mut sum = 0.0;
            for i in 0..n {
                if i == free {
                    continue;
                }
                p[i] = if mask & (1 << bit) != 0 { cells[i].hi } else { cells[i].lo };
                sum += p[i];
                bit += 1;
            }
            let rest = 1.0 - sum;
            if rest >= cells[free].lo - 1e-12 && rest <= cells[free].hi + 1e-12 {
                p[free] = rest;
                out.push(p);
            }
        }
    }
    out
}

fn dot(cells: &[Cell], p: &[f64]) -> f64 {
    cells.iter().zip(p).map(|(c, x)| c.utility * x).sum()
}

/// Min and max expected utility over the polytope's vertices.
pub fn lp_by_vertices(cells: &[Cell]) -> (f64, f64) {
    let verts = box_simplex_vertices(cells);
    assert!(!verts.is_empty(), "infeasible box");
    verts.iter().map(|p| dot(cells, p)).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

/// Min and max over a lattice on the simplex with `steps` divisions;
/// only lattice points inside the box count.
pub fn lp_by_grid(cells: &[Cell], steps: u32) -> (f64, f64) {
    fn rec(cells: &[Cell], steps: u32, left: u32, i: usize, p: &mut Vec<f64>, acc: &mut (f64, f64)) {
        let h = 1.0 / steps as f64;
        if i == cells.len() - 1 {
            let x = left as f64 * h;
            if x >= cells[i].lo - 1e-12 && x <= cells[i].hi + 1e-12 {
                p.push(x);
                let v = dot(cells, p);
                acc.0 = acc.0.min(v);
                acc.1 = acc.1.max(v);
                p.pop();
            }
            return;
        }
        for k in 0..=left {
            let x = k as f64 * h;
            if x < cells[i].lo - 1e-12 || x > cells[i].hi + 1e-12 {
                continue;
            }
            p.push(x);
            rec(cells, steps, left - k, i + 1, p, acc);
            p.pop();
        }
    }
    let mut acc = (f64::INFINITY, f64::NEG_INFINITY);
    rec(cells, steps, steps, 0, &mut Vec::new(), &mut acc);
    acc
}

/// Random box around a random distribution, so always feasible.
pub fn random_feasible_cells(rng: &mut impl Rng, n: usize) -> Vec<Cell> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter()
        .map(|r| {
            let q = r / total;
            let lo = if rng.gen_bool(0.2) { q } else { q * rng.gen::<f64>() };
            let hi = if rng.gen_bool(0.2) { q } else { q + (1.0 - q) * rng.gen::<f64>() };
            Cell { utility: rng.gen_range(-50.0..50.0), lo, hi }
        })
        .collect()
}

/// A random distribution inside the box: random convex combination of
/// the polytope's vertices.
pub fn random_feasible_point(rng: &mut impl Rng, cells: &[Cell]) -> Vec<f64> {
    let verts = box_simplex_vertices(cells);
    let w: Vec<f64> = verts.iter().map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
    let total: f64 = w.iter().sum();
    (0..cells.len())
        .map(|i| verts.iter().zip(&w).map(|(v, wi)| v[i] * wi / total).sum())
        .collect()
}

pub fn expected_utility(cells: &[Cell], p: &[f64]) -> f64 {
    dot(cells, p)
}

/// Fréchet bounds by brute force over joint distributions on the four
/// atoms AB, A~B, ~AB, ~A~B, in units of 1/100. Marginal bounds are given
/// in the same units.
pub fn conjunction_bounds_brute(a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
    let mut lo = u32::MAX;
    let mut hi = 0;
    for ab in 0..=100u32 {
        for a_nb in 0..=100 - ab {
            for na_b in 0..=100 - ab - a_nb {
                let pa = ab + a_nb;
                let pb = ab + na_b;
                if (a.0..=a.1).contains(&pa) && (b.0..=b.1).contains(&pb) {
                    lo = lo.min(ab);
                    hi = hi.max(ab);
                }
            }
        }
    }
    (lo, hi)
}

/// Closed form Clopper-Pearson endpoints at the boundary counts.
pub fn cp_all_failures_upper(n: u64, alpha_tail: f64) -> f64 {
    1.0 - alpha_tail.powf(1.0 / n as f64)
}

pub fn cp_all_successes_lower(n: u64, alpha_tail: f64) -> f64 {
    alpha_tail.powf(1.0 / n as f64)
}
