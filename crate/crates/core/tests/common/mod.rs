#![allow(dead_code)]

use isotone_core::capacity::SubsetMask;
use isotone_core::isotone_certify::MaxAffineMap;
use isotone_core::{Capacity, DiscreteFunction};
use rand::Rng;

/// Random max-affine map with nonnegative gradients (about a fifth of the
/// entries exactly zero).
pub fn random_isotone_map(rng: &mut impl Rng) -> MaxAffineMap {
    let n = rng.random_range(1..=4);
    let m = rng.random_range(1..=3);
    let components = (0..m)
        .map(|_| {
            (0..rng.random_range(1..=5))
                .map(|_| {
                    let a = (0..n)
                        .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..2.0) })
                        .collect();
                    (a, rng.random_range(-1.0..1.0))
                })
                .collect()
        })
        .collect();
    MaxAffineMap::from_pieces(n, components).unwrap()
}

/// Gives one piece a negative gradient entry and lifts its offset above
/// every other piece of its component, so it is active near the origin
/// and on the ε-interior of the cone.
pub fn mutate_with_active_negative_gradient(rng: &mut impl Rng, map: &MaxAffineMap) -> MaxAffineMap {
    let mut comps: Vec<Vec<(Vec<f64>, f64)>> = map
        .components()
        .iter()
        .map(|c| c.pieces.iter().map(|p| (p.a.clone(), p.b)).collect())
        .collect();
    let j = rng.random_range(0..comps.len());
    let k = rng.random_range(0..comps[j].len());
    let i = rng.random_range(0..map.input_dim());
    let top = comps[j].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    comps[j][k].0[i] = -rng.random_range(0.5..2.0);
    comps[j][k].1 = top + 1.0;
    MaxAffineMap::from_pieces(map.input_dim(), comps).unwrap()
}

/// `∫_0^∞ μ(A ∩ {f ≥ t}) dt + ∫_{-∞}^0 [μ(A ∩ {f ≥ t}) − μ(A)] dt` by the
/// midpoint rule with `steps` cells over `[min(0, min f), max(0, max f)]`,
/// scanning the level set element by element at every node.
pub fn riemann_choquet(f: &DiscreteFunction, c: &Capacity, a: SubsetMask, steps: usize) -> f64 {
    let v = f.values();
    let members: Vec<usize> = (0..v.len()).filter(|i| a & (1 << i) != 0).collect();
    let lo = members.iter().map(|&i| v[i]).fold(0.0, f64::min);
    let hi = members.iter().map(|&i| v[i]).fold(0.0, f64::max);
    let h = (hi - lo) / steps as f64;
    if h == 0.0 {
        return 0.0;
    }
    let total = c.get(a);
    let mut sum = 0.0;
    for s in 0..steps {
        let t = lo + (s as f64 + 0.5) * h;
        let mut level: SubsetMask = 0;
        for &i in &members {
            if v[i] >= t {
                level |= 1 << i;
            }
        }
        let mu = c.get(level);
        sum += if t >= 0.0 { mu } else { mu - total };
    }
    sum * h
}
