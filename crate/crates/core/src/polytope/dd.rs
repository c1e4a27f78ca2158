//! Double description: extreme rays of pointed rational polyhedral cones.

use num_traits::Zero;

use crate::exactnum::{RMatrix, RVector, Rational};
use crate::Error;

/// An extreme ray of the cone, as a primitive integer vector, together with
/// the indices of the input constraints it is tight on (ascending).
#[derive(Debug)]
pub struct ExtremeRay {
    pub vec: RVector,
    pub tight: Vec<usize>,
}

struct Ray {
    vec: RVector,
    /// Tightness bitmask over the deduplicated constraint list, covering all
    /// constraints (processed or not); adjacency tests mask with `processed`.
    tight: Vec<u64>,
}

fn words(len: usize) -> usize {
    len.div_ceil(64)
}

fn set_bit(mask: &mut [u64], i: usize) {
    mask[i / 64] |= 1 << (i % 64);
}

fn and_masks(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

impl Ray {
    fn new(vec: &RVector, uniques: &[RVector]) -> Ray {
        let (prim, _) = vec.primitive().expect("zero vector is not a ray");
        let mut tight = vec![0u64; words(uniques.len())];
        for (i, g) in uniques.iter().enumerate() {
            if g.dot(&prim).is_zero() {
                set_bit(&mut tight, i);
            }
        }
        Ray { vec: prim, tight }
    }
}

/// All extreme rays of { x in Q^dim : <g, x> >= 0 for every g in constraints }.
///
/// The cone must be pointed, i.e. the constraint normals must span Q^dim;
/// otherwise this fails with `DependentVectors`. The zero cone yields an
/// empty list. Output order is deterministic in the input order.
pub fn extreme_rays(dim: usize, constraints: &[RVector]) -> Result<Vec<ExtremeRay>, Error> {
    // Deduplicate up to positive scaling; tightness is scale-invariant.
    let mut uniques: Vec<RVector> = Vec::new();
    for g in constraints {
        assert_eq!(g.dim(), dim);
        if g.is_zero() {
            continue;
        }
        let (prim, _) = g.primitive()?;
        if !uniques.contains(&prim) {
            uniques.push(prim);
        }
    }

    if dim == 0 {
        return Ok(Vec::new());
    }

    // Seed with dim independent constraints; their inverse matrix columns
    // span the simplicial cone cut out by just those constraints.
    let mut basis_rows: Vec<usize> = Vec::new();
    for i in 0..uniques.len() {
        if basis_rows.len() == dim {
            break;
        }
        let mut trial: Vec<RVector> = basis_rows.iter().map(|&j| uniques[j].clone()).collect();
        trial.push(uniques[i].clone());
        if RMatrix::new(trial, dim).rank() == basis_rows.len() + 1 {
            basis_rows.push(i);
        }
    }
    if basis_rows.len() < dim {
        return Err(Error::DependentVectors);
    }

    let seed = RMatrix::new(basis_rows.iter().map(|&i| uniques[i].clone()).collect(), dim);
    let inv = seed.inverse().expect("independent rows invert");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col = RVector::new((0..dim).map(|i| inv.entry(i, j).clone()).collect());
            Ray::new(&col, &uniques)
        })
        .collect();

    let mut processed = vec![0u64; words(uniques.len())];
    for &i in &basis_rows {
        set_bit(&mut processed, i);
    }

    for ci in 0..uniques.len() {
        if basis_rows.contains(&ci) {
            continue;
        }
        let g = &uniques[ci];
        let dots: Vec<Rational> = rays.iter().map(|r| g.dot(&r.vec)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| dots[i] < Rational::zero()).collect();
        if neg.is_empty() {
            set_bit(&mut processed, ci);
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| dots[i] > Rational::zero()).collect();

        let mut fresh: Vec<Ray> = Vec::new();
        for &ip in &pos {
            for &im in &neg {
                // Combinatorial adjacency: rp and rm span a 2-face iff no other
                // extreme ray is tight on everything they are both tight on.
                let common = and_masks(
                    &and_masks(&rays[ip].tight, &rays[im].tight),
                    &processed,
                );
                if (popcount(&common) as usize) + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != ip && k != im && subset(&common, &r.tight));
                if blocked {
                    continue;
                }
                // <g, w> = 0 and w stays in every halfspace both parents obey.
                let w = rays[im]
                    .vec
                    .scale(&dots[ip])
                    .sub(&rays[ip].vec.scale(&dots[im]));
                fresh.push(Ray::new(&w, &uniques));
            }
        }

        let keep: Vec<Ray> = rays
            .drain(..)
            .enumerate()
            .filter(|(i, _)| dots[*i] >= Rational::zero())
            .map(|(_, r)| r)
            .collect();
        rays = keep;
        rays.extend(fresh);
        set_bit(&mut processed, ci);
        if rays.is_empty() {
            break;
        }
    }

    // Report tightness against the caller's original indexing.
    Ok(rays
        .into_iter()
        .map(|r| {
            let tight = constraints
                .iter()
                .enumerate()
                .filter(|(_, g)| g.dot(&r.vec).is_zero())
                .map(|(i, _)| i)
                .collect();
            ExtremeRay { vec: r.vec, tight }
        })
        .collect())
}
