//! Double description over exact integers: starting from the nonnegative
//! orthant (which is pointed, so extreme rays are well defined throughout),
//! halfspaces through the origin are inserted one at a time and the extreme
//! rays maintained with the combinatorial adjacency test. Also hosts a
//! brute-force facet enumeration for the convex hull of a small point set,
//! used to emit an inspectable H-representation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::Rational;

use super::linalg::{nullspace, rank};

struct Ray {
    v: Vec<BigInt>,
    /// Bitmask of tight constraints: bits `0..dim` are the orthant planes,
    /// bit `dim + k` is the k-th inserted halfspace.
    zeros: u64,
}

fn dot(h: &[BigInt], v: &[BigInt]) -> BigInt {
    h.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if !g.is_zero() && g != BigInt::from(1) {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Extreme rays of `{x in R^dim : x >= 0, h.x >= 0 for all h}`.
pub(crate) fn orthant_cone_rays(dim: usize, halfspaces: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    assert!(dim + halfspaces.len() <= 64, "zero-set bitmask is a u64");
    let orthant_mask: u64 = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
    let mut rays: Vec<Ray> = (0..dim)
        .map(|i| {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            Ray { v, zeros: orthant_mask & !(1u64 << i) }
        })
        .collect();

    for (k, h) in halfspaces.iter().enumerate() {
        let this_bit = 1u64 << (dim + k);
        let evals: Vec<BigInt> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for (i, e) in evals.iter().enumerate() {
            if e.is_positive() {
                positive.push(i);
            } else if e.is_negative() {
                negative.push(i);
            } else {
                rays[i].zeros |= this_bit;
            }
        }
        if negative.is_empty() {
            continue;
        }

        let mut created: Vec<Ray> = Vec::new();
        for &p in &positive {
            for &n in &negative {
                let common = rays[p].zeros & rays[n].zeros;
                // A pair spanning a two-dimensional face shares at least
                // dim - 2 tight constraints.
                if (common.count_ones() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = !rays.iter().enumerate().any(|(idx, r)| {
                    idx != p && idx != n && common & !r.zeros == 0
                });
                if !adjacent {
                    continue;
                }
                let combined: Vec<BigInt> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[n].v)
                    .map(|(vp, vn)| &evals[p] * vn - &evals[n] * vp)
                    .collect();
                let v = primitive(combined);
                // Recompute the zero set exactly; degenerate inputs can make
                // it strictly larger than the inherited one.
                let mut zeros = 0u64;
                for (c, value) in v.iter().enumerate() {
                    if value.is_zero() {
                        zeros |= 1u64 << c;
                    }
                }
                for (m, prev) in halfspaces.iter().enumerate().take(k + 1) {
                    if dot(prev, &v).is_zero() {
                        zeros |= 1u64 << (dim + m);
                    }
                }
                created.push(Ray { v, zeros });
            }
        }

        let mut survivors = Vec::with_capacity(rays.len());
        for (i, ray) in rays.into_iter().enumerate() {
            if !evals[i].is_negative() {
                survivors.push(ray);
            }
        }
        survivors.extend(created);
        rays = survivors;
    }

    rays.into_iter().map(|r| r.v).collect()
}

/// One relation `coefficients . x (= | <=) rhs` of an H-representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRelation {
    pub coefficients: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearRelation {
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.coefficients.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// An H-representation of a polytope: the affine hull as equalities plus one
/// inequality per facet (`coefficients . x <= rhs`).
#[derive(Debug, Clone)]
pub struct HRepresentation {
    pub equalities: Vec<LinearRelation>,
    pub inequalities: Vec<LinearRelation>,
}

impl HRepresentation {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|r| r.evaluate(x) == r.rhs)
            && self.inequalities.iter().all(|r| r.evaluate(x) <= r.rhs)
    }
}

fn canonical(mut coefficients: Vec<Rational>, rhs: Rational) -> LinearRelation {
    // Scale so the first nonzero coefficient has absolute value one; callers
    // fix the orientation before this point.
    let scale = coefficients
        .iter()
        .chain(std::iter::once(&rhs))
        .find(|c| !c.is_zero())
        .map(|c| c.abs())
        .unwrap_or_else(num_traits::One::one);
    for c in &mut coefficients {
        *c /= &scale;
    }
    LinearRelation { coefficients, rhs: rhs / scale }
}

/// Facet enumeration for the convex hull of a small set of points, by testing
/// every maximal affinely independent subset for a supporting hyperplane.
/// Exponential in general and entirely adequate at this crate's sizes.
pub(crate) fn hull_h_representation(points: &[Vec<Rational>]) -> HRepresentation {
    assert!(!points.is_empty());
    let dim = points[0].len();
    let origin = &points[0];
    let directions: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect())
        .collect();

    // Affine hull: one equality per nullspace direction of the span.
    let affine_rank = rank(directions.clone());
    let equalities: Vec<LinearRelation> = nullspace(directions.clone())
        .into_iter()
        .map(|normal| {
            let rhs = normal.iter().zip(origin).map(|(a, b)| a * b).sum();
            canonical(normal, rhs)
        })
        .collect();
    debug_assert_eq!(equalities.len(), dim - affine_rank);

    if affine_rank == 0 {
        // A single point; the equalities already pin it down.
        return HRepresentation { equalities, inequalities: Vec::new() };
    }

    // A facet of an affine_rank-dimensional polytope is spanned by
    // affine_rank affinely independent points.
    let hull_normals = nullspace(directions);
    let mut inequalities: Vec<LinearRelation> = Vec::new();
    let mut subset: Vec<usize> = (0..affine_rank).collect();
    let n = points.len();
    loop {
        if let Some(facet) = supporting_facet(points, &subset, &hull_normals) {
            if !inequalities.contains(&facet) {
                inequalities.push(facet);
            }
        }
        // Next combination in lexicographic order.
        let mut i = affine_rank;
        loop {
            if i == 0 {
                return HRepresentation { equalities, inequalities };
            }
            i -= 1;
            if subset[i] != i + n - affine_rank {
                subset[i] += 1;
                for j in i + 1..affine_rank {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// If the subset spans a hyperplane (within the affine hull) with all points
/// on one side, returns the canonical supporting inequality.
fn supporting_facet(
    points: &[Vec<Rational>],
    subset: &[usize],
    hull_normals: &[Vec<Rational>],
) -> Option<LinearRelation> {
    let base = &points[subset[0]];
    let dim = base.len();
    // The facet normal must annihilate the facet's directions while staying
    // inside the hull's direction space: stack the facet directions with the
    // hull normals and take the nullspace.
    let mut system: Vec<Vec<Rational>> = subset[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    system.extend(hull_normals.iter().cloned());
    let candidates = nullspace(system);
    if candidates.len() != 1 {
        // Subset is affinely dependent (normal not unique) or spans the hull.
        return None;
    }
    let mut normal = candidates.into_iter().next().unwrap();
    let mut rhs: Rational = normal.iter().zip(base).map(|(a, b)| a * b).sum();

    let mut has_below = false;
    let mut has_above = false;
    for p in points {
        let value: Rational = normal.iter().zip(p).map(|(a, b)| a * b).sum();
        if value > rhs {
            has_above = true;
        } else if value < rhs {
            has_below = true;
        }
    }
    match (has_above, has_below) {
        (true, true) => None,
        (false, false) => None, // subset spans the whole hull, not a facet
        (true, false) => {
            for c in &mut normal {
                *c = -c.clone();
            }
            rhs = -rhs;
            debug_assert_eq!(normal.len(), dim);
            Some(canonical(normal, rhs))
        }
        (false, true) => Some(canonical(normal, rhs)),
    }
}
