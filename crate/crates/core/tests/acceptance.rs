//! Acceptance gate: one test per criterion, all exact unless a tolerance is
//! stated. Randomness is ChaCha8 with fixed seeds, so every run checks the
//! same instances.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hadwiger_core::{
    disjoint_copies, equidecomposable, evaluate_valuation, hadwiger, homogeneous_components,
    invariance_cross_check, invariant_table, klain_schneider_eval, rat, ratio, surface_area_measure,
    tight_frames, to_f64, verify_certificate, Body, Certificate, CoefficientTable, Frame, Polytope,
    RMatrix, RVector, Rational, UnionBody, Verdict,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-8..=8), rng.gen_range(1..=4))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> RVector {
    RVector::new((0..n).map(|_| random_rational(rng)).collect())
}

/// Full-dimensional hull of a handful of random rational points.
fn random_polytope(rng: &mut ChaCha8Rng, n: usize) -> Polytope {
    let count = match n {
        2 => 6,
        3 => 8,
        _ => 12,
    };
    loop {
        let pts: Vec<RVector> = (0..count).map(|_| random_point(rng, n)).collect();
        let p = Polytope::hull(n, &pts).unwrap();
        if p.is_full_dimensional() {
            return p;
        }
    }
}

fn coordinate_value(body: &Body, u: &Frame) -> Rational {
    hadwiger(body, u).unwrap().coordinate_value
}

/// Every sign pattern of every tight frame changes H by exactly the product
/// of the signs.
#[test]
fn criterion_01_oddness() {
    let mut rng = rng(1);
    for trial in 0..200 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let body: Body = random_polytope(&mut rng, n).into();
        for u in tight_frames(body.pieces().first().unwrap()) {
            let base = coordinate_value(&body, &u);
            for mask in 0..1u32 << u.len() {
                let pattern: Vec<i8> = (0..u.len())
                    .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                let (flipped, sign) = u.sign_flip(&pattern).unwrap();
                assert_eq!(
                    coordinate_value(&body, &flipped),
                    rat(sign as i64) * &base,
                    "oddness failed on trial {trial}, frame {u:?}, mask {mask:b}"
                );
            }
        }
    }
    println!("criterion 1 PASS: oddness on 200 random polytopes");
}

/// Splitting a polytope by a hyperplane splits every H-value additively.
#[test]
fn criterion_02_additivity_under_hyperplane_cuts() {
    let mut rng = rng(2);
    for trial in 0..100 {
        let n = if trial % 5 < 3 { 2 } else { 3 };
        let p = random_polytope(&mut rng, n);
        // A cut through the interior: direction random, offset strictly
        // between the support values.
        let (h, c) = loop {
            let h = RVector::new((0..n).map(|_| rat(rng.gen_range(-3..=3))).collect());
            if h.is_zero() {
                continue;
            }
            let hi = p.support(&h);
            let lo = -p.support(&h.neg());
            if hi == lo {
                continue;
            }
            let w = ratio(rng.gen_range(1..=7), 8);
            break (h, &lo + w * (hi - &lo));
        };
        let (above, below) = p.cut_by_hyperplane(&h, &c).unwrap();
        let mut frames: BTreeSet<Frame> = tight_frames(&p).into_iter().collect();
        let halves: Vec<Polytope> = [above, below].into_iter().flatten().collect();
        for half in &halves {
            frames.extend(tight_frames(half));
        }
        for u in frames {
            let whole = coordinate_value(&p.clone().into(), &u);
            let parts: Rational = halves
                .iter()
                .map(|half| coordinate_value(&half.clone().into(), &u))
                .sum();
            assert_eq!(whole, parts, "additivity failed on trial {trial}, frame {u:?}");
        }
    }
    println!("criterion 2 PASS: additivity over 100 random hyperplane splits");
}

/// Embeds a random polytope of the block's dimension into the ambient
/// space, occupying the given coordinates.
fn block_polytope(rng: &mut ChaCha8Rng, n: usize, coords: &[usize]) -> Polytope {
    let d = coords.len();
    let small = if d == 1 {
        Polytope::hull(1, &[RVector::new(vec![rat(0)]), RVector::new(vec![random_rational(rng).abs() + rat(1)])])
            .unwrap()
    } else {
        random_polytope(rng, d)
    };
    let pts: Vec<RVector> = small
        .vertices()
        .iter()
        .map(|v| {
            let mut full = vec![rat(0); n];
            for (i, &c) in coords.iter().enumerate() {
                full[c] = v.coord(i).clone();
            }
            RVector::new(full)
        })
        .collect();
    Polytope::hull(n, &pts).unwrap()
}

/// H of degree k vanishes identically on Minkowski sums of k+1 blocks in
/// complementary coordinate subspaces.
#[test]
fn criterion_03_cylinder_vanishing() {
    let mut rng = rng(3);
    for trial in 0..50 {
        let n = if trial % 2 == 0 { 3 } else { 4 };
        // Partition the coordinates into k+1 contiguous nonempty blocks.
        let blocks: Vec<Vec<usize>> = {
            let parts = rng.gen_range(2..=n);
            let mut cuts: Vec<usize> = (1..n).collect();
            for i in (1..cuts.len()).rev() {
                cuts.swap(i, rng.gen_range(0..=i));
            }
            let mut chosen: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
            chosen.sort_unstable();
            chosen.push(n);
            let mut blocks = Vec::new();
            let mut start = 0;
            for end in chosen {
                blocks.push((start..end).collect());
                start = end;
            }
            blocks
        };
        let k = blocks.len() - 1;
        let mut cylinder = block_polytope(&mut rng, n, &blocks[0]);
        for block in &blocks[1..] {
            cylinder = cylinder.minkowski_sum(&block_polytope(&mut rng, n, block)).unwrap();
        }
        assert!(cylinder.is_full_dimensional());
        let wanted = n - k;
        let body: Body = cylinder.clone().into();
        let mut checked = 0;
        for u in tight_frames(&cylinder) {
            if u.len() == wanted {
                assert_eq!(
                    coordinate_value(&body, &u),
                    rat(0),
                    "nonzero H on cylinder, trial {trial}, frame {u:?}"
                );
                checked += 1;
            }
        }
        // Axis-aligned frames keep the check meaningful even when no tight
        // frame has the target length.
        if wanted < n {
            for start in 0..=(n - wanted) {
                let dirs: Vec<RVector> = (start..start + wanted).map(|i| RVector::unit(n, i)).collect();
                let u = Frame::new(n, dirs).unwrap();
                assert_eq!(coordinate_value(&body, &u), rat(0));
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
    println!("criterion 3 PASS: degree-k H vanishes on 50 random (k+1)-cylinders");
}

/// Dilation by m scales H of degree k by m^k, including over union bodies.
#[test]
fn criterion_04_homogeneity() {
    let mut rng = rng(4);
    for trial in 0..100 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let p = random_polytope(&mut rng, n);
        let body: Body = if trial % 5 == 0 {
            disjoint_copies(&p, 2).unwrap().into()
        } else {
            p.clone().into()
        };
        let m = rat(if trial % 3 == 0 { 3 } else { 2 });
        let dilated = body.dilate(&m).unwrap();
        let mut frames: BTreeSet<Frame> = BTreeSet::new();
        for piece in body.pieces() {
            frames.extend(tight_frames(piece));
        }
        for u in frames {
            let k = (n - u.len()) as i32;
            let scale = Rational::from_integer(m.to_integer().pow(k as u32));
            assert_eq!(
                coordinate_value(&dilated, &u),
                scale * coordinate_value(&body, &u),
                "homogeneity failed on trial {trial}, frame {u:?}"
            );
        }
    }
    println!("criterion 4 PASS: m^k homogeneity on 100 random bodies");
}

fn parallelepiped(n: usize, vectors: &[RVector]) -> Polytope {
    let mut pts = Vec::new();
    for mask in 0..1u32 << vectors.len() {
        let mut p = RVector::zero(n);
        for (i, v) in vectors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p = p.add(v);
            }
        }
        pts.push(p);
    }
    Polytope::hull(n, &pts).unwrap()
}

/// Swapping the dilation factors across complementary sub-parallelepipeds
/// leaves every invariant of degree <= 2 unchanged.
#[test]
fn criterion_05_factor_swap_invariants() {
    let mut rng = rng(5);
    let factors = [ratio(1, 2), rat(2), rat(3)];
    // In the plane, degree <= 2 means the whole table: the swapped bodies
    // are fully equidecomposable.
    for trial in 0..15 {
        let (a1, a2) = loop {
            let a1 = random_point(&mut rng, 2);
            let a2 = random_point(&mut rng, 2);
            if !RMatrix::new(vec![a1.clone(), a2.clone()], 2).det().is_zero() {
                break (a1, a2);
            }
        };
        let (lambda, mu) = (&factors[trial % 3], &factors[(trial + 1) % 3]);
        let x = parallelepiped(2, &[a1.scale(lambda), a2.scale(mu)]);
        let y = parallelepiped(2, &[a1.scale(mu), a2.scale(lambda)]);
        let (equal, wit) = equidecomposable(&x.into(), &y.into()).unwrap();
        assert!(equal, "trial {trial}: witnesses {wit:?}");
    }
    // In space, every H with |U| >= 1 agrees; the volumes genuinely differ.
    for trial in 0..15 {
        let a: Vec<RVector> = loop {
            let a: Vec<RVector> = (0..3).map(|_| random_point(&mut rng, 3)).collect();
            if !RMatrix::new(a.clone(), 3).det().is_zero() {
                break a;
            }
        };
        let (lambda, mu) = (&factors[trial % 3], &factors[(trial + 2) % 3]);
        let j = 1 + trial % 2;
        let scaled = |first: &Rational, second: &Rational| -> Vec<RVector> {
            a.iter()
                .enumerate()
                .map(|(i, v)| v.scale(if i < j { first } else { second }))
                .collect()
        };
        let x: Body = parallelepiped(3, &scaled(lambda, mu)).into();
        let y: Body = parallelepiped(3, &scaled(mu, lambda)).into();
        let mut frames: BTreeSet<Frame> = BTreeSet::new();
        for body in [&x, &y] {
            for piece in body.pieces() {
                frames.extend(tight_frames(piece).into_iter().filter(|u| !u.is_empty()));
            }
        }
        assert!(!frames.is_empty());
        for u in frames {
            assert_eq!(
                coordinate_value(&x, &u),
                coordinate_value(&y, &u),
                "swap invariance failed on trial {trial}, frame {u:?}"
            );
        }
    }
    println!("criterion 5 PASS: factor-swap leaves degree <= 2 invariants fixed");
}

/// The three golden decisions, exactly.
#[test]
fn criterion_06_golden_decisions() {
    let v = |c: &[i64]| RVector::from_ints(c);
    let square = Polytope::hull(2, &[v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
    let rect = Polytope::hull(
        2,
        &[
            v(&[0, 0]),
            v(&[2, 0]),
            RVector::new(vec![rat(0), ratio(1, 2)]),
            RVector::new(vec![rat(2), ratio(1, 2)]),
        ],
    )
    .unwrap();
    let (equal, _) = equidecomposable(&square.into(), &rect.into()).unwrap();
    assert!(equal, "square vs 2 x 1/2 rectangle must be equal");

    let t = Polytope::hull(2, &[v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]).unwrap();
    let (equal, witnesses) = equidecomposable(&t.clone().into(), &t.reflect().into()).unwrap();
    assert!(!equal, "a triangle is not equidecomposable with its reflection");
    let diagonal = Frame::new(2, vec![v(&[1, 1])]).unwrap();
    assert!(witnesses.contains(&diagonal), "witnesses {witnesses:?}");

    let mut rng = rng(6);
    for _ in 0..5 {
        let n = rng.gen_range(2..=3);
        let p = random_polytope(&mut rng, n);
        let t = random_point(&mut rng, n);
        let moved = p.translate(&t).unwrap();
        let (equal, wit) = equidecomposable(&p.into(), &moved.into()).unwrap();
        assert!(equal, "translate must preserve the table, witnesses {wit:?}");
    }
    println!("criterion 6 PASS: golden equidecomposability decisions");
}

/// Certificates: the rectangle certificate and random single-cut
/// certificates are accepted, and mutated translations are caught.
#[test]
fn criterion_07_certificate_soundness() {
    let v = |c: &[i64]| RVector::from_ints(c);
    let wide = Polytope::hull(2, &[v(&[0, 0]), v(&[2, 0]), v(&[0, 1]), v(&[2, 1])]).unwrap();
    let tall = Polytope::hull(2, &[v(&[0, 0]), v(&[1, 0]), v(&[0, 2]), v(&[1, 2])]).unwrap();
    let cert = Certificate {
        pieces: vec![
            Polytope::hull(2, &[v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap(),
            Polytope::hull(2, &[v(&[1, 0]), v(&[2, 0]), v(&[1, 1]), v(&[2, 1])]).unwrap(),
        ],
        translations: vec![v(&[0, 0]), v(&[-1, 1])],
    };
    let a: Body = wide.into();
    let b: Body = tall.into();
    assert_eq!(verify_certificate(&a, &b, &cert).unwrap(), Verdict::Accepted);
    let (equal, _) = invariance_cross_check(&a, &b, &cert).unwrap();
    assert!(equal);

    let mut rng = rng(7);
    for trial in 0..20 {
        let p = random_polytope(&mut rng, 2);
        // Cut strictly through the interior so both halves are polygons.
        let (halves, _) = loop {
            let h = RVector::new((0..2).map(|_| rat(rng.gen_range(-3..=3))).collect());
            if h.is_zero() {
                continue;
            }
            let hi = p.support(&h);
            let lo = -p.support(&h.neg());
            if hi == lo {
                continue;
            }
            let c = (&hi + &lo) / rat(2);
            let (above, below) = p.cut_by_hyperplane(&h, &c).unwrap();
            match (above, below) {
                (Some(x), Some(y)) if x.is_full_dimensional() && y.is_full_dimensional() => {
                    break (vec![x, y], h)
                }
                _ => continue,
            }
        };

        // Both halves moved by one common shift: target is the moved whole.
        let shift = random_point(&mut rng, 2);
        let target: Body = p.translate(&shift).unwrap().into();
        let source: Body = p.clone().into();
        let cert = Certificate {
            pieces: halves.clone(),
            translations: vec![shift.clone(), shift.clone()],
        };
        assert_eq!(
            verify_certificate(&source, &target, &cert).unwrap(),
            Verdict::Accepted,
            "trial {trial}: whole-shift certificate"
        );
        let (equal, wit) = invariance_cross_check(&source, &target, &cert).unwrap();
        assert!(equal, "trial {trial}: cross-check witnesses {wit:?}");

        // Halves pulled apart: target is the union of the moved halves.
        let width = p.support(&RVector::unit(2, 0))
            + p.support(&RVector::unit(2, 0).neg());
        let far = shift.add(&RVector::new(vec![&width + rat(1), rat(0)]));
        let moved = vec![
            halves[0].translate(&shift).unwrap(),
            halves[1].translate(&far).unwrap(),
        ];
        let split_target: Body = UnionBody::new(moved).unwrap().into();
        let cert = Certificate {
            pieces: halves.clone(),
            translations: vec![shift.clone(), far.clone()],
        };
        assert_eq!(
            verify_certificate(&source, &split_target, &cert).unwrap(),
            Verdict::Accepted,
            "trial {trial}: split certificate"
        );
        let (equal, wit) = invariance_cross_check(&source, &split_target, &cert).unwrap();
        assert!(equal, "trial {trial}: split cross-check witnesses {wit:?}");

        // A perturbed translation must be rejected against both targets.
        let nudge = RVector::new(vec![ratio(1, 7), ratio(1, 9)]);
        let mutated = Certificate {
            pieces: halves.clone(),
            translations: vec![shift.clone(), far.add(&nudge)],
        };
        assert!(
            matches!(
                verify_certificate(&source, &split_target, &mutated).unwrap(),
                Verdict::Rejected(_)
            ),
            "trial {trial}: mutated certificate slipped through"
        );
    }
    println!("criterion 7 PASS: certificate checks on the rectangle and 20 random cuts");
}

/// Interpolated homogeneous components scale exactly and sum back to the
/// valuation.
#[test]
fn criterion_08_homogeneous_decomposition() {
    let mut rng = rng(8);
    for trial in 0..50 {
        let n = if trial % 5 < 3 { 2 } else { 3 };
        let p = random_polytope(&mut rng, n);
        let body: Body = if trial % 4 == 0 {
            disjoint_copies(&p, 2).unwrap().into()
        } else {
            p.into()
        };
        let table = invariant_table(&body).unwrap();
        let mut coeffs: Vec<(Frame, Rational)> = Vec::new();
        for u in table.entries().keys() {
            if rng.gen_range(0..4) == 0 {
                continue;
            }
            let c = loop {
                let c = random_rational(&mut rng);
                if !c.is_zero() {
                    break c;
                }
            };
            coeffs.push((u.clone(), c));
        }
        if coeffs.is_empty() {
            continue;
        }
        let coeffs = CoefficientTable::new(n, coeffs).unwrap();

        let one = homogeneous_components(&body, &coeffs).unwrap();
        let two = homogeneous_components(&body.dilate(&rat(2)).unwrap(), &coeffs).unwrap();
        for (class, components) in &one.per_class {
            let scaled = &two.per_class[class];
            for (i, x) in components.iter().enumerate() {
                let degree = (i + 1) as u32;
                assert_eq!(
                    scaled[i],
                    Rational::from_integer(2i64.pow(degree).into()) * x,
                    "trial {trial}: degree {degree} of {class:?} does not scale"
                );
            }
        }
        let evaluation = evaluate_valuation(&body, &coeffs).unwrap();
        for (class, contribution) in &evaluation.per_frame {
            let total: Rational = one.per_class[class].iter().sum();
            assert_eq!(&total, contribution, "trial {trial}: components of {class:?} do not sum");
        }
    }
    println!("criterion 8 PASS: exact homogeneous decomposition on 50 random bodies");
}

/// Independent volume computation: a determinant fan from the
/// lexicographically largest vertex, recursing the same way on facets.
fn fan_simplices(p: &Polytope) -> Vec<Vec<RVector>> {
    let verts = p.vertices();
    if p.dim() == 0 {
        return vec![vec![verts[0].clone()]];
    }
    // Vertices are stored in lexicographic order, so the base is the last.
    let base_index = verts.len() - 1;
    let mut simplices = Vec::new();
    for facet in p.facets() {
        if facet.vertices.contains(&base_index) {
            continue;
        }
        let pts: Vec<RVector> = facet.vertices.iter().map(|&i| verts[i].clone()).collect();
        let face = Polytope::hull(p.ambient_dim(), &pts).unwrap();
        for mut s in fan_simplices(&face) {
            s.push(verts[base_index].clone());
            simplices.push(s);
        }
    }
    simplices
}

fn fan_volume(p: &Polytope) -> Rational {
    let n = p.ambient_dim();
    let factorial: i64 = (1..=n as i64).product();
    fan_simplices(p)
        .into_iter()
        .map(|s| {
            let rows: Vec<RVector> = s[..n].iter().map(|v| v.sub(&s[n])).collect();
            RMatrix::new(rows, n).det().abs()
        })
        .sum::<Rational>()
        / rat(factorial)
}

/// Exact volumes agree with an independent determinant fan and with Monte
/// Carlo sampling.
#[test]
fn criterion_09_volume_oracle() {
    let mut rng = rng(9);
    for trial in 0..50 {
        let n = if trial % 5 < 3 { 2 } else { 3 };
        let p = random_polytope(&mut rng, n);
        let exact = p.volume().unwrap();
        assert_eq!(exact, fan_volume(&p), "fan volume mismatch on trial {trial}");

        // Monte Carlo over a box padded so the hit rate stays inside (0,1).
        let lo: Vec<f64> = (0..n)
            .map(|i| {
                p.vertices().iter().map(|v| to_f64(v.coord(i))).fold(f64::INFINITY, f64::min) - 0.25
            })
            .collect();
        let hi: Vec<f64> = (0..n)
            .map(|i| {
                p.vertices()
                    .iter()
                    .map(|v| to_f64(v.coord(i)))
                    .fold(f64::NEG_INFINITY, f64::max)
                    + 0.25
            })
            .collect();
        let box_volume: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
        let walls: Vec<(Vec<f64>, f64)> = p
            .halfspaces()
            .1
            .iter()
            .map(|(normal, offset)| {
                (normal.coords().iter().map(to_f64).collect(), to_f64(offset))
            })
            .collect();
        const SAMPLES: u32 = 1_000_000;
        let mut hits: u32 = 0;
        let mut point = vec![0.0; n];
        for _ in 0..SAMPLES {
            for i in 0..n {
                point[i] = rng.gen_range(lo[i]..hi[i]);
            }
            if walls
                .iter()
                .all(|(w, c)| w.iter().zip(&point).map(|(a, x)| a * x).sum::<f64>() <= *c)
            {
                hits += 1;
            }
        }
        let rate = f64::from(hits) / f64::from(SAMPLES);
        let estimate = rate * box_volume;
        let standard_error = box_volume * (rate * (1.0 - rate) / f64::from(SAMPLES)).sqrt();
        let gap = (to_f64(&exact) - estimate).abs();
        assert!(
            gap <= 3.0 * standard_error,
            "trial {trial}: volume {} vs estimate {estimate} is {:.2} standard errors off",
            to_f64(&exact),
            gap / standard_error
        );
    }
    println!("criterion 9 PASS: volumes match a determinant fan and Monte Carlo");
}

/// Restrictions of linear functions integrate to zero against the surface
/// measure (the Minkowski relation), so only the volume term survives.
#[test]
fn criterion_10_klain_schneider_linear_null() {
    let mut rng = rng(10);
    for trial in 0..50 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let p = random_polytope(&mut rng, n);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let linear = |u: &[f64]| u.iter().zip(&a).map(|(x, c)| x * c).sum::<f64>();
        let surface_term = klain_schneider_eval(&p, &rat(0), linear).unwrap();
        assert!(
            surface_term.abs() < 1e-9,
            "trial {trial}: surface integral of a linear map is {surface_term:e}"
        );
        // And the constant term passes through untouched.
        let cvol = random_rational(&mut rng);
        let total = klain_schneider_eval(&p, &cvol, linear).unwrap();
        let volume_term = to_f64(&(&cvol * &p.volume().unwrap()));
        assert!((total - volume_term - surface_term).abs() < 1e-9);
        // Sanity against the measure itself: total facet area is positive.
        let area: f64 = surface_area_measure(&p)
            .unwrap()
            .iter()
            .map(|e| e.euclidean_approx)
            .sum();
        assert!(area > 0.0);
    }
    println!("criterion 10 PASS: linear integrands vanish against the surface measure");
}
