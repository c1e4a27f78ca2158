//! Rational polytopes: exact convex hulls, face extraction, volumes,
//! Minkowski sums, intersections, and interior-disjoint unions.

mod dd;

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::exactnum::{rat, RMatrix, RVector, Rational};
use crate::{Error, MAX_DIM};

/// Affine hull of a point set: a base point plus an RREF basis of the
/// direction space. RREF rows make reduced coordinates plain projections:
/// the coordinates of q - base are its entries at the pivot columns.
#[derive(Clone, Debug)]
struct AffineHull {
    base: RVector,
    basis: Vec<RVector>,
    pivots: Vec<usize>,
}

impl AffineHull {
    /// `points` must be nonempty and sorted; the base is the lex-min point.
    fn of_points(points: &[RVector]) -> AffineHull {
        let base = points[0].clone();
        let diffs: Vec<RVector> = points[1..].iter().map(|p| p.sub(&base)).collect();
        let n = base.dim();
        let (red, pivots) = RMatrix::new(diffs, n).rref();
        let basis = red.rows()[..pivots.len()].to_vec();
        AffineHull { base, basis, pivots }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduced coordinates of a point of the affine hull.
    fn project(&self, p: &RVector) -> RVector {
        let q = p.sub(&self.base);
        RVector::new(self.pivots.iter().map(|&j| q.coord(j).clone()).collect())
    }

    /// Turns a facet normal in reduced coordinates into the unique primitive
    /// normal inside the direction space that induces the same functional on
    /// the hull: project the scattered covector orthogonally onto the span.
    fn lift_normal(&self, reduced: &RVector) -> RVector {
        let n = self.base.dim();
        let mut m = RVector::zero(n);
        for (&j, c) in self.pivots.iter().zip(reduced.coords()) {
            m = m.add(&RVector::unit(n, j).scale(c));
        }
        let d = self.dim();
        let gram = RMatrix::new(
            (0..d)
                .map(|i| RVector::new((0..d).map(|j| self.basis[i].dot(&self.basis[j])).collect()))
                .collect(),
            d,
        );
        let rhs = RVector::new(self.basis.iter().map(|b| b.dot(&m)).collect());
        let y = gram.solve(&rhs).expect("direction basis has full rank");
        let mut lifted = RVector::zero(n);
        for (yi, b) in y.coords().iter().zip(&self.basis) {
            lifted = lifted.add(&b.scale(yi));
        }
        let (prim, _) = lifted.primitive().expect("facet normal is nonzero");
        prim
    }
}

/// A facet of a polytope. The normal is a primitive integer vector lying in
/// the polytope's direction space, pointing outward: <normal, x> <= offset
/// holds on the polytope with equality exactly on the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: RVector,
    pub offset: Rational,
    /// Indices into `vertices()` of the vertices on this facet, ascending.
    pub vertices: Vec<usize>,
}

/// Bounded convex polytope in Q^n, kept as its sorted extreme-vertex list.
/// Affine hull, facets and a triangulation are cached on first use.
pub struct Polytope {
    ambient: usize,
    vertices: Vec<RVector>,
    hull: OnceLock<AffineHull>,
    facets: OnceLock<Vec<Facet>>,
    triangulation: OnceLock<Vec<Vec<usize>>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            ambient: self.ambient,
            vertices: self.vertices.clone(),
            hull: self.hull.clone(),
            facets: self.facets.clone(),
            triangulation: self.triangulation.clone(),
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}
impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polytope(n={}, vertices={:?})", self.ambient, self.vertices)
    }
}

impl Polytope {
    /// Convex hull of a nonempty rational point set. Non-extreme points are
    /// dropped; vertices are stored in lexicographic order.
    pub fn hull(ambient: usize, points: &[RVector]) -> Result<Polytope, Error> {
        if ambient == 0 || ambient > MAX_DIM {
            return Err(Error::UnsupportedDimension(ambient));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        for p in points {
            if p.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: p.dim(),
                });
            }
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();

        let hull = AffineHull::of_points(&pts);
        let d = hull.dim();
        if d == 0 {
            return Ok(Polytope::from_extreme(ambient, vec![pts[0].clone()]));
        }

        let rays = facet_rays(&hull, &pts);
        let keep: Vec<RVector> = pts
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                // A point is extreme iff its tight facet normals span the
                // direction space (the minimal face containing it is a vertex).
                let tight: Vec<RVector> = rays
                    .iter()
                    .filter(|r| r.tight.contains(i))
                    .map(|r| reduced_normal(&r.vec))
                    .collect();
                RMatrix::new(tight, d).rank() == d
            })
            .map(|(_, p)| p.clone())
            .collect();
        debug_assert!(!keep.is_empty());
        Ok(Polytope::from_extreme(ambient, keep))
    }

    /// Wraps a list of known-extreme points, already sorted and deduplicated.
    pub(crate) fn from_extreme(ambient: usize, vertices: Vec<RVector>) -> Polytope {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Polytope {
            ambient,
            vertices,
            hull: OnceLock::new(),
            facets: OnceLock::new(),
            triangulation: OnceLock::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[RVector] {
        &self.vertices
    }

    fn affine_hull(&self) -> &AffineHull {
        self.hull.get_or_init(|| AffineHull::of_points(&self.vertices))
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.affine_hull().dim()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    /// RREF basis of the direction space of the affine hull.
    pub fn direction_basis(&self) -> &[RVector] {
        &self.affine_hull().basis
    }

    /// All facets, sorted by normal. A point has none.
    pub fn facets(&self) -> &[Facet] {
        self.facets.get_or_init(|| {
            let hull = self.affine_hull();
            if hull.dim() == 0 {
                return Vec::new();
            }
            let mut facets: Vec<Facet> = facet_rays(hull, &self.vertices)
                .into_iter()
                .map(|ray| {
                    let normal = hull.lift_normal(&reduced_normal(&ray.vec));
                    let offset = normal.dot(&self.vertices[ray.tight[0]]);
                    debug_assert!(self.vertices.iter().enumerate().all(|(i, v)| {
                        let s = normal.dot(v);
                        s < offset || (s == offset && ray.tight.contains(&i))
                    }));
                    Facet { normal, offset, vertices: ray.tight }
                })
                .collect();
            facets.sort_by(|a, b| a.normal.cmp(&b.normal));
            facets
        })
    }

    /// Outward primitive facet normals with their offsets.
    pub fn facet_normals(&self) -> Vec<(RVector, Rational)> {
        self.facets()
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect()
    }

    /// The sub-polytope spanned by the vertices of facet `i`.
    pub(crate) fn facet_polytope(&self, i: usize) -> Polytope {
        let f = &self.facets()[i];
        Polytope::from_extreme(
            self.ambient,
            f.vertices.iter().map(|&j| self.vertices[j].clone()).collect(),
        )
    }

    /// Support value max <u, x> over the polytope.
    pub fn support(&self, u: &RVector) -> Rational {
        self.vertices
            .iter()
            .map(|v| u.dot(v))
            .max()
            .expect("polytope has vertices")
    }

    /// The face maximizing <u, .>; u must be nonzero.
    pub fn face_in_direction(&self, u: &RVector) -> Result<Polytope, Error> {
        if u.dim() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: u.dim(),
            });
        }
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let m = self.support(u);
        Ok(Polytope::from_extreme(
            self.ambient,
            self.vertices
                .iter()
                .filter(|v| u.dot(v) == m)
                .cloned()
                .collect(),
        ))
    }

    /// Triangulation into simplices (vertex-index lists of length dim+1):
    /// the fan from the lex-min vertex over recursively triangulated facets.
    pub fn triangulation(&self) -> &[Vec<usize>] {
        self.triangulation.get_or_init(|| {
            if self.dim() == 0 {
                return vec![vec![0]];
            }
            let mut simplices = Vec::new();
            for (fi, f) in self.facets().iter().enumerate() {
                if f.vertices.contains(&0) {
                    continue;
                }
                let sub = self.facet_polytope(fi);
                for s in sub.triangulation() {
                    let mut simplex: Vec<usize> = s.iter().map(|&j| f.vertices[j]).collect();
                    simplex.push(0);
                    simplices.push(simplex);
                }
            }
            simplices
        })
    }

    /// Volume of the polytope measured in the coordinates of `basis`, which
    /// must be an exact spanning set of the polytope's direction space, one
    /// vector per dimension. A point has volume 1.
    pub fn coordinate_volume(&self, basis: &[RVector]) -> Result<Rational, Error> {
        let d = self.dim();
        if basis.len() != d {
            return Err(Error::BasisMismatch);
        }
        for b in basis {
            if b.dim() != self.ambient {
                return Err(Error::DimensionMismatch {
                    expected: self.ambient,
                    got: b.dim(),
                });
            }
        }
        if d == 0 {
            return Ok(Rational::one());
        }
        let bmat = RMatrix::new(basis.to_vec(), self.ambient);
        let (bred, bpiv) = bmat.rref();
        if bpiv.len() != d {
            return Err(Error::BasisMismatch);
        }
        for dir in self.direction_basis() {
            let mut r = dir.clone();
            for (&j, row) in bpiv.iter().zip(bred.rows()) {
                r = r.sub(&row.scale(dir.coord(j)));
            }
            if !r.is_zero() {
                return Err(Error::BasisMismatch);
            }
        }
        // Edges lie in span(basis), so writing edges = C * basis and
        // restricting both to the basis-RREF pivot columns J gives
        // det C = det(E_J) / det(B_J): the full determinant via square slices.
        let bj = RMatrix::new(
            basis
                .iter()
                .map(|b| RVector::new(bpiv.iter().map(|&j| b.coord(j).clone()).collect()))
                .collect(),
            d,
        );
        let detb = bj.det();
        debug_assert!(!detb.is_zero());
        let mut total = Rational::zero();
        for s in self.triangulation() {
            let base = &self.vertices[s[0]];
            let ej = RMatrix::new(
                s[1..]
                    .iter()
                    .map(|&vi| {
                        let e = self.vertices[vi].sub(base);
                        RVector::new(bpiv.iter().map(|&j| e.coord(j).clone()).collect())
                    })
                    .collect(),
                d,
            );
            total += ej.det().abs();
        }
        let dfact: Rational = (1..=d as i64).map(rat).product();
        Ok(total / (dfact * detb.abs()))
    }

    /// Euclidean volume of a full-dimensional polytope.
    pub fn volume(&self) -> Result<Rational, Error> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional {
                dim: self.dim(),
                ambient: self.ambient,
            });
        }
        let std: Vec<RVector> = (0..self.ambient).map(|i| RVector::unit(self.ambient, i)).collect();
        self.coordinate_volume(&std)
    }

    pub fn translate(&self, t: &RVector) -> Result<Polytope, Error> {
        if t.dim() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: t.dim(),
            });
        }
        // Translation preserves lex order and extremeness.
        Ok(Polytope::from_extreme(
            self.ambient,
            self.vertices.iter().map(|v| v.add(t)).collect(),
        ))
    }

    pub fn dilate(&self, lambda: &Rational) -> Result<Polytope, Error> {
        if !lambda.is_positive() {
            return Err(Error::NonPositiveDilation);
        }
        Ok(Polytope::from_extreme(
            self.ambient,
            self.vertices.iter().map(|v| v.scale(lambda)).collect(),
        ))
    }

    /// Point reflection through the origin.
    pub fn reflect(&self) -> Polytope {
        let mut vs: Vec<RVector> = self.vertices.iter().map(RVector::neg).collect();
        vs.sort();
        Polytope::from_extreme(self.ambient, vs)
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope, Error> {
        if other.ambient != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let sums: Vec<RVector> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| a.add(b)))
            .collect();
        Polytope::hull(self.ambient, &sums)
    }

    /// Affine-hull equations (m, c) with <m, x> = c, and facet inequalities
    /// (N, b) with <N, x> <= b; together they carve out exactly this polytope.
    pub fn halfspaces(&self) -> (Vec<(RVector, Rational)>, Vec<(RVector, Rational)>) {
        let hull = self.affine_hull();
        let dirs = RMatrix::new(hull.basis.clone(), self.ambient);
        let equations = dirs
            .kernel_basis()
            .into_iter()
            .map(|m| {
                let c = m.dot(&hull.base);
                (m, c)
            })
            .collect();
        let inequalities = self
            .facets()
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect();
        (equations, inequalities)
    }

    pub fn contains(&self, x: &RVector) -> bool {
        if x.dim() != self.ambient {
            return false;
        }
        let (eqs, ineqs) = self.halfspaces();
        eqs.iter().all(|(m, c)| &m.dot(x) == c) && ineqs.iter().all(|(n, b)| &n.dot(x) <= b)
    }

    /// Exact intersection; None when empty. The result may have any dimension.
    pub fn intersect(&self, other: &Polytope) -> Result<Option<Polytope>, Error> {
        if other.ambient != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let (mut eqs, mut ineqs) = self.halfspaces();
        let (eq2, in2) = other.halfspaces();
        eqs.extend(eq2);
        ineqs.extend(in2);
        Ok(vertex_enumerate(self.ambient, &eqs, &ineqs)
            .map(|vs| Polytope::from_extreme(self.ambient, vs)))
    }

    /// Closed parts of the polytope on the two sides of <h, x> = c:
    /// first where <h, x> >= c, then where <h, x> <= c. Either may be empty
    /// or lower-dimensional.
    pub fn cut_by_hyperplane(
        &self,
        h: &RVector,
        c: &Rational,
    ) -> Result<(Option<Polytope>, Option<Polytope>), Error> {
        if h.dim() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: h.dim(),
            });
        }
        if h.is_zero() {
            return Err(Error::ZeroVector);
        }
        let (eqs, ineqs) = self.halfspaces();
        let side = |extra: (RVector, Rational)| {
            let mut all = ineqs.clone();
            all.push(extra);
            vertex_enumerate(self.ambient, &eqs, &all)
                .map(|vs| Polytope::from_extreme(self.ambient, vs))
        };
        let above = side((h.neg(), -c.clone()));
        let below = side((h.clone(), c.clone()));
        Ok((above, below))
    }
}

/// Facet inequalities of conv(points) in reduced coordinates, via double
/// description on the cone of valid inequalities: a ray (a0, a) means
/// a0 + <a, c> >= 0 for every reduced point c, and its tight set lists the
/// incident points. For a bounded full-dimensional hull every extreme ray is
/// a genuine facet (the trivial inequality 1 >= 0 is a positive combination
/// of facets, hence never extreme).
fn facet_rays(hull: &AffineHull, points: &[RVector]) -> Vec<dd::ExtremeRay> {
    let d = hull.dim();
    let rows: Vec<RVector> = points
        .iter()
        .map(|p| {
            let c = hull.project(p);
            let mut r = vec![Rational::one()];
            r.extend(c.coords().iter().cloned());
            RVector::new(r)
        })
        .collect();
    let rays = dd::extreme_rays(d + 1, &rows).expect("affinely spanning points");
    debug_assert!(rays
        .iter()
        .all(|r| r.vec.coords()[1..].iter().any(|x| !x.is_zero())));
    rays
}

/// Outward reduced normal encoded by a valid-inequality ray (a0, a).
fn reduced_normal(ray: &RVector) -> RVector {
    RVector::new(ray.coords()[1..].iter().map(|x| -x).collect())
}

/// Vertices of { x : equations hold, inequalities hold }, or None if empty.
/// The feasible set must be bounded (callers intersect bounded polytopes).
fn vertex_enumerate(
    ambient: usize,
    equations: &[(RVector, Rational)],
    inequalities: &[(RVector, Rational)],
) -> Option<Vec<RVector>> {
    // Solve the equations: a particular point plus a kernel parametrization.
    let eq_mat = RMatrix::new(equations.iter().map(|(m, _)| m.clone()).collect(), ambient);
    let aug = RMatrix::new(
        equations
            .iter()
            .map(|(m, c)| {
                let mut row = m.coords().to_vec();
                row.push(c.clone());
                RVector::new(row)
            })
            .collect(),
        ambient + 1,
    );
    let (red, pivots) = aug.rref();
    if pivots.contains(&ambient) {
        return None; // inconsistent equations
    }
    let mut point = RVector::zero(ambient);
    for (i, &p) in pivots.iter().enumerate() {
        point = point.add(&RVector::unit(ambient, p).scale(red.entry(i, ambient)));
    }
    let span = eq_mat.kernel_basis();

    if span.is_empty() {
        let feasible = inequalities.iter().all(|(n, b)| &n.dot(&point) <= b);
        return feasible.then(|| vec![point]);
    }

    // Homogenize over the kernel coordinates t: rows (b - <N, x*>, -<w, N>..)
    // of <g, (x0, t)> >= 0, plus x0 >= 0; rays with x0 > 0 are the vertices.
    let s = span.len();
    let mut rows: Vec<RVector> = inequalities
        .iter()
        .map(|(n, b)| {
            let mut row = vec![b - n.dot(&point)];
            row.extend(span.iter().map(|w| -w.dot(n)));
            RVector::new(row)
        })
        .collect();
    rows.push(RVector::unit(s + 1, 0));
    let rays = dd::extreme_rays(s + 1, &rows).expect("bounded feasible sets give pointed cones");
    if rays.is_empty() {
        return None;
    }
    let mut verts: Vec<RVector> = rays
        .iter()
        .map(|r| {
            let x0 = r.vec.coord(0);
            assert!(x0.is_positive(), "recession ray in a bounded intersection");
            let mut x = point.clone();
            for (w, ti) in span.iter().zip(r.vec.coords()[1..].iter()) {
                x = x.add(&w.scale(&(ti / x0)));
            }
            x
        })
        .collect();
    verts.sort();
    verts.dedup();
    Some(verts)
}

/// The simplex chain conv{0, a1, a1+a2, ...} of linearly independent steps.
pub fn simplex_chain(steps: &[RVector]) -> Result<Polytope, Error> {
    if steps.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ambient = steps[0].dim();
    for a in steps {
        if a.dim() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: a.dim(),
            });
        }
    }
    if RMatrix::new(steps.to_vec(), ambient).rank() != steps.len() {
        return Err(Error::DependentVectors);
    }
    let mut points = vec![RVector::zero(ambient)];
    for a in steps {
        let last = points.last().unwrap().clone();
        points.push(last.add(a));
    }
    Polytope::hull(ambient, &points)
}

/// A finite union of full-dimensional polytopes with pairwise disjoint
/// interiors, in the order given.
#[derive(Clone, Debug, PartialEq)]
pub struct UnionBody {
    ambient: usize,
    pieces: Vec<Polytope>,
}

impl UnionBody {
    pub fn new(pieces: Vec<Polytope>) -> Result<UnionBody, Error> {
        let Some(first) = pieces.first() else {
            return Err(Error::EmptyInput);
        };
        let ambient = first.ambient_dim();
        for p in &pieces {
            if p.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: p.ambient_dim(),
                });
            }
            if !p.is_full_dimensional() {
                return Err(Error::NotFullDimensional {
                    dim: p.dim(),
                    ambient,
                });
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if let Some(common) = pieces[i].intersect(&pieces[j])? {
                    if common.dim() == ambient {
                        return Err(Error::OverlappingPieces(i, j));
                    }
                }
            }
        }
        Ok(UnionBody { ambient, pieces })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn pieces(&self) -> &[Polytope] {
        &self.pieces
    }
}

/// `m` translated copies of a polytope strung out along the first axis with
/// unit gaps, so their interiors (and in fact closures) are disjoint.
pub fn disjoint_copies(p: &Polytope, m: usize) -> Result<UnionBody, Error> {
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let xs = p.vertices().iter().map(|v| v.coord(0));
    let width = xs.clone().max().unwrap() - xs.min().unwrap();
    let step = width + Rational::one();
    let mut pieces = Vec::with_capacity(m);
    for k in 0..m {
        let shift = RVector::unit(p.ambient_dim(), 0).scale(&(rat(k as i64) * step.clone()));
        pieces.push(p.translate(&shift)?);
    }
    UnionBody::new(pieces)
}

/// Either a single polytope or an interior-disjoint union; valuations are
/// additive over the pieces.
#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Single(Polytope),
    Union(UnionBody),
}

impl From<Polytope> for Body {
    fn from(p: Polytope) -> Body {
        Body::Single(p)
    }
}

impl From<UnionBody> for Body {
    fn from(u: UnionBody) -> Body {
        Body::Union(u)
    }
}

impl Body {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Body::Single(p) => p.ambient_dim(),
            Body::Union(u) => u.ambient_dim(),
        }
    }

    pub fn pieces(&self) -> &[Polytope] {
        match self {
            Body::Single(p) => std::slice::from_ref(p),
            Body::Union(u) => u.pieces(),
        }
    }

    /// True when every piece is full-dimensional.
    pub fn is_full_dimensional(&self) -> bool {
        self.pieces().iter().all(Polytope::is_full_dimensional)
    }

    pub fn translate(&self, t: &RVector) -> Result<Body, Error> {
        Ok(match self {
            Body::Single(p) => Body::Single(p.translate(t)?),
            Body::Union(u) => Body::Union(UnionBody {
                ambient: u.ambient,
                pieces: u
                    .pieces
                    .iter()
                    .map(|p| p.translate(t))
                    .collect::<Result<_, _>>()?,
            }),
        })
    }

    pub fn dilate(&self, lambda: &Rational) -> Result<Body, Error> {
        Ok(match self {
            Body::Single(p) => Body::Single(p.dilate(lambda)?),
            Body::Union(u) => Body::Union(UnionBody {
                ambient: u.ambient,
                pieces: u
                    .pieces
                    .iter()
                    .map(|p| p.dilate(lambda))
                    .collect::<Result<_, _>>()?,
            }),
        })
    }
}
