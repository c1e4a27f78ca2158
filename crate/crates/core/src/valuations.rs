//! Signed iterated-face functionals and the invariants built from them.
//!
//! For a frame U of length r in Q^n, the functional H_U sums the
//! (n-r)-volumes of the iterated faces over all sign patterns of U, each
//! weighted by the product of its signs. Faces are measured in the canonical
//! kernel basis shared by the whole sign class, so the values are exact
//! rationals; Euclidean readings attach the square root of the basis Gram
//! determinant as a float at the very end.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::exactnum::{rat, to_f64, RMatrix, RVector, Rational};
use crate::frames::{measurement_basis, tight_frames, Frame};
use crate::polytope::{Body, Polytope};
use crate::Error;

/// The value of one functional H_U: the exact coordinate value in the class
/// measurement basis, the Gram determinant of that basis, and the Euclidean
/// reading coordinate * sqrt(gram) as a float.
#[derive(Clone, Debug, PartialEq)]
pub struct HadwigerValue {
    pub frame_class: Frame,
    pub coordinate_value: Rational,
    pub gram: Rational,
    pub euclidean_approx: f64,
}

fn euclidean(coordinate: &Rational, gram: &Rational) -> f64 {
    to_f64(coordinate) * to_f64(gram).sqrt()
}

/// Evaluates H_U on a body (additively over its pieces). The frame must be
/// strictly shorter than the ambient dimension.
pub fn hadwiger(body: &Body, u: &Frame) -> Result<HadwigerValue, Error> {
    let n = body.ambient_dim();
    if u.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.ambient_dim(),
        });
    }
    if u.len() >= n {
        return Err(Error::FrameTooLong {
            got: u.len(),
            max: n - 1,
        });
    }
    let mb = measurement_basis(u);
    let k = n - u.len();
    debug_assert_eq!(mb.basis.len(), k);
    let mut total = Rational::zero();
    for piece in body.pieces() {
        total += signed_face_sum(piece, u.dirs(), k, &mb.basis);
    }
    Ok(HadwigerValue {
        frame_class: u.canonical().0,
        euclidean_approx: euclidean(&total, &mb.gram),
        coordinate_value: total,
        gram: mb.gram,
    })
}

/// sum over sign patterns eta of sgn(eta) * V_k(face walked along eta * dirs),
/// computed as a branching walk so shared prefixes are taken once. Faces
/// strictly below dimension k can only shrink further and contribute 0.
fn signed_face_sum(face: &Polytope, dirs: &[RVector], k: usize, basis: &[RVector]) -> Rational {
    if face.dim() < k {
        return Rational::zero();
    }
    let Some((u, tail)) = dirs.split_first() else {
        // The walked directions are mutually orthogonal, so the face
        // dimension is at most k here; the prune above leaves exactly k.
        return face
            .coordinate_volume(basis)
            .expect("face direction space lies in the measurement span");
    };
    let plus = face.face_in_direction(u).expect("direction is nonzero");
    let minus = face.face_in_direction(&u.neg()).expect("direction is nonzero");
    signed_face_sum(&plus, tail, k, basis) - signed_face_sum(&minus, tail, k, basis)
}

/// The complete invariant of a full-dimensional body: every canonical frame
/// class with a nonzero H-value, keyed in canonical order. Classes absent
/// from the map have H = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTable {
    ambient: usize,
    entries: BTreeMap<Frame, HadwigerValue>,
}

impl InvariantTable {
    pub(crate) fn from_entries(
        ambient: usize,
        entries: BTreeMap<Frame, HadwigerValue>,
    ) -> InvariantTable {
        InvariantTable { ambient, entries }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn entries(&self) -> &BTreeMap<Frame, HadwigerValue> {
        &self.entries
    }

    pub fn get(&self, class: &Frame) -> Option<&HadwigerValue> {
        self.entries.get(class)
    }
}

fn require_full_dimensional(body: &Body) -> Result<(), Error> {
    if body.is_full_dimensional() {
        return Ok(());
    }
    let low = body.pieces().iter().map(Polytope::dim).min().unwrap_or(0);
    Err(Error::NotFullDimensional {
        dim: low,
        ambient: body.ambient_dim(),
    })
}

pub fn invariant_table(body: &Body) -> Result<InvariantTable, Error> {
    let n = body.ambient_dim();
    require_full_dimensional(body)?;
    // Classes with a nonzero value always have a tight representative on
    // some piece: non-tight sign patterns cancel pairwise.
    let mut classes: BTreeSet<Frame> = BTreeSet::new();
    for piece in body.pieces() {
        for u in tight_frames(piece) {
            classes.insert(u.canonical().0);
        }
    }
    let mut entries = BTreeMap::new();
    for class in classes {
        let hv = hadwiger(body, &class)?;
        if !hv.coordinate_value.is_zero() {
            entries.insert(class, hv);
        }
    }
    Ok(InvariantTable { ambient: n, entries })
}

/// Whether two bodies have identical invariant tables; the witness list
/// holds every canonical frame class where the tables disagree, in order.
pub fn equidecomposable(a: &Body, b: &Body) -> Result<(bool, Vec<Frame>), Error> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            got: b.ambient_dim(),
        });
    }
    let ta = invariant_table(a)?;
    let tb = invariant_table(b)?;
    let keys: BTreeSet<&Frame> = ta.entries.keys().chain(tb.entries.keys()).collect();
    let witnesses: Vec<Frame> = keys
        .into_iter()
        .filter(|k| {
            let va = ta.entries.get(*k).map(|h| &h.coordinate_value);
            let vb = tb.entries.get(*k).map(|h| &h.coordinate_value);
            va != vb
        })
        .cloned()
        .collect();
    Ok((witnesses.is_empty(), witnesses))
}

/// Coefficients c_U of a valuation sum(c_U * H_U), keyed by canonical frame
/// classes strictly shorter than the ambient dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    ambient: usize,
    entries: BTreeMap<Frame, Rational>,
}

impl CoefficientTable {
    pub fn new(ambient: usize, coeffs: Vec<(Frame, Rational)>) -> Result<CoefficientTable, Error> {
        let mut entries = BTreeMap::new();
        for (u, c) in coeffs {
            if u.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: u.ambient_dim(),
                });
            }
            if u.len() >= ambient {
                return Err(Error::FrameTooLong {
                    got: u.len(),
                    max: ambient - 1,
                });
            }
            if !u.is_canonical() {
                return Err(Error::InvalidFrame(
                    "coefficient keys must be canonical frames".into(),
                ));
            }
            if entries.insert(u, c).is_some() {
                return Err(Error::InvalidFrame("duplicate coefficient key".into()));
            }
        }
        Ok(CoefficientTable { ambient, entries })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn entries(&self) -> &BTreeMap<Frame, Rational> {
        &self.entries
    }
}

/// A valuation evaluated on a body: the exact contribution c_U * H_U per
/// class, and the Euclidean total with each class weighted by sqrt(gram).
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub per_frame: Vec<(Frame, Rational)>,
    pub euclidean_total: f64,
}

pub fn evaluate_valuation(body: &Body, coeffs: &CoefficientTable) -> Result<Evaluation, Error> {
    if coeffs.ambient != body.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: body.ambient_dim(),
            got: coeffs.ambient,
        });
    }
    require_full_dimensional(body)?;
    let mut per_frame = Vec::with_capacity(coeffs.entries.len());
    let mut total = 0.0;
    for (class, c) in &coeffs.entries {
        let hv = hadwiger(body, class)?;
        let contribution = c * &hv.coordinate_value;
        total += euclidean(&contribution, &hv.gram);
        per_frame.push((class.clone(), contribution));
    }
    Ok(Evaluation {
        per_frame,
        euclidean_total: total,
    })
}

/// The valuation split into homogeneous degrees: exact per-class components
/// recovered from dilations m = 1..n by a Vandermonde solve, plus the
/// Euclidean per-degree totals.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousDecomposition {
    /// degree -> Euclidean component, for every degree 1..=n.
    pub degrees: BTreeMap<usize, f64>,
    /// class -> exact coordinate components; index i holds degree i+1.
    pub per_class: BTreeMap<Frame, Vec<Rational>>,
}

pub fn homogeneous_components(
    body: &Body,
    coeffs: &CoefficientTable,
) -> Result<HomogeneousDecomposition, Error> {
    let n = body.ambient_dim();
    if coeffs.ambient != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: coeffs.ambient,
        });
    }
    require_full_dimensional(body)?;
    // m^i coefficient matrix for degrees i = 1..n, shared by all classes.
    let vander = RMatrix::new(
        (1..=n as i64)
            .map(|m| RVector::new((1..=n as u32).map(|i| rat(m.pow(i))).collect()))
            .collect(),
        n,
    );
    let mut degrees: BTreeMap<usize, f64> = (1..=n).map(|i| (i, 0.0)).collect();
    let mut per_class = BTreeMap::new();
    for (class, c) in &coeffs.entries {
        let gram = measurement_basis(class).gram;
        let values = RVector::new(
            (1..=n as i64)
                .map(|m| {
                    let dilated = body.dilate(&rat(m))?;
                    Ok(c * &hadwiger(&dilated, class)?.coordinate_value)
                })
                .collect::<Result<_, Error>>()?,
        );
        let components = vander
            .solve(&values)
            .expect("Vandermonde matrix at 1..n is invertible");
        for (i, x) in components.coords().iter().enumerate() {
            *degrees.get_mut(&(i + 1)).unwrap() += euclidean(x, &gram);
        }
        per_class.insert(class.clone(), components.coords().to_vec());
    }
    Ok(HomogeneousDecomposition { degrees, per_class })
}

/// One facet's contribution to the surface measure: its outward direction as
/// a one-direction frame, and its (n-1)-volume in that frame's basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceEntry {
    pub frame: Frame,
    pub coordinate_area: Rational,
    pub gram: Rational,
    pub euclidean_approx: f64,
}

/// The facet-area measure of a full-dimensional polytope, one entry per
/// outward primitive facet normal, sorted by direction.
pub fn surface_area_measure(p: &Polytope) -> Result<Vec<SurfaceEntry>, Error> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: p.dim(),
            ambient: p.ambient_dim(),
        });
    }
    let n = p.ambient_dim();
    (0..p.facets().len())
        .map(|fi| {
            let facet = p.facet_polytope(fi);
            let frame = Frame::new(n, vec![p.facets()[fi].normal.clone()])?;
            let mb = measurement_basis(&frame);
            let area = facet
                .coordinate_volume(&mb.basis)
                .expect("facet directions lie in the normal's kernel");
            Ok(SurfaceEntry {
                frame,
                euclidean_approx: euclidean(&area, &mb.gram),
                coordinate_area: area,
                gram: mb.gram,
            })
        })
        .collect()
}

/// Evaluates c * V_n(P) + integral of f over the surface measure, reading f
/// at Euclidean unit normals. The cone coefficient and volume stay exact
/// until the final float multiplication.
pub fn klain_schneider_eval<F: Fn(&[f64]) -> f64>(
    p: &Polytope,
    cvol: &Rational,
    f: F,
) -> Result<f64, Error> {
    let volume_term = to_f64(&(cvol * &p.volume()?));
    let mut surface_term = 0.0;
    for entry in surface_area_measure(p)? {
        let dir = &entry.frame.dirs()[0];
        let floats: Vec<f64> = dir.coords().iter().map(to_f64).collect();
        let len = floats.iter().map(|x| x * x).sum::<f64>().sqrt();
        let unit: Vec<f64> = floats.iter().map(|x| x / len).collect();
        surface_term += f(&unit) * entry.euclidean_approx;
    }
    Ok(volume_term + surface_term)
}
