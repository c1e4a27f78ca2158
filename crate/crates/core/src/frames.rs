//! Frames: ordered tuples of pairwise orthogonal rational directions, the
//! iterated faces they select, and the bases those faces are measured in.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::exactnum::{gram_determinant, RMatrix, RVector, Rational};
use crate::polytope::Polytope;
use crate::Error;

/// An ordered tuple of pairwise orthogonal nonzero directions in Q^n.
/// Directions keep the scale and sign they were given; `canonical` maps a
/// frame to its sign-class representative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    ambient: usize,
    dirs: Vec<RVector>,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame{:?}", self.dirs)
    }
}

/// Frames order by length first, then lexicographically by their directions;
/// this is the key order for invariant tables and witness lists.
impl Ord for Frame {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dirs.len(), &self.dirs).cmp(&(other.dirs.len(), &other.dirs))
    }
}

impl PartialOrd for Frame {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Frame {
    pub fn new(ambient: usize, dirs: Vec<RVector>) -> Result<Frame, Error> {
        if dirs.len() > ambient {
            return Err(Error::FrameTooLong {
                got: dirs.len(),
                max: ambient,
            });
        }
        for u in &dirs {
            if u.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: u.dim(),
                });
            }
            if u.is_zero() {
                return Err(Error::ZeroVector);
            }
        }
        for i in 0..dirs.len() {
            for j in i + 1..dirs.len() {
                if !dirs[i].dot(&dirs[j]).is_zero() {
                    return Err(Error::InvalidFrame(format!(
                        "directions {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(Frame { ambient, dirs })
    }

    pub fn empty(ambient: usize) -> Frame {
        Frame {
            ambient,
            dirs: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dirs(&self) -> &[RVector] {
        &self.dirs
    }

    /// The frame with one more direction, which must be orthogonal to all
    /// existing ones.
    pub fn extended(&self, u: RVector) -> Result<Frame, Error> {
        let mut dirs = self.dirs.clone();
        dirs.push(u);
        Frame::new(self.ambient, dirs)
    }

    /// Applies a sign pattern to the directions; returns the flipped frame
    /// and the product of the signs.
    pub fn sign_flip(&self, eta: &[i8]) -> Result<(Frame, i8), Error> {
        if eta.len() != self.dirs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dirs.len(),
                got: eta.len(),
            });
        }
        if eta.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidFrame("sign pattern entries must be +-1".into()));
        }
        let dirs = self
            .dirs
            .iter()
            .zip(eta)
            .map(|(u, &e)| if e == 1 { u.clone() } else { u.neg() })
            .collect();
        let sign = eta.iter().product();
        Ok((Frame { ambient: self.ambient, dirs }, sign))
    }

    /// The representative of this frame's sign class: every direction made
    /// primitive with positive leading coordinate. The sign relates the
    /// original to the representative (product over directions).
    pub fn canonical(&self) -> (Frame, i8) {
        let mut dirs = Vec::with_capacity(self.dirs.len());
        let mut sign = 1i8;
        for u in &self.dirs {
            let (c, s) = canonicalize_direction(u).expect("frame directions are nonzero");
            sign *= s;
            dirs.push(c);
        }
        (
            Frame {
                ambient: self.ambient,
                dirs,
            },
            sign,
        )
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical().0 == *self
    }
}

/// The primitive integer vector parallel to v whose first nonzero coordinate
/// is positive, together with the sign of the (positive-scale) factor from
/// the representative to v.
pub fn canonicalize_direction(v: &RVector) -> Result<(RVector, i8), Error> {
    let (prim, _) = v.primitive()?;
    let leading = prim
        .coords()
        .iter()
        .find(|c| !c.is_zero())
        .expect("primitive vector is nonzero");
    if leading.is_positive() {
        Ok((prim, 1))
    } else {
        Ok((prim.neg(), -1))
    }
}

/// The iterated face P_U: each direction in turn selects the maximizing face
/// of the previous stage. The empty frame selects P itself.
pub fn face_of_frame(p: &Polytope, u: &Frame) -> Result<Polytope, Error> {
    if u.ambient_dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            got: u.ambient_dim(),
        });
    }
    let mut face = p.clone();
    for dir in u.dirs() {
        face = face.face_in_direction(dir)?;
    }
    Ok(face)
}

/// All frames along which the face dimension drops by exactly one per step,
/// i.e. chains of facets of facets. Only full-dimensional polytopes have
/// tight frames (including the empty one); lengths run up to n-1. Sorted.
pub fn tight_frames(p: &Polytope) -> Vec<Frame> {
    let n = p.ambient_dim();
    if !p.is_full_dimensional() {
        return Vec::new();
    }
    let mut out = Vec::new();
    descend(p, &Frame::empty(n), &mut out);
    out.sort();
    out
}

fn descend(face: &Polytope, frame: &Frame, out: &mut Vec<Frame>) {
    out.push(frame.clone());
    if frame.len() + 1 == frame.ambient_dim() {
        return;
    }
    for (fi, f) in face.facets().iter().enumerate() {
        // Tight chains keep the face's direction space orthogonal to every
        // frame entry, so each facet normal extends the frame orthogonally.
        let next = frame
            .extended(f.normal.clone())
            .expect("facet normal must be orthogonal to the chain so far");
        descend(&face.facet_polytope(fi), &next, out);
    }
}

/// The canonical basis a frame's faces are measured in: the kernel basis of
/// the direction matrix, with the Gram determinant of that basis. Every
/// member of a sign class shares the same measurement basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementBasis {
    pub basis: Vec<RVector>,
    pub gram: Rational,
}

pub fn measurement_basis(u: &Frame) -> MeasurementBasis {
    let mat = RMatrix::new(u.dirs().to_vec(), u.ambient_dim());
    let basis = mat.kernel_basis();
    let gram = gram_determinant(&basis);
    MeasurementBasis { basis, gram }
}
