//! Cut-and-translate certificates and their exact verification.
//!
//! A certificate claims that a source body can be cut into the listed pieces
//! and reassembled, piece i moved by translation i, into the target body.
//! Verification is purely volumetric and exact: pieces must tile the source
//! (pairwise overlaps of measure zero, volumes summing to the source volume,
//! each piece covered by the source) and the moved pieces must tile the
//! target the same way. Closed polytopes may share boundary, so all
//! containment and disjointness checks compare full-dimensional volumes.

use num_traits::Zero;

use crate::exactnum::{format_rational, RVector, Rational};
use crate::frames::Frame;
use crate::polytope::{Body, Polytope};
use crate::valuations::equidecomposable;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub pieces: Vec<Polytope>,
    pub translations: Vec<RVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(String),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        *self == Verdict::Accepted
    }
}

fn body_volume(b: &Body) -> Result<Rational, Error> {
    b.pieces().iter().map(Polytope::volume).sum()
}

fn common_volume(p: &Polytope, q: &Polytope) -> Result<Rational, Error> {
    match p.intersect(q)? {
        Some(w) if w.is_full_dimensional() => w.volume(),
        _ => Ok(Rational::zero()),
    }
}

/// Volume of the part of p lying inside the body; additive over the body's
/// pieces because those only meet in measure zero.
fn covered_volume(p: &Polytope, body: &Body) -> Result<Rational, Error> {
    body.pieces().iter().map(|q| common_volume(p, q)).sum()
}

fn check_tiling(pieces: &[Polytope], whole: &Body, side: &str) -> Result<Option<String>, Error> {
    let moved = if side == "target" { "moved " } else { "" };
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if !common_volume(&pieces[i], &pieces[j])?.is_zero() {
                return Ok(Some(format!("{moved}pieces {i} and {j} overlap")));
            }
        }
    }
    let mut total = Rational::zero();
    for (i, p) in pieces.iter().enumerate() {
        let vol = p.volume()?;
        if covered_volume(p, whole)? != vol {
            return Ok(Some(format!("{moved}piece {i} sticks out of the {side}")));
        }
        total += vol;
    }
    let whole_vol = body_volume(whole)?;
    if total != whole_vol {
        return Ok(Some(format!(
            "{moved}pieces cover {} of the {side} volume {}",
            format_rational(&total),
            format_rational(&whole_vol)
        )));
    }
    Ok(None)
}

/// Checks a certificate against a source and target body. Malformed input
/// (mismatched counts or dimensions, degenerate pieces) is an error; a
/// well-formed certificate that fails a tiling check is Rejected with the
/// first failing condition.
pub fn verify_certificate(a: &Body, b: &Body, cert: &Certificate) -> Result<Verdict, Error> {
    let n = a.ambient_dim();
    if b.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.ambient_dim(),
        });
    }
    if cert.pieces.is_empty() {
        return Err(Error::EmptyInput);
    }
    if cert.pieces.len() != cert.translations.len() {
        return Err(Error::CertificateShape {
            pieces: cert.pieces.len(),
            translations: cert.translations.len(),
        });
    }
    for body in [a, b] {
        for piece in body.pieces() {
            if !piece.is_full_dimensional() {
                return Err(Error::NotFullDimensional {
                    dim: piece.dim(),
                    ambient: n,
                });
            }
        }
    }
    for p in &cert.pieces {
        if p.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.ambient_dim(),
            });
        }
        if !p.is_full_dimensional() {
            return Err(Error::NotFullDimensional {
                dim: p.dim(),
                ambient: n,
            });
        }
    }
    for t in &cert.translations {
        if t.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.dim(),
            });
        }
    }
    if let Some(reason) = check_tiling(&cert.pieces, a, "source")? {
        return Ok(Verdict::Rejected(reason));
    }
    let moved: Vec<Polytope> = cert
        .pieces
        .iter()
        .zip(&cert.translations)
        .map(|(p, t)| p.translate(t))
        .collect::<Result<_, _>>()?;
    if let Some(reason) = check_tiling(&moved, b, "target")? {
        return Ok(Verdict::Rejected(reason));
    }
    Ok(Verdict::Accepted)
}

/// Demands an accepted certificate, then reports whether the two bodies'
/// invariant tables agree (they must, for a sound certificate) together
/// with any disagreeing classes.
pub fn invariance_cross_check(
    a: &Body,
    b: &Body,
    cert: &Certificate,
) -> Result<(bool, Vec<Frame>), Error> {
    match verify_certificate(a, b, cert)? {
        Verdict::Rejected(reason) => Err(Error::RejectedCertificate(reason)),
        Verdict::Accepted => equidecomposable(a, b),
    }
}
