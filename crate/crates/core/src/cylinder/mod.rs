//! Explicit isomorphisms `R_m(n, p)[w] = R_m(n, 1)[w]`.
//!
//! A certificate packages the matrix
//!
//! ```text
//! [ g1(x)  0      x^n ]
//! [ 0      g2(x)  x^n ]
//! [ h1     h2     h3  ]
//! ```
//!
//! acting on `(z, t, w)` over `k[x0..xm]`, with `g1^q = g2^r = p (mod u^N)`,
//! together with everything needed to replay, by polynomial arithmetic only,
//! that the induced automorphism `psi` of `D[w]` maps `(x^n, z^q + t^r + x0 p(x))`
//! onto `(x^n, z^q + t^r + x0)`.

mod certificate;
mod family;
mod gl3;

pub use certificate::{
    build_cylinder_certificate, complete_certificate, rescale, rescaling_images, verify_cylinder_certificate, CertificateFile,
    CylinderCertificate, VerifyReport,
};
pub use family::{
    build_family_certificate, family_parameters, on_vanishing_locus, rational_roots, specialize_family, specialize_family_at,
    verify_family_certificate, FamilyCertificate, FamilyCertificateFile, PointValue,
};
pub use gl3::{apply_psi, build_gl3, compute_f, compute_g_pair, matrix_entries, GL3Certificate};

/// Retries of the coprimality repair for `(g1, g2)`.
pub const COPRIME_RETRIES: usize = 16;
