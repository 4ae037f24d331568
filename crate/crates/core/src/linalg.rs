//! Small helpers on 3x3 complex matrices used across the crate.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub(crate) fn mat_is_finite(m: &Matrix3<C64>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn vec_is_finite(v: &Vector3<C64>) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius norm.
pub(crate) fn frob(m: &Matrix3<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn hermiticity_defect(m: &Matrix3<C64>) -> f64 {
    frob(&(m - m.adjoint()))
}

pub(crate) fn unitarity_defect(m: &Matrix3<C64>) -> f64 {
    frob(&(m.adjoint() * m - Matrix3::identity()))
}

/// Largest entrywise distance between two matrices after aligning `b` to `a`
/// by the global phase that maximizes their overlap.
#[cfg(test)]
pub(crate) fn phase_aligned_max_entry_distance(a: &Matrix3<C64>, b: &Matrix3<C64>) -> f64 {
    let ov: C64 = (a.adjoint() * b).trace();
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { cr(1.0) };
    (b / phase - a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
pub(crate) fn max_entry_distance(a: &Matrix3<C64>, b: &Matrix3<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a 3x3 Hermitian matrix by cyclic Jacobi rotations
/// with complex phases. Returns real eigenvalues and the unitary eigenvector
/// matrix (columns are eigenvectors, unordered).
///
/// Unlike tridiagonalization-based routines, every step is an exact plane
/// rotation, so residuals stay at machine precision even with large scale
/// separation between the diagonal and the couplings.
pub(crate) fn hermitian_eigen(mat: &Matrix3<C64>) -> (Vector3<f64>, Matrix3<C64>) {
    let mut a = *mat;
    let mut v = Matrix3::<C64>::identity();
    let scale = frob(&a).max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..32 {
        let off = (a[(0, 1)].norm_sqr() + a[(0, 2)].norm_sqr() + a[(1, 2)].norm_sqr()).sqrt();
        if off <= tol {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let g = a[(p, q)];
            let gn = g.norm();
            if gn <= tol {
                // negligible at the matrix scale; flush it so `off` converges
                a[(p, q)] = C64::ZERO;
                a[(q, p)] = C64::ZERO;
                continue;
            }
            let alpha = a[(p, p)].re;
            let beta = a[(q, q)].re;
            // componentwise division: complex division squares the denominator
            // norm and underflows for subnormal couplings
            let u = C64::new(g.re / gn, g.im / gn);
            // real Jacobi angle on the phase-stripped block
            let theta = (beta - alpha) / (2.0 * gn);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let cs = 1.0 / (t * t + 1.0).sqrt();
            let sn = t * cs;
            // J = diag(u, 1) · [[c, s], [−s, c]]; J† H J zeroes the (p, q) entry
            let jp = (u * cr(cs), cr(-sn));
            let jq = (u * cr(sn), cr(cs));
            // A ← J† A J
            for r in 0..3 {
                let arp = a[(r, p)];
                let arq = a[(r, q)];
                a[(r, p)] = arp * jp.0 + arq * jp.1;
                a[(r, q)] = arp * jq.0 + arq * jq.1;
            }
            for rc in 0..3 {
                let apc = a[(p, rc)];
                let aqc = a[(q, rc)];
                a[(p, rc)] = jp.0.conj() * apc + jp.1.conj() * aqc;
                a[(q, rc)] = jq.0.conj() * apc + jq.1.conj() * aqc;
            }
            // exact zero off-diagonal and real diagonal by construction
            a[(p, q)] = C64::ZERO;
            a[(q, p)] = C64::ZERO;
            a[(p, p)] = cr(a[(p, p)].re);
            a[(q, q)] = cr(a[(q, q)].re);
            for r in 0..3 {
                let vrp = v[(r, p)];
                let vrq = v[(r, q)];
                v[(r, p)] = vrp * jp.0 + vrq * jp.1;
                v[(r, q)] = vrp * jq.0 + vrq * jq.1;
            }
        }
    }

    let evals = Vector3::new(a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re);
    (evals, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_handles_scale_separated_hermitian() {
        // regression case where tridiagonalization-based eigen loses accuracy
        let o1 = c(0.0, 2.087120418014145) * cr(0.5);
        let o2 = c(0.0, 3.6620794961102425) * cr(0.5);
        let mut h = Matrix3::<C64>::zeros();
        h[(0, 2)] = o1;
        h[(1, 2)] = o2;
        h[(2, 0)] = o1.conj();
        h[(2, 1)] = o2.conj();
        h[(2, 2)] = cr(-98.31696152968912);
        let (evals, v) = hermitian_eigen(&h);
        let scale = frob(&h);
        for k in 0..3 {
            let col = v.column(k);
            let r = h * col - col * cr(evals[k]);
            assert!(
                r.norm() <= 1e-14 * scale,
                "residual {:.3e} for eigenvalue {}",
                r.norm(),
                evals[k]
            );
        }
        let ortho = frob(&(v.adjoint() * v - Matrix3::identity()));
        assert!(ortho < 1e-14);
    }
}
