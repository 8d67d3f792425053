use num_traits::{One, Zero};

use super::fp2::Fp2;
use super::g1::G1Element;
use super::gt::GtElement;
use super::params::{Fp, COFACTOR, MILLER_LOOP};
use crate::field::PrimeField;

/// Symmetric pairing e(a, b) = Tate(a, phi(b))^((p^2 - 1) / q) where
/// phi(x, y) = (-x, i*y) is the distortion map.
pub fn pair(a: &G1Element, b: &G1Element) -> GtElement {
    let (Some((xp, yp)), Some((xq, yq))) = (a.coords, b.coords) else {
        return GtElement::one();
    };
    let f = miller_loop(xp, yp, xq, yq);
    GtElement::from_fp2_unchecked(final_exponentiation(f))
}

/// Miller loop over q - 1; the vertical line of the last step lies in F_p
/// and vanishes under the final exponentiation, as do all F_p scalings of
/// the line functions below.
fn miller_loop(xp: Fp, yp: Fp, xq: Fp, yq: Fp) -> Fp2 {
    let (mut x, mut y, mut z) = (xp, yp, Fp::one());
    let mut f = Fp2::one();
    let mut started = false;

    for limb in MILLER_LOOP.iter().rev() {
        for bit in (0..64).rev() {
            let set = (limb >> bit) & 1 == 1;
            if !started {
                // the leading bit initializes T = P
                started = set;
                continue;
            }

            // doubling step: line tangent at T, scaled by 2*Y*Z^3
            let xx = x.square();
            let yy = y.square();
            let zz = z.square();
            let m = xx.double() + xx + zz.square();
            let s = (x * yy).double().double();
            let x3 = m.square() - s.double();
            let y3 = m * (s - x3) - yy.square().double().double().double();
            let z3 = (y * z).double();
            let line = Fp2::new(m * (xq * zz + x) - yy.double(), z3 * zz * yq);
            f = f.square() * line;
            (x, y, z) = (x3, y3, z3);

            if set {
                // addition step with affine P: chord through T and P, scaled by Z*H
                let z1z1 = z.square();
                let u2 = xp * z1z1;
                let s2 = yp * z * z1z1;
                let h = u2 - x;
                let r = s2 - y;
                debug_assert!(!h.is_zero(), "T = +-P inside the Miller loop");
                let hh = h.square();
                let hhh = h * hh;
                let v = x * hh;
                let x3 = r.square() - hhh - v.double();
                let y3 = r * (v - x3) - y * hhh;
                let z3 = z * h;
                let line = Fp2::new(r * (xq + xp) - yp * z3, z3 * yq);
                f = f * line;
                (x, y, z) = (x3, y3, z3);
            }
        }
    }
    f
}

fn final_exponentiation(f: Fp2) -> Fp2 {
    // f^(p - 1) = conj(f) / f, then raise to h = (p + 1) / q
    let inv = f.inverse().expect("Miller loop output is nonzero");
    let g = f.conjugate() * inv;
    g.unitary_pow_limbs(&COFACTOR)
}
