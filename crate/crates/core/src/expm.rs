//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::matrix::Matrix;

const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

pub fn expm(a: &Matrix) -> Result<Matrix, Error> {
    assert!(a.is_square());
    let n = a.rows();
    if !a.is_finite() {
        return Err(Error::Overflow);
    }
    let norm = a.norm_1();
    let mut s = 0i32;
    if norm > THETA13 {
        s = (norm / THETA13).log2().ceil() as i32;
    }
    let a = a.scale(2f64.powi(-s));
    let id = Matrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let b = &B13;

    let inner_u = &(&a6.scale(b[13]) + &a4.scale(b[11])) + &a2.scale(b[9]);
    let u = &(&a6 * &inner_u) + &(&(&(&a6.scale(b[7]) + &a4.scale(b[5])) + &a2.scale(b[3])) + &id.scale(b[1]));
    let u = &a * &u;
    let inner_v = &(&a6.scale(b[12]) + &a4.scale(b[10])) + &a2.scale(b[8]);
    let v = &(&a6 * &inner_v) + &(&(&(&a6.scale(b[6]) + &a4.scale(b[4])) + &a2.scale(b[2])) + &id.scale(b[0]));

    let p = &v + &u;
    let q = &v - &u;
    let lu = q.lu().ok_or(Error::Overflow)?;
    let mut r = lu.solve(&p);
    for _ in 0..s {
        r = &r * &r;
        if !r.is_finite() {
            return Err(Error::Overflow);
        }
    }
    if !r.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(r)
}
