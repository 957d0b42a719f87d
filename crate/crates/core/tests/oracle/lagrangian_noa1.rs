// Generated by tests/oracle/lagrangian_noa1.py. Do not edit.

/// Chain parameters: masses, inertias about the centers of mass, lengths,
/// and center-of-mass offsets from each anterior joint.
#[derive(Debug, Clone, Copy)]
pub struct ChainParams {
    pub m: [f64; 3],
    pub i: [f64; 3],
    pub l: [f64; 3],
    pub d: [f64; 3],
}

/// Mass matrix and velocity-product terms of the three-body chain:
/// `M(q) q̈ + c(q, q̇) = Q`.
#[allow(clippy::all, unused_variables, non_snake_case)]
pub fn chain_eom(p: &ChainParams, q: &[f64; 5], qd: &[f64; 5]) -> ([[f64; 5]; 5], [f64; 5]) {
    let m0 = p.m[0];
    let i0 = p.i[0];
    let l0 = p.l[0];
    let d0 = p.d[0];
    let m1 = p.m[1];
    let i1 = p.i[1];
    let l1 = p.l[1];
    let d1 = p.d[1];
    let m2 = p.m[2];
    let i2 = p.i[2];
    let l2 = p.l[2];
    let d2 = p.d[2];
    let q0 = q[0];
    let qd0 = qd[0];
    let q1 = q[1];
    let qd1 = qd[1];
    let q2 = q[2];
    let qd2 = qd[2];
    let q3 = q[3];
    let qd3 = qd[3];
    let q4 = q[4];
    let qd4 = qd[4];
    let w0 = m0 + m1 + m2;
    let w1 = q2.sin();
    let w2 = d0 * m0;
    let w3 = w1 * w2;
    let w4 = l0 * w1;
    let w5 = m1 * w4;
    let w6 = m2 * w4;
    let w7 = q2 + q3;
    let w8 = w7.sin();
    let w9 = d1 * m1;
    let w10 = w8 * w9;
    let w11 = l1 * m2;
    let w12 = w11 * w8;
    let w13 = q4 + w7;
    let w14 = d2 * m2;
    let w15 = w14 * w13.sin();
    let w16 = w10 + w12 + w15;
    let w17 = -w16 - w3 - w5 - w6;
    let w18 = -w16;
    let w19 = -w15;
    let w20 = q2.cos();
    let w21 = w2 * w20;
    let w22 = l0 * w20;
    let w23 = m1 * w22;
    let w24 = m2 * w22;
    let w25 = w7.cos();
    let w26 = w25 * w9;
    let w27 = w11 * w25;
    let w28 = w14 * w13.cos();
    let w29 = w26 + w27 + w28;
    let w30 = w21 + w23 + w24 + w29;
    let w31 = l0.powi(2);
    let w32 = l0 * q3.cos();
    let w33 = w32 * w9;
    let w34 = q3 + q4;
    let w35 = l0 * w14 * w34.cos();
    let w36 = w11 * w32;
    let w37 = l1 * w14 * q4.cos();
    let w38 = i2 + d2.powi(2) * m2;
    let w39 = i1 + 2.0 * w37 + w38 + d1.powi(2) * m1 + l1.powi(2) * m2;
    let w40 = w33 + w35 + w36 + w39;
    let w41 = w37 + w38;
    let w42 = w35 + w41;
    let w43 = qd2.powi(2);
    let w44 = qd3.powi(2);
    let w45 = 2.0 * qd2;
    let w46 = qd3 * w45;
    let w47 = qd4.powi(2);
    let w48 = qd4 * w28;
    let w49 = 2.0 * qd3;
    let w50 = qd4 * w15;
    let w51 = l0 * q3.sin();
    let w52 = w44 * w51;
    let w53 = l1 * q4.sin();
    let w54 = w14 * w53;
    let w55 = w47 * w54;
    let w56 = w46 * w51;
    let w57 = qd4 * w45;
    let w58 = w54 * w57;
    let w59 = qd4 * w49;
    let w60 = w54 * w59;
    let w61 = l0 * w34.sin();
    let w62 = w14 * w61;
    let w63 = w43 * w51;
    let w64 = w43 * w61;
    let mut mass = [[0.0; 5]; 5];
    mass[0][0] = w0;
    mass[0][1] = 0.0;
    mass[0][2] = w17;
    mass[0][3] = w18;
    mass[0][4] = w19;
    mass[1][0] = 0.0;
    mass[1][1] = w0;
    mass[1][2] = w30;
    mass[1][3] = w29;
    mass[1][4] = w28;
    mass[2][0] = w17;
    mass[2][1] = w30;
    mass[2][2] = i0 + 2.0 * w33 + 2.0 * w35 + 2.0 * w36 + w39 + d0.powi(2) * m0 + m1 * w31 + m2 * w31;
    mass[2][3] = w40;
    mass[2][4] = w42;
    mass[3][0] = w18;
    mass[3][1] = w29;
    mass[3][2] = w40;
    mass[3][3] = w39;
    mass[3][4] = w41;
    mass[4][0] = w19;
    mass[4][1] = w28;
    mass[4][2] = w42;
    mass[4][3] = w41;
    mass[4][4] = w38;
    let bias = [
        -w21 * w43
            - w23 * w43
            - w24 * w43
            - w26 * w43
            - w26 * w44
            - w26 * w46
            - w27 * w43
            - w27 * w44
            - w27 * w46
            - w28 * w43
            - w28 * w44
            - w28 * w46
            - w28 * w47
            - w45 * w48
            - w48 * w49,
        -w10 * w43
            - w10 * w44
            - w10 * w46
            - w12 * w43
            - w12 * w44
            - w12 * w46
            - w15 * w43
            - w15 * w44
            - w15 * w46
            - w15 * w47
            - w3 * w43
            - w43 * w5
            - w43 * w6
            - w45 * w50
            - w49 * w50,
        -w11 * w52
            - w11 * w56
            - w44 * w62
            - w46 * w62
            - w47 * w62
            - w52 * w9
            - w55
            - w56 * w9
            - w57 * w62
            - w58
            - w59 * w62
            - w60,
        w11 * w63 + w14 * w64 - w55 - w58 - w60 + w63 * w9,
        w14 * (w43 * w53 + w44 * w53 + w46 * w53 + w64),
    ];
    (mass, bias)
}
