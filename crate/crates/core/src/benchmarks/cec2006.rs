//! Inequality-constrained problems from the CEC 2006 constrained
//! real-parameter optimization suite (Liang et al., 2006), with hand-written
//! gradients. Box bounds are appended as ordinary constraints.
//!
//! Indices in comments are 1-based like the published definitions; code is
//! 0-based.

use nalgebra::DVector;

use crate::problem::{Problem, SmoothFn};

fn sf<F>(f: F) -> SmoothFn
where
    F: Fn(&[f64]) -> (f64, Vec<f64>) + Send + Sync + 'static,
{
    SmoothFn::new(move |x: &DVector<f64>| {
        let (v, g) = f(x.as_slice());
        (v, DVector::from_vec(g))
    })
}

fn linear(coeffs: Vec<(usize, f64)>, n: usize, constant: f64) -> SmoothFn {
    let mut a = DVector::zeros(n);
    for (i, c) in coeffs {
        a[i] += c;
    }
    SmoothFn::affine(a, constant)
}

fn build(name: &str, n: usize, f: SmoothFn, g: Vec<SmoothFn>, lo: &[f64], hi: &[f64]) -> Problem {
    Problem::new(name, n, f, g)
        .and_then(|p| p.with_bounds(lo, hi))
        .expect("static problem definition")
}

pub fn g01() -> Problem {
    let n = 13;
    let f = sf(|x| {
        let mut v = 0.0;
        let mut g = vec![0.0; 13];
        for i in 0..4 {
            v += 5.0 * x[i] - 5.0 * x[i] * x[i];
            g[i] = 5.0 - 10.0 * x[i];
        }
        for i in 4..13 {
            v -= x[i];
            g[i] = -1.0;
        }
        (v, g)
    });
    let cons = vec![
        linear(vec![(0, 2.0), (1, 2.0), (9, 1.0), (10, 1.0)], n, -10.0),
        linear(vec![(0, 2.0), (2, 2.0), (9, 1.0), (11, 1.0)], n, -10.0),
        linear(vec![(1, 2.0), (2, 2.0), (10, 1.0), (11, 1.0)], n, -10.0),
        linear(vec![(0, -8.0), (9, 1.0)], n, 0.0),
        linear(vec![(1, -8.0), (10, 1.0)], n, 0.0),
        linear(vec![(2, -8.0), (11, 1.0)], n, 0.0),
        linear(vec![(3, -2.0), (4, -1.0), (9, 1.0)], n, 0.0),
        linear(vec![(5, -2.0), (6, -1.0), (10, 1.0)], n, 0.0),
        linear(vec![(7, -2.0), (8, -1.0), (11, 1.0)], n, 0.0),
    ];
    let mut hi = vec![1.0; 13];
    hi[9] = 100.0;
    hi[10] = 100.0;
    hi[11] = 100.0;
    build("G01", n, f, cons, &[0.0; 13], &hi)
}

fn g04_u(x: &[f64]) -> (f64, Vec<f64>) {
    let v = 85.334407 + 0.0056858 * x[1] * x[4] + 0.0006262 * x[0] * x[3] - 0.0022053 * x[2] * x[4];
    let g = vec![
        0.0006262 * x[3],
        0.0056858 * x[4],
        -0.0022053 * x[4],
        0.0006262 * x[0],
        0.0056858 * x[1] - 0.0022053 * x[2],
    ];
    (v, g)
}

fn g04_v(x: &[f64]) -> (f64, Vec<f64>) {
    let v = 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] + 0.0021813 * x[2] * x[2];
    let g = vec![
        0.0029955 * x[1],
        0.0071317 * x[4] + 0.0029955 * x[0],
        2.0 * 0.0021813 * x[2],
        0.0,
        0.0071317 * x[1],
    ];
    (v, g)
}

fn g04_w(x: &[f64]) -> (f64, Vec<f64>) {
    let v = 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] + 0.0019085 * x[2] * x[3];
    let g = vec![
        0.0012547 * x[2],
        0.0,
        0.0047026 * x[4] + 0.0012547 * x[0] + 0.0019085 * x[3],
        0.0019085 * x[2],
        0.0047026 * x[2],
    ];
    (v, g)
}

/// `scale * h(x) + shift`.
fn shifted(h: fn(&[f64]) -> (f64, Vec<f64>), scale: f64, shift: f64) -> SmoothFn {
    sf(move |x| {
        let (v, g) = h(x);
        (scale * v + shift, g.into_iter().map(|d| scale * d).collect())
    })
}

pub fn g04() -> Problem {
    let f = sf(|x| {
        let v = 5.3578547 * x[2] * x[2] + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40792.141;
        let g = vec![
            0.8356891 * x[4] + 37.293239,
            0.0,
            2.0 * 5.3578547 * x[2],
            0.0,
            0.8356891 * x[0],
        ];
        (v, g)
    });
    let cons = vec![
        shifted(g04_u, 1.0, -92.0),
        shifted(g04_u, -1.0, 0.0),
        shifted(g04_v, 1.0, -110.0),
        shifted(g04_v, -1.0, 90.0),
        shifted(g04_w, 1.0, -25.0),
        shifted(g04_w, -1.0, 20.0),
    ];
    build(
        "G04",
        5,
        f,
        cons,
        &[78.0, 33.0, 27.0, 27.0, 27.0],
        &[102.0, 45.0, 45.0, 45.0, 45.0],
    )
}

pub fn g06() -> Problem {
    let f = sf(|x| {
        let (a, b) = (x[0] - 10.0, x[1] - 20.0);
        (a.powi(3) + b.powi(3), vec![3.0 * a * a, 3.0 * b * b])
    });
    let cons = vec![
        sf(|x| {
            let (a, b) = (x[0] - 5.0, x[1] - 5.0);
            (-a * a - b * b + 100.0, vec![-2.0 * a, -2.0 * b])
        }),
        sf(|x| {
            let (a, b) = (x[0] - 6.0, x[1] - 5.0);
            (a * a + b * b - 82.81, vec![2.0 * a, 2.0 * b])
        }),
    ];
    build("G06", 2, f, cons, &[13.0, 0.0], &[100.0, 100.0])
}

pub fn g07() -> Problem {
    let f = sf(|x| {
        let v = x[0] * x[0] + x[1] * x[1] + x[0] * x[1] - 14.0 * x[0] - 16.0 * x[1]
            + (x[2] - 10.0).powi(2)
            + 4.0 * (x[3] - 5.0).powi(2)
            + (x[4] - 3.0).powi(2)
            + 2.0 * (x[5] - 1.0).powi(2)
            + 5.0 * x[6] * x[6]
            + 7.0 * (x[7] - 11.0).powi(2)
            + 2.0 * (x[8] - 10.0).powi(2)
            + (x[9] - 7.0).powi(2)
            + 45.0;
        let g = vec![
            2.0 * x[0] + x[1] - 14.0,
            2.0 * x[1] + x[0] - 16.0,
            2.0 * (x[2] - 10.0),
            8.0 * (x[3] - 5.0),
            2.0 * (x[4] - 3.0),
            4.0 * (x[5] - 1.0),
            10.0 * x[6],
            14.0 * (x[7] - 11.0),
            4.0 * (x[8] - 10.0),
            2.0 * (x[9] - 7.0),
        ];
        (v, g)
    });
    let n = 10;
    let cons = vec![
        linear(vec![(0, 4.0), (1, 5.0), (6, -3.0), (7, 9.0)], n, -105.0),
        linear(vec![(0, 10.0), (1, -8.0), (6, -17.0), (7, 2.0)], n, 0.0),
        linear(vec![(0, -8.0), (1, 2.0), (8, 5.0), (9, -2.0)], n, -12.0),
        sf(|x| {
            let v = 3.0 * (x[0] - 2.0).powi(2) + 4.0 * (x[1] - 3.0).powi(2) + 2.0 * x[2] * x[2] - 7.0 * x[3] - 120.0;
            let mut g = vec![0.0; 10];
            g[0] = 6.0 * (x[0] - 2.0);
            g[1] = 8.0 * (x[1] - 3.0);
            g[2] = 4.0 * x[2];
            g[3] = -7.0;
            (v, g)
        }),
        sf(|x| {
            let v = 5.0 * x[0] * x[0] + 8.0 * x[1] + (x[2] - 6.0).powi(2) - 2.0 * x[3] - 40.0;
            let mut g = vec![0.0; 10];
            g[0] = 10.0 * x[0];
            g[1] = 8.0;
            g[2] = 2.0 * (x[2] - 6.0);
            g[3] = -2.0;
            (v, g)
        }),
        sf(|x| {
            let v = x[0] * x[0] + 2.0 * (x[1] - 2.0).powi(2) - 2.0 * x[0] * x[1] + 14.0 * x[4] - 6.0 * x[5];
            let mut g = vec![0.0; 10];
            g[0] = 2.0 * x[0] - 2.0 * x[1];
            g[1] = 4.0 * (x[1] - 2.0) - 2.0 * x[0];
            g[4] = 14.0;
            g[5] = -6.0;
            (v, g)
        }),
        sf(|x| {
            let v = 0.5 * (x[0] - 8.0).powi(2) + 2.0 * (x[1] - 4.0).powi(2) + 3.0 * x[4] * x[4] - x[5] - 30.0;
            let mut g = vec![0.0; 10];
            g[0] = x[0] - 8.0;
            g[1] = 4.0 * (x[1] - 4.0);
            g[4] = 6.0 * x[4];
            g[5] = -1.0;
            (v, g)
        }),
        sf(|x| {
            let v = -3.0 * x[0] + 6.0 * x[1] + 12.0 * (x[8] - 8.0).powi(2) - 7.0 * x[9];
            let mut g = vec![0.0; 10];
            g[0] = -3.0;
            g[1] = 6.0;
            g[8] = 24.0 * (x[8] - 8.0);
            g[9] = -7.0;
            (v, g)
        }),
    ];
    build("G07", n, f, cons, &[-10.0; 10], &[10.0; 10])
}

pub fn g08() -> Problem {
    use std::f64::consts::TAU;
    let f = sf(|x| {
        let (a, b) = (x[0], x[1]);
        let (s1, c1) = (TAU * a).sin_cos();
        let (s2, c2) = (TAU * b).sin_cos();
        let num = s1.powi(3) * s2;
        let den = a.powi(3) * (a + b);
        let v = -num / den;
        let dnum_a = 3.0 * s1 * s1 * c1 * TAU * s2;
        let dnum_b = s1.powi(3) * c2 * TAU;
        let dden_a = 3.0 * a * a * (a + b) + a.powi(3);
        let dden_b = a.powi(3);
        let ga = -(dnum_a * den - num * dden_a) / (den * den);
        let gb = -(dnum_b * den - num * dden_b) / (den * den);
        (v, vec![ga, gb])
    });
    let cons = vec![
        sf(|x| (x[0] * x[0] - x[1] + 1.0, vec![2.0 * x[0], -1.0])),
        sf(|x| {
            let b = x[1] - 4.0;
            (1.0 - x[0] + b * b, vec![-1.0, 2.0 * b])
        }),
    ];
    build("G08", 2, f, cons, &[0.0, 0.0], &[10.0, 10.0])
}

pub fn g09() -> Problem {
    let f = sf(|x| {
        let v = (x[0] - 10.0).powi(2)
            + 5.0 * (x[1] - 12.0).powi(2)
            + x[2].powi(4)
            + 3.0 * (x[3] - 11.0).powi(2)
            + 10.0 * x[4].powi(6)
            + 7.0 * x[5] * x[5]
            + x[6].powi(4)
            - 4.0 * x[5] * x[6]
            - 10.0 * x[5]
            - 8.0 * x[6];
        let g = vec![
            2.0 * (x[0] - 10.0),
            10.0 * (x[1] - 12.0),
            4.0 * x[2].powi(3),
            6.0 * (x[3] - 11.0),
            60.0 * x[4].powi(5),
            14.0 * x[5] - 4.0 * x[6] - 10.0,
            4.0 * x[6].powi(3) - 4.0 * x[5] - 8.0,
        ];
        (v, g)
    });
    let cons = vec![
        sf(|x| {
            let v = -127.0 + 2.0 * x[0] * x[0] + 3.0 * x[1].powi(4) + x[2] + 4.0 * x[3] * x[3] + 5.0 * x[4];
            (v, vec![4.0 * x[0], 12.0 * x[1].powi(3), 1.0, 8.0 * x[3], 5.0, 0.0, 0.0])
        }),
        sf(|x| {
            let v = -282.0 + 7.0 * x[0] + 3.0 * x[1] + 10.0 * x[2] * x[2] + x[3] - x[4];
            (v, vec![7.0, 3.0, 20.0 * x[2], 1.0, -1.0, 0.0, 0.0])
        }),
        sf(|x| {
            let v = -196.0 + 23.0 * x[0] + x[1] * x[1] + 6.0 * x[5] * x[5] - 8.0 * x[6];
            (v, vec![23.0, 2.0 * x[1], 0.0, 0.0, 0.0, 12.0 * x[5], -8.0])
        }),
        sf(|x| {
            let v = 4.0 * x[0] * x[0] + x[1] * x[1] - 3.0 * x[0] * x[1] + 2.0 * x[2] * x[2] + 5.0 * x[5] - 11.0 * x[6];
            (
                v,
                vec![
                    8.0 * x[0] - 3.0 * x[1],
                    2.0 * x[1] - 3.0 * x[0],
                    4.0 * x[2],
                    0.0,
                    0.0,
                    5.0,
                    -11.0,
                ],
            )
        }),
    ];
    build("G09", 7, f, cons, &[-10.0; 7], &[10.0; 7])
}

pub fn g10() -> Problem {
    let n = 8;
    let f = linear(vec![(0, 1.0), (1, 1.0), (2, 1.0)], n, 0.0);
    let cons = vec![
        linear(vec![(3, 0.0025), (5, 0.0025)], n, -1.0),
        linear(vec![(4, 0.0025), (6, 0.0025), (3, -0.0025)], n, -1.0),
        linear(vec![(7, 0.01), (4, -0.01)], n, -1.0),
        sf(|x| {
            let v = -x[0] * x[5] + 833.33252 * x[3] + 100.0 * x[0] - 83333.333;
            let mut g = vec![0.0; 8];
            g[0] = -x[5] + 100.0;
            g[3] = 833.33252;
            g[5] = -x[0];
            (v, g)
        }),
        sf(|x| {
            let v = -x[1] * x[6] + 1250.0 * x[4] + x[1] * x[3] - 1250.0 * x[3];
            let mut g = vec![0.0; 8];
            g[1] = -x[6] + x[3];
            g[3] = x[1] - 1250.0;
            g[4] = 1250.0;
            g[6] = -x[1];
            (v, g)
        }),
        sf(|x| {
            let v = -x[2] * x[7] + 1_250_000.0 + x[2] * x[4] - 2500.0 * x[4];
            let mut g = vec![0.0; 8];
            g[2] = -x[7] + x[4];
            g[4] = x[2] - 2500.0;
            g[7] = -x[2];
            (v, g)
        }),
    ];
    let lo = [100.0, 1000.0, 1000.0, 10.0, 10.0, 10.0, 10.0, 10.0];
    let hi = [10000.0, 10000.0, 10000.0, 1000.0, 1000.0, 1000.0, 1000.0, 1000.0];
    build("G10", n, f, cons, &lo, &hi)
}

/// `(x_i - x_j)^2 + (x_k - x_l)^2 - 1` with any shift slot optional.
fn g18_circle(i: usize, j: Option<usize>, k: usize, l: Option<usize>) -> SmoothFn {
    sf(move |x| {
        let a = x[i] - j.map_or(0.0, |j| x[j]);
        let b = x[k] - l.map_or(0.0, |l| x[l]);
        let mut g = vec![0.0; 9];
        g[i] += 2.0 * a;
        if let Some(j) = j {
            g[j] -= 2.0 * a;
        }
        g[k] += 2.0 * b;
        if let Some(l) = l {
            g[l] -= 2.0 * b;
        }
        (a * a + b * b - 1.0, g)
    })
}

/// `x_a x_b - x_c x_d`.
fn g18_cross(a: usize, b: usize, c: usize, d: usize) -> SmoothFn {
    sf(move |x| {
        let mut g = vec![0.0; 9];
        g[a] += x[b];
        g[b] += x[a];
        g[c] -= x[d];
        g[d] -= x[c];
        (x[a] * x[b] - x[c] * x[d], g)
    })
}

pub fn g18() -> Problem {
    let f = sf(|x| {
        let v = -0.5 * (x[0] * x[3] - x[1] * x[2] + x[2] * x[8] - x[4] * x[8] + x[4] * x[7] - x[5] * x[6]);
        let g = vec![
            -0.5 * x[3],
            0.5 * x[2],
            -0.5 * (x[8] - x[1]),
            -0.5 * x[0],
            -0.5 * (x[7] - x[8]),
            0.5 * x[6],
            0.5 * x[5],
            -0.5 * x[4],
            -0.5 * (x[2] - x[4]),
        ];
        (v, g)
    });
    let cons = vec![
        g18_circle(2, None, 3, None),
        sf(|x| {
            let mut g = vec![0.0; 9];
            g[8] = 2.0 * x[8];
            (x[8] * x[8] - 1.0, g)
        }),
        g18_circle(4, None, 5, None),
        g18_circle(0, None, 1, Some(8)),
        g18_circle(0, Some(4), 1, Some(5)),
        g18_circle(0, Some(6), 1, Some(7)),
        g18_circle(2, Some(4), 3, Some(5)),
        g18_circle(2, Some(6), 3, Some(7)),
        g18_circle(6, None, 7, Some(8)),
        g18_cross(1, 2, 0, 3),
        sf(|x| {
            let mut g = vec![0.0; 9];
            g[2] = -x[8];
            g[8] = -x[2];
            (-x[2] * x[8], g)
        }),
        sf(|x| {
            let mut g = vec![0.0; 9];
            g[4] = x[8];
            g[8] = x[4];
            (x[4] * x[8], g)
        }),
        g18_cross(5, 6, 4, 7),
    ];
    let mut lo = [-10.0; 9];
    let mut hi = [10.0; 9];
    lo[8] = 0.0;
    hi[8] = 20.0;
    build("G18", 9, f, cons, &lo, &hi)
}

const G19_A: [[f64; 5]; 10] = [
    [-16.0, 2.0, 0.0, 1.0, 0.0],
    [0.0, -2.0, 0.0, 0.4, 2.0],
    [-3.5, 0.0, 2.0, 0.0, 0.0],
    [0.0, -2.0, 0.0, -4.0, -1.0],
    [0.0, -9.0, -2.0, 1.0, -2.8],
    [2.0, 0.0, -4.0, 0.0, 0.0],
    [-1.0, -1.0, -1.0, -1.0, -1.0],
    [-1.0, -2.0, -3.0, -2.0, -1.0],
    [1.0, 2.0, 3.0, 4.0, 5.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
];
const G19_B: [f64; 10] = [-40.0, -2.0, -0.25, -4.0, -4.0, -1.0, -40.0, -60.0, 5.0, 1.0];
const G19_C: [[f64; 5]; 5] = [
    [30.0, -20.0, -10.0, 32.0, -10.0],
    [-20.0, 39.0, -6.0, -31.0, 32.0],
    [-10.0, -6.0, 10.0, -6.0, -10.0],
    [32.0, -31.0, -6.0, 39.0, -20.0],
    [-10.0, 32.0, -10.0, -20.0, 30.0],
];
const G19_D: [f64; 5] = [4.0, 8.0, 10.0, 6.0, 2.0];
const G19_E: [f64; 5] = [-15.0, -27.0, -36.0, -18.0, -12.0];

pub fn g19() -> Problem {
    let f = sf(|x| {
        let y = &x[10..15];
        let mut v = 0.0;
        let mut g = vec![0.0; 15];
        for j in 0..5 {
            for i in 0..5 {
                v += G19_C[i][j] * y[i] * y[j];
                g[10 + i] += G19_C[i][j] * y[j];
                g[10 + j] += G19_C[i][j] * y[i];
            }
            v += 2.0 * G19_D[j] * y[j].powi(3);
            g[10 + j] += 6.0 * G19_D[j] * y[j] * y[j];
        }
        for i in 0..10 {
            v -= G19_B[i] * x[i];
            g[i] = -G19_B[i];
        }
        (v, g)
    });
    let cons = (0..5)
        .map(|j| {
            sf(move |x| {
                let mut v = -G19_E[j];
                let mut g = vec![0.0; 15];
                for i in 0..5 {
                    v -= 2.0 * G19_C[i][j] * x[10 + i];
                    g[10 + i] -= 2.0 * G19_C[i][j];
                }
                v -= 3.0 * G19_D[j] * x[10 + j] * x[10 + j];
                g[10 + j] -= 6.0 * G19_D[j] * x[10 + j];
                for i in 0..10 {
                    v += G19_A[i][j] * x[i];
                    g[i] += G19_A[i][j];
                }
                (v, g)
            })
        })
        .collect();
    build("G19", 15, f, cons, &[0.0; 15], &[10.0; 15])
}

pub fn g24() -> Problem {
    let f = linear(vec![(0, -1.0), (1, -1.0)], 2, 0.0);
    let cons = vec![
        sf(|x| {
            let a = x[0];
            let v = -2.0 * a.powi(4) + 8.0 * a.powi(3) - 8.0 * a * a + x[1] - 2.0;
            (v, vec![-8.0 * a.powi(3) + 24.0 * a * a - 16.0 * a, 1.0])
        }),
        sf(|x| {
            let a = x[0];
            let v = -4.0 * a.powi(4) + 32.0 * a.powi(3) - 88.0 * a * a + 96.0 * a + x[1] - 36.0;
            (v, vec![-16.0 * a.powi(3) + 96.0 * a * a - 176.0 * a + 96.0, 1.0])
        }),
    ];
    build("G24", 2, f, cons, &[0.0, 0.0], &[3.0, 4.0])
}

/// Published best-known solutions.
// digits as published
#[allow(clippy::excessive_precision)]
pub fn known_optimum(name: &str) -> Option<Vec<f64>> {
    let x = match name {
        "G01" => vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 1.0],
        "G04" => vec![78.0, 33.0, 29.9952560256815985, 45.0, 36.7758129057882073],
        "G06" => vec![14.095, 0.84296078921547957],
        "G07" => vec![
            2.17199634142692,
            2.3636830416034,
            8.77392573913157,
            5.09598443745173,
            0.990654756560493,
            1.43057392853463,
            1.32164415364306,
            9.82872576524495,
            8.2800915887356,
            8.3759266477347,
        ],
        "G08" => vec![1.22797135260752599, 4.24537336612274885],
        "G09" => vec![
            2.33049935147405174,
            1.95137236847114592,
            -0.477541399510615805,
            4.36572624923625874,
            -0.624486959100388983,
            1.03813099410962173,
            1.5942266780671519,
        ],
        "G10" => vec![
            579.306685017979589,
            1359.97067807935605,
            5109.97065743133317,
            182.01769963061534,
            295.601173702746792,
            217.982300369384632,
            286.41652592786852,
            395.601173702746735,
        ],
        "G18" => vec![
            -0.657776192427943163,
            -0.153418773482438542,
            0.323413871675240938,
            -0.946257611651304398,
            -0.657776194376798906,
            -0.753213434632691414,
            0.323413874123576972,
            -0.346462947962331735,
            0.59979466285217542,
        ],
        "G19" => vec![
            1.66991341326291344e-17,
            3.95378229282456509e-16,
            3.94599045143233784,
            1.06036597479721211e-16,
            3.2831773458454161,
            9.99999999999999822,
            1.12829414671605333e-17,
            1.2026194599794709e-17,
            2.50706276000769697e-15,
            2.24624122987970677e-15,
            0.370764847417013987,
            0.278456024942955571,
            0.523838487672241171,
            0.388620152510322781,
            0.298156764974678579,
        ],
        "G24" => vec![2.32952019747762, 3.17849307411774],
        _ => return None,
    };
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{central_gradient, evaluate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all() -> Vec<Problem> {
        vec![g01(), g04(), g06(), g07(), g08(), g09(), g10(), g18(), g19(), g24()]
    }

    // best-known objective values from the suite's technical report
    const BEST: [(&str, f64); 10] = [
        ("G01", -15.0),
        ("G04", -30665.538671783),
        ("G06", -6961.81387558015),
        ("G07", 24.30620906818),
        ("G08", -0.0958250414180359),
        ("G09", 680.630057374402),
        ("G10", 7049.24802052867),
        ("G18", -0.866025403784439),
        ("G19", 32.6555929502463),
        ("G24", -5.50801327159536),
    ];

    #[test]
    fn optimum_is_feasible_and_matches_best_value() {
        for (name, best) in BEST {
            let p = all().into_iter().find(|p| p.name() == name).unwrap();
            let x = DVector::from_vec(known_optimum(name).unwrap());
            let e = evaluate(&p, &x).unwrap();
            assert!(e.max_g <= 1e-6, "{name}: max g = {:e}", e.max_g);
            assert!(
                (e.f_value - best).abs() <= 1e-6 * best.abs().max(1.0),
                "{name}: f = {} vs {best}",
                e.f_value
            );
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in all() {
            let x_star = known_optimum(p.name()).unwrap();
            for _ in 0..5 {
                let x = DVector::from_iterator(
                    p.n_dims(),
                    x_star.iter().map(|v| v + rng.gen_range(-0.3..0.3) * (1.0 + v.abs())),
                );
                let x = if p.name() == "G08" {
                    x.map(|v| v.abs().max(0.5))
                } else {
                    x
                };
                let mut funcs = vec![p.objective()];
                funcs.extend(p.constraints());
                for (k, func) in funcs.iter().enumerate() {
                    let (_, grad) = func.value_and_gradient(&x);
                    let fd = central_gradient(&|y: &DVector<f64>| func.value(y), &x);
                    let err = (&grad - &fd).norm() / grad.norm().max(1.0);
                    assert!(err <= 1e-5, "{} function {k}: rel err {err:e}", p.name());
                }
            }
        }
    }

    #[test]
    fn bounds_are_appended() {
        assert_eq!(g01().n_constraints(), 9 + 26);
        assert_eq!(g04().n_constraints(), 6 + 10);
        assert_eq!(g19().n_constraints(), 5 + 30);
        assert_eq!(g24().n_constraints(), 2 + 4);
    }
}
