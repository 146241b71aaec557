use proptest::prelude::*;
use selfsim_core::group::GroupConfig;
use selfsim_core::matrix::{kernel_group, Matrix2, MatrixKind, Ring};

/// Test-side ring arithmetic on the packed representation.
fn mul(kind: MatrixKind, p: u64, k: u32, a: u64, b: u64) -> u64 {
    let n = p.pow(k);
    match kind {
        MatrixKind::Zp => a * b % n,
        MatrixKind::Lambda => {
            let digits = |x: u64| (0..k).map(|i| x / p.pow(i) % p).collect::<Vec<_>>();
            let (da, db) = (digits(a), digits(b));
            let mut out = vec![0u64; k as usize];
            for i in 0..k as usize {
                for j in 0..k as usize - i {
                    out[i + j] = (out[i + j] + da[i] * db[j]) % p;
                }
            }
            out.iter().rev().fold(0, |acc, &c| acc * p + c)
        }
    }
}

fn sub(kind: MatrixKind, p: u64, k: u32, a: u64, b: u64) -> u64 {
    let n = p.pow(k);
    match kind {
        MatrixKind::Zp => (a + n - b) % n,
        MatrixKind::Lambda => (0..k).fold(0, |acc, i| {
            let d = (a / p.pow(i) % p + p - b / p.pow(i) % p) % p;
            acc + d * p.pow(i)
        }),
    }
}

fn add(kind: MatrixKind, p: u64, k: u32, a: u64, b: u64) -> u64 {
    sub(kind, p, k, a, sub(kind, p, k, 0, b))
}

/// Matrices `≡ I` modulo the uniformizer with determinant 1, by exhaustion.
fn brute_force_kernel(kind: MatrixKind, p: u64, k: u32) -> usize {
    let n = p.pow(k);
    let small: Vec<u64> = (0..n).filter(|x| x % p == 0).collect();
    let one_plus: Vec<u64> = small.iter().map(|&x| add(kind, p, k, x, 1)).collect();
    let mut count = 0;
    for &a in &one_plus {
        for &d in &one_plus {
            for &b in &small {
                for &c in &small {
                    let det = sub(kind, p, k, mul(kind, p, k, a, d), mul(kind, p, k, b, c));
                    count += usize::from(det == 1);
                }
            }
        }
    }
    count
}

#[test]
fn kernel_orders_match_exhaustion() {
    for kind in [MatrixKind::Zp, MatrixKind::Lambda] {
        for (p, k) in [(3u32, 1u32), (3, 2), (3, 3), (5, 2)] {
            let g = kernel_group(kind, p, k, &GroupConfig::default()).unwrap();
            assert_eq!(
                g.order(),
                brute_force_kernel(kind, p as u64, k),
                "{kind} p={p} k={k}"
            );
        }
    }
}

fn matmul(kind: MatrixKind, p: u64, k: u32, x: [u64; 4], y: [u64; 4]) -> [u64; 4] {
    let m = |a, b| mul(kind, p, k, a, b);
    let s = |a, b| add(kind, p, k, a, b);
    [
        s(m(x[0], y[0]), m(x[1], y[2])),
        s(m(x[0], y[1]), m(x[1], y[3])),
        s(m(x[2], y[0]), m(x[3], y[2])),
        s(m(x[2], y[1]), m(x[3], y[3])),
    ]
}

fn kinds() -> impl Strategy<Value = MatrixKind> {
    prop_oneof![Just(MatrixKind::Zp), Just(MatrixKind::Lambda)]
}

proptest! {
    #[test]
    fn multiplication_matches_schoolbook(kind in kinds(), a in 0usize..729, b in 0usize..729) {
        let (p, k) = (3u32, 3u32);
        let ring = Ring::new(kind, p, k).unwrap();
        let g = kernel_group(kind, p, k, &GroupConfig::default()).unwrap();
        let x = Matrix2::decode(ring, g.encoding(a)).unwrap();
        let y = Matrix2::decode(ring, g.encoding(b)).unwrap();
        let xy = Matrix2::decode(ring, g.encoding(g.mul(a, b))).unwrap();
        prop_assert_eq!(xy.entries(), matmul(kind, p as u64, k, x.entries(), y.entries()));
        prop_assert_eq!(x.mul(&x.inverse()), Matrix2::identity(ring));
        prop_assert!(x.is_unimodular());
    }

    #[test]
    fn text_round_trip(kind in kinds(), a in 0usize..729) {
        let ring = Ring::new(kind, 3, 3).unwrap();
        let g = kernel_group(kind, 3, 3, &GroupConfig::default()).unwrap();
        let x = Matrix2::decode(ring, g.encoding(a)).unwrap();
        let back = Matrix2::parse(ring, &x.to_string()).unwrap();
        prop_assert_eq!(back, x);
    }
}
