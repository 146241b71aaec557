//! Small finite fields `F_q`, table driven.
//!
//! An element of `F_{p^f}` is the integer `c₀ + c₁p + … + c_{f-1}p^{f-1}`
//! standing for `c₀ + c₁α + …`, where `α` is a root of the fixed modulus
//! listed in [`modulus_for`].

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field size; keeps operation tables small.
pub const MAX_FIELD_SIZE: u32 = 64;

/// Irreducible (Conway) moduli for the prime-power fields we support,
/// coefficients from the constant term up, monic.
const MODULI: &[(u32, u32, &[u32])] = &[
    (4, 2, &[1, 1, 1]),
    (8, 2, &[1, 1, 0, 1]),
    (16, 2, &[1, 1, 0, 0, 1]),
    (32, 2, &[1, 0, 1, 0, 0, 1]),
    (64, 2, &[1, 1, 0, 1, 1, 0, 1]),
    (9, 3, &[2, 2, 1]),
    (27, 3, &[1, 2, 0, 1]),
    (25, 5, &[2, 4, 1]),
    (49, 7, &[3, 6, 1]),
];

/// The modulus used for `F_q`; `[0, 1]` (the polynomial `x`) for prime `q`.
pub fn modulus_for(q: u32) -> Result<(u32, Vec<u32>)> {
    if q <= MAX_FIELD_SIZE && is_prime(q) {
        return Ok((q, vec![0, 1]));
    }
    MODULI
        .iter()
        .find(|(size, _, _)| *size == q)
        .map(|(_, p, m)| (*p, m.to_vec()))
        .ok_or(Error::UnsupportedField(q))
}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

#[derive(Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, modulus) = modulus_for(q)?;
        let degree = modulus.len() - 1;
        let digits = |x: u32| -> Vec<u32> {
            let mut d = Vec::with_capacity(degree);
            let mut x = x;
            for _ in 0..degree {
                d.push(x % p);
                x /= p;
            }
            d
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum) as u8;

                let mut prod = vec![0u32; 2 * degree];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // Reduce from the top: α^degree = -(m₀ + m₁α + …).
                for k in (degree..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, m) in modulus[..degree].iter().enumerate() {
                        let idx = k - degree + i;
                        prod[idx] = (prod[idx] + (p - c) * m) % p;
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..degree]) as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Ok(GaloisField {
            p,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree() == 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Coordinates of `a` over the prime field, constant term first.
    pub fn digits(&self, a: u8) -> Vec<u32> {
        let mut a = a as u32;
        (0..self.degree())
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<u8> {
        if digits.len() != self.degree() || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::Parse(format!(
                "expected {} coordinates below {}",
                self.degree(),
                self.p
            )));
        }
        Ok(digits.iter().rev().fold(0, |acc, &c| acc * self.p + c) as u8)
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: u8) -> bool {
        (a as u32) < self.p
    }

    /// Additive basis `1, α, α², …` as field elements.
    pub fn basis(&self) -> Vec<u8> {
        (0..self.degree())
            .map(|i| self.p.pow(i as u32) as u8)
            .collect()
    }

    /// Human-readable modulus, e.g. `x^2+x+1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join("+")
    }
}
