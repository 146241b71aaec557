use std::fmt;

use super::{log_p, FiniteGroup};
use crate::error::{Error, Result};

/// Orders of the cyclic factors of an abelian p-group, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianInvariants(pub Vec<u64>);

impl AbelianInvariants {
    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_elementary(&self, p: u32) -> bool {
        self.0.iter().all(|&e| e == p as u64)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Invariants by counting solutions of `x^{p^k} = 1`.
///
/// With `n_k` that count, `log_p(n_k / n_{k-1})` is the number of cyclic
/// factors of order at least `p^k`.
pub fn abelian_invariants(g: &FiniteGroup) -> Result<AbelianInvariants> {
    if let Some((a, b)) = g.first_noncommuting_generators() {
        return Err(Error::NotAbelian(a, b));
    }
    let p = g.prime() as usize;
    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let exp = orders.iter().copied().max().unwrap_or(1);
    let top = log_p(exp, g.prime());
    // at_least[k] = number of factors of order >= p^k
    let mut at_least = vec![0u32; top as usize + 2];
    let mut prev = 1usize;
    let mut pk = 1usize;
    for slot in at_least.iter_mut().take(top as usize + 1).skip(1) {
        pk *= p;
        let n_k = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count();
        *slot = log_p(n_k / prev, g.prime());
        prev = n_k;
    }
    let mut inv = Vec::new();
    for k in (1..=top as usize).rev() {
        let exactly = at_least[k] - at_least[k + 1];
        for _ in 0..exactly {
            inv.push((p as u64).pow(k as u32));
        }
    }
    Ok(AbelianInvariants(inv))
}

/// Largest element order; for p-groups this is the exponent.
pub fn exponent(g: &FiniteGroup) -> usize {
    g.elements().map(|x| g.element_order(x)).max().unwrap_or(1)
}
