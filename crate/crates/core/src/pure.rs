//! Pure-state concurrences.
//!
//! Every projector mix `A = Σ_s p_s ⊗_j P_{s_j}` is expanded with
//! `P_± = (1 ± S)/2` into subset swaps, `A = 2^{-N} Σ_X c_X S_X` with
//! `c_X = Σ_s p_s Π_{i∈X} s_i`, and `⟨Ψ⊗Ψ|S_X|Ψ⊗Ψ⟩ = Tr ρ_X²`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{CVector, ZERO};
use crate::state::{FactorStructure, PureState, Split};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// One `+`/`-` per factor, selecting `P_+` or `P_-` on that factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    signs: Vec<Sign>,
}

impl SignPattern {
    /// Rejects the all-`+` pattern. Patterns with an odd number of `-` are
    /// accepted; their expectation on `|Ψ⟩⊗|Ψ⟩` vanishes identically.
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::BadMix("empty pattern".into()));
        }
        if signs.iter().all(|&s| s == Sign::Plus) {
            return Err(Error::AllSymmetricPattern);
        }
        Ok(SignPattern { signs })
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == Sign::Minus).count()
    }

    pub fn is_odd(&self) -> bool {
        self.minus_count() % 2 == 1
    }

    /// `Π_{i∈X} s_i` for the subset encoded by the bit mask `x`.
    fn parity(&self, x: usize) -> f64 {
        let minus = self.signs.iter().enumerate().filter(|&(i, &s)| s == Sign::Minus && x >> i & 1 == 1).count();
        if minus % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|ch| match ch {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::BadMix(format!("unexpected character {other:?} in sign pattern"))),
            })
            .collect::<Result<Vec<_>>>()?;
        SignPattern::new(signs)
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Nonnegative weights on sign patterns over `n` factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorMix {
    n: usize,
    weights: Vec<(SignPattern, f64)>,
}

/// Prefactor of every pattern in the standard mixes.
pub const DEFAULT_WEIGHT: f64 = 4.0;

impl ProjectorMix {
    pub fn new(n: usize, weights: Vec<(SignPattern, f64)>) -> Result<Self> {
        if let Some((p, _)) = weights.iter().find(|(p, _)| p.len() != n) {
            return Err(Error::BadMix(format!("pattern {p} has length {} but there are {n} factors", p.len())));
        }
        if let Some((p, w)) = weights.iter().find(|(_, w)| !(*w >= 0.0)) {
            return Err(Error::BadMix(format!("weight {w} of pattern {p} is negative")));
        }
        if !weights.iter().any(|(_, w)| *w > 0.0) {
            return Err(Error::BadMix("no positive weight".into()));
        }
        Ok(ProjectorMix { n, weights })
    }

    /// `4 P_- ⊗ P_-`.
    pub fn bipartite() -> Self {
        Self::bipartite_weighted(DEFAULT_WEIGHT)
    }

    pub fn bipartite_weighted(weight: f64) -> Self {
        let p = SignPattern { signs: vec![Sign::Minus, Sign::Minus] };
        ProjectorMix { n: 2, weights: vec![(p, weight)] }
    }

    /// Equal weights on every even pattern except `+…+`; reproduces `c_N`.
    pub fn c_n(n: usize) -> Result<Self> {
        Self::c_n_weighted(n, DEFAULT_WEIGHT)
    }

    pub fn c_n_weighted(n: usize, weight: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDimension(format!("N = {n} < 2")));
        }
        let weights = (1..1usize << n)
            .filter(|m| m.count_ones() % 2 == 0)
            .map(|m| {
                let signs = (0..n).map(|i| if m >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect();
                (SignPattern { signs }, weight)
            })
            .collect();
        ProjectorMix::new(n, weights)
    }

    /// A single pattern with the default weight.
    pub fn single(pattern: SignPattern) -> Self {
        ProjectorMix { n: pattern.len(), weights: vec![(pattern, DEFAULT_WEIGHT)] }
    }

    /// Default mix for `n` factors: `4 P_- ⊗ P_-` when bipartite, `c_N` otherwise.
    pub fn default_for(n: usize) -> Result<Self> {
        if n == 2 {
            Ok(Self::bipartite())
        } else {
            Self::c_n(n)
        }
    }

    pub fn factor_count(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[(SignPattern, f64)] {
        &self.weights
    }

    pub(crate) fn check_factors(&self, factors: &FactorStructure) -> Result<()> {
        if factors.len() != self.n {
            return Err(Error::BadMix(format!("mix is for {} factors, state has {}", self.n, factors.len())));
        }
        Ok(())
    }

    /// Swap-expansion coefficients `c_X / 2^N` indexed by subset bit mask (bit
    /// `i` set when factor `i` belongs to `X`). Odd patterns are skipped with a
    /// warning: they vanish on symmetric two-copy states.
    pub fn swap_coefficients(&self) -> Vec<f64> {
        let n = self.n;
        let norm = 0.5f64.powi(n as i32);
        let mut coeffs = vec![0.0; 1 << n];
        for (p, w) in &self.weights {
            if p.is_odd() {
                log::warn!("sign pattern {p} has an odd number of antisymmetric projectors and contributes zero");
                continue;
            }
            for (x, cx) in coeffs.iter_mut().enumerate() {
                *cx += w * p.parity(x) * norm;
            }
        }
        coeffs
    }
}

fn subset_purity(psi: &PureState, mask: usize) -> f64 {
    let n = psi.factors().len();
    let norm2 = psi.amplitudes().norm_squared();
    if mask == 0 || mask == (1 << n) - 1 {
        return norm2 * norm2;
    }
    let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    let r = Split::new(psi.factors(), &keep).reduce_outer(psi.amplitudes(), psi.amplitudes());
    r.iter().map(|z| z.norm_sqr()).sum()
}

/// `|⟨Ψ*|σ_y⊗σ_y|Ψ⟩| = 2|Ψ₀₀Ψ₁₁ − Ψ₀₁Ψ₁₀|`.
pub fn concurrence_2x2_pure(psi: &PureState) -> Result<f64> {
    if psi.factors().dims() != [2, 2] {
        return Err(Error::WrongDims { expected: vec![2, 2], found: psi.factors().dims().to_vec() });
    }
    let a = psi.amplitudes();
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

/// `√(2(1 − Tr ρ_r²))` for the split `left | complement`.
pub fn i_concurrence(psi: &PureState, left: &[usize]) -> Result<f64> {
    let n = psi.factors().len();
    if left.is_empty() || left.len() >= n || left.iter().any(|&i| i >= n) {
        return Err(Error::BadBipartition(format!("{left:?} is not a proper nonempty subset of {n} factors")));
    }
    let mask = left.iter().fold(0usize, |m, &i| m | 1 << i);
    let p = subset_purity(psi, mask);
    Ok((2.0 * (1.0 - p)).max(0.0).sqrt())
}

/// `c_N(Ψ) = 2^{1−N/2} √((2^N−2)⟨Ψ|Ψ⟩² − Σ_X Tr ρ_X²)`.
pub fn multipartite_concurrence(psi: &PureState) -> Result<f64> {
    let n = psi.factors().len();
    if n < 2 {
        return Err(Error::BadDimension(format!("N = {n} < 2")));
    }
    let norm2 = psi.amplitudes().norm_squared();
    let full = (1usize << n) - 1;
    let sum: f64 = (1..full).map(|m| subset_purity(psi, m)).sum();
    let inner = (full - 1) as f64 * norm2 * norm2 - sum;
    Ok(2f64.powf(1.0 - n as f64 / 2.0) * inner.max(0.0).sqrt())
}

/// `√⟨Ψ⊗Ψ|A|Ψ⊗Ψ⟩` for the operator defined by `mix`.
pub fn selective_concurrence(psi: &PureState, mix: &ProjectorMix) -> Result<f64> {
    mix.check_factors(psi.factors())?;
    let coeffs = mix.swap_coefficients();
    let value: f64 =
        coeffs.iter().enumerate().filter(|(_, &cx)| cx != 0.0).map(|(x, &cx)| cx * subset_purity(psi, x)).sum();
    Ok(value.max(0.0).sqrt())
}

/// Entanglement of formation in ebits of a two-qubit concurrence.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::OutOfRange { value: c, min: 0.0, max: 1.0 });
    }
    let x = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
    let h = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    Ok(h(x) + h(1.0 - x))
}

/// Product state from per-factor vectors (normalized on output).
pub fn product_state(parts: &[CVector]) -> PureState {
    let dims = parts.iter().map(|p| p.len()).collect();
    let v = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.kronecker(p));
    PureState::normalized(v, FactorStructure::new(dims).expect("factor dims ≥ 2")).expect("nonzero product")
}

#[cfg(test)]
pub(crate) fn qubit(a: f64, b: f64) -> CVector {
    CVector::from_vec(vec![crate::linalg::c(a, 0.0), crate::linalg::c(b, 0.0)])
}

#[allow(dead_code)]
pub(crate) fn zero_vector(n: usize) -> CVector {
    CVector::from_element(n, ZERO)
}
