//! Resultants by the Sylvester matrix and Berkowitz's division-free
//! determinant, generic over any commutative [`Ring`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::RationalPoly;
use super::ring::Ring;
use crate::error::{Error, Result};

/// Determinant of a square matrix using only ring operations.
pub fn berkowitz_det<R: Ring>(a: &[Vec<R>]) -> R {
    let n = a.len();
    assert!(
        n > 0 && a.iter().all(|row| row.len() == n),
        "square matrix expected"
    );
    let one = a[0][0].one_like();
    let zero = a[0][0].zero_like();
    // coefficients of det(λI − A_r), highest first
    let mut v = vec![one.clone(), a[0][0].neg()];
    for r in 1..n {
        let row: Vec<R> = a[r][..r].to_vec();
        let mut c: Vec<R> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut col = vec![one.clone(), a[r][r].neg()];
        for _ in 0..r {
            let dot = row
                .iter()
                .zip(&c)
                .fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y)));
            col.push(dot.neg());
            c = (0..r)
                .map(|i| (0..r).fold(zero.clone(), |acc, j| acc.add(&a[i][j].mul(&c[j]))))
                .collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut s = zero.clone();
            for j in 0..=i.min(r) {
                if !col[i - j].is_zero() && !v[j].is_zero() {
                    s = s.add(&col[i - j].mul(&v[j]));
                }
            }
            next.push(s);
        }
        v = next;
    }
    if n.is_multiple_of(2) {
        v[n].clone()
    } else {
        v[n].neg()
    }
}

/// Resultant of `f = Σ f[i] xⁱ` and `g = Σ g[i] xⁱ` (low degree first,
/// leading coefficients nonzero) over a ring.
pub fn resultant_generic<R: Ring>(f: &[R], g: &[R]) -> R {
    assert!(!f.is_empty() && !g.is_empty(), "zero polynomial");
    let m = f.len() - 1;
    let n = g.len() - 1;
    if m == 0 {
        return f[0].pow(n as u32);
    }
    if n == 0 {
        return g[0].pow(m as u32);
    }
    let zero = f[0].zero_like();
    let size = m + n;
    let mut s = vec![vec![zero; size]; size];
    for i in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[n + i][i + k] = c.clone();
        }
    }
    berkowitz_det(&s)
}

/// Variable selector for [`BiPoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    R,
    X,
}

/// Sparse bivariate polynomial with rational coefficients in `(r, X)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    /// `(deg_r, deg_x) → coefficient`, zero coefficients never stored.
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), BigRational)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Polynomial in one variable embedded in the bivariate ring.
    pub fn from_univariate(p: &RationalPoly, var: Var) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| {
            let k = match var {
                Var::R => (i as u32, 0),
                Var::X => (0, i as u32),
            };
            (k, c.clone())
        }))
    }

    /// `Σ coeffs[j](r) · X^j`.
    pub fn from_x_coeffs(coeffs: &[RationalPoly]) -> Self {
        let mut p = Self::zero();
        for (j, c) in coeffs.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                p.add_term((i as u32, j as u32), a.clone());
            }
        }
        p
    }

    fn add_term(&mut self, k: (u32, u32), c: BigRational) {
        if Zero::is_zero(&c) {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if Zero::is_zero(e) {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(a, b)| if var == Var::R { a } else { b })
            .max()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut p = self.clone();
        for (k, c) in &rhs.terms {
            p.add_term(*k, c.clone());
        }
        p
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut p = self.clone();
        for (k, c) in &rhs.terms {
            p.add_term(*k, -c.clone());
        }
        p
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in &self.terms {
            for ((d, e), f) in &rhs.terms {
                p.add_term((a + d, b + e), c * f);
            }
        }
        p
    }

    pub fn eval(&self, r: &BigRational, x: &BigRational) -> BigRational {
        self.terms
            .iter()
            .fold(BigRational::zero(), |acc, ((a, b), c)| {
                acc + c
                    * num_traits::pow(r.clone(), *a as usize)
                    * num_traits::pow(x.clone(), *b as usize)
            })
    }

    /// Coefficients with respect to `var`, each a polynomial in the other
    /// variable, low degree first.
    pub fn coeffs_in(&self, var: Var) -> Vec<RationalPoly> {
        let deg = self.degree_in(var).map_or(0, |d| d as usize + 1);
        let mut raw: Vec<Vec<BigRational>> = vec![Vec::new(); deg];
        for (&(a, b), c) in &self.terms {
            let (outer, inner) = if var == Var::R { (a, b) } else { (b, a) };
            let slot = &mut raw[outer as usize];
            if slot.len() <= inner as usize {
                slot.resize(inner as usize + 1, BigRational::zero());
            }
            slot[inner as usize] = c.clone();
        }
        raw.into_iter().map(RationalPoly::new).collect()
    }
}

/// Resultant of two bivariate polynomials with respect to `eliminate`,
/// returned as a univariate polynomial in the remaining variable.
pub fn resultant(p: &BiPoly, q: &BiPoly, eliminate: Var) -> Result<RationalPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::DegenerateInput(
            "resultant of a zero polynomial".into(),
        ));
    }
    Ok(resultant_generic(
        &p.coeffs_in(eliminate),
        &q.coeffs_in(eliminate),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::rat;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m: Vec<Vec<BigRational>> = [[2, -1, 3, 0], [1, 4, -2, 5], [0, 3, 1, -1], [7, 2, 0, 1]]
            .iter()
            .map(|row| row.iter().map(|&v| rat(v)).collect())
            .collect();
        // independent cofactor expansion gives -396
        assert_eq!(berkowitz_det(&m), rat(-396));
    }

    #[test]
    fn substitution_case() {
        // X² − r and X − 1, eliminating X → 1 − r up to sign
        let a = BiPoly::from_x_coeffs(&[p(&[0, -1]), p(&[]), p(&[1])]);
        let b = BiPoly::from_x_coeffs(&[p(&[-1]), p(&[1])]);
        let res = resultant(&a, &b, Var::X).unwrap();
        assert_eq!(res.primitive(), p(&[-1, 1]));
    }

    #[test]
    fn shared_factor_gives_zero() {
        let a = BiPoly::from_univariate(&p(&[-2, 0, 1]), Var::X);
        assert!(resultant(&a, &a, Var::X).unwrap().is_zero());
    }

    #[test]
    fn zero_input_is_an_error() {
        let a = BiPoly::from_univariate(&p(&[-2, 0, 1]), Var::X);
        assert!(resultant(&a, &BiPoly::zero(), Var::X).is_err());
    }

    #[test]
    fn eliminate_r_direction() {
        // r − X² and r − 2: eliminating r gives 2 − X² up to sign
        let a = BiPoly::from_terms([((1, 0), rat(1)), ((0, 2), rat(-1))]);
        let b = BiPoly::from_terms([((1, 0), rat(1)), ((0, 0), rat(-2))]);
        let res = resultant(&a, &b, Var::R).unwrap();
        assert_eq!(res.primitive(), p(&[-2, 0, 1]));
    }

    #[test]
    fn norm_of_linear_radical_expression() {
        // Res_X(a + bX, X² − s) = a² − s·b² for polynomial coefficients
        let (a, b, s) = (p(&[1, 2]), p(&[0, 3, 1]), p(&[5, 0, 1]));
        let res = resultant_generic(&[a.clone(), b.clone()], &[s.neg(), p(&[]), p(&[1])]);
        assert_eq!(res, a.mul(&a).sub(&s.mul(&b).mul(&b)));
    }
}
