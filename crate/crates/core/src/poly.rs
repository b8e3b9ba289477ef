//! Symmetric polynomials in two blocks of `b` variables over a prime field,
//! with degree at most `d` in each block.
//!
//! A polynomial is stored by its coefficients on the symmetrised basis
//! `m_i(X¹) m_j(X²) + m_j(X¹) m_i(X²)` (`i < j`) and `m_i(X¹) m_i(X²)`,
//! where `m_0, m_1, ...` are the monomials of total degree at most `d` in `b`
//! variables. Equivalently `f(x, y) = m(x)ᵀ C m(y)` for a symmetric matrix `C`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Exponent vectors of total degree at most `d` in `b` variables, ordered by
/// degree and then lexicographically.
pub fn monomials(b: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(b: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == b {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(b, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(b, d, &mut Vec::with_capacity(b), &mut out);
    out.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
    out
}

/// Values of every monomial at `x`.
pub fn monomial_values(field: &PrimeField, monos: &[Vec<u32>], x: &[u64]) -> Vec<u64> {
    monos
        .iter()
        .map(|m| {
            m.iter()
                .zip(x)
                .fold(1 % field.q(), |acc, (&e, &xi)| field.mul(acc, field.pow(xi, e as u64)))
        })
        .collect()
}

/// Index of the pair `(i, j)`, `i <= j`, in row-major upper-triangular order.
fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < k);
    i * k - i * (i + 1) / 2 + j
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPolynomial {
    field: PrimeField,
    b: usize,
    d: u32,
    monomials: Vec<Vec<u32>>,
    /// One coefficient per basis pair `(i, j)`, `i <= j`.
    coeffs: Vec<u64>,
}

impl SymmetricPolynomial {
    pub fn zero(field: PrimeField, b: usize, d: u32) -> Self {
        let monomials = monomials(b, d);
        let k = monomials.len();
        SymmetricPolynomial {
            field,
            b,
            d,
            monomials,
            coeffs: vec![0; k * (k + 1) / 2],
        }
    }

    /// Independent uniform coefficients on every basis element.
    pub fn sample<R: Rng + ?Sized>(field: PrimeField, b: usize, d: u32, rng: &mut R) -> Self {
        let mut p = Self::zero(field, b, d);
        for c in &mut p.coeffs {
            *c = rng.gen_range(0..field.q());
        }
        p
    }

    pub fn from_seed(field: PrimeField, b: usize, d: u32, seed: u64) -> Self {
        Self::sample(field, b, d, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    /// Number of basis elements.
    pub fn basis_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize, j: usize) -> u64 {
        self.coeffs[pair_index(self.monomials.len(), i.min(j), i.max(j))]
    }

    pub fn set_coefficient(&mut self, i: usize, j: usize, c: u64) {
        let k = self.monomials.len();
        self.coeffs[pair_index(k, i.min(j), i.max(j))] = self.field.reduce(c);
    }

    /// `C · m(y)`, the vector that turns evaluation at `(x, y)` into a dot
    /// product with `m(x)`.
    pub fn half_evaluate(&self, my: &[u64]) -> Vec<u64> {
        let k = self.monomials.len();
        (0..k)
            .map(|i| {
                (0..k).fold(0, |acc, j| {
                    self.field.add(acc, self.field.mul(self.coefficient(i, j), my[j]))
                })
            })
            .collect()
    }

    pub fn evaluate(&self, x: &[u64], y: &[u64]) -> u64 {
        let mx = monomial_values(&self.field, &self.monomials, x);
        let my = monomial_values(&self.field, &self.monomials, y);
        let w = self.half_evaluate(&my);
        mx.iter()
            .zip(&w)
            .fold(0, |acc, (&a, &b)| self.field.add(acc, self.field.mul(a, b)))
    }

    /// `q b d` on the first line, then `coeff : e.. | e..` per nonzero term.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.field.q(), self.b, self.d);
        let k = self.monomials.len();
        let join = |m: &[u32]| m.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        for i in 0..k {
            for j in i..k {
                let c = self.coefficient(i, j);
                if c != 0 {
                    writeln!(out, "{c} : {} | {}", join(&self.monomials[i]), join(&self.monomials[j])).unwrap();
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.into() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty polynomial file"))?;
        let nums: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| perr(ln, "bad header")))
            .collect::<Result<_>>()?;
        let [q, b, d] = nums[..] else {
            return Err(perr(ln, "header must be `q b d`"));
        };
        let mut p = Self::zero(PrimeField::new(q)?, b as usize, d as u32);
        for (ln, line) in lines {
            let (c, rest) = line.split_once(':').ok_or_else(|| perr(ln, "missing `:`"))?;
            let (l, r) = rest.split_once('|').ok_or_else(|| perr(ln, "missing `|`"))?;
            let c: u64 = c.trim().parse().map_err(|_| perr(ln, "bad coefficient"))?;
            let block = |s: &str| -> Result<usize> {
                let e: Vec<u32> = s
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| perr(ln, "bad exponent")))
                    .collect::<Result<_>>()?;
                p.monomials
                    .iter()
                    .position(|m| *m == e)
                    .ok_or_else(|| perr(ln, "monomial outside the basis"))
            };
            let (i, j) = (block(l)?, block(r)?);
            p.set_coefficient(i, j, c);
        }
        Ok(p)
    }
}

/// Empirical frequency with its standard error next to the exact value it
/// is meant to reproduce.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishEstimate {
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub std_error: f64,
    pub exact: f64,
}

impl VanishEstimate {
    /// `|frequency - exact|` in units of the binomial standard deviation at
    /// the exact value.
    pub fn z_score(&self) -> f64 {
        let sd = (self.exact * (1.0 - self.exact) / self.trials as f64).sqrt();
        if sd == 0.0 {
            return if self.frequency == self.exact {
                0.0
            } else {
                f64::INFINITY
            };
        }
        (self.frequency - self.exact).abs() / sd
    }
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn check_points(field: &PrimeField, b: usize, points: &[Vec<u64>], edges: &[(usize, usize)]) -> Result<()> {
    for p in points {
        if p.len() != b || p.iter().any(|&c| c >= field.q()) {
            return Err(Error::Precondition(format!(
                "point {p:?} is not in F_{}^{b}",
                field.q()
            )));
        }
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::Precondition(format!("point {p:?} repeated")));
        }
    }
    for &(u, v) in edges {
        if u == v || u >= points.len() || v >= points.len() {
            return Err(Error::Precondition(format!("bad pair ({u}, {v})")));
        }
    }
    Ok(())
}

/// Frequency with which a uniform polynomial vanishes on every pair in
/// `edges` (indices into `points`).
///
/// Requires `|E| <= d` together with `C(|V|, 2) < q` and `C(|E|, 2) < q`,
/// where `V` is the set of points used by the pairs.
pub fn vanish_probability_test(
    field: PrimeField,
    b: usize,
    d: u32,
    points: &[Vec<u64>],
    edges: &[(usize, usize)],
    trials: u64,
    seed: u64,
) -> Result<VanishEstimate> {
    let mut used: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    used.sort_unstable();
    used.dedup();
    let q = field.q() as usize;
    if edges.len() > d as usize {
        return Err(Error::Precondition(format!("|E| = {} exceeds d = {d}", edges.len())));
    }
    if binom2(used.len()) >= q || binom2(edges.len()) >= q {
        return Err(Error::Precondition(format!(
            "need C(|V|,2) < q and C(|E|,2) < q (|V| = {}, |E| = {}, q = {q})",
            used.len(),
            edges.len()
        )));
    }
    vanish_probability_unchecked(field, b, d, points, edges, trials, seed)
}

/// As [`vanish_probability_test`] without the size conditions; points must
/// still be distinct elements of `F_q^b`.
pub fn vanish_probability_unchecked(
    field: PrimeField,
    b: usize,
    d: u32,
    points: &[Vec<u64>],
    edges: &[(usize, usize)],
    trials: u64,
    seed: u64,
) -> Result<VanishEstimate> {
    check_points(&field, b, points, edges)?;
    let exact = (field.q() as f64).powi(-(edges.len() as i32));
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    // Each pair is a linear functional on the coefficient vector.
    let zero = SymmetricPolynomial::zero(field, b, d);
    let monos = zero.monomials();
    let k = monos.len();
    let values: Vec<Vec<u64>> = points.iter().map(|p| monomial_values(&field, monos, p)).collect();
    let functionals: Vec<Vec<u64>> = edges
        .iter()
        .map(|&(u, v)| {
            let (x, y) = (&values[u], &values[v]);
            let mut f = Vec::with_capacity(zero.basis_len());
            for i in 0..k {
                for j in i..k {
                    let t = field.mul(x[i], y[j]);
                    f.push(if i == j { t } else { field.add(t, field.mul(x[j], y[i])) });
                }
            }
            f
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![0u64; zero.basis_len()];
    let mut hits = 0u64;
    for _ in 0..trials {
        for c in &mut coeffs {
            *c = rng.gen_range(0..field.q());
        }
        let vanishes = functionals.iter().all(|f| {
            f.iter()
                .zip(&coeffs)
                .fold(0, |acc, (&a, &c)| field.add(acc, field.mul(a, c)))
                == 0
        });
        hits += vanishes as u64;
    }
    let frequency = hits as f64 / trials as f64;
    Ok(VanishEstimate {
        trials,
        hits,
        frequency,
        std_error: (frequency * (1.0 - frequency) / trials as f64).sqrt(),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn monomial_counts() {
        // C(b + d, d)
        assert_eq!(monomials(1, 1).len(), 2);
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(2, 8).len(), 45);
        assert_eq!(monomials(3, 3).len(), 20);
        assert_eq!(monomials(2, 2)[0], vec![0, 0]);
    }

    #[test]
    fn evaluation_is_symmetric() {
        let field = f(5);
        let p = SymmetricPolynomial::from_seed(field, 2, 3, 7);
        for x0 in 0..5 {
            for x1 in 0..5 {
                for y0 in 0..5 {
                    for y1 in 0..5 {
                        assert_eq!(p.evaluate(&[x0, x1], &[y0, y1]), p.evaluate(&[y0, y1], &[x0, x1]));
                    }
                }
            }
        }
    }

    #[test]
    fn hand_polynomial() {
        // f = X¹ + X² + 2 X¹X² over F_7
        let mut p = SymmetricPolynomial::zero(f(7), 1, 1);
        p.set_coefficient(0, 1, 1);
        p.set_coefficient(1, 1, 2);
        assert_eq!(p.evaluate(&[3], &[4]), (3 + 4 + 2 * 12) % 7);
    }

    #[test]
    fn text_round_trip() {
        let p = SymmetricPolynomial::from_seed(f(11), 2, 2, 3);
        let back = SymmetricPolynomial::from_text(&p.to_text()).unwrap();
        assert_eq!(back, p);
        assert!(SymmetricPolynomial::from_text("4 1 1\n").is_err());
        assert!(SymmetricPolynomial::from_text("5 1 1\n1 : 3 | 0\n").is_err());
    }

    #[test]
    fn deterministic_seed() {
        let a = SymmetricPolynomial::from_seed(f(13), 2, 3, 99);
        let b = SymmetricPolynomial::from_seed(f(13), 2, 3, 99);
        assert_eq!(a, b);
    }

    #[test]
    fn vanish_preconditions() {
        let pts = vec![vec![0], vec![1], vec![2]];
        let e = vanish_probability_test(f(5), 1, 3, &pts, &[], 10, 1).unwrap();
        assert_eq!(e.frequency, 1.0);
        assert!(vanish_probability_test(f(5), 1, 1, &pts, &[(0, 1), (1, 2)], 10, 1).is_err());
        assert!(vanish_probability_test(f(3), 1, 2, &pts, &[(0, 1), (1, 2)], 10, 1).is_err());
        assert!(vanish_probability_unchecked(f(3), 1, 2, &pts, &[(0, 1), (1, 2)], 10, 1).is_ok());
        assert!(vanish_probability_unchecked(f(3), 1, 2, &[vec![0], vec![0]], &[(0, 1)], 10, 1).is_err());
    }
}
