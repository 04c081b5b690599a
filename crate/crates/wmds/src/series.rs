//! Truncated power-series expansion and coefficient tables.
//!
//! Truncation is by total degree in the `x` variables only; every retained
//! coefficient is a finite polynomial in `t`. Intermediate arithmetic is
//! allowed to carry negative `t`-exponents (they occur in individual Weyl
//! summands); results handed out are checked to be honest polynomials in
//! `q = t^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{cmp_grlex, Exp, SparsePoly};
use crate::ratfunc::{RatFunc, ReduceBasis};

/// A power series truncated to total `x`-degree `max_deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTruncation {
    nvars: usize,
    max_deg: u32,
    poly: SparsePoly,
}

impl SeriesTruncation {
    pub fn zero(nvars: usize, max_deg: u32) -> Self {
        SeriesTruncation { nvars, max_deg, poly: SparsePoly::zero(nvars) }
    }

    pub fn one(nvars: usize, max_deg: u32) -> Self {
        SeriesTruncation { nvars, max_deg, poly: SparsePoly::one(nvars) }
    }

    pub fn from_poly(p: SparsePoly, max_deg: u32) -> Self {
        SeriesTruncation { nvars: p.nvars(), max_deg, poly: truncate(&p, max_deg) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn add(&self, other: &SeriesTruncation) -> SeriesTruncation {
        assert_eq!(self.max_deg, other.max_deg);
        SeriesTruncation {
            nvars: self.nvars,
            max_deg: self.max_deg,
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn mul(&self, other: &SeriesTruncation) -> SeriesTruncation {
        assert_eq!(self.max_deg, other.max_deg);
        SeriesTruncation {
            nvars: self.nvars,
            max_deg: self.max_deg,
            poly: truncate(&self.poly.mul(&other.poly), self.max_deg),
        }
    }

    pub fn restrict(&self, max_deg: u32) -> SeriesTruncation {
        assert!(max_deg <= self.max_deg);
        SeriesTruncation {
            nvars: self.nvars,
            max_deg,
            poly: truncate(&self.poly, max_deg),
        }
    }

    /// Coefficient of `x^k` as a polynomial in `t` (may include negative
    /// exponents in intermediate objects; see `CoeffTable::from_series`).
    pub fn coeff(&self, k: &[u32]) -> Vec<(Exp, BigInt)> {
        let mut out: Vec<(Exp, BigInt)> = self
            .poly
            .terms()
            .filter(|(e, _)| e[1..].iter().zip(k).all(|(&a, &b)| a == b as Exp))
            .map(|(e, c)| (e[0], c.clone()))
            .collect();
        out.sort_by_key(|(te, _)| *te);
        out
    }
}

fn truncate(p: &SparsePoly, max_deg: u32) -> SparsePoly {
    let mut out = SparsePoly::zero(p.nvars());
    for (e, c) in p.terms() {
        let d: i64 = e[1..].iter().map(|&v| v as i64).sum();
        if d <= max_deg as i64 {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

/// Expand a rational function at the origin to total `x`-degree `max_deg`.
///
/// The denominator must have `x`-constant part `±t^k`; the sign is folded
/// into the numerator and the `t`-shift is carried through exactly, so the
/// computation works in `Z[t, 1/t]` internally.
pub fn series_expand(f: &RatFunc, max_deg: u32) -> Result<SeriesTruncation> {
    let nvars = f.nvars();
    let den0 = f.den().x_constant_part();
    if den0.num_terms() != 1 {
        return Err(Error::NotSeriesExpandable);
    }
    let (shift_t, unit) = {
        let (e, c) = den0.leading().unwrap();
        if !c.abs().is_one() {
            return Err(Error::NotSeriesExpandable);
        }
        (e[0], c.clone())
    };
    // normalize: den = unit * t^shift * (1 - E) with E of positive x-degree
    let mut tshift = vec![0 as Exp; nvars];
    tshift[0] = -shift_t;
    let inv_unit = unit; // unit is ±1, its own inverse
    let den_norm = f.den().mul_monomial(&tshift, &inv_unit);
    let eps = SparsePoly::one(nvars).sub(&den_norm);
    debug_assert!(eps.terms().all(|(e, _)| e[1..].iter().any(|&v| v > 0)));
    let eps = SeriesTruncation::from_poly(eps, max_deg);
    // geometric inversion by Horner: 1 + E(1 + E(...))
    let mut inv = SeriesTruncation::one(nvars, max_deg);
    for _ in 0..max_deg {
        inv = eps.mul(&inv);
        inv.poly.add_term(vec![0; nvars], BigInt::one());
    }
    let num_norm = f.num().mul_monomial(&tshift, &inv_unit);
    let num = SeriesTruncation::from_poly(num_norm, max_deg);
    Ok(num.mul(&inv))
}

/// Univariate polynomial in `q` with integer coefficients (ascending).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    pub coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            QPoly { coeffs: vec![c] }
        }
    }

    pub fn q_power(k: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); k as usize + 1];
        coeffs[k as usize] = BigInt::one();
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    /// From `t`-exponent/coefficient pairs; errors unless every exponent is
    /// even and nonnegative.
    pub fn from_t_pairs(pairs: &[(Exp, BigInt)]) -> Result<QPoly> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (te, c) in pairs {
            if *te < 0 || *te % 2 != 0 {
                return Err(Error::NotPolynomialInQ);
            }
            let k = (*te / 2) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            coeffs[k] += c;
        }
        Ok(QPoly { coeffs }.normalize())
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    pub fn mul_q_power(&self, k: u32) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        QPoly { coeffs }.normalize()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{mag}*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The table `(k_1, ..., k_r) -> a(k_1, ..., k_r; q)` for all tuples of total
/// degree at most `max_deg`. Zero entries inside the range are not stored.
#[derive(Clone)]
pub struct CoeffTable {
    pub rank: usize,
    pub max_deg: u32,
    pub entries: BTreeMap<Vec<u32>, QPoly>,
}

impl CoeffTable {
    pub fn from_series(rank: usize, series: &SeriesTruncation) -> Result<CoeffTable> {
        let mut entries = BTreeMap::new();
        for (xexps, tpairs) in series.poly().by_x_monomial() {
            let k: Vec<u32> = xexps.iter().map(|&e| e as u32).collect();
            let qp = QPoly::from_t_pairs(&tpairs)?;
            if !qp.is_zero() {
                entries.insert(k, qp);
            }
        }
        Ok(CoeffTable { rank, max_deg: series.max_deg(), entries })
    }

    pub fn get(&self, k: &[u32]) -> Result<QPoly> {
        let total: u32 = k.iter().sum();
        if total > self.max_deg {
            return Err(Error::DegreeShortfall { needed: total, have: self.max_deg });
        }
        Ok(self.entries.get(k).cloned().unwrap_or_else(QPoly::zero))
    }

    pub fn eval(&self, k: &[u32], q: &BigInt) -> Result<BigInt> {
        Ok(self.get(k)?.eval(q))
    }

    /// All exponent tuples of total degree at most `max_deg`, ascending
    /// lexicographically, zero entries included.
    pub fn all_tuples(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.rank];
        loop {
            if cur.iter().sum::<u32>() <= self.max_deg {
                out.push(cur.clone());
            }
            // lexicographic odometer bounded by max_deg per digit
            let mut pos = self.rank;
            loop {
                if pos == 0 {
                    out.sort();
                    return out;
                }
                pos -= 1;
                if cur[pos] < self.max_deg {
                    cur[pos] += 1;
                    for digit in cur.iter_mut().skip(pos + 1) {
                        *digit = 0;
                    }
                    break;
                }
            }
        }
    }

    /// CSV with columns `k_1, ..., k_r` and the coefficient as a polynomial
    /// in `q` (or its value when `q` is supplied).
    pub fn write_csv<W: Write>(&self, w: &mut W, q: Option<&BigInt>) -> Result<()> {
        let ks: Vec<String> = (1..=self.rank).map(|i| format!("k{i}")).collect();
        let value_col = match q {
            Some(q) => format!("a({q})"),
            None => "a(q)".to_string(),
        };
        writeln!(w, "{},{}", ks.join(","), value_col)?;
        for k in self.all_tuples() {
            let entry = self.get(&k)?;
            let val = match q {
                Some(q) => entry.eval(q).to_string(),
                None => entry.to_string(),
            };
            let kcols: Vec<String> = k.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{},{}", kcols.join(","), val)?;
        }
        Ok(())
    }
}

/// Exact coefficient extraction: the coefficient of `x_j^k` in a rational
/// function, itself a rational function in the remaining variables.
///
/// Uses the linear recurrence `D_0 c_m = N_m - sum D_i c_{m-i}` obtained by
/// writing numerator and denominator as polynomials in `x_j`.
pub fn coeff_in_var(
    f: &RatFunc,
    var: usize,
    k: u32,
    basis: Option<&ReduceBasis>,
) -> Result<RatFunc> {
    let nparts = f.num().coeffs_in_var(var);
    let dparts = f.den().coeffs_in_var(var);
    if dparts[0].is_zero() {
        return Err(Error::NotSeriesExpandable);
    }
    let d0 = RatFunc::from_poly(dparts[0].clone());
    let mut cs: Vec<RatFunc> = Vec::with_capacity(k as usize + 1);
    for m in 0..=k as usize {
        let mut acc = if m < nparts.len() {
            RatFunc::from_poly(nparts[m].clone())
        } else {
            RatFunc::zero(f.nvars())
        };
        for i in 1..=m.min(dparts.len() - 1) {
            acc = acc.sub(&RatFunc::from_poly(dparts[i].clone()).mul(&cs[m - i]));
        }
        let c = acc.div(&d0)?.reduce(basis);
        cs.push(c);
    }
    Ok(cs.pop().unwrap())
}

/// `T(x_{j0}; k-hat)`: freeze every variable other than `x_{j0}` at the
/// prescribed exponent, leaving an exact univariate rational function in
/// `t` and `x_{j0}`.
pub fn coeff_extract_univariate(
    f: &RatFunc,
    keep: usize,
    khat: &[(usize, u32)],
    basis: Option<&ReduceBasis>,
) -> Result<RatFunc> {
    let mut g = f.clone();
    for &(var, k) in khat {
        assert_ne!(var, keep);
        g = coeff_in_var(&g, var, k, basis)?;
    }
    Ok(g)
}

/// Deterministic rendering of a truncation (sorted terms), used in witnesses.
pub fn series_digest(s: &SeriesTruncation, limit: usize) -> String {
    let mut terms = s.poly().sorted_terms();
    terms.sort_by(|a, b| cmp_grlex(&a.0, &b.0));
    let shown: Vec<String> = terms
        .iter()
        .take(limit)
        .map(|(e, c)| format!("{:?}:{}", e, c))
        .collect();
    format!("{} terms [{}]", terms.len(), shown.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SparsePoly;

    fn geom(n: usize) -> RatFunc {
        // 1/(1-x1)
        let one = SparsePoly::one(n);
        RatFunc::new(one.clone(), one.sub(&SparsePoly::var(n, 1))).unwrap()
    }

    #[test]
    fn geometric_series() {
        let f = geom(2);
        let s = series_expand(&f, 3).unwrap();
        let mut expect = SparsePoly::zero(2);
        for k in 0..=3 {
            expect.add_term(vec![0, k], 1.into());
        }
        assert_eq!(s.poly(), &expect);
    }

    #[test]
    fn product_of_truncations_is_truncation_of_product() {
        let n = 3;
        let one = SparsePoly::one(n);
        let f = RatFunc::new(one.clone(), one.sub(&SparsePoly::var(n, 1))).unwrap();
        let g = RatFunc::new(
            one.clone(),
            one.sub(&SparsePoly::monomial(n, vec![2, 1, 1], 1)),
        )
        .unwrap();
        let lhs = series_expand(&f.mul(&g), 5).unwrap();
        let rhs = series_expand(&f, 5).unwrap().mul(&series_expand(&g, 5).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_expandable_at_origin() {
        let n = 2;
        let f = RatFunc::new(SparsePoly::one(n), SparsePoly::var(n, 1)).unwrap();
        assert!(matches!(series_expand(&f, 3), Err(Error::NotSeriesExpandable)));
    }

    #[test]
    fn qpoly_rendering_and_eval() {
        let p = QPoly::from_t_pairs(&[(0, 1.into()), (4, (-3).into())]).unwrap();
        assert_eq!(p.to_string(), "-3*q^2 + 1");
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::from(-11));
        assert!(QPoly::from_t_pairs(&[(1, 1.into())]).is_err());
        assert!(QPoly::from_t_pairs(&[(-2, 1.into())]).is_err());
    }

    #[test]
    fn coeff_in_var_geometric() {
        // coefficient of x1^k in 1/(1-x1) is 1
        let f = geom(2);
        for k in 0..4 {
            let c = coeff_in_var(&f, 1, k, None).unwrap();
            assert!(c.eq_cross(&RatFunc::one(2)));
        }
    }

    #[test]
    fn coeff_in_var_mixed() {
        // coefficient of x1^2 in 1/(1 - x1 x2) is x2^2
        let n = 3;
        let one = SparsePoly::one(n);
        let f = RatFunc::new(
            one.clone(),
            one.sub(&SparsePoly::monomial(n, vec![0, 1, 1], 1)),
        )
        .unwrap();
        let c = coeff_in_var(&f, 1, 2, None).unwrap();
        assert!(c.eq_cross(&RatFunc::from_poly(SparsePoly::monomial(n, vec![0, 0, 2], 1))));
    }

    #[test]
    fn table_tuples_and_csv_row_count() {
        let n = 3;
        let one = SparsePoly::one(n);
        // f = 1/((1-x1)(1-x2))
        let f = RatFunc::new(
            one.clone(),
            one.sub(&SparsePoly::var(n, 1)).mul(&one.sub(&SparsePoly::var(n, 2))),
        )
        .unwrap();
        let table = CoeffTable::from_series(2, &series_expand(&f, 4).unwrap()).unwrap();
        assert_eq!(table.all_tuples().len(), 15);
        let mut buf = Vec::new();
        table.write_csv(&mut buf, None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 16); // header + 15 rows
    }
}
