//! Sparse multivariate polynomials over the integers.
//!
//! The variable set is always `t, x_1, ..., x_r` with `q = t^2`; index 0 is
//! `t` and index `i` (1-based) is `x_i`. Square roots of `q` never appear as
//! radicals: every coefficient ring is plain `Z[t]`.
//!
//! Exponents are stored as `i32`. The public constructors insist on
//! nonnegative exponents; series code is allowed to carry intermediate
//! negative `t`-exponents and checks for them before handing results out.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Exp = i32;

/// A monomial image under a substitution: `± t^{e_0} x_1^{e_1} ... x_r^{e_r}`,
/// exponents possibly negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMonomial {
    pub neg: bool,
    pub exps: Vec<Exp>,
}

impl SignedMonomial {
    pub fn identity(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        SignedMonomial { neg: false, exps }
    }
}

/// A substitution rule assigning a signed monomial image to every variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub images: Vec<SignedMonomial>,
}

impl MonomialMap {
    pub fn identity(nvars: usize) -> Self {
        MonomialMap {
            images: (0..nvars).map(|v| SignedMonomial::identity(nvars, v)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    /// The rule sending `x_j` to the image of `x_j` under `other` composed
    /// with `self`, i.e. applying `self` to a polynomial and then `other`
    /// gives the same result as applying the composition once.
    pub fn then(&self, other: &MonomialMap) -> MonomialMap {
        let n = self.nvars();
        assert_eq!(n, other.nvars());
        let images = self
            .images
            .iter()
            .map(|img| {
                let mut exps = vec![0i64; n];
                let mut neg = img.neg;
                for (v, &e) in img.exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let target = &other.images[v];
                    if target.neg && e % 2 != 0 {
                        neg = !neg;
                    }
                    for (w, &te) in target.exps.iter().enumerate() {
                        exps[w] += e as i64 * te as i64;
                    }
                }
                SignedMonomial {
                    neg,
                    exps: exps.into_iter().map(|e| e as Exp).collect(),
                }
            })
            .collect();
        MonomialMap { images }
    }
}

/// Sparse polynomial with arbitrary-precision integer coefficients.
///
/// No zero coefficients are stored, and all exponent vectors have the same
/// length as the variable set.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    nvars: usize,
    terms: HashMap<Vec<Exp>, BigInt>,
}

/// Graded lexicographic order: higher total degree first, ties broken
/// lexicographically on `x_1, ..., x_r` and finally `t`.
pub fn cmp_grlex(a: &[Exp], b: &[Exp]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for i in 1..a.len() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    a[0].cmp(&b[0])
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: HashMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// `c * t^{exps[0]} x_1^{exps[1]} ...`; exponents must be nonnegative.
    pub fn monomial(nvars: usize, exps: Vec<Exp>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), nvars);
        assert!(exps.iter().all(|&e| e >= 0), "negative exponent in monomial");
        let mut p = Self::zero(nvars);
        p.add_term(exps, c.into());
        p
    }

    /// The variable with index `var` (0 is `t`).
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Self::monomial(nvars, exps, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.nvars])
                .is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Exp>, &BigInt)> {
        self.terms.iter()
    }

    /// Terms sorted descending in the graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(Vec<Exp>, BigInt)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|a, b| cmp_grlex(&b.0, &a.0));
        v
    }

    pub fn coeff(&self, exps: &[Exp]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, exps: Vec<Exp>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.nvars);
        use std::collections::hash_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (e, c) in small.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -(std::mem::take(c));
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        out.terms.reserve(big.terms.len());
        for (ea, ca) in small.terms.iter() {
            for (eb, cb) in big.terms.iter() {
                let exps: Vec<Exp> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigInt) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Multiply by a single monomial (exponent shift, possibly negative
    /// entries as long as the result stays nonnegative).
    pub fn mul_monomial(&self, shift: &[Exp], c: &BigInt) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, cc) in self.terms.iter() {
            let exps: Vec<Exp> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.add_term(exps, cc * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> SparsePoly {
        let mut out = SparsePoly::one(self.nvars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Total degree in the `x` variables of the largest term.
    pub fn max_x_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e[1..].iter().map(|&v| v as i64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn max_exp(&self, var: usize) -> Exp {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn min_exp(&self, var: usize) -> Exp {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    /// Leading term under the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Vec<Exp>, &BigInt)> {
        self.terms.iter().max_by(|a, b| cmp_grlex(a.0, b.0))
    }

    /// Exact division: `Some(q)` with `self = q * div`, or `None` when no
    /// polynomial quotient exists. Division with remainder under the graded
    /// lexicographic order; failure as soon as a leading term does not
    /// divide. The remainder lives in a `BTreeMap` keyed by the monomial
    /// order so the leading term costs `O(log n)` per step.
    pub fn try_div(&self, div: &SparsePoly) -> Option<SparsePoly> {
        assert_eq!(self.nvars, div.nvars);
        assert!(!div.is_zero(), "division by zero polynomial");
        let key = |e: &[Exp]| -> Vec<Exp> {
            let mut k = Vec::with_capacity(e.len() + 1);
            k.push(e.iter().sum());
            k.extend_from_slice(&e[1..]);
            k.push(e[0]);
            k
        };
        let unkey = |k: &[Exp]| -> Vec<Exp> {
            let mut e = Vec::with_capacity(k.len() - 1);
            e.push(k[k.len() - 1]);
            e.extend_from_slice(&k[1..k.len() - 1]);
            e
        };
        let mut dterms: Vec<(Vec<Exp>, BigInt)> =
            div.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        dterms.sort_by(|a, b| cmp_grlex(&b.0, &a.0));
        let (dexp, dcoef) = dterms[0].clone();
        let mut rem: std::collections::BTreeMap<Vec<Exp>, BigInt> =
            self.terms.iter().map(|(e, c)| (key(e), c.clone())).collect();
        let mut quo = SparsePoly::zero(self.nvars);
        while let Some((rkey, rcoef)) = rem.last_key_value() {
            let rexp = unkey(rkey);
            let rcoef = rcoef.clone();
            if rexp.iter().zip(&dexp).any(|(r, d)| r < d) {
                return None;
            }
            let (qc, qrem) = rcoef.div_rem(&dcoef);
            if !qrem.is_zero() {
                return None;
            }
            let qexp: Vec<Exp> = rexp.iter().zip(&dexp).map(|(r, d)| r - d).collect();
            for (de, dc) in &dterms {
                let te: Vec<Exp> = de.iter().zip(&qexp).map(|(a, b)| a + b).collect();
                let tk = key(&te);
                let mut drop_entry = false;
                match rem.get_mut(&tk) {
                    Some(entry) => {
                        *entry -= dc * &qc;
                        drop_entry = entry.is_zero();
                    }
                    None => {
                        rem.insert(tk.clone(), -(dc * &qc));
                    }
                }
                if drop_entry {
                    rem.remove(&tk);
                }
            }
            quo.add_term(qexp, qc);
        }
        Some(quo)
    }

    /// gcd of all coefficients (positive; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_scalar_exact(&self, d: &BigInt) -> SparsePoly {
        assert!(!d.is_zero());
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            let (q, r) = c.div_rem(d);
            assert!(r.is_zero(), "inexact scalar division");
            *c = q;
        }
        out
    }

    /// Componentwise minimum exponent over all terms (zeros for the zero
    /// polynomial).
    pub fn min_exps(&self) -> Vec<Exp> {
        let mut it = self.terms.keys();
        let mut m = match it.next() {
            Some(e) => e.clone(),
            None => return vec![0; self.nvars],
        };
        for e in it {
            for (mv, &ev) in m.iter_mut().zip(e) {
                if ev < *mv {
                    *mv = ev;
                }
            }
        }
        m
    }

    /// Shift all exponents by `-delta` (used to strip a common monomial).
    pub fn shift_down(&self, delta: &[Exp]) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            let exps: Vec<Exp> = e.iter().zip(delta).map(|(a, b)| a - b).collect();
            out.add_term(exps, c.clone());
        }
        out
    }

    /// Substitute every variable by a signed monomial. The result may carry
    /// negative exponents; callers clear them (see `RatFunc::substitute`).
    pub fn substitute(&self, rule: &MonomialMap) -> SparsePoly {
        assert_eq!(rule.nvars(), self.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            let mut exps = vec![0i64; self.nvars];
            let mut neg = false;
            for (v, &ev) in e.iter().enumerate() {
                if ev == 0 {
                    continue;
                }
                let img = &rule.images[v];
                if img.neg && ev % 2 != 0 {
                    neg = !neg;
                }
                for (w, &iw) in img.exps.iter().enumerate() {
                    exps[w] += ev as i64 * iw as i64;
                }
            }
            let exps: Vec<Exp> = exps.into_iter().map(|x| x as Exp).collect();
            out.add_term(exps, if neg { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Drop every term with a positive exponent in any of the given variables.
    pub fn set_vars_zero(&self, vars: &[usize]) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            if vars.iter().all(|&v| e[v] == 0) {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// The part of the polynomial constant in all `x` variables, as a
    /// polynomial in `t` alone.
    pub fn x_constant_part(&self) -> SparsePoly {
        self.set_vars_zero(&(1..self.nvars).collect::<Vec<_>>())
    }

    /// Number of distinct `x`-monomials (terms counted with coefficients in
    /// `Z[q]`, the convention used for p-part term counts).
    pub fn num_x_terms(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        for e in self.terms.keys() {
            seen.insert(&e[1..]);
        }
        seen.len()
    }

    /// True when every `x`-exponent is even (evenness in all `x_i`).
    pub fn is_even_in_x(&self) -> bool {
        self.terms.keys().all(|e| e[1..].iter().all(|&v| v % 2 == 0))
    }

    pub fn has_negative_exp(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&v| v < 0))
    }

    /// Evaluate at an integer point (used as a cheap divisibility filter).
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut pows: Vec<Vec<BigInt>> = Vec::with_capacity(self.nvars);
        for (v, pv) in point.iter().enumerate() {
            let m = self.max_exp(v).max(0) as usize;
            let mut tbl = Vec::with_capacity(m + 1);
            tbl.push(BigInt::one());
            for k in 1..=m {
                let prev = tbl[k - 1].clone();
                tbl.push(prev * pv);
            }
            pows.push(tbl);
        }
        let mut acc = BigInt::zero();
        for (e, c) in self.terms.iter() {
            let mut term = c.clone();
            for (v, &ev) in e.iter().enumerate() {
                debug_assert!(ev >= 0);
                term *= &pows[v][ev as usize];
            }
            acc += term;
        }
        acc
    }

    /// Group terms by their `x`-exponents; each value is a map
    /// `t`-exponent -> coefficient.
    pub fn by_x_monomial(&self) -> HashMap<Vec<Exp>, Vec<(Exp, BigInt)>> {
        let mut out: HashMap<Vec<Exp>, Vec<(Exp, BigInt)>> = HashMap::new();
        for (e, c) in self.terms.iter() {
            out.entry(e[1..].to_vec()).or_default().push((e[0], c.clone()));
        }
        for v in out.values_mut() {
            v.sort_by_key(|(te, _)| *te);
        }
        out
    }

    /// Split into coefficients of powers of variable `var`:
    /// `self = sum_m parts[m] * var^m` where the parts do not involve `var`.
    pub fn coeffs_in_var(&self, var: usize) -> Vec<SparsePoly> {
        let deg = self.max_exp(var).max(0) as usize;
        let mut parts = vec![SparsePoly::zero(self.nvars); deg + 1];
        for (e, c) in self.terms.iter() {
            let m = e[var];
            debug_assert!(m >= 0);
            let mut exps = e.clone();
            exps[var] = 0;
            parts[m as usize].add_term(exps, c.clone());
        }
        parts
    }
}

/// Checked arithmetic entry point: errors on mismatched variable sets.
pub fn poly_arith(a: &SparsePoly, b: &SparsePoly, op: PolyOp) -> Result<SparsePoly> {
    if a.nvars() != b.nvars() {
        return Err(Error::VariableMismatch { left: a.nvars(), right: b.nvars() });
    }
    Ok(match op {
        PolyOp::Add => a.add(b),
        PolyOp::Sub => a.sub(b),
        PolyOp::Mul => a.mul(b),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact division with a checked error contract.
pub fn poly_exact_div(a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
    if a.nvars() != b.nvars() {
        return Err(Error::VariableMismatch { left: a.nvars(), right: b.nvars() });
    }
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    a.try_div(b).ok_or(Error::InexactDivision)
}

pub fn var_name(idx: usize) -> String {
    if idx == 0 {
        "t".to_string()
    } else {
        format!("x{idx}")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.sorted_terms() {
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
            let mut printed = false;
            if !mag.is_one() || exps.iter().all(|&e| e == 0) {
                write!(f, "{mag}")?;
                printed = true;
            }
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "{}", var_name(v))?;
                if e != 1 {
                    write!(f, "^{e}")?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xvar(n: usize, i: usize) -> SparsePoly {
        SparsePoly::var(n, i)
    }

    #[test]
    fn difference_of_squares() {
        // (1 - x1 x2)(1 + x1 x2) = 1 - x1^2 x2^2
        let n = 3;
        let one = SparsePoly::one(n);
        let x1x2 = xvar(n, 1).mul(&xvar(n, 2));
        let prod = one.sub(&x1x2).mul(&one.add(&x1x2));
        let mut expect = SparsePoly::one(n);
        expect.add_term(vec![0, 2, 2], (-1).into());
        assert_eq!(prod, expect);
    }

    #[test]
    fn additive_identity() {
        let n = 3;
        let p = xvar(n, 1).mul(&xvar(n, 2)).add(&SparsePoly::constant(n, 7));
        assert_eq!(p.add(&SparsePoly::zero(n)), p);
    }

    #[test]
    fn expanded_delta_like_product() {
        // (1-x)(1-y)(1-q x^2 y^2) has 8 terms and t-exponents {0,2}.
        let n = 3;
        let one = SparsePoly::one(n);
        let fx = one.sub(&xvar(n, 1));
        let fy = one.sub(&xvar(n, 2));
        let fq = one.sub(&SparsePoly::monomial(n, vec![2, 2, 2], 1));
        let p = fx.mul(&fy).mul(&fq);
        assert_eq!(p.num_terms(), 8);
        let texps: std::collections::HashSet<Exp> =
            p.terms().map(|(e, _)| e[0]).collect();
        assert_eq!(texps, [0, 2].into_iter().collect());
    }

    #[test]
    fn exact_division_succeeds() {
        let n = 2;
        let one = SparsePoly::one(n);
        let x = xvar(n, 1);
        let a = one.sub(&x.mul(&x));
        let b = one.sub(&x);
        let q = poly_exact_div(&a, &b).unwrap();
        assert_eq!(q, one.add(&x));
        // certificate
        assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn exact_division_bivariate() {
        let n = 3;
        let one = SparsePoly::one(n);
        let x1x2 = xvar(n, 1).mul(&xvar(n, 2));
        let a = one.sub(&x1x2.mul(&x1x2));
        let b = one.sub(&x1x2);
        assert_eq!(poly_exact_div(&a, &b).unwrap(), one.add(&x1x2));
    }

    #[test]
    fn inexact_division_fails() {
        let n = 2;
        let one = SparsePoly::one(n);
        let x = xvar(n, 1);
        let res = poly_exact_div(&one.add(&x), &one.sub(&x));
        assert!(matches!(res, Err(Error::InexactDivision)));
    }

    #[test]
    fn division_by_zero_rejected() {
        let n = 2;
        let res = poly_exact_div(&SparsePoly::one(n), &SparsePoly::zero(n));
        assert!(matches!(res, Err(Error::DivisionByZero)));
    }

    #[test]
    fn variable_mismatch_rejected() {
        let a = SparsePoly::one(2);
        let b = SparsePoly::one(3);
        assert!(matches!(
            poly_arith(&a, &b, PolyOp::Add),
            Err(Error::VariableMismatch { .. })
        ));
    }

    #[test]
    fn grlex_orders_by_degree_then_x_then_t() {
        assert_eq!(cmp_grlex(&[0, 2, 0], &[0, 1, 0]), Ordering::Greater);
        assert_eq!(cmp_grlex(&[0, 1, 1], &[0, 2, 0]), Ordering::Less);
        // same x-part: t decides last
        assert_eq!(cmp_grlex(&[1, 1, 0], &[0, 1, 0]), Ordering::Greater);
        // same degree, larger x1 wins regardless of t
        assert_eq!(cmp_grlex(&[2, 1, 0], &[0, 2, 1]), Ordering::Less);
    }

    #[test]
    fn substitute_with_signs() {
        // x1 -> -x2, x2 -> x1 x2 on  x1 + x2^2
        let n = 3;
        let mut rule = MonomialMap::identity(n);
        rule.images[1] = SignedMonomial { neg: true, exps: vec![0, 0, 1] };
        rule.images[2] = SignedMonomial { neg: false, exps: vec![0, 1, 1] };
        let p = xvar(n, 1).add(&xvar(n, 2).pow(2));
        let q = p.substitute(&rule);
        let mut expect = SparsePoly::monomial(n, vec![0, 0, 1], -1);
        expect.add_term(vec![0, 2, 2], 1.into());
        assert_eq!(q, expect);
    }

    #[test]
    fn composition_of_rules_matches_sequential_application() {
        let n = 3;
        let mut r1 = MonomialMap::identity(n);
        r1.images[1] = SignedMonomial { neg: true, exps: vec![1, 1, 1] };
        let mut r2 = MonomialMap::identity(n);
        r2.images[2] = SignedMonomial { neg: false, exps: vec![0, 1, 1] };
        let p = xvar(n, 1).mul(&xvar(n, 2)).add(&xvar(n, 1).pow(2));
        let seq = p.substitute(&r1).substitute(&r2);
        let comp = p.substitute(&r1.then(&r2));
        assert_eq!(seq, comp);
    }
}
