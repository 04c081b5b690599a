//! Exact rational functions as numerator/denominator pairs.
//!
//! There is no canonical form: equality is decided by cross-multiplication,
//! which is all the constructions downstream ever need. A `ReduceBasis`
//! provides opportunistic cancellation by trial division against a fixed
//! list of factors, which keeps intermediate expressions from swelling
//! during the averaging over the Weyl group.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Exp, MonomialMap, SparsePoly};

#[derive(Clone)]
pub struct RatFunc {
    num: SparsePoly,
    den: SparsePoly,
}

impl RatFunc {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        assert_eq!(num.nvars(), den.nvars());
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        let den = SparsePoly::one(p.nvars());
        RatFunc { num: p, den }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(SparsePoly::one(nvars))
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(SparsePoly::zero(nvars))
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_poly(SparsePoly::constant(nvars, c))
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        })
    }

    pub fn inverse(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num: self.den.clone(), den: self.num.clone() })
    }

    /// Cross-multiplication equality: `n1 d2 == n2 d1`.
    pub fn eq_cross(&self, other: &RatFunc) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Substitute each variable by a signed monomial; negative exponents are
    /// cleared immediately by multiplying numerator and denominator with a
    /// monomial, so the invariants of `SparsePoly` are preserved.
    pub fn substitute(&self, rule: &MonomialMap) -> Result<RatFunc> {
        let n = self.nvars();
        let num_l = self.num.substitute(rule);
        let den_l = self.den.substitute(rule);
        if den_l.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mn = num_l.min_exps();
        let md = den_l.min_exps();
        // shift exponents so both sides end up nonnegative
        let mut num_shift = vec![0; n];
        let mut den_shift = vec![0; n];
        for v in 0..n {
            let m = mn[v].min(md[v]).min(0);
            num_shift[v] = -m;
            den_shift[v] = -m;
        }
        let one = BigInt::one();
        Ok(RatFunc {
            num: num_l.mul_monomial(&num_shift, &one),
            den: den_l.mul_monomial(&den_shift, &one),
        })
    }

    /// Strip common integer and monomial content, cancel factors from the
    /// basis when one is supplied, and normalize the sign so the trailing
    /// term of the denominator is positive.
    pub fn reduce(&self, basis: Option<&ReduceBasis>) -> RatFunc {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if num.is_zero() {
            return RatFunc { num, den: SparsePoly::one(self.nvars()) };
        }
        // common monomial
        let mn = num.min_exps();
        let md = den.min_exps();
        let common: Vec<Exp> = mn.iter().zip(&md).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|&e| e != 0) {
            num = num.shift_down(&common);
            den = den.shift_down(&common);
        }
        // integer content
        let g = num.content().gcd(&den.content());
        if !g.is_one() {
            num = num.div_scalar_exact(&g);
            den = den.div_scalar_exact(&g);
        }
        if let Some(basis) = basis {
            basis.cancel(&mut num, &mut den);
        }
        // sign normalization: trailing (grlex-minimal) denominator term positive
        let trailing_neg = den
            .terms()
            .min_by(|a, b| crate::poly::cmp_grlex(a.0, b.0))
            .is_some_and(|(_, c)| c.is_negative());
        if trailing_neg {
            num = num.neg();
            den = den.neg();
        }
        RatFunc { num, den }
    }

    /// The value at `x = 0` as a pair of `t`-polynomials, or an error when
    /// the denominator vanishes there.
    pub fn at_x_zero(&self) -> Result<(SparsePoly, SparsePoly)> {
        let d0 = self.den.x_constant_part();
        if d0.is_zero() {
            return Err(Error::NotSeriesExpandable);
        }
        Ok((self.num.x_constant_part(), d0))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.eq_cross(other)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Fixed factor list for opportunistic cancellation, with precomputed values
/// at an integer point so that most non-divisors are rejected by a single
/// big-integer divisibility test instead of a polynomial division.
pub struct ReduceBasis {
    factors: Vec<SparsePoly>,
    values: Vec<BigInt>,
    point: Vec<BigInt>,
}

impl ReduceBasis {
    pub fn new(nvars: usize, factors: Vec<SparsePoly>) -> Self {
        // small primes; t = 2 keeps t-heavy evaluations moderate
        const PRIMES: [i64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];
        let point: Vec<BigInt> = (0..nvars).map(|v| BigInt::from(PRIMES[v % PRIMES.len()])).collect();
        let mut kept = Vec::new();
        let mut values = Vec::new();
        for fac in factors {
            assert_eq!(fac.nvars(), nvars);
            let v = fac.eval(&point);
            assert!(!v.is_zero(), "basis factor vanishes at the filter point");
            kept.push(fac);
            values.push(v);
        }
        ReduceBasis { factors: kept, values, point }
    }

    pub fn factors(&self) -> &[SparsePoly] {
        &self.factors
    }

    /// Full factorization over the basis: `p = c * x^mono * prod f_i^{e_i}`,
    /// or `None` when a factor outside the basis remains.
    pub fn factor_full(&self, p: &SparsePoly) -> Option<DenFactors> {
        if p.is_zero() {
            return None;
        }
        let mono = p.min_exps();
        let mut rest = p.shift_down(&mono);
        let content = rest.content();
        if !content.is_one() {
            rest = rest.div_scalar_exact(&content);
        }
        let mut powers: Vec<(usize, u32)> = Vec::new();
        let mut val = rest.eval(&self.point);
        for (idx, (fac, fv)) in self.factors.iter().zip(&self.values).enumerate() {
            let mut e = 0u32;
            loop {
                if !(val.is_zero() || (&val % fv).is_zero()) {
                    break;
                }
                let Some(q) = rest.try_div(fac) else { break };
                rest = q;
                val = if val.is_zero() { rest.eval(&self.point) } else { &val / fv };
                e += 1;
            }
            if e > 0 {
                powers.push((idx, e));
            }
            if rest.is_one() {
                break;
            }
        }
        let sign_rest = if rest == SparsePoly::constant(p.nvars(), -1) {
            true
        } else if rest.is_one() {
            false
        } else {
            return None;
        };
        let content = if sign_rest { -content } else { content };
        Some(DenFactors { content, mono, powers })
    }

    /// Expand a factorization back into a polynomial.
    pub fn expand(&self, f: &DenFactors, nvars: usize) -> SparsePoly {
        let mut acc = SparsePoly::monomial(
            nvars,
            f.mono.clone(),
            1,
        )
        .mul_scalar(&f.content);
        for &(idx, e) in &f.powers {
            for _ in 0..e {
                acc = acc.mul(&self.factors[idx]);
            }
        }
        acc
    }

    fn cancel(&self, num: &mut SparsePoly, den: &mut SparsePoly) {
        let mut nv = num.eval(&self.point);
        let mut dv = den.eval(&self.point);
        for (fac, fv) in self.factors.iter().zip(&self.values) {
            loop {
                let n_might = nv.is_zero() || (&nv % fv).is_zero();
                let d_might = dv.is_zero() || (&dv % fv).is_zero();
                if !(n_might && d_might) {
                    break;
                }
                let Some(nq) = num.try_div(fac) else { break };
                let Some(dq) = den.try_div(fac) else { break };
                *num = nq;
                *den = dq;
                nv = if nv.is_zero() { num.eval(&self.point) } else { &nv / fv };
                dv = if dv.is_zero() { den.eval(&self.point) } else { &dv / fv };
            }
        }
    }
}

/// A denominator factored over the basis: constant content, a monomial, and
/// basis-factor multiplicities.
#[derive(Clone, Debug)]
pub struct DenFactors {
    pub content: BigInt,
    pub mono: Vec<Exp>,
    pub powers: Vec<(usize, u32)>,
}

/// Addition through a least common denominator assembled from basis-factor
/// multiplicities; falls back to plain cross-multiplication when either
/// denominator has a factor outside the basis. Avoids the quadratic swell of
/// `n1 d2 + n2 d1` when the denominators largely coincide.
pub fn add_with_basis(a: &RatFunc, b: &RatFunc, basis: &ReduceBasis) -> RatFunc {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (Some(fa), Some(fb)) = (basis.factor_full(a.den()), basis.factor_full(b.den())) else {
        return a.add(b);
    };
    let nvars = a.nvars();
    let content = lcm_big(&fa.content, &fb.content);
    let mono: Vec<Exp> = fa.mono.iter().zip(&fb.mono).map(|(x, y)| *x.max(y)).collect();
    let mut powers: Vec<(usize, u32)> = fa.powers.clone();
    for &(idx, e) in &fb.powers {
        match powers.iter_mut().find(|(i, _)| *i == idx) {
            Some(entry) => entry.1 = entry.1.max(e),
            None => powers.push((idx, e)),
        }
    }
    powers.sort_unstable();
    let lcm = DenFactors { content: content.clone(), mono, powers };
    let mult_for = |f: &DenFactors| -> SparsePoly {
        let shift: Vec<Exp> = lcm.mono.iter().zip(&f.mono).map(|(x, y)| x - y).collect();
        let scale = &content / &f.content;
        let mut acc = SparsePoly::monomial(nvars, vec![0; nvars], 1)
            .mul_monomial(&shift, &scale);
        for &(idx, e) in &lcm.powers {
            let have = f.powers.iter().find(|(i, _)| *i == idx).map_or(0, |(_, e)| *e);
            for _ in have..e {
                acc = acc.mul(&basis.factors()[idx]);
            }
        }
        acc
    };
    let num = a.num().mul(&mult_for(&fa)).add(&b.num().mul(&mult_for(&fb)));
    let den = basis.expand(&lcm, nvars);
    RatFunc { num, den }
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    let g = a.gcd(b);
    (a / &g * b).abs()
}

/// Checked arithmetic entry point.
pub fn ratfunc_arith(a: &RatFunc, b: &RatFunc, op: RatOp) -> Result<RatFunc> {
    if a.nvars() != b.nvars() {
        return Err(Error::VariableMismatch { left: a.nvars(), right: b.nvars() });
    }
    match op {
        RatOp::Add => Ok(a.add(b)),
        RatOp::Sub => Ok(a.sub(b)),
        RatOp::Mul => Ok(a.mul(b)),
        RatOp::Div => a.div(b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}
