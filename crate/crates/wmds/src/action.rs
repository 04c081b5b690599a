//! The Weyl group action on rational functions.
//!
//! The point action sends `x_i` to `1/(q x_i)` and multiplies the adjacent
//! variables by `x_i sqrt(q)`; the sign twist `eps_i` negates the adjacent
//! variables. On top of those substitutions sits the `|`-action
//!
//! ```text
//! (f|sigma_i)(x) = c_i(x) f(sigma_i x) + d_i(x) f(eps_i sigma_i x)
//! ```
//!
//! with
//!
//! ```text
//! c_i = (t-1)(t x_i + 1) / (2 t^2 x_i (1 - x_i)),
//! d_i = (t+1)(t x_i - 1) / (2 t^2 x_i (1 - x_i)),
//! ```
//!
//! the partial-fraction split of the defining formula in terms of the even
//! and odd parts of `f`. Both routes are implemented; they agree and are
//! property-tested against each other.
//!
//! Words act on the right: `f|(uv) = (f|u)|v`, generators applied along the
//! word from left to right.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::poly::{Exp, MonomialMap, SignedMonomial, SparsePoly};
use crate::ratfunc::{RatFunc, ReduceBasis};
use crate::rootsys::{rho_minus_w_inv_rho, RootSystem, RootVector, WeylElement};

pub struct ActionContext {
    pub rs: RootSystem,
    /// `1 + rank`: variable 0 is `t`, variable `i` is `x_i`.
    pub nvars: usize,
    /// `Delta(x) = prod over positive roots (1 - q^{d(alpha)} x^{2 alpha})`.
    pub delta: SparsePoly,
    /// `D(x) = prod over positive roots (1 - q^{d(alpha)-1} x^{2 alpha})`,
    /// the p-part of the normalizing zeta factors.
    pub dpoly: SparsePoly,
    sigma: Vec<MonomialMap>,
    eps: Vec<MonomialMap>,
    eps_sigma: Vec<MonomialMap>,
    coef_c: Vec<RatFunc>,
    coef_d: Vec<RatFunc>,
    pub basis: ReduceBasis,
}

impl ActionContext {
    pub fn new(rs: RootSystem) -> Self {
        let nvars = rs.rank + 1;
        let delta = root_product(&rs, nvars, 0);
        let dpoly = root_product(&rs, nvars, -1);

        let mut sigma = Vec::with_capacity(rs.rank);
        let mut eps = Vec::with_capacity(rs.rank);
        let mut eps_sigma = Vec::with_capacity(rs.rank);
        for i in 0..rs.rank {
            let mut s = MonomialMap::identity(nvars);
            let mut e = MonomialMap::identity(nvars);
            let mut es = MonomialMap::identity(nvars);
            // x_i -> 1/(q x_i)
            let mut inv = vec![0; nvars];
            inv[0] = -2;
            inv[i + 1] = -1;
            s.images[i + 1] = SignedMonomial { neg: false, exps: inv.clone() };
            es.images[i + 1] = SignedMonomial { neg: false, exps: inv };
            for j in rs.neighbors(i) {
                // x_j -> x_i x_j sqrt(q), negated under eps_i
                let mut adj = vec![0; nvars];
                adj[0] = 1;
                adj[i + 1] = 1;
                adj[j + 1] = 1;
                s.images[j + 1] = SignedMonomial { neg: false, exps: adj.clone() };
                es.images[j + 1] = SignedMonomial { neg: true, exps: adj };
                let mut flip = vec![0; nvars];
                flip[j + 1] = 1;
                e.images[j + 1] = SignedMonomial { neg: true, exps: flip };
            }
            sigma.push(s);
            eps.push(e);
            eps_sigma.push(es);
        }

        let mut coef_c = Vec::with_capacity(rs.rank);
        let mut coef_d = Vec::with_capacity(rs.rank);
        let one = SparsePoly::one(nvars);
        let t = SparsePoly::var(nvars, 0);
        for i in 0..rs.rank {
            let xi = SparsePoly::var(nvars, i + 1);
            let txi = t.mul(&xi);
            let den = SparsePoly::monomial(nvars, shape(nvars, &[(0, 2), (i + 1, 1)]), 2)
                .mul(&one.sub(&xi));
            let c_num = t.sub(&one).mul(&txi.add(&one));
            let d_num = t.add(&one).mul(&txi.sub(&one));
            coef_c.push(RatFunc::new(c_num, den.clone()).unwrap());
            coef_d.push(RatFunc::new(d_num, den).unwrap());
        }

        let basis = build_basis(&rs, nvars);
        ActionContext { rs, nvars, delta, dpoly, sigma, eps, eps_sigma, coef_c, coef_d, basis }
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    /// The substitution rule for `sigma_i` on the variables.
    pub fn sigma_on_x(&self, i: usize) -> &MonomialMap {
        &self.sigma[i]
    }

    pub fn eps_on_x(&self, i: usize) -> &MonomialMap {
        &self.eps[i]
    }

    /// The monomial `x^{2 alpha} q^{d(alpha)+shift}` for one root.
    fn root_factor_monomial(nvars: usize, alpha: &RootVector, shift: i64) -> SparsePoly {
        let mut exps = vec![0 as Exp; nvars];
        exps[0] = (2 * (alpha.height() + shift)) as Exp;
        for (j, &k) in alpha.coords.iter().enumerate() {
            exps[j + 1] = (2 * k) as Exp;
        }
        SparsePoly::monomial(nvars, exps, 1)
    }

    /// Substitution rule realizing the monomial action
    /// `x^alpha -> q^{d(w alpha - alpha)/2} x^{w alpha}` variable by variable.
    ///
    /// As an operator on functions this composes contravariantly in `w`
    /// (substituting for a product applies the right factor's rule first).
    /// Evaluation at the point `w x` in the covariant sense — `sigma_1
    /// sigma_2 x` meaning `sigma_1` applied to `sigma_2 x` — is
    /// `point_eval_rule`, the same rule for the inverse element.
    pub fn point_rule(&self, w: &WeylElement) -> MonomialMap {
        let mut rule = MonomialMap::identity(self.nvars);
        for j in 0..self.rs.rank {
            let aj = RootVector::simple(self.rs.rank, j);
            let img = w.apply(&aj);
            let mut exps = vec![0 as Exp; self.nvars];
            exps[0] = (img.height() - aj.height()) as Exp;
            for (k, &c) in img.coords.iter().enumerate() {
                exps[k + 1] = c as Exp;
            }
            rule.images[j + 1] = SignedMonomial { neg: false, exps };
        }
        rule
    }

    /// `g(w x)` for a monomial `g = x^alpha`: the signed `t`-monomial
    /// `t^{d(w alpha - alpha)} x^{w alpha}` as exponent data.
    pub fn monomial_action(&self, alpha: &RootVector, w: &WeylElement) -> Vec<Exp> {
        let img = w.apply(alpha);
        let mut exps = vec![0 as Exp; self.nvars];
        exps[0] = (img.height() - alpha.height()) as Exp;
        for (k, &c) in img.coords.iter().enumerate() {
            exps[k + 1] = c as Exp;
        }
        exps
    }

    /// One generator of the `|`-action via the `c_i`/`d_i` form.
    pub fn bar(&self, f: &RatFunc, i: usize) -> Result<RatFunc> {
        let fs = f.substitute(&self.sigma[i])?;
        let fes = f.substitute(&self.eps_sigma[i])?;
        let out = crate::ratfunc::add_with_basis(
            &self.coef_c[i].mul(&fs).reduce(Some(&self.basis)),
            &self.coef_d[i].mul(&fes).reduce(Some(&self.basis)),
            &self.basis,
        );
        Ok(out.reduce(Some(&self.basis)))
    }

    /// Same operator through the even/odd decomposition
    /// `-(1-q x_i)/(q x_i (1-x_i)) f_i^+(sigma_i x) + f_i^-(sigma_i x)/(x_i sqrt q)`.
    pub fn bar_via_parts(&self, f: &RatFunc, i: usize) -> Result<RatFunc> {
        let nvars = self.nvars;
        let half = RatFunc::new(SparsePoly::one(nvars), SparsePoly::constant(nvars, 2)).unwrap();
        let fe = f.substitute(&self.eps[i])?;
        let fplus = f.add(&fe).mul(&half);
        let fminus = f.sub(&fe).mul(&half);
        let one = SparsePoly::one(nvars);
        let xi = SparsePoly::var(nvars, i + 1);
        let qxi = SparsePoly::monomial(nvars, shape(nvars, &[(0, 2), (i + 1, 1)]), 1);
        let a = RatFunc::new(qxi.sub(&one), qxi.mul(&one.sub(&xi))).unwrap();
        let b = RatFunc::new(one, SparsePoly::monomial(nvars, shape(nvars, &[(0, 1), (i + 1, 1)]), 1))
            .unwrap();
        let out = a
            .mul(&fplus.substitute(&self.sigma[i])?)
            .add(&b.mul(&fminus.substitute(&self.sigma[i])?));
        Ok(out.reduce(Some(&self.basis)))
    }

    /// `f|w` along a word, generators applied left to right (right action).
    pub fn bar_word(&self, f: &RatFunc, word: &[usize]) -> Result<RatFunc> {
        let mut acc = f.clone();
        for &i in word {
            acc = self.bar(&acc, i)?;
        }
        Ok(acc)
    }

    /// Closed-form cocycle `j(w, x) = sgn(w) q^{d(alpha)} x^{2 alpha}` with
    /// `alpha = rho - w^{-1} rho`, as a one-term polynomial.
    pub fn cocycle(&self, w: &WeylElement) -> SparsePoly {
        let alpha = rho_minus_w_inv_rho(&self.rs, w);
        let mut exps = vec![0 as Exp; self.nvars];
        exps[0] = (2 * alpha.height()) as Exp;
        for (k, &c) in alpha.coords.iter().enumerate() {
            exps[k + 1] = (2 * c) as Exp;
        }
        SparsePoly::monomial(self.nvars, exps, w.sign())
    }

    /// Substitution evaluating a function at the point `w x` (covariant
    /// composition of the generator maps).
    pub fn point_eval_rule(&self, w: &WeylElement) -> MonomialMap {
        self.point_rule(&w.inverse(&self.rs))
    }

    /// `Delta(x) / Delta(w x)` computed honestly by substitution, for
    /// verifying the closed form.
    pub fn delta_ratio(&self, w: &WeylElement) -> Result<RatFunc> {
        let delta = RatFunc::from_poly(self.delta.clone());
        let delta_w = delta.substitute(&self.point_eval_rule(w))?;
        delta.div(&delta_w).map(|r| r.reduce(Some(&self.basis)))
    }
}

fn shape(nvars: usize, entries: &[(usize, Exp)]) -> Vec<Exp> {
    let mut exps = vec![0; nvars];
    for &(v, e) in entries {
        exps[v] = e;
    }
    exps
}

/// `prod over positive roots (1 - q^{d(alpha)+shift} x^{2 alpha})`.
fn root_product(rs: &RootSystem, nvars: usize, shift: i64) -> SparsePoly {
    let mut acc = SparsePoly::one(nvars);
    for alpha in &rs.positive_roots {
        let m = ActionContext::root_factor_monomial(nvars, alpha, shift);
        acc = acc.mul(&SparsePoly::one(nvars).sub(&m));
    }
    acc
}

/// Cancellation factors: `1 ± t^e x^beta` for `beta` a positive root or its
/// double, plus `t ± 1`. The offset `e - d(beta)` is invariant under the
/// sigma substitutions, so only the offsets that actually occur are listed:
/// `d-2 .. d+1` for single roots (the `c_i`/`d_i` numerators and the
/// rational-function numerators) and `2d-2, 2d` for doubled roots (the `D`
/// and `Delta` factors). Monomials and integer content are handled
/// separately by `RatFunc::reduce`.
fn build_basis(rs: &RootSystem, nvars: usize) -> ReduceBasis {
    let one = SparsePoly::one(nvars);
    let t = SparsePoly::var(nvars, 0);
    let mut factors = vec![one.sub(&t), one.add(&t)];
    for alpha in &rs.positive_roots {
        let d = alpha.height();
        let mut shapes: Vec<(i64, i64)> = Vec::new(); // (multiplier, t-exponent)
        for e in [d - 2, d - 1, d, d + 1] {
            if e >= 0 {
                shapes.push((1, e));
            }
        }
        for e in [2 * d - 2, 2 * d] {
            shapes.push((2, e));
        }
        for (mult, e) in shapes {
            let mut exps = vec![0 as Exp; nvars];
            exps[0] = e as Exp;
            for (j, &k) in alpha.coords.iter().enumerate() {
                exps[j + 1] = (mult * k) as Exp;
            }
            let m = SparsePoly::monomial(nvars, exps, 1);
            factors.push(one.sub(&m));
            factors.push(one.add(&m));
        }
    }
    ReduceBasis::new(nvars, factors)
}

/// `q = 1` specialization of the whole apparatus. At `t = 1` the coefficient
/// `c_i` vanishes and the action collapses to
/// `(f|sigma_i)(x) = -f(eps_i sigma_i x)/x_i`.
pub struct QOneAction {
    pub nvars: usize,
    eps_sigma_q1: Vec<MonomialMap>,
    basis: ReduceBasis,
}

impl QOneAction {
    pub fn new(ctx: &ActionContext) -> Self {
        let nvars = ctx.nvars;
        let mut t_to_one = MonomialMap::identity(nvars);
        t_to_one.images[0] = SignedMonomial { neg: false, exps: vec![0; nvars] };
        let eps_sigma_q1 = (0..ctx.rs.rank)
            .map(|i| ctx.eps_sigma[i].then(&t_to_one))
            .collect();
        let one = SparsePoly::one(nvars);
        let mut factors = Vec::new();
        for i in 1..nvars {
            factors.push(one.sub(&SparsePoly::var(nvars, i)));
            factors.push(one.add(&SparsePoly::var(nvars, i)));
        }
        QOneAction { nvars, eps_sigma_q1, basis: ReduceBasis::new(nvars, factors) }
    }

    pub fn bar(&self, f: &RatFunc, i: usize) -> Result<RatFunc> {
        let sub = f.substitute(&self.eps_sigma_q1[i])?;
        let inv_xi = RatFunc::new(
            SparsePoly::constant(self.nvars, -1),
            SparsePoly::var(self.nvars, i + 1),
        )
        .unwrap();
        Ok(inv_xi.mul(&sub).reduce(Some(&self.basis)))
    }

    /// Cocycle at `q = 1`: `sgn(w) x^{2 alpha}`.
    pub fn cocycle(&self, rs: &RootSystem, w: &WeylElement) -> SparsePoly {
        let alpha = rho_minus_w_inv_rho(rs, w);
        let mut exps = vec![0 as Exp; self.nvars];
        for (k, &c) in alpha.coords.iter().enumerate() {
            exps[k + 1] = (2 * c) as Exp;
        }
        SparsePoly::monomial(self.nvars, exps, w.sign())
    }
}

/// Sum of signed monomials `(-1)^{l(w) + d(rho - w rho)} x^{rho - w rho}`,
/// the closed form of `f_0` at `q = 1`.
pub fn f0_q1_closed_form(
    rs: &RootSystem,
    elements: &[WeylElement],
    nvars: usize,
) -> SparsePoly {
    let mut acc = SparsePoly::zero(nvars);
    for w in elements {
        let mu = crate::rootsys::rho_minus_w_rho(rs, w);
        let sign: BigInt = if (w.length() as i64 + mu.height()) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let mut exps = vec![0 as Exp; nvars];
        for (k, &c) in mu.coords.iter().enumerate() {
            exps[k + 1] = c as Exp;
        }
        acc.add_term(exps, sign);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Family;

    fn ctx(fam: Family, rank: usize) -> ActionContext {
        ActionContext::new(RootSystem::build(fam, rank).unwrap())
    }

    #[test]
    fn sigma_rule_a2() {
        let ctx = ctx(Family::A, 2);
        let r = ctx.sigma_on_x(0);
        // x1 -> 1/(t^2 x1)
        assert_eq!(r.images[1], SignedMonomial { neg: false, exps: vec![-2, -1, 0] });
        // x2 -> t x1 x2
        assert_eq!(r.images[2], SignedMonomial { neg: false, exps: vec![1, 1, 1] });
    }

    #[test]
    fn sigma_rule_a1_and_a3_center() {
        let c1 = ctx(Family::A, 1);
        assert_eq!(c1.sigma_on_x(0).images[1], SignedMonomial { neg: false, exps: vec![-2, -1] });
        let c3 = ctx(Family::A, 3);
        let r = c3.sigma_on_x(1);
        assert_eq!(r.images[1], SignedMonomial { neg: false, exps: vec![1, 1, 1, 0] });
        assert_eq!(r.images[2], SignedMonomial { neg: false, exps: vec![-2, 0, -1, 0] });
        assert_eq!(r.images[3], SignedMonomial { neg: false, exps: vec![1, 0, 1, 1] });
    }

    #[test]
    fn eps_rule_negates_adjacent_only() {
        let ctx = ctx(Family::A, 2);
        let r = ctx.eps_on_x(0);
        assert_eq!(r.images[1], SignedMonomial { neg: false, exps: vec![0, 1, 0] });
        assert_eq!(r.images[2], SignedMonomial { neg: true, exps: vec![0, 0, 1] });
    }

    #[test]
    fn braid_relation_on_points() {
        // sigma1 sigma2 sigma1 x = sigma2 sigma1 sigma2 x in A2
        let ctx = ctx(Family::A, 2);
        let s1 = ctx.sigma_on_x(0).clone();
        let s2 = ctx.sigma_on_x(1).clone();
        // applying f(sigma_i x) repeatedly composes rules in reverse
        let lhs = s1.then(&s2).then(&s1);
        let rhs = s2.then(&s1).then(&s2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bar_of_one_closed_form() {
        // 1|sigma_i = (q x_i - 1)/(q x_i (1 - x_i))
        let ctx = ctx(Family::A, 2);
        let n = ctx.nvars;
        let one = SparsePoly::one(n);
        let out = ctx.bar(&RatFunc::one(n), 0).unwrap();
        let qx = SparsePoly::monomial(n, vec![2, 1, 0], 1);
        let expect = RatFunc::new(qx.sub(&one), qx.mul(&one.sub(&SparsePoly::var(n, 1)))).unwrap();
        assert!(out.eq_cross(&expect));
    }

    #[test]
    fn bar_is_an_involution_on_one() {
        let ctx = ctx(Family::A, 2);
        let one = RatFunc::one(ctx.nvars);
        let b = ctx.bar(&one, 0).unwrap();
        let bb = ctx.bar(&b, 0).unwrap();
        assert!(bb.eq_cross(&one));
    }

    #[test]
    fn both_bar_routes_agree() {
        let ctx = ctx(Family::A, 2);
        let n = ctx.nvars;
        // an asymmetric test function: (1 + x1 + t x2^2) / (1 - x1 x2)
        let num = SparsePoly::one(n)
            .add(&SparsePoly::var(n, 1))
            .add(&SparsePoly::monomial(n, vec![1, 0, 2], 1));
        let den = SparsePoly::one(n).sub(&SparsePoly::monomial(n, vec![0, 1, 1], 1));
        let f = RatFunc::new(num, den).unwrap();
        for i in 0..2 {
            let a = ctx.bar(&f, i).unwrap();
            let b = ctx.bar_via_parts(&f, i).unwrap();
            assert!(a.eq_cross(&b));
        }
    }

    #[test]
    fn bar_word_on_empty_word_is_identity() {
        let ctx = ctx(Family::A, 2);
        let f = RatFunc::new(
            SparsePoly::one(ctx.nvars).add(&SparsePoly::var(ctx.nvars, 1)),
            SparsePoly::one(ctx.nvars).sub(&SparsePoly::var(ctx.nvars, 2)),
        )
        .unwrap();
        assert!(ctx.bar_word(&f, &[]).unwrap().eq_cross(&f));
    }

    /// Peeling one generator off a word:
    /// `1|s_i w = g1(w x) (1|w) + g2(w x) ((1/x_i)|w)` with the even
    /// functions `g1 = (q-1)/(q(1-x_i^2))`, `g2 = (q x_i^2-1)/(q(1-x_i^2))`.
    #[test]
    fn bar_word_peeling_decomposition() {
        let ctx = ctx(Family::A, 2);
        let n = ctx.nvars;
        let rs = &ctx.rs;
        let one = SparsePoly::one(n);
        let q = SparsePoly::monomial(n, vec![2, 0, 0], 1);
        let i = 0usize;
        let w = WeylElement::from_word(rs, &[1]); // s_2, so s_1 w is reduced
        let xi2 = SparsePoly::monomial(n, vec![0, 2, 0], 1);
        let den = q.mul(&one.sub(&xi2));
        let g1 = RatFunc::new(q.sub(&one), den.clone()).unwrap();
        let g2 = RatFunc::new(q.mul(&xi2).sub(&one), den).unwrap();
        let eval_w = ctx.point_eval_rule(&w);
        let lhs = ctx.bar_word(&RatFunc::one(n), &[0, 1]).unwrap();
        let inv_xi = RatFunc::new(one.clone(), SparsePoly::var(n, i + 1)).unwrap();
        let rhs = g1
            .substitute(&eval_w)
            .unwrap()
            .mul(&ctx.bar_word(&RatFunc::one(n), &w.word).unwrap())
            .add(
                &g2.substitute(&eval_w)
                    .unwrap()
                    .mul(&ctx.bar_word(&inv_xi, &w.word).unwrap()),
            );
        assert!(lhs.eq_cross(&rhs));
    }

    #[test]
    fn cd_unit_identity() {
        // c_i(x) c_i(sigma_i x) + d_i(x) d_i(sigma_i x) = 1 and the cross
        // combination vanishes.
        let ctx = ctx(Family::A, 2);
        for i in 0..2 {
            let c = ctx.coef_c[i].clone();
            let d = ctx.coef_d[i].clone();
            let cs = c.substitute(ctx.sigma_on_x(i)).unwrap();
            let ds = d.substitute(ctx.sigma_on_x(i)).unwrap();
            assert!(c.mul(&cs).add(&d.mul(&ds)).eq_cross(&RatFunc::one(ctx.nvars)));
            assert!(c.mul(&ds).add(&d.mul(&cs)).eq_cross(&RatFunc::zero(ctx.nvars)));
        }
    }

    #[test]
    fn cocycle_generator_and_identity() {
        let ctx = ctx(Family::A, 2);
        let rs = &ctx.rs;
        let id = WeylElement::identity(2);
        assert!(ctx.cocycle(&id).is_one());
        let s1 = WeylElement::from_word(rs, &[0]);
        // j(sigma_1, x) = -q x_1^2
        assert_eq!(ctx.cocycle(&s1), SparsePoly::monomial(3, vec![2, 2, 0], -1));
        let w0 = WeylElement::from_word(rs, &[0, 1, 0]);
        // j(w_0, x) = -q^4 x_1^4 x_2^4
        assert_eq!(ctx.cocycle(&w0), SparsePoly::monomial(3, vec![8, 4, 4], -1));
    }

    #[test]
    fn cocycle_matches_delta_ratio() {
        let ctx = ctx(Family::A, 2);
        let group = crate::rootsys::WeylGroup::enumerate(&ctx.rs, 1000).unwrap();
        for w in &group.elements {
            let closed = RatFunc::from_poly(ctx.cocycle(w));
            let honest = ctx.delta_ratio(w).unwrap();
            assert!(closed.eq_cross(&honest), "cocycle mismatch at {:?}", w);
        }
    }

    #[test]
    fn monomial_action_examples() {
        let ctx = ctx(Family::A, 2);
        let rs = &ctx.rs;
        let s1 = WeylElement::from_word(rs, &[0]);
        let a1 = RootVector::simple(2, 0);
        let a2 = RootVector::simple(2, 1);
        // x^{alpha_1} at sigma_1 x: q^{-1} x_1^{-1}
        assert_eq!(ctx.monomial_action(&a1, &s1), vec![-2, -1, 0]);
        // x^{alpha_2} at sigma_1 x: t x_1 x_2
        assert_eq!(ctx.monomial_action(&a2, &s1), vec![1, 1, 1]);
    }

    #[test]
    fn delta_substitution_consistency() {
        // Delta(sigma_i x) * (-q x_i^2) = Delta(x) for A2 and A3
        for (fam, rank) in [(Family::A, 2), (Family::A, 3)] {
            let ctx = ctx(fam, rank);
            for i in 0..rank {
                let s = WeylElement::from_word(&ctx.rs, &[i]);
                let dw = RatFunc::from_poly(ctx.delta.clone())
                    .substitute(&ctx.point_rule(&s))
                    .unwrap();
                let mut exps = vec![0; ctx.nvars];
                exps[0] = 2;
                exps[i + 1] = 2;
                let j = RatFunc::from_poly(SparsePoly::monomial(ctx.nvars, exps, -1));
                assert!(dw.mul(&j).eq_cross(&RatFunc::from_poly(ctx.delta.clone())));
            }
        }
    }
}
