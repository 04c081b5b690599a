//! Construction of the W-invariant rational function.
//!
//! `f_0(x) = sum over w of j(w, x) (1|w)(x)` and `f = f_0 / Delta`. The sum
//! is computed exactly with opportunistic cancellation after every addition;
//! if the expressions outgrow the term budget the build degrades to a
//! series-first mode in which coefficient tables are still exact, obtained
//! by expanding each summand `j(w, x)(1|w)(x)` separately.

use num_bigint::BigInt;
use num_traits::One;

use crate::action::{f0_q1_closed_form, ActionContext, QOneAction};
use crate::error::{Error, Result};
use crate::poly::{poly_exact_div, MonomialMap, SignedMonomial, SparsePoly};
use crate::ratfunc::RatFunc;
use crate::rootsys::{Family, RootSystem, WeylGroup};
use crate::series::{series_expand, CoeffTable, SeriesTruncation};

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Refuse to enumerate Weyl groups larger than this.
    pub weyl_cap: u64,
    /// Maximum number of stored terms (numerator plus denominator) tolerated
    /// during the exact sum; beyond it the build falls back to series mode.
    pub term_budget: usize,
    /// Skip the exact sum entirely and build in series-first mode.
    pub force_series: bool,
    /// Wall-clock budget for the build; the exact sum degrades to series
    /// mode when it runs out (the bar chain itself must complete).
    pub wall_budget_secs: Option<u64>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            weyl_cap: 1_000_000,
            term_budget: 1_500_000,
            force_series: false,
            wall_budget_secs: None,
        }
    }
}

/// Exact artifacts of a completed build.
pub struct ExactParts {
    pub f0: RatFunc,
    pub f: RatFunc,
    /// `f * D`, certified polynomial by exact division.
    pub ppart: SparsePoly,
}

pub struct InvariantFunction {
    pub ctx: ActionContext,
    pub weyl: WeylGroup,
    /// `(1|w)` in breadth-first order, memoized on group elements.
    bar_one: Vec<RatFunc>,
    pub exact: Option<ExactParts>,
}

impl InvariantFunction {
    pub fn build(family: Family, rank: usize, opts: &BuildOptions) -> Result<InvariantFunction> {
        let rs = RootSystem::build(family, rank)?;
        let weyl = WeylGroup::enumerate(&rs, opts.weyl_cap)?;
        let ctx = ActionContext::new(rs);

        let started = std::time::Instant::now();
        let over_wall = || {
            opts.wall_budget_secs
                .is_some_and(|s| started.elapsed().as_secs() >= s.max(1))
        };
        let mut bar_one: Vec<RatFunc> = Vec::with_capacity(weyl.len());
        bar_one.push(RatFunc::one(ctx.nvars));
        for idx in 1..weyl.len() {
            let (parent, gen) = weyl.parent[idx].expect("non-identity element has a parent");
            let b = ctx.bar(&bar_one[parent], gen)?;
            if b.num().num_terms() + b.den().num_terms() > opts.term_budget {
                return Err(Error::TermBudgetExceeded {
                    budget: opts.term_budget,
                    stage: "applying the bar action",
                });
            }
            if over_wall() {
                return Err(Error::WallBudgetExceeded {
                    seconds: opts.wall_budget_secs.unwrap(),
                    stage: "applying the bar action",
                });
            }
            bar_one.push(b);
        }

        // pairwise tree reduction keeps the partial sums balanced; the
        // cancellation basis is consulted both for the common denominators
        // and after every addition
        let mut layer: Vec<RatFunc> = if opts.force_series {
            Vec::new()
        } else {
            build_cocycle_terms(&ctx, &weyl, &bar_one)
        };
        let mut exact_ok = !opts.force_series;
        'sum: while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len() / 2 + 1);
            let mut it = layer.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => {
                        let s = crate::ratfunc::add_with_basis(&a, &b, &ctx.basis)
                            .reduce(Some(&ctx.basis));
                        if s.num().num_terms() + s.den().num_terms() > opts.term_budget
                            || over_wall()
                        {
                            exact_ok = false;
                            layer = Vec::new();
                            break 'sum;
                        }
                        next.push(s);
                    }
                    None => next.push(a),
                }
            }
            layer = next;
        }
        let f0 = if exact_ok {
            layer.pop().unwrap_or_else(|| RatFunc::zero(ctx.nvars))
        } else {
            RatFunc::zero(ctx.nvars)
        };

        let exact = if exact_ok {
            let delta = RatFunc::from_poly(ctx.delta.clone());
            let f = f0.div(&delta)?.reduce(Some(&ctx.basis));
            let ppart = poly_exact_div(&f.num().mul(&ctx.dpoly), f.den())
                .map_err(|_| Error::Certification("f * D is not a polynomial"))?;
            let (n0, d0) = f.at_x_zero()?;
            if n0 != d0 {
                return Err(Error::Certification("f(0) != 1"));
            }
            Some(ExactParts { f0, f, ppart })
        } else {
            None
        };

        Ok(InvariantFunction { ctx, weyl, bar_one, exact })
    }

    pub fn rank(&self) -> usize {
        self.ctx.rs.rank
    }

    pub fn label(&self) -> String {
        self.ctx.rs.label()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn bar_one(&self, idx: usize) -> &RatFunc {
        &self.bar_one[idx]
    }

    /// Truncated expansion of `f`, exact to total degree `max_deg`. Works in
    /// both modes: in series mode the summands are expanded one by one and
    /// the division by `Delta` happens on truncations.
    pub fn series(&self, max_deg: u32) -> Result<SeriesTruncation> {
        if let Some(exact) = &self.exact {
            return series_expand(&exact.f, max_deg);
        }
        let nvars = self.ctx.nvars;
        let mut acc = SeriesTruncation::zero(nvars, max_deg);
        for (idx, w) in self.weyl.elements.iter().enumerate() {
            let term = RatFunc::from_poly(self.ctx.cocycle(w))
                .mul(&self.bar_one[idx])
                .reduce(Some(&self.ctx.basis));
            acc = acc.add(&series_expand(&term, max_deg)?);
        }
        let delta_inv = series_expand(
            &RatFunc::new(SparsePoly::one(nvars), self.ctx.delta.clone())?,
            max_deg,
        )?;
        Ok(acc.mul(&delta_inv))
    }

    /// The coefficient table `a(k_1, ..., k_r; q)` to total degree `max_deg`.
    pub fn coeff_table(&self, max_deg: u32) -> Result<CoeffTable> {
        CoeffTable::from_series(self.rank(), &self.series(max_deg)?)
    }

    /// `f * D` (exact mode only).
    pub fn ppart(&self) -> Result<&SparsePoly> {
        self.exact
            .as_ref()
            .map(|e| &e.ppart)
            .ok_or(Error::Certification("p-part requires an exact build"))
    }

    /// The p-part polynomial after the change of variables `x_i -> x_i sqrt(q)`;
    /// coefficients live in `Z[t]` and may involve odd powers of `t`.
    pub fn stable_form(&self) -> Result<SparsePoly> {
        Ok(stable_form_of(self.ppart()?))
    }

    /// `f_0(x; 1)` computed two independent ways: the closed form
    /// `sum over w of (-1)^{l(w) + d(rho - w rho)} x^{rho - w rho}` and the
    /// full construction with `t` specialized to 1 in every rule.
    pub fn f0_at_q_one(&self) -> Result<(SparsePoly, SparsePoly)> {
        let closed = f0_q1_closed_form(&self.ctx.rs, &self.weyl.elements, self.ctx.nvars);
        let q1 = QOneAction::new(&self.ctx);
        let mut bar1: Vec<RatFunc> = Vec::with_capacity(self.weyl.len());
        bar1.push(RatFunc::one(self.ctx.nvars));
        for idx in 1..self.weyl.len() {
            let (parent, gen) = self.weyl.parent[idx].unwrap();
            bar1.push(q1.bar(&bar1[parent], gen)?);
        }
        let mut f0 = RatFunc::zero(self.ctx.nvars);
        for (idx, w) in self.weyl.elements.iter().enumerate() {
            let term = RatFunc::from_poly(q1.cocycle(&self.ctx.rs, w)).mul(&bar1[idx]);
            f0 = f0.add(&term).reduce(None);
        }
        let constructed = poly_exact_div(f0.num(), f0.den())
            .map_err(|_| Error::Certification("f0 at q=1 is not a polynomial"))?;
        Ok((closed, constructed))
    }

    /// Exact invariance `f|sigma_i = f` for one generator.
    pub fn invariance_exact(&self, i: usize) -> Result<bool> {
        let exact = self
            .exact
            .as_ref()
            .ok_or(Error::Certification("exact invariance requires an exact build"))?;
        let lhs = self.ctx.bar(&exact.f, i)?;
        Ok(lhs.eq_cross(&exact.f))
    }

    /// Limiting condition pinning the construction: after setting `x_j = 0`
    /// for every `j` adjacent to `i`, `(1 - x_i) f` does not depend on `x_i`.
    pub fn limiting_exact(&self, i: usize) -> Result<bool> {
        let exact = self
            .exact
            .as_ref()
            .ok_or(Error::Certification("exact limiting check requires an exact build"))?;
        let adj: Vec<usize> = self.ctx.rs.neighbors(i).iter().map(|&j| j + 1).collect();
        let num = exact.f.num().set_vars_zero(&adj);
        let den = exact.f.den().set_vars_zero(&adj);
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let nvars = self.ctx.nvars;
        let one_minus_xi = SparsePoly::one(nvars).sub(&SparsePoly::var(nvars, i + 1));
        let g = RatFunc::new(num.mul(&one_minus_xi), den)?;
        let g_at_zero = RatFunc::new(
            g.num().set_vars_zero(&[i + 1]),
            g.den().set_vars_zero(&[i + 1]),
        )?;
        Ok(g.eq_cross(&g_at_zero))
    }

    /// `f(0) = 1` as an exact statement about the built function; in series
    /// mode the constant table entry is checked instead.
    pub fn normalized_at_origin(&self) -> Result<bool> {
        match &self.exact {
            Some(exact) => {
                let (n0, d0) = exact.f.at_x_zero()?;
                Ok(n0 == d0)
            }
            None => {
                let table = self.coeff_table(0)?;
                let c = table.get(&vec![0; self.rank()])?;
                Ok(c.eval(&BigInt::one()).is_one() && c.coeffs.len() == 1)
            }
        }
    }
}

fn build_cocycle_terms(
    ctx: &ActionContext,
    weyl: &WeylGroup,
    bar_one: &[RatFunc],
) -> Vec<RatFunc> {
    weyl.elements
        .iter()
        .enumerate()
        .map(|(idx, w)| {
            RatFunc::from_poly(ctx.cocycle(w))
                .mul(&bar_one[idx])
                .reduce(Some(&ctx.basis))
        })
        .collect()
}

/// `x_i -> x_i t` on a polynomial: each term's `t`-exponent grows by its
/// total `x`-degree.
pub fn stable_form_of(ppart: &SparsePoly) -> SparsePoly {
    let nvars = ppart.nvars();
    let mut rule = MonomialMap::identity(nvars);
    for i in 1..nvars {
        let mut exps = vec![0; nvars];
        exps[0] = 1;
        exps[i] = 1;
        rule.images[i] = SignedMonomial { neg: false, exps };
    }
    ppart.substitute(&rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn build(family: Family, rank: usize) -> InvariantFunction {
        InvariantFunction::build(family, rank, &BuildOptions::default()).unwrap()
    }

    /// Example closed form for A1: f = 1/(1 - x1).
    #[test]
    fn a1_closed_form() {
        let inv = build(Family::A, 1);
        let n = inv.ctx.nvars;
        let one = SparsePoly::one(n);
        let expect = RatFunc::new(one.clone(), one.sub(&SparsePoly::var(n, 1))).unwrap();
        assert!(inv.exact.as_ref().unwrap().f.eq_cross(&expect));
        // f0 = (1 - q x^2)/(1 - x)
        let f0_expect = RatFunc::new(
            one.sub(&SparsePoly::monomial(n, vec![2, 2], 1)),
            one.sub(&SparsePoly::var(n, 1)),
        )
        .unwrap();
        assert!(inv.exact.as_ref().unwrap().f0.eq_cross(&f0_expect));
    }

    /// A2 agrees with the closed form of the defining example.
    #[test]
    fn a2_closed_form() {
        let inv = build(Family::A, 2);
        let f = &inv.exact.as_ref().unwrap().f;
        assert!(f.eq_cross(&known_a2(inv.ctx.nvars)));
    }

    pub(crate) fn known_a2(nvars: usize) -> RatFunc {
        let one = SparsePoly::one(nvars);
        let x1 = SparsePoly::var(nvars, 1);
        let x2 = SparsePoly::var(nvars, 2);
        let num = one.sub(&x1.mul(&x2));
        let den = one
            .sub(&x1)
            .mul(&one.sub(&x2))
            .mul(&one.sub(&SparsePoly::monomial(nvars, vec![2, 2, 2], 1)));
        RatFunc::new(num, den).unwrap()
    }

    #[test]
    fn a2_ppart_and_stable_form() {
        let inv = build(Family::A, 2);
        let ppart = inv.ppart().unwrap();
        // (1 - x1 x2)(1 + x1)(1 + x2) = 1 + x1 + x2 - x1^2 x2 - x1 x2^2 - x1^2 x2^2
        assert_eq!(ppart.num_terms(), 6);
        let stable = inv.stable_form().unwrap();
        assert_eq!(stable.num_terms(), 6);
        assert_eq!(stable.coeff(&[0, 0, 0]), BigInt::from(1));
        assert_eq!(stable.coeff(&[1, 1, 0]), BigInt::from(1));
        assert_eq!(stable.coeff(&[1, 0, 1]), BigInt::from(1));
        assert_eq!(stable.coeff(&[3, 2, 1]), BigInt::from(-1));
        assert_eq!(stable.coeff(&[3, 1, 2]), BigInt::from(-1));
        // computed sign is negative; the quoted display shows +q^2 x^2 y^2
        assert_eq!(stable.coeff(&[4, 2, 2]), BigInt::from(-1));
    }

    #[test]
    fn a1_ppart_is_one_plus_x() {
        let inv = build(Family::A, 1);
        let ppart = inv.ppart().unwrap();
        let mut expect = SparsePoly::one(inv.ctx.nvars);
        expect.add_term(vec![0, 1], 1.into());
        assert_eq!(ppart, &expect);
    }

    #[test]
    fn a2_coefficients_follow_the_min_rule() {
        let inv = build(Family::A, 2);
        let table = inv.coeff_table(6).unwrap();
        // frozen values: a(0,0)=1, a(1,0)=a(0,1)=1, a(1,1)=0, a(2,0)=1, a(2,2)=q
        assert_eq!(table.get(&[0, 0]).unwrap().to_string(), "1");
        assert_eq!(table.get(&[1, 0]).unwrap().to_string(), "1");
        assert_eq!(table.get(&[0, 1]).unwrap().to_string(), "1");
        assert!(table.get(&[1, 1]).unwrap().is_zero());
        assert_eq!(table.get(&[2, 0]).unwrap().to_string(), "1");
        assert_eq!(table.get(&[0, 2]).unwrap().to_string(), "1");
        assert_eq!(table.get(&[2, 2]).unwrap().to_string(), "q");
    }

    /// The diagram flip x_i <-> x_{r+1-i} fixes f for A2 and A3 (checked
    /// only where the closed forms confirm it).
    #[test]
    fn diagram_symmetry_a2_a3() {
        for rank in [2usize, 3] {
            let inv = build(Family::A, rank);
            let f = &inv.exact.as_ref().unwrap().f;
            let n = inv.ctx.nvars;
            let mut rule = crate::poly::MonomialMap::identity(n);
            for i in 1..=rank {
                let mut exps = vec![0; n];
                exps[rank + 1 - i] = 1;
                rule.images[i] = crate::poly::SignedMonomial { neg: false, exps };
            }
            let flipped = f.substitute(&rule).unwrap();
            assert!(flipped.eq_cross(f), "flip moved f for A{rank}");
        }
    }

    #[test]
    fn a2_invariance_and_limiting() {
        let inv = build(Family::A, 2);
        for i in 0..2 {
            assert!(inv.invariance_exact(i).unwrap());
            assert!(inv.limiting_exact(i).unwrap());
        }
        assert!(inv.normalized_at_origin().unwrap());
    }

    #[test]
    fn f0_at_q_one_a1_and_a2() {
        let inv = build(Family::A, 1);
        let (closed, constructed) = inv.f0_at_q_one().unwrap();
        assert_eq!(closed, constructed);
        let mut expect = SparsePoly::one(2);
        expect.add_term(vec![0, 1], 1.into());
        assert_eq!(closed, expect);

        let inv = build(Family::A, 2);
        let (closed, constructed) = inv.f0_at_q_one().unwrap();
        assert_eq!(closed, constructed);
        // 1 + x1 + x2 - x1^2 x2 - x1 x2^2 - x1^2 x2^2
        assert_eq!(closed.num_terms(), 6);
        assert_eq!(closed.coeff(&[0, 1, 0]), BigInt::from(1));
        assert_eq!(closed.coeff(&[0, 2, 1]), BigInt::from(-1));
        assert_eq!(closed.coeff(&[0, 2, 2]), BigInt::from(-1));
        assert_eq!(closed.coeff(&[0, 1, 1]), BigInt::zero());
    }

    /// f_{A2} * Delta equals the built f0 (an example of ratfunc_arith).
    #[test]
    fn f_times_delta_is_f0() {
        let inv = build(Family::A, 2);
        let exact = inv.exact.as_ref().unwrap();
        let prod = exact.f.mul(&RatFunc::from_poly(inv.ctx.delta.clone()));
        assert!(prod.eq_cross(&exact.f0));
    }
}
