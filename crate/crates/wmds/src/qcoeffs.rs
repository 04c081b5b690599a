//! Global Dirichlet-series coefficients over the rationals.
//!
//! Specialization to `K = Q`, `S = {2, infinity}`: arguments are odd positive
//! integers, the residue symbol is the Jacobi symbol, and the coefficient
//! `H(m_1, ..., m_r)` is assembled from prime-power blocks
//! `H(p^{k_1}, ..., p^{k_r}) = a(k_1, ..., k_r; p)` by twisted
//! multiplicativity. The bilinear twist pairs adjacent indices `i < j` in the
//! chosen labeling; relabeling changes individual values by quadratic
//! reciprocity signs, so the labeling is part of the context.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::invariant::InvariantFunction;
use crate::series::CoeffTable;

/// Jacobi symbol `(a/n)` for odd positive `n`; zero when `gcd(a, n) > 1`.
pub fn jacobi(a: i64, n: u64) -> Result<i32> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::BadModulus { value: n as i64 });
    }
    let mut num = a.rem_euclid(n as i64) as u64;
    let mut den = n;
    let mut acc = 1i32;
    loop {
        num %= den;
        if num == 0 {
            return Ok(if den == 1 { acc } else { 0 });
        }
        while num.is_multiple_of(2) {
            num /= 2;
            if den % 8 == 3 || den % 8 == 5 {
                acc = -acc;
            }
        }
        if num == 1 {
            return Ok(acc);
        }
        // both odd now; quadratic reciprocity
        if num % 4 == 3 && den % 4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut num, &mut den);
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization; inputs are desk-scale.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Context for coefficient generation: the root system's adjacency with its
/// fixed labeling plus a coefficient table deep enough for the requested
/// arguments.
pub struct HContext {
    pub rank: usize,
    pub label: String,
    pub adjacency: Vec<Vec<bool>>,
    pub table: CoeffTable,
}

impl HContext {
    pub fn new(inv: &InvariantFunction, depth: u32) -> Result<HContext> {
        Ok(HContext {
            rank: inv.rank(),
            label: inv.label(),
            adjacency: inv.ctx.rs.adjacency.clone(),
            table: inv.coeff_table(depth)?,
        })
    }

    pub fn from_table(label: String, adjacency: Vec<Vec<bool>>, table: CoeffTable) -> HContext {
        HContext { rank: table.rank, label, adjacency, table }
    }

    /// `H(p^{k_1}, ..., p^{k_r}) = a(k_1, ..., k_r; q = p)`.
    pub fn h_prime_power(&self, p: u64, k: &[u32]) -> Result<BigInt> {
        if p.is_multiple_of(2) {
            return Err(Error::BadModulus { value: p as i64 });
        }
        self.table.eval(k, &BigInt::from(p))
    }

    /// `H(m_1, ..., m_r)` for odd positive arguments, by splitting the joint
    /// support into prime blocks and applying the twist
    /// `prod over adjacent i < j of (A_i/B_j)(B_i/A_j)` between blocks.
    pub fn h_general(&self, m: &[u64]) -> Result<BigInt> {
        assert_eq!(m.len(), self.rank);
        for &mi in m {
            if mi == 0 || mi % 2 == 0 {
                return Err(Error::BadModulus { value: mi as i64 });
            }
        }
        let mut primes: Vec<u64> = Vec::new();
        for &mi in m {
            for (p, _) in factorize(mi) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort_unstable();
        // blocks[b][i] = p_b ^ ord_{p_b}(m_i)
        let mut blocks: Vec<Vec<u64>> = Vec::with_capacity(primes.len());
        let mut exps: Vec<Vec<u32>> = Vec::with_capacity(primes.len());
        for &p in &primes {
            let mut block = Vec::with_capacity(self.rank);
            let mut ke = Vec::with_capacity(self.rank);
            for &mi in m {
                let mut v = mi;
                let mut e = 0u32;
                while v % p == 0 {
                    v /= p;
                    e += 1;
                }
                block.push(p.pow(e));
                ke.push(e);
            }
            blocks.push(block);
            exps.push(ke);
        }
        let mut acc = BigInt::one();
        for (b, &p) in primes.iter().enumerate() {
            acc *= self.h_prime_power(p, &exps[b])?;
            for c in b + 1..primes.len() {
                acc *= BigInt::from(self.twist(&blocks[b], &blocks[c])?);
            }
        }
        Ok(acc)
    }

    /// The bilinear factor of twisted multiplicativity between two coprime
    /// argument tuples.
    pub fn twist(&self, a: &[u64], b: &[u64]) -> Result<i32> {
        let mut acc = 1i32;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.adjacency[i][j] {
                    acc *= jacobi(a[i] as i64, b[j])?;
                    acc *= jacobi(b[i] as i64, a[j])?;
                }
            }
        }
        Ok(acc)
    }

    /// Closed form for pairwise coprime arguments:
    /// `prod over adjacent i < j of (m_i/m_j)`.
    pub fn h_pairwise_coprime(&self, m: &[u64]) -> Result<BigInt> {
        let mut acc = 1i32;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.adjacency[i][j] {
                    acc *= jacobi(m[i] as i64, m[j])?;
                }
            }
        }
        Ok(BigInt::from(acc))
    }

    /// Stream of coefficient records over all odd tuples bounded by `bound`,
    /// ascending lexicographically.
    pub fn records(&self, bound: u64) -> CoeffStream<'_> {
        CoeffStream { ctx: self, bound, cur: Some(vec![1; self.rank]) }
    }

    /// CSV export; the header names the root system and labeling.
    pub fn write_csv<W: Write>(&self, bound: u64, w: &mut W) -> Result<()> {
        writeln!(
            w,
            "# system {} with path labeling x1..x{}; K=Q, S={{2,oo}}; arguments odd positive",
            self.label, self.rank
        )?;
        let ms: Vec<String> = (1..=self.rank).map(|i| format!("m{i}")).collect();
        writeln!(w, "{},H", ms.join(","))?;
        for rec in self.records(bound) {
            let (m, h) = rec?;
            let cols: Vec<String> = m.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{},{}", cols.join(","), h)?;
        }
        Ok(())
    }
}

pub struct CoeffStream<'a> {
    ctx: &'a HContext,
    bound: u64,
    cur: Option<Vec<u64>>,
}

impl Iterator for CoeffStream<'_> {
    type Item = Result<(Vec<u64>, BigInt)>;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.cur.take()?;
        let value = self.ctx.h_general(&cur);
        // advance the odd odometer
        let mut next = cur.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if next[pos] + 2 <= self.bound {
                next[pos] += 2;
                for digit in next.iter_mut().skip(pos + 1) {
                    *digit = 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(value.map(|v| (cur, v)))
    }
}

/// Brute-force quadratic-residue oracle for the Jacobi symbol: the product
/// of Legendre symbols computed by counting squares, independent of the
/// reciprocity-based implementation.
pub fn jacobi_oracle(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1 && n > 0);
    let mut acc = 1i32;
    for (p, e) in factorize(n) {
        let ap = a.rem_euclid(p as i64) as u64;
        let legendre = if ap == 0 {
            0
        } else {
            let mut is_square = false;
            for x in 0..p {
                if (x * x) % p == ap {
                    is_square = true;
                    break;
                }
            }
            if is_square {
                1
            } else {
                -1
            }
        };
        for _ in 0..e {
            acc *= legendre;
        }
    }
    acc
}

/// Observed export-bound exponent: the least `C` with
/// `|H(m)| <= (m_1 ... m_r)^C` over the emitted records, reported alongside
/// the stream.
pub fn observed_bound_exponent(records: &BTreeMap<Vec<u64>, BigInt>) -> f64 {
    let mut c: f64 = 0.0;
    for (m, h) in records {
        let prod: f64 = m.iter().map(|&v| v as f64).product();
        if prod > 1.0 {
            let mag = h.magnitude().to_string().parse::<f64>().unwrap_or(f64::MAX);
            if mag > 1.0 {
                c = c.max(mag.ln() / prod.ln());
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::BuildOptions;
    use crate::rootsys::Family;

    fn a2_ctx(depth: u32) -> HContext {
        let inv = InvariantFunction::build(Family::A, 2, &BuildOptions::default()).unwrap();
        HContext::new(&inv, depth).unwrap()
    }

    #[test]
    fn jacobi_basics() {
        for n in [1u64, 3, 5, 7, 9, 15, 21, 45] {
            assert_eq!(jacobi(1, n).unwrap(), 1);
        }
        assert_eq!(jacobi(3, 5).unwrap(), -1);
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(0, 3).unwrap(), 0);
        assert_eq!(jacobi(-1, 3).unwrap(), -1);
        assert_eq!(jacobi(-1, 5).unwrap(), 1);
        assert!(jacobi(3, 4).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn jacobi_matches_residue_counting_oracle() {
        for n in (3..=99u64).step_by(2) {
            for a in 0..n {
                assert_eq!(
                    jacobi(a as i64, n).unwrap(),
                    jacobi_oracle(a as i64, n),
                    "disagreement at ({a}/{n})"
                );
            }
        }
    }

    #[test]
    fn prime_power_values() {
        let ctx = a2_ctx(8);
        assert_eq!(ctx.h_prime_power(3, &[2, 2]).unwrap(), BigInt::from(3));
        assert_eq!(ctx.h_prime_power(5, &[1, 1]).unwrap(), BigInt::from(0));
        assert_eq!(ctx.h_prime_power(7, &[0, 0]).unwrap(), BigInt::from(1));
        assert!(matches!(
            ctx.h_prime_power(3, &[5, 5]),
            Err(Error::DegreeShortfall { .. })
        ));
    }

    #[test]
    fn h_general_examples() {
        let ctx = a2_ctx(8);
        assert_eq!(ctx.h_general(&[3, 5]).unwrap(), BigInt::from(-1));
        assert_eq!(ctx.h_general(&[9, 25]).unwrap(), BigInt::from(1));
        assert!(ctx.h_general(&[2, 3]).is_err());
    }

    #[test]
    fn pairwise_coprime_closed_form_matches() {
        let ctx = a2_ctx(8);
        let vals = [1u64, 3, 5, 7, 11, 13, 15, 21, 33, 35];
        for &m1 in &vals {
            for &m2 in &vals {
                if num_integer::gcd(m1, m2) != 1 {
                    continue;
                }
                assert_eq!(
                    ctx.h_general(&[m1, m2]).unwrap(),
                    ctx.h_pairwise_coprime(&[m1, m2]).unwrap(),
                    "at ({m1},{m2})"
                );
            }
        }
    }

    #[test]
    fn export_stream_is_lexicographic_and_counts() {
        let ctx = a2_ctx(8);
        let recs: Vec<_> = ctx.records(5).map(|r| r.unwrap()).collect();
        assert_eq!(recs.len(), 9);
        assert_eq!(recs[0].0, vec![1, 1]);
        assert_eq!(recs[0].1, BigInt::from(1));
        let m35 = recs.iter().find(|(m, _)| m == &vec![3, 5]).unwrap();
        assert_eq!(m35.1, BigInt::from(-1));
        // (3,3): single prime block, a(1,1;3) = 0
        let m33 = recs.iter().find(|(m, _)| m == &vec![3, 3]).unwrap();
        assert_eq!(m33.1, BigInt::from(0));
        let sorted: Vec<_> = {
            let mut v = recs.clone();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        assert_eq!(recs, sorted);
    }

    #[test]
    fn path_product_along_a3() {
        // pairwise coprime odd triples reduce to the product of symbols
        // along the path: (m1/m2)(m2/m3)
        let inv = InvariantFunction::build(Family::A, 3, &BuildOptions::default()).unwrap();
        let ctx = HContext::new(&inv, 8).unwrap();
        for (m1, m2, m3) in [(3u64, 5, 7), (1, 9, 25), (5, 21, 11), (15, 7, 13)] {
            let want = BigInt::from(
                jacobi(m1 as i64, m2).unwrap() * jacobi(m2 as i64, m3).unwrap(),
            );
            assert_eq!(ctx.h_general(&[m1, m2, m3]).unwrap(), want, "({m1},{m2},{m3})");
        }
    }

    #[test]
    fn export_record_with_repeated_prime() {
        // (9,3) is a single prime block: H(3^2, 3^1) = a(2,1; 3), and the
        // minimum of (2,1) is odd, so the coefficient vanishes
        let ctx = a2_ctx(8);
        let recs: Vec<_> = ctx.records(9).map(|r| r.unwrap()).collect();
        let rec = recs.iter().find(|(m, _)| m == &vec![9, 3]).unwrap();
        assert_eq!(rec.1, BigInt::from(0));
        let rec = recs.iter().find(|(m, _)| m == &vec![9, 5]).unwrap();
        // blocks (9,1) and (1,5): a(2,0;3) * a(0,1;5) * (9/5) = 1
        assert_eq!(rec.1, BigInt::from(1));
    }

    #[test]
    fn twisted_multiplicativity_against_direct_recomputation() {
        let ctx = a2_ctx(12);
        let odd = [1u64, 3, 5, 7, 9, 11, 15, 21, 25, 27, 35, 45];
        for &m1 in &odd {
            for &m2 in &odd {
                for &n1 in &[1u64, 7, 11, 13] {
                    for &n2 in &[1u64, 13, 17, 19] {
                        if num_integer::gcd(m1 * m2, n1 * n2) != 1 {
                            continue;
                        }
                        let lhs = ctx.h_general(&[m1 * n1, m2 * n2]).unwrap();
                        let rhs = ctx.h_general(&[m1, m2]).unwrap()
                            * ctx.h_general(&[n1, n2]).unwrap()
                            * BigInt::from(ctx.twist(&[m1, m2], &[n1, n2]).unwrap());
                        assert_eq!(lhs, rhs, "at ({m1},{m2})*({n1},{n2})");
                    }
                }
            }
        }
    }
}
