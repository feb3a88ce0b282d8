//! Buchberger's algorithm and normal forms, over grevlex.
//!
//! The zeroness procedure only needs ideal membership tests against a slowly
//! growing basis, so plain Buchberger with the coprimality and chain criteria
//! is enough; no F4/F5.

use crate::poly::{Monomial, Poly};
use crate::rational::Rat;

/// A reduced Gröbner basis: every generator monic and fully reduced against
/// the others. The zero ideal is the empty basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn empty() -> Self {
        GroebnerBasis { generators: Vec::new() }
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Remainder of `p` on division by the basis; zero iff `p` is in the ideal.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        reduce(p, &self.generators)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Whether the basis generates the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.leading().map(|(m, _)| m.is_unit()).unwrap_or(false))
    }

    /// Reduced basis of the ideal extended by one more generator. Pairs among
    /// the existing generators already reduce to zero, so only the pairs
    /// involving the new element need processing.
    pub fn extended(&self, p: &Poly) -> GroebnerBasis {
        let r = self.normal_form(p);
        if r.is_zero() {
            return self.clone();
        }
        let mut basis = self.generators.clone();
        basis.push(r.monic());
        let mut pairs = Vec::new();
        queue_pairs_with(&mut pairs, &basis, basis.len() - 1);
        complete(basis, pairs)
    }
}

/// Multivariate division: remainder of `p` modulo `divisors`.
fn reduce(p: &Poly, divisors: &[Poly]) -> Poly {
    let mut rem = Poly::zero();
    let mut work = p.clone();
    'outer: while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for d in divisors {
            if let Some((dm, dc)) = d.leading() {
                if let Some(q) = lm.div(dm) {
                    let coef = lc.clone() / dc.clone();
                    work = work.sub(&d.mul_term(&coef, &q));
                    continue 'outer;
                }
            }
        }
        // leading term irreducible: move it to the remainder
        rem = rem.add(&Poly::term(lc.clone(), lm.clone()));
        work = work.sub(&Poly::term(lc, lm));
    }
    rem
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let lcm = fm.lcm(gm);
    let qf = lcm.div(fm).unwrap();
    let qg = lcm.div(gm).unwrap();
    let one: Rat = num::One::one();
    let f_scaled = f.mul_term(&(one.clone() / fc.clone()), &qf);
    let g_scaled = g.mul_term(&(one / gc.clone()), &qg);
    f_scaled.sub(&g_scaled)
}

/// Gebauer–Möller update: fold the pairs of `basis[t]` with every earlier
/// generator into the pending set, discharging pairs by the standard B
/// (coprime leads), M (strictly smaller lcm among the new pairs), F
/// (duplicate lcm among the new pairs) and chain criteria.
fn queue_pairs_with(pairs: &mut Vec<(Monomial, usize, usize)>, basis: &[Poly], t: usize) {
    let lt = |i: usize| basis[i].leading().unwrap().0;
    let mt = lt(t);

    let mut fresh: Vec<(Monomial, usize)> = (0..t).map(|i| (lt(i).lcm(mt), i)).collect();

    // M: drop a new pair whose lcm is a proper multiple of another new lcm
    let snapshot = fresh.clone();
    fresh.retain(|(m, i)| {
        !snapshot
            .iter()
            .any(|(m2, i2)| i2 != i && m2 != m && m.div(m2).is_some())
    });

    // F + B: among new pairs sharing an lcm keep one, and none at all if any
    // member of the group has coprime leads (its S-polynomial reduces to
    // zero, and the shared lcm lets the chain argument discharge the rest)
    fresh.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut kept: Vec<(Monomial, usize)> = Vec::new();
    let mut g = 0;
    while g < fresh.len() {
        let mut h = g;
        while h < fresh.len() && fresh[h].0 == fresh[g].0 {
            h += 1;
        }
        if !fresh[g..h].iter().any(|(_, i)| lt(*i).coprime(mt)) {
            kept.push(fresh[g].clone());
        }
        g = h;
    }

    // chain criterion on the old pairs: (i, j) is redundant once lt(t)
    // divides lcm(i, j) while both mixed lcms differ from it
    pairs.retain(|(m, i, j)| {
        !(m.div(mt).is_some() && lt(*i).lcm(mt) != *m && lt(*j).lcm(mt) != *m)
    });

    pairs.extend(kept.into_iter().map(|(m, i)| (m, i, t)));
}

/// Buchberger's algorithm with the Gebauer–Möller criteria and normal
/// selection (smallest lcm first), followed by inter-reduction to the unique
/// reduced basis.
pub fn buchberger(gens: &[Poly]) -> GroebnerBasis {
    let basis: Vec<Poly> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monic())
        .collect();
    if basis.is_empty() {
        return GroebnerBasis::empty();
    }
    let mut pairs: Vec<(Monomial, usize, usize)> = Vec::new();
    for t in 1..basis.len() {
        queue_pairs_with(&mut pairs, &basis, t);
    }
    complete(basis, pairs)
}

/// Completion loop and reduction to the unique reduced basis, given a
/// generating set and the pending pairs not yet known to reduce to zero.
fn complete(mut basis: Vec<Poly>, mut pairs: Vec<(Monomial, usize, usize)>) -> GroebnerBasis {
    while !pairs.is_empty() {
        // normal selection strategy: process the smallest lcm first
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.0.cmp(&b.0))
            .map(|(idx, _)| idx)
            .unwrap();
        let (_, i, j) = pairs.swap_remove(best);
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
            queue_pairs_with(&mut pairs, &basis, basis.len() - 1);
        }
    }

    // Minimise: drop generators whose lead is divisible by another lead.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (mi, _) = basis[i].leading().unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (mj, _) = basis[j].leading().unwrap();
            if mi.div(mj).is_some() {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Poly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();

    // Inter-reduce: each generator reduced against the others.
    let mut reduced: Vec<Poly> = minimal.clone();
    loop {
        let mut changed = false;
        for i in 0..reduced.len() {
            let others: Vec<Poly> = reduced
                .iter()
                .enumerate()
                .filter_map(|(j, p)| (j != i).then(|| p.clone()))
                .collect();
            let r = reduce(&reduced[i], &others).monic();
            if r != reduced[i] {
                reduced[i] = r;
                changed = true;
            }
        }
        reduced.retain(|p| !p.is_zero());
        if !changed {
            break;
        }
    }
    reduced.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    GroebnerBasis { generators: reduced }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn already_reduced_singleton() {
        let g = buchberger(&[x().sub(&Poly::one())]);
        assert_eq!(g.generators(), &[x().sub(&Poly::one())]);
    }

    #[test]
    fn unit_ideal_from_xy_minus_one_and_x_squared() {
        // {xy - 1, x^2} generates the unit ideal
        let g = buchberger(&[x().mul(&y()).sub(&Poly::one()), x().mul(&x())]);
        assert_eq!(g.generators(), &[Poly::one()]);
        assert!(g.is_unit_ideal());
    }

    #[test]
    fn empty_is_zero_ideal() {
        let g = buchberger(&[]);
        assert!(g.generators().is_empty());
        assert_eq!(g.normal_form(&x()), x());
    }

    #[test]
    fn normal_form_cases() {
        let g = buchberger(&[x().sub(&Poly::one())]);
        assert_eq!(g.normal_form(&x().mul(&x())), Poly::one());
        let g2 = buchberger(&[y()]);
        assert_eq!(g2.normal_form(&x().add(&y())), x());
    }

    #[test]
    fn membership_of_multiples() {
        let p = x().mul(&y()).add(&y().scale(&rat_int(3)));
        let g = buchberger(&[p.clone()]);
        let q = x().mul(&x()).sub(&y());
        assert!(g.contains(&p.mul(&q)));
        assert!(!g.contains(&x()));
    }

    #[test]
    fn extended_matches_batch() {
        let gens = vec![x().mul(&y()).sub(&Poly::one()), x().mul(&x()).sub(&y())];
        let extra = y().mul(&y()).sub(&x());
        let incremental = buchberger(&gens).extended(&extra);
        let mut all = gens.clone();
        all.push(extra);
        assert_eq!(incremental, buchberger(&all));
        // extending by a member is a no-op
        let g = buchberger(&gens);
        assert_eq!(g.extended(&gens[0]), g);
    }

    #[test]
    fn idempotence() {
        let gens = vec![x().mul(&y()).sub(&Poly::one()), x().mul(&x()).sub(&y())];
        let g1 = buchberger(&gens);
        let g2 = buchberger(g1.generators());
        assert_eq!(g1, g2);
    }
}
