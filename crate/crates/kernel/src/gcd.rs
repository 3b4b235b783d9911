//! Multivariate polynomial gcd over the rationals (recursive primitive remainder
//! sequences) and square-free decomposition.

use std::collections::BTreeSet;

use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::symbol::Symbol;

/// Normalized gcd: integer primitive with positive leading coefficient.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = strip_monomial(a, &ma);
    let b1 = strip_monomial(b, &mb);
    let core = gcd_core(&a1, &b1);
    core.mul_monomial(&mg).normalized()
}

pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
    let mut g = Polynomial::zero();
    for p in polys {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn strip_monomial(p: &Polynomial, m: &Monomial) -> Polynomial {
    if m.is_one() {
        p.clone()
    } else {
        p.div_exact(&Polynomial::term(m.clone(), crate::Q::from_integer(1.into())))
            .expect("monomial content divides")
    }
}

/// gcd of polynomials without monomial content.
fn gcd_core(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let an = a.normalized();
    let bn = b.normalized();
    if an == bn {
        return an;
    }
    if an.len() <= bn.len() {
        if bn.div_exact(&an).is_some() {
            return an;
        }
    } else if an.div_exact(&bn).is_some() {
        return bn;
    }
    let va = an.symbols();
    let vb = bn.symbols();
    if va.is_disjoint(&vb) {
        return Polynomial::one();
    }
    // Variables present in only one operand: the gcd divides every coefficient
    // with respect to them.
    let only_a: BTreeSet<Symbol> = va.difference(&vb).cloned().collect();
    if !only_a.is_empty() {
        return gcd_with_coeffs(&bn, &an, &only_a);
    }
    let only_b: BTreeSet<Symbol> = vb.difference(&va).cloned().collect();
    if !only_b.is_empty() {
        return gcd_with_coeffs(&an, &bn, &only_b);
    }
    let x = *va
        .iter()
        .min_by_key(|&&s| (an.degree_in(s).max(bn.degree_in(s)), an.degree_in(s) + bn.degree_in(s)))
        .expect("non-constant");
    gcd_prs(&an, &bn, x)
}

fn gcd_with_coeffs(start: &Polynomial, p: &Polynomial, vars: &BTreeSet<Symbol>) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p.coeffs_wrt(vars).into_values().collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = start.clone();
    for c in &coeffs {
        g = gcd(&g, c);
        if g.is_constant() {
            return Polynomial::one();
        }
    }
    g
}

/// Content of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Polynomial, x: Symbol) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p.coeffs_in(x).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    gcd_many(coeffs.iter())
}

fn primitive_in(p: &Polynomial, x: Symbol) -> (Polynomial, Polynomial) {
    let c = content_in(p, x);
    let pp = if c.is_constant() {
        p.normalized()
    } else {
        p.div_exact(&c).expect("content divides").normalized()
    };
    (c, pp)
}

fn gcd_prs(a: &Polynomial, b: &Polynomial, x: Symbol) -> Polynomial {
    let (ca, pa) = primitive_in(a, x);
    let (cb, pb) = primitive_in(b, x);
    let c = gcd(&ca, &cb);
    let (mut r0, mut r1) = if pa.degree_in(x) >= pb.degree_in(x) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let g = loop {
        if r1.degree_in(x) == 0 {
            break Polynomial::one();
        }
        let r = pseudo_rem(&r0, &r1, x);
        if r.is_zero() {
            break r1;
        }
        if r.degree_in(x) == 0 {
            break Polynomial::one();
        }
        let (_, rp) = primitive_in(&r, x);
        r0 = r1;
        r1 = rp;
    };
    (&c * &g).normalized()
}

/// Pseudo-remainder of `a` by `b` in the variable `x` (up to a nonzero factor).
pub fn pseudo_rem(a: &Polynomial, b: &Polynomial, x: Symbol) -> Polynomial {
    let bc = b.coeffs_in(x);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut r = a.coeffs_in(x);
    trim(&mut r);
    while !r.is_empty() && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (k, bk) in bc.iter().enumerate() {
            if bk.is_zero() {
                continue;
            }
            let t = &lr * bk;
            r[k + shift] = &r[k + shift] - &t;
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        trim(&mut r);
        // keep coefficient growth in check
        if r.len() > 1 {
            let g = gcd_many(r.iter().filter(|c| !c.is_zero()));
            if !g.is_constant() {
                for c in r.iter_mut() {
                    *c = c.div_exact(&g).expect("common factor divides");
                }
            }
        }
    }
    Polynomial::from_coeffs_in(x, &r)
}

fn trim(v: &mut Vec<Polynomial>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Square-free decomposition: `p = c * prod f_i^i` with each `f_i` square-free,
/// pairwise coprime, integer primitive, positive leading coefficient.
/// Returns the constant `c` (sign and content) and the list of `(f_i, i)`.
pub fn squarefree(p: &Polynomial) -> (crate::Q, Vec<(Polynomial, u32)>) {
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    if p.is_constant() {
        return (p.constant_value().unwrap(), factors);
    }
    let unit = p.leading_coeff() / p.normalized().leading_coeff();
    let mut rest = p.normalized();
    let m = rest.monomial_content();
    if !m.is_one() {
        for &(s, e) in m.pairs() {
            push_factor(&mut factors, Polynomial::var(s), e);
        }
        rest = strip_monomial(&rest, &m);
    }
    squarefree_rec(&rest, &mut factors);
    factors.sort();
    (unit, factors)
}

fn push_factor(out: &mut Vec<(Polynomial, u32)>, f: Polynomial, e: u32) {
    if f.is_constant() {
        return;
    }
    let f = f.normalized();
    for item in out.iter_mut() {
        if item.0 == f {
            item.1 += e;
            return;
        }
    }
    out.push((f, e));
}

fn squarefree_rec(p: &Polynomial, out: &mut Vec<(Polynomial, u32)>) {
    if p.is_constant() {
        return;
    }
    let x = *p
        .symbols()
        .iter()
        .min_by_key(|&&s| p.degree_in(s))
        .expect("non-constant");
    let (cont, pp) = primitive_in(p, x);
    squarefree_rec(&cont, out);
    // Yun's algorithm in x
    let d = pp.diff(x);
    let c = gcd(&pp, &d);
    if c.is_constant() {
        push_factor(out, pp, 1);
        return;
    }
    let mut w = pp.div_exact(&c).expect("gcd divides");
    let mut y = d.div_exact(&c).expect("gcd divides");
    let mut z = &y - &w.diff(x);
    let mut i = 1;
    while !w.is_constant() {
        let g = gcd(&w, &z);
        if !g.is_constant() {
            push_factor(out, g.clone(), i);
        }
        w = w.div_exact(&g).expect("gcd divides");
        y = z.div_exact(&g).expect("gcd divides");
        z = &y - &w.diff(x);
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::SymbolKind;

    fn v(n: &str) -> Polynomial {
        Polynomial::var(Symbol::new(n, SymbolKind::Parameter))
    }

    #[test]
    fn gcd_of_products() {
        let (x, y, z) = (v("gcd_x"), v("gcd_y"), v("gcd_z"));
        let f = &(&x * &y) + &Polynomial::integer(1);
        let g = &x - &z;
        let h = &y + &z;
        let a = &(&f * &g) * &f;
        let b = &(&f * &h) * &x;
        assert_eq!(gcd(&a, &b), f.normalized());
        assert_eq!(gcd(&g, &h), Polynomial::one());
    }

    #[test]
    fn gcd_with_monomial_content() {
        let (x, y) = (v("gcd_x"), v("gcd_y"));
        let a = &(&x * &x) * &(&x + &y);
        let b = &(&x * &y) * &(&x + &y);
        assert_eq!(gcd(&a, &b), (&x * &(&x + &y)).normalized());
    }

    #[test]
    fn squarefree_detects_square() {
        let (x, y) = (v("gcd_x"), v("gcd_y"));
        let f = &(&x * &x) + &(&y * &y);
        let p = &(&f * &f) * &(&x - &y);
        let (c, fac) = squarefree(&p.scale(&crate::Q::from_integer((-3).into())));
        assert_eq!(c, crate::Q::from_integer((-3).into()));
        assert!(fac.contains(&(f.normalized(), 2)));
        assert!(fac.contains(&((&x - &y).normalized(), 1)));
    }
}
