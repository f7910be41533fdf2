//! Existence test for a reduced fraction with bounded denominator inside an
//! interval, by descending the Stern-Brocot tree.
//!
//! A grid row covers the levels `qa..=qb`, so a column `[u, v)` of that row
//! is occupied iff some reduced `m/q` with `qa <= q <= qb` lies in it. The
//! descent finds the simplest fraction `M` of the interval; if its
//! denominator is already at least `qa` we are done, otherwise every other
//! candidate sits in one of the two subtrees hanging off `M`, and each
//! subtree reduces to a lattice-point search in a cone.

use super::grid::Q;
use crate::numtheory::gcd_u64;

#[derive(Debug, Clone, Copy)]
struct Node {
    p: i128,
    q: i128,
}

impl Node {
    fn add(self, k: i128, other: Node) -> Node {
        Node {
            p: self.p + k * other.p,
            q: self.q + k * other.q,
        }
    }
}

#[inline]
fn below(x: Node, u: Q, u_closed: bool) -> bool {
    let (a, b) = (x.p * u.d, u.n * x.q);
    a < b || (a == b && !u_closed)
}

#[inline]
fn above(x: Node, v: Q, v_closed: bool) -> bool {
    let (a, b) = (x.p * v.d, v.n * x.q);
    a > b || (a == b && !v_closed)
}

fn cmp(a: Q, b: Q) -> std::cmp::Ordering {
    (a.n * b.d).cmp(&(b.n * a.d))
}

/// Is there a reduced `m/q` with `0 < m/q < 1`, `qa <= q <= qb`, inside the
/// interval from `u` to `v` (endpoint inclusion given by the flags)?
pub(crate) fn reduced_fraction_in(u: Q, u_closed: bool, v: Q, v_closed: bool, qa: u64, qb: u64) -> bool {
    use std::cmp::Ordering::*;
    let qa = qa.max(2) as i128;
    let qb = qb as i128;
    if qa > qb {
        return false;
    }
    let zero = Q { n: 0, d: 1 };
    let one = Q { n: 1, d: 1 };
    if cmp(u, one) != Less || cmp(v, zero) != Greater {
        return false;
    }
    match cmp(u, v) {
        Greater => return false,
        Equal if !(u_closed && v_closed) => return false,
        _ => {}
    }
    let mut l = Node { p: 0, q: 1 };
    let mut r = Node { p: 1, q: 1 };
    loop {
        let m = l.add(1, r);
        if m.q > qb {
            return false;
        }
        if below(m, u, u_closed) {
            // Skip along l + i*r while the nodes stay below u.
            let c = r.p * u.d - u.n * r.q;
            let e = u.n * l.q - l.p * u.d;
            let k = if u_closed { (e - 1) / c } else { e / c };
            let cap = (qb - l.q) / r.q + 1;
            l = l.add(k.min(cap), r);
        } else if above(m, v, v_closed) {
            let c = v.n * l.q - l.p * v.d;
            let e = r.p * v.d - v.n * r.q;
            let k = if v_closed { (e - 1) / c } else { e / c };
            let cap = (qb - r.q) / l.q + 1;
            r = r.add(k.min(cap), l);
        } else {
            if m.q >= qa {
                return true;
            }
            // Fractions of (l, m) are s*l + t*m; they lie in the interval iff
            // t*beta >= s*alpha.
            let alpha = u.n * l.q - l.p * u.d;
            let beta = m.p * u.d - u.n * m.q;
            if cone_search(l.q, m.q, alpha, beta, !u_closed, qa, qb) {
                return true;
            }
            // Fractions of (m, r) are s*m + t*r; they lie in the interval iff
            // s*alpha' >= t*beta'.
            let alpha_r = v.n * m.q - m.p * v.d;
            let beta_r = r.p * v.d - v.n * r.q;
            return cone_search(r.q, m.q, beta_r, alpha_r, !v_closed, qa, qb);
        }
    }
}

/// Coprime `x, y >= 1` with `qa <= x*a + y*b <= qb` and `y*beta >= x*alpha`
/// (strict when `strict`), where `alpha, beta >= 0`.
fn cone_search(a: i128, b: i128, alpha: i128, beta: i128, strict: bool, qa: i128, qb: i128) -> bool {
    debug_assert!(alpha >= 0 && beta >= 0);
    let cone = if beta == 0 {
        if alpha == 0 && !strict {
            None
        } else {
            return false;
        }
    } else if alpha == 0 {
        None
    } else {
        Some((alpha, beta))
    };
    if a + b > qb {
        return false;
    }
    let y_hi = (qb - a) / b;
    let mut y_lo = 1;
    if let Some((alpha, beta)) = cone {
        // x = 1 must be admissible, and the largest admissible x must reach qa.
        let first = if strict {
            alpha / beta + 1
        } else {
            (alpha + beta - 1) / beta
        };
        y_lo = y_lo.max(first).max(qa * alpha / (b * alpha + a * beta));
    }
    for y in y_lo..=y_hi {
        let lo_rest = qa - y * b;
        let x_lo = if lo_rest <= a { 1 } else { (lo_rest + a - 1) / a };
        let mut x_hi = (qb - y * b) / a;
        if let Some((alpha, beta)) = cone {
            let lim = if strict {
                (y * beta - 1) / alpha
            } else {
                y * beta / alpha
            };
            x_hi = x_hi.min(lim);
        }
        let yy = y as u64;
        for x in x_lo..=x_hi {
            if gcd_u64(x as u64, yy) == 1 {
                return true;
            }
        }
    }
    false
}
