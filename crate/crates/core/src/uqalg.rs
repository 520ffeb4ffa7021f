//! Word-level model of the quantized enveloping algebra: formal products of
//! generators E_r, F_r and group-likes L_omega with complex scalars, plus the
//! Hopf-algebra operations on them. No relations are imposed at this level;
//! words are compared by evaluating them in representations.

use crate::roots::{Rat, RootDatum, Weight};
use num::Zero;
use num_complex::Complex64;
use std::collections::HashMap;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Sym {
    E(usize),
    F(usize),
    L(Weight),
}

/// Scalar multiple of a product of generator symbols. Normal form merges
/// adjacent group-likes and drops L_0, so equal words compare equal.
#[derive(Clone, Debug)]
pub struct GenWord {
    pub scalar: Complex64,
    pub factors: Vec<Sym>,
}

impl GenWord {
    pub fn one(scalar: Complex64) -> GenWord {
        GenWord {
            scalar,
            factors: Vec::new(),
        }
    }

    pub fn gen(sym: Sym) -> GenWord {
        GenWord {
            scalar: Complex64::new(1.0, 0.0),
            factors: vec![sym],
        }
    }

    pub fn from_factors(scalar: Complex64, factors: Vec<Sym>) -> GenWord {
        GenWord { scalar, factors }.normalized()
    }

    fn normalized(mut self) -> GenWord {
        let mut out: Vec<Sym> = Vec::with_capacity(self.factors.len());
        for sym in self.factors.drain(..) {
            match (&sym, out.last_mut()) {
                (Sym::L(w), Some(Sym::L(prev))) => {
                    *prev = prev.add(w);
                }
                _ => out.push(sym),
            }
        }
        out.retain(|s| !matches!(s, Sym::L(w) if w.is_zero()));
        GenWord {
            scalar: self.scalar,
            factors: out,
        }
    }

    pub fn mul(&self, other: &GenWord) -> GenWord {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        GenWord::from_factors(self.scalar * other.scalar, factors)
    }

    /// Net weight of the word: E_r adds alpha_r, F_r subtracts it.
    pub fn weight(&self, datum: &RootDatum) -> Weight {
        let mut w = Weight::zero(datum.rank);
        for s in &self.factors {
            match s {
                Sym::E(r) => w = w.add(&datum.alpha(*r)),
                Sym::F(r) => w = w.sub(&datum.alpha(*r)),
                Sym::L(_) => {}
            }
        }
        w
    }
}

/// Finite sum of generator words in normal form.
#[derive(Clone, Debug, Default)]
pub struct WordSum {
    pub terms: Vec<GenWord>,
}

impl WordSum {
    pub fn zero() -> WordSum {
        WordSum { terms: Vec::new() }
    }

    pub fn one() -> WordSum {
        WordSum::from_word(GenWord::one(Complex64::new(1.0, 0.0)))
    }

    pub fn from_word(w: GenWord) -> WordSum {
        WordSum { terms: vec![w] }.collected()
    }

    pub fn gen(sym: Sym) -> WordSum {
        WordSum::from_word(GenWord::gen(sym))
    }

    pub fn from_words(terms: Vec<GenWord>) -> WordSum {
        WordSum { terms }.collected()
    }

    fn collected(self) -> WordSum {
        let mut map: HashMap<Vec<Sym>, Complex64> = HashMap::new();
        let mut order: Vec<Vec<Sym>> = Vec::new();
        for t in self.terms {
            let t = t.normalized();
            match map.entry(t.factors.clone()) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += t.scalar;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(t.scalar);
                    order.push(t.factors);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|f| {
                let s = map[&f];
                (s.norm() > 0.0).then(|| GenWord { scalar: s, factors: f })
            })
            .collect();
        WordSum { terms }
    }

    pub fn add(&self, other: &WordSum) -> WordSum {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        WordSum { terms }.collected()
    }

    pub fn scale(&self, c: Complex64) -> WordSum {
        WordSum {
            terms: self
                .terms
                .iter()
                .map(|t| GenWord {
                    scalar: t.scalar * c,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
        .collected()
    }

    pub fn mul(&self, other: &WordSum) -> WordSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        WordSum { terms }.collected()
    }

    pub fn sub(&self, other: &WordSum) -> WordSum {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }
}

/// Sum of pure tensors of words, for (iterated) coproducts.
#[derive(Clone, Debug)]
pub struct MultiWord {
    pub scalar: Complex64,
    pub legs: Vec<Vec<Sym>>,
}

#[derive(Clone, Debug)]
pub struct MultiWordSum {
    pub nlegs: usize,
    pub terms: Vec<MultiWord>,
}

fn generator_coproduct(datum: &RootDatum, sym: &Sym, nlegs: usize) -> Vec<MultiWord> {
    // Iterated coproduct of a single generator across nlegs tensor legs.
    // Group-likes spread to every leg; E_r and F_r appear on one leg k with
    // L_{alpha_r} on the legs after it and L_{alpha_r}^{-1} on those before.
    let one = Complex64::new(1.0, 0.0);
    match sym {
        Sym::L(w) => vec![MultiWord {
            scalar: one,
            legs: vec![vec![Sym::L(w.clone())]; nlegs],
        }],
        Sym::E(r) | Sym::F(r) => {
            let alpha = datum.alpha(*r);
            (0..nlegs)
                .map(|k| {
                    let legs = (0..nlegs)
                        .map(|j| {
                            if j < k {
                                vec![Sym::L(alpha.neg())]
                            } else if j == k {
                                vec![sym.clone()]
                            } else {
                                vec![Sym::L(alpha.clone())]
                            }
                        })
                        .collect();
                    MultiWord { scalar: one, legs }
                })
                .collect()
        }
    }
}

/// Iterated coproduct with `nlegs` tensor legs (nlegs = 2 is the coproduct,
/// nlegs = 1 the identity, nlegs = 0 the counit).
pub fn iterated_coproduct(datum: &RootDatum, x: &WordSum, nlegs: usize) -> MultiWordSum {
    assert!(nlegs >= 1, "use counit for zero legs");
    let mut terms: Vec<MultiWord> = Vec::new();
    for word in &x.terms {
        let mut partial = vec![MultiWord {
            scalar: word.scalar,
            legs: vec![Vec::new(); nlegs],
        }];
        for sym in &word.factors {
            let pieces = generator_coproduct(datum, sym, nlegs);
            let mut next = Vec::with_capacity(partial.len() * pieces.len());
            for p in &partial {
                for piece in &pieces {
                    let mut legs = p.legs.clone();
                    for (leg, extra) in legs.iter_mut().zip(&piece.legs) {
                        leg.extend(extra.iter().cloned());
                    }
                    next.push(MultiWord {
                        scalar: p.scalar * piece.scalar,
                        legs,
                    });
                }
            }
            partial = next;
        }
        terms.extend(partial);
    }
    MultiWordSum { nlegs, terms }
}

pub fn coproduct(datum: &RootDatum, x: &WordSum) -> MultiWordSum {
    iterated_coproduct(datum, x, 2)
}

pub fn counit(x: &WordSum) -> Complex64 {
    let mut acc = Complex64::zero();
    for t in &x.terms {
        if t.factors
            .iter()
            .all(|s| matches!(s, Sym::L(_)))
        {
            acc += t.scalar;
        }
    }
    acc
}

fn map_word<FS>(w: &GenWord, anti: bool, conj: bool, f: FS) -> GenWord
where
    FS: Fn(&Sym) -> (Complex64, Sym),
{
    let mut scalar = if conj { w.scalar.conj() } else { w.scalar };
    let iter: Vec<&Sym> = if anti {
        w.factors.iter().rev().collect()
    } else {
        w.factors.iter().collect()
    };
    let mut factors = Vec::with_capacity(w.factors.len());
    for s in iter {
        let (c, img) = f(s);
        scalar *= c;
        factors.push(img);
    }
    GenWord::from_factors(scalar, factors)
}

/// Antipode: anti-automorphism with S(E_r) = -q_r E_r, S(F_r) = -q_r^{-1} F_r,
/// S(L_omega) = L_{-omega}.
pub fn antipode(datum: &RootDatum, x: &WordSum) -> WordSum {
    let one = 1.0;
    WordSum::from_words(
        x.terms
            .iter()
            .map(|w| {
                map_word(w, true, false, |s| match s {
                    Sym::E(r) => (Complex64::new(-datum.q_node(*r), 0.0), Sym::E(*r)),
                    Sym::F(r) => (Complex64::new(-one / datum.q_node(*r), 0.0), Sym::F(*r)),
                    Sym::L(w) => (Complex64::new(1.0, 0.0), Sym::L(w.neg())),
                })
            })
            .collect(),
    )
}

/// Unitary antipode: the involutive *-anti-automorphism fixing E_r, F_r up to
/// sign and inverting group-likes.
pub fn unitary_antipode(x: &WordSum) -> WordSum {
    WordSum::from_words(
        x.terms
            .iter()
            .map(|w| {
                map_word(w, true, false, |s| match s {
                    Sym::E(r) => (Complex64::new(-1.0, 0.0), Sym::E(*r)),
                    Sym::F(r) => (Complex64::new(-1.0, 0.0), Sym::F(*r)),
                    Sym::L(w) => (Complex64::new(1.0, 0.0), Sym::L(w.neg())),
                })
            })
            .collect(),
    )
}

/// Star structure of the compact real form: E_r^* = F_r, F_r^* = E_r,
/// L_omega^* = L_omega, anti-linear and anti-multiplicative.
pub fn star(x: &WordSum) -> WordSum {
    WordSum::from_words(
        x.terms
            .iter()
            .map(|w| {
                map_word(w, true, true, |s| match s {
                    Sym::E(r) => (Complex64::new(1.0, 0.0), Sym::F(*r)),
                    Sym::F(r) => (Complex64::new(1.0, 0.0), Sym::E(*r)),
                    Sym::L(w) => (Complex64::new(1.0, 0.0), Sym::L(w.clone())),
                })
            })
            .collect(),
    )
}

/// Right adjoint action x <| y = S(y_(1)) x y_(2).
pub fn adjoint_action(datum: &RootDatum, x: &WordSum, y: &WordSum) -> WordSum {
    let cop = coproduct(datum, y);
    let mut acc = WordSum::zero();
    for t in &cop.terms {
        let y1 = WordSum::from_word(GenWord::from_factors(t.scalar, t.legs[0].clone()));
        let y2 = WordSum::from_word(GenWord::from_factors(
            Complex64::new(1.0, 0.0),
            t.legs[1].clone(),
        ));
        acc = acc.add(&antipode(datum, &y1).mul(x).mul(&y2));
    }
    acc
}

/// Quantum integer [m] at parameter t.
pub fn qnum(m: i64, t: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    (t.powi(m as i32) - t.powi(-m as i32)) / (t - 1.0 / t)
}

/// Gaussian binomial coefficient at node r:
/// q_r^{n(n-m)} prod_{k=1}^n (1 - q_r^{2m-2k+2}) / (1 - q_r^{2k}).
pub fn qbinom(datum: &RootDatum, m: i64, n: i64, r: usize) -> f64 {
    assert!(n >= 0 && m >= n, "binomial requires 0 <= n <= m");
    let qr = datum.q_node(r);
    let mut acc = qr.powi((n * (n - m)) as i32);
    for k in 1..=n {
        acc *= (1.0 - qr.powi((2 * m - 2 * k + 2) as i32)) / (1.0 - qr.powi((2 * k) as i32));
    }
    acc
}

/// Quantum Serre element for a pair of distinct nodes r != s:
/// sum_k (-1)^k [1-a_rs choose k]_{q_r} X_r^k X_s X_r^{1-a_rs-k}
/// with X = E or X = F. Evaluates to zero in every integrable module.
pub fn serre_element(datum: &RootDatum, r: usize, s: usize, lowering: bool) -> WordSum {
    assert_ne!(r, s);
    let n = 1 - datum.cartan(r, s);
    let sym = |node: usize| {
        if lowering {
            Sym::F(node)
        } else {
            Sym::E(node)
        }
    };
    let mut terms = Vec::new();
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * qbinom(datum, n, k, r);
        let mut factors = Vec::with_capacity(n as usize + 1);
        for _ in 0..k {
            factors.push(sym(r));
        }
        factors.push(sym(s));
        for _ in 0..(n - k) {
            factors.push(sym(r));
        }
        terms.push(GenWord::from_factors(Complex64::new(coeff, 0.0), factors));
    }
    WordSum::from_words(terms)
}

/// The commutator relation element [E_r, F_r] - (L_{alpha_r}^2 - L_{alpha_r}^{-2})/(q_r - q_r^{-1}).
pub fn commutator_relation(datum: &RootDatum, r: usize, s: usize) -> WordSum {
    let e = WordSum::gen(Sym::E(r));
    let f = WordSum::gen(Sym::F(s));
    let mut rel = e.mul(&f).sub(&f.mul(&e));
    if r == s {
        let qr = datum.q_node(r);
        let denom = qr - 1.0 / qr;
        let alpha2 = datum.alpha(r).scale(2);
        let cartan_part = WordSum::gen(Sym::L(alpha2.clone()))
            .sub(&WordSum::gen(Sym::L(alpha2.neg())))
            .scale(Complex64::new(1.0 / denom, 0.0));
        rel = rel.sub(&cartan_part);
    }
    rel
}

/// Weight relation element L_omega E_r L_omega^{-1} - q^{(omega, alpha_r)/2} E_r.
pub fn weight_relation(datum: &RootDatum, omega: &Weight, r: usize, lowering: bool) -> WordSum {
    let x = WordSum::gen(if lowering { Sym::F(r) } else { Sym::E(r) });
    let l = WordSum::gen(Sym::L(omega.clone()));
    let linv = WordSum::gen(Sym::L(omega.neg()));
    let pairing = datum.pairing(omega, &datum.alpha(r));
    let sign = if lowering { -pairing } else { pairing };
    let scale = datum.q_pow(sign / Rat::from_integer(2));
    l.mul(&x).mul(&linv).sub(&x.scale(Complex64::new(scale, 0.0)))
}
