//! The function algebra side: finite sums of matrix coefficients
//! U(xi, eta)(x) = <xi, x eta> over type I modules. Elements with different
//! carrying modules are compared through an evaluation battery of generator
//! monomials, which is faithful at bounded degree for the module sizes used
//! here. Products go through the coproduct (tensor modules), the star uses
//! conjugate modules with a rho-shift, and the two actions realize the
//! pairing-side multiplications.

use crate::error::Error;
use crate::linalg::{c64, kron_vec_complex, CVec};
use crate::modules::{tensor_module, trivial_module, Module};
use crate::roots::{RootDatum, Weight};
use crate::uqalg::{star, GenWord, Sym, WordSum};
use crate::Result;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::Arc;

/// Largest tensor module dimension a product is allowed to create.
pub const PRODUCT_SIZE_CAP: usize = 4096;
/// Monomial length used by the default equality battery.
pub const BATTERY_DEPTH: usize = 4;

#[derive(Clone)]
pub struct PolTerm {
    pub module: Arc<Module>,
    pub bra: CVec,
    pub ket: CVec,
    pub coeff: Complex64,
}

#[derive(Clone)]
pub struct PolElement {
    pub terms: Vec<PolTerm>,
}

impl PolElement {
    pub fn zero() -> Self {
        PolElement { terms: Vec::new() }
    }

    pub fn matrix_unit(module: Arc<Module>, bra: CVec, ket: CVec) -> Self {
        PolElement {
            terms: vec![PolTerm {
                module,
                bra,
                ket,
                coeff: c64(1.0),
            }],
        }
    }

    /// The constant function 1, carried by the one dimensional module.
    pub fn unit(datum: &RootDatum) -> Self {
        let m = Arc::new(trivial_module(datum));
        let mut v = CVec::zeros(1);
        v[0] = c64(1.0);
        Self::matrix_unit(m, v.clone(), v)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PolElement {
            terms: self
                .terms
                .iter()
                .map(|t| PolTerm {
                    coeff: t.coeff * c,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PolElement { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c64(-1.0)))
    }
}

pub fn evaluate_word(p: &PolElement, w: &GenWord) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in &p.terms {
        acc += t.coeff * t.bra.dotc(&t.module.apply_word(w, &t.ket));
    }
    acc
}

pub fn evaluate(p: &PolElement, x: &WordSum) -> Complex64 {
    x.terms.iter().map(|w| evaluate_word(p, w)).sum()
}

/// All generator monomials of length up to `depth` over E_r, F_r and the
/// fundamental torus elements and their inverses.
pub fn battery_words(datum: &RootDatum, depth: usize) -> Vec<GenWord> {
    let mut symbols: Vec<Sym> = Vec::new();
    for r in 0..datum.rank {
        symbols.push(Sym::E(r));
        symbols.push(Sym::F(r));
        symbols.push(Sym::L(Weight::fundamental(datum.rank, r)));
        symbols.push(Sym::L(Weight::fundamental(datum.rank, r).neg()));
    }
    let mut out = vec![GenWord::one(c64(1.0))];
    let mut level = vec![GenWord::one(c64(1.0))];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * symbols.len());
        for w in &level {
            for s in &symbols {
                let mut factors = w.factors.clone();
                factors.push(s.clone());
                next.push(GenWord::from_factors(w.scalar, factors));
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Largest absolute evaluation difference over the battery.
pub fn equality_residual(p: &PolElement, q: &PolElement, depth: usize) -> f64 {
    let datum = match p.terms.first().or(q.terms.first()) {
        Some(t) => t.module.datum.clone(),
        None => return 0.0,
    };
    let mut worst: f64 = 0.0;
    for w in battery_words(&datum, depth) {
        worst = worst.max((evaluate_word(p, &w) - evaluate_word(q, &w)).norm());
    }
    worst
}

pub fn pol_product(p: &PolElement, q: &PolElement) -> Result<PolElement> {
    let mut terms = Vec::with_capacity(p.terms.len() * q.terms.len());
    for a in &p.terms {
        for b in &q.terms {
            let need = a.module.dim() * b.module.dim();
            if need > PRODUCT_SIZE_CAP {
                return Err(Error::SizeCap(need, PRODUCT_SIZE_CAP));
            }
            terms.push(PolTerm {
                module: Arc::new(tensor_module(&a.module, &b.module)),
                bra: kron_vec_complex(&a.bra, &b.bra),
                ket: kron_vec_complex(&a.ket, &b.ket),
                coeff: a.coeff * b.coeff,
            });
        }
    }
    Ok(PolElement { terms })
}

fn weight_components(m: &Module, v: &CVec) -> Vec<(Weight, CVec)> {
    let mut groups: HashMap<Weight, CVec> = HashMap::new();
    for i in 0..m.dim() {
        if v[i].norm_sqr() > 0.0 {
            groups
                .entry(m.weights[i].clone())
                .or_insert_with(|| CVec::zeros(m.dim()))[i] = v[i];
        }
    }
    let mut out: Vec<(Weight, CVec)> = groups.into_iter().collect();
    out.sort_by(|a, b| a.0 .0.cmp(&b.0 .0));
    out
}

/// Star structure: conjugate of the value at star-antipode arguments. On a
/// matrix coefficient with homogeneous legs this lands in the conjugate
/// module with a rho-dependent power of q.
pub fn pol_star(p: &PolElement) -> PolElement {
    let mut terms = Vec::new();
    for t in &p.terms {
        let datum = &t.module.datum;
        let rho = datum.rho();
        let conj_mod = Arc::new(crate::modules::conjugate_module(&t.module));
        for (wb, bra_c) in weight_components(&t.module, &t.bra) {
            for (wk, ket_c) in weight_components(&t.module, &t.ket) {
                let expo = -datum.pairing(&rho, &wb.sub(&wk));
                let factor = datum.q_pow(expo);
                terms.push(PolTerm {
                    module: conj_mod.clone(),
                    bra: bra_c.map(|z| z.conj()),
                    ket: ket_c.map(|z| z.conj()),
                    coeff: t.coeff.conj() * factor,
                });
            }
        }
    }
    PolElement { terms }
}

/// Left multiplication on the pairing side: (x |> p)(z) = p(z x).
pub fn act_left(x: &WordSum, p: &PolElement) -> PolElement {
    PolElement {
        terms: p
            .terms
            .iter()
            .map(|t| PolTerm {
                ket: t.module.apply_wordsum(x, &t.ket),
                ..t.clone()
            })
            .collect(),
    }
}

/// Right multiplication on the pairing side: (p <| y)(z) = p(y z).
pub fn act_right(p: &PolElement, y: &WordSum) -> PolElement {
    let ystar = star(y);
    PolElement {
        terms: p
            .terms
            .iter()
            .map(|t| PolTerm {
                bra: t.module.apply_wordsum(&ystar, &t.bra),
                ..t.clone()
            })
            .collect(),
    }
}

/// Residual of invariance under the parabolic subalgebra at `subset` acting
/// from the ket side, plus full torus weight invariance.
pub fn coinvariance_residual(p: &PolElement, subset: &[usize], depth: usize) -> f64 {
    let datum = match p.terms.first() {
        Some(t) => t.module.datum.clone(),
        None => return 0.0,
    };
    let zero = PolElement::zero();
    let mut worst: f64 = 0.0;
    for &s in subset {
        for g in [Sym::E(s), Sym::F(s)] {
            let moved = act_left(&WordSum::gen(g), p);
            worst = worst.max(equality_residual(&moved, &zero, depth));
        }
    }
    for t in 0..datum.rank {
        let l = WordSum::gen(Sym::L(Weight::fundamental(datum.rank, t)));
        let moved = act_left(&l, p);
        worst = worst.max(equality_residual(&moved, p, depth));
    }
    worst
}

/// Number of generator letters needed before products of fundamental matrix
/// coefficients can be told apart; kept for callers tuning battery cost.
pub fn battery_size(datum: &RootDatum, depth: usize) -> usize {
    let a = 4 * datum.rank;
    let mut total = 1;
    let mut level = 1;
    for _ in 0..depth {
        level *= a;
        total += level;
    }
    total
}
