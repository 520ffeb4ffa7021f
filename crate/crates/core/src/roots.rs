//! Root data for the supported simple Lie types at desk rank.
//!
//! Weights are stored as integer vectors of fundamental-weight coordinates,
//! so the coordinate of `lambda` at node r is the pairing with the coroot
//! `alpha_r^vee`. The invariant bilinear form is normalized so short roots
//! have squared length 2; all pairings are exact rationals.

use crate::error::Error;
use crate::Result;
use num::rational::Ratio;
use num::{One, Signed, Zero};
use std::fmt;

pub type Rat = Ratio<i64>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LieType {
    A,
    B,
    C,
    D,
    G,
}

impl LieType {
    pub fn letter(self) -> char {
        match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::C => 'C',
            LieType::D => 'D',
            LieType::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<LieType> {
        match c.to_ascii_uppercase() {
            'A' => Some(LieType::A),
            'B' => Some(LieType::B),
            'C' => Some(LieType::C),
            'D' => Some(LieType::D),
            'G' => Some(LieType::G),
            _ => None,
        }
    }
}

/// Integral weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, r: usize) -> Weight {
        let mut c = vec![0; rank];
        c[r] = 1;
        Weight(c)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| k * a).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wt{:?}", self.0)
    }
}

/// Weyl group element, stored as its integer action matrix on
/// fundamental-weight coordinates together with a reduced word.
/// The word multiplies left to right: w = s_{word[0]} ... s_{word[k-1]}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElt {
    rank: usize,
    mat: Vec<i64>,
    word: Vec<usize>,
}

impl WeylElt {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn matrix(&self) -> &[i64] {
        &self.mat
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        let n = self.rank;
        let mut out = vec![0i64; n];
        for t in 0..n {
            let mut acc = 0;
            for u in 0..n {
                acc += self.mat[t * n + u] * w.0[u];
            }
            out[t] = acc;
        }
        Weight(out)
    }
}

/// Root datum: Cartan matrix, symmetrizers, exact Gram matrix of the
/// fundamental weights, and the deformation parameter q with its per-node
/// powers q_r = q^{d_r}.
#[derive(Clone)]
pub struct RootDatum {
    pub lie_type: LieType,
    pub rank: usize,
    pub q: f64,
    cartan: Vec<i64>,
    d: Vec<i64>,
    gram: Vec<Rat>,
    cartan_inv: Vec<Rat>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RootDatum({}{}, q={})",
            self.lie_type.letter(),
            self.rank,
            self.q
        )
    }
}

pub const MAX_RANK: usize = 4;

fn cartan_and_d(lie_type: LieType, rank: usize) -> Result<(Vec<i64>, Vec<i64>)> {
    let bad = || Err(Error::UnsupportedType(lie_type.letter(), rank));
    let n = rank;
    if n == 0 || n > MAX_RANK {
        return bad();
    }
    let mut a = vec![0i64; n * n];
    for r in 0..n {
        a[r * n + r] = 2;
    }
    let mut d = vec![1i64; n];
    match lie_type {
        LieType::A => {
            for r in 0..n.saturating_sub(1) {
                a[r * n + r + 1] = -1;
                a[(r + 1) * n + r] = -1;
            }
        }
        LieType::B => {
            // nodes 1..n-1 long (d=2), last node short (d=1)
            if n < 2 {
                return bad();
            }
            for r in 0..n - 1 {
                d[r] = 2;
            }
            for r in 0..n - 1 {
                a[r * n + r + 1] = -1;
                a[(r + 1) * n + r] = -1;
            }
            a[(n - 2) * n + (n - 1)] = -1;
            a[(n - 1) * n + (n - 2)] = -2;
        }
        LieType::C => {
            // nodes 1..n-1 short, last node long (d=2)
            if n < 2 {
                return bad();
            }
            d[n - 1] = 2;
            for r in 0..n - 1 {
                a[r * n + r + 1] = -1;
                a[(r + 1) * n + r] = -1;
            }
            a[(n - 2) * n + (n - 1)] = -2;
            a[(n - 1) * n + (n - 2)] = -1;
        }
        LieType::D => {
            if n != 4 {
                return bad();
            }
            // chain 1-2-3 with node 4 attached to node 2
            let edges = [(0usize, 1usize), (1, 2), (1, 3)];
            for (x, y) in edges {
                a[x * n + y] = -1;
                a[y * n + x] = -1;
            }
        }
        LieType::G => {
            if n != 2 {
                return bad();
            }
            // node 1 short, node 2 long
            d[1] = 3;
            a[1] = -3;
            a[2] = -1;
        }
    }
    Ok((a, d))
}

fn invert_rational(n: usize, a: &[i64]) -> Vec<Rat> {
    // Gauss-Jordan on [A | I] with exact rationals; Cartan matrices of the
    // supported types are invertible so no pivot search subtleties arise.
    let mut m: Vec<Rat> = Vec::with_capacity(n * 2 * n);
    for r in 0..n {
        for s in 0..n {
            m.push(Rat::from_integer(a[r * n + s]));
        }
        for s in 0..n {
            m.push(if r == s { Rat::one() } else { Rat::zero() });
        }
    }
    let w = 2 * n;
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !m[r * w + col].is_zero())
            .expect("cartan matrix must be invertible");
        if pivot_row != col {
            for k in 0..w {
                m.swap(col * w + k, pivot_row * w + k);
            }
        }
        let p = m[col * w + col];
        for k in 0..w {
            m[col * w + k] /= p;
        }
        for r in 0..n {
            if r != col && !m[r * w + col].is_zero() {
                let f = m[r * w + col];
                for k in 0..w {
                    let sub = f * m[col * w + k];
                    m[r * w + k] -= sub;
                }
            }
        }
    }
    let mut inv = Vec::with_capacity(n * n);
    for r in 0..n {
        for s in 0..n {
            inv.push(m[r * w + n + s]);
        }
    }
    inv
}

impl RootDatum {
    pub fn new(lie_type: LieType, rank: usize, q: f64) -> Result<RootDatum> {
        if !(q > 0.0 && q < 1.0) || !q.is_finite() {
            return Err(Error::QOutOfRange(q));
        }
        let (cartan, d) = cartan_and_d(lie_type, rank)?;
        let cartan_inv = invert_rational(rank, &cartan);
        // Gram matrix of fundamental weights: G = diag(d) * A^{-1}, which is
        // symmetric because diag(d) * A is.
        let mut gram = vec![Rat::zero(); rank * rank];
        for r in 0..rank {
            for s in 0..rank {
                gram[r * rank + s] = Rat::from_integer(d[r]) * cartan_inv[r * rank + s];
            }
        }
        for r in 0..rank {
            for s in 0..rank {
                debug_assert_eq!(gram[r * rank + s], gram[s * rank + r]);
            }
        }
        Ok(RootDatum {
            lie_type,
            rank,
            q,
            cartan,
            d,
            gram,
            cartan_inv,
        })
    }

    pub fn cartan(&self, r: usize, s: usize) -> i64 {
        self.cartan[r * self.rank + s]
    }

    /// Half squared length of the simple root at node r.
    pub fn d(&self, r: usize) -> i64 {
        self.d[r]
    }

    pub fn q_node(&self, r: usize) -> f64 {
        self.q.powi(self.d[r] as i32)
    }

    /// Simple root alpha_s in fundamental-weight coordinates
    /// (the s-th column of the Cartan matrix).
    pub fn alpha(&self, s: usize) -> Weight {
        Weight((0..self.rank).map(|t| self.cartan(t, s)).collect())
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Exact invariant pairing of two integral weights.
    pub fn pairing(&self, a: &Weight, b: &Weight) -> Rat {
        let n = self.rank;
        let mut acc = Rat::zero();
        for r in 0..n {
            if a.0[r] == 0 {
                continue;
            }
            for s in 0..n {
                if b.0[s] == 0 {
                    continue;
                }
                acc += Rat::from_integer(a.0[r] * b.0[s]) * self.gram[r * n + s];
            }
        }
        acc
    }

    pub fn pairing_f64(&self, a: &Weight, b: &Weight) -> f64 {
        let p = self.pairing(a, b);
        *p.numer() as f64 / *p.denom() as f64
    }

    /// q raised to an exact rational power.
    pub fn q_pow(&self, e: Rat) -> f64 {
        let x = *e.numer() as f64 / *e.denom() as f64;
        self.q.powf(x)
    }

    /// Pairing with a coroot: (lambda, alpha_r^vee) is the r-th coordinate.
    pub fn coroot_pairing(&self, lambda: &Weight, r: usize) -> i64 {
        lambda.0[r]
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.0.iter().all(|&c| c >= 0)
    }

    /// Coordinates of a weight in the simple-root basis, exact.
    pub fn root_coords(&self, w: &Weight) -> Vec<Rat> {
        let n = self.rank;
        (0..n)
            .map(|b| {
                let mut acc = Rat::zero();
                for c in 0..n {
                    acc += self.cartan_inv[b * n + c] * Rat::from_integer(w.0[c]);
                }
                acc
            })
            .collect()
    }

    /// Height of an element of the positive root lattice, exact; None if the
    /// weight is not a nonnegative integer combination of simple roots.
    pub fn positive_height(&self, w: &Weight) -> Option<i64> {
        let rc = self.root_coords(w);
        let mut h = 0i64;
        for c in rc {
            if !c.denom().is_one() || c.numer().is_negative() {
                return None;
            }
            h += *c.numer();
        }
        Some(h)
    }

    fn reflection_matrix(&self, r: usize) -> Vec<i64> {
        let n = self.rank;
        let mut m = vec![0i64; n * n];
        for t in 0..n {
            m[t * n + t] = 1;
        }
        for t in 0..n {
            m[t * n + r] -= self.cartan(t, r);
        }
        m
    }

    fn mat_mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.rank;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
        out
    }

    fn is_identity_mat(&self, m: &[i64]) -> bool {
        let n = self.rank;
        (0..n).all(|i| (0..n).all(|j| m[i * n + j] == if i == j { 1 } else { 0 }))
    }

    /// True when the image of alpha_i under the matrix is a negative root.
    fn sends_simple_negative(&self, m: &[i64], i: usize) -> bool {
        let n = self.rank;
        let alpha = self.alpha(i);
        let mut img = vec![0i64; n];
        for t in 0..n {
            for u in 0..n {
                img[t] += m[t * n + u] * alpha.0[u];
            }
        }
        let rc = self.root_coords(&Weight(img));
        rc.iter().all(|c| !c.numer().is_positive())
    }

    /// Greedy reduced word: repeatedly strip a descent with the smallest
    /// node index. Each step shortens the element by exactly one, so the
    /// result is reduced.
    pub fn weyl_from_matrix(&self, mat: Vec<i64>) -> WeylElt {
        let mut m = mat.clone();
        let mut picks = Vec::new();
        while !self.is_identity_mat(&m) {
            let i = (0..self.rank)
                .find(|&i| self.sends_simple_negative(&m, i))
                .expect("non-identity Weyl matrix must have a descent");
            m = self.mat_mul(&m, &self.reflection_matrix(i));
            picks.push(i);
        }
        picks.reverse();
        WeylElt {
            rank: self.rank,
            mat,
            word: picks,
        }
    }

    pub fn weyl_identity(&self) -> WeylElt {
        let n = self.rank;
        let mut mat = vec![0i64; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        WeylElt {
            rank: n,
            mat,
            word: Vec::new(),
        }
    }

    pub fn simple_reflection(&self, r: usize) -> WeylElt {
        WeylElt {
            rank: self.rank,
            mat: self.reflection_matrix(r),
            word: vec![r],
        }
    }

    pub fn weyl_from_word(&self, word: &[usize]) -> WeylElt {
        let mut m = self.weyl_identity().mat;
        for &i in word {
            m = self.mat_mul(&m, &self.reflection_matrix(i));
        }
        self.weyl_from_matrix(m)
    }

    pub fn compose(&self, a: &WeylElt, b: &WeylElt) -> WeylElt {
        self.weyl_from_matrix(self.mat_mul(&a.mat, &b.mat))
    }

    pub fn inverse(&self, a: &WeylElt) -> WeylElt {
        // The action matrices are orthogonal for the Gram form; the inverse
        // matrix is rebuilt from the reversed word to stay in integers.
        let mut m = self.weyl_identity().mat;
        for &i in a.word.iter().rev() {
            m = self.mat_mul(&m, &self.reflection_matrix(i));
        }
        self.weyl_from_matrix(m)
    }

    /// Longest element, via the descent walk from rho to -rho.
    pub fn longest_element(&self) -> WeylElt {
        self.longest_element_of(&(0..self.rank).collect::<Vec<_>>())
    }

    /// Longest element of the parabolic subgroup generated by the nodes in
    /// `subset`.
    pub fn longest_element_of(&self, subset: &[usize]) -> WeylElt {
        let mut v = self.rho();
        let mut picks = Vec::new();
        loop {
            let Some(&i) = subset.iter().find(|&&i| v.0[i] > 0) else {
                break;
            };
            // reflect: v -> v - (v, alpha_i^vee) alpha_i
            let c = v.0[i];
            v = v.sub(&self.alpha(i).scale(c));
            picks.push(i);
        }
        // picks applied to rho left to right give the longest element read
        // right to left; its matrix is the product in reversed pick order.
        let mut m = self.weyl_identity().mat;
        for &i in picks.iter().rev() {
            m = self.mat_mul(&m, &self.reflection_matrix(i));
        }
        self.weyl_from_matrix(m)
    }

    /// Shortest representative of the coset w0 * W_S: the product
    /// w0 * w_{S,0}, of length l(w0) - l(w_{S,0}).
    pub fn shortest_coset_rep(&self, subset: &[usize]) -> WeylElt {
        let w0 = self.longest_element();
        let ws = self.longest_element_of(subset);
        let w = self.compose(&w0, &ws);
        debug_assert_eq!(w.length(), w0.length() - ws.length());
        w
    }

    /// The involution lambda -> -w0(lambda), which permutes the fundamental
    /// weights.
    pub fn bar_involution(&self, lambda: &Weight) -> Weight {
        self.longest_element().apply(lambda).neg()
    }

    /// Node permutation r -> rbar induced by the bar involution.
    pub fn bar_node(&self, r: usize) -> usize {
        let img = self.bar_involution(&self.alpha(r));
        (0..self.rank)
            .find(|&s| self.alpha(s) == img)
            .expect("bar involution must permute simple roots")
    }

    /// All positive roots, in fundamental-weight coordinates.
    pub fn positive_roots(&self) -> Vec<Weight> {
        let mut all: Vec<Weight> = (0..self.rank).map(|r| self.alpha(r)).collect();
        let mut frontier = all.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for r in 0..self.rank {
                    let img = self.simple_reflection(r).apply(w);
                    let is_pos = self
                        .root_coords(&img)
                        .iter()
                        .all(|c| !c.numer().is_negative());
                    if is_pos && !all.contains(&img) {
                        all.push(img.clone());
                        next.push(img);
                    }
                }
            }
            frontier = next;
        }
        all.sort_by_key(|w| (self.positive_height(w), w.0.clone()));
        all
    }

    /// Alternative reduced word for w differing from the greedy one, found
    /// by braid moves; None when the reduced word is unique.
    pub fn alternative_reduced_word(&self, w: &WeylElt) -> Option<Vec<usize>> {
        use std::collections::HashSet;
        let start = w.word().to_vec();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start.clone()];
        while let Some(word) = frontier.pop() {
            for p in 0..word.len().saturating_sub(1) {
                let (i, j) = (word[p], word[p + 1]);
                if i == j {
                    continue;
                }
                let m = match self.cartan(i, j) * self.cartan(j, i) {
                    0 => 2,
                    1 => 3,
                    2 => 4,
                    3 => 6,
                    _ => continue,
                };
                if p + m > word.len() {
                    continue;
                }
                let ok = (0..m).all(|k| word[p + k] == if k % 2 == 0 { i } else { j });
                if !ok {
                    continue;
                }
                let mut next = word.clone();
                for k in 0..m {
                    next[p + k] = if k % 2 == 0 { j } else { i };
                }
                if seen.insert(next.clone()) {
                    if next != start {
                        return Some(next);
                    }
                    frontier.push(next);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn datum(t: LieType, rank: usize) -> RootDatum {
        RootDatum::new(t, rank, 0.5).unwrap()
    }

    /// Brute-force enumeration of the Weyl group by breadth-first closure
    /// over simple reflections; returns matrix -> word length.
    fn enumerate_weyl(d: &RootDatum) -> HashMap<Vec<i64>, usize> {
        let mut seen = HashMap::new();
        let id = d.weyl_identity().mat;
        seen.insert(id.clone(), 0usize);
        let mut frontier = vec![id];
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for m in &frontier {
                for r in 0..d.rank {
                    let prod = d.mat_mul(m, &d.reflection_matrix(r));
                    if !seen.contains_key(&prod) {
                        seen.insert(prod.clone(), depth);
                        next.push(prod);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    #[test]
    fn group_orders_match_classical_values() {
        for (t, rank, order) in [
            (LieType::A, 1, 2usize),
            (LieType::A, 2, 6),
            (LieType::A, 3, 24),
            (LieType::B, 2, 8),
            (LieType::C, 2, 8),
            (LieType::G, 2, 12),
            (LieType::D, 4, 192),
        ] {
            let d = datum(t, rank);
            assert_eq!(enumerate_weyl(&d).len(), order, "{t:?}{rank}");
        }
    }

    #[test]
    fn greedy_words_are_minimal_against_bfs_depth() {
        for (t, rank) in [
            (LieType::A, 2),
            (LieType::A, 3),
            (LieType::B, 2),
            (LieType::G, 2),
        ] {
            let d = datum(t, rank);
            for (mat, depth) in enumerate_weyl(&d) {
                let w = d.weyl_from_matrix(mat);
                assert_eq!(w.length(), depth);
                assert_eq!(d.weyl_from_word(w.word()).matrix(), w.matrix());
            }
        }
    }

    #[test]
    fn longest_element_length_is_number_of_positive_roots() {
        for (t, rank, npos) in [
            (LieType::A, 1, 1usize),
            (LieType::A, 2, 3),
            (LieType::A, 3, 6),
            (LieType::B, 2, 4),
            (LieType::C, 2, 4),
            (LieType::G, 2, 6),
            (LieType::D, 4, 12),
        ] {
            let d = datum(t, rank);
            assert_eq!(d.longest_element().length(), npos);
            assert_eq!(d.positive_roots().len(), npos);
            // w0 sends every positive root to a negative one
            let w0 = d.longest_element();
            for beta in d.positive_roots() {
                let img = w0.apply(&beta);
                assert!(d
                    .root_coords(&img)
                    .iter()
                    .all(|c| !c.numer().is_positive()));
            }
        }
    }

    #[test]
    fn symmetrizer_and_gram_values() {
        let b2 = datum(LieType::B, 2);
        assert_eq!(b2.d(0), 2);
        assert_eq!(b2.d(1), 1);
        assert_eq!(b2.cartan(0, 1), -1);
        assert_eq!(b2.cartan(1, 0), -2);

        let g2 = datum(LieType::G, 2);
        assert_eq!((g2.d(0), g2.d(1)), (1, 3));
        assert_eq!(g2.cartan(0, 1), -3);
        assert_eq!(g2.cartan(1, 0), -1);

        // A1: (omega, omega) = 1/2
        let a1 = datum(LieType::A, 1);
        let om = Weight::fundamental(1, 0);
        assert_eq!(a1.pairing(&om, &om), Rat::new(1, 2));

        // (rho, alpha_r) = d_r in every type
        for (t, rank) in [
            (LieType::A, 3),
            (LieType::B, 2),
            (LieType::C, 2),
            (LieType::G, 2),
            (LieType::D, 4),
        ] {
            let d = datum(t, rank);
            let rho = d.rho();
            for r in 0..rank {
                assert_eq!(d.pairing(&rho, &d.alpha(r)), Rat::from_integer(d.d(r)));
            }
        }

        // pairing symmetry and (alpha_r, alpha_r) = 2 d_r
        for (t, rank) in [(LieType::B, 2), (LieType::G, 2), (LieType::A, 3)] {
            let d = datum(t, rank);
            for r in 0..rank {
                assert_eq!(
                    d.pairing(&d.alpha(r), &d.alpha(r)),
                    Rat::from_integer(2 * d.d(r))
                );
                for s in 0..rank {
                    assert_eq!(
                        d.pairing(&d.alpha(r), &d.alpha(s)),
                        d.pairing(&d.alpha(s), &d.alpha(r))
                    );
                }
            }
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(RootDatum::new(LieType::A, 1, 1.0).is_err());
        assert!(RootDatum::new(LieType::A, 1, 0.0).is_err());
        assert!(RootDatum::new(LieType::A, 1, -0.5).is_err());
        assert!(RootDatum::new(LieType::B, 1, 0.5).is_err());
        assert!(RootDatum::new(LieType::D, 3, 0.5).is_err());
        assert!(RootDatum::new(LieType::G, 3, 0.5).is_err());
        assert!(RootDatum::new(LieType::A, 5, 0.5).is_err());
    }

    #[test]
    fn bar_involution_permutes_nodes() {
        let a2 = datum(LieType::A, 2);
        assert_eq!(a2.bar_node(0), 1);
        assert_eq!(a2.bar_node(1), 0);
        let b2 = datum(LieType::B, 2);
        assert_eq!(b2.bar_node(0), 0);
        assert_eq!(b2.bar_node(1), 1);
        let a3 = datum(LieType::A, 3);
        assert_eq!(a3.bar_node(0), 2);
        assert_eq!(a3.bar_node(1), 1);
        assert_eq!(a3.bar_node(2), 0);
    }

    #[test]
    fn coset_representatives_have_complementary_length() {
        let a2 = datum(LieType::A, 2);
        let w = a2.shortest_coset_rep(&[0]);
        assert_eq!(w.length(), 2);
        let full = a2.shortest_coset_rep(&[0, 1]);
        assert!(full.is_identity());
        let b2 = datum(LieType::B, 2);
        assert_eq!(b2.shortest_coset_rep(&[]).length(), 4);
        assert_eq!(b2.shortest_coset_rep(&[0]).length(), 3);
        assert_eq!(b2.shortest_coset_rep(&[1]).length(), 3);
        let a3 = datum(LieType::A, 3);
        assert_eq!(a3.shortest_coset_rep(&[0, 2]).length(), 4);
    }

    #[test]
    fn weyl_action_preserves_pairing() {
        for (t, rank) in [(LieType::B, 2), (LieType::A, 3), (LieType::G, 2)] {
            let d = datum(t, rank);
            let w = d.weyl_from_word(&[0, 1, 0]);
            let x = Weight(vec![1; rank]);
            let y = Weight((0..rank as i64).map(|k| k - 1).collect());
            assert_eq!(d.pairing(&w.apply(&x), &w.apply(&y)), d.pairing(&x, &y));
        }
    }

    #[test]
    fn alternative_words_exist_for_braid_rich_elements() {
        let a2 = datum(LieType::A, 2);
        let w0 = a2.longest_element();
        let alt = a2.alternative_reduced_word(&w0).unwrap();
        assert_ne!(alt, w0.word());
        assert_eq!(a2.weyl_from_word(&alt).matrix(), w0.matrix());
        // A1: the unique reduced word has no alternative
        let a1 = datum(LieType::A, 1);
        assert!(a1
            .alternative_reduced_word(&a1.longest_element())
            .is_none());
    }

    #[test]
    fn inverse_and_compose_are_consistent() {
        let b2 = datum(LieType::B, 2);
        let w = b2.shortest_coset_rep(&[1]);
        let winv = b2.inverse(&w);
        assert!(b2.compose(&w, &winv).is_identity());
        assert_eq!(winv.length(), w.length());
        let lam = Weight(vec![2, 1]);
        assert_eq!(winv.apply(&w.apply(&lam)), lam);
    }
}
