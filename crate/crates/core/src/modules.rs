//! Finite dimensional type I representations. Modules are built from a
//! dominant integral highest weight by spanning each weight level with
//! lowering-operator images, computing the contravariant Hermitian form
//! recursively, and cutting its radical. The resulting bases are orthonormal
//! for the invariant inner product, so E_r and F_r are mutually adjoint
//! matrices and all entries are real.

use crate::error::Error;
use crate::linalg::{c64, sym_eigen, CMat, CVec, RMat, RVec};
use crate::roots::{Rat, RootDatum, Weight};
use crate::uqalg::{qnum, GenWord, MultiWordSum, Sym, WordSum};
use crate::Result;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_MODULE_ID: AtomicU64 = AtomicU64::new(1);

/// Relative cutoff separating the radical of the contravariant form from
/// genuine weight-space directions.
pub const RADICAL_REL_TOL: f64 = 1e-8;
/// The form must be positive semidefinite up to roundoff; eigenvalues below
/// this bound abort the construction.
pub const FORM_NEGATIVITY_TOL: f64 = -1e-10;

#[derive(Clone)]
pub struct Module {
    pub id: u64,
    pub datum: RootDatum,
    pub label: String,
    /// Weight of each orthonormal basis vector.
    pub weights: Vec<Weight>,
    /// Raising operator matrices, one per node.
    pub e: Vec<RMat>,
    /// Lowering operator matrices, one per node.
    pub f: Vec<RMat>,
    /// Index of the highest weight vector when the module is a built irrep.
    pub highest: Option<usize>,
}

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Module({}, dim {})", self.label, self.dim())
    }
}

impl Module {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    /// Diagonal of L_omega: q^{(omega, wt_i)/2}.
    pub fn l_diag(&self, omega: &Weight) -> Vec<f64> {
        self.weights
            .iter()
            .map(|mu| {
                self.datum
                    .q_pow(self.datum.pairing(omega, mu) / Rat::from_integer(2))
            })
            .collect()
    }

    pub fn l_matrix(&self, omega: &Weight) -> RMat {
        RMat::from_diagonal(&nalgebra::DVector::from_vec(self.l_diag(omega)))
    }

    pub fn weight_indices(&self) -> HashMap<Weight, Vec<usize>> {
        let mut map: HashMap<Weight, Vec<usize>> = HashMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            map.entry(w.clone()).or_default().push(i);
        }
        map
    }

    /// Matrix of a generator word (product over factors, applied right to
    /// left to vectors, i.e. plain matrix product in factor order).
    pub fn word_matrix(&self, word: &GenWord) -> CMat {
        let n = self.dim();
        let mut acc = RMat::identity(n, n);
        for sym in &word.factors {
            let m = match sym {
                Sym::E(r) => self.e[*r].clone(),
                Sym::F(r) => self.f[*r].clone(),
                Sym::L(w) => self.l_matrix(w),
            };
            acc = acc * m;
        }
        acc.map(|x| word.scalar * x)
    }

    pub fn wordsum_matrix(&self, x: &WordSum) -> CMat {
        let n = self.dim();
        let mut acc = CMat::zeros(n, n);
        for t in &x.terms {
            acc += self.word_matrix(t);
        }
        acc
    }

    /// Apply a generator word to a complex vector.
    pub fn apply_word(&self, word: &GenWord, v: &CVec) -> CVec {
        let mut out = v.clone();
        for sym in word.factors.iter().rev() {
            out = match sym {
                Sym::E(r) => apply_real(&self.e[*r], &out),
                Sym::F(r) => apply_real(&self.f[*r], &out),
                Sym::L(w) => {
                    let d = self.l_diag(w);
                    CVec::from_iterator(out.len(), out.iter().zip(&d).map(|(z, s)| z * *s))
                }
            };
        }
        out * word.scalar
    }

    pub fn apply_wordsum(&self, x: &WordSum, v: &CVec) -> CVec {
        let mut acc = CVec::zeros(self.dim());
        for t in &x.terms {
            acc += self.apply_word(t, v);
        }
        acc
    }
}

fn apply_real(m: &RMat, v: &CVec) -> CVec {
    let mut out = CVec::zeros(m.nrows());
    for (j, z) in v.iter().enumerate() {
        if z.norm_sqr() == 0.0 {
            continue;
        }
        for i in 0..m.nrows() {
            let a = m[(i, j)];
            if a != 0.0 {
                out[i] += z * a;
            }
        }
    }
    out
}

/// Build the irreducible module with dominant integral highest weight lambda.
pub fn build_irrep(datum: &RootDatum, lambda: &Weight) -> Result<Module> {
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let rank = datum.rank;
    let w0 = datum.longest_element();
    let depth_span = lambda.sub(&w0.apply(lambda));
    let max_depth = datum
        .positive_height(&depth_span)
        .expect("lambda - w0 lambda lies in the positive root lattice");

    let mut weights: Vec<Weight> = vec![lambda.clone()];
    let mut by_weight: HashMap<Weight, Vec<usize>> = HashMap::new();
    by_weight.insert(lambda.clone(), vec![0]);
    // sparse triplets (row, col, value)
    let mut e_tri: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); rank];
    let mut f_tri: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); rank];
    let mut prev_level: Vec<Weight> = vec![lambda.clone()];

    // dense row lookup helpers over the triplet lists
    let col_of = |tri: &Vec<(usize, usize, f64)>, col: usize| -> Vec<(usize, f64)> {
        tri.iter()
            .filter(|(_, c, _)| *c == col)
            .map(|(r, _, v)| (*r, *v))
            .collect()
    };

    for _depth in 1..=max_depth {
        let mut level_weights: Vec<Weight> = Vec::new();
        for nu in &prev_level {
            for r in 0..rank {
                let mu = nu.sub(&datum.alpha(r));
                if !level_weights.contains(&mu) {
                    level_weights.push(mu);
                }
            }
        }
        level_weights.sort_by(|a, b| a.0.cmp(&b.0));
        let mut new_level: Vec<Weight> = Vec::new();

        for mu in level_weights {
            // candidates: (node r, parent index b) with wt(b) = mu + alpha_r
            let mut cand: Vec<(usize, usize)> = Vec::new();
            for r in 0..rank {
                let parent_wt = mu.add(&datum.alpha(r));
                if let Some(idx) = by_weight.get(&parent_wt) {
                    for &b in idx {
                        cand.push((r, b));
                    }
                }
            }
            if cand.is_empty() {
                continue;
            }
            let m = cand.len();
            // Gram matrix of the candidate lowering images under the
            // contravariant form: <F_r b, F_s b'> = <b, F_s E_r b'> +
            // delta_{rs} [m_{mu+alpha_r}]_{q_r} delta_{bb'}.
            let mut gram = RMat::zeros(m, m);
            for (i, &(r, b)) in cand.iter().enumerate() {
                for (j, &(s, bp)) in cand.iter().enumerate() {
                    let mut val = 0.0;
                    // sum_t E_r[t, bp] * F_s[b, t]
                    for &(t, ev) in &col_of(&e_tri[r], bp) {
                        for &(u, fv) in &col_of(&f_tri[s], t) {
                            if u == b {
                                val += ev * fv;
                            }
                        }
                    }
                    if r == s && b == bp {
                        let mrow = datum.coroot_pairing(&mu.add(&datum.alpha(r)), r);
                        val += qnum(mrow, datum.q_node(r));
                    }
                    gram[(i, j)] = val;
                }
            }
            let (vals, vecs) = sym_eigen(&gram);
            let largest = vals.iter().cloned().fold(0.0, f64::max);
            if let Some(&worst) = vals
                .iter()
                .filter(|v| **v < FORM_NEGATIVITY_TOL * largest.max(1.0))
                .next()
            {
                return Err(Error::InvalidParameter(format!(
                    "contravariant form not positive semidefinite at {mu:?}: eigenvalue {worst:.3e}"
                )));
            }
            // floor at the O(1) scale of q-integers so an all-radical Gram
            // (largest eigenvalue itself roundoff) keeps nothing
            let cut = RADICAL_REL_TOL * largest.max(1.0);
            let kept: Vec<usize> = (0..m).filter(|&j| vals[j] > cut && vals[j] > 0.0).collect();
            if kept.is_empty() {
                continue;
            }

            let base = weights.len();
            for _ in &kept {
                weights.push(mu.clone());
            }
            by_weight
                .entry(mu.clone())
                .or_default()
                .extend(base..base + kept.len());
            new_level.push(mu.clone());

            // F entries into the new vectors: F_s[new_j, b'] = u_j^T gram[:, (s,b')] / sqrt(g_j)
            for (jj, &j) in kept.iter().enumerate() {
                let inv_norm = 1.0 / vals[j].sqrt();
                let new_idx = base + jj;
                for (i2, &(s, bp)) in cand.iter().enumerate() {
                    let mut coef = 0.0;
                    for i in 0..m {
                        coef += vecs[(i, j)] * gram[(i, i2)];
                    }
                    coef *= inv_norm;
                    if coef.abs() > 0.0 {
                        f_tri[s].push((new_idx, bp, coef));
                    }
                }
            }

            // E entries out of the new vectors:
            // E_r c_j = sum_i u_{ij}/sqrt(g_j) (F_{r_i}(E_r b_i) + delta_{r,r_i}[..] b_i)
            for r in 0..rank {
                let target_wt = mu.add(&datum.alpha(r));
                let Some(target_idx) = by_weight.get(&target_wt) else {
                    continue;
                };
                let tpos: HashMap<usize, usize> = target_idx
                    .iter()
                    .enumerate()
                    .map(|(p, &g)| (g, p))
                    .collect();
                for (jj, &j) in kept.iter().enumerate() {
                    let inv_norm = 1.0 / vals[j].sqrt();
                    let new_idx = base + jj;
                    let mut acc = vec![0.0; target_idx.len()];
                    for (i, &(ri, bi)) in cand.iter().enumerate() {
                        let u = vecs[(i, j)];
                        if u == 0.0 {
                            continue;
                        }
                        for &(t, ev) in &col_of(&e_tri[r], bi) {
                            for &(uix, fv) in &col_of(&f_tri[ri], t) {
                                if let Some(&p) = tpos.get(&uix) {
                                    acc[p] += u * ev * fv;
                                }
                            }
                        }
                        if ri == r {
                            if let Some(&p) = tpos.get(&bi) {
                                let mrow = datum.coroot_pairing(&mu.add(&datum.alpha(r)), r);
                                acc[p] += u * qnum(mrow, datum.q_node(r));
                            }
                        }
                    }
                    for (p, &g) in target_idx.iter().enumerate() {
                        let v = acc[p] * inv_norm;
                        if v != 0.0 {
                            e_tri[r].push((g, new_idx, v));
                        }
                    }
                }
            }
        }
        if new_level.is_empty() {
            break;
        }
        prev_level = new_level;
    }

    let dim = weights.len();
    let mut e = vec![RMat::zeros(dim, dim); rank];
    let mut f = vec![RMat::zeros(dim, dim); rank];
    for r in 0..rank {
        for &(i, j, v) in &e_tri[r] {
            e[r][(i, j)] += v;
        }
        for &(i, j, v) in &f_tri[r] {
            f[r][(i, j)] += v;
        }
    }
    Ok(Module {
        id: NEXT_MODULE_ID.fetch_add(1, Ordering::Relaxed),
        datum: datum.clone(),
        label: format!("V{:?}", lambda.0),
        weights,
        e,
        f,
        highest: Some(0),
    })
}

/// One dimensional module where every E_r and F_r acts as zero and every
/// L_omega acts as one.
pub fn trivial_module(datum: &RootDatum) -> Module {
    Module {
        id: NEXT_MODULE_ID.fetch_add(1, Ordering::Relaxed),
        datum: datum.clone(),
        label: "V[trivial]".into(),
        weights: vec![Weight::zero(datum.rank)],
        e: vec![RMat::zeros(1, 1); datum.rank],
        f: vec![RMat::zeros(1, 1); datum.rank],
        highest: Some(0),
    }
}

/// Conjugate module: the same underlying space with conjugate-linear
/// identification. Generators act through the unitary antipode of the star:
/// E -> -F^conj, F -> -E^conj, and all weights flip sign.
pub fn conjugate_module(v: &Module) -> Module {
    Module {
        id: NEXT_MODULE_ID.fetch_add(1, Ordering::Relaxed),
        datum: v.datum.clone(),
        label: format!("conj({})", v.label),
        weights: v.weights.iter().map(|w| w.neg()).collect(),
        e: v.f.iter().map(|m| -m.clone()).collect(),
        f: v.e.iter().map(|m| -m.clone()).collect(),
        highest: None,
    }
}

/// Tensor product module via the coproduct: the first factor owns the slow
/// Kronecker index.
pub fn tensor_module(a: &Module, b: &Module) -> Module {
    let rank = a.datum.rank;
    let (da, db) = (a.dim(), b.dim());
    let mut weights = Vec::with_capacity(da * db);
    for wa in &a.weights {
        for wb in &b.weights {
            weights.push(wa.add(wb));
        }
    }
    let mut e = Vec::with_capacity(rank);
    let mut f = Vec::with_capacity(rank);
    for r in 0..rank {
        let alpha = a.datum.alpha(r);
        let la_inv = a.l_matrix(&alpha.neg());
        let lb = b.l_matrix(&alpha);
        e.push(a.e[r].kronecker(&lb) + la_inv.kronecker(&b.e[r]));
        f.push(a.f[r].kronecker(&lb) + la_inv.kronecker(&b.f[r]));
    }
    Module {
        id: NEXT_MODULE_ID.fetch_add(1, Ordering::Relaxed),
        datum: a.datum.clone(),
        label: format!("{} (x) {}", a.label, b.label),
        weights,
        e,
        f,
        highest: None,
    }
}

/// Extremal weight vector h_{w lambda}, built by normalized divided lowering
/// along the reduced word of w processed right to left. All coefficients are
/// real and the leading normalization is positive, which fixes the phase.
pub fn extremal_vector(v: &Module, w: &crate::roots::WeylElt) -> Result<(CVec, Weight)> {
    let h = v
        .highest
        .ok_or_else(|| Error::InvalidParameter("module has no highest weight vector".into()))?;
    let mut vec = CVec::zeros(v.dim());
    vec[h] = c64(1.0);
    let mut mu = v.weights[h].clone();
    for &j in w.word().iter().rev() {
        let m = v.datum.coroot_pairing(&mu, j);
        debug_assert!(m >= 0, "reduced word step must see a dominant pairing");
        for _ in 0..m {
            vec = apply_real(&v.f[j], &vec);
        }
        let n = vec.norm();
        if n == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "extremal string collapsed at node {j}"
            )));
        }
        vec /= c64(n);
        mu = mu.sub(&v.datum.alpha(j).scale(m));
    }
    Ok((vec, mu))
}

/// Orthonormal basis (columns) of the span of raising-operator monomials
/// applied to the extremal vector at w^{-1} lambda.
pub fn demazure_span(v: &Module, w: &crate::roots::WeylElt) -> Result<CMat> {
    let winv = v.datum.inverse(w);
    let (seed, _) = extremal_vector(v, &winv)?;
    let mut basis: Vec<CVec> = vec![seed.clone()];
    let mut frontier = vec![seed];
    while let Some(x) = frontier.pop() {
        for r in 0..v.datum.rank {
            let img = apply_real(&v.e[r], &x);
            if img.norm() > 1e-12 && crate::linalg::extend_orthonormal(&mut basis, &img, 1e-9) {
                frontier.push(basis.last().unwrap().clone());
            }
        }
    }
    let mut out = CMat::zeros(v.dim(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    Ok(out)
}

/// Orthonormal basis of the joint invariant subspace for the parabolic
/// subalgebra at `subset`: weight-zero vectors killed by E_s and F_s.
pub fn invariant_subspace(v: &Module, subset: &[usize]) -> CMat {
    let zero_idx: Vec<usize> = (0..v.dim()).filter(|&i| v.weights[i].is_zero()).collect();
    if zero_idx.is_empty() {
        return CMat::zeros(v.dim(), 0);
    }
    let rows_per = v.dim();
    let mut stacked = RMat::zeros(2 * subset.len() * rows_per, zero_idx.len());
    for (si, &s) in subset.iter().enumerate() {
        for (cj, &j) in zero_idx.iter().enumerate() {
            for i in 0..rows_per {
                stacked[(2 * si * rows_per + i, cj)] = v.e[s][(i, j)];
                stacked[((2 * si + 1) * rows_per + i, cj)] = v.f[s][(i, j)];
            }
        }
    }
    let ns = if subset.is_empty() {
        RMat::identity(zero_idx.len(), zero_idx.len())
    } else {
        crate::linalg::nullspace_real(&stacked, 1e-10)
    };
    let mut out = CMat::zeros(v.dim(), ns.ncols());
    for j in 0..ns.ncols() {
        for (cj, &i) in zero_idx.iter().enumerate() {
            out[(i, j)] = c64(ns[(cj, j)]);
        }
    }
    out
}

/// Orthogonal projector onto the parabolic invariant subspace.
pub fn invariant_projector(v: &Module, subset: &[usize]) -> CMat {
    let b = invariant_subspace(v, subset);
    &b * b.adjoint()
}

/// Restriction of the module to the span of parabolic monomials applied to a
/// seed vector: returns an orthonormal basis of the smallest subspace
/// containing the seed and closed under E_s, F_s for s in subset.
pub fn parabolic_closure(v: &Module, subset: &[usize], seed: &CVec) -> CMat {
    let mut basis: Vec<CVec> = Vec::new();
    let n = seed.norm();
    assert!(n > 0.0, "seed vector must be nonzero");
    basis.push(seed / c64(n));
    let mut frontier = vec![basis[0].clone()];
    while let Some(x) = frontier.pop() {
        for &s in subset {
            for m in [&v.e[s], &v.f[s]] {
                let img = apply_real(m, &x);
                if img.norm() > 1e-12
                    && crate::linalg::extend_orthonormal(&mut basis, &img, 1e-9)
                {
                    frontier.push(basis.last().unwrap().clone());
                }
            }
        }
    }
    let mut out = CMat::zeros(v.dim(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Weight of one column of an orthonormal basis matrix; errors if the column
/// mixes weight spaces.
fn column_weight(v: &Module, basis: &CMat, col: usize) -> Result<Weight> {
    let mut found: Option<Weight> = None;
    for i in 0..v.dim() {
        if basis[(i, col)].norm() > 1e-9 {
            match &found {
                None => found = Some(v.weights[i].clone()),
                Some(w) if *w == v.weights[i] => {}
                Some(_) => {
                    return Err(Error::Decomposition {
                        node: col,
                        detail: "closure basis column mixes weight spaces".into(),
                    })
                }
            }
        }
    }
    found.ok_or_else(|| Error::Decomposition {
        node: col,
        detail: "closure basis column vanishes".into(),
    })
}

/// The invariant ket of the parabolic subalgebra inside the conjugate tensor
/// square of `v`, restricted to the closure of the lowest weight vector.
/// Returns the host module conj(v) (x) v together with normalized
/// coordinates: the coefficient on the extremal pair at w^{-1} lambda is
/// exactly one, and every other component sits on strictly lower weight
/// pairs. Errors if the invariant is not one-dimensional.
pub fn invariant_vector(
    v: &Module,
    subset: &[usize],
    w: &crate::roots::WeylElt,
) -> Result<(Module, CVec)> {
    let datum = &v.datum;
    let w0 = datum.longest_element();
    let (seed, _) = extremal_vector(v, &w0)?;
    let closure = parabolic_closure(v, subset, &seed);
    let cols = closure.ncols();
    let weights: Vec<Weight> = (0..cols)
        .map(|j| column_weight(v, &closure, j))
        .collect::<Result<_>>()?;
    let dim = v.dim();
    let host = tensor_module(&conjugate_module(v), v);

    // Zero-weight pairs conj(b_k) (x) b_l of the closure, as host columns.
    let mut pair_cols: Vec<CVec> = Vec::new();
    for k in 0..cols {
        for l in 0..cols {
            if weights[k] != weights[l] {
                continue;
            }
            let mut col = CVec::zeros(dim * dim);
            for i in 0..dim {
                for j in 0..dim {
                    col[i * dim + j] += closure[(i, k)].conj() * closure[(j, l)];
                }
            }
            pair_cols.push(col);
        }
    }
    if pair_cols.is_empty() {
        return Err(Error::InvariantDimension {
            found: 0,
            expected: 1,
        });
    }

    // Invariance under the parabolic generators, solved over the reals: every
    // module matrix and closure column is real by the phase convention.
    let coeffs = if subset.is_empty() {
        if pair_cols.len() != 1 {
            return Err(Error::InvariantDimension {
                found: pair_cols.len(),
                expected: 1,
            });
        }
        RVec::from_element(1, 1.0)
    } else {
        let rows = 2 * subset.len() * dim * dim;
        let mut stacked = RMat::zeros(rows, pair_cols.len());
        for (cj, col) in pair_cols.iter().enumerate() {
            let max_imag = col.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if max_imag > 1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "complex closure pair (imaginary mass {max_imag:.3e})"
                )));
            }
            for (si, &s) in subset.iter().enumerate() {
                let ecol = apply_real(&host.e[s], col);
                let fcol = apply_real(&host.f[s], col);
                for i in 0..dim * dim {
                    stacked[((2 * si) * dim * dim + i, cj)] = ecol[i].re;
                    stacked[((2 * si + 1) * dim * dim + i, cj)] = fcol[i].re;
                }
            }
        }
        let ns = crate::linalg::nullspace_real(&stacked, 1e-10);
        if ns.ncols() != 1 {
            return Err(Error::InvariantDimension {
                found: ns.ncols(),
                expected: 1,
            });
        }
        ns.column(0).into_owned()
    };

    let mut ket = CVec::zeros(dim * dim);
    for (cj, col) in pair_cols.iter().enumerate() {
        ket += col.map(|z| z * c64(coeffs[cj]));
    }

    // Unit coefficient on the extremal pair.
    let winv = datum.inverse(w);
    let (hw, hw_wt) = extremal_vector(v, &winv)?;
    let mut extremal_pair = CVec::zeros(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            extremal_pair[i * dim + j] = hw[i].conj() * hw[j];
        }
    }
    let lead = extremal_pair.dotc(&ket);
    if lead.norm() < 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "invariant ket has no extremal component (got {:.3e})",
            lead.norm()
        )));
    }
    let ket = ket.map(|z| z / lead);

    // Support control: every contribution pairs equal weights at or below the
    // extremal weight.
    for i in 0..dim {
        for j in 0..dim {
            if ket[i * dim + j].norm() > 1e-9 {
                if v.weights[i] != v.weights[j] {
                    return Err(Error::Decomposition {
                        node: i,
                        detail: "invariant ket mixes weight pairs".into(),
                    });
                }
                if datum.positive_height(&hw_wt.sub(&v.weights[j])).is_none() {
                    return Err(Error::Decomposition {
                        node: j,
                        detail: "invariant ket escapes the lower cone".into(),
                    });
                }
            }
        }
    }
    Ok((host, ket))
}

/// Evaluate a multi-leg word sum on a tensor power of modules (legs may be
/// distinct modules). Returns the dense matrix on the Kronecker product
/// space, first leg slowest.
pub fn multiword_matrix(mods: &[&Module], x: &MultiWordSum) -> CMat {
    assert_eq!(mods.len(), x.nlegs);
    let total: usize = mods.iter().map(|m| m.dim()).product();
    let mut acc = CMat::zeros(total, total);
    for term in &x.terms {
        let mut kron = CMat::identity(1, 1);
        for (leg, module) in term.legs.iter().zip(mods) {
            let w = GenWord::from_factors(c64(1.0), leg.clone());
            let m = module.word_matrix(&w);
            kron = kron.kronecker(&m);
        }
        acc += kron.map(|z| z * term.scalar);
    }
    acc
}

/// Residuals of the defining relations evaluated in a module: weight
/// relations, commutator relations, and quantum Serre relations. Returns the
/// maximum Frobenius residual found.
pub fn relation_residual(v: &Module) -> f64 {
    let datum = &v.datum;
    let mut worst: f64 = 0.0;
    for r in 0..datum.rank {
        for s in 0..datum.rank {
            let rel = crate::uqalg::commutator_relation(datum, r, s);
            worst = worst.max(crate::linalg::frobenius(&v.wordsum_matrix(&rel)));
            if r != s {
                for lowering in [false, true] {
                    let serre = crate::uqalg::serre_element(datum, r, s, lowering);
                    worst = worst.max(crate::linalg::frobenius(&v.wordsum_matrix(&serre)));
                }
            }
        }
        for omega_idx in 0..datum.rank {
            let omega = Weight::fundamental(datum.rank, omega_idx);
            for lowering in [false, true] {
                let rel = crate::uqalg::weight_relation(datum, &omega, r, lowering);
                worst = worst.max(crate::linalg::frobenius(&v.wordsum_matrix(&rel)));
            }
        }
    }
    worst
}

/// Defect data for the rescaled generators E' = b E_r, F' = b F_r,
/// L' = b^{-1} L_{alpha_r}: the rescaled commutator relation is exact for
/// every b, while the distance to the degenerate relation (Cartan term with
/// the positive part removed) shrinks like b^4 relative to the norm of L'^2.
pub struct RescaleDefect {
    /// Residual of the exact rescaled relation; roundoff only.
    pub exact_residual: f64,
    /// Frobenius distance from [E',F'] to -L'^{-2}/(q_r - q_r^{-1}).
    pub defect_abs: f64,
    /// defect_abs normalized by |L'^2|, which decays exactly like b^4.
    pub defect_rel: f64,
}

pub fn rescaled_commutator_defect(v: &Module, r: usize, b: f64) -> RescaleDefect {
    assert!(b > 0.0 && b <= 1.0, "rescale parameter must lie in (0, 1]");
    let datum = &v.datum;
    let qr = datum.q_node(r);
    let denom = qr - 1.0 / qr;
    let e = v.e[r].map(|x| b * x);
    let f = v.f[r].map(|x| b * x);
    let alpha2 = datum.alpha(r).scale(2);
    let l2 = v.l_matrix(&alpha2).map(|x| x / (b * b));
    let l2inv = v.l_matrix(&alpha2.neg()).map(|x| x * b * b);
    let comm = &e * &f - &f * &e;
    let exact = &comm - (l2.map(|x| b.powi(4) * x) - &l2inv).map(|x| x / denom);
    let defect = &comm + l2inv.map(|x| x / denom);
    let l2_norm = crate::linalg::frobenius_real(&l2);
    RescaleDefect {
        exact_residual: crate::linalg::frobenius_real(&exact),
        defect_abs: crate::linalg::frobenius_real(&defect),
        defect_rel: crate::linalg::frobenius_real(&defect) / l2_norm,
    }
}

/// One irreducible chain for the rank one subalgebra at a node: an
/// orthonormal ladder from a raising-kernel vector downward, all real.
#[derive(Clone, Debug)]
pub struct NodeString {
    pub two_j: i64,
    pub vectors: Vec<crate::linalg::RVec>,
}

/// Decompose a module into orthonormal chains for the subalgebra at `node`.
/// Every chain starts in the kernel of E_node inside a single weight space
/// and has length fixed by the coroot pairing there.
pub fn node_strings(v: &Module, node: usize) -> Result<Vec<NodeString>> {
    let groups = v.weight_indices();
    let mut keys: Vec<Weight> = groups.keys().cloned().collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    let mut strings = Vec::new();
    let mut covered = 0usize;
    for mu in keys {
        let idx = &groups[&mu];
        let mut sub = RMat::zeros(v.dim(), idx.len());
        for (c, &j) in idx.iter().enumerate() {
            sub.set_column(c, &v.e[node].column(j));
        }
        let ns = crate::linalg::nullspace_real(&sub, 1e-10);
        if ns.ncols() == 0 {
            continue;
        }
        let two_j = v.datum.coroot_pairing(&mu, node);
        if two_j < 0 {
            return Err(Error::Decomposition {
                node,
                detail: format!("raising kernel at pairing {two_j} cannot head a chain"),
            });
        }
        for c in 0..ns.ncols() {
            let mut top = crate::linalg::RVec::zeros(v.dim());
            for (ci, &j) in idx.iter().enumerate() {
                top[j] = ns[(ci, c)];
            }
            let mut vectors = vec![top.clone()];
            let mut cur = top;
            for step in 1..=two_j {
                cur = &v.f[node] * cur;
                let nrm = cur.norm();
                if nrm < 1e-9 {
                    return Err(Error::Decomposition {
                        node,
                        detail: format!("chain collapsed at step {step} of {two_j}"),
                    });
                }
                cur /= nrm;
                vectors.push(cur.clone());
            }
            if (&v.f[node] * &cur).norm() > 1e-8 {
                return Err(Error::Decomposition {
                    node,
                    detail: "chain failed to terminate at the predicted length".into(),
                });
            }
            covered += vectors.len();
            strings.push(NodeString { two_j, vectors });
        }
    }
    if covered != v.dim() {
        return Err(Error::Decomposition {
            node,
            detail: format!("chains cover {covered} of {} dimensions", v.dim()),
        });
    }
    Ok(strings)
}

/// Count highest weight vectors per weight (joint kernel of all raising
/// operators restricted to each weight space) and compare the sum of squared
/// multiplicities with the dimension of the self-intertwiner space.
pub fn decomposition_multiplicities(v: &Module) -> HashMap<Weight, usize> {
    let mut out = HashMap::new();
    for (mu, idx) in v.weight_indices() {
        let rows = v.dim();
        let mut stacked = RMat::zeros(v.datum.rank * rows, idx.len());
        for r in 0..v.datum.rank {
            for (cj, &j) in idx.iter().enumerate() {
                for i in 0..rows {
                    stacked[(r * rows + i, cj)] = v.e[r][(i, j)];
                }
            }
        }
        let ns = crate::linalg::nullspace_real(&stacked, 1e-10);
        if ns.ncols() > 0 {
            out.insert(mu, ns.ncols());
        }
    }
    out
}

/// Dimension of the space of module maps commuting with every generator.
pub fn self_intertwiner_dim(v: &Module) -> usize {
    let n = v.dim();
    let mut rows: Vec<RMat> = Vec::new();
    for r in 0..v.datum.rank {
        for g in [&v.e[r], &v.f[r]] {
            // [X, g] = 0 as linear constraint on vec(X), row-major X
            let mut m = RMat::zeros(n * n, n * n);
            for i in 0..n {
                for j in 0..n {
                    let row = i * n + j;
                    for k in 0..n {
                        // (X g)_{ij} = X_{ik} g_{kj}
                        m[(row, i * n + k)] += g[(k, j)];
                        // (g X)_{ij} = g_{ik} X_{kj}
                        m[(row, k * n + j)] -= g[(i, k)];
                    }
                }
            }
            rows.push(m);
        }
    }
    // weight-preservation constraint: X must commute with every L, i.e.
    // vanish between distinct weights
    let mut lmask = RMat::zeros(n * n, n * n);
    let mut extra = 0;
    for i in 0..n {
        for j in 0..n {
            if v.weights[i] != v.weights[j] {
                lmask[(extra, i * n + j)] = 1.0;
                extra += 1;
            }
        }
    }
    let total_rows: usize = rows.iter().map(|m| m.nrows()).sum::<usize>() + extra;
    let mut stacked = RMat::zeros(total_rows, n * n);
    let mut at = 0;
    for m in rows {
        stacked.view_mut((at, 0), (m.nrows(), n * n)).copy_from(&m);
        at += m.nrows();
    }
    stacked
        .view_mut((at, 0), (extra, n * n))
        .copy_from(&lmask.view((0, 0), (extra, n * n)));
    crate::linalg::nullspace_real(&stacked, 1e-10).ncols()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{LieType, RootDatum};

    fn datum(t: LieType, rank: usize, q: f64) -> RootDatum {
        RootDatum::new(t, rank, q).unwrap()
    }

    /// Weyl dimension formula, exact in rationals.
    fn weyl_dim(d: &RootDatum, lambda: &Weight) -> i64 {
        let rho = d.rho();
        let mut num = Rat::from_integer(1);
        let mut den = Rat::from_integer(1);
        for alpha in d.positive_roots() {
            num *= d.pairing(&lambda.add(&rho), &alpha);
            den *= d.pairing(&rho, &alpha);
        }
        let dim = num / den;
        assert!(dim.denom() == &1);
        *dim.numer()
    }

    #[test]
    fn weyl_dimension_oracle_frozen_values() {
        let a1 = datum(LieType::A, 1, 0.5);
        assert_eq!(weyl_dim(&a1, &Weight(vec![1])), 2);
        assert_eq!(weyl_dim(&a1, &Weight(vec![2])), 3);
        let a2 = datum(LieType::A, 2, 0.5);
        assert_eq!(weyl_dim(&a2, &Weight(vec![1, 0])), 3);
        assert_eq!(weyl_dim(&a2, &Weight(vec![0, 1])), 3);
        assert_eq!(weyl_dim(&a2, &Weight(vec![1, 1])), 8);
        let b2 = datum(LieType::B, 2, 0.5);
        assert_eq!(weyl_dim(&b2, &Weight(vec![1, 0])), 5);
        assert_eq!(weyl_dim(&b2, &Weight(vec![0, 1])), 4);
        assert_eq!(weyl_dim(&b2, &Weight(vec![1, 1])), 16);
        let a3 = datum(LieType::A, 3, 0.5);
        assert_eq!(weyl_dim(&a3, &Weight(vec![1, 0, 0])), 4);
        assert_eq!(weyl_dim(&a3, &Weight(vec![0, 1, 0])), 6);
        let g2 = datum(LieType::G, 2, 0.5);
        assert_eq!(weyl_dim(&g2, &Weight(vec![1, 0])), 7);
        assert_eq!(weyl_dim(&g2, &Weight(vec![0, 1])), 14);
    }

    #[test]
    fn a1_fundamental_matches_hand_values() {
        let d = datum(LieType::A, 1, 0.5);
        let v = build_irrep(&d, &Weight(vec![1])).unwrap();
        assert_eq!(v.dim(), 2);
        let om = Weight(vec![1]);
        let l = v.l_diag(&om);
        let q: f64 = 0.5;
        assert!((l[0] - q.powf(0.25)).abs() < 1e-15);
        assert!((l[1] - q.powf(-0.25)).abs() < 1e-15);
        assert!((v.e[0][(0, 1)] - 1.0).abs() < 1e-14);
        assert!((v.f[0][(1, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimensions_match_weyl_formula() {
        for (t, rank, lam) in [
            (LieType::A, 2, vec![1, 1]),
            (LieType::A, 2, vec![2, 0]),
            (LieType::B, 2, vec![1, 0]),
            (LieType::B, 2, vec![0, 1]),
            (LieType::B, 2, vec![1, 1]),
            (LieType::C, 2, vec![1, 0]),
            (LieType::A, 3, vec![0, 1, 0]),
            (LieType::G, 2, vec![1, 0]),
        ] {
            let d = datum(t, rank, 0.5);
            let lam = Weight(lam);
            let v = build_irrep(&d, &lam).unwrap();
            assert_eq!(v.dim() as i64, weyl_dim(&d, &lam), "{t:?}{rank} {lam:?}");
        }
    }

    #[test]
    fn relations_hold_in_built_modules() {
        for (t, rank, lam, q) in [
            (LieType::A, 2, vec![1, 1], 0.5),
            (LieType::B, 2, vec![1, 1], 0.7),
            (LieType::G, 2, vec![1, 0], 0.6),
        ] {
            let d = datum(t, rank, q);
            let v = build_irrep(&d, &Weight(lam)).unwrap();
            assert!(relation_residual(&v) < 1e-9);
        }
    }

    #[test]
    fn generators_are_mutually_adjoint() {
        let d = datum(LieType::B, 2, 0.45);
        let v = build_irrep(&d, &Weight(vec![1, 1])).unwrap();
        for r in 0..2 {
            let diff = &v.e[r] - v.f[r].transpose();
            assert!(crate::linalg::frobenius_real(&diff) < 1e-10);
        }
    }

    #[test]
    fn nondominant_weight_is_rejected() {
        let d = datum(LieType::A, 2, 0.5);
        assert!(matches!(
            build_irrep(&d, &Weight(vec![1, -1])),
            Err(Error::NotDominant(_))
        ));
    }

    #[test]
    fn conjugate_module_swaps_highest_and_lowest() {
        let d = datum(LieType::A, 2, 0.5);
        let lam = Weight(vec![1, 0]);
        let v = build_irrep(&d, &lam).unwrap();
        let vc = conjugate_module(&v);
        assert!(relation_residual(&vc) < 1e-10);
        // the conjugate of the highest vector is a lowest weight vector
        let mut h = CVec::zeros(3);
        h[0] = c64(1.0);
        for r in 0..2 {
            assert!(apply_real(&vc.f[r], &h).norm() < 1e-14);
        }
        assert_eq!(vc.weights[0], lam.neg());
        // highest weight of the conjugate is the bar involution image
        let bar = d.bar_involution(&lam);
        let top = vc
            .weights
            .iter()
            .position(|w| *w == bar)
            .expect("bar weight present");
        let mut hv = CVec::zeros(3);
        hv[top] = c64(1.0);
        for r in 0..2 {
            assert!(apply_real(&vc.e[r], &hv).norm() < 1e-14);
        }
    }

    #[test]
    fn tensor_module_satisfies_relations_and_decomposes() {
        let d = datum(LieType::A, 1, 0.5);
        let v = build_irrep(&d, &Weight(vec![1])).unwrap();
        let t = tensor_module(&v, &v);
        assert!(relation_residual(&t) < 1e-10);
        // spin 1/2 (x) spin 1/2 = spin 1 + spin 0
        let mults = decomposition_multiplicities(&t);
        assert_eq!(mults.get(&Weight(vec![2])), Some(&1));
        assert_eq!(mults.get(&Weight(vec![0])), Some(&1));
        let sq: usize = mults.values().map(|m| m * m).sum();
        assert_eq!(sq, self_intertwiner_dim(&t));
    }

    #[test]
    fn a2_mixed_tensor_intertwiners() {
        let d = datum(LieType::A, 2, 0.5);
        let v1 = build_irrep(&d, &Weight(vec![1, 0])).unwrap();
        let v2 = build_irrep(&d, &Weight(vec![0, 1])).unwrap();
        let t = tensor_module(&v1, &v2);
        // 3 (x) 3bar = 8 + 1
        let sq: usize = decomposition_multiplicities(&t)
            .values()
            .map(|m| m * m)
            .sum();
        assert_eq!(sq, 2);
        assert_eq!(self_intertwiner_dim(&t), 2);
    }

    #[test]
    fn extremal_vectors_live_on_extremal_weights() {
        let d = datum(LieType::B, 2, 0.5);
        let lam = Weight(vec![1, 1]);
        let v = build_irrep(&d, &lam).unwrap();
        let w0 = d.longest_element();
        let (low, mu) = extremal_vector(&v, &w0).unwrap();
        assert_eq!(mu, w0.apply(&lam));
        for r in 0..2 {
            assert!(apply_real(&v.f[r], &low).norm() < 1e-12);
        }
        // extremal weight spaces are one dimensional
        let count = v.weights.iter().filter(|w| **w == mu).count();
        assert_eq!(count, 1);
        // E_r kills h_{w^{-1} lambda} when s_r w^{-1} is longer than w^{-1}
        let w = d.shortest_coset_rep(&[0]);
        let winv = d.inverse(&w);
        let (hv, hw) = extremal_vector(&v, &winv).unwrap();
        assert_eq!(hw, winv.apply(&lam));
        for r in 0..2 {
            let longer = d.compose(&d.simple_reflection(r), &winv).length() > winv.length();
            let norm = apply_real(&v.e[r], &hv).norm();
            if longer {
                assert!(norm < 1e-12, "node {r} should annihilate");
            }
        }
    }

    #[test]
    fn demazure_spans_nest_along_subwords() {
        let d = datum(LieType::A, 2, 0.5);
        let v = build_irrep(&d, &Weight(vec![1, 1])).unwrap();
        let w0 = d.longest_element();
        let full = demazure_span(&v, &w0).unwrap();
        assert_eq!(full.ncols(), v.dim());
        let id = d.weyl_identity();
        let trivial = demazure_span(&v, &id).unwrap();
        assert_eq!(trivial.ncols(), 1);
        // one-step span contains the trivial span
        let s1 = d.simple_reflection(0);
        let span1 = demazure_span(&v, &s1).unwrap();
        let seed = trivial.column(0);
        let proj = &span1 * (span1.adjoint() * seed);
        assert!((proj - seed).norm() < 1e-10);
    }

    #[test]
    fn invariant_subspace_of_parabolic_restriction() {
        let d = datum(LieType::A, 2, 0.5);
        let v1 = build_irrep(&d, &Weight(vec![1, 0])).unwrap();
        let t = tensor_module(&conjugate_module(&v1), &v1);
        // full invariants: one copy of the trivial module inside 3bar (x) 3
        let inv = invariant_subspace(&t, &[0, 1]);
        assert_eq!(inv.ncols(), 1);
        // weight-zero invariants for the empty subset: all weight-zero vectors
        let inv0 = invariant_subspace(&t, &[]);
        assert_eq!(inv0.ncols(), 3);
        let p = invariant_projector(&t, &[0, 1]);
        assert!((&p * &p - &p).norm() < 1e-10);
    }

    #[test]
    fn rescaled_defect_scales_as_fourth_power() {
        let d = datum(LieType::A, 2, 0.5);
        let v = build_irrep(&d, &Weight(vec![1, 0])).unwrap();
        let base = rescaled_commutator_defect(&v, 0, 1.0);
        assert!(base.exact_residual < 1e-12);
        let d01 = rescaled_commutator_defect(&v, 0, 0.1);
        assert!(d01.exact_residual < 1e-12);
        let ratio = d01.defect_rel / rescaled_commutator_defect(&v, 0, 1.0).defect_rel;
        assert!((ratio - 1e-4).abs() < 1e-9);
        // monotone decreasing on (0, 1]
        let mut last = f64::MAX;
        for b in [1.0, 0.5, 0.1, 0.01] {
            let def = rescaled_commutator_defect(&v, 0, b).defect_rel;
            assert!(def < last);
            last = def;
        }
    }

    #[test]
    fn node_chains_are_orthonormal_and_complete() {
        let d = datum(LieType::B, 2, 0.5);
        let v = build_irrep(&d, &Weight(vec![1, 1])).unwrap();
        for node in 0..2 {
            let strings = node_strings(&v, node).unwrap();
            let total: usize = strings.iter().map(|s| s.vectors.len()).sum();
            assert_eq!(total, v.dim());
            let all: Vec<&crate::linalg::RVec> =
                strings.iter().flat_map(|s| s.vectors.iter()).collect();
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate() {
                    let dot = a.dot(b);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-9, "node {node} pair {i},{j}");
                }
            }
            // chain members carry the weights of an irreducible ladder
            for s in &strings {
                for (k, u) in s.vectors.iter().enumerate() {
                    let hot = (0..v.dim()).find(|&i| u[i].abs() > 1e-9).unwrap();
                    let pairing = d.coroot_pairing(&v.weights[hot], node);
                    assert_eq!(pairing, s.two_j - 2 * k as i64);
                }
            }
        }
    }

    #[test]
    fn hopf_axioms_hold_in_modules() {
        use crate::uqalg::*;
        let d = datum(LieType::B, 2, 0.5);
        let v = build_irrep(&d, &Weight(vec![0, 1])).unwrap();
        let gens: Vec<WordSum> = (0..2)
            .flat_map(|r| {
                vec![
                    WordSum::gen(Sym::E(r)),
                    WordSum::gen(Sym::F(r)),
                    WordSum::gen(Sym::L(Weight::fundamental(2, r))),
                ]
            })
            .collect();
        for x in &gens {
            // coassociativity via both nestings against the 3-leg coproduct
            let c3 = iterated_coproduct(&d, x, 3);
            let m3 = multiword_matrix(&[&v, &v, &v], &c3);
            let c2 = coproduct(&d, x);
            let mut alt = CMat::zeros(m3.nrows(), m3.ncols());
            for t in &c2.terms {
                let left = WordSum::from_word(GenWord::from_factors(t.scalar, t.legs[0].clone()));
                let right =
                    WordSum::from_word(GenWord::from_factors(c64(1.0), t.legs[1].clone()));
                let lc = coproduct(&d, &left);
                let lm = multiword_matrix(&[&v, &v], &lc);
                let rm = v.wordsum_matrix(&right);
                alt += lm.kronecker(&rm);
            }
            assert!(crate::linalg::frobenius(&(m3.clone() - alt)) < 1e-10);

            // antipode axiom: m(S (x) id)(coproduct) = counit * 1
            let mut anti = CMat::zeros(v.dim(), v.dim());
            for t in &c2.terms {
                let s1 = antipode(
                    &d,
                    &WordSum::from_word(GenWord::from_factors(t.scalar, t.legs[0].clone())),
                );
                let y2 = WordSum::from_word(GenWord::from_factors(c64(1.0), t.legs[1].clone()));
                anti += v.wordsum_matrix(&s1.mul(&y2));
            }
            let target = CMat::identity(v.dim(), v.dim()).map(|z| z * counit(x));
            assert!(crate::linalg::frobenius(&(anti - target)) < 1e-10);

            // star compatibility: pi(x^*) = pi(x)^dagger
            let sx = v.wordsum_matrix(&star(x));
            let xd = v.wordsum_matrix(x).adjoint();
            assert!(crate::linalg::frobenius(&(sx - xd)) < 1e-10);

            // square of the antipode is conjugation by L_{-4 rho}
            let s2 = antipode(&d, &antipode(&d, x));
            let m4rho = Weight(vec![-4, -4]);
            let conj = WordSum::gen(Sym::L(m4rho.neg()))
                .mul(x)
                .mul(&WordSum::gen(Sym::L(m4rho)));
            let diff = v.wordsum_matrix(&s2) - v.wordsum_matrix(&conj);
            assert!(crate::linalg::frobenius(&diff) < 1e-10);

            // unitary antipode: R(x) = L_{-2rho} S(x) L_{2rho}
            let rho2 = Weight(vec![2, 2]);
            let ru = unitary_antipode(x);
            let via_s = WordSum::gen(Sym::L(rho2.neg()))
                .mul(&antipode(&d, x))
                .mul(&WordSum::gen(Sym::L(rho2.clone())));
            let diff2 = v.wordsum_matrix(&ru) - v.wordsum_matrix(&via_s);
            assert!(crate::linalg::frobenius(&diff2) < 1e-10);
        }
    }

    #[test]
    fn adjoint_action_weight_factor_vanishes_off_node() {
        let d = datum(LieType::A, 2, 0.5);
        let v = build_irrep(&d, &Weight(vec![1, 1])).unwrap();
        for s in 0..2 {
            for r in 0..2 {
                let l = WordSum::gen(Sym::L(Weight::fundamental(2, s).scale(-4)));
                let e = WordSum::gen(Sym::E(r));
                let acted = crate::uqalg::adjoint_action(&d, &l, &e);
                let m = v.wordsum_matrix(&acted);
                let norm = crate::linalg::frobenius(&m);
                if s == r {
                    assert!(norm > 1e-3, "diagonal action must not vanish");
                } else {
                    assert!(norm < 1e-12, "off-node action must vanish");
                }
            }
        }
    }

    #[test]
    fn serre_adjoint_nilpotency() {
        // L_{-4 omega_s} <| (E_s E_r^{1 - a_rs}) = 0, the degenerate-limit
        // form of the Serre relations
        let d = datum(LieType::B, 2, 0.5);
        let v = build_irrep(&d, &Weight(vec![1, 1])).unwrap();
        for s in 0..2 {
            for r in 0..2 {
                if r == s {
                    continue;
                }
                let mut y = WordSum::gen(Sym::E(s));
                let n = 1 - d.cartan(r, s);
                for _ in 0..n {
                    y = y.mul(&WordSum::gen(Sym::E(r)));
                }
                let l = WordSum::gen(Sym::L(Weight::fundamental(2, s).scale(-4)));
                let acted = crate::uqalg::adjoint_action(&d, &l, &y);
                assert!(crate::linalg::frobenius(&v.wordsum_matrix(&acted)) < 1e-10);
            }
        }
    }

    #[test]
    fn invariant_ket_reduces_to_the_extremal_pair_without_parabolic_nodes() {
        let d = datum(LieType::A, 1, 0.5);
        let v = build_irrep(&d, &Weight(vec![1])).unwrap();
        let w = d.shortest_coset_rep(&[]);
        let (host, ket) = invariant_vector(&v, &[], &w).unwrap();
        assert_eq!(host.dim(), 4);
        // With no parabolic nodes the closure is the lowest weight line, so
        // the ket is exactly the conjugate pair on that line.
        let low = if v.highest == Some(0) { 1 } else { 0 };
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == low && j == low { 1.0 } else { 0.0 };
                assert!((ket[i * 2 + j] - c64(want)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn invariant_ket_is_killed_by_the_parabolic_generators() {
        let d = datum(LieType::A, 2, 0.5);
        let v = build_irrep(&d, &Weight(vec![0, 1])).unwrap();
        let subset = [0usize];
        let w = d.shortest_coset_rep(&subset);
        let (host, ket) = invariant_vector(&v, &subset, &w).unwrap();
        for &s in &subset {
            for m in [&host.e[s], &host.f[s]] {
                let moved = apply_real(m, &ket);
                assert!(moved.norm() < 1e-10, "parabolic generator must kill the ket");
            }
        }
        // Two closure lines pair up, and the subleading coefficient has
        // modulus q^{+-1} as for the rank one quantum trace.
        let support: Vec<f64> = ket.iter().map(|z| z.norm()).filter(|x| *x > 1e-9).collect();
        assert_eq!(support.len(), 2);
        let sub = support.iter().copied().fold(f64::INFINITY, f64::min)
            / support.iter().copied().fold(0.0, f64::max);
        let q = 0.5;
        assert!((sub - q).abs() < 1e-10 || (sub - 1.0 / q).abs() < 1e-10);
    }

    #[test]
    fn invariant_ket_matches_the_full_conjugate_pairing_when_w_is_trivial() {
        // All nodes parabolic: the closure is the whole module and the
        // invariant is the canonical pairing sum with unit head coefficient.
        let d = datum(LieType::A, 2, 0.6);
        let v = build_irrep(&d, &Weight(vec![1, 0])).unwrap();
        let subset = [0usize, 1];
        let w = d.shortest_coset_rep(&subset);
        assert!(w.is_identity());
        let (host, ket) = invariant_vector(&v, &subset, &w).unwrap();
        let h = v.highest.unwrap();
        assert!((ket[h * 3 + h] - c64(1.0)).norm() < 1e-12);
        // Invariance under every generator of the full algebra.
        for s in 0..2 {
            for m in [&host.e[s], &host.f[s]] {
                assert!(apply_real(m, &ket).norm() < 1e-10);
            }
        }
    }
}
