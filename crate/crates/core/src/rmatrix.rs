//! Braiding operators on tensor products of modules. The operator is found
//! numerically as R = Q(1 + T) where Q is the weight-pairing diagonal and T
//! transfers strictly positive weight from the second leg to the first; the
//! intertwiner equation R Delta(x) = Delta^op(x) R for all generators then
//! determines T through an overdetermined linear system. Everything stays
//! real because module matrices and q-powers are real.

use crate::error::Error;
use crate::linalg::{lsq_real, RMat, RVec};
use crate::modules::Module;
use crate::roots::Weight;
use crate::Result;

/// Residual gate for the least squares solve.
pub const SOLVE_RESIDUAL_GATE: f64 = 1e-9;
/// Singular value ratio below which the system is declared rank deficient.
pub const RANK_GATE: f64 = 1e-10;

pub struct RAction {
    pub dim_a: usize,
    pub dim_b: usize,
    /// Diagonal of Q on the product basis, first leg slowest.
    pub q_diag: Vec<f64>,
    /// Strict weight-transfer part T.
    pub tmat: RMat,
    /// Full operator Q(1 + T).
    pub mat: RMat,
    pub inv: RMat,
}

impl RAction {
    pub fn len(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// Conjugation by the flip: the same braiding seen on b (x) a.
    pub fn r21(&self) -> RMat {
        flip_conjugate(&self.mat, self.dim_a, self.dim_b)
    }

    pub fn inv21(&self) -> RMat {
        flip_conjugate(&self.inv, self.dim_a, self.dim_b)
    }
}

/// P X P for the swap P: b (x) a -> a (x) b; the result acts on b (x) a.
pub fn flip_conjugate(x: &RMat, dim_a: usize, dim_b: usize) -> RMat {
    let n = dim_a * dim_b;
    assert_eq!(x.nrows(), n);
    let mut out = RMat::zeros(n, n);
    for i2 in 0..dim_a {
        for j2 in 0..dim_b {
            for i1 in 0..dim_a {
                for j1 in 0..dim_b {
                    out[(j2 * dim_a + i2, j1 * dim_a + i1)] =
                        x[(i2 * dim_b + j2, i1 * dim_b + j1)];
                }
            }
        }
    }
    out
}

fn coproduct_pair(a: &Module, b: &Module, r: usize, raising: bool) -> (RMat, RMat) {
    let alpha = a.datum.alpha(r);
    let (xa, xb) = if raising {
        (&a.e[r], &b.e[r])
    } else {
        (&a.f[r], &b.f[r])
    };
    let la = a.l_matrix(&alpha);
    let la_inv = a.l_matrix(&alpha.neg());
    let lb = b.l_matrix(&alpha);
    let lb_inv = b.l_matrix(&alpha.neg());
    let delta = xa.kronecker(&lb) + la_inv.kronecker(xb);
    let delta_op = la.kronecker(xb) + xa.kronecker(&lb_inv);
    (delta, delta_op)
}

/// Solve for the braiding on a (x) b.
pub fn universal_r(a: &Module, b: &Module) -> Result<RAction> {
    let datum = &a.datum;
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut q_diag = vec![0.0; n];
    for i in 0..da {
        for j in 0..db {
            q_diag[i * db + j] = datum.q_pow(datum.pairing(&a.weights[i], &b.weights[j]));
        }
    }

    // admissible T positions: (row, col) with a strictly positive root-lattice
    // weight transfer from the second leg to the first
    let mut positions: Vec<(usize, usize)> = Vec::new();
    for ip in 0..da {
        for i in 0..da {
            let beta = a.weights[ip].sub(&a.weights[i]);
            match datum.positive_height(&beta) {
                Some(h) if h >= 1 => {}
                _ => continue,
            }
            for jp in 0..db {
                for j in 0..db {
                    if b.weights[j].sub(&b.weights[jp]) == beta {
                        positions.push((ip * db + jp, i * db + j));
                    }
                }
            }
        }
    }

    let mut tmat = RMat::zeros(n, n);
    if !positions.is_empty() {
        let gens: Vec<(RMat, RMat)> = (0..datum.rank)
            .flat_map(|r| {
                vec![
                    coproduct_pair(a, b, r, true),
                    coproduct_pair(a, b, r, false),
                ]
            })
            .collect();
        let nrows = gens.len() * n * n;
        let mut m = RMat::zeros(nrows, positions.len());
        let mut rhs = RVec::zeros(nrows);
        for (g, (delta, delta_op)) in gens.iter().enumerate() {
            let base = g * n * n;
            for arow in 0..n {
                for bcol in 0..n {
                    let row = base + arow * n + bcol;
                    rhs[row] = delta_op[(arow, bcol)] * q_diag[bcol]
                        - q_diag[arow] * delta[(arow, bcol)];
                    for (p, &(ti, tj)) in positions.iter().enumerate() {
                        let mut c = 0.0;
                        if ti == arow {
                            c += q_diag[arow] * delta[(tj, bcol)];
                        }
                        if tj == bcol {
                            c -= delta_op[(arow, ti)] * q_diag[ti];
                        }
                        if c != 0.0 {
                            m[(row, p)] += c;
                        }
                    }
                }
            }
        }
        let (sol, smin, smax) = lsq_real(&m, &rhs);
        if smin < RANK_GATE * smax {
            return Err(Error::RankDeficient {
                context: format!("braiding solve on {} (x) {}", a.label, b.label),
                sigma: smin,
            });
        }
        let resid = (&m * &sol - &rhs).norm();
        let scale = rhs.norm().max(1.0);
        if resid > SOLVE_RESIDUAL_GATE * scale {
            return Err(Error::ResidualGate {
                context: format!("braiding solve on {} (x) {}", a.label, b.label),
                residual: resid,
                gate: SOLVE_RESIDUAL_GATE * scale,
            });
        }
        for (p, &(ti, tj)) in positions.iter().enumerate() {
            tmat[(ti, tj)] = sol[p];
        }
    }

    let mut mat = tmat.clone();
    for i in 0..n {
        mat[(i, i)] += 1.0;
    }
    for i in 0..n {
        for j in 0..n {
            mat[(i, j)] *= q_diag[i];
        }
    }
    let inv = mat.clone().try_inverse().ok_or_else(|| Error::RankDeficient {
        context: format!("braiding inverse on {} (x) {}", a.label, b.label),
        sigma: 0.0,
    })?;
    Ok(RAction {
        dim_a: da,
        dim_b: db,
        q_diag,
        tmat,
        mat,
        inv,
    })
}

/// Largest intertwiner residual of X over all raising and lowering
/// generators: |X Delta(x) - Delta^op(x) X|.
pub fn intertwiner_residual(a: &Module, b: &Module, x: &RMat) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..a.datum.rank {
        for raising in [true, false] {
            let (delta, delta_op) = coproduct_pair(a, b, r, raising);
            worst = worst.max(crate::linalg::frobenius_real(&(x * delta - delta_op * x)));
        }
    }
    worst
}

/// |R12 R13 R23 - R23 R13 R12| on v (x) v (x) v.
pub fn yang_baxter_residual(v: &Module) -> Result<f64> {
    let r = universal_r(v, v)?;
    let d = v.dim();
    let id = RMat::identity(d, d);
    let r12 = r.mat.kronecker(&id);
    let r23 = id.kronecker(&r.mat);
    // R13 = (P (x) 1)... realized by conjugating R12 with the middle swap
    let mut p23 = RMat::zeros(d * d * d, d * d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                p23[((i * d + k) * d + j, (i * d + j) * d + k)] = 1.0;
            }
        }
    }
    let r13 = &p23 * &r12 * &p23;
    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    Ok(crate::linalg::frobenius_real(&(lhs - rhs)))
}

/// First order weight-transfer part predicted from the generators:
/// sum_r q_r^{-1}(q_r - q_r^{-1}) (L_r E_r) (x) (L_r^{-1} F_r).
pub fn first_order_prediction(a: &Module, b: &Module) -> RMat {
    let datum = &a.datum;
    let n = a.dim() * b.dim();
    let mut out = RMat::zeros(n, n);
    for r in 0..datum.rank {
        let qr = datum.q_node(r);
        let coeff = (qr - 1.0 / qr) / qr;
        let alpha = datum.alpha(r);
        let left = a.l_matrix(&alpha) * &a.e[r];
        let right = b.l_matrix(&alpha.neg()) * &b.f[r];
        out += left.kronecker(&right).map(|x| coeff * x);
    }
    out
}

/// Entries of T whose weight transfer is a single simple root.
pub fn first_order_part(a: &Module, b: &Module, act: &RAction) -> RMat {
    let datum = &a.datum;
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut out = RMat::zeros(n, n);
    for ip in 0..da {
        for i in 0..da {
            let beta = a.weights[ip].sub(&a.weights[i]);
            if (0..datum.rank).all(|r| beta != datum.alpha(r)) {
                continue;
            }
            for jp in 0..db {
                for j in 0..db {
                    if b.weights[j].sub(&b.weights[jp]) == beta {
                        out[(ip * db + jp, i * db + j)] = act.tmat[(ip * db + jp, i * db + j)];
                    }
                }
            }
        }
    }
    out
}

/// Apply R^{-1} to a highest weight vector tensor anything: this is diagonal
/// with eigenvalue q^{-(lambda, wt eta)}.
pub fn inverse_on_extremal_scalar(a: &Module, eta_wt: &Weight) -> f64 {
    let lam = &a.weights[a.highest.expect("highest weight module")];
    1.0 / a.datum.q_pow(a.datum.pairing(lam, eta_wt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{build_irrep, conjugate_module, tensor_module};
    use crate::roots::{LieType, RootDatum, Weight};

    fn a1(q: f64) -> (RootDatum, Module) {
        let d = RootDatum::new(LieType::A, 1, q).unwrap();
        let v = build_irrep(&d, &Weight(vec![1])).unwrap();
        (d, v)
    }

    #[test]
    fn a1_fundamental_golden_matrix() {
        let (_, v) = a1(0.5);
        let r = universal_r(&v, &v).unwrap();
        let q: f64 = 0.5;
        // basis order 11, 12, 21, 22
        let diag = [q.sqrt(), 1.0 / q.sqrt(), 1.0 / q.sqrt(), q.sqrt()];
        let golden = [
            0.7071067811865476,
            1.4142135623730951,
            1.4142135623730951,
            0.7071067811865476,
        ];
        for i in 0..4 {
            assert!((r.mat[(i, i)] - diag[i]).abs() < 1e-12);
            assert!((r.mat[(i, i)] - golden[i]).abs() < 1e-12);
        }
        let offd = q.sqrt() - q.powf(-1.5);
        assert!((offd - -2.1213203435596427).abs() < 1e-14);
        assert!((r.mat[(1, 2)] - offd).abs() < 1e-12);
        let mut others = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && !(i == 1 && j == 2) {
                    others = others.max(r.mat[(i, j)].abs());
                }
            }
        }
        assert!(others < 1e-12);
    }

    #[test]
    fn intertwines_and_inverts() {
        let d = RootDatum::new(LieType::B, 2, 0.55).unwrap();
        let va = build_irrep(&d, &Weight(vec![1, 0])).unwrap();
        let vb = build_irrep(&d, &Weight(vec![0, 1])).unwrap();
        let r = universal_r(&va, &vb).unwrap();
        assert!(intertwiner_residual(&va, &vb, &r.mat) < 1e-9);
        let n = r.len();
        let id = RMat::identity(n, n);
        assert!(crate::linalg::frobenius_real(&(&r.mat * &r.inv - id)) < 1e-9);
    }

    #[test]
    fn yang_baxter_holds() {
        let (_, v) = a1(0.5);
        assert!(yang_baxter_residual(&v).unwrap() < 1e-8);
        let d2 = RootDatum::new(LieType::A, 2, 0.6).unwrap();
        let v3 = build_irrep(&d2, &Weight(vec![1, 0])).unwrap();
        assert!(yang_baxter_residual(&v3).unwrap() < 1e-8);
    }

    #[test]
    fn first_order_transfer_matches_generator_prediction() {
        let (_, v) = a1(0.5);
        let r = universal_r(&v, &v).unwrap();
        let got = first_order_part(&v, &v, &r);
        let want = first_order_prediction(&v, &v);
        assert!(crate::linalg::frobenius_real(&(got - want)) < 1e-9);

        let d2 = RootDatum::new(LieType::A, 2, 0.45).unwrap();
        let v1 = build_irrep(&d2, &Weight(vec![1, 0])).unwrap();
        let v2 = build_irrep(&d2, &Weight(vec![0, 1])).unwrap();
        let r12 = universal_r(&v1, &v2).unwrap();
        let got = first_order_part(&v1, &v2, &r12);
        let want = first_order_prediction(&v1, &v2);
        assert!(crate::linalg::frobenius_real(&(got - want)) < 1e-9);
    }

    #[test]
    fn adjoint_equals_flipped_partner() {
        let d2 = RootDatum::new(LieType::A, 2, 0.5).unwrap();
        let v1 = build_irrep(&d2, &Weight(vec![1, 0])).unwrap();
        let v2 = build_irrep(&d2, &Weight(vec![0, 1])).unwrap();
        let r12 = universal_r(&v1, &v2).unwrap();
        let r21 = universal_r(&v2, &v1).unwrap();
        let diff = r12.mat.transpose() - r21.r21();
        assert!(crate::linalg::frobenius_real(&diff) < 1e-9);
    }

    #[test]
    fn inverse_fixes_extremal_lines() {
        let d = RootDatum::new(LieType::B, 2, 0.5).unwrap();
        let va = build_irrep(&d, &Weight(vec![0, 1])).unwrap();
        let vb = build_irrep(&d, &Weight(vec![1, 0])).unwrap();
        let r = universal_r(&va, &vb).unwrap();
        let h = va.highest.unwrap();
        for j in 0..vb.dim() {
            let flat = h * vb.dim() + j;
            let scalar = inverse_on_extremal_scalar(&va, &vb.weights[j]);
            for i in 0..r.len() {
                let want = if i == flat { scalar } else { 0.0 };
                assert!((r.inv[(i, flat)] - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cabling_identities() {
        let (_, v) = a1(0.5);
        let d = v.dim();
        let vv = tensor_module(&v, &v);
        let r = universal_r(&v, &v).unwrap();
        let id = RMat::identity(d, d);
        let r12 = r.mat.kronecker(&id);
        let r23 = id.kronecker(&r.mat);
        let mut p23 = RMat::zeros(d * d * d, d * d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    p23[((i * d + k) * d + j, (i * d + j) * d + k)] = 1.0;
                }
            }
        }
        let r13 = &p23 * &r12 * &p23;
        // coproduct on the first pair: R_{vv,v} = R13 R23
        let big = universal_r(&vv, &v).unwrap();
        assert!(crate::linalg::frobenius_real(&(&r13 * &r23 - &big.mat)) < 1e-8);
        // coproduct on the second pair: R_{v,vv} = R13 R12
        let big2 = universal_r(&v, &vv).unwrap();
        assert!(crate::linalg::frobenius_real(&(&r13 * &r12 - &big2.mat)) < 1e-8);
    }

    #[test]
    fn conjugate_pair_solves_cleanly() {
        let d2 = RootDatum::new(LieType::A, 2, 0.5).unwrap();
        let v1 = build_irrep(&d2, &Weight(vec![1, 0])).unwrap();
        let vc = conjugate_module(&v1);
        let r = universal_r(&vc, &v1).unwrap();
        assert!(intertwiner_residual(&vc, &v1, &r.mat) < 1e-9);
        let rinv_flip = r.inv21();
        assert_eq!(rinv_flip.nrows(), 9);
    }
}
