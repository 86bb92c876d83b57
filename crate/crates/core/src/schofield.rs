//! Representations, the canonical-sequence matrix `d_V^W` and Schofield
//! semi-invariants.
//!
//! For representations `V` of dimension `alpha` and `W` of dimension `beta`
//! the map
//!
//! ```text
//! d_V^W : (phi(x))_x  |->  (W(a) phi(ta) - phi(ha) V(a))_a
//! ```
//!
//! goes from `sum_x Hom(V(x), W(x))` to `sum_a Hom(V(ta), W(ha))`. Its kernel
//! is `Hom(V, W)`, its cokernel `Ext(V, W)`, and when `<alpha, beta> = 0` it
//! is square with determinant `c^V(W)`.
//!
//! Basis order: columns run over vertices in order and within a vertex over
//! the entries of `phi(x)` row-major; rows run over arrows in order and
//! within an arrow over the entries of a `beta(ha) x alpha(ta)` matrix
//! row-major. For the Kronecker quiver with one-dimensional `V = (phi, psi)`
//! and `W = (gamma, delta)` this gives `c^V(W) = phi delta - psi gamma`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, ExactScalar};
use crate::quiver::{DimensionVector, Quiver, Weight};

/// A representation with one `dim(ha) x dim(ta)` matrix per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    dim: DimensionVector,
    maps: Vec<ExactMatrix>,
}

fn same_quiver(a: &Arc<Quiver>, b: &Arc<Quiver>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Representation {
    pub fn new(quiver: Arc<Quiver>, dim: DimensionVector, maps: Vec<ExactMatrix>) -> Result<Self> {
        quiver.check_len(&dim)?;
        if maps.len() != quiver.arrows().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} maps for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            let (r, c) = (dim[a.head] as usize, dim[a.tail] as usize);
            if m.rows() != r || m.cols() != c {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {:?} needs a {r}x{c} matrix, got {}x{}",
                    a.id,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Representation { quiver, dim, maps })
    }

    /// Builds the maps from row-major integer entries.
    pub fn from_i64_maps(quiver: Arc<Quiver>, dim: DimensionVector, maps: &[Vec<i64>]) -> Result<Self> {
        let mats = quiver
            .arrows()
            .iter()
            .zip(maps)
            .map(|(a, m)| ExactMatrix::from_i64(dim[a.head] as usize, dim[a.tail] as usize, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(quiver, dim, mats)
    }

    pub fn zero(quiver: Arc<Quiver>, dim: DimensionVector) -> Result<Self> {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| ExactMatrix::zeros(dim[a.head] as usize, dim[a.tail] as usize))
            .collect();
        Self::new(quiver, dim, maps)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dim(&self) -> &DimensionVector {
        &self.dim
    }

    pub fn maps(&self) -> &[ExactMatrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &ExactMatrix {
        &self.maps[arrow]
    }

    /// `V ⊕ V'` with the basis of `V(x)` placed before that of `V'(x)`.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if !same_quiver(&self.quiver, &other.quiver) {
            return Err(Error::QuiverMismatch);
        }
        let dim: Vec<i64> = self.dim.iter().zip(other.dim.iter()).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Representation::new(
            self.quiver.clone(),
            DimensionVector::from_vec_unchecked(dim),
            maps,
        )
    }
}

/// The matrix of `d_V^W` in the basis described in the module docs.
pub fn build_dvw(v: &Representation, w: &Representation) -> Result<ExactMatrix> {
    if !same_quiver(&v.quiver, &w.quiver) {
        return Err(Error::QuiverMismatch);
    }
    let q = &v.quiver;
    let (alpha, beta) = (&v.dim, &w.dim);
    let n = q.vertex_count();
    let mut col_offset = Vec::with_capacity(n);
    let mut cols = 0usize;
    for x in 0..n {
        col_offset.push(cols);
        cols += (alpha[x] * beta[x]) as usize;
    }
    let rows: usize = q
        .arrows()
        .iter()
        .map(|a| (alpha[a.tail] * beta[a.head]) as usize)
        .sum();
    let mut m = ExactMatrix::zeros(rows, cols);
    let mut row = 0usize;
    for (ai, a) in q.arrows().iter().enumerate() {
        let (at, bt) = (alpha[a.tail] as usize, beta[a.tail] as usize);
        let (ah, bh) = (alpha[a.head] as usize, beta[a.head] as usize);
        let (va, wa) = (&v.maps[ai], &w.maps[ai]);
        for r in 0..bh {
            for c in 0..at {
                // W(a) phi(ta): phi(ta) is bt x at.
                for k in 0..bt {
                    let coeff = wa.get(r, k);
                    if !coeff.is_zero() {
                        m.set(row, col_offset[a.tail] + k * at + c, coeff.clone());
                    }
                }
                // -phi(ha) V(a): phi(ha) is bh x ah.
                for k in 0..ah {
                    let coeff = va.get(k, c);
                    if !coeff.is_zero() {
                        m.set(row, col_offset[a.head] + r * ah + k, -coeff.clone());
                    }
                }
                row += 1;
            }
        }
    }
    Ok(m)
}

/// `c^V(W) = det d_V^W`; requires `<dim V, dim W> = 0`.
pub fn schofield_value(v: &Representation, w: &Representation) -> Result<ExactScalar> {
    if !same_quiver(&v.quiver, &w.quiver) {
        return Err(Error::QuiverMismatch);
    }
    let e = v.quiver.euler_form(&v.dim, &w.dim)?;
    if e != 0 {
        return Err(Error::NotOrthogonal(e));
    }
    build_dvw(v, w)?.det_exact()
}

pub fn hom_dim(v: &Representation, w: &Representation) -> Result<usize> {
    Ok(build_dvw(v, w)?.kernel_dim())
}

pub fn ext_dim(v: &Representation, w: &Representation) -> Result<usize> {
    let m = build_dvw(v, w)?;
    Ok(m.rows() - m.rank_exact())
}

/// `(dim Hom(V, W), dim Ext(V, W))` from a single elimination.
pub fn hom_ext_dims(v: &Representation, w: &Representation) -> Result<(usize, usize)> {
    let m = build_dvw(v, w)?;
    let r = m.rank_exact();
    Ok((m.cols() - r, m.rows() - r))
}

/// An element of `GL(alpha) = prod_x GL(alpha(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    blocks: Vec<ExactMatrix>,
}

impl GroupElement {
    pub fn new(blocks: Vec<ExactMatrix>) -> Result<Self> {
        for (x, b) in blocks.iter().enumerate() {
            if !b.is_square() || b.det_exact()?.is_zero() {
                return Err(Error::SingularBlock(x));
            }
        }
        Ok(GroupElement { blocks })
    }

    pub fn identity(dim: &[i64]) -> Self {
        GroupElement {
            blocks: dim.iter().map(|&k| ExactMatrix::identity(k as usize)).collect(),
        }
    }

    /// Diagonal element; `diagonals[x]` lists the entries of block `x`.
    pub fn diagonal(diagonals: &[Vec<ExactScalar>]) -> Result<Self> {
        let blocks = diagonals
            .iter()
            .map(|d| {
                let mut m = ExactMatrix::zeros(d.len(), d.len());
                for (i, v) in d.iter().enumerate() {
                    m.set(i, i, v.clone());
                }
                m
            })
            .collect();
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[ExactMatrix] {
        &self.blocks
    }

    /// `prod_x det(g(x))^{s(x)}`.
    pub fn character_value(&self, s: &Weight) -> Result<ExactScalar> {
        if s.len() != self.blocks.len() {
            return Err(Error::IndexMismatch {
                expected: self.blocks.len(),
                found: s.len(),
            });
        }
        let mut out = ExactScalar::one();
        for (b, &e) in self.blocks.iter().zip(s.iter()) {
            let d = b.det_exact()?;
            let p = if e >= 0 {
                pow(&d, e as u64)
            } else {
                pow(&d.recip(), e.unsigned_abs())
            };
            out *= p;
        }
        Ok(out)
    }
}

fn pow(x: &ExactScalar, mut e: u64) -> ExactScalar {
    let mut base = x.clone();
    let mut acc = ExactScalar::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// `(g W)(a) = g(ha) W(a) g(ta)^{-1}`.
pub fn act(g: &GroupElement, w: &Representation) -> Result<Representation> {
    let q = &w.quiver;
    if g.blocks.len() != q.vertex_count() {
        return Err(Error::IndexMismatch {
            expected: q.vertex_count(),
            found: g.blocks.len(),
        });
    }
    for (x, b) in g.blocks.iter().enumerate() {
        if b.rows() != w.dim[x] as usize {
            return Err(Error::ShapeMismatch(format!(
                "block {x} has size {}, dimension is {}",
                b.rows(),
                w.dim[x]
            )));
        }
    }
    let inverses: Vec<ExactMatrix> = g
        .blocks
        .iter()
        .enumerate()
        .map(|(x, b)| b.inverse().ok_or(Error::SingularBlock(x)))
        .collect::<Result<_>>()?;
    let maps = q
        .arrows()
        .iter()
        .zip(&w.maps)
        .map(|(a, m)| g.blocks[a.head].mul(m)?.mul(&inverses[a.tail]))
        .collect::<Result<Vec<_>>>()?;
    Representation::new(q.clone(), w.dim.clone(), maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::int;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rep(q: &Arc<Quiver>, dim: &[i64], bound: i64, rng: &mut ChaCha8Rng) -> Representation {
        let maps: Vec<Vec<i64>> = q
            .arrows()
            .iter()
            .map(|a| {
                (0..dim[a.head] * dim[a.tail])
                    .map(|_| rng.gen_range(-bound..=bound))
                    .collect()
            })
            .collect();
        Representation::from_i64_maps(q.clone(), DimensionVector::new(q, dim.to_vec()).unwrap(), &maps)
            .unwrap()
    }

    fn k2_scalar(q: &Arc<Quiver>, a: ExactScalar, b: ExactScalar) -> Representation {
        let dim = DimensionVector::new(q, vec![1, 1]).unwrap();
        let maps = vec![
            ExactMatrix::new(1, 1, vec![a]).unwrap(),
            ExactMatrix::new(1, 1, vec![b]).unwrap(),
        ];
        Representation::new(q.clone(), dim, maps).unwrap()
    }

    fn rat(n: i64, d: i64) -> ExactScalar {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent construction of `d_V^W` through `vec(W X - X V)
    /// = (I ⊗ W - V^T ⊗ I) vec(X)` with column-major vectorisation.
    fn kron_dvw(v: &Representation, w: &Representation) -> ExactMatrix {
        let q = v.quiver();
        let (alpha, beta) = (v.dim(), w.dim());
        let mut col_off = vec![0usize];
        for x in 0..q.vertex_count() {
            col_off.push(col_off[x] + (alpha[x] * beta[x]) as usize);
        }
        let cols = col_off[q.vertex_count()];
        let mut blocks: Vec<Vec<Vec<ExactScalar>>> = Vec::new();
        for (ai, a) in q.arrows().iter().enumerate() {
            let (at, bt, ah, bh) = (
                alpha[a.tail] as usize,
                beta[a.tail] as usize,
                alpha[a.head] as usize,
                beta[a.head] as usize,
            );
            let mut rows = vec![vec![ExactScalar::zero(); cols]; bh * at];
            // (I_at ⊗ W(a)) acting on vec(phi(ta)), column-major index j*bt + i
            for c in 0..at {
                for r in 0..bh {
                    for k in 0..bt {
                        rows[c * bh + r][col_off[a.tail] + c * bt + k] +=
                            w.map(ai).get(r, k).clone();
                    }
                }
            }
            // -(V(a)^T ⊗ I_bh) acting on vec(phi(ha))
            for c in 0..at {
                for r in 0..bh {
                    for k in 0..ah {
                        rows[c * bh + r][col_off[a.head] + k * bh + r] -=
                            v.map(ai).get(k, c).clone();
                    }
                }
            }
            blocks.push(rows);
        }
        let nrows = blocks.iter().map(Vec::len).sum();
        let all: Vec<ExactScalar> = blocks.into_iter().flatten().flatten().collect();
        ExactMatrix::new(nrows, cols, all).unwrap()
    }

    #[test]
    fn kronecker_golden_sign() {
        let q = Arc::new(catalog::kronecker());
        let v = k2_scalar(&q, int(2), int(3));
        let w = k2_scalar(&q, int(5), int(7));
        assert_eq!(schofield_value(&v, &w).unwrap(), int(-1));
        let v = k2_scalar(&q, int(1), int(0));
        let w = k2_scalar(&q, int(0), int(1));
        assert_eq!(schofield_value(&v, &w).unwrap(), int(1));
    }

    #[test]
    fn kronecker_closed_form() {
        let q = Arc::new(catalog::kronecker());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut r = || rat(rng.gen_range(-50..=50), rng.gen_range(1..=9));
            let (phi, psi, gamma, delta) = (r(), r(), r(), r());
            let v = k2_scalar(&q, phi.clone(), psi.clone());
            let w = k2_scalar(&q, gamma.clone(), delta.clone());
            assert_eq!(schofield_value(&v, &w).unwrap(), phi * delta - psi * gamma);
        }
    }

    #[test]
    fn shapes() {
        let q = Arc::new(catalog::d4_star());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_rep(&q, &[1, 1, 0, 0, 1], 5, &mut rng);
        let w = random_rep(&q, &[2, 2, 1, 1, 3], 5, &mut rng);
        let m = build_dvw(&v, &w).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 7));
        assert_eq!(schofield_value(&v, &w), Err(Error::NotOrthogonal(1)));
        let z = Representation::zero(q.clone(), DimensionVector::zero(5)).unwrap();
        let m = build_dvw(&z, &z).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 0));
        assert_eq!(schofield_value(&z, &z).unwrap(), int(1));
    }

    #[test]
    fn quiver_mismatch() {
        let k = Arc::new(catalog::kronecker());
        let t = Arc::new(catalog::three_kronecker());
        let v = Representation::zero(k, DimensionVector::zero(2)).unwrap();
        let w = Representation::zero(t, DimensionVector::zero(2)).unwrap();
        assert_eq!(build_dvw(&v, &w), Err(Error::QuiverMismatch));
        assert_eq!(v.direct_sum(&w), Err(Error::QuiverMismatch));
    }

    #[test]
    fn hom_examples() {
        let q = Arc::new(catalog::kronecker());
        let v = k2_scalar(&q, int(1), int(2));
        let w = k2_scalar(&q, int(2), int(4));
        assert_eq!(hom_dim(&v, &w).unwrap(), 1);
        let v = k2_scalar(&q, int(1), int(0));
        let w = k2_scalar(&q, int(0), int(1));
        assert_eq!(hom_ext_dims(&v, &w).unwrap(), (0, 0));
        assert!(hom_dim(&v, &v).unwrap() >= 1);
    }

    #[test]
    fn matches_kronecker_product_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let quivers = [catalog::kronecker(), catalog::d4_star(), catalog::a2_acyclic()];
        for q in quivers {
            let q = Arc::new(q);
            let n = q.vertex_count();
            for _ in 0..15 {
                let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                let b: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                let v = random_rep(&q, &a, 3, &mut rng);
                let w = random_rep(&q, &b, 3, &mut rng);
                let ours = build_dvw(&v, &w).unwrap();
                let theirs = kron_dvw(&v, &w);
                assert_eq!((ours.rows(), ours.cols()), (theirs.rows(), theirs.cols()));
                assert_eq!(ours.rank_exact(), theirs.rank_exact());
                assert_eq!(
                    ours.cols() as i64 - ours.rows() as i64,
                    q.euler_form(&a, &b).unwrap()
                );
            }
        }
    }

    #[test]
    fn hom_minus_ext_is_euler_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let quivers = [catalog::kronecker(), catalog::d4_star(), catalog::a_tilde(2, 2)];
        for i in 0..100 {
            let q = Arc::new(quivers[i % 3].clone());
            let n = q.vertex_count();
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let b: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let v = random_rep(&q, &a, 4, &mut rng);
            let w = random_rep(&q, &b, 4, &mut rng);
            let (h, e) = hom_ext_dims(&v, &w).unwrap();
            assert_eq!(h as i64 - e as i64, q.euler_form(&a, &b).unwrap());
        }
    }

    #[test]
    fn vanishing_law() {
        let q = Arc::new(catalog::d4_star());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let h = [1, 1, 1, 1, 2];
        let mut zero_seen = false;
        for i in 0..30 {
            let v = random_rep(&q, &h, 3, &mut rng);
            let w = if i % 3 == 0 { v.clone() } else { random_rep(&q, &h, 3, &mut rng) };
            let c = schofield_value(&v, &w).unwrap();
            let (hd, ed) = hom_ext_dims(&v, &w).unwrap();
            assert_eq!(c.is_zero(), hd != 0);
            assert_eq!(hd != 0, ed != 0);
            zero_seen |= c.is_zero();
        }
        assert!(zero_seen);
    }

    #[test]
    fn direct_sum_multiplicative_up_to_sign() {
        let q = Arc::new(catalog::d4_star());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e0 = [1, 1, 0, 0, 1];
        let h = [1, 1, 1, 1, 2];
        for _ in 0..10 {
            let v = random_rep(&q, &h, 4, &mut rng);
            let w1 = random_rep(&q, &h, 4, &mut rng);
            let w2 = random_rep(&q, &e0, 4, &mut rng);
            let sum = w1.direct_sum(&w2).unwrap();
            let lhs = schofield_value(&v, &sum).unwrap();
            let rhs = schofield_value(&v, &w1).unwrap() * schofield_value(&v, &w2).unwrap();
            assert!(lhs == rhs || lhs == -rhs);
            let v2 = random_rep(&q, &h, 4, &mut rng);
            let vsum = v.direct_sum(&v2).unwrap();
            let w = random_rep(&q, &[2, 2, 2, 2, 4], 4, &mut rng);
            let lhs = schofield_value(&vsum, &w).unwrap();
            let rhs = schofield_value(&v, &w).unwrap() * schofield_value(&v2, &w).unwrap();
            assert!(lhs == rhs || lhs == -rhs);
        }
    }

    #[test]
    fn character_and_action() {
        let q = Arc::new(catalog::kronecker());
        let g = GroupElement::diagonal(&[vec![int(2)], vec![int(3)]]).unwrap();
        assert_eq!(g.character_value(&Weight(vec![1, -1])).unwrap(), rat(2, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let w = random_rep(&q, &[2, 3], 5, &mut rng);
        let id = GroupElement::identity(&[2, 3]);
        assert_eq!(act(&id, &w).unwrap(), w);
        assert_eq!(id.character_value(&Weight(vec![4, -7])).unwrap(), int(1));
        assert_eq!(
            GroupElement::diagonal(&[vec![int(0)]]),
            Err(Error::SingularBlock(0))
        );
    }

    #[test]
    fn semi_invariance() {
        // c^V(g W) chi_sigma(g) = c^V(W) with sigma = <dim V, ->.
        let q = Arc::new(catalog::d4_star());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = [1, 1, 1, 1, 2];
        let sigma = q.weight_of_left_form(&h).unwrap();
        for _ in 0..20 {
            let v = random_rep(&q, &h, 4, &mut rng);
            let w = random_rep(&q, &h, 4, &mut rng);
            let diag: Vec<Vec<ExactScalar>> = h
                .iter()
                .map(|&k| {
                    (0..k)
                        .map(|_| {
                            let mut x = 0;
                            while x == 0 {
                                x = rng.gen_range(-9..=9);
                            }
                            rat(x, rng.gen_range(1..=5))
                        })
                        .collect()
                })
                .collect();
            let g = GroupElement::diagonal(&diag).unwrap();
            let lhs = schofield_value(&v, &act(&g, &w).unwrap()).unwrap();
            let chi = g.character_value(&sigma).unwrap();
            assert_eq!(lhs * chi, schofield_value(&v, &w).unwrap());
        }
    }
}
