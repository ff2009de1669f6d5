//! Matrix-free linear operators with explicit adjoints.

use std::sync::Arc;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

type ApplyFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A linear operator `A: R^cols -> R^rows` given by its action and the action
/// of its adjoint. Operators built from a dense matrix keep the matrix around
/// as `dense_view` for diagnostics (SVD, conditioning).
///
/// Immutable after construction; cheap to clone (the closures are shared).
#[derive(Clone)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    forward: ApplyFn,
    adjoint: ApplyFn,
    dense: Option<Arc<DenseMatrix>>,
}

impl std::fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearMap")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("dense", &self.dense.is_some())
            .finish()
    }
}

impl LinearMap {
    pub fn new<F, G>(rows: usize, cols: usize, forward: F, adjoint: G) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        LinearMap {
            rows,
            cols,
            forward: Arc::new(forward),
            adjoint: Arc::new(adjoint),
            dense: None,
        }
    }

    /// Attach a dense view to an operator built from closures. The caller
    /// promises the closures realize the same matrix.
    pub fn with_dense_view(mut self, dense: DenseMatrix) -> Self {
        debug_assert_eq!(dense.rows(), self.rows);
        debug_assert_eq!(dense.cols(), self.cols);
        self.dense = Some(Arc::new(dense));
        self
    }

    pub fn from_dense(matrix: DenseMatrix) -> Self {
        let m = Arc::new(matrix);
        let rows = m.rows();
        let cols = m.cols();
        let mf = Arc::clone(&m);
        let ma = Arc::clone(&m);
        LinearMap {
            rows,
            cols,
            forward: Arc::new(move |x| mf.matvec(x)),
            adjoint: Arc::new(move |y| ma.matvec_transpose(y)),
            dense: Some(m),
        }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap::new(n, n, |x| x.to_vec(), |y| y.to_vec())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearMap::new(rows, cols, move |_| vec![0.0; rows], move |_| vec![0.0; cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dense_view(&self) -> Option<&DenseMatrix> {
        self.dense.as_deref()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::dim("LinearMap::apply input", self.cols, x.len()));
        }
        Ok((self.forward)(x))
    }

    pub fn adjoint_apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::dim(
                "LinearMap::adjoint_apply input",
                self.rows,
                y.len(),
            ));
        }
        Ok((self.adjoint)(y))
    }

    /// `self ∘ other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.rows != self.cols {
            return Err(Error::dim("LinearMap::compose", self.cols, other.rows));
        }
        let f1 = Arc::clone(&other.forward);
        let f2 = Arc::clone(&self.forward);
        let a1 = Arc::clone(&self.adjoint);
        let a2 = Arc::clone(&other.adjoint);
        Ok(LinearMap {
            rows: self.rows,
            cols: other.cols,
            forward: Arc::new(move |x| f2(&f1(x))),
            adjoint: Arc::new(move |y| a2(&a1(y))),
            dense: None,
        })
    }

    /// Vertical stacking `[top; bottom]`: maps `x` to the concatenation of
    /// `top x` and `bottom x`; the adjoint sums the two block adjoints.
    pub fn stack(top: &LinearMap, bottom: &LinearMap) -> Result<LinearMap> {
        if top.cols != bottom.cols {
            return Err(Error::dim("LinearMap::stack", top.cols, bottom.cols));
        }
        let cols = top.cols;
        let top_rows = top.rows;
        let tf = Arc::clone(&top.forward);
        let bf = Arc::clone(&bottom.forward);
        let ta = Arc::clone(&top.adjoint);
        let ba = Arc::clone(&bottom.adjoint);
        Ok(LinearMap {
            rows: top.rows + bottom.rows,
            cols,
            forward: Arc::new(move |x| {
                let mut out = tf(x);
                out.extend(bf(x));
                out
            }),
            adjoint: Arc::new(move |y| {
                let mut out = ta(&y[..top_rows]);
                let lower = ba(&y[top_rows..]);
                for (o, l) in out.iter_mut().zip(&lower) {
                    *o += l;
                }
                out
            }),
            dense: None,
        })
    }

    /// The normal operator `A^T A + alpha I` as a symmetric positive
    /// (semi-)definite map on the domain.
    pub fn gram_plus(&self, alpha: f64) -> LinearMap {
        let f = Arc::clone(&self.forward);
        let a = Arc::clone(&self.adjoint);
        let cols = self.cols;
        LinearMap::new(
            cols,
            cols,
            move |x| {
                let mut out = a(&f(x));
                for (o, xi) in out.iter_mut().zip(x) {
                    *o += alpha * xi;
                }
                out
            },
            {
                let f = Arc::clone(&self.forward);
                let a = Arc::clone(&self.adjoint);
                move |x| {
                    let mut out = a(&f(x));
                    for (o, xi) in out.iter_mut().zip(x) {
                        *o += alpha * xi;
                    }
                    out
                }
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::{dot, norm2};
    use super::*;
    use crate::rng::CounterRng;

    #[test]
    fn identity_apply() {
        let id = LinearMap::identity(2);
        assert_eq!(id.apply(&[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
        assert_eq!(id.adjoint_apply(&[5.0, 6.0]).unwrap(), vec![5.0, 6.0]);
    }

    #[test]
    fn zero_map() {
        let z = LinearMap::zero(2, 2);
        assert_eq!(z.apply(&[3.0, 4.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn dense_apply_hand_checked() {
        let a = LinearMap::from_dense(
            DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap(),
        );
        assert_eq!(a.apply(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        // Transpose row read-off.
        assert_eq!(a.adjoint_apply(&[1.0, 0.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn dimension_mismatch_names_lengths() {
        let a = LinearMap::zero(3, 2);
        let err = a.apply(&[1.0, 2.0, 3.0]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("expected 2") && msg.contains("got 3"), "{msg}");
    }

    #[test]
    fn adjoint_identity_random_4x3() {
        let mut rng = CounterRng::new(11);
        let data: Vec<f64> = (0..12).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let a = LinearMap::from_dense(DenseMatrix::from_vec(4, 3, data).unwrap());
        for _ in 0..100 {
            let x = rng.uniform_vec(3, -1.0, 1.0);
            let y = rng.uniform_vec(4, -1.0, 1.0);
            let ax = a.apply(&x).unwrap();
            let aty = a.adjoint_apply(&y).unwrap();
            let gap = (dot(&ax, &y) - dot(&x, &aty)).abs();
            assert!(gap <= 1e-10 * (1.0 + norm2(&ax) * norm2(&y)), "gap {gap}");
        }
    }

    #[test]
    fn stack_and_compose_shapes() {
        let a = LinearMap::identity(3);
        let b = LinearMap::zero(2, 3);
        let s = LinearMap::stack(&a, &b).unwrap();
        assert_eq!(s.rows(), 5);
        assert_eq!(s.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0, 0.0, 0.0]);
        let c = b.compose(&a).unwrap();
        assert_eq!(c.rows(), 2);
        assert_eq!(c.cols(), 3);
    }

    #[test]
    fn gram_plus_is_normal_operator() {
        let a = LinearMap::from_dense(
            DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0], &[1.0, 0.0]]).unwrap(),
        );
        let g = a.gram_plus(0.5);
        let x = [1.0, -1.0];
        let want = {
            let mut v = a.adjoint_apply(&a.apply(&x).unwrap()).unwrap();
            v[0] += 0.5 * x[0];
            v[1] += 0.5 * x[1];
            v
        };
        assert_eq!(g.apply(&x).unwrap(), want);
    }
}
