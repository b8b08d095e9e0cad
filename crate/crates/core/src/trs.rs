//! Twisted Reed-Solomon codes TRS_k(A, l, η): the twisted polynomial space
//! {Σ_{i≠l} f_i x^i + f_l(x^l + ηx^k)}, its generator and a closed-form
//! parity-check matrix.

use crate::code::{CodeError, LinearCode};
use crate::field::{Elem, Field};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::sym::{lambda_from_sigma, sigma_from_roots};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrsError {
    #[error("need 0 <= l <= k-1 <= n-2, got n={n} k={k} l={l}")]
    Range { n: usize, k: usize, l: usize },
    #[error("eta must be nonzero")]
    ZeroEta,
    #[error("evaluation set repeats {0:?}")]
    Duplicate(Elem),
    #[error("element index {0} outside the field")]
    NotInField(u32),
    #[error("expected {expected} coefficients, got {got}")]
    Coeffs { expected: usize, got: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrsParams {
    pub a: Vec<Elem>,
    pub k: usize,
    pub l: usize,
    pub eta: Elem,
}

impl TrsParams {
    /// Validates and puts A into canonical field order.
    pub fn new(f: &Field, mut a: Vec<Elem>, k: usize, l: usize, eta: Elem) -> Result<TrsParams, TrsError> {
        if let Some(bad) = a.iter().find(|e| e.0 >= f.q()) {
            return Err(TrsError::NotInField(bad.0));
        }
        if eta.0 >= f.q() {
            return Err(TrsError::NotInField(eta.0));
        }
        a.sort_unstable();
        if let Some(w) = a.windows(2).find(|w| w[0] == w[1]) {
            return Err(TrsError::Duplicate(w[0]));
        }
        let n = a.len();
        if k == 0 || l > k - 1 || k + 1 > n {
            return Err(TrsError::Range { n, k, l });
        }
        if eta.is_zero() {
            return Err(TrsError::ZeroEta);
        }
        Ok(TrsParams { a, k, l, eta })
    }

    /// A = F_q^*.
    pub fn punctured(f: &Field, k: usize, l: usize, eta: Elem) -> Result<TrsParams, TrsError> {
        TrsParams::new(f, f.nonzero().collect(), k, l, eta)
    }

    /// A = F_q.
    pub fn full(f: &Field, k: usize, l: usize, eta: Elem) -> Result<TrsParams, TrsError> {
        TrsParams::new(f, f.elements().collect(), k, l, eta)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// n − k.
    pub fn redundancy(&self) -> usize {
        self.a.len() - self.k
    }
}

/// f_0..f_{k−1}; the x^k coefficient is η·f_l.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistPoly {
    pub f: Vec<Elem>,
}

impl TwistPoly {
    pub fn new(p: &TrsParams, f: Vec<Elem>) -> Result<TwistPoly, TrsError> {
        if f.len() != p.k {
            return Err(TrsError::Coeffs { expected: p.k, got: f.len() });
        }
        Ok(TwistPoly { f })
    }

    pub fn zero(p: &TrsParams) -> TwistPoly {
        TwistPoly { f: vec![Elem::ZERO; p.k] }
    }

    pub fn expanded(&self, fld: &Field, p: &TrsParams) -> Poly {
        let mut c = self.f.clone();
        c.push(fld.mul(p.eta, self.f[p.l]));
        Poly::from_coeffs(c)
    }
}

#[derive(Clone, Debug)]
pub struct TrsCode {
    pub params: TrsParams,
    /// σ_0..σ_n of ∏_{α∈A}(x − α).
    pub sigma: Vec<Elem>,
    /// Λ_0..Λ_{2n}.
    pub lambda: Vec<Elem>,
    /// u_i = ∏_{j≠i}(α_i − α_j)^{−1}.
    pub u: Vec<Elem>,
    /// x^{n−k−1}(1 − η Σ_{j=0}^{k−l} σ_j x^{k−l−j}).
    pub twist_row: Poly,
    pub code: LinearCode,
}

impl TrsCode {
    pub fn new(f: &Field, params: TrsParams) -> Result<TrsCode, TrsError> {
        let n = params.n();
        let (k, l) = (params.k, params.l);
        let sigma = sigma_from_roots(f, &params.a).map_err(|_| TrsError::Duplicate(params.a[0]))?;
        let lambda = lambda_from_sigma(f, &sigma, 2 * n);

        let mut gp = sigma.clone();
        gp.reverse();
        let deriv = Poly::from_coeffs(gp).derivative(f);
        let u: Vec<Elem> =
            params.a.iter().map(|&x| f.inv(deriv.eval(f, x)).expect("distinct evaluation points")).collect();

        // 1 − η Σ σ_j x^{k−l−j}, shifted by x^{n−k−1}
        let mut inner = vec![Elem::ZERO; k - l + 1];
        for j in 0..=k - l {
            inner[k - l - j] = f.neg(f.mul(params.eta, sigma[j]));
        }
        inner[0] = f.add(inner[0], Elem::ONE);
        let twist_row = Poly::from_coeffs(inner).mul(f, &Poly::monomial(Elem::ONE, n - k - 1));

        let g = generator_matrix(f, &params);
        let mut hrows: Vec<Vec<Elem>> = (0..n - k - 1)
            .map(|t| params.a.iter().zip(&u).map(|(&x, &ui)| f.mul(ui, f.pow(x, t as u64))).collect())
            .collect();
        hrows.push(params.a.iter().zip(&u).map(|(&x, &ui)| f.mul(ui, twist_row.eval(f, x))).collect());
        let h = Matrix::from_rows(hrows, n);
        let code = LinearCode::with_parity_check(f, g, h)?;
        Ok(TrsCode { params, sigma, lambda, u, twist_row, code })
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn generator(&self) -> &Matrix {
        self.code.generator()
    }

    pub fn parity_check(&self) -> &Matrix {
        self.code.parity_check()
    }

    pub fn encode(&self, f: &Field, t: &TwistPoly) -> Vec<Elem> {
        let p = t.expanded(f, &self.params);
        self.params.a.iter().map(|&x| p.eval(f, x)).collect()
    }

    pub fn membership(&self, f: &Field, u: &[Elem]) -> Result<bool, TrsError> {
        Ok(self.code.contains(f, u)?)
    }

    pub fn syndrome(&self, f: &Field, u: &[Elem]) -> Result<Vec<Elem>, TrsError> {
        Ok(self.code.syndrome(f, u)?)
    }

    /// Evaluation word of an arbitrary polynomial on A.
    pub fn evaluate(&self, f: &Field, p: &Poly) -> Vec<Elem> {
        self.params.a.iter().map(|&x| p.eval(f, x)).collect()
    }
}

/// Rows x^0..x^{l−1}, x^{l+1}..x^{k−1}, then x^l + ηx^k, evaluated on A.
pub fn generator_matrix(f: &Field, p: &TrsParams) -> Matrix {
    let mut rows: Vec<Vec<Elem>> =
        (0..p.k).filter(|&i| i != p.l).map(|i| p.a.iter().map(|&x| f.pow(x, i as u64)).collect()).collect();
    rows.push(p.a.iter().map(|&x| f.add(f.pow(x, p.l as u64), f.mul(p.eta, f.pow(x, p.k as u64)))).collect());
    Matrix::from_rows(rows, p.n())
}

/// Every valid (k, l) for length n.
pub fn valid_kl(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|k| (0..k).map(move |l| (k, l))).collect()
}
