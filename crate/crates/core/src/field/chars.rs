//! Additive and multiplicative characters.

use super::{CycInt, Elem, Field};
use num_complex::Complex64;
use std::f64::consts::PI;

/// ψ_i(x) stored as an exponent of ζ_{q−1}, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultCharValue {
    pub zero: bool,
    pub exp: u64,
    pub modulus: u64,
}

impl MultCharValue {
    pub fn to_complex(self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(1.0, 2.0 * PI * self.exp as f64 / self.modulus as f64)
    }

    /// The value as an integer when it is 0 or ±1.
    pub fn as_int(self) -> Option<i8> {
        if self.zero {
            Some(0)
        } else if self.exp == 0 {
            Some(1)
        } else if 2 * self.exp == self.modulus {
            Some(-1)
        } else {
            None
        }
    }

    pub fn conj(self) -> MultCharValue {
        MultCharValue { exp: (self.modulus - self.exp) % self.modulus, ..self }
    }
}

impl Field {
    /// χ_a(x) = ζ_p^{Tr(ax)}.
    pub fn additive_char(&self, a: Elem, x: Elem) -> CycInt {
        CycInt::zeta_pow(self.p(), self.trace_int(self.mul(a, x)) as i64)
    }

    /// The canonical additive character χ_1.
    pub fn canonical_char(&self, x: Elem) -> CycInt {
        self.additive_char(Elem::ONE, x)
    }

    /// ψ_i(ξ^j) = ζ_{q−1}^{ij}, with ψ_0(0) = 1 and ψ_i(0) = 0 otherwise.
    pub fn mult_char(&self, i: u64, x: Elem) -> MultCharValue {
        let modulus = self.q() as u64 - 1;
        let i = i % modulus;
        match self.log(x) {
            None => MultCharValue { zero: i != 0, exp: 0, modulus },
            Some(j) => MultCharValue { zero: false, exp: i * j as u64 % modulus, modulus },
        }
    }

    /// Index of the quadratic character among the ψ_i.
    pub fn quadratic_index(&self) -> Option<u64> {
        (!self.is_even()).then(|| (self.q() as u64 - 1) / 2)
    }
}
