//! Dense polynomials with multiprecision complex coefficients.

use rug::Float;

use crate::num::{fl, BigComplex};

/// Coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub c: Vec<BigComplex>,
}

impl Poly {
    pub fn new(c: Vec<BigComplex>) -> Self {
        Poly { c }
    }

    pub fn from_real(c: Vec<Float>) -> Self {
        Poly { c: c.into_iter().map(BigComplex::from_real).collect() }
    }

    pub fn zero(len: usize, prec: u32) -> Self {
        Poly { c: vec![BigComplex::zero(prec); len] }
    }

    /// Index of the highest nonzero coefficient, or 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.c.iter().rposition(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn prec(&self) -> u32 {
        self.c.iter().map(BigComplex::prec).max().unwrap_or(64)
    }

    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(64);
        for x in &self.c {
            let a = fl(64, x.abs());
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> Float {
        let mut m = Float::new(64);
        for x in &self.c {
            let a = fl(64, x.im.abs_ref());
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn real_parts(&self) -> Vec<Float> {
        self.c.iter().map(|x| x.re.clone()).collect()
    }

    pub fn eval(&self, z: &BigComplex) -> BigComplex {
        let mut acc = BigComplex::zero(self.prec().max(z.prec()));
        for a in self.c.iter().rev() {
            acc = &(&acc * z) + a;
        }
        acc
    }

    /// `p(z)` and `p'(z)` by a single Horner pass.
    pub fn eval_with_derivative(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        let prec = self.prec().max(z.prec());
        let mut p = BigComplex::zero(prec);
        let mut d = BigComplex::zero(prec);
        for a in self.c.iter().rev() {
            d = &(&d * z) + &p;
            p = &(&p * z) + a;
        }
        (p, d)
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(1, self.prec());
        }
        Poly {
            c: self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, a)| a.scale(&fl(a.prec(), (i + 1) as u32)))
                .collect(),
        }
    }

    pub fn scale(&self, s: &BigComplex) -> Poly {
        Poly { c: self.c.iter().map(|a| a * s).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let prec = self.prec().max(o.prec());
        let mut c = vec![BigComplex::zero(prec); n];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, a) in o.c.iter().enumerate() {
            c[i] += a;
        }
        Poly { c }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&BigComplex::from_f64(o.prec(), -1.0, 0.0)))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let prec = self.prec().max(o.prec());
        if self.c.is_empty() || o.c.is_empty() {
            return Poly::zero(1, prec);
        }
        let mut c = vec![BigComplex::zero(prec); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        Poly { c }
    }

    /// Maximum coefficient distance, padding the shorter operand with zeros.
    pub fn distance(&self, o: &Poly) -> Float {
        self.sub(o).max_abs()
    }

    /// The same polynomial padded or truncated to `len` coefficients.
    pub fn resized(&self, len: usize) -> Poly {
        let prec = self.prec();
        let mut c = self.c.clone();
        c.resize(len, BigComplex::zero(prec));
        Poly { c }
    }

    /// `z^d p(1/z)` with `d = len - 1`.
    pub fn reversed(&self) -> Poly {
        Poly { c: self.c.iter().rev().cloned().collect() }
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        let d = self.degree();
        let inv = self.c[d].recip();
        Poly { c: self.c[..=d].iter().map(|a| a * &inv).collect() }
    }

    /// Expand `prod (z - r_i)`.
    pub fn from_roots(roots: &[BigComplex], prec: u32) -> Poly {
        let mut p = Poly { c: vec![BigComplex::one(prec)] };
        for r in roots {
            let lin = Poly { c: vec![-r.clone(), BigComplex::one(prec)] };
            p = p.mul(&lin);
        }
        p
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.c.iter().map(BigComplex::to_f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(128, re, im)
    }

    #[test]
    fn horner_with_derivative() {
        // p = 1 + 2z + 3z^2 at z = i: p = -2 + 2i, p' = 2 + 6i
        let p = Poly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let (v, d) = p.eval_with_derivative(&c(0.0, 1.0));
        assert_eq!(v.to_f64(), (-2.0, 2.0));
        assert_eq!(d.to_f64(), (2.0, 6.0));
        assert_eq!(p.derivative().eval(&c(0.0, 1.0)).to_f64(), (2.0, 6.0));
    }

    #[test]
    fn from_roots_expands() {
        let p = Poly::from_roots(&[c(1.0, 0.0), c(-2.0, 0.0)], 128);
        assert_eq!(p.to_f64(), vec![(-2.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(p.degree(), 2);
    }
}
