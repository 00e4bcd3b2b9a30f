//! Truncated Taylor series in one real variable.
//!
//! A jet of order `n` at a point `s0` stores `c_i = f^(i)(s0) / i!` for
//! `i = 0..=n`. Arithmetic is exact up to the truncation order, so composing
//! jets yields all derivatives of a composite function at once.

use rug::Float;

use crate::num::fl;

#[derive(Clone, Debug)]
pub struct Jet {
    pub c: Vec<Float>,
}

impl Jet {
    pub fn zero(order: usize, prec: u32) -> Self {
        Jet { c: vec![Float::new(prec); order + 1] }
    }

    pub fn constant(order: usize, v: Float) -> Self {
        let prec = v.prec();
        let mut j = Jet::zero(order, prec);
        j.c[0] = v;
        j
    }

    /// The identity function `s` expanded at `s0`.
    pub fn variable(order: usize, s0: &Float) -> Self {
        let mut j = Jet::constant(order, s0.clone());
        if order >= 1 {
            j.c[1] = fl(s0.prec(), 1);
        }
        j
    }

    /// `exp(a t)` scaled by `scale`: coefficients `scale * a^i / i!`.
    pub fn scaled_exp(order: usize, scale: Float, a: &Float) -> Self {
        let mut c = Vec::with_capacity(order + 1);
        let mut t = scale;
        for i in 0..=order {
            c.push(t.clone());
            t *= a;
            t /= (i + 1) as u32;
        }
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.c[0].prec()
    }

    /// `i`-th derivative at the expansion point.
    pub fn derivative(&self, i: usize) -> Float {
        let mut d = self.c[i].clone();
        for l in 2..=i as u32 {
            d *= l;
        }
        d
    }

    pub fn add_assign(&mut self, o: &Jet) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, o: &Jet) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a -= b;
        }
    }

    pub fn scale(&mut self, x: &Float) {
        for a in &mut self.c {
            *a *= x;
        }
    }

    pub fn add_const(&mut self, x: &Float) {
        self.c[0] += x;
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.order();
        let prec = self.prec();
        let mut out = Jet::zero(n, prec);
        for i in 0..=n {
            for l in 0..=i {
                out.c[i] += fl(prec, &self.c[l] * &o.c[i - l]);
            }
        }
        out
    }

    /// Multiply by the linear factor `(t + a)` where `t` is the jet variable
    /// minus the expansion point, i.e. by `s - s0 + a`.
    pub fn mul_linear(&self, a: &Float) -> Jet {
        let n = self.order();
        let prec = self.prec();
        let mut out = Jet::zero(n, prec);
        for i in 0..=n {
            out.c[i] = fl(prec, &self.c[i] * a);
            if i >= 1 {
                out.c[i] += &self.c[i - 1];
            }
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let n = self.order();
        let prec = self.prec();
        let mut out = Jet::zero(n, prec);
        out.c[0] = fl(prec, 1) / &self.c[0];
        for i in 1..=n {
            let mut acc = Float::new(prec);
            for l in 1..=i {
                acc += fl(prec, &self.c[l] * &out.c[i - l]);
            }
            out.c[i] = -(acc / &self.c[0]);
        }
        out
    }

    pub fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.recip())
    }

    /// Natural logarithm; requires a positive constant term.
    pub fn ln(&self) -> Jet {
        let n = self.order();
        let prec = self.prec();
        let mut out = Jet::zero(n, prec);
        out.c[0] = fl(prec, self.c[0].ln_ref());
        for i in 1..=n {
            let mut acc = fl(prec, &self.c[i] * i as u32);
            for l in 1..i {
                acc -= fl(prec, &out.c[l] * &self.c[i - l]) * l as u32;
            }
            out.c[i] = acc / &self.c[0] / i as u32;
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let n = self.order();
        let prec = self.prec();
        let mut out = Jet::zero(n, prec);
        out.c[0] = fl(prec, self.c[0].exp_ref());
        for i in 1..=n {
            let mut acc = Float::new(prec);
            for l in 1..=i {
                acc += fl(prec, &self.c[l] * &out.c[i - l]) * l as u32;
            }
            out.c[i] = acc / i as u32;
        }
        out
    }

    /// Formal derivative, dropping the top coefficient.
    pub fn diff(&self) -> Jet {
        let n = self.order();
        let prec = self.prec();
        if n == 0 {
            return Jet::zero(0, prec);
        }
        let c = (1..=n).map(|i| fl(prec, &self.c[i] * i as u32)).collect();
        Jet { c }
    }

    /// Largest `|c_i| * i!`, a crude size for derivative error budgets.
    pub fn max_derivative(&self) -> Float {
        let mut m = Float::new(64);
        for i in 0..=self.order() {
            let d = self.derivative(i).abs();
            if d > m {
                m = fl(64, &d);
            }
        }
        m
    }
}
