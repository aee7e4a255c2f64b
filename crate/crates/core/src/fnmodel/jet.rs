use std::ops::{Add, Div, Mul, Neg, Sub};

/// Truncated Taylor expansion of order three at a point.
///
/// `c[k]` holds `f⁽ᵏ⁾(t) / k!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub c: [f64; 4],
}

const FACTORIAL: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

impl Jet3 {
    pub const fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Self {
            c: [c0, c1, c2, c3],
        }
    }

    pub const fn constant(v: f64) -> Self {
        Self::new(v, 0.0, 0.0, 0.0)
    }

    /// The independent variable seeded at `t`.
    pub const fn variable(t: f64) -> Self {
        Self::new(t, 1.0, 0.0, 0.0)
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `order`-th derivative, i.e. `c[order] · order!`.
    pub fn derivative(&self, order: usize) -> f64 {
        self.c[order] * FACTORIAL[order]
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    pub fn recip(self) -> Self {
        Self::constant(1.0) / self
    }

    pub fn exp(self) -> Self {
        let a = &self.c;
        let mut e = [0.0; 4];
        e[0] = a[0].exp();
        for k in 1..4 {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self { c: e }
    }

    /// Returns `(sin(self), cos(self))`, propagated together.
    pub fn sin_cos(self) -> (Self, Self) {
        let a = &self.c;
        let mut s = [0.0; 4];
        let mut c = [0.0; 4];
        (s[0], c[0]) = a[0].sin_cos();
        for k in 1..4 {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                ds += j as f64 * a[j] * c[k - j];
                dc += j as f64 * a[j] * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = -dc / k as f64;
        }
        (Self { c: s }, Self { c })
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Self {
        let mut result = Self::constant(1.0);
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        result
    }
}

impl Add for Jet3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            c: std::array::from_fn(|i| self.c[i] + rhs.c[i]),
        }
    }
}

impl Sub for Jet3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            c: std::array::from_fn(|i| self.c[i] - rhs.c[i]),
        }
    }
}

impl Neg for Jet3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for Jet3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.c, &rhs.c);
        Self {
            c: std::array::from_fn(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()),
        }
    }
}

impl Div for Jet3 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let (a, b) = (&self.c, &rhs.c);
        let mut q = [0.0; 4];
        for k in 0..4 {
            let mut acc = a[k];
            for i in 1..=k {
                acc -= b[i] * q[k - i];
            }
            q[k] = acc / b[0];
        }
        Self { c: q }
    }
}

impl Mul<f64> for Jet3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            c: self.c.map(|x| x * rhs),
        }
    }
}
