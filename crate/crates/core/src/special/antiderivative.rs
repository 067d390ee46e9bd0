use crate::error::{Error, Result};

/// Which of the four exponential-trigonometric integrands is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpTrigKind {
    /// e^{ax} sin bx
    ExpSin,
    /// e^{ax} cos bx
    ExpCos,
    /// x e^{ax} sin bx
    XExpSin,
    /// x e^{ax} cos bx
    XExpCos,
}

/// Antiderivative of `x^j e^{ax} (sin|cos) bx`, `j ∈ {0, 1}`, with zero
/// constant of integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTrigAntiderivative {
    a: f64,
    b: f64,
    kind: ExpTrigKind,
}

impl ExpTrigAntiderivative {
    pub fn new(a: f64, b: f64, kind: ExpTrigKind) -> Result<Self> {
        if a == 0.0 && b == 0.0 {
            return Err(Error::domain("a² + b²", 0.0, "a and b must not both be zero"));
        }
        Ok(Self { a, b, kind })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn kind(&self) -> ExpTrigKind {
        self.kind
    }

    /// The integrand whose antiderivative this is.
    pub fn integrand(&self, x: f64) -> f64 {
        let e = (self.a * x).exp();
        match self.kind {
            ExpTrigKind::ExpSin => e * (self.b * x).sin(),
            ExpTrigKind::ExpCos => e * (self.b * x).cos(),
            ExpTrigKind::XExpSin => x * e * (self.b * x).sin(),
            ExpTrigKind::XExpCos => x * e * (self.b * x).cos(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        let r2 = a * a + b * b;
        let e = (a * x).exp();
        let (s, c) = (b * x).sin_cos();
        match self.kind {
            ExpTrigKind::ExpSin => e * (a * s - b * c) / r2,
            ExpTrigKind::ExpCos => e * (a * c + b * s) / r2,
            ExpTrigKind::XExpSin | ExpTrigKind::XExpCos => {
                let p = a * x / r2 - (a * a - b * b) / (r2 * r2);
                let q = b * x / r2 - 2.0 * a * b / (r2 * r2);
                if self.kind == ExpTrigKind::XExpSin {
                    e * (p * s - q * c)
                } else {
                    e * (p * c + q * s)
                }
            }
        }
    }

    /// `F(x2) - F(x1)`.
    pub fn definite(&self, x1: f64, x2: f64) -> f64 {
        self.eval(x2) - self.eval(x1)
    }
}

/// Convenience wrapper over [`ExpTrigAntiderivative::eval`].
pub fn exp_trig_antider(p: &ExpTrigAntiderivative, x: f64) -> f64 {
    p.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(ExpTrigAntiderivative::new(0.0, 0.0, ExpTrigKind::ExpCos).is_err());
    }

    #[test]
    fn b_zero_reduces_to_exponential() {
        let p = ExpTrigAntiderivative::new(2.0, 0.0, ExpTrigKind::ExpCos).unwrap();
        for x in [-1.0, 0.0, 0.3, 2.0] {
            assert!((p.eval(x) - (2.0 * x).exp() / 2.0).abs() < 1e-12 * (2.0 * x).exp());
        }
    }

    #[test]
    fn a_zero_reduces_to_minus_cos() {
        let p = ExpTrigAntiderivative::new(0.0, 1.0, ExpTrigKind::ExpSin).unwrap();
        assert!((p.eval(PI) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn central_differences_recover_integrand() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let kinds = [
            ExpTrigKind::ExpSin,
            ExpTrigKind::ExpCos,
            ExpTrigKind::XExpSin,
            ExpTrigKind::XExpCos,
        ];
        for i in 0..200 {
            let a: f64 = rng.gen_range(-5.0..5.0);
            let b: f64 = rng.gen_range(-5.0..5.0);
            let x: f64 = rng.gen_range(-2.0..2.0);
            let p = ExpTrigAntiderivative::new(a, b, kinds[i % 4]).unwrap();
            let d = 1e-4;
            // fourth-order central difference
            let num = (-p.eval(x + 2.0 * d) + 8.0 * p.eval(x + d) - 8.0 * p.eval(x - d)
                + p.eval(x - 2.0 * d))
                / (12.0 * d);
            let f = p.integrand(x);
            let scale = f.abs().max((a * x).exp() * x.abs().max(1.0) * 1e-2);
            assert!(
                (num - f).abs() <= 1e-7 * scale,
                "kind {:?} a={a} b={b} x={x}: {num} vs {f}",
                p.kind()
            );
        }
    }
}
