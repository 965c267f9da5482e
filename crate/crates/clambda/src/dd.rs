//! Double-double arithmetic for the factorial accumulators.
//!
//! A `Dd` is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, which
//! behaves like a float with a ~106-bit significand. Deformed factorials
//! reach 1e32 around degree 30, where plain f64 products would leave only
//! ~1e-16 relative headroom; accumulating in double-double keeps the
//! factorial-ratio comparisons well clear of the verification tolerances.
//! Only the handful of operations the accumulators need are implemented.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub(crate) fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub(crate) fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub(crate) fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub(crate) fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    pub(crate) const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub(crate) fn mul_c64(self, b: Complex64) -> Cdd {
        Cdd {
            re: self.re.mul_f64(b.re).sub(self.im.mul_f64(b.im)),
            im: self.re.mul_f64(b.im).add(self.im.mul_f64(b.re)),
        }
    }

    #[inline]
    pub(crate) fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_recovers_exact_factorial() {
        // 30! = 265252859812191058636308480000000 needs 108 bits, beyond f64,
        // but hi+lo must round to the correctly rounded f64 of the exact value.
        let mut acc = Dd::ONE;
        for k in 1..=30 {
            acc = acc.mul_f64(k as f64);
        }
        let exact = 265252859812191058636308480000000f64; // rounds on parse
        assert_eq!(acc.value(), exact);
        assert!(acc.lo != 0.0, "lo limb should carry the sub-ulp remainder");
    }

    #[test]
    fn mul_tracks_sub_ulp_error() {
        let a = 1.0 + f64::EPSILON;
        let p = Dd { hi: a, lo: 0.0 }.mul_f64(a);
        // (1+e)^2 = 1 + 2e + e^2; the e^2 term is unrepresentable in f64
        let err = p.value() - (1.0 + 2.0 * f64::EPSILON);
        assert!(err.abs() <= f64::EPSILON * f64::EPSILON * 1.5);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn complex_chain_matches_exact_integers() {
        // (1+2i)^12 = 11753 + 10296i, exactly representable in f64
        let mut acc = Cdd::ONE;
        for _ in 0..12 {
            acc = acc.mul_c64(Complex64::new(1.0, 2.0));
        }
        let v = acc.value();
        assert_eq!(v.re, 11753.0);
        assert_eq!(v.im, 10296.0);
    }
}
