//! Unevaluated sum of two `f64`s (double-double), just enough for the
//! power recurrence.

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct TwoFold {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

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

impl TwoFold {
    pub(crate) fn new(v: f64) -> Self {
        TwoFold { hi: v, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn add(self, o: TwoFold) -> TwoFold {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        TwoFold { hi, lo }
    }

    pub(crate) fn mul_f64(self, b: f64) -> TwoFold {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        TwoFold { hi, lo }
    }

    pub(crate) fn div_f64(self, b: f64) -> TwoFold {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let r = ((self.hi - p) - e) + self.lo;
        let (hi, lo) = quick_two_sum(q1, r / b);
        TwoFold { hi, lo }
    }
}
