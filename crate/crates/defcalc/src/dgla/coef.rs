use num_traits::{One, Zero};

use crate::exactalg::{MPoly, Q};

/// Graded-commutative coefficient algebra tensored with a DGLA: plain
/// rationals, symbolic polynomials, or polynomial differential forms.
pub trait Coef: Clone + PartialEq + std::fmt::Debug {
    /// Zero with the same ambient shape (variable count, simplex, …).
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_nil(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn scaled(&self, c: &Q) -> Self;
    fn times(&self, o: &Self) -> Self;
    /// Grading involution `(−1)^{deg}`.
    fn twist(&self) -> Self;
    /// Internal differential (zero for constants).
    fn dd(&self) -> Self;

    fn negated(&self) -> Self {
        self.scaled(&-Q::one())
    }

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    fn from_q(&self, c: &Q) -> Self {
        self.one_like().scaled(c)
    }
}

impl Coef for Q {
    fn zero_like(&self) -> Q {
        Q::zero()
    }
    fn one_like(&self) -> Q {
        Q::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Q) -> Q {
        self + o
    }
    fn scaled(&self, c: &Q) -> Q {
        self * c
    }
    fn times(&self, o: &Q) -> Q {
        self * o
    }
    fn twist(&self) -> Q {
        self.clone()
    }
    fn dd(&self) -> Q {
        Q::zero()
    }
}

impl Coef for MPoly {
    fn zero_like(&self) -> MPoly {
        MPoly::zero(self.nvars)
    }
    fn one_like(&self) -> MPoly {
        MPoly::one(self.nvars)
    }
    fn is_nil(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn plus(&self, o: &MPoly) -> MPoly {
        MPoly::add(self, o)
    }
    fn scaled(&self, c: &Q) -> MPoly {
        MPoly::scale(self, c)
    }
    fn times(&self, o: &MPoly) -> MPoly {
        MPoly::mul(self, o)
    }
    fn twist(&self) -> MPoly {
        self.clone()
    }
    fn dd(&self) -> MPoly {
        MPoly::zero(self.nvars)
    }
}
