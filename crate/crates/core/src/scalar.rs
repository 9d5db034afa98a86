//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an index or count into the working scalar.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// `e^{2πik/n}`, reduced to the first octant when `8 | n` so the angle
/// carries no rounding from large arguments.
pub fn unit_root<T: Real>(k: usize, n: usize) -> Complex<T> {
    let k = k % n;
    let two_pi = T::PI() + T::PI();
    if !n.is_multiple_of(8) {
        return cis(two_pi * from_usize::<T>(k) / from_usize::<T>(n));
    }
    let q = n / 4;
    let (quadrant, r) = (k / q, k % q);
    let base = if 2 * r <= q {
        cis(two_pi * from_usize::<T>(r) / from_usize::<T>(n))
    } else {
        let (s, c) = (two_pi * from_usize::<T>(q - r) / from_usize::<T>(n)).sin_cos();
        Complex::new(s, c)
    };
    match quadrant {
        0 => base,
        1 => Complex::new(-base.im, base.re),
        2 => -base,
        _ => Complex::new(base.im, -base.re),
    }
}

/// Values that can be accumulated with Neumaier compensation.
pub trait Accumulate: Copy {
    type Scalar: Real;
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: Self::Scalar) -> Self;
    /// Size used for error control: a norm of the value.
    fn magnitude(self) -> Self::Scalar;
    fn neumaier(sum: &mut Self, comp: &mut Self, x: Self);
}

fn neumaier_real<T: Real>(sum: &mut T, comp: &mut T, x: T) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl<T: Real> Accumulate for T {
    type Scalar = T;
    fn zero() -> Self {
        T::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: T) -> Self {
        self * k
    }
    fn magnitude(self) -> T {
        self.abs()
    }
    fn neumaier(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier_real(sum, comp, x);
    }
}

impl<T: Real> Accumulate for Complex<T> {
    type Scalar = T;
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: T) -> Self {
        self * k
    }
    fn magnitude(self) -> T {
        self.norm()
    }
    fn neumaier(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier_real(&mut sum.re, &mut comp.re, x.re);
        neumaier_real(&mut sum.im, &mut comp.im, x.im);
    }
}

impl<V: Accumulate, const N: usize> Accumulate for [V; N] {
    type Scalar = V::Scalar;
    fn zero() -> Self {
        [V::zero(); N]
    }
    fn add(self, other: Self) -> Self {
        let mut out = self;
        for (o, x) in out.iter_mut().zip(other) {
            *o = o.add(x);
        }
        out
    }
    fn sub(self, other: Self) -> Self {
        let mut out = self;
        for (o, x) in out.iter_mut().zip(other) {
            *o = o.sub(x);
        }
        out
    }
    fn scale(self, k: V::Scalar) -> Self {
        self.map(|v| v.scale(k))
    }
    fn magnitude(self) -> V::Scalar {
        self.iter()
            .fold(V::Scalar::zero(), |m, v| m.max(v.magnitude()))
    }
    fn neumaier(sum: &mut Self, comp: &mut Self, x: Self) {
        for i in 0..N {
            V::neumaier(&mut sum[i], &mut comp[i], x[i]);
        }
    }
}

/// Order-preserving compensated sum.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<V: Accumulate> {
    sum: V,
    comp: V,
}

impl<V: Accumulate> Default for CompensatedSum<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Accumulate> CompensatedSum<V> {
    pub fn new() -> Self {
        Self {
            sum: V::zero(),
            comp: V::zero(),
        }
    }

    pub fn push(&mut self, x: V) {
        V::neumaier(&mut self.sum, &mut self.comp, x);
    }

    pub fn total(&self) -> V {
        self.sum.add(self.comp)
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum<V: Accumulate, I: IntoIterator<Item = V>>(items: I) -> V {
    let mut acc = CompensatedSum::new();
    for x in items {
        acc.push(x);
    }
    acc.total()
}
