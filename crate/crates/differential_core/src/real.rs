use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst};

/// Floating point scalar used by the numerical code.
pub trait Real: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    fn lit(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Real for f64 {
    fn lit(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn lit(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

pub type C<T> = Complex<T>;

pub fn cis<T: Real>(angle: T) -> C<T> {
    Complex::from_polar(T::one(), angle)
}

/// `e^{i pi theta}`.
pub fn phase<T: Real>(theta: T) -> C<T> {
    cis(T::PI() * theta)
}

/// Chooses between `s` and `-s` the value nearer `prev`.
pub fn nearest_branch<T: Real>(s: C<T>, prev: C<T>) -> C<T> {
    if (s - prev).norm_sqr() <= (s + prev).norm_sqr() {
        s
    } else {
        -s
    }
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::TAU();
    let mut x = a % two_pi;
    if x > T::PI() {
        x = x - two_pi;
    } else if x <= -T::PI() {
        x = x + two_pi;
    }
    x
}

pub fn cmp<T: Real>(a: &T, b: &T) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
}

/// `a mod m` in `[0, m)`.
pub fn rem_euclid<T: Real>(a: T, m: T) -> T {
    let r = a - (a / m).floor() * m;
    if r >= m {
        r - m
    } else {
        r
    }
}
