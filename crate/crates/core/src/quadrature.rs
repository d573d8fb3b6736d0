//! Composite quadrature on uniform samples.

use crate::scalar::Real;

/// Composite Simpson rule for samples `f` spaced by `h`.
///
/// With an odd number of intervals the last three are integrated with the
/// 3/8 rule. Fewer than two samples integrate to zero; two samples fall back
/// to the trapezoid.
pub fn simpson<T: Real>(f: &[T], h: T) -> T {
    let n = f.len();
    match n {
        0 | 1 => T::zero(),
        2 => h * (f[0] + f[1]) / T::two(),
        3 => h / T::lit(3.0) * (f[0] + T::lit(4.0) * f[1] + f[2]),
        _ => {
            let intervals = n - 1;
            let even_end = if intervals.is_multiple_of(2) { n } else { n - 3 };
            let mut sum = T::zero();
            for i in (0..even_end - 1).step_by(2) {
                sum += f[i] + T::lit(4.0) * f[i + 1] + f[i + 2];
            }
            let mut total = h / T::lit(3.0) * sum;
            if even_end != n {
                let k = n - 4;
                total += T::lit(3.0) * h / T::lit(8.0) * (f[k] + T::lit(3.0) * (f[k + 1] + f[k + 2]) + f[k + 3]);
            }
            total
        }
    }
}
