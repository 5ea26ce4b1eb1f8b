use crate::Scalar;

/// Composite Simpson rule on `[a, b]` with `panels` (rounded up to even) subintervals.
pub(crate) fn simpson<S: Scalar>(f: impl Fn(S) -> S, a: S, b: S, panels: usize) -> S {
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / S::lit(n as f64);
    let mut odd = S::zero();
    let mut even = S::zero();
    for i in 1..n {
        let x = a + h * S::lit(i as f64);
        if i % 2 == 1 {
            odd = odd + f(x);
        } else {
            even = even + f(x);
        }
    }
    h / S::lit(3.0) * (f(a) + f(b) + S::lit(4.0) * odd + S::two() * even)
}
