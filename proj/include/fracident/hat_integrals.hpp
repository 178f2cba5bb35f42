#pragma once

namespace fracident {

/// Integral of t^e over [t0, t1], 0 <= t0 < t1. Exact antiderivative with the
/// logarithmic branch at e = -1; written via expm1 so nearby exponents do not
/// cancel. t0 = 0 requires e > -1.
double power_integral(double e, double t0, double t1);

/// Reference hat of half-width h centered at 0: max(0, 1 - |x|/h).
double hat_value(double x, double h);

/// Overlap of two hats with centers tau apart: integral of
/// hat(x) * hat(x + tau) over the line. Even in tau, supported on |tau| < 2h,
/// piecewise cubic; evaluated exactly by Gauss on the linear pieces.
double hat_overlap(double tau, double h);

} // namespace fracident
