// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace breather {

enum class BesselFamily { J, Y, I, K };

struct BesselKind {
  BesselFamily family = BesselFamily::J;
  int order = 0;        // 0 or 1
  bool scaled = false;  // I·e^{-x}, K·e^{x}; ignored for J, Y
};

// Y and K need x > 0, J and I need x >= 0; DomainError otherwise.
double eval_bessel(BesselKind b, double x);

// Derivative of the unscaled function, multiplied by the same scale factor when
// b.scaled is set (so e^{-x}I₁'(x), e^{x}K₁'(x)).
double eval_bessel_derivative(BesselKind b, double x);

struct BesselJY {
  double j0, j1, y0, y1;
};
struct BesselIK {
  double i0, i1, k0, k1;  // i scaled by e^{-x}, k scaled by e^{x}
};

// All four J/Y values at once (x > 0).
BesselJY bessel_jy(double x);
// Scaled modified values at once (x > 0).
BesselIK bessel_ik_scaled(double x);

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);
double bessel_i0(double x);
double bessel_i1(double x);
double bessel_k0(double x);
double bessel_k1(double x);
double bessel_i0e(double x);
double bessel_i1e(double x);
double bessel_k0e(double x);
double bessel_k1e(double x);

}  // namespace breather
