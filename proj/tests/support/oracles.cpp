#include "oracles.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace oracle {

namespace odeint = boost::numeric::odeint;

Mat5 patch_ax(double u, double uy, double k1, double lambda) {
  const double a = std::exp(u), b = std::exp(-u);
  Mat5 m = Mat5::Zero();
  m(0, 1) = uy;
  m(1, 0) = -uy;
  m(0, 2) = -a * k1;
  m(2, 0) = a * k1;
  m(0, 3) = lambda * a;
  m(0, 4) = -lambda * b;
  m(3, 0) = lambda * b;
  m(4, 0) = -lambda * a;
  return m;
}

Mat5 patch_ay(double u, double ux, double k2, double lambda) {
  const double a = std::exp(u), b = std::exp(-u);
  Mat5 m = Mat5::Zero();
  m(0, 1) = -ux;
  m(1, 0) = ux;
  m(1, 2) = -a * k2;
  m(2, 1) = a * k2;
  m(1, 3) = lambda * a;
  m(1, 4) = lambda * b;
  m(3, 1) = -lambda * b;
  m(4, 1) = -lambda * a;
  return m;
}

Mat5 transport(const std::function<Mat5(double)>& a, const Mat5& f0, double s0, double s1, double tol) {
  if (s1 == s0) return f0;
  using State = std::array<double, 25>;
  State s;
  Eigen::Map<Mat5>(s.data()) = f0;
  auto rhs = [&](const State& x, State& dx, double t) {
    Eigen::Map<Mat5>(dx.data()) = Eigen::Map<const Mat5>(x.data()) * a(t);
  };
  odeint::integrate_adaptive(odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>()), rhs, s, s0, s1,
                             (s1 - s0) / 64.0);
  return Eigen::Map<Mat5>(s.data());
}

std::vector<Mat5> frames_on_grid(const std::function<Mat5(double, double)>& ax,
                                 const std::function<Mat5(double, double)>& ay, int nx, int ny, double hx, double hy,
                                 double x0, double y0, const Mat5& base, double tol) {
  std::vector<Mat5> out(static_cast<std::size_t>(nx) * ny);
  Mat5 f = base;
  out[0] = base;
  for (int i = 1; i < nx; ++i) {
    f = transport([&](double x) { return ax(x, y0); }, f, x0 + (i - 1) * hx, x0 + i * hx, tol);
    out[i] = f;
  }
  for (int i = 0; i < nx; ++i) {
    const double x = x0 + i * hx;
    Mat5 g = out[i];
    for (int j = 1; j < ny; ++j) {
      g = transport([&](double y) { return ay(x, y); }, g, y0 + (j - 1) * hy, y0 + j * hy, tol);
      out[static_cast<std::size_t>(j) * nx + i] = g;
    }
  }
  return out;
}

double Revolution::theta(double x) const { return base + amp * std::sin(x); }
double Revolution::dtheta(double x) const { return amp * std::cos(x); }
double Revolution::ddtheta(double x) const { return -amp * std::sin(x); }

std::vector<std::pair<double, double>> Revolution::profile(const std::vector<double>& xs) const {
  using State = std::array<double, 2>;
  State s{r0, 0.0};
  double at = x0;
  auto rhs = [&](const State& v, State& dv, double x) {
    dv[0] = v[0] * std::cos(theta(x));
    dv[1] = v[0] * std::sin(theta(x));
  };
  std::vector<std::pair<double, double>> out;
  for (double x : xs) {
    if (x > at) {
      odeint::integrate_adaptive(odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_dopri5<State>()), rhs, s,
                                 at, x, (x - at) / 16.0);
      at = x;
    }
    out.emplace_back(s[0], s[1]);
  }
  return out;
}

double Revolution::k(double x) const { return 0.5 * (std::sin(theta(x)) - dtheta(x)); }
double Revolution::kx(double x) const { return 0.5 * (std::cos(theta(x)) * dtheta(x) - ddtheta(x)); }

double bilinear_calapso_residual(double a, double b, double x, double y) {
  const double k = a + b * x * y;
  return 2.0 * b * b * b * (x * x + y * y) / (k * k * k) + 4.0 * (b * b * x * y + b * k);
}

}  // namespace oracle
