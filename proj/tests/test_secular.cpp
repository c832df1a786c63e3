#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "hilldro/cases.hpp"
#include "hilldro/errors.hpp"
#include "hilldro/secular.hpp"

using namespace hilldro;

namespace {

constexpr double kPi = std::numbers::pi;

// Phase averages K~ = <1/delta>, E~ = <1/delta^3>, delta^2 = 4(1 - 3/4 sin^2).
double Kt() { return boost::math::ellint_1(std::sqrt(0.75)) / kPi; }
double Et() { return boost::math::ellint_2(std::sqrt(0.75)) / kPi; }

double rho_ref(double phi, double chi, double sigma) {
  const double c = std::cos(phi), s = std::sin(phi);
  return std::sqrt(1 + 3 * c * c + 4 * sigma * s + 8 * chi * c + 4 * sigma * sigma +
                   4 * chi * chi);
}

double average_inverse_rho(double chi, double sigma, int n = 4096) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += 1.0 / rho_ref(2 * kPi * i / n, chi, sigma);
  return sum / n;
}

SecularSolutionConfig mode(AveragingMode m) {
  SecularSolutionConfig c;
  c.mode = m;
  return c;
}

}  // namespace

TEST_CASE("Lindstedt coefficients follow from the elliptic constants") {
  const double K = Kt(), E = Et();
  CHECK(K == doctest::Approx(0.686440250309175).epsilon(1e-14));
  CHECK(E == doctest::Approx(0.38549110629751).epsilon(1e-13));
  CHECK(lindstedt_e1() == doctest::Approx(4.0 / 9 * (4 * E - K) / (K - E)).epsilon(1e-13));
  CHECK(lindstedt_e2() == doctest::Approx((11 * K - 14 * E) / (24 * (K - E))).epsilon(1e-13));
  CHECK(lindstedt_e1() == doctest::Approx(1.2634459).epsilon(1e-7));
  CHECK(lindstedt_e2() == doctest::Approx(0.2982186).epsilon(1e-6));
}

TEST_CASE("reference case actions and periods") {
  const ModelParams p;
  for (const auto& tc : kTestCases) {
    CAPTURE(tc.id);
    const SecularState s = as_mean(to_reduced(tc.ic, p));
    CHECK(std::abs(s.Phi - tc.Phi) <= 1e-12);
    const Periods per = periods6(s, p);
    CHECK(std::abs(per.T / tc.T - 1) <= 1e-3);
    CHECK(std::abs(per.T_star / tc.T_star - 1) <= 1e-3);
  }
}

TEST_CASE("order-6 periods from the closed-form frequencies") {
  const ModelParams p{1.0, 1.2};
  const SecularState s{0.2, 3.0, 60.0, 0.05};
  const double B = std::sqrt(2 * s.Phi / p.omega);
  const double K = Kt(), E = Et();
  const double W = p.omega * std::sqrt((K - E) * p.mu / (p.omega * p.omega * B * B * B));
  CHECK(libration_frequency(s.Phi, p) == doctest::Approx(W).epsilon(1e-13));
  // mean of dK6/dPhi over one libration of the harmonic center motion
  const double ps = 3 * s.Q / W, h = 1e-4;
  const int n = 512;
  double rate = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * kPi * i / n;
    const double q = s.q * std::cos(a) - ps * std::sin(a);
    const double Q = s.Q * std::cos(a) + s.q * W / 3 * std::sin(a);
    rate += (hamiltonian6(q, Q, s.Phi + h, p) - hamiltonian6(q, Q, s.Phi - h, p)) / (2 * h) / n;
  }
  CHECK(orbit_frequency_correction(s, p) == doctest::Approx(rate / p.omega - 1).epsilon(1e-7));
  const Periods per = periods6(s, p);
  CHECK(per.T_star == doctest::Approx(2 * kPi / W).epsilon(1e-13));
  CHECK(per.T == doctest::Approx(2 * kPi / rate).epsilon(1e-10));
  // the phase advance over one libration matches
  const auto end = solution6(s, per.T_star, p);
  CHECK(end.phi - s.phi == doctest::Approx(rate * per.T_star).epsilon(1e-10));
  CHECK(end.q == doctest::Approx(s.q).epsilon(1e-10));
}

TEST_CASE("averaged rates are Hamilton's equations of the mean Hamiltonian") {
  const ModelParams p{1.0, 1.0};
  const double h = 1e-5;
  for (auto m : {AveragingMode::closed6, AveragingMode::series8, AveragingMode::quadrature}) {
    const auto cfg = mode(m);
    for (const auto& [q, Q, Phi] : {std::tuple{-4.0, 0.3, 45.0}, std::tuple{2.0, -0.1, 80.0}}) {
      auto K = [&](double a, double b, double c) { return averaged_hamiltonian(a, b, c, p, cfg); };
      const auto r = secular_rhs(q, Q, Phi, p, cfg);
      CHECK(r.dq == doctest::Approx((K(q, Q + h, Phi) - K(q, Q - h, Phi)) / (2 * h)).epsilon(1e-7));
      CHECK(r.dQ == doctest::Approx(-(K(q + h, Q, Phi) - K(q - h, Q, Phi)) / (2 * h)).epsilon(1e-7));
      CHECK(r.dphi == doctest::Approx((K(q, Q, Phi + h) - K(q, Q, Phi - h)) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("explicit forms of the averaged rates") {
  const ModelParams p{1.0, 1.0};
  const double q = -5.0, Q = 0.2, Phi = 45.0;
  const double W = libration_frequency(Phi, p);
  const auto r6 = secular_rhs(q, Q, Phi, p, mode(AveragingMode::closed6));
  CHECK(r6.dq == doctest::Approx(-3 * Q).epsilon(1e-13));
  CHECK(r6.dQ == doctest::Approx(W * W * q / 3).epsilon(1e-13));

  const auto k = secular_coefficients(Phi, p);
  const double w = p.omega;
  const auto r8 = secular_rhs(q, Q, Phi, p, mode(AveragingMode::series8));
  CHECK(r8.dq == doctest::Approx(-k.b2 * Q).epsilon(1e-13));
  CHECK(r8.dQ == doctest::Approx(w * w / 4 * q * (2 * k.b3 + w * k.b4 * q * q / (4 * Phi))).epsilon(1e-13));

  // b3 reduces the series rate to the closed form at small q
  CHECK(w * w / 2 * k.b3 == doctest::Approx(W * W / 3).epsilon(1e-13));
}

TEST_CASE("series coefficients") {
  const ModelParams p;
  const double K = Kt(), E = Et();
  for (double Phi : {20.0, 45.0, 200.0}) {
    const auto k = secular_coefficients(Phi, p);
    const double x = k.ratio;
    CHECK(k.ratio == doctest::Approx(k.Omega * k.Omega).epsilon(1e-13));
    CHECK(k.b1 == doctest::Approx(1 - 2 / (K - E) * (K + (K * K - 0.5) * x / (K - E)) * x).epsilon(1e-12));
    CHECK(k.b2 == doctest::Approx(3 * (1 + k.e1 * x)).epsilon(1e-13));
    CHECK(k.b3 == doctest::Approx(2.0 / 3 * x).epsilon(1e-13));
    CHECK(k.b4 == doctest::Approx((11 * K - 14 * E) / (9 * (K - E)) * x).epsilon(1e-13));
    CHECK(k.b2 > 0);
    CHECK(k.b3 > 0);
    CHECK(k.b4 > 0);
  }
  // b1 changes sign where Omega^2 / omega^2 is about 0.226
  auto b1 = [&](double Phi) { return secular_coefficients(Phi, p).b1; };
  boost::uintmax_t it = 100;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      b1, 0.1, 50.0, boost::math::tools::eps_tolerance<double>(50), it);
  const double ratio = secular_coefficients(0.5 * (lo + hi), p).ratio;
  CHECK(ratio == doctest::Approx(0.226).epsilon(2e-3));
  CHECK(b1(0.9 * lo) < 0);
  CHECK(b1(1.1 * hi) > 0);
}

TEST_CASE("numerical phase average matches the closed-form coefficients") {
  const ModelParams p;
  const double K = Kt(), E = Et();
  const double Phi = 45.0;
  const double B = std::sqrt(2 * Phi / p.omega);
  auto cfg = mode(AveragingMode::quadrature);
  cfg.quadrature_tol = 1e-15;
  const double K00 = averaged_hamiltonian(0.0, 0.0, Phi, p, cfg);
  auto lib_avg = [&](double chi) { return averaged_hamiltonian(2 * B * chi, 0.0, Phi, p, cfg) - K00; };
  Eigen::MatrixXd A(12, 5);
  Eigen::VectorXd f(12), g(12);
  for (int i = 0; i < 12; ++i) {
    const double chi = 0.004 * (i + 1);
    for (int j = 0; j < 5; ++j) A(i, j) = std::pow(chi, 2 * j);
    f(i) = average_inverse_rho(chi, 0.0);
    g(i) = lib_avg(chi);
  }
  const Eigen::VectorXd a = A.colPivHouseholderQr().solve(f);
  // in units of mu / (2B): constant 2K~, chi^2 coefficient 4/3 (K~ - E~)
  CHECK(std::abs(2 * a(0) - 2 * K) <= 1e-9);
  CHECK(std::abs(2 * a(1) - 4.0 / 3 * (K - E)) <= 1e-9);
  CHECK(std::abs(2 * a(2) - 1.0 / 9 * (11 * K - 14 * E)) <= 1e-6);

  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(g);
  const double unit = -p.mu / (2 * B);
  CHECK(std::abs(c(1) / unit - 4.0 / 3 * (K - E)) <= 1e-9);

  // The library quadrature agrees with an independent trapezoid sum.
  for (const auto& [q, Q] : {std::pair{-6.0, 0.4}, std::pair{3.0, -0.2}}) {
    const double chi = q / (2 * B), sigma = Q / p.omega / B;
    const double k = averaged_hamiltonian(q, Q, Phi, p, cfg);
    const double expect = averaged_hamiltonian(0.0, 0.0, Phi, p, cfg) - 1.5 * Q * Q -
                          p.mu / B * (average_inverse_rho(chi, sigma) - average_inverse_rho(0, 0));
    CHECK(k == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("mean Hamiltonians agree at small amplitude") {
  const ModelParams p;
  const double Phi = 45.0;
  const auto q8 = mode(AveragingMode::quadrature);
  const double B = std::sqrt(2 * Phi);
  double prev = 0.0;
  for (double s : {0.2, 0.1, 0.05}) {
    const double q = 2 * B * s, Q = B * s;
    const double d_series = std::abs(
        (hamiltonian8(q, Q, Phi, p) - hamiltonian8(0, 0, Phi, p)) -
        (averaged_hamiltonian(q, Q, Phi, p, q8) - averaged_hamiltonian(0, 0, Phi, p, q8)));
    if (prev > 0) CHECK(prev / d_series > 12);  // sigma^4, sigma^2 chi^2 are not in the series
    prev = d_series;
  }
}

TEST_CASE("contour grid of the order-8 Hamiltonian") {
  const ModelParams p;
  const auto g = contour_grid(45.0, {-10, 10}, {-1, 1}, 41, 21, p);
  REQUIRE(g.energies.size() == 41 * 21);
  CHECK(g.at(7, 3) == doctest::Approx(hamiltonian8(g.q[7], g.Q[3], 45.0, p)).epsilon(1e-15));
  double best = -1e300;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < 41; ++i) {
    for (std::size_t j = 0; j < 21; ++j) {
      CHECK(g.at(i, j) == doctest::Approx(g.at(40 - i, 20 - j)).epsilon(1e-14));
      CHECK(g.at(i, j) == doctest::Approx(g.at(40 - i, j)).epsilon(1e-14));
      if (g.at(i, j) > best) best = g.at(i, j), bi = i, bj = j;
    }
  }
  CHECK(bi == 20);
  CHECK(bj == 10);
  CHECK_THROWS_AS(contour_grid(45.0, {-1, 1}, {-1, 1}, 1, 4, p), DomainError);
}

TEST_CASE("closed-form order-6 solution matches the integrated averaged flow") {
  const ModelParams p;
  const SecularState s0 = as_mean(to_reduced(kTestCases[2].ic, p));
  const double T = periods6(s0, p).T_star;
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(T * i / 50);
  const auto tr = secular_propagate(s0, times, mode(AveragingMode::closed6), p, {1e-13, 1e-13});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto a = solution6(s0, times[i], p);
    CHECK(tr.states[i].q == doctest::Approx(a.q).scale(10).epsilon(1e-9));
    CHECK(tr.states[i].Q == doctest::Approx(a.Q).scale(1).epsilon(1e-9));
    CHECK(tr.states[i].phi == doctest::Approx(a.phi).scale(100).epsilon(1e-9));
    CHECK(tr.states[i].Phi == s0.Phi);
  }
  CHECK(secular_libration_period(s0, mode(AveragingMode::closed6), p) ==
        doctest::Approx(T).epsilon(1e-8));
}

TEST_CASE("averaged flow conserves its Hamiltonian and takes long steps") {
  const ModelParams p;
  const auto& tc = kTestCases[0];
  const SecularState s0 = as_mean(to_reduced(tc.ic, p));
  const std::vector<double> times = {0.0, 10 * tc.T_star};
  for (auto m : {AveragingMode::series8, AveragingMode::quadrature}) {
    const auto cfg = mode(m);
    const auto tr = secular_propagate(s0, times, cfg, p, {1e-12, 1e-12});
    const auto& e = tr.states.back();
    const double k0 = averaged_hamiltonian(s0.q, s0.Q, s0.Phi, p, cfg);
    const double k1 = averaged_hamiltonian(e.q, e.Q, e.Phi, p, cfg);
    CHECK(std::abs(k1 / k0 - 1) <= 1e-10);
    const auto truth = propagate(tc.ic, 10 * tc.T_star, {1e-12, 1e-12}, p, 2);
    CHECK(truth.steps > 50 * tr.steps);
  }
}

TEST_CASE("Lindstedt solution") {
  const ModelParams p;
  SUBCASE("frequency shift at zero amplitude") {
    const LindstedtSolution L({0, 0, 45.0, 0}, p);
    CHECK(L.n1() == doctest::Approx(0.5 * lindstedt_e1() * L.coefficients().ratio).epsilon(1e-14));
    CHECK(L.libration_period() == doctest::Approx(2 * kPi / ((1 + L.n1()) * L.Omega())).epsilon(1e-14));
  }
  SUBCASE("starts at the initial elements") {
    const SecularState s0{0.3, -9.0, 45.0, -0.1};
    const LindstedtSolution L(s0, p);
    const auto c = L.center(0.0);
    CHECK(c.first == doctest::Approx(s0.q).epsilon(1e-12));
    CHECK(c.second == doctest::Approx(s0.Q).epsilon(1e-12));
    const auto st = L.state(0.0);
    CHECK(st.phi == doctest::Approx(s0.phi).epsilon(1e-14));
    CHECK(st.Phi == s0.Phi);
    // periodic in the libration period
    const double Ts = L.libration_period();
    const auto c1 = L.center(Ts);
    CHECK(c1.first == doctest::Approx(c.first).epsilon(1e-10));
    CHECK(c1.second == doctest::Approx(c.second).epsilon(1e-10));
  }
  SUBCASE("residual in the order-8 equations shrinks at least cubically") {
    const auto cfg = mode(AveragingMode::series8);
    for (double Phi : {45.0, 200.0}) {
      double prev = 0.0;
      for (double s : {1.0, 0.5, 0.25, 0.125}) {
        const double q0 = -9.0 * s, Q0 = -0.1 * s;
        const LindstedtSolution L({0, q0, Phi, Q0}, p);
        const double Ts = L.libration_period(), h = 1e-3;
        const double Qscale = L.Omega() / 3;
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
          const double t = Ts * i / 1000;
          const auto a = L.center(t + h), b = L.center(t - h), m = L.center(t);
          const auto r = secular_rhs(m.first, m.second, Phi, p, cfg);
          worst = std::max(worst, std::hypot((a.first - b.first) / (2 * h) - r.dq,
                                             ((a.second - b.second) / (2 * h) - r.dQ) / Qscale));
        }
        CAPTURE(Phi);
        CAPTURE(s);
        if (prev > 0) CHECK(prev / worst >= 8.0);
        prev = worst;
      }
    }
  }
  SUBCASE("libration period converges to the integrated series flow") {
    double prev = 1.0;
    for (double a : {3.0, 1.5, 0.75, 0.375}) {
      const SecularState s0{0, -a, 45.0, -a / 100};
      const double T = secular_libration_period(s0, mode(AveragingMode::series8), p, {1e-13, 1e-13});
      const double err = std::abs(LindstedtSolution(s0, p).libration_period() / T - 1);
      CAPTURE(a);
      CHECK(err < prev / 8);
      prev = err;
    }
    CHECK(prev < 1e-6);
  }
}

TEST_CASE("secular configuration is validated") {
  const ModelParams p;
  SecularSolutionConfig c;
  c.correction_order = 3;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.correction_order = 9;
  c.nodes = 8;
  c.mode = AveragingMode::quadrature;
  CHECK_THROWS_AS(c.validate(), DomainError);
  CHECK_THROWS_AS(secular_coefficients(-1.0, p), DomainError);
  CHECK_THROWS_AS(secular_libration_period({0, 0, 45, 0}, mode(AveragingMode::closed6), p), DomainError);
  CHECK_THROWS_AS(secular_propagate({0, 1, 45, 0}, {1.0, 0.5}, mode(AveragingMode::closed6), p),
                  DomainError);
}
