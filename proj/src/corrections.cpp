#include "hilldro/corrections.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hilldro/errors.hpp"
#include "hilldro/specfun.hpp"

namespace hilldro {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Everything a term needs at one point.
struct Point {
  double c, s, D, Ft, Et;
  double chi, sigma;
  double k;   // mu / (omega^2 B^3)
  double aq;  // mu / (omega^2 B^2)
  double aP;  // mu / (omega B)
  double aQ;  // mu / (omega B^2)
  double Kt, Ett;
};

Point make_point(const ReducedState& r, const ModelParams& p) {
  if (!(r.Phi > 0.0)) {
    throw DomainError("short-period corrections: Phi must be positive");
  }
  const auto& ec = specfun::elliptic_constants();
  const double w = p.omega;
  const double B = std::sqrt(2.0 * r.Phi / w);
  Point pt;
  pt.c = std::cos(r.phi);
  pt.s = std::sin(r.phi);
  pt.D = specfun::delta(r.phi);
  pt.Ft = specfun::tilde_F(r.phi);
  pt.Et = specfun::tilde_E(r.phi);
  pt.chi = r.q / (2.0 * B);
  pt.sigma = r.Q / (w * B);
  pt.k = p.mu / (w * w * B * B * B);
  pt.aq = p.mu / (w * w * B * B);
  pt.aP = p.mu / (w * B);
  pt.aQ = p.mu / (w * B * B);
  pt.Kt = ec.Ktilde;
  pt.Ett = ec.Etilde;
  return pt;
}

double log_term(double s) {
  const double num = 2.0 * kSqrt3 + 3.0 * s;
  const double den = 2.0 * kSqrt3 - 3.0 * s;
  if (!(num > 0.0) || !(den > 0.0)) {
    throw DomainError("short-period corrections: log argument not positive");
  }
  return std::log(num / den);
}

void check_order(int m) {
  if (m < kMinCorrectionOrder || m > kMaxCorrectionOrder) {
    throw DomainError("short-period corrections: order " + std::to_string(m) +
                      " outside 4..9");
  }
}

CorrectionTerm term4(const Point& t) {
  return {-t.k * 0.5 * t.Ft, 0.0, t.aP * (1.0 / t.D - t.Kt), 0.0};
}

CorrectionTerm term5(const Point& t) {
  const double D3 = t.D * t.D * t.D;
  return {-t.k * (2.0 / t.D) * t.chi * t.s, 0.0,
          -t.aP * (4.0 / D3) * t.chi * t.c, -t.aQ * t.s / (2.0 * t.D)};
}

CorrectionTerm term6(const Point& t) {
  const double c = t.c, s = t.s, D = t.D;
  const double D3 = D * D * D;
  const double D5 = D3 * D * D;
  const double x2 = t.chi * t.chi;
  const double trig = (1.5 / D3) * (5.0 + 3.0 * c * c) * s * c;
  CorrectionTerm r;
  r.phi = t.k * ((4.0 / D) * t.sigma * c + x2 * (t.Et - t.Ft + trig));
  r.q = -t.aq * (2.0 / D) * c;
  r.Phi = t.aP * (x2 * ((2.0 / 3.0) * (t.Ett - t.Kt) -
                        (2.0 / D5) * (1.0 - 9.0 * c * c)) -
                  (2.0 / D3) * t.sigma * s);
  r.Q = t.aQ * t.chi * ((t.Et - t.Ft) / 3.0 + trig / 3.0);
  return r;
}

CorrectionTerm term7(const Point& t) {
  const double c = t.c, s = t.s, D = t.D;
  const double c2 = c * c;
  const double D2 = D * D;
  const double D3 = D2 * D;
  const double D5 = D3 * D2;
  const double x = t.chi, x2 = x * x;
  const double inv3 = 1.0 / D3 - t.Ett;
  CorrectionTerm r;
  r.phi = t.k * x *
          (8.0 * t.sigma * inv3 +
           x2 / (3.0 * D5) * (4.0 - 112.0 * c2 - 84.0 * c2 * c2) * s);
  r.q = -t.aq * (8.0 / 3.0) * x * inv3;
  r.Phi = t.aP * (4.0 / D5) * x *
          (6.0 * t.sigma * s - (x2 / D2) * (6.0 - 22.0 * c2)) * c;
  r.Q = t.aQ * ((4.0 / 3.0) * t.sigma * inv3 +
                x2 / (2.0 * D5) * (1.0 - 28.0 * c2 - 21.0 * c2 * c2) * s);
  return r;
}

CorrectionTerm term8(const Point& t, double phi) {
  const double c = t.c, s = t.s, D = t.D;
  const double c2 = c * c, c4 = c2 * c2, c6 = c4 * c2;
  const double D2 = D * D;
  const double D3 = D2 * D;
  const double D5 = D3 * D2;
  const double D7 = D5 * D2;
  const double D9 = D7 * D2;
  const double x = t.chi, x2 = x * x, x4 = x2 * x2;
  const double sg = t.sigma, sg2 = sg * sg;
  const double p3 = 3.0 - 5.0 * c2 - 6.0 * c4;
  const double p67 = 67.0 - 387.0 * c2 - 387.0 * c4 - 189.0 * c6;
  const double trig23 = (6.0 / D3) * (2.0 + 3.0 * c2) * s * c;
  CorrectionTerm r;
  r.phi = t.k * (t.k * (2.0 * phase_bracket(phi) -
                        (1.5 * t.Kt + 0.5 / D) * t.Ft) +
                 sg2 * (t.Ft - 4.0 * t.Et - trig23) -
                 (16.0 / D5) * sg * x2 * p3 * c +
                 (5.0 / 36.0) * x4 *
                     (14.0 * t.Et - 11.0 * t.Ft - (3.0 / D7) * p67 * s * c));
  r.q = t.aq * ((2.0 / 3.0) * sg * (4.0 * t.Et - t.Ft + trig23) +
                (4.0 / D5) * x2 * p3 * c);
  r.Phi = t.aP *
          (t.k * (0.5 - 1.0 / D2 + t.Kt * (1.0 / D - t.Kt) -
                  (1.5 / D3) * t.Ft * s * c) +
           sg2 * ((2.0 / 3.0) * (t.Kt - 4.0 * t.Ett) +
                  (4.0 / D5) * (1.0 - 3.0 * c2)) +
           x4 * ((14.0 * t.Ett - 11.0 * t.Kt) / 18.0 +
                 (2.0 / D9) * (3.0 - 102.0 * c2 + 227.0 * c4)) -
           (12.0 / D7) * sg * x2 * (1.0 - 17.0 * c2) * s);
  r.Q = t.aQ * x *
        (x2 * ((14.0 * t.Et - 11.0 * t.Ft) / 18.0 +
               p67 * s * c / (6.0 * D7)) -
         (4.0 * sg / D5) * p3 * c);
  return r;
}

CorrectionTerm term9(const Point& t) {
  const double c = t.c, s = t.s, D = t.D;
  const double c2 = c * c, c4 = c2 * c2;
  const double D2 = D * D;
  const double D3 = D2 * D;
  const double D4 = D2 * D2;
  const double D5 = D4 * D;
  const double x = t.chi, x2 = x * x, x4 = x2 * x2;
  const double sg = t.sigma, sg2 = sg * sg;
  const double ash = std::asinh(kSqrt3 * c);
  const double L = log_term(s);
  const double p57 = 1.0 - 57.0 * c2;
  const double p43 = 1.0 - 4.0 * c2 - 3.0 * c4;
  const double p891 = 19.0 - 634.0 * c2 + 891.0 * (2.0 + 2.0 * c2 + c4) * c4;
  CorrectionTerm r;
  r.phi = t.k *
          (kSqrt3 * sg * ash +
           t.k * x *
               (0.625 * kSqrt3 * L + (1.0 / D) * (5.5 / D - 8.0 * t.Kt) * s +
                (4.0 / D3) * t.Ft * c) -
           (2.0 * x / D5) * ((40.0 / (9.0 * D2)) * sg * x2 * p57 +
                             8.0 * sg2 * p43 * s + x4 / (5.0 * D4) * p891 * s));
  r.q = -t.aq * (0.5 * kSqrt3 * ash -
                 (8.0 / D5) * x *
                     ((2.0 * x2 / (9.0 * D2)) * p57 + sg * p43 * s));
  // The printed F(phi) in this term is taken as the detrended tilde_F.
  r.Phi = t.aP / D4 *
          (t.k * x *
               ((10.5 - (26.0 / D) * t.Kt) * c -
                (1.5 - (6.0 / D) * t.Kt) * (3.0 - 4.0 * c2) * c -
                (2.0 / D) * t.Ft * (1.0 - 6.0 * c2) * s) -
           1.5 * D3 * sg * s -
           (8.0 / D3) * x *
               (12.0 * sg2 * (1.0 - 2.0 * c2) +
                (x4 / D4) * (15.0 - 190.0 * c2 + 303.0 * c4) +
                (10.0 / D2) * sg * x2 * (3.0 - 19.0 * c2) * s) *
               c);
  r.Q = t.aQ *
        (t.k * ((kSqrt3 / 16.0) * L + (1.0 / D) * (t.Ft * c / D2 - t.Kt * s) +
                (0.75 / D2) * s) -
         (1.0 / D5) * ((8.0 / (3.0 * D2)) * sg * x2 * p57 +
                       2.0 * sg2 * p43 * s + x4 / (6.0 * D4) * p891 * s));
  return r;
}

CorrectionTerm evaluate(int m, const Point& t, double phi) {
  switch (m) {
    case 4: return term4(t);
    case 5: return term5(t);
    case 6: return term6(t);
    case 7: return term7(t);
    case 8: return term8(t, phi);
    case 9: return term9(t);
    default: break;
  }
  throw DomainError("short-period corrections: order out of range");
}

ReducedState apply(const ReducedState& r, int order, const ModelParams& p,
                   CorrectionTerm (*term)(int, const ReducedState&,
                                          const ModelParams&)) {
  if (order == 0) return r;
  check_order(order);
  CorrectionTerm sum;
  for (int m = kMinCorrectionOrder; m <= order; ++m) {
    const auto d = term(m, r, p);
    sum.phi += d.phi;
    sum.q += d.q;
    sum.Phi += d.Phi;
    sum.Q += d.Q;
  }
  ReducedState out = r;
  out.phi += sum.phi;
  out.q += sum.q;
  out.Phi += sum.Phi;
  out.Q += sum.Q;
  if (!(out.Phi > 0.0)) {
    throw DomainError("short-period corrections: corrected Phi not positive");
  }
  out.phase_defined = true;
  return out;
}

}  // namespace

double phase_bracket(double phi) {
  return std::remainder(phi - std::atan2(std::sin(phi), 2.0 * std::cos(phi)),
                        2.0 * std::numbers::pi);
}

CorrectionTerm direct_term(int m, const ReducedState& mean,
                           const ModelParams& p) {
  check_order(m);
  return evaluate(m, make_point(mean, p), mean.phi);
}

CorrectionTerm inverse_term(int m, const ReducedState& osc,
                            const ModelParams& p) {
  check_order(m);
  const Point t = make_point(osc, p);
  const CorrectionTerm d = evaluate(m, t, osc.phi);
  CorrectionTerm r{-d.phi, -d.q, -d.Phi, -d.Q};
  const double D = t.D;
  const double D2 = D * D;
  const double D3 = D2 * D;
  const double c = t.c, s = t.s, c2 = c * c;
  const double k2 = t.k * t.k;
  if (m == 8) {
    r.phi += k2 * (1.0 / D - t.Kt) * t.Ft;
    r.Phi += t.aP * t.k *
             (t.Kt * (2.0 / D - t.Kt) - 1.0 / D2 + (1.5 / D3) * t.Ft * s * c);
  } else if (m == 9) {
    const double x = t.chi;
    r.phi += k2 * (2.0 * x / (9.0 * D)) *
             (t.Ft * c / D2 + 37.0 * (1.0 / D - t.Kt) * s);
    r.Phi += t.aP * t.k * (x / D) *
             ((29.0 / 9.0) * (1.0 / D - t.Kt) * c +
              (5.0 / D - (29.0 / 3.0) * t.Kt) / D2 * c * s * s -
              (22.0 / (9.0 * D2 * D2)) * t.Ft * (1.0 - 6.0 * c2) * s);
    r.Q += t.aQ * t.k * (11.0 / (9.0 * D)) *
           (t.Ft * c / D2 + (1.0 / D - t.Kt) * s);
  }
  return r;
}

ReducedState direct_correct(const ReducedState& mean, int order,
                            const ModelParams& p) {
  return apply(mean, order, p, &direct_term);
}

ReducedState inverse_correct(const ReducedState& osc, int order,
                             const ModelParams& p) {
  return apply(osc, order, p, &inverse_term);
}

ReducedState osculating_to_mean_cartesian(const CartesianState& s, int order,
                                          const ModelParams& p) {
  return inverse_correct(to_reduced(s, p), order, p);
}

}  // namespace hilldro
