#pragma once

// Adaptive explicit Runge-Kutta 8(5,3) pair of Dormand and Prince with the
// seventh-order continuous extension (Hairer, Norsett and Wanner, "Solving
// Ordinary Differential Equations I", DOP853).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "hilldro/errors.hpp"

namespace hilldro {

struct Dop853Options {
  double rtol = 1e-12;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
};

struct Dop853Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

template <std::size_t N>
class Dop853 {
 public:
  using State = std::array<double, N>;

  // Accepted step [t0, t1] together with its continuous extension.
  class Step {
   public:
    double t0 = 0.0;
    double t1 = 0.0;
    State y0{};
    State y1{};

    State eval(double t) const {
      const double h = t1 - t0;
      const double s = h == 0.0 ? 0.0 : (t - t0) / h;
      const double s1 = 1.0 - s;
      State out;
      for (std::size_t i = 0; i < N; ++i) {
        out[i] = rc_[0][i] +
                 s * (rc_[1][i] +
                      s1 * (rc_[2][i] +
                            s * (rc_[3][i] +
                                 s1 * (rc_[4][i] +
                                       s * (rc_[5][i] +
                                            s1 * (rc_[6][i] +
                                                  s * rc_[7][i]))))));
      }
      return out;
    }

   private:
    friend class Dop853;
    std::array<State, 8> rc_{};
  };

  explicit Dop853(Dop853Options options = {}) : opt_(options) {
    if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0)) {
      throw DomainError("Dop853: tolerances must be positive");
    }
  }

  // Integrates y' = f(t, y) from t0 to t1 (either direction). The observer
  // is called once per accepted step with the dense interpolant.
  template <class F, class Observer>
  Dop853Stats integrate(F&& f, double t0, const State& y0, double t1,
                        Observer&& on_step) const {
    Dop853Stats stats;
    if (t1 == t0) return stats;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double hmax = std::min(std::abs(t1 - t0), opt_.max_step);

    Work w;
    w.y = y0;
    double t = t0;
    f(t, w.y, w.k1);
    ++stats.evaluations;
    double h = dir * initial_step(f, t, w, hmax, dir, stats);
    bool reject = false;
    bool last = false;
    constexpr double kSafe = 0.9;
    // Step ratio h_new / h stays within [kFacMin, kFacMax].
    constexpr double kFacMin = 1.0 / 3.0;
    constexpr double kFacMax = 6.0;
    constexpr double kExpo = 1.0 / 8.0;
    constexpr double kUround = 2.3e-16;

    for (std::size_t n = 0;; ++n) {
      if (n > opt_.max_steps) {
        throw IntegrationError("Dop853: step budget exhausted at t = " +
                               std::to_string(t));
      }
      if (0.1 * std::abs(h) <= std::abs(t) * kUround) {
        throw IntegrationError("Dop853: step size underflow at t = " +
                               std::to_string(t));
      }
      if ((t + 1.01 * h - t1) * dir > 0.0) {
        h = t1 - t;
        last = true;
      }
      stages(f, t, h, w);
      stats.evaluations += 11;
      const double err = std::abs(h) * error_norm(w);
      const double fac11 = std::pow(err, kExpo);
      double fac = std::clamp(fac11 / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
      double hnew = h / fac;

      if (err <= 1.0) {
        ++stats.accepted;
        const double tnew = t + h;
        f(tnew, w.ynew, w.k4);
        ++stats.evaluations;
        Step step;
        dense_output(f, t, h, w, step);
        stats.evaluations += 3;
        step.t0 = t;
        step.t1 = last ? t1 : tnew;
        step.y0 = w.y;
        step.y1 = w.ynew;
        w.k1 = w.k4;
        w.y = w.ynew;
        t = step.t1;
        on_step(static_cast<const Step&>(step));
        if (last) return stats;
        if (std::abs(hnew) > hmax) hnew = dir * hmax;
        if (reject) hnew = dir * std::min(std::abs(hnew), std::abs(h));
        reject = false;
      } else {
        hnew = h / std::min(1.0 / kFacMin, fac11 / kSafe);
        reject = true;
        if (stats.accepted >= 1) ++stats.rejected;
        last = false;
      }
      h = hnew;
    }
  }

 private:
  struct Work {
    State y{}, ynew{}, tmp{};
    State k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, k8{}, k9{}, k10{};
  };

  template <class F>
  double initial_step(F& f, double t, Work& w, double hmax, double dir,
                      Dop853Stats& stats) const {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(w.y[i]);
      dnf += (w.k1[i] / sk) * (w.k1[i] / sk);
      dny += (w.y[i] / sk) * (w.y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    for (std::size_t i = 0; i < N; ++i) w.tmp[i] = w.y[i] + dir * h * w.k1[i];
    f(t + dir * h, w.tmp, w.k2);
    ++stats.evaluations;
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(w.y[i]);
      const double q = (w.k2[i] - w.k1[i]) / sk;
      der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 1.0 / 8.0);
    return std::min({100.0 * h, h1, hmax});
  }

  template <class F>
  static void stages(F& f, double t, double h, Work& w) {
    constexpr double c2 = 0.526001519587677318785587544488E-01,
                     c3 = 0.789002279381515978178381316732E-01,
                     c4 = 0.118350341907227396726757197510E+00,
                     c5 = 0.281649658092772603273242802490E+00,
                     c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00,
                     c8 = 0.307692307692307692307692307692E+00,
                     c9 = 0.651282051282051282051282051282E+00, c10 = 0.6E+00,
                     c11 = 0.857142857142857142857142857142E+00;
    constexpr double b1 = 5.42937341165687622380535766363E-2,
                     b6 = 4.45031289275240888144113950566E0,
                     b7 = 1.89151789931450038304281599044E0,
                     b8 = -5.8012039600105847814672114227E0,
                     b9 = 3.1116436695781989440891606237E-1,
                     b10 = -1.52160949662516078556178806805E-1,
                     b11 = 2.01365400804030348374776537501E-1,
                     b12 = 4.47106157277725905176885569043E-2;
    constexpr double a21 = 5.26001519587677318785587544488E-2,
                     a31 = 1.97250569845378994544595329183E-2,
                     a32 = 5.91751709536136983633785987549E-2,
                     a41 = 2.95875854768068491816892993775E-2,
                     a43 = 8.87627564304205475450678981324E-2,
                     a51 = 2.41365134159266685502369798665E-1,
                     a53 = -8.84549479328286085344864962717E-1,
                     a54 = 9.24834003261792003115737966543E-1,
                     a61 = 3.7037037037037037037037037037E-2,
                     a64 = 1.70828608729473871279604482173E-1,
                     a65 = 1.25467687566822425016691814123E-1,
                     a71 = 3.7109375E-2,
                     a74 = 1.70252211019544039314978060272E-1,
                     a75 = 6.02165389804559606850219397283E-2,
                     a76 = -1.7578125E-2,
                     a81 = 3.70920001185047927108779319836E-2,
                     a84 = 1.70383925712239993810214054705E-1,
                     a85 = 1.07262030446373284651809199168E-1,
                     a86 = -1.53194377486244017527936158236E-2,
                     a87 = 8.27378916381402288758473766002E-3,
                     a91 = 6.24110958716075717114429577812E-1,
                     a94 = -3.36089262944694129406857109825E0,
                     a95 = -8.68219346841726006818189891453E-1,
                     a96 = 2.75920996994467083049415600797E1,
                     a97 = 2.01540675504778934086186788979E1,
                     a98 = -4.34898841810699588477366255144E1,
                     a101 = 4.77662536438264365890433908527E-1,
                     a104 = -2.48811461997166764192642586468E0,
                     a105 = -5.90290826836842996371446475743E-1,
                     a106 = 2.12300514481811942347288949897E1,
                     a107 = 1.52792336328824235832596922938E1,
                     a108 = -3.32882109689848629194453265587E1,
                     a109 = -2.03312017085086261358222928593E-2,
                     a111 = -9.3714243008598732571704021658E-1,
                     a114 = 5.18637242884406370830023853209E0,
                     a115 = 1.09143734899672957818500254654E0,
                     a116 = -8.14978701074692612513997267357E0,
                     a117 = -1.85200656599969598641566180701E1,
                     a118 = 2.27394870993505042818970056734E1,
                     a119 = 2.49360555267965238987089396762E0,
                     a1110 = -3.0467644718982195003823669022E0,
                     a121 = 2.27331014751653820792359768449E0,
                     a124 = -1.05344954667372501984066689879E1,
                     a125 = -2.00087205822486249909675718444E0,
                     a126 = -1.79589318631187989172765950534E1,
                     a127 = 2.79488845294199600508499808837E1,
                     a128 = -2.85899827713502369474065508674E0,
                     a129 = -8.87285693353062954433549289258E0,
                     a1210 = 1.23605671757943030647266201528E1,
                     a1211 = 6.43392746015763530355970484046E-1;

    auto& y = w.y;
    auto& s = w.tmp;
    for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + h * a21 * w.k1[i];
    f(t + c2 * h, s, w.k2);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
    f(t + c3 * h, s, w.k3);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a41 * w.k1[i] + a43 * w.k3[i]);
    f(t + c4 * h, s, w.k4);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a51 * w.k1[i] + a53 * w.k3[i] + a54 * w.k4[i]);
    f(t + c5 * h, s, w.k5);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a61 * w.k1[i] + a64 * w.k4[i] + a65 * w.k5[i]);
    f(t + c6 * h, s, w.k6);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a71 * w.k1[i] + a74 * w.k4[i] + a75 * w.k5[i] +
                         a76 * w.k6[i]);
    f(t + c7 * h, s, w.k7);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a81 * w.k1[i] + a84 * w.k4[i] + a85 * w.k5[i] +
                         a86 * w.k6[i] + a87 * w.k7[i]);
    f(t + c8 * h, s, w.k8);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a91 * w.k1[i] + a94 * w.k4[i] + a95 * w.k5[i] +
                         a96 * w.k6[i] + a97 * w.k7[i] + a98 * w.k8[i]);
    f(t + c9 * h, s, w.k9);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a101 * w.k1[i] + a104 * w.k4[i] + a105 * w.k5[i] +
                         a106 * w.k6[i] + a107 * w.k7[i] + a108 * w.k8[i] +
                         a109 * w.k9[i]);
    f(t + c10 * h, s, w.k10);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a111 * w.k1[i] + a114 * w.k4[i] + a115 * w.k5[i] +
                         a116 * w.k6[i] + a117 * w.k7[i] + a118 * w.k8[i] +
                         a119 * w.k9[i] + a1110 * w.k10[i]);
    f(t + c11 * h, s, w.k2);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y[i] + h * (a121 * w.k1[i] + a124 * w.k4[i] + a125 * w.k5[i] +
                         a126 * w.k6[i] + a127 * w.k7[i] + a128 * w.k8[i] +
                         a129 * w.k9[i] + a1210 * w.k10[i] + a1211 * w.k2[i]);
    f(t + h, s, w.k3);
    // k2, k3 now hold stages 11 and 12; k4 receives the solution increment.
    for (std::size_t i = 0; i < N; ++i) {
      w.k4[i] = b1 * w.k1[i] + b6 * w.k6[i] + b7 * w.k7[i] + b8 * w.k8[i] +
                b9 * w.k9[i] + b10 * w.k10[i] + b11 * w.k2[i] + b12 * w.k3[i];
      w.ynew[i] = y[i] + h * w.k4[i];
    }
  }

  double error_norm(const Work& w) const {
    constexpr double bhh1 = 0.244094488188976377952755905512E+00,
                     bhh2 = 0.733846688281611857341361741547E+00,
                     bhh3 = 0.220588235294117647058823529412E-01;
    constexpr double er1 = 0.1312004499419488073250102996E-01,
                     er6 = -0.1225156446376204440720569753E+01,
                     er7 = -0.4957589496572501915214079952E+00,
                     er8 = 0.1664377182454986536961530415E+01,
                     er9 = -0.3503288487499736816886487290E+00,
                     er10 = 0.3341791187130174790297318841E+00,
                     er11 = 0.8192320648511571246570742613E-01,
                     er12 = -0.2235530786388629525884427845E-01;
    double err = 0.0, err2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk =
          1.0 / (opt_.atol + opt_.rtol * std::max(std::abs(w.y[i]),
                                                   std::abs(w.ynew[i])));
      double q = (w.k4[i] - bhh1 * w.k1[i] - bhh2 * w.k9[i] - bhh3 * w.k3[i]) * sk;
      err2 += q * q;
      q = (er1 * w.k1[i] + er6 * w.k6[i] + er7 * w.k7[i] + er8 * w.k8[i] +
           er9 * w.k9[i] + er10 * w.k10[i] + er11 * w.k2[i] + er12 * w.k3[i]) *
          sk;
      err += q * q;
    }
    const double deno = err + 0.01 * err2;
    return err * std::sqrt(1.0 / (deno <= 0.0 ? static_cast<double>(N)
                                              : deno * static_cast<double>(N)));
  }

  // Expects k4 = f(t + h, ynew). Overwrites k2, k3, k10.
  template <class F>
  static void dense_output(F& f, double t, double h, Work& w, Step& step) {
    constexpr double c14 = 0.1E+00, c15 = 0.2E+00,
                     c16 = 0.777777777777777777777777777778E+00;
    constexpr double a141 = 5.61675022830479523392909219681E-2,
                     a147 = 2.53500210216624811088794765333E-1,
                     a148 = -2.46239037470802489917441475441E-1,
                     a149 = -1.24191423263816360469010140626E-1,
                     a1410 = 1.5329179827876569731206322685E-1,
                     a1411 = 8.20105229563468988491666602057E-3,
                     a1412 = 7.56789766054569976138603589584E-3,
                     a1413 = -8.298E-3;
    constexpr double a151 = 3.18346481635021405060768473261E-2,
                     a156 = 2.83009096723667755288322961402E-2,
                     a157 = 5.35419883074385676223797384372E-2,
                     a158 = -5.49237485713909884646569340306E-2,
                     a1511 = -1.08347328697249322858509316994E-4,
                     a1512 = 3.82571090835658412954920192323E-4,
                     a1513 = -3.40465008687404560802977114492E-4,
                     a1514 = 1.41312443674632500278074618366E-1;
    constexpr double a161 = -4.28896301583791923408573538692E-1,
                     a166 = -4.69762141536116384314449447206E0,
                     a167 = 7.68342119606259904184240953878E0,
                     a168 = 4.06898981839711007970213554331E0,
                     a169 = 3.56727187455281109270669543021E-1,
                     a1613 = -1.39902416515901462129418009734E-3,
                     a1614 = 2.9475147891527723389556272149E0,
                     a1615 = -9.15095847217987001081870187138E0;
    constexpr double d41 = -0.84289382761090128651353491142E+01,
                     d46 = 0.56671495351937776962531783590E+00,
                     d47 = -0.30689499459498916912797304727E+01,
                     d48 = 0.23846676565120698287728149680E+01,
                     d49 = 0.21170345824450282767155149946E+01,
                     d410 = -0.87139158377797299206789907490E+00,
                     d411 = 0.22404374302607882758541771650E+01,
                     d412 = 0.63157877876946881815570249290E+00,
                     d413 = -0.88990336451333310820698117400E-01,
                     d414 = 0.18148505520854727256656404962E+02,
                     d415 = -0.91946323924783554000451984436E+01,
                     d416 = -0.44360363875948939664310572000E+01;
    constexpr double d51 = 0.10427508642579134603413151009E+02,
                     d56 = 0.24228349177525818288430175319E+03,
                     d57 = 0.16520045171727028198505394887E+03,
                     d58 = -0.37454675472269020279518312152E+03,
                     d59 = -0.22113666853125306036270938578E+02,
                     d510 = 0.77334326684722638389603898808E+01,
                     d511 = -0.30674084731089398182061213626E+02,
                     d512 = -0.93321305264302278729567221706E+01,
                     d513 = 0.15697238121770843886131091075E+02,
                     d514 = -0.31139403219565177677282850411E+02,
                     d515 = -0.93529243588444783865713862664E+01,
                     d516 = 0.35816841486394083752465898540E+02;
    constexpr double d61 = 0.19985053242002433820987653617E+02,
                     d66 = -0.38703730874935176555105901742E+03,
                     d67 = -0.18917813819516756882830838328E+03,
                     d68 = 0.52780815920542364900561016686E+03,
                     d69 = -0.11573902539959630126141871134E+02,
                     d610 = 0.68812326946963000169666922661E+01,
                     d611 = -0.10006050966910838403183860980E+01,
                     d612 = 0.77771377980534432092869265740E+00,
                     d613 = -0.27782057523535084065932004339E+01,
                     d614 = -0.60196695231264120758267380846E+02,
                     d615 = 0.84320405506677161018159903784E+02,
                     d616 = 0.11992291136182789328035130030E+02;
    constexpr double d71 = -0.25693933462703749003312586129E+02,
                     d76 = -0.15418974869023643374053993627E+03,
                     d77 = -0.23152937917604549567536039109E+03,
                     d78 = 0.35763911791061412378285349910E+03,
                     d79 = 0.93405324183624310003907691704E+02,
                     d710 = -0.37458323136451633156875139351E+02,
                     d711 = 0.10409964950896230045147246184E+03,
                     d712 = 0.29840293426660503123344363579E+02,
                     d713 = -0.43533456590011143754432175058E+02,
                     d714 = 0.96324553959188282948394950600E+02,
                     d715 = -0.39177261675615439165231486172E+02,
                     d716 = -0.14972683625798562581422125276E+03;

    auto& rc = step.rc_;
    for (std::size_t i = 0; i < N; ++i) {
      rc[0][i] = w.y[i];
      const double ydiff = w.ynew[i] - w.y[i];
      rc[1][i] = ydiff;
      const double bspl = h * w.k1[i] - ydiff;
      rc[2][i] = bspl;
      rc[3][i] = ydiff - h * w.k4[i] - bspl;
      rc[4][i] = d41 * w.k1[i] + d46 * w.k6[i] + d47 * w.k7[i] + d48 * w.k8[i] +
                 d49 * w.k9[i] + d410 * w.k10[i] + d411 * w.k2[i] + d412 * w.k3[i];
      rc[5][i] = d51 * w.k1[i] + d56 * w.k6[i] + d57 * w.k7[i] + d58 * w.k8[i] +
                 d59 * w.k9[i] + d510 * w.k10[i] + d511 * w.k2[i] + d512 * w.k3[i];
      rc[6][i] = d61 * w.k1[i] + d66 * w.k6[i] + d67 * w.k7[i] + d68 * w.k8[i] +
                 d69 * w.k9[i] + d610 * w.k10[i] + d611 * w.k2[i] + d612 * w.k3[i];
      rc[7][i] = d71 * w.k1[i] + d76 * w.k6[i] + d77 * w.k7[i] + d78 * w.k8[i] +
                 d79 * w.k9[i] + d710 * w.k10[i] + d711 * w.k2[i] + d712 * w.k3[i];
    }
    auto& s = w.tmp;
    for (std::size_t i = 0; i < N; ++i)
      s[i] = w.y[i] + h * (a141 * w.k1[i] + a147 * w.k7[i] + a148 * w.k8[i] +
                           a149 * w.k9[i] + a1410 * w.k10[i] + a1411 * w.k2[i] +
                           a1412 * w.k3[i] + a1413 * w.k4[i]);
    f(t + c14 * h, s, w.k10);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = w.y[i] + h * (a151 * w.k1[i] + a156 * w.k6[i] + a157 * w.k7[i] +
                           a158 * w.k8[i] + a1511 * w.k2[i] + a1512 * w.k3[i] +
                           a1513 * w.k4[i] + a1514 * w.k10[i]);
    f(t + c15 * h, s, w.k2);
    for (std::size_t i = 0; i < N; ++i)
      s[i] = w.y[i] + h * (a161 * w.k1[i] + a166 * w.k6[i] + a167 * w.k7[i] +
                           a168 * w.k8[i] + a169 * w.k9[i] + a1613 * w.k4[i] +
                           a1614 * w.k10[i] + a1615 * w.k2[i]);
    f(t + c16 * h, s, w.k3);
    for (std::size_t i = 0; i < N; ++i) {
      rc[4][i] = h * (rc[4][i] + d413 * w.k4[i] + d414 * w.k10[i] +
                      d415 * w.k2[i] + d416 * w.k3[i]);
      rc[5][i] = h * (rc[5][i] + d513 * w.k4[i] + d514 * w.k10[i] +
                      d515 * w.k2[i] + d516 * w.k3[i]);
      rc[6][i] = h * (rc[6][i] + d613 * w.k4[i] + d614 * w.k10[i] +
                      d615 * w.k2[i] + d616 * w.k3[i]);
      rc[7][i] = h * (rc[7][i] + d713 * w.k4[i] + d714 * w.k10[i] +
                      d715 * w.k2[i] + d716 * w.k3[i]);
    }
  }

  Dop853Options opt_;
};

}  // namespace hilldro
