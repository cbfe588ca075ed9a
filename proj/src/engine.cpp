#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vending::detail {

namespace {

constexpr double kFloor = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lg(double x) { return x > 0.0 ? std::log2(x) : kNegInf; }

// Per-thread scratch buffers so the inner loop does not allocate.
struct Scratch {
  std::vector<double> buf[10];
  std::vector<std::uint32_t> g;
  std::vector<char> mask;
  double* zeros(int i, std::size_t n) {
    buf[i].assign(n, 0.0);
    return buf[i].data();
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

// out[i] proportional to 2^e[i] over allowed entries, floored and renormalized.
void exp_normalize(const double* e, std::size_t n, const char* allowed,
                   double* out) {
  double m = kNegInf;
  std::size_t live = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (allowed && !allowed[i]) continue;
    ++live;
    m = std::max(m, e[i]);
  }
  if (live == 0) throw std::logic_error("exp_normalize: empty support");
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (allowed && !allowed[i]) {
      out[i] = 0.0;
      continue;
    }
    out[i] = m == kNegInf ? 1.0 : std::exp2(e[i] - m);
    z += out[i];
  }
  double z2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (allowed && !allowed[i]) continue;
    out[i] = std::max(out[i] / z, kFloor);
    z2 += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= z2;
}

// Optimal reconstruction for every (a, u, y) given weights
// wt[(s*na + a)*nu + u] proportional to P(s, a, u).
void best_decoder(const EngineProblem& p, const double* wt,
                  std::vector<std::uint32_t>& g) {
  g.assign(p.na * p.nu * p.ny, 0);
  if (p.nxh == 0) return;
  double* acc = scratch().zeros(9, p.nxh);
  for (std::size_t a = 0; a < p.na; ++a)
    for (std::size_t u = 0; u < p.nu; ++u)
      for (std::size_t y = 0; y < p.ny; ++y) {
        std::fill(acc, acc + p.nxh, 0.0);
        for (std::size_t s = 0; s < p.ns; ++s) {
          const double m = wt[(s * p.na + a) * p.nu + u];
          if (m == 0.0) continue;
          const double* d = p.D(s, a, y);
          for (std::size_t xh = 0; xh < p.nxh; ++xh) acc[xh] += m * d[xh];
        }
        std::uint32_t best = 0;
        for (std::size_t xh = 1; xh < p.nxh; ++xh)
          if (acc[xh] < acc[best]) best = static_cast<std::uint32_t>(xh);
        g[(a * p.nu + u) * p.ny + y] = best;
      }
}

double decoded_distortion(const EngineProblem& p,
                          const std::vector<std::uint32_t>& g, std::size_t s,
                          std::size_t a, std::size_t u) {
  double d = 0.0;
  for (std::size_t y = 0; y < p.ny; ++y) d += p.D(s, a, y)[g[(a * p.nu + u) * p.ny + y]];
  return d;
}

// Shared by decoder_actions / indirect / causal / open switch: all use a
// kernel Q(a,u|s) and a table decoder.
EngineEval step_table(const EngineProblem& p, const EngineState& st,
                      const LagrangeWeights& lw, EngineState* next) {
  const std::size_t cols = p.cols();
  EngineEval ev;
  auto& sc = scratch();
  double* wt = sc.zeros(0, p.ns * cols);
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t k = 0; k < cols; ++k) wt[s * cols + k] = p.ps[s] * st.q[s * cols + k];
  best_decoder(p, wt, sc.g);
  const auto& g = sc.g;

  double* r = sc.zeros(1, cols);  // P(a,u)
  double* ra = sc.zeros(2, p.na);
  double* pauy = sc.zeros(3, cols * p.ny);
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t a = 0; a < p.na; ++a)
      for (std::size_t u = 0; u < p.nu; ++u) {
        const double m = wt[s * cols + a * p.nu + u];
        if (m == 0.0) continue;
        r[a * p.nu + u] += m;
        ra[a] += m;
        for (std::size_t y = 0; y < p.ny; ++y) pauy[(a * p.nu + u) * p.ny + y] += m * p.W(s, a, y);
      }
  // Conditioning marginal for the aux posterior: P(a,y) for decoder-side
  // functionals, P(y) for the open switch.
  const bool open = p.functional == Functional::encoder_open_switch;
  const bool causal = p.functional == Functional::causal;
  double* cond = sc.zeros(4, open ? p.ny : p.na * p.ny);
  for (std::size_t a = 0; a < p.na; ++a)
    for (std::size_t u = 0; u < p.nu; ++u)
      for (std::size_t y = 0; y < p.ny; ++y)
        cond[open ? y : a * p.ny + y] += pauy[(a * p.nu + u) * p.ny + y];

  // log posterior of (a, u) given the conditioning variables, per y
  double* lpost = sc.zeros(6, cols * p.ny);
  double* lbase = sc.zeros(7, cols);
  for (std::size_t a = 0; a < p.na; ++a)
    for (std::size_t u = 0; u < p.nu; ++u) {
      const std::size_t k = a * p.nu + u;
      lbase[k] = causal ? lg(r[k]) : (open ? 0.0 : lg(ra[a]));
      if (causal) continue;
      for (std::size_t y = 0; y < p.ny; ++y)
        lpost[k * p.ny + y] = lg(pauy[k * p.ny + y]) - lg(cond[open ? y : a * p.ny + y]);
    }

  double* e = sc.zeros(5, cols);
  for (std::size_t s = 0; s < p.ns; ++s) {
    const double* q = st.q.data() + s * cols;
    for (std::size_t a = 0; a < p.na; ++a)
      for (std::size_t u = 0; u < p.nu; ++u) {
        const std::size_t k = a * p.nu + u;
        double er = lbase[k];
        if (!causal) {
          for (std::size_t y = 0; y < p.ny; ++y) {
            const double wy = p.W(s, a, y);
            if (wy == 0.0) continue;
            er += wy * lpost[k * p.ny + y];
          }
        }
        const double dist = p.nxh ? decoded_distortion(p, g, s, a, u) : 0.0;
        if (q[k] > 0.0 && p.ps[s] > 0.0) {
          const double m = p.ps[s] * q[k];
          ev.rate += m * (std::log2(q[k]) - er);
          ev.distortion += m * dist;
          ev.cost += m * p.cost[a];
        }
        e[k] = er - lw.lambda_d * dist - lw.lambda_c * p.cost[a];
        if (std::isnan(e[k])) e[k] = kNegInf;
      }
    if (next) {
      exp_normalize(e, cols, p.mask.empty() ? nullptr : p.mask.data(),
                    next->q.data() + s * cols);
    }
  }
  ev.lagrangian = ev.rate + lw.lambda_d * ev.distortion + lw.lambda_c * ev.cost;
  if (!next) ev.decoder = g;
  return ev;
}

EngineEval step_independent(const EngineProblem& p, const EngineState& st,
                            const LagrangeWeights& lw, EngineState* next,
                            double eta) {
  const std::size_t nu = p.nu;
  EngineEval ev;
  auto& sc = scratch();
  // Decoder weights use q(u|s,a) only; pi does not change the argmin.
  double* wt = sc.zeros(0, p.ns * p.na * nu);
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t k = 0; k < p.na * nu; ++k)
      wt[s * p.na * nu + k] = p.ps[s] * st.q[s * p.na * nu + k];
  best_decoder(p, wt, sc.g);
  const auto& g = sc.g;

  double* la = sc.zeros(1, p.na);
  double* e = sc.zeros(4, nu);
  for (std::size_t a = 0; a < p.na; ++a) {
    double* puy = sc.zeros(2, nu * p.ny);
    double* py = sc.zeros(3, p.ny);
    for (std::size_t s = 0; s < p.ns; ++s)
      for (std::size_t u = 0; u < nu; ++u) {
        const double m = wt[(s * p.na + a) * nu + u];
        for (std::size_t y = 0; y < p.ny; ++y) {
          puy[u * p.ny + y] += m * p.W(s, a, y);
          py[y] += m * p.W(s, a, y);
        }
      }
    double* lpost = sc.zeros(6, nu * p.ny);
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t y = 0; y < p.ny; ++y) lpost[u * p.ny + y] = lg(puy[u * p.ny + y]) - lg(py[y]);
    double rate_a = 0.0, dist_a = 0.0;
    for (std::size_t s = 0; s < p.ns; ++s) {
      const double* q = st.q.data() + (s * p.na + a) * nu;
      for (std::size_t u = 0; u < nu; ++u) {
        double er = 0.0;
        for (std::size_t y = 0; y < p.ny; ++y) {
          const double wy = p.W(s, a, y);
          if (wy == 0.0) continue;
          er += wy * lpost[u * p.ny + y];
        }
        const double dist = decoded_distortion(p, g, s, a, u);
        if (q[u] > 0.0 && p.ps[s] > 0.0) {
          rate_a += p.ps[s] * q[u] * (std::log2(q[u]) - er);
          dist_a += p.ps[s] * q[u] * dist;
        }
        e[u] = er - lw.lambda_d * dist;
        if (std::isnan(e[u])) e[u] = kNegInf;
      }
      if (next) exp_normalize(e, nu, nullptr, next->q.data() + (s * p.na + a) * nu);
    }
    la[a] = rate_a + lw.lambda_d * dist_a + lw.lambda_c * p.cost[a];
    ev.rate += st.pi[a] * rate_a;
    ev.distortion += st.pi[a] * dist_a;
    ev.cost += st.pi[a] * p.cost[a];
  }
  ev.lagrangian = ev.rate + lw.lambda_d * ev.distortion + lw.lambda_c * ev.cost;
  if (next) {
    double* ep = sc.zeros(5, p.na);
    for (std::size_t a = 0; a < p.na; ++a) ep[a] = std::log2(st.pi[a]) - eta * la[a];
    exp_normalize(ep, p.na, nullptr, next->pi.data());
  }
  if (!next) ev.decoder = g;
  return ev;
}

EngineEval step_decoder_lossless(const EngineProblem& p, const EngineState& st,
                                 const LagrangeWeights& lw, EngineState* next) {
  EngineEval ev;
  auto& sc = scratch();
  double* r = sc.zeros(0, p.na);
  double* pay = sc.zeros(1, p.na * p.ny);
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t a = 0; a < p.na; ++a) {
      const double m = p.ps[s] * st.q[s * p.na + a];
      r[a] += m;
      for (std::size_t y = 0; y < p.ny; ++y) pay[a * p.ny + y] += m * p.W(s, a, y);
    }
  double* e = sc.zeros(5, p.na);
  for (std::size_t s = 0; s < p.ns; ++s) {
    const double* q = st.q.data() + s * p.na;
    for (std::size_t a = 0; a < p.na; ++a) {
      double er = lg(r[a]);
      for (std::size_t y = 0; y < p.ny; ++y) {
        const double wy = p.W(s, a, y);
        if (wy == 0.0) continue;
        er += wy * (lg(p.ps[s] * q[a] * wy) - lg(pay[a * p.ny + y]));
      }
      if (q[a] > 0.0 && p.ps[s] > 0.0) {
        ev.rate += p.ps[s] * q[a] * (std::log2(q[a]) - er);
        ev.cost += p.ps[s] * q[a] * p.cost[a];
      }
      e[a] = er - lw.lambda_c * p.cost[a];
      if (std::isnan(e[a])) e[a] = kNegInf;
    }
    if (next) exp_normalize(e, p.na, nullptr, next->q.data() + s * p.na);
  }
  ev.lagrangian = ev.rate + lw.lambda_c * ev.cost;
  return ev;
}

EngineEval step_encoder_lossless(const EngineProblem& p, const EngineState& st,
                                 const LagrangeWeights& lw, EngineState* next) {
  EngineEval ev;
  auto& sc = scratch();
  double* py = sc.zeros(0, p.ny);
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t a = 0; a < p.na; ++a) {
      const double m = p.ps[s] * st.q[s * p.na + a];
      for (std::size_t y = 0; y < p.ny; ++y) py[y] += m * p.W(s, a, y);
    }
  double* e = sc.zeros(5, p.na);
  for (std::size_t s = 0; s < p.ns; ++s) {
    const double* q = st.q.data() + s * p.na;
    for (std::size_t a = 0; a < p.na; ++a) {
      double er = 0.0;
      for (std::size_t y = 0; y < p.ny; ++y) {
        const double wy = p.W(s, a, y);
        if (wy == 0.0) continue;
        er += wy * (lg(p.ps[s] * q[a] * wy) - lg(py[y]));
      }
      if (q[a] > 0.0 && p.ps[s] > 0.0) {
        ev.rate += p.ps[s] * q[a] * (std::log2(q[a]) - er);
        ev.cost += p.ps[s] * q[a] * p.cost[a];
      }
      e[a] = er - lw.lambda_c * p.cost[a];
      if (std::isnan(e[a])) e[a] = kNegInf;
    }
    if (next) exp_normalize(e, p.na, nullptr, next->q.data() + s * p.na);
  }
  ev.lagrangian = ev.rate + lw.lambda_c * ev.cost;
  return ev;
}

EngineEval step_closed_switch(const EngineProblem& p, const EngineState& st,
                              const LagrangeWeights& lw, EngineState* next,
                              bool update_q) {
  EngineEval ev;
  const std::size_t nxh = p.nxh;
  auto& sc = scratch();
  double* pay = sc.zeros(0, p.na * p.ny);
  double* py = sc.zeros(1, p.ny);
  double* payx = sc.zeros(2, p.na * p.ny * nxh);
  for (std::size_t x = 0; x < p.ns; ++x)
    for (std::size_t a = 0; a < p.na; ++a) {
      const double m = p.ps[x] * st.q[x * p.na + a];
      for (std::size_t y = 0; y < p.ny; ++y) {
        const double my = m * p.W(x, a, y);
        pay[a * p.ny + y] += my;
        py[y] += my;
        const double* k = st.k.data() + ((x * p.na + a) * p.ny + y) * nxh;
        for (std::size_t xh = 0; xh < nxh; ++xh) payx[(a * p.ny + y) * nxh + xh] += my * k[xh];
      }
    }
  // s(xh | a, y); uniform where P(a, y) = 0.
  double* ls = sc.zeros(3, p.na * p.ny * nxh);
  for (std::size_t ay = 0; ay < p.na * p.ny; ++ay)
    for (std::size_t xh = 0; xh < nxh; ++xh)
      ls[ay * nxh + xh] = pay[ay] > 0.0 ? lg(payx[ay * nxh + xh] / pay[ay])
                                        : -std::log2(static_cast<double>(nxh));

  double* e = sc.zeros(4, p.na);
  double* t = sc.zeros(5, nxh);
  for (std::size_t x = 0; x < p.ns; ++x) {
    const double* q = st.q.data() + x * p.na;
    for (std::size_t a = 0; a < p.na; ++a) {
      double er = 0.0, logz_sum = 0.0;
      for (std::size_t y = 0; y < p.ny; ++y) {
        const double wy = p.W(x, a, y);
        const std::size_t ay = a * p.ny + y;
        const double* k = st.k.data() + ((x * p.na + a) * p.ny + y) * nxh;
        // current contribution
        if (wy > 0.0 && q[a] > 0.0 && p.ps[x] > 0.0) {
          const double m = p.ps[x] * q[a] * wy;
          for (std::size_t xh = 0; xh < nxh; ++xh) {
            if (k[xh] <= 0.0) continue;
            ev.rate += m * k[xh] * (std::log2(k[xh]) - ls[ay * nxh + xh]);
            ev.distortion += m * k[xh] * p.rho[x * nxh + xh];
          }
        }
        // K update: s * 2^{-lambda_d rho}
        double mx = kNegInf;
        for (std::size_t xh = 0; xh < nxh; ++xh) {
          t[xh] = ls[ay * nxh + xh] - lw.lambda_d * p.rho[x * nxh + xh];
          mx = std::max(mx, t[xh]);
        }
        double z = 0.0;
        for (std::size_t xh = 0; xh < nxh; ++xh) z += mx == kNegInf ? 0.0 : std::exp2(t[xh] - mx);
        const double logz = mx == kNegInf ? kNegInf : mx + std::log2(z);
        if (next) exp_normalize(t, nxh, nullptr,
                                next->k.data() + ((x * p.na + a) * p.ny + y) * nxh);
        if (wy == 0.0) continue;
        er += wy * (lg(pay[ay]) - lg(py[y]));
        logz_sum += wy * logz;
      }
      if (q[a] > 0.0 && p.ps[x] > 0.0) {
        ev.rate += p.ps[x] * q[a] * (std::log2(q[a]) - er);
        ev.cost += p.ps[x] * q[a] * p.cost[a];
      }
      e[a] = er + logz_sum - lw.lambda_c * p.cost[a];
      if (std::isnan(e[a])) e[a] = kNegInf;
    }
    if (next) {
      if (update_q) {
        exp_normalize(e, p.na, nullptr, next->q.data() + x * p.na);
      } else {
        std::copy(q, q + p.na, next->q.data() + x * p.na);
      }
    }
  }
  ev.lagrangian = ev.rate + lw.lambda_d * ev.distortion + lw.lambda_c * ev.cost;
  return ev;
}

}  // namespace

EngineProblem build_engine(Functional f, const ProblemSpec& spec, std::size_t nu) {
  EngineProblem p;
  p.functional = f;
  p.nx = spec.x_size();
  p.na = spec.a_size();
  p.ny = spec.y_size();
  p.nxh = spec.xhat_size();
  p.cost = spec.lambda.vec();
  p.rho = spec.rho.data();
  const bool lossless =
      f == Functional::encoder_lossless || f == Functional::decoder_lossless;
  const bool closed = f == Functional::encoder_closed_switch;
  p.nu = (lossless || closed) ? 1 : nu;
  if (p.nu == 0) throw std::invalid_argument("auxiliary alphabet must be non-empty");

  if (f == Functional::indirect) {
    if (!spec.p_z_given_x || !spec.p_y_given_xza) {
      throw std::invalid_argument("indirect functional needs p_z_given_x and p_y_given_xza");
    }
    const auto& pz = *spec.p_z_given_x;
    const auto& wy = *spec.p_y_given_xza;
    const std::size_t nz = pz.output_size();
    p.ns = nz;
    p.ps.assign(nz, 0.0);
    for (std::size_t x = 0; x < p.nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) p.ps[z] += spec.px[x] * pz(x, z);
    p.w.assign(nz * p.na * p.ny, 0.0);
    p.dc.assign(nz * p.na * p.ny * p.nxh, 0.0);
    for (std::size_t z = 0; z < nz; ++z) {
      for (std::size_t x = 0; x < p.nx; ++x) {
        const double post = p.ps[z] > 0.0 ? spec.px[x] * pz(x, z) / p.ps[z] : spec.px[x];
        if (post == 0.0) continue;
        for (std::size_t a = 0; a < p.na; ++a)
          for (std::size_t y = 0; y < p.ny; ++y) {
            const double m = post * wy((x * nz + z) * p.na + a, y);
            p.w[(z * p.na + a) * p.ny + y] += m;
            for (std::size_t xh = 0; xh < p.nxh; ++xh)
              p.dc[((z * p.na + a) * p.ny + y) * p.nxh + xh] += m * spec.rho(x, xh);
          }
      }
    }
  } else {
    p.ns = p.nx;
    p.ps = spec.px.vec();
    p.w.assign(p.nx * p.na * p.ny, 0.0);
    for (std::size_t x = 0; x < p.nx; ++x)
      for (std::size_t a = 0; a < p.na; ++a)
        for (std::size_t y = 0; y < p.ny; ++y)
          p.w[(x * p.na + a) * p.ny + y] = spec.p_y_given_xa(x * p.na + a, y);
    if (lossless) {
      p.nxh = 0;
    } else {
      p.dc.assign(p.nx * p.na * p.ny * p.nxh, 0.0);
      for (std::size_t x = 0; x < p.nx; ++x)
        for (std::size_t a = 0; a < p.na; ++a)
          for (std::size_t y = 0; y < p.ny; ++y)
            for (std::size_t xh = 0; xh < p.nxh; ++xh)
              p.dc[((x * p.na + a) * p.ny + y) * p.nxh + xh] =
                  p.W(x, a, y) * spec.rho(x, xh);
    }
  }
  return p;
}

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer so neighbouring streams are decorrelated
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

namespace {

void dirichlet_row(std::mt19937_64& rng, double* out, std::size_t n,
                   const char* allowed) {
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (allowed && !allowed[i]) ? 0.0 : -std::log(uniform01(rng));
    z += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= z;
}

}  // namespace

EngineState initial_state(const EngineProblem& p, int restart, std::uint64_t seed) {
  EngineState st;
  const std::size_t cols = p.cols();
  st.q.assign(p.ns * cols, 0.0);
  const char* mask = p.mask.empty() ? nullptr : p.mask.data();
  const bool indep = p.functional == Functional::action_independent;
  const bool closed = p.functional == Functional::encoder_closed_switch;
  auto rng = seeded_rng(seed, static_cast<std::uint64_t>(restart));
  if (restart <= 1) {
    // Structured starts: u tracks the source symbol, actions uniform. Start 1
    // is nearly deterministic so the first decoder already reads u as x; a
    // skewed source otherwise drifts into the zero-rate fixed point.
    const double lift = restart == 0 ? 8.0 : 1e6;
    for (std::size_t s = 0; s < p.ns; ++s) {
      double* row = st.q.data() + s * cols;
      for (std::size_t a = 0; a < p.na; ++a)
        for (std::size_t u = 0; u < p.nu; ++u)
          if (!mask || mask[a * p.nu + u]) row[a * p.nu + u] = 1.0 + lift * (u == s % p.nu);
      if (indep) {
        for (std::size_t a = 0; a < p.na; ++a) {
          double z = 0.0;
          for (std::size_t u = 0; u < p.nu; ++u) z += row[a * p.nu + u];
          for (std::size_t u = 0; u < p.nu; ++u) row[a * p.nu + u] /= z;
        }
      } else {
        double z = 0.0;
        for (std::size_t k = 0; k < cols; ++k) z += row[k];
        for (std::size_t k = 0; k < cols; ++k) row[k] /= z;
      }
    }
    if (indep) st.pi.assign(p.na, 1.0 / static_cast<double>(p.na));
  } else {
    for (std::size_t s = 0; s < p.ns; ++s) {
      double* row = st.q.data() + s * cols;
      if (indep) {
        for (std::size_t a = 0; a < p.na; ++a) dirichlet_row(rng, row + a * p.nu, p.nu, nullptr);
      } else {
        dirichlet_row(rng, row, cols, mask);
      }
    }
    if (indep) {
      st.pi.resize(p.na);
      dirichlet_row(rng, st.pi.data(), p.na, nullptr);
    }
  }
  if (closed) {
    st.k.assign(p.ns * p.na * p.ny * p.nxh, 0.0);
    for (std::size_t x = 0; x < p.ns; ++x) {
      std::size_t best = 0;
      for (std::size_t xh = 1; xh < p.nxh; ++xh)
        if (p.rho[x * p.nxh + xh] < p.rho[x * p.nxh + best]) best = xh;
      for (std::size_t ay = 0; ay < p.na * p.ny; ++ay) {
        double* k = st.k.data() + (x * p.na * p.ny + ay) * p.nxh;
        if (restart == 0) {
          for (std::size_t xh = 0; xh < p.nxh; ++xh) k[xh] = (1.0 + 8.0 * (xh == best)) / (p.nxh + 8.0);
        } else {
          dirichlet_row(rng, k, p.nxh, nullptr);
        }
      }
    }
  }
  return st;
}

bool pure_action_state(const EngineProblem& p, std::size_t a, EngineState& out) {
  bool any = false;
  for (std::size_t u = 0; u < p.nu; ++u) any = any || p.allowed(a, u);
  if (!any) return false;
  out = initial_state(p, 0, 0);
  constexpr double kOther = 1e-6;
  if (p.functional == Functional::action_independent) {
    for (std::size_t b = 0; b < p.na; ++b) out.pi[b] = b == a ? 1.0 : kOther;
    double z = 0.0;
    for (double v : out.pi) z += v;
    for (double& v : out.pi) v /= z;
    return true;
  }
  const std::size_t cols = p.cols();
  for (std::size_t s = 0; s < p.ns; ++s) {
    double* row = out.q.data() + s * cols;
    double z = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      if (k / p.nu != a) row[k] *= kOther;
      z += row[k];
    }
    for (std::size_t k = 0; k < cols; ++k) row[k] /= z;
  }
  return true;
}

std::vector<double> joint_kernel(const EngineProblem& p, const EngineState& st) {
  if (p.functional != Functional::action_independent) return st.q;
  std::vector<double> out(st.q.size());
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t a = 0; a < p.na; ++a)
      for (std::size_t u = 0; u < p.nu; ++u) {
        const std::size_t i = (s * p.na + a) * p.nu + u;
        out[i] = st.pi[a] * st.q[i];
      }
  return out;
}

EngineState state_from_kernel(const EngineProblem& p, const std::vector<double>& kernel) {
  const std::size_t cols = p.cols();
  if (kernel.size() != p.ns * cols) {
    throw DimensionError("U", "kernel has " + std::to_string(kernel.size()) +
                                  " entries, expected " + std::to_string(p.ns * cols));
  }
  EngineState st = initial_state(p, 0, 0);
  if (p.functional != Functional::action_independent) {
    st.q = kernel;
    return st;
  }
  st.pi.assign(p.na, 0.0);
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t a = 0; a < p.na; ++a)
      for (std::size_t u = 0; u < p.nu; ++u) st.pi[a] += p.ps[s] * kernel[(s * p.na + a) * p.nu + u];
  for (std::size_t s = 0; s < p.ns; ++s)
    for (std::size_t a = 0; a < p.na; ++a) {
      const double* row = kernel.data() + (s * p.na + a) * p.nu;
      double z = 0.0;
      for (std::size_t u = 0; u < p.nu; ++u) z += row[u];
      for (std::size_t u = 0; u < p.nu; ++u)
        st.q[(s * p.na + a) * p.nu + u] = z > 0.0 ? row[u] / z : 1.0 / static_cast<double>(p.nu);
    }
  return st;
}

EngineEval engine_step(const EngineProblem& p, const EngineState& st,
                       const LagrangeWeights& w, EngineState* next, double eta) {
  if (next) {
    next->q.resize(st.q.size());
    next->pi.resize(st.pi.size());
    next->k.resize(st.k.size());
  }
  switch (p.functional) {
    case Functional::decoder_actions:
    case Functional::indirect:
    case Functional::causal:
    case Functional::encoder_open_switch:
      return step_table(p, st, w, next);
    case Functional::action_independent:
      return step_independent(p, st, w, next, eta);
    case Functional::decoder_lossless:
      return step_decoder_lossless(p, st, w, next);
    case Functional::encoder_lossless:
      return step_encoder_lossless(p, st, w, next);
    case Functional::encoder_closed_switch:
      return step_closed_switch(p, st, w, next, !p.freeze_q);
  }
  throw std::logic_error("engine_step: unknown functional");
}

namespace {

// Applies fn(data, length) to every normalized row of the state.
template <typename Fn>
void for_each_row(const EngineProblem& p, EngineState& st, Fn&& fn) {
  const bool indep = p.functional == Functional::action_independent;
  const std::size_t len = indep ? p.nu : p.cols();
  for (std::size_t i = 0; i + len <= st.q.size(); i += len) fn(st.q.data() + i, len, i, 0);
  if (!st.pi.empty()) fn(st.pi.data(), st.pi.size(), 0, 1);
  if (p.nxh > 0)
    for (std::size_t i = 0; i + p.nxh <= st.k.size(); i += p.nxh) fn(st.k.data() + i, p.nxh, i, 2);
}

// Log-domain extrapolation past the plain update: rows proportional to
// T^beta / cur^(beta-1). Entries with zero mass in T stay at zero.
void extrapolate(const EngineProblem& p, const EngineState& cur, const EngineState& t,
                 double beta, EngineState& out) {
  out = t;
  auto& sc = scratch();
  for_each_row(p, out, [&](double* row, std::size_t len, std::size_t off, int which) {
    const double* c = which == 0 ? cur.q.data() + off : which == 1 ? cur.pi.data() : cur.k.data() + off;
    const double* tt = which == 0 ? t.q.data() + off : which == 1 ? t.pi.data() : t.k.data() + off;
    double* e = sc.zeros(8, len);
    std::vector<char>& allowed = sc.mask;
    allowed.assign(len, 1);
    for (std::size_t i = 0; i < len; ++i) {
      if (tt[i] <= 0.0 || c[i] <= 0.0) {
        allowed[i] = tt[i] > 0.0;
        e[i] = tt[i] > 0.0 ? std::log2(tt[i]) : kNegInf;
        continue;
      }
      e[i] = beta * std::log2(tt[i]) - (beta - 1.0) * std::log2(c[i]);
    }
    exp_normalize(e, len, allowed.data(), row);
  });
}

}  // namespace

RunResult run_alternating(const EngineProblem& p, EngineState st,
                          const LagrangeWeights& w, const SolverConfig& cfg) {
  constexpr double kBetaMax = 16.0;
  RunResult res;
  double eta = cfg.step.initial;
  auto step = [&](const EngineState& s, EngineState& next) {
    EngineEval ev = engine_step(p, s, w, &next, eta);
    return ev;
  };
  EngineState t, cand, tc;
  EngineEval ev_cur = step(st, t);
  double beta = 1.0;
  int it = 1;
  for (; it < cfg.max_iters; ++it) {
    eta = std::min(eta * cfg.step.growth, cfg.step.max);
    EngineEval ev_c;
    if (beta > 1.0) {
      extrapolate(p, st, t, beta, cand);
      ev_c = step(cand, tc);
      if (ev_c.lagrangian > ev_cur.lagrangian) {
        beta = 1.0;
        ++it;
      } else {
        beta = std::min(beta * 2.0, kBetaMax);
      }
    }
    if (beta == 1.0) {
      cand = t;
      ev_c = step(cand, tc);
      beta = 2.0;
    }
    const double scale = std::max(1.0, std::abs(ev_c.lagrangian));
    const double dec = ev_cur.lagrangian - ev_c.lagrangian;
    if (dec < -1e-12 * scale) {
      // Floors can nudge the objective up at the very end; keep the best.
      res.converged = true;
      break;
    }
    std::swap(st, cand);
    std::swap(t, tc);
    ev_cur = std::move(ev_c);
    if (dec <= cfg.objective_tol * scale) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(it + 1, cfg.max_iters);
  res.eval = engine_step(p, st, w, nullptr, eta);
  res.state = std::move(st);
  return res;
}

}  // namespace vending::detail
