/* Copyright 2026 The scaleinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "scaleinv/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "scaleinv/error.hpp"
#include "scaleinv/rng.hpp"

namespace scaleinv {

namespace {

// Counter streams, one per random quantity.
constexpr std::uint64_t kStreamPhase = 1;
constexpr std::uint64_t kStreamOnsite = 2;
constexpr std::uint64_t kStreamFields = 3;
constexpr std::uint64_t kStreamExponents = 4;
constexpr std::uint64_t kStreamPartners = 5;
constexpr std::uint64_t kStreamGoe = 6;

constexpr int kMaxSpins = 30;

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::AubryAndre: return "aubry_andre";
    case ModelKind::Anderson3D: return "anderson3d";
    case ModelKind::Avalanche: return "avalanche";
  }
  return "unknown";
}

std::string_view to_string(Boundary boundary) noexcept {
  return boundary == Boundary::Open ? "open" : "periodic";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "aubry_andre" || text == "AubryAndre" || text == "aa")
    return ModelKind::AubryAndre;
  if (text == "anderson3d" || text == "Anderson3D" || text == "anderson")
    return ModelKind::Anderson3D;
  if (text == "avalanche" || text == "Avalanche") return ModelKind::Avalanche;
  detail::throw_invalid("unknown model kind '" + std::string(text) + "'");
}

Boundary parse_boundary(std::string_view text) {
  if (text == "open" || text == "Open") return Boundary::Open;
  if (text == "periodic" || text == "Periodic") return Boundary::Periodic;
  detail::throw_invalid("unknown boundary '" + std::string(text) + "'");
}

ModelConfig ModelConfig::aubry_andre(int L, double lambda, double J) {
  ModelConfig c;
  c.kind = ModelKind::AubryAndre;
  c.L = L;
  c.lambda = lambda;
  c.J = J;
  c.boundary = Boundary::Open;
  return c;
}

ModelConfig ModelConfig::anderson3d(int L, double W, double J) {
  ModelConfig c;
  c.kind = ModelKind::Anderson3D;
  c.L = L;
  c.W = W;
  c.J = J;
  c.boundary = Boundary::Periodic;
  return c;
}

ModelConfig ModelConfig::avalanche(int N, int L, double alpha, double g0,
                                   double beta_goe) {
  ModelConfig c;
  c.kind = ModelKind::Avalanche;
  c.N = N;
  c.L = L;
  c.alpha = alpha;
  c.g0 = g0;
  c.beta_goe = beta_goe;
  return c;
}

std::size_t hilbert_dimension(const ModelConfig& config) {
  detail::require(config.L >= 1, "L must be positive");
  switch (config.kind) {
    case ModelKind::AubryAndre:
      return static_cast<std::size_t>(config.L);
    case ModelKind::Anderson3D: {
      const auto l = static_cast<std::size_t>(config.L);
      detail::require(l <= 2000, "Anderson3D: L^3 overflows the dense dimension");
      return l * l * l;
    }
    case ModelKind::Avalanche: {
      detail::require(config.N >= 1, "avalanche: N must be positive");
      const int spins = config.N + config.L;
      detail::require(spins <= kMaxSpins,
                      "avalanche: 2^(N+L) overflows the dense dimension (N+L=" +
                          std::to_string(spins) + ")");
      return std::size_t{1} << spins;
    }
  }
  detail::throw_invalid("unknown model kind");
}

void validate(const ModelConfig& c) {
  (void)hilbert_dimension(c);
  detail::require(std::isfinite(c.J), "J must be finite");
  switch (c.kind) {
    case ModelKind::AubryAndre:
      detail::require(c.L >= 2, "AubryAndre: L must be >= 2");
      detail::require(std::isfinite(c.lambda) && c.lambda >= 0.0,
                      "AubryAndre: lambda must be finite and >= 0");
      break;
    case ModelKind::Anderson3D:
      detail::require(c.L >= 2, "Anderson3D: L must be >= 2");
      detail::require(std::isfinite(c.W) && c.W >= 0.0,
                      "Anderson3D: W must be finite and >= 0");
      break;
    case ModelKind::Avalanche:
      detail::require(c.alpha > 0.0 && c.alpha <= 1.0,
                      "avalanche: alpha must lie in (0, 1]");
      detail::require(std::isfinite(c.g0), "avalanche: g0 must be finite");
      detail::require(std::isfinite(c.beta_goe), "avalanche: beta_goe must be finite");
      break;
  }
}

Realization sample_realization(const ModelConfig& config, std::uint64_t seed) {
  validate(config);
  Realization r;
  r.seed = seed;
  switch (config.kind) {
    case ModelKind::AubryAndre: {
      CounterRng rng(seed, kStreamPhase);
      r.phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      break;
    }
    case ModelKind::Anderson3D: {
      CounterRng rng(seed, kStreamOnsite);
      const std::size_t d = hilbert_dimension(config);
      r.eps.resize(d);
      const double half = 0.5 * config.W;
      for (auto& e : r.eps) e = half > 0.0 ? rng.uniform(-half, half) : 0.0;
      break;
    }
    case ModelKind::Avalanche: {
      const auto l = static_cast<std::size_t>(config.L);
      CounterRng field_rng(seed, kStreamFields);
      CounterRng exponent_rng(seed, kStreamExponents);
      CounterRng partner_rng(seed, kStreamPartners);
      r.fields.resize(l);
      r.exponents.resize(l);
      r.dot_partner.resize(l);
      for (std::size_t i = 0; i < l; ++i) {
        r.fields[i] = field_rng.uniform(0.5, 1.5);
        const double center = static_cast<double>(i);
        r.exponents[i] = i == 0 ? 0.0 : exponent_rng.uniform(center - 0.2, center + 0.2);
        r.dot_partner[i] = static_cast<int>(
            partner_rng.below(static_cast<std::uint64_t>(config.N)));
      }
      r.dot_matrix = sample_goe(std::size_t{1} << config.N, config.beta_goe,
                                splitmix64_mix(seed ^ kStreamGoe));
      break;
    }
  }
  return r;
}

DenseSymmetricMatrix build_aubry_andre(const ModelConfig& config, double phi) {
  detail::require(config.kind == ModelKind::AubryAndre,
                  "build_aubry_andre: config is not AubryAndre");
  detail::require(config.L >= 2, "AubryAndre: L must be >= 2");
  detail::require(std::isfinite(config.lambda), "AubryAndre: lambda must be finite");
  detail::require(std::isfinite(phi), "AubryAndre: phi must be finite");
  const auto l = static_cast<std::size_t>(config.L);
  DenseSymmetricMatrix h(l);
  for (std::size_t i = 0; i < l; ++i) {
    const double site = static_cast<double>(i + 1);
    h.set_diagonal(i, config.lambda *
                          std::cos(2.0 * std::numbers::pi * kGoldenWaveNumber * site + phi));
  }
  for (std::size_t i = 0; i + 1 < l; ++i) h.set_pair(i, i + 1, -config.J);
  if (config.boundary == Boundary::Periodic && l > 2) h.set_pair(0, l - 1, -config.J);
  return h;
}

DenseSymmetricMatrix build_anderson3d(const ModelConfig& config,
                                      std::span<const double> eps) {
  detail::require(config.kind == ModelKind::Anderson3D,
                  "build_anderson3d: config is not Anderson3D");
  detail::require(config.L >= 2, "Anderson3D: L must be >= 2");
  const auto l = static_cast<std::size_t>(config.L);
  const std::size_t d = l * l * l;
  detail::require(eps.size() == d, "Anderson3D: eps has length " +
                                       std::to_string(eps.size()) + ", expected " +
                                       std::to_string(d));
  const double half = 0.5 * config.W;
  DenseSymmetricMatrix h(d);
  for (std::size_t i = 0; i < d; ++i) {
    detail::require(std::isfinite(eps[i]) && std::abs(eps[i]) <= half,
                    "Anderson3D: eps[" + std::to_string(i) + "] outside [-W/2, W/2]");
    h.set_diagonal(i, eps[i]);
  }
  const bool periodic = config.boundary == Boundary::Periodic;
  auto index = [l](std::size_t x, std::size_t y, std::size_t z) {
    return (x * l + y) * l + z;
  };
  for (std::size_t x = 0; x < l; ++x) {
    for (std::size_t y = 0; y < l; ++y) {
      for (std::size_t z = 0; z < l; ++z) {
        const std::size_t site = index(x, y, z);
        const std::size_t xs = x + 1, ys = y + 1, zs = z + 1;
        if (xs < l || periodic) h.set_pair(site, index(xs % l, y, z), -config.J);
        if (ys < l || periodic) h.set_pair(site, index(x, ys % l, z), -config.J);
        if (zs < l || periodic) h.set_pair(site, index(x, y, zs % l), -config.J);
      }
    }
  }
  return h;
}

DenseSymmetricMatrix build_avalanche(const ModelConfig& config,
                                     const Realization& real) {
  detail::require(config.kind == ModelKind::Avalanche,
                  "build_avalanche: config is not Avalanche");
  detail::require(config.alpha > 0.0, "avalanche: alpha must be > 0");
  const std::size_t d = hilbert_dimension(config);
  const auto n_out = static_cast<std::size_t>(config.L);
  const std::size_t dot_dim = std::size_t{1} << config.N;
  const std::size_t out_dim = std::size_t{1} << config.L;
  detail::require(real.fields.size() == n_out && real.exponents.size() == n_out &&
                      real.dot_partner.size() == n_out,
                  "avalanche: realization does not match L");
  detail::require(real.dot_matrix.dim() == dot_dim,
                  "avalanche: dot matrix does not match N");

  DenseSymmetricMatrix h(d);
  const DenseSymmetricMatrix& dot = real.dot_matrix;

  // R (x) I
  for (std::size_t a = 0; a < dot_dim; ++a) {
    for (std::size_t b = a; b < dot_dim; ++b) {
      const double value = dot(a, b);
      if (value == 0.0) continue;
      for (std::size_t o = 0; o < out_dim; ++o) {
        h.set_pair(a * out_dim + o, b * out_dim + o, value);
      }
    }
  }

  // sum_i h_i S^z_i
  for (std::size_t state = 0; state < d; ++state) {
    const std::size_t out = state % out_dim;
    double field = 0.0;
    for (std::size_t i = 0; i < n_out; ++i) {
      const bool down = (out >> (n_out - 1 - i)) & 1U;
      field += down ? -0.5 * real.fields[i] : 0.5 * real.fields[i];
    }
    h.add_diagonal(state, field);
  }

  // g0 alpha^u_i S^x_{n_i} S^x_i: flips one dot bit and one outside bit, 1/4.
  for (std::size_t i = 0; i < n_out; ++i) {
    const int partner = real.dot_partner[i];
    detail::require(partner >= 0 && partner < config.N,
                    "avalanche: dot partner out of range");
    const double coupling =
        0.25 * config.g0 * std::pow(config.alpha, real.exponents[i]);
    const std::size_t flip_out = std::size_t{1} << (n_out - 1 - i);
    const std::size_t flip_dot =
        (std::size_t{1} << (config.N - 1 - partner)) * out_dim;
    const std::size_t flip = flip_out | flip_dot;
    for (std::size_t state = 0; state < d; ++state) {
      const std::size_t target = state ^ flip;
      if (target > state) h.add_pair(state, target, coupling);
    }
  }
  return h;
}

DenseSymmetricMatrix sample_goe(std::size_t n, double beta_goe, std::uint64_t seed) {
  detail::require(n >= 1, "sample_goe: n must be >= 1");
  CounterRng rng(seed, kStreamGoe);
  std::vector<double> a(n * n);
  for (auto& x : a) x = rng.normal();
  DenseSymmetricMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      r.set_pair(i, j, beta_goe * (a[i * n + j] + a[j * n + i]) / 2.0);
    }
  }
  return r;
}

DenseSymmetricMatrix build_hamiltonian(const ModelConfig& config,
                                       const Realization& realization) {
  switch (config.kind) {
    case ModelKind::AubryAndre: return build_aubry_andre(config, realization.phi);
    case ModelKind::Anderson3D: return build_anderson3d(config, realization.eps);
    case ModelKind::Avalanche: return build_avalanche(config, realization);
  }
  detail::throw_invalid("unknown model kind");
}

double analytic_trace(const ModelConfig& config, const Realization& real) {
  switch (config.kind) {
    case ModelKind::AubryAndre: {
      double sum = 0.0;
      for (int i = 1; i <= config.L; ++i) {
        sum += config.lambda * std::cos(2.0 * std::numbers::pi * kGoldenWaveNumber *
                                            static_cast<double>(i) +
                                        real.phi);
      }
      return sum;
    }
    case ModelKind::Anderson3D: {
      double sum = 0.0;
      for (double e : real.eps) sum += e;
      return sum;
    }
    case ModelKind::Avalanche:
      return real.dot_matrix.trace() * static_cast<double>(std::size_t{1} << config.L);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace scaleinv
