#pragma once

// Built-in models:
//   single_band    next-nearest-neighbour nonreciprocal chain, onsite +-V step
//                  drive on the two end sites
//   two_band       two coupled Hatano-Nelson chains with opposite
//                  nonreciprocity, +-V interchain step drive on the end cells
//   bulk_four_step four equal quarter-period bulk steps (t1, gamma1, t2, gamma2)

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/laurent.hpp"
#include "floquet/lattice.hpp"

namespace floquet {

using ParamMap = std::map<std::string, double>;

inline const std::map<std::string, std::vector<std::string>>& model_required_params() {
  static const std::map<std::string, std::vector<std::string>> req{
      {"single_band", {"t1", "t2", "gamma", "V", "T", "L"}},
      {"two_band", {"t", "gamma", "mu", "delta", "V", "T", "L"}},
      {"bulk_four_step", {"t1", "t2", "gamma1", "gamma2", "T", "L"}},
  };
  return req;
}

// Names of required parameters absent from `params` (unknown model: the model name).
inline std::vector<std::string> missing_params(const std::string& model, const ParamMap& params) {
  const auto& req = model_required_params();
  const auto it = req.find(model);
  if (it == req.end()) return {model};
  std::vector<std::string> out;
  for (const auto& k : it->second)
    if (!params.count(k)) out.push_back(k);
  return out;
}

namespace detail {

inline double param(const ParamMap& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw ConfigError("missing parameter '" + key + "'");
  return it->second;
}

inline Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace detail

// h(beta) = (t2 + gamma) beta^2 + (t2 - gamma) beta^-2 + t1 (beta + beta^-1)
inline LaurentMatrixPoly single_band_bloch(double t1, double t2, double gamma) {
  return LaurentMatrixPoly::scalar({{2, t2 + gamma}, {-2, t2 - gamma}, {1, t1}, {-1, t1}});
}

// [[(t+g) b + (t-g)/b + mu, delta], [delta, (t-g) b + (t+g)/b - mu]]
inline LaurentMatrixPoly two_band_bloch(double t, double gamma, double mu, double delta) {
  return LaurentMatrixPoly(2, {{1, detail::mat2(t + gamma, 0, 0, t - gamma)},
                               {-1, detail::mat2(t - gamma, 0, 0, t + gamma)},
                               {0, detail::mat2(mu, delta, delta, -mu)}});
}

// The four instantaneous h(beta, t) of the bulk-driven model, in time order.
inline std::vector<LaurentMatrixPoly> four_step_bloch(double t1, double t2, double g1, double g2) {
  return {LaurentMatrixPoly::scalar({{1, t1}, {-1, t1}}), LaurentMatrixPoly::scalar({{1, g1}, {-1, -g1}}),
          LaurentMatrixPoly::scalar({{2, t2}, {-2, t2}}), LaurentMatrixPoly::scalar({{2, g2}, {-2, -g2}})};
}

inline DriveProtocol build_model(const std::string& name, const ParamMap& params,
                                 Boundary bc = Boundary::open) {
  const auto missing = missing_params(name, params);
  if (!missing.empty()) {
    if (!model_required_params().count(name)) throw ConfigError("unknown model '" + name + "'");
    throw ConfigError("model '" + name + "': missing parameter '" + missing.front() + "'");
  }
  using detail::param;
  DriveProtocol p;
  p.model = name;
  p.params = params;
  p.bc = bc;
  p.T = param(params, "T");
  const double Lraw = param(params, "L");
  if (!(p.T > 0.0)) throw ConfigError("T must be positive");
  if (Lraw < 1.0 || std::floor(Lraw) != Lraw) throw ConfigError("L must be a positive integer");
  p.L = static_cast<int>(Lraw);

  if (name == "single_band") {
    p.q = 1;
    const auto h = single_band_bloch(param(params, "t1"), param(params, "t2"), param(params, "gamma"));
    const double V = param(params, "V");
    auto ends = [](double v) { return std::vector<EdgeTerm>{{0, 0, 0, 0, v}, {-1, 0, -1, 0, v}}; };
    p.segments = {{0.5, h, ends(+V)}, {0.5, h, ends(-V)}};
  } else if (name == "two_band") {
    p.q = 2;
    const auto h = two_band_bloch(param(params, "t"), param(params, "gamma"), param(params, "mu"),
                                  param(params, "delta"));
    const double V = param(params, "V");
    auto ends = [](double v) {
      return std::vector<EdgeTerm>{{0, 0, 0, 1, v}, {0, 1, 0, 0, v}, {-1, 0, -1, 1, v}, {-1, 1, -1, 0, v}};
    };
    p.segments = {{0.5, h, ends(+V)}, {0.5, h, ends(-V)}};
  } else {
    p.q = 1;
    const auto hs = four_step_bloch(param(params, "t1"), param(params, "t2"), param(params, "gamma1"),
                                    param(params, "gamma2"));
    for (const auto& h : hs) p.segments.push_back({0.25, h, {}});
  }
  return p;
}

// h_F(beta) of a named model straight from its parameters (L and T not needed).
inline LaurentMatrixPoly model_floquet_bloch(const std::string& name, const ParamMap& params) {
  ParamMap p = params;
  p.try_emplace("T", 1.0);
  p.try_emplace("L", 1.0);
  p.try_emplace("V", 0.0);
  return build_model(name, p).floquet_bloch();
}

}  // namespace floquet
