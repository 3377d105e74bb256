#include "core/serialization.hpp"

#include "core/error.hpp"

#include <string>

namespace cvtele {

namespace {

using nlohmann::json;

json vec2(const Eigen::Vector2d& v) { return json::array({v(0), v(1)}); }

json mat2(const Eigen::Matrix2d& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::parse_error, "invalid JSON document: " + what);
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where + " must be a number");
  return v.get<double>();
}

Matrix matrix_at(const json& v, Eigen::Index dim, const std::string& where) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim) {
    parse_fail(where + " must be an array of " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      parse_fail(where + " row " + std::to_string(r) + " must have " + std::to_string(dim) +
                 " entries");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = number_at(row[static_cast<std::size_t>(c)], where);
    }
  }
  return m;
}

}  // namespace

json to_json(const GaussianState& state) {
  json mean = json::array();
  for (Eigen::Index i = 0; i < state.mean().size(); ++i) mean.push_back(state.mean()(i));
  json cov = json::array();
  for (Eigen::Index r = 0; r < state.cov().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < state.cov().cols(); ++c) row.push_back(state.cov()(r, c));
    cov.push_back(std::move(row));
  }
  return {{"n_modes", state.n_modes()}, {"mean", std::move(mean)}, {"cov", std::move(cov)}};
}

json to_json(const EprMoments& e) {
  return {{"mean_Q", e.mean_Q}, {"mean_P", e.mean_P}, {"var_QQ", e.var_QQ},
          {"var_PP", e.var_PP}, {"cov_QP", e.cov_QP}, {"delta_mean", e.delta_mean}};
}

json to_json(const FockMatrix& fock) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < fock.entries.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < fock.entries.cols(); ++c) {
      rr.push_back(fock.entries(r, c).real());
      ri.push_back(fock.entries(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"cutoff", fock.cutoff}, {"re", std::move(re)}, {"im", std::move(im)},
          {"deficit", fock.truncation_deficit}};
}

json to_json(const ChannelReport& report) {
  return {{"output", to_json(report.output)},
          {"added_noise", report.added_noise},
          {"fidelity_coherent", report.fidelity_coherent},
          {"inseparable", report.inseparable}};
}

json to_json(const EnsembleEstimate& est) {
  return {{"n_samples", est.n_samples},
          {"seed", est.seed},
          {"rng", est.rng_algorithm},
          {"mean_hat", vec2(est.mean_hat)},
          {"cov_hat", mat2(est.cov_hat)},
          {"mean_se", vec2(est.mean_se)},
          {"cov_se", mat2(est.cov_se)},
          {"outcome_mean", vec2(est.outcome_moments.mean)},
          {"outcome_cov", mat2(est.outcome_moments.cov)},
          {"outcome_mean_se", vec2(est.outcome_moments.mean_se)},
          {"outcome_cov_se", mat2(est.outcome_moments.cov_se)}};
}

json to_json(const Comparison& c) {
  return {{"z_mean", vec2(c.z_mean)},
          {"z_cov", mat2(c.z_cov)},
          {"max_abs_z", c.max_abs_z},
          {"threshold", c.threshold},
          {"pass", c.pass}};
}

GaussianState state_from_json(const json& doc) {
  if (!doc.is_object()) parse_fail("state must be an object");
  for (const char* key : {"n_modes", "mean", "cov"}) {
    if (!doc.contains(key)) parse_fail(std::string("missing key \"") + key + "\"");
  }
  if (!doc["n_modes"].is_number_integer() || doc["n_modes"].get<long long>() < 1) {
    parse_fail("n_modes must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc["n_modes"].get<long long>());
  const json& mean_doc = doc["mean"];
  if (!mean_doc.is_array() || static_cast<Eigen::Index>(mean_doc.size()) != 2 * n) {
    parse_fail("mean must be an array of length 2*n_modes");
  }
  Vector mean(2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    mean(i) = number_at(mean_doc[static_cast<std::size_t>(i)], "mean");
  }
  Matrix cov = matrix_at(doc["cov"], 2 * n, "cov");
  return GaussianState::from_moments(std::move(mean), std::move(cov));
}

GaussianState state_from_json_text(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) parse_fail("not valid JSON");
  return state_from_json(doc);
}

FockMatrix fock_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("cutoff") || !doc.contains("re") || !doc.contains("im") ||
      !doc.contains("deficit")) {
    parse_fail("Fock matrix needs cutoff, re, im and deficit");
  }
  if (!doc["cutoff"].is_number_integer() || doc["cutoff"].get<long long>() < 1) {
    parse_fail("cutoff must be a positive integer");
  }
  FockMatrix f;
  f.cutoff = doc["cutoff"].get<int>();
  const Matrix re = matrix_at(doc["re"], f.cutoff + 1, "re");
  const Matrix im = matrix_at(doc["im"], f.cutoff + 1, "im");
  f.entries.resize(f.cutoff + 1, f.cutoff + 1);
  f.entries.real() = re;
  f.entries.imag() = im;
  f.truncation_deficit = number_at(doc["deficit"], "deficit");
  return f;
}

}  // namespace cvtele
