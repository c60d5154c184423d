#include "palab/serialize.hpp"

#include "palab/error.hpp"

namespace palab {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.values.rows(); ++i)
    for (Eigen::Index k = 0; k < m.values.cols(); ++k)
      data.push_back({m.values(i, k).real(), m.values(i, k).imag()});
  return {{"rows", m.values.rows()}, {"cols", m.values.cols()}, {"dims", m.dims}, {"data", data}};
}

ComplexMatrix matrix_from_json(const json& j) {
  const auto rows = field<std::size_t>(j, "rows");
  const auto cols = field<std::size_t>(j, "cols");
  const auto data = field<std::vector<std::array<double, 2>>>(j, "data");
  if (data.size() != rows * cols) throw DimensionError("matrix data has the wrong length");
  ComplexMatrix m;
  m.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& e = data[i * cols + k];
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cplx{e[0], e[1]};
    }
  if (j.contains("dims")) m.dims = field<Dims>(j, "dims");
  m.validate();
  return m;
}

json to_json(const MultipartiteState& s) {
  json j = s.is_pure() ? to_json(ComplexMatrix{s.amplitudes(), s.dims()})
                       : to_json(ComplexMatrix{s.density(), s.dims()});
  j["kind"] = s.is_pure() ? "pure" : "mixed";
  json parts = json::array();
  for (const auto& p : s.subsystems()) parts.push_back({std::string(to_string(p.role)), p.dim});
  j["subsystems"] = parts;
  return j;
}

MultipartiteState state_from_json(const json& j) {
  const auto m = matrix_from_json(j);
  std::vector<Subsystem> parts;
  for (const auto& p : field<json>(j, "subsystems")) {
    if (!p.is_array() || p.size() != 2) throw ValidationError("subsystem entries are [role, dim]");
    parts.push_back({role_from_string(p[0].get<std::string>()), p[1].get<std::size_t>()});
  }
  const auto kind = j.value("kind", m.values.cols() == 1 ? "pure" : "mixed");
  if (kind == "pure") {
    if (m.values.cols() != 1) throw DimensionError("pure state must be a single column");
    return MultipartiteState::pure(m.values.col(0), std::move(parts), 1e-9);
  }
  if (kind != "mixed") throw ValidationError("state kind must be 'pure' or 'mixed'");
  return MultipartiteState::mixed(m.values, std::move(parts), 1e-9);
}

json to_json(const BinaryMatrix& b) { return b.to_strings(); }

BinaryMatrix binary_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("binary matrix must be a list of bitstrings");
  return BinaryMatrix::from_strings(j.get<std::vector<std::string>>());
}

json to_json(const PrivacyDiagnostics& d) {
  json j{{"condition_a_deviation", d.condition_a_deviation}};
  if (d.condition_b_deviation) j["condition_b_deviation"] = *d.condition_b_deviation;
  if (d.condition_bprime_deviation) j["condition_bprime_deviation"] = *d.condition_bprime_deviation;
  if (d.eve_marginal_verdict) j["eve_marginal_verdict"] = *d.eve_marginal_verdict;
  if (d.orthogonality_verdict) j["orthogonality_verdict"] = *d.orthogonality_verdict;
  return j;
}

json to_json(const SuccessReport& r) {
  return {{"double_sum", r.double_sum},
          {"x_agreement", r.x_agreement},
          {"fidelity_sq", r.fidelity_sq},
          {"trace_distance", r.trace_distance}};
}

json to_json(const EquivalenceReport& r) {
  return {{"key_deviation", r.key_deviation},
          {"eve_deviation", r.eve_deviation},
          {"max_deviation", r.max_deviation},
          {"passed", r.passed}};
}

std::string bitstring(std::uint64_t bits, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if ((bits >> (width - 1 - i)) & 1U) s[i] = '1';
  return s;
}

json to_json(const DistillationOutcome& o, bool with_state) {
  json j{{"n", o.n},
         {"m", o.m},
         {"success_probability", o.success_probability},
         {"fidelity_sq", o.fidelity_sq},
         {"trace_distance", o.trace_distance},
         {"privacy_epsilon", o.privacy_epsilon},
         {"hash", to_json(o.hash)},
         {"announced_bits", bitstring(o.announced, o.m)},
         {"rate_used", o.rate_used}};
  if (with_state) j["post_state"] = to_json(o.post_state);
  return j;
}

}  // namespace palab
