#include "report.h"

#include <algorithm>
#include <sstream>

namespace osr::cli {

Json ToJson(Complex z) { return Json::array({z.real(), z.imag()}); }

Json ToJson(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(ToJson(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json ToJson(const MatrixTuple& x) {
  Json out = Json::array();
  for (const auto& m : x) out.push_back(ToJson(m));
  return out;
}

Json ToJson(const MaximalSpectrum& s) {
  Json elements = Json::array();
  for (const auto& e : s.elements) {
    elements.push_back({{"value", ToJson(e.value)},
                        {"degeneracy", e.degeneracy},
                        {"multiplicity", e.multiplicity}});
  }
  return {{"radius", s.radius},
          {"degeneracy", s.degeneracy},
          {"nondegenerate", s.nondegenerate},
          {"nilpotent", s.nilpotent},
          {"m_t", s.m_t},
          {"elements", std::move(elements)},
          {"distance_to_nonnegative_axis", s.distance_to_nonnegative_axis},
          {"has_nonnegative_real", s.has_nonnegative_real}};
}

Json ToJson(const JsrBracket& b) {
  return {{"method", std::string(ToString(b.method))},
          {"k", b.k},
          {"lower", b.lower},
          {"upper", b.upper},
          {"heuristic", b.heuristic}};
}

Json ToJson(const LyapunovCertificate& c) {
  return {{"l", ToJson(c.l)},
          {"residual", c.residual},
          {"s", ToJson(c.s)},
          {"row_norm", c.row_norm},
          {"resolvent_rcond", c.resolvent_rcond},
          {"min_eig_l", c.min_eig_l},
          {"scale", c.scale}};
}

Json ToJson(const DynamicsReport& r) {
  Json kraus = Json::array();
  for (const auto& b : r.b_family.ops) kraus.push_back(ToJson(b));
  Json out = {
      {"classification", std::string(ToString(r.classification))},
      {"scale", r.scale},
      {"maximal_spectrum", ToJson(r.spectrum)},
      {"t_hat", ToJson(r.t_hat.mat())},
      {"t_hat_rank", r.t_hat_rank},
      {"t_hat_idempotent", r.t_hat_idempotent},
      {"t_hat_square_zero", r.t_hat_square_zero},
      {"idempotent_residual", r.idempotent_residual},
      {"square_zero_residual", r.square_zero_residual},
      {"cesaro",
       {{"terms", r.cesaro_terms},
        {"achieved_diff", r.cesaro_diff},
        {"converged", r.cesaro_converged}}},
      {"crosscheck",
       {{"performed", r.crosscheck_performed}, {"diff", r.crosscheck_diff}}},
      {"kraus_weights", r.b_family.weights},
      {"b_family", std::move(kraus)},
      {"ideal_verified", r.ideal_verified},
      {"algebra_dim", r.algebra_dim},
      {"unital", r.unital},
      {"trace_preserving", r.trace_preserving},
  };
  if (r.lambda_finite) {
    const LambdaFamily& f = *r.lambda_finite;
    out["lambda"] = {{"finite", true},
                     {"order", f.q},
                     {"kraus_counts", f.kraus_counts},
                     {"shift_residual", f.shift_residual},
                     {"shift_verified", f.shift_verified},
                     {"span_residual", f.span_residual},
                     {"kraus_in_span", f.kraus_in_span}};
  } else {
    out["lambda"] = {{"finite", false}};
  }
  if (r.fixed_state) out["fixed_state"] = ToJson(*r.fixed_state);
  if (r.dual_fixed_point) out["dual_fixed_point"] = ToJson(*r.dual_fixed_point);
  return out;
}

namespace {

Json DirectionJson(const PfDirection& d, const char* residual_key) {
  if (!d.tuple) return {{"ok", false}, {"failure", d.failure}};
  return {{"ok", true}, {residual_key, d.residual}, {"tuple", ToJson(*d.tuple)}};
}

void Render(const Json& node, const std::string& prefix, std::ostream& os) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      const std::string path = prefix.empty() ? key : prefix + "." + key;
      Render(value, path, os);
    }
    return;
  }
  const bool scalar_array =
      node.is_array() && std::all_of(node.begin(), node.end(), [](const Json& e) {
        return e.is_primitive();
      });
  if (node.is_array() && !scalar_array && node.dump().size() > 100) {
    for (size_t i = 0; i < node.size(); ++i) {
      Render(node[i], prefix + "[" + std::to_string(i) + "]", os);
    }
    return;
  }
  os << prefix << ": " << (node.is_string() ? node.get<std::string>()
                                            : node.dump())
     << "\n";
}

}  // namespace

Json ToJson(const PfConjugation& p) {
  return {{"scale", p.scale},
          {"v", ToJson(p.v)},
          {"w", ToJson(p.w)},
          {"co_isometry", DirectionJson(p.co_isometry, "row_residual")},
          {"isometry", DirectionJson(p.isometry, "col_residual")}};
}

std::string RenderHuman(const Json& report) {
  std::ostringstream os;
  Render(report, "", os);
  return os.str();
}

}  // namespace osr::cli
