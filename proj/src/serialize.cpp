#include "asymcorr/serialize.hpp"

#include <regex>

#include "asymcorr/errors.hpp"

namespace asymcorr {

Json to_json(const Rational& x) { return to_string(x); }

Json to_json(const Real& x, int digits) { return x.to_string(digits); }

Json to_json(const Complex& z, int digits) { return Json::array({z.re().to_string(digits), z.im().to_string(digits)}); }

Json to_json(const ComplexRational& z) { return Json::array({to_string(z.re), to_string(z.im)}); }

Json to_json(const LambdaPoly& p) {
  Json out = Json::array();
  for (const auto& [e, c] : p.terms()) out.push_back(Json::array({e, to_string(c)}));
  return out;
}

Json to_json(const BasisEntry& e) { return {{"sector", e.sector}, {"h_power", e.h_power}}; }

Json to_json(const QSeries& s) {
  Json coeffs = Json::array();
  for (const auto& [key, c] : s.coeffs) {
    for (const auto& [sector, hp] : c.value.parts()) {
      Json h = Json::array();
      for (int p = 0; p < hp.nil(); ++p) h.push_back(to_json(hp[p]));
      coeffs.push_back({{"k0", key.k0}, {"kbar", key.kbar}, {"sector", sector}, {"h", h}});
    }
  }
  return {{"variable", to_string(s.variable)},
          {"space", to_string(s.space)},
          {"prefactor", {{"lambda", to_string(s.prefactor.lambda_coeff)}, {"H", to_string(s.prefactor.h_coeff)}}},
          {"offset", to_string(s.offset)},
          {"step", to_string(s.step)},
          {"truncation", {{"max_k0", s.trunc.max_k0}, {"max_kbar", s.trunc.max_kbar}}},
          {"coefficients", coeffs}};
}

Json to_json(const ThetaOperator& op) {
  Json terms = Json::array();
  for (const auto& [power, p] : op.terms()) {
    Json c = Json::array();
    for (int i = 0; i <= p.degree(); ++i) c.push_back(to_json(p.coefficient(i)));
    terms.push_back({{"power", to_string(power)}, {"theta_coefficients", c}});
  }
  return {{"variable", to_string(op.variable())}, {"order", op.order()}, {"display", op.to_string()}, {"terms", terms}};
}

Json to_json(const ConnectionMatrix& cm, int digits) {
  Json blocks = Json::array();
  for (const ConnectionBlock& b : cm.blocks) {
    Json rows = Json::array(), cols = Json::array(), entries = Json::array(), res = Json::array();
    for (const auto& e : b.rows) rows.push_back(to_json(e));
    for (const auto& e : b.cols) cols.push_back(to_json(e));
    for (std::size_t i = 0; i < b.entries.rows; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < b.entries.cols; ++j) row.push_back(to_json(b.entries(i, j), digits));
      entries.push_back(row);
    }
    for (const auto& r : b.residuals)
      res.push_back({{"u", {{"modulus", to_string(r.u.modulus)}, {"arg", to_string(r.u.arg)}}},
                     {"residual", to_json(r.residual, 6)}});
    blocks.push_back({{"coset", b.coset},
                      {"rows", rows},
                      {"cols", cols},
                      {"entries_re_im", entries},
                      {"condition", to_json(b.condition, 6)},
                      {"base_point_change", to_json(b.base_point_change, 6)},
                      {"residuals", res}});
  }
  auto upoint = [](const UPoint& u) { return Json{{"modulus", to_string(u.modulus)}, {"arg", to_string(u.arg)}}; };
  return {{"direction", to_string(cm.direction)},
          {"lambda", to_json(cm.lambda)},
          {"ray_angle", to_string(cm.ray_angle)},
          {"branch", cm.branch},
          {"base_point", upoint(cm.base_point)},
          {"second_base_point", upoint(cm.second_base_point)},
          {"max_residual", to_json(cm.max_residual(), 6)},
          {"max_base_point_change", to_json(cm.max_base_point_change(), 6)},
          {"watson_passed", cm.watson.passed()},
          {"blocks", blocks}};
}

Json to_json(const ZLaurent& z) {
  Json out = Json::array();
  for (const auto& [e, c] : z.terms()) out.push_back({{"z", to_string(e)}, {"coeff", to_json(c)}});
  return out;
}

Json to_json(const BirkhoffBlock& b) {
  Json block = Json::array();
  for (const auto& e : b.block) block.push_back(to_json(e));
  Json out = {{"gbar", b.gbar}, {"block", block}};
  if (b.not_big) {
    out["not_big"] = *b.not_big;
    return out;
  }
  Json ops = Json::array();
  for (const auto& op : b.operators) ops.push_back(op.to_string());
  out["operators"] = ops;
  out["step"] = to_string(b.factors.j.step);
  out["max_index"] = b.factors.j.max_index;
  Json j = Json::array();
  for (const auto& [k, m] : b.factors.j.terms) {
    if (k == 0) continue;
    Json entries = Json::array();
    for (std::size_t r = 0; r < m.dim; ++r)
      for (std::size_t c = 0; c < m.dim; ++c)
        if (!m(r, c).is_zero()) entries.push_back({{"row", r}, {"col", c}, {"value", to_json(m(r, c))}});
    j.push_back({{"index", k}, {"entries", entries}});
  }
  out["J"] = j;
  if (b.mirror) {
    Json tau = Json::array();
    for (const auto& [k, v] : b.mirror->tau) {
      Json comps = Json::array();
      for (const auto& c : v) comps.push_back(to_json(c));
      tau.push_back({{"index", k}, {"components", comps}});
    }
    out["mirror_map"] = {{"log_part", {{"lambda", to_string(b.mirror->log_part.lambda_coeff)},
                                        {"H", to_string(b.mirror->log_part.h_coeff)}}},
                         {"series", tau}};
  }
  out["recomposes"] = b.recomposes;
  out["pde_verified_to"] = b.pde.verified_to;
  out["pde_passed"] = b.pde.passed();
  return out;
}

Rational parse_exact(const std::string& text) {
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  if (text.find('/') != std::string::npos) return parse_rational(text);
  std::smatch m;
  if (!std::regex_match(text, m, decimal) || (m[2].length() == 0 && m[3].length() == 0))
    fail(ErrorCode::InvalidInput, "not an exact number: '" + text + "'");
  std::string digits = m[2].str() + m[3].str();
  long scale = -static_cast<long>(m[3].length());
  if (m[4].matched) scale += std::stol(m[4].str());
  Rational x(mpz_class(digits.empty() ? "0" : digits, 10));
  if (scale > 0) x *= rational_pow(10, scale);
  if (scale < 0) x /= rational_pow(10, -scale);
  if (m[1] == "-") x = -x;
  return x;
}

}  // namespace asymcorr
