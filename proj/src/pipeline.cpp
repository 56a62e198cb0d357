#include "asymcorr/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "asymcorr/errors.hpp"
#include "asymcorr/serialize.hpp"

namespace asymcorr {

std::string to_string(Stage s) {
  switch (s) {
    case Stage::series: return "series";
    case Stage::pf: return "pf";
    case Stage::borel: return "borel";
    case Stage::connect: return "connect";
    case Stage::lg: return "lg";
    case Stage::birkhoff: return "birkhoff";
    case Stage::all: return "all";
  }
  return "all";
}

Stage parse_stage(const std::string& s) {
  for (Stage st : {Stage::series, Stage::pf, Stage::borel, Stage::connect, Stage::lg, Stage::birkhoff, Stage::all})
    if (to_string(st) == s) return st;
  fail(ErrorCode::ConfigError, "unknown stage '" + s + "'");
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::ConfigError, what); }

Rational exact_field(const Json& v, const std::string& key) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_exact(v.get<std::string>());
  } catch (const Error&) {
  }
  config_error("'" + key + "' must be an integer or a string \"a/b\" or decimal");
}

std::vector<Rational> exact_list(const Json& v, const std::string& key) {
  if (!v.is_array()) config_error("'" + key + "' must be a list");
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(exact_field(x, key));
  return out;
}

long int_field(const Json& v, const std::string& key, long lo) {
  if (!v.is_number_integer() || v.get<long>() < lo)
    config_error("'" + key + "' must be an integer >= " + std::to_string(lo));
  return v.get<long>();
}

double real_field(const Json& v, const std::string& key) {
  if (!v.is_number()) config_error("'" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be an object");
  static const std::set<std::string> known{"name",
                                           "fermat",
                                           "group_generators",
                                           "allow_crepant",
                                           "stage",
                                           "direction",
                                           "truncation",
                                           "digits",
                                           "tolerances",
                                           "lambda",
                                           "u_arg",
                                           "ray_angle",
                                           "base_point",
                                           "second_base_point",
                                           "held_out",
                                           "connection_watson",
                                           "borel_watson",
                                           "residual_digits",
                                           "output_dir"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) config_error("unknown key '" + k + "'");
  RunConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string()) config_error("'name' must be a string");
    c.name = j["name"].get<std::string>();
  }
  if (!j.contains("fermat") || !j["fermat"].is_object()) config_error("'fermat' {d, c} is required");
  const Json& f = j["fermat"];
  if (!f.contains("d") || !f.contains("c")) config_error("'fermat' needs d and c");
  c.d = int_field(f["d"], "fermat.d", 1);
  if (!f["c"].is_array() || f["c"].empty()) config_error("'fermat.c' must be a nonempty list");
  c.c.clear();
  for (const auto& x : f["c"]) c.c.push_back(int_field(x, "fermat.c", 1));
  if (j.contains("group_generators")) {
    if (!j["group_generators"].is_array()) config_error("'group_generators' must be a list of vectors");
    for (const auto& g : j["group_generators"]) {
      std::vector<Rational> v = exact_list(g, "group_generators");
      if (v.size() != c.c.size()) config_error("generator length differs from fermat.c");
      c.group_generators.push_back(std::move(v));
    }
  }
  if (j.contains("allow_crepant")) {
    if (!j["allow_crepant"].is_boolean()) config_error("'allow_crepant' must be a boolean");
    c.allow_crepant = j["allow_crepant"].get<bool>();
  }
  if (j.contains("stage")) {
    if (!j["stage"].is_string()) config_error("'stage' must be a string");
    c.stage = parse_stage(j["stage"].get<std::string>());
  }
  if (j.contains("direction") && !j["direction"].is_null()) {
    if (!j["direction"].is_string()) config_error("'direction' must be a string");
    c.direction = parse_direction(j["direction"].get<std::string>());
  }
  if (j.contains("truncation")) {
    const Json& t = j["truncation"];
    if (!t.is_object()) config_error("'truncation' must be an object");
    static const std::set<std::string> tk{"series", "pf", "birkhoff", "radius_terms", "max_kbar"};
    for (const auto& [k, v] : t.items())
      if (!tk.count(k)) config_error("unknown truncation key '" + k + "'");
    if (t.contains("series")) c.series_order = int_field(t["series"], "truncation.series", 1);
    if (t.contains("pf")) c.pf_order = int_field(t["pf"], "truncation.pf", 1);
    if (t.contains("birkhoff")) c.birkhoff_order = exact_field(t["birkhoff"], "truncation.birkhoff");
    if (t.contains("radius_terms")) c.radius_terms = int_field(t["radius_terms"], "truncation.radius_terms", 100);
    if (t.contains("max_kbar")) c.max_kbar = static_cast<int>(int_field(t["max_kbar"], "truncation.max_kbar", 0));
  }
  if (j.contains("digits")) c.digits = static_cast<int>(int_field(j["digits"], "digits", 20));
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) config_error("'tolerances' must be an object");
    static const std::set<std::string> tk{"ode_local", "quad", "match"};
    for (const auto& [k, v] : t.items())
      if (!tk.count(k)) config_error("unknown tolerances key '" + k + "'");
    if (t.contains("ode_local")) c.ode_local_digits = real_field(t["ode_local"], "tolerances.ode_local");
    if (t.contains("quad")) c.quad_digits = real_field(t["quad"], "tolerances.quad");
    if (t.contains("match")) c.match_digits = real_field(t["match"], "tolerances.match");
  }
  if (j.contains("lambda")) {
    const Json& l = j["lambda"];
    if (!l.is_array() || l.size() != 2 || !l[0].is_string() || !l[1].is_string())
      config_error("'lambda' must be a pair of decimal strings");
    c.lambda = {exact_field(l[0], "lambda"), exact_field(l[1], "lambda")};
  }
  if (j.contains("u_arg")) c.u_arg = exact_field(j["u_arg"], "u_arg");
  if (j.contains("ray_angle") && !j["ray_angle"].is_null()) c.ray_angle = exact_field(j["ray_angle"], "ray_angle");
  if (j.contains("base_point")) c.base_point = exact_field(j["base_point"], "base_point");
  if (j.contains("second_base_point")) c.second_base_point = exact_field(j["second_base_point"], "second_base_point");
  if (j.contains("held_out")) c.held_out = exact_list(j["held_out"], "held_out");
  if (j.contains("connection_watson")) c.connection_watson = exact_list(j["connection_watson"], "connection_watson");
  if (j.contains("borel_watson")) c.borel_watson = exact_list(j["borel_watson"], "borel_watson");
  if (j.contains("residual_digits")) {
    const Json& r = j["residual_digits"];
    if (!r.is_object()) config_error("'residual_digits' must be an object");
    static const std::set<std::string> rk{"connect", "lg", "base_change"};
    for (const auto& [k, v] : r.items())
      if (!rk.count(k)) config_error("unknown residual_digits key '" + k + "'");
    if (r.contains("connect")) c.connection_residual_digits = real_field(r["connect"], "residual_digits.connect");
    if (r.contains("lg")) c.lg_residual_digits = real_field(r["lg"], "residual_digits.lg");
    if (r.contains("base_change")) c.base_change_digits = real_field(r["base_change"], "residual_digits.base_change");
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) config_error("'output_dir' must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  for (const Rational& m : c.held_out)
    if (m <= 0) config_error("held_out moduli must be positive");
  if (c.base_point <= 0 || c.second_base_point <= 0) config_error("base points must be positive");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

using Clock = std::chrono::steady_clock;

class Runner {
 public:
  Runner(const RunConfig& cfg, std::filesystem::path out) : cfg_(cfg), out_(std::move(out)) {
    std::vector<GroupElement> gens;
    for (const auto& g : cfg.group_generators) gens.emplace_back(g);
    group_ = enumerate_group(make_fermat_input(cfg.d, cfg.c), gens, cfg.allow_crepant);
    ctx_ = PrecisionContext::with_digits(cfg.digits);
    if (cfg.ode_local_digits) ctx_.ode_local_digits = *cfg.ode_local_digits;
    if (cfg.quad_digits) ctx_.quad_digits = *cfg.quad_digits;
    if (cfg.match_digits) ctx_.match_digits = *cfg.match_digits;
    ctx_.validate();
    kbar_ = group_.gbar_generators.empty() ? 0 : cfg.max_kbar;
    report_.name = cfg.name;
    report_.stage = cfg.stage;
  }

  Report run() {
    auto start = Clock::now();
    std::filesystem::create_directories(out_);
    bool all = cfg_.stage == Stage::all;
    if (all || cfg_.stage == Stage::series) series();
    if (all || cfg_.stage == Stage::pf) pf();
    bool exact_only = group_.r == 0;
    for (Stage s : {Stage::borel, Stage::connect, Stage::lg}) {
      if (!all && cfg_.stage != s) continue;
      if (s == Stage::lg) lg_exact();
      if (exact_only) {
        report_.skipped.push_back(to_string(s) + " numerics: CrepantInput (r = 0)");
        continue;
      }
      if (s == Stage::borel) borel();
      if (s == Stage::connect) connect(geometric_direction(), "connect", cfg_.connection_residual_digits);
      if (s == Stage::lg) connect(lg_direction(), "lg", cfg_.lg_residual_digits);
    }
    if (all || cfg_.stage == Stage::birkhoff) birkhoff();
    report_.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    write("summary.json", summary_json(report_));
    if (!report_.watson.empty()) write("plotdata.csv", emit_plotdata(report_));
    return report_;
  }

 private:
  Direction geometric_direction() const {
    if (cfg_.direction && (*cfg_.direction == Direction::YtoX || *cfg_.direction == Direction::XtoY))
      return *cfg_.direction;
    return default_direction(group_, false);
  }
  Direction lg_direction() const {
    if (cfg_.direction && (*cfg_.direction == Direction::ZtoFJRW || *cfg_.direction == Direction::FJRWtoZ))
      return *cfg_.direction;
    return default_direction(group_, true);
  }

  // Runs body; an Error becomes a failed check carrying the module error name.
  void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    auto start = Clock::now();
    CheckResult r;
    r.name = name;
    try {
      auto [ok, detail] = body();
      r.passed = ok;
      r.detail = detail;
    } catch (const Error& e) {
      r.passed = false;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report_.checks.push_back(std::move(r));
  }

  void write(const std::string& file, const std::string& content) {
    std::ofstream os(out_ / file);
    os << content;
    if (file != "summary.json" && file != "plotdata.csv") report_.artifacts.push_back(file);
  }
  void write_json(const std::string& file, const Json& j) { write(file, j.dump(2) + "\n"); }

  Truncation trunc(long order) const { return {order, kbar_}; }

  std::vector<std::vector<int>> slices() const { return multi_indices(group_.gbar_generators.size(), kbar_); }

  void series() {
    QSeries ix = build_IX(group_, trunc(cfg_.series_order));
    QSeries iy = build_IY(group_, trunc(cfg_.series_order));
    write_json("series_IX.json", to_json(ix));
    write_json("series_IY.json", to_json(iy));
    if (group_.r > 0) write_json("series_regularized_X.json", to_json(regularize(ix, group_)));
    if (group_.r < 0) write_json("series_regularized_Y.json", to_json(borel_regularize(iy, Rational(-group_.r), 1)));
    check("z_restoration", [&] {
      ZSeries zx = restore_z(ix, GradingData::make(group_, SpaceTag::X), group_);
      ZSeries zy = restore_z(iy, GradingData::make(group_, SpaceTag::Y), group_);
      bool ok = zx == build_IX_z(group_, ix.trunc) && zy == build_IY_z(group_, iy.trunc) &&
                set_z_to_one(zx, group_) == ix && set_z_to_one(zy, group_) == iy;
      return std::pair{ok, "order " + std::to_string(cfg_.series_order)};
    });
  }

  void pf() {
    Json ops = Json::array();
    Json annihilation = Json::array();
    QSeries ix = build_IX(group_, trunc(cfg_.pf_order));
    QSeries iy = build_IY(group_, trunc(cfg_.pf_order));
    bool x_ok = true, y_ok = true;
    for (const auto& kbar : slices()) {
      auto a = weighted_multiplicities(group_, kbar);
      ThetaOperator oy = build_pf_Y(group_, a), ox = build_pf_X(group_, a);
      bool ay = check_annihilation(oy, iy.restricted_to(kbar));
      bool ax = check_annihilation(ox, ix.restricted_to(kbar));
      y_ok = y_ok && ay;
      x_ok = x_ok && ax;
      ops.push_back({{"kbar", kbar}, {"pf_Y", to_json(oy)}, {"pf_X", to_json(ox)}});
      annihilation.push_back({{"kbar", kbar}, {"pf_Y", ay}, {"pf_X", ax}, {"order", cfg_.pf_order}});
    }
    check("pf_Y_annihilation", [&] { return std::pair{y_ok, "order " + std::to_string(cfg_.pf_order)}; });
    check("pf_X_annihilation", [&] { return std::pair{x_ok, "order " + std::to_string(cfg_.pf_order)}; });
    if (group_.r > 0) {
      check("regularized_pf_annihilation", [&] {
        long order = 2 * cfg_.pf_order;
        QSeries reg = regularize(build_IX(group_, trunc(order)), group_);
        bool ok = true;
        std::string locus;
        for (const auto& kbar : slices()) {
          ThetaOperator op = build_regularized_pf(group_, weighted_multiplicities(group_, kbar));
          ok = ok && check_annihilation(op, reg.restricted_to(kbar));
          if (kbar == slices().front()) {
            locus = singular_locus(op).to_string();
            ops.push_back({{"regularized", to_json(op)}, {"singular_locus", locus}});
          }
        }
        return std::pair{ok, "order " + std::to_string(order) + ", singular set " + locus};
      });
    }
    check("pf_factorization", [&] {
      bool ok = true;
      Json fac = Json::array();
      for (std::size_t gb : group_.gbar_elements) {
        ThetaOperator d = build_D_t(group_, gb);
        PFFactorization f = factor_pf(d, group_, gb);
        bool exact = f.compose() == d;
        bool mono = verify_on_monomials(d, f, 40);
        ok = ok && exact && mono;
        fac.push_back({{"gbar", gb}, {"left", f.left}, {"irr", to_json(f.irr)}, {"exact", exact}, {"monomials_0_40", mono}});
      }
      ops.push_back({{"factorizations", fac}});
      return std::pair{ok, std::to_string(group_.gbar_elements.size()) + " cosets"};
    });
    write_json("operators.json", ops);
    write_json("annihilation.json", annihilation);
  }

  RaySpec ray() const {
    RaySpec r;
    r.angle = cfg_.ray_angle ? *cfg_.ray_angle : -cfg_.u_arg;
    r.region = watson_region(group_);
    return r;
  }

  ConnectionConfig connection_config(double residual_digits) const {
    ConnectionConfig cc;
    cc.lambda = cfg_.lambda;
    cc.ctx = ctx_;
    cc.u_arg = cfg_.u_arg;
    cc.ray_angle = cfg_.ray_angle;
    cc.base_modulus = cfg_.base_point;
    cc.second_base_modulus = cfg_.second_base_point;
    cc.held_out = cfg_.held_out;
    cc.watson_moduli = cfg_.connection_watson;
    cc.residual_digits = residual_digits;
    return cc;
  }

  // Two rays agree and halving the panels stays within 10x the quadrature tolerance.
  std::pair<bool, std::string> hygiene(BorelSum& sum, const UPoint& u) {
    PrecisionScope scope(ctx_.bits());
    auto vdiff = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
      Real m;
      for (std::size_t i = 0; i < a.size(); ++i) m = max(m, abs(a[i] - b[i]));
      return m;
    };
    auto base = sum.laplace(u, 1);
    Real scale;
    for (const auto& z : base.values[0]) scale = max(scale, abs(z));
    Real tol = Real(10) * ctx_.quad() * scale;
    std::optional<BorelSum> other;
    for (const Rational& delta : {make_rational(1, 10), make_rational(-1, 10)}) {
      RaySpec r = sum.ray();
      r.angle += delta;
      try {
        other.emplace(std::make_shared<const SeriesModel>(sum.model()), r, ctx_);
        other->laplace(u, 1);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RegionViolation && e.code() != ErrorCode::SingularityTooClose &&
            e.code() != ErrorCode::TailNotConvergent)
          throw;
        other.reset();
      }
    }
    if (!other) return {false, "no admissible second ray within 1/10"};
    Real ray_diff = vdiff(base.values[0], other->laplace(u, 1).values[0]);
    Real ref_diff = vdiff(base.values[0], sum.laplace(u, 1, 0.5).values[0]);
    bool ok = ray_diff <= tol && ref_diff <= tol;
    std::string detail = "at |u| = " + to_string(u.modulus) + ": ray " + ray_diff.to_string(3) + ", refinement " +
                         ref_diff.to_string(3) + ", bound " + tol.to_string(3);
    return {ok, detail};
  }

  void borel() {
    DirectionSetup setup = direction_setup(group_, geometric_direction());
    std::ostringstream csv;
    bool header = true;
    for (std::size_t gb : group_.gbar_elements) {
      auto base = series_model(group_, setup.divergent, gb, cfg_.lambda);
      auto bm = borel_model(base, setup.kappa, setup.sigma);
      std::string tag = "coset " + std::to_string(gb);
      std::optional<BorelSum> sum;
      check("borel_sum_" + std::to_string(gb), [&] {
        sum.emplace(bm, ray(), ctx_);
        return std::pair{true, tag + ", " + std::to_string(sum->singular_points().size()) + " singular points"};
      });
      if (!sum) continue;
      check("borel_radius_" + std::to_string(gb), [&] {
        double est = estimate_radius(bm, cfg_.radius_terms);
        double exact = sum->convergence_radius().to_double();
        if (sum->singular_points().empty()) return std::pair{true, "no finite singular point; estimate " + std::to_string(est)};
        bool ok = std::abs(est - exact) <= 0.05 * exact;
        return std::pair{ok, "estimate " + std::to_string(est) + " from " + std::to_string(cfg_.radius_terms) +
                                 " terms, nearest singularity " + std::to_string(exact)};
      });
      check("borel_watson_" + std::to_string(gb), [&] {
        std::vector<UPoint> us;
        for (const Rational& m : cfg_.borel_watson) us.push_back({m, cfg_.u_arg});
        WatsonReport rep = watson_check(*sum, base, us);
        std::ostringstream one;
        rep.write_csv(one);
        std::string text = one.str();
        if (!header) text = text.substr(text.find('\n') + 1);
        header = false;
        csv << text;
        report_.watson.push_back({"borel " + tag, rep});
        std::string detail;
        for (std::size_t i = 0; i < us.size(); ++i)
          detail += (i ? "; " : "") + std::string("|u| = ") + to_string(us[i].modulus) + " checked to n = " +
                    std::to_string(rep.checked_up_to[i]);
        return std::pair{rep.passed(), detail};
      });
      check("borel_hygiene_" + std::to_string(gb), [&] { return hygiene(*sum, UPoint{cfg_.borel_watson.front(), cfg_.u_arg}); });
    }
    write("watson_borel.csv", csv.str());
  }

  void connect(Direction dir, const std::string& stage, double residual_digits) {
    std::optional<ConnectionMatrix> cm;
    check(stage + "_solve", [&] {
      cm = solve_full(group_, dir, connection_config(residual_digits));
      return std::pair{true, to_string(dir) + ", " + std::to_string(cm->blocks.size()) + " blocks"};
    });
    if (!cm) return;
    int digits = std::max(20, cfg_.digits - 10);
    write_json("connection_" + stage + ".json", to_json(*cm, digits));
    std::ostringstream res;
    res << "coset,u_modulus,u_arg,residual\n";
    for (const auto& b : cm->blocks)
      for (const auto& r : b.residuals)
        res << b.coset << "," << to_string(r.u.modulus) << "," << to_string(r.u.arg) << "," << r.residual.to_string(6) << "\n";
    write("residuals_" + stage + ".csv", res.str());
    std::ostringstream wcsv;
    cm->watson.write_csv(wcsv);
    write("watson_" + stage + ".csv", wcsv.str());
    report_.watson.push_back({stage + " L G", cm->watson});
    Real bound = exp(Real(-residual_digits * std::log(10.0)));
    Real change_bound = exp(Real(-cfg_.base_change_digits * std::log(10.0)));
    check(stage + "_residual", [&] {
      return std::pair{cm->max_residual() <= bound,
                       "max " + cm->max_residual().to_string(3) + " <= " + bound.to_string(3)};
    });
    check(stage + "_base_point", [&] {
      return std::pair{cm->max_base_point_change() <= change_bound,
                       "max relative change " + cm->max_base_point_change().to_string(3)};
    });
    check(stage + "_watson", [&] { return std::pair{cm->watson.passed(), "L G against the divergent series"}; });
    DirectionSetup setup = direction_setup(group_, dir);
    RaySpec r = ray();
    r.angle = cm->ray_angle;
    for (const auto& b : cm->blocks) {
      check(stage + "_hygiene_" + std::to_string(b.coset), [&] {
        BlockProblem p(group_, setup, b.coset, cfg_.lambda, r, ctx_);
        return hygiene(p.borel(), cm->base_point);
      });
    }
  }

  void lg_exact() {
    QSeries ix = build_IX(group_, trunc(cfg_.series_order));
    QSeries iy = build_IY(group_, trunc(cfg_.series_order));
    std::optional<QSeries> w, z;
    check("mlk_qsd_lambda_limit", [&] {
      w = mlk_transform(ix, group_);
      z = qsd_transform(iy, group_);
      bool ok = true;
      for (const auto* s : {&*w, &*z})
        for (const auto& [key, c] : s->coeffs) ok = ok && c.value.has_lambda_limit();
      return std::pair{ok, "order " + std::to_string(cfg_.series_order)};
    });
    if (!w || !z) return;
    write_json("series_FJRW.json", to_json(*w));
    write_json("series_Z.json", to_json(*z));
    check("reduced_pf_annihilation", [&] {
      bool ok = true;
      for (const auto& kbar : slices()) {
        auto a = weighted_multiplicities(group_, kbar);
        std::size_t gb = group_.coset_of[group_.index_of_reduced(a)];
        if (a != group_.elements[gb].multiplicities()) continue;
        PFFactorization f = factor_pf(build_D_t(group_, gb), group_, gb);
        ok = ok && check_annihilation(f.irr, w->restricted_to(kbar));
        ThetaOperator dq = change_variable(f.irr, Variable::q, Rational(-1) / group_.input.d, -1);
        dq = dq.left_shift(-dq.min_power());
        ok = ok && check_annihilation(dq, z->restricted_to(kbar));
      }
      return std::pair{ok, "FJRW and Z slices"};
    });
  }

  void birkhoff() {
    std::vector<BirkhoffBlock> blocks;
    check("birkhoff_run", [&] {
      blocks = birkhoff_all(group_, cfg_.birkhoff_order);
      return std::pair{true, std::to_string(blocks.size()) + " blocks to order " + to_string(cfg_.birkhoff_order)};
    });
    Json dump = Json::array();
    for (const BirkhoffBlock& b : blocks) {
      dump.push_back(to_json(b));
      if (b.not_big) {
        report_.skipped.push_back("birkhoff_block_" + std::to_string(b.gbar) + ": " + *b.not_big);
        continue;
      }
      check("birkhoff_block_" + std::to_string(b.gbar), [&] {
        bool split = true;
        for (const auto& [k, jk] : b.factors.j.terms)
          for (const auto& e : jk.data)
            if (k > 0 && !e.nonnegative_part().is_zero()) split = false;
        for (const auto& [k, yk] : b.factors.y.terms)
          for (const auto& e : yk.data)
            if (e.has_negative_power()) split = false;
        bool ok = b.recomposes && split && b.pde.passed() && b.mirror.has_value();
        std::string detail = std::string("recomposition ") + (b.recomposes ? "exact" : "FAILED") + ", split " +
                             (split ? "ok" : "FAILED") + ", PDE residual zero through index " +
                             std::to_string(b.pde.verified_to) + (b.mirror ? "" : ", no unit column");
        return std::pair{ok, detail};
      });
    }
    write_json("birkhoff.json", dump);
  }

  const RunConfig& cfg_;
  std::filesystem::path out_;
  GroupData group_;
  PrecisionContext ctx_;
  int kbar_ = 0;
  Report report_;
};

std::string log10_text(const Real& x) {
  if (x.is_zero()) return "-inf";
  std::ostringstream os;
  os.precision(6);
  os << x.log2_abs() * std::log10(2.0);
  return os.str();
}

}  // namespace

Report run(const RunConfig& config, const std::filesystem::path& out_dir) { return Runner(config, out_dir).run(); }

std::string emit_plotdata(const Report& report) {
  if (report.watson.empty()) fail(ErrorCode::MissingStage, "no Watson data: run the borel, connect or lg stage");
  std::ostringstream os;
  os << "curve,abs_u,n,log10_error,log10_next_term_bound\n";
  for (const WatsonCurve& c : report.watson)
    for (const WatsonRow& r : c.report.rows)
      os << c.label << "," << r.u.modulus.get_d() << "," << r.n << "," << log10_text(r.error) << ","
         << log10_text(Real(2) * r.next_term) << "\n";
  return os.str();
}

std::string summary_json(const Report& report) {
  Json checks = Json::array();
  for (const CheckResult& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}});
  Json j = {{"name", report.name},       {"stage", to_string(report.stage)},
            {"passed", report.passed()}, {"checks", checks},
            {"skipped", report.skipped}, {"artifacts", report.artifacts},
            {"seconds", report.seconds}};
  return j.dump(2) + "\n";
}

}  // namespace asymcorr
