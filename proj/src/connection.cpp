#include "asymcorr/connection.hpp"

#include <cmath>

#include "asymcorr/errors.hpp"

namespace asymcorr {

std::string to_string(Direction d) {
  switch (d) {
    case Direction::YtoX: return "Y->X";
    case Direction::XtoY: return "X->Y";
    case Direction::ZtoFJRW: return "Z->FJRW";
    case Direction::FJRWtoZ: return "FJRW->Z";
  }
  return "";
}

Direction parse_direction(const std::string& s) {
  for (Direction d : {Direction::YtoX, Direction::XtoY, Direction::ZtoFJRW, Direction::FJRWtoZ})
    if (s == to_string(d)) return d;
  fail(ErrorCode::ConfigError, "unknown direction '" + s + "'");
}

DirectionSetup direction_setup(const GroupData& group, Direction d) {
  long r = group.r;
  if (r == 0) fail(ErrorCode::CrepantInput, "no asymptotic correspondence for r = 0");
  bool positive = r > 0;
  bool needs_positive = d == Direction::YtoX || d == Direction::ZtoFJRW;
  if (positive != needs_positive)
    fail(ErrorCode::InvalidInput, "direction " + to_string(d) + " does not match the sign of r");
  Rational rr(std::labs(r));
  Rational dd(group.input.d);
  DirectionSetup s;
  s.direction = d;
  switch (d) {
    case Direction::YtoX:  // t = q^{-1/d}, q = u^r
      s = {d, SpaceTag::X, SpaceTag::Y, rr / dd, 1, rr, 1};
      break;
    case Direction::XtoY:  // q = t^{-d}, t = u^{|r|/d}
      s = {d, SpaceTag::Y, SpaceTag::X, rr, 1, rr / dd, 1};
      break;
    case Direction::ZtoFJRW:  // t = -q^{-1/d}, q = u^r
      s = {d, SpaceTag::FJRW, SpaceTag::Z, rr / dd, -1, rr, 1};
      break;
    case Direction::FJRWtoZ:  // q = u^{-|r|}, t = -u^{|r|/d}
      s = {d, SpaceTag::Z, SpaceTag::FJRW, rr, 1, rr / dd, -1};
      break;
  }
  return s;
}

Direction default_direction(const GroupData& group, bool landau_ginzburg) {
  if (group.r == 0) fail(ErrorCode::CrepantInput, "no asymptotic correspondence for r = 0");
  if (landau_ginzburg) return group.r > 0 ? Direction::ZtoFJRW : Direction::FJRWtoZ;
  return group.r > 0 ? Direction::YtoX : Direction::XtoY;
}

Complex convergent_log(const DirectionSetup& setup, const UPoint& u) {
  Complex l = u.log() * Complex(Real(setup.rho));
  if (setup.sign == -1) l += Complex(Real(0), pi());
  return l;
}

// ---------------------------------------------------------------- linear algebra

namespace {

Real pow10_neg_digits(double digits) {
  Real r(-digits);
  mpfr_exp10(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real row_norm(const ComplexMatrix& a) {
  Real best;
  for (std::size_t i = 0; i < a.rows; ++i) {
    Real s;
    for (std::size_t j = 0; j < a.cols; ++j) s += abs(a(i, j));
    best = max(best, s);
  }
  return best;
}

}  // namespace

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b, Real& condition, const Real& max_condition) {
  std::size_t n = a.rows;
  if (a.cols != n || b.rows != n) fail(ErrorCode::InvalidInput, "lu_solve: shape mismatch");
  ComplexMatrix lu = a;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(lu(i, k)) > abs(lu(p, k))) p = i;
    if (lu(p, k).is_zero()) fail(ErrorCode::SingularWronskian, "zero pivot in the Wronskian");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(p, j), lu(k, j));
      std::swap(perm[p], perm[k]);
    }
    Complex inv = inverse(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      lu(i, k) = lu(i, k) * inv;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
    }
  }
  auto solve = [&](const ComplexMatrix& rhs) {
    ComplexMatrix x(n, rhs.cols);
    for (std::size_t c = 0; c < rhs.cols; ++c) {
      std::vector<Complex> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        Complex s = rhs(perm[i], c);
        for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * y[j];
        y[i] = s;
      }
      for (std::size_t i = n; i-- > 0;) {
        Complex s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x(j, c);
        x(i, c) = s / lu(i, i);
      }
    }
    return x;
  };
  ComplexMatrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) id(i, i) = Complex(1);
  condition = row_norm(a) * row_norm(solve(id));
  if (condition > max_condition)
    fail(ErrorCode::SingularWronskian, "Wronskian condition number " + condition.to_string(4) + " too large");
  return solve(b);
}

// ---------------------------------------------------------------- block problem

BlockProblem::BlockProblem(const GroupData& group, const DirectionSetup& setup, std::size_t coset,
                           const ComplexRational& lambda, const RaySpec& ray, const PrecisionContext& ctx)
    : setup_(setup), ctx_(ctx) {
  auto base = series_model(group, setup.divergent, coset, lambda);
  f_model_ = base;
  g_model_ = series_model(group, setup.convergent, coset, lambda);
  sum_ = std::make_unique<BorelSum>(borel_model(base, setup.kappa, setup.sigma), ray, ctx);
}

std::vector<Complex> BlockProblem::convergent(const UPoint& u) {
  DirectionSetup s = setup_;
  auto g = evaluate_convergent(g_model_, [s, u] { return convergent_log(s, u); }, 1, ctx_.bits());
  PrecisionScope scope(ctx_.bits());
  std::vector<Complex> out;
  for (const auto& z : g[0]) out.push_back(z * Real(1));
  return out;
}

SideValues BlockProblem::values(const UPoint& u, int m) {
  SideValues v;
  auto sample = sum_->laplace(u, m);
  v.f = sample.values;
  v.f_error = sample.errors;
  DirectionSetup s = setup_;
  auto g = evaluate_convergent(g_model_, [s, u] { return convergent_log(s, u); }, m, ctx_.bits());
  PrecisionScope scope(ctx_.bits());
  // theta_u = rho theta_v
  Real rho(setup_.rho);
  Real f(1);
  for (int i = 0; i < m; ++i) {
    std::vector<Complex> row;
    for (const auto& z : g[static_cast<std::size_t>(i)]) row.push_back(z * f);
    v.g.push_back(std::move(row));
    f *= rho;
  }
  return v;
}

ComplexMatrix solve_block(const SideValues& at_base, std::size_t source_dim, const PrecisionContext& ctx,
                          Real& condition) {
  PrecisionScope scope(ctx.bits());
  std::size_t m = source_dim;
  if (at_base.g.size() < m || at_base.f.size() < m)
    fail(ErrorCode::InvalidInput, "solve_block needs theta-derivatives up to the block dimension");
  std::size_t nt = at_base.f.front().size();
  ComplexMatrix w(m, m), t(m, nt);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t b = 0; b < m; ++b) w(i, b) = at_base.g[i][b];
    for (std::size_t a = 0; a < nt; ++a) t(i, a) = at_base.f[i][a];
  }
  Real max_condition = ldexp(Real(1), static_cast<long>(ctx.bits()) / 2);
  ComplexMatrix x = lu_solve(w, t, condition, max_condition);
  ComplexMatrix l(nt, m);
  for (std::size_t a = 0; a < nt; ++a)
    for (std::size_t b = 0; b < m; ++b) l(a, b) = x(b, a);
  return l;
}

std::vector<HeldOutResidual> held_out_residuals(BlockProblem& problem, const ComplexMatrix& l,
                                                const std::vector<UPoint>& points, const Real& bound) {
  std::vector<HeldOutResidual> out;
  for (const auto& u : points) {
    auto f = problem.borel().laplace(u, 1).values[0];
    auto g = problem.convergent(u);
    Real err, size;
    for (std::size_t a = 0; a < l.rows; ++a) {
      Complex s;
      for (std::size_t b = 0; b < l.cols; ++b) s += l(a, b) * g[b];
      err = max(err, abs(s - f[a]));
      size = max(size, abs(f[a]));
    }
    Real res = size.is_zero() ? err : err / size;
    out.push_back({u, res});
    if (res > bound)
      fail(ErrorCode::ResidualTooLarge, "held-out residual " + res.to_string(4) + " at u = " + u.to_string());
  }
  return out;
}

Real ConnectionBlock::max_residual() const {
  Real m;
  for (const auto& r : residuals) m = max(m, r.residual);
  return m;
}

Real ConnectionMatrix::max_residual() const {
  Real m;
  for (const auto& b : blocks) m = max(m, b.max_residual());
  return m;
}

Real ConnectionMatrix::max_base_point_change() const {
  Real m;
  for (const auto& b : blocks) m = max(m, b.base_point_change);
  return m;
}

ConnectionMatrix solve_full(const GroupData& group, Direction direction, const ConnectionConfig& config) {
  const PrecisionContext& ctx = config.ctx;
  ctx.validate();
  DirectionSetup setup = direction_setup(group, direction);
  PrecisionScope scope(ctx.bits());
  RaySpec ray;
  ray.region = watson_region(group);
  ray.angle = config.ray_angle ? *config.ray_angle : Rational(-config.u_arg);
  if (!ray.region.contains(config.u_arg))
    fail(ErrorCode::RegionViolation, "arg u = " + to_string(config.u_arg) + " is outside the asymptotic region");

  ConnectionMatrix out;
  out.direction = direction;
  out.lambda = config.lambda;
  out.ray_angle = ray.angle;
  out.base_point = {config.base_modulus, config.u_arg};
  out.second_base_point = {config.second_base_modulus, config.u_arg};
  out.branch = "log v = " + to_string(setup.rho) + " log u" + (setup.sign == -1 ? " + i pi" : "") +
               ", log u principal";
  Real bound = pow10_neg_digits(config.residual_digits ? *config.residual_digits : ctx.match_digits);
  std::vector<UPoint> held;
  for (const auto& m : config.held_out) held.push_back({m, config.u_arg});

  std::vector<WatsonSample> watson_samples;
  std::shared_ptr<const SeriesModel> asym;
  for (std::size_t coset : group.gbar_elements) {
    BlockProblem problem(group, setup, coset, config.lambda, ray, ctx);
    int m = static_cast<int>(problem.source_dim());
    ConnectionBlock block;
    block.coset = coset;
    block.rows = problem.divergent_model()->components;
    block.cols = problem.convergent_model()->components;
    block.entries = solve_block(problem.values(out.base_point, m), problem.source_dim(), ctx, block.condition);
    Real cond2;
    ComplexMatrix second = solve_block(problem.values(out.second_base_point, m), problem.source_dim(), ctx, cond2);
    Real change;
    Real scale;
    for (const auto& z : block.entries.data) scale = max(scale, abs(z));
    for (std::size_t i = 0; i < second.data.size(); ++i)
      change = max(change, abs(second.data[i] - block.entries.data[i]));
    block.base_point_change = scale.is_zero() ? change : change / scale;
    block.residuals = held_out_residuals(problem, block.entries, held, bound);

    // L G against the divergent series
    for (const auto& mod : config.watson_moduli) {
      UPoint u{mod, config.u_arg};
      auto g = problem.convergent(u);
      auto f = problem.borel().laplace(u, 1);
      std::vector<Complex> lg(block.entries.rows);
      Real size;
      for (std::size_t a = 0; a < block.entries.rows; ++a) {
        for (std::size_t b = 0; b < block.entries.cols; ++b) lg[a] += block.entries(a, b) * g[b];
        size = max(size, abs(lg[a]));
      }
      Real err;
      for (std::size_t a = 0; a < lg.size(); ++a) err = max(err, abs(lg[a] - f.values[0][a]));
      // error of L G: its distance to the Borel sum plus the Borel sum's own error
      WatsonReport rep = watson_check({WatsonSample{u, lg, err + f.errors[0]}}, problem.divergent_model(),
                                      setup.kappa, setup.sigma, ctx.bits());
      for (auto& row : rep.rows) out.watson.rows.push_back(row);
      out.watson.optimal_index.push_back(rep.optimal_index.front());
      out.watson.optimal_reached.push_back(rep.optimal_reached.front());
      out.watson.checked_up_to.push_back(rep.checked_up_to.front());
      out.watson.sample_error.push_back(rep.sample_error.front());
    }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

}  // namespace asymcorr
