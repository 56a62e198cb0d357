#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asymcorr/borel_laplace.hpp"

namespace asymcorr {

enum class Direction { YtoX, XtoY, ZtoFJRW, FJRWtoZ };

std::string to_string(Direction d);
Direction parse_direction(const std::string& s);

// Roles of the two sides for one direction. The divergent side F is Borel summed in
// s = sigma u^{-kappa}; the convergent side G is evaluated at v = sign u^rho.
struct DirectionSetup {
  Direction direction = Direction::YtoX;
  SpaceTag divergent = SpaceTag::X;
  SpaceTag convergent = SpaceTag::Y;
  Rational kappa = 1;
  int sigma = 1;
  Rational rho = 1;
  int sign = 1;
};
// Raises InvalidInput when the direction does not match the sign of r.
DirectionSetup direction_setup(const GroupData& group, Direction d);
// Direction for the geometric (Y/X) or Landau-Ginzburg (Z/FJRW) pair from the sign of r.
Direction default_direction(const GroupData& group, bool landau_ginzburg);

// log v at u on the recorded branch: rho log u, plus i pi when sign = -1.
Complex convergent_log(const DirectionSetup& setup, const UPoint& u);

// Dense complex matrix, row-major.
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> data;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Complex& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Solves A X = B by LU with partial pivoting; condition = |A|_inf |A^-1|_inf.
// Raises SingularWronskian when a pivot vanishes or the condition exceeds max_condition.
ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b, Real& condition, const Real& max_condition);

struct HeldOutResidual {
  UPoint u;
  Real residual;  // max_alpha |(L G)_alpha - F_alpha| / max_alpha |F_alpha|
};

struct ConnectionBlock {
  std::size_t coset = 0;  // element index of the gbar coset
  std::vector<BasisEntry> rows;  // divergent-side components
  std::vector<BasisEntry> cols;  // convergent-side components
  ComplexMatrix entries;
  Real condition;
  std::vector<HeldOutResidual> residuals;
  // max relative entry change when re-solved from the second base point
  Real base_point_change;
  Real max_residual() const;
};

// Values of both sides at one u: theta_u^i components for i < m.
struct SideValues {
  std::vector<std::vector<Complex>> f;
  std::vector<Real> f_error;
  std::vector<std::vector<Complex>> g;
};

// Evaluation context for one coset: the Borel sum of F and the convergent model of G.
class BlockProblem {
 public:
  BlockProblem(const GroupData& group, const DirectionSetup& setup, std::size_t coset, const ComplexRational& lambda,
               const RaySpec& ray, const PrecisionContext& ctx);

  std::size_t source_dim() const { return g_model_->components.size(); }
  std::size_t target_dim() const { return f_model_->components.size(); }
  const std::shared_ptr<const SeriesModel>& divergent_model() const { return f_model_; }
  const std::shared_ptr<const SeriesModel>& convergent_model() const { return g_model_; }
  BorelSum& borel() { return *sum_; }
  // theta_u^i for i < m on both sides.
  SideValues values(const UPoint& u, int m);
  // G components at u (i = 0 only).
  std::vector<Complex> convergent(const UPoint& u);

 private:
  DirectionSetup setup_;
  PrecisionContext ctx_;
  std::shared_ptr<const SeriesModel> f_model_;
  std::shared_ptr<const SeriesModel> g_model_;
  std::unique_ptr<BorelSum> sum_;
};

// Block from the Wronskian system at u0: rows theta_u^i, i < source_dim.
ComplexMatrix solve_block(const SideValues& at_base, std::size_t source_dim, const PrecisionContext& ctx,
                          Real& condition);
// Residuals of L G against F at held-out points; ResidualTooLarge above bound.
std::vector<HeldOutResidual> held_out_residuals(BlockProblem& problem, const ComplexMatrix& l,
                                                const std::vector<UPoint>& points, const Real& bound);

struct ConnectionConfig {
  ComplexRational lambda{make_rational(7, 2), make_rational(1, 5)};
  PrecisionContext ctx;
  Rational u_arg = 0;
  std::optional<Rational> ray_angle;  // default -u_arg
  Rational base_modulus = 30;
  Rational second_base_modulus = 60;
  std::vector<Rational> held_out{20, 50, 100, 150, 200};
  // Watson check of L G against the divergent series at these moduli.
  std::vector<Rational> watson_moduli{100, 200};
  // Residual bound; default the match tolerance of ctx.
  std::optional<double> residual_digits;
};

struct ConnectionMatrix {
  Direction direction = Direction::YtoX;
  ComplexRational lambda;
  Rational ray_angle;
  UPoint base_point;
  UPoint second_base_point;
  std::vector<ConnectionBlock> blocks;
  WatsonReport watson;
  // log v = rho log u (+ i pi)
  std::string branch;
  Real max_residual() const;
  Real max_base_point_change() const;
};

ConnectionMatrix solve_full(const GroupData& group, Direction direction, const ConnectionConfig& config);

}  // namespace asymcorr
