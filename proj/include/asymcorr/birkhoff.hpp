#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymcorr/zseries.hpp"

namespace asymcorr {

// Finite Laurent polynomial in z (rational exponents) with LambdaPoly coefficients.
class ZLaurent {
 public:
  ZLaurent() = default;
  ZLaurent(const LambdaPoly& c);  // NOLINT: constant term
  static ZLaurent term(const Rational& zexp, const LambdaPoly& c);

  const std::map<Rational, LambdaPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  LambdaPoly coefficient(const Rational& zexp) const;
  bool has_positive_power() const;
  bool has_negative_power() const;
  // Parts with z-exponent < 0 and >= 0.
  ZLaurent negative_part() const;
  ZLaurent nonnegative_part() const;

  ZLaurent& operator+=(const ZLaurent& o);
  ZLaurent& operator-=(const ZLaurent& o);
  ZLaurent& operator*=(const LambdaPoly& c);
  friend ZLaurent operator+(ZLaurent a, const ZLaurent& b) { return a += b; }
  friend ZLaurent operator-(ZLaurent a, const ZLaurent& b) { return a -= b; }
  friend ZLaurent operator*(const ZLaurent& a, const ZLaurent& b);
  bool operator==(const ZLaurent& o) const { return terms_ == o.terms_; }
  bool operator!=(const ZLaurent& o) const { return !(*this == o); }
  // Multiply by z^e.
  ZLaurent shifted(const Rational& e) const;
  std::string to_string() const;

 private:
  void add(const Rational& e, const LambdaPoly& c);
  std::map<Rational, LambdaPoly> terms_;
};

// Square matrix of ZLaurent entries, row-major.
struct ZMatrix {
  std::size_t dim = 0;
  std::vector<ZLaurent> data;

  ZMatrix() = default;
  explicit ZMatrix(std::size_t n) : dim(n), data(n * n) {}
  static ZMatrix identity(std::size_t n);
  ZLaurent& operator()(std::size_t i, std::size_t j) { return data[i * dim + j]; }
  const ZLaurent& operator()(std::size_t i, std::size_t j) const { return data[i * dim + j]; }
  bool is_zero() const;
  ZMatrix& operator+=(const ZMatrix& o);
  ZMatrix& operator-=(const ZMatrix& o);
  friend ZMatrix operator*(const ZMatrix& a, const ZMatrix& b);
  bool operator==(const ZMatrix& o) const { return dim == o.dim && data == o.data; }
};

// Matrix series in the base variable v: sum_n v^{n*step} M_n, n = 0..max_index.
struct MatrixZSeries {
  std::size_t dim = 0;
  Rational step = 1;
  long max_index = 0;
  std::map<long, ZMatrix> terms;  // zero terms omitted

  // M_n, or the zero matrix.
  ZMatrix at(long n) const;
  // Product truncated at min(max_index) of the factors.
  friend MatrixZSeries operator*(const MatrixZSeries& a, const MatrixZSeries& b);
  bool operator==(const MatrixZSeries& o) const;
};

// sum c z^a (z theta)^b, theta = v d/dv.
struct ZThetaOperator {
  struct Term {
    Rational z_power = 0;
    int theta_power = 0;
    LambdaPoly coeff = LambdaPoly(1);
  };
  std::vector<Term> terms;

  static ZThetaOperator monomial(int theta_power);
  std::string to_string() const;
};

// Column i is z^{-1} P_i(z, z theta) I with the prefactor v^{E/z} stripped, restricted to the
// kbar = 0 slice and the block entries. NotBig unless every column is phi_i + O(v).
MatrixZSeries assemble_I_matrix(const ZSeries& big_I, const std::vector<BasisEntry>& block,
                                const std::vector<ZThetaOperator>& operators);

// First (z theta)^b, b <= block size, whose certificate gives phi_i; NotBig when one is missing.
std::vector<ZThetaOperator> search_operators(const ZSeries& big_I, const std::vector<BasisEntry>& block);

struct Factorization {
  MatrixZSeries j;  // identity + negative z-powers
  MatrixZSeries y;  // nonnegative z-powers
};

// M = J Y order by order up to the base exponent `order`.
// ObstructedFactorization when M_0 is not the identity.
Factorization factorize(const MatrixZSeries& m, const Rational& order);

// Mirror map: z J(1) = z + E log v + sum_n v^{n step} tau_n + O(z^{-1}).
struct MirrorMap {
  Prefactor log_part;  // E
  std::map<long, std::vector<LambdaPoly>> tau;  // index -> block components
};
// Readout from the column of the untwisted unit; nullopt when the block lacks it.
std::optional<MirrorMap> mirror_map(const Factorization& f, const std::vector<BasisEntry>& block,
                                    const Prefactor& prefactor);

// Residual of z theta J = J A for J = v^{E/z} J_part, with A = [z^0](E J + z theta J).
struct PdeResidual {
  long verified_to = -1;  // largest index with vanishing residual at every index up to it
  std::optional<long> first_failure;
  std::map<long, ZMatrix> connection;  // A_n
  bool passed() const { return !first_failure.has_value(); }
};
PdeResidual pde_residual(const MatrixZSeries& j, const std::vector<BasisEntry>& block, const Prefactor& prefactor);

struct BirkhoffBlock {
  std::size_t gbar = 0;
  std::vector<BasisEntry> block;
  std::vector<ZThetaOperator> operators;
  MatrixZSeries i_matrix;
  Factorization factors;
  std::optional<MirrorMap> mirror;
  PdeResidual pde;
  bool recomposes = false;
  std::optional<std::string> not_big;  // search failure on this block; other fields unset
};

// Y-side I-function with z, one factorization per gbar block; operators found by search.
std::vector<BirkhoffBlock> birkhoff_all(const GroupData& group, const Rational& order);

}  // namespace asymcorr
