#include "asymcorr/birkhoff.hpp"

#include <algorithm>
#include <sstream>

#include "asymcorr/errors.hpp"

namespace asymcorr {

ZLaurent::ZLaurent(const LambdaPoly& c) { add(0, c); }

ZLaurent ZLaurent::term(const Rational& zexp, const LambdaPoly& c) {
  ZLaurent z;
  z.add(zexp, c);
  return z;
}

void ZLaurent::add(const Rational& e, const LambdaPoly& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

LambdaPoly ZLaurent::coefficient(const Rational& zexp) const {
  auto it = terms_.find(zexp);
  return it == terms_.end() ? LambdaPoly() : it->second;
}

bool ZLaurent::has_positive_power() const { return !terms_.empty() && terms_.rbegin()->first > 0; }
bool ZLaurent::has_negative_power() const { return !terms_.empty() && terms_.begin()->first < 0; }

ZLaurent ZLaurent::negative_part() const {
  ZLaurent z;
  for (const auto& [e, c] : terms_)
    if (e < 0) z.terms_.emplace(e, c);
  return z;
}

ZLaurent ZLaurent::nonnegative_part() const {
  ZLaurent z;
  for (const auto& [e, c] : terms_)
    if (e >= 0) z.terms_.emplace(e, c);
  return z;
}

ZLaurent& ZLaurent::operator+=(const ZLaurent& o) {
  for (const auto& [e, c] : o.terms_) add(e, c);
  return *this;
}

ZLaurent& ZLaurent::operator-=(const ZLaurent& o) {
  for (const auto& [e, c] : o.terms_) add(e, -c);
  return *this;
}

ZLaurent& ZLaurent::operator*=(const LambdaPoly& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

ZLaurent operator*(const ZLaurent& a, const ZLaurent& b) {
  ZLaurent out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add(ea + eb, ca * cb);
  return out;
}

ZLaurent ZLaurent::shifted(const Rational& e) const {
  ZLaurent z;
  for (const auto& [x, c] : terms_) z.terms_.emplace(x + e, c);
  return z;
}

std::string ZLaurent::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (e != 0) os << "*z^" << asymcorr::to_string(e);
  }
  return os.str();
}

ZMatrix ZMatrix::identity(std::size_t n) {
  ZMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = ZLaurent(LambdaPoly(1));
  return m;
}

bool ZMatrix::is_zero() const {
  return std::all_of(data.begin(), data.end(), [](const ZLaurent& z) { return z.is_zero(); });
}

ZMatrix& ZMatrix::operator+=(const ZMatrix& o) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] += o.data[k];
  return *this;
}

ZMatrix& ZMatrix::operator-=(const ZMatrix& o) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] -= o.data[k];
  return *this;
}

ZMatrix operator*(const ZMatrix& a, const ZMatrix& b) {
  ZMatrix out(a.dim);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t k = 0; k < a.dim; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < a.dim; ++j)
        if (!b(k, j).is_zero()) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

ZMatrix MatrixZSeries::at(long n) const {
  auto it = terms.find(n);
  return it == terms.end() ? ZMatrix(dim) : it->second;
}

MatrixZSeries operator*(const MatrixZSeries& a, const MatrixZSeries& b) {
  if (a.dim != b.dim || a.step != b.step) fail(ErrorCode::InvalidInput, "matrix series shapes differ");
  MatrixZSeries out;
  out.dim = a.dim;
  out.step = a.step;
  out.max_index = std::min(a.max_index, b.max_index);
  for (const auto& [na, ma] : a.terms)
    for (const auto& [nb, mb] : b.terms) {
      if (na + nb > out.max_index) break;
      ZMatrix p = ma * mb;
      auto [it, fresh] = out.terms.try_emplace(na + nb, out.dim);
      it->second += p;
    }
  for (auto it = out.terms.begin(); it != out.terms.end();) it = it->second.is_zero() ? out.terms.erase(it) : std::next(it);
  return out;
}

bool MatrixZSeries::operator==(const MatrixZSeries& o) const {
  return dim == o.dim && step == o.step && max_index == o.max_index && terms == o.terms;
}

ZThetaOperator ZThetaOperator::monomial(int theta_power) {
  ZThetaOperator op;
  op.terms.push_back({0, theta_power, LambdaPoly(1)});
  return op;
}

std::string ZThetaOperator::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coeff.to_string() << ")";
    if (t.z_power != 0) os << "*z^" << asymcorr::to_string(t.z_power);
    if (t.theta_power > 0) os << "*(z theta)^" << t.theta_power;
  }
  return first ? "0" : os.str();
}

namespace {

// Vector-valued series over the block entries: index -> components.
using VecSeries = std::map<long, std::vector<ZLaurent>>;

std::size_t position(const std::vector<BasisEntry>& block, const BasisEntry& e) {
  auto it = std::find(block.begin(), block.end(), e);
  return it == block.end() ? block.size() : static_cast<std::size_t>(it - block.begin());
}

// (E v) with E = a lambda + b H acting entrywise on the sector modules.
std::vector<ZLaurent> multiply_e(const std::vector<ZLaurent>& v, const std::vector<BasisEntry>& block,
                                 const Prefactor& e) {
  std::vector<ZLaurent> out(v.size());
  for (std::size_t k = 0; k < block.size(); ++k) {
    if (v[k].is_zero()) continue;
    if (e.lambda_coeff != 0) out[k] += ZLaurent(v[k]) * ZLaurent(LambdaPoly::monomial(e.lambda_coeff, 1));
    if (e.h_coeff != 0) {
      std::size_t up = position(block, {block[k].sector, block[k].h_power + 1});
      if (up < block.size()) {
        ZLaurent t = v[k];
        t *= LambdaPoly(e.h_coeff);
        out[up] += t;
      }
    }
  }
  return out;
}

// (E + z theta) on the stripped series.
VecSeries apply_z_theta(const VecSeries& s, const std::vector<BasisEntry>& block, const Prefactor& e,
                        const Rational& step) {
  VecSeries out;
  for (const auto& [n, v] : s) {
    std::vector<ZLaurent> w = multiply_e(v, block, e);
    Rational eig = step * n;
    if (eig != 0)
      for (std::size_t k = 0; k < v.size(); ++k) {
        ZLaurent t = v[k].shifted(1);
        t *= LambdaPoly(eig);
        w[k] += t;
      }
    out.emplace(n, std::move(w));
  }
  return out;
}

VecSeries stripped_slice(const ZSeries& big_I, const std::vector<BasisEntry>& block) {
  if (big_I.offset != 0) fail(ErrorCode::NotBig, "series has a nonzero base offset");
  VecSeries s;
  for (const auto& [key, cls] : big_I.coeffs) {
    if (std::any_of(key.kbar.begin(), key.kbar.end(), [](int k) { return k != 0; })) continue;
    std::vector<ZLaurent> v(block.size());
    bool any = false;
    for (const auto& [sector, zh] : cls)
      for (const auto& [ze, hp] : zh.parts())
        for (int h = 0; h < hp.nil(); ++h) {
          if (hp[h].is_zero()) continue;
          std::size_t k = position(block, {sector, h});
          if (k == block.size()) continue;
          v[k] += ZLaurent::term(ze, hp[h]);
          any = true;
        }
    if (any) s.emplace(key.k0, std::move(v));
  }
  return s;
}

VecSeries apply_operator(const VecSeries& base, const ZThetaOperator& op, const std::vector<BasisEntry>& block,
                         const Prefactor& e, const Rational& step) {
  int top = 0;
  for (const auto& t : op.terms) top = std::max(top, t.theta_power);
  std::vector<VecSeries> powers{base};
  for (int b = 1; b <= top; ++b) powers.push_back(apply_z_theta(powers.back(), block, e, step));
  VecSeries out;
  for (const auto& t : op.terms)
    for (const auto& [n, v] : powers[static_cast<std::size_t>(t.theta_power)]) {
      auto [it, fresh] = out.try_emplace(n, std::vector<ZLaurent>(block.size()));
      for (std::size_t k = 0; k < v.size(); ++k) {
        ZLaurent c = v[k].shifted(t.z_power - 1);
        c *= t.coeff;
        it->second[k] += c;
      }
    }
  return out;
}

bool certificate_holds(const VecSeries& column, std::size_t i) {
  auto it = column.find(0);
  if (it == column.end()) return false;
  for (std::size_t k = 0; k < it->second.size(); ++k) {
    ZLaurent want = k == i ? ZLaurent(LambdaPoly(1)) : ZLaurent();
    if (it->second[k] != want) return false;
  }
  return std::none_of(column.begin(), column.end(), [](const auto& kv) { return kv.first < 0; });
}

}  // namespace

MatrixZSeries assemble_I_matrix(const ZSeries& big_I, const std::vector<BasisEntry>& block,
                                const std::vector<ZThetaOperator>& operators) {
  const std::size_t n = block.size();
  if (n == 0) fail(ErrorCode::NotBig, "empty block");
  if (operators.size() < n)
    fail(ErrorCode::NotBig, std::to_string(operators.size()) + " operators for rank " + std::to_string(n));
  if (operators.size() > n) fail(ErrorCode::InvalidInput, "more operators than the block rank");
  VecSeries base = stripped_slice(big_I, block);
  MatrixZSeries m;
  m.dim = n;
  m.step = big_I.step;
  m.max_index = big_I.trunc.max_k0;
  for (std::size_t i = 0; i < n; ++i) {
    VecSeries col = apply_operator(base, operators[i], block, big_I.prefactor, big_I.step);
    if (!certificate_holds(col, i))
      fail(ErrorCode::NotBig, "column " + std::to_string(i) + " (" + operators[i].to_string() +
                                  ") is not phi_" + std::to_string(i) + " + O(v)");
    for (const auto& [k, v] : col)
      for (std::size_t r = 0; r < n; ++r) {
        if (v[r].is_zero()) continue;
        auto [it, fresh] = m.terms.try_emplace(k, n);
        it->second(r, i) = v[r];
      }
  }
  return m;
}

std::vector<ZThetaOperator> search_operators(const ZSeries& big_I, const std::vector<BasisEntry>& block) {
  const std::size_t n = block.size();
  if (n == 0) fail(ErrorCode::NotBig, "empty block");
  VecSeries base = stripped_slice(big_I, block);
  std::vector<VecSeries> columns;
  for (std::size_t b = 0; b <= n; ++b)
    columns.push_back(apply_operator(base, ZThetaOperator::monomial(static_cast<int>(b)), block, big_I.prefactor,
                                     big_I.step));
  std::vector<ZThetaOperator> ops;
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t b = 0; b <= n && !found; ++b)
      if (certificate_holds(columns[b], i)) {
        ops.push_back(ZThetaOperator::monomial(static_cast<int>(b)));
        found = true;
      }
    if (!found)
      fail(ErrorCode::NotBig, "no (z theta)^b with b <= " + std::to_string(n) + " gives phi_" + std::to_string(i));
  }
  return ops;
}

Factorization factorize(const MatrixZSeries& m, const Rational& order) {
  const std::size_t n = m.dim;
  if (m.at(0) != ZMatrix::identity(n)) fail(ErrorCode::ObstructedFactorization, "order-0 term is not the identity");
  if (!m.terms.empty() && m.terms.begin()->first < 0)
    fail(ErrorCode::ObstructedFactorization, "negative base order present");
  long top = floor_long(order / m.step);
  if (top > m.max_index)
    fail(ErrorCode::TruncationTooSmall, "order exceeds the truncation of the input matrix");
  Factorization f;
  for (MatrixZSeries* s : {&f.j, &f.y}) {
    s->dim = n;
    s->step = m.step;
    s->max_index = top;
    s->terms.emplace(0, ZMatrix::identity(n));
  }
  for (long k = 1; k <= top; ++k) {
    // M_k = J_k + Y_k + sum_{a=1}^{k-1} J_a Y_{k-a}
    ZMatrix r = m.at(k);
    for (const auto& [a, ja] : f.j.terms) {
      if (a == 0) continue;
      if (a >= k) break;
      auto yb = f.y.terms.find(k - a);
      if (yb != f.y.terms.end()) r -= ja * yb->second;
    }
    if (r.is_zero()) continue;
    ZMatrix jk(n), yk(n);
    for (std::size_t e = 0; e < r.data.size(); ++e) {
      jk.data[e] = r.data[e].negative_part();
      yk.data[e] = r.data[e].nonnegative_part();
    }
    if (!jk.is_zero()) f.j.terms.emplace(k, std::move(jk));
    if (!yk.is_zero()) f.y.terms.emplace(k, std::move(yk));
  }
  return f;
}

std::optional<MirrorMap> mirror_map(const Factorization& f, const std::vector<BasisEntry>& block,
                                    const Prefactor& prefactor) {
  std::size_t unit = position(block, {0, 0});
  if (unit == block.size()) return std::nullopt;
  MirrorMap mm;
  mm.log_part = prefactor;
  for (const auto& [k, jk] : f.j.terms) {
    if (k == 0) continue;
    std::vector<LambdaPoly> t(block.size());
    bool any = false;
    for (std::size_t r = 0; r < block.size(); ++r) {
      // z^0 coefficient of z J_k e_unit
      t[r] = jk(r, unit).coefficient(-1);
      any = any || !t[r].is_zero();
    }
    if (any) mm.tau.emplace(k, std::move(t));
  }
  return mm;
}

PdeResidual pde_residual(const MatrixZSeries& j, const std::vector<BasisEntry>& block, const Prefactor& prefactor) {
  const std::size_t n = j.dim;
  // D_k = E J_k + z theta J_k
  std::map<long, ZMatrix> d;
  for (const auto& [k, jk] : j.terms) {
    ZMatrix dk(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<ZLaurent> col(n);
      for (std::size_t r = 0; r < n; ++r) col[r] = jk(r, c);
      std::vector<ZLaurent> ec = multiply_e(col, block, prefactor);
      Rational eig = j.step * k;
      for (std::size_t r = 0; r < n; ++r) {
        ZLaurent t = jk(r, c).shifted(1);
        t *= LambdaPoly(eig);
        dk(r, c) = ec[r] + t;
      }
    }
    if (!dk.is_zero()) d.emplace(k, std::move(dk));
  }
  PdeResidual out;
  for (const auto& [k, dk] : d) {
    ZMatrix a(n);
    for (std::size_t e = 0; e < dk.data.size(); ++e) a.data[e] = ZLaurent(dk.data[e].coefficient(0));
    if (!a.is_zero()) out.connection.emplace(k, std::move(a));
  }
  for (long k = 0; k <= j.max_index; ++k) {
    // D_k - sum_{a+b=k} J_a A_b
    ZMatrix res = d.count(k) ? d.at(k) : ZMatrix(n);
    for (const auto& [b, ab] : out.connection) {
      if (b > k) break;
      auto ja = j.terms.find(k - b);
      if (ja != j.terms.end()) res -= ja->second * ab;
    }
    if (!res.is_zero()) {
      out.first_failure = k;
      return out;
    }
    out.verified_to = k;
  }
  return out;
}

std::vector<BirkhoffBlock> birkhoff_all(const GroupData& group, const Rational& order) {
  Truncation trunc;
  trunc.max_k0 = std::max(1L, floor_long(order * group.input.d));
  ZSeries iy = build_IY_z(group, trunc);
  SectorBasis basis = SectorBasis::make(group, SpaceTag::Y);
  std::vector<BirkhoffBlock> out;
  for (std::size_t g : group.gbar_elements) {
    BirkhoffBlock b;
    b.gbar = g;
    b.block = basis.block(group, g);
    try {
      b.operators = search_operators(iy, b.block);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotBig) throw;
      b.not_big = e.what();
      out.push_back(std::move(b));
      continue;
    }
    b.i_matrix = assemble_I_matrix(iy, b.block, b.operators);
    b.factors = factorize(b.i_matrix, order);
    MatrixZSeries m = b.i_matrix;
    m.max_index = b.factors.j.max_index;
    for (auto it = m.terms.begin(); it != m.terms.end();) it = it->first > m.max_index ? m.terms.erase(it) : std::next(it);
    b.recomposes = b.factors.j * b.factors.y == m;
    b.mirror = mirror_map(b.factors, b.block, iy.prefactor);
    b.pde = pde_residual(b.factors.j, b.block, iy.prefactor);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace asymcorr
