#pragma once

#include <json.hpp>

#include "asymcorr/birkhoff.hpp"
#include "asymcorr/connection.hpp"
#include "asymcorr/picard_fuchs.hpp"

namespace asymcorr {

using Json = nlohmann::ordered_json;

// Rationals as "num/den"; complex numbers as [re, im] decimal strings.
Json to_json(const Rational& x);
Json to_json(const Real& x, int digits);
Json to_json(const Complex& z, int digits);
Json to_json(const ComplexRational& z);
// [[exponent, "num/den"], ...]
Json to_json(const LambdaPoly& p);
Json to_json(const BasisEntry& e);
Json to_json(const QSeries& s);
Json to_json(const ThetaOperator& op);
Json to_json(const ConnectionMatrix& cm, int digits);
Json to_json(const ZLaurent& z);
Json to_json(const BirkhoffBlock& b);

// "a/b", an integer, or a decimal "[-]d[.d][e[-]d]" read exactly.
Rational parse_exact(const std::string& text);

}  // namespace asymcorr
