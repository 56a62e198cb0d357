#pragma once

#include "asymcorr/group.hpp"

namespace asymcorr::test {

inline GroupData c3z2() { return enumerate_group(make_fermat_input(2, {1, 1, 1}), {}); }
inline GroupData quartic() { return enumerate_group(make_fermat_input(4, {1, 1, 1}), {}); }
inline GroupData split_group() {
  return enumerate_group(make_fermat_input(4, {1, 1, 2}),
                         {GroupElement({Rational(1, 4), Rational(3, 4), Rational(0)})}, true);
}

}  // namespace asymcorr::test
