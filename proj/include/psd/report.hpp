#pragma once

#include <map>
#include <string>

namespace psd {

struct MomentReport {
  double normalization = 0;
  double lz = 0;
  double l2 = 0;
  double error = 0;  // quadrature error estimate (0 when the rule is exact)
  std::map<std::string, double> extra;
};

}  // namespace psd
