#include "polydens/report.hpp"

#include "polydens/error.hpp"
#include "polydens/io.hpp"

namespace polydens {

namespace {

std::string two_columns(const char* header, std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), Errc::InvalidArgument, "columns differ in length");
  std::string out = header;
  out += '\n';
  for (std::size_t k = 0; k < a.size(); ++k) {
    out += format_double(a[k]);
    out += ',';
    out += format_double(b[k]);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string curve_csv(const ModulusCurve& curve) { return two_columns("eps,value", curve.eps, curve.values); }

std::string ratio_csv(std::span<const double> eps, std::span<const double> ratios) {
  return two_columns("eps,ratio", eps, ratios);
}

std::string cf_csv(const CfCurve& curve) {
  std::string out = "t,modulus,stderr\n";
  for (const auto& p : curve.points) {
    out += format_double(p.t) + ',' + format_double(p.modulus) + ',' + format_double(p.std_error) + '\n';
  }
  return out;
}

}  // namespace polydens
