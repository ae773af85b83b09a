#pragma once

// Plot-ready CSV text for curves.

#include <span>
#include <string>

#include "polydens/charfn.hpp"
#include "polydens/functionals.hpp"

namespace polydens {

/// "eps,value" rows.
std::string curve_csv(const ModulusCurve& curve);
/// "eps,ratio" rows.
std::string ratio_csv(std::span<const double> eps, std::span<const double> ratios);
/// "t,modulus,stderr" rows.
std::string cf_csv(const CfCurve& curve);

}  // namespace polydens
