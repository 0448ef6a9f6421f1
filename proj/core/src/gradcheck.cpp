#include "edgewise/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "edgewise/errors.hpp"

namespace edgewise {

namespace {
constexpr double kDenomFloor = 1e-4;
}

double gradient_rel_error(double analytic, double numeric) {
  const double diff = std::abs(analytic - numeric);
  if (diff == 0.0) return 0.0;
  return diff / std::max(std::abs(analytic) + std::abs(numeric), kDenomFloor);
}

GradCheckReport finite_diff_check(Parameters& params,
                                  const std::function<double(const Parameters&)>& loss,
                                  const GradientMap& analytic, double h, double tol) {
  if (h <= 0.0) throw InvalidArgument("finite_diff_check: h must be positive");
  GradCheckReport report;
  for (const std::string& name : params.names()) {
    Dense& value = params.at(name);
    auto it = analytic.find(name);
    if (it == analytic.end()) {
      throw LookupError("finite_diff_check: no analytic gradient for '" + name + "'");
    }
    const Dense& grad = it->second;
    if (!grad.same_shape(value)) {
      throw ContractError("finite_diff_check: gradient shape mismatch for '" + name +
                          "'");
    }
    GradCheckEntry entry;
    entry.name = name;
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double saved = value[i];
      value[i] = saved + h;
      const double plus = loss(params);
      value[i] = saved - h;
      const double minus = loss(params);
      value[i] = saved;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw NumericError("finite_diff_check: loss is non-finite near '" + name + "'");
      }
      const double numeric = (plus - minus) / (2.0 * h);
      const double rel = gradient_rel_error(grad[i], numeric);
      if (rel >= entry.max_rel_error) {
        // >= so the zero-error case still records a witness entry
        if (rel > entry.max_rel_error || entry.max_rel_error == 0.0) {
          entry.worst_index = i;
          entry.analytic = grad[i];
          entry.numeric = numeric;
        }
        entry.max_rel_error = rel;
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.per_param.push_back(std::move(entry));
  }
  report.pass = report.max_rel_error < tol;
  return report;
}

}  // namespace edgewise
