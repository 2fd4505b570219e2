#include "drgspin/report.hpp"

#include <iomanip>
#include <sstream>

namespace drgspin {

json complex_to_json(cx v) {
  return json{{"re", v.real()}, {"im", v.imag()}};
}

json residuals_to_json(const ResidualMap& m) {
  json out = json::object();
  for (const auto& [name, check] : m.entries()) {
    if (check.skipped)
      out[name] = json{{"skipped", check.reason}};
    else
      out[name] = check.value;
  }
  return out;
}

std::string residuals_to_text(const ResidualMap& m, double tol) {
  std::ostringstream os;
  for (const auto& [name, check] : m.entries()) {
    os << "  " << std::left << std::setw(44) << name;
    if (check.skipped) {
      os << "SKIP  (" << check.reason << ")\n";
    } else {
      os << std::scientific << std::setprecision(3) << check.value
         << (check.value < tol ? "  ok" : "  FAIL") << "\n";
    }
  }
  return os.str();
}

}  // namespace drgspin
