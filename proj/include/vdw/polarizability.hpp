#pragma once

// Atomic dynamic polarizability alpha(i xi), in atomic units (bohr^3).

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

// pchip.hpp calls unqualified isnan; boost::math::isnan must be declared first.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "vdw/errors.hpp"
#include "vdw/optics.hpp"
#include "vdw/physconst.hpp"

namespace vdw {

struct OscillatorAlpha {
  double alpha0 = 0.0;  // a.u.
  double omega0 = 0.0;  // rad/s
};

struct StaticAlpha {
  double alpha0 = 0.0;
};

// Tabulated alpha(i xi). Interpolation is monotone cubic (PCHIP) in
// x = log(1 + xi / E_h-frequency), y = log(alpha); the first sample is xi = 0.
class TabulatedAlpha {
 public:
  TabulatedAlpha(std::vector<double> xi, std::vector<double> alpha, std::string provenance = {})
      : xi_(std::move(xi)), alpha_(std::move(alpha)), provenance_(std::move(provenance)) {
    if (xi_.empty() || xi_.size() != alpha_.size()) throw ValidationError("polarizability table is empty");
    if (xi_.front() != 0.0) throw ValidationError("polarizability table must start at xi = 0 (static value)");
    for (std::size_t i = 0; i < xi_.size(); ++i) {
      if (!(alpha_[i] > 0.0) || !std::isfinite(alpha_[i]))
        throw ValidationError("polarizability values must be positive");
      if (i > 0 && !(xi_[i] > xi_[i - 1])) throw ValidationError("polarizability frequencies must increase");
      if (i > 0 && alpha_[i] > alpha_[i - 1])
        throw ValidationError("polarizability must be non-increasing in xi");
    }
    if (xi_.size() >= 4) {
      std::vector<double> x, y;
      for (std::size_t i = 0; i < xi_.size(); ++i) {
        x.push_back(transform(xi_[i]));
        y.push_back(std::log(alpha_[i]));
      }
      spline_ = std::make_shared<const Spline>(std::move(x), std::move(y));
    }
  }

  double alpha0() const { return alpha_.front(); }
  double xi_max() const { return xi_.back(); }
  std::size_t size() const { return xi_.size(); }
  const std::string& provenance() const { return provenance_; }

  double operator()(double xi) const {
    if (xi > xi_max()) {
      std::ostringstream os;
      os << "polarizability table '" << provenance_ << "' ends at xi = " << xi_max()
         << " rad/s; requested " << xi;
      throw RangeError(os.str());
    }
    if (xi_.size() == 1) return alpha_.front();
    const double x = transform(xi);
    if (spline_) return std::exp((*spline_)(x));
    std::size_t i = 1;
    while (i + 1 < xi_.size() && xi_[i] < xi) ++i;
    const double x0 = transform(xi_[i - 1]);
    const double x1 = transform(xi_[i]);
    const double t = (x - x0) / (x1 - x0);
    return std::exp(std::log(alpha_[i - 1]) + t * (std::log(alpha_[i]) - std::log(alpha_[i - 1])));
  }

 private:
  using Spline = boost::math::interpolators::pchip<std::vector<double>>;

  static double transform(double xi) { return std::log1p(phys::angular_to_au(xi)); }

  std::vector<double> xi_;
  std::vector<double> alpha_;
  std::string provenance_;
  std::shared_ptr<const Spline> spline_;
};

class PolarizabilityModel {
 public:
  using Variant = std::variant<TabulatedAlpha, OscillatorAlpha, StaticAlpha>;

  static PolarizabilityModel oscillator(double alpha0_au, double omega0) {
    if (!(alpha0_au > 0.0) || !(omega0 > 0.0))
      throw ConfigError("oscillator polarizability needs alpha0 > 0 and omega0 > 0");
    return PolarizabilityModel(OscillatorAlpha{alpha0_au, omega0});
  }
  static PolarizabilityModel static_alpha(double alpha0_au) {
    if (!(alpha0_au > 0.0)) throw ConfigError("static polarizability must be > 0");
    return PolarizabilityModel(StaticAlpha{alpha0_au});
  }
  static PolarizabilityModel tabulated(TabulatedAlpha table) { return PolarizabilityModel(std::move(table)); }

  const Variant& variant() const { return model_; }

  double alpha0() const {
    return std::visit(
        [](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, TabulatedAlpha>) return m.alpha0();
          else return m.alpha0;
        },
        model_);
  }

  /// Highest frequency the model can be evaluated at (inf for closed forms).
  double xi_max() const {
    if (const auto* t = std::get_if<TabulatedAlpha>(&model_)) return t->xi_max();
    return std::numeric_limits<double>::infinity();
  }

  double eval(double xi) const {
    if (!(xi >= 0.0)) throw DomainError("eval_alpha: xi must be >= 0");
    return std::visit(
        [xi](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, TabulatedAlpha>) {
            return m(xi);
          } else if constexpr (std::is_same_v<T, OscillatorAlpha>) {
            const double r = xi / m.omega0;
            return m.alpha0 / (1.0 + r * r);
          } else {
            return m.alpha0;
          }
        },
        model_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& m) -> std::string {
          using T = std::decay_t<decltype(m)>;
          std::ostringstream os;
          if constexpr (std::is_same_v<T, TabulatedAlpha>) {
            os << "tabulated(" << m.provenance() << ")";
          } else if constexpr (std::is_same_v<T, OscillatorAlpha>) {
            os << "oscillator(" << m.alpha0 << "," << phys::angular_to_ev(m.omega0) << " eV)";
          } else {
            os << "static(" << m.alpha0 << ")";
          }
          return os.str();
        },
        model_);
  }

 private:
  explicit PolarizabilityModel(Variant v) : model_(std::move(v)) {}
  Variant model_;
};

inline double eval_alpha(const PolarizabilityModel& model, double xi) { return model.eval(xi); }

/// Reads `# columns: xi_au,alpha_au` or `# columns: xi_eV,alpha_au` CSV.
inline PolarizabilityModel load_alpha_table(std::istream& in, std::string provenance = {}) {
  enum class Unit { unknown, au, ev } unit = Unit::unknown;
  std::vector<double> xi, alpha;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (auto cols = detail::columns_header(view)) {
        if (*cols == "xi_au,alpha_au") unit = Unit::au;
        else if (*cols == "xi_eV,alpha_au") unit = Unit::ev;
        else throw ParseError("line " + std::to_string(line_no) + ": unknown column layout '" + *cols + "'");
      }
      continue;
    }
    if (unit == Unit::unknown)
      throw ParseError("line " + std::to_string(line_no) + ": data before '# columns:' header");
    const auto fields = detail::split(view, ',');
    if (fields.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": expected 2 columns");
    const auto x = detail::parse_double(fields[0]);
    const auto a = detail::parse_double(fields[1]);
    if (!x || !a) throw ParseError("line " + std::to_string(line_no) + ": bad number");
    if (*x < 0.0) throw ValidationError("line " + std::to_string(line_no) + ": xi must be >= 0");
    xi.push_back(unit == Unit::au ? phys::au_to_angular(*x) : phys::ev_to_angular(*x));
    alpha.push_back(*a);
  }
  return PolarizabilityModel::tabulated(TabulatedAlpha(std::move(xi), std::move(alpha), std::move(provenance)));
}

inline PolarizabilityModel load_alpha_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open polarizability table '" + path + "'");
  return load_alpha_table(in, path);
}

}  // namespace vdw
