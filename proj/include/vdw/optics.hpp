#pragma once

// Wall-material optics: tabulated absorption Im eps(omega) on the real axis,
// the dispersion relation to the imaginary axis, and the closed-form
// dielectric models (Drude, plasma, static, ideal metal).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "vdw/errors.hpp"
#include "vdw/physconst.hpp"
#include "vdw/quadrature.hpp"

namespace vdw {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return v;
}

// Value of a "# columns: ..." header line, or empty when the line is not one.
inline std::optional<std::string> columns_header(std::string_view line) {
  line = trim(line);
  if (line.empty() || line.front() != '#') return std::nullopt;
  line = trim(line.substr(1));
  constexpr std::string_view key = "columns:";
  if (line.substr(0, key.size()) != key) return std::nullopt;
  std::string cols;
  for (char ch : line.substr(key.size())) {
    if (ch != ' ' && ch != '\t' && ch != '\r') cols.push_back(ch);
  }
  return cols;
}

}  // namespace detail

/// Im eps of a medium with complex refractive index n + ik.
inline double im_eps_from_nk(double n, double k) {
  if (!(n >= 0.0) || !(k >= 0.0)) throw DomainError("im_eps_from_nk: n and k must be >= 0");
  return 2.0 * n * k;
}

/// Imaginary part of the Drude permittivity 1 - wp^2 / (w (w + i gamma)).
inline double drude_im_eps(double omega, double omega_p, double gamma) {
  if (!(omega > 0.0)) throw DomainError("drude_im_eps: omega must be > 0");
  return omega_p * omega_p * gamma / (omega * (omega * omega + gamma * gamma));
}

struct OpticalSample {
  double omega = 0.0;   // rad/s
  double im_eps = 0.0;  // dimensionless
};

// Sampled Im eps(omega) on the real frequency axis, strictly increasing in
// omega, all frequencies positive, all values non-negative. Values below
// negligible_im_eps are stored as zero.
class OpticalTable {
 public:
  static constexpr double negligible_im_eps = 1e-200;

  OpticalTable(std::vector<OpticalSample> samples, std::string provenance = {})
      : samples_(std::move(samples)), provenance_(std::move(provenance)) {
    if (samples_.empty()) throw ValidationError("optical table is empty");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto& s = samples_[i];
      if (!std::isfinite(s.omega) || !std::isfinite(s.im_eps))
        throw ValidationError("optical table contains a non-finite value");
      if (!(s.omega > 0.0)) throw ValidationError("optical table frequencies must be > 0");
      if (s.im_eps < 0.0) throw ValidationError("optical table Im eps must be >= 0");
      if (i > 0 && !(s.omega > samples_[i - 1].omega))
        throw ValidationError("optical table frequencies must be strictly increasing");
    }
    for (auto& s : samples_) {
      if (s.im_eps < negligible_im_eps) s.im_eps = 0.0;
    }
  }

  std::span<const OpticalSample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double omega_min() const { return samples_.front().omega; }
  double omega_max() const { return samples_.back().omega; }
  const std::string& provenance() const { return provenance_; }

  /// Interpolated Im eps; zero outside [omega_min, omega_max]. Log-log
  /// between samples, linear-linear on segments with a zero endpoint.
  double im_eps(double omega) const {
    if (omega < omega_min() || omega > omega_max()) return 0.0;
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), omega,
                                     [](double w, const OpticalSample& s) { return w < s.omega; });
    if (it == samples_.end()) return samples_.back().im_eps;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (lo.im_eps > 0.0 && hi.im_eps > 0.0) {
      const double p = std::log(hi.im_eps / lo.im_eps) / std::log(hi.omega / lo.omega);
      return lo.im_eps * std::pow(omega / lo.omega, p);
    }
    const double t = (omega - lo.omega) / (hi.omega - lo.omega);
    return lo.im_eps + t * (hi.im_eps - lo.im_eps);
  }

 private:
  std::vector<OpticalSample> samples_;
  std::string provenance_;
};

/// Reads the optical-table CSV format:
///
///   # columns: energy_eV,n,k        (or energy_eV,im_eps)
///   0.125,12.1,69.2
///
/// Other '#' lines are comments. Energies must be non-decreasing; repeated
/// energies collapse to one sample with the later row winning.
inline OpticalTable load_optical_table(std::istream& in, std::string provenance = {}) {
  enum class Layout { unknown, nk, im_eps } layout = Layout::unknown;
  std::vector<OpticalSample> samples;
  double last_energy = -1.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (auto cols = detail::columns_header(view)) {
        if (*cols == "energy_eV,n,k") {
          layout = Layout::nk;
        } else if (*cols == "energy_eV,im_eps") {
          layout = Layout::im_eps;
        } else {
          throw ParseError("line " + std::to_string(line_no) + ": unknown column layout '" + *cols + "'");
        }
      }
      continue;
    }
    if (layout == Layout::unknown)
      throw ParseError("line " + std::to_string(line_no) + ": data before '# columns:' header");
    const auto fields = detail::split(view, ',');
    const std::size_t expected = layout == Layout::nk ? 3 : 2;
    if (fields.size() != expected)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                       " columns, got " + std::to_string(fields.size()));
    std::vector<double> v;
    for (auto f : fields) {
      auto d = detail::parse_double(f);
      if (!d) throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
      v.push_back(*d);
    }
    const double energy = v[0];
    if (energy < last_energy)
      throw ParseError("line " + std::to_string(line_no) + ": energies must be non-decreasing");
    double im = 0.0;
    if (layout == Layout::nk) {
      if (v[1] < 0.0 || v[2] < 0.0)
        throw ValidationError("line " + std::to_string(line_no) + ": n and k must be >= 0");
      im = im_eps_from_nk(v[1], v[2]);
    } else {
      if (v[1] < 0.0) throw ValidationError("line " + std::to_string(line_no) + ": Im eps must be >= 0");
      im = v[1];
    }
    if (!(energy > 0.0)) throw ValidationError("line " + std::to_string(line_no) + ": energy must be > 0");
    const OpticalSample sample{phys::ev_to_angular(energy), im};
    if (energy == last_energy) {
      samples.back() = sample;
    } else {
      samples.push_back(sample);
    }
    last_energy = energy;
  }
  if (samples.empty()) throw ValidationError("optical table has no data rows");
  return OpticalTable(std::move(samples), std::move(provenance));
}

inline OpticalTable load_optical_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open optical table '" + path + "'");
  return load_optical_table(in, path);
}

struct NoExtension {};

// Drude absorption used below the first tabulated frequency.
struct DrudeExtension {
  double omega_p = 0.0;  // rad/s
  double gamma = 0.0;    // rad/s
};

using LowFreqExtension = std::variant<NoExtension, DrudeExtension>;

inline void validate(const LowFreqExtension& ext) {
  if (const auto* d = std::get_if<DrudeExtension>(&ext)) {
    if (!(d->omega_p > 0.0) || !(d->gamma > 0.0))
      throw ConfigError("Drude extension requires omega_p > 0 and gamma > 0");
  }
}

struct KkOptions {
  double rel_tol = 1e-8;
  int subdivisions = 1;  // quadrature panels per table segment
};

struct KkResult {
  double eps = 1.0;
  // Relative bound on the part of the integral above omega_max, assuming an
  // omega^-3 absorption tail. Reported only; not added to eps.
  double truncation_bound = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// (2/pi)-less integral of Drude w Im eps / (w^2 + xi^2) over (0, omega_max].
inline double drude_kk_segment(const DrudeExtension& d, double omega_max, double xi, std::size_t& evals) {
  const double g = d.gamma;
  const double wp2 = d.omega_p * d.omega_p;
  if (std::abs(xi - g) > 1e-3 * g) {
    const double bracket = std::atan(omega_max / g) / g - std::atan(omega_max / xi) / xi;
    return wp2 * g * bracket / (xi * xi - g * g);
  }
  // w = g tan(theta) absorbs the Lorentzian peak at w ~ g.
  auto f = [&](double theta) {
    const double w = g * std::tan(theta);
    return wp2 / (w * w + xi * xi);
  };
  const auto r = integrate_adaptive(f, 0.0, std::atan(omega_max / g), {.rel_tol = 1e-12});
  evals += r.evaluations;
  return r.value;
}

// Integral over the tabulated range, evaluated segment by segment. xi may be
// zero here (static limit of a dielectric).
inline double table_kk_integral(const OpticalTable& table, double xi, const KkOptions& opts,
                                std::size_t& evals) {
  const auto s = table.samples();
  const double xi2 = xi * xi;
  const QuadratureOptions qopts{.rel_tol = opts.rel_tol};
  const int panels = std::max(1, opts.subdivisions);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const auto& lo = s[i];
    const auto& hi = s[i + 1];
    if (lo.im_eps == 0.0 && hi.im_eps == 0.0) continue;
    if (lo.im_eps > 0.0 && hi.im_eps > 0.0) {
      // Power law in u = ln(omega): Im eps = lo * exp(p (u - u_lo)).
      const double u0 = std::log(lo.omega);
      const double u1 = std::log(hi.omega);
      const double log_lo = std::log(lo.im_eps);
      const double p = (std::log(hi.im_eps) - log_lo) / (u1 - u0);
      auto f = [&](double u) {
        const double w = std::exp(u);
        const double w2 = w * w;
        return w2 * std::exp(log_lo + p * (u - u0)) / (w2 + xi2);
      };
      const double h = (u1 - u0) / panels;
      for (int k = 0; k < panels; ++k) {
        const auto r = integrate_adaptive(f, u0 + k * h, k + 1 == panels ? u1 : u0 + (k + 1) * h, qopts);
        total += r.value;
        evals += r.evaluations;
      }
    } else {
      const double slope = (hi.im_eps - lo.im_eps) / (hi.omega - lo.omega);
      auto f = [&](double w) { return w * (lo.im_eps + slope * (w - lo.omega)) / (w * w + xi2); };
      const double h = (hi.omega - lo.omega) / panels;
      for (int k = 0; k < panels; ++k) {
        const auto r = integrate_adaptive(
            f, lo.omega + k * h, k + 1 == panels ? hi.omega : lo.omega + (k + 1) * h, qopts);
        total += r.value;
        evals += r.evaluations;
      }
    }
  }
  return total;
}

inline KkResult kk_transform_unchecked(const OpticalTable& table, const LowFreqExtension& ext, double xi,
                                       const KkOptions& opts) {
  KkResult out;
  double integral = table_kk_integral(table, xi, opts, out.evaluations);
  if (const auto* d = std::get_if<DrudeExtension>(&ext)) {
    integral += drude_kk_segment(*d, table.omega_min(), xi, out.evaluations);
  }
  out.eps = 1.0 + (2.0 / phys::pi) * integral;
  const double tail = (2.0 / phys::pi) * table.samples().back().im_eps / 3.0;
  out.truncation_bound = tail / out.eps;
  return out;
}

}  // namespace detail

/// eps(i xi) = 1 + (2/pi) Int_0^inf w Im eps(w) / (w^2 + xi^2) dw, with the
/// low-frequency extension on (0, omega_min), log-log interpolated table data
/// on [omega_min, omega_max], and nothing above omega_max.
inline KkResult kk_transform(const OpticalTable& table, const LowFreqExtension& ext, double xi,
                             const KkOptions& opts = {}) {
  if (!(xi > 0.0)) throw DomainError("kk_eps_imag_axis: xi must be > 0");
  validate(ext);
  return detail::kk_transform_unchecked(table, ext, xi, opts);
}

inline double kk_eps_imag_axis(const OpticalTable& table, const LowFreqExtension& ext, double xi,
                               const KkOptions& opts = {}) {
  return kk_transform(table, ext, xi, opts).eps;
}

/// (eps(i0) - 1) / (eps(i0) + 1), the zero-frequency reflectivity.
struct StaticRatio {
  double value = 0.0;
};

inline constexpr double ideal_metal_eps = std::numeric_limits<double>::infinity();

inline bool is_ideal_metal(double eps) { return std::isinf(eps) && eps > 0.0; }

struct TabulatedKk {
  std::shared_ptr<const OpticalTable> table;
  LowFreqExtension extension;
  std::optional<double> eps0;  // static permittivity of a dielectric, if known
  bool metallic = false;
  KkOptions options;
};

struct DrudeModel {
  double omega_p = 0.0;
  double gamma = 0.0;
};

struct PlasmaModel {
  double omega_p = 0.0;
};

struct StaticPermittivity {
  double eps0 = 1.0;
};

struct IdealMetal {};

// Wall permittivity on the imaginary frequency axis. Evaluation is pure.
// The ideal metal evaluates to +inf, which downstream formulas treat as the
// exact eps -> inf limit.
class DielectricModel {
 public:
  using Variant = std::variant<TabulatedKk, DrudeModel, PlasmaModel, StaticPermittivity, IdealMetal>;

  static DielectricModel tabulated(OpticalTable table, LowFreqExtension ext = NoExtension{},
                                   std::optional<double> eps0 = std::nullopt, bool metallic = false,
                                   KkOptions options = {}) {
    validate(ext);
    const bool has_drude = std::holds_alternative<DrudeExtension>(ext);
    if (metallic && !has_drude)
      throw ConfigError("tabulated metal '" + table.provenance() +
                        "' needs a low-frequency (Drude) extension");
    if (eps0 && !(*eps0 >= 1.0)) throw ConfigError("static permittivity must be >= 1");
    return DielectricModel(TabulatedKk{std::make_shared<const OpticalTable>(std::move(table)), ext, eps0,
                                       metallic || has_drude, options});
  }
  static DielectricModel drude(double omega_p, double gamma) {
    if (!(omega_p > 0.0) || !(gamma > 0.0)) throw ConfigError("Drude model needs omega_p > 0, gamma > 0");
    return DielectricModel(DrudeModel{omega_p, gamma});
  }
  static DielectricModel plasma(double omega_p) {
    if (!(omega_p > 0.0)) throw ConfigError("plasma model needs omega_p > 0");
    return DielectricModel(PlasmaModel{omega_p});
  }
  static DielectricModel static_eps(double eps0) {
    if (!(eps0 >= 1.0) || !std::isfinite(eps0)) throw ConfigError("static permittivity must be finite and >= 1");
    return DielectricModel(StaticPermittivity{eps0});
  }
  static DielectricModel ideal_metal() { return DielectricModel(IdealMetal{}); }

  const Variant& variant() const { return model_; }
  bool is_ideal() const { return std::holds_alternative<IdealMetal>(model_); }

  bool is_metal() const {
    return std::visit(
        [](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, TabulatedKk>) return m.metallic;
          else return !std::is_same_v<T, StaticPermittivity>;
        },
        model_);
  }

  /// eps(i xi) for xi >= 0. At xi = 0 metals give +inf.
  double eval(double xi) const { return eval_detailed(xi).eps; }

  KkResult eval_detailed(double xi) const {
    if (!(xi >= 0.0)) throw DomainError("eval_dielectric: xi must be >= 0");
    return std::visit(
        [xi](const auto& m) -> KkResult {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, TabulatedKk>) {
            if (xi == 0.0) {
              if (m.metallic) return {ideal_metal_eps, 0.0, 0};
              if (m.eps0) return {*m.eps0, 0.0, 0};
              return detail::kk_transform_unchecked(*m.table, m.extension, 0.0, m.options);
            }
            return detail::kk_transform_unchecked(*m.table, m.extension, xi, m.options);
          } else if constexpr (std::is_same_v<T, DrudeModel>) {
            if (xi == 0.0) return {ideal_metal_eps, 0.0, 0};
            return {1.0 + m.omega_p * m.omega_p / (xi * (xi + m.gamma)), 0.0, 0};
          } else if constexpr (std::is_same_v<T, PlasmaModel>) {
            if (xi == 0.0) return {ideal_metal_eps, 0.0, 0};
            const double r = m.omega_p / xi;
            return {1.0 + r * r, 0.0, 0};
          } else if constexpr (std::is_same_v<T, StaticPermittivity>) {
            return {m.eps0, 0.0, 0};
          } else {
            return {ideal_metal_eps, 0.0, 0};
          }
        },
        model_);
  }

  StaticRatio static_ratio() const {
    if (is_metal()) return {1.0};
    const double e0 = eval(0.0);
    return {(e0 - 1.0) / (e0 + 1.0)};
  }

  std::string describe() const {
    return std::visit(
        [](const auto& m) -> std::string {
          using T = std::decay_t<decltype(m)>;
          std::ostringstream os;
          if constexpr (std::is_same_v<T, TabulatedKk>) {
            os << "tabulated(" << m.table->provenance();
            if (const auto* d = std::get_if<DrudeExtension>(&m.extension))
              os << ", drude " << phys::angular_to_ev(d->omega_p) << "," << phys::angular_to_ev(d->gamma) << " eV";
            if (m.eps0) os << ", eps0 " << *m.eps0;
            os << ")";
          } else if constexpr (std::is_same_v<T, DrudeModel>) {
            os << "drude(" << phys::angular_to_ev(m.omega_p) << "," << phys::angular_to_ev(m.gamma) << " eV)";
          } else if constexpr (std::is_same_v<T, PlasmaModel>) {
            os << "plasma(" << phys::angular_to_ev(m.omega_p) << " eV)";
          } else if constexpr (std::is_same_v<T, StaticPermittivity>) {
            os << "static(" << m.eps0 << ")";
          } else {
            os << "ideal";
          }
          return os.str();
        },
        model_);
  }

 private:
  explicit DielectricModel(Variant v) : model_(std::move(v)) {}
  Variant model_;
};

inline double eval_dielectric(const DielectricModel& model, double xi) { return model.eval(xi); }
inline StaticRatio static_ratio(const DielectricModel& model) { return model.static_ratio(); }

struct EpsGrid {
  std::vector<double> xi;
  std::vector<double> eps;
  double max_truncation_bound = 0.0;
};

/// eps at every frequency in `xis` (ascending), computed once for reuse.
inline EpsGrid build_eps_grid(const DielectricModel& model, std::span<const double> xis) {
  if (!std::is_sorted(xis.begin(), xis.end())) throw DomainError("build_eps_grid: frequencies must be ascending");
  EpsGrid grid;
  grid.xi.assign(xis.begin(), xis.end());
  grid.eps.reserve(xis.size());
  for (double xi : xis) {
    const auto r = model.eval_detailed(xi);
    grid.eps.push_back(r.eps);
    grid.max_truncation_bound = std::max(grid.max_truncation_bound, r.truncation_bound);
  }
  return grid;
}

}  // namespace vdw
