#pragma once

// Atom-wall van der Waals coefficient C3(a, T) from the Lifshitz formula:
//
//   C3 = (kT/8) { 2 alpha(0) r0 + sum_{l>=1} alpha_l Int_{zeta_l}^inf dy e^-y
//                 [2 y^2 r_par + zeta_l^2 (r_perp - r_par)] },   F = -C3 / a^3,
//
// with zeta_l = xi_l / omega_c, omega_c = c / (2a), xi_l = 2 pi k T l / hbar,
// and r0 = (eps(i0) - 1) / (eps(i0) + 1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vdw/errors.hpp"
#include "vdw/optics.hpp"
#include "vdw/physconst.hpp"
#include "vdw/polarizability.hpp"
#include "vdw/quadrature.hpp"

namespace vdw {

// Stop once `consecutive` terms in a row are each below rel_tol of the
// running sum. The retarded sum additionally requires the geometric tail
// estimate t r / (1 - r), r = t_l / t_{l-1}, to be below rel_tol / 2 of the sum.
struct AutoTruncation {
  double rel_tol = 1e-8;
  int consecutive = 3;
  int l_cap = 1'000'000;
};

struct FixedTruncation {
  int l_max = 0;
};

using TruncationPolicy = std::variant<AutoTruncation, FixedTruncation>;

inline double matsubara_spacing(double temperature) {
  return 2.0 * phys::pi * phys::boltzmann_k * temperature / phys::hbar;
}

inline double matsubara_frequency(double temperature, int l) {
  return matsubara_spacing(temperature) * l;
}

struct MatsubaraSpec {
  double temperature = 300.0;  // K
  TruncationPolicy policy = AutoTruncation{};

  double spacing() const { return matsubara_spacing(temperature); }
  double xi(int l) const { return spacing() * l; }
};

class Geometry {
 public:
  explicit Geometry(double separation) : a_(separation) {
    if (!(a_ > 0.0) || !std::isfinite(a_)) throw DomainError("separation must be positive");
  }
  double a() const { return a_; }
  double omega_c() const { return phys::speed_of_light / (2.0 * a_); }
  double zeta(double xi) const { return xi / omega_c(); }

 private:
  double a_;
};

struct ReflectionPair {
  double r_par = 0.0;   // TM
  double r_perp = 0.0;  // TE
};

inline ReflectionPair reflection_coeffs(double eps, double zeta, double y) {
  if (!(zeta >= 0.0) || !(y >= zeta)) throw DomainError("reflection_coeffs: need y >= zeta >= 0");
  if (is_ideal_metal(eps)) return {1.0, 1.0};
  if (!(eps >= 1.0)) throw DomainError("reflection_coeffs: eps must be >= 1");
  if (y == 0.0) return {(eps - 1.0) / (eps + 1.0), 0.0};
  const double d = zeta * zeta * (eps - 1.0);
  const double s = std::sqrt(y * y + d);
  const double r_par = (eps * y - s) / (eps * y + s);
  // (s - y) / (s + y) with the numerator rationalized: s - y = d / (s + y).
  const double r_perp = d / ((s + y) * (s + y));
  return {r_par, r_perp};
}

inline double integrand(double eps, double zeta, double y) {
  const auto r = reflection_coeffs(eps, zeta, y);
  return std::exp(-y) * (2.0 * y * y * r.r_par + zeta * zeta * (r.r_perp - r.r_par));
}

// y = zeta + t; the t-range [0, 60] drops a tail of order e^-60.
inline constexpr double y_integral_cutoff = 60.0;

inline QuadratureResult y_integral(double eps, double zeta, const QuadratureOptions& opts = {}) {
  const double shift = std::exp(-zeta);
  if (shift == 0.0) return {};
  auto f = [&](double t) {
    const double y = zeta + t;
    const auto r = reflection_coeffs(eps, zeta, y);
    return std::exp(-t) * (2.0 * y * y * r.r_par + zeta * zeta * (r.r_perp - r.r_par));
  };
  auto res = integrate_adaptive(f, 0.0, y_integral_cutoff, opts);
  res.value *= shift;
  res.error *= shift;
  return res;
}

struct TermResult {
  double value = 0.0;  // a.u. of polarizability
  std::size_t evaluations = 0;
};

/// alpha_l * Int_{zeta_l}^inf (...) dy for one Matsubara frequency.
inline TermResult matsubara_term(double zeta, double eps, double alpha, const QuadratureOptions& opts = {}) {
  if (alpha == 0.0) return {};
  const auto r = y_integral(eps, zeta, opts);
  return {alpha * r.value, r.evaluations};
}

inline TermResult matsubara_term(int l, double eps_l, double alpha_l, const Geometry& geometry,
                                 const MatsubaraSpec& spec, const QuadratureOptions& opts = {}) {
  if (l < 1) throw DomainError("matsubara_term: l must be >= 1");
  return matsubara_term(geometry.zeta(spec.xi(l)), eps_l, alpha_l, opts);
}

// eps_l and alpha_l at the Matsubara frequencies of one temperature, extended
// on demand. Not thread-safe while extending; share read-only afterwards.
class SpectralGrid {
 public:
  SpectralGrid(DielectricModel wall, PolarizabilityModel atom, double temperature)
      : wall_(std::move(wall)), atom_(std::move(atom)), spacing_(matsubara_spacing(temperature)) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  }

  const DielectricModel& wall() const { return wall_; }
  const PolarizabilityModel& atom() const { return atom_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return eps_.size(); }  // frequencies l = 1..size()
  double kk_truncation_bound() const { return kk_bound_; }

  void ensure(int l_max) {
    if (l_max <= static_cast<int>(eps_.size())) return;
    const int first = static_cast<int>(eps_.size()) + 1;
    const double xi_top = spacing_ * l_max;
    if (xi_top > atom_.xi_max()) {
      throw RangeError("Matsubara frequency xi_" + std::to_string(l_max) + " = " + std::to_string(xi_top) +
                       " rad/s exceeds the polarizability data (ends at " + std::to_string(atom_.xi_max()) +
                       " rad/s)");
    }
    std::vector<double> xis;
    for (int l = first; l <= l_max; ++l) {
      const auto idx = static_cast<std::size_t>(l - 1);
      if (idx < preset_.size()) {
        eps_.push_back(preset_[idx]);
      } else {
        xis.push_back(spacing_ * l);
      }
    }
    if (!xis.empty()) {
      const auto grid = build_eps_grid(wall_, xis);
      kk_bound_ = std::max(kk_bound_, grid.max_truncation_bound);
      eps_.insert(eps_.end(), grid.eps.begin(), grid.eps.end());
    }
    for (int l = first; l <= l_max; ++l) alpha_.push_back(atom_.eval(spacing_ * l));
  }

  /// Supplies eps_l for l = 1..eps.size() from an earlier run at the same
  /// temperature and wall; must precede the first ensure().
  void preset_eps(std::vector<double> eps, double kk_truncation_bound) {
    if (!eps_.empty()) throw ConfigError("preset_eps after the grid was extended");
    preset_ = std::move(eps);
    kk_bound_ = std::max(kk_bound_, kk_truncation_bound);
  }

  /// eps_l for l = 1..size(), including any preset values beyond size().
  std::vector<double> eps_values() const {
    auto out = eps_;
    if (preset_.size() > out.size()) out.insert(out.end(), preset_.begin() + out.size(), preset_.end());
    return out;
  }

  double xi(int l) const { return spacing_ * l; }
  double eps(int l) const { return eps_.at(static_cast<std::size_t>(l - 1)); }
  double alpha(int l) const { return alpha_.at(static_cast<std::size_t>(l - 1)); }

 private:
  DielectricModel wall_;
  PolarizabilityModel atom_;
  double spacing_;
  std::vector<double> eps_;
  std::vector<double> alpha_;
  std::vector<double> preset_;
  double kk_bound_ = 0.0;
};

struct Diagnostics {
  int l_used = 0;
  std::size_t quadrature_evals = 0;
  double truncation_bound = 0.0;     // last accepted term relative to the sum
  double kk_truncation_bound = 0.0;  // optical-data tail, relative to eps
};

struct VdwPoint {
  double a = 0.0;  // m
  double T = 0.0;  // K
  C3Value C3;
  double F = 0.0;  // J
  Diagnostics diagnostics;
};

namespace detail {

// Sums terms l = 1, 2, ... under the truncation policy. `term(l)` returns the
// contribution; `base` is the l = 0 contribution already in the sum.
template <class Term>
double matsubara_sum(const TruncationPolicy& policy, double base, SpectralGrid& grid, Term&& term,
                     Diagnostics& diag, bool geometric_tail) {
  constexpr int chunk = 64;
  double sum = base;
  if (const auto* fixed = std::get_if<FixedTruncation>(&policy)) {
    if (fixed->l_max < 0) throw DomainError("l_max must be >= 0");
    grid.ensure(fixed->l_max);
    double last = 0.0;
    for (int l = 1; l <= fixed->l_max; ++l) {
      last = term(l);
      sum += last;
    }
    diag.l_used = fixed->l_max;
    diag.truncation_bound = sum != 0.0 ? std::abs(last / sum) : 0.0;
    return sum;
  }
  const auto& a = std::get<AutoTruncation>(policy);
  int small = 0;
  double prev = 0.0;
  for (int l = 1;; ++l) {
    if (l > a.l_cap) {
      throw NumericalError("Matsubara sum not converged after " + std::to_string(a.l_cap) + " terms");
    }
    if (l > static_cast<int>(grid.size())) grid.ensure(std::min(a.l_cap, l + chunk - 1));
    const double t = term(l);
    sum += t;
    const double limit = a.rel_tol * std::abs(sum);
    double tail = std::abs(t);
    if (geometric_tail && t != 0.0) {
      const double r = prev != 0.0 ? std::abs(t / prev) : 1.0;
      tail = r < 1.0 ? std::abs(t) * r / (1.0 - r) : std::numeric_limits<double>::infinity();
    }
    prev = t;
    // Half the budget for the tail: r_l creeps up with l, so t r / (1 - r)
    // slightly underestimates the true remainder.
    if (std::abs(t) <= limit && tail <= 0.5 * limit) {
      ++small;
    } else {
      small = 0;
    }
    if (small >= a.consecutive) {
      diag.l_used = l;
      diag.truncation_bound = sum != 0.0 ? std::max(std::abs(t), tail) / std::abs(sum) : 0.0;
      return sum;
    }
  }
}

inline void check_c3_inputs(const Geometry& geometry, double temperature) {
  if (!(geometry.a() <= 1e-6)) throw DomainError("compute_c3: separation must be in (0, 1 um]");
  if (!(temperature > 0.0)) throw DomainError("compute_c3: temperature must be > 0");
}

}  // namespace detail

/// C3(a, T) on a prepared spectral grid (reused across separations).
inline VdwPoint compute_c3(const Geometry& geometry, const MatsubaraSpec& spec, SpectralGrid& grid,
                           const QuadratureOptions& opts = {}) {
  detail::check_c3_inputs(geometry, spec.temperature);
  VdwPoint out;
  out.a = geometry.a();
  out.T = spec.temperature;
  const double base = 2.0 * grid.atom().alpha0() * grid.wall().static_ratio().value;
  const double omega_c = geometry.omega_c();
  auto term = [&](int l) {
    const auto r = matsubara_term(grid.xi(l) / omega_c, grid.eps(l), grid.alpha(l), opts);
    out.diagnostics.quadrature_evals += r.evaluations;
    return r.value;
  };
  const double sum = detail::matsubara_sum(spec.policy, base, grid, term, out.diagnostics, true);
  out.diagnostics.kk_truncation_bound = grid.kk_truncation_bound();
  const double c3_si = phys::boltzmann_k * spec.temperature / 8.0 * sum * phys::au_polarizability_to_m3;
  out.C3 = C3Value::from_si(c3_si);
  const double a3 = geometry.a() * geometry.a() * geometry.a();
  out.F = -c3_si / a3;
  return out;
}

inline VdwPoint compute_c3(const Geometry& geometry, const MatsubaraSpec& spec, const DielectricModel& wall,
                           const PolarizabilityModel& atom, const QuadratureOptions& opts = {}) {
  SpectralGrid grid(wall, atom, spec.temperature);
  return compute_c3(geometry, spec, grid, opts);
}

inline double reflectivity(double eps) { return is_ideal_metal(eps) ? 1.0 : (eps - 1.0) / (eps + 1.0); }

/// Nonrelativistic limit: (kT/4) [alpha(0) r0 + 2 sum_l alpha_l (eps_l - 1)/(eps_l + 1)].
inline C3Value compute_c3_nonrel(double temperature, const DielectricModel& wall, const PolarizabilityModel& atom,
                                 const TruncationPolicy& policy = AutoTruncation{}) {
  if (!(temperature > 0.0)) throw DomainError("compute_c3_nonrel: temperature must be > 0");
  SpectralGrid grid(wall, atom, temperature);
  const double base = atom.alpha0() * wall.static_ratio().value;
  auto term = [&](int l) { return 2.0 * grid.alpha(l) * reflectivity(grid.eps(l)); };
  Diagnostics diag;
  // Power-law terms: the geometric tail test would not terminate.
  const double sum = detail::matsubara_sum(policy, base, grid, term, diag, false);
  return C3Value::from_si(phys::boltzmann_k * temperature / 4.0 * sum * phys::au_polarizability_to_m3);
}

/// (hbar / 4 pi) Int_0^inf alpha(i xi) (eps - 1)/(eps + 1) d xi, with
/// xi = s tan(theta). For tabulated alpha the integral stops at the last
/// tabulated frequency.
inline C3Value compute_c3_integral(const DielectricModel& wall, const PolarizabilityModel& atom,
                                   const QuadratureOptions& opts = {.rel_tol = 1e-10}) {
  double scale = phys::ev_to_angular(1.0);
  if (const auto* osc = std::get_if<OscillatorAlpha>(&atom.variant())) scale = osc->omega0;
  const double theta_max =
      std::isfinite(atom.xi_max()) ? std::atan(atom.xi_max() / scale) : phys::pi / 2.0;
  auto f = [&](double theta) {
    const double t = std::tan(theta);
    const double xi = std::min(scale * t, atom.xi_max());
    const double c = std::cos(theta);
    const double alpha = atom.eval(xi);
    if (alpha == 0.0) return 0.0;
    return alpha * reflectivity(wall.eval(xi)) * scale / (c * c);
  };
  const auto r = integrate_adaptive(f, 0.0, theta_max, opts);
  const double c3_si = phys::hbar / (4.0 * phys::pi) * r.value * phys::au_polarizability_to_m3;
  return C3Value::from_si(c3_si);
}

/// One VdwPoint per separation (positive, ascending); the spectral grid is
/// built once and shared.
inline std::vector<VdwPoint> sweep(std::span<const double> separations, const MatsubaraSpec& spec,
                                   const DielectricModel& wall, const PolarizabilityModel& atom,
                                   const QuadratureOptions& opts = {}) {
  for (std::size_t i = 0; i < separations.size(); ++i) {
    if (!(separations[i] > 0.0)) throw DomainError("sweep: separations must be positive");
    if (i > 0 && separations[i] < separations[i - 1]) throw DomainError("sweep: separations must be sorted");
  }
  std::vector<VdwPoint> out;
  if (separations.empty()) return out;
  SpectralGrid grid(wall, atom, spec.temperature);
  out.reserve(separations.size());
  for (double a : separations) out.push_back(compute_c3(Geometry(a), spec, grid, opts));
  return out;
}

}  // namespace vdw
