#pragma once

// Command-line front end: model spec grammar, run configuration, the eps(i xi)
// cache, and CSV / table output.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vdw/errors.hpp"
#include "vdw/lifshitz.hpp"
#include "vdw/optics.hpp"
#include "vdw/physconst.hpp"
#include "vdw/polarizability.hpp"

namespace vdw::cli {

enum class OutputFormat { csv, table };

struct RunConfig {
  std::vector<std::string> walls;
  std::vector<std::string> atoms;
  double temperature = 300.0;
  std::vector<double> separations;  // m, ascending
  OutputFormat output = OutputFormat::csv;
  std::string out_path;  // empty: stdout
  std::string cache_dir;  // empty: no cache
  TruncationPolicy policy = AutoTruncation{};
};

inline constexpr double max_separation = 10e-6;

namespace detail {

using vdw::detail::parse_double;
using vdw::detail::split;
using vdw::detail::trim;

inline double number(std::string_view token, std::string_view context) {
  const auto v = parse_double(trim(token));
  if (!v || !std::isfinite(*v)) {
    throw UsageError("malformed number '" + std::string(token) + "' in '" + std::string(context) + "'");
  }
  return *v;
}

inline std::vector<double> numbers(std::string_view list, std::size_t count, std::string_view context) {
  const auto parts = split(list, ',');
  if (parts.size() != count) {
    throw UsageError("expected " + std::to_string(count) + " comma-separated values in '" + std::string(context) +
                     "'");
  }
  std::vector<double> out;
  for (auto p : parts) out.push_back(number(p, context));
  return out;
}

/// "<value>nm" -> meters.
inline double separation_nm(std::string_view token) {
  const auto t = trim(token);
  if (t.size() < 3 || t.substr(t.size() - 2) != "nm") {
    throw UsageError("separation '" + std::string(token) + "' must carry the nm suffix");
  }
  const double nm = number(t.substr(0, t.size() - 2), token);
  const double a = nm * 1e-9;
  if (!(a > 0.0) || a > max_separation) {
    throw UsageError("separation '" + std::string(token) + "' outside (0, 10000nm]");
  }
  return a;
}

inline std::vector<double> separation_range(std::string_view spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 4) throw UsageError("--a-range expects min,max,count,log|linear; got '" + std::string(spec) + "'");
  const double lo = separation_nm(parts[0]);
  const double hi = separation_nm(parts[1]);
  const double count_d = number(parts[2], spec);
  const auto mode = trim(parts[3]);
  if (!(count_d >= 1.0) || count_d != std::floor(count_d)) {
    throw UsageError("--a-range count must be a positive integer in '" + std::string(spec) + "'");
  }
  if (lo > hi) throw UsageError("--a-range min exceeds max in '" + std::string(spec) + "'");
  if (mode != "log" && mode != "linear") {
    throw UsageError("unknown spacing '" + std::string(mode) + "' in --a-range");
  }
  const auto count = static_cast<std::size_t>(count_d);
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(mode == "log" ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
  }
  out.back() = hi;
  return out;
}

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace detail

struct WallSpec {
  DielectricModel model;
  std::string label;
  std::string cache_key;  // empty when the model is closed-form
};

/// tabulated:<file>[:drude=<wp_eV>,<gamma_eV>][:eps0=<v>][:metal] | drude:<wp_eV>,<gamma_eV> |
/// plasma:<wp_eV> | static:<eps0> | ideal
inline WallSpec parse_wall(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (kind == "ideal") {
    if (colon != std::string::npos) throw UsageError("'ideal' takes no arguments: '" + spec + "'");
    return {DielectricModel::ideal_metal(), spec, {}};
  }
  if (colon == std::string::npos || rest.empty()) throw UsageError("unknown wall spec '" + spec + "'");
  if (kind == "drude") {
    const auto v = detail::numbers(rest, 2, spec);
    if (!(v[0] > 0.0) || !(v[1] > 0.0)) throw UsageError("drude parameters must be positive: '" + spec + "'");
    return {DielectricModel::drude(phys::ev_to_angular(v[0]), phys::ev_to_angular(v[1])), spec, {}};
  }
  if (kind == "plasma") {
    const double wp = detail::number(rest, spec);
    if (!(wp > 0.0)) throw UsageError("plasma frequency must be positive: '" + spec + "'");
    return {DielectricModel::plasma(phys::ev_to_angular(wp)), spec, {}};
  }
  if (kind == "static") {
    const double eps0 = detail::number(rest, spec);
    if (!(eps0 >= 1.0)) throw UsageError("static permittivity must be >= 1: '" + spec + "'");
    return {DielectricModel::static_eps(eps0), spec, {}};
  }
  if (kind != "tabulated") throw UsageError("unknown wall spec '" + kind + "' in '" + spec + "'");

  const auto parts = detail::split(rest, ':');
  const std::string path(detail::trim(parts.front()));
  LowFreqExtension ext = NoExtension{};
  std::optional<double> eps0;
  bool metal = false;
  std::string key_opts;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto opt = detail::trim(parts[i]);
    if (opt == "metal") {
      metal = true;
    } else if (opt.starts_with("drude=")) {
      const auto v = detail::numbers(opt.substr(6), 2, spec);
      if (!(v[0] > 0.0) || !(v[1] > 0.0)) throw UsageError("drude parameters must be positive: '" + spec + "'");
      ext = DrudeExtension{phys::ev_to_angular(v[0]), phys::ev_to_angular(v[1])};
    } else if (opt.starts_with("eps0=")) {
      eps0 = detail::number(opt.substr(5), spec);
      if (!(*eps0 >= 1.0)) throw UsageError("eps0 must be >= 1: '" + spec + "'");
    } else {
      throw UsageError("unknown tabulated option '" + std::string(opt) + "' in '" + spec + "'");
    }
    key_opts += ':';
    key_opts += opt;
  }
  const std::string content = detail::read_file(path);
  std::istringstream in(content);
  auto table = load_optical_table(in, path);
  auto model = DielectricModel::tabulated(std::move(table), ext, eps0, metal);
  const auto h = detail::fnv1a(key_opts, detail::fnv1a(content));
  std::ostringstream key;
  key << std::hex << std::setw(16) << std::setfill('0') << h;
  return {std::move(model), spec, key.str()};
}

/// tabulated:<file> | oscillator:<alpha0_au>,<omega0_eV> | static:<alpha0_au>
inline PolarizabilityModel parse_atom(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos || colon + 1 == spec.size()) throw UsageError("unknown atom spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "oscillator") {
    const auto v = detail::numbers(rest, 2, spec);
    if (!(v[0] > 0.0) || !(v[1] > 0.0)) throw UsageError("oscillator parameters must be positive: '" + spec + "'");
    return PolarizabilityModel::oscillator(v[0], phys::ev_to_angular(v[1]));
  }
  if (kind == "static") {
    const double a0 = detail::number(rest, spec);
    if (!(a0 > 0.0)) throw UsageError("static polarizability must be positive: '" + spec + "'");
    return PolarizabilityModel::static_alpha(a0);
  }
  if (kind == "tabulated") return load_alpha_table(rest);
  throw UsageError("unknown atom spec '" + kind + "' in '" + spec + "'");
}

// On-disk eps(i xi_l) grids, one file per (wall data, options, temperature).
class EpsCache {
 public:
  explicit EpsCache(std::string dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(const std::string& wall_key, double temperature) const {
    const std::string t = detail::fmt(temperature, 17);
    const auto h = detail::fnv1a(t, detail::fnv1a(wall_key));
    std::ostringstream name;
    name << "eps_" << std::hex << std::setw(16) << std::setfill('0') << h << ".csv";
    return std::filesystem::path(dir_) / name.str();
  }

  /// Seeds the grid if a cache file exists; a corrupt file is ignored.
  void load(const std::string& wall_key, double temperature, SpectralGrid& grid) const {
    std::ifstream in(path_for(wall_key, temperature));
    if (!in) return;
    std::vector<double> eps;
    double bound = 0.0;
    std::string line;
    while (std::getline(in, line)) {
      const auto view = detail::trim(line);
      if (view.empty()) continue;
      if (view.starts_with("# kk_truncation_bound=")) {
        const auto v = detail::parse_double(view.substr(22));
        if (!v) return;
        bound = *v;
        continue;
      }
      if (view.front() == '#') continue;
      const auto fields = detail::split(view, ',');
      if (fields.size() != 2) return;
      const auto l = detail::parse_double(fields[0]);
      const auto e = detail::parse_double(fields[1]);
      if (!l || !e || *l != static_cast<double>(eps.size() + 1) || !(*e >= 1.0)) return;
      eps.push_back(*e);
    }
    grid.preset_eps(std::move(eps), bound);
  }

  void store(const std::string& wall_key, double temperature, const SpectralGrid& grid) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create cache directory '" + dir_ + "': " + ec.message());
    const auto path = path_for(wall_key, temperature);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw IoError("cannot write cache file '" + tmp + "'");
      out << "# vdw eps cache\n";
      out << "# kk_truncation_bound=" << detail::fmt(grid.kk_truncation_bound(), 17) << "\n";
      out << "# columns: l,eps\n";
      const auto eps = grid.eps_values();
      for (std::size_t i = 0; i < eps.size(); ++i) out << i + 1 << ',' << detail::fmt(eps[i], 17) << '\n';
      if (!out) throw IoError("failed writing cache file '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move cache file into place: " + ec.message());
  }

 private:
  std::string dir_;
};

/// Returns nullopt when help or version text was printed instead.
inline std::optional<RunConfig> parse_config(int argc, const char* const* argv, std::ostream& help_out) {
  CLI::App app{"Atom-wall van der Waals coefficient C3(a, T) from the Lifshitz formula", "vdw"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");

  std::vector<std::string> walls, atoms, seps;
  std::string range, output = "csv", out_path, cache_dir;
  double temperature = 300.0;
  int lmax = 0;
  double rel_tol = AutoTruncation{}.rel_tol;

  app.add_option("--wall", walls, "wall model; repeatable")->required();
  app.add_option("--atom", atoms, "atom model; repeatable")->required();
  app.add_option("--T", temperature, "temperature in K");
  app.add_option("--a", seps, "separation(s), e.g. 3nm; repeatable or comma-separated")->delimiter(',');
  app.add_option("--a-range", range, "min,max,count,log|linear, e.g. 3nm,150nm,11,log");
  app.add_option("--output", output, "csv or table")->check(CLI::IsMember({"csv", "table"}));
  app.add_option("--out", out_path, "write output to this path instead of stdout");
  app.add_option("--cache-dir", cache_dir, "directory for cached eps(i xi) grids")->envname("VDW_CACHE_DIR");
  app.add_option("--lmax", lmax, "fixed number of Matsubara terms (default: automatic truncation)");
  app.add_option("--rel-tol", rel_tol, "automatic truncation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::FileError& e) {
    throw IoError(e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  cfg.walls = walls;
  cfg.atoms = atoms;
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw UsageError("--T must be a positive temperature");
  cfg.temperature = temperature;
  for (const auto& s : seps) cfg.separations.push_back(detail::separation_nm(s));
  if (!range.empty()) {
    const auto r = detail::separation_range(range);
    cfg.separations.insert(cfg.separations.end(), r.begin(), r.end());
  }
  if (cfg.separations.empty()) throw UsageError("no separations given (use --a or --a-range)");
  std::sort(cfg.separations.begin(), cfg.separations.end());
  cfg.separations.erase(std::unique(cfg.separations.begin(), cfg.separations.end()), cfg.separations.end());
  cfg.output = output == "table" ? OutputFormat::table : OutputFormat::csv;
  cfg.out_path = out_path;
  cfg.cache_dir = cache_dir;
  if (app.count("--lmax") > 0) {
    if (lmax < 0) throw UsageError("--lmax must be >= 0");
    cfg.policy = FixedTruncation{lmax};
  } else {
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) throw UsageError("--rel-tol must be in (0, 1)");
    cfg.policy = AutoTruncation{.rel_tol = rel_tol};
  }
  return cfg;
}

struct Series {
  std::string wall;
  std::string atom;
  std::vector<VdwPoint> points;
};

inline std::vector<Series> compute(const RunConfig& cfg) {
  std::optional<EpsCache> cache;
  if (!cfg.cache_dir.empty()) cache.emplace(cfg.cache_dir);
  const MatsubaraSpec spec{cfg.temperature, cfg.policy};
  std::vector<Series> out;
  for (const auto& w : cfg.walls) {
    const auto wall = parse_wall(w);
    for (const auto& a : cfg.atoms) {
      const auto atom = parse_atom(a);
      SpectralGrid grid(wall.model, atom, cfg.temperature);
      const bool cached = cache && !wall.cache_key.empty();
      if (cached) cache->load(wall.cache_key, cfg.temperature, grid);
      Series s{w, a, {}};
      for (double sep : cfg.separations) s.points.push_back(compute_c3(Geometry(sep), spec, grid));
      if (cached) cache->store(wall.cache_key, cfg.temperature, grid);
      out.push_back(std::move(s));
    }
  }
  return out;
}

inline void write_csv(const std::vector<Series>& series, std::ostream& os) {
  const bool labelled = series.size() > 1;
  os << (labelled ? "wall,atom," : "") << "a_nm,C3_au,F_J,l_used\n";
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (labelled) os << s.wall << ',' << s.atom << ',';
      os << detail::fmt(p.a * 1e9, 9) << ',' << detail::fmt(p.C3.value_au, 9) << ',' << detail::fmt(p.F, 9) << ','
         << p.diagnostics.l_used << '\n';
    }
  }
}

inline void write_table(const std::vector<Series>& series, std::ostream& os) {
  std::vector<std::string> header{"a (nm)"};
  for (const auto& s : series) header.push_back(s.wall + " | " + s.atom);
  std::vector<std::vector<std::string>> rows;
  const std::size_t n = series.empty() ? 0 : series.front().points.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{detail::fmt(series.front().points[i].a * 1e9, 6)};
    for (const auto& s : series) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%#.3g", s.points[i].C3.value_au);
      row.emplace_back(buf);
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      os << (c == 0 ? "" : "  ") << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    os << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
}

inline void write(const RunConfig& cfg, const std::vector<Series>& series, std::ostream& os) {
  if (cfg.output == OutputFormat::table) {
    write_table(series, os);
  } else {
    write_csv(series, os);
  }
}

/// Full CLI run; returns the process exit code. Errors go to `err` as one line.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_config(argc, argv, out);
    if (!cfg) return 0;
    const auto series = compute(*cfg);
    if (cfg->out_path.empty()) {
      write(*cfg, series, out);
      out.flush();
    } else {
      std::ofstream file(cfg->out_path);
      if (!file) throw IoError("cannot open output file '" + cfg->out_path + "'");
      write(*cfg, series, file);
      if (!file) throw IoError("failed writing '" + cfg->out_path + "'");
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace vdw::cli
