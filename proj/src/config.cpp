#include "wfset/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wfset/error.hpp"
#include "wfset/gabor.hpp"
#include "wfset/io.hpp"

namespace wfset {

namespace {

using nlohmann::json;

double exponent(const json& v) {
  if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
  const double x = v.get<double>();
  if (!(x >= 1.0)) throw Error(ErrorKind::Config, "exponent must be >= 1 or \"inf\"");
  return x;
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Config, where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw Error(ErrorKind::Config, where + ": unknown key \"" + key + "\"");
}

Point parse_point(const json& v, int dim) {
  Point p(dim);
  if (v.is_number() && dim == 1) {
    p[0] = v.get<double>();
    return p;
  }
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw Error(ErrorKind::Config, "points: each point needs " + std::to_string(dim) + " coordinate(s)");
  for (int i = 0; i < dim; ++i) p[i] = v[i].get<double>();
  return p;
}

ConeCover parse_cones(const json& j, int dim) {
  only_keys(j, {"kind", "widen", "count", "cones"}, "cones");
  const std::string kind = j.value("kind", std::string("axis_aligned"));
  if (kind == "axis_aligned") return ConeCover::axis_aligned(dim, j.value("widen", dim == 1 ? 1.0 : 1.1));
  if (kind == "equiangular") {
    if (dim != 2) throw Error(ErrorKind::Config, "cones: equiangular covers are planar");
    const int count = j.value("count", 16);
    if (count < 3) throw Error(ErrorKind::Config, "cones: count must be at least 3");
    return ConeCover::equiangular(count, j.value("widen", 1.1));
  }
  if (kind == "explicit") {
    std::vector<Cone> cones;
    for (const auto& c : j.at("cones")) cones.push_back(cone_from_json(c));
    return ConeCover(std::move(cones));
  }
  throw Error(ErrorKind::Config, "cones: unknown kind \"" + kind + "\"");
}

}  // namespace

int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

AnalysisConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw Error(ErrorKind::Config, origin + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  std::string key = "";
  auto fail = [&](const std::string& what) -> Error {
    const int line = key.empty() ? 1 : std::max(1, line_of_key(text, key));
    return Error(ErrorKind::Config, origin + ":" + std::to_string(line) + ": " + what);
  };

  AnalysisConfig c;
  c.source = j;
  try {
    if (!j.is_object()) throw Error(ErrorKind::Config, "top level must be an object");
    static const std::set<std::string> top = {"atom",   "points", "s",       "p",    "q",      "k_grid",
                                              "cones",  "lattice", "stft_lattice", "windows", "eps", "outputs",
                                              "seed",   "grid",   "tau",     "r_max", "annuli", "order",
                                              "shrink_fraction"};
    for (const auto& [k, _] : j.items())
      if (!top.count(k)) {
        key = k;
        throw Error(ErrorKind::Config, "unknown key \"" + k + "\"");
      }

    key = "atom";
    if (!j.contains("atom")) throw Error(ErrorKind::Config, "missing required key \"atom\"");
    c.atom = atom_from_json(j.at("atom"));
    const int dim = c.atom.dim();

    key = "s";
    const double s = j.value("s", 2.0);
    if (!(s > 1.0)) throw Error(ErrorKind::Config, "s must exceed 1");
    c.params = default_params(dim, s);
    AnalysisParams& p = c.params;

    key = "points";
    if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty())
      throw Error(ErrorKind::Config, "\"points\" must be a nonempty array");
    for (const auto& v : j.at("points")) c.points.push_back(parse_point(v, dim));

    key = "p";
    if (j.contains("p")) p.p = exponent(j.at("p"));
    key = "q";
    if (j.contains("q")) p.q = exponent(j.at("q"));

    key = "k_grid";
    if (j.contains("k_grid")) {
      p.k_grid = j.at("k_grid").get<std::vector<double>>();
      if (p.k_grid.empty()) throw Error(ErrorKind::Config, "k_grid must be nonempty");
      for (std::size_t i = 0; i < p.k_grid.size(); ++i)
        if (!(p.k_grid[i] > 0.0) || (i && !(p.k_grid[i] > p.k_grid[i - 1])))
          throw Error(ErrorKind::Config, "k_grid must be positive and strictly increasing");
    }

    key = "grid";
    if (j.contains("grid")) {
      only_keys(j.at("grid"), {"n", "half_width"}, "grid");
      p.grid.n = j.at("grid").value("n", p.grid.n);
      p.grid.half_width = j.at("grid").value("half_width", p.grid.half_width);
      p.grid.validate();
    }

    key = "tau";
    p.seminorm.tau = j.value("tau", p.seminorm.tau);
    if (!(p.seminorm.tau > 0.0)) throw Error(ErrorKind::Config, "tau must be positive");
    key = "r_max";
    p.seminorm.r_max = j.value("r_max", p.seminorm.r_max);
    if (!(p.seminorm.r_max > 0.0)) throw Error(ErrorKind::Config, "r_max must be positive");
    key = "annuli";
    p.seminorm.annuli = j.value("annuli", p.seminorm.annuli);
    if (p.seminorm.annuli < p.seminorm.fit_annuli)
      throw Error(ErrorKind::Config, "annuli must be at least " + std::to_string(p.seminorm.fit_annuli));

    key = "order";
    if (j.contains("order")) {
      const auto o = j.at("order").get<std::string>();
      if (o == "Mpq") p.order = MixedOrder::Mpq;
      else if (o == "Wpq") p.order = MixedOrder::Wpq;
      else throw Error(ErrorKind::Config, "order must be \"Mpq\" or \"Wpq\"");
    }

    key = "shrink_fraction";
    p.shrink_fraction = j.value("shrink_fraction", p.shrink_fraction);
    if (!(p.shrink_fraction > 0.0 && p.shrink_fraction < 1.0))
      throw Error(ErrorKind::Config, "shrink_fraction must lie in (0, 1)");

    key = "cones";
    if (j.contains("cones")) p.cover = parse_cones(j.at("cones"), dim);
    if (p.cover.dim() != dim) throw Error(ErrorKind::Config, "cones: dimension differs from the atom");

    key = "lattice";
    if (j.contains("lattice")) {
      only_keys(j.at("lattice"), {"a", "b"}, "lattice");
      p.space_step = j.at("lattice").value("a", p.space_step);
      p.frequency_step = j.at("lattice").value("b", p.frequency_step);
    }
    (void)p.pair();
    key = "stft_lattice";
    if (j.contains("stft_lattice")) {
      only_keys(j.at("stft_lattice"), {"a", "b"}, "stft_lattice");
      p.stft_space_step = j.at("stft_lattice").value("a", p.stft_space_step);
      p.stft_frequency_step = j.at("stft_lattice").value("b", p.stft_frequency_step);
    }
    (void)p.stft_pair();

    key = "windows";
    if (j.contains("windows")) {
      const json& w = j.at("windows");
      only_keys(w, {"gabor", "cutoff", "stft", "cutoff_family"}, "windows");
      if (w.contains("gabor")) p.gabor_window = window_from_json(w.at("gabor"), dim);
      if (w.contains("cutoff")) p.cutoff = window_from_json(w.at("cutoff"), dim);
      if (w.contains("stft")) p.stft_window = window_from_json(w.at("stft"), dim);
      if (w.contains("cutoff_family")) {
        p.cutoff_family.clear();
        for (const auto& f : w.at("cutoff_family")) p.cutoff_family.push_back(window_from_json(f, dim));
      }
    }
    if (!p.cutoff.compact()) throw Error(ErrorKind::Config, "windows: the cutoff must be compactly supported");

    key = "eps";
    if (j.contains("eps")) {
      p.eps_list = j.at("eps").get<std::vector<double>>();
      if (p.eps_list.empty()) throw Error(ErrorKind::Config, "eps must be nonempty");
      for (double e : p.eps_list)
        if (!(e > 0.0 && e <= 1.0)) throw Error(ErrorKind::Config, "eps values must lie in (0, 1]");
    }
    key = "windows";
    (void)painless_dual(p.gabor_window, p.pair());

    key = "outputs";
    if (j.contains("outputs")) {
      const json& o = j.at("outputs");
      only_keys(o, {"json", "csv", "svg"}, "outputs");
      c.outputs.json = o.value("json", c.outputs.json);
      c.outputs.csv = o.value("csv", c.outputs.csv);
      c.outputs.svg = o.contains("svg") && o.at("svg").is_null() ? "" : o.value("svg", c.outputs.svg);
      if (c.outputs.json.empty() || c.outputs.csv.empty())
        throw Error(ErrorKind::Config, "outputs: json and csv paths must be nonempty");
    }

    key = "seed";
    p.seed = j.value("seed", p.seed);
  } catch (const Error& e) {
    throw fail(e.what());
  } catch (const json::exception& e) {
    throw fail(std::string("invalid value (") + e.what() + ")");
  }
  return c;
}

AnalysisConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, path + ":0: " + e.what());
  }
  return parse_config(text, path);
}

}  // namespace wfset
