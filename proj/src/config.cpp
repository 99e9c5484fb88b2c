#include "rst/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rst/pareto.hpp"

namespace rst::cli {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(name() + " must be an object");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  template <class T>
  std::optional<T> opt(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    try {
      return v->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(key_path(key) + ": wrong type (got " + v->type_name() + ")");
    }
  }

  template <class T>
  T req(const std::string& key) {
    auto v = opt<T>(key);
    if (!v) throw ConfigError(key_path(key) + ": required key is missing");
    return *v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned()) {
      throw ConfigError(key_path(key) + ": expected a nonnegative integer");
    }
    return v->get<std::size_t>();
  }

  std::optional<std::vector<std::size_t>> counts(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_array() && !v->is_number()) {
      throw ConfigError(key_path(key) + ": expected an integer or an array");
    }
    const json items = v->is_array() ? *v : json::array({*v});
    std::vector<std::size_t> out;
    for (const auto& e : items) {
      if (!e.is_number_unsigned()) {
        throw ConfigError(key_path(key) + ": expected nonnegative integers");
      }
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  /// A number or an array of numbers.
  std::optional<std::vector<double>> vec(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (v->is_number()) return std::vector<double>{v->get<double>()};
    try {
      return v->get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError(key_path(key) + ": expected a number or an array of numbers");
    }
  }

  std::optional<Reader> section(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Reader(*v, key_path(key));
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + key_path(item.key()) + "'");
    }
  }

 private:
  std::string name() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::size_t threshold_dim(const RunConfig& cfg) {
  return cfg.model == kTabularModel ? cfg.tabular->threshold_dim : 2;
}

std::size_t state_dim(const RunConfig&) { return 1; }

tabular::TabularTables read_tables(Reader& r, std::size_t horizon) {
  tabular::TabularTables t;
  t.horizon = horizon;
  auto need = [&](const char* key) {
    auto v = r.count(key);
    if (!v) throw ConfigError(r.key_path(key) + ": required key is missing");
    return *v;
  };
  t.states = need("states");
  t.controls = need("controls");
  t.scenarios = need("scenarios");
  t.threshold_dim = need("threshold_dim");
  t.next = r.req<decltype(t.next)>("next");
  t.g = r.req<decltype(t.g)>("g");
  t.theta = r.req<decltype(t.theta)>("theta");
  r.finish();
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("tabular: ") + e.what());
  }
  return t;
}

void apply_defaults(RunConfig& cfg, bool has_grid, bool has_controls, bool has_mesh,
                    bool has_front_tol, bool has_interp) {
  if (cfg.model == kFisheryModel) {
    if (!has_grid) cfg.grid = {{0.0}, {120.0}, {600}};
    if (!has_controls) cfg.controls = {0.0, cfg.fishery.u_max, 200};
    if (!has_mesh) cfg.ray_mesh = {0.5, 110, {55.0, 15.0}};
  } else {
    const auto& t = *cfg.tabular;
    cfg.grid = {{0.0}, {static_cast<double>(t.states - 1)}, {t.states}};
    cfg.controls = {0.0, static_cast<double>(t.controls - 1), t.controls};
    if (!has_interp) cfg.interp = InterpMode::nearest;
    if (!has_mesh) {
      const double d = 0.25;
      std::vector<double> anchors;
      double top = 0.0;
      for (double v : t.max_values()) {
        anchors.push_back(std::max(std::floor(v), 0.0) + 2.0);
        top = std::max(top, anchors.back());
      }
      cfg.ray_mesh = {d, static_cast<std::size_t>(std::ceil(top / d)), anchors};
    }
  }
  if (!has_front_tol) {
    cfg.front_tol = cfg.model == kTabularModel ? 1e-12 : build_grid(cfg).max_spacing();
  }
}

std::vector<std::size_t> parse_permutation(const std::string& text, std::size_t m) {
  const auto bad = [&] {
    return ConfigError("strong.permutation: '" + text + "' is not a permutation of 1.." +
                       std::to_string(m));
  };
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      throw bad();
    }
    if (pos != item.size() || v < 1 || static_cast<std::size_t>(v) > m) throw bad();
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  std::vector<std::size_t> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() != m) throw bad();
  for (std::size_t i = 0; i < m; ++i) {
    if (sorted[i] != i) throw bad();
  }
  return out;
}

}  // namespace

fishery::FisheryParams FisherySpec::params() const {
  fishery::FisheryParams p;
  p.scenarios = {{r_a, K_a}, {r_b, K_b}};
  p.active.clear();
  for (const auto& s : scenarios) {
    p.active.push_back(s == "a" ? fishery::kScenarioA : fishery::kScenarioB);
  }
  p.u_max = u_max;
  p.m_big = m_big;
  return p;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Reader r(j, "");
  RunConfig cfg;
  cfg.model = r.req<std::string>("model");
  if (cfg.model != kFisheryModel && cfg.model != kTabularModel) {
    throw ConfigError("model: unknown model '" + cfg.model + "' (expected " +
                      std::string(kFisheryModel) + " or " + std::string(kTabularModel) + ")");
  }
  const auto horizon = r.count("horizon");
  require(horizon.has_value(), "horizon", "required key is missing");
  cfg.horizon = *horizon;
  const auto xi = r.vec("initial_state");
  require(xi.has_value(), "initial_state", "required key is missing");
  cfg.initial_state = *xi;

  if (auto s = r.section("fishery")) {
    require(cfg.model == kFisheryModel, "fishery", "only valid with the fishery model");
    auto& f = cfg.fishery;
    f.r_a = s->opt<double>("r_a").value_or(f.r_a);
    f.r_b = s->opt<double>("r_b").value_or(f.r_b);
    f.K_a = s->opt<double>("K_a").value_or(f.K_a);
    f.K_b = s->opt<double>("K_b").value_or(f.K_b);
    f.u_max = s->opt<double>("u_max").value_or(f.u_max);
    f.m_big = s->opt<double>("m_big").value_or(f.m_big);
    f.scenarios = s->opt<std::vector<std::string>>("scenarios").value_or(f.scenarios);
    s->finish();
  }
  if (auto s = r.section("tabular")) {
    require(cfg.model == kTabularModel, "tabular", "only valid with the tabular model");
    cfg.tabular = read_tables(*s, cfg.horizon);
  } else if (cfg.model == kTabularModel) {
    throw ConfigError("tabular: required for the tabular model");
  }

  bool has_grid = false;
  if (auto s = r.section("grid")) {
    require(cfg.model != kTabularModel, "grid", "the tabular model derives its grid from the tables");
    has_grid = true;
    cfg.grid.lower = s->vec("lower").value_or(std::vector<double>{});
    cfg.grid.upper = s->vec("upper").value_or(std::vector<double>{});
    cfg.grid.nodes = s->counts("nodes").value_or(std::vector<std::size_t>{});
    s->finish();
  }
  bool has_controls = false;
  if (auto s = r.section("controls")) {
    require(cfg.model != kTabularModel, "controls",
            "the tabular model derives its controls from the tables");
    has_controls = true;
    cfg.controls.lower = s->opt<double>("lower").value_or(0.0);
    cfg.controls.upper = s->opt<double>("upper").value_or(cfg.fishery.u_max);
    cfg.controls.points = s->count("points").value_or(200);
    s->finish();
  }
  bool has_mesh = false;
  if (auto s = r.section("ray_mesh")) {
    has_mesh = true;
    cfg.ray_mesh.d = s->req<double>("d");
    const auto count = s->count("count");
    require(count.has_value(), "ray_mesh.count", "required key is missing");
    cfg.ray_mesh.count = *count;
    cfg.ray_mesh.anchors = s->vec("anchors").value_or(std::vector<double>{});
    s->finish();
  }
  bool has_front_tol = false;
  if (auto s = r.section("tolerances")) {
    if (auto v = s->opt<double>("front")) {
      has_front_tol = true;
      cfg.front_tol = *v;
    }
    cfg.membership_tol = s->opt<double>("membership").value_or(0.0);
    s->finish();
  }
  bool has_interp = false;
  if (auto v = r.opt<std::string>("interp")) {
    has_interp = true;
    try {
      cfg.interp = parse_interp_mode(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("interp: ") + e.what());
    }
  }
  cfg.full_grid = r.opt<bool>("full_grid").value_or(false);
  cfg.oracle = r.opt<bool>("oracle").value_or(false);
  cfg.oracle_budget = r.count("oracle_budget").value_or(cfg.oracle_budget);
  cfg.neg_inf = r.opt<double>("neg_inf").value_or(cfg.neg_inf);
  cfg.threshold = r.vec("threshold");
  if (auto s = r.section("strong")) {
    cfg.strong.c0 = s->vec("c0");
    cfg.strong.permutation = s->opt<std::string>("permutation").value_or("all");
    s->finish();
  }
  cfg.output_dir = r.opt<std::string>("output_dir").value_or(cfg.output_dir);
  cfg.jobs = r.count("jobs").value_or(0);
  r.finish();

  // Numeric checks that defaults depend on come first.
  if (cfg.model == kFisheryModel) {
    try {
      cfg.fishery.params().validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("fishery: ") + e.what());
    }
  }
  if (has_grid) {
    const auto& g = cfg.grid;
    require(g.lower.size() == 1 && g.upper.size() == 1 && g.nodes.size() == 1, "grid",
            "lower, upper and nodes need one entry per state dimension (1)");
    require(g.lower[0] < g.upper[0], "grid", "needs lower < upper");
    require(g.nodes[0] >= 2, "grid.nodes", "needs at least 2 nodes per dimension");
  }
  apply_defaults(cfg, has_grid, has_controls, has_mesh, has_front_tol, has_interp);
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  const std::size_t m = threshold_dim(cfg);
  const std::size_t n = state_dim(cfg);
  require(cfg.initial_state.size() == n, "initial_state",
          "expected " + std::to_string(n) + " entries");
  require(finite_all(cfg.initial_state), "initial_state", "entries must be finite");

  const auto& g = cfg.grid;
  require(g.lower.size() == n && g.upper.size() == n && g.nodes.size() == n, "grid",
          "lower, upper and nodes need one entry per state dimension");
  for (std::size_t d = 0; d < n; ++d) {
    require(std::isfinite(g.lower[d]) && std::isfinite(g.upper[d]) && g.lower[d] < g.upper[d],
            "grid.lower", "needs finite lower < upper");
    require(g.nodes[d] >= 2, "grid.nodes", "needs at least 2 nodes per dimension");
    require(cfg.initial_state[d] >= g.lower[d] && cfg.initial_state[d] <= g.upper[d],
            "initial_state", "lies outside the grid box");
  }
  if (cfg.model == kFisheryModel) {
    require(g.lower[0] >= 0, "grid.lower", "stock grid must start at or above 0");
    require(cfg.controls.lower >= 0 && cfg.controls.upper <= cfg.fishery.u_max, "controls",
            "mesh must lie inside [0, fishery.u_max]");
  }
  require(cfg.controls.points >= 1, "controls.points", "needs at least 1 point");
  require(cfg.controls.points == 1 || cfg.controls.lower < cfg.controls.upper, "controls",
          "needs lower < upper");

  const auto& r = cfg.ray_mesh;
  require(std::isfinite(r.d) && r.d > 0, "ray_mesh.d", "must be positive");
  require(r.anchors.size() == m, "ray_mesh.anchors",
          "expected " + std::to_string(m) + " entries");
  for (double a : r.anchors) {
    require(std::isfinite(a) && a > 0, "ray_mesh.anchors", "entries must be positive");
  }
  require(std::isfinite(cfg.front_tol) && cfg.front_tol >= 0, "tolerances.front", "must be >= 0");
  require(std::isfinite(cfg.membership_tol) && cfg.membership_tol >= 0, "tolerances.membership",
          "must be >= 0");
  require(cfg.oracle_budget > 0, "oracle_budget", "must be positive");
  require(std::isfinite(cfg.neg_inf) && cfg.neg_inf < 0, "neg_inf", "must be finite and negative");
  if (cfg.threshold) {
    require(cfg.threshold->size() == m, "threshold", "expected " + std::to_string(m) + " entries");
    require(finite_all(*cfg.threshold), "threshold", "entries must be finite");
  }
  if (cfg.strong.c0) {
    require(cfg.strong.c0->size() == m, "strong.c0", "expected " + std::to_string(m) + " entries");
    require(finite_all(*cfg.strong.c0), "strong.c0", "entries must be finite");
  }
  if (cfg.strong.permutation != "all") parse_permutation(cfg.strong.permutation, m);
  if (cfg.model == kFisheryModel) {
    require(!cfg.fishery.scenarios.empty(), "fishery.scenarios", "must be nonempty");
    std::set<std::string> seen;
    for (const auto& s : cfg.fishery.scenarios) {
      require(s == "a" || s == "b", "fishery.scenarios", "entries must be \"a\" or \"b\"");
      require(seen.insert(s).second, "fishery.scenarios", "duplicate entry");
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg, int indent) {
  json j;
  j["model"] = cfg.model;
  j["horizon"] = cfg.horizon;
  j["initial_state"] = cfg.initial_state;
  if (cfg.model == kFisheryModel) {
    const auto& f = cfg.fishery;
    j["fishery"] = {{"r_a", f.r_a},     {"r_b", f.r_b},     {"K_a", f.K_a},
                    {"K_b", f.K_b},     {"u_max", f.u_max}, {"m_big", f.m_big},
                    {"scenarios", f.scenarios}};
    j["grid"] = {{"lower", cfg.grid.lower}, {"upper", cfg.grid.upper}, {"nodes", cfg.grid.nodes}};
    j["controls"] = {{"lower", cfg.controls.lower},
                     {"upper", cfg.controls.upper},
                     {"points", cfg.controls.points}};
  } else {
    const auto& t = *cfg.tabular;
    j["tabular"] = {{"states", t.states},       {"controls", t.controls},
                    {"scenarios", t.scenarios}, {"threshold_dim", t.threshold_dim},
                    {"next", t.next},           {"g", t.g},
                    {"theta", t.theta}};
  }
  j["ray_mesh"] = {{"d", cfg.ray_mesh.d},
                   {"count", cfg.ray_mesh.count},
                   {"anchors", cfg.ray_mesh.anchors}};
  j["tolerances"] = {{"front", cfg.front_tol}, {"membership", cfg.membership_tol}};
  j["interp"] = to_string(cfg.interp);
  j["full_grid"] = cfg.full_grid;
  j["oracle"] = cfg.oracle;
  j["oracle_budget"] = cfg.oracle_budget;
  j["neg_inf"] = cfg.neg_inf;
  j["threshold"] = cfg.threshold ? json(*cfg.threshold) : json(nullptr);
  j["strong"] = {{"c0", cfg.strong.c0 ? json(*cfg.strong.c0) : json(nullptr)},
                 {"permutation", cfg.strong.permutation}};
  j["output_dir"] = cfg.output_dir;
  j["jobs"] = cfg.jobs;
  return j.dump(indent);
}

std::shared_ptr<const SystemSpec> build_system(const RunConfig& cfg) {
  if (cfg.model == kTabularModel) {
    return std::make_shared<const SystemSpec>(tabular::build_tabular_system(*cfg.tabular));
  }
  return std::make_shared<const SystemSpec>(
      fishery::build_fishery_system(cfg.fishery.params(), cfg.horizon));
}

StateGrid build_grid(const RunConfig& cfg) {
  std::vector<StateGrid::Axis> axes;
  for (std::size_t d = 0; d < cfg.grid.nodes.size(); ++d) {
    axes.push_back({cfg.grid.lower[d], cfg.grid.upper[d], cfg.grid.nodes[d]});
  }
  return StateGrid(std::move(axes));
}

ControlMesh build_controls(const RunConfig& cfg) {
  if (cfg.model == kTabularModel) return tabular::tabular_controls(*cfg.tabular);
  return ControlMesh::uniform(cfg.controls.lower, cfg.controls.upper, cfg.controls.points);
}

Setup build_setup(const RunConfig& cfg) {
  auto sys = build_system(cfg);
  auto problem = std::make_unique<dp::Problem>(
      sys, build_grid(cfg), build_controls(cfg), cfg.initial_state,
      dp::Problem::Options{cfg.interp, cfg.full_grid});
  return {sys, std::move(problem),
          ThresholdRayMesh(cfg.ray_mesh.d, cfg.ray_mesh.count, cfg.ray_mesh.anchors)};
}

}  // namespace rst::cli

namespace rst::cli {

std::vector<std::vector<std::size_t>> permutations(const RunConfig& cfg) {
  const std::size_t m = threshold_dim(cfg);
  if (cfg.strong.permutation == "all") return pareto::all_permutations(m);
  return {parse_permutation(cfg.strong.permutation, m)};
}

}  // namespace rst::cli
