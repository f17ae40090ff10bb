#include "isaacs/config.hpp"

#include "isaacs/csv.hpp"
#include "isaacs/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace isaacs {

namespace pt = boost::property_tree;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view raw, const std::string& key) {
  const std::string_view s = trim(raw);
  T value{};
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [end, ec] = std::from_chars(first, s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError("bad number for " + key + ": '" + std::string(raw) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError("non-finite value for " + key);
  }
  return value;
}

// One section, with every key accounted for by the end.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {
    if (tree_ == nullptr) return;
    for (const auto& [key, child] : *tree_) {
      if (!child.empty()) throw ConfigError("nested keys are not allowed in [" + name_ + "]");
      if (!keys_.insert(key).second) throw ConfigError("duplicate key " + where(key));
    }
  }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  bool has(const std::string& key) const { return keys_.count(key) != 0; }

  std::string text(const std::string& key) {
    if (!has(key)) throw ConfigError("missing key " + where(key));
    used_.insert(key);
    return tree_->get<std::string>(pt::ptree::path_type(key, '\0'));
  }
  std::string text(const std::string& key, std::string fallback) {
    return has(key) ? text(key) : fallback;
  }

  double real(const std::string& key) { return parse_number<double>(text(key), where(key)); }
  double real(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }

  template <typename T>
  T whole(const std::string& key, T fallback) {
    return has(key) ? parse_number<T>(text(key), where(key)) : fallback;
  }
  template <typename T>
  T whole(const std::string& key) {
    return parse_number<T>(text(key), where(key));
  }

  void finish() const {
    for (const auto& k : keys_) {
      if (!used_.count(k)) throw ConfigError("unknown key " + where(k));
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> keys_;
  std::set<std::string> used_;
};

std::vector<double> family_params(Section& sec, const std::vector<std::string>& names) {
  std::vector<double> out;
  for (const auto& n : names) out.push_back(sec.real(n));
  return out;
}

std::vector<VectorXd> parse_points(const std::string& raw, const std::string& key) {
  std::vector<VectorXd> out;
  for (std::string_view point : split(raw, ';')) {
    const auto comps = split(point, ',');
    VectorXd p(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) p(i) = parse_number<double>(comps[i], key);
    out.push_back(std::move(p));
  }
  return out;
}

std::string format_points(const std::vector<VectorXd>& points) {
  std::string s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) s += "; ";
    for (Eigen::Index j = 0; j < points[i].size(); ++j) {
      if (j) s += ", ";
      s += format_double(points[i](j));
    }
  }
  return s;
}

const std::set<std::string> kSections{"coefficients", "payoff",  "priority", "actions", "game",
                                      "discretization", "run", "output",   "manifest"};

}  // namespace

ProblemSpec ExperimentConfig::problem() const {
  VectorXd x0(1);
  x0(0) = start_state;
  return ProblemSpec(coefficients, payoff, priority, ActionSet(u_points), ActionSet(v_points),
                     horizon, start_time, x0);
}

std::size_t ExperimentConfig::block_for(std::size_t intervals) const {
  if (discretization.block > 0) return discretization.block;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(intervals))));
}

ExperimentConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " at line " +
                      std::to_string(e.line()));
  }
  for (const auto& [name, child] : tree) {
    if (!kSections.count(name)) throw ConfigError("unknown section [" + name + "]");
    if (child.empty() && !child.data().empty()) {
      throw ConfigError("key '" + name + "' outside a section");
    }
  }
  auto section = [&](const std::string& name) {
    return Section(tree.get_child_optional(name) ? &tree.get_child(name) : nullptr, name);
  };

  ExperimentConfig c;
  try {
    Section co = section("coefficients");
    c.coefficients.family = parse_coefficient_family(co.text("family"));
    c.coefficients.d = co.whole<int>("d", 1);
    c.coefficients.d_prime = co.whole<int>("d_prime", 1);
    c.coefficients.params = family_params(co, parameter_names(c.coefficients.family));
    co.finish();

    Section pay = section("payoff");
    c.payoff.family = parse_payoff_family(pay.text("family"));
    c.payoff.params = family_params(pay, parameter_names(c.payoff.family));
    pay.finish();

    Section pr = section("priority");
    c.priority.family = parse_priority_family(pr.text("family"));
    c.priority.params = family_params(pr, parameter_names(c.priority.family));
    pr.finish();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  Section act = section("actions");
  c.u_points = parse_points(act.text("u"), act.where("u"));
  c.v_points = parse_points(act.text("v"), act.where("v"));
  act.finish();

  Section game = section("game");
  c.horizon = game.real("horizon");
  c.start_time = game.real("start_time", 0.0);
  c.start_state = game.real("start_state", 0.0);
  game.finish();

  Section disc = section("discretization");
  auto& d = c.discretization;
  d.lower = disc.real("lower", d.lower);
  d.upper = disc.real("upper", d.upper);
  d.nodes = disc.whole<std::size_t>("nodes", d.nodes);
  d.intervals = disc.whole<std::size_t>("intervals", d.intervals);
  d.block = disc.whole<std::size_t>("block", d.block);
  d.quad_points = disc.whole<int>("quad_points", d.quad_points);
  d.dt_policy = disc.text("dt_policy", d.dt_policy);
  d.dt = disc.real("dt", d.dt);
  d.reference_nodes = disc.whole<std::size_t>("reference_nodes", d.reference_nodes);
  d.window = disc.real("window", d.window);
  disc.finish();
  if (d.dt_policy != "cfl" && d.dt_policy != "fixed") {
    throw ConfigError("dt_policy must be cfl or fixed");
  }
  if (d.dt_policy == "fixed" && !(d.dt > 0.0)) throw ConfigError("fixed dt_policy needs dt > 0");
  if (d.intervals == 0) throw ConfigError("intervals must be positive");

  Section run = section("run");
  auto& r = c.run;
  r.mode = run.text("mode", r.mode);
  r.seed = run.whole<std::uint64_t>("seed");
  r.paths = run.whole<std::size_t>("paths", r.paths);
  r.substeps = run.whole<std::size_t>("substeps", r.substeps);
  r.keep_paths = run.whole<std::size_t>("keep_paths", r.keep_paths);
  r.challengers = run.whole<std::size_t>("challengers", r.challengers);
  r.challenger_paths = run.whole<std::size_t>("challenger_paths", r.challenger_paths);
  r.samples = run.whole<std::size_t>("samples", r.samples);
  r.epsilon = run.real("epsilon", r.epsilon);
  if (run.has("levels")) {
    r.levels.clear();
    const std::string raw = run.text("levels");
    for (auto part : split(raw, ',')) {
      r.levels.push_back(parse_number<std::size_t>(part, run.where("levels")));
    }
  }
  run.finish();
  if (r.mode != "random" && r.mode != "deterministic" && r.mode != "both") {
    throw ConfigError("mode must be random, deterministic or both");
  }

  Section out = section("output");
  c.output.dir = out.text("dir", c.output.dir);
  out.finish();

  // Let the problem validate itself once.
  try {
    (void)c.problem();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid problem: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c, bool with_output) {
  std::ostringstream o;
  auto params = [&](const auto& names, const std::vector<double>& values) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      o << names[i] << " = " << format_double(values[i]) << '\n';
    }
  };
  o << "[coefficients]\nfamily = " << family_name(c.coefficients.family) << '\n'
    << "d = " << c.coefficients.d << "\nd_prime = " << c.coefficients.d_prime << '\n';
  params(parameter_names(c.coefficients.family), c.coefficients.params);
  o << "\n[payoff]\nfamily = " << family_name(c.payoff.family) << '\n';
  params(parameter_names(c.payoff.family), c.payoff.params);
  o << "\n[priority]\nfamily = " << family_name(c.priority.family) << '\n';
  params(parameter_names(c.priority.family), c.priority.params);
  o << "\n[actions]\nu = " << format_points(c.u_points) << "\nv = " << format_points(c.v_points)
    << '\n';
  o << "\n[game]\nhorizon = " << format_double(c.horizon)
    << "\nstart_time = " << format_double(c.start_time)
    << "\nstart_state = " << format_double(c.start_state) << '\n';
  const auto& d = c.discretization;
  o << "\n[discretization]\nlower = " << format_double(d.lower)
    << "\nupper = " << format_double(d.upper) << "\nnodes = " << d.nodes
    << "\nintervals = " << d.intervals << "\nblock = " << d.block
    << "\nquad_points = " << d.quad_points << "\ndt_policy = " << d.dt_policy
    << "\ndt = " << format_double(d.dt) << "\nreference_nodes = " << d.reference_nodes
    << "\nwindow = " << format_double(d.window) << '\n';
  const auto& r = c.run;
  o << "\n[run]\nmode = " << r.mode << "\nseed = " << r.seed << "\npaths = " << r.paths
    << "\nsubsteps = " << r.substeps << "\nkeep_paths = " << r.keep_paths
    << "\nchallengers = " << r.challengers << "\nchallenger_paths = " << r.challenger_paths
    << "\nsamples = " << r.samples << "\nepsilon = " << format_double(r.epsilon) << "\nlevels = ";
  for (std::size_t i = 0; i < r.levels.size(); ++i) o << (i ? "," : "") << r.levels[i];
  o << '\n';
  if (with_output) o << "\n[output]\ndir = " << c.output.dir << '\n';
  return o.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : format_config(config, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig benchmark_config(PrioritySpec priority, std::uint64_t seed) {
  ExperimentConfig c;
  c.coefficients = {CoefficientFamily::kBilinear, {4.0, std::sqrt(2.0)}, 1, 1};
  c.payoff = {PayoffFamily::kCos, {1.0, 1.0, 0.0}};
  c.priority = std::move(priority);
  VectorXd lo(1);
  lo(0) = -1.0;
  VectorXd hi(1);
  hi(0) = 1.0;
  c.u_points = {lo, hi};
  c.v_points = {lo, hi};
  c.horizon = 0.5;
  c.run.seed = seed;
  return c;
}

}  // namespace isaacs
