#include <adwr/benchmarks.hpp>
#include <adwr/config.hpp>
#include <adwr/errors.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace adwr
{
namespace pt = boost::property_tree;

BenchmarkKind
parse_benchmark(const std::string &s)
{
  if (s == "moving_hump")
    return BenchmarkKind::moving_hump;
  if (s == "hemker")
    return BenchmarkKind::hemker;
  if (s == "manufactured")
    return BenchmarkKind::manufactured;
  throw ConfigError("unknown benchmark '" + s + "'");
}

std::string
to_string(BenchmarkKind k)
{
  switch (k)
    {
      case BenchmarkKind::moving_hump:
        return "moving_hump";
      case BenchmarkKind::hemker:
        return "hemker";
      case BenchmarkKind::manufactured:
        return "manufactured";
    }
  return "";
}

namespace
{
const std::map<std::string, std::set<std::string>> &
allowed_keys()
{
  static const std::map<std::string, std::set<std::string>> keys{
    {"problem", {"benchmark", "epsilon", "delta0", "degree", "time_degree", "final_time", "extruded"}},
    {"mesh", {"cells", "refinements"}},
    {"time", {"intervals"}},
    {"goals", {"cutoff", "cutoff_2"}},
    {"goal", {"kind", "center", "cutoff", "t_begin", "t_end", "weight"}},
    {"adaptivity",
     {"theta_h", "theta_tau", "max_loops", "max_total_dofs", "stop_tolerance", "tau_floor", "eligibility",
      "patch_smoothing", "weight_mode", "solver"}},
    {"output", {"directory", "emit_vtk", "threads"}}};
  return keys;
}

template <typename T>
T
get(const pt::ptree &sec, const std::string &section, const std::string &key)
{
  const std::string raw = sec.get<std::string>(key);
  if constexpr (std::is_same_v<T, std::string>)
    return raw;
  else if constexpr (std::is_same_v<T, bool>)
    {
      if (raw == "true" || raw == "1" || raw == "yes" || raw == "on")
        return true;
      if (raw == "false" || raw == "0" || raw == "no" || raw == "off")
        return false;
      throw ConfigError("[" + section + "] " + key + ": expected a boolean, got '" + raw + "'");
    }
  else
    {
      std::istringstream is(raw);
      T                  v{};
      is >> v;
      if (is.fail() || !(is >> std::ws).eof())
        throw ConfigError("[" + section + "] " + key + ": cannot parse '" + raw + "'");
      return v;
    }
}

Point
parse_point(const std::string &section, const std::string &raw)
{
  std::istringstream is(raw);
  double             x, y;
  is >> x >> y;
  if (is.fail() || !(is >> std::ws).eof())
    throw ConfigError("[" + section + "] center: expected two numbers, got '" + raw + "'");
  return {x, y};
}

void
check_range(bool ok, const std::string &what)
{
  if (!ok)
    throw ConfigError(what);
}
} // namespace

RunConfig
parse_config(std::istream &in)
{
  pt::ptree tree;
  try
    {
      pt::read_ini(in, tree);
    }
  catch (const pt::ini_parser_error &e)
    {
      throw ConfigError(std::string("config: ") + e.what());
    }

  RunConfig cfg;
  // goal sections are [goal_1], [goal_2], ... in numeric order
  std::map<int, const pt::ptree *> goal_sections;

  for (const auto &[name, sec] : tree)
    {
      if (!sec.data().empty() && sec.empty())
        throw ConfigError("config: key '" + name + "' outside a section");
      std::string kind = name;
      if (name.rfind("goal_", 0) == 0)
        {
          kind = "goal";
          int id = 0;
          try
            {
              id = std::stoi(name.substr(5));
            }
          catch (...)
            {
              throw ConfigError("config: bad goal section [" + name + "]");
            }
          goal_sections[id] = &sec;
        }
      const auto it = allowed_keys().find(kind);
      if (it == allowed_keys().end())
        throw ConfigError("config: unknown section [" + name + "]");
      for (const auto &[key, v] : sec)
        if (!it->second.count(key))
          throw ConfigError("config: unknown key '" + key + "' in [" + name + "]");
    }

  auto section = [&](const std::string &s) -> const pt::ptree * {
    const auto c = tree.get_child_optional(s);
    return c ? &*c : nullptr;
  };

  if (const auto *s = section("problem"))
    {
      if (s->count("benchmark"))
        cfg.benchmark = parse_benchmark(get<std::string>(*s, "problem", "benchmark"));
      if (s->count("epsilon"))
        cfg.epsilon = get<double>(*s, "problem", "epsilon");
      if (s->count("delta0"))
        cfg.delta0 = get<double>(*s, "problem", "delta0");
      if (s->count("degree"))
        cfg.degree = get<int>(*s, "problem", "degree");
      if (s->count("time_degree"))
        cfg.time_degree = get<int>(*s, "problem", "time_degree");
      if (s->count("final_time"))
        cfg.final_time = get<double>(*s, "problem", "final_time");
      if (s->count("extruded"))
        cfg.extruded = get<bool>(*s, "problem", "extruded");
    }
  if (const auto *s = section("mesh"))
    {
      if (s->count("cells"))
        cfg.cells = get<int>(*s, "mesh", "cells");
      if (s->count("refinements"))
        cfg.refinements = get<int>(*s, "mesh", "refinements");
    }
  if (const auto *s = section("time"))
    if (s->count("intervals"))
      cfg.intervals = get<int>(*s, "time", "intervals");
  if (const auto *s = section("goals"))
    {
      if (s->count("cutoff"))
        cfg.cutoff = get<double>(*s, "goals", "cutoff");
      if (s->count("cutoff_2"))
        cfg.cutoff_2 = get<double>(*s, "goals", "cutoff_2");
    }
  for (const auto &[id, s] : goal_sections)
    {
      const std::string name = "goal_" + std::to_string(id);
      GoalFunctional    g;
      if (!s->count("kind"))
        throw ConfigError("[" + name + "] kind is required");
      try
        {
          g.kind = parse_goal_kind(get<std::string>(*s, name, "kind"));
        }
      catch (const PreconditionError &e)
        {
          throw ConfigError("[" + name + "] " + e.what());
        }
      if (g.kind != GoalKind::volume_integral)
        {
          if (!s->count("center"))
            throw ConfigError("[" + name + "] center is required for point goals");
          g.center = parse_point(name, get<std::string>(*s, name, "center"));
        }
      if (s->count("cutoff"))
        g.cutoff = get<double>(*s, name, "cutoff");
      if (s->count("t_begin"))
        g.t_begin = get<double>(*s, name, "t_begin");
      if (s->count("t_end"))
        g.t_end = get<double>(*s, name, "t_end");
      check_range(g.cutoff > 0, "[" + name + "] cutoff must be positive");
      check_range(g.t_end > g.t_begin, "[" + name + "] empty time window");
      cfg.goals.push_back(g);
      cfg.weights.push_back(s->count("weight") ? get<double>(*s, name, "weight") : 1.0);
    }
  if (const auto *s = section("adaptivity"))
    {
      auto &a = cfg.adapt;
      const std::string n = "adaptivity";
      if (s->count("theta_h"))
        a.theta_h = get<double>(*s, n, "theta_h");
      if (s->count("theta_tau"))
        a.theta_tau = get<double>(*s, n, "theta_tau");
      if (s->count("max_loops"))
        a.max_loops = get<int>(*s, n, "max_loops");
      if (s->count("max_total_dofs"))
        a.max_total_dofs = get<long>(*s, n, "max_total_dofs");
      if (s->count("stop_tolerance"))
        a.stop_tolerance = get<double>(*s, n, "stop_tolerance");
      if (s->count("tau_floor"))
        a.tau_floor = get<double>(*s, n, "tau_floor");
      if (s->count("eligibility"))
        a.eligibility = get<double>(*s, n, "eligibility");
      if (s->count("patch_smoothing"))
        a.patch_smoothing = get<bool>(*s, n, "patch_smoothing");
      if (s->count("weight_mode"))
        {
          const auto w = get<std::string>(*s, n, "weight_mode");
          if (w == "fixed")
            a.weight_mode = WeightMode::fixed;
          else if (w == "sign_rule")
            a.weight_mode = WeightMode::sign_rule;
          else
            throw ConfigError("[adaptivity] weight_mode: expected fixed or sign_rule");
        }
      if (s->count("solver"))
        {
          try
            {
              a.solver = parse_solver_kind(get<std::string>(*s, n, "solver"));
            }
          catch (const PreconditionError &e)
            {
              throw ConfigError(std::string("[adaptivity] ") + e.what());
            }
        }
    }
  if (const auto *s = section("output"))
    {
      if (s->count("directory"))
        cfg.output_dir = get<std::string>(*s, "output", "directory");
      if (s->count("emit_vtk"))
        cfg.emit_vtk = get<bool>(*s, "output", "emit_vtk");
      if (s->count("threads"))
        cfg.threads = get<int>(*s, "output", "threads");
    }

  check_range(cfg.degree >= 1 && cfg.degree <= 7, "[problem] degree must lie in 1..7");
  check_range(cfg.time_degree == 0, "[problem] only time_degree = 0 (dG(0)) is implemented");
  check_range(!cfg.epsilon || *cfg.epsilon > 0, "[problem] epsilon must be positive");
  check_range(!cfg.delta0 || *cfg.delta0 >= 0, "[problem] delta0 must be nonnegative");
  check_range(!cfg.final_time || *cfg.final_time > 0, "[problem] final_time must be positive");
  check_range(!cfg.cells || *cfg.cells >= 1, "[mesh] cells must be positive");
  check_range(!cfg.refinements || *cfg.refinements >= 0, "[mesh] refinements must be nonnegative");
  check_range(!cfg.intervals || *cfg.intervals >= 1, "[time] intervals must be positive");
  check_range(cfg.adapt.theta_h >= 0 && cfg.adapt.theta_h <= 1, "[adaptivity] theta_h must lie in [0,1]");
  check_range(cfg.adapt.theta_tau >= 0 && cfg.adapt.theta_tau <= 1, "[adaptivity] theta_tau must lie in [0,1]");
  check_range(cfg.adapt.max_loops >= 1, "[adaptivity] max_loops must be positive");
  check_range(cfg.threads >= 1, "[output] threads must be positive");
  return cfg;
}

RunConfig
load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

DwrSetup
make_setup(const RunConfig &cfg)
{
  DwrSetup                    s{.mesh = create_rectangle_mesh({0, 1}, {0, 1}, 1, 1)};
  std::vector<GoalFunctional> goals;
  int                         refinements = 0, intervals = 0;
  double                      delta0 = 0;
  switch (cfg.benchmark)
    {
      case BenchmarkKind::moving_hump:
        {
          const double eps = cfg.epsilon.value_or(1e-6);
          if (eps > 1)
            throw ConfigError("[problem] moving hump needs epsilon in (0,1]");
          s.problem = moving_hump::problem(eps);
          s.exact   = moving_hump::exact(eps);
          goals     = moving_hump::goals(cfg.cutoff.value_or(0.05));
          const int n = cfg.cells.value_or(1);
          s.mesh      = create_rectangle_mesh({0, 1}, {0, 1}, n, n);
          refinements = cfg.refinements.value_or(2);
          intervals   = cfg.intervals.value_or(5);
          delta0      = cfg.delta0.value_or(1.0);
          break;
        }
      case BenchmarkKind::hemker:
        s.problem   = hemker::problem(cfg.epsilon.value_or(1e-6));
        goals       = hemker::goals(cfg.cutoff.value_or(0.1), cfg.cutoff_2.value_or(5e-7));
        s.mesh      = create_hemker_mesh();
        refinements = cfg.refinements.value_or(2);
        intervals   = cfg.intervals.value_or(36);
        delta0      = cfg.delta0.value_or(0.1);
        break;
      case BenchmarkKind::manufactured:
        {
          s.problem = manufactured::problem(cfg.epsilon.value_or(0.01), cfg.extruded, cfg.final_time.value_or(1.0));
          s.exact   = manufactured::exact(cfg.extruded);
          goals     = manufactured::goals(cfg.extruded);
          const int n = cfg.cells.value_or(2);
          s.mesh      = create_rectangle_mesh({0, 1}, {0, 1}, n, n);
          refinements = cfg.refinements.value_or(1);
          intervals   = cfg.intervals.value_or(4);
          delta0      = cfg.delta0.value_or(0.0);
          break;
        }
    }
  if (cfg.final_time)
    s.problem.T = *cfg.final_time;
  if (!cfg.goals.empty())
    goals = cfg.goals;
  for (auto &g : goals)
    g.t_end = std::min(g.t_end, s.problem.T);

  s.mesh.refine_global(refinements);
  s.partition = TimePartition::uniform(s.problem.T, intervals);
  s.disc      = Discretization{cfg.degree, delta0};
  s.goal      = combine(goals, cfg.goals.empty() ? std::vector<double>{} : cfg.weights);
  return s;
}

} // namespace adwr
