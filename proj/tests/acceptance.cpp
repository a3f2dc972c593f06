// Acceptance run: drives the adwr binary on the shipped benchmark configs and
// checks the reported loop tables. One PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace
{
using Row = std::map<std::string, double>;

std::vector<Row>
read_table(const fs::path &path)
{
  std::ifstream            in(path);
  std::string              line;
  std::vector<std::string> cols;
  std::vector<Row>         rows;
  if (!std::getline(in, line))
    return rows;
  std::stringstream hs(line);
  for (std::string c; std::getline(hs, c, ',');)
    cols.push_back(c);
  while (std::getline(in, line))
    {
      std::stringstream ls(line);
      Row               r;
      std::size_t       i = 0;
      for (std::string c; i < cols.size(); ++i)
        {
          if (!std::getline(ls, c, ','))
            c.clear();
          r[cols[i]] = c.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(c);
        }
      rows.push_back(r);
    }
  return rows;
}

std::string
slurp(const fs::path &p)
{
  std::ifstream      in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int
run(const std::string &cmd)
{
  std::fprintf(stderr, "+ %s\n", cmd.c_str());
  const int st = std::system(cmd.c_str());
  return st == -1 ? -1 : WEXITSTATUS(st);
}

int failures = 0;

void
report(int id, bool ok, const std::string &what)
{
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string
fmt(const char *f, double a, double b = 0, double c = 0, double d = 0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// criteria 1-4 on the moving hump table
void
check_hump(const std::vector<Row> &t)
{
  if (t.size() != 11)
    {
      for (int id = 1; id <= 4; ++id)
        report(id, false, "moving hump run produced " + std::to_string(t.size()) + " of 11 loops");
      return;
    }
  const Row &last = t.back();

  // 1: effectivity on fine loops and at the end, error magnitude
  bool        fine_ok = true;
  std::string fine;
  for (const auto &r : t)
    if (r.at("N_space") >= 2e4)
      {
        const double ie = r.at("I_eff");
        fine_ok         = fine_ok && ie >= 0.8 && ie <= 1.5;
        fine += fmt(" %.0f:%.3f", r.at("loop"), ie);
      }
  const double e1 = std::abs(t[0].at("error")), e10 = std::abs(t[9].at("error"));
  const bool   final_ok = last.at("I_eff") >= 1.0 && last.at("I_eff") <= 1.3;
  const bool   err_ok   = e1 >= 1e-2 && e1 < 1.0 && e10 <= 5e-2;
  report(1, fine_ok && final_ok && err_ok,
         "I_eff in [0.8,1.5] for N_space>=2e4 (loop:I_eff" + fine + "), final I_eff " +
           fmt("%.3f in [1.0,1.3]; |error| loop 1 %.3e (~1e-1), loop 10 %.3e (<=5e-2)", last.at("I_eff"), e1, e10));

  // 2: directional equilibration over the final three loops
  bool        eq_ok = true;
  std::string eq;
  for (std::size_t l = t.size() - 3; l < t.size(); ++l)
    {
      const double x = std::abs(t[l].at("eta_h_x")), y = std::abs(t[l].at("eta_h_y"));
      const double ratio = std::max(x, y) / std::min(x, y);
      eq_ok              = eq_ok && ratio <= 1.5;
      eq += fmt(" loop %.0f: %.3e/%.3e (x%.2f);", t[l].at("loop"), x, y, ratio);
    }
  report(2, eq_ok, "|eta_h_x| and |eta_h_y| within 1.5x over the last three loops:" + eq);

  // 3: temporal dominance at the end
  const double et = std::abs(last.at("eta_tau")), eh = std::abs(last.at("eta_h"));
  report(3, et > 5 * eh, fmt("final |eta_tau| %.3e > 5 |eta_h| = %.3e", et, 5 * eh));

  // 4: anisotropy by the loop where N_space first exceeds 1e4
  bool   ar_ok = false;
  double ar    = 0, at = 0;
  for (const auto &r : t)
    if (r.at("N_space") > 1e4)
      {
        ar    = r.at("ar_max");
        at    = r.at("loop");
        ar_ok = ar >= 16 && t[0].at("ar_max") == 1.0;
        break;
      }
  report(4, ar_ok, fmt("ar_max %.2f (>=16) at loop %.0f where N_space first exceeds 1e4; initial %.2f", ar, at,
                       t[0].at("ar_max")));
}

void
check_hemker(const std::vector<Row> &t, int status)
{
  if (status != 0 || t.size() != 12)
    {
      report(5, false,
             "hemker run exited with " + std::to_string(status) + " after " + std::to_string(t.size()) + " of 12 loops");
      return;
    }
  bool        nt_ok = true, tau_ok = true;
  std::string nts;
  for (const auto &r : t)
    {
      nt_ok = nt_ok && r.at("N_t") == 36;
      nts += fmt(" %.0f", r.at("N_t"));
      if (r.at("loop") >= 3)
        tau_ok = tau_ok && std::abs(r.at("eta_tau")) <= 1e-2 * std::abs(r.at("eta_h"));
    }
  const double ar10 = t[9].at("ar_max");
  const double j8 = std::abs(t[7].at("eta_tau_h")), j12 = std::abs(t[11].at("eta_tau_h"));
  std::string  what = "N_t per loop" + nts + (nt_ok ? " (constant 36)" : " (not constant 36)");
  what += tau_ok ? "; |eta_tau| <= 1e-2 |eta_h| from loop 3" : "; |eta_tau| > 1e-2 |eta_h| in some loop >= 3";
  what += fmt("; ar_max at loop 10 %.1f (>=90); |eta_tau_h| loop 12 %.3e vs loop 8 %.3e (<= half)", ar10, j12, j8);
  report(5, nt_ok && tau_ok && ar10 >= 90 && j12 <= 0.5 * j8, what);
}
} // namespace

int
main(int argc, char **argv)
{
  CLI::App    app{"acceptance checks"};
  std::string adwr, unit_tests, configs, work;
  bool        skip_hemker = false;
  app.add_option("--adwr", adwr, "path of the adwr binary")->required();
  app.add_option("--unit-tests", unit_tests, "path of the unit test binary")->required();
  app.add_option("--configs", configs, "directory with the shipped configs")->required();
  app.add_option("--work", work, "scratch directory")->required();
  app.add_flag("--skip-hemker", skip_hemker, "leave criterion 5 out (reported as FAIL)");
  CLI11_PARSE(app, argc, argv);

  const fs::path w(work);
  fs::remove_all(w);
  fs::create_directories(w);
  const std::string hump = (fs::path(configs) / "moving_hump.cfg").string();

  // two single-threaded hump runs: criteria 1-4 from the first, 7 from both
  const int sa = run(adwr + " --config " + hump + " --threads 1 --max-loops 11 --output-dir " + (w / "hump_a").string());
  const int sb = run(adwr + " --config " + hump + " --threads 1 --max-loops 11 --output-dir " + (w / "hump_b").string());
  check_hump(sa == 0 ? read_table(w / "hump_a" / "table.csv") : std::vector<Row>{});

  if (skip_hemker)
    report(5, false, "hemker run skipped");
  else
    {
      const fs::path hk = w / "hemker";
      const int      sh = run(adwr + " --config " + (fs::path(configs) / "hemker.cfg").string() +
                              " --max-loops 12 --output-dir " + hk.string());
      check_hemker(read_table(hk / "table.csv"), sh);
    }

  const int su = run(unit_tests);
  report(6, su == 0, "property suites (unit_tests) exit status " + std::to_string(su));

  const std::string ta = slurp(w / "hump_a" / "table.csv"), tb = slurp(w / "hump_b" / "table.csv");
  report(7, sa == 0 && sb == 0 && !ta.empty() && ta == tb,
         "two single-threaded moving hump runs give " + std::string(ta == tb ? "identical" : "different") +
           " table.csv (" + std::to_string(ta.size()) + " bytes)");

  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
