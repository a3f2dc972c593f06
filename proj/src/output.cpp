#include <adwr/output.hpp>

#include <cmath>
#include <cstdio>

namespace adwr
{
namespace
{
std::string
real(double v)
{
  if (!std::isfinite(v))
    return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}
} // namespace

std::string
format_row(const LoopRecord &r)
{
  std::string s = std::to_string(r.loop) + ',' + std::to_string(r.n_space) + ',' + std::to_string(r.n_t) + ',' +
                  std::to_string(r.n_tot);
  for (double v : {r.error, r.eta_h_x, r.eta_h_y, r.eta_h, r.eta_tau, r.eta_tau_h, r.i_eff, r.ar_max})
    s += ',' + real(v);
  return s;
}

void
write_table(std::ostream &os, const std::vector<LoopRecord> &records)
{
  os << table_header << '\n';
  for (const auto &r : records)
    os << format_row(r) << '\n';
}

void
write_cut_lines(std::ostream &os, const std::vector<CutPoint> &points)
{
  os << "line,s,x,y,u\n";
  char buf[128];
  for (const auto &p : points)
    {
      std::snprintf(buf, sizeof buf, "%.9e,%.12e,%.12e,%.9e", p.s, p.x.x(), p.x.y(), p.u);
      os << p.line << ',' << buf << '\n';
    }
}
} // namespace adwr
