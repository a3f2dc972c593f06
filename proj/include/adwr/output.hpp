#pragma once

#include <adwr/adaptivity.hpp>
#include <adwr/benchmarks.hpp>

#include <ostream>
#include <vector>

namespace adwr
{
/// Column order of table.csv.
inline constexpr const char *table_header =
  "loop,N_space,N_t,N_tot,error,eta_h_x,eta_h_y,eta_h,eta_tau,eta_tau_h,I_eff,ar_max";

/// One row; reals in %.6e, unavailable error / I_eff left empty.
std::string format_row(const LoopRecord &r);
void        write_table(std::ostream &os, const std::vector<LoopRecord> &records);

void write_cut_lines(std::ostream &os, const std::vector<CutPoint> &points);
} // namespace adwr
