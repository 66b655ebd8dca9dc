#pragma once

#include <string>
#include <vector>

#include "bealab/backward_error.hpp"
#include "bealab/chaos.hpp"
#include "bealab/integrate.hpp"

namespace bealab {

// 17 significant digits round-trips any double
std::string fmt17(double x);

// header t,y1..yn; one row per skeleton node, or uniform sampling when
// sample_dt > 0
void write_solution_csv(const DenseSolution& sol, const std::string& path, double sample_dt = 0.0);

// header t,r1..rn,norm
void write_residual_csv(const ResidualSeries& rs, const std::string& path);

// header t,energy_order0[,energy_order2[,energy_order4]]
void write_drift_csv(const LeapfrogRun& run, const std::vector<int>& orders,
                     const std::string& path);

// header bin_lo,bin_hi,count,frequency
void write_histogram_csv(const StatisticsReport& rep, const std::string& path);

// minimal scatter/line plot, no external dependencies
void write_svg_scatter(const std::string& path, const std::vector<double>& xs,
                       const std::vector<double>& ys, bool connect = false, int width = 720,
                       int height = 480);

}  // namespace bealab
