#pragma once

#include <string>
#include <vector>

#include "bealab/minifloat.hpp"

namespace bealab {

enum class NanPolicy { redirect_to_one, sink };

// successor table of one map step over the descending enumeration of [0,1];
// node 1 is the value 1.0, node n() is 0.0. With the sink policy an extra
// NaN node is appended and all NaN results point there.
struct FunctionalGraph {
    FloatFormat format;
    MapId map = MapId::gauss;
    NanPolicy nan_policy = NanPolicy::redirect_to_one;
    std::vector<double> values;
    std::vector<int32_t> succ;  // 1-based

    int64_t n() const { return (int64_t)values.size(); }
    int32_t successor(int64_t j) const { return succ[j - 1]; }
    double value(int64_t j) const { return values[j - 1]; }
};

FunctionalGraph build_graph(const FloatFormat& format, MapId map,
                            NanPolicy nan_policy = NanPolicy::redirect_to_one);

struct OrbitDecomposition {
    std::vector<std::vector<int32_t>> cycles;  // each rotated to start at its smallest index
    std::vector<int32_t> cycle_of;             // per node: index into cycles (component id)
    std::vector<int32_t> transient_len;        // per node: steps to reach the cycle
    std::vector<int64_t> component_sizes;      // per cycle
    int64_t longest_cycle = 0;
    int64_t longest_transient = 0;

    std::vector<int64_t> cycle_lengths_sorted() const;
    bool on_cycle(int64_t node) const { return transient_len[node - 1] == 0; }
};

OrbitDecomposition decompose(const FunctionalGraph& g);

struct ScalingRow {
    std::string format;
    int64_t n = 0;
    int64_t longest_cycle = 0;
    int64_t longest_transient = 0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double slope = 0.0;      // log-log, (longest cycle + longest transient) vs n
    double intercept = 0.0;
};

// fit over precomputed rows; needs >= 2 rows
ScalingReport scaling_fit(const std::vector<ScalingRow>& rows);
// builds the graphs and fits; needs >= 3 formats
ScalingReport scaling_report(MapId map, const std::vector<FloatFormat>& formats);

enum class MeasureId { gauss, lebesgue };
MeasureId parse_measure(const std::string& s);

struct MeasureReport {
    MeasureId measure = MeasureId::gauss;
    double ks = 0.0;           // Kolmogorov-Smirnov distance on the enumeration grid
    int64_t support_nodes = 0; // cycle nodes carrying weight
};

// empirical long-run distribution: every node funnels its 1/n mass onto its
// cycle, spread evenly over the cycle's nodes
MeasureReport measure_compare(const OrbitDecomposition& d, const FunctionalGraph& g,
                              MeasureId measure);

// KS distance of a long double-precision orbit of the exact map against the
// closed-form measure; independent reference for measure_compare
double long_orbit_ks(MapId map, MeasureId measure, long iterates = 1000000,
                     long burn_in = 1000, uint64_t seed = 12345);

struct ShadowResult {
    std::vector<int64_t> indices;     // pseudo-orbit as enumeration indices
    std::vector<double> pseudo;       // x_n
    std::vector<double> shadow;       // z_n, exact orbit in double precision
    std::vector<double> dist;         // |z_n - x_n|
    std::vector<long long> branch;    // k_n = floor(1/x_n), length L-1
    double max_dist = 0.0;
    double max_dist_units = 0.0;      // max_dist / unit roundoff of the format
    bool ok = false;
    std::string error;
};

// backward construction: z anchors at the final pseudo-orbit point and each
// branch map z -> 1/(k + z) contracts, so distances shrink going backward
ShadowResult shadow_refine_gauss(const FunctionalGraph& g, int64_t start_index, long max_len);

// same construction on raw values (unit_roundoff only scales the reported
// distance units)
ShadowResult shadow_refine_values(const std::vector<double>& pseudo_orbit, double roundoff_unit);

void export_edges(const FunctionalGraph& g, const std::string& path);

// small graphs only (n <= 512)
void export_dot(const FunctionalGraph& g, const std::string& path);

}  // namespace bealab
