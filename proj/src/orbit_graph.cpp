#include "bealab/orbit_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "bealab/core.hpp"

namespace bealab {

FunctionalGraph build_graph(const FloatFormat& format, MapId map, NanPolicy nan_policy) {
    if (format.count_in_unit_interval() > (1ull << 26))
        throw std::invalid_argument("build_graph: format too large");
    FunctionalGraph g;
    g.format = format;
    g.map = map;
    g.nan_policy = nan_policy;

    const auto nodes = enumerate_unit_interval(format);
    const auto n = (int64_t)nodes.size();
    g.values.resize(n);
    for (int64_t j = 0; j < n; ++j) g.values[j] = nodes[j].value;

    const bool sink = nan_policy == NanPolicy::sink;
    const int64_t nan_target = sink ? n + 1 : 1;
    g.succ.resize(n);
    for (int64_t j = 0; j < n; ++j) {
        const double y = map_eval(g.values[j], map, format);
        if (std::isnan(y))
            g.succ[j] = (int32_t)nan_target;
        else
            g.succ[j] = (int32_t)descending_index(y, format);
    }
    if (sink) {
        g.values.push_back(std::numeric_limits<double>::quiet_NaN());
        g.succ.push_back((int32_t)(n + 1));  // sink loops on itself
    }
    return g;
}

std::vector<int64_t> OrbitDecomposition::cycle_lengths_sorted() const {
    std::vector<int64_t> out;
    out.reserve(cycles.size());
    for (const auto& c : cycles) out.push_back((int64_t)c.size());
    std::sort(out.begin(), out.end());
    return out;
}

OrbitDecomposition decompose(const FunctionalGraph& g) {
    const int64_t n = g.n();
    OrbitDecomposition d;
    d.cycle_of.assign(n, -1);
    d.transient_len.assign(n, -1);

    // 0 = untouched, 1 = on the current path, 2 = resolved
    std::vector<uint8_t> color(n, 0);
    std::vector<int32_t> pos(n, -1);
    std::vector<int32_t> path;

    for (int64_t s = 1; s <= n; ++s) {
        if (color[s - 1] != 0) continue;
        path.clear();
        int64_t u = s;
        while (color[u - 1] == 0) {
            color[u - 1] = 1;
            pos[u - 1] = (int32_t)path.size();
            path.push_back((int32_t)u);
            u = g.successor(u);
        }

        size_t prefix_end = path.size();
        if (color[u - 1] == 1) {
            // closed a new cycle inside the current path
            const size_t start = (size_t)pos[u - 1];
            prefix_end = start;
            std::vector<int32_t> cyc(path.begin() + start, path.end());
            auto smallest = std::min_element(cyc.begin(), cyc.end());
            std::rotate(cyc.begin(), smallest, cyc.end());
            const auto cid = (int32_t)d.cycles.size();
            for (int32_t v : cyc) {
                d.cycle_of[v - 1] = cid;
                d.transient_len[v - 1] = 0;
                color[v - 1] = 2;
            }
            d.cycles.push_back(std::move(cyc));
        }

        // unwind the non-cycle prefix back to front
        int32_t cid = d.cycle_of[u - 1];
        int32_t steps = d.transient_len[u - 1];
        for (size_t i = prefix_end; i-- > 0;) {
            const int32_t v = path[i];
            ++steps;
            d.cycle_of[v - 1] = cid;
            d.transient_len[v - 1] = steps;
            color[v - 1] = 2;
        }
    }

    d.component_sizes.assign(d.cycles.size(), 0);
    for (int64_t j = 0; j < n; ++j) {
        ++d.component_sizes[d.cycle_of[j]];
        d.longest_transient = std::max(d.longest_transient, (int64_t)d.transient_len[j]);
    }
    for (const auto& c : d.cycles) d.longest_cycle = std::max(d.longest_cycle, (int64_t)c.size());
    return d;
}

ScalingReport scaling_fit(const std::vector<ScalingRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("scaling_fit: insufficient data");
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back((double)r.n);
        y.push_back((double)(r.longest_cycle + r.longest_transient));
    }
    ScalingReport rep;
    rep.rows = rows;
    const LineFit f = loglog_fit(x, y);
    rep.slope = f.slope;
    rep.intercept = f.intercept;
    return rep;
}

ScalingReport scaling_report(MapId map, const std::vector<FloatFormat>& formats) {
    if (formats.size() < 3)
        throw std::invalid_argument("scaling_report: insufficient data, need >= 3 formats");
    std::vector<ScalingRow> rows;
    for (const auto& f : formats) {
        const auto g = build_graph(f, map);
        const auto d = decompose(g);
        rows.push_back({f.str(), g.n(), d.longest_cycle, d.longest_transient});
    }
    return scaling_fit(rows);
}

MeasureId parse_measure(const std::string& s) {
    if (s == "gauss") return MeasureId::gauss;
    if (s == "lebesgue") return MeasureId::lebesgue;
    throw std::invalid_argument("unknown measure: " + s);
}

namespace {

double measure_cdf(MeasureId m, double x) {
    if (m == MeasureId::gauss) return std::log1p(x) / std::log(2.0);
    return x;
}

}  // namespace

MeasureReport measure_compare(const OrbitDecomposition& d, const FunctionalGraph& g,
                              MeasureId measure) {
    const int64_t n = g.n();
    std::vector<double> weight(n, 0.0);
    int64_t support = 0;
    for (size_t cid = 0; cid < d.cycles.size(); ++cid) {
        const auto& cyc = d.cycles[cid];
        const double w = (double)d.component_sizes[cid] / (double)n / (double)cyc.size();
        for (int32_t v : cyc) {
            if (std::isnan(g.value(v))) continue;  // sink node carries no grid value
            weight[v - 1] = w;
            ++support;
        }
    }

    // ascending sweep over the enumeration grid; compare the reference CDF
    // against the empirical CDF both before and after each atom
    double cum = 0.0, ks = 0.0;
    for (int64_t j = n; j >= 1; --j) {
        const double x = g.value(j);
        if (std::isnan(x)) continue;
        const double ref = measure_cdf(measure, x);
        ks = std::max(ks, std::abs(cum - ref));
        cum += weight[j - 1];
        ks = std::max(ks, std::abs(cum - ref));
    }

    MeasureReport rep;
    rep.measure = measure;
    rep.ks = ks;
    rep.support_nodes = support;
    return rep;
}

double long_orbit_ks(MapId map, MeasureId measure, long iterates, long burn_in, uint64_t seed) {
    double x = ((double)(splitmix64(seed) >> 11)) * 0x1p-53;
    if (x <= 0.0 || x >= 1.0) x = 0.5;

    auto step = [&](double v) {
        switch (map) {
            case MapId::gauss: {
                const double r = 1.0 / v;
                return r - std::floor(r);
            }
            case MapId::logistic:
                return 4.0 * v * (1.0 - v);
            case MapId::bernoulli: {
                const double r = 2.0 * v;
                return r - std::floor(r);
            }
            default:
                return v;
        }
    };

    std::vector<double> samples;
    samples.reserve(iterates);
    for (long i = 0; i < burn_in + iterates; ++i) {
        x = step(x);
        if (x <= 0.0 || x >= 1.0 || !std::isfinite(x)) x = 0x1.9e3779b97f4a8p-1;  // restart off the rationals
        if (i >= burn_in) samples.push_back(x);
    }
    std::sort(samples.begin(), samples.end());
    const double m = (double)samples.size();
    double ks = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double ref = measure_cdf(measure, samples[i]);
        ks = std::max(ks, std::abs((double)(i + 1) / m - ref));
        ks = std::max(ks, std::abs((double)i / m - ref));
    }
    return ks;
}

ShadowResult shadow_refine_values(const std::vector<double>& pseudo_orbit,
                                  double roundoff_unit) {
    ShadowResult r;
    r.pseudo = pseudo_orbit;
    const size_t L = pseudo_orbit.size();
    if (L < 2) {
        r.error = "pseudo-orbit too short";
        return r;
    }
    for (double x : pseudo_orbit) {
        if (!(x > 0.0) || x > 1.0) {
            r.error = "pseudo-orbit value outside (0,1]";
            return r;
        }
    }
    r.branch.resize(L - 1);
    for (size_t i = 0; i + 1 < L; ++i) {
        const double x = pseudo_orbit[i];
        const auto k = (long long)std::floor(1.0 / x);
        if (k < 1) {
            r.error = "branch index below 1; orbit left the map domain";
            return r;
        }
        r.branch[i] = k;
    }

    r.shadow.assign(L, 0.0);
    r.shadow[L - 1] = pseudo_orbit[L - 1];
    for (size_t i = L - 1; i-- > 0;)
        r.shadow[i] = 1.0 / ((double)r.branch[i] + r.shadow[i + 1]);

    r.dist.resize(L);
    for (size_t i = 0; i < L; ++i) {
        r.dist[i] = std::abs(r.shadow[i] - pseudo_orbit[i]);
        r.max_dist = std::max(r.max_dist, r.dist[i]);
    }
    r.max_dist_units = roundoff_unit > 0 ? r.max_dist / roundoff_unit : 0.0;
    r.ok = true;
    return r;
}

ShadowResult shadow_refine_gauss(const FunctionalGraph& g, int64_t start_index, long max_len) {
    if (g.map != MapId::gauss)
        throw std::invalid_argument("shadow_refine_gauss: graph must be a gauss-map graph");
    if (start_index < 1 || start_index > g.n())
        throw std::invalid_argument("shadow_refine_gauss: start index out of range");

    std::vector<int64_t> idx;
    std::vector<double> vals;
    double x = g.value(start_index);
    int64_t j = start_index;
    while ((long)vals.size() < max_len) {
        if (std::isnan(x) || x == 0.0) break;  // truncate before zero or the NaN redirect
        idx.push_back(j);
        vals.push_back(x);
        const double y = map_eval(x, MapId::gauss, g.format);
        if (std::isnan(y) || y == 0.0) break;
        j = descending_index(y, g.format);
        x = y;
    }

    ShadowResult r = shadow_refine_values(vals, unit_roundoff(g.format));
    r.indices = idx;
    return r;
}

void export_edges(const FunctionalGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "Column1\n";
    for (int64_t j = 1; j <= g.n(); ++j) out << g.successor(j) << "\n";
    if (!out) throw std::runtime_error("write failure: " + path);
}

void export_dot(const FunctionalGraph& g, const std::string& path) {
    if (g.n() > 512) throw std::invalid_argument("export_dot: graph too large (n > 512)");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "digraph orbits {\n  rankdir=LR;\n  node [shape=circle, fontsize=8];\n";
    char buf[64];
    for (int64_t j = 1; j <= g.n(); ++j) {
        std::snprintf(buf, sizeof buf, "%.6g", g.value(j));
        out << "  n" << j << " [label=\"" << buf << "\"];\n";
    }
    for (int64_t j = 1; j <= g.n(); ++j)
        out << "  n" << j << " -> n" << g.successor(j) << ";\n";
    out << "}\n";
    if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace bealab
