#include "bealab/io.hpp"

#include <cstdio>
#include <fstream>

namespace bealab {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void write_solution_csv(const DenseSolution& sol, const std::string& path, double sample_dt) {
    auto out = open_or_throw(path);
    const int n = sol.dimension();
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",y" << i;
    out << "\n";

    auto row = [&](double t, const Vec& y) {
        out << fmt17(t);
        for (int i = 0; i < n; ++i) out << "," << fmt17(y[i]);
        out << "\n";
    };

    if (sample_dt > 0.0) {
        const double a = sol.t_begin(), b = sol.t_end();
        const long m = (long)std::floor((b - a) / sample_dt);
        for (long j = 0; j <= m; ++j) row(a + (double)j * sample_dt, sol.eval(a + (double)j * sample_dt));
        if (a + (double)m * sample_dt < b) row(b, sol.eval(b));
    } else {
        const auto& sk = sol.skeleton;
        for (size_t k = 0; k < sk.times.size(); ++k) row(sk.times[k], sk.states[k]);
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

void write_residual_csv(const ResidualSeries& rs, const std::string& path) {
    auto out = open_or_throw(path);
    const int n = rs.residuals.empty() ? 0 : (int)rs.residuals[0].size();
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",r" << i;
    out << ",norm\n";
    for (size_t j = 0; j < rs.times.size(); ++j) {
        out << fmt17(rs.times[j]);
        for (int i = 0; i < n; ++i) out << "," << fmt17(rs.residuals[j][i]);
        out << "," << fmt17(rs.norms[j]) << "\n";
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

void write_drift_csv(const LeapfrogRun& run, const std::vector<int>& orders,
                     const std::string& path) {
    auto out = open_or_throw(path);
    out << "t";
    for (int ord : orders) out << ",energy_order" << ord;
    out << "\n";
    for (size_t k = 0; k < run.states.size(); ++k) {
        out << fmt17((double)k * run.h);
        for (int ord : orders)
            out << "," << fmt17(modified_hamiltonian(run.states[k], run.h, ord));
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

void write_histogram_csv(const StatisticsReport& rep, const std::string& path) {
    auto out = open_or_throw(path);
    out << "bin_lo,bin_hi,count,frequency\n";
    for (size_t b = 0; b + 1 < rep.bin_edges.size(); ++b)
        out << fmt17(rep.bin_edges[b]) << "," << fmt17(rep.bin_edges[b + 1]) << ","
            << rep.counts[b] << "," << fmt17(rep.frequencies[b]) << "\n";
    if (!out) throw std::runtime_error("write failure: " + path);
}

void write_svg_scatter(const std::string& path, const std::vector<double>& xs,
                       const std::vector<double>& ys, bool connect, int width, int height) {
    if (xs.size() != ys.size()) throw std::invalid_argument("svg: size mismatch");
    auto out = open_or_throw(path);

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!xs.empty()) {
        x0 = x1 = xs[0];
        y0 = y1 = ys[0];
        for (size_t i = 0; i < xs.size(); ++i) {
            x0 = std::min(x0, xs[i]);
            x1 = std::max(x1, xs[i]);
            y0 = std::min(y0, ys[i]);
            y1 = std::max(y1, ys[i]);
        }
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double margin = 40;
    auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    auto py = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
        << "\" height=\"" << height - 2 * margin
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    char buf[64];
    if (connect && xs.size() > 1) {
        out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
        for (size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(xs[i]), py(ys[i]));
            out << buf;
        }
        out << "\"/>\n";
    } else {
        for (size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\" fill=\"steelblue\"/>\n",
                          px(xs[i]), py(ys[i]));
            out << buf;
        }
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace bealab
