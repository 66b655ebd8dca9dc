#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bealab/minifloat.hpp"
#include "bealab/orbit_graph.hpp"

using namespace bealab;

TEST_CASE("the identity map yields pure self-loops") {
    auto g = build_graph(FloatFormat(3, 4), MapId::identity);
    REQUIRE(g.n() == 49);
    for (int64_t j = 1; j <= g.n(); ++j) CHECK(g.successor(j) == j);
    auto d = decompose(g);
    CHECK(d.cycles.size() == 49);
    CHECK(d.longest_cycle == 1);
    CHECK(d.longest_transient == 0);
}

TEST_CASE("decomposition of a small hand-built successor table") {
    FunctionalGraph g;
    g.values = {0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    g.succ = {2, 3, 1, 2, 2, 7, 7};
    auto d = decompose(g);

    REQUIRE(d.cycles.size() == 2);
    CHECK(d.cycles[0] == std::vector<int32_t>{1, 2, 3});
    CHECK(d.cycles[1] == std::vector<int32_t>{7});
    CHECK(d.component_sizes == std::vector<int64_t>{5, 2});
    CHECK(d.longest_cycle == 3);
    CHECK(d.longest_transient == 1);
    CHECK(d.cycle_lengths_sorted() == std::vector<int64_t>{1, 3});

    CHECK(d.on_cycle(1));
    CHECK(d.on_cycle(7));
    CHECK(!d.on_cycle(4));
    CHECK(d.transient_len[3] == 1);  // node 4
    CHECK(d.transient_len[5] == 1);  // node 6
    CHECK(d.cycle_of[0] == d.cycle_of[4]);
    CHECK(d.cycle_of[6] != d.cycle_of[0]);

    // rotation invariance: relabeling the cycle start does not change the set
    FunctionalGraph h = g;
    auto dh = decompose(h);
    CHECK(dh.cycles == d.cycles);
}

TEST_CASE("tiny-format graph structure is frozen") {
    auto g = build_graph(FloatFormat(3, 4), MapId::gauss);
    REQUIRE(g.n() == 49);
    CHECK(g.value(1) == 1.0);
    CHECK(g.value(49) == 0.0);
    CHECK(g.successor(1) == 49);  // 1/1 has no fractional part
    CHECK(g.successor(49) == 49);  // zero is absorbing

    auto d = decompose(g);
    CHECK(d.cycle_lengths_sorted() == std::vector<int64_t>{1, 1});
    std::set<double> fixed;
    for (const auto& c : d.cycles) {
        REQUIRE(c.size() == 1);
        fixed.insert(g.value(c[0]));
    }
    CHECK(fixed == std::set<double>{0.0, 0.625});

    auto sizes = d.component_sizes;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int64_t>{5, 44});
}

TEST_CASE("graph well-formedness across formats") {
    const std::vector<std::string> names = {"e3m4", "e4m3", "e5m2", "binary16"};
    for (const auto& name : names) {
        CAPTURE(name);
        auto g = build_graph(FloatFormat::parse(name), MapId::gauss);
        auto d = decompose(g);

        for (int64_t j = 1; j <= g.n(); ++j) {
            CHECK(g.successor(j) >= 1);
            CHECK(g.successor(j) <= g.n());
        }
        int64_t total = 0;
        for (int64_t s : d.component_sizes) total += s;
        CHECK(total == g.n());

        // every node must land on its cycle after its recorded transient
        for (int64_t j = 1; j <= g.n(); j += 97) {
            int64_t cur = j;
            for (int32_t k = 0; k < d.transient_len[j - 1]; ++k) cur = g.successor(cur);
            CHECK(d.on_cycle(cur));
        }
    }
    CHECK(decompose(build_graph(FloatFormat(4, 3), MapId::gauss)).cycle_lengths_sorted() ==
          std::vector<int64_t>{1, 1, 2});
    CHECK(decompose(build_graph(FloatFormat(5, 2), MapId::gauss)).cycle_lengths_sorted() ==
          std::vector<int64_t>{1});
}

TEST_CASE("overflow handling: redirect versus sink") {
    FloatFormat f(3, 4);
    auto redirect = build_graph(f, MapId::gauss, NanPolicy::redirect_to_one);
    auto sink = build_graph(f, MapId::gauss, NanPolicy::sink);
    REQUIRE(redirect.n() == 49);
    REQUIRE(sink.n() == 50);
    CHECK(sink.successor(50) == 50);
    CHECK(std::isnan(sink.value(50)));

    long nan_nodes = 0;
    for (int64_t j = 1; j <= 49; ++j) {
        const double image = map_eval(redirect.value(j), MapId::gauss, f);
        if (std::isnan(image)) {
            ++nan_nodes;
            CHECK(redirect.successor(j) == 1);
            CHECK(sink.successor(j) == 50);
        } else {
            CHECK(redirect.successor(j) == sink.successor(j));
        }
    }
    CHECK(nan_nodes > 0);
}

TEST_CASE("half-precision overflow boundary sits where the format says") {
    auto g = build_graph(FloatFormat::parse("binary16"), MapId::gauss);
    REQUIRE(g.n() == 15361);
    CHECK(std::isnan(map_eval(g.value(15105), MapId::gauss, g.format)));
    CHECK(!std::isnan(map_eval(g.value(15104), MapId::gauss, g.format)));
    CHECK(g.successor(15105) == 1);
}

TEST_CASE("scaling fit recovers an exact power law and validates its input") {
    std::vector<ScalingRow> rows(2);
    rows[0] = {"a", 100, 6, 4};    // total 10 = 100^0.5
    rows[1] = {"b", 10000, 60, 40};  // total 100 = 10000^0.5
    auto fit = scaling_fit(rows);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS((void)scaling_fit({rows[0]}), std::invalid_argument);
    CHECK_THROWS_AS(
        (void)scaling_report(MapId::gauss, {FloatFormat(3, 4), FloatFormat(4, 3)}),
        std::invalid_argument);
}

TEST_CASE("orbit-length growth across formats is a mild power law") {
    std::vector<FloatFormat> formats = {FloatFormat(3, 4), FloatFormat(4, 3), FloatFormat(5, 2),
                                        FloatFormat(4, 5), FloatFormat(5, 10)};
    auto rep = scaling_report(MapId::gauss, formats);
    REQUIRE(rep.rows.size() == 5);
    for (const auto& row : rep.rows) {
        CHECK(row.longest_cycle >= 1);
        CHECK(row.longest_cycle + row.longest_transient <= row.n);
    }
    CHECK(rep.slope > 0.25);
    CHECK(rep.slope < 0.75);
}

TEST_CASE("graph measures are far from the continuum answer in half precision") {
    auto g = build_graph(FloatFormat::parse("binary16"), MapId::gauss);
    auto d = decompose(g);
    auto vs_gauss = measure_compare(d, g, MeasureId::gauss);
    auto vs_flat = measure_compare(d, g, MeasureId::lebesgue);
    CHECK(vs_gauss.ks >= 0.0);
    CHECK(vs_gauss.ks <= 1.0);
    CHECK(vs_flat.ks >= 0.0);
    CHECK(vs_flat.ks <= 1.0);
    CHECK(vs_gauss.support_nodes >= 1);

    CHECK(vs_gauss.ks > 0.6);
    CHECK(vs_gauss.ks < 0.85);

    const double ks64 = long_orbit_ks(MapId::gauss, MeasureId::gauss);
    CHECK(ks64 < 0.01);
    CHECK(vs_gauss.ks > 10.0 * ks64);
}

TEST_CASE("an exact double fixed point shadows itself with zero error") {
    double z = 0.6;
    for (int i = 0; i < 500; ++i) z = 1.0 / (1.0 + z);
    REQUIRE(1.0 / (1.0 + z) == z);  // attractive fixed point of the double-precision branch map

    std::vector<double> pseudo(10, z);
    auto r = shadow_refine_values(pseudo, 0x1p-53);
    REQUIRE(r.ok);
    CHECK(r.max_dist == 0.0);
    for (double d : r.dist) CHECK(d == 0.0);
    for (long long k : r.branch) CHECK(k == 1);
}

TEST_CASE("value-level shadowing rejects bad pseudo-orbits") {
    CHECK(!shadow_refine_values({0.5}, 0x1p-53).ok);
    CHECK(!shadow_refine_values({0.5, 1.5, 0.2}, 0x1p-53).ok);
    CHECK(!shadow_refine_values({0.5, -0.1}, 0x1p-53).ok);
}

namespace {

void check_shadow_invariants(const ShadowResult& r) {
    REQUIRE(r.pseudo.size() >= 2);
    REQUIRE(r.shadow.size() == r.pseudo.size());
    REQUIRE(r.dist.size() == r.pseudo.size());
    REQUIRE(r.branch.size() == r.pseudo.size() - 1);

    for (size_t n = 0; n + 1 < r.pseudo.size(); ++n) {
        // the shadow is an exact orbit of the chosen branches, up to double roundoff
        const double resid = std::abs(1.0 / r.shadow[n] - (double)r.branch[n] - r.shadow[n + 1]);
        CHECK(resid <= 1e-14 * ((double)r.branch[n] + 1.0));

        // backward contraction: the distance can grow only by the pseudo-orbit's own step defect
        const double step_err =
            std::abs(r.pseudo[n + 1] - (1.0 / r.pseudo[n] - (double)r.branch[n]));
        const double bound = r.dist[n + 1] + step_err;
        CHECK(r.dist[n] <= bound + 1e-15 * (1.0 + bound));
    }
}

}  // namespace

TEST_CASE("every tiny-format pseudo-orbit is shadowable or trivially short") {
    auto g = build_graph(FloatFormat(3, 4), MapId::gauss);
    long ok_count = 0;
    double worst_units = 0.0;
    for (int64_t j = 1; j <= g.n(); ++j) {
        auto r = shadow_refine_gauss(g, j, 20);
        if (!r.ok) {
            CHECK(r.pseudo.size() < 2);
            continue;
        }
        ++ok_count;
        check_shadow_invariants(r);
        worst_units = std::max(worst_units, r.max_dist_units);
    }
    CHECK(ok_count >= 25);
    CHECK(worst_units > 0.0);
    CHECK(worst_units <= 2.0);
}

TEST_CASE("sampled half-precision pseudo-orbits are shadowable") {
    auto g = build_graph(FloatFormat::parse("binary16"), MapId::gauss);
    long ok_count = 0;
    double worst_units = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int64_t j = 1 + (i * (g.n() - 1)) / 99;
        auto r = shadow_refine_gauss(g, j, 50);
        if (!r.ok) {
            CHECK(r.pseudo.size() < 2);
            continue;
        }
        ++ok_count;
        check_shadow_invariants(r);
        worst_units = std::max(worst_units, r.max_dist_units);
    }
    CHECK(ok_count >= 50);
    CHECK(worst_units <= 2.0);
}

TEST_CASE("edge lists round-trip through the documented file shape") {
    auto g = build_graph(FloatFormat(3, 4), MapId::gauss);
    const std::string path = "edges_test_e3m4.csv";
    export_edges(g, path);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 50);
    CHECK(lines[0] == "Column1");
    CHECK(lines[1] == "49");
    std::remove(path.c_str());

    auto big = build_graph(FloatFormat::parse("binary16"), MapId::gauss);
    const std::string big_path = "edges_test_binary16.csv";
    export_edges(big, big_path);
    std::ifstream bin(big_path);
    long count = 0;
    while (std::getline(bin, line)) ++count;
    CHECK(count == 15362);
    bin.close();
    std::remove(big_path.c_str());
}

TEST_CASE("dot export is capped to small graphs") {
    auto g = build_graph(FloatFormat(3, 4), MapId::gauss);
    const std::string path = "graph_test_e3m4.dot";
    export_dot(g, path);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("digraph", 0) == 0);
    in.close();
    std::remove(path.c_str());

    auto big = build_graph(FloatFormat::parse("binary16"), MapId::gauss);
    CHECK_THROWS_AS(export_dot(big, "never_written.dot"), std::invalid_argument);
}
