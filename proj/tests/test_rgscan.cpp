#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "entflow/cache.hpp"
#include "entflow/rgscan.hpp"

using namespace entflow;
namespace rg = entflow::rgscan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("entflow-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_SUITE_BEGIN("rgscan");

TEST_CASE("line fits recover synthetic scaling laws exactly") {
  double a = 1.0 / 6.0, b = 0.4711;
  std::vector<double> xs, ys;
  for (int L : {16, 32, 64, 128, 256}) {
    xs.push_back(std::log2(double(L)));
    ys.push_back(a * std::log2(double(L)) + b);
  }
  auto fit = rg::fit_line(xs, ys);
  CHECK(fit.slope == doctest::Approx(a).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(b).epsilon(1e-10));
  CHECK(fit.residual_rms < 1e-10);
  CHECK(fit.points_used == 5);
}

TEST_CASE("block-size fit validates its inputs") {
  CHECK_THROWS_AS(rg::fit_critical_blocksize_scaling(1.0, 1.0, {16, 32, 64}), Error);
  CHECK_THROWS_AS(rg::fit_critical_blocksize_scaling(1.0, 1.0, {15, 32, 64, 128}), Error);
}

TEST_CASE("lambda scans: limits, order, record contents") {
  auto records = rg::scan_lambda(1.0, {2.0, 1e6, 0.0}, block_size(10));
  REQUIRE(records.size() == 3);
  CHECK(records[0].point.lambda == 2.0);
  CHECK(records[1].point.lambda == 1e6);
  CHECK(records[2].point.lambda == 0.0);
  for (const auto& r : records) CHECK(r.error.empty());
  CHECK(records[1].entropy_bits < 1e-4);
  CHECK(records[2].entropy_bits == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(records[0].solver == rg::SolverKind::freefermion);
}

TEST_CASE("lambda scans record per-point failures without aborting") {
  rg::ScanOptions opts;
  opts.quad = {256, 1 << 14, 1e-12};  // cap too low for the critical point
  auto records = rg::scan_lambda(1.0, {0.5, 1.0, 1.5}, block_size(8), opts);
  REQUIRE(records.size() == 3);
  CHECK(records[0].error.empty());
  CHECK_FALSE(records[1].error.empty());
  CHECK(records[1].error.find("quadrature_not_converged") != std::string::npos);
  CHECK(records[2].error.empty());
}

TEST_CASE("saturation flags reflect the local entropy increment") {
  rg::ScanOptions opts;
  opts.sat_tol = 1e-8;
  auto sat = rg::scan_lambda(1.0, {2.0}, block_size(64), opts);
  CHECK(sat[0].saturated);
  auto unsat = rg::scan_lambda(1.0, {1.05}, block_size(10), opts);
  CHECK_FALSE(unsat[0].saturated);
}

TEST_CASE("Renyi columns are filled and ordered in alpha") {
  rg::ScanOptions opts;
  opts.renyi_alphas = {0.5, 2.0, std::numeric_limits<double>::infinity()};
  auto records = rg::scan_lambda(1.0, {1.4}, block_size(32), opts);
  const auto& r = records[0];
  REQUIRE(r.renyi.size() == 3);
  double r_half = r.renyi.at(0.5);
  double r_two = r.renyi.at(2.0);
  double r_inf = r.renyi.at(std::numeric_limits<double>::infinity());
  CHECK(r_half >= r.entropy_bits);
  CHECK(r.entropy_bits >= r_two);
  CHECK(r_two >= r_inf);
}

TEST_CASE("UV/IR comparison") {
  auto ok = rg::uv_ir_comparison(1.0, 1.05, 2.0, {20, 40});
  CHECK(ok == std::vector<bool>{true, true});
  auto equal = rg::uv_ir_comparison(1.0, 1.5, 1.5, {16});
  CHECK(equal == std::vector<bool>{true});
  // swapped arguments at distinct points violate the inequality
  auto swapped = rg::uv_ir_comparison(1.0, 2.0, 1.05, {20, 40});
  CHECK(swapped == std::vector<bool>{false, false});
  CHECK_THROWS_AS(rg::uv_ir_comparison(1.0, 0.8, 1.2, {16}), Error);
}

TEST_CASE("critical-line constants") {
  rg::ScanOptions opts;
  opts.quad.tol = 1e-8;
  auto same = rg::critical_line_constant({{1.0, 1.0}}, block_size(32), opts);
  CHECK(same[0].first == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same[0].second == 0.0);

  auto rows = rg::critical_line_constant({{1.0, 0.5}, {0.5, 1.0}}, block_size(64), opts);
  CHECK(rows[0].second == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(rows[1].second == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  CHECK(rows[0].first == doctest::Approx(-rows[1].first).epsilon(1e-10));
  CHECK(std::abs(rows[0].first - rows[0].second) < 0.01);
  CHECK_THROWS_AS(rg::critical_line_constant({{1.5, 0.5}}, block_size(16), opts), Error);
}

TEST_CASE("scans are deterministic") {
  rg::ScanOptions opts;
  opts.renyi_alphas = {2.0};
  auto a = rg::scan_lambda(1.0, {1.3, 1.7}, block_size(24), opts);
  auto b = rg::scan_lambda(1.0, {1.3, 1.7}, block_size(24), opts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].entropy_bits == b[i].entropy_bits);  // bitwise
    CHECK(a[i].renyi.at(2.0) == b[i].renyi.at(2.0));
  }
}

TEST_CASE("saturated entropy is non-increasing along the flow above lambda*") {
  // L = 256 sits beyond the largest correlation length on this grid
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(1.05 + 0.05 * i);
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : grid) {
    double s = spectra::block_entropy(
        freefermion::mode_occupations(block_size(256), {1.0, lam, 0.0}));
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
}

TEST_CASE("offcritical fit: unsaturated points are excluded") {
  rg::ScanOptions opts;
  opts.sat_tol = 1e-5;
  // delta = 0.001 cannot saturate under a small cap; the other three can
  auto out = rg::fit_offcritical_scaling(1.0, {0.1, 0.08, 0.06, 0.001}, rg::Side::above, opts, 256);
  REQUIRE(out.points.size() == 4);
  CHECK(out.points[0].saturated);
  CHECK(out.points[1].saturated);
  CHECK(out.points[2].saturated);
  CHECK_FALSE(out.points[3].saturated);
  CHECK(out.fit.points_used == 3);
  CHECK_THROWS_AS(rg::fit_offcritical_scaling(1.0, {0.5}, rg::Side::above, opts), Error);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("cache");

TEST_CASE("cache round trip is bit-identical") {
  TempDir tmp;
  rg::ModeCache cache(tmp.path);
  CouplingPoint pt{1.0, 1.7, 0.0};
  auto fresh = cache.get_or_compute(pt, block_size(12));
  CHECK(cache.stats().misses == 1);
  auto cached = cache.get_or_compute(pt, block_size(12));
  CHECK(cache.stats().hits == 1);
  REQUIRE(cached.q.size() == fresh.q.size());
  CHECK(std::memcmp(cached.q.data(), fresh.q.data(), fresh.q.size() * sizeof(double)) == 0);
  CHECK(cache.entries().size() == 1);
}

TEST_CASE("cache keys include the quadrature spec") {
  TempDir tmp;
  rg::ModeCache cache(tmp.path);
  CouplingPoint pt{1.0, 1.7, 0.0};
  freefermion::QuadratureSpec a{256, 1 << 20, 1e-12};
  freefermion::QuadratureSpec b{512, 1 << 20, 1e-12};
  CHECK(cache.entry_path(pt, block_size(8), a) != cache.entry_path(pt, block_size(8), b));
  cache.get_or_compute(pt, block_size(8), a);
  cache.get_or_compute(pt, block_size(8), b);
  CHECK(cache.stats().misses == 2);
  CHECK(cache.entries().size() == 2);
}

TEST_CASE("corrupted entries are recomputed and rewritten") {
  TempDir tmp;
  rg::ModeCache cache(tmp.path);
  CouplingPoint pt{0.9, 1.4, 0.0};
  auto fresh = cache.get_or_compute(pt, block_size(6));
  auto path = cache.entry_path(pt, block_size(6), {});

  // flip a payload digit
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  auto pos = text.rfind("q 0.");
  REQUIRE(pos != std::string::npos);
  text[pos + 4] = text[pos + 4] == '5' ? '6' : '5';
  std::ofstream(path, std::ios::trunc) << text;

  auto recovered = cache.get_or_compute(pt, block_size(6));
  CHECK(cache.stats().corrupt == 1);
  REQUIRE(recovered.q.size() == fresh.q.size());
  CHECK(std::memcmp(recovered.q.data(), fresh.q.data(), fresh.q.size() * sizeof(double)) == 0);
  // the rewritten entry reads back clean
  cache.get_or_compute(pt, block_size(6));
  CHECK(cache.stats().hits == 1);
}

TEST_CASE("clear removes entries") {
  TempDir tmp;
  rg::ModeCache cache(tmp.path);
  cache.get_or_compute({1.0, 1.9, 0.0}, block_size(4));
  CHECK(cache.clear() == 1);
  CHECK(cache.entries().empty());
}

TEST_SUITE_END();
