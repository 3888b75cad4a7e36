// entflow command line: entropy scans, scaling fits, majorization checks and
// finite-chain diagonalization for the XY chain, emitted as CSV or JSON.
//
// Exit codes: 0 success, 1 usage/config error, 2 partial per-point failure,
// 3 majorization verdict failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "entflow/entflow.hpp"

using namespace entflow;
namespace rg = entflow::rgscan;
namespace ff = entflow::freefermion;
namespace sp = entflow::spectra;
namespace ed = entflow::edsolver;
using nlohmann::json;

namespace {

constexpr double kLn2 = 0.69314718055994531;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct OutputOptions {
  std::string format = "csv";
  std::string out_path;
  bool nats = false;
};

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(json row) { rows_.push_back(std::move(row)); }
  std::size_t size() const { return rows_.size(); }

  // Converts *_bits columns to nats in place (output-layer only).
  void convert_to_nats() {
    std::vector<std::string> renamed;
    for (auto& col : columns_) {
      std::string target = col;
      auto pos = col.rfind("_bits");
      if (pos != std::string::npos && pos == col.size() - 5) {
        target = col.substr(0, pos) + "_nats";
        for (auto& row : rows_)
          if (row.contains(col) && row[col].is_number()) {
            row[target] = row[col].get<double>() * kLn2;
            row.erase(col);
          }
      }
      renamed.push_back(target);
    }
    columns_ = std::move(renamed);
  }

  void emit(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows_) {
        json obj = json::object();
        for (const auto& col : columns_) obj[col] = row.contains(col) ? row.at(col) : json();
        arr.push_back(std::move(obj));
      }
      os << arr.dump(1) << '\n';
      return;
    }
    for (std::size_t c = 0; c < columns_.size(); ++c)
      os << (c ? "," : "") << csv_quote(columns_[c]);
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) os << ',';
        if (!row.contains(columns_[c])) continue;
        const json& v = row.at(columns_[c]);
        if (v.is_number_float())
          os << csv_quote(fmt17(v.get<double>()));
        else if (v.is_number_integer())
          os << v.get<int64_t>();
        else if (v.is_boolean())
          os << (v.get<bool>() ? "true" : "false");
        else if (v.is_string())
          os << csv_quote(v.get<std::string>());
      }
      os << '\n';
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<json> rows_;
};

int emit_table(Table& table, const OutputOptions& out) {
  if (out.nats) table.convert_to_nats();
  if (out.out_path.empty()) {
    table.emit(std::cout, out.format);
  } else {
    std::ofstream f(out.out_path, std::ios::trunc);
    if (!f) {
      std::cerr << "cannot open output file " << out.out_path << '\n';
      return 1;
    }
    table.emit(f, out.format);
  }
  return 0;
}

// "a,b,c" or "min:max:step"; an empty string is an empty grid.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.empty()) return grid;
  if (text.find(':') != std::string::npos) {
    double lo, hi, step;
    char c1, c2;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 || hi < lo)
      throw CLI::ValidationError("grid", "expected min:max:step with step > 0");
    int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(lo + i * step);
    return grid;
  }
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(std::strtod(item.c_str(), nullptr));
  }
  return grid;
}

double parse_alpha(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::strtod(s.c_str(), nullptr);
}

struct Shared {
  OutputOptions out;
  ff::QuadratureSpec quad{};
  std::string cache_dir;

  std::unique_ptr<rg::ModeCache> cache;  // created lazily from flag or env

  rg::ModeCache* cache_ptr() {
    if (!cache) {
      std::string dir = cache_dir;
      if (dir.empty())
        if (const char* env = std::getenv("ENTFLOW_CACHE_DIR")) dir = env;
      if (dir.empty()) return nullptr;
      cache = std::make_unique<rg::ModeCache>(dir);
    }
    return cache.get();
  }

  rg::ScanOptions scan_options(double sat_tol = 1e-8) {
    rg::ScanOptions o;
    o.quad = quad;
    o.sat_tol = sat_tol;
    o.cache = cache_ptr();
    return o;
  }
};

json verdict_row(const sp::MajorizationVerdict& v) {
  return json{{"holds", v.holds},
              {"worst_margin", v.worst_margin},
              {"worst_index", v.worst_index},
              {"slack_used", v.slack_used}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state entanglement of the XY spin chain along its field flows"};
  app.require_subcommand(1);
  app.set_config("--config");

  Shared shared;
  app.add_option("--format", shared.out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", shared.out.out_path, "write the table to a file instead of stdout");
  app.add_flag("--nats", shared.out.nats, "emit entropies in nats instead of bits");
  app.add_option("--quad-start", shared.quad.start_nodes, "initial quadrature node count")
      ->capture_default_str();
  app.add_option("--quad-max-nodes", shared.quad.max_nodes, "quadrature node cap")
      ->capture_default_str();
  app.add_option("--quad-tol", shared.quad.tol, "quadrature convergence tolerance")
      ->capture_default_str();
  app.add_option("--cache-dir", shared.cache_dir,
                 "mode-occupation cache directory (or ENTFLOW_CACHE_DIR)");

  int exit_code = 0;

  // ---- scan-lambda ----------------------------------------------------
  struct {
    double gamma = 1.0, lmin = 0.0, lmax = 0.0, step = 0.1, sat_tol = 1e-8;
    int L = 0;
    std::vector<std::string> renyi;
  } sl;
  auto* scan_lambda = app.add_subcommand("scan-lambda", "entropy profile over a field grid");
  scan_lambda->fallthrough();
  scan_lambda->add_option("--gamma", sl.gamma)->required();
  scan_lambda->add_option("--lambda-min", sl.lmin)->required();
  scan_lambda->add_option("--lambda-max", sl.lmax)->required();
  scan_lambda->add_option("--step", sl.step)->capture_default_str();
  scan_lambda->add_option("--L", sl.L, "block size")->required();
  scan_lambda->add_option("--renyi", sl.renyi, "Renyi indices to add (e.g. 0.5,2,inf)")
      ->delimiter(',');
  scan_lambda->add_option("--sat-tol", sl.sat_tol)->capture_default_str();
  scan_lambda->callback([&] {
    if (sl.step <= 0 || sl.lmax < sl.lmin) throw CLI::ValidationError("grid", "bad lambda grid");
    std::vector<double> grid;
    int count = static_cast<int>(std::floor((sl.lmax - sl.lmin) / sl.step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(sl.lmin + i * sl.step);
    rg::ScanOptions opts = shared.scan_options(sl.sat_tol);
    for (const auto& a : sl.renyi) opts.renyi_alphas.push_back(parse_alpha(a));

    auto records = rg::scan_lambda(sl.gamma, grid, block_size(sl.L), opts);
    std::vector<std::string> cols{"gamma", "lambda", "L", "entropy_bits", "saturated", "error"};
    for (const auto& a : sl.renyi) cols.insert(cols.end() - 1, "renyi_" + a + "_bits");
    Table table(cols);
    bool partial = false;
    for (const auto& r : records) {
      json row{{"gamma", r.point.gamma}, {"lambda", r.point.lambda},  {"L", r.block_sites},
               {"entropy_bits", r.entropy_bits}, {"saturated", r.saturated}, {"error", r.error}};
      if (!r.error.empty()) {
        partial = true;
        row.erase("entropy_bits");
        row.erase("saturated");
      }
      for (std::size_t i = 0; i < opts.renyi_alphas.size(); ++i)
        if (r.error.empty()) row["renyi_" + sl.renyi[i] + "_bits"] = r.renyi.at(opts.renyi_alphas[i]);
      table.add_row(std::move(row));
    }
    exit_code = std::max(exit_code, emit_table(table, shared.out));
    if (partial) exit_code = std::max(exit_code, 2);
  });

  // ---- scan-critical --------------------------------------------------
  struct {
    double gamma = 1.0, lambda = 1.0;
    std::vector<int> L_list;
  } sc;
  auto* scan_critical = app.add_subcommand("scan-critical", "block-size scaling fit at a critical point");
  scan_critical->fallthrough();
  scan_critical->add_option("--gamma", sc.gamma)->required();
  scan_critical->add_option("--lambda", sc.lambda)->capture_default_str();
  scan_critical->add_option("--L-list", sc.L_list, "even block sizes")->required()->delimiter(',');
  scan_critical->callback([&] {
    auto fit = rg::fit_critical_blocksize_scaling(sc.gamma, sc.lambda, sc.L_list,
                                                  shared.scan_options());
    Table table({"gamma", "lambda", "slope", "intercept", "residual_rms", "points_used"});
    table.add_row(json{{"gamma", sc.gamma},
                       {"lambda", sc.lambda},
                       {"slope", fit.slope},
                       {"intercept", fit.intercept},
                       {"residual_rms", fit.residual_rms},
                       {"points_used", fit.points_used}});
    exit_code = std::max(exit_code, emit_table(table, shared.out));
  });

  // ---- scan-offcritical -----------------------------------------------
  struct {
    double gamma = 1.0, sat_tol = 1e-6;
    std::string side = "above";
    std::vector<double> deltas;
    int cap = 1024;
  } so;
  auto* scan_off = app.add_subcommand("scan-offcritical", "saturated-entropy scaling off the critical point");
  scan_off->fallthrough();
  scan_off->add_option("--gamma", so.gamma)->required();
  scan_off->add_option("--side", so.side)->check(CLI::IsMember({"above", "below"}))->required();
  scan_off->add_option("--deltas", so.deltas, "|1-lambda| values in (0, 0.1]")->required()->delimiter(',');
  scan_off->add_option("--sat-tol", so.sat_tol)->capture_default_str();
  scan_off->add_option("--L-cap", so.cap)->capture_default_str();
  scan_off->callback([&] {
    auto out = rg::fit_offcritical_scaling(so.gamma, so.deltas,
                                           so.side == "above" ? rg::Side::above : rg::Side::below,
                                           shared.scan_options(so.sat_tol), so.cap);
    Table table({"kind", "delta", "lambda", "L", "entropy_bits", "saturated", "slope", "intercept",
                 "residual_rms", "points_used"});
    for (const auto& p : out.points)
      table.add_row(json{{"kind", "point"}, {"delta", p.delta}, {"lambda", p.lambda},
                         {"L", p.block_sites}, {"entropy_bits", p.entropy_bits},
                         {"saturated", p.saturated}});
    table.add_row(json{{"kind", "fit"},
                       {"slope", out.fit.slope},
                       {"intercept", out.fit.intercept},
                       {"residual_rms", out.fit.residual_rms},
                       {"points_used", out.fit.points_used}});
    exit_code = std::max(exit_code, emit_table(table, shared.out));
  });

  // ---- majorize-flow ---------------------------------------------------
  struct {
    double gamma = 1.0, eps_acc = 1e-16;
    std::vector<double> lambdas;
    int L = 0, k = 10000;
    std::string mode = "both";
  } mf;
  auto* maj_flow = app.add_subcommand("majorize-flow", "majorization along a flow-ordered field list");
  maj_flow->fallthrough();
  maj_flow->add_option("--gamma", mf.gamma)->required();
  maj_flow->add_option("--lambda-list", mf.lambdas, "ordered along the flow")->required()->delimiter(',');
  maj_flow->add_option("--L", mf.L)->required();
  maj_flow->add_option("--k", mf.k)->capture_default_str();
  maj_flow->add_option("--eps-acc", mf.eps_acc)->capture_default_str();
  maj_flow->add_option("--mode", mf.mode)->check(CLI::IsMember({"modewise", "full", "both"}));
  maj_flow->callback([&] {
    for (double lam : mf.lambdas)
      if (lam == 1.0) throw CLI::ValidationError("--lambda-list", "lambda = 1 lies on neither branch");
    for (std::size_t i = 0; i + 1 < mf.lambdas.size(); ++i) {
      CouplingPoint a{mf.gamma, mf.lambdas[i], 0.0}, b{mf.gamma, mf.lambdas[i + 1], 0.0};
      if (!same_branch(a, b))
        throw CLI::ValidationError("--lambda-list", "all points must lie on a single branch");
      if (!further_along_flow(a, b))
        throw CLI::ValidationError("--lambda-list", "list must be ordered along the flow");
    }
    rg::ScanOptions opts = shared.scan_options();
    std::vector<ModeOccupations> modes;
    for (double lam : mf.lambdas)
      modes.push_back(rg::occupations_for({mf.gamma, lam, 0.0}, block_size(mf.L), opts));

    Table table({"lambda_from", "lambda_to", "mode", "holds", "worst_margin", "worst_index",
                 "slack_used"});
    bool all_hold = true;
    for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
      auto emit = [&](const char* kind, const sp::MajorizationVerdict& v) {
        json row = verdict_row(v);
        row["lambda_from"] = mf.lambdas[i];
        row["lambda_to"] = mf.lambdas[i + 1];
        row["mode"] = kind;
        table.add_row(std::move(row));
        all_hold = all_hold && v.holds;
      };
      if (mf.mode != "full") emit("modewise", sp::modewise_majorize(modes[i], modes[i + 1]));
      if (mf.mode != "modewise") {
        auto p = sp::top_k_product_spectrum(modes[i], mf.k, mf.eps_acc);
        auto pp = sp::top_k_product_spectrum(modes[i + 1], mf.k, mf.eps_acc);
        emit("full", sp::majorize(p, pp));
      }
    }
    exit_code = std::max(exit_code, emit_table(table, shared.out));
    if (!all_hold) exit_code = std::max(exit_code, 3);
  });

  // ---- majorize-blocksize ----------------------------------------------
  struct {
    double gamma = 1.0, lambda = 1.0, eps_acc = 1e-16;
    int L = 0, k = 10000;
  } mb;
  auto* maj_block = app.add_subcommand("majorize-blocksize", "p(L+2) < p(L) at one coupling point");
  maj_block->fallthrough();
  maj_block->add_option("--gamma", mb.gamma)->required();
  maj_block->add_option("--lambda", mb.lambda)->required();
  maj_block->add_option("--L", mb.L, "smaller block size")->required();
  maj_block->add_option("--k", mb.k)->capture_default_str();
  maj_block->add_option("--eps-acc", mb.eps_acc)->capture_default_str();
  maj_block->callback([&] {
    rg::ScanOptions opts = shared.scan_options();
    auto small = rg::occupations_for({mb.gamma, mb.lambda, 0.0}, block_size(mb.L), opts);
    auto large = rg::occupations_for({mb.gamma, mb.lambda, 0.0}, block_size(mb.L + 2), opts);
    auto v = sp::blocksize_majorize(small, large, mb.k, mb.eps_acc);
    Table table({"gamma", "lambda", "L_small", "L_large", "holds", "worst_margin", "worst_index",
                 "slack_used"});
    json row = verdict_row(v);
    row["gamma"] = mb.gamma;
    row["lambda"] = mb.lambda;
    row["L_small"] = mb.L;
    row["L_large"] = mb.L + 2;
    table.add_row(std::move(row));
    exit_code = std::max(exit_code, emit_table(table, shared.out));
    if (!v.holds) exit_code = std::max(exit_code, 3);
  });

  // ---- surface -----------------------------------------------------------
  struct {
    std::string gamma_grid, lambda_grid;
    int L = 0;
  } sf;
  auto* surface = app.add_subcommand("surface", "entropy over a (gamma, lambda) grid");
  surface->fallthrough();
  surface->add_option("--gamma-grid", sf.gamma_grid, "comma list or min:max:step")->required();
  surface->add_option("--lambda-grid", sf.lambda_grid, "comma list or min:max:step")->required();
  surface->add_option("--L", sf.L)->required();
  surface->callback([&] {
    auto gammas = parse_grid(sf.gamma_grid);
    auto lambdas = parse_grid(sf.lambda_grid);
    rg::ScanOptions opts = shared.scan_options();
    Table table({"gamma", "lambda", "L", "entropy_bits", "circle_dev", "error"});
    bool partial = false;
    for (double g : gammas)
      for (double lam : lambdas) {
        json row{{"gamma", g}, {"lambda", lam}, {"L", sf.L},
                 {"circle_dev", std::abs(g * g + lam * lam - 1.0)}, {"error", ""}};
        try {
          auto modes = rg::occupations_for(validate({g, lam, 0.0}), block_size(sf.L), opts);
          row["entropy_bits"] = sp::block_entropy(modes);
        } catch (const Error& e) {
          row["error"] = e.what();
          partial = true;
        }
        table.add_row(std::move(row));
      }
    exit_code = std::max(exit_code, emit_table(table, shared.out));
    if (partial) exit_code = std::max(exit_code, 2);
  });

  // ---- ed -----------------------------------------------------------------
  struct {
    int N = 12, L = 0, top = 16, cap = 16;
    double gamma = 1.0, epsilon = 0.0, eps_acc = 1e-16;
    std::vector<double> lambdas;
    std::string boundary = "open";
  } edc;
  auto* ed_cmd = app.add_subcommand("ed", "finite-chain exact diagonalization");
  ed_cmd->fallthrough();
  ed_cmd->add_option("--N", edc.N, "chain length")->required();
  ed_cmd->add_option("--gamma", edc.gamma)->required();
  ed_cmd->add_option("--lambda,--lambda-list", edc.lambdas)->required()->delimiter(',');
  ed_cmd->add_option("--epsilon", edc.epsilon)->capture_default_str();
  ed_cmd->add_option("--L-block", edc.L)->required();
  ed_cmd->add_option("--top", edc.top, "spectrum values to print")->capture_default_str();
  ed_cmd->add_option("--eps-acc", edc.eps_acc)->capture_default_str();
  ed_cmd->add_option("--N-cap", edc.cap)->capture_default_str();
  ed_cmd->add_option("--boundary", edc.boundary)->check(CLI::IsMember({"open", "periodic"}));
  ed_cmd->callback([&] {
    ed::EdOptions opts;
    opts.site_cap = edc.cap;
    ed::Boundary bc = edc.boundary == "periodic" ? ed::Boundary::periodic : ed::Boundary::open;
    Table table({"kind", "N", "gamma", "lambda", "epsilon", "L", "rank", "prob", "entropy_bits",
                 "energy", "lambda_to", "holds", "worst_margin"});
    std::vector<sp::TruncatedSpectrum> spectra;
    for (double lam : edc.lambdas) {
      auto gs = ed::ground_state({edc.N, bc, {edc.gamma, lam, edc.epsilon}}, opts);
      auto spec = ed::reduced_spectrum(gs, block_size(edc.L), edc.eps_acc);
      double entropy = sp::shannon_entropy_bits(spec.probs);
      int shown = std::min<int>(edc.top, static_cast<int>(spec.probs.size()));
      for (int r = 0; r < shown; ++r)
        table.add_row(json{{"kind", "eigenvalue"}, {"N", edc.N}, {"gamma", edc.gamma},
                           {"lambda", lam}, {"epsilon", edc.epsilon}, {"L", edc.L},
                           {"rank", r + 1}, {"prob", spec.probs[r]}, {"entropy_bits", entropy},
                           {"energy", gs.energy}});
      spectra.push_back(std::move(spec));
    }
    bool all_hold = true;
    if (edc.lambdas.size() > 1) {
      for (std::size_t i = 0; i + 1 < spectra.size(); ++i) {
        auto v = sp::majorize(spectra[i], spectra[i + 1]);
        all_hold = all_hold && v.holds;
        table.add_row(json{{"kind", "verdict"}, {"N", edc.N}, {"gamma", edc.gamma},
                           {"lambda", edc.lambdas[i]}, {"lambda_to", edc.lambdas[i + 1]},
                           {"holds", v.holds}, {"worst_margin", v.worst_margin}});
      }
    }
    exit_code = std::max(exit_code, emit_table(table, shared.out));
    if (!all_hold) exit_code = std::max(exit_code, 3);
  });

  // ---- lemma-test -----------------------------------------------------------
  struct {
    int trials = 1000, max_len = 8;
    unsigned long seed = 1;
  } lt;
  auto* lemma = app.add_subcommand("lemma-test", "random product-majorization property harness");
  lemma->fallthrough();
  lemma->add_option("--trials", lt.trials)->capture_default_str();
  lemma->add_option("--max-len", lt.max_len)->capture_default_str();
  lemma->add_option("--seed", lt.seed)->capture_default_str();
  lemma->callback([&] {
    std::mt19937_64 rng(lt.seed);
    auto random_sorted = [&](int len) {
      std::uniform_real_distribution<double> u(0.01, 1.0);
      std::vector<double> v(len);
      double total = 0;
      for (double& x : v) total += x = u(rng);
      for (double& x : v) x /= total;
      std::sort(v.begin(), v.end(), std::greater<>());
      return v;
    };
    auto t_mix = [&](std::vector<double> v, int steps) {
      std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
      std::uniform_real_distribution<double> frac(0.0, 1.0);
      for (int s = 0; s < steps; ++s) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        double t = frac(rng), a = v[i], b = v[j];
        v[i] = (1 - t) * a + t * b;
        v[j] = t * a + (1 - t) * b;
      }
      std::sort(v.begin(), v.end(), std::greater<>());
      return v;
    };
    Table table({"trial", "len_x", "len_y", "holds", "worst_margin"});
    int failures = 0;
    std::uniform_int_distribution<int> len_dist(2, std::max(2, lt.max_len));
    for (int trial = 0; trial < lt.trials; ++trial) {
      int lx = len_dist(rng), ly = len_dist(rng);
      auto xp = random_sorted(lx);
      auto x = t_mix(xp, 4);
      auto yp = random_sorted(ly);
      auto y = t_mix(yp, 4);
      auto v = sp::lemma_product_majorization(x, xp, y, yp);
      failures += v.holds ? 0 : 1;
      table.add_row(json{{"trial", trial}, {"len_x", lx}, {"len_y", ly}, {"holds", v.holds},
                         {"worst_margin", v.worst_margin}});
    }
    exit_code = std::max(exit_code, emit_table(table, shared.out));
    std::cerr << "lemma-test: " << (lt.trials - failures) << "/" << lt.trials << " held\n";
    if (failures > 0) exit_code = std::max(exit_code, 3);
  });

  // ---- cache ------------------------------------------------------------------
  auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the occupation cache");
  cache_cmd->fallthrough();
  cache_cmd->require_subcommand(1);
  auto* cache_inspect = cache_cmd->add_subcommand("inspect", "list cache entries");
  cache_inspect->fallthrough();
  cache_inspect->callback([&] {
    rg::ModeCache* cache = shared.cache_ptr();
    if (!cache) throw CLI::ValidationError("--cache-dir", "no cache directory configured");
    Table table({"file", "bytes"});
    for (const auto& p : cache->entries())
      table.add_row(json{{"file", p.filename().string()},
                         {"bytes", static_cast<int64_t>(std::filesystem::file_size(p))}});
    exit_code = std::max(exit_code, emit_table(table, shared.out));
    std::cerr << table.size() << " entries in " << cache->directory().string() << '\n';
  });
  auto* cache_clear = cache_cmd->add_subcommand("clear", "delete all cache entries");
  cache_clear->fallthrough();
  cache_clear->callback([&] {
    rg::ModeCache* cache = shared.cache_ptr();
    if (!cache) throw CLI::ValidationError("--cache-dir", "no cache directory configured");
    std::cerr << "removed " << cache->clear() << " entries\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const Error& e) {
    // solver errors surfacing outside per-point handling
    std::cerr << e.what() << '\n';
    return e.code() == ErrorCode::capacity_exceeded || e.code() == ErrorCode::invalid_argument ||
                   e.code() == ErrorCode::insufficient_points
               ? 1
               : 2;
  }
  return exit_code;
}
