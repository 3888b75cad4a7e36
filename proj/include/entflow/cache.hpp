#pragma once

// On-disk cache of mode occupations, keyed by everything that affects the
// numeric result (coupling point, block size, quadrature spec, solver tag).
//
// One text file per key:
//
//   entflow-qcache 1
//   key <fnv1a-64 of the key string, hex>
//   gamma/lambda/epsilon/L/quad header lines (%.17g, round-trips exactly)
//   payload <fnv1a-64 of the q block, hex>
//   q <value>            (L lines, descending)
//
// Writes go through a temp file and rename, so concurrent readers never see a
// partial entry. Any parse or checksum mismatch counts as corruption and
// falls back to recomputing (and rewriting) the entry.

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entflow/freefermion.hpp"
#include "entflow/model.hpp"

namespace entflow::rgscan {

inline constexpr const char* kSolverVersionTag = "ff1";

inline uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class ModeCache {
 public:
  struct Stats {
    int hits = 0;
    int misses = 0;
    int corrupt = 0;
  };

  explicit ModeCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  static std::string key_string(const CouplingPoint& pt, BlockSize L,
                                const freefermion::QuadratureSpec& quad) {
    std::ostringstream os;
    os << "v=" << kSolverVersionTag << "|g=" << format_g17(pt.gamma)
       << "|l=" << format_g17(pt.lambda) << "|e=" << format_g17(pt.epsilon) << "|L=" << L.sites
       << "|qs=" << quad.start_nodes << "|qm=" << quad.max_nodes
       << "|qt=" << format_g17(quad.tol);
    return os.str();
  }

  std::filesystem::path entry_path(const CouplingPoint& pt, BlockSize L,
                                   const freefermion::QuadratureSpec& quad) const {
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key_string(pt, L, quad))));
    return dir_ / (std::string(hex) + ".qv");
  }

  ModeOccupations get_or_compute(const CouplingPoint& pt, BlockSize L,
                                 const freefermion::QuadratureSpec& quad = {}) {
    std::filesystem::path path = entry_path(pt, L, quad);
    if (std::filesystem::exists(path)) {
      ModeOccupations cached;
      if (read_entry(path, key_string(pt, L, quad), L.sites, cached)) {
        ++stats_.hits;
        return cached;
      }
      ++stats_.corrupt;  // fall through to recompute and rewrite
    } else {
      ++stats_.misses;
    }
    ModeOccupations fresh = freefermion::mode_occupations(L, pt, quad);
    write_entry(path, pt, L, quad, fresh);
    return fresh;
  }

  const Stats& stats() const { return stats_; }
  const std::filesystem::path& directory() const { return dir_; }

  std::vector<std::filesystem::path> entries() const {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir_))
      if (e.path().extension() == ".qv") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t clear() {
    std::size_t n = 0;
    for (const auto& p : entries()) n += std::filesystem::remove(p) ? 1 : 0;
    return n;
  }

 private:
  static bool read_entry(const std::filesystem::path& path, const std::string& expect_key,
                         int expect_sites, ModeOccupations& out) {
    std::ifstream in(path);
    if (!in) return false;
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "entflow-qcache" || version != 1) return false;

    char key_hex[20];
    std::snprintf(key_hex, sizeof key_hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(expect_key)));
    std::string tag, value;
    if (!(in >> tag >> value) || tag != "key" || value != key_hex) return false;

    double gamma, lambda, epsilon, qtol;
    int sites, qstart, qmax;
    std::string t1, t2, t3, t4, t5;
    if (!(in >> t1 >> gamma >> t2 >> lambda >> t3 >> epsilon >> t4 >> sites >> t5 >> qstart >>
          qmax >> qtol))
      return false;
    if (t1 != "gamma" || t2 != "lambda" || t3 != "epsilon" || t4 != "L" || t5 != "quad")
      return false;
    if (sites != expect_sites) return false;

    std::string payload_hex;
    if (!(in >> tag >> payload_hex) || tag != "payload") return false;

    std::string block;
    ModeOccupations modes;
    modes.sites = sites;
    for (int i = 0; i < sites; ++i) {
      std::string qtag, qval;
      if (!(in >> qtag >> qval) || qtag != "q") return false;
      block += qval;
      block += '\n';
      modes.q.push_back(std::strtod(qval.c_str(), nullptr));
    }
    char block_hex[20];
    std::snprintf(block_hex, sizeof block_hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(block)));
    if (payload_hex != block_hex) return false;
    out = std::move(modes);
    return true;
  }

  void write_entry(const std::filesystem::path& path, const CouplingPoint& pt, BlockSize L,
                   const freefermion::QuadratureSpec& quad, const ModeOccupations& modes) const {
    std::string block;
    for (double q : modes.q) {
      block += format_g17(q);
      block += '\n';
    }
    char key_hex[20], block_hex[20];
    std::snprintf(key_hex, sizeof key_hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key_string(pt, L, quad))));
    std::snprintf(block_hex, sizeof block_hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(block)));

    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << "entflow-qcache 1\n";
      out << "key " << key_hex << '\n';
      out << "gamma " << format_g17(pt.gamma) << '\n';
      out << "lambda " << format_g17(pt.lambda) << '\n';
      out << "epsilon " << format_g17(pt.epsilon) << '\n';
      out << "L " << L.sites << '\n';
      out << "quad " << quad.start_nodes << ' ' << quad.max_nodes << ' ' << format_g17(quad.tol)
          << '\n';
      out << "payload " << block_hex << '\n';
      std::istringstream lines(block);
      std::string line;
      while (std::getline(lines, line)) out << "q " << line << '\n';
      if (!out) fail(ErrorCode::cache_corrupt, "failed writing cache entry " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

  std::filesystem::path dir_;
  Stats stats_;
};

}  // namespace entflow::rgscan
