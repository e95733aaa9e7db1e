#pragma once

// Monte Carlo frequency estimation and rejection-sampling witness search.
//
// Tables are drawn with i.i.d. Exp(1) entries. Normalizing to the probability
// simplex is skipped: every sign test downstream is invariant under a common
// positive scale. Work is split into per-worker substreams derived from
// (seed, worker); results depend only on (seed, workers, budget).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <deque>
#include <cstdint>
#include <ctime>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "simpson/errors.hpp"
#include "simpson/feasibility.hpp"
#include "simpson/orbits.hpp"
#include "simpson/symmetry.hpp"
#include "simpson/tables.hpp"
#include "simpson/triangulation.hpp"

namespace simpson {

struct SamplerConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  double tolerance = kDefaultTolerance;
};

/// Deterministic Exp(1) stream: mt19937_64 seeded through seed_seq, inverse-CDF
/// transform on 53-bit uniforms. Both steps are fully specified by the standard.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double exp1() { return -std::log(uniform_open()); }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  template <std::size_t N>
  std::array<double, N> exp_table() {
    std::array<double, N> t{};
    for (auto& e : t) e = exp1();
    return t;
  }

 private:
  std::mt19937_64 engine_;
};

/// One table of 4 (dimension 2) or 8 (dimension 3) positive entries from the
/// configured seed's first stream.
inline std::vector<double> sample_table(const SamplerConfig& config, int dimension) {
  Sampler s(config.seed, 0);
  if (dimension == 2) {
    const auto t = s.exp_table<4>();
    return {t.begin(), t.end()};
  }
  if (dimension == 3) {
    const auto t = s.exp_table<8>();
    return {t.begin(), t.end()};
  }
  throw DomainError("dimension must be 2 or 3");
}

/// Runs fn(worker) for each worker, on threads when there is more than one.
inline void run_workers(int workers, const std::function<void(int)>& fn) {
  if (workers <= 1) {
    fn(0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) threads.emplace_back(fn, w);
  for (auto& t : threads) t.join();
}

inline int default_worker_count() {
  if (const char* env = std::getenv("SIMPSON_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// Frequency estimation

struct FrequencyEstimate {
  int dimension = 3;
  std::uint64_t seed = 0;
  int workers = 1;
  double tolerance = kDefaultTolerance;
  std::uint64_t sample_count = 0;
  std::uint64_t same_triangulation = 0;
  std::uint64_t conversion = 0;
  std::uint64_t same_no_conversion = 0;
  std::uint64_t degenerate_discards = 0;

  std::uint64_t effective() const { return sample_count - degenerate_discards; }
  double rate(std::uint64_t count) const {
    return effective() == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(effective());
  }
  double standard_error(std::uint64_t count) const {
    if (effective() == 0) return 0.0;
    const double p = rate(count);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(effective()));
  }
  double same_rate() const { return rate(same_triangulation); }
  double conversion_rate() const { return rate(conversion); }
  double same_no_conversion_rate() const { return rate(same_no_conversion); }

  FrequencyEstimate& operator+=(const FrequencyEstimate& o) {
    sample_count += o.sample_count;
    same_triangulation += o.same_triangulation;
    conversion += o.conversion;
    same_no_conversion += o.same_no_conversion;
    degenerate_discards += o.degenerate_discards;
    return *this;
  }
};

namespace detail {

/// +1 / -1 for the correlation sign of a positive 2x2 table (order 00,01,10,11); 0 on a near-tie.
inline int float_det_sign(double f00, double f01, double f10, double f11, double tol) {
  const double through = f00 * f11;
  const double across = f01 * f10;
  if (std::fabs(through - across) <= tol * std::max(through, across)) return 0;
  return through > across ? 1 : -1;
}

template <class Body>
FrequencyEstimate run_estimate(const SamplerConfig& config, std::uint64_t n, int dimension, Body body) {
  if (n == 0) throw DomainError("sample count must be at least 1");
  const int workers = std::max(1, config.workers);
  std::vector<FrequencyEstimate> partial(workers);
  run_workers(workers, [&](int w) {
    const std::uint64_t begin = n * static_cast<std::uint64_t>(w) / workers;
    const std::uint64_t end = n * static_cast<std::uint64_t>(w + 1) / workers;
    Sampler sampler(config.seed, static_cast<std::uint64_t>(w));
    FrequencyEstimate& est = partial[w];
    for (std::uint64_t i = begin; i < end; ++i) body(sampler, est);
    est.sample_count = end - begin;
  });
  FrequencyEstimate total;
  total.dimension = dimension;
  total.seed = config.seed;
  total.workers = workers;
  total.tolerance = config.tolerance;
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace detail

/// 2x2x2 tables split along z into two 2x2 layers. "same" counts layers with a
/// common correlation sign; "conversion" counts reversals of the summed layer.
inline FrequencyEstimate estimate_2d_reversal(const SamplerConfig& config, std::uint64_t n) {
  const double tol = config.tolerance;
  return detail::run_estimate(config, n, 2, [tol](Sampler& s, FrequencyEstimate& est) {
    const auto t = s.exp_table<8>();
    // layer z: entries (x, y, z) at codes 4x + 2y + z
    const int lo = detail::float_det_sign(t[0], t[2], t[4], t[6], tol);
    const int hi = detail::float_det_sign(t[1], t[3], t[5], t[7], tol);
    const int sum = detail::float_det_sign(t[0] + t[1], t[2] + t[3], t[4] + t[5], t[6] + t[7], tol);
    if (lo == 0 || hi == 0 || sum == 0) {
      ++est.degenerate_discards;
      return;
    }
    if (lo != hi) return;
    ++est.same_triangulation;
    if (sum != lo) {
      ++est.conversion;
    } else {
      ++est.same_no_conversion;
    }
  });
}

/// 2x2x2x2 tables split along the last axis into two 2x2x2 layers, each layer
/// and their sum classified through the float path.
inline FrequencyEstimate estimate_3d_conversion(const SamplerConfig& config, std::uint64_t n,
                                                const Catalog& cat = catalog()) {
  const double tol = config.tolerance;
  return detail::run_estimate(config, n, 3, [tol, &cat](Sampler& s, FrequencyEstimate& est) {
    // p_{ijkl} drawn with l fastest
    std::array<double, 8> f{}, g{}, hf{}, hg{}, hs{};
    for (int c = 0; c < 8; ++c) {
      f[c] = s.exp1();
      g[c] = s.exp1();
    }
    for (int c = 0; c < 8; ++c) {
      hf[c] = std::log(f[c]);
      hg[c] = std::log(g[c]);
      hs[c] = std::log(f[c] + g[c]);
    }
    const auto a = cat.classify_heights(hf, tol);
    const auto b = cat.classify_heights(hg, tol);
    const auto c = cat.classify_heights(hs, tol);
    if (!a || !b || !c) {
      ++est.degenerate_discards;
      return;
    }
    if (*a != *b) return;
    ++est.same_triangulation;
    if (*c != *a) {
      ++est.conversion;
    } else {
      ++est.same_no_conversion;
    }
  });
}

// ---------------------------------------------------------------------------
// Witnesses

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Exact tables realizing a class. For a pair key (A, S) both tables induce A
/// and their sum induces S; for a triple key (A, B, S) the tables induce A and
/// B. Keys hold the labeled ids, not necessarily class representatives.
struct Witness {
  ClassKey key;
  Table3 f;
  Table3 g;
  std::string verified_at;

  bool is_pair() const { return key.size() == 2; }
  int sum_id() const { return key.back(); }
  /// Pair witnesses whose sum changes triangulation.
  bool is_conversion() const { return is_pair() && key[0] != key[1]; }
};

/// Re-checks every membership of a witness with exact arithmetic.
inline bool verify_witness(const ClassKey& key, const Table3& f, const Table3& g, const Catalog& cat = catalog()) {
  if (key.size() != 2 && key.size() != 3) return false;
  const int want_f = key[0];
  const int want_g = key.size() == 2 ? key[0] : key[1];
  const int want_sum = key.back();
  try {
    return cat.classify(f).id() == want_f && cat.classify(g).id() == want_g && cat.classify(f + g).id() == want_sum;
  } catch (const DegenerateTable&) {
    return false;
  }
}

inline bool verify_witness(const Witness& w, const Catalog& cat = catalog()) { return verify_witness(w.key, w.f, w.g, cat); }

enum class ConversionVerdict { Conversion, SameNoConversion, NotSameTriangulation };

inline const char* to_string(ConversionVerdict v) {
  switch (v) {
    case ConversionVerdict::Conversion: return "Conversion";
    case ConversionVerdict::SameNoConversion: return "SameNoConversion";
    case ConversionVerdict::NotSameTriangulation: return "NotSameTriangulation";
  }
  return "?";
}

struct ConversionReport {
  int triangulation_f = 0;
  int triangulation_g = 0;
  int triangulation_sum = 0;
  ConversionVerdict verdict = ConversionVerdict::NotSameTriangulation;
};

/// Exact classification of two tables and their sum. DegenerateTable propagates.
inline ConversionReport detect_conversion(const Table3& f, const Table3& g, const Catalog& cat = catalog()) {
  ConversionReport r;
  r.triangulation_f = cat.classify(f).id();
  r.triangulation_g = cat.classify(g).id();
  r.triangulation_sum = cat.classify(f + g).id();
  if (r.triangulation_f != r.triangulation_g) {
    r.verdict = ConversionVerdict::NotSameTriangulation;
  } else if (r.triangulation_sum != r.triangulation_f) {
    r.verdict = ConversionVerdict::Conversion;
  } else {
    r.verdict = ConversionVerdict::SameNoConversion;
  }
  return r;
}

namespace detail {

/// transporters[x][t]: group indices g with g.x = t.
inline const std::vector<std::vector<std::vector<std::uint8_t>>>& transporters(const Catalog& cat) {
  static const auto table = [&cat] {
    std::vector<std::vector<std::vector<std::uint8_t>>> out(
        cat.size() + 1, std::vector<std::vector<std::uint8_t>>(cat.size() + 1));
    for (std::size_t g = 0; g < cube_symmetries().size(); ++g)
      for (int x = 1; x <= cat.size(); ++x) out[x][cat.image(g, x)].push_back(static_cast<std::uint8_t>(g));
    return out;
  }();
  return table;
}

/// Draws Exp(1) tables and moves them by a uniformly chosen symmetry onto the
/// requested summand triangulations. Draws fitting a slot are queued, so no
/// accepted draw is thrown away. Conditioned on landing in the target's
/// orbit, the moved table is distributed as a draw conditioned on inducing
/// the target itself.
class SummandSampler {
 public:
  SummandSampler(int first, int second, std::uint64_t seed, std::uint64_t stream, double tol, const Catalog& cat)
      : first_(first), second_(second), sampler_(seed, stream), tol_(tol), cat_(cat),
        moves_(transporters(cat)) {}

  struct Attempt {
    std::array<double, 8> f{}, g{};
    std::optional<int> sum;
  };

  Attempt next() {
    const int orbit_f = cat_.at(first_).type_class();
    const int orbit_g = cat_.at(second_).type_class();
    while (pending_f_.empty() || pending_g_.empty()) {
      const auto t = sampler_.exp_table<8>();
      ++draws_;
      const auto id = cat_.classify_entries(t, tol_);
      if (!id) continue;
      const int orbit = cat_.at(*id).type_class();
      // a draw fitting both slots goes to the shorter queue
      const bool fits_f = orbit == orbit_f, fits_g = orbit == orbit_g;
      if (fits_f && (!fits_g || pending_f_.size() <= pending_g_.size())) {
        pending_f_.push_back(move_onto(t, *id, first_));
      } else if (fits_g) {
        pending_g_.push_back(move_onto(t, *id, second_));
      }
    }
    Attempt a;
    a.f = pending_f_.front();
    a.g = pending_g_.front();
    pending_f_.pop_front();
    pending_g_.pop_front();
    std::array<double, 8> s{};
    for (int c = 0; c < 8; ++c) s[c] = a.f[c] + a.g[c];
    a.sum = cat_.classify_entries(s, tol_);
    return a;
  }

  std::uint64_t draws() const { return draws_; }

 private:
  std::array<double, 8> move_onto(const std::array<double, 8>& t, int from, int to) {
    const auto& choices = moves_[from][to];
    const auto g = choices[choices.size() == 1 ? 0 : sampler_.below(choices.size())];
    return apply_to_values(cube_symmetries()[g], t);
  }

  int first_, second_;
  Sampler sampler_;
  double tol_;
  const Catalog& cat_;
  const std::vector<std::vector<std::vector<std::uint8_t>>>& moves_;
  std::uint64_t draws_ = 0;
  std::deque<std::array<double, 8>> pending_f_, pending_g_;
};

inline std::uint64_t stream_id(const ClassKey& summands, std::uint64_t worker) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int id : summands) h = (h ^ static_cast<std::uint64_t>(id)) * 0x100000001b3ULL;
  return h ^ (worker << 48);
}

inline constexpr std::uint64_t kRoundAttempts = 1u << 14;

}  // namespace detail

struct SearchResult {
  std::optional<Witness> witness;
  std::uint64_t attempts = 0;
  bool exhausted() const { return !witness.has_value(); }
};

/// Rejection search for one labeled class key. An attempt is one candidate
/// pair of summand tables. Returns the first exactly verified witness in
/// (round, worker) order, or an exhausted result after `budget` attempts.
inline SearchResult search_witness(const ClassKey& key, const SamplerConfig& config, std::uint64_t budget,
                                   const Catalog& cat = catalog()) {
  detail::validate_key(key, cat);
  if (key.size() == 1) throw DomainError("witness keys are pairs or triples");
  if (obstruction_of_key(key, cat).obstructed) {
    throw DomainError("class " + key_to_string(key) + " is obstructed; no witness can exist");
  }
  const int first = key[0];
  const int second = key.size() == 2 ? key[0] : key[1];
  const int target = key.back();
  const int workers = std::max(1, config.workers);

  std::vector<detail::SummandSampler> samplers;
  for (int w = 0; w < workers; ++w) {
    samplers.emplace_back(first, second, config.seed, detail::stream_id({first, second, target}, w), config.tolerance,
                          cat);
  }
  SearchResult result;
  std::uint64_t remaining = budget;
  while (remaining > 0) {
    const std::uint64_t round = std::min<std::uint64_t>(remaining, detail::kRoundAttempts * workers);
    std::vector<std::optional<Witness>> hits(workers);
    std::vector<std::uint64_t> used(workers, 0);
    run_workers(workers, [&](int w) {
      const std::uint64_t quota = round * (w + 1) / workers - round * w / workers;
      for (std::uint64_t i = 0; i < quota; ++i) {
        const auto a = samplers[w].next();
        ++used[w];
        if (a.sum != target) continue;
        Table3 f = Table3::from_doubles(a.f);
        Table3 g = Table3::from_doubles(a.g);
        if (!verify_witness(key, f, g, cat)) continue;
        hits[w] = Witness{key, std::move(f), std::move(g), utc_timestamp()};
        break;
      }
    });
    for (int w = 0; w < workers; ++w) result.attempts += used[w];
    remaining -= round;
    for (int w = 0; w < workers; ++w) {
      if (hits[w]) {
        result.witness = std::move(hits[w]);
        return result;
      }
    }
  }
  return result;
}

/// A summand group: every class whose summands can be moved onto (first, second).
struct SummandGroup {
  int first = 0;
  int second = 0;
  std::vector<int> targets;  // non-obstructed class indices in the partition
};

/// Groups the non-obstructed classes of arity 2 or 3 by the orbit of their summands.
inline std::vector<SummandGroup> summand_groups(int arity, const Catalog& cat = catalog()) {
  if (arity != 2 && arity != 3) throw DomainError("summand groups exist for arity 2 and 3");
  const auto& part = orbit_partition(arity);
  std::map<std::pair<int, int>, SummandGroup> groups;
  for (std::size_t i = 0; i < part.classes().size(); ++i) {
    const auto& rep = part.classes()[i].representative;
    int a = rep[0];
    int b = arity == 2 ? rep[0] : rep[1];
    // canonical summands: least image of the unordered pair
    std::pair<int, int> best{cat.size() + 1, cat.size() + 1};
    for (std::size_t g = 0; g < cube_symmetries().size(); ++g) {
      int x = cat.image(g, a), y = cat.image(g, b);
      if (x > y) std::swap(x, y);
      best = std::min(best, std::make_pair(x, y));
    }
    auto& grp = groups[best];
    grp.first = best.first;
    grp.second = best.second;
    if (!obstruction_of_key(rep, cat).obstructed) grp.targets.push_back(static_cast<int>(i));
  }
  std::vector<SummandGroup> out;
  for (auto& [k, g] : groups) out.push_back(std::move(g));
  return out;
}

struct BulkSearchReport {
  int arity = 2;
  std::map<int, Witness> found;  // class index -> witness
  std::vector<int> unresolved;   // non-obstructed class indices without a witness
  std::uint64_t attempts = 0;
  /// Verified witnesses landing in obstructed classes. Must stay zero.
  std::uint64_t soundness_violations = 0;
};

/// Searches every non-obstructed class of the given arity, one summand group at
/// a time; each group stops once all of its classes are witnessed or after
/// `budget_per_group` attempts.
inline BulkSearchReport search_all(int arity, const SamplerConfig& config, std::uint64_t budget_per_group,
                                   const Catalog& cat = catalog(),
                                   const std::function<void(const SummandGroup&, std::size_t)>& progress = {}) {
  const auto& part = orbit_partition(arity);
  const int workers = std::max(1, config.workers);
  BulkSearchReport report;
  report.arity = arity;
  for (const auto& group : summand_groups(arity, cat)) {
    std::set<int> open(group.targets.begin(), group.targets.end());
    std::vector<detail::SummandSampler> samplers;
    for (int w = 0; w < workers; ++w) {
      samplers.emplace_back(group.first, group.second, config.seed,
                            detail::stream_id({group.first, group.second}, w), config.tolerance, cat);
    }
    std::uint64_t remaining = budget_per_group;
    while (remaining > 0 && !open.empty()) {
      const std::uint64_t round = std::min<std::uint64_t>(remaining, detail::kRoundAttempts * workers);
      std::vector<std::map<int, Witness>> local(workers);
      std::vector<std::uint64_t> violations(workers, 0);
      std::vector<std::uint64_t> used(workers, 0);
      run_workers(workers, [&](int w) {
        const std::uint64_t quota = round * (w + 1) / workers - round * w / workers;
        for (std::uint64_t i = 0; i < quota; ++i) {
          const auto a = samplers[w].next();
          ++used[w];
          if (!a.sum) continue;
          ClassKey key = arity == 2 ? ClassKey{group.first, *a.sum} : ClassKey{group.first, group.second, *a.sum};
          const int cls = part.class_index(key, cat);
          const bool wanted = open.count(cls) > 0 && local[w].count(cls) == 0;
          const bool obstructed = !wanted && obstruction_of_key(key, cat).obstructed;
          if (!wanted && !obstructed) continue;
          Table3 f = Table3::from_doubles(a.f);
          Table3 g = Table3::from_doubles(a.g);
          if (!verify_witness(key, f, g, cat)) continue;
          if (obstructed) {
            ++violations[w];
            continue;
          }
          local[w].emplace(cls, Witness{key, std::move(f), std::move(g), utc_timestamp()});
        }
      });
      remaining -= round;
      for (int w = 0; w < workers; ++w) {
        report.attempts += used[w];
        report.soundness_violations += violations[w];
        for (auto& [cls, wit] : local[w]) {
          if (open.erase(cls)) report.found.emplace(cls, std::move(wit));
        }
      }
    }
    report.unresolved.insert(report.unresolved.end(), open.begin(), open.end());
    if (progress) progress(group, open.size());
  }
  std::sort(report.unresolved.begin(), report.unresolved.end());
  return report;
}

}  // namespace simpson
