#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>

#include "aicg/geometry.hpp"

namespace aicg {

/// Seeded simulation settings. Results are a pure function of (seed, samples,
/// chunk_size); `workers` only changes wall time.
struct McSettings {
    std::uint64_t seed = 0;
    std::int64_t samples = 100000;
    std::int64_t chunk_size = std::int64_t{1} << 16;
    int workers = 0;  ///< 0 selects std::thread::hardware_concurrency()

    void validate() const;
    McSettings with_seed(std::uint64_t s) const;
    McSettings with_samples(std::int64_t n) const;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent seed for sub-stream `index` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// One random stream: mt19937_64 keyed by (seed, stream).
///
/// Uniforms take the top 53 bits of each word; normals use the Marsaglia polar
/// method on those uniforms, so both are fixed algorithms rather than whatever
/// the standard library's distributions happen to do.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    double uniform();   ///< in [0, 1)
    double normal();    ///< standard normal
    std::int64_t binomial(std::int64_t trials, double p);

    /// Trinomial draw by sequential binomial conditioning.
    Counts trinomial(std::int64_t n, const SimplexPoint& p);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Streaming mean/variance (Welford) with min/max tracking and ordered merge.
class MeanAccumulator {
public:
    void add(double x);
    void merge(const MeanAccumulator& other);

    std::int64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const;
    double std_error() const;
    double min() const { return min_; }
    double max() const { return max_; }

private:
    std::int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = std::numeric_limits<double>::infinity();
    double max_ = -std::numeric_limits<double>::infinity();
};

/// Draws settings.samples values of `sample(rng)` in chunks. Chunk k uses
/// Rng(seed, k) and the chunk accumulators are merged in chunk order, so the
/// result does not depend on the worker count.
MeanAccumulator run_chunks(const McSettings& settings, const std::function<double(Rng&)>& sample);

/// Runs body(i) for i in [0, count) on up to `workers` threads. Exceptions are
/// rethrown on the caller (lowest index first).
void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& body);

int resolve_workers(int workers);

}  // namespace aicg
