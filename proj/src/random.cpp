#include "aicg/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace aicg {

void McSettings::validate() const {
    if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
    if (chunk_size < 1) throw std::invalid_argument("chunk size must be >= 1");
    if (workers < 0) throw std::invalid_argument("worker count must be >= 0");
}

McSettings McSettings::with_seed(std::uint64_t s) const {
    McSettings out = *this;
    out.seed = s;
    return out;
}

McSettings McSettings::with_samples(std::int64_t n) const {
    McSettings out = *this;
    out.samples = n;
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::int64_t Rng::binomial(std::int64_t trials, double p) {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    std::binomial_distribution<std::int64_t> dist(trials, p);
    return dist(engine_);
}

Counts Rng::trinomial(std::int64_t n, const SimplexPoint& p) {
    Counts c;
    c.n[0] = binomial(n, p[0]);
    const double rest = p[1] + p[2];
    c.n[1] = rest > 0.0 ? binomial(n - c.n[0], p[1] / rest) : 0;
    c.n[2] = n - c.n[0] - c.n[1];
    return c;
}

void MeanAccumulator::add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double total = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    count_ += other.count_;
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
}

double MeanAccumulator::variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double MeanAccumulator::std_error() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& body) {
    const int w = static_cast<int>(std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(count, 1)));
    if (w <= 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex error_mutex;
    std::int64_t error_index = std::numeric_limits<std::int64_t>::max();
    std::exception_ptr error;
    const auto worker = [&] {
        for (std::int64_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) threads.emplace_back(worker);
    threads.clear();
    if (error) std::rethrow_exception(error);
}

MeanAccumulator run_chunks(const McSettings& settings, const std::function<double(Rng&)>& sample) {
    settings.validate();
    const std::int64_t chunks = (settings.samples + settings.chunk_size - 1) / settings.chunk_size;
    std::vector<MeanAccumulator> parts(static_cast<std::size_t>(chunks));
    parallel_for(chunks, settings.workers, [&](std::int64_t k) {
        Rng rng(settings.seed, static_cast<std::uint64_t>(k));
        const std::int64_t begin = k * settings.chunk_size;
        const std::int64_t end = std::min(settings.samples, begin + settings.chunk_size);
        MeanAccumulator acc;
        for (std::int64_t i = begin; i < end; ++i) acc.add(sample(rng));
        parts[static_cast<std::size_t>(k)] = acc;
    });
    MeanAccumulator total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

}  // namespace aicg
