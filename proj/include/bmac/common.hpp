#ifndef BMAC_COMMON_HPP
#define BMAC_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bmac {

using cplx = std::complex<double>;

// Error taxonomy. The CLI maps these onto exit codes, so library code
// should throw the most specific type that applies.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock-space truncation too aggressive for the requested amplitude.
struct truncation_error : std::runtime_error {
    int required_dim;
    truncation_error(const std::string& msg, int required)
        : std::runtime_error(msg), required_dim(required) {}
};

struct conditioning_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double log2_1p(double x) { return std::log1p(x) / M_LN2; }

// x*log2(x) with the x->0 limit taken as 0.
inline double xlog2x(double x) {
    return x == 0.0 ? 0.0 : x * std::log2(x);
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

// Result of a Monte Carlo decoding-error estimate, shared by the bosonic
// span-based simulator and the finite-dimensional one.
struct ErrorEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
    std::uint64_t sen_bound_violations = 0;
    std::uint64_t resampled_instances = 0;
    int l_count = 0;
    int m_count = 0;
};

// ceil(2^{rate * n}): achieved rates are never below the requested ones.
inline int codebook_size_for_rate(double rate, int n) {
    if (rate < 0.0) throw std::domain_error("rates must be >= 0");
    const double raw = std::exp2(rate * n);
    if (raw > 1e9) throw resource_error("codebook size overflow");
    return static_cast<int>(std::ceil(raw - 1e-9));
}

// Plain two-pass-free accumulator; stderr is the standard error of the mean.
class StatAccumulator {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    void merge(const StatAccumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) { *this = o; return; }
        const double d = o.mean_ - mean_;
        const std::size_t n = n_ + o.n_;
        m2_ += o.m2_ + d * d * (double(n_) * double(o.n_)) / double(n);
        mean_ += d * double(o.n_) / double(n);
        n_ = n;
    }
    MeanStderr result() const {
        MeanStderr r;
        r.count = n_;
        r.mean = mean_;
        if (n_ > 1) r.stderr_ = std::sqrt(m2_ / (double(n_ - 1) * double(n_)));
        return r;
    }

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
// indexed, so callers that write into slot i of a preallocated vector get
// results independent of the thread count.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bmac

#endif
