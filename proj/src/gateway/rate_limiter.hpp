#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <mutex>

namespace ltmfair {

// Token bucket: refills at `rps` tokens per second up to `burst`. The clock is
// injectable so tests can drive time without sleeping.
class TokenBucket {
public:
    using TimePoint = std::chrono::steady_clock::time_point;
    using ClockFn = std::function<TimePoint()>;

    // rps <= 0 disables limiting entirely.
    explicit TokenBucket(double rps, double burst = 1.0,
                         ClockFn clock = [] { return std::chrono::steady_clock::now(); })
        : rps_(rps), burst_(std::max(burst, 1.0)), tokens_(burst_), clock_(std::move(clock)) {
        last_ = clock_();
    }

    // Consumes a token if one is available now.
    bool try_acquire() {
        std::lock_guard lock(mutex_);
        refill();
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return true;
        }
        return false;
    }

    // Time until the next token matures; zero when one is ready (or unlimited).
    std::chrono::milliseconds time_until_token() {
        std::lock_guard lock(mutex_);
        refill();
        if (rps_ <= 0.0 || tokens_ >= 1.0) return std::chrono::milliseconds(0);
        double missing = 1.0 - tokens_;
        auto ms = static_cast<long long>(missing / rps_ * 1000.0) + 1;
        return std::chrono::milliseconds(ms);
    }

    // Blocks via `sleeper` until a token was consumed.
    void acquire(const std::function<void(std::chrono::milliseconds)>& sleeper) {
        while (!try_acquire()) sleeper(time_until_token());
    }

private:
    void refill() {
        if (rps_ <= 0.0) {
            tokens_ = burst_;
            return;
        }
        TimePoint now = clock_();
        std::chrono::duration<double> dt = now - last_;
        last_ = now;
        if (dt.count() > 0) tokens_ = std::min(burst_, tokens_ + dt.count() * rps_);
    }

    double rps_;
    double burst_;
    double tokens_;
    ClockFn clock_;
    TimePoint last_;
    std::mutex mutex_;
};

}  // namespace ltmfair
