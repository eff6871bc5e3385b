#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace acc {

/// mt19937_64 with bounded draws and Fisher-Yates implemented here, so that
/// seeded output is identical across standard library implementations
/// (std::shuffle and the std distributions are not).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return x % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Uniform sample of k items without replacement, in original order.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& items, std::size_t k) {
        std::vector<std::size_t> idx(items.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            idx[i] = i;
        }
        shuffle(idx);
        idx.resize(std::min(k, idx.size()));
        std::sort(idx.begin(), idx.end());
        std::vector<T> out;
        out.reserve(idx.size());
        for (const auto i : idx) {
            out.push_back(items[i]);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace acc
