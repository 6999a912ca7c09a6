#pragma once

// Shared helpers for the test suites: random regular triplets, medians,
// and self-cleaning temp directories.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bfcs/bayes_factors.hpp"
#include "bfcs/rng.hpp"

namespace test_support {

// Regular triplet by construction: draw r12, r13 freely, then r23 inside
// the interval that keeps the correlation matrix positive definite
// (r12*r13 +- sqrt((1-r12^2)(1-r13^2))), shrunk away from the boundary.
inline bfcs::CorrelationTriplet random_regular_triplet(bfcs::Rng& rng,
                                                       std::int64_t n = 50) {
    const double r12 = bfcs::uniform(rng, -0.95, 0.95);
    const double r13 = bfcs::uniform(rng, -0.95, 0.95);
    const double center = r12 * r13;
    const double radius = std::sqrt((1.0 - r12 * r12) * (1.0 - r13 * r13));
    const double r23 = center + 0.95 * radius * bfcs::uniform(rng, -1.0, 1.0);
    return bfcs::CorrelationTriplet{r12, r13, r23, n};
}

inline double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Unique directory under the system temp root, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("bfcs_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace test_support
