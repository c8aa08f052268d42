#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace cspbench {

/// H x B empirical predictive sample: row h holds the B samples for step
/// T+h+1 (0-based h). Rows are unordered multisets -- columns do not form
/// coherent trajectories.
class SampleMatrix {
public:
    SampleMatrix(int horizon, int budget)
        : horizon_(horizon), budget_(budget),
          data_(static_cast<std::size_t>(horizon) * static_cast<std::size_t>(budget), 0.0) {
        if (horizon < 1) throw std::invalid_argument("SampleMatrix: horizon must be >= 1");
        if (budget < 2) throw std::invalid_argument("SampleMatrix: budget must be >= 2");
    }

    int horizon() const { return horizon_; }
    int budget() const { return budget_; }

    double& at(int h, int b) { return data_[index(h, b)]; }
    double at(int h, int b) const { return data_[index(h, b)]; }

    std::span<double> row(int h) {
        return std::span<double>(data_.data() + index(h, 0), static_cast<std::size_t>(budget_));
    }
    std::span<const double> row(int h) const {
        return std::span<const double>(data_.data() + index(h, 0), static_cast<std::size_t>(budget_));
    }

    bool operator==(const SampleMatrix& other) const {
        return horizon_ == other.horizon_ && budget_ == other.budget_ && data_ == other.data_;
    }

private:
    std::size_t index(int h, int b) const {
        return static_cast<std::size_t>(h) * static_cast<std::size_t>(budget_) +
               static_cast<std::size_t>(b);
    }

    int horizon_;
    int budget_;
    std::vector<double> data_;
};

} // namespace cspbench
