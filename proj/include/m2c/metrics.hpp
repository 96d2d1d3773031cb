#ifndef M2C_METRICS_HPP
#define M2C_METRICS_HPP

#include <cstdint>
#include <vector>

namespace m2c {

// K x K count matrix; rows are reference classes, columns predictions.
struct ConfusionMatrix {
    std::size_t k = 0;
    std::vector<std::uint64_t> counts; // row-major, k*k
    std::uint64_t total = 0;
    std::uint64_t unlabeled_skipped = 0; // pairs skipped for UNLABELED on either side

    std::uint64_t at(std::size_t row, std::size_t col) const { return counts[row * k + col]; }
    std::uint64_t& at(std::size_t row, std::size_t col) { return counts[row * k + col]; }

    std::uint64_t row_sum(std::size_t row) const {
        std::uint64_t s = 0;
        for (std::size_t c = 0; c < k; ++c) s += at(row, c);
        return s;
    }

    std::uint64_t col_sum(std::size_t col) const {
        std::uint64_t s = 0;
        for (std::size_t r = 0; r < k; ++r) s += at(r, col);
        return s;
    }
};

// Pairs with an UNLABELED reference (or prediction) are skipped and
// counted in unlabeled_skipped. Throws LengthMismatch, LabelOutOfRange.
ConfusionMatrix confusion(const std::vector<std::uint8_t>& reference,
                          const std::vector<std::uint8_t>& predicted, std::size_t k);

struct MetricReport {
    std::vector<double> iou;          // NaN for classes absent from both sides
    std::vector<double> recall;       // NaN for empty reference rows
    double miou = 0.0;                // mean IoU over defined classes
    double oa = 0.0;                  // trace / total
    double aa = 0.0;                  // mean recall over non-empty rows (mAcc)
};

// Throws EmptyMatrix when total is zero.
MetricReport report(const ConfusionMatrix& m);

// Row percentages rounded to one decimal and apportioned (largest
// remainder) so every non-empty row sums to exactly 100.0. Empty rows
// stay all-zero.
std::vector<std::vector<double>> row_normalize(const ConfusionMatrix& m);

// Overall accuracy from a published row-normalized matrix and per-class
// reference counts: sum_c count_c * diag_c / (100 * sum_c count_c).
// Throws ZeroTotal.
double oa_from_normalized(const std::vector<std::vector<double>>& rows,
                          const std::vector<std::uint64_t>& class_counts);

} // namespace m2c

#endif
