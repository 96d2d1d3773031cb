#include "m2c/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "m2c/cloud.hpp"
#include "m2c/errors.hpp"

namespace m2c {

ConfusionMatrix confusion(const std::vector<std::uint8_t>& reference,
                          const std::vector<std::uint8_t>& predicted, std::size_t k) {
    if (reference.size() != predicted.size())
        throw LengthMismatch("reference has " + std::to_string(reference.size()) +
                             " labels, prediction has " + std::to_string(predicted.size()));

    ConfusionMatrix m;
    m.k = k;
    m.counts.assign(k * k, 0);
    for (std::size_t i = 0; i < reference.size(); ++i) {
        std::uint8_t ref = reference[i], pred = predicted[i];
        if (ref == UNLABELED || pred == UNLABELED) {
            ++m.unlabeled_skipped;
            continue;
        }
        if (ref >= k)
            throw LabelOutOfRange("reference label " + std::to_string(ref) +
                                  " at point " + std::to_string(i) + " >= k=" +
                                  std::to_string(k));
        if (pred >= k)
            throw LabelOutOfRange("predicted label " + std::to_string(pred) +
                                  " at point " + std::to_string(i) + " >= k=" +
                                  std::to_string(k));
        ++m.at(ref, pred);
        ++m.total;
    }
    return m;
}

MetricReport report(const ConfusionMatrix& m) {
    if (m.total == 0) throw EmptyMatrix("confusion matrix holds no points");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    MetricReport rep;
    rep.iou.assign(m.k, nan);
    rep.recall.assign(m.k, nan);

    std::uint64_t trace = 0;
    double iou_sum = 0.0, recall_sum = 0.0;
    std::size_t iou_defined = 0, recall_defined = 0;
    for (std::size_t c = 0; c < m.k; ++c) {
        const std::uint64_t diag = m.at(c, c);
        const std::uint64_t row = m.row_sum(c);
        const std::uint64_t col = m.col_sum(c);
        trace += diag;

        const std::uint64_t uni = row + col - diag;
        if (uni > 0) {
            rep.iou[c] = static_cast<double>(diag) / static_cast<double>(uni);
            iou_sum += rep.iou[c];
            ++iou_defined;
        }
        if (row > 0) {
            rep.recall[c] = static_cast<double>(diag) / static_cast<double>(row);
            recall_sum += rep.recall[c];
            ++recall_defined;
        }
    }

    rep.oa = static_cast<double>(trace) / static_cast<double>(m.total);
    rep.miou = iou_defined > 0 ? iou_sum / static_cast<double>(iou_defined) : 0.0;
    rep.aa = recall_defined > 0 ? recall_sum / static_cast<double>(recall_defined) : 0.0;
    return rep;
}

std::vector<std::vector<double>> row_normalize(const ConfusionMatrix& m) {
    std::vector<std::vector<double>> rows(m.k, std::vector<double>(m.k, 0.0));
    std::vector<std::size_t> order(m.k);
    for (std::size_t r = 0; r < m.k; ++r) {
        const std::uint64_t row = m.row_sum(r);
        if (row == 0) continue;

        // Tenths of a percent by largest remainder, so the row comes out
        // at exactly 100.0 after rounding to one decimal.
        std::vector<std::uint64_t> tenths(m.k);
        std::vector<double> remainder(m.k);
        std::uint64_t assigned = 0;
        for (std::size_t c = 0; c < m.k; ++c) {
            double exact = 1000.0 * static_cast<double>(m.at(r, c)) / static_cast<double>(row);
            tenths[c] = static_cast<std::uint64_t>(std::floor(exact));
            remainder[c] = exact - std::floor(exact);
            assigned += tenths[c];
        }
        std::int64_t leftover = 1000 - static_cast<std::int64_t>(assigned);

        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return remainder[a] > remainder[b];
        });
        for (std::int64_t j = 0; j < leftover; ++j) ++tenths[order[j % m.k]];
        for (std::size_t j = m.k; leftover < 0 && j-- > 0;)
            if (tenths[order[j]] > 0) { --tenths[order[j]]; ++leftover; }

        for (std::size_t c = 0; c < m.k; ++c)
            rows[r][c] = static_cast<double>(tenths[c]) / 10.0;
    }
    return rows;
}

double oa_from_normalized(const std::vector<std::vector<double>>& rows,
                          const std::vector<std::uint64_t>& class_counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : class_counts) total += c;
    if (total == 0) throw ZeroTotal("class counts sum to zero");

    double correct = 0.0;
    for (std::size_t c = 0; c < class_counts.size() && c < rows.size(); ++c)
        correct += static_cast<double>(class_counts[c]) * rows[c][c];
    return correct / (100.0 * static_cast<double>(total));
}

} // namespace m2c
