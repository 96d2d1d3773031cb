#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "m2c/errors.hpp"
#include "m2c/metrics.hpp"
#include "support/oracles.hpp"

using m2c::ConfusionMatrix;
using m2c::confusion;

namespace {

std::vector<std::uint8_t> labels(std::initializer_list<int> xs) {
    std::vector<std::uint8_t> out;
    for (int x : xs) out.push_back(static_cast<std::uint8_t>(x));
    return out;
}

} // namespace

TEST_CASE("confusion counts") {
    auto ref = labels({0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    auto pred = labels({0, 0, 0, 0, 0, 0, 0, 1, 1, 1});
    ConfusionMatrix m = confusion(ref, pred, 2);
    CHECK(m.at(0, 0) == 7);
    CHECK(m.at(0, 1) == 3);
    CHECK(m.at(1, 1) == 0);
    CHECK(m.total == 10);

    ConfusionMatrix diag = confusion(pred, pred, 2);
    CHECK(diag.at(0, 0) == 7);
    CHECK(diag.at(1, 1) == 3);
    CHECK(diag.at(0, 1) == 0);

    ConfusionMatrix empty = confusion({}, {}, 3);
    CHECK(empty.total == 0);
    for (std::size_t i = 0; i < 9; ++i) CHECK(empty.counts[i] == 0);
}

TEST_CASE("confusion skips UNLABELED and validates") {
    auto ref = labels({0, 255, 1});
    auto pred = labels({0, 1, 255});
    ConfusionMatrix m = confusion(ref, pred, 2);
    CHECK(m.total == 1);
    CHECK(m.unlabeled_skipped == 2);

    CHECK_THROWS_AS(confusion(labels({0}), labels({0, 1}), 2), m2c::LengthMismatch);
    CHECK_THROWS_AS(confusion(labels({5}), labels({0}), 2), m2c::LabelOutOfRange);
    CHECK_THROWS_AS(confusion(labels({0}), labels({5}), 2), m2c::LabelOutOfRange);
}

TEST_CASE("report on hand-checked matrices") {
    // [[7,3],[0,10]]
    ConfusionMatrix m;
    m.k = 2;
    m.counts = {7, 3, 0, 10};
    m.total = 20;
    m2c::MetricReport rep = m2c::report(m);
    CHECK(rep.iou[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(rep.iou[1] == doctest::Approx(10.0 / 13.0).epsilon(1e-12));
    CHECK(rep.oa == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(rep.aa == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(rep.miou == doctest::Approx((0.7 + 10.0 / 13.0) / 2.0).epsilon(1e-12));

    // perfect 3-class matrix
    ConfusionMatrix perfect;
    perfect.k = 3;
    perfect.counts = {4, 0, 0, 0, 5, 0, 0, 0, 6};
    perfect.total = 15;
    m2c::MetricReport p = m2c::report(perfect);
    CHECK(p.oa == 1.0);
    CHECK(p.aa == 1.0);
    CHECK(p.miou == 1.0);
    for (double v : p.iou) CHECK(v == 1.0);

    ConfusionMatrix empty;
    empty.k = 2;
    empty.counts = {0, 0, 0, 0};
    CHECK_THROWS_AS(m2c::report(empty), m2c::EmptyMatrix);
}

TEST_CASE("classes absent from both sides leave the means") {
    ConfusionMatrix m;
    m.k = 3;
    m.counts = {7, 3, 0, 0, 10, 0, 0, 0, 0}; // class 2 never occurs
    m.total = 20;
    m2c::MetricReport rep = m2c::report(m);
    CHECK(std::isnan(rep.iou[2]));
    CHECK(std::isnan(rep.recall[2]));

    ConfusionMatrix two;
    two.k = 2;
    two.counts = {7, 3, 0, 10};
    two.total = 20;
    m2c::MetricReport rep2 = m2c::report(two);
    CHECK(rep.miou == doctest::Approx(rep2.miou).epsilon(1e-15));
    CHECK(rep.aa == doctest::Approx(rep2.aa).epsilon(1e-15));
    CHECK(rep.oa == doctest::Approx(rep2.oa).epsilon(1e-15));
}

TEST_CASE("report equals naive counting oracle on random pairs") {
    std::mt19937_64 rng(4040);
    for (int round = 0; round < 100; ++round) {
        std::size_t k = 2 + rng() % 17;
        std::size_t n = 1 + rng() % 3000;
        std::vector<std::uint8_t> ref(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            ref[i] = static_cast<std::uint8_t>(rng() % k);
            pred[i] = static_cast<std::uint8_t>(rng() % k);
        }
        ConfusionMatrix m = confusion(ref, pred, k);
        m2c::MetricReport rep = m2c::report(m);
        oracle::NaiveMetrics naive = oracle::naive_metrics(ref, pred, k);
        CHECK(std::abs(rep.oa - naive.oa) <= 1e-12);
        CHECK(std::abs(rep.aa - naive.aa) <= 1e-12);
        CHECK(std::abs(rep.miou - naive.miou) <= 1e-12);
        for (std::size_t c = 0; c < k; ++c) {
            if (std::isnan(naive.iou[c])) CHECK(std::isnan(rep.iou[c]));
            else CHECK(std::abs(rep.iou[c] - naive.iou[c]) <= 1e-12);
            // recall >= IoU whenever both defined
            if (!std::isnan(naive.recall[c]) && !std::isnan(naive.iou[c]))
                CHECK(rep.recall[c] >= rep.iou[c] - 1e-15);
        }
    }
}

TEST_CASE("confusion is permutation-equivariant") {
    std::mt19937_64 rng(11);
    const std::size_t k = 6, n = 500;
    std::vector<std::uint8_t> ref(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
        ref[i] = static_cast<std::uint8_t>(rng() % k);
        pred[i] = static_cast<std::uint8_t>(rng() % k);
    }
    std::vector<std::uint8_t> perm{3, 5, 0, 1, 4, 2};
    std::vector<std::uint8_t> ref_p(n), pred_p(n);
    for (std::size_t i = 0; i < n; ++i) {
        ref_p[i] = perm[ref[i]];
        pred_p[i] = perm[pred[i]];
    }
    ConfusionMatrix a = confusion(ref, pred, k);
    ConfusionMatrix b = confusion(ref_p, pred_p, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c)
            CHECK(a.at(r, c) == b.at(perm[r], perm[c]));
}

TEST_CASE("row_normalize sums to exactly 100 after one-decimal rounding") {
    std::mt19937_64 rng(606);
    for (int round = 0; round < 200; ++round) {
        std::size_t k = 2 + rng() % 17;
        ConfusionMatrix m;
        m.k = k;
        m.counts.assign(k * k, 0);
        for (std::size_t i = 0; i < k * k; ++i)
            m.counts[i] = rng() % 3 == 0 ? 0 : rng() % 100000;
        auto rows = m2c::row_normalize(m);
        for (std::size_t r = 0; r < k; ++r) {
            double sum = 0;
            bool empty = m.row_sum(r) == 0;
            for (std::size_t c = 0; c < k; ++c) {
                double rounded = std::round(rows[r][c] * 10.0) / 10.0;
                CHECK(rounded == doctest::Approx(rows[r][c]).epsilon(1e-12));
                sum += rounded;
            }
            if (empty) CHECK(sum == 0.0);
            else CHECK(std::abs(sum - 100.0) <= 0.05);
        }
    }

    ConfusionMatrix even;
    even.k = 2;
    even.counts = {1, 1, 0, 0};
    auto rows = m2c::row_normalize(even);
    CHECK(rows[0][0] == 50.0);
    CHECK(rows[0][1] == 50.0);
    CHECK(rows[1][0] == 0.0);

    ConfusionMatrix ident;
    ident.k = 2;
    ident.counts = {4, 0, 0, 9};
    auto id_rows = m2c::row_normalize(ident);
    CHECK(id_rows[0][0] == 100.0);
    CHECK(id_rows[1][1] == 100.0);
}

TEST_CASE("published Switch row back-scales to its split") {
    // 8793 reference points split 49.8 / 50.2 between diag and Wall.
    ConfusionMatrix m;
    m.k = 18;
    m.counts.assign(18 * 18, 0);
    m.at(14, 14) = 4379;
    m.at(14, 15) = 4414;
    m.total = 8793;
    auto rows = m2c::row_normalize(m);
    CHECK(rows[14][14] == doctest::Approx(49.8).epsilon(1e-12));
    CHECK(rows[14][15] == doctest::Approx(50.2).epsilon(1e-12));
}

TEST_CASE("oa_from_normalized") {
    std::vector<std::vector<double>> perfect{{100.0, 0.0}, {0.0, 100.0}};
    CHECK(m2c::oa_from_normalized(perfect, {5, 5}) == doctest::Approx(1.0));

    std::vector<std::vector<double>> half{{100.0, 0.0}, {100.0, 0.0}};
    CHECK(m2c::oa_from_normalized(half, {9, 1}) == doctest::Approx(0.9));

    CHECK_THROWS_AS(m2c::oa_from_normalized(perfect, {0, 0}), m2c::ZeroTotal);
}
