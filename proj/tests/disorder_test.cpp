#include "doctest.h"

#include "hglass/combinatorics.hpp"
#include "hglass/disorder.hpp"
#include "hglass/errors.hpp"
#include "hglass/philox.hpp"
#include "hglass/stats.hpp"

#include <cmath>
#include <set>
#include <thread>
#include <vector>

using namespace hglass;

namespace {

ModelParams hrem(int depth)
{
    return ModelParams{ModelKind::Hrem, depth, 1.0, 3, 1.0};
}

ModelParams hps(int depth)
{
    return ModelParams{ModelKind::Hps, depth, 1.0, 3, 1.0};
}

std::string range_field(const DisorderOracle& o, const DisorderKey& k)
{
    try {
        o.gaussian_at(k);
    } catch (const RangeError& e) {
        return e.field();
    }
    return "";
}

} // namespace

TEST_CASE("philox known-answer vectors")
{
    // Published Random123 test vectors for Philox4x32-10.
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
          PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                     {0xffffffffu, 0xffffffffu}) ==
          PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                     {0xa4093822u, 0x299f31d0u}) ==
          PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("open unit mapping stays strictly inside (0, 1)")
{
    CHECK(bits_to_open_unit(0) > 0.0);
    CHECK(bits_to_open_unit(~std::uint64_t{0}) < 1.0);
    CHECK(std::isfinite(inverse_normal_cdf(bits_to_open_unit(0))));
    CHECK(std::isfinite(inverse_normal_cdf(bits_to_open_unit(~std::uint64_t{0}))));
}

TEST_CASE("inverse normal CDF inverts the normal CDF")
{
    for (double u = 1e-12; u < 1.0; u = u < 0.01 ? u * 10.0 : u + 0.01) {
        const double x = inverse_normal_cdf(u);
        CHECK(normal_cdf(x) == doctest::Approx(u).epsilon(1e-12));
    }
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK(std::isinf(inverse_normal_cdf(0.0)));
    CHECK_THROWS_AS(inverse_normal_cdf(1.5), DomainError);
}

TEST_CASE("same seed and key give identical values, also across threads")
{
    const DisorderOracle o(1234, hrem(3));
    const DisorderKey k{DisorderFamily::Hrem, 2, 1, 9};
    const double v = o.gaussian_at(k);
    CHECK(o.gaussian_at(k) == v);
    CHECK(DisorderOracle(1234, hrem(3)).gaussian_at(k) == v);
    CHECK(DisorderOracle(1235, hrem(3)).gaussian_at(k) != v);

    std::vector<double> seen(8);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < seen.size(); ++t) {
        pool.emplace_back([&, t] {
            double last = 0.0;
            for (int rep = 0; rep < 1000; ++rep) {
                last = o.gaussian_at(k);
            }
            seen[t] = last;
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (double s : seen) {
        CHECK(s == v);
    }
}

TEST_CASE("draws over distinct keys have unit normal moments")
{
    const DisorderOracle o(20240611, hrem(6));
    MeanAccumulator acc;
    for (std::uint64_t i = 0; i < 1'000'000; ++i) {
        acc.add(o.value(DisorderFamily::Hrem, 6, 0, i));
    }
    CHECK(std::abs(acc.mean()) < 5e-3);
    CHECK(std::abs(acc.variance() - 1.0) < 5e-3);
}

TEST_CASE("streams under two key prefixes are uncorrelated")
{
    const DisorderOracle o(77, hrem(6));
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    constexpr std::uint64_t n = 1'000'000;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = o.value(DisorderFamily::Hrem, 6, 0, i);
        const double y = o.value(DisorderFamily::Hrem, 5, 1, i);
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double rho = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    CHECK(std::abs(rho) < 5e-3);
}

TEST_CASE("Kolmogorov-Smirnov test against the standard normal")
{
    const DisorderOracle o(99, hps(4));
    std::vector<double> draws;
    for (std::uint64_t i = 0; i < 100'000; ++i) {
        draws.push_back(o.value(DisorderFamily::HpsCoupling, 4, 0, i));
    }
    const double d = ks_statistic_normal(draws);
    CHECK(ks_pvalue(d, draws.size()) > 0.001);
}

TEST_CASE("every key up to depth 2 maps to a distinct generator output")
{
    std::set<std::uint64_t> seen;
    std::size_t count = 0;
    auto add = [&](const DisorderKey& k) {
        seen.insert(keyed_bits(5, k));
        ++count;
    };
    for (int depth = 1; depth <= 2; ++depth) {
        const ModelParams p = hrem(depth);
        for (int l = 0; l <= depth; ++l) {
            for (std::uint64_t b = 0; b < p.block_count(l); ++b) {
                for (std::uint64_t c = 0; c < (std::uint64_t{1} << p.block_size(l)); ++c) {
                    add({DisorderFamily::Hrem, l, b, c});
                }
            }
        }
    }
    for (int depth = 0; depth <= 2; ++depth) {
        const ModelParams p = hps(depth);
        for (std::uint64_t i = 0; i < p.n_spins(); ++i) {
            add({DisorderFamily::HpsField, 0, 0, i});
        }
        for (int l = 1; l <= depth; ++l) {
            for (std::uint64_t b = 0; b < p.block_count(l); ++b) {
                for (std::uint64_t r = 0; r < binomial(p.block_size(l), 3); ++r) {
                    add({DisorderFamily::HpsCoupling, l, b, r});
                }
            }
        }
    }
    // Keys shared between depths encode identically; count distinct keys.
    std::set<DisorderKey> keys;
    for (int depth = 1; depth <= 2; ++depth) {
        const ModelParams p = hrem(depth);
        for (int l = 0; l <= depth; ++l) {
            for (std::uint64_t b = 0; b < p.block_count(l); ++b) {
                for (std::uint64_t c = 0; c < (std::uint64_t{1} << p.block_size(l)); ++c) {
                    keys.insert({DisorderFamily::Hrem, l, b, c});
                }
            }
        }
    }
    for (int depth = 0; depth <= 2; ++depth) {
        const ModelParams p = hps(depth);
        for (std::uint64_t i = 0; i < p.n_spins(); ++i) {
            keys.insert({DisorderFamily::HpsField, 0, 0, i});
        }
        for (int l = 1; l <= depth; ++l) {
            for (std::uint64_t b = 0; b < p.block_count(l); ++b) {
                for (std::uint64_t r = 0; r < binomial(p.block_size(l), 3); ++r) {
                    keys.insert({DisorderFamily::HpsCoupling, l, b, r});
                }
            }
        }
    }
    CHECK(count > keys.size());
    CHECK(seen.size() == keys.size());
}

TEST_CASE("out-of-range keys are rejected naming the field")
{
    const DisorderOracle h(1, hrem(2));
    CHECK(range_field(h, {DisorderFamily::Hrem, 3, 0, 0}) == "level");
    CHECK(range_field(h, {DisorderFamily::Hrem, 1, 2, 0}) == "block");
    CHECK(range_field(h, {DisorderFamily::Hrem, 1, 0, 4}) == "local");
    CHECK(range_field(h, {DisorderFamily::HpsField, 0, 0, 0}) == "family");
    CHECK(range_field(h, {DisorderFamily::Hrem, -1, 0, 0}) == "level");
    CHECK(range_field(h, {DisorderFamily::Hrem, 2, 0, 15}).empty());

    const DisorderOracle p(1, hps(2));
    CHECK(range_field(p, {DisorderFamily::HpsCoupling, 2, 0, 84}) == "local");
    CHECK(range_field(p, {DisorderFamily::HpsCoupling, 2, 0, 83}).empty());
    CHECK(range_field(p, {DisorderFamily::HpsCoupling, 1, 3, 0}) == "block");
    CHECK(range_field(p, {DisorderFamily::HpsCoupling, 0, 0, 0}) == "level");
    CHECK(range_field(p, {DisorderFamily::HpsField, 0, 0, 9}) == "local");
    CHECK(range_field(p, {DisorderFamily::HpsField, 1, 0, 0}) == "level");
    CHECK(range_field(p, {DisorderFamily::Hrem, 0, 0, 0}) == "family");
}

TEST_CASE("zero override yields zero for every key")
{
    const DisorderOracle z = zero_override(DisorderOracle(3, hrem(2)));
    CHECK(z.mode() == DisorderOracle::Mode::Zero);
    for (std::uint64_t c = 0; c < 16; ++c) {
        CHECK(z.gaussian_at({DisorderFamily::Hrem, 2, 0, c}) == 0.0);
    }
    CHECK_THROWS_AS(z.gaussian_at({DisorderFamily::Hrem, 2, 0, 16}), RangeError);
    CHECK(z.with_seed(11).gaussian_at({DisorderFamily::Hrem, 0, 1, 1}) == 0.0);
}

TEST_CASE("fixed tables return their entries and zero elsewhere")
{
    const DisorderOracle t = DisorderOracle::fixed_table(
        hrem(1), {{{DisorderFamily::Hrem, 1, 0, 2}, 0.25}});
    CHECK(t.gaussian_at({DisorderFamily::Hrem, 1, 0, 2}) == 0.25);
    CHECK(t.gaussian_at({DisorderFamily::Hrem, 1, 0, 1}) == 0.0);
}

TEST_CASE("derived seeds differ by purpose and index")
{
    std::set<std::uint64_t> s;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        s.insert(derive_seed(42, SeedPurpose::DisorderSample, i));
        s.insert(derive_seed(42, SeedPurpose::ChainStream, i));
        s.insert(derive_seed(43, SeedPurpose::DisorderSample, i));
    }
    CHECK(s.size() == 3000);
    CHECK(derive_seed(42, SeedPurpose::Auxiliary, 7) == derive_seed(42, SeedPurpose::Auxiliary, 7));
}

TEST_CASE("engine streams replay and separate")
{
    PhiloxEngine a(9, 0);
    PhiloxEngine b(9, 0);
    PhiloxEngine c(9, 1);
    std::size_t same = 0;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        same += x == c() ? 1 : 0;
    }
    CHECK(same == 0);
    CHECK(a == b);
}
