#include "doctest.h"

#include "hglass/analysis.hpp"
#include "hglass/combinatorics.hpp"
#include "hglass/errors.hpp"
#include "hglass/hps.hpp"
#include "hglass/philox.hpp"
#include "hglass/quenched.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace hglass;

namespace {

ModelParams hps(int depth, double sigma = 1.0, double beta = 1.0)
{
    return ModelParams{ModelKind::Hps, depth, sigma, 3, beta};
}

// Direct triple loop over every block and every i > j > k inside it.
double direct_energy(const DisorderOracle& o, const SpinConfiguration& s, const ModelParams& p)
{
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        e += o.gaussian_at({DisorderFamily::HpsField, 0, 0, i}) * s.spin(i);
    }
    for (int l = 1; l <= p.depth; ++l) {
        const double scale = -std::sqrt(6.0) / std::pow(3.0, l * (3.0 - 2.0 * (1.0 - p.sigma)) / 2.0);
        const std::uint64_t size = p.block_size(l);
        for (std::uint64_t b = 0; b < p.block_count(l); ++b) {
            for (std::uint32_t i = 2; i < size; ++i) {
                for (std::uint32_t j = 1; j < i; ++j) {
                    for (std::uint32_t k = 0; k < j; ++k) {
                        const std::uint32_t t[] = {i, j, k};
                        const double J = o.gaussian_at({DisorderFamily::HpsCoupling, l, b, colex_rank(t)});
                        const std::size_t base = b * size;
                        e += scale * J * s.spin(base + i) * s.spin(base + j) * s.spin(base + k);
                    }
                }
            }
        }
    }
    return e;
}

} // namespace

TEST_CASE("three-spin hand example")
{
    const ModelParams p = hps(1);
    const std::uint32_t top[] = {2, 1, 0};
    const DisorderOracle o = DisorderOracle::fixed_table(
        p, {{{DisorderFamily::HpsField, 0, 0, 0}, 0.1},
            {{DisorderFamily::HpsField, 0, 0, 1}, -0.2},
            {{DisorderFamily::HpsField, 0, 0, 2}, 0.3},
            {{DisorderFamily::HpsCoupling, 1, 0, colex_rank(top)}, 0.5}});
    const int spins[] = {1, 1, -1};
    const double expected = -0.4 + std::sqrt(6.0) * 0.5 / std::pow(3.0, 1.5);
    const double e = hps_energy(SpinConfiguration::from_spins(spins), p, o);
    CHECK(e == doctest::Approx(expected).epsilon(1e-14));
    CHECK(e == doctest::Approx(-0.1644).epsilon(1e-3));
}

TEST_CASE("zero override and length errors")
{
    const ModelParams p = hps(2);
    const DisorderOracle z = zero_override(DisorderOracle(3, p));
    for (std::uint64_t c = 0; c < 512; c += 7) {
        CHECK(hps_energy(SpinConfiguration::from_code(9, c), p, z) == 0.0);
    }
    CHECK_THROWS_AS(hps_energy(SpinConfiguration(8), p, z), DimensionError);
    const SampleRecord r = hps_exact_log_partition(p.with_beta(2.5), z);
    CHECK(r.log_z == doctest::Approx(9.0 * std::numbers::ln2).epsilon(1e-15));
}

TEST_CASE("energy equals a direct triple loop and the block recursion")
{
    for (int depth = 1; depth <= 2; ++depth) {
        const ModelParams p = hps(depth, 0.8);
        const DisorderOracle o(40 + depth, p);
        const HpsSystem sys(p, o);
        const std::size_t n = p.n_spins();
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
            const SpinConfiguration s = SpinConfiguration::from_code(n, c);
            CHECK(sys.energy(s) == doctest::Approx(direct_energy(o, s, p)).epsilon(1e-13));
        }
    }
    // Recursion for K = 1: sub-block energies (single-site fields) plus the top term.
    const ModelParams p = hps(1);
    const HpsSystem sys(p, DisorderOracle(5, p));
    for (std::uint64_t c = 0; c < 8; ++c) {
        const SpinConfiguration s = SpinConfiguration::from_code(3, c);
        double sub = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            sub += sys.field(i) * s.spin(i);
        }
        CHECK(sys.energy(s) == doctest::Approx(sub + sys.block_interaction(s, 1, 0)).epsilon(1e-14));
    }
}

TEST_CASE("eight-configuration hand sum")
{
    const ModelParams p = hps(1, 1.0, 0.8);
    const DisorderOracle o(12, p);
    double z = 0.0;
    for (std::uint64_t c = 0; c < 8; ++c) {
        z += std::exp(-0.8 * direct_energy(o, SpinConfiguration::from_code(3, c), p));
    }
    CHECK(hps_exact_log_partition(p, o).log_z == doctest::Approx(std::log(z)).epsilon(1e-14));
}

TEST_CASE("Gray-code enumeration matches brute force at nine spins")
{
    const ModelParams p = hps(2, 1.0, 1.7);
    const DisorderOracle o(77, p);
    const HpsSystem sys(p, o);
    double m = -INFINITY;
    std::vector<double> e(512);
    for (std::uint64_t c = 0; c < 512; ++c) {
        e[c] = -1.7 * sys.energy(SpinConfiguration::from_code(9, c));
        m = std::max(m, e[c]);
    }
    double z = 0.0;
    for (double x : e) {
        z += std::exp(x - m);
    }
    CHECK(hps_exact_log_partition(p, o).log_z == doctest::Approx(m + std::log(z)).epsilon(1e-13));
}

TEST_CASE("beta = 0 partition function")
{
    const ModelParams p = hps(2, 1.0, 0.0);
    CHECK(hps_exact_log_partition(p, DisorderOracle(1, p)).log_z == 9.0 * std::numbers::ln2);
    CHECK(hps_exact_log_partition(hps(1, 1.0, 0.0), DisorderOracle(1, hps(1))).log_z ==
          3.0 * std::numbers::ln2);
    const Estimate f = hps_quenched_free_energy(p, 5, DisorderOracle(1, p));
    CHECK(f.mean == std::numbers::ln2);
    CHECK(f.std_err == 0.0);
}

TEST_CASE("coupling ranks are a bijection onto the tuple set")
{
    for (int depth = 1; depth <= 2; ++depth) {
        const ModelParams p = hps(depth);
        const std::uint64_t size = p.block_size(depth);
        std::set<std::uint64_t> ranks;
        std::uint32_t t[3];
        for (std::uint32_t i = 2; i < size; ++i) {
            for (std::uint32_t j = 1; j < i; ++j) {
                for (std::uint32_t k = 0; k < j; ++k) {
                    const std::uint32_t d[] = {i, j, k};
                    const std::uint64_t r = colex_rank(d);
                    ranks.insert(r);
                    colex_unrank(r, t);
                    CHECK((t[0] == i && t[1] == j && t[2] == k));
                }
            }
        }
        CHECK(ranks.size() == binomial(size, 3));
        CHECK(*ranks.rbegin() == binomial(size, 3) - 1);
    }
    CHECK(hps_coupling_count(hps(3)) == 3186);
    CHECK(hps_coupling_count(hps(3)) == binomial(27, 3) + 3 * binomial(9, 3) + 9 * binomial(3, 3));
    CHECK(hps_coupling_count(hps(1)) == 1);
    CHECK(hps_coupling_count(hps(0)) == 0);
}

TEST_CASE("odd p reverses the field-free energy under a global flip")
{
    const ModelParams p = hps(2);
    std::map<DisorderKey, double> table;
    const DisorderOracle keyed(3, p);
    for (int l = 1; l <= 2; ++l) {
        for (std::uint64_t b = 0; b < p.block_count(l); ++b) {
            for (std::uint64_t r = 0; r < binomial(p.block_size(l), 3); ++r) {
                const DisorderKey k{DisorderFamily::HpsCoupling, l, b, r};
                table[k] = keyed.gaussian_at(k);
            }
        }
    }
    const DisorderOracle free = DisorderOracle::fixed_table(p, table);
    const HpsSystem sys(p, free);
    for (std::uint64_t c = 0; c < 512; ++c) {
        const SpinConfiguration s = SpinConfiguration::from_code(9, c);
        const SpinConfiguration flipped = SpinConfiguration::from_code(9, ~c & 511);
        CHECK(sys.energy(flipped) == doctest::Approx(-sys.energy(s)).epsilon(1e-13));
    }
    const ModelParams p1 = hps(1, 1.0, 1.3);
    const std::uint32_t top[] = {2, 1, 0};
    const DisorderOracle one =
        DisorderOracle::fixed_table(p1, {{{DisorderFamily::HpsCoupling, 1, 0, colex_rank(top)}, 0.9}});
    // Flipping the coupling sign maps H(S) to H(-S), so log Z is unchanged.
    const double lz_plus = hps_exact_log_partition(p1, one).log_z;
    const DisorderOracle neg =
        DisorderOracle::fixed_table(p1, {{{DisorderFamily::HpsCoupling, 1, 0, colex_rank(top)}, -0.9}});
    CHECK(hps_exact_log_partition(p1, neg).log_z == doctest::Approx(lz_plus).epsilon(1e-14));
}

TEST_CASE("incremental flip delta matches recomputation")
{
    for (int depth = 1; depth <= 2; ++depth) {
        const ModelParams p = hps(depth);
        const HpsSystem sys(p, DisorderOracle(9, p));
        PhiloxEngine rng(2, 0);
        SpinConfiguration s(p.n_spins());
        for (int i = 0; i < 10000; ++i) {
            const std::size_t site = rng() % p.n_spins();
            const double before = sys.energy(s);
            const double delta = sys.flip_delta(s, site);
            s.flip(site);
            CHECK(std::abs(sys.energy(s) - before - delta) < 1e-10);
        }
    }
}

TEST_CASE("covariance of the top-level term")
{
    const ModelParams p = hps(1);
    const SpinConfiguration s = SpinConfiguration::from_code(3, 0b101);
    const OverlapPair same(s, s);
    CHECK(same.overlap() == 1.0);
    CHECK(eta_covariance_exact(same, p) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));

    SpinConfiguration neg = s;
    for (std::size_t i = 0; i < 3; ++i) {
        neg.flip(i);
    }
    CHECK(eta_covariance_exact(OverlapPair(s, neg), p) == -eta_covariance_exact(same, p));
    CHECK_THROWS_AS(OverlapPair(s, SpinConfiguration(4)), DimensionError);

    // Q = 1 equals p! C(N, p) / p^(K (p - 2(1 - sigma))).
    for (int depth = 1; depth <= 3; ++depth) {
        for (double sigma : {0.6, 1.0, 1.5}) {
            const ModelParams q = hps(depth, sigma);
            const SpinConfiguration c(q.n_spins());
            const double expected = 6.0 * static_cast<double>(binomial(q.n_spins(), 3)) /
                                    std::pow(3.0, depth * (3.0 - 2.0 * (1.0 - sigma)));
            CHECK(eta_covariance_exact(OverlapPair(c, c), q) ==
                  doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("empirical covariance matches the exact formula")
{
    const ModelParams p = hps(1);
    const SpinConfiguration s = SpinConfiguration::from_code(3, 0b011);
    const DisorderOracle base(123, p);
    const Estimate same = empirical_eta_covariance(OverlapPair(s, s), p, 100'000, base);
    CHECK(std::abs(same.mean - 2.0 / 9.0) <= 3.0 * same.std_err);

    // v = (+, +, -) repeated over nine spins gives Q = 1/3.
    const ModelParams p2 = hps(2);
    const SpinConfiguration a(9);
    SpinConfiguration b(9);
    for (std::size_t i = 2; i < 9; i += 3) {
        b.flip(i);
    }
    const OverlapPair pair(a, b);
    CHECK(pair.overlap() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const Estimate est = empirical_eta_covariance(pair, p2, 100'000, DisorderOracle(5, p2));
    CHECK(std::abs(est.mean - eta_covariance_exact(pair, p2)) <= 3.0 * est.std_err);

    const Estimate zero = empirical_eta_covariance(pair, p2, 1000, zero_override(base));
    CHECK(zero.mean == 0.0);
}

TEST_CASE("sample variance of the top-level term matches the diagonal covariance")
{
    const ModelParams p = hps(2);
    const SpinConfiguration s = SpinConfiguration::from_code(9, 0x1B5);
    MeanAccumulator sq;
    for (std::uint64_t seed = 0; seed < 100'000; ++seed) {
        const HpsSystem sys(p, DisorderOracle(seed, p));
        const double eta = sys.block_interaction(s, 2, 0);
        sq.add(eta * eta);
    }
    CHECK(std::abs(sq.mean() - eta_covariance_exact(OverlapPair(s, s), p)) <= 3.0 * sq.std_err());
}

TEST_CASE("capacity gate for larger systems")
{
    const ModelParams p = hps(3);
    CHECK_THROWS_AS(hps_exact_log_partition(p, DisorderOracle(1, p)), CapacityError);
}

TEST_CASE("monotonicity in depth and the Jensen bound")
{
    const ModelParams p0 = hps(0);
    const DisorderOracle base(8, p0);
    const Estimate f0 = hps_quenched_free_energy(p0, 2000, base);
    const Estimate f1 = hps_quenched_free_energy(hps(1), 2000, base.reshaped(hps(1)));
    CHECK(f1.mean >= f0.mean - 3.0 * std::hypot(f0.std_err, f1.std_err));
    CHECK(f1.mean <= jensen_upper_bound(ModelKind::Hps, 1.0, 1.0) + 3.0 * f1.std_err);
}
