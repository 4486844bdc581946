#include "doctest.h"

#include "hglass/combinatorics.hpp"
#include "hglass/enumerate.hpp"
#include "hglass/errors.hpp"
#include "hglass/parallel.hpp"
#include "hglass/records.hpp"
#include "hglass/spins.hpp"
#include "hglass/stats.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hglass;

TEST_CASE("binomials and colex ranks")
{
    CHECK(binomial(27, 3) == 2925);
    CHECK(binomial(9, 3) == 84);
    CHECK(binomial(3, 3) == 1);
    CHECK(binomial(2, 3) == 0);
    CHECK(binomial(64, 32) == 1832624140942590534ull);

    std::uint32_t asc[] = {0, 1, 2};
    std::uint64_t rank = 0;
    do {
        const std::uint32_t desc[] = {asc[2], asc[1], asc[0]};
        CHECK(colex_rank(desc) == rank);
        ++rank;
    } while (next_colex(asc, 9));
    CHECK(rank == 84);

    const std::uint32_t bad[] = {1, 1, 0};
    CHECK_THROWS(colex_rank(bad));
}

TEST_CASE("elementary symmetric polynomial of +-1 entries")
{
    // Brute force over all 3-subsets of v = (+,+,+,-,-).
    const int v[] = {1, 1, 1, -1, -1};
    double e3 = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            for (int k = j + 1; k < 5; ++k) {
                e3 += v[i] * v[j] * v[k];
            }
        }
    }
    CHECK(elementary_symmetric_pm1(5, 3, 3) == e3);
    CHECK(elementary_symmetric_pm1(27, 27, 3) == 2925.0);
}

TEST_CASE("spin configurations")
{
    SpinConfiguration s(70);
    CHECK(s.spin(69) == -1);
    s.set(69, 1);
    s.flip(3);
    CHECK(s.spin(69) == 1);
    CHECK(s.spin(3) == 1);
    CHECK(s.bits(60, 10) == 0b1000000000);
    CHECK(s.bits(2, 3) == 0b010);

    const SpinConfiguration c = SpinConfiguration::from_code(4, 0b0110);
    CHECK(c.to_string() == "-++-");
    const int arr[] = {-1, 1, 1, -1};
    CHECK(SpinConfiguration::from_spins(arr) == c);
    CHECK(overlap(c, c) == 1.0);
    CHECK(overlap(c, SpinConfiguration::from_code(4, 0b1001)) == -1.0);
    CHECK(agreement_count(c, SpinConfiguration(4)) == 2);
    CHECK_THROWS_AS(overlap(c, SpinConfiguration(5)), DimensionError);
}

TEST_CASE("Welford accumulator and constant inputs")
{
    MeanAccumulator acc;
    for (int i = 0; i < 100; ++i) {
        acc.add(std::numbers::ln2);
    }
    CHECK(acc.mean() == std::numbers::ln2);
    CHECK(acc.variance() == 0.0);
    CHECK(acc.std_err() == 0.0);

    const double xs[] = {1.0, 2.0, 3.0, 4.0};
    const Estimate e = mean_estimate(xs);
    CHECK(e.mean == 2.5);
    CHECK(e.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("jackknife of independent data matches the naive error")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    std::vector<double> xs(160'000);
    for (double& x : xs) {
        x = n(rng);
    }
    const Estimate jk = jackknife_mean(xs, 16);
    const Estimate naive = mean_estimate(xs);
    CHECK(jk.mean == doctest::Approx(naive.mean).epsilon(1e-12));
    CHECK(jk.std_err == doctest::Approx(naive.std_err).epsilon(0.5));
    CHECK(bin_means(xs, 16).size() == 16);
}

TEST_CASE("chi-square and KS helpers")
{
    CHECK(chi_square_pvalue(0.0, 3.0) == 1.0);
    CHECK(chi_square_pvalue(7.814727903251178, 3.0) == doctest::Approx(0.05).epsilon(1e-9));
    const std::uint64_t obs[] = {25, 25, 50};
    const double probs[] = {0.25, 0.25, 0.5};
    CHECK(chi_square_statistic(obs, probs) == 0.0);
    CHECK(ks_pvalue(0.0, 100) == 1.0);
    CHECK(ks_pvalue(0.2, 1000) < 1e-10);
    CHECK(binomial_stderr(0.5, 100) == doctest::Approx(0.05));
    CHECK(normal_cdf(0.0) == 0.5);
}

TEST_CASE("log-sum-exp merge is order independent and stable")
{
    LogSumExp a;
    LogSumExp b;
    LogSumExp all;
    for (int i = 0; i < 100; ++i) {
        const double lw = 1000.0 * std::sin(i);
        (i < 50 ? a : b).add(lw, i);
        all.add(lw, i);
    }
    LogSumExp m = a;
    m.merge(b);
    CHECK(m.log_value() == doctest::Approx(all.log_value()).epsilon(1e-15));
    CHECK(m.mean_energy() == doctest::Approx(all.mean_energy()).epsilon(1e-12));
    CHECK(m.min_energy() == 0.0);
}

TEST_CASE("parallel_for rethrows the first failing index")
{
    std::vector<int> out(100, 0);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i); });
    CHECK(out[99] == 99);
    try {
        parallel_for(100, 4, [](std::size_t i) {
            if (i >= 10) {
                throw std::runtime_error(std::to_string(i));
            }
        });
        FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::stoi(e.what()) >= 10);
    }
}

TEST_CASE("sample records round-trip through JSON")
{
    SampleRecord r;
    r.model = ModelKind::Hps;
    r.depth = 2;
    r.p = 3;
    r.sigma = 0.75;
    r.beta = 1.25;
    r.sample_index = 7;
    r.seed = 0xFFFFFFFFFFFFFFF1ull;
    r.method = Method::MonteCarlo;
    r.n_spins = 9;
    r.log_z = 10.5;
    r.mean_energy = -3.25;
    r.log_z_per_spin = 10.5 / 9;
    r.std_err = 0.01;
    r.min_energy = std::nan("");
    const nlohmann::json j = to_json(r);
    CHECK(j.at("stderr") == 0.01);
    CHECK(j.at("method") == "mc");
    const SampleRecord back = sample_record_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.seed == r.seed);
    CHECK(back.log_z_per_spin == r.log_z_per_spin);
    CHECK(std::isnan(back.min_energy));
    CHECK(back.model == ModelKind::Hps);
}

TEST_CASE("aggregate CSV schema")
{
    CHECK(aggregate_csv_header(ModelKind::Hrem) ==
          "model,K,sigma,beta,n,f_mean,f_stderr,s_mean,s_stderr,method");
    CHECK(aggregate_csv_header(ModelKind::Hps) ==
          "model,K,sigma,beta,n,f_mean,f_stderr,s_mean,s_stderr,method,p");
    AggregateRow row;
    row.model = ModelKind::Hrem;
    row.depth = 3;
    row.sigma = 1.0;
    row.beta = 0.5;
    row.n = 2000;
    row.f_mean = 0.1 + 0.2;
    row.f_stderr = 1e-3;
    row.s_mean = 0.5;
    row.s_stderr = 0.0;
    row.method = Method::ExactTable;
    const std::string line = aggregate_csv_line(row);
    CHECK(line == "HREM,3,1,0.5,2000,0.30000000000000004,0.001,0.5,0,exact-table");
    const auto parsed = parse_aggregate_csv(aggregate_csv_header(ModelKind::Hrem) + "\n" + line + "\n");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].f_mean == row.f_mean);
    CHECK(parsed[0].n == 2000);
    CHECK(format_number(std::numbers::ln2) == "0.6931471805599453");
}
