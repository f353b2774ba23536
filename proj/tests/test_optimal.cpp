#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "ancsim/dsp.hpp"
#include "ancsim/errors.hpp"
#include "ancsim/optimal.hpp"
#include "ancsim/radiation.hpp"
#include "oracles.hpp"

using namespace ancsim;
using namespace ancsim::acoustics;
using cdouble = std::complex<double>;

TEST_CASE("scalar case cancels exactly") {
    std::vector<cdouble> primary = {cdouble(4.0, 0.0)};
    ComplexMatrix secondary(1, 1);
    secondary(0, 0) = cdouble(2.0, 0.0);

    const auto opt = optimal_source_strengths(primary, secondary, cdouble(1.0, 0.0));
    REQUIRE(opt.strengths.size() == 1);
    CHECK(opt.strengths[0].real() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(opt.strengths[0].imag() == doctest::Approx(0.0).epsilon(1e-12));

    const double res = oracles::squared_residual(primary, secondary, {1.0, 0.0},
                                                 opt.strengths);
    CHECK(res < 1e-24);
}

TEST_CASE("zero primary field needs no control effort") {
    std::vector<cdouble> primary = {cdouble(0.0, 0.0), cdouble(0.0, 0.0)};
    ComplexMatrix secondary(2, 1);
    secondary(0, 0) = cdouble(1.0, 0.5);
    secondary(1, 0) = cdouble(-0.3, 0.2);
    const auto opt = optimal_source_strengths(primary, secondary, cdouble(1.0, 0.0));
    CHECK(std::abs(opt.strengths[0]) < 1e-14);
}

TEST_CASE("analytic solution matches the dense grid-search oracle") {
    dsp::Rng rng(20240817);
    // 2 grid points, 1 secondary, random complex entries
    std::vector<cdouble> primary = {cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                                    cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1))};
    ComplexMatrix secondary(2, 1);
    secondary(0, 0) = cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
    secondary(1, 0) = cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const cdouble q_p(0.8, -0.6);

    const auto opt = optimal_source_strengths(primary, secondary, q_p);
    const auto searched = oracles::grid_search_strengths(primary, secondary, q_p,
                                                         opt.strengths);
    CHECK(std::abs(searched[0] - opt.strengths[0]) <= 1e-3 * std::abs(opt.strengths[0]));

    const double j_analytic =
        oracles::squared_residual(primary, secondary, q_p, opt.strengths);
    const double j_searched =
        oracles::squared_residual(primary, secondary, q_p, searched);
    CHECK(j_analytic <= j_searched * (1.0 + 1e-9));
}

TEST_CASE("optimal strengths are a minimum under random perturbation") {
    dsp::Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t nv = 3 + static_cast<std::size_t>(rng.uniform(0, 4));
        const std::size_t ks = 1 + static_cast<std::size_t>(rng.uniform(0, 3));
        std::vector<cdouble> primary(nv);
        ComplexMatrix secondary(nv, ks);
        for (auto& p : primary)
            p = cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
        for (auto& sv : secondary.data)
            sv = cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const cdouble q_p(1.0, 0.25);

        const auto opt = optimal_source_strengths(primary, secondary, q_p);
        const double j0 =
            oracles::squared_residual(primary, secondary, q_p, opt.strengths);

        double qnorm = 0.0;
        for (const auto& q : opt.strengths)
            qnorm = std::max(qnorm, std::abs(q));
        for (int p = 0; p < 100; ++p) {
            auto perturbed = opt.strengths;
            for (auto& q : perturbed)
                q += cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1)) * (0.1 * qnorm);
            const double j =
                oracles::squared_residual(primary, secondary, q_p, perturbed);
            CHECK(j >= j0 * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("rank-deficient secondary matrix is reported, not solved") {
    std::vector<cdouble> primary = {cdouble(1.0, 0.0), cdouble(0.5, 0.5)};
    ComplexMatrix secondary(2, 2);
    // identical columns
    secondary(0, 0) = secondary(0, 1) = cdouble(1.0, 1.0);
    secondary(1, 0) = secondary(1, 1) = cdouble(0.2, -0.7);
    try {
        optimal_source_strengths(primary, secondary, cdouble(1.0, 0.0));
        FAIL("expected IllPosedControlError");
    } catch (const IllPosedControlError& e) {
        CHECK(e.condition_number() > 1e12);
    }
}

TEST_CASE("noise reduction metric") {
    std::vector<cdouble> a = {cdouble(1.0, 0.0), cdouble(0.0, 1.0)};

    CHECK(noise_reduction_db(a, a) == doctest::Approx(0.0));

    std::vector<cdouble> half = {a[0] * 0.5, a[1] * 0.5};
    CHECK(noise_reduction_db(a, half) == doctest::Approx(6.0206).epsilon(1e-4));

    std::vector<cdouble> pp = {cdouble(1.0, 0.0), cdouble(1.0, 0.0)};
    std::vector<cdouble> pt = {cdouble(1.0, 0.0), cdouble(0.0, 0.0)};
    CHECK(noise_reduction_db(pp, pt) == doctest::Approx(3.0103).epsilon(1e-4));

    std::vector<cdouble> zero = {cdouble(0.0, 0.0), cdouble(0.0, 0.0)};
    CHECK(std::isinf(noise_reduction_db(a, zero)));

    std::vector<cdouble> shorter = {cdouble(1.0, 0.0)};
    CHECK_THROWS_AS(noise_reduction_db(a, shorter), DomainError);
}

namespace {

SourceLayout boundary_layout() {
    SourceLayout layout;
    layout.opening_center = {0.32, 0.50, 0.46};
    layout.opening_lx = 0.20;
    layout.opening_lz = 0.48;
    layout.primary.position = {0.32, 0.25, 0.46};
    layout.primary.strength = {1.0, 0.0};
    layout.secondaries = {
        {{0.22, 0.50, 0.46}, {1.0, 0.0}},
        {{0.42, 0.50, 0.46}, {1.0, 0.0}},
        {{0.32, 0.50, 0.22}, {1.0, 0.0}},
        {{0.32, 0.50, 0.70}, {1.0, 0.0}},
    };
    return layout;
}

double optimal_nr_at(const SourceLayout& layout, const EvalGrid& grid, double freq,
                     const Medium& medium) {
    const auto tm = transfer_matrices(layout, grid, freq, medium);
    const auto opt = optimal_source_strengths(tm, layout.primary.strength);
    std::vector<cdouble> off(tm.primary.size()), on(tm.primary.size());
    for (std::size_t i = 0; i < off.size(); ++i) {
        off[i] = tm.primary[i] * layout.primary.strength;
        on[i] = off[i];
        for (std::size_t k = 0; k < opt.strengths.size(); ++k)
            on[i] += tm.secondary(i, k) * opt.strengths[k];
    }
    return noise_reduction_db(off, on);
}

} // namespace

TEST_CASE("NR is invariant to primary strength scaling") {
    const auto layout = boundary_layout();
    const Medium air;
    const EvalGrid grid = hemisphere_grid(layout.opening_center, 2.0, 64);

    const double base = optimal_nr_at(layout, grid, 400.0, air);
    for (double alpha : {0.1, 10.0}) {
        auto scaled = layout;
        scaled.primary.strength *= alpha;
        const double nr = optimal_nr_at(scaled, grid, 400.0, air);
        CHECK(nr == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("boundary control collapses above the opening limit") {
    const auto layout = boundary_layout();
    const Medium air;
    const EvalGrid grid = hemisphere_grid(layout.opening_center, 2.0, 64);

    const double nr500 = optimal_nr_at(layout, grid, 500.0, air);
    const double nr1000 = optimal_nr_at(layout, grid, 1000.0, air);
    CHECK(nr500 - nr1000 >= 10.0);
}
