#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nmecut/qpd.hpp"

using namespace nmecut;

namespace {

// Independent reconstruction: apply every term to each |i><j| by summing its
// Kraus actions directly and compare with the input operator.
double kraus_reconstruction_error(const QuasiProbDecomposition& qpd) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const ComplexMatrix in = ComplexMatrix::basis_op(2, i, j);
            ComplexMatrix out(2, 2);
            for (const auto& t : qpd.terms())
                for (const auto& k : t.channel.kraus()) out += k * in * k.adjoint() * Complex{t.coefficient, 0.0};
            worst = std::max(worst, max_abs_diff(out, in));
        }
    return worst;
}

std::vector<double> k_grid(int steps) {
    std::vector<double> out;
    for (int i = 0; i <= steps; ++i) out.push_back(static_cast<double>(i) / steps);
    return out;
}

double coefficient_sum(const QuasiProbDecomposition& qpd) {
    double s = 0.0;
    for (const auto& t : qpd.terms()) s += t.coefficient;
    return s;
}

}  // namespace

TEST_CASE("harada cut") {
    const auto q = harada_wire_cut();
    REQUIRE(q.size() == 3);
    CHECK(q.kappa() == 3.0);
    CHECK(q.terms()[0].coefficient == 1.0);
    CHECK(q.terms()[1].coefficient == 1.0);
    CHECK(q.terms()[2].coefficient == -1.0);
    CHECK(q.sign(2) == -1);
    for (const auto& t : q.terms()) CHECK_FALSE(t.consumes_resource);
    for (double p : q.probabilities()) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(reconstruction_error(q) <= 1e-10);
    CHECK(kraus_reconstruction_error(q) <= 1e-10);
}

TEST_CASE("nme cut coefficients") {
    SUBCASE("k = 1 is plain teleportation") {
        const auto q = nme_wire_cut(NmeParameter(1.0));
        REQUIRE(q.size() == 2);
        CHECK(q.terms()[0].coefficient == 0.5);
        CHECK(q.terms()[1].coefficient == 0.5);
        CHECK(q.kappa() == 1.0);
        for (const auto& t : q.terms()) CHECK(t.consumes_resource);
    }
    SUBCASE("k = 0") {
        const auto q = nme_wire_cut(NmeParameter(0.0));
        REQUIRE(q.size() == 3);
        CHECK(q.terms()[0].coefficient == 1.0);
        CHECK(q.terms()[1].coefficient == 1.0);
        CHECK(q.terms()[2].coefficient == -1.0);
        CHECK(q.kappa() == 3.0);
        CHECK(q.kappa() == harada_wire_cut().kappa());
        CHECK(reconstruction_error(q) <= 1e-10);
    }
    SUBCASE("k = 0.5") {
        const auto q = nme_wire_cut(NmeParameter(0.5));
        REQUIRE(q.size() == 3);
        CHECK(std::abs(q.terms()[0].coefficient - 5.0 / 9.0) <= 1e-15);
        CHECK(std::abs(q.terms()[1].coefficient - 5.0 / 9.0) <= 1e-15);
        CHECK(std::abs(q.terms()[2].coefficient + 1.0 / 9.0) <= 1e-15);
        CHECK(std::abs(q.kappa() - 11.0 / 9.0) <= 1e-15);
        CHECK(q.terms()[0].consumes_resource);
        CHECK(q.terms()[1].consumes_resource);
        CHECK_FALSE(q.terms()[2].consumes_resource);
        // Cross-check against the overlap: f = 0.9 at k = 0.5.
        CHECK(std::abs(q.kappa() - (2.0 / 0.9 - 1.0)) <= 1e-12);
    }
}

TEST_CASE("reconstruction of the identity wire") {
    for (double k : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        CAPTURE(k);
        const auto q = nme_wire_cut(NmeParameter(k));
        CHECK(reconstruction_error(q) <= 1e-10);
        CHECK(kraus_reconstruction_error(q) <= 1e-10);
    }
    const auto single = QuasiProbDecomposition({{1.0, identity_channel(2), false}});
    CHECK(max_abs_diff(reconstruct_channel(single), identity_channel(2).choi()) == 0.0);
}

TEST_CASE("overhead closed forms agree on a grid") {
    for (double k : k_grid(20)) {
        CAPTURE(k);
        const NmeParameter kp(k);
        const auto q = nme_wire_cut(kp);
        const double via_f = optimal_overhead(overlap_f_pure(nme_state(kp)));
        CHECK(std::abs(q.kappa() - optimal_overhead_pure(kp)) <= 1e-12);
        CHECK(std::abs(q.kappa() - via_f) <= 1e-12);
        CHECK(std::abs(coefficient_sum(q) - 1.0) <= 1e-12);
        double psum = 0.0;
        for (double p : q.probabilities()) psum += p;
        CHECK(std::abs(psum - 1.0) <= 1e-12);
        CHECK(q.kappa() >= 1.0);
        CHECK(reconstruction_error(q) <= 1e-10);
    }
}

TEST_CASE("overhead examples") {
    CHECK(optimal_overhead(0.5) == 3.0);
    CHECK(optimal_overhead(1.0) == 1.0);
    CHECK(std::abs(optimal_overhead(0.9) - 11.0 / 9.0) <= 1e-15);
    CHECK(std::abs(optimal_overhead(0.9) - nme_wire_cut(k_from_f(0.9)).kappa()) <= 1e-12);
    CHECK(optimal_overhead_pure(NmeParameter(0.0)) == 3.0);
    CHECK(optimal_overhead_pure(NmeParameter(1.0)) == 1.0);
    CHECK(std::abs(optimal_overhead_pure(NmeParameter(0.5)) - 11.0 / 9.0) <= 1e-15);
    CHECK_THROWS_AS(optimal_overhead(0.49), Error);
    CHECK_THROWS_AS(optimal_overhead(1.01), Error);
    CHECK_THROWS_AS(optimal_overhead(NAN), Error);
    try {
        optimal_overhead(0.2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfRange);
    }
}

TEST_CASE("overhead is strictly monotone") {
    double prev = optimal_overhead(0.5);
    for (int i = 1; i <= 100; ++i) {
        const double g = optimal_overhead(0.5 + 0.005 * i);
        CHECK(g < prev);
        prev = g;
    }
    prev = optimal_overhead_pure(NmeParameter(0.0));
    for (int i = 1; i <= 100; ++i) {
        const double g = optimal_overhead_pure(NmeParameter(0.01 * i));
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("continuity at the teleportation limit") {
    const NmeParameter k(1.0 - 1e-6);
    CHECK(nme_flip_coefficient(k) <= 1e-12);
    CHECK(std::abs(nme_wire_cut(k).kappa() - 1.0) <= 1e-11);
}

TEST_CASE("k above one obeys the same invariants") {
    for (double k : {1.5, 2.0, 5.0, 40.0}) {
        CAPTURE(k);
        const NmeParameter kp(k);
        const auto q = nme_wire_cut(kp);
        CHECK(reconstruction_error(q) <= 1e-10);
        CHECK(std::abs(coefficient_sum(q) - 1.0) <= 1e-12);
        // k and 1/k give states related by a local flip; the overhead matches.
        CHECK(std::abs(q.kappa() - optimal_overhead_pure(NmeParameter(1.0 / k))) <= 1e-12);
    }
}

TEST_CASE("resource consumption rate") {
    CHECK(resource_consumption_rate(NmeParameter(1.0)) == 1.0);
    CHECK(std::abs(resource_consumption_rate(NmeParameter(0.5)) - 10.0 / 9.0) <= 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    const PureState phi = PureState::from_amplitudes({r, 0.0, 0.0, r});
    for (int i = 1; i <= 20; ++i) {
        const NmeParameter k(0.05 * i);
        CAPTURE(k.k());
        const double overlap = std::norm(phi.inner(nme_state(k)));
        CHECK(std::abs(resource_consumption_rate(k) - 1.0 / overlap) <= 1e-12);
        // Signed weight of the resource-consuming terms.
        const auto q = nme_wire_cut(k);
        double mass = 0.0;
        for (std::size_t t = 0; t < q.size(); ++t)
            if (q.terms()[t].consumes_resource) mass += q.probabilities()[t];
        CHECK(std::abs(mass * q.kappa() - resource_consumption_rate(k)) <= 1e-12);
    }
    CHECK_THROWS_AS(resource_consumption_rate(NmeParameter(0.0)), Error);
}

TEST_CASE("decomposition validation") {
    auto expect_invalid = [](std::vector<QpdTerm> terms) {
        try {
            QuasiProbDecomposition q(std::move(terms));
            FAIL("accepted an invalid decomposition");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidParameter);
        }
    };
    expect_invalid({});
    expect_invalid({{0.5, identity_channel(2), false}});
    expect_invalid({{1.0, identity_channel(2), false}, {0.0, identity_channel(2), false}});
    expect_invalid({{NAN, identity_channel(2), false}});
    expect_invalid({{1.0, identity_channel(4), false}});
    CHECK_THROWS_AS(nme_wire_cut(NmeParameter{-0.1}), Error);
}

TEST_CASE("description format") {
    std::ostringstream os;
    write_description(os, nme_wire_cut(NmeParameter(0.5)));
    CHECK(os.str() ==
          "0 0.555555555556 H.tel[IZ].H^dag resource\n"
          "1 0.555555555556 SH.tel[IZ].SH^dag resource\n"
          "2 -0.111111111111 mp-flip local\n"
          "kappa 1.22222222222\n");

    std::ostringstream one;
    write_description(one, nme_wire_cut(NmeParameter(1.0)));
    CHECK(one.str() ==
          "0 0.5 H.tel[I].H^dag resource\n"
          "1 0.5 SH.tel[I].SH^dag resource\n"
          "kappa 1\n");
}
