#include "doctest.h"
#include "helpers.hpp"

#include "rkistab/io.hpp"
#include "rkistab/sim.hpp"
#include "rkistab/stab_poly.hpp"

using namespace rkistab;
using namespace testing;

TEST_CASE("ssp22 natural form converts to the midpoint-free Heun tableau") {
    ButcherTableau bt = shu_osher_to_butcher(ssp22_natural());
    REQUIRE(bt.exact());
    CHECK((*bt.A_exact)[0][0] == 0);
    CHECK((*bt.A_exact)[1][0] == 1);
    CHECK((*bt.A_exact)[1][1] == 0);
    CHECK((*bt.b_exact)[0] == Rational(1, 2));
    CHECK((*bt.b_exact)[1] == Rational(1, 2));
    CHECK(bt.c[1] == doctest::Approx(1.0));
}

TEST_CASE("butcher embedding converts back unchanged") {
    ButcherTableau rk4 = classic_tableau("rk4");
    ShuOsherForm so = butcher_to_shu_osher(rk4);
    for (const auto& row : so.alpha)
        for (double a : row) CHECK(a == 0.0);
    for (int i = 0; i < rk4.s; ++i)
        for (int j = 0; j < rk4.s; ++j) CHECK(so.beta[i][j] == rk4.A[i][j]);
    for (int j = 0; j < rk4.s; ++j) CHECK(so.beta[rk4.s][j] == rk4.b[j]);
    for (double v : so.v()) CHECK(v == 1.0);

    ButcherTableau back = shu_osher_to_butcher(so);
    CHECK(*back.A_exact == *rk4.A_exact);
    CHECK(*back.b_exact == *rk4.b_exact);
}

TEST_CASE("round trip is the identity for every classic tableau") {
    for (const auto& name : classic_names()) {
        ButcherTableau bt = classic_tableau(name);
        ButcherTableau back = shu_osher_to_butcher(butcher_to_shu_osher(bt));
        for (int i = 0; i < bt.s; ++i) {
            for (int j = 0; j < bt.s; ++j) CHECK(std::abs(back.A[i][j] - bt.A[i][j]) <= 1e-14);
            CHECK(std::abs(back.b[i] - bt.b[i]) <= 1e-14);
        }
        if (bt.b_embedded) {
            REQUIRE(back.b_embedded);
            for (int i = 0; i < bt.s; ++i) CHECK(std::abs((*back.b_embedded)[i] - (*bt.b_embedded)[i]) <= 1e-14);
        }
    }
}

TEST_CASE("ssp22 butcher form has Q2 = z/2") {
    InternalStabilitySet iss = derive_internal_stability(butcher_to_shu_osher(ssp22_butcher()));
    CHECK(same(iss.Q_exact->at(1), rpoly({"0", "1/2"})));
}

TEST_CASE("ee12 natural form converts to a tableau with the Taylor stability polynomial") {
    ButcherTableau bt = shu_osher_to_butcher(build_ee_extrapolation(12));
    InternalStabilitySet iss = derive_internal_stability_butcher(bt);
    Poly t = to_double(taylor_exp(12));
    for (int k = 0; k <= 12; ++k) CHECK(std::abs(iss.P.coeff(k) - t.coeff(k)) <= 1e-12 * std::abs(t.coeff(k)));
    CHECK(iss.P.degree() == 12);
}

TEST_CASE("residual transformation") {
    SUBCASE("ssp22 natural, residual on stage 2") {
        ResidualVector rb = residual_butcher_from_shu_osher(ssp22_natural(), {0.0, 1.0, 0.0});
        CHECK(rb[0] == 0.0);
        CHECK(rb[1] == doctest::Approx(1.0));
        CHECK(rb[2] == doctest::Approx(0.5));
    }
    SUBCASE("alpha = 0 leaves residuals alone") {
        ResidualVector r = {0.0, 0.3, -1.5, 2.0, 0.25};
        CHECK(residual_butcher_from_shu_osher(butcher_to_shu_osher(classic_tableau("rk4")), r) == r);
    }
    SUBCASE("zero maps to zero") {
        ShuOsherForm so = build_ssp3(3);
        ResidualVector r(static_cast<std::size_t>(so.s) + 1, 0.0);
        for (double x : residual_butcher_from_shu_osher(so, r)) CHECK(x == 0.0);
    }
    SUBCASE("linearity") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1, 1);
        for (const auto& so : sample_forms()) {
            auto n = static_cast<std::size_t>(so.s) + 1;
            ResidualVector a(n), b(n), ab(n);
            for (std::size_t k = 1; k < n; ++k) {
                a[k] = u(rng);
                b[k] = u(rng);
                ab[k] = a[k] + b[k];
            }
            ResidualVector fa = residual_butcher_from_shu_osher(so, a), fb = residual_butcher_from_shu_osher(so, b),
                           fab = residual_butcher_from_shu_osher(so, ab);
            double scale = 1.0;
            for (std::size_t k = 0; k < n; ++k) scale = std::max({scale, std::abs(fa[k]), std::abs(fb[k])});
            for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fab[k] - fa[k] - fb[k]) <= 1e-14 * scale);
        }
    }
}

TEST_CASE("validation") {
    CHECK(validate(classic_tableau("rk4")).empty());
    for (const auto& so : sample_forms()) CHECK(validate(so).empty());

    ButcherTableau bad = classic_tableau("rk4");
    bad.c[1] += 1e-3;
    auto v = validate(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("row 2") != std::string::npos);

    ShuOsherForm up = ssp22_natural();
    up.alpha[0][1] = 0.5;
    auto w = validate(up);
    REQUIRE(!w.empty());
    bool explicit_msg = false;
    for (const auto& m : w) explicit_msg |= m.find("not explicit") != std::string::npos;
    CHECK(explicit_msg);
}

TEST_CASE("natural and butcher forms agree on the scalar test equation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(-3, 0.5), im(-3, 3);
    for (const auto& so : sample_forms()) {
        InternalStabilitySet a = derive_internal_stability(so);
        InternalStabilitySet b = derive_internal_stability_butcher(shu_osher_to_butcher(so));
        for (int k = 0; k < 20; ++k) {
            cplx z(re(rng), im(rng));
            cplx pa = eval(a.P, z), pb = eval(b.P, z);
            CHECK(std::abs(pa - pb) <= 1e-13 * std::max(1.0, std::abs(pa)));
        }
        // and by actually stepping both forms from U0 = 1
        ShuOsherStepper sa(so), sb(butcher_to_shu_osher(shu_osher_to_butcher(so)));
        StateResidualVector zero(static_cast<std::size_t>(so.s) + 1, Vec(1, 0.0));
        for (int k = 0; k < 20; ++k) {
            IvpProblem p = linear_problem({{re(rng)}}, {1.0});
            double tau = 0.05 + 0.5 * (im(rng) + 3) / 6;
            double ya = sa.step(p, 0.0, {1.0}, tau, zero).u[0], yb = sb.step(p, 0.0, {1.0}, tau, zero).u[0];
            CHECK(std::abs(ya - yb) <= 1e-13 * std::max(1.0, std::abs(ya)));
        }
    }
}

TEST_CASE("json round trip keeps exact coefficients") {
    ShuOsherForm so = build_ee_extrapolation(4);
    ShuOsherForm back = shu_osher_from_json(json::parse(to_json(so).dump()));
    CHECK(*back.alpha_exact == *so.alpha_exact);
    CHECK(*back.beta_exact == *so.beta_exact);
    CHECK(*back.alpha_hat_exact == *so.alpha_hat_exact);

    ButcherTableau bt = classic_tableau("fehlberg54");
    json j = to_json(bt);
    CHECK(j.contains("A"));
    CHECK(j.contains("b"));
    CHECK(j.contains("c"));
    CHECK(j.contains("b_embedded"));
    CHECK(j["exact"]["b"][0].get<std::string>() == "16/135");
    ButcherTableau bt2 = butcher_from_json(json::parse(j.dump()));
    CHECK(*bt2.A_exact == *bt.A_exact);
    CHECK(*bt2.b_embedded_exact == *bt.b_embedded_exact);

    ShuOsherForm d = ShuOsherForm::from_double({{0, 0}, {1, 0}, {0.5, 0.5}}, {{0, 0}, {1, 0}, {0, 0.5}}, 2);
    ShuOsherForm d2 = shu_osher_from_json(to_json(d));
    CHECK(d2.alpha == d.alpha);
    CHECK(!d2.exact());
}
