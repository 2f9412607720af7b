#include <cmath>

#include "doctest.h"
#include "twosec/economy.hpp"

using namespace twosec;
using doctest::Approx;

TEST_CASE("damage fraction") {
    CHECK(damage_fraction(0.0, 0.00236) == 0.0);
    CHECK(damage_fraction(3.0, 0.00236) == Approx(0.0208).epsilon(5e-3));
    CHECK(damage_fraction(3.0, 0.004352) == Approx(0.039168 / 1.039168).epsilon(1e-12));
    CHECK_THROWS_AS(damage_fraction(1.0, -0.1), DomainError);
}

TEST_CASE("sector and energy output") {
    CHECK(sector_output(1.0, 0.0, 1.0, kLaborUnit, 1.0, 0.3, 0.03) == Approx(1.0));
    // 2015 goods sector at the calibrated factors and p1*A1 = 5.024: nominal output 35.3032
    CHECK(sector_output(5.024, 0.0, 70.634, 2440.8038, 12.0332, 0.3, 0.03) == Approx(35.3032).epsilon(1e-4));
    const double y = sector_output(2.0, 0.1, 3.0, 500.0, 4.0, 0.3, 0.03);
    CHECK(sector_output(2.0, 0.1, 6.0, 1000.0, 8.0, 0.3, 0.03) == Approx(2 * y).epsilon(1e-14));
    CHECK_THROWS_AS(sector_output(1.0, 0.0, 0.0, 1.0, 1.0, 0.3, 0.03), DomainError);

    CHECK(energy_output(17.9382, 12.5631, 131.2177, 0.597) == Approx(35.85).epsilon(1e-4));
    CHECK(energy_output(1.0, 7.0, 7.0 * kLaborUnit, 0.597) == Approx(7.0).epsilon(1e-14));
    const double e = energy_output(3.0, 2.0, 300.0, 0.597);
    CHECK(energy_output(3.0, 4.0, 600.0, 0.597) == Approx(2 * e).epsilon(1e-14));
    CHECK_THROWS_AS(energy_output(1.0, 1.0, 0.0, 0.5), DomainError);
}

TEST_CASE("CES aggregate with distribution weights raised to 1/eps") {
    // (0.5^2 * 1^-1 + 0.5^2 * 4^-1)^-1
    CHECK(ces_aggregate(1.0, 4.0, 0.5, 0.5) == Approx(3.2).epsilon(1e-14));
    for (double w : {0.2, 0.5, 0.75})
        for (double eps : {0.2, 0.5, 2.0}) {
            const double k = std::pow(std::pow(w, 1 / eps) + std::pow(1 - w, 1 / eps), eps / (eps - 1));
            CHECK(ces_aggregate(3.0, 3.0, w, eps) == Approx(3.0 * k).epsilon(1e-13));
        }
    CHECK(ces_aggregate(2.0, 0.0, 0.5, 0.5) == 0.0);
    CHECK_THROWS_AS(ces_aggregate(0.0, 0.0, 0.5, 0.5), DomainError);
    CHECK(ces_aggregate(1.0, 4.0, 0.5, 0.5, 2.0) == Approx(6.4));
}

TEST_CASE("relative price") {
    CHECK(relative_price(2.0, 2.0) == 1.0);
    const double d1 = damage_fraction(3.0, 0.004352), d2 = damage_fraction(3.0, 0.001414);
    CHECK(relative_price(1.0 - d1, 1.0 - d2) == Approx(0.9746).epsilon(1e-4));
    const double g = relative_price(std::pow(1.1086, 5), std::pow(1.0362, 5)) /
                     relative_price(std::pow(1.1086, 4), std::pow(1.0362, 4));
    CHECK(g == Approx(1.1086 / 1.0362).epsilon(1e-14));
    CHECK_THROWS_AS(relative_price(1.0, 0.0), DomainError);
}

TEST_CASE("CES expenditure split") {
    auto [a, b] = ces_expenditure_split(2.0, 1.5, 1.5, 0.5, 0.5);
    CHECK(a == Approx(b));
    auto [x1, x2] = ces_expenditure_split(1.0, 1.0, 1.0, 0.25, 0.2);
    CHECK(x1 == Approx(0.25));
    CHECK(x2 == Approx(0.75));
    auto [y1, y2] = ces_expenditure_split(1.0, 1.0, 2.0, 0.25, 0.2);
    const double ratio = (1.0 / 3.0) * std::pow(0.5, 0.8);  // e1/e2
    CHECK(y1 * 1.0 + y2 * 2.0 == Approx(1.0));
    CHECK(y1 / (2.0 * y2) == Approx(ratio));
}

TEST_CASE("abatement cost") {
    const auto a = default_config("structural_change_het").abatement;
    CHECK(abatement_cost(0.0, 40.0, 3, a) == 0.0);
    CHECK(backstop_price(0, a) == 550.0);
    CHECK(backstop_price(1, a) == Approx(550 * 0.975));
    CHECK(backstop_price(10, a) == Approx(550 * std::pow(0.975, 10)));
    // saturated logistic: cost per tonne tends to a_bar times the backstop price
    const double huge = 1e7;
    CHECK(1000 * abatement_cost(1.0, huge, 0, a) / huge == Approx(a.a_bar * 550).epsilon(1e-9));
    // marginal cost against a central difference
    for (int t : {0, 5, 17}) {
        const double E = 40.0, mu = 0.4, h = 1e-6;
        const double fd = (abatement_cost(mu + h, E, t, a) - abatement_cost(mu - h, E, t, a)) / (2 * h * E);
        CHECK(abatement_marginal_cost(mu, E, t, a) == Approx(fd).epsilon(1e-7));
    }
    CHECK_THROWS_AS(abatement_cost(1.5, 40.0, 0, a), DomainError);
}

namespace {
StaticInputs calibration_inputs(const ModelConfig& c, double s) {
    StaticInputs in{223.0, 7403.0, 0.0, 5.024, 5.024, 17.9382, 1.0, 0, 0, 0.0, 0, false};
    const double Y = producible_output(in, c);
    in.c_expenditure = (1 - s) * Y;
    in.i_expenditure = s * Y;
    return in;
}
}  // namespace

TEST_CASE("2015 allocation reproduces the calibration table") {
    auto c = default_config("structural_change_het");
    // goods value-added share implied by the table's labor split
    const double v = 2440.8038 / (2440.8038 + 4830.9785);
    const double wc = 1 - c.preference.omega_c_services, wi = 1 - c.technology.omega_I_services;
    const double s = (v - wc) / (wi - wc);
    auto in = calibration_inputs(c, s);
    auto a = static_allocation(in, c);
    CHECK(a.energy == Approx(35.85).epsilon(2e-4));
    CHECK(a.ke == Approx(12.5631).epsilon(1e-4));
    CHECK(a.le == Approx(131.2177).epsilon(1e-4));
    CHECK(a.k1 == Approx(70.634).epsilon(1e-4));
    CHECK(a.k2 == Approx(139.8029).epsilon(1e-4));
    CHECK(a.l1 == Approx(2440.8038).epsilon(1e-4));
    CHECK(a.l2 == Approx(4830.9785).epsilon(1e-4));
    CHECK(a.e1 == Approx(12.0332).epsilon(2e-4));
    CHECK(a.e2 == Approx(23.8168).epsilon(2e-4));
    CHECK(in.c_expenditure == Approx(77.02).epsilon(1e-3));
    CHECK(in.i_expenditure == Approx(28.16).epsilon(1e-3));
}

TEST_CASE("factor payments exhaust output and equalize across sectors") {
    auto c = default_config("structural_change_het");
    auto in = calibration_inputs(c, 0.25);
    in.T = 1.2;
    in.A1 = 6.0;
    in.A2 = 4.0;
    in.c_expenditure = 0.75 * producible_output(in, c);
    in.i_expenditure = 0.25 * producible_output(in, c);
    auto a = static_allocation(in, c);
    const double Kf = a.k1 + a.k2, Lf = a.l1 + a.l2, E = a.e1 + a.e2;
    CHECK(a.r * Kf + a.w * Lf + a.pe * E == Approx(a.y_nominal).epsilon(1e-12));
    const double aE = c.technology.alpha_E;
    CHECK((1 - aE) * a.pe * a.energy / a.le == Approx(a.w).epsilon(1e-12));
    CHECK(aE * a.pe * a.energy / a.ke == Approx(a.r).epsilon(1e-12));
    CHECK(a.p1 * a.y1 + a.p2 * a.y2 == Approx(a.y_nominal).epsilon(1e-12));
    CHECK(a.k1 + a.k2 + a.ke == Approx(in.K).epsilon(1e-13));
    CHECK(a.l1 + a.l2 + a.le == Approx(in.L).epsilon(1e-13));
}

TEST_CASE("constant returns in capital and labor") {
    auto c = default_config("dice_like_het");
    StaticInputs in{150.0, 9000.0, 2.0, 7.0, 7.0, 20.0, 1.0, 0, 0, 0.3, 4, false};
    const double y1 = producible_output(in, c);
    in.K *= 2;
    in.L *= 2;
    CHECK(producible_output(in, c) == Approx(2 * y1).epsilon(1e-13));
}

TEST_CASE("symmetric sectors split factors evenly") {
    auto c = default_config("dice_like_hom");
    StaticInputs in{223.0, 7403.0, 1.5, 5.024, 5.024, 17.9382, 1.0, 0, 0, 0.0, 0, false};
    const double Y = producible_output(in, c);
    in.c_expenditure = 0.7 * Y;
    in.i_expenditure = 0.3 * Y;
    auto a = static_allocation(in, c);
    CHECK(a.k1 == Approx(a.k2).epsilon(1e-14));
    CHECK(a.l1 == Approx(a.l2).epsilon(1e-14));
    CHECK(a.e1 == Approx(a.e2).epsilon(1e-14));
    CHECK(a.p1 == Approx(a.p2).epsilon(1e-14));
}

TEST_CASE("degenerate weights send every final factor to goods") {
    auto c = default_config("dice_like_hom");
    c.preference.omega_c_services = 1e-12;
    c.technology.omega_I_services = 1e-12;
    StaticInputs in{223.0, 7403.0, 0.0, 5.024, 5.024, 17.9382, 1.0, 0, 0, 0.0, 0, false};
    const double Y = producible_output(in, c);
    in.c_expenditure = 0.7 * Y;
    in.i_expenditure = 0.3 * Y;
    auto a = static_allocation(in, c);
    CHECK(a.l2 / (a.l1 + a.l2) < 1e-9);
    CHECK(a.k2 / (a.k1 + a.k2) < 1e-9);
}

TEST_CASE("expenditure must match producible output") {
    auto c = default_config("structural_change_het");
    auto in = calibration_inputs(c, 0.25);
    in.c_expenditure *= 1.01;
    CHECK_THROWS_AS(static_allocation(in, c), InfeasibleAllocation);
    in.c_expenditure /= 1.01 * 1.01;
    CHECK_THROWS_AS(static_allocation(in, c), InfeasibleAllocation);
}

TEST_CASE("a carbon price pulls labor out of energy") {
    auto c = default_config("structural_change_het");
    StaticInputs in{223.0, 7403.0, 0.85, 5.024, 5.024, 17.9382, 1.0, 0, 0, 0.6, 10, true};
    const double Y = producible_output(in, c);
    in.c_expenditure = 0.75 * Y;
    in.i_expenditure = 0.25 * Y;
    auto taxed = static_allocation(in, c);
    in.price_carbon = false;
    const double Y0 = producible_output(in, c);
    in.c_expenditure = 0.75 * Y0;
    in.i_expenditure = 0.25 * Y0;
    auto free = static_allocation(in, c);
    CHECK(taxed.tax > 0);
    CHECK(taxed.le < free.le);
    // the energy wage net of the tax matches the final-sector wage
    const double aE = c.technology.alpha_E;
    CHECK((1 - aE) * (taxed.pe - taxed.tax) * taxed.energy / taxed.le == Approx(taxed.w).epsilon(1e-10));
}

TEST_CASE("scalar and dual static solutions agree") {
    auto c = default_config("structural_change_het");
    StaticExog<double> x{7403.0, 6.0, 5.5, 18.0, 1.0, 6};
    auto v = solve_static<double>(200.0, 1.3, 0.4, x, true, c);
    using D = Dual<2>;
    StaticExog<D> xd{7403.0, 6.0, 5.5, 18.0, 1.0, 6};
    auto d = solve_static<D>(D::seed(200.0, 0), D(1.3), D::seed(0.4, 1), xd, true, c);
    CHECK(d.X.v == Approx(v.X).epsilon(1e-14));
    // slopes of output against central differences
    auto X = [&](double K, double mu) { return solve_static<double>(K, 1.3, mu, x, true, c).X; };
    const double h = 1e-5;
    CHECK(d.X.d[0] == Approx((X(200 + h, 0.4) - X(200 - h, 0.4)) / (2 * h)).epsilon(1e-7));
    CHECK(d.X.d[1] == Approx((X(200, 0.4 + h) - X(200, 0.4 - h)) / (2 * h)).epsilon(1e-6));
}
