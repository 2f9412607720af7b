#pragma once
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twosec {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreferenceParams {
    double beta_annual = 0.985;
    double sigma = 1.45;
    double omega_c_services = 0.5;
    double eps_c = 0.2;
};

// one per final sector; index 0 = goods, 1 = services
struct SectorParams {
    double A0 = 5.024;
    double gamma = 0.076;  // per period
    double theta = 0.00236;
};

struct TechnologyParams {
    double alpha = 0.3;
    double nu = 0.03;
    double alpha_E = 0.597;
    double A_E0 = 17.9382;
    double gamma_E = 0.0;  // per period
    double omega_I_services = 0.5;
    double eps_I = 0.5;
    double A_I0 = 1.0;
    double gamma_I = 0.0;
    double delta_annual = 0.1;
};

struct ClimateParams {
    // row-major: phi[i][j] moves carbon from reservoir j into reservoir i
    std::array<std::array<double, 3>, 3> phi{{{0.88, 0.196, 0.0}, {0.12, 0.797, 0.001}, {0.0, 0.007, 0.999}}};
    double kappa = 3.6813;
    double M_preind = 588.0;
    double zeta1 = 0.1005;
    double zeta2 = 3.6813 / 3.1;
    double zeta3 = 0.088;
    double zeta4 = 0.975;
    double chi_ex_2015 = 0.5;
    double chi_ex_2100 = 1.0;
    double E_land_0 = 2.6;
    double land_decay = 0.885;
    double co2_per_c = 3.666;
};

struct AbatementParams {
    double a_bar = 0.7464;
    std::array<double, 2> a_coefs{0.6561, 0.8881};
    std::array<double, 2> b0_coefs{7.864, -1.4858};
    std::array<double, 2> b1_coefs{1.6791, -0.3157};
    double b2 = 0.4207;
    double backstop_0 = 550.0;
    double backstop_decline = 0.025;
    // logistic coefficients are linear in (period - time_origin) / time_unit
    double time_origin = 0.0;
    double time_unit = 5.0;
};

struct ExogenousPaths {
    double L0 = 7403.0;
    double L_asym = 11500.0;
    double L_growth_exp = 0.134;
    double period_years = 5.0;
    int horizon = 100;
    int start_year = 2015;
    int report_until = 2150;
    int forcing_ramp_until = 2100;
};

struct InitialConditions {
    double K0 = 223.0;
    std::array<double, 3> M0{851.0, 460.0, 1740.0};
    double T0 = 0.85;
    double T_lo0 = 0.0068;
    double E0 = 35.85;
    // calibration anchors for the 2015 split
    double K1 = 70.634, K2 = 139.8029, KE = 12.5631;
    double L1 = 2440.8038, L2 = 4830.9785, LE = 131.2177;
    double E1 = 12.0332, E2 = 23.8168;
};

struct SolverParams {
    double s_lo = 0.01;
    double s_hi = 0.9;
    double s_init = 0.24;
    double mu_init_start = 0.03;
    int mu_ramp_periods = 20;
    int terminal_fixed = 10;   // last periods whose savings rate is tied
    int terminal_anchor = 80;  // ...to this period's value
    int max_iter = 4000;
    double kkt_tol = 1e-9;
    bool price_carbon_in_energy = true;  // energy split sees tau = marginal abatement cost
};

struct ModelConfig {
    std::string variant = "dice_like_hom";
    PreferenceParams preference;
    std::array<SectorParams, 2> sectors;
    TechnologyParams technology;
    ClimateParams climate;
    AbatementParams abatement;
    ExogenousPaths paths;
    InitialConditions initial;
    SolverParams solver;

    double period_discount() const;
    double delta_period() const;
    int reporting_periods() const;  // count of reporting years incl. start
    int year_of(int period) const { return paths.start_year + static_cast<int>(period * paths.period_years); }
};

const std::vector<std::string>& variant_names();
ModelConfig default_config(const std::string& variant);

// labor-augmenting energy TFP growth consistent with goods-sector growth
double labor_augmenting_energy_growth(double gamma_goods, double alpha, double nu, double alpha_E);

void validate(const ModelConfig& c);
ModelConfig parse_config(const std::string& text);
ModelConfig load_config(const std::string& path);
std::string serialize(const ModelConfig& c);
bool operator==(const ModelConfig& a, const ModelConfig& b);

// flat key access ("technology.eps_I"); aliases: eps_I, beta_annual, discount_rate,
// omega_c_services, omega_I_services, theta_assignment
void set_param(ModelConfig& c, const std::string& key, const std::string& value);
std::vector<std::string> sweepable_keys();
std::uint64_t config_hash(const ModelConfig& c);

}  // namespace twosec
