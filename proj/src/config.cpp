#include "twosec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace twosec {

double ModelConfig::period_discount() const { return std::pow(preference.beta_annual, paths.period_years); }
double ModelConfig::delta_period() const { return 1.0 - std::pow(1.0 - technology.delta_annual, paths.period_years); }
int ModelConfig::reporting_periods() const {
    return static_cast<int>(std::floor((paths.report_until - paths.start_year) / paths.period_years + 1e-9)) + 1;
}

double labor_augmenting_energy_growth(double gamma_goods, double alpha, double nu, double alpha_E) {
    // final-sector TFP growth g is labor-augmenting at rate (1+g)^(1/(1-alpha-nu)); energy labor share is 1-alpha_E
    return std::pow(1.0 + gamma_goods, (1.0 - alpha_E) / (1.0 - alpha - nu)) - 1.0;
}

const std::vector<std::string>& variant_names() {
    static const std::vector<std::string> names{"dice_like_hom", "dice_like_het", "structural_change_hom",
                                                "structural_change_het", "counterfactual"};
    return names;
}

namespace {

constexpr double kThetaHom = 0.00236;
constexpr double kThetaVulnerable = 0.004352;
constexpr double kThetaResilient = 0.001414;

void set_thetas(ModelConfig& c, const std::string& assignment) {
    if (assignment == "hom") {
        c.sectors[0].theta = c.sectors[1].theta = kThetaHom;
    } else if (assignment == "het") {
        c.sectors[0].theta = kThetaVulnerable;
        c.sectors[1].theta = kThetaResilient;
    } else if (assignment == "swapped") {
        c.sectors[0].theta = kThetaResilient;
        c.sectors[1].theta = kThetaVulnerable;
    } else {
        throw ValidationError("theta_assignment must be hom, het or swapped, got '" + assignment + "'");
    }
}

}  // namespace

ModelConfig default_config(const std::string& variant) {
    ModelConfig c;
    c.variant = variant;
    const auto& known = variant_names();
    if (std::find(known.begin(), known.end(), variant) == known.end())
        throw ValidationError("unknown variant '" + variant + "'");
    const bool dice = variant.rfind("dice_like", 0) == 0;

    if (dice) {
        c.sectors[0].gamma = c.sectors[1].gamma = 0.076;
        c.preference.omega_c_services = 0.5;
        c.technology.omega_I_services = 0.5;
    } else {
        c.sectors[0].gamma = 0.1086;
        c.sectors[1].gamma = 0.0362;
        c.preference.omega_c_services = 0.75;
        c.technology.omega_I_services = 0.43;
    }
    const bool hom = variant.size() > 3 && variant.compare(variant.size() - 3, 3, "hom") == 0;
    set_thetas(c, variant == "counterfactual" ? "swapped" : (hom ? "hom" : "het"));

    auto& tech = c.technology;
    tech.gamma_E = labor_augmenting_energy_growth(c.sectors[0].gamma, tech.alpha, tech.nu, tech.alpha_E);
    return c;
}

// ---- flat field registry shared by parse, serialize and set_param ----

namespace {

struct Field {
    std::string section;
    std::string key;
    double* real = nullptr;
    int* integer = nullptr;
    bool* flag = nullptr;
    std::size_t n = 1;  // >1 for arrays of reals
};

std::vector<Field> fields(ModelConfig& c) {
    std::vector<Field> f;
    auto real = [&](const char* s, const char* k, double& v) { f.push_back({s, k, &v, nullptr, nullptr, 1}); };
    auto arr = [&](const char* s, const char* k, double* v, std::size_t n) { f.push_back({s, k, v, nullptr, nullptr, n}); };
    auto integer = [&](const char* s, const char* k, int& v) { f.push_back({s, k, nullptr, &v, nullptr, 1}); };
    auto flag = [&](const char* s, const char* k, bool& v) { f.push_back({s, k, nullptr, nullptr, &v, 1}); };

    auto& p = c.preference;
    real("preference", "beta_annual", p.beta_annual);
    real("preference", "sigma", p.sigma);
    real("preference", "omega_c_services", p.omega_c_services);
    real("preference", "eps_c", p.eps_c);
    const char* sec[2] = {"sectors.goods", "sectors.services"};
    for (int i = 0; i < 2; ++i) {
        real(sec[i], "A0", c.sectors[i].A0);
        real(sec[i], "gamma", c.sectors[i].gamma);
        real(sec[i], "theta", c.sectors[i].theta);
    }
    auto& t = c.technology;
    real("technology", "alpha", t.alpha);
    real("technology", "nu", t.nu);
    real("technology", "alpha_E", t.alpha_E);
    real("technology", "A_E0", t.A_E0);
    real("technology", "gamma_E", t.gamma_E);
    real("technology", "omega_I_services", t.omega_I_services);
    real("technology", "eps_I", t.eps_I);
    real("technology", "A_I0", t.A_I0);
    real("technology", "gamma_I", t.gamma_I);
    real("technology", "delta_annual", t.delta_annual);
    auto& cl = c.climate;
    arr("climate", "phi", cl.phi[0].data(), 9);
    real("climate", "kappa", cl.kappa);
    real("climate", "M_preind", cl.M_preind);
    real("climate", "zeta1", cl.zeta1);
    real("climate", "zeta2", cl.zeta2);
    real("climate", "zeta3", cl.zeta3);
    real("climate", "zeta4", cl.zeta4);
    real("climate", "chi_ex_2015", cl.chi_ex_2015);
    real("climate", "chi_ex_2100", cl.chi_ex_2100);
    real("climate", "E_land_0", cl.E_land_0);
    real("climate", "land_decay", cl.land_decay);
    real("climate", "co2_per_c", cl.co2_per_c);
    auto& a = c.abatement;
    real("abatement", "a_bar", a.a_bar);
    arr("abatement", "a_coefs", a.a_coefs.data(), 2);
    arr("abatement", "b0_coefs", a.b0_coefs.data(), 2);
    arr("abatement", "b1_coefs", a.b1_coefs.data(), 2);
    real("abatement", "b2", a.b2);
    real("abatement", "backstop_0", a.backstop_0);
    real("abatement", "backstop_decline", a.backstop_decline);
    real("abatement", "time_origin", a.time_origin);
    real("abatement", "time_unit", a.time_unit);
    auto& x = c.paths;
    real("paths", "L0", x.L0);
    real("paths", "L_asym", x.L_asym);
    real("paths", "L_growth_exp", x.L_growth_exp);
    real("paths", "period_years", x.period_years);
    integer("paths", "horizon", x.horizon);
    integer("paths", "start_year", x.start_year);
    integer("paths", "report_until", x.report_until);
    integer("paths", "forcing_ramp_until", x.forcing_ramp_until);
    auto& in = c.initial;
    real("initial", "K0", in.K0);
    arr("initial", "M0", in.M0.data(), 3);
    real("initial", "T0", in.T0);
    real("initial", "T_lo0", in.T_lo0);
    real("initial", "E0", in.E0);
    real("initial", "K1", in.K1);
    real("initial", "K2", in.K2);
    real("initial", "KE", in.KE);
    real("initial", "L1", in.L1);
    real("initial", "L2", in.L2);
    real("initial", "LE", in.LE);
    real("initial", "E1", in.E1);
    real("initial", "E2", in.E2);
    auto& s = c.solver;
    real("solver", "s_lo", s.s_lo);
    real("solver", "s_hi", s.s_hi);
    real("solver", "s_init", s.s_init);
    real("solver", "mu_init_start", s.mu_init_start);
    integer("solver", "mu_ramp_periods", s.mu_ramp_periods);
    integer("solver", "terminal_fixed", s.terminal_fixed);
    integer("solver", "terminal_anchor", s.terminal_anchor);
    integer("solver", "max_iter", s.max_iter);
    real("solver", "kkt_tol", s.kkt_tol);
    flag("solver", "price_carbon_in_energy", s.price_carbon_in_energy);
    return f;
}

std::string fmt_real(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
    std::string s(buf, r.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ParseError(where + ": expected a number, got '" + raw + "'");
    return v;
}

void assign(Field& f, const std::string& value, const std::string& where) {
    std::string v = trim(value);
    if (f.flag) {
        if (v == "true") *f.flag = true;
        else if (v == "false") *f.flag = false;
        else throw ParseError(where + ": expected true/false");
        return;
    }
    if (f.integer) {
        double d = parse_real(v, where);
        if (d != std::floor(d)) throw ParseError(where + ": expected an integer");
        *f.integer = static_cast<int>(d);
        return;
    }
    if (f.n == 1) {
        *f.real = parse_real(v, where);
        return;
    }
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ParseError(where + ": expected an array");
    std::string body = v.substr(1, v.size() - 2);
    std::vector<double> vals;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t;
        for (char ch : item)
            if (ch != '[' && ch != ']') t += ch;  // tolerate nested rows for phi
        if (!trim(t).empty()) vals.push_back(parse_real(t, where));
    }
    if (vals.size() != f.n)
        throw ParseError(where + ": expected " + std::to_string(f.n) + " values, got " + std::to_string(vals.size()));
    for (std::size_t i = 0; i < f.n; ++i) f.real[i] = vals[i];
}

Field* find_field(std::vector<Field>& fs, const std::string& section, const std::string& key) {
    for (auto& f : fs)
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v, const std::string& where) {
    std::string t = trim(v);
    if (t.size() < 2 || t.front() != '"' || t.back() != '"') throw ParseError(where + ": expected a quoted string");
    return t.substr(1, t.size() - 2);
}

}  // namespace

ModelConfig parse_config(const std::string& text) {
    struct Entry {
        std::string section, key, value;
        int line;
    };
    std::vector<Entry> entries;
    std::string base;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string l = trim(strip_comment(line));
        if (l.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (l.front() == '[') {
            if (l.back() != ']') throw ParseError(where + ": unterminated section header");
            section = trim(l.substr(1, l.size() - 2));
            if (section.empty()) throw ParseError(where + ": empty section name");
            continue;
        }
        auto eq = l.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
        std::string key = trim(l.substr(0, eq));
        std::string value = trim(l.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(where + ": expected key = value");
        if (section.empty() && key == "base") {
            base = unquote(value, where);
            continue;
        }
        if (section.empty()) throw ParseError(where + ": key '" + key + "' outside any section");
        entries.push_back({section, key, value, lineno});
    }
    if (base.empty()) throw ParseError("missing top-level base = \"<variant>\"");

    ModelConfig c;
    try {
        c = default_config(base);
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
    auto fs = fields(c);
    for (const auto& e : entries) {
        const std::string where = "line " + std::to_string(e.line);
        Field* f = find_field(fs, e.section, e.key);
        if (!f) throw ParseError(where + ": unknown key '" + e.section + "." + e.key + "'");
        assign(*f, e.value, where);
    }
    validate(c);
    return c;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const ModelConfig& cfg) {
    ModelConfig c = cfg;
    auto fs = fields(c);
    std::ostringstream out;
    out << "base = \"" << c.variant << "\"\n";
    std::string section;
    for (const auto& f : fs) {
        if (f.section != section) {
            section = f.section;
            out << "\n[" << section << "]\n";
        }
        out << f.key << " = ";
        if (f.flag) out << (*f.flag ? "true" : "false");
        else if (f.integer) out << *f.integer;
        else if (f.n == 1) out << fmt_real(*f.real);
        else {
            out << "[";
            for (std::size_t i = 0; i < f.n; ++i) out << (i ? ", " : "") << fmt_real(f.real[i]);
            out << "]";
        }
        out << "\n";
    }
    return out.str();
}

bool operator==(const ModelConfig& a, const ModelConfig& b) { return serialize(a) == serialize(b); }

std::uint64_t config_hash(const ModelConfig& c) {
    // FNV-1a over the canonical text; the variant label is excluded so only content matters
    std::string s = serialize(c);
    s = s.substr(s.find('\n') + 1);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> sweepable_keys() {
    return {"eps_I", "eps_c", "beta_annual", "discount_rate", "omega_c_services", "omega_I_services",
            "theta_assignment", "<section>.<key>"};
}

void set_param(ModelConfig& c, const std::string& key, const std::string& value) {
    static const std::map<std::string, std::string> alias{
        {"eps_I", "technology.eps_I"},
        {"eps_c", "preference.eps_c"},
        {"beta_annual", "preference.beta_annual"},
        {"omega_c_services", "preference.omega_c_services"},
        {"omega_I_services", "technology.omega_I_services"},
    };
    if (key == "theta_assignment") {
        set_thetas(c, trim(value));
        return;
    }
    if (key == "discount_rate") {
        // pure time preference rate; 0.015 maps to the benchmark beta of 0.985
        c.preference.beta_annual = 1.0 - parse_real(value, key);
        return;
    }
    std::string full = key;
    if (auto it = alias.find(key); it != alias.end()) full = it->second;
    auto dot = full.rfind('.');
    auto fs = fields(c);
    Field* f = dot == std::string::npos ? nullptr : find_field(fs, full.substr(0, dot), full.substr(dot + 1));
    if (!f) {
        std::string msg = "unknown parameter '" + key + "'; sweepable keys:";
        for (const auto& k : sweepable_keys()) msg += " " + k;
        throw ValidationError(msg);
    }
    assign(*f, value, key);
}

// ---- validation ----

namespace {
void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what + " violated");
}
bool open01(double x) { return x > 0.0 && x < 1.0; }
}  // namespace

void validate(const ModelConfig& c) {
    const auto& p = c.preference;
    require(p.beta_annual > 0 && p.beta_annual < 1, "0 < beta_annual < 1");
    require(p.sigma > 0 && p.sigma != 1.0, "sigma > 0, sigma != 1");
    require(open01(p.omega_c_services), "0 < omega_c_services < 1");
    require(p.eps_c > 0 && p.eps_c != 1.0, "eps_c > 0, eps_c != 1");

    for (const auto& s : c.sectors) {
        require(s.A0 > 0, "A0 > 0");
        require(s.gamma >= 0, "gamma >= 0");
        require(s.theta >= 0, "theta >= 0");
    }

    const auto& t = c.technology;
    require(t.alpha + t.nu < 1, "alpha + nu < 1");
    require(open01(t.alpha) && open01(t.nu) && open01(t.alpha_E), "shares in (0,1)");
    require(open01(t.omega_I_services), "0 < omega_I_services < 1");
    require(t.A_E0 > 0, "A_E0 > 0");
    require(t.A_I0 > 0, "A_I0 > 0");
    require(t.eps_I > 0 && t.eps_I != 1.0, "eps_I > 0, eps_I != 1");
    require(t.delta_annual >= 0 && t.delta_annual < 1, "0 <= delta_annual < 1");

    const auto& cl = c.climate;
    for (int j = 0; j < 3; ++j) {
        double col = 0;
        for (int i = 0; i < 3; ++i) {
            require(cl.phi[i][j] >= 0, "phi entries >= 0");
            col += cl.phi[i][j];
        }
        require(std::abs(col - 1.0) < 1e-12, "phi column sums equal 1");
    }
    require(cl.kappa > 0, "kappa > 0");
    require(cl.M_preind > 0, "M_preind > 0");
    require(cl.zeta1 > 0 && cl.zeta2 > 0 && cl.zeta3 >= 0, "zeta1, zeta2 > 0 and zeta3 >= 0");
    require(cl.zeta4 > 0 && cl.zeta4 <= 1, "0 < zeta4 <= 1");
    require(cl.land_decay >= 0 && cl.land_decay <= 1, "0 <= land_decay <= 1");
    require(cl.E_land_0 >= 0, "E_land_0 >= 0");
    require(cl.co2_per_c > 0, "co2_per_c > 0");

    const auto& a = c.abatement;
    require(a.a_bar > 0, "a_bar > 0");
    require(a.b2 > 0, "b2 > 0");
    require(a.backstop_0 > 0, "backstop_0 > 0");
    require(a.backstop_decline > 0 && a.backstop_decline < 1, "0 < backstop_decline < 1");
    require(a.time_unit > 0, "abatement time_unit > 0");
    for (int k = 0; k < c.paths.horizon; ++k) {
        double tl = (k - a.time_origin) / a.time_unit;
        require(a.a_coefs[0] + a.a_coefs[1] * tl > 0, "a_t > 0 over the horizon");
    }

    const auto& x = c.paths;
    require(x.L0 > 0, "L0 > 0");
    require(x.L_asym >= x.L0, "L_asym >= L0");
    require(x.period_years > 0, "period_years > 0");
    require(x.report_until > x.start_year, "report_until > start_year");
    require(x.forcing_ramp_until > x.start_year, "forcing_ramp_until > start_year");
    require(x.horizon * x.period_years >= (x.report_until - x.start_year) + 100.0,
            "horizon x period_years >= report span + 100 years");

    const auto& in = c.initial;
    require(in.K0 > 0 && in.T_lo0 == in.T_lo0 && in.T0 == in.T0, "initial stocks positive");
    for (double m : in.M0) require(m > 0, "initial reservoir stocks > 0");
    require(in.E0 > 0 && in.K1 > 0 && in.K2 > 0 && in.KE > 0 && in.L1 > 0 && in.L2 > 0 && in.LE > 0 && in.E1 > 0 &&
                in.E2 > 0,
            "initial allocations positive");
    auto close = [](double parts, double whole) { return std::abs(parts - whole) <= 1e-3 * whole; };
    require(close(in.K1 + in.K2 + in.KE, in.K0), "initial capital split sums to K0 within 0.1%");
    require(close(in.L1 + in.L2 + in.LE, x.L0), "initial labor split sums to L0 within 0.1%");
    require(close(in.E1 + in.E2, in.E0), "initial energy split sums to E0 within 0.1%");

    const auto& s = c.solver;
    require(s.s_lo >= 0 && s.s_lo < s.s_hi && s.s_hi <= 1, "0 <= s_lo < s_hi <= 1");
    require(s.s_init >= s.s_lo && s.s_init <= s.s_hi, "s_lo <= s_init <= s_hi");
    require(s.terminal_fixed >= 0 && s.terminal_fixed < x.horizon, "0 <= terminal_fixed < horizon");
    require(s.terminal_anchor >= 0 && s.terminal_anchor < x.horizon - s.terminal_fixed,
            "terminal_anchor < horizon - terminal_fixed");
    require(s.mu_ramp_periods >= 1, "mu_ramp_periods >= 1");
    require(s.max_iter > 0 && s.kkt_tol > 0, "positive solver limits");
}

}  // namespace twosec
