#include "levcool/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "levcool/constants.hpp"
#include "levcool/error.hpp"

namespace levcool {
namespace {

using UnitTable = std::map<std::string, double, std::less<>>;

const UnitTable length_units{{"", 1.0}, {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
const UnitTable power_units{{"", 1.0}, {"W", 1.0}, {"mW", 1e-3}};
const UnitTable rate_units{{"", 1.0}, {"rad/s", 1.0}, {"Hz", 2.0 * si::pi}, {"kHz", 2e3 * si::pi},
                           {"MHz", 2e6 * si::pi}};
const UnitTable field_units{{"", 1.0}, {"V/m", 1.0}};
const UnitTable volume_units{{"", 1.0}, {"m^3", 1.0}, {"um^3", 1e-18}};
const UnitTable density_units{{"", 1.0}, {"kg/m^3", 1.0}};
const UnitTable plain_units{{"", 1.0}};

const std::vector<std::string_view> physical_keys{
    "mode",    "model",    "radius",   "density",  "eps_r",    "wavelength", "power1",   "power2",
    "na",      "separation", "x10",    "x20",      "waist",    "waist_convention", "eps_cav", "cavity_volume",
    "detuning", "kappa",   "gamma",    "gamma_1x", "gamma_2x", "gamma_1z",   "gamma_2z", "n_th",
    "n_th_1x", "n_th_2x",  "n_th_1z",  "n_th_2z"};
const std::vector<std::string_view> reduced3_keys{
    "mode", "omega1", "omega2", "g1", "g2", "g_x", "r1", "r2", "detuning", "kappa",
    "gamma", "gamma1", "gamma2", "n_th", "n_th1", "n_th2"};
const std::vector<std::string_view> reduced5_keys{
    "mode",     "omega1x",  "omega2x",  "omega1z",  "omega2z",  "g_x",       "g_z",       "g1x",
    "g2x",      "g1z",      "g2z",      "g1x_im",   "g2x_im",   "g1z_im",    "g2z_im",    "detuning",
    "kappa",    "gamma",    "gamma_1x", "gamma_2x", "gamma_1z", "gamma_2z",  "n_th",      "n_th_1x",
    "n_th_2x",  "n_th_1z",  "n_th_2z",  "r1",       "r2",       "a_mean_re", "a_mean_im", "q_mean_1x",
    "q_mean_2x", "q_mean_1z", "q_mean_2z"};
const std::vector<std::string_view> word_keys{"mode", "model", "waist_convention"};
const char* mode_suffix[4] = {"1x", "2x", "1z", "2z"};

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string t;
    while (in >> t)
        out.push_back(t);
    return out;
}

bool valid_key(std::string_view k)
{
    return !k.empty() && std::all_of(k.begin(), k.end(), [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
    });
}

const std::vector<std::string_view>* keys_for(std::string_view mode)
{
    if (mode == "physical")
        return &physical_keys;
    if (mode == "reduced3")
        return &reduced3_keys;
    if (mode == "reduced5")
        return &reduced5_keys;
    return nullptr;
}

std::string format(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Value of a numeric entry plus its unit token.
struct Quantity {
    double value;
    std::string unit;
};

class Reader {
public:
    explicit Reader(const RawConfig& raw) : raw_(raw) {}

    const ConfigEntry* get(std::string_view key) const { return raw_.find(key); }

    const ConfigEntry& require(std::string_view key) const
    {
        const ConfigEntry* e = get(key);
        if (e == nullptr)
            throw ConfigError(ConfigErrorKind::missing_key, std::string(key), 0,
                              "missing key '" + std::string(key) + "'");
        return *e;
    }

    static Quantity quantity(const ConfigEntry& e)
    {
        std::string num = e.value;
        std::string unit = e.unit;
        if (unit.empty()) {
            const auto t = tokens(e.value);
            if (t.empty() || t.size() > 2)
                throw ConfigError(ConfigErrorKind::parse_error, e.key, e.line,
                                  "expected a number and an optional unit for '" + e.key + "'");
            num = t[0];
            unit = t.size() == 2 ? t[1] : "";
        }
        double v = 0.0;
        const auto r = std::from_chars(num.data(), num.data() + num.size(), v);
        if (r.ec != std::errc() || r.ptr != num.data() + num.size() || !std::isfinite(v))
            throw ConfigError(ConfigErrorKind::invalid_value, e.key, e.line,
                              "'" + num + "' is not a finite number for '" + e.key + "'");
        return {v, unit};
    }

    static double scaled(const ConfigEntry& e, const UnitTable& units)
    {
        const Quantity q = quantity(e);
        const auto it = units.find(q.unit);
        if (it == units.end())
            throw ConfigError(ConfigErrorKind::unit_mismatch, e.key, e.line,
                              "unit '" + q.unit + "' not valid for '" + e.key + "'");
        return q.value * it->second;
    }

    double number(std::string_view key, const UnitTable& units) const { return scaled(require(key), units); }

    std::optional<double> optional(std::string_view key, const UnitTable& units) const
    {
        const ConfigEntry* e = get(key);
        if (e == nullptr)
            return std::nullopt;
        return scaled(*e, units);
    }

    std::string word(std::string_view key, std::initializer_list<std::string_view> allowed) const
    {
        const ConfigEntry& e = require(key);
        const std::string v(trim(e.value));
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            throw ConfigError(ConfigErrorKind::invalid_value, e.key, e.line,
                              "'" + v + "' is not a valid value for '" + e.key + "'");
        return v;
    }

    // Length that may also be given in multiples of the tweezer wavelength.
    std::optional<double> length(std::string_view key, double wavelength) const
    {
        const ConfigEntry* e = get(key);
        if (e == nullptr)
            return std::nullopt;
        const Quantity q = quantity(*e);
        if (q.unit == "lambda")
            return q.value * wavelength;
        return scaled(*e, length_units);
    }

    Rate rate(const ConfigEntry& e) const
    {
        const Quantity q = quantity(e);
        if (q.unit == "w1")
            return Rate::relative(q.value);
        return Rate::absolute(scaled(e, rate_units));
    }

    // Dimensionless rate of the dimensionless models; "w1" scales by the unit frequency.
    double reduced(const ConfigEntry& e, double omega1) const
    {
        const Quantity q = quantity(e);
        if (q.unit == "w1")
            return q.value * omega1;
        return scaled(e, plain_units);
    }

private:
    const RawConfig& raw_;
};

void check_keys(const RawConfig& raw, const std::vector<std::string_view>& allowed, std::string_view mode)
{
    for (const ConfigEntry& e : raw.entries)
        if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end())
            throw ConfigError(ConfigErrorKind::unknown_key, e.key, e.line,
                              "unknown key '" + e.key + "' for mode " + std::string(mode));
}

std::string mode_of(const RawConfig& raw)
{
    const ConfigEntry* e = raw.find("mode");
    if (e == nullptr)
        throw ConfigError(ConfigErrorKind::missing_key, "mode", 0, "missing mode");
    const std::string v(trim(e->value));
    if (keys_for(v) == nullptr)
        throw ConfigError(ConfigErrorKind::invalid_value, "mode", e->line,
                          "mode must be physical, reduced3 or reduced5, got '" + v + "'");
    return v;
}

// Per-mode value with a shared fallback key.
template <typename T, typename F>
T per_mode(const Reader& r, const std::string& shared, const std::string& specific, F convert)
{
    if (const ConfigEntry* e = r.get(specific))
        return convert(*e);
    if (const ConfigEntry* e = r.get(shared))
        return convert(*e);
    throw ConfigError(ConfigErrorKind::missing_key, shared, 0,
                      "missing key '" + shared + "' (or '" + specific + "')");
}

PhysicalSetup interpret_physical(const Reader& r)
{
    PhysicalSetup s;
    PhysicalConfig& c = s.config;
    if (r.get("model") != nullptr)
        s.model = r.word("model", {"three_mode", "five_mode"}) == "five_mode" ? ModelKind::five_mode
                                                                             : ModelKind::three_mode;
    c.radius = r.number("radius", length_units);
    c.density = r.number("density", density_units);
    c.eps_r = r.number("eps_r", plain_units);
    c.wavelength = r.number("wavelength", length_units);
    c.power = {r.number("power1", power_units), r.number("power2", power_units)};
    c.waist = r.optional("waist", length_units);
    if (r.get("waist_convention") != nullptr)
        c.waist_convention = r.word("waist_convention", {"diffraction", "calibrated"}) == "calibrated"
                                 ? WaistConvention::calibrated
                                 : WaistConvention::diffraction;
    if (c.waist)
        c.na = r.optional("na", plain_units).value_or(0.0);
    else
        c.na = r.number("na", plain_units);
    c.separation = *[&] {
        r.require("separation");
        return r.length("separation", c.wavelength);
    }();
    const auto x10 = r.length("x10", c.wavelength);
    const auto x20 = r.length("x20", c.wavelength);
    if (x10.has_value() != x20.has_value()) {
        const char* missing = x10 ? "x20" : "x10";
        throw ConfigError(ConfigErrorKind::missing_key, missing, 0,
                          std::string("missing key '") + missing + "' (x10 and x20 go together)");
    }
    if (x10)
        c.focus = std::array<double, 2>{*x10, *x20};
    c.detuning = r.rate(r.require("detuning"));
    c.kappa = r.rate(r.require("kappa"));
    c.eps_cav = r.optional("eps_cav", field_units);
    c.cavity_volume = r.optional("cavity_volume", volume_units);
    for (int l = 0; l < 4; ++l) {
        c.gamma[l] = per_mode<Rate>(r, "gamma", std::string("gamma_") + mode_suffix[l],
                                    [&](const ConfigEntry& e) { return r.rate(e); });
        c.n_th[l] = per_mode<double>(r, "n_th", std::string("n_th_") + mode_suffix[l],
                                     [](const ConfigEntry& e) { return Reader::scaled(e, plain_units); });
    }
    return s;
}

ThreeModeParams interpret_reduced3(const Reader& r)
{
    ThreeModeParams p;
    p.omega1 = r.optional("omega1", plain_units).value_or(1.0);
    auto red = [&](std::string_view k) { return r.reduced(r.require(k), p.omega1); };
    auto red_or = [&](std::string_view k, double d) {
        const ConfigEntry* e = r.get(k);
        return e ? r.reduced(*e, p.omega1) : d;
    };
    p.omega2 = red("omega2");
    p.g1 = red("g1");
    p.g2 = red("g2");
    p.g_x = red("g_x");
    p.r1 = red_or("r1", 0.0);
    p.r2 = red_or("r2", 0.0);
    p.detuning = red("detuning");
    p.kappa = red("kappa");
    auto rate = [&](const ConfigEntry& e) { return r.reduced(e, p.omega1); };
    auto plain = [](const ConfigEntry& e) { return Reader::scaled(e, plain_units); };
    p.gamma1 = per_mode<double>(r, "gamma", "gamma1", rate);
    p.gamma2 = per_mode<double>(r, "gamma", "gamma2", rate);
    p.n_th1 = per_mode<double>(r, "n_th", "n_th1", plain);
    p.n_th2 = per_mode<double>(r, "n_th", "n_th2", plain);
    return p;
}

FiveModeParams interpret_reduced5(const Reader& r)
{
    FiveModeParams p;
    const double w1 = r.optional("omega1x", plain_units).value_or(1.0);
    auto red = [&](std::string_view k) { return r.reduced(r.require(k), w1); };
    auto red_or = [&](std::string_view k, double d) {
        const ConfigEntry* e = r.get(k);
        return e ? r.reduced(*e, w1) : d;
    };
    auto plain_or = [&](std::string_view k, double d) { return r.optional(k, plain_units).value_or(d); };
    p.omega = {w1, red("omega2x"), red("omega1z"), red("omega2z")};
    p.g_x = red("g_x");
    p.g_z = red("g_z");
    p.g_tilde_x = {cplx(red("g1x"), red_or("g1x_im", 0.0)), cplx(red("g2x"), red_or("g2x_im", 0.0))};
    p.g_tilde_z = {cplx(red("g1z"), red_or("g1z_im", 0.0)), cplx(red("g2z"), red_or("g2z_im", 0.0))};
    p.detuning = red("detuning");
    p.kappa = red("kappa");
    auto rate = [&](const ConfigEntry& e) { return r.reduced(e, w1); };
    auto plain = [](const ConfigEntry& e) { return Reader::scaled(e, plain_units); };
    for (int l = 0; l < 4; ++l) {
        p.gamma[l] = per_mode<double>(r, "gamma", std::string("gamma_") + mode_suffix[l], rate);
        p.n_th[l] = per_mode<double>(r, "n_th", std::string("n_th_") + mode_suffix[l], plain);
        p.q_mean[l] = plain_or(std::string("q_mean_") + mode_suffix[l], 0.0);
    }
    p.r_tilde = {red_or("r1", 0.0), red_or("r2", 0.0)};
    p.a_mean = cplx(plain_or("a_mean_re", 0.0), plain_or("a_mean_im", 0.0));
    return p;
}

class Emitter {
public:
    void line(const std::string& key, const std::string& value) { out_ << key << " = " << value << '\n'; }
    void num(const std::string& key, double v, const std::string& unit = "")
    {
        line(key, unit.empty() ? format(v) : format(v) + " " + unit);
    }
    void rate(const std::string& key, const Rate& r)
    {
        num(key, r.value, r.unit == Rate::Unit::omega1 ? "w1" : "rad/s");
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

}  // namespace

std::string_view to_string(ConfigErrorKind kind)
{
    switch (kind) {
    case ConfigErrorKind::parse_error: return "parse_error";
    case ConfigErrorKind::unknown_key: return "unknown_key";
    case ConfigErrorKind::duplicate_key: return "duplicate_key";
    case ConfigErrorKind::missing_key: return "missing_key";
    case ConfigErrorKind::unit_mismatch: return "unit_mismatch";
    case ConfigErrorKind::invalid_value: return "invalid_value";
    }
    return "unknown";
}

ConfigError::ConfigError(ConfigErrorKind kind, std::string key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      kind_(kind),
      key_(std::move(key)),
      line_(line)
{
}

const ConfigEntry* RawConfig::find(std::string_view key) const
{
    for (const ConfigEntry& e : entries)
        if (e.key == key)
            return &e;
    return nullptr;
}

void RawConfig::set(const std::string& key, const std::string& value, const std::string& unit)
{
    for (ConfigEntry& e : entries)
        if (e.key == key) {
            e.value = value;
            e.unit = unit;
            return;
        }
    entries.push_back({key, value, unit, 0});
}

RawConfig parse_config(std::string_view text)
{
    RawConfig raw;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(ConfigErrorKind::parse_error, "", lineno, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!valid_key(key))
            throw ConfigError(ConfigErrorKind::parse_error, key, lineno, "malformed key '" + key + "'");
        if (value.empty())
            throw ConfigError(ConfigErrorKind::parse_error, key, lineno, "missing value for '" + key + "'");
        if (const ConfigEntry* prev = raw.find(key))
            throw ConfigError(ConfigErrorKind::duplicate_key, key, lineno,
                              "duplicate key '" + key + "' on lines " + std::to_string(prev->line) + " and " +
                                  std::to_string(lineno));
        raw.entries.push_back({key, value, "", lineno});
    }
    return raw;
}

bool numeric_key(std::string_view mode, std::string_view key)
{
    const auto* keys = keys_for(mode);
    if (keys == nullptr || std::find(keys->begin(), keys->end(), key) == keys->end())
        return false;
    return std::find(word_keys.begin(), word_keys.end(), key) == word_keys.end();
}

ModelConfig interpret(const RawConfig& raw)
{
    const std::string mode = mode_of(raw);
    check_keys(raw, *keys_for(mode), mode);
    for (const ConfigEntry& e : raw.entries)
        if (numeric_key(mode, e.key))
            Reader::quantity(e);
    const Reader r(raw);
    if (mode == "physical")
        return interpret_physical(r);
    if (mode == "reduced3")
        return interpret_reduced3(r);
    return interpret_reduced5(r);
}

ModelConfig load_config(std::string_view text) { return interpret(parse_config(text)); }

std::string emit_config(const ModelConfig& cfg)
{
    Emitter e;
    if (const auto* s = std::get_if<PhysicalSetup>(&cfg)) {
        const PhysicalConfig& c = s->config;
        e.line("mode", "physical");
        e.line("model", s->model == ModelKind::five_mode ? "five_mode" : "three_mode");
        e.num("radius", c.radius, "m");
        e.num("density", c.density, "kg/m^3");
        e.num("eps_r", c.eps_r);
        e.num("wavelength", c.wavelength, "m");
        e.num("power1", c.power[0], "W");
        e.num("power2", c.power[1], "W");
        e.num("na", c.na);
        e.num("separation", c.separation, "m");
        if (c.focus) {
            e.num("x10", (*c.focus)[0], "m");
            e.num("x20", (*c.focus)[1], "m");
        }
        if (c.waist)
            e.num("waist", *c.waist, "m");
        e.line("waist_convention", c.waist_convention == WaistConvention::calibrated ? "calibrated" : "diffraction");
        e.rate("detuning", c.detuning);
        if (c.eps_cav)
            e.num("eps_cav", *c.eps_cav, "V/m");
        if (c.cavity_volume)
            e.num("cavity_volume", *c.cavity_volume, "m^3");
        e.rate("kappa", c.kappa);
        for (int l = 0; l < 4; ++l)
            e.rate(std::string("gamma_") + mode_suffix[l], c.gamma[l]);
        for (int l = 0; l < 4; ++l)
            e.num(std::string("n_th_") + mode_suffix[l], c.n_th[l]);
    }
    else if (const auto* p = std::get_if<ThreeModeParams>(&cfg)) {
        e.line("mode", "reduced3");
        e.num("omega1", p->omega1);
        e.num("omega2", p->omega2);
        e.num("g1", p->g1);
        e.num("g2", p->g2);
        e.num("g_x", p->g_x);
        e.num("r1", p->r1);
        e.num("r2", p->r2);
        e.num("detuning", p->detuning);
        e.num("kappa", p->kappa);
        e.num("gamma1", p->gamma1);
        e.num("gamma2", p->gamma2);
        e.num("n_th1", p->n_th1);
        e.num("n_th2", p->n_th2);
    }
    else {
        const auto& f = std::get<FiveModeParams>(cfg);
        e.line("mode", "reduced5");
        e.num("omega1x", f.omega[0]);
        e.num("omega2x", f.omega[1]);
        e.num("omega1z", f.omega[2]);
        e.num("omega2z", f.omega[3]);
        e.num("g_x", f.g_x);
        e.num("g_z", f.g_z);
        e.num("g1x", f.g_tilde_x[0].real());
        e.num("g1x_im", f.g_tilde_x[0].imag());
        e.num("g2x", f.g_tilde_x[1].real());
        e.num("g2x_im", f.g_tilde_x[1].imag());
        e.num("g1z", f.g_tilde_z[0].real());
        e.num("g1z_im", f.g_tilde_z[0].imag());
        e.num("g2z", f.g_tilde_z[1].real());
        e.num("g2z_im", f.g_tilde_z[1].imag());
        e.num("detuning", f.detuning);
        e.num("kappa", f.kappa);
        for (int l = 0; l < 4; ++l)
            e.num(std::string("gamma_") + mode_suffix[l], f.gamma[l]);
        for (int l = 0; l < 4; ++l)
            e.num(std::string("n_th_") + mode_suffix[l], f.n_th[l]);
        e.num("r1", f.r_tilde[0]);
        e.num("r2", f.r_tilde[1]);
        e.num("a_mean_re", f.a_mean.real());
        e.num("a_mean_im", f.a_mean.imag());
        for (int l = 0; l < 4; ++l)
            e.num(std::string("q_mean_") + mode_suffix[l], f.q_mean[l]);
    }
    return e.str();
}

ForceScanSpec load_force_scan(std::string_view text)
{
    RawConfig raw = parse_config(text);
    const std::string mode = mode_of(raw);
    if (mode != "physical")
        throw ConfigError(ConfigErrorKind::invalid_value, "mode", raw.find("mode")->line,
                          "force scans need mode = physical");
    std::vector<std::string_view> allowed = physical_keys;
    for (std::string_view k : {"scan_start", "scan_stop", "scan_points"})
        allowed.push_back(k);
    check_keys(raw, allowed, mode);
    const Reader r(raw);

    PhysicalConfig c;
    c.radius = r.number("radius", length_units);
    c.eps_r = r.number("eps_r", plain_units);
    c.wavelength = r.number("wavelength", length_units);
    c.power = {r.number("power1", power_units), r.number("power2", power_units)};
    c.waist = r.optional("waist", length_units);
    if (r.get("waist_convention") != nullptr)
        c.waist_convention = r.word("waist_convention", {"diffraction", "calibrated"}) == "calibrated"
                                 ? WaistConvention::calibrated
                                 : WaistConvention::diffraction;
    c.na = c.waist ? r.optional("na", plain_units).value_or(0.0) : r.number("na", plain_units);

    auto bad = [](const char* key, const std::string& msg) {
        return ConfigError(ConfigErrorKind::invalid_value, key, 0, msg);
    };
    if (!(c.radius > 0.0))
        throw bad("radius", "radius must be positive");
    if (!(c.eps_r > 1.0))
        throw bad("eps_r", "eps_r must exceed 1");
    if (!(c.wavelength > 0.0) || c.radius > c.wavelength / 4.0)
        throw bad("wavelength", "wavelength must be positive and at least 4 radii");
    if (c.power[0] < 0.0 || c.power[1] < 0.0)
        throw bad("power1", "tweezer power must be non-negative");
    if (!c.waist && !(c.na > 0.0 && c.na <= 1.0))
        throw bad("na", "na must lie in (0, 1]");

    ForceScanSpec spec;
    const double w = tweezer_waist(c);
    spec.params.e10 = tweezer_field(c.power[0], w);
    spec.params.e20 = tweezer_field(c.power[1], w);
    spec.params.wavelength = c.wavelength;
    spec.params.alpha = polarizability(c.radius, c.eps_r);
    spec.start = r.optional("scan_start", plain_units).value_or(spec.start);
    spec.stop = r.optional("scan_stop", plain_units).value_or(spec.stop);
    const double pts = r.optional("scan_points", plain_units).value_or(spec.points);
    if (!(spec.start > 0.0) || !(spec.stop > spec.start))
        throw bad("scan_start", "scan range must be positive and increasing");
    if (pts < 2.0 || pts != std::floor(pts) || pts > 1e7)
        throw bad("scan_points", "scan_points must be an integer of at least 2");
    spec.points = static_cast<int>(pts);
    return spec;
}

}  // namespace levcool
