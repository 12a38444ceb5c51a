#include "levcool/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "levcool/darkmode.hpp"
#include "levcool/error.hpp"
#include "levcool/steady.hpp"

namespace levcool {
namespace {

bool harness_key(std::string_view k) { return k == "axis1" || k == "axis2" || k == "output"; }

SweepAxis parse_axis(const ConfigEntry& e)
{
    std::istringstream in(e.value);
    std::vector<std::string> t;
    for (std::string s; in >> s;)
        t.push_back(s);
    if (t.size() != 4 && t.size() != 5)
        throw ConfigError(ConfigErrorKind::parse_error, e.key, e.line,
                          "expected '" + e.key + " = key start stop count [unit]'");
    SweepAxis a;
    a.key = t[0];
    double v[3];
    for (int i = 0; i < 3; ++i) {
        const std::string& s = t[i + 1];
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v[i]);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v[i]))
            throw ConfigError(ConfigErrorKind::invalid_value, e.key, e.line, "'" + s + "' is not a finite number");
    }
    a.start = v[0];
    a.stop = v[1];
    if (v[2] != std::floor(v[2]) || v[2] < 1.0 || v[2] > 1e6)
        throw ConfigError(ConfigErrorKind::invalid_value, e.key, e.line, "axis count must be an integer");
    a.count = static_cast<int>(v[2]);
    if (a.count < 2 && a.start != a.stop)
        throw ConfigError(ConfigErrorKind::invalid_value, e.key, e.line,
                          "axis count must be at least 2 unless start equals stop");
    if (t.size() == 5)
        a.unit = t[4];
    return a;
}

std::string format(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Mechanical model and the hybrid description of its dark-mode candidates.
struct Prepared {
    LinearModel model;
    std::optional<PhaseSpaceTransform> x_sector, z_sector;
};

Prepared prepare(const ThreeModeParams& p, const BuildOptions& opts = {})
{
    Prepared out{build_three_mode(p, opts), {}, {}};
    if (p.g1 != 0.0 || p.g2 != 0.0)
        out.x_sector = phase_space_transform(hybridize_two_mode(p.omega1, p.omega2, p.g1, p.g2, p.g_x));
    return out;
}

Prepared prepare(const FiveModeParams& p, const BuildOptions& opts = {})
{
    Prepared out{build_five_mode(p, opts), {}, {}};
    const bool x = std::abs(p.g_tilde_x[0]) + std::abs(p.g_tilde_x[1]) > 0.0;
    const bool z = std::abs(p.g_tilde_z[0]) + std::abs(p.g_tilde_z[1]) > 0.0;
    if (x && z)
        out.x_sector = phase_space_transform(hybridize_five_mode(p));
    return out;
}

Prepared prepare(const PhysicalSetup& s)
{
    const DerivedParams d = derive_couplings(s.config);
    BuildOptions opts;
    opts.zpf = {d.x_zpf[0], d.x_zpf[1], d.z_zpf[0], d.z_zpf[1]};
    if (s.model == ModelKind::three_mode)
        return prepare(three_mode_from(d), opts);
    return prepare(solve_semiclassical(semiclassical_inputs(d)).params, opts);
}

}  // namespace

double SweepAxis::value(int i) const
{
    if (count <= 1)
        return start;
    if (i == count - 1)
        return stop;
    return start + (stop - start) * i / (count - 1);
}

std::string SweepSpec::mode() const
{
    const ConfigEntry* e = fixed.find("mode");
    return e ? e->value : std::string();
}

std::size_t SweepSpec::size() const
{
    std::size_t n = 1;
    for (const SweepAxis& a : axes)
        n *= static_cast<std::size_t>(a.count);
    return n;
}

SweepSpec parse_sweep(std::string_view text)
{
    const RawConfig raw = parse_config(text);
    SweepSpec spec;
    for (const ConfigEntry& e : raw.entries) {
        if (!harness_key(e.key)) {
            spec.fixed.entries.push_back(e);
            continue;
        }
        if (e.key == "output")
            spec.output = e.value;
    }
    const ConfigEntry* a1 = raw.find("axis1");
    const ConfigEntry* a2 = raw.find("axis2");
    if (a1 == nullptr)
        throw ConfigError(ConfigErrorKind::missing_key, "axis1", a2 ? a2->line : 0, "missing key 'axis1'");
    if (spec.fixed.find("mode") == nullptr)
        throw ConfigError(ConfigErrorKind::missing_key, "mode", 0, "missing mode");
    spec.axes.push_back(parse_axis(*a1));
    if (a2 != nullptr)
        spec.axes.push_back(parse_axis(*a2));
    const std::string mode = spec.mode();
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const ConfigEntry* e = i == 0 ? a1 : a2;
        if (!numeric_key(mode, spec.axes[i].key))
            throw ConfigError(ConfigErrorKind::unknown_key, spec.axes[i].key, e->line,
                              "'" + spec.axes[i].key + "' is not a numeric key of mode " + mode);
    }
    if (spec.axes.size() == 2 && spec.axes[0].key == spec.axes[1].key)
        throw ConfigError(ConfigErrorKind::invalid_value, "axis2", a2->line,
                          "axes must sweep distinct keys, both use '" + spec.axes[0].key + "'");
    return spec;
}

RawConfig grid_point(const SweepSpec& spec, std::size_t i, std::vector<double>* axis_values)
{
    RawConfig raw = spec.fixed;
    std::size_t stride = spec.size();
    for (const SweepAxis& a : spec.axes) {
        stride /= static_cast<std::size_t>(a.count);
        const int k = static_cast<int>((i / stride) % static_cast<std::size_t>(a.count));
        const double v = a.value(k);
        raw.set(a.key, format(v), a.unit);
        if (axis_values)
            axis_values->push_back(v);
    }
    return raw;
}

RunRecord evaluate(const ModelConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.inputs = cfg;
    try {
        const Prepared prep = std::visit([](const auto& c) { return prepare(c); }, cfg);
        const CoolingResult res = analyze(prep.model);
        rec.stable = res.stable;
        rec.marginal = res.marginal;
        rec.margin = res.margin;
        if (res.stable)
            for (std::size_t l = 0; l < res.n_bar.size(); ++l)
                rec.n_bar[l] = res.n_bar[l];
        if (prep.x_sector) {
            const auto m = dark_mode_measure(prep.model, *prep.x_sector);
            for (std::size_t s = 0; s < m.size() && s < 2; ++s)
                rec.dark_residual[s] = m[s];
        }
    }
    catch (const InvalidInput& e) {
        rec.failure = FailureKind::config;
        rec.error = e.what();
    }
    catch (const ConfigError& e) {
        rec.failure = FailureKind::config;
        rec.error = e.what();
    }
    catch (const std::exception& e) {
        rec.failure = FailureKind::numerical;
        rec.error = e.what();
    }
    rec.wall_time = seconds_since(t0);
    return rec;
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec, int workers)
{
    const std::size_t n = spec.size();
    std::vector<RunRecord> out(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            std::vector<double> axes;
            RunRecord rec;
            try {
                const RawConfig raw = grid_point(spec, i, &axes);
                rec = evaluate(interpret(raw));
            }
            catch (const ConfigError& e) {
                rec.failure = FailureKind::config;
                rec.error = e.what();
            }
            rec.axes = std::move(axes);
            out[i] = std::move(rec);
        }
    };
    const int n_threads = std::clamp(workers, 1, 256);
    if (n_threads == 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back(work);
    for (std::thread& t : pool)
        t.join();
    return out;
}

}  // namespace levcool
