#include "rfl/reports.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "rfl/errors.hpp"

namespace rfl {

using nlohmann::ordered_json;

namespace {

// NaN and infinities have no JSON literal
ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json residual_json(const ResidualReport& r) {
    return {{"name", r.name},         {"max_norm", number(r.max_norm)}, {"l2_norm", number(r.l2_norm)},
            {"tolerance", r.tolerance}, {"verdict", r.verdict()},        {"truncated", r.truncated}};
}

ordered_json metadata(const RunOptions& opt) {
    return {{"tool", "rfl"}, {"schema", kScenarioSchema}, {"tolerance_scale", opt.tolerance_scale}};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
}

std::filesystem::path scenario_dir(const std::string& out, const std::string& name) {
    const std::filesystem::path dir = std::filesystem::path(out) / name;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string monitors_csv(const RunResult& r) {
    std::string s = "t,s_min,s_max,vol,int_s,int_ric_sq\n";
    for (const MonitorRow& m : r.monitors)
        s += format_number(m.t) + "," + format_number(m.s_min) + "," + format_number(m.s_max) + "," +
             format_number(m.vol) + "," + format_number(m.int_s) + "," + format_number(m.int_ric_sq) + "\n";
    return s;
}

std::string residuals_csv(const RunResult& r) {
    std::string s = "check,t,h,max_norm,l2_norm,tolerance,verdict\n";
    for (const ResidualRow& x : r.residuals)
        s += x.check + "," + format_number(x.t) + "," + format_number(x.h) + "," + format_number(x.max_norm) + "," +
             format_number(x.l2_norm) + "," + format_number(x.tolerance) + "," + x.verdict + "\n";
    return s;
}

std::string certificate_json(const Certificate& c) {
    ordered_json j;
    j["classification"] = c.classification;
    j["convention"] = c.convention;
    j["lambda"] = c.lambda;
    j["gradient"] = c.gradient;
    j["flags"] = {{"einstein", c.einstein},
                  {"trivial", c.trivial},
                  {"ricci_flat", c.ricci_flat},
                  {"tolerance", c.flag_tolerance}};
    j["truncated"] = c.truncated;
    j["residuals"] = ordered_json::array();
    for (const ResidualReport& r : c.residuals) j["residuals"].push_back(residual_json(r));
    j["hypotheses"] = ordered_json::array();
    for (const HypothesisEntry& h : c.hypotheses) {
        ordered_json e = {{"name", h.name}, {"value", number(h.value)}, {"sign", h.sign}, {"tolerance", h.tolerance}};
        if (h.truncated) e["truncated"] = true;
        if (!h.note.empty()) e["note"] = h.note;
        j["hypotheses"].push_back(e);
    }
    j["verdicts"] = c.verdicts;
    j["undecidable"] = c.undecidable;
    j["pass"] = c.pass();
    return j.dump(2) + "\n";
}

std::string summary_json(const RunResult& r, const RunOptions& opt) {
    ordered_json j;
    j["schema"] = kScenarioSchema;
    j["scenario"] = r.scenario;
    j["mode"] = "run";
    j["target"] = r.target;
    j["grid"] = {{"nodes", r.nodes}, {"h", r.h}};
    j["pass"] = r.pass();
    j["exit_code"] = r.exit_code();
    j["checks"] = ordered_json::array();
    for (const CheckResult& c : r.checks) {
        ordered_json e = {{"name", c.name}};
        if (c.expect.empty()) {
            e["value"] = number(c.value);
            e["tolerance"] = c.tolerance;
        } else {
            e["label"] = c.label;
            e["expect"] = c.expect;
        }
        e["verdict"] = c.verdict;
        if (!c.detail.empty()) e["detail"] = c.detail;
        j["checks"].push_back(e);
    }
    if (r.certificate) j["classification"] = r.certificate->classification;
    j["metadata"] = metadata(opt);
    return j.dump(2) + "\n";
}

std::string ladder_csv(const LadderResult& r) {
    std::string s = "check,grid,h,value\n";
    for (const LadderEntry& e : r.entries)
        for (std::size_t i = 0; i < r.grids.size(); ++i)
            s += e.name + "," + std::to_string(r.grids[i]) + "," + format_number(r.h[i]) + "," + format_number(e.values[i]) + "\n";
    return s;
}

std::string ladder_json(const LadderResult& r, const RunOptions& opt) {
    ordered_json j;
    j["schema"] = kScenarioSchema;
    j["scenario"] = r.scenario;
    j["mode"] = "ladder";
    j["grids"] = r.grids;
    ordered_json hs = ordered_json::array();
    for (double h : r.h) hs.push_back(h);
    j["h"] = hs;
    j["pass"] = r.pass();
    j["exit_code"] = r.exit_code();
    j["entries"] = ordered_json::array();
    for (const LadderEntry& e : r.entries) {
        ordered_json v = ordered_json::array();
        for (double x : e.values) v.push_back(number(x));
        ordered_json x = {{"name", e.name},        {"values", v},
                          {"slope", number(e.slope)}, {"min_order", e.min_order},
                          {"finest", number(e.finest)}, {"tolerance", e.tolerance},
                          {"finest_pass", e.finest_pass}, {"verdict", e.verdict}};
        if (!e.tag.empty()) x["tag"] = e.tag;
        j["entries"].push_back(x);
    }
    j["metadata"] = metadata(opt);
    return j.dump(2) + "\n";
}

std::string write_run_reports(const RunResult& r, const RunOptions& opt, const std::string& out) {
    const auto dir = scenario_dir(out, r.scenario);
    write_file(dir / "monitors.csv", monitors_csv(r));
    write_file(dir / "residuals.csv", residuals_csv(r));
    write_file(dir / "summary.json", summary_json(r, opt));
    if (r.certificate) write_file(dir / "certificate.json", certificate_json(*r.certificate));
    return dir.string();
}

std::string write_ladder_reports(const LadderResult& r, const RunOptions& opt, const std::string& out) {
    const auto dir = scenario_dir(out, r.scenario);
    write_file(dir / "ladder.csv", ladder_csv(r));
    write_file(dir / "ladder.json", ladder_json(r, opt));
    return dir.string();
}

} // namespace rfl
