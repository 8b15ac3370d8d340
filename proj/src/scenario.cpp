#include "rfl/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "rfl/errors.hpp"
#include "rfl/expression.hpp"
#include "rfl/runner.hpp"

namespace rfl {

using nlohmann::json;

// -- positions ------------------------------------------------------------------

namespace {

std::string pointer_escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

// Walks text already accepted by the JSON parser, so it never has to report errors.
struct Walker {
    const std::string& s;
    std::map<std::string, SourcePos>& out;
    std::size_t i = 0;
    int line = 1, col = 1;

    char peek() const { return i < s.size() ? s[i] : '\0'; }
    void adv() {
        if (i >= s.size()) return;
        if (s[i] == '\n') {
            ++line;
            col = 1;
        } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
            ++col;
        }
        ++i;
    }
    void ws() {
        while (i < s.size() && std::strchr(" \t\r\n", s[i]) && s[i] != '\0') adv();
    }
    std::string str() {
        adv();
        std::string r;
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\\') adv();
            r += s[i];
            adv();
        }
        adv();
        return r;
    }
    void value(const std::string& ptr) {
        ws();
        out[ptr] = {line, col};
        const char c = peek();
        if (c == '{') {
            adv();
            ws();
            if (peek() == '}') return adv();
            for (;;) {
                ws();
                const std::string k = str();
                ws();
                adv();  // ':'
                value(ptr + "/" + pointer_escape(k));
                ws();
                if (peek() == ',') {
                    adv();
                    continue;
                }
                return adv();
            }
        }
        if (c == '[') {
            adv();
            ws();
            if (peek() == ']') return adv();
            for (int n = 0;; ++n) {
                value(ptr + "/" + std::to_string(n));
                ws();
                if (peek() == ',') {
                    adv();
                    continue;
                }
                return adv();
            }
        }
        if (c == '"') {
            str();
            return;
        }
        while (i < s.size() && !std::strchr(",]} \t\r\n", s[i])) adv();
    }
};

} // namespace

JsonLocator::JsonLocator(const std::string& text) {
    Walker w{text, pos_};
    w.value("");
}

SourcePos JsonLocator::at(const std::string& pointer) const {
    auto it = pos_.find(pointer);
    return it == pos_.end() ? SourcePos{} : it->second;
}

SourcePos JsonLocator::of_offset(const std::string& text, std::size_t offset) {
    SourcePos p;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++p.line;
            p.col = 1;
        } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
            ++p.col;
        }
    }
    return p;
}

// -- enums ----------------------------------------------------------------------

const char* to_string(GridKind k) noexcept {
    switch (k) {
        case GridKind::torus: return "torus";
        case GridKind::box: return "box";
        case GridKind::sphere_patch: return "sphere_patch";
        case GridKind::reduction: return "reduction";
    }
    return "?";
}

const char* to_string(FieldSource s) noexcept {
    switch (s) {
        case FieldSource::family: return "family";
        case FieldSource::potential: return "potential";
        case FieldSource::field: return "field";
        case FieldSource::random_field: return "random_field";
        case FieldSource::random_potential: return "random_potential";
    }
    return "?";
}

// -- grid -------------------------------------------------------------------------

GridSpec GridSpec::resized(int n) const {
    GridSpec g = *this;
    for (int& v : g.nodes) v = n;
    return g;
}

std::shared_ptr<const ChartGrid> GridSpec::build(const FamilySpec& family) const {
    const int d = static_cast<int>(nodes.size());
    switch (kind) {
        case GridKind::torus: {
            std::vector<double> lo = lower.empty() ? std::vector<double>(d, 0.0) : lower;
            std::vector<double> hi = upper.empty() ? std::vector<double>(d, 2.0 * std::numbers::pi) : upper;
            return std::make_shared<const ChartGrid>(ChartGrid::torus(nodes, lo, hi));
        }
        case GridKind::box: {
            std::vector<double> lo = lower.empty() ? std::vector<double>(d, -family.truncation) : lower;
            std::vector<double> hi = upper.empty() ? std::vector<double>(d, family.truncation) : upper;
            return std::make_shared<const ChartGrid>(ChartGrid::box(nodes, lo, hi));
        }
        case GridKind::sphere_patch: {
            const int n = nodes.at(0);
            return std::make_shared<const ChartGrid>(
                ChartGrid({n + 1, 2 * n}, {(std::numbers::pi - 2.0 * margin) / n, std::numbers::pi / n}, {false, true},
                          {margin, 0.0}));
        }
        case GridKind::reduction: break;
    }
    throw ConfigError("reduction grids have no lattice");
}

// -- reader -----------------------------------------------------------------------

namespace {

struct Context {
    std::string file;
    JsonLocator loc;
};

class Node {
public:
    Node(const json& j, std::string ptr, const Context& ctx) : j_(j), ptr_(std::move(ptr)), ctx_(ctx) {}

    const json& raw() const { return j_; }
    const std::string& pointer() const { return ptr_; }
    SourcePos pos() const { return ctx_.loc.at(ptr_); }
    std::string where() const { return ptr_.empty() ? "scenario" : "'" + ptr_ + "'"; }

    [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(ctx_.file, pos(), msg); }

    void require_object() const {
        if (!j_.is_object()) fail(where() + " must be an object");
    }
    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
    Node at(const char* key) const {
        require_object();
        if (!j_.contains(key)) fail("missing required key '" + std::string(key) + "' in " + where());
        return Node(j_.at(key), ptr_ + "/" + pointer_escape(key), ctx_);
    }
    std::optional<Node> opt(const char* key) const {
        if (!has(key)) return std::nullopt;
        return at(key);
    }
    void allow_only(std::initializer_list<const char*> keys) const {
        require_object();
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool ok = false;
            for (const char* k : keys) ok = ok || it.key() == k;
            if (!ok) Node(it.value(), ptr_ + "/" + pointer_escape(it.key()), ctx_).fail("unknown key '" + it.key() + "'");
        }
    }

    double number() const {
        if (!j_.is_number()) fail(where() + " must be a number");
        return j_.get<double>();
    }
    int integer() const {
        if (!j_.is_number_integer()) fail(where() + " must be an integer");
        return j_.get<int>();
    }
    std::string string() const {
        if (!j_.is_string()) fail(where() + " must be a string");
        return j_.get<std::string>();
    }
    std::vector<Node> items() const {
        if (!j_.is_array()) fail(where() + " must be an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], ptr_ + "/" + std::to_string(i), ctx_);
        return out;
    }
    std::vector<double> numbers() const {
        std::vector<double> v;
        for (const Node& n : items()) v.push_back(n.number());
        return v;
    }
    std::vector<int> integers() const {
        std::vector<int> v;
        for (const Node& n : items()) v.push_back(n.integer());
        return v;
    }

    double positive(const char* key, double fallback) const {
        if (!has(key)) return fallback;
        Node n = at(key);
        const double v = n.number();
        if (!(v > 0.0)) n.fail(n.where() + " must be > 0");
        return v;
    }

private:
    const json& j_;
    std::string ptr_;
    const Context& ctx_;
};

FamilySpec parse_family(const Node& n) {
    n.allow_only({"kind", "n", "u", "radius", "lambda", "truncation", "factors"});
    FamilySpec f;
    const Node kind = n.at("kind");
    try {
        f.kind = family_kind_from_string(kind.string());
    } catch (const ConfigError& e) {
        kind.fail(e.what());
    }
    if (auto v = n.opt("n")) f.n = v->integer();
    if (auto v = n.opt("u")) f.u_expr = v->string();
    if (auto v = n.opt("radius")) f.radius = v->number();
    if (auto v = n.opt("lambda")) f.lambda = v->number();
    if (auto v = n.opt("truncation")) f.truncation = v->number();
    if (auto v = n.opt("factors"))
        for (const Node& item : v->items()) f.factors.push_back(parse_family(item));
    try {
        f.validate();
    } catch (const ConfigError& e) {
        n.fail(e.what());
    }
    return f;
}

GridSpec parse_grid(const Node& n, const FamilySpec& family) {
    n.allow_only({"kind", "nodes", "lower", "upper", "margin", "fd_order"});
    GridSpec g;
    const Node kind = n.at("kind");
    const std::string k = kind.string();
    if (k == "torus") g.kind = GridKind::torus;
    else if (k == "box") g.kind = GridKind::box;
    else if (k == "sphere_patch") g.kind = GridKind::sphere_patch;
    else if (k == "reduction") g.kind = GridKind::reduction;
    else kind.fail("unknown grid kind '" + k + "' (torus, box, sphere_patch, reduction)");

    if (auto v = n.opt("fd_order")) {
        g.fd_order = v->integer();
        if (g.fd_order != 2 && g.fd_order != 4) v->fail("fd_order must be 2 or 4");
    }
    if (g.kind == GridKind::reduction) {
        if (family.kind != FamilyKind::round_sphere) kind.fail("reduction grids need a round_sphere family");
        if (n.has("nodes")) n.at("nodes").fail("reduction grids take no nodes");
        return g;
    }

    const Node nodes = n.at("nodes");
    const int d = g.kind == GridKind::sphere_patch ? 1 : family.dim();
    if (nodes.raw().is_number_integer()) g.nodes.assign(d, nodes.integer());
    else g.nodes = nodes.integers();
    if (static_cast<int>(g.nodes.size()) != d)
        nodes.fail("expected " + std::to_string(d) + " node counts, got " + std::to_string(g.nodes.size()));
    for (int v : g.nodes)
        if (v < 5) nodes.fail("every axis needs at least 5 nodes");

    if (g.kind == GridKind::sphere_patch) {
        if (family.kind != FamilyKind::round_sphere || family.n != 2) kind.fail("sphere_patch grids need a round_sphere family with n = 2");
        if (auto v = n.opt("margin")) {
            g.margin = v->number();
            if (!(g.margin > 0.0 && g.margin < 1.5)) v->fail("margin must lie in (0, 1.5)");
        }
        return g;
    }
    if (n.has("margin")) n.at("margin").fail("margin applies to sphere_patch grids only");
    for (const char* key : {"lower", "upper"})
        if (auto v = n.opt(key)) {
            auto& dst = std::string(key) == "lower" ? g.lower : g.upper;
            dst = v->numbers();
            if (static_cast<int>(dst.size()) != d) v->fail(std::string(key) + " needs " + std::to_string(d) + " entries");
        }
    if (g.lower.size() != g.upper.size() && !(g.lower.empty() || g.upper.empty()))
        n.fail("lower and upper must have the same length");
    const bool torus_family = family.kind == FamilyKind::flat_torus || family.kind == FamilyKind::conformal_torus ||
                              family.kind == FamilyKind::product;
    if (g.kind == GridKind::torus && !torus_family) kind.fail(std::string(to_string(family.kind)) + " needs a box grid");
    if (g.kind == GridKind::box && torus_family) kind.fail(std::string(to_string(family.kind)) + " needs a torus grid");
    return g;
}

FlowSection parse_flow(const Node& n) {
    n.allow_only({"scheme", "dt", "dt_h2", "t_end", "store_stride", "cfl"});
    FlowSection f;
    if (auto v = n.opt("scheme")) {
        try {
            f.scheme = scheme_from_string(v->string());
        } catch (const ConfigError& e) {
            v->fail(e.what());
        }
    }
    f.dt = n.positive("dt", 0.0);
    f.dt_h2 = n.positive("dt_h2", 0.0);
    if ((f.dt > 0.0) == (f.dt_h2 > 0.0)) n.fail("flow needs exactly one of 'dt' and 'dt_h2'");
    n.at("t_end");
    f.t_end = n.positive("t_end", 0.0);
    if (auto v = n.opt("store_stride")) {
        f.store_stride = v->integer();
        if (f.store_stride < 1) v->fail("store_stride must be >= 1");
    }
    f.cfl = n.positive("cfl", f.cfl);
    return f;
}

SolitonSection parse_soliton(const Node& n, const FamilySpec& family, const GridSpec& grid) {
    n.allow_only({"source", "lambda", "potential", "field", "max_mode", "amplitude", "tolerance", "flag_tolerance", "band"});
    SolitonSection s;
    const Node src = n.at("source");
    const std::string name = src.string();
    bool known = false;
    for (FieldSource f : {FieldSource::family, FieldSource::potential, FieldSource::field, FieldSource::random_field,
                          FieldSource::random_potential})
        if (name == to_string(f)) {
            s.source = f;
            known = true;
        }
    if (!known) src.fail("unknown soliton source '" + name + "'");
    if (auto v = n.opt("lambda")) s.lambda = v->number();
    s.tolerance = n.positive("tolerance", s.tolerance);
    s.flag_tolerance = n.positive("flag_tolerance", s.flag_tolerance);
    s.amplitude = n.positive("amplitude", s.amplitude);
    if (auto v = n.opt("max_mode")) {
        s.max_mode = v->integer();
        if (s.max_mode < 1) v->fail("max_mode must be >= 1");
    }
    if (auto v = n.opt("band")) {
        s.band = v->integer();
        if (s.band < 0) v->fail("band must be >= 0");
    }

    if (grid.kind == GridKind::reduction) {
        if (s.source != FieldSource::family) src.fail("reduction grids only certify the family (xi = 0)");
        if (!s.lambda) n.fail("missing required key 'lambda' in 'soliton' (round sphere certificate)");
        return s;
    }
    if (s.source == FieldSource::family) {
        if (family.kind != FamilyKind::gaussian_shrinker && family.kind != FamilyKind::cigar)
            src.fail(std::string(to_string(family.kind)) + " carries no soliton field; use potential or field");
        if (n.has("lambda")) n.at("lambda").fail("lambda comes from the family");
    } else if (!s.lambda) {
        n.fail("missing required key 'lambda' in 'soliton'");
    }
    if (s.source == FieldSource::potential) {
        const Node p = n.at("potential");
        s.potential = p.string();
        try {
            if (TrigExpression::parse(s.potential).arity() > family.dim()) p.fail("potential references a coordinate beyond the dimension");
        } catch (const ConfigError& e) {
            p.fail(e.what());
        }
    }
    if (s.source == FieldSource::field) {
        const Node f = n.at("field");
        for (const Node& item : f.items()) {
            s.field.push_back(item.string());
            try {
                TrigExpression::parse(s.field.back());
            } catch (const ConfigError& e) {
                item.fail(e.what());
            }
        }
        if (static_cast<int>(s.field.size()) != family.dim())
            f.fail("field needs " + std::to_string(family.dim()) + " components");
    }
    return s;
}

CheckSpec parse_check(const Node& n, unsigned targets) {
    CheckSpec c;
    c.pos = n.pos();
    if (n.raw().is_string()) {
        c.name = n.string();
    } else {
        n.allow_only({"name", "tolerance", "expect", "min_order", "floor"});
        c.name = n.at("name").string();
        if (n.has("tolerance")) c.tolerance = n.positive("tolerance", 0.0);
        if (auto v = n.opt("expect")) {
            if (v->raw().is_boolean()) c.expect = v->raw().get<bool>() ? "true" : "false";
            else c.expect = v->string();
        }
        if (n.has("min_order")) c.min_order = n.positive("min_order", 0.0);
        if (n.has("floor")) c.floor = n.positive("floor", 0.0);
    }
    const CheckInfo* info = find_check(c.name);
    if (!info) n.fail("unknown check '" + c.name + "' (see list-checks)");
    if (!(info->targets & targets)) n.fail("check '" + c.name + "' does not apply to this scenario");
    if (c.expect && !info->labelled) n.fail("check '" + c.name + "' takes a tolerance, not an expected label");
    if (info->labelled && !c.expect && !*info->default_expect) n.fail("check '" + c.name + "' needs an 'expect' value");
    return c;
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& file) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte just past the offending token
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        const auto cut = what.find("syntax error");
        throw ScenarioError(file, JsonLocator::of_offset(text, at), cut == std::string::npos ? what : what.substr(cut));
    }
    Context ctx{file, JsonLocator(text)};
    const Node n(root, "", ctx);
    n.allow_only({"schema", "name", "description", "seed", "family", "grid", "flow", "soliton", "checks", "ladder"});

    Scenario sc;
    const Node schema = n.at("schema");
    sc.schema = schema.string();
    if (sc.schema != kScenarioSchema) schema.fail("unsupported schema '" + sc.schema + "' (expected v1)");
    const Node name = n.at("name");
    sc.name = name.string();
    if (sc.name.empty()) name.fail("name must be nonempty");
    for (char c : sc.name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            name.fail("name may only contain letters, digits, '_' and '-'");
    if (auto v = n.opt("seed")) {
        if (!v->raw().is_number_unsigned()) v->fail("seed must be a nonnegative integer");
        sc.seed = v->raw().get<std::uint64_t>();
    }
    if (auto v = n.opt("description")) v->string();

    sc.family = parse_family(n.at("family"));
    sc.grid = parse_grid(n.at("grid"), sc.family);
    if (auto v = n.opt("flow")) sc.flow = parse_flow(*v);
    if (auto v = n.opt("soliton")) sc.soliton = parse_soliton(*v, sc.family, sc.grid);
    if (!sc.flow && !sc.soliton) n.fail("scenario needs a 'flow' or a 'soliton' section");
    if (sc.flow && sc.grid.kind == GridKind::reduction && sc.flow->dt_h2 > 0.0)
        n.at("flow").at("dt_h2").fail("dt_h2 needs a lattice grid; the reduction takes a fixed dt");
    if (sc.flow && sc.grid.kind == GridKind::sphere_patch)
        n.at("flow").fail("sphere_patch grids cannot be flowed (use a reduction grid)");

    const unsigned targets = scenario_targets(sc);
    const Node checks = n.at("checks");
    for (const Node& c : checks.items()) sc.checks.push_back(parse_check(c, targets));
    if (sc.checks.empty()) checks.fail("checks must list at least one check");
    for (std::size_t i = 0; i < sc.checks.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (sc.checks[i].name == sc.checks[j].name)
                throw ScenarioError(file, sc.checks[i].pos, "duplicate check '" + sc.checks[i].name + "'");

    if (auto v = n.opt("ladder")) {
        v->allow_only({"grids", "min_order", "floor"});
        if (auto g = v->opt("grids")) sc.ladder.grids = g->integers();
        sc.ladder.min_order = v->positive("min_order", sc.ladder.min_order);
        sc.ladder.floor = v->positive("floor", sc.ladder.floor);
    }
    sc.source = file;
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

} // namespace rfl
